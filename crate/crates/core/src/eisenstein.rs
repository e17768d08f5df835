//! Eisenstein integers `Z[ω]` with `ω² + ω + 1 = 0`, the quadratic
//! component of the maximal order in a sextic minus part. 2 is inert here,
//! which drives the uniqueness of the `κ` elements.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `a + b·ω`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Eisenstein {
    pub a: BigInt,
    pub b: BigInt,
}

impl Eisenstein {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Eisenstein {
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn zero() -> Self {
        Eisenstein::new(0, 0)
    }

    pub fn one() -> Self {
        Eisenstein::new(1, 0)
    }

    pub fn omega() -> Self {
        Eisenstein::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Eisenstein::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Eisenstein::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn neg(&self) -> Self {
        Eisenstein::new(-&self.a, -&self.b)
    }

    /// (a + bω)(c + dω) = ac - bd + (ad + bc - bd)ω
    pub fn mul(&self, o: &Self) -> Self {
        let ac = &self.a * &o.a;
        let bd = &self.b * &o.b;
        let ad = &self.a * &o.b;
        let bc = &self.b * &o.a;
        Eisenstein::new(ac - &bd, ad + bc - bd)
    }

    /// Complex conjugate: ω ↦ ω² = -1 - ω.
    pub fn conj(&self) -> Self {
        Eisenstein::new(&self.a - &self.b, -&self.b)
    }

    /// N(a + bω) = a² - ab + b²
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// The six units ±1, ±ω, ±ω².
    pub fn units() -> Vec<Eisenstein> {
        let w = Eisenstein::omega();
        let w2 = w.mul(&w);
        vec![
            Eisenstein::one(),
            w.clone(),
            w2.clone(),
            Eisenstein::one().neg(),
            w.neg(),
            w2.neg(),
        ]
    }

    pub fn div_round(&self, d: &Self) -> Self {
        let n = d.norm();
        let num = self.mul(&d.conj());
        Eisenstein::new(round_div(&num.a, &n), round_div(&num.b, &n))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.sub(&self.div_round(d).mul(d))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.canonical_associate()
    }

    /// Deterministic associate: lexicographically smallest `(a, b)` among
    /// the six unit multiples with `a > 0`, or `a = 0, b > 0`.
    pub fn canonical_associate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::units()
            .iter()
            .map(|u| self.mul(u))
            .filter(|x| x.a.is_positive() || (x.a.is_zero() && x.b.is_positive()))
            .min_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)))
            .expect("nonzero element has an associate with positive lead")
    }

    /// 2-adic valuation; 2 is inert so this is the valuation of the norm
    /// halved. `None` for zero.
    pub fn val_two(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let two = Eisenstein::new(2, 0);
        let mut x = self.clone();
        let mut v = 0;
        loop {
            if !x.rem(&two).is_zero() {
                return Some(v);
            }
            x = x.div_round(&two);
            v += 1;
        }
    }

    /// All elements with the given norm (exhaustive box search; norms are
    /// positive definite so the box is tight).
    pub fn with_norm(n: &BigInt) -> Vec<Eisenstein> {
        let mut out = Vec::new();
        if n.is_negative() {
            return out;
        }
        // a² - ab + b² = ((2a-b)² + 3b²)/4 ≥ max(a², b²)·1/4·... use |a|,|b| ≤ 2√(n/3)+1
        let bound = (n * 4i32 / 3i32).sqrt() + 1;
        let bound = i64::try_from(&bound).expect("norm bound fits i64");
        for a in -bound..=bound {
            for b in -bound..=bound {
                let e = Eisenstein::new(a, b);
                if &e.norm() == n {
                    out.push(e);
                }
            }
        }
        out
    }
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> Eisenstein {
        Eisenstein::new(a, b)
    }

    #[test]
    fn omega_cubes_to_one() {
        let w = Eisenstein::omega();
        assert_eq!(w.mul(&w).mul(&w), Eisenstein::one());
        assert_eq!(w.mul(&w), e(-1, -1));
    }

    #[test]
    fn norms() {
        assert_eq!(e(1, 2).norm(), BigInt::from(3));
        assert_eq!(e(2, 1).norm(), BigInt::from(3));
        assert_eq!(e(1, -1).norm(), BigInt::from(3));
        assert_eq!(e(2, 0).norm(), BigInt::from(4));
        assert_eq!(e(1, 1).norm(), BigInt::from(1));
    }

    #[test]
    fn euclidean_division() {
        let a = e(7, -3);
        let b = e(2, 1);
        let r = a.rem(&b);
        assert!(r.norm() < b.norm());
        assert_eq!(a.div_round(&b).mul(&b).add(&r), a);
    }

    #[test]
    fn two_is_inert() {
        // The only norm-4 elements are the associates of 2.
        let norm4 = Eisenstein::with_norm(&BigInt::from(4));
        assert_eq!(norm4.len(), 6);
        for x in norm4 {
            assert_eq!(x.canonical_associate(), e(2, 0).canonical_associate());
        }
        // No element of norm 2 exists.
        assert!(Eisenstein::with_norm(&BigInt::from(2)).is_empty());
    }

    #[test]
    fn gcd_and_canonical() {
        let d = e(3, 0).gcd(&e(1, 2)); // 3 = -ω²(1-ω)², 1+2ω has norm 3
        assert_eq!(d.norm(), BigInt::from(3));
        let c = e(-5, 2).canonical_associate();
        assert!(c.a.is_positive() || (c.a.is_zero() && c.b.is_positive()));
        assert_eq!(c.norm(), e(-5, 2).norm());
    }

    #[test]
    fn val_two_examples() {
        assert_eq!(e(2, 0).val_two(), Some(1));
        assert_eq!(e(4, 2).val_two(), Some(1));
        assert_eq!(e(4, 0).val_two(), Some(2));
        assert_eq!(e(1, 2).val_two(), Some(0));
    }
}
