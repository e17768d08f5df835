//! Gaussian integers `Z[i]`, the minus part of the group ring for cyclic
//! quartic extensions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `re + im·i`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Gaussian {
    pub re: BigInt,
    pub im: BigInt,
}

impl Gaussian {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        Gaussian {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        Gaussian::new(0, 0)
    }

    pub fn one() -> Self {
        Gaussian::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Gaussian::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Gaussian::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn neg(&self) -> Self {
        Gaussian::new(-&self.re, -&self.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Gaussian::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Nearest-integer division making `Z[i]` Euclidean: the remainder of
    /// `self - q·d` has norm at most half the norm of `d`.
    pub fn div_round(&self, d: &Self) -> Self {
        let n = d.norm();
        let num = self.mul(&d.conj());
        Gaussian::new(round_div(&num.re, &n), round_div(&num.im, &n))
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

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// The unique associate with `re > 0, im ≥ 0` (zero stays zero).
    pub fn canonical_associate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let i = Gaussian::new(0, 1);
        let mut cur = self.clone();
        for _ in 0..4 {
            if cur.re.is_positive() && !cur.im.is_negative() {
                return cur;
            }
            cur = cur.mul(&i);
        }
        unreachable!("some rotation lands in the closed first quadrant")
    }

    /// Valuation at the prime `(1+i)` above 2. `None` for zero.
    pub fn val_one_plus_i(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let p = Gaussian::new(1, 1);
        let mut x = self.clone();
        let mut v = 0;
        loop {
            if !x.rem(&p).is_zero() {
                return Some(v);
            }
            x = x.div_round(&p);
            v += 1;
        }
    }
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    let num: BigInt = a * 2 + b;
    num.div_floor(&(b * 2))
}
