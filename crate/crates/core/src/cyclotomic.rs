//! Exact arithmetic in cyclotomic fields `Q(ζ_n)`.
//!
//! Elements are stored by their coordinates in the power basis
//! `1, ζ, …, ζ^{φ(n)−1}`; products are polynomial products reduced modulo
//! the n-th cyclotomic polynomial. The power basis is an integral basis, so
//! integrality and p-integrality can be read off the coordinate
//! denominators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

/// Coefficients of the n-th cyclotomic polynomial, x^0 first, monic.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the cyclotomic polynomials of the proper divisors.
    let mut num = vec![BigInt::zero(); (n + 1) as usize];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    cache.lock().unwrap().insert(n, num.clone());
    num
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut num = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = num.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = num[k + dd].clone();
        quot[k] = c.clone();
        if c.is_zero() {
            continue;
        }
        for j in 0..=dd {
            let sub = &c * &den[j];
            num[k + j] -= sub;
        }
    }
    assert!(num.iter().all(|x| x.is_zero()), "non-exact division");
    quot
}

/// An element of `Q(ζ_n)` in the power basis of the n-th cyclotomic order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclotomicValue {
    pub conductor: u64,
    pub coords: Vec<BigRational>,
}

impl CyclotomicValue {
    pub fn zero(n: u64) -> Self {
        CyclotomicValue {
            conductor: n,
            coords: vec![BigRational::zero(); euler_phi(n) as usize],
        }
    }

    pub fn one(n: u64) -> Self {
        let mut v = Self::zero(n);
        v.coords[0] = BigRational::one();
        v
    }

    pub fn from_rational(n: u64, q: BigRational) -> Self {
        let mut v = Self::zero(n);
        v.coords[0] = q;
        v
    }

    /// ζ_n^k reduced into the power basis.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as u64;
        let phi = euler_phi(n) as usize;
        if (k as usize) < phi {
            let mut v = Self::zero(n);
            v.coords[k as usize] = BigRational::one();
            return v;
        }
        let modpoly = cyclotomic_polynomial(n);
        let mut cur = vec![BigRational::zero(); phi];
        cur[0] = BigRational::one();
        for _ in 0..k {
            cur = shift_reduce(&cur, &modpoly);
        }
        CyclotomicValue {
            conductor: n,
            coords: cur,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_part(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.conductor, other.conductor);
        CyclotomicValue {
            conductor: self.conductor,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicValue {
            conductor: self.conductor,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CyclotomicValue {
            conductor: self.conductor,
            coords: self.coords.iter().map(|a| a * q).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.conductor, other.conductor);
        let phi = self.coords.len();
        let modpoly = cyclotomic_polynomial(self.conductor);
        let mut prod = vec![BigRational::zero(); 2 * phi];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    let add = a * b;
                    prod[i + j] += add;
                }
            }
        }
        // Fold degree ≥ φ(n) terms back down.
        for k in (phi..2 * phi).rev() {
            if prod[k].is_zero() {
                continue;
            }
            let c = prod[k].clone();
            prod[k] = BigRational::zero();
            for j in 0..phi {
                let sub = &c * BigRational::from(modpoly[j].clone());
                prod[k - phi + j] -= sub;
            }
        }
        CyclotomicValue {
            conductor: self.conductor,
            coords: prod[..phi].to_vec(),
        }
    }

    /// Matrix of multiplication by `self` in the power basis (columns are
    /// the images of the basis).
    fn mul_matrix(&self) -> Vec<Vec<BigRational>> {
        let phi = self.coords.len();
        let mut cols = Vec::with_capacity(phi);
        let mut cur = self.coords.clone();
        cols.push(cur.clone());
        let modpoly = cyclotomic_polynomial(self.conductor);
        for _ in 1..phi {
            cur = shift_reduce(&cur, &modpoly);
            cols.push(cur.clone());
        }
        (0..phi)
            .map(|i| (0..phi).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// Field norm to `Q` as the determinant of the multiplication matrix.
    pub fn norm(&self) -> BigRational {
        crate::intmat::rat_det(&self.mul_matrix())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let inv = crate::intmat::rat_inverse(&self.mul_matrix())?;
        Some(CyclotomicValue {
            conductor: self.conductor,
            coords: inv.iter().map(|row| row[0].clone()).collect(),
        })
    }

    /// True if every coordinate is an integer (the power basis is an
    /// integral basis for cyclotomic fields).
    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// True if no coordinate denominator is divisible by `p`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coords.iter().all(|c| !(c.denom() % &p).is_zero())
    }

    /// A p-adic unit at every prime above `p`: both the element and its
    /// inverse are p-integral.
    pub fn is_p_unit(&self, p: u64) -> bool {
        if self.is_zero() {
            return false;
        }
        self.is_p_integral(p)
            && self
                .inverse()
                .map(|inv| inv.is_p_integral(p))
                .unwrap_or(false)
    }
}

/// Multiply a power-basis coordinate vector by ζ and reduce.
fn shift_reduce(coords: &[BigRational], modpoly: &[BigInt]) -> Vec<BigRational> {
    let phi = coords.len();
    let mut out = vec![BigRational::zero(); phi];
    for i in 0..phi - 1 {
        out[i + 1] = coords[i].clone();
    }
    let top = coords[phi - 1].clone();
    if !top.is_zero() {
        for (j, slot) in out.iter_mut().enumerate() {
            let sub = &top * BigRational::from(modpoly[j].clone());
            *slot -= sub;
        }
    }
    out
}
