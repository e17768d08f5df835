//! The rational group ring `Q[G]` of a cyclic group `G = ⟨γ⟩` of order
//! `2m`, its minus part `e⁻·Q[G]` where `e⁻ = (1−τ)/2` and `τ = γ^m`, odd
//! characters, and the rational idempotent decomposition
//! `Q[G]⁻ ≅ ⊕_ξ Q(ξ)` over the odd `Z`-characters `ξ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::{euler_phi, CyclotomicValue};
use crate::error::Error;
use crate::Result;

/// A cyclic Galois group of order `2m` with distinguished generator γ and
/// complex conjugation `τ = γ^m`; `d` is the degree of the base field over
/// the rationals, carried along for the bound checks.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupSpec {
    pub two_m: usize,
    pub d: usize,
}

impl GroupSpec {
    pub fn new(two_m: usize, d: usize) -> Result<Self> {
        if two_m == 0 || two_m % 2 != 0 {
            return Err(Error::inconsistent(
                "group.two_m",
                format!("group order must be even and positive, got {two_m}"),
            ));
        }
        Ok(GroupSpec { two_m, d })
    }

    pub fn m(&self) -> usize {
        self.two_m / 2
    }
}

/// Element of `Q[G]`, coefficient `coeffs[j]` on `γ^j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupRingElement {
    pub two_m: usize,
    pub coeffs: Vec<BigRational>,
}

impl GroupRingElement {
    pub fn zero(two_m: usize) -> Self {
        GroupRingElement {
            two_m,
            coeffs: vec![BigRational::zero(); two_m],
        }
    }

    pub fn one(two_m: usize) -> Self {
        Self::gamma_power(two_m, 0)
    }

    pub fn gamma_power(two_m: usize, j: i64) -> Self {
        let mut x = Self::zero(two_m);
        x.coeffs[j.rem_euclid(two_m as i64) as usize] = BigRational::one();
        x
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        GroupRingElement {
            two_m: coeffs.len(),
            coeffs,
        }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.two_m, o.two_m);
        Self::from_coeffs(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * q).collect())
    }

    /// Cyclic convolution.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.two_m, o.two_m);
        let n = self.two_m;
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    let add = a * b;
                    out[(i + j) % n] += add;
                }
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.two_m);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Left multiplication by γ^j (cyclic shift).
    pub fn shift(&self, j: i64) -> Self {
        self.mul(&Self::gamma_power(self.two_m, j))
    }

    /// Applies τ = γ^m on the left.
    pub fn apply_tau(&self) -> Self {
        self.shift(self.two_m as i64 / 2)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// `x` is minus iff `e⁻·x = x`, i.e. the coefficients satisfy
    /// `c_{j+m} = −c_j`.
    pub fn is_minus(&self) -> bool {
        let m = self.two_m / 2;
        (0..m).all(|j| self.coeffs[j + m] == -&self.coeffs[j])
    }

    /// Lies in `Z[G]⁻ = e⁻·Z[G]`: minus, and the image of an integral
    /// element, i.e. `2·c_j ∈ Z` with consistent halves.
    pub fn is_minus_integral(&self) -> bool {
        if !self.is_minus() {
            return false;
        }
        let two = BigRational::from(BigInt::from(2));
        self.coeffs.iter().all(|c| (c * &two).is_integer())
    }

    /// Canonical representative modulo trivial units: the lexicographically
    /// smallest coefficient vector among `{±γ^j · x}`.
    pub fn canonical_rep(&self) -> Self {
        let mut best = self.clone();
        for j in 0..self.two_m {
            for sign in [1i64, -1] {
                let cand = self
                    .shift(j as i64)
                    .scale(&BigRational::from(BigInt::from(sign)));
                if cand.coeffs < best.coeffs {
                    best = cand;
                }
            }
        }
        best
    }

    /// Evaluate the character `γ ↦ ζ_{2m}^j` on this element; the value
    /// lives in `Q(ζ_n)` for `n` the order of the character.
    pub fn chi_eval(&self, j: usize) -> CyclotomicValue {
        let two_m = self.two_m as u64;
        let g = gcd(j as u64 % two_m, two_m);
        let n = two_m / g; // order of χ_j
        let jp = (j as u64 / g) % n;
        let mut acc = CyclotomicValue::zero(n.max(1));
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = CyclotomicValue::root_of_unity(n.max(1), (jp * l as u64 % n.max(1)) as i64)
                .scale(c);
            acc = acc.add(&term);
        }
        acc
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `e⁻ = ½(1 − τ) = ½·1 − ½·γ^m`, the sum of the odd-character
/// idempotents.
pub fn minus_idempotent(g: &GroupSpec) -> GroupRingElement {
    let mut x = GroupRingElement::zero(g.two_m);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    x.coeffs[0] = half.clone();
    x.coeffs[g.m()] = -half;
    x
}

/// An odd character of `G`, described by the exponent `j` with
/// `χ_j(γ) = ζ_{2m}^j`; odd means `j` odd, equivalently `χ(τ) = −1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OddCharacter {
    pub exponent: usize,
    pub order: u64,
}

/// The `m` odd characters, exponents `1, 3, …, 2m−1`.
pub fn odd_characters(g: &GroupSpec) -> Vec<OddCharacter> {
    let two_m = g.two_m as u64;
    (0..g.two_m)
        .filter(|j| j % 2 == 1)
        .map(|j| OddCharacter {
            exponent: j,
            order: two_m / gcd(j as u64, two_m),
        })
        .collect()
}

/// An odd rational character `ξ`: a Galois conjugacy class of odd complex
/// characters, listed by their exponents. The class is represented by its
/// smallest exponent, and that choice fixes the component isomorphism
/// `e_ξ·Q[G] ≅ Q(ξ)` used throughout.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OddRationalCharacter {
    pub exponents: Vec<usize>,
    pub order: u64,
}

impl OddRationalCharacter {
    pub fn representative(&self) -> usize {
        self.exponents[0]
    }
}

/// The odd `Z`-characters `X_odd`, each a Galois orbit of odd exponents,
/// sorted by smallest member.
pub fn odd_rational_characters(g: &GroupSpec) -> Vec<OddRationalCharacter> {
    let two_m = g.two_m;
    let mut seen = vec![false; two_m];
    let mut classes = Vec::new();
    for j in (1..two_m).step_by(2) {
        if seen[j] {
            continue;
        }
        let mut orbit: Vec<usize> = (1..two_m)
            .filter(|&u| gcd(u as u64, two_m as u64) == 1)
            .map(|u| (j * u) % two_m)
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &e in &orbit {
            seen[e] = true;
        }
        let order = two_m as u64 / gcd(j as u64, two_m as u64);
        classes.push(OddRationalCharacter {
            exponents: orbit,
            order,
        });
    }
    classes
}

/// Ramanujan-type sum `Σ_{u ∈ (Z/n)^×} ζ_n^{uk}`, always a rational
/// integer.
pub(crate) fn class_character_sum(n: u64, k: i64) -> BigInt {
    let k = k.rem_euclid(n as i64) as u64;
    let g = gcd(k, n);
    let nk = n / g;
    // μ(n/g) · φ(n) / φ(n/g)
    let mu = moebius(nk);
    if mu == 0 {
        return BigInt::zero();
    }
    BigInt::from(mu) * BigInt::from(euler_phi(n) / euler_phi(nk))
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// The rational idempotents `e_ξ = Σ_{χ ∈ C_ξ} e_χ` for `ξ ∈ X_odd`,
/// returned in the same order as [`odd_rational_characters`]. Their
/// coefficients are class-character sums over `|G|`, so they are exact
/// rationals for every `m`.
pub fn rational_idempotents(g: &GroupSpec) -> Vec<(OddRationalCharacter, GroupRingElement)> {
    let two_m = g.two_m;
    odd_rational_characters(g)
        .into_iter()
        .map(|xi| {
            let n = xi.order;
            let jp = xi.representative() as u64 / (two_m as u64 / n);
            let mut coeffs = Vec::with_capacity(two_m);
            for l in 0..two_m {
                // Σ_{χ ∈ C_ξ} χ(γ^{-l}) = Σ_{u ∈ (Z/n)^×} ζ_n^{-u·j'·l}
                let s = class_character_sum(n, -((jp * l as u64 % n) as i64));
                coeffs.push(BigRational::new(s, BigInt::from(two_m)));
            }
            (xi, GroupRingElement::from_coeffs(coeffs))
        })
        .collect()
}

/// The image of a minus element under `Q[G]⁻ ≅ ⊕_ξ Q(ξ)`: component at
/// `ξ` is `χ(x)` for the smallest odd exponent `χ` in the class.
pub fn to_product_form(x: &GroupRingElement, g: &GroupSpec) -> Result<Vec<CyclotomicValue>> {
    if !x.is_minus() {
        return Err(Error::NotMinus);
    }
    Ok(odd_rational_characters(g)
        .iter()
        .map(|xi| x.chi_eval(xi.representative()))
        .collect())
}
