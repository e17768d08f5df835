//! The group ring `Z[H]` of the order-3 group `H = ⟨σ⟩` and the slightly
//! larger order `O = e₀Z[H] + e₁Z[H] ≅ Z ⊕ Z[ω]`, which is the maximal
//! order of `Q[H]`.
//!
//! For a cyclic sextic group `G = ⟨γ⟩`, mapping `τ ↦ −1, γ ↦ −σ²`
//! identifies the minus part `Z[G]⁻` with `Z[H]`; the sextic construction
//! happens here. `Z[H]` is not principal, but every finite-index ideal `𝒜`
//! admits `g ∈ 𝒜` with `O/𝒜O ≅ Z[H]/gZ[H]`, where `g` generates `𝒜` iff
//! `𝒜` is principal and otherwise `(𝒜 : gZ[H]) = 3`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eisenstein::Eisenstein;
use crate::error::Error;
use crate::groupring::GroupRingElement;
use crate::intmat::{relative_index, IntMat};
use crate::Result;

/// Element of `Q[H]`: coefficients on `1, σ, σ²`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HElem {
    pub coeffs: [BigInt; 3],
}

impl HElem {
    pub fn new(c0: impl Into<BigInt>, c1: impl Into<BigInt>, c2: impl Into<BigInt>) -> Self {
        HElem {
            coeffs: [c0.into(), c1.into(), c2.into()],
        }
    }

    pub fn zero() -> Self {
        HElem::new(0, 0, 0)
    }

    pub fn one() -> Self {
        HElem::new(1, 0, 0)
    }

    pub fn sigma() -> Self {
        HElem::new(0, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        HElem::new(
            &self.coeffs[0] + &o.coeffs[0],
            &self.coeffs[1] + &o.coeffs[1],
            &self.coeffs[2] + &o.coeffs[2],
        )
    }

    pub fn neg(&self) -> Self {
        HElem::new(-&self.coeffs[0], -&self.coeffs[1], -&self.coeffs[2])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for i in 0..3 {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                let prod = &self.coeffs[i] * &o.coeffs[j];
                out[(i + j) % 3] += prod;
            }
        }
        HElem { coeffs: out }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        HElem::new(&self.coeffs[0] * k, &self.coeffs[1] * k, &self.coeffs[2] * k)
    }

    /// Component pair under `Q[H] ≅ Q ⊕ Q(ω)`: `(χ₀(x), χ₁(x))` with
    /// `χ₁(σ) = ω`. Lands in `Z ⊕ Z[ω]` for integral input.
    pub fn to_o(&self) -> OElem {
        let x0 = &self.coeffs[0] + &self.coeffs[1] + &self.coeffs[2];
        let x1 = Eisenstein::new(
            &self.coeffs[0] - &self.coeffs[2],
            &self.coeffs[1] - &self.coeffs[2],
        );
        OElem { x0, x1 }
    }

    /// Norm of `Q[H]` as a `Q`-algebra: `|χ₀(x)| · N(χ₁(x))`.
    pub fn norm(&self) -> BigInt {
        let o = self.to_o();
        o.x0.abs() * o.x1.norm()
    }

    /// Lexicographically smallest among `{x, σx, σ²x}`.
    pub fn canonical_sigma_orbit(&self) -> Self {
        let s = HElem::sigma();
        let mut best = self.clone();
        let mut cur = self.clone();
        for _ in 0..2 {
            cur = cur.mul(&s);
            if cur.coeffs < best.coeffs {
                best = cur.clone();
            }
        }
        best
    }

    /// The minus element of `Q[G]` (|G| = 6) this corresponds to under
    /// `τ ↦ −1, σ^k ↦ e⁻γ^{2k}`.
    pub fn to_group_ring(&self) -> GroupRingElement {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut coeffs = vec![BigRational::zero(); 6];
        for (k, b) in self.coeffs.iter().enumerate() {
            let b = BigRational::from(b.clone()) * &half;
            coeffs[(2 * k) % 6] += &b;
            coeffs[(2 * k + 3) % 6] -= &b;
        }
        GroupRingElement::from_coeffs(coeffs)
    }
}

/// An element of `O ≅ Z ⊕ Z[ω]` by its components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OElem {
    pub x0: BigInt,
    pub x1: Eisenstein,
}

impl OElem {
    pub fn new(x0: impl Into<BigInt>, x1: Eisenstein) -> Self {
        OElem { x0: x0.into(), x1 }
    }

    pub fn mul(&self, o: &Self) -> Self {
        OElem {
            x0: &self.x0 * &o.x0,
            x1: self.x1.mul(&o.x1),
        }
    }

    /// `Norm(x) = |x₀| · N(x₁)`; equals `(O : xO)` when nonzero.
    pub fn norm(&self) -> BigInt {
        self.x0.abs() * self.x1.norm()
    }

    /// Rational `Q[H]`-coordinates `x₀e₀ + e₁-part`.
    pub fn qh_coords(&self) -> [BigRational; 3] {
        let three = BigInt::from(3);
        let (b, c) = (&self.x1.a, &self.x1.b);
        [
            BigRational::new(&self.x0 + b * 2 - c, three.clone()),
            BigRational::new(&self.x0 - b + c * 2, three.clone()),
            BigRational::new(&self.x0 - b - c, three),
        ]
    }

    /// Membership in `Z[H] ⊂ O`: the single congruence `x₀ ≡ a + b (mod 3)`
    /// for `x₁ = a + bω`.
    pub fn in_zh(&self) -> bool {
        ((&self.x0 - &self.x1.a - &self.x1.b) % BigInt::from(3)).is_zero()
    }

    /// The `Z[H]` element with these components, if integral.
    pub fn to_h(&self) -> Option<HElem> {
        let q = self.qh_coords();
        if q.iter().all(|x| x.is_integer()) {
            Some(HElem::new(
                q[0].to_integer(),
                q[1].to_integer(),
                q[2].to_integer(),
            ))
        } else {
            None
        }
    }

    /// Row lattice of `x·O` in the scaled coordinates `3·Q[H]` (every
    /// element of `O` has integer coordinates there).
    fn principal_o_lattice_scaled(&self) -> IntMat {
        let basis = o_basis();
        let rows: Vec<Vec<BigInt>> = basis
            .iter()
            .map(|b| {
                let prod = self.mul(b);
                let q = prod.qh_coords();
                q.iter()
                    .map(|x| (x * BigInt::from(3)).to_integer())
                    .collect()
            })
            .collect();
        IntMat::from_bigint_rows(rows)
    }
}

/// The rational `1, σ, σ²` coordinates of a minus element of `Q[G]`
/// (|G| = 6) under `τ ↦ −1, γ^j ↦ (−1)^j σ^{2j}`.
fn qh_coords_of_minus(x: &GroupRingElement) -> crate::Result<[BigRational; 3]> {
    if x.two_m != 6 {
        return Err(Error::Unsupported(
            "the order O lives in the sextic group ring".into(),
        ));
    }
    if !x.is_minus() {
        return Err(Error::NotMinus);
    }
    Ok([
        &x.coeffs[0] - &x.coeffs[3],
        &x.coeffs[2] - &x.coeffs[5],
        &x.coeffs[4] - &x.coeffs[1],
    ])
}

impl HElem {
    /// Back from the minus part of `Q[G]` (|G| = 6): requires a minus
    /// element with integral `Z[H]` image.
    pub fn from_group_ring(x: &GroupRingElement) -> crate::Result<HElem> {
        let q = qh_coords_of_minus(x)?;
        if !q.iter().all(|c| c.is_integer()) {
            return Err(Error::NotInRing { ring: "Z[H]" });
        }
        Ok(HElem::new(
            q[0].to_integer(),
            q[1].to_integer(),
            q[2].to_integer(),
        ))
    }
}

impl OElem {
    /// Component pair of a minus element of `Q[G]` (|G| = 6); errors if
    /// the element is outside `O` (components must be integral — `O` is
    /// strictly larger than `Z[H]`, so thirds in the `σ`-coordinates are
    /// allowed as long as the components are whole).
    pub fn from_group_ring(x: &GroupRingElement) -> crate::Result<OElem> {
        let q = qh_coords_of_minus(x)?;
        let x0 = &q[0] + &q[1] + &q[2];
        let a = &q[0] - &q[2];
        let b = &q[1] - &q[2];
        if !(x0.is_integer() && a.is_integer() && b.is_integer()) {
            return Err(Error::NotInRing { ring: "O" });
        }
        Ok(OElem::new(
            x0.to_integer(),
            Eisenstein::new(a.to_integer(), b.to_integer()),
        ))
    }
}

/// `Norm(x) = |x₀|·N_{Q(ω)/Q}(x₁)` of a minus group-ring element lying in
/// the order `O`; equals `(O : xO)` when nonzero.
pub fn norm_form(x: &GroupRingElement) -> crate::Result<num_bigint::BigInt> {
    Ok(OElem::from_group_ring(x)?.norm())
}

/// `O`-basis `{e₀, e₁, e₁σ}` as component pairs.
fn o_basis() -> [OElem; 3] {
    [
        OElem::new(1, Eisenstein::zero()),
        OElem::new(0, Eisenstein::one()),
        OElem::new(0, Eisenstein::omega()),
    ]
}

/// Row lattice of `O` itself in the scaled coordinates `3·Q[H]`.
pub fn o_lattice_scaled() -> IntMat {
    IntMat::from_rows(&[vec![1, 1, 1], vec![2, -1, -1], vec![-1, 2, -1]])
}

/// `(O : Z[H])`, which is 3.
pub fn index_o_over_zh() -> Result<BigInt> {
    let zh_scaled = IntMat::from_rows(&[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]);
    relative_index(&o_lattice_scaled(), &zh_scaled)
}

/// The idempotents `e₀ = ⅓N_H` and `e₁ = 1 − e₀` as component pairs.
pub fn e0() -> OElem {
    OElem::new(1, Eisenstein::zero())
}

pub fn e1() -> OElem {
    OElem::new(0, Eisenstein::one())
}

/// `κ_{n,m} ∈ Z[H]` with `Norm(κ) = 2^{n+2m}` and `e₀κ = 2^n e₀`, unique
/// up to `{1, σ, σ²}`; returns the component-defined representative
/// `2^n e₀ + (−1)^{n+m} 2^m e₁`.
///
/// The sign on the `e₁`-component is the unique one for which the element
/// is integral (the component sum must be ≡ x₀ mod 3, and 2 ≡ −1 mod 3
/// forces `+(−1)^{n+m}`).
pub fn kappa(n: u64, m: u64) -> HElem {
    let x0 = BigInt::from(2).pow(n as u32);
    let mag = BigInt::from(2).pow(m as u32);
    let sign = if (n + m) % 2 == 0 {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let o = OElem::new(x0, Eisenstein::new(sign * mag, 0));
    debug_assert!(o.in_zh());
    o.to_h().expect("kappa sign choice is integral")
}

/// A finite-index ideal of `Z[H]`, stored as the Hermite form of its
/// lattice in the `1, σ, σ²` coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HIdeal {
    pub lattice: IntMat,
}

impl HIdeal {
    /// Ideal generated by the given elements.
    pub fn from_generators(gens: &[HElem]) -> Result<Self> {
        let mut rows = Vec::new();
        let s = HElem::sigma();
        for g in gens {
            let mut cur = g.clone();
            for _ in 0..3 {
                rows.push(cur.coeffs.to_vec());
                cur = cur.mul(&s);
            }
        }
        if rows.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let lat = IntMat::from_bigint_rows(rows).hnf();
        if lat.nrows() < 3 {
            return Err(Error::ZeroIdeal);
        }
        Ok(HIdeal { lattice: lat })
    }

    /// From an arbitrary σ-stable full lattice.
    pub fn from_lattice(lat: IntMat) -> Result<Self> {
        let h = lat.hnf();
        if h.nrows() < 3 {
            return Err(Error::ZeroIdeal);
        }
        // σ-stability makes a sublattice an ideal.
        let s = HElem::sigma();
        for i in 0..h.nrows() {
            let r = h.row(i);
            let rot = HElem::new(r[0].clone(), r[1].clone(), r[2].clone()).mul(&s);
            if !h.lattice_contains(&rot.coeffs) {
                return Err(Error::inconsistent(
                    "ideal.lattice",
                    "lattice is not closed under the group action",
                ));
            }
        }
        Ok(HIdeal { lattice: h })
    }

    pub fn index(&self) -> BigInt {
        crate::intmat::lattice_index(&self.lattice, 3).expect("full rank by construction")
    }

    pub fn contains(&self, x: &HElem) -> bool {
        self.lattice.lattice_contains(&x.coeffs)
    }

    /// Lattice of `𝒜O` in the scaled coordinates `3·Q[H]`.
    fn ao_lattice_scaled(&self) -> (IntMat, OElem) {
        // e₀𝒜O is generated by the gcd of the x₀-components, e₁𝒜O by the
        // Eisenstein gcd of the x₁-components.
        let mut a0 = BigInt::zero();
        let mut z1 = Eisenstein::zero();
        for i in 0..self.lattice.nrows() {
            let r = self.lattice.row(i);
            let o = HElem::new(r[0].clone(), r[1].clone(), r[2].clone()).to_o();
            a0 = num_integer::gcd(a0, o.x0);
            z1 = z1.gcd(&o.x1);
        }
        let gen = OElem::new(a0, z1);
        (gen.principal_o_lattice_scaled().hnf(), gen)
    }

    /// The lattice of this ideal in the scaled coordinates.
    fn scaled(&self) -> IntMat {
        let rows: Vec<Vec<BigInt>> = (0..self.lattice.nrows())
            .map(|i| self.lattice.row(i).iter().map(|x| x * 3).collect())
            .collect();
        IntMat::from_bigint_rows(rows).hnf()
    }

    /// `(O : 𝒜O)`.
    pub fn index_of_ao(&self) -> BigInt {
        let (ao, _) = self.ao_lattice_scaled();
        relative_index(&o_lattice_scaled(), &ao).expect("AO ⊆ O full rank")
    }

    pub fn principal_lattice(g: &HElem) -> IntMat {
        let s = HElem::sigma();
        let mut rows = Vec::new();
        let mut cur = g.clone();
        for _ in 0..3 {
            rows.push(cur.coeffs.to_vec());
            cur = cur.mul(&s);
        }
        IntMat::from_bigint_rows(rows).hnf()
    }
}

/// For a finite-index ideal `𝒜` of `Z[H]`, produce `g ∈ 𝒜` with
/// `O/𝒜O ≅ Z[H]/gZ[H]`. Returns `(g, principal)`: if `principal`, then
/// `𝒜 = gZ[H]`; otherwise `𝒜O = 𝒜` and `(𝒜 : gZ[H]) = 3`.
pub fn find_generator(a: &HIdeal) -> Result<(HElem, bool)> {
    let (ao_scaled, gen) = a.ao_lattice_scaled();
    let a_scaled = a.scaled();
    if ao_scaled == a_scaled {
        // 𝒜O = 𝒜: non-principal case; any O-generator of 𝒜O lies in 𝒜.
        let g = gen
            .to_h()
            .ok_or_else(|| Error::inconsistent("ideal", "AO = A but generator not integral"))?;
        debug_assert!(a.contains(&g));
        return Ok((g.canonical_sigma_orbit(), false));
    }
    // 𝒜O ≠ 𝒜: principal case; exactly one of x₀e₀ ± e₁x₁ lies in 𝒜 and
    // generates it.
    for sign in [BigInt::one(), -BigInt::one()] {
        let cand = OElem::new(gen.x0.clone(), gen.x1.mul(&Eisenstein::new(sign, 0)));
        let Some(h) = cand.to_h() else { continue };
        if a.contains(&h) {
            let principal = HIdeal::principal_lattice(&h);
            if principal == a.lattice {
                return Ok((h.canonical_sigma_orbit(), true));
            }
        }
    }
    Err(Error::inconsistent(
        "ideal",
        "no generator candidate lies in the ideal; input lattice is not an ideal",
    ))
}
