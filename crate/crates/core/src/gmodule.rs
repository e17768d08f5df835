//! Finitely presented modules over `Z`, `Z[i]`, `Z[ω]`, `Z[H]` and the
//! maximal order `O`, their Fitting ideals, orders, and `ψ`-component
//! orders at primes `p ∤ |G|`.
//!
//! Everything reduces to integer lattices: a ring of `Z`-rank `r` turns a
//! presentation with `a` generators into a lattice in `Z^{a·r}`, and module
//! orders, Fitting-ideal indices and idempotent projections are Smith-form
//! computations there.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::groupring::class_character_sum;
use crate::intmat::{lattice_index, IntMat};
use crate::Result;

/// The coefficient rings supported for module presentations. `Gaussian`,
/// `Eisenstein` and `MaximalO` are maximal orders; `HGroupRing` (`Z[H]`) is
/// not, and `MaximalO` is its maximal order. The minus parts `Z[G]⁻` for
/// `m = 1, 2, 3` are `Z`, `Gaussian` and `HGroupRing` respectively.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RingTag {
    Z,
    Gaussian,
    Eisenstein,
    HGroupRing,
    MaximalO,
}

impl RingTag {
    pub fn rank(self) -> usize {
        match self {
            RingTag::Z => 1,
            RingTag::Gaussian | RingTag::Eisenstein => 2,
            RingTag::HGroupRing | RingTag::MaximalO => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RingTag::Z => "Z",
            RingTag::Gaussian => "Z[i]",
            RingTag::Eisenstein => "Z[omega]",
            RingTag::HGroupRing => "Z[H]",
            RingTag::MaximalO => "O",
        }
    }

    /// The minus part `Z[G]⁻` for a group of order `2m`.
    pub fn minus_ring_for(m: usize) -> Result<RingTag> {
        match m {
            1 => Ok(RingTag::Z),
            2 => Ok(RingTag::Gaussian),
            3 => Ok(RingTag::HGroupRing),
            _ => Err(Error::Unsupported(format!(
                "no distinguished minus ring for m = {m}"
            ))),
        }
    }

    /// Structure constants: coordinates of `b_i · b_j` in the basis.
    fn basis_mul(self, i: usize, j: usize) -> Vec<i64> {
        match self {
            RingTag::Z => vec![1],
            RingTag::Gaussian => {
                // basis 1, i
                match (i, j) {
                    (0, 0) => vec![1, 0],
                    (0, 1) | (1, 0) => vec![0, 1],
                    (1, 1) => vec![-1, 0],
                    _ => unreachable!(),
                }
            }
            RingTag::Eisenstein => {
                // basis 1, ω with ω² = −1−ω
                match (i, j) {
                    (0, 0) => vec![1, 0],
                    (0, 1) | (1, 0) => vec![0, 1],
                    (1, 1) => vec![-1, -1],
                    _ => unreachable!(),
                }
            }
            RingTag::HGroupRing => {
                // basis 1, σ, σ²
                let mut v = vec![0, 0, 0];
                v[(i + j) % 3] = 1;
                v
            }
            RingTag::MaximalO => {
                // basis e₀, e₁, e₁σ; the two blocks are orthogonal and
                // e₁σ·e₁σ = e₁σ² = −e₁ − e₁σ.
                match (i, j) {
                    (0, 0) => vec![1, 0, 0],
                    (0, _) | (_, 0) => vec![0, 0, 0],
                    (1, 1) => vec![0, 1, 0],
                    (1, 2) | (2, 1) => vec![0, 0, 1],
                    (2, 2) => vec![0, -1, -1],
                    _ => unreachable!(),
                }
            }
        }
    }

    /// Product of two elements in basis coordinates.
    pub fn mul(self, x: &[BigInt], y: &[BigInt]) -> Vec<BigInt> {
        let r = self.rank();
        let mut out = vec![BigInt::zero(); r];
        for i in 0..r {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..r {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (k, s) in self.basis_mul(i, j).iter().enumerate() {
                    if *s != 0 {
                        out[k] += &c * BigInt::from(*s);
                    }
                }
            }
        }
        out
    }

    pub fn one(self) -> Vec<BigInt> {
        match self {
            // 1 = e₀ + e₁ in the O basis.
            RingTag::MaximalO => vec![BigInt::one(), BigInt::one(), BigInt::zero()],
            _ => {
                let mut v = vec![BigInt::zero(); self.rank()];
                v[0] = BigInt::one();
                v
            }
        }
    }

    /// Coordinates of the image of γ for the minus-ring action (τ acts as
    /// −1 throughout). `None` for rings that are not minus parts.
    pub fn gamma_vec(self) -> Option<Vec<i64>> {
        match self {
            RingTag::Z => Some(vec![-1]),
            RingTag::Gaussian => Some(vec![0, 1]),
            RingTag::HGroupRing => Some(vec![0, 0, -1]),
            RingTag::MaximalO => Some(vec![-1, 1, 1]), // −σ² = −e₀ + e₁(1 + ω)·(−ω²)… as coords
            RingTag::Eisenstein => None,
        }
    }

    /// The maximal order and the coordinate map into it.
    pub fn maximal(self) -> RingTag {
        match self {
            RingTag::HGroupRing => RingTag::MaximalO,
            t => t,
        }
    }

    /// Map an element into the maximal order's coordinates.
    pub fn to_maximal_coords(self, x: &[BigInt]) -> Vec<BigInt> {
        match self {
            RingTag::HGroupRing => {
                // (c₀ + c₁σ + c₂σ²) ↦ (x₀; a + bω) = (c₀+c₁+c₂; c₀−c₂ + (c₁−c₂)ω)
                vec![
                    &x[0] + &x[1] + &x[2],
                    &x[0] - &x[2],
                    &x[1] - &x[2],
                ]
            }
            _ => x.to_vec(),
        }
    }
}

/// A finite-index ideal of one of the supported rings, stored as the
/// Hermite form of its lattice in the ring's basis coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingIdeal {
    pub ring: RingTag,
    pub lattice: IntMat,
}

impl RingIdeal {
    pub fn from_generators(ring: RingTag, gens: &[Vec<BigInt>]) -> Self {
        let r = ring.rank();
        let mut rows = Vec::new();
        for g in gens {
            for k in 0..r {
                let mut basis = vec![BigInt::zero(); r];
                basis[k] = BigInt::one();
                rows.push(ring.mul(g, &basis));
            }
        }
        if rows.is_empty() {
            rows.push(vec![BigInt::zero(); r]);
        }
        RingIdeal {
            ring,
            lattice: IntMat::from_bigint_rows(rows).hnf(),
        }
    }

    pub fn unit(ring: RingTag) -> Self {
        Self::from_generators(ring, &[ring.one()])
    }

    pub fn zero(ring: RingTag) -> Self {
        RingIdeal {
            ring,
            lattice: IntMat::zero(0, ring.rank()).hnf(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.nrows() == 0
    }

    /// `(R : I)`; errors on infinite index.
    pub fn index(&self) -> Result<BigInt> {
        lattice_index(&self.lattice, self.ring.rank())
    }

    /// Ideal product, generated by pairwise products of lattice bases.
    pub fn mul(&self, other: &RingIdeal) -> RingIdeal {
        assert_eq!(self.ring, other.ring);
        let mut gens = Vec::new();
        for i in 0..self.lattice.nrows() {
            for j in 0..other.lattice.nrows() {
                gens.push(self.ring.mul(self.lattice.row(i), other.lattice.row(j)));
            }
        }
        RingIdeal::from_generators(self.ring, &gens)
    }

    /// Base change to the maximal order: `Fitt_T(M ⊗ T) = Fitt_R(M)·T`.
    pub fn extend_to_maximal(&self) -> RingIdeal {
        let target = self.ring.maximal();
        if target == self.ring {
            return self.clone();
        }
        let gens: Vec<Vec<BigInt>> = (0..self.lattice.nrows())
            .map(|i| self.ring.to_maximal_coords(self.lattice.row(i)))
            .collect();
        RingIdeal::from_generators(target, &gens)
    }
}

/// A module over `ring` with `generators` generators; each relation is a
/// vector of ring elements (one per generator) that maps to zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModulePresentation {
    pub ring: RingTag,
    pub generators: usize,
    pub relations: Vec<Vec<Vec<BigInt>>>,
}

impl ModulePresentation {
    pub fn new(ring: RingTag, generators: usize, relations: Vec<Vec<Vec<BigInt>>>) -> Result<Self> {
        for (ri, rel) in relations.iter().enumerate() {
            if rel.len() != generators {
                return Err(Error::schema(
                    format!("relations[{ri}]"),
                    format!("expected {} entries, got {}", generators, rel.len()),
                ));
            }
            for (gi, coords) in rel.iter().enumerate() {
                if coords.len() != ring.rank() {
                    return Err(Error::schema(
                        format!("relations[{ri}][{gi}]"),
                        format!(
                            "ring {} elements have {} coordinates, got {}",
                            ring.name(),
                            ring.rank(),
                            coords.len()
                        ),
                    ));
                }
            }
        }
        Ok(ModulePresentation {
            ring,
            generators,
            relations,
        })
    }

    pub fn trivial(ring: RingTag) -> Self {
        ModulePresentation {
            ring,
            generators: 0,
            relations: Vec::new(),
        }
    }

    /// The cyclic module `R/I`.
    pub fn cyclic(ideal: &RingIdeal) -> Self {
        let relations = (0..ideal.lattice.nrows())
            .map(|i| vec![ideal.lattice.row(i).to_vec()])
            .collect();
        ModulePresentation {
            ring: ideal.ring,
            generators: 1,
            relations,
        }
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &ModulePresentation) -> ModulePresentation {
        assert_eq!(self.ring, other.ring);
        let r = self.ring.rank();
        let zero = vec![BigInt::zero(); r];
        let a = self.generators;
        let b = other.generators;
        let mut relations = Vec::new();
        for rel in &self.relations {
            let mut v = rel.clone();
            v.extend(std::iter::repeat_n(zero.clone(), b));
            relations.push(v);
        }
        for rel in &other.relations {
            let mut v: Vec<Vec<BigInt>> = std::iter::repeat_n(zero.clone(), a).collect();
            v.extend(rel.clone());
            relations.push(v);
        }
        ModulePresentation {
            ring: self.ring,
            generators: a + b,
            relations,
        }
    }

    /// The relation lattice inside `Z^{a·rank}`: the `R`-span of the
    /// relations, expanded over the ring's `Z`-basis.
    pub fn z_relation_lattice(&self) -> IntMat {
        let r = self.ring.rank();
        let n = self.generators * r;
        let mut rows = Vec::new();
        for rel in &self.relations {
            for k in 0..r {
                let mut basis = vec![BigInt::zero(); r];
                basis[k] = BigInt::one();
                let mut row = Vec::with_capacity(n);
                for coords in rel {
                    row.extend(self.ring.mul(&basis, coords));
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            rows.push(vec![BigInt::zero(); n]);
        }
        IntMat::from_bigint_rows(rows)
    }

    pub fn is_finite(&self) -> bool {
        let need = self.generators * self.ring.rank();
        need == 0 || self.z_relation_lattice().rank() == need
    }

    /// `|M|` as the index of the relation lattice; errors when infinite.
    pub fn order(&self) -> Result<BigInt> {
        let need = self.generators * self.ring.rank();
        if need == 0 {
            return Ok(BigInt::one());
        }
        let lat = self.z_relation_lattice();
        lattice_index(&lat, need).map_err(|_| Error::InfiniteModule {
            found: lat.rank(),
            need,
        })
    }

    /// Element count by explicit enumeration of the quotient through the
    /// Smith diagonal ranges, capped (default cap `10^6`).
    pub fn brute_force_count(&self, cap: u64) -> Result<u64> {
        let need = self.generators * self.ring.rank();
        if need == 0 {
            return Ok(1);
        }
        let snf = self.z_relation_lattice().snf();
        if snf.nonzero() < need {
            return Err(Error::InfiniteModule {
                found: snf.nonzero(),
                need,
            });
        }
        let mut ranges = Vec::with_capacity(need);
        for d in snf.d.iter().take(need) {
            let d = u64::try_from(d).map_err(|_| Error::EnumerationCap { cap })?;
            ranges.push(d);
        }
        let mut count: u64 = 0;
        let mut odometer = vec![0u64; need];
        loop {
            count += 1;
            if count > cap {
                return Err(Error::EnumerationCap { cap });
            }
            let mut pos = 0;
            loop {
                if pos == need {
                    return Ok(count);
                }
                odometer[pos] += 1;
                if odometer[pos] < ranges[pos] {
                    break;
                }
                odometer[pos] = 0;
                pos += 1;
            }
        }
    }

    /// The Fitting ideal: generated by the `a × a` minors of the relation
    /// matrix. Requires a finite presentation.
    pub fn fitting_ideal(&self) -> Result<RingIdeal> {
        let a = self.generators;
        if a == 0 {
            return Ok(RingIdeal::unit(self.ring));
        }
        if !self.is_finite() {
            let lat = self.z_relation_lattice();
            return Err(Error::InfiniteModule {
                found: lat.rank(),
                need: a * self.ring.rank(),
            });
        }
        let b = self.relations.len();
        let mut dets = Vec::new();
        let mut choice: Vec<usize> = (0..a).collect();
        loop {
            let minor: Vec<Vec<Vec<BigInt>>> = choice
                .iter()
                .map(|&c| self.relations[c].clone())
                .collect();
            dets.push(ring_det(self.ring, &minor));
            // next a-combination of 0..b
            let mut i = a;
            loop {
                if i == 0 {
                    return Ok(RingIdeal::from_generators(self.ring, &dets));
                }
                i -= 1;
                if choice[i] + (a - i) <= b - 1 {
                    choice[i] += 1;
                    for j in i + 1..a {
                        choice[j] = choice[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// `|M ⊗ maximal order|` through the Fitting ideal: the index
    /// `(O_max : Fitt·O_max)`. For presentations over a maximal ring this
    /// is `|M|`.
    pub fn order_from_fitting(&self) -> Result<BigInt> {
        let fitt = self.fitting_ideal()?.extend_to_maximal();
        fitt.index()
    }

    /// The base-changed presentation `M ⊗_R O_max` over the maximal order
    /// (same relation vectors, coordinates mapped).
    pub fn extend_to_maximal(&self) -> ModulePresentation {
        let target = self.ring.maximal();
        if target == self.ring {
            return self.clone();
        }
        ModulePresentation {
            ring: target,
            generators: self.generators,
            relations: self
                .relations
                .iter()
                .map(|rel| {
                    rel.iter()
                        .map(|coords| self.ring.to_maximal_coords(coords))
                        .collect()
                })
                .collect(),
        }
    }
}

/// Determinant of an `a × a` matrix over the ring, columns given as
/// relation vectors (`minor[col][row]`), by Laplace expansion.
fn ring_det(ring: RingTag, minor: &[Vec<Vec<BigInt>>]) -> Vec<BigInt> {
    let a = minor.len();
    if a == 0 {
        return ring.one();
    }
    det_rec(ring, minor, &mut (0..a).collect::<Vec<_>>(), 0)
}

fn det_rec(ring: RingTag, m: &[Vec<Vec<BigInt>>], rows: &mut Vec<usize>, col: usize) -> Vec<BigInt> {
    let r = ring.rank();
    if col == m.len() {
        return ring.one();
    }
    let mut acc = vec![BigInt::zero(); r];
    for k in 0..rows.len() {
        let row = rows.remove(k);
        let sub = det_rec(ring, m, rows, col + 1);
        let term = ring.mul(&m[col][row], &sub);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        for (t, s) in acc.iter_mut().zip(term) {
            if sign > 0 {
                *t += s;
            } else {
                *t -= s;
            }
        }
        rows.insert(k, row);
    }
    acc
}

/// An irreducible `Z_p`-character of cyclic `G` of order `2m`: the orbit of
/// a complex character exponent under multiplication by `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsiCharacter {
    pub p: u64,
    pub two_m: usize,
    pub exponents: Vec<usize>,
}

impl PsiCharacter {
    pub fn is_odd(&self) -> bool {
        self.exponents[0] % 2 == 1
    }

    /// Order of the characters in the orbit.
    pub fn order(&self) -> u64 {
        let j = self.exponents[0] as u64;
        let n = self.two_m as u64;
        n / num_integer::gcd(j, n)
    }

    /// A label like `psi[1,3]@5` for deterministic reports.
    pub fn label(&self) -> String {
        let exps: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        format!("psi[{}]@{}", exps.join(","), self.p)
    }
}

/// All irreducible `Z_p`-characters for `p ∤ 2m`.
pub fn enumerate_psi(p: u64, two_m: usize) -> Result<Vec<PsiCharacter>> {
    if p < 2 || two_m as u64 % p == 0 {
        return Err(Error::IdempotentNotLiftable {
            p,
            order: two_m as u64,
        });
    }
    let mut seen = vec![false; two_m];
    let mut out = Vec::new();
    for j in 0..two_m {
        if seen[j] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut cur = j;
        loop {
            orbit.push(cur);
            seen[cur] = true;
            cur = (cur * (p as usize % two_m)) % two_m;
            if cur == j {
                break;
            }
        }
        orbit.sort_unstable();
        out.push(PsiCharacter {
            p,
            two_m,
            exponents: orbit,
        });
    }
    Ok(out)
}

/// A finite abelian group with a γ-action, in Smith form: `⊕ Z/d_i` with
/// `d_i > 1`, γ sending generator `i` to the row `i` of `action`.
#[derive(Clone, Debug)]
pub struct FiniteGModule {
    pub two_m: usize,
    pub invariants: Vec<BigInt>,
    pub action: IntMat,
}

impl FiniteGModule {
    /// From a quotient `Z^n / L` with γ acting on row vectors by
    /// `x ↦ x·action`; requires `L` full rank (finite quotient) and
    /// `L·action ⊆ L`.
    pub fn from_quotient(two_m: usize, relations: &IntMat, action: &IntMat) -> Result<Self> {
        let n = relations.ncols();
        assert_eq!(action.nrows(), n);
        assert_eq!(action.ncols(), n);
        let snf = relations.snf();
        if snf.nonzero() < n {
            return Err(Error::InfiniteModule {
                found: snf.nonzero(),
                need: n,
            });
        }
        // In coordinates w = x·v the relation lattice is diag(d); the
        // action becomes v⁻¹·action·v.
        let w_action = snf.vinv.mul(action).mul(&snf.v);
        let kept: Vec<usize> = (0..n).filter(|&i| !snf.d[i].is_one()).collect();
        let invariants: Vec<BigInt> = kept.iter().map(|&i| snf.d[i].clone()).collect();
        let mut act = IntMat::zero(kept.len(), kept.len());
        for (bi, &i) in kept.iter().enumerate() {
            for (bj, &j) in kept.iter().enumerate() {
                act[(bi, bj)] = w_action[(i, j)].mod_floor(&invariants[bj]);
            }
        }
        Ok(FiniteGModule {
            two_m,
            invariants,
            action: act,
        })
    }

    /// From a presentation over a minus ring, with γ acting by the ring's
    /// distinguished element.
    pub fn from_presentation(two_m: usize, pres: &ModulePresentation) -> Result<Self> {
        let gv = pres.ring.gamma_vec().ok_or_else(|| {
            Error::Unsupported(format!("{} carries no γ-action", pres.ring.name()))
        })?;
        let r = pres.ring.rank();
        let n = pres.generators * r;
        if n == 0 {
            return Ok(FiniteGModule {
                two_m,
                invariants: Vec::new(),
                action: IntMat::zero(0, 0),
            });
        }
        let gv: Vec<BigInt> = gv.into_iter().map(BigInt::from).collect();
        // Row-convention action per generator block: row i is the image of
        // basis element b_i under multiplication by γ.
        let mut block = IntMat::zero(r, r);
        for i in 0..r {
            let mut basis = vec![BigInt::zero(); r];
            basis[i] = BigInt::one();
            let img = pres.ring.mul(&basis, &gv);
            for j in 0..r {
                block[(i, j)] = img[j].clone();
            }
        }
        let mut action = IntMat::zero(n, n);
        for g in 0..pres.generators {
            for i in 0..r {
                for j in 0..r {
                    action[(g * r + i, g * r + j)] = block[(i, j)].clone();
                }
            }
        }
        Self::from_quotient(two_m, &pres.z_relation_lattice(), &action)
    }

    pub fn order(&self) -> BigInt {
        self.invariants.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// The p-primary part, with the action transported along the splitting
    /// `Z/d ≅ Z/p^e × Z/(d/p^e)`.
    pub fn p_part(&self, p: u64) -> FiniteGModule {
        let p = BigInt::from(p);
        let s = self.invariants.len();
        let mut q = Vec::new(); // p-power part of each invariant
        let mut cof = Vec::new(); // coprime cofactor
        for d in &self.invariants {
            let mut pe = BigInt::one();
            let mut rest = d.clone();
            while (&rest % &p).is_zero() {
                rest /= &p;
                pe *= &p;
            }
            q.push(pe);
            cof.push(rest);
        }
        let kept: Vec<usize> = (0..s).filter(|&i| !q[i].is_one()).collect();
        let mut invariants = Vec::with_capacity(kept.len());
        let mut act = IntMat::zero(kept.len(), kept.len());
        for (bj, &j) in kept.iter().enumerate() {
            invariants.push(q[j].clone());

            for (bi, &i) in kept.iter().enumerate() {
                // generator of the p-part is (d_i/q_i)·g_i; express the
                // image back in the scaled generators.
                let inv_cj = mod_inverse(&cof[j], &q[j]);
                let val = (&self.action[(i, j)] * &cof[i] * &inv_cj).mod_floor(&q[j]);
                act[(bi, bj)] = val;
            }
        }
        FiniteGModule {
            two_m: self.two_m,
            invariants,
            action: act,
        }
    }

    /// Order of the subgroup generated by the rows of `gens` (coordinates
    /// in the module's generators).
    pub fn subgroup_order(&self, gens: &IntMat) -> BigInt {
        if self.invariants.is_empty() {
            return BigInt::one();
        }
        let s = self.invariants.len();
        let mut rows: Vec<Vec<BigInt>> = (0..gens.nrows()).map(|i| gens.row(i).to_vec()).collect();
        for (i, d) in self.invariants.iter().enumerate() {
            let mut r = vec![BigInt::zero(); s];
            r[i] = d.clone();
            rows.push(r);
        }
        let quot_order: BigInt = IntMat::from_bigint_rows(rows)
            .snf()
            .d
            .iter()
            .take(s)
            .product();
        self.order() / quot_order
    }

    /// `|M^ψ| = |e_ψ · M_p|`, computed with the idempotent of the ψ-orbit
    /// lifted modulo `p^k`, `k` the exponent of the p-part.
    pub fn psi_component_order(&self, psi: &PsiCharacter) -> Result<BigInt> {
        if self.two_m as u64 % psi.p == 0 {
            return Err(Error::IdempotentNotLiftable {
                p: psi.p,
                order: self.two_m as u64,
            });
        }
        assert_eq!(self.two_m, psi.two_m, "psi belongs to a different group");
        let mp = self.p_part(psi.p);
        if mp.is_trivial() {
            return Ok(BigInt::one());
        }
        let modulus = mp
            .invariants
            .iter()
            .fold(BigInt::one(), |acc, d| if *d > acc { d.clone() } else { acc });
        let coeffs = psi_idempotent_mod(psi, &modulus)?;
        // E = Σ c_l γ^l acting on the p-part.
        let s = mp.invariants.len();
        let mut e_mat = IntMat::zero(s, s);
        let mut pow = IntMat::identity(s);
        for c in &coeffs {
            if !c.is_zero() {
                for i in 0..s {
                    for j in 0..s {
                        e_mat[(i, j)] += c * &pow[(i, j)];
                    }
                }
            }
            pow = pow.mul(&mp.action);
            for i in 0..s {
                for j in 0..s {
                    pow[(i, j)] = pow[(i, j)].mod_floor(&modulus);
                }
            }
        }
        for i in 0..s {
            for j in 0..s {
                e_mat[(i, j)] = e_mat[(i, j)].mod_floor(&modulus);
            }
        }
        Ok(mp.subgroup_order(&e_mat))
    }
}

/// Coefficients mod `modulus` (a power of `psi.p`) of the idempotent
/// `e_ψ = (1/2m) Σ_l (Σ_{χ ∈ ψ} χ(γ^{-l})) γ^l`.
///
/// Two cases arise for the groups here: the orbit is a full Galois class
/// (inert case — the inner sums are rational integers), or a single
/// character whose order divides `p − 1` (split case — its values lift to
/// roots of unity mod `p^k`). Partially split orbits would need an
/// unramified extension and only occur for `|G| > 6`.
fn psi_idempotent_mod(psi: &PsiCharacter, modulus: &BigInt) -> Result<Vec<BigInt>> {
    let two_m = psi.two_m;
    let n = psi.order();
    let class_size = crate::cyclotomic::euler_phi(n);
    let inv_2m = mod_inverse(&BigInt::from(two_m), modulus);
    let mut coeffs = Vec::with_capacity(two_m);
    if psi.exponents.len() as u64 == class_size {
        let j0 = psi.exponents[0] as u64;
        let jp = j0 / (two_m as u64 / n);
        for l in 0..two_m {
            let s = class_character_sum(n, -((jp * l as u64 % n) as i64));
            coeffs.push((s * &inv_2m).mod_floor(modulus));
        }
        return Ok(coeffs);
    }
    if psi.exponents.len() == 1 {
        if (psi.p - 1) % n != 0 {
            return Err(Error::Unsupported(format!(
                "singleton ψ-orbit of order {n} needs {n} | p−1 (p = {})",
                psi.p
            )));
        }
        let zeta = root_of_unity_mod(n, psi.p, modulus);
        let j0 = psi.exponents[0] as u64;
        let jp = j0 / (two_m as u64 / n);
        for l in 0..two_m {
            let k = (jp * l as u64) % n;
            // χ(γ^{-l}) = ζ^{-k} = ζ^{n-k}
            let term = zeta.modpow(&BigInt::from((n - k) % n), modulus);
            coeffs.push((term * &inv_2m).mod_floor(modulus));
        }
        return Ok(coeffs);
    }
    Err(Error::Unsupported(format!(
        "partially split ψ-orbit {:?} over p = {} (group order {two_m} > 6?)",
        psi.exponents, psi.p
    )))
}

/// Inverse of `a` modulo `m` (gcd must be 1).
fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// An element of exact multiplicative order `n` in `Z/p^k` (smallest lift
/// from the smallest such residue mod `p`, for determinism).
fn root_of_unity_mod(n: u64, p: u64, modulus: &BigInt) -> BigInt {
    let y = (2..p)
        .find(|&y| {
            // y has exact order n mod p
            mod_pow_u64(y, n, p) == 1
                && prime_divisors(n)
                    .iter()
                    .all(|&q| mod_pow_u64(y, n / q, p) != 1)
        })
        .expect("n | p-1 guarantees an element of order n");
    // Raising to the p-power part of the unit group order projects onto
    // the prime-to-p part while fixing the residue mod p.
    let mut pk_over_p = BigInt::one();
    let p_big = BigInt::from(p);
    let mut m = modulus.clone();
    while m > p_big {
        pk_over_p *= &p_big;
        m /= &p_big;
    }
    BigInt::from(y).modpow(&pk_over_p, modulus)
}

fn mod_pow_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut b = base as u128 % mm;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % mm;
        }
        b = b * b % mm;
        exp >>= 1;
    }
    acc as u64
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `|M^ψ|` for a presentation over a minus ring (module side of the local
/// index lemma).
pub fn psi_component_order(
    two_m: usize,
    pres: &ModulePresentation,
    psi: &PsiCharacter,
) -> Result<BigInt> {
    FiniteGModule::from_presentation(two_m, pres)?.psi_component_order(psi)
}

/// `|(R/Fitt_R(M))^ψ|` (Fitting side of the local index lemma).
pub fn psi_fitting_side(
    two_m: usize,
    pres: &ModulePresentation,
    psi: &PsiCharacter,
) -> Result<BigInt> {
    let fitt = pres.fitting_ideal()?;
    let quotient = ModulePresentation::cyclic(&fitt);
    psi_component_order(two_m, &quotient, psi)
}
