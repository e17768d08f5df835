//! Tate cohomology `Ĥ⁰, Ĥ¹` and Herbrand quotients of a finite cyclic
//! group acting on a finitely generated abelian group, with a numeric
//! consistency check for the exact hexagon of a short exact sequence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::intmat::{preimage_lattice, subquotient, IntMat};
use crate::Result;

/// A finitely generated abelian group `Z^r ⊕ ⊕ Z/d_i` with an action of a
/// cyclic group of order `n`; the generator acts on row vectors by
/// `x ↦ x·action` (free coordinates first).
#[derive(Clone, Debug)]
pub struct CyclicAction {
    pub n: u64,
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub action: IntMat,
}

impl CyclicAction {
    pub fn new(n: u64, free_rank: usize, torsion: Vec<BigInt>, action: IntMat) -> Result<Self> {
        let c = CyclicAction {
            n,
            free_rank,
            torsion,
            action,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Relation lattice `L₀` (rows `d_i·e_i` on the torsion coordinates).
    pub fn relation_lattice(&self) -> IntMat {
        let s = self.dim();
        let mut rows = Vec::new();
        for (k, d) in self.torsion.iter().enumerate() {
            let mut row = vec![BigInt::zero(); s];
            row[self.free_rank + k] = d.clone();
            rows.push(row);
        }
        if rows.is_empty() {
            rows.push(vec![BigInt::zero(); s]);
        }
        IntMat::from_bigint_rows(rows)
    }

    fn validate(&self) -> Result<()> {
        let s = self.dim();
        if self.action.nrows() != s || self.action.ncols() != s {
            return Err(Error::inconsistent(
                "action",
                format!("expected {s}×{s} action matrix"),
            ));
        }
        if self.n == 0 {
            return Err(Error::inconsistent("n", "acting group must be finite"));
        }
        for d in &self.torsion {
            if *d <= BigInt::one() {
                return Err(Error::inconsistent("torsion", "invariants must exceed 1"));
            }
        }
        let rel = self.relation_lattice();
        // Well-defined: relations map into relations.
        for (k, _) in self.torsion.iter().enumerate() {
            let mut row = vec![BigInt::zero(); s];
            row[self.free_rank + k] = self.torsion[k].clone();
            let img = self.action.apply_row(&row);
            if !rel.lattice_contains(&img) {
                return Err(Error::inconsistent(
                    "action",
                    format!("action is not well-defined on torsion generator {k}"),
                ));
            }
        }
        // action^n = identity on the group.
        let mut pow = IntMat::identity(s);
        for _ in 0..self.n {
            pow = pow.mul(&self.action);
        }
        for i in 0..s {
            let mut row: Vec<BigInt> = (0..s).map(|j| pow[(i, j)].clone()).collect();
            row[i] -= BigInt::one();
            if !rel.lattice_contains(&row) {
                return Err(Error::inconsistent(
                    "action",
                    format!("action^{} is not the identity on generator {i}", self.n),
                ));
            }
        }
        Ok(())
    }

    /// `a − 1` as a matrix on row vectors.
    fn aug_matrix(&self) -> IntMat {
        let s = self.dim();
        let mut m = self.action.clone();
        for i in 0..s {
            m[(i, i)] -= BigInt::one();
        }
        m
    }

    /// Norm `N_A = Σ_{i<n} a^i` as a matrix.
    fn norm_matrix(&self) -> IntMat {
        let s = self.dim();
        let mut acc = IntMat::zero(s, s);
        let mut pow = IntMat::identity(s);
        for _ in 0..self.n {
            for i in 0..s {
                for j in 0..s {
                    let v = pow[(i, j)].clone();
                    acc[(i, j)] += v;
                }
            }
            pow = pow.mul(&self.action);
        }
        acc
    }

    /// Lattice `{x : x·m ∈ L₀}` (elements whose image dies in the group).
    fn lattice_killed_by(&self, m: &IntMat) -> IntMat {
        preimage_lattice(m, &self.relation_lattice())
    }

    /// Lattice `rowspan(m) + L₀` (image of the endomorphism).
    fn image_lattice(&self, m: &IntMat) -> IntMat {
        m.stack(&self.relation_lattice()).hnf()
    }
}

/// `Ĥ⁰(A, M) = M^A / N_A·M` as a list of invariant factors (> 1).
pub fn tate_h0(c: &CyclicAction) -> Result<Vec<BigInt>> {
    let fixed = c.lattice_killed_by(&c.aug_matrix());
    let norms = c.image_lattice(&c.norm_matrix());
    let (inv, free) = subquotient(&fixed, &norms)?;
    if free != 0 {
        return Err(Error::inconsistent(
            "action",
            "infinite cohomology: action data is not a valid module action",
        ));
    }
    Ok(inv)
}

/// `Ĥ¹(A, M) = Ker(N_A) / (1−a)·M` as a list of invariant factors (> 1).
pub fn tate_h1(c: &CyclicAction) -> Result<Vec<BigInt>> {
    let norm_kernel = c.lattice_killed_by(&c.norm_matrix());
    let aug_image = c.image_lattice(&c.aug_matrix());
    let (inv, free) = subquotient(&norm_kernel, &aug_image)?;
    if free != 0 {
        return Err(Error::inconsistent(
            "action",
            "infinite cohomology: action data is not a valid module action",
        ));
    }
    Ok(inv)
}

pub fn group_order(invariants: &[BigInt]) -> BigInt {
    invariants.iter().product()
}

/// `Q(A, M) = |Ĥ⁰| / |Ĥ¹|` as an exact rational.
pub fn herbrand_quotient(c: &CyclicAction) -> Result<BigRational> {
    let h0 = group_order(&tate_h0(c)?);
    let h1 = group_order(&tate_h1(c)?);
    Ok(BigRational::new(h0, h1))
}

/// A short exact sequence `0 → M → N → P → 0` of modules with the same
/// cyclic action; maps act on row vectors.
pub struct ShortExactSequence<'a> {
    pub m: &'a CyclicAction,
    pub n: &'a CyclicAction,
    pub p: &'a CyclicAction,
    pub f: IntMat,
    pub g: IntMat,
}

/// Outcome of the hexagon consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HexagonReport {
    pub h0: [Vec<BigInt>; 3],
    pub h1: [Vec<BigInt>; 3],
    /// `|Ĥ⁰M|·|Ĥ⁰P|·|Ĥ¹N| = |Ĥ⁰N|·|Ĥ¹M|·|Ĥ¹P|`, forced by exactness.
    pub alternating_product_ok: bool,
    /// `Q(A,N) = Q(A,M)·Q(A,P)`.
    pub herbrand_multiplicative: bool,
}

/// Verify the input maps form an equivariant short exact sequence, then
/// check the numeric consequences of the exact hexagon. The hexagon's own
/// connecting maps are not part of the input, so only their order
/// constraints are checked.
pub fn check_hexagon(seq: &ShortExactSequence) -> Result<HexagonReport> {
    let (m, n, p) = (seq.m, seq.n, seq.p);
    if m.n != n.n || n.n != p.n {
        return Err(Error::inconsistent("sequence", "acting groups differ"));
    }
    let (sm, sn, sp) = (m.dim(), n.dim(), p.dim());
    if seq.f.nrows() != sm || seq.f.ncols() != sn || seq.g.nrows() != sn || seq.g.ncols() != sp {
        return Err(Error::inconsistent("sequence", "map shapes do not match"));
    }

    let rel_n = n.relation_lattice();
    let rel_p = p.relation_lattice();

    // Maps are well-defined on torsion.
    for (k, d) in m.torsion.iter().enumerate() {
        let mut row = vec![BigInt::zero(); sm];
        row[m.free_rank + k] = d.clone();
        if !rel_n.lattice_contains(&seq.f.apply_row(&row)) {
            return Err(Error::inconsistent("f", "not well-defined on torsion"));
        }
    }
    for (k, d) in n.torsion.iter().enumerate() {
        let mut row = vec![BigInt::zero(); sn];
        row[n.free_rank + k] = d.clone();
        if !rel_p.lattice_contains(&seq.g.apply_row(&row)) {
            return Err(Error::inconsistent("g", "not well-defined on torsion"));
        }
    }

    // Equivariance: a_M f = f a_N and a_N g = g a_P modulo relations.
    let comm_f = m.action.mul(&seq.f);
    let f_comm = seq.f.mul(&n.action);
    for i in 0..sm {
        let diff: Vec<BigInt> = (0..sn).map(|j| &comm_f[(i, j)] - &f_comm[(i, j)]).collect();
        if !rel_n.lattice_contains(&diff) {
            return Err(Error::inconsistent("f", "does not commute with the action"));
        }
    }
    let comm_g = n.action.mul(&seq.g);
    let g_comm = seq.g.mul(&p.action);
    for i in 0..sn {
        let diff: Vec<BigInt> = (0..sp).map(|j| &comm_g[(i, j)] - &g_comm[(i, j)]).collect();
        if !rel_p.lattice_contains(&diff) {
            return Err(Error::inconsistent("g", "does not commute with the action"));
        }
    }

    // Exactness: f injective, im f = ker g, g surjective.
    let ker_f = preimage_lattice(&seq.f, &rel_n);
    if !ker_f.lattice_eq(&m.relation_lattice()) {
        return Err(Error::inconsistent("sequence", "f is not injective"));
    }
    let im_f = seq.f.stack(&rel_n).hnf();
    let ker_g = preimage_lattice(&seq.g, &rel_p);
    if !im_f.lattice_eq(&ker_g) {
        return Err(Error::inconsistent("sequence", "im f differs from ker g"));
    }
    let im_g = seq.g.stack(&rel_p).hnf();
    if !im_g.lattice_eq(&IntMat::identity(sp)) {
        return Err(Error::inconsistent("sequence", "g is not surjective"));
    }

    let h0 = [tate_h0(m)?, tate_h0(n)?, tate_h0(p)?];
    let h1 = [tate_h1(m)?, tate_h1(n)?, tate_h1(p)?];
    let lhs = group_order(&h0[0]) * group_order(&h0[2]) * group_order(&h1[1]);
    let rhs = group_order(&h0[1]) * group_order(&h1[0]) * group_order(&h1[2]);
    let qn = herbrand_quotient(n)?;
    let qm = herbrand_quotient(m)?;
    let qp = herbrand_quotient(p)?;
    Ok(HexagonReport {
        alternating_product_ok: lhs == rhs,
        herbrand_multiplicative: qn == qm * qp,
        h0,
        h1,
    })
}

/// Consistency predicate for quadratic `E/F` with trivial `Ĥ¹(T, U_E)`:
/// either the extension is unramified at every finite place, or the
/// kernel of the class-group norm contains an element of order 2. Returns
/// whether supplied data satisfies the implication (data with nontrivial
/// `Ĥ¹` is unconstrained).
pub fn h11_predicate_consistent(
    h1: &[BigInt],
    ramified_at_finite: bool,
    class_kernel_invariants: &[BigInt],
) -> bool {
    if !h1.is_empty() {
        return true;
    }
    if !ramified_at_finite {
        return true;
    }
    class_kernel_invariants
        .iter()
        .any(|d| (d % BigInt::from(2)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn act(n: u64, free: usize, torsion: &[i64], rows: &[Vec<i64>]) -> CyclicAction {
        CyclicAction::new(
            n,
            free,
            torsion.iter().map(|&d| BigInt::from(d)).collect(),
            IntMat::from_rows(rows),
        )
        .unwrap()
    }

    fn orders(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn trivial_action_on_z() {
        let c = act(2, 1, &[], &[vec![1]]);
        assert_eq!(orders(&tate_h0(&c).unwrap()), vec![2]);
        assert!(tate_h1(&c).unwrap().is_empty());
        assert_eq!(herbrand_quotient(&c).unwrap(), BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn regular_representation_is_cohomologically_trivial() {
        // Z[C₂] with the swap action.
        let c = act(2, 2, &[], &[vec![0, 1], vec![1, 0]]);
        assert!(tate_h0(&c).unwrap().is_empty());
        assert!(tate_h1(&c).unwrap().is_empty());
        // Z[H] with the cyclic C₃ action: both groups vanish (the fixed
        // lattice Z·N_H is exactly the norm image).
        let c = act(
            3,
            3,
            &[],
            &[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
        );
        assert!(tate_h0(&c).unwrap().is_empty());
        assert!(tate_h1(&c).unwrap().is_empty());
        // Induced modules Z[A]^k are cohomologically trivial.
        for n in 2u64..=4 {
            let s = n as usize;
            let mut perm = vec![vec![0i64; 2 * s]; 2 * s];
            for b in 0..2 {
                for i in 0..s {
                    perm[b * s + i][b * s + (i + 1) % s] = 1;
                }
            }
            let c = act(n, 2 * s, &[], &perm);
            assert!(tate_h0(&c).unwrap().is_empty(), "n={n}");
            assert!(tate_h1(&c).unwrap().is_empty(), "n={n}");
        }
    }

    #[test]
    fn sign_action_on_z() {
        let c = act(2, 1, &[], &[vec![-1]]);
        assert!(tate_h0(&c).unwrap().is_empty());
        assert_eq!(orders(&tate_h1(&c).unwrap()), vec![2]);
        assert_eq!(
            herbrand_quotient(&c).unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(2))
        );
    }

    #[test]
    fn finite_module_has_trivial_herbrand_quotient() {
        // Z/8 ⊕ Z/3 with the generator acting as multiplication by -1,
        // which has order 2 on the group.
        let c = act(2, 0, &[24], &[vec![-1]]);
        assert_eq!(herbrand_quotient(&c).unwrap(), BigRational::one());
        // Z/5 with multiplication by 2 under C₄.
        let c = act(4, 0, &[5], &[vec![2]]);
        assert_eq!(herbrand_quotient(&c).unwrap(), BigRational::one());
    }

    #[test]
    fn invalid_actions_rejected() {
        // Multiplication by 2 on Z/5 has order 4, not 2.
        assert!(CyclicAction::new(2, 0, vec![BigInt::from(5)], IntMat::from_rows(&[vec![2]])).is_err());
        // Torsion cannot land on a free coordinate.
        assert!(CyclicAction::new(
            2,
            1,
            vec![BigInt::from(2)],
            IntMat::from_rows(&[vec![1, 0], vec![1, 1]])
        )
        .is_err());
    }

    #[test]
    fn hexagon_on_multiplication_by_two() {
        // 0 → Z →×2→ Z → Z/2 → 0 with trivial C₂ action.
        let m = act(2, 1, &[], &[vec![1]]);
        let n = act(2, 1, &[], &[vec![1]]);
        let p = act(2, 0, &[2], &[vec![1]]);
        let seq = ShortExactSequence {
            m: &m,
            n: &n,
            p: &p,
            f: IntMat::from_rows(&[vec![2]]),
            g: IntMat::from_rows(&[vec![1]]),
        };
        let rep = check_hexagon(&seq).unwrap();
        assert!(rep.alternating_product_ok);
        assert!(rep.herbrand_multiplicative);
        assert_eq!(orders(&rep.h0[2]), vec![2]);
        assert_eq!(orders(&rep.h1[2]), vec![2]);
    }

    #[test]
    fn hexagon_on_split_sequence() {
        let m = act(2, 1, &[], &[vec![-1]]);
        let p = act(2, 0, &[4], &[vec![3]]);
        let n = act(2, 1, &[4], &[vec![-1, 0], vec![0, 3]]);
        let seq = ShortExactSequence {
            m: &m,
            n: &n,
            p: &p,
            f: IntMat::from_rows(&[vec![1, 0]]),
            g: IntMat::from_rows(&[vec![0], vec![1]]),
        };
        let rep = check_hexagon(&seq).unwrap();
        assert!(rep.alternating_product_ok);
        assert!(rep.herbrand_multiplicative);
    }

    #[test]
    fn h11_predicate_cases() {
        let even = vec![BigInt::from(4)];
        let odd = vec![BigInt::from(3)];
        // Trivial Ĥ¹ + ramified: needs an order-2 class element.
        assert!(h11_predicate_consistent(&[], true, &even));
        assert!(!h11_predicate_consistent(&[], true, &odd));
        assert!(!h11_predicate_consistent(&[], true, &[]));
        // Unramified or nontrivial Ĥ¹: unconstrained.
        assert!(h11_predicate_consistent(&[], false, &odd));
        assert!(h11_predicate_consistent(&[BigInt::from(2)], true, &odd));
    }

    #[test]
    fn hexagon_rejects_non_exact_input() {
        let m = act(2, 1, &[], &[vec![1]]);
        let n = act(2, 1, &[], &[vec![1]]);
        let p = act(2, 0, &[2], &[vec![1]]);
        // g ∘ f ≠ 0 here, so im f ⊄ ker g.
        let seq = ShortExactSequence {
            m: &m,
            n: &n,
            p: &p,
            f: IntMat::from_rows(&[vec![1]]),
            g: IntMat::from_rows(&[vec![1]]),
        };
        assert!(check_hexagon(&seq).is_err());
    }
}
