//! Exact integer matrices, Hermite and Smith normal forms, kernels and
//! lattice arithmetic.
//!
//! Lattices are row spans: a `k × n` matrix stands for the sublattice of
//! `Z^n` generated by its rows. Hermite forms are the canonical
//! representative of a lattice, Smith forms carry unimodular transforms on
//! both sides so quotients `Z^n / L` can be read off together with a
//! coordinate change.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::Result;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMat { rows: r, cols: c, data }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Like [`IntMat::from_bigint_rows`] but keeps the ambient dimension
    /// when the row list is empty.
    pub fn from_rows_in(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        if rows.is_empty() {
            return IntMat::zero(0, cols);
        }
        let m = Self::from_bigint_rows(rows);
        assert_eq!(m.cols, cols);
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    /// Apply the matrix to a row vector: `v ↦ v · self`.
    pub fn apply_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                out[j] += vi * &self[(i, j)];
            }
        }
        out
    }

    /// Apply to a column vector: `v ↦ self · v`.
    pub fn apply_col(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for j in 0..self.cols {
                    s += &self[(i, j)] * &v[j];
                }
                s
            })
            .collect()
    }

    pub fn stack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * &self[(src, j)];
            self[(dst, j)] += add;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    fn add_col_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }

    /// Canonical row Hermite normal form with zero rows dropped: pivots
    /// positive, entries above a pivot reduced into `[0, pivot)`.
    pub fn hnf(&self) -> IntMat {
        let mut a = self.clone();
        let mut r = 0usize;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            loop {
                // Smallest nonzero entry in column c at or below row r.
                let mut best: Option<usize> = None;
                for i in r..a.rows {
                    if !a[(i, c)].is_zero()
                        && best.is_none_or(|b| a[(i, c)].abs() < a[(b, c)].abs())
                    {
                        best = Some(i);
                    }
                }
                let Some(p) = best else { break };
                a.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..a.rows {
                    if !a[(i, c)].is_zero() {
                        let q = -(&a[(i, c)] / &a[(r, c)]);
                        a.add_row_mul(i, r, &q);
                        if !a[(i, c)].is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if !a[(r, c)].is_zero() {
                if a[(r, c)].is_negative() {
                    a.negate_row(r);
                }
                for i in 0..r {
                    let q = -a[(i, c)].div_floor(&a[(r, c)]);
                    a.add_row_mul(i, r, &q);
                }
                r += 1;
            }
        }
        IntMat {
            rows: r,
            cols: a.cols,
            data: a.data[..r * a.cols].to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        self.hnf().rows
    }

    /// Lattice equality: identical canonical Hermite forms.
    pub fn lattice_eq(&self, other: &IntMat) -> bool {
        self.hnf() == other.hnf()
    }

    /// Is `v` in the row span over `Z`?
    pub fn lattice_contains(&self, v: &[BigInt]) -> bool {
        let h = self.hnf();
        let mut v = v.to_vec();
        let mut row = 0usize;
        for c in 0..h.cols {
            if row < h.rows && !h[(row, c)].is_zero() {
                let (q, rem) = v[c].div_rem(&h[(row, c)]);
                if rem.is_zero() {
                    for j in c..h.cols {
                        let sub = &q * &h[(row, j)];
                        v[j] -= sub;
                    }
                } else {
                    return false;
                }
                row += 1;
            } else if !v[c].is_zero() {
                return false;
            }
        }
        true
    }

    /// Basis of `{v : self · v = 0}`, returned as rows of length `ncols`.
    /// The basis is saturated (it spans the full rational kernel over `Z`).
    pub fn right_kernel(&self) -> IntMat {
        let s = self.snf();
        let r = s.nonzero();
        let v = &s.v;
        let mut rows = Vec::new();
        for j in r..self.cols {
            rows.push((0..self.cols).map(|i| v[(i, j)].clone()).collect());
        }
        IntMat::from_rows_in(self.cols, rows)
    }

    /// Saturation of the row span: the smallest sublattice of `Z^n`
    /// containing it with torsion-free quotient.
    pub fn saturate(&self) -> IntMat {
        self.right_kernel().right_kernel().hnf()
    }

    /// Fraction-free determinant (Bareiss); matrix must be square.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Smith normal form with transforms: returns `(d, u, uinv, v, vinv)`
    /// with `u · self · v` diagonal, `d` the diagonal in a divisibility
    /// chain of nonnegative integers.
    pub fn snf(&self) -> Snf {
        let (r, c) = (self.rows, self.cols);
        let mut w = SnfWork {
            a: self.clone(),
            u: IntMat::identity(r),
            uinv: IntMat::identity(r),
            v: IntMat::identity(c),
            vinv: IntMat::identity(c),
        };
        let n = r.min(c);
        w.eliminate();
        let d = (0..n).map(|t| w.a[(t, t)].clone()).collect();
        Snf {
            d,
            u: w.u,
            uinv: w.uinv,
            v: w.v,
            vinv: w.vinv,
        }
    }
}

/// Elementary-operation tracker: every row/column operation applied to the
/// working matrix is mirrored on `u`/`v` and inverted on `uinv`/`vinv`, so
/// `u · original · v = a` holds throughout.
struct SnfWork {
    a: IntMat,
    u: IntMat,
    uinv: IntMat,
    v: IntMat,
    vinv: IntMat,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.uinv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.vinv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.uinv.negate_col(i);
    }

    fn add_row_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_mul(dst, src, q);
        self.u.add_row_mul(dst, src, q);
        self.uinv.add_col_mul(src, dst, &-q);
    }

    fn add_col_mul(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_mul(dst, src, q);
        self.v.add_col_mul(dst, src, q);
        self.vinv.add_row_mul(src, dst, &-q);
    }

    /// Full diagonalization with the divisibility chain enforced step by
    /// step: once the pivot at `(t, t)` has cleared its row and column, any
    /// trailing entry it does not divide is folded into row `t`, which
    /// strictly shrinks the pivot on the next round.
    fn eliminate(&mut self) {
        let (r, c) = (self.a.rows, self.a.cols);
        for t in 0..r.min(c) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..r {
                    for j in t..c {
                        if !self.a[(i, j)].is_zero()
                            && best
                                .is_none_or(|(bi, bj)| self.a[(i, j)].abs() < self.a[(bi, bj)].abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..r {
                    if !self.a[(i, t)].is_zero() {
                        let q = -(&self.a[(i, t)] / &self.a[(t, t)]);
                        self.add_row_mul(i, t, &q);
                        if !self.a[(i, t)].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..c {
                    if !self.a[(t, j)].is_zero() {
                        let q = -(&self.a[(t, j)] / &self.a[(t, t)]);
                        self.add_col_mul(j, t, &q);
                        if !self.a[(t, j)].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    continue;
                }
                let offender = (t + 1..r)
                    .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&self.a[(i, j)] % &self.a[(t, t)]).is_zero());
                match offender {
                    Some((i, _)) => self.add_row_mul(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form `u · a · v = diag(d)` together with the inverse
/// transforms.
pub struct Snf {
    pub d: Vec<BigInt>,
    pub u: IntMat,
    pub uinv: IntMat,
    pub v: IntMat,
    pub vinv: IntMat,
}

impl Snf {
    /// Number of nonzero invariant factors.
    pub fn nonzero(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// Invariant factors different from 1 (the elementary divisors of the
    /// cokernel torsion).
    pub fn nontrivial(&self) -> Vec<BigInt> {
        self.d
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .cloned()
            .collect()
    }
}

/// Index `[Z^n : L]` of the row span of `sub` inside `Z^n`; errors if the
/// row span has rank below `n`.
pub fn lattice_index(sub: &IntMat, ambient_rank: usize) -> Result<BigInt> {
    assert_eq!(sub.ncols(), ambient_rank, "coordinate length mismatch");
    let s = sub.snf();
    let r = s.nonzero();
    if r < ambient_rank {
        return Err(Error::RankDeficient {
            found: r,
            need: ambient_rank,
        });
    }
    Ok(s.d.iter().take(ambient_rank).product())
}

/// Relative index `(A : B)` for nested lattices `B ⊆ A` of equal rank.
pub fn relative_index(sup: &IntMat, sub: &IntMat) -> Result<BigInt> {
    let ha = sup.hnf();
    let hb = sub.hnf();
    if ha.nrows() != hb.nrows() {
        return Err(Error::RankDeficient {
            found: hb.nrows(),
            need: ha.nrows(),
        });
    }
    for i in 0..hb.nrows() {
        if !ha.lattice_contains(hb.row(i)) {
            return Err(Error::inconsistent("lattice", "sub is not contained in sup"));
        }
    }
    // Express the rows of hb in the basis ha and take the determinant.
    let coords: Vec<Vec<BigRational>> = (0..hb.nrows())
        .map(|i| {
            in_basis(&ha, hb.row(i)).expect("containment checked above")
        })
        .collect();
    let det = rat_det(&coords);
    debug_assert!(det.is_integer());
    Ok(det.to_integer().abs())
}

/// Coordinates of `v` in the row basis `basis` (rows independent), over `Q`.
/// Returns `None` if `v` is outside the rational row span.
pub fn in_basis(basis: &IntMat, v: &[BigInt]) -> Option<Vec<BigRational>> {
    // Solve x · basis = v by Gaussian elimination on the transpose.
    let k = basis.nrows();
    let n = basis.ncols();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..k)
                .map(|i| BigRational::from(basis[(i, j)].clone()))
                .collect();
            row.push(BigRational::from(v[j].clone()));
            row
        })
        .collect();
    let sol = rat_solve_in(&mut aug, k)?;
    Some(sol)
}

/// Solve an augmented system (rows of length `vars + 1`), returning a
/// solution of the first `vars` columns; `None` if inconsistent.
/// Underdetermined free variables are set to zero.
pub fn rat_solve_in(aug: &mut [Vec<BigRational>], vars: usize) -> Option<Vec<BigRational>> {
    let rows = aug.len();
    let mut pivot_of_col = vec![usize::MAX; vars];
    let mut r = 0usize;
    for c in 0..vars {
        let Some(p) = (r..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for j in c..=vars {
            aug[r][j] = &aug[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in c..=vars {
                    let sub = &f * &aug[r][j];
                    aug[i][j] = &aug[i][j] - sub;
                }
            }
        }
        pivot_of_col[c] = r;
        r += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for row in aug.iter().skip(r) {
        if !row[vars].is_zero() {
            return None;
        }
    }
    Some(
        (0..vars)
            .map(|c| {
                if pivot_of_col[c] == usize::MAX {
                    BigRational::zero()
                } else {
                    aug[pivot_of_col[c]][vars].clone()
                }
            })
            .collect(),
    )
}

/// `{x ∈ Z^s : x · map ∈ rowspan(target)}` for a linear map given on row
/// vectors. The result is the exact preimage lattice (not its saturation).
pub fn preimage_lattice(map: &IntMat, target: &IntMat) -> IntMat {
    let s = map.nrows();
    assert_eq!(map.ncols(), target.ncols());
    let stacked = map.stack(target);
    let kernel = stacked.transpose().right_kernel();
    // Rows (v, w) satisfy v·map + w·target = 0; project onto v.
    let rows: Vec<Vec<BigInt>> = (0..kernel.nrows())
        .map(|i| kernel.row(i)[..s].to_vec())
        .collect();
    IntMat::from_rows_in(s, rows).hnf()
}

/// Invariants of the quotient `P / Q` of nested lattices `Q ⊆ P` in the
/// same ambient space: `(torsion invariants > 1, free rank)`.
pub fn subquotient(p: &IntMat, q: &IntMat) -> Result<(Vec<BigInt>, usize)> {
    let pb = p.hnf();
    let qb = q.hnf();
    let rank_p = pb.nrows();
    let mut coord_rows = Vec::new();
    for i in 0..qb.nrows() {
        let coords = in_basis(&pb, qb.row(i))
            .ok_or_else(|| Error::inconsistent("lattice", "Q is not contained in P"))?;
        if coords.iter().any(|c| !c.is_integer()) {
            return Err(Error::inconsistent("lattice", "Q is not contained in P"));
        }
        coord_rows.push(coords.into_iter().map(|c| c.to_integer()).collect());
    }
    if coord_rows.is_empty() {
        coord_rows.push(vec![BigInt::zero(); rank_p]);
    }
    let snf = IntMat::from_bigint_rows(coord_rows).snf();
    let free = rank_p - snf.nonzero();
    Ok((snf.nontrivial(), free))
}

/// Exact determinant of a square rational matrix.
pub fn rat_det(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    if n == 0 {
        return BigRational::one();
    }
    assert!(a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        det *= m[k][k].clone();
        let inv = m[k][k].recip();
        for j in k..n {
            m[k][j] = &m[k][j] * &inv;
        }
        for i in k + 1..n {
            if !m[i][k].is_zero() {
                let f = m[i][k].clone();
                for j in k..n {
                    let sub = &f * &m[k][j];
                    m[i][j] = &m[i][j] - sub;
                }
            }
        }
    }
    det
}

/// Inverse of a square rational matrix; `None` if singular.
pub fn rat_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let inv = aug[c][c].recip();
        for j in 0..2 * n {
            aug[c][j] = &aug[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..2 * n {
                    let sub = &f * &aug[c][j];
                    aug[i][j] = &aug[i][j] - sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
