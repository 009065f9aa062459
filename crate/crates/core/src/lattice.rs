//! Integer linear algebra: Smith and Hermite normal forms, integer kernels,
//! saturation and lattice indices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::laurent::ExponentVector;
use crate::algebra::resultant::bareiss_det;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix dimensions do not match: {0}")]
    Shape(String),
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("sublattice is not contained in the rational span of the superlattice")]
    NotInSpan,
    #[error("sublattice is in the rational span but not contained in the lattice")]
    NotSublattice,
    #[error("affine span needs at least two points")]
    TooFewPoints,
}

/// Dense integer matrix, row-major. Serialized as a list of rows of JSON
/// integers, which must fit in 64 bits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    cols: usize,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<MatrixRepr> for IntegerMatrix {
    type Error = LatticeError;
    fn try_from(r: MatrixRepr) -> Result<Self, LatticeError> {
        IntegerMatrix::from_rows(
            r.cols,
            r.rows
                .into_iter()
                .map(|row| row.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }
}

impl From<IntegerMatrix> for MatrixRepr {
    fn from(m: IntegerMatrix) -> Self {
        MatrixRepr {
            cols: m.cols,
            rows: m
                .to_rows()
                .into_iter()
                .map(|row| {
                    row.iter()
                        .map(|x| i64::try_from(x).expect("matrix entry exceeds 64 bits"))
                        .collect()
                })
                .collect(),
        }
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(LatticeError::Shape(format!(
                    "row of length {} in {cols} columns",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: r,
            cols,
            entries,
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("rows of equal length")
    }

    pub fn from_exponents(vs: &[ExponentVector], cols: usize) -> Self {
        Self::from_rows(
            cols,
            vs.iter()
                .map(|v| v.0.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
        .expect("exponent vectors of equal length")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        bareiss_det(self.to_rows())
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    fn select_rows(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            rows: range.len(),
            cols: self.cols,
            entries: self.entries[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` in Smith form.
/// `v_inv` is the inverse of `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Smith normal form by elementary operations, pivoting on the entry of
/// smallest absolute value.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(m);
    let mut v = IntegerMatrix::identity(n);
    let mut v_inv = IntegerMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, d, v, v_inv };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut dirty = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                // V^-1 receives the inverse operation: row t -= q row j.
                v_inv.add_row(t, j, &-q.clone());
                if !d.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility of the block.
            let p = d.get(t, t).clone();
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d, v, v_inv }
}

/// Row-style Hermite normal form: the returned rows span the same lattice,
/// are in echelon form with positive pivots, and entries above each pivot
/// are reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(a: &IntegerMatrix) -> IntegerMatrix {
    let mut h = a.clone();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Euclid down the column until a single nonzero entry remains at r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !h.get(i, c).is_zero()
                    && best.map_or(true, |b| h.get(i, c).abs() < h.get(b, c).abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            let mut done = true;
            for i in r + 1..m {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(r, c));
                h.add_row(i, r, &q);
                if !h.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
        }
        let p = h.get(r, c).clone();
        for i in 0..r {
            let q = -h.get(i, c).div_floor(&p);
            h.add_row(i, r, &q);
        }
        r += 1;
    }
    h.select_rows(0..r)
}

/// Lattice spanned by the rows of a full-row-rank basis matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: IntegerMatrix,
}

impl Sublattice {
    pub fn new(basis: IntegerMatrix) -> Result<Self, LatticeError> {
        if basis.rank() != basis.rows {
            return Err(LatticeError::DependentBasis);
        }
        Ok(Self {
            ambient_rank: basis.cols,
            basis,
        })
    }

    /// Lattice generated by arbitrary (possibly dependent) rows.
    pub fn generated_by(gens: &IntegerMatrix) -> Self {
        Self {
            ambient_rank: gens.cols,
            basis: hermite_normal_form(gens),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let Ok(row) = IntegerMatrix::from_rows(self.ambient_rank, vec![v.to_vec()]) else {
            return false;
        };
        coordinates(&row, &self.basis).is_ok()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_rank
    }

    /// Same lattice (as sets).
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.ambient_rank == other.ambient_rank
            && hermite_normal_form(&self.basis) == hermite_normal_form(&other.basis)
    }
}

/// Integer coordinates `X` with `X * sup = sub`.
fn coordinates(sub: &IntegerMatrix, sup: &IntegerMatrix) -> Result<IntegerMatrix, LatticeError> {
    if sub.cols != sup.cols {
        return Err(LatticeError::Shape("ambient ranks differ".into()));
    }
    let snf = smith_normal_form(sup);
    let divisors = snf.elementary_divisors();
    let k = divisors.len();
    // sup = U^-1 D V^-1, so X U^-1 D = sub V.
    let sv = sub.mul(&snf.v)?;
    let mut y = IntegerMatrix::zeros(sub.rows, sup.rows);
    for i in 0..sub.rows {
        for j in 0..sv.cols {
            let x = sv.get(i, j);
            if j >= k {
                if !x.is_zero() {
                    return Err(LatticeError::NotInSpan);
                }
                continue;
            }
            let (q, r) = x.div_rem(&divisors[j]);
            if !r.is_zero() {
                return Err(LatticeError::NotSublattice);
            }
            y.set(i, j, q);
        }
    }
    y.mul(&snf.u)
}

/// Basis of the full integer left kernel `{v : v A = 0}`, in Hermite form.
pub fn kernel_basis(a: &IntegerMatrix) -> Sublattice {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let rows = snf.u.select_rows(r..a.rows);
    Sublattice {
        ambient_rank: a.rows,
        basis: hermite_normal_form(&rows),
    }
}

/// All integer points in the rational span of `l`.
pub fn saturation(l: &Sublattice) -> Sublattice {
    let snf = smith_normal_form(&l.basis);
    let rows = snf.v_inv.select_rows(0..l.rank());
    Sublattice {
        ambient_rank: l.ambient_rank,
        basis: hermite_normal_form(&rows),
    }
}

/// Index of a lattice in another, or infinite when ranks differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeIndex {
    Finite(#[serde(with = "crate::serde_util::bigint_string")] BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn is_odd(&self) -> bool {
        matches!(self, LatticeIndex::Finite(n) if n.is_odd())
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// `[sup : sub]`.
pub fn lattice_index(sub: &Sublattice, sup: &Sublattice) -> Result<LatticeIndex, LatticeError> {
    let x = coordinates(&sub.basis, &sup.basis)?;
    if sub.rank() != sup.rank() {
        return Ok(LatticeIndex::Infinite);
    }
    Ok(LatticeIndex::Finite(x.det().abs()))
}

/// Index in `Z^n` of the lattice of a lattice's generators.
pub fn index_in_ambient(gens: &IntegerMatrix) -> LatticeIndex {
    let snf = smith_normal_form(gens);
    let divisors = snf.elementary_divisors();
    if divisors.len() < gens.cols {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(divisors.iter().product())
    }
}

/// Index in `Z^n` of the lattice generated by differences of points.
pub fn affine_span_index(points: &[ExponentVector]) -> Result<LatticeIndex, LatticeError> {
    if points.len() < 2 {
        return Err(LatticeError::TooFewPoints);
    }
    let n = points[0].len();
    let diffs: Vec<ExponentVector> = points[1..].iter().map(|p| p.sub(&points[0])).collect();
    Ok(index_in_ambient(&IntegerMatrix::from_exponents(&diffs, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows)
    }

    fn check_snf(a: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(
            s.v.mul(&s.v_inv).unwrap(),
            IntegerMatrix::identity(a.cols())
        );
        assert_eq!(s.u.det().abs(), BigInt::one());
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&m(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(
            s.elementary_divisors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        let s = check_snf(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
    }

    #[test]
    fn worked_example_kernel() {
        let a = m(&[vec![2, 1], vec![2, -1], vec![-5, 0], vec![1, 0]]);
        let k = kernel_basis(&a);
        assert_eq!(k.rank(), 2);
        for v in [[1, 1, 1, 1], [2, 2, 1, -3]] {
            let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            assert!(k.contains(&v));
        }
    }

    #[test]
    fn indices() {
        let two = Sublattice::new(m(&[vec![2, 0], vec![0, 2]])).unwrap();
        let full = Sublattice::new(IntegerMatrix::identity(2)).unwrap();
        assert_eq!(
            lattice_index(&two, &full).unwrap(),
            LatticeIndex::Finite(BigInt::from(4))
        );
        let l = Sublattice::new(m(&[vec![2, 0]])).unwrap();
        assert_eq!(saturation(&l).basis(), &m(&[vec![1, 0]]));
        assert_eq!(lattice_index(&l, &full).unwrap(), LatticeIndex::Infinite);
        let pts: Vec<ExponentVector> = [[0, 0], [2, 0], [0, 2]]
            .iter()
            .map(|p| ExponentVector(p.to_vec()))
            .collect();
        assert_eq!(
            affine_span_index(&pts).unwrap(),
            LatticeIndex::Finite(BigInt::from(4))
        );
    }
}
