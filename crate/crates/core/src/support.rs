//! Support sets: dense decompositions, convex hulls, normalized volume and
//! planar mixed volume.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::laurent::ExponentVector;
use crate::lattice::IntegerMatrix;

/// Default cap on `(W, v0)` candidate pairs examined by
/// [`search_decomposition`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("operation is only implemented for two variables, got {0}")]
    NotPlanar(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("search budget of {0} candidates exceeded")]
    BudgetExceeded(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// A finite set of exponent vectors of a common length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SupportRepr", into = "SupportRepr")]
pub struct SupportSet {
    nvars: usize,
    points: BTreeSet<ExponentVector>,
}

#[derive(Serialize, Deserialize)]
struct SupportRepr {
    nvars: usize,
    points: Vec<Vec<i64>>,
}

impl TryFrom<SupportRepr> for SupportSet {
    type Error = SupportError;
    fn try_from(r: SupportRepr) -> Result<Self, SupportError> {
        SupportSet::new(r.nvars, r.points.into_iter().map(ExponentVector))
    }
}

impl From<SupportSet> for SupportRepr {
    fn from(s: SupportSet) -> Self {
        SupportRepr {
            nvars: s.nvars,
            points: s.points.into_iter().map(|p| p.0).collect(),
        }
    }
}

impl SupportSet {
    pub fn new(
        nvars: usize,
        points: impl IntoIterator<Item = ExponentVector>,
    ) -> Result<Self, SupportError> {
        if nvars == 0 {
            return Err(SupportError::InvalidParams("nvars must be positive".into()));
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != nvars {
                return Err(SupportError::Dimension(format!(
                    "point {p} in {nvars} variables"
                )));
            }
            set.insert(p);
        }
        Ok(Self { nvars, points: set })
    }

    pub fn from_i64(nvars: usize, points: &[&[i64]]) -> Self {
        Self::new(nvars, points.iter().map(|p| ExponentVector::from(*p)))
            .expect("consistent lengths")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &ExponentVector> {
        self.points.iter()
    }

    pub fn to_vec(&self) -> Vec<ExponentVector> {
        self.points.iter().cloned().collect()
    }

    pub fn contains(&self, p: &ExponentVector) -> bool {
        self.points.contains(p)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            nvars: self.nvars,
            points: self.points.union(&other.points).cloned().collect(),
        }
    }

    pub fn translate(&self, by: &ExponentVector) -> Self {
        Self {
            nvars: self.nvars,
            points: self.points.iter().map(|p| p.add(by)).collect(),
        }
    }
}

/// Witness that a support is `psi(d Delta^ell) ∪ W`, with
/// `psi(lambda) = v0 + sum lambda_m v_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseDecomposition {
    pub d: u32,
    pub ell: usize,
    /// `n x ell`; column `m` is `v_{m+1}`.
    pub psi_linear: IntegerMatrix,
    /// `v0`.
    pub psi_offset: ExponentVector,
    pub w: Vec<ExponentVector>,
}

impl DenseDecomposition {
    /// Builds a decomposition from `v0`, the vectors `v_1..v_ell` and `W`.
    pub fn from_vectors(
        d: u32,
        v0: ExponentVector,
        vs: &[ExponentVector],
        w: Vec<ExponentVector>,
    ) -> Self {
        let n = v0.len();
        let rows = (0..n)
            .map(|i| vs.iter().map(|v| BigInt::from(v.0[i])).collect())
            .collect();
        Self {
            d,
            ell: vs.len(),
            psi_linear: IntegerMatrix::from_rows(vs.len(), rows).expect("consistent lengths"),
            psi_offset: v0,
            w,
        }
    }

    pub fn nvars(&self) -> usize {
        self.psi_offset.len()
    }

    /// `v_{m+1}` (0-based `m`).
    pub fn v(&self, m: usize) -> ExponentVector {
        ExponentVector(
            (0..self.nvars())
                .map(|i| i64::try_from(self.psi_linear.get(i, m)).expect("exponent fits in i64"))
                .collect(),
        )
    }

    pub fn vs(&self) -> Vec<ExponentVector> {
        (0..self.ell).map(|m| self.v(m)).collect()
    }

    pub fn psi(&self, lambda: &ExponentVector) -> ExponentVector {
        let mut out = self.psi_offset.clone();
        for (m, &l) in lambda.0.iter().enumerate() {
            out = out.add(&self.v(m).scale(l));
        }
        out
    }

    /// Images of the simplex points, in [`simplex_lattice_points`] order.
    pub fn images(&self) -> Vec<ExponentVector> {
        simplex_lattice_points(self.d, self.ell)
            .iter()
            .map(|l| self.psi(l))
            .collect()
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of lattice points of `d Delta^ell`.
pub fn simplex_point_count(d: u32, ell: usize) -> u64 {
    binomial(d as u64 + ell as u64, ell as u64)
}

/// Lattice points of the dilated simplex, by increasing total degree and
/// decreasing lexicographic order within a degree.
pub fn simplex_lattice_points(d: u32, ell: usize) -> Vec<ExponentVector> {
    fn rec(prefix: &mut Vec<i64>, left: usize, total: i64, out: &mut Vec<ExponentVector>) {
        if left == 0 {
            if total == 0 {
                out.push(ExponentVector(prefix.clone()));
            }
            return;
        }
        for a in (0..=total).rev() {
            prefix.push(a);
            rec(prefix, left - 1, total - a, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for t in 0..=d as i64 {
        rec(&mut Vec::new(), ell, t, &mut out);
    }
    out
}

/// Whether the points are affinely independent.
pub fn affinely_independent(points: &[ExponentVector]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let n = points[0].len();
    if points.len() > n + 1 {
        return false;
    }
    let diffs: Vec<ExponentVector> = points[1..].iter().map(|p| p.sub(&points[0])).collect();
    IntegerMatrix::from_exponents(&diffs, n).rank() == diffs.len()
}

/// Outcome of [`verify_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub valid: bool,
    pub w_independent: bool,
    /// Points of the support not produced by the decomposition.
    pub missing: Vec<ExponentVector>,
    /// Points produced by the decomposition that are not in the support.
    pub extra: Vec<ExponentVector>,
}

/// Checks `psi(d Delta^ell) ∪ W = A` as sets and that `W` is affinely
/// independent.
pub fn verify_decomposition(
    a: &SupportSet,
    dec: &DenseDecomposition,
) -> Result<DecompositionCheck, SupportError> {
    let n = a.nvars();
    if dec.nvars() != n
        || dec.psi_linear.rows() != n
        || dec.psi_linear.cols() != dec.ell
        || dec.w.iter().any(|w| w.len() != n)
    {
        return Err(SupportError::Dimension(
            "decomposition does not match the support".into(),
        ));
    }
    let mut produced: BTreeSet<ExponentVector> = dec.images().into_iter().collect();
    produced.extend(dec.w.iter().cloned());
    let w_independent = dec.w.len() == n && affinely_independent(&dec.w);
    let missing: Vec<_> = a.points.difference(&produced).cloned().collect();
    let extra: Vec<_> = produced.difference(&a.points).cloned().collect();
    Ok(DecompositionCheck {
        valid: w_independent && missing.is_empty() && extra.is_empty(),
        w_independent,
        missing,
        extra,
    })
}

/// Searches for a decomposition in which the simplex images are distinct
/// and disjoint from `W`, so `|A| = binom(d+ell, ell) + n`.
///
/// `W` ranges over `n`-subsets of `A` in lexicographic order, `v0` over
/// the remaining points, and `v_1..v_ell` over increasing `ell`-subsets of
/// the rest taken as the degree-one images. The first witness is returned.
pub fn search_decomposition(
    a: &SupportSet,
    d: u32,
    ell: usize,
    budget: u64,
) -> Result<Option<DenseDecomposition>, SupportError> {
    if d == 0 || ell == 0 {
        return Err(SupportError::InvalidParams(
            "d and ell must be positive".into(),
        ));
    }
    let n = a.nvars();
    let pts = a.to_vec();
    let k = simplex_point_count(d, ell) as usize;
    if pts.len() != k + n {
        return Ok(None);
    }
    let simplex = simplex_lattice_points(d, ell);
    let mut spent = 0u64;
    for w_idx in combinations(pts.len(), n) {
        let w: Vec<ExponentVector> = w_idx.iter().map(|&i| pts[i].clone()).collect();
        if !affinely_independent(&w) {
            continue;
        }
        let rest: Vec<ExponentVector> = (0..pts.len())
            .filter(|i| !w_idx.contains(i))
            .map(|i| pts[i].clone())
            .collect();
        let rest_set: BTreeSet<&ExponentVector> = rest.iter().collect();
        for v0 in &rest {
            spent += 1;
            if spent > budget {
                return Err(SupportError::BudgetExceeded(budget));
            }
            let others: Vec<&ExponentVector> = rest.iter().filter(|p| *p != v0).collect();
            for pick in combinations(others.len(), ell) {
                let vs: Vec<ExponentVector> = pick.iter().map(|&i| others[i].sub(v0)).collect();
                let mut seen = BTreeSet::new();
                let ok = simplex.iter().all(|lambda| {
                    let mut p = v0.clone();
                    for (m, &l) in lambda.0.iter().enumerate() {
                        p = p.add(&vs[m].scale(l));
                    }
                    rest_set.contains(&p) && seen.insert(p)
                });
                if ok {
                    return Ok(Some(DenseDecomposition::from_vectors(
                        d,
                        v0.clone(),
                        &vs,
                        w,
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Increasing `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut state: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let current = state.clone()?;
        let mut next = current.clone();
        let mut i = k;
        loop {
            if i == 0 {
                state = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                state = Some(next);
                break;
            }
        }
        Some(current)
    })
}

/// Convex polygon with integer vertices in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope2D {
    pub vertices: Vec<[i64; 2]>,
}

impl Polytope2D {
    /// Twice the area (the normalized area).
    pub fn doubled_area(&self) -> u128 {
        let v = &self.vertices;
        if v.len() < 3 {
            return 0;
        }
        let mut s: i128 = 0;
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            s += a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128;
        }
        s.unsigned_abs()
    }
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i128 {
    (a[0] - o[0]) as i128 * (b[1] - o[1]) as i128 - (a[1] - o[1]) as i128 * (b[0] - o[0]) as i128
}

/// Convex hull by the monotone chain; collinear points are dropped.
pub fn convex_hull(points: &[[i64; 2]]) -> Polytope2D {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Polytope2D { vertices: pts };
    }
    let mut hull: Vec<[i64; 2]> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Polytope2D { vertices: hull }
}

fn planar_points(a: &SupportSet) -> Result<Vec<[i64; 2]>, SupportError> {
    if a.nvars() != 2 {
        return Err(SupportError::NotPlanar(a.nvars()));
    }
    Ok(a.points().map(|p| [p.0[0], p.0[1]]).collect())
}

/// `2! * vol(conv A)` for a planar support.
pub fn normalized_volume(a: &SupportSet) -> Result<u128, SupportError> {
    Ok(convex_hull(&planar_points(a)?).doubled_area())
}

/// Mixed volume of the Newton polygons, normalized so that two standard
/// triangles give 1 (the BKK count).
pub fn mixed_volume_2d(p: &SupportSet, q: &SupportSet) -> Result<u128, SupportError> {
    let hp = convex_hull(&planar_points(p)?);
    let hq = convex_hull(&planar_points(q)?);
    let mut sums = Vec::with_capacity(hp.vertices.len() * hq.vertices.len());
    for a in &hp.vertices {
        for b in &hq.vertices {
            sums.push([a[0] + b[0], a[1] + b[1]]);
        }
    }
    let total = convex_hull(&sums).doubled_area();
    // vol(P+Q) - vol(P) - vol(Q) with ordinary areas.
    Ok((total - hp.doubled_area() - hq.doubled_area()) / 2)
}
