//! Gale duality for dense fewnomial systems: diagonalization onto the
//! `W`-monomials, relation lattices, the dual system and its hypotheses.

mod jacobian;

pub use jacobian::{jacobian_witness, random_generic_polynomial, random_instance, JacobianWitness};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::laurent::{ExponentVector, LaurentPolynomial};
use crate::algebra::rational::Rational;
use crate::algebra::resultant::bareiss_det;
use crate::lattice::{
    affine_span_index, kernel_basis, lattice_index, saturation, IntegerMatrix, LatticeError,
    LatticeIndex, Sublattice,
};
use crate::support::{
    simplex_lattice_points, verify_decomposition, DenseDecomposition, SupportError, SupportSet,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaleError {
    #[error("system has {polys} polynomials in {nvars} variables")]
    Shape { polys: usize, nvars: usize },
    #[error("decomposition does not match the support: missing {missing:?}, extra {extra:?}")]
    InvalidDecomposition {
        missing: Vec<ExponentVector>,
        extra: Vec<ExponentVector>,
    },
    #[error("decomposition is not injective or overlaps W")]
    DegenerateDecomposition,
    #[error("coefficient block on the W-monomials is singular (rank {rank} of {n})")]
    SingularWBlock { rank: usize, n: usize },
    #[error("relation basis has rank {found}, expected {expected}")]
    RelationRank { expected: usize, found: usize },
    #[error("relation row {0} has the wrong width")]
    RelationWidth(usize),
    #[error("row {row} is not a relation among V and W")]
    NotARelation { row: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("denominators failed to cancel in the Jacobian witness")]
    JacobianNotPolynomial,
    #[error("expected {expected} auxiliary polynomials, got {found}")]
    AuxiliaryCount { expected: usize, found: usize },
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// `n` polynomials with a common support; row `i` of `coefficients` lists
/// the coefficients of `f_i` in the (sorted) order of `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FewnomialSystem {
    pub support: SupportSet,
    pub coefficients: Vec<Vec<Rational>>,
}

impl FewnomialSystem {
    pub fn from_polynomials(polys: &[LaurentPolynomial]) -> Result<Self, GaleError> {
        let nvars = polys.first().map_or(0, |p| p.nvars());
        if polys.len() != nvars || polys.iter().any(|p| p.nvars() != nvars) {
            return Err(GaleError::Shape {
                polys: polys.len(),
                nvars,
            });
        }
        let support = SupportSet::new(nvars, polys.iter().flat_map(|p| p.support()))?;
        let coefficients = polys
            .iter()
            .map(|p| support.points().map(|e| p.coeff(e)).collect())
            .collect();
        Ok(Self {
            support,
            coefficients,
        })
    }

    pub fn nvars(&self) -> usize {
        self.support.nvars()
    }

    pub fn polynomials(&self) -> Vec<LaurentPolynomial> {
        self.coefficients
            .iter()
            .map(|row| {
                LaurentPolynomial::from_terms(
                    self.nvars(),
                    row.iter().cloned().zip(self.support.points().cloned()),
                )
                .expect("support points have nvars entries")
            })
            .collect()
    }
}

/// The system `x^(w_i - v0) = h_i(x^(v_1), ..., x^(v_ell))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalizedSystem {
    pub decomposition: DenseDecomposition,
    /// Polynomials in `ell` variables supported on `d Delta^ell`.
    pub h: Vec<LaurentPolynomial>,
}

impl DiagonalizedSystem {
    pub fn nvars(&self) -> usize {
        self.decomposition.nvars()
    }

    pub fn ell(&self) -> usize {
        self.decomposition.ell
    }

    /// `W - v0`.
    pub fn w_translated(&self) -> Vec<ExponentVector> {
        self.decomposition
            .w
            .iter()
            .map(|w| w.sub(&self.decomposition.psi_offset))
            .collect()
    }

    /// Rows `v_1, ..., v_ell, w_1 - v0, ..., w_n - v0`; relations are the
    /// integer vectors in its left kernel.
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let mut rows = self.decomposition.vs();
        rows.extend(self.w_translated());
        IntegerMatrix::from_exponents(&rows, self.nvars())
    }

    /// The saturated lattice of all relations.
    pub fn default_relations(&self) -> Sublattice {
        kernel_basis(&self.exponent_matrix())
    }

    /// The system `x^(v0) (x^(w_i - v0) - h_i(x^V)) = 0`, which diagonalizes
    /// back to `self`.
    pub fn reconstruct(&self) -> FewnomialSystem {
        let n = self.nvars();
        let dec = &self.decomposition;
        let polys: Vec<LaurentPolynomial> = self
            .h
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let mut terms = vec![(Rational::one(), dec.w[i].clone())];
                for (lambda, c) in h.terms() {
                    terms.push((-c.clone(), dec.psi(lambda)));
                }
                LaurentPolynomial::from_terms(n, terms).expect("lengths match")
            })
            .collect();
        FewnomialSystem::from_polynomials(&polys).expect("square system")
    }
}

/// Solves the system for its `W`-monomials.
pub fn diagonalize(
    sys: &FewnomialSystem,
    dec: &DenseDecomposition,
) -> Result<DiagonalizedSystem, GaleError> {
    let n = sys.nvars();
    if sys.coefficients.len() != n {
        return Err(GaleError::Shape {
            polys: sys.coefficients.len(),
            nvars: n,
        });
    }
    let check = verify_decomposition(&sys.support, dec)?;
    if !check.valid {
        return Err(GaleError::InvalidDecomposition {
            missing: check.missing,
            extra: check.extra,
        });
    }
    let simplex = simplex_lattice_points(dec.d, dec.ell);
    let images = dec.images();
    let mut distinct: std::collections::BTreeSet<&ExponentVector> = images.iter().collect();
    if distinct.len() != images.len() || dec.w.iter().any(|w| !distinct.insert(w)) {
        return Err(GaleError::DegenerateDecomposition);
    }
    let index_of = |e: &ExponentVector| {
        sys.support
            .points()
            .position(|p| p == e)
            .expect("verified point")
    };
    // Augmented matrix [C_W | C_rest] solved in place for C_W^{-1} C_rest.
    let w_cols: Vec<usize> = dec.w.iter().map(index_of).collect();
    let rest_cols: Vec<usize> = images.iter().map(index_of).collect();
    let mut m: Vec<Vec<Rational>> = sys
        .coefficients
        .iter()
        .map(|row| {
            w_cols
                .iter()
                .chain(&rest_cols)
                .map(|&c| row[c].clone())
                .collect()
        })
        .collect();
    let rank = gauss_jordan(&mut m, n);
    if rank < n {
        return Err(GaleError::SingularWBlock { rank, n });
    }
    let h = (0..n)
        .map(|i| {
            let terms = simplex
                .iter()
                .enumerate()
                .map(|(p, lambda)| (-m[i][n + p].clone(), lambda.clone()));
            LaurentPolynomial::from_terms(dec.ell, terms).expect("simplex points have ell entries")
        })
        .collect();
    Ok(DiagonalizedSystem {
        decomposition: dec.clone(),
        h,
    })
}

/// Reduces the first `pivots` columns to the identity; returns their rank.
fn gauss_jordan(m: &mut [Vec<Rational>], pivots: usize) -> usize {
    let rows = m.len();
    let mut r = 0;
    for c in 0..pivots {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// One relation `sum beta_m v_m + sum gamma_i (w_i - v0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub beta: Vec<i64>,
    pub gamma: Vec<i64>,
}

impl Relation {
    pub fn concat(&self) -> Vec<i64> {
        self.beta.iter().chain(&self.gamma).copied().collect()
    }
}

/// The dual system `y^(beta_j) h(y)^(gamma_j) = 1`, `j = 1..ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleSystem {
    pub d: u32,
    pub h: Vec<LaurentPolynomial>,
    pub relations: Vec<Relation>,
}

impl GaleSystem {
    pub fn ell(&self) -> usize {
        self.relations.len()
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn relation_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(
            &self
                .relations
                .iter()
                .map(Relation::concat)
                .collect::<Vec<_>>(),
        )
    }
}

/// Pairs the diagonalized system with a relation basis of rank `ell`.
pub fn build_gale_system(
    diag: &DiagonalizedSystem,
    relations: &Sublattice,
) -> Result<GaleSystem, GaleError> {
    let (ell, n) = (diag.ell(), diag.nvars());
    let basis = relations.basis();
    if basis.cols() != ell + n {
        return Err(GaleError::RelationWidth(0));
    }
    if relations.rank() != ell {
        return Err(GaleError::RelationRank {
            expected: ell,
            found: relations.rank(),
        });
    }
    let exps = diag.exponent_matrix();
    let product = basis.mul(&exps)?;
    if let Some(row) = (0..product.rows()).find(|&r| product.row(r).iter().any(|x| !x.is_zero())) {
        return Err(GaleError::NotARelation { row });
    }
    let relations = (0..basis.rows())
        .map(|r| {
            let row: Vec<i64> = basis
                .row(r)
                .iter()
                .map(|x| i64::try_from(x).expect("relation entry fits in i64"))
                .collect();
            Relation {
                beta: row[..ell].to_vec(),
                gamma: row[ell..].to_vec(),
            }
        })
        .collect();
    Ok(GaleSystem {
        d: diag.decomposition.d,
        h: diag.h.clone(),
        relations,
    })
}

/// Builds a relation lattice from explicit rows (which must be independent).
pub fn relations_from_rows(rows: &[Vec<i64>]) -> Result<Sublattice, GaleError> {
    Ok(Sublattice::new(IntegerMatrix::from_i64_rows(rows))?)
}

fn monomial_times_h_powers(
    ell: usize,
    h: &[LaurentPolynomial],
    beta: &ExponentVector,
    gamma: &[i64],
) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::monomial(ell, Rational::one(), beta.clone());
    for (hi, &g) in h.iter().zip(gamma) {
        if g > 0 {
            out = &out * &hi.pow(g as u32);
        }
    }
    out
}

fn signed_form(gs: &GaleSystem, j: usize, scale: i64) -> Result<LaurentPolynomial, GaleError> {
    let rel = gs.relations.get(j).ok_or(GaleError::IndexOutOfRange {
        index: j + 1,
        max: gs.relations.len(),
    })?;
    let beta = ExponentVector(rel.beta.iter().map(|b| b * scale).collect());
    let gamma: Vec<i64> = rel.gamma.iter().map(|g| g * scale).collect();
    let (bp, bm) = beta.split_signs();
    let gp: Vec<i64> = gamma.iter().map(|&g| g.max(0)).collect();
    let gm: Vec<i64> = gamma.iter().map(|&g| (-g).max(0)).collect();
    let ell = gs.ell();
    Ok(&monomial_times_h_powers(ell, &gs.h, &bp, &gp)
        - &monomial_times_h_powers(ell, &gs.h, &bm, &gm))
}

/// `y^(beta+) h^(gamma+) - y^(beta-) h^(gamma-)` for relation `j`
/// (0-based).
pub fn gale_equation_as_polynomial(
    gs: &GaleSystem,
    j: usize,
) -> Result<LaurentPolynomial, GaleError> {
    signed_form(gs, j, 1)
}

/// `g_k = y^(2 beta+) h^(2 gamma+) - y^(2 beta-) h^(2 gamma-)` (0-based `k`).
pub fn build_gk(gs: &GaleSystem, k: usize) -> Result<LaurentPolynomial, GaleError> {
    signed_form(gs, k, 2)
}

/// `y^(beta+) h^(gamma+) + y^(beta-) h^(gamma-)`; its product with the
/// unsquared equation is `g_k`.
pub fn conjugate_form(gs: &GaleSystem, k: usize) -> Result<LaurentPolynomial, GaleError> {
    let minus = signed_form(gs, k, 1)?;
    let rel = &gs.relations[k];
    let (bp, _) = ExponentVector(rel.beta.clone()).split_signs();
    let gp: Vec<i64> = rel.gamma.iter().map(|&g| g.max(0)).collect();
    let plus_part = monomial_times_h_powers(gs.ell(), &gs.h, &bp, &gp);
    Ok(&plus_part.scale(&Rational::from_integer(BigInt::from(2))) - &minus)
}

/// Lattice hypotheses of structured Gale duality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleHypotheses {
    pub span_index: LatticeIndex,
    pub span_odd: bool,
    pub relation_index_in_saturation: LatticeIndex,
    pub relation_odd: bool,
    pub positive_case_ok: bool,
    pub real_case_ok: bool,
}

/// Computes the index of the affine span of `A` and of the relation
/// lattice in its saturation.
pub fn check_hypotheses(
    a: &SupportSet,
    relations: &Sublattice,
    dec: &DenseDecomposition,
) -> Result<GaleHypotheses, GaleError> {
    let n = a.nvars();
    if relations.ambient_rank() != dec.ell + n {
        return Err(GaleError::RelationWidth(0));
    }
    let span_index = affine_span_index(&a.to_vec())?;
    let relation_index_in_saturation = lattice_index(relations, &saturation(relations))?;
    let span_odd = span_index.is_odd();
    let relation_odd = relation_index_in_saturation.is_odd();
    let positive_case_ok = span_index.finite().is_some() && relations.rank() == dec.ell;
    Ok(GaleHypotheses {
        span_index,
        span_odd,
        relation_index_in_saturation,
        relation_odd,
        positive_case_ok,
        real_case_ok: positive_case_ok && span_odd && relation_odd,
    })
}

/// Row `(-b_k, beta_k, gamma_k)` with `b_k = sum beta + d sum gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogenizedRelationRow {
    pub b: i64,
    pub beta: Vec<i64>,
    pub gamma: Vec<i64>,
}

impl HomogenizedRelationRow {
    pub fn new(d: u32, rel: &Relation) -> Self {
        let b = rel.beta.iter().sum::<i64>() + d as i64 * rel.gamma.iter().sum::<i64>();
        Self {
            b,
            beta: rel.beta.clone(),
            gamma: rel.gamma.clone(),
        }
    }

    pub fn entries(&self) -> Vec<i64> {
        std::iter::once(-self.b)
            .chain(self.beta.iter().copied())
            .chain(self.gamma.iter().copied())
            .collect()
    }
}

pub fn homogenized_rows(gs: &GaleSystem) -> Vec<HomogenizedRelationRow> {
    gs.relations
        .iter()
        .map(|r| HomogenizedRelationRow::new(gs.d, r))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinorOrders {
    /// Square minors of every size `1..=rows`.
    All,
    /// Only minors of size `rows`.
    Maximal,
}

/// A vanishing minor, identified by its row and column indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingMinor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// `None` when every minor of the requested orders is nonzero.
pub fn check_genericity_minors(
    rows: &[HomogenizedRelationRow],
    orders: MinorOrders,
) -> Option<VanishingMinor> {
    let m: Vec<Vec<i64>> = rows.iter().map(|r| r.entries()).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let sizes: Vec<usize> = match orders {
        MinorOrders::All => (1..=nrows.min(ncols)).collect(),
        MinorOrders::Maximal => vec![nrows.min(ncols)],
    };
    for s in sizes {
        for rs in subsets(nrows, s) {
            for cs in subsets(ncols, s) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                    .collect();
                if bareiss_det(sub).is_zero() {
                    return Some(VanishingMinor {
                        rows: rs.clone(),
                        cols: cs,
                    });
                }
            }
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
