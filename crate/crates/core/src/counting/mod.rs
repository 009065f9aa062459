//! Certified counting of real solutions of bivariate Laurent systems.
//!
//! Solutions are computed through a rational univariate representation:
//! after a random shear `s = x + lambda y` every solution in the torus is
//! `(x(s0), y(s0))` for a real root `s0` of a squarefree `R(s)`, and both
//! coordinate maps are certified by exact back-substitution modulo `R`.

mod fiber;
mod modular;

pub use modular::{Modulus, Residue};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::laurent::LaurentPolynomial;
use crate::algebra::rational::{common_denominator, rat, to_decimal_string, to_f64, Rational};
use crate::algebra::resultant::{first_subresultant_y, resultant_y, BiZPoly};
use crate::algebra::roots::{
    isolate_zpoly, refine_enclosure, refine_sign, vanishes_at, IsolatedRoot,
};
use crate::algebra::univariate::UniPoly;
use crate::algebra::zpoly::{self, ZPoly};
use crate::algebra::AlgebraError;
use crate::bounds::BoundReport;
use crate::gale::{
    build_gale_system, check_hypotheses, diagonalize, gale_equation_as_polynomial, FewnomialSystem,
    GaleError, GaleSystem,
};
use crate::support::DenseDecomposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("counting needs two polynomials in two variables")]
    NotBivariate,
    #[error("a polynomial of the system is zero")]
    ZeroPolynomial,
    #[error("the polynomials share a common factor; the solution set is infinite")]
    CommonFactor,
    #[error("no separating shear found in {0} attempts")]
    ShearBudget(u32),
    #[error("point {point} lies on the hypersurface of constraint {constraint}")]
    BoundaryDegeneracy { point: usize, constraint: usize },
    #[error("region has {found} coordinate requirements, expected 2")]
    RegionArity { found: usize },
    #[error("Gale counting is implemented for ell = 2 only (got {0})")]
    UnsupportedEll(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gale(#[from] GaleError),
}

/// Controls the choice of shears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub seed: u64,
    pub max_attempts: u32,
    /// Shears are drawn from `[-B, B] \ {0}`, with `B` doubling per attempt.
    pub initial_bound: i64,
    /// Tries exactly these shears, in order, instead of random ones.
    pub shears: Option<Vec<i64>>,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_attempts: 16,
            initial_bound: 4,
            shears: None,
        }
    }
}

/// Sign requirement on a coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SignRequirement {
    Positive,
    Nonzero,
    Any,
}

/// Sign requirement on a polynomial constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstraintRequirement {
    Positive,
    Nonzero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionSpec {
    pub coordinate_signs: Vec<SignRequirement>,
    pub h_constraints: Vec<(LaurentPolynomial, ConstraintRequirement)>,
}

impl RegionSpec {
    pub fn any() -> Self {
        Self {
            coordinate_signs: vec![SignRequirement::Any; 2],
            h_constraints: Vec::new(),
        }
    }

    pub fn positive_orthant() -> Self {
        Self {
            coordinate_signs: vec![SignRequirement::Positive; 2],
            h_constraints: Vec::new(),
        }
    }

    /// `{y != 0, h_i(y) != 0}`.
    pub fn gale_real(h: &[LaurentPolynomial]) -> Self {
        Self {
            coordinate_signs: vec![SignRequirement::Nonzero; 2],
            h_constraints: h
                .iter()
                .map(|p| (p.clone(), ConstraintRequirement::Nonzero))
                .collect(),
        }
    }

    /// `{y > 0, h_i(y) > 0}`.
    pub fn gale_positive(h: &[LaurentPolynomial]) -> Self {
        Self {
            coordinate_signs: vec![SignRequirement::Positive; 2],
            h_constraints: h
                .iter()
                .map(|p| (p.clone(), ConstraintRequirement::Positive))
                .collect(),
        }
    }
}

/// The representation shared by all points of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub lambda: i64,
    /// Squarefree polynomial whose roots are the `s`-values of the torus
    /// solutions.
    pub defining: UniPoly,
    pub x_of_s: UniPoly,
    pub y_of_s: UniPoly,
}

/// A real solution: its root of the defining polynomial and decided data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountedPoint {
    pub root: IsolatedRoot,
    pub signs: [i8; 2],
    pub nondegenerate: bool,
    /// Coordinates rounded to three decimals.
    pub preview: [String; 2],
    /// Midpoints of the enclosures behind the previews.
    pub approx: [f64; 2],
    /// Signs of the Gale constraints `h_i`, when counted as a Gale system.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub h_signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ReportRepr")]
pub struct CountReport {
    pub total_real: usize,
    pub per_region: BTreeMap<String, usize>,
    /// Distinct solutions in `(C^*)^2`.
    pub complex_torus_count: usize,
    pub points: Vec<CountedPoint>,
    pub representation: Representation,
}

#[derive(Deserialize)]
struct RootRepr {
    #[serde(with = "crate::serde_util::rational_string")]
    lo: Rational,
    #[serde(with = "crate::serde_util::rational_string")]
    hi: Rational,
}

#[derive(Deserialize)]
struct PointRepr {
    root: RootRepr,
    signs: [i8; 2],
    nondegenerate: bool,
    preview: [String; 2],
    approx: [f64; 2],
    #[serde(default)]
    h_signs: Vec<i8>,
}

#[derive(Deserialize)]
struct ReportRepr {
    total_real: usize,
    per_region: BTreeMap<String, usize>,
    complex_torus_count: usize,
    points: Vec<PointRepr>,
    representation: Representation,
}

impl TryFrom<ReportRepr> for CountReport {
    type Error = AlgebraError;

    fn try_from(r: ReportRepr) -> Result<Self, AlgebraError> {
        let defining = r.representation.defining.to_zpoly();
        let points = r
            .points
            .into_iter()
            .map(|p| {
                Ok(CountedPoint {
                    root: IsolatedRoot::from_parts(defining.clone(), p.root.lo, p.root.hi)?,
                    signs: p.signs,
                    nondegenerate: p.nondegenerate,
                    preview: p.preview,
                    approx: p.approx,
                    h_signs: p.h_signs,
                })
            })
            .collect::<Result<_, AlgebraError>>()?;
        Ok(CountReport {
            total_real: r.total_real,
            per_region: r.per_region,
            complex_torus_count: r.complex_torus_count,
            points,
            representation: r.representation,
        })
    }
}

/// A real solution as an algebraic point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicPoint2D {
    pub defining: UniPoly,
    pub root: IsolatedRoot,
    pub coord_map: (UniPoly, UniPoly),
}

impl CountReport {
    pub fn region(&self, name: &str) -> usize {
        self.per_region.get(name).copied().unwrap_or(0)
    }

    pub fn nondegenerate_count(&self) -> usize {
        self.points.iter().filter(|p| p.nondegenerate).count()
    }

    pub fn algebraic_point(&self, i: usize) -> Option<AlgebraicPoint2D> {
        let p = self.points.get(i)?;
        Some(AlgebraicPoint2D {
            defining: self.representation.defining.clone(),
            root: p.root.clone(),
            coord_map: (
                self.representation.x_of_s.clone(),
                self.representation.y_of_s.clone(),
            ),
        })
    }

    /// Three-decimal `(x, y)` previews in report order.
    pub fn previews(&self) -> Vec<(String, String)> {
        self.points
            .iter()
            .map(|p| (p.preview[0].clone(), p.preview[1].clone()))
            .collect()
    }
}

/// Integer polynomial in two variables with nonnegative exponents.
#[derive(Clone, Debug)]
struct IntPoly2 {
    terms: Vec<(usize, usize, BigInt)>,
}

impl IntPoly2 {
    /// Positive rational multiple of `p`; `p` must be an ordinary polynomial.
    fn from_polynomial(p: &LaurentPolynomial) -> Self {
        let den = common_denominator(p.terms().map(|(_, c)| c));
        let mut terms: Vec<(usize, usize, BigInt)> = p
            .terms()
            .map(|(e, c)| {
                (
                    e.0[0] as usize,
                    e.0[1] as usize,
                    (c * Rational::from_integer(den.clone())).to_integer(),
                )
            })
            .collect();
        let g = terms.iter().fold(BigInt::zero(), |g, t| g.gcd(&t.2));
        if !g.is_zero() && !g.is_one() {
            for t in terms.iter_mut() {
                t.2 /= &g;
            }
        }
        Self { terms }
    }

    fn total_degree(&self) -> usize {
        self.terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    fn is_constant(&self) -> bool {
        self.total_degree() == 0
    }

    fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(a, b, c)| match var {
                0 if *a > 0 => Some((a - 1, *b, c * BigInt::from(*a))),
                1 if *b > 0 => Some((*a, b - 1, c * BigInt::from(*b))),
                _ => None,
            })
            .collect();
        Self { terms }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut map: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (a, b, c) in &self.terms {
            for (a2, b2, c2) in &other.terms {
                *map.entry((a + a2, b + b2)).or_insert_with(BigInt::zero) += c * c2;
            }
        }
        Self {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((a, b), c)| (a, b, c))
                .collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut map: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (a, b, c) in &self.terms {
            *map.entry((*a, *b)).or_insert_with(BigInt::zero) += c;
        }
        for (a, b, c) in &other.terms {
            *map.entry((*a, *b)).or_insert_with(BigInt::zero) -= c;
        }
        Self {
            terms: map
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((a, b), c)| (a, b, c))
                .collect(),
        }
    }

    /// Restriction to `x = 0` (as a polynomial in `y`) or `y = 0`.
    fn axis(&self, zero_var: usize) -> ZPoly {
        let mut out: ZPoly = Vec::new();
        for (a, b, c) in &self.terms {
            let (z, other) = if zero_var == 0 { (*a, *b) } else { (*b, *a) };
            if z == 0 {
                if out.len() <= other {
                    out.resize(other + 1, BigInt::zero());
                }
                out[other] += c;
            }
        }
        zpoly::trimmed(out)
    }

    /// `p(s - lambda y, y)` as coefficients in `y` over `Z[s]`.
    fn shear(&self, lambda: i64) -> BiZPoly {
        let deg = self.total_degree();
        let mut out: BiZPoly = vec![Vec::new(); deg + 1];
        let lam = BigInt::from(-lambda);
        for (a, b, c) in &self.terms {
            let mut binom = BigInt::one();
            let mut lam_pow = BigInt::one();
            for k in 0..=*a {
                let coeff = c * &binom * &lam_pow;
                let (ey, es) = (b + k, a - k);
                if out[ey].len() <= es {
                    out[ey].resize(es + 1, BigInt::zero());
                }
                out[ey][es] += coeff;
                binom = binom * BigInt::from(a - k) / BigInt::from(k + 1);
                lam_pow *= &lam;
            }
        }
        for c in out.iter_mut() {
            zpoly::trim(c);
        }
        out
    }

    /// Horner in `x` over inner sums in powers of `y`, so only
    /// `deg_x + deg_y` products need reducing.
    fn eval(&self, m: &Modulus, x: &Residue, y: &Residue) -> Residue {
        let max_a = self.terms.iter().map(|t| t.0).max().unwrap_or(0);
        let max_b = self.terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut yp = vec![m.one()];
        for i in 1..=max_b {
            yp.push(m.mul(&yp[i - 1], y));
        }
        let mut inner = vec![m.zero(); max_a + 1];
        for (a, b, c) in &self.terms {
            inner[*a] = m.add(
                &inner[*a],
                &m.scale(&yp[*b], &Rational::from_integer(c.clone())),
            );
        }
        let mut acc = m.zero();
        for term in inner.iter().rev() {
            acc = m.add(&m.mul(&acc, x), term);
        }
        acc
    }
}

/// Clears a Laurent polynomial to a primitive integer polynomial not
/// divisible by either variable.
fn clear(p: &LaurentPolynomial) -> Result<IntPoly2, CountError> {
    if p.nvars() != 2 {
        return Err(CountError::NotBivariate);
    }
    if p.is_zero() {
        return Err(CountError::ZeroPolynomial);
    }
    let (shifted, _) = p.clear_denominators()?;
    Ok(IntPoly2::from_polynomial(&shifted))
}

fn to_ypoly(p: &BiZPoly) -> Vec<UniPoly> {
    p.iter().map(|c| UniPoly::from_zpoly(c)).collect()
}

/// `sum c_i s^i lambda^(deg - i)`, whose roots are `lambda` times those of `g`.
fn scale_roots(g: &[BigInt], lambda: i64) -> ZPoly {
    let Some(deg) = zpoly::degree(g) else {
        return Vec::new();
    };
    (0..=deg)
        .map(|i| &g[i] * num_traits::pow(BigInt::from(lambda), deg - i))
        .collect()
}

/// Real common zeros of `p` and `q` with nonzero coordinates.
pub fn count_real_solutions_2d(
    p: &LaurentPolynomial,
    q: &LaurentPolynomial,
) -> Result<CountReport, CountError> {
    count_real_solutions_2d_with(p, q, &CountOptions::default())
}

pub fn count_real_solutions_2d_with(
    p: &LaurentPolynomial,
    q: &LaurentPolynomial,
    opts: &CountOptions,
) -> Result<CountReport, CountError> {
    let pc = clear(p)?;
    let qc = clear(q)?;
    if pc.is_constant() || qc.is_constant() {
        return Ok(empty_report(0));
    }
    let gx = zpoly::gcd(&pc.axis(0), &qc.axis(0));
    let gy = zpoly::gcd(&pc.axis(1), &qc.axis(1));
    let (dp, dq) = (pc.total_degree(), qc.total_degree());

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let attempts = opts
        .shears
        .as_ref()
        .map_or(opts.max_attempts as usize, |s| s.len());
    for attempt in 0..attempts {
        let lambda = match &opts.shears {
            Some(list) => list[attempt],
            None => {
                let bound = opts
                    .initial_bound
                    .max(1)
                    .saturating_mul(1 << attempt.min(40));
                loop {
                    let l = rng.gen_range(-bound..=bound);
                    if l != 0 {
                        break l;
                    }
                }
            }
        };
        if lambda == 0 {
            continue;
        }
        let ps = pc.shear(lambda);
        let qs = qc.shear(lambda);
        if ps[dp].is_empty() || qs[dq].is_empty() {
            continue;
        }
        let r = resultant_y(&ps, &qs);
        if zpoly::is_zero(&r) {
            return Err(CountError::CommonFactor);
        }
        let rstar = zpoly::squarefree(&r);
        let axis = zpoly::mul(&scale_roots(&gx, lambda), &gy);
        let zs = if zpoly::degree(&axis).unwrap_or(0) > 0 {
            zpoly::squarefree(&axis)
        } else {
            vec![BigInt::one()]
        };
        let g = zpoly::gcd(&rstar, &zs);
        let rprime = zpoly::positive_primitive(&zpoly::div_exact(&rstar, &g).expect("gcd divides"));
        if zpoly::degree(&g).unwrap_or(0) > 0
            && !fiber::fibers_on_axes(
                &to_ypoly(&ps),
                &to_ypoly(&qs),
                &UniPoly::from_zpoly(&g),
                lambda,
            )
        {
            continue;
        }
        if zpoly::degree(&rprime).unwrap_or(0) == 0 {
            return Ok(empty_report(lambda));
        }
        let (a, b) = if dq == 1 {
            (qs[1].clone(), qs[0].clone())
        } else if dp == 1 {
            (ps[1].clone(), ps[0].clone())
        } else {
            first_subresultant_y(&ps, &qs)
        };
        if zpoly::is_zero(&a) || zpoly::degree(&zpoly::gcd(&a, &rprime)).unwrap_or(0) > 0 {
            continue;
        }
        let m = Modulus::new(&rprime);
        let Some(a_inv) = m.inverse(&m.from_zpoly(&a)) else {
            continue;
        };
        let y = m.sub(&m.zero(), &m.mul(&m.from_zpoly(&b), &a_inv));
        let x = m.sub(
            &m.generator(),
            &m.scale(&y, &Rational::from_integer(lambda.into())),
        );
        if !pc.eval(&m, &x, &y).is_zero() || !qc.eval(&m, &x, &y).is_zero() {
            continue;
        }
        return build_report(&pc, &qc, lambda, &m, &x, &y);
    }
    Err(CountError::ShearBudget(attempts as u32))
}

fn empty_report(lambda: i64) -> CountReport {
    let mut report = CountReport {
        total_real: 0,
        per_region: BTreeMap::new(),
        complex_torus_count: 0,
        points: Vec::new(),
        representation: Representation {
            lambda,
            defining: UniPoly::one(),
            x_of_s: UniPoly::zero(),
            y_of_s: UniPoly::zero(),
        },
    };
    tally(&mut report);
    report
}

const REGION_NAMES: [&str; 7] = [
    "positive",
    "quadrant_pp",
    "quadrant_mp",
    "quadrant_mm",
    "quadrant_pm",
    "nondegenerate",
    "nondegenerate_positive",
];

fn tally(report: &mut CountReport) {
    let mut map: BTreeMap<String, usize> =
        REGION_NAMES.iter().map(|n| (n.to_string(), 0)).collect();
    for p in &report.points {
        let quadrant = match p.signs {
            [1, 1] => "quadrant_pp",
            [-1, 1] => "quadrant_mp",
            [-1, -1] => "quadrant_mm",
            _ => "quadrant_pm",
        };
        *map.get_mut(quadrant).unwrap() += 1;
        if p.signs == [1, 1] {
            *map.get_mut("positive").unwrap() += 1;
            if p.nondegenerate {
                *map.get_mut("nondegenerate_positive").unwrap() += 1;
            }
        }
        if p.nondegenerate {
            *map.get_mut("nondegenerate").unwrap() += 1;
        }
    }
    report.total_real = report.points.len();
    report.per_region = map;
}

/// Evaluates residues at the real roots of the modulus `R` as
/// `(q R') mod R` over `R'`; the numerator has far smaller coefficients than
/// `q` itself, so short root enclosures suffice.
struct RootEvaluator<'a> {
    m: &'a Modulus,
    deriv: UniPoly,
    deriv_residue: Residue,
}

/// A numerator prepared for evaluation at many roots.
struct Prepared {
    num: UniPoly,
    /// `gcd(R, num)`; the value vanishes exactly at its roots.
    zero_factor: ZPoly,
}

impl<'a> RootEvaluator<'a> {
    fn new(m: &'a Modulus) -> Self {
        let d = zpoly::derivative(m.poly());
        Self {
            m,
            deriv: UniPoly::from_zpoly(&d),
            deriv_residue: m.from_zpoly(&d),
        }
    }

    fn prepare(&self, q: &Residue) -> Prepared {
        let n = self.m.mul(q, &self.deriv_residue);
        let zero_factor = if n.is_zero() {
            self.m.poly().clone()
        } else {
            zpoly::gcd(self.m.poly(), n.numerator())
        };
        Prepared {
            num: n.to_unipoly(),
            zero_factor,
        }
    }

    fn sign(&self, q: &Prepared, root: &mut IsolatedRoot) -> Result<i8, CountError> {
        if vanishes_at(&q.zero_factor, root) {
            return Ok(0);
        }
        Ok(refine_sign(&q.num, root)? * refine_sign(&self.deriv, root)?)
    }

    /// Midpoint of an enclosure of `q(root)` narrower than `10^-9`.
    fn midpoint(&self, q: &Prepared, root: &mut IsolatedRoot) -> Result<Rational, CountError> {
        let target = rat(1, 1_000_000_000);
        let mut width = rat(1, 1_000_000_000_000);
        loop {
            let (a, b) = refine_enclosure(&q.num, root, &width)?;
            let (c, d) = refine_enclosure(&self.deriv, root, &width)?;
            if c.is_positive() || d.is_negative() {
                let quotients = [&a / &c, &a / &d, &b / &c, &b / &d];
                let lo = quotients.iter().min().expect("four values");
                let hi = quotients.iter().max().expect("four values");
                if hi - lo < target {
                    return Ok((lo + hi) / Rational::from_integer(2.into()));
                }
            }
            width = width * rat(1, 1_000_000);
        }
    }
}

fn build_report(
    pc: &IntPoly2,
    qc: &IntPoly2,
    lambda: i64,
    m: &Modulus,
    x: &Residue,
    y: &Residue,
) -> Result<CountReport, CountError> {
    let ev = RootEvaluator::new(m);
    let jac = pc
        .derivative(0)
        .mul(&qc.derivative(1))
        .sub(&pc.derivative(1).mul(&qc.derivative(0)));
    let jac_n = ev.prepare(&jac.eval(m, x, y));
    let (xn, yn) = (ev.prepare(x), ev.prepare(y));
    let iso = isolate_zpoly(m.poly());
    let mut located = Vec::new();
    for root in iso.into_roots() {
        let mut work = root.clone();
        let signs = [ev.sign(&xn, &mut work)?, ev.sign(&yn, &mut work)?];
        if signs.contains(&0) {
            continue;
        }
        let nondegenerate = ev.sign(&jac_n, &mut work)? != 0;
        let mx = ev.midpoint(&xn, &mut work)?;
        let my = ev.midpoint(&yn, &mut work)?;
        let point = CountedPoint {
            root,
            signs,
            nondegenerate,
            preview: [to_decimal_string(&mx, 3), to_decimal_string(&my, 3)],
            approx: [to_f64(&mx), to_f64(&my)],
            h_signs: Vec::new(),
        };
        located.push((mx, my, point));
    }
    located.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut report = CountReport {
        total_real: 0,
        per_region: BTreeMap::new(),
        complex_torus_count: m.degree(),
        points: located.into_iter().map(|t| t.2).collect(),
        representation: Representation {
            lambda,
            defining: UniPoly::from_zpoly(m.poly()),
            x_of_s: x.to_unipoly(),
            y_of_s: y.to_unipoly(),
        },
    };
    tally(&mut report);
    Ok(report)
}

/// Re-checks `p(x(s), y(s)) = q(x(s), y(s)) = 0` modulo the defining
/// polynomial of the report.
pub fn verify_certificates(
    report: &CountReport,
    p: &LaurentPolynomial,
    q: &LaurentPolynomial,
) -> Result<bool, CountError> {
    if report.complex_torus_count == 0 {
        return Ok(true);
    }
    let rep = &report.representation;
    let m = Modulus::new(&rep.defining.to_zpoly());
    let x = m.from_unipoly(&rep.x_of_s);
    let y = m.from_unipoly(&rep.y_of_s);
    Ok(clear(p)?.eval(&m, &x, &y).is_zero() && clear(q)?.eval(&m, &x, &y).is_zero())
}

/// Sign of `h` at each point of the report, decided exactly.
fn constraint_signs(report: &CountReport, h: &LaurentPolynomial) -> Result<Vec<i8>, CountError> {
    if report.points.is_empty() {
        return Ok(Vec::new());
    }
    if h.is_zero() {
        return Ok(vec![0; report.points.len()]);
    }
    let rep = &report.representation;
    let m = Modulus::new(&rep.defining.to_zpoly());
    let x = m.from_unipoly(&rep.x_of_s);
    let y = m.from_unipoly(&rep.y_of_s);
    let (shifted, shift) = h.clear_denominators()?;
    let ev = RootEvaluator::new(&m);
    let value = ev.prepare(&IntPoly2::from_polynomial(&shifted).eval(&m, &x, &y));
    report
        .points
        .iter()
        .map(|p| {
            // h = shifted * x^(-shift); the monomial's sign comes from the
            // coordinate signs.
            let mono: i8 = p
                .signs
                .iter()
                .zip(&shift.0)
                .map(|(&s, &k)| if k % 2 == 0 { 1 } else { s })
                .product();
            Ok(ev.sign(&value, &mut p.root.clone())? * mono)
        })
        .collect()
}

/// Number of points of the report in the region.
pub fn classify(report: &CountReport, region: &RegionSpec) -> Result<usize, CountError> {
    if region.coordinate_signs.len() != 2 {
        return Err(CountError::RegionArity {
            found: region.coordinate_signs.len(),
        });
    }
    let mut keep = vec![true; report.points.len()];
    for (i, p) in report.points.iter().enumerate() {
        for (req, &s) in region.coordinate_signs.iter().zip(&p.signs) {
            keep[i] &= match req {
                SignRequirement::Positive => s > 0,
                SignRequirement::Nonzero => s != 0,
                SignRequirement::Any => true,
            };
        }
    }
    for (c, (h, req)) in region.h_constraints.iter().enumerate() {
        for (i, s) in constraint_signs(report, h)?.into_iter().enumerate() {
            match req {
                ConstraintRequirement::Nonzero if s == 0 => {
                    return Err(CountError::BoundaryDegeneracy {
                        point: i,
                        constraint: c,
                    })
                }
                ConstraintRequirement::Positive => keep[i] &= s > 0,
                ConstraintRequirement::Nonzero => {}
            }
        }
    }
    Ok(keep.into_iter().filter(|&k| k).count())
}

/// Counts the Gale system (`ell = 2`). Regions: `m_real` (off the
/// hypersurfaces `h_i = 0`), `delta` and `boundary` (some `h_i = 0`).
pub fn count_gale(gs: &GaleSystem) -> Result<CountReport, CountError> {
    count_gale_with(gs, &CountOptions::default())
}

pub fn count_gale_with(gs: &GaleSystem, opts: &CountOptions) -> Result<CountReport, CountError> {
    if gs.ell() != 2 || gs.h.iter().any(|h| h.nvars() != 2) {
        return Err(CountError::UnsupportedEll(gs.ell()));
    }
    let e1 = gale_equation_as_polynomial(gs, 0)?;
    let e2 = gale_equation_as_polynomial(gs, 1)?;
    let mut report = count_real_solutions_2d_with(&e1, &e2, opts)?;
    let signs: Vec<Vec<i8>> =
        gs.h.iter()
            .map(|h| constraint_signs(&report, h))
            .collect::<Result<_, _>>()?;
    for (i, p) in report.points.iter_mut().enumerate() {
        p.h_signs = signs.iter().map(|s| s[i]).collect();
    }
    let boundary = report
        .points
        .iter()
        .filter(|p| p.h_signs.contains(&0))
        .count();
    let delta = report
        .points
        .iter()
        .filter(|p| p.signs == [1, 1] && p.h_signs.iter().all(|&s| s > 0))
        .count();
    let delta_nondeg = report
        .points
        .iter()
        .filter(|p| p.nondegenerate && p.signs == [1, 1] && p.h_signs.iter().all(|&s| s > 0))
        .count();
    report.per_region.insert("boundary".into(), boundary);
    report
        .per_region
        .insert("m_real".into(), report.total_real - boundary);
    report.per_region.insert("delta".into(), delta);
    report
        .per_region
        .insert("nondegenerate_delta".into(), delta_nondeg);
    Ok(report)
}

/// Outcome of comparing the counts of a system and its Gale dual.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceVerdict {
    pub original_positive: usize,
    pub gale_delta: usize,
    pub positive_equal: bool,
    pub real_case_ok: bool,
    pub original_real: usize,
    pub gale_m_real: usize,
    /// Compared only when the odd-index hypotheses hold.
    pub real_equal: Option<bool>,
}

impl CorrespondenceVerdict {
    pub fn holds(&self) -> bool {
        self.positive_equal && self.real_equal != Some(false)
    }
}

/// Counts the system and its Gale dual (saturated relations) and compares.
pub fn verify_correspondence(
    sys: &FewnomialSystem,
    dec: &DenseDecomposition,
) -> Result<CorrespondenceVerdict, CountError> {
    verify_correspondence_with(sys, dec, &CountOptions::default())
}

pub fn verify_correspondence_with(
    sys: &FewnomialSystem,
    dec: &DenseDecomposition,
    opts: &CountOptions,
) -> Result<CorrespondenceVerdict, CountError> {
    if sys.nvars() != 2 {
        return Err(CountError::NotBivariate);
    }
    let diag = diagonalize(sys, dec)?;
    let relations = diag.default_relations();
    let gs = build_gale_system(&diag, &relations)?;
    let hyp = check_hypotheses(&sys.support, &relations, dec)?;
    let polys = sys.polynomials();
    let original = count_real_solutions_2d_with(&polys[0], &polys[1], opts)?;
    let gale = count_gale_with(&gs, opts)?;
    let original_positive = original.region("positive");
    let gale_delta = gale.region("delta");
    let original_real = original.total_real;
    let gale_m_real = gale.region("m_real");
    Ok(CorrespondenceVerdict {
        original_positive,
        gale_delta,
        positive_equal: original_positive == gale_delta,
        real_case_ok: hyp.real_case_ok,
        original_real,
        gale_m_real,
        real_equal: hyp.real_case_ok.then_some(original_real == gale_m_real),
    })
}

/// Whether a solution count respects a bound.
pub fn check_bound_compliance(count: usize, bound: &BoundReport) -> bool {
    BigInt::from(count) <= bound.max_count
}
