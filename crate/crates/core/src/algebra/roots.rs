//! Real roots of univariate polynomials: Sturm counting, isolation by
//! Descartes' rule of signs with bisection, and exact sign decisions at
//! isolated roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::rational::{bigint_sign, format_rational, sign, to_f64, Rational};
use super::univariate::UniPoly;
use super::zpoly::{self, ZPoly};
use super::AlgebraError;

/// Maximum number of bisection steps spent on one sign decision.
pub const REFINEMENT_CAP: usize = 10_000;

/// Endpoint of a counting interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_count(p: &UniPoly, lo: &Endpoint, hi: &Endpoint) -> Result<usize, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let seq = sturm_sequence(&zpoly::squarefree(&p.to_zpoly()));
    let a = variations_at(&seq, lo);
    let b = variations_at(&seq, hi);
    Ok(a.saturating_sub(b))
}

fn sturm_sequence(p: &[BigInt]) -> Vec<ZPoly> {
    let mut seq = vec![p.to_vec()];
    let d = zpoly::derivative(p);
    if zpoly::is_zero(&d) {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        // prem multiplies by a positive power of lc^2 when the leading
        // coefficient is negative, so keep track of the sign explicitly.
        let a = &seq[n - 2];
        let b = &seq[n - 1];
        let r = zpoly::prem(a, b);
        if zpoly::is_zero(&r) {
            break;
        }
        let db = zpoly::degree(b).unwrap();
        let da = zpoly::degree(a).unwrap();
        let lc = &b[db];
        let factor_negative = lc.is_negative() && (da - db + 1) % 2 == 1;
        // Sturm wants -rem(a, b); prem = lc^k * rem.
        let mut next = zpoly::positive_primitive(&r);
        if !factor_negative {
            next = next.iter().map(|c| -c).collect();
        }
        seq.push(next);
    }
    seq
}

fn sign_at_endpoint(p: &[BigInt], e: &Endpoint) -> i8 {
    let Some(d) = zpoly::degree(p) else { return 0 };
    match e {
        Endpoint::Finite(x) => zpoly::sign_at(p, x),
        Endpoint::PosInfinity => bigint_sign(&p[d]),
        Endpoint::NegInfinity => {
            let s = bigint_sign(&p[d]);
            if d % 2 == 1 {
                -s
            } else {
                s
            }
        }
    }
}

fn variations_at(seq: &[ZPoly], e: &Endpoint) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = sign_at_endpoint(p, e);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// An isolated real root of a squarefree integer polynomial. Either exact
/// (`lo == hi`) or the unique root inside the open interval `(lo, hi)`, in
/// which case the polynomial has opposite nonzero signs at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    defining: ZPoly,
    lo: Rational,
    hi: Rational,
}

impl IsolatedRoot {
    pub fn exact(defining: ZPoly, value: Rational) -> Self {
        Self {
            defining,
            lo: value.clone(),
            hi: value,
        }
    }

    /// Rebuilds a root from its defining polynomial and enclosure. Checks
    /// the sign change at the endpoints; uniqueness inside is trusted.
    pub fn from_parts(defining: ZPoly, lo: Rational, hi: Rational) -> Result<Self, AlgebraError> {
        let valid = if lo == hi {
            zpoly::sign_at(&defining, &lo) == 0
        } else {
            lo < hi && zpoly::sign_at(&defining, &lo) * zpoly::sign_at(&defining, &hi) < 0
        };
        if !valid {
            return Err(AlgebraError::NotIsolating);
        }
        Ok(Self { defining, lo, hi })
    }

    pub fn defining(&self) -> &ZPoly {
        &self.defining
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Midpoint of the enclosure as `f64`; diagnostic use only.
    pub fn approx(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / Rational::from_integer(2.into())))
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / Rational::from_integer(2.into());
        let sm = zpoly::sign_at(&self.defining, &mid);
        if sm == 0 {
            self.lo = mid.clone();
            self.hi = mid;
        } else if sm == zpoly::sign_at(&self.defining, &self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Bisects until the enclosure is narrower than `width`.
    pub fn refine_to(&mut self, width: &Rational) {
        while !self.is_exact() && &self.width() >= width {
            self.bisect();
        }
    }

    /// Exact comparison of the locations of two roots when their
    /// enclosures are disjoint; used only for ordering output.
    pub fn cmp_location(&self, other: &Self) -> std::cmp::Ordering {
        (&self.lo, &self.hi).cmp(&(&other.lo, &other.hi))
    }
}

impl Serialize for IsolatedRoot {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            lo: String,
            hi: String,
        }
        Repr {
            lo: format_rational(&self.lo),
            hi: format_rational(&self.hi),
        }
        .serialize(s)
    }
}

/// Real roots of a polynomial, sorted increasingly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootIsolation {
    squarefree: ZPoly,
    roots: Vec<IsolatedRoot>,
}

impl RootIsolation {
    pub fn squarefree(&self) -> &ZPoly {
        &self.squarefree
    }

    pub fn roots(&self) -> &[IsolatedRoot] {
        &self.roots
    }

    pub fn into_roots(self) -> Vec<IsolatedRoot> {
        self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn exact_roots(&self) -> Vec<Rational> {
        self.roots
            .iter()
            .filter(|r| r.is_exact())
            .map(|r| r.lo.clone())
            .collect()
    }

    pub fn intervals(&self) -> Vec<(Rational, Rational)> {
        self.roots
            .iter()
            .filter(|r| !r.is_exact())
            .map(|r| (r.lo.clone(), r.hi.clone()))
            .collect()
    }
}

/// Isolates all real roots of `p` (multiplicities ignored). Integer roots
/// are always reported exactly.
pub fn isolate_real_roots(p: &UniPoly) -> Result<RootIsolation, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    Ok(isolate_zpoly(&p.to_zpoly()))
}

/// Integer-coefficient entry point; `p` must be nonzero.
pub fn isolate_zpoly(p: &[BigInt]) -> RootIsolation {
    let sf = zpoly::squarefree(p);
    let mut roots = Vec::new();
    let mut q = sf.clone();
    if q.first().is_some_and(|c| c.is_zero()) {
        roots.push(IsolatedRoot::exact(sf.clone(), Rational::zero()));
        q.remove(0);
    }
    if zpoly::degree(&q).unwrap_or(0) > 0 {
        let mut pos = Vec::new();
        positive_roots(&q, &mut pos);
        let mut neg = Vec::new();
        positive_roots(&zpoly::negate_argument(&q), &mut neg);
        let intervals = neg.into_iter().map(|(lo, hi)| (-hi, -lo)).chain(pos);
        let one = Rational::one();
        for (lo, hi) in intervals {
            let mut r = IsolatedRoot {
                defining: sf.clone(),
                lo,
                hi,
            };
            detach_endpoints(&mut r);
            // Intervals wider than 1 have integer endpoints, so refining to
            // width 1 makes every integer root exact.
            while !r.is_exact() && r.width() > one {
                r.bisect();
            }
            roots.push(r);
        }
    }
    roots.sort_by(|a, b| a.cmp_location(b));
    RootIsolation {
        squarefree: sf,
        roots,
    }
}

/// Shrinks an isolating interval until neither endpoint is a root of the
/// defining polynomial. Endpoints can be roots found exactly at a bisection
/// midpoint (or 0); sign-based bisection is only valid once they are not.
fn detach_endpoints(r: &mut IsolatedRoot) {
    let on_root = |x: &Rational| zpoly::sign_at(&r.defining, x) == 0;
    if r.is_exact() || (!on_root(&r.lo) && !on_root(&r.hi)) {
        return;
    }
    let p = UniPoly::from_zpoly(&r.defining);
    while !r.is_exact()
        && (zpoly::sign_at(&r.defining, &r.lo) == 0 || zpoly::sign_at(&r.defining, &r.hi) == 0)
    {
        let mid = (&r.lo + &r.hi) / Rational::from_integer(2.into());
        if zpoly::sign_at(&r.defining, &mid) == 0 {
            r.lo = mid.clone();
            r.hi = mid;
            break;
        }
        let left = sturm_count(
            &p,
            &Endpoint::Finite(r.lo.clone()),
            &Endpoint::Finite(mid.clone()),
        )
        .expect("defining polynomial is nonzero");
        if left == 1 {
            r.hi = mid;
        } else {
            r.lo = mid;
        }
    }
}

/// Exponent `k` with every root of `p` strictly inside `(-2^k, 2^k)`
/// (Cauchy bound).
fn root_bound_log2(p: &[BigInt]) -> usize {
    let d = zpoly::degree(p).unwrap();
    let lc = p[d].abs();
    let max = p[..d].iter().map(|c| c.abs()).max().unwrap_or_default();
    // 1 + max/|lc| <= 2^k
    let ratio = (max + &lc - BigInt::one()) / &lc + BigInt::one();
    let mut k = 0usize;
    while (BigInt::one() << k) <= ratio {
        k += 1;
    }
    k
}

fn positive_roots(p: &[BigInt], out: &mut Vec<(Rational, Rational)>) {
    let k = root_bound_log2(p);
    let q = zpoly::scale_argument_pow2(p, k);
    let hi = Rational::from_integer(BigInt::one() << k);
    let mut exact = Vec::new();
    descartes(&q, Rational::zero(), hi, out, &mut exact);
    for r in exact {
        out.push((r.clone(), r));
    }
}

/// Roots of `q` in `(0, 1)` correspond to roots of the original polynomial
/// in `(lo, hi)` via `x = lo + (hi - lo) t`. Neither endpoint is a root.
fn descartes(
    q: &[BigInt],
    lo: Rational,
    hi: Rational,
    out: &mut Vec<(Rational, Rational)>,
    exact: &mut Vec<Rational>,
) {
    let v = zpoly::sign_variations(&zpoly::taylor_shift_one(&reverse_full(q)));
    if v == 0 {
        return;
    }
    if v == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = (&lo + &hi) / Rational::from_integer(2.into());
    let left = zpoly::halve_argument(q);
    let mut right = zpoly::taylor_shift_one(&left);
    if right[0].is_zero() {
        exact.push(mid.clone());
        right.remove(0);
    }
    descartes(&left, lo, mid.clone(), out, exact);
    descartes(&right, mid, hi, out, exact);
}

/// `x^n q(1/x)` with `n = len - 1`.
fn reverse_full(q: &[BigInt]) -> ZPoly {
    let mut r = q.to_vec();
    r.reverse();
    zpoly::trimmed(r)
}

/// Enclosure of `q` over `[lo, hi]` by interval Horner evaluation in
/// outward-rounded binary fixed point, with precision chosen from the width
/// of the interval.
pub fn interval_eval(q: &UniPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let width = hi - lo;
    let scale_bits = if width.is_zero() {
        lo.denom().bits() + 64
    } else {
        width.denom().bits().saturating_sub(width.numer().bits()) + 64
    } + q.coeffs().len() as u64;
    let floor = |r: &Rational| (r.numer() << scale_bits).div_floor(r.denom());
    let ceil = |r: &Rational| -((-r.numer() << scale_bits).div_floor(r.denom()));
    let (l, h) = (floor(lo), ceil(hi));
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    for c in q.coeffs().iter().rev() {
        let products = [&a * &l, &a * &h, &b * &l, &b * &h];
        let mn = products.iter().min().unwrap();
        let mx = products.iter().max().unwrap();
        a = (mn >> scale_bits) + floor(c);
        b = -((-mx) >> scale_bits) + ceil(c);
    }
    let den = BigInt::one() << scale_bits;
    (Rational::new(a, den.clone()), Rational::new(b, den))
}

/// Exact sign of `q` at the isolated root.
pub fn sign_at_root(q: &UniPoly, root: &IsolatedRoot) -> Result<i8, AlgebraError> {
    if root.is_exact() {
        return Ok(sign(&q.eval(&root.lo)));
    }
    if q.is_zero() {
        return Ok(0);
    }
    let g = zpoly::gcd(&root.defining, &q.to_zpoly());
    if vanishes_at(&g, root) {
        return Ok(0);
    }
    refine_sign(q, &mut root.clone())
}

/// Whether `g`, a factor of the root's defining polynomial, vanishes at
/// the root: it changes sign across the isolating interval.
pub fn vanishes_at(g: &[BigInt], root: &IsolatedRoot) -> bool {
    if root.is_exact() {
        return zpoly::sign_at(g, &root.lo) == 0;
    }
    zpoly::degree(g).unwrap_or(0) > 0
        && zpoly::sign_at(g, &root.lo) * zpoly::sign_at(g, &root.hi) < 0
}

/// Sign of `q` at the root, refining `root` in place; `q` must not vanish
/// there.
pub fn refine_sign(q: &UniPoly, root: &mut IsolatedRoot) -> Result<i8, AlgebraError> {
    let mut batch = 1;
    let mut used = 0;
    while used <= REFINEMENT_CAP {
        if root.is_exact() {
            return Ok(sign(&q.eval(&root.lo)));
        }
        let (a, b) = interval_eval(q, &root.lo, &root.hi);
        if a.is_positive() {
            return Ok(1);
        }
        if b.is_negative() {
            return Ok(-1);
        }
        // Interval evaluation dominates the cost, so bisect in doubling batches.
        for _ in 0..batch {
            root.bisect();
        }
        used += batch;
        batch *= 2;
    }
    Err(AlgebraError::RefinementCap)
}

/// Enclosure of `q(root)` of width below `width`.
pub fn enclose_value(
    q: &UniPoly,
    root: &IsolatedRoot,
    width: &Rational,
) -> Result<(Rational, Rational), AlgebraError> {
    refine_enclosure(q, &mut root.clone(), width)
}

/// As [`enclose_value`], refining `root` in place.
pub fn refine_enclosure(
    q: &UniPoly,
    root: &mut IsolatedRoot,
    width: &Rational,
) -> Result<(Rational, Rational), AlgebraError> {
    let mut batch = 1;
    let mut used = 0;
    while used <= REFINEMENT_CAP {
        if root.is_exact() {
            let v = q.eval(&root.lo);
            return Ok((v.clone(), v));
        }
        let (a, b) = interval_eval(q, &root.lo, &root.hi);
        if &(&b - &a) < width {
            return Ok((a, b));
        }
        for _ in 0..batch {
            root.bisect();
        }
        used += batch;
        batch *= 2;
    }
    Err(AlgebraError::RefinementCap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    #[test]
    fn interval_eval_encloses_endpoint_values() {
        let q = UniPoly::from_ints(&[-7, 3, 0, -2]).scale(&Rational::new(1.into(), 3.into()));
        for (lo, hi) in [((-5, 3), (-4, 3)), ((1, 7), (1, 7)), ((-1, 1), (2, 1))] {
            let (lo, hi) = (
                Rational::new(lo.0.into(), lo.1.into()),
                Rational::new(hi.0.into(), hi.1.into()),
            );
            let (a, b) = interval_eval(&q, &lo, &hi);
            for x in [&lo, &hi, &((&lo + &hi) / int(2))] {
                let v = q.eval(x);
                assert!(a <= v && v <= b);
            }
        }
    }

    #[test]
    fn sturm_examples() {
        let all = (Endpoint::NegInfinity, Endpoint::PosInfinity);
        assert_eq!(
            sturm_count(&UniPoly::from_ints(&[0, -1, 0, 1]), &all.0, &all.1).unwrap(),
            3
        );
        assert_eq!(
            sturm_count(
                &UniPoly::from_ints(&[2, -3, 1]),
                &Endpoint::Finite(int(0)),
                &all.1
            )
            .unwrap(),
            2
        );
        assert_eq!(
            sturm_count(&UniPoly::from_ints(&[1, 0, 1]), &all.0, &all.1).unwrap(),
            0
        );
        // (lo, hi] semantics at a root
        let p = UniPoly::from_ints(&[-1, 1]);
        assert_eq!(
            sturm_count(&p, &Endpoint::Finite(int(0)), &Endpoint::Finite(int(1))).unwrap(),
            1
        );
        assert_eq!(
            sturm_count(&p, &Endpoint::Finite(int(1)), &Endpoint::Finite(int(2))).unwrap(),
            0
        );
    }

    #[test]
    fn isolation_examples() {
        let iso = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(iso.len(), 2);
        assert!(iso.exact_roots().is_empty());
        let iso = isolate_real_roots(&UniPoly::from_ints(&[1, -1, -1, 1])).unwrap();
        assert_eq!(iso.exact_roots(), vec![int(-1), int(1)]);
    }

    #[test]
    fn intervals_next_to_exact_roots() {
        // (x + 2)(2x + 1)(x^2 + 1): -2 is hit exactly by a bisection midpoint.
        let iso = isolate_real_roots(&UniPoly::from_ints(&[2, 5, 4, 5, 2])).unwrap();
        let half = Rational::new((-1).into(), 2.into());
        assert_eq!(iso.len(), 2);
        assert!(iso
            .roots()
            .iter()
            .any(|r| r.lo() <= &half && &half <= r.hi() && r.lo() > &int(-2)));
        // x (x - 3)(x^2 + 1)
        let iso = isolate_real_roots(&UniPoly::from_ints(&[0, -3, 1, -3, 1])).unwrap();
        assert_eq!(iso.exact_roots(), vec![int(0), int(3)]);
    }

    #[test]
    fn signs_at_roots() {
        let p = UniPoly::from_ints(&[-4, 0, 0, 0, 1]);
        let iso = isolate_real_roots(&p).unwrap();
        let pos = iso.roots().iter().find(|r| r.lo() >= &int(0)).unwrap();
        assert_eq!(
            sign_at_root(&UniPoly::from_ints(&[-2, 0, 1]), pos).unwrap(),
            0
        );
        assert_eq!(sign_at_root(&UniPoly::x(), pos).unwrap(), 1);
        assert_eq!(sign_at_root(&p, pos).unwrap(), 0);
        assert_eq!(
            sign_at_root(&UniPoly::from_ints(&[-3, 2]), pos).unwrap(),
            -1
        );
    }
}
