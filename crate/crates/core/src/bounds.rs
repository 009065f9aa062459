//! Closed-form bounds on real solution counts and Betti numbers, evaluated
//! exactly (integer formulas) or with rigorous rational enclosures of
//! `e^2` and `e^4`, plus an auditor for two combinatorial estimates.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{floor, int, rat, to_decimal_string, Rational};
use crate::serde_util::{bigint_string, option_bigint_string, rational_string};

/// Enclosures narrower than this are considered final even when they still
/// straddle an integer.
fn straddle_limit() -> Rational {
    Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 50))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaId {
    Khovanskii,
    BsPositive,
    DensePositive,
    BbsReal,
    DenseReal,
    NearCircuit,
    KhovanskiiBetti,
    BsBetti,
    DenseBetti,
}

impl FormulaId {
    pub const ALL: [FormulaId; 9] = [
        FormulaId::Khovanskii,
        FormulaId::BsPositive,
        FormulaId::DensePositive,
        FormulaId::BbsReal,
        FormulaId::DenseReal,
        FormulaId::NearCircuit,
        FormulaId::KhovanskiiBetti,
        FormulaId::BsBetti,
        FormulaId::DenseBetti,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaId::Khovanskii => "khovanskii",
            FormulaId::BsPositive => "bs-positive",
            FormulaId::DensePositive => "dense-positive",
            FormulaId::BbsReal => "bbs-real",
            FormulaId::DenseReal => "dense-real",
            FormulaId::NearCircuit => "near-circuit",
            FormulaId::KhovanskiiBetti => "khovanskii-betti",
            FormulaId::BsBetti => "bs-betti",
            FormulaId::DenseBetti => "dense-betti",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of a bound; unused ones are `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
}

/// Rational enclosure `lo < e^x < hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscendentalEnclosure {
    #[serde(with = "rational_string")]
    pub lo: Rational,
    #[serde(with = "rational_string")]
    pub hi: Rational,
}

/// Encloses `e^x` with the first `terms + 1` terms of the exponential
/// series; the tail is bounded by `x^(N+1)/(N+1)! * (N+2)/(N+2-x)`.
pub fn exp_enclosure(x: u32, terms: u32) -> TranscendentalEnclosure {
    let n = terms.max(x);
    let xr = int(x as i64);
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for i in 0..=n {
        if i > 0 {
            term = term * &xr / int(i as i64);
        }
        sum += &term;
    }
    let next = term * &xr / int(n as i64 + 1);
    let tail = next * int(n as i64 + 2) / int(n as i64 + 2 - x as i64);
    let hi = &sum + tail;
    TranscendentalEnclosure { lo: sum, hi }
}

/// Result of evaluating a bound formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub formula: FormulaId,
    pub params: BoundParams,
    #[serde(with = "rational_string")]
    pub raw_lo: Rational,
    #[serde(with = "rational_string")]
    pub raw_hi: Rational,
    /// `true` when the bound is "fewer than", `false` for "at most".
    pub strict: bool,
    #[serde(with = "bigint_string")]
    pub max_count: BigInt,
    /// Second candidate when the enclosure could not separate two integers.
    #[serde(
        with = "option_bigint_string",
        skip_serializing_if = "Option::is_none",
        default
    )]
    pub alternative: Option<BigInt>,
}

impl BoundReport {
    pub fn is_exact(&self) -> bool {
        self.raw_lo == self.raw_hi
    }

    /// `raw ∈ (lo, hi), max count N` with decimals, or `raw = v` if exact.
    pub fn summary(&self, digits: usize) -> String {
        if self.is_exact() {
            format!("raw = {}, max count {}", self.raw_lo, self.max_count)
        } else {
            format!(
                "raw ∈ ({}, {}), max count {}",
                to_decimal_floor(&self.raw_lo, digits),
                to_decimal_ceil(&self.raw_hi, digits),
                self.max_count
            )
        }
    }
}

fn to_decimal_floor(r: &Rational, digits: usize) -> String {
    let scale = Rational::from_integer(num_traits::pow(BigInt::from(10), digits));
    to_decimal_string(
        &(Rational::from_integer(floor(&(r * &scale))) / scale),
        digits,
    )
}

fn to_decimal_ceil(r: &Rational, digits: usize) -> String {
    let scale = Rational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let f = -floor(&(-(r * &scale)));
    to_decimal_string(&(Rational::from_integer(f) / scale), digits)
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn pow(b: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

fn pow2_binom(m: u64) -> BigInt {
    pow(2, m * m.saturating_sub(1) / 2)
}

fn exact_report(formula: FormulaId, params: BoundParams, raw: BigInt, strict: bool) -> BoundReport {
    let max_count = if strict { &raw - 1 } else { raw.clone() };
    let r = Rational::from_integer(raw);
    BoundReport {
        formula,
        params,
        raw_lo: r.clone(),
        raw_hi: r,
        strict,
        max_count,
        alternative: None,
    }
}

/// `(e^x + 3)/4 * factor` with `factor > 0`. The sequence of enclosures
/// depends only on `x` and `factor`, so equal inputs give identical
/// reports.
fn enclosed_report(
    formula: FormulaId,
    params: BoundParams,
    x: u32,
    factor: BigInt,
    strict: bool,
) -> BoundReport {
    let factor = Rational::from_integer(factor);
    let quarter = rat(1, 4);
    let three = int(3);
    let mut terms = 16;
    loop {
        let e = exp_enclosure(x, terms);
        let lo = (&e.lo + &three) / int(4) * &factor;
        let hi = (&e.hi + &three) / int(4) * &factor;
        let (flo, fhi) = (floor(&lo), floor(&hi));
        let width = &hi - &lo;
        // The true value is irrational, so "largest integer below" and
        // "floor" agree.
        if flo == fhi && width < quarter {
            return BoundReport {
                formula,
                params,
                raw_lo: lo,
                raw_hi: hi,
                strict,
                max_count: flo,
                alternative: None,
            };
        }
        if width < straddle_limit() {
            return BoundReport {
                formula,
                params,
                raw_lo: lo,
                raw_hi: hi,
                strict,
                max_count: flo,
                alternative: Some(fhi),
            };
        }
        terms *= 2;
    }
}

/// `2^C(k+n,2) (n+1)^(k+n)`, "fewer than".
pub fn khovanskii_bound(k: u32, n: u32) -> BoundReport {
    let (k64, n64) = (k as u64, n as u64);
    let raw = pow2_binom(k64 + n64) * pow(n64 + 1, k64 + n64);
    exact_report(
        FormulaId::Khovanskii,
        BoundParams {
            n: Some(n),
            k: Some(k),
            ..Default::default()
        },
        raw,
        true,
    )
}

/// `(e^2+3)/4 2^C(k,2) n^k`, "fewer than".
pub fn bs_positive_bound(k: u32, n: u32) -> BoundReport {
    let factor = pow2_binom(k as u64) * pow(n as u64, k as u64);
    enclosed_report(
        FormulaId::BsPositive,
        BoundParams {
            n: Some(n),
            k: Some(k),
            ..Default::default()
        },
        2,
        factor,
        true,
    )
}

/// `(e^2+3)/4 2^C(ell,2) n^ell d^ell`, "fewer than".
pub fn dense_positive_bound(n: u32, ell: u32, d: u32) -> BoundReport {
    let factor = dense_factor(n, ell, d);
    enclosed_report(
        FormulaId::DensePositive,
        dense_params(n, ell, d),
        2,
        factor,
        true,
    )
}

/// `(e^4+3)/4 2^C(k,2) n^k`, "at most".
pub fn bbs_real_bound(k: u32, n: u32) -> BoundReport {
    let factor = pow2_binom(k as u64) * pow(n as u64, k as u64);
    enclosed_report(
        FormulaId::BbsReal,
        BoundParams {
            n: Some(n),
            k: Some(k),
            ..Default::default()
        },
        4,
        factor,
        false,
    )
}

/// `(e^4+3)/4 2^C(ell,2) n^ell d^ell`, "less than".
pub fn dense_real_bound(n: u32, ell: u32, d: u32) -> BoundReport {
    let factor = dense_factor(n, ell, d);
    enclosed_report(
        FormulaId::DenseReal,
        dense_params(n, ell, d),
        4,
        factor,
        true,
    )
}

/// `2dn + 1`, "at most".
pub fn near_circuit_real_bound(n: u32, d: u32) -> BoundReport {
    let raw = BigInt::from(2u64 * d as u64 * n as u64 + 1);
    exact_report(
        FormulaId::NearCircuit,
        BoundParams {
            n: Some(n),
            d: Some(d),
            ..Default::default()
        },
        raw,
        false,
    )
}

/// `(2n^2-n+1)^(k+n) (2n)^(n-1) 2^C(k+n,2)`, "at most".
pub fn khovanskii_betti_bound(k: u32, n: u32) -> BoundReport {
    let (k64, n64) = (k as u64, n as u64);
    let raw =
        pow(2 * n64 * n64 - n64 + 1, k64 + n64) * pow(2 * n64, n64 - 1) * pow2_binom(k64 + n64);
    exact_report(
        FormulaId::KhovanskiiBetti,
        BoundParams {
            n: Some(n),
            k: Some(k),
            ..Default::default()
        },
        raw,
        false,
    )
}

/// `sum_{i=0}^n C(n,i) i^e`, with `0^0 = 1`.
fn betti_sum(n: u32, e: u32) -> BigInt {
    (0..=n as u64)
        .map(|i| binom(n as u64, i) * pow(i, e as u64))
        .sum()
}

/// `(e^2+3)/4 2^C(k,2) sum_i C(n,i) i^k`, "fewer than".
pub fn bs_betti_bound(k: u32, n: u32) -> BoundReport {
    let factor = pow2_binom(k as u64) * betti_sum(n, k);
    enclosed_report(
        FormulaId::BsBetti,
        BoundParams {
            n: Some(n),
            k: Some(k),
            ..Default::default()
        },
        2,
        factor,
        true,
    )
}

/// `(e^2+3)/4 2^C(ell,2) d^ell sum_i C(n,i) i^ell`, "fewer than".
pub fn dense_betti_bound(n: u32, ell: u32, d: u32) -> BoundReport {
    let factor = pow2_binom(ell as u64) * pow(d as u64, ell as u64) * betti_sum(n, ell);
    enclosed_report(
        FormulaId::DenseBetti,
        dense_params(n, ell, d),
        2,
        factor,
        true,
    )
}

fn dense_factor(n: u32, ell: u32, d: u32) -> BigInt {
    let e = ell as u64;
    pow2_binom(e) * pow(n as u64, e) * pow(d as u64, e)
}

fn dense_params(n: u32, ell: u32, d: u32) -> BoundParams {
    BoundParams {
        n: Some(n),
        ell: Some(ell),
        d: Some(d),
        k: None,
    }
}

/// Evaluates a formula by id; `None` when a required parameter is missing
/// or out of range.
pub fn evaluate(formula: FormulaId, p: &BoundParams) -> Option<BoundReport> {
    let pos = |v: Option<u32>| v.filter(|&x| x >= 1);
    Some(match formula {
        FormulaId::Khovanskii => khovanskii_bound(p.k?, pos(p.n)?),
        FormulaId::BsPositive => bs_positive_bound(p.k?, pos(p.n)?),
        FormulaId::DensePositive => dense_positive_bound(pos(p.n)?, pos(p.ell)?, pos(p.d)?),
        FormulaId::BbsReal => bbs_real_bound(p.k?, pos(p.n)?),
        FormulaId::DenseReal => dense_real_bound(pos(p.n)?, pos(p.ell)?, pos(p.d)?),
        FormulaId::NearCircuit => near_circuit_real_bound(pos(p.n)?, pos(p.d)?),
        FormulaId::KhovanskiiBetti => khovanskii_betti_bound(p.k?, pos(p.n)?),
        FormulaId::BsBetti => bs_betti_bound(p.k?, pos(p.n)?),
        FormulaId::DenseBetti => dense_betti_bound(pos(p.n)?, pos(p.ell)?, pos(p.d)?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateFamily {
    /// Count of boundary strata met by a stage of the induction.
    Stratum,
    /// Comparison of the stratum count with the bound it feeds into.
    Lemma4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AuditStatus {
    Holds,
    Equality,
    Violated,
}

/// Exact comparison `lhs <= rhs` at one parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateAudit {
    pub family: EstimateFamily,
    pub ell: u32,
    pub j: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u32>,
    #[serde(with = "rational_string")]
    pub lhs: Rational,
    #[serde(with = "rational_string")]
    pub rhs: Rational,
    pub holds: bool,
    /// `rhs - lhs`.
    #[serde(with = "rational_string")]
    pub margin: Rational,
}

impl EstimateAudit {
    fn new(
        family: EstimateFamily,
        ell: u32,
        j: u32,
        n: u32,
        d: Option<u32>,
        lhs: Rational,
        rhs: Rational,
    ) -> Self {
        let margin = &rhs - &lhs;
        Self {
            family,
            ell,
            j,
            n,
            d,
            holds: lhs <= rhs,
            lhs,
            rhs,
            margin,
        }
    }

    pub fn status(&self) -> AuditStatus {
        if self.lhs == self.rhs {
            AuditStatus::Equality
        } else if self.holds {
            AuditStatus::Holds
        } else {
            AuditStatus::Violated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("stage index j = {j} outside 1..={ell}")]
pub struct StageOutOfRange {
    pub ell: u32,
    pub j: u32,
}

fn check_stage(ell: u32, j: u32) -> Result<(), StageOutOfRange> {
    if j == 0 || j > ell {
        Err(StageOutOfRange { ell, j })
    } else {
        Ok(())
    }
}

/// `2^C(l-j,2) n^(l-j) d^(l-j) sum_q C(l+1, j-q) C(n,q) d^q` against
/// `2^C(l-j,2) n^(l-j) C(1+l+n, j) d^l`.
pub fn stratum_estimate(
    ell: u32,
    j: u32,
    n: u32,
    d: u32,
) -> Result<EstimateAudit, StageOutOfRange> {
    check_stage(ell, j)?;
    let (l, j64, n64, d64) = (ell as u64, j as u64, n as u64, d as u64);
    let common = pow2_binom(l - j64) * pow(n64, l - j64);
    let sum: BigInt = (0..=j64)
        .map(|q| binom(l + 1, j64 - q) * binom(n64, q) * pow(d64, q))
        .sum();
    let lhs = &common * pow(d64, l - j64) * sum;
    let rhs = common * binom(1 + l + n64, j64) * pow(d64, l);
    Ok(EstimateAudit::new(
        EstimateFamily::Stratum,
        ell,
        j,
        n,
        Some(d),
        Rational::from_integer(lhs),
        Rational::from_integer(rhs),
    ))
}

/// `2^C(l-j,2) n^(l-j) C(1+l+n, j)` against `(1/2)(2^j/j!) 2^C(l,2) n^l`.
pub fn audit_lemma_estimates4(ell: u32, j: u32, n: u32) -> Result<EstimateAudit, StageOutOfRange> {
    check_stage(ell, j)?;
    let (l, j64, n64) = (ell as u64, j as u64, n as u64);
    let lhs = pow2_binom(l - j64) * pow(n64, l - j64) * binom(1 + l + n64, j64);
    let fact: BigInt = (1..=j64).map(BigInt::from).product();
    let rhs = Rational::new(pow(2, j64) * pow2_binom(l) * pow(n64, l), fact * 2);
    Ok(EstimateAudit::new(
        EstimateFamily::Lemma4,
        ell,
        j,
        n,
        None,
        Rational::from_integer(lhs),
        rhs,
    ))
}

/// Every stratum audit over `1 <= j <= ell <= max_ell`, `1 <= n <= max_n`,
/// `1 <= d <= max_d` (ordered by ell, j, n, d), followed by every lemma
/// audit over the same `(ell, j, n)` (ordered by ell, j, n).
pub fn audit_grid(max_ell: u32, max_n: u32, max_d: u32) -> Vec<EstimateAudit> {
    let mut out = Vec::new();
    for ell in 1..=max_ell {
        for j in 1..=ell {
            for n in 1..=max_n {
                for d in 1..=max_d {
                    out.push(stratum_estimate(ell, j, n, d).expect("j in range"));
                }
            }
        }
    }
    if max_d == 0 {
        return out;
    }
    for ell in 1..=max_ell {
        for j in 1..=ell {
            for n in 1..=max_n {
                out.push(audit_lemma_estimates4(ell, j, n).expect("j in range"));
            }
        }
    }
    out
}
