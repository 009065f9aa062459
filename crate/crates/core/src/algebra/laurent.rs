use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational, Rational};
use super::AlgebraError;

/// Integer exponent vector; entries may be negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    /// Componentwise positive and negative parts, `a = plus - minus`.
    pub fn split_signs(&self) -> (Self, Self) {
        (
            Self(self.0.iter().map(|&a| a.max(0)).collect()),
            Self(self.0.iter().map(|&a| (-a).max(0)).collect()),
        )
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl From<&[i64]> for ExponentVector {
    fn from(v: &[i64]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Rational>,
}

type Result<T> = std::result::Result<T, AlgebraError>;

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, c, ExponentVector::zero(nvars))
    }

    pub fn monomial(nvars: usize, c: Rational, exps: ExponentVector) -> Self {
        assert_eq!(exps.len(), nvars, "exponent length must match nvars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Rational::one(), ExponentVector::unit(nvars, i))
    }

    /// Builds a polynomial from terms, summing repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational, ExponentVector)>,
    {
        let mut out = Self::zero(nvars);
        for (c, e) in terms {
            if e.len() != nvars {
                return Err(AlgebraError::ExponentLength {
                    expected: nvars,
                    found: e.len(),
                });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[i64])]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (int(*c), ExponentVector::from(*e))),
        )
        .expect("exponent lengths match")
    }

    fn add_term(&mut self, e: ExponentVector, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    /// Single term `c x^e`, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.is_nonnegative())
    }

    /// Largest exponent sum over the terms; `None` for zero.
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.degree()).max()
    }

    /// Largest exponent of variable `i`; `None` for zero.
    pub fn degree_in(&self, i: usize) -> Option<i64> {
        self.terms.keys().map(|e| e.0[i]).max()
    }

    /// Componentwise minimum exponent; `None` for zero.
    pub fn min_exponents(&self) -> Option<ExponentVector> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            ExponentVector(acc.0.iter().zip(&e.0).map(|(a, b)| *a.min(b)).collect())
        }))
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::MismatchedVars {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn monomial_shift(&self, shift: &ExponentVector) -> Result<Self> {
        if shift.len() != self.nvars {
            return Err(AlgebraError::ExponentLength {
                expected: self.nvars,
                found: shift.len(),
            });
        }
        Ok(Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(shift), c.clone()))
                .collect(),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Power with an integer exponent; negative powers need a monomial.
    pub fn pow_signed(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            return Ok(self.pow(k as u32));
        }
        let inv = self.monomial_inverse()?;
        Ok(inv.pow((-k) as u32))
    }

    fn monomial_inverse(&self) -> Result<Self> {
        let (e, c) = self
            .as_monomial()
            .ok_or(AlgebraError::NegativePowerOfNonMonomial)?;
        Ok(Self::monomial(self.nvars, c.recip(), e.scale(-1)))
    }

    /// Replaces variable `i` by `images[i]`.
    pub fn substitute(&self, images: &[LaurentPolynomial]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(AlgebraError::ImageCount {
                expected: self.nvars,
                found: images.len(),
            });
        }
        let Some(target) = images.first().map(|p| p.nvars) else {
            return Ok(self.clone());
        };
        for img in images {
            if img.nvars != target {
                return Err(AlgebraError::MismatchedVars {
                    left: target,
                    right: img.nvars,
                });
            }
            if img.is_zero() {
                return Err(AlgebraError::ZeroImage);
            }
        }
        // Powers are cached per (variable, exponent) because the same powers
        // recur across terms.
        let mut cache: BTreeMap<(usize, i64), LaurentPolynomial> = BTreeMap::new();
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (i, &a) in e.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if !cache.contains_key(&(i, a)) {
                    cache.insert((i, a), images[i].pow_signed(a)?);
                }
                term = &term * &cache[&(i, a)];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Returns `(p * x^shift, shift)` with the smallest shift making every
    /// exponent nonnegative.
    pub fn clear_denominators(&self) -> Result<(Self, ExponentVector)> {
        let min = self.min_exponents().ok_or(AlgebraError::ZeroPolynomial)?;
        let shift = ExponentVector(min.0.iter().map(|&m| -m).collect());
        Ok((self.monomial_shift(&shift)?, shift))
    }

    /// Evaluates at a point; `None` if a coordinate with a negative
    /// exponent is zero.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &a) in point.iter().zip(&e.0) {
                if a >= 0 {
                    t *= num_traits::pow(x.clone(), a as usize);
                } else {
                    if x.is_zero() {
                        return None;
                    }
                    t /= num_traits::pow(x.clone(), (-a) as usize);
                }
            }
            acc += t;
        }
        Some(acc)
    }

    /// Ordinary partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let a = e.0[i];
            if a != 0 {
                let mut e2 = e.clone();
                e2.0[i] -= 1;
                out.add_term(e2, c * int(a));
            }
        }
        out
    }

    /// Toric derivative `x_i * d/dx_i`.
    pub fn toric_derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * int(e.0[i]));
        }
        out
    }

    /// Exact quotient of ordinary polynomials by lex-leading-term division;
    /// `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() || self.nvars != divisor.nvars {
            return None;
        }
        if !self.is_polynomial() || !divisor.is_polynomial() {
            return None;
        }
        let (lead_e, lead_c) = divisor.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            let qe = e.sub(lead_e);
            if !qe.is_nonnegative() {
                return None;
            }
            let qc = c / lead_c;
            for (de, dc) in &divisor.terms {
                rem.add_term(de.add(&qe), -(&qc * dc));
            }
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Drops variables, keeping those listed in `keep` (in that order);
    /// panics if a dropped variable occurs with a nonzero exponent.
    pub fn restrict_vars(&self, keep: &[usize]) -> Self {
        let mut out = Self::zero(keep.len());
        for (e, c) in &self.terms {
            for (i, &a) in e.0.iter().enumerate() {
                assert!(a == 0 || keep.contains(&i), "dropped variable occurs");
            }
            out.add_term(
                ExponentVector(keep.iter().map(|&i| e.0[i]).collect()),
                c.clone(),
            );
        }
        out
    }

    /// Permutes variables: variable `i` of the result is variable `perm[i]`
    /// of `self`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(
                ExponentVector(perm.iter().map(|&i| e.0[i]).collect()),
                c.clone(),
            );
        }
        out
    }

    /// Largest absolute value of a coefficient; zero for the zero polynomial.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl std::ops::Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_add(rhs).expect("mismatched nvars")
    }
}

impl std::ops::Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_sub(rhs).expect("mismatched nvars")
    }
}

impl std::ops::Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self.try_mul(rhs).expect("mismatched nvars")
    }
}

impl std::ops::Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        self.scale(&-Rational::one())
    }
}

impl LaurentPolynomial {
    /// Text form with the given variable names, highest terms first.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for (i, &a) in e.0.iter().enumerate() {
                let name = names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("x{}", i + 1));
                match a {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{a}")),
                }
            }
            if factors.is_empty() {
                out.push_str(&format_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&factors.join("*"));
            } else {
                out.push_str(&format!("{}*{}", format_rational(&abs), factors.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let names: Vec<String> = if self.nvars <= NAMES.len() {
            NAMES.iter().map(|s| s.to_string()).collect()
        } else {
            (1..=self.nvars).map(|i| format!("x{i}")).collect()
        };
        f.write_str(&self.format_with(&names))
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    exponents: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    nvars: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    coeff: format_rational(c),
                    exponents: e.0.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let repr = PolyRepr::deserialize(d)?;
        let mut terms = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let c = parse_rational(&t.coeff)
                .ok_or_else(|| D::Error::custom(format!("bad coefficient `{}`", t.coeff)))?;
            terms.push((c, ExponentVector(t.exponents)));
        }
        LaurentPolynomial::from_terms(repr.nvars, terms).map_err(D::Error::custom)
    }
}
