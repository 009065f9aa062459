use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational, Rational};
use super::zpoly::{self, ZPoly};

/// Univariate polynomial with rational coefficients in ascending degree.
/// The coefficient vector never ends in a zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn from_zpoly(p: &[BigInt]) -> Self {
        Self::new(zpoly::to_rational(p))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let db = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[db].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] * &lc_inv;
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(db);
        (Self::new(quot), Self::new(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Exact quotient, `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Integer polynomial with the same roots (positive multiple).
    pub fn to_zpoly(&self) -> ZPoly {
        zpoly::from_rational(&self.coeffs)
    }

    /// Monic gcd; computed through a primitive remainder sequence over the
    /// integers to keep coefficients small.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        Self::from_zpoly(&zpoly::gcd(&self.to_zpoly(), &other.to_zpoly())).monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_zpoly(&zpoly::squarefree(&self.to_zpoly())).monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g = gcd` (monic).
    pub fn extended_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.leading_coeff().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse modulo `modulus`, if the two are coprime.
    pub fn inverse_mod(&self, modulus: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(modulus).extended_gcd(modulus);
        (g.degree() == Some(0)).then(|| s.rem(modulus))
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl std::ops::Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl std::ops::Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl std::ops::Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "({})*s", format_rational(c))?,
                _ => write!(f, "({})*s^{i}", format_rational(c))?,
            }
        }
        Ok(())
    }
}

impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| {
                parse_rational(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UniPoly::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn division_and_gcd() {
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        let q = UniPoly::from_ints(&[1, 1]);
        let (quot, rem) = p.div_rem(&q);
        assert_eq!(quot, UniPoly::from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        assert_eq!(
            p.gcd(&UniPoly::from_ints(&[-1, 1])),
            UniPoly::from_ints(&[-1, 1])
        );
        let x4 = UniPoly::from_ints(&[-4, 0, 0, 0, 1]);
        let x2 = UniPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(x4.gcd(&x2), x2);
    }

    #[test]
    fn inverse_mod_and_compose() {
        let m = UniPoly::from_ints(&[-2, 0, 1]);
        let a = UniPoly::from_ints(&[1, 1]);
        let inv = a.inverse_mod(&m).unwrap();
        assert_eq!((&inv * &a).rem(&m), UniPoly::one());
        assert!(UniPoly::from_ints(&[0, 0, 1])
            .inverse_mod(&UniPoly::from_ints(&[0, 1]))
            .is_none());
        let sq = UniPoly::from_ints(&[0, 0, 1]).compose(&a);
        assert_eq!(sq, UniPoly::from_ints(&[1, 2, 1]));
        assert_eq!(sq.eval(&rat(1, 2)), rat(9, 4));
    }
}
