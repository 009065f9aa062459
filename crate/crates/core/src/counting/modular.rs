//! Arithmetic in `Q[s] / (m)` with an integer modulus, storing residues as
//! an integer numerator polynomial over a positive integer denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::rational::{common_denominator, Rational};
use crate::algebra::univariate::UniPoly;
use crate::algebra::zpoly::{self, ZPoly};

#[derive(Clone, Debug)]
pub struct Modulus {
    m: ZPoly,
    lc: BigInt,
    degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    num: ZPoly,
    den: BigInt,
}

impl Modulus {
    /// `m` must have positive degree.
    pub fn new(m: &[BigInt]) -> Self {
        let m = zpoly::positive_primitive(m);
        let degree = zpoly::degree(&m).expect("nonzero modulus");
        assert!(degree > 0, "modulus must be nonconstant");
        Self {
            lc: m[degree].clone(),
            m,
            degree,
        }
    }

    pub fn poly(&self) -> &ZPoly {
        &self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn zero(&self) -> Residue {
        Residue {
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> Residue {
        self.from_int(BigInt::one())
    }

    pub fn from_int(&self, c: BigInt) -> Residue {
        Residue {
            num: zpoly::trimmed(vec![c]),
            den: BigInt::one(),
        }
    }

    /// The residue of `s`.
    pub fn generator(&self) -> Residue {
        self.reduce(vec![BigInt::zero(), BigInt::one()], BigInt::one())
    }

    pub fn from_zpoly(&self, p: &[BigInt]) -> Residue {
        self.reduce(p.to_vec(), BigInt::one())
    }

    pub fn from_unipoly(&self, p: &UniPoly) -> Residue {
        let den = common_denominator(p.coeffs());
        let num = p
            .coeffs()
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        self.reduce(num, den)
    }

    fn reduce(&self, num: ZPoly, den: BigInt) -> Residue {
        let mut num = zpoly::trimmed(num);
        let mut den = den;
        if let Some(d) = zpoly::degree(&num) {
            if d >= self.degree {
                num = zpoly::prem(&num, &self.m);
                den *= num_traits::pow(self.lc.clone(), d - self.degree + 1);
            }
        }
        if den.is_negative() {
            den = -den;
            num = num.into_iter().map(|c| -c).collect();
        }
        // Folding from the denominator keeps every gcd small.
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_zero() && !g.is_one() {
            num = num.into_iter().map(|c| c / &g).collect();
            den /= &g;
        }
        if num.is_empty() {
            den = BigInt::one();
        }
        Residue { num, den }
    }

    pub fn add(&self, a: &Residue, b: &Residue) -> Residue {
        let l = a.den.lcm(&b.den);
        let fa = &l / &a.den;
        let fb = &l / &b.den;
        let num = zpoly::add(&zpoly::scale(&a.num, &fa), &zpoly::scale(&b.num, &fb));
        self.reduce(num, l)
    }

    pub fn sub(&self, a: &Residue, b: &Residue) -> Residue {
        self.add(a, &self.scale(b, &Rational::from_integer(-BigInt::one())))
    }

    pub fn mul(&self, a: &Residue, b: &Residue) -> Residue {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        self.reduce(zpoly::mul(&a.num, &b.num), &a.den * &b.den)
    }

    pub fn scale(&self, a: &Residue, c: &Rational) -> Residue {
        self.reduce(zpoly::scale(&a.num, c.numer()), &a.den * c.denom())
    }

    pub fn pow(&self, a: &Residue, e: u32) -> Residue {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inverse(&self, a: &Residue) -> Option<Residue> {
        let (s, c) = zpoly::inverse_mod(&a.num, &self.m)?;
        Some(self.reduce(zpoly::scale(&s, &a.den), c))
    }
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn numerator(&self) -> &ZPoly {
        &self.num
    }

    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::from_zpoly(&self.num).scale(&Rational::new(BigInt::one(), self.den.clone()))
    }

    /// A positive multiple of the residue's canonical representative, so
    /// signs at roots of the modulus are preserved.
    pub fn sign_representative(&self) -> UniPoly {
        UniPoly::from_zpoly(&self.num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn arithmetic_modulo_non_monic() {
        // 2s^2 - 1: s^2 = 1/2
        let m = Modulus::new(&z(&[-1, 0, 2]));
        let s = m.generator();
        let s2 = m.mul(&s, &s);
        assert_eq!(
            s2.to_unipoly(),
            UniPoly::constant(Rational::new(1.into(), 2.into()))
        );
        let s3 = m.pow(&s, 3);
        assert_eq!(
            s3.to_unipoly(),
            UniPoly::from_ints(&[0, 1]).scale(&Rational::new(1.into(), 2.into()))
        );
        let inv = m.inverse(&s).unwrap();
        assert_eq!(m.mul(&inv, &s), m.one());
        assert!(m
            .sub(&s2, &m.scale(&m.one(), &Rational::new(1.into(), 2.into())))
            .is_zero());
    }
}
