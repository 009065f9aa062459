//! JSON input and output formats.

use std::fmt;

use densefew_core::algebra::rational::{format_rational, parse_rational};
use densefew_core::gale::{gale_equation_as_polynomial, FewnomialSystem, GaleSystem, Relation};
use densefew_core::{ExponentVector, LaurentPolynomial, Rational, SupportSet};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// An exact coefficient. Written as a string (`"27"`, `"-5/12"`, `"0.25"`);
/// bare JSON integers are accepted on input, other JSON numbers are not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient(pub Rational);

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

struct CoefficientVisitor;

impl Visitor<'_> for CoefficientVisitor {
    type Value = Coefficient;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational number as a string such as \"-5/12\", or a JSON integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Coefficient, E> {
        parse_rational(v)
            .map(Coefficient)
            .ok_or_else(|| E::custom(format!("cannot parse coefficient `{v}`")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Coefficient, E> {
        Ok(Coefficient(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Coefficient, E> {
        Ok(Coefficient(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Coefficient, E> {
        Err(E::custom(format!(
            "non-integer JSON number {v} is not exact; write the coefficient as a string"
        )))
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(CoefficientVisitor)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub coeff: Coefficient,
    pub exponents: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialEntry {
    pub terms: Vec<TermEntry>,
}

impl PolynomialEntry {
    pub fn from_polynomial(p: &LaurentPolynomial) -> Self {
        Self {
            terms: p
                .terms()
                .map(|(e, c)| TermEntry {
                    coeff: Coefficient(c.clone()),
                    exponents: e.0.clone(),
                })
                .collect(),
        }
    }

    pub fn to_polynomial(&self, nvars: usize) -> Result<LaurentPolynomial, CliError> {
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.terms {
            if t.exponents.len() != nvars {
                return Err(CliError::Input(format!(
                    "term with {} exponents in a system of {nvars} variables",
                    t.exponents.len()
                )));
            }
            if !seen.insert(&t.exponents) {
                return Err(CliError::Input(format!(
                    "exponent vector {:?} appears twice in one polynomial",
                    t.exponents
                )));
            }
        }
        LaurentPolynomial::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|t| (t.coeff.0.clone(), ExponentVector(t.exponents.clone()))),
        )
        .map_err(|e| CliError::Input(e.to_string()))
    }
}

/// A system of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub variables: Vec<String>,
    pub polynomials: Vec<PolynomialEntry>,
}

impl SystemFile {
    pub fn new(variables: Vec<String>, polys: &[LaurentPolynomial]) -> Self {
        Self {
            variables,
            polynomials: polys.iter().map(PolynomialEntry::from_polynomial).collect(),
        }
    }

    pub fn to_polynomials(&self) -> Result<Vec<LaurentPolynomial>, CliError> {
        if self.variables.is_empty() {
            return Err(CliError::Input("system has no variables".into()));
        }
        self.polynomials
            .iter()
            .map(|p| p.to_polynomial(self.variables.len()))
            .collect()
    }

    /// The square system with its common support.
    pub fn to_fewnomial_system(&self) -> Result<FewnomialSystem, CliError> {
        FewnomialSystem::from_polynomials(&self.to_polynomials()?)
            .map_err(|e| CliError::Input(e.to_string()))
    }

    /// The union of the supports of all polynomials.
    pub fn support(&self) -> Result<SupportSet, CliError> {
        let polys = self.to_polynomials()?;
        SupportSet::new(self.variables.len(), polys.iter().flat_map(|p| p.support()))
            .map_err(|e| CliError::Input(e.to_string()))
    }
}

/// A Gale dual system: `y^beta_j * h(y)^gamma_j = 1`. The `equations`
/// field is informational and ignored on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaleFile {
    pub variables: Vec<String>,
    pub d: u32,
    pub h: Vec<PolynomialEntry>,
    pub relations: Vec<Relation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<String>,
}

impl GaleFile {
    pub fn from_system(gs: &GaleSystem) -> Self {
        let variables: Vec<String> = (1..=gs.ell()).map(|i| format!("y{i}")).collect();
        let equations = (0..gs.ell())
            .filter_map(|j| gale_equation_as_polynomial(gs, j).ok())
            .map(|p| format!("{} = 0", p.format_with(&variables)))
            .collect();
        Self {
            variables,
            d: gs.d,
            h: gs.h.iter().map(PolynomialEntry::from_polynomial).collect(),
            relations: gs.relations.clone(),
            equations,
        }
    }

    pub fn to_system(&self) -> Result<GaleSystem, CliError> {
        let ell = self.variables.len();
        let h = self
            .h
            .iter()
            .map(|p| p.to_polynomial(ell))
            .collect::<Result<Vec<_>, _>>()?;
        for (k, r) in self.relations.iter().enumerate() {
            if r.beta.len() != ell || r.gamma.len() != h.len() {
                return Err(CliError::Input(format!(
                    "relation {k} has widths ({}, {}), expected ({ell}, {})",
                    r.beta.len(),
                    r.gamma.len(),
                    h.len()
                )));
            }
        }
        if self.relations.len() != ell {
            return Err(CliError::Input(format!(
                "{} relations for {ell} variables",
                self.relations.len()
            )));
        }
        Ok(GaleSystem {
            d: self.d,
            h,
            relations: self.relations.clone(),
        })
    }
}

/// Either input accepted by `count`.
pub enum CountInput {
    System(SystemFile),
    Gale(GaleFile),
}

pub fn parse_count_input(text: &str) -> Result<CountInput, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(input_error)?;
    if value.get("relations").is_some() {
        Ok(CountInput::Gale(
            serde_json::from_value(value).map_err(input_error)?,
        ))
    } else {
        Ok(CountInput::System(
            serde_json::from_value(value).map_err(input_error)?,
        ))
    }
}

/// A support given directly (`{"nvars": 2, "points": [[0, 0], ...]}`) or
/// as the union of the supports of a system file.
pub fn parse_support(text: &str) -> Result<SupportSet, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(input_error)?;
    if value.get("polynomials").is_some() {
        serde_json::from_value::<SystemFile>(value)
            .map_err(input_error)?
            .support()
    } else {
        serde_json::from_value(value).map_err(input_error)
    }
}

pub fn parse_system(text: &str) -> Result<SystemFile, CliError> {
    serde_json::from_str(text).map_err(input_error)
}

fn input_error(e: serde_json::Error) -> CliError {
    CliError::Input(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_are_exact() {
        let t: TermEntry =
            serde_json::from_str(r#"{"coeff": "-5/12", "exponents": [1, 0]}"#).unwrap();
        assert_eq!(t.coeff.0, Rational::new((-5).into(), 12.into()));
        let t: TermEntry = serde_json::from_str(r#"{"coeff": 27, "exponents": [0]}"#).unwrap();
        assert_eq!(t.coeff.0, Rational::from_integer(27.into()));
        let t: TermEntry = serde_json::from_str(r#"{"coeff": "0.125", "exponents": [0]}"#).unwrap();
        assert_eq!(t.coeff.0, Rational::new(1.into(), 8.into()));
        assert!(serde_json::from_str::<TermEntry>(r#"{"coeff": 0.5, "exponents": [0]}"#).is_err());
        assert!(
            serde_json::from_str::<TermEntry>(r#"{"coeff": "1/0", "exponents": [0]}"#).is_err()
        );
    }

    #[test]
    fn arity_is_checked() {
        let s = parse_system(
            r#"{"variables": ["x", "y"], "polynomials": [{"terms": [{"coeff": "1", "exponents": [1]}]}]}"#,
        )
        .unwrap();
        assert!(matches!(s.to_polynomials(), Err(CliError::Input(_))));
    }

    #[test]
    fn system_round_trip() {
        let p = LaurentPolynomial::from_int_terms(2, &[(3, &[-1, 2]), (-7, &[0, 0])]);
        let file = SystemFile::new(
            vec!["t".into(), "u".into()],
            &[p.clone(), p.scale(&Rational::new(1.into(), 3.into()))],
        );
        let text = serde_json::to_string(&file).unwrap();
        let back = parse_system(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_polynomials().unwrap()[0], p);
    }
}
