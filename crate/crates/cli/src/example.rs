//! The bundled worked example: a system of two Laurent polynomials in
//! `(t, u)` with 36 solutions in the complex torus, 10 real and 8 positive.

use densefew_core::bounds::{dense_positive_bound, dense_real_bound};
use densefew_core::corpus::worked_example_decomposition;
use densefew_core::counting::{count_gale_with, count_real_solutions_2d_with, verify_certificates};
use densefew_core::gale::{
    build_gale_system, diagonalize, gale_equation_as_polynomial, relations_from_rows, GaleSystem,
};
use densefew_core::lattice::affine_span_index;
use densefew_core::support::{
    mixed_volume_2d, search_decomposition, verify_decomposition, DEFAULT_SEARCH_BUDGET,
};
use densefew_core::{
    CountOptions, CountReport, FewnomialSystem, LaurentPolynomial, Rational, SupportSet,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::files::parse_system;

/// Byte-identical to `fixtures/worked_example.json`.
pub const FIXTURE: &str = include_str!("../fixtures/worked_example.json");

/// Published approximations, as printed, except `(0.839, 0.323)`: the
/// table prints `0.326`, which contradicts the `u -> 1/u` symmetry of the
/// system (its partner is `(0.839, 3.101)` and `1/3.101 = 0.3225`).
pub const PUBLISHED_TYPO: ((&str, &str), (&str, &str)) = (("0.839", "0.326"), ("0.839", "0.323"));

pub const ORIGINAL_PREVIEWS: [(&str, &str); 10] = [
    ("0.619", "0.093"),
    ("0.839", "0.323"),
    ("1.003", "0.543"),
    ("1.591", "0.911"),
    ("-1.911", "0.864"),
    ("0.619", "10.71"),
    ("0.839", "3.101"),
    ("1.003", "1.843"),
    ("1.591", "1.097"),
    ("-1.911", "1.158"),
];

pub const GALE_PREVIEWS: [(&str, &str); 10] = [
    ("4.229", "3.154"),
    ("4.098", "0.036"),
    ("2.777", "2.306"),
    ("2.184", "0.227"),
    ("1.853", "0.546"),
    ("3.154", "4.229"),
    ("0.036", "4.098"),
    ("2.306", "2.777"),
    ("0.227", "2.184"),
    ("0.546", "1.853"),
];

/// Relation rows `(beta_1, beta_2, gamma_1, gamma_2)` used for the dual.
pub const RELATION_ROWS: [[i64; 4]; 2] = [[1, 1, 1, 1], [2, 2, 1, -3]];

/// `h_1 = (-31 + 16x + 16y + 16x^2 - 40xy + 16y^2) / 27` and
/// `h_2 = (-40 + 32x + 32y - 5x^2 - 6xy - 5y^2) / 12`.
pub fn expected_h() -> [LaurentPolynomial; 2] {
    let h1 = LaurentPolynomial::from_int_terms(
        2,
        &[
            (-31, &[0, 0]),
            (16, &[1, 0]),
            (16, &[0, 1]),
            (16, &[2, 0]),
            (-40, &[1, 1]),
            (16, &[0, 2]),
        ],
    )
    .scale(&Rational::new(1.into(), 27.into()));
    let h2 = LaurentPolynomial::from_int_terms(
        2,
        &[
            (-40, &[0, 0]),
            (32, &[1, 0]),
            (32, &[0, 1]),
            (-5, &[2, 0]),
            (-6, &[1, 1]),
            (-5, &[0, 2]),
        ],
    )
    .scale(&Rational::new(1.into(), 12.into()));
    [h1, h2]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

fn check(name: &str, expected: impl ToString, actual: impl ToString, passed: bool) -> Assertion {
    Assertion {
        name: name.into(),
        expected: expected.to_string(),
        actual: actual.to_string(),
        passed,
    }
}

fn failed(name: &str, expected: impl ToString, err: impl std::fmt::Display) -> Assertion {
    check(name, expected, format!("error: {err}"), false)
}

fn count_check(name: &str, expected: usize, actual: Option<usize>) -> Assertion {
    match actual {
        Some(a) => check(name, expected, a, a == expected),
        None => check(name, expected, "not counted", false),
    }
}

/// Allowed distance between a computed coordinate and a listed one.
pub const PREVIEW_TOLERANCE: f64 = 5e-4;

/// Matches every listed pair to a distinct computed point.
pub fn previews_match(approx: &[[f64; 2]], expected: &[(&str, &str)]) -> bool {
    if approx.len() != expected.len() {
        return false;
    }
    let mut used = vec![false; approx.len()];
    expected.iter().all(|(x, y)| {
        let (ex, ey) = (x.parse::<f64>().unwrap(), y.parse::<f64>().unwrap());
        let hit = (0..approx.len()).find(|&i| {
            !used[i]
                && (approx[i][0] - ex).abs() <= PREVIEW_TOLERANCE
                && (approx[i][1] - ey).abs() <= PREVIEW_TOLERANCE
        });
        hit.map(|i| used[i] = true).is_some()
    })
}

fn preview_check(name: &str, report: Option<&CountReport>, expected: &[(&str, &str)]) -> Assertion {
    let expected_text = expected
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect::<Vec<_>>()
        .join(" ");
    let Some(report) = report else {
        return check(name, expected_text, "not counted", false);
    };
    let approx: Vec<[f64; 2]> = report
        .points
        .iter()
        .map(|p| [p.approx[0], p.approx[1]])
        .collect();
    let matched = previews_match(&approx, expected);
    let actual = report
        .previews()
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect::<Vec<_>>()
        .join(" ");
    check(name, expected_text, actual, matched)
}

/// Replaces the constant term `31` of the first polynomial by `131`.
fn corrupt_fixture(text: &str) -> String {
    text.replacen("\"31\"", "\"131\"", 1)
}

/// Runs the whole pipeline on the bundled example and returns every
/// assertion in order. Only input errors are returned as `Err`.
pub fn run_example(corrupt: bool, opts: &CountOptions) -> Result<Vec<Assertion>, CliError> {
    let text = if corrupt {
        corrupt_fixture(FIXTURE)
    } else {
        FIXTURE.to_string()
    };
    let file = parse_system(&text)?;
    let polys = file.to_polynomials()?;
    let sys = FewnomialSystem::from_polynomials(&polys)?;
    let mut out = Vec::new();

    let dec = worked_example_decomposition();
    let stated = verify_decomposition(&sys.support, &dec)?.valid;
    let found = search_decomposition(&sys.support, 2, 2, DEFAULT_SEARCH_BUDGET)?
        .map(|d| verify_decomposition(&sys.support, &d).map(|c| c.valid))
        .transpose()?;
    out.push(check(
        "decomposition",
        "stated decomposition valid, search finds a valid one",
        format!(
            "stated {}, search {}",
            if stated { "valid" } else { "invalid" },
            match found {
                Some(true) => "valid",
                Some(false) => "invalid",
                None => "not found",
            }
        ),
        stated && found == Some(true),
    ));

    let span = affine_span_index(&sys.support.to_vec())?;
    out.push(check(
        "affine_span_index",
        1,
        span.finite()
            .map_or("infinite".to_string(), |i| i.to_string()),
        span.finite().is_some_and(|i| *i == 1.into()),
    ));

    let names = vec!["x".to_string(), "y".to_string()];
    let [h1, h2] = expected_h();
    let gale: Option<GaleSystem> = match diagonalize(&sys, &dec) {
        Ok(diag) => {
            let actual = diag
                .h
                .iter()
                .map(|h| h.format_with(&names))
                .collect::<Vec<_>>()
                .join("; ");
            out.push(check(
                "h_exact",
                format!("{}; {}", h1.format_with(&names), h2.format_with(&names)),
                actual,
                diag.h == [h1.clone(), h2.clone()],
            ));
            let rows: Vec<Vec<i64>> = RELATION_ROWS.iter().map(|r| r.to_vec()).collect();
            let rel = relations_from_rows(&rows)?;
            match build_gale_system(&diag, &rel) {
                Ok(gs) => Some(gs),
                Err(e) => {
                    out.push(failed("gale_system", "built", e));
                    None
                }
            }
        }
        Err(e) => {
            out.push(failed("h_exact", "diagonalizable", e));
            None
        }
    };
    if let Some(gs) = &gale {
        let x = LaurentPolynomial::var(2, 0);
        let y = LaurentPolynomial::var(2, 1);
        let xy = &x * &y;
        let e1 = &(&(&xy * &h1) * &h2) - &LaurentPolynomial::one(2);
        let e2 = &(&(&xy * &xy) * &h1) - &h2.pow(3);
        let actual: Vec<LaurentPolynomial> = (0..2)
            .map(|j| gale_equation_as_polynomial(gs, j))
            .collect::<Result<_, _>>()?;
        out.push(check(
            "gale_equations",
            "x*y*h1*h2 - 1; x^2*y^2*h1 - h2^3",
            actual
                .iter()
                .map(|p| p.format_with(&names))
                .collect::<Vec<_>>()
                .join("; "),
            actual == [e1, e2],
        ));
    }

    let supports: Vec<SupportSet> = polys
        .iter()
        .map(|p| SupportSet::new(2, p.support()))
        .collect::<Result<_, _>>()?;
    let mv = mixed_volume_2d(&supports[0], &supports[1])?;
    out.push(check("mixed_volume", 36, mv, mv == 36));

    let original = count_real_solutions_2d_with(&polys[0], &polys[1], opts);
    let original = match original {
        Ok(r) => Some(r),
        Err(e) => {
            out.push(failed("original_count", "certified count", e));
            None
        }
    };
    out.push(count_check(
        "original_real",
        10,
        original.as_ref().map(|r| r.total_real),
    ));
    out.push(count_check(
        "original_positive",
        8,
        original.as_ref().map(|r| r.region("positive")),
    ));
    if let Some(r) = &original {
        let ok = verify_certificates(r, &polys[0], &polys[1]).unwrap_or(false);
        out.push(check(
            "original_certificates",
            "exact",
            if ok { "exact" } else { "failed" },
            ok,
        ));
    }
    out.push(preview_check(
        "original_previews",
        original.as_ref(),
        &ORIGINAL_PREVIEWS,
    ));

    let gale_report = gale.as_ref().map(|gs| count_gale_with(gs, opts));
    let gale_report = match gale_report {
        Some(Ok(r)) => Some(r),
        Some(Err(e)) => {
            out.push(failed("gale_count", "certified count", e));
            None
        }
        None => None,
    };
    out.push(count_check(
        "gale_m_real",
        10,
        gale_report.as_ref().map(|r| r.region("m_real")),
    ));
    out.push(count_check(
        "gale_delta",
        8,
        gale_report.as_ref().map(|r| r.region("delta")),
    ));
    out.push(preview_check(
        "gale_previews",
        gale_report.as_ref(),
        &GALE_PREVIEWS,
    ));

    let positive = dense_positive_bound(2, 2, 2);
    let real = dense_real_bound(2, 2, 2);
    let pos_count = original.as_ref().map_or(0, |r| r.region("positive"));
    let real_count = original.as_ref().map_or(0, |r| r.total_real);
    out.push(check(
        "positive_bound",
        "max count 83, positive count within it",
        format!(
            "max count {}, positive count {pos_count}",
            positive.max_count
        ),
        positive.max_count == 83.into() && original.is_some() && pos_count <= 83,
    ));
    out.push(check(
        "real_bound",
        "max count 460, real count within it",
        format!("max count {}, real count {real_count}", real.max_count),
        real.max_count == 460.into() && original.is_some() && real_count <= 460,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_the_embedded_copy() {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/worked_example.json");
        assert_eq!(std::fs::read_to_string(path).unwrap(), FIXTURE);
    }

    #[test]
    fn corruption_changes_one_coefficient() {
        let a = parse_system(FIXTURE).unwrap().to_polynomials().unwrap();
        let b = parse_system(&corrupt_fixture(FIXTURE))
            .unwrap()
            .to_polynomials()
            .unwrap();
        assert_ne!(a[0], b[0]);
        assert_eq!(a[1], b[1]);
        assert_eq!(a[0].support(), b[0].support());
    }

    #[test]
    fn preview_matching_is_one_to_one() {
        let pts = [[0.6186, 0.0934], [0.6186, 0.0934]];
        assert!(!previews_match(
            &pts,
            &[("0.619", "0.093"), ("0.619", "10.71")]
        ));
        assert!(previews_match(
            &pts,
            &[("0.619", "0.093"), ("0.619", "0.093")]
        ));
        assert!(!previews_match(&pts[..1], &[("0.619", "0.094")]));
    }

    #[test]
    fn listed_typo_breaks_the_symmetry() {
        let ((_, printed), (_, fixed)) = PUBLISHED_TYPO;
        // Values of 1/u allowed by the listed partner u = 3.101.
        let allowed = 1.0 / (3.101 + PREVIEW_TOLERANCE)..=1.0 / (3.101 - PREVIEW_TOLERANCE);
        // A 3-decimal preview is within rounding distance of some allowed value.
        let near = |v: f64| {
            v + PREVIEW_TOLERANCE >= *allowed.start() && v - PREVIEW_TOLERANCE <= *allowed.end()
        };
        assert!(!near(printed.parse().unwrap()));
        assert!(near(fixed.parse().unwrap()));
    }
}
