use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GaleError, Relation};
use crate::algebra::laurent::LaurentPolynomial;
use crate::algebra::rational::Rational;
use crate::support::simplex_lattice_points;

/// `Upsilon * J(f_1..f_j, G_{j+1}..G_ell)` with `Upsilon = prod y_m * prod h_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobianWitness {
    pub j: usize,
    pub upsilon_times_j: LaurentPolynomial,
    pub expected_degree: u64,
    /// `None` when the product vanishes identically.
    pub actual_degree: Option<i64>,
}

impl JacobianWitness {
    pub fn is_polynomial(&self) -> bool {
        self.upsilon_times_j.is_polynomial()
    }

    pub fn degree_matches(&self) -> bool {
        self.actual_degree == Some(self.expected_degree as i64)
    }
}

/// Builds the witness at stage `j` (1-based, `1 <= j <= ell`). `g` holds
/// `G_{j+1}, ..., G_ell` and `relations` at least `j` rows.
///
/// Row `k <= j` of the toric Jacobian is
/// `beta_{k,m} + sum_i gamma_{k,i} y_m d_m h_i / h_i`; it is multiplied by
/// `H = prod h_i` so all entries are polynomials, and the determinant is
/// divided back by `H^(j-1)` exactly.
pub fn jacobian_witness(
    h: &[LaurentPolynomial],
    relations: &[Relation],
    g: &[LaurentPolynomial],
    j: usize,
) -> Result<JacobianWitness, GaleError> {
    let n = h.len();
    let ell = h.first().map_or(0, |p| p.nvars());
    if j == 0 || j > ell || relations.len() < j {
        return Err(GaleError::IndexOutOfRange {
            index: j,
            max: ell.min(relations.len()),
        });
    }
    if g.len() != ell - j {
        return Err(GaleError::AuxiliaryCount {
            expected: ell - j,
            found: g.len(),
        });
    }
    let d = h
        .iter()
        .filter_map(|p| p.total_degree())
        .max()
        .unwrap_or(0)
        .max(0) as u64;

    let big_h = h
        .iter()
        .fold(LaurentPolynomial::one(ell), |acc, hi| &acc * hi);
    let cofactors: Vec<LaurentPolynomial> = (0..n)
        .map(|i| {
            h.iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .fold(LaurentPolynomial::one(ell), |acc, (_, hk)| &acc * hk)
        })
        .collect();
    let toric: Vec<Vec<LaurentPolynomial>> = h
        .iter()
        .map(|hi| (0..ell).map(|m| hi.toric_derivative(m)).collect())
        .collect();

    let mut matrix: Vec<Vec<LaurentPolynomial>> = Vec::with_capacity(ell);
    for rel in &relations[..j] {
        let row = (0..ell)
            .map(|m| {
                let mut entry = big_h.scale(&Rational::from_integer(BigInt::from(rel.beta[m])));
                for i in 0..n {
                    if rel.gamma[i] != 0 {
                        let term = &toric[i][m] * &cofactors[i];
                        entry = &entry
                            + &term.scale(&Rational::from_integer(BigInt::from(rel.gamma[i])));
                    }
                }
                entry
            })
            .collect();
        matrix.push(row);
    }
    for gk in g {
        matrix.push((0..ell).map(|m| gk.toric_derivative(m)).collect());
    }

    let det = determinant(&matrix);
    let divisor = big_h.pow(j as u32 - 1);
    let upsilon_times_j = if det.is_zero() {
        det
    } else {
        det.exact_div(&divisor)
            .ok_or(GaleError::JacobianNotPolynomial)?
    };
    if !upsilon_times_j.is_polynomial() {
        return Err(GaleError::JacobianNotPolynomial);
    }
    let actual_degree = upsilon_times_j.total_degree();
    Ok(JacobianWitness {
        j,
        upsilon_times_j,
        expected_degree: (1u64 << (ell - j)) * n as u64 * d,
        actual_degree,
    })
}

/// Laplace expansion along the first row, summed in column order.
fn determinant(m: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    let size = m.len();
    let nvars = m.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    match size {
        0 => LaurentPolynomial::one(nvars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = LaurentPolynomial::zero(nvars);
            for c in 0..size {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LaurentPolynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != c)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][c] * &determinant(&minor);
                acc = if c % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// Dense polynomial of the given total degree. Each coefficient is `p/q`
/// with `p` uniform in `[-100, 100] \ {0}` and `q` uniform in `[1, 10]`.
pub fn random_generic_polynomial(degree: u32, nvars: usize, seed: u64) -> LaurentPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(Rational, _)> = simplex_lattice_points(degree, nvars)
        .into_iter()
        .map(|e| {
            let mut p: i64 = rng.gen_range(-100..=99);
            if p >= 0 {
                p += 1;
            }
            let q: i64 = rng.gen_range(1..=10);
            (Rational::new(BigInt::from(p), BigInt::from(q)), e)
        })
        .collect();
    LaurentPolynomial::from_terms(nvars, terms).expect("simplex points have nvars entries")
}

/// Random input for [`jacobian_witness`] at `(ell, j, n, d)`: `n` generic
/// `h_i` of degree `d`, `ell` relations with entries in `[-7, 7] \ {0}`
/// and generic `G_k` of degree `2^(ell-k) n d`.
pub fn random_instance(
    ell: usize,
    j: usize,
    n: usize,
    d: u32,
    seed: u64,
) -> (
    Vec<LaurentPolynomial>,
    Vec<Relation>,
    Vec<LaurentPolynomial>,
) {
    let h: Vec<_> = (0..n)
        .map(|i| random_generic_polynomial(d, ell, seed * 1000 + i as u64))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rels = (0..ell)
        .map(|_| Relation {
            beta: (0..ell)
                .map(|_| rng.gen_range(1..=7) * if rng.gen() { 1 } else { -1 })
                .collect(),
            gamma: (0..n)
                .map(|_| rng.gen_range(1..=7) * if rng.gen() { 1 } else { -1 })
                .collect(),
        })
        .collect();
    let g = (j + 1..=ell)
        .map(|i| {
            random_generic_polynomial(
                (1u32 << (ell - i)) * n as u32 * d,
                ell,
                seed * 1000 + 500 + i as u64,
            )
        })
        .collect();
    (h, rels, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::ExponentVector;
    use num_traits::{One, Zero};

    /// Evaluates `Upsilon * J` at a point straight from the definition,
    /// using ordinary partial derivatives of the logarithmic forms.
    fn oracle(
        h: &[LaurentPolynomial],
        rels: &[Relation],
        g: &[LaurentPolynomial],
        j: usize,
        y: &[Rational],
    ) -> Rational {
        let ell = y.len();
        let hv: Vec<Rational> = h.iter().map(|p| p.eval(y).unwrap()).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for rel in &rels[..j] {
            rows.push(
                (0..ell)
                    .map(|m| {
                        let mut e = Rational::from_integer(rel.beta[m].into()) / &y[m];
                        for (i, hi) in h.iter().enumerate() {
                            e += Rational::from_integer(rel.gamma[i].into())
                                * hi.derivative(m).eval(y).unwrap()
                                / &hv[i];
                        }
                        e
                    })
                    .collect(),
            );
        }
        for gk in g {
            rows.push(
                (0..ell)
                    .map(|m| gk.derivative(m).eval(y).unwrap())
                    .collect(),
            );
        }
        let det = rational_det(rows);
        let upsilon: Rational = y.iter().chain(&hv).fold(Rational::one(), |a, b| a * b);
        det * upsilon
    }

    fn rational_det(mut m: Vec<Vec<Rational>>) -> Rational {
        let n = m.len();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for r in c + 1..n {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let v = &f * &m[c][k];
                    m[r][k] -= v;
                }
            }
        }
        det
    }

    #[test]
    fn matches_pointwise_oracle_and_degree() {
        for &(ell, j, n, d) in &[
            (1, 1, 1, 1),
            (2, 2, 2, 1),
            (2, 1, 2, 2),
            (2, 1, 1, 2),
            (2, 2, 1, 2),
        ] {
            let (h, rels, g) = random_instance(ell, j, n, d, 7);
            let w = jacobian_witness(&h, &rels, &g, j).unwrap();
            assert!(w.is_polynomial());
            assert_eq!(w.expected_degree, (1u64 << (ell - j)) * n as u64 * d as u64);
            assert!(
                w.degree_matches(),
                "{ell} {j} {n} {d}: {:?}",
                w.actual_degree
            );
            for t in 0..3 {
                let y: Vec<Rational> = (0..ell)
                    .map(|m| Rational::new((3 + 2 * m as i64 + t).into(), (5 + t).into()))
                    .collect();
                assert_eq!(
                    w.upsilon_times_j.eval(&y).unwrap(),
                    oracle(&h, &rels, &g, j, &y)
                );
            }
        }
    }

    #[test]
    fn linear_hand_expansion() {
        // h = 2 + 3y, beta = 1, gamma = 2: y*h*(1/y + 2*3/h) = h + 6y.
        let h = LaurentPolynomial::from_int_terms(1, &[(2, &[0]), (3, &[1])]);
        let rel = Relation {
            beta: vec![1],
            gamma: vec![2],
        };
        let w = jacobian_witness(&[h], &[rel], &[], 1).unwrap();
        assert_eq!(
            w.upsilon_times_j,
            LaurentPolynomial::from_int_terms(1, &[(2, &[0]), (9, &[1])])
        );
        assert_eq!(w.actual_degree, Some(1));
    }

    #[test]
    fn random_polynomial_shape() {
        let p = random_generic_polynomial(4, 2, 3);
        assert_eq!(p.len(), 15);
        assert_eq!(p, random_generic_polynomial(4, 2, 3));
        let c = random_generic_polynomial(0, 3, 1);
        assert_eq!(c.support(), vec![ExponentVector(vec![0, 0, 0])]);
    }
}
