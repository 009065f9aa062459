//! Resultants and first subresultants of bivariate integer polynomials.
//!
//! A bivariate polynomial is stored as its coefficients in the eliminated
//! variable `y`, each coefficient a [`ZPoly`] in the remaining variable.
//! Determinants with polynomial entries are computed by evaluating at
//! integer points, running fraction-free (Bareiss) elimination on each
//! integer matrix, and interpolating; the number of points comes from a
//! row/column weight bound on the determinant's degree.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::laurent::LaurentPolynomial;
use super::rational::{common_denominator, Rational};
use super::univariate::UniPoly;
use super::zpoly::{self, ZPoly};
use super::AlgebraError;

/// Coefficients in `y` (index = power of `y`), each a polynomial in `x`.
pub type BiZPoly = Vec<ZPoly>;

/// Degree in `y`, ignoring zero leading coefficients.
pub fn degree_y(p: &[ZPoly]) -> Option<usize> {
    p.iter().rposition(|c| !zpoly::is_zero(c))
}

/// Determinant by Bareiss fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// The polynomial of degree `<= values.len() - 1` taking `values[i]` at
/// `x = i`, which must have integer coefficients.
pub fn interpolate_consecutive(values: &[BigInt]) -> ZPoly {
    // Newton form on falling factorials: p(x) = sum_k (D^k v_0 / k!) x^(k).
    let mut diffs = values.to_vec();
    let mut newton = Vec::with_capacity(values.len());
    let mut fact = BigInt::one();
    for k in 0..values.len() {
        if k > 0 {
            fact *= k;
        }
        newton.push(&diffs[0] / &fact);
        for i in 0..diffs.len().saturating_sub(1) {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
        diffs.pop();
    }
    let mut out: ZPoly = Vec::new();
    let mut falling: ZPoly = vec![BigInt::one()];
    for (k, c) in newton.iter().enumerate() {
        if !c.is_zero() {
            out = zpoly::add(&out, &zpoly::scale(&falling, c));
        }
        falling = zpoly::mul(&falling, &[-BigInt::from(k), BigInt::one()]);
    }
    out
}

/// Generic `det` of a matrix whose entries are polynomials in one variable,
/// given column weights used for the degree bound.
fn poly_det(entries: &[Vec<ZPoly>], col_weight: &[i64]) -> ZPoly {
    let n = entries.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut bound: i64 = 0;
    for row in entries {
        let r = row
            .iter()
            .zip(col_weight)
            .filter_map(|(e, c)| zpoly::degree(e).map(|d| d as i64 + c))
            .max();
        match r {
            Some(r) => bound += r,
            None => return Vec::new(),
        }
    }
    bound -= col_weight.iter().sum::<i64>();
    let bound = bound.max(0) as usize;
    let values: Vec<BigInt> = (0..=bound)
        .map(|x| {
            let x = BigInt::from(x);
            let m: Vec<Vec<BigInt>> = entries
                .iter()
                .map(|row| row.iter().map(|e| zpoly::eval_int(e, &x)).collect())
                .collect();
            bareiss_det(m)
        })
        .collect();
    interpolate_consecutive(&values)
}

/// Rows `y^t * p` for `t = count-1 .. 0`, in columns `y^(width-1) .. y^0`.
fn shifted_rows(p: &[ZPoly], count: usize, width: usize, out: &mut Vec<Vec<ZPoly>>) {
    for t in (0..count).rev() {
        let row = (0..width)
            .map(|col| {
                let exp = width - 1 - col;
                if exp >= t && exp - t < p.len() {
                    p[exp - t].clone()
                } else {
                    Vec::new()
                }
            })
            .collect();
        out.push(row);
    }
}

/// `res_y(p, q)` for the formal degrees `deg_y p`, `deg_y q` (both >= 1).
pub fn resultant_y(p: &[ZPoly], q: &[ZPoly]) -> ZPoly {
    let m = degree_y(p).expect("nonzero p");
    let n = degree_y(q).expect("nonzero q");
    let (p, q) = (&p[..=m], &q[..=n]);
    let width = m + n;
    let mut rows = Vec::with_capacity(width);
    shifted_rows(p, n, width, &mut rows);
    shifted_rows(q, m, width, &mut rows);
    let weights: Vec<i64> = (0..width).map(|col| (width - 1 - col) as i64).collect();
    poly_det(&rows, &weights)
}

/// First subresultant `S_1 = a(x) y + b(x)` of `p` and `q`, both of degree
/// at least 2 in `y`. Returns `(a, b)`.
pub fn first_subresultant_y(p: &[ZPoly], q: &[ZPoly]) -> (ZPoly, ZPoly) {
    let m = degree_y(p).expect("nonzero p");
    let n = degree_y(q).expect("nonzero q");
    assert!(m >= 2 && n >= 2, "first subresultant needs degrees >= 2");
    let (p, q) = (&p[..=m], &q[..=n]);
    let width = m + n - 1;
    let mut rows = Vec::with_capacity(width - 1);
    shifted_rows(p, n - 1, width, &mut rows);
    shifted_rows(q, m - 1, width, &mut rows);
    let weights: Vec<i64> = (0..width).map(|col| (width - 1 - col) as i64).collect();
    // Columns y^(width-1) .. y^2 are shared; the last column is y^i.
    let head = width - 2;
    let with_column = |i: usize| -> ZPoly {
        let col = width - 1 - i;
        let m: Vec<Vec<ZPoly>> = rows
            .iter()
            .map(|row| {
                let mut r: Vec<ZPoly> = row[..head].to_vec();
                r.push(row[col].clone());
                r
            })
            .collect();
        let mut w: Vec<i64> = weights[..head].to_vec();
        w.push(i as i64);
        poly_det(&m, &w)
    };
    (with_column(1), with_column(0))
}

/// Splits a 2-variable polynomial with integer coefficients into
/// coefficients in variable `eliminate`.
pub fn to_bizpoly(p: &LaurentPolynomial, eliminate: usize) -> BiZPoly {
    let other = 1 - eliminate;
    let mut out: BiZPoly = Vec::new();
    for (e, c) in p.terms() {
        let ey = e.0[eliminate] as usize;
        let ex = e.0[other] as usize;
        if out.len() <= ey {
            out.resize(ey + 1, Vec::new());
        }
        if out[ey].len() <= ex {
            out[ey].resize(ex + 1, BigInt::zero());
        }
        assert!(c.is_integer(), "integer coefficients expected");
        out[ey][ex] += c.to_integer();
    }
    out
}

/// Resultant of two bivariate polynomials with respect to variable
/// `eliminate` (0 or 1), as a polynomial in the other variable.
pub fn resultant(
    p: &LaurentPolynomial,
    q: &LaurentPolynomial,
    eliminate: usize,
) -> Result<UniPoly, AlgebraError> {
    if p.nvars() != 2 || q.nvars() != 2 {
        return Err(AlgebraError::NotBivariate);
    }
    if eliminate > 1 {
        return Err(AlgebraError::VariableIndex(eliminate));
    }
    if p.is_zero() || q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !p.is_polynomial() || !q.is_polynomial() {
        return Err(AlgebraError::NegativeExponents);
    }
    let m = p.degree_in(eliminate).unwrap_or(0);
    let n = q.degree_in(eliminate).unwrap_or(0);
    if m < 1 || n < 1 {
        return Err(AlgebraError::DegreeZeroInEliminated);
    }
    let dp = common_denominator(p.terms().map(|(_, c)| c));
    let dq = common_denominator(q.terms().map(|(_, c)| c));
    let pi = to_bizpoly(&p.scale(&Rational::from_integer(dp.clone())), eliminate);
    let qi = to_bizpoly(&q.scale(&Rational::from_integer(dq.clone())), eliminate);
    let r = resultant_y(&pi, &qi);
    // res(a p, b q) = a^deg(q) b^deg(p) res(p, q)
    let factor = num_traits::pow(dp, n as usize) * num_traits::pow(dq, m as usize);
    Ok(UniPoly::from_zpoly(&r).scale(&Rational::new(BigInt::one(), factor)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, &[i64])]) -> LaurentPolynomial {
        LaurentPolynomial::from_int_terms(2, terms)
    }

    #[test]
    fn first_subresultant_by_hand() {
        // y^2 - x and y^2 + y - 2x: S_1 = det[[1, 0], [1, 1]] y + det[[1, -x], [1, -2x]]
        let p = to_bizpoly(&lp(&[(1, &[0, 2]), (-1, &[1, 0])]), 1);
        let q = to_bizpoly(&lp(&[(1, &[0, 2]), (1, &[0, 1]), (-2, &[1, 0])]), 1);
        let (a, b) = first_subresultant_y(&p, &q);
        assert_eq!(a, vec![BigInt::from(1)]);
        assert_eq!(b, vec![BigInt::from(0), BigInt::from(-1)]);
    }

    #[test]
    fn circle_and_diagonal() {
        let p = lp(&[(1, &[2, 0]), (1, &[0, 2]), (-1, &[0, 0])]);
        let q = lp(&[(1, &[1, 0]), (-1, &[0, 1])]);
        assert_eq!(
            resultant(&p, &q, 0).unwrap(),
            UniPoly::from_ints(&[-1, 0, 2])
        );
        assert!(resultant(&p, &p, 0).unwrap().is_zero());
    }

    #[test]
    fn bareiss_matches_small_determinants() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)],
        ];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(bareiss_det(m), BigInt::zero());
        let m = vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(0)],
        ];
        assert_eq!(bareiss_det(m), BigInt::from(-1));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p: ZPoly = [3, -7, 0, 5].iter().map(|&c| BigInt::from(c)).collect();
        let values: Vec<BigInt> = (0..6)
            .map(|x| zpoly::eval_int(&p, &BigInt::from(x)))
            .collect();
        assert_eq!(interpolate_consecutive(&values), p);
    }
}
