//! Dense univariate polynomials over the integers, ascending coefficients.
//!
//! These are the workhorse of the certified paths: gcds run as primitive
//! remainder sequences so coefficient growth stays bounded by subresultant
//! sizes, and root isolation works on integer coefficients only.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

pub type ZPoly = Vec<BigInt>;

pub fn trim(p: &mut ZPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn trimmed(mut p: ZPoly) -> ZPoly {
    trim(&mut p);
    p
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn is_zero(p: &[BigInt]) -> bool {
    degree(p).is_none()
}

pub fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive(p: &[BigInt]) -> ZPoly {
    let mut q = trimmed(p.to_vec());
    if q.is_empty() {
        return q;
    }
    let mut c = content(&q);
    if q.last().unwrap().is_negative() {
        c = -c;
    }
    if !c.is_one() {
        for x in q.iter_mut() {
            *x = &*x / &c;
        }
    }
    q
}

/// Divides out the positive content only; signs of values are preserved.
pub fn positive_primitive(p: &[BigInt]) -> ZPoly {
    let mut q = trimmed(p.to_vec());
    if q.is_empty() {
        return q;
    }
    let c = content(&q);
    if !c.is_one() {
        for x in q.iter_mut() {
            *x = &*x / &c;
        }
    }
    q
}

pub fn add(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(x + y);
    }
    trimmed(out)
}

pub fn sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(x - y);
    }
    trimmed(out)
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trimmed(out)
}

pub fn scale(a: &[BigInt], c: &BigInt) -> ZPoly {
    trimmed(a.iter().map(|x| x * c).collect())
}

pub fn derivative(p: &[BigInt]) -> ZPoly {
    trimmed(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

pub fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Sign of `p(x)` at a rational point, computed without denominators:
/// `den^deg * p(num/den)` has the sign of `p(num/den)` since `den > 0`.
pub fn sign_at(p: &[BigInt], x: &Rational) -> i8 {
    let Some(deg) = degree(p) else { return 0 };
    let (n, d) = (x.numer(), x.denom());
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    // Horner on the homogenised form sum c_i n^i d^(deg-i).
    for c in p[..=deg].iter().rev() {
        acc = acc * n + c * &dpow;
        dpow *= d;
    }
    super::rational::bigint_sign(&acc)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
pub fn prem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = degree(b).expect("pseudo-division by zero polynomial");
    let mut r = trimmed(a.to_vec());
    let lb = b[db].clone();
    let Some(mut dr) = degree(&r) else { return r };
    if dr < db {
        return r;
    }
    let mut steps = dr - db + 1;
    while let Some(d) = degree(&r) {
        if d < db {
            break;
        }
        dr = d;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x *= &lb;
        }
        for (i, c) in b[..=db].iter().enumerate() {
            r[i + shift] -= &lr * c;
        }
        trim(&mut r);
        steps -= 1;
    }
    if steps > 0 {
        let f = num_traits::pow(lb, steps);
        for x in r.iter_mut() {
            *x *= &f;
        }
    }
    r
}

/// Pseudo-division: `(q, r)` with `lc(b)^(deg a - deg b + 1) * a = q * b + r`.
pub fn pdiv(a: &[BigInt], b: &[BigInt]) -> (ZPoly, ZPoly) {
    let db = degree(b).expect("pseudo-division by zero polynomial");
    let mut r = trimmed(a.to_vec());
    let Some(da) = degree(&r) else {
        return (Vec::new(), r);
    };
    if da < db {
        return (Vec::new(), r);
    }
    let lb = b[db].clone();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let coef = r.get(k + db).cloned().unwrap_or_default();
        for x in q.iter_mut() {
            *x *= &lb;
        }
        for x in r.iter_mut() {
            *x *= &lb;
        }
        if !coef.is_zero() {
            q[k] += &coef;
            for (i, c) in b[..=db].iter().enumerate() {
                r[i + k] -= &coef * c;
            }
        }
    }
    (trimmed(q), trimmed(r))
}

/// `s` and the nonzero integer `c` with `s * a = c (mod m)`, when `a` is
/// invertible modulo `m`; by the subresultant remainder sequence, whose
/// cofactors are integral.
pub fn inverse_mod(a: &[BigInt], m: &[BigInt]) -> Option<(ZPoly, BigInt)> {
    let mut r0 = trimmed(m.to_vec());
    let mut r1 = prem(a, m);
    let dm = degree(&r0)?;
    degree(&r1)?;
    if dm == 0 {
        return None;
    }
    let (mut s0, mut s1): (ZPoly, ZPoly) = (Vec::new(), vec![BigInt::one()]);
    // `a` was replaced by lc(m)^k a mod m; fold that factor into `c` below.
    let k = degree(a).map_or(0, |da| if da >= dm { da - dm + 1 } else { 0 });
    let scale_a = num_traits::pow(m[dm].clone(), k);
    let mut d = (dm - degree(&r1)?) as u32;
    let mut beta = if d % 2 == 0 {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut psi = -BigInt::one();
    loop {
        if degree(&r1) == Some(0) {
            // s1 * lc(m)^k * a = r1 (mod m)
            let c = r1[0].clone();
            return Some((scale(&s1, &scale_a), c));
        }
        let (q, r) = pdiv(&r0, &r1);
        if is_zero(&r) {
            return None;
        }
        let lc = r1[degree(&r1)?].clone();
        let f = num_traits::pow(lc.clone(), d as usize + 1);
        let s2 = sub(&scale(&s0, &f), &mul(&q, &s1));
        let r2: ZPoly = r.into_iter().map(|c| c / &beta).collect();
        let s2: ZPoly = s2.into_iter().map(|c| c / &beta).collect();
        let d_next = (degree(&r1)? - degree(&r2)?) as u32;
        psi = if d == 0 {
            psi
        } else {
            num_traits::pow(-lc.clone(), d as usize) / num_traits::pow(psi.clone(), d as usize - 1)
        };
        beta = -lc * num_traits::pow(psi.clone(), d_next as usize);
        d = d_next;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, trimmed(s2));
    }
}

/// Exact division over the integers; `None` when `b` does not divide `a`
/// in `Z[x]`.
pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree(b)?;
    let mut r = trimmed(a.to_vec());
    let Some(da) = degree(&r) else {
        return Some(Vec::new());
    };
    if da < db {
        return None;
    }
    let mut q = vec![BigInt::zero(); da - db + 1];
    let lb = &b[db];
    while let Some(d) = degree(&r) {
        if d < db {
            return None;
        }
        let (coef, rem) = r[d].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = d - db;
        for (i, c) in b[..=db].iter().enumerate() {
            r[i + shift] -= &coef * c;
        }
        q[shift] = coef;
        trim(&mut r);
    }
    Some(trimmed(q))
}

/// Primitive gcd (positive leading coefficient), by primitive remainder
/// sequence. `gcd(0, 0) = 0`.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if degree(&a) < degree(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while !is_zero(&b) {
        if degree(&b) == Some(0) {
            return vec![BigInt::one()];
        }
        let r = prem(&a, &b);
        a = b;
        b = primitive(&r);
    }
    primitive(&a)
}

/// Squarefree part, primitive with positive leading coefficient.
pub fn squarefree(p: &[BigInt]) -> ZPoly {
    let p = primitive(p);
    match degree(&p) {
        None | Some(0) => p,
        Some(_) => {
            let g = gcd(&p, &derivative(&p));
            if degree(&g) == Some(0) {
                p
            } else {
                primitive(&div_exact(&p, &g).expect("gcd divides its argument"))
            }
        }
    }
}

/// `p(x + 1)` by repeated synthetic division (Taylor shift).
pub fn taylor_shift_one(p: &[BigInt]) -> ZPoly {
    let mut c = p.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = c[j + 1].clone();
            c[j] += t;
        }
    }
    c
}

/// `2^deg * p(x / 2)`.
pub fn halve_argument(p: &[BigInt]) -> ZPoly {
    let n = p.len();
    p.iter()
        .enumerate()
        .map(|(i, c)| c << (n - 1 - i))
        .collect()
}

/// `p(2^k x)`.
pub fn scale_argument_pow2(p: &[BigInt], k: usize) -> ZPoly {
    p.iter().enumerate().map(|(i, c)| c << (i * k)).collect()
}

pub fn negate_argument(p: &[BigInt]) -> ZPoly {
    p.iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect()
}

pub fn reverse(p: &[BigInt]) -> ZPoly {
    let mut q = trimmed(p.to_vec());
    q.reverse();
    q
}

pub fn sign_variations(p: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for c in p {
        let s = super::rational::bigint_sign(c);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Integer polynomial with the same roots as a rational one (denominators
/// cleared by a positive factor, so signs agree pointwise).
pub fn from_rational(coeffs: &[Rational]) -> ZPoly {
    let den = super::rational::common_denominator(coeffs.iter());
    trimmed(
        coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect(),
    )
}

pub fn to_rational(p: &[BigInt]) -> Vec<Rational> {
    p.iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn subresultant_inverse() {
        let m = z(&[7, -3, 0, 5, 0, 2]);
        for a in [
            z(&[1, 2]),
            z(&[3, 0, -4, 1, 9]),
            z(&[-2, 5, 1, 0, 0, 0, 3, 1]),
        ] {
            let (s, c) = inverse_mod(&a, &m).unwrap();
            let lhs = sub(&mul(&s, &a), &[c]);
            let lhs = scale(&lhs, &num_traits::pow(m[5].clone(), 10));
            assert!(is_zero(&prem(&lhs, &m)), "{a:?}");
        }
        assert!(inverse_mod(&z(&[-1, 1]), &z(&[-1, 0, 1])).is_none());
        let (q, r) = pdiv(&z(&[1, 0, 0, 2]), &z(&[1, 3]));
        assert_eq!(
            add(&mul(&q, &z(&[1, 3])), &r),
            scale(&z(&[1, 0, 0, 2]), &BigInt::from(27))
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)^2 (x+1) = x^3 - x^2 - x + 1
        let p = z(&[1, -1, -1, 1]);
        assert_eq!(squarefree(&p), z(&[-1, 0, 1]));
        let g = gcd(
            &z(&[-4, 0, 0, 0, 1])
                .iter()
                .map(|c| c * 2)
                .collect::<Vec<_>>(),
            &z(&[-2, 0, 1]),
        );
        assert_eq!(g, z(&[-2, 0, 1]));
        assert_eq!(gcd(&z(&[1, 1]), &z(&[-1, 1])), z(&[1]));
    }

    #[test]
    fn shifts_and_sign() {
        // x^2 -> (x+1)^2
        assert_eq!(taylor_shift_one(&z(&[0, 0, 1])), z(&[1, 2, 1]));
        assert_eq!(halve_argument(&z(&[1, 1, 1])), z(&[4, 2, 1]));
        assert_eq!(
            sign_at(&z(&[-2, 0, 1]), &super::super::rational::rat(3, 2)),
            1
        );
        assert_eq!(
            sign_at(&z(&[-2, 0, 1]), &super::super::rational::rat(4, 3)),
            -1
        );
        assert_eq!(sign_at(&z(&[-1, 2]), &super::super::rational::rat(1, 2)), 0);
    }

    #[test]
    fn exact_division() {
        let a = mul(&z(&[1, 2]), &z(&[3, 0, 5]));
        assert_eq!(div_exact(&a, &z(&[1, 2])), Some(z(&[3, 0, 5])));
        assert_eq!(div_exact(&z(&[1, 0, 1]), &z(&[1, 1])), None);
    }
}
