//! Fibers of the sheared system over the roots of a squarefree `T(s)`,
//! computed by a gcd in `(Q[s]/T)[y]` that splits `T` whenever a leading
//! coefficient is a zero divisor.

use num_traits::Zero;

use crate::algebra::rational::Rational;
use crate::algebra::univariate::UniPoly;

/// Polynomial in `y` with coefficients in `Q[s]`, ascending in `y`.
pub(crate) type YPoly = Vec<UniPoly>;

enum Normalized {
    Zero,
    Monic(YPoly),
    Split(UniPoly, UniPoly),
}

fn reduce(p: &[UniPoly], t: &UniPoly) -> YPoly {
    let mut out: YPoly = p.iter().map(|c| c.rem(t)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn normalize(p: &[UniPoly], t: &UniPoly) -> Normalized {
    let p = reduce(p, t);
    let Some(lc) = p.last() else {
        return Normalized::Zero;
    };
    let g = lc.gcd(t);
    if g.degree() != Some(0) {
        let cofactor = t.div_exact(&g).expect("gcd divides the modulus");
        return Normalized::Split(g, cofactor);
    }
    let inv = lc.inverse_mod(t).expect("coprime to modulus");
    Normalized::Monic(p.iter().map(|c| (c * &inv).rem(t)).collect())
}

/// Remainder of `a` by a monic `b`, coefficients reduced modulo `t`.
fn rem_monic(a: &[UniPoly], b: &[UniPoly], t: &UniPoly) -> YPoly {
    let mut r = reduce(a, t);
    let db = b.len() - 1;
    while r.len() > db {
        let lead = r.pop().expect("nonempty");
        let shift = r.len() - db;
        for (i, c) in b[..db].iter().enumerate() {
            r[shift + i] = (&r[shift + i] - &(&lead * c)).rem(t);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn mul(a: &[UniPoly], b: &[UniPoly], t: &UniPoly) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![UniPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    reduce(&out, t)
}

/// Checks that over every root `s0` of `t`, each common root `y` of
/// `p(s0, y)` and `q(s0, y)` is `0` or `s0 / lambda`, that is, lies on a
/// coordinate axis of the unsheared plane.
pub(crate) fn fibers_on_axes(p: &[UniPoly], q: &[UniPoly], t: &UniPoly, lambda: i64) -> bool {
    let mut stack = vec![(t.monic(), p.to_vec(), q.to_vec())];
    while let Some((t, a, b)) = stack.pop() {
        if t.degree() == Some(0) {
            continue;
        }
        let (mut a, mut b) = (a, b);
        loop {
            match normalize(&b, &t) {
                Normalized::Split(g, h) => {
                    stack.push((g, a.clone(), b.clone()));
                    stack.push((h, a, b));
                    break;
                }
                Normalized::Monic(bm) => {
                    let r = rem_monic(&a, &bm, &t);
                    a = bm;
                    b = r;
                }
                Normalized::Zero => {
                    match normalize(&a, &t) {
                        Normalized::Split(g, h) => {
                            stack.push((g, a.clone(), Vec::new()));
                            stack.push((h, a, Vec::new()));
                        }
                        Normalized::Zero => return false,
                        Normalized::Monic(f) => {
                            if !divides_axis_power(&f, &t, lambda) {
                                return false;
                            }
                        }
                    }
                    break;
                }
            }
        }
    }
    true
}

fn divides_axis_power(f: &[UniPoly], t: &UniPoly, lambda: i64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return true;
    }
    // y (lambda y - s)
    let base: YPoly = vec![
        UniPoly::zero(),
        UniPoly::new(vec![Rational::zero(), Rational::from_integer((-1).into())]),
        UniPoly::constant(Rational::from_integer(lambda.into())),
    ];
    let mut target: YPoly = vec![UniPoly::one()];
    for _ in 0..k {
        target = rem_monic(&mul(&target, &base, t), f, t);
    }
    rem_monic(&target, f, t).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: &[i64]) -> UniPoly {
        UniPoly::from_ints(v)
    }

    #[test]
    fn origin_fiber_passes_and_offaxis_fails() {
        // p = y^2 - s y, q = y^2 + (s - 0) y over T = s: fiber is y^2 at s = 0.
        let p = vec![c(&[]), c(&[0, -1]), c(&[1])];
        let q = vec![c(&[]), c(&[0, 1]), c(&[1])];
        assert!(fibers_on_axes(&p, &q, &c(&[0, 1]), 3));
        // p = y - 1, q = y - 1 over T = s: fiber y = 1 is off the axes.
        let p = vec![c(&[-1]), c(&[1])];
        assert!(!fibers_on_axes(&p, &p.clone(), &c(&[0, 1]), 3));
    }

    #[test]
    fn splits_on_zero_divisors() {
        // T = s (s - 2); p = s y - 0, q = y - s/2 * ... over s = 0 the
        // fiber is y = 0; over s = 2 it is y = s / lambda = 1 with lambda 2.
        let t = c(&[0, -2, 1]);
        let p = vec![c(&[]), c(&[0, 1])]; // s y
        let q = vec![c(&[0, -1, 1]), c(&[1])]; // y + s^2 - s
                                               // at s = 0: p = 0, q = y  -> y = 0 ok; at s = 2: p = 2y, q = y + 2 -> no common root
        assert!(fibers_on_axes(&p, &q, &t, 2));
    }
}
