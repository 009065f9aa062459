use densefew_core::algebra::rational::{int, rat};
use densefew_core::algebra::resultant::resultant;
use densefew_core::algebra::roots::{isolate_zpoly, sturm_count, Endpoint};
use densefew_core::algebra::zpoly;
use densefew_core::bounds::{dense_betti_bound, dense_positive_bound, dense_real_bound};
use densefew_core::counting::count_real_solutions_2d_with;
use densefew_core::lattice::{
    index_in_ambient, kernel_basis, lattice_index, saturation, smith_normal_form,
};
use densefew_core::support::{mixed_volume_2d, normalized_volume};
use densefew_core::{
    CountOptions, ExponentVector, IntegerMatrix, LatticeIndex, LaurentPolynomial, Rational,
    Sublattice, SupportSet,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn laurent(nvars: usize, max_exp: i64) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(
        (-9i64..=9, prop::collection::vec(-max_exp..=max_exp, nvars)),
        0..6,
    )
    .prop_map(move |terms| {
        let mut p = LaurentPolynomial::zero(nvars);
        for (c, e) in terms {
            p = &p + &LaurentPolynomial::monomial(nvars, int(c), ExponentVector(e));
        }
        p
    })
}

/// Sum of `c x^a y^b` over `(c, a, b)`; repeated exponents add up.
fn bivariate(terms: &[(i64, i64, i64)]) -> LaurentPolynomial {
    terms
        .iter()
        .fold(LaurentPolynomial::zero(2), |p, &(c, a, b)| {
            &p + &LaurentPolynomial::monomial(2, int(c), ExponentVector(vec![a, b]))
        })
}

fn point(nvars: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=9, 1i64..=5, any::<bool>()), nvars).prop_map(|v| {
        v.into_iter()
            .map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
            .collect()
    })
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-20i64..=20, c), r)
            .prop_map(|rows| IntegerMatrix::from_i64_rows(&rows))
    })
}

fn square_pair(max: usize) -> impl Strategy<Value = (IntegerMatrix, IntegerMatrix)> {
    (1..=max).prop_flat_map(|n| {
        let sq = move || {
            prop::collection::vec(prop::collection::vec(-20i64..=20, n), n)
                .prop_map(|rows| IntegerMatrix::from_i64_rows(&rows))
        };
        (sq(), sq())
    })
}

fn planar_points(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<[i64; 2]>> {
    prop::collection::vec((-6i64..=6, -6i64..=6).prop_map(|(a, b)| [a, b]), n)
}

fn support(points: &[[i64; 2]]) -> SupportSet {
    SupportSet::new(2, points.iter().map(|p| ExponentVector(p.to_vec()))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_axioms(a in laurent(2, 3), b in laurent(2, 3), c in laurent(2, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPolynomial::one(2), a.clone());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in laurent(2, 3), b in laurent(2, 3), y in point(2)) {
        let (va, vb) = (a.eval(&y).unwrap(), b.eval(&y).unwrap());
        prop_assert_eq!((&a * &b).eval(&y).unwrap(), &va * &vb);
        prop_assert_eq!((&a + &b).eval(&y).unwrap(), va + vb);
    }

    #[test]
    fn derivative_obeys_leibniz(a in laurent(2, 3), b in laurent(2, 3), i in 0usize..2) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    /// `Res_y(y - c0 - c1 x, q)` is `q(x, c0 + c1 x)` up to sign.
    #[test]
    fn resultant_against_linear_factor(
        c0 in -5i64..=5,
        c1 in -5i64..=5,
        q in prop::collection::vec((-9i64..=9, 0i64..=3, 0i64..=3), 1..6),
        x in point(1),
    ) {
        let q = bivariate(&q);
        prop_assume!(!q.is_zero() && q.degree_in(1).unwrap_or(0) > 0);
        let line = LaurentPolynomial::from_int_terms(2, &[(1, &[0, 1]), (-c0, &[0, 0]), (-c1, &[1, 0])]);
        let r = resultant(&line, &q, 1).unwrap();
        let y = int(c0) + int(c1) * &x[0];
        let expected = q.eval(&[x[0].clone(), y]).unwrap();
        let got = r.eval(&x[0]);
        prop_assert!(got == expected || got == -expected.clone(), "{got} vs {expected}");
    }

    /// Products of distinct linear factors `(d x - n)` are isolated into
    /// one interval per factor, each containing its root.
    #[test]
    fn isolation_finds_every_rational_root(
        roots in prop::collection::btree_set((-30i64..=30, 1i64..=6), 1..7),
        extra in 0i64..=3,
    ) {
        let mut values: Vec<Rational> = roots.iter().map(|&(n, d)| rat(n, d)).collect();
        values.sort();
        values.dedup();
        let mut p: Vec<BigInt> = vec![BigInt::one()];
        for v in &values {
            p = zpoly::mul(&p, &[-v.numer().clone(), v.denom().clone()]);
        }
        // An irreducible quadratic contributes no real roots.
        p = zpoly::mul(&p, &[BigInt::from(1 + extra), BigInt::zero(), BigInt::one()]);
        let iso = isolate_zpoly(&p);
        prop_assert_eq!(iso.len(), values.len());
        for (v, r) in values.iter().zip(iso.roots()) {
            prop_assert!(r.lo() <= v && v <= r.hi());
        }
        let uni = densefew_core::UniPoly::from_zpoly(&p);
        prop_assert_eq!(sturm_count(&uni, &Endpoint::NegInfinity, &Endpoint::PosInfinity).unwrap(), values.len());
    }

    #[test]
    fn smith_form_and_kernel(a in matrix(5, 5)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d.clone());
        let divisors = snf.elementary_divisors();
        prop_assert!(divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        let ker = kernel_basis(&a);
        prop_assert_eq!(ker.rank() + divisors.len(), a.rows());
        if ker.rank() > 0 {
            prop_assert!(ker.basis().mul(&a).unwrap().is_zero());
        }
    }

    /// `[L3 : L1] = [L3 : L2] [L2 : L1]` for `L1 = B A`, `L2 = A`, `L3 = Z^n`.
    #[test]
    fn lattice_index_is_multiplicative((a, b) in square_pair(3)) {
        prop_assume!(!a.det().is_zero() && !b.det().is_zero());
        let n = a.cols();
        let l3 = Sublattice::new(IntegerMatrix::identity(n)).unwrap();
        let l2 = Sublattice::new(a.clone()).unwrap();
        let l1 = Sublattice::new(b.mul(&a).unwrap()).unwrap();
        let i21 = lattice_index(&l1, &l2).unwrap();
        let i32 = lattice_index(&l2, &l3).unwrap();
        let i31 = lattice_index(&l1, &l3).unwrap();
        match (i21, i32, i31) {
            (LatticeIndex::Finite(x), LatticeIndex::Finite(y), LatticeIndex::Finite(z)) => prop_assert_eq!(x * y, z),
            other => prop_assert!(false, "infinite index {:?}", other),
        }
        prop_assert_eq!(index_in_ambient(&a), LatticeIndex::Finite(num_traits::Signed::abs(&a.det())));
    }

    #[test]
    fn saturation_is_idempotent_and_finite_index(a in matrix(4, 5)) {
        let l = Sublattice::generated_by(&a);
        prop_assume!(l.rank() > 0);
        let s = saturation(&l);
        prop_assert!(saturation(&s).same_lattice(&s));
        prop_assert!(lattice_index(&l, &s).unwrap().finite().is_some());
    }

    /// Volumes are invariant under translation and unimodular maps.
    #[test]
    fn volume_invariance(
        pts in planar_points(1..8),
        shift in (-5i64..=5, -5i64..=5),
        k in -3i64..=3,
        swap in any::<bool>(),
    ) {
        let a = support(&pts);
        let v = normalized_volume(&a).unwrap();
        // (x, y) -> (x + k y, y), optionally followed by a swap.
        let image: Vec<[i64; 2]> = pts
            .iter()
            .map(|p| {
                let q = [p[0] + k * p[1] + shift.0, p[1] + shift.1];
                if swap { [q[1], q[0]] } else { q }
            })
            .collect();
        prop_assert_eq!(normalized_volume(&support(&image)).unwrap(), v);
        prop_assert_eq!(mixed_volume_2d(&a, &a).unwrap(), v);
    }

    #[test]
    fn mixed_volume_symmetric_and_monotone(p in planar_points(1..6), q in planar_points(1..6), extra in planar_points(1..3)) {
        let (a, b) = (support(&p), support(&q));
        let mv = mixed_volume_2d(&a, &b).unwrap();
        prop_assert_eq!(mixed_volume_2d(&b, &a).unwrap(), mv);
        let bigger = a.union(&support(&extra));
        prop_assert!(mixed_volume_2d(&bigger, &b).unwrap() >= mv);
        // MV(P, Q) = vol(P + Q) - vol(P) - vol(Q) on normalized volumes.
        let sum: Vec<[i64; 2]> = p.iter().flat_map(|x| q.iter().map(move |y| [x[0] + y[0], x[1] + y[1]])).collect();
        let vsum = normalized_volume(&support(&sum)).unwrap();
        prop_assert_eq!(2 * mv, vsum - normalized_volume(&a).unwrap() - normalized_volume(&b).unwrap());
    }

    #[test]
    fn bounds_monotone(n in 1u32..=5, ell in 1u32..=5, d in 1u32..=4) {
        for f in [dense_positive_bound, dense_real_bound, dense_betti_bound] {
            let base = f(n, ell, d);
            prop_assert!(base.raw_lo <= base.raw_hi);
            for bigger in [f(n + 1, ell, d), f(n, ell + 1, d), f(n, ell, d + 1)] {
                prop_assert!(bigger.raw_lo > base.raw_hi);
                prop_assert!(bigger.max_count >= base.max_count);
            }
        }
        prop_assert!(dense_positive_bound(n, ell, d).raw_hi < dense_real_bound(n, ell, d).raw_lo);
    }
}

fn small_system() -> impl Strategy<Value = [LaurentPolynomial; 2]> {
    let poly =
        prop::collection::vec((-6i64..=6, 0i64..=2, 0i64..=2), 2..5).prop_map(|t| bivariate(&t));
    (poly.clone(), poly).prop_map(|(f, g)| [f, g])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Counts do not depend on equation order, scaling, the shear seed, or
    /// the order of the variables.
    #[test]
    fn count_invariances([f, g] in small_system(), seed in 0u64..1000, scale in 1i64..=7) {
        let base = count_real_solutions_2d_with(&f, &g, &CountOptions::default());
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let opts = CountOptions { seed, ..CountOptions::default() };
        let swapped = count_real_solutions_2d_with(&g, &f.scale(&int(scale)), &opts).unwrap();
        prop_assert_eq!(swapped.total_real, base.total_real);
        prop_assert_eq!(swapped.region("positive"), base.region("positive"));
        prop_assert_eq!(swapped.complex_torus_count, base.complex_torus_count);
        let (fp, gp) = (f.permute_vars(&[1, 0]), g.permute_vars(&[1, 0]));
        let transposed = count_real_solutions_2d_with(&fp, &gp, &opts).unwrap();
        prop_assert_eq!(transposed.total_real, base.total_real);
        prop_assert_eq!(transposed.region("positive"), base.region("positive"));
        prop_assert_eq!(base.points.len(), base.total_real);
        prop_assert!(base.total_real <= base.complex_torus_count);
    }
}
