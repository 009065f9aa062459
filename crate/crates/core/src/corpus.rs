//! The worked example and seeded random `(d, 2)`-dense systems in two
//! variables.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::laurent::{ExponentVector, LaurentPolynomial};
use crate::algebra::rational::Rational;
use crate::counting::{count_gale_with, count_real_solutions_2d_with, CountOptions, CountReport};
use crate::gale::{
    build_gale_system, diagonalize, gale_equation_as_polynomial, FewnomialSystem, GaleSystem,
};
use crate::support::{simplex_lattice_points, DenseDecomposition};

/// The pair `(f, g)` of the worked example, in variables `(t, u)`.
pub fn worked_example_polynomials() -> [LaurentPolynomial; 2] {
    let f = LaurentPolynomial::from_int_terms(
        2,
        &[
            (27, &[-5, 0]),
            (31, &[0, 0]),
            (-16, &[2, 1]),
            (-16, &[2, -1]),
            (-16, &[4, 2]),
            (40, &[4, 0]),
            (-16, &[4, -2]),
        ],
    );
    let g = LaurentPolynomial::from_int_terms(
        2,
        &[
            (12, &[1, 0]),
            (40, &[0, 0]),
            (-32, &[2, 1]),
            (-32, &[2, -1]),
            (5, &[4, 2]),
            (6, &[4, 0]),
            (5, &[4, -2]),
        ],
    );
    [f, g]
}

/// `W = {(-5,0), (1,0)}`, `v0 = 0`, `v1 = (2,1)`, `v2 = (2,-1)`, `d = 2`.
pub fn worked_example_decomposition() -> DenseDecomposition {
    DenseDecomposition::from_vectors(
        2,
        ExponentVector(vec![0, 0]),
        &[ExponentVector(vec![2, 1]), ExponentVector(vec![2, -1])],
        vec![ExponentVector(vec![-5, 0]), ExponentVector(vec![1, 0])],
    )
}

pub fn worked_example() -> (FewnomialSystem, DenseDecomposition) {
    let sys =
        FewnomialSystem::from_polynomials(&worked_example_polynomials()).expect("square system");
    (sys, worked_example_decomposition())
}

/// Limits keeping random instances cheap to count exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusLimits {
    /// Maximal total degree of each cleared original polynomial.
    pub max_original_degree: i64,
    /// Maximal total degree of each Gale equation.
    pub max_gale_degree: i64,
    pub max_resamples: u32,
}

impl Default for CorpusLimits {
    fn default() -> Self {
        Self {
            max_original_degree: 12,
            max_gale_degree: 10,
            max_resamples: 10_000,
        }
    }
}

/// A random system accepted by the sampler, with both counts.
#[derive(Clone, Debug)]
pub struct CorpusSystem {
    /// Seed of the accepted draw.
    pub seed: u64,
    pub system: FewnomialSystem,
    pub decomposition: DenseDecomposition,
    pub gale: GaleSystem,
    pub original_count: CountReport,
    pub gale_count: CountReport,
}

fn random_vector<R: Rng>(rng: &mut R, bound: i64) -> ExponentVector {
    ExponentVector(vec![
        rng.gen_range(-bound..=bound),
        rng.gen_range(-bound..=bound),
    ])
}

fn nonzero_coefficient<R: Rng>(rng: &mut R) -> i64 {
    let c = rng.gen_range(-10..=9);
    if c >= 0 {
        c + 1
    } else {
        c
    }
}

/// One draw: `v0` in `[-2,2]^2`, `v1, v2` and `W` in `[-3,3]^2`,
/// coefficients nonzero integers in `[-10, 10]`. Returns `None` when a
/// precondition fails (non-injective decomposition, singular `W`-block,
/// degree caps, or counting failure).
pub fn draw_system(d: u32, seed: u64, limits: &CorpusLimits) -> Option<CorpusSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v0 = random_vector(&mut rng, 2);
    let vs = [random_vector(&mut rng, 3), random_vector(&mut rng, 3)];
    let w = vec![random_vector(&mut rng, 3), random_vector(&mut rng, 3)];
    let dec = DenseDecomposition::from_vectors(d, v0, &vs, w);
    let mut points = dec.images();
    points.extend(dec.w.iter().cloned());
    let npoints = simplex_lattice_points(d, 2).len() + 2;
    let polys: Vec<LaurentPolynomial> = (0..2)
        .map(|_| {
            let terms = points.iter().map(|e| {
                (
                    Rational::from_integer(nonzero_coefficient(&mut rng).into()),
                    e.clone(),
                )
            });
            LaurentPolynomial::from_terms(2, terms).expect("two coordinates")
        })
        .collect();
    if polys.iter().any(|p| p.len() != npoints) {
        return None;
    }
    let degree_ok = |p: &LaurentPolynomial, cap: i64| {
        p.clear_denominators()
            .ok()
            .and_then(|(c, _)| c.total_degree())
            .is_some_and(|deg| deg <= cap)
    };
    if !polys
        .iter()
        .all(|p| degree_ok(p, limits.max_original_degree))
    {
        return None;
    }
    let system = FewnomialSystem::from_polynomials(&polys).ok()?;
    let diag = diagonalize(&system, &dec).ok()?;
    let gale = build_gale_system(&diag, &diag.default_relations()).ok()?;
    for j in 0..2 {
        let e = gale_equation_as_polynomial(&gale, j).ok()?;
        if e.is_zero() || !degree_ok(&e, limits.max_gale_degree) {
            return None;
        }
    }
    let opts = CountOptions {
        seed,
        ..CountOptions::default()
    };
    let original_count = count_real_solutions_2d_with(&polys[0], &polys[1], &opts).ok()?;
    let gale_count = count_gale_with(&gale, &opts).ok()?;
    Some(CorpusSystem {
        seed,
        system,
        decomposition: dec,
        gale,
        original_count,
        gale_count,
    })
}

/// `count` accepted systems, alternating `d = 1` and `d = 2`, drawing
/// seeds `base_seed, base_seed + 1, ...` until each slot is filled.
pub fn sample_corpus(count: usize, base_seed: u64, limits: &CorpusLimits) -> Vec<CorpusSystem> {
    let mut out = Vec::with_capacity(count);
    let mut seed = base_seed;
    for i in 0..count {
        let d = 1 + (i % 2) as u32;
        for _ in 0..limits.max_resamples {
            seed += 1;
            if let Some(s) = draw_system(d, seed, limits) {
                out.push(s);
                break;
            }
        }
    }
    out
}
