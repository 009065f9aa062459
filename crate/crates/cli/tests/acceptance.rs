//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line, even when it passes.

use std::process::Command;
use std::time::{Duration, Instant};

use densefew_core::bounds::{
    audit_grid, bs_betti_bound, bs_positive_bound, dense_betti_bound, dense_positive_bound,
    dense_real_bound, AuditStatus, EstimateFamily,
};
use densefew_core::corpus::{sample_corpus, worked_example_polynomials, CorpusLimits};
use densefew_core::counting::{count_gale_with, count_real_solutions_2d_with};
use densefew_core::gale::{
    build_gale_system, check_hypotheses, diagonalize, jacobian_witness, random_instance,
    relations_from_rows, Relation,
};
use densefew_core::lattice::{kernel_basis, saturation, smith_normal_form};
use densefew_core::support::{mixed_volume_2d, normalized_volume};
use densefew_core::{
    CountOptions, ExponentVector, IntegerMatrix, LaurentPolynomial, Rational, Sublattice,
    SupportSet,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

const TOL: f64 = 5e-4;

// Listed approximations of the real solutions, as printed.
const LISTED_ORIGINAL: [(f64, f64); 10] = [
    (0.619, 0.093),
    (0.839, 0.326),
    (1.003, 0.543),
    (1.591, 0.911),
    (-1.911, 0.864),
    (0.619, 10.71),
    (0.839, 3.101),
    (1.003, 1.843),
    (1.591, 1.097),
    (-1.911, 1.158),
];

const LISTED_GALE: [(f64, f64); 10] = [
    (4.229, 3.154),
    (4.098, 0.036),
    (2.777, 2.306),
    (2.184, 0.227),
    (1.853, 0.546),
    (3.154, 4.229),
    (0.036, 4.098),
    (2.306, 2.777),
    (0.227, 2.184),
    (0.546, 1.853),
];

/// Greedy one-to-one matching; returns the listed entries left unmatched.
fn unmatched(points: &[[f64; 2]], listed: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut used = vec![false; points.len()];
    let mut missing = Vec::new();
    for &(x, y) in listed {
        let hit = (0..points.len()).find(|&i| {
            !used[i] && (points[i][0] - x).abs() <= TOL && (points[i][1] - y).abs() <= TOL
        });
        match hit {
            Some(i) => used[i] = true,
            None => missing.push((x, y)),
        }
    }
    missing
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_densefew"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

fn worked_example() -> Verdict {
    let start = Instant::now();
    let (code, stdout) = run_cli(&["--json", "verify-example"]);
    let elapsed = start.elapsed();
    let envelope: serde_json::Value = match serde_json::from_str(&stdout) {
        Ok(v) => v,
        Err(e) => return verdict(false, format!("exit {code}, unparsable output: {e}")),
    };
    let failed: Vec<String> = envelope["result"]["assertions"]
        .as_array()
        .map(|a| {
            a.iter()
                .filter(|x| x["passed"] != true)
                .map(|x| x["name"].as_str().unwrap_or("?").to_string())
                .collect()
        })
        .unwrap_or_else(|| vec!["no assertions".into()]);
    let (corrupt_code, _) = run_cli(&["verify-example", "--corrupt"]);

    // Compare against the listed pairs directly, without the built-in
    // expectations of verify-example.
    let [f, g] = worked_example_polynomials();
    let opts = CountOptions::default();
    let original = count_real_solutions_2d_with(&f, &g, &opts).expect("original count");
    let (sys, dec) = densefew_core::corpus::worked_example();
    let diag = diagonalize(&sys, &dec).expect("diagonalizable");
    let rels = relations_from_rows(&[vec![1, 1, 1, 1], vec![2, 2, 1, -3]]).unwrap();
    let gale =
        count_gale_with(&build_gale_system(&diag, &rels).unwrap(), &opts).expect("gale count");
    let orig_pts: Vec<[f64; 2]> = original.points.iter().map(|p| p.approx).collect();
    let gale_pts: Vec<[f64; 2]> = gale.points.iter().map(|p| p.approx).collect();
    let orig_missing = unmatched(&orig_pts, &LISTED_ORIGINAL);
    let gale_missing = unmatched(&gale_pts, &LISTED_GALE);

    // The one listed pair that no certified root matches is (0.839, 0.326).
    // The system is invariant under u -> 1/u and its partner is listed as
    // (0.839, 3.101), so the printed 0.326 is a misprint for 0.3225.
    let misprint_explained = orig_missing == [(0.839, 0.326)]
        && orig_pts
            .iter()
            .any(|p| (p[0] - 0.839).abs() <= TOL && (p[1] - 1.0 / 3.101).abs() <= TOL)
        && !(1.0 / (3.101 + TOL)..=1.0 / (3.101 - TOL)).contains(&0.326);
    let previews_ok = (orig_missing.is_empty() || misprint_explained) && gale_missing.is_empty();

    let passed = code == 0
        && failed.is_empty()
        && corrupt_code == 1
        && previews_ok
        && elapsed < Duration::from_secs(60);
    let mut detail = format!(
        "verify-example exit {code} in {:.1}s, failed assertions {:?}, corrupted run exit {corrupt_code}; \
         original {} real / {} positive, Gale {} in M(R) / {} in delta; unmatched listed pairs: original {:?}, Gale {:?}",
        elapsed.as_secs_f64(),
        failed,
        original.total_real,
        original.region("positive"),
        gale.region("m_real"),
        gale.region("delta"),
        orig_missing,
        gale_missing
    );
    if misprint_explained {
        detail.push_str(" (listed (0.839, 0.326) contradicts the u -> 1/u symmetry; certified value 0.3225 = 1/3.101)");
    }
    verdict(passed, detail)
}

fn pts(points: &[[i64; 2]]) -> Vec<ExponentVector> {
    points.iter().map(|p| ExponentVector(p.to_vec())).collect()
}

/// Twice the area of the convex hull by brute force: a segment is a hull
/// edge when every point lies weakly on one side.
fn doubled_hull_area(points: &[[i64; 2]]) -> i64 {
    let cross = |o: [i64; 2], a: [i64; 2], b: [i64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut area = 0;
    for &a in points {
        for &b in points {
            if a == b {
                continue;
            }
            let left = points.iter().all(|&p| cross(a, b, p) >= 0);
            let collinear_inside = points.iter().all(|&p| {
                cross(a, b, p) != 0
                    || (p[0] - a[0]) * (p[0] - b[0]) + (p[1] - a[1]) * (p[1] - b[1]) <= 0
            });
            if left && collinear_inside {
                area += a[0] * b[1] - a[1] * b[0];
            }
        }
    }
    area
}

fn bound_values() -> Verdict {
    let positive = dense_positive_bound(2, 2, 2).max_count;
    // v0 = 0, v1 = (7,1), v2 = (2,3), d = 2, W = {(9,0), (2,7)}.
    let triangle = [
        [0, 0],
        [7, 1],
        [2, 3],
        [14, 2],
        [9, 4],
        [4, 6],
        [9, 0],
        [2, 7],
    ];
    let support = SupportSet::new(2, pts(&triangle)).unwrap();
    let volume = normalized_volume(&support).unwrap();
    let oracle = doubled_hull_area(&triangle);
    let passed = positive == BigInt::from(83) && volume == 112 && oracle == 112;
    verdict(
        passed,
        format!("dense positive bound (2,2,2) max count {positive}; normalized volume {volume} (hull oracle {oracle})"),
    )
}

fn degeneration() -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=6 {
        for ell in 1..=6 {
            let dense = dense_positive_bound(n, ell, 1);
            let bs = bs_positive_bound(ell, n);
            let betti = dense_betti_bound(n, ell, 1);
            let bs_betti = bs_betti_bound(ell, n);
            if dense.raw_lo != bs.raw_lo
                || dense.raw_hi != bs.raw_hi
                || dense.max_count != bs.max_count
            {
                bad.push(format!("positive (n={n}, ell={ell})"));
            }
            if betti.raw_lo != bs_betti.raw_lo
                || betti.raw_hi != bs_betti.raw_hi
                || betti.max_count != bs_betti.max_count
            {
                bad.push(format!("betti (n={n}, ell={ell})"));
            }
        }
    }
    verdict(
        bad.is_empty(),
        format!("36 parameter pairs, mismatches {bad:?}"),
    )
}

fn corpus_criteria() -> (Verdict, Verdict) {
    let start = Instant::now();
    let corpus = sample_corpus(100, 1000, &CorpusLimits::default());
    let elapsed = start.elapsed();
    let mut positive_equal = 0;
    let mut real_compared = 0;
    let mut real_equal = 0;
    let mut mismatches = Vec::new();
    let mut violations = Vec::new();
    let positive_bounds = [dense_positive_bound(2, 2, 1), dense_positive_bound(2, 2, 2)];
    let real_bounds = [dense_real_bound(2, 2, 1), dense_real_bound(2, 2, 2)];
    for c in &corpus {
        let positive = c.original_count.region("positive");
        let real = c.original_count.total_real;
        if positive == c.gale_count.region("delta") {
            positive_equal += 1;
        } else {
            mismatches.push(format!("seed {} positive", c.seed));
        }
        let rows: Vec<Vec<i64>> = c.gale.relations.iter().map(Relation::concat).collect();
        let rels = relations_from_rows(&rows).unwrap();
        let hyp = check_hypotheses(&c.system.support, &rels, &c.decomposition).unwrap();
        if hyp.real_case_ok {
            real_compared += 1;
            if real == c.gale_count.region("m_real") {
                real_equal += 1;
            } else {
                mismatches.push(format!("seed {} real", c.seed));
            }
        }
        let k = c.decomposition.d as usize - 1;
        let polys = c.system.polynomials();
        let supports: Vec<SupportSet> = polys
            .iter()
            .map(|p| SupportSet::new(2, p.support()).unwrap())
            .collect();
        let mv = mixed_volume_2d(&supports[0], &supports[1]).unwrap();
        if BigInt::from(positive) > positive_bounds[k].max_count {
            violations.push(format!("seed {} positive {positive}", c.seed));
        }
        if BigInt::from(real) > real_bounds[k].max_count {
            violations.push(format!("seed {} real {real}", c.seed));
        }
        if real as u128 > mv {
            violations.push(format!("seed {} real {real} > mixed volume {mv}", c.seed));
        }
    }
    let n = corpus.len();
    let correspondence = verdict(
        n == 100 && positive_equal == n && real_equal == real_compared && elapsed < Duration::from_secs(900),
        format!(
            "{n} systems in {:.0}s; positive = delta in {positive_equal}/{n}; real = M(R) in {real_equal}/{real_compared} \
             odd-index cases; mismatches {mismatches:?}",
            elapsed.as_secs_f64()
        ),
    );
    let compliance = verdict(
        n == 100 && violations.is_empty(),
        format!("{n} systems, violations {violations:?}"),
    );
    (correspondence, compliance)
}

fn jacobian_degree() -> Verdict {
    let start = Instant::now();
    let mut runs = 0;
    let mut polynomial = 0;
    let mut degree_ok = 0;
    let mut logged = Vec::new();
    for ell in 1..=2usize {
        for j in 1..=ell {
            for n in 1..=2usize {
                for d in 1..=2u32 {
                    for seed in 0..20u64 {
                        runs += 1;
                        let (h, rels, g) = random_instance(ell, j, n, d, seed);
                        let w = match jacobian_witness(&h, &rels, &g, j) {
                            Ok(w) => w,
                            Err(e) => {
                                logged.push(format!("({ell},{j},{n},{d}) seed {seed}: {e}"));
                                continue;
                            }
                        };
                        // Independent pointwise check at a rational point.
                        let y: Vec<Rational> = (0..ell)
                            .map(|m| Rational::new((3 + 2 * m as i64).into(), 5.into()))
                            .collect();
                        let agrees =
                            w.upsilon_times_j.eval(&y) == Some(pointwise(&h, &rels, &g, j, &y));
                        if w.is_polynomial() && agrees {
                            polynomial += 1;
                        } else {
                            logged.push(format!(
                                "({ell},{j},{n},{d}) seed {seed}: not a polynomial identity"
                            ));
                        }
                        let expected = (1u64 << (ell - j)) * n as u64 * d as u64;
                        if w.expected_degree == expected && w.degree_matches() {
                            degree_ok += 1;
                        } else {
                            logged.push(format!(
                                "({ell},{j},{n},{d}) seed {seed}: degree {:?}, expected {expected}",
                                w.actual_degree
                            ));
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let passed =
        polynomial == runs && degree_ok * 100 >= runs * 95 && elapsed < Duration::from_secs(600);
    verdict(
        passed,
        format!(
            "{runs} runs in {:.1}s: polynomial {polynomial}/{runs}, expected degree {degree_ok}/{runs}; logged {logged:?}",
            elapsed.as_secs_f64()
        ),
    )
}

/// `Upsilon * J` at `y` from ordinary partial derivatives.
fn pointwise(
    h: &[LaurentPolynomial],
    rels: &[Relation],
    g: &[LaurentPolynomial],
    j: usize,
    y: &[Rational],
) -> Rational {
    let ell = y.len();
    let hv: Vec<Rational> = h.iter().map(|p| p.eval(y).unwrap()).collect();
    let mut rows: Vec<Vec<Rational>> = rels[..j]
        .iter()
        .map(|rel| {
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
                .collect()
        })
        .collect();
    rows.extend(g.iter().map(|gk| {
        (0..ell)
            .map(|m| gk.derivative(m).eval(y).unwrap())
            .collect()
    }));
    let det = match ell {
        1 => rows[0][0].clone(),
        _ => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
    };
    y.iter().chain(&hv).fold(det, |a, b| a * b)
}

fn audit() -> Verdict {
    let rows = audit_grid(4, 4, 3);
    let find = |ell, j, n| {
        rows.iter()
            .find(|r| r.family == EstimateFamily::Lemma4 && (r.ell, r.j, r.n) == (ell, j, n))
    };
    let int = |v: i64| Rational::from_integer(v.into());
    let violated = find(2, 1, 2).is_some_and(|r| {
        r.lhs == int(10) && r.rhs == int(8) && r.status() == AuditStatus::Violated
    });
    let equality = find(2, 1, 3).is_some_and(|r| {
        r.lhs == int(18) && r.rhs == int(18) && r.status() == AuditStatus::Equality
    });

    // Recompute every row with machine integers.
    let binom = |n: u64, k: u64| -> i128 {
        if k > n {
            return 0;
        }
        (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
    };
    let p2 = |m: u64| 2i128.pow(binom(m, 2) as u32);
    let mut wrong = Vec::new();
    let mut stratum_rows = 0;
    let mut stratum_ok = true;
    for r in &rows {
        let (l, j, n) = (r.ell as u64, r.j as u64, r.n as u64);
        let (lhs, rhs) = match r.family {
            EstimateFamily::Stratum => {
                stratum_rows += 1;
                let d = r.d.expect("stratum rows carry d") as u64;
                let common = p2(l - j) * (n as i128).pow((l - j) as u32);
                let sum: i128 = (0..=j)
                    .map(|q| binom(l + 1, j - q) * binom(n, q) * (d as i128).pow(q as u32))
                    .sum();
                let lhs = common * (d as i128).pow((l - j) as u32) * sum;
                let rhs = common * binom(1 + l + n, j) * (d as i128).pow(l as u32);
                let status_ok = match r.status() {
                    AuditStatus::Equality => d == 1,
                    AuditStatus::Holds => d != 1,
                    AuditStatus::Violated => false,
                };
                stratum_ok &= status_ok;
                (int(lhs as i64), int(rhs as i64))
            }
            EstimateFamily::Lemma4 => {
                let lhs = p2(l - j) * (n as i128).pow((l - j) as u32) * binom(1 + l + n, j);
                let fact: i128 = (1..=j as i128).product();
                let rhs = Rational::new(
                    BigInt::from(2i128.pow(j as u32) * p2(l) * (n as i128).pow(l as u32)),
                    BigInt::from(2 * fact),
                );
                (int(lhs as i64), rhs)
            }
        };
        if r.lhs != lhs || r.rhs != rhs {
            wrong.push(format!(
                "{:?} ({}, {}, {}, {:?})",
                r.family, r.ell, r.j, r.n, r.d
            ));
        }
    }
    let (code, _) = run_cli(&["audit"]);
    verdict(
        violated && equality && stratum_ok && wrong.is_empty() && stratum_rows > 0 && code == 0,
        format!(
            "{} rows; lemma (2,1,2) 10/8 violated: {violated}; lemma (2,1,3) 18/18 equality: {equality}; \
             stratum rows hold with equality exactly at d = 1: {stratum_ok}; oracle mismatches {wrong:?}; cli exit {code}",
            rows.len()
        ),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntegerMatrix {
    let rows = rng.gen_range(1..=8);
    let cols = rng.gen_range(1..=8);
    // Sparse and low-rank draws exercise nontrivial kernels and divisors.
    let style = rng.gen_range(0..3);
    let mut entries: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| match style {
                    0 => rng.gen_range(-100..=100),
                    _ => {
                        if rng.gen_bool(0.5) {
                            0
                        } else {
                            rng.gen_range(-100..=100)
                        }
                    }
                })
                .collect()
        })
        .collect();
    if style == 2 && rows > 1 {
        // Repeat a scaled row to force a dependency.
        let k = rng.gen_range(-3..=3);
        entries[rows - 1] = entries[0]
            .iter()
            .map(|x| (x * k).clamp(-100, 100))
            .collect();
    }
    IntegerMatrix::from_i64_rows(&entries)
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

fn smith_and_kernels() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    for t in 0..500 {
        let a = random_matrix(&mut rng);
        let snf = smith_normal_form(&a);
        let mut fail =
            |what: &str| failures.push(format!("matrix {t} ({}x{}): {what}", a.rows(), a.cols()));
        if snf.u.mul(&a).and_then(|ua| ua.mul(&snf.v)).ok().as_ref() != Some(&snf.d) {
            fail("UAV != D");
        }
        if !is_unit(&snf.u.det()) || !is_unit(&snf.v.det()) {
            fail("U or V not unimodular");
        }
        if snf.v.mul(&snf.v_inv).ok() != Some(IntegerMatrix::identity(a.cols())) {
            fail("V * V^-1 != I");
        }
        let divisors = snf.elementary_divisors();
        let off_diagonal =
            (0..a.rows()).any(|i| (0..a.cols()).any(|j| i != j && !snf.d.get(i, j).is_zero()));
        let chain = divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let positive = divisors.iter().all(|x| x.is_positive());
        let trailing_zero =
            (divisors.len()..a.rows().min(a.cols())).all(|i| snf.d.get(i, i).is_zero());
        if off_diagonal || !chain || !positive || !trailing_zero {
            fail("D is not in Smith form");
        }
        // d_1 is the gcd of all entries; for square matrices the product
        // of the diagonal is |det|.
        let gcd = a
            .to_rows()
            .into_iter()
            .flatten()
            .fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, &x));
        if divisors.first().map_or(!gcd.is_zero(), |d1| *d1 != gcd) {
            fail("first divisor is not the content");
        }
        if a.rows() == a.cols() {
            let prod: BigInt = if divisors.len() == a.rows() {
                divisors.iter().product()
            } else {
                BigInt::zero()
            };
            if prod != a.det().abs() {
                fail("divisor product != |det|");
            }
        }
        let ker = kernel_basis(&a);
        if ker.rank() + divisors.len() != a.rows() {
            fail("kernel rank");
        }
        if ker.rank() > 0 && !ker.basis().mul(&a).is_ok_and(|p| p.is_zero()) {
            fail("kernel rows do not annihilate");
        }
        if ker.rank() > 0 && !saturation(&ker).same_lattice(&ker) {
            fail("kernel is not saturated");
        }
        if !divisors.is_empty() {
            let l = Sublattice::generated_by(&a);
            let s = saturation(&l);
            if !saturation(&s).same_lattice(&s) {
                fail("saturation not idempotent");
            }
            if !l.basis().to_rows().iter().all(|r| s.contains(r)) {
                fail("lattice not inside its saturation");
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("500 matrices up to 8x8, failures {failures:?}"),
    )
}

fn main() {
    let results = std::thread::scope(|s| {
        let corpus = s.spawn(corpus_criteria);
        let first = s.spawn(worked_example);
        let sixth = s.spawn(jacobian_degree);
        let eighth = s.spawn(smith_and_kernels);
        let second = bound_values();
        let third = degeneration();
        let seventh = audit();
        let (fourth, fifth) = corpus.join().expect("corpus thread");
        vec![
            (1, "worked example", first.join().expect("thread")),
            (2, "bound values", second),
            (3, "d = 1 degeneration", third),
            (4, "Gale correspondence", fourth),
            (5, "bound compliance", fifth),
            (6, "Jacobian degree", sixth.join().expect("thread")),
            (7, "estimate audit", seventh),
            (8, "Smith form and kernels", eighth.join().expect("thread")),
        ]
    });
    let mut all = true;
    for (k, name, v) in &results {
        all &= v.passed;
        println!(
            "criterion {k} ({name}): {} - {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
