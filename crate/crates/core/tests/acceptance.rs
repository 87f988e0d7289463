//! Acceptance gate: ten end-to-end checks, one test each. Every test prints
//! a single `criterion N (<name>): PASS|FAIL` line (visible with
//! `--nocapture`, and in the captured output of any failure).

use std::time::Instant;

use num::BigRational;
use once_cell::sync::Lazy;

use ost_core::harmonic::HarmonicCache;
use ost_core::lifting::{lift_spectrum, master_identity_residual, specht_basis, theta};
use ost_core::lowerbound::{
    exact_b_probability, fixed_point_estimate, sample_mean_stderr, CouponKind, CouponProcess,
};
use ost_core::perm::factorial;
use ost_core::scalar::ratio;
use ost_core::shuffle::{build_generator, cutoff_time, WeightFunction};
use ost_core::spectrum::predicates::bound_predicates;
use ost_core::spectrum::{
    eig_unbiased, full_spectrum, l2_bound_from, l2_bound_relaxed_exact, lower_window_time,
    matrix_spectrum, tv_profile, tv_upper_from_relaxed, TvProfile,
};
use ost_core::tableaux::{enumerate_syt, partitions, Partition};
use ost_core::Scalar;

fn report(num: u32, name: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {num} ({name}): {verdict}");
    assert!(
        failures.is_empty(),
        "criterion {num} ({name}): {}",
        failures.join("; ")
    );
}

/// The expensive shared input: exact float TV profile of the unbiased
/// ten-card walk, long enough for both the sandwich sweep and the
/// cutoff-shape checks.
static PROFILE_TEN: Lazy<TvProfile<f64>> = Lazy::new(|| {
    tv_profile::<f64>(10, &WeightFunction::Unbiased, 54, None).expect("ten-card profile")
});

#[test]
fn criterion_01_exact_two_row_table() {
    let shape = Partition::parse("3,2").unwrap();
    let tableaux = enumerate_syt(&shape).unwrap();
    // Warm pass so the timed pass measures arithmetic, not page faults.
    for t in &tableaux {
        let _ = eig_unbiased(t);
    }
    let start = Instant::now();
    let mut got: Vec<BigRational> = tableaux.iter().map(eig_unbiased).collect();
    let elapsed = start.elapsed();
    got.sort();

    let mut expected = vec![
        ratio(16, 25),
        ratio(59, 100),
        ratio(57, 100),
        ratio(157, 300),
        ratio(151, 300),
    ];
    expected.sort();

    let mut failures = Vec::new();
    if got != expected {
        failures.push(format!(
            "eigenvalues {:?}",
            got.iter().map(Scalar::render).collect::<Vec<_>>()
        ));
    }
    if elapsed.as_micros() >= 1_000 {
        failures.push(format!("runtime {elapsed:?} is not under 1 ms"));
    }
    report(1, "exact eigenvalues of the (3,2) shape", &failures);
}

#[test]
fn criterion_02_tableau_spectrum_matches_dense_matrix() {
    let mut failures = Vec::new();
    for n in 2..=5usize {
        for alpha in [0.0, 1.0, -1.0] {
            let w = WeightFunction::from_alpha(alpha);
            let mine = full_spectrum(n, &w).unwrap().expand_f64();
            let oracle = matrix_spectrum(n, &w).unwrap();
            if mine.len() != oracle.len() {
                failures.push(format!(
                    "n={n} alpha={alpha}: {} vs {} eigenvalues",
                    mine.len(),
                    oracle.len()
                ));
                continue;
            }
            let dev = mine
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max);
            if dev > 1e-9 {
                failures.push(format!("n={n} alpha={alpha}: deviation {dev:e}"));
            }
        }
    }
    report(2, "tableau spectrum matches the dense matrix", &failures);
}

#[test]
fn criterion_03_trace_identity() {
    let mut failures = Vec::new();

    // Unbiased: the trace is (n-1)! H_n.
    let harmonic = HarmonicCache::new(8);
    for n in 2..=8usize {
        let trace = full_spectrum(n, &WeightFunction::Unbiased).unwrap().trace();
        let expected = ratio(factorial(n - 1) as i64, 1) * harmonic.get(n);
        if trace != expected {
            failures.push(format!(
                "unbiased n={n}: trace {} != {}",
                trace.render(),
                expected.render()
            ));
        }
    }

    // Weighted: the trace is n! times the step probability of the identity,
    // sum over j of w(j) / (N_w(n) j).
    for alpha in [1.0, -1.0] {
        let w = WeightFunction::from_alpha(alpha);
        for n in 2..=6usize {
            let trace = full_spectrum(n, &w).unwrap().trace();
            let mut total = ratio(0, 1);
            for j in 1..=n {
                total += w.exact_weight(j).unwrap();
            }
            let mut identity_mass = ratio(0, 1);
            for j in 1..=n {
                identity_mass += w.exact_weight(j).unwrap() / (&total * ratio(j as i64, 1));
            }
            let expected = ratio(factorial(n) as i64, 1) * identity_mass;
            if trace != expected {
                failures.push(format!(
                    "alpha={alpha} n={n}: trace {} != {}",
                    trace.render(),
                    expected.render()
                ));
            }
        }
    }

    report(3, "trace identity", &failures);
}

#[test]
fn criterion_04_l2_sandwich() {
    let w = WeightFunction::Unbiased;
    let four = ratio(4, 1);
    let mut failures = Vec::new();

    // Exact decks: every inequality holds literally in the rationals.
    for n in 2..=6usize {
        let profile = tv_profile::<BigRational>(n, &w, 40, None).unwrap();
        let summary = full_spectrum(n, &w).unwrap();
        for t in 1..=40u32 {
            let tv = &profile.rows[t as usize].1;
            let l2 = l2_bound_from(&summary, t);
            let relaxed = l2_bound_relaxed_exact(n, t).unwrap();
            if tv * tv * &four > l2 {
                failures.push(format!("n={n} t={t}: 4 tv^2 exceeds l2"));
            }
            if l2 > relaxed {
                failures.push(format!("n={n} t={t}: l2 exceeds the relaxed bound"));
            }
        }
    }

    // Float TV against the exact bounds, up to convolution roundoff.
    for n in 7..=10usize {
        let profile;
        let rows = if n == 10 {
            &PROFILE_TEN.rows
        } else {
            profile = tv_profile::<f64>(n, &w, 40, None).unwrap();
            &profile.rows
        };
        let summary = full_spectrum(n, &w).unwrap();
        for t in 1..=40u32 {
            let tv = rows[t as usize].1;
            let l2 = l2_bound_from(&summary, t);
            let relaxed = l2_bound_relaxed_exact(n, t).unwrap();
            if 4.0 * tv * tv > Scalar::to_f64(&l2) + 1e-9 {
                failures.push(format!("n={n} t={t}: 4 tv^2 exceeds l2"));
            }
            if l2 > relaxed {
                failures.push(format!("n={n} t={t}: l2 exceeds the relaxed bound"));
            }
        }
    }

    report(4, "l2 sandwich", &failures);
}

#[test]
fn criterion_05_unbiased_ordering_predicates() {
    let mut failures = Vec::new();
    for n in 2..=9usize {
        let rep = bound_predicates(n, 0.0).unwrap();
        for bad in rep.outcomes.iter().filter(|o| !o.pass) {
            failures.push(format!(
                "n={n} {}: {}",
                bad.name,
                bad.counterexample.as_deref().unwrap_or("no witness")
            ));
        }
    }
    report(5, "unbiased ordering predicates", &failures);
}

#[test]
fn criterion_06_weighted_ordering_predicates() {
    let mut failures = Vec::new();
    for alpha in [-2.0, -1.0, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        for n in 2..=9usize {
            let rep = bound_predicates(n, alpha).unwrap();
            for bad in rep.outcomes.iter().filter(|o| !o.pass) {
                failures.push(format!(
                    "alpha={alpha} n={n} {}: {}",
                    bad.name,
                    bad.counterexample.as_deref().unwrap_or("no witness")
                ));
            }
        }
    }
    report(6, "weighted ordering predicates", &failures);
}

#[test]
fn criterion_07_lifting_end_to_end() {
    let mut failures = Vec::new();

    // Every shape of every deck size up to five lifts to a full exact
    // eigenbasis; lift_spectrum verifies each vector against the walk
    // operator and the family rank against the dimension.
    for n in 1..=5usize {
        for shape in partitions(n) {
            let family = match lift_spectrum(&shape) {
                Ok(f) => f,
                Err(e) => {
                    failures.push(format!("shape {}: {e}", shape.render()));
                    continue;
                }
            };
            if family.len() != shape.dimension() as usize {
                failures.push(format!(
                    "shape {}: {} vectors, dimension {}",
                    shape.render(),
                    family.len(),
                    shape.dimension()
                ));
            }
            let mut got: Vec<BigRational> =
                family.iter().map(|l| l.walk_eigenvalue.clone()).collect();
            got.sort();
            let mut expected: Vec<BigRational> = enumerate_syt(&shape)
                .unwrap()
                .iter()
                .map(eig_unbiased)
                .collect();
            expected.sort();
            if got != expected {
                failures.push(format!(
                    "shape {}: lifted eigenvalues differ from the tableau formula",
                    shape.render()
                ));
            }
        }
    }

    // The operator recursion has zero residual over every word of length
    // up to four, for every appended letter.
    for n in 1..=4usize {
        for a in 1..=(n + 1) as u8 {
            let residual = master_identity_residual(n, a).unwrap();
            if !Scalar::is_zero(&residual) {
                failures.push(format!(
                    "recursion residual {} at n={n} a={a}",
                    residual.render()
                ));
            }
        }
    }

    // Switching a letter downward (a < b) annihilates every spanning vector.
    for n in 1..=4usize {
        for shape in partitions(n) {
            for v in specht_basis(&shape).unwrap() {
                for b in 2..=n as u8 {
                    for a in 1..b {
                        if !theta(b, a, &v).is_zero() {
                            failures.push(format!(
                                "switch {b}->{a} survives on shape {}",
                                shape.render()
                            ));
                        }
                    }
                }
            }
        }
    }

    report(7, "eigenvector lifting end-to-end", &failures);
}

#[test]
fn criterion_08_lower_bound_statistics() {
    let mut failures = Vec::new();

    let n = 10_000;
    let trials = 10_000u64;
    let process = CouponProcess::new(n, CouponKind::Unbiased).unwrap();
    let m = process.divisor();

    // The simulated chain against its exact expectation.
    let times = process.hitting_times(trials, 2024);
    let (mean, se) = sample_mean_stderr(&times);
    let stepped = process.expected_hitting_stepped();
    if (mean - stepped).abs() > 3.0 * se {
        failures.push(format!(
            "chain mean {mean} vs exact {stepped} ({:.1} se)",
            (mean - stepped).abs() / se
        ));
    }

    // The dominated per-state form against its expectation sum((m-1)/(m p_i)):
    // the chain's mean exceeds it only by the two-step skip correction, which
    // is why the two are sampled separately.
    let dominated_times = process.dominated_hitting_times(trials, 2025);
    let (dom_mean, dom_se) = sample_mean_stderr(&dominated_times);
    let dominated = process.expected_hitting();
    if (dom_mean - dominated).abs() > 3.0 * dom_se {
        failures.push(format!(
            "dominated mean {dom_mean} vs exact {dominated} ({:.1} se)",
            (dom_mean - dominated).abs() / dom_se
        ));
    }
    let gap = stepped - dominated;
    let gap_bound = 1.0 / (m * process.up_probability(0)) + dominated / (m * (m - 1.0));
    if !(0.0..=gap_bound + 1e-9).contains(&gap) {
        failures.push(format!("expectation gap {gap} outside [0, {gap_bound}]"));
    }

    // Early hits stay inside the Chebyshev budget at c = 4.
    let window = lower_window_time(n, 4.0);
    let early = times.iter().filter(|&&t| (t as f64) < window).count() as f64
        / times.len() as f64;
    let budget = std::f64::consts::PI.powi(2) / 24.0 + 0.02;
    if early > budget {
        failures.push(format!("early fraction {early} exceeds {budget}"));
    }

    // Small-deck fixed-point probabilities against the exact convolution.
    let w = WeightFunction::Unbiased;
    for t in 1..=10u32 {
        let exact = Scalar::to_f64(&exact_b_probability(6, &w, t).unwrap());
        let stat = fixed_point_estimate(6, &w, t, 40_000, 41).unwrap();
        if (stat.estimate - exact).abs() > 3.0 * stat.stderr {
            failures.push(format!(
                "t={t}: estimate {} vs exact {exact} ({:.1} sigma)",
                stat.estimate,
                (stat.estimate - exact).abs() / stat.stderr
            ));
        }
    }

    report(8, "lower-bound statistics", &failures);
}

#[test]
fn criterion_09_cutoff_shape_at_ten() {
    let mut failures = Vec::new();
    let rows = &PROFILE_TEN.rows;

    // Monotone decay, up to convolution roundoff.
    for pair in rows.windows(2) {
        if pair[1].1 > pair[0].1 + 1e-12 {
            failures.push(format!(
                "tv rises from {} to {} at t={}",
                pair[0].1, pair[1].1, pair[1].0
            ));
        }
    }

    // Past n log n + 3n the profile sits under the relaxed eigenvalue bound.
    let n = 10f64;
    let t_hi = (n * n.ln() + 3.0 * n).ceil() as u32;
    let tv_hi = rows[t_hi as usize].1;
    let upper = tv_upper_from_relaxed(10, t_hi).unwrap();
    if tv_hi >= upper {
        failures.push(format!("tv {tv_hi} at t={t_hi} is not below {upper}"));
    }

    // Inside the early window the profile still beats the fixed-point
    // witness (minus Monte Carlo noise).
    let t_lo = (lower_window_time(10, 4.0).ceil() as i64).max(1) as u32;
    let stat = fixed_point_estimate(10, &WeightFunction::Unbiased, t_lo, 40_000, 7).unwrap();
    let witness = stat.lower_bound_estimate() - 3.0 * stat.stderr;
    let tv_lo = rows[t_lo as usize].1;
    if tv_lo <= witness {
        failures.push(format!("tv {tv_lo} at t={t_lo} does not exceed {witness}"));
    }

    report(9, "cutoff shape on ten cards", &failures);
}

#[test]
fn criterion_10_linear_weight_degeneration() {
    let w = WeightFunction::Power(1.0);
    let check = |failures: &mut Vec<String>| {
        for n in 2..=8usize {
            let g = build_generator::<BigRational>(n, &w).unwrap();
            let expected = ratio(2, (n * (n + 1)) as i64);
            for i in 1..=n {
                for j in (i + 1)..=n {
                    if g.transposition_mass(i, j) != Some(&expected) {
                        failures.push(format!("n={n}: mass of ({i} {j}) is not uniform"));
                    }
                }
            }
            if *g.identity_mass() != ratio(2, (n + 1) as i64) {
                failures.push(format!("n={n}: identity mass off"));
            }
            let cutoff = cutoff_time(n, 1.0).unwrap();
            if cutoff != (n as f64 + 1.0) / 2.0 {
                failures.push(format!("n={n}: cutoff scale {cutoff} != (n+1)/2"));
            }
        }
    };

    let mut warmup = Vec::new();
    check(&mut warmup);
    let start = Instant::now();
    let mut failures = Vec::new();
    check(&mut failures);
    let elapsed = start.elapsed();
    failures.extend(warmup);
    if elapsed.as_micros() >= 1_000 {
        failures.push(format!("runtime {elapsed:?} is not under 1 ms"));
    }
    report(10, "linear-weight degeneration", &failures);
}
