//! Command implementations. Each builds a [`Report`], runs any requested
//! cross-checks, and only delivers output when every check passes; a failed
//! check aborts with a verification error so scripts can trust exit codes.

use num::BigRational;

use ost_core::lifting::{lift_spectrum, master_identity_residual};
use ost_core::lowerbound::{
    fixed_point_estimate, sample_mean_stderr, CouponKind, CouponProcess,
};
use ost_core::scalar::ratio;
use ost_core::shuffle::WeightFunction;
use ost_core::spectrum::predicates::bound_predicates;
use ost_core::spectrum::{
    full_spectrum, l2_bound_from, l2_bound_relaxed, l2_bound_relaxed_exact, matrix_spectrum,
    tv_profile,
};
use ost_core::tableaux::{partitions, Partition};
use ost_core::{Error, Scalar};

use crate::report::Report;
use crate::{
    BoundsArgs, CliError, CouponArgs, FixedPointArgs, LiftArgs, Mode, SpectrumArgs, TimeArgs,
    WeightArgs,
};

fn weight_from(args: &WeightArgs) -> Result<WeightFunction, CliError> {
    match (&args.alpha, &args.weights) {
        (Some(a), None) => {
            if !a.is_finite() {
                return Err(CliError::Config(format!(
                    "the bias exponent must be finite, got {a}"
                )));
            }
            Ok(WeightFunction::from_alpha(*a))
        }
        (None, Some(path)) => Ok(WeightFunction::table_from_path(path)?),
        (None, None) => Ok(WeightFunction::Unbiased),
        // clap marks the flags as conflicting.
        (Some(_), Some(_)) => unreachable!(),
    }
}

fn time_grid(args: &TimeArgs) -> Result<Vec<u32>, CliError> {
    match (&args.t, &args.t_range) {
        (Some(t), None) => Ok(vec![*t]),
        (None, Some(s)) => {
            let (a, b) = s
                .split_once("..")
                .ok_or_else(|| CliError::Config(format!("step range must look like A..B, got {s:?}")))?;
            let a: u32 = a
                .trim()
                .parse()
                .map_err(|e| CliError::Config(format!("step range start: {e}")))?;
            let b: u32 = b
                .trim()
                .parse()
                .map_err(|e| CliError::Config(format!("step range end: {e}")))?;
            if b < a {
                return Err(CliError::Config(format!(
                    "step range end {b} is below start {a}"
                )));
            }
            Ok((a..=b).collect())
        }
        (None, None) => Err(CliError::Config(
            "one of --t or --t-range is required".to_string(),
        )),
        (Some(_), Some(_)) => unreachable!(),
    }
}

fn time_echo(ts: &[u32]) -> String {
    if ts.len() == 1 {
        ts[0].to_string()
    } else {
        format!("{}..{}", ts[0], ts[ts.len() - 1])
    }
}

/// Exact-profile degree override, so hosts with memory to spare can push the
/// convolution a little further than the built-in caps.
fn env_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("OST_MAX_EXACT_N") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|e| CliError::Config(format!("OST_MAX_EXACT_N: {e}"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Config(format!("OST_MAX_EXACT_N: {e}"))),
    }
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let w = weight_from(&args.weight)?;
    let summary = full_spectrum(args.n, &w)?;

    let mut report = Report::new("spectrum");
    report.config("n", args.n);
    report.config("weight", w.describe());
    report.note("trace", summary.trace().render());
    report.note("eigenvalues", summary.total_multiplicity());

    let rows = summary
        .records()
        .iter()
        .map(|r| {
            vec![
                r.shape.render(),
                r.tableau_index.to_string(),
                r.value.render(),
                r.multiplicity.to_string(),
            ]
        })
        .collect();
    report.section(
        "eigenvalues",
        vec!["shape", "tableau_index", "eigenvalue", "multiplicity"],
        rows,
    );

    if args.verify_matrix {
        let oracle = matrix_spectrum(args.n, &w)?;
        let mine = summary.expand_f64();
        if oracle.len() != mine.len() {
            return Err(CliError::Verify(format!(
                "matrix gives {} eigenvalues, tableaux give {}",
                oracle.len(),
                mine.len()
            )));
        }
        let deviation = oracle
            .iter()
            .zip(&mine)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        report.note("matrix_deviation", format!("{deviation:e}"));
        if deviation > 1e-9 {
            return Err(CliError::Verify(format!(
                "tableau spectrum deviates from the dense matrix by {deviation:e}"
            )));
        }
    }

    report.deliver(args.out.format, &args.out.out)
}

enum TvColumn {
    Rational(Vec<BigRational>),
    Float(Vec<f64>),
    Skipped,
}

enum RelaxedColumn {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
    Skipped,
}

pub fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let w = weight_from(&args.weight)?;
    let ts = time_grid(&args.time)?;
    let t_max = *ts.last().unwrap();

    let mut report = Report::new("bounds");
    report.config("n", args.n);
    report.config("weight", w.describe());
    report.config("t", time_echo(&ts));
    report.config(
        "mode",
        match args.mode {
            Mode::Rational => "rational",
            Mode::Float => "float",
        },
    );

    // Exact TV column: full convolution over S_n, so tightly degree-capped.
    let cap_override = env_cap()?;
    let tv = match args.mode {
        Mode::Rational => match tv_profile::<BigRational>(args.n, &w, t_max, cap_override) {
            Ok(p) => TvColumn::Rational(p.rows.into_iter().map(|(_, v)| v).collect()),
            Err(Error::CapExceeded { cap, .. }) => {
                report.note(
                    "tv",
                    format!("skipped: exact profile capped at n={cap} (OST_MAX_EXACT_N overrides)"),
                );
                TvColumn::Skipped
            }
            Err(e) => return Err(e.into()),
        },
        Mode::Float => match tv_profile::<f64>(args.n, &w, t_max, cap_override) {
            Ok(p) => TvColumn::Float(p.rows.into_iter().map(|(_, v)| v).collect()),
            Err(Error::CapExceeded { cap, .. }) => {
                report.note(
                    "tv",
                    format!("skipped: float profile capped at n={cap} (OST_MAX_EXACT_N overrides)"),
                );
                TvColumn::Skipped
            }
            Err(e) => return Err(e.into()),
        },
    };

    // Eigenvalue bound column, exact whenever tableaux are enumerable.
    let l2: Option<Vec<BigRational>> = match full_spectrum(args.n, &w) {
        Ok(s) => Some(ts.iter().map(|&t| l2_bound_from(&s, t)).collect()),
        Err(Error::CapExceeded { cap, .. }) => {
            report.note("l2", format!("skipped: tableau enumeration capped at n={cap}"));
            None
        }
        Err(e) => return Err(e.into()),
    };

    // Relaxed column: unbiased only; exact at small n, log-space floats after.
    let relaxed = if matches!(w, WeightFunction::Unbiased) {
        match l2_bound_relaxed_exact(args.n, 0) {
            Ok(_) => RelaxedColumn::Exact(
                ts.iter()
                    .map(|&t| l2_bound_relaxed_exact(args.n, t))
                    .collect::<ost_core::Result<_>>()?,
            ),
            Err(Error::CapExceeded { .. }) => RelaxedColumn::Float(
                ts.iter()
                    .map(|&t| l2_bound_relaxed(args.n, t))
                    .collect::<ost_core::Result<_>>()?,
            ),
            Err(e) => return Err(e.into()),
        }
    } else {
        report.note("relaxed", "skipped: defined for the unbiased walk only");
        RelaxedColumn::Skipped
    };

    if matches!(tv, TvColumn::Skipped)
        && l2.is_none()
        && matches!(relaxed, RelaxedColumn::Skipped)
        && !args.predicates
    {
        return Err(CliError::Cap(format!(
            "no bound is computable at n={}: exact TV caps at 6 (rational) or 10 (float), \
             the eigenvalue bound at 14, and the relaxed bound needs the unbiased walk",
            args.n
        )));
    }

    let mut rows = Vec::with_capacity(ts.len());
    for (k, &t) in ts.iter().enumerate() {
        let tv_cell = match &tv {
            TvColumn::Rational(v) => v[t as usize].render(),
            TvColumn::Float(v) => v[t as usize].to_string(),
            TvColumn::Skipped => String::new(),
        };
        let l2_cell = l2.as_ref().map(|v| v[k].render()).unwrap_or_default();
        let relaxed_cell = match &relaxed {
            RelaxedColumn::Exact(v) => v[k].render(),
            RelaxedColumn::Float(v) => v[k].to_string(),
            RelaxedColumn::Skipped => String::new(),
        };
        rows.push(vec![t.to_string(), tv_cell, l2_cell, relaxed_cell]);
    }
    report.section("bounds", vec!["t", "tv", "l2", "relaxed"], rows);

    // Sandwich check on whichever adjacent columns exist: 4 tv^2 <= l2 and
    // l2 <= relaxed. Exact columns compare exactly.
    let four = ratio(4, 1);
    let mut checked = 0u64;
    for (k, &t) in ts.iter().enumerate() {
        if let Some(l2v) = &l2 {
            match &tv {
                TvColumn::Rational(v) => {
                    let sq = &v[t as usize] * &v[t as usize] * &four;
                    if sq > l2v[k] {
                        return Err(CliError::Verify(format!(
                            "4 tv^2 = {} exceeds l2 = {} at t={t}",
                            sq.render(),
                            l2v[k].render()
                        )));
                    }
                    checked += 1;
                }
                TvColumn::Float(v) => {
                    let sq = 4.0 * v[t as usize] * v[t as usize];
                    if sq > Scalar::to_f64(&l2v[k]) + 1e-9 {
                        return Err(CliError::Verify(format!(
                            "4 tv^2 = {sq} exceeds l2 = {} at t={t}",
                            Scalar::to_f64(&l2v[k])
                        )));
                    }
                    checked += 1;
                }
                TvColumn::Skipped => {}
            }
            match &relaxed {
                RelaxedColumn::Exact(r) => {
                    if l2v[k] > r[k] {
                        return Err(CliError::Verify(format!(
                            "l2 = {} exceeds the relaxed bound {} at t={t}",
                            l2v[k].render(),
                            r[k].render()
                        )));
                    }
                    checked += 1;
                }
                RelaxedColumn::Float(r) => {
                    let l2f = Scalar::to_f64(&l2v[k]);
                    if l2f > r[k] * (1.0 + 1e-12) + 1e-12 {
                        return Err(CliError::Verify(format!(
                            "l2 = {l2f} exceeds the relaxed bound {} at t={t}",
                            r[k]
                        )));
                    }
                    checked += 1;
                }
                RelaxedColumn::Skipped => {}
            }
        }
    }
    report.note("sandwich_checked", checked);

    if args.predicates {
        let alpha = w.alpha().ok_or_else(|| {
            CliError::Config(
                "--predicates needs an exponent weight (--alpha); table weights have none"
                    .to_string(),
            )
        })?;
        let pred = bound_predicates(args.n, alpha)?;
        let rows = pred
            .outcomes
            .iter()
            .map(|o| {
                vec![
                    o.name.to_string(),
                    o.pass.to_string(),
                    o.cases.to_string(),
                    o.counterexample.clone().unwrap_or_default(),
                ]
            })
            .collect();
        report.section(
            "predicates",
            vec!["name", "pass", "cases", "counterexample"],
            rows,
        );
        report.note("predicates_pass", pred.all_pass());
        report.note("predicate_cases", pred.total_cases());
        if let Some(bad) = pred.outcomes.iter().find(|o| !o.pass) {
            return Err(CliError::Verify(format!(
                "predicate {} failed: {}",
                bad.name,
                bad.counterexample.as_deref().unwrap_or("no witness")
            )));
        }
    }

    report.deliver(args.out.format, &args.out.out)
}

pub fn fixed_points(args: &FixedPointArgs) -> Result<(), CliError> {
    let w = weight_from(&args.weight)?;
    let ts = time_grid(&args.time)?;

    let mut report = Report::new("simulate fixed-points");
    report.config("n", args.n);
    report.config("weight", w.describe());
    report.config("t", time_echo(&ts));
    report.config("trials", args.trials);
    report.config("seed", args.seed);

    let mut rows = Vec::with_capacity(ts.len());
    let mut segment = None;
    for &t in &ts {
        let stat = fixed_point_estimate(args.n, &w, t, args.trials, args.seed)?;
        segment = Some((stat.segment, stat.divisor));
        rows.push(vec![
            t.to_string(),
            stat.estimate.to_string(),
            stat.stderr.to_string(),
            stat.lower_bound_estimate().to_string(),
        ]);
    }
    if let Some(((lo, hi), divisor)) = segment {
        report.note("segment", format!("{lo}..{hi}"));
        report.note("stationary_ceiling", 1.0 / divisor);
    }
    report.section(
        "fixed_points",
        vec!["t", "estimate", "stderr", "lower_bound"],
        rows,
    );

    report.deliver(args.out.format, &args.out.out)
}

pub fn coupon(args: &CouponArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::Config("at least one trial is required".to_string()));
    }
    let process = CouponProcess::new(args.n, CouponKind::from_alpha(args.alpha))?;
    let bound = process.chebyshev_bound(args.c)?;
    let window = process.early_window(args.c);

    let times = process.hitting_times(args.trials, args.seed);
    let (mean, stderr) = sample_mean_stderr(&times);
    let early = times.iter().filter(|&&x| (x as f64) < window).count() as f64
        / times.len() as f64;

    let mut report = Report::new("simulate coupon");
    report.config("n", args.n);
    report.config("alpha", args.alpha);
    report.config("c", args.c);
    report.config("trials", args.trials);
    report.config("seed", args.seed);
    report.note("target", process.target());
    report.note("divisor", process.divisor());
    report.note("expected_hitting", process.expected_hitting());
    report.note("expected_hitting_stepped", process.expected_hitting_stepped());
    report.note("variance_bound", process.variance_bound());
    report.note("early_window", window);
    report.note("chebyshev_bound", bound);
    report.section(
        "hitting",
        vec!["mean", "stderr", "early_fraction"],
        vec![vec![
            mean.to_string(),
            stderr.to_string(),
            early.to_string(),
        ]],
    );

    let stepped = process.expected_hitting_stepped();
    if args.trials >= 2 && (mean - stepped).abs() > 5.0 * stderr + 1e-9 {
        return Err(CliError::Verify(format!(
            "sample mean {mean} sits {:.1} standard errors from the exact expectation {stepped}",
            (mean - stepped).abs() / stderr
        )));
    }
    // Tail-bound check with binomial slack, so small runs cannot trip it on
    // sampling noise alone.
    let p = bound.clamp(0.0, 1.0);
    let slack = 0.02 + 3.0 * (p * (1.0 - p) / args.trials as f64).sqrt();
    if early > bound + slack {
        return Err(CliError::Verify(format!(
            "early-hit fraction {early} exceeds the tail bound {bound} plus slack {slack}"
        )));
    }

    report.deliver(args.out.format, &args.out.out)
}

pub fn lift(args: &LiftArgs) -> Result<(), CliError> {
    let shapes: Vec<Partition> = match &args.shape {
        Some(s) => {
            let p = Partition::parse(s)?;
            if p.n() != args.n {
                return Err(CliError::Config(format!(
                    "shape {} has size {}, expected n={}",
                    p.render(),
                    p.n(),
                    args.n
                )));
            }
            vec![p]
        }
        None => {
            if args.n == 0 {
                return Err(CliError::Config("deck size must be positive".to_string()));
            }
            partitions(args.n)
        }
    };

    let mut report = Report::new("lift");
    report.config("n", args.n);
    report.config(
        "shape",
        args.shape.as_deref().map(str::to_string).unwrap_or_else(|| "all".to_string()),
    );

    let mut rows = Vec::new();
    for shape in &shapes {
        // lift_spectrum re-verifies each vector against the walk operator and
        // the family's rank against the shape dimension.
        for (idx, lifted) in lift_spectrum(shape)?.iter().enumerate() {
            rows.push(vec![
                shape.render(),
                idx.to_string(),
                lifted.q_eigenvalue.render(),
                lifted.walk_eigenvalue.render(),
            ]);
        }
    }
    report.note("vectors", rows.len());
    report.section(
        "eigenvectors",
        vec!["shape", "tableau_index", "q_eigenvalue", "walk_eigenvalue"],
        rows,
    );

    if args.verify_master {
        let mut bad: Option<(usize, BigRational)> = None;
        for a in 1..=(args.n + 1) {
            let r = master_identity_residual(args.n, a as u8)?;
            report.note(format!("master_residual_a{a}"), r.render());
            if !r.is_zero() && bad.is_none() {
                bad = Some((a, r));
            }
        }
        if let Some((a, r)) = bad {
            return Err(CliError::Verify(format!(
                "recursion identity leaves residual {} when appending letter {a}",
                r.render()
            )));
        }
    }

    report.deliver(args.out.format, &args.out.out)
}
