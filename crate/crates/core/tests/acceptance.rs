//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::fidelity_from_state;
use seesaw_core::optimizer::leung_optimal_recovery;
use seesaw_core::report::{render_csv, render_svg};
use seesaw_core::{
    amplitude_damping, channel_fidelity, compose, fidelity_operator_recovery, leung_encoder,
    oracle_optimize, random_channel, seesaw, tensor_power, Channel, MaxEntangledVector, Mode,
    SolveOptions, SweepConfig, SweepRecord,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn nocoding_formula(g: f64) -> f64 {
    (1.0 + (1.0 - g).sqrt()).powi(2) / 4.0
}

fn lookup(records: &[SweepRecord], mode: Mode, gamma: f64) -> f64 {
    records
        .iter()
        .find(|r| r.mode == mode && (r.gamma - gamma).abs() < 1e-12)
        .unwrap_or_else(|| panic!("no {mode} record at gamma {gamma}"))
        .fidelity
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn nocoding_curve() -> Outcome {
    let start = Instant::now();
    let config = SweepConfig {
        modes: vec![Mode::NoCoding],
        ..Default::default()
    };
    let records = match seesaw_core::run_sweep(&config) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    for i in 0..=20 {
        let g = i as f64 / 20.0;
        let reported = lookup(&records, Mode::NoCoding, g);
        let oracle = fidelity_from_state(&amplitude_damping(g).unwrap());
        worst = worst
            .max((reported - nocoding_formula(g)).abs())
            .max((reported - oracle).abs());
    }
    outcome(
        records.len() == 21 && worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max deviation {worst:.2e} over 21 points, {elapsed:.2?}"),
    )
}

fn strict_improvement(records: &[SweepRecord], outer_tol: f64) -> Outcome {
    let mut pass = true;
    let mut margins = Vec::new();
    for g in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let margin = lookup(records, Mode::Seesaw, g) - lookup(records, Mode::LeungOptRec, g);
        pass &= margin > 10.0 * outer_tol;
        margins.push(format!("{g}: {margin:.3e}"));
    }
    outcome(
        pass,
        format!("seesaw - leung_optrec margins {}", margins.join(", ")),
    )
}

fn seeded_dominance(records: &[SweepRecord]) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut at = 0.0;
    for r in records.iter().filter(|r| r.mode == Mode::Seesaw) {
        let floor = lookup(records, Mode::NoCoding, r.gamma).max(lookup(
            records,
            Mode::LeungOptRec,
            r.gamma,
        ));
        let slack = r.fidelity - floor;
        if slack < worst {
            worst = slack;
            at = r.gamma;
        }
    }
    outcome(
        worst >= -1e-9,
        format!("min seesaw - max(baselines) = {worst:.3e} at gamma {at}"),
    )
}

fn scaling(opts: &SolveOptions) -> Outcome {
    let mut leung = Vec::new();
    let mut plain = Vec::new();
    for g in [0.02, 0.04, 0.06, 0.08, 0.1] {
        let noise = amplitude_damping(g).unwrap();
        let f = match leung_optimal_recovery(&noise, opts) {
            Ok(r) => r.fidelity,
            Err(e) => return outcome(false, e.to_string()),
        };
        leung.push((g.ln(), (1.0 - f).ln()));
        plain.push((g.ln(), (1.0 - channel_fidelity(&noise).unwrap()).ln()));
    }
    let sl = least_squares_slope(&leung);
    let sn = least_squares_slope(&plain);
    outcome(
        (1.7..=2.3).contains(&sl) && (0.8..=1.2).contains(&sn),
        format!("leung_optrec slope {sl:.4}, nocoding slope {sn:.4}"),
    )
}

fn oracle_equivalence(opts: &SolveOptions) -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [0.1, 0.2, 0.4] {
        let noise = amplitude_damping(g).unwrap();
        let half = leung_optimal_recovery(&noise, opts).unwrap().fidelity;
        let op = fidelity_operator_recovery(
            &leung_encoder().to_channel(),
            &tensor_power(&noise, 4).unwrap(),
        )
        .unwrap();
        let oracle = oracle_optimize(&op, 2000).unwrap();
        let gap = (half - oracle.fidelity).abs();
        pass &= gap <= 1e-6;
        parts.push(format!("{g}: {gap:.2e} ({} iters)", oracle.iterations));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    outcome(
        pass,
        format!("|half - oracle| {}, {elapsed:.2?}", parts.join(", ")),
    )
}

fn invariant_suites(opts: &SolveOptions) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let mut completeness = 0.0f64;
    let mut monotone_worst = 0.0f64;
    let mut traces = 0;
    for g in [0.1, 0.3, 0.5] {
        let noise = amplitude_damping(g).unwrap();
        let r = seesaw(&noise, 4, opts).unwrap();
        completeness = completeness
            .max(r.encoder.completeness_deviation())
            .max(r.recovery.completeness_deviation());
        for restart in &r.restarts {
            traces += 1;
            for w in restart.fidelity_trace.windows(2) {
                monotone_worst = monotone_worst.max(w[0] - w[1]);
            }
        }
        let l = leung_optimal_recovery(&noise, opts).unwrap();
        completeness = completeness.max(l.channel.completeness_deviation());
    }
    pass &= completeness <= 1e-9 && monotone_worst <= opts.inner_tol;
    notes.push(format!("completeness {completeness:.1e}"));
    notes.push(format!(
        "largest trace drop {monotone_worst:.1e} over {traces} restarts"
    ));

    let mut triple = 0.0f64;
    for seed in 0..200u64 {
        let d = if seed % 2 == 0 { 2 } else { 4 };
        let c: Channel = random_channel(d, d, 1 + seed as usize % 5, 1000 + seed).unwrap();
        let kraus = channel_fidelity(&c).unwrap();
        let state = fidelity_from_state(&c);
        let omega = MaxEntangledVector::new(d).unwrap().to_vec();
        let via_choi = c.to_choi().matrix().quadratic_form(&omega).re / d as f64;
        triple = triple
            .max((kraus - state).abs())
            .max((kraus - via_choi).abs());
    }
    pass &= triple <= 1e-10;
    notes.push(format!("triple equivalence {triple:.1e}"));

    let grid = [0.0, 0.1, 0.35, 0.7, 1.0];
    let mut law = 0.0f64;
    for &g in &grid {
        for &e in &grid {
            let composed = compose(
                &amplitude_damping(g).unwrap(),
                &amplitude_damping(e).unwrap(),
            )
            .unwrap();
            let direct = amplitude_damping(1.0 - (1.0 - g) * (1.0 - e)).unwrap();
            law = law.max(
                composed
                    .to_choi()
                    .matrix()
                    .max_abs_diff(direct.to_choi().matrix()),
            );
        }
    }
    pass &= law <= 1e-12;
    notes.push(format!("composition law {law:.1e}"));

    outcome(pass, notes.join(", "))
}

fn endpoints(records: &[SweepRecord]) -> Outcome {
    let at_zero: Vec<f64> = Mode::ALL.iter().map(|&m| lookup(records, m, 0.0)).collect();
    let seesaw_one = lookup(records, Mode::Seesaw, 1.0);
    outcome(
        at_zero.iter().all(|&f| f == 1.0) && seesaw_one >= 0.25,
        format!("F(0) = {at_zero:?}, seesaw F(1) = {seesaw_one}"),
    )
}

fn regeneration(elapsed: Duration, first: &[SweepRecord], config: &SweepConfig) -> Outcome {
    let csv = render_csv(first);
    let repeat = match seesaw_core::run_sweep(config) {
        Ok(r) => render_csv(&r),
        Err(e) => return outcome(false, e.to_string()),
    };
    let svg = match render_svg(first) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let polylines = match roxmltree::Document::parse(&svg) {
        Ok(doc) => doc
            .descendants()
            .filter(|n| n.has_tag_name("polyline"))
            .count(),
        Err(_) => 0,
    };
    outcome(
        elapsed < Duration::from_secs(15 * 60) && csv == repeat && polylines == 3 && first.len() == 63,
        format!(
            "{} records in {elapsed:.2?}, repeat run byte-identical: {}, SVG polylines: {polylines}",
            first.len(),
            csv == repeat
        ),
    )
}

fn main() -> ExitCode {
    let opts = SolveOptions::default();
    let config = SweepConfig {
        record_timing: false,
        ..Default::default()
    };

    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "no-coding curve", nocoding_curve()));

    let start = Instant::now();
    let records = seesaw_core::run_sweep(&config).expect("default sweep runs");
    let sweep_time = start.elapsed();

    results.push((
        2,
        "strict improvement",
        strict_improvement(&records, opts.outer_tol),
    ));
    results.push((3, "seeded dominance", seeded_dominance(&records)));
    results.push((4, "error-correction scaling", scaling(&opts)));
    results.push((5, "oracle equivalence", oracle_equivalence(&opts)));
    results.push((6, "invariant suites", invariant_suites(&opts)));
    results.push((7, "endpoint values", endpoints(&records)));
    results.push((
        8,
        "full regeneration",
        regeneration(sweep_time, &records, &config),
    ));

    let mut failed = 0;
    for (n, name, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{tag} [{n}] {name}: {}", o.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
