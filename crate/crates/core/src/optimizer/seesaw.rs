use crate::channel::{channel_fidelity, tensor_power, Channel};
use crate::codes::{
    gaussian_matrix, leung_encoder, polar_isometry, random_channel_from, random_isometry_from,
    seeded_rng, trivial_embedding, Isometry, Rng,
};
use crate::error::{Error, Result};
use crate::par;
use crate::tensor::CMatrix;

use super::fidelity_op::{fidelity_operator_encoding, fidelity_operator_recovery};
use super::half::{optimize_encoding_isometric, optimize_half, HalfResult};
use super::SolveOptions;

/// Restarts within this fidelity of each other count as tied.
const TIE_TOL: f64 = 1e-12;

/// Where a restart's initial encoder comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedKind {
    Leung,
    Trivial,
    Random,
    WarmStart,
}

#[derive(Clone, Debug)]
pub struct RestartSummary {
    pub index: usize,
    pub kind: SeedKind,
    pub seed: u64,
    pub fidelity: f64,
    /// One entry per accepted half-step, starting with the first recovery.
    pub fidelity_trace: Vec<f64>,
    pub outer_rounds: usize,
    pub inner_iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct SeesawResult {
    pub encoder: Channel,
    pub recovery: Channel,
    pub fidelity: f64,
    /// Trace of the winning restart.
    pub fidelity_trace: Vec<f64>,
    pub restarts_used: usize,
    pub converged: bool,
    pub best_restart: usize,
    pub best_restart_seed: u64,
    pub outer_rounds: usize,
    /// Power iterations summed over every restart.
    pub inner_iterations_total: usize,
    pub restarts: Vec<RestartSummary>,
}

/// Encoder/recovery pair used to seed an extra restart, typically the
/// optimum at a neighbouring noise parameter.
#[derive(Clone, Debug)]
pub struct WarmStart {
    pub encoder: Channel,
    pub recovery: Channel,
}

impl From<&SeesawResult> for WarmStart {
    fn from(r: &SeesawResult) -> Self {
        WarmStart {
            encoder: r.encoder.clone(),
            recovery: r.recovery.clone(),
        }
    }
}

fn initial_recovery(
    rng: &mut Rng,
    d_code: usize,
    d_logical: usize,
    opts: &SolveOptions,
) -> Result<Channel> {
    random_channel_from(rng, d_code, d_logical, opts.kraus_rank_recovery)
}

/// Optimal recovery for a fixed encoder, started from the random recovery
/// drawn first from the stream `seed`.
pub fn optimal_recovery(
    encoder: &Channel,
    noise: &Channel,
    opts: &SolveOptions,
    seed: u64,
) -> Result<HalfResult> {
    let x = fidelity_operator_recovery(encoder, noise)?;
    let init = initial_recovery(&mut seeded_rng(seed), noise.d_out(), encoder.d_in(), opts)?;
    optimize_half(&x, &init, opts)
}

/// Leung code on four copies of `noise_single` with optimized recovery. This
/// is bit-for-bit the first half-step of the seesaw's Leung restart.
pub fn leung_optimal_recovery(noise_single: &Channel, opts: &SolveOptions) -> Result<HalfResult> {
    check_qubit(noise_single)?;
    opts.validate()?;
    let noise = tensor_power(noise_single, 4)?;
    if is_noiseless(noise_single)? {
        let v = leung_encoder();
        return Ok(HalfResult {
            channel: v.inverse_channel(),
            fidelity: 1.0,
            initial_fidelity: 1.0,
            iterations: 0,
            converged: true,
        });
    }
    optimal_recovery(&leung_encoder().to_channel(), &noise, opts, opts.seed)
}

fn check_qubit(noise: &Channel) -> Result<()> {
    if noise.d_in() != 2 || noise.d_out() != 2 {
        return Err(Error::InvalidDims(format!(
            "seesaw expects a qubit channel, got {} -> {}",
            noise.d_in(),
            noise.d_out()
        )));
    }
    Ok(())
}

fn is_noiseless(noise_single: &Channel) -> Result<bool> {
    Ok(channel_fidelity(noise_single)? >= 1.0)
}

/// Starting encoder with `rank` Kraus operators: the isometry plus a small
/// random admixture, renormalized.
fn widen_encoder(rng: &mut Rng, v: &Isometry, rank: usize) -> Result<Channel> {
    if rank == 1 {
        return Ok(v.to_channel());
    }
    let (d_out, d_in) = (v.d_out(), v.d_in());
    let noise = gaussian_matrix(rng, rank * d_out, d_in).scale_real(1e-2);
    let mut stacked = CMatrix::zeros(rank * d_out, d_in);
    for i in 0..rank * d_out {
        for j in 0..d_in {
            let base = if i < d_out {
                v.matrix()[(i, j)]
            } else {
                Default::default()
            };
            stacked[(i, j)] = base + noise[(i, j)];
        }
    }
    Channel::from_stacked(&polar_isometry(&stacked)?, d_out)
}

struct RestartPlan {
    index: usize,
    kind: SeedKind,
    seed: u64,
}

fn plan_restarts(n: usize, opts: &SolveOptions, warm: bool) -> Vec<RestartPlan> {
    let mut kinds = Vec::new();
    if n == 4 {
        kinds.push(SeedKind::Leung);
    }
    kinds.push(SeedKind::Trivial);
    while kinds.len() < opts.restarts {
        kinds.push(SeedKind::Random);
    }
    if warm {
        kinds.push(SeedKind::WarmStart);
    }
    kinds
        .into_iter()
        .enumerate()
        .map(|(index, kind)| RestartPlan {
            index,
            kind,
            seed: opts.seed.wrapping_add(index as u64),
        })
        .collect()
}

struct RestartOutcome {
    summary: RestartSummary,
    encoder: Channel,
    recovery: Channel,
}

fn run_restart(
    plan: &RestartPlan,
    noise: &Channel,
    n: usize,
    opts: &SolveOptions,
    warm: Option<&WarmStart>,
) -> Result<RestartOutcome> {
    let d_code = noise.d_in();
    let mut rng = seeded_rng(plan.seed);
    let (mut encoder, mut recovery) = match plan.kind {
        SeedKind::WarmStart => {
            let w = warm.expect("warm-start restart planned without a warm start");
            (w.encoder.clone(), w.recovery.clone())
        }
        kind => {
            let v = match kind {
                SeedKind::Leung => leung_encoder(),
                SeedKind::Trivial => trivial_embedding(n)?,
                _ => random_isometry_from(&mut rng, 2, d_code)?,
            };
            let rec = initial_recovery(&mut rng, d_code, 2, opts)?;
            let rank = if opts.isometric_encoding {
                1
            } else {
                opts.kraus_rank_encoding
            };
            (widen_encoder(&mut rng, &v, rank)?, rec)
        }
    };

    let mut trace = Vec::new();
    let mut inner = 0;
    let rec = optimize_half(
        &fidelity_operator_recovery(&encoder, noise)?,
        &recovery,
        opts,
    )?;
    inner += rec.iterations;
    recovery = rec.channel;
    let mut fidelity = rec.fidelity;
    trace.push(fidelity);

    let mut rounds = 0;
    let mut converged = false;
    while rounds < opts.max_outer_rounds {
        rounds += 1;
        let round_start = fidelity;

        let y = fidelity_operator_encoding(&recovery, noise)?;
        if opts.isometric_encoding && encoder.kraus_count() == 1 {
            let v = Isometry::new(encoder.kraus()[0].clone())?;
            let enc = optimize_encoding_isometric(&y, &v, opts)?;
            inner += enc.iterations;
            encoder = enc.isometry.to_channel();
            fidelity = enc.fidelity;
        } else {
            let enc = optimize_half(&y, &encoder, opts)?;
            inner += enc.iterations;
            encoder = enc.channel;
            fidelity = enc.fidelity;
        }
        trace.push(fidelity);

        let rec = optimize_half(
            &fidelity_operator_recovery(&encoder, noise)?,
            &recovery,
            opts,
        )?;
        inner += rec.iterations;
        recovery = rec.channel;
        fidelity = rec.fidelity;
        trace.push(fidelity);

        if fidelity - round_start < opts.outer_tol {
            converged = true;
            break;
        }
    }

    Ok(RestartOutcome {
        summary: RestartSummary {
            index: plan.index,
            kind: plan.kind,
            seed: plan.seed,
            fidelity,
            fidelity_trace: trace,
            outer_rounds: rounds,
            inner_iterations: inner,
            converged,
        },
        encoder,
        recovery,
    })
}

/// Alternating optimization of encoder and recovery for `n` copies of a
/// qubit channel.
pub fn seesaw(noise_single: &Channel, n: usize, opts: &SolveOptions) -> Result<SeesawResult> {
    seesaw_warm(noise_single, n, opts, None)
}

/// [`seesaw`] with an optional extra restart seeded from `warm`.
///
/// Restart order is: Leung code (only for `n = 4`), trivial embedding,
/// random isometries up to `opts.restarts` in total, then the warm start.
/// Ties between restarts go to the lowest index.
pub fn seesaw_warm(
    noise_single: &Channel,
    n: usize,
    opts: &SolveOptions,
    warm: Option<&WarmStart>,
) -> Result<SeesawResult> {
    check_qubit(noise_single)?;
    opts.validate()?;
    if n == 0 {
        return Err(Error::param("n", n, "need at least one copy"));
    }

    if is_noiseless(noise_single)? {
        let v = trivial_embedding(n)?;
        return Ok(SeesawResult {
            encoder: v.to_channel(),
            recovery: v.inverse_channel(),
            fidelity: 1.0,
            fidelity_trace: vec![1.0],
            restarts_used: 0,
            converged: true,
            best_restart: 0,
            best_restart_seed: opts.seed,
            outer_rounds: 0,
            inner_iterations_total: 0,
            restarts: Vec::new(),
        });
    }

    let noise = tensor_power(noise_single, n)?;
    let warm =
        warm.filter(|w| w.encoder.d_out() == noise.d_in() && w.recovery.d_in() == noise.d_out());
    let plans = plan_restarts(n, opts, warm.is_some());
    let outcomes = par::map(opts.execution, &plans, |p| {
        run_restart(p, &noise, n, opts, warm)
    });
    let outcomes: Vec<RestartOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if o.summary.fidelity > outcomes[best].summary.fidelity + TIE_TOL {
            best = i;
        }
    }
    let inner_iterations_total = outcomes.iter().map(|o| o.summary.inner_iterations).sum();
    let restarts: Vec<RestartSummary> = outcomes.iter().map(|o| o.summary.clone()).collect();
    let winner = outcomes
        .into_iter()
        .nth(best)
        .expect("at least one restart");
    Ok(SeesawResult {
        encoder: winner.encoder,
        recovery: winner.recovery,
        fidelity: winner.summary.fidelity,
        fidelity_trace: winner.summary.fidelity_trace,
        restarts_used: restarts.len(),
        converged: winner.summary.converged,
        best_restart: best,
        best_restart_seed: winner.summary.seed,
        outer_rounds: winner.summary.outer_rounds,
        inner_iterations_total,
        restarts,
    })
}
