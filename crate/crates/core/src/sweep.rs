//! Damping-parameter sweep over the three correction schemes: no coding, the
//! Leung code with optimized recovery, and the full seesaw.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::channel::{amplitude_damping, channel_fidelity};
use crate::error::{Error, Result};
use crate::optimizer::{leung_optimal_recovery, seesaw_warm, SolveOptions, WarmStart};
use crate::par;

/// Largest number of channel copies accepted by a sweep.
pub const MAX_COPIES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    LeungOptRec,
    NoCoding,
    Seesaw,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::NoCoding, Mode::LeungOptRec, Mode::Seesaw];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::NoCoding => "nocoding",
            Mode::LeungOptRec => "leung_optrec",
            Mode::Seesaw => "seesaw",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "nocoding" => Ok(Mode::NoCoding),
            "leung_optrec" => Ok(Mode::LeungOptRec),
            "seesaw" => Ok(Mode::Seesaw),
            other => Err(Error::param(
                "modes",
                other,
                "expected nocoding, leung_optrec or seesaw",
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub steps: usize,
    pub copies: usize,
    pub modes: Vec<Mode>,
    pub solve: SolveOptions,
    /// When off, `wall_time_ms` is recorded as 0 so that output files are
    /// byte-identical across runs.
    pub record_timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            gamma_min: 0.0,
            gamma_max: 1.0,
            steps: 21,
            copies: 4,
            modes: Mode::ALL.to_vec(),
            solve: SolveOptions::default(),
            record_timing: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, g) in [("gamma_min", self.gamma_min), ("gamma_max", self.gamma_max)] {
            if !(0.0..=1.0).contains(&g) {
                return Err(Error::param(name, g, "must lie in [0, 1]"));
            }
        }
        if self.gamma_min > self.gamma_max {
            return Err(Error::param(
                "gamma_min",
                self.gamma_min,
                "must not exceed gamma_max",
            ));
        }
        if self.steps < 2 {
            return Err(Error::param("steps", self.steps, "must be at least 2"));
        }
        if self.copies == 0 || self.copies > MAX_COPIES {
            return Err(Error::param("copies", self.copies, "must be in 1..=5"));
        }
        if self.modes.is_empty() {
            return Err(Error::param("modes", "", "at least one mode is required"));
        }
        if self.copies != 4 && self.modes.contains(&Mode::LeungOptRec) {
            return Err(Error::param(
                "copies",
                self.copies,
                "leung_optrec needs exactly 4 copies",
            ));
        }
        self.solve.validate()
    }

    /// Uniform grid `gamma_min + (gamma_max - gamma_min) * i / (steps - 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.gamma_max - self.gamma_min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.gamma_max
                } else {
                    self.gamma_min + span * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    pub mode: Mode,
    pub fidelity: f64,
    pub inner_iterations_total: usize,
    pub outer_rounds: usize,
    pub restarts_used: usize,
    pub converged: bool,
    pub wall_time_ms: u64,
}

fn elapsed_ms(start: Instant, record: bool) -> u64 {
    if record {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn nocoding_record(gamma: f64, cfg: &SweepConfig) -> Result<SweepRecord> {
    let start = Instant::now();
    let fidelity = channel_fidelity(&amplitude_damping(gamma)?)?;
    Ok(SweepRecord {
        gamma,
        mode: Mode::NoCoding,
        fidelity,
        inner_iterations_total: 0,
        outer_rounds: 0,
        restarts_used: 0,
        converged: true,
        wall_time_ms: elapsed_ms(start, cfg.record_timing),
    })
}

fn leung_record(gamma: f64, cfg: &SweepConfig) -> Result<SweepRecord> {
    let start = Instant::now();
    let res = leung_optimal_recovery(&amplitude_damping(gamma)?, &cfg.solve)?;
    Ok(SweepRecord {
        gamma,
        mode: Mode::LeungOptRec,
        fidelity: res.fidelity,
        inner_iterations_total: res.iterations,
        outer_rounds: 0,
        restarts_used: 1,
        converged: res.converged,
        wall_time_ms: elapsed_ms(start, cfg.record_timing),
    })
}

/// Grid points run left to right, each seeded with its left neighbour's
/// optimum; restarts within a point run concurrently.
fn seesaw_records(grid: &[f64], cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    let mut out = Vec::with_capacity(grid.len());
    let mut warm: Option<WarmStart> = None;
    for &gamma in grid {
        let start = Instant::now();
        let res = seesaw_warm(
            &amplitude_damping(gamma)?,
            cfg.copies,
            &cfg.solve,
            warm.as_ref(),
        )?;
        out.push(SweepRecord {
            gamma,
            mode: Mode::Seesaw,
            fidelity: res.fidelity,
            inner_iterations_total: res.inner_iterations_total,
            outer_rounds: res.outer_rounds,
            restarts_used: res.restarts_used,
            converged: res.converged,
            wall_time_ms: elapsed_ms(start, cfg.record_timing),
        });
        // the noiseless short-circuit carries no useful warm start
        if res.restarts_used > 0 {
            warm = Some(WarmStart::from(&res));
        }
    }
    Ok(out)
}

fn mode_records(mode: Mode, grid: &[f64], cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    match mode {
        Mode::NoCoding => grid.iter().map(|&g| nocoding_record(g, cfg)).collect(),
        Mode::LeungOptRec => par::map(cfg.solve.execution, grid, |&g| leung_record(g, cfg))
            .into_iter()
            .collect(),
        Mode::Seesaw => seesaw_records(grid, cfg),
    }
}

/// Evaluates every requested mode on the grid. Records are sorted by mode
/// name, then by `gamma`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRecord>> {
    config.validate()?;
    let grid = config.grid();
    let mut modes = config.modes.clone();
    modes.sort();
    modes.dedup();
    let per_mode = par::map(config.solve.execution, &modes, |&m| {
        mode_records(m, &grid, config)
    });
    let mut records = Vec::new();
    for r in per_mode {
        records.extend(r?);
    }
    records.sort_by(|a, b| {
        a.mode
            .as_str()
            .cmp(b.mode.as_str())
            .then(a.gamma.total_cmp(&b.gamma))
    });
    Ok(records)
}
