//! Fidelity operators, the two half-step solvers, the Choi-space oracle and
//! the alternating (seesaw) driver.

mod fidelity_op;
mod half;
mod oracle;
mod seesaw;

pub use fidelity_op::{
    chain_fidelity, fidelity_operator_encoding, fidelity_operator_recovery, FidelityOperator,
    KrausVectorization,
};
pub use half::{optimize_encoding_isometric, optimize_half, HalfResult, IsometricResult};
pub use oracle::{oracle_optimize, OracleResult};
pub use seesaw::{
    leung_optimal_recovery, optimal_recovery, seesaw, seesaw_warm, RestartSummary, SeedKind,
    SeesawResult, WarmStart,
};

use crate::error::{Error, Result};
use crate::par::Execution;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub max_inner_iters: usize,
    /// Stop a half-step once one power step gains less than this.
    pub inner_tol: f64,
    pub max_outer_rounds: usize,
    /// Stop a restart once a full round (encoding + recovery) gains less
    /// than this.
    pub outer_tol: f64,
    /// Total number of starting encoders, mandatory seeds included.
    pub restarts: usize,
    pub kraus_rank_recovery: usize,
    /// Restrict encoders to isometries (one Kraus operator).
    pub isometric_encoding: bool,
    /// Kraus rank of the encoder when `isometric_encoding` is off.
    pub kraus_rank_encoding: usize,
    /// Restart `i` draws from the stream seeded with `seed + i`.
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_inner_iters: 2000,
            inner_tol: 1e-10,
            max_outer_rounds: 200,
            outer_tol: 1e-9,
            restarts: 8,
            kraus_rank_recovery: 16,
            isometric_encoding: true,
            kraus_rank_encoding: 2,
            seed: 0,
            execution: Execution::default(),
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if self.inner_tol.is_nan() || self.inner_tol <= 0.0 {
            return Err(Error::param(
                "inner_tol",
                self.inner_tol,
                "must be positive",
            ));
        }
        if self.outer_tol.is_nan() || self.outer_tol <= 0.0 {
            return Err(Error::param(
                "outer_tol",
                self.outer_tol,
                "must be positive",
            ));
        }
        if self.kraus_rank_recovery == 0 {
            return Err(Error::param("kraus_rank_recovery", 0, "must be at least 1"));
        }
        if self.kraus_rank_encoding == 0 {
            return Err(Error::param("kraus_rank_encoding", 0, "must be at least 1"));
        }
        if self.restarts == 0 {
            return Err(Error::param("restarts", 0, "must be at least 1"));
        }
        Ok(())
    }
}
