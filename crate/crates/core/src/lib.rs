//! Alternating optimization of quantum error-correcting encodings and
//! recovery channels for `n` parallel uses of a noisy qubit channel.
//!
//! The figure of merit is the channel fidelity
//! `F(T) = <Omega| (T (x) id)(|Omega><Omega|) |Omega>`, which is linear in the
//! channel `T`. With either the encoder or the recovery held fixed, the
//! fidelity of `encoder -> noise^(x)n -> recovery` becomes a quadratic form in
//! the Kraus operators of the other one (a [`FidelityOperator`]). Each
//! half-step maximizes that form over trace-preserving Kraus sets with a
//! power iteration, and [`seesaw`] alternates the two half-steps from
//! several starting encodings.
//!
//! ```
//! use seesaw_core::{amplitude_damping, channel_fidelity};
//!
//! let noise = amplitude_damping(0.36).unwrap();
//! let f = channel_fidelity(&noise).unwrap();
//! assert!((f - 0.81).abs() < 1e-12);
//! ```
//!
//! Module map:
//!
//! - [`tensor`]: dense complex matrices and linear-algebra kernels.
//! - [`channel`]: Kraus/Choi channels, amplitude damping, channel fidelity.
//! - [`codes`]: the 4-qubit Leung code, trivial embeddings, random isometries.
//! - [`optimizer`]: fidelity operators, half-step solvers, the Choi-space
//!   oracle and the seesaw driver.
//! - [`sweep`] and [`report`]: the damping-parameter sweep and its CSV/SVG
//!   output.

pub mod channel;
pub mod codes;
pub mod error;
pub mod optimizer;
pub mod par;
pub mod report;
pub mod sweep;
pub mod tensor;

pub use channel::{
    amplitude_damping, channel_fidelity, compose, tensor_power, Channel, ChoiMatrix,
    MaxEntangledVector,
};
pub use codes::{leung_encoder, random_channel, random_isometry, trivial_embedding, Isometry};
pub use error::{Error, Result};
pub use optimizer::{
    fidelity_operator_encoding, fidelity_operator_recovery, optimize_encoding_isometric,
    optimize_half, oracle_optimize, seesaw, FidelityOperator, HalfResult, SeesawResult,
    SolveOptions,
};
pub use par::Execution;
pub use sweep::{run_sweep, Mode, SweepConfig, SweepRecord};
pub use tensor::{CMatrix, DimSpec, C64};
