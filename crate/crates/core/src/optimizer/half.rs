//! Half-step solver: maximize `sum_k <w_k|X|w_k>` over trace-preserving Kraus
//! sets of fixed size.
//!
//! Stacking the Kraus operators into one matrix turns trace preservation
//! into an isometry constraint, and the objective is a convex quadratic in
//! that matrix. Replacing the iterate by the isometric polar factor of the
//! gradient therefore never decreases the objective. The gradient is taken
//! for `X + shift * I`; the shift adds a constant to the objective but keeps
//! the gradient full rank when `X` has a small range (e.g. the trivial
//! embedding, whose errors only reach two code-space directions).

use crate::channel::Channel;
use crate::codes::Isometry;
use crate::error::{Error, Result};
use crate::tensor::{herm_eig, inv_sqrt_psd, CMatrix, C64, PSD_FLOOR};

use super::fidelity_op::{inner_products, FidelityOperator, KrausVectorization};
use super::SolveOptions;

/// Gradient shift, relative to the largest eigenvalue of `X`.
const SHIFT_REL: f64 = 1e-3;

#[derive(Clone, Debug)]
pub struct HalfResult {
    pub channel: Channel,
    pub fidelity: f64,
    pub initial_fidelity: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Largest eigenvalue of a Hermitian PSD operator.
pub(crate) fn spectral_norm(x: &CMatrix) -> f64 {
    herm_eig(&x.hermitian_part())
        .map(|e| e.values.first().copied().unwrap_or(0.0).max(0.0))
        .unwrap_or_else(|_| x.max_abs() * x.rows() as f64)
}

/// One power step: `w_k <- (X + shift) w_k`, then renormalize so that
/// `sum_k K_k^dag K_k = I`.
fn power_step(op: &FidelityOperator, ws: &[Vec<C64>], shift: f64) -> Result<Vec<Vec<C64>>> {
    let mut gs = inner_products(ws, op.matrix());
    for (g, w) in gs.iter_mut().zip(ws) {
        for (gi, wi) in g.iter_mut().zip(w) {
            *gi += wi * shift;
        }
    }
    let kraus: Vec<CMatrix> = gs.iter().map(|g| op.kraus_from_vector(g)).collect();
    let d_in = op.d_in();
    let mut gram = CMatrix::zeros(d_in, d_in);
    for k in &kraus {
        gram.axpy(C64::new(1.0, 0.0), &(&k.adjoint() * k));
    }
    let norm = inv_sqrt_psd(&gram.hermitian_part(), PSD_FLOOR)?;
    Ok(kraus
        .iter()
        .map(|k| op.kraus_vector(&(k * &norm)))
        .collect())
}

/// Monotone power iteration from `initial`. The returned fidelity is never
/// below the fidelity of `initial`; hitting `max_inner_iters` is reported
/// through `converged = false`, not as an error.
pub fn optimize_half(
    op: &FidelityOperator,
    initial: &Channel,
    opts: &SolveOptions,
) -> Result<HalfResult> {
    opts.validate()?;
    let initial_fidelity = op.evaluate(initial)?;
    let mut ws: Vec<Vec<C64>> = initial.kraus().iter().map(|k| op.kraus_vector(k)).collect();
    let shift = SHIFT_REL * spectral_norm(op.matrix());
    let mut fidelity = initial_fidelity;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_inner_iters {
        let next = power_step(op, &ws, shift)?;
        let next_fidelity = op.value_of_vectors(&next);
        iterations += 1;
        if !next_fidelity.is_finite() || next_fidelity < fidelity {
            // no further ascent available at working precision
            converged = true;
            break;
        }
        let gain = next_fidelity - fidelity;
        ws = next;
        fidelity = next_fidelity;
        if gain <= opts.inner_tol {
            converged = true;
            break;
        }
    }

    let kraus = ws.iter().map(|w| op.kraus_from_vector(w)).collect();
    let channel = Channel::new_unchecked(kraus)?;
    let deviation = channel.completeness_deviation();
    if deviation > crate::channel::COMPLETENESS_TOL {
        return Err(Error::NotTracePreserving { deviation });
    }
    Ok(HalfResult {
        channel,
        fidelity,
        initial_fidelity,
        iterations,
        converged,
    })
}

#[derive(Clone, Debug)]
pub struct IsometricResult {
    pub isometry: Isometry,
    pub fidelity: f64,
    pub initial_fidelity: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Encoder half-step restricted to a single Kraus operator. The polar
/// renormalization of one Kraus operator is exactly `V (V^dag V)^{-1/2}`, the
/// projection back onto isometries.
pub fn optimize_encoding_isometric(
    op: &FidelityOperator,
    initial: &Isometry,
    opts: &SolveOptions,
) -> Result<IsometricResult> {
    if op.vectorization() != KrausVectorization::Direct {
        return Err(Error::InvalidDims(
            "isometric optimization needs an encoding fidelity operator".into(),
        ));
    }
    let res = optimize_half(op, &initial.to_channel(), opts)?;
    let v = res
        .channel
        .into_kraus()
        .pop()
        .expect("single Kraus operator in, single out");
    Ok(IsometricResult {
        isometry: Isometry::new(v)?,
        fidelity: res.fidelity,
        initial_fidelity: res.initial_fidelity,
        iterations: res.iterations,
        converged: res.converged,
    })
}
