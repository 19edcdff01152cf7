//! Independent solver for a half-problem, working directly on Choi matrices.
//!
//! Projected ascent on the linear objective `tr(Z C)`: a gradient step
//! followed by a Dykstra projection onto the intersection of the PSD cone and
//! the affine set `Tr_out C = I`. Every iterate is additionally repaired into
//! an exactly feasible Choi matrix, and the best feasible objective is
//! returned, so the result is always attained by a genuine channel.

use crate::error::Result;
use crate::tensor::{herm_eig, inv_sqrt_psd, kron, psd_projection, CMatrix, DimSpec, C64};

use super::fidelity_op::FidelityOperator;

const DYKSTRA_MAX_CYCLES: usize = 100;
const DYKSTRA_TOL: f64 = 1e-13;
/// Iterates moving less than this (max-norm) count as a fixed point.
const FIXED_POINT_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub fidelity: f64,
    /// Feasible Choi matrix attaining `fidelity`.
    pub choi: CMatrix,
    pub iterations: usize,
}

struct ChoiGeometry {
    d_in: usize,
    d_out: usize,
    dims: DimSpec,
}

impl ChoiGeometry {
    fn output_trace(&self, c: &CMatrix) -> CMatrix {
        crate::tensor::partial_trace(c, &self.dims, &[1]).expect("consistent dims")
    }

    /// Orthogonal projection onto `{C : Tr_out C = I}`.
    fn project_affine(&self, c: &CMatrix) -> CMatrix {
        let mut excess = self.output_trace(c);
        excess.axpy(C64::new(-1.0, 0.0), &CMatrix::identity(self.d_in));
        let correction =
            kron(&CMatrix::identity(self.d_out), &excess).scale_real(1.0 / self.d_out as f64);
        c - &correction
    }

    /// `(I (x) S^{-1/2}) C (I (x) S^{-1/2})` with `S = Tr_out C`.
    fn repair(&self, psd: &CMatrix) -> Result<CMatrix> {
        let s = self.output_trace(psd).hermitian_part();
        let t = kron(&CMatrix::identity(self.d_out), &inv_sqrt_psd(&s, 1e-14)?);
        Ok((&(&t * psd) * &t).hermitian_part())
    }

    /// Dykstra's alternating projection started from `y`.
    fn project_feasible(&self, y: &CMatrix) -> Result<CMatrix> {
        let n = y.rows();
        let mut x = y.clone();
        let mut p = CMatrix::zeros(n, n);
        let mut q = CMatrix::zeros(n, n);
        for _ in 0..DYKSTRA_MAX_CYCLES {
            let a = self.project_affine(&(&x + &p));
            p = &(&x + &p) - &a;
            let b = psd_projection(&(&a + &q).hermitian_part())?;
            q = &(&a + &q) - &b;
            let change = b.max_abs_diff(&x);
            x = b;
            if change < DYKSTRA_TOL {
                break;
            }
        }
        Ok(x)
    }
}

/// Best feasible objective found by projected ascent over Choi matrices.
/// Step size is `1 / ||Z||`; stops after `iters` steps or at a fixed point.
pub fn oracle_optimize(op: &FidelityOperator, iters: usize) -> Result<OracleResult> {
    let (d_in, d_out) = (op.d_in(), op.d_out());
    let geom = ChoiGeometry {
        d_in,
        d_out,
        dims: DimSpec::new(vec![d_out, d_in])?,
    };
    let z = op.choi_objective().hermitian_part();
    let z_norm = herm_eig(&z)?
        .values
        .iter()
        .fold(0.0f64, |m, l| m.max(l.abs()));
    let objective = |c: &CMatrix| crate::tensor::hs_inner(&z, c).re;

    // completely depolarizing map: C = I / d_out
    let mut c = CMatrix::identity(d_in * d_out).scale_real(1.0 / d_out as f64);
    let mut best = objective(&c);
    let mut best_choi = c.clone();
    if z_norm == 0.0 {
        return Ok(OracleResult {
            fidelity: best,
            choi: best_choi,
            iterations: 0,
        });
    }
    let step = 1.0 / z_norm;
    let mut iterations = 0;
    for _ in 0..iters {
        iterations += 1;
        let mut y = c.clone();
        y.axpy(C64::new(step, 0.0), &z);
        let next = geom.project_feasible(&y)?;
        let moved = next.max_abs_diff(&c);
        c = next;
        let feasible = geom.repair(&c)?;
        let value = objective(&feasible);
        if value > best {
            best = value;
            best_choi = feasible;
        }
        if moved < FIXED_POINT_TOL {
            break;
        }
    }
    Ok(OracleResult {
        fidelity: best,
        choi: best_choi,
        iterations,
    })
}
