use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::tensor::{unvec_entries, vec_entries, CMatrix, C64};

/// How the free channel's Kraus operators are turned into vectors `w_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrausVectorization {
    /// `w_k = vec(K_k^dag)`; used when the recovery is free.
    Adjoint,
    /// `w_k = vec(K_k)`; used when the encoder is free.
    Direct,
}

/// PSD matrix `X` with `F = sum_k <w_k| X |w_k>` for the free channel's
/// Kraus vectors `w_k`, the other two stages of the chain held fixed.
#[derive(Clone, Debug)]
pub struct FidelityOperator {
    x: CMatrix,
    d_in: usize,
    d_out: usize,
    vectorization: KrausVectorization,
}

impl FidelityOperator {
    /// Builds `X = (1/d^2) sum_m |a_m><a_m|` from the vectors `a_m`.
    fn from_vectors(
        vectors: &[Vec<C64>],
        d: usize,
        d_in: usize,
        d_out: usize,
        vectorization: KrausVectorization,
    ) -> Self {
        let n = d_in * d_out;
        let norm = 1.0 / (d * d) as f64;
        let mut x = CMatrix::zeros(n, n);
        for a in vectors {
            for (i, ai) in a.iter().enumerate() {
                if *ai == C64::new(0.0, 0.0) {
                    continue;
                }
                let ai = ai * norm;
                for (j, aj) in a.iter().enumerate() {
                    x[(i, j)] += ai * aj.conj();
                }
            }
        }
        FidelityOperator {
            x,
            d_in,
            d_out,
            vectorization,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.x
    }

    /// Input dimension of the free channel.
    pub fn d_in(&self) -> usize {
        self.d_in
    }

    /// Output dimension of the free channel.
    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn vectorization(&self) -> KrausVectorization {
        self.vectorization
    }

    pub fn kraus_vector(&self, k: &CMatrix) -> Vec<C64> {
        match self.vectorization {
            KrausVectorization::Adjoint => vec_entries(&k.adjoint()),
            KrausVectorization::Direct => vec_entries(k),
        }
    }

    pub fn kraus_from_vector(&self, w: &[C64]) -> CMatrix {
        match self.vectorization {
            KrausVectorization::Adjoint => unvec_entries(w, self.d_in, self.d_out)
                .expect("vector length matches operator")
                .adjoint(),
            KrausVectorization::Direct => {
                unvec_entries(w, self.d_out, self.d_in).expect("vector length matches operator")
            }
        }
    }

    pub(crate) fn value_of_vectors(&self, ws: &[Vec<C64>]) -> f64 {
        ws.iter().map(|w| self.x.quadratic_form(w).re).sum()
    }

    /// Fidelity of the full chain with `free` in the optimized slot.
    pub fn evaluate(&self, free: &Channel) -> Result<f64> {
        if (free.d_in(), free.d_out()) != (self.d_in, self.d_out) {
            return Err(Error::DimensionMismatch {
                op: "FidelityOperator::evaluate",
                left: (self.d_out, self.d_in),
                right: (free.d_out(), free.d_in()),
            });
        }
        let ws: Vec<_> = free.kraus().iter().map(|k| self.kraus_vector(k)).collect();
        Ok(self.value_of_vectors(&ws))
    }

    /// Matrix `Z` with `F = tr(Z C)` for the (unnormalized, output-first)
    /// Choi matrix `C` of the free channel.
    pub fn choi_objective(&self) -> CMatrix {
        let (d_in, d_out) = (self.d_in, self.d_out);
        let n = d_in * d_out;
        match self.vectorization {
            // w = conj(row-major entries of K)
            KrausVectorization::Adjoint => self.x.transpose(),
            // w = column-major entries of K
            KrausVectorization::Direct => CMatrix::from_fn(n, n, |p, q| {
                let (a, i) = (p / d_in, p % d_in);
                let (b, j) = (q / d_in, q % d_in);
                self.x[(a + i * d_out, b + j * d_out)]
            }),
        }
    }
}

fn check_chain(
    encoder: &Channel,
    noise: &Channel,
    recovery_shape: Option<(usize, usize)>,
) -> Result<()> {
    if encoder.d_out() != noise.d_in() {
        return Err(Error::DimensionMismatch {
            op: "fidelity operator (encoder -> noise)",
            left: (encoder.d_out(), encoder.d_in()),
            right: (noise.d_out(), noise.d_in()),
        });
    }
    if let Some((r_out, r_in)) = recovery_shape {
        if r_in != noise.d_out() || r_out != encoder.d_in() {
            return Err(Error::DimensionMismatch {
                op: "fidelity operator (noise -> recovery)",
                left: (noise.d_out(), noise.d_in()),
                right: (r_out, r_in),
            });
        }
    }
    Ok(())
}

/// Objective for the recovery with encoder and noise fixed:
/// `X = (1/d^2) sum_{j,i} vec(N_j E_i) vec(N_j E_i)^dag`, acting on
/// `vec(R_k^dag)`.
pub fn fidelity_operator_recovery(encoder: &Channel, noise: &Channel) -> Result<FidelityOperator> {
    check_chain(encoder, noise, None)?;
    let d = encoder.d_in();
    let mut vectors = Vec::with_capacity(encoder.kraus_count() * noise.kraus_count());
    for e in encoder.kraus() {
        for n in noise.kraus() {
            vectors.push(vec_entries(&(n * e)));
        }
    }
    Ok(FidelityOperator::from_vectors(
        &vectors,
        d,
        noise.d_out(),
        d,
        KrausVectorization::Adjoint,
    ))
}

/// Objective for the encoder with recovery and noise fixed:
/// `Y = (1/d^2) sum_{k,j} vec((R_k N_j)^dag) vec((R_k N_j)^dag)^dag`, acting on
/// `vec(E_i)`.
pub fn fidelity_operator_encoding(recovery: &Channel, noise: &Channel) -> Result<FidelityOperator> {
    if recovery.d_in() != noise.d_out() {
        return Err(Error::DimensionMismatch {
            op: "fidelity operator (noise -> recovery)",
            left: (noise.d_out(), noise.d_in()),
            right: (recovery.d_out(), recovery.d_in()),
        });
    }
    let d = recovery.d_out();
    let mut vectors = Vec::with_capacity(recovery.kraus_count() * noise.kraus_count());
    for r in recovery.kraus() {
        for n in noise.kraus() {
            vectors.push(vec_entries(&(r * n).adjoint()));
        }
    }
    Ok(FidelityOperator::from_vectors(
        &vectors,
        d,
        d,
        noise.d_in(),
        KrausVectorization::Direct,
    ))
}

/// Fidelity of `encoder -> noise -> recovery` through the recovery operator.
pub fn chain_fidelity(encoder: &Channel, noise: &Channel, recovery: &Channel) -> Result<f64> {
    check_chain(encoder, noise, Some((recovery.d_out(), recovery.d_in())))?;
    fidelity_operator_recovery(encoder, noise)?.evaluate(recovery)
}

pub(crate) fn inner_products(ws: &[Vec<C64>], x: &CMatrix) -> Vec<Vec<C64>> {
    ws.iter().map(|w| x.mul_vec(w)).collect()
}
