//! Encoders: the 4-qubit Leung code, trivial embeddings and seeded random
//! isometries.
//!
//! Qubit order is big-endian: `|b1 b2 ... bn>` has index `sum_k b_k 2^(n-k)`.
//! All randomness in the crate comes from [`seeded_rng`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::tensor::{inv_sqrt_psd, CMatrix, C64, PSD_FLOOR};

/// Tolerance on `|V^dag V - I|`.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Largest number of qubits accepted by [`trivial_embedding`].
pub const MAX_QUBITS: usize = 12;

/// The generator behind every stochastic routine.
pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Encoder with a single Kraus operator `V`, `V^dag V = I`.
#[derive(Clone, Debug)]
pub struct Isometry {
    v: CMatrix,
}

impl Isometry {
    pub fn new(v: CMatrix) -> Result<Self> {
        if v.rows() < v.cols() {
            return Err(Error::InvalidDims(format!(
                "isometry needs d_out >= d_in, got {:?}",
                v.shape()
            )));
        }
        let deviation = (&v.adjoint() * &v).max_abs_diff(&CMatrix::identity(v.cols()));
        if deviation > ISOMETRY_TOL {
            return Err(Error::NotIsometry { deviation });
        }
        Ok(Isometry { v })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.v
    }

    pub fn d_in(&self) -> usize {
        self.v.cols()
    }

    pub fn d_out(&self) -> usize {
        self.v.rows()
    }

    pub fn to_channel(&self) -> Channel {
        Channel::new_unchecked(vec![self.v.clone()]).expect("single Kraus operator")
    }

    /// The channel `rho -> V^dag rho V + (leakage)`: decodes perfectly on the
    /// code space when combined with the projection-complement term.
    pub fn inverse_channel(&self) -> Channel {
        let vd = self.v.adjoint();
        let leak = &CMatrix::identity(self.d_out()) - &(&self.v * &vd);
        // map the orthogonal complement to |0>
        let mut kraus = vec![vd];
        for j in 0..self.d_out() {
            let col = leak.column(j);
            if col.iter().all(|z| z.norm() < 1e-14) {
                continue;
            }
            let k = CMatrix::from_fn(self.d_in(), self.d_out(), |a, b| {
                if a == 0 {
                    leak[(j, b)]
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            kraus.push(k);
        }
        Channel::new_unchecked(kraus).expect("consistent shapes")
    }
}

/// `|0>_L = (|0000> + |1111>)/sqrt 2`, `|1>_L = (|0011> + |1100>)/sqrt 2`.
pub fn leung_encoder() -> Isometry {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut v = CMatrix::zeros(16, 2);
    v[(0b0000, 0)] = h;
    v[(0b1111, 0)] = h;
    v[(0b0011, 1)] = h;
    v[(0b1100, 1)] = h;
    Isometry { v }
}

/// `|b> -> |b>|0...0>` on `n` qubits.
pub fn trivial_embedding(n: usize) -> Result<Isometry> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::param("n", n, "number of qubits must be in 1..=12"));
    }
    let dim = 1usize << n;
    let mut v = CMatrix::zeros(dim, 2);
    v[(0, 0)] = C64::new(1.0, 0.0);
    v[(dim / 2, 1)] = C64::new(1.0, 0.0);
    Ok(Isometry { v })
}

pub(crate) fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// `G (G^dag G)^{-1/2}`, the isometric factor of the polar decomposition.
pub(crate) fn polar_isometry(g: &CMatrix) -> Result<CMatrix> {
    let gram = (&g.adjoint() * g).hermitian_part();
    Ok(g * &inv_sqrt_psd(&gram, PSD_FLOOR)?)
}

pub(crate) fn random_isometry_from(rng: &mut Rng, d_in: usize, d_out: usize) -> Result<Isometry> {
    if d_in == 0 || d_out < d_in {
        return Err(Error::InvalidDims(format!(
            "random isometry needs 0 < d_in <= d_out, got d_in={d_in}, d_out={d_out}"
        )));
    }
    Isometry::new(polar_isometry(&gaussian_matrix(rng, d_out, d_in))?)
}

/// Polar factor of a seeded complex Gaussian `d_out x d_in` matrix.
pub fn random_isometry(d_in: usize, d_out: usize, seed: u64) -> Result<Isometry> {
    random_isometry_from(&mut seeded_rng(seed), d_in, d_out)
}

pub(crate) fn random_channel_from(
    rng: &mut Rng,
    d_in: usize,
    d_out: usize,
    rank: usize,
) -> Result<Channel> {
    if rank == 0 {
        return Err(Error::param("rank", rank, "must be at least 1"));
    }
    let stacked = random_isometry_from(rng, d_in, rank * d_out)?;
    Channel::from_stacked(stacked.matrix(), d_out)
}

/// Random channel with `rank` Kraus operators, from a random isometry into
/// `rank * d_out` dimensions split into blocks. Needs `rank * d_out >= d_in`.
pub fn random_channel(d_in: usize, d_out: usize, rank: usize, seed: u64) -> Result<Channel> {
    random_channel_from(&mut seeded_rng(seed), d_in, d_out, rank)
}
