//! Quantum channels in Kraus form, their Choi matrices, and the channel
//! fidelity.
//!
//! Conventions used throughout the crate:
//!
//! - A Kraus operator of a channel `d_in -> d_out` has shape `(d_out, d_in)`.
//! - The Choi matrix is unnormalized, `C = sum_ij T(|i><j|) (x) |i><j|`, with
//!   the output factor first. Its trace is `d_in` and trace preservation reads
//!   `Tr_out C = I_{d_in}`.
//! - `Omega = d^{-1/2} sum_i |ii>` is a unit vector, so the identity channel
//!   has fidelity exactly one.

use crate::error::{Error, Result};
use crate::tensor::{self, herm_eig, CMatrix, DimSpec, C64};

/// Tolerance on `|sum K^dag K - I|` for a channel to count as trace preserving.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Tolerance for Choi-matrix validation (PSD and partial-trace constraint).
pub const CHOI_TOL: f64 = 1e-9;
/// Default relative eigenvalue cutoff for [`ChoiMatrix::to_channel`].
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    d_in: usize,
    d_out: usize,
}

impl Channel {
    /// Validates shapes and trace preservation.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let c = Self::new_unchecked(kraus)?;
        let deviation = c.completeness_deviation();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(c)
    }

    /// Checks shapes only; trace preservation is the caller's responsibility.
    pub(crate) fn new_unchecked(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| {
            Error::InvalidDims("channel needs at least one Kraus operator".into())
        })?;
        let (d_out, d_in) = first.shape();
        if let Some(bad) = kraus.iter().find(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch {
                op: "Channel::new",
                left: (d_out, d_in),
                right: bad.shape(),
            });
        }
        Ok(Channel { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        Channel {
            kraus: vec![CMatrix::identity(d)],
            d_in: d,
            d_out: d,
        }
    }

    /// Splits a stacked `(rank * d_out) x d_in` matrix into `rank` Kraus
    /// blocks. An isometric stack gives a trace-preserving channel.
    pub fn from_stacked(stacked: &CMatrix, d_out: usize) -> Result<Self> {
        if d_out == 0 || !stacked.rows().is_multiple_of(d_out) {
            return Err(Error::InvalidDims(format!(
                "cannot split {} rows into blocks of {d_out}",
                stacked.rows()
            )));
        }
        let rank = stacked.rows() / d_out;
        let kraus = (0..rank)
            .map(|k| CMatrix::from_fn(d_out, stacked.cols(), |i, j| stacked[(k * d_out + i, j)]))
            .collect();
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn into_kraus(self) -> Vec<CMatrix> {
        self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Number of Kraus operators (not the Choi rank).
    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    /// `sum_k K_k^dag K_k`.
    pub fn kraus_gram(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.d_in, self.d_in);
        for k in &self.kraus {
            s.axpy(C64::new(1.0, 0.0), &(&k.adjoint() * k));
        }
        s
    }

    pub fn completeness_deviation(&self) -> f64 {
        self.kraus_gram()
            .max_abs_diff(&CMatrix::identity(self.d_in))
    }

    pub fn compose(&self, then: &Channel) -> Result<Channel> {
        compose(self, then)
    }

    /// Parallel composition `self (x) other`.
    pub fn tensor(&self, other: &Channel) -> Channel {
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kron(b)))
            .collect();
        Channel {
            kraus,
            d_in: self.d_in * other.d_in,
            d_out: self.d_out * other.d_out,
        }
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        let n = self.d_out * self.d_in;
        let mut m = CMatrix::zeros(n, n);
        for k in &self.kraus {
            // row-major entries of K are the vector sum_i K|i> (x) |i>
            let v = k.as_slice();
            for (p, vp) in v.iter().enumerate() {
                if *vp == C64::new(0.0, 0.0) {
                    continue;
                }
                for (q, vq) in v.iter().enumerate() {
                    m[(p, q)] += vp * vq.conj();
                }
            }
        }
        ChoiMatrix {
            matrix: m,
            d_in: self.d_in,
            d_out: self.d_out,
        }
    }

    /// `rho -> sum_k K_k rho K_k^dag`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch {
                op: "Channel::apply",
                left: (self.d_out, self.d_in),
                right: rho.shape(),
            });
        }
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out.axpy(C64::new(1.0, 0.0), &(&(k * rho) * &k.adjoint()));
        }
        Ok(out)
    }

    pub fn fidelity(&self) -> Result<f64> {
        channel_fidelity(self)
    }
}

/// Qubit amplitude damping with decay probability `gamma`:
/// `K0 = diag(1, sqrt(1 - gamma))`, `K1 = sqrt(gamma) |0><1|`.
pub fn amplitude_damping(gamma: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::param("gamma", gamma, "must lie in [0, 1]"));
    }
    let k0 = CMatrix::diag_real(&[1.0, (1.0 - gamma).sqrt()]);
    let mut k1 = CMatrix::zeros(2, 2);
    k1[(0, 1)] = C64::new(gamma.sqrt(), 0.0);
    Ok(Channel {
        kraus: vec![k0, k1],
        d_in: 2,
        d_out: 2,
    })
}

/// Sequential composition: `first` acts, then `then`. Kraus operators are
/// all products `B_j A_i`, with no pruning.
pub fn compose(first: &Channel, then: &Channel) -> Result<Channel> {
    if first.d_out != then.d_in {
        return Err(Error::DimensionMismatch {
            op: "compose",
            left: (first.d_out, first.d_in),
            right: (then.d_out, then.d_in),
        });
    }
    let mut kraus = Vec::with_capacity(first.kraus.len() * then.kraus.len());
    for a in &first.kraus {
        for b in &then.kraus {
            kraus.push(b * a);
        }
    }
    Ok(Channel {
        kraus,
        d_in: first.d_in,
        d_out: then.d_out,
    })
}

/// `n` parallel copies. Kraus operators are indexed lexicographically with
/// the first copy most significant.
pub fn tensor_power(c: &Channel, n: usize) -> Result<Channel> {
    if n == 0 {
        return Err(Error::param("n", n, "tensor power needs at least one copy"));
    }
    let mut out = c.clone();
    for _ in 1..n {
        out = out.tensor(c);
    }
    Ok(out)
}

/// `(1/d^2) sum_k |tr K_k|^2` for a channel with equal input and output
/// dimension `d`.
pub fn channel_fidelity(c: &Channel) -> Result<f64> {
    if c.d_in != c.d_out {
        return Err(Error::DimensionMismatch {
            op: "channel_fidelity",
            left: (c.d_out, c.d_in),
            right: (c.d_in, c.d_in),
        });
    }
    let d = c.d_in as f64;
    Ok(c.kraus.iter().map(|k| k.trace().norm_sqr()).sum::<f64>() / (d * d))
}

/// Unnormalized Choi matrix of a channel (output factor first).
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    matrix: CMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiMatrix {
    /// Validates complete positivity and trace preservation.
    pub fn new(matrix: CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        if matrix.shape() != (d_in * d_out, d_in * d_out) {
            return Err(Error::InvalidDims(format!(
                "Choi matrix of a {d_in} -> {d_out} channel must be {n}x{n}, got {:?}",
                matrix.shape(),
                n = d_in * d_out
            )));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > CHOI_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let min = herm_eig(&matrix.hermitian_part())?
            .values
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -CHOI_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        let c = ChoiMatrix {
            matrix,
            d_in,
            d_out,
        };
        let deviation = c.output_trace().max_abs_diff(&CMatrix::identity(d_in));
        if deviation > CHOI_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(c)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `Tr_out C`, which is the identity for a trace-preserving map.
    pub fn output_trace(&self) -> CMatrix {
        let dims = DimSpec::new(vec![self.d_out, self.d_in]).expect("positive dims");
        tensor::partial_trace(&self.matrix, &dims, &[1]).expect("consistent dims")
    }

    /// Kraus operators from the eigendecomposition, `K = sqrt(lambda) unvec(v)`,
    /// keeping eigenvalues above `rank_tol` times the leading one.
    pub fn to_channel(&self, rank_tol: f64) -> Result<Channel> {
        let eig = herm_eig(&self.matrix.hermitian_part())?;
        let lead = eig.values.first().copied().unwrap_or(0.0);
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -CHOI_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        let cutoff = rank_tol * lead.max(0.0);
        let kraus: Vec<CMatrix> = eig
            .values
            .iter()
            .enumerate()
            .take_while(|&(_, &l)| l > cutoff)
            .map(|(k, &l)| {
                let s = l.sqrt();
                CMatrix::from_fn(self.d_out, self.d_in, |a, i| {
                    eig.vectors[(a * self.d_in + i, k)] * s
                })
            })
            .collect();
        if kraus.is_empty() {
            return Err(Error::InvalidDims("Choi matrix has no support".into()));
        }
        Channel::new(kraus)
    }
}

/// Convenience wrapper for [`ChoiMatrix::to_channel`].
pub fn from_choi(x: &ChoiMatrix, rank_tol: f64) -> Result<Channel> {
    x.to_channel(rank_tol)
}

/// `Omega = d^{-1/2} sum_i |i>|i>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxEntangledVector {
    d: usize,
}

impl MaxEntangledVector {
    pub fn new(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::param("d", d, "must be positive"));
        }
        Ok(MaxEntangledVector { d })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn to_vec(&self) -> Vec<C64> {
        let d = self.d;
        let amp = C64::new((d as f64).sqrt().recip(), 0.0);
        let mut v = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            v[i * d + i] = amp;
        }
        v
    }

    pub fn projector(&self) -> CMatrix {
        let v = self.to_vec();
        CMatrix::outer(&v, &v)
    }
}
