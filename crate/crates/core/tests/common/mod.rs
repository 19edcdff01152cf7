#![allow(dead_code)]

use rand::Rng;
use seesaw_core::codes::{seeded_rng, Rng as SeedRng};
use seesaw_core::{CMatrix, Channel, C64};

pub fn rng(seed: u64) -> SeedRng {
    seeded_rng(seed)
}

pub fn rand_matrix(rng: &mut SeedRng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn rand_hermitian(rng: &mut SeedRng, n: usize) -> CMatrix {
    rand_matrix(rng, n, n).hermitian_part()
}

/// Full-rank PSD matrix `A A^dag + 0.1 I`.
pub fn rand_psd(rng: &mut SeedRng, n: usize) -> CMatrix {
    let a = rand_matrix(rng, n, n);
    let mut m = (&a * &a.adjoint()).hermitian_part();
    m.axpy(C64::new(0.1, 0.0), &CMatrix::identity(n));
    m
}

pub fn rand_density(rng: &mut SeedRng, n: usize) -> CMatrix {
    let m = rand_psd(rng, n);
    let t = m.trace().re;
    m.scale_real(1.0 / t)
}

/// `(1/d) sum_i |ii>` style index: basis vector `|i>|j>` of a `d x d` system.
pub fn ket_pair(d: usize, i: usize, j: usize) -> usize {
    i * d + j
}

/// Channel fidelity from its defining state: build `(T (x) id)(|Omega><Omega|)`
/// entry by entry and take the overlap with `Omega`.
pub fn fidelity_from_state(c: &Channel) -> f64 {
    let d = c.d_in();
    assert_eq!(d, c.d_out());
    // |Omega><Omega| = (1/d) sum_ij |i><j| (x) |i><j|, so the output state is
    // (1/d) sum_ij T(|i><j|) (x) |i><j|.
    let mut state = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut eij = CMatrix::zeros(d, d);
            eij[(i, j)] = C64::new(1.0, 0.0);
            let t = c.apply(&eij).unwrap();
            for a in 0..d {
                for b in 0..d {
                    state[(ket_pair(d, a, i), ket_pair(d, b, j))] += t[(a, b)] / d as f64;
                }
            }
        }
    }
    let mut overlap = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            overlap += state[(ket_pair(d, i, i), ket_pair(d, j, j))] / d as f64;
        }
    }
    overlap.re
}

/// Choi matrix built from its definition `sum_ij T(|i><j|) (x) |i><j|`.
pub fn choi_from_definition(c: &Channel) -> CMatrix {
    let (d_in, d_out) = (c.d_in(), c.d_out());
    let mut out = CMatrix::zeros(d_out * d_in, d_out * d_in);
    for i in 0..d_in {
        for j in 0..d_in {
            let mut eij = CMatrix::zeros(d_in, d_in);
            eij[(i, j)] = C64::new(1.0, 0.0);
            let t = c.apply(&eij).unwrap();
            for a in 0..d_out {
                for b in 0..d_out {
                    out[(a * d_in + i, b * d_in + j)] += t[(a, b)];
                }
            }
        }
    }
    out
}

/// Recovery that discards every qubit except `keep` (big-endian qubit index)
/// out of `n`.
pub fn partial_trace_recovery(n: usize, keep: usize) -> Channel {
    let dim = 1usize << n;
    let shift = n - 1 - keep;
    let mut kraus = Vec::new();
    for rest in 0..dim / 2 {
        // insert the kept bit into position `shift` of the remaining bits
        let low = rest & ((1 << shift) - 1);
        let high = (rest >> shift) << (shift + 1);
        let k = CMatrix::from_fn(2, dim, |a, col| {
            if col == high | (a << shift) | low {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        kraus.push(k);
    }
    Channel::new(kraus).unwrap()
}

/// Recovery that ignores its input and prepares the maximally mixed qubit.
pub fn constant_mixed_recovery(d_in: usize) -> Channel {
    let mut kraus = Vec::new();
    for a in 0..2 {
        for j in 0..d_in {
            let mut k = CMatrix::zeros(2, d_in);
            k[(a, j)] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            kraus.push(k);
        }
    }
    Channel::new(kraus).unwrap()
}
