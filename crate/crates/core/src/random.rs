//! Seeded random sampling of matrices: Ginibre ensembles, Haar unitaries
//! by QR with phase-fixed R diagonal, random density matrices.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::linalg::{kron, orthonormalize, BipartiteDims, CMatrix};

/// Deterministic sampler; all randomized searches record their seed.
pub struct Sampler {
    rng: ChaCha12Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self) -> f64 {
        // 53-bit uniform in (0, 1].
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 1.0) / (1u64 << 53) as f64
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    /// Matrix of i.i.d. complex Gaussians.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Haar-random unitary: QR of a Ginibre matrix. Modified Gram–Schmidt
    /// leaves the R diagonal real positive, which fixes the phase gauge.
    pub fn haar_unitary(&mut self, n: usize) -> CMatrix {
        loop {
            let z = self.ginibre(n, n);
            let cols: Vec<CMatrix> = (0..n)
                .map(|j| CMatrix::from_fn(n, 1, |i, _| z.get(i, j)))
                .collect();
            let q = orthonormalize(&cols, 1e-12);
            if q.len() == n {
                return CMatrix::from_fn(n, n, |i, j| q[j].get(i, 0));
            }
            // Rank-deficient Ginibre draw has probability zero; resample.
        }
    }

    /// Haar-random local unitary `U_S ⊗ U_B`.
    pub fn local_unitary(&mut self, dims: BipartiteDims) -> CMatrix {
        let us = self.haar_unitary(dims.d_s);
        let ub = self.haar_unitary(dims.d_b);
        kron(&us, &ub)
    }

    /// Random full-rank density matrix `GG†/Tr(GG†)`.
    pub fn density(&mut self, n: usize) -> CMatrix {
        let g = self.ginibre(n, n);
        let m = g.matmul(&g.adjoint());
        let t = m.trace().re;
        m.scale_re(1.0 / t)
    }

    /// Random pure-state projector.
    pub fn pure_state(&mut self, n: usize) -> CMatrix {
        let v = self.ginibre(n, 1);
        let norm = v.fro_norm();
        let v = v.scale_re(1.0 / norm);
        CMatrix::outer(&v, &v)
    }

    /// Random Hermitian matrix with Gaussian entries.
    pub fn hermitian(&mut self, n: usize) -> CMatrix {
        self.ginibre(n, n).hermitian_part()
    }

    /// Split off an independent child sampler.
    pub fn fork(&mut self) -> Sampler {
        Sampler::new(self.rng.next_u64())
    }
}
