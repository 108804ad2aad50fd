//! Hermitian eigendecomposition by cyclic Jacobi rotations on complex
//! matrices, plus the PSD projection built on top of it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, HERMITICITY_TOL};

/// Eigendecomposition `M = Q Λ Q†` with eigenvalues ascending and the
/// columns of `eigenvectors` orthonormal.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Eigh {
    /// Rebuild `Σ_k λ_k f(λ_k) |q_k⟩⟨q_k|` for a spectral function `f`.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let q = &self.eigenvectors;
        let mut out = CMatrix::zeros(n, n);
        for (k, &lam) in self.eigenvalues.iter().enumerate() {
            let v = f(lam);
            if v == 0.0 {
                continue;
            }
            for r in 0..n {
                let qr = q.get(r, k);
                if qr.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let add = qr * q.get(c, k).conj() * v;
                    out.set(r, c, out.get(r, c) + add);
                }
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Column eigenvector for index `k`.
    pub fn eigenvector(&self, k: usize) -> CMatrix {
        let n = self.eigenvalues.len();
        CMatrix::from_fn(n, 1, |r, _| self.eigenvectors.get(r, k))
    }
}

/// Eigendecompose a Hermitian matrix.
///
/// The input may deviate from exact hermiticity by at most
/// `HERMITICITY_TOL` scaled to the matrix magnitude; the computation runs
/// on the Hermitian part. Reconstruction error stays within
/// `1e-9 · max(1, ‖M‖_max)` and the eigenvector matrix is unitary to 1e-9.
pub fn eigh(m: &CMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigh needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }

    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut q = CMatrix::identity(n);
    let scale = a.fro_norm().max(1.0);
    let target = 1e-14 * scale;

    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off += a.get(p, r).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= target {
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                rotate(&mut a, &mut q, p, r);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| q.get(r, order[c]));
    Ok(Eigh {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation zeroing the (p, r) entry.
///
/// The complex off-diagonal is first made real by a phase on coordinate
/// `r`, then a standard real rotation annihilates it; both are folded
/// into a single plane unitary G with A ← G†AG and Q ← QG.
fn rotate(a: &mut CMatrix, q: &mut CMatrix, p: usize, r: usize) {
    let apr = a.get(p, r);
    let mag = apr.norm();
    if mag == 0.0 {
        return;
    }
    let u = apr / mag; // e^{iφ}
    let cu = u.conj();
    let app = a.get(p, p).re;
    let arr = a.get(r, r).re;
    let tau = (arr - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.rows();
    // Columns: col_p ← c·col_p − s·ū·col_r ; col_r ← s·col_p + c·ū·col_r
    for k in 0..n {
        let akp = a.get(k, p);
        let akr = a.get(k, r);
        a.set(k, p, akp * c - akr * cu * s);
        a.set(k, r, akp * s + akr * cu * c);
    }
    // Rows: row_p ← c·row_p − s·u·row_r ; row_r ← s·row_p + c·u·row_r
    for k in 0..n {
        let apk = a.get(p, k);
        let ark = a.get(r, k);
        a.set(p, k, apk * c - ark * u * s);
        a.set(r, k, apk * s + ark * u * c);
    }
    a.set(p, r, Complex64::new(0.0, 0.0));
    a.set(r, p, Complex64::new(0.0, 0.0));
    let app_new = a.get(p, p);
    let arr_new = a.get(r, r);
    a.set(p, p, Complex64::new(app_new.re, 0.0));
    a.set(r, r, Complex64::new(arr_new.re, 0.0));

    for k in 0..n {
        let qkp = q.get(k, p);
        let qkr = q.get(k, r);
        q.set(k, p, qkp * c - qkr * cu * s);
        q.set(k, r, qkp * s + qkr * cu * c);
    }
}

/// Smallest eigenvalue and its eigenvector.
pub fn min_eigenvalue(m: &CMatrix) -> Result<(f64, CMatrix)> {
    let dec = eigh(m)?;
    Ok((dec.eigenvalues[0], dec.eigenvector(0)))
}

/// Nearest PSD matrix in Hilbert–Schmidt distance: clip negative
/// eigenvalues to zero. Idempotent.
pub fn psd_project(m: &CMatrix) -> Result<CMatrix> {
    let dec = eigh(m)?;
    Ok(dec.apply_spectral(|lam| if lam > 0.0 { lam } else { 0.0 }))
}
