//! Dense complex matrix kernel: tensor products, partial traces,
//! Hilbert–Schmidt geometry, Hermitian eigendecomposition, PSD projection.
//!
//! Everything is row-major `f64` and sized for desk scale (ambient
//! dimension ≤ 64), so there are no sparse or blocked code paths.

mod eigh;

pub use eigh::{eigh, min_eigenvalue, psd_project, Eigh};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default hermiticity tolerance on `‖M − M†‖_max`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Default relative rank cut for orthonormalization.
pub const RANK_CUT: f64 = 1e-10;
/// PSD verdicts accept eigenvalues down to this floor.
pub const PSD_EIG_FLOOR: f64 = -1e-9;
/// Unitarity tolerance on `‖U†U − 𝟙‖_max`.
pub const UNITARITY_TOL: f64 = 1e-9;

/// System/bath factor dimensions of a bipartite space `H_S ⊗ H_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteDims {
    #[serde(rename = "dS")]
    pub d_s: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_s: usize, d_b: usize) -> Result<Self> {
        if d_s == 0 || d_b == 0 {
            return Err(Error::InvalidParameter(
                "factor dimensions must be positive".into(),
            ));
        }
        // Desk scale: the dense kernel is written for small ambient
        // dimensions; witness factors multiply on top of this.
        if d_s * d_b > 64 {
            return Err(Error::InvalidParameter(format!(
                "ambient dimension {} exceeds the supported cap of 64",
                d_s * d_b
            )));
        }
        Ok(Self { d_s, d_b })
    }

    /// Ambient dimension `d_S · d_B`.
    pub fn total(&self) -> usize {
        self.d_s * self.d_b
    }

    /// Joint index of `|i⟩_S ⊗ |α⟩_B` (system factor first).
    pub fn joint(&self, i: usize, alpha: usize) -> usize {
        i * self.d_b + alpha
    }
}

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

/// Square matrix validated Hermitian within `HERMITICITY_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitianMatrix {
    dim: usize,
    underlying: CMatrix,
}

impl HermitianMatrix {
    pub fn try_new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let deviation = m.hermiticity_deviation();
        if deviation > HERMITICITY_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            dim: m.rows(),
            underlying: m,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.underlying
    }

    pub fn into_matrix(self) -> CMatrix {
        self.underlying
    }

    pub fn eigh(&self) -> Result<Eigh> {
        eigh(&self.underlying)
    }
}

impl TryFrom<CMatrix> for HermitianMatrix {
    type Error = Error;
    fn try_from(m: CMatrix) -> Result<Self> {
        Self::try_new(m)
    }
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntries);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Diagonal matrix from real entries.
    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    /// Column vector `|i⟩` in dimension `dim`.
    pub fn basis_ket(dim: usize, i: usize) -> Self {
        let mut m = Self::zeros(dim, 1);
        m.set(i, 0, Complex64::new(1.0, 0.0));
        m
    }

    /// Matrix unit `E_ij = |i⟩⟨j|` in dimension `dim`.
    pub fn matrix_unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m.set(i, j, Complex64::new(1.0, 0.0));
        m
    }

    /// Rank-one outer product `|u⟩⟨v|` of two column vectors.
    pub fn outer(u: &CMatrix, v: &CMatrix) -> Self {
        assert_eq!(u.cols, 1);
        assert_eq!(v.cols, 1);
        Self::from_fn(u.rows, v.rows, |i, j| u.get(i, 0) * v.get(j, 0).conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, z: Complex64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn scale_re(&self, t: f64) -> CMatrix {
        self.scale(Complex64::new(t, 0.0))
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        self.add(&self.adjoint()).scale_re(0.5)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖M − M†‖_max`; zero for exactly Hermitian input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `‖U†U − 𝟙‖_max`.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.adjoint().matmul(self);
        gram.sub(&CMatrix::identity(self.rows)).max_abs()
    }

    pub fn check_unitary(&self) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(())
    }

    /// Partial trace over the bath (second) factor; returns a `d_S × d_S` matrix.
    pub fn partial_trace_b(&self, dims: BipartiteDims) -> Result<CMatrix> {
        self.check_bipartite(dims)?;
        let (ds, db) = (dims.d_s, dims.d_b);
        let mut out = CMatrix::zeros(ds, ds);
        for i in 0..ds {
            for j in 0..ds {
                let mut acc = Complex64::new(0.0, 0.0);
                for alpha in 0..db {
                    acc += self.get(dims.joint(i, alpha), dims.joint(j, alpha));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Partial trace over the system (first) factor; returns a `d_B × d_B` matrix.
    pub fn partial_trace_s(&self, dims: BipartiteDims) -> Result<CMatrix> {
        self.check_bipartite(dims)?;
        let (ds, db) = (dims.d_s, dims.d_b);
        let mut out = CMatrix::zeros(db, db);
        for alpha in 0..db {
            for beta in 0..db {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..ds {
                    acc += self.get(dims.joint(i, alpha), dims.joint(i, beta));
                }
                out.set(alpha, beta, acc);
            }
        }
        Ok(out)
    }

    /// Partial trace over an arbitrary subset of tensor factors.
    ///
    /// `factors` are the dimensions of each factor in order; `keep[k]`
    /// selects which factors survive.
    pub fn partial_trace_keep(&self, factors: &[usize], keep: &[bool]) -> Result<CMatrix> {
        let total: usize = factors.iter().product();
        if !self.is_square() || self.rows != total || factors.len() != keep.len() {
            return Err(Error::DimensionMismatch(format!(
                "partial_trace_keep: matrix {}x{}, factors {:?}",
                self.rows, self.cols, factors
            )));
        }
        let kept_dims: Vec<usize> = factors
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(&d, _)| d)
            .collect();
        let traced_dims: Vec<usize> = factors
            .iter()
            .zip(keep)
            .filter(|(_, &k)| !k)
            .map(|(&d, _)| d)
            .collect();
        let kept_total: usize = kept_dims.iter().product::<usize>().max(1);
        let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

        // Interleave kept and traced per-factor indices back into a
        // row-major joint index.
        let fuse = |kept: usize, traced: usize| -> usize {
            let mut kept_idx = kept;
            let mut traced_idx = traced;
            let mut kept_parts = vec![0usize; kept_dims.len()];
            for k in (0..kept_dims.len()).rev() {
                kept_parts[k] = kept_idx % kept_dims[k];
                kept_idx /= kept_dims[k];
            }
            let mut traced_parts = vec![0usize; traced_dims.len()];
            for k in (0..traced_dims.len()).rev() {
                traced_parts[k] = traced_idx % traced_dims[k];
                traced_idx /= traced_dims[k];
            }
            let (mut ki, mut ti) = (0, 0);
            let mut joint = 0usize;
            for (k, &d) in factors.iter().enumerate() {
                let part = if keep[k] {
                    ki += 1;
                    kept_parts[ki - 1]
                } else {
                    ti += 1;
                    traced_parts[ti - 1]
                };
                joint = joint * d + part;
            }
            joint
        };

        let mut out = CMatrix::zeros(kept_total, kept_total);
        for r in 0..kept_total {
            for c in 0..kept_total {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..traced_total {
                    acc += self.get(fuse(r, t), fuse(c, t));
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    fn check_bipartite(&self, dims: BipartiteDims) -> Result<()> {
        if !self.is_square() || self.rows != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} for dS={}, dB={}; got {}x{}",
                dims.total(),
                dims.total(),
                dims.d_s,
                dims.d_b,
                self.rows,
                self.cols
            )));
        }
        Ok(())
    }
}

impl std::fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Matrix JSON encoding shared by all file formats:
// {"rows": n, "cols": m, "data": [[re, im], ...]} row-major.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Repr {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
            _p: std::marker::PhantomData,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let data = repr
            .data
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        CMatrix::new(repr.rows, repr.cols, data).map_err(D::Error::custom)
    }
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let av = a.get(i, j);
            if av.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out.set(i * b.rows + k, j * b.cols + l, av * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Hilbert–Schmidt inner product `⟨A, B⟩ = Tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    assert_eq!(
        (a.rows, a.cols),
        (b.rows, b.cols),
        "hs_inner shape mismatch"
    );
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// Conjugation `U X U†`.
pub fn ad(u: &CMatrix, x: &CMatrix) -> CMatrix {
    u.matmul(x).matmul(&u.adjoint())
}

/// Modified Gram–Schmidt under the Hilbert–Schmidt inner product.
///
/// Vectors whose residual norm falls at or below `tol · max input norm`
/// are dropped, revealing the rank of the family. Two orthogonalization
/// passes per vector keep the output orthonormal to working precision.
pub fn orthonormalize(vectors: &[CMatrix], tol: f64) -> Vec<CMatrix> {
    gram_schmidt(vectors, tol, hs_inner)
}

/// Gram–Schmidt over the reals: inner product `Re⟨A, B⟩`.
///
/// Used for Hermitian families, which form a real vector space.
pub fn orthonormalize_real(vectors: &[CMatrix], tol: f64) -> Vec<CMatrix> {
    gram_schmidt(vectors, tol, |a, b| {
        Complex64::new(hs_inner(a, b).re, 0.0)
    })
}

fn gram_schmidt(
    vectors: &[CMatrix],
    tol: f64,
    inner: impl Fn(&CMatrix, &CMatrix) -> Complex64,
) -> Vec<CMatrix> {
    let max_norm = vectors.iter().map(|v| v.fro_norm()).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return Vec::new();
    }
    let cut = tol * max_norm;
    let mut basis: Vec<CMatrix> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _pass in 0..2 {
            for b in &basis {
                let c = inner(b, &w);
                w = w.sub(&b.scale(c));
            }
        }
        let norm = w.fro_norm();
        if norm > cut {
            basis.push(w.scale_re(1.0 / norm));
        }
    }
    basis
}

/// Hermitian spanning family of the self-adjoint complex span of
/// `vectors`: for each V both `(V + V†)/2` and `i(V − V†)/2`.
///
/// The real span of the output equals the Hermitian part of the complex
/// span whenever that span is closed under the adjoint.
pub fn hermitian_span(vectors: &[CMatrix]) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(2 * vectors.len());
    for v in vectors {
        let adj = v.adjoint();
        out.push(v.add(&adj).scale_re(0.5));
        out.push(v.sub(&adj).scale(Complex64::new(0.0, 0.5)));
    }
    out
}

/// Orthonormal Hermitian basis of the full matrix space on dimension `n`.
///
/// Diagonal units, symmetric pairs `(E_ij + E_ji)/√2`, and antisymmetric
/// pairs `i(E_ij − E_ji)/√2`; `n²` elements.
pub fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        out.push(CMatrix::matrix_unit(n, i, i));
    }
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sym = CMatrix::zeros(n, n);
            sym.set(i, j, Complex64::new(inv_sqrt2, 0.0));
            sym.set(j, i, Complex64::new(inv_sqrt2, 0.0));
            out.push(sym);
            let mut asym = CMatrix::zeros(n, n);
            asym.set(i, j, Complex64::new(0.0, -inv_sqrt2));
            asym.set(j, i, Complex64::new(0.0, inv_sqrt2));
            out.push(asym);
        }
    }
    out
}

/// Pauli matrices `(σ_x, σ_y, σ_z)`.
pub fn paulis() -> (CMatrix, CMatrix, CMatrix) {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    let sx = CMatrix::new(2, 2, vec![z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)]).unwrap();
    let sy = CMatrix::new(2, 2, vec![z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)]).unwrap();
    let sz = CMatrix::new(2, 2, vec![z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)]).unwrap();
    (sx, sy, sz)
}

/// Swap unitary on `H ⊗ H` for factor dimension `d`.
pub fn swap_unitary(d: usize) -> CMatrix {
    let mut u = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u.set(i * d + j, j * d + i, Complex64::new(1.0, 0.0));
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_identities() {
        let i2 = CMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_block_structure() {
        // |0⟩⟨0| ⊗ σ_x has σ_x in the upper-left block, zeros elsewhere.
        let p0 = CMatrix::matrix_unit(2, 0, 0);
        let (sx, _, _) = paulis();
        let k = kron(&p0, &sx);
        assert_eq!(k.get(0, 1), c(1.0, 0.0));
        assert_eq!(k.get(1, 0), c(1.0, 0.0));
        for r in 2..4 {
            for col in 0..4 {
                assert_eq!(k.get(r, col), c(0.0, 0.0));
                assert_eq!(k.get(col, r), c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn kron_sigma_z_pair() {
        let (_, _, sz) = paulis();
        let k = kron(&sz, &sz);
        let expect = CMatrix::diag(&[1.0, -1.0, -1.0, 1.0]);
        assert!(k.sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_product_state() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let rho_s = CMatrix::new(2, 2, vec![c(0.7, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.)])
            .unwrap();
        let rho_b = CMatrix::new(2, 2, vec![c(0.4, 0.), c(0., 0.1), c(0., -0.1), c(0.6, 0.)])
            .unwrap();
        let joint = kron(&rho_s, &rho_b);
        let red_s = joint.partial_trace_b(dims).unwrap();
        let red_b = joint.partial_trace_s(dims).unwrap();
        assert!(red_s.sub(&rho_s).max_abs() < 1e-14);
        assert!(red_b.sub(&rho_b).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_classical_mixture() {
        // |α|²|00⟩⟨00| + |β|²|11⟩⟨11| reduces to |α|²|0⟩⟨0| + |β|²|1⟩⟨1|.
        let dims = BipartiteDims::new(2, 2).unwrap();
        let (a2, b2) = (0.3, 0.7);
        let mut rho = CMatrix::zeros(4, 4);
        rho.set(0, 0, c(a2, 0.));
        rho.set(3, 3, c(b2, 0.));
        let red = rho.partial_trace_b(dims).unwrap();
        let expect = CMatrix::diag(&[a2, b2]);
        assert!(red.sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_bell_projector() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let mut bell = CMatrix::zeros(4, 1);
        bell.set(0, 0, c(1.0 / 2f64.sqrt(), 0.));
        bell.set(3, 0, c(1.0 / 2f64.sqrt(), 0.));
        let proj = CMatrix::outer(&bell, &bell);
        let red = proj.partial_trace_b(dims).unwrap();
        assert!(red.sub(&CMatrix::identity(2).scale_re(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_s_uniform() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let x = CMatrix::identity(4).scale_re(0.25);
        let red = x.partial_trace_s(dims).unwrap();
        assert!(red.sub(&CMatrix::identity(2).scale_re(0.5)).max_abs() < 1e-15);
    }

    #[test]
    fn partial_trace_swap_evolved() {
        // swap(ρ_S ⊗ ρ_B)swap† traced over the system leaves ρ_B in place of ρ_S.
        let dims = BipartiteDims::new(2, 2).unwrap();
        let rho_s = CMatrix::diag(&[0.2, 0.8]);
        let rho_b = CMatrix::diag(&[0.9, 0.1]);
        let u = swap_unitary(2);
        let evolved = ad(&u, &kron(&rho_s, &rho_b));
        let red_b = evolved.partial_trace_s(dims).unwrap();
        assert!(red_b.sub(&rho_s).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_dimension_mismatch() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let x = CMatrix::identity(4);
        assert!(x.partial_trace_b(dims).is_err());
    }

    #[test]
    fn hs_inner_cases() {
        let i2 = CMatrix::identity(2);
        assert!((hs_inner(&i2, &i2) - c(2.0, 0.0)).norm() < 1e-15);
        let (sx, sy, _) = paulis();
        assert!(hs_inner(&sx, &sy).norm() < 1e-15);
    }

    #[test]
    fn hs_inner_kernel_orthogonality() {
        // ⟨A ⊗ 𝟙, X⟩ = ⟨A, Tr_B X⟩ vanishes when Tr_B X = 0.
        let dims = BipartiteDims::new(2, 2).unwrap();
        let (sx, _, sz) = paulis();
        let x = kron(&sz, &sx); // Tr_B(σ_z ⊗ σ_x) = 0
        assert!(x.partial_trace_b(dims).unwrap().max_abs() < 1e-15);
        let a = CMatrix::new(2, 2, vec![c(0.3, 0.), c(0.2, 0.5), c(0.2, -0.5), c(-1., 0.)])
            .unwrap();
        assert!(hs_inner(&kron(&a, &CMatrix::identity(2)), &x).norm() < 1e-14);
    }

    #[test]
    fn orthonormalize_drops_dependent() {
        let i2 = CMatrix::identity(2);
        let basis = orthonormalize(&[i2.clone(), i2.scale_re(2.0)], RANK_CUT);
        assert_eq!(basis.len(), 1);
        assert!((basis[0].fro_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_keeps_orthogonal_pair() {
        let i2 = CMatrix::identity(2);
        let (_, _, sz) = paulis();
        let basis = orthonormalize(&[i2, sz], RANK_CUT);
        assert_eq!(basis.len(), 2);
        assert!(hs_inner(&basis[0], &basis[1]).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_empty() {
        assert!(orthonormalize(&[], RANK_CUT).is_empty());
    }

    #[test]
    fn hermitian_basis_is_orthonormal() {
        let basis = hermitian_basis(3);
        assert_eq!(basis.len(), 9);
        for (i, a) in basis.iter().enumerate() {
            assert!(a.hermiticity_deviation() < 1e-15);
            for (j, b) in basis.iter().enumerate() {
                let g = hs_inner(a, b);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - c(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = CMatrix::new(2, 2, vec![c(1., 2.), c(0., -1.), c(3.5, 0.), c(0., 0.)]).unwrap();
        let txt = serde_json::to_string(&m).unwrap();
        assert!(txt.contains("\"rows\":2"));
        let back: CMatrix = serde_json::from_str(&txt).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn matrix_rejects_nan() {
        assert!(CMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn hermitian_matrix_validation() {
        let (sx, _, _) = paulis();
        let h = HermitianMatrix::try_new(sx).unwrap();
        assert_eq!(h.dim(), 2);
        let eigs = h.eigh().unwrap().eigenvalues;
        assert!((eigs[0] + 1.0).abs() < 1e-12 && (eigs[1] - 1.0).abs() < 1e-12);
        let skew = CMatrix::new(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        assert!(HermitianMatrix::try_new(skew).is_err());
        assert!(HermitianMatrix::try_new(CMatrix::zeros(2, 3)).is_err());
    }
}
