//! The assignment map `A_V : Tr_B V → V/V₀`: the inverse of the partial
//! trace on the quotient, realized through the canonical section whose
//! representatives are orthogonal to V₀. Also its zero extension and
//! operator-sum representation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::feasibility::{solve, FeasibilityOutcome, SolverCaps, SpanAffine};
use crate::linalg::{eigh, hermitian_span, hs_inner, kron, BipartiteDims, CMatrix};
use crate::opspace::{kernel_decomposition, orthogonal_projection, OperatorSubspace};

/// Linear map `Tr_B V → V/V₀` in the canonical quotient section.
///
/// `source` is an orthonormal basis of `Tr_B V`; `representatives[m]` is
/// the unique preimage of `source[m]` orthogonal to V₀. The map is
/// ℂ-linear, †-linear, and trace-preserving.
#[derive(Debug, Clone)]
pub struct AssignmentMap {
    dims: BipartiteDims,
    source: Vec<CMatrix>,
    representatives: Vec<CMatrix>,
    v0_basis: Vec<CMatrix>,
}

impl AssignmentMap {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Orthonormal basis of the domain `Tr_B V`.
    pub fn source(&self) -> &[CMatrix] {
        &self.source
    }

    pub fn representatives(&self) -> &[CMatrix] {
        &self.representatives
    }

    pub fn v0_basis(&self) -> &[CMatrix] {
        &self.v0_basis
    }

    pub fn dim_domain(&self) -> usize {
        self.source.len()
    }

    /// Matrix of the map in the `source`/`representatives` bases; the
    /// identity by construction of the canonical section.
    pub fn matrix_form(&self) -> CMatrix {
        let m = self.source.len();
        CMatrix::from_fn(m, m, |i, j| {
            let image = self.apply_extended(&self.source[j]);
            // Coefficient of representative_i in the image, using the
            // diagonal Gram of the representatives.
            let g = hs_inner(&self.representatives[i], &self.representatives[i]).re;
            hs_inner(&self.representatives[i], &image) / Complex64::new(g, 0.0)
        })
    }

    pub fn domain_project(&self, x: &CMatrix) -> CMatrix {
        orthogonal_projection(&self.source, x)
    }

    pub fn domain_residual(&self, x: &CMatrix) -> f64 {
        let norm = x.fro_norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.domain_project(x).sub(x).fro_norm() / norm
    }

    /// Apply to `x ∈ Tr_B V`; canonical class representative.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let residual = self.domain_residual(x);
        if residual > 1e-8 {
            return Err(Error::OutsideDomain { residual });
        }
        Ok(self.apply_extended(x))
    }

    /// Zero extension `A ∘ P_{Tr_B V}` on all of `B(H_S)`: agrees with
    /// the assignment on its domain and kills the orthocomplement.
    pub fn apply_extended(&self, x: &CMatrix) -> CMatrix {
        let n = self.dims.total();
        let mut out = CMatrix::zeros(n, n);
        for (s, rep) in self.source.iter().zip(&self.representatives) {
            out = out.add(&rep.scale(hs_inner(s, x)));
        }
        out
    }

    /// Choi-type matrix `Σ_ij Â(E_ij) ⊗ E_ij` of the zero extension, in
    /// the canonical section. Hermitian because the map is †-linear.
    pub fn choi_of_zero_extension(&self) -> CMatrix {
        let ds = self.dims.d_s;
        let n = self.dims.total();
        let mut choi = CMatrix::zeros(n * ds, n * ds);
        for i in 0..ds {
            for j in 0..ds {
                let image = self.apply_extended(&CMatrix::matrix_unit(ds, i, j));
                for p in 0..n {
                    for q in 0..n {
                        let v = image.get(p, q);
                        if v.norm_sqr() != 0.0 {
                            choi.set(p * ds + i, q * ds + j, choi.get(p * ds + i, q * ds + j) + v);
                        }
                    }
                }
            }
        }
        choi.hermitian_part()
    }

    /// Residual of `Tr_B ∘ A − id` over the domain basis.
    pub fn section_residual(&self) -> f64 {
        self.source
            .iter()
            .zip(&self.representatives)
            .map(|(s, rep)| {
                rep.partial_trace_b(self.dims)
                    .map(|r| r.sub(s).max_abs())
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}

/// Build the assignment map from the kernel decomposition of V.
///
/// Representatives are the orthocomplement basis rescaled so each one
/// partial-traces exactly onto its (orthonormalized) reduced image.
pub fn build_assignment(v: &OperatorSubspace) -> Result<AssignmentMap> {
    let kd = kernel_decomposition(v)?;
    let mut source = Vec::with_capacity(kd.reduced_basis.len());
    let mut representatives = Vec::with_capacity(kd.reduced_basis.len());
    for (red, comp) in kd.reduced_basis.iter().zip(&kd.complement_basis) {
        let norm = red.fro_norm();
        if norm <= 1e-12 {
            return Err(Error::SingularState(norm));
        }
        source.push(red.scale_re(1.0 / norm));
        representatives.push(comp.scale_re(1.0 / norm));
    }
    Ok(AssignmentMap {
        dims: v.dims(),
        source,
        representatives,
        v0_basis: kd.v0_basis,
    })
}

/// Operator-sum data `F(X) = Σ_k a_k K_k X K_k†` with real coefficients.
#[derive(Debug, Clone)]
pub struct OSRData {
    pub coefficients: Vec<f64>,
    pub operators: Vec<CMatrix>,
}

impl OSRData {
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let rows = self.operators.first().map(|k| k.rows()).unwrap_or(0);
        let mut out = CMatrix::zeros(rows, rows);
        for (a, k) in self.coefficients.iter().zip(&self.operators) {
            out = out.add(&k.matmul(x).matmul(&k.adjoint()).scale_re(*a));
        }
        out
    }

    pub fn min_coefficient(&self) -> f64 {
        self.coefficients.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Kraus form with coefficients absorbed; only valid when every
    /// coefficient is nonnegative.
    pub fn kraus_operators(&self) -> Option<Vec<CMatrix>> {
        if self.min_coefficient() < -1e-9 {
            return None;
        }
        Some(
            self.coefficients
                .iter()
                .zip(&self.operators)
                .map(|(a, k)| k.scale_re(a.max(0.0).sqrt()))
                .collect(),
        )
    }
}

/// Eigendecompose a Choi-type matrix into OSR data, reshaping each
/// eigenvector of `H_out ⊗ H_in` into an operator `H_in → H_out`.
pub fn osr_from_choi(choi: &CMatrix, d_out: usize, d_in: usize) -> Result<OSRData> {
    if choi.rows() != d_out * d_in || !choi.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "Choi matrix is {}x{}, expected {}",
            choi.rows(),
            choi.cols(),
            d_out * d_in
        )));
    }
    let dec = eigh(choi)?;
    let scale = dec
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut coefficients = Vec::new();
    let mut operators = Vec::new();
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        if lam.abs() <= 1e-12 * scale {
            continue;
        }
        let op = CMatrix::from_fn(d_out, d_in, |p, i| dec.eigenvectors.get(p * d_in + i, k));
        coefficients.push(lam);
        operators.push(op);
    }
    Ok(OSRData {
        coefficients,
        operators,
    })
}

/// OSR of the zero-extended assignment map.
///
/// The Choi-type matrix is class-valued; a feasibility search first looks
/// for a PSD element of the class `M + V₀ ⊗ B(H_S)`, falling back to the
/// canonical representative. The choice moves coefficients around but
/// every verdict downstream is quotient-invariant.
pub fn assignment_osr(a: &AssignmentMap, caps: SolverCaps) -> Result<OSRData> {
    let canonical = a.choi_of_zero_extension();
    let ds = a.dims().d_s;
    let n = a.dims().total();
    let choi = match psd_class_element(&canonical, a.v0_basis(), ds, caps) {
        Some(psd) => psd,
        None => canonical,
    };
    osr_from_choi(&choi, n, ds)
}

/// Search the affine class `offset + V₀ ⊗ B(H_W)` for a PSD element.
pub fn psd_class_element(
    offset: &CMatrix,
    v0_basis: &[CMatrix],
    d_witness: usize,
    caps: SolverCaps,
) -> Option<CMatrix> {
    if v0_basis.is_empty() {
        let (min_eig, _) = crate::linalg::min_eigenvalue(offset).ok()?;
        return if min_eig >= -1e-9 {
            Some(offset.clone())
        } else {
            None
        };
    }
    let mut directions = Vec::new();
    for k in v0_basis {
        for i in 0..d_witness {
            for j in 0..d_witness {
                directions.push(kron(k, &CMatrix::matrix_unit(d_witness, i, j)));
            }
        }
    }
    let herm = hermitian_span(&directions);
    let affine = SpanAffine::new(offset.clone(), &herm, &[]).ok()?;
    match solve(&affine, Some(offset.clone()), caps) {
        FeasibilityOutcome::Feasible(x) => Some(x),
        _ => None,
    }
}

/// Verdict of the class-PSD search, distinguishing a numerically
/// certified "no PSD element" from an inconclusive run.
pub fn psd_class_search(
    offset: &CMatrix,
    v0_basis: &[CMatrix],
    d_witness: usize,
    caps: SolverCaps,
) -> FeasibilityOutcome {
    if v0_basis.is_empty() {
        let min = crate::linalg::min_eigenvalue(offset);
        return match min {
            Ok((min_eig, v)) => {
                if min_eig >= -1e-9 {
                    FeasibilityOutcome::Feasible(offset.clone())
                } else {
                    FeasibilityOutcome::InfeasibleNumerically {
                        residual: -min_eig,
                        dual_witness: CMatrix::outer(&v, &v),
                    }
                }
            }
            Err(_) => FeasibilityOutcome::Undetermined { residual: f64::NAN },
        };
    }
    let mut directions = Vec::new();
    for k in v0_basis {
        for i in 0..d_witness {
            for j in 0..d_witness {
                directions.push(kron(k, &CMatrix::matrix_unit(d_witness, i, j)));
            }
        }
    }
    let herm = hermitian_span(&directions);
    match SpanAffine::new(offset.clone(), &herm, &[]) {
        Ok(affine) => solve(&affine, Some(offset.clone()), caps),
        Err(_) => FeasibilityOutcome::Undetermined { residual: f64::NAN },
    }
}
