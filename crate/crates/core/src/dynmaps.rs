//! Subsystem dynamical maps `Ψ_U = Tr_B ∘ Ad_U ∘ A_V` on `Tr_B V`, their
//! Choi matrices, operator-sum representations, and physical-domain
//! membership queries.

use num_complex::Complex64;
use serde::Serialize;

use crate::assignment::{osr_from_choi, AssignmentMap, OSRData};
use crate::error::{Error, Result};
use crate::feasibility::{solve, FeasibilityOutcome, SolverCaps, SpanAffine};
use crate::linalg::{ad, hermitian_basis, hermitian_span, hs_inner, kron, min_eigenvalue, BipartiteDims, CMatrix};
use crate::opspace::OperatorSubspace;

/// `Ψ_U` evaluated on an orthonormal basis of `Tr_B V`, together with the
/// Choi matrix of its zero extension `Ψ_U ∘ P`.
#[derive(Debug, Clone)]
pub struct DynamicalMap {
    dims: BipartiteDims,
    unitary: CMatrix,
    domain_basis: Vec<CMatrix>,
    images: Vec<CMatrix>,
    choi_zero_ext: CMatrix,
}

impl DynamicalMap {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn domain_basis(&self) -> &[CMatrix] {
        &self.domain_basis
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    /// Choi matrix `Σ_ij (Ψ∘P)(E_ij) ⊗ E_ij` of the zero extension.
    pub fn choi_matrix(&self) -> &CMatrix {
        &self.choi_zero_ext
    }

    pub fn domain_residual(&self, x: &CMatrix) -> f64 {
        let norm = x.fro_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let proj = crate::opspace::orthogonal_projection(&self.domain_basis, x);
        proj.sub(x).fro_norm() / norm
    }

    /// Apply to `x ∈ Tr_B V`. Evaluation outside the domain is refused:
    /// there the map carries no meaning.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let residual = self.domain_residual(x);
        if residual > 1e-8 {
            return Err(Error::OutsideDomain { residual });
        }
        Ok(self.apply_extended(x))
    }

    /// The zero extension `Ψ ∘ P` on all of `B(H_S)`.
    pub fn apply_extended(&self, x: &CMatrix) -> CMatrix {
        let ds = self.dims.d_s;
        let mut out = CMatrix::zeros(ds, ds);
        for (b, img) in self.domain_basis.iter().zip(&self.images) {
            out = out.add(&img.scale(hs_inner(b, x)));
        }
        out
    }

    /// Apply-from-Choi round trip `F(X) = Σ_ij X_ij · C[(·,i),(·,j)]`.
    pub fn apply_from_choi(&self, x: &CMatrix) -> CMatrix {
        apply_from_choi(&self.choi_zero_ext, x, self.dims.d_s)
    }
}

/// Evaluate a map from its Choi matrix under the `Σ F(E_ij) ⊗ E_ij`
/// convention: `F(X)[p,q] = Σ_ij C[(p,i),(q,j)] X[i,j]`.
pub fn apply_from_choi(choi: &CMatrix, x: &CMatrix, d_in: usize) -> CMatrix {
    let d_out = choi.rows() / d_in;
    CMatrix::from_fn(d_out, d_out, |p, q| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d_in {
            for j in 0..d_in {
                let xv = x.get(i, j);
                if xv.norm_sqr() != 0.0 {
                    acc += choi.get(p * d_in + i, q * d_in + j) * xv;
                }
            }
        }
        acc
    })
}

/// Choi matrix `Σ_ij F(E_ij) ⊗ E_ij` of a map given entrywise.
pub fn choi_of_map(d_in: usize, d_out: usize, mut f: impl FnMut(usize, usize) -> CMatrix) -> CMatrix {
    let mut choi = CMatrix::zeros(d_out * d_in, d_out * d_in);
    for i in 0..d_in {
        for j in 0..d_in {
            let image = f(i, j);
            for p in 0..d_out {
                for q in 0..d_out {
                    let v = image.get(p, q);
                    if v.norm_sqr() != 0.0 {
                        choi.set(p * d_in + i, q * d_in + j, v);
                    }
                }
            }
        }
    }
    choi
}

/// Build `Ψ_U` from an assignment map and a joint unitary.
///
/// Refuses when the subspace is not U-consistent: the push-through of
/// `Ad_U` to the quotient is then ill-defined and no dynamical map
/// exists.
pub fn build_dynamical_map(a: &AssignmentMap, u: &CMatrix) -> Result<DynamicalMap> {
    let dims = a.dims();
    if u.rows() != dims.total() || u.cols() != dims.total() {
        return Err(Error::DimensionMismatch(
            "unitary dimension does not match the subspace".into(),
        ));
    }
    u.check_unitary()?;
    for x in a.v0_basis() {
        let norm = ad(u, x).partial_trace_b(dims)?.fro_norm();
        if norm > 1e-9 {
            return Err(Error::Inconsistent(format!(
                "kernel element escapes ker Tr_B under U (norm {norm:.3e})"
            )));
        }
    }

    let domain_basis: Vec<CMatrix> = a.source().to_vec();
    let images: Vec<CMatrix> = a
        .representatives()
        .iter()
        .map(|rep| ad(u, rep).partial_trace_b(dims))
        .collect::<Result<_>>()?;

    let ds = dims.d_s;
    let choi = choi_of_map(ds, ds, |i, j| {
        let e = CMatrix::matrix_unit(ds, i, j);
        let mut out = CMatrix::zeros(ds, ds);
        for (b, img) in domain_basis.iter().zip(&images) {
            out = out.add(&img.scale(hs_inner(b, &e)));
        }
        out
    })
    .hermitian_part();

    Ok(DynamicalMap {
        dims,
        unitary: u.clone(),
        domain_basis,
        images,
        choi_zero_ext: choi,
    })
}

/// OSR of the zero extension from the Choi spectrum. All coefficients
/// nonnegative exactly when the zero extension is CP.
pub fn dynmap_osr(psi: &DynamicalMap) -> Result<OSRData> {
    osr_from_choi(&psi.choi_zero_ext, psi.dims.d_s, psi.dims.d_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainVerdict {
    Inside,
    Outside,
    Undetermined,
}

/// Result of a physical-domain membership query.
#[derive(Debug, Clone)]
pub struct PhysicalDomainQuery {
    pub verdict: DomainVerdict,
    /// Joint state in `V ∩ D_SB` reducing to the query when Inside.
    pub certificate: Option<CMatrix>,
    pub residual: f64,
}

/// Membership of `rho_s` in the physical domain `Tr_B(D_SB ∩ V)`.
///
/// The query state must be a state; non-states are malformed input.
/// Membership is a feasibility search over `{X ∈ V, X ⪰ 0, Tr_B X = rho_s}`.
pub fn physical_domain_membership(
    v: &OperatorSubspace,
    rho_s: &CMatrix,
    caps: SolverCaps,
) -> Result<PhysicalDomainQuery> {
    let dims = v.dims();
    let ds = dims.d_s;
    if rho_s.rows() != ds || rho_s.cols() != ds {
        return Err(Error::MalformedState(format!(
            "expected {ds}x{ds} system state"
        )));
    }
    if rho_s.hermiticity_deviation() > 1e-8 {
        return Err(Error::MalformedState("state is not Hermitian".into()));
    }
    if (rho_s.trace().re - 1.0).abs() > 1e-8 {
        return Err(Error::MalformedState("state trace is not 1".into()));
    }
    let (min_eig, _) = min_eigenvalue(&rho_s.hermitian_part())?;
    if min_eig < -1e-8 {
        return Err(Error::MalformedState(format!(
            "state has negative eigenvalue {min_eig:.3e}"
        )));
    }

    // Outside Tr_B V outright?
    let kd = crate::opspace::kernel_decomposition(v)?;
    let reduced_onb = crate::linalg::orthonormalize(&kd.reduced_basis, 1e-10);
    let proj = crate::opspace::orthogonal_projection(&reduced_onb, rho_s);
    let resid = proj.sub(rho_s).fro_norm();
    if resid > 1e-8 {
        return Ok(PhysicalDomainQuery {
            verdict: DomainVerdict::Outside,
            certificate: None,
            residual: resid,
        });
    }

    // Feasibility over V: X ⪰ 0 with Tr_B X = rho_s, expressed through
    // Hermitian functionals F_j ⊗ 𝟙.
    let n = dims.total();
    let herm_dirs = hermitian_span(v.basis());
    let mut constraints = Vec::new();
    for f in hermitian_basis(ds) {
        let target = hs_inner(&f, rho_s);
        constraints.push((kron(&f, &CMatrix::identity(dims.d_b)), target));
    }
    let affine = SpanAffine::new(CMatrix::zeros(n, n), &herm_dirs, &constraints)?;
    let start = build_start(&kd, rho_s, dims);
    match solve(&affine, start, caps) {
        FeasibilityOutcome::Feasible(x) => {
            let back = x.partial_trace_b(dims)?;
            let reduce_err = back.sub(rho_s).max_abs();
            if reduce_err <= 1e-8 && v.membership_residual(&x) <= 1e-9 {
                Ok(PhysicalDomainQuery {
                    verdict: DomainVerdict::Inside,
                    certificate: Some(x),
                    residual: reduce_err,
                })
            } else {
                Ok(PhysicalDomainQuery {
                    verdict: DomainVerdict::Undetermined,
                    certificate: Some(x),
                    residual: reduce_err,
                })
            }
        }
        FeasibilityOutcome::InfeasibleNumerically { residual, .. } => Ok(PhysicalDomainQuery {
            verdict: DomainVerdict::Outside,
            certificate: None,
            residual,
        }),
        FeasibilityOutcome::Undetermined { residual } => Ok(PhysicalDomainQuery {
            verdict: DomainVerdict::Undetermined,
            certificate: None,
            residual,
        }),
    }
}

/// Warm start: the canonical preimage of `rho_s` under the assignment.
fn build_start(
    kd: &crate::opspace::KernelDecomposition,
    rho_s: &CMatrix,
    dims: BipartiteDims,
) -> Option<CMatrix> {
    let mut out = CMatrix::zeros(dims.total(), dims.total());
    for (red, comp) in kd.reduced_basis.iter().zip(&kd.complement_basis) {
        let g = hs_inner(red, red).re;
        if g <= 1e-14 {
            return None;
        }
        let c = hs_inner(red, rho_s) / Complex64::new(g, 0.0);
        out = out.add(&comp.scale(c));
    }
    Some(out)
}
