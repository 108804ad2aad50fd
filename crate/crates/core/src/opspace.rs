//! Operator subspaces `V ⊂ B(H_S ⊗ H_B)`: construction from generators,
//! the kernel `V₀ = ker(Tr_B|_V)`, quotient representatives, orthogonal
//! projections, and the state-spanned check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::{solve, FeasibilityOutcome, SolverCaps, SpanAffine};
use crate::linalg::{
    eigh, hermitian_span, hs_inner, min_eigenvalue, orthonormalize, BipartiteDims, CMatrix,
    RANK_CUT,
};
use num_complex::Complex64;

/// Result of the state-spanned check. `Verified` carries dim(V) linearly
/// independent density matrices inside V; `Refuted` carries a certified
/// obstruction; the search may also exhaust its budget inconclusively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSpannedStatus {
    Verified,
    Refuted,
    Undetermined,
}

/// Self-adjoint operator subspace with an orthonormal basis under the
/// Hilbert–Schmidt inner product. Immutable after construction.
#[derive(Debug, Clone)]
pub struct OperatorSubspace {
    dims: BipartiteDims,
    basis: Vec<CMatrix>,
    generators: Vec<CMatrix>,
}

impl OperatorSubspace {
    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &CMatrix) -> CMatrix {
        orthogonal_projection(&self.basis, x)
    }

    /// Distance from `x` to the subspace, relative to `‖x‖`.
    pub fn membership_residual(&self, x: &CMatrix) -> f64 {
        let norm = x.fro_norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.project(x).sub(x).fro_norm() / norm
    }

    pub fn contains(&self, x: &CMatrix, tol: f64) -> bool {
        self.membership_residual(x) <= tol
    }

    /// Max residual of basis adjoints against the span; zero for a
    /// self-adjoint subspace.
    pub fn self_adjointness_residual(&self) -> f64 {
        self.basis
            .iter()
            .map(|b| self.membership_residual(&b.adjoint()))
            .fold(0.0, f64::max)
    }
}

/// Span the generators together with their adjoints and orthonormalize.
pub fn build_subspace(generators: &[CMatrix], dims: BipartiteDims) -> Result<OperatorSubspace> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let n = dims.total();
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, ambient dimension is {}",
                g.rows(),
                g.cols(),
                n
            )));
        }
    }
    let mut family: Vec<CMatrix> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        family.push(g.clone());
        family.push(g.adjoint());
    }
    let basis = orthonormalize(&family, RANK_CUT);
    Ok(OperatorSubspace {
        dims,
        basis,
        generators: generators.to_vec(),
    })
}

/// Split of a subspace into `V₀ = ker(Tr_B|_V)` and its orthocomplement,
/// whose reduced images form a basis of `Tr_B V`.
#[derive(Debug, Clone)]
pub struct KernelDecomposition {
    pub v0_basis: Vec<CMatrix>,
    pub complement_basis: Vec<CMatrix>,
    /// `Tr_B` images of `complement_basis`; linearly independent.
    pub reduced_basis: Vec<CMatrix>,
    pub dims: BipartiteDims,
}

impl KernelDecomposition {
    pub fn dim_v0(&self) -> usize {
        self.v0_basis.len()
    }

    pub fn dim_reduced(&self) -> usize {
        self.reduced_basis.len()
    }
}

/// Eigenvalue cut separating the numerical kernel of the reduced Gram
/// matrix from genuine directions. Exact kernels land near machine
/// epsilon; desk-scale non-kernel eigenvalues stay above ~1e-3.
const KERNEL_GRAM_CUT: f64 = 1e-12;

pub fn kernel_decomposition(v: &OperatorSubspace) -> Result<KernelDecomposition> {
    let m = v.dim();
    let reduced: Vec<CMatrix> = v
        .basis
        .iter()
        .map(|b| b.partial_trace_b(v.dims))
        .collect::<Result<_>>()?;

    // Gram matrix of the reduced images in the orthonormal basis of V.
    let gram = CMatrix::from_fn(m, m, |i, j| hs_inner(&reduced[i], &reduced[j]));
    let dec = eigh(&gram)?;
    let lam_max = dec.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    let cut = KERNEL_GRAM_CUT * lam_max;

    let combine = |coeffs: &CMatrix, col: usize| -> CMatrix {
        let mut out = CMatrix::zeros(v.dims.total(), v.dims.total());
        for (k, b) in v.basis.iter().enumerate() {
            out = out.add(&b.scale(coeffs.get(k, col)));
        }
        out
    };

    let mut v0_basis = Vec::new();
    let mut complement_basis = Vec::new();
    let mut reduced_basis = Vec::new();
    for (idx, &lam) in dec.eigenvalues.iter().enumerate() {
        let element = combine(&dec.eigenvectors, idx);
        if lam <= cut {
            v0_basis.push(element);
        } else {
            reduced_basis.push(element.partial_trace_b(v.dims)?);
            complement_basis.push(element);
        }
    }
    Ok(KernelDecomposition {
        v0_basis,
        complement_basis,
        reduced_basis,
        dims: v.dims,
    })
}

/// `P(X) = Σ_m ⟨B_m, X⟩ B_m` for an orthonormal family.
pub fn orthogonal_projection(space: &[CMatrix], x: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(x.rows(), x.cols());
    for b in space {
        assert_eq!(
            (b.rows(), b.cols()),
            (x.rows(), x.cols()),
            "projection shape mismatch"
        );
        out = out.add(&b.scale(hs_inner(b, x)));
    }
    out
}

/// Budget for the state-spanned search.
#[derive(Debug, Clone, Copy)]
pub struct StateSearchBudget {
    /// Initial hyperplane offset; halved on failure.
    pub delta: f64,
    pub halvings: usize,
    pub caps: SolverCaps,
}

impl Default for StateSearchBudget {
    fn default() -> Self {
        Self {
            delta: 0.1,
            halvings: 6,
            caps: SolverCaps::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StateSpannedReport {
    pub status: StateSpannedStatus,
    /// Density matrices found inside V; spans V when Verified.
    pub states: Vec<CMatrix>,
    /// Certified obstruction direction when Refuted.
    pub refutation: Option<CMatrix>,
}

/// Decide whether `Span_ℂ(D_SB ∩ V) = V`.
///
/// Verified requires dim(V) linearly independent density matrices inside
/// V. Refuted is emitted only on the exact certificate that every element
/// of V is traceless (no unit-trace element exists). Anything else is
/// Undetermined: the search grows a span of states greedily, hunting a
/// state with a component along each missing direction via feasibility
/// on `{X ∈ V, X ⪰ 0, Tr X = 1, ⟨W, X⟩ = ±δ}` with δ halved on failure.
pub fn check_state_spanned(v: &OperatorSubspace, budget: &StateSearchBudget) -> StateSpannedReport {
    let dim = v.dim();
    if dim == 0 {
        return StateSpannedReport {
            status: StateSpannedStatus::Refuted,
            states: Vec::new(),
            refutation: None,
        };
    }

    // Traceless certificate: states have unit trace, so a subspace of
    // traceless operators cannot contain any.
    let max_trace = v
        .basis
        .iter()
        .map(|b| b.trace().norm())
        .fold(0.0, f64::max);
    if max_trace <= 1e-9 {
        return StateSpannedReport {
            status: StateSpannedStatus::Refuted,
            states: Vec::new(),
            refutation: Some(v.basis[0].clone()),
        };
    }

    let mut states: Vec<CMatrix> = Vec::new();
    let mut span: Vec<CMatrix> = Vec::new();
    let absorb = |x: &CMatrix, states: &mut Vec<CMatrix>, span: &mut Vec<CMatrix>| -> bool {
        let mut w = x.clone();
        for b in span.iter() {
            let c = hs_inner(b, &w);
            w = w.sub(&b.scale(c));
        }
        let norm = w.fro_norm();
        if norm > 1e-7 * x.fro_norm().max(1.0) {
            span.push(w.scale_re(1.0 / norm));
            states.push(x.clone());
            true
        } else {
            false
        }
    };

    // Harvest candidate states from the generators and the projected
    // maximally mixed operator.
    let n = v.dims.total();
    let mut candidates: Vec<CMatrix> = Vec::new();
    for g in &v.generators {
        candidates.push(g.hermitian_part());
    }
    candidates.push(v.project(&CMatrix::identity(n).scale_re(1.0 / n as f64)).hermitian_part());
    for cand in candidates {
        let t = cand.trace().re;
        if t.abs() < 1e-6 {
            continue;
        }
        let normed = cand.scale_re(1.0 / t);
        if v.membership_residual(&normed) > 1e-9 {
            continue;
        }
        if let Ok((min_eig, _)) = min_eigenvalue(&normed) {
            if min_eig >= -1e-9 {
                absorb(&normed, &mut states, &mut span);
            }
        }
    }

    // Feasibility growth along directions orthogonal to the found states.
    let herm_dirs = hermitian_span(&v.basis);
    let trace_constraint = (CMatrix::identity(n), Complex64::new(1.0, 0.0));
    let mut stalled = false;
    while span.len() < dim && !stalled {
        // A Hermitian direction of V outside the current state span.
        let mut direction: Option<CMatrix> = None;
        for b in &v.basis {
            for h in [b.hermitian_part(), b.sub(&b.adjoint()).scale(Complex64::new(0.0, 0.5))] {
                let resid = h.sub(&orthogonal_projection(&span, &h));
                if resid.fro_norm() > 1e-7 {
                    let herm_resid = resid.hermitian_part();
                    if herm_resid.fro_norm() > 1e-9 {
                        direction = Some(herm_resid.scale_re(1.0 / herm_resid.fro_norm()));
                        break;
                    }
                }
            }
            if direction.is_some() {
                break;
            }
        }
        let Some(w) = direction else {
            break;
        };

        let mut found = false;
        let mut delta = budget.delta;
        'search: for _ in 0..=budget.halvings {
            for sign in [1.0, -1.0] {
                let affine = match SpanAffine::new(
                    CMatrix::zeros(n, n),
                    &herm_dirs,
                    &[
                        trace_constraint.clone(),
                        (w.clone(), Complex64::new(sign * delta, 0.0)),
                    ],
                ) {
                    Ok(a) => a,
                    Err(_) => continue,
                };
                if let FeasibilityOutcome::Feasible(x) = solve(&affine, None, budget.caps) {
                    if v.membership_residual(&x) <= 1e-9 && absorb(&x, &mut states, &mut span) {
                        found = true;
                        break 'search;
                    }
                }
            }
            delta *= 0.5;
        }
        if !found {
            stalled = true;
        }
    }

    let status = if span.len() == dim {
        StateSpannedStatus::Verified
    } else {
        StateSpannedStatus::Undetermined
    };
    StateSpannedReport {
        status,
        states,
        refutation: None,
    }
}
