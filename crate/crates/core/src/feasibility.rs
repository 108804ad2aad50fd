//! Projection-based convex feasibility: Dykstra-corrected alternating
//! projections between the PSD cone and an affine set of Hermitian
//! matrices. No external solver; the PSD projection is eigenvalue
//! clipping and affine projections are closed-form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hs_inner, orthonormalize_real, psd_project, CMatrix};

/// Outcome of a feasibility run.
#[derive(Debug, Clone)]
pub enum FeasibilityOutcome {
    /// A point satisfying the affine constraints exactly (to working
    /// precision) and the cone constraint within eigenvalue −1e-9.
    Feasible(CMatrix),
    /// The alternating residual plateaued well above tolerance; the dual
    /// witness is the normalized gap direction between the two sets.
    InfeasibleNumerically { residual: f64, dual_witness: CMatrix },
    /// Iteration cap reached without a verdict.
    Undetermined { residual: f64 },
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityOutcome::Feasible(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, FeasibilityOutcome::InfeasibleNumerically { .. })
    }
}

/// Iteration limits and tolerances for the solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverCaps {
    pub iteration_cap: usize,
    pub tolerance: f64,
    /// Consecutive non-improving iterations that establish a plateau.
    pub plateau_window: usize,
}

impl Default for SolverCaps {
    fn default() -> Self {
        Self {
            iteration_cap: 6000,
            tolerance: 1e-9,
            plateau_window: 500,
        }
    }
}

impl SolverCaps {
    pub fn fast() -> Self {
        Self {
            iteration_cap: 1500,
            tolerance: 1e-9,
            plateau_window: 300,
        }
    }
}

/// An affine set of Hermitian matrices with a closed-form projection.
pub trait AffineSet {
    fn project(&self, x: &CMatrix) -> CMatrix;
    /// Side of the ambient Hermitian matrices this set lives in.
    fn ambient_dim(&self) -> usize;
    /// True when the set is a single point; the solve then degenerates
    /// to one eigenvalue check.
    fn is_singleton(&self) -> bool {
        false
    }
    /// Detected inconsistency of the constraints (empty set), with the
    /// least-squares residual.
    fn inconsistency(&self) -> Option<f64> {
        None
    }
}

/// Affine set `{offset + Σ x_i H_i : A x = b}` inside the real span of an
/// orthonormal Hermitian family `{H_i}`.
pub struct SpanAffine {
    offset: CMatrix,
    basis: Vec<CMatrix>,
    /// Orthonormalized constraint rows over the span coefficients.
    rows: Vec<Vec<f64>>,
    targets: Vec<f64>,
    inconsistency: Option<f64>,
    singleton: bool,
}

impl SpanAffine {
    /// Build from an offset, a Hermitian family spanning the variable
    /// directions (orthonormalized here), and complex linear constraints
    /// `⟨M, X⟩ = c` on the full variable `X`.
    pub fn new(
        offset: CMatrix,
        directions: &[CMatrix],
        constraints: &[(CMatrix, Complex64)],
    ) -> Result<Self> {
        let n = offset.rows();
        if !offset.is_square() {
            return Err(Error::DimensionMismatch("affine offset must be square".into()));
        }
        for d in directions {
            if d.rows() != n || d.cols() != n {
                return Err(Error::DimensionMismatch(
                    "affine directions must match the offset shape".into(),
                ));
            }
        }
        let basis = orthonormalize_real(
            &directions.iter().map(|d| d.hermitian_part()).collect::<Vec<_>>(),
            1e-12,
        );
        let m = basis.len();

        // Each complex constraint ⟨M, X⟩ = c splits into two real rows in
        // coefficient space, shifted by the offset contribution.
        let mut raw_rows: Vec<Vec<f64>> = Vec::new();
        let mut raw_targets: Vec<f64> = Vec::new();
        for (mat, c) in constraints {
            if mat.rows() != n || mat.cols() != n {
                return Err(Error::DimensionMismatch(
                    "constraint functional dimension mismatch".into(),
                ));
            }
            let shift = hs_inner(mat, &offset);
            let coeffs: Vec<Complex64> = basis.iter().map(|h| hs_inner(mat, h)).collect();
            raw_rows.push(coeffs.iter().map(|z| z.re).collect());
            raw_targets.push((c - shift).re);
            raw_rows.push(coeffs.iter().map(|z| z.im).collect());
            raw_targets.push((c - shift).im);
        }

        // Orthonormalize the rows (targets transform alongside) and
        // detect inconsistent constraints: a zero row with nonzero target.
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut targets: Vec<f64> = Vec::new();
        let mut inconsistency: Option<f64> = None;
        let scale = raw_rows
            .iter()
            .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(1.0f64, f64::max);
        for (row, mut t) in raw_rows.into_iter().zip(raw_targets) {
            let mut v = row;
            for _pass in 0..2 {
                for (q, bt) in rows.iter().zip(&targets) {
                    let dot: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= dot * qi;
                    }
                    t -= dot * bt;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 * scale {
                for vi in v.iter_mut() {
                    *vi /= norm;
                }
                rows.push(v);
                targets.push(t / norm);
            } else if t.abs() > 1e-8 * scale.max(1.0) {
                let bad = t.abs();
                inconsistency = Some(inconsistency.map_or(bad, |prev: f64| prev.max(bad)));
            }
        }

        let singleton = rows.len() == m;
        Ok(Self {
            offset,
            basis,
            rows,
            targets,
            inconsistency,
            singleton,
        })
    }

    fn coefficients(&self, x: &CMatrix) -> Vec<f64> {
        let shifted = x.sub(&self.offset);
        self.basis.iter().map(|h| hs_inner(h, &shifted).re).collect()
    }

    fn lift(&self, coeffs: &[f64]) -> CMatrix {
        let mut out = self.offset.clone();
        for (c, h) in coeffs.iter().zip(&self.basis) {
            if *c != 0.0 {
                out = out.add(&h.scale_re(*c));
            }
        }
        out
    }
}

impl AffineSet for SpanAffine {
    fn project(&self, x: &CMatrix) -> CMatrix {
        let mut coeffs = self.coefficients(x);
        for (row, t) in self.rows.iter().zip(&self.targets) {
            let dot: f64 = row.iter().zip(&coeffs).map(|(a, b)| a * b).sum();
            let corr = dot - t;
            for (ci, ri) in coeffs.iter_mut().zip(row) {
                *ci -= corr * ri;
            }
        }
        self.lift(&coeffs)
    }

    fn ambient_dim(&self) -> usize {
        self.offset.rows()
    }

    fn is_singleton(&self) -> bool {
        self.singleton
    }

    fn inconsistency(&self) -> Option<f64> {
        self.inconsistency
    }
}

/// Solve the feasibility problem `affine ∩ PSD` by alternating
/// projections with a Dykstra correction on the cone side.
pub fn solve(affine: &dyn AffineSet, start: Option<CMatrix>, caps: SolverCaps) -> FeasibilityOutcome {
    if let Some(res) = affine.inconsistency() {
        let n = affine.ambient_dim();
        return FeasibilityOutcome::InfeasibleNumerically {
            residual: res,
            dual_witness: CMatrix::identity(n),
        };
    }

    let n = affine.ambient_dim();
    let x0 = start.unwrap_or_else(|| CMatrix::zeros(n, n));
    let mut x = affine.project(&x0.hermitian_part());

    if affine.is_singleton() {
        return check_point(&x, caps);
    }

    let mut correction = CMatrix::zeros(n, n);
    let mut best = f64::INFINITY;
    let mut stale = 0usize;
    let scale = x.fro_norm().max(1.0);

    for _iter in 0..caps.iteration_cap {
        let y = affine.project(&x);
        let shifted = y.add(&correction).hermitian_part();
        let z = match psd_project(&shifted) {
            Ok(z) => z,
            Err(_) => {
                return FeasibilityOutcome::Undetermined { residual: f64::NAN };
            }
        };
        correction = shifted.sub(&z);
        let gap = y.sub(&z);
        let residual = gap.fro_norm() / scale;

        // Convergence of the residual does not yet pin the affine-side
        // eigenvalue floor when the intersection touches the cone
        // boundary; keep iterating until the certificate itself holds.
        if residual <= caps.tolerance {
            if let Ok((min_eig, _)) = crate::linalg::min_eigenvalue(&y) {
                if min_eig >= -1e-9 {
                    return FeasibilityOutcome::Feasible(y);
                }
            }
        }
        if residual < best * 0.99 {
            best = residual;
            stale = 0;
        } else {
            stale += 1;
            if stale >= caps.plateau_window && residual > 10.0 * caps.tolerance {
                let norm = gap.fro_norm();
                return FeasibilityOutcome::InfeasibleNumerically {
                    residual,
                    dual_witness: gap.scale_re(1.0 / norm.max(1e-300)),
                };
            }
        }
        x = z;
    }
    let y = affine.project(&x);
    let residual = y.sub(&x).fro_norm() / scale;
    check_final(&y, residual, caps)
}

fn check_final(y: &CMatrix, residual: f64, caps: SolverCaps) -> FeasibilityOutcome {
    if residual <= caps.tolerance {
        if let Ok((min_eig, _)) = crate::linalg::min_eigenvalue(&y.hermitian_part()) {
            if min_eig >= -1e-9 {
                return FeasibilityOutcome::Feasible(y.hermitian_part());
            }
        }
    }
    FeasibilityOutcome::Undetermined { residual }
}

fn check_point(y: &CMatrix, caps: SolverCaps) -> FeasibilityOutcome {
    match crate::linalg::min_eigenvalue(&y.hermitian_part()) {
        Ok((min_eig, v)) => {
            if min_eig >= -1e-9 {
                FeasibilityOutcome::Feasible(y.hermitian_part())
            } else if min_eig < -(10.0 * caps.tolerance) {
                FeasibilityOutcome::InfeasibleNumerically {
                    residual: -min_eig,
                    dual_witness: CMatrix::outer(&v, &v),
                }
            } else {
                FeasibilityOutcome::Undetermined { residual: -min_eig }
            }
        }
        Err(_) => FeasibilityOutcome::Undetermined { residual: f64::NAN },
    }
}
