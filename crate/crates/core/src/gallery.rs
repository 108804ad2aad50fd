//! Parameterized constructors for the example families from the
//! completely-positive-dynamics literature (Kraus, Pechukas, Alicki,
//! Štelmachovič–Bužek, Jordan–Shaji–Sudarshan, Carteret–Terno–Życzkowski,
//! Rodríguez-Rosario, Shabani–Lidar, Brodutch, Buscemi), plus entropy
//! utilities for the Buscemi construction. These cases anchor the
//! regression suite: every expectation recorded here is re-derived by
//! the analysis pipeline and compared.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::consistency::SemigroupSpec;
use crate::cpclass::Verdict3;
use crate::error::{Error, Result};
use crate::linalg::{
    eigh, hs_inner, kron, min_eigenvalue, orthonormalize, paulis, swap_unitary, BipartiteDims,
    CMatrix,
};
use crate::opspace::{
    build_subspace, check_state_spanned, OperatorSubspace, StateSearchBudget, StateSpannedStatus,
};
use crate::random::Sampler;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Geometry of the physical domain when a closed form is known.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainExpectation {
    /// Every system state is covered.
    AllStates,
    /// Bloch ball of the given radius around 𝟙/2 (qubit system).
    BlochBall { radius: f64 },
    /// A segment: one state on the boundary of the domain, one state in
    /// `D_S ∩ Tr_B V` but outside the domain.
    Segment {
        inside_end: CMatrix,
        outside_state: CMatrix,
    },
}

/// Machine-checkable expectations attached to a gallery case, with a
/// short note on where each record comes from.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Expectations {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_v: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_v0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_reduced: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_spanned: Option<StateSpannedStatus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment_positive: Option<Verdict3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment_cp: Option<Verdict3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignment_cpze: Option<Verdict3>,
    /// Verdict for the distinguished unitary when one is attached.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynmap_cp: Option<Verdict3>,
    /// Verdicts expected for every sampled Haar unitary.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynmap_cp_sampled: Option<Verdict3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynmap_cpze_sampled: Option<Verdict3>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainExpectation>,
    /// Whether the subspace states are discordant (CQ test fails on a
    /// basis grid).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discordant: Option<bool>,
    /// Origin of the expected values: closed form, construction, or a
    /// derivation oracle.
    pub source: &'static str,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Int(i64),
    Text(String),
}

/// One constructed example with its subspace, semigroup, distinguished
/// unitary (when the example fixes one), and expectations.
#[derive(Debug, Clone)]
pub struct GalleryCase {
    pub name: String,
    pub parameters: Vec<(String, ParamValue)>,
    pub dims: BipartiteDims,
    pub subspace: OperatorSubspace,
    pub semigroup: SemigroupSpec,
    pub unitary: Option<CMatrix>,
    pub expected: Expectations,
    /// Closed-form positivity witness candidates handed to the
    /// classifier.
    pub positivity_witnesses: Vec<CMatrix>,
    /// Complete extremal description of `D_S ∩ Tr_B V` when available.
    pub extreme_points: Option<Vec<CMatrix>>,
}

fn assert_state(m: &CMatrix, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::MalformedState(format!("{what}: not square")));
    }
    if m.hermiticity_deviation() > 1e-9 {
        return Err(Error::MalformedState(format!("{what}: not Hermitian")));
    }
    if (m.trace().re - 1.0).abs() > 1e-9 {
        return Err(Error::MalformedState(format!("{what}: trace ≠ 1")));
    }
    let (min_eig, _) = min_eigenvalue(m)?;
    if min_eig < -1e-9 {
        return Err(Error::MalformedState(format!(
            "{what}: negative eigenvalue {min_eig:.3e}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// Entropy utilities
// ---------------------------------------------------------------------

/// Von Neumann entropy in nats, with 0·log 0 = 0.
pub fn von_neumann_entropy(rho: &CMatrix) -> Result<f64> {
    assert_state(rho, "entropy input")?;
    let dec = eigh(&rho.hermitian_part())?;
    Ok(dec
        .eigenvalues
        .iter()
        .map(|&l| if l > 1e-14 { -l * l.ln() } else { 0.0 })
        .sum())
}

/// Entropies of a tripartite state and the conditional mutual
/// information `I(R:B|S) = S(RS) + S(SB) − S(S) − S(RSB)`.
#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub s_r: f64,
    pub s_s: f64,
    pub s_b: f64,
    pub s_rs: f64,
    pub s_sb: f64,
    pub s_rsb: f64,
    pub conditional_mutual_information: f64,
}

pub fn conditional_mutual_information(
    rho_rsb: &CMatrix,
    (d_r, d_s, d_b): (usize, usize, usize),
) -> Result<EntropyReport> {
    let factors = [d_r, d_s, d_b];
    if rho_rsb.rows() != d_r * d_s * d_b {
        return Err(Error::DimensionMismatch(format!(
            "tripartite state is {}x{}, dims {:?}",
            rho_rsb.rows(),
            rho_rsb.cols(),
            factors
        )));
    }
    assert_state(rho_rsb, "tripartite state")?;
    let marginal = |keep: [bool; 3]| -> Result<CMatrix> {
        rho_rsb.partial_trace_keep(&factors, &keep)
    };
    let s_r = von_neumann_entropy(&marginal([true, false, false])?)?;
    let s_s = von_neumann_entropy(&marginal([false, true, false])?)?;
    let s_b = von_neumann_entropy(&marginal([false, false, true])?)?;
    let s_rs = von_neumann_entropy(&marginal([true, true, false])?)?;
    let s_sb = von_neumann_entropy(&marginal([false, true, true])?)?;
    let s_rsb = von_neumann_entropy(rho_rsb)?;
    Ok(EntropyReport {
        s_r,
        s_s,
        s_b,
        s_rs,
        s_sb,
        s_rsb,
        conditional_mutual_information: s_rs + s_sb - s_s - s_rsb,
    })
}

/// Classical-quantum test: `ρ_SB = Σ_i (P_i ⊗ 𝟙) ρ_SB (P_i ⊗ 𝟙)` within
/// 1e-8, where the projectors come from the columns of `basis`.
pub fn cq_state_test(rho_sb: &CMatrix, basis: &CMatrix, dims: BipartiteDims) -> bool {
    if rho_sb.rows() != dims.total() || basis.rows() != dims.d_s {
        return false;
    }
    let mut pinched = CMatrix::zeros(dims.total(), dims.total());
    for i in 0..dims.d_s {
        let col = CMatrix::from_fn(dims.d_s, 1, |r, _| basis.get(r, i));
        let proj = kron(&CMatrix::outer(&col, &col), &CMatrix::identity(dims.d_b));
        pinched = pinched.add(&proj.matmul(rho_sb).matmul(&proj));
    }
    pinched.sub(rho_sb).max_abs() <= 1e-8
}

/// Discord witness over a basis grid: the computational basis plus
/// seeded Haar-random bases. Returns true when no tested basis makes the
/// state classical-quantum.
pub fn discordant_over_grid(
    rho_sb: &CMatrix,
    dims: BipartiteDims,
    random_bases: usize,
    seed: u64,
) -> bool {
    if cq_state_test(rho_sb, &CMatrix::identity(dims.d_s), dims) {
        return false;
    }
    let mut sampler = Sampler::new(seed);
    for _ in 0..random_bases {
        let u = sampler.haar_unitary(dims.d_s);
        if cq_state_test(rho_sb, &u, dims) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------
// Example families
// ---------------------------------------------------------------------

/// Product-form subspace `B(H_S) ⊗ ρ_B`: uncorrelated initial states and
/// Kraus dynamics. Consistent for the full unitary group, completely
/// positive in every flavor, physical domain all of `D_S`.
pub fn make_kraus(dims: BipartiteDims, rho_b: &CMatrix) -> Result<GalleryCase> {
    assert_state(rho_b, "bath state")?;
    if rho_b.rows() != dims.d_b {
        return Err(Error::DimensionMismatch("bath state dimension".into()));
    }
    let mut gens = Vec::new();
    for i in 0..dims.d_s {
        for j in 0..dims.d_s {
            gens.push(kron(&CMatrix::matrix_unit(dims.d_s, i, j), rho_b));
        }
    }
    let subspace = build_subspace(&gens, dims)?;
    Ok(GalleryCase {
        name: "kraus".into(),
        parameters: vec![("dS".into(), ParamValue::Int(dims.d_s as i64))],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(dims.d_s * dims.d_s),
            dim_v0: Some(0),
            dim_reduced: Some(dims.d_s * dims.d_s),
            state_spanned: Some(StateSpannedStatus::Verified),
            assignment_positive: Some(Verdict3::Yes),
            assignment_cp: Some(Verdict3::Yes),
            assignment_cpze: Some(Verdict3::Yes),
            dynmap_cp_sampled: Some(Verdict3::Yes),
            dynmap_cpze_sampled: Some(Verdict3::Yes),
            domain: Some(DomainExpectation::AllStates),
            source: "product construction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// The symmetrized equilibrium assignment
/// `ρ_S ↦ [ρ_S (ρ_S^eq)⁻¹ ρ_SB^eq + ρ_SB^eq (ρ_S^eq)⁻¹ ρ_S]/2`
/// with domain all of `B(H_S)`. Non-positive whenever the equilibrium
/// state is correlated: pure system states are then not sent to product
/// states.
pub fn make_pechukas(dims: BipartiteDims, rho_sb_eq: &CMatrix) -> Result<GalleryCase> {
    assert_state(rho_sb_eq, "equilibrium state")?;
    if rho_sb_eq.rows() != dims.total() {
        return Err(Error::DimensionMismatch("equilibrium state dimension".into()));
    }
    let rho_s_eq = rho_sb_eq.partial_trace_b(dims)?;
    let dec = eigh(&rho_s_eq)?;
    let min_eig = dec.eigenvalues[0];
    if min_eig <= 1e-9 {
        return Err(Error::SingularState(min_eig));
    }
    let inv = dec.apply_spectral(|l| 1.0 / l);

    let assign = |x: &CMatrix| -> CMatrix {
        let left = kron(&x.matmul(&inv), &CMatrix::identity(dims.d_b)).matmul(rho_sb_eq);
        let right = rho_sb_eq.matmul(&kron(&inv.matmul(x), &CMatrix::identity(dims.d_b)));
        left.add(&right).scale_re(0.5)
    };

    let mut gens = Vec::new();
    for i in 0..dims.d_s {
        for j in 0..dims.d_s {
            gens.push(assign(&CMatrix::matrix_unit(dims.d_s, i, j)));
        }
    }
    let subspace = build_subspace(&gens, dims)?;

    let product_part = kron(&rho_s_eq, &rho_sb_eq.partial_trace_s(dims)?);
    let correlated = rho_sb_eq.sub(&product_part).max_abs() > 1e-8;

    // Pure-state candidates for the positivity witness search.
    let mut witnesses = Vec::new();
    for i in 0..dims.d_s {
        witnesses.push(CMatrix::matrix_unit(dims.d_s, i, i));
        for j in (i + 1)..dims.d_s {
            let mut plus = CMatrix::zeros(dims.d_s, 1);
            plus.set(i, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            plus.set(j, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            witnesses.push(CMatrix::outer(&plus, &plus));
            let mut plus_i = CMatrix::zeros(dims.d_s, 1);
            plus_i.set(i, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            plus_i.set(j, 0, c(0.0, std::f64::consts::FRAC_1_SQRT_2));
            witnesses.push(CMatrix::outer(&plus_i, &plus_i));
        }
    }
    for k in 0..dims.d_s {
        witnesses.push(CMatrix::outer(&dec.eigenvector(k), &dec.eigenvector(k)));
    }

    Ok(GalleryCase {
        name: "pechukas".into(),
        parameters: Vec::new(),
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(dims.d_s * dims.d_s),
            dim_v0: Some(0),
            dim_reduced: Some(dims.d_s * dims.d_s),
            assignment_positive: Some(if correlated { Verdict3::No } else { Verdict3::Yes }),
            assignment_cp: if correlated { Some(Verdict3::No) } else { Some(Verdict3::Yes) },
            source: "equilibrium assignment form",
            ..Default::default()
        },
        positivity_witnesses: witnesses,
        extreme_points: None,
    })
}

/// Assignment built from an operator-sum map `T = Σ_n V_n · V_n†` and an
/// equilibrium state: `A(ρ) = Σ_n V_n ρ V_n† ⊗ τ_n` with bath states
/// `τ_n = Tr_S[(V_n†V_n ⊗ 𝟙) ρ_eq] / Tr[(V_n†V_n ⊗ 𝟙) ρ_eq]`, restricted
/// to the fixed points of T. Completely positive by construction, but
/// dependent on the chosen representation of T.
pub fn make_alicki(
    dims: BipartiteDims,
    kraus_ops: &[CMatrix],
    rho_sb_eq: &CMatrix,
) -> Result<GalleryCase> {
    assert_state(rho_sb_eq, "equilibrium state")?;
    if kraus_ops.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let ds = dims.d_s;
    for v in kraus_ops {
        if v.rows() != ds || v.cols() != ds {
            return Err(Error::DimensionMismatch("map operator dimension".into()));
        }
    }

    // Bath states attached to each operator.
    let mut taus = Vec::new();
    for v in kraus_ops {
        let weight = kron(&v.adjoint().matmul(v), &CMatrix::identity(dims.d_b));
        let raw = weight.matmul(rho_sb_eq).partial_trace_s(dims)?;
        let denom = raw.trace().re;
        if denom.abs() <= 1e-12 {
            return Err(Error::VanishingDenominator);
        }
        taus.push(raw.scale_re(1.0 / denom).hermitian_part());
    }

    // Fixed points of T via the superoperator matrix on vectorized input.
    let t_super = CMatrix::from_fn(ds * ds, ds * ds, |rc, kl| {
        let (r, col) = (rc / ds, rc % ds);
        let (k, l) = (kl / ds, kl % ds);
        let mut acc = c(0.0, 0.0);
        for v in kraus_ops {
            acc += v.get(r, k) * v.get(col, l).conj();
        }
        acc
    });
    let defect = t_super.sub(&CMatrix::identity(ds * ds));
    let gram = defect.adjoint().matmul(&defect);
    let dec = eigh(&gram)?;
    let lam_max = dec.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    let mut fixed: Vec<CMatrix> = Vec::new();
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        if lam <= 1e-12 * lam_max {
            let vecd = dec.eigenvector(k);
            fixed.push(CMatrix::from_fn(ds, ds, |r, col| vecd.get(r * ds + col, 0)));
        }
    }
    if fixed.is_empty() {
        return Err(Error::InvalidParameter("map has no fixed points".into()));
    }

    let assign = |x: &CMatrix| -> CMatrix {
        let mut out = CMatrix::zeros(dims.total(), dims.total());
        for (v, tau) in kraus_ops.iter().zip(&taus) {
            out = out.add(&kron(&v.matmul(x).matmul(&v.adjoint()), tau));
        }
        out
    };
    let gens: Vec<CMatrix> = fixed.iter().map(&assign).collect();
    let subspace = build_subspace(&gens, dims)?;

    Ok(GalleryCase {
        name: "alicki".into(),
        parameters: vec![(
            "operators".into(),
            ParamValue::Int(kraus_ops.len() as i64),
        )],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            assignment_cp: Some(Verdict3::Yes),
            assignment_positive: Some(Verdict3::Yes),
            source: "operator-sum construction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// The two-qubit pair that no consistent subset may contain when a CNOT
/// is allowed: a classical mixture and a superposition with the same
/// reduction.
pub fn make_stelmachovic_buzek_pair(alpha: Complex64, beta: Complex64) -> Result<GalleryCase> {
    if ((alpha.norm_sqr() + beta.norm_sqr()) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(
            "amplitudes must satisfy |α|² + |β|² = 1".into(),
        ));
    }
    let dims = BipartiteDims::new(2, 2)?;
    let mut rho1 = CMatrix::zeros(4, 4);
    rho1.set(0, 0, c(alpha.norm_sqr(), 0.0));
    rho1.set(3, 3, c(beta.norm_sqr(), 0.0));
    let mut psi = CMatrix::zeros(4, 1);
    psi.set(0, 0, alpha);
    psi.set(3, 0, beta);
    let rho2 = CMatrix::outer(&psi, &psi);

    let (sx, _, _) = paulis();
    let cnot = kron(&CMatrix::matrix_unit(2, 1, 1), &sx)
        .add(&kron(&CMatrix::matrix_unit(2, 0, 0), &CMatrix::identity(2)))
        .scale(c(0.0, -1.0));

    let degenerate = alpha.norm() < 1e-9 || beta.norm() < 1e-9;
    let subspace = build_subspace(&[rho1, rho2], dims)?;
    Ok(GalleryCase {
        name: "stelmachovic_buzek_pair".into(),
        parameters: vec![
            ("alpha_re".into(), ParamValue::Real(alpha.re)),
            ("beta_re".into(), ParamValue::Real(beta.re)),
        ],
        dims,
        subspace,
        semigroup: SemigroupSpec::Generators {
            generators: vec![cnot.clone()],
        },
        unitary: Some(cnot),
        expected: Expectations {
            consistent: Some(degenerate),
            state_spanned: Some(StateSpannedStatus::Verified),
            source: "two-state obstruction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// The swap construction carrying a fixed `ρ_S(0)` to a fixed `ρ_S(T)`:
/// a product-form subspace whose bath state is the target, evolved by
/// the swap unitary.
pub fn make_stelmachovic_buzek_swap(rho_t: &CMatrix) -> Result<GalleryCase> {
    assert_state(rho_t, "target state")?;
    let d = rho_t.rows();
    let dims = BipartiteDims::new(d, d)?;
    let mut case = make_kraus(dims, rho_t)?;
    case.name = "stelmachovic_buzek_swap".into();
    case.unitary = Some(swap_unitary(d));
    case.expected.source = "swap construction";
    case.expected.dynmap_cp = Some(Verdict3::Yes);
    Ok(case)
}

/// Both halves of the Štelmachovič–Bužek discussion: the CNOT-broken
/// state pair for the amplitudes (α, β), and the swap construction
/// carrying every initial state to `ρ_T`.
pub fn make_stelmachovic_buzek(
    alpha: Complex64,
    beta: Complex64,
    rho_t: &CMatrix,
) -> Result<(GalleryCase, GalleryCase)> {
    Ok((
        make_stelmachovic_buzek_pair(alpha, beta)?,
        make_stelmachovic_buzek_swap(rho_t)?,
    ))
}

/// Two bath states sharing a system reduction, broken by the swap.
pub fn make_diff_bath_states(
    rho_s: &CMatrix,
    rho_b1: &CMatrix,
    rho_b2: &CMatrix,
) -> Result<GalleryCase> {
    assert_state(rho_s, "system state")?;
    assert_state(rho_b1, "bath state 1")?;
    assert_state(rho_b2, "bath state 2")?;
    let dims = BipartiteDims::new(rho_s.rows(), rho_b1.rows())?;
    if rho_b1.rows() != rho_b2.rows() || dims.d_s != dims.d_b {
        return Err(Error::DimensionMismatch(
            "swap needs equal system and bath dimensions".into(),
        ));
    }
    let distinct = rho_b1.sub(rho_b2).max_abs() > 1e-9;
    let subspace = build_subspace(&[kron(rho_s, rho_b1), kron(rho_s, rho_b2)], dims)?;
    let swap = swap_unitary(dims.d_s);
    Ok(GalleryCase {
        name: "diff_bath_states".into(),
        parameters: Vec::new(),
        dims,
        subspace,
        semigroup: SemigroupSpec::Generators {
            generators: vec![swap.clone()],
        },
        unitary: Some(swap),
        expected: Expectations {
            consistent: Some(!distinct),
            state_spanned: Some(StateSpannedStatus::Verified),
            source: "swap obstruction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// Two-qubit subspace of Jordan, Shaji, and Sudarshan: the 14-dimensional
/// orthocomplement of `span{α𝟙 + Y⊗X, β𝟙 − X⊗X}` evolving under
/// `H = (ω/2) Z⊗X`. The kernel V₀ is 10-dimensional and the assignment
/// map fails positivity unless α = β = 0.
pub fn make_jss(alpha: f64, beta: f64, omega: f64) -> Result<GalleryCase> {
    if !(-1.0..1.0).contains(&alpha) || !(-1.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter(
            "JSS parameters must lie in (−1, 1)".into(),
        ));
    }
    let dims = BipartiteDims::new(2, 2)?;
    let (sx, sy, sz) = paulis();
    let id = CMatrix::identity(2);
    let g1 = kron(&id, &id).scale_re(alpha).add(&kron(&sy, &sx));
    let g2 = kron(&id, &id).scale_re(beta).sub(&kron(&sx, &sx));
    let excluded = orthonormalize(&[g1, g2], 1e-10);

    let mut gens = Vec::new();
    for p in [&id, &sx, &sy, &sz] {
        for q in [&id, &sx, &sy, &sz] {
            let pauli = kron(p, q);
            let mut proj = pauli.clone();
            for e in &excluded {
                proj = proj.sub(&e.scale(hs_inner(e, &pauli)));
            }
            if proj.fro_norm() > 1e-10 {
                gens.push(proj);
            }
        }
    }
    let subspace = build_subspace(&gens, dims)?;
    let hamiltonian = kron(&sz, &sx).scale_re(omega / 2.0);
    let trivial = alpha.abs() < 1e-12 && beta.abs() < 1e-12;

    Ok(GalleryCase {
        name: "jss".into(),
        parameters: vec![
            ("alpha".into(), ParamValue::Real(alpha)),
            ("beta".into(), ParamValue::Real(beta)),
            ("omega".into(), ParamValue::Real(omega)),
        ],
        dims,
        subspace,
        semigroup: SemigroupSpec::Hamiltonian { hamiltonian },
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(14),
            dim_v0: Some(10),
            dim_reduced: Some(4),
            assignment_positive: Some(if trivial { Verdict3::Yes } else { Verdict3::No }),
            assignment_cp: if trivial { Some(Verdict3::Yes) } else { Some(Verdict3::No) },
            source: "orthocomplement construction",
            ..Default::default()
        },
        positivity_witnesses: vec![
            CMatrix::matrix_unit(2, 0, 0),
            CMatrix::matrix_unit(2, 1, 1),
        ],
        extreme_points: None,
    })
}

/// One-qubit system and bath with
/// `V = span{σ₁⊗𝟙, σ₂⊗𝟙, σ₃⊗𝟙, 𝟙 + a Σ σ_i⊗σ_i}` and the rotation-block
/// unitary `U(θ)`. The physical domain is a Bloch ball of radius
/// `√((1+a)(1−3a))` for `a ≥ 0` and `1+a` for `a ≤ 0`.
///
/// The subspace contains states only for `a ∈ (−1, 1/3)`; the wider
/// range `(−1, 1)` is accepted because the maps stay well-defined
/// linear-algebraically and the non-CP regime of interest crosses
/// `a = 1/(2√3)`.
pub fn make_carteret(a: f64, theta: f64) -> Result<GalleryCase> {
    if !(-1.0..1.0).contains(&a) {
        return Err(Error::InvalidParameter(
            "Carteret parameter a must lie in (−1, 1)".into(),
        ));
    }
    let dims = BipartiteDims::new(2, 2)?;
    let (sx, sy, sz) = paulis();
    let id = CMatrix::identity(2);
    let mut correlated = kron(&id, &id);
    for s in [&sx, &sy, &sz] {
        correlated = correlated.add(&kron(s, s).scale_re(a));
    }
    let gens = vec![
        kron(&sx, &id),
        kron(&sy, &id),
        kron(&sz, &id),
        correlated,
    ];
    let subspace = build_subspace(&gens, dims)?;

    let mut u = CMatrix::identity(4);
    u.set(1, 1, c(theta.cos(), 0.0));
    u.set(1, 2, c(theta.sin(), 0.0));
    u.set(2, 1, c(-theta.sin(), 0.0));
    u.set(2, 2, c(theta.cos(), 0.0));

    let domain = if (-1.0..1.0 / 3.0).contains(&a) {
        let radius = if a >= 0.0 {
            ((1.0 + a) * (1.0 - 3.0 * a)).sqrt()
        } else {
            1.0 + a
        };
        Some(DomainExpectation::BlochBall { radius })
    } else {
        None
    };

    // CP of Ψ_{U(θ)} from the closed-form Choi spectrum.
    let choi = carteret_choi_formula(a, theta);
    let cp = if min_eigenvalue(&choi)?.0 >= -1e-9 {
        Verdict3::Yes
    } else {
        Verdict3::No
    };

    Ok(GalleryCase {
        name: "carteret".into(),
        parameters: vec![
            ("a".into(), ParamValue::Real(a)),
            ("theta".into(), ParamValue::Real(theta)),
        ],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: Some(u),
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(4),
            dim_v0: Some(0),
            dim_reduced: Some(4),
            dynmap_cp: Some(cp),
            assignment_positive: if a.abs() > 1e-12 {
                Some(Verdict3::No)
            } else {
                Some(Verdict3::Yes)
            },
            domain,
            source: "closed-form Choi and domain radii",
            ..Default::default()
        },
        positivity_witnesses: carteret_positivity_witnesses(a),
        extreme_points: None,
    })
}

/// Closed-form Choi matrix of the Carteret dynamical map in the
/// output-first convention `Σ F(E_ij) ⊗ E_ij`:
/// `½[𝟙 + cos²θ σ_z⊗σ_z + a sin(2θ) σ_z⊗𝟙 + cosθ (σ_x⊗σ_x − σ_y⊗σ_y)]`.
/// Only the a-term is sensitive to the factor order; hand-evaluating
/// `Ψ(E_ij)` pins it to the output slot (e.g. Ψ(E₁₁)[0,0] = (1+2a)/4).
pub fn carteret_choi_formula(a: f64, theta: f64) -> CMatrix {
    let (sx, sy, sz) = paulis();
    let id4 = CMatrix::identity(4);
    let ct = theta.cos();
    id4.add(&kron(&sz, &sz).scale_re(ct * ct))
        .add(&kron(&sz, &CMatrix::identity(2)).scale_re(a * (2.0 * theta).sin()))
        .add(&kron(&sx, &sx).sub(&kron(&sy, &sy)).scale_re(ct))
        .scale_re(0.5)
}

fn carteret_positivity_witnesses(a: f64) -> Vec<CMatrix> {
    // Pure states on the Bloch sphere sit outside the physical domain
    // whenever a ≠ 0 and their assignment representatives go negative.
    let mut out = Vec::new();
    if a.abs() > 1e-9 {
        out.push(CMatrix::matrix_unit(2, 0, 0));
        out.push(CMatrix::matrix_unit(2, 1, 1));
        let mut plus = CMatrix::zeros(2, 1);
        plus.set(0, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        plus.set(1, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        out.push(CMatrix::outer(&plus, &plus));
    }
    out
}

/// Zero-discord subspace `span{|i⟩⟨i| ⊗ σ_i}`: classical system-bath
/// correlations only. The assignment map is CPZE and every dynamical map
/// is CP.
pub fn make_zero_discord(dims: BipartiteDims, sigmas: &[CMatrix]) -> Result<GalleryCase> {
    if sigmas.len() != dims.d_s {
        return Err(Error::DimensionMismatch(
            "one bath state per system basis vector".into(),
        ));
    }
    for s in sigmas {
        assert_state(s, "bath state")?;
    }
    let gens: Vec<CMatrix> = sigmas
        .iter()
        .enumerate()
        .map(|(i, s)| kron(&CMatrix::matrix_unit(dims.d_s, i, i), s))
        .collect();
    let subspace = build_subspace(&gens, dims)?;
    let extreme: Vec<CMatrix> = (0..dims.d_s)
        .map(|i| CMatrix::matrix_unit(dims.d_s, i, i))
        .collect();
    Ok(GalleryCase {
        name: "zero_discord".into(),
        parameters: vec![("dS".into(), ParamValue::Int(dims.d_s as i64))],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(dims.d_s),
            dim_v0: Some(0),
            dim_reduced: Some(dims.d_s),
            state_spanned: Some(StateSpannedStatus::Verified),
            assignment_positive: Some(Verdict3::Yes),
            assignment_cp: Some(Verdict3::Yes),
            assignment_cpze: Some(Verdict3::Yes),
            dynmap_cp_sampled: Some(Verdict3::Yes),
            dynmap_cpze_sampled: Some(Verdict3::Yes),
            discordant: Some(false),
            source: "classical-quantum construction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: Some(extreme),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlFormVerdict {
    SlForm,
    NotSlForm,
}

/// Structural test for `V = span{|i⟩⟨j| ⊗ φ_ij}` in a given system
/// basis: every compression block is at most one-dimensional and the
/// blocks account for the whole space.
pub fn sl_form_check(v: &OperatorSubspace, basis: &CMatrix) -> SlFormVerdict {
    let dims = v.dims();
    let ds = dims.d_s;
    let mut nonzero_blocks = 0usize;
    for i in 0..ds {
        for j in 0..ds {
            let bi = CMatrix::from_fn(ds, 1, |r, _| basis.get(r, i));
            let bj = CMatrix::from_fn(ds, 1, |r, _| basis.get(r, j));
            // ⟨i|X|j⟩ over the system factor for each basis element.
            let blocks: Vec<CMatrix> = v
                .basis()
                .iter()
                .map(|x| compress_system(x, &bi, &bj, dims))
                .collect();
            let rank = orthonormalize(&blocks, 1e-8).len();
            if rank > 1 {
                return SlFormVerdict::NotSlForm;
            }
            nonzero_blocks += rank;
        }
    }
    if nonzero_blocks == v.dim() {
        SlFormVerdict::SlForm
    } else {
        SlFormVerdict::NotSlForm
    }
}

/// Same test over the computational basis and a seeded grid of random
/// bases; SL form is reported if any tested basis exhibits it.
pub fn sl_form_over_grid(
    v: &OperatorSubspace,
    random_bases: usize,
    seed: u64,
) -> SlFormVerdict {
    if sl_form_check(v, &CMatrix::identity(v.dims().d_s)) == SlFormVerdict::SlForm {
        return SlFormVerdict::SlForm;
    }
    let mut sampler = Sampler::new(seed);
    for _ in 0..random_bases {
        let u = sampler.haar_unitary(v.dims().d_s);
        if sl_form_check(v, &u) == SlFormVerdict::SlForm {
            return SlFormVerdict::SlForm;
        }
    }
    SlFormVerdict::NotSlForm
}

fn compress_system(x: &CMatrix, bi: &CMatrix, bj: &CMatrix, dims: BipartiteDims) -> CMatrix {
    CMatrix::from_fn(dims.d_b, dims.d_b, |a, b| {
        let mut acc = c(0.0, 0.0);
        for r in 0..dims.d_s {
            for s in 0..dims.d_s {
                acc += bi.get(r, 0).conj() * x.get(dims.joint(r, a), dims.joint(s, b)) * bj.get(s, 0);
            }
        }
        acc
    })
}

/// Block-form subspace `V = span{|i⟩⟨j| ⊗ φ_ij}` with bath operators
/// `φ_ij` (requiring `φ_ji = φ_ij†`). Rejected unless the span is
/// spanned by states. Dynamical maps are CP for every unitary exactly
/// when the states in V are all zero-discord.
pub fn make_shabani_lidar(
    dims: BipartiteDims,
    phis: &BTreeMap<(usize, usize), CMatrix>,
) -> Result<GalleryCase> {
    let mut gens = Vec::new();
    for (&(i, j), phi) in phis {
        if i >= dims.d_s || j >= dims.d_s || phi.rows() != dims.d_b || phi.cols() != dims.d_b {
            return Err(Error::DimensionMismatch("bath operator block".into()));
        }
        match phis.get(&(j, i)) {
            Some(rev) if rev.sub(&phi.adjoint()).max_abs() <= 1e-9 => {}
            _ => {
                return Err(Error::InvalidParameter(
                    "blocks must satisfy φ_ji = φ_ij†".into(),
                ))
            }
        }
        gens.push(kron(&CMatrix::matrix_unit(dims.d_s, i, j), phi));
    }
    let subspace = build_subspace(&gens, dims)?;
    let report = check_state_spanned(&subspace, &StateSearchBudget::default());
    if report.status != StateSpannedStatus::Verified {
        return Err(Error::NotStateSpanned);
    }

    // Zero-discord in the construction basis: no off-diagonal blocks.
    let zero_discord = phis.iter().all(|(&(i, j), phi)| i == j || phi.max_abs() <= 1e-12);

    Ok(GalleryCase {
        name: "shabani_lidar".into(),
        parameters: vec![(
            "blocks".into(),
            ParamValue::Int(phis.len() as i64),
        )],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            state_spanned: Some(StateSpannedStatus::Verified),
            dynmap_cp_sampled: if zero_discord {
                Some(Verdict3::Yes)
            } else {
                None // some sampled unitary must break CP; asserted separately
            },
            discordant: Some(!zero_discord),
            source: "block-form construction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// Discordant-but-CPZE construction of Brodutch et al.:
/// `V = span{ρ₀₁} ∪ {|i⟩⟨i| ⊗ σ_i}_{i≥2}` with
/// `ρ₀₁ = |0⟩⟨0|⊗σ₀ + |1⟩⟨1|⊗σ₁ + |+⟩⟨+|⊗σ₊`.
pub fn make_brodutch(
    dims: BipartiteDims,
    sigma_plus: &CMatrix,
    sigmas: &[CMatrix],
) -> Result<GalleryCase> {
    if dims.d_s < 2 || sigmas.len() != dims.d_s {
        return Err(Error::DimensionMismatch(
            "need one bath state per system level and dS ≥ 2".into(),
        ));
    }
    // σ₊ = 0 is the degenerate limit where the construction collapses
    // to the classical-quantum span.
    if sigma_plus.max_abs() > 1e-12 {
        assert_state(sigma_plus, "σ₊")?;
    }
    for s in sigmas {
        assert_state(s, "bath state")?;
    }
    let ds = dims.d_s;
    let mut plus = CMatrix::zeros(ds, 1);
    plus.set(0, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    plus.set(1, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let rho01 = kron(&CMatrix::matrix_unit(ds, 0, 0), &sigmas[0])
        .add(&kron(&CMatrix::matrix_unit(ds, 1, 1), &sigmas[1]))
        .add(&kron(&CMatrix::outer(&plus, &plus), sigma_plus));

    let mut gens = vec![rho01.clone()];
    for (i, s) in sigmas.iter().enumerate().skip(2) {
        gens.push(kron(&CMatrix::matrix_unit(ds, i, i), s));
    }
    let subspace = build_subspace(&gens, dims)?;

    let discordant = discordant_over_grid(
        &rho01.scale_re(1.0 / rho01.trace().re),
        dims,
        200,
        crate::consistency::witness_seed(),
    );

    Ok(GalleryCase {
        name: "brodutch".into(),
        parameters: vec![("dS".into(), ParamValue::Int(ds as i64))],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(1 + ds.saturating_sub(2)),
            dim_v0: Some(0),
            assignment_cpze: Some(Verdict3::Yes),
            dynmap_cp_sampled: Some(Verdict3::Yes),
            dynmap_cpze_sampled: Some(Verdict3::Yes),
            discordant: Some(discordant),
            source: "correlated-projector construction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// Buscemi's construction: compress a tripartite state with vanishing
/// conditional mutual information through the reference system,
/// `V′ = {Tr_R[(L ⊗ 𝟙_SB) ρ_RSB]}`, and span the states found inside.
/// All dynamical maps on the result are CP.
pub fn make_buscemi(
    rho_rsb: &CMatrix,
    (d_r, d_s, d_b): (usize, usize, usize),
) -> Result<GalleryCase> {
    let report = conditional_mutual_information(rho_rsb, (d_r, d_s, d_b))?;
    if report.conditional_mutual_information > 1e-8 {
        return Err(Error::NotMarkov(report.conditional_mutual_information));
    }
    let dims = BipartiteDims::new(d_s, d_b)?;

    // Generators of the compressed span.
    let mut compressed = Vec::new();
    for k in 0..d_r {
        for l in 0..d_r {
            let probe = kron(
                &CMatrix::matrix_unit(d_r, k, l),
                &CMatrix::identity(d_s * d_b),
            );
            let g = probe
                .matmul(rho_rsb)
                .partial_trace_keep(&[d_r, d_s * d_b], &[false, true])?;
            if g.fro_norm() > 1e-12 {
                compressed.push(g);
            }
        }
    }
    if compressed.is_empty() {
        return Err(Error::InvalidParameter("compressed span is zero".into()));
    }
    let v_prime = build_subspace(&compressed, dims)?;

    // Span of the states inside V′.
    let harvest = check_state_spanned(&v_prime, &StateSearchBudget::default());
    if harvest.states.is_empty() {
        return Err(Error::InvalidParameter(
            "no states found in the compressed span".into(),
        ));
    }
    let subspace = build_subspace(&harvest.states, dims)?;

    Ok(GalleryCase {
        name: "buscemi".into(),
        parameters: vec![
            ("dR".into(), ParamValue::Int(d_r as i64)),
            (
                "cmi".into(),
                ParamValue::Real(report.conditional_mutual_information),
            ),
        ],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            state_spanned: Some(StateSpannedStatus::Verified),
            dynmap_cp_sampled: Some(Verdict3::Yes),
            source: "conditional-independence construction",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// Three-level counterexample separating CP from CPZE: drop the (0,1)
/// and (1,0) matrix units from a product-form subspace. The orthogonal
/// projection onto `Tr_B V` has Choi minimum eigenvalue `1 − √2 < 0`.
pub fn make_choi_effros(rho_b: &CMatrix) -> Result<GalleryCase> {
    assert_state(rho_b, "bath state")?;
    let dims = BipartiteDims::new(3, rho_b.rows())?;
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) == (0, 1) || (i, j) == (1, 0) {
                continue;
            }
            gens.push(kron(&CMatrix::matrix_unit(3, i, j), rho_b));
        }
    }
    let subspace = build_subspace(&gens, dims)?;
    Ok(GalleryCase {
        name: "choi_effros_counterexample".into(),
        parameters: Vec::new(),
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(7),
            dim_v0: Some(0),
            dim_reduced: Some(7),
            assignment_cp: Some(Verdict3::Yes),
            assignment_cpze: Some(Verdict3::No),
            assignment_positive: Some(Verdict3::Yes),
            source: "projection Choi spectrum",
            ..Default::default()
        },
        positivity_witnesses: Vec::new(),
        extreme_points: None,
    })
}

/// Two-generator subspace `span{𝟙/(d_S d_B), |ψ⟩⟨ψ| ⊗ |φ⟩⟨φ|}`: the
/// assignment map is not positive, yet every dynamical map is CPZE.
pub fn make_consistent_pos_counterexample(dims: BipartiteDims) -> Result<GalleryCase> {
    let n = dims.total();
    let rho = CMatrix::identity(n).scale_re(1.0 / n as f64);
    let psi = CMatrix::basis_ket(dims.d_s, 0);
    let phi = CMatrix::basis_ket(dims.d_b, 0);
    let psi_proj = CMatrix::outer(&psi, &psi);
    let sigma = kron(&psi_proj, &CMatrix::outer(&phi, &phi));
    let subspace = build_subspace(&[rho.clone(), sigma.clone()], dims)?;

    let ds = dims.d_s as f64;
    let db = dims.d_b as f64;
    let id_s = CMatrix::identity(dims.d_s);
    // Ends of the physical segment and the unphysical end of the state
    // segment.
    let inside_end = id_s
        .scale_re(db)
        .sub(&psi_proj)
        .scale_re(1.0 / (ds * db - 1.0));
    let outside_state = id_s.sub(&psi_proj).scale_re(1.0 / (ds - 1.0));

    // Reduction of ρ − 0.3 σ: PSD input whose assignment class has a
    // negative representative.
    let witness = id_s.scale_re(1.0 / ds).sub(&psi_proj.scale_re(0.3));

    Ok(GalleryCase {
        name: "consistent_pos_counterexample".into(),
        parameters: vec![
            ("dS".into(), ParamValue::Int(dims.d_s as i64)),
            ("dB".into(), ParamValue::Int(dims.d_b as i64)),
        ],
        dims,
        subspace,
        semigroup: SemigroupSpec::Full,
        unitary: None,
        expected: Expectations {
            consistent: Some(true),
            dim_v: Some(2),
            dim_v0: Some(0),
            dim_reduced: Some(2),
            state_spanned: Some(StateSpannedStatus::Verified),
            assignment_positive: Some(Verdict3::No),
            dynmap_cpze_sampled: Some(Verdict3::Yes),
            domain: Some(DomainExpectation::Segment {
                inside_end,
                outside_state: outside_state.clone(),
            }),
            source: "two-state construction",
            ..Default::default()
        },
        positivity_witnesses: vec![witness, outside_state],
        extreme_points: Some(vec![
            psi_proj.clone(),
            id_s.sub(&psi_proj).scale_re(1.0 / (ds - 1.0)),
        ]),
    })
}

// ---------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CaseInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub parameters: &'static [(&'static str, f64)],
}

pub fn list_cases() -> Vec<CaseInfo> {
    vec![
        CaseInfo {
            name: "kraus",
            summary: "product-form subspace B(H_S)⊗ρ_B; CP in every flavor",
            parameters: &[("p0", 0.7)],
        },
        CaseInfo {
            name: "pechukas",
            summary: "equilibrium assignment with correlated ρ_SB; not positive",
            parameters: &[("mix", 0.5)],
        },
        CaseInfo {
            name: "alicki",
            summary: "operator-sum assignment on the fixed points of a dephasing map",
            parameters: &[],
        },
        CaseInfo {
            name: "stelmachovic_buzek_pair",
            summary: "classical/entangled pair broken by a CNOT",
            parameters: &[("alpha", std::f64::consts::FRAC_1_SQRT_2)],
        },
        CaseInfo {
            name: "stelmachovic_buzek_swap",
            summary: "swap construction carrying ρ_S(0) to a fixed ρ_S(T)",
            parameters: &[("p0", 0.5)],
        },
        CaseInfo {
            name: "diff_bath_states",
            summary: "two bath states with one reduction, broken by the swap",
            parameters: &[],
        },
        CaseInfo {
            name: "jss",
            summary: "14-dimensional two-qubit subspace with a 10-dimensional kernel",
            parameters: &[("alpha", 0.3), ("beta", 0.2), ("omega", 1.0)],
        },
        CaseInfo {
            name: "carteret",
            summary: "correlated qubit pair with closed-form Choi and domain radii",
            parameters: &[("a", 0.2), ("theta", std::f64::consts::FRAC_PI_4)],
        },
        CaseInfo {
            name: "zero_discord",
            summary: "classically correlated span{|i⟩⟨i|⊗σ_i}; CPZE assignment",
            parameters: &[("dS", 2.0)],
        },
        CaseInfo {
            name: "shabani_lidar",
            summary: "block-form span{|i⟩⟨j|⊗φ_ij}; CP for all U iff zero discord",
            parameters: &[("discordant", 0.0)],
        },
        CaseInfo {
            name: "brodutch",
            summary: "discordant states with CPZE dynamical maps",
            parameters: &[("dS", 3.0)],
        },
        CaseInfo {
            name: "buscemi",
            summary: "compression of a vanishing-CMI tripartite state",
            parameters: &[("variant", 0.0)],
        },
        CaseInfo {
            name: "choi_effros_counterexample",
            summary: "three-level subspace: CP but not CPZE (eigenvalue 1−√2)",
            parameters: &[],
        },
        CaseInfo {
            name: "consistent_pos_counterexample",
            summary: "non-positive assignment with CPZE dynamical maps",
            parameters: &[("dS", 2.0), ("dB", 2.0)],
        },
    ]
}

/// Construct a registry case from scalar parameters (CLI surface).
pub fn build_case(name: &str, params: &BTreeMap<String, f64>) -> Result<GalleryCase> {
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    match name {
        "kraus" => {
            let p0 = get("p0", 0.7);
            if !(0.0..=1.0).contains(&p0) {
                return Err(Error::InvalidParameter("p0 must lie in [0, 1]".into()));
            }
            make_kraus(BipartiteDims::new(2, 2)?, &CMatrix::diag(&[p0, 1.0 - p0]))
        }
        "pechukas" => {
            // Werner-like equilibrium: mix of a Bell projector and noise.
            let mix = get("mix", 0.5);
            if !(0.0..=1.0).contains(&mix) {
                return Err(Error::InvalidParameter("mix must lie in [0, 1]".into()));
            }
            let mut bell = CMatrix::zeros(4, 1);
            bell.set(0, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            bell.set(3, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
            let rho = CMatrix::outer(&bell, &bell)
                .scale_re(mix)
                .add(&CMatrix::identity(4).scale_re((1.0 - mix) / 4.0));
            make_pechukas(BipartiteDims::new(2, 2)?, &rho)
        }
        "alicki" => {
            let p0 = CMatrix::matrix_unit(2, 0, 0);
            let p1 = CMatrix::matrix_unit(2, 1, 1);
            // Correlated equilibrium that the dephasing map leaves fixed
            // on the diagonal.
            let rho_eq = kron(&p0, &CMatrix::diag(&[0.9, 0.1]))
                .scale_re(0.6)
                .add(&kron(&p1, &CMatrix::diag(&[0.2, 0.8])).scale_re(0.4));
            make_alicki(BipartiteDims::new(2, 2)?, &[p0, p1], &rho_eq)
        }
        "stelmachovic_buzek_pair" => {
            let alpha = get("alpha", std::f64::consts::FRAC_1_SQRT_2);
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidParameter("alpha must lie in [0, 1]".into()));
            }
            let beta = (1.0 - alpha * alpha).sqrt();
            make_stelmachovic_buzek_pair(c(alpha, 0.0), c(beta, 0.0))
        }
        "stelmachovic_buzek_swap" => {
            let p0 = get("p0", 0.5);
            if !(0.0..=1.0).contains(&p0) {
                return Err(Error::InvalidParameter("p0 must lie in [0, 1]".into()));
            }
            make_stelmachovic_buzek_swap(&CMatrix::diag(&[p0, 1.0 - p0]))
        }
        "diff_bath_states" => make_diff_bath_states(
            &CMatrix::diag(&[0.6, 0.4]),
            &CMatrix::diag(&[1.0, 0.0]),
            &CMatrix::diag(&[0.5, 0.5]),
        ),
        "jss" => make_jss(get("alpha", 0.3), get("beta", 0.2), get("omega", 1.0)),
        "carteret" => make_carteret(get("a", 0.2), get("theta", std::f64::consts::FRAC_PI_4)),
        "zero_discord" => {
            let ds = get("dS", 2.0) as usize;
            let mut sampler = Sampler::new(params.get("seed").copied().unwrap_or(7.0) as u64);
            let sigmas: Vec<CMatrix> = (0..ds).map(|_| sampler.density(2)).collect();
            make_zero_discord(BipartiteDims::new(ds, 2)?, &sigmas)
        }
        "shabani_lidar" => {
            let discordant = get("discordant", 0.0) > 0.5;
            let mut phis = BTreeMap::new();
            phis.insert((0, 0), CMatrix::diag(&[0.8, 0.2]));
            phis.insert((1, 1), CMatrix::diag(&[0.3, 0.7]));
            if discordant {
                // Off-diagonal block with nonzero trace keeps the kernel
                // trivial while introducing discord.
                let m = CMatrix::new(
                    2,
                    2,
                    vec![c(0.25, 0.0), c(0.1, 0.05), c(0.05, -0.02), c(0.1, 0.0)],
                )
                .unwrap();
                phis.insert((0, 1), m.clone());
                phis.insert((1, 0), m.adjoint());
            }
            make_shabani_lidar(BipartiteDims::new(2, 2)?, &phis)
        }
        "brodutch" => {
            let ds = get("dS", 3.0) as usize;
            let mut sampler = Sampler::new(params.get("seed").copied().unwrap_or(11.0) as u64);
            let sigma_plus = sampler.density(2);
            let sigmas: Vec<CMatrix> = (0..ds).map(|_| sampler.density(2)).collect();
            make_brodutch(BipartiteDims::new(ds, 2)?, &sigma_plus, &sigmas)
        }
        "buscemi" => {
            let variant = get("variant", 0.0) as usize;
            let rho = buscemi_test_state(variant)?;
            make_buscemi(&rho, (2, 2, 2))
        }
        "choi_effros_counterexample" => make_choi_effros(&CMatrix::diag(&[0.6, 0.4])),
        "consistent_pos_counterexample" => {
            let ds = get("dS", 2.0) as usize;
            let db = get("dB", 2.0) as usize;
            make_consistent_pos_counterexample(BipartiteDims::new(ds, db)?)
        }
        other => Err(Error::UnknownCase(other.into())),
    }
}

/// Pointwise evaluation of the nonlinear spectral assignment
/// `ρ_S = Σ λ_n P_n  ↦  Σ λ_n P_n ⊗ Tr_S[ρ_SB^eq (P_n ⊗ 𝟙)] / Tr[ρ_SB^eq (P_n ⊗ 𝟙)]`.
///
/// Consistent pointwise (`Tr_B` of the image recovers the input) and
/// convex-linear only when the equilibrium state is a product. Being
/// nonlinear, the map has no Choi matrix and no notion of complete
/// positivity; only this evaluation is provided.
pub fn alicki_nonlinear_assignment(
    rho_s: &CMatrix,
    rho_sb_eq: &CMatrix,
    dims: BipartiteDims,
) -> Result<CMatrix> {
    assert_state(rho_s, "system state")?;
    assert_state(rho_sb_eq, "equilibrium state")?;
    if rho_s.rows() != dims.d_s || rho_sb_eq.rows() != dims.total() {
        return Err(Error::DimensionMismatch("nonlinear assignment input".into()));
    }
    let dec = eigh(rho_s)?;
    let mut out = CMatrix::zeros(dims.total(), dims.total());
    for (n, &lam) in dec.eigenvalues.iter().enumerate() {
        if lam <= 1e-12 {
            continue;
        }
        let v = dec.eigenvector(n);
        let proj = CMatrix::outer(&v, &v);
        let weighted = rho_sb_eq
            .matmul(&kron(&proj, &CMatrix::identity(dims.d_b)))
            .partial_trace_s(dims)?;
        let denom = weighted.trace().re;
        if denom.abs() <= 1e-12 {
            return Err(Error::VanishingDenominator);
        }
        out = out.add(&kron(&proj, &weighted.scale_re(1.0 / denom).hermitian_part()).scale_re(lam));
    }
    Ok(out)
}

/// Tripartite R–S–B test states with vanishing conditional mutual
/// information: products across one cut or classical-quantum chains.
pub fn buscemi_test_state(variant: usize) -> Result<CMatrix> {
    let bell = {
        let mut v = CMatrix::zeros(4, 1);
        v.set(0, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        v.set(3, 0, c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        CMatrix::outer(&v, &v)
    };
    let state = match variant {
        // Entangled ρ_RS with an uncorrelated bath.
        0 => kron(&bell, &CMatrix::diag(&[0.7, 0.3])),
        // Uncorrelated reference with an entangled ρ_SB.
        1 => kron(&CMatrix::diag(&[0.5, 0.5]), &bell),
        // Classical chain: R copies S, bath depends on the branch.
        2 => {
            let mut out = CMatrix::zeros(8, 8);
            let tau0 = CMatrix::diag(&[0.9, 0.1]);
            let tau1 = CMatrix::diag(&[0.2, 0.8]);
            let p00 = kron(
                &kron(&CMatrix::matrix_unit(2, 0, 0), &CMatrix::matrix_unit(2, 0, 0)),
                &tau0,
            );
            let p11 = kron(
                &kron(&CMatrix::matrix_unit(2, 1, 1), &CMatrix::matrix_unit(2, 1, 1)),
                &tau1,
            );
            out = out.add(&p00.scale_re(0.6)).add(&p11.scale_re(0.4));
            out
        }
        // Full product.
        3 => kron(
            &kron(&CMatrix::diag(&[0.3, 0.7]), &CMatrix::diag(&[0.55, 0.45])),
            &CMatrix::diag(&[0.8, 0.2]),
        ),
        // Classical chain with skewed weights.
        4 => {
            let tau0 = CMatrix::diag(&[0.5, 0.5]);
            let tau1 = CMatrix::diag(&[0.1, 0.9]);
            let p00 = kron(
                &kron(&CMatrix::matrix_unit(2, 0, 0), &CMatrix::matrix_unit(2, 0, 0)),
                &tau0,
            );
            let p11 = kron(
                &kron(&CMatrix::matrix_unit(2, 1, 1), &CMatrix::matrix_unit(2, 1, 1)),
                &tau1,
            );
            p00.scale_re(0.85).add(&p11.scale_re(0.15))
        }
        _ => return Err(Error::InvalidParameter("unknown variant".into())),
    };
    Ok(state)
}
