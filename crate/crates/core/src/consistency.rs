//! G-consistency of operator subspaces: whether the kernel
//! `V₀ = ker(Tr_B|_V)` stays inside `ker Tr_B` under every allowed
//! unitary, with explicit violation witnesses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ad, eigh, hs_inner, BipartiteDims, CMatrix};
use crate::opspace::{kernel_decomposition, orthogonal_projection, OperatorSubspace};
use crate::random::Sampler;
use num_complex::Complex64;

/// Description of the allowed unitary evolutions.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SemigroupSpec {
    /// The full unitary group on `H_S ⊗ H_B`.
    Full,
    /// The local unitaries `U(H_S) ⊗ U(H_B)`.
    Local,
    /// The semigroup generated by finitely many unitaries under
    /// composition.
    Generators { generators: Vec<CMatrix> },
    /// The one-parameter semigroup `{e^{−itH} : t ≥ 0}`.
    Hamiltonian { hamiltonian: CMatrix },
}

impl SemigroupSpec {
    pub fn validate(&self, dims: BipartiteDims) -> Result<()> {
        let n = dims.total();
        match self {
            SemigroupSpec::Full | SemigroupSpec::Local => Ok(()),
            SemigroupSpec::Generators { generators } => {
                for g in generators {
                    if g.rows() != n || g.cols() != n {
                        return Err(Error::DimensionMismatch(
                            "semigroup generator has wrong dimension".into(),
                        ));
                    }
                    g.check_unitary()?;
                }
                Ok(())
            }
            SemigroupSpec::Hamiltonian { hamiltonian } => {
                if hamiltonian.rows() != n || hamiltonian.cols() != n {
                    return Err(Error::DimensionMismatch(
                        "Hamiltonian has wrong dimension".into(),
                    ));
                }
                let dev = hamiltonian.hermiticity_deviation();
                if dev > 1e-10 * hamiltonian.max_abs().max(1.0) {
                    return Err(Error::NotHermitian { deviation: dev });
                }
                Ok(())
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SemigroupSpec::Full => "full",
            SemigroupSpec::Local => "local",
            SemigroupSpec::Generators { .. } => "generators",
            SemigroupSpec::Hamiltonian { .. } => "hamiltonian",
        }
    }
}

/// A kernel element escaping `ker Tr_B` under a word of evolutions.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyWitness {
    /// Element of V₀ (so `‖Tr_B X‖ ≤ 1e-9`).
    pub kernel_element: CMatrix,
    /// Generator indices composing the escaping unitary (empty when a
    /// single sampled or given unitary is the witness).
    pub word: Vec<usize>,
    /// The escaping unitary itself.
    pub unitary: CMatrix,
    /// `‖Tr_B(U X U†)‖ > 1e-6`.
    pub escape_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyVerdict {
    pub consistent: bool,
    pub witness: Option<ConsistencyWitness>,
    /// Dimension of the invariant closure of V₀ that was examined.
    pub closure_dim: usize,
}

impl ConsistencyVerdict {
    fn yes(closure_dim: usize) -> Self {
        Self {
            consistent: true,
            witness: None,
            closure_dim,
        }
    }
}

const ESCAPE_NORM: f64 = 1e-6;
const KERNEL_NORM: f64 = 1e-9;

fn escape(x: &CMatrix, u: &CMatrix, dims: BipartiteDims) -> Result<f64> {
    Ok(ad(u, x).partial_trace_b(dims)?.fro_norm())
}

/// U-consistency: every kernel element keeps a vanishing partial trace
/// after conjugation by `U`.
pub fn check_u_consistency(v: &OperatorSubspace, u: &CMatrix) -> Result<ConsistencyVerdict> {
    let dims = v.dims();
    if u.rows() != dims.total() || u.cols() != dims.total() {
        return Err(Error::DimensionMismatch(
            "unitary dimension does not match the subspace".into(),
        ));
    }
    u.check_unitary()?;
    let kd = kernel_decomposition(v)?;
    for x in &kd.v0_basis {
        let norm = escape(x, u, dims)?;
        if norm > KERNEL_NORM {
            return Ok(ConsistencyVerdict {
                consistent: false,
                witness: Some(ConsistencyWitness {
                    kernel_element: x.clone(),
                    word: Vec::new(),
                    unitary: u.clone(),
                    escape_norm: norm,
                }),
                closure_dim: kd.dim_v0(),
            });
        }
    }
    Ok(ConsistencyVerdict::yes(kd.dim_v0()))
}

/// G-consistency for the four semigroup descriptions.
///
/// Full group: consistent iff V₀ = {0}. Local group: always consistent.
/// Finite generators: the semigroup orbit of V₀ is closed word by word
/// until the span stabilizes; consistent iff the closure stays inside
/// `ker Tr_B`. Hamiltonian: the commutator (Krylov) closure replaces the
/// orbit, since `Tr_B(e^{−itH} X e^{itH})` vanishes for all t ≥ 0 iff it
/// vanishes for every power of `ad_H`.
pub fn check_g_consistency(v: &OperatorSubspace, g: &SemigroupSpec) -> Result<ConsistencyVerdict> {
    let dims = v.dims();
    g.validate(dims)?;
    let kd = kernel_decomposition(v)?;
    match g {
        SemigroupSpec::Local => Ok(ConsistencyVerdict::yes(kd.dim_v0())),
        SemigroupSpec::Full => {
            if kd.v0_basis.is_empty() {
                return Ok(ConsistencyVerdict::yes(0));
            }
            // A Haar-random unitary exposes the violation with
            // probability one; sample deterministically.
            let mut sampler = Sampler::new(witness_seed());
            for _ in 0..50 {
                let u = sampler.haar_unitary(dims.total());
                for x in &kd.v0_basis {
                    let norm = escape(x, &u, dims)?;
                    if norm > ESCAPE_NORM {
                        return Ok(ConsistencyVerdict {
                            consistent: false,
                            witness: Some(ConsistencyWitness {
                                kernel_element: x.clone(),
                                word: Vec::new(),
                                unitary: u,
                                escape_norm: norm,
                            }),
                            closure_dim: kd.dim_v0(),
                        });
                    }
                }
            }
            // Nonzero kernel is inconsistent with the full group even if
            // sampling failed to exhibit a witness.
            Ok(ConsistencyVerdict {
                consistent: false,
                witness: None,
                closure_dim: kd.dim_v0(),
            })
        }
        SemigroupSpec::Generators { generators } => {
            orbit_closure_verdict(v, &kd.v0_basis, generators)
        }
        SemigroupSpec::Hamiltonian { hamiltonian } => {
            commutator_closure_verdict(v, &kd.v0_basis, hamiltonian)
        }
    }
}

fn grow_span(span: &mut Vec<CMatrix>, candidate: &CMatrix) -> bool {
    let mut w = candidate.clone();
    for _ in 0..2 {
        for b in span.iter() {
            let c = hs_inner(b, &w);
            w = w.sub(&b.scale(c));
        }
    }
    let norm = w.fro_norm();
    if norm > 1e-9 * candidate.fro_norm().max(1.0) {
        span.push(w.scale_re(1.0 / norm));
        true
    } else {
        false
    }
}

/// Closure of V₀ under conjugation by words of generators. Words are
/// tracked explicitly because U-consistency of each generator alone does
/// not imply consistency of their products.
fn orbit_closure_verdict(
    v: &OperatorSubspace,
    v0: &[CMatrix],
    generators: &[CMatrix],
) -> Result<ConsistencyVerdict> {
    let dims = v.dims();
    if v0.is_empty() {
        return Ok(ConsistencyVerdict::yes(0));
    }

    // Queue of concrete orbit elements (base kernel element, word).
    let mut span: Vec<CMatrix> = Vec::new();
    for x in v0 {
        grow_span(&mut span, x);
    }
    let mut queue: Vec<(CMatrix, Vec<usize>, usize)> = v0
        .iter()
        .enumerate()
        .map(|(k, x)| (x.clone(), Vec::new(), k))
        .collect();
    let mut head = 0usize;
    let eval_cap = 20_000usize;
    let mut evals = 0usize;

    while head < queue.len() && evals < eval_cap {
        let (x, word, base) = queue[head].clone();
        head += 1;
        for (gi, g) in generators.iter().enumerate() {
            evals += 1;
            let y = ad(g, &x);
            let norm = y.partial_trace_b(dims)?.fro_norm();
            let mut new_word = vec![gi];
            new_word.extend_from_slice(&word);
            if norm > ESCAPE_NORM {
                let mut u = CMatrix::identity(dims.total());
                for &w in &new_word {
                    u = u.matmul(&generators[w]);
                }
                return Ok(ConsistencyVerdict {
                    consistent: false,
                    witness: Some(ConsistencyWitness {
                        kernel_element: v0[base].clone(),
                        word: new_word,
                        unitary: u,
                        escape_norm: norm,
                    }),
                    closure_dim: span.len(),
                });
            }
            if grow_span(&mut span, &y) {
                queue.push((y, new_word, base));
            }
        }
    }
    Ok(ConsistencyVerdict::yes(span.len()))
}

/// Krylov closure of V₀ under `ad_H`. The verdict is invariant under
/// rescaling H → cH for c > 0.
fn commutator_closure_verdict(
    v: &OperatorSubspace,
    v0: &[CMatrix],
    hamiltonian: &CMatrix,
) -> Result<ConsistencyVerdict> {
    let dims = v.dims();
    if v0.is_empty() {
        return Ok(ConsistencyVerdict::yes(0));
    }
    let h = hamiltonian.hermitian_part();
    let scale = h.fro_norm().max(1e-12);
    let h = h.scale_re(1.0 / scale);

    let mut span: Vec<CMatrix> = Vec::new();
    for x in v0 {
        grow_span(&mut span, x);
    }
    let mut escaped: Option<CMatrix> = None;
    let mut idx = 0usize;
    while idx < span.len() {
        let e = span[idx].clone();
        idx += 1;
        let comm = h.matmul(&e).sub(&e.matmul(&h));
        if comm.partial_trace_b(dims)?.fro_norm() > ESCAPE_NORM * comm.fro_norm().max(1e-12) {
            escaped = Some(comm.clone());
        }
        grow_span(&mut span, &comm);
        if escaped.is_some() {
            break;
        }
    }

    if escaped.is_none() {
        return Ok(ConsistencyVerdict::yes(span.len()));
    }

    // Produce a concrete time witness: sample t and test the original
    // kernel basis under e^{−itH}.
    let dec = eigh(hamiltonian)?;
    for t in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let u = evolution_unitary(&dec, t);
        for x in v0 {
            let norm = escape(x, &u, dims)?;
            if norm > ESCAPE_NORM {
                return Ok(ConsistencyVerdict {
                    consistent: false,
                    witness: Some(ConsistencyWitness {
                        kernel_element: x.clone(),
                        word: Vec::new(),
                        unitary: u,
                        escape_norm: norm,
                    }),
                    closure_dim: span.len(),
                });
            }
        }
    }
    Ok(ConsistencyVerdict {
        consistent: false,
        witness: None,
        closure_dim: span.len(),
    })
}

/// `e^{−itH}` from the eigendecomposition of H.
pub fn evolution_unitary(dec: &crate::linalg::Eigh, t: f64) -> CMatrix {
    let n = dec.eigenvalues.len();
    let q = &dec.eigenvectors;
    let mut u = CMatrix::zeros(n, n);
    for (k, &lam) in dec.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -t * lam);
        for r in 0..n {
            for c in 0..n {
                let add = q.get(r, k) * q.get(c, k).conj() * phase;
                u.set(r, c, u.get(r, c) + add);
            }
        }
    }
    u
}

/// Whether `Ad_U` maps V into V′, which gates composition of the
/// corresponding dynamical maps.
pub fn composition_compatible(
    v: &OperatorSubspace,
    u: &CMatrix,
    v_prime: &OperatorSubspace,
) -> Result<bool> {
    if v.dims() != v_prime.dims() {
        return Err(Error::DimensionMismatch(
            "subspaces live on different bipartite spaces".into(),
        ));
    }
    u.check_unitary()?;
    for b in v.basis() {
        let image = ad(u, b);
        let resid = image.sub(&orthogonal_projection(v_prime.basis(), &image));
        if resid.fro_norm() > 1e-9 * image.fro_norm().max(1.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Internal seed used when a verdict needs its own random witnesses.
pub fn witness_seed() -> u64 {
    0xC0FFEE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, paulis, swap_unitary};
    use crate::opspace::build_subspace;

    fn dims22() -> BipartiteDims {
        BipartiteDims::new(2, 2).unwrap()
    }

    fn cnot() -> CMatrix {
        // −i(|1⟩⟨1| ⊗ σ_x + |0⟩⟨0| ⊗ 𝟙), unitarily a CNOT.
        let (sx, _, _) = paulis();
        let p0 = CMatrix::matrix_unit(2, 0, 0);
        let p1 = CMatrix::matrix_unit(2, 1, 1);
        kron(&p1, &sx)
            .add(&kron(&p0, &CMatrix::identity(2)))
            .scale(Complex64::new(0.0, -1.0))
    }

    #[test]
    fn swap_breaks_two_bath_states() {
        // span{ρ_s ⊗ ρ_b1, ρ_s ⊗ ρ_b2} under swap: inconsistent, with
        // witness proportional to ρ_s ⊗ (ρ_b1 − ρ_b2).
        let rho_s = CMatrix::diag(&[0.6, 0.4]);
        let rho_b1 = CMatrix::diag(&[1.0, 0.0]);
        let rho_b2 = CMatrix::diag(&[0.5, 0.5]);
        let v = build_subspace(&[kron(&rho_s, &rho_b1), kron(&rho_s, &rho_b2)], dims22()).unwrap();
        let verdict = check_u_consistency(&v, &swap_unitary(2)).unwrap();
        assert!(!verdict.consistent);
        let w = verdict.witness.unwrap();
        assert!(w.escape_norm > 1e-6);
        assert!(w
            .kernel_element
            .partial_trace_b(dims22())
            .unwrap()
            .fro_norm()
            <= 1e-9);
    }

    #[test]
    fn cnot_breaks_correlated_pair() {
        // ρ₁ classical and ρ₂ entangled share a reduction; CNOT tells
        // them apart.
        let a = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        let b = a;
        let mut psi = CMatrix::zeros(4, 1);
        psi.set(0, 0, a);
        psi.set(3, 0, b);
        let rho2 = CMatrix::outer(&psi, &psi);
        let mut rho1 = CMatrix::zeros(4, 4);
        rho1.set(0, 0, a * a.conj());
        rho1.set(3, 3, b * b.conj());
        let v = build_subspace(&[rho1, rho2], dims22()).unwrap();
        let verdict = check_u_consistency(&v, &cnot()).unwrap();
        assert!(!verdict.consistent);
        assert!(verdict.witness.unwrap().escape_norm > 1e-6);
    }

    #[test]
    fn trivial_kernel_is_always_consistent() {
        let rho_b = CMatrix::diag(&[0.8, 0.2]);
        let gens: Vec<CMatrix> = (0..2)
            .flat_map(|i| {
                let rho_b = rho_b.clone();
                (0..2).map(move |j| kron(&CMatrix::matrix_unit(2, i, j), &rho_b))
            })
            .collect();
        let v = build_subspace(&gens, dims22()).unwrap();
        let verdict = check_u_consistency(&v, &cnot()).unwrap();
        assert!(verdict.consistent);
        let verdict = check_g_consistency(&v, &SemigroupSpec::Full).unwrap();
        assert!(verdict.consistent);
    }

    #[test]
    fn local_group_always_consistent() {
        let rho_s = CMatrix::diag(&[0.6, 0.4]);
        let v = build_subspace(
            &[
                kron(&rho_s, &CMatrix::diag(&[1.0, 0.0])),
                kron(&rho_s, &CMatrix::diag(&[0.5, 0.5])),
            ],
            dims22(),
        )
        .unwrap();
        let verdict = check_g_consistency(&v, &SemigroupSpec::Local).unwrap();
        assert!(verdict.consistent);
    }

    #[test]
    fn full_algebra_fails_under_entangling_generator() {
        // V = B(H_SB) has V₀ = ker Tr_B, which a CNOT does not preserve.
        let mut gens = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                gens.push(CMatrix::matrix_unit(4, i, j));
            }
        }
        let v = build_subspace(&gens, dims22()).unwrap();
        let verdict = check_g_consistency(
            &v,
            &SemigroupSpec::Generators {
                generators: vec![cnot()],
            },
        )
        .unwrap();
        assert!(!verdict.consistent);
        let w = verdict.witness.unwrap();
        assert_eq!(w.word, vec![0]);
        assert!(w.escape_norm > 1e-6);
    }

    #[test]
    fn orbit_closure_tracks_words_not_single_generators() {
        // V = span{𝟙, Z⊗Z}: the kernel is ℂ·(Z⊗Z). CNOT sends it to
        // 𝟙⊗Z and swap fixes it, so each generator alone is consistent,
        // but swap∘CNOT carries the kernel to Z⊗𝟙 which escapes ker Tr_B.
        let (_, _, sz) = paulis();
        let v = build_subspace(
            &[CMatrix::identity(4), kron(&sz, &sz)],
            dims22(),
        )
        .unwrap();
        let gens = vec![cnot(), swap_unitary(2)];
        for g in &gens {
            assert!(check_u_consistency(&v, g).unwrap().consistent);
        }
        let verdict = check_g_consistency(
            &v,
            &SemigroupSpec::Generators {
                generators: gens.clone(),
            },
        )
        .unwrap();
        assert!(!verdict.consistent);
        let w = verdict.witness.unwrap();
        assert!(w.word.len() >= 2, "escape requires a composite word");
        assert!(w.escape_norm > 1e-6);
        // The reported word actually reproduces the escape.
        let mut u = CMatrix::identity(4);
        for &idx in &w.word {
            u = u.matmul(&gens[idx]);
        }
        let escape = ad(&u, &w.kernel_element)
            .partial_trace_b(dims22())
            .unwrap()
            .fro_norm();
        assert!((escape - w.escape_norm).abs() < 1e-9);
    }

    #[test]
    fn full_group_requires_trivial_kernel() {
        let rho_s = CMatrix::diag(&[0.6, 0.4]);
        let v = build_subspace(
            &[
                kron(&rho_s, &CMatrix::diag(&[1.0, 0.0])),
                kron(&rho_s, &CMatrix::diag(&[0.5, 0.5])),
            ],
            dims22(),
        )
        .unwrap();
        let verdict = check_g_consistency(&v, &SemigroupSpec::Full).unwrap();
        assert!(!verdict.consistent);
        assert!(verdict.witness.is_some());
    }

    #[test]
    fn composition_compatibility_cases() {
        let rho_b = CMatrix::diag(&[0.8, 0.2]);
        let gens: Vec<CMatrix> = (0..2)
            .flat_map(|i| {
                let rho_b = rho_b.clone();
                (0..2).map(move |j| kron(&CMatrix::matrix_unit(2, i, j), &rho_b))
            })
            .collect();
        let v = build_subspace(&gens, dims22()).unwrap();
        // Local U_S ⊗ 𝟙 preserves the product form.
        let (sx, _, _) = paulis();
        let h = sx
            .add(&CMatrix::diag(&[1.0, -1.0]))
            .scale_re(1.0 / 2f64.sqrt());
        let us = kron(&h, &CMatrix::identity(2));
        assert!(composition_compatible(&v, &us, &v).unwrap());
        // Identity is always compatible.
        assert!(composition_compatible(&v, &CMatrix::identity(4), &v).unwrap());
        // A generic entangling unitary is not.
        let mut sampler = Sampler::new(3);
        let u = sampler.haar_unitary(4);
        assert!(!composition_compatible(&v, &u, &v).unwrap());
    }

    #[test]
    fn semigroup_json_round_trip() {
        let (sx, _, sz) = paulis();
        let specs = vec![
            SemigroupSpec::Full,
            SemigroupSpec::Local,
            SemigroupSpec::Generators {
                generators: vec![swap_unitary(2)],
            },
            SemigroupSpec::Hamiltonian {
                hamiltonian: kron(&sz, &sx),
            },
        ];
        for spec in specs {
            let text = serde_json::to_string(&spec).unwrap();
            let value: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert!(["full", "local", "generators", "hamiltonian"]
                .contains(&value["kind"].as_str().unwrap()));
            let back: SemigroupSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back.kind_name(), spec.kind_name());
        }
    }

    #[test]
    fn hamiltonian_consistency_scale_invariant() {
        // span{𝟙/4, |00⟩⟨00|-ish state pair with kernel}, H = Z⊗X.
        let rho_s = CMatrix::diag(&[0.5, 0.5]);
        let v = build_subspace(
            &[
                kron(&rho_s, &CMatrix::diag(&[1.0, 0.0])),
                kron(&rho_s, &CMatrix::diag(&[0.0, 1.0])),
            ],
            dims22(),
        )
        .unwrap();
        let (sx, _, sz) = paulis();
        let h = kron(&sz, &sx);
        let v1 = check_g_consistency(
            &v,
            &SemigroupSpec::Hamiltonian {
                hamiltonian: h.clone(),
            },
        )
        .unwrap();
        let v2 = check_g_consistency(
            &v,
            &SemigroupSpec::Hamiltonian {
                hamiltonian: h.scale_re(7.5),
            },
        )
        .unwrap();
        assert_eq!(v1.consistent, v2.consistent);
        assert!(v1.closure_dim <= dims22().total() * dims22().total());
    }
}
