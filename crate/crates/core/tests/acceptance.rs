//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantities. Tolerances are pinned in the asserts.

use std::collections::BTreeMap;

use cpkit_core::assignment::{assignment_osr, build_assignment};
use cpkit_core::consistency::{check_g_consistency, check_u_consistency, SemigroupSpec};
use cpkit_core::cpclass::{
    classify_assignment_map, classify_dynamical_map, ClassifyOptions, Verdict3,
};
use cpkit_core::dynmaps::{
    build_dynamical_map, choi_of_map, dynmap_osr, physical_domain_membership, DomainVerdict,
};
use cpkit_core::feasibility::SolverCaps;
use cpkit_core::gallery::{
    buscemi_test_state, carteret_choi_formula, conditional_mutual_information,
    discordant_over_grid, make_buscemi, make_carteret, make_consistent_pos_counterexample,
    make_jss, make_zero_discord, build_case,
};
use cpkit_core::linalg::{
    ad, hs_inner, kron, min_eigenvalue, orthonormalize, paulis, swap_unitary, BipartiteDims,
    CMatrix,
};
use cpkit_core::opspace::{build_subspace, kernel_decomposition, orthogonal_projection};
use cpkit_core::random::Sampler;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dims22() -> BipartiteDims {
    BipartiteDims::new(2, 2).unwrap()
}

/// Criterion 1: the three-level counterexample. The projection onto
/// Tr_B V has Choi minimum eigenvalue 1 − √2 (to 1e-9), and the
/// assignment map classifies CP = Yes, CPZE = No.
#[test]
fn acceptance_01_choi_effros_counterexample() {
    let case = build_case("choi_effros_counterexample", &BTreeMap::new()).unwrap();
    let kd = kernel_decomposition(&case.subspace).unwrap();
    let reduced_onb = orthonormalize(&kd.reduced_basis, 1e-10);
    assert_eq!(reduced_onb.len(), 7);

    let choi_p = choi_of_map(3, 3, |i, j| {
        orthogonal_projection(&reduced_onb, &CMatrix::matrix_unit(3, i, j))
    });
    let (min_eig, vector) = min_eigenvalue(&choi_p).unwrap();
    let expected = 1.0 - 2f64.sqrt();
    assert!(
        (min_eig - expected).abs() <= 1e-9,
        "min eigenvalue {min_eig} vs 1−√2 = {expected}"
    );

    // Eigenvector collinear with −|00⟩ − |11⟩ + √2 |22⟩.
    let mut reference = CMatrix::zeros(9, 1);
    reference.set(0, 0, c(-1.0, 0.0));
    reference.set(4, 0, c(-1.0, 0.0));
    reference.set(8, 0, c(2f64.sqrt(), 0.0));
    let reference = reference.scale_re(1.0 / reference.fro_norm());
    let overlap = hs_inner(&reference, &vector).norm();
    assert!(
        (overlap - 1.0).abs() <= 1e-8,
        "eigenvector overlap {overlap}"
    );

    let a = build_assignment(&case.subspace).unwrap();
    let verdict = classify_assignment_map(&a, &ClassifyOptions::new(1));
    assert_eq!(verdict.cp, Verdict3::Yes, "assignment CP");
    assert_eq!(verdict.cpze, Verdict3::No, "assignment CPZE");

    println!(
        "ACCEPTANCE 1 PASS — Choi(P) min eigenvalue {min_eig:.12} = 1−√2 within 1e-9; assignment CP=yes, CPZE=no"
    );
}

/// Criterion 2: the correlated-pair Choi matrix matches the closed form
/// entrywise (1e-9) over a 5×5 (θ, a) grid, and the pinned verdicts
/// hold: θ=π/4 CP-Yes, θ=π CP-Yes, θ=π/6 with a=0.35 CP-No.
#[test]
fn acceptance_02_carteret_choi_formula_and_verdicts() {
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};
    let thetas = [0.0, FRAC_PI_6, FRAC_PI_4, PI / 2.0, PI];
    let a_values = [-0.8, -0.4, 0.0, 0.2, 0.35];

    let mut worst = 0.0f64;
    for &a in &a_values {
        for &theta in &thetas {
            let case = make_carteret(a, theta).unwrap();
            let am = build_assignment(&case.subspace).unwrap();
            let psi = build_dynamical_map(&am, case.unitary.as_ref().unwrap()).unwrap();
            let gap = psi
                .choi_matrix()
                .sub(&carteret_choi_formula(a, theta))
                .max_abs();
            worst = worst.max(gap);
            assert!(gap <= 1e-9, "formula gap {gap:.3e} at a={a}, θ={theta}");

            // Classifier agrees with the closed-form spectrum everywhere.
            let verdict = classify_dynamical_map(&psi, &ClassifyOptions::fast(2));
            let oracle = min_eigenvalue(&carteret_choi_formula(a, theta)).unwrap().0;
            if oracle >= -1e-9 {
                assert_eq!(verdict.cp, Verdict3::Yes, "a={a}, θ={theta}");
            } else {
                assert_eq!(verdict.cp, Verdict3::No, "a={a}, θ={theta}");
            }
        }
    }

    let verdict_at = |a: f64, theta: f64| {
        let case = make_carteret(a, theta).unwrap();
        let am = build_assignment(&case.subspace).unwrap();
        let psi = build_dynamical_map(&am, case.unitary.as_ref().unwrap()).unwrap();
        classify_dynamical_map(&psi, &ClassifyOptions::fast(3)).cp
    };
    assert_eq!(verdict_at(0.2, FRAC_PI_4), Verdict3::Yes, "θ=π/4");
    assert_eq!(verdict_at(0.2, PI), Verdict3::Yes, "θ=π");
    assert_eq!(verdict_at(0.35, FRAC_PI_6), Verdict3::No, "θ=π/6, a=0.35");

    println!(
        "ACCEPTANCE 2 PASS — Choi formula matches on 5×5 grid (worst gap {worst:.2e}); verdicts π/4:yes, π:yes, (π/6, 0.35):no"
    );
}

/// Criterion 3: physical-domain radius by bisection over radial Bloch
/// states, within ±0.02 of √((1+a)(1−3a)) for a ≥ 0 and 1+a for a ≤ 0.
#[test]
fn acceptance_03_carteret_physical_domain_radius() {
    let (_, _, sz) = paulis();
    let caps = SolverCaps::default();
    let mut report = Vec::new();
    for &a in &[0.0f64, 0.1, 0.2, 0.3, -0.2, -0.5] {
        let expected = if a >= 0.0 {
            ((1.0 + a) * (1.0 - 3.0 * a)).sqrt()
        } else {
            1.0 + a
        };
        let case = make_carteret(a, 0.0).unwrap();
        let inside_at = |r: f64| {
            let state = CMatrix::identity(2).add(&sz.scale_re(r)).scale_re(0.5);
            matches!(
                physical_domain_membership(&case.subspace, &state, caps)
                    .unwrap()
                    .verdict,
                DomainVerdict::Inside
            )
        };
        let (mut lo, mut hi) = (0.0f64, 0.999f64);
        assert!(inside_at(lo), "center must be inside at a={a}");
        let found = if inside_at(hi) {
            1.0
        } else {
            for _ in 0..12 {
                let mid = 0.5 * (lo + hi);
                if inside_at(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        };
        assert!(
            (found - expected).abs() <= 0.02,
            "a={a}: found {found:.4}, expected {expected:.4}"
        );
        report.push(format!("a={a}: {found:.3}≈{expected:.3}"));
    }
    println!(
        "ACCEPTANCE 3 PASS — domain radius transitions within ±0.02 ({})",
        report.join(", ")
    );
}

/// Criterion 4: the two-state counterexample. The assignment map is not
/// positive, witnessed by the reduction of ρ − 0.3σ whose class
/// representative has eigenvalue −0.05 (to 1e-9); every sampled
/// dynamical map is CPZE; and the physical segment endpoints match the
/// closed form to 1e-8.
#[test]
fn acceptance_04_consistent_pos_counterexample() {
    let case = make_consistent_pos_counterexample(dims22()).unwrap();
    let a = build_assignment(&case.subspace).unwrap();

    // Derived witness: input Tr_B(ρ − 0.3σ), output eigenvalue −0.05.
    let mut opts = ClassifyOptions::new(4);
    opts.candidate_witnesses = case.positivity_witnesses.clone();
    opts.extreme_points = case.extreme_points.clone();
    let verdict = classify_assignment_map(&a, &opts);
    assert_eq!(verdict.positive, Verdict3::No);
    let witness = verdict.witnesses.positive.expect("positivity witness");
    assert!(
        (witness.output_min_eigenvalue + 0.05).abs() <= 1e-9,
        "witness eigenvalue {}",
        witness.output_min_eigenvalue
    );
    // The witness input is the recorded reduction 𝟙/2 − 0.3|ψ⟩⟨ψ|.
    let psi_proj = CMatrix::matrix_unit(2, 0, 0);
    let expected_input = CMatrix::identity(2)
        .scale_re(0.5)
        .sub(&psi_proj.scale_re(0.3));
    assert!(witness.input.sub(&expected_input).max_abs() <= 1e-9);

    // 20 seeded Haar unitaries: Ψ_U is CPZE every time.
    let mut sampler = Sampler::new(0xC0FFEE);
    for k in 0..20 {
        let u = sampler.haar_unitary(4);
        let psi = build_dynamical_map(&a, &u).unwrap();
        let v = classify_dynamical_map(&psi, &ClassifyOptions::fast(100 + k));
        assert_eq!(v.cpze, Verdict3::Yes, "sample {k}");
        assert_eq!(v.cp, Verdict3::Yes, "sample {k}");
    }

    // Physical segment: the boundary state (d_B 𝟙 − ψψ)/(d_S d_B − 1) is
    // inside, (𝟙 − ψψ)/(d_S − 1) is outside, and the Inside/Outside
    // transition along the line sits at mixing weight 1/3 within 1e-8.
    let caps = SolverCaps::default();
    let inside_end = CMatrix::identity(2)
        .scale_re(2.0)
        .sub(&psi_proj)
        .scale_re(1.0 / 3.0);
    let outside_state = CMatrix::identity(2).sub(&psi_proj);
    let q_in = physical_domain_membership(&case.subspace, &inside_end, caps).unwrap();
    assert_eq!(q_in.verdict, DomainVerdict::Inside);
    assert!(q_in.residual <= 1e-8);
    let q_out = physical_domain_membership(&case.subspace, &outside_state, caps).unwrap();
    assert_eq!(q_out.verdict, DomainVerdict::Outside);

    let state_at = |t: f64| {
        psi_proj
            .scale_re(t)
            .add(&CMatrix::identity(2).sub(&psi_proj).scale_re(1.0 - t))
    };
    let inside_at = |t: f64| {
        matches!(
            physical_domain_membership(&case.subspace, &state_at(t), caps)
                .unwrap()
                .verdict,
            DomainVerdict::Inside
        )
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    assert!(!inside_at(lo) && inside_at(hi));
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if inside_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let transition = 0.5 * (lo + hi);
    assert!(
        (transition - 1.0 / 3.0).abs() <= 1e-8,
        "transition {transition} vs 1/3"
    );

    println!(
        "ACCEPTANCE 4 PASS — positivity witness eigenvalue {:.10}; 20/20 sampled maps CPZE; segment endpoint at weight {:.10}",
        witness.output_min_eigenvalue, transition
    );
}

/// Criterion 5: the swap and CNOT consistency counterexamples both fail
/// with witnesses whose escape norm exceeds 1e-6.
#[test]
fn acceptance_05_consistency_counterexamples() {
    // Swap on two product states with different bath factors.
    let rho_s = CMatrix::diag(&[0.6, 0.4]);
    let v = build_subspace(
        &[
            kron(&rho_s, &CMatrix::diag(&[1.0, 0.0])),
            kron(&rho_s, &CMatrix::diag(&[0.5, 0.5])),
        ],
        dims22(),
    )
    .unwrap();
    let verdict = check_u_consistency(&v, &swap_unitary(2)).unwrap();
    assert!(!verdict.consistent);
    let w1 = verdict.witness.unwrap();
    assert!(w1.escape_norm > 1e-6);
    assert!(
        w1.kernel_element
            .partial_trace_b(dims22())
            .unwrap()
            .fro_norm()
            <= 1e-9
    );

    // CNOT on the classical/superposed pair.
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let case = cpkit_core::gallery::make_stelmachovic_buzek_pair(c(inv, 0.0), c(inv, 0.0)).unwrap();
    let verdict = check_u_consistency(&case.subspace, case.unitary.as_ref().unwrap()).unwrap();
    assert!(!verdict.consistent);
    let w2 = verdict.witness.unwrap();
    assert!(w2.escape_norm > 1e-6);

    println!(
        "ACCEPTANCE 5 PASS — swap witness escape {:.3e}, CNOT witness escape {:.3e}, both > 1e-6",
        w1.escape_norm, w2.escape_norm
    );
}

/// Criterion 6: for 10 random (ρ_B, U) pairs the pipeline Choi matrix
/// equals the Choi built from the operators E_μν = √λ_ν ⟨μ|U|ν⟩ to 1e-8,
/// and every OSR coefficient is ≥ −1e-9.
#[test]
fn acceptance_06_kraus_pipeline_oracle() {
    let dims = dims22();
    let mut sampler = Sampler::new(6);
    let mut worst_gap = 0.0f64;
    let mut worst_coeff = f64::INFINITY;
    for trial in 0..10 {
        let rho_b = sampler.density(2);
        let u = sampler.haar_unitary(4);
        let case = cpkit_core::gallery::make_kraus(dims, &rho_b).unwrap();
        let a = build_assignment(&case.subspace).unwrap();
        let psi = build_dynamical_map(&a, &u).unwrap();

        // Direct Kraus construction from the bath eigendecomposition.
        let dec = cpkit_core::linalg::eigh(&rho_b).unwrap();
        let mut kraus_ops = Vec::new();
        for mu in 0..2 {
            for nu in 0..2 {
                let lam = dec.eigenvalues[nu].max(0.0);
                let e = CMatrix::from_fn(2, 2, |k, l| {
                    let mut acc = c(0.0, 0.0);
                    for r in 0..2 {
                        for s in 0..2 {
                            // ⟨k|⟨μ-eigvec| U |l⟩|ν-eigvec⟩
                            acc += dec.eigenvectors.get(r, mu).conj()
                                * u.get(dims.joint(k, r), dims.joint(l, s))
                                * dec.eigenvectors.get(s, nu);
                        }
                    }
                    acc * lam.sqrt()
                });
                kraus_ops.push(e);
            }
        }
        let direct_choi = choi_of_map(2, 2, |i, j| {
            let e = CMatrix::matrix_unit(2, i, j);
            let mut out = CMatrix::zeros(2, 2);
            for k in &kraus_ops {
                out = out.add(&k.matmul(&e).matmul(&k.adjoint()));
            }
            out
        });
        let gap = psi.choi_matrix().sub(&direct_choi).max_abs();
        worst_gap = worst_gap.max(gap);
        assert!(gap <= 1e-8, "trial {trial}: Choi gap {gap:.3e}");

        let osr = dynmap_osr(&psi).unwrap();
        worst_coeff = worst_coeff.min(osr.min_coefficient());
        assert!(osr.min_coefficient() >= -1e-9, "trial {trial}");
        let aosr = assignment_osr(&a, SolverCaps::default()).unwrap();
        assert!(aosr.min_coefficient() >= -1e-9, "trial {trial} assignment");
    }
    println!(
        "ACCEPTANCE 6 PASS — 10/10 pipeline vs Kraus-formula Choi gaps ≤ {worst_gap:.2e}; min OSR coefficient {worst_coeff:.2e} ≥ −1e-9"
    );
}

/// Criterion 7: the two-qubit orthocomplement example: dim V = 14 and
/// dim V₀ = 10 exactly, the Hamiltonian closure passes, positivity fails
/// at (α, β) = (0.3, 0.2) with witness |0⟩⟨0|, and α = β = 0 gives a CP
/// assignment.
#[test]
fn acceptance_07_jss() {
    let case = make_jss(0.3, 0.2, 1.0).unwrap();
    assert_eq!(case.subspace.dim(), 14);
    let kd = kernel_decomposition(&case.subspace).unwrap();
    assert_eq!(kd.dim_v0(), 10);
    assert_eq!(kd.dim_reduced(), 4);

    let verdict = check_g_consistency(&case.subspace, &case.semigroup).unwrap();
    assert!(verdict.consistent, "Hamiltonian closure");

    let a = build_assignment(&case.subspace).unwrap();
    let mut opts = ClassifyOptions::new(7);
    opts.candidate_witnesses = case.positivity_witnesses.clone();
    let v = classify_assignment_map(&a, &opts);
    assert_eq!(v.positive, Verdict3::No);
    let witness = v.witnesses.positive.expect("witness");
    assert!(
        witness.input.sub(&CMatrix::matrix_unit(2, 0, 0)).max_abs() <= 1e-9,
        "witness should be |0⟩⟨0|"
    );

    let trivial = make_jss(0.0, 0.0, 1.0).unwrap();
    let a0 = build_assignment(&trivial.subspace).unwrap();
    let v0 = classify_assignment_map(&a0, &ClassifyOptions::new(8));
    assert_eq!(v0.cp, Verdict3::Yes, "α=β=0 assignment CP");

    println!(
        "ACCEPTANCE 7 PASS — dims 14/10/4 exact; closure consistent; (0.3,0.2) positive=no with |0⟩⟨0| witness (eig {:.4}); (0,0) cp=yes",
        witness.output_min_eigenvalue
    );
}

/// Criterion 8: zero-discord and the discordant-projector construction:
/// assignment CPZE, CPZE for 20 sampled dynamical maps each, and the
/// correlated state flagged discordant over the basis grid.
#[test]
fn acceptance_08_zero_discord_and_brodutch() {
    let dims = dims22();
    let mut sampler = Sampler::new(8);
    let sigmas = vec![sampler.density(2), sampler.density(2)];
    let zd = make_zero_discord(dims, &sigmas).unwrap();
    let a_zd = build_assignment(&zd.subspace).unwrap();
    let v_zd = classify_assignment_map(&a_zd, &ClassifyOptions::new(81));
    assert_eq!(v_zd.cpze, Verdict3::Yes, "zero-discord assignment CPZE");

    let brodutch = build_case("brodutch", &BTreeMap::new()).unwrap();
    let a_br = build_assignment(&brodutch.subspace).unwrap();
    let v_br = classify_assignment_map(&a_br, &ClassifyOptions::new(82));
    assert_eq!(v_br.cpze, Verdict3::Yes, "brodutch assignment CPZE");

    let mut unitary_sampler = Sampler::new(0xBEEF);
    for k in 0..20 {
        let u4 = unitary_sampler.haar_unitary(4);
        let psi = build_dynamical_map(&a_zd, &u4).unwrap();
        let v = classify_dynamical_map(&psi, &ClassifyOptions::fast(200 + k));
        assert_eq!(v.cpze, Verdict3::Yes, "zero-discord map {k}");

        let u6 = unitary_sampler.haar_unitary(6);
        let psi = build_dynamical_map(&a_br, &u6).unwrap();
        let v = classify_dynamical_map(&psi, &ClassifyOptions::fast(300 + k));
        assert_eq!(v.cpze, Verdict3::Yes, "brodutch map {k}");
    }

    // Discord flags: the correlated ρ₀₁ is discordant; every state in
    // the zero-discord span is classical-quantum in the computational
    // basis.
    assert_eq!(brodutch.expected.discordant, Some(true));
    let mixed = kron(&CMatrix::matrix_unit(2, 0, 0), &sigmas[0])
        .scale_re(0.5)
        .add(&kron(&CMatrix::matrix_unit(2, 1, 1), &sigmas[1]).scale_re(0.5));
    assert!(!discordant_over_grid(&mixed, dims, 50, 9));

    println!(
        "ACCEPTANCE 8 PASS — assignment CPZE yes (zero-discord and correlated-projector); 40/40 sampled maps CPZE; discord flags correct"
    );
}

/// Criterion 9: five tripartite states with vanishing conditional mutual
/// information (verified ≤ 1e-8) all induce CP dynamical maps for 20
/// seeded Haar unitaries each.
#[test]
fn acceptance_09_buscemi() {
    let mut all = Vec::new();
    for variant in 0..5 {
        let rho = buscemi_test_state(variant).unwrap();
        let report = conditional_mutual_information(&rho, (2, 2, 2)).unwrap();
        assert!(
            report.conditional_mutual_information <= 1e-8,
            "variant {variant} CMI {}",
            report.conditional_mutual_information
        );
        let case = make_buscemi(&rho, (2, 2, 2)).unwrap();
        let a = build_assignment(&case.subspace).unwrap();
        let mut sampler = Sampler::new(900 + variant as u64);
        for k in 0..20 {
            let u = sampler.haar_unitary(4);
            let psi = build_dynamical_map(&a, &u).unwrap();
            let v = classify_dynamical_map(&psi, &ClassifyOptions::fast(1000 + k));
            assert_eq!(v.cp, Verdict3::Yes, "variant {variant} sample {k}");
        }
        all.push(format!("v{variant}:20/20"));
    }
    println!(
        "ACCEPTANCE 9 PASS — 5 vanishing-CMI states, CP yes on every sampled map ({})",
        all.join(" ")
    );
}

/// Criterion 10: implication-lattice and residual suite over the whole
/// gallery plus 200 random subspaces: no emitted verdict violates
/// CPTE ⇒ CP, CPZE ⇒ CP, CP ⇒ Positive, and trace preservation and
/// †-linearity residuals stay ≤ 1e-9 on all constructed maps.
#[test]
fn acceptance_10_lattice_and_residual_suite() {
    let mut verdicts = 0usize;
    let check_residuals = |a: &cpkit_core::assignment::AssignmentMap| {
        for (s, rep) in a.source().iter().zip(a.representatives()) {
            assert!((rep.trace() - s.trace()).norm() <= 1e-9);
            assert!(a.apply_extended(&s.adjoint()).sub(&rep.adjoint()).max_abs() <= 1e-9);
        }
    };

    // Gallery sweep.
    for info in cpkit_core::gallery::list_cases() {
        let case = build_case(info.name, &BTreeMap::new()).unwrap();
        let consistent = check_g_consistency(&case.subspace, &case.semigroup)
            .map(|v| v.consistent)
            .unwrap_or(false);
        let a = build_assignment(&case.subspace).unwrap();
        check_residuals(&a);
        let v = classify_assignment_map(&a, &ClassifyOptions::fast(verdicts as u64));
        assert!(v.lattice_consistent(), "{}: {:?}", info.name, v);
        verdicts += 1;
        if consistent {
            let mut sampler = Sampler::new(10_000 + verdicts as u64);
            let us = cpkit_core::report::sample_unitaries(
                &case.semigroup,
                case.dims,
                3,
                &mut sampler,
            );
            for u in us {
                let psi = build_dynamical_map(&a, &u).unwrap();
                for (b, img) in psi.domain_basis().iter().zip(psi.images()) {
                    assert!((img.trace() - b.trace()).norm() <= 1e-9);
                    assert!(psi
                        .apply_extended(&b.adjoint())
                        .sub(&img.adjoint())
                        .max_abs()
                        <= 1e-9);
                }
                let v = classify_dynamical_map(&psi, &ClassifyOptions::fast(verdicts as u64));
                assert!(v.lattice_consistent(), "{}: {:?}", info.name, v);
                verdicts += 1;
            }
        }
    }

    // Random subspaces under local unitaries (always consistent).
    let mut sampler = Sampler::new(0x10CA1);
    for trial in 0..200 {
        let n_states = 1 + trial % 4;
        let gens: Vec<CMatrix> = (0..n_states).map(|_| sampler.density(4)).collect();
        let v = build_subspace(&gens, dims22()).unwrap();
        let a = build_assignment(&v).unwrap();
        check_residuals(&a);
        let u = sampler.local_unitary(dims22());
        let psi = build_dynamical_map(&a, &u).unwrap();
        for (b, img) in psi.domain_basis().iter().zip(psi.images()) {
            assert!((img.trace() - b.trace()).norm() <= 1e-9);
        }
        let mut opts = ClassifyOptions::fast(5000 + trial as u64);
        opts.witness_directions = 2;
        let verdict = classify_dynamical_map(&psi, &opts);
        assert!(verdict.lattice_consistent(), "trial {trial}: {verdict:?}");
        assert!(verdict.notes.is_empty(), "certificate conflict in trial {trial}: {verdict:?}");
        let averdict = classify_assignment_map(&a, &opts);
        assert!(averdict.lattice_consistent(), "trial {trial}: {averdict:?}");
        assert!(averdict.notes.is_empty(), "certificate conflict in trial {trial}: {averdict:?}");
        verdicts += 2;
    }

    println!(
        "ACCEPTANCE 10 PASS — {verdicts} verdicts emitted, zero lattice violations; all residuals ≤ 1e-9"
    );
}

/// Criterion 11: lemma-level property checks. Subspaces with nontrivial
/// kernel fail full-group consistency with a sampled witness found
/// within 50 unitaries in ≥ 99 of 100 runs, and kernel elements stay in
/// `ker Tr_B` under 100 random local unitaries to 1e-9.
#[test]
fn acceptance_11_lemma_checks() {
    let dims = dims22();
    let mut sampler = Sampler::new(11);
    let mut witnessed = 0usize;
    for _ in 0..100 {
        // Two states sharing a reduction guarantee V₀ ≠ {0}.
        let rho_s = sampler.density(2);
        let t1 = sampler.density(2);
        let t2 = sampler.density(2);
        let v = build_subspace(&[kron(&rho_s, &t1), kron(&rho_s, &t2)], dims).unwrap();
        let kd = kernel_decomposition(&v).unwrap();
        assert!(kd.dim_v0() > 0);
        let verdict = check_g_consistency(&v, &SemigroupSpec::Full).unwrap();
        assert!(!verdict.consistent);
        if let Some(w) = verdict.witness {
            assert!(w.escape_norm > 1e-6);
            witnessed += 1;
        }
    }
    assert!(witnessed >= 99, "witnesses found in {witnessed}/100 runs");

    // Local unitaries preserve ker Tr_B.
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x = sampler.hermitian(4);
        let kernel_part = {
            let reduced = x.partial_trace_b(dims).unwrap();
            x.sub(&kron(&reduced, &CMatrix::identity(2)).scale_re(0.5))
        };
        assert!(kernel_part.partial_trace_b(dims).unwrap().fro_norm() <= 1e-9);
        let u = sampler.local_unitary(dims);
        let escape = ad(&u, &kernel_part)
            .partial_trace_b(dims)
            .unwrap()
            .fro_norm();
        worst = worst.max(escape);
        assert!(escape <= 1e-9);
    }

    println!(
        "ACCEPTANCE 11 PASS — {witnessed}/100 kernel subspaces witnessed inconsistent; local-unitary kernel escape ≤ {worst:.2e}"
    );
}
