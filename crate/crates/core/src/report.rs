//! The analysis pipeline: resolve a subspace, run the requested checks
//! in dependency order, and emit a machine-readable report. Reports are
//! reproducible bit-for-bit under a fixed seed, except for timings.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::assignment::{assignment_osr, build_assignment, AssignmentMap};
use crate::consistency::{check_g_consistency, check_u_consistency, SemigroupSpec};
use crate::cpclass::{
    classify_assignment_map, classify_dynamical_map, CPVerdict, ClassifyOptions, Verdict3,
};
use crate::dynmaps::{
    build_dynamical_map, dynmap_osr, physical_domain_membership, DomainVerdict, DynamicalMap,
};
use crate::error::{Error, Result};
use crate::feasibility::SolverCaps;
use crate::gallery::{build_case, DomainExpectation, GalleryCase};
use crate::linalg::{eigh, min_eigenvalue, BipartiteDims, CMatrix};
use crate::opspace::{
    build_subspace, check_state_spanned, kernel_decomposition, OperatorSubspace,
    StateSearchBudget,
};
use crate::random::Sampler;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_SAMPLES: usize = 20;

/// Subspace file schema: `{"dS":…, "dB":…, "generators":[matrix,…]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceJson {
    #[serde(rename = "dS")]
    pub d_s: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
    pub generators: Vec<CMatrix>,
}

impl SubspaceJson {
    pub fn build(&self) -> Result<OperatorSubspace> {
        build_subspace(&self.generators, BipartiteDims::new(self.d_s, self.d_b)?)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceSource {
    Gallery {
        name: String,
        params: BTreeMap<String, f64>,
    },
    Inline(SubspaceJson),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Consistency,
    StateSpanned,
    Assignment,
    Osr,
    Dynmap,
    Positive,
    Cp,
    Cpte,
    Cpze,
    Domain,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Consistency,
        CheckKind::StateSpanned,
        CheckKind::Assignment,
        CheckKind::Osr,
        CheckKind::Dynmap,
        CheckKind::Positive,
        CheckKind::Cp,
        CheckKind::Cpte,
        CheckKind::Cpze,
        CheckKind::Domain,
    ];

    pub fn parse(s: &str) -> Result<CheckKind> {
        Ok(match s {
            "consistency" => CheckKind::Consistency,
            "state_spanned" => CheckKind::StateSpanned,
            "assignment" => CheckKind::Assignment,
            "osr" => CheckKind::Osr,
            "dynmap" => CheckKind::Dynmap,
            "positive" => CheckKind::Positive,
            "cp" => CheckKind::Cp,
            "cpte" => CheckKind::Cpte,
            "cpze" => CheckKind::Cpze,
            "domain" => CheckKind::Domain,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown check `{other}`"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Consistency => "consistency",
            CheckKind::StateSpanned => "state_spanned",
            CheckKind::Assignment => "assignment",
            CheckKind::Osr => "osr",
            CheckKind::Dynmap => "dynmap",
            CheckKind::Positive => "positive",
            CheckKind::Cp => "cp",
            CheckKind::Cpte => "cpte",
            CheckKind::Cpze => "cpze",
            CheckKind::Domain => "domain",
        }
    }

    fn needs_classification(&self) -> bool {
        matches!(
            self,
            CheckKind::Positive | CheckKind::Cp | CheckKind::Cpte | CheckKind::Cpze
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisRequest {
    pub source: SubspaceSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary: Option<CMatrix>,
    pub checks: Vec<CheckKind>,
    pub seed: u64,
    pub samples: usize,
    /// Named tolerance overrides; recognized keys are
    /// `feasibility_tol`, `iteration_cap`, and `plateau_window`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
}

impl AnalysisRequest {
    fn solver_caps(&self) -> Result<SolverCaps> {
        let mut caps = SolverCaps::default();
        for (key, value) in &self.tolerances {
            match key.as_str() {
                "feasibility_tol" => caps.tolerance = *value,
                "iteration_cap" => caps.iteration_cap = *value as usize,
                "plateau_window" => caps.plateau_window = *value as usize,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown tolerance `{other}`"
                    )))
                }
            }
        }
        Ok(caps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Completed,
    Skipped,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub outcome: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    #[serde(rename = "toolVersion")]
    pub tool_version: String,
    pub seed: u64,
    pub request: AnalysisRequest,
    pub results: Vec<CheckResult>,
    /// Milliseconds per check; the only nondeterministic part of a
    /// report.
    pub timings_ms: BTreeMap<String, u128>,
    /// Mismatches against a gallery case's expected record, when the
    /// request came from the gallery.
    #[serde(rename = "expectationMismatches")]
    pub expectation_mismatches: Vec<String>,
}

impl AnalysisReport {
    pub fn operational_failures(&self) -> usize {
        self.results
            .iter()
            .filter(|r| r.status == CheckStatus::Failed)
            .count()
    }
}

fn verdict_str(v: Verdict3) -> &'static str {
    match v {
        Verdict3::Yes => "yes",
        Verdict3::No => "no",
        Verdict3::Undetermined => "undetermined",
    }
}

fn verdict_json(v: &CPVerdict) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

/// Deterministic family of evolutions to sample from a semigroup.
pub fn sample_unitaries(
    semigroup: &SemigroupSpec,
    dims: BipartiteDims,
    count: usize,
    sampler: &mut Sampler,
) -> Vec<CMatrix> {
    let n = dims.total();
    match semigroup {
        SemigroupSpec::Full => (0..count).map(|_| sampler.haar_unitary(n)).collect(),
        SemigroupSpec::Local => (0..count).map(|_| sampler.local_unitary(dims)).collect(),
        SemigroupSpec::Generators { generators } => {
            let mut out = Vec::new();
            for _ in 0..count {
                let len = 1 + (sampler.normal().abs() as usize % 4);
                let mut u = CMatrix::identity(n);
                for _ in 0..len {
                    let pick =
                        (sampler.normal().abs() * 977.0) as usize % generators.len().max(1);
                    u = u.matmul(&generators[pick]);
                }
                out.push(u);
            }
            out
        }
        SemigroupSpec::Hamiltonian { hamiltonian } => {
            let dec = match eigh(hamiltonian) {
                Ok(d) => d,
                Err(_) => return Vec::new(),
            };
            let scale = hamiltonian.fro_norm().max(1e-9);
            (0..count)
                .map(|_| {
                    let t = (sampler.normal().abs() + 0.05) * 4.0 / scale;
                    crate::consistency::evolution_unitary(&dec, t)
                })
                .collect()
        }
    }
}

struct Pipeline {
    subspace: OperatorSubspace,
    semigroup: SemigroupSpec,
    distinguished: Option<CMatrix>,
    case: Option<GalleryCase>,
    seed: u64,
    samples: usize,
    caps: SolverCaps,
    consistent: Option<bool>,
    assignment: Option<AssignmentMap>,
    dynmaps: Vec<DynamicalMap>,
    assignment_verdict: Option<CPVerdict>,
    dynmap_verdicts: Vec<CPVerdict>,
}

impl Pipeline {
    fn classify_opts(&self, salt: u64) -> ClassifyOptions {
        let mut opts = ClassifyOptions::new(self.seed.wrapping_add(salt));
        opts.caps = self.caps;
        if let Some(case) = &self.case {
            opts.candidate_witnesses = case.positivity_witnesses.clone();
            opts.extreme_points = case.extreme_points.clone();
        }
        opts
    }

    fn ensure_assignment(&mut self) -> Result<&AssignmentMap> {
        if self.assignment.is_none() {
            self.assignment = Some(build_assignment(&self.subspace)?);
        }
        Ok(self.assignment.as_ref().unwrap())
    }

    fn ensure_dynmaps(&mut self) -> Result<()> {
        if !self.dynmaps.is_empty() {
            return Ok(());
        }
        self.ensure_assignment()?;
        let a = self.assignment.as_ref().unwrap();
        let mut unitaries = Vec::new();
        if let Some(u) = &self.distinguished {
            unitaries.push(u.clone());
        }
        let mut sampler = Sampler::new(self.seed);
        unitaries.extend(sample_unitaries(
            &self.semigroup,
            self.subspace.dims(),
            self.samples,
            &mut sampler,
        ));
        for u in unitaries {
            self.dynmaps.push(build_dynamical_map(a, &u)?);
        }
        Ok(())
    }

    fn ensure_classification(&mut self) -> Result<()> {
        if self.assignment_verdict.is_some() {
            return Ok(());
        }
        self.ensure_dynmaps()?;
        let opts = self.classify_opts(0x5eed);
        let a = self.assignment.as_ref().unwrap();
        self.assignment_verdict = Some(classify_assignment_map(a, &opts));
        for (k, psi) in self.dynmaps.iter().enumerate() {
            let opts = self.classify_opts(0x10_000 + k as u64);
            self.dynmap_verdicts.push(classify_dynamical_map(psi, &opts));
        }
        Ok(())
    }
}

/// Execute the dependency-ordered pipeline for one request. Check
/// failures are recorded per check and never abort later independent
/// checks.
pub fn run_analyze(request: AnalysisRequest) -> Result<AnalysisReport> {
    let (subspace, case) = match &request.source {
        SubspaceSource::Gallery { name, params } => {
            let case = build_case(name, params)?;
            (case.subspace.clone(), Some(case))
        }
        SubspaceSource::Inline(json) => (json.build()?, None),
    };
    let semigroup = request
        .semigroup
        .clone()
        .or_else(|| case.as_ref().map(|c| c.semigroup.clone()))
        .unwrap_or(SemigroupSpec::Full);
    let distinguished = request
        .unitary
        .clone()
        .or_else(|| case.as_ref().and_then(|c| c.unitary.clone()));

    let caps = request.solver_caps()?;
    let mut pipeline = Pipeline {
        subspace,
        semigroup,
        distinguished,
        case,
        seed: request.seed,
        samples: request.samples,
        caps,
        consistent: None,
        assignment: None,
        dynmaps: Vec::new(),
        assignment_verdict: None,
        dynmap_verdicts: Vec::new(),
    };

    let mut results = Vec::new();
    let mut timings = BTreeMap::new();

    // Dependency order: consistency gates the dynamical-map checks.
    let mut checks = request.checks.clone();
    checks.sort_by_key(|c| CheckKind::ALL.iter().position(|k| k == c).unwrap_or(99));
    checks.dedup();

    for check in &checks {
        let started = Instant::now();
        let result = run_check(*check, &mut pipeline);
        timings.insert(check.name().to_string(), started.elapsed().as_millis());
        results.push(result);
    }

    let case_copy = pipeline.case.clone();
    let expectation_mismatches = case_copy
        .as_ref()
        .map(|case| expectation_mismatches(case, &mut pipeline))
        .unwrap_or_default();

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: request.seed,
        request,
        results,
        timings_ms: timings,
        expectation_mismatches,
    })
}

fn dynmap_gate(pipeline: &Pipeline, check: CheckKind) -> Option<CheckResult> {
    let gated = matches!(check, CheckKind::Dynmap | CheckKind::Osr) || check.needs_classification();
    if gated && pipeline.consistent == Some(false) {
        return Some(CheckResult {
            check: check.name(),
            status: CheckStatus::Skipped,
            outcome: serde_json::Value::Null,
            reason: Some(
                "subspace is not consistent for the requested semigroup; dynamical maps are ill-defined"
                    .into(),
            ),
        });
    }
    None
}

fn run_check(check: CheckKind, pipeline: &mut Pipeline) -> CheckResult {
    if let Some(skip) = dynmap_gate(pipeline, check) {
        return skip;
    }
    let outcome: Result<serde_json::Value> = match check {
        CheckKind::Consistency => check_consistency(pipeline),
        CheckKind::StateSpanned => check_state_spanned_outcome(pipeline),
        CheckKind::Assignment => check_assignment(pipeline),
        CheckKind::Osr => check_osr(pipeline),
        CheckKind::Dynmap => check_dynmap(pipeline),
        CheckKind::Positive | CheckKind::Cp | CheckKind::Cpte | CheckKind::Cpze => {
            check_classification(check, pipeline)
        }
        CheckKind::Domain => check_domain(pipeline),
    };
    match outcome {
        Ok(value) => CheckResult {
            check: check.name(),
            status: CheckStatus::Completed,
            outcome: value,
            reason: None,
        },
        Err(Error::Inconsistent(msg)) => CheckResult {
            check: check.name(),
            status: CheckStatus::Skipped,
            outcome: serde_json::Value::Null,
            reason: Some(format!("inconsistent evolution: {msg}")),
        },
        Err(err) => CheckResult {
            check: check.name(),
            status: CheckStatus::Failed,
            outcome: serde_json::Value::Null,
            reason: Some(err.to_string()),
        },
    }
}

fn check_consistency(pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    let verdict = check_g_consistency(&pipeline.subspace, &pipeline.semigroup)?;
    pipeline.consistent = Some(verdict.consistent);
    let mut value = serde_json::to_value(&verdict)?;
    if let Some(u) = &pipeline.distinguished {
        let uv = check_u_consistency(&pipeline.subspace, u)?;
        value["distinguishedUnitary"] = json!({
            "consistent": uv.consistent,
            "escapeNorm": uv.witness.as_ref().map(|w| w.escape_norm),
        });
        if pipeline.consistent == Some(true) && !uv.consistent {
            pipeline.consistent = Some(false);
        }
    }
    Ok(value)
}

fn check_state_spanned_outcome(pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    let report = check_state_spanned(&pipeline.subspace, &StateSearchBudget::default());
    Ok(json!({
        "status": report.status,
        "statesFound": report.states.len(),
        "dimension": pipeline.subspace.dim(),
    }))
}

fn check_assignment(pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    let kd = kernel_decomposition(&pipeline.subspace)?;
    let dim_v = pipeline.subspace.dim();
    pipeline.ensure_assignment()?;
    let a = pipeline.assignment.as_ref().unwrap();
    let tp_residual = a
        .source()
        .iter()
        .zip(a.representatives())
        .map(|(s, r)| (r.trace() - s.trace()).norm())
        .fold(0.0, f64::max);
    let adj_residual = a
        .source()
        .iter()
        .zip(a.representatives())
        .map(|(s, r)| {
            a.apply_extended(&s.adjoint())
                .sub(&r.adjoint())
                .max_abs()
        })
        .fold(0.0, f64::max);
    Ok(json!({
        "dimV": dim_v,
        "dimV0": kd.dim_v0(),
        "dimDomain": a.dim_domain(),
        "sectionResidual": a.section_residual(),
        "tracePreservationResidual": tp_residual,
        "adjointLinearityResidual": adj_residual,
    }))
}

fn check_osr(pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    pipeline.ensure_assignment()?;
    let a = pipeline.assignment.as_ref().unwrap();
    let osr = assignment_osr(a, pipeline.caps)?;
    let recon = a
        .source()
        .iter()
        .map(|s| {
            let direct = a.apply_extended(s);
            let rebuilt = osr.apply(s);
            let mut diff = rebuilt.sub(&direct);
            // Compare modulo V₀.
            diff = diff.sub(&crate::opspace::orthogonal_projection(a.v0_basis(), &diff));
            diff.max_abs()
        })
        .fold(0.0, f64::max);
    let mut value = json!({
        "assignment": {
            "coefficients": osr.coefficients,
            "minCoefficient": osr.min_coefficient(),
            "reconstructionError": recon,
        }
    });
    if pipeline.distinguished.is_some() {
        pipeline.ensure_dynmaps()?;
        if let Some(psi) = pipeline.dynmaps.first() {
            let osr = dynmap_osr(psi)?;
            let recon = psi
                .domain_basis()
                .iter()
                .map(|b| osr.apply(b).sub(&psi.apply_extended(b)).max_abs())
                .fold(0.0, f64::max);
            value["dynamicalMap"] = json!({
                "coefficients": osr.coefficients,
                "minCoefficient": osr.min_coefficient(),
                "reconstructionError": recon,
            });
        }
    }
    Ok(value)
}

fn check_dynmap(pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    pipeline.ensure_dynmaps()?;
    let mut maps = Vec::new();
    for (k, psi) in pipeline.dynmaps.iter().enumerate() {
        let tp = psi
            .domain_basis()
            .iter()
            .zip(psi.images())
            .map(|(b, img)| (img.trace() - b.trace()).norm())
            .fold(0.0, f64::max);
        let (min_eig, _) = min_eigenvalue(psi.choi_matrix())?;
        let mut entry = json!({
            "index": k,
            "choiMinEigenvalue": min_eig,
            "tracePreservationResidual": tp,
        });
        if k == 0 && pipeline.distinguished.is_some() {
            entry["choi"] = serde_json::to_value(psi.choi_matrix())?;
        }
        maps.push(entry);
    }
    Ok(json!({ "maps": maps, "count": pipeline.dynmaps.len() }))
}

fn check_classification(check: CheckKind, pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    pipeline.ensure_classification()?;
    let averdict = pipeline.assignment_verdict.as_ref().unwrap();
    let field = |v: &CPVerdict| match check {
        CheckKind::Positive => v.positive,
        CheckKind::Cp => v.cp,
        CheckKind::Cpte => v.cpte,
        _ => v.cpze,
    };
    let dyn_fields: Vec<serde_json::Value> = pipeline
        .dynmap_verdicts
        .iter()
        .enumerate()
        .map(|(k, v)| json!({"index": k, "verdict": verdict_str(field(v))}))
        .collect();
    Ok(json!({
        "assignment": verdict_str(field(averdict)),
        "assignmentVerdict": verdict_json(averdict),
        "dynamicalMaps": dyn_fields,
    }))
}

fn check_domain(pipeline: &mut Pipeline) -> Result<serde_json::Value> {
    let ds = pipeline.subspace.dims().d_s;
    let mut probes: Vec<(String, CMatrix)> = Vec::new();
    if let Some(case) = &pipeline.case {
        match &case.expected.domain {
            Some(DomainExpectation::Segment {
                inside_end,
                outside_state,
            }) => {
                probes.push(("segment inside end".into(), inside_end.clone()));
                probes.push(("segment outside state".into(), outside_state.clone()));
            }
            Some(DomainExpectation::BlochBall { radius }) => {
                let (_, _, sz) = crate::linalg::paulis();
                let inner = CMatrix::identity(2)
                    .add(&sz.scale_re((radius - 0.05).max(0.0)))
                    .scale_re(0.5);
                let outer = CMatrix::identity(2)
                    .add(&sz.scale_re((radius + 0.05).min(0.999)))
                    .scale_re(0.5);
                probes.push((format!("radius {:.4}", radius - 0.05), inner));
                probes.push((format!("radius {:.4}", radius + 0.05), outer));
            }
            _ => {}
        }
    }
    // Generic probe: the projected maximally mixed state, normalized.
    let kd = kernel_decomposition(&pipeline.subspace)?;
    let reduced_onb = crate::linalg::orthonormalize(&kd.reduced_basis, 1e-10);
    let mixed = CMatrix::identity(ds).scale_re(1.0 / ds as f64);
    let proj = crate::opspace::orthogonal_projection(&reduced_onb, &mixed).hermitian_part();
    if proj.trace().re.abs() > 1e-6 {
        let candidate = proj.scale_re(1.0 / proj.trace().re);
        if min_eigenvalue(&candidate)?.0 >= -1e-9 {
            probes.push(("projected maximally mixed".into(), candidate));
        }
    }

    let mut out = Vec::new();
    for (label, state) in probes {
        let query = physical_domain_membership(&pipeline.subspace, &state, pipeline.caps)?;
        out.push(json!({
            "probe": label,
            "verdict": match query.verdict {
                DomainVerdict::Inside => "inside",
                DomainVerdict::Outside => "outside",
                DomainVerdict::Undetermined => "undetermined",
            },
            "residual": query.residual,
        }));
    }
    Ok(json!({ "probes": out }))
}

/// Re-derive a gallery case's expected record and list every mismatch.
fn expectation_mismatches(case: &GalleryCase, pipeline: &mut Pipeline) -> Vec<String> {
    let mut mismatches = Vec::new();
    let expected = &case.expected;

    if let Some(consistent) = expected.consistent {
        match check_g_consistency(&pipeline.subspace, &pipeline.semigroup) {
            Ok(v) => {
                let mut derived = v.consistent;
                if let Some(u) = &pipeline.distinguished {
                    if let Ok(uv) = check_u_consistency(&pipeline.subspace, u) {
                        derived = derived && uv.consistent;
                    }
                }
                if derived != consistent {
                    mismatches.push(format!(
                        "consistency: expected {consistent}, derived {derived}"
                    ));
                }
            }
            Err(e) => mismatches.push(format!("consistency: {e}")),
        }
    }

    if let (Some(dim_v), dim) = (expected.dim_v, pipeline.subspace.dim()) {
        if dim != dim_v {
            mismatches.push(format!("dim V: expected {dim_v}, derived {dim}"));
        }
    }
    if expected.dim_v0.is_some() || expected.dim_reduced.is_some() {
        match kernel_decomposition(&pipeline.subspace) {
            Ok(kd) => {
                if let Some(d0) = expected.dim_v0 {
                    if kd.dim_v0() != d0 {
                        mismatches
                            .push(format!("dim V0: expected {d0}, derived {}", kd.dim_v0()));
                    }
                }
                if let Some(dr) = expected.dim_reduced {
                    if kd.dim_reduced() != dr {
                        mismatches.push(format!(
                            "dim Tr_B V: expected {dr}, derived {}",
                            kd.dim_reduced()
                        ));
                    }
                }
            }
            Err(e) => mismatches.push(format!("kernel decomposition: {e}")),
        }
    }

    if let Some(status) = expected.state_spanned {
        let report = check_state_spanned(&pipeline.subspace, &StateSearchBudget::default());
        if report.status != status {
            mismatches.push(format!(
                "state spanned: expected {status:?}, derived {:?}",
                report.status
            ));
        }
    }

    let needs_assignment = expected.assignment_positive.is_some()
        || expected.assignment_cp.is_some()
        || expected.assignment_cpze.is_some();
    if needs_assignment && pipeline.ensure_classification().is_ok() {
        let v = pipeline.assignment_verdict.as_ref().unwrap();
        let mut check = |label: &str, want: Option<Verdict3>, got: Verdict3| {
            if let Some(w) = want {
                if w != got {
                    mismatches.push(format!(
                        "assignment {label}: expected {}, derived {}",
                        verdict_str(w),
                        verdict_str(got)
                    ));
                }
            }
        };
        check("positive", expected.assignment_positive, v.positive);
        check("cp", expected.assignment_cp, v.cp);
        check("cpze", expected.assignment_cpze, v.cpze);
    }

    if let Some(domain) = &expected.domain {
        let caps = pipeline.caps;
        let mut probe = |label: &str, state: &CMatrix, want: DomainVerdict| {
            match physical_domain_membership(&pipeline.subspace, state, caps) {
                Ok(q) if q.verdict == want => {}
                Ok(q) => mismatches.push(format!(
                    "domain {label}: expected {want:?}, derived {:?}",
                    q.verdict
                )),
                Err(e) => mismatches.push(format!("domain {label}: {e}")),
            }
        };
        match domain {
            DomainExpectation::Segment {
                inside_end,
                outside_state,
            } => {
                probe("segment inside end", inside_end, DomainVerdict::Inside);
                probe("segment outside state", outside_state, DomainVerdict::Outside);
            }
            DomainExpectation::BlochBall { radius } => {
                let (_, _, sz) = crate::linalg::paulis();
                let state_at = |r: f64| {
                    CMatrix::identity(2)
                        .add(&sz.scale_re(r))
                        .scale_re(0.5)
                };
                if *radius >= 0.07 {
                    probe("ball interior", &state_at(radius - 0.05), DomainVerdict::Inside);
                }
                if *radius <= 0.93 {
                    probe("ball exterior", &state_at(radius + 0.05), DomainVerdict::Outside);
                }
            }
            DomainExpectation::AllStates => {
                let mut sampler = Sampler::new(pipeline.seed ^ 0xD0F);
                for k in 0..3 {
                    let rho = sampler.density(pipeline.subspace.dims().d_s);
                    probe(&format!("random state {k}"), &rho, DomainVerdict::Inside);
                }
            }
        }
    }

    let needs_dynmaps = expected.dynmap_cp.is_some()
        || expected.dynmap_cp_sampled.is_some()
        || expected.dynmap_cpze_sampled.is_some();
    if needs_dynmaps {
        if pipeline.ensure_classification().is_err() {
            mismatches.push("dynamical maps could not be constructed".into());
        } else {
            let verdicts = &pipeline.dynmap_verdicts;
            if let (Some(want), true) = (expected.dynmap_cp, pipeline.distinguished.is_some()) {
                if let Some(v) = verdicts.first() {
                    if v.cp != want {
                        mismatches.push(format!(
                            "distinguished dynamical map cp: expected {}, derived {}",
                            verdict_str(want),
                            verdict_str(v.cp)
                        ));
                    }
                }
            }
            let sampled = if pipeline.distinguished.is_some() {
                &verdicts[1.min(verdicts.len())..]
            } else {
                &verdicts[..]
            };
            if let Some(want) = expected.dynmap_cp_sampled {
                for (k, v) in sampled.iter().enumerate() {
                    if v.cp != want {
                        mismatches.push(format!(
                            "sampled map {k} cp: expected {}, derived {}",
                            verdict_str(want),
                            verdict_str(v.cp)
                        ));
                    }
                }
            }
            if let Some(want) = expected.dynmap_cpze_sampled {
                for (k, v) in sampled.iter().enumerate() {
                    if v.cpze != want {
                        mismatches.push(format!(
                            "sampled map {k} cpze: expected {}, derived {}",
                            verdict_str(want),
                            verdict_str(v.cpze)
                        ));
                    }
                }
            }
        }
    }

    mismatches
}

/// Thin wrapper: run a gallery case through the full pipeline.
pub fn run_gallery(
    name: &str,
    params: &BTreeMap<String, f64>,
    seed: u64,
    samples: usize,
    checks: Option<Vec<CheckKind>>,
) -> Result<AnalysisReport> {
    run_analyze(AnalysisRequest {
        source: SubspaceSource::Gallery {
            name: name.to_string(),
            params: params.clone(),
        },
        semigroup: None,
        unitary: None,
        checks: checks.unwrap_or_else(|| CheckKind::ALL.to_vec()),
        seed,
        samples,
        tolerances: BTreeMap::new(),
    })
}
