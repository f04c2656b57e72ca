use std::fmt;

use esbox::boxes::{
    apply_box, bell_from_ghz_box, bell_state, canonical_input, ghz_box, ghz_state,
    random_es_box, teleportation_box, validate_es_box, AnyBox, ESBox, LoccBox, SubKind,
    SubPrimitiveBox, ValidationReport, C1,
};
use esbox::comm::{
    bell_from_ghz_cv_with, cc_chain, cc_lower_bound, dense_coding_cv, eaccqc_maximize,
    eaccqc_objective, ghz_randomization_signal_with, lemma1_suite, nonsignaling_check,
    theorem3_protocol, CommReport, Direction, OptimizerConfig, Verdict, SIGNALING_THRESHOLD,
};
use esbox::qcore::{gates, DensityMatrix, Evolve, UnitaryOp, TOL_INEQUALITY};
use esbox::Error;
use serde::Serialize;

use crate::config::{BoxSource, RunConfig};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    Fail = 1,
    InputError = 2,
    Inconclusive = 3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    /// Reported number without a verdict.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::Info => "info",
        })
    }
}

/// One row of the verdict table. `pass` is `None` for informational rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub label: String,
    pub value: f64,
    pub bound: f64,
    pub residual: f64,
    pub pass: Option<bool>,
    pub status: Status,
}

impl Claim {
    fn new(id: &'static str, label: impl Into<String>, value: f64, bound: f64, residual: f64) -> Self {
        Claim {
            id,
            label: label.into(),
            value: sig12(value),
            bound: sig12(bound),
            residual: sig12(residual),
            pass: None,
            status: Status::Info,
        }
    }

    fn verdict(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self.status = if pass { Status::Pass } else { Status::Fail };
        self
    }

    fn inconclusive(mut self) -> Self {
        self.pass = Some(false);
        self.status = Status::Inconclusive;
        self
    }
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDoc {
    pub box_id: String,
    pub seed: u64,
    pub claims: Vec<Claim>,
}

impl ReportDoc {
    pub fn exit(&self) -> Exit {
        if self.claims.iter().any(|c| c.status == Status::Fail) {
            Exit::Fail
        } else if self.claims.iter().any(|c| c.status == Status::Inconclusive) {
            Exit::Inconclusive
        } else {
            Exit::Pass
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    /// Unreadable or malformed input.
    Input(String),
    /// The analysis itself failed.
    Analysis(Error),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Input(msg) => write!(f, "input error: {msg}"),
            RunError::Analysis(e) => write!(f, "analysis error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Analysis(e)
    }
}

/// Builds the selected box and its identifier.
pub fn load_box(config: &RunConfig) -> Result<(String, AnyBox), RunError> {
    match &config.source {
        BoxSource::Named(sel) => {
            use crate::config::BoxSelector::*;
            let bx: AnyBox = match sel {
                Teleport => teleportation_box().into(),
                TwirledTeleport => teleportation_box().with_twirl(true).into(),
                Random4 => random_es_box(4, config.seed)?.into(),
                Random8 => random_es_box(8, config.seed)?.into(),
                Ghz => ghz_box().into(),
                BellFromGhz => bell_from_ghz_box().into(),
            };
            Ok((sel.name().to_string(), bx))
        }
        BoxSource::File(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
            let bx = AnyBox::from_json(&text)
                .map_err(|e| RunError::Input(format!("{}: {e}", path.display())))?;
            let id = path.file_stem().map_or_else(
                || path.display().to_string(),
                |s| s.to_string_lossy().into_owned(),
            );
            Ok((format!("file:{id}"), bx))
        }
    }
}

/// Structural checks of a box, as `(check, passed, residual, threshold)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRow {
    pub check: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyDoc {
    pub box_id: String,
    pub seed: u64,
    pub all_passed: bool,
    pub checks: Vec<VerifyRow>,
}

impl VerifyDoc {
    pub fn exit(&self) -> Exit {
        if self.all_passed {
            Exit::Pass
        } else {
            Exit::Fail
        }
    }
}

fn rows_from(report: &ValidationReport) -> Vec<VerifyRow> {
    report
        .checks
        .iter()
        .map(|c| VerifyRow {
            check: c.kind.name(),
            passed: c.passed,
            residual: sig12(c.residual),
            threshold: c.threshold,
        })
        .collect()
}

/// Sub-primitive boxes have no standard form; they are checked for
/// measurement completeness and for reproducing their target state.
fn sub_rows(bx: &SubPrimitiveBox) -> Result<Vec<VerifyRow>, RunError> {
    let completeness = bx.completeness_residual();
    let unitarity = bx
        .branches()
        .iter()
        .flat_map(|b| [&b.u_a, &b.u_b])
        .map(esbox::qcore::unitarity_residual)
        .fold(0.0f64, f64::max);
    let out = apply_box(bx, &LoccBox::canonical_input(bx).to_density())?;
    let fidelity = match bx.kind() {
        SubKind::GhzFromTwoEpr => out.output.fidelity_pure(&ghz_state_on_output()),
        SubKind::BellFromGhz => out.output.fidelity_pure(&bell_state(0)),
    };
    let row = |check, residual: f64, threshold| VerifyRow {
        check,
        passed: residual <= threshold,
        residual: sig12(residual),
        threshold,
    };
    Ok(vec![
        row("completeness", completeness, 1e-10),
        row("unitarity", unitarity, 1e-10),
        row("target-state", 1.0 - fidelity, 1e-10),
    ])
}

fn ghz_state_on_output() -> esbox::qcore::StateVector {
    // the GHZ box leaves Charlie's kept qubit under the label C1
    let ghz = ghz_state();
    esbox::qcore::StateVector::new(
        ghz.amplitudes().clone(),
        esbox::qcore::Register::qubits(&["A", "B", C1]).unwrap(),
    )
    .unwrap()
}

pub fn verify(config: &RunConfig) -> Result<VerifyDoc, RunError> {
    let (box_id, bx) = load_box(config)?;
    let checks = match &bx {
        AnyBox::Es(es) => rows_from(&validate_es_box(es)),
        AnyBox::Sub(sub) => sub_rows(sub)?,
    };
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerifyDoc { box_id, seed: config.seed, all_passed, checks })
}

/// Full analysis: the verdict table plus the communication summary.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub doc: ReportDoc,
    pub comm: Option<CommReport>,
}

pub fn report(config: &RunConfig) -> Result<Analysis, RunError> {
    let (box_id, bx) = load_box(config)?;
    let mut claims = vec![lemma_claim(config)?];
    let comm = match &bx {
        AnyBox::Es(es) => Some(es_claims(&box_id, es, config, &mut claims)?),
        AnyBox::Sub(sub) => {
            sub_claims(sub, &mut claims)?;
            None
        }
    };
    Ok(Analysis { doc: ReportDoc { box_id, seed: config.seed, claims }, comm })
}

fn lemma_claim(config: &RunConfig) -> Result<Claim, RunError> {
    let suite = lemma1_suite(config.trials, config.seed)?;
    let excess = if suite.trials == 0 { 0.0 } else { suite.max_excess };
    Ok(Claim::new(
        "L1",
        format!("dI <= dS on {} random ensembles; residual = proof identity", suite.trials),
        excess,
        0.0,
        suite.max_identity_residual,
    )
    .verdict(suite.violations == 0 && suite.max_identity_residual <= TOL_INEQUALITY))
}

fn es_claims(
    box_id: &str,
    bx: &ESBox,
    config: &RunConfig,
    claims: &mut Vec<Claim>,
) -> Result<CommReport, RunError> {
    let validation = validate_es_box(bx);
    let out = apply_box(bx, &canonical_input().to_density())?;
    let fidelity = out.output.fidelity_pure(&bell_state(0));
    let t1_residual = validation.max_residual().max(1.0 - fidelity);
    claims.push(
        Claim::new("T1", "standard form valid; value = fidelity with Psi+", fidelity, 1.0, t1_residual)
            .verdict(validation.all_passed() && 1.0 - fidelity <= TOL_INEQUALITY),
    );
    let mut comm = CommReport {
        box_id: box_id.to_string(),
        outcome_entropy_bits: out.transcript.outcome_entropy_bits,
        cc_lower_bound_bits: 0.0,
        cv_lower_bound_bits: 0.0,
        capacity_upper_bound_bits: None,
        nonsignaling: Vec::new(),
        verdicts: Vec::new(),
    };
    if !validation.all_passed() {
        comm.verdicts = verdicts(claims);
        return Ok(comm);
    }

    let chain = cc_chain(bx)?;
    let t2_residual = chain
        .max_link_violation
        .max(chain.marginal_deviation)
        .max(chain.average_deviation);
    claims.push(
        Claim::new("T2", "CC >= H(p) >= dS >= dI = 2", chain.bound(), 2.0, t2_residual)
            .verdict(chain.intact(TOL_INEQUALITY) && chain.bound() >= 2.0 - TOL_INEQUALITY),
    );
    comm.cc_lower_bound_bits = chain.bound();

    let t3 = theorem3_protocol(bx)?;
    claims.push(
        Claim::new(
            "T3",
            "CV >= 1: phase-flip signal decoded by Psi+ test",
            t3.accessible,
            1.0,
            t3.orthogonality_residual,
        )
        .verdict((t3.accessible - 1.0).abs() <= TOL_INEQUALITY && t3.orthogonality_residual <= config.tol_algebra),
    );
    comm.cv_lower_bound_bits = t3.accessible;

    let dense = match dense_coding_cv(bx) {
        Ok(dc) => Some(dc),
        Err(Error::ProtocolInapplicable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    if let Some(dc) = &dense {
        let claim = if bx.is_twirled() {
            Claim::new("DC", "dense coding through the twirled box stays below 2 bits", dc.bits, 2.0, 2.0 - dc.bits)
                .verdict(dc.bits < 2.0 - TOL_INEQUALITY)
        } else {
            Claim::new("DC", "dense coding: 4 Pauli messages decoded", dc.bits, 2.0, (2.0 - dc.bits).abs())
                .verdict((dc.bits - 2.0).abs() <= TOL_INEQUALITY)
        };
        claims.push(claim);
        comm.cv_lower_bound_bits = comm.cv_lower_bound_bits.max(dc.bits);
    }

    let cap = capacity_claim(bx, config, comm.cv_lower_bound_bits, dense.is_some())?;
    comm.capacity_upper_bound_bits = Some(cap.1);
    claims.push(cap.0);

    for (k, dir) in Direction::ALL.into_iter().enumerate() {
        let s = nonsignaling_check(bx, dir, config.trials.max(1), config.seed.wrapping_add(k as u64 + 1))?;
        comm.nonsignaling.push((dir, s.is_signaling, s.max_residual));
        let claim = match (dir, bx.is_twirled()) {
            (Direction::CToAB, _) => Claim::new(
                "T4-ns",
                "C->AB signaling detected",
                s.max_residual,
                SIGNALING_THRESHOLD,
                s.max_residual,
            )
            .verdict(s.is_signaling),
            (_, true) => Claim::new(
                "T4-ns",
                format!("{} marginal unchanged (non-signaling)", dir.name()),
                s.max_residual,
                config.tol_algebra,
                s.max_residual,
            )
            .verdict(s.max_residual <= config.tol_algebra),
            (_, false) => Claim::new(
                "T4-ns",
                format!(
                    "{} signaling: {}",
                    dir.name(),
                    if s.is_signaling { "true" } else { "false" }
                ),
                s.max_residual,
                SIGNALING_THRESHOLD,
                s.max_residual,
            ),
        };
        claims.push(claim);
    }

    comm.verdicts = verdicts(claims);
    Ok(comm)
}

/// Capacity estimate: the optimizer's value, raised to the objective at the
/// phase-flip protocol's average input when that is larger. Returns the
/// claim and the estimate.
fn capacity_claim(
    bx: &ESBox,
    config: &RunConfig,
    cv_lower: f64,
    has_dense_coding: bool,
) -> Result<(Claim, f64), RunError> {
    let result = eaccqc_maximize(
        bx,
        OptimizerConfig { restarts: config.restarts.max(1), iters: config.iters.max(1), seed: config.seed },
    );
    let rho0 = canonical_input().to_density();
    let rho1 = rho0.evolve(&UnitaryOp::on(C1, gates::pauli_z())?)?;
    let protocol_point = eaccqc_objective(bx, &DensityMatrix::mixture(&[(0.5, &rho0), (0.5, &rho1)])?)?;
    let raw = result.value_bits;
    let estimate = raw.max(protocol_point);
    let consistent = cv_lower <= estimate + config.tol_opt;

    let claim = if bx.is_twirled() {
        let c = Claim::new(
            "T4-cap",
            format!("capacity <= 1 (optimizer reached {})", sig12(raw)),
            estimate,
            1.0,
            (estimate - 1.0).abs(),
        );
        if raw > 1.0 + config.tol_opt || estimate > 1.0 + config.tol_opt || !consistent {
            c.verdict(false)
        } else if raw < 1.0 - 1e-3 || !result.converged {
            c.inconclusive()
        } else {
            c.verdict(true)
        }
    } else {
        let target = if has_dense_coding { 2.0 } else { cv_lower };
        let slack = if has_dense_coding { 1e-3 } else { config.tol_opt };
        let c = Claim::new(
            "T4-cap",
            format!("capacity estimate >= protocol value {}", sig12(target)),
            estimate,
            target,
            (target - estimate).max(0.0),
        );
        if estimate >= target - slack && consistent {
            c.verdict(true)
        } else if !result.converged {
            c.inconclusive()
        } else {
            c.verdict(false)
        }
    };
    Ok((claim, estimate))
}

fn sub_claims(bx: &SubPrimitiveBox, claims: &mut Vec<Claim>) -> Result<(), RunError> {
    let any: AnyBox = bx.clone().into();
    let chain = cc_lower_bound(&any)?;
    let out = apply_box(bx, &LoccBox::canonical_input(bx).to_density())?;
    let broadcast = out.transcript.broadcast_bits;
    match bx.kind() {
        SubKind::GhzFromTwoEpr => {
            let fidelity = out.output.fidelity_pure(&ghz_state_on_output());
            let residual = (chain.bound() - 1.0).abs().max(1.0 - fidelity);
            claims.push(
                Claim::new("SUB1", format!("GHZ sub-box CC: {broadcast} broadcast bit, outcome entropy"), chain.bound(), 1.0, residual)
                    .verdict(broadcast == 1 && (chain.bound() - 1.0).abs() <= TOL_INEQUALITY && 1.0 - fidelity <= 1e-10),
            );
            let signal = ghz_randomization_signal_with(bx)?;
            claims.push(
                Claim::new("SUB1", "GHZ sub-box CV > 0: Holevo of randomization pair", signal.holevo, 0.0, 0.0)
                    .verdict(signal.holevo > TOL_INEQUALITY),
            );
            claims.push(Claim::new(
                "SUB1",
                "GHZ sub-box CV < 1 not certified; lower bound only",
                signal.holevo,
                1.0,
                1.0 - signal.holevo,
            ));
        }
        SubKind::BellFromGhz => {
            let fidelity = out.output.fidelity_pure(&bell_state(0));
            let residual = (chain.bound() - 1.0).abs().max(1.0 - fidelity);
            claims.push(
                Claim::new("SUB2", format!("Bell-from-GHZ CC: {broadcast} broadcast bit, outcome entropy"), chain.bound(), 1.0, residual)
                    .verdict(broadcast == 1 && (chain.bound() - 1.0).abs() <= TOL_INEQUALITY && 1.0 - fidelity <= 1e-10),
            );
            let cv = bell_from_ghz_cv_with(bx)?;
            let worst = cv
                .branch_fidelities
                .iter()
                .enumerate()
                .flat_map(|(enc, fs)| fs.iter().map(move |f| if enc == 0 { 1.0 - f } else { *f }))
                .fold(0.0f64, f64::max);
            claims.push(
                Claim::new("SUB2", "Bell-from-GHZ CV: phase-flip signal decoded", cv.bits, 1.0, worst)
                    .verdict((cv.bits - 1.0).abs() <= TOL_INEQUALITY && worst <= 1e-10),
            );
            let ghz = ghz_randomization_signal_with(&ghz_box())?;
            claims.push(Claim::new(
                "SUB2",
                "CV lower bounds of the two sub-boxes summed, against CV = 1 of swapping",
                ghz.holevo + cv.bits,
                1.0,
                ghz.holevo + cv.bits - 1.0,
            ));
        }
    }
    Ok(())
}

fn verdicts(claims: &[Claim]) -> Vec<Verdict> {
    claims
        .iter()
        .filter_map(|c| {
            c.pass.map(|pass| Verdict { claim: format!("{} {}", c.id, c.label), pass, residual: c.residual })
        })
        .collect()
}
