use serde::Serialize;

use super::apply::{apply_unchecked, LoccBox};
use super::states::bell_state;
use super::ESBox;
use crate::qcore::ops::max_entangled_factor_raw;
use crate::qcore::{unitarity_residual, TOL_ALGEBRA};
use crate::{CMatrix, CVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Every `e_c` has rank one.
    RankOne,
    /// The bra of every `e_c` is maximally entangled.
    MaxEntangled,
    /// `Σ e_c† e_c = I` on `C1 C2`.
    Completeness,
    /// Every correction is unitary.
    Unitarity,
    /// The canonical input is mapped to `|Ψ⁺⟩_{AB}`.
    CanonicalAction,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::RankOne => "rank-one",
            CheckKind::MaxEntangled => "max-entangled",
            CheckKind::Completeness => "completeness",
            CheckKind::Unitarity => "unitarity",
            CheckKind::CanonicalAction => "canonical-action",
        }
    }

    /// The four checks on the box's structure (the canonical action is a
    /// consequence of them).
    pub const STRUCTURAL: [CheckKind; 4] = [
        CheckKind::RankOne,
        CheckKind::MaxEntangled,
        CheckKind::Completeness,
        CheckKind::Unitarity,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub kind: CheckKind,
    pub passed: bool,
    pub residual: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, kind: CheckKind) -> &Check {
        self.checks.iter().find(|c| c.kind == kind).expect("every kind is checked")
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.kind.name()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Singular values (descending) and the right singular vector of the
/// largest one.
fn rank_one_parts(e: &CMatrix) -> (Vec<f64>, CVector) {
    let svd = e.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let values = order.iter().map(|&k| svd.singular_values[k]).collect();
    let top = order[0];
    let psi = CVector::from_iterator(v_t.ncols(), v_t.row(top).iter().map(|z| z.conj()));
    (values, psi)
}

/// Structural checks of the standard form plus the canonical action.
pub fn validate_es_box(bx: &ESBox) -> ValidationReport {
    let mut rank = 0.0f64;
    let mut entangled = 0.0f64;
    let mut unitary = 0.0f64;
    for b in bx.branches() {
        let (values, psi) = rank_one_parts(&b.e_c);
        rank = rank.max(values[1]);
        entangled = entangled.max(if values[0] > 1e-12 {
            unitarity_residual(&max_entangled_factor_raw(&psi))
        } else {
            f64::INFINITY
        });
        unitary = unitary
            .max(unitarity_residual(&b.u_a))
            .max(unitarity_residual(&b.u_b));
    }
    let completeness = bx.completeness_residual();

    let canonical = bx.canonical_input();
    let fidelity_gap = match apply_unchecked(bx, &canonical.projector(), canonical.register()) {
        Ok(raw) => {
            let psi = bell_state(0);
            let f = psi.amplitudes().dotc(&(&raw.output * psi.amplitudes())).re;
            (1.0 - f).abs()
        }
        Err(_) => f64::INFINITY,
    };

    let check = |kind, residual: f64, threshold| Check {
        kind,
        passed: residual <= threshold,
        residual,
        threshold,
    };
    ValidationReport {
        checks: vec![
            check(CheckKind::RankOne, rank, TOL_ALGEBRA),
            check(CheckKind::MaxEntangled, entangled, 1e-9),
            check(CheckKind::Completeness, completeness, TOL_ALGEBRA),
            check(CheckKind::Unitarity, unitary, TOL_ALGEBRA),
            check(CheckKind::CanonicalAction, fidelity_gap, 1e-9),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{random_es_box, teleportation_box, twirled_box, Branch};
    use crate::qcore::gates;

    #[test]
    fn teleportation_passes_everything() {
        let report = validate_es_box(&teleportation_box());
        assert!(report.all_passed(), "{report:?}");
        assert!(report.max_residual() <= 1e-10);
    }

    #[test]
    fn product_measurement_fails_entanglement_only() {
        let branches = (0..4)
            .map(|i| Branch {
                e_c: gates::ket(4, i) * gates::ket(4, i).adjoint(),
                u_a: gates::identity(2),
                u_b: gates::identity(2),
            })
            .collect();
        let report = validate_es_box(&ESBox::new(branches, false).unwrap());
        assert!(!report.get(CheckKind::MaxEntangled).passed);
        for kind in [CheckKind::RankOne, CheckKind::Completeness, CheckKind::Unitarity] {
            assert!(report.get(kind).passed, "{kind:?}");
        }
    }

    #[test]
    fn deleted_branch_fails_completeness_only() {
        let mut branches = teleportation_box().branches().to_vec();
        branches.pop();
        let report = validate_es_box(&ESBox::new(branches, false).unwrap());
        assert!(!report.get(CheckKind::Completeness).passed);
        for kind in [CheckKind::RankOne, CheckKind::MaxEntangled, CheckKind::Unitarity] {
            assert!(report.get(kind).passed);
        }
        assert!(twirled_box(&ESBox::new(vec![teleportation_box().branches()[0].clone()], false).unwrap()).is_err());
    }

    #[test]
    fn random_boxes_are_valid() {
        for seed in 0..200 {
            for n in [4, 8] {
                let report = validate_es_box(&random_es_box(n, seed).unwrap());
                assert!(report.all_passed(), "seed {seed}: {report:?}");
                assert!(report.get(CheckKind::Completeness).residual <= 1e-12);
            }
        }
    }
}
