use rand::Rng;

use crate::boxes::{ALICE, BOB};
use crate::qcore::{
    cond_mutual_information, mutual_information, random_density_with, seeded_rng, vn_entropy,
    DensityMatrix, Ensemble, Register, Tensor,
};
use crate::{CMatrix, Result, C64};

/// Label of the classical flag register in [`flagged_extension`].
pub const FLAG: &str = "R";

/// Gap between the average gain in mutual information and the average
/// entropy decrease when the ensemble index is revealed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Gap {
    /// `Σ pᵢ I(ρᵢ) − I(Σ pᵢ ρᵢ)`.
    pub delta_i: f64,
    /// `S(Σ pᵢ ρᵢ) − Σ pᵢ S(ρᵢ)`.
    pub delta_s: f64,
    /// `I(A:R)` on the flagged extension.
    pub i_ar: f64,
    /// `I(B:R)` on the flagged extension.
    pub i_br: f64,
    /// `|(ΔI − ΔS) + I(A:R) + I(B:R)|`.
    pub identity_residual: f64,
    /// `|ΔI − (I(A:B|R) − I(A:B))|` and `|ΔS − I(AB:R)|`, largest of the two.
    pub flag_residual: f64,
}

impl Lemma1Gap {
    /// `ΔI ≤ ΔS` within `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.delta_i <= self.delta_s + tol
    }
}

/// `Σᵢ pᵢ ρᵢ ⊗ |i⟩⟨i|_R` with the flag dimension `max(n, 2)`.
pub fn flagged_extension(ensemble: &Ensemble) -> Result<DensityMatrix> {
    let n = ensemble.len().max(2);
    let flag = Register::new([(FLAG, n)])?;
    let register = ensemble.register().concat(&flag)?;
    let d = register.total_dim();
    let mut m = CMatrix::zeros(d, d);
    for (i, (p, rho)) in ensemble.entries().iter().enumerate() {
        let mut marker = CMatrix::zeros(n, n);
        marker[(i, i)] = C64::new(*p, 0.0);
        let flagged = rho.tensor(&DensityMatrix::from_raw(marker, flag.clone()))?;
        m += flagged.matrix();
    }
    Ok(DensityMatrix::from_raw(m, register))
}

/// Evaluates both sides of the entropic inequality for `ensemble` with the
/// bipartition `a | b`, plus the residual of the flag-register identity.
pub fn lemma1_gap(ensemble: &Ensemble, a: &[&str], b: &[&str]) -> Result<Lemma1Gap> {
    let avg = ensemble.average();
    let mut mean_i = 0.0;
    let mut mean_s = 0.0;
    for (p, rho) in ensemble.entries() {
        mean_i += p * mutual_information(rho, a, b)?;
        mean_s += p * vn_entropy(rho);
    }
    let delta_i = mean_i - mutual_information(&avg, a, b)?;
    let delta_s = vn_entropy(&avg) - mean_s;

    let ext = flagged_extension(ensemble)?;
    let ar: Vec<&str> = a.iter().copied().chain([FLAG]).collect();
    let br: Vec<&str> = b.iter().copied().chain([FLAG]).collect();
    let ab: Vec<&str> = a.iter().chain(b).copied().collect();
    let i_ar = mutual_information(&crate::qcore::partial_trace(&ext, &ar)?, a, &[FLAG])?;
    let i_br = mutual_information(&crate::qcore::partial_trace(&ext, &br)?, b, &[FLAG])?;
    let i_ab = mutual_information(&crate::qcore::partial_trace(&ext, &ab)?, a, b)?;
    let i_ab_given_r = cond_mutual_information(&ext, a, b, &[FLAG])?;
    let i_ab_r = mutual_information(&ext, &ab, &[FLAG])?;

    Ok(Lemma1Gap {
        delta_i,
        delta_s,
        i_ar,
        i_br,
        identity_residual: ((delta_i - delta_s) + i_ar + i_br).abs(),
        flag_residual: (delta_i - (i_ab_given_r - i_ab))
            .abs()
            .max((delta_s - i_ab_r).abs()),
    })
}

/// Outcome of [`lemma1_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Suite {
    pub trials: usize,
    /// Ensembles with `ΔI > ΔS + 1e-9`.
    pub violations: usize,
    /// Largest `ΔI − ΔS` seen.
    pub max_excess: f64,
    pub max_identity_residual: f64,
}

/// Random two-qubit ensembles on `A B`.
///
/// Each ensemble has 2 to 6 members of random rank with weights drawn
/// uniformly and normalized. Trial `k` uses its own generator seeded with
/// `seed + k`, so any subset of trials can be replayed alone.
pub fn random_ensemble(seed: u64) -> Ensemble {
    let mut rng = seeded_rng(seed);
    let register = Register::qubits(&[ALICE, BOB]).unwrap();
    let members = rng.random_range(2..=6);
    let weights: Vec<f64> = (0..members).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let entries = weights
        .iter()
        .map(|w| {
            let rank = rng.random_range(1..=4);
            (w / total, random_density_with(&mut rng, &register, rank))
        })
        .collect();
    Ensemble::new(entries).expect("weights are normalized")
}

pub fn lemma1_suite(trials: usize, seed: u64) -> Result<Lemma1Suite> {
    let mut suite = Lemma1Suite {
        trials,
        violations: 0,
        max_excess: f64::NEG_INFINITY,
        max_identity_residual: 0.0,
    };
    for k in 0..trials {
        let gap = lemma1_gap(&random_ensemble(seed.wrapping_add(k as u64)), &[ALICE], &[BOB])?;
        let excess = gap.delta_i - gap.delta_s;
        if excess > 1e-9 {
            suite.violations += 1;
        }
        suite.max_excess = suite.max_excess.max(excess);
        suite.max_identity_residual = suite.max_identity_residual.max(gap.identity_residual);
    }
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::bell_state;
    use crate::qcore::{random_density, StateVector};

    fn ab() -> Register {
        Register::qubits(&[ALICE, BOB]).unwrap()
    }

    #[test]
    fn single_member_has_no_gap() {
        let ens = Ensemble::new(vec![(1.0, random_density(&ab(), 3, 1))]).unwrap();
        let gap = lemma1_gap(&ens, &[ALICE], &[BOB]).unwrap();
        assert!(gap.delta_i.abs() < 1e-12 && gap.delta_s.abs() < 1e-12);
    }

    #[test]
    fn bell_ensemble_is_tight() {
        let ens = Ensemble::new((0..4).map(|i| (0.25, bell_state(i).to_density())).collect()).unwrap();
        let gap = lemma1_gap(&ens, &[ALICE], &[BOB]).unwrap();
        assert!((gap.delta_i - 2.0).abs() < 1e-12);
        assert!((gap.delta_s - 2.0).abs() < 1e-12);
        assert!(gap.identity_residual < 1e-12);
        let ext = flagged_extension(&ens).unwrap();
        let cmi = cond_mutual_information(&ext, &[ALICE], &[BOB], &[FLAG]).unwrap();
        assert!((cmi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn classical_ensemble_gap() {
        let basis = |i| StateVector::basis(ab(), i).unwrap().to_density();
        let ens = Ensemble::new(vec![(0.5, basis(0)), (0.5, basis(3))]).unwrap();
        let gap = lemma1_gap(&ens, &[ALICE], &[BOB]).unwrap();
        assert!((gap.delta_i + 1.0).abs() < 1e-12);
        assert!((gap.delta_s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_members_leave_flag_uncorrelated() {
        let rho = random_density(&ab(), 4, 9);
        let ens = Ensemble::new(vec![(0.3, rho.clone()), (0.7, rho.clone())]).unwrap();
        let ext = flagged_extension(&ens).unwrap();
        let cmi = cond_mutual_information(&ext, &[ALICE], &[BOB], &[FLAG]).unwrap();
        let i = mutual_information(&rho, &[ALICE], &[BOB]).unwrap();
        assert!((cmi - i).abs() < 1e-12);
    }
}
