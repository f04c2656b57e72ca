use esbox::boxes::{apply_box, canonical_input, random_es_box, teleportation_box, ESBox};
use esbox::comm::{eaccqc_objective, ExchangeObjective};
use esbox::qcore::{
    haar_unitary, kron, max_entangled_factor, partial_trace, purify, random_density, vn_entropy,
    DensityMatrix, Evolve, Register, StateVector, UnitaryOp,
};
use esbox::{CMatrix, CVector, C64};
use proptest::prelude::*;

fn abcd() -> Register {
    Register::new([("A", 2), ("B", 3), ("C", 2), ("D", 2)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_traces_compose(seed in any::<u64>(), rank in 1usize..=24) {
        let rho = random_density(&abcd(), rank, seed);
        let direct = partial_trace(&rho, &["B", "A"]).unwrap();
        let staged = partial_trace(&partial_trace(&rho, &["A", "B", "C"]).unwrap(), &["B", "A"]).unwrap();
        prop_assert!((direct.matrix() - staged.matrix()).norm() < 1e-12);
        prop_assert!((direct.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subadditivity_and_araki_lieb(seed in any::<u64>(), rank in 1usize..=24) {
        let rho = random_density(&abcd(), rank, seed);
        let ab = partial_trace(&rho, &["A", "B"]).unwrap();
        let cd = partial_trace(&rho, &["C", "D"]).unwrap();
        let (s, s1, s2) = (vn_entropy(&rho), vn_entropy(&ab), vn_entropy(&cd));
        prop_assert!(s <= s1 + s2 + 1e-9);
        prop_assert!((s1 - s2).abs() <= s + 1e-9);
    }

    #[test]
    fn unitary_evolution_keeps_a_valid_state(seed in any::<u64>(), rank in 1usize..=24) {
        let rho = random_density(&abcd(), rank, seed);
        let u = UnitaryOp::new(haar_unitary(6, seed ^ 1), Register::new([("B", 3), ("D", 2)]).unwrap()).unwrap();
        let out = rho.evolve(&u).unwrap();
        prop_assert!(out.check().is_ok());
        let spectrum_in = rho.eigenvalues();
        let spectrum_out = out.eigenvalues();
        for (a, b) in spectrum_in.iter().zip(&spectrum_out) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn max_entangled_factor_round_trip(seed in any::<u64>()) {
        let u = haar_unitary(2, seed);
        let plus = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)])
            .unscale(2f64.sqrt());
        let psi = StateVector::new(kron(&u, &CMatrix::identity(2, 2)) * plus, Register::qubits(&["A", "B"]).unwrap()).unwrap();
        let m = max_entangled_factor(&psi).unwrap();
        prop_assert!((m - u).norm() < 1e-12);
    }

    #[test]
    fn purification_traces_back(seed in any::<u64>(), rank in 1usize..=6) {
        let reg = Register::new([("A", 2), ("B", 3)]).unwrap();
        let rho = random_density(&reg, rank, seed);
        let phi = purify(&rho, "E").unwrap();
        prop_assert_eq!(phi.register().dim_of("E"), Some(6));
        let back = partial_trace(&phi.to_density(), &["A", "B"]).unwrap();
        prop_assert!((back.matrix() - rho.matrix()).norm() < 1e-10);
    }

    #[test]
    fn box_output_is_a_state(seed in any::<u64>(), eight in any::<bool>(), twirl in any::<bool>()) {
        let bx = random_es_box(if eight { 8 } else { 4 }, seed).unwrap().with_twirl(twirl);
        let reg = canonical_input().register().clone();
        let out = apply_box(&bx, &random_density(&reg, 16, seed ^ 7)).unwrap();
        prop_assert!(out.output.check().is_ok());
        let total: f64 = out.outcome_distribution.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }
}

fn mix(a: &DensityMatrix, b: &DensityMatrix, t: f64) -> DensityMatrix {
    DensityMatrix::mixture(&[(1.0 - t, a), (t, b)]).unwrap()
}

fn concavity_holds(bx: &ESBox, cases: u64) {
    let reg = canonical_input().register().clone();
    let fast = ExchangeObjective::new(bx);
    for k in 0..cases {
        let rho = random_density(&reg, 1 + (k as usize % 16), 1000 + k);
        let sigma = random_density(&reg, 1 + (k as usize * 7 % 16), 5000 + k);
        let t = (k as f64 + 0.5) / cases as f64;
        let left = fast.value(&mix(&rho, &sigma, t));
        let right = (1.0 - t) * fast.value(&rho) + t * fast.value(&sigma);
        assert!(left >= right - 1e-8, "case {k}: {left} < {right}");
    }
}

#[test]
fn objective_is_concave_along_mixing_segments() {
    concavity_holds(&teleportation_box().with_twirl(true), 100);
    concavity_holds(&teleportation_box(), 50);
    concavity_holds(&random_es_box(8, 3).unwrap(), 50);
}

#[test]
fn objective_routes_agree_on_random_boxes() {
    let reg = canonical_input().register().clone();
    for seed in 0..10u64 {
        let bx = random_es_box(if seed % 2 == 0 { 4 } else { 8 }, seed).unwrap().with_twirl(seed % 3 == 0);
        let rho = random_density(&reg, 1 + seed as usize, seed);
        let slow = eaccqc_objective(&bx, &rho).unwrap();
        let fast = ExchangeObjective::new(&bx).value(&rho);
        assert!((slow - fast).abs() < 1e-9, "seed {seed}: {slow} vs {fast}");
    }
}

#[test]
fn twirled_objective_never_exceeds_one() {
    let reg = canonical_input().register().clone();
    let f = ExchangeObjective::new(&teleportation_box().with_twirl(true));
    for seed in 0..200 {
        let v = f.value(&random_density(&reg, 1 + seed as usize % 16, seed));
        assert!((-1e-9..=1.0 + 1e-9).contains(&v), "seed {seed}: {v}");
    }
}
