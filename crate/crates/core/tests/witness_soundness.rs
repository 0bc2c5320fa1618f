use approx::assert_abs_diff_eq;
use entrobound::sampling::{
    random_biseparable, random_biseparably_derived, random_density, random_mub_pair, random_pair,
    random_product_across,
};
use entrobound::states::{ghz, rho_insep, w3, werner, WernerParams};
use entrobound::witness::{
    measured_witness_for_state, measurement_distribution, quantum_witness_v, MeasurementPair,
};
use entrobound::SubsystemSignature;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

#[test]
fn biseparable_states_never_violate() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let sig = SubsystemSignature::qubits(3);
    for i in 0..500 {
        let rho = if i % 2 == 0 {
            random_product_across(&sig, &[i / 2 % 3], &mut rng).unwrap()
        } else {
            random_biseparably_derived(&sig, 2 + i % 4, &mut rng)
        };
        let v = quantum_witness_v(&rho).unwrap().v_bound;
        assert!(v <= TOL, "sample {i}: V = {v}");
    }
    assert!(quantum_witness_v(&rho_insep()).unwrap().v_bound <= 0.0);
}

#[test]
fn biseparable_qutrit_mixes_never_violate() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let sig = SubsystemSignature::new(vec![3, 2, 2]).unwrap();
    for _ in 0..100 {
        let rho = random_biseparable(&sig, &mut rng);
        assert!(quantum_witness_v(&rho).unwrap().v_bound <= TOL);
    }
}

#[test]
fn measured_witness_never_exceeds_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let sig = SubsystemSignature::qubits(3);
    for i in 0..500 {
        let rho = random_density(&sig, &mut rng);
        let pair = if i % 2 == 0 {
            random_mub_pair(2, &mut rng)
        } else {
            random_pair(2, &mut rng)
        };
        let measured = measured_witness_for_state(&rho, &pair).unwrap().v_bound;
        let exact = quantum_witness_v(&rho).unwrap().v_bound;
        assert!(measured <= exact + TOL, "sample {i}: {measured} > {exact}");
    }
}

#[test]
fn measured_witness_never_exceeds_exact_for_qutrits() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let sig = SubsystemSignature::uniform(3, 3).unwrap();
    for _ in 0..60 {
        let rho = random_density(&sig, &mut rng);
        let pair = random_mub_pair(3, &mut rng);
        let measured = measured_witness_for_state(&rho, &pair).unwrap().v_bound;
        let exact = quantum_witness_v(&rho).unwrap().v_bound;
        assert!(measured <= exact + TOL);
    }
}

#[test]
fn single_party_uncertainty_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for i in 0..500 {
        let d = 2 + i % 2;
        let sig = SubsystemSignature::new(vec![d]).unwrap();
        let rho = random_density(&sig, &mut rng);
        let pair = random_pair(d, &mut rng);
        let hq = measurement_distribution(&rho, std::slice::from_ref(&pair.q))
            .unwrap()
            .entropy();
        let hr = measurement_distribution(&rho, std::slice::from_ref(&pair.r))
            .unwrap()
            .entropy();
        let rhs = pair.omega().log2() + rho.vn_entropy().unwrap();
        assert!(hq + hr >= rhs - TOL, "sample {i}: {} < {rhs}", hq + hr);
    }
}

#[test]
fn ghz_werner_witness_is_monotone_in_p() {
    let g = ghz(3, 2, None).unwrap();
    let pair = MeasurementPair::pauli_xz();
    let mut prev_exact = f64::NEG_INFINITY;
    let mut prev_measured = f64::NEG_INFINITY;
    for i in 0..=100 {
        let rho = werner(&g, WernerParams::new(i as f64 / 100.0).unwrap());
        let exact = quantum_witness_v(&rho).unwrap().v_bound;
        let measured = measured_witness_for_state(&rho, &pair).unwrap().v_bound;
        assert!(exact >= prev_exact - 1e-12);
        assert!(measured >= prev_measured - 1e-12);
        prev_exact = exact;
        prev_measured = measured;
    }
    assert_abs_diff_eq!(prev_exact, 1.0, epsilon = 1e-9);
}

#[test]
fn w_werner_measured_bound_never_violates() {
    let pair = MeasurementPair::pauli_xz();
    for i in 0..200 {
        let p = i as f64 / 199.0;
        let rho = werner(&w3(), WernerParams::new(p).unwrap());
        assert!(measured_witness_for_state(&rho, &pair).unwrap().v_bound <= 0.0);
    }
}
