use approx::assert_abs_diff_eq;
use entrobound::linalg::CMatrix;
use entrobound::sampling::{random_density, random_pure};
use entrobound::states::{ghz, rho_insep, werner, WernerParams};
use entrobound::{DensityMatrix, PureState, SubsystemSignature};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn mixed_signatures() -> Vec<SubsystemSignature> {
    vec![
        SubsystemSignature::qubits(3),
        SubsystemSignature::new(vec![3, 2, 2]).unwrap(),
        SubsystemSignature::new(vec![2, 3, 2]).unwrap(),
        SubsystemSignature::new(vec![3, 3, 2]).unwrap(),
    ]
}

/// Partial transpose on the second qubit of a two-qubit matrix.
fn partial_transpose_b(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(4, |i, j| {
        let (a, b) = (i >> 1, i & 1);
        let (c, d) = (j >> 1, j & 1);
        m[((a << 1) | d, (c << 1) | b)]
    })
}

#[test]
fn conditional_entropy_is_bounded_below_by_local_dimension() {
    let mut r = rng(11);
    for sig in mixed_signatures() {
        for _ in 0..250 {
            let rho = random_density(&sig, &mut r);
            for target in 0..3 {
                let rest: Vec<usize> = (0..3).filter(|&p| p != target).collect();
                let s = rho.conditional_vn_entropy(&[target], &rest).unwrap();
                let d = sig.dims()[target] as f64;
                assert!(s >= -d.log2() - 1e-9, "S = {s} below -log2 {d}");
            }
        }
    }
}

#[test]
fn entropy_and_conditional_entropy_are_concave() {
    let mut r = rng(12);
    let sig = SubsystemSignature::new(vec![2, 3, 2]).unwrap();
    for i in 0..200 {
        let a = random_density(&sig, &mut r);
        let b = random_density(&sig, &mut r);
        let lambda = (i as f64 + 0.5) / 200.0;
        let mix = a.mix(lambda, &b).unwrap();
        let lin = |f: &dyn Fn(&DensityMatrix) -> f64| lambda * f(&a) + (1.0 - lambda) * f(&b);
        let vn = |x: &DensityMatrix| x.vn_entropy().unwrap();
        let cond = |x: &DensityMatrix| x.conditional_vn_entropy(&[0], &[1, 2]).unwrap();
        assert!(vn(&mix) >= lin(&vn) - 1e-10);
        assert!(cond(&mix) >= lin(&cond) - 1e-10);
    }
}

#[test]
fn partial_trace_composes() {
    let mut r = rng(13);
    for sig in mixed_signatures() {
        let rho = random_density(&sig, &mut r);
        let stepwise = rho
            .partial_trace(&[0, 1])
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        let direct = rho.partial_trace(&[0]).unwrap();
        assert!(stepwise.matrix().max_abs_diff(direct.matrix()) < 1e-12);
    }
}

#[test]
fn permutation_preserves_spectrum_and_moves_marginals() {
    let mut r = rng(14);
    let sig = SubsystemSignature::new(vec![2, 3, 2]).unwrap();
    for perm in [[1, 2, 0], [2, 0, 1], [0, 2, 1], [1, 0, 2]] {
        let rho = random_density(&sig, &mut r);
        let moved = rho.permute_parties(&perm).unwrap();
        for (x, y) in rho.eigenvalues().iter().zip(moved.eigenvalues()) {
            assert_abs_diff_eq!(*x, y, epsilon = 1e-10);
        }
        for (new, &old) in perm.iter().enumerate() {
            let a = rho.partial_trace(&[old]).unwrap();
            let b = moved.partial_trace(&[new]).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }
}

#[test]
fn collision_entropy_never_exceeds_von_neumann() {
    let mut r = rng(15);
    let sigs = [
        SubsystemSignature::qubits(1),
        SubsystemSignature::qubits(2),
        SubsystemSignature::qubits(3),
        SubsystemSignature::new(vec![3, 2]).unwrap(),
    ];
    for i in 0..1000 {
        let rho = random_density(&sigs[i % sigs.len()], &mut r);
        assert!(rho.collision_entropy() <= rho.vn_entropy().unwrap() + 1e-10);
    }
}

#[test]
fn insep_reductions_are_ppt() {
    let rho = rho_insep();
    for keep in [[0, 1], [1, 2], [0, 2]] {
        let pair = rho.partial_trace(&keep).unwrap();
        let min = *partial_transpose_b(pair.matrix())
            .eigvals_hermitian()
            .last()
            .unwrap();
        assert!(
            min >= -1e-12,
            "reduction {keep:?} has negative partial transpose {min}"
        );
    }
}

#[test]
fn ghz_product_has_four_half_amplitudes() {
    let g = ghz(3, 2, None).unwrap();
    let pp = g.tensor(&g);
    assert_eq!(pp.amplitudes().len(), 64);
    let nonzero: Vec<_> = pp
        .amplitudes()
        .iter()
        .filter(|a| a.norm() > 1e-15)
        .collect();
    assert_eq!(nonzero.len(), 4);
    for a in nonzero {
        assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
    }
}

#[test]
fn regrouped_ghz_pair_is_four_level_ghz() {
    // (a, b) on the two copies give phases (b, a, a+b) on the 4-level levels 1..3
    for (a, b) in [(0.0, 0.0), (0.7, -1.9)] {
        let g1 = ghz(3, 2, Some(&[a])).unwrap();
        let g2 = ghz(3, 2, Some(&[b])).unwrap();
        let regrouped = g1.tensor(&g2).permute_parties(&[0, 3, 1, 4, 2, 5]).unwrap();
        let as_qudits = PureState::new(
            SubsystemSignature::uniform(3, 4).unwrap(),
            regrouped.amplitudes().to_vec(),
        )
        .unwrap();
        let target = ghz(3, 4, Some(&[b, a, a + b])).unwrap();
        let f = as_qudits.to_density().fidelity_pure(&target).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn ghz_werner_spectrum_and_fidelity() {
    let g = ghz(3, 2, None).unwrap();
    let rho = werner(&g, WernerParams::new(0.5).unwrap());
    let ev = rho.eigenvalues();
    assert_abs_diff_eq!(ev[0], 0.5625, epsilon = 1e-12);
    for e in &ev[1..] {
        assert_abs_diff_eq!(*e, 0.0625, epsilon = 1e-12);
    }
    // −0.5625 log₂ 0.5625 − 7·0.0625 log₂ 0.0625
    let expected = -0.5625 * 0.5625f64.log2() + 7.0 * 0.0625 * 4.0;
    assert_abs_diff_eq!(rho.vn_entropy().unwrap(), expected, epsilon = 1e-12);
    assert_abs_diff_eq!(expected, 2.2169, epsilon = 1e-4);
    for i in 0..=10 {
        let p = i as f64 / 10.0;
        let f = werner(&g, WernerParams::new(p).unwrap())
            .fidelity_pure(&g)
            .unwrap();
        assert_abs_diff_eq!(f, p + (1.0 - p) / 8.0, epsilon = 1e-14);
    }
}

#[test]
fn pure_state_entropies() {
    let mut r = rng(16);
    let sig = SubsystemSignature::new(vec![2, 3]).unwrap();
    for _ in 0..50 {
        let psi = random_pure(&sig, &mut r).to_density();
        assert_abs_diff_eq!(psi.vn_entropy().unwrap(), 0.0, epsilon = 1e-9);
        // Schmidt symmetry of a bipartite pure state
        let sa = psi.subsystem_entropy(&[0]).unwrap();
        let sb = psi.subsystem_entropy(&[1]).unwrap();
        assert_abs_diff_eq!(sa, sb, epsilon = 1e-9);
    }
}

#[test]
fn json_round_trip() {
    let mut r = rng(17);
    let rho = random_density(&SubsystemSignature::new(vec![2, 3]).unwrap(), &mut r);
    let back = DensityMatrix::from_json_str(&rho.to_json_string()).unwrap();
    assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
    assert_eq!(back.signature(), rho.signature());
}

proptest! {
    #[test]
    fn digits_and_index_are_inverse(dims in prop::collection::vec(2usize..5, 1..5), seed in any::<u64>()) {
        let sig = SubsystemSignature::new(dims).unwrap();
        let idx = (seed % sig.total_dim() as u64) as usize;
        prop_assert_eq!(sig.index(&sig.digits(idx)), idx);
    }

    #[test]
    fn werner_is_affine(p in 0.0f64..=1.0) {
        let g = ghz(3, 2, None).unwrap();
        let lhs = werner(&g, WernerParams::new(p).unwrap());
        let one = werner(&g, WernerParams::new(1.0).unwrap());
        let zero = werner(&g, WernerParams::new(0.0).unwrap());
        let rhs = &one.matrix().scale(p) + &zero.matrix().scale(1.0 - p);
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn tensor_of_pure_states_matches_density_tensor(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random_pure(&SubsystemSignature::qubits(1), &mut r);
        let b = random_pure(&SubsystemSignature::new(vec![3]).unwrap(), &mut r);
        let lhs = a.tensor(&b).to_density();
        let rhs = a.to_density().tensor(&b.to_density());
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-14);
        let norm: f64 = a.tensor(&b).amplitudes().iter().map(Complex64::norm_sqr).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }
}
