//! Density-element bounds adapted to the N-qubit GHZ state.
//!
//! `B` lower-bounds a linear-entropy entanglement measure; through the
//! convexity of `−log₂(1 − x²/2)` it lower-bounds the entanglement of
//! formation. The corner variant uses only the four corner elements and
//! never exceeds `B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementBoundReport {
    pub b_full: f64,
    pub b_corner: f64,
    /// From `b_full`, the tighter of the two.
    pub enf_lower: f64,
}

fn check_qubits(rho: &DensityMatrix) -> Result<usize> {
    if !rho.signature().is_all_qubits() {
        return Err(Error::NotQubits(rho.signature().dims().to_vec()));
    }
    Ok(rho.dim())
}

/// `2|⟨0…0|ρ|1…1⟩| − Σ_{q=1}^{2^N−2} √(⟨q|ρ|q⟩⟨q̄|ρ|q̄⟩)` with `q̄ = 2^N−1−q`.
pub fn bound_b_full(rho: &DensityMatrix) -> Result<f64> {
    let dim = check_qubits(rho)?;
    let last = dim - 1;
    let coherence = 2.0 * rho.element(0, last).norm();
    let penalty: f64 = (1..last)
        .map(|q| {
            let a = rho.element(q, q).re.max(0.0);
            let b = rho.element(last - q, last - q).re.max(0.0);
            (a * b).sqrt()
        })
        .sum();
    Ok(coherence - penalty)
}

/// `2|ρ_{0,2^N−1}| + ρ_{0,0} + ρ_{2^N−1,2^N−1} − 1`.
pub fn bound_b_corner(rho: &DensityMatrix) -> Result<f64> {
    let dim = check_qubits(rho)?;
    let last = dim - 1;
    Ok(2.0 * rho.element(0, last).norm()
        + rho.element(0, 0).norm()
        + rho.element(last, last).norm()
        - 1.0)
}

/// `−log₂(1 − b²/2)` for positive `b`, zero otherwise.
pub fn enf_lower_from_b(b: f64) -> Result<f64> {
    if b > 2f64.sqrt() + 1e-12 || b.is_nan() {
        return Err(Error::BoundOutOfRange(b));
    }
    if b <= 0.0 {
        return Ok(0.0);
    }
    Ok(-(1.0 - b * b / 2.0).log2())
}

pub fn element_bound_report(rho: &DensityMatrix) -> Result<ElementBoundReport> {
    let b_full = bound_b_full(rho)?;
    let b_corner = bound_b_corner(rho)?;
    Ok(ElementBoundReport {
        b_full,
        b_corner,
        enf_lower: enf_lower_from_b(b_full)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::SubsystemSignature;
    use crate::states::{ghz, maximally_mixed, w3, werner, WernerParams};
    use approx::assert_abs_diff_eq;

    fn gw(p: f64) -> DensityMatrix {
        werner(&ghz(3, 2, None).unwrap(), WernerParams::new(p).unwrap())
    }

    #[test]
    fn ghz_gives_unit_bounds() {
        for n in 2..=5 {
            let rho = ghz(n, 2, None).unwrap().to_density();
            assert_abs_diff_eq!(bound_b_full(&rho).unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(bound_b_corner(&rho).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ghz_werner_closed_forms() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let rho = gw(p);
            assert_abs_diff_eq!(
                bound_b_full(&rho).unwrap(),
                p - 0.75 * (1.0 - p),
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                bound_b_corner(&rho).unwrap(),
                2.0 * p + (1.0 - p) / 4.0 - 1.0,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn w_state_is_not_quantified() {
        let rep = element_bound_report(&w3().to_density()).unwrap();
        assert_abs_diff_eq!(rep.b_full, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rep.b_corner, -1.0, epsilon = 1e-15);
        assert_eq!(rep.enf_lower, 0.0);
        for p in [0.2, 0.6, 0.99] {
            let ww = werner(&w3(), WernerParams::new(p).unwrap());
            assert!(bound_b_full(&ww).unwrap() < 0.0);
        }
    }

    #[test]
    fn maximally_mixed_corner() {
        for n in 2..=4 {
            let rho = maximally_mixed(SubsystemSignature::qubits(n));
            let expected = 1.0 / f64::from(1u32 << (n - 1)) - 1.0;
            assert_abs_diff_eq!(bound_b_corner(&rho).unwrap(), expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn enf_conversion() {
        assert_eq!(enf_lower_from_b(1.0).unwrap(), 1.0);
        assert_eq!(enf_lower_from_b(0.0).unwrap(), 0.0);
        assert_eq!(enf_lower_from_b(-0.3).unwrap(), 0.0);
        assert!(enf_lower_from_b(1.5).is_err());
        // b = 0.825 at p = 0.9: −log₂(1 − 0.825²/2)
        let rep = element_bound_report(&gw(0.9)).unwrap();
        assert_abs_diff_eq!(rep.b_full, 0.825, epsilon = 1e-14);
        assert_abs_diff_eq!(
            rep.enf_lower,
            -(1.0f64 - 0.340_312_5).log2(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn rejects_qutrits() {
        let rho = ghz(3, 3, None).unwrap().to_density();
        assert!(matches!(bound_b_full(&rho), Err(Error::NotQubits(_))));
        assert!(matches!(bound_b_corner(&rho), Err(Error::NotQubits(_))));
    }

    #[test]
    fn local_bit_flip_changes_bound() {
        let g = ghz(3, 2, None).unwrap();
        // X on party C maps |000⟩+|111⟩ to |001⟩+|110⟩
        let flipped: Vec<_> = (0..8).map(|i| g.amplitudes()[i ^ 1]).collect();
        let rho = crate::state::PureState::new(g.signature().clone(), flipped)
            .unwrap()
            .to_density();
        let b = bound_b_full(&rho).unwrap();
        assert!((b - 1.0).abs() > 0.5);
    }
}
