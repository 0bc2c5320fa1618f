//! N-party cyclic entropic witness and the conjugate-correlation limit.

use serde::Serialize;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::witness::MeasurementPair;

/// Tolerance below `2 log₂ Ω` at which the cyclic sum counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclicWitnessReport {
    pub n: usize,
    /// `Σ_i H(Q_i|Q_{i+1}) + H(R_i|R_{i+1},…,R_{i+N−1})`, indices mod N.
    pub lhs: f64,
    /// `2 log₂ Ω`.
    pub rhs: f64,
    pub violated: bool,
}

fn check_uniform(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<usize> {
    let n = dist_q.parties();
    if dist_r.parties() != n {
        return Err(Error::PartyCount {
            expected: n.to_string(),
            found: dist_r.parties(),
        });
    }
    for dist in [dist_q, dist_r] {
        if let Some(&d) = dist.dims().iter().find(|&&d| d != pair.dim()) {
            return Err(Error::DimensionMismatch {
                expected: pair.dim(),
                found: d,
            });
        }
    }
    Ok(n)
}

/// Genuine N-partite entanglement is witnessed when `lhs < rhs`.
/// Every party must use the same pair and local dimension.
pub fn cyclic_witness(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<CyclicWitnessReport> {
    let n = check_uniform(dist_q, dist_r, pair)?;
    if n < 3 {
        return Err(Error::PartyCount {
            expected: ">= 3".into(),
            found: n,
        });
    }
    let mut lhs = 0.0;
    for i in 0..n {
        lhs += dist_q.conditional_entropy(&[i], &[(i + 1) % n])?;
        let rest: Vec<usize> = (1..n).map(|k| (i + k) % n).collect();
        lhs += dist_r.conditional_entropy(&[i], &rest)?;
    }
    let rhs = 2.0 * pair.omega().log2();
    Ok(CyclicWitnessReport {
        n,
        lhs,
        rhs,
        violated: lhs < rhs - VIOLATION_TOL,
    })
}

/// `H(Q_1…Q_{N−1}|Q_N) + H(R_1…R_{N−1}|R_N) − (N−2) log₂ d` for a maximally
/// conjugate pair. Nonnegative for every physical state.
pub fn conjugate_correlation_defect(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<f64> {
    let n = check_uniform(dist_q, dist_r, pair)?;
    if n < 2 {
        return Err(Error::PartyCount {
            expected: ">= 2".into(),
            found: n,
        });
    }
    let d = pair.dim();
    let omega = pair.omega();
    if omega < d as f64 - 1e-9 {
        return Err(Error::NotConjugate { omega, dim: d });
    }
    let head: Vec<usize> = (0..n - 1).collect();
    let last = [n - 1];
    let hq = dist_q.conditional_entropy(&head, &last)?;
    let hr = dist_r.conditional_entropy(&head, &last)?;
    Ok(hq + hr - (n as f64 - 2.0) * (d as f64).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::SubsystemSignature;
    use crate::states::{ghz, maximally_mixed};
    use crate::witness::{measurement_distribution_uniform, ObservableBasis};
    use approx::assert_abs_diff_eq;

    fn zx_dists(
        rho: &crate::state::DensityMatrix,
    ) -> (JointDistribution, JointDistribution, MeasurementPair) {
        let pair =
            MeasurementPair::new(ObservableBasis::pauli_z(), ObservableBasis::pauli_x()).unwrap();
        let dq = measurement_distribution_uniform(rho, &pair.q).unwrap();
        let dr = measurement_distribution_uniform(rho, &pair.r).unwrap();
        (dq, dr, pair)
    }

    #[test]
    fn ghz_maximally_violates() {
        for n in 3..=6 {
            let (dq, dr, pair) = zx_dists(&ghz(n, 2, None).unwrap().to_density());
            let rep = cyclic_witness(&dq, &dr, &pair).unwrap();
            assert_abs_diff_eq!(rep.lhs, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(rep.rhs, 2.0, epsilon = 1e-12);
            assert!(rep.violated);
        }
    }

    #[test]
    fn maximally_mixed_does_not_violate() {
        for n in 3..=5 {
            let (dq, dr, pair) = zx_dists(&maximally_mixed(SubsystemSignature::qubits(n)));
            let rep = cyclic_witness(&dq, &dr, &pair).unwrap();
            assert_abs_diff_eq!(rep.lhs, 2.0 * n as f64, epsilon = 1e-12);
            assert!(!rep.violated);
        }
    }

    #[test]
    fn defect_values() {
        for n in 3..=6 {
            let (dq, dr, pair) = zx_dists(&ghz(n, 2, None).unwrap().to_density());
            assert_abs_diff_eq!(
                conjugate_correlation_defect(&dq, &dr, &pair).unwrap(),
                0.0,
                epsilon = 1e-12
            );
            let (dq, dr, pair) = zx_dists(&maximally_mixed(SubsystemSignature::qubits(n)));
            assert_abs_diff_eq!(
                conjugate_correlation_defect(&dq, &dr, &pair).unwrap(),
                n as f64,
                epsilon = 1e-12
            );
        }
        let (dq, dr, pair) = zx_dists(&ghz(2, 2, None).unwrap().to_density());
        assert_abs_diff_eq!(
            dq.conditional_entropy(&[0], &[1]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            dr.conditional_entropy(&[0], &[1]).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            conjugate_correlation_defect(&dq, &dr, &pair).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn defect_requires_conjugate_bases() {
        let rho = ghz(3, 2, None).unwrap().to_density();
        let pair =
            MeasurementPair::new(ObservableBasis::pauli_z(), ObservableBasis::pauli_z()).unwrap();
        let dq = measurement_distribution_uniform(&rho, &pair.q).unwrap();
        assert!(matches!(
            conjugate_correlation_defect(&dq, &dq, &pair),
            Err(Error::NotConjugate { .. })
        ));
    }

    #[test]
    fn party_count_mismatch() {
        let (dq3, _, pair) = zx_dists(&ghz(3, 2, None).unwrap().to_density());
        let (_, dr4, _) = zx_dists(&ghz(4, 2, None).unwrap().to_density());
        assert!(cyclic_witness(&dq3, &dr4, &pair).is_err());
        let (dq2, dr2, pair) = zx_dists(&ghz(2, 2, None).unwrap().to_density());
        assert!(cyclic_witness(&dq2, &dr2, &pair).is_err());
    }
}
