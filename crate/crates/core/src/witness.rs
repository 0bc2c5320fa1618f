//! Tripartite conditional-entropy witness and the lower bounds it places on
//! the tripartite entanglement of formation.
//!
//! Two routes are offered. The exact route evaluates
//! `V = −S(A|BC) − S(B|AC) − S(C|AB) − 2 log₂ D_max` from the density
//! matrix. The measured route replaces each `−S(X|rest)` by the entropic
//! uncertainty bound `log₂ Ω − H(Q_X|Q_rest) − H(R_X|R_rest)`, which needs
//! only the outcome statistics of two measurement settings.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::linalg::{inner, CMatrix};
use crate::state::{party_label, DensityMatrix};

pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Orthonormal eigenbasis of a local observable.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableBasis {
    vectors: Vec<Vec<Complex64>>,
    labels: Vec<String>,
}

impl ObservableBasis {
    pub fn new(vectors: Vec<Vec<Complex64>>, labels: Vec<String>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::InvalidParameter("empty basis".into()));
        }
        if labels.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: labels.len(),
            });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
        let mut deviation: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((inner(&vectors[i], &vectors[j]) - target).norm());
            }
        }
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { vectors, labels })
    }

    /// Basis from the columns of a unitary; outcomes are labelled `0..d`.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let d = u.dim();
        Self::new(
            (0..d).map(|j| u.column(j)).collect(),
            (0..d).map(|j| j.to_string()).collect(),
        )
    }

    pub fn computational(d: usize) -> Self {
        Self::from_unitary(&CMatrix::identity(d)).expect("identity is unitary")
    }

    /// Discrete Fourier basis, mutually unbiased with the computational basis.
    pub fn fourier(d: usize) -> Self {
        let norm = 1.0 / (d as f64).sqrt();
        let u = CMatrix::from_fn(d, |i, j| {
            Complex64::from_polar(norm, 2.0 * PI * (i * j) as f64 / d as f64)
        });
        Self::from_unitary(&u).expect("DFT matrix is unitary")
    }

    pub fn pauli_z() -> Self {
        Self::computational(2)
    }

    /// `|+⟩, |−⟩`.
    pub fn pauli_x() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(vec![vec![h, h], vec![h, -h]], vec!["+".into(), "-".into()])
            .expect("Hadamard basis is orthonormal")
    }

    /// `(|0⟩ ± i|1⟩)/√2`.
    pub fn pauli_y() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
        Self::new(
            vec![vec![h, ih], vec![h, -ih]],
            vec!["+i".into(), "-i".into()],
        )
        .expect("Y basis is orthonormal")
    }

    /// `x`, `y`, `z` for qubits; `computational(d)` and `fourier(d)` for qudits.
    pub fn named(name: &str) -> Result<Self> {
        let name = name.trim().to_ascii_lowercase();
        match name.as_str() {
            "x" => return Ok(Self::pauli_x()),
            "y" => return Ok(Self::pauli_y()),
            "z" => return Ok(Self::pauli_z()),
            _ => {}
        }
        let parse_dim = |prefix: &str| -> Option<usize> {
            name.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .trim()
                .parse()
                .ok()
        };
        if let Some(d) = parse_dim("computational").filter(|&d| d >= 2) {
            return Ok(Self::computational(d));
        }
        if let Some(d) = parse_dim("fourier").filter(|&d| d >= 2) {
            return Ok(Self::fourier(d));
        }
        Err(Error::Parse(format!("unknown basis `{name}`")))
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn as_unitary(&self) -> CMatrix {
        CMatrix::from_columns(&self.vectors)
    }
}

/// Two observables on the same local space.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPair {
    pub q: ObservableBasis,
    pub r: ObservableBasis,
}

impl MeasurementPair {
    pub fn new(q: ObservableBasis, r: ObservableBasis) -> Result<Self> {
        if q.dim() != r.dim() {
            return Err(Error::DimensionMismatch {
                expected: q.dim(),
                found: r.dim(),
            });
        }
        Ok(Self { q, r })
    }

    /// Q = σ_x, R = σ_z.
    pub fn pauli_xz() -> Self {
        Self::new(ObservableBasis::pauli_x(), ObservableBasis::pauli_z()).expect("both qubit bases")
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn omega(&self) -> f64 {
        omega(self)
    }
}

/// `Ω = min_{i,j} 1/|⟨q_i|r_j⟩|²`, from the largest squared overlap.
pub fn omega(pair: &MeasurementPair) -> f64 {
    let max_overlap = pair
        .q
        .vectors
        .iter()
        .flat_map(|q| pair.r.vectors.iter().map(move |r| inner(q, r).norm_sqr()))
        .fold(0.0, f64::max);
    // clip rounding so 1 ≤ Ω ≤ d
    (1.0 / max_overlap).clamp(1.0, pair.dim() as f64)
}

/// Outcome statistics of product measurements, one basis per party:
/// `p(i,j,k,…) = Tr[ρ (Π_i ⊗ Π_j ⊗ Π_k ⊗ …)]`.
pub fn measurement_distribution(
    rho: &DensityMatrix,
    bases: &[ObservableBasis],
) -> Result<JointDistribution> {
    let dims = rho.signature().dims();
    if bases.len() != dims.len() {
        return Err(Error::PartyCount {
            expected: dims.len().to_string(),
            found: bases.len(),
        });
    }
    for (b, &d) in bases.iter().zip(dims) {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.dim(),
            });
        }
    }
    let u = bases
        .iter()
        .skip(1)
        .fold(bases[0].as_unitary(), |acc, b| acc.kron(&b.as_unitary()));
    let rho_u = rho.matrix() * &u;
    let n = rho.dim();
    let probs: Vec<f64> = (0..n)
        .map(|col| {
            let p: f64 = (0..n)
                .map(|k| (u[(k, col)].conj() * rho_u[(k, col)]).re)
                .sum();
            p.max(0.0)
        })
        .collect();
    JointDistribution::new(dims.to_vec(), probs)
}

/// Same basis on every party.
pub fn measurement_distribution_uniform(
    rho: &DensityMatrix,
    basis: &ObservableBasis,
) -> Result<JointDistribution> {
    let bases = vec![basis.clone(); rho.parties()];
    measurement_distribution(rho, &bases)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMethod {
    ExactQuantum,
    Measured,
    PureMin,
}

/// Per-party terms and the resulting bound.
///
/// `terms[x]` is `−S(x|rest)` for the exact method, or its uncertainty-relation
/// lower bound for the measured methods.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub method: WitnessMethod,
    pub parties: Vec<String>,
    pub terms: Vec<f64>,
    /// Empty for the exact method.
    pub omega: Vec<f64>,
    pub d_max: usize,
    pub v_bound: f64,
    pub e3f_lower: f64,
}

fn check_tripartite(parties: usize) -> Result<()> {
    if parties != 3 {
        return Err(Error::PartyCount {
            expected: "3".into(),
            found: parties,
        });
    }
    Ok(())
}

fn others(target: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&p| p != target).collect()
}

/// Exact violation `V` from von Neumann conditional entropies.
pub fn quantum_witness_v(rho: &DensityMatrix) -> Result<WitnessReport> {
    check_tripartite(rho.parties())?;
    let d_max = rho.signature().max_dim();
    let terms = (0..3)
        .map(|x| Ok(-rho.conditional_vn_entropy(&[x], &others(x, 3))?))
        .collect::<Result<Vec<f64>>>()?;
    let v = terms.iter().sum::<f64>() - 2.0 * (d_max as f64).log2();
    Ok(WitnessReport {
        method: WitnessMethod::ExactQuantum,
        parties: (0..3).map(party_label).collect(),
        terms,
        omega: Vec::new(),
        d_max,
        v_bound: v,
        e3f_lower: v.max(0.0),
    })
}

fn check_measured(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<()> {
    if dist_q.dims() != dist_r.dims() {
        return Err(Error::InvalidDistribution(format!(
            "Q outcomes {:?} and R outcomes {:?} differ",
            dist_q.dims(),
            dist_r.dims()
        )));
    }
    if let Some(&d) = dist_q.dims().iter().find(|&&d| d != pair.dim()) {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            found: d,
        });
    }
    Ok(())
}

/// `log₂ Ω − H(Q_t|Q_rest) − H(R_t|R_rest)`, a lower bound on `−S(t|rest)`.
pub fn measured_neg_cond_bound(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
    target: usize,
) -> Result<f64> {
    check_measured(dist_q, dist_r, pair)?;
    let n = dist_q.parties();
    if target >= n {
        return Err(Error::InvalidPartySet(format!(
            "party {target} out of range"
        )));
    }
    let rest = others(target, n);
    let hq = dist_q.conditional_entropy(&[target], &rest)?;
    let hr = dist_r.conditional_entropy(&[target], &rest)?;
    Ok(pair.omega().log2() - hq - hr)
}

fn measured_terms(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<Vec<f64>> {
    check_tripartite(dist_q.parties())?;
    (0..3)
        .map(|x| measured_neg_cond_bound(dist_q, dist_r, pair, x))
        .collect()
}

/// Witness from measured correlations: sum of per-party bounds minus `2 log₂ D_max`.
pub fn measured_witness_v(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<WitnessReport> {
    let terms = measured_terms(dist_q, dist_r, pair)?;
    let d_max = pair.dim();
    let v = terms.iter().sum::<f64>() - 2.0 * (d_max as f64).log2();
    Ok(WitnessReport {
        method: WitnessMethod::Measured,
        parties: (0..3).map(party_label).collect(),
        terms,
        omega: vec![pair.omega(); 3],
        d_max,
        v_bound: v,
        e3f_lower: v.max(0.0),
    })
}

/// Measured witness for a known state, checking that `D_max` of the state
/// agrees with the measurement dimension.
pub fn measured_witness_for_state(
    rho: &DensityMatrix,
    pair: &MeasurementPair,
) -> Result<WitnessReport> {
    check_tripartite(rho.parties())?;
    if let Some(&d) = rho.signature().dims().iter().find(|&&d| d != pair.dim()) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: pair.dim(),
        });
    }
    let dq = measurement_distribution_uniform(rho, &pair.q)?;
    let dr = measurement_distribution_uniform(rho, &pair.r)?;
    measured_witness_v(&dq, &dr, pair)
}

/// For states known to be pure: the smallest per-party bound, provided all
/// three are positive. `None` when the precondition fails.
pub fn pure_min_bound(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<Option<f64>> {
    let terms = measured_terms(dist_q, dist_r, pair)?;
    if terms.iter().all(|&t| t > 0.0) {
        Ok(terms.into_iter().reduce(f64::min))
    } else {
        Ok(None)
    }
}

/// Report form of [`pure_min_bound`]; `None` when not applicable.
pub fn pure_min_report(
    dist_q: &JointDistribution,
    dist_r: &JointDistribution,
    pair: &MeasurementPair,
) -> Result<Option<WitnessReport>> {
    let terms = measured_terms(dist_q, dist_r, pair)?;
    if !terms.iter().all(|&t| t > 0.0) {
        return Ok(None);
    }
    let min = terms.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Some(WitnessReport {
        method: WitnessMethod::PureMin,
        parties: (0..3).map(party_label).collect(),
        terms,
        omega: vec![pair.omega(); 3],
        d_max: pair.dim(),
        v_bound: min,
        e3f_lower: min,
    }))
}
