//! Multipartite density matrices and pure states.
//!
//! Party 0 is the most significant digit of the flat basis index, so for
//! three qubits `|a,b,c⟩` sits at index `4a + 2b + c`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, kron_vec, CMatrix};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues in `(-EIGEN_CLAMP, 0)` are rounding noise; anything below is corrupt.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Local dimensions of each party, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsystemSignature {
    dims: Vec<usize>,
}

impl SubsystemSignature {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidSignature("no parties".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidSignature(format!(
                "local dimension {d} < 2 in {dims:?}"
            )));
        }
        Ok(Self { dims })
    }

    /// `n` parties of local dimension `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn max_dim(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(1)
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub fn concat(&self, other: &SubsystemSignature) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims }
    }

    /// Mixed-radix digits of a flat index, party 0 first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn sub(&self, parties: &[usize]) -> Self {
        Self {
            dims: parties.iter().map(|&p| self.dims[p]).collect(),
        }
    }

    fn check_parties(&self, parties: &[usize]) -> Result<()> {
        for (k, &p) in parties.iter().enumerate() {
            if p >= self.parties() {
                return Err(Error::InvalidPartySet(format!(
                    "party index {p} out of range for {} parties",
                    self.parties()
                )));
            }
            if parties[..k].contains(&p) {
                return Err(Error::InvalidPartySet(format!("party {p} repeated")));
            }
        }
        Ok(())
    }

    fn check_permutation(&self, perm: &[usize]) -> Result<()> {
        let n = self.parties();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation(perm.to_vec()));
            }
            seen[p] = true;
        }
        Ok(())
    }

    /// For every flat index of the permuted system, the flat index it came from.
    fn permutation_map(&self, perm: &[usize]) -> Vec<usize> {
        let new_sig = self.sub(perm);
        let mut old_digits = vec![0; self.parties()];
        (0..self.total_dim())
            .map(|new_index| {
                let new_digits = new_sig.digits(new_index);
                for (j, &p) in perm.iter().enumerate() {
                    old_digits[p] = new_digits[j];
                }
                self.index(&old_digits)
            })
            .collect()
    }
}

/// Party label used in reports: 0 → "A", 1 → "B", ...
pub fn party_label(index: usize) -> String {
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("P{index}")
    }
}

/// Normalized state vector over a multipartite space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    signature: SubsystemSignature,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(signature: SubsystemSignature, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != signature.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: signature.total_dim(),
                found: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(Self {
            signature,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(signature: SubsystemSignature, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sq: 0.0 });
        }
        Self::new(
            signature,
            amplitudes.into_iter().map(|a| a / norm).collect(),
        )
    }

    /// Computational basis ket with the given per-party digits.
    pub fn basis(signature: SubsystemSignature, digits: &[usize]) -> Result<Self> {
        if digits.len() != signature.parties() {
            return Err(Error::PartyCount {
                expected: signature.parties().to_string(),
                found: digits.len(),
            });
        }
        for (&x, &d) in digits.iter().zip(signature.dims()) {
            if x >= d {
                return Err(Error::InvalidParameter(format!(
                    "digit {x} >= dimension {d}"
                )));
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); signature.total_dim()];
        amps[signature.index(digits)] = Complex64::new(1.0, 0.0);
        Ok(Self {
            signature,
            amplitudes: amps,
        })
    }

    pub fn signature(&self) -> &SubsystemSignature {
        &self.signature
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        PureState {
            signature: self.signature.concat(&other.signature),
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// Reorders parties so that new party `j` is old party `perm[j]`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<PureState> {
        self.signature.check_permutation(perm)?;
        let map = self.signature.permutation_map(perm);
        Ok(PureState {
            signature: self.signature.sub(perm),
            amplitudes: map.iter().map(|&old| self.amplitudes[old]).collect(),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                found: other.amplitudes.len(),
            });
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            signature: self.signature.clone(),
            matrix: CMatrix::outer(&self.amplitudes),
        }
    }
}

/// Density operator of a multipartite system.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    signature: SubsystemSignature,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, in that order.
    pub fn new(signature: SubsystemSignature, matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != signature.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: signature.total_dim(),
                found: matrix.dim(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotUnity { trace });
        }
        let rho = Self { signature, matrix };
        let min = rho.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -EIGEN_CLAMP {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(rho)
    }

    pub(crate) fn from_parts_unchecked(signature: SubsystemSignature, matrix: CMatrix) -> Self {
        Self { signature, matrix }
    }

    pub fn maximally_mixed(signature: SubsystemSignature) -> Self {
        let n = signature.total_dim();
        Self {
            matrix: CMatrix::identity(n).scale(1.0 / n as f64),
            signature,
        }
    }

    pub fn signature(&self) -> &SubsystemSignature {
        &self.signature
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn parties(&self) -> usize {
        self.signature.parties()
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.eigvals_hermitian()
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, lambda: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.signature != other.signature {
            return Err(Error::InvalidSignature(format!(
                "cannot mix {:?} with {:?}",
                self.signature.dims(),
                other.signature.dims()
            )));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight {lambda} outside [0,1]"
            )));
        }
        Ok(Self {
            signature: self.signature.clone(),
            matrix: &self.matrix.scale(lambda) + &other.matrix.scale(1.0 - lambda),
        })
    }

    /// Weighted sum of states; weights are normalized.
    pub fn mixture(components: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.iter().any(|(w, _)| *w < 0.0) || total <= 0.0 {
            return Err(Error::InvalidParameter(
                "mixture weights must be nonnegative".into(),
            ));
        }
        let mut acc = CMatrix::zeros(first.1.dim());
        for (w, rho) in components {
            if rho.signature != first.1.signature {
                return Err(Error::InvalidSignature(
                    "mixture components differ in signature".into(),
                ));
            }
            acc = &acc + &rho.matrix.scale(w / total);
        }
        Ok(Self {
            signature: first.1.signature.clone(),
            matrix: acc,
        })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            signature: self.signature.concat(&other.signature),
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Reduced state on `keep`, returned in the original party order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::InvalidPartySet("keep set is empty".into()));
        }
        self.signature.check_parties(keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        if kept.len() == self.parties() {
            return Ok(self.clone());
        }
        let traced: Vec<usize> = (0..self.parties()).filter(|p| !kept.contains(p)).collect();
        let kept_sig = self.signature.sub(&kept);
        let traced_sig = self.signature.sub(&traced);

        // Group full indices by their traced-out digits.
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_sig.total_dim()];
        for full in 0..self.dim() {
            let digits = self.signature.digits(full);
            let k: Vec<usize> = kept.iter().map(|&p| digits[p]).collect();
            let t: Vec<usize> = traced.iter().map(|&p| digits[p]).collect();
            groups[traced_sig.index(&t)].push((kept_sig.index(&k), full));
        }
        let mut out = CMatrix::zeros(kept_sig.total_dim());
        for group in &groups {
            for &(ki, fi) in group {
                for &(kj, fj) in group {
                    out[(ki, kj)] += self.matrix[(fi, fj)];
                }
            }
        }
        Ok(DensityMatrix {
            signature: kept_sig,
            matrix: out,
        })
    }

    /// Reorders parties so that new party `j` is old party `perm[j]`.
    pub fn permute_parties(&self, perm: &[usize]) -> Result<DensityMatrix> {
        self.signature.check_permutation(perm)?;
        let map = self.signature.permutation_map(perm);
        Ok(DensityMatrix {
            signature: self.signature.sub(perm),
            matrix: CMatrix::from_fn(self.dim(), |i, j| self.matrix[(map[i], map[j])]),
        })
    }

    /// Von Neumann entropy in bits.
    pub fn vn_entropy(&self) -> Result<f64> {
        entropy_of_spectrum(&self.eigenvalues())
    }

    /// Entropy of the reduced state on `parties`.
    pub fn subsystem_entropy(&self, parties: &[usize]) -> Result<f64> {
        self.partial_trace(parties)?.vn_entropy()
    }

    /// `S(target ∪ rest) − S(rest)` in bits.
    pub fn conditional_vn_entropy(&self, target: &[usize], rest: &[usize]) -> Result<f64> {
        if target.is_empty() {
            return Err(Error::InvalidPartySet("target set is empty".into()));
        }
        if let Some(p) = target.iter().find(|p| rest.contains(p)) {
            return Err(Error::InvalidPartySet(format!(
                "party {p} in both target and rest"
            )));
        }
        let joint: Vec<usize> = target.iter().chain(rest).copied().collect();
        let s_joint = self.subsystem_entropy(&joint)?;
        let s_rest = if rest.is_empty() {
            0.0
        } else {
            self.subsystem_entropy(rest)?
        };
        Ok(s_joint - s_rest)
    }

    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
                sum += self.matrix[(i, j)].norm_sqr();
            }
        }
        sum
    }

    /// `2(1 − Tr ρ²)`.
    pub fn linear_entropy(&self) -> f64 {
        2.0 * (1.0 - self.purity())
    }

    /// `−log₂ Tr ρ²`.
    pub fn collision_entropy(&self) -> f64 {
        -self.purity().log2()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_pure(&self, target: &PureState) -> Result<f64> {
        if target.amplitudes.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: target.amplitudes.len(),
            });
        }
        let rho_psi = self.matrix.mul_vec(&target.amplitudes);
        Ok(inner(&target.amplitudes, &rho_psi).re)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: DensityJson = serde_json::from_str(s)?;
        raw.into_density()
    }

    pub fn to_json_string(&self) -> String {
        let n = self.dim();
        let raw = DensityJson {
            dims: self.signature.dims.clone(),
            re: (0..n)
                .map(|i| (0..n).map(|j| self.matrix[(i, j)].re).collect())
                .collect(),
            im: (0..n)
                .map(|i| (0..n).map(|j| self.matrix[(i, j)].im).collect())
                .collect(),
        };
        serde_json::to_string(&raw).expect("density matrix serializes")
    }
}

/// `−Σ λ log₂ λ` with near-zero negative eigenvalues clamped.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lam in eigenvalues {
        if lam < -EIGEN_CLAMP {
            return Err(Error::NegativeEigenvalue { value: lam });
        }
        if lam > 0.0 {
            s -= lam * lam.log2();
        }
    }
    Ok(s)
}

/// On-disk density matrix: `{ "dims": [...], "re": [[...]], "im": [[...]] }`.
#[derive(Debug, Serialize, Deserialize)]
struct DensityJson {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl DensityJson {
    fn into_density(self) -> Result<DensityMatrix> {
        let signature = SubsystemSignature::new(self.dims)?;
        let n = signature.total_dim();
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n {
                return Err(Error::Parse(format!(
                    "field `{name}` has {} rows, dims imply {n}",
                    rows.len()
                )));
            }
            if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(Error::NotSquare {
                    rows: n,
                    row,
                    cols: r.len(),
                });
            }
        }
        let matrix = CMatrix::from_fn(n, |i, j| Complex64::new(self.re[i][j], self.im[i][j]));
        DensityMatrix::new(signature, matrix)
    }
}
