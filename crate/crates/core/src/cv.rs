//! Triple-Gaussian model of photon triplets from third-order SPDC.
//!
//! The momentum (or frequency) amplitude factorizes along rotated axes
//! `u = (2,−1,−1)/√6`, `v = (0,1,−1)/√2`, `w = (1,1,1)/√3`:
//! `ψ ∝ exp(−α_u k_u² − α_v k_v² − α_w k_w²)`. Squaring gives conjugate
//! variances `1/(4α)` per axis; the Fourier-conjugate (position or time)
//! variances are `α`. All quantities are SI.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};

pub type Matrix3 = [[f64; 3]; 3];

const INV_SQRT6: f64 = 0.408_248_290_463_863_f64;
const INV_SQRT2: f64 = std::f64::consts::FRAC_1_SQRT_2;
const INV_SQRT3: f64 = 0.577_350_269_189_625_8_f64;

/// Rows are the principal axes u, v, w in party coordinates.
pub const ROTATION: Matrix3 = [
    [2.0 * INV_SQRT6, -INV_SQRT6, -INV_SQRT6],
    [0.0, INV_SQRT2, -INV_SQRT2],
    [INV_SQRT3, INV_SQRT3, INV_SQRT3],
];

/// Offset added to the closed-form approximations in the plotted trendlines.
pub const CAPTION_OFFSET: f64 = 0.207519;

/// Parameters of the transverse-momentum model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpatialParams {
    /// Length of the nonlinear medium (m).
    pub length: f64,
    /// Pump wavelength (m).
    pub pump_wavelength: f64,
    /// Refractive index at the pump wavelength.
    pub refractive_index: f64,
    /// One quarter of the 1/e² pump beam diameter (m).
    pub pump_width: f64,
}

impl SpatialParams {
    pub fn validate(&self) -> Result<()> {
        positive(&[
            ("length", self.length),
            ("pump_wavelength", self.pump_wavelength),
            ("refractive_index", self.refractive_index),
            ("pump_width", self.pump_width),
        ])
    }

    /// `a = 3 L λ_p / (8π n_p)` (m²).
    pub fn a(&self) -> f64 {
        3.0 * self.length * self.pump_wavelength / (8.0 * PI * self.refractive_index)
    }
}

/// Parameters of the frequency model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeParams {
    /// Length of the nonlinear medium (m).
    pub length: f64,
    /// Group velocity dispersion d²k/dω² at a third of the pump frequency (s²/m).
    pub gvd: f64,
    /// Pump bandwidth (rad/s).
    pub pump_bandwidth: f64,
}

impl TimeParams {
    pub fn validate(&self) -> Result<()> {
        positive(&[
            ("length", self.length),
            ("gvd", self.gvd),
            ("pump_bandwidth", self.pump_bandwidth),
        ])
    }

    /// `b = L κ / 4` (s²).
    pub fn b(&self) -> f64 {
        self.length * self.gvd / 4.0
    }
}

fn positive(fields: &[(&str, f64)]) -> Result<()> {
    for &(name, v) in fields {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive, got {v}"
            )));
        }
    }
    Ok(())
}

/// Gaussian exponents along u, v, w of the conjugate-variable amplitude.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianModel {
    pub alpha: [f64; 3],
}

impl GaussianModel {
    pub fn new(alpha_u: f64, alpha_v: f64, alpha_w: f64) -> Result<Self> {
        positive(&[
            ("alpha_u", alpha_u),
            ("alpha_v", alpha_v),
            ("alpha_w", alpha_w),
        ])?;
        Ok(Self {
            alpha: [alpha_u, alpha_v, alpha_w],
        })
    }

    /// Symmetric under party exchange when `α_u = α_v`.
    pub fn is_symmetric(&self) -> bool {
        (self.alpha[0] - self.alpha[1]).abs() <= 1e-12 * self.alpha[0].max(self.alpha[1])
    }

    pub fn min_direct_std(&self) -> f64 {
        self.alpha
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    pub fn min_conjugate_std(&self) -> f64 {
        let max_alpha = self.alpha.iter().copied().fold(0.0, f64::max);
        (1.0 / (4.0 * max_alpha)).sqrt()
    }

    fn direct_axis_variances(&self) -> [f64; 3] {
        self.alpha
    }

    fn conjugate_axis_variances(&self) -> [f64; 3] {
        self.alpha.map(|a| 1.0 / (4.0 * a))
    }

    /// Variance of `cᵀx` (direct variables) summed along the principal axes.
    /// Unlike [`combination_variance`] on the party-frame matrix this does
    /// not cancel when the axis variances differ by many orders of magnitude.
    pub fn direct_combination_variance(&self, c: [f64; 3]) -> f64 {
        axis_combination(c, self.direct_axis_variances())
    }

    /// As [`Self::direct_combination_variance`] for the conjugate variables.
    pub fn conjugate_combination_variance(&self, c: [f64; 3]) -> f64 {
        axis_combination(c, self.conjugate_axis_variances())
    }

    /// `Var(x_t | other two)` as `1/(Σ⁻¹)_tt`, with the precision assembled
    /// from positive per-axis terms.
    pub fn direct_conditional_variance(&self, target: usize) -> f64 {
        axis_conditional(target, self.direct_axis_variances())
    }

    /// `Var(k_t | other two)`, as [`Self::direct_conditional_variance`].
    pub fn conjugate_conditional_variance(&self, target: usize) -> f64 {
        axis_conditional(target, self.conjugate_axis_variances())
    }
}

fn axis_combination(c: [f64; 3], var: [f64; 3]) -> f64 {
    (0..3)
        .map(|m| {
            let proj: f64 = (0..3).map(|i| ROTATION[m][i] * c[i]).sum();
            proj * proj * var[m]
        })
        .sum()
}

fn axis_conditional(target: usize, var: [f64; 3]) -> f64 {
    let precision: f64 = (0..3).map(|m| ROTATION[m][target].powi(2) / var[m]).sum();
    1.0 / precision
}

pub fn model_spatial(p: &SpatialParams) -> Result<GaussianModel> {
    p.validate()?;
    let a = p.a();
    GaussianModel::new(
        8.0 * a / 9.0,
        8.0 * a / 9.0,
        3.0 * p.pump_width * p.pump_width + 32.0 * a / 9.0,
    )
}

pub fn model_time(p: &TimeParams) -> Result<GaussianModel> {
    p.validate()?;
    let b = p.b();
    GaussianModel::new(
        8.0 * b / 9.0,
        8.0 * b / 9.0,
        3.0 / (4.0 * p.pump_bandwidth * p.pump_bandwidth) + 8.0 * b / 9.0,
    )
}

/// Covariances in party coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CovariancePair {
    /// Of (k₁,k₂,k₃) or (ω₁,ω₂,ω₃).
    pub conjugate: Matrix3,
    /// Of (x₁,x₂,x₃) or (t₁,t₂,t₃).
    pub direct: Matrix3,
}

/// `Rᵀ diag(d) R`.
fn rotate_diagonal(d: [f64; 3]) -> Matrix3 {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|m| ROTATION[m][i] * d[m] * ROTATION[m][j]).sum();
        }
    }
    out
}

pub fn covariances(m: &GaussianModel) -> CovariancePair {
    let [au, av, aw] = m.alpha;
    CovariancePair {
        conjugate: rotate_diagonal([1.0 / (4.0 * au), 1.0 / (4.0 * av), 1.0 / (4.0 * aw)]),
        direct: rotate_diagonal([au, av, aw]),
    }
}

/// Variance of the linear combination `cᵀ x`.
pub fn combination_variance(cov: &Matrix3, c: [f64; 3]) -> f64 {
    (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| c[i] * cov[i][j] * c[j])
        .sum()
}

/// Differential entropy (bits) of a Gaussian with variance `var`.
pub fn gaussian_entropy(var: f64) -> f64 {
    0.5 * (2.0 * PI * E * var).log2()
}

/// Schur complement `Σ_tt − Σ_tg Σ_gg⁻¹ Σ_gt`, solving with Gaussian
/// elimination on the conditioning block.
pub fn conditional_variance(cov: &Matrix3, target: usize, given: &[usize]) -> Result<f64> {
    if target > 2 || given.iter().any(|&g| g > 2 || g == target) {
        return Err(Error::InvalidPartySet(format!(
            "target {target} / given {given:?} invalid for 3 variables"
        )));
    }
    let k = given.len();
    if k == 0 {
        return Ok(cov[target][target]);
    }
    // augmented [Σ_gg | Σ_gt]
    let mut m: Vec<Vec<f64>> = given
        .iter()
        .map(|&gi| {
            let mut row: Vec<f64> = given.iter().map(|&gj| cov[gi][gj]).collect();
            row.push(cov[gi][target]);
            row
        })
        .collect();
    let scale = given.iter().map(|&g| cov[g][g].abs()).fold(0.0, f64::max);
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty range");
        if m[pivot][col].abs() <= 1e-13 * scale {
            return Err(Error::Singular(format!(
                "conditioning block on {given:?} is singular"
            )));
        }
        m.swap(col, pivot);
        for row in 0..k {
            if row != col {
                let f = m[row][col] / m[col][col];
                for c in col..=k {
                    m[row][c] -= f * m[col][c];
                }
            }
        }
    }
    let reduction: f64 = (0..k)
        .map(|i| cov[target][given[i]] * m[i][k] / m[i][i])
        .sum();
    let var = cov[target][target] - reduction;
    if var <= 0.0 {
        return Err(Error::Singular(format!(
            "conditional variance {var} is not positive"
        )));
    }
    Ok(var)
}

/// `h(target | given)` in bits.
pub fn gaussian_conditional_entropy(cov: &Matrix3, target: usize, given: &[usize]) -> Result<f64> {
    conditional_variance(cov, target, given).map(gaussian_entropy)
}

/// `log₂(2π) − h(x_A|x_B,x_C) − h(k_A|k_B,k_C)`, with both conditional
/// variances taken in the principal-axis frame.
pub fn e3f_cv_exact_bound(m: &GaussianModel) -> Result<f64> {
    if !m.is_symmetric() {
        return Err(Error::InvalidParameter(format!(
            "model is not symmetric between parties (alpha_u {} != alpha_v {})",
            m.alpha[0], m.alpha[1]
        )));
    }
    let h_direct = gaussian_entropy(m.direct_conditional_variance(0));
    let h_conj = gaussian_entropy(m.conjugate_conditional_variance(0));
    Ok((2.0 * PI).log2() - h_direct - h_conj)
}

/// Closed-form loosening of the exact bound and the same with [`CAPTION_OFFSET`] added.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxBound {
    pub bare: f64,
    pub caption: f64,
}

impl ApproxBound {
    fn from_bare(bare: f64) -> Self {
        Self {
            bare,
            caption: bare + CAPTION_OFFSET,
        }
    }
}

/// `−log₂((e/2) σ(x_A−x_B)/σ(x_A))`.
pub fn e3f_cv_approx_spatial(p: &SpatialParams) -> Result<ApproxBound> {
    let m = model_spatial(p)?;
    let sd_diff = m.direct_combination_variance([1.0, -1.0, 0.0]).sqrt();
    let sd_a = m.direct_combination_variance([1.0, 0.0, 0.0]).sqrt();
    Ok(ApproxBound::from_bare(-(E / 2.0 * sd_diff / sd_a).log2()))
}

/// `−log₂(e σ(t_A−t_B) σ(ω_A+ω_B+ω_C))`.
pub fn e3f_cv_approx_time(p: &TimeParams) -> Result<ApproxBound> {
    let m = model_time(p)?;
    let sd_diff = m.direct_combination_variance([1.0, -1.0, 0.0]).sqrt();
    let sd_sum = m.conjugate_combination_variance([1.0, 1.0, 1.0]).sqrt();
    Ok(ApproxBound::from_bare(-(E * sd_diff * sd_sum).log2()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn spatial(width: f64) -> SpatialParams {
        SpatialParams {
            length: 0.01,
            pump_wavelength: 325e-9,
            refractive_index: 2.247,
            pump_width: width,
        }
    }

    #[test]
    fn rotation_is_orthogonal() {
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| ROTATION[i][k] * ROTATION[j][k]).sum();
                assert_abs_diff_eq!(dot, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn a_for_reference_crystal() {
        let a = spatial(1e-3).a();
        assert_relative_eq!(
            a,
            3.0 * 0.01 * 325e-9 / (8.0 * PI * 2.247),
            epsilon = 0.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(a, 1.7265e-10, max_relative = 1e-4);
        let mut p = spatial(1e-3);
        p.length *= 2.0;
        let m1 = model_spatial(&spatial(1e-3)).unwrap();
        let m2 = model_spatial(&p).unwrap();
        assert_relative_eq!(
            m2.alpha[0],
            2.0 * m1.alpha[0],
            epsilon = 0.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn invalid_params() {
        assert!(model_spatial(&spatial(0.0)).is_err());
        assert!(model_time(&TimeParams {
            length: 0.01,
            gvd: -1.0,
            pump_bandwidth: 1e9
        })
        .is_err());
        assert!(GaussianModel::new(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn diagonal_covariance_conditional_is_marginal() {
        let cov = [[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 5.0]];
        assert_abs_diff_eq!(
            gaussian_conditional_entropy(&cov, 0, &[1, 2]).unwrap(),
            gaussian_entropy(2.0),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(gaussian_entropy(1.0), 2.047095585180641, epsilon = 1e-12);
    }

    #[test]
    fn singular_block_is_numerical_error() {
        let cov = [[1.0, 0.5, 0.5], [0.5, 1.0, 1.0], [0.5, 1.0, 1.0]];
        let err = conditional_variance(&cov, 0, &[1, 2]).unwrap_err();
        assert!(err.is_numerical());
    }

    #[test]
    fn minimum_uncertainty_per_axis() {
        let m = model_spatial(&spatial(1e-4)).unwrap();
        let cov = covariances(&m);
        for axis in ROTATION {
            let vx = combination_variance(&cov.direct, axis);
            let vk = combination_variance(&cov.conjugate, axis);
            assert_relative_eq!(vx * vk, 0.25, max_relative = 1e-12);
        }
    }

    #[test]
    fn exact_bound_reference_point() {
        let b = e3f_cv_exact_bound(&model_spatial(&spatial(1e-3)).unwrap()).unwrap();
        assert_abs_diff_eq!(b, 5.6000, epsilon = 1e-3);
    }

    #[test]
    fn axis_frame_agrees_with_party_frame() {
        let m = model_spatial(&spatial(3e-5)).unwrap();
        let cov = covariances(&m);
        for t in 0..3 {
            let given: Vec<usize> = (0..3).filter(|&g| g != t).collect();
            assert_relative_eq!(
                m.direct_conditional_variance(t),
                conditional_variance(&cov.direct, t, &given).unwrap(),
                epsilon = 0.0,
                max_relative = 1e-9
            );
            assert_relative_eq!(
                m.conjugate_conditional_variance(t),
                conditional_variance(&cov.conjugate, t, &given).unwrap(),
                epsilon = 0.0,
                max_relative = 1e-9
            );
        }
        let c = [0.3, -1.2, 0.5];
        assert_relative_eq!(
            m.conjugate_combination_variance(c),
            combination_variance(&cov.conjugate, c),
            epsilon = 0.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn asymmetric_model_rejected() {
        let m = GaussianModel::new(1.0, 2.0, 3.0).unwrap();
        assert!(e3f_cv_exact_bound(&m).is_err());
    }

    #[test]
    fn caption_offset_is_additive() {
        let a = e3f_cv_approx_spatial(&spatial(1e-3)).unwrap();
        assert_abs_diff_eq!(a.caption - a.bare, CAPTION_OFFSET, epsilon = 1e-15);
        assert_abs_diff_eq!(a.bare, 5.6000 - 0.2075, epsilon = 0.01);
    }
}
