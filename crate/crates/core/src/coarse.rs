//! Coarse-grained (binned) conditional entropies of the triple-Gaussian
//! model and the discrete bound
//! `−S(A|BC) ≥ log₂(2π/(Δx Δk)) − H(X_A|X_B,X_C) − H(K_A|K_B,K_C)`.
//!
//! Bins are aligned to the origin, `[iΔ, (i+1)Δ)`, in party coordinates.
//! The primary estimator integrates the Gaussian over each bin: the
//! conditional law of `x_A` given `(x_B, x_C)` is Gaussian with a linear
//! mean, so the mass of every `A`-bin is an exact CDF difference, and the
//! remaining integral over the `(B, C)` square uses 3×3 Gauss–Legendre
//! nodes. For fine bins the node mixture is collapsed to one Gaussian. A seeded Monte-Carlo plug-in estimator is kept as a cross-check
//! for coarse bins.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::cv::{conditional_variance, covariances, GaussianModel, Matrix3};
use crate::error::{Error, Result};

/// Mahalanobis radius beyond which conditioning bins are skipped.
const CONDITIONING_CUTOFF: f64 = 7.0;
/// Radius, in conditional standard deviations, of target bins kept.
const TARGET_CUTOFF: f64 = 8.0;
/// Spread of the conditional mean over a conditioning bin, relative to the
/// conditional standard deviation, below which the node mixture is replaced
/// by a single moment-matched Gaussian (error of order ratio⁴).
const MOMENT_MATCH_RATIO: f64 = 0.1;
/// Minimum mass for a bin to count as occupied.
const OCCUPIED_MASS: f64 = 1e-12;

const GL_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoarseGrainedBound {
    pub dx: f64,
    pub dk: f64,
    /// `H(X_A|X_B,X_C)` in bits.
    pub h_direct: f64,
    /// `H(K_A|K_B,K_C)` in bits.
    pub h_conjugate: f64,
    /// Lower bound on `−S(A|BC)`.
    pub bound: f64,
}

/// Upper-tail / lower-tail split so bin masses far in either tail keep precision.
#[derive(Clone, Copy)]
enum Tail {
    Lower(f64),
    Upper(f64),
}

fn tail(z: f64) -> Tail {
    if z < 0.0 {
        Tail::Lower(0.5 * libm::erfc(-z / SQRT_2))
    } else {
        Tail::Upper(0.5 * libm::erfc(z / SQRT_2))
    }
}

/// `Φ(b) − Φ(a)` from the tails at `a < b`.
fn tail_mass(a: Tail, b: Tail) -> f64 {
    let m = match (a, b) {
        (Tail::Lower(pa), Tail::Lower(pb)) => pb - pa,
        (Tail::Upper(qa), Tail::Upper(qb)) => qa - qb,
        (Tail::Lower(pa), Tail::Upper(qb)) => 1.0 - pa - qb,
        (Tail::Upper(_), Tail::Lower(_)) => 0.0,
    };
    m.max(0.0)
}

fn check_width(width: f64) -> Result<()> {
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bin width must be positive, got {width}"
        )));
    }
    Ok(())
}

/// Number of origin-aligned bins of a centred Gaussian carrying mass above
/// [`OCCUPIED_MASS`].
fn occupied_bins(sd: f64, width: f64) -> usize {
    let reach = (12.0 * sd / width).ceil() as i64 + 1;
    (-reach..reach)
        .filter(|&i| {
            let a = tail(i as f64 * width / sd);
            let b = tail((i + 1) as f64 * width / sd);
            tail_mass(a, b) > OCCUPIED_MASS
        })
        .count()
}

/// `H(X_0 | X_1, X_2)` in bits for a zero-mean trivariate Gaussian binned
/// with the same width on every axis.
pub fn binned_conditional_entropy(cov: &Matrix3, width: f64) -> Result<f64> {
    check_width(width)?;
    for axis in 0..3 {
        let occupied = occupied_bins(cov[axis][axis].sqrt(), width);
        if occupied < 3 {
            return Err(Error::DegenerateHistogram { occupied });
        }
    }
    let (s11, s12, s22) = (cov[1][1], cov[1][2], cov[2][2]);
    let det = s11 * s22 - s12 * s12;
    if det <= 1e-13 * s11 * s22 {
        return Err(Error::Singular(
            "conditioning block on [1, 2] is singular".into(),
        ));
    }
    // regression coefficients of x0 on (x1, x2)
    let beta1 = (cov[0][1] * s22 - cov[0][2] * s12) / det;
    let beta2 = (cov[0][2] * s11 - cov[0][1] * s12) / det;
    let sd_c = conditional_variance(cov, 0, &[1, 2])?.sqrt();
    let density_norm = 1.0 / (2.0 * PI * det.sqrt());
    let half = 0.5 * width;

    // x2 | x1 for bounding the conditioning region
    let slope21 = s12 / s11;
    let sd21 = (det / s11).sqrt();
    let j_reach = (CONDITIONING_CUTOFF * s11.sqrt() / width).ceil() as i64 + 1;
    let k_reach =
        (CONDITIONING_CUTOFF * sd21 / width).ceil() as i64 + 2 + slope21.abs().ceil() as i64;
    let mean_spread = ((beta1.abs() + beta2.abs()) * half / width).ceil() as i64;
    let i_reach = (TARGET_CUTOFF * sd_c / width).ceil() as i64 + 2 + mean_spread;

    let mut total_mass = 0.0;
    let mut h_acc = 0.0;
    let mut tails: Vec<Tail> = Vec::new();
    let mut masses: Vec<f64> = Vec::new();
    let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(9);

    for j in -j_reach..j_reach {
        let x1c = (j as f64 + 0.5) * width;
        let k_mid = (slope21 * x1c / width).floor() as i64;
        for k in (k_mid - k_reach)..(k_mid + k_reach) {
            let x2c = (k as f64 + 0.5) * width;
            let maha = (s22 * x1c * x1c - 2.0 * s12 * x1c * x2c + s11 * x2c * x2c) / det;
            if maha > (CONDITIONING_CUTOFF + 1.0).powi(2) {
                continue;
            }
            nodes.clear();
            for (a, wa) in GL_NODES.iter().zip(GL_WEIGHTS) {
                for (b, wb) in GL_NODES.iter().zip(GL_WEIGHTS) {
                    let x1 = x1c + a * half;
                    let x2 = x2c + b * half;
                    let q = (s22 * x1 * x1 - 2.0 * s12 * x1 * x2 + s11 * x2 * x2) / det;
                    let w = wa * wb * half * half * density_norm * (-0.5 * q).exp();
                    nodes.push((beta1 * x1 + beta2 * x2, w));
                }
            }
            let node_mass: f64 = nodes.iter().map(|n| n.1).sum();
            if node_mass < 1e-300 {
                continue;
            }
            let mu_mean = nodes.iter().map(|n| n.0 * n.1).sum::<f64>() / node_mass;
            let mu_var = nodes
                .iter()
                .map(|n| (n.0 - mu_mean).powi(2) * n.1)
                .sum::<f64>()
                / node_mass;
            masses.clear();
            if mu_var < MOMENT_MATCH_RATIO * MOMENT_MATCH_RATIO * sd_c * sd_c {
                // narrow mixture: one Gaussian with matched mean and variance
                let sd = (sd_c * sd_c + mu_var).sqrt();
                let i_reach = (TARGET_CUTOFF * sd / width).ceil() as i64 + 1;
                let i_mid = (mu_mean / width).floor() as i64;
                tails.clear();
                tails.extend(
                    ((i_mid - i_reach)..=(i_mid + i_reach))
                        .map(|e| tail((e as f64 * width - mu_mean) / sd)),
                );
                masses.extend(
                    tails
                        .windows(2)
                        .map(|pair| node_mass * tail_mass(pair[0], pair[1])),
                );
            } else {
                let i_mid = ((beta1 * x1c + beta2 * x2c) / width).floor() as i64;
                let (i_lo, i_hi) = (i_mid - i_reach, i_mid + i_reach);
                masses.resize((i_hi - i_lo) as usize, 0.0);
                for &(mu, w) in &nodes {
                    tails.clear();
                    tails.extend((i_lo..=i_hi).map(|e| tail((e as f64 * width - mu) / sd_c)));
                    for (slot, pair) in masses.iter_mut().zip(tails.windows(2)) {
                        *slot += w * tail_mass(pair[0], pair[1]);
                    }
                }
            }
            let p_jk: f64 = masses.iter().sum();
            if p_jk <= 0.0 {
                continue;
            }
            total_mass += p_jk;
            h_acc -= masses
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| p * (p / p_jk).log2())
                .sum::<f64>();
        }
    }
    if total_mass <= 0.0 {
        return Err(Error::DegenerateHistogram { occupied: 0 });
    }
    Ok(h_acc / total_mass)
}

/// Binned bound for party A with widths `dx` (direct variable) and `dk`
/// (conjugate variable).
pub fn coarse_grained_bound(m: &GaussianModel, dx: f64, dk: f64) -> Result<CoarseGrainedBound> {
    check_width(dx)?;
    check_width(dk)?;
    let cov = covariances(m);
    let h_direct = binned_conditional_entropy(&cov.direct, dx)?;
    let h_conjugate = binned_conditional_entropy(&cov.conjugate, dk)?;
    Ok(CoarseGrainedBound {
        dx,
        dk,
        h_direct,
        h_conjugate,
        bound: (2.0 * PI / (dx * dk)).log2() - h_direct - h_conjugate,
    })
}

/// Monte-Carlo estimate with a batch-means standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

const MC_BATCHES: usize = 10;

fn cholesky3(cov: &Matrix3) -> Result<Matrix3> {
    let mut l = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                let d = cov[i][i] - s;
                if d <= 0.0 {
                    return Err(Error::Singular(
                        "covariance is not positive definite".into(),
                    ));
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (cov[i][j] - s) / l[j][j];
            }
        }
    }
    Ok(l)
}

fn plug_in_conditional(
    joint: &BTreeMap<[i64; 3], u64>,
    given: &BTreeMap<[i64; 2], u64>,
    n: u64,
) -> f64 {
    let n = n as f64;
    let h = |counts: &mut dyn Iterator<Item = u64>| -> f64 {
        counts
            .map(|c| {
                let p = c as f64 / n;
                -p * p.log2()
            })
            .sum()
    };
    h(&mut joint.values().copied()) - h(&mut given.values().copied())
}

/// Plug-in estimate of `H(X_0|X_1,X_2)` from `samples` draws. Biased low
/// when the number of occupied bins approaches the sample count.
pub fn binned_conditional_entropy_mc(
    cov: &Matrix3,
    width: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_width(width)?;
    if samples < MC_BATCHES * 10 {
        return Err(Error::InvalidParameter(format!(
            "need at least {} samples",
            MC_BATCHES * 10
        )));
    }
    let l = cholesky3(cov)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_batch = samples / MC_BATCHES;
    let mut pooled_joint: BTreeMap<[i64; 3], u64> = BTreeMap::new();
    let mut pooled_given: BTreeMap<[i64; 2], u64> = BTreeMap::new();
    let mut batch_values = Vec::with_capacity(MC_BATCHES);
    for _ in 0..MC_BATCHES {
        let mut joint: BTreeMap<[i64; 3], u64> = BTreeMap::new();
        let mut given: BTreeMap<[i64; 2], u64> = BTreeMap::new();
        for _ in 0..per_batch {
            let z: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            let x: [f64; 3] = std::array::from_fn(|i| (0..=i).map(|k| l[i][k] * z[k]).sum());
            let bin: [i64; 3] = std::array::from_fn(|i| (x[i] / width).floor() as i64);
            *joint.entry(bin).or_default() += 1;
            *given.entry([bin[1], bin[2]]).or_default() += 1;
        }
        batch_values.push(plug_in_conditional(&joint, &given, per_batch as u64));
        for (k, c) in joint {
            *pooled_joint.entry(k).or_default() += c;
        }
        for (k, c) in given {
            *pooled_given.entry(k).or_default() += c;
        }
    }
    let value = plug_in_conditional(
        &pooled_joint,
        &pooled_given,
        (per_batch * MC_BATCHES) as u64,
    );
    let mean = batch_values.iter().sum::<f64>() / MC_BATCHES as f64;
    let var =
        batch_values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (MC_BATCHES - 1) as f64;
    Ok(McEstimate {
        value,
        std_error: (var / MC_BATCHES as f64).sqrt(),
    })
}

/// Monte-Carlo version of [`coarse_grained_bound`]; deterministic for a given seed.
pub fn coarse_grained_bound_mc(
    m: &GaussianModel,
    dx: f64,
    dk: f64,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_width(dk)?;
    let cov = covariances(m);
    let hx = binned_conditional_entropy_mc(&cov.direct, dx, samples, seed)?;
    let hk = binned_conditional_entropy_mc(&cov.conjugate, dk, samples, seed.wrapping_add(1))?;
    Ok(McEstimate {
        value: (2.0 * PI / (dx * dk)).log2() - hx.value - hk.value,
        std_error: hx.std_error.hypot(hk.std_error),
    })
}
