//! Random states and bases for property checks.
//!
//! Densities come from the Ginibre ensemble, unitaries from Gram–Schmidt on
//! complex Gaussian columns. All samplers take the RNG by reference so a
//! seeded `ChaCha8Rng` gives reproducible suites.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg::{inner, CMatrix};
use crate::state::{DensityMatrix, PureState, SubsystemSignature};
use crate::witness::{MeasurementPair, ObservableBasis};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

pub fn random_pure<R: Rng + ?Sized>(sig: &SubsystemSignature, rng: &mut R) -> PureState {
    let amps = (0..sig.total_dim()).map(|_| complex_normal(rng)).collect();
    PureState::normalized(sig.clone(), amps).expect("Gaussian vector is nonzero")
}

/// Ginibre density `G G† / tr` with `G` of shape `dim × rank`.
pub fn random_density_with_rank<R: Rng + ?Sized>(
    sig: &SubsystemSignature,
    rank: usize,
    rng: &mut R,
) -> DensityMatrix {
    let n = sig.total_dim();
    let rank = rank.clamp(1, n);
    let g: Vec<Complex64> = (0..n * rank).map(|_| complex_normal(rng)).collect();
    let mut m = CMatrix::from_fn(n, |i, j| {
        (0..rank)
            .map(|k| g[i * rank + k] * g[j * rank + k].conj())
            .sum()
    });
    let tr = m.trace().re;
    m = m.scale(1.0 / tr).hermitian_part();
    DensityMatrix::from_parts_unchecked(sig.clone(), m)
}

/// Ginibre density with rank drawn uniformly from `1..=dim`.
pub fn random_density<R: Rng + ?Sized>(sig: &SubsystemSignature, rng: &mut R) -> DensityMatrix {
    let rank = rng.random_range(1..=sig.total_dim());
    random_density_with_rank(sig, rank, rng)
}

pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_normal(rng)).collect();
        // two passes keep the columns orthonormal to machine precision
        for _ in 0..2 {
            for c in &cols {
                let proj = inner(c, &v);
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    CMatrix::from_columns(&cols)
}

pub fn random_basis<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ObservableBasis {
    ObservableBasis::from_unitary(&random_unitary(d, rng)).expect("Gram-Schmidt output is unitary")
}

/// Random pair `(U, U F)` with `F` the DFT, so Ω = d.
pub fn random_mub_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> MeasurementPair {
    let u = random_unitary(d, rng);
    let f = ObservableBasis::fourier(d);
    let uf = &u * &CMatrix::from_columns(f.vectors());
    MeasurementPair::new(
        ObservableBasis::from_unitary(&u).expect("unitary"),
        ObservableBasis::from_unitary(&uf).expect("unitary"),
    )
    .expect("same dimension")
}

/// Two independent random bases.
pub fn random_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> MeasurementPair {
    MeasurementPair::new(random_basis(d, rng), random_basis(d, rng)).expect("same dimension")
}

/// `ρ_S ⊗ ρ_{S̄}` for the cut `S | S̄`, returned in the original party order.
/// `side` holds the parties of `S`; it must be a nonempty proper subset.
pub fn random_product_across<R: Rng + ?Sized>(
    sig: &SubsystemSignature,
    side: &[usize],
    rng: &mut R,
) -> Result<DensityMatrix> {
    let n = sig.parties();
    let rest: Vec<usize> = (0..n).filter(|p| !side.contains(p)).collect();
    let dims_of =
        |ps: &[usize]| SubsystemSignature::new(ps.iter().map(|&p| sig.dims()[p]).collect());
    let left = random_density(&dims_of(side)?, rng);
    let right = random_density(&dims_of(&rest)?, rng);
    let order: Vec<usize> = side.iter().chain(&rest).copied().collect();
    let perm: Vec<usize> = (0..n)
        .map(|p| {
            order
                .iter()
                .position(|&q| q == p)
                .expect("every party placed")
        })
        .collect();
    left.tensor(&right).permute_parties(&perm)
}

/// Product state across a uniformly random bipartition.
pub fn random_biseparable<R: Rng + ?Sized>(sig: &SubsystemSignature, rng: &mut R) -> DensityMatrix {
    let n = sig.parties();
    assert!(n >= 2, "a bipartition needs at least two parties");
    // nonempty proper subsets containing party 0 enumerate each cut once
    let mask = rng.random_range(0..(1usize << (n - 1)) - 1) << 1 | 1;
    let side: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
    random_product_across(sig, &side, rng).expect("valid cut")
}

/// Convex mixture of `components` biseparable states, each across its own
/// random cut, with Dirichlet(1) weights.
pub fn random_biseparably_derived<R: Rng + ?Sized>(
    sig: &SubsystemSignature,
    components: usize,
    rng: &mut R,
) -> DensityMatrix {
    let raw: Vec<f64> = (0..components.max(1))
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, DensityMatrix)> = raw
        .into_iter()
        .map(|w| (w / total, random_biseparable(sig, rng)))
        .collect();
    DensityMatrix::mixture(&parts).expect("weights sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ginibre_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let sig = SubsystemSignature::new(vec![2, 3]).unwrap();
        for _ in 0..20 {
            let rho = random_density(&sig, &mut rng);
            DensityMatrix::new(sig.clone(), rho.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in 2..6 {
            let u = random_unitary(d, &mut rng);
            assert!((&u.adjoint() * &u).max_abs_diff(&CMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn mub_pair_has_full_omega() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = random_mub_pair(3, &mut rng);
        assert!((pair.omega() - 3.0).abs() < 1e-9);
    }

    #[test]
    fn product_factorizes_across_cut() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let sig = SubsystemSignature::qubits(3);
        let rho = random_product_across(&sig, &[1], &mut rng).unwrap();
        let b = rho.partial_trace(&[1]).unwrap();
        let ac = rho.partial_trace(&[0, 2]).unwrap();
        let rebuilt = b.tensor(&ac).permute_parties(&[1, 0, 2]).unwrap();
        assert!(rebuilt.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }
}
