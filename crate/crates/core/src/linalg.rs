//! Small dense complex matrices and a cyclic Jacobi Hermitian eigensolver.
//!
//! Everything in this crate stays below 256×256, so a plain row-major
//! `Vec<Complex64>` and O(n³) kernels are all that is needed.

use std::ops::{Add, Index, IndexMut, Mul};

use num_complex::Complex64;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let n = cols.len();
        Self::from_fn(n, |i, j| cols[j][i])
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> Self {
        let (n, m) = (self.n, other.n);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest elementwise `|M_ij − conj(M_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Real eigenvalues of the Hermitian part, sorted descending.
    pub fn eigvals_hermitian(&self) -> Vec<f64> {
        self.eigh().0
    }

    /// Eigen-decomposition of the Hermitian part by cyclic complex Jacobi
    /// rotations. Returns eigenvalues in descending order and the unitary
    /// whose columns are the matching eigenvectors.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        let n = self.n;
        let mut a = self.hermitian_part();
        let mut v = CMatrix::identity(n);
        let scale = a.frobenius_norm();
        if n < 2 || scale == 0.0 {
            let vals = (0..n).map(|i| a[(i, i)].re).collect();
            return (vals, v);
        }
        let threshold = 1e-15 * scale;

        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let h = a[(p, q)];
                    let habs = h.norm();
                    if habs <= f64::MIN_POSITIVE {
                        continue;
                    }
                    // D = diag(1, conj(phase)) makes the (p,q) entry real, then a
                    // real Jacobi rotation J annihilates it; G = D·J.
                    let phase_c = (h / habs).conj();
                    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * habs);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    let g_pp = Complex64::new(c, 0.0);
                    let g_pq = Complex64::new(s, 0.0);
                    let g_qp = phase_c * (-s);
                    let g_qq = phase_c * c;

                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * g_pp + akq * g_qp;
                        a[(k, q)] = akp * g_pq + akq * g_qq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * g_pp + vkq * g_qp;
                        v[(k, q)] = vkp * g_pq + vkq * g_qq;
                    }
                    a[(p, q)] = Complex64::new(0.0, 0.0);
                    a[(q, p)] = Complex64::new(0.0, 0.0);
                    a[(p, p)].im = 0.0;
                    a[(q, q)].im = 0.0;
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
        let vals = order.iter().map(|&i| a[(i, i)].re).collect();
        let vecs = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
        (vals, vecs)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        CMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
        let m = CMatrix::from_fn(n, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        m.hermitian_part()
    }

    #[test]
    fn qubit_half_identity() {
        let vals = CMatrix::identity(2).scale(0.5).eigvals_hermitian();
        assert_eq!(vals, vec![0.5, 0.5]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => c(0.0, 0.0),
        });
        let vals = y.eigvals_hermitian();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn residual_and_orthogonality_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[2, 3, 5, 8, 16, 64] {
            let m = random_hermitian(n, &mut rng);
            let (vals, vecs) = m.eigh();
            let trace: f64 = m.trace().re;
            assert!((vals.iter().sum::<f64>() - trace).abs() < 1e-10);
            for w in vals.windows(2) {
                assert!(w[0] >= w[1]);
            }
            for (k, &lam) in vals.iter().enumerate() {
                let v = vecs.column(k);
                let mv = m.mul_vec(&v);
                let res: f64 = mv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * lam).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-10, "n={n} residual {res}");
            }
            let vtv = &vecs.adjoint() * &vecs;
            assert!(vtv.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn similarity_reconstructs_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_hermitian(6, &mut rng);
        let (vals, vecs) = m.eigh();
        let back = &(&vecs * &CMatrix::from_diagonal(&vals)) * &vecs.adjoint();
        assert!(back.max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn kron_of_identities() {
        let k = CMatrix::identity(2).kron(&CMatrix::identity(3));
        assert_eq!(k, CMatrix::identity(6));
    }
}
