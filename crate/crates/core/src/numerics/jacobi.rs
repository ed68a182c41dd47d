//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)`. For a complex
//! pivot `a_pq = r e^{iα}` the rotation is
//!
//! ```text
//! G = [[ c,          s e^{iα} ],
//!      [ -s e^{-iα}, c        ]]
//! ```
//!
//! which reduces to the classical real rotation when `a_pq` is real. Real
//! symmetric input (the spin-chain Hamiltonians) runs the same code on `f64`
//! and costs a quarter of the complex path.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Sub};

use super::{CMatrix, Complex};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;
const OFF_DIAGONAL_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Relative width (in units of `max(‖H‖_F, 1)`) below which two eigenvalues
/// are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors as
/// the columns of `vectors`.
///
/// Each eigenvector is phase-fixed so that its first component of modulus
/// above `1e-10` is real and positive. Within a degenerate cluster the
/// vectors are ordered by descending lexicographic comparison of their
/// components (real part, then imaginary part).
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> Vec<Complex> {
        self.vectors.column(k)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn mod_sqr(self) -> f64;
    fn real(self) -> f64;
    fn scale(self, f: f64) -> Self;
    fn from_real(x: f64) -> Self;
    fn into_complex(self) -> Complex;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn mod_sqr(self) -> f64 {
        self * self
    }
    fn real(self) -> f64 {
        self
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn into_complex(self) -> Complex {
        Complex::new(self, 0.0)
    }
}

impl Scalar for Complex {
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn mod_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn real(self) -> f64 {
        self.re
    }
    fn scale(self, f: f64) -> Self {
        self * f
    }
    fn from_real(x: f64) -> Self {
        Complex::new(x, 0.0)
    }
    fn into_complex(self) -> Complex {
        self
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with [`Error::NonHermitian`] when `max |H - H†| > 1e-12` and with
/// [`Error::NoConvergence`] if the off-diagonal Frobenius norm has not
/// dropped below `1e-14 ‖H‖_F` after 100 sweeps.
pub fn herm_eig(h: &CMatrix) -> Result<EigenDecomposition> {
    let defect = h.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NonHermitian(defect));
    }
    let n = h.rows();
    let scale = h.frobenius_norm();

    let (values, rows) = if h.is_real() {
        let mut a: Vec<f64> = h.data().iter().map(|z| z.re).collect();
        symmetrize(&mut a, n);
        let (vals, w) = jacobi(&mut a, n, scale)?;
        (vals, w.into_iter().map(Scalar::into_complex).collect())
    } else {
        let mut a: Vec<Complex> = h.data().to_vec();
        symmetrize(&mut a, n);
        jacobi(&mut a, n, scale)?
    };

    Ok(sort_and_fix(values, rows, n, scale))
}

fn symmetrize<T: Scalar>(a: &mut [T], n: usize) {
    for i in 0..n {
        a[i * n + i] = T::from_real(a[i * n + i].real());
        for j in i + 1..n {
            let avg = (a[i * n + j] + a[j * n + i].conj()).scale(0.5);
            a[i * n + j] = avg;
            a[j * n + i] = avg.conj();
        }
    }
}

fn off_norm<T: Scalar>(a: &[T], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j].mod_sqr();
        }
    }
    s.sqrt()
}

/// Runs cyclic sweeps on `a` (row-major, full storage). Returns the diagonal
/// and the eigenvectors stored as rows (`w[k * n + i]` is component `i` of
/// eigenvector `k`).
fn jacobi<T: Scalar>(a: &mut [T], n: usize, scale: f64) -> Result<(Vec<f64>, Vec<T>)> {
    let mut w = vec![T::from_real(0.0); n * n];
    for k in 0..n {
        w[k * n + k] = T::from_real(1.0);
    }

    let target = OFF_DIAGONAL_TOL * scale;
    let mut converged = off_norm(a, n) <= target;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweep += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(a, &mut w, n, p, q, sweep);
            }
        }
        converged = off_norm(a, n) <= target;
    }

    let values = (0..n).map(|i| a[i * n + i].real()).collect();
    Ok((values, w))
}

fn rotate<T: Scalar>(a: &mut [T], w: &mut [T], n: usize, p: usize, q: usize, sweep: usize) {
    let apq = a[p * n + q];
    let r = apq.modulus();
    if r == 0.0 {
        return;
    }
    let app = a[p * n + p].real();
    let aqq = a[q * n + q].real();
    // Once the sweep count is past the initial phase, pivots too small to
    // perturb either diagonal entry are simply dropped.
    if sweep > 4 && 100.0 * r + app.abs() == app.abs() && 100.0 * r + aqq.abs() == aqq.abs() {
        a[p * n + q] = T::from_real(0.0);
        a[q * n + p] = T::from_real(0.0);
        return;
    }

    let phase = apq.scale(1.0 / r);
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        1.0 / (2.0 * theta)
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let s_phase = phase.scale(s);
    let s_phase_conj = s_phase.conj();

    // Rows p and q: a_pk <- c a_pk - s e a_qk, a_qk <- s ē a_pk + c a_qk.
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let x = a[p * n + k];
        let y = a[q * n + k];
        let new_p = x.scale(c) - s_phase * y;
        let new_q = s_phase_conj * x + y.scale(c);
        a[p * n + k] = new_p;
        a[q * n + k] = new_q;
        a[k * n + p] = new_p.conj();
        a[k * n + q] = new_q.conj();
    }
    a[p * n + p] = T::from_real(app - t * r);
    a[q * n + q] = T::from_real(aqq + t * r);
    a[p * n + q] = T::from_real(0.0);
    a[q * n + p] = T::from_real(0.0);

    // Eigenvectors as rows: v_kp <- c v_kp - s ē v_kq, v_kq <- s e v_kp + c v_kq.
    let (head, tail) = w.split_at_mut(q * n);
    let wp = &mut head[p * n..(p + 1) * n];
    let wq = &mut tail[..n];
    for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
        let vp = *x;
        let vq = *y;
        *x = vp.scale(c) - s_phase_conj * vq;
        *y = s_phase * vp + vq.scale(c);
    }
}

fn sort_and_fix(values: Vec<f64>, rows: Vec<Complex>, n: usize, scale: f64) -> EigenDecomposition {
    let mut pairs: Vec<(f64, Vec<Complex>)> = values
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let mut vec = rows[k * n..(k + 1) * n].to_vec();
            fix_phase(&mut vec);
            (v, vec)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let sorted_values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let tol = DEGENERACY_TOL * scale.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && sorted_values[end] - sorted_values[end - 1] <= tol {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lex_desc(&a.1, &b.1));
        start = end;
    }

    let columns: Vec<Vec<Complex>> = pairs.into_iter().map(|p| p.1).collect();
    EigenDecomposition {
        values: sorted_values,
        vectors: CMatrix::from_columns(&columns).expect("n >= 1 equal-length columns"),
    }
}

fn fix_phase(v: &mut [Complex]) {
    if let Some(k) = v.iter().position(|z| z.norm() > 1e-10) {
        let r = v[k].norm();
        let rot = v[k].conj() / r;
        for z in v.iter_mut() {
            *z *= rot;
        }
        v[k] = Complex::new(r, 0.0);
    }
}

fn lex_desc(a: &[Complex], b: &[Complex]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{det, I, ONE, ZERO};
    use rand::Rng;

    fn residual(h: &CMatrix, eig: &EigenDecomposition) -> f64 {
        (0..eig.len())
            .map(|k| {
                let v = eig.vector(k);
                let hv = h.mul_vec(&v).unwrap();
                hv.iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * eig.values[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut rng = crate::rng::seeded(seed);
        let g = CMatrix::from_fn(n, n, |_, _| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        g.add(&g.adjoint()).unwrap().scale(Complex::new(0.5, 0.0))
    }

    /// Roots of det(H - λ) for a 3x3 Hermitian matrix, located by bisection
    /// on sign changes of the real characteristic polynomial.
    fn char_poly_roots(h: &CMatrix) -> Vec<f64> {
        let p = |lambda: f64| {
            let shifted = h.sub(&CMatrix::identity(3).scale(Complex::new(lambda, 0.0))).unwrap();
            det(&shifted).unwrap().re
        };
        let bound = h.frobenius_norm() + 1.0;
        let steps = 20000;
        let mut roots = Vec::new();
        let mut x0 = -bound;
        let mut f0 = p(x0);
        for i in 1..=steps {
            let x1 = -bound + 2.0 * bound * i as f64 / steps as f64;
            let f1 = p(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0 * f1 < 0.0 {
                let (mut lo, mut hi, mut flo) = (x0, x1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = p(mid);
                    if fm * flo <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            x0 = x1;
            f0 = f1;
        }
        roots
    }

    #[test]
    fn diagonal_input_sorted_with_permuted_identity() {
        let eig = herm_eig(&CMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(eig.vector(0), vec![ZERO, ONE, ZERO]);
        assert_eq!(eig.vector(1), vec![ZERO, ZERO, ONE]);
        assert_eq!(eig.vector(2), vec![ONE, ZERO, ZERO]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let h = CMatrix::new(2, 2, vec![ONE, I, -I, ONE]).unwrap();
        let eig = herm_eig(&h).unwrap();
        assert!((eig.values[0] - 0.0).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        assert!(residual(&h, &eig) < 1e-13);
    }

    #[test]
    fn random_3x3_matches_characteristic_roots() {
        for seed in 0..5 {
            let h = random_hermitian(3, seed);
            let eig = herm_eig(&h).unwrap();
            let roots = char_poly_roots(&h);
            assert_eq!(roots.len(), 3, "seed {seed}");
            for (a, b) in eig.values.iter().zip(&roots) {
                assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn reconstruction_orthonormality_and_phase() {
        for (n, seed) in [(2, 1), (3, 2), (5, 3), (12, 4), (40, 5)] {
            let h = random_hermitian(n, seed);
            let eig = herm_eig(&h).unwrap();
            let norm = h.frobenius_norm();
            let v = &eig.vectors;
            let d = CMatrix::from_diag(&eig.values);
            let recon = v.matmul(&d).unwrap().matmul(&v.adjoint()).unwrap();
            assert!(recon.max_abs_diff(&h) <= 1e-10 * norm);
            assert!(v.unitarity_defect() <= 1e-10);
            assert!(residual(&h, &eig) <= 1e-10 * norm);
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            for k in 0..n {
                let lead = eig.vector(k).into_iter().find(|z| z.norm() > 1e-10).unwrap();
                assert!(lead.im == 0.0 && lead.re > 0.0);
            }
            let trace = h.trace().unwrap().re;
            assert!((eig.values.iter().sum::<f64>() - trace).abs() <= 1e-10);
            if n <= 3 {
                let prod: f64 = eig.values.iter().product();
                assert!((prod - det(&h).unwrap().re).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn real_symmetric_path() {
        let h = CMatrix::from_fn(30, 30, |i, j| Complex::new(1.0 / (1.0 + i as f64 + j as f64), 0.0));
        let eig = herm_eig(&h).unwrap();
        assert!(residual(&h, &eig) <= 1e-10 * h.frobenius_norm());
        assert!(eig.vectors.unitarity_defect() <= 1e-10);
    }

    #[test]
    fn degenerate_cluster_is_deterministic() {
        // -σx⊗σx: eigenvalues {-1, -1, 1, 1}.
        let h = CMatrix::from_fn(4, 4, |i, j| if i + j == 3 { -ONE } else { ZERO });
        let a = herm_eig(&h).unwrap();
        let b = herm_eig(&h).unwrap();
        assert_eq!(a.vectors, b.vectors);
        assert!((a.values[0] + 1.0).abs() < 1e-14 && (a.values[1] + 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let g = a.vector(0);
        assert!((g[0].re - s).abs() < 1e-14 && (g[3].re - s).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = CMatrix::new(2, 2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(herm_eig(&h), Err(Error::NonHermitian(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(herm_eig(&rect), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn zero_and_one_by_one() {
        let eig = herm_eig(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(eig.values, vec![0.0; 3]);
        let eig = herm_eig(&CMatrix::from_diag(&[-2.5])).unwrap();
        assert_eq!(eig.values, vec![-2.5]);
    }
}
