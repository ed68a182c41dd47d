//! Single-qubit unitary operations (SQUOs) on `(2 x D)` states.
//!
//! A SQUO acts as `O_A ⊗ 1_B` with `O_A` Hermitian, unitary and traceless:
//!
//! ```text
//! O(θ, φ) = cos θ σz + sin θ cos φ σx + sin θ sin φ σy
//!         = [[cos θ,          sin θ e^{-iφ}],
//!            [sin θ e^{iφ},  -cos θ       ]]
//! ```
//!
//! Its expectation in `|Ψ⟩` is `n(θ, φ) · M`, where `M` is the Bloch vector
//! of `ρ_A`, so the squared distance `1 - |⟨Ψ|O|Ψ⟩|²` is minimized by
//! aligning `n` with `±M`. The minimum, `1 - |M|²`, is the linear entropy
//! (and the tangle) of the reduction.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{inner, CMatrix, Complex};
use crate::state::{reduced_density, BipartiteState};

/// Below this Bloch-vector length every SQUO is a minimizer.
pub const DEGENERATE_BLOCH: f64 = 1e-12;

/// Default tolerance on `min_d2` for the separability verdict.
pub const DEFAULT_SEPARABILITY_TOL: f64 = 1e-10;

/// Angles of a SQUO: `theta ∈ [0, π]`, `phi ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QubitUnitaryParams {
    theta: f64,
    phi: f64,
}

impl QubitUnitaryParams {
    /// Clamps `theta` to `[0, π]` and wraps `phi` into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let theta = theta.clamp(0.0, PI);
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit vector `n` with `O = n · σ`.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Angles whose operator is `n · σ` for a (not necessarily unit) vector `n`.
    pub fn from_direction(n: [f64; 3]) -> Self {
        let r = n[0].hypot(n[1]);
        let phi = if r == 0.0 { 0.0 } else { n[1].atan2(n[0]) };
        Self::new(r.atan2(n[2]), phi)
    }

    /// `+1` eigenvector `cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩`.
    pub fn plus_eigenvector(&self) -> [Complex; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        [Complex::new(c, 0.0), Complex::from_polar(s, self.phi)]
    }

    /// The SQUO whose `+1` eigenvector is `v` (up to phase).
    pub fn from_plus_eigenvector(v: [Complex; 2]) -> Self {
        // Bloch vector of |v⟩⟨v|.
        let z = v[0].conj() * v[1];
        Self::from_direction([2.0 * z.re, 2.0 * z.im, v[0].norm_sqr() - v[1].norm_sqr()])
    }
}

/// `⟨σx⟩, ⟨σy⟩, ⟨σz⟩` of qubit `A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochVector {
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
}

impl BlochVector {
    pub fn norm_sqr(&self) -> f64 {
        self.mx * self.mx + self.my * self.my + self.mz * self.mz
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(&self, n: [f64; 3]) -> f64 {
        self.mx * n[0] + self.my * n[1] + self.mz * n[2]
    }
}

/// The two extremal SQUOs (`O` and `-O`) and the minimum squared distance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SquoMinimum {
    pub params1: QubitUnitaryParams,
    pub params2: QubitUnitaryParams,
    pub min_d2: f64,
    /// Set when `|M| ≤ DEGENERATE_BLOCH`: every SQUO is then minimal and the
    /// reported pair is the conventional `(0, 0)`, `(π, π)`.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    pub preserving: Option<QubitUnitaryParams>,
}

fn require_qubit(psi: &BipartiteState) -> Result<()> {
    if psi.dim_a() != 2 {
        return Err(Error::DimMismatch {
            expected: 2,
            got: psi.dim_a(),
        });
    }
    Ok(())
}

pub fn build_squo(p: QubitUnitaryParams) -> CMatrix {
    let (st, ct) = p.theta.sin_cos();
    CMatrix::new(
        2,
        2,
        vec![
            Complex::new(ct, 0.0),
            Complex::from_polar(st, -p.phi),
            Complex::from_polar(st, p.phi),
            Complex::new(-ct, 0.0),
        ],
    )
    .expect("2x2 finite entries")
}

pub fn apply_squo(psi: &BipartiteState, p: QubitUnitaryParams) -> Result<BipartiteState> {
    require_qubit(psi)?;
    psi.apply_a(&build_squo(p))
}

/// `⟨Ψ|O ⊗ 1|Ψ⟩` by explicit action on the amplitudes.
pub fn overlap(psi: &BipartiteState, p: QubitUnitaryParams) -> Result<Complex> {
    let image = apply_squo(psi, p)?;
    Ok(inner(psi.amplitudes(), image.amplitudes()))
}

pub fn bloch_expectations(psi: &BipartiteState) -> Result<BlochVector> {
    require_qubit(psi)?;
    let c = psi.coeffs();
    let (up, down) = (c.row(0), c.row(1));
    let mz: f64 = up.iter().zip(down).map(|(u, d)| u.norm_sqr() - d.norm_sqr()).sum();
    let cross: Complex = up.iter().zip(down).map(|(u, d)| u.conj() * d).sum();
    Ok(BlochVector {
        mx: 2.0 * cross.re,
        my: 2.0 * cross.im,
        mz,
    })
}

/// `d² = 1 - (M · n(θ, φ))²`.
pub fn squared_distance(psi: &BipartiteState, p: QubitUnitaryParams) -> Result<f64> {
    let m = bloch_expectations(psi)?;
    let e = m.dot(p.direction());
    Ok((1.0 - e * e).clamp(0.0, 1.0))
}

/// Closed-form minimizer: `φ̃₁ = atan2(My, Mx)`, `θ̃₁ = atan2(√(Mx²+My²), Mz)`,
/// and the orthogonal partner `(π - θ̃₁, φ̃₁ + π)`.
pub fn optimal_squo(psi: &BipartiteState) -> Result<SquoMinimum> {
    let m = bloch_expectations(psi)?;
    let min_d2 = (1.0 - m.norm_sqr()).clamp(0.0, 1.0);
    if m.norm() <= DEGENERATE_BLOCH {
        return Ok(SquoMinimum {
            params1: QubitUnitaryParams::new(0.0, 0.0),
            params2: QubitUnitaryParams::new(PI, PI),
            min_d2,
            degenerate: true,
        });
    }
    let params1 = QubitUnitaryParams::from_direction([m.mx, m.my, m.mz]);
    Ok(SquoMinimum {
        params1,
        params2: orthogonal_squo(params1),
        min_d2,
        degenerate: false,
    })
}

/// `(π - θ, φ + π)`, whose operator is `-O(θ, φ)`.
pub fn orthogonal_squo(p: QubitUnitaryParams) -> QubitUnitaryParams {
    QubitUnitaryParams::new(PI - p.theta, p.phi + PI)
}

/// `F_A = (2 Tr(ρ_A |φ⟩⟨φ|) - 1)²` for a pure qubit state `|φ⟩`.
pub fn local_factorizability(psi: &BipartiteState, pure_qubit: [Complex; 2]) -> Result<f64> {
    require_qubit(psi)?;
    let norm = (pure_qubit[0].norm_sqr() + pure_qubit[1].norm_sqr()).sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized(norm));
    }
    let rho = reduced_density(psi)?;
    let rv = rho.matrix().mul_vec(&pure_qubit)?;
    let overlap = inner(&pure_qubit, &rv).re;
    let signed = 2.0 * overlap - 1.0;
    Ok((signed * signed).clamp(0.0, 1.0))
}

/// Maximum of [`local_factorizability`] over pure qubit states, `|M|²`.
pub fn max_local_factorizability(psi: &BipartiteState) -> Result<f64> {
    Ok(bloch_expectations(psi)?.norm_sqr().clamp(0.0, 1.0))
}

/// Separable iff `min_d2 ≤ tol`; the preserving SQUO is then the direct
/// extremal one, which fixes the state.
pub fn is_separable(psi: &BipartiteState, tol: f64) -> Result<SeparabilityVerdict> {
    let min = optimal_squo(psi)?;
    let separable = min.min_d2 <= tol;
    Ok(SeparabilityVerdict {
        separable,
        preserving: separable.then_some(min.params1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{herm_eig, ZERO};
    use crate::state::{basis_vector, bell_state, haar_random_state};
    use std::f64::consts::FRAC_PI_2;

    fn up_zero() -> BipartiteState {
        BipartiteState::product(&basis_vector(2, 0), &basis_vector(2, 0)).unwrap()
    }

    fn down_zero() -> BipartiteState {
        BipartiteState::product(&basis_vector(2, 1), &basis_vector(2, 0)).unwrap()
    }

    fn close(a: &BipartiteState, b: &BipartiteState, tol: f64) -> bool {
        a.coeffs().max_abs_diff(b.coeffs()) <= tol
    }

    #[test]
    fn axis_operators() {
        let z = build_squo(QubitUnitaryParams::new(0.0, 0.0));
        assert!(z.max_abs_diff(&CMatrix::from_diag(&[1.0, -1.0])) < 1e-15);
        let x = build_squo(QubitUnitaryParams::new(FRAC_PI_2, 0.0));
        let one = Complex::new(1.0, 0.0);
        assert!(x.max_abs_diff(&CMatrix::new(2, 2, vec![ZERO, one, one, ZERO]).unwrap()) < 1e-15);
    }

    #[test]
    fn spectrum_is_plus_minus_one() {
        for &(t, p) in &[(0.3, 1.1), (2.9, 5.0), (FRAC_PI_2, 3.0), (PI, 0.0)] {
            let o = build_squo(QubitUnitaryParams::new(t, p));
            let eig = herm_eig(&o).unwrap();
            assert!((eig.values[0] + 1.0).abs() < 1e-12 && (eig.values[1] - 1.0).abs() < 1e-12);
            assert!(o.trace().unwrap().norm() < 1e-15);
            assert!(o.matmul(&o).unwrap().max_abs_diff(&CMatrix::identity(2)) < 1e-12);
        }
    }

    #[test]
    fn angle_canonicalization() {
        let p = QubitUnitaryParams::new(4.0, -0.5);
        assert_eq!(p.theta(), PI);
        assert!((p.phi() - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(QubitUnitaryParams::new(1.0, TAU).phi(), 0.0);
    }

    #[test]
    fn sigma_z_keeps_up_and_flips_down() {
        let z = QubitUnitaryParams::new(0.0, 0.0);
        assert!(close(&apply_squo(&up_zero(), z).unwrap(), &up_zero(), 1e-15));
        let flipped = BipartiteState::new(down_zero().coeffs().scale(Complex::new(-1.0, 0.0))).unwrap();
        assert!(close(&apply_squo(&down_zero(), z).unwrap(), &flipped, 1e-15));
    }

    #[test]
    fn sigma_x_on_bell() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = BipartiteState::from_amplitudes(
            2,
            2,
            vec![ZERO, Complex::new(s, 0.0), Complex::new(s, 0.0), ZERO],
        )
        .unwrap();
        let image = apply_squo(&bell_state(), QubitUnitaryParams::new(FRAC_PI_2, 0.0)).unwrap();
        assert!(close(&image, &expected, 1e-15));
    }

    #[test]
    fn bloch_vectors_of_known_states() {
        let m = bloch_expectations(&up_zero()).unwrap();
        assert_eq!((m.mx, m.my, m.mz), (0.0, 0.0, 1.0));
        let m = bloch_expectations(&bell_state()).unwrap();
        assert!(m.norm() < 1e-15);
        let a = PI / 6.0;
        let psi = BipartiteState::from_amplitudes(
            2,
            2,
            vec![Complex::new(a.cos(), 0.0), ZERO, ZERO, Complex::new(a.sin(), 0.0)],
        )
        .unwrap();
        let m = bloch_expectations(&psi).unwrap();
        assert!(m.mx.abs() < 1e-15 && m.my.abs() < 1e-15 && (m.mz - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bloch_y_component_sign() {
        // (|↑⟩ + i|↓⟩)/√2 has ⟨σy⟩ = +1.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = BipartiteState::product(&[Complex::new(s, 0.0), Complex::new(0.0, s)], &basis_vector(2, 0)).unwrap();
        let m = bloch_expectations(&psi).unwrap();
        assert!((m.my - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        assert!(squared_distance(&up_zero(), QubitUnitaryParams::new(0.0, 0.0)).unwrap() < 1e-15);
        for &(t, p) in &[(0.0, 0.0), (1.0, 2.0), (FRAC_PI_2, 4.0)] {
            let d = squared_distance(&bell_state(), QubitUnitaryParams::new(t, p)).unwrap();
            assert!((d - 1.0).abs() < 1e-15);
        }
        let d = squared_distance(&up_zero(), QubitUnitaryParams::new(FRAC_PI_2, 0.0)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_matches_direct_overlap() {
        let psi = haar_random_state(2, 5, 17).unwrap();
        for i in 0..20 {
            let p = QubitUnitaryParams::new(0.157 * i as f64, 0.377 * i as f64);
            let ov = overlap(&psi, p).unwrap();
            assert!(ov.im.abs() < 1e-12);
            let direct = 1.0 - ov.norm_sqr();
            assert!((squared_distance(&psi, p).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn optimal_for_product_and_bell() {
        let m = optimal_squo(&up_zero()).unwrap();
        assert_eq!(m.min_d2, 0.0);
        assert_eq!(m.params1, QubitUnitaryParams::new(0.0, 0.0));
        assert!(!m.degenerate);
        let m = optimal_squo(&bell_state()).unwrap();
        assert!((m.min_d2 - 1.0).abs() < 1e-15);
        assert!(m.degenerate);
        assert_eq!(m.params1, QubitUnitaryParams::new(0.0, 0.0));
        assert_eq!(m.params2, QubitUnitaryParams::new(PI, PI));
    }

    #[test]
    fn optimal_pair_and_minimizer_values() {
        for seed in 0..50 {
            let psi = haar_random_state(2, 3, seed).unwrap();
            let m = optimal_squo(&psi).unwrap();
            let d1 = squared_distance(&psi, m.params1).unwrap();
            let d2 = squared_distance(&psi, m.params2).unwrap();
            assert!((d1 - m.min_d2).abs() < 1e-12);
            assert!((d1 - d2).abs() < 1e-15);
            let o1 = build_squo(m.params1);
            let o2 = build_squo(m.params2);
            assert!(o1.add(&o2).unwrap().frobenius_norm() < 1e-12);
            let b = bloch_expectations(&psi).unwrap();
            assert!((m.params1.phi() - b.my.atan2(b.mx).rem_euclid(TAU)).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_mz_gives_equatorial_theta() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = BipartiteState::product(&[Complex::new(s, 0.0), Complex::new(s, 0.0)], &basis_vector(3, 1)).unwrap();
        let m = optimal_squo(&psi).unwrap();
        assert!((m.params1.theta() - FRAC_PI_2).abs() < 1e-12);
        assert!(m.min_d2 < 1e-15);
    }

    #[test]
    fn orthogonal_examples() {
        let p = orthogonal_squo(QubitUnitaryParams::new(0.0, 0.0));
        assert_eq!(p, QubitUnitaryParams::new(PI, PI));
        let q = QubitUnitaryParams::new(1.2, 5.9);
        let back = orthogonal_squo(orthogonal_squo(q));
        assert!((back.theta() - q.theta()).abs() < 1e-15 && (back.phi() - q.phi()).abs() < 1e-12);
        let sum = build_squo(q).add(&build_squo(orthogonal_squo(q))).unwrap();
        assert!(sum.frobenius_norm() < 1e-12);
        // The orthogonal of the preserving SQUO flips the sign of a factorized state.
        let flipped = apply_squo(&up_zero(), orthogonal_squo(QubitUnitaryParams::new(0.0, 0.0))).unwrap();
        assert!(close(&flipped, &BipartiteState::new(up_zero().coeffs().scale(Complex::new(-1.0, 0.0))).unwrap(), 1e-15));
    }

    #[test]
    fn factorizability_examples() {
        let f = local_factorizability(&up_zero(), [Complex::new(1.0, 0.0), ZERO]).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        let f = local_factorizability(&bell_state(), [Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)]).unwrap();
        assert!(f.abs() < 1e-15);
        assert!(matches!(
            local_factorizability(&bell_state(), [Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn factorizability_complements_distance() {
        let psi = haar_random_state(2, 4, 8).unwrap();
        for i in 0..15 {
            let p = QubitUnitaryParams::new(0.2 * i as f64, 0.41 * i as f64);
            let f = local_factorizability(&psi, p.plus_eigenvector()).unwrap();
            assert!((1.0 - f - squared_distance(&psi, p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn max_factorizability_matches_sphere_scan() {
        let psi = haar_random_state(2, 3, 21).unwrap();
        let analytic = max_local_factorizability(&psi).unwrap();
        // Fibonacci lattice on the Bloch sphere, 10⁴ directions.
        let n = 10_000;
        let golden = PI * (3.0 - 5f64.sqrt());
        let mut best = 0.0f64;
        for k in 0..n {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * k as f64;
            let p = QubitUnitaryParams::from_direction([r * a.cos(), r * a.sin(), z]);
            best = best.max(local_factorizability(&psi, p.plus_eigenvector()).unwrap());
        }
        assert!(best <= analytic + 1e-12);
        assert!((analytic - best).abs() < 1e-3, "{analytic} vs {best}");
    }

    #[test]
    fn separability_examples() {
        let xi = haar_random_state(2, 5, 3).unwrap().coeffs().row(0).to_vec();
        let psi = BipartiteState::product(&basis_vector(2, 0), &xi).unwrap();
        let v = is_separable(&psi, DEFAULT_SEPARABILITY_TOL).unwrap();
        assert!(v.separable);
        assert_eq!(v.preserving, Some(QubitUnitaryParams::new(0.0, 0.0)));

        assert!(!is_separable(&bell_state(), DEFAULT_SEPARABILITY_TOL).unwrap().separable);

        let alpha: f64 = 0.3;
        let factor = [Complex::new(alpha.cos(), 0.0), Complex::new(alpha.sin(), 0.0)];
        let psi = BipartiteState::product(&factor, &xi).unwrap();
        let v = is_separable(&psi, DEFAULT_SEPARABILITY_TOL).unwrap();
        let p = v.preserving.unwrap();
        assert!((p.theta() - 2.0 * alpha).abs() < 1e-9);
        // Direct check: σ̄ = 2|φ⟩⟨φ| - 1 built from the known factor fixes the state.
        let proj = CMatrix::from_fn(2, 2, |i, j| factor[i] * factor[j].conj());
        let sigma_bar = proj.scale(Complex::new(2.0, 0.0)).sub(&CMatrix::identity(2)).unwrap();
        assert!(build_squo(p).max_abs_diff(&sigma_bar) < 1e-9);
        let image = apply_squo(&psi, p).unwrap();
        assert!((psi.overlap(&image).unwrap().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_qutrit_input() {
        let psi = haar_random_state(3, 2, 0).unwrap();
        assert!(matches!(bloch_expectations(&psi), Err(Error::DimMismatch { .. })));
        assert!(optimal_squo(&psi).is_err());
    }
}
