//! Pure states of a bipartite `(d_A x D)` system.
//!
//! A state `|Ψ⟩ = Σ_{s,n} c_{n,s} |s⟩_A ⊗ |n⟩_B` is stored as the `d_A x D`
//! coefficient matrix `C` with `C[(s, n)] = c_{n,s}`. The reduction of `A`
//! is then simply `ρ_A = C C†`.
//!
//! # State files
//!
//! ```json
//! {"dim_a": 2, "dim_b": 2, "amplitudes": [[0.7071067811865476, 0.0], [0.0, 0.0], ...]}
//! ```
//!
//! `amplitudes` lists `[re, im]` pairs row-major over `(a, b)`, i.e. entry
//! `a * dim_b + b`. Files written by [`save_state`] print every number with
//! 17 significant digits so a reload is bit-exact. On load the norm may be
//! off by up to `1e-9` (and is then renormalized); larger deviations are
//! rejected.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::numerics::{herm_eig, inner, CMatrix, Complex, EigenDecomposition, ZERO};
use crate::rng;

/// Tolerance on `|‖C‖ - 1|` accepted (and silently corrected) on construction.
pub const NORM_TOL: f64 = 1e-9;

const DENSITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    coeffs: CMatrix,
}

impl BipartiteState {
    /// Wraps a `dim_a x dim_b` coefficient matrix. The norm must be within
    /// [`NORM_TOL`] of one; it is then rescaled to one exactly (up to rounding).
    pub fn new(coeffs: CMatrix) -> Result<Self> {
        let (dim_a, dim_b) = (coeffs.rows(), coeffs.cols());
        check_dims(dim_a, dim_b)?;
        let norm = coeffs.frobenius_norm();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            dim_a,
            dim_b,
            coeffs: coeffs.scale(Complex::new(1.0 / norm, 0.0)),
        })
    }

    /// Row-major amplitudes over `(a, b)`.
    pub fn from_amplitudes(dim_a: usize, dim_b: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        check_dims(dim_a, dim_b)?;
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::Parse(format!(
                "expected {} amplitudes for {}x{}, got {}",
                dim_a * dim_b,
                dim_a,
                dim_b,
                amplitudes.len()
            )));
        }
        Self::new(CMatrix::new(dim_a, dim_b, amplitudes)?)
    }

    /// Rescales an arbitrary nonzero coefficient matrix to unit norm.
    pub fn normalized(coeffs: CMatrix) -> Result<Self> {
        let norm = coeffs.frobenius_norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(coeffs.scale(Complex::new(1.0 / norm, 0.0)))
    }

    /// `|a⟩ ⊗ |b⟩`, with both factors normalized first.
    pub fn product(a: &[Complex], b: &[Complex]) -> Result<Self> {
        let coeffs = CMatrix::from_fn(a.len(), b.len(), |i, j| a[i] * b[j]);
        check_dims(a.len(), b.len())?;
        Self::normalized(coeffs)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    pub fn amplitudes(&self) -> &[Complex] {
        self.coeffs.data()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.frobenius_norm()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &BipartiteState) -> Result<Complex> {
        if self.dim_a != other.dim_a || self.dim_b != other.dim_b {
            return Err(Error::DimMismatch {
                expected: self.dim_a * self.dim_b,
                got: other.dim_a * other.dim_b,
            });
        }
        Ok(inner(self.amplitudes(), other.amplitudes()))
    }

    /// `(U ⊗ 1_B)|Ψ⟩`, i.e. `C ← U C`. `U` must be unitary for the result to
    /// stay normalized.
    pub fn apply_a(&self, u: &CMatrix) -> Result<BipartiteState> {
        if u.rows() != self.dim_a || u.cols() != self.dim_a {
            return Err(Error::DimMismatch {
                expected: self.dim_a,
                got: u.rows(),
            });
        }
        BipartiteState::new(u.matmul(&self.coeffs)?)
    }

    /// `(1_A ⊗ W)|Ψ⟩`, i.e. `C ← C Wᵀ`.
    pub fn apply_b(&self, w: &CMatrix) -> Result<BipartiteState> {
        if w.rows() != self.dim_b || w.cols() != self.dim_b {
            return Err(Error::DimMismatch {
                expected: self.dim_b,
                got: w.rows(),
            });
        }
        BipartiteState::new(self.coeffs.matmul(&w.transpose())?)
    }
}

fn check_dims(dim_a: usize, dim_b: usize) -> Result<()> {
    if !(2..=3).contains(&dim_a) || dim_b < 2 {
        return Err(Error::BadDims(dim_a, dim_b));
    }
    Ok(())
}

/// Hermitian, positive semidefinite, unit-trace reduction of a qubit or qutrit.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDensity {
    rho: CMatrix,
}

impl ReducedDensity {
    /// Validates a 2x2 or 3x3 density matrix.
    pub fn new(rho: CMatrix) -> Result<Self> {
        if !rho.is_square() || !(2..=3).contains(&rho.rows()) {
            return Err(Error::InvalidDensity(format!(
                "expected a 2x2 or 3x3 matrix, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let defect = rho.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({defect:e})")));
        }
        let tr = rho.trace()?;
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = herm_eig(&rho)?.values[0];
        if min_eig < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { rho })
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_diag(diag))
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn eig(&self) -> EigenDecomposition {
        herm_eig(&self.rho).expect("validated density matrices are Hermitian")
    }

    /// Eigenvalues in ascending order, with entries in `[-1e-12, 0)` clipped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        self.eig()
            .values
            .into_iter()
            .map(|g| if g < 0.0 { 0.0 } else { g })
            .collect()
    }

    /// Matrix elements `ρ'_kk = ⟨v_k|ρ|v_k⟩` in the orthonormal frame whose
    /// columns are `frame`.
    pub fn diagonal_in(&self, frame: &CMatrix) -> Vec<f64> {
        (0..frame.cols())
            .map(|k| {
                let v = frame.column(k);
                let rv = self.rho.mul_vec(&v).expect("frame matches dimension");
                inner(&v, &rv).re
            })
            .collect()
    }
}

/// `ρ_A = Tr_B |Ψ⟩⟨Ψ| = C C†`.
pub fn reduced_density(psi: &BipartiteState) -> Result<ReducedDensity> {
    let norm = psi.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let c = psi.coeffs();
    let d = psi.dim_a();
    let mut rho = CMatrix::zeros(d, d);
    for s in 0..d {
        for t in s..d {
            let v: Complex = c.row(s).iter().zip(c.row(t)).map(|(x, y)| x * y.conj()).sum();
            rho[(s, t)] = v;
            rho[(t, s)] = v.conj();
        }
        rho[(s, s)].im = 0.0;
    }
    ReducedDensity::new(rho)
}

/// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalized. The same seed always yields the same state.
pub fn haar_random_state(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    check_dims(dim_a, dim_b)?;
    let mut rng = rng::seeded(seed);
    let amps: Vec<Complex> = (0..dim_a * dim_b)
        .map(|_| rng::complex_gaussian(&mut rng))
        .collect();
    BipartiteState::normalized(CMatrix::new(dim_a, dim_b, amps)?)
}

#[derive(Deserialize)]
struct StateFile {
    dim_a: usize,
    dim_b: usize,
    amplitudes: Vec<[f64; 2]>,
}

pub fn state_to_json(psi: &BipartiteState) -> String {
    let amps: Vec<String> = psi
        .amplitudes()
        .iter()
        .map(|z| format!("[{:.16e}, {:.16e}]", z.re, z.im))
        .collect();
    format!(
        "{{\"dim_a\": {}, \"dim_b\": {}, \"amplitudes\": [{}]}}\n",
        psi.dim_a(),
        psi.dim_b(),
        amps.join(", ")
    )
}

pub fn state_from_json(text: &str) -> Result<BipartiteState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let amps = file
        .amplitudes
        .iter()
        .map(|&[re, im]| Complex::new(re, im))
        .collect();
    BipartiteState::from_amplitudes(file.dim_a, file.dim_b, amps)
}

pub fn save_state(psi: &BipartiteState, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, state_to_json(psi))?;
    Ok(())
}

pub fn load_state(path: impl AsRef<Path>) -> Result<BipartiteState> {
    state_from_json(&fs::read_to_string(path)?)
}

/// Computational basis vector `e_k` of length `dim`.
pub fn basis_vector(dim: usize, k: usize) -> Vec<Complex> {
    let mut v = vec![ZERO; dim];
    v[k] = Complex::new(1.0, 0.0);
    v
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> BipartiteState {
    maximally_entangled(2).expect("2x2 is a valid shape")
}

/// `Σ_k |kk⟩/√d` for `d ∈ {2, 3}`.
pub fn maximally_entangled(d: usize) -> Result<BipartiteState> {
    let s = Complex::new(1.0 / (d as f64).sqrt(), 0.0);
    BipartiteState::new(CMatrix::from_fn(d, d, |i, j| if i == j { s } else { ZERO }))
}
