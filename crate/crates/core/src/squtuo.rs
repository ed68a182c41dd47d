//! Single-qutrit unitary operations (SQUTUOs) on `(3 x D)` states.
//!
//! `U = exp(i 2π/3 Ô_A)` where `Ô_A` has spectrum `{1, 0, -1}`. With the
//! eigenvectors of `Ô_A` as the columns of a frame `V`,
//!
//! ```text
//! U = V diag(ω, 1, ω̄) V†,    ω = e^{i2π/3}
//! ```
//!
//! and `⟨Ψ|U ⊗ 1|Ψ⟩ = ω ρ'₁₁ + ρ'₂₂ + ω̄ ρ'₃₃` with `ρ'` the reduction written
//! in that frame. The squared distance `(3/2)(1 - Σ ρ'ᵢᵢ²)` is smallest in
//! the eigenbasis of `ρ_A`, where it equals the linear entropy.

use std::f64::consts::PI;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{inner, CMatrix, Complex};
use crate::state::{reduced_density, BipartiteState, ReducedDensity};

const UNITARY_TOL: f64 = 1e-10;

/// `e^{i2π/3}`.
pub fn omega() -> Complex {
    Complex::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Orthonormal qutrit frame; column `k` is the eigenvector of `Ô_A` for
/// eigenvalue `1 - k`.
#[derive(Clone, Debug, PartialEq)]
pub struct QutritBasis {
    frame: CMatrix,
}

impl QutritBasis {
    pub fn new(frame: CMatrix) -> Result<Self> {
        if frame.rows() != 3 || frame.cols() != 3 {
            return Err(Error::DimMismatch {
                expected: 3,
                got: frame.rows(),
            });
        }
        let defect = frame.unitarity_defect();
        if !(defect <= UNITARY_TOL) {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { frame })
    }

    pub fn identity() -> Self {
        Self {
            frame: CMatrix::identity(3),
        }
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn column(&self, k: usize) -> Vec<Complex> {
        self.frame.column(k)
    }

    /// Reorders the columns: column `k` of the result is column `perm[k]` here.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        let frame = CMatrix::from_fn(3, 3, |i, j| self.frame[(i, perm[j])]);
        Self { frame }
    }
}

impl Serialize for QutritBasis {
    /// Rows of `[re, im]` pairs.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(3))?;
        for i in 0..3 {
            let row: Vec<[f64; 2]> = self.frame.row(i).iter().map(|z| [z.re, z.im]).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SqutuoMinimum {
    pub basis: QutritBasis,
    pub min_d2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QutritSeparabilityVerdict {
    pub separable: bool,
    pub preserving_frame: Option<QutritBasis>,
}

fn require_qutrit(psi: &BipartiteState) -> Result<()> {
    if psi.dim_a() != 3 {
        return Err(Error::DimMismatch {
            expected: 3,
            got: psi.dim_a(),
        });
    }
    Ok(())
}

pub fn build_squtuo(basis: &QutritBasis) -> CMatrix {
    let w = omega();
    let phases = [w, Complex::new(1.0, 0.0), w.conj()];
    let v = &basis.frame;
    CMatrix::from_fn(3, 3, |i, j| {
        (0..3).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum()
    })
}

/// `(3/2)(1 - Σ ρ'ᵢᵢ²)` for a reduction already in hand.
pub fn distance_in_frame(rho: &ReducedDensity, basis: &QutritBasis) -> f64 {
    let diag = rho.diagonal_in(&basis.frame);
    let sum_sq: f64 = diag.iter().map(|g| g * g).sum();
    (1.5 * (1.0 - sum_sq)).clamp(0.0, 1.0)
}

/// `ω ρ'₁₁ + ρ'₂₂ + ω̄ ρ'₃₃`.
pub fn overlap_qutrit(psi: &BipartiteState, basis: &QutritBasis) -> Result<Complex> {
    require_qutrit(psi)?;
    let diag = reduced_density(psi)?.diagonal_in(&basis.frame);
    let w = omega();
    Ok(w * diag[0] + diag[1] + w.conj() * diag[2])
}

/// `⟨Ψ|U ⊗ 1|Ψ⟩` by explicit action on the amplitudes.
pub fn direct_overlap_qutrit(psi: &BipartiteState, basis: &QutritBasis) -> Result<Complex> {
    require_qutrit(psi)?;
    let image = psi.apply_a(&build_squtuo(basis))?;
    Ok(inner(psi.amplitudes(), image.amplitudes()))
}

pub fn squared_distance_qutrit(psi: &BipartiteState, basis: &QutritBasis) -> Result<f64> {
    require_qutrit(psi)?;
    Ok(distance_in_frame(&reduced_density(psi)?, basis))
}

/// Eigenbasis of `ρ_A`, columns by descending eigenvalue.
pub fn min_squared_distance_qutrit(psi: &BipartiteState) -> Result<SqutuoMinimum> {
    require_qutrit(psi)?;
    let rho = reduced_density(psi)?;
    let eig = rho.eig();
    let columns: Vec<Vec<Complex>> = (0..3).rev().map(|k| eig.vector(k)).collect();
    let basis = QutritBasis::new(CMatrix::from_columns(&columns)?)?;
    let sum_sq: f64 = rho.spectrum().iter().map(|g| g * g).sum();
    Ok(SqutuoMinimum {
        basis,
        min_d2: (1.5 * (1.0 - sum_sq)).clamp(0.0, 1.0),
    })
}

pub fn is_separable_qutrit(psi: &BipartiteState, tol: f64) -> Result<QutritSeparabilityVerdict> {
    let min = min_squared_distance_qutrit(psi)?;
    let separable = min.min_d2 <= tol;
    Ok(QutritSeparabilityVerdict {
        separable,
        preserving_frame: separable.then_some(min.basis),
    })
}
