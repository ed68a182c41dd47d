//! Brute-force minimizers used to validate the closed-form minima.
//!
//! None of these routines use the Bloch-vector or eigenvalue shortcuts of
//! [`crate::squo`] and [`crate::squtuo`]: the qubit grid evaluates
//! `1 - |Tr(ρ_A O)|²` entry by entry, and the frame searches evaluate the
//! diagonal of `ρ_A` in sampled Haar frames. Every sample derives its own
//! seed from `(seed, index)`, so results do not depend on evaluation order.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{inner, CMatrix, Complex};
use crate::rng;
use crate::squo::QubitUnitaryParams;
use crate::squtuo::{distance_in_frame, QutritBasis};
use crate::state::{reduced_density, BipartiteState};

/// Coordinate-descent rounds after the grid scan.
pub const REFINE_ROUNDS: usize = 20;

const GOLDEN_ITERS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridMinimum {
    pub min_d2: f64,
    pub argmin: QubitUnitaryParams,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrameMinimum {
    pub min_d2: f64,
    pub argmin: QutritBasis,
    pub sample: usize,
}

/// Golden-section search for a minimum of `f` on `[a, b]`. Returns the best
/// point seen and its value.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let (mut best_x, mut best_f) = if fc <= fd { (c, fc) } else { (d, fd) };
    for _ in 0..iters {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc < best_f {
                best_x = c;
                best_f = fc;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd < best_f {
                best_x = d;
                best_f = fd;
            }
        }
    }
    (best_x, best_f)
}

/// Alternating golden-section refinement of `f(θ, φ)` around a starting
/// point, with brackets `±dt` in `θ` (clipped to `[0, π]`) and `±dp` in `φ`.
/// Never returns a point worse than the start.
pub fn refine_angles(
    f: impl Fn(f64, f64) -> f64,
    start: (f64, f64),
    dt: f64,
    dp: f64,
    rounds: usize,
) -> (f64, f64, f64) {
    let (mut t, mut p) = start;
    let mut best = f(t, p);
    for _ in 0..rounds {
        let (lo, hi) = ((t - dt).max(0.0), (t + dt).min(PI));
        let (nt, v) = golden_section(|x| f(x, p), lo, hi, GOLDEN_ITERS);
        if v < best {
            t = nt;
            best = v;
        }
        let (np, v) = golden_section(|y| f(t, y), p - dp, p + dp, GOLDEN_ITERS);
        if v < best {
            p = np;
            best = v;
        }
    }
    (t, p, best)
}

fn require(psi: &BipartiteState, dim: usize) -> Result<()> {
    if psi.dim_a() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: psi.dim_a(),
        });
    }
    Ok(())
}

/// Uniform `n_theta x n_phi` scan of `1 - |Tr(ρ_A O(θ, φ))|²` on
/// `θ_i = π i/(n_theta - 1)`, `φ_j = 2π j/n_phi`, then [`REFINE_ROUNDS`]
/// rounds of golden-section refinement around the best cell. Ties go to the
/// smallest `θ`, then the smallest `φ`.
pub fn grid_min_squo(psi: &BipartiteState, n_theta: usize, n_phi: usize) -> Result<GridMinimum> {
    require(psi, 2)?;
    if n_theta < 2 || n_phi < 2 {
        return Err(Error::InvalidInput(format!("grid must be at least 2x2, got {n_theta}x{n_phi}")));
    }
    let rho = reduced_density(psi)?;
    let m = rho.matrix();
    let (r00, r01, r10, r11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let eval_trig = |ct: f64, st: f64, e: Complex| {
        // Tr(ρ O) = ρ00 O00 + ρ01 O10 + ρ10 O01 + ρ11 O11.
        let tr = r00 * ct + r01 * (e * st) + r10 * (e.conj() * st) - r11 * ct;
        1.0 - tr.norm_sqr()
    };
    let eval = |t: f64, p: f64| {
        let (st, ct) = t.sin_cos();
        eval_trig(ct, st, Complex::from_polar(1.0, p))
    };

    let dt = PI / (n_theta - 1) as f64;
    let dp = TAU / n_phi as f64;
    let phases: Vec<Complex> = (0..n_phi).map(|j| Complex::from_polar(1.0, dp * j as f64)).collect();
    let mut best = (f64::INFINITY, 0, 0);
    for i in 0..n_theta {
        let (st, ct) = (dt * i as f64).sin_cos();
        for (j, &e) in phases.iter().enumerate() {
            let v = eval_trig(ct, st, e);
            if v < best.0 {
                best = (v, i, j);
            }
        }
    }
    let start = (dt * best.1 as f64, dp * best.2 as f64);
    let (t, p, v) = refine_angles(eval, start, dt, dp, REFINE_ROUNDS);
    Ok(GridMinimum {
        min_d2: v.clamp(0.0, 1.0),
        argmin: QubitUnitaryParams::new(t, p),
    })
}

/// Haar-random `dim x dim` unitary: Ginibre matrix, orthonormalized column
/// by column (twice, for stability), which is the QR factor with a positive
/// real `R` diagonal.
pub fn haar_unitary(dim: usize, seed: u64) -> Result<CMatrix> {
    if !(2..=3).contains(&dim) {
        return Err(Error::BadDims(dim, dim));
    }
    let mut rng = rng::seeded(seed);
    let mut cols: Vec<Vec<Complex>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng::complex_gaussian(&mut rng)).collect())
        .collect();
    for k in 0..dim {
        for _ in 0..2 {
            for j in 0..k {
                let proj = inner(&cols[j], &cols[k]);
                let qj = cols[j].clone();
                for (x, q) in cols[k].iter_mut().zip(&qj) {
                    *x -= proj * q;
                }
            }
        }
        let norm = crate::numerics::vec_norm(&cols[k]);
        for x in cols[k].iter_mut() {
            *x /= norm;
        }
    }
    CMatrix::from_columns(&cols)
}

/// Best of `samples` Haar-random frames for the qutrit squared distance.
/// Ties go to the lowest sample index.
pub fn random_basis_min_squtuo(psi: &BipartiteState, samples: usize, seed: u64) -> Result<FrameMinimum> {
    require(psi, 3)?;
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let rho = reduced_density(psi)?;
    let mut best: Option<FrameMinimum> = None;
    for k in 0..samples {
        let basis = QutritBasis::new(haar_unitary(3, rng::task_seed(seed, k as u64))?)?;
        let v = distance_in_frame(&rho, &basis);
        if best.as_ref().is_none_or(|b| v < b.min_d2) {
            best = Some(FrameMinimum {
                min_d2: v,
                argmin: basis,
                sample: k,
            });
        }
    }
    Ok(best.expect("samples > 0"))
}

/// `4 ρ'₁₁ ρ'₂₂` with `ρ'` the qubit reduction in the frame `u`.
pub fn frame_diagonal_product(psi: &BipartiteState, u: &CMatrix) -> Result<f64> {
    require(psi, 2)?;
    let d = reduced_density(psi)?.diagonal_in(u);
    Ok(4.0 * d[0] * d[1])
}

/// Minimum of `4 ρ'₁₁ ρ'₂₂` over `samples` Haar-random qubit frames.
pub fn basis_scan_qubit(psi: &BipartiteState, samples: usize, seed: u64) -> Result<f64> {
    require(psi, 2)?;
    if samples == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let rho = reduced_density(psi)?;
    let mut best = f64::INFINITY;
    for k in 0..samples {
        let u = haar_unitary(2, rng::task_seed(seed, k as u64))?;
        let d = rho.diagonal_in(&u);
        best = best.min(4.0 * d[0] * d[1]);
    }
    Ok(best)
}
