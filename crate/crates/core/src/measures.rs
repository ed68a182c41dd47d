//! Entropic measures of a reduction, two-qubit concurrence and the
//! monogamy inequality for multiqubit pure states.
//!
//! Entropies are in bits. Eigenvalues of `ρ` in `[-1e-12, 0)` are treated
//! as zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{det, herm_eig, CMatrix, Complex, ZERO};
use crate::rng;
use crate::squo::{self, QubitUnitaryParams};
use crate::squtuo::{self, QutritBasis};
use crate::state::{reduced_density, BipartiteState, ReducedDensity};

/// Largest supported chain / register size.
pub const MAX_SITES: usize = 10;

/// Slack below which a monogamy check counts as violated.
pub const MONOGAMY_TOL: f64 = 1e-9;

const TWO_QUBIT_TOL: f64 = 1e-10;

pub fn purity(rho: &ReducedDensity) -> f64 {
    let m = rho.matrix();
    // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
    m.data().iter().map(|z| z.norm_sqr()).sum()
}

/// `l/(l-1) (1 - Tr ρ²)`.
pub fn linear_entropy(rho: &ReducedDensity) -> f64 {
    let l = rho.dim() as f64;
    (l / (l - 1.0) * (1.0 - purity(rho))).clamp(0.0, 1.0)
}

/// `4 det ρ` for a qubit reduction.
pub fn tangle(rho: &ReducedDensity) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::SizeUnsupported(rho.dim()));
    }
    Ok((4.0 * det(rho.matrix())?.re).clamp(0.0, 1.0))
}

fn entropy_bits(spectrum: &[f64]) -> f64 {
    spectrum
        .iter()
        .filter(|&&g| g > 0.0)
        .map(|&g| -g * g.log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn von_neumann(rho: &ReducedDensity) -> f64 {
    entropy_bits(&rho.spectrum())
}

/// Qubit entropy as a function of the tangle alone,
/// `-x log₂ x - (1-x) log₂(1-x)` with `x = (1 + √(1-τ))/2`.
pub fn von_neumann_from_tangle(tau: f64) -> f64 {
    let x = 0.5 * (1.0 + (1.0 - tau.clamp(0.0, 1.0)).sqrt());
    entropy_bits(&[x, 1.0 - x])
}

fn sigma_y_sigma_y() -> CMatrix {
    // σy ⊗ σy is real: anti-diagonal (-1, 1, 1, -1).
    let mut y = CMatrix::zeros(4, 4);
    for (i, s) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        y[(i, 3 - i)] = Complex::new(s, 0.0);
    }
    y
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// The `λ`s (square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`) are
/// obtained as the singular values of `τ = W† (σy⊗σy) W̄`, where the columns
/// of `W` are the eigenvectors of `ρ` scaled by the square roots of their
/// eigenvalues. Those singular values are read off the Hermitian dilation
/// `[[0, τ], [τ†, 0]]`, so small `λ`s are resolved to absolute rather than
/// square-root accuracy.
pub fn concurrence(rho: &CMatrix) -> Result<f64> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::InvalidDensity(format!(
            "expected a 4x4 matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let defect = rho.hermiticity_defect();
    if defect > TWO_QUBIT_TOL {
        return Err(Error::InvalidDensity(format!("not Hermitian ({defect:e})")));
    }
    let tr = rho.trace()?;
    if (tr.re - 1.0).abs() > TWO_QUBIT_TOL || tr.im.abs() > TWO_QUBIT_TOL {
        return Err(Error::InvalidDensity(format!("trace {tr}")));
    }
    let eig = herm_eig(rho)?;
    if eig.values[0] < -TWO_QUBIT_TOL {
        return Err(Error::InvalidDensity(format!(
            "negative eigenvalue {:e}",
            eig.values[0]
        )));
    }
    let w = CMatrix::from_fn(4, 4, |i, k| eig.vectors[(i, k)] * eig.values[k].max(0.0).sqrt());
    let tau = w.adjoint().matmul(&sigma_y_sigma_y())?.matmul(&w.conj())?;
    let dilation = CMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, false) => tau[(i, j - 4)],
        (false, true) => tau[(j, i - 4)].conj(),
        _ => ZERO,
    });
    let values = herm_eig(&dilation)?.values;
    let lambda: Vec<f64> = values[4..].iter().rev().map(|&s| s.max(0.0)).collect();
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).clamp(0.0, 1.0))
}

/// `2^n` for `2 ≤ n ≤ MAX_SITES`.
pub fn register_dim(n_sites: usize) -> Result<usize> {
    if n_sites < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 sites, got {n_sites}")));
    }
    if n_sites > MAX_SITES {
        return Err(Error::TooLarge(n_sites));
    }
    Ok(1 << n_sites)
}

/// Pure state of `n` qubits. Amplitude index `Σ_j b_j 2^j`: site 0 is the
/// least significant bit, and bit value 0 is `|↑⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiQubitState {
    n_sites: usize,
    amplitudes: Vec<Complex>,
}

impl MultiQubitState {
    /// Norm within `1e-9` of one is accepted and corrected.
    pub fn new(n_sites: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        let dim = register_dim(n_sites)?;
        if amplitudes.len() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm = crate::numerics::vec_norm(&amplitudes);
        if !((norm - 1.0).abs() <= crate::state::NORM_TOL) {
            return Err(Error::NotNormalized(norm));
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(Self { n_sites, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(n_sites: usize, amplitudes: Vec<Complex>) -> Result<Self> {
        let norm = crate::numerics::vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Self::new(n_sites, amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_sites: usize) -> Result<Self> {
        let dim = register_dim(n_sites)?;
        let mut a = vec![ZERO; dim];
        a[0] = Complex::new(1.0, 0.0);
        a[dim - 1] = Complex::new(1.0, 0.0);
        Self::normalized(n_sites, a)
    }

    /// Equal superposition of the `n` single-flip states.
    pub fn w(n_sites: usize) -> Result<Self> {
        let mut a = vec![ZERO; register_dim(n_sites)?];
        for j in 0..n_sites {
            a[1 << j] = Complex::new(1.0, 0.0);
        }
        Self::normalized(n_sites, a)
    }

    /// All spins up, amplitude index 0.
    pub fn all_up(n_sites: usize) -> Result<Self> {
        let mut a = vec![ZERO; register_dim(n_sites)?];
        a[0] = Complex::new(1.0, 0.0);
        Self::new(n_sites, a)
    }

    /// `⊗_j |φ_j⟩` with `factors[j]` on site `j`.
    pub fn product(factors: &[[Complex; 2]]) -> Result<Self> {
        let n = factors.len();
        let a = (0..register_dim(n)?)
            .map(|idx| {
                factors
                    .iter()
                    .enumerate()
                    .map(|(j, f)| f[(idx >> j) & 1])
                    .product()
            })
            .collect();
        Self::normalized(n, a)
    }

    /// Haar-random pure state; deterministic per seed.
    pub fn haar_random(n_sites: usize, seed: u64) -> Result<Self> {
        let dim = register_dim(n_sites)?;
        let mut rng = rng::seeded(seed);
        let a = (0..dim)
            .map(|_| rng::complex_gaussian(&mut rng))
            .collect();
        Self::normalized(n_sites, a)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::BadSite {
                site,
                n_sites: self.n_sites,
            });
        }
        Ok(())
    }

    /// The `site | rest` bipartition as a `2 x 2^{n-1}` state. The remaining
    /// sites keep their relative order in the `B` index.
    pub fn bipartite(&self, site: usize) -> Result<BipartiteState> {
        self.check_site(site)?;
        let half = 1usize << (self.n_sites - 1);
        let low_mask = (1usize << site) - 1;
        let mut c = CMatrix::zeros(2, half);
        for (idx, &z) in self.amplitudes.iter().enumerate() {
            let bit = (idx >> site) & 1;
            let rest = (idx & low_mask) | ((idx >> (site + 1)) << site);
            c[(bit, rest)] = z;
        }
        BipartiteState::new(c)
    }

    pub fn site_reduction(&self, site: usize) -> Result<ReducedDensity> {
        reduced_density(&self.bipartite(site)?)
    }

    /// Two-site reduction `ρ_{ij}` in the basis `|b_i b_j⟩`, local index `2 b_i + b_j`.
    pub fn pair_reduction(&self, i: usize, j: usize) -> Result<CMatrix> {
        self.check_site(i)?;
        self.check_site(j)?;
        if i == j {
            return Err(Error::InvalidInput(format!("pair reduction needs two distinct sites, got {i} twice")));
        }
        let pair_mask = (1usize << i) | (1usize << j);
        let mut rho = CMatrix::zeros(4, 4);
        let local = |idx: usize| 2 * ((idx >> i) & 1) + ((idx >> j) & 1);
        for (idx, &z) in self.amplitudes.iter().enumerate() {
            if z == ZERO {
                continue;
            }
            let rest = idx & !pair_mask;
            for bits in 0..4usize {
                let other = rest | (((bits >> 1) & 1) << i) | ((bits & 1) << j);
                rho[(local(idx), bits)] += z * self.amplitudes[other].conj();
            }
        }
        Ok(rho)
    }

    /// Applies a 2x2 matrix to one site.
    pub fn apply_site(&self, site: usize, u: &CMatrix) -> Result<Vec<Complex>> {
        self.check_site(site)?;
        if u.rows() != 2 || u.cols() != 2 {
            return Err(Error::DimMismatch {
                expected: 2,
                got: u.rows(),
            });
        }
        let mut out = vec![ZERO; self.amplitudes.len()];
        let bit = 1usize << site;
        for idx in 0..self.amplitudes.len() {
            if idx & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amplitudes[idx], self.amplitudes[idx | bit]);
            out[idx] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            out[idx | bit] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonogamyCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
}

/// `τ(site | rest)` against `Σ_{i ≠ site} C²(ρ_{site,i})`.
pub fn monogamy_check(psi: &MultiQubitState, site: usize) -> Result<MonogamyCheck> {
    let lhs = tangle(&psi.site_reduction(site)?)?;
    let mut rhs = 0.0;
    for other in (0..psi.n_sites()).filter(|&k| k != site) {
        let c = concurrence(&psi.pair_reduction(site, other)?)?;
        rhs += c * c;
    }
    Ok(MonogamyCheck {
        lhs,
        rhs,
        satisfied: lhs >= rhs - MONOGAMY_TOL,
        slack: lhs - rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Minimizer {
    Qubit {
        params1: QubitUnitaryParams,
        params2: QubitUnitaryParams,
        degenerate: bool,
    },
    Qutrit {
        frame: QutritBasis,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub purity: f64,
    pub linear_entropy: f64,
    /// Qubit reductions only.
    pub tangle: Option<f64>,
    pub von_neumann: f64,
    pub min_d2: f64,
    /// `1 - min_d2`: the largest `F_A` for qubits, the largest `|⟨Ψ|U|Ψ⟩|²` for qutrits.
    pub max_factorizability: f64,
    pub separable: bool,
    pub minimizer: Minimizer,
}

/// Every measure of `psi` plus the minimizing local operation; `tol` is the
/// separability threshold on `min_d2`.
pub fn entanglement_report(psi: &BipartiteState, tol: f64) -> Result<EntanglementReport> {
    let rho = reduced_density(psi)?;
    let (tangle, min_d2, max_factorizability, minimizer) = match psi.dim_a() {
        2 => {
            let min = squo::optimal_squo(psi)?;
            let f = squo::max_local_factorizability(psi)?;
            let m = Minimizer::Qubit {
                params1: min.params1,
                params2: min.params2,
                degenerate: min.degenerate,
            };
            (Some(tangle(&rho)?), min.min_d2, f, m)
        }
        _ => {
            let min = squtuo::min_squared_distance_qutrit(psi)?;
            let f = 1.0 - min.min_d2;
            (None, min.min_d2, f, Minimizer::Qutrit { frame: min.basis })
        }
    };
    Ok(EntanglementReport {
        dim_a: psi.dim_a(),
        dim_b: psi.dim_b(),
        purity: purity(&rho),
        linear_entropy: linear_entropy(&rho),
        tangle,
        von_neumann: von_neumann(&rho),
        min_d2,
        max_factorizability,
        separable: min_d2 <= tol,
        minimizer,
    })
}
