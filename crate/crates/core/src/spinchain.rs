//! XY spin-1/2 chains in a transverse field, exact ground states and the
//! energy cost of single-site SQUO kicks.
//!
//! ```text
//! H = -J Σ_j [ (1+γ)/2 σx_j σx_{j+1} + (1-γ)/2 σy_j σy_{j+1} ] - h Σ_j σz_j
//! ```
//!
//! Basis states are bit strings with site 0 the least significant bit and
//! bit 0 meaning `|↑⟩` (`σz = +1`). A periodic chain adds the bond
//! `(n-1, 0)` when `n ≥ 3`; for two sites it would only duplicate the single
//! bond.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{register_dim, tangle, MultiQubitState};
use crate::numerics::{herm_eig, inner, vec_norm, CMatrix, Complex, ZERO};
use crate::oracle::refine_angles;
use crate::rng;
use crate::squo::{build_squo, QubitUnitaryParams};

/// Largest dimension diagonalized densely; larger problems use power iteration.
pub const DENSE_LIMIT: usize = 256;

const POWER_TOL: f64 = 1e-10;
const POWER_MAX_ITERS: usize = 200_000;
const FACTORIZED_TANGLE: f64 = 1e-8;
const FACTORIZED_DE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinChainSpec {
    pub n_sites: usize,
    pub gamma: f64,
    pub field: f64,
    pub coupling: f64,
    pub periodic: bool,
}

impl SpinChainSpec {
    /// Periodic chain with `J = 1`.
    pub fn new(n_sites: usize, gamma: f64, field: f64) -> Self {
        Self {
            n_sites,
            gamma,
            field,
            coupling: 1.0,
            periodic: true,
        }
    }

    pub fn with_field(mut self, field: f64) -> Self {
        self.field = field;
        self
    }

    pub fn validate(&self) -> Result<()> {
        register_dim(self.n_sites)?;
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidInput(format!("anisotropy must lie in [0, 1], got {}", self.gamma)));
        }
        if !(self.field >= 0.0) || !self.field.is_finite() {
            return Err(Error::InvalidInput(format!("field must be finite and non-negative, got {}", self.field)));
        }
        if !self.coupling.is_finite() {
            return Err(Error::InvalidInput(format!("coupling must be finite, got {}", self.coupling)));
        }
        Ok(())
    }

    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let mut bonds: Vec<(usize, usize)> = (0..n - 1).map(|j| (j, j + 1)).collect();
        if self.periodic && n >= 3 {
            bonds.push((n - 1, 0));
        }
        bonds
    }
}

pub fn build_xy_hamiltonian(spec: &SpinChainSpec) -> Result<CMatrix> {
    spec.validate()?;
    let dim = 1usize << spec.n_sites;
    let bonds = spec.bonds();
    let j = spec.coupling;
    let mut h = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let ups = spec.n_sites as i64 - 2 * idx.count_ones() as i64;
        h[(idx, idx)] = Complex::new(-spec.field * ups as f64, 0.0);
        for &(a, b) in &bonds {
            let same = ((idx >> a) & 1) == ((idx >> b) & 1);
            // σxσx + σyσy terms on a flipped pair: (1+γ)/2 ± (1-γ)/2.
            let amp = if same { spec.gamma } else { 1.0 };
            let flipped = idx ^ (1 << a) ^ (1 << b);
            h[(flipped, idx)] += Complex::new(-j * amp, 0.0);
        }
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateResult {
    pub energy: f64,
    /// Unit-norm ground vector, first significant component real positive.
    pub vector: Vec<Complex>,
    /// `E₁ - E₀`. Above [`DENSE_LIMIT`] this comes from a deflated power
    /// iteration and is an estimate.
    pub gap: f64,
}

impl GroundStateResult {
    pub fn state(&self) -> Result<MultiQubitState> {
        let n = self.vector.len().trailing_zeros() as usize;
        if 1usize << n != self.vector.len() {
            return Err(Error::InvalidInput(format!(
                "dimension {} is not a power of two",
                self.vector.len()
            )));
        }
        MultiQubitState::new(n, self.vector.clone())
    }

    /// `‖H v - E₀ v‖`.
    pub fn residual(&self, h: &CMatrix) -> Result<f64> {
        let hv = h.mul_vec(&self.vector)?;
        let r: Vec<Complex> = hv.iter().zip(&self.vector).map(|(a, b)| a - b * self.energy).collect();
        Ok(vec_norm(&r))
    }
}

fn one_norm(h: &CMatrix) -> f64 {
    (0..h.cols())
        .map(|j| (0..h.rows()).map(|i| h[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn phase_fix(v: &mut [Complex]) {
    if let Some(k) = v.iter().position(|z| z.norm() > 1e-10) {
        let r = v[k].norm();
        let phase = v[k].conj() / r;
        for x in v.iter_mut() {
            *x *= phase;
        }
        v[k] = Complex::new(r, 0.0);
    }
}

fn normalize(v: &mut [Complex]) {
    let n = vec_norm(v);
    for x in v.iter_mut() {
        *x /= n;
    }
}

fn project_out(v: &mut [Complex], u: &[Complex]) {
    let c = inner(u, v);
    for (x, y) in v.iter_mut().zip(u) {
        *x -= c * y;
    }
}

/// Power iteration on `c - H`, optionally kept orthogonal to `deflate`.
/// Returns the Rayleigh quotient, the vector, and whether the residual
/// reached `tol · c`.
fn shifted_power(h: &CMatrix, c: f64, deflate: Option<&[Complex]>, tol: f64, seed: u64) -> Result<(f64, Vec<Complex>, bool)> {
    let dim = h.rows();
    let mut r = rng::seeded(seed);
    let real = h.is_real();
    let mut v: Vec<Complex> = (0..dim)
        .map(|_| {
            let z = rng::complex_gaussian(&mut r);
            if real {
                Complex::new(z.re, 0.0)
            } else {
                z
            }
        })
        .collect();
    if let Some(u) = deflate {
        project_out(&mut v, u);
    }
    normalize(&mut v);
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let hv = h.mul_vec(&v)?;
        lambda = inner(&v, &hv).re;
        let res: f64 = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res <= tol * c {
            return Ok((lambda, v, true));
        }
        for (x, y) in v.iter_mut().zip(&hv) {
            *x = *x * c - y;
        }
        if let Some(u) = deflate {
            project_out(&mut v, u);
        }
        normalize(&mut v);
    }
    Ok((lambda, v, false))
}

/// Lowest eigenpair of a Hermitian `H` with `dim ≤ 1024`.
pub fn ground_state(h: &CMatrix) -> Result<GroundStateResult> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch(h.rows(), h.cols(), h.cols(), h.rows()));
    }
    let dim = h.rows();
    if dim > 1 << crate::measures::MAX_SITES {
        return Err(Error::TooLarge(dim));
    }
    if dim <= DENSE_LIMIT {
        let eig = herm_eig(h)?;
        let gap = if dim > 1 { eig.values[1] - eig.values[0] } else { 0.0 };
        return Ok(GroundStateResult {
            energy: eig.values[0],
            vector: eig.vector(0),
            gap,
        });
    }
    let defect = h.hermiticity_defect();
    if defect > 1e-12 {
        return Err(Error::NonHermitian(defect));
    }
    let c = one_norm(h).max(1.0);
    let (energy, mut vector, converged) = shifted_power(h, c, None, POWER_TOL, 0x6a09_e667)?;
    if !converged {
        return Err(Error::NoConvergence(POWER_MAX_ITERS));
    }
    phase_fix(&mut vector);
    let (e1, _, _) = shifted_power(h, c, Some(&vector), 1e-8, 0xbb67_ae85)?;
    Ok(GroundStateResult {
        energy,
        vector,
        gap: (e1 - energy).max(0.0),
    })
}

fn kicked(g: &[Complex], site: usize, op: &CMatrix) -> Result<Vec<Complex>> {
    let n = g.len().trailing_zeros() as usize;
    if site >= n {
        return Err(Error::BadSite { site, n_sites: n });
    }
    let bit = 1usize << site;
    let mut out = vec![ZERO; g.len()];
    for idx in (0..g.len()).filter(|i| i & bit == 0) {
        let (a0, a1) = (g[idx], g[idx | bit]);
        out[idx] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
        out[idx | bit] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
    }
    Ok(out)
}

fn energy_of(h: &CMatrix, v: &[Complex]) -> Result<f64> {
    Ok(inner(v, &h.mul_vec(v)?).re)
}

/// `⟨G|O† H O|G⟩ - ⟨G|H|G⟩` with `O = O(θ, φ)` acting on `site`.
pub fn excitation_energy(g: &GroundStateResult, h: &CMatrix, site: usize, p: QubitUnitaryParams) -> Result<f64> {
    let kicked = kicked(&g.vector, site, &build_squo(p))?;
    Ok(energy_of(h, &kicked)? - energy_of(h, &g.vector)?)
}

/// Since `O = n · σ`, the kicked energy is the quadratic form
/// `nᵀ K n` with `K_αβ = Re⟨σ_α G|H|σ_β G⟩`. Returns `K` and `⟨G|H|G⟩`.
pub fn excitation_form(g: &GroundStateResult, h: &CMatrix, site: usize) -> Result<([[f64; 3]; 3], f64)> {
    let paulis = [
        QubitUnitaryParams::new(std::f64::consts::FRAC_PI_2, 0.0),
        QubitUnitaryParams::new(std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        QubitUnitaryParams::new(0.0, 0.0),
    ];
    let mut kicks = Vec::with_capacity(3);
    for p in paulis {
        kicks.push(kicked(&g.vector, site, &build_squo(p))?);
    }
    let hk: Vec<Vec<Complex>> = kicks.iter().map(|k| h.mul_vec(k)).collect::<Result<_>>()?;
    let mut form = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            form[a][b] = inner(&kicks[a], &hk[b]).re;
        }
    }
    Ok((form, energy_of(h, &g.vector)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExcitationMinimum {
    pub min_de: f64,
    pub argmin: QubitUnitaryParams,
}

/// Minimum of [`excitation_energy`] over all SQUOs on `site`: a 180 x 360
/// grid in `(θ, φ)` followed by golden-section refinement.
pub fn min_excitation(g: &GroundStateResult, h: &CMatrix, site: usize) -> Result<ExcitationMinimum> {
    let (k, e0) = excitation_form(g, h, site)?;
    let eval = |t: f64, p: f64| {
        let n = QubitUnitaryParams::new(t, p).direction();
        let mut q = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                q += n[a] * k[a][b] * n[b];
            }
        }
        q - e0
    };
    let (nt, np) = (180usize, 360usize);
    let dt = std::f64::consts::PI / (nt - 1) as f64;
    let dp = std::f64::consts::TAU / np as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..nt {
        for j in 0..np {
            let (t, p) = (dt * i as f64, dp * j as f64);
            let v = eval(t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    let (t, p, v) = refine_angles(eval, (best.1, best.2), dt, dp, crate::oracle::REFINE_ROUNDS);
    Ok(ExcitationMinimum {
        min_de: v,
        argmin: QubitUnitaryParams::new(t, p),
    })
}

/// `τ` of the site-0 reduction of a chain vector.
pub fn site_tangle(vector: &[Complex], site: usize) -> Result<f64> {
    let n = vector.len().trailing_zeros() as usize;
    let psi = MultiQubitState::new(n, vector.to_vec())?;
    tangle(&psi.site_reduction(site)?)
}

/// `⟨Π⟩` with `Π = Π_j σz_j`, the conserved spin-flip parity.
pub fn parity(vector: &[Complex]) -> f64 {
    vector
        .iter()
        .enumerate()
        .map(|(idx, z)| if idx.count_ones() % 2 == 0 { z.norm_sqr() } else { -z.norm_sqr() })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizingField {
    pub field: f64,
    /// Least entangled normalized vector in the span of the two lowest levels.
    pub vector: Vec<Complex>,
    pub tangle: f64,
    pub min_de: f64,
}

fn least_entangled_in_pair(u1: &[Complex], u2: &[Complex]) -> Result<(Vec<Complex>, f64)> {
    let mix = |a: f64, b: f64| -> Vec<Complex> {
        let (s, c) = a.sin_cos();
        let e = Complex::from_polar(s, b);
        u1.iter().zip(u2).map(|(x, y)| x * c + y * e).collect()
    };
    let eval = |a: f64, b: f64| site_tangle(&mix(a, b), 0).unwrap_or(f64::INFINITY);
    let (na, nb) = (46usize, 90usize);
    let da = std::f64::consts::FRAC_PI_2 / (na - 1) as f64;
    let db = std::f64::consts::TAU / nb as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..na {
        for j in 0..nb {
            let (a, b) = (da * i as f64, db * j as f64);
            let v = eval(a, b);
            if v < best.0 {
                best = (v, a, b);
            }
        }
    }
    // The refinement helper clips its first coordinate to [0, π], which
    // covers a ∈ [0, π/2] and its mirror image.
    let (a, b, v) = refine_angles(eval, (best.1, best.2), da, db, crate::oracle::REFINE_ROUNDS);
    Ok((mix(a, b), v))
}

/// Lowest level of `H` restricted to basis states of parity `even`, embedded
/// back into the full space. Only meaningful when `H` conserves `Π`.
pub fn sector_ground(h: &CMatrix, even: bool) -> Result<(f64, Vec<Complex>)> {
    let idx: Vec<usize> = (0..h.rows()).filter(|i| (i.count_ones() % 2 == 0) == even).collect();
    let block = CMatrix::from_fn(idx.len(), idx.len(), |a, b| h[(idx[a], idx[b])]);
    let g = ground_state(&block)?;
    let mut full = vec![ZERO; h.rows()];
    for (k, &i) in idx.iter().enumerate() {
        full[i] = g.vector[k];
    }
    Ok((g.energy, full))
}

/// Locates a field in `(h_lo, h_hi)` where the ground state factorizes.
///
/// XY chains conserve the parity `Π = Π_j σz_j`, so a nondegenerate ground
/// state is a parity eigenstate and an exact product ground state can only
/// appear where the lowest even and odd levels cross. The crossing is
/// bracketed by the sign of `E_even - E_odd` at the two ends and bisected (at
/// most 60 steps). At the crossing the least entangled vector in the span of
/// the two sector ground states must have site-0 tangle below `1e-8` and a
/// minimal kick energy below `1e-6`; otherwise `NotFound` is returned.
pub fn find_factorizing_field(template: &SpinChainSpec, h_lo: f64, h_hi: f64) -> Result<FactorizingField> {
    if !(h_lo < h_hi) {
        return Err(Error::InvalidInput(format!("empty field bracket ({h_lo}, {h_hi})")));
    }
    template.with_field(h_lo).validate()?;
    template.with_field(h_hi).validate()?;
    let splitting = |h: f64| -> Result<f64> {
        let ham = build_xy_hamiltonian(&template.with_field(h))?;
        Ok(sector_ground(&ham, true)?.0 - sector_ground(&ham, false)?.0)
    };
    let (mut lo, mut hi) = (h_lo, h_hi);
    let s_lo = splitting(lo)?;
    let s_hi = splitting(hi)?;
    if s_lo == 0.0 {
        hi = lo;
    } else if s_hi == 0.0 {
        lo = hi;
    } else if (s_lo > 0.0) == (s_hi > 0.0) {
        return Err(Error::NotFound(h_lo, h_hi));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = splitting(mid)?;
        if s == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (s > 0.0) == (s_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let field = 0.5 * (lo + hi);
    let h = build_xy_hamiltonian(&template.with_field(field))?;
    let (_, u1) = sector_ground(&h, true)?;
    let (_, u2) = sector_ground(&h, false)?;
    let (mut vector, tangle) = least_entangled_in_pair(&u1, &u2)?;
    normalize(&mut vector);
    phase_fix(&mut vector);
    let g = GroundStateResult {
        energy: energy_of(&h, &vector)?,
        vector: vector.clone(),
        gap: 0.0,
    };
    let min_de = min_excitation(&g, &h, 0)?.min_de;
    if tangle < FACTORIZED_TANGLE && min_de < FACTORIZED_DE {
        Ok(FactorizingField {
            field,
            vector,
            tangle,
            min_de,
        })
    } else {
        Err(Error::NotFound(h_lo, h_hi))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub h: f64,
    pub ground_energy: f64,
    pub tangle_site0: f64,
    pub min_de: f64,
}

/// Fields `h_min + k (h_max - h_min)/(steps - 1)`, endpoints included.
pub fn sweep_fields(h_min: f64, h_max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(h_min <= h_max) || !(h_min >= 0.0) || !h_max.is_finite() {
        return Err(Error::InvalidInput(format!("invalid sweep {h_min}..{h_max} in {steps} steps")));
    }
    if steps == 1 {
        return Ok(vec![h_min]);
    }
    Ok((0..steps)
        .map(|k| {
            if k + 1 == steps {
                h_max
            } else {
                h_min + (h_max - h_min) * k as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

pub fn sweep_point(template: &SpinChainSpec, h: f64) -> Result<SweepPoint> {
    let ham = build_xy_hamiltonian(&template.with_field(h))?;
    let g = ground_state(&ham)?;
    Ok(SweepPoint {
        h,
        ground_energy: g.energy,
        tangle_site0: site_tangle(&g.vector, 0)?,
        min_de: min_excitation(&g, &ham, 0)?.min_de,
    })
}

pub fn sweep(template: &SpinChainSpec, h_min: f64, h_max: f64, steps: usize) -> Result<Vec<SweepPoint>> {
    sweep_fields(h_min, h_max, steps)?
        .into_iter()
        .map(|h| sweep_point(template, h))
        .collect()
}

/// Header `h,ground_energy,tangle_site0,min_dE`, full round-trip precision.
pub fn write_sweep_csv(points: &[SweepPoint], mut out: impl Write) -> Result<()> {
    writeln!(out, "h,ground_energy,tangle_site0,min_dE")?;
    for p in points {
        writeln!(out, "{:e},{:e},{:e},{:e}", p.h, p.ground_energy, p.tangle_site0, p.min_de)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn open(n: usize, gamma: f64, h: f64) -> SpinChainSpec {
        SpinChainSpec {
            periodic: false,
            ..SpinChainSpec::new(n, gamma, h)
        }
    }

    fn pauli_string(n: usize, ops: &[(usize, &CMatrix)]) -> CMatrix {
        // Site 0 is the least significant bit, i.e. the rightmost factor.
        let mut m = CMatrix::identity(1);
        for site in (0..n).rev() {
            let f = ops.iter().find(|(s, _)| *s == site).map(|(_, o)| (*o).clone()).unwrap_or_else(|| CMatrix::identity(2));
            m = m.kron(&f);
        }
        m
    }

    fn paulis() -> [CMatrix; 3] {
        let i = Complex::new(0.0, 1.0);
        let one = Complex::new(1.0, 0.0);
        [
            CMatrix::new(2, 2, vec![ZERO, one, one, ZERO]).unwrap(),
            CMatrix::new(2, 2, vec![ZERO, -i, i, ZERO]).unwrap(),
            CMatrix::from_diag(&[1.0, -1.0]),
        ]
    }

    /// The Hamiltonian assembled from explicit Kronecker products.
    fn kron_hamiltonian(spec: &SpinChainSpec) -> CMatrix {
        let [x, y, z] = paulis();
        let n = spec.n_sites;
        let dim = 1 << n;
        let mut h = CMatrix::zeros(dim, dim);
        for (a, b) in spec.bonds() {
            let xx = pauli_string(n, &[(a, &x), (b, &x)]).scale(Complex::new(-spec.coupling * (1.0 + spec.gamma) / 2.0, 0.0));
            let yy = pauli_string(n, &[(a, &y), (b, &y)]).scale(Complex::new(-spec.coupling * (1.0 - spec.gamma) / 2.0, 0.0));
            h = h.add(&xx).unwrap().add(&yy).unwrap();
        }
        for s in 0..n {
            h = h.sub(&pauli_string(n, &[(s, &z)]).scale(Complex::new(spec.field, 0.0))).unwrap();
        }
        h
    }

    #[test]
    fn matches_kronecker_construction() {
        for spec in [open(3, 0.3, 0.7), SpinChainSpec::new(4, 0.5, 1.2), SpinChainSpec::new(2, 1.0, 0.2)] {
            let a = build_xy_hamiltonian(&spec).unwrap();
            let b = kron_hamiltonian(&spec);
            assert!(a.max_abs_diff(&b) < 1e-14);
            assert!(a.hermiticity_defect() < 1e-12);
        }
    }

    #[test]
    fn ising_pair_spectrum() {
        let h = build_xy_hamiltonian(&open(2, 1.0, 0.0)).unwrap();
        let v = herm_eig(&h).unwrap().values;
        for (got, want) in v.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn xx_chain_conserves_magnetization() {
        let spec = SpinChainSpec::new(5, 0.0, 0.8);
        let h = build_xy_hamiltonian(&spec).unwrap();
        let z = paulis()[2].clone();
        let mut mz = CMatrix::zeros(32, 32);
        for s in 0..5 {
            mz = mz.add(&pauli_string(5, &[(s, &z)])).unwrap();
        }
        let comm = h.matmul(&mz).unwrap().sub(&mz.matmul(&h).unwrap()).unwrap();
        assert!(comm.frobenius_norm() < 1e-10);
    }

    #[test]
    fn periodic_chain_is_translation_invariant() {
        let spec = SpinChainSpec::new(5, 0.4, 0.9);
        let h = build_xy_hamiltonian(&spec).unwrap();
        let shift = |idx: usize| ((idx << 1) | (idx >> 4)) & 31;
        for i in 0..32 {
            for j in 0..32 {
                assert_eq!(h[(i, j)], h[(shift(i), shift(j))]);
            }
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(matches!(build_xy_hamiltonian(&SpinChainSpec::new(11, 0.5, 1.0)), Err(Error::TooLarge(11))));
        assert!(build_xy_hamiltonian(&SpinChainSpec::new(4, 1.5, 1.0)).is_err());
        assert!(build_xy_hamiltonian(&SpinChainSpec::new(4, 0.5, -1.0)).is_err());
    }

    #[test]
    fn ground_state_of_diagonal() {
        let g = ground_state(&CMatrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(g.energy, 1.0);
        assert!((g.vector[1] - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((g.gap - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ising_pair_ground_doublet_is_deterministic() {
        let h = build_xy_hamiltonian(&open(2, 1.0, 0.0)).unwrap();
        let a = ground_state(&h).unwrap();
        let b = ground_state(&h).unwrap();
        assert_eq!(a, b);
        assert!(a.gap.abs() < 1e-12);
        assert!(a.vector.iter().find(|z| z.norm() > 1e-10).unwrap().im == 0.0);
    }

    #[test]
    fn ground_state_matches_dense_spectrum() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(6, 1.0, 0.5)).unwrap();
        let g = ground_state(&h).unwrap();
        let full = herm_eig(&h).unwrap();
        assert!((g.energy - full.values[0]).abs() < 1e-8);
        assert!(g.residual(&h).unwrap() <= 1e-8 * h.frobenius_norm());
    }

    #[test]
    fn power_iteration_above_dense_limit() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(9, 0.5, 1.5)).unwrap();
        let g = ground_state(&h).unwrap();
        assert!(g.residual(&h).unwrap() <= 1e-8 * one_norm(&h));
        let trial = MultiQubitState::haar_random(9, 1).unwrap();
        assert!(energy_of(&h, trial.amplitudes()).unwrap() >= g.energy);
        assert!(g.gap > 0.0);
        assert!(vec_norm(&g.vector) - 1.0 < 1e-12);
    }

    #[test]
    fn paramagnetic_limit() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(6, 0.5, 1e3)).unwrap();
        let g = ground_state(&h).unwrap();
        assert!(g.vector[0].norm_sqr() > 1.0 - 1e-4);
    }

    #[test]
    fn excitation_matches_explicit_products() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(6, 1.0, 0.5)).unwrap();
        let g = ground_state(&h).unwrap();
        let p = QubitUnitaryParams::new(FRAC_PI_2, 0.0);
        let de = excitation_energy(&g, &h, 0, p).unwrap();
        let o = pauli_string(6, &[(0, &build_squo(p))]);
        let oho = o.adjoint().matmul(&h).unwrap().matmul(&o).unwrap();
        let direct = energy_of(&oho, &g.vector).unwrap() - energy_of(&h, &g.vector).unwrap();
        assert!((de - direct).abs() < 1e-10);
        assert!(de > 0.0);
    }

    #[test]
    fn excitation_is_non_negative() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(5, 0.5, 0.7)).unwrap();
        let g = ground_state(&h).unwrap();
        for site in 0..5 {
            for k in 0..20 {
                let p = QubitUnitaryParams::new(PI * k as f64 / 19.0, 0.9 * k as f64);
                assert!(excitation_energy(&g, &h, site, p).unwrap() >= -1e-9);
            }
        }
        assert!(matches!(excitation_energy(&g, &h, 5, QubitUnitaryParams::new(0.0, 0.0)), Err(Error::BadSite { .. })));
    }

    #[test]
    fn product_ground_state_is_invariant_under_sigma_z() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(6, 0.0, 1e3)).unwrap();
        let g = ground_state(&h).unwrap();
        assert!((g.vector[0] - Complex::new(1.0, 0.0)).norm() < 1e-12);
        let de = excitation_energy(&g, &h, 0, QubitUnitaryParams::new(0.0, 0.0)).unwrap();
        assert!(de.abs() < 1e-9);
        assert!(min_excitation(&g, &h, 0).unwrap().min_de < 1e-6);
    }

    #[test]
    fn min_excitation_matches_smallest_form_eigenvalue() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(6, 1.0, 0.5)).unwrap();
        let g = ground_state(&h).unwrap();
        let (k, e0) = excitation_form(&g, &h, 0).unwrap();
        let km = CMatrix::from_fn(3, 3, |a, b| Complex::new(k[a][b], 0.0));
        let lowest = herm_eig(&km).unwrap().values[0] - e0;
        let m = min_excitation(&g, &h, 0).unwrap();
        assert!((m.min_de - lowest).abs() < 1e-9);
        assert!(m.min_de > 1e-3);
        assert!(site_tangle(&g.vector, 0).unwrap() > 1e-3);
        let direct = excitation_energy(&g, &h, 0, m.argmin).unwrap();
        assert!((direct - m.min_de).abs() < 1e-10);
    }

    #[test]
    fn min_excitation_is_site_independent_on_rings() {
        let h = build_xy_hamiltonian(&SpinChainSpec::new(6, 0.5, 1.3)).unwrap();
        let g = ground_state(&h).unwrap();
        let m0 = min_excitation(&g, &h, 0).unwrap().min_de;
        for site in 1..6 {
            assert!((min_excitation(&g, &h, site).unwrap().min_de - m0).abs() < 1e-8);
        }
    }

    #[test]
    fn factorizing_field_small_chain() {
        let spec = SpinChainSpec::new(4, 0.5, 0.0);
        let f = find_factorizing_field(&spec, 0.75, 1.0).unwrap();
        assert!((f.field - (1.0f64 - 0.25).sqrt()).abs() < 1e-9);
        assert!(f.tangle < 1e-8 && f.min_de < 1e-6);
        assert!(find_factorizing_field(&spec, 0.5, 0.5).is_err());
    }

    #[test]
    fn parity_of_basis_states() {
        let mut v = vec![ZERO; 8];
        v[3] = Complex::new(1.0, 0.0);
        assert_eq!(parity(&v), 1.0);
        v[3] = ZERO;
        v[4] = Complex::new(1.0, 0.0);
        assert_eq!(parity(&v), -1.0);
    }

    #[test]
    fn sweep_layout() {
        let pts = sweep(&SpinChainSpec::new(3, 0.5, 0.0), 0.0, 1.0, 3).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2].h, 1.0);
        let mut buf = Vec::new();
        write_sweep_csv(&pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "h,ground_energy,tangle_site0,min_dE");
        assert_eq!(text.lines().count(), 4);
        assert!(sweep_fields(1.0, 0.0, 5).is_err());
    }
}
