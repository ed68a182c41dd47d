//! The admissible region of (von Neumann entropy, linear entropy) pairs for
//! qutrit reductions.
//!
//! At fixed entropy `E` the linear entropy of a qutrit spectrum is bounded
//! below by spectra `(p, p, 1-2p)` and above by `(0, q, 1-q)` for `E ≤ 1`
//! and by `(1-2q, q, q)` for `E ≥ 1`. The two upper families meet at the
//! cusp `(1, 3/4)`, spectrum `(0, 1/2, 1/2)`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// One point of a boundary curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub param: f64,
    pub entropy: f64,
    pub linear_entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCurves {
    pub lower: Vec<CurvePoint>,
    pub upper_left: Vec<CurvePoint>,
    pub upper_right: Vec<CurvePoint>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub inside: bool,
    /// Signed distance in `S_L` to the nearer bound; negative outside.
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    Lower,
    UpperLeft,
    UpperRight,
}

impl Curve {
    pub fn name(self) -> &'static str {
        match self {
            Curve::Lower => "lower",
            Curve::UpperLeft => "upper_left",
            Curve::UpperRight => "upper_right",
        }
    }

    /// Parameter range, start to end.
    pub fn range(self) -> (f64, f64) {
        match self {
            Curve::Lower => (0.0, 1.0 / 3.0),
            Curve::UpperLeft => (0.0, 0.5),
            Curve::UpperRight => (1.0 / 3.0, 0.5),
        }
    }

    pub fn spectrum(self, t: f64) -> [f64; 3] {
        match self {
            Curve::Lower => [t, t, 1.0 - 2.0 * t],
            Curve::UpperLeft => [0.0, t, 1.0 - t],
            Curve::UpperRight => [1.0 - 2.0 * t, t, t],
        }
    }

    pub fn point(self, t: f64) -> CurvePoint {
        let g = self.spectrum(t);
        CurvePoint {
            param: t,
            entropy: spectrum_entropy(&g),
            linear_entropy: spectrum_linear_entropy(&g),
        }
    }
}

/// `-Σ γ log₂ γ`.
pub fn spectrum_entropy(g: &[f64]) -> f64 {
    g.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `(3/2)(1 - Σ γ²)` for a qutrit spectrum.
pub fn spectrum_linear_entropy(g: &[f64]) -> f64 {
    (1.5 * (1.0 - g.iter().map(|x| x * x).sum::<f64>())).clamp(0.0, 1.0)
}

pub fn max_entropy() -> f64 {
    3f64.log2()
}

/// `n_points` evenly spaced parameters per curve, endpoints included.
pub fn generate_curves(n_points: usize) -> Result<BoundaryCurves> {
    if n_points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 points per curve, got {n_points}")));
    }
    let sample = |c: Curve| {
        let (a, b) = c.range();
        (0..n_points)
            .map(|k| {
                let t = if k + 1 == n_points {
                    b
                } else {
                    a + (b - a) * k as f64 / (n_points - 1) as f64
                };
                c.point(t)
            })
            .collect()
    };
    Ok(BoundaryCurves {
        lower: sample(Curve::Lower),
        upper_left: sample(Curve::UpperLeft),
        upper_right: sample(Curve::UpperRight),
    })
}

/// Parameter on `curve` with entropy `e`, by bisection to full precision.
/// The entropy is monotone along every curve.
fn solve_param(curve: Curve, e: f64) -> f64 {
    let (mut lo, mut hi) = curve.range();
    let increasing = curve.point(hi).entropy > curve.point(lo).entropy;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let below = curve.point(mid).entropy < e;
        if below == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `[S_min(E), S_max(E)]`.
pub fn linear_entropy_bounds(e: f64) -> Result<(f64, f64)> {
    if !e.is_finite() || e < 0.0 || e > max_entropy() {
        return Err(Error::OutOfRange(e));
    }
    let s_min = Curve::Lower.point(solve_param(Curve::Lower, e)).linear_entropy;
    let upper = if e <= 1.0 { Curve::UpperLeft } else { Curve::UpperRight };
    let s_max = upper.point(solve_param(upper, e)).linear_entropy;
    Ok((s_min, s_max))
}

/// Whether `(e, s_l)` is an admissible qutrit point, with slack `tol` in both
/// coordinates. Entropies within `tol` outside `[0, log₂3]` are clamped.
pub fn region_test(e: f64, s_l: f64, tol: f64) -> Result<RegionVerdict> {
    if !e.is_finite() || e < -tol || e > max_entropy() + tol {
        return Err(Error::OutOfRange(e));
    }
    let (s_min, s_max) = linear_entropy_bounds(e.clamp(0.0, max_entropy()))?;
    Ok(RegionVerdict {
        inside: s_l >= s_min - tol && s_l <= s_max + tol,
        margin: (s_l - s_min).min(s_max - s_l),
    })
}

/// Header `curve,param,E,SL`, then lower, upper_left and upper_right rows,
/// numbers with 12 significant digits.
pub fn write_csv(curves: &BoundaryCurves, mut out: impl Write) -> Result<()> {
    writeln!(out, "curve,param,E,SL")?;
    for (curve, points) in [
        (Curve::Lower, &curves.lower),
        (Curve::UpperLeft, &curves.upper_left),
        (Curve::UpperRight, &curves.upper_right),
    ] {
        for p in points {
            writeln!(
                out,
                "{},{:.11e},{:.11e},{:.11e}",
                curve.name(),
                p.param,
                p.entropy,
                p.linear_entropy
            )?;
        }
    }
    Ok(())
}
