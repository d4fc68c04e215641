//! Spectra at |U| = 1 from the effective-oscillator self-consistency
//! condition
//!
//! ```text
//! ((E + 1 − Δ/2)(E + Δ/2) − 2κα²) / (E + Δ/2 + 2κ²α²)
//!     = (2n+1) √((E + Δ/2 + 2α²) / (E + Δ/2 + 2κ²α²))
//! ```
//!
//! written for U = +1; U = −1 follows from (Δ, κ) → (−Δ, −κ). Levels split
//! into a lower branch below `E_c = −Δ/2 − 2α²`, which exists only for
//! α < α_c = √((1 − Δ + κ)/2), and an upper branch above `−Δ/2 − 2κ²α²`.
//!
//! The lower branch is solved in `x = E_c − E` and the upper one in
//! `z = E + Δ/2 + 2κ²α²`, so that levels crowding against a branch edge keep
//! full relative precision.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{ModelParams, Regime, StarkSign};
use crate::roots::{bisect, Midpoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct U1Params {
    pub delta: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub sign: StarkSign,
}

impl U1Params {
    pub fn new(delta: f64, alpha: f64, kappa: f64, sign: StarkSign) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "must be finite",
            });
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be finite and non-negative",
            });
        }
        if !(kappa.is_finite() && kappa.abs() <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must lie in [-1, 1]",
            });
        }
        Ok(U1Params {
            delta,
            alpha,
            kappa,
            sign,
        })
    }

    pub fn from_model(params: &ModelParams) -> Result<Self> {
        let Regime::UnityStark(sign) = params.regime() else {
            return Err(Error::InvalidParameter {
                name: "stark_u",
                value: params.stark_u,
                reason: "the effective-oscillator solution needs |U| = 1",
            });
        };
        let (alpha, kappa) = params.to_alpha_kappa()?;
        U1Params::new(params.delta, alpha, kappa, sign)
    }

    pub fn to_model(&self) -> Result<ModelParams> {
        ModelParams::from_alpha_kappa(self.delta, self.alpha, self.kappa, self.sign.value())
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        U1Params { alpha, ..*self }
    }

    /// `(Δ, κ)` as seen by the U = +1 formulas.
    pub fn effective(&self) -> (f64, f64) {
        match self.sign {
            StarkSign::Plus => (self.delta, self.kappa),
            StarkSign::Minus => (-self.delta, -self.kappa),
        }
    }

    /// Upper edge of the lower branch, `E_c = ∓Δ/2 − 2α²`.
    pub fn lower_edge(&self) -> f64 {
        let (d, _) = self.effective();
        -0.5 * d - 2.0 * self.alpha * self.alpha
    }

    /// Lower edge of the upper branch, `∓Δ/2 − 2κ²α²`.
    pub fn upper_edge(&self) -> f64 {
        let (d, k) = self.effective();
        -0.5 * d - 2.0 * k * k * self.alpha * self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Lower,
    Upper,
}

/// `(1 − Δ + κ)/2` in effective variables.
pub fn critical_radicand(p: &U1Params) -> f64 {
    let (d, k) = p.effective();
    0.5 * (1.0 - d + k)
}

/// Coupling at which the lower branch closes.
pub fn critical_alpha(p: &U1Params) -> Result<f64> {
    let rad = critical_radicand(p);
    if rad < 0.0 {
        return Err(Error::NoTransition { radicand: rad });
    }
    Ok(rad.sqrt())
}

/// Left side minus right side of the self-consistency condition.
pub fn self_consistency_residual(p: &U1Params, n: usize, energy: f64) -> f64 {
    let (d, k) = p.effective();
    let a2 = p.alpha * p.alpha;
    let y = energy + 0.5 * d;
    let lhs = ((energy + 1.0 - 0.5 * d) * y - 2.0 * k * a2) / (y + 2.0 * k * k * a2);
    let rhs = (2 * n + 1) as f64 * ((y + 2.0 * a2) / (y + 2.0 * k * k * a2)).sqrt();
    lhs - rhs
}

/// `√((1 + 2α²/y) / (1 + 2κ²α²/y))` with `y = E ± Δ/2`.
pub fn effective_frequency(p: &U1Params, energy: f64) -> Result<f64> {
    let (d, k) = p.effective();
    let a2 = p.alpha * p.alpha;
    let y = energy + 0.5 * d;
    let ratio = (1.0 + 2.0 * a2 / y) / (1.0 + 2.0 * k * k * a2 / y);
    if !(ratio >= 0.0) || !ratio.is_finite() {
        return Err(Error::ComplexFrequency { energy });
    }
    Ok(ratio.sqrt())
}

/// `E_c − E` of lower-branch level `n`.
pub fn lower_offset(p: &U1Params, n: usize) -> Result<f64> {
    let (_, k) = p.effective();
    let a = p.alpha;
    if a == 0.0 {
        return Ok(0.0);
    }
    let ac = critical_alpha(p)?;
    if a >= ac {
        return Err(Error::NoRealSolution {
            alpha: a,
            critical: ac,
        });
    }
    let a2 = a * a;
    let b = 2.0 * (ac - a) * (ac + a);
    let c = 2.0 * a2 * (1.0 - k) * (1.0 + k);
    let order = (2 * n + 1) as f64;
    let resid = |x: f64| -> f64 {
        2.0 * a2 * b + (b - k - 2.0 * a2 - x) * x - order * (x * (x + c)).sqrt()
    };
    let mut hi = 50.0 * (1.0 + p.delta.abs() + a2);
    while resid(hi) >= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::BranchEmpty);
        }
    }
    let lo = f64::MIN_POSITIVE;
    let f_lo = resid(lo);
    if f_lo <= 0.0 {
        return Ok(0.0);
    }
    let r = bisect(
        |x| Ok::<_, Error>(resid(x)),
        lo,
        hi,
        f_lo,
        resid(hi),
        0.0,
        Midpoint::Geometric,
        4000,
    )?;
    Ok(r.root)
}

/// `E − (∓Δ/2 − 2κ²α²)` of upper-branch level `n`; the largest root.
pub fn upper_offset(p: &U1Params, n: usize) -> Result<f64> {
    let (d, k) = p.effective();
    let a2 = p.alpha * p.alpha;
    let shift = 2.0 * k * k * a2;
    let c = 2.0 * a2 * (1.0 - k) * (1.0 + k);
    let order = (2 * n + 1) as f64;
    let resid = |z: f64| -> f64 {
        let y = z - shift;
        y * y + (1.0 - d) * y - 2.0 * k * a2 - order * (z * (z + c)).sqrt()
    };
    let mut top = 4.0 * (1.0 + shift + (1.0 - d).abs() + order + c + 2.0 * k.abs() * a2);
    while resid(top) <= 0.0 || resid(2.0 * top) <= 0.0 {
        top *= 2.0;
        if !top.is_finite() {
            return Err(Error::BranchEmpty);
        }
    }
    const GRID: usize = 4000;
    let bottom = 1e-14 * top;
    let ratio = (top / bottom).ln();
    let zs: Vec<f64> = (0..GRID)
        .map(|i| bottom * (ratio * i as f64 / (GRID - 1) as f64).exp())
        .collect();
    let fs: Vec<f64> = zs.iter().map(|&z| resid(z)).collect();
    let i = (0..GRID - 1)
        .rev()
        .find(|&i| fs[i].signum() != fs[i + 1].signum() || fs[i] == 0.0)
        .ok_or(Error::BranchEmpty)?;
    let r = bisect(
        |z| Ok::<_, Error>(resid(z)),
        zs[i],
        zs[i + 1],
        fs[i],
        fs[i + 1],
        0.0,
        Midpoint::Geometric,
        4000,
    )?;
    Ok(r.root)
}

/// Energy of level `n` on a branch.
pub fn self_consistent_level(p: &U1Params, n: usize, branch: Branch) -> Result<f64> {
    match branch {
        Branch::Lower => Ok(p.lower_edge() - lower_offset(p, n)?),
        Branch::Upper => Ok(p.upper_edge() + upper_offset(p, n)?),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSpectrum {
    pub branch: Branch,
    pub alpha: f64,
    /// `(n, E_n)`; empty for the lower branch at or beyond α_c.
    pub levels: Vec<(usize, f64)>,
    pub critical_alpha: Option<f64>,
    /// Edge the branch accumulates against.
    pub upper_bound: f64,
}

pub fn branch_spectrum(p: &U1Params, branch: Branch, n_levels: usize) -> Result<BranchSpectrum> {
    let critical = critical_alpha(p).ok();
    let mut levels = Vec::with_capacity(n_levels);
    for n in 0..n_levels {
        match self_consistent_level(p, n, branch) {
            Ok(e) => levels.push((n, e)),
            Err(Error::NoRealSolution { .. } | Error::NoTransition { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let upper_bound = match branch {
        Branch::Lower => p.lower_edge(),
        Branch::Upper => p.upper_edge(),
    };
    Ok(BranchSpectrum {
        branch,
        alpha: p.alpha,
        levels,
        critical_alpha: critical,
        upper_bound,
    })
}

pub fn branch_sweep(
    base: &U1Params,
    alphas: &[f64],
    branch: Branch,
    n_levels: usize,
    exec: Execution,
) -> Vec<Result<BranchSpectrum>> {
    exec.map(alphas, |&a| {
        branch_spectrum(&base.with_alpha(a), branch, n_levels)
    })
}

fn require_rwa(p: &U1Params) -> Result<()> {
    let (_, k) = p.effective();
    if k != 1.0 {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: p.kappa,
            reason: "closed form needs kappa = 1 (U = +1) or kappa = -1 (U = -1)",
        });
    }
    Ok(())
}

/// `n(Δ + 4α²) + Δ²/4 + 4α²`
fn rwa_b(d: f64, a2: f64, n: f64) -> f64 {
    n * (d + 4.0 * a2) + 0.25 * d * d + 4.0 * a2
}

/// `√(n² + B_n) − n`, the magnitude of `E_n^−`.
fn rwa_h(d: f64, a2: f64, n: f64) -> f64 {
    let b = rwa_b(d, a2, n);
    if n == 0.0 {
        return b.sqrt();
    }
    b / (n + (n * n + b).sqrt())
}

/// `E_n^± = n ± √(n² + (Δ/2 + 2n)Δ/2 + 4α²(n+1))`.
pub fn rwa_level(p: &U1Params, n: usize, branch: Branch) -> Result<f64> {
    require_rwa(p)?;
    let (d, _) = p.effective();
    let a2 = p.alpha * p.alpha;
    let nf = n as f64;
    Ok(match branch {
        Branch::Lower => -rwa_h(d, a2, nf),
        Branch::Upper => nf + (nf * nf + rwa_b(d, a2, nf)).sqrt(),
    })
}

/// `E_{n−1}^− − E_n^−` without cancellation, `n >= 1`.
pub fn rwa_lower_step(p: &U1Params, n: usize) -> Result<f64> {
    require_rwa(p)?;
    let (d, _) = p.effective();
    let a2 = p.alpha * p.alpha;
    let (n1, n0) = (n as f64, (n - 1) as f64);
    let (h1, h0) = (rwa_h(d, a2, n1), rwa_h(d, a2, n0));
    Ok((d + 4.0 * a2 - h1 - h0) / (2.0 * n1 - 1.0 + h1 + h0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroundIndex {
    Finite(usize),
    /// Still decreasing at `n_max`; the infimum is the branch edge.
    Unbounded,
    /// At α_c the lower branch is flat to first order.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RwaGround {
    pub index: GroundIndex,
    pub energy: f64,
}

/// Minimum of `E_n^−` over `n <= n_max`.
pub fn rwa_ground_index(p: &U1Params, n_max: usize) -> Result<RwaGround> {
    require_rwa(p)?;
    if n_max < 1 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let ac = critical_alpha(p)?;
    let edge = p.lower_edge();
    if (p.alpha - ac).abs() <= 1e-12 * ac.max(1.0) {
        return Ok(RwaGround {
            index: GroundIndex::Degenerate,
            energy: edge,
        });
    }
    let mut best = (0, rwa_level(p, 0, Branch::Lower)?);
    let mut decreasing = true;
    for n in 1..=n_max {
        if rwa_lower_step(p, n)? <= 0.0 {
            decreasing = false;
        }
        let e = rwa_level(p, n, Branch::Lower)?;
        if e < best.1 {
            best = (n, e);
        }
    }
    if decreasing && edge < best.1 {
        return Ok(RwaGround {
            index: GroundIndex::Unbounded,
            energy: edge,
        });
    }
    Ok(RwaGround {
        index: GroundIndex::Finite(best.0),
        energy: best.1,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapFit {
    /// `(α, E₁ − E₀)`
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    /// Standard error of the slope.
    pub slope_stderr: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Log-log fit of the lower-branch gap against `α_c − α`, with samples
/// log-spaced in `α_c − α` across `window`.
pub fn gap_fit(
    p: &U1Params,
    window: (f64, f64),
    n_samples: usize,
    exec: Execution,
) -> Result<GapFit> {
    if n_samples < 8 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: n_samples as f64,
            reason: "at least 8 samples are required",
        });
    }
    let ac = critical_alpha(p)?;
    let (a_min, a_max) = window;
    if !(a_min > 0.0 && a_min < a_max) {
        return Err(Error::InvalidParameter {
            name: "window",
            value: a_max - a_min,
            reason: "needs 0 < alpha_min < alpha_max",
        });
    }
    if a_max >= ac {
        return Err(Error::NoRealSolution {
            alpha: a_max,
            critical: ac,
        });
    }
    let (d_far, d_near) = ((ac - a_min).ln(), (ac - a_max).ln());
    let deltas: Vec<f64> = (0..n_samples)
        .map(|i| (d_far + (d_near - d_far) * i as f64 / (n_samples - 1) as f64).exp())
        .collect();
    let gaps = exec.map(&deltas, |&delta| -> Result<f64> {
        let q = p.with_alpha(ac - delta);
        Ok(lower_offset(&q, 0)? - lower_offset(&q, 1)?)
    });
    let mut samples = Vec::with_capacity(n_samples);
    let mut xs = Vec::with_capacity(n_samples);
    let mut ys = Vec::with_capacity(n_samples);
    for (delta, gap) in deltas.iter().zip(gaps) {
        let gap = gap?;
        samples.push((ac - delta, gap));
        xs.push(delta.ln());
        ys.push(gap.ln());
    }
    let (slope, intercept, r_squared, slope_stderr) = least_squares(&xs, &ys);
    Ok(GapFit {
        samples,
        slope,
        slope_stderr,
        intercept,
        r_squared,
        window,
    })
}

/// Ordinary least squares `y = slope·x + intercept`: slope, intercept, R²
/// and the standard error of the slope.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    let ss_res = (syy - slope * sxy).max(0.0);
    let stderr = if n > 2.0 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (slope, intercept, r_squared, stderr)
}
