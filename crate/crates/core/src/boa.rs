//! Displaced-oscillator expansion and the G-function for |U| < 1.
//!
//! In the rotated spin frame the eigenstate is expanded in number states of
//! `A = a + w`, with coefficients `e_n` (upper) and `f_n` (lower). Projecting
//! the Schrödinger equation on `⟨m|` gives two coupled equations per `m`
//! (called the upper and lower projections below). A combination of the two
//! that cancels the `e_{m+1}` term fixes `w = β/√(1−U²)` and yields `e_m` from
//! `f_m`; the lower projection at `m−1` then yields `f_m`. Starting from
//! `f_0 = 1` every coefficient follows. Matching the A- and B-expansions at
//! the vacuum gives
//!
//! ```text
//! G_odd(E)  = Σ (e_n + f_n) wⁿ
//! G_even(E) = Σ (e_n − f_n) wⁿ
//! ```
//!
//! whose zeros are the regular spectrum of each parity sector.

use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Parity};

/// Minimum distance in energy to a pole before a denominator is refused.
pub const DEFAULT_POLE_GUARD: f64 = 1e-8;
pub const DEFAULT_MAX_TERMS: usize = 600;
pub const DEFAULT_SERIES_TOL: f64 = 1e-15;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-9;
/// Distance to a pole below which values are flagged as near-pole.
pub const DEFAULT_NEAR_POLE_BAND: f64 = 1e-6;
/// |G| below which an energy counts as a root for eigenvector extraction.
pub const DEFAULT_G_ROOT_TOL: f64 = 1e-7;

/// Consecutive small terms required before the series counts as converged.
const CONSECUTIVE_SMALL: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    /// Upper bound on the number of coefficients computed; at least 8.
    pub max_terms: usize,
    /// Relative size of a term below which it counts as negligible.
    pub tol: f64,
    pub pole_guard: f64,
    pub residual_tol: f64,
    pub near_pole_band: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            max_terms: DEFAULT_MAX_TERMS,
            tol: DEFAULT_SERIES_TOL,
            pole_guard: DEFAULT_POLE_GUARD,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            near_pole_band: DEFAULT_NEAR_POLE_BAND,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxTerms,
    /// Converged, but some denominator was inside the near-pole band.
    PoleProximity,
}

/// Expansion coefficients `e_0..e_N`, `f_0..f_N` at one energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub energy: f64,
    pub w: f64,
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    /// Index of the last coefficient used.
    pub n_used: usize,
    pub terminated_on: Termination,
    /// Largest normalised residual of the two projections.
    pub max_residual: f64,
    /// Distance in energy to the closest pole met while computing.
    pub pole_distance: f64,
}

impl CoefficientTable {
    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    /// `(Σ e_n wⁿ, Σ f_n wⁿ)` and the magnitude of the last retained term.
    pub fn vacuum_sums(&self) -> (f64, f64, f64) {
        let mut se = 0.0;
        let mut sf = 0.0;
        let mut wn = 1.0;
        let mut last = 0.0;
        for (e, f) in self.e.iter().zip(&self.f) {
            se += e * wn;
            sf += f * wn;
            last = (e * wn).abs() + (f * wn).abs();
            wn *= self.w;
        }
        (se, sf, last)
    }

    pub fn g_value(&self, parity: Parity) -> f64 {
        let (se, sf, _) = self.vacuum_sums();
        combine(se, sf, parity)
    }

    /// Coefficients of the same state expanded in `B = a − w` number states,
    /// `((−1)ⁿ f_n, (−1)ⁿ e_n)` for the upper and lower components.
    pub fn b_expansion(&self) -> (Vec<f64>, Vec<f64>) {
        let sign = |n: usize| if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let upper = self
            .f
            .iter()
            .enumerate()
            .map(|(n, f)| sign(n) * f)
            .collect();
        let lower = self
            .e
            .iter()
            .enumerate()
            .map(|(n, e)| sign(n) * e)
            .collect();
        (upper, lower)
    }
}

fn combine(se: f64, sf: f64, parity: Parity) -> f64 {
    match parity {
        Parity::Odd => se + sf,
        Parity::Even => se - sf,
    }
}

/// One G-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GValue {
    pub value: f64,
    pub parity: Parity,
    /// Magnitude of the last retained series term.
    pub truncation_estimate: f64,
    pub near_pole: bool,
    pub terms: usize,
}

/// Arithmetic the recurrences run in: `f64`, or double-double when an
/// eigenvector has to be resolved past double precision.
pub(crate) trait Real:
    Copy
    + PartialOrd
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    /// Nearest `f64`.
    fn hi(self) -> f64;
}

impl Real for f64 {
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn hi(self) -> f64 {
        self
    }
}

/// Double-double scalar. Division is done by long division on top of the
/// crate's error-free products, since `TwoFloat / TwoFloat` only attains
/// double precision when the divisor has an empty low word.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub(crate) struct Dd(TwoFloat);

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let b = rhs.0;
        let q1 = self.0.hi() / b.hi();
        let r = self.0 - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Real for Dd {
    fn sqrt(self) -> Self {
        Dd(self.0.sqrt())
    }
    fn abs(self) -> Self {
        Dd(self.0.abs())
    }
    fn hi(self) -> f64 {
        self.0.hi() + self.0.lo()
    }
}

/// Precomputed constants of the coefficient recurrences at fixed parameters.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Recurrence<T = f64> {
    half_delta: T,
    u: T,
    beta: T,
    w: T,
    w_sq: T,
    /// w + β
    w_plus_beta: T,
    /// w − β, evaluated without cancellation.
    w_minus_beta: T,
    /// U w
    uw: T,
    /// λ₊/β
    lp_b: T,
    /// λ₋/β
    lm_b: T,
    /// (λ₊ + β²)/β
    kp: T,
    /// e_{m−1} coefficient in the e_m relation.
    x_coef: T,
    /// f_{m−1} coefficient in the e_m relation.
    y_coef: T,
    /// d/dE of the cleared f_m denominator.
    f_den_slope: T,
    stark_sq: T,
    lambda_plus: T,
}

impl<T: Real> Recurrence<T> {
    pub(crate) fn new(params: &ModelParams) -> Result<Self> {
        params.derive()?;
        let c = |x: f64| T::from(x);
        let (g1, g2) = (c(params.g1), c(params.g2));
        let u = c(params.stark_u);
        let one = c(1.0);
        let half = c(0.5);
        let lambda_plus = half * (g1 * g1 + g2 * g2);
        let lambda_minus = half * (g1 * g1 - g2 * g2);
        let stark_sq = (one - u) * (one + u);
        let s = stark_sq.sqrt();
        let beta = (g1 * g2).sqrt();
        let w = beta / s;
        let w_plus_beta = w + beta;
        let w_minus_beta = beta * u * u / (s * (one + s));
        let uw = u * w;
        let lp_b = lambda_plus / beta;
        let lm_b = lambda_minus / beta;
        let kp = lp_b + beta;
        let x_coef = (lambda_plus - beta * beta) / beta + uw * lm_b / w_plus_beta;
        let y_coef = lm_b + uw * (lambda_plus - beta * beta) / (beta * w_plus_beta);
        Ok(Recurrence {
            half_delta: half * c(params.delta),
            u,
            beta,
            w,
            w_sq: w * w,
            w_plus_beta,
            w_minus_beta,
            uw,
            lp_b,
            lm_b,
            kp,
            x_coef,
            y_coef,
            f_den_slope: uw * uw / w_plus_beta + w_plus_beta,
            stark_sq,
            lambda_plus,
        })
    }

    fn gamma(&self, m: usize) -> T {
        T::from(m as f64) + self.w_sq
    }

    /// Denominator of the e_m relation (Θ).
    pub(crate) fn theta(&self, m: usize, energy: T) -> T {
        let g = self.gamma(m);
        g - self.kp * self.w
            - energy
            - self.uw / self.w_plus_beta * (self.half_delta + self.u * g + self.lm_b * self.w)
    }

    /// f_m coefficient in the numerator of the e_m relation.
    fn numer(&self, m: usize, energy: T) -> T {
        let g = self.gamma(m);
        self.half_delta - self.lm_b * self.w + self.u * g
            - self.uw / self.w_plus_beta * (g + self.kp * self.w - energy)
    }

    /// Θ-cleared coefficient of f_m; linear in E with its zero at E_m^pole.
    fn f_denominator(&self, m: usize, energy: T) -> T {
        self.uw * self.numer(m, energy) - self.w_plus_beta * self.theta(m, energy)
    }

    pub(crate) fn regular_pole(&self, m: usize) -> T {
        self.stark_sq * T::from(m as f64) - self.lambda_plus - self.u * self.half_delta
    }

    /// `R_m`: the e_{m−1}, f_{m−1} part of the e_m numerator.
    fn r_term(&self, e_prev: T, f_prev: T) -> T {
        self.y_coef * f_prev - self.x_coef * e_prev
    }

    /// Lower projection at m−1 without its `e_m`, `f_m` pieces.
    fn s_term(&self, m: usize, energy: T, e1: T, f1: T, e2: T, f2: T) -> T {
        let g = self.gamma(m - 1);
        let pe = -self.half_delta - self.u * g - self.lm_b * self.w;
        let pf = g + self.kp * self.w - energy;
        pe * e1 + (self.lm_b + self.uw) * e2 + pf * f1 - (self.lp_b + self.w) * f2
    }

    /// Value at E = E_m^pole of the quantity that must vanish for f_m to stay
    /// finite there (the pole is lifted), and the scale of its terms. Uses
    /// coefficients up to m−1.
    pub(crate) fn lifting_residual(&self, m: usize, e: &[T], f: &[T]) -> (f64, f64) {
        debug_assert!(m >= 1 && e.len() >= m && f.len() >= m);
        let energy = self.regular_pole(m);
        let zero = T::from(0.0);
        let (e1, f1) = (e[m - 1], f[m - 1]);
        let (e2, f2) = if m >= 2 {
            (e[m - 2], f[m - 2])
        } else {
            (zero, zero)
        };
        let s = self.s_term(m, energy, e1, f1, e2, f2);
        let r = self.r_term(e1, f1);
        let n = self.numer(m, energy);
        let mf = T::from(m as f64);
        let a = s * n;
        let b = mf * self.w_plus_beta * r;
        ((a + b).hi(), a.abs().hi() + b.abs().hi())
    }

    /// `(e_m, f_m, distance to E_m^pole)` from the coefficients below `m`.
    fn next_pair(
        &self,
        m: usize,
        energy: T,
        e: &[T],
        f: &[T],
        pole_guard: f64,
    ) -> Result<(T, T, f64)> {
        let mf = T::from(m as f64);
        let den = self.f_denominator(m, energy);
        let dist = (den.abs() / self.f_den_slope).hi();
        if dist < pole_guard {
            return Err(Error::PoleHit {
                energy: energy.hi(),
                pole: self.regular_pole(m).hi(),
                index: m,
                distance: dist,
            });
        }
        let zero = T::from(0.0);
        let (e1, f1) = (e[m - 1], f[m - 1]);
        let (e2, f2) = if m >= 2 {
            (e[m - 2], f[m - 2])
        } else {
            (zero, zero)
        };
        let theta = self.theta(m, energy);
        let r = self.r_term(e1, f1);
        let s = self.s_term(m, energy, e1, f1, e2, f2);
        let fm = -(s * theta + self.uw * mf * r) / (mf * den);
        let use_lower = self.uw.hi() != 0.0 && theta.abs().hi() < 1e-3 * (1.0 + self.gamma(m).hi());
        let em = if use_lower {
            (self.w_plus_beta * mf * fm - s) / (self.uw * mf)
        } else {
            (self.numer(m, energy) * fm + r) / theta
        };
        if !em.hi().is_finite() || !fm.hi().is_finite() {
            return Err(Error::NotConverged {
                terms: m,
                last_term: f64::INFINITY,
            });
        }
        Ok((em, fm, dist))
    }

    /// `(e_0, distance to the first pole)`.
    fn first_pair(&self, energy: T, pole_guard: f64) -> Result<T> {
        let d0 = self.theta(0, energy);
        if d0.abs().hi() < pole_guard {
            return Err(Error::PoleHit {
                energy: energy.hi(),
                pole: (energy + d0).hi(),
                index: 0,
                distance: d0.abs().hi(),
            });
        }
        Ok(self.numer(0, energy) / d0)
    }

    /// `e_0..e_{count−1}`, `f_0..f_{count−1}` at `energy` with no
    /// convergence test.
    pub(crate) fn leading_coefficients(
        &self,
        energy: T,
        count: usize,
        pole_guard: f64,
    ) -> Result<(Vec<T>, Vec<T>)> {
        let mut e = vec![self.first_pair(energy, pole_guard)?];
        let mut f = vec![T::from(1.0)];
        for m in 1..count {
            let (em, fm, _) = self.next_pair(m, energy, &e, &f, pole_guard)?;
            e.push(em);
            f.push(fm);
        }
        Ok((e, f))
    }

    /// Normalised lifting residual of pole `m` at the current parameters.
    pub(crate) fn lifting_residual_at_pole(&self, m: usize, pole_guard: f64) -> Result<f64> {
        let (e, f) = self.leading_coefficients(self.regular_pole(m), m, pole_guard)?;
        let (value, scale) = self.lifting_residual(m, &e, &f);
        Ok(if scale > 0.0 { value / scale } else { 0.0 })
    }

    /// Residuals of the upper and lower projections at `m`, each normalised
    /// by `max(1, Σ|terms|)`.
    fn projection_residuals(&self, m: usize, energy: T, e: &[T], f: &[T]) -> (f64, f64) {
        let g = self.gamma(m);
        let zero = T::from(0.0);
        let (em, fm, ep, fp) = (e[m], f[m], e[m + 1], f[m + 1]);
        let (e1, f1) = if m >= 1 {
            (e[m - 1], f[m - 1])
        } else {
            (zero, zero)
        };
        let mp = T::from((m + 1) as f64);
        let lam_e = mp * ep + e1;
        let lam_f = mp * fp + f1;

        let upper = [
            (g - self.kp * self.w - energy) * em,
            (self.lp_b - self.beta) * e1,
            (-self.half_delta + self.lm_b * self.w - self.u * g) * fm,
            -self.lm_b * f1,
            -self.w_minus_beta * lam_e,
            self.uw * lam_f,
        ];
        let lower = [
            (-self.half_delta - self.u * g - self.lm_b * self.w) * em,
            self.lm_b * e1,
            (g + self.kp * self.w - energy) * fm,
            -(self.lp_b - self.beta) * f1,
            self.uw * lam_e,
            -self.w_plus_beta * lam_f,
        ];
        let norm = |terms: &[T]| {
            let sum = terms.iter().fold(zero, |acc, &t| acc + t);
            let scale: f64 = terms.iter().map(|t| t.abs().hi()).sum();
            sum.abs().hi() / scale.max(1.0)
        };
        (norm(&upper), norm(&lower))
    }
}

/// Stopping rule for [`run`].
#[derive(Debug, Clone, Copy)]
enum Stop {
    /// Σ e_n wⁿ and Σ f_n wⁿ have converged.
    Series,
    /// Expansion amplitudes √n! e_n, √n! f_n have decayed.
    Amplitudes,
}

/// Raw output of the recurrences before conversion to a table.
struct Run<T> {
    e: Vec<T>,
    f: Vec<T>,
    se: T,
    sf: T,
    last_term: f64,
    converged: bool,
    pole_distance: f64,
    max_residual: f64,
}

fn run<T: Real>(
    rec: &Recurrence<T>,
    energy: T,
    opts: &SeriesOptions,
    stop: Stop,
) -> Result<Run<T>> {
    if opts.max_terms < 8 {
        return Err(Error::InvalidParameter {
            name: "max_terms",
            value: opts.max_terms as f64,
            reason: "at least 8 terms are required",
        });
    }
    let w = rec.w;
    let mut e = Vec::with_capacity(64);
    let mut f = Vec::with_capacity(64);

    e.push(rec.first_pair(energy, opts.pole_guard)?);
    f.push(T::from(1.0));
    let mut pole_distance = rec.theta(0, energy).abs().hi();

    let mut se = e[0];
    let mut sf = f[0];
    let mut wn = T::from(1.0);
    let mut last_term = e[0].abs().hi() + 1.0;
    let mut log_sqrt_fact = 0.0;
    let mut amp_max = e[0].abs().hi().max(1.0);
    let mut small_run = 0;
    let mut converged = false;

    for m in 1..opts.max_terms {
        let (em, fm, dist) = rec.next_pair(m, energy, &e, &f, opts.pole_guard)?;
        pole_distance = pole_distance.min(dist);
        e.push(em);
        f.push(fm);

        wn = wn * w;
        let te = em * wn;
        let tf = fm * wn;
        se = se + te;
        sf = sf + tf;
        last_term = te.abs().hi() + tf.abs().hi();
        let small = match stop {
            Stop::Series => last_term < opts.tol * (1.0 + se.abs().hi() + sf.abs().hi()),
            Stop::Amplitudes => {
                log_sqrt_fact += 0.5 * (m as f64).ln();
                let amp = em.abs().hi().max(fm.abs().hi()) * log_sqrt_fact.exp();
                amp_max = amp_max.max(amp);
                amp < opts.tol * amp_max
            }
        };
        small_run = if small { small_run + 1 } else { 0 };
        if small_run >= CONSECUTIVE_SMALL {
            converged = true;
            break;
        }
    }

    // the last coefficient only feeds the residual check at n_used − 1
    let n_used = e.len() - 1;
    let mut max_residual: f64 = 0.0;
    if n_used >= 2 {
        for m in 0..=n_used - 2 {
            let (a, b) = rec.projection_residuals(m, energy, &e, &f);
            let res = a.max(b);
            max_residual = max_residual.max(res);
            if res > opts.residual_tol {
                return Err(Error::ResidualTooLarge {
                    m,
                    residual: res,
                    tol: opts.residual_tol,
                });
            }
        }
    }
    Ok(Run {
        e,
        f,
        se,
        sf,
        last_term,
        converged,
        pole_distance,
        max_residual,
    })
}

fn to_table<T: Real>(
    rec: &Recurrence<T>,
    energy: T,
    r: Run<T>,
    opts: &SeriesOptions,
) -> CoefficientTable {
    let terminated_on = if !r.converged {
        Termination::MaxTerms
    } else if r.pole_distance < opts.near_pole_band {
        Termination::PoleProximity
    } else {
        Termination::Converged
    };
    CoefficientTable {
        energy: energy.hi(),
        w: rec.w.hi(),
        n_used: r.e.len() - 1,
        e: r.e.into_iter().map(Real::hi).collect(),
        f: r.f.into_iter().map(Real::hi).collect(),
        terminated_on,
        max_residual: r.max_residual,
        pole_distance: r.pole_distance,
    }
}

/// Coefficients `e_n`, `f_n` at `energy`, computed until the vacuum sums
/// converge or `opts.max_terms` is reached.
pub fn coefficients(
    params: &ModelParams,
    energy: f64,
    opts: &SeriesOptions,
) -> Result<CoefficientTable> {
    let rec = Recurrence::new(params)?;
    let r = run(&rec, energy, opts, Stop::Series)?;
    Ok(to_table(&rec, energy, r, opts))
}

/// Both parity G-functions from one coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GPair {
    pub even: f64,
    pub odd: f64,
    pub truncation_estimate: f64,
    pub near_pole: bool,
    pub terms: usize,
}

/// Fixed-parameter evaluator; reuses the recurrence constants across energies.
#[derive(Debug, Clone, Copy)]
pub struct GFunction {
    rec: Recurrence,
    opts: SeriesOptions,
}

impl GFunction {
    pub fn new(params: &ModelParams, opts: SeriesOptions) -> Result<Self> {
        Ok(GFunction {
            rec: Recurrence::new(params)?,
            opts,
        })
    }

    pub fn options(&self) -> &SeriesOptions {
        &self.opts
    }

    pub fn w(&self) -> f64 {
        self.rec.w
    }

    pub fn table(&self, energy: f64) -> Result<CoefficientTable> {
        let r = run(&self.rec, energy, &self.opts, Stop::Series)?;
        Ok(to_table(&self.rec, energy, r, &self.opts))
    }

    pub fn pair(&self, energy: f64) -> Result<GPair> {
        let r = run(&self.rec, energy, &self.opts, Stop::Series)?;
        if !r.converged {
            return Err(Error::NotConverged {
                terms: r.e.len(),
                last_term: r.last_term,
            });
        }
        Ok(GPair {
            even: combine(r.se, r.sf, Parity::Even),
            odd: combine(r.se, r.sf, Parity::Odd),
            truncation_estimate: r.last_term,
            near_pole: r.pole_distance < self.opts.near_pole_band,
            terms: r.e.len(),
        })
    }

    pub fn eval(&self, energy: f64, parity: Parity) -> Result<GValue> {
        let p = self.pair(energy)?;
        Ok(GValue {
            value: match parity {
                Parity::Even => p.even,
                Parity::Odd => p.odd,
            },
            parity,
            truncation_estimate: p.truncation_estimate,
            near_pole: p.near_pole,
            terms: p.terms,
        })
    }
}

/// G-function of the given parity at `energy`.
pub fn g_function(
    params: &ModelParams,
    energy: f64,
    parity: Parity,
    opts: &SeriesOptions,
) -> Result<GValue> {
    GFunction::new(params, *opts)?.eval(energy, parity)
}

/// Relative series tolerance for the extended-precision pass.
const EXTENDED_TOL: f64 = 1e-31;

/// Secant refinement of a double-precision root in double-double.
fn refine_root(
    rec: &Recurrence<Dd>,
    energy: f64,
    parity: Parity,
    opts: &SeriesOptions,
) -> Result<Dd> {
    let series = SeriesOptions {
        tol: EXTENDED_TOL,
        ..*opts
    };
    let g = |e: Dd| -> Result<Dd> {
        let r = run(rec, e, &series, Stop::Series)?;
        if !r.converged {
            return Err(Error::NotConverged {
                terms: r.e.len(),
                last_term: r.last_term,
            });
        }
        Ok(match parity {
            Parity::Odd => r.se + r.sf,
            Parity::Even => r.se - r.sf,
        })
    };
    let scale = 1.0 + energy.abs();
    let mut x0 = Dd::from(energy);
    let mut x1 = x0 + Dd::from(1e-9 * scale);
    let mut g0 = g(x0)?;
    let mut g1 = g(x1)?;
    for _ in 0..30 {
        let dg = g1 - g0;
        if dg.hi() == 0.0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / dg;
        let step = (x2 - x1).abs().hi();
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g(x1)?;
        if step <= 1e-30 * scale || g1.hi() == 0.0 {
            break;
        }
    }
    if (x1 - Dd::from(energy)).abs().hi() > 1e-8 * scale {
        return Err(Error::NoConvergence { iterations: 30 });
    }
    Ok(x1)
}

/// Coefficient table of the eigenstate at a verified root, extended until the
/// expansion amplitudes `√n! e_n`, `√n! f_n` have decayed (relative to their
/// maximum) below `opts.tol`. The forward recurrences amplify any error in
/// the energy into a growing solution, so the root is first polished and
/// the table computed in double-double arithmetic.
pub fn eigenvector_coefficients(
    params: &ModelParams,
    energy: f64,
    parity: Parity,
    opts: &SeriesOptions,
    g_root_tol: f64,
) -> Result<CoefficientTable> {
    let g = GFunction::new(params, *opts)?;
    let value = g.eval(energy, parity)?.value;
    if value.abs() >= g_root_tol {
        return Err(Error::NotARoot {
            energy,
            g_abs: value.abs(),
            tol: g_root_tol,
        });
    }
    let rec = Recurrence::<Dd>::new(params)?;
    let root = refine_root(&rec, energy, parity, opts)?;
    let r = run(&rec, root, opts, Stop::Amplitudes)?;
    Ok(to_table(&rec, root, r, opts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ModelParams {
        ModelParams::new(0.7, 0.8, 0.4, 0.2).unwrap()
    }

    /// e_0 at E = 0 from the m = 0 relation, written out longhand.
    #[test]
    fn e0_matches_longhand() {
        let (delta, g1, g2, u, energy) = (0.7f64, 0.8f64, 0.4f64, 0.2f64, 0.0f64);
        let lp = (g1 * g1 + g2 * g2) / 2.0;
        let lm = (g1 * g1 - g2 * g2) / 2.0;
        let b = (g1 * g2).sqrt();
        let w = b / (1.0 - u * u).sqrt();
        let gam = w * w;
        let num = delta / 2.0 - lm / b * w + u * gam
            - u * w / (w + b) * (gam + (lp + b * b) / b * w - energy);
        let den = gam
            - (lp + b * b) / b * w
            - energy
            - u * w / (w + b) * (delta / 2.0 + u * gam + lm / b * w);
        let t = coefficients(&fig1(), energy, &SeriesOptions::default()).unwrap();
        assert_eq!(t.f[0], 1.0);
        assert!((t.e[0] - num / den).abs() < 1e-15);
        // frozen from a 40-digit evaluation of the same expression
        assert!(
            (t.e[0] + 0.136_243_251_456_847_98).abs() < 1e-14,
            "{}",
            t.e[0]
        );
    }

    /// The two-step relation for f_m with Θ left in the denominators, kept
    /// longhand as an independent check (valid for U ≠ 0).
    fn longhand_coefficients(p: &ModelParams, energy: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
        let (delta, u) = (p.delta, p.stark_u);
        let lp = p.lambda_plus();
        let lm = p.lambda_minus();
        let b = (p.g1 * p.g2).sqrt();
        let s = (1.0 - u * u).sqrt();
        let w = b / s;
        let kp = (lp + b * b) / b;
        let gam = |m: usize| m as f64 + w * w;
        let theta =
            |m: usize| s * gam(m) - kp * w - energy - u * w / (w + b) * (delta / 2.0 + lm / b * w);
        let numer = |m: usize| {
            delta / 2.0 - lm / b * w + u * b * gam(m) / (w + b)
                - u * w / (w + b) * (kp * w - energy)
        };
        let x = (lp - b * b) / b + u * w * lm / ((w + b) * b);
        let y = lm / b + u * w * (lp - b * b) / (b * (w + b));
        let mut e = vec![numer(0) / theta(0)];
        let mut f = vec![1.0];
        for m in 1..count {
            let mf = m as f64;
            let th = theta(m);
            let (e1, f1) = (e[m - 1], f[m - 1]);
            let (e2, f2) = if m >= 2 {
                (e[m - 2], f[m - 2])
            } else {
                (0.0, 0.0)
            };
            let d = mf * (w - b);
            let lhs = u * w / (w - b) - numer(m) / th;
            let rhs = -(u * w - lm / b) / d * f2 - (lp / b - w) / d * e2
                + (y / th + (delta / 2.0 - lm / b * w + u * gam(m - 1)) / d) * f1
                - (x / th + (gam(m - 1) - kp * w - energy) / d) * e1;
            let fm = rhs / lhs;
            e.push((numer(m) * fm - x * e1 + y * f1) / th);
            f.push(fm);
        }
        (e, f)
    }

    #[test]
    fn matches_longhand_two_step_relation() {
        for (p, energy) in [
            (fig1(), 0.1),
            (fig1(), -0.3),
            (ModelParams::with_ratio(0.7, 0.8, 2.0, 0.2).unwrap(), 1.3),
            (ModelParams::new(0.5, 0.6, 0.9, -0.5).unwrap(), 0.7),
        ] {
            let t = coefficients(&p, energy, &SeriesOptions::default()).unwrap();
            let (e, f) = longhand_coefficients(&p, energy, 25.min(t.len()));
            for m in 0..e.len() {
                let scale = t.e[m].abs().max(t.f[m].abs()).max(1e-300);
                assert!(
                    (e[m] - t.e[m]).abs() <= 1e-9 * scale,
                    "e[{m}] {} vs {}",
                    e[m],
                    t.e[m]
                );
                assert!(
                    (f[m] - t.f[m]).abs() <= 1e-9 * scale,
                    "f[{m}] {} vs {}",
                    f[m],
                    t.f[m]
                );
            }
        }
    }

    #[test]
    fn unstarked_limit_is_regular() {
        // at U = 0 the two-step relation above is singular; this path is not
        let p = ModelParams::new(0.7, 0.8, 0.4, 0.0).unwrap();
        let q = ModelParams::new(0.7, 0.8, 0.4, 1e-9).unwrap();
        let a = g_function(&p, 0.1, Parity::Even, &SeriesOptions::default()).unwrap();
        let b = g_function(&q, 0.1, Parity::Even, &SeriesOptions::default()).unwrap();
        assert!((a.value - b.value).abs() < 1e-7);
    }

    #[test]
    fn pole_hit_at_first_pole() {
        let p = fig1();
        let rec: Recurrence = Recurrence::new(&p).unwrap();
        let e0 = rec.theta(0, 0.0);
        let err = coefficients(&p, e0 + 1e-10, &SeriesOptions::default()).unwrap_err();
        assert!(matches!(err, Error::PoleHit { index: 0, .. }), "{err:?}");
    }

    #[test]
    fn pole_hit_at_regular_pole() {
        let err = coefficients(&fig1(), 0.49 + 1e-11, &SeriesOptions::default()).unwrap_err();
        assert!(matches!(err, Error::PoleHit { index: 1, .. }), "{err:?}");
    }

    #[test]
    fn series_converges_and_residuals_small() {
        let t = coefficients(&fig1(), 0.1, &SeriesOptions::default()).unwrap();
        assert_eq!(t.terminated_on, Termination::Converged);
        assert!(t.max_residual < 1e-12, "{}", t.max_residual);
        assert_eq!(t.e.len(), t.f.len());
    }

    #[test]
    fn rejects_too_few_terms() {
        let opts = SeriesOptions {
            max_terms: 4,
            ..SeriesOptions::default()
        };
        assert!(matches!(
            coefficients(&fig1(), 0.1, &opts),
            Err(Error::InvalidParameter { .. })
        ));
    }

    #[test]
    fn not_converged_with_tiny_budget() {
        let opts = SeriesOptions {
            max_terms: 8,
            ..SeriesOptions::default()
        };
        assert!(matches!(
            g_function(&fig1(), 0.1, Parity::Even, &opts),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn b_expansion_swaps_and_alternates() {
        let t = coefficients(&fig1(), 0.1, &SeriesOptions::default()).unwrap();
        let (upper, lower) = t.b_expansion();
        assert_eq!(upper[0], t.f[0]);
        assert_eq!(upper[1], -t.f[1]);
        assert_eq!(lower[3], -t.e[3]);
    }

    #[test]
    fn not_a_root_rejected() {
        let err = eigenvector_coefficients(
            &fig1(),
            0.1,
            Parity::Even,
            &SeriesOptions::default(),
            DEFAULT_G_ROOT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotARoot { .. }));
    }

    #[test]
    fn extended_division_is_exact_to_double_double() {
        let third = Dd::from(1.0) / Dd::from(3.0);
        let back = third * Dd::from(3.0) - Dd::from(1.0);
        assert!(back.abs().0.hi() < 1e-31);
        let x = Dd::from(0.7).sqrt();
        let q = Dd::from(2.0) / x;
        assert!((q * x - Dd::from(2.0)).abs().0.hi() < 1e-31);
    }

    #[test]
    fn eigenvector_amplitudes_decay() {
        let p = fig1();
        let opts = SeriesOptions::default();
        let level = crate::spectrum::find_spectrum(&p, (-2.0, 1.0), &Default::default())
            .unwrap()
            .levels[0];
        let t = eigenvector_coefficients(&p, level.energy, level.parity, &opts, DEFAULT_G_ROOT_TOL)
            .unwrap();
        assert_eq!(t.terminated_on, Termination::Converged);
        let mut log_fact = 0.0f64;
        let mut tail: f64 = 0.0;
        for n in 0..t.len() {
            if n > 0 {
                log_fact += 0.5 * (n as f64).ln();
            }
            if n + 5 >= t.len() {
                tail = tail.max(t.e[n].abs().max(t.f[n].abs()) * log_fact.exp());
            }
        }
        assert!(tail < 1e-13, "tail amplitude {tail:e}");
    }
}
