//! Poles of the G-function, regular levels, and first-order level crossings.

use serde::Serialize;

use crate::boa::{GFunction, Recurrence, SeriesOptions};
use crate::ed;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{CouplingFamily, ModelParams, Parity};
use crate::roots::{bisect, golden_min, Midpoint};

pub const DEFAULT_SCAN_POINTS: usize = 400;
pub const MIN_SCAN_POINTS: usize = 64;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Roots closer than this are the same level.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;
/// A local minimum of |G| below this without a sign change is a tangency.
pub const DEFAULT_TANGENCY_TOL: f64 = 1e-8;
/// Distances from a pole at which the scan starts, tried in order.
pub const GUARD_BANDS: [f64; 3] = [1e-8, 1e-10, 1e-12];
/// Normalised lifting residual accepted as a zero.
const LIFTING_ZERO_TOL: f64 = 1e-8;

fn series_only(params: &ModelParams) -> Result<()> {
    if params.stark_u.abs() >= 1.0 {
        let (alpha, kappa) = params.to_alpha_kappa().unwrap_or((0.0, 0.0));
        return Err(Error::Domain {
            stark_u: params.stark_u,
            alpha,
            kappa,
        });
    }
    Ok(())
}

/// The pole of `e_0`.
pub fn first_pole(params: &ModelParams) -> Result<f64> {
    series_only(params)?;
    let u = params.stark_u;
    let s = params.stark_root();
    let lp = params.lambda_plus();
    let lm = params.lambda_minus();
    Ok(-u * params.delta / (2.0 * (1.0 + s)) - (lm * u / (1.0 + s) + lp) / s)
}

/// The pole of `f_m`, `m >= 1`: `(1−U²)m − λ₊ − UΔ/2`.
pub fn regular_pole(params: &ModelParams, m: usize) -> Result<f64> {
    series_only(params)?;
    let u = params.stark_u;
    Ok((1.0 - u * u) * m as f64 - params.lambda_plus() - 0.5 * u * params.delta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleLadder {
    pub first_pole: f64,
    /// `regular_poles[k]` is the pole of index `k + 1`.
    pub regular_poles: Vec<f64>,
}

pub fn poles(params: &ModelParams, m_max: usize) -> Result<PoleLadder> {
    let first = first_pole(params)?;
    let regular = (1..=m_max)
        .map(|m| regular_pole(params, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(PoleLadder {
        first_pole: first,
        regular_poles: regular,
    })
}

/// `(index, energy)` of every pole strictly inside `(lo, hi)`, ascending.
pub fn poles_in(params: &ModelParams, lo: f64, hi: f64) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    let first = first_pole(params)?;
    if first > lo && first < hi {
        out.push((0, first));
    }
    let spacing = 1.0 - params.stark_u * params.stark_u;
    let base = regular_pole(params, 0)?;
    let m_lo = (((lo - base) / spacing).floor().max(0.0)) as usize;
    let m_hi = ((hi - base) / spacing).ceil().max(0.0) as usize;
    for m in m_lo.max(1)..=m_hi {
        let p = regular_pole(params, m)?;
        if p > lo && p < hi {
            out.push((m, p));
        }
    }
    out.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelOptions {
    pub series: SeriesOptions,
    pub scan_points: usize,
    pub root_tol: f64,
    pub merge_tol: f64,
    pub tangency_tol: f64,
}

impl Default for LevelOptions {
    fn default() -> Self {
        LevelOptions {
            series: SeriesOptions::default(),
            scan_points: DEFAULT_SCAN_POINTS,
            root_tol: DEFAULT_ROOT_TOL,
            merge_tol: DEFAULT_MERGE_TOL,
            tangency_tol: DEFAULT_TANGENCY_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelDiagnostics {
    pub iterations: usize,
    /// |G| at the reported energy.
    pub g_residual: f64,
    pub bracket_width: f64,
    /// Within the near-pole band of some pole.
    pub near_pole: bool,
    /// Found as a touching zero without a sign change.
    pub tangency: bool,
    /// Guard band that had to be used to resolve the root, if narrower than
    /// the default.
    pub guard_band: Option<f64>,
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub parity: Parity,
    pub diagnostics: LevelDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub params: ModelParams,
    pub range: (f64, f64),
    /// Ascending in energy.
    pub levels: Vec<Level>,
    /// Poles inside the range.
    pub poles: Vec<(usize, f64)>,
}

impl SpectrumResult {
    pub fn energies(&self, parity: Parity) -> Vec<f64> {
        self.levels
            .iter()
            .filter(|l| l.parity == parity)
            .map(|l| l.energy)
            .collect()
    }
}

fn check_range(range: (f64, f64)) -> Result<()> {
    if !(range.0.is_finite() && range.1.is_finite()) || range.0 >= range.1 {
        return Err(Error::InvalidParameter {
            name: "range",
            value: range.1 - range.0,
            reason: "needs finite lo < hi",
        });
    }
    Ok(())
}

struct Finder<'a> {
    g: GFunction,
    parity: Parity,
    opts: &'a LevelOptions,
    poles: &'a [(usize, f64)],
}

impl Finder<'_> {
    fn value(&self, energy: f64) -> Result<f64> {
        Ok(self.g.eval(energy, self.parity)?.value)
    }

    fn near_pole(&self, energy: f64) -> bool {
        let band = self.opts.series.near_pole_band;
        self.poles.iter().any(|&(_, p)| (energy - p).abs() < band)
    }

    fn level(&self, energy: f64, iterations: usize, width: f64) -> Result<Level> {
        let v = self.g.eval(energy, self.parity)?;
        Ok(Level {
            energy,
            parity: self.parity,
            diagnostics: LevelDiagnostics {
                iterations,
                g_residual: v.value.abs(),
                bracket_width: width,
                near_pole: v.near_pole || self.near_pole(energy),
                tangency: false,
                guard_band: None,
                terms: v.terms,
            },
        })
    }

    fn root(&self, lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Level> {
        let b = bisect(
            |x| self.value(x),
            lo,
            hi,
            f_lo,
            f_hi,
            0.0,
            Midpoint::Arithmetic,
            200,
        )?;
        let width = b.bracket.1 - b.bracket.0;
        if width > self.opts.root_tol {
            return Err(Error::NoConvergence {
                iterations: b.iterations,
            });
        }
        self.level(b.root, b.iterations, width)
    }

    /// Look for a root squeezed between a pole and the default guard band.
    /// `side` is +1 when the pole is at the left end of the segment.
    fn near_pole_root(&self, pole: f64, side: f64) -> Result<Option<Level>> {
        let mut outer = pole + side * GUARD_BANDS[0];
        let mut g_outer = self.value(outer)?;
        for &band in &GUARD_BANDS[1..] {
            let inner = pole + side * band;
            let g_inner = match self.value(inner) {
                Ok(v) => v,
                Err(Error::PoleHit { .. }) => break,
                Err(e) => return Err(e),
            };
            if g_inner.signum() != g_outer.signum() {
                let (lo, hi, f_lo, f_hi) = if side > 0.0 {
                    (inner, outer, g_inner, g_outer)
                } else {
                    (outer, inner, g_outer, g_inner)
                };
                let mut level = self.root(lo, hi, f_lo, f_hi)?;
                level.diagnostics.guard_band = Some(band);
                level.diagnostics.near_pole = true;
                return Ok(Some(level));
            }
            outer = inner;
            g_outer = g_inner;
        }
        Ok(None)
    }

    fn segment(&self, a: f64, b: f64, a_pole: bool, b_pole: bool, n: usize) -> Result<Vec<Level>> {
        let band = GUARD_BANDS[0];
        let lo = if a_pole { a + band } else { a };
        let hi = if b_pole { b - band } else { b };
        let mut out = Vec::new();
        if hi <= lo {
            return Ok(out);
        }
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let gs = xs
            .iter()
            .map(|&x| self.value(x))
            .collect::<Result<Vec<_>>>()?;

        for i in 0..n - 1 {
            if gs[i] == 0.0 {
                out.push(self.level(xs[i], 0, 0.0)?);
            } else if gs[i].signum() != gs[i + 1].signum() && gs[i + 1] != 0.0 {
                out.push(self.root(xs[i], xs[i + 1], gs[i], gs[i + 1])?);
            }
        }
        if gs[n - 1] == 0.0 {
            out.push(self.level(xs[n - 1], 0, 0.0)?);
        }

        for i in 1..n - 1 {
            let (l, c, r) = (gs[i - 1], gs[i], gs[i + 1]);
            let same_sign = l.signum() == c.signum() && c.signum() == r.signum();
            if same_sign && c.abs() < l.abs() && c.abs() < r.abs() {
                let (x, fx, iters) = golden_min(
                    |x| Ok::<_, Error>(self.value(x)?.abs()),
                    xs[i - 1],
                    xs[i + 1],
                    1e-13,
                    200,
                )?;
                if fx < self.opts.tangency_tol {
                    let mut level = self.level(x, iters, 0.0)?;
                    level.diagnostics.tangency = true;
                    out.push(level);
                }
            }
        }

        if a_pole {
            if let Some(l) = self.near_pole_root(a, 1.0)? {
                out.push(l);
            }
        }
        if b_pole {
            if let Some(l) = self.near_pole_root(b, -1.0)? {
                out.push(l);
            }
        }
        Ok(out)
    }
}

fn merge(mut levels: Vec<Level>, tol: f64) -> Vec<Level> {
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let mut out: Vec<Level> = Vec::with_capacity(levels.len());
    for l in levels {
        match out.last_mut() {
            Some(prev) if prev.parity == l.parity && (l.energy - prev.energy).abs() < tol => {
                if l.diagnostics.g_residual < prev.diagnostics.g_residual {
                    *prev = l;
                }
            }
            _ => out.push(l),
        }
    }
    out
}

/// Zeros of `G_parity` in `range`, searched between consecutive poles.
pub fn find_levels(
    params: &ModelParams,
    range: (f64, f64),
    parity: Parity,
    opts: &LevelOptions,
) -> Result<SpectrumResult> {
    check_range(range)?;
    if opts.scan_points < MIN_SCAN_POINTS {
        return Err(Error::InvalidParameter {
            name: "scan_points",
            value: opts.scan_points as f64,
            reason: "at least 64 scan points are required",
        });
    }
    let poles = poles_in(params, range.0, range.1)?;
    let mut series = opts.series;
    series.pole_guard = series
        .pole_guard
        .min(0.5 * GUARD_BANDS[GUARD_BANDS.len() - 1]);
    let finder = Finder {
        g: GFunction::new(params, series)?,
        parity,
        opts,
        poles: &poles,
    };

    let mut cuts = vec![(range.0, false)];
    cuts.extend(poles.iter().map(|&(_, p)| (p, true)));
    cuts.push((range.1, false));
    let span = range.1 - range.0;
    let mut levels = Vec::new();
    for pair in cuts.windows(2) {
        let ((a, a_pole), (b, b_pole)) = (pair[0], pair[1]);
        let n = ((opts.scan_points as f64 * (b - a) / span).ceil() as usize).max(16);
        levels.extend(finder.segment(a, b, a_pole, b_pole, n)?);
    }
    Ok(SpectrumResult {
        params: *params,
        range,
        levels: merge(levels, opts.merge_tol),
        poles,
    })
}

/// Both parity sectors, merged and sorted.
pub fn find_spectrum(
    params: &ModelParams,
    range: (f64, f64),
    opts: &LevelOptions,
) -> Result<SpectrumResult> {
    let mut even = find_levels(params, range, Parity::Even, opts)?;
    let odd = find_levels(params, range, Parity::Odd, opts)?;
    even.levels.extend(odd.levels);
    even.levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(even)
}

/// One sample of a G-curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GCurvePoint {
    pub energy: f64,
    pub even: Option<f64>,
    pub odd: Option<f64>,
    pub near_pole: bool,
    /// Set when the evaluation failed (for example on a pole).
    pub error: Option<String>,
}

pub fn g_curve(
    params: &ModelParams,
    energies: &[f64],
    series: &SeriesOptions,
    exec: Execution,
) -> Result<Vec<GCurvePoint>> {
    let g = GFunction::new(params, *series)?;
    Ok(exec.map(energies, |&energy| match g.pair(energy) {
        Ok(p) => GCurvePoint {
            energy,
            even: Some(p.even),
            odd: Some(p.odd),
            near_pole: p.near_pole,
            error: None,
        },
        Err(e) => GCurvePoint {
            energy,
            even: None,
            odd: None,
            near_pole: matches!(e, Error::PoleHit { .. }),
            error: Some(e.to_string()),
        },
    }))
}

/// Levels at each coupling of a family.
pub fn level_sweep(
    family: &CouplingFamily,
    g1_values: &[f64],
    range: (f64, f64),
    opts: &LevelOptions,
    exec: Execution,
) -> Vec<Result<SpectrumResult>> {
    exec.map(g1_values, |&g1| find_spectrum(&family.at(g1)?, range, opts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingMethod {
    ClosedForm,
    Lifting,
    Diagonalization,
}

/// A point where the lowest even and odd levels (or a pole and a level) meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingPoint {
    pub g1: f64,
    pub energy: f64,
    pub pole_index: Option<usize>,
    pub method: CrossingMethod,
}

/// `Δ(1−U²) / (U(1+r²) + 1 − r²)`; the first-order crossing exists iff it is
/// positive.
pub fn critical_radicand(family: &CouplingFamily) -> f64 {
    let (u, r) = (family.stark_u, family.ratio);
    family.delta * (1.0 - u * u) / (u * (1.0 + r * r) + 1.0 - r * r)
}

/// Coupling at which the first pole becomes a doubly degenerate level.
pub fn first_order_critical(family: &CouplingFamily) -> Result<Option<CrossingPoint>> {
    if family.stark_u.abs() >= 1.0 {
        return Err(Error::Domain {
            stark_u: family.stark_u,
            alpha: 0.0,
            kappa: 0.0,
        });
    }
    let rad = critical_radicand(family);
    if !(rad.is_finite() && rad > 0.0) {
        return Ok(None);
    }
    let g1 = rad.sqrt();
    let energy = first_pole(&family.at(g1)?)?;
    Ok(Some(CrossingPoint {
        g1,
        energy,
        pole_index: Some(0),
        method: CrossingMethod::ClosedForm,
    }))
}

fn sample_grid(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Couplings in `g1_range` where the pole of index `m >= 1` is lifted,
/// located from sign changes of the normalised lifting residual.
pub fn juddian_crossings(
    family: &CouplingFamily,
    m: usize,
    g1_range: (f64, f64),
    scan_points: usize,
) -> Result<Vec<CrossingPoint>> {
    check_range(g1_range)?;
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: 0.0,
            reason: "pole index 0 has a closed form; use first_order_critical",
        });
    }
    let residual = |g1: f64| -> Result<f64> {
        let rec: Recurrence = Recurrence::new(&family.at(g1)?)?;
        rec.lifting_residual_at_pole(m, 1e-13)
    };
    let grid = sample_grid(g1_range, scan_points.max(MIN_SCAN_POINTS));
    let vals: Vec<Option<f64>> = grid.iter().map(|&g| residual(g).ok()).collect();
    let mut out = Vec::new();
    for i in 0..grid.len() - 1 {
        let (Some(a), Some(b)) = (vals[i], vals[i + 1]) else {
            continue;
        };
        if a.signum() == b.signum() && a != 0.0 {
            continue;
        }
        let bracket = match bisect(
            residual,
            grid[i],
            grid[i + 1],
            a,
            b,
            0.0,
            Midpoint::Arithmetic,
            200,
        ) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let g1 = bracket.root;
        let Ok(j) = residual(g1) else { continue };
        if j.abs() > LIFTING_ZERO_TOL {
            // the sign change came from a divergence, not a lifted pole
            continue;
        }
        out.push(CrossingPoint {
            g1,
            energy: regular_pole(&family.at(g1)?, m)?,
            pole_index: Some(m),
            method: CrossingMethod::Lifting,
        });
    }
    Ok(out)
}

/// `(E_even,0 − E_odd,0, E_even,0, E_odd,0)` from the parity blocks.
pub fn ed_ground_gap(params: &ModelParams, n_truncation: usize) -> Result<(f64, f64, f64)> {
    let even = ed::parity_block(params, n_truncation, Parity::Even).eigenvalues()?[0];
    let odd = ed::parity_block(params, n_truncation, Parity::Odd).eigenvalues()?[0];
    Ok((even - odd, even, odd))
}

/// First coupling in `g1_range` where the lowest even and odd ED levels
/// cross. Falls back to a near-touching minimum of the gap.
pub fn crossing_via_ed(
    family: &CouplingFamily,
    g1_range: (f64, f64),
    n_truncation: usize,
    scan_points: usize,
) -> Result<Option<CrossingPoint>> {
    check_range(g1_range)?;
    let gap = |g1: f64| -> Result<f64> { Ok(ed_ground_gap(&family.at(g1)?, n_truncation)?.0) };
    let grid = sample_grid(g1_range, scan_points.max(8));
    let vals = grid.iter().map(|&g| gap(g)).collect::<Result<Vec<_>>>()?;
    let found = |g1: f64| -> Result<Option<CrossingPoint>> {
        let (_, even, odd) = ed_ground_gap(&family.at(g1)?, n_truncation)?;
        Ok(Some(CrossingPoint {
            g1,
            energy: 0.5 * (even + odd),
            pole_index: None,
            method: CrossingMethod::Diagonalization,
        }))
    };
    for i in 0..grid.len() - 1 {
        if vals[i].signum() != vals[i + 1].signum() || vals[i] == 0.0 {
            let b = bisect(
                gap,
                grid[i],
                grid[i + 1],
                vals[i],
                vals[i + 1],
                1e-13,
                Midpoint::Arithmetic,
                200,
            )?;
            return found(b.root);
        }
    }
    let (k, _) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("grid is non-empty");
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let (g1, fmin, _) = golden_min(|g| Ok::<_, Error>(gap(g)?.abs()), lo, hi, 1e-12, 200)?;
    if fmin < 1e-8 {
        return found(g1);
    }
    Ok(None)
}

/// `E₁ − E₀` of the merged ED spectrum along a family.
pub fn ed_gap_sweep(
    family: &CouplingFamily,
    g1_values: &[f64],
    n_truncation: usize,
    exec: Execution,
) -> Vec<Result<f64>> {
    exec.map(g1_values, |&g1| ed::gap(&family.at(g1)?, n_truncation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boa::Recurrence;

    fn fig1() -> ModelParams {
        ModelParams::new(0.7, 0.8, 0.4, 0.2).unwrap()
    }

    #[test]
    fn first_pole_agrees_with_recurrence() {
        let p = fig1();
        let rec = Recurrence::new(&p).unwrap();
        let from_theta = rec.theta(0, 0.0);
        assert!((first_pole(&p).unwrap() - from_theta).abs() < 1e-14);
    }

    #[test]
    fn first_pole_printed_form() {
        for (u, r) in [
            (0.2, 0.5),
            (-0.2, 0.5),
            (0.8, 2.0),
            (1e-3, 1.3),
            (-0.95, 0.7),
        ] {
            let p = ModelParams::with_ratio(0.7, 0.6, r, u).unwrap();
            let s = (1.0f64 - u * u).sqrt();
            let printed = -u * 0.7 / (2.0 + 2.0 * s)
                - (p.lambda_minus() * (1.0 - s) / u + p.lambda_plus()) / s;
            assert!((first_pole(&p).unwrap() - printed).abs() < 1e-12, "{u} {r}");
        }
    }

    #[test]
    fn first_pole_unstarked_limit() {
        // U = 0: −λ₊
        let p = ModelParams::new(0.7, 0.8, 0.4, 0.0).unwrap();
        assert!((first_pole(&p).unwrap() + p.lambda_plus()).abs() < 1e-15);
    }

    #[test]
    fn ladder_spacing() {
        let p = fig1();
        let ladder = poles(&p, 6).unwrap();
        assert!((ladder.regular_poles[0] - 0.49).abs() < 1e-14);
        for pair in ladder.regular_poles.windows(2) {
            assert!((pair[1] - pair[0] - 0.96).abs() < 1e-14);
        }
    }

    #[test]
    fn poles_reject_unity() {
        let p = ModelParams::new(0.7, 0.8, 0.4, 1.0).unwrap();
        assert!(matches!(first_pole(&p), Err(Error::Domain { .. })));
    }

    #[test]
    fn poles_in_range() {
        let p = fig1();
        let ps = poles_in(&p, -1.0, 2.0).unwrap();
        let idx: Vec<usize> = ps.iter().map(|x| x.0).collect();
        assert_eq!(idx, vec![0, 1, 2]);
    }

    #[test]
    fn critical_examples() {
        let c = first_order_critical(&CouplingFamily::new(0.7, 0.2, 0.5))
            .unwrap()
            .unwrap();
        assert!((c.g1 - 0.819756).abs() < 5e-6, "{}", c.g1);
        assert!(first_order_critical(&CouplingFamily::new(0.7, 0.2, 2.0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn isotropic_critical_energy() {
        let fam = CouplingFamily::new(0.7, 0.3, 1.0);
        let c = first_order_critical(&fam).unwrap().unwrap();
        assert!((c.energy + 0.7 / 0.6).abs() < 1e-12, "{}", c.energy);
    }

    #[test]
    fn levels_match_ed() {
        let p = fig1();
        let spec = find_spectrum(&p, (-1.5, 3.0), &LevelOptions::default()).unwrap();
        let (even, odd) = ed::parity_resolved_levels(&p, 120).unwrap();
        for (parity, reference) in [(Parity::Even, even), (Parity::Odd, odd)] {
            let found = spec.energies(parity);
            assert!(found.len() >= 3, "{parity}: {found:?}");
            for (a, b) in found.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-9, "{parity}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn empty_range_rejected() {
        let err = find_levels(&fig1(), (1.0, 1.0), Parity::Even, &LevelOptions::default());
        assert!(matches!(err, Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn too_few_scan_points_rejected() {
        let opts = LevelOptions {
            scan_points: 10,
            ..LevelOptions::default()
        };
        assert!(find_levels(&fig1(), (-1.0, 1.0), Parity::Odd, &opts).is_err());
    }

    #[test]
    fn g_curve_marks_pole() {
        let p = fig1();
        let pts = g_curve(
            &p,
            &[0.1, 0.49],
            &SeriesOptions::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert!(pts[0].error.is_none());
        assert!(pts[1].near_pole && pts[1].error.is_some());
    }
}
