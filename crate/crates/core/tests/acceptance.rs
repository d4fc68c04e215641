//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use arsm_core::boa::{self, SeriesOptions};
use arsm_core::ed;
use arsm_core::spectrum::{self, LevelOptions};
use arsm_core::u1::{self, Branch, GroundIndex, U1Params};
use arsm_core::{CouplingFamily, Execution, ModelParams, Parity, StarkSign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn fig1(r: f64) -> ModelParams {
    ModelParams::with_ratio(0.7, 0.8, r, 0.2).unwrap()
}

fn within_budget(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

/// Lowest 10 roots per parity against truncated diagonalisation.
fn g_function_vs_ed() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    let mut ok = true;
    for r in [0.5, 2.0] {
        let p = fig1(r);
        let (even, odd) = ed::parity_resolved_levels(&p, 200).unwrap();
        let (even2, odd2) = ed::parity_resolved_levels(&p, 400).unwrap();
        let top = even[9].max(odd[9]) + 0.2;
        let bottom = even[0].min(odd[0]) - 0.5;
        let spec = spectrum::find_spectrum(&p, (bottom, top), &LevelOptions::default()).unwrap();
        for (parity, reference, doubled) in
            [(Parity::Even, &even, &even2), (Parity::Odd, &odd, &odd2)]
        {
            let found = spec.energies(parity);
            if found.len() < 10 {
                ok = false;
                notes.push(format!("r={r} {parity}: only {} roots", found.len()));
                continue;
            }
            for k in 0..10 {
                if (reference[k] - doubled[k]).abs() >= ed::CONVERGENCE_TOL {
                    ok = false;
                    notes.push(format!(
                        "r={r} {parity} level {k} not converged in truncation"
                    ));
                }
                worst = worst.max((found[k] - reference[k]).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= worst < 1e-6 && within_budget(elapsed, Duration::from_secs(10));
    Outcome::new(
        ok,
        format!(
            "max |E_G - E_ED| = {worst:.2e}, {:.2?} {}",
            elapsed,
            notes.join("; ")
        ),
    )
}

/// Closed-form first-order critical couplings and the ED locator.
fn first_order_critical_points() -> Outcome {
    let start = Instant::now();
    let cases = [
        (0.2, 0.5, Some(0.8198)),
        (-0.2, 0.5, Some(1.1590)),
        (0.8, 2.0, Some(0.5020)),
        (0.2, 2.0, None),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (u, r, expected) in cases {
        let fam = CouplingFamily::new(0.7, u, r);
        let closed = spectrum::first_order_critical(&fam).unwrap();
        let numeric = spectrum::crossing_via_ed(&fam, (0.05, 1.5), 200, 60).unwrap();
        match (expected, closed, numeric) {
            (Some(g), Some(c), Some(n)) => {
                let pass = (c.g1 - g).abs() <= 5e-4 && (n.g1 - c.g1).abs() < 1e-3;
                ok &= pass;
                parts.push(format!(
                    "(U={u},r={r}) g1c={:.6} E={:.4} ED={:.6}",
                    c.g1, c.energy, n.g1
                ));
            }
            (None, None, None) => parts.push(format!("(U={u},r={r}) no crossing")),
            _ => {
                ok = false;
                parts.push(format!("(U={u},r={r}) mismatch: {closed:?} / {numeric:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= within_budget(elapsed, Duration::from_secs(60));
    Outcome::new(ok, format!("{} ({elapsed:.2?})", parts.join("; ")))
}

/// Ladder spacing, divergence next to poles, and limits of the first pole.
fn pole_structure() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let p = fig1(0.5);
    let ladder = spectrum::poles(&p, 10).unwrap();
    let spacing = 1.0 - 0.2 * 0.2;
    let spacing_err = ladder
        .regular_poles
        .windows(2)
        .map(|w| (w[1] - w[0] - spacing).abs())
        .fold(0.0, f64::max);
    ok &= spacing_err < 1e-14;
    parts.push(format!("spacing err {spacing_err:.1e}"));

    let opts = SeriesOptions {
        pole_guard: 1e-12,
        ..SeriesOptions::default()
    };
    let g = boa::GFunction::new(&p, opts).unwrap();
    let first_four = [
        ladder.first_pole,
        ladder.regular_poles[0],
        ladder.regular_poles[1],
        ladder.regular_poles[2],
    ];
    // on each side of each pole, |G| must grow as the pole is approached and
    // exceed 1e6 somewhere inside the 1e-6 window
    let mut min_peak = f64::INFINITY;
    let mut growing = true;
    for pole in first_four {
        for side in [-1.0, 1.0] {
            let mut prev = 0.0;
            let mut peak: f64 = 0.0;
            for dist in [1e-6, 1e-7, 1e-8, 1e-9, 1e-10] {
                let v = g.pair(pole + side * dist).unwrap();
                let mag = v.even.abs().min(v.odd.abs());
                growing &= mag > prev;
                prev = mag;
                peak = peak.max(mag);
            }
            min_peak = min_peak.min(peak);
        }
    }
    ok &= growing && min_peak > 1e6;
    parts.push(format!(
        "min over poles of max |G| within 1e-6: {min_peak:.2e}, monotone growth {growing}"
    ));

    // isotropic: −UΔ/(2+2s) − g²/s; unstarked: −λ₊
    let (delta, g, u) = (0.7f64, 0.6f64, 0.3f64);
    let s = (1.0 - u * u).sqrt();
    let iso = spectrum::first_pole(&ModelParams::new(delta, g, g, u).unwrap()).unwrap();
    let iso_err = (iso - (-u * delta / (2.0 + 2.0 * s) - g * g / s)).abs();
    let aniso = ModelParams::new(delta, 0.8, 0.4, 0.0).unwrap();
    let mut lim_err = (spectrum::first_pole(&aniso).unwrap() + aniso.lambda_plus()).abs();
    for tiny in [1e-6, 1e-9, 1e-12] {
        let q = ModelParams::new(delta, 0.8, 0.4, tiny).unwrap();
        let expected = -q.lambda_plus() - tiny * (0.25 * delta + 0.5 * q.lambda_minus());
        lim_err = lim_err.max((spectrum::first_pole(&q).unwrap() - expected).abs());
    }
    ok &= iso_err < 1e-12 && lim_err < 1e-12;
    parts.push(format!("r=1 err {iso_err:.1e}, U->0 err {lim_err:.1e}"));
    Outcome::new(ok, parts.join(", "))
}

/// Lower-branch levels crowd against the branch edge as α → α_c.
fn spectral_collapse() -> Outcome {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for kappa in [0.5, 1.0] {
        let base = U1Params::new(0.5, 0.0, kappa, StarkSign::Plus).unwrap();
        let ac = u1::critical_alpha(&base).unwrap();
        let spread = |alpha: f64| -> f64 {
            let p = base.with_alpha(alpha);
            (0..5)
                .map(|n| {
                    (u1::self_consistent_level(&p, n, Branch::Lower).unwrap() - p.lower_edge())
                        .abs()
                })
                .fold(0.0, f64::max)
        };
        let at = spread(ac - 1e-4);
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        for k in 0..=24 {
            let delta = 10f64.powf(-1.0 - 3.0 * k as f64 / 24.0);
            let s = spread(ac - delta);
            monotone &= s < prev;
            prev = s;
        }
        ok &= at < 1e-3 && monotone;
        parts.push(format!(
            "kappa={kappa}: max|E_n-E_c|={at:.2e} monotone={monotone}"
        ));
    }
    let elapsed = start.elapsed();
    ok &= within_budget(elapsed, Duration::from_secs(10));
    Outcome::new(ok, format!("{} ({elapsed:.2?})", parts.join("; ")))
}

/// Log-log gap slopes and the U = −1 sign map.
fn gap_exponents() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (kappa, target) in [(0.5, 2.0), (1.0, 1.0)] {
        let p = U1Params::new(0.5, 0.0, kappa, StarkSign::Plus).unwrap();
        let ac = u1::critical_alpha(&p).unwrap();
        let fit = u1::gap_fit(&p, (ac - 1e-2, ac - 1e-5), 24, Execution::Parallel).unwrap();
        let pass = (fit.slope - target).abs() <= 0.05;
        ok &= pass;
        parts.push(format!(
            "kappa={kappa}: slope {:.4} (R2 {:.6})",
            fit.slope, fit.r_squared
        ));
    }
    let mut sym_err: f64 = 0.0;
    for (delta, kappa) in [(0.5, 0.5), (0.5, 1.0), (0.3, -0.2)] {
        let minus = U1Params::new(delta, 0.0, kappa, StarkSign::Minus).unwrap();
        let plus = U1Params::new(-delta, 0.0, -kappa, StarkSign::Plus).unwrap();
        let ac = u1::critical_alpha(&minus).unwrap();
        for frac in [0.2, 0.6, 0.99] {
            for n in 0..5 {
                let a = u1::self_consistent_level(&minus.with_alpha(frac * ac), n, Branch::Lower)
                    .unwrap();
                let b = u1::self_consistent_level(&plus.with_alpha(frac * ac), n, Branch::Lower)
                    .unwrap();
                sym_err = sym_err.max((a - b).abs());
            }
        }
    }
    ok &= sym_err < 1e-10;
    parts.push(format!("U=-1 map err {sym_err:.1e}"));
    Outcome::new(ok, parts.join("; "))
}

/// RWA lower branch: monotone decrease past α_c, ground state at n = 0 below.
fn goldstone_regime() -> Outcome {
    let base = U1Params::new(0.5, 0.0, 1.0, StarkSign::Plus).unwrap();
    let ac = u1::critical_alpha(&base).unwrap();
    let above = base.with_alpha(1.1 * ac);
    let n_max = 1_000_000;
    let mut decreasing = true;
    let mut last = 0.0;
    for n in 1..=n_max {
        last = u1::rwa_lower_step(&above, n).unwrap();
        if last <= 0.0 {
            decreasing = false;
            break;
        }
    }
    let below = u1::rwa_ground_index(&base.with_alpha(0.9 * ac), 1000).unwrap();
    let above_idx = u1::rwa_ground_index(&above, n_max).unwrap();
    let ok = decreasing
        && last < 1e-8
        && below.index == GroundIndex::Finite(0)
        && above_idx.index == GroundIndex::Unbounded;
    Outcome::new(
        ok,
        format!(
            "strictly decreasing to 1e6: {decreasing}, last step {last:.2e}, argmin at 0.9ac {:?}, at 1.1ac {:?}",
            below.index, above_idx.index
        ),
    )
}

/// Expansion eigenvectors against ED eigenvectors.
fn wavefunction_fidelity() -> Outcome {
    let mut ok = true;
    let mut worst: f64 = 1.0;
    let mut notes = Vec::new();
    for r in [0.5, 2.0] {
        let p = fig1(r);
        let ed_res = ed::diagonalize(&p, 200).unwrap();
        let spec = spectrum::find_spectrum(
            &p,
            (ed_res.energies[0] - 0.5, ed_res.energies[3] + 0.1),
            &LevelOptions::default(),
        )
        .unwrap();
        for k in 0..4 {
            let level = spec.levels[k];
            let expected_parity = Parity::from_sign(ed_res.parities[k]);
            if level.parity != expected_parity || (level.energy - ed_res.energies[k]).abs() > 1e-6 {
                ok = false;
                notes.push(format!("r={r} level {k} mismatch"));
                continue;
            }
            let table = boa::eigenvector_coefficients(
                &p,
                level.energy,
                level.parity,
                &SeriesOptions::default(),
                boa::DEFAULT_G_ROOT_TOL,
            )
            .unwrap();
            let v = ed_res.vectors.column(k).into_owned();
            let fid = ed::fidelity(&table, &p, &v)
                .unwrap_or_else(|e| panic!("fidelity r={r} k={k}: {e:?}"));
            worst = worst.min(fid);
        }
    }
    ok &= worst >= 1.0 - 1e-8;
    Outcome::new(
        ok,
        format!("min fidelity 1 - {:.2e} {}", 1.0 - worst, notes.join("; ")),
    )
}

/// Residuals, parity purity, overlap orthogonality, parameter round trips.
fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut ok = true;
    let mut parts = Vec::new();

    let mut max_res: f64 = 0.0;
    let mut points = 0;
    let mut failures = 0;
    while points < 100 {
        let p = ModelParams::new(
            rng.random_range(0.1..2.0),
            rng.random_range(0.1..1.5),
            rng.random_range(0.1..1.5),
            rng.random_range(-0.9..0.9),
        )
        .unwrap();
        let e: f64 = rng.random_range(-3.0..5.0);
        let poles = spectrum::poles_in(&p, e - 1e-3, e + 1e-3).unwrap();
        if !poles.is_empty() {
            continue;
        }
        points += 1;
        match boa::coefficients(&p, e, &SeriesOptions::default()) {
            Ok(t) => max_res = max_res.max(t.max_residual),
            Err(_) => failures += 1,
        }
    }
    ok &= failures == 0 && max_res < boa::DEFAULT_RESIDUAL_TOL;
    parts.push(format!("residual max {max_res:.1e} ({failures} failures)"));

    let mut purity: f64 = 1.0;
    for r in [0.5, 2.0] {
        let res = ed::diagonalize(&fig1(r), 200).unwrap();
        for k in 0..20 {
            purity = purity.min(res.parities[k].abs());
        }
    }
    ok &= purity > 1.0 - 1e-8;
    parts.push(format!("parity purity 1 - {:.1e}", 1.0 - purity));

    let size = 200;
    let small = ed::orthogonality_defect(&ed::displaced_overlap_matrix(0.1, size), size - 10);
    let w = boa::GFunction::new(&fig1(0.5), SeriesOptions::default())
        .unwrap()
        .w();
    let d = ed::displaced_overlap_matrix(w, size);
    let inner = (1..size)
        .rev()
        .find(|&n| n + 10 + (8.0 * w * (2.0 * n as f64).sqrt()).ceil() as usize <= size)
        .unwrap();
    let fig_defect = ed::orthogonality_defect(&d, inner);
    let fixed_margin = ed::orthogonality_defect(&d, size - 10);
    ok &= small < 1e-8 && fig_defect < 1e-8;
    parts.push(format!(
        "orthogonality w=0.1 {small:.1e}, w={w:.3} inner {inner} {fig_defect:.1e} (fixed 10-row margin {fixed_margin:.1e})"
    ));

    let mut trip: f64 = 0.0;
    for _ in 0..100 {
        let p = ModelParams::new(
            rng.random_range(0.0..2.0),
            rng.random_range(0.01..2.0),
            rng.random_range(0.01..2.0),
            rng.random_range(-0.99..0.99),
        )
        .unwrap();
        let (a, k) = p.to_alpha_kappa().unwrap();
        let q = ModelParams::from_alpha_kappa(p.delta, a, k, p.stark_u).unwrap();
        trip = trip
            .max((q.g1 - p.g1).abs() / p.g1)
            .max((q.g2 - p.g2).abs() / p.g2);
        let ratio = p.g2 / p.g1;
        let rr = ModelParams::with_ratio(p.delta, p.g1, ratio, p.stark_u).unwrap();
        trip = trip.max((rr.derive().unwrap().r - ratio).abs() / ratio);
        let unity = ModelParams::from_alpha_kappa(p.delta, a, k, 1.0).unwrap();
        let back = U1Params::from_model(&unity).unwrap();
        trip = trip
            .max((back.alpha - a).abs() / a)
            .max((back.kappa - k).abs());
    }
    ok &= trip < 1e-14;
    parts.push(format!("round trip {trip:.1e}"));
    Outcome::new(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 G-function roots vs ED", g_function_vs_ed),
        (
            "2 first-order critical couplings",
            first_order_critical_points,
        ),
        ("3 pole structure", pole_structure),
        ("4 unity-Stark spectral collapse", spectral_collapse),
        ("5 gap exponents", gap_exponents),
        ("6 RWA Goldstone regime", goldstone_regime),
        ("7 wavefunction fidelity", wavefunction_fidelity),
        ("8 property suites", property_suites),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("[{tag}] {name} ({:.2?}): {}", start.elapsed(), out.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
