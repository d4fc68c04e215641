//! One function per subcommand: validate, compute, tabulate, plot.

use arsm_core::boa::SeriesOptions;
use arsm_core::spectrum::{self, CrossingPoint, LevelOptions, DEFAULT_ROOT_TOL};
use arsm_core::u1::{self, Branch, U1Params};
use arsm_core::{ed as ed_core, CouplingFamily, Error, ModelParams, Parity, StarkSign};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::output::{Cell, RunInfo, Table};
use crate::plot::{Plot, Series, Style, PALETTE};
use crate::{describe, BranchArg, Context, Failure, FamilyArgs, ModelArgs, UnityArgs};

type Outcome = Result<(), Failure>;

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn check_range(name: &str, range: (f64, f64)) -> Outcome {
    if range.0.is_finite() && range.1.is_finite() && range.0 < range.1 {
        Ok(())
    } else {
        Err(config(format!(
            "{name} range [{}, {}] is empty",
            range.0, range.1
        )))
    }
}

fn check_count(name: &str, n: usize, min: usize) -> Outcome {
    if n >= min {
        Ok(())
    } else {
        Err(config(format!("{name} must be at least {min}, got {n}")))
    }
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect()
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, Failure> {
        let g2 = match (self.g2, self.r) {
            (Some(g2), None) => g2,
            (None, Some(r)) => r * self.g1,
            _ => return Err(config("give exactly one of --g2 and --r")),
        };
        Ok(ModelParams::new(self.delta, self.g1, g2, self.u)?)
    }
}

fn model_info(p: &ModelParams) -> Vec<(&'static str, Cell)> {
    vec![
        ("delta", p.delta.into()),
        ("g1", p.g1.into()),
        ("g2", p.g2.into()),
        ("stark_u", p.stark_u.into()),
    ]
}

impl FamilyArgs {
    fn family(&self) -> Result<CouplingFamily, Failure> {
        let fam = CouplingFamily::new(self.delta, self.u, self.r);
        // validates Δ, U and r at a representative coupling
        fam.at(1.0)?;
        Ok(fam)
    }

    fn info(&self) -> Vec<(&'static str, Cell)> {
        vec![
            ("delta", self.delta.into()),
            ("stark_u", self.u.into()),
            ("r", self.r.into()),
        ]
    }
}

impl UnityArgs {
    fn params(&self, alpha: f64) -> Result<U1Params, Failure> {
        let sign = if self.u == 1.0 {
            StarkSign::Plus
        } else if self.u == -1.0 {
            StarkSign::Minus
        } else {
            return Err(config(format!("--u must be +1 or -1 here, got {}", self.u)));
        };
        Ok(U1Params::new(self.delta, alpha, self.kappa, sign)?)
    }

    fn info(&self) -> Vec<(&'static str, Cell)> {
        vec![
            ("delta", self.delta.into()),
            ("stark_u", self.u.into()),
            ("kappa", self.kappa.into()),
        ]
    }
}

fn finish(mut params: Vec<(&'static str, Cell)>, ctx: &Context, command: &'static str) -> RunInfo {
    params.push(("tol", ctx.tol.into()));
    RunInfo { command, params }
}

pub fn gcurve(
    ctx: &Context,
    model: &ModelArgs,
    range: (f64, f64),
    points: usize,
    ylim: f64,
) -> Outcome {
    check_range("energy", range)?;
    check_count("--points", points, 2)?;
    if !(ylim > 0.0) {
        return Err(config("--ylim must be positive"));
    }
    let p = model.params()?;
    let energies = linspace(range, points);
    let curve = spectrum::g_curve(&p, &energies, &SeriesOptions::default(), ctx.exec)?;
    let poles = spectrum::poles_in(&p, range.0, range.1)?;

    let mut table = Table::new(
        "gcurve",
        &["energy", "g_plus", "g_minus", "near_pole", "status"],
    );
    let mut flagged = 0;
    for pt in &curve {
        if pt.error.is_some() {
            flagged += 1;
        }
        let status = pt.error.clone().unwrap_or_else(|| "ok".into());
        table.push(vec![
            pt.energy.into(),
            pt.even.into(),
            pt.odd.into(),
            pt.near_pole.into(),
            status.into(),
        ]);
    }
    if flagged == curve.len() {
        return Err(Failure::Numerical(
            "no energy on the grid could be evaluated".into(),
        ));
    }
    if flagged > 0 {
        eprintln!("{flagged} of {} grid points flagged", curve.len());
    }
    let mut pole_table = Table::new("poles", &["index", "energy"]);
    for (m, e) in &poles {
        pole_table.push(vec![(*m).into(), (*e).into()]);
    }

    let mut info = model_info(&p);
    info.extend([
        ("e_min", range.0.into()),
        ("e_max", range.1.into()),
        ("points", points.into()),
        ("ylim", ylim.into()),
    ]);
    let info = finish(info, ctx, "gcurve");

    let line = |f: fn(&arsm_core::spectrum::GCurvePoint) -> Option<f64>| -> Vec<(f64, f64)> {
        curve
            .iter()
            .map(|pt| (pt.energy, f(pt).unwrap_or(f64::NAN)))
            .collect()
    };
    let plot = Plot {
        title: format!(
            "G-curves, delta={} g1={} g2={} U={}",
            p.delta, p.g1, p.g2, p.stark_u
        ),
        x_label: "E".into(),
        y_label: "G".into(),
        y_range: Some((-ylim, ylim)),
        series: vec![
            Series::new("G+ (even)", line(|pt| pt.even), Style::Line, PALETTE[0]),
            Series::new("G- (odd)", line(|pt| pt.odd), Style::Line, PALETTE[1]),
            Series::new(
                "",
                vec![(range.0, 0.0), (range.1, 0.0)],
                Style::Line,
                "#000000",
            ),
        ],
        vlines: poles.iter().map(|(_, e)| *e).collect(),
        ..Plot::default()
    };
    ctx.sink.emit(
        &info,
        &[table, pole_table],
        &[("gcurve", plot.render())],
        true,
    )?;
    Ok(())
}

fn crossing_row(table: &mut Table, c: &CrossingPoint) {
    let method = match c.method {
        spectrum::CrossingMethod::ClosedForm => "closed_form",
        spectrum::CrossingMethod::Lifting => "lifting",
        spectrum::CrossingMethod::Diagonalization => "diagonalization",
    };
    table.push(vec![
        c.g1.into(),
        c.energy.into(),
        c.pole_index.into(),
        method.into(),
    ]);
}

const CROSSING_COLUMNS: [&str; 4] = ["g1", "energy", "pole_index", "method"];

pub fn spectrum(
    ctx: &Context,
    family: &FamilyArgs,
    g1_range: (f64, f64),
    g1_points: usize,
    e_range: (f64, f64),
    m_max: usize,
) -> Outcome {
    check_range("g1", g1_range)?;
    check_range("energy", e_range)?;
    check_count("--g1-points", g1_points, 2)?;
    if g1_range.0 <= 0.0 {
        return Err(config("--g1-min must be positive"));
    }
    let fam = family.family()?;
    let opts = LevelOptions {
        root_tol: ctx.tol.unwrap_or(DEFAULT_ROOT_TOL),
        ..LevelOptions::default()
    };
    let g1s = linspace(g1_range, g1_points);
    let results = spectrum::level_sweep(&fam, &g1s, e_range, &opts, ctx.exec);

    let mut levels = Table::new(
        "spectrum",
        &["g1", "level_index", "energy", "parity", "residual"],
    );
    let mut poles = Table::new("spectrum_poles", &["g1", "index", "energy"]);
    let mut gap = Table::new("spectrum_gap", &["g1", "delta_e"]);
    let mut even_pts = Vec::new();
    let mut odd_pts = Vec::new();
    let mut pole_lines: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut failures = 0;
    for (g1, res) in g1s.iter().zip(&results) {
        let res = match res {
            Ok(r) => r,
            Err(e) => {
                failures += 1;
                eprintln!("g1 = {g1}: {}", describe(e));
                continue;
            }
        };
        for (i, l) in res.levels.iter().enumerate() {
            levels.push(vec![
                (*g1).into(),
                i.into(),
                l.energy.into(),
                parity_name(l.parity).into(),
                l.diagnostics.g_residual.into(),
            ]);
            match l.parity {
                Parity::Even => even_pts.push((*g1, l.energy)),
                Parity::Odd => odd_pts.push((*g1, l.energy)),
            }
        }
        for (m, e) in &res.poles {
            poles.push(vec![(*g1).into(), (*m).into(), (*e).into()]);
        }
        if res.levels.len() >= 2 {
            gap.push(vec![
                (*g1).into(),
                (res.levels[1].energy - res.levels[0].energy).into(),
            ]);
        }
    }
    if failures == g1s.len() {
        return Err(Failure::Numerical(
            "no coupling on the grid could be solved".into(),
        ));
    }
    // pole lines over the whole grid, broken outside the energy window
    for m in 0..=m_max {
        let line: Vec<(f64, f64)> = g1s
            .iter()
            .map(|&g1| {
                let p = fam.at(g1).ok();
                let e = p.and_then(|p| {
                    if m == 0 {
                        spectrum::first_pole(&p).ok()
                    } else {
                        spectrum::regular_pole(&p, m).ok()
                    }
                });
                (g1, e.unwrap_or(f64::NAN))
            })
            .collect();
        pole_lines.push(line);
    }

    let mut crossings = Table::new("crossings", &CROSSING_COLUMNS);
    let mut markers = Vec::new();
    if let Some(c) = spectrum::first_order_critical(&fam)? {
        if c.g1 >= g1_range.0 && c.g1 <= g1_range.1 {
            crossing_row(&mut crossings, &c);
            markers.push((c.g1, c.energy));
        }
    }
    for m in 1..=m_max {
        match spectrum::juddian_crossings(&fam, m, g1_range, 4 * g1_points) {
            Ok(found) => {
                for c in found {
                    crossing_row(&mut crossings, &c);
                    markers.push((c.g1, c.energy));
                }
            }
            Err(e) => eprintln!("pole {m}: {}", describe(&e)),
        }
    }

    let mut info = family.info();
    info.extend([
        ("g1_min", g1_range.0.into()),
        ("g1_max", g1_range.1.into()),
        ("g1_points", g1_points.into()),
        ("e_min", e_range.0.into()),
        ("e_max", e_range.1.into()),
        ("m_max", m_max.into()),
    ]);
    let info = finish(info, ctx, "spectrum");

    let mut series = vec![
        Series::new("even", even_pts, Style::Markers, PALETTE[0]),
        Series::new("odd", odd_pts, Style::Markers, PALETTE[1]),
    ];
    for (m, line) in pole_lines.into_iter().enumerate() {
        let label = if m == 0 { "poles" } else { "" };
        series.push(Series::new(label, line, Style::Dashed, PALETTE[5]));
    }
    series.push(Series::new("crossings", markers, Style::Markers, "#000000"));
    let levels_plot = Plot {
        title: format!(
            "Spectrum, delta={} U={} r={}",
            family.delta, family.u, family.r
        ),
        x_label: "g1".into(),
        y_label: "E".into(),
        y_range: Some(e_range),
        series,
        ..Plot::default()
    };
    let gap_pts: Vec<(f64, f64)> = gap
        .rows
        .iter()
        .filter_map(|r| match (&r[0], &r[1]) {
            (Cell::F(g), Cell::F(d)) => Some((*g, *d)),
            _ => None,
        })
        .collect();
    let gap_plot = Plot {
        title: "Lowest gap".into(),
        x_label: "g1".into(),
        y_label: "E1 - E0".into(),
        series: vec![Series::new("", gap_pts, Style::Line, PALETTE[2])],
        ..Plot::default()
    };
    ctx.sink.emit(
        &info,
        &[levels, poles, gap, crossings],
        &[
            ("spectrum", levels_plot.render()),
            ("spectrum_gap", gap_plot.render()),
        ],
        true,
    )?;
    Ok(())
}

pub fn poles(ctx: &Context, model: &ModelArgs, m_max: usize) -> Outcome {
    let p = model.params()?;
    let ladder = spectrum::poles(&p, m_max)?;
    let mut table = Table::new("poles", &["index", "energy", "kind"]);
    table.push(vec![
        0usize.into(),
        ladder.first_pole.into(),
        "first".into(),
    ]);
    for (k, e) in ladder.regular_poles.iter().enumerate() {
        table.push(vec![(k + 1).into(), (*e).into(), "regular".into()]);
    }
    let mut info = model_info(&p);
    info.push(("m_max", m_max.into()));
    ctx.sink
        .emit(&finish(info, ctx, "poles"), &[table], &[], true)?;
    Ok(())
}

pub fn critical(
    ctx: &Context,
    family: &FamilyArgs,
    ed_n: usize,
    g1_range: (f64, f64),
    scan: usize,
) -> Outcome {
    check_range("g1", g1_range)?;
    check_count("--ed-n", ed_n, 2)?;
    check_count("--scan", scan, 8)?;
    if g1_range.0 <= 0.0 {
        return Err(config("--g1-min must be positive"));
    }
    let fam = family.family()?;
    let closed = spectrum::first_order_critical(&fam)?;
    let by_ed = spectrum::crossing_via_ed(&fam, g1_range, ed_n, scan)?;

    let mut table = Table::new("critical", &CROSSING_COLUMNS);
    match &closed {
        Some(c) => {
            println!("closed form: g1c = {:.10}, E = {:.10}", c.g1, c.energy);
            crossing_row(&mut table, c);
        }
        None => println!(
            "closed form: no first-order crossing (radicand {:.6e} <= 0)",
            spectrum::critical_radicand(&fam)
        ),
    }
    match &by_ed {
        Some(c) => {
            println!("ED (N = {ed_n}): g1c = {:.10}, E = {:.10}", c.g1, c.energy);
            crossing_row(&mut table, c);
        }
        None => println!(
            "ED (N = {ed_n}): no crossing in [{}, {}]",
            g1_range.0, g1_range.1
        ),
    }
    if let (Some(a), Some(b)) = (&closed, &by_ed) {
        println!("difference: {:.3e}", (a.g1 - b.g1).abs());
    }
    let mut info = family.info();
    info.extend([
        ("ed_n", ed_n.into()),
        ("g1_min", g1_range.0.into()),
        ("g1_max", g1_range.1.into()),
        ("scan", scan.into()),
    ]);
    ctx.sink
        .emit(&finish(info, ctx, "critical"), &[table], &[], false)?;
    Ok(())
}

pub fn crossing(
    ctx: &Context,
    family: &FamilyArgs,
    m: usize,
    g1_range: (f64, f64),
    points: usize,
) -> Outcome {
    check_range("g1", g1_range)?;
    check_count("--points", points, 2)?;
    if g1_range.0 <= 0.0 {
        return Err(config("--g1-min must be positive"));
    }
    let fam = family.family()?;
    let found: Vec<CrossingPoint> = if m == 0 {
        spectrum::first_order_critical(&fam)?
            .into_iter()
            .filter(|c| c.g1 >= g1_range.0 && c.g1 <= g1_range.1)
            .collect()
    } else {
        spectrum::juddian_crossings(&fam, m, g1_range, points)?
    };
    eprintln!("{} crossing(s) on pole {m}", found.len());
    let mut table = Table::new("crossings", &CROSSING_COLUMNS);
    for c in &found {
        crossing_row(&mut table, c);
    }
    let mut info = family.info();
    info.extend([
        ("m", m.into()),
        ("g1_min", g1_range.0.into()),
        ("g1_max", g1_range.1.into()),
        ("points", points.into()),
    ]);
    ctx.sink
        .emit(&finish(info, ctx, "crossing"), &[table], &[], true)?;
    Ok(())
}

pub fn ed(ctx: &Context, model: &ModelArgs, n: Option<usize>, levels: usize) -> Outcome {
    let p = model.params()?;
    let n = n.unwrap_or(if p.stark_u.abs() == 1.0 {
        ed_core::UNITY_TRUNCATION
    } else {
        ed_core::DEFAULT_TRUNCATION
    });
    check_count("--n", n, 1)?;
    check_count("--levels", levels, 1)?;
    let res = ed_core::diagonalize(&p, n)?;
    let converged = match ctx.tol {
        None => res.converged_count,
        Some(tol) => {
            let reference = ed_core::merged_levels(&p, 2 * n)?;
            res.energies
                .iter()
                .zip(&reference)
                .take_while(|(a, (b, _))| (*a - *b).abs() < tol)
                .count()
        }
    };
    let shown = levels.min(res.energies.len());
    let mut table = Table::new(
        "ed",
        &[
            "level",
            "energy",
            "parity",
            "parity_expectation",
            "converged",
        ],
    );
    for k in 0..shown {
        let pe = res.parities[k];
        let name = if pe > 0.5 {
            "even"
        } else if pe < -0.5 {
            "odd"
        } else {
            "mixed"
        };
        table.push(vec![
            k.into(),
            res.energies[k].into(),
            name.into(),
            pe.into(),
            (k < converged).into(),
        ]);
    }
    eprintln!(
        "{} of {shown} levels stable to {:.1e} when N is doubled from {n}",
        converged.min(shown),
        ctx.tol.unwrap_or(ed_core::CONVERGENCE_TOL)
    );
    let mut info = model_info(&p);
    info.extend([("n_truncation", n.into()), ("levels", levels.into())]);
    let plot = Plot {
        title: format!("ED levels, N = {n}"),
        x_label: "level".into(),
        y_label: "E".into(),
        series: vec![Series::new(
            "",
            (0..shown).map(|k| (k as f64, res.energies[k])).collect(),
            Style::Markers,
            PALETTE[0],
        )],
        ..Plot::default()
    };
    ctx.sink.emit(
        &finish(info, ctx, "ed"),
        &[table],
        &[("ed", plot.render())],
        true,
    )?;
    Ok(())
}

fn branches(arg: BranchArg) -> &'static [Branch] {
    match arg {
        BranchArg::Lower => &[Branch::Lower],
        BranchArg::Upper => &[Branch::Upper],
        BranchArg::Both => &[Branch::Lower, Branch::Upper],
    }
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Lower => "lower",
        Branch::Upper => "upper",
    }
}

pub fn u1(
    ctx: &Context,
    unity: &UnityArgs,
    alpha: Option<f64>,
    alpha_range: (Option<f64>, Option<f64>),
    alpha_points: usize,
    branch: BranchArg,
    levels: usize,
) -> Outcome {
    check_count("--levels", levels, 1)?;
    let base = unity.params(alpha.unwrap_or(0.0))?;
    let critical = u1::critical_alpha(&base).ok();
    let alphas = match alpha {
        Some(a) => vec![a],
        None => {
            check_count("--alpha-points", alpha_points, 2)?;
            let lo = alpha_range.0.unwrap_or(0.0);
            let hi = alpha_range.1.or(critical).unwrap_or(1.0);
            check_range("alpha", (lo, hi))?;
            if lo < 0.0 {
                return Err(config("--alpha-min must be non-negative"));
            }
            linspace((lo, hi), alpha_points)
        }
    };
    match critical {
        Some(ac) => eprintln!("alpha_c = {ac:.12}"),
        None => eprintln!(
            "no lower-branch transition (radicand {:.6e} < 0)",
            u1::critical_radicand(&base)
        ),
    }

    let mut table = Table::new("u1", &["alpha", "branch", "n", "energy", "e_minus_edge"]);
    let mut notes = Vec::new();
    let mut curves: Vec<(Branch, usize, Vec<(f64, f64)>)> = Vec::new();
    for &b in branches(branch) {
        let results = u1::branch_sweep(&base, &alphas, b, levels, ctx.exec);
        let mut empty = 0;
        for (&a, res) in alphas.iter().zip(&results) {
            let spec = match res {
                Ok(s) => s,
                Err(e) => {
                    notes.push(format!(
                        "{} branch, alpha = {a}: {}",
                        branch_name(b),
                        describe(e)
                    ));
                    empty += 1;
                    continue;
                }
            };
            if spec.levels.is_empty() {
                empty += 1;
                if alphas.len() == 1 {
                    // report why there is nothing
                    if let Err(e) = u1::self_consistent_level(&base.with_alpha(a), 0, b) {
                        notes.push(format!("{} branch: {}", branch_name(b), describe(&e)));
                    }
                }
            }
            for &(n, e) in &spec.levels {
                table.push(vec![
                    a.into(),
                    branch_name(b).into(),
                    n.into(),
                    e.into(),
                    (e - spec.upper_bound).into(),
                ]);
                match curves.iter_mut().find(|(cb, cn, _)| *cb == b && *cn == n) {
                    Some((_, _, pts)) => pts.push((a, e - spec.upper_bound)),
                    None => curves.push((b, n, vec![(a, e - spec.upper_bound)])),
                }
            }
        }
        if empty > 0 && alphas.len() > 1 {
            notes.push(format!(
                "{} branch: {empty} coupling(s) without levels",
                branch_name(b)
            ));
        }
    }
    if table.rows.is_empty() {
        let reason = if notes.is_empty() {
            "no levels".to_string()
        } else {
            notes.join("; ")
        };
        return Err(Failure::Numerical(reason));
    }
    for n in &notes {
        eprintln!("{n}");
    }

    let mut info = unity.info();
    match alpha {
        Some(a) => info.push(("alpha", a.into())),
        None => info.extend([
            ("alpha_min", alphas[0].into()),
            ("alpha_max", alphas[alphas.len() - 1].into()),
            ("alpha_points", alpha_points.into()),
        ]),
    }
    info.extend([
        ("branch", format!("{branch:?}").to_lowercase().into()),
        ("levels", levels.into()),
        ("alpha_c", critical.into()),
    ]);
    let mut plots = Vec::new();
    for &b in branches(branch) {
        let series: Vec<Series> = curves
            .iter()
            .filter(|(cb, _, _)| *cb == b)
            .map(|(_, n, pts)| {
                Series::new(
                    format!("n={n}"),
                    pts.clone(),
                    Style::Line,
                    PALETTE[n % PALETTE.len()],
                )
            })
            .collect();
        if series.is_empty() {
            continue;
        }
        let plot = Plot {
            title: format!(
                "U = {} {} branch, delta={} kappa={}",
                unity.u,
                branch_name(b),
                unity.delta,
                unity.kappa
            ),
            x_label: "alpha".into(),
            y_label: "E - E_edge".into(),
            series,
            vlines: critical.into_iter().collect(),
            ..Plot::default()
        };
        let name = match b {
            Branch::Lower => "u1_lower",
            Branch::Upper => "u1_upper",
        };
        plots.push((name, plot.render()));
    }
    ctx.sink
        .emit(&finish(info, ctx, "u1"), &[table], &plots, true)?;
    Ok(())
}

pub fn gapfit(ctx: &Context, unity: &UnityArgs, dist: (f64, f64), samples: usize) -> Outcome {
    check_range("distance", dist)?;
    check_count("--samples", samples, 8)?;
    if dist.0 <= 0.0 {
        return Err(config("--dist-min must be positive"));
    }
    let p = unity.params(0.0)?;
    let ac = u1::critical_alpha(&p)?;
    if dist.1 >= ac {
        return Err(config(format!(
            "--dist-max {} must be below alpha_c = {ac}",
            dist.1
        )));
    }
    let fit =
        u1::gap_fit(&p, (ac - dist.1, ac - dist.0), samples, ctx.exec).map_err(|e| match e {
            Error::InvalidParameter { .. } => Failure::from(e),
            other => Failure::Numerical(describe(&other)),
        })?;
    let t = StudentsT::new(0.0, 1.0, (samples - 2) as f64)
        .map_err(|e| Failure::Numerical(e.to_string()))?
        .inverse_cdf(0.975);
    let (lo, hi) = (
        fit.slope - t * fit.slope_stderr,
        fit.slope + t * fit.slope_stderr,
    );
    println!("alpha_c = {ac:.12}");
    println!(
        "slope = {:.6} +/- {:.2e} (95% CI [{lo:.6}, {hi:.6}]), intercept = {:.6}, R^2 = {:.8}",
        fit.slope,
        t * fit.slope_stderr,
        fit.intercept,
        fit.r_squared
    );

    let mut data = Table::new("gapfit", &["alpha", "distance", "gap"]);
    for &(a, g) in &fit.samples {
        data.push(vec![a.into(), (ac - a).into(), g.into()]);
    }
    let mut summary = Table::new(
        "fit",
        &[
            "slope",
            "slope_stderr",
            "ci95_low",
            "ci95_high",
            "intercept",
            "r_squared",
            "alpha_c",
        ],
    );
    summary.push(vec![
        fit.slope.into(),
        fit.slope_stderr.into(),
        lo.into(),
        hi.into(),
        fit.intercept.into(),
        fit.r_squared.into(),
        ac.into(),
    ]);
    let mut info = unity.info();
    info.extend([
        ("dist_min", dist.0.into()),
        ("dist_max", dist.1.into()),
        ("samples", samples.into()),
    ]);
    let pts: Vec<(f64, f64)> = fit.samples.iter().map(|&(a, g)| (ac - a, g)).collect();
    let line = [dist.0, dist.1]
        .iter()
        .map(|&d| (d, (fit.intercept + fit.slope * d.ln()).exp()))
        .collect();
    let plot = Plot {
        title: format!("Gap near alpha_c, slope {:.4}", fit.slope),
        x_label: "alpha_c - alpha".into(),
        y_label: "E1 - E0".into(),
        log_x: true,
        log_y: true,
        series: vec![
            Series::new("samples", pts, Style::Markers, PALETTE[0]),
            Series::new("fit", line, Style::Line, PALETTE[1]),
        ],
        ..Plot::default()
    };
    ctx.sink.emit(
        &finish(info, ctx, "gapfit"),
        &[data, summary],
        &[("gapfit", plot.render())],
        false,
    )?;
    Ok(())
}
