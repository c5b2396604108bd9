//! The seven subcommands: resolve parameters, run the core pipeline, emit
//! the table.

use std::io::Write;

use wedgesim_core::channel::{build_simplified, output_tmsv_closed_form};
use wedgesim_core::gaussian::{
    coherence, symplectic_eigenvalues, two_mode_squeezed_vacuum, Convention,
};
use wedgesim_core::mismatch::{acceleration_sweep, mode_mismatch, waveform_sweep};
use wedgesim_core::modes::{build_grid, ModeSpec, NormalizedModes, Region, SampledMode};
use wedgesim_core::overlap::{compute_overlaps, OverlapCache};
use wedgesim_core::quad::GaussLegendre;
use wedgesim_core::rng::SplitMix64;
use wedgesim_core::special::{bessel_product_im, log_gamma_complex, BesselOrder};
use wedgesim_core::sweep::{
    coherence_surface, linspace, median_contour, random_scan, ScanConfig, ScanRecord,
    WaveformParams,
};

use crate::args::{parse, Parsed};
use crate::render::{render_svg, PlotKind};
use crate::table::{format_f64, read_csv, Provenance, Table};
use crate::CliError;

fn parse_region(parsed: &Parsed) -> Result<Region, CliError> {
    match parsed.string("region", "I").as_str() {
        "I" => Ok(Region::I),
        "II" => Ok(Region::II),
        other => Err(CliError::Usage(format!(
            "--region must be I or II, got {other:?}"
        ))),
    }
}

fn parse_convention(parsed: &Parsed) -> Result<Convention, CliError> {
    parsed
        .string("convention", "physical")
        .parse()
        .map_err(|e: wedgesim_core::Error| CliError::Usage(e.to_string()))
}

fn relaxed_spec_with_warning(
    region: Region,
    accel: f64,
    width: f64,
    omega0: f64,
    mass: f64,
) -> Result<ModeSpec, CliError> {
    let spec = ModeSpec::relaxed(region, accel, width, omega0, mass)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if !spec.satisfies_guards() {
        eprintln!(
            "warning: parameters violate the regime guards \
             (omega0*width >= 5, 1/accel >= 5*width); results are diagnostics"
        );
    }
    Ok(spec)
}

/// Write the table in the requested format to --output or stdout.
fn emit(mut table: Table, parsed: &Parsed, kind: PlotKind) -> Result<(), CliError> {
    let format = parsed.string("format", "csv");
    let output = parsed.get("output");
    table.provenance.seal_command(output, &format);
    let bytes = match format.as_str() {
        "csv" => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            buf
        }
        "json" => {
            let mut buf = Vec::new();
            table.write_json(&mut buf)?;
            buf
        }
        "svg" => {
            if table.rows.is_empty() {
                return Err(CliError::Usage(
                    "nothing to plot: the table is empty".into(),
                ));
            }
            render_svg(&table, kind).into_bytes()
        }
        other => {
            return Err(CliError::Usage(format!(
                "--format must be csv, json or svg, got {other:?}"
            )))
        }
    };
    match output {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

pub fn modes(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 5] = ["accel", "width", "omega0", "mass", "region"];
    let parsed = parse(argv, &KEYS)?;
    let accel = parsed.f64("accel", 0.1)?;
    let width = parsed.f64("width", 2.0)?;
    let omega0 = parsed.f64("omega0", 5.0)?;
    let mass = parsed.f64("mass", 0.1)?;
    let region = parse_region(&parsed)?;
    let spec = relaxed_spec_with_warning(region, accel, width, omega0, mass)?;
    let pair = NormalizedModes::new(&spec)?;
    let mut prov = Provenance::new("modes");
    prov.field("accel", format_f64(accel));
    prov.field("width", format_f64(width));
    prov.field("omega0", format_f64(omega0));
    prov.field("mass", format_f64(mass));
    prov.field("region", region.label());
    let mut table = Table::new(&["x", "input", "output"], prov);
    for x in build_grid(&spec) {
        table.push(vec![x, pair.input_at(x)?, pair.output_at(x)?]);
    }
    emit(table, &parsed, PlotKind::Lines)
}

pub fn overlaps(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 6] = [
        "accel-min",
        "accel-max",
        "points",
        "width",
        "omega0",
        "mass",
    ];
    let parsed = parse(argv, &KEYS)?;
    let accel_min = parsed.f64("accel-min", 0.02)?;
    let accel_max = parsed.f64("accel-max", 0.2)?;
    let points = parsed.usize("points", 10)?;
    let width = parsed.f64("width", 2.0)?;
    let omega0 = parsed.f64("omega0", 5.0)?;
    let mass = parsed.f64("mass", 0.1)?;
    if points == 0 || !(accel_max >= accel_min) || accel_min <= 0.0 {
        return Err(CliError::Usage(
            "need --points >= 1 and 0 < accel-min <= accel-max".into(),
        ));
    }
    let cache = parsed.cache_dir().map(OverlapCache::new);
    let mut prov = Provenance::new("overlaps");
    prov.field("accel-min", format_f64(accel_min));
    prov.field("accel-max", format_f64(accel_max));
    prov.field("points", points);
    prov.field("width", format_f64(width));
    prov.field("omega0", format_f64(omega0));
    prov.field("mass", format_f64(mass));
    let mut table = Table::new(
        &["accel", "alpha_re", "alpha_im", "beta_re", "beta_im"],
        prov,
    );
    let mut guard_violations = 0usize;
    for accel in linspace(accel_min, accel_max, points) {
        let spec = ModeSpec::relaxed(Region::I, accel, width, omega0, mass)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if !spec.satisfies_guards() {
            guard_violations += 1;
        }
        let coeffs = match &cache {
            Some(c) => c.get_or_compute(&spec),
            None => compute_overlaps(&spec),
        };
        match coeffs {
            Ok(coeffs) => table.push(vec![
                accel,
                coeffs.alpha().re,
                coeffs.alpha().im,
                coeffs.beta().re,
                coeffs.beta().im,
            ]),
            Err(e) => eprintln!("warning: skipping accel {accel}: {e}"),
        }
    }
    if guard_violations > 0 {
        eprintln!(
            "warning: {guard_violations} of {points} accelerations violate the regime guards"
        );
    }
    if table.rows.is_empty() {
        return Err(CliError::Run("every overlap evaluation failed".into()));
    }
    if parsed.string("format", "csv") == "svg" {
        // two-line plot: alpha and beta against acceleration
        let mut slim = Table::new(&["accel", "alpha", "beta"], table.provenance.clone());
        for row in &table.rows {
            slim.push(vec![row[0], row[1], row[3]]);
        }
        return emit(slim, &parsed, PlotKind::Lines);
    }
    emit(table, &parsed, PlotKind::Lines)
}

pub fn surface(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 8] = [
        "r",
        "accel-min",
        "accel-max",
        "points",
        "width",
        "omega0",
        "mass",
        "convention",
    ];
    let parsed = parse(argv, &KEYS)?;
    let r = parsed.f64("r", 1.0)?;
    let accel_min = parsed.f64("accel-min", 1e-3)?;
    let accel_max = parsed.f64("accel-max", 0.2)?;
    let points = parsed.usize("points", 8)?;
    let width = parsed.f64("width", 2.0)?;
    let omega0 = parsed.f64("omega0", 5.0)?;
    let mass = parsed.f64("mass", 0.1)?;
    let convention = parse_convention(&parsed)?;
    if points == 0 || !(accel_max >= accel_min) || accel_min <= 0.0 {
        return Err(CliError::Usage(
            "need --points >= 1 and 0 < accel-min <= accel-max".into(),
        ));
    }
    let grid = linspace(accel_min, accel_max, points);
    let waveform = WaveformParams {
        width,
        omega0,
        mass,
    };
    let surface_points = coherence_surface(&grid, &grid, r, &waveform, convention)?;
    let mut prov = Provenance::new("surface");
    prov.field("r", format_f64(r));
    prov.field("accel-min", format_f64(accel_min));
    prov.field("accel-max", format_f64(accel_max));
    prov.field("points", points);
    prov.field("width", format_f64(width));
    prov.field("omega0", format_f64(omega0));
    prov.field("mass", format_f64(mass));
    prov.field("convention", convention.label());
    let mut table = Table::new(&["accel_I", "accel_II", "coherence"], prov);
    for p in &surface_points {
        table.push(vec![p.accel_i, p.accel_ii, p.coherence]);
    }
    emit(table, &parsed, PlotKind::Heatmap)
}

pub fn mismatch(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 14] = [
        "sweep",
        "accel",
        "width",
        "omega0",
        "mass",
        "accel-min",
        "accel-max",
        "points",
        "width-min",
        "width-max",
        "width-points",
        "omega0-min",
        "omega0-max",
        "omega0-points",
    ];
    let parsed = parse(argv, &KEYS)?;
    let sweep = parsed.string("sweep", "point");
    let accel = parsed.f64("accel", 0.1)?;
    let width = parsed.f64("width", 2.0)?;
    let omega0 = parsed.f64("omega0", 4.7)?;
    let mass = parsed.f64("mass", 0.1)?;
    let mut prov = Provenance::new("mismatch");
    prov.field("sweep", &sweep);
    let output = match sweep.as_str() {
        "point" => {
            prov.field("accel", format_f64(accel));
            prov.field("width", format_f64(width));
            prov.field("omega0", format_f64(omega0));
            prov.field("mass", format_f64(mass));
            let spec = relaxed_spec_with_warning(Region::I, accel, width, omega0, mass)?;
            let m = mode_mismatch(&spec)?;
            prov.note("grid_points", m.grid_points());
            let mut table = Table::new(&["param1", "param2", "mismatch"], prov);
            table.push(vec![accel, accel, m.value()]);
            return emit(table, &parsed, PlotKind::Scatter);
        }
        "accel" => {
            let lo = parsed.f64("accel-min", 0.02)?;
            let hi = parsed.f64("accel-max", 0.2)?;
            let n = parsed.usize("points", 20)?;
            if n == 0 || !(hi >= lo) || lo <= 0.0 {
                return Err(CliError::Usage(
                    "need --points >= 1 and 0 < accel-min <= accel-max".into(),
                ));
            }
            prov.field("accel-min", format_f64(lo));
            prov.field("accel-max", format_f64(hi));
            prov.field("points", n);
            prov.field("width", format_f64(width));
            prov.field("omega0", format_f64(omega0));
            prov.field("mass", format_f64(mass));
            acceleration_sweep(&linspace(lo, hi, n), width, omega0, mass)
        }
        "waveform" => {
            let wlo = parsed.f64("width-min", 1.0)?;
            let whi = parsed.f64("width-max", 2.0)?;
            let wn = parsed.usize("width-points", 5)?;
            let olo = parsed.f64("omega0-min", 4.0)?;
            let ohi = parsed.f64("omega0-max", 6.0)?;
            let on = parsed.usize("omega0-points", 5)?;
            if wn == 0 || on == 0 || !(whi >= wlo) || !(ohi >= olo) || wlo <= 0.0 {
                return Err(CliError::Usage("bad waveform grid bounds".into()));
            }
            prov.field("width-min", format_f64(wlo));
            prov.field("width-max", format_f64(whi));
            prov.field("width-points", wn);
            prov.field("omega0-min", format_f64(olo));
            prov.field("omega0-max", format_f64(ohi));
            prov.field("omega0-points", on);
            prov.field("accel", format_f64(accel));
            prov.field("mass", format_f64(mass));
            waveform_sweep(
                &linspace(wlo, whi, wn),
                &linspace(olo, ohi, on),
                accel,
                mass,
            )
        }
        other => {
            return Err(CliError::Usage(format!(
                "--sweep must be point, accel or waveform, got {other:?}"
            )))
        }
    };
    for (p1, p2, reason) in &output.skipped {
        eprintln!("warning: skipped point ({p1}, {p2}): {reason}");
    }
    let guard_violations = output.points.iter().filter(|p| !p.guards_ok).count();
    if guard_violations > 0 {
        eprintln!(
            "warning: {guard_violations} of {} points violate the regime guards",
            output.points.len()
        );
    }
    if output.points.is_empty() {
        return Err(CliError::Run("every sweep point failed".into()));
    }
    let kind = if sweep == "accel" {
        PlotKind::Lines
    } else {
        PlotKind::Heatmap
    };
    let mut table = Table::new(&["param1", "param2", "mismatch"], prov);
    for p in &output.points {
        table.push(vec![p.param1, p.param2, p.mismatch]);
    }
    if parsed.string("format", "csv") == "svg" && sweep == "accel" {
        let mut slim = Table::new(&["accel", "mismatch"], table.provenance.clone());
        for row in &table.rows {
            slim.push(vec![row[0], row[2]]);
        }
        return emit(slim, &parsed, kind);
    }
    emit(table, &parsed, kind)
}

pub fn scan(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 13] = [
        "count",
        "seed",
        "workers",
        "mass",
        "convention",
        "r-min",
        "r-max",
        "accel-min",
        "accel-max",
        "width-min",
        "width-max",
        "omega0-min",
        "omega0-max",
    ];
    let parsed = parse(argv, &KEYS)?;
    let defaults = ScanConfig::default();
    let config = ScanConfig {
        seed: parsed.u64("seed", defaults.seed)?,
        count: parsed.usize("count", defaults.count)?,
        r_range: (
            parsed.f64("r-min", defaults.r_range.0)?,
            parsed.f64("r-max", defaults.r_range.1)?,
        ),
        accel_range: (
            parsed.f64("accel-min", defaults.accel_range.0)?,
            parsed.f64("accel-max", defaults.accel_range.1)?,
        ),
        width_range: (
            parsed.f64("width-min", defaults.width_range.0)?,
            parsed.f64("width-max", defaults.width_range.1)?,
        ),
        omega0_range: (
            parsed.f64("omega0-min", defaults.omega0_range.0)?,
            parsed.f64("omega0-max", defaults.omega0_range.1)?,
        ),
        mass: parsed.f64("mass", defaults.mass)?,
        convention: parse_convention(&parsed)?,
        workers: parsed.usize("workers", defaults.workers)?,
        cache_dir: parsed.cache_dir(),
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let records = random_scan(&config)?;
    let mut prov = Provenance::new("scan");
    prov.field("count", config.count);
    prov.field("seed", config.seed);
    prov.field("workers", config.workers);
    prov.field("r-min", format_f64(config.r_range.0));
    prov.field("r-max", format_f64(config.r_range.1));
    prov.field("accel-min", format_f64(config.accel_range.0));
    prov.field("accel-max", format_f64(config.accel_range.1));
    prov.field("width-min", format_f64(config.width_range.0));
    prov.field("width-max", format_f64(config.width_range.1));
    prov.field("omega0-min", format_f64(config.omega0_range.0));
    prov.field("omega0-max", format_f64(config.omega0_range.1));
    prov.field("mass", format_f64(config.mass));
    prov.field("convention", config.convention.label());
    let mut table = Table::new(
        &[
            "index",
            "r",
            "accel_I",
            "accel_II",
            "width",
            "omega0",
            "alpha_I",
            "alpha_II",
            "mismatch",
            "coherence",
        ],
        prov,
    );
    for rec in &records {
        table.push(vec![
            rec.index as f64,
            rec.r,
            rec.accel_i,
            rec.accel_ii,
            rec.width,
            rec.omega0,
            rec.alpha_i,
            rec.alpha_ii,
            rec.mismatch,
            rec.coherence,
        ]);
    }
    if parsed.string("format", "csv") == "svg" {
        let mut slim = Table::new(&["mismatch", "coherence"], table.provenance.clone());
        for row in &table.rows {
            slim.push(vec![row[8], row[9]]);
        }
        return emit(slim, &parsed, PlotKind::Scatter);
    }
    emit(table, &parsed, PlotKind::Scatter)
}

pub fn contour(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 3] = ["input", "r-bins", "m-bins"];
    let parsed = parse(argv, &KEYS)?;
    let Some(input) = parsed.get("input") else {
        return Err(CliError::Usage("--input <scan.csv> is required".into()));
    };
    let r_bins = parsed.usize("r-bins", 12)?;
    let m_bins = parsed.usize("m-bins", 10)?;
    let text = std::fs::read_to_string(input)?;
    let csv = read_csv(&text).map_err(CliError::Usage)?;
    let mut records = Vec::with_capacity(csv.rows.len());
    let col = |name: &str| -> Result<usize, CliError> {
        csv.column(name)
            .ok_or_else(|| CliError::Usage(format!("input is missing column {name:?}")))
    };
    let (c_index, c_r, c_ai, c_aii, c_w, c_o, c_a1, c_a2, c_m, c_c) = (
        col("index")?,
        col("r")?,
        col("accel_I")?,
        col("accel_II")?,
        col("width")?,
        col("omega0")?,
        col("alpha_I")?,
        col("alpha_II")?,
        col("mismatch")?,
        col("coherence")?,
    );
    for row in &csv.rows {
        records.push(ScanRecord {
            index: row[c_index] as usize,
            r: row[c_r],
            accel_i: row[c_ai],
            accel_ii: row[c_aii],
            width: row[c_w],
            omega0: row[c_o],
            alpha_i: row[c_a1],
            alpha_ii: row[c_a2],
            mismatch: row[c_m],
            coherence: row[c_c],
        });
    }
    let outcome = median_contour(&records, r_bins, m_bins)?;
    if outcome.polylines.is_empty() {
        eprintln!(
            "note: degenerate coherence distribution, contour is empty \
             (level {}, {} under-occupied bins)",
            format_f64(outcome.level),
            outcome.flagged_bins
        );
    }
    let mut prov = Provenance::new("contour");
    prov.field("input", input);
    prov.field("r-bins", r_bins);
    prov.field("m-bins", m_bins);
    prov.note("level", format_f64(outcome.level));
    prov.note("flagged-bins", outcome.flagged_bins);
    prov.note("records", records.len());
    let mut table = Table::new(&["r", "mismatch"], prov);
    for line in &outcome.polylines {
        if !table.rows.is_empty() {
            table.breaks.push(table.rows.len());
        }
        for &(r, m) in line {
            table.push(vec![r, m]);
        }
    }
    emit(table, &parsed, PlotKind::Lines)
}

pub fn selftest(argv: &[String]) -> Result<(), CliError> {
    static KEYS: [&str; 0] = [];
    let _parsed = parse(argv, &KEYS)?;
    let mut checks = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| -> Result<(), CliError> {
        checks += 1;
        if ok {
            println!("ok {checks:2} — {name}");
            Ok(())
        } else {
            Err(CliError::Run(format!("selftest {name} failed: {detail}")))
        }
    };

    let rule = GaussLegendre::new(5);
    let node_err = (rule.nodes()[4] - 0.906_179_845_938_664).abs();
    check(
        "Gauss-Legendre nodes",
        node_err < 1e-14,
        format!("{node_err:.2e}"),
    )?;

    let lg = log_gamma_complex(wedgesim_core::Complex64::new(5.0, 0.0)).map_err(CliError::from)?;
    check(
        "log-gamma at 5",
        (lg.re - 24.0_f64.ln()).abs() < 1e-12,
        format!("{}", lg.re),
    )?;

    let order = BesselOrder::new(50.0).map_err(CliError::from)?;
    let zero = bessel_product_im(order, 1.3, 1.3).map_err(CliError::from)?;
    check(
        "Bessel product zero",
        zero.abs() < 1e-14,
        format!("{zero:.2e}"),
    )?;

    let mut tmsv_dev = 0.0f64;
    for r in [0.5, 1.0, 2.0] {
        let nu = symplectic_eigenvalues(&two_mode_squeezed_vacuum(r)).map_err(CliError::from)?;
        tmsv_dev = tmsv_dev.max((nu.nu_minus() - 1.0).abs().max((nu.nu_plus() - 1.0).abs()));
    }
    check(
        "squeezed vacuum purity",
        tmsv_dev < 1e-9,
        format!("{tmsv_dev:.2e}"),
    )?;

    let mut rng = SplitMix64::new(5150);
    let mut max_dev = 0.0f64;
    for _ in 0..20 {
        let a1 = rng.uniform(0.1, 1.0);
        let a2 = rng.uniform(0.1, 1.0);
        let r = rng.uniform(0.0, 3.0);
        let direct = build_simplified(a1, a2)
            .map_err(CliError::from)?
            .apply(&two_mode_squeezed_vacuum(r))
            .map_err(CliError::from)?;
        let closed = output_tmsv_closed_form(a1, a2, r);
        for i in 0..4 {
            for j in 0..4 {
                max_dev = max_dev.max((direct.entry(i, j) - closed.entry(i, j)).abs());
            }
        }
        let spectrum = symplectic_eigenvalues(&closed).map_err(CliError::from)?;
        if spectrum.nu_minus() < 1.0 - 1e-9 {
            return Err(CliError::Run(format!(
                "selftest: unphysical channel output nu = {}",
                spectrum.nu_minus()
            )));
        }
    }
    check(
        "channel closed form",
        max_dev <= 1e-12,
        format!("{max_dev:.2e}"),
    )?;

    let c0 = coherence(
        &output_tmsv_closed_form(0.9, 0.9, 0.0),
        Convention::Physical,
    )
    .map_err(CliError::from)?;
    check("vacuum coherence", c0 == 0.0, format!("{c0}"))?;

    let spec = ModeSpec::new(Region::I, 0.1, 2.0, 5.0, 0.1).map_err(CliError::from)?;
    let coeffs = compute_overlaps(&spec).map_err(CliError::from)?;
    let ratio = coeffs.beta().norm() / coeffs.alpha().norm();
    check(
        "overlap hierarchy",
        coeffs.alpha().re > 0.9 && ratio <= 1e-2,
        format!("alpha {}, ratio {ratio:.2e}", coeffs.alpha().re),
    )?;

    let mode = SampledMode::input(&spec).map_err(CliError::from)?;
    let residual = mode.positive_frequency_residual().map_err(CliError::from)?;
    check(
        "projected residual",
        residual < 1e-12,
        format!("{residual:.2e}"),
    )?;

    let dir = std::env::temp_dir().join(format!("wedgesim-selftest-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let cache = OverlapCache::new(&dir);
    let first = cache.get_or_compute(&spec).map_err(CliError::from)?;
    let second = cache.get_or_compute(&spec).map_err(CliError::from)?;
    let cache_ok = first.alpha() == second.alpha() && first.beta() == second.beta();
    let _ = std::fs::remove_dir_all(&dir);
    check("cache round trip", cache_ok, "cached values differ".into())?;

    let mini = |workers: usize| {
        random_scan(&ScanConfig {
            count: 3,
            workers,
            ..ScanConfig::default()
        })
    };
    let one = mini(1).map_err(CliError::from)?;
    let two = mini(2).map_err(CliError::from)?;
    check(
        "scan determinism",
        one == two,
        "records differ between worker counts".into(),
    )?;

    println!("selftest passed ({checks} checks)");
    Ok(())
}
