//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line with the measured quantities (run with --nocapture to see
//! the lines for passing tests as well).

mod support;

use std::sync::OnceLock;
use std::time::Instant;

use support::symplectic::{random_physical_sigma, williamson_oracle};
use wedgesim_core::channel::{build_simplified, output_tmsv_closed_form};
use wedgesim_core::gaussian::{
    symplectic_eigenvalues, two_mode_squeezed_vacuum, Convention, CovarianceMatrix4,
};
use wedgesim_core::mismatch::{acceleration_sweep, waveform_sweep};
use wedgesim_core::modes::{input_profile, ModeSpec, NormalizedModes, Region, SampledMode};
use wedgesim_core::overlap::{compute_overlaps, overlap_curve};
use wedgesim_core::rng::SplitMix64;
use wedgesim_core::stats::{median, quantile_edges, spearman};
use wedgesim_core::sweep::{
    coherence_surface, linspace, median_contour, random_scan, ScanConfig, ScanRecord,
    WaveformParams,
};

fn criterion(number: &str, name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {number} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance {number} ({name}) failed: {detail}");
}

fn fiducial_spec() -> ModeSpec {
    ModeSpec::new(Region::I, 0.1, 2.0, 5.0, 0.1).unwrap()
}

/// The default 2000-record scan, shared by the scan criteria and the
/// golden fixtures.
fn shared_scan() -> &'static [ScanRecord] {
    static SCAN: OnceLock<Vec<ScanRecord>> = OnceLock::new();
    SCAN.get_or_init(|| {
        let dir = std::env::temp_dir().join(format!("wedgesim-acceptance-{}", std::process::id()));
        let config = ScanConfig {
            cache_dir: Some(dir),
            ..ScanConfig::default()
        };
        random_scan(&config).expect("default scan must complete")
    })
}

#[test]
fn acceptance_01_mode_validity() {
    let start = Instant::now();
    let spec = fiducial_spec();
    let input = SampledMode::input(&spec).unwrap();
    let output = SampledMode::output(&spec).unwrap();
    let err_in = (input.kg_norm().unwrap() - 1.0).abs();
    let err_out = (output.kg_norm().unwrap() - 1.0).abs();
    // Stability under refinement: resample the normalized analytic profiles
    // on a 2x finer grid and renorm by trapezoid.
    let pair = NormalizedModes::new(&spec).unwrap();
    let (lo, hi) = spec.support();
    let n = 2 * input.grid().len();
    let step = (hi - lo) / (n - 1) as f64;
    let mut norm_in = 0.0;
    let mut norm_out = 0.0;
    for i in 0..n {
        let x = lo + i as f64 * step;
        let phi = pair.input_at(x).unwrap();
        let psi = pair.output_at(x).unwrap();
        let edge = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        norm_in += edge * phi * phi;
        norm_out += edge * psi * psi * (spec.x0() / x);
    }
    norm_in *= 2.0 * spec.omega0() * step;
    norm_out *= 2.0 * spec.omega0() * step;
    let refine_err = (norm_in - 1.0).abs().max((norm_out - 1.0).abs());
    let elapsed = start.elapsed().as_secs_f64();
    let pass = err_in <= 1e-6 && err_out <= 1e-6 && refine_err <= 1e-6 && elapsed < 5.0;
    criterion(
        "1",
        "mode validity",
        pass,
        &format!(
            "input norm err {err_in:.2e}, output {err_out:.2e}, \
             2x-refined {refine_err:.2e}, {elapsed:.2} s"
        ),
    );
}

#[test]
fn acceptance_02_bogolyubov_hierarchy() {
    let coeffs = compute_overlaps(&fiducial_spec()).unwrap();
    let ratio = coeffs.beta().norm() / coeffs.alpha().norm();
    criterion(
        "2",
        "Bogolyubov hierarchy",
        ratio <= 1e-2,
        &format!(
            "|beta|/|alpha| = {ratio:.6e} (alpha = {:.12}, beta = {:.6e})",
            coeffs.alpha().re,
            coeffs.beta().re
        ),
    );
}

#[test]
fn acceptance_03_inertial_limit() {
    let spec = ModeSpec::new(Region::I, 1e-3, 2.0, 5.0, 0.1).unwrap();
    let alpha = compute_overlaps(&spec).unwrap().alpha().norm();
    let waveform = WaveformParams {
        width: 2.0,
        omega0: 5.0,
        mass: 0.1,
    };
    let surface =
        coherence_surface(&[1e-3], &[1e-3], 1.0, &waveform, Convention::Physical).unwrap();
    let c_surface = surface[0].coherence;
    // Analytic inertial value: pure TMSV, so C = sum of occupation brackets.
    let n = 1.0_f64.sinh().powi(2);
    let c_analytic = 2.0 * ((n + 1.0) * (n + 1.0).log2() - n * n.log2());
    let rel = (c_surface - c_analytic).abs() / c_analytic;
    let pass = alpha >= 0.99 && rel <= 0.02;
    criterion(
        "3",
        "inertial limit",
        pass,
        &format!(
            "|alpha(1e-3)| = {alpha:.9}, C_surface = {c_surface:.6}, \
             C_analytic = {c_analytic:.6}, rel = {rel:.3e}"
        ),
    );
}

#[test]
fn acceptance_04_alpha_monotone_in_acceleration() {
    let start = Instant::now();
    let accels: Vec<f64> = (1..=10).map(|i| 0.02 * i as f64).collect();
    let entries = overlap_curve(&fiducial_spec(), &accels);
    let mut alphas = Vec::new();
    for entry in &entries {
        alphas.push(entry.result.as_ref().unwrap().alpha().norm());
    }
    let monotone = alphas.windows(2).all(|w| w[1] < w[0]);
    let elapsed = start.elapsed().as_secs_f64();
    criterion(
        "4",
        "alpha decreases with acceleration",
        monotone && elapsed < 120.0,
        &format!(
            "alpha from {:.6} to {:.6} over A in [0.02, 0.2], {elapsed:.2} s",
            alphas[0],
            alphas[alphas.len() - 1]
        ),
    );
}

#[test]
fn acceptance_05_coherence_surface_monotone() {
    let start = Instant::now();
    let grid = linspace(1e-3, 0.2, 8);
    let waveform = WaveformParams {
        width: 2.0,
        omega0: 5.0,
        mass: 0.1,
    };
    let surface = coherence_surface(&grid, &grid, 1.0, &waveform, Convention::Physical).unwrap();
    let at = |i: usize, j: usize| surface[i * 8 + j].coherence;
    let mut monotone = true;
    for i in 0..8 {
        for j in 1..8 {
            if at(i, j) >= at(i, j - 1) || at(j, i) >= at(j - 1, i) {
                monotone = false;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    criterion(
        "5",
        "coherence surface monotone",
        monotone && elapsed < 300.0,
        &format!(
            "C from {:.4} at (1e-3, 1e-3) to {:.4} at (0.2, 0.2), {elapsed:.2} s",
            at(0, 0),
            at(7, 7)
        ),
    );
}

#[test]
fn acceptance_06_channel_exactness() {
    let mut rng = SplitMix64::new(606);
    let mut max_dev = 0.0f64;
    for _ in 0..100 {
        let a1 = rng.uniform(0.05, 1.0);
        let a2 = rng.uniform(0.05, 1.0);
        let r = rng.uniform(0.0, 3.0);
        let direct = build_simplified(a1, a2)
            .unwrap()
            .apply(&two_mode_squeezed_vacuum(r))
            .unwrap();
        let closed = output_tmsv_closed_form(a1, a2, r);
        for i in 0..4 {
            for j in 0..4 {
                max_dev = max_dev.max((direct.entry(i, j) - closed.entry(i, j)).abs());
            }
        }
    }
    // vacuum fixed point (to rounding) and identity channel (bit-exact)
    let vacuum_out = build_simplified(0.7, 0.4)
        .unwrap()
        .apply(&CovarianceMatrix4::identity())
        .unwrap();
    let mut vacuum_dev = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let expect = if i == j { 1.0 } else { 0.0 };
            vacuum_dev = vacuum_dev.max((vacuum_out.entry(i, j) - expect).abs());
        }
    }
    let state = two_mode_squeezed_vacuum(1.7);
    let identity_out = build_simplified(1.0, 1.0).unwrap().apply(&state).unwrap();
    let identity_exact = identity_out.entries() == state.entries();
    let pass = max_dev <= 1e-12 && vacuum_dev <= 4.0 * f64::EPSILON && identity_exact;
    criterion(
        "6",
        "channel exactness",
        pass,
        &format!(
            "max |apply - closed form| = {max_dev:.2e} over 100 triples, \
             vacuum dev {vacuum_dev:.2e}, identity bit-exact: {identity_exact}"
        ),
    );
}

#[test]
fn acceptance_07_symplectic_oracle() {
    let mut rng = SplitMix64::new(707);
    let mut max_rel = 0.0f64;
    for _ in 0..1000 {
        let sigma = random_physical_sigma(&mut rng);
        let spectrum = symplectic_eigenvalues(&sigma).unwrap();
        let (lo, hi) = williamson_oracle(&sigma);
        max_rel = max_rel
            .max((spectrum.nu_minus() - lo).abs() / lo)
            .max((spectrum.nu_plus() - hi).abs() / hi);
    }
    let mut tmsv_dev = 0.0f64;
    for r in [0.5, 1.0, 2.0] {
        let spectrum = symplectic_eigenvalues(&two_mode_squeezed_vacuum(r)).unwrap();
        tmsv_dev = tmsv_dev
            .max((spectrum.nu_minus() - 1.0).abs())
            .max((spectrum.nu_plus() - 1.0).abs());
    }
    let pass = max_rel <= 1e-9 && tmsv_dev <= 1e-9;
    criterion(
        "7",
        "symplectic oracle",
        pass,
        &format!(
            "max rel dev vs eigensolver = {max_rel:.2e} over 1000 matrices, \
             TMSV purity dev = {tmsv_dev:.2e}"
        ),
    );
}

#[test]
fn acceptance_08_acceleration_dominates_mismatch() {
    let accel_points = linspace(0.02, 0.2, 20);
    let accel = acceleration_sweep(&accel_points, 2.0, 4.7, 0.1);
    assert!(accel.skipped.is_empty());
    let accel_values: Vec<f64> = accel.points.iter().map(|p| p.mismatch).collect();
    let spread = |vals: &[f64]| {
        vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - vals.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let accel_spread = spread(&accel_values);
    let waveform = waveform_sweep(&linspace(1.0, 2.0, 5), &linspace(4.0, 6.0, 5), 0.1, 0.1);
    assert!(waveform.skipped.is_empty());
    let waveform_values: Vec<f64> = waveform.points.iter().map(|p| p.mismatch).collect();
    let waveform_spread = spread(&waveform_values);
    let factor = accel_spread / waveform_spread;
    criterion(
        "8",
        "acceleration dominates mismatch",
        factor >= 3.0,
        &format!(
            "accel spread {accel_spread:.4e} vs waveform spread {waveform_spread:.4e}: \
             factor {factor:.2}"
        ),
    );
}

#[test]
fn acceptance_09a_mismatch_coherence_anticorrelation() {
    let start = Instant::now();
    let records = shared_scan();
    let mut by_r: Vec<&ScanRecord> = records.iter().collect();
    by_r.sort_by(|a, b| a.r.partial_cmp(&b.r).unwrap());
    let mut rhos = Vec::new();
    for d in 0..10 {
        let lo = d * by_r.len() / 10;
        let hi = (d + 1) * by_r.len() / 10;
        let ms: Vec<f64> = by_r[lo..hi].iter().map(|r| r.mismatch).collect();
        let cs: Vec<f64> = by_r[lo..hi].iter().map(|r| r.coherence).collect();
        rhos.push(spearman(&ms, &cs));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = rhos.iter().all(|&rho| rho <= -0.5) && elapsed <= 600.0;
    let formatted: Vec<String> = rhos.iter().map(|r| format!("{r:.3}")).collect();
    criterion(
        "9a",
        "per-decile Spearman(M, C) <= -0.5",
        pass,
        &format!(
            "decile correlations [{}], {elapsed:.1} s",
            formatted.join(", ")
        ),
    );
}

#[test]
fn acceptance_09b_squeezing_suppression_weakens() {
    let records = shared_scan();
    let r_edges = [1.0, 1.5, 2.0, 2.5, 3.0 + 1e-12];
    let all_mismatches: Vec<f64> = records.iter().map(|r| r.mismatch).collect();
    let m_edges = quantile_edges(&all_mismatches, 5);
    let mut low_gains = Vec::new();
    let mut high_gains = Vec::new();
    for mb in 0..5 {
        let mut medians = Vec::new();
        for rb in 0..4 {
            let cell: Vec<f64> = records
                .iter()
                .filter(|rec| {
                    rec.r >= r_edges[rb]
                        && rec.r < r_edges[rb + 1]
                        && rec.mismatch >= m_edges[mb]
                        && rec.mismatch <= m_edges[mb + 1]
                })
                .map(|rec| rec.coherence)
                .collect();
            medians.push((cell.len() >= 10).then(|| median(&cell)));
        }
        if let (Some(m1), Some(m2), Some(m3), Some(m4)) =
            (medians[0], medians[1], medians[2], medians[3])
        {
            low_gains.push(m2 - m1);
            high_gains.push(m4 - m3);
        }
    }
    let matched = low_gains.len();
    let low = low_gains.iter().sum::<f64>() / matched as f64;
    let high = high_gains.iter().sum::<f64>() / matched as f64;
    criterion(
        "9b",
        "squeezing suppression weakens at high r",
        matched >= 3 && low > high,
        &format!(
            "median-C gain r[1,1.5]->[1.5,2] = {low:.3} vs r[2,2.5]->[2.5,3] = {high:.3} \
             over {matched} matched mismatch bins"
        ),
    );
}

#[test]
fn acceptance_10_scan_determinism_across_workers() {
    let runs: Vec<Vec<ScanRecord>> = [1usize, 4, 8]
        .iter()
        .map(|&workers| {
            random_scan(&ScanConfig {
                workers,
                ..ScanConfig::default()
            })
            .unwrap()
        })
        .collect();
    let bits = |rec: &ScanRecord| {
        [
            rec.r,
            rec.accel_i,
            rec.accel_ii,
            rec.width,
            rec.omega0,
            rec.alpha_i,
            rec.alpha_ii,
            rec.mismatch,
            rec.coherence,
        ]
        .map(f64::to_bits)
    };
    let identical = runs[1..].iter().all(|run| {
        run.len() == runs[0].len()
            && run
                .iter()
                .zip(&runs[0])
                .all(|(a, b)| a.index == b.index && bits(a) == bits(b))
    });
    criterion(
        "10",
        "scan bit-identical across worker counts",
        identical,
        &format!(
            "workers {{1, 4, 8}} x {} records, seed {}",
            runs[0].len(),
            ScanConfig::default().seed
        ),
    );
}

#[test]
fn acceptance_11_negative_frequency_control() {
    let mut max_residual = 0.0f64;
    for width in linspace(1.0, 2.0, 5) {
        for omega0 in linspace(5.0, 7.0, 5) {
            let spec = ModeSpec::new(Region::I, 0.1, width, omega0, 0.1).unwrap();
            let mode = SampledMode::input(&spec).unwrap();
            max_residual = max_residual.max(mode.positive_frequency_residual().unwrap());
        }
    }
    criterion(
        "11",
        "negative-frequency control",
        max_residual <= 1e-3,
        &format!("max residual over the 5x5 guard grid = {max_residual:.2e}"),
    );
}

/// Golden regression pins for the scan-derived quantities (not an acceptance
/// criterion; kept here to reuse the shared scan).
#[test]
fn golden_scan_fixtures() {
    let records = shared_scan();
    let coherences: Vec<f64> = records.iter().map(|r| r.coherence).collect();
    let level = median(&coherences);
    let frozen_level = 9.26222234514660414;
    assert!(
        (level - frozen_level).abs() <= 1e-9 * frozen_level,
        "median coherence moved: {level:.17e}"
    );
    let outcome = median_contour(records, 12, 10).unwrap();
    assert_eq!(outcome.polylines.len(), 1, "contour line count changed");
    let vertices: usize = outcome.polylines.iter().map(|p| p.len()).sum();
    assert_eq!(vertices, 7, "contour vertex count changed");
    let r_min = outcome
        .polylines
        .iter()
        .flatten()
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min);
    let r_max = outcome
        .polylines
        .iter()
        .flatten()
        .map(|p| p.0)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        (1.7..2.0).contains(&r_min) && (2.0..2.3).contains(&r_max),
        "contour moved: r in [{r_min:.3}, {r_max:.3}]"
    );
    // spot-check the first record stays put
    let first = &records[0];
    assert_eq!(first.index, 0);
    assert!((first.r - 2.5813093514686325).abs() < 1e-12);
    assert!((first.coherence - 12.474287438935432).abs() < 1e-9);
}

#[test]
fn golden_pipeline_fixtures() {
    // Quadrature-level golden values at the reference points.
    let coeffs = compute_overlaps(&fiducial_spec()).unwrap();
    assert!(
        (coeffs.alpha().re - 9.771730822108664e-1).abs() <= 1e-9,
        "fiducial alpha moved: {:.16e}",
        coeffs.alpha().re
    );
    assert!(
        (coeffs.beta().re - 9.462902204987326e-4).abs() <= 1e-9,
        "fiducial beta moved: {:.16e}",
        coeffs.beta().re
    );
    let spec = ModeSpec::new(Region::I, 0.1, 2.0, 4.7, 0.1).unwrap();
    let m = wedgesim_core::mismatch::mode_mismatch(&spec).unwrap();
    assert_eq!(m.grid_points(), 1599);
    assert!(
        (m.value() - 2.734828284147442e-4).abs() <= 1e-9,
        "fiducial mismatch moved: {:.16e}",
        m.value()
    );
    // profile sanity relied on by the CSV outputs
    let profile_at_center = input_profile(&fiducial_spec(), 10.0).unwrap();
    assert_eq!(profile_at_center, 0.0);
}
