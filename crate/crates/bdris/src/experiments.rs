//! The named experiments and the runner that writes their artifacts.

use std::fs;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use bdris_core::channel::bs_ris_channel;
use bdris_core::eval::{self, ExperimentConfig, Link, ResultTable, SweepAxis};
use bdris_core::metrics::{
    beam_pattern, cav, cav_of_amplitudes, degree_grid, gain_ceiling_db, gain_floor_db,
    snr_bdris_closed_form, snr_drris_closed_form, BeamPattern,
};
use bdris_core::ris_config::{circuit_complexity, make_grouping, Architecture, GroupingStrategy};
use bdris_core::{CVector, C64};
use clap::ValueEnum;

use crate::config::{AxisName, RunConfig};
use crate::error::{Error, Result};
use crate::io::{sha256_str, write_pattern_grid, write_table, RunManifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    Beampattern,
    CavSurface,
    SnrGain,
    Aber,
    Rate,
    Sweep,
    Complexity,
    VerifyPropositions,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Beampattern => "beampattern",
            Experiment::CavSurface => "cav-surface",
            Experiment::SnrGain => "snr-gain",
            Experiment::Aber => "aber",
            Experiment::Rate => "rate",
            Experiment::Sweep => "sweep",
            Experiment::Complexity => "complexity",
            Experiment::VerifyPropositions => "verify-propositions",
        }
    }
}

/// What an experiment produced, before anything is written.
#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<ResultTable>,
    pub patterns: Vec<(String, BeamPattern)>,
    pub summary: Vec<String>,
    pub gates_passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub experiment: Experiment,
    pub config_path: Option<PathBuf>,
    pub out: PathBuf,
    pub seed: Option<u64>,
}

#[derive(Debug)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub summary: Vec<String>,
}

/// Loads the configuration, runs the experiment, writes every artifact and
/// the manifest. Failed verification gates are recorded in the manifest;
/// see [`RunReport::gate_error`].
pub fn run(opts: &RunOptions) -> Result<RunReport> {
    let mut config = match &opts.config_path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = opts.seed {
        config.monte_carlo.seed = seed;
    }
    config.validate()?;
    let config_text = config.to_toml();
    let config_hash = sha256_str(&config_text);

    fs::create_dir_all(&opts.out).map_err(|e| Error::io(&opts.out, e))?;
    let outcome = execute(opts.experiment, &config)?;

    let mut files = Vec::new();
    let echo = opts.out.join("config.toml");
    fs::write(&echo, &config_text).map_err(|e| Error::io(&echo, e))?;
    files.push(echo);
    for mut table in outcome.tables {
        table
            .metadata
            .push(("experiment".into(), opts.experiment.name().into()));
        table
            .metadata
            .push(("seed".into(), config.monte_carlo.seed.to_string()));
        table
            .metadata
            .push(("config_sha256".into(), config_hash.clone()));
        files.extend(write_table(&opts.out, &table)?);
    }
    for (name, pattern) in &outcome.patterns {
        let path = opts.out.join(format!("{name}.csv"));
        write_pattern_grid(&path, pattern)?;
        files.push(path);
    }
    let manifest = RunManifest {
        experiment: opts.experiment.name().into(),
        config_path: opts
            .config_path
            .as_ref()
            .map(|p| p.to_string_lossy().into_owned()),
        config_sha256: config_hash,
        output_dir: opts.out.to_string_lossy().into_owned(),
        seed: config.monte_carlo.seed,
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        gates_passed: outcome.gates_passed,
        artifacts: Vec::new(),
    }
    .collect(&files)?;
    manifest.write(&opts.out)?;
    Ok(RunReport {
        manifest,
        summary: outcome.summary,
    })
}

impl RunReport {
    /// The verification error for a run whose gates failed.
    pub fn gate_error(&self) -> Option<Error> {
        (!self.manifest.gates_passed).then(|| {
            Error::Verification(format!(
                "{} verification gates failed; see {}",
                self.manifest.experiment, self.manifest.output_dir
            ))
        })
    }
}

/// Runs one experiment without touching the file system.
pub fn execute(experiment: Experiment, config: &RunConfig) -> Result<Outcome> {
    let exp = config.experiment()?;
    match experiment {
        Experiment::Beampattern => beampattern(config, &exp),
        Experiment::CavSurface => cav_surface(config, &exp),
        Experiment::SnrGain => {
            let t = eval::snr_gain_sweep(&config.scattering_levels(), &exp)?;
            let summary = t
                .rows
                .iter()
                .map(|r| {
                    format!(
                        "clusters {:>4}: gain {:.3} ± {:.3} dB (floor {:.3}, ceiling {:.3})",
                        r[0], r[1], r[2], r[3], r[4]
                    )
                })
                .collect();
            Ok(passed(vec![t], summary))
        }
        Experiment::Aber => {
            let t = eval::aber_with_bound(&exp)?;
            let summary = summarize_columns(&t, "aber_");
            Ok(passed(vec![t], summary))
        }
        Experiment::Rate => {
            let t = eval::achievable_rate(&exp)?;
            let summary = summarize_columns(&t, "rate_");
            Ok(passed(vec![t], summary))
        }
        Experiment::Sweep => {
            let s = &config.sweep;
            let axis = match s.axis {
                AxisName::Power => SweepAxis::Power,
                AxisName::ArraySize => SweepAxis::ArraySize(s.sizes.clone()),
                AxisName::Separation => SweepAxis::Separation(s.separations_wavelengths.clone()),
                AxisName::GroupCount => SweepAxis::GroupCount {
                    counts: s.group_counts.clone(),
                    strategy: s.strategy.into(),
                },
            };
            let t = eval::sweep(&axis, &exp)?;
            let mut summary = summarize_columns(&t, "rate");
            summary.extend(t.warnings.iter().map(|w| format!("warning: {w}")));
            Ok(passed(vec![t], summary))
        }
        Experiment::Complexity => complexity(config),
        Experiment::VerifyPropositions => verify_propositions(&exp),
    }
}

fn passed(tables: Vec<ResultTable>, summary: Vec<String>) -> Outcome {
    Outcome {
        tables,
        patterns: Vec::new(),
        summary,
        gates_passed: true,
    }
}

/// One line per row listing the columns that start with `prefix` (standard
/// errors excluded).
fn summarize_columns(t: &ResultTable, prefix: &str) -> Vec<String> {
    let cols: Vec<usize> = (1..t.columns.len())
        .filter(|&k| t.columns[k].starts_with(prefix) && !t.columns[k].ends_with("_se"))
        .collect();
    t.rows
        .iter()
        .map(|r| {
            let parts: Vec<String> = cols
                .iter()
                .map(|&k| format!("{} {:.4e}", t.columns[k], r[k]))
                .collect();
            format!("{} {}: {}", t.columns[0], r[0], parts.join(", "))
        })
        .collect()
}

fn beampattern(config: &RunConfig, exp: &ExperimentConfig) -> Result<Outcome> {
    let bp = &config.beampattern;
    let azimuths = degree_grid(-180.0, 180.0, bp.azimuth_step_deg);
    let elevations = degree_grid(0.0, 90.0, bp.elevation_step_deg);
    let labels: Vec<String> = exp.architectures.iter().map(|a| a.label()).collect();
    let mut columns = vec!["separation_wavelengths".to_string()];
    for l in &labels {
        columns.extend([
            format!("ppd_dbi_{l}"),
            format!("hppd_dbi_{l}"),
            format!("hpbw_deg_{l}"),
        ]);
    }
    let mut table = ResultTable::new("beampattern", columns);
    let mut outcome = Outcome {
        gates_passed: true,
        ..Default::default()
    };
    for &sep in &bp.separations_wavelengths {
        let mut c = exp.clone();
        c.geometry.separation_wavelengths = sep;
        let geometry = c.build_geometry()?;
        let link = Link::from_parts(
            geometry.clone(),
            c.channel,
            c.case,
            &c.architectures,
            c.seed,
        )?;
        // beam toward the steering direction: zeta proportional to conj(a)
        let b: CVector = geometry
            .response(
                bp.steer_azimuth_deg.to_radians(),
                bp.steer_elevation_deg.to_radians(),
            )
            .map(|z| z.conj());
        let mut row = vec![sep];
        for (k, label) in labels.iter().enumerate() {
            let zeta = link.effective_vector(k, &b)?;
            let p = beam_pattern(&zeta, &geometry, &azimuths, &elevations)?;
            row.extend([p.ppd_dbi, p.hppd_dbi, p.hpbw_deg]);
            outcome.summary.push(format!(
                "d_c = {sep} lambda, {label}: PPD {:.3} dBi, HPPD {:.3} dBi, HPBW {:.2} deg",
                p.ppd_dbi, p.hppd_dbi, p.hpbw_deg
            ));
            if bp.write_grids {
                outcome
                    .patterns
                    .push((format!("pattern_{label}_dc{sep}"), p));
            }
        }
        table.push_row(row)?;
    }
    outcome.tables.push(table);
    Ok(outcome)
}

fn cav_surface(config: &RunConfig, exp: &ExperimentConfig) -> Result<Outcome> {
    let cols = [
        "size",
        "separation_wavelengths",
        "cav",
        "floor_db",
        "ceiling_db",
    ]
    .map(String::from)
    .to_vec();
    let mut table = ResultTable::new("cav_surface", cols);
    let mut summary = Vec::new();
    for &n in &config.cav_surface.sizes {
        for &sep in &config.cav_surface.separations_wavelengths {
            let mut c = exp.clone();
            c.geometry.m_x = n;
            c.geometry.m_y = n;
            c.geometry.separation_wavelengths = sep;
            let v = cav(&bs_ris_channel(&c.build_geometry()?).g)?.cav;
            table.push_row(vec![n as f64, sep, v, gain_floor_db(v), gain_ceiling_db(v)])?;
            summary.push(format!("{n}x{n}, d_c = {sep} lambda: CAV {v:.4}"));
        }
    }
    Ok(passed(vec![table], summary))
}

fn complexity(config: &RunConfig) -> Result<Outcome> {
    let m = config.complexity.cells;
    let active = circuit_complexity(Architecture::Active, m, 1)?;
    let dris = circuit_complexity(Architecture::Dris, m, 1)?;
    let full = circuit_complexity(Architecture::BdFull, m, 1)?;
    let cols = [
        "groups",
        "bd_group_circuits",
        "circuit_ratio",
        "algorithm_ratio",
        "active_circuits",
        "dris_circuits",
        "bd_full_circuits",
    ]
    .map(String::from)
    .to_vec();
    let mut table = ResultTable::new("complexity", cols);
    let mut summary = vec![format!(
        "M = {m}: active {}, D-RIS {}, fully-connected BD-RIS {}",
        active.circuit_count, dris.circuit_count, full.circuit_count
    )];
    for &g in &config.complexity.group_counts {
        let r = circuit_complexity(Architecture::BdGroup, m, g)?;
        let circuit_ratio = r.circuit_count as f64 / full.circuit_count as f64;
        let algo_ratio = r.algo_flop_model / full.algo_flop_model;
        table.push_row(vec![
            g as f64,
            r.circuit_count as f64,
            circuit_ratio,
            algo_ratio,
            active.circuit_count as f64,
            dris.circuit_count as f64,
            full.circuit_count as f64,
        ])?;
        summary.push(format!(
            "G = {g}: {} circuits, circuit ratio {circuit_ratio:.4}, algorithm ratio {algo_ratio:.4}",
            r.circuit_count
        ));
    }
    Ok(passed(vec![table], summary))
}

/// One named numerical check. `property` groups checks: 1 gain floor,
/// 2 gain ceiling, 3 symmetric-group CAV.
struct Check {
    property: u32,
    name: &'static str,
    value: f64,
    expected: f64,
    tolerance: f64,
}

impl Check {
    fn passed(&self) -> bool {
        (self.value - self.expected).abs() <= self.tolerance
    }
}

/// Largest relative deviation of group CAVs from a reference CAV.
fn group_cav_deviation(
    g: &CVector,
    groups: &[Vec<usize>],
    reference: impl Fn(usize) -> f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for (q, idx) in groups.iter().enumerate() {
        let amps: Vec<f64> = idx.iter().map(|&m| g[m].norm()).collect();
        let c = cav_of_amplitudes(&amps)?.cav;
        let r = reference(q);
        worst = worst.max((c - r).abs() / r);
    }
    Ok(worst)
}

fn verify_propositions(exp: &ExperimentConfig) -> Result<Outcome> {
    let geometry = exp.build_geometry()?;
    let g = bs_ris_channel(&geometry).g;
    let full_cav = cav(&g)?.cav;
    let floor = gain_floor_db(full_cav);
    let ceiling = gain_ceiling_db(full_cav);
    let mut checks = Vec::new();

    // gain floor: closed-form ratio for equal-amplitude user channels
    let mut worst = 0.0f64;
    for t in 0..64u64 {
        let h = CVector::from_fn(g.len(), |m, _| {
            C64::from_polar(1.0, 0.37 * (m as f64) * (t as f64 + 1.0))
        });
        let ratio = snr_bdris_closed_form(&h, &g)? / snr_drris_closed_form(&h, &g)?;
        worst = worst.max((ratio / (1.0 + full_cav * full_cav) - 1.0).abs());
    }
    checks.push(Check {
        property: 1,
        name: "equal-amplitude SNR ratio equals 1 + CAV^2 (relative error)",
        value: worst,
        expected: 0.0,
        tolerance: 1e-12,
    });
    use bdris_core::eval::ScatteringLevel;
    let gains = eval::snr_gain_sweep(
        &[ScatteringLevel::Clusters(1), ScatteringLevel::Rayleigh],
        exp,
    )?;
    checks.push(Check {
        property: 1,
        name: "single-path Monte-Carlo gain vs floor (dB)",
        value: gains.rows[0][1],
        expected: floor,
        tolerance: 0.1,
    });
    checks.push(Check {
        property: 2,
        name: "Rayleigh Monte-Carlo gain vs ceiling (dB)",
        value: gains.rows[1][1],
        expected: ceiling,
        tolerance: 0.15,
    });

    // symmetric groups keep the parent's CAV
    let cells = geometry.len();
    if cells % 2 == 0 {
        if let Ok(two) = make_grouping(&geometry, 2, GroupingStrategy::MirrorSymmetric) {
            checks.push(Check {
                property: 3,
                name: "2 symmetric groups: group CAV vs full-array CAV (relative)",
                value: group_cav_deviation(&g, two.groups(), |_| full_cav)?,
                expected: 0.0,
                tolerance: 1e-12,
            });
        }
        let rows = geometry.m_y_count();
        if let (Ok(sym), Ok(parent)) = (
            make_grouping(&geometry, 2 * rows, GroupingStrategy::MirrorSymmetric),
            make_grouping(&geometry, rows, GroupingStrategy::Rows),
        ) {
            let parent_cav = |q: usize| -> f64 {
                // each symmetric group lies inside exactly one row
                let m = sym.group(q)[0];
                let row = parent
                    .groups()
                    .iter()
                    .find(|r| r.contains(&m))
                    .expect("rows cover every cell");
                let amps: Vec<f64> = row.iter().map(|&k| g[k].norm()).collect();
                cav_of_amplitudes(&amps).map(|r| r.cav).unwrap_or(f64::NAN)
            };
            checks.push(Check {
                property: 3,
                name: "row-split symmetric groups: group CAV vs row CAV (relative)",
                value: group_cav_deviation(&g, sym.groups(), parent_cav)?,
                expected: 0.0,
                tolerance: 1e-12,
            });
        }
    }

    let cols = ["property", "value", "expected", "tolerance", "passed"]
        .map(String::from)
        .to_vec();
    let mut table = ResultTable::new("properties", cols);
    let mut summary = Vec::new();
    for (i, c) in checks.iter().enumerate() {
        let ok = c.passed();
        table.push_row(vec![
            c.property as f64,
            c.value,
            c.expected,
            c.tolerance,
            ok as u8 as f64,
        ])?;
        table
            .metadata
            .push((format!("check_{i}"), c.name.to_string()));
        summary.push(format!(
            "{} [{}] {}: {:.6e} (expected {:.6e} ± {:.1e})",
            if ok { "PASS" } else { "FAIL" },
            c.property,
            c.name,
            c.value,
            c.expected,
            c.tolerance
        ));
    }
    Ok(Outcome {
        tables: vec![table],
        patterns: Vec::new(),
        summary,
        gates_passed: checks.iter().all(Check::passed),
    })
}
