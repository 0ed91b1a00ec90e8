use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use esdlab::dephasing::{decay_factors, evolve_with};
use esdlab::esd::{
    self, esd_time_analytic, esd_time_numeric, CrossingKind, EsdStatus, SolverOptions,
};
use esdlab::{
    eof_isotropic, fidelity_with_projector, isotropic_fidelity, make_isotropic, min_eigenvalue,
    MaxEntangled, NoiseModel, NoiseParams, NoiseScenario, Tolerances,
};

use crate::args::{
    model_name, parse_dims, parse_f0_list, scenario_name, EsdArgs, EvolveArgs, OutputFormat,
    SweepArgs,
};
use crate::format::{csv, num, opt_num};
use crate::Failure;

pub const EVOLVE_HEADER: &str =
    "t,gamma_tilde,fidelity,gap,eof_bits,min_eigenvalue,isotropy_residual";
pub const SWEEP_HEADER: &str =
    "d,f0,model,scenario,status,gamma_tilde_star,death_time,analytic_time,abs_rel_error,error";

/// Rendered command output plus diagnostics destined for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub warnings: Vec<String>,
}

pub fn write_output(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeSeriesRow {
    pub t: f64,
    pub gamma_tilde: f64,
    pub fidelity: f64,
    pub gap: f64,
    pub eof_bits: Option<f64>,
    pub min_eigenvalue: f64,
    pub isotropy_residual: f64,
}

/// Validated settings for one time series.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveConfig {
    pub d: usize,
    pub f0: f64,
    pub model: NoiseModel,
    pub scenario: NoiseScenario,
    pub params: NoiseParams<f64>,
    pub t_max: f64,
    pub steps: usize,
    pub verify: bool,
    pub tol: f64,
}

impl EvolveConfig {
    pub fn from_args(a: &EvolveArgs) -> Result<Self, Failure> {
        if a.steps < 2 {
            return Err(Failure::usage(format!(
                "--steps must be at least 2, got {}",
                a.steps
            )));
        }
        if !(a.t_max.is_finite() && a.t_max >= 0.0) {
            return Err(Failure::usage(format!(
                "--t-max must be finite and nonnegative, got {}",
                a.t_max
            )));
        }
        if !(a.tol.is_finite() && a.tol > 0.0) {
            return Err(Failure::usage(format!(
                "--tol must be positive, got {}",
                a.tol
            )));
        }
        Ok(Self {
            d: a.state.d,
            f0: a.state.f0()?,
            model: a.noise.model.into(),
            scenario: a.noise.scenario.into(),
            params: a.noise.params()?,
            t_max: a.t_max,
            steps: a.steps,
            verify: a.verify,
            tol: a.tol,
        })
    }
}

/// Samples `[0, t_max]` uniformly, evolving the state by brute force at each point.
pub fn evolve_series(cfg: &EvolveConfig) -> Result<(Vec<TimeSeriesRow>, Vec<String>), Failure> {
    let d = cfg.d;
    let mut warnings = Vec::new();
    let with_eof = cfg.model == NoiseModel::FullIsotropicDephasing && d >= 3;
    match (cfg.model, d) {
        (NoiseModel::FullIsotropicDephasing, 2) => {
            warnings.push("eof_bits omitted: the isotropic entanglement-of-formation formula needs d >= 3".into())
        }
        (NoiseModel::SimpleGroundDephasing, _) => warnings.push(
            "eof_bits omitted: the simple model leaves the isotropic family; the gap marks a fidelity-threshold crossing only"
                .into(),
        ),
        _ => {}
    }

    let rho0 = make_isotropic(d, cfg.f0)?;
    let projector = MaxEntangled::new(d)?;
    let tol = Tolerances::default();
    let fc = 1.0 / d as f64;
    let mut rows = Vec::with_capacity(cfg.steps);
    for i in 0..cfg.steps {
        let t = cfg.t_max * i as f64 / (cfg.steps - 1) as f64;
        let factors = decay_factors(t, &cfg.params, cfg.scenario)?;
        let g = factors.gamma_tilde;
        let fidelity = esd::fidelity(d, cfg.f0, cfg.model, g)?;
        let rho = evolve_with(&rho0, d, cfg.model, &factors)?;
        if cfg.verify {
            let brute = fidelity_with_projector(&rho, &projector, &tol)?;
            if (brute - fidelity).abs() > cfg.tol {
                return Err(Failure::internal(format!(
                    "closed-form fidelity {fidelity} differs from brute-force {brute} at t = {t} (tol {})",
                    cfg.tol
                )));
            }
        }
        let eof_bits = if with_eof {
            Some(eof_isotropic(d, fidelity)?.eof)
        } else {
            None
        };
        rows.push(TimeSeriesRow {
            t,
            gamma_tilde: g,
            fidelity,
            gap: fidelity - fc,
            eof_bits,
            min_eigenvalue: min_eigenvalue(rho.matrix(), &tol)?,
            isotropy_residual: isotropic_fidelity(&rho, d)?.residual,
        });
    }
    Ok((rows, warnings))
}

pub fn render_series(rows: &[TimeSeriesRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => csv(
            EVOLVE_HEADER,
            rows.iter().map(|r| {
                vec![
                    num(r.t),
                    num(r.gamma_tilde),
                    num(r.fidelity),
                    num(r.gap),
                    opt_num(r.eof_bits),
                    num(r.min_eigenvalue),
                    num(r.isotropy_residual),
                ]
            }),
        ),
        OutputFormat::Json => json(rows),
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_evolve(a: &EvolveArgs) -> Result<Output, Failure> {
    let cfg = EvolveConfig::from_args(a)?;
    let (rows, warnings) = evolve_series(&cfg)?;
    Ok(Output {
        body: render_series(&rows, a.output.format),
        warnings,
    })
}

fn status_name(s: EsdStatus) -> &'static str {
    match s {
        EsdStatus::AlreadySeparable => "AlreadySeparable",
        EsdStatus::FiniteDeath => "FiniteDeath",
        EsdStatus::AsymptoticOnly => "AsymptoticOnly",
        EsdStatus::NeverSeparates => "NeverSeparates",
    }
}

fn crossing_name(k: CrossingKind) -> &'static str {
    match k {
        CrossingKind::EntanglementSuddenDeath => "entanglement_sudden_death",
        CrossingKind::FidelityThresholdCrossing => "fidelity_threshold_crossing",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EsdReport {
    pub d: usize,
    pub f0: f64,
    pub model: &'static str,
    pub scenario: &'static str,
    pub status: &'static str,
    pub crossing: &'static str,
    pub death_time: Option<f64>,
    pub gamma_tilde_star: Option<f64>,
    pub f_infinity: f64,
    pub gap_at_zero: f64,
    pub effective_rate: f64,
    pub analytic_time: Option<f64>,
    pub eof_initial_bits: Option<f64>,
}

fn is_boundary_f0(d: usize, f0: f64) -> bool {
    d >= 3 && (f0 - 1.0 / (d as f64 - 1.0)).abs() <= 1e-15
}

/// Closed-form death time, when the configuration is the `F₀ = 1/(d−1)` family.
fn analytic_time(d: usize, f0: f64, model: NoiseModel, rate: f64) -> Option<f64> {
    if is_boundary_f0(d, f0) && rate > 0.0 {
        esd_time_analytic(d, model, rate).ok()
    } else {
        None
    }
}

pub fn esd_report(
    d: usize,
    f0: f64,
    model: NoiseModel,
    scenario: NoiseScenario,
    params: &NoiseParams<f64>,
) -> Result<EsdReport, Failure> {
    let r = esd_time_numeric(d, f0, model, scenario, params, &SolverOptions::default())?;
    let eof_initial_bits = match r.kind {
        CrossingKind::EntanglementSuddenDeath => Some(eof_isotropic(d, f0)?.eof),
        CrossingKind::FidelityThresholdCrossing => None,
    };
    Ok(EsdReport {
        d,
        f0,
        model: model_name(model),
        scenario: scenario_name(scenario),
        status: status_name(r.status),
        crossing: crossing_name(r.kind),
        death_time: r.death_time,
        gamma_tilde_star: r.gamma_tilde_star,
        f_infinity: r.f_infinity,
        gap_at_zero: r.gap_at_zero,
        effective_rate: r.effective_rate,
        analytic_time: analytic_time(d, f0, model, r.effective_rate),
        eof_initial_bits,
    })
}

pub fn cmd_esd(a: &EsdArgs) -> Result<Output, Failure> {
    let f0 = a.state.f0()?;
    let report = esd_report(
        a.state.d,
        f0,
        a.noise.model.into(),
        a.noise.scenario.into(),
        &a.noise.params()?,
    )?;
    Ok(Output {
        body: json(&report),
        warnings: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub d: usize,
    pub f0: f64,
    pub model: &'static str,
    pub scenario: &'static str,
    pub status: Option<&'static str>,
    pub gamma_tilde_star: Option<f64>,
    pub death_time: Option<f64>,
    pub analytic_time: Option<f64>,
    pub abs_rel_error: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub points: Vec<(usize, f64)>,
    pub model: NoiseModel,
    pub scenario: NoiseScenario,
    pub params: NoiseParams<f64>,
}

impl SweepConfig {
    pub fn from_args(a: &SweepArgs) -> Result<Self, Failure> {
        let dims = parse_dims(&a.d)?;
        let f0s = if a.f0_paper {
            parse_f0_list("boundary")?
        } else {
            parse_f0_list(&a.f0)?
        };
        let mut points = Vec::with_capacity(dims.len() * f0s.len());
        for &d in &dims {
            for &c in &f0s {
                points.push((d, c.resolve(d)?));
            }
        }
        Ok(Self {
            points,
            model: a.noise.model.into(),
            scenario: a.noise.scenario.into(),
            params: a.noise.params()?,
        })
    }
}

fn sweep_row(cfg: &SweepConfig, d: usize, f0: f64) -> SweepRow {
    let mut row = SweepRow {
        d,
        f0,
        model: model_name(cfg.model),
        scenario: scenario_name(cfg.scenario),
        status: None,
        gamma_tilde_star: None,
        death_time: None,
        analytic_time: None,
        abs_rel_error: None,
        error: None,
    };
    match esd_time_numeric(
        d,
        f0,
        cfg.model,
        cfg.scenario,
        &cfg.params,
        &SolverOptions::default(),
    ) {
        Ok(r) => {
            row.status = Some(status_name(r.status));
            row.gamma_tilde_star = r.gamma_tilde_star;
            row.death_time = r.death_time;
            row.analytic_time = analytic_time(d, f0, cfg.model, r.effective_rate);
            if let (Some(t), Some(a)) = (row.death_time, row.analytic_time) {
                row.abs_rel_error = Some((t - a).abs() / a);
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Rows are computed in parallel and returned in input order.
pub fn sweep_rows(cfg: &SweepConfig) -> Vec<SweepRow> {
    cfg.points
        .par_iter()
        .map(|&(d, f0)| sweep_row(cfg, d, f0))
        .collect()
}

pub fn render_sweep(rows: &[SweepRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => csv(
            SWEEP_HEADER,
            rows.iter().map(|r| {
                vec![
                    r.d.to_string(),
                    num(r.f0),
                    r.model.to_string(),
                    r.scenario.to_string(),
                    r.status.unwrap_or_default().to_string(),
                    opt_num(r.gamma_tilde_star),
                    opt_num(r.death_time),
                    opt_num(r.analytic_time),
                    opt_num(r.abs_rel_error),
                    r.error.as_deref().map(csv_field).unwrap_or_default(),
                ]
            }),
        ),
        OutputFormat::Json => json(rows),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<Output, Failure> {
    let cfg = SweepConfig::from_args(a)?;
    Ok(Output {
        body: render_sweep(&sweep_rows(&cfg), a.output.format),
        warnings: Vec::new(),
    })
}
