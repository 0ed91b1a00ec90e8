//! Desk-scale invariant and oracle suites behind `esdlab verify`.

use clap::ValueEnum;

use esdlab::densmat::{apply_channel_conventional, physicality};
use esdlab::dephasing::{
    damping_certificate, decay_factors, evolve_with, evolved_closed_form, full_channel_kraus,
    kraus_simple_operators, DephasingFactors, Side,
};
use esdlab::esd::{self, esd_time_analytic, esd_time_numeric, SolverOptions};
use esdlab::isotropic::{eof_linear_branch, eof_middle_branch, linear_branch_start};
use esdlab::{
    apply_channel, eof_isotropic, fidelity_with_projector, make_isotropic, DensityMatrix, KrausSet,
    MaxEntangled, NoiseModel, NoiseParams, NoiseScenario, Tolerances,
};

use crate::format::num;

/// Deliberate defects used to check that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// `ω = √(1 + γ²)` instead of `√(1 − γ²)`.
    OmegaSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub dmax: usize,
    pub tol: f64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            dmax: 6,
            tol: crate::args::DEFAULT_TOL,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub threshold: f64,
    /// Parameters of the worst case, or of the first error.
    pub worst_case: String,
    pub error: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_residual <= self.threshold
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "{} {:<22} cases={:<5} max_residual={:<14} threshold={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            num(self.max_residual),
            num(self.threshold)
        );
        if !self.passed() {
            s.push_str(&format!("  at {}", self.worst_case));
            if let Some(e) = &self.error {
                s.push_str(&format!("  error: {e}"));
            }
        }
        s
    }
}

struct Suite {
    result: SuiteResult,
}

impl Suite {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self {
            result: SuiteResult {
                name,
                cases: 0,
                max_residual: 0.0,
                threshold,
                worst_case: String::new(),
                error: None,
            },
        }
    }

    fn record(&mut self, residual: f64, case: impl FnOnce() -> String) {
        self.result.cases += 1;
        if residual > self.result.max_residual || residual.is_nan() {
            self.result.max_residual = if residual.is_nan() {
                f64::INFINITY
            } else {
                residual
            };
            self.result.worst_case = case();
        }
    }

    fn check<T>(&mut self, r: esdlab::Result<T>, case: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.result.cases += 1;
                if self.result.error.is_none() {
                    self.result.error = Some(e.to_string());
                    self.result.worst_case = case();
                }
                None
            }
        }
    }

    fn finish(self) -> SuiteResult {
        self.result
    }
}

const TIMES: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 20.0];

fn factors(
    t: f64,
    params: &NoiseParams<f64>,
    s: NoiseScenario,
    fault: Option<Fault>,
) -> esdlab::Result<DephasingFactors<f64>> {
    let mut f = decay_factors(t, params, s)?;
    if fault == Some(Fault::OmegaSign) {
        f.omega_a = (1.0 + f.gamma_a * f.gamma_a).sqrt();
        f.omega_b = (1.0 + f.gamma_b * f.gamma_b).sqrt();
    }
    Ok(f)
}

/// Simple-model channel assembled without the completeness gate so that
/// broken operators still produce measurable residuals.
fn simple_channel_unchecked(d: usize, f: &DephasingFactors<f64>) -> esdlab::Result<KrausSet<f64>> {
    let a = KrausSet::unchecked(kraus_simple_operators(d, Side::A, f)?)?;
    let b = KrausSet::unchecked(kraus_simple_operators(d, Side::B, f)?)?;
    match f.scenario {
        NoiseScenario::AOnly => Ok(a),
        NoiseScenario::BOnly => Ok(b),
        NoiseScenario::Both => a.then(&b),
    }
}

fn kraus_completeness(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("kraus_completeness", o.tol);
    let params = NoiseParams::new(1.0, 0.6).unwrap();
    for d in 2..=o.dmax {
        for t in TIMES {
            for sc in NoiseScenario::ALL {
                let case = || format!("d={d} t={t} scenario={sc:?}");
                let Some(f) = s.check(factors(t, &params, sc, o.fault), case) else {
                    continue;
                };
                let Some(ks) = s.check(simple_channel_unchecked(d, &f), case) else {
                    continue;
                };
                s.record(ks.completeness_residual(), case);
                s.record(ks.unitality_residual(), case);
                let case = || format!("d={d} t={t} scenario={sc:?} model=full");
                if let Some(full) = s.check(full_channel_kraus(d, &f), case) {
                    s.record(full.completeness_residual(), case);
                    s.record(full.unitality_residual(), case);
                }
            }
        }
    }
    s.finish()
}

fn probe_states(d: usize) -> Vec<(String, DensityMatrix<f64>)> {
    let mut v = vec![(
        "maximally_mixed".to_string(),
        DensityMatrix::maximally_mixed(d * d),
    )];
    for f0 in [0.05, 1.0 / d as f64, 0.7, 1.0] {
        v.push((
            format!("isotropic(F0={f0})"),
            make_isotropic(d, f0).unwrap(),
        ));
    }
    v
}

fn channel_physicality(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("channel_physicality", o.tol);
    let params = NoiseParams::new(1.0, 0.6).unwrap();
    for d in 2..=o.dmax {
        let mixed = DensityMatrix::maximally_mixed(d * d);
        for t in TIMES {
            for sc in NoiseScenario::ALL {
                for model in NoiseModel::ALL {
                    let Some(f) =
                        s.check(factors(t, &params, sc, o.fault), || format!("d={d} t={t}"))
                    else {
                        continue;
                    };
                    let evolve = |rho: &DensityMatrix<f64>| match model {
                        NoiseModel::SimpleGroundDephasing => {
                            apply_channel(rho, &simple_channel_unchecked(d, &f)?)
                        }
                        NoiseModel::FullIsotropicDephasing => evolve_with(rho, d, model, &f),
                    };
                    for (label, rho) in probe_states(d) {
                        let case =
                            || format!("d={d} t={t} scenario={sc:?} model={model:?} state={label}");
                        let Some(out) = s.check(evolve(&rho), case) else {
                            continue;
                        };
                        let Some(rep) = s.check(physicality(out.matrix()), case) else {
                            continue;
                        };
                        s.record(rep.trace, case);
                        s.record(rep.hermiticity, case);
                        // PSD slack of 1e-10 mapped onto the suite threshold
                        s.record((-rep.min_eigenvalue - 1e-10).max(0.0), case);
                    }
                    let case = || format!("d={d} t={t} scenario={sc:?} model={model:?} unitality");
                    if let Some(out) = s.check(evolve(&mixed), case) {
                        s.record(out.max_abs_diff(&mixed), case);
                    }
                }
            }
        }
    }
    s.finish()
}

fn kraus_ordering(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("kraus_ordering", o.tol);
    let params = NoiseParams::equal(1.0).unwrap();
    for d in 2..=o.dmax {
        for t in TIMES {
            for sc in NoiseScenario::ALL {
                let case = || format!("d={d} t={t} scenario={sc:?}");
                let Some(f) = s.check(factors(t, &params, sc, o.fault), case) else {
                    continue;
                };
                let Some(ks) = s.check(simple_channel_unchecked(d, &f), case) else {
                    continue;
                };
                let rho = make_isotropic(d, 0.8).unwrap();
                let a = s.check(apply_channel(&rho, &ks), case);
                let b = s.check(apply_channel_conventional(&rho, &ks), case);
                if let (Some(a), Some(b)) = (a, b) {
                    s.record(a.max_abs_diff(&b), case);
                }
            }
        }
    }
    s.finish()
}

fn oracle_equivalence(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("oracle_equivalence", o.tol);
    let params = NoiseParams::equal(1.0).unwrap();
    for d in 2..=o.dmax {
        let projector = MaxEntangled::new(d).unwrap();
        for f0 in [0.3, 1.0 / (d as f64 - 1.0), 0.9] {
            let rho0 = make_isotropic(d, f0).unwrap();
            for t in TIMES {
                for sc in NoiseScenario::ALL {
                    for model in NoiseModel::ALL {
                        let case =
                            || format!("d={d} f0={f0} t={t} scenario={sc:?} model={model:?}");
                        let Some(f) = s.check(factors(t, &params, sc, o.fault), case) else {
                            continue;
                        };
                        let brute = match model {
                            NoiseModel::SimpleGroundDephasing => simple_channel_unchecked(d, &f)
                                .and_then(|ks| apply_channel(&rho0, &ks)),
                            NoiseModel::FullIsotropicDephasing => evolve_with(&rho0, d, model, &f),
                        };
                        let Some(brute) = s.check(brute, case) else {
                            continue;
                        };
                        if let Some(closed) = s.check(evolved_closed_form(d, f0, model, &f), case) {
                            s.record(brute.max_abs_diff(&closed), case);
                        }
                        let fb = s.check(
                            fidelity_with_projector(&brute, &projector, &Tolerances::uniform(1e-6)),
                            case,
                        );
                        let fc = s.check(esd::fidelity(d, f0, model, f.gamma_tilde), case);
                        if let (Some(fb), Some(fc)) = (fb, fc) {
                            s.record((fb - fc).abs(), case);
                        }
                    }
                }
            }
        }
    }
    s.finish()
}

fn schur_certificate(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("schur_psd_certificate", 1e-12);
    let params = NoiseParams::new(1.0, 0.3).unwrap();
    for d in 2..=o.dmax {
        for t in TIMES {
            for sc in NoiseScenario::ALL {
                let case = || format!("d={d} t={t} scenario={sc:?}");
                let Some(f) = s.check(decay_factors(t, &params, sc), case) else {
                    continue;
                };
                if let Some(min) = s.check(damping_certificate(d, &f), case) {
                    s.record((-min).max(0.0), case);
                }
            }
        }
    }
    s.finish()
}

fn eof_continuity(_o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("eof_branch_continuity", 1e-12);
    for d in 3..=10 {
        let fc = 1.0 / d as f64;
        s.record(eof_middle_branch(d, fc).abs(), || format!("d={d} F=1/d"));
        let fb = linear_branch_start::<f64>(d);
        s.record(
            (eof_middle_branch(d, fb) - eof_linear_branch(d, fb)).abs(),
            || format!("d={d} F=4(d-1)/d^2"),
        );
        let top = eof_isotropic(d, 1.0).map(|e| (e.eof - (d as f64).log2()).abs());
        if let Some(r) = s.check(top, || format!("d={d} F=1")) {
            s.record(r, || format!("d={d} F=1"));
        }
        let mut prev = 0.0;
        for i in 0..1000 {
            let f = fc + (1.0 - fc) * i as f64 / 999.0;
            if let Some(e) = s.check(eof_isotropic(d, f), || format!("d={d} F={f}")) {
                s.record((prev - e.eof).max(0.0), || {
                    format!("d={d} F={f} monotonicity")
                });
                prev = e.eof;
            }
        }
    }
    s.finish()
}

fn analytic_vs_numeric(_o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("analytic_vs_numeric", 1e-9);
    let params = NoiseParams::new(1.0, 0.0).unwrap();
    for d in 3..=12 {
        let f0 = 1.0 / (d as f64 - 1.0);
        for model in NoiseModel::ALL {
            let case = || format!("d={d} model={model:?}");
            let num = s.check(
                esd_time_numeric(
                    d,
                    f0,
                    model,
                    NoiseScenario::AOnly,
                    &params,
                    &SolverOptions::default(),
                ),
                case,
            );
            let ana = s.check(esd_time_analytic(d, model, 1.0), case);
            if let (Some(n), Some(a)) = (num, ana) {
                let t = n.death_time.unwrap_or(f64::INFINITY);
                s.record((t - a).abs() / a, case);
            }
        }
    }
    s.finish()
}

fn initial_gap(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("initial_gap", 1e-14);
    for d in 3..=12 {
        for model in NoiseModel::ALL {
            let case = || format!("d={d} model={model:?}");
            if let Some(g) = s.check(esd::gap(d, 1.0 / (d as f64 - 1.0), model, 1.0), case) {
                s.record((g - 1.0 / (d * (d - 1)) as f64).abs(), case);
            }
        }
    }
    let _ = o;
    s.finish()
}

fn scenario_composition(o: &VerifyOptions) -> SuiteResult {
    let mut s = Suite::new("scenario_composition", o.tol);
    let params = NoiseParams::new(0.7, 1.4).unwrap();
    for d in 2..=o.dmax {
        let rho0 = make_isotropic(d, 0.75).unwrap();
        for t in TIMES {
            for model in NoiseModel::ALL {
                let case = || format!("d={d} t={t} model={model:?}");
                let run = |sc: NoiseScenario,
                           rho: &DensityMatrix<f64>|
                 -> esdlab::Result<DensityMatrix<f64>> {
                    let f = factors(t, &params, sc, o.fault)?;
                    match model {
                        NoiseModel::SimpleGroundDephasing => {
                            apply_channel(rho, &simple_channel_unchecked(d, &f)?)
                        }
                        NoiseModel::FullIsotropicDephasing => evolve_with(rho, d, model, &f),
                    }
                };
                let ab =
                    run(NoiseScenario::AOnly, &rho0).and_then(|a| run(NoiseScenario::BOnly, &a));
                let both = run(NoiseScenario::Both, &rho0);
                let ab = s.check(ab, case);
                let both = s.check(both, case);
                if let (Some(ab), Some(both)) = (ab, both) {
                    s.record(ab.max_abs_diff(&both), case);
                }
            }
        }
    }
    s.finish()
}

pub fn run(o: &VerifyOptions) -> Vec<SuiteResult> {
    vec![
        kraus_completeness(o),
        channel_physicality(o),
        kraus_ordering(o),
        oracle_equivalence(o),
        schur_certificate(o),
        scenario_composition(o),
        eof_continuity(o),
        analytic_vs_numeric(o),
        initial_gap(o),
    ]
}
