//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use esdlab::densmat::{apply_channel, physicality};
use esdlab::dephasing::{complete_dephasing_kraus, decay_factors, simple_channel};
use esdlab::esd::{self, esd_time_analytic, esd_time_numeric, SolverOptions};
use esdlab::isotropic::{eof_linear_branch, eof_middle_branch, linear_branch_start};
use esdlab::{
    apply_full_dephasing, eof_isotropic, fidelity_with_projector, full_channel_kraus,
    isotropic_fidelity, make_isotropic, validate_density, Complex64, ComplexMatrix64,
    DensityMatrix64, EsdStatus, KrausSet64, MaxEntangled, NoiseModel, NoiseParams, NoiseScenario,
    Tolerances,
};

const SIMPLE: NoiseModel = NoiseModel::SimpleGroundDephasing;
const FULL: NoiseModel = NoiseModel::FullIsotropicDephasing;
const TIMES: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 5.0, 20.0];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

/// Failures collected while a criterion runs; the first few are reported.
#[derive(Default)]
struct Failures(Vec<String>);

impl Failures {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn outcome(self, summary: String) -> Outcome {
        if self.0.is_empty() {
            return Outcome {
                pass: true,
                detail: summary,
            };
        }
        let shown: Vec<_> = self.0.iter().take(3).cloned().collect();
        let more = if self.0.len() > 3 {
            format!(" (+{} more)", self.0.len() - 3)
        } else {
            String::new()
        };
        Outcome {
            pass: false,
            detail: format!("{summary}; failed: {}{more}", shown.join("; ")),
        }
    }
}

fn boundary_f0(d: usize) -> f64 {
    1.0 / (d as f64 - 1.0)
}

fn one_sided() -> NoiseParams<f64> {
    NoiseParams::new(1.0, 0.0).unwrap()
}

fn death_time(d: usize, f0: f64, model: NoiseModel) -> Option<f64> {
    esd_time_numeric(
        d,
        f0,
        model,
        NoiseScenario::AOnly,
        &one_sided(),
        &SolverOptions::default(),
    )
    .ok()
    .and_then(|r| r.death_time)
}

fn c1_simple_death_time() -> Outcome {
    let mut fails = Failures::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut d3 = f64::NAN;
    for d in 3..=12 {
        let df = d as f64;
        let expected = 2.0 * (2.0 * (df * df - df + 1.0) / ((df - 1.0) * (df - 2.0))).ln();
        let t = death_time(d, boundary_f0(d), SIMPLE).unwrap_or(f64::NAN);
        let rel = ((t - expected) / expected).abs();
        worst = worst.max(if rel.is_nan() { f64::INFINITY } else { rel });
        fails.check(rel <= 1e-9, || format!("d={d} t={t} expected={expected}"));
        let analytic = esd_time_analytic(d, SIMPLE, 1.0).unwrap_or(f64::NAN);
        fails.check(((analytic - expected) / expected).abs() <= 1e-12, || {
            format!("d={d} analytic={analytic}")
        });
        if d == 3 {
            d3 = t;
        }
    }
    let elapsed = start.elapsed();
    fails.check((d3 - 3.891820).abs() <= 1e-5, || format!("d=3 t={d3}"));
    fails.check(elapsed < Duration::from_secs(1), || {
        format!("runtime {elapsed:?}")
    });
    fails.outcome(format!(
        "max_rel_err={worst:.3e} t(d=3)={d3:.6} runtime={elapsed:.2?}"
    ))
}

fn c2_initial_gap() -> Outcome {
    let mut fails = Failures::default();
    let mut worst: f64 = 0.0;
    for d in 3..=12 {
        let expected = 1.0 / (d * (d - 1)) as f64;
        for model in NoiseModel::ALL {
            let g = esd::gap(d, boundary_f0(d), model, 1.0).unwrap_or(f64::NAN);
            let r = (g - expected).abs();
            worst = worst.max(r);
            fails.check(r <= 1e-14, || format!("d={d} {model:?} G={g}"));
        }
    }
    fails.outcome(format!("max_residual={worst:.3e}"))
}

fn c3_oracle_equivalence() -> Outcome {
    let mut fails = Failures::default();
    let start = Instant::now();
    let params = NoiseParams::new(1.0, 0.5).unwrap();
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for d in 2..=6 {
        let projector = MaxEntangled::new(d).unwrap();
        for f0 in [0.25, 0.6, 0.95] {
            let rho0 = make_isotropic(d, f0).unwrap();
            for t in TIMES {
                for sc in NoiseScenario::ALL {
                    for model in NoiseModel::ALL {
                        cases += 1;
                        let f = decay_factors(t, &params, sc).unwrap();
                        let brute =
                            esdlab::evolve(&rho0, d, model, sc, &params, t).and_then(|rho| {
                                fidelity_with_projector(&rho, &projector, &Tolerances::default())
                            });
                        let closed = esd::fidelity(d, f0, model, f.gamma_tilde);
                        let diff = match (brute, closed) {
                            (Ok(b), Ok(c)) => (b - c).abs(),
                            _ => f64::INFINITY,
                        };
                        worst = worst.max(diff);
                        fails.check(diff <= 1e-12, || {
                            format!("d={d} f0={f0} t={t} {sc:?} {model:?} diff={diff:e}")
                        });
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    fails.check(elapsed < Duration::from_secs(30), || {
        format!("runtime {elapsed:?}")
    });
    fails.outcome(format!(
        "cases={cases} max_diff={worst:.3e} runtime={elapsed:.2?}"
    ))
}

fn c4_full_model_death() -> Outcome {
    let mut fails = Failures::default();
    let params = one_sided();
    let mut d3 = f64::NAN;
    let mut worst_iso: f64 = 0.0;
    let mut worst_eof_after: f64 = 0.0;
    for d in 3..=12 {
        let f0 = boundary_f0(d);
        let eof0 = eof_isotropic(d, esd::fidelity(d, f0, FULL, 1.0).unwrap())
            .unwrap()
            .eof;
        fails.check(eof0 > 0.0, || format!("d={d} E_f(0)={eof0}"));
        let Some(td) = death_time(d, f0, FULL) else {
            fails.check(false, || format!("d={d} no finite death time"));
            continue;
        };
        if d == 3 {
            d3 = td;
        }
        let rho0 = make_isotropic(d, f0).unwrap();
        let mut samples = vec![0.0, 0.5 * td];
        samples.extend([1.0, 1.01, 1.5, 2.0, 5.0, 20.0, 200.0].map(|k| k * td));
        for t in samples {
            let f = decay_factors(t, &params, NoiseScenario::AOnly).unwrap();
            let fid = esd::fidelity(d, f0, FULL, f.gamma_tilde).unwrap();
            let eof = eof_isotropic(d, fid).unwrap().eof;
            if t >= td {
                worst_eof_after = worst_eof_after.max(eof);
                fails.check(eof == 0.0, || format!("d={d} t={t} E_f={eof:e}"));
            }
            let rho = esdlab::evolve(&rho0, d, FULL, NoiseScenario::AOnly, &params, t).unwrap();
            let residual = isotropic_fidelity(&rho, d)
                .map(|fit| fit.residual)
                .unwrap_or(f64::INFINITY);
            worst_iso = worst_iso.max(residual);
            fails.check(residual <= 1e-12, || {
                format!("isotropy residual d={d} t={t:.4} = {residual:.3e}")
            });
        }
    }
    fails.check((d3 - 1.694596).abs() <= 1e-5, || format!("d=3 t={d3}"));
    fails.outcome(format!(
        "t(d=3)={d3:.6} max_E_f_after_death={worst_eof_after:.3e} max_isotropy_residual={worst_iso:.3e}"
    ))
}

fn c5_eof_branches() -> Outcome {
    let mut fails = Failures::default();
    let mut worst: f64 = 0.0;
    let mut drops = 0;
    for d in 3..=10 {
        let lower = eof_middle_branch(d, 1.0 / d as f64).abs();
        let fb = linear_branch_start::<f64>(d);
        let upper = (eof_middle_branch(d, fb) - eof_linear_branch(d, fb)).abs();
        let top = (eof_isotropic(d, 1.0).unwrap().eof - (d as f64).log2()).abs();
        worst = worst.max(lower).max(upper).max(top);
        fails.check(lower <= 1e-12, || format!("d={d} at 1/d: {lower:e}"));
        fails.check(upper <= 1e-12, || format!("d={d} at 4(d-1)/d^2: {upper:e}"));
        fails.check(top <= 1e-12, || format!("d={d} E_f(1)-log2 d={top:e}"));
        let mut prev = f64::NEG_INFINITY;
        for i in 0..1000 {
            let f = i as f64 / 999.0;
            let e = eof_isotropic(d, f).unwrap().eof;
            if e < prev {
                drops += 1;
                fails.check(false, || format!("d={d} F={f} E_f decreases {prev} -> {e}"));
            }
            prev = e;
        }
    }
    fails.outcome(format!(
        "max_branch_residual={worst:.3e} monotonicity_violations={drops}"
    ))
}

fn random_density(n: usize, rng: &mut ChaCha8Rng) -> DensityMatrix64 {
    let data = (0..n * n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let a = ComplexMatrix64::from_vec(n, n, data).unwrap();
    let m = a.matmul(&a.adjoint()).unwrap();
    let tr = m.trace().re;
    validate_density(m.scale(1.0 / tr).hermitian_part(), &Tolerances::default()).unwrap()
}

fn c6_channel_physicality() -> Outcome {
    let mut fails = Failures::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = NoiseParams::new(1.0, 0.6).unwrap();
    let (mut trace, mut herm, mut min_eig, mut unital, mut kraus): (f64, f64, f64, f64, f64) =
        (0.0, 0.0, f64::INFINITY, 0.0, 0.0);
    let mut channels = 0;
    for d in 2..=6 {
        let n = d * d;
        let mut probes = vec![
            make_isotropic(d, 0.1).unwrap(),
            make_isotropic(d, 0.9).unwrap(),
        ];
        probes.extend((0..3).map(|_| random_density(n, &mut rng)));
        let mixed = DensityMatrix64::maximally_mixed(n);
        for t in TIMES {
            for sc in NoiseScenario::ALL {
                let f = decay_factors(t, &params, sc).unwrap();
                let mut sets: Vec<(String, KrausSet64)> = vec![
                    (
                        format!("simple d={d} t={t} {sc:?}"),
                        simple_channel(d, &f).unwrap(),
                    ),
                    (
                        format!("full-kraus d={d} t={t} {sc:?}"),
                        full_channel_kraus(d, &f).unwrap(),
                    ),
                ];
                if t == 0.0 && sc == NoiseScenario::Both {
                    sets.push((
                        format!("complete-dephasing d={d}"),
                        complete_dephasing_kraus(d).unwrap(),
                    ));
                }
                type Map<'a> =
                    Box<dyn Fn(&DensityMatrix64) -> esdlab::Result<DensityMatrix64> + 'a>;
                let mut maps: Vec<(String, Map)> = Vec::new();
                for (name, ks) in &sets {
                    let c = ks.completeness_residual();
                    let u = ks.unitality_residual();
                    kraus = kraus.max(c).max(u);
                    fails.check(c <= 1e-12 && u <= 1e-12, || {
                        format!("{name} kraus residuals {c:e} {u:e}")
                    });
                    maps.push((name.clone(), Box::new(move |rho| apply_channel(rho, ks))));
                }
                maps.push((
                    format!("full-schur d={d} t={t} {sc:?}"),
                    Box::new(move |rho| apply_full_dephasing(rho, d, &f)),
                ));
                for (name, map) in &maps {
                    channels += 1;
                    for rho in &probes {
                        let Ok(out) = map(rho) else {
                            fails.check(false, || format!("{name} errored"));
                            continue;
                        };
                        let rep = physicality(out.matrix()).unwrap();
                        trace = trace.max(rep.trace);
                        herm = herm.max(rep.hermiticity);
                        min_eig = min_eig.min(rep.min_eigenvalue);
                        fails.check(rep.trace <= 1e-12, || {
                            format!("{name} trace {:e}", rep.trace)
                        });
                        fails.check(rep.hermiticity <= 1e-12, || {
                            format!("{name} herm {:e}", rep.hermiticity)
                        });
                        fails.check(rep.min_eigenvalue >= -1e-10, || {
                            format!("{name} min eig {:e}", rep.min_eigenvalue)
                        });
                    }
                    let u = map(&mixed)
                        .map(|o| o.max_abs_diff(&mixed))
                        .unwrap_or(f64::INFINITY);
                    unital = unital.max(u);
                    fails.check(u <= 1e-12, || format!("{name} unitality {u:e}"));
                }
            }
        }
    }
    fails.outcome(format!(
        "channels={channels} trace={trace:.2e} herm={herm:.2e} min_eig={min_eig:.2e} unital={unital:.2e} kraus={kraus:.2e}"
    ))
}

fn c7_ordering_and_thresholds() -> Outcome {
    let mut fails = Failures::default();
    let mut min_ratio = f64::INFINITY;
    for d in 3..=12 {
        let full = death_time(d, boundary_f0(d), FULL);
        let simple = death_time(d, boundary_f0(d), SIMPLE);
        match (full, simple) {
            (Some(f), Some(s)) => {
                min_ratio = min_ratio.min(s / f);
                fails.check(f < s, || format!("d={d} full={f} simple={s}"));
            }
            _ => fails.check(false, || format!("d={d} missing death time")),
        }
    }
    let params = NoiseParams::equal(1.0).unwrap();
    let classify = |d: usize, f0: f64, model: NoiseModel| {
        esd_time_numeric(
            d,
            f0,
            model,
            NoiseScenario::Both,
            &params,
            &SolverOptions::default(),
        )
        .map(|r| r.status)
    };
    let s057 = classify(3, 0.57, SIMPLE);
    fails.check(matches!(s057, Ok(EsdStatus::NeverSeparates)), || {
        format!("d=3 F0=0.57 simple -> {s057:?}")
    });
    let s1 = classify(3, 1.0, FULL);
    fails.check(matches!(s1, Ok(EsdStatus::AsymptoticOnly)), || {
        format!("d=3 F0=1 full -> {s1:?}")
    });
    let mut probes = 0;
    for d in 3..=12 {
        let th = esd::esd_threshold::<f64>(d, SIMPLE).unwrap();
        let below = classify(d, th - 1e-3, SIMPLE);
        let above = classify(d, th + 1e-3, SIMPLE);
        probes += 2;
        fails.check(matches!(below, Ok(EsdStatus::FiniteDeath)), || {
            format!("d={d} below threshold -> {below:?}")
        });
        fails.check(matches!(above, Ok(EsdStatus::NeverSeparates)), || {
            format!("d={d} above threshold -> {above:?}")
        });
    }
    fails.outcome(format!(
        "min simple/full death-time ratio={min_ratio:.4} threshold_probes={probes}"
    ))
}

fn c8_sweep_determinism() -> Outcome {
    let mut fails = Failures::default();
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_esdlab"))
            .args([
                "sweep",
                "--d",
                "3-10",
                "--f0",
                "boundary,0.5,0.9",
                "--model",
                "full",
                "--out",
            ])
            .arg(&path)
            .status()
            .expect("failed to launch esdlab");
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok1, a) = run("first.csv");
    let (ok2, b) = run("second.csv");
    fails.check(ok1 && ok2, || "sweep exited unsuccessfully".to_string());
    fails.check(!a.is_empty(), || "empty output".to_string());
    fails.check(a == b, || "outputs differ".to_string());
    let rows = a.iter().filter(|&&c| c == b'\n').count();
    fails.outcome(format!(
        "bytes={} lines={rows} identical={}",
        a.len(),
        a == b
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 analytic simple-model death time", c1_simple_death_time),
        ("2 initial separability gap", c2_initial_gap),
        (
            "3 closed form vs brute-force fidelity",
            c3_oracle_equivalence,
        ),
        (
            "4 full-model sudden death and isotropy",
            c4_full_model_death,
        ),
        ("5 E_f branch continuity and monotonicity", c5_eof_branches),
        ("6 channel physicality", c6_channel_physicality),
        (
            "7 model ordering and thresholds",
            c7_ordering_and_thresholds,
        ),
        ("8 sweep determinism", c8_sweep_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        if !out.pass {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {} [{elapsed:.2?}]",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
