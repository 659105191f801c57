//! Command-line front end: every analysis operation as a subcommand with
//! CSV/JSON output. Exit codes: 0 success, 2 validation error, 3 numeric
//! failure.

mod output;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use output::{emit, fmt_f64, Format, Table};
use semicycle_core as core;
use semicycle_core::{IntegrateOpts, Mode};

#[derive(Parser)]
#[command(
    name = "semicycle",
    about = "Numerical laboratory for the linear delay equation x'(t) = p(t) x(tau(t)): \
             oscillation thresholds, critical periodic solutions, and convergence experiments",
    after_help = "Output goes to --out when given, to $SEMICYCLE_OUT_DIR/<command>.<ext> when \
                  that variable is set, and to stdout otherwise."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Output path (defaults to $SEMICYCLE_OUT_DIR/<command>.<ext> or stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TauSelect {
    /// Single delay value.
    #[arg(long, conflicts_with = "tau_grid")]
    tau: Option<f64>,
    /// Delay grid a:b:n (n points from a to b inclusive).
    #[arg(long)]
    tau_grid: Option<String>,
}

impl TauSelect {
    fn values(&self) -> Result<Vec<f64>> {
        if let Some(t) = self.tau {
            return Ok(vec![t]);
        }
        if let Some(g) = &self.tau_grid {
            return parse_grid(g);
        }
        bail!("provide --tau or --tau-grid a:b:n")
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        bail!("--tau-grid expects a:b:n");
    }
    let a: f64 = parts[0].parse().context("grid start")?;
    let b: f64 = parts[1].parse().context("grid end")?;
    let n: usize = parts[2].parse().context("grid count")?;
    if n < 1 {
        bail!("grid count must be >= 1");
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}

#[derive(Subcommand)]
enum Command {
    /// First root of the comparison solution. CSV columns: tau,rho
    Rho {
        #[command(flatten)]
        taus: TauSelect,
        /// Emit full solution records (JSON only): exact segments plus root.
        #[arg(long)]
        records: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Critical semicycle length, numeric and closed form.
    /// CSV columns: tau,lambda,lambda_closed_form (closed form is nan below 1)
    Lambda {
        #[command(flatten)]
        taus: TauSelect,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Principal spectral triple. CSV columns: tau,mu,nu,gamma,res1,res2
    Spectral {
        #[command(flatten)]
        taus: TauSelect,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full threshold bundle per delay.
    /// CSV columns: tau,rho,xi,lambda,mu,nu,gamma
    Threshold {
        #[command(flatten)]
        taus: TauSelect,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Near-threshold asymptotics table with extrapolated limits.
    /// CSV columns: tau,rho,xi,lambda,mu,nu,gamma,rho_product,lambda_product,
    /// curvature_ratio,gamma_ratio,root_frequency_combo; limits appear as
    /// trailing '#'-comment lines
    Asymptotics {
        /// Coarsest offset above the threshold (geometric ladder, ratio 4).
        #[arg(long, default_value_t = 0.016)]
        coarsest: f64,
        /// Finest offset above the threshold.
        #[arg(long, default_value_t = 0.001)]
        finest: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build and verify the special periodic solutions.
    /// CSV columns: kind,tau,period,sign,tau_m,residual,periodicity_defect,
    /// reintegration_error,min_value (kind: 0 minus, 1 plus, 2 varpi, 3 tilde)
    Periodic {
        /// One preset: minus | plus | varpi:<tau> | varpi-tilde:<tau>.
        #[arg(long, conflicts_with = "catalog")]
        kind: Option<String>,
        /// Emit the whole catalog for the tau lists.
        #[arg(long)]
        catalog: bool,
        /// Comma-separated taus for the catalog's mixed-feedback kind.
        #[arg(long, default_value = "0.5,0.8,1,1.5,2")]
        tau_list: String,
        /// Comma-separated taus for the catalog's antiperiodic kind.
        #[arg(long, default_value = "1,1.125,1.5")]
        tilde_tau_list: String,
        /// Write the defining problem of --kind as a JSON spec file.
        #[arg(long)]
        emit_spec: Option<PathBuf>,
        /// Emit sampled solution values (t,value) instead of the report.
        #[arg(long)]
        solution: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate a problem. CSV columns: t,value
    Simulate {
        /// JSON problem file.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Named preset (minus, plus, varpi:<tau>, varpi-tilde:<tau>).
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        horizon: f64,
        /// Output grid step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Integration mode.
        #[arg(long, value_parser = parse_mode, default_value = "auto")]
        mode: Mode,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rescale a problem to |p| = 1. JSON: { normalized, clock }; CSV: the
    /// clock knots t,f
    Normalize {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        horizon: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Semicycle analysis. CSV columns: index,zero,length,extremum_t,extremum_value
    Semicycles {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        horizon: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classify a solution against the critical semicycle length.
    /// CSV columns: alpha,lambda,tau_m,class (class: 0 decay, 1 bounded, 2 above)
    Classify {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        horizon: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convergence probe with seeded summable delay perturbations.
    /// CSV columns: window,residual; amplitude/phase/verdict in '#' comments
    Converge {
        #[arg(long)]
        tau: f64,
        /// Seed for the perturbation stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Horizon in units of the critical semicycle length.
        #[arg(long, default_value_t = 200.0)]
        periods: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Amplitude-converging, phase-drifting constructions.
    /// CSV columns: block,amplitude,phase_drift; witness in '#' comments
    Counterexample {
        /// slow-phase (drifting sawtooth blocks) or tau2 (gapped triangle).
        #[arg(long)]
        kind: String,
        /// Blocks for slow-phase, harmonic offset N for tau2.
        #[arg(long)]
        param: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exploratory probe of the open positive-feedback convergence question.
    /// CSV columns: window,residual; the verdict is reported, never asserted
    Conjecture {
        /// History preset: exact | scaled:<c> | bump:<size>.
        #[arg(long, default_value = "exact")]
        history: String,
        /// Horizon in units of the antiperiod.
        #[arg(long, default_value_t = 15.0)]
        periods: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decay-bound probe for the comparison lemma. CSV columns: t,a
    DecayBound {
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "exact" => Ok(Mode::Exact),
        "grid" => Ok(Mode::Grid),
        "auto" => Ok(Mode::Auto),
        other => Err(format!("unknown mode '{other}' (exact|grid|auto)")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 2 for validation problems, 3 for numeric failures.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    if let Some(core_err) = e.downcast_ref::<core::Error>() {
        return match core_err {
            core::Error::Numeric(_) | core::Error::InvariantViolation(_) => 3,
            _ => 2,
        };
    }
    2
}

/// Order-preserving parallel map for grid sweeps.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let n = items.len();
    let threads = std::thread::available_parallelism()
        .map(|x| x.get())
        .unwrap_or(1)
        .clamp(1, 8);
    if threads <= 1 || n < 2 {
        return items.iter().map(&f).collect();
    }
    let chunk = n.div_ceil(threads);
    let mut results: Vec<Option<R>> = (0..n).map(|_| None).collect();
    std::thread::scope(|s| {
        for (res_chunk, item_chunk) in results.chunks_mut(chunk).zip(items.chunks(chunk)) {
            let f = &f;
            s.spawn(move || {
                for (r, item) in res_chunk.iter_mut().zip(item_chunk) {
                    *r = Some(f(item));
                }
            });
        }
    });
    results.into_iter().map(|r| r.unwrap()).collect()
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Rho { taus, records, output } => {
            let taus = taus.values()?;
            if records {
                if output.format != Format::Json {
                    bail!("--records requires --format json");
                }
                let recs = par_map(&taus, |&tau| core::myshkis_solution(tau));
                let recs = recs.into_iter().collect::<core::Result<Vec<_>>>()?;
                let payload = serde_json::to_string_pretty(&recs)? + "\n";
                return emit(output.out.as_ref(), "rho", output.format, &payload);
            }
            let rows = par_map(&taus, |&tau| {
                core::myshkis_solution(tau).map(|r| vec![tau, r.rho])
            });
            let rows = rows.into_iter().collect::<core::Result<Vec<_>>>()?;
            let table = Table {
                columns: vec!["tau", "rho"],
                rows,
            };
            emit(output.out.as_ref(), "rho", output.format, &table.render(output.format))
        }
        Command::Lambda { taus, output } => {
            let taus = taus.values()?;
            let rows = par_map(&taus, |&tau| {
                core::lambda(tau).map(|l| {
                    let cf = core::lambda_closed_form(tau).unwrap_or(f64::NAN);
                    vec![tau, l, cf]
                })
            });
            let rows = rows.into_iter().collect::<core::Result<Vec<_>>>()?;
            let table = Table {
                columns: vec!["tau", "lambda", "lambda_closed_form"],
                rows,
            };
            emit(output.out.as_ref(), "lambda", output.format, &table.render(output.format))
        }
        Command::Spectral { taus, output } => {
            let taus = taus.values()?;
            let rows = par_map(&taus, |&tau| {
                core::spectral(tau).map(|r| {
                    let (r1, r2) = r.residuals();
                    vec![tau, r.mu, r.nu, r.gamma, r1, r2]
                })
            });
            let rows = rows.into_iter().collect::<core::Result<Vec<_>>>()?;
            let table = Table {
                columns: vec!["tau", "mu", "nu", "gamma", "res1", "res2"],
                rows,
            };
            emit(output.out.as_ref(), "spectral", output.format, &table.render(output.format))
        }
        Command::Threshold { taus, output } => {
            let taus = taus.values()?;
            let rows = par_map(&taus, |&tau| -> core::Result<Vec<f64>> {
                let rec = core::threshold_record(tau)?;
                let sp = core::spectral(tau)?;
                Ok(vec![tau, rec.rho, rec.xi, rec.lambda, sp.mu, sp.nu, sp.gamma])
            });
            let rows = rows.into_iter().collect::<core::Result<Vec<_>>>()?;
            let table = Table {
                columns: vec!["tau", "rho", "xi", "lambda", "mu", "nu", "gamma"],
                rows,
            };
            emit(output.out.as_ref(), "threshold", output.format, &table.render(output.format))
        }
        Command::Asymptotics {
            coarsest,
            finest,
            output,
        } => {
            if !(finest > 0.0 && coarsest > finest) {
                bail!("need coarsest > finest > 0");
            }
            // Geometric ladder from coarsest down to finest (ratio 4); the
            // last three points drive the two-level extrapolation.
            let mut offsets = vec![coarsest];
            while *offsets.last().unwrap() > finest * 4.0 + 1e-15 {
                let next = offsets.last().unwrap() / 4.0;
                offsets.push(next);
            }
            offsets.push(finest);
            offsets.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * a.abs().max(1.0));
            let taus: Vec<f64> = offsets.iter().map(|h| core::math::INV_E + h).collect();
            let report = core::lambda_asymptotics(&taus)?;
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&report)? + "\n";
                    emit(output.out.as_ref(), "asymptotics", output.format, &payload)
                }
                Format::Csv => {
                    let mut table = Table {
                        columns: vec![
                            "tau",
                            "rho",
                            "xi",
                            "lambda",
                            "mu",
                            "nu",
                            "gamma",
                            "rho_product",
                            "lambda_product",
                            "curvature_ratio",
                            "gamma_ratio",
                            "root_frequency_combo",
                        ],
                        rows: vec![],
                    };
                    for r in &report.rows {
                        table.rows.push(vec![
                            r.tau,
                            r.rho,
                            r.xi,
                            r.lambda,
                            r.mu,
                            r.nu,
                            r.gamma,
                            r.rho_product,
                            r.lambda_product,
                            r.curvature_ratio,
                            r.gamma_ratio,
                            r.root_frequency_combo,
                        ]);
                    }
                    let mut payload = table.to_csv();
                    let fmt_opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_else(|| "-".into());
                    payload.push_str(&format!(
                        "# rho_product_limit,{},target,{}\n",
                        fmt_opt(report.rho_product_limit),
                        fmt_f64(report.rho_product_target)
                    ));
                    payload.push_str(&format!(
                        "# lambda_product_limit,{},target,{}\n",
                        fmt_opt(report.lambda_product_limit),
                        fmt_f64(report.lambda_product_target)
                    ));
                    payload.push_str(&format!(
                        "# curvature_ratio_limit,{},target,{}\n",
                        fmt_opt(report.curvature_ratio_limit),
                        fmt_f64(report.curvature_ratio_target)
                    ));
                    payload.push_str(&format!(
                        "# gamma_ratio_limit,{},target,{}\n",
                        fmt_opt(report.gamma_ratio_limit),
                        fmt_f64(report.gamma_ratio_target)
                    ));
                    payload.push_str(&format!(
                        "# xi_limit,{},target,{}\n",
                        fmt_opt(report.xi_limit),
                        fmt_f64(report.xi_target)
                    ));
                    emit(output.out.as_ref(), "asymptotics", output.format, &payload)
                }
            }
        }
        Command::Periodic {
            kind,
            catalog,
            tau_list,
            tilde_tau_list,
            emit_spec,
            solution,
            output,
        } => {
            let mut sols = Vec::new();
            if catalog {
                sols.push(presets::periodic_preset("minus")?);
                sols.push(presets::periodic_preset("plus")?);
                for t in tau_list.split(',') {
                    let tau: f64 = t.trim().parse().context("tau list entry")?;
                    sols.push(presets::periodic_preset(&format!("varpi:{tau}"))?);
                }
                for t in tilde_tau_list.split(',') {
                    let tau: f64 = t.trim().parse().context("tilde tau list entry")?;
                    sols.push(presets::periodic_preset(&format!("varpi-tilde:{tau}"))?);
                }
            } else {
                let name = kind.ok_or_else(|| anyhow!("provide --kind or --catalog"))?;
                sols.push(presets::periodic_preset(&name)?);
            }
            if let Some(path) = emit_spec {
                if sols.len() != 1 {
                    bail!("--emit-spec needs a single --kind");
                }
                let payload = serde_json::to_string_pretty(&sols[0].spec)? + "\n";
                std::fs::write(&path, payload)
                    .with_context(|| format!("writing {}", path.display()))?;
                eprintln!("wrote {}", path.display());
                return Ok(());
            }
            if solution {
                if sols.len() != 1 {
                    bail!("--solution needs a single --kind");
                }
                let sol = &sols[0];
                let n = 2000usize;
                let full = sol.full_period();
                let mut rows = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let t = full * i as f64 / n as f64;
                    rows.push(vec![t, sol.solution.eval(t).map_err(|e| anyhow!("{e}"))?]);
                }
                let table = Table {
                    columns: vec!["t", "value"],
                    rows,
                };
                return emit(
                    output.out.as_ref(),
                    "periodic",
                    output.format,
                    &table.render(output.format),
                );
            }
            let reports = par_map(&sols, core::verify);
            let mut table = Table {
                columns: vec![
                    "kind",
                    "tau",
                    "period",
                    "sign",
                    "tau_m",
                    "residual",
                    "periodicity_defect",
                    "reintegration_error",
                    "min_value",
                ],
                rows: vec![],
            };
            let mut lines = Vec::new();
            for (sol, rep) in sols.iter().zip(reports) {
                let rep = rep?;
                let kind_code = match sol.kind {
                    core::PeriodicKind::Minus => 0.0,
                    core::PeriodicKind::Plus => 1.0,
                    core::PeriodicKind::Varpi => 2.0,
                    core::PeriodicKind::VarpiTilde => 3.0,
                };
                table.rows.push(vec![
                    kind_code,
                    sol.tau.unwrap_or(f64::NAN),
                    sol.period,
                    sol.sign as f64,
                    sol.spec.tau_m(sol.period),
                    rep.residual,
                    rep.periodicity_defect,
                    rep.reintegration_error,
                    rep.min_value.unwrap_or(f64::NAN),
                ]);
                lines.push(format!(
                    "# {} residual={} defect={}",
                    sol.spec.label,
                    fmt_f64(rep.residual),
                    fmt_f64(rep.periodicity_defect)
                ));
            }
            let mut payload = table.render(output.format);
            if output.format == Format::Csv {
                for l in lines {
                    payload.push_str(&l);
                    payload.push('\n');
                }
            }
            emit(output.out.as_ref(), "periodic", output.format, &payload)
        }
        Command::Simulate {
            spec,
            preset,
            horizon,
            step,
            mode,
            output,
        } => {
            let spec = presets::load_spec(spec.as_ref(), preset.as_deref())?;
            let opts = IntegrateOpts { step, mode };
            let x = core::integrate(&spec, horizon, opts)?;
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&x)? + "\n";
                    emit(output.out.as_ref(), "simulate", output.format, &payload)
                }
                Format::Csv => {
                    let rows = x
                        .grid
                        .iter()
                        .zip(&x.values)
                        .map(|(&t, &v)| vec![t, v])
                        .collect();
                    let table = Table {
                        columns: vec!["t", "value"],
                        rows,
                    };
                    emit(output.out.as_ref(), "simulate", output.format, &table.to_csv())
                }
            }
        }
        Command::Normalize {
            spec,
            preset,
            horizon,
            output,
        } => {
            let spec = presets::load_spec(spec.as_ref(), preset.as_deref())?;
            let (normalized, map) = core::time_rescale(&spec, horizon)?;
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&serde_json::json!({
                        "normalized": normalized,
                        "clock": map.f,
                    }))? + "\n";
                    emit(output.out.as_ref(), "normalize", output.format, &payload)
                }
                Format::Csv => {
                    let mut rows = Vec::new();
                    for t in map.f.breakpoints() {
                        rows.push(vec![t, map.forward(t)?]);
                    }
                    let table = Table {
                        columns: vec!["t", "f"],
                        rows,
                    };
                    emit(output.out.as_ref(), "normalize", output.format, &table.to_csv())
                }
            }
        }
        Command::Semicycles {
            spec,
            preset,
            horizon,
            output,
        } => {
            let spec = presets::load_spec(spec.as_ref(), preset.as_deref())?;
            let x = core::integrate(&spec, horizon, IntegrateOpts::default())?;
            let tau_m = spec.tau_m(horizon);
            let rep = core::semicycles(&x, 0.0, horizon, tau_m)?;
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&rep)? + "\n";
                    emit(output.out.as_ref(), "semicycles", output.format, &payload)
                }
                Format::Csv => {
                    let mut table = Table {
                        columns: vec!["index", "zero", "length", "extremum_t", "extremum_value"],
                        rows: vec![],
                    };
                    for (i, len) in rep.lengths.iter().enumerate() {
                        let (et, ev) = rep.extrema[i];
                        table.rows.push(vec![i as f64, rep.zeros[i], *len, et, ev]);
                    }
                    let mut payload = table.to_csv();
                    payload.push_str(&format!("# alpha,{}\n", fmt_f64(rep.alpha)));
                    emit(output.out.as_ref(), "semicycles", output.format, &payload)
                }
            }
        }
        Command::Classify {
            spec,
            preset,
            horizon,
            output,
        } => {
            let spec = presets::load_spec(spec.as_ref(), preset.as_deref())?;
            let x = core::integrate(&spec, horizon, IntegrateOpts::default())?;
            let tau_m = spec.tau_m(horizon);
            let class = core::classify(&x, &spec, 0.0, horizon)?;
            let rep = core::semicycles(&x, 0.0, horizon, tau_m)?;
            let lambda = core::lambda(tau_m)?;
            let class_code = match class {
                core::BoundednessClass::TendsToZero => 0.0,
                core::BoundednessClass::Bounded => 1.0,
                core::BoundednessClass::AboveThreshold => 2.0,
            };
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&serde_json::json!({
                        "alpha": rep.alpha,
                        "lambda": lambda,
                        "tau_m": tau_m,
                        "class": class,
                    }))? + "\n";
                    emit(output.out.as_ref(), "classify", output.format, &payload)
                }
                Format::Csv => {
                    let table = Table {
                        columns: vec!["alpha", "lambda", "tau_m", "class"],
                        rows: vec![vec![rep.alpha, lambda, tau_m, class_code]],
                    };
                    emit(output.out.as_ref(), "classify", output.format, &table.to_csv())
                }
            }
        }
        Command::Converge {
            tau,
            seed,
            periods,
            output,
        } => {
            let lambda = core::lambda(tau)?;
            let horizon = periods * lambda;
            let spec = core::perturbed_threshold_spec(tau, seed, horizon)?;
            let rep = core::convergence_probe(&spec, tau, horizon)?;
            emit_convergence(&rep, "converge", &output)
        }
        Command::Counterexample {
            kind,
            param,
            output,
        } => {
            let kind = match kind.as_str() {
                "slow-phase" => core::CounterexampleKind::SlowPhase,
                "tau2" => core::CounterexampleKind::Tau2,
                other => bail!("unknown kind '{other}' (slow-phase|tau2)"),
            };
            let (_, _, rep) = core::counterexample(kind, param)?;
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&rep)? + "\n";
                    emit(output.out.as_ref(), "counterexample", output.format, &payload)
                }
                Format::Csv => {
                    let mut table = Table {
                        columns: vec!["block", "amplitude", "phase_drift"],
                        rows: vec![],
                    };
                    for (i, (a, d)) in rep.amplitudes.iter().zip(&rep.phase_drifts).enumerate() {
                        table.rows.push(vec![i as f64 + 1.0, *a, *d]);
                    }
                    let mut payload = table.to_csv();
                    payload.push_str(&format!(
                        "# amplitude_limit_estimate,{}\n# witness_distance,{}\n",
                        fmt_f64(rep.amplitude_limit_estimate),
                        fmt_f64(rep.witness_distance)
                    ));
                    emit(output.out.as_ref(), "counterexample", output.format, &payload)
                }
            }
        }
        Command::Conjecture {
            history,
            periods,
            output,
        } => {
            let plus = core::build(core::PeriodicKind::Plus, None)?;
            let horizon = periods * plus.period;
            let base = plus
                .solution
                .exact
                .as_ref()
                .ok_or_else(|| anyhow!("profile lacks exact form"))?
                .clone();
            let hist = match history.as_str() {
                "exact" => base,
                other => {
                    if let Some(c) = other.strip_prefix("scaled:") {
                        let c: f64 = c.parse().context("scale factor")?;
                        base.scaled(c)
                    } else if let Some(size) = other.strip_prefix("bump:") {
                        let size: f64 = size.parse().context("bump size")?;
                        bumped_history(&plus, size)?
                    } else {
                        bail!("unknown history '{other}' (exact|scaled:<c>|bump:<size>)")
                    }
                }
            };
            let rep = core::conjecture_probe(&hist, horizon)?;
            emit_convergence(&rep, "conjecture", &output)
        }
        Command::DecayBound { tau, delta, output } => {
            let probe = core::decay_bound(tau, delta)?;
            match output.format {
                Format::Json => {
                    let payload = serde_json::to_string_pretty(&probe)? + "\n";
                    emit(output.out.as_ref(), "decay-bound", output.format, &payload)
                }
                Format::Csv => {
                    let rows = probe.a_values.iter().map(|&(t, a)| vec![t, a]).collect();
                    let table = Table {
                        columns: vec!["t", "a"],
                        rows,
                    };
                    let mut payload = table.to_csv();
                    payload.push_str(&format!(
                        "# exponent,{}\n# fitted_c,{}\n",
                        fmt_f64(probe.exponent),
                        fmt_f64(probe.fitted_c)
                    ));
                    emit(output.out.as_ref(), "decay-bound", output.format, &payload)
                }
            }
        }
    }
}

fn emit_convergence(rep: &core::ConvergenceReport, name: &str, output: &OutputArgs) -> Result<()> {
    match output.format {
        Format::Json => {
            let payload = serde_json::to_string_pretty(rep)? + "\n";
            emit(output.out.as_ref(), name, output.format, &payload)
        }
        Format::Csv => {
            let rows = rep
                .residual_by_window
                .iter()
                .enumerate()
                .map(|(i, r)| vec![i as f64, *r])
                .collect();
            let table = Table {
                columns: vec!["window", "residual"],
                rows,
            };
            let mut payload = table.to_csv();
            payload.push_str(&format!(
                "# amplitude,{}\n# phase,{}\n# verdict,{:?}\n# exploratory,{}\n",
                fmt_f64(rep.amplitude),
                fmt_f64(rep.phase),
                rep.verdict,
                rep.exploratory
            ));
            emit(output.out.as_ref(), name, output.format, &payload)
        }
    }
}

/// The positive-feedback profile history with a small smooth bump on the
/// middle third of the initial delay interval.
fn bumped_history(plus: &core::PeriodicSolution, size: f64) -> Result<core::PiecewiseFn> {
    use core::Segment;
    let lag0 = 2.0_f64.ln() + 13.0 / 8.0;
    let base = plus
        .solution
        .exact
        .as_ref()
        .ok_or_else(|| anyhow!("profile lacks exact form"))?;
    let mut segs: Vec<Segment> = Vec::new();
    let n = 48usize;
    let (a, b) = (-lag0, 0.0);
    for i in 0..n {
        let lo = a + (b - a) * i as f64 / n as f64;
        let hi = a + (b - a) * (i + 1) as f64 / n as f64;
        let mid = 0.5 * (lo + hi);
        let v = base.eval(mid).map_err(|e| anyhow!("{e}"))?;
        let bump_lo = a + (b - a) / 3.0;
        let bump_hi = a + 2.0 * (b - a) / 3.0;
        let bump = if mid > bump_lo && mid < bump_hi {
            let u = (mid - bump_lo) / (bump_hi - bump_lo);
            size * 4.0 * u * (1.0 - u)
        } else {
            0.0
        };
        segs.push(Segment::constant(lo, hi, v + bump));
    }
    core::PiecewiseFn::new(segs).map_err(|e| anyhow!("{e}"))
}
