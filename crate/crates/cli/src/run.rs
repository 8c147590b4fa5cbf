//! Dispatch from parsed arguments to the experiment code, with uniform
//! error handling: precondition violations exit 2 with a message naming
//! the precondition, runtime failures exit 1 after writing a diagnostic
//! payload to the requested output path.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wcslab_core::dynamics::{
    random_exact_poly, run_orbit, span_gram, spectral_radius_probe, expansivity_check,
    GramReport, OrbitOptions, OrbitStop, PeriodicPointSpec, DEFAULT_MAX_LEN,
};
use wcslab_core::error::Error as CoreError;
use wcslab_core::families::{make_f, make_g, make_h, make_kappa};
use wcslab_core::hardy::CoeffVector;
use wcslab_core::rh::{
    dist_to_span_dense, m_family_diagnostics, orbit_residual_profile, rh_distance_sweep,
    spanning_family,
};
use wcslab_core::semigroup::{apply_w_capped, apply_w_star, OperatorKind, OperatorSpec};

use crate::args::*;
use crate::io;
use crate::report::{envelope, run_self_checks, RunConfig};
use crate::CliError;

fn error_kind(e: &CoreError) -> &'static str {
    match e {
        CoreError::InvalidParam(_) => "invalid_param",
        CoreError::EmptyCombination => "empty_combination",
        CoreError::MismatchedRanges(_) => "mismatched_ranges",
        CoreError::IndexOverflow(_) => "index_overflow",
        CoreError::DegreeBudget { .. } => "degree_budget",
        CoreError::TrustedRangeExhausted(_) => "trusted_range_exhausted",
        CoreError::IllConditioned { .. } => "ill_conditioned",
        CoreError::MissingSnapshots => "missing_snapshots",
        CoreError::UnknownTail(_) => "unknown_tail",
    }
}

/// Writes the report envelope for a successful run, or a diagnostic
/// envelope (then exit 1) for a runtime failure. Validation failures write
/// nothing and exit 2.
fn finish(
    config: &RunConfig,
    out: &Path,
    results: Result<Value, CoreError>,
) -> Result<(), CliError> {
    let checks = run_self_checks(config.seed);
    match results {
        Ok(r) => io::write_json(out, &envelope(config, &checks, r)),
        Err(e) if e.is_usage() => Err(CliError::Validation(e.to_string())),
        Err(e) => {
            let payload = json!({
                "error": {
                    "kind": error_kind(&e),
                    "message": e.to_string(),
                }
            });
            io::write_json(out, &envelope(config, &checks, payload))?;
            Err(CliError::Runtime(e.to_string()))
        }
    }
}

fn core_usage(e: CoreError) -> CliError {
    if e.is_usage() {
        CliError::Validation(e.to_string())
    } else {
        CliError::Runtime(e.to_string())
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Apply(a) => cmd_apply(a),
        Command::Orbit(a) => cmd_orbit(a),
        Command::Period(a) => cmd_period(a),
        Command::Gram(a) => cmd_gram(a),
        Command::Radius(a) => cmd_radius(a),
        Command::Expansive(a) => cmd_expansive(a),
        Command::RhSweep(a) => cmd_rh_sweep(a),
        Command::MDiag(a) => cmd_m_diag(a),
        Command::OrbitResidual(a) => cmd_orbit_residual(a),
    }
}

fn require_k(k: Option<u32>, family: &str) -> Result<u32, CliError> {
    k.ok_or_else(|| {
        CliError::Validation(format!("family {family} requires --k (the family index)"))
    })
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    let vector = match a.family {
        Family::F => make_f(require_k(a.k, "f")?, a.degree).map_err(core_usage)?,
        Family::G => make_g(require_k(a.k, "g")?, a.degree).map_err(core_usage)?,
        Family::H => make_h(require_k(a.k, "h")?, a.degree).map_err(core_usage)?,
        Family::Kappa => {
            let s_re = a.s_re.ok_or_else(|| {
                CliError::Validation("family kappa requires --s-re (and optionally --s-im)".into())
            })?;
            make_kappa(Complex64::new(s_re, a.s_im), a.degree).map_err(core_usage)?
        }
        Family::One => CoeffVector::one(a.degree),
        Family::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            random_exact_poly(&mut rng, a.degree)
        }
    };
    io::save_vector(&io::resolve_out(&a.out), &vector)
}

fn cmd_apply(a: ApplyArgs) -> Result<(), CliError> {
    let input = io::load_vector(&a.input)?;
    let output = match a.op {
        OpName::W => {
            let cap = a.max_degree.unwrap_or(DEFAULT_MAX_LEN - 1);
            apply_w_capped(a.n, &input, cap).map_err(core_usage)?.vector
        }
        OpName::Wstar => {
            let full = apply_w_star(a.n, &input).map_err(core_usage)?;
            match a.max_degree {
                Some(d) => full.truncated(d),
                None => full,
            }
        }
    };
    io::save_vector(&io::resolve_out(&a.out), &output)
}

fn op_spec(op: OpName, n: usize) -> Result<OperatorSpec, CliError> {
    let kind = match op {
        OpName::W => OperatorKind::Forward,
        OpName::Wstar => OperatorKind::Adjoint,
    };
    OperatorSpec::new(kind, n).map_err(core_usage)
}

fn op_name(op: OpName) -> &'static str {
    match op {
        OpName::W => "w",
        OpName::Wstar => "wstar",
    }
}

fn cmd_orbit(a: OrbitArgs) -> Result<(), CliError> {
    let config = RunConfig::new("orbit", a.seed)
        .param("op", op_name(a.op))
        .param("n", a.n)
        .param("in", a.input.display())
        .param("steps", a.steps)
        .param_opt("snapshot_stride", a.snapshot_stride)
        .param_opt("max_degree", a.max_degree)
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let start = io::load_vector(&a.input)?;
    let spec = op_spec(a.op, a.n)?;
    let opts = OrbitOptions {
        snapshot_stride: a.snapshot_stride,
        max_len: a.max_degree.map(|d| d + 1).unwrap_or(DEFAULT_MAX_LEN),
    };
    let results = run_orbit(&spec, &start, a.steps, &opts).map(|record| {
        let stopped = match record.stopped {
            None => Value::Null,
            Some(OrbitStop::TrustedRangeExhausted { at_step }) => json!({
                "reason": "trusted_range_exhausted",
                "at_step": at_step,
            }),
            Some(OrbitStop::DegreeBudget { at_step }) => json!({
                "reason": "degree_budget",
                "at_step": at_step,
            }),
        };
        json!({
            "operator": {"op": op_name(a.op), "n": a.n},
            "requested_steps": a.steps,
            "completed_steps": record.completed_steps(),
            "stopped": stopped,
            "norms": record
                .norms
                .iter()
                .enumerate()
                .map(|(m, n)| crate::report::norm_entry(m, n.value(), n.radius()))
                .collect::<Vec<_>>(),
            "snapshots_recorded": record.snapshots.len(),
        })
    });
    finish(&config, &out, results)
}

fn cmd_period(a: PeriodArgs) -> Result<(), CliError> {
    let config = RunConfig::new("period", a.seed)
        .param("n", a.n)
        .param("alpha_p", a.alpha_p)
        .param("alpha_q", a.alpha_q)
        .param("degree", a.degree)
        .param("tol", a.tol)
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let spec = PeriodicPointSpec::new(a.n, a.alpha_p, a.alpha_q).map_err(core_usage)?;
    let results = wcslab_core::dynamics::detect_period(&spec, a.degree, a.tol).map(|r| {
        json!({
            "n": r.n,
            "alpha": {"p": spec.p, "q": spec.q},
            "t": spec.t,
            "s": {"re": spec.s.re, "im": spec.s.im},
            "predicted_period": r.predicted_period,
            "found": r.found,
            "residuals": r.residuals,
            "degree": r.degree,
            "tol": r.tol,
        })
    });
    finish(&config, &out, results)
}

fn kappa_grid(s_re: f64, t_min: f64, t_max: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|i| {
            let t = if count <= 1 {
                t_min
            } else {
                t_min + i as f64 * (t_max - t_min) / (count - 1) as f64
            };
            Complex64::new(s_re, t)
        })
        .collect()
}

fn gram_results(report: &GramReport) -> Value {
    let k = report.labels.len();
    let re: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| report.gram[(i, j)].re).collect())
        .collect();
    let im: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| report.gram[(i, j)].im).collect())
        .collect();
    json!({
        "labels": report.labels,
        "gram": {"re": re, "im": im},
        "eigenvalues": report.eigenvalues,
        "min_eigenvalue": report.min_eigenvalue,
        "max_eigenvalue": report.max_eigenvalue,
        "effective_rank": report.effective_rank,
        "tau": report.tau,
        "condition_estimate": io::json_num(report.condition_estimate),
    })
}

fn cmd_gram(a: GramArgs) -> Result<(), CliError> {
    let config = RunConfig::new("gram", a.seed)
        .param("family", format!("{:?}", a.family).to_lowercase())
        .param("count", a.count)
        .param("degree", a.degree)
        .param("s_re", a.s_re)
        .param("t_min", a.t_min)
        .param("t_max", a.t_max)
        .param_opt("tau", a.tau)
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    if a.count < 1 {
        return Err(CliError::Validation("--count must be at least 1".into()));
    }
    let built: Result<(Vec<CoeffVector>, Vec<String>), CoreError> = (|| {
        let mut vectors = Vec::with_capacity(a.count);
        let mut labels = Vec::with_capacity(a.count);
        match a.family {
            Family::F => {
                for k in 1..=a.count as u32 {
                    vectors.push(make_f(k, a.degree)?);
                    labels.push(format!("f{k}"));
                }
            }
            Family::G => {
                for k in 1..=a.count as u32 {
                    vectors.push(make_g(k, a.degree)?);
                    labels.push(format!("g{k}"));
                }
            }
            Family::H => {
                for k in 2..=(a.count + 1) as u32 {
                    vectors.push(make_h(k, a.degree)?);
                    labels.push(format!("h{k}"));
                }
            }
            Family::Kappa => {
                for s in kappa_grid(a.s_re, a.t_min, a.t_max, a.count) {
                    vectors.push(make_kappa(s, a.degree)?);
                    labels.push(format!("kappa({}+{}i)", s.re, s.im));
                }
            }
            Family::One | Family::Random => {
                return Err(CoreError::InvalidParam(
                    "gram families are f, g, h, kappa".into(),
                ));
            }
        }
        Ok((vectors, labels))
    })();
    let results = built.and_then(|(vectors, labels)| {
        let report = span_gram(&vectors, a.tau)?.with_labels(labels)?;
        Ok(gram_results(&report))
    });
    finish(&config, &out, results)
}

fn cmd_radius(a: RadiusArgs) -> Result<(), CliError> {
    let config = RunConfig::new("radius", a.seed)
        .param("n", a.n)
        .param("m_max", a.m_max)
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let results = spectral_radius_probe(a.n, a.m_max).map(|values| {
        let target = (a.n as f64).sqrt();
        let max_abs_error = values
            .iter()
            .map(|v| (v - target).abs())
            .fold(0.0, f64::max);
        json!({
            "n": a.n,
            "target": target,
            "values": values,
            "max_abs_error": max_abs_error,
        })
    });
    finish(&config, &out, results)
}

fn cmd_expansive(a: ExpansiveArgs) -> Result<(), CliError> {
    let config = RunConfig::new("expansive", a.seed)
        .param("k", a.k)
        .param("trials", a.trials)
        .param("degree", a.degree)
        .param("m_max", a.m_max)
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let results = expansivity_check(a.k, a.trials, a.degree, a.m_max, a.seed).map(|r| {
        json!({
            "k": r.k,
            "trials": r.trials,
            "degree": r.degree,
            "m_max": r.m_max,
            "max_rel_err": r.max_rel_err,
            "per_m_rel_err": r.per_m_rel_err,
            "witness_measured": r.witness_measured,
            "witness_formula": r.witness_formula,
        })
    });
    finish(&config, &out, results)
}

/// `--format both` writes BASE.csv and BASE.json; a single format writes
/// exactly the given path.
fn format_paths(out: &Path, format: OutputFormat) -> (Option<PathBuf>, Option<PathBuf>) {
    match format {
        OutputFormat::Csv => (Some(out.to_path_buf()), None),
        OutputFormat::Json => (None, Some(out.to_path_buf())),
        OutputFormat::Both => (
            Some(out.with_extension("csv")),
            Some(out.with_extension("json")),
        ),
    }
}

fn cmd_rh_sweep(a: RhSweepArgs) -> Result<(), CliError> {
    let config = RunConfig::new("rh-sweep", a.seed)
        .param("kmax", a.kmax)
        .param("degree", a.degree)
        .param("ridge", a.ridge)
        .param("skip_dual_check", a.skip_dual_check)
        .param("format", format!("{:?}", a.format).to_lowercase())
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let (csv_path, json_path) = format_paths(&out, a.format);
    let computed = rh_distance_sweep(a.kmax, a.degree, a.ridge).and_then(|sweep| {
        let dual = if a.skip_dual_check {
            json!({"performed": false})
        } else {
            let basis = spanning_family(a.kmax, a.degree)?;
            let dense = dist_to_span_dense(&CoeffVector::one(a.degree), &basis)?;
            let normal = *sweep.distances.last().expect("nonempty sweep");
            let gap = (normal - dense).abs();
            json!({
                "performed": true,
                "k": a.kmax,
                "normal_distance": normal,
                "dense_distance": dense,
                "gap": gap,
                "agrees_to_1e8": gap <= 1e-8,
            })
        };
        Ok((sweep, dual))
    });
    match computed {
        Ok((sweep, dual)) => {
            if let Some(path) = &csv_path {
                let rows: Vec<Vec<String>> = sweep
                    .k_values
                    .iter()
                    .zip(sweep.distances.iter().zip(&sweep.condition_numbers))
                    .map(|(k, (d, c))| {
                        vec![
                            k.to_string(),
                            io::fmt_float(*d),
                            io::fmt_float(*c),
                            a.degree.to_string(),
                            io::fmt_float(a.ridge),
                        ]
                    })
                    .collect();
                io::write_csv(path, &["K", "distance", "condition", "D", "ridge"], &rows)?;
            }
            if let Some(path) = &json_path {
                let checks = run_self_checks(a.seed);
                let results = json!({
                    "k_values": sweep.k_values,
                    "degree": sweep.degree,
                    "ridge": sweep.ridge,
                    "distances": sweep.distances,
                    "condition_numbers": sweep.condition_numbers,
                    "monotone": sweep.monotone,
                    "dual_check": dual,
                });
                io::write_json(path, &envelope(&config, &checks, results))?;
            }
            Ok(())
        }
        Err(e) => {
            // Diagnostic payload goes to the JSON path when one exists,
            // otherwise alongside the CSV.
            let diag = json_path.unwrap_or_else(|| out.with_extension("json"));
            finish(&config, &diag, Err(e))
        }
    }
}

fn cmd_m_diag(a: MDiagArgs) -> Result<(), CliError> {
    let config = RunConfig::new("m-diag", a.seed)
        .param("kmax", a.kmax)
        .param("degree", a.degree)
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let results = m_family_diagnostics(a.kmax, a.degree).map(|diag| {
        let mut value = gram_results(&diag.gram);
        let obj = value.as_object_mut().expect("gram results object");
        obj.insert("k".into(), json!(diag.k));
        obj.insert("degree".into(), json!(diag.degree));
        obj.insert("distance_to_one".into(), json!(diag.distance_to_one));
        obj.insert("note".into(), json!(diag.note));
        value
    });
    finish(&config, &out, results)
}

fn cmd_orbit_residual(a: OrbitResidualArgs) -> Result<(), CliError> {
    let config = RunConfig::new("orbit-residual", a.seed)
        .param("n", a.n)
        .param("steps", a.steps)
        .param("kmax", a.kmax)
        .param("degree", a.degree)
        .param_opt("in", a.input.as_ref().map(|p| p.display()))
        .param("format", format!("{:?}", a.format).to_lowercase())
        .param("out", a.out.display());
    let out = io::resolve_out(&a.out);
    let (csv_path, json_path) = format_paths(&out, a.format);
    let start = match &a.input {
        Some(path) => io::load_vector(path)?,
        None => CoeffVector::one(0),
    };
    match orbit_residual_profile(a.n, &start, a.steps, a.kmax, a.degree) {
        Ok(profile) => {
            if let Some(path) = &csv_path {
                let rows: Vec<Vec<String>> = profile
                    .residuals
                    .iter()
                    .enumerate()
                    .map(|(m, r)| {
                        vec![
                            m.to_string(),
                            io::fmt_float(*r),
                            a.n.to_string(),
                            a.kmax.to_string(),
                            a.degree.to_string(),
                        ]
                    })
                    .collect();
                io::write_csv(path, &["m", "residual", "n", "K", "D"], &rows)?;
            }
            if let Some(path) = &json_path {
                let checks = run_self_checks(a.seed);
                let results = json!({
                    "n": profile.n,
                    "steps": profile.steps,
                    "k": profile.k,
                    "degree": profile.degree,
                    "residuals": profile.residuals,
                    "truncated_at": profile.truncated_at,
                });
                io::write_json(path, &envelope(&config, &checks, results))?;
            }
            Ok(())
        }
        Err(e) => {
            let diag = json_path.unwrap_or_else(|| out.with_extension("json"));
            finish(&config, &diag, Err(e))
        }
    }
}
