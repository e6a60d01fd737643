//! The four subcommands. Each returns an [`Outcome`] on success; checks only
//! fail the run when `--check` is set.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use sdq_core::kms::{random_hermitian, random_matrix, StateFamily, TensorPair};
use sdq_core::verify::Observable;
use sdq_core::{
    cw_defect_sweep, gibbs_state, hamiltonian_norm_limit, parse_poly, product_kms_residual, quantize_tensor,
    resolvent_error, spectral_norm, sweep, ComplexMatrix, GibbsState, ModelSpec, SitePolynomial, SweepReport,
    MAX_DIM,
};

use crate::config::{
    FamilyName, Format, KmsConfig, KmsMode, ModelName, QuantizeConfig, ResolventConfig, SweepConfig, SweepKind,
};
use crate::{json_text, CliError, Flags, Outcome, RunOptions};

fn poly(text: &str, sites: usize) -> Result<SitePolynomial, CliError> {
    parse_poly(text, sites).map_err(|e| CliError::Input(format!("polynomial parse error in {text:?}: {e}")))
}

fn required<'a, T>(value: &'a Option<T>, key: &str) -> Result<&'a T, CliError> {
    value.as_ref().ok_or_else(|| CliError::Input(format!("invalid config: missing key `{key}`")))
}

fn config_echo<T: serde::Serialize>(config: &T) -> Value {
    serde_json::to_value(config).expect("config serializes")
}

pub fn cmd_quantize(config: &QuantizeConfig, flags: &Flags) -> Result<Outcome, CliError> {
    let opts = RunOptions::resolve(flags, config.out.as_ref(), config.format);
    if config.sites == 0 {
        return Err(CliError::Input("sites must be positive".into()));
    }
    let p = poly(&config.poly, config.sites)?;
    let q = quantize_tensor(&p, config.two_j)?;
    let norm = spectral_norm(&q);
    match opts.format {
        Format::Json => {
            let data: Vec<[f64; 2]> = q.data().iter().map(|c| [c.re, c.im]).collect();
            let report = json!({
                "command": "quantize",
                "config": config_echo(config),
                "matrix": { "rows": q.rows(), "cols": q.cols(), "data": data },
                "spectral_norm": norm,
            });
            opts.emit(&json_text(&report))?;
        }
        Format::Csv => {
            let mut csv = String::from("row,col,re,im\n");
            for r in 0..q.rows() {
                for c in 0..q.cols() {
                    let z = q[(r, c)];
                    csv.push_str(&format!("{r},{c},{:?},{:?}\n", z.re, z.im));
                }
            }
            opts.emit(&csv)?;
            opts.emit_sidecar("meta.json", &json_text(&json!({ "spectral_norm": norm })))?;
        }
    }
    Ok(Outcome::Pass)
}

/// Column fitted when the config does not name one.
fn default_fit_column(kind: SweepKind) -> Option<&'static str> {
    match kind {
        SweepKind::Dgr => Some("dgr_defect"),
        SweepKind::Product => Some("product_defect"),
        SweepKind::NormGap | SweepKind::NormLimit => Some("gap"),
        SweepKind::CwDefect => Some("cw_defect"),
        SweepKind::ClassicalLimit => None,
    }
}

fn build_sweep(config: &SweepConfig, values: &[u32]) -> Result<SweepReport, CliError> {
    let sites = config.sites.unwrap_or(1);
    let report = match config.observable {
        SweepKind::Dgr | SweepKind::Product => {
            let f = poly(required(&config.f, "f")?, sites)?;
            let g = poly(required(&config.g, "g")?, sites)?;
            let obs = if config.observable == SweepKind::Dgr {
                Observable::Dgr { f, g }
            } else {
                Observable::Product { f, g }
            };
            sweep(&obs, values)?
        }
        SweepKind::NormGap => {
            let f = poly(required(&config.f, "f")?, sites)?;
            sweep(&Observable::NormGap { f }, values)?
        }
        SweepKind::CwDefect => cw_defect_sweep(config.b.unwrap_or(0.0), values)?,
        SweepKind::NormLimit => {
            let b = config.b.unwrap_or(0.0);
            let model = match required(&config.model, "model")? {
                ModelName::Ising => ModelSpec::ising(*required(&config.d, "d")?, b)?,
                ModelName::Heisenberg => {
                    if config.b.is_some() {
                        return Err(CliError::Input("the heisenberg model takes no field `b`".into()));
                    }
                    ModelSpec::heisenberg(*required(&config.d, "d")?)?
                }
                // Curie–Weiss rows run over `d`; the model's own `d` is unused.
                ModelName::CurieWeiss => ModelSpec::curie_weiss(config.d.unwrap_or(values[0].max(1) as usize), b)?,
            };
            hamiltonian_norm_limit(&model, values)?
        }
        SweepKind::ClassicalLimit => {
            let f = poly(required(&config.f, "f")?, 1)?;
            let family = match required(&config.family, "family")? {
                FamilyName::Coherent => {
                    StateFamily::Coherent { theta: *required(&config.theta, "theta")?, phi: config.phi.unwrap_or(0.0) }
                }
                FamilyName::Gibbs => StateFamily::Gibbs {
                    symbol: poly(required(&config.symbol, "symbol")?, 1)?,
                    beta: *required(&config.beta, "beta")?,
                },
            };
            sdq_core::kms::classical_limit_sweep(&family, &f, values)?
        }
    };
    Ok(report)
}

pub fn cmd_sweep(config: &SweepConfig, flags: &Flags) -> Result<Outcome, CliError> {
    let opts = RunOptions::resolve(flags, config.out.as_ref(), config.format);
    let values = config.values()?;
    let mut report = build_sweep(config, &values)?;
    match &config.fit {
        Some(column) => {
            report.fit_column(column)?;
        }
        None => {
            // Best effort: short or non-positive columns are left unfitted.
            if let Some(column) = default_fit_column(config.observable) {
                let _ = report.fit_column(column);
            }
        }
    }
    let fit_value = serde_json::to_value(report.fit()).expect("fit serializes");
    match opts.format {
        Format::Csv => {
            opts.emit(&report.to_csv())?;
            opts.emit_sidecar("fit.json", &json_text(&json!({ "fit": fit_value })))?;
        }
        Format::Json => {
            let out = json!({
                "command": "sweep",
                "config": config_echo(config),
                "parameter": report.parameter_name(),
                "columns": report.columns(),
                "rows": report.rows(),
                "fit": fit_value,
            });
            opts.emit(&json_text(&out))?;
        }
    }
    if !opts.check {
        return Ok(Outcome::Pass);
    }
    let Some(expect) = config.fit_expect else {
        return Ok(Outcome::Pass);
    };
    let tolerance = config.fit_tolerance.unwrap_or(0.05);
    Ok(match report.fit() {
        Some(fit) if (fit.exponent - expect).abs() <= tolerance => Outcome::Pass,
        Some(fit) => Outcome::CheckFailed(format!(
            "fitted exponent {} of {} is outside {expect} ± {tolerance}",
            fit.exponent, fit.column
        )),
        None => Outcome::CheckFailed("no rate fit available to compare with fit_expect".into()),
    })
}

fn check_kms_config(config: &KmsConfig) -> Result<(), CliError> {
    if !(config.beta > 0.0 && config.beta.is_finite()) {
        return Err(CliError::Input(format!("beta must be positive and finite, got {}", config.beta)));
    }
    let want = if config.mode == KmsMode::Product { 2 } else { 1 };
    if config.dims.len() != want {
        return Err(CliError::Input(format!("mode {:?} needs {want} entries in `dims`", config.mode)));
    }
    if config.dims.contains(&0) {
        return Err(CliError::Input("dimensions must be positive".into()));
    }
    let total: usize = config.dims.iter().product();
    if total > MAX_DIM {
        return Err(CliError::Cap(format!("dimension {total} exceeds the cap of {MAX_DIM}")));
    }
    if config.samples == 0 || config.times.is_empty() {
        return Err(CliError::Input("samples and times must be nonempty".into()));
    }
    if config.times.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Input("times must be finite".into()));
    }
    Ok(())
}

fn max_single_residual(state: &GibbsState, config: &KmsConfig, rng: &mut ChaCha8Rng) -> Result<f64, CliError> {
    let n = state.dim();
    let mut worst = 0.0_f64;
    for _ in 0..config.samples {
        let a = random_matrix(rng, n);
        let b = random_matrix(rng, n);
        for &t in &config.times {
            worst = worst.max(state.kms_residual(&a, &b, t)?);
        }
    }
    Ok(worst)
}

pub fn cmd_kms(config: &KmsConfig, flags: &Flags) -> Result<Outcome, CliError> {
    check_kms_config(config)?;
    let opts = RunOptions::resolve(flags, config.out.as_ref(), config.format);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut residuals: Vec<(&str, f64)> = Vec::new();
    match config.mode {
        KmsMode::Gibbs => {
            let h = random_hermitian(&mut rng, config.dims[0]);
            let state = gibbs_state(&h, config.beta)?;
            residuals.push(("max_kms_residual", max_single_residual(&state, config, &mut rng)?));
        }
        KmsMode::Mixed => {
            let n = config.dims[0];
            let h = random_hermitian(&mut rng, n);
            let rho = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
            let state = GibbsState::from_density(&h, config.beta, rho)?;
            residuals.push(("max_kms_residual", max_single_residual(&state, config, &mut rng)?));
        }
        KmsMode::Product => {
            let (na, nb) = (config.dims[0], config.dims[1]);
            let sa = gibbs_state(&random_hermitian(&mut rng, na), config.beta)?;
            let sb = gibbs_state(&random_hermitian(&mut rng, nb), config.beta)?;
            let pair = |rng: &mut ChaCha8Rng| TensorPair { a: random_matrix(rng, na), b: random_matrix(rng, nb) };
            let samples: Vec<(TensorPair, TensorPair)> =
                (0..config.samples).map(|_| (pair(&mut rng), pair(&mut rng))).collect();
            let r = product_kms_residual(&sa, &sb, &samples, &config.times)?;
            residuals.push(("max_kms_residual", r.max_residual));
            residuals.push(("max_factorization_error", r.max_factorization_error));
        }
    }
    match opts.format {
        Format::Csv => {
            let mut csv = String::from("quantity,value\n");
            for (name, v) in &residuals {
                csv.push_str(&format!("{name},{v:?}\n"));
            }
            opts.emit(&csv)?;
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                residuals.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            let out = json!({ "command": "kms", "config": config_echo(config), "residuals": map });
            opts.emit(&json_text(&out))?;
        }
    }
    if !opts.check {
        return Ok(Outcome::Pass);
    }
    for (name, v) in &residuals {
        let tol = if *name == "max_factorization_error" { config.factorization_tolerance } else { config.tolerance };
        if !(*v <= tol) {
            return Ok(Outcome::CheckFailed(format!("{name} = {v:e} exceeds {tol:e}")));
        }
    }
    Ok(Outcome::Pass)
}

fn hamiltonian_pair(config: &ResolventConfig) -> Result<(ComplexMatrix, ComplexMatrix), CliError> {
    let sources = [
        config.h1_diag.is_some() || config.h2_diag.is_some(),
        config.h1.is_some() || config.h2.is_some(),
        config.random_dims.is_some(),
    ];
    if sources.iter().filter(|s| **s).count() != 1 {
        return Err(CliError::Input(
            "give exactly one of h1_diag/h2_diag, h1/h2 or random_dims".into(),
        ));
    }
    if let Some([n1, n2]) = config.random_dims {
        if n1 == 0 || n2 == 0 {
            return Err(CliError::Input("dimensions must be positive".into()));
        }
        if n1.saturating_mul(n2) > MAX_DIM {
            return Err(CliError::Cap(format!("dimension {} exceeds the cap of {MAX_DIM}", n1.saturating_mul(n2))));
        }
        let seed = *required(&config.seed, "seed")?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h1 = random_hermitian(&mut rng, n1);
        let h2 = random_hermitian(&mut rng, n2);
        return Ok((h1, h2));
    }
    let (h1, h2) = if sources[0] {
        let d1 = required(&config.h1_diag, "h1_diag")?;
        let d2 = required(&config.h2_diag, "h2_diag")?;
        if d1.is_empty() || d2.is_empty() {
            return Err(CliError::Input("diagonals must be nonempty".into()));
        }
        (ComplexMatrix::from_diag(d1), ComplexMatrix::from_diag(d2))
    } else {
        let h1 = ComplexMatrix::from_real_rows(required(&config.h1, "h1")?)?;
        let h2 = ComplexMatrix::from_real_rows(required(&config.h2, "h2")?)?;
        (h1, h2)
    };
    if h1.rows() * h2.rows() > MAX_DIM {
        return Err(CliError::Cap(format!("dimension {} exceeds the cap of {MAX_DIM}", h1.rows() * h2.rows())));
    }
    h1.ensure_hermitian()?;
    h2.ensure_hermitian()?;
    Ok((h1, h2))
}

pub fn cmd_resolvent(config: &ResolventConfig, flags: &Flags) -> Result<Outcome, CliError> {
    let opts = RunOptions::resolve(flags, config.out.as_ref(), config.format);
    if config.lambda == 0.0 || !config.lambda.is_finite() {
        return Err(CliError::Input(format!("lambda must be finite and nonzero, got {}", config.lambda)));
    }
    if config.nodes.is_empty() || config.nodes.contains(&0) {
        return Err(CliError::Input("nodes must be a nonempty list of positive counts".into()));
    }
    let (h1, h2) = hamiltonian_pair(config)?;
    let mut rows = Vec::with_capacity(config.nodes.len());
    for &m in &config.nodes {
        rows.push((m, resolvent_error(&h1, &h2, config.lambda, m)?));
    }
    let final_error = rows.last().map(|r| r.1).expect("nodes is nonempty");
    match opts.format {
        Format::Csv => {
            let mut csv = String::from("nodes,error\n");
            for (m, e) in &rows {
                csv.push_str(&format!("{m},{e:?}\n"));
            }
            opts.emit(&csv)?;
        }
        Format::Json => {
            let table: Vec<Value> = rows.iter().map(|(m, e)| json!({ "nodes": m, "error": e })).collect();
            let out = json!({
                "command": "resolvent",
                "config": config_echo(config),
                "rows": table,
                "final_error": final_error,
            });
            opts.emit(&json_text(&out))?;
        }
    }
    if opts.check && !(final_error <= config.tolerance) {
        return Ok(Outcome::CheckFailed(format!(
            "final error {final_error:e} at {} nodes exceeds {:e}",
            rows.last().expect("nonempty").0,
            config.tolerance
        )));
    }
    Ok(Outcome::Pass)
}
