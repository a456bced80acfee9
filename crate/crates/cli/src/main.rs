//! Command-line driver for the scaling pipeline.
//!
//! Every subcommand reads exact inputs (domain JSON, rational point strings),
//! runs the corresponding library stage, and emits one deterministic JSON
//! report to stdout (or `--output`). Human-oriented one-liners go to stderr
//! so stdout stays machine-readable.
//!
//! Exit codes: 0 success, 1 malformed input, 2 hypothesis violation
//! (analyze fail, matcher H outside the admissible class), 3 limit did not
//! converge within jmax.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pinscale_core::{
    boundary_point_of, check_q_estimate, limit_polynomial, match_top_homogeneous, normalize_at,
    parse_point, parse_rational, parse_real_poly, pipeline_type, rescaled_rho, ActiveIndex,
    CoeffEntry, Complex64, ComplexScalar, DomainSpec, Error, LimitReport, ModelClass,
    NormalFormReport, NormalizationResult, Poly, QEstimateReport, RealPoly, Result, ScalingData,
    SequenceSpec,
};

/// Sup-norm exponent for the Q-term smallness check: sup |Q^α| vs τ^0.1.
const Q_ESTIMATE_EXPONENT: f64 = 0.1;
/// Sampling ball radius and seed for the pseudoconvexity spot check.
const PSEUDOCONVEXITY_RADIUS: f64 = 0.3;
const PSEUDOCONVEXITY_SEED: u64 = 11;

#[derive(Parser)]
#[command(
    name = "pinscale",
    version,
    about = "Scaling method for rigid pseudoconvex domains of finite type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Convergence and matching tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Cap on sequence indices followed by `limit`.
    #[arg(long, global = true, default_value_t = 64)]
    jmax: u32,

    /// Trailing indices that must agree pairwise for convergence.
    #[arg(long, global = true, default_value_t = 3)]
    window: usize,

    /// Sample budget for numeric certificates (pseudoconvexity, Q bounds,
    /// subharmonicity).
    #[arg(long, global = true, default_value_t = 4096)]
    samples: usize,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the pipeline hypotheses: normal form at 0, even finite type,
    /// Levi corank ≤ 1, sampled pseudoconvexity.
    Analyze { domain: PathBuf },
    /// Coefficient normal form at a boundary point (interior points are
    /// lifted up the Re z_n axis first).
    Normalize {
        domain: PathBuf,
        /// Point as "re,im;re,im;..." with rational components.
        #[arg(long)]
        point: String,
    },
    /// Anisotropic rescaling at a point and height ε.
    Scale {
        domain: PathBuf,
        /// Point as "re,im;re,im;..." with rational components.
        #[arg(long)]
        point: String,
        /// Height ε > 0 as a rational, e.g. "1/10000" or "1e-4".
        #[arg(long)]
        epsilon: String,
    },
    /// Follow an interior sequence and report the limit model polynomial.
    Limit { domain: PathBuf, sequence: PathBuf },
    /// Decide whether the top term satisfies Q = λ·H(e^{iν}z) for some λ>0, ν.
    Match { p: PathBuf, h: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) => 2,
        Error::NoConvergence(_) => 3,
        _ => 1,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    if !(cli.tol > 0.0) {
        return Err(Error::InvalidDomain("--tol must be positive".into()));
    }
    if cli.window < 2 || cli.jmax < cli.window as u32 {
        return Err(Error::InvalidDomain(
            "--jmax ≥ --window ≥ 2 is required".into(),
        ));
    }
    if cli.samples == 0 {
        return Err(Error::InvalidDomain("--samples must be positive".into()));
    }
    match &cli.command {
        Command::Analyze { domain } => cmd_analyze(cli, domain),
        Command::Normalize { domain, point } => cmd_normalize(cli, domain, point),
        Command::Scale {
            domain,
            point,
            epsilon,
        } => cmd_scale(cli, domain, point, epsilon),
        Command::Limit { domain, sequence } => cmd_limit(cli, domain, sequence),
        Command::Match { p, h } => cmd_match(cli, p, h),
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidDomain(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(report: &T, output: &Option<PathBuf>) -> Result<()> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidDomain(format!("serialization failed: {e}")))?;
    match output {
        Some(path) => fs::write(path, json + "\n")
            .map_err(|e| Error::InvalidDomain(format!("{}: {e}", path.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

/// Coefficient entry with binary64 views and the exact value in the
/// expression grammar.
#[derive(Serialize)]
struct CoeffOut {
    j: u32,
    k: u32,
    re: f64,
    im: f64,
    exact: String,
}

#[derive(Serialize)]
struct BCoeffOut {
    alpha: usize,
    j: u32,
    k: u32,
    re: f64,
    im: f64,
    exact: String,
}

#[derive(Serialize)]
struct QBlockOut {
    alpha: usize,
    terms: Vec<CoeffOut>,
}

fn coeff_out(j: u32, k: u32, c: &ComplexScalar) -> CoeffOut {
    let v = c.to_c64();
    CoeffOut {
        j,
        k,
        re: v.re,
        im: v.im,
        exact: c.to_string(),
    }
}

/// (j,k) table of a univariate polynomial in z₁, z̄₁.
fn univariate_coeffs(p: &Poly) -> Vec<CoeffOut> {
    p.iter()
        .map(|(md, c)| coeff_out(md.holo[0], md.anti[0], c))
        .collect()
}

/// Point in the CLI syntax "re,im;re,im;...", exact.
fn point_string(pt: &[ComplexScalar]) -> String {
    pt.iter()
        .map(|c| format!("{},{}", c.re, c.im))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize)]
struct PseudoconvexityOut {
    samples: usize,
    radius: f64,
    min_eigenvalue: f64,
    pass: bool,
}

#[derive(Serialize)]
struct AnalyzeReport {
    label: String,
    n: usize,
    #[serde(rename = "type")]
    type_degree: Option<u32>,
    m: Option<u32>,
    corank: usize,
    levi_rank: usize,
    strongly_pseudoconvex_at_origin: bool,
    normal_form: NormalFormReport,
    type_certified: bool,
    type_warnings: Vec<String>,
    pseudoconvexity: PseudoconvexityOut,
    hypotheses: &'static str,
}

fn cmd_analyze(cli: &Cli, domain: &Path) -> Result<u8> {
    let spec = DomainSpec::from_json(&read_file(domain)?)?;
    let nf = spec.validate_normal_form();
    let origin = vec![Complex64::new(0.0, 0.0); spec.n() - 1];
    let levi = spec.levi_form(&origin);
    let psc = spec.pseudoconvexity_sample(PSEUDOCONVEXITY_RADIUS, cli.samples, PSEUDOCONVEXITY_SEED);

    let (type_degree, type_even, type_certified, type_warnings) = match spec.dangelo_type_z1() {
        Ok(ty) => (Some(ty.type_degree), ty.is_even, ty.certified, ty.warnings),
        Err(e) => (None, false, false, vec![e.to_string()]),
    };

    let pass = nf.structural_ok()
        && type_degree.is_some()
        && type_even
        && levi.corank <= 1
        && psc.pass;

    let report = AnalyzeReport {
        label: spec.label.clone(),
        n: spec.n(),
        type_degree,
        m: type_degree.filter(|_| type_even).map(|t| t / 2),
        corank: levi.corank,
        levi_rank: levi.rank,
        strongly_pseudoconvex_at_origin: levi.corank == 0,
        normal_form: nf,
        type_certified,
        type_warnings,
        pseudoconvexity: PseudoconvexityOut {
            samples: cli.samples,
            radius: PSEUDOCONVEXITY_RADIUS,
            min_eigenvalue: psc.min_eigenvalue,
            pass: psc.pass,
        },
        hypotheses: if pass { "pass" } else { "fail" },
    };
    emit(&report, &cli.output)?;
    match report.type_degree {
        Some(t) => eprintln!(
            "hypotheses: {} (type {t}, Levi corank {})",
            report.hypotheses, report.corank
        ),
        None => eprintln!("hypotheses: {} (type undetermined)", report.hypotheses),
    }
    Ok(if pass { 0 } else { 2 })
}

#[derive(Serialize)]
struct NormalizeReport {
    label: String,
    n: usize,
    m: u32,
    point: String,
    boundary_point: String,
    lifted: bool,
    /// Exact lift height ε = −ρ(point) when the input was interior.
    lift_height: Option<String>,
    exact: bool,
    max_class_residual: f64,
    phi: Vec<String>,
    phi_inv: Vec<String>,
    a: Vec<CoeffOut>,
    b: Vec<BCoeffOut>,
    remainder: String,
}

fn normalize_report(spec: &DomainSpec, point_text: &str) -> Result<(NormalizationResult, NormalizeReport)> {
    let m = pipeline_type(spec)?;
    let point = parse_point(point_text, spec.n())?;
    let (boundary, lift) = boundary_point_of(spec, &point)?;
    let norm = normalize_at(spec, &boundary, m)?;
    let report = NormalizeReport {
        label: spec.label.clone(),
        n: spec.n(),
        m,
        point: point_string(&point),
        boundary_point: point_string(&boundary),
        lifted: lift.is_some(),
        lift_height: lift.map(|e| e.to_string()),
        exact: norm.exact,
        max_class_residual: norm.max_class_residual,
        phi: norm.phi.components.iter().map(|c| c.to_string()).collect(),
        phi_inv: norm
            .phi_inv
            .components
            .iter()
            .map(|c| c.to_string())
            .collect(),
        a: norm
            .a_table
            .iter()
            .map(|(&(j, k), c)| coeff_out(j, k, c))
            .collect(),
        b: norm
            .b_table
            .iter()
            .map(|(&(alpha, j, k), c)| {
                let v = c.to_c64();
                BCoeffOut {
                    alpha,
                    j,
                    k,
                    re: v.re,
                    im: v.im,
                    exact: c.to_string(),
                }
            })
            .collect(),
        remainder: norm.remainder.to_string(),
    };
    Ok((norm, report))
}

fn cmd_normalize(cli: &Cli, domain: &Path, point_text: &str) -> Result<u8> {
    let spec = DomainSpec::from_json(&read_file(domain)?)?;
    let (_, report) = normalize_report(&spec, point_text)?;
    emit(&report, &cli.output)?;
    eprintln!(
        "normal form at {}: {} a-terms, {} b-terms, {}",
        report.boundary_point,
        report.a.len(),
        report.b.len(),
        if report.exact {
            "exact".to_string()
        } else {
            format!("residual {:.3e}", report.max_class_residual)
        }
    );
    Ok(0)
}

#[derive(Serialize)]
struct ScaleReport {
    label: String,
    m: u32,
    boundary_point: String,
    epsilon: f64,
    epsilon_exact: String,
    tau: f64,
    /// Present when the root τ = radicand^(1/degree) closes in ℚ.
    tau_exact: Option<String>,
    tau_radicand: String,
    tau_degree: u32,
    active_indices: Vec<ActiveIndex>,
    /// Per-coordinate dilation factors (τ, √ε, ..., √ε, ε).
    scales: Vec<f64>,
    exact_scales: bool,
    coeff_bound_ok: bool,
    p: Vec<CoeffOut>,
    q: Vec<QBlockOut>,
    rescaled_rho: String,
    q_estimate: QEstimateReport,
}

fn cmd_scale(cli: &Cli, domain: &Path, point_text: &str, epsilon_text: &str) -> Result<u8> {
    let spec = DomainSpec::from_json(&read_file(domain)?)?;
    let m = pipeline_type(&spec)?;
    let point = parse_point(point_text, spec.n())?;
    let (boundary, _) = boundary_point_of(&spec, &point)?;
    let epsilon = parse_rational(epsilon_text)?;
    let norm = normalize_at(&spec, &boundary, m)?;
    let sd = rescaled_rho(&norm, &epsilon, m)?;
    let q_estimate = check_q_estimate(&sd, Q_ESTIMATE_EXPONENT, cli.samples);
    let report = scale_report(&spec, m, &boundary, &sd, q_estimate);
    emit(&report, &cli.output)?;
    eprintln!(
        "ε = {:.3e}, τ = {:.6e}, coefficients bounded: {}",
        report.epsilon, report.tau, report.coeff_bound_ok
    );
    Ok(0)
}

fn scale_report(
    spec: &DomainSpec,
    m: u32,
    boundary: &[ComplexScalar],
    sd: &ScalingData,
    q_estimate: QEstimateReport,
) -> ScaleReport {
    ScaleReport {
        label: spec.label.clone(),
        m,
        boundary_point: point_string(boundary),
        epsilon: sd.epsilon,
        epsilon_exact: sd.epsilon_exact.to_string(),
        tau: sd.tau,
        tau_exact: sd.tau_exact.exact_rational().map(|r| r.to_string()),
        tau_radicand: sd.tau_exact.radicand.to_string(),
        tau_degree: sd.tau_exact.degree,
        active_indices: sd.active_indices.clone(),
        scales: sd.scales.clone(),
        exact_scales: sd.exact_scales,
        coeff_bound_ok: sd.coeff_bound_ok,
        p: univariate_coeffs(sd.p.as_poly()),
        q: sd
            .q
            .iter()
            .map(|(&alpha, q)| QBlockOut {
                alpha,
                terms: univariate_coeffs(q),
            })
            .collect(),
        rescaled_rho: sd.rescaled_rho.to_string(),
        q_estimate,
    }
}

#[derive(Serialize)]
struct LimitOut {
    label: String,
    m: u32,
    converged: bool,
    steps: usize,
    p: Vec<CoeffOut>,
    p_expr: String,
    model: ModelClass,
    coeff_bounds_ok: bool,
    q_decay: Vec<f64>,
    tau_trace: Vec<f64>,
    eps_trace: Vec<f64>,
    coeff_trace: Vec<Vec<CoeffEntry>>,
}

fn cmd_limit(cli: &Cli, domain: &Path, sequence: &Path) -> Result<u8> {
    let spec = DomainSpec::from_json(&read_file(domain)?)?;
    let m = pipeline_type(&spec)?;
    let mut seq = SequenceSpec::from_json(&read_file(sequence)?)?;
    seq.jmax = seq.jmax.min(cli.jmax);
    let lim = limit_polynomial(&spec, &seq, cli.tol, cli.window, cli.samples)?;
    let report = limit_out(&spec, m, lim);
    emit(&report, &cli.output)?;
    eprintln!(
        "limit model: Re w_n + P + Σ|w_α|²; strongly pseudoconvex: {}",
        if report.model.is_strongly_pseudoconvex_model {
            "yes"
        } else {
            "no"
        }
    );
    eprintln!("P = {}", report.p_expr);
    Ok(if report.converged { 0 } else { 3 })
}

fn limit_out(spec: &DomainSpec, m: u32, lim: LimitReport) -> LimitOut {
    LimitOut {
        label: spec.label.clone(),
        m,
        converged: lim.converged,
        steps: lim.tau_trace.len(),
        p: univariate_coeffs(lim.p_limit.as_poly()),
        p_expr: lim.p_limit.to_string(),
        model: lim.model,
        coeff_bounds_ok: lim.coeff_bounds_ok,
        q_decay: lim.q_decay,
        tau_trace: lim.tau_trace,
        eps_trace: lim.eps_trace,
        coeff_trace: lim.coeff_trace,
    }
}

/// Polynomial input file for `match`: an expression in z1, conj(z1).
#[derive(Deserialize)]
struct PolyFile {
    expr: String,
}

#[derive(Serialize)]
struct MatchOut {
    #[serde(rename = "match")]
    matched: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase_free: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_residual: Option<f64>,
}

fn read_poly_file(path: &Path) -> Result<RealPoly> {
    let file: PolyFile = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::InvalidDomain(format!("{}: {e}", path.display())))?;
    parse_real_poly(&file.expr, 1)
}

fn cmd_match(cli: &Cli, p: &Path, h: &Path) -> Result<u8> {
    let q = read_poly_file(p)?;
    let model = read_poly_file(h)?;
    let report = match match_top_homogeneous(&q, &model, cli.tol)? {
        Some(m) => MatchOut {
            matched: true,
            lambda: Some(m.lambda),
            nu: Some(m.nu),
            phase_free: Some(m.phase_free),
            max_residual: Some(m.max_residual),
        },
        None => MatchOut {
            matched: false,
            lambda: None,
            nu: None,
            phase_free: None,
            max_residual: None,
        },
    };
    emit(&report, &cli.output)?;
    match (report.matched, report.lambda, report.nu) {
        (true, Some(l), Some(nu)) => eprintln!("match: λ = {l}, ν = {nu}"),
        _ => eprintln!("no match"),
    }
    Ok(0)
}
