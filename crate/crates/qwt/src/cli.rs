//! Command-line front end: scenario assembly, single-run reports, parameter
//! sweeps, and null-state checks.
//!
//! Reports are byte-deterministic for identical configs: floats are printed
//! with 12 significant digits, struct fields serialize in declaration order,
//! and sweep rows are emitted in row-major axis order regardless of how many
//! worker threads evaluated them (`QWT_THREADS` caps the pool).

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analytic::{analytic_efficiency, Scenario};
use crate::dynamics::{efficiency_numeric, HorizonOptions};
use crate::graph::{detect_family, parse_edge_list, parse_family_spec, FamilySpec, Graph};
use crate::hamiltonian::{InitialStateSpec, TransportProblem};
use crate::krylov::{efficiency_overlap, krylov_basis, KrylovBasis, KRYLOV_TOL};
use crate::linalg::{CVector, C64};
use crate::nulleff::{family_null_conditions, is_null_state, is_stationary};
use crate::{Error, Result, Vertex};

/// Tolerance for the overlap-vs-closed-form match flag.
pub const ANALYTIC_OVERLAP_TOL: f64 = 1e-9;
/// Tolerance for the dynamics-vs-closed-form match flag.
pub const ANALYTIC_NUMERIC_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Overlap,
    Dynamics,
    Both,
}

impl Method {
    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "overlap" => Ok(Method::Overlap),
            "dynamics" => Ok(Method::Dynamics),
            "both" => Ok(Method::Both),
            other => Err(Error::Parse(format!("unknown method {other:?} (overlap|dynamics|both)"))),
        }
    }

    fn runs_dynamics(&self) -> bool {
        matches!(self, Method::Dynamics | Method::Both)
    }

    fn as_str(&self) -> &'static str {
        match self {
            Method::Overlap => "overlap",
            Method::Dynamics => "dynamics",
            Method::Both => "both",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Parse(format!("unknown format {other:?} (csv|json)"))),
        }
    }
}

/// One fully parsed run request.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Family mini-language string or an edge-list file path.
    pub graph: String,
    pub trap: Option<Vertex>,
    pub kappa: f64,
    pub initial: InitialStateSpec,
    /// Ordered `(r, s, λ, θ)` perturbations applied on top of the graph.
    pub perturbations: Vec<(Vertex, Vertex, f64, f64)>,
    pub method: Method,
    pub horizon: HorizonOptions,
}

impl RunConfig {
    pub fn new(graph: impl Into<String>, initial: InitialStateSpec) -> RunConfig {
        RunConfig {
            graph: graph.into(),
            trap: None,
            kappa: 1.0,
            initial,
            perturbations: Vec::new(),
            method: Method::Overlap,
            horizon: HorizonOptions::default(),
        }
    }
}

/// Graph resolved from a config string: family specs take priority, anything
/// else is treated as an edge-list file path.
pub fn resolve_graph(spec: &str) -> Result<(Graph, Option<FamilySpec>)> {
    match parse_family_spec(spec) {
        Ok(family) => Ok((crate::graph::build_family(family)?, Some(family))),
        Err(family_err) => {
            if Path::new(spec).exists() {
                let text = std::fs::read_to_string(spec)?;
                let g = parse_edge_list(&text)?;
                let detected = detect_family(&g);
                Ok((g, detected))
            } else {
                Err(Error::Parse(format!("{spec:?} is neither a graph spec ({family_err}) nor an existing file")))
            }
        }
    }
}

/// Raw numeric outcome of one efficiency run; formatting happens later.
#[derive(Clone, Debug)]
pub struct EfficiencyOutcome {
    pub scenario_id: String,
    pub family: Option<FamilySpec>,
    pub n: usize,
    pub trap: Vertex,
    pub kappa: f64,
    pub method: Method,
    pub initial: InitialStateSpec,
    pub perturbations: Vec<(Vertex, Vertex, f64, f64)>,
    pub krylov_dim: usize,
    pub eta_overlap: f64,
    pub eta_numeric: Option<f64>,
    pub horizon: Option<f64>,
    pub flux_tail: Option<f64>,
    pub final_residual: f64,
    pub off_tridiagonal: f64,
    pub analytic_eta: Option<f64>,
    pub analytic_label: Option<&'static str>,
    pub overlap_match: Option<bool>,
    pub numeric_match: Option<bool>,
    /// Dynamics hit the hard horizon; η_numeric holds the best estimate.
    pub horizon_error: bool,
}

impl EfficiencyOutcome {
    /// Everything converged and every applicable match flag is true.
    pub fn all_ok(&self) -> bool {
        !self.horizon_error
            && self.overlap_match.unwrap_or(true)
            && self.numeric_match.unwrap_or(true)
    }
}

fn default_trap(family: Option<FamilySpec>) -> Vertex {
    family.map(|f| f.default_trap()).unwrap_or(0)
}

/// Run one scenario: Krylov overlap always, dynamics when requested, and the
/// closed-form comparison whenever the scenario is cataloged.
pub fn run_efficiency(config: &RunConfig) -> Result<EfficiencyOutcome> {
    let (mut graph, family) = resolve_graph(&config.graph)?;
    for &(r, s, lambda, theta) in &config.perturbations {
        graph = graph.perturb_edge(r, s, lambda, theta)?;
    }
    let trap = config.trap.unwrap_or_else(|| default_trap(family));
    let problem = TransportProblem::new(graph.clone(), trap, config.kappa, config.initial)?;
    let h = problem.hamiltonian()?;
    let psi0 = problem.initial_vector()?;

    let basis = krylov_basis(&h, trap, KRYLOV_TOL)?;
    let eta_overlap = efficiency_overlap(&basis, &psi0)?;

    let mut eta_numeric = None;
    let mut horizon = None;
    let mut flux_tail = None;
    let mut horizon_error = false;
    if config.method.runs_dynamics() {
        match efficiency_numeric(&h, &psi0, trap, config.kappa, &config.horizon) {
            Ok(res) => {
                eta_numeric = Some(res.eta);
                horizon = Some(res.horizon);
                flux_tail = Some(res.flux_tail);
            }
            Err(Error::Horizon { best_eta, horizon: t, flux_tail: tail }) => {
                eta_numeric = Some(best_eta);
                horizon = Some(t);
                flux_tail = Some(tail);
                horizon_error = true;
            }
            Err(e) => return Err(e),
        }
    }

    // closed-form comparison only when the actual graph is bit-identical to
    // the canonical family layout
    let mut analytic_eta = None;
    let mut analytic_label = None;
    if let Some(family) = family {
        let recorded: Vec<(Vertex, Vertex, f64, f64)> = graph
            .perturbations()
            .map(|(&(a, b), p)| {
                let (r, s) = if p.row == a { (a, b) } else { (b, a) };
                (r, s, p.lambda, p.theta)
            })
            .collect();
        let scenario = Scenario { family, trap, initial: config.initial, perturbations: recorded };
        if scenario.graph().map(|g| g == graph).unwrap_or(false) {
            if let Ok(cf) = analytic_efficiency(&scenario) {
                analytic_eta = Some(cf.eta);
                analytic_label = Some(cf.label);
            }
        }
    }
    let overlap_match = analytic_eta.map(|a| (a - eta_overlap).abs() <= ANALYTIC_OVERLAP_TOL);
    let numeric_match = match (analytic_eta, eta_numeric) {
        (Some(a), Some(d)) => Some((a - d).abs() <= ANALYTIC_NUMERIC_TOL),
        _ => None,
    };

    Ok(EfficiencyOutcome {
        scenario_id: config.graph.clone(),
        family,
        n: problem.graph.n(),
        trap,
        kappa: config.kappa,
        method: config.method,
        initial: config.initial,
        perturbations: config.perturbations.clone(),
        krylov_dim: basis.dim(),
        eta_overlap,
        eta_numeric,
        horizon,
        flux_tail,
        final_residual: basis.residual_log().last().copied().unwrap_or(0.0),
        off_tridiagonal: basis.off_tridiagonal_max(),
        analytic_eta,
        analytic_label,
        overlap_match,
        numeric_match,
        horizon_error,
    })
}

// ---------------------------------------------------------------------------
// deterministic formatting
// ---------------------------------------------------------------------------

/// Fixed 12-significant-digit decimal formatting.
pub fn fmt_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        format!("{x:.11e}")
    } else {
        let decimals = (11 - mag).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig12).unwrap_or_else(|| "-".into())
}

#[derive(Serialize)]
struct JsonInitial {
    kind: &'static str,
    vertices: Vec<Vertex>,
    gamma: Option<String>,
}

#[derive(Serialize)]
struct JsonPerturbation {
    r: Vertex,
    s: Vertex,
    lambda: String,
    theta: String,
}

#[derive(Serialize)]
struct JsonAnalytic {
    label: String,
    eta: String,
    overlap_match: Option<bool>,
    numeric_match: Option<bool>,
}

#[derive(Serialize)]
struct JsonReport {
    scenario: String,
    n: usize,
    trap: Vertex,
    kappa: String,
    method: &'static str,
    initial: JsonInitial,
    perturbations: Vec<JsonPerturbation>,
    krylov_dim: usize,
    eta_overlap: String,
    eta_numeric: Option<String>,
    horizon: Option<String>,
    flux_tail: Option<String>,
    final_residual: String,
    off_tridiagonal: String,
    analytic: Option<JsonAnalytic>,
    converged: bool,
}

/// JSON rendering of an outcome (floats as 12-significant-digit strings).
pub fn efficiency_json(o: &EfficiencyOutcome) -> String {
    let initial = match o.initial {
        InitialStateSpec::Localized { l } => {
            JsonInitial { kind: "localized", vertices: vec![l], gamma: None }
        }
        InitialStateSpec::Superposition { l, k, gamma } => {
            JsonInitial { kind: "superposition", vertices: vec![l, k], gamma: Some(fmt_sig12(gamma)) }
        }
    };
    let report = JsonReport {
        scenario: o.scenario_id.clone(),
        n: o.n,
        trap: o.trap,
        kappa: fmt_sig12(o.kappa),
        method: o.method.as_str(),
        initial,
        perturbations: o
            .perturbations
            .iter()
            .map(|&(r, s, lambda, theta)| JsonPerturbation {
                r,
                s,
                lambda: fmt_sig12(lambda),
                theta: fmt_sig12(theta),
            })
            .collect(),
        krylov_dim: o.krylov_dim,
        eta_overlap: fmt_sig12(o.eta_overlap),
        eta_numeric: o.eta_numeric.map(fmt_sig12),
        horizon: o.horizon.map(fmt_sig12),
        flux_tail: o.flux_tail.map(fmt_sig12),
        final_residual: fmt_sig12(o.final_residual),
        off_tridiagonal: fmt_sig12(o.off_tridiagonal),
        analytic: o.analytic_eta.map(|eta| JsonAnalytic {
            label: o.analytic_label.unwrap_or("-").to_string(),
            eta: fmt_sig12(eta),
            overlap_match: o.overlap_match,
            numeric_match: o.numeric_match,
        }),
        converged: !o.horizon_error,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report serialization");
    s.push('\n');
    s
}

/// Fixed CSV column set shared by single runs and sweeps.
pub const CSV_HEADER: &str =
    "scenario,n,n1,n2,trap,case,lambda,theta,gamma,kappa,m,eta_overlap,eta_numeric,horizon,flags";

fn csv_row(o: &EfficiencyOutcome) -> String {
    let (n1, n2) = match o.family {
        Some(FamilySpec::CompleteBipartite { n1, n2 }) => (Some(n1 as f64), Some(n2 as f64)),
        _ => (None, None),
    };
    let lambda = o.perturbations.last().map(|p| p.2);
    let theta = o.perturbations.last().map(|p| p.3);
    let gamma = match o.initial {
        InitialStateSpec::Superposition { gamma, .. } => Some(gamma),
        _ => None,
    };
    let mut flags: Vec<&str> = vec![if o.horizon_error { "horizon_error" } else { "converged" }];
    match o.overlap_match {
        Some(true) => flags.push("overlap_match"),
        Some(false) => flags.push("overlap_mismatch"),
        None => {}
    }
    match o.numeric_match {
        Some(true) => flags.push("numeric_match"),
        Some(false) => flags.push("numeric_mismatch"),
        None => {}
    }
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        o.scenario_id,
        o.n,
        fmt_opt(n1),
        fmt_opt(n2),
        o.trap,
        o.analytic_label.unwrap_or("-"),
        fmt_opt(lambda),
        fmt_opt(theta),
        fmt_opt(gamma),
        fmt_sig12(o.kappa),
        o.krylov_dim,
        fmt_sig12(o.eta_overlap),
        fmt_opt(o.eta_numeric),
        fmt_opt(o.horizon),
        flags.join("|")
    )
}

/// CSV rendering (header plus one row).
pub fn efficiency_csv(o: &EfficiencyOutcome) -> String {
    format!("{CSV_HEADER}\n{}\n", csv_row(o))
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum SweepAxis {
    Lambda(Vec<f64>),
    Theta(Vec<f64>),
    Gamma(Vec<f64>),
    N(Vec<usize>),
}

impl SweepAxis {
    fn len(&self) -> usize {
        match self {
            SweepAxis::Lambda(v) | SweepAxis::Theta(v) | SweepAxis::Gamma(v) => v.len(),
            SweepAxis::N(v) => v.len(),
        }
    }
}

/// Parse one `--sweep key=values` axis. Values are comma-separated numbers;
/// `theta`/`gamma` also accept `grid:K` (K uniform points over [0,2π)) and
/// the `pi` literal; `n` accepts `a..b` inclusive ranges.
pub fn parse_sweep_axis(text: &str) -> Result<SweepAxis> {
    let (key, body) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("sweep axis needs key=values, got {text:?}")))?;
    let parse_floats = |body: &str, phases: bool| -> Result<Vec<f64>> {
        if let Some(k) = body.strip_prefix("grid:") {
            if !phases {
                return Err(Error::Parse("grid:K is only valid for phase axes".into()));
            }
            let k: usize = k.parse().map_err(|e| Error::Parse(format!("grid size: {e}")))?;
            if k == 0 {
                return Err(Error::Parse("grid size must be positive".into()));
            }
            return Ok((0..k).map(|i| i as f64 * std::f64::consts::TAU / k as f64).collect());
        }
        body.split(',')
            .map(|tok| if phases { parse_phase(tok) } else { parse_float(tok) })
            .collect()
    };
    match key {
        "lambda" => Ok(SweepAxis::Lambda(parse_floats(body, false)?)),
        "theta" => Ok(SweepAxis::Theta(parse_floats(body, true)?)),
        "gamma" => Ok(SweepAxis::Gamma(parse_floats(body, true)?)),
        "n" => {
            if let Some((a, b)) = body.split_once("..") {
                let a: usize = a.parse().map_err(|e| Error::Parse(format!("n range: {e}")))?;
                let b: usize = b.parse().map_err(|e| Error::Parse(format!("n range: {e}")))?;
                if a > b {
                    return Err(Error::Parse(format!("empty n range {a}..{b}")));
                }
                Ok(SweepAxis::N((a..=b).collect()))
            } else {
                let vals: std::result::Result<Vec<usize>, _> =
                    body.split(',').map(|t| t.trim().parse()).collect();
                Ok(SweepAxis::N(vals.map_err(|e| Error::Parse(format!("n values: {e}")))?))
            }
        }
        other => Err(Error::Parse(format!("unknown sweep axis {other:?} (lambda|theta|gamma|n)"))),
    }
}

fn apply_axis(config: &mut RunConfig, axis: &SweepAxis, index: usize) -> Result<()> {
    match axis {
        SweepAxis::Lambda(v) => {
            if config.perturbations.is_empty() {
                return Err(Error::Value("lambda sweep needs at least one --perturb".into()));
            }
            for p in &mut config.perturbations {
                p.2 = v[index];
            }
        }
        SweepAxis::Theta(v) => {
            let p = config
                .perturbations
                .last_mut()
                .ok_or_else(|| Error::Value("theta sweep needs at least one --perturb".into()))?;
            p.3 = v[index];
        }
        SweepAxis::Gamma(v) => match &mut config.initial {
            InitialStateSpec::Superposition { gamma, .. } => *gamma = v[index],
            InitialStateSpec::Localized { .. } => {
                return Err(Error::Value("gamma sweep needs a superposition initial state".into()))
            }
        },
        SweepAxis::N(v) => {
            let family = parse_family_spec(&config.graph)?;
            config.graph = match family {
                FamilySpec::Complete { .. } => format!("complete:{}", v[index]),
                FamilySpec::Star { trap, .. } => match trap {
                    crate::graph::StarTrap::Central => format!("star:{}", v[index]),
                    crate::graph::StarTrap::Outer => format!("star:{}:outer", v[index]),
                },
                FamilySpec::CompleteBipartite { .. } => {
                    return Err(Error::Value("n sweep is not defined for bipartite graphs".into()))
                }
            };
        }
    }
    Ok(())
}

/// Evaluate the sweep grid (row-major over the axes as given) and render the
/// CSV. Grid points run in parallel; `QWT_THREADS` caps the worker count.
pub fn run_sweep(base: &RunConfig, axes: &[SweepAxis]) -> Result<String> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Value(format!("sweeps take one or two axes, got {}", axes.len())));
    }
    let dims: Vec<usize> = axes.iter().map(|a| a.len()).collect();
    if dims.contains(&0) {
        return Err(Error::Value("empty sweep axis".into()));
    }
    let total: usize = dims.iter().product();

    let configs: Vec<RunConfig> = (0..total)
        .map(|flat| {
            let mut cfg = base.clone();
            let mut rem = flat;
            for (axis, &dim) in axes.iter().zip(&dims).rev() {
                apply_axis(&mut cfg, axis, rem % dim)?;
                rem /= dim;
            }
            Ok(cfg)
        })
        .collect::<Result<_>>()?;

    let pool = thread_pool()?;
    let outcomes: Vec<Result<EfficiencyOutcome>> = pool.install(|| {
        use rayon::prelude::*;
        configs.par_iter().map(run_efficiency).collect()
    });

    let mut out = String::new();
    writeln!(out, "{CSV_HEADER}").unwrap();
    for row in outcomes {
        writeln!(out, "{}", csv_row(&row?)).unwrap();
    }
    Ok(out)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("QWT_THREADS") {
        let k: usize = raw
            .parse()
            .map_err(|e| Error::Parse(format!("QWT_THREADS must be a positive integer: {e}")))?;
        if k == 0 {
            return Err(Error::Parse("QWT_THREADS must be positive".into()));
        }
        builder = builder.num_threads(k);
    }
    builder.build().map_err(|e| Error::Value(format!("thread pool: {e}")))
}

// ---------------------------------------------------------------------------
// null-state checking
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct NullCheckReport {
    pub scenario: String,
    pub n: usize,
    pub trap: Vertex,
    pub krylov_dim: usize,
    /// Per-constraint residuals `|⟨c|ψ⟩|` when the family is recognized.
    pub constraint_residuals: Option<Vec<String>>,
    pub is_null: bool,
    pub is_stationary: bool,
    pub eigenvalue_re: String,
    pub eigenvalue_im: String,
}

/// Check a user-supplied state for null transport efficiency and
/// stationarity under the assembled Hamiltonian.
pub fn run_null_check(config: &RunConfig, amplitudes: &[C64]) -> Result<NullCheckReport> {
    let (mut graph, family) = resolve_graph(&config.graph)?;
    for &(r, s, lambda, theta) in &config.perturbations {
        graph = graph.perturb_edge(r, s, lambda, theta)?;
    }
    let trap = config.trap.unwrap_or_else(|| default_trap(family));
    if trap >= graph.n() {
        return Err(Error::Index { index: trap, n: graph.n() });
    }
    if amplitudes.len() != graph.n() {
        return Err(Error::Dimension(format!(
            "state has {} amplitudes for {} vertices",
            amplitudes.len(),
            graph.n()
        )));
    }
    let psi = CVector(amplitudes.to_vec());
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NormViolation { norm });
    }
    let h = crate::hamiltonian::complete_hamiltonian(&graph, trap, config.kappa)?;
    let basis: KrylovBasis = krylov_basis(&h, trap, KRYLOV_TOL)?;
    let null = is_null_state(&basis, &psi, 1e-10)?;
    let (stationary, eps) = is_stationary(&h, &psi, 1e-9)?;
    // family constraints assume the canonical layout (bipartite side one
    // first, star center at 0); skip them for edge lists labeled otherwise
    let residuals = match family {
        Some(f) => {
            let canonical = crate::graph::build_family(f)
                .map(|c| c.edges().eq(graph.edges()))
                .unwrap_or(false);
            if canonical {
                let cond = family_null_conditions(f, trap)?;
                Some(cond.residuals(&psi)?.into_iter().map(fmt_sig12).collect())
            } else {
                None
            }
        }
        None => None,
    };
    Ok(NullCheckReport {
        scenario: config.graph.clone(),
        n: graph.n(),
        trap,
        krylov_dim: basis.dim(),
        constraint_residuals: residuals,
        is_null: null,
        is_stationary: stationary,
        eigenvalue_re: fmt_sig12(eps.re),
        eigenvalue_im: fmt_sig12(eps.im),
    })
}

pub fn null_check_json(report: &NullCheckReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// flag-value parsing
// ---------------------------------------------------------------------------

fn parse_float(tok: &str) -> Result<f64> {
    tok.trim().parse().map_err(|e| Error::Parse(format!("number {tok:?}: {e}")))
}

/// Phase in radians; `pi` and `<factor>pi` literals are accepted so critical
/// points like θ = π are exact.
pub fn parse_phase(tok: &str) -> Result<f64> {
    let t = tok.trim();
    if let Some(prefix) = t.strip_suffix("pi") {
        let factor = match prefix {
            "" => 1.0,
            "-" => -1.0,
            p => parse_float(p)?,
        };
        Ok(factor * std::f64::consts::PI)
    } else {
        parse_float(t)
    }
}

/// One complex amplitude: `a`, `bi`, `a+bi`, or `a-bi`.
pub fn parse_complex(tok: &str) -> Result<C64> {
    let t = tok.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty amplitude".into()));
    }
    if let Some(imag) = t.strip_suffix('i') {
        // split at the last +/- that is not a leading sign or exponent sign
        let bytes = imag.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re = parse_float(&imag[..i])?;
                let im_part = &imag[i..];
                let im = if im_part == "+" {
                    1.0
                } else if im_part == "-" {
                    -1.0
                } else {
                    parse_float(im_part)?
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im = if imag.is_empty() {
                    1.0
                } else if imag == "-" {
                    -1.0
                } else {
                    parse_float(imag)?
                };
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        Ok(C64::new(parse_float(t)?, 0.0))
    }
}

/// Comma-separated complex amplitude list.
pub fn parse_state(text: &str) -> Result<Vec<C64>> {
    text.split(',').map(parse_complex).collect()
}

/// `r,s,λ,θ` with phase literals allowed in θ.
pub fn parse_perturb(text: &str) -> Result<(Vertex, Vertex, f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("--perturb needs r,s,lambda,theta; got {text:?}")));
    }
    let r: Vertex = parts[0].trim().parse().map_err(|e| Error::Parse(format!("vertex: {e}")))?;
    let s: Vertex = parts[1].trim().parse().map_err(|e| Error::Parse(format!("vertex: {e}")))?;
    Ok((r, s, parse_float(parts[2])?, parse_phase(parts[3])?))
}

/// `l,k,γ` with phase literals allowed.
pub fn parse_superpose(text: &str) -> Result<InitialStateSpec> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!("--superpose needs l,k,gamma; got {text:?}")));
    }
    let l: Vertex = parts[0].trim().parse().map_err(|e| Error::Parse(format!("vertex: {e}")))?;
    let k: Vertex = parts[1].trim().parse().map_err(|e| Error::Parse(format!("vertex: {e}")))?;
    Ok(InitialStateSpec::Superposition { l, k, gamma: parse_phase(parts[2])? })
}
