use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use idealflow_core::ideal_flow::{
    ideal_flow_from_stochastic, raw_ideal_flow, rescale_to_total, to_whole_numbers, verify_node_conservation,
};
use idealflow_core::io::{self, detect_domain, format_matrix, format_vector, parse_matrix_as, parse_vector_as, Domain};
use idealflow_core::markov::{normalize_total, premagic_from_stochastic, scale_by_total, to_row_stochastic};
use idealflow_core::random_walk::{convergence_report, write_convergence_csv};
use idealflow_core::scalar::parse_rational;
use idealflow_core::spectral::{check_conjecture_1, check_conjecture_2, check_conjecture_3, GeneratorParams};
use idealflow_core::{DirectedNetwork, Error, NodeThroughputs, Rational, Scalar, SquareMatrix, StochasticMatrix};
use serde_json::json;

use crate::{ConvertTarget, DomainArg, Format};

pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_domain() => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn with_path(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse { .. } | Error::MixedDomain | Error::Json(_) => CliError::Usage(format!("{}: {e}", path.display())),
        other => CliError::Core(other),
    }
}

fn resolve_domain(text: &str, path: &Path, forced: Option<DomainArg>) -> Result<Domain> {
    match forced {
        Some(DomainArg::Rational) => Ok(Domain::Rational),
        Some(DomainArg::Float) => Ok(Domain::Float),
        None => detect_domain(text).map_err(|e| with_path(path, e)),
    }
}

fn parse_kappa<T: Scalar>(text: &str) -> Result<T> {
    let value = T::parse_field(text.trim())
        .or_else(|| parse_rational(text.trim()).and_then(|r| T::parse_field(&format!("{:?}", r.to_f64()))))
        .ok_or_else(|| CliError::Usage(format!("invalid --kappa value {text:?}")))?;
    if !value.is_positive() {
        return Err(CliError::Usage(format!("--kappa must be positive, got {text}")));
    }
    Ok(value)
}

fn fields<T: Scalar>(values: &[T]) -> Vec<String> {
    values.iter().map(Scalar::to_field).collect()
}

fn check_report<T: Scalar>(m: &SquareMatrix<T>, tol: f64, format: Format) -> (String, bool) {
    let premagic = m.is_premagic(tol);
    let rows = m.row_sums().values;
    let cols = m.col_sums().values;
    let residual = m.antisymmetric_kernel_residual().values;
    let balances = verify_node_conservation(m);
    let (norm_1, norm_inf) = (m.norm_1(), m.norm_inf());
    let text = match format {
        Format::Json => {
            let nodes: Vec<_> = balances
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let conserved = (b.inflow.clone() - b.outflow.clone()).within(tol);
                    json!({"node": i, "inflow": b.inflow.to_field(), "outflow": b.outflow.to_field(), "conserved": conserved})
                })
                .collect();
            let report = json!({
                "premagic": premagic,
                "order": m.order(),
                "tolerance": tol,
                "row_sums": fields(&rows),
                "column_sums": fields(&cols),
                "kernel_residual": fields(&residual),
                "nodes": nodes,
                "norm_1": norm_1.to_field(),
                "norm_inf": norm_inf.to_field(),
                "throughputs": premagic.then(|| fields(&rows)),
            });
            format!("{}\n", serde_json::to_string_pretty(&report).expect("json serializes"))
        }
        Format::Text => {
            let mut out = format!("premagic: {premagic}\n");
            out += &format!("row sums: {}", format_vector(&rows));
            out += &format!("column sums: {}", format_vector(&cols));
            out += &format!("kernel residual: {}", format_vector(&residual));
            for (i, b) in balances.iter().enumerate() {
                let conserved = (b.inflow.clone() - b.outflow.clone()).within(tol);
                out += &format!(
                    "node {i}: inflow {}, outflow {}, {}\n",
                    b.inflow.to_field(),
                    b.outflow.to_field(),
                    if conserved { "conserved" } else { "NOT conserved" }
                );
            }
            out += &format!("norm_1: {}\nnorm_inf: {}\n", norm_1.to_field(), norm_inf.to_field());
            if premagic {
                out += &format!("throughputs: {}", format_vector(&rows));
            }
            out
        }
    };
    (text, premagic)
}

pub fn check(path: &Path, domain: Option<DomainArg>, tol: Option<f64>, format: Format) -> Result<ExitCode> {
    let text = read(path)?;
    let domain = resolve_domain(&text, path, domain)?;
    let (report, premagic) = match domain {
        Domain::Rational => {
            if tol.is_some() {
                return Err(CliError::Usage("--tol applies only to the float domain".into()));
            }
            let m = parse_matrix_as::<Rational>(&text).map_err(|e| with_path(path, e))?;
            check_report(&m, 0.0, format)
        }
        Domain::Float => {
            let m = parse_matrix_as::<f64>(&text).map_err(|e| with_path(path, e))?;
            let tol = tol.unwrap_or_else(|| m.default_tolerance());
            if tol.is_nan() || tol < 0.0 {
                return Err(CliError::Usage(format!("--tol must be non-negative, got {tol}")));
            }
            check_report(&m, tol, format)
        }
    };
    emit(None, &report)?;
    Ok(if premagic { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn load_network(path: &Path) -> Result<DirectedNetwork> {
    io::parse_network_json(&read(path)?).map_err(|e| with_path(path, e))
}

fn describe_components(g: &DirectedNetwork, e: Error) -> CliError {
    if let (Error::Reducible { components, .. }, Some(labels)) = (&e, g.labels()) {
        let named: Vec<String> = components
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(", ")))
            .collect();
        eprintln!("components: {}", named.join(" "));
    }
    CliError::Core(e)
}

fn stochastic_input(path: &Path, as_matrix: bool) -> Result<StochasticMatrix<Rational>> {
    if as_matrix {
        let m = parse_matrix_as::<Rational>(&read(path)?).map_err(|e| with_path(path, e))?;
        return Ok(StochasticMatrix::new(m)?);
    }
    let g = load_network(path)?;
    g.strong_connectivity()
        .require_strongly_connected()
        .map_err(|e| describe_components(&g, e))?;
    Ok(g.uniform_walk_matrix()?)
}

pub fn ideal_flow(
    input: &Path,
    stochastic: bool,
    raw: bool,
    integer: bool,
    kappa: Option<&str>,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let s = stochastic_input(input, stochastic)?;
    let f = if raw { raw_ideal_flow(&s)? } else { ideal_flow_from_stochastic(&s)? };
    let matrix = if integer {
        let whole = to_whole_numbers(&f);
        eprintln!("multiplier: {}", whole.multiplier);
        whole.matrix
    } else if let Some(k) = kappa {
        rescale_to_total(&f, &parse_kappa::<Rational>(k)?)?.into_matrix()
    } else {
        f.into_matrix()
    };
    emit(output, &format_matrix(&matrix))?;
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(network: &Path, budgets: &[u64], seed: u64, output: Option<&Path>) -> Result<ExitCode> {
    if budgets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("--nt budgets must be strictly increasing".into()));
    }
    let g = load_network(network)?;
    g.strong_connectivity()
        .require_strongly_connected()
        .map_err(|e| describe_components(&g, e))?;
    let s = g.uniform_walk_matrix()?;
    let f = ideal_flow_from_stochastic(&s)?;
    let points = convergence_report(&g, &s.to_f64(), budgets, &f, seed)?;
    let mut csv = Vec::new();
    write_convergence_csv(&points, &mut csv)?;
    emit(output, &String::from_utf8(csv).expect("csv is utf-8"))?;
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn convert_in<T: Scalar>(
    text: &str,
    path: &Path,
    to: ConvertTarget,
    throughputs: Option<&Path>,
    throughputs_out: Option<&Path>,
    kappa: Option<&str>,
) -> Result<String> {
    let m = parse_matrix_as::<T>(text).map_err(|e| with_path(path, e))?;
    match to {
        ConvertTarget::RowStochastic => {
            let (s, n) = to_row_stochastic(&m)?;
            let n = format_vector(n.values());
            match throughputs_out {
                Some(p) => fs::write(p, &n).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
                None => eprint!("throughputs: {n}"),
            }
            Ok(format_matrix(s.matrix()))
        }
        ConvertTarget::TotalNormalized => {
            let (s, k) = normalize_total(&m)?;
            eprintln!("kappa: {}", k.to_field());
            Ok(format_matrix(&s))
        }
        ConvertTarget::Premagic => match (throughputs, kappa) {
            (Some(p), None) => {
                let n = parse_vector_as::<T>(&read(p)?).map_err(|e| with_path(p, e))?;
                let s = StochasticMatrix::new(m)?;
                Ok(format_matrix(&premagic_from_stochastic(&s, &NodeThroughputs::new(n)?)?))
            }
            (None, Some(k)) => Ok(format_matrix(&scale_by_total(&m, &parse_kappa::<T>(k)?)?)),
            _ => Err(CliError::Usage("--to premagic needs exactly one of --throughputs or --kappa".into())),
        },
    }
}

pub fn convert(
    path: &Path,
    to: ConvertTarget,
    throughputs: Option<&Path>,
    throughputs_out: Option<&Path>,
    kappa: Option<&str>,
    domain: Option<DomainArg>,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let text = read(path)?;
    let result = match resolve_domain(&text, path, domain)? {
        Domain::Rational => convert_in::<Rational>(&text, path, to, throughputs, throughputs_out, kappa)?,
        Domain::Float => convert_in::<f64>(&text, path, to, throughputs, throughputs_out, kappa)?,
    };
    emit(output, &result)?;
    Ok(ExitCode::SUCCESS)
}

pub fn conjectures(
    id: u8,
    cases: usize,
    min_order: usize,
    max_order: usize,
    ks: &[f64],
    seed: u64,
    output: Option<&Path>,
) -> Result<ExitCode> {
    let params = GeneratorParams::new(min_order, max_order, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = match id {
        1 => check_conjecture_1(&params, cases),
        2 => check_conjecture_2(&params, cases),
        _ => {
            if ks.iter().any(|k| k.is_nan() || *k <= 0.0) {
                return Err(CliError::Usage("--k factors must be positive".into()));
            }
            check_conjecture_3(&params, cases, ks)
        }
    };
    emit(output, &format!("{}\n", report.to_json()))?;
    eprintln!("conjecture {id}: {}/{} consistent", report.consistent, report.cases);
    Ok(ExitCode::SUCCESS)
}
