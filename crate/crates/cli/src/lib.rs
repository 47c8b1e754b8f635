//! `ddcalc` command line: matrix functions, divided-difference tables,
//! regularity classification, probe sweeps and spectrum reports.
//!
//! Exit codes: 0 on success, 1 on math or domain errors, 2 on usage and
//! parse errors. Error messages start with the error case name.

pub mod io;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddcalc::divdiff::{dd_table, DivDiffError};
use ddcalc::funcalc::{analyze_spectrum, compute, CalcError, CalcMode};
use ddcalc::funcspec::{tcdis_domain, DomainSpec, FuncError, FunctionSpec};
use ddcalc::numkit::{MatrixC, NumError, ToleranceConfig};
use ddcalc::probes::{self, Cell, ColumnKind, ProbeError, ProbeReport};
use ddcalc::regclass::{self, RegConfig, RegError, RegularityVerdict};
use num_complex::Complex64;

use io::{fmt_complex, parse_complex, parse_complex_list, parse_real_list, parse_usize_list, read_matrix, write_matrix};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("FormatError: line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("UsageError: {0}")]
    Usage(String),
    #[error("IoError: {0}")]
    Io(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    DivDiff(#[from] DivDiffError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Reg(#[from] RegError),
    #[error(transparent)]
    Probe(#[from] ProbeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format { .. } | CliError::Usage(_) => 2,
            CliError::Num(NumError::InvalidTolerance(_)) => 2,
            CliError::Func(FuncError::SyntaxError { .. } | FuncError::InvalidDomain(_) | FuncError::TableFormat { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ddcalc", version, about = "Matrix functional calculus via divided differences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for sampled statistics.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    cluster_tol: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    zero_tol: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    cond_max: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    rel_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f[X] and print the matrix.
    Compute(ComputeArgs),
    /// Print the divided-difference table of f on a node list.
    Ddtable(DdtableArgs),
    /// Sampled DDB / DDC / TC verdict.
    Classify(ClassifyArgs),
    /// Parameter sweeps, printed as CSV.
    #[command(subcommand)]
    Probe(ProbeCommand),
    /// Eigenvalue clusters and minimal-polynomial exponents.
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct FuncSource {
    /// Expression in z, e.g. "exp(z)".
    #[arg(long)]
    func: Option<String>,
    /// Sample table file: lines "re im f_re f_im".
    #[arg(long)]
    table: Option<PathBuf>,
    /// The built-in table on {0} U {1/n} U {1/n + 3^-n}, 2 <= n <= N.
    #[arg(long, value_name = "N")]
    tcdis: Option<usize>,
}

#[derive(Args, Debug)]
struct FuncArgs {
    #[command(flatten)]
    source: FuncSource,
    /// "plane", "disk:re,im,r" or an interval such as "[-1,1]".
    #[arg(long, default_value = "plane", allow_hyphen_values = true)]
    domain: String,
    /// Cluster points of a sample table, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    cluster: Option<String>,
    /// Highest derivative order the calculus may use.
    #[arg(long)]
    derivative_budget: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Auto,
    Diag,
    Newton,
    Hermite,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[command(flatten)]
    f: FuncArgs,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
}

#[derive(Args, Debug)]
struct DdtableArgs {
    /// Comma-separated nodes, repeats allowed for confluent entries.
    #[arg(long, allow_hyphen_values = true)]
    nodes: String,
    #[command(flatten)]
    f: FuncArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ClassArg {
    Ddb,
    Ddc,
    Tc,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, value_enum)]
    class: ClassArg,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    center: String,
    /// Decreasing scales for ddb/ddc; defaults follow the domain.
    #[arg(long)]
    scales: Option<String>,
    /// Probe points for tc.
    #[arg(long, allow_hyphen_values = true)]
    probes: Option<String>,
    /// Tuples sampled per scale on continuous domains.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[command(flatten)]
    f: FuncArgs,
}

#[derive(Subcommand, Debug)]
enum ProbeCommand {
    /// Corner of f on the bidiagonal matrix against the divided difference.
    Opitz {
        #[arg(long, allow_hyphen_values = true)]
        nodes: String,
        #[arg(long, default_value = "0.01,0.1,1,10")]
        eps: String,
        #[command(flatten)]
        f: FuncArgs,
    },
    /// Two-point blow-up on the tcdis table.
    Tcdis {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
    },
    /// Order-3 corner growth.
    Uniform3 {
        /// x,y,z
        #[arg(long, allow_hyphen_values = true)]
        nodes: String,
        #[arg(long, default_value = "1,10,100")]
        w: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[command(flatten)]
        f: FuncArgs,
    },
    /// ||f[X0 + h D] - f[X0]|| per h, or along the tcdis sequence.
    Continuity {
        #[arg(long, required_unless_present = "tcdis_sequence")]
        matrix: Option<PathBuf>,
        #[arg(long, required_unless_present = "tcdis_sequence")]
        direction: Option<PathBuf>,
        #[arg(long)]
        h: Option<String>,
        /// Use the tcdis sequence with eps_n = 0.75^n towards the zero matrix.
        #[arg(long)]
        tcdis_sequence: bool,
        #[command(flatten)]
        f: FuncArgs,
    },
    /// Largest ||f[X]|| per dimension near a point.
    Dimension {
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value = "1,2,3,4,5,6,7,8,9,10,11,12")]
        k_list: String,
        #[arg(long, default_value_t = 8)]
        family: usize,
        #[command(flatten)]
        f: FuncArgs,
    },
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    matrix: PathBuf,
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig, CliError> {
    let d = ToleranceConfig::default();
    Ok(ToleranceConfig::new(
        cli.cluster_tol.unwrap_or(d.cluster_tol),
        cli.zero_tol.unwrap_or(d.zero_tol),
        cli.cond_max.unwrap_or(d.cond_max),
        cli.rel_tol.unwrap_or(d.rel_tol),
    )?)
}

fn complex_arg(text: &str, what: &str) -> Result<Complex64, CliError> {
    parse_complex(text).ok_or_else(|| CliError::Usage(format!("bad {what} value {text:?}")))
}

fn load_function(a: &FuncArgs) -> Result<FunctionSpec, CliError> {
    let clusters = match &a.cluster {
        Some(t) => parse_complex_list(t, "cluster")?,
        None => Vec::new(),
    };
    let f = if let Some(text) = &a.source.func {
        FunctionSpec::expression(text, DomainSpec::parse(&a.domain)?)?
    } else if let Some(path) = &a.source.table {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        FunctionSpec::parse_table(&text, clusters)?
    } else if let Some(n) = a.source.tcdis {
        tcdis_domain(n)?
    } else {
        return Err(CliError::Usage("one of --func, --table, --tcdis is required".into()));
    };
    Ok(match a.derivative_budget {
        Some(b) => f.with_derivative_budget(b),
        None => f,
    })
}

fn verdict_report(v: &RegularityVerdict, seed: u64) -> ProbeReport {
    let mut r = ProbeReport::new(
        "classify",
        &[
            ("h", ColumnKind::Real),
            ("statistic", ColumnKind::Real),
            ("samples", ColumnKind::Real),
            ("roundoff", ColumnKind::Real),
            ("resolved", ColumnKind::Real),
        ],
    );
    r.param("class", v.class_tested);
    r.param("seed", seed);
    if let Some(l) = v.limit {
        r.param("limit", fmt_complex(l));
    }
    if let Some(w) = &v.witness {
        let nodes: Vec<String> = w.nodes.iter().map(|z| fmt_complex(*z)).collect();
        r.param("witness", nodes.join(";"));
        r.param("witness_magnitude", probes::fmt_num(w.magnitude));
        if let Some((p, _)) = &w.partner {
            let nodes: Vec<String> = p.iter().map(|z| fmt_complex(*z)).collect();
            r.param("partner", nodes.join(";"));
        }
    }
    r.verdict = Some(v.verdict.to_string());
    for p in &v.sweep {
        r.push_row(vec![
            Cell::Real(p.h),
            Cell::Real(p.statistic),
            Cell::Real(p.samples as f64),
            Cell::Real(p.roundoff),
            Cell::Real(if p.resolved { 1.0 } else { 0.0 }),
        ]);
    }
    r.warnings = v.notes.clone();
    r
}

/// Default tc probes: `a + 10^-m` (m = 1..8) inside the domain, or every
/// other point of a finite domain.
fn default_probes(f: &FunctionSpec, a: Complex64) -> Vec<Complex64> {
    let d = f.domain();
    if d.is_finite_set() {
        return d.points_within(a, f64::INFINITY).into_iter().filter(|z| *z != a).collect();
    }
    (1..=8)
        .flat_map(|m| {
            let h = 10f64.powi(-m);
            [a + Complex64::new(h, 0.0), a - Complex64::new(h, 0.0)]
        })
        .filter(|z| d.contains(*z))
        .collect()
}

fn run_command(cli: &Cli, err: &mut dyn Write) -> Result<String, CliError> {
    let tol = tolerances(cli)?;
    let report = match &cli.command {
        Command::Compute(a) => {
            let x = read_matrix(&a.matrix)?;
            let f = load_function(&a.f)?;
            let mode = match a.mode {
                ModeArg::Auto => CalcMode::Auto,
                ModeArg::Diag => CalcMode::Diag,
                ModeArg::Newton => CalcMode::Newton,
                ModeArg::Hermite => CalcMode::Hermite,
            };
            let r = compute(&f, &x, mode, &tol)?;
            let _ = writeln!(err, "path: {}", r.path);
            for w in &r.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            return Ok(write_matrix(&r.value));
        }
        Command::Ddtable(a) => {
            let f = load_function(&a.f)?;
            let nodes = parse_complex_list(&a.nodes, "node")?;
            let t = dd_table(&f, &nodes)?;
            let mut r = ProbeReport::new(
                "ddtable",
                &[("i", ColumnKind::Real), ("j", ColumnKind::Real), ("value", ColumnKind::Complex)],
            );
            r.param("k", t.len());
            r.param("value", fmt_complex(t.value()));
            for i in 0..t.len() {
                for order in 0..t.len() - i {
                    let j = i + order;
                    r.push_row(vec![Cell::Real(i as f64), Cell::Real(j as f64), Cell::Complex(t.entry(i, order))]);
                }
            }
            r.warnings = t.warnings().to_vec();
            r
        }
        Command::Classify(a) => {
            let f = load_function(&a.f)?;
            let center = complex_arg(&a.center, "center")?;
            let mut cfg = RegConfig::with_seed(cli.seed);
            cfg.sampler.tuples_per_scale = a.samples;
            let v = match a.class {
                ClassArg::Ddb | ClassArg::Ddc => {
                    let scales = match &a.scales {
                        Some(t) => parse_real_list(t, "scale")?,
                        None => regclass::default_scales(f.domain(), center),
                    };
                    if matches!(a.class, ClassArg::Ddb) {
                        regclass::estimate_ddb(&f, a.k, center, &scales, &cfg)?
                    } else {
                        regclass::estimate_ddc(&f, a.k, center, &scales, &cfg)?
                    }
                }
                ClassArg::Tc => {
                    let probes = match &a.probes {
                        Some(t) => parse_complex_list(t, "probe")?,
                        None => default_probes(&f, center),
                    };
                    regclass::taylor_remainder(&f, a.k, center, &probes, &cfg)?
                }
            };
            verdict_report(&v, cli.seed)
        }
        Command::Probe(p) => match p {
            ProbeCommand::Opitz { nodes, eps, f } => {
                let f = load_function(f)?;
                probes::probe_opitz(&f, &parse_complex_list(nodes, "node")?, &parse_real_list(eps, "eps")?, &tol)?
            }
            ProbeCommand::Tcdis { n, eps } => probes::probe_tcdis(*n, *eps, &tol)?,
            ProbeCommand::Uniform3 { nodes, w, delta, k, f } => {
                let func = load_function(f)?;
                let xyz = parse_complex_list(nodes, "node")?;
                if xyz.len() != 3 {
                    return Err(CliError::Usage(format!("--nodes needs exactly 3 values, got {}", xyz.len())));
                }
                probes::probe_uniform3(&func, (xyz[0], xyz[1], xyz[2]), &parse_real_list(w, "w")?, *delta, *k, &tol)?
            }
            ProbeCommand::Continuity {
                matrix,
                direction,
                h,
                tcdis_sequence,
                f,
            } => {
                let func = load_function(f)?;
                if *tcdis_sequence {
                    let n = f
                        .source
                        .tcdis
                        .ok_or_else(|| CliError::Usage("--tcdis-sequence requires --tcdis N".into()))?;
                    probes::probe_continuity_sequence(&func, &MatrixC::zeros(2), &probes::tcdis_sequence(n)?, &tol)?
                } else {
                    let (Some(m), Some(d)) = (matrix, direction) else {
                        return Err(CliError::Usage("--matrix and --direction are required".into()));
                    };
                    let hs = match h {
                        Some(t) => parse_real_list(t, "h")?,
                        None => probes::default_h_list(),
                    };
                    probes::probe_continuity(&func, &read_matrix(m)?, &read_matrix(d)?, &hs, &tol)?
                }
            }
            ProbeCommand::Dimension {
                lambda,
                eps,
                k_list,
                family,
                f,
            } => {
                let func = load_function(f)?;
                let lambda = complex_arg(lambda, "lambda")?;
                let ks = parse_usize_list(k_list, "k")?;
                probes::probe_dimension_sweep(&func, lambda, *eps, &ks, *family, cli.seed, &tol)?
            }
        },
        Command::Spectrum(a) => {
            let x = read_matrix(&a.matrix)?;
            let s = analyze_spectrum(&x, &tol)?;
            let mut r = ProbeReport::new(
                "spectrum",
                &[
                    ("lambda", ColumnKind::Complex),
                    ("alg_mult", ColumnKind::Real),
                    ("min_poly_exp", ColumnKind::Real),
                ],
            );
            r.param("dim", s.dim);
            r.param("in_Z_k", s.in_z_k);
            r.param("diagonalizable", s.diagonalizable);
            for c in &s.clusters {
                r.push_row(vec![
                    Cell::Complex(c.lambda),
                    Cell::Real(c.alg_mult as f64),
                    Cell::Real(c.min_poly_exp as f64),
                ]);
            }
            r.warnings = s.warnings.clone();
            r
        }
    };
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(report.to_csv())
}

/// Runs one command. `argv[0]` is the program name.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = write!(err, "UsageError: {}", text.strip_prefix("error: ").unwrap_or(&text));
                    2
                }
            };
        }
    };
    let result = run_command(&cli, err).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
