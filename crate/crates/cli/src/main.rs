//! `resonance`: build model Hamiltonians, run the direct-measurement circuit
//! and scan rotation-angle trajectories.
//!
//! Exit codes: 0 success, 1 runtime error, 2 usage or validation error.

mod svg;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use resonance_core::gauss1d::{build_pauli, ModelParams};
use resonance_core::hamio::{parse_file, serialize, serialize_rounded, sha256_hex, Fixture, HamiltonianFile};
use resonance_core::linalg::sector_eig;
use resonance_core::pauli::{to_lcu, PauliSum};
use resonance_core::resonance::{
    grid, measure_eigenvalue, position, scan_grid, trajectories_to_csv, width, Branch, MeasureOptions,
    Measurement, RunMetadata, ScanOptions, ScanReport, Variant, DEFAULT_PAUSE_THRESHOLD,
    DEFAULT_SHIFT_X,
};
use resonance_core::sim::Readout;
use serde::Serialize;

const OUT_DIR_ENV: &str = "RESONANCE_OUT_DIR";
const MODEL_TARGET: Complex64 = Complex64::new(2.12, 0.0);
const H2MINUS_TARGET: Complex64 = Complex64::new(-0.995, -0.046);

#[derive(Parser)]
#[command(name = "resonance", version, about = "Complex-scaled resonances via LCU direct measurement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the qubit Hamiltonian of the 1D model to a .pham file
    Build(BuildArgs),
    /// Recover one complex eigenvalue through the circuit
    Measure(MeasureArgs),
    /// Follow eigenvalue trajectories over alpha and theta grids
    Scan(ScanArgs),
}

#[derive(Args, Clone)]
struct PotentialArgs {
    /// Number of Gaussian basis functions (one qubit each)
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Potential damping exponent
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.1)]
    lambda: f64,
    /// Potential height J in Hartree
    #[arg(long = "coupling", allow_hyphen_values = true, default_value_t = 0.8)]
    coupling: f64,
    /// Ratio between successive basis exponents
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.45)]
    ratio: f64,
}

#[derive(Args, Clone)]
struct SourceArgs {
    /// Bundled Hamiltonian instead of the model (h2minus, model-n5)
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// Read the Hamiltonian from a .pham file
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct CircuitArgs {
    /// Recovery variant: shift, cubic or square
    #[arg(long, default_value = "shift", value_parser = parse_variant)]
    variant: Variant,
    /// Readout: exact or shots
    #[arg(long, default_value = "exact")]
    mode: String,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Energy shift of the second circuit (shift variant)
    #[arg(long, default_value_t = DEFAULT_SHIFT_X, allow_hyphen_values = true)]
    x: f64,
    /// Sign of the recovered imaginary part: minus or plus
    #[arg(long, default_value = "minus", value_parser = parse_branch)]
    branch: Branch,
    /// Eigenvalue to follow, e.g. 2.12-0.02i
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    target: Option<Complex64>,
    /// Electron-number sector
    #[arg(long)]
    electrons: Option<usize>,
    /// Output directory (defaults to $RESONANCE_OUT_DIR, then the working directory)
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.65)]
    alpha: f64,
    /// Rotation angle in radians
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.16)]
    theta: f64,
    /// Output file (defaults to model_n<N>.pham in the output directory)
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write coefficients losslessly instead of rounding to six decimals
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.65)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.16)]
    theta: f64,
    /// Print both branches and the raw probabilities
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Alpha grid: start:stop:step or a comma list
    #[arg(long)]
    alpha: Option<String>,
    /// Theta grid: start:stop:step or a comma list
    #[arg(long)]
    theta: Option<String>,
    /// Speeds above this (Hartree/rad) are not reported as pause points
    #[arg(long, default_value_t = DEFAULT_PAUSE_THRESHOLD)]
    pause_threshold: f64,
    /// Also write scan.svg
    #[arg(long)]
    svg: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<resonance_core::Error> for CliError {
    fn from(e: resonance_core::Error) -> Self {
        match e {
            resonance_core::Error::InvalidParameter(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: resonance_core::Error| e.to_string())
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse().map_err(|e: resonance_core::Error| e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| format!("{s:?} is not a complex number (expected e.g. 2.12-0.02i)"))
}

/// `start:stop:step`, a comma list, or a single value.
fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return usage("empty grid");
    }
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("{t:?} in grid {s:?} is not a number")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return usage(format!("grid {s:?} must be start:stop:step"));
        }
        return Ok(grid(number(parts[0])?, number(parts[1])?, number(parts[2])?)?);
    }
    s.split(',').filter(|t| !t.trim().is_empty()).map(number).collect()
}

fn out_dir(flag: &Option<PathBuf>) -> CliResult<PathBuf> {
    let dir = flag
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn model_params(p: &PotentialArgs, alpha: f64, theta: f64) -> ModelParams {
    ModelParams {
        lambda: p.lambda,
        coupling: p.coupling,
        alpha,
        theta,
        n_basis: p.n,
        ratio: p.ratio,
    }
}

fn model_provenance(p: &ModelParams) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("source".to_string(), "model".to_string()),
        ("lambda".to_string(), p.lambda.to_string()),
        ("coupling".to_string(), p.coupling.to_string()),
        ("n_basis".to_string(), p.n_basis.to_string()),
        ("ratio".to_string(), p.ratio.to_string()),
    ])
}

/// A Hamiltonian read from a fixture or file.
struct Tabulated {
    file: HamiltonianFile,
    default_target: Option<Complex64>,
    provenance: BTreeMap<String, String>,
}

fn load_tabulated(src: &SourceArgs) -> CliResult<Option<Tabulated>> {
    if let Some(name) = &src.fixture {
        let Some(fixture) = Fixture::from_name(name) else {
            let known: Vec<&str> = Fixture::ALL.iter().map(|f| f.name()).collect();
            return usage(format!("unknown fixture {name:?} (known: {})", known.join(", ")));
        };
        let default_target = match fixture {
            Fixture::ModelN5 => MODEL_TARGET,
            Fixture::H2Minus => H2MINUS_TARGET,
        };
        return Ok(Some(Tabulated {
            file: fixture.load(),
            default_target: Some(default_target),
            provenance: BTreeMap::from([
                ("source".to_string(), format!("fixture:{}", fixture.name())),
                ("sha256".to_string(), fixture.sha256()),
            ]),
        }));
    }
    if let Some(path) = &src.input {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        let file = parse_file(&text).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
        let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        return Ok(Some(Tabulated {
            file,
            default_target: None,
            provenance: BTreeMap::from([
                ("source".to_string(), format!("file:{name}")),
                ("sha256".to_string(), sha256_hex(text.as_bytes())),
            ]),
        }));
    }
    Ok(None)
}

fn readout(c: &CircuitArgs) -> CliResult<Readout> {
    match c.mode.as_str() {
        "exact" => Ok(Readout::Exact),
        "shots" if c.shots == 0 => usage("--shots must be positive in shots mode"),
        "shots" => Ok(Readout::Shots {
            shots: c.shots,
            seed: c.seed,
        }),
        other => usage(format!("unknown mode {other:?} (exact or shots)")),
    }
}

fn measure_options(c: &CircuitArgs) -> CliResult<MeasureOptions> {
    if c.x == 0.0 || !c.x.is_finite() {
        return usage("--x must be finite and non-zero");
    }
    Ok(MeasureOptions {
        variant: c.variant,
        readout: readout(c)?,
        x: c.x,
        branch: c.branch,
    })
}

fn electrons_for(c: &CircuitArgs, file: Option<&HamiltonianFile>) -> CliResult<usize> {
    if let Some(n) = c.electrons {
        return Ok(n);
    }
    match file.and_then(|f| f.metadata("electrons")) {
        Some(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("bad electrons header {v:?}"))),
        None => Ok(1),
    }
}

fn cmd_build(args: &BuildArgs) -> CliResult<()> {
    let params = model_params(&args.potential, args.alpha, args.theta);
    params.validate()?;
    let sum = build_pauli(&params)?;
    let comments = vec![
        "one-electron model potential V(x) = (x^2/2 - J) exp(-lambda x^2) + J".to_string(),
        format!("lambda = {}", params.lambda),
        format!("J = {}", params.coupling),
        format!("theta = {}", params.theta),
        format!("alpha = {}", params.alpha),
        format!("basis = gaussian n={} ratio={}", params.n_basis, params.ratio),
        format!("qubits = {}", sum.n_qubits()),
    ];
    let path = match &args.output {
        Some(p) => p.clone(),
        None => out_dir(&args.out_dir)?.join(format!("model_n{}.pham", params.n_basis)),
    };
    println!("{} terms on {} qubits", sum.len(), sum.n_qubits());
    let text = if args.exact {
        serialize(&comments, &sum)
    } else {
        serialize_rounded(&comments, &sum)
    };
    write(&path, &text)
}

#[derive(Serialize)]
struct MeasureReport<'a> {
    provenance: BTreeMap<String, String>,
    n_electrons: usize,
    target: Complex64,
    lcu_norm: f64,
    lcu_terms: usize,
    total_qubits: usize,
    measurement: &'a Measurement,
    energy_diag: Complex64,
    error_vs_diag: f64,
    position: f64,
    width: f64,
}

fn cmd_measure(args: &MeasureArgs) -> CliResult<()> {
    let opts = measure_options(&args.circuit)?;
    let tabulated = load_tabulated(&args.source)?;
    let (h, provenance, default_target): (PauliSum, _, _) = match &tabulated {
        Some(t) => (t.file.sum.clone(), t.provenance.clone(), t.default_target),
        None => {
            let params = model_params(&args.potential, args.alpha, args.theta);
            params.validate()?;
            let mut prov = model_provenance(&params);
            prov.insert("alpha".into(), params.alpha.to_string());
            prov.insert("theta".into(), params.theta.to_string());
            (build_pauli(&params)?, prov, Some(MODEL_TARGET))
        }
    };
    let Some(target) = args.circuit.target.or(default_target) else {
        return usage("--target is required for --input files");
    };
    let n_electrons = electrons_for(&args.circuit, tabulated.as_ref().map(|t| &t.file))?;
    let sector = sector_eig(&h, n_electrons)?;
    let dec = &sector.decomposition;
    let (k, _) = dec
        .nearest(target)
        .ok_or_else(|| CliError::Runtime(format!("sector with {n_electrons} electrons is empty")))?;
    let m = measure_eigenvalue(&h, &dec.vectors[k], &opts)?;
    let lcu = to_lcu(&h)?;
    let diag = dec.values[k];
    let report = MeasureReport {
        provenance,
        n_electrons,
        target,
        lcu_norm: lcu.norm(),
        lcu_terms: lcu.n_terms(),
        total_qubits: lcu.total_qubits(),
        measurement: &m,
        energy_diag: diag,
        error_vs_diag: (m.energy - diag).norm(),
        position: position(m.energy),
        width: width(m.energy),
    };
    let mode = match opts.readout {
        Readout::Exact => "exact".to_string(),
        Readout::Shots { shots, seed } => format!("{shots} shots, seed {seed}"),
    };
    println!(
        "E_theta = {:.7}  (variant {}, branch {}, {mode})",
        m.energy, m.variant, m.branch
    );
    println!("E       = {:.7} Hartree", report.position);
    println!("Gamma   = {:.7} Hartree", report.width);
    println!("diagonalization {:.7}, |diff| {:.2e}", diag, report.error_vs_diag);
    if args.verbose {
        println!("branch plus  {:.7}", m.energy_plus);
        println!("branch minus {:.7}", m.energy_minus);
        let i = &m.inputs;
        println!(
            "p = {:.8}, p' = {:.8}, A = {:.6}, A' = {:.6}, shift = {:.6}",
            i.p, i.p_prime, i.a, i.a_prime, i.shift
        );
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    write(&out_dir(&args.circuit.out_dir)?.join("measure.json"), &(json + "\n"))
}

fn cmd_scan(args: &ScanArgs) -> CliResult<()> {
    let opts = measure_options(&args.circuit)?;
    if !(args.pause_threshold >= 0.0) {
        return usage("--pause-threshold must be non-negative");
    }
    let tabulated = load_tabulated(&args.source)?;
    let n_electrons = electrons_for(&args.circuit, tabulated.as_ref().map(|t| &t.file))?;
    let scan_opts = ScanOptions {
        n_electrons,
        measure: opts,
    };
    let (trajectories, seed_target, extra) = match &tabulated {
        Some(t) => {
            if args.alpha.is_some() || args.theta.is_some() {
                return usage("a tabulated Hamiltonian has fixed alpha and theta; drop --alpha/--theta");
            }
            let Some(theta) = t.file.metadata_f64("theta") else {
                return usage("tabulated Hamiltonian has no `theta` header");
            };
            let alpha = t.file.metadata_f64("alpha").unwrap_or(1.0);
            let Some(target) = args.circuit.target.or(t.default_target) else {
                return usage("--target is required for --input files");
            };
            let sum = &t.file.sum;
            let tr = scan_grid(|_, _| Ok(sum.clone()), &[alpha], &[theta], target, &scan_opts)?;
            (tr, target, t.provenance.clone())
        }
        None => {
            let alphas = parse_grid(args.alpha.as_deref().unwrap_or("0.50:0.80:0.05"))?;
            let thetas = parse_grid(args.theta.as_deref().unwrap_or("0.10:0.24:0.01"))?;
            if alphas.is_empty() || thetas.is_empty() {
                return usage("empty grid");
            }
            let base = model_params(&args.potential, alphas[0], thetas[0]);
            base.validate()?;
            let target = args.circuit.target.unwrap_or(MODEL_TARGET);
            let tr = scan_grid(
                |alpha, theta| build_pauli(&ModelParams { alpha, theta, ..base }),
                &alphas,
                &thetas,
                target,
                &scan_opts,
            )?;
            (tr, target, model_provenance(&base))
        }
    };
    for p in trajectories.iter().flat_map(|t| &t.points) {
        if let Some(w) = &p.warning {
            eprintln!("warning: alpha {}: {w}", p.alpha);
        }
    }
    let metadata = RunMetadata {
        variant: opts.variant,
        x: opts.x,
        branch: opts.branch,
        readout: opts.readout,
        n_electrons,
        seed_target,
        pause_threshold: args.pause_threshold,
        extra,
    };
    let report = ScanReport::new(metadata, trajectories);
    match &report.stationary {
        Some(s) => {
            let verdict = if report.pause {
                "pause point".to_string()
            } else {
                format!("above pause threshold {}, not a pause point", args.pause_threshold)
            };
            println!(
                "slowest point: alpha {}, theta {}, E_theta = {:.5}, E = {:.5}, Gamma = {:.5}",
                s.alpha, s.theta, s.energy, s.position, s.width
            );
            println!("speed {:.4} Hartree/rad: {verdict}", s.speed);
        }
        None => {
            let p = &report.trajectories[0].points[0];
            println!(
                "single point: alpha {}, theta {}, E_theta = {:.6}, E = {:.6}, Gamma = {:.6}",
                p.alpha,
                p.theta,
                p.energy,
                position(p.energy),
                width(p.energy)
            );
            println!("no trajectory speed available: not a pause point");
        }
    }
    let dir = out_dir(&args.circuit.out_dir)?;
    write(&dir.join("scan.csv"), &trajectories_to_csv(&report.trajectories))?;
    write(&dir.join("scan.json"), &(report.to_json() + "\n"))?;
    if args.svg {
        write(
            &dir.join("scan.svg"),
            &svg::render(&report.trajectories, report.stationary.as_ref()),
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a),
        Command::Measure(a) => cmd_measure(a),
        Command::Scan(a) => cmd_scan(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
