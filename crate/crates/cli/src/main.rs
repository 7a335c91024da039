use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use johnson_pst::design::{design, hamiltonian_in_adjacency_basis, DesignInput};
use johnson_pst::document::DesignDocument;
use johnson_pst::evolution::fidelity_sweep;
use johnson_pst::exact::ExactSpectrum;
use johnson_pst::graph::{IntersectionArray, DEFAULT_DENSE_CAP};
use johnson_pst::spectral::Spectrum;
use johnson_pst::spin::{OracleCaps, DEFAULT_SPIN_CAP};
use johnson_pst::subset::binomial;
use johnson_pst::verify::{verify_design, Oracle, VerifyReport, CERTIFY_TOL};
use johnson_pst::PstError;

/// Perfect GHZ-state transfer on Johnson networks J(2m, m).
#[derive(Debug, Parser)]
#[command(name = "johnson-pst", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Design couplings and write a JSON design document.
    ///
    /// Couplings realise exp(-i t0 E_k) = exp(i theta) P_m(x_k). A Hamiltonian
    /// built with half these couplings completes the transfer at 2 t0.
    Design(DesignArgs),
    /// Certify a design document against evolution oracles.
    Verify(VerifyArgs),
    /// Write stratum amplitudes on a uniform time grid as CSV.
    Sweep(SweepArgs),
    /// Print the spectral data of J(2m, m).
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
struct DesignArgs {
    #[arg(long)]
    m: u32,
    /// Transfer time.
    #[arg(long, default_value_t = 1.0)]
    t0: f64,
    /// Phase in radians.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta_pi")]
    theta: Option<f64>,
    /// Phase as a multiple of pi.
    #[arg(long, allow_negative_numbers = true)]
    theta_pi: Option<f64>,
    /// Branch integers l_0..l_m, comma separated, in descending support order.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    l_offsets: Option<Vec<i64>>,
    /// Output path for the JSON document; `-` writes it to standard output
    /// instead of the table.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleChoice {
    Spectral,
    Dense,
    Heisenberg,
    All,
}

#[derive(Debug, Args)]
struct Caps {
    /// Largest vertex count for dense evolution.
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: u128,
    /// Largest spin Hilbert space dimension 2^(2m).
    #[arg(long, default_value_t = DEFAULT_SPIN_CAP)]
    spin_cap: u128,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    design: PathBuf,
    #[arg(long, value_enum, default_value_t = OracleChoice::Spectral)]
    oracle: OracleChoice,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Debug, Args)]
struct SweepArgs {
    design: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t_min: f64,
    /// Defaults to 2 t0.
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long, default_value_t = 201)]
    steps: usize,
    /// CSV output path; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    m: u32,
    /// Print exact rationals.
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<PstError> for CliError {
    fn from(e: PstError) -> Self {
        match e {
            PstError::Domain(_) | PstError::Document(_) => CliError::Usage(e.to_string()),
            PstError::Capacity { .. } => CliError::Infeasible(e.to_string()),
            PstError::Io(ref msg) => CliError::Io {
                path: "output".into(),
                source: io::Error::other(msg.clone()),
            },
            _ => CliError::Failed(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn stdout_err(source: io::Error) -> CliError {
    CliError::Io {
        path: "stdout".into(),
        source,
    }
}

fn load(path: &Path) -> Result<DesignDocument, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(DesignDocument::from_json(&text)?)
}

fn cmd_design(a: DesignArgs) -> Result<ExitCode, CliError> {
    let theta = match (a.theta, a.theta_pi) {
        (_, Some(x)) => x * std::f64::consts::PI,
        (Some(t), None) => t,
        (None, None) => 0.0,
    };
    let mut input = DesignInput::new(a.m).t0(a.t0).theta(theta);
    if let Some(l) = a.l_offsets {
        input = input.offsets(l);
    }
    let (d, sp) = design(&input)?;
    let doc = DesignDocument::new(d);
    let json = doc.to_json()?;
    let d = &doc.design;

    match a.output.as_deref() {
        Some(p) if p == Path::new("-") => {
            println!("{json}");
            return Ok(ExitCode::SUCCESS);
        }
        Some(p) => fs::write(p, json + "\n").map_err(io_err(p))?,
        None => {}
    }
    let mut out = io::stdout().lock();
    let w = &mut out;
    (|| -> io::Result<()> {
        writeln!(w, "J(2m, m) with m = {}, t0 = {}, theta = {}", d.m(), d.input.t0, d.input.theta)?;
        writeln!(w, "{:>3}  {:>24}", "l", "J_l")?;
        for (l, j) in d.couplings.iter().enumerate() {
            writeln!(w, "{l:>3}  {j:>24.16e}")?;
        }
        writeln!(w)?;
        writeln!(w, "{:>3}  {:>24}  {:>4}  {:>4}  {:>24}", "k", "x_k", "f_k", "l_k", "E_k")?;
        for k in 0..d.couplings.len() {
            writeln!(
                w,
                "{k:>3}  {:>24.16e}  {:>4}  {:>4}  {:>24.16e}",
                d.measure.points[k], d.f_bits[k], d.input.l_offsets[k], d.hamiltonian_eigenvalues[k]
            )?;
        }
        let c = hamiltonian_in_adjacency_basis(d, &sp.qd);
        writeln!(w)?;
        writeln!(w, "H = sum_j c_j A^j:")?;
        for (j, c) in c.iter().enumerate() {
            writeln!(w, "  c_{j} = {c:.16e}")?;
        }
        Ok(())
    })()
    .map_err(stdout_err)?;

    if let Some(path) = a.output {
        writeln!(out, "\nwrote {}", path.display()).map_err(stdout_err)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_report(r: &VerifyReport) {
    println!("stored measure deviation: {:.3e}", r.measure_deviation);
    println!("coupling residual |J - P W E|: {:.3e}", r.coupling_residual);
    println!("phase mismatch of stored energies: {:.3e}", r.phase_mismatch);
    for (name, check) in [("spectral", r.spectral), ("dense", r.dense)] {
        if let Some(c) = check {
            println!(
                "{name}: |f_m(t0)| = {:.12}, max intermediate leakage = {:.3e}",
                c.amplitude.norm(),
                c.leakage
            );
        }
    }
    if let Some(h) = r.heisenberg {
        println!(
            "heisenberg ({:?} space, dim {}): |<B|psi>| = {:.12}, GHZ fidelity = {:.12}, relative phase = {:.3e}, global phase = {:.12}, distance to ideal = {:.3e}",
            h.space,
            h.dimension,
            h.amplitude_to_antipode.norm(),
            h.ghz_fidelity,
            h.relative_phase,
            h.global_phase,
            h.ideal_distance
        );
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, CliError> {
    let doc = load(&a.design)?;
    let oracles: Vec<Oracle> = match a.oracle {
        OracleChoice::Spectral => vec![Oracle::Spectral],
        OracleChoice::Dense => vec![Oracle::Dense],
        OracleChoice::Heisenberg => vec![Oracle::Heisenberg],
        OracleChoice::All => Oracle::ALL.to_vec(),
    };
    let caps = OracleCaps {
        dense: a.caps.dense_cap,
        spin: a.caps.spin_cap,
    };
    let report = match verify_design(&doc.design, &oracles, caps, CERTIFY_TOL) {
        Err(e @ PstError::Capacity { .. }) => {
            let names: Vec<&str> = oracles.iter().map(|o| o.name()).collect();
            return Err(CliError::Infeasible(format!(
                "oracle {} infeasible for m = {}: {e}",
                names.join(","),
                doc.design.m()
            )));
        }
        other => other?,
    };
    print_report(&report);
    if report.passed() {
        println!("certified at tolerance {:e}", report.tol);
        Ok(ExitCode::SUCCESS)
    } else {
        Err(CliError::Failed(format!(
            "certification failed at tolerance {:e}",
            report.tol
        )))
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode, CliError> {
    if a.steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {}", a.steps)));
    }
    let doc = load(&a.design)?;
    let d = &doc.design;
    let spectrum = Spectrum::johnson(d.m())?;
    let t_max = a.t_max.unwrap_or(2.0 * d.input.t0);
    let series = fidelity_sweep(d, &spectrum.eigen, a.t_min, t_max, a.steps)?;
    match a.output {
        Some(path) => {
            let file = fs::File::create(&path).map_err(io_err(&path))?;
            series.write_csv(io::BufWriter::new(file)).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                source: io::Error::other(e.to_string()),
            })?;
            if let Some((t, peak)) = series.peak() {
                eprintln!("wrote {} rows to {}; max |f_m| = {peak:.12} at t = {t}", series.len(), path.display());
            }
        }
        None => series.write_csv(io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<ExitCode, CliError> {
    let m = a.m;
    if m == 0 {
        return Err(CliError::Usage("m must be at least 1".into()));
    }
    let ia = IntersectionArray::johnson(m as u64);
    let valency = |l: usize| binomial(m as u64, l as u64).map(|c| c * c);
    if a.exact {
        let sp = ExactSpectrum::johnson(m)?;
        println!("{:>3}  {:>8}  {:>24}", "k", "x_k", "gamma_k");
        for (k, (x, g)) in sp.points.iter().zip(&sp.weights).enumerate() {
            println!("{k:>3}  {x:>8}  {g:>24}");
        }
        println!();
        println!("{:>3}  {:>12}  {:>12}  {:>12}", "l", "kappa_l", "alpha_l", "omega_l");
        for l in 0..=m as usize {
            let omega = if l == 0 { "-".to_string() } else { sp.qd.omega[l - 1].to_string() };
            println!(
                "{l:>3}  {:>12}  {:>12}  {omega:>12}",
                valency(l).map_or("overflow".into(), |v| v.to_string()),
                sp.qd.alpha[l]
            );
        }
    } else {
        let sp = Spectrum::johnson(m)?;
        let measure = sp.measure();
        println!("{:>3}  {:>24}  {:>24}", "k", "x_k", "gamma_k");
        for (k, (x, g)) in measure.points.iter().zip(&measure.weights).enumerate() {
            println!("{k:>3}  {x:>24.16e}  {g:>24.16e}");
        }
        println!();
        println!("{:>3}  {:>24}  {:>24}  {:>24}", "l", "kappa_l", "alpha_l", "omega_l");
        for l in 0..=m as usize {
            let omega = if l == 0 { "-".to_string() } else { format!("{:.16e}", sp.qd.omega()[l - 1]) };
            println!(
                "{l:>3}  {:>24}  {:>24.16e}  {omega:>24}",
                valency(l).map_or("overflow".into(), |v| v.to_string()),
                sp.qd.alpha()[l]
            );
        }
    }
    println!();
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    println!("intersection array {{{}; {}}}", join(&ia.b), join(&ia.c));
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Design(a) => cmd_design(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Spectrum(a) => cmd_spectrum(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
