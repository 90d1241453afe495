//! Command-line front end. Exit status: 0 success / yes, 1 negative verdict, 2 bad input.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Result;
use crate::intensity::{analyze_intensities, parse_intensity_csv};
use crate::network::{parse_network, Network, VertexPair};
use crate::ninesite;
use crate::pgst::{boundary_scan, pgst_certificate, rational_grid, Verdict};
use crate::photon::{correlation_matrix, ComplexMatrix, Statistics};
use crate::rational::{format_rational, parse_decimal, parse_rational, Rational};
use crate::spectral::{
    is_cospectral, is_latent_symmetric, is_strongly_cospectral, isospectral_reduction, reduction_charpoly,
    singlet_sites,
};
use crate::walk::{default_step, eigh, envelope_scan, evolution_csv, evolution_series, time_grid};

/// Window searched for the first transfer peak when `correlate` is given no `--tau`.
pub const FIRST_PEAK_WINDOW: f64 = 20.0;

#[derive(Parser, Debug)]
#[command(name = "latent", about = "Latent symmetry, state-transfer and two-photon analysis of weighted networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct PairArgs {
    /// Network document
    net: PathBuf,
    #[arg(short = 'u')]
    u: usize,
    #[arg(short = 'v')]
    v: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Stats {
    Boson,
    Dist,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Are u and v cospectral?
    Cospectral(PairArgs),
    /// Cospectral but not exchanged by any automorphism?
    Latent(PairArgs),
    /// Sites walk-equivalent with respect to the pair
    Singlets(PairArgs),
    /// Isospectral reduction onto {u, v}
    Reduce(PairArgs),
    /// Strong cospectrality, parity polynomials and the transfer verdict
    Cert {
        #[command(flatten)]
        pair: PairArgs,
        /// Print the machine-readable document instead of the text report
        #[arg(long)]
        json: bool,
    },
    /// Scan the nine-site potential E for loss of strong cospectrality
    ScanBoundary {
        #[arg(short = 'k', allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        emin: String,
        #[arg(long, allow_hyphen_values = true)]
        emax: String,
        #[arg(long)]
        step: String,
        /// Per-grid-point CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Site probabilities over time from a single excited site
    Evolve {
        net: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Running maximum of the u→v transfer fidelity
    Envelope {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        tmax: f64,
        /// Coarse step (defaults to 0.02 over the rounded spectral radius)
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-photon correlation matrix for one photon in each of u and v
    Correlate {
        #[command(flatten)]
        pair: PairArgs,
        /// Evolution time (defaults to the first transfer peak)
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<f64>,
        #[arg(long, default_value_t = FRAC_PI_2, allow_hyphen_values = true)]
        phase: f64,
        #[arg(long, value_enum, default_value = "boson")]
        stats: Stats,
        /// Halve off-diagonal entries for comparison with coincidence counts
        #[arg(long)]
        halved: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the matrix as a JSON document
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Transfer fidelities from measured output intensities
    Intensities {
        csv: PathBuf,
        #[arg(long)]
        bg: f64,
        #[arg(short = 'u')]
        u: usize,
        #[arg(short = 'v')]
        v: usize,
    },
}

/// The boundary scan takes its range flags with a single dash.
fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .map(|a| match a.as_str() {
            "-emin" | "-emax" | "-step" => format!("-{a}"),
            _ => a,
        })
        .collect()
}

fn read_network(path: &Path) -> Result<Network> {
    parse_network(&fs::read_to_string(path)?)
}

fn load_pair(args: &PairArgs) -> Result<(Network, VertexPair)> {
    let net = read_network(&args.net)?;
    let pair = VertexPair::new(args.u, args.v)?;
    pair.check(&net)?;
    Ok((net, pair))
}

fn parse_number(text: &str) -> Result<Rational> {
    if text.contains('.') {
        parse_decimal(text)
    } else {
        parse_rational(text)
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Cospectral(args) => {
            let (net, pair) = load_pair(&args)?;
            let yes = is_cospectral(&net, pair)?;
            writeln!(out, "cospectral: {}", yes_no(yes))?;
            Ok(i32::from(!yes))
        }
        Command::Latent(args) => {
            let (net, pair) = load_pair(&args)?;
            let yes = is_latent_symmetric(&net, pair)?;
            writeln!(out, "latent-symmetric: {}", yes_no(yes))?;
            Ok(i32::from(!yes))
        }
        Command::Singlets(args) => {
            let (net, pair) = load_pair(&args)?;
            let sites: Vec<String> = singlet_sites(&net, pair)?.iter().map(usize::to_string).collect();
            writeln!(out, "singlets: {}", sites.join(" "))?;
            Ok(0)
        }
        Command::Reduce(args) => {
            let (net, pair) = load_pair(&args)?;
            let red = isospectral_reduction(&net, pair)?;
            writeln!(out, "R_uu: {}", red.uu)?;
            writeln!(out, "R_vv: {}", red.vv)?;
            writeln!(out, "R_uv: {}", red.uv)?;
            writeln!(out, "bisymmetric: {}", yes_no(red.is_bisymmetric()))?;
            writeln!(out, "reduction_charpoly: {}", reduction_charpoly(&red))?;
            writeln!(out, "strongly_cospectral: {}", yes_no(is_strongly_cospectral(&net, pair)?))?;
            Ok(0)
        }
        Command::Cert { pair, json } => {
            let (net, pair) = load_pair(&pair)?;
            let cert = pgst_certificate(&net, pair)?;
            if json {
                writeln!(out, "{}", cert.to_json())?;
            } else {
                write!(out, "{}", cert.report_text())?;
            }
            Ok(i32::from(cert.verdict != Verdict::Certified))
        }
        Command::ScanBoundary { k, emin, emax, step, out: path } => {
            let k = parse_number(&k)?;
            let grid = rational_grid(&parse_number(&emin)?, &parse_number(&emax)?, &parse_number(&step)?)?;
            let report = boundary_scan(ninesite::with_parameters, ninesite::pair(), &k, &grid)?;
            writeln!(out, "k: {}", format_rational(&report.k))?;
            writeln!(out, "grid_points: {}", report.rows.len())?;
            let failures: Vec<String> = report.failures.iter().map(format_rational).collect();
            writeln!(out, "exact_failures: {}", failures.join(" "))?;
            for b in &report.brackets {
                writeln!(out, "bracket: [{}, {}]", format_rational(&b.lo), format_rational(&b.hi))?;
            }
            if let Some(p) = path {
                let mut csv = String::from("E,strongly_cospectral,common_root,min_root_distance\n");
                for r in &report.rows {
                    let d = r.min_root_distance.map_or(String::new(), |d| format!("{d:.16e}"));
                    csv += &format!("{},{},{},{d}\n", format_rational(&r.e), r.strongly_cospectral, r.common_root);
                }
                fs::write(p, csv)?;
            }
            Ok(0)
        }
        Command::Evolve { net, from, tmax, step, out: path } => {
            let sys = eigh(&read_network(&net)?)?;
            let taus = time_grid(tmax, step)?;
            let series = evolution_series(&sys, from, &taus)?;
            emit(out, path.as_deref(), &evolution_csv(&taus, &series))?;
            Ok(0)
        }
        Command::Envelope { pair, tmax, step, out: path } => {
            let (net, pair) = load_pair(&pair)?;
            let sys = eigh(&net)?;
            let step = step.unwrap_or_else(|| default_step(&sys));
            let report = envelope_scan(&sys, pair.u, pair.v, tmax, step)?;
            emit(out, path.as_deref(), &report.to_csv())?;
            writeln!(err, "best: tau={:.10} F={:.10} ({} peaks, {} samples)", report.best.tau, report.best.f,
                report.peaks.len(), report.samples)?;
            Ok(0)
        }
        Command::Correlate { pair, tau, phase, stats, halved, out: path, json } => {
            let (net, pair) = load_pair(&pair)?;
            let sys = eigh(&net)?;
            let tau = match tau {
                Some(t) => t,
                None => envelope_scan(&sys, pair.u, pair.v, FIRST_PEAK_WINDOW, default_step(&sys))?.best.tau,
            };
            let n = sys.n();
            let net_u = ComplexMatrix::new(n, n, sys.unitary(tau))?;
            let statistics = match stats {
                Stats::Boson => Statistics::Bosonic,
                Stats::Dist => Statistics::Distinguishable,
            };
            let mut gamma = correlation_matrix(&net_u, (pair.u, pair.v), phase, statistics, halved)?;
            gamma.tau = Some(tau);
            emit(out, path.as_deref(), &gamma.to_csv())?;
            if let Some(p) = json {
                fs::write(p, gamma.to_json() + "\n")?;
            }
            writeln!(err, "tau: {tau:.10}")?;
            Ok(0)
        }
        Command::Intensities { csv, bg, u, v } => {
            let rec = parse_intensity_csv(&fs::read_to_string(csv)?, bg)?;
            let f = analyze_intensities(&rec, u, v)?;
            if f.clamped {
                writeln!(err, "warning: background-subtracted fidelity outside [0, 1] was clamped")?;
            }
            writeln!(out, "F_{u},{v}: {:.16e}", f.f_uv)?;
            writeln!(out, "F_{v},{u}: {:.16e}", f.f_vu)?;
            Ok(0)
        }
    }
}

/// Runs one invocation (`args[0]` is the program name) and returns the exit status.
pub fn run<I>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(normalize_args(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
