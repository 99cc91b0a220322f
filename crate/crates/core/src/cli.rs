//! The `scars` command line.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numeric-domain
//! error, 4 I/O or malformed-file error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::evolution::{lifetime_consistency, survival_curve, SurvivalCurve};
use crate::grid::{correlation_where, eval_grid, read_csv, render_pgm, write_csv, GridSource};
use crate::orbits::{fit_orbit_phase, tube_fraction, OrbitPath};
use crate::report::{
    to_json, write_json, ComparisonDocument, EvolveFooter, OrbitDocument, PacketDocument,
    ShellDocument, ZerosDocument,
};
use crate::scar::{build_packet, lifetime_report, AsymptoticDensity, ScarPacket};
use crate::special_functions::bessel_zero;
use crate::spectrum::{find_shell_with, BilliardConfig, Shell, ShellSearch};

/// Tube half-width (in units of R) used for orbit fitting and localization.
pub const TUBE_HALF_WIDTH: f64 = 0.15;
/// Orbit phases tried per symmetry period when fitting the orientation.
pub const PHASE_SAMPLES: usize = 36;

#[derive(Debug, Parser)]
#[command(
    name = "scars",
    version,
    about = "Scar wave packets of the circular billiard"
)]
struct Cli {
    /// Worker threads for grid evaluation (outputs do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first zeros of J_l.
    Zeros(ZerosArgs),
    /// Find a degenerate (p, q) shell.
    Shell(ShellArgs),
    /// Build a packet over a shell and report its lifetime.
    Scar(ScarArgs),
    /// Sample the survival probability of a packet.
    Evolve(EvolveArgs),
    /// Evaluate a density grid (exact packet or asymptotic ridges).
    Grid(GridArgs),
    /// Emit a closed orbit as a JSON polyline.
    Orbit(OrbitArgs),
    /// Render a grid CSV as a banded PGM image.
    Render(RenderArgs),
    /// Run shell, scar, evolve, grid and render in one go.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
struct ZerosArgs {
    #[arg(long)]
    l: u32,
    #[arg(long, default_value_t = 10)]
    count: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct UnitArgs {
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

#[derive(Debug, Clone, Args)]
struct ShellOpts {
    #[arg(long, default_value_t = 1)]
    p: u32,
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long, default_value_t = 120)]
    l0: u32,
    #[arg(long = "half-width", default_value_t = 3)]
    half_width: u32,
    /// Search l0 over l0 +- window.
    #[arg(long = "l0-window", default_value_t = 0)]
    l0_window: u32,
    #[command(flatten)]
    units: UnitArgs,
}

#[derive(Debug, Clone, Args)]
struct PacketOpts {
    #[command(flatten)]
    shell: ShellOpts,
    #[arg(long = "delta-phi", default_value_t = 0.25)]
    delta_phi: f64,
    /// Keep only the K members closest to l0.
    #[arg(long)]
    members: Option<usize>,
}

#[derive(Debug, Args)]
struct ShellArgs {
    #[command(flatten)]
    shell: ShellOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScarArgs {
    #[command(flatten)]
    packet: PacketOpts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    packet: PacketOpts,
    #[arg(long = "t-max-over-T", default_value_t = 40.0)]
    t_max_over_t: f64,
    #[arg(long, default_value_t = 2048)]
    steps: usize,
    /// CSV destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON footer destination (stderr if omitted).
    #[arg(long)]
    footer: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    Exact,
    Asymptotic,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    packet: PacketOpts,
    #[arg(long, value_enum, default_value_t = SourceKind::Exact)]
    source: SourceKind,
    #[arg(long, default_value_t = 512)]
    cells: usize,
    /// Wall angle of the first orbit vertex (asymptotic source).
    #[arg(long, default_value_t = 0.0)]
    phi0: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    #[arg(long, default_value_t = 1)]
    p: u32,
    #[arg(long, default_value_t = 3)]
    q: u32,
    #[arg(long, default_value_t = 0.0)]
    phi0: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long)]
    grid: PathBuf,
    #[arg(long, default_value_t = 10)]
    levels: u32,
    #[arg(long)]
    out: PathBuf,
}

/// Pipeline flags; every one may also come from the `--config` JSON file,
/// keyed by the flag name. Flags win over the file.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
struct PipelineArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    l0: Option<u32>,
    #[arg(long = "half-width")]
    #[serde(rename = "half-width")]
    half_width: Option<u32>,
    #[arg(long = "l0-window")]
    #[serde(rename = "l0-window")]
    l0_window: Option<u32>,
    #[arg(long = "delta-phi")]
    #[serde(rename = "delta-phi")]
    delta_phi: Option<f64>,
    #[arg(long)]
    members: Option<usize>,
    #[arg(long = "t-max-over-T")]
    #[serde(rename = "t-max-over-T")]
    t_max_over_t: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    #[arg(long = "out-dir")]
    #[serde(rename = "out-dir")]
    out_dir: Option<PathBuf>,
}

impl PipelineArgs {
    fn merged_with(self, file: PipelineArgs) -> PipelineArgs {
        PipelineArgs {
            config: self.config,
            p: self.p.or(file.p),
            q: self.q.or(file.q),
            l0: self.l0.or(file.l0),
            half_width: self.half_width.or(file.half_width),
            l0_window: self.l0_window.or(file.l0_window),
            delta_phi: self.delta_phi.or(file.delta_phi),
            members: self.members.or(file.members),
            t_max_over_t: self.t_max_over_t.or(file.t_max_over_t),
            steps: self.steps.or(file.steps),
            cells: self.cells.or(file.cells),
            levels: self.levels.or(file.levels),
            radius: self.radius.or(file.radius),
            mass: self.mass.or(file.mass),
            hbar: self.hbar.or(file.hbar),
            out_dir: self.out_dir.or(file.out_dir),
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("scars: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        // ignore a second initialization inside one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match cli.command {
        Command::Zeros(a) => cmd_zeros(a),
        Command::Shell(a) => {
            let shell = shell_from(&a.shell)?;
            emit(&to_json(&ShellDocument::from(&shell))?, a.out.as_deref())
        }
        Command::Scar(a) => {
            let packet = packet_from(&a.packet)?;
            let doc = PacketDocument::new(&packet, lifetime_report(&packet));
            emit(&to_json(&doc)?, a.out.as_deref())
        }
        Command::Evolve(a) => cmd_evolve(a),
        Command::Grid(a) => cmd_grid(a),
        Command::Orbit(a) => {
            let path = OrbitPath::new(a.p, a.q, a.phi0, a.radius)?;
            emit(&to_json(&OrbitDocument::from(&path))?, a.out.as_deref())
        }
        Command::Render(a) => render_pgm(&read_csv(&a.grid)?, &a.out, a.levels),
        Command::Pipeline(a) => cmd_pipeline(a),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn config_from(u: &UnitArgs) -> Result<BilliardConfig> {
    BilliardConfig::new(u.radius, u.mass, u.hbar)
}

fn shell_from(o: &ShellOpts) -> Result<Shell> {
    let config = config_from(&o.units)?;
    let search = ShellSearch {
        l0_window: o.l0_window,
        ..ShellSearch::default()
    };
    find_shell_with(&config, o.p, o.q, o.l0, o.half_width, &search)
}

fn packet_from(o: &PacketOpts) -> Result<ScarPacket> {
    let mut shell = shell_from(&o.shell)?;
    if let Some(k) = o.members {
        shell = shell.truncated(k)?;
    }
    build_packet(&shell, o.delta_phi)
}

fn cmd_zeros(a: ZerosArgs) -> Result<()> {
    let zeros = (1..=a.count)
        .map(|n| bessel_zero(a.l, n))
        .collect::<Result<Vec<_>>>()?;
    emit(&to_json(&ZerosDocument::new(a.l, zeros))?, a.out.as_deref())
}

fn survival_csv(curve: &SurvivalCurve) -> String {
    let mut s = String::from("# format_version=1\nt_over_T,survival\n");
    for (t, c) in curve.times.iter().zip(&curve.values) {
        let _ = writeln!(s, "{t:.16e},{c:.16e}");
    }
    s
}

fn check_evolve(t_max_over_t: f64, steps: usize) -> Result<()> {
    if !(t_max_over_t > 0.0) || !t_max_over_t.is_finite() {
        return Err(Error::Domain(format!(
            "t-max-over-T must be positive, got {t_max_over_t}"
        )));
    }
    if steps < 2 {
        return Err(Error::Domain(format!(
            "steps must be at least 2, got {steps}"
        )));
    }
    Ok(())
}

fn evolve_outputs(
    packet: &ScarPacket,
    t_max_over_t: f64,
    steps: usize,
) -> Result<(String, String)> {
    check_evolve(t_max_over_t, steps)?;
    let curve = survival_curve(packet, t_max_over_t, steps);
    let report = lifetime_consistency(packet, t_max_over_t);
    let footer = EvolveFooter::new(&report, lifetime_report(packet).t_classical);
    Ok((survival_csv(&curve), to_json(&footer)?))
}

fn cmd_evolve(a: EvolveArgs) -> Result<()> {
    let packet = packet_from(&a.packet)?;
    let (csv, footer) = evolve_outputs(&packet, a.t_max_over_t, a.steps)?;
    emit(&csv, a.out.as_deref())?;
    match &a.footer {
        Some(p) => fs::write(p, footer)?,
        None => eprint!("{footer}"),
    }
    Ok(())
}

fn cmd_grid(a: GridArgs) -> Result<()> {
    let packet = packet_from(&a.packet)?;
    let grid = match a.source {
        SourceKind::Exact => eval_grid(GridSource::Packet(&packet), a.cells)?,
        SourceKind::Asymptotic => {
            let asym = AsymptoticDensity::new(&packet.shell, packet.delta_phi)?.with_phase(a.phi0);
            eval_grid(GridSource::Asymptotic(&asym), a.cells)?
        }
    };
    write_csv(&grid, &a.out)
}

fn read_config(path: &Path) -> Result<PipelineArgs> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn cmd_pipeline(a: PipelineArgs) -> Result<()> {
    let file = match &a.config {
        Some(p) => read_config(p)?,
        None => PipelineArgs::default(),
    };
    let a = a.merged_with(file);
    let packet_opts = PacketOpts {
        shell: ShellOpts {
            p: a.p.unwrap_or(1),
            q: a.q.unwrap_or(3),
            l0: a.l0.unwrap_or(120),
            half_width: a.half_width.unwrap_or(3),
            l0_window: a.l0_window.unwrap_or(0),
            units: UnitArgs {
                radius: a.radius.unwrap_or(1.0),
                mass: a.mass.unwrap_or(1.0),
                hbar: a.hbar.unwrap_or(1.0),
            },
        },
        delta_phi: a.delta_phi.unwrap_or(0.25),
        members: a.members,
    };
    let t_max = a.t_max_over_t.unwrap_or(40.0);
    let steps = a.steps.unwrap_or(2048);
    let cells = a.cells.unwrap_or(512);
    let levels = a.levels.unwrap_or(10);
    let out_dir = a.out_dir.unwrap_or_else(|| PathBuf::from("scars-out"));
    check_evolve(t_max, steps)?;
    if !(2..=64).contains(&levels) {
        return Err(Error::Domain(format!("levels {levels} outside [2, 64]")));
    }

    let packet = packet_from(&packet_opts)?;
    let shell = packet.shell.clone();
    let lifetime = lifetime_report(&packet);
    let (csv, footer) = evolve_outputs(&packet, t_max, steps)?;

    let exact = eval_grid(GridSource::Packet(&packet), cells)?;
    let width = TUBE_HALF_WIDTH * shell.config.radius;
    let (phi0, fraction) = fit_orbit_phase(&exact, shell.p, shell.q, width, PHASE_SAMPLES)?;
    let orbit = OrbitPath::new(shell.p, shell.q, phi0, shell.config.radius)?;
    let asym = AsymptoticDensity::new(&shell, packet.delta_phi)?.with_phase(phi0);
    let asym_grid = eval_grid(GridSource::Asymptotic(&asym), cells)?;
    let eigen = ScarPacket::central_eigenstate(&shell)?;
    let baseline_grid = eval_grid(GridSource::Packet(&eigen), cells)?;
    let baseline = tube_fraction(&baseline_grid, &orbit, width)?;
    let rc = asym.caustic_radius();
    let correlation = correlation_where(&exact, &asym_grid, |r| r >= rc)?;
    let comparison = ComparisonDocument {
        format_version: crate::grid::FORMAT_VERSION,
        n_cells: cells,
        phi0,
        tube_half_width: width,
        tube_fraction: fraction,
        baseline_tube_fraction: baseline,
        annulus_correlation: correlation,
    };

    fs::create_dir_all(&out_dir)?;
    let d = |name: &str| out_dir.join(name);
    write_json(&ShellDocument::from(&shell), d("shell.json"))?;
    write_json(&PacketDocument::new(&packet, lifetime), d("scar.json"))?;
    fs::write(d("survival.csv"), csv)?;
    fs::write(d("lifetime.json"), footer)?;
    write_csv(&exact, d("grid_exact.csv"))?;
    write_csv(&asym_grid, d("grid_asymptotic.csv"))?;
    render_pgm(&exact, d("scar_exact.pgm"), levels)?;
    render_pgm(&asym_grid, d("scar_asymptotic.pgm"), levels)?;
    write_json(&OrbitDocument::from(&orbit), d("orbit.json"))?;
    write_json(&comparison, d("comparison.json"))?;

    println!(
        "shell ({}, {}) l0={} n0={} rho_bar={:.4} spread={:.3e}",
        shell.p,
        shell.q,
        shell.l0,
        shell.n0,
        shell.rho_bar,
        shell.relative_spread()
    );
    println!(
        "tau_q/T={:.3} g={:.3} eq5={:.3}",
        lifetime.ratio, lifetime.g_factor, lifetime.eq5_estimate
    );
    println!(
        "tube fraction {fraction:.4} (eigenstate {baseline:.4}), annulus correlation {correlation:.4}"
    );
    println!("outputs in {}", out_dir.display());
    Ok(())
}
