//! The `graph-casimir` command line.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 for invalid input and 3
//! for numerical failures (non-convergence, exhausted orbit budget,
//! insufficient reference accuracy).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_casimir::closed_form::{analytic_energy, ClosedFormShape};
use graph_casimir::em_piston::{self, PistonGeometry};
use graph_casimir::graph::{build_star, parse_graph_file, unequal_star, Graph};
use graph_casimir::orbits::{
    budget_from_env, convergence_study, enumerate_primitive_orbits, equal_length_trace_energy,
    force_orbits, shortest_orbit_force, vacuum_energy_orbits, OrbitSumConfig, Repetitions,
    TraceDepth,
};
use graph_casimir::report::{
    fmt_sig9, write_convergence_csv, write_orbits_csv, write_spectrum_csv,
};
use graph_casimir::spectral::{
    compute_spectrum, default_step, force_spectral, vacuum_energy_spectral, SpectralConfig,
};
use graph_casimir::{BoundaryKind, EnergyResult, Error, ForceEntry, Method};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "graph-casimir",
    version,
    about = "Casimir energies and piston forces on quantum graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph and print a summary.
    Validate {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Frequencies up to a cutoff as CSV.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 50.0)]
        omega_max: f64,
        #[arg(long, default_value_t = 1e-11)]
        tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Renormalized vacuum energy.
    Energy {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        orbit: OrbitArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Casimir force on piston bonds (positive = repulsive).
    Force {
        #[command(flatten)]
        graph: GraphArgs,
        /// Bond to vary; defaults to every bond ending at a piston.
        #[arg(long)]
        bond: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        /// Finite-difference step; defaults to 1e-3 of the bond length.
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        orbit: OrbitArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Primitive periodic orbits up to a length as CSV.
    Orbits {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        lmax: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Truncated orbit sums against the spectral reference.
    Converge {
        #[command(flatten)]
        graph: GraphArgs,
        /// Cutoff grid as lo:hi:step.
        #[arg(long, default_value = "8:32:0.5")]
        lmax_grid: String,
        /// Shell width for binned contributions.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[command(flatten)]
        spectral: SpectralArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Electromagnetic piston pressures and net force.
    Empiston {
        /// Box depth.
        #[arg(long = "a")]
        a: f64,
        /// Side of the square cross-section.
        #[arg(long = "b")]
        b: f64,
    },
    /// Data behind figures 2 to 4.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(2..=4))]
        number: u8,
        #[arg(long, default_value = "8:32:0.5")]
        lmax_grid: String,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Graph file.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Star with this many bonds around a Kirchhoff center.
    #[arg(long)]
    star: Option<usize>,
    /// Bond lengths of the star: one value for all bonds, or one per bond.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    length: Vec<f64>,
    /// Piston kinds of the star (neumann or dirichlet), one or one per bond.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    piston: Vec<String>,
}

#[derive(Args, Debug)]
struct SpectralArgs {
    /// Cutoff frequency; must reach 40/t_min.
    #[arg(long)]
    omega_max: Option<f64>,
    /// Root accuracy.
    #[arg(long)]
    tol: Option<f64>,
    /// Regularization parameters in units of the shortest bond.
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    /// Richardson order.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    /// Orbit length cutoff.
    #[arg(long, default_value_t = 30.0)]
    lmax: f64,
    #[arg(long, value_enum, default_value_t = RepetitionArg::Truncated)]
    repetitions: RepetitionArg,
    /// Truncate the transfer-matrix trace series after this many steps.
    #[arg(long)]
    nmax: Option<usize>,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Spectral,
    Orbit,
    Analytic,
    Transfer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RepetitionArg {
    Truncated,
    Unbounded,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Input(m) => (EXIT_INPUT, m),
                Failure::Numerical(m) => (EXIT_NUMERICAL, m),
            };
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Validate { graph } => validate(&graph, out),
        Command::Spectrum {
            graph,
            omega_max,
            tol,
            out: o,
        } => {
            let g = load(&graph)?;
            let spec = compute_spectrum(&g, omega_max, tol)?;
            emit(&o, out, |w| write_spectrum_csv(w, &spec))
        }
        Command::Energy {
            graph,
            method,
            spectral,
            orbit,
            out: o,
        } => {
            let g = load(&graph)?;
            let e = energy(&g, method, &spectral, &orbit)?;
            emit(&o, out, |w| {
                writeln!(w, "method,E_c,error_estimate")?;
                writeln!(
                    w,
                    "{},{},{}",
                    e.method,
                    fmt_sig9(e.value),
                    fmt_sig9(e.error_estimate)
                )
            })
        }
        Command::Force {
            graph,
            bond,
            method,
            step,
            spectral,
            orbit,
            out: o,
        } => {
            let g = load(&graph)?;
            let bonds = match bond {
                Some(b) => vec![b],
                None => piston_bonds(&g),
            };
            let entries = bonds
                .iter()
                .map(|b| force(&g, b, method, step, &spectral, &orbit))
                .collect::<Outcome<Vec<_>>>()?;
            emit(&o, out, |w| {
                writeln!(w, "bond,force,error_estimate,method")?;
                for e in &entries {
                    writeln!(
                        w,
                        "{},{},{},{}",
                        e.bond,
                        fmt_sig9(e.force),
                        fmt_sig9(e.error_estimate),
                        e.method
                    )?;
                }
                Ok(())
            })
        }
        Command::Orbits {
            graph,
            lmax,
            out: o,
        } => {
            let g = load(&graph)?;
            let cfg = OrbitSumConfig {
                budget: budget_from_env()?,
                ..OrbitSumConfig::new(lmax)
            };
            let orbits = enumerate_primitive_orbits(&g, &cfg)?;
            emit(&o, out, |w| write_orbits_csv(w, &g, &orbits))
        }
        Command::Converge {
            graph,
            lmax_grid,
            delta,
            spectral,
            out: o,
        } => {
            let g = load(&graph)?;
            let grid = parse_grid(&lmax_grid)?;
            let cfg = spectral_config(&g, &spectral)?;
            converge(&g, &grid, delta, &cfg, &o, out, err)
        }
        Command::Empiston { a, b } => {
            let geom = PistonGeometry::new(a, b)?;
            write!(out, "{}", em_piston::report(geom))?;
            Ok(())
        }
        Command::Figure {
            number,
            lmax_grid,
            delta,
            out: o,
        } => match number {
            2 => figure2(&o, out),
            n => {
                let g = unequal_star(n == 4);
                let grid = parse_grid(&lmax_grid)?;
                converge(&g, &grid, delta, &SpectralConfig::default(), &o, out, err)
            }
        },
    }
}

fn emit(
    o: &OutArgs,
    out: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Outcome {
    let mut buf = Vec::new();
    body(&mut buf)?;
    match &o.out {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(&buf)?,
    }
    Ok(())
}

fn parse_kind(s: &str) -> Outcome<BoundaryKind> {
    s.parse::<BoundaryKind>()
        .map_err(|_| Failure::Usage(format!("unknown piston kind `{s}`")))
}

fn broadcast<T: Clone>(what: &str, values: Vec<T>, n: usize) -> Outcome<Vec<T>> {
    match values.len() {
        1 => Ok(vec![values[0].clone(); n]),
        k if k == n => Ok(values),
        k => Err(Failure::Usage(format!(
            "--{what} needs 1 or {n} values, got {k}"
        ))),
    }
}

fn load(args: &GraphArgs) -> Outcome<Graph> {
    match (&args.graph, args.star) {
        (Some(_), Some(_)) => Err(Failure::Usage(
            "give either --graph or --star, not both".into(),
        )),
        (None, None) => Err(Failure::Usage(
            "a graph is required: --graph <path> or --star <B>".into(),
        )),
        (Some(path), None) => {
            if !args.length.is_empty() || !args.piston.is_empty() {
                return Err(Failure::Usage(
                    "--length and --piston only apply to --star".into(),
                ));
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_graph_file(&text)?)
        }
        (None, Some(b)) => {
            if b == 0 {
                return Err(Failure::Input("a star needs at least one bond".into()));
            }
            let lengths = if args.length.is_empty() {
                vec![1.0; b]
            } else {
                broadcast("length", args.length.clone(), b)?
            };
            let kinds = if args.piston.is_empty() {
                vec![BoundaryKind::Neumann; b]
            } else {
                let k = args
                    .piston
                    .iter()
                    .map(|s| parse_kind(s))
                    .collect::<Outcome<Vec<_>>>()?;
                broadcast("piston", k, b)?
            };
            Ok(build_star(b, &lengths, &kinds)?)
        }
    }
}

fn validate(args: &GraphArgs, out: &mut dyn Write) -> Outcome {
    let g = load(args)?;
    writeln!(
        out,
        "ok: {} vertices, {} bonds, total length {}",
        g.vertex_count(),
        g.bond_count(),
        fmt_sig9(g.total_length())
    )?;
    Ok(())
}

fn spectral_config(g: &Graph, args: &SpectralArgs) -> Outcome<SpectralConfig> {
    let mut cfg = SpectralConfig::default();
    if let Some(grid) = &args.t_grid {
        cfg.t_grid = grid.clone();
        cfg.order = grid.len();
    }
    if let Some(order) = args.order {
        cfg.order = order;
    }
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    if let Some(omega_max) = args.omega_max {
        let t_min = cfg.t_grid.iter().copied().fold(f64::INFINITY, f64::min) * g.min_bond_length();
        let required = graph_casimir::spectral::TAIL_FACTOR / t_min;
        if omega_max < required {
            return Err(Error::CutoffTooLow {
                omega_max,
                required,
            }
            .into());
        }
        cfg.omega_max_factor = omega_max * t_min;
    }
    Ok(cfg)
}

fn orbit_config(args: &OrbitArgs) -> Outcome<OrbitSumConfig> {
    let mut cfg = OrbitSumConfig::new(args.lmax);
    cfg.repetitions = match args.repetitions {
        RepetitionArg::Truncated => Repetitions::Truncated,
        RepetitionArg::Unbounded => Repetitions::Unbounded,
    };
    cfg.budget = budget_from_env()?;
    Ok(cfg)
}

fn energy(
    g: &Graph,
    method: MethodArg,
    spectral: &SpectralArgs,
    orbit: &OrbitArgs,
) -> Outcome<EnergyResult> {
    Ok(match method {
        MethodArg::Spectral => vacuum_energy_spectral(g, &spectral_config(g, spectral)?)?,
        MethodArg::Orbit => vacuum_energy_orbits(g, &orbit_config(orbit)?)?,
        MethodArg::Analytic => analytic_energy(g)?,
        MethodArg::Transfer => {
            let depth = match orbit.nmax {
                Some(n) => TraceDepth::Truncated(n),
                None => TraceDepth::Resummed,
            };
            equal_length_trace_energy(g, depth)?
        }
    })
}

/// Bonds with a Neumann or Dirichlet end; all bonds if there are none.
fn piston_bonds(g: &Graph) -> Vec<String> {
    let piston = |v: usize| g.vertices()[v].kind.is_piston();
    let named: Vec<String> = g
        .bonds()
        .iter()
        .filter(|b| b.ends.iter().any(|&v| piston(v)))
        .map(|b| b.name.clone())
        .collect();
    if named.is_empty() {
        g.bonds().iter().map(|b| b.name.clone()).collect()
    } else {
        named
    }
}

fn force(
    g: &Graph,
    bond: &str,
    method: MethodArg,
    step: Option<f64>,
    spectral: &SpectralArgs,
    orbit: &OrbitArgs,
) -> Outcome<ForceEntry> {
    let j = g.require_bond(bond)?;
    Ok(match method {
        MethodArg::Spectral => {
            let h = step.unwrap_or_else(|| default_step(g, j));
            force_spectral(g, bond, h, &spectral_config(g, spectral)?)?
        }
        MethodArg::Orbit => force_orbits(g, bond, &orbit_config(orbit)?)?,
        MethodArg::Analytic => ForceEntry {
            bond: bond.to_string(),
            force: ClosedFormShape::recognize(g)?.per_piston_force(),
            error_estimate: 0.0,
            method: Method::Analytic,
        },
        MethodArg::Transfer => {
            return Err(Failure::Usage(
                "the transfer method gives energies only; use spectral, orbit or analytic".into(),
            ))
        }
    })
}

/// `lo:hi:step`, inclusive of `hi` when it lies on the grid.
fn parse_grid(s: &str) -> Outcome<Vec<f64>> {
    let bad = || Failure::Usage(format!("--lmax-grid expects lo:hi:step, got `{s}`"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Outcome<_>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(bad());
    };
    if !(lo > 0.0 && hi >= lo && step > 0.0) || !(lo.is_finite() && hi.is_finite()) {
        return Err(Failure::Input(format!("invalid grid `{s}`")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

fn converge(
    g: &Graph,
    grid: &[f64],
    delta: f64,
    spectral: &SpectralConfig,
    o: &OutArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let reference = vacuum_energy_spectral(g, spectral)?;
    let cfg = OrbitSumConfig {
        budget: budget_from_env()?,
        ..OrbitSumConfig::new(grid[grid.len() - 1])
    };
    let study = convergence_study(g, grid, &reference, delta, &cfg)?;
    emit(o, out, |w| write_convergence_csv(w, &study))?;
    writeln!(
        err,
        "reference E_c = {} (error estimate {}), fitted slope {} (rms residual {})",
        fmt_sig9(reference.value),
        fmt_sig9(reference.error_estimate),
        fmt_sig9(study.fitted_slope),
        fmt_sig9(study.fit_residual)
    )?;
    Ok(())
}

/// One row per bond count and piston kind: the shortest-orbit force and the
/// exact force from the transfer-matrix resummation, both per piston and
/// for all pistons moving together.
fn figure2(o: &OutArgs, out: &mut dyn Write) -> Outcome {
    let mut rows = Vec::new();
    for kind in [BoundaryKind::Neumann, BoundaryKind::Dirichlet] {
        for b in 1..=30usize {
            let g = build_star(b, &vec![1.0; b], &vec![kind; b])?;
            let shortest = shortest_orbit_force(&g, "b1")?;
            let exact = equal_length_trace_energy(&g, TraceDepth::Resummed)?.value;
            // E_c ∝ 1/a, so −dE/da = E/a for the collective motion at a = 1
            rows.push((b, kind, shortest, exact / b as f64, exact));
        }
    }
    emit(o, out, |w| {
        writeln!(
            w,
            "B,piston,shortest_force,exact_per_piston_force,exact_collective_force"
        )?;
        for (b, kind, s, pp, c) in &rows {
            writeln!(
                w,
                "{b},{kind},{},{},{}",
                fmt_sig9(*s),
                fmt_sig9(*pp),
                fmt_sig9(*c)
            )?;
        }
        Ok(())
    })
}
