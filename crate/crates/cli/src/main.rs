use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gralg_core::dsl::{lookup, parse_constant, parse_metric, CompiledMetric, CoordBox, MetricSpec};
use gralg_core::linalg::Mat4;
use gralg_core::mass::{mass_extrapolated, FitModel, MassError, MassKind, MassOptions};
use gralg_core::verifier::{verify_all, PointData, Tolerances, VerifyOptions, REPORT_VERSION};

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

#[derive(Parser)]
#[command(name = "gralg", version, about = "Superpotential and pseudo-tensor identity checks for 4D Lorentzian metrics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(clap::Args)]
struct MetricArgs {
    /// Catalog name or path to a metric file.
    metric: String,
    /// Parameter override, e.g. `r_g=2` or `m=1`.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity check on seeded random points.
    Verify {
        #[command(flatten)]
        metric: MetricArgs,
        /// Sampling box, e.g. "t:0..1, x:5..50, y:5..50, z:5..50".
        #[arg(long = "box")]
        bounds: Option<String>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance for jet-exact identities.
        #[arg(long)]
        tol: Option<f64>,
        /// Tolerance for the finite-difference conservation check.
        #[arg(long)]
        tol_conservation: Option<f64>,
        /// Finite-difference step.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        algebra_cases: usize,
    },
    /// Print every computed object at one point.
    Tensors {
        #[command(flatten)]
        metric: MetricArgs,
        /// Coordinates, e.g. "0, 2, pi/3, 0".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Surface-integral mass with extrapolation in the radius.
    Mass {
        #[command(flatten)]
        metric: MetricArgs,
        /// einstein, landau_lifshitz (ll) or raw_s.
        #[arg(long, default_value = "einstein")]
        kind: String,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        radii: Vec<f64>,
        /// Quadrature nodes as THETAxPHI.
        #[arg(long, default_value = "64x128")]
        nodes: String,
        #[arg(long, default_value_t = 0.0)]
        time: f64,
        #[arg(long, value_enum, default_value = "quadratic")]
        fit: Fit,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fit {
    Linear,
    Quadratic,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

struct Resolved {
    metric: CompiledMetric,
    default_box: Option<CoordBox>,
}

fn resolve(args: &MetricArgs) -> Result<Resolved, Failure> {
    let (mut spec, default_box): (MetricSpec, _) = if let Some(e) = lookup(&args.metric) {
        (parse_metric(e.source).expect("catalog metrics parse"), Some(e.default_box))
    } else if Path::new(&args.metric).exists() {
        let text = std::fs::read_to_string(&args.metric)
            .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", args.metric)))?;
        let spec = parse_metric(&text).map_err(|e| fail(EXIT_PARSE, format!("{}:{e}", args.metric)))?;
        (spec, None)
    } else {
        return Err(fail(EXIT_PARSE, format!("{}: no such file or catalog metric", args.metric)));
    };
    for p in &args.params {
        let (name, value) = p
            .split_once('=')
            .ok_or_else(|| fail(EXIT_PRECONDITION, format!("--param expects NAME=VALUE, got '{p}'")))?;
        let v = parse_constant(value.trim())
            .map_err(|e| fail(EXIT_PRECONDITION, format!("--param {name}: {e}")))?;
        spec.set_param(name.trim(), v).map_err(|e| fail(EXIT_PRECONDITION, e))?;
    }
    Ok(Resolved { metric: CompiledMetric::new(spec), default_box })
}

fn parse_box(text: &str, coords: &[String; 4]) -> Result<CoordBox, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.len() != 4 {
        return Err(fail(EXIT_PRECONDITION, format!("--box needs 4 ranges, got {}", parts.len())));
    }
    let mut out = [(0.0, 0.0); 4];
    let mut seen = [false; 4];
    for (i, part) in parts.iter().enumerate() {
        let (slot, range) = match part.split_once(':') {
            Some((name, r)) => {
                let name = name.trim();
                let slot = coords
                    .iter()
                    .position(|c| c == name)
                    .ok_or_else(|| fail(EXIT_PRECONDITION, format!("--box: unknown coordinate '{name}'")))?;
                (slot, r)
            }
            None => (i, *part),
        };
        let (lo, hi) = range
            .split_once("..")
            .ok_or_else(|| fail(EXIT_PRECONDITION, format!("--box: expected LO..HI, got '{range}'")))?;
        let num = |s: &str| parse_constant(s.trim()).map_err(|e| fail(EXIT_PRECONDITION, format!("--box: {e}")));
        let (lo, hi) = (num(lo)?, num(hi)?);
        if hi < lo || seen[slot] {
            return Err(fail(EXIT_PRECONDITION, format!("--box: bad range for '{}'", coords[slot])));
        }
        seen[slot] = true;
        out[slot] = (lo, hi);
    }
    Ok(out)
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn cmd_verify(
    args: &MetricArgs,
    bounds: Option<&str>,
    opts: VerifyOptions,
) -> Result<(String, bool), Failure> {
    let r = resolve(args)?;
    let bounds = match (bounds, r.default_box) {
        (Some(b), _) => parse_box(b, &r.metric.spec.coords)?,
        (None, Some(b)) => b,
        (None, None) => return Err(fail(EXIT_PRECONDITION, "metric files need an explicit --box")),
    };
    let report = verify_all(&r.metric, &bounds, &opts);
    let out = match args.format {
        Format::Text => report.to_text(),
        Format::Kv => report.to_kv(),
    };
    Ok((out, report.passed()))
}

struct Sink {
    format: Format,
    out: String,
}

impl Sink {
    fn scalar(&mut self, name: &str, v: f64) {
        match self.format {
            Format::Text => {
                let _ = writeln!(self.out, "{name} = {}", num(v));
            }
            Format::Kv => {
                let _ = writeln!(self.out, "{name}={}", num(v));
            }
        }
    }

    fn matrix(&mut self, name: &str, m: &Mat4<f64>) {
        match self.format {
            Format::Text => {
                let _ = writeln!(self.out, "{name}:");
                for row in m {
                    let cells: Vec<String> = row.iter().map(|v| format!("{:>19}", num(*v))).collect();
                    let _ = writeln!(self.out, "  {}", cells.join(" "));
                }
            }
            Format::Kv => {
                for (i, row) in m.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        let _ = writeln!(self.out, "{name}[{i},{j}]={}", num(*v));
                    }
                }
            }
        }
    }

    fn rank3(&mut self, name: &str, t: &[[[f64; 4]; 4]; 4]) {
        for (i, m) in t.iter().enumerate() {
            self.matrix(&format!("{name}[{i}]"), m);
        }
    }
}

fn cmd_tensors(args: &MetricArgs, point: &str) -> Result<String, Failure> {
    let r = resolve(args)?;
    let parts: Vec<&str> = point.split(',').collect();
    if parts.len() != 4 {
        return Err(fail(EXIT_PRECONDITION, format!("--point needs 4 coordinates, got {}", parts.len())));
    }
    let mut x = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        x[i] = parse_constant(p.trim()).map_err(|e| fail(EXIT_PRECONDITION, format!("--point: {e}")))?;
    }
    let d = PointData::new(&r.metric, x).map_err(|e| fail(EXIT_DOMAIN, format!("{}: {e}", r.metric.name())))?;
    let mut s = Sink { format: args.format, out: String::new() };
    match args.format {
        Format::Text => {
            let _ = writeln!(s.out, "{REPORT_VERSION}\ncommand: tensors\nmetric: {}", r.metric.name());
            let _ = writeln!(s.out, "point: {}", x.map(num).join(" "));
        }
        Format::Kv => {
            let _ = writeln!(s.out, "format={}\ncommand=tensors\nmetric={}", REPORT_VERSION.replace(' ', "-"), r.metric.name());
            let _ = writeln!(s.out, "point={}", x.map(num).join(","));
        }
    }
    s.matrix("g_lower", &d.gp.metric.g);
    s.scalar("det_g", d.gp.metric.det);
    s.scalar("sqrt_minus_g", d.gp.metric.sqrt_minus_g());
    s.matrix("ricci_lower", &d.gp.ricci);
    s.scalar("ricci_scalar", d.gp.scalar);
    s.matrix("einstein_lower", &d.gp.einstein_lower);
    s.rank3("superpotential_S", &d.sp.s);
    s.rank3("freud_U", &d.sp.u);
    s.matrix("freud_U_divergence", &d.sp.u_div);
    s.matrix("pseudo_t_mixed", &d.sp.t_mixed);
    s.matrix("einstein_pseudo", &d.sp.einstein);
    s.matrix("landau_lifshitz", &d.sp.ll);
    s.scalar("lagrangian_density", d.sp.lagrangian);
    s.scalar("theta", d.sp.theta);
    Ok(s.out)
}

fn mass_failure(e: MassError) -> Failure {
    match e {
        MassError::Domain { .. } => fail(EXIT_DOMAIN, e.to_string()),
        _ => fail(EXIT_PRECONDITION, e.to_string()),
    }
}

fn cmd_mass(args: &MetricArgs, kind: &str, radii: &[f64], nodes: &str, time: f64, fit: Fit) -> Result<String, Failure> {
    let r = resolve(args)?;
    let kind = MassKind::parse(kind).ok_or_else(|| fail(EXIT_PRECONDITION, format!("unknown --kind '{kind}'")))?;
    let (nt, np) = nodes
        .split_once('x')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .ok_or_else(|| fail(EXIT_PRECONDITION, format!("--nodes expects THETAxPHI, got '{nodes}'")))?;
    let opts = MassOptions {
        n_theta: nt,
        n_phi: np,
        time,
        fit: match fit {
            Fit::Linear => FitModel::Linear,
            Fit::Quadratic => FitModel::Quadratic,
        },
        ..MassOptions::default()
    };
    let res = mass_extrapolated(&r.metric, kind, radii, &opts).map_err(mass_failure)?;
    let mut out = String::new();
    match args.format {
        Format::Text => {
            let _ = writeln!(out, "{REPORT_VERSION}\ncommand: mass\nmetric: {}\nkind: {}", res.metric, kind.name());
            let _ = writeln!(out, "nodes: {nt}x{np}");
            let _ = writeln!(out, "{:>19} {:>19}", "radius", "mass");
            for (r, m) in res.radii.iter().zip(&res.masses) {
                let _ = writeln!(out, "{:>19} {:>19}", num(*r), num(*m));
            }
            let _ = writeln!(out, "extrapolated: {}", num(res.extrapolated));
            let _ = writeln!(out, "fit_residual: {}{}", num(res.fit_residual), if res.fit_flagged { "  (FLAGGED)" } else { "" });
            let _ = writeln!(out, "monotone: {}", res.monotone);
        }
        Format::Kv => {
            let _ = writeln!(out, "format={}\ncommand=mass\nmetric={}\nkind={}", REPORT_VERSION.replace(' ', "-"), res.metric, kind.name());
            let _ = writeln!(out, "nodes={nt}x{np}");
            for (r, m) in res.radii.iter().zip(&res.masses) {
                let _ = writeln!(out, "mass[{}]={}", num(*r), num(*m));
            }
            let _ = writeln!(out, "extrapolated={}", num(res.extrapolated));
            let _ = writeln!(out, "fit_residual={}", num(res.fit_residual));
            let _ = writeln!(out, "fit_flagged={}", res.fit_flagged);
            let _ = writeln!(out, "monotone={}", res.monotone);
        }
    }
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("GRALG_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { metric, bounds, points, seed, tol, tol_conservation, step, algebra_cases } => {
            let defaults = Tolerances::default();
            let opts = VerifyOptions {
                points: *points,
                seed: *seed,
                algebra_cases: *algebra_cases,
                tol: Tolerances {
                    exact: tol.unwrap_or(defaults.exact),
                    conservation: tol_conservation.unwrap_or(defaults.conservation),
                    step: step.unwrap_or(defaults.step),
                    ..defaults
                },
                ..VerifyOptions::default()
            };
            cmd_verify(metric, bounds.as_deref(), opts).map(|(out, ok)| (out, if ok { 0 } else { EXIT_FAIL }))
        }
        Command::Tensors { metric, point } => cmd_tensors(metric, point).map(|o| (o, 0)),
        Command::Mass { metric, kind, radii, nodes, time, fit } => {
            cmd_mass(metric, kind, radii, nodes, *time, *fit).map(|o| (o, 0))
        }
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("gralg: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
