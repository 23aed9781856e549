//! `hdflow`: evaluate `φ_{λ,p}`, export orbit graphs, run Legendre-curve
//! operations and check the conjectural identities.
//!
//! Every command prints one JSON document (or a DOT graph) on success. Exit
//! status: 0 success or `holds`, 1 `fails`, 3 `indeterminate`, 2 bad input
//! (with `{"error": ...}` on stdout).

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hdflow::conjectures::{
    check_commutativity, check_equ_main, check_symmetries, check_torsion_periodicity,
    check_var_conj, ConjectureReport, Mode, PointMode, VarOptions, Verdict, DEFAULT_EXACT_BOUND,
};
use hdflow::dynamics::{functional_graph, orbit};
use hdflow::ecurve::{Curve, CurvePoint, Lift, XImage};
use hdflow::ff::{node_label, parse_modulus, parse_node, FieldCtx, ProjPoint};
use hdflow::poly::UniPoly;
use hdflow::{FiniteField, Fq, Ring, SelfMap};

#[derive(Parser, Debug)]
#[command(name = "hdflow", version, about = "Higgs-de Rham self-map on P^1 over finite fields")]
struct Cli {
    /// Worker threads for data-parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    p: Option<u64>,
    /// Extension degree (inferred from --modulus when omitted).
    #[arg(long)]
    f: Option<usize>,
    /// Monic modulus coefficients c_0,...,c_f.
    #[arg(long)]
    modulus: Option<String>,
    /// Named field, e.g. paper-f81 (the default when no field flags are given).
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Symbolic,
    Grid,
    Random,
    Exhaustive,
    Sample,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Symbolic => Mode::Symbolic,
            ModeArg::Grid => Mode::Grid,
            ModeArg::Random => Mode::Random,
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Sample => Mode::Sample,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate φ at a point of P^1.
    Selfmap {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        /// Encoded point or "inf".
        #[arg(long)]
        z: String,
    },
    /// Tail and cycle of one forward orbit.
    Orbit {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        start: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The full functional graph on P^1(F_q).
    Graph {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Legendre curve operations.
    Ec {
        #[command(subcommand)]
        op: EcCommand,
    },
    /// Conjecture checks.
    Conj {
        #[command(subcommand)]
        which: ConjCommand,
    },
}

#[derive(Args, Debug, Clone)]
struct PointArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    lambda: u64,
    /// Encoded x-coordinate.
    #[arg(long)]
    x: u64,
    /// Encoded y-coordinate; lifted from x when omitted.
    #[arg(long)]
    y: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum EcCommand {
    /// x([p]Q) by the determinant formula and by double-and-add.
    Mulp(PointArgs),
    /// Order of a point.
    Order(PointArgs),
    /// Rebuild (x-a)^p (x-a_p) = f^2 - x(x-1)(x-λ) g^2 and report the residual.
    CheckFact(PointArgs),
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum ConjCommand {
    /// det A_p = c λ^{m²}(λ-1)^{m²} det B_{m+1}.
    Var {
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "symbolic")]
        mode: ModeArg,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest prime allowed in symbolic and grid modes.
        #[arg(long, default_value_t = DEFAULT_EXACT_BOUND)]
        max_p: u64,
    },
    /// φ ∘ π = π ∘ [p] on curve points.
    Commute {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Pointwise equality of the two determinant expressions for φ.
    EquMain {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Periodicity vs p-coprime torsion order.
    Torsion {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
    },
    /// Entrywise symmetry ratios and the determinant relation at one point.
    Symmetry {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        a: u64,
    },
}

/// Bad input: reported as `{"error": ...}` with exit status 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Output {
    body: String,
    code: u8,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: 0 }
    }

    fn report(r: &ConjectureReport) -> Self {
        let code = match r.verdict {
            Verdict::Holds => 0,
            Verdict::Fails => 1,
            Verdict::Indeterminate => 3,
        };
        if let Some(ms) = r.stats.runtime_ms {
            log::debug!("{:?} finished in {ms} ms", r.conjecture);
        }
        Output { body: r.to_json(), code }
    }
}

fn build_field(args: &FieldArgs) -> Result<Fq, Usage> {
    if let Some(name) = &args.preset {
        if args.p.is_some() || args.modulus.is_some() || args.f.is_some() {
            return Err(Usage("--preset cannot be combined with --p/--f/--modulus".into()));
        }
        return Ok(FieldCtx::preset(name)?);
    }
    let Some(p) = args.p else {
        if args.modulus.is_some() || args.f.is_some() {
            return Err(Usage("--f/--modulus need --p".into()));
        }
        return Ok(FieldCtx::paper_f81());
    };
    match &args.modulus {
        Some(text) => {
            let modulus = parse_modulus(text)?;
            let f = args.f.unwrap_or(modulus.len().saturating_sub(1));
            Ok(FieldCtx::new(p, f, &modulus)?)
        }
        None => Ok(FieldCtx::with_degree(p, args.f.unwrap_or(1))?),
    }
}

fn element(k: &Fq, n: u64, what: &str) -> Result<<Fq as Ring>::Elem, Usage> {
    if n >= k.order() {
        return Err(Usage(format!("{what} = {n} is not below q = {}", k.order())));
    }
    Ok(k.element(n))
}

fn self_map(field: &FieldArgs, lambda: u64) -> Result<SelfMap, Usage> {
    let k = build_field(field)?;
    let l = element(&k, lambda, "lambda")?;
    Ok(SelfMap::new(k, l)?)
}

fn poly_labels<F: FiniteField>(k: &F, f: &UniPoly<F::Elem>) -> Vec<u64> {
    f.coeffs().iter().map(|c| k.index(c)).collect()
}

fn run(cli: &Cli) -> Result<Output, Usage> {
    match &cli.command {
        Command::Selfmap { field, lambda, z } => {
            let ctx = self_map(field, *lambda)?;
            let k = ctx.field();
            let x = parse_node(k, z)?;
            let y = ctx.eval(&x)?;
            Ok(Output::ok(json!({ "phi": node_label(k, &y) }).to_string()))
        }
        Command::Orbit { field, lambda, start, format } => {
            let ctx = self_map(field, *lambda)?;
            let k = ctx.field();
            let o = orbit(&ctx, &parse_node(k, start)?)?;
            Ok(Output::ok(match format {
                Format::Json => o.to_json(k.order()),
                Format::Dot => {
                    let lab = |n: u64| node_label(k, &hdflow::dynamics::from_node(k, n));
                    let path: Vec<u64> = o.tail.iter().chain(&o.cycle).copied().collect();
                    let mut s = String::from("digraph orbit {\n");
                    for w in path.windows(2) {
                        s += &format!("  \"{}\" -> \"{}\";\n", lab(w[0]), lab(w[1]));
                    }
                    let (last, first) = (o.cycle[o.cycle.len() - 1], o.cycle[0]);
                    s += &format!("  \"{}\" -> \"{}\";\n}}", lab(last), lab(first));
                    s
                }
            }))
        }
        Command::Graph { field, lambda, format } => {
            let ctx = self_map(field, *lambda)?;
            let g = functional_graph(&ctx)?;
            Ok(Output::ok(match format {
                Format::Json => g.to_json(),
                Format::Dot => g.to_dot().trim_end().to_string(),
            }))
        }
        Command::Ec { op } => run_ec(op),
        Command::Conj { which } => run_conj(which),
    }
}

/// The curve and the input point (over the base field or the quadratic extension).
enum Located {
    Base(Curve<Fq>, CurvePoint<<Fq as Ring>::Elem>),
    Ext(Curve<hdflow::Fq2>, CurvePoint<hdflow::Fq2Element>),
}

fn locate(args: &PointArgs) -> Result<(Curve<Fq>, Located), Usage> {
    let k = build_field(&args.field)?;
    let l = element(&k, args.lambda, "lambda")?;
    let curve = Curve::new(k.clone(), l)?;
    let x = element(&k, args.x, "x")?;
    let located = match args.y {
        Some(y) => {
            let pt = CurvePoint::Affine(x, element(&k, y, "y")?);
            if !curve.contains(&pt) {
                return Err(Usage("point is not on the curve".into()));
            }
            Located::Base(curve.clone(), pt)
        }
        None => match curve.lift_x(&x) {
            Lift::Rational(pts) => Located::Base(curve.clone(), pts[0].clone()),
            Lift::Quadratic { curve: c2, points } => Located::Ext(c2, points[0].clone()),
        },
    };
    Ok((curve, located))
}

fn run_ec(op: &EcCommand) -> Result<Output, Usage> {
    match op {
        EcCommand::Mulp(args) => {
            let (curve, located) = locate(args)?;
            let k = curve.field().clone();
            let p = k.characteristic();
            let x = k.element(args.x);
            let by_mul = match &located {
                Located::Base(c, q) => XImage::Base(c.mul(p, q)?.project()),
                Located::Ext(c, q) => match c.mul(p, q)?.project() {
                    ProjPoint::Infinity => XImage::Base(ProjPoint::Infinity),
                    ProjPoint::Finite(e) => match c.field().restrict(&e) {
                        Some(v) => XImage::Base(ProjPoint::Finite(v)),
                        None => XImage::Extension(c.field().index(&e)),
                    },
                },
            };
            let by_det = curve.xp_via_determinant(&x);
            let shown = |v: &XImage<_>| match v {
                XImage::Base(pt) => node_label(&k, pt),
                XImage::Extension(e) => format!("ext:{e}"),
            };
            let (det_label, agree) = match &by_det {
                Ok(v) => (json!(node_label(&k, v)), by_mul.base() == Some(v)),
                Err(hdflow::ecurve::EcError::Indeterminate(_)) => (json!("indeterminate"), false),
                Err(e) => return Err(Usage(e.to_string())),
            };
            Ok(Output::ok(
                json!({
                    "x": args.x,
                    "determinant": det_label,
                    "double_and_add": shown(&by_mul),
                    "agree": agree,
                })
                .to_string(),
            ))
        }
        EcCommand::Order(args) => {
            let (_, located) = locate(args)?;
            let p = build_field(&args.field)?.characteristic();
            let (order, quadratic) = match &located {
                Located::Base(c, q) => (c.point_order(q)?, false),
                Located::Ext(c, q) => (c.point_order(q)?, true),
            };
            Ok(Output::ok(
                json!({ "order": order, "coprime_to_p": order % p != 0, "quadratic": quadratic })
                    .to_string(),
            ))
        }
        EcCommand::CheckFact(args) => {
            let (_, located) = locate(args)?;
            let body = match &located {
                Located::Base(c, q) => {
                    let fact = c.factorization_check(q)?;
                    let k = c.field();
                    fact_json(
                        &node_label(k, &fact.ap),
                        poly_labels(k, &fact.f),
                        poly_labels(k, &fact.g),
                        poly_labels(k, &fact.residual),
                        false,
                    )
                }
                Located::Ext(c, q) => {
                    let fact = c.factorization_check(q)?;
                    let k = c.field();
                    fact_json(
                        &node_label(k, &fact.ap),
                        poly_labels(k, &fact.f),
                        poly_labels(k, &fact.g),
                        poly_labels(k, &fact.residual),
                        true,
                    )
                }
            };
            Ok(Output::ok(body))
        }
    }
}

fn fact_json(ap: &str, f: Vec<u64>, g: Vec<u64>, residual: Vec<u64>, quadratic: bool) -> String {
    let residual = if residual.is_empty() { json!("0") } else { json!(residual) };
    json!({ "ap": ap, "f": f, "g": g, "residual": residual, "quadratic": quadratic }).to_string()
}

fn point_mode(sweep: &SweepArgs) -> Result<PointMode, Usage> {
    match sweep.mode {
        ModeArg::Exhaustive => Ok(PointMode::Exhaustive),
        ModeArg::Sample => Ok(PointMode::Sample { count: sweep.trials, seed: sweep.seed }),
        other => Err(Usage(format!("mode {other:?} is not supported here; use exhaustive or sample"))),
    }
}

fn run_conj(which: &ConjCommand) -> Result<Output, Usage> {
    let report = match which {
        ConjCommand::Var { p, mode, trials, seed, max_p } => check_var_conj(
            *p,
            VarOptions { mode: (*mode).into(), trials: *trials, seed: *seed, exact_bound: *max_p },
        )?,
        ConjCommand::Commute { field, lambda, sweep } => {
            let ctx = self_map(field, *lambda)?;
            check_commutativity(ctx.field(), ctx.lambda(), point_mode(sweep)?)?
        }
        ConjCommand::EquMain { field, lambda, sweep } => {
            let ctx = self_map(field, *lambda)?;
            check_equ_main(ctx.field(), ctx.lambda(), point_mode(sweep)?)?
        }
        ConjCommand::Torsion { field, lambda } => {
            let ctx = self_map(field, *lambda)?;
            check_torsion_periodicity(ctx.field(), ctx.lambda())?
        }
        ConjCommand::Symmetry { field, lambda, a } => {
            let ctx = self_map(field, *lambda)?;
            let a = element(ctx.field(), *a, "a")?;
            check_symmetries(ctx.field(), ctx.lambda(), &a)?
        }
    };
    Ok(Output::report(&report))
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Usage> {
    match out {
        Some(path) => fs::write(path, format!("{body}\n")).map_err(Usage::from),
        None => match writeln!(std::io::stdout().lock(), "{body}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other.map_err(Usage::from),
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            println!("{}", json!({ "error": e.to_string() }));
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|o| emit(&cli.out, &o.body).map(|_| o.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            println!("{}", json!({ "error": msg }));
            ExitCode::from(2)
        }
    }
}
