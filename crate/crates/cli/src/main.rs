//! Command-line surface: exact pairings and squares, spherical-class
//! sequences, wall enumeration and certificates, wall-kind classification,
//! the reduction pipeline, and SVG wall diagrams.
//!
//! Exit codes: 0 success, 1 negative finding (a failed check or invalid
//! certificate), 2 domain or input error.

use clap::{Parser, Subcommand, ValueEnum};
use mukai_walls::mukai::MukaiVector;
use mukai_walls::rank2::{spherical_sequences, Rank2Class, Rank2Lattice};
use mukai_walls::reduction::{run_reduction, ReductionOptions};
use mukai_walls::wallcross::{classify_wall_kind, wall_lattice_basis, WallKind};
use mukai_walls::walls::{
    certify_no_walls, enumerate_candidate_walls, line_meets_wall, wall_from_destabilizer,
    Bounds, Quadrant, WallOutcome,
};
use num_bigint::BigInt;
use serde_json::{Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;

use mukai_walls_cli::config::Config;
use mukai_walls_cli::json::{bigint_to_value, to_canonical_string};
use mukai_walls_cli::problem::{parse_problem, vector_to_value, ProblemFile};
use mukai_walls_cli::{svg, tracejson};

#[derive(Parser)]
#[command(
    name = "mukai-walls",
    version,
    about = "Exact-arithmetic wall-and-chamber calculator for the Mukai lattice of a K3 surface",
    long_about = "Exact-arithmetic calculator for wall-and-chamber computations on the \
algebraic Mukai lattice of a K3 surface. Inputs are JSON problem files \
(--input); rationals are [numerator, denominator] pairs with positive \
denominator. Worker count is capped by the MUKAI_WALLS_THREADS environment \
variable. Exit codes: 0 success, 1 negative finding, 2 domain error."
)]
struct Cli {
    /// Problem file (JSON: lattice, vector, optional stab and task parameters)
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Config file in key=value form (c_max, s_max, k_final);
    /// ./mukai-walls.conf is read when present. Flags override config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuadrantArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Mukai pairing of `vector` and `vector2` from the problem file
    Pair,
    /// Mukai self-intersection of `vector`
    Square,
    /// Reflection-generated spherical class sequences in a rank-2 lattice
    SphericalClasses {
        /// Terms per branch (falls back to the problem file, then 10)
        #[arg(long)]
        count: Option<u64>,
    },
    /// Enumerate candidate semicircular walls for (1, 0, 1-n)
    Walls {
        /// Degree parameter d (H^2 = 2d); falls back to the input lattice
        #[arg(long)]
        d: Option<u64>,
        /// Number of points n >= 2
        #[arg(long)]
        n: Option<u64>,
        /// Enumeration bounds as C,S
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Bounds>,
        /// Which quadrant of the half plane
        #[arg(long, value_enum, default_value = "left")]
        quadrant: QuadrantArg,
    },
    /// Does the line beta = -1/k meet the wall of the rank-0 destabilizer?
    CheckLine {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
    },
    /// Rank-2 lattice of the wall through `stab` for `vector`, classified
    ClassifyWall {
        /// Enumeration bound for the spherical-class search
        #[arg(long, default_value_t = 1000)]
        bound: u64,
    },
    /// Reduce `vector` to the normal form (1, 0, 1-n) with a verified trace
    Reduce {
        /// k for the final degree 2k^2(n-1); must be >= 2
        #[arg(long)]
        k: Option<u64>,
        /// Certificate bounds as C,S
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Bounds>,
    },
    /// Render candidate walls as an SVG diagram
    PlotWalls {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Bounds>,
        #[arg(long, value_enum, default_value = "left")]
        quadrant: QuadrantArg,
        /// SVG output file; stdout when absent
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Certify that no semicircular wall survives for d = k^2(n-1), k > 1
    Certify {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<Bounds>,
    },
}

fn parse_bounds(s: &str) -> Result<Bounds, String> {
    let (c, sm) = s
        .split_once(',')
        .ok_or_else(|| "expected C,S".to_owned())?;
    Ok(Bounds {
        c_max: c.trim().parse().map_err(|e| format!("bad C: {e}"))?,
        s_max: sm.trim().parse().map_err(|e| format!("bad S: {e}"))?,
    })
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("MUKAI_WALLS_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Ctx {
    problem: Option<ProblemFile>,
    config: Config,
    output: Option<PathBuf>,
}

impl Ctx {
    fn problem(&self) -> Result<&ProblemFile, String> {
        self.problem
            .as_ref()
            .ok_or_else(|| "this command needs --input FILE".to_owned())
    }

    fn vector<'a>(&self, p: &'a ProblemFile) -> Result<&'a MukaiVector, String> {
        p.vector
            .as_ref()
            .ok_or_else(|| "problem file needs a \"vector\" field".to_owned())
    }

    fn write(&self, text: &str) -> Result<(), String> {
        match &self.output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => {
            let default = PathBuf::from("mukai-walls.conf");
            if default.exists() {
                Config::load(&default)?
            } else {
                Config::default()
            }
        }
    };
    let problem = match &cli.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            Some(parse_problem(&text).map_err(|e| e.to_string())?)
        }
        None => None,
    };
    let ctx = Ctx {
        problem,
        config,
        output: cli.output.clone(),
    };

    match &cli.command {
        Command::Pair => cmd_pair(&ctx),
        Command::Square => cmd_square(&ctx),
        Command::SphericalClasses { count } => cmd_spherical(&ctx, *count),
        Command::Walls {
            d,
            n,
            bounds,
            quadrant,
        } => cmd_walls(&ctx, *d, *n, *bounds, *quadrant),
        Command::CheckLine { n, k } => cmd_check_line(&ctx, *n, *k),
        Command::ClassifyWall { bound } => cmd_classify(&ctx, *bound),
        Command::Reduce { k, bounds } => cmd_reduce(&ctx, *k, *bounds),
        Command::PlotWalls {
            d,
            n,
            bounds,
            quadrant,
            svg,
        } => cmd_plot(&ctx, *d, *n, *bounds, *quadrant, svg.as_deref()),
        Command::Certify { n, k, bounds } => cmd_certify(&ctx, *n, *k, *bounds),
    }
}

fn one_field(key: &str, v: Value) -> String {
    let mut m = Map::new();
    m.insert(key.to_owned(), v);
    to_canonical_string(&Value::Object(m))
}

fn cmd_pair(ctx: &Ctx) -> Result<ExitCode, String> {
    let p = ctx.problem()?;
    let v = ctx.vector(p)?;
    let w = p
        .vector2
        .as_ref()
        .ok_or_else(|| "pair needs a \"vector2\" field".to_owned())?;
    let val = p
        .lattice
        .mukai_pairing(v, w)
        .map_err(|e| e.to_string())?;
    ctx.write(&one_field("pairing", bigint_to_value(&val)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_square(ctx: &Ctx) -> Result<ExitCode, String> {
    let p = ctx.problem()?;
    let v = ctx.vector(p)?;
    let val = p.lattice.square(v).map_err(|e| e.to_string())?;
    ctx.write(&one_field("square", bigint_to_value(&val)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_spherical(ctx: &Ctx, count: Option<u64>) -> Result<ExitCode, String> {
    let p = ctx.problem()?;
    if p.lattice.rank() != 2 {
        return Err("spherical-classes needs a rank-2 lattice".to_owned());
    }
    let g = p.lattice.gram();
    let lat = Rank2Lattice::new([
        [g[0][0].clone(), g[0][1].clone()],
        [g[1][0].clone(), g[1][1].clone()],
    ])
    .map_err(|e| e.to_string())?;
    let count = count.or(p.count).unwrap_or(10) as usize;
    let (upper, lower) = spherical_sequences(&lat, count).map_err(|e| e.to_string())?;
    let seq = |s: &[(BigInt, BigInt)]| {
        Value::Array(
            s.iter()
                .map(|(x, y)| Value::Array(vec![bigint_to_value(x), bigint_to_value(y)]))
                .collect(),
        )
    };
    let mut m = Map::new();
    m.insert("upper".to_owned(), seq(&upper.entries));
    m.insert("lower".to_owned(), seq(&lower.entries));
    ctx.write(&to_canonical_string(&Value::Object(m)))?;
    Ok(ExitCode::SUCCESS)
}

fn degree_from(ctx: &Ctx, d: Option<u64>) -> Result<BigInt, String> {
    if let Some(d) = d {
        return Ok(BigInt::from(d));
    }
    if let Some(p) = &ctx.problem {
        if let Some(d) = p.lattice.rank1_degree() {
            return Ok(d);
        }
    }
    Err("needs --d or a rank-1 input lattice".to_owned())
}

fn bounds_from(ctx: &Ctx, flag: Option<Bounds>) -> Bounds {
    flag.or_else(|| ctx.problem.as_ref().and_then(|p| p.bounds))
        .unwrap_or_else(|| ctx.config.bounds_or_default())
}

fn cmd_walls(
    ctx: &Ctx,
    d: Option<u64>,
    n: Option<u64>,
    bounds: Option<Bounds>,
    quadrant: QuadrantArg,
) -> Result<ExitCode, String> {
    let d = degree_from(ctx, d)?;
    let n = n
        .or_else(|| ctx.problem.as_ref().and_then(|p| p.n))
        .ok_or_else(|| "needs --n".to_owned())?;
    let bounds = bounds_from(ctx, bounds);
    let quadrant = match quadrant {
        QuadrantArg::Left => Quadrant::Left,
        QuadrantArg::Right => Quadrant::Right,
    };
    let walls = enumerate_candidate_walls(&d, &BigInt::from(n), quadrant, &bounds)
        .map_err(|e| e.to_string())?;
    let mut m = Map::new();
    m.insert("d".to_owned(), bigint_to_value(&d));
    m.insert("n".to_owned(), Value::from(n));
    m.insert(
        "walls".to_owned(),
        Value::Array(walls.iter().map(tracejson::wall_to_value).collect()),
    );
    ctx.write(&to_canonical_string(&Value::Object(m)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_line(ctx: &Ctx, n: Option<u64>, k: Option<u64>) -> Result<ExitCode, String> {
    let p = ctx.problem()?;
    let u = ctx.vector(p)?;
    let n = n.or(p.n).ok_or_else(|| "needs --n".to_owned())?;
    let k = k.or(p.k).ok_or_else(|| "needs --k".to_owned())?;
    let meets = line_meets_wall(&BigInt::from(n), &BigInt::from(k), u)
        .map_err(|e| e.to_string())?;
    ctx.write(&one_field("meets_line", Value::Bool(meets)))?;
    Ok(if meets {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn rank2_class_str(c: Rank2Class) -> &'static str {
    match c {
        Rank2Class::Hyperbolic => "hyperbolic",
        Rank2Class::NegativeSemiDefinite => "negative_semi_definite",
        Rank2Class::NegativeDefinite => "negative_definite",
    }
}

fn pair_to_value(p: &(BigInt, BigInt)) -> Value {
    Value::Array(vec![bigint_to_value(&p.0), bigint_to_value(&p.1)])
}

fn kind_to_value(kind: &WallKind) -> Value {
    let mut m = Map::new();
    match kind {
        WallKind::SphericalPair { s, t, m: mm } => {
            m.insert("tag".to_owned(), Value::String("spherical_pair".into()));
            m.insert("s".to_owned(), pair_to_value(s));
            m.insert("t".to_owned(), pair_to_value(t));
            m.insert("m".to_owned(), bigint_to_value(mm));
        }
        WallKind::IsotropicSemiDefinite { s, t } => {
            m.insert(
                "tag".to_owned(),
                Value::String("isotropic_semi_definite".into()),
            );
            m.insert("s".to_owned(), pair_to_value(s));
            m.insert("t".to_owned(), pair_to_value(t));
        }
        WallKind::IsotropicHyperbolic { s, a, w } => {
            m.insert(
                "tag".to_owned(),
                Value::String("isotropic_hyperbolic".into()),
            );
            m.insert("s".to_owned(), pair_to_value(s));
            m.insert("a".to_owned(), bigint_to_value(a));
            m.insert("w".to_owned(), pair_to_value(w));
        }
        WallKind::HilbertChow => {
            m.insert("tag".to_owned(), Value::String("hilbert_chow".into()));
        }
        WallKind::Unclassified { square } => {
            m.insert("tag".to_owned(), Value::String("unclassified".into()));
            m.insert("square".to_owned(), bigint_to_value(square));
        }
    }
    Value::Object(m)
}

fn cmd_classify(ctx: &Ctx, bound: u64) -> Result<ExitCode, String> {
    let p = ctx.problem()?;
    let v = ctx.vector(p)?;
    let stab = p
        .stab
        .as_ref()
        .ok_or_else(|| "classify-wall needs a \"stab\" field".to_owned())?;
    let (h, coords) =
        wall_lattice_basis(stab, &p.lattice, v).map_err(|e| e.to_string())?;
    let kind = classify_wall_kind(&h, &coords, bound).map_err(|e| e.to_string())?;
    let mut m = Map::new();
    let (b1, b2) = h.basis.as_ref().expect("computed lattice has a basis");
    m.insert(
        "basis".to_owned(),
        Value::Array(vec![vector_to_value(b1), vector_to_value(b2)]),
    );
    let g = h.rank2.gram();
    m.insert(
        "gram".to_owned(),
        Value::Array(
            g.iter()
                .map(|row| Value::Array(row.iter().map(bigint_to_value).collect()))
                .collect(),
        ),
    );
    m.insert(
        "classification".to_owned(),
        Value::String(rank2_class_str(h.class).into()),
    );
    m.insert("vector_coords".to_owned(), pair_to_value(&coords));
    m.insert("kind".to_owned(), kind_to_value(&kind));
    ctx.write(&to_canonical_string(&Value::Object(m)))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_reduce(ctx: &Ctx, k: Option<u64>, bounds: Option<Bounds>) -> Result<ExitCode, String> {
    let p = ctx.problem()?;
    let v = ctx.vector(p)?;
    let k_final = k
        .map(BigInt::from)
        .or_else(|| p.k_final.clone())
        .or_else(|| ctx.config.k_final.clone())
        .unwrap_or_else(|| BigInt::from(2));
    let opts = ReductionOptions {
        k_final,
        cert_bounds: bounds_from(ctx, bounds),
    };
    let trace = run_reduction(&p.lattice, v, &opts).map_err(|e| e.to_string())?;
    ctx.write(&tracejson::emit_trace_json(&trace))?;
    let all_ok = trace
        .steps
        .iter()
        .all(|s| s.all_checks_ok())
        && trace.certificate.as_ref().map(|c| c.valid).unwrap_or(true);
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_plot(
    ctx: &Ctx,
    d: Option<u64>,
    n: Option<u64>,
    bounds: Option<Bounds>,
    quadrant: QuadrantArg,
    svg_path: Option<&std::path::Path>,
) -> Result<ExitCode, String> {
    let d = degree_from(ctx, d)?;
    let n = n
        .or_else(|| ctx.problem.as_ref().and_then(|p| p.n))
        .ok_or_else(|| "needs --n".to_owned())?;
    let bounds = bounds_from(ctx, bounds);
    let n_big = BigInt::from(n);
    let quadrant = match quadrant {
        QuadrantArg::Left => Quadrant::Left,
        QuadrantArg::Right => Quadrant::Right,
    };
    let mut walls = enumerate_candidate_walls(&d, &n_big, quadrant, &bounds)
        .map_err(|e| e.to_string())?;
    // the vertical wall at beta = 0 is always present
    let hc = MukaiVector::new(BigInt::from(0), vec![BigInt::from(0)], BigInt::from(1));
    if let WallOutcome::Wall(w) =
        wall_from_destabilizer(&d, &n_big, &hc).map_err(|e| e.to_string())?
    {
        walls.push(w);
    }
    let dg = svg::WallDiagram::with_auto_viewport(walls);
    let text = svg::render_walls_svg(&dg);
    match svg_path {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(
    ctx: &Ctx,
    n: Option<u64>,
    k: Option<u64>,
    bounds: Option<Bounds>,
) -> Result<ExitCode, String> {
    let n = n
        .or_else(|| ctx.problem.as_ref().and_then(|p| p.n))
        .ok_or_else(|| "needs --n".to_owned())?;
    let k = k
        .or_else(|| ctx.problem.as_ref().and_then(|p| p.k))
        .ok_or_else(|| "needs --k".to_owned())?;
    let bounds = bounds_from(ctx, bounds);
    let cert = certify_no_walls(n, k, &bounds).map_err(|e| e.to_string())?;
    let valid = cert.valid;
    ctx.write(&to_canonical_string(&tracejson::certificate_to_value(
        &cert,
    )))?;
    Ok(if valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
