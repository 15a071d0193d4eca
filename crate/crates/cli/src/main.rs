use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use strata_core::geometry::{
    build_nerve, mapper_pullback_cover, monomials_up_to_degree, DeltaRule, KernelMode,
    MonomialSet, Nerve, PointCloud, VanishingPresheaf,
};
use strata_core::io::{
    cover_to_json, parse_complex, parse_cover, parse_monomials, parse_points_csv, to_dot,
    StratificationDoc,
};
use strata_core::{
    coarsest_stratification, is_constructible, minimal_homogeneous_stratification, ConstantSheaf,
    DeltaMap, Error, FieldSpec, FiniteSpace, LocalHomologySheaf, MaximalElementSheaf,
    Stratification,
};

#[derive(Parser)]
#[command(name = "strata", version, about = "Sheaf-theoretic stratification of simplicial complexes and nerves")]
struct Cli {
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true, env = "STRATA_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratify a complex or the nerve of a point-cloud cover.
    #[command(subcommand)]
    Stratify(StratifyCommand),
    /// Pull an interval cover back along a function, then stratify its nerve.
    Mapper(MapperArgs),
    /// Emit only the δ-labeled Hasse diagram of a complex.
    Delta(DeltaArgs),
}

#[derive(Subcommand)]
enum StratifyCommand {
    /// Complex given by maximal simplices (JSON or plain text).
    Complex(ComplexArgs),
    /// Nerve of a cover of a point cloud.
    Nerve(NerveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SheafKind {
    LocalHomology,
    MaxElements,
    Constant,
    VanishingPoly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Dimension,
    Inclusion,
}

#[derive(Args)]
struct Common {
    /// Coefficient field for local homology: a prime such as 2 or Z/3, or Q.
    #[arg(long, default_value = "2")]
    field: FieldSpec,

    /// Compute the minimal homogeneous stratification.
    #[arg(long)]
    homogeneous: bool,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,

    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,

    /// Also write the δ-labeled Hasse diagram in DOT format here.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct Poly {
    /// Use every monomial of degree at most this.
    #[arg(long, conflicts_with = "monomials")]
    max_degree: Option<u32>,

    /// JSON list of exponent vectors.
    #[arg(long)]
    monomials: Option<PathBuf>,

    /// Relative singular-value threshold for the numerical kernel.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,

    /// Exact rational kernel instead of the SVD.
    #[arg(long)]
    exact: bool,

    /// Largest nerve simplex dimension (default: number of cover sets - 1).
    #[arg(long)]
    max_dim: Option<usize>,

    /// How the vanishing presheaf decides δ.
    #[arg(long, value_enum, default_value = "dimension")]
    delta_rule: RuleArg,
}

#[derive(Args)]
struct ComplexArgs {
    complex: PathBuf,

    #[arg(long, value_enum, default_value = "local-homology")]
    sheaf: SheafKind,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct NerveArgs {
    points: PathBuf,
    cover: PathBuf,

    #[arg(long, value_enum, default_value = "vanishing-poly")]
    sheaf: SheafKind,

    #[command(flatten)]
    poly: Poly,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct MapperArgs {
    points: PathBuf,

    /// Coordinate used as the function.
    #[arg(long, required_unless_present = "values", conflicts_with = "values")]
    function_column: Option<usize>,

    /// File with one function value per point, one per line.
    #[arg(long)]
    values: Option<PathBuf>,

    /// Comma-separated `lo:hi` intervals.
    #[arg(long, value_delimiter = ',', value_parser = parse_interval, required = true, allow_hyphen_values = true)]
    intervals: Vec<(f64, f64)>,

    /// Points closer than this are joined within an interval preimage.
    #[arg(long)]
    radius: f64,

    #[command(flatten)]
    poly: Poly,

    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DeltaArgs {
    complex: PathBuf,

    #[arg(long, value_enum, default_value = "local-homology")]
    sheaf: SheafKind,

    #[arg(long, default_value = "2")]
    field: FieldSpec,

    #[arg(long, value_enum, default_value = "dot")]
    format: Format,

    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad bound '{lo}'"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad bound '{hi}'"))?;
    if !(lo <= hi) {
        return Err(format!("empty interval '{s}'"));
    }
    Ok((lo, hi))
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MalformedInput(_) | Error::Io(_) | Error::Json(_) | Error::EmptyDimension => {
                Failure::Input(e.into())
            }
            _ => Failure::Internal(e.into()),
        }
    }
}

fn input<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Input)
}

fn read(path: &Path) -> Result<String, Failure> {
    input(fs::read_to_string(path).with_context(|| format!("reading {}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => input(fs::write(p, text).with_context(|| format!("writing {}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn delta_for(space: &FiniteSpace, sheaf: SheafKind, field: FieldSpec) -> Result<DeltaMap, Failure> {
    Ok(match sheaf {
        SheafKind::LocalHomology => DeltaMap::from_oracle(space, &LocalHomologySheaf::new(space, field)?),
        SheafKind::MaxElements => DeltaMap::from_oracle(space, &MaximalElementSheaf::new(space)),
        SheafKind::Constant => DeltaMap::from_oracle(space, &ConstantSheaf),
        SheafKind::VanishingPoly => {
            return Err(Failure::Input(anyhow::anyhow!(
                "the vanishing-polynomial presheaf needs a point cloud and a cover"
            )))
        }
    })
}

fn stratify(space: &FiniteSpace, dm: &DeltaMap, homogeneous: bool) -> Result<Stratification, Failure> {
    let s = if homogeneous {
        minimal_homogeneous_stratification(space, dm)?
    } else {
        coarsest_stratification(space, dm)?
    };
    if !is_constructible(space, dm, &s)? {
        return Err(Failure::Internal(anyhow::anyhow!("result is not constructible")));
    }
    Ok(s)
}

fn write_result(
    space: &FiniteSpace,
    dm: &DeltaMap,
    strat: &Stratification,
    names: Option<&[String]>,
    extra: Option<Value>,
    common: &Common,
) -> Result<(), Failure> {
    let dot = to_dot(space, dm, names);
    if let Some(p) = &common.dot {
        emit(Some(p), &dot)?;
    }
    let text = match common.format {
        Format::Dot => dot,
        Format::Json => {
            let mut doc = StratificationDoc::new(space, strat, dm)?;
            if let Some(n) = names {
                doc = doc.with_vertex_names(n.to_vec());
            }
            match extra {
                None => doc.to_json()?,
                Some(mut v) => {
                    v["stratification"] = serde_json::to_value(&doc).map_err(Error::from)?;
                    let mut s = serde_json::to_string(&v).map_err(Error::from)?;
                    s.push('\n');
                    s
                }
            }
        }
    };
    emit(common.output.as_deref(), &text)
}

fn monomials(poly: &Poly, n: usize) -> Result<MonomialSet, Failure> {
    let m = match (&poly.monomials, poly.max_degree) {
        (Some(p), _) => parse_monomials(&read(p)?)?,
        (None, Some(d)) => monomials_up_to_degree(n, d)?,
        (None, None) => {
            return Err(Failure::Input(anyhow::anyhow!(
                "give --max-degree or --monomials"
            )))
        }
    };
    Ok(m)
}

fn kernel_mode(poly: &Poly) -> Result<KernelMode, Failure> {
    if poly.exact {
        return Ok(KernelMode::Exact);
    }
    if !(poly.tol > 0.0) {
        return Err(Failure::Input(anyhow::anyhow!("--tol must be positive")));
    }
    Ok(KernelMode::Numerical { tol: poly.tol })
}

fn nerve_delta(
    nerve: &Nerve,
    cloud: &PointCloud,
    sheaf: SheafKind,
    poly: &Poly,
    field: FieldSpec,
) -> Result<(DeltaMap, Option<Vec<usize>>), Failure> {
    if sheaf != SheafKind::VanishingPoly {
        return Ok((delta_for(&nerve.space, sheaf, field)?, None));
    }
    let m = monomials(poly, cloud.dim())?;
    let rule = match poly.delta_rule {
        RuleArg::Dimension => DeltaRule::Dimension,
        RuleArg::Inclusion => DeltaRule::Inclusion,
    };
    let vp = VanishingPresheaf::new(nerve, cloud, &m, kernel_mode(poly)?, rule)?;
    let dims = (0..nerve.space.len()).map(|x| vp.dim(x)).collect();
    Ok((DeltaMap::from_oracle(&nerve.space, &vp), Some(dims)))
}

fn nerve_json(nerve: &Nerve, dims: Option<&[usize]>) -> Value {
    let simplices: Vec<Value> = (0..nerve.space.len())
        .map(|x| {
            let s = nerve.space.label(x).expect("nerves are face posets");
            let mut v = json!({
                "simplex": s.vertices(),
                "sets": s.vertices().iter().map(|&i| nerve.names[i as usize].as_str()).collect::<Vec<_>>(),
                "points": nerve.point_sets[x].len(),
            });
            if let Some(d) = dims {
                v["vanishing_dim"] = json!(d[x]);
            }
            v
        })
        .collect();
    json!({ "simplices": simplices })
}

fn run_complex(a: &ComplexArgs) -> Result<(), Failure> {
    let space = parse_complex(&read(&a.complex)?)?;
    let dm = delta_for(&space, a.sheaf, a.common.field)?;
    let s = stratify(&space, &dm, a.common.homogeneous)?;
    write_result(&space, &dm, &s, None, None, &a.common)
}

fn run_nerve(a: &NerveArgs) -> Result<(), Failure> {
    let cloud = parse_points_csv(&read(&a.points)?)?;
    let cover = parse_cover(&read(&a.cover)?)?;
    cover.check_indices(cloud.len())?;
    let nerve = build_nerve(&cover, a.poly.max_dim.unwrap_or(cover.len().saturating_sub(1)))?;
    let (dm, _) = nerve_delta(&nerve, &cloud, a.sheaf, &a.poly, a.common.field)?;
    let s = stratify(&nerve.space, &dm, a.common.homogeneous)?;
    write_result(&nerve.space, &dm, &s, Some(&nerve.names), None, &a.common)
}

fn run_mapper(a: &MapperArgs) -> Result<(), Failure> {
    let cloud = parse_points_csv(&read(&a.points)?)?;
    let values = match (&a.values, a.function_column) {
        (Some(p), _) => read(p)?
            .split_whitespace()
            .map(|v| v.parse::<f64>().map_err(|_| anyhow::anyhow!("bad function value '{v}'")))
            .collect::<anyhow::Result<Vec<f64>>>()
            .map_err(Failure::Input)?,
        (None, Some(k)) if k < cloud.dim() => cloud.coordinate(k),
        (None, Some(k)) => {
            return Err(Failure::Input(anyhow::anyhow!(
                "function column {k} out of range for {}-dimensional points",
                cloud.dim()
            )))
        }
        (None, None) => unreachable!("clap requires one of them"),
    };
    let cover = mapper_pullback_cover(&cloud, &values, &a.intervals, a.radius)?;
    let nerve = build_nerve(&cover, a.poly.max_dim.unwrap_or(cover.len().saturating_sub(1)))?;
    let (dm, dims) = nerve_delta(&nerve, &cloud, SheafKind::VanishingPoly, &a.poly, a.common.field)?;
    let s = stratify(&nerve.space, &dm, a.common.homogeneous)?;
    let extra = json!({
        "cover": cover_to_json(&cover),
        "nerve": nerve_json(&nerve, dims.as_deref()),
    });
    write_result(&nerve.space, &dm, &s, Some(&nerve.names), Some(extra), &a.common)
}

fn run_delta(a: &DeltaArgs) -> Result<(), Failure> {
    let space = parse_complex(&read(&a.complex)?)?;
    let dm = delta_for(&space, a.sheaf, a.field)?;
    let text = match a.format {
        Format::Dot => to_dot(&space, &dm, None),
        Format::Json => {
            let edges: Vec<Value> = dm
                .edges()
                .map(|(x, y, iso)| json!({ "from": space.name(x), "to": space.name(y), "iso": iso }))
                .collect();
            let values: Vec<Value> = (0..space.len())
                .map(|x| json!({ "simplex": space.name(x), "value": dm.summary(x) }))
                .collect();
            let mut s = serde_json::to_string(&json!({ "values": values, "delta_edges": edges }))
                .map_err(Error::from)?;
            s.push('\n');
            s
        }
    };
    emit(a.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Stratify(StratifyCommand::Complex(a)) => run_complex(a),
        Command::Stratify(StratifyCommand::Nerve(a)) => run_nerve(a),
        Command::Mapper(a) => run_mapper(a),
        Command::Delta(a) => run_delta(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(3)
        }
    }
}
