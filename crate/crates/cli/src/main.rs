use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use billiard_bounds::billiards::{
    compare_to_bound, find_orbits, BoundComparison, SearchConfig, Shape,
};
use billiard_bounds::bounds::BoundReport;
use billiard_bounds::cells::{
    rd2_bouquet_assembly, rd2_sphere_complex, rd3_bouquet_assembly, BouquetSpec,
};
use billiard_bounds::dold::dold_rd_power;
use billiard_bounds::power::{rd_power_homology, PowerConfig, SimplicialComplex};
use billiard_bounds::reproduce::{run_all, run_selected, CriterionOutcome};
use billiard_bounds::{BettiVector, Error};
use billiard_bounds_cli::table;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Mod-2 homology of dihedral powers and lower bounds for periodic billiard
/// trajectories.
///
/// Results are written to stdout as JSON, or as a `path,value` CSV table with
/// `--csv`. The power engine's cell cap can be raised with the
/// BILLIARD_BOUNDS_CELL_CAP environment variable.
#[derive(Parser, Debug)]
#[command(name = "billiard-bounds", version)]
struct Cli {
    /// Emit a path,value CSV table instead of JSON.
    #[arg(long, global = true)]
    csv: bool,

    /// Also write a run manifest (parameters, version, wall time, result digest).
    #[arg(long, global = true, value_name = "FILE")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
enum Command {
    /// Lower bounds on 2- and 3-periodic trajectories from Betti data.
    Bounds(BoundsArgs),
    /// Cell model homology of the reduced square of S^m.
    Rd2Sphere(SphereArgs),
    /// Square or cube assembly for a sphere bouquet.
    Rd3Assembly(AssemblyArgs),
    /// Symmetric power homology through simplicial modules.
    Dold(DoldArgs),
    /// Dihedral power homology of a simplicial complex by subdivision.
    Power(PowerArgs),
    /// Numerical search for periodic billiard trajectories.
    Billiards(BilliardArgs),
    /// Run the acceptance table and report pass/fail per row.
    ReproducePaper(ReproduceArgs),
}

#[derive(Args, Debug, Serialize)]
struct BoundsArgs {
    /// Total Betti number (mod 2).
    #[arg(long = "B", value_name = "B", requires = "m", conflicts_with = "betti")]
    b: Option<u64>,
    /// Manifold dimension.
    #[arg(long)]
    m: Option<u64>,
    /// Full Betti vector b_0,...,b_m of a closed manifold.
    #[arg(long, value_delimiter = ',', required_unless_present = "b")]
    betti: Option<Vec<usize>>,
}

#[derive(Args, Debug, Serialize)]
struct SphereArgs {
    #[arg(long)]
    m: usize,
    /// Include the boundary matrices.
    #[arg(long)]
    complex: bool,
}

#[derive(Args, Debug, Serialize)]
struct BouquetArgs {
    /// Top sphere dimension.
    #[arg(long)]
    m: usize,
    /// Multiplicities k_1,...,k_m; defaults to the single sphere S^m.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u64>>,
    /// Allow multiplicities without Poincare-duality symmetry.
    #[arg(long)]
    no_duality: bool,
}

impl BouquetArgs {
    fn spec(&self) -> Result<BouquetSpec, Error> {
        match &self.k {
            Some(k) => BouquetSpec::new(self.m, k.clone(), !self.no_duality),
            None if self.m == 0 => Err(Error::InvalidArgument(
                "top dimension must be at least 1".into(),
            )),
            None => BouquetSpec::new(self.m, BouquetSpec::sphere(self.m).k, !self.no_duality),
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct AssemblyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    bouquet: BouquetArgs,
    /// 2 for the square, 3 for the cube.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    period: u8,
}

#[derive(Args, Debug, Serialize)]
struct DoldArgs {
    #[command(flatten)]
    #[serde(flatten)]
    bouquet: BouquetArgs,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    p: u8,
}

#[derive(Args, Debug, Serialize)]
struct PowerArgs {
    /// Facet list, one simplex per line.
    #[arg(long, value_name = "FILE", required_unless_present_any = ["sphere", "polygon"])]
    complex: Option<PathBuf>,
    /// Use the boundary of the (M+1)-simplex.
    #[arg(long, value_name = "M", conflicts_with_all = ["complex", "polygon"])]
    sphere: Option<usize>,
    /// Use an N-gon.
    #[arg(long, value_name = "N", conflicts_with = "complex")]
    polygon: Option<usize>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
    p: u8,
    /// Barycentric subdivision rounds of the product cells.
    #[arg(long)]
    rounds: Option<usize>,
    /// Fail instead of subdividing once more when the action is not regular.
    #[arg(long)]
    no_escalate: bool,
}

#[derive(Args, Debug, Serialize)]
struct BilliardArgs {
    /// ellipse:A,B | circle:R | perturbed-ellipse:A,B[,K:EPS...] | ellipsoid:A,B,C | torus:R,r
    #[arg(long)]
    shape: Shape,
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    period: u8,
    /// Multistart lattice points per parameter.
    #[arg(long)]
    density: Option<usize>,
    /// Write the full orbit list to this file.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ReproduceArgs {
    /// Run only these criteria (1-based ids).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: Value,
    parameters: Value,
    tool_version: &'static str,
    wall_time_ms: u128,
    result_digest: String,
}

/// A command result plus the part of it that is covered by the digest.
struct Outcome {
    result: Value,
    digest_view: Value,
    ok: bool,
}

impl Outcome {
    fn plain(result: Value, ok: bool) -> Self {
        Self {
            digest_view: result.clone(),
            result,
            ok,
        }
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::Duality(_)
            | Error::NonIntegral(_) => Failure::Usage(e.to_string()),
            other => Failure::Run(other.to_string()),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Run(format!("serialization: {e}")))
}

fn bounds(a: &BoundsArgs) -> Result<Outcome, Failure> {
    let report = match (&a.betti, a.b, a.m) {
        (Some(betti), _, _) => BoundReport::from_betti(&BettiVector::new(betti.clone()))?,
        (None, Some(b), Some(m)) => BoundReport::from_sum(b, m)?,
        _ => return Err(Failure::Usage("give --B and --m, or --betti".into())),
    };
    Ok(Outcome::plain(to_value(&report)?, report.lemmas_hold()))
}

fn rd2_sphere(a: &SphereArgs) -> Result<Outcome, Failure> {
    let complex = rd2_sphere_complex(a.m)?;
    let betti = complex.betti()?;
    let mut v = json!({
        "m": a.m,
        "dims": complex.dims(),
        "betti": betti.values,
        "sum": betti.sum(),
    });
    if a.complex {
        v["complex"] = to_value(&complex.to_json())?;
    }
    Ok(Outcome::plain(v, true))
}

fn assembly(a: &AssemblyArgs) -> Result<Outcome, Failure> {
    let spec = a.bouquet.spec()?;
    let asm = if a.period == 2 {
        rd2_bouquet_assembly(&spec)?
    } else {
        rd3_bouquet_assembly(&spec)?
    };
    let expansion_ok = asm
        .expansion
        .as_ref()
        .is_none_or(|e| e.groups_match && e.expanded_matches_plus);
    let ok = (asm.formula.is_none() || asm.matches) && expansion_ok;
    Ok(Outcome::plain(to_value(&asm)?, ok))
}

fn dold(a: &DoldArgs) -> Result<Outcome, Failure> {
    let route = dold_rd_power(&a.bouquet.spec()?, a.p as usize)?;
    Ok(Outcome::plain(to_value(&route)?, true))
}

fn read_complex(path: &Path) -> Result<SimplicialComplex, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(SimplicialComplex::parse(&text)?)
}

fn power(a: &PowerArgs) -> Result<Outcome, Failure> {
    let k = match (&a.complex, a.sphere, a.polygon) {
        (Some(path), _, _) => read_complex(path)?,
        (None, Some(m), _) => SimplicialComplex::simplex_boundary(m + 1)?,
        (None, None, Some(n)) => SimplicialComplex::polygon(n)?,
        _ => {
            return Err(Failure::Usage(
                "give --complex, --sphere or --polygon".into(),
            ))
        }
    };
    let mut cfg = PowerConfig::from_env()?;
    if let Some(r) = a.rounds {
        cfg.rounds = r;
    }
    cfg.escalate = !a.no_escalate;
    let h = rd_power_homology(&k, a.p as usize, &cfg)?;
    let ok = h.burnside.holds();
    Ok(Outcome::plain(
        json!({ "config": to_value(&cfg)?, "homology": to_value(&h)? }),
        ok,
    ))
}

fn billiards(a: &BilliardArgs) -> Result<Outcome, Failure> {
    let cfg = SearchConfig {
        density: a.density,
        ..SearchConfig::default()
    };
    let out = find_orbits(&a.shape, a.period as usize, &cfg)?;
    let betti = a.shape.betti();
    let b: u64 = betti.iter().map(|&x| x as u64).sum();
    let m = a.shape.dim() as u64;
    let verdict = compare_to_bound(&out.orbits, b, m, a.period as usize)?;
    let full = to_value(&out)?;
    if let Some(path) = &a.json {
        let text = serde_json::to_string_pretty(&full).map_err(|e| Failure::Run(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))?;
    }
    let ok = !matches!(verdict, BoundComparison::Fail { .. });
    let mut result = full;
    result["bound"] = to_value(&verdict)?;
    Ok(Outcome::plain(result, ok))
}

fn reproduce(a: &ReproduceArgs) -> Result<Outcome, Failure> {
    let outcomes: Vec<CriterionOutcome> = match &a.only {
        Some(ids) => run_selected(ids)?,
        None => run_all(),
    };
    for o in &outcomes {
        eprintln!("{}", o.line());
    }
    let ok = outcomes.iter().all(|o| o.passed);
    let digest_view = outcomes
        .iter()
        .map(|o| json!({ "id": o.id, "passed": o.passed }))
        .collect();
    Ok(Outcome {
        result: to_value(&outcomes)?,
        digest_view,
        ok,
    })
}

fn dispatch(cmd: &Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Bounds(a) => bounds(a),
        Command::Rd2Sphere(a) => rd2_sphere(a),
        Command::Rd3Assembly(a) => assembly(a),
        Command::Dold(a) => dold(a),
        Command::Power(a) => power(a),
        Command::Billiards(a) => billiards(a),
        Command::ReproducePaper(a) => reproduce(a),
    }
}

fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

fn render(cli: &Cli, outcome: &Outcome) -> Result<Vec<u8>, Failure> {
    if cli.csv {
        let mut buf = Vec::new();
        table::write_csv(&outcome.result, &mut buf).map_err(|e| Failure::Run(e.to_string()))?;
        Ok(buf)
    } else {
        let mut text = serde_json::to_string_pretty(&outcome.result)
            .map_err(|e| Failure::Run(e.to_string()))?;
        text.push('\n');
        Ok(text.into_bytes())
    }
}

fn write_manifest(cli: &Cli, path: &Path, outcome: &Outcome, wall_ms: u128) -> Result<(), Failure> {
    let mut parameters = to_value(&cli.command)?;
    let subcommand = parameters
        .as_object_mut()
        .and_then(|m| m.remove("subcommand"))
        .unwrap_or(Value::Null);
    let manifest = RunManifest {
        subcommand,
        parameters,
        tool_version: env!("CARGO_PKG_VERSION"),
        wall_time_ms: wall_ms,
        result_digest: digest(&outcome.digest_view),
    };
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure::Run(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| Failure::Run(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, outcome: &Outcome, wall_ms: u128) -> Result<(), Failure> {
    let bytes = render(cli, outcome)?;
    if let Some(path) = &cli.manifest {
        write_manifest(cli, path, outcome, wall_ms)?;
    }
    match std::io::stdout().lock().write_all(&bytes) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::Run(format!("stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = dispatch(&cli.command).and_then(|o| {
        emit(&cli, &o, start.elapsed().as_millis())?;
        Ok(o.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: one or more checks failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
