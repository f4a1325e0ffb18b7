//! `qar`: build quartered Aztec rectangles, count and list their tilings,
//! enumerate triangles, and check the correspondence between the two.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes:
//! 0 success, 2 bad parameters or usage, 3 a checked invariant failed,
//! 4 unreadable or malformed input, 5 an enumeration cap or time budget was hit.

use std::fmt::Display;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use qar::amt::{enumerate_amts, q_enumeration, Amt, AmtError};
use qar::bijection::{fiber_with, map_tiling, verify_bijection, BijectionError, Mode};
use qar::formulas::{eval_e, eval_o, verify_corollary, ArgVector, Budget, FormulaError};
use qar::region::{
    aztec_diamond, build, quartered_aztec_diamond, Family, QuarterVariant, RegionError, RowRegion,
};
use qar::render::{render, Format, Renderable};
use qar::tiling::{count_tilings, enumerate_tilings_with, EnumerationCap, Tiling, TilingError};
use serde_json::{json, Value};

const EXIT_PARAMETER: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_CAPACITY: u8 = 5;

#[derive(Parser)]
#[command(
    name = "qar",
    version,
    about = "Quartered Aztec rectangles, their tilings and AMTs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate E(a) or O(a) exactly.
    Formula(FormulaArgs),
    /// Count the tilings of a region with the transfer-matrix counter.
    Count(RegionArgs),
    /// List every tiling of a region, one JSON array per line.
    Enumerate {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Print a region as JSON.
    Region(RegionArgs),
    /// List the AMTs with a given bottom row, one JSON object per line.
    AmtEnum(BottomArgs),
    /// Sum q^|S| over the AMTs with a given bottom row.
    Qenum {
        #[command(flatten)]
        bottom: BottomArgs,
        /// Exact rational weight, e.g. `2` or `1/2`.
        #[arg(long)]
        q: BigRational,
    },
    /// Map a tiling to its AMT.
    Map {
        #[arg(long)]
        mode: Option<Mode>,
        /// Region JSON, inline or a file path.
        #[arg(long)]
        region: String,
        /// Tiling JSON, inline or a file path.
        #[arg(long)]
        tiling: String,
    },
    /// List the tilings that map to an AMT.
    Fiber {
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long)]
        region: String,
        #[arg(long)]
        amt: String,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Check the identity chain and the bijection for every a of size k in 1..=n.
    Verify {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u32,
        /// Seconds before the identity sweep gives up.
        #[arg(long, default_value_t = 600)]
        time_limit: u64,
        /// Skip the bijection check for short regions with more cells.
        #[arg(long, default_value_t = 60)]
        bijection_cells: usize,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Draw a region, a tiling or an AMT.
    Render {
        #[arg(long, default_value = "ascii")]
        format: Format,
        /// Region, AMT, or `{"region": .., "tiling": ..}`; inline or a path.
        #[arg(long)]
        input: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Which {
    #[arg(long = "E")]
    e: bool,
    #[arg(long = "O")]
    o: bool,
}

#[derive(Args)]
struct FormulaArgs {
    #[command(flatten)]
    which: Which,
    /// Comma-separated, strictly increasing.
    #[arg(long)]
    a: List,
}

#[derive(Args)]
struct RegionArgs {
    #[arg(long, requires_all = ["k", "n", "a"], conflicts_with_all = ["aztec", "quarter"])]
    family: Option<Family>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    a: Option<List>,
    #[arg(long)]
    tall: bool,
    /// The Aztec diamond of this order instead of a quartered region.
    #[arg(long, conflicts_with = "quarter")]
    aztec: Option<u32>,
    /// A quarter of the Aztec diamond of this order; see --variant.
    #[arg(long, requires = "variant")]
    quarter: Option<u32>,
    /// r, ka or kna.
    #[arg(long)]
    variant: Option<QuarterVariant>,
    /// Region JSON, inline or a file path.
    #[arg(long, conflicts_with_all = ["family", "aztec", "quarter"])]
    region: Option<String>,
}

#[derive(Args)]
struct BottomArgs {
    #[arg(long)]
    order: usize,
    /// Comma-separated positive entries of the bottom row; empty for order 1.
    #[arg(long, default_value = "")]
    bottom: List,
}

#[derive(Args)]
struct CapArgs {
    #[arg(long, default_value_t = 400)]
    max_cells: usize,
    #[arg(long, default_value_t = 10_000_000)]
    max_tilings: u64,
    /// Seconds.
    #[arg(long, default_value_t = 60)]
    enum_time_limit: u64,
}

impl CapArgs {
    fn cap(&self) -> EnumerationCap {
        EnumerationCap {
            max_cells: self.max_cells,
            max_tilings: self.max_tilings,
            time_limit: Duration::from_secs(self.enum_time_limit),
        }
    }
}

#[derive(Clone, Debug)]
struct List(Vec<u32>);

impl std::str::FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Ok(List(Vec::new()));
        }
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| format!("`{x}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("entries must be strictly increasing: {s}"));
        }
        Ok(List(v))
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<RegionError> for Failure {
    fn from(e: RegionError) -> Self {
        let code = match e {
            RegionError::Malformed(_) => EXIT_INPUT,
            RegionError::Untileable { .. } => EXIT_INVARIANT,
            _ => EXIT_PARAMETER,
        };
        Failure::new(code, e)
    }
}

impl From<TilingError> for Failure {
    fn from(e: TilingError) -> Self {
        let code = match e {
            TilingError::TooManyCells { .. }
            | TilingError::TooManyTilings { .. }
            | TilingError::TimeLimit(_) => EXIT_CAPACITY,
            _ => EXIT_PARAMETER,
        };
        Failure::new(code, e)
    }
}

impl From<AmtError> for Failure {
    fn from(e: AmtError) -> Self {
        Failure::new(EXIT_PARAMETER, e)
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Self {
        Failure::new(EXIT_PARAMETER, e)
    }
}

impl From<BijectionError> for Failure {
    fn from(e: BijectionError) -> Self {
        match e {
            BijectionError::Tiling(t) => t.into(),
            BijectionError::Invariant(_) => Failure::new(EXIT_INVARIANT, e),
            _ => Failure::new(EXIT_PARAMETER, e),
        }
    }
}

/// Inline JSON when it looks like JSON, otherwise a path to read.
fn load<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with(['{', '[']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| {
            Failure::new(EXIT_INPUT, format!("cannot read {what} from `{arg}`: {e}"))
        })?
    };
    serde_json::from_str(&text)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("malformed {what}: {e}")))
}

impl RegionArgs {
    fn region(&self) -> Result<RowRegion, Failure> {
        if let Some(src) = &self.region {
            return load(src, "region");
        }
        if let Some(order) = self.aztec {
            return Ok(aztec_diamond(order)?);
        }
        if let (Some(order), Some(v)) = (self.quarter, self.variant) {
            return Ok(quartered_aztec_diamond(order, v)?);
        }
        match (self.family, self.k, self.n, &self.a) {
            (Some(family), Some(k), Some(n), Some(a)) => Ok(build(family, k, n, &a.0, self.tall)?),
            _ => Err(Failure::new(
                EXIT_PARAMETER,
                "give --family/--k/--n/--a, --aztec, --quarter with --variant, or --region",
            )),
        }
    }
}

fn mode_for(region: &RowRegion, mode: Option<Mode>) -> Result<Mode, Failure> {
    mode.or_else(|| Mode::for_family(region.family()))
        .ok_or_else(|| {
            Failure::new(
                EXIT_PARAMETER,
                "custom regions have no map; pass a quartered region",
            )
        })
}

fn line(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match cli.command {
        Command::Formula(args) => {
            let a = ArgVector::new(args.a.0)?;
            let v = if args.which.e { eval_e(&a) } else { eval_o(&a) };
            out = format!("{v}\n");
        }
        Command::Count(args) => {
            out = format!("{}\n", count_tilings(&args.region()?));
        }
        Command::Region(args) => {
            out = line(&args.region()?) + "\n";
        }
        Command::Enumerate { region, cap } => {
            for t in enumerate_tilings_with(&region.region()?, &cap.cap())? {
                out += &(line(&t) + "\n");
            }
        }
        Command::AmtEnum(b) => {
            for amt in enumerate_amts(b.order, &b.bottom.0)? {
                out += &(line(&amt) + "\n");
            }
        }
        Command::Qenum { bottom, q } => {
            out = format!("{}\n", q_enumeration(bottom.order, &bottom.bottom.0, &q)?);
        }
        Command::Map {
            mode,
            region,
            tiling,
        } => {
            let region: RowRegion = load(&region, "region")?;
            let tiling: Tiling = load(&tiling, "tiling")?;
            let mode = mode_for(&region, mode)?;
            out = line(&map_tiling(&region, &tiling, mode)?) + "\n";
        }
        Command::Fiber {
            mode,
            region,
            amt,
            cap,
        } => {
            let region: RowRegion = load(&region, "region")?;
            let amt: Amt = load(&amt, "AMT")?;
            let mode = mode_for(&region, mode)?;
            let f = fiber_with(&region, &amt, mode, &cap.cap())?;
            out = line(&json!({
                "amt": amt,
                "size": f.tilings.len(),
                "expected": 1u64 << f.exponent,
                "branch_points": f.branches.branch_points,
                "non_block_branches": f.branches.non_block,
                "tilings": f.tilings,
            })) + "\n";
            if f.branches.non_block > 0 {
                print!("{out}");
                return Err(Failure::new(
                    EXIT_INVARIANT,
                    "search branched outside a 2x2 block",
                ));
            }
        }
        Command::Verify {
            family,
            k,
            n,
            time_limit,
            bijection_cells,
            cap,
        } => return verify(family, k, n, time_limit, bijection_cells, &cap.cap()),
        Command::Render { format, input } => {
            let value: Value = load(&input, "render input")?;
            let malformed =
                |e: serde_json::Error| Failure::new(EXIT_INPUT, format!("malformed input: {e}"));
            out = if let Some(t) = value.get("tiling") {
                let region: RowRegion =
                    serde_json::from_value(value.get("region").cloned().unwrap_or(Value::Null))
                        .map_err(malformed)?;
                let tiling: Tiling = serde_json::from_value(t.clone()).map_err(malformed)?;
                tiling.validate(&region)?;
                render(Renderable::Tiling(&region, &tiling), format)
            } else if value.get("order").is_some() {
                let amt: Amt = serde_json::from_value(value).map_err(malformed)?;
                render(Renderable::Amt(&amt), format)
            } else {
                let region: RowRegion = serde_json::from_value(value).map_err(malformed)?;
                render(Renderable::Region(&region), format)
            };
        }
    }
    Ok(out)
}

/// Streams results so partial output survives a failure.
fn verify(
    family: Family,
    k: usize,
    n: u32,
    time_limit: u64,
    bijection_cells: usize,
    cap: &EnumerationCap,
) -> Result<String, Failure> {
    let budget = Budget {
        time_limit: Some(Duration::from_secs(time_limit)),
    };
    let report = verify_corollary(k, n, family, &budget)?;
    let mut failures = 0;
    for row in &report.rows {
        println!("{}", line(&json!({"check": "identity", "row": row})));
        failures += usize::from(!row.equal);
    }
    let mode = Mode::for_family(family).expect("quartered family");
    let mut skipped = 0;
    for row in &report.rows {
        let region = build(family, k, n, &row.a, false)?;
        if region.cell_count() > bijection_cells {
            skipped += 1;
            continue;
        }
        let rep = verify_bijection(&region, mode, cap)?;
        failures += usize::from(!rep.ok());
        println!("{}", line(&json!({"check": "bijection", "report": rep})));
    }
    if skipped > 0 {
        eprintln!("bijection skipped for {skipped} regions above {bijection_cells} cells");
    }
    if failures > 0 {
        return Err(Failure::new(
            EXIT_INVARIANT,
            format!("{failures} checks failed"),
        ));
    }
    if !report.complete {
        return Err(Failure::new(
            EXIT_CAPACITY,
            "time limit reached before every tuple was checked",
        ));
    }
    eprintln!("{} tuples checked, all equal", report.rows.len());
    Ok(String::new())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
