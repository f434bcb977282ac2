mod output;

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fknichols::cyclic_fk::{
    check_groupoid, counterexample_family, enumerate_subsystems, replay_witness, sweep_with, SubsystemOptions,
    SweepConfig, SweepEntry, SweepStatus, DEFAULT_HEURISTIC_CAP,
};
use fknichols::diagonal::{
    cyclic_braiding, is_cartan_type, pbw_dimension, pbw_hilbert_series, pbw_top_degree, root_orders, DiagonalBraiding,
    DiagonalError, Dimension, DEFAULT_MAX_OBJECTS, DEFAULT_MAX_ROOTS,
};
use fknichols::reflection_groups::{
    decompose_yd, enumerate_reflections, expected_summand_dims, is_braid_indecomposable, reflection_census,
    yd_module, GroupError, GroupParams,
};
use fknichols::symmetrizer::{
    hilbert_compare, nichols_hilbert, quadratic_hilbert, BraidedSpace, Budget, HilbertData, Mode, SymmetrizerError,
};

use output::{join, Format, Report};

const EXIT_DOMAIN: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "fknichols", version, about = "Weyl groupoids, reflection-group braidings and Nichols algebra Hilbert series")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, short, global = true, env = "FKNICHOLS_JOBS", default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weyl groupoid of the full cyclic braiding C_n.
    #[command(subcommand)]
    Groupoid(GroupoidCmd),
    /// Finite connected sub-diagrams of C_n.
    Subsystems {
        n: u64,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        /// Also list classes already present for a proper divisor of n.
        #[arg(long)]
        include_inherited: bool,
        /// Also list connected subsets without a finite root system.
        #[arg(long)]
        include_infinite: bool,
        #[arg(long, default_value_t = 1000)]
        max_roots: usize,
    },
    /// Reflections of G(m,p,n).
    #[command(subcommand)]
    Group(GroupCmd),
    /// Yetter-Drinfeld module spanned by the reflections.
    #[command(subcommand)]
    Yd(YdCmd),
    /// Nichols algebra graded dimensions.
    #[command(subcommand)]
    Nichols(HilbertCmd),
    /// Quadratic cover graded dimensions.
    #[command(subcommand)]
    Fk(HilbertCmd),
    /// Nichols algebra against its quadratic cover.
    #[command(subcommand)]
    Hilbert(CompareCmd),
    /// PBW dimension and Hilbert series of a cyclic braiding.
    #[command(subcommand)]
    Pbw(PbwCmd),
}

#[derive(Subcommand)]
enum GroupoidCmd {
    /// Decide whether the groupoid of C_n exists.
    Check {
        n: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_OBJECTS)]
        max_objects: usize,
    },
    /// Check every 2 <= n <= max.
    Sweep {
        #[arg(long)]
        max: u64,
        /// Recompute every n instead of lifting failures from divisors.
        #[arg(long)]
        verify: bool,
        /// Skip the short-word search and go to exploration directly.
        #[arg(long)]
        no_heuristic: bool,
        #[arg(long, default_value_t = DEFAULT_HEURISTIC_CAP)]
        heuristic_cap: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_OBJECTS)]
        max_objects: usize,
        /// Append finished entries here and reuse entries already present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Exit 1 unless existence holds exactly for primes and n = 4.
        #[arg(long)]
        expect_conjecture: bool,
        /// Keep per-entry timings in the report.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order and reflections of G(m,p,n).
    Info { m: u64, p: u64, n: usize },
}

#[derive(Subcommand)]
enum YdCmd {
    /// Simple summands of the reflection module of G(m,p,n).
    Decompose { m: u64, p: u64, n: usize },
}

#[derive(Subcommand)]
enum HilbertCmd {
    Hilbert(SpaceArgs),
}

#[derive(Subcommand)]
enum CompareCmd {
    Compare(SpaceArgs),
}

#[derive(Subcommand)]
enum PbwCmd {
    /// PBW dimension of a cyclic braiding.
    Dim {
        n: u64,
        /// Vertex subset of 1..n-1 (default: all).
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        subset: Option<Vec<u64>>,
        #[arg(long, default_value_t = DEFAULT_MAX_ROOTS)]
        max_roots: usize,
        /// Also print the PBW series through this degree.
        #[arg(long)]
        series: Option<usize>,
    },
}

#[derive(Args)]
struct SpaceArgs {
    /// Reflection module of G(m,p,n).
    #[arg(long, num_args = 3, value_names = ["M", "P", "N"], conflicts_with = "cyclic", required_unless_present = "cyclic")]
    group: Option<Vec<u64>>,
    /// Cyclic braiding C_n.
    #[arg(long)]
    cyclic: Option<u64>,
    /// Vertex subset for --cyclic (default: all of 1..n-1).
    #[arg(long, num_args = 1.., value_delimiter = ',', requires = "cyclic")]
    subset: Option<Vec<u64>>,
    #[arg(long)]
    max_degree: usize,
    /// Exact arithmetic in the cyclotomic field (default).
    #[arg(long, conflicts_with = "modular")]
    exact: bool,
    /// Arithmetic modulo a large prime.
    #[arg(long)]
    modular: bool,
    /// Index of the prime used by --modular.
    #[arg(long, default_value_t = 0)]
    seed: usize,
    /// Largest word orbit handled by one elimination.
    #[arg(long)]
    max_block: Option<usize>,
}

enum Failure {
    Domain(String),
    Resource(String),
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<DiagonalError> for Failure {
    fn from(e: DiagonalError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<SymmetrizerError> for Failure {
    fn from(e: SymmetrizerError) -> Self {
        match e {
            SymmetrizerError::Resource { .. } => Failure::Resource(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

/// A report plus an exit status for checks that ran but did not hold.
struct Outcome {
    report: Report,
    ok: bool,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
    };
    let format = cli.format;
    let result = pool.install(|| dispatch(cli.command));
    match result {
        Ok(outcome) => {
            let text = outcome.report.render(format);
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_DOMAIN);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_DOMAIN)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Groupoid(GroupoidCmd::Check { n, max_objects }) => groupoid_check(n, max_objects).map(Into::into),
        Command::Groupoid(GroupoidCmd::Sweep {
            max,
            verify,
            no_heuristic,
            heuristic_cap,
            max_objects,
            checkpoint,
            expect_conjecture,
            timings,
        }) => {
            let config = SweepConfig {
                max_n: max,
                heuristic_first: !no_heuristic,
                verify,
                heuristic_cap,
                max_objects,
            };
            groupoid_sweep(&config, checkpoint, expect_conjecture, timings)
        }
        Command::Subsystems {
            n,
            max_rank,
            include_inherited,
            include_infinite,
            max_roots,
        } => {
            let opts = SubsystemOptions {
                max_rank,
                include_inherited,
                include_infinite,
                max_roots,
            };
            subsystems(n, &opts).map(Into::into)
        }
        Command::Group(GroupCmd::Info { m, p, n }) => group_info(m, p, n).map(Into::into),
        Command::Yd(YdCmd::Decompose { m, p, n }) => yd_decompose(m, p, n).map(Into::into),
        Command::Nichols(HilbertCmd::Hilbert(args)) => hilbert("nichols hilbert", &args, Series::Nichols).map(Into::into),
        Command::Fk(HilbertCmd::Hilbert(args)) => hilbert("fk hilbert", &args, Series::Quadratic).map(Into::into),
        Command::Hilbert(CompareCmd::Compare(args)) => hilbert("hilbert compare", &args, Series::Both).map(Into::into),
        Command::Pbw(PbwCmd::Dim {
            n,
            subset,
            max_roots,
            series,
        }) => pbw_dim(n, subset, max_roots, series).map(Into::into),
    }
}

fn check_n(n: u64) -> Result<(), Failure> {
    if n < 2 {
        return Err(Failure::Domain(format!("n must be at least 2, got {n}")));
    }
    Ok(())
}

fn status_cells(status: &SweepStatus) -> [String; 3] {
    match status {
        SweepStatus::Exists => ["exists".into(), String::new(), String::new()],
        SweepStatus::FailsAt {
            witness,
            vertex,
            neighbor,
            edge_label,
        } => [
            "failsAt".into(),
            if witness.is_empty() {
                "id".into()
            } else {
                witness.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join(" ")
            },
            format!("s{vertex} (neighbor {neighbor}, ξ^{edge_label})"),
        ],
        SweepStatus::BoundExceeded => ["boundExceeded".into(), String::new(), String::new()],
    }
}

fn entry_value(e: &SweepEntry, timings: bool) -> Value {
    let mut v = serde_json::to_value(e).expect("serializable");
    if !timings {
        if let Value::Object(map) = &mut v {
            map.remove("elapsedMs");
        }
    }
    v
}

fn groupoid_check(n: u64, max_objects: usize) -> Result<Report, Failure> {
    check_n(n)?;
    let entry = if max_objects == DEFAULT_MAX_OBJECTS {
        check_groupoid(n)
    } else {
        let config = SweepConfig {
            verify: true,
            max_objects,
            ..SweepConfig::new(n)
        };
        let report = sweep_with(&config, BTreeMap::new(), |_| {});
        report.entries[&n].clone()
    };
    let replays = match entry.status {
        SweepStatus::FailsAt { .. } => Some(replay_witness(n, &entry.status)),
        _ => None,
    };
    let family = counterexample_family(n);
    let cells = status_cells(&entry.status);
    let mut report = Report::new("groupoid check");
    if let Value::Object(map) = entry_value(&entry, false) {
        report.payload = map;
    }
    report = report
        .field("cartanType", is_cartan_type(&fknichols::cyclic_fk::full_braiding(n)))
        .field("witnessReplays", replays)
        .field("counterexampleFamily", family.iter().map(|&(p, r)| [p, r]).collect::<Vec<_>>());
    let objects = entry.objects.map(|o| o.to_string()).unwrap_or_default();
    Ok(report.table(
        &["n", "status", "witness", "undefined", "objects", "method"],
        vec![vec![
            n.to_string(),
            cells[0].clone(),
            cells[1].clone(),
            cells[2].clone(),
            objects,
            format!("{:?}", entry.method).to_lowercase(),
        ]],
    ))
}

fn read_checkpoint(path: &PathBuf) -> Result<BTreeMap<u64, SweepEntry>, Failure> {
    let mut done = BTreeMap::new();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(done),
        Err(e) => return Err(e.into()),
    };
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<SweepEntry>(&line) {
            Ok(e) => {
                done.insert(e.n, e);
            }
            // a torn final line from an interrupted run
            Err(_) => eprintln!("checkpoint line {} ignored", i + 1),
        }
    }
    Ok(done)
}

fn groupoid_sweep(
    config: &SweepConfig,
    checkpoint: Option<PathBuf>,
    expect_conjecture: bool,
    timings: bool,
) -> Result<Outcome, Failure> {
    check_n(config.max_n)?;
    let done = match &checkpoint {
        Some(p) => read_checkpoint(p)?,
        None => BTreeMap::new(),
    };
    let sink = match &checkpoint {
        Some(p) => Some(Mutex::new(OpenOptions::new().create(true).append(true).open(p)?)),
        None => None,
    };
    let report = sweep_with(config, done, |e| {
        if let Some(sink) = &sink {
            let line = serde_json::to_string(e).expect("serializable");
            let mut f = sink.lock().expect("checkpoint lock");
            let _ = writeln!(f, "{line}");
        }
    });
    let matches = report.matches_prime_or_four();
    let failures_replay = report.entries.values().all(|e| match e.status {
        SweepStatus::FailsAt { .. } => replay_witness(e.n, &e.status),
        _ => true,
    });
    let rows: Vec<Vec<String>> = report
        .entries
        .values()
        .map(|e| {
            let c = status_cells(&e.status);
            vec![
                e.n.to_string(),
                c[0].clone(),
                c[1].clone(),
                c[2].clone(),
                format!("{:?}", e.method).to_lowercase(),
                e.divisor.map(|d| d.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    let out = Report::new("groupoid sweep")
        .field("range", report.range)
        .field("existing", report.existing())
        .field("matchesPrimeOrFour", matches)
        .field("witnessesReplay", failures_replay)
        .field(
            "entries",
            report.entries.values().map(|e| entry_value(e, timings)).collect::<Vec<_>>(),
        )
        .table(&["n", "status", "witness", "undefined", "method", "divisor"], rows);
    Ok(Outcome {
        report: out,
        ok: failures_replay && (!expect_conjecture || matches),
    })
}

fn subsystems(n: u64, opts: &SubsystemOptions) -> Result<Report, Failure> {
    check_n(n)?;
    let records = enumerate_subsystems(n, opts);
    let rows = records
        .iter()
        .map(|r| {
            vec![
                join(&r.subset, ","),
                r.subset.len().to_string(),
                r.members.len().to_string(),
                if r.cartan_type { "yes" } else { "no" }.to_string(),
                r.positive_root_count.map(|c| c.to_string()).unwrap_or_default(),
                r.dimension.map(|d| d.to_string()).unwrap_or_else(|| "infinite".into()),
                r.reference
                    .as_ref()
                    .map(|c| {
                        let base = format!("{} ({})", c.quoted, if c.agrees { "agrees" } else { "differs" });
                        match &c.note {
                            Some(note) => format!("{base}; {note}"),
                            None => base,
                        }
                    })
                    .unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Report::new("subsystems")
        .field("n", n)
        .field("maxRank", opts.max_rank)
        .field("records", &records)
        .table(&["subset", "rank", "members", "cartan", "roots", "dimension", "reference"], rows))
}

fn group_info(m: u64, p: u64, n: usize) -> Result<Report, Failure> {
    let params = GroupParams::new(m, p, n)?;
    let reflections = enumerate_reflections(&params);
    let census = reflection_census(&params);
    let formula = m * (n * (n - 1) / 2) as u64 + n as u64 * (m / p - 1);
    let names: Vec<String> = reflections.iter().map(|r| r.to_string()).collect();
    let rows = reflections
        .iter()
        .map(|r| vec![r.to_string(), r.order(m).to_string()])
        .collect();
    Ok(Report::new("group info")
        .field("params", params)
        .field("order", params.order().to_string())
        .field("reflectionCount", reflections.len())
        .field("formulaCount", formula)
        .field(
            "census",
            census.iter().map(|(k, v)| json!({"order": k, "count": v})).collect::<Vec<_>>(),
        )
        .field("reflections", names)
        .table(&["reflection", "order"], rows))
}

fn yd_decompose(m: u64, p: u64, n: usize) -> Result<Report, Failure> {
    let params = GroupParams::new(m, p, n)?;
    let module = yd_module(&params)?;
    let summands = decompose_yd(&module);
    let indecomposable = is_braid_indecomposable(&module);
    let items: Vec<Value> = summands
        .iter()
        .map(|s| {
            json!({
                "label": s.label.to_string(),
                "dim": s.dim(),
                "support": s.support.iter().map(|&i| module.basis[i].to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let rows = summands
        .iter()
        .map(|s| {
            let names: Vec<String> = s.support.iter().map(|&i| module.basis[i].to_string()).collect();
            vec![s.label.to_string(), s.dim().to_string(), names.join(" ")]
        })
        .collect();
    Ok(Report::new("yd decompose")
        .field("params", params)
        .field("dim", module.dim())
        .field("expectedRank", params.expected_rank())
        .field("expectedDims", expected_summand_dims(&params))
        .field("braidIndecomposable", indecomposable)
        .field("summands", items)
        .table(&["summand", "dim", "support"], rows))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Series {
    Nichols,
    Quadratic,
    Both,
}

fn cyclic_subset(n: u64, subset: Option<Vec<u64>>) -> Result<DiagonalBraiding, Failure> {
    check_n(n)?;
    let subset = subset.unwrap_or_else(|| (1..n).collect());
    Ok(cyclic_braiding(n, &subset)?)
}

fn space_of(args: &SpaceArgs) -> Result<(BraidedSpace, Value), Failure> {
    if let Some(g) = &args.group {
        let params = GroupParams::new(g[0], g[1], g[2] as usize)?;
        let module = yd_module(&params)?;
        let space = BraidedSpace::from_yd(&module)?;
        Ok((space, json!({"group": params})))
    } else {
        let n = args.cyclic.expect("clap requires --group or --cyclic");
        let b = cyclic_subset(n, args.subset.clone())?;
        let space = BraidedSpace::from_diagonal(&b);
        Ok((space, json!({"cyclic": b})))
    }
}

fn hilbert_rows(data: &[(&str, &HilbertData)]) -> Vec<Vec<String>> {
    let max = data[0].1.max_degree;
    (0..=max)
        .map(|d| {
            let mut row = vec![d.to_string()];
            row.extend(data.iter().map(|(_, h)| h.per_degree[d].to_string()));
            row
        })
        .collect()
}

fn hilbert(command: &'static str, args: &SpaceArgs, series: Series) -> Result<Report, Failure> {
    let (space, source) = space_of(args)?;
    let mode = if args.modular {
        Mode::Modular { seed: args.seed }
    } else {
        Mode::Exact
    };
    let mut budget = Budget::for_mode(mode);
    if let Some(b) = args.max_block {
        budget.max_block = b;
    }
    let mode_name = if args.modular { "modular" } else { "exact" };
    let report = Report::new(command)
        .field("space", source)
        .field("dim", space.dim())
        .field("mode", mode_name)
        .field("maxDegree", args.max_degree);
    Ok(match series {
        Series::Nichols => {
            let h = nichols_hilbert(&space, args.max_degree, mode, &budget)?;
            let rows = hilbert_rows(&[("nichols", &h)]);
            report.field("hilbert", &h).table(&["degree", "nichols"], rows)
        }
        Series::Quadratic => {
            let h = quadratic_hilbert(&space, args.max_degree, mode, &budget)?;
            let rows = hilbert_rows(&[("quadratic", &h)]);
            report.field("hilbert", &h).table(&["degree", "quadratic"], rows)
        }
        Series::Both => {
            let c = hilbert_compare(&space, args.max_degree, mode, &budget)?;
            let rows = hilbert_rows(&[("nichols", &c.nichols), ("quadratic", &c.quadratic)]);
            report
                .field("nichols", &c.nichols)
                .field("quadratic", &c.quadratic)
                .field("firstDivergence", c.first_divergence)
                .table(&["degree", "nichols", "quadratic"], rows)
        }
    })
}

fn pbw_dim(n: u64, subset: Option<Vec<u64>>, max_roots: usize, series: Option<usize>) -> Result<Report, Failure> {
    let b = cyclic_subset(n, subset)?;
    let dim = pbw_dimension(&b, max_roots)?;
    let mut report = Report::new("pbw dim").field("braiding", &b).field("dimension", dim);
    let mut rows = vec![vec![
        "dimension".to_string(),
        match dim {
            Dimension::Finite(d) => d.to_string(),
            Dimension::Infinite => "infinite".into(),
        },
    ]];
    if let Dimension::Finite(_) = dim {
        let roots = root_orders(&b, max_roots)?.unwrap_or_default();
        let top = pbw_top_degree(&b, max_roots)?;
        rows.push(vec!["positive roots".into(), roots.len().to_string()]);
        rows.push(vec!["top degree".into(), top.to_string()]);
        report = report
            .field(
                "roots",
                roots
                    .iter()
                    .map(|(r, ord)| json!({"root": r.0, "order": ord}))
                    .collect::<Vec<_>>(),
            )
            .field("topDegree", top);
        if let Some(d) = series {
            let s = pbw_hilbert_series(&b, d, max_roots)?;
            rows.push(vec!["series".into(), join(&s, ",")]);
            report = report.field("series", s.iter().map(|x| *x as u64).collect::<Vec<_>>());
        }
    }
    Ok(report.table(&["quantity", "value"], rows))
}
