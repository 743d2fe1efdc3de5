use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stringc_core::classify::{
    self, CatalogReport, SearchOptions, SearchOutcome, SearchTarget, Status, VerificationReport, VerifyConfig,
};
use stringc_core::families::{self, FamilyId};
use stringc_core::{parse_graph, PRGraph};

#[derive(Parser)]
#[command(name = "stringc", version, about = "String C-groups: catalog instances, verification and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print the permutation representation graph of a catalog instance.
    Instantiate {
        #[command(flatten)]
        inst: Instance,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Run the verification predicates on one instance or the whole catalog.
    Verify {
        /// Family id such as T8#1; omit with --all.
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        id: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "x")]
        i: Option<usize>,
        #[arg(long)]
        x: Option<usize>,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive search for string C-groups in a built-in ambient group.
    Search {
        #[arg(long)]
        ambient: String,
        #[arg(long)]
        min_rank: Option<usize>,
        #[arg(long)]
        max_rank: Option<usize>,
        /// Subgroup order to search for instead of the whole ambient.
        #[arg(long)]
        order: Option<u128>,
        #[arg(long)]
        budget_sec: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Allow ambients marked as slow.
        #[arg(long)]
        stretch: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Schläfli symbol of an instance or a graph file.
    Schlafli {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// Dual graph (labels reversed) of an instance or a graph file.
    Dual {
        #[command(flatten)]
        src: Source,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
    /// List the family catalog, or its admissible instances at --n.
    Catalog {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Instance {
    /// Family id such as T4#1, HIGHC#2, REP2N#1 or P61#2.
    id: String,
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "x")]
    i: Option<usize>,
    #[arg(long)]
    x: Option<usize>,
}

#[derive(Args)]
struct Source {
    #[arg(required_unless_present = "input", conflicts_with = "input")]
    id: Option<String>,
    #[arg(long, required_unless_present = "input")]
    n: Option<usize>,
    #[arg(long, conflicts_with = "x")]
    i: Option<usize>,
    #[arg(long)]
    x: Option<usize>,
    /// Graph in the `prg` text format; `-` reads stdin.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

enum Failure {
    Usage(String),
    Io(String),
}

type Outcome = Result<(String, bool), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn family_param(id: FamilyId, i: Option<usize>, x: Option<usize>) -> Result<Option<usize>, Failure> {
    let d = families::descriptor(id).ok_or_else(|| usage(format!("unknown family id `{id}`")))?;
    let given = i.map(|v| ('i', v)).or(x.map(|v| ('x', v)));
    match (d.param, given) {
        (None, None) => Ok(None),
        (None, Some((c, _))) => Err(usage(format!("{id} takes no parameter, got --{c}"))),
        (Some(spec), Some((c, v))) if spec.name == c => Ok(Some(v)),
        (Some(spec), Some((c, _))) => Err(usage(format!("{id} takes --{}, got --{c}", spec.name))),
        (Some(spec), None) => Err(usage(format!("{id} requires --{}", spec.name))),
    }
}

fn build(id: &str, n: usize, i: Option<usize>, x: Option<usize>) -> Result<(FamilyId, Option<usize>, PRGraph), Failure> {
    let id: FamilyId = id.parse().map_err(usage)?;
    let p = family_param(id, i, x)?;
    let g = families::instantiate_family(id, n, p).map_err(usage)?;
    Ok((id, p, g))
}

fn load(src: &Source) -> Result<PRGraph, Failure> {
    match (&src.input, &src.id) {
        (Some(path), _) => {
            let mut text = String::new();
            if path == "-" {
                std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Io(e.to_string()))?;
            } else {
                text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))?;
            }
            parse_graph(&text).map_err(usage)
        }
        (None, Some(id)) => {
            let n = src.n.ok_or_else(|| usage("--n is required with a family id"))?;
            Ok(build(id, n, src.i, src.x)?.2)
        }
        (None, None) => Err(usage("give a family id or --input")),
    }
}

fn graph_out(g: &PRGraph, format: Format) -> String {
    match format {
        Format::Text => g.to_dsl(),
        Format::Dot => g.to_dot(),
        Format::Json => {
            let edges: Vec<_> = g.edges().iter().map(|e| json!({ "label": e.label, "u": e.u + 1, "v": e.v + 1 })).collect();
            pretty(&json!({ "vertices": g.vertices(), "rank": g.rank(), "edges": edges }))
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn no_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        Err(usage("--format dot only applies to graph output"))
    } else {
        Ok(())
    }
}

fn report_line(r: &VerificationReport) -> String {
    let sch = r.schlafli.as_ref().map(ToString::to_string).unwrap_or_else(|| "-".into());
    let order = r.order.map(|o| o.to_string()).unwrap_or_else(|| "-".into());
    let mut line = format!("{} {} n={} order={} schlafli={}", r.status, r.label(), r.params["n"], order, sch);
    let failed = r.failed_checks();
    if !failed.is_empty() {
        let _ = write!(line, " failed={}", failed.join(","));
    }
    if let Some(ms) = r.timing_ms {
        let _ = write!(line, " ms={ms}");
    }
    line
}

fn verify(
    id: Option<String>,
    n: usize,
    i: Option<usize>,
    x: Option<usize>,
    all: bool,
    format: Format,
    jobs: usize,
    no_timing: bool,
) -> Outcome {
    no_dot(format)?;
    let cfg = VerifyConfig { timing: !no_timing, ..Default::default() };
    if all {
        let cat: CatalogReport = classify::verify_catalog(n, &cfg, jobs).map_err(usage)?;
        let failed = cat.summary.fail > 0 || cat.duality_closure.status == Status::Fail;
        let text = match format {
            Format::Json => pretty(&cat.reports),
            _ => {
                let mut s = String::new();
                for r in &cat.reports {
                    let _ = writeln!(s, "{}", report_line(r));
                }
                for (id, why) in &cat.skipped {
                    let _ = writeln!(s, "SKIP {id}: {why}");
                }
                let _ = writeln!(s, "duality closure: {}", cat.duality_closure.status);
                let _ = writeln!(
                    s,
                    "summary: {} instances, {} pass, {} fail, {} families skipped",
                    cat.summary.instances, cat.summary.pass, cat.summary.fail, cat.summary.skipped_families
                );
                s
            }
        };
        return Ok((text, failed));
    }
    let id: FamilyId = id.expect("clap requires an id").parse().map_err(usage)?;
    let d = families::descriptor(id).ok_or_else(|| usage(format!("unknown family id `{id}`")))?;
    let params = match (d.param, i.or(x)) {
        (Some(_), None) => d.param_values(n),
        _ => vec![family_param(id, i, x)?],
    };
    let mut reports = Vec::new();
    for p in params {
        reports.push(classify::verify_instance(id, n, p, &cfg).map_err(usage)?);
    }
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let text = match format {
        Format::Json => pretty(&reports),
        _ => reports.iter().map(|r| report_line(r) + "\n").collect(),
    };
    Ok((text, failed))
}

#[allow(clippy::too_many_arguments)]
fn search(
    ambient: &str,
    min_rank: Option<usize>,
    max_rank: Option<usize>,
    order: Option<u128>,
    budget_sec: Option<u64>,
    jobs: usize,
    stretch: bool,
    format: Format,
) -> Outcome {
    no_dot(format)?;
    let a = classify::named_ambient(ambient).map_err(|e| {
        usage(format!("{e}; known ambients: {}", classify::AMBIENT_NAMES.join(", ")))
    })?;
    if a.stretch && !stretch {
        return Err(usage(format!("{} is a stretch target; pass --stretch", a.name)));
    }
    let opts = SearchOptions {
        min_rank: min_rank.unwrap_or(a.min_rank),
        max_rank: max_rank.or(a.max_rank),
        target: order.map(SearchTarget::Order).unwrap_or(a.target),
        require_transitive: true,
        budget: budget_sec.map(Duration::from_secs),
        jobs,
    };
    let out: SearchOutcome = classify::exhaustive_search(&a.group, &opts).map_err(usage)?;
    if !out.complete {
        eprintln!("warning: time budget exhausted; results are partial");
    }
    let text = match format {
        Format::Json => pretty(&json!({
            "ambient": a.name,
            "ambient_order": out.ambient_order,
            "target_order": out.target_order,
            "involutions": out.involutions,
            "raw_count": out.raw_count,
            "complete": out.complete,
            "hits": out.hits,
        })),
        _ => {
            let mut s = String::new();
            for h in &out.hits {
                let sch = stringc_core::SchlafliSymbol(h.signature.schlafli.clone());
                let _ = write!(s, "{sch} order={} rank={} degree={}", h.signature.order, h.signature.rank, h.signature.degree);
                if h.multiplicity_unknown() {
                    let _ = write!(s, " MULTIPLICITY-UNKNOWN({})", h.classes);
                }
                s.push('\n');
            }
            s
        }
    };
    Ok((text, false))
}

fn catalog(n: Option<usize>, format: Format) -> Outcome {
    no_dot(format)?;
    let Some(n) = n else {
        let cat = families::family_catalog();
        let text = match format {
            Format::Json => pretty(&cat),
            _ => cat
                .iter()
                .map(|d| {
                    let param = d.param.map(|p| format!(" param={}", p.name)).unwrap_or_default();
                    format!("{} min_n={}{} dual={} {}\n", d.id, d.min_n, param, d.duality_partner, d.case_tags)
                })
                .collect(),
        };
        return Ok((text, false));
    };
    let (inst, skipped) = families::catalog_instances(n);
    let text = match format {
        Format::Json => {
            let items: Vec<_> = inst.iter().map(|(id, p)| json!({ "instance": id, "param": p })).collect();
            let sk: std::collections::BTreeMap<String, String> = skipped.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            pretty(&json!({ "n": n, "instances": items, "skipped": sk }))
        }
        _ => {
            let mut s = String::new();
            for (id, p) in &inst {
                match (families::descriptor(*id).and_then(|d| d.param), p) {
                    (Some(spec), Some(v)) => writeln!(s, "{id} {}={v}", spec.name),
                    _ => writeln!(s, "{id}"),
                }
                .expect("string write");
            }
            for (id, why) in &skipped {
                let _ = writeln!(s, "SKIP {id}: {why}");
            }
            s
        }
    };
    Ok((text, false))
}

fn run(cli: Cli) -> (Outcome, Option<String>) {
    match cli.command {
        Command::Instantiate { inst, format, out } => {
            let r = build(&inst.id, inst.n, inst.i, inst.x).map(|(_, _, g)| (graph_out(&g, format), false));
            (r, out.output)
        }
        Command::Verify { id, n, i, x, all, format, jobs, no_timing, out } => {
            (verify(id, n, i, x, all, format, jobs, no_timing), out.output)
        }
        Command::Search { ambient, min_rank, max_rank, order, budget_sec, jobs, stretch, format, out } => {
            (search(&ambient, min_rank, max_rank, order, budget_sec, jobs, stretch, format), out.output)
        }
        Command::Schlafli { src, format, out } => {
            let r = no_dot(format).and_then(|_| load(&src)).and_then(|g| {
                let s = g.to_sggi().map_err(usage)?.schlafli();
                Ok((if format == Format::Json { pretty(&json!({ "schlafli": s })) } else { format!("{s}\n") }, false))
            });
            (r, out.output)
        }
        Command::Dual { src, format, out } => (load(&src).map(|g| (graph_out(&g.dual(), format), false)), out.output),
        Command::Catalog { n, format, out } => (catalog(n, format), out.output),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, output) = run(cli);
    match outcome {
        Ok((text, failed)) => {
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: {path}: {e}");
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
