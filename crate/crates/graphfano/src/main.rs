use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use graphfano::building::Budget;
use graphfano::census;
use graphfano::classify::{self, ClassifyError, Method, Witness};
use graphfano::fan::Fan;
use graphfano::graph::{format_mask, FamilyKind, Graph};
use graphfano::report::{
    CensusDoc, ClassificationDoc, FanDoc, InputEcho, ReportDocument, WallDoc, WitnessDoc,
};

const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_NO_WITNESS: u8 = 5;

#[derive(Parser)]
#[command(name = "graphfano", version, about = "Toric fans of graph associahedra: Fano / weak Fano classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one graph (wall values, theorem criteria, or both).
    Classify(ClassifyArgs),
    /// Show the forbidden induced subgraph and its bad nested set.
    Witness(WitnessArgs),
    /// Exhaustive cross-validation census of both classification routes.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file ("n m" header, one "u v" edge per line).
    #[arg(long, group = "source")]
    input: Option<String>,
    /// graph6-encoded graph.
    #[arg(long, group = "source")]
    graph6: Option<String>,
    /// Named family, e.g. path:3, cycle:5, complete:4, diamond:4, star:6.
    #[arg(long, group = "source")]
    family: Option<String>,
}

impl InputArgs {
    fn load(&self) -> Result<(Graph, String), String> {
        if let Some(path) = &self.input {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))?;
            let g = Graph::parse_edge_list(&text).map_err(|e| e.to_string())?;
            return Ok((g, "edge-list".to_string()));
        }
        if let Some(s) = &self.graph6 {
            let g = Graph::parse_graph6(s).map_err(|e| e.to_string())?;
            return Ok((g, "graph6".to_string()));
        }
        if let Some(spec) = &self.family {
            let (name, size) = spec
                .split_once(':')
                .ok_or_else(|| format!("family must be NAME:SIZE, got {:?}", spec))?;
            let kind = FamilyKind::from_name(name)
                .ok_or_else(|| format!("unknown family {:?}", name))?;
            let size: usize = size.parse().map_err(|_| format!("bad size {:?}", size))?;
            let g = Graph::family(kind, size).map_err(|e| e.to_string())?;
            return Ok((g, format!("family:{}", spec)));
        }
        Err("one of --input, --graph6, --family is required".to_string())
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Walls,
    Theorem,
    Both,
}

impl From<ModeArg> for Method {
    fn from(m: ModeArg) -> Method {
        match m {
            ModeArg::Walls => Method::Walls,
            ModeArg::Theorem => Method::Theorem,
            ModeArg::Both => Method::Both,
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Classification route; defaults to both when the budget allows,
    /// otherwise theorem.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Include the per-wall table.
    #[arg(long)]
    walls: bool,
    /// Include the fan (rays and maximal cones).
    #[arg(long)]
    fan: bool,
    /// Emit the machine-readable JSON document.
    #[arg(long)]
    json: bool,
    /// Nested-set search budget (search nodes per component).
    #[arg(long, default_value_t = 1 << 20)]
    budget: usize,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 1 << 20)]
    budget: usize,
}

#[derive(Args)]
struct ValidateArgs {
    /// Enumerate all labeled graphs on this many nodes.
    #[arg(long, group = "corpus_source")]
    n: Option<usize>,
    /// Restrict the enumeration to connected graphs.
    #[arg(long)]
    connected: bool,
    /// File of graph6 lines ('#' comments ignored).
    #[arg(long, group = "corpus_source")]
    corpus: Option<String>,
    /// Worker threads for classification.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 1 << 20)]
    budget: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

fn classify_failure(e: &ClassifyError) -> Failure {
    if e.is_budget_exceeded() {
        Failure::new(EXIT_BUDGET, e.to_string())
    } else if matches!(e, ClassifyError::MethodDisagreement { .. }) {
        Failure::new(EXIT_MISMATCH, e.to_string())
    } else {
        Failure::new(EXIT_PARSE, e.to_string())
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn witness_line(w: &Witness) -> String {
    match w {
        Witness::InducedCycle { subset } => format!("induced cycle {}", format_mask(*subset)),
        Witness::InducedDiamond { subset } => format!("induced diamond {}", format_mask(*subset)),
        Witness::BadWall { report } => format!(
            "bad wall {} (a = {})",
            report.wall.iter().map(|&s| format_mask(s)).collect::<Vec<_>>().join(" "),
            report.a
        ),
    }
}

fn print_wall_table(reports: &[classify::WallReport]) {
    println!("walls ({}):", reports.len());
    for r in reports {
        println!(
            "  N = {{{}}}  J={} J'={} union={} m={} a={} (-K.V)={} oracle={} agree={}",
            r.wall.iter().map(|&s| format_mask(s)).collect::<Vec<_>>().join(", "),
            format_mask(r.j),
            format_mask(r.j_prime),
            format_mask(r.union),
            r.m,
            r.a,
            r.intersection_number,
            r.a_oracle,
            r.agree
        );
    }
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), Failure> {
    let (graph, source) =
        args.input.load().map_err(|m| Failure::new(EXIT_PARSE, m))?;
    let budget = Budget { max_search_nodes: args.budget };

    let requested: Option<Method> = args.mode.map(Into::into);
    let mut method = requested.unwrap_or(Method::Both);
    let mut classification = classify::classify(&graph, method, budget);
    if requested.is_none() {
        if let Err(e) = &classification {
            if e.is_budget_exceeded() {
                eprintln!("notice: wall budget exceeded, falling back to theorem mode");
                method = Method::Theorem;
                classification = classify::classify(&graph, method, budget);
            }
        }
    }
    let classification = classification.map_err(|e| classify_failure(&e))?;

    let wall_reports = if args.walls {
        let analysis =
            classify::classify_via_walls(&graph, budget).map_err(|e| classify_failure(&e))?;
        Some(analysis.reports)
    } else {
        None
    };
    let fan = if args.fan {
        Some(Fan::build(&graph, budget).map_err(|e| {
            classify_failure(&ClassifyError::Fan(e))
        })?)
    } else {
        None
    };

    if args.json {
        let mut doc = ReportDocument::new(InputEcho::from_graph(&graph, &source));
        doc.classification = Some(ClassificationDoc::from(&classification));
        doc.walls = wall_reports
            .as_ref()
            .map(|rs| rs.iter().map(WallDoc::from).collect());
        doc.fan = fan.as_ref().map(FanDoc::from);
        doc.witness = classification.witness.as_ref().map(WitnessDoc::from);
        println!("{}", serde_json::to_string(&doc).expect("report serializes"));
    } else {
        println!("fano: {}", yes_no(classification.fano));
        println!("weak_fano: {}", yes_no(classification.weak_fano));
        match classification.min_a {
            Some(a) => println!("min_a: {}", a),
            None => println!("min_a: none"),
        }
        println!("method: {}", classification.method.name());
        if let Some(w) = &classification.witness {
            println!("witness: {}", witness_line(w));
        }
        if let Some(reports) = &wall_reports {
            print_wall_table(reports);
        }
        if let Some(f) = &fan {
            println!("fan: dim={} rays={} max_cones={}", f.dim, f.rays.len(), f.max_cones.len());
            for (i, r) in f.rays.iter().enumerate() {
                match &f.ray_sets {
                    Some(sets) => println!("  ray {} = {:?}  e_{}", i, r, format_mask(sets[i])),
                    None => println!("  ray {} = {:?}", i, r),
                }
            }
            for (i, c) in f.max_cones.iter().enumerate() {
                println!("  cone {} = {:?}", i, c);
            }
        }
    }
    Ok(())
}

fn cmd_witness(args: &WitnessArgs) -> Result<(), Failure> {
    let (graph, source) =
        args.input.load().map_err(|m| Failure::new(EXIT_PARSE, m))?;
    if !graph.is_connected() {
        return Err(Failure::new(EXIT_PARSE, "witness requires a connected graph"));
    }
    let budget = Budget { max_search_nodes: args.budget };
    let (weak_fano, witness) = classify::is_weak_fano_theorem(&graph);
    if weak_fano {
        return Err(Failure::new(EXIT_NO_WITNESS, "graph is weak Fano; no witness exists"));
    }
    let witness = witness.expect("non-weak-Fano graph has a witness");
    let nested = classify::bad_nested_set(&graph, &witness)
        .map_err(|e| classify_failure(&e))?;
    let report = classify::a_value(&graph, &nested, budget)
        .map_err(|e| classify_failure(&e))?;

    if args.json {
        let mut doc = ReportDocument::new(InputEcho::from_graph(&graph, &source));
        let mut wdoc = WitnessDoc::from(&witness);
        wdoc.nested_set =
            Some(nested.iter().map(|&s| graphfano::graph::nodes_of(s)).collect());
        wdoc.wall_report = Some(WallDoc::from(&report));
        doc.witness = Some(wdoc);
        println!("{}", serde_json::to_string(&doc).expect("report serializes"));
    } else {
        println!("witness: {}", witness_line(&witness));
        println!(
            "nested set: {{{}}}",
            nested.iter().map(|&s| format_mask(s)).collect::<Vec<_>>().join(", ")
        );
        println!(
            "J={} J'={} union={} m={} a={} (-K.V)={} oracle agree={}",
            format_mask(report.j),
            format_mask(report.j_prime),
            format_mask(report.union),
            report.m,
            report.a,
            report.intersection_number,
            report.agree
        );
    }
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), Failure> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
    }
    let budget = Budget { max_search_nodes: args.budget };
    let report = if let Some(n) = args.n {
        census::cross_validate(n, args.connected, budget)
            .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?
    } else if let Some(path) = &args.corpus {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {}", path, e)))?;
        let graphs =
            census::parse_corpus(&text).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
        census::cross_validate_corpus(graphs, budget)
    } else {
        return Err(Failure::new(EXIT_PARSE, "one of --n, --corpus is required"));
    };

    if args.json {
        let doc = CensusDoc::from(&report);
        println!("{}", serde_json::to_string(&doc).expect("census serializes"));
    } else {
        if let Some(n) = report.n {
            println!("n: {}", n);
        }
        println!("graphs_total: {}", report.graphs_total);
        println!("graphs_connected: {}", report.graphs_connected);
        println!("graphs_classified: {}", report.graphs_classified);
        println!("fano: {}", report.fano_count);
        println!("weak_fano: {}", report.weak_fano_count);
        println!("neither: {}", report.neither_count);
        println!("mismatches: {}", report.mismatches.len());
        for m in &report.mismatches {
            println!("  MISMATCH {}: {}", m.graph6, m.detail);
        }
        if !report.budget_exceeded.is_empty() {
            println!("budget_exceeded: {:?}", report.budget_exceeded);
        }
        println!("runtime_ms: {}", report.runtime_ms);
    }
    if !report.mismatches.is_empty() {
        return Err(Failure::new(EXIT_MISMATCH, "cross-validation found mismatches"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
