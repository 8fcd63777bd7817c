use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use rigidbound::bounds::{analyze, h2_multiplier_experiment, table, AnalyzeOptions, BoundReport, ExperimentReport, TableRow};
use rigidbound::census::classified_census;
use rigidbound::system::DEFAULT_BUDGET;
use rigidbound::{Error, Graph, GraphClass};

#[derive(Parser)]
#[command(name = "rigidbound", version, about = "Upper bounds on planar embeddings of Laman graphs")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for the minor-system search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound the embeddings of one graph given as an edge list file.
    Analyze {
        edgelist: PathBuf,
        /// Count real embeddings for sampled lengths with the homotopy solver.
        #[arg(long)]
        verify: bool,
        /// Do not double the mixed volume of an (n-2)-equation system.
        #[arg(long)]
        allow_n2_conjecture: bool,
        /// Run the minor-system pipeline on H1 graphs as well.
        #[arg(long)]
        cross_check_h1: bool,
    },
    /// Maximum bound over all Laman graphs for each vertex count.
    Table {
        #[arg(long)]
        n_max: usize,
    },
    /// List the Laman graphs on n vertices with their class.
    Census {
        #[arg(long)]
        n: usize,
    },
    Experiment {
        #[command(subcommand)]
        which: Experiment,
    },
}

#[derive(Subcommand)]
enum Experiment {
    /// Ratio of child to parent bound over single Henneberg extensions.
    H2 {
        #[arg(long)]
        n_max: usize,
    },
}

#[derive(Serialize)]
struct CensusEntry {
    id: String,
    class: GraphClass,
    edges: Vec<(usize, usize)>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::MixedVolumeDisagreement { .. } => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let mut options = AnalyzeOptions {
        seed: cli.seed,
        budget: cli.budget,
        ..AnalyzeOptions::default()
    };
    match &cli.command {
        Command::Analyze {
            edgelist,
            verify,
            allow_n2_conjecture,
            cross_check_h1,
        } => {
            let g: Graph = std::fs::read_to_string(edgelist)?.parse()?;
            options.verify = *verify;
            options.allow_n2_conjecture = *allow_n2_conjecture;
            options.cross_check_h1 = *cross_check_h1;
            let report = analyze(&g, &options)?;
            emit(cli.json, &report, print_report)?;
            if !report.laman {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Table { n_max } => {
            let rows = table(*n_max, &options)?;
            emit(cli.json, rows.as_slice(), print_table)?;
        }
        Command::Census { n } => {
            let entries: Vec<CensusEntry> = classified_census(*n)?
                .into_iter()
                .map(|(g, class)| CensusEntry {
                    id: g.id(),
                    class,
                    edges: g.edges().collect(),
                })
                .collect();
            emit(cli.json, &entries, |entries| {
                for e in entries {
                    println!("{:?}  {}", e.class, e.id);
                }
                println!("{} graphs", entries.len());
            })?;
        }
        Command::Experiment {
            which: Experiment::H2 { n_max },
        } => {
            let report = h2_multiplier_experiment(*n_max, &options)?;
            emit(cli.json, &report, print_experiment)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit<T: Serialize + ?Sized>(json: bool, value: &T, text: impl Fn(&T)) -> Result<(), Error> {
    if json {
        let s = serde_json::to_string_pretty(value).map_err(|e| Error::Precondition(e.to_string()))?;
        println!("{s}");
    } else {
        text(value);
    }
    Ok(())
}

fn print_report(r: &BoundReport) {
    println!("graph      {}", r.graph);
    if !r.laman {
        println!("not a Laman graph, no bound");
        return;
    }
    if let Some(class) = r.class {
        println!("class      {class:?}");
    }
    if let Some(sys) = &r.chosen_system {
        println!("system     {:?} ({:?})", sys.equations, sys.size_class);
        println!("unknowns   {}", sys.unknowns.join(", "));
        println!("candidates {}", r.systems_found);
    }
    if let Some(mv) = r.mv {
        println!("mv         {mv}");
    }
    if let Some(b) = r.bezout {
        println!("bezout     {b}");
    }
    if let (Some(bound), Some(rule)) = (r.bound_mod_rigid, r.rule_applied) {
        let mut flags = Vec::new();
        if r.conjectural {
            flags.push("conjectural");
        }
        if r.possibly_loose {
            flags.push("possibly loose");
        }
        let flags = if flags.is_empty() { String::new() } else { format!(" [{}]", flags.join(", ")) };
        println!("bound      {bound} mod rigid motions ({rule:?}){flags}");
    } else {
        println!("bound      none (no well-constrained system found)");
    }
    if let Some(v) = &r.verification {
        println!("lengths    seed {}", v.lengths_seed);
        if let Some(k) = v.h1_embeddings {
            println!("h1 embeddings  {k} complex, {} real", v.h1_real_embeddings.unwrap_or(0));
        }
        if let Some(k) = v.real_embedding_roots {
            println!(
                "real roots     {k} embeddable, {} torus roots{}",
                v.torus_roots.unwrap_or(0),
                if v.solver_unreliable == Some(true) { " (solver unreliable)" } else { "" }
            );
        }
    }
}

fn print_table(rows: &[TableRow]) {
    println!("{:>3}  {:>6}  {:>6}  {:>4}  note", "n", "bound", "graphs", "h2");
    for r in rows {
        let graphs = r.graphs.map_or("-".into(), |g| g.to_string());
        let h2 = r.h2_graphs.map_or("-".into(), |g| g.to_string());
        let note = match (&r.attained_by, &r.note) {
            (Some(id), _) => format!("attained by {id}"),
            (None, Some(note)) => format!("heuristic: {note}"),
            _ => String::new(),
        };
        println!("{:>3}  {:>6}  {:>6}  {:>4}  {note}", r.n, r.bound, graphs, h2);
    }
}

fn print_experiment(e: &ExperimentReport) {
    println!("{:>3}  {:<4}  {:>10}  {:>6}  {:>6}", "n", "step", "extensions", "min", "max");
    for s in &e.summaries {
        println!(
            "{:>3}  {:<4}  {:>10}  {:>6.3}  {:>6.3}",
            s.n,
            format!("{:?}", s.step),
            s.extensions,
            s.min_ratio,
            s.max_ratio
        );
    }
    println!("H2 steps with ratio above 4: {}", e.counterexamples);
    for r in e.ratios.iter().filter(|r| r.counterexample) {
        println!("  {} -> {}  {} / {}", r.parent, r.child, r.child_bound, r.parent_bound);
    }
}
