use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use wlkit::features::{budget_from_env, write_embedding_csv};
use wlkit::task_json::{
    domain_from_value, parse_json_dataset, problem_from_value, state_from_value,
};
use wlkit::{
    pddl, Aggregator, Dataset, Domain, FeatureModel, IlgGenerator, Kernel, KernelKind, Problem,
};

#[derive(Parser)]
#[command(
    name = "wlkit",
    version,
    about = "Graph encodings and WL feature embeddings for numeric planning tasks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph of a task state as DOT or JSON.
    Graphify {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        /// State JSON; defaults to the problem's initial state.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides format detection by file extension.
        #[arg(long, value_enum)]
        input_format: Option<InputFormat>,
    },
    /// Collect colours over a dataset and write a model file.
    Collect {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, value_parser = parse_kernel)]
        kernel: KernelKind,
        #[arg(long)]
        iterations: usize,
        #[arg(long, value_parser = parse_aggregator)]
        aggregator: Option<Aggregator>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Embed every state of a dataset as CSV.
    Embed {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        with_labels: bool,
    },
    /// Count labelled state pairs the model cannot tell apart.
    Distinguish {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
    },
    /// Summarise a model file.
    Inspect {
        #[arg(long)]
        model: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum InputFormat {
    Pddl,
    Json,
}

fn parse_kernel(s: &str) -> Result<KernelKind, String> {
    s.parse()
        .map_err(|_| format!("expected one of wl, 2wl, 2lwl, iwl, ccwl; got `{s}`"))
}

fn parse_aggregator(s: &str) -> Result<Aggregator, String> {
    s.parse()
        .map_err(|_| format!("expected one of sum, mean, max; got `{s}`"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?)
        .with_context(|| format!("{} is not valid JSON", path.display()))
}

fn format_of(path: &Path, forced: Option<InputFormat>) -> InputFormat {
    forced.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("json") => InputFormat::Json,
        _ => InputFormat::Pddl,
    })
}

/// A JSON file may hold the bare object or a whole task with `domain` / `problem` keys.
fn section<'a>(v: &'a Value, key: &str) -> &'a Value {
    v.get(key).filter(|inner| inner.is_object()).unwrap_or(v)
}

fn load_task(
    domain: &Path,
    problem: &Path,
    forced: Option<InputFormat>,
) -> Result<(Domain, Problem)> {
    let d = match format_of(domain, forced) {
        InputFormat::Pddl => pddl::parse_domain(&read(domain)?)?,
        InputFormat::Json => domain_from_value(section(&read_json(domain)?, "domain"))?,
    };
    let p = match format_of(problem, forced) {
        InputFormat::Pddl => pddl::parse_problem(&read(problem)?, &d)?,
        InputFormat::Json => problem_from_value(&d, section(&read_json(problem)?, "problem"))?,
    };
    Ok((d, p))
}

fn load_dataset(path: &Path) -> Result<Dataset> {
    Ok(parse_json_dataset(&read(path)?)?)
}

fn load_model(path: &Path, budget: usize) -> Result<FeatureModel> {
    let model = FeatureModel::load(path)
        .with_context(|| format!("cannot load model {}", path.display()))?;
    Ok(model.with_budget(budget))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => Ok(io::stdout().write_all(text.as_bytes())?),
    }
}

fn run(cli: Cli) -> Result<()> {
    let budget = budget_from_env()?;
    match cli.command {
        Command::Graphify {
            domain,
            problem,
            state,
            format,
            out,
            input_format,
        } => {
            let (d, p) = load_task(&domain, &problem, input_format)?;
            let s = match &state {
                Some(path) => state_from_value(&d, &p, &read_json(path)?)?,
                None => p.initial_state().clone(),
            };
            let mut generator = IlgGenerator::new(d).with_node_budget(budget);
            generator.set_problem(&p)?;
            let graph = generator.to_graph(&s)?;
            let text = match format {
                GraphFormat::Dot => {
                    let table = generator.colour_table();
                    graph.to_dot_with(|c| table.describe(c))
                }
                GraphFormat::Json => graph.to_json() + "\n",
            };
            emit(out.as_deref(), &text)
        }
        Command::Collect {
            dataset,
            kernel,
            iterations,
            aggregator,
            out,
        } => {
            if aggregator.is_some() && kernel != KernelKind::Ccwl {
                bail!("--aggregator only applies to the ccwl kernel");
            }
            let ds = load_dataset(&dataset)?;
            let kernel =
                Kernel::new(kernel, iterations).with_aggregator(aggregator.unwrap_or_default());
            let mut model = FeatureModel::new(ds.domain.clone(), kernel).with_budget(budget);
            model.collect(&ds)?;
            model.save(&out)?;
            eprintln!(
                "collected {} colours from {} states",
                model.collected().len(),
                ds.num_states()
            );
            Ok(())
        }
        Command::Embed {
            model,
            dataset,
            out,
            with_labels,
        } => {
            let model = load_model(&model, budget)?;
            let ds = load_dataset(&dataset)?;
            let rows = model.embed_dataset(&ds)?;
            let mut csv = Vec::new();
            write_embedding_csv(&mut csv, &ds, &rows, with_labels)?;
            emit(out.as_deref(), std::str::from_utf8(&csv)?)
        }
        Command::Distinguish {
            model,
            dataset,
            tolerance,
        } => {
            let model = load_model(&model, budget)?;
            let ds = load_dataset(&dataset)?;
            let report = model.distinguish(&ds, tolerance)?;
            println!("pairs_total {}", report.pairs_total);
            println!("pairs_indistinguishable {}", report.pairs_indistinguishable);
            for (a, b) in &report.offending {
                eprintln!(
                    "indistinguishable: problem {} state {} vs problem {} state {}",
                    a.problem, a.state, b.problem, b.state
                );
            }
            Ok(())
        }
        Command::Inspect { model } => {
            let model = load_model(&model, budget)?;
            let kernel = model.kernel();
            println!("kernel {}", kernel.kind);
            println!("iterations {}", kernel.iterations);
            if kernel.kind == KernelKind::Ccwl {
                println!("aggregator {}", kernel.aggregator);
            }
            println!("domain {}", model.domain().name);
            println!("colour_table {}", model.colour_table().len());
            println!("collected {}", model.collected().len());
            println!("dimension {}", model.dimension());
            println!("registry {}", model.registry().len());
            println!(
                "weights {}",
                if model.weights().is_some() {
                    "yes"
                } else {
                    "no"
                }
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
