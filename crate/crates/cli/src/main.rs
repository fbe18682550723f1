//! `socrep` command-line tool. Structured results go to stdout as JSON,
//! diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use socrep::bench::{bench_run, BenchOptions};
use socrep::exact::{brute_force_with, BruteForceOptions, Catalog, Mode, DEFAULT_CAP};
use socrep::frontends::{parse_rational, to_wgm, ConeInstance, ConstraintDocument, Family, Format};
use socrep::heuristics::{heuristic, traversal, Strategy, DEFAULT_BUDGET};
use socrep::medseq::{build_tree, enumerate_successive, min_mediated_sequence};
use socrep::verify::{numeric_check, reconstruct, DEFAULT_SEED};
use socrep::{BigUint, Bounds, ConfigDocument, Error, Result, Weights};

#[derive(Parser)]
#[command(name = "socrep", version, about = "Second-order cone representations of weighted geometric means")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Heuristic representation of a tuple.
    Repr {
        #[arg(required = true, num_args = 1..)]
        s: Vec<String>,
        #[arg(long, default_value = "greedy-power-two")]
        strategy: Strategy,
        /// Branch over every admissible pair instead of the greedy choice.
        #[arg(long)]
        traversal: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Minimum-size representation by exhaustive search.
    Optimal {
        #[arg(required = true, num_args = 1..)]
        s: Vec<String>,
        /// Directory holding catalog files; missing ones are written.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value = "strict")]
        mode: Mode,
    },
    /// Checks a configuration document carrying its tuple.
    Verify {
        config: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Lower and upper bounds on the minimum size.
    Bounds {
        #[arg(required = true, num_args = 1..)]
        s: Vec<String>,
    },
    /// Minimum mediated sequence for 0 < q < p.
    Medseq { p: String, q: String },
    /// Binary tree of the minimum mediated sequence.
    Tree { p: String, q: String },
    /// All successive minimum sequences, up to a limit.
    EnumSuccessive {
        p: String,
        q: String,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Counts canonical configurations of size n on m base variables.
    Enumerate {
        m: usize,
        n: usize,
        /// Writes the catalog file.
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Rewrites a constraint family as geometric means.
    Convert {
        family: Family,
        /// Exponents as integer fractions like 3/2.
        #[arg(required = true, num_args = 1.., allow_negative_numbers = true)]
        params: Vec<String>,
        /// Vector length for p-norm.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Cone constraints for a configuration document.
    Emit {
        config: PathBuf,
        #[arg(long, default_value = "json")]
        format: Format,
        /// Comma-separated variable names, one per variable.
        #[arg(long, value_delimiter = ',')]
        names: Option<Vec<String>>,
    },
    /// Runs strategies over every coprime partition of s_hat into m parts.
    Bench {
        s_hat: u64,
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "greedy-power-two,greedy-common-one")]
        algos: Vec<Strategy>,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Per-partition rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn weights(s: &[String]) -> Result<Weights> {
    Weights::parse(s)
}

fn pair(p: &str, q: &str) -> Result<(BigUint, BigUint)> {
    let parse = |x: &str| x.trim().parse().map_err(|_| Error::InvalidInput(format!("not a nonnegative integer: {x:?}")));
    Ok((parse(p)?, parse(q)?))
}

fn read_document(path: &Path) -> Result<(socrep::Configuration, Weights)> {
    let doc = ConfigDocument::parse(&fs::read_to_string(path)?)?;
    let cfg = doc.configuration()?;
    let s = doc.s.ok_or_else(|| Error::InvalidInput("configuration document has no \"s\" field".into()))?;
    Ok((cfg, s))
}

fn run(command: Command) -> Result<Value> {
    Ok(match command {
        Command::Repr { s, strategy, traversal: branch, budget } => {
            let w = weights(&s)?;
            let strategy = match (branch, strategy) {
                (true, Strategy::GreedyPowerTwo) => Strategy::TraversalPowerTwo,
                (true, Strategy::GreedyCommonOne) => Strategy::TraversalCommonOne,
                (_, k) => k,
            };
            let (cfg, exhaustive) = if strategy.is_traversal() {
                let out = traversal(&w, strategy, budget)?;
                if !out.exhaustive {
                    eprintln!("budget exhausted after {} nodes; keeping the greedy result", out.nodes);
                }
                (out.configuration, Some(out.exhaustive))
            } else {
                (heuristic(&w, strategy)?, None)
            };
            let mut v = json!({ "strategy": strategy, "size": cfg.size(), "configuration": cfg.to_document(Some(&w)) });
            if let Some(e) = exhaustive {
                v["exhaustive"] = json!(e);
            }
            v
        }
        Command::Optimal { s, catalog, cap, mode } => {
            let w = weights(&s)?;
            let out = brute_force_with(&w, &BruteForceOptions { cap, mode, catalog_dir: catalog })?;
            json!({
                "size": out.size(),
                "mode": mode,
                "sizes_tried": out.sizes_tried,
                "scanned": out.scanned,
                "configuration": out.configuration.to_document(Some(&w)),
            })
        }
        Command::Verify { config, trials, seed } => {
            let (cfg, w) = read_document(&config)?;
            let rec = reconstruct(&cfg, &w)?;
            for warning in &rec.warnings {
                eprintln!("warning: {warning}");
            }
            let mut v = serde_json::to_value(rec.verdict())?;
            if rec.is_valid() {
                v["numeric"] = serde_json::to_value(numeric_check(&cfg, &w, trials, seed)?)?;
            }
            v
        }
        Command::Bounds { s } => serde_json::to_value(Bounds::of(&weights(&s)?)?)?,
        Command::Medseq { p, q } => {
            let (p, q) = pair(&p, &q)?;
            serde_json::to_value(min_mediated_sequence(&p, &q)?)?
        }
        Command::Tree { p, q } => {
            let (p, q) = pair(&p, &q)?;
            let tree = build_tree(&min_mediated_sequence(&p, &q)?)?;
            let (ps, qs) = tree.leaf_heights();
            json!({ "height": tree.height(), "p_leaves": ps, "q_leaves": qs, "root": tree })
        }
        Command::EnumSuccessive { p, q, limit } => {
            let (p, q) = pair(&p, &q)?;
            let out = enumerate_successive(&p, &q, limit)?;
            json!({ "count": out.sequences.len(), "exhaustive": out.exhaustive, "sequences": out.sequences })
        }
        Command::Enumerate { m, n, store } => {
            let cat = Catalog::build(m, n);
            if let Some(path) = &store {
                cat.store(path)?;
            }
            json!({ "m": m, "n": n, "count": cat.len() })
        }
        Command::Convert { family, params, dim } => {
            let params = params.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>>>()?;
            serde_json::to_value(to_wgm(&ConeInstance::new(family, params).with_dimension(dim))?)?
        }
        Command::Emit { config, format, names } => {
            let (cfg, w) = read_document(&config)?;
            let mut doc = ConstraintDocument::build(&w, &cfg)?;
            if let Some(names) = names {
                doc = doc.with_names(&names)?;
            }
            match format {
                Format::Json => serde_json::to_value(doc)?,
                Format::Text => {
                    print!("{}", doc.to_text());
                    Value::Null
                }
            }
        }
        Command::Bench { s_hat, m, algos, repeat, budget, csv } => {
            let report = bench_run(s_hat, m, &algos, &BenchOptions { budget, repeat })?;
            if let Some(path) = csv {
                report.write_csv(fs::File::create(path)?)?;
            }
            serde_json::to_value(report)?
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(Value::Null) => ExitCode::SUCCESS,
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::SearchExhausted { fallback } = &e {
                eprintln!("greedy fallback has size {}", fallback.size());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
