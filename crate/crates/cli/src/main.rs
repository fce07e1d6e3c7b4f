use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use multlabel::generate::random_nice_graph;
use multlabel::oracle::MAX_ORACLE_K;
use multlabel::{
    brute_force_min_k, find_conflicts, label_graph, parse_dimacs, parse_edge_list, parse_labelling,
    product_report, Graph, Labelling,
};

const EXIT_INPUT: u8 = 1;
const EXIT_NOT_NICE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Product-proper 3-labellings of graph edges.
#[derive(Debug, Parser)]
#[command(name = "multlabel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// `p edge` header selects DIMACS, anything else is an edge list.
    Auto,
    Edgelist,
    Dimacs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Label a nice graph and print the labelling and vertex products.
    Label {
        /// Graph file, or `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
        /// Print per-vertex and per-component steps to standard error.
        #[arg(long)]
        trace: bool,
        /// Write the result here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a labelling file is product-proper for a graph.
    Verify {
        graph: String,
        labelling: String,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
    },
    /// Label random nice graphs and check every result.
    Fuzz {
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        /// Vertex count of each graph.
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Edge probability.
        #[arg(long, default_value_t = 0.2, value_parser = probability)]
        p: f64,
        /// Seed of the first trial; trial `i` uses `seed + i`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for reproducer files of failing trials.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        trace: bool,
    },
    /// Smallest label count with a product-proper labelling, by exhaustive
    /// search (at most 16 edges).
    Oracle {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
}

fn probability(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("{p} is not in [0, 1]"))
    }
}

/// Failure carrying its exit code; the message goes to standard error.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::input(format!("standard input: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))
    }
}

fn detect(text: &str) -> Format {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !(l.is_empty() || l.starts_with('#') || *l == "c" || l.starts_with("c ")));
    match first {
        Some(l) if l.starts_with("p edge") => Format::Dimacs,
        _ => Format::Edgelist,
    }
}

fn read_graph(path: &str, format: Format) -> Result<Graph, Failure> {
    let text = read_input(path)?;
    let format = match format {
        Format::Auto => detect(&text),
        f => f,
    };
    let parsed = match format {
        Format::Dimacs => parse_dimacs(&text),
        _ => parse_edge_list(&text),
    };
    parsed.map_err(|e| Failure::input(format!("{path}: {e}")))
}

/// Conflicting edges as `u v` pairs.
fn conflicts(g: &Graph, l: &Labelling) -> Vec<(usize, usize)> {
    find_conflicts(g, l)
        .into_iter()
        .map(|e| g.edge(e))
        .collect()
}

/// The check behind `verify`, also run on every `label` result.
fn verify_text(g: &Graph, text: &str) -> Result<(), Failure> {
    let l = parse_labelling(g, text).map_err(|e| Failure::input(e.to_string()))?;
    let bad = conflicts(g, &l);
    if bad.is_empty() {
        return Ok(());
    }
    let mut message = String::new();
    for (u, v) in bad {
        message.push_str(&format!("conflict {u} {v}\n"));
    }
    Err(Failure {
        code: EXIT_VERIFY,
        message: message.trim_end().to_string(),
    })
}

fn cmd_label(input: &str, format: Format, trace: bool, out: Option<&Path>) -> Result<(), Failure> {
    let g = read_graph(input, format)?;
    let report = label_graph(&g).map_err(|e| match e {
        multlabel::Error::NotNice => Failure {
            code: EXIT_NOT_NICE,
            message: e.to_string(),
        },
        other => Failure {
            code: EXIT_VERIFY,
            message: format!("labelling failed: {other}"),
        },
    })?;
    if trace {
        for line in &report.trace {
            eprintln!("{line}");
        }
    }
    let labels = report.labelling.to_text(&g);
    verify_text(&g, &labels)?;
    let text = format!("{labels}\n{}", product_report(&g, &report.labelling));
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
        }
        None => {
            let _ = io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn cmd_verify(graph: &str, labelling: &str, format: Format) -> Result<(), Failure> {
    let g = read_graph(graph, format)?;
    let text = read_input(labelling)?;
    match verify_text(&g, &text) {
        Ok(()) => {
            println!("ok");
            Ok(())
        }
        Err(f) if f.code == EXIT_VERIFY => {
            println!("{}", f.message);
            Err(Failure {
                code: EXIT_VERIFY,
                message: "labelling is not product-proper".into(),
            })
        }
        Err(f) => Err(f),
    }
}

struct Trial {
    seed: u64,
    graph: Graph,
    result: Result<Vec<String>, String>,
}

fn run_trial(n: usize, p: f64, seed: u64) -> Trial {
    let graph = random_nice_graph(n, p, seed);
    let result = match label_graph(&graph) {
        Err(e) => Err(e.to_string()),
        Ok(r) => {
            let bad = conflicts(&graph, &r.labelling);
            if !bad.is_empty() {
                Err(format!("conflicts {bad:?}"))
            } else if !r.locality_violations.is_empty() {
                Err(format!(
                    "products changed outside fixed components at {:?}",
                    r.locality_violations
                ))
            } else {
                Ok(r.stats
                    .claims
                    .iter()
                    .flat_map(|(c, &k)| std::iter::repeat_n(c.to_string(), k))
                    .collect())
            }
        }
    };
    Trial {
        seed,
        graph,
        result,
    }
}

fn cmd_fuzz(
    trials: u64,
    n: usize,
    p: f64,
    seed: u64,
    out: &Path,
    trace: bool,
) -> Result<(), Failure> {
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(n, p, seed.wrapping_add(i)))
        .collect();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut failures = 0;
    for t in &results {
        match &t.result {
            Ok(claims) => {
                for c in claims {
                    *histogram.entry(c.clone()).or_default() += 1;
                }
                if trace {
                    eprintln!("trial seed={} ok claims={claims:?}", t.seed);
                }
            }
            Err(msg) => {
                failures += 1;
                let path = out.join(format!("fuzz-fail-seed{}.edges", t.seed));
                let body = format!(
                    "# seed {} n {n} p {p}\n# {msg}\n{}",
                    t.seed,
                    t.graph.to_edge_list()
                );
                let written = fs::write(&path, body).map(|()| path.display().to_string());
                eprintln!(
                    "trial seed={} failed: {msg} (reproducer: {})",
                    t.seed,
                    written.unwrap_or_else(|e| format!("not written: {e}"))
                );
            }
        }
    }
    println!("{}/{trials} ok", trials - failures);
    for (claim, count) in &histogram {
        println!("{claim}: {count}");
    }
    if failures == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_VERIFY,
            message: format!("{failures} trial(s) failed"),
        })
    }
}

fn cmd_oracle(input: &str, format: Format, kmax: usize) -> Result<(), Failure> {
    let g = read_graph(input, format)?;
    if kmax == 0 || kmax > MAX_ORACLE_K {
        return Err(Failure::input(format!(
            "--kmax must lie in 1..={MAX_ORACLE_K}"
        )));
    }
    match brute_force_min_k(&g, kmax).map_err(|e| Failure::input(e.to_string()))? {
        Some(k) => println!("chi_P = {k}"),
        None => println!("chi_P > {kmax}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INPUT),
            };
        }
    };
    let result = match cli.command {
        Command::Label {
            input,
            format,
            trace,
            out,
        } => cmd_label(&input, format, trace, out.as_deref()),
        Command::Verify {
            graph,
            labelling,
            format,
        } => cmd_verify(&graph, &labelling, format),
        Command::Fuzz {
            trials,
            n,
            p,
            seed,
            out,
            trace,
        } => cmd_fuzz(trials, n, p, seed, &out, trace),
        Command::Oracle {
            input,
            format,
            kmax,
        } => cmd_oracle(&input, format, kmax),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("multlabel: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
