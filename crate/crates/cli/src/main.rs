//! `rgc`: command-line front end for regular graph constraints.
//!
//! Exit codes: 0 positive verdict or success, 1 negative verdict, 2 usage
//! or input error, 3 search bound exhausted without a verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use rgc_core::closure::{product, sum};
use rgc_core::emsol::{
    emit_flexible, emit_formula, eval_formula, parse_formula, render_formula, FlexibleFormula,
};
use rgc_core::families::{
    enumerate_heaps, gen_cg, gen_grid, gen_list, CorresponderParams, HeapEnumConfig,
};
use rgc_core::format::{parse, serialize};
use rgc_core::heap_sat::sat_over_heaps;
use rgc_core::hom::find_hom;
use rgc_core::implication::{
    assignment_counterexample, check_implication, equiv_bounded, invariant_gadget, Assignment,
    Counterexample, Direction, EquivVerdict, ImplicationVerdict,
};
use rgc_core::paths::{slice_matching, word, Regex};
use rgc_core::pcp::{
    bounded_cg_search, brute_solve_pcp, build_reduction, solution_from_witness, PcpInstance,
};
use rgc_core::{Graph, Homomorphism};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "rgc", version, about = "Regular graph constraints over heaps")]
struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for bounded searches. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutFile {
    /// Write the resulting graph here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a homomorphism from A to B.
    Hom { a: PathBuf, b: PathBuf },
    /// Satisfiability over heaps.
    Sat { file: PathBuf },
    /// Conjunction of two constraints.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutFile,
    },
    /// Disjunction of two orable constraints.
    Sum {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutFile,
    },
    /// Generate a graph from one of the built-in families.
    #[command(subcommand)]
    Gen(Gen),
    /// List heaps up to a size, one per isomorphism class by default.
    EnumHeaps {
        /// Largest number of nodes besides root and null.
        #[arg(long)]
        max: usize,
        /// Every labelled heap instead of one per isomorphism class.
        #[arg(long)]
        labelled: bool,
        /// Print only the number of heaps.
        #[arg(long)]
        count: bool,
    },
    /// Look for a slice whose word matches a regular expression.
    Slices {
        file: PathBuf,
        #[arg(long)]
        regex: String,
    },
    #[command(subcommand)]
    Pcp(Pcp),
    #[command(subcommand)]
    Emsol(Emsol),
    /// Bounded implication check over heaps.
    Implies {
        g1: PathBuf,
        g2: PathBuf,
        /// Largest heap searched, in nodes besides root and null.
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
    /// Bounded equivalence check over heaps.
    Equiv {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
    /// Build the invariant graph for a pair of orable graphs.
    Gadget {
        g1: PathBuf,
        g2: PathBuf,
        #[command(flatten)]
        out: OutFile,
    },
    /// Bounded check that an assignment preserves an invariant graph.
    Preserves {
        invariant: PathBuf,
        /// Statement such as `root.1.2 := null` or `root.1.2 := root`.
        #[arg(long, default_value = "root.1.2 := null")]
        stmt: String,
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
    /// Structural class membership.
    Classify { file: PathBuf },
}

#[derive(Subcommand)]
enum Gen {
    /// `m × n` grid.
    Grid {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutFile,
    },
    /// Corresponder graph.
    Cg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Upper block offsets, comma separated.
        #[arg(long, value_delimiter = ',')]
        u: Vec<usize>,
        /// Lower block offsets, comma separated.
        #[arg(long, value_delimiter = ',')]
        l: Vec<usize>,
        #[command(flatten)]
        out: OutFile,
    },
    /// List spelling a word over `1` and `2`.
    List {
        #[arg(long, default_value = "")]
        word: String,
        #[command(flatten)]
        out: OutFile,
    },
}

#[derive(Subcommand)]
enum Pcp {
    /// Shortest solution up to a length.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// The reduction graph of an instance.
    Reduce {
        file: PathBuf,
        #[command(flatten)]
        out: OutFile,
    },
    /// Smallest corresponder graph mapping into the reduction graph.
    Search {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
}

#[derive(Subcommand)]
enum Emsol {
    /// Normal-form sentence whose models are the graphs mapping into GRAPH.
    Emit {
        graph: PathBuf,
        #[command(flatten)]
        out: OutFile,
    },
    /// Evaluate a normal-form sentence on a graph.
    Eval { graph: PathBuf, formula: PathBuf },
    /// Render a flexible-form sentence from a JSON description; without a
    /// file, the root in-degree example.
    Flex { desc: Option<PathBuf> },
}

/// Outcome of one command.
struct Report {
    code: u8,
    text: String,
    json: Value,
}

const POSITIVE: u8 = 0;
const NEGATIVE: u8 = 1;
const UNKNOWN: u8 = 3;

impl Report {
    fn new(code: u8, text: String, json: Value) -> Self {
        Report { code, text, json }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_pcp(path: &Path) -> Result<PcpInstance> {
    PcpInstance::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn hom_json(h: &Homomorphism, src: &Graph, tgt: &Graph) -> Value {
    h.named_pairs(src, tgt)
        .into_iter()
        .map(|(a, b)| json!([a, b]))
        .collect()
}

/// Emits a graph to the output file, or inline in the report.
fn graph_report(g: &Graph, out: &OutFile, what: &str) -> Result<Report> {
    let text = serialize(g);
    match &out.output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(Report::new(
                POSITIVE,
                format!("wrote {what} to {}\n", path.display()),
                json!({ "written": path.display().to_string(), "nodes": g.node_count() }),
            ))
        }
        None => Ok(Report::new(POSITIVE, text.clone(), json!({ "graph": text }))),
    }
}

fn counterexample_text(c: &Counterexample, g1: &Graph) -> String {
    let mut text = serialize(&c.heap);
    text.push_str("# model\n");
    for line in c.model.render(&c.heap, g1).lines() {
        text.push_str(&format!("# {line}\n"));
    }
    if let Some(s) = &c.slice {
        text.push_str(&format!("# slice {} matches {}\n", s.path, s.regex));
    }
    text
}

fn counterexample_json(c: &Counterexample, g1: &Graph) -> Value {
    json!({
        "heap": serialize(&c.heap),
        "model": hom_json(&c.model, &c.heap, g1),
        "slice": c.slice,
    })
}

fn run(cmd: Command) -> Result<Report> {
    match cmd {
        Command::Hom { a, b } => {
            let (ga, gb) = (read_graph(&a)?, read_graph(&b)?);
            Ok(match find_hom(&ga, &gb) {
                Some(h) => Report::new(
                    POSITIVE,
                    format!("HOM\n{}", h.render(&ga, &gb)),
                    json!({ "verdict": "HOM", "map": hom_json(&h, &ga, &gb) }),
                ),
                None => Report::new(NEGATIVE, "NO HOM\n".into(), json!({ "verdict": "NO HOM" })),
            })
        }
        Command::Sat { file } => {
            let g = read_graph(&file)?;
            let res = sat_over_heaps(&g);
            Ok(match &res.witness {
                Some(w) if res.satisfiable => {
                    let text = serialize(w);
                    Report::new(
                        POSITIVE,
                        format!("SAT\n{text}"),
                        json!({ "verdict": "SAT", "witness": text, "trace": res.cleanup_trace }),
                    )
                }
                _ => {
                    let mut text = String::from("UNSAT\n");
                    for r in &res.cleanup_trace {
                        text.push_str(&format!("removed {} ({})\n", r.node, r.reason));
                    }
                    Report::new(
                        NEGATIVE,
                        text,
                        json!({ "verdict": "UNSAT", "trace": res.cleanup_trace }),
                    )
                }
            })
        }
        Command::Product { a, b, out } => {
            let g = product(&read_graph(&a)?, &read_graph(&b)?);
            graph_report(&g, &out, "product")
        }
        Command::Sum { a, b, out } => {
            let g = sum(&read_graph(&a)?, &read_graph(&b)?)?;
            graph_report(&g, &out, "sum")
        }
        Command::Gen(gen) => match gen {
            Gen::Grid { m, n, out } => graph_report(&gen_grid(m, n)?, &out, "grid"),
            Gen::Cg { n, k, u, l, out } => {
                let p = CorresponderParams::new(n, k, u, l)?;
                graph_report(&gen_cg(&p), &out, "corresponder graph")
            }
            Gen::List { word, out } => graph_report(&gen_list(&word)?, &out, "list"),
        },
        Command::EnumHeaps { max, labelled, count } => {
            let heaps = enumerate_heaps(HeapEnumConfig {
                max_nodes: max,
                dedupe: !labelled,
            });
            if count {
                let n = heaps.count();
                return Ok(Report::new(POSITIVE, format!("{n}\n"), json!({ "count": n })));
            }
            let mut text = String::new();
            let mut all = Vec::new();
            for (i, h) in heaps.enumerate() {
                let s = serialize(&h);
                text.push_str(&format!("# heap {}\n{s}\n", i + 1));
                all.push(s);
            }
            Ok(Report::new(
                POSITIVE,
                text,
                json!({ "count": all.len(), "heaps": all }),
            ))
        }
        Command::Slices { file, regex } => {
            let g = read_graph(&file)?;
            let e = Regex::parse(&regex).map_err(|e| anyhow!("bad expression `{regex}`: {e}"))?;
            Ok(match slice_matching(&g, &e) {
                Some(p) => Report::new(
                    POSITIVE,
                    format!("YES\n{}\n", p.render(&g)),
                    json!({ "verdict": "YES", "slice": p.render(&g), "word": word(&p) }),
                ),
                None => Report::new(NEGATIVE, "NO\n".into(), json!({ "verdict": "NO" })),
            })
        }
        Command::Pcp(pcp) => run_pcp(pcp),
        Command::Emsol(e) => run_emsol(e),
        Command::Implies { g1, g2, max } => {
            let (a, b) = (read_graph(&g1)?, read_graph(&g2)?);
            Ok(match check_implication(&a, &b, max) {
                ImplicationVerdict::ValidSufficient(h) => Report::new(
                    POSITIVE,
                    format!("VALID(sufficient)\n{}", h.render(&a, &b)),
                    json!({ "verdict": "VALID(sufficient)", "map": hom_json(&h, &a, &b) }),
                ),
                ImplicationVerdict::Counterexample(c) => Report::new(
                    NEGATIVE,
                    format!("COUNTEREXAMPLE\n{}", counterexample_text(&c, &a)),
                    json!({ "verdict": "COUNTEREXAMPLE", "counterexample": counterexample_json(&c, &a) }),
                ),
                ImplicationVerdict::Unknown { bound } => Report::new(
                    UNKNOWN,
                    format!("UNKNOWN(bound {bound})\n"),
                    json!({ "verdict": "UNKNOWN", "bound": bound }),
                ),
            })
        }
        Command::Equiv { g1, g2, max } => {
            let (a, b) = (read_graph(&g1)?, read_graph(&g2)?);
            if find_hom(&a, &b).is_some() && find_hom(&b, &a).is_some() {
                return Ok(Report::new(
                    POSITIVE,
                    "EQUIVALENT(sufficient)\n".into(),
                    json!({ "verdict": "EQUIVALENT(sufficient)" }),
                ));
            }
            Ok(match equiv_bounded(&a, &b, max) {
                EquivVerdict::EquivalentUpTo { bound } => Report::new(
                    UNKNOWN,
                    format!("UNKNOWN(bound {bound})\n"),
                    json!({ "verdict": "UNKNOWN", "bound": bound }),
                ),
                EquivVerdict::Counterexample {
                    direction,
                    counterexample,
                } => {
                    let (from, label) = match direction {
                        Direction::FirstToSecond => (&a, "first-to-second"),
                        Direction::SecondToFirst => (&b, "second-to-first"),
                    };
                    Report::new(
                        NEGATIVE,
                        format!(
                            "COUNTEREXAMPLE({label})\n{}",
                            counterexample_text(&counterexample, from)
                        ),
                        json!({
                            "verdict": "COUNTEREXAMPLE",
                            "direction": direction,
                            "counterexample": counterexample_json(&counterexample, from),
                        }),
                    )
                }
            })
        }
        Command::Gadget { g1, g2, out } => {
            let g = invariant_gadget(&read_graph(&g1)?, &read_graph(&g2)?)?;
            graph_report(&g, &out, "invariant graph")
        }
        Command::Preserves { invariant, stmt, max } => {
            let g = read_graph(&invariant)?;
            let a = Assignment::parse(&stmt)?;
            Ok(match assignment_counterexample(&g, &a, max) {
                Some(h) => {
                    let text = serialize(&h);
                    Report::new(
                        NEGATIVE,
                        format!("COUNTEREXAMPLE\n{text}"),
                        json!({ "verdict": "COUNTEREXAMPLE", "statement": a.to_string(), "heap": text }),
                    )
                }
                None => Report::new(
                    UNKNOWN,
                    format!("UNKNOWN(bound {max})\n"),
                    json!({ "verdict": "UNKNOWN", "statement": a.to_string(), "bound": max }),
                ),
            })
        }
        Command::Classify { file } => {
            let c = read_graph(&file)?.classify();
            let text = format!(
                "heap {}\ntree {}\nlist {}\norable {}\n",
                c.is_heap, c.is_tree, c.is_list, c.is_orable
            );
            Ok(Report::new(POSITIVE, text, serde_json::to_value(c)?))
        }
    }
}

fn run_pcp(cmd: Pcp) -> Result<Report> {
    match cmd {
        Pcp::Solve { file, max_len } => {
            let inst = read_pcp(&file)?;
            Ok(match brute_solve_pcp(&inst, max_len) {
                Some(sol) => {
                    let (top, _) = inst.concat(&sol.indices)?;
                    Report::new(
                        POSITIVE,
                        format!("SOLUTION {sol}\n{top}\n"),
                        json!({ "verdict": "SOLUTION", "indices": sol.indices, "word": top }),
                    )
                }
                None => Report::new(
                    UNKNOWN,
                    format!("UNKNOWN(max-len {max_len})\n"),
                    json!({ "verdict": "UNKNOWN", "max_len": max_len }),
                ),
            })
        }
        Pcp::Reduce { file, out } => graph_report(&build_reduction(&read_pcp(&file)?), &out, "reduction graph"),
        Pcp::Search { file, n_max, k_max } => {
            let inst = read_pcp(&file)?;
            Ok(match bounded_cg_search(&inst, n_max, k_max) {
                Some((params, h)) => {
                    let cg = gen_cg(&params);
                    let target = build_reduction(&inst);
                    let sol = solution_from_witness(&inst, &cg, &h)?;
                    Report::new(
                        POSITIVE,
                        format!("FOUND {params}\nSOLUTION {sol}\n{}", h.render(&cg, &target)),
                        json!({
                            "verdict": "FOUND",
                            "params": params,
                            "name": params.to_string(),
                            "indices": sol.indices,
                            "map": hom_json(&h, &cg, &target),
                        }),
                    )
                }
                None => Report::new(
                    UNKNOWN,
                    format!("UNKNOWN(n <= {n_max}, k <= {k_max})\n"),
                    json!({ "verdict": "UNKNOWN", "n_max": n_max, "k_max": k_max }),
                ),
            })
        }
    }
}

fn run_emsol(cmd: Emsol) -> Result<Report> {
    match cmd {
        Emsol::Emit { graph, out } => {
            let text = render_formula(&emit_formula(&read_graph(&graph)?));
            match out.output {
                Some(path) => {
                    fs::write(&path, &text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    Ok(Report::new(
                        POSITIVE,
                        format!("wrote formula to {}\n", path.display()),
                        json!({ "written": path.display().to_string() }),
                    ))
                }
                None => Ok(Report::new(POSITIVE, text.clone(), json!({ "formula": text }))),
            }
        }
        Emsol::Eval { graph, formula } => {
            let g = read_graph(&graph)?;
            let f = parse_formula(&read(&formula)?)
                .with_context(|| format!("in {}", formula.display()))?;
            let holds = eval_formula(&g, &f)?;
            let verdict = if holds { "TRUE" } else { "FALSE" };
            Ok(Report::new(
                if holds { POSITIVE } else { NEGATIVE },
                format!("{verdict}\n"),
                json!({ "verdict": verdict }),
            ))
        }
        Emsol::Flex { desc } => {
            let d: FlexibleFormula = match desc {
                Some(path) => serde_json::from_str(&read(&path)?)
                    .with_context(|| format!("in {}", path.display()))?,
                None => FlexibleFormula::root_in_degree_zero(),
            };
            let text = emit_flexible(&d)?;
            Ok(Report::new(POSITIVE, text.clone(), json!({ "formula": text })))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.max(1);
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("json value"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
