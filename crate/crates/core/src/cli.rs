//! The `tqft` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cache::{CacheHeader, MatrixCache, CACHE_DIR_ENV};
use crate::cyclotomic::DEFAULT_DIGITS;
use crate::error::{Result, TqftError};
use crate::graph::{check_level_and_color, PlantedTree};
use crate::invariants::{self, InvariantReport, Order, ReportOptions};
use crate::rep::{RepMatrix, Representation};
use crate::sl2z::{self, IntMatrix2};
use crate::slalom::{self, MonodromySpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tqft", version, about = "Exact SO(3) TQFT representations of mapping class groups")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Decimal digits for complex embeddings.
    #[arg(long, default_value_t = DEFAULT_DIGITS, value_parser = parse_digits, global = true)]
    pub digits: usize,
    #[arg(long, env = CACHE_DIR_ENV, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Config {
    /// Parent array, e.g. `0,1,1,1,2`.
    #[arg(long, value_parser = parse_tree)]
    pub tree: PlantedTree,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub i: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of V_{k,i} and, with --verbose, its admissible colorings.
    Basis {
        #[command(flatten)]
        cfg: Config,
        #[arg(long)]
        verbose: bool,
    },
    /// Twist about the meridian of an edge.
    Twa {
        #[command(flatten)]
        cfg: Config,
        #[arg(long)]
        edge: usize,
    },
    /// Twist about the face curve of a handle.
    Twb {
        #[command(flatten)]
        cfg: Config,
        #[arg(long)]
        handle: usize,
    },
    /// Image of an SL(2,Z) matrix on the genus-one module.
    EvalSl {
        /// Row-major entries `a,b,c,d`.
        #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
        m: IntMatrix2,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        det: bool,
        /// trace(M)^n / det(M).
        #[arg(long)]
        pgl: bool,
        /// trace(M^n) / det(M).
        #[arg(long)]
        trace_power: bool,
        /// Largest absolute value of the trace over all embeddings.
        #[arg(long)]
        normk: bool,
        /// Search for a scalar power up to this bound.
        #[arg(long)]
        order: Option<u64>,
        /// Print the matrix itself.
        #[arg(long)]
        matrix: bool,
    },
    /// normk of eval-sl over the odd levels 3..=kmax.
    NormScan {
        #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
        m: IntMatrix2,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        kmax: u32,
    },
    /// Monodromy of the slalom knot of a tree.
    Coxeter {
        #[command(flatten)]
        cfg: Config,
        #[arg(long, default_value_t = 1)]
        powers: u32,
        #[arg(long)]
        matrix: bool,
    },
}

fn parse_tree(s: &str) -> std::result::Result<PlantedTree, String> {
    PlantedTree::parse(s).map_err(|e| e.to_string())
}

fn parse_matrix(s: &str) -> std::result::Result<IntMatrix2, String> {
    IntMatrix2::parse(s).map_err(|e| e.to_string())
}

fn parse_digits(s: &str) -> std::result::Result<usize, String> {
    let d: usize = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if d < 38 {
        return Err(format!("precision must be at least 38 digits, got {d}"));
    }
    Ok(d)
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Errors go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_COMPUTE
            }
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn representation(cfg: &Config) -> Result<Representation> {
    check_level_and_color(cfg.k, cfg.i)?;
    Representation::for_tree(&cfg.tree, cfg.k, cfg.i)
}

fn cached(
    cache: Option<&MatrixCache>,
    rep: &Representation,
    tree: &PlantedTree,
    k: u32,
    i: u32,
    what: &str,
    compute: impl FnOnce() -> Result<RepMatrix>,
) -> Result<RepMatrix> {
    match cache {
        None => compute(),
        Some(c) => {
            let h = CacheHeader::new(&tree.to_string(), k, i, what);
            c.get_or_compute(&h, rep.basis(), rep.field(), compute)
        }
    }
}

fn print_matrix(out: &mut dyn Write, format: Format, m: &RepMatrix) -> Result<()> {
    match format {
        Format::Text => emit(out, &format!("dimension: {}\n{}", m.dim(), m.to_text())),
        Format::Json => emit_json(out, &json!({"dimension": m.dim(), "matrix": m.to_json()})),
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let cache = MatrixCache::resolve(cli.cache_dir.as_deref());
    let cache = cache.as_ref();
    match &cli.command {
        Command::Basis { cfg, verbose } => {
            let rep = representation(cfg)?;
            let basis = rep.basis();
            match cli.format {
                Format::Text => {
                    let mut s = format!("{}\n", basis.len());
                    if *verbose {
                        for c in basis.colorings() {
                            let parts: Vec<String> = c.iter().map(u8::to_string).collect();
                            s.push_str(&format!("[{}]\n", parts.join(",")));
                        }
                    }
                    emit(out, &s)
                }
                Format::Json => {
                    let mut v = json!({"tree": cfg.tree.to_string(), "k": cfg.k, "i": cfg.i, "dimension": basis.len()});
                    if *verbose {
                        v["colorings"] = basis.to_json();
                    }
                    emit_json(out, &v)
                }
            }
        }
        Command::Twa { cfg, edge } => {
            let rep = representation(cfg)?;
            let m = cached(cache, &rep, &cfg.tree, cfg.k, cfg.i, &format!("twa {edge}"), || rep.twa(*edge))?;
            print_matrix(out, cli.format, &m)
        }
        Command::Twb { cfg, handle } => {
            let rep = representation(cfg)?;
            let m = cached(cache, &rep, &cfg.tree, cfg.k, cfg.i, &format!("twb {handle}"), || rep.twb(*handle))?;
            print_matrix(out, cli.format, &m)
        }
        Command::EvalSl {
            m,
            k,
            i,
            trace,
            det,
            pgl,
            trace_power,
            normk,
            order,
            matrix,
        } => {
            check_level_and_color(*k, *i)?;
            let word = sl2z::slw(m)?;
            let rep = sl2z::genus_one_representation(*k, *i)?;
            let tree = rep.basis().graph().tree().clone();
            let v = cached(cache, &rep, &tree, *k, *i, &format!("sl {m}"), || sl2z::eval_sl_with(&rep, m))?;
            let all = !(*trace || *det || *pgl || *trace_power || *normk || order.is_some());
            let mut report = InvariantReport::compute(
                &v,
                &ReportOptions {
                    powers: None,
                    arch_norm: *normk,
                    order_bound: *order,
                    digits: cli.digits,
                },
            )?;
            if !(all || *pgl) {
                report.pgl = None;
            }
            let tp = if *trace_power { Some(invariants::trace_power_invariant(&v)?) } else { None };
            match cli.format {
                Format::Text => {
                    let mut s = format!("word: {word}\ndimension: {}\n", report.dimension);
                    if all || *trace {
                        s.push_str(&format!("trace: {}\n", report.trace));
                    }
                    if all || *det {
                        s.push_str(&format!("det: {}\n", report.det));
                    }
                    if let Some(p) = &report.pgl {
                        s.push_str(&format!("pgl: {p}\n"));
                    }
                    if let Some(t) = &tp {
                        s.push_str(&format!("trace-power: {t}\n"));
                    }
                    if let Some(n) = &report.arch_norm {
                        s.push_str(&format!("normk: {n}\n"));
                    }
                    match (order, report.projective_order) {
                        (None, _) => {}
                        (Some(_), Some(Order::Finite(n))) => s.push_str(&format!("projective order: {n}\n")),
                        (Some(_), Some(Order::Infinite)) => s.push_str("projective order: infinite\n"),
                        (Some(b), None) => s.push_str(&format!("projective order: not found up to {b}\n")),
                    }
                    if *matrix {
                        s.push_str(&v.to_text());
                    }
                    emit(out, &s)
                }
                Format::Json => {
                    let mut j = report.to_json();
                    let obj = j.as_object_mut().expect("object");
                    if !(all || *trace) {
                        obj.remove("trace");
                    }
                    if !(all || *det) {
                        obj.remove("det");
                    }
                    obj.insert("word".into(), json!(word.to_string()));
                    if let Some(t) = &tp {
                        obj.insert("trace_power".into(), json!(t.to_json()));
                    }
                    if *matrix {
                        obj.insert("matrix".into(), json!(v.to_json()));
                    }
                    emit_json(out, &j)
                }
            }
        }
        Command::NormScan { m, i, kmax } => {
            sl2z::slw(m)?;
            let levels: Vec<u32> = (3..=*kmax).step_by(2).filter(|k| k >= i).collect();
            if levels.is_empty() {
                return Err(TqftError::InvalidLevel(*kmax as i64));
            }
            let mut rows = Vec::with_capacity(levels.len());
            for k in levels {
                check_level_and_color(k, *i)?;
                let rep = sl2z::genus_one_representation(k, *i)?;
                let tree = rep.basis().graph().tree().clone();
                let v = cached(cache, &rep, &tree, k, *i, &format!("sl {m}"), || sl2z::eval_sl_with(&rep, m))?;
                let emb = v.field().embeddings(cli.digits);
                rows.push((k, invariants::arch_norm(&v.trace(), &emb)));
            }
            match cli.format {
                Format::Text => {
                    let s: String = rows.iter().map(|(k, n)| format!("{k} {n}\n")).collect();
                    emit(out, &s)
                }
                Format::Json => emit_json(
                    out,
                    &json!(rows
                        .iter()
                        .map(|(k, n)| json!({"k": k, "normk": n.to_string()}))
                        .collect::<Vec<_>>()),
                ),
            }
        }
        Command::Coxeter { cfg, powers, matrix } => {
            let rep = representation(cfg)?;
            let spec = MonodromySpec::new(&cfg.tree);
            let m = cached(cache, &rep, &cfg.tree, cfg.k, cfg.i, "coxeter", || rep.eval_word(&spec.word))?;
            let traces = slalom::streaming_power_traces(&rep, &spec.word, *powers, Some(&m))?;
            match cli.format {
                Format::Text => {
                    let mut s = format!("tree: {}\n", cfg.tree);
                    if let Some(knot) = spec.knot {
                        s.push_str(&format!("knot: {knot}\n"));
                    }
                    s.push_str(&format!("word: {}\ndimension: {}\n", spec.word, m.dim()));
                    for (p, t) in traces.iter().enumerate() {
                        s.push_str(&format!("trace^{}: {t}\n", p + 1));
                    }
                    if *matrix {
                        s.push_str(&m.to_text());
                    }
                    emit(out, &s)
                }
                Format::Json => {
                    let mut v = json!({
                        "tree": cfg.tree.to_string(),
                        "k": cfg.k,
                        "i": cfg.i,
                        "knot": spec.knot,
                        "word": spec.word.to_string(),
                        "dimension": m.dim(),
                        "power_traces": traces.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
                    });
                    if *matrix {
                        v["matrix"] = json!(m.to_json());
                    }
                    emit_json(out, &v)
                }
            }
        }
    }
}
