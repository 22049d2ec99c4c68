use std::collections::HashMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use wdsparql::bench::{
    count_answers_parallel, generate_graph, generate_query, opt_count_profile, run_workload, zigzag_variants_matching,
    BenchQuery, BenchReport, Dataset, ShapeKind, TreeShape,
};
use wdsparql::eval::format_answers;
use wdsparql::normalform::to_opt_normal_form;
use wdsparql::wdtree::{reduction_closure, reductions};
use wdsparql::{
    check_well_designed, evaluate, k_approximate, parse_pattern, print_pattern, AnswerFormat, Error, Graph, Pattern,
    WdTree,
};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Tsv,
    Json,
}

impl From<OutputFormat> for AnswerFormat {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Tsv => AnswerFormat::Tsv,
            OutputFormat::Json => AnswerFormat::Json,
        }
    }
}

/// Well-designed SPARQL patterns: checks, OPT normal form, k-approximation and evaluation.
///
/// Query files use a SPARQL-like group syntax, e.g.
/// `{ ?x rdf:type professor OPTIONAL { ?x workFor ?y } }`; `-` reads standard input.
/// Exit status: 0 ok, 1 violations or pattern outside the well-designed fragment,
/// 2 usage, parse or I/O error, 3 internal error.
#[derive(Parser, Debug)]
#[command(name = "wdsparql", version)]
struct Cli {
    /// Output format for answers, violations and bench reports (tsv means CSV for bench).
    #[arg(long, global = true, value_enum, env = "WDSPARQL_FORMAT", default_value = "tsv")]
    format: OutputFormat,

    /// Print the rewrite trace on standard error.
    #[arg(short, long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List safety and well-designedness violations.
    Check { query: PathBuf },
    /// Rewrite into OPT normal form.
    Normalize { query: PathBuf },
    /// Print the OPT-depth.
    Depth {
        query: PathBuf,
        #[arg(long)]
        no_normalize: bool,
    },
    /// Print the well-designed tree and its left-deep level traversal.
    Tree {
        query: PathBuf,
        #[arg(long)]
        no_normalize: bool,
    },
    /// Print the k-approximation.
    Approx {
        query: PathBuf,
        #[arg(short, long)]
        k: usize,
        /// Also print the OPT count of every approximation up to the depth.
        #[arg(long)]
        profile: bool,
        /// Also print the approximated tree and the traversal table.
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        no_normalize: bool,
    },
    /// Evaluate over an N-Triples file, exactly or as the k-approximation.
    Eval {
        query: PathBuf,
        data: PathBuf,
        #[arg(short, long)]
        k: Option<usize>,
        #[arg(long)]
        no_normalize: bool,
    },
    /// List one-step reductions (or the whole closure).
    Reductions {
        query: PathBuf,
        #[arg(long)]
        closure: bool,
    },
    /// Run the shape/k workload over synthetic university graphs.
    Bench {
        /// Shapes to run (zigzag, left-deep, right-deep, full).
        #[arg(long, value_delimiter = ',', default_value = "zigzag,left-deep,right-deep,full")]
        shapes: Vec<ShapeKind>,
        /// OPT counts, one per shape; defaults to 9, 4, 4, 15 respectively.
        #[arg(long, value_delimiter = ',')]
        opts: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        /// Dataset scales (number of universities).
        #[arg(long, value_delimiter = ',', default_value = "1")]
        scales: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        /// Count answers on this many threads instead of timing.
        #[arg(long)]
        parallel: Option<usize>,
        /// Print OPT-count profiles and the zigzag search instead of running.
        #[arg(long)]
        profile: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_query(path: &Path) -> anyhow::Result<Pattern> {
    let src = read_input(path)?;
    parse_pattern(&src).map_err(|e| anyhow::Error::new(Error::from(e)).context(path.display().to_string()))
}

/// ONF version of `p`, rewriting unless `no_normalize` is set.
fn prepare(p: Pattern, no_normalize: bool, verbose: bool) -> anyhow::Result<Pattern> {
    if no_normalize {
        let inner = match &p {
            Pattern::Select(_, inner) => inner,
            other => other,
        };
        if !inner.is_opt_normal_form() {
            return Err(Error::NotInOptNormalForm.into());
        }
        let violations = check_well_designed(&p);
        if !violations.is_empty() {
            return Err(Error::NotWellDesigned(violations).into());
        }
        return Ok(p);
    }
    let (onf, trace) = to_opt_normal_form(&p)?;
    if verbose {
        for step in &trace.steps {
            eprintln!("{} at {:?}: {} => {}", step.rule, step.path, step.before, step.after);
        }
    }
    Ok(onf)
}

/// Applies `f` under a top-level SELECT, if any.
fn under_select(p: &Pattern, f: impl FnOnce(&Pattern) -> wdsparql::Result<Pattern>) -> wdsparql::Result<Pattern> {
    match p {
        Pattern::Select(vars, inner) => Ok(Pattern::Select(vars.clone(), Box::new(f(inner)?))),
        other => f(other),
    }
}

fn body(p: &Pattern) -> &Pattern {
    match p {
        Pattern::Select(_, inner) => inner,
        other => other,
    }
}

/// Leaf labels L1..Ln in left-to-right order, with a legend.
fn leaf_labels(tree: &WdTree) -> (HashMap<String, String>, String) {
    let mut labels = HashMap::new();
    let mut legend = String::new();
    for leaf in tree.leaves() {
        let text = print_pattern(leaf);
        if !labels.contains_key(&text) {
            let name = format!("L{}", labels.len() + 1);
            legend.push_str(&format!("{name} = {text}\n"));
            labels.insert(text, name);
        }
    }
    (labels, legend)
}

fn print_tree(out: &mut impl Write, tree: &WdTree, labels: &HashMap<String, String>) -> io::Result<()> {
    let label = |p: &Pattern| {
        let text = print_pattern(p);
        labels.get(&text).cloned().unwrap_or(text)
    };
    write!(out, "{}", tree.render(&label))
}

fn print_ldlt(out: &mut impl Write, tree: &WdTree, labels: &HashMap<String, String>) -> io::Result<()> {
    let label = |p: &Pattern| {
        let text = print_pattern(p);
        labels.get(&text).cloned().unwrap_or(text)
    };
    write!(out, "{}", tree.left_deep_level_traversal().render(&label))
}

fn default_opts(kind: ShapeKind) -> usize {
    match kind {
        ShapeKind::Zigzag => 9,
        ShapeKind::LeftDeep | ShapeKind::RightDeep => 4,
        ShapeKind::Full => 15,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let format = cli.format;
    match cli.command {
        Command::Check { query } => {
            let p = read_query(&query)?;
            let violations = check_well_designed(&p);
            for v in &violations {
                match format {
                    OutputFormat::Tsv => writeln!(out, "{v}")?,
                    OutputFormat::Json => writeln!(out, "{}", v.to_json())?,
                }
            }
            return Ok(ExitCode::from(if violations.is_empty() { 0 } else { 1 }));
        }
        Command::Normalize { query } => {
            let p = prepare(read_query(&query)?, false, cli.verbose)?;
            writeln!(out, "{}", print_pattern(&p))?;
        }
        Command::Depth { query, no_normalize } => {
            let p = prepare(read_query(&query)?, no_normalize, cli.verbose)?;
            writeln!(out, "{}", body(&p).opt_depth()?)?;
        }
        Command::Tree { query, no_normalize } => {
            let p = prepare(read_query(&query)?, no_normalize, cli.verbose)?;
            let tree = WdTree::build(body(&p))?;
            let (labels, legend) = leaf_labels(&tree);
            print_tree(&mut out, &tree, &labels)?;
            writeln!(out)?;
            write!(out, "{legend}")?;
            writeln!(out)?;
            print_ldlt(&mut out, &tree, &labels)?;
        }
        Command::Approx {
            query,
            k,
            profile,
            tree,
            no_normalize,
        } => {
            let p = prepare(read_query(&query)?, no_normalize, cli.verbose)?;
            let approx = under_select(&p, |b| k_approximate(b, k))?;
            writeln!(out, "{}", print_pattern(&approx))?;
            if profile {
                let depth = body(&p).opt_depth()?;
                writeln!(out)?;
                writeln!(out, "k\topt_count")?;
                for (k, n) in opt_count_profile(body(&p), depth.max(k))? {
                    writeln!(out, "{k}\t{n}")?;
                }
            }
            if tree {
                let full = WdTree::build(body(&p))?;
                let (labels, legend) = leaf_labels(&full);
                writeln!(out)?;
                print_tree(&mut out, &full.k_approximation(k), &labels)?;
                writeln!(out)?;
                write!(out, "{legend}")?;
                writeln!(out)?;
                print_ldlt(&mut out, &full, &labels)?;
            }
        }
        Command::Eval {
            query,
            data,
            k,
            no_normalize,
        } => {
            let p = read_query(&query)?;
            let graph = Graph::from_ntriples(&read_input(&data)?)
                .map_err(anyhow::Error::new)
                .with_context(|| data.display().to_string())?;
            let target = match k {
                Some(k) => {
                    let p = prepare(p, no_normalize, cli.verbose)?;
                    under_select(&p, |b| k_approximate(b, k))?
                }
                None => p,
            };
            let start = Instant::now();
            let answers = evaluate(&target, &graph);
            let elapsed = start.elapsed();
            out.write_all(format_answers(&answers, format.into()).as_bytes())?;
            eprintln!("# {} answer(s) in {:.3} ms", answers.len(), elapsed.as_secs_f64() * 1e3);
        }
        Command::Reductions { query, closure } => {
            let p = read_query(&query)?;
            let mut lines: Vec<String> = if closure {
                reduction_closure(&p).iter().map(print_pattern).collect()
            } else {
                reductions(&p).iter().map(print_pattern).collect()
            };
            if closure {
                lines.sort();
            }
            for l in lines {
                writeln!(out, "{l}")?;
            }
        }
        Command::Bench {
            shapes,
            opts,
            k_max,
            scales,
            seed,
            repeats,
            parallel,
            profile,
            output,
        } => {
            if !opts.is_empty() && opts.len() != shapes.len() {
                bail!(Usage(format!(
                    "--opts needs one count per shape ({} given for {} shapes)",
                    opts.len(),
                    shapes.len()
                )));
            }
            let mut queries = Vec::new();
            for (i, kind) in shapes.iter().enumerate() {
                let shape = TreeShape::new(*kind, opts.get(i).copied().unwrap_or_else(|| default_opts(*kind)));
                queries.push(BenchQuery {
                    name: shape.to_string(),
                    pattern: generate_query(shape, seed)?,
                });
            }
            let ks: Vec<usize> = (0..=k_max).collect();
            let text = if profile {
                let mut s = String::from("query\tprofile\n");
                for q in &queries {
                    let prof: Vec<String> = opt_count_profile(&q.pattern, k_max)?
                        .into_iter()
                        .map(|(_, n)| n.to_string())
                        .collect();
                    s.push_str(&format!("{}\t{}\n", q.name, prof.join(",")));
                }
                let found = zigzag_variants_matching(9, &[0, 2, 5, 8, 9]);
                s.push_str(&format!("zigzag/9 run sequences with profile 0,2,5,8,9: {found:?}\n"));
                s
            } else {
                let mut report = BenchReport::default();
                for &scale in &scales {
                    let graph = generate_graph(scale, seed);
                    let ds = Dataset {
                        name: format!("univ{scale}"),
                        graph: &graph,
                    };
                    let part = match parallel {
                        Some(threads) => count_answers_parallel(&queries, &ds, &ks, threads),
                        None => run_workload(&queries, &ds, &ks, repeats),
                    };
                    report.extend(part);
                }
                match format {
                    OutputFormat::Tsv => report.to_csv()?,
                    OutputFormat::Json => report.to_json() + "\n",
                }
            };
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::Parse(_) | Error::InvalidData(_) | Error::ShapeInfeasible(_) => 2,
            Error::NotWellDesigned(_) | Error::NotInOptNormalForm | Error::UnsupportedNode(_) => 1,
            Error::ResourceLimit { .. } | Error::Internal(_) => 3,
        };
    }
    if err.downcast_ref::<Usage>().is_some() || err.downcast_ref::<io::Error>().is_some() {
        return 2;
    }
    3
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            if err
                .downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
            {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {err:#}");
            if let Some(Error::NotWellDesigned(vs)) = err.downcast_ref::<Error>() {
                for v in vs {
                    eprintln!("  {v}");
                }
            }
            ExitCode::from(exit_code(&err))
        }
    }
}
