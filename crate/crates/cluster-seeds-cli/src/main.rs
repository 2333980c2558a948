//! `clusterseed`: build, glue, mutate, export and verify cluster seeds.

mod suites;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cluster_seeds::builder::{assign_weights, build_bruhat_seed, triangle_seed, WeightSource, WeightTable};
use cluster_seeds::glue::{build_conf_m_seed, Dressing, TriangulatedPolygon};
use cluster_seeds::io::{seed_from_json, seed_to_dot, seed_to_json};
use cluster_seeds::oracle::{check_all_exchanges, evaluate_seed, generic_flags, random_torus, render, torus_weight_check};
use cluster_seeds::sequences::{apply_stages, builtin_sequence, builtin_sequences, StageTrace};
use cluster_seeds::{DynkinKind, RootDatum, Seed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const WORD_HELP: &str = "\
Types: a1, a2, ... (SL_{n+1}), g2, d4.

Words: a reduced word for the longest Weyl group element, written as the
string of node names i_1 i_2 ... i_N of w0 = s_{i_1} s_{i_2} ... s_{i_N}.
Node names are 1..n for type A_n, a (short) and b (long) for G2, and
1, 2, 3 (outer) and b (central) for D4.  Examples: 121321 (a3), bababa (g2),
b123b123b123 (d4).  Names may also be separated by spaces or commas.
Without --word the canonical word of the type is used.

Vertex names: x_<node><occurrence> for word vertices (x_a0, x_b2, ...),
x_<node> for the vertices of the third edge; vertices of glued seeds are
prefixed with the triangle, as in t1:x_a2.

Exit status: 0 on success, 1 when a verification fails or an input is
rejected, 2 on a usage error.";

#[derive(Parser)]
#[command(name = "clusterseed", version, about = "Cluster seeds for configurations of decorated flags", after_help = WORD_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seed of a reduced word (one vertex per letter, plus the initial
    /// frozen vertices).
    Build(WordArgs),
    /// Triangle seed: the word seed completed by the third edge.
    Triangle(WordArgs),
    /// Seed of a triangulated polygon, glued from triangle seeds.
    Polygon(PolygonArgs),
    /// Mutate a seed at named vertices or along a built-in sequence.
    Mutate(MutateArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Render a seed JSON file as Graphviz DOT.
    ExportDot(ExportArgs),
    /// Evaluate a type-A seed on random decorated flags and check its
    /// exchange relations and weights.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WordArgs {
    /// Root system: aN, g2 or d4.
    #[arg(long = "type")]
    kind: String,
    /// Reduced word for w0 (see below); defaults to the canonical word.
    #[arg(long)]
    word: Option<String>,
    /// Weight source: `auto`, `uniform`, `none` (build only) or a JSON file
    /// mapping "node,occurrence" to three weights.
    #[arg(long, default_value = "auto")]
    weights: String,
    /// Print the completion systems (unknowns x equations) to standard error.
    #[arg(long)]
    report: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct PolygonArgs {
    /// Root system: aN, g2 or d4.
    #[arg(long = "type")]
    kind: String,
    /// Number of marked points.
    #[arg(long)]
    m: usize,
    /// Triangulation JSON `{"m": 4, "diagonals": [[1, 3]]}` (points from 1);
    /// defaults to the fan from point 1.
    #[arg(long)]
    triangulation: Option<PathBuf>,
    /// Dressing JSON `[{"order": [1, 2, 3], "word": "..."}, ...]`, one entry
    /// per triangle; defaults to the standard rotations and canonical words.
    #[arg(long)]
    dressing: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct MutateArgs {
    /// Seed JSON file (`-` for standard input); defaults to the base seed of
    /// the sequence given with --seq.
    #[arg(long)]
    seed: Option<PathBuf>,
    /// Mutate at this vertex; repeatable, applied in order after --seq.
    #[arg(long = "at")]
    at: Vec<String>,
    /// Built-in sequence to apply (see `--list`).
    #[arg(long)]
    seq: Option<String>,
    /// Apply only the first K stages of the sequence.
    #[arg(long, requires = "seq")]
    stages: Option<usize>,
    /// Write the per-stage weight traces as JSON to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// List the built-in sequences and exit.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Figures,
    #[value(name = "g2-s3")]
    G2S3,
    #[value(name = "g2-flip")]
    G2Flip,
    Langlands,
    D4,
    Oracle,
    Properties,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Seed of the random generator used by randomized checks.
    #[arg(long, env = "CLUSTERSEED_RNG_SEED", default_value_t = 1)]
    rng_seed: u64,
    /// Number of random flag tuples per exchange check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Write the full report as JSON to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Seed JSON file (`-` for standard input).
    #[arg(long)]
    seed: PathBuf,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Type aN; the seed is the triangle seed of its canonical word unless
    /// --seed is given.
    #[arg(long = "type")]
    kind: String,
    /// Seed JSON file of the same type (`-` for standard input).
    #[arg(long)]
    seed: Option<PathBuf>,
    /// Number of random flag tuples.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, env = "CLUSTERSEED_RNG_SEED", default_value_t = 1)]
    rng_seed: u64,
    /// Also print every variable's value on one random flag tuple.
    #[arg(long)]
    evaluate: bool,
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn read_seed(path: &Path) -> Result<Seed> {
    seed_from_json(&read_input(path)?).with_context(|| format!("parsing seed {}", path.display()))
}

fn write_output(out: &OutArgs, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn weight_source(datum: &RootDatum, spec: &str) -> Result<Option<WeightSource>> {
    Ok(match spec {
        "auto" => Some(WeightSource::Auto),
        "uniform" => Some(WeightSource::Uniform),
        "none" => None,
        path => Some(WeightSource::Table(WeightTable::from_json(datum, &read_input(Path::new(path))?)?)),
    })
}

fn word_of(datum: &RootDatum, word: &Option<String>) -> Result<cluster_seeds::WeylWord> {
    match word {
        Some(w) => Ok(datum.parse_word(w)?),
        None => Ok(datum.longest_word()),
    }
}

fn build(a: &WordArgs) -> Result<Seed> {
    let datum = RootDatum::parse(&a.kind)?;
    let word = word_of(&datum, &a.word)?;
    let seed = build_bruhat_seed(&datum, &word)?;
    Ok(match weight_source(&datum, &a.weights)? {
        Some(src) => assign_weights(&seed, &datum, &word, &src)?,
        None => seed,
    })
}

fn triangle(a: &WordArgs) -> Result<Seed> {
    let datum = RootDatum::parse(&a.kind)?;
    let word = word_of(&datum, &a.word)?;
    let Some(src) = weight_source(&datum, &a.weights)? else {
        bail!("triangle completion needs weights");
    };
    let (seed, report) = triangle_seed(&datum, &word, &src)?;
    if a.report {
        for (phase, unknowns, equations) in &report.phases {
            eprintln!("{phase}: {unknowns} unknowns, {equations} equations, unique solution");
        }
    }
    Ok(seed)
}

fn polygon(a: &PolygonArgs) -> Result<Seed> {
    let datum = RootDatum::parse(&a.kind)?;
    let tri = match &a.triangulation {
        Some(p) => TriangulatedPolygon::from_json(&read_input(p)?)?,
        None => TriangulatedPolygon::fan(a.m)?,
    };
    if tri.m() != a.m {
        bail!("triangulation has {} marked points, --m is {}", tri.m(), a.m);
    }
    let dressing = match &a.dressing {
        Some(p) => Dressing::from_json(&datum, &tri, &read_input(p)?)?,
        None => Dressing::default_for(&datum, &tri),
    };
    Ok(build_conf_m_seed(&datum, &tri, &dressing)?)
}

fn mutate(a: &MutateArgs) -> Result<(Seed, Vec<StageTrace>)> {
    let seq = a.seq.as_deref().map(builtin_sequence).transpose()?;
    let start = match (&a.seed, &seq) {
        (Some(p), _) => read_seed(p)?,
        (None, Some(s)) => s.base.seed()?,
        (None, None) => bail!("give --seed or --seq"),
    };
    let (mut seed, traces) = match &seq {
        Some(s) => {
            let k = a.stages.unwrap_or(s.stages.len());
            if k > s.stages.len() {
                bail!("{} has only {} stages", s.name, s.stages.len());
            }
            apply_stages(&start, &s.name, &s.stages[..k])?
        }
        None => (start, Vec::new()),
    };
    for v in &a.at {
        seed = seed.mutate_named(v)?;
    }
    Ok((seed, traces))
}

/// The seed a seed-producing command prints, if it is one.
pub fn produce_seed(argv: &[&str]) -> Result<Seed> {
    let cli = Cli::try_parse_from(argv)?;
    match &cli.command {
        Command::Build(a) => build(a),
        Command::Triangle(a) => triangle(a),
        Command::Polygon(a) => polygon(a),
        Command::Mutate(a) => Ok(mutate(a)?.0),
        _ => bail!("`{}` does not produce a seed", argv.join(" ")),
    }
}

fn oracle(a: &OracleArgs) -> Result<bool> {
    let datum = RootDatum::parse(&a.kind)?;
    let DynkinKind::A(r) = datum.kind else {
        bail!("decorated-flag evaluation is implemented for type A only");
    };
    let n = r + 1;
    let seed = match &a.seed {
        Some(p) => read_seed(p)?,
        None => triangle_seed(&datum, &datum.longest_word(), &WeightSource::Auto)?.0,
    };
    if seed.node_names() != datum.node_names.as_slice() {
        bail!("seed is not of type {}", a.kind);
    }
    let points = seed.points().context("seed carries no weights")?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.rng_seed);
    if a.evaluate {
        let flags = generic_flags(&[&seed], n, &mut rng)?;
        for (i, v) in evaluate_seed(&seed, &flags)?.iter().enumerate() {
            println!("{} = {}", seed.name(i), render(v));
        }
    }
    let exchange = check_all_exchanges("seed", &seed, n, a.samples, &mut rng);
    println!("{}", suites::describe(&exchange));
    let flags = generic_flags(&[&seed], n, &mut rng)?;
    let h: Vec<_> = (0..points).map(|_| random_torus(n, &mut rng)).collect();
    let torus = torus_weight_check(&seed, &flags, &h);
    println!("{}", suites::describe(&torus));
    Ok(exchange.passed && torus.passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build(a) => write_output(&a.out, &seed_to_json(&build(&a)?))?,
        Command::Triangle(a) => write_output(&a.out, &seed_to_json(&triangle(&a)?))?,
        Command::Polygon(a) => write_output(&a.out, &seed_to_json(&polygon(&a)?))?,
        Command::Mutate(a) => {
            if a.list {
                for s in builtin_sequences() {
                    println!("{:<10} {:>2} mutations, stages {:?}: {}", s.name, s.len(), s.stage_sizes(), s.description);
                }
                return Ok(true);
            }
            let (seed, traces) = mutate(&a)?;
            for t in &traces {
                eprintln!("stage {}: mutated {}", t.stage, t.mutated.join(", "));
            }
            if let Some(p) = &a.trace {
                std::fs::write(p, serde_json::to_string_pretty(&traces)?)
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            write_output(&a.out, &seed_to_json(&seed))?;
        }
        Command::Verify(a) => {
            let report = suites::run_suites(a.suite, a.rng_seed, a.samples);
            for line in report.lines() {
                println!("{line}");
            }
            if let Some(p) = &a.report {
                std::fs::write(p, serde_json::to_string_pretty(&report.to_json())?)
                    .with_context(|| format!("writing {}", p.display()))?;
            }
            return Ok(report.passed());
        }
        Command::ExportDot(a) => write_output(&a.out, &seed_to_dot(&read_seed(&a.seed)?))?,
        Command::Oracle(a) => return oracle(&a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
