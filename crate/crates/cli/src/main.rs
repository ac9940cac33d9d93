use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use gvlab::cdbasis::{cd_decompose, g_order_zero, h_vector, CdError};
use gvlab::corpus::{
    build_corpus, cache_parse, cache_write, enumerate_01, find_by_distance_count, parse_mask_list,
    polytope_flag, sample_01, DistanceCount, PipelineError, VertexMask, MAX_EXHAUSTIVE_DIM,
};
use gvlab::hull::read_vertex_file;
use gvlab::lattice::polar_flag;
use gvlab::search::{d5, SearchReport};
use gvlab::verify::{run_all, VerifyOptions};

#[derive(Parser)]
#[command(name = "gvlab", version, about = "Flag vectors, CD coordinates and effective word-sets of polytopes")]
struct Cli {
    /// Worker threads (default: GVLAB_THREADS, else all logical cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the flag vector, CD vector, g and h of one polytope.
    Flag(FlagArgs),
    /// Build a corpus cache of 01-polytopes and their polars.
    Corpus(CorpusArgs),
    /// Compute effective and extremal word-sets of a corpus cache.
    Search(SearchArgs),
    /// Run the built-in numeric checks.
    VerifyPaper(VerifyArgs),
    /// Find 01-vertex sets whose members all have a given distance count.
    Distance(DistanceArgs),
}

#[derive(Args)]
struct FlagArgs {
    /// Vertex file, or a hex mask when --dim is given.
    input: String,
    /// Treat INPUT as a vertex mask of the DIM-cube.
    #[arg(long)]
    dim: Option<usize>,
    /// Report the polar polytope instead.
    #[arg(long)]
    polar: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["exhaustive", "sample", "ingest"])))]
struct CorpusArgs {
    /// Cube dimension.
    dim: usize,
    /// Every combinatorial class (d <= 4).
    #[arg(long)]
    exhaustive: bool,
    /// Number of random classes.
    #[arg(long, value_name = "N")]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Mask list, one `d=<d> mask=0x<hex>` or bare hex mask per line.
    #[arg(long, value_name = "FILE")]
    ingest: Option<PathBuf>,
    /// Cache file to write.
    #[arg(long)]
    out: PathBuf,
    /// Append to an existing cache instead of replacing it.
    #[arg(long)]
    append: bool,
}

#[derive(Args)]
struct SearchArgs {
    cache: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Seed recorded in the report.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random 5-dimensional classes for the sampled check.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, hide = true)]
    tamper_basis: bool,
}

#[derive(Args)]
struct DistanceArgs {
    dim: usize,
    /// Size of the vertex set.
    k: usize,
    /// Comma-separated counts for distances 0..=dim.
    target: String,
}

enum Failure {
    Input(anyhow::Error),
    Verify(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Flag(a) => cmd_flag(a),
        Command::Corpus(a) => cmd_corpus(a),
        Command::Search(a) => cmd_search(a),
        Command::VerifyPaper(a) => cmd_verify(a),
        Command::Distance(a) => cmd_distance(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(e)) => {
            eprintln!("verification failed: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> anyhow::Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("GVLAB_THREADS") {
            Ok(v) => Some(v.trim().parse().with_context(|| format!("GVLAB_THREADS={v:?}"))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn cmd_flag(a: FlagArgs) -> Outcome {
    let polytope = match a.dim {
        Some(d) => {
            let m = parse_mask_list(&a.input, Some(d)).map_err(anyhow::Error::from)?;
            match m.as_slice() {
                [m] => m.to_polytope(),
                _ => return Err(anyhow!("expected one mask, got {:?}", a.input).into()),
            }
        }
        None => read_vertex_file(Path::new(&a.input))
            .with_context(|| format!("reading {}", a.input))?,
    };
    let mut flag = polytope_flag(&polytope).map_err(|e| match e {
        PipelineError::Hull(e) => Failure::Input(e.into()),
        PipelineError::Lattice(e) => Failure::Verify(e.into()),
    })?;
    if a.polar {
        flag = polar_flag(&flag);
    }
    let cd = cd_decompose(&flag).map_err(|e| match e {
        CdError::NotInSpan { .. } => Failure::Verify(e.into()),
        other => Failure::Input(other.into()),
    })?;
    let g = g_order_zero(&cd);
    let h = h_vector(&g, flag.dim());
    let g_text: Vec<String> = g.iter().map(gvlab::exactnum::format_rat).collect();
    println!("flag: {flag}");
    println!("f: {:?}", flag.f_vector());
    println!("cd: {cd}");
    println!("g: ({})", g_text.join(", "));
    println!("h: {h}");
    Ok(())
}

fn cmd_corpus(a: CorpusArgs) -> Outcome {
    let masks: Vec<VertexMask> = if a.exhaustive {
        if a.dim > MAX_EXHAUSTIVE_DIM {
            return Err(anyhow!(
                "--exhaustive is limited to d <= {MAX_EXHAUSTIVE_DIM}; use --sample or --ingest"
            )
            .into());
        }
        eprintln!("enumerating classes of {}-dimensional 01-polytopes", a.dim);
        enumerate_01(a.dim).map_err(anyhow::Error::from)?
    } else if let Some(n) = a.sample {
        eprintln!("sampling {n} classes in dimension {} with seed {}", a.dim, a.seed);
        sample_01(a.dim, n, a.seed).map_err(anyhow::Error::from)?
    } else {
        let path = a.ingest.as_ref().expect("clap enforces one mode");
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let masks = parse_mask_list(&text, Some(a.dim)).map_err(anyhow::Error::from)?;
        if let Some(m) = masks.iter().find(|m| m.d != a.dim) {
            return Err(anyhow!("{m} does not match dimension {}", a.dim).into());
        }
        masks
    };
    let mut masks = masks;
    masks.sort();
    masks.dedup();
    if !a.append && a.out.exists() {
        fs::remove_file(&a.out).with_context(|| format!("replacing {}", a.out.display()))?;
    }
    let chunk = 1000;
    let mut written = 0;
    for (i, part) in masks.chunks(chunk).enumerate() {
        let entries = build_corpus(part).map_err(anyhow::Error::from)?;
        cache_write(&a.out, &entries).map_err(anyhow::Error::from)?;
        written += entries.len();
        eprintln!("  {} / {} classes", (i * chunk + part.len()), masks.len());
    }
    if masks.is_empty() {
        cache_write(&a.out, &[]).map_err(anyhow::Error::from)?;
    }
    println!("{} classes, {written} entries -> {}", masks.len(), a.out.display());
    Ok(())
}

fn cmd_search(a: SearchArgs) -> Outcome {
    let bytes = fs::read(&a.cache).with_context(|| format!("reading {}", a.cache.display()))?;
    let fingerprint = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes).context("cache is not UTF-8")?;
    let contents = cache_parse(&text);
    if let Some(e) = contents.error {
        return Err(anyhow!("{}: {e}", a.cache.display()).into());
    }
    if contents.entries.is_empty() {
        return Err(anyhow!("{} holds no entries", a.cache.display()).into());
    }
    eprintln!("searching {} entries", contents.entries.len());
    let d = contents.entries[0].dim;
    let comps = d5::components();
    let basis = (d == 5).then_some(comps.as_slice());
    let report = SearchReport::build(&contents.entries, &fingerprint, a.seed, basis)
        .map_err(anyhow::Error::from)?;
    let rendered = report.render();
    match a.report {
        Some(path) => {
            fs::write(&path, rendered).with_context(|| format!("writing {}", path.display()))?;
            let (z, h, r) = report.count_by_class();
            println!(
                "|E| = {}; {} extremal ({z} order-zero, {h} higher-order, {r} residual) -> {}",
                report.effective_count,
                report.extremal.len(),
                path.display()
            );
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(rendered.as_bytes()).context("writing report")?;
        }
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let opts = VerifyOptions {
        samples: a.samples,
        seed: a.seed,
        tamper_basis: a.tamper_basis,
    };
    let checks = run_all(&opts, &mut |msg| eprintln!("{msg}"));
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(Failure::Verify(anyhow!("{failed} check(s) failed")));
    }
    Ok(())
}

fn cmd_distance(a: DistanceArgs) -> Outcome {
    let target = a
        .target
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("bad target {:?}", a.target))?;
    if a.dim > gvlab::corpus::MAX_CUBE_DIM {
        return Err(anyhow!("dimension {} is too large", a.dim).into());
    }
    if target.len() != a.dim + 1 {
        return Err(anyhow!("target needs {} entries, got {}", a.dim + 1, target.len()).into());
    }
    let found = find_by_distance_count(a.dim, a.k, &DistanceCount(target));
    for m in &found {
        println!("{m}");
    }
    eprintln!("{} match(es)", found.len());
    Ok(())
}
