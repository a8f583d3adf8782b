use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ipstar::semigroup::{report, DEFAULT_ORDER_CAP};
use ipstar::{
    finite_products, finite_sums, hindman_finite, hindman_threshold, parse_spec, run_search,
    verify_document, Coloring, DocKind, Document, Execution, SearchBudget, SearchOutcome, Sequence,
};
use num_bigint::BigUint;

mod source;

/// Environment variable that raises the semigroup order cap.
const CAP_ENV: &str = "IPSTAR_SEMIGROUP_CAP";

#[derive(Debug, Parser)]
#[command(
    name = "ipstar",
    version,
    about = "Sum subsystems with FS and FP inside a set, IP* refutations, finite semigroups"
)]
struct Cli {
    /// Print extra detail (node counts, full sets).
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Finite sums of a sequence.
    Fs(SeqArgs),
    /// Finite products of a sequence.
    Fp(SeqArgs),
    /// Search for blocks H_1 < H_2 < ... whose sums y_n have FS and FP inside the spec.
    Search(SearchArgs),
    /// Re-check a certificate document from scratch.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Look for x_1 < ... < x_k <= bound whose finite sums all avoid the spec
    /// (a finite refutation of IP*). Absence is not a proof of IP*.
    Refute(RefuteArgs),
    /// Monochromatic x_1 < ... < x_k with every finite sum inside 1..=N and of one colour.
    /// Sums leaving 1..=N are not allowed, since the colouring is undefined there.
    Hindman(HindmanArgs),
    /// Idempotents, minimal ideals, K(S), idempotent order and groups of a Cayley table.
    Semigroup(SemigroupArgs),
    /// Dilation preimage n^{-1}A = {v : n v in A} (and optionally shift preimage).
    Dilate(DilateArgs),
}

#[derive(Debug, Args)]
struct SeqArgs {
    /// nat:N, pow:B:N, fib:N or file:PATH.
    #[arg(long)]
    seq: String,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// nat:N, pow:B:N, fib:N or file:PATH.
    #[arg(long)]
    seq: String,
    /// Target set in the spec language, e.g. "mod(6,0)".
    #[arg(long)]
    spec: String,
    /// Number of blocks.
    #[arg(long)]
    depth: usize,
    /// Largest usable sequence index; defaults to the sequence length.
    #[arg(long)]
    window: Option<usize>,
    #[arg(long, default_value_t = 8)]
    max_block: usize,
    #[arg(long, default_value_t = 10_000_000)]
    node_limit: u64,
    /// Explore first-stage subtrees in parallel; results are unchanged.
    #[arg(long)]
    parallel: bool,
    /// Write the certificate document here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RefuteArgs {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    depth: usize,
    /// Largest allowed term.
    #[arg(long)]
    bound: u64,
    /// Find a witness with FS inside the spec instead of avoiding it.
    #[arg(long)]
    inside: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HindmanArgs {
    /// File with one "value colour" pair per line covering 1..=N.
    #[arg(long, conflicts_with_all = ["parity", "constant", "threshold"])]
    coloring: Option<PathBuf>,
    /// Colour 1..=N by parity.
    #[arg(long)]
    parity: Option<usize>,
    /// Colour 1..=N with a single colour.
    #[arg(long)]
    constant: Option<usize>,
    /// Report the least N such that every colouring of 1..=N has a witness.
    #[arg(long)]
    threshold: bool,
    #[arg(long, default_value_t = 2)]
    colors: u32,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    #[arg(long)]
    depth: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportLevel {
    Summary,
    Full,
}

#[derive(Debug, Args)]
struct SemigroupArgs {
    /// Order n on the first line, then n rows of n entries in 0..n.
    #[arg(long)]
    table: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportLevel::Summary)]
    report: ReportLevel,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DilateArgs {
    #[arg(long)]
    spec: String,
    #[arg(long)]
    by: BigUint,
    /// Also take the shift preimage by this offset afterwards.
    #[arg(long)]
    shift: Option<BigUint>,
    /// List members up to this value.
    #[arg(long, default_value_t = 60)]
    upto: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Negative = 1,
    Error = 2,
    NodeLimit = 3,
}

fn join<'a>(vals: impl IntoIterator<Item = &'a BigUint>) -> String {
    vals.into_iter()
        .map(BigUint::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn write_doc(path: &Option<PathBuf>, doc: &Document) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, doc.to_json()).with_context(|| format!("writing {}", path.display()))?;
        println!("certificate written to {}", path.display());
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn semigroup_cap() -> Result<usize> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{CAP_ENV} must be a positive integer")),
        Err(_) => Ok(DEFAULT_ORDER_CAP),
    }
}

fn run(cli: Cli) -> Result<Status> {
    let verbose = cli.verbose;
    match cli.command {
        Command::Fs(a) => sums_or_products(a, true),
        Command::Fp(a) => sums_or_products(a, false),
        Command::Search(a) => search(a, verbose),
        Command::Verify { cert } => {
            let doc = Document::from_json(&read(&cert)?)?;
            let failures = verify_document(&doc)?;
            if failures.is_empty() {
                println!("verified: {} certificate holds", kind_name(doc.kind));
                Ok(Status::Ok)
            } else {
                for f in &failures {
                    println!("FAIL: {f}");
                }
                Ok(Status::Negative)
            }
        }
        Command::Refute(a) => refute(a),
        Command::Hindman(a) => hindman(a),
        Command::Semigroup(a) => semigroup(a),
        Command::Dilate(a) => {
            let spec = parse_spec(&a.spec)?;
            let mut out = spec.dilation_preimage(&a.by)?;
            if let Some(t) = &a.shift {
                out = out.shift_preimage(t)?;
            }
            println!("{out}");
            let members = out.members_up_to(a.upto)?;
            let list: Vec<String> = members.iter().map(u64::to_string).collect();
            println!("members up to {}: {}", a.upto, list.join(" "));
            Ok(Status::Ok)
        }
    }
}

fn kind_name(kind: DocKind) -> &'static str {
    match kind {
        DocKind::Subsystem => "subsystem",
        DocKind::FsWitness => "fs-witness",
        DocKind::IpStarRefutation => "ip*-refutation",
        DocKind::Hindman => "hindman",
        DocKind::Semigroup => "semigroup",
    }
}

fn sums_or_products(a: SeqArgs, sums: bool) -> Result<Status> {
    let x = source::parse(&a.seq)?;
    let set = if sums {
        finite_sums(x.terms())?
    } else {
        finite_products(x.terms())?
    };
    println!("{}", join(&set));
    Ok(Status::Ok)
}

fn search(a: SearchArgs, verbose: bool) -> Result<Status> {
    let x: Sequence = source::parse(&a.seq)?;
    let spec = parse_spec(&a.spec)?;
    let budget = SearchBudget::new(
        a.depth,
        a.window.unwrap_or(x.len()),
        a.max_block,
        a.node_limit,
    );
    let execution = if a.parallel {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    let run = run_search(&x, &spec, budget, execution)?;
    let doc = Document::from_search(&run, &spec.to_string(), budget);
    println!("outcome: {}", run.outcome.kind());
    let status = match &run.outcome {
        SearchOutcome::Found(c) => {
            let blocks: Vec<String> = c
                .blocks
                .to_indices()
                .iter()
                .map(|b| {
                    format!(
                        "{{{}}}",
                        b.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                    )
                })
                .collect();
            println!("blocks: {}", blocks.join(" "));
            println!("ys: {}", join(&c.ys));
            let union: std::collections::BTreeSet<&BigUint> = c.fs.iter().chain(&c.fp).collect();
            if verbose || union.len() <= 64 {
                println!("fs+fp: {}", join(union));
            } else {
                println!("fs+fp: {} values (use -v to list)", union.len());
            }
            println!("verified: {}", c.verified);
            Status::Ok
        }
        SearchOutcome::ExhaustedWithinBudget => {
            println!(
                "no block system within depth {}, window {}, block size {}",
                budget.depth, budget.window, budget.max_block_size
            );
            Status::Negative
        }
        SearchOutcome::NodeLimitReached => {
            println!(
                "node limit {} reached; nothing is claimed",
                budget.node_limit
            );
            Status::NodeLimit
        }
    };
    if verbose {
        println!("nodes: {}", run.nodes);
    }
    write_doc(&a.json, &doc)?;
    Ok(status)
}

fn refute(a: RefuteArgs) -> Result<Status> {
    let spec = parse_spec(&a.spec)?;
    let (kind, found) = if a.inside {
        (
            DocKind::FsWitness,
            ipstar::find_fs_witness(&spec, a.depth, a.bound)?,
        )
    } else {
        (
            DocKind::IpStarRefutation,
            ipstar::ip_star_refute(&spec, a.depth, a.bound)?,
        )
    };
    let doc = Document::from_witness(kind, &spec.to_string(), a.depth, a.bound, found.as_ref());
    let status = match &found {
        Some(w) => {
            println!("witness: {}", join(w.terms()));
            println!("fs: {}", join(w.fs()));
            Status::Ok
        }
        None if a.inside => {
            println!(
                "no depth-{} FS set inside the spec with terms <= {}",
                a.depth, a.bound
            );
            Status::Negative
        }
        None => {
            println!(
                "no refutation within (depth {}, bound {})",
                a.depth, a.bound
            );
            Status::Negative
        }
    };
    write_doc(&a.json, &doc)?;
    Ok(status)
}

fn hindman(a: HindmanArgs) -> Result<Status> {
    if a.threshold {
        return match hindman_threshold(a.colors, a.depth, a.max_n)? {
            Some(n) => {
                println!("threshold: {n}");
                Ok(Status::Ok)
            }
            None => {
                println!("no threshold up to N = {}", a.max_n);
                Ok(Status::Negative)
            }
        };
    }
    let c = match (&a.coloring, a.parity, a.constant) {
        (Some(path), None, None) => Coloring::parse(&read(path)?)?,
        (None, Some(n), None) => Coloring::parity(n)?,
        (None, None, Some(n)) => Coloring::constant(n)?,
        _ => bail!("give exactly one of --coloring, --parity, --constant (or --threshold)"),
    };
    let found = hindman_finite(&c, a.depth)?;
    let doc = Document::from_hindman(&c, a.depth, found.as_ref());
    let status = match &found {
        Some((color, w)) => {
            println!("colour: {color}");
            println!("witness: {}", join(w.terms()));
            println!("fs: {}", join(w.fs()));
            Status::Ok
        }
        None => {
            println!(
                "no monochromatic depth-{} witness inside 1..={}",
                a.depth,
                c.bound()
            );
            Status::Negative
        }
    };
    write_doc(&a.json, &doc)?;
    Ok(status)
}

fn fmt_set(s: &std::collections::BTreeSet<usize>) -> String {
    format!(
        "{{{}}}",
        s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    )
}

fn semigroup(a: SemigroupArgs) -> Result<Status> {
    let s = ipstar::parse_table(&read(&a.table)?)?;
    let r = report(&s, semigroup_cap()?)?;
    println!("order: {}", r.order);
    println!("idempotents: {}", fmt_set(&r.idempotents));
    println!("K(S): {}", fmt_set(&r.ideals.kernel));
    println!(
        "minimal idempotents: {}",
        fmt_set(&r.order_relation.minimal)
    );
    let groups_ok = r.groups.iter().all(|g| g.is_group);
    println!("every L∩R a group: {groups_ok}");
    if r.product_formula_checked > 0 {
        println!(
            "product formula: {} of {} (p, q, A) triples agree",
            r.product_formula_checked - r.product_formula_failures,
            r.product_formula_checked
        );
    }
    if let ReportLevel::Full = a.report {
        let lefts: Vec<String> = r.ideals.minimal_left.iter().map(fmt_set).collect();
        let rights: Vec<String> = r.ideals.minimal_right.iter().map(fmt_set).collect();
        println!("minimal left ideals: {}", lefts.join(" "));
        println!("minimal right ideals: {}", rights.join(" "));
        let leq: Vec<String> = r
            .order_relation
            .leq
            .iter()
            .filter(|(p, q)| p != q)
            .map(|(p, q)| format!("{p}<={q}"))
            .collect();
        println!(
            "strict order: {}",
            if leq.is_empty() {
                "(none)".to_owned()
            } else {
                leq.join(" ")
            }
        );
        for g in &r.groups {
            println!(
                "L={} R={} L∩R={} group={}",
                fmt_set(&g.left),
                fmt_set(&g.right),
                fmt_set(&g.intersection),
                g.is_group
            );
        }
    }
    let ok = groups_ok && r.product_formula_failures == 0;
    let doc = Document::from_report(serde_json::to_value(&r)?);
    write_doc(&a.json, &doc)?;
    Ok(if ok { Status::Ok } else { Status::Negative })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(Status::Error as u8);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Error as u8)
        }
    }
}
