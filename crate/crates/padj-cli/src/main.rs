//! `padj` — adjacency-class tables, exact block-move sorting distances, and
//! sorting-cost estimation from the command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification mismatch,
//! 3 resource refusal (a request past the oracle/search budgets).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use padj_core::blockmoves::{
    bfs_distances_with, reduction_invariance_check, solve_iterative_deepening, solve_via_table,
    BlockMoveKind, DistanceTable, MAX_SEARCH_LIMIT, MAX_SOLVER_SIZE,
};
use padj_core::counting::{build_count_table, factorial_big, tanny_count, whitworth_zero_count};
use padj_core::estimator::{build_replicas, EstimateModel, PsiMode};
use padj_core::permutation::{enumerate_class_with_limit, AdjacencyType, Permutation};
use padj_core::render::{
    render_count_table, render_distance_stats, render_estimate, render_replica, OutputFormat,
};
use padj_core::{cache, format_rational_2dp, Error};

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "padj",
    version,
    about = "Adjacency classes in permutations and block-move sorting statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format: csv, json or markdown
    #[arg(long, global = true, default_value = "csv")]
    format: String,

    /// Distance-table cache directory (beats PADJ_CACHE_DIR; default .padj-cache)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Worker threads for breadth-first search
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the class-count table f(n,k) for one adjacency type
    Tables(TablesArgs),
    /// Run the exhaustive invariant suite at one size
    Verify(VerifyArgs),
    /// Per-class distance statistics from exact search
    Distances(DistancesArgs),
    /// Optimally sort one permutation, printing the move sequence
    Sort(SortArgs),
    /// Exact base averages plus model predictions
    Estimate(EstimateArgs),
}

#[derive(Args)]
struct TablesArgs {
    /// Adjacency type: 1, 2, 3 or 4
    #[arg(long = "type")]
    adjacency: String,
    #[arg(long, default_value_t = 14)]
    n_max: usize,
    /// Cross-check the table: tanny, whitworth or oracle
    #[arg(long)]
    check: Option<String>,
    /// Budget for the brute-force oracle check
    #[arg(long, default_value_t = 9)]
    oracle_limit: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: usize,
    /// Move kind for the distance-based properties: t, pt or st
    #[arg(long = "move", default_value = "pt")]
    kind: String,
    #[arg(long, default_value_t = 9)]
    oracle_limit: usize,
}

#[derive(Args)]
struct DistancesArgs {
    /// Move kind: t, pt or st
    #[arg(long = "move")]
    kind: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 9)]
    search_limit: usize,
}

#[derive(Args)]
struct SortArgs {
    /// Move kind: t, pt or st
    #[arg(long = "move")]
    kind: String,
    /// Permutation literal, e.g. "4,2,1,3,0"
    #[arg(long)]
    perm: String,
    #[arg(long, default_value_t = 9)]
    search_limit: usize,
}

#[derive(Args)]
struct EstimateArgs {
    /// Move kind: pt or st (the model covers prefix and suffix families)
    #[arg(long = "move")]
    kind: String,
    /// Largest size solved exactly before the model takes over
    #[arg(long, default_value_t = 8)]
    limit: usize,
    #[arg(long, default_value_t = 16)]
    n_max: usize,
    /// Per-move adjacency yield: limiting (3/2) or sized (1 + sigma(n))
    #[arg(long, default_value = "limiting")]
    psi: String,
    /// Emit the computed-vs-predicted replica (3 = base averages,
    /// 4 = expected values) with prediction columns for limits 6, 7, 8
    #[arg(long)]
    replica: Option<u8>,
    #[arg(long, default_value_t = 9)]
    search_limit: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}"); // --help / --version
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit(_) => EXIT_RESOURCE,
                Error::Inconsistency(_) => EXIT_MISMATCH,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: Cli) -> padj_core::Result<u8> {
    let format: OutputFormat = cli.format.parse()?;
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| std::env::var_os("PADJ_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".padj-cache"));
    let workers = cli.workers.max(1);
    match cli.command {
        Command::Tables(args) => cmd_tables(args, format),
        Command::Verify(args) => cmd_verify(args, &cache_dir, workers),
        Command::Distances(args) => cmd_distances(args, format, &cache_dir, workers),
        Command::Sort(args) => cmd_sort(args, format, &cache_dir, workers),
        Command::Estimate(args) => cmd_estimate(args, format, &cache_dir, workers),
    }
}

/// Fetch a distance table through the on-disk cache, rebuilding (with a
/// warning) when the cached file is corrupt.
fn cached_table(
    dir: &std::path::Path,
    n: usize,
    kind: BlockMoveKind,
    limit: usize,
    workers: usize,
) -> padj_core::Result<DistanceTable> {
    match cache::load_from_dir(dir, n, kind) {
        Ok(Some(table)) => return Ok(table),
        Ok(None) => {}
        Err(e) => eprintln!("warning: rebuilding corrupt cache entry: {e}"),
    }
    let table = bfs_distances_with(n, kind, limit, workers)?;
    if let Err(e) = cache::store_in_dir(dir, &table) {
        eprintln!("warning: could not write cache entry: {e}");
    }
    Ok(table)
}

fn cmd_tables(args: TablesArgs, format: OutputFormat) -> padj_core::Result<u8> {
    let t: AdjacencyType = args.adjacency.parse()?;
    let table = build_count_table(args.n_max, t)?;
    print!("{}", render_count_table(&table, format));
    let Some(check) = args.check else {
        return Ok(0);
    };
    match check.trim().to_ascii_lowercase().as_str() {
        "tanny" => {
            if t != AdjacencyType::Type1 {
                return Err(Error::Parse(
                    "--check tanny applies to --type 1 only".into(),
                ));
            }
            for n in 1..=args.n_max {
                for k in 0..n {
                    let expected = tanny_count(n, k)?;
                    if table.get(n, k) != expected {
                        eprintln!(
                            "check tanny: mismatch at (n={n}, k={k}): table {} vs closed form {expected}",
                            table.get(n, k)
                        );
                        return Ok(EXIT_MISMATCH);
                    }
                }
            }
            eprintln!("check tanny: ok (n <= {})", args.n_max);
        }
        "whitworth" => {
            if !matches!(t, AdjacencyType::Type2 | AdjacencyType::Type3) {
                return Err(Error::Parse(
                    "--check whitworth applies to --type 2 or --type 3".into(),
                ));
            }
            for n in 1..=args.n_max {
                let expected = whitworth_zero_count(n)?;
                if table.get(n, 0) != expected {
                    eprintln!(
                        "check whitworth: mismatch at (n={n}, k=0): table {} vs closed form {expected}",
                        table.get(n, 0)
                    );
                    return Ok(EXIT_MISMATCH);
                }
            }
            eprintln!("check whitworth: ok (n <= {})", args.n_max);
        }
        "oracle" => {
            let to = args.n_max.min(args.oracle_limit);
            for n in 1..=to {
                for k in 0..=t.max_adjacencies(n) {
                    let class = enumerate_class_with_limit(n, k, t, args.oracle_limit)?;
                    if table.get(n, k) != (class.len() as u64).into() {
                        eprintln!(
                            "check oracle: mismatch at (n={n}, k={k}): table {} vs enumeration {}",
                            table.get(n, k),
                            class.len()
                        );
                        return Ok(EXIT_MISMATCH);
                    }
                }
            }
            if to < args.n_max {
                eprintln!("check oracle: ok (covered n <= {to}; larger rows exceed the oracle budget)");
            } else {
                eprintln!("check oracle: ok (n <= {to})");
            }
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown check {other:?} (expected tanny|whitworth|oracle)"
            )))
        }
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs, cache_dir: &std::path::Path, workers: usize) -> padj_core::Result<u8> {
    let n = args.n;
    if n > args.oracle_limit {
        return Err(Error::ResourceLimit(format!(
            "verify at n={n} exceeds the oracle limit {}; raise --oracle-limit deliberately if you mean it",
            args.oracle_limit
        )));
    }
    let kind: BlockMoveKind = args.kind.parse()?;
    let mut failures = 0u32;
    let mut report = |name: &str, ok: bool, detail: String| {
        if ok {
            println!("{name}: pass");
        } else {
            failures += 1;
            println!("{name}: FAIL {detail}");
        }
    };

    // recurrence counts against the brute-force oracle, plus row sums
    for t in AdjacencyType::ALL {
        let table = build_count_table(n.max(2), t)?;
        let mut first_bad = None;
        let mut total = num_bigint::BigInt::from(0);
        for k in 0..=t.max_adjacencies(n) {
            let class = enumerate_class_with_limit(n, k, t, args.oracle_limit)?;
            total += class.len() as u64;
            if first_bad.is_none() && table.get(n, k) != (class.len() as u64).into() {
                first_bad = Some(format!(
                    "(n={n}, k={k}): recurrence {} vs enumeration {}",
                    table.get(n, k),
                    class.len()
                ));
            }
        }
        report(
            &format!("oracle equality ({t})"),
            first_bad.is_none(),
            first_bad.unwrap_or_default(),
        );
        report(
            &format!("row sum ({t})"),
            total == factorial_big(n),
            format!("classes sum to {total}, expected {n}!"),
        );
    }

    // reduction idempotence over all of P_n, every convention
    let mut idempotent = true;
    for t in AdjacencyType::ALL {
        for k in 0..=t.max_adjacencies(n) {
            for p in enumerate_class_with_limit(n, k, t, args.oracle_limit)? {
                let r = p.reduce(t);
                if r.reduce(t) != r || r.count_adjacencies(t) != 0 {
                    idempotent = false;
                }
            }
        }
    }
    report("reduction idempotence", idempotent, String::new());

    // distance-based properties for the chosen move kind
    let mut tables = Vec::with_capacity(n + 1);
    for m in 0..=n {
        tables.push(cached_table(cache_dir, m, kind, MAX_SEARCH_LIMIT, workers)?);
    }
    let inv = reduction_invariance_check(&tables, n)?;
    report(
        &format!("reduction-distance invariance ({kind})"),
        inv.ok(),
        inv.violations
            .first()
            .map(|v| {
                format!(
                    "dist({})={} but dist(reduce)={}",
                    v.perm, v.dist, v.reduced_dist
                )
            })
            .unwrap_or_default(),
    );

    let counts = build_count_table(n.max(2), kind.paired_adjacency())?;
    let lhs = tables[n].expected_moves_exact();
    let mut rhs = num_rational::BigRational::from_integer(0.into());
    for k in 0..=kind.paired_adjacency().max_adjacencies(n) {
        let f = counts.get(n, k);
        if f == 0.into() || n < k + 2 {
            continue; // reduced sizes 0 and 1 sort in zero moves
        }
        rhs += num_rational::BigRational::new(f, factorial_big(n))
            * tables[n - k].average_moves_zero()?;
    }
    report(
        &format!("decomposition equality ({kind})"),
        lhs == rhs,
        format!("E(X_{n}) = {lhs} but the class-weighted sum is {rhs}"),
    );

    if failures == 0 {
        println!("all properties hold at n={n}");
        Ok(0)
    } else {
        Ok(EXIT_MISMATCH)
    }
}

fn cmd_distances(
    args: DistancesArgs,
    format: OutputFormat,
    cache_dir: &std::path::Path,
    workers: usize,
) -> padj_core::Result<u8> {
    let kind: BlockMoveKind = args.kind.parse()?;
    if args.n > args.search_limit.min(MAX_SEARCH_LIMIT) {
        return Err(Error::ResourceLimit(format!(
            "distances at n={} exceeds the search limit {}",
            args.n,
            args.search_limit.min(MAX_SEARCH_LIMIT)
        )));
    }
    let table = cached_table(cache_dir, args.n, kind, args.search_limit, workers)?;
    print!("{}", render_distance_stats(&table, format));
    Ok(0)
}

fn cmd_sort(
    args: SortArgs,
    format: OutputFormat,
    cache_dir: &std::path::Path,
    workers: usize,
) -> padj_core::Result<u8> {
    let kind: BlockMoveKind = args.kind.parse()?;
    let p = Permutation::parse(&args.perm)?;
    let n = p.len();
    let seq = if n <= args.search_limit.min(MAX_SEARCH_LIMIT) {
        let table = cached_table(cache_dir, n, kind, args.search_limit, workers)?;
        solve_via_table(&p, &table)?
    } else if n <= MAX_SOLVER_SIZE {
        solve_iterative_deepening(&p, kind)?
    } else {
        return Err(Error::ResourceLimit(format!(
            "sort accepts sizes up to {MAX_SOLVER_SIZE}, got {n}"
        )));
    };
    if format == OutputFormat::Json {
        let moves: Vec<serde_json::Value> = seq
            .iter()
            .map(|m| {
                let (i, j, k) = m.cuts();
                serde_json::json!([i, j, k])
            })
            .collect();
        let doc = serde_json::json!({
            "permutation": p.to_string(),
            "move": kind.to_string(),
            "length": seq.len(),
            "moves": moves,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        return Ok(0);
    }
    println!("permutation: {p}");
    println!("optimal moves: {}", seq.len());
    let mut cur = p;
    for m in &seq {
        cur = padj_core::apply_move(&cur, m)?;
        println!("  {m} -> {cur}");
    }
    Ok(0)
}

fn cmd_estimate(
    args: EstimateArgs,
    format: OutputFormat,
    cache_dir: &std::path::Path,
    workers: usize,
) -> padj_core::Result<u8> {
    let kind: BlockMoveKind = args.kind.parse()?;
    let psi_mode: PsiMode = args.psi.parse()?;
    let search_limit = args.search_limit.min(MAX_SEARCH_LIMIT);
    if let Some(which) = args.replica {
        if which != 3 && which != 4 {
            return Err(Error::Parse(format!(
                "--replica takes 3 (base averages) or 4 (expected values), got {which}"
            )));
        }
        let limits: Vec<usize> = [6, 7, 8]
            .into_iter()
            .filter(|&l| l <= search_limit)
            .collect();
        if limits.is_empty() {
            return Err(Error::ResourceLimit(format!(
                "--search-limit {search_limit} leaves no replica initialization reachable"
            )));
        }
        let (base, expected) = build_replicas(
            kind,
            &limits,
            args.n_max,
            search_limit,
            psi_mode,
            |m| cached_table(cache_dir, m, kind, search_limit, workers),
        )?;
        let replica = if which == 3 { base } else { expected };
        print!("{}", render_replica(&replica, format));
        return Ok(0);
    }
    if args.limit > search_limit {
        return Err(Error::ResourceLimit(format!(
            "--limit {} exceeds the search limit {}",
            args.limit, search_limit
        )));
    }
    let model = EstimateModel::build(kind, args.limit, args.n_max, psi_mode, |m| {
        cached_table(cache_dir, m, kind, search_limit, workers)
    })?;
    // keep a footnote off stdout so the table stays machine-readable
    eprintln!(
        "estimate: exact base to n={}, psi {} ({})",
        model.limit,
        model.psi_mode,
        format_rational_2dp(&padj_core::estimator::psi(model.n_max.max(3), model.psi_mode)?)
    );
    print!("{}", render_estimate(&model, format));
    Ok(0)
}
