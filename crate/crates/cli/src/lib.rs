//! `tpp` command-line front end. Every subcommand prints one JSON document,
//! except `search`, which streams JSON lines followed by a summary record.
//!
//! Exit codes: 0 on success (including negative answers), 2 on bad input,
//! 3 when a resource guard refuses the request.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tpp_core::algebra::{embed_left, embed_right, extract_with_diagnostics, multiply_via_group_unchecked};
use tpp_core::analysis::epsilon_image_sizes;
use tpp_core::bounds::{bounds_for, check_additive, check_multiplicative, search_space};
use tpp_core::group::DEFAULT_ORDER_CAP;
use tpp_core::search::SearchSummary;
use tpp_core::{
    build_group_with_cap, check_tpp_naive, check_tpp_quotient, classify, direct_matmul, enumerate_tpp_with,
    epsilon_injectivity, find_maximal, multiply_via_group, AlgebraError, Elem, Group, GroupError, Matrix,
    MaximalOutcome, PruneFlags, SearchConfig, SearchError, SearchMode, TppError, TppTriple, TripleFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

/// Environment variable overriding the group-order cap.
pub const ORDER_CAP_ENV: &str = "TPP_ORDER_CAP";

#[derive(Debug, Parser)]
#[command(name = "tpp", version, about = "Triple product property tools for finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide the triple product property with both checkers.
    Check(TripleArgs),
    /// Pairwise intersections, type number, case label and remainder size.
    Classify(TripleArgs),
    /// Injectivity and image sizes of the three embedding maps.
    Inject(TripleArgs),
    /// Size bounds for a group order, optionally checked against sizes.
    Bounds(BoundsArgs),
    /// Enumerate TPP triples or find a maximal one (JSON lines).
    Search(SearchArgs),
    /// Multiply two matrices through the group algebra.
    Matmul(MatmulArgs),
    /// Size of the subset-triple search space.
    Space(SpaceArgs),
    /// Element names, inverses and optionally the Cayley table.
    GroupInfo(GroupInfoArgs),
}

#[derive(Debug, Args)]
struct TripleArgs {
    #[arg(long)]
    group: Option<String>,
    /// Comma-separated element ids of S.
    #[arg(long = "s")]
    s: Option<String>,
    #[arg(long = "t")]
    t: Option<String>,
    #[arg(long = "u")]
    u: Option<String>,
    /// JSON triple file `{"group": .., "S": [..], "T": [..], "U": [..]}`.
    #[arg(long)]
    triple: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    n: Option<u64>,
    /// Take `n` from a group instead.
    #[arg(long)]
    group: Option<String>,
    /// Check `m,p,q` against the bounds.
    #[arg(long)]
    sizes: Option<String>,
    /// Treat the sizes as those of a maximal triple.
    #[arg(long)]
    maximal: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Enumerate,
    Maximal,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    group: String,
    #[arg(long, default_value_t = 1)]
    min_size: usize,
    #[arg(long, value_enum, default_value = "enumerate")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    max_results: Option<usize>,
    /// Search groups above the order limit.
    #[arg(long)]
    force: bool,
    /// Disable every pruning rule.
    #[arg(long)]
    no_prune: bool,
    #[arg(long)]
    no_prune_disjointness: bool,
    #[arg(long)]
    no_prune_injectivity: bool,
    #[arg(long)]
    no_prune_partial: bool,
    #[arg(long)]
    no_prune_mult: bool,
}

#[derive(Debug, Args)]
struct MatmulArgs {
    #[command(flatten)]
    triple: TripleArgs,
    /// JSON matrix file for the m×p factor.
    #[arg(long)]
    a: PathBuf,
    /// JSON matrix file for the p×q factor.
    #[arg(long)]
    b: PathBuf,
    /// Skip the TPP precondition.
    #[arg(long)]
    unchecked: bool,
    /// Also report product coefficients discarded on extraction.
    #[arg(long)]
    diagnostics: bool,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[arg(long)]
    n: u64,
}

#[derive(Debug, Args)]
struct GroupInfoArgs {
    #[arg(long)]
    group: String,
    /// Include the full Cayley table.
    #[arg(long)]
    table: bool,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Guard(String),
    Io(std::io::Error),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderCap { .. } => CliError::Guard(e.to_string()),
            other => CliError::input(other),
        }
    }
}

impl From<TppError> for CliError {
    fn from(e: TppError) -> Self {
        match e {
            TppError::Group(g) => g.into(),
            other => CliError::input(other),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::ResourceGuard { .. } => CliError::Guard(format!("{e} (--force)")),
            other => CliError::input(other),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::input(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = Result<(), CliError>;

/// Runs the CLI on `argv` (including the program name), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = order_cap().and_then(|cap| dispatch(cli.command, cap, out, err));
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(CliError::Guard(msg)) => {
            let _ = writeln!(err, "refused: {msg}");
            EXIT_GUARD
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn order_cap() -> Result<usize, CliError> {
    match std::env::var(ORDER_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{ORDER_CAP_ENV}=`{v}` is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_ORDER_CAP),
    }
}

fn dispatch(cmd: Command, cap: usize, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Check(a) => cmd_check(&a, cap, out),
        Command::Classify(a) => cmd_classify(&a, cap, out),
        Command::Inject(a) => cmd_inject(&a, cap, out),
        Command::Bounds(a) => cmd_bounds(&a, cap, out),
        Command::Search(a) => cmd_search(&a, cap, out, err),
        Command::Matmul(a) => cmd_matmul(&a, cap, out),
        Command::Space(a) => emit(
            out,
            &SpaceOut {
                n: a.n,
                triples: search_space(a.n).to_string(),
            },
        ),
        Command::GroupInfo(a) => cmd_group_info(&a, cap, out),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    let line = serde_json::to_string(value).map_err(CliError::input)?;
    writeln!(out, "{line}")?;
    Ok(())
}

fn parse_ids(flag: &str, raw: &str) -> Result<Vec<Elem>, CliError> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<Elem>()
                .map_err(|_| CliError::Input(format!("--{flag}: `{}` is not an element id", tok.trim())))
        })
        .collect()
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))
}

fn load_triple(a: &TripleArgs, cap: usize) -> Result<(Group, TppTriple), CliError> {
    let file = match &a.triple {
        Some(path) => {
            if a.s.is_some() || a.t.is_some() || a.u.is_some() {
                return Err(CliError::input("--triple cannot be combined with --s/--t/--u"));
            }
            let mut f = TripleFile::parse(&read_file(path)?)?;
            if let Some(g) = &a.group {
                f.group = g.clone();
            }
            f
        }
        None => {
            let need = |flag: &str, v: &Option<String>| {
                v.as_deref()
                    .ok_or_else(|| CliError::Input(format!("--{flag} is required without --triple")))
                    .and_then(|raw| parse_ids(flag, raw))
            };
            TripleFile {
                group: a
                    .group
                    .clone()
                    .ok_or_else(|| CliError::input("--group is required without --triple"))?,
                s: need("s", &a.s)?,
                t: need("t", &a.t)?,
                u: need("u", &a.u)?,
            }
        }
    };
    let g = build_group_with_cap(&file.group, cap)?;
    let triple = file.to_triple(&g)?;
    Ok((g, triple))
}

#[derive(Serialize)]
struct CheckOut {
    tpp: bool,
    naive: bool,
    quotient: bool,
}

fn cmd_check(a: &TripleArgs, cap: usize, out: &mut dyn Write) -> CliResult {
    let (g, t) = load_triple(a, cap)?;
    let naive = check_tpp_naive(&g, &t)?;
    let quotient = check_tpp_quotient(&g, &t)?;
    emit(
        out,
        &CheckOut {
            tpp: naive && quotient,
            naive,
            quotient,
        },
    )
}

fn cmd_classify(a: &TripleArgs, cap: usize, out: &mut dyn Write) -> CliResult {
    let (g, t) = load_triple(a, cap)?;
    emit(out, &classify(&g, &t)?)
}

#[derive(Serialize)]
struct MapTriple<T> {
    eps_mp: T,
    eps_pq: T,
    eps_mq: T,
}

#[derive(Serialize)]
struct InjectOut {
    injective: MapTriple<bool>,
    image_sizes: MapTriple<usize>,
    domain_sizes: MapTriple<usize>,
}

fn cmd_inject(a: &TripleArgs, cap: usize, out: &mut dyn Write) -> CliResult {
    let (g, t) = load_triple(a, cap)?;
    let (b1, b2, b3) = epsilon_injectivity(&g, &t)?;
    let (i1, i2, i3) = epsilon_image_sizes(&g, &t)?;
    let (m, p, q) = t.sizes();
    emit(
        out,
        &InjectOut {
            injective: MapTriple {
                eps_mp: b1,
                eps_pq: b2,
                eps_mq: b3,
            },
            image_sizes: MapTriple {
                eps_mp: i1,
                eps_pq: i2,
                eps_mq: i3,
            },
            domain_sizes: MapTriple {
                eps_mp: m * p,
                eps_pq: p * q,
                eps_mq: m * q,
            },
        },
    )
}

#[derive(Serialize)]
struct BoundsOut {
    #[serde(flatten)]
    report: tpp_core::BoundsReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicative: Option<tpp_core::bounds::MultiplicativeVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    additive: Option<tpp_core::bounds::AdditiveVerdict>,
}

fn cmd_bounds(a: &BoundsArgs, cap: usize, out: &mut dyn Write) -> CliResult {
    let n = match (a.n, &a.group) {
        (Some(n), None) => n,
        (None, Some(spec)) => build_group_with_cap(spec, cap)?.order() as u64,
        _ => return Err(CliError::input("give exactly one of --n and --group")),
    };
    if n == 0 {
        return Err(CliError::input("--n must be at least 1"));
    }
    let (multiplicative, additive) = match &a.sizes {
        Some(raw) => {
            let v: Vec<u64> = raw
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Input(format!("--sizes: `{raw}` is not m,p,q")))?;
            let [m, p, q] = v[..] else {
                return Err(CliError::Input(format!("--sizes: `{raw}` is not m,p,q")));
            };
            if m == 0 || p == 0 || q == 0 {
                return Err(CliError::input("--sizes must be positive"));
            }
            (
                Some(check_multiplicative(n, m, p, q, a.maximal)),
                Some(check_additive(n, m, p, q, a.maximal)),
            )
        }
        None => (None, None),
    };
    emit(
        out,
        &BoundsOut {
            report: bounds_for(n),
            multiplicative,
            additive,
        },
    )
}

#[derive(Serialize)]
struct SpaceOut {
    n: u64,
    triples: String,
}

#[derive(Serialize)]
struct SummaryOut<'a> {
    summary: SummaryBody<'a>,
}

#[derive(Serialize)]
struct SummaryBody<'a> {
    group: &'a str,
    mode: SearchMode,
    min_size: usize,
    total: usize,
    max_mpq: Option<u64>,
    by_case: &'a std::collections::BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    empty: Option<bool>,
    wall_ms: u128,
}

fn cmd_search(a: &SearchArgs, cap: usize, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let g = build_group_with_cap(&a.group, cap)?;
    let prune = if a.no_prune {
        PruneFlags::NONE
    } else {
        PruneFlags {
            disjointness: !a.no_prune_disjointness,
            injectivity: !a.no_prune_injectivity,
            partial_tpp: !a.no_prune_partial,
            mult_upper: !a.no_prune_mult,
        }
    };
    let mode = match a.mode {
        ModeArg::Enumerate => SearchMode::Enumerate,
        ModeArg::Maximal => SearchMode::Maximal,
    };
    let cfg = SearchConfig {
        min_size: a.min_size,
        max_results: a.max_results,
        mode,
        prune,
        workers: a.workers,
        force: a.force,
        ..SearchConfig::default()
    };
    if a.force && g.order() > cfg.order_limit {
        writeln!(err, "warning: exhaustive search over a group of order {} may not finish", g.order())?;
    }
    let spec = g.spec().to_string();
    let started = Instant::now();
    let mut write_failure = None;
    let (summary, empty) = match mode {
        SearchMode::Enumerate => {
            let summary = enumerate_tpp_with(&g, &cfg, |r| {
                if write_failure.is_none() {
                    if let Err(e) = emit(out, &r.to_record(&spec)) {
                        write_failure = Some(e);
                    }
                }
            })?;
            (summary, None)
        }
        SearchMode::Maximal => {
            let outcome = find_maximal(&g, &cfg)?;
            let mut summary = SearchSummary::default();
            if let MaximalOutcome::Found(r) = &outcome {
                emit(out, &r.to_record(&spec))?;
                summary.total = 1;
                summary.max_mpq = Some(r.mpq);
                summary.by_case.insert(r.report.case_label.to_string(), 1);
            }
            (summary, Some(outcome == MaximalOutcome::Empty))
        }
    };
    if let Some(e) = write_failure {
        return Err(e);
    }
    emit(
        out,
        &SummaryOut {
            summary: SummaryBody {
                group: &spec,
                mode,
                min_size: cfg.min_size,
                total: summary.total,
                max_mpq: summary.max_mpq,
                by_case: &summary.by_case,
                empty,
                wall_ms: started.elapsed().as_millis(),
            },
        },
    )
}

#[derive(Serialize)]
struct MatmulOut {
    product: Matrix,
    direct: Matrix,
    equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    discarded: Option<Vec<(Elem, String)>>,
}

fn cmd_matmul(a: &MatmulArgs, cap: usize, out: &mut dyn Write) -> CliResult {
    let (g, t) = load_triple(&a.triple, cap)?;
    let ma = Matrix::parse_json(&read_file(&a.a)?)?;
    let mb = Matrix::parse_json(&read_file(&a.b)?)?;
    let direct = direct_matmul(&ma, &mb)?;
    let product = if a.unchecked {
        multiply_via_group_unchecked(&g, &t, &ma, &mb)?
    } else {
        multiply_via_group(&g, &t, &ma, &mb)?
    };
    let discarded = if a.diagnostics {
        let x = embed_left(&g, &ma, &t.s, &t.t)?;
        let y = embed_right(&g, &mb, &t.t, &t.u)?;
        let (_, dropped) = extract_with_diagnostics(&x.convolve(&y)?, &t.s, &t.u)?;
        Some(dropped.into_iter().map(|(e, c)| (e, c.to_string())).collect())
    } else {
        None
    };
    emit(
        out,
        &MatmulOut {
            equal: product == direct,
            product,
            direct,
            discarded,
        },
    )
}

#[derive(Serialize)]
struct ElementOut<'a> {
    id: Elem,
    name: &'a str,
    inverse: Elem,
}

#[derive(Serialize)]
struct GroupInfoOut<'a> {
    spec: &'a str,
    order: usize,
    abelian: bool,
    identity: Elem,
    elements: Vec<ElementOut<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<Elem>>>,
}

fn cmd_group_info(a: &GroupInfoArgs, cap: usize, out: &mut dyn Write) -> CliResult {
    let g = build_group_with_cap(&a.group, cap)?;
    let elements = g
        .elements()
        .map(|e| ElementOut {
            id: e,
            name: g.name(e),
            inverse: g.inv(e),
        })
        .collect();
    emit(
        out,
        &GroupInfoOut {
            spec: g.spec(),
            order: g.order(),
            abelian: g.is_abelian(),
            identity: g.identity(),
            elements,
            table: a.table.then(|| g.rows()),
        },
    )
}
