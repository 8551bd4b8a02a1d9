//! Command-line driver for the barriers engine.
//!
//! Subcommands mirror the library modules. Every run prints a deterministic
//! report (text or JSON) and exits with 0 on pass/success, 1 on a failed
//! check or an unfound witness, 2 on usage errors, and 3 when a search ran
//! out of fuel or window.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::fs;
use std::str::FromStr;

use barriers::barrier::{end_replace, first_segment, BarrierCode, BarrierError};
use barriers::embed::{
    compare_embedding, compose_witnesses, double_arrow_witness, double_arrow_witness_rank_omega,
    verify_double_arrow, verify_phase_log, DoubleArrowWitness, EmbedComparison, EmbedError,
};
use barriers::ideals::{
    ad_stage, canonical_enumeration, e_up_contains, fn_from_tree, gc_positive, hechler_avoiding,
    hechler_dominating, katetov_shrink_bruteforce, katetov_shrink_recursive, random_map,
    selective_branch_set, tree_from_fn, verify_no_c_seq, verify_shrink, AdStageCertificate,
    FinDescriptor, FnTable, GcOutcome, HechlerTree, IdealsError, MapTable, NoCseqVerdict,
    ShrinkCertificate,
};
use barriers::ordinal::Ordinal;
use barriers::ramsey::{
    almost_monochromatic_search, diagonal_monochromatic, lift_coloring, minimal_part_partition,
    nash_williams_search, nash_williams_search_recursive, verify_witness, ColorRule, Coloring,
    RamseyError,
};
use barriers::sets::{thin, FiniteSet, Parity, SetDescriptor, Window};
use barriers::verify::{
    floor_rank_estimate, is_uniform_window, uniformize_rank_omega, verify_cover, verify_sperner,
    Verdict,
};

const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser)]
#[command(
    name = "barriers",
    version,
    about = "Window-bounded Nash-Williams barrier engine"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write the report to a file as well as stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, Copy)]
struct WindowArgs {
    /// Window bound: elements inspected are below this.
    #[arg(long, default_value_t = 12)]
    bound: u64,
    /// Window depth: length cap for inspected sets.
    #[arg(long, default_value_t = 4)]
    depth: u64,
}

impl WindowArgs {
    fn window(&self) -> Result<Window> {
        Window::new(self.bound, self.depth).map_err(|e| anyhow!(e.to_string()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ordinal arithmetic in Cantor normal form.
    Ordinal {
        #[command(subcommand)]
        op: OrdinalOp,
    },
    /// Finitely presented sets and windows.
    Sets {
        #[command(subcommand)]
        op: SetsOp,
    },
    /// Barrier codes: membership, ranks, algebra, verification.
    Barrier {
        #[command(subcommand)]
        op: BarrierOp,
    },
    /// Colorings and partition searches.
    Ramsey {
        #[command(subcommand)]
        op: RamseyOp,
    },
    /// Barrier comparison and double-arrow witnesses.
    Embed {
        #[command(subcommand)]
        op: EmbedOp,
    },
    /// Hechler trees, ideals, shrinking, and construction stages.
    Ideals {
        #[command(subcommand)]
        op: IdealsOp,
    },
}

#[derive(Subcommand)]
enum OrdinalOp {
    /// Compare two ordinals.
    Compare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Successor of an ordinal.
    Succ {
        #[arg(long)]
        a: String,
    },
    /// Supremum of the affine sequence a*n + b + 1.
    SupAffine {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
}

#[derive(Subcommand)]
enum SetsOp {
    /// First elements of a set descriptor.
    Enumerate {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Membership of a point in a set descriptor.
    Contains {
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: u64,
    },
    /// Greedy interval thinning of a set.
    Thin {
        #[arg(long)]
        set: String,
        /// Comma-separated increasing breakpoints.
        #[arg(long)]
        breakpoints: String,
        #[arg(long, value_parser = ["even", "odd"])]
        parity: String,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Subcommand)]
enum BarrierOp {
    /// Symbolic rank of a code.
    Rank {
        #[arg(long)]
        code: String,
    },
    /// Rank of a tree node.
    NodeRank {
        #[arg(long)]
        code: String,
        #[arg(long)]
        set: String,
    },
    /// Element membership.
    Contains {
        #[arg(long)]
        code: String,
        #[arg(long)]
        set: String,
    },
    /// Tree membership.
    TreeContains {
        #[arg(long)]
        code: String,
        #[arg(long)]
        set: String,
    },
    /// The sub-barrier code at a node.
    Sub {
        #[arg(long)]
        code: String,
        #[arg(long)]
        set: String,
    },
    /// End replacement a ∗ b.
    EndReplace {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// First initial segment of a set lying in the barrier.
    FirstSegment {
        #[arg(long)]
        code: String,
        #[arg(long)]
        base: String,
        /// Scan cap; defaults to 10 times the bound.
        #[arg(long)]
        fuel: Option<u64>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Exhaustive Sperner check on the window.
    VerifySperner {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Exhaustive cover check on the window.
    VerifyCover {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Uniformity report at window scale.
    VerifyUniform {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Extract a uniformizing set from a rank-omega code.
    Uniformize {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Heuristic estimate of the least uniform-restriction rank.
    FloorRank {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Subcommand)]
enum RamseyOp {
    /// Monochromatic-set search (lex-min seed, greedy extension).
    Search {
        #[arg(long)]
        code: String,
        /// Coloring rule, e.g. parity-of-sum, min-mod(2), hash(7), constant(0).
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 2)]
        colors: u64,
        #[arg(long, default_value_t = 3)]
        target: u64,
        /// Use the pruned recursive strategy instead of brute force.
        #[arg(long)]
        recursive: bool,
        /// Lift the rule through the two least elements.
        #[arg(long)]
        lift: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// The minimal-elements partition of a code over a window.
    MinimalPart {
        #[arg(long)]
        code: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Common almost-monochromatic set for a family of rules.
    AlmostMono {
        #[arg(long)]
        code: String,
        /// Semicolon-separated rules.
        #[arg(long)]
        rules: String,
        #[arg(long, default_value_t = 3)]
        target: u64,
        #[arg(long)]
        lift: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Diagonal monochromatization for a family of rules.
    Diagonal {
        #[arg(long)]
        code: String,
        #[arg(long)]
        rules: String,
        #[arg(long)]
        lift: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Subcommand)]
enum EmbedOp {
    /// Search for an end-extension comparison between two codes.
    Compare {
        #[arg(long = "B")]
        source: String,
        #[arg(long = "C")]
        target: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Synthesize a double-arrow witness by the two-phase construction.
    Synthesize {
        #[arg(long = "B")]
        source: String,
        #[arg(long = "C")]
        target: String,
        #[arg(long, default_value_t = 8)]
        steps: u64,
        #[arg(long)]
        fuel: Option<u64>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Synthesize a witness from a rank-omega source toward the Schreier
    /// barrier.
    SynthesizeOmega {
        #[arg(long = "B")]
        source: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Verify a double-arrow witness on thinned sets.
    Verify {
        #[arg(long = "B")]
        source: String,
        #[arg(long = "C")]
        target: String,
        /// Witness JSON, inline or @file.
        #[arg(long)]
        witness: String,
        /// Number of sampled thinned sets; omit to check all of them.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Compose two witnesses into one for the transitive relation.
    Compose {
        /// First witness JSON, inline or @file.
        #[arg(long)]
        f: String,
        /// Second witness JSON, inline or @file.
        #[arg(long)]
        g: String,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Subcommand)]
enum IdealsOp {
    /// The canonical enumeration of finite sequences.
    Enumerate {
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Build the Hechler tree of a threshold table.
    TreeFromFn {
        /// Comma-separated table values.
        #[arg(long)]
        values: String,
        #[arg(long, default_value_t = 0)]
        default: u64,
    },
    /// Read the threshold table of a tree (JSON inline or @file).
    FnFromTree {
        #[arg(long)]
        tree: String,
        #[arg(long, default_value_t = 20)]
        len: usize,
    },
    /// Build a Hechler tree avoiding an ideal-member descriptor.
    Avoid {
        #[arg(long)]
        code: String,
        /// Descriptor JSON, inline or @file.
        #[arg(long)]
        descriptor: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Dominate a family of trees (JSON array, inline or @file).
    Dominate {
        #[arg(long)]
        code: String,
        #[arg(long)]
        trees: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Run the Katetov shrinking construction for a map.
    Shrink {
        #[arg(long = "B")]
        source: String,
        #[arg(long = "C")]
        target: String,
        /// Map JSON (inline or @file); omit to draw a seeded random map.
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the exhaustive oracle instead of the recursive construction.
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value_t = 3)]
        target_size: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Positivity for the no-full-restriction ideal.
    GcPositive {
        #[arg(long)]
        code: String,
        /// Characteristic rule of the subset (value 1 = inside).
        #[arg(long)]
        rule: String,
        #[arg(long, default_value_t = 3)]
        target: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Membership in the tree of a restricted barrier.
    EUp {
        #[arg(long)]
        code: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        set: String,
    },
    /// One stage of the almost-disjoint construction.
    Stage {
        #[arg(long)]
        code: String,
        #[arg(long)]
        base: String,
        /// Prior members as JSON (array of arrays of sets), inline or @file.
        #[arg(long)]
        priors: Option<String>,
        /// Prior shrink certificates as JSON array, inline or @file.
        #[arg(long)]
        images: Option<String>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Greedy branch-homogeneous set of a tree.
    BranchSet {
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Check the non-compactness hypotheses for a family over a grid.
    Verify {
        #[arg(long)]
        code: String,
        /// Family JSON (array of arrays of sets), inline or @file.
        #[arg(long)]
        family: String,
        /// Semicolon-separated grid of set descriptors.
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        window: WindowArgs,
    },
}

/// Outcome of a command: a JSON body plus the process exit code.
struct Report {
    command: String,
    seed: Option<u64>,
    body: Value,
    exit: i32,
}

fn main() {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let rendered = match cli.format {
                Format::Json => {
                    let mut obj = json!({
                        "command": report.command,
                        "report": report.body,
                    });
                    if let Some(seed) = report.seed {
                        obj["seed"] = json!(seed);
                    }
                    serde_json::to_string_pretty(&obj).expect("report serializes")
                }
                Format::Text => render_text(&report),
            };
            println!("{rendered}");
            if let Some(path) = cli.out {
                if let Err(e) = fs::write(&path, rendered + "\n") {
                    eprintln!("error: cannot write {path}: {e}");
                    std::process::exit(EXIT_USAGE);
                }
            }
            std::process::exit(report.exit);
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(classify_error(&e));
        }
    }
}

fn render_text(report: &Report) -> String {
    let mut lines = vec![format!("command: {}", report.command)];
    if let Some(seed) = report.seed {
        lines.push(format!("seed: {seed}"));
    }
    render_value("", &report.body, &mut lines);
    lines.join("\n")
}

fn render_value(prefix: &str, value: &Value, lines: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                render_value(&key, v, lines);
            }
        }
        other => lines.push(format!("{prefix}: {other}")),
    }
}

fn classify_error(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(b) = cause.downcast_ref::<BarrierError>() {
            return match b {
                BarrierError::FuelExhausted(_) => EXIT_EXHAUSTED,
                _ => EXIT_USAGE,
            };
        }
        if let Some(r) = cause.downcast_ref::<RamseyError>() {
            return match r {
                RamseyError::NotFoundInWindow => EXIT_FAIL,
                _ => EXIT_USAGE,
            };
        }
        if let Some(i) = cause.downcast_ref::<IdealsError>() {
            return match i {
                IdealsError::WindowExhausted => EXIT_EXHAUSTED,
                IdealsError::NotFoundInWindow => EXIT_FAIL,
                _ => EXIT_USAGE,
            };
        }
        if let Some(m) = cause.downcast_ref::<EmbedError>() {
            return match m {
                EmbedError::FuelExhausted(_) => EXIT_EXHAUSTED,
                _ => EXIT_USAGE,
            };
        }
    }
    EXIT_USAGE
}

/// Inline value or `@path` file reference.
fn read_arg(arg: &str) -> Result<String> {
    if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(arg.to_string())
    }
}

/// Accepts either a bare JSON payload or a whole report written by `--out`,
/// unwrapping the `report` field in the latter case.
fn parse_payload<T: serde::de::DeserializeOwned>(raw: &str, what: &str) -> Result<T> {
    let value: Value =
        serde_json::from_str(raw.trim()).with_context(|| format!("parsing {what} JSON"))?;
    let payload = match &value {
        Value::Object(map) if map.contains_key("report") && map.contains_key("command") => {
            map["report"].clone()
        }
        _ => value,
    };
    serde_json::from_value(payload).with_context(|| format!("decoding {what}"))
}

fn parse_code(text: &str) -> Result<BarrierCode> {
    let raw = read_arg(text)?;
    let raw = raw.trim();
    if raw.starts_with('{') {
        return serde_json::from_str(raw).context("parsing barrier code JSON");
    }
    BarrierCode::from_str(raw).map_err(|e| anyhow!(e.to_string()))
}

fn parse_set_descriptor(text: &str) -> Result<SetDescriptor> {
    let raw = read_arg(text)?;
    let raw = raw.trim();
    if raw.starts_with('{') {
        return serde_json::from_str(raw).context("parsing set descriptor JSON");
    }
    SetDescriptor::from_str(raw).map_err(|e| anyhow!(e.to_string()))
}

fn parse_finite_set(text: &str) -> Result<FiniteSet> {
    let cleaned = text
        .trim()
        .trim_start_matches(['{', '['])
        .trim_end_matches(['}', ']']);
    let elements: Vec<u64> = if cleaned.trim().is_empty() {
        Vec::new()
    } else {
        cleaned
            .split(',')
            .map(|t| t.trim().parse::<u64>().context("finite set element"))
            .collect::<Result<_>>()?
    };
    FiniteSet::new(elements).map_err(|e| anyhow!(e.to_string()))
}

fn parse_coloring(rule: &str, colors: u64, lift: bool) -> Result<Coloring> {
    let rule: ColorRule = rule
        .parse()
        .map_err(|e: RamseyError| anyhow!(e.to_string()))?;
    let coloring = Coloring::new(colors, rule).map_err(|e| anyhow!(e.to_string()))?;
    Ok(if lift {
        lift_coloring(coloring)
    } else {
        coloring
    })
}

fn parse_rule_family(rules: &str, lift: bool) -> Result<Vec<Coloring>> {
    rules
        .split(';')
        .map(|r| parse_coloring(r.trim(), 2, lift))
        .collect()
}

fn set_json(s: &FiniteSet) -> Value {
    json!(s.elements())
}

fn run(command: &Command) -> Result<Report> {
    match command {
        Command::Ordinal { op } => run_ordinal(op),
        Command::Sets { op } => run_sets(op),
        Command::Barrier { op } => run_barrier(op),
        Command::Ramsey { op } => run_ramsey(op),
        Command::Embed { op } => run_embed(op),
        Command::Ideals { op } => run_ideals(op),
    }
}

fn ok(command: &str, body: Value) -> Result<Report> {
    Ok(Report {
        command: command.into(),
        seed: None,
        body,
        exit: 0,
    })
}

fn run_ordinal(op: &OrdinalOp) -> Result<Report> {
    match op {
        OrdinalOp::Compare { a, b } => {
            let a: Ordinal = a.parse().map_err(|e| anyhow!("{e}"))?;
            let b: Ordinal = b.parse().map_err(|e| anyhow!("{e}"))?;
            let rel = match a.cmp(&b) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            };
            ok(
                "ordinal compare",
                json!({ "a": a.to_string(), "b": b.to_string(), "relation": rel }),
            )
        }
        OrdinalOp::Succ { a } => {
            let a: Ordinal = a.parse().map_err(|e| anyhow!("{e}"))?;
            ok("ordinal succ", json!({ "result": a.succ().to_string() }))
        }
        OrdinalOp::SupAffine { a, b } => ok(
            "ordinal sup-affine",
            json!({ "result": Ordinal::sup_affine(*a, *b).to_string() }),
        ),
    }
}

fn run_sets(op: &SetsOp) -> Result<Report> {
    match op {
        SetsOp::Enumerate { set, count } => {
            let d = parse_set_descriptor(set)?;
            let xs = d.enumerate(*count).map_err(|e| anyhow!(e.to_string()))?;
            ok("sets enumerate", json!({ "elements": xs }))
        }
        SetsOp::Contains { set, n } => {
            let d = parse_set_descriptor(set)?;
            ok("sets contains", json!({ "contains": d.contains(*n) }))
        }
        SetsOp::Thin {
            set,
            breakpoints,
            parity,
            window,
        } => {
            let d = parse_set_descriptor(set)?;
            let ks: Vec<u64> = breakpoints
                .split(',')
                .map(|t| t.trim().parse::<u64>().context("breakpoint"))
                .collect::<Result<_>>()?;
            let parity = if parity == "even" {
                Parity::Even
            } else {
                Parity::Odd
            };
            let out =
                thin(&d, &ks, parity, window.window()?).map_err(|e| anyhow!(e.to_string()))?;
            ok("sets thin", json!({ "result": out.elements() }))
        }
    }
}

fn run_barrier(op: &BarrierOp) -> Result<Report> {
    match op {
        BarrierOp::Rank { code } => {
            let code = parse_code(code)?;
            let rank = code.rank()?;
            ok("barrier rank", json!({ "rank": rank.to_string() }))
        }
        BarrierOp::NodeRank { code, set } => {
            let code = parse_code(code)?;
            let s = parse_finite_set(set)?;
            let rank = code.node_rank(&s)?;
            ok("barrier node-rank", json!({ "rank": rank.to_string() }))
        }
        BarrierOp::Contains { code, set } => {
            let code = parse_code(code)?;
            let s = parse_finite_set(set)?;
            ok("barrier contains", json!({ "contains": code.contains(&s) }))
        }
        BarrierOp::TreeContains { code, set } => {
            let code = parse_code(code)?;
            let s = parse_finite_set(set)?;
            ok(
                "barrier tree-contains",
                json!({ "contains": code.tree_contains(&s) }),
            )
        }
        BarrierOp::Sub { code, set } => {
            let code = parse_code(code)?;
            let s = parse_finite_set(set)?;
            let sub = code.sub_barrier(&s)?;
            ok("barrier sub", json!({ "code": sub.to_string() }))
        }
        BarrierOp::EndReplace { a, b } => {
            let a = parse_finite_set(a)?;
            let b = parse_finite_set(b)?;
            let r = end_replace(&a, &b)?;
            ok("barrier end-replace", json!({ "result": r.elements() }))
        }
        BarrierOp::FirstSegment {
            code,
            base,
            fuel,
            window,
        } => {
            let code = parse_code(code)?;
            let base = parse_set_descriptor(base)?;
            let fuel = fuel.unwrap_or(10 * window.bound);
            let s = first_segment(&code, &base, fuel)?;
            ok("barrier first-segment", json!({ "segment": s.elements() }))
        }
        BarrierOp::VerifySperner { code, window } => {
            let code = parse_code(code)?;
            match verify_sperner(&code, window.window()?) {
                Verdict::Pass => ok("barrier verify-sperner", json!({ "verdict": "pass" })),
                Verdict::Fail { witness: (s, t) } => Ok(Report {
                    command: "barrier verify-sperner".into(),
                    seed: None,
                    body: json!({
                        "verdict": "fail",
                        "subset": set_json(&s),
                        "superset": set_json(&t),
                    }),
                    exit: EXIT_FAIL,
                }),
            }
        }
        BarrierOp::VerifyCover { code, window } => {
            let code = parse_code(code)?;
            match verify_cover(&code, window.window()?) {
                Verdict::Pass => ok("barrier verify-cover", json!({ "verdict": "pass" })),
                Verdict::Fail { witness } => Ok(Report {
                    command: "barrier verify-cover".into(),
                    seed: None,
                    body: json!({ "verdict": "fail", "stuck": set_json(&witness) }),
                    exit: EXIT_FAIL,
                }),
            }
        }
        BarrierOp::VerifyUniform { code, window } => {
            let code = parse_code(code)?;
            let report = is_uniform_window(&code, window.window()?)?;
            let exit = if report.uniform { 0 } else { EXIT_FAIL };
            Ok(Report {
                command: "barrier verify-uniform".into(),
                seed: None,
                body: json!({
                    "uniform": report.uniform,
                    "strictly_increasing": report.strictly_increasing,
                }),
                exit,
            })
        }
        BarrierOp::Uniformize { code, window } => {
            let code = parse_code(code)?;
            let m = uniformize_rank_omega(&code, window.window()?)?;
            ok("barrier uniformize", json!({ "set": m.to_string() }))
        }
        BarrierOp::FloorRank { code, window } => {
            let code = parse_code(code)?;
            let estimate = floor_rank_estimate(&code, window.window()?);
            ok(
                "barrier floor-rank",
                json!({ "estimate": estimate.to_string(), "kind": "heuristic" }),
            )
        }
    }
}

fn run_ramsey(op: &RamseyOp) -> Result<Report> {
    match op {
        RamseyOp::Search {
            code,
            rule,
            colors,
            target,
            recursive,
            lift,
            window,
        } => {
            let code = parse_code(code)?;
            let coloring = parse_coloring(rule, *colors, *lift)?;
            let w = window.window()?;
            let witness = if *recursive {
                nash_williams_search_recursive(&code, &coloring, w, *target)
            } else {
                nash_williams_search(&code, &coloring, w, *target)
            }?;
            let verified = verify_witness(&code, &coloring, &witness)?;
            ok(
                "ramsey search",
                json!({
                    "set": set_json(&witness.set),
                    "color": witness.color,
                    "reverified": verified,
                }),
            )
        }
        RamseyOp::MinimalPart { code, window } => {
            let code = parse_code(code)?;
            let coloring = minimal_part_partition(&code, window.window()?);
            let table = match &coloring.rule {
                ColorRule::Table { entries, .. } => entries
                    .iter()
                    .map(|(s, c)| json!({ "element": s.elements(), "color": c }))
                    .collect::<Vec<_>>(),
                _ => Vec::new(),
            };
            ok("ramsey minimal-part", json!({ "table": table }))
        }
        RamseyOp::AlmostMono {
            code,
            rules,
            target,
            lift,
            window,
        } => {
            let code = parse_code(code)?;
            let family = parse_rule_family(rules, *lift)?;
            let wit = almost_monochromatic_search(&code, &family, window.window()?, *target)?;
            let per: Vec<Value> = wit
                .per_coloring
                .iter()
                .map(|m| json!({ "color": m.color, "discarded_prefix": m.discarded_prefix }))
                .collect();
            ok(
                "ramsey almost-mono",
                json!({ "set": set_json(&wit.set), "witnesses": per }),
            )
        }
        RamseyOp::Diagonal {
            code,
            rules,
            lift,
            window,
        } => {
            let code = parse_code(code)?;
            let family = parse_rule_family(rules, *lift)?;
            let w = window.window()?;
            let wit = diagonal_monochromatic(&code, &family, w)?;
            let mut verified = true;
            for (coloring, mw) in family.iter().zip(&wit.per_coloring) {
                verified &= verify_witness(&code, coloring, mw)?;
            }
            let colors: Vec<u64> = wit.per_coloring.iter().map(|m| m.color).collect();
            ok(
                "ramsey diagonal",
                json!({
                    "set": set_json(&wit.set),
                    "colors": colors,
                    "reverified": verified,
                    "spine_length": wit.spine.len(),
                }),
            )
        }
    }
}

fn parse_witness(text: &str) -> Result<DoubleArrowWitness> {
    let raw = read_arg(text)?;
    parse_payload(&raw, "witness")
}

fn run_embed(op: &EmbedOp) -> Result<Report> {
    match op {
        EmbedOp::Compare {
            source,
            target,
            window,
        } => {
            let b = parse_code(source)?;
            let c = parse_code(target)?;
            let (relation, witness, exit) = match compare_embedding(&b, &c, window.window()?) {
                EmbedComparison::BLeqC { witness } => ("B<=C", Some(witness), 0),
                EmbedComparison::CLeqB { witness } => ("C<=B", Some(witness), 0),
                EmbedComparison::Undecided => ("undecided", None, EXIT_FAIL),
            };
            Ok(Report {
                command: "embed compare".into(),
                seed: None,
                body: json!({
                    "relation": relation,
                    "witness": witness.map(|w| json!(w.elements())).unwrap_or(Value::Null),
                }),
                exit,
            })
        }
        EmbedOp::Synthesize {
            source,
            target,
            steps,
            fuel,
            window,
        } => {
            let b = parse_code(source)?;
            let c = parse_code(target)?;
            let w = window.window()?;
            let fuel = fuel.unwrap_or(10 * w.bound);
            let witness = double_arrow_witness(&b, &c, *steps, fuel, w)?;
            ok(
                "embed synthesize",
                serde_json::to_value(&witness).context("serializing witness")?,
            )
        }
        EmbedOp::SynthesizeOmega { source, window } => {
            let b = parse_code(source)?;
            let witness = double_arrow_witness_rank_omega(&b, window.window()?)?;
            ok(
                "embed synthesize-omega",
                serde_json::to_value(&witness).context("serializing witness")?,
            )
        }
        EmbedOp::Verify {
            source,
            target,
            witness,
            samples,
            seed,
            window,
        } => {
            let b = parse_code(source)?;
            let c = parse_code(target)?;
            let witness = parse_witness(witness)?;
            let w = window.window()?;
            let log_ok = verify_phase_log(&witness, &b, &c)?;
            let samples = samples.map(|count| (count, *seed));
            let (body, exit) = match verify_double_arrow(&witness, &b, &c, w, samples) {
                Verdict::Pass if log_ok => (json!({ "verdict": "pass", "phase_log": "pass" }), 0),
                Verdict::Pass => (json!({ "verdict": "fail", "phase_log": "fail" }), EXIT_FAIL),
                Verdict::Fail {
                    witness: (b_elem, image),
                } => (
                    json!({
                        "verdict": "fail",
                        "element": set_json(&b_elem),
                        "image": set_json(&image),
                        "phase_log": if log_ok { "pass" } else { "fail" },
                    }),
                    EXIT_FAIL,
                ),
            };
            Ok(Report {
                command: "embed verify".into(),
                seed: samples.map(|(_, s)| s),
                body,
                exit,
            })
        }
        EmbedOp::Compose { f, g, window } => {
            let f = parse_witness(f)?;
            let g = parse_witness(g)?;
            let h = compose_witnesses(&f, &g, window.window()?.bound);
            ok(
                "embed compose",
                serde_json::to_value(&h).context("serializing witness")?,
            )
        }
    }
}

fn parse_tree(text: &str) -> Result<HechlerTree> {
    let raw = read_arg(text)?;
    parse_payload(&raw, "Hechler tree")
}

fn run_ideals(op: &IdealsOp) -> Result<Report> {
    match op {
        IdealsOp::Enumerate { count } => {
            let seqs = canonical_enumeration(*count);
            ok("ideals enumerate", json!({ "sequences": seqs }))
        }
        IdealsOp::TreeFromFn { values, default } => {
            let values: Vec<u64> = values
                .split(',')
                .map(|t| t.trim().parse::<u64>().context("table value"))
                .collect::<Result<_>>()?;
            let tree = tree_from_fn(&FnTable {
                values,
                default: *default,
            });
            ok(
                "ideals tree-from-fn",
                serde_json::to_value(&tree).context("serializing tree")?,
            )
        }
        IdealsOp::FnFromTree { tree, len } => {
            let tree = parse_tree(tree)?;
            let table = fn_from_tree(&tree, *len);
            ok(
                "ideals fn-from-tree",
                json!({ "values": table.values, "default": table.default }),
            )
        }
        IdealsOp::Avoid {
            code,
            descriptor,
            window,
        } => {
            let code = parse_code(code)?;
            let raw = read_arg(descriptor)?;
            let descriptor: FinDescriptor =
                serde_json::from_str(raw.trim()).context("parsing descriptor JSON")?;
            let tree = hechler_avoiding(&code, &descriptor, window.window()?)?;
            ok(
                "ideals avoid",
                serde_json::to_value(&tree).context("serializing tree")?,
            )
        }
        IdealsOp::Dominate {
            code,
            trees,
            window,
        } => {
            let code = parse_code(code)?;
            let raw = read_arg(trees)?;
            let trees: Vec<HechlerTree> =
                serde_json::from_str(raw.trim()).context("parsing tree family JSON")?;
            let (tree, bounds) = hechler_dominating(&trees, &code, window.window()?)?;
            ok(
                "ideals dominate",
                json!({
                    "tree": serde_json::to_value(&tree).context("serializing tree")?,
                    "column_bounds": bounds,
                }),
            )
        }
        IdealsOp::Shrink {
            source,
            target,
            map,
            seed,
            brute,
            target_size,
            window,
        } => {
            let b = parse_code(source)?;
            let c = parse_code(target)?;
            let w = window.window()?;
            let (table, used_seed) = match map {
                Some(text) => {
                    let raw = read_arg(text)?;
                    let table: MapTable =
                        serde_json::from_str(raw.trim()).context("parsing map JSON")?;
                    (table, None)
                }
                None => (random_map(&b, &c, w, *seed)?, Some(*seed)),
            };
            let cert: ShrinkCertificate = if *brute {
                katetov_shrink_bruteforce(&b, &c, &table, w, *target_size)?
            } else {
                katetov_shrink_recursive(&b, &c, &table, w)?
            };
            let valid = verify_shrink(&cert, &b, &table)?;
            Ok(Report {
                command: "ideals shrink".into(),
                seed: used_seed,
                body: json!({
                    "certificate": serde_json::to_value(&cert)
                        .context("serializing certificate")?,
                    "reverified": valid,
                }),
                exit: if valid { 0 } else { EXIT_FAIL },
            })
        }
        IdealsOp::GcPositive {
            code,
            rule,
            target,
            window,
        } => {
            let code = parse_code(code)?;
            let subset = parse_coloring(rule, 2, false)?;
            match gc_positive(&code, &subset, window.window()?, *target)? {
                GcOutcome::Positive { x } => ok(
                    "ideals gc-positive",
                    json!({ "outcome": "positive", "set": x.elements() }),
                ),
                GcOutcome::NegativeInWindow => Ok(Report {
                    command: "ideals gc-positive".into(),
                    seed: None,
                    body: json!({ "outcome": "negative-in-window" }),
                    exit: EXIT_FAIL,
                }),
            }
        }
        IdealsOp::EUp { code, base, set } => {
            let code = parse_code(code)?;
            let base = parse_set_descriptor(base)?;
            let s = parse_finite_set(set)?;
            ok(
                "ideals e-up",
                json!({ "contains": e_up_contains(&code, &base, &s) }),
            )
        }
        IdealsOp::Stage {
            code,
            base,
            priors,
            images,
            window,
        } => {
            let code = parse_code(code)?;
            let base = parse_set_descriptor(base)?;
            let prior_a: Vec<Vec<FiniteSet>> = match priors {
                Some(text) => {
                    let raw = read_arg(text)?;
                    serde_json::from_str(raw.trim()).context("parsing priors JSON")?
                }
                None => Vec::new(),
            };
            let prior_images: Vec<ShrinkCertificate> = match images {
                Some(text) => {
                    let raw = read_arg(text)?;
                    serde_json::from_str(raw.trim()).context("parsing images JSON")?
                }
                None => Vec::new(),
            };
            let cert: AdStageCertificate =
                ad_stage(&code, &prior_a, &prior_images, &base, window.window()?)?;
            let exit = if cert.all_pass() { 0 } else { EXIT_FAIL };
            Ok(Report {
                command: "ideals stage".into(),
                seed: None,
                body: serde_json::to_value(&cert).context("serializing certificate")?,
                exit,
            })
        }
        IdealsOp::BranchSet { tree, window } => {
            let tree = parse_tree(tree)?;
            let a = selective_branch_set(&tree, window.window()?)?;
            ok("ideals branch-set", json!({ "set": a.elements() }))
        }
        IdealsOp::Verify {
            code,
            family,
            grid,
            window,
        } => {
            let code = parse_code(code)?;
            let raw = read_arg(family)?;
            let family: Vec<Vec<FiniteSet>> =
                serde_json::from_str(raw.trim()).context("parsing family JSON")?;
            let grid: Vec<SetDescriptor> = grid
                .split(';')
                .map(|t| parse_set_descriptor(t.trim()))
                .collect::<Result<_>>()?;
            let verdict = verify_no_c_seq(&code, &family, &grid, window.window()?);
            let exit = if verdict.is_pass() { 0 } else { EXIT_FAIL };
            Ok(Report {
                command: "ideals verify".into(),
                seed: None,
                body: match &verdict {
                    NoCseqVerdict::Pass => json!({ "verdict": "pass" }),
                    other => json!({
                        "verdict": "fail",
                        "reason": serde_json::to_value(other).context("serializing verdict")?,
                    }),
                },
                exit,
            })
        }
    }
}
