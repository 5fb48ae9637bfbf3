use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ascending_hnn::ball::build_ball;
use ascending_hnn::depth::{
    chain_inclusion_probe, depth_scan, depth_witness_check, DepthSetting, ProbeConfig, WitnessCheck,
};
use ascending_hnn::error::Error;
use ascending_hnn::exec::Execution;
use ascending_hnn::hnn::{canonical_form, equal_in_G, HnnPresentation, Truth};
use ascending_hnn::homotopy::{
    build_corner, build_push, build_string, fp_complement_trivialize, replay, trivialize_bounded, verify_levels,
    CellularHomotopy, DiagramCertificate, LevelCertificate, Trivialization, DIAGRAM_SCHEMA,
};
use ascending_hnn::oracle::{SearchBudget, Verdict};
use ascending_hnn::regions::{classify, classify_with_evidence, RegionLabel};
use ascending_hnn::word::{Letter, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

const HOMOTOPY_SCHEMA: &str = "ahnn-homotopy/1";

#[derive(Parser)]
#[command(name = "ahnn", version, about = "Word problems, Cayley complex balls and homotopy certificates for ascending HNN extensions")]
struct Cli {
    /// Presentation file (JSON).
    #[arg(short, long, global = true)]
    presentation: Option<PathBuf>,

    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Disable the thread pool.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(flatten)]
    budget: BudgetArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct BudgetArgs {
    /// Maximum number of relator factors in a search.
    #[arg(long, global = true)]
    budget_factors: Option<usize>,
    /// Maximum number of search nodes.
    #[arg(long, global = true)]
    budget_nodes: Option<usize>,
    /// Maximum conjugator length.
    #[arg(long, global = true)]
    budget_conj: Option<usize>,
    /// Maximum intermediate word length.
    #[arg(long, global = true)]
    budget_word_len: Option<usize>,
    /// Number of phi-iterates (of relators, or of levels to ascend) a search may use.
    #[arg(long, global = true)]
    budget_iterates: Option<usize>,
}

impl BudgetArgs {
    fn is_set(&self) -> bool {
        self.budget_factors.is_some()
            || self.budget_nodes.is_some()
            || self.budget_conj.is_some()
            || self.budget_word_len.is_some()
            || self.budget_iterates.is_some()
    }

    fn apply(&self, mut b: SearchBudget) -> SearchBudget {
        b.max_factors = self.budget_factors.unwrap_or(b.max_factors);
        b.max_nodes = self.budget_nodes.unwrap_or(b.max_nodes);
        b.conj_len = self.budget_conj.unwrap_or(b.conj_len);
        b.max_word_len = self.budget_word_len.unwrap_or(b.max_word_len);
        b.i_max = self.budget_iterates.unwrap_or(b.i_max);
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word.
    Reduce { word: String },
    /// Apply phi k times to a base word.
    Endo {
        word: String,
        #[arg(short, long, default_value_t = 1)]
        k: usize,
    },
    /// Canonical form (n, w, m) of a word.
    Canon { word: String },
    /// Decide whether two words are equal in the group.
    Equal { u: String, v: String },
    /// Classify a vertex relative to D(N, M).
    Classify {
        vertex: String,
        #[arg(short = 'n', long = "n", default_value_t = 0)]
        big_n: usize,
        #[arg(short = 'm', long = "m", default_value_t = 0)]
        big_m: usize,
    },
    /// Enumerate the ball of the Cayley 2-complex.
    Ball {
        #[arg(long, default_value_t = 3)]
        radius: usize,
        /// Write the ball here instead of standard output.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Colour DOT vertices by their region for `N,M`.
        #[arg(long, value_parser = parse_pair::<usize>)]
        regions: Option<(usize, usize)>,
    },
    /// Depth witnesses: check one word, scan short words, or run the chain probe.
    Depth {
        word: Option<String>,
        #[arg(short = 'n', long = "n")]
        n: Option<usize>,
        #[arg(long)]
        scan: bool,
        #[arg(long, default_value_t = 4)]
        len_max: usize,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[arg(long)]
        probe: bool,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Build and verify cellular homotopies and diagram certificates.
    Homotopy {
        #[command(subcommand)]
        action: HomotopyCommand,
    },
    /// Ask the base-group oracle whether a base word is trivial.
    Oracle { word: String },
}

#[derive(Subcommand)]
enum HomotopyCommand {
    /// Push one edge up through conjugation cells.
    Push {
        edge: char,
        #[arg(long, default_value = "")]
        vertex: String,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Push a base path up row by row.
    String {
        path: String,
        #[arg(long, default_value = "")]
        vertex: String,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Slide a mixed path to the top of a level interval, then push it.
    Corner {
        path: String,
        #[arg(long, default_value = "")]
        vertex: String,
        #[arg(long, value_parser = parse_pair::<i64>, allow_hyphen_values = true)]
        interval: (i64, i64),
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Null-homotopy of a loop below a level cap.
    Trivialize {
        #[arg(name = "loop")]
        loop_word: String,
        #[arg(long, default_value = "")]
        vertex: String,
        #[arg(long, allow_hyphen_values = true)]
        cap: i64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Null-homotopy of a loop in the complement of D(N, M).
    Complement {
        #[arg(name = "loop")]
        loop_word: String,
        #[arg(long, default_value = "")]
        vertex: String,
        #[arg(short = 'n', long = "n", default_value_t = 0)]
        big_n: usize,
        #[arg(short = 'm', long = "m", default_value_t = 0)]
        big_m: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Re-check a homotopy or diagram certificate file.
    Verify { file: PathBuf },
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<T>().map_err(|_| format!("bad number `{x}`"));
    Ok((parse(a)?, parse(b)?))
}

/// A command's outcome: what to print and the exit status.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: impl Into<String>) -> Outcome {
        Outcome { text: text.into(), code: 0 }
    }

    fn with_code(text: impl Into<String>, code: u8) -> Outcome {
        Outcome { text: text.into(), code }
    }
}

struct Failure {
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Verification(_) => 1,
            Error::StabilizationNotFound { .. } | Error::UnknownEnvelope(_) => 3,
            _ => 2,
        };
        Failure { message: e.to_string(), code }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { message: msg.into(), code: 2 }
}

type CmdResult = Result<Outcome, Failure>;

fn truth_code(t: Truth) -> u8 {
    if t == Truth::Unknown {
        3
    } else {
        0
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

struct Ctx {
    presentation: Option<HnnPresentation>,
    format: Format,
    exec: Execution,
}

impl Ctx {
    fn p(&self) -> Result<&HnnPresentation, Failure> {
        self.presentation.as_ref().ok_or_else(|| input_error("this command needs a presentation (--presentation FILE)"))
    }

    fn no_dot(&self) -> Result<(), Failure> {
        if self.format == Format::Dot {
            return Err(input_error("dot output is only available for `ball`"));
        }
        Ok(())
    }
}

fn load(path: &Path, budget: &BudgetArgs) -> Result<HnnPresentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let p = HnnPresentation::from_json(&text)?;
    if budget.is_set() {
        let b = budget.apply(*p.budget());
        return Ok(p.with_budget(b)?);
    }
    Ok(p)
}

fn run(cli: Cli) -> CmdResult {
    let presentation = cli.presentation.as_deref().map(|path| load(path, &cli.budget)).transpose()?;
    let ctx = Ctx {
        presentation,
        format: cli.format,
        exec: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
    };
    if !matches!(cli.command, Command::Ball { .. }) {
        ctx.no_dot()?;
    }
    match cli.command {
        Command::Reduce { word } => cmd_reduce(&ctx, &word),
        Command::Endo { word, k } => cmd_endo(&ctx, &word, k),
        Command::Canon { word } => cmd_canon(&ctx, &word),
        Command::Equal { u, v } => cmd_equal(&ctx, &u, &v),
        Command::Classify { vertex, big_n, big_m } => cmd_classify(&ctx, &vertex, big_n, big_m),
        Command::Ball { radius, out, regions } => cmd_ball(&ctx, radius, out.as_deref(), regions),
        Command::Depth { word, n, scan, len_max, n_max, probe, samples, seed } => {
            let p = ctx.p()?;
            if probe {
                cmd_probe(&ctx, p, samples, seed)
            } else if scan {
                cmd_scan(&ctx, p, len_max, n_max)
            } else {
                let word = word.ok_or_else(|| input_error("give a word and --n, or use --scan or --probe"))?;
                let n = n.ok_or_else(|| input_error("checking a witness needs --n"))?;
                cmd_witness(&ctx, p, &word, n)
            }
        }
        Command::Homotopy { action } => cmd_homotopy(&ctx, action),
        Command::Oracle { word } => cmd_oracle(&ctx, &word),
    }
}

fn cmd_reduce(ctx: &Ctx, word: &str) -> CmdResult {
    let w = match &ctx.presentation {
        Some(p) => p.parse_word(word)?,
        None => Word::parse_expr(word)?,
    };
    Ok(match ctx.format {
        Format::Json => Outcome::ok(to_json(&json!({ "word": w }))),
        _ => Outcome::ok(w.to_string()),
    })
}

fn cmd_endo(ctx: &Ctx, word: &str, k: usize) -> CmdResult {
    let p = ctx.p()?;
    let w = p.parse_base_word(word)?;
    let img = p.phi().image_k(&w, k);
    Ok(match ctx.format {
        Format::Json => Outcome::ok(to_json(&json!({ "word": w, "k": k, "image": img }))),
        _ => Outcome::ok(img.to_string()),
    })
}

fn cmd_canon(ctx: &Ctx, word: &str) -> CmdResult {
    let p = ctx.p()?;
    let w = p.parse_word(word)?;
    let f = canonical_form(&w, p)?;
    Ok(match ctx.format {
        Format::Json => Outcome::ok(to_json(&json!({
            "n": f.n, "w": f.w, "m": f.m, "exact": f.exact, "level": f.level(),
        }))),
        _ => Outcome::ok(format!(
            "({}, \"{}\", {}) {} level={}",
            f.n,
            f.w,
            f.m,
            if f.exact { "exact" } else { "best-effort" },
            f.level()
        )),
    })
}

fn cmd_equal(ctx: &Ctx, u: &str, v: &str) -> CmdResult {
    let p = ctx.p()?;
    let t = equal_in_G(&p.parse_word(u)?, &p.parse_word(v)?, p);
    let text = match ctx.format {
        Format::Json => to_json(&json!({ "equal": t })),
        _ => t.to_string(),
    };
    Ok(Outcome::with_code(text, truth_code(t)))
}

fn cmd_classify(ctx: &Ctx, vertex: &str, big_n: usize, big_m: usize) -> CmdResult {
    let p = ctx.p()?;
    let c = classify_with_evidence(&p.parse_word(vertex)?, big_n, big_m, p);
    let code = if c.label == RegionLabel::Unknown { 3 } else { 0 };
    let text = match ctx.format {
        Format::Json => to_json(&c),
        _ => format!(
            "{} (level={}, window=[{},{}], coset={})",
            c.label,
            c.level,
            c.window.0,
            c.window.1,
            match c.coset {
                None => "n/a",
                Some(Truth::True) => "true",
                Some(Truth::False) => "false",
                Some(Truth::Unknown) => "unknown",
            }
        ),
    };
    Ok(Outcome::with_code(text, code))
}

fn cmd_ball(ctx: &Ctx, radius: usize, out: Option<&Path>, regions: Option<(usize, usize)>) -> CmdResult {
    let p = ctx.p()?;
    let ball = build_ball(p, radius, ctx.exec)?;
    let body = match ctx.format {
        Format::Json => ball.to_json(),
        Format::Dot => {
            let labels: Option<Vec<String>> = regions
                .map(|(n, m)| ball.vertices.iter().map(|v| classify(&v.word, n, m, p).to_string()).collect());
            ball.to_dot(labels.as_deref())
        }
        Format::Text => {
            let mut s = format!(
                "radius={} vertices={} edges={} cells={}",
                radius,
                ball.vertex_count(),
                ball.edges.len(),
                ball.cells.len()
            );
            for d in 0..=radius {
                let count = ball.vertices.iter().filter(|v| v.distance == d).count();
                let _ = write!(s, "\nsphere {d}: {count}");
            }
            s
        }
    };
    match out {
        Some(path) => {
            write_file(path, &body)?;
            Ok(Outcome::ok(format!("wrote {} vertices to {}", ball.vertex_count(), path.display())))
        }
        None => Ok(Outcome::ok(body)),
    }
}

fn cmd_witness(ctx: &Ctx, p: &HnnPresentation, word: &str, n: usize) -> CmdResult {
    let setting = DepthSetting::from_presentation(p)?;
    let w = p.parse_base_word(word)?;
    let check = depth_witness_check(&w, n, &setting)?;
    let code = match check {
        WitnessCheck::Accepted(_) => 0,
        WitnessCheck::Rejected(_) => 1,
        WitnessCheck::Indeterminate(_) => 3,
    };
    let text = match ctx.format {
        Format::Json => to_json(&check),
        _ => match &check {
            WitnessCheck::Accepted(wit) => {
                let factors = wit.trivial_leg.certificate.as_ref().map_or(0, |c| c.len());
                format!(
                    "accepted: `{w}` lies in N_{n} but not N_{}\n  phi^{}(w): Nontrivial ({})\n  phi^{n}(w): Trivial ({}; {factors} certificate factors)",
                    n - 1,
                    n - 1,
                    wit.nontrivial_leg.evidence.as_deref().unwrap_or(""),
                    wit.trivial_leg.evidence.as_deref().unwrap_or(""),
                )
            }
            WitnessCheck::Rejected(why) => format!("rejected: {why}"),
            WitnessCheck::Indeterminate(why) => format!("unknown: {why}"),
        },
    };
    Ok(Outcome::with_code(text, code))
}

fn cmd_scan(ctx: &Ctx, p: &HnnPresentation, len_max: usize, n_max: usize) -> CmdResult {
    let setting = DepthSetting::from_presentation(p)?;
    let found = depth_scan(&setting, len_max, n_max, ctx.exec)?;
    Ok(match ctx.format {
        Format::Json => Outcome::ok(to_json(&found)),
        _ => {
            let mut s = format!("{} witnesses with length <= {len_max} and n <= {n_max}", found.len());
            for w in &found {
                let _ = write!(s, "\nn={} {}", w.n, w.word);
            }
            Outcome::ok(s)
        }
    })
}

fn cmd_probe(ctx: &Ctx, p: &HnnPresentation, samples: usize, seed: u64) -> CmdResult {
    let config = ProbeConfig { samples, seed, ..ProbeConfig::default() };
    let report = chain_inclusion_probe(p, &config, *p.budget(), ctx.exec);
    let code = if report.refuted > 0 {
        1
    } else if report.unknown > 0 {
        3
    } else {
        0
    };
    let text = match ctx.format {
        Format::Json => to_json(&report),
        _ => format!(
            "samples={} confirmed={} unknown={} refuted={} unknown_rate={:.3}",
            report.samples.len(),
            report.confirmed,
            report.unknown,
            report.refuted,
            report.unknown_rate()
        ),
    };
    Ok(Outcome::with_code(text, code))
}

#[derive(Serialize, Deserialize)]
struct HomotopyFile {
    schema: String,
    homotopy: CellularHomotopy,
    levels: LevelCertificate,
}

fn emit_homotopy(ctx: &Ctx, p: &HnnPresentation, h: CellularHomotopy, out: Option<&Path>) -> CmdResult {
    let levels = verify_levels(&h, p)?;
    let file = HomotopyFile { schema: HOMOTOPY_SCHEMA.into(), homotopy: h, levels };
    let json = to_json(&file);
    if let Some(path) = out {
        write_file(path, &json)?;
    }
    let h = &file.homotopy;
    Ok(match (ctx.format, out) {
        (Format::Json, None) => Outcome::ok(json),
        _ => {
            let mut s = format!(
                "verified: {} cells, rows {:?}, cells per row {:?}\n{}",
                h.total_cells(),
                file.levels.rows,
                h.cell_counts(),
                file.levels.properness
            );
            if let Some(path) = out {
                let _ = write!(s, "\nwrote {}", path.display());
            }
            Outcome::ok(s)
        }
    })
}

fn emit_diagram(ctx: &Ctx, result: Trivialization, out: Option<&Path>) -> CmdResult {
    match result {
        Trivialization::Certified(cert, report) => {
            let json = cert.to_json();
            if let Some(path) = out {
                write_file(path, &json)?;
            }
            Ok(match (ctx.format, out) {
                (Format::Json, None) => Outcome::ok(json),
                _ => {
                    let mut s = format!(
                        "verified: {} moves, {} cells, levels [{}, {}], {} vertices checked",
                        report.moves, report.cells, report.min_level, report.max_level, report.vertices_checked
                    );
                    if let Some(path) = out {
                        let _ = write!(s, "\nwrote {}", path.display());
                    }
                    Outcome::ok(s)
                }
            })
        }
        Trivialization::Nontrivial(why) => Err(input_error(format!("not a null-homotopic loop: {why}"))),
        Trivialization::Unknown(why) => Ok(Outcome::with_code(
            match ctx.format {
                Format::Json => to_json(&json!({ "result": "Unknown", "reason": why })),
                _ => format!("unknown: {why}"),
            },
            3,
        )),
    }
}

fn cmd_homotopy(ctx: &Ctx, action: HomotopyCommand) -> CmdResult {
    let p = ctx.p()?;
    let budget = *p.budget();
    match action {
        HomotopyCommand::Push { edge, vertex, rows, out } => {
            let a = Letter::from_char(edge).ok_or_else(|| input_error(format!("`{edge}` is not a letter")))?;
            let h = build_push(&p.parse_word(&vertex)?, a, rows, p)?;
            emit_homotopy(ctx, p, h, out.as_deref())
        }
        HomotopyCommand::String { path, vertex, rows, out } => {
            let h = build_string(&p.parse_word(&vertex)?, &p.parse_word(&path)?, rows, p)?;
            emit_homotopy(ctx, p, h, out.as_deref())
        }
        HomotopyCommand::Corner { path, vertex, interval, rows, out } => {
            let h = build_corner(&p.parse_word(&vertex)?, &p.parse_word(&path)?, interval, rows, p)?;
            emit_homotopy(ctx, p, h, out.as_deref())
        }
        HomotopyCommand::Trivialize { loop_word, vertex, cap, out } => {
            let r = trivialize_bounded(&p.parse_word(&vertex)?, &p.parse_word(&loop_word)?, cap, &budget, p)?;
            emit_diagram(ctx, r, out.as_deref())
        }
        HomotopyCommand::Complement { loop_word, vertex, big_n, big_m, out } => {
            let r = fp_complement_trivialize(&p.parse_word(&vertex)?, &p.parse_word(&loop_word)?, big_n, big_m, &budget, p)?;
            emit_diagram(ctx, r, out.as_deref())
        }
        HomotopyCommand::Verify { file } => cmd_verify(ctx, p, &file),
    }
}

fn cmd_verify(ctx: &Ctx, p: &HnnPresentation, file: &Path) -> CmdResult {
    let text = fs::read_to_string(file).map_err(|e| input_error(format!("cannot read {}: {e}", file.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| input_error(format!("not JSON: {e}")))?;
    let summary = match value.get("schema").and_then(|s| s.as_str()) {
        Some(HOMOTOPY_SCHEMA) => {
            let stored: HomotopyFile = serde_json::from_value(value).map_err(|e| input_error(e.to_string()))?;
            let levels = verify_levels(&stored.homotopy, p)?;
            if levels != stored.levels {
                return Err(Error::Verification("stored level certificate differs from the recomputed one".into()).into());
            }
            json!({ "verified": true, "kind": "homotopy", "cells": stored.homotopy.total_cells(), "rows": levels.rows })
        }
        Some(DIAGRAM_SCHEMA) => {
            let cert = DiagramCertificate::from_json(&text)?;
            let report = replay(&cert, p)?;
            json!({ "verified": true, "kind": "diagram", "report": report })
        }
        other => return Err(input_error(format!("unrecognised certificate schema {other:?}"))),
    };
    Ok(match ctx.format {
        Format::Json => Outcome::ok(to_json(&summary)),
        _ => Outcome::ok(format!("verified {}", file.display())),
    })
}

fn cmd_oracle(ctx: &Ctx, word: &str) -> CmdResult {
    let p = ctx.p()?;
    let w = p.parse_base_word(word)?;
    let verdict = p.base_identity(&w);
    if let Some(cert) = &verdict.certificate {
        let allowed = p.oracle().certificate_relators();
        let depth = p.depth_bound().unwrap_or(0).max(p.budget().i_max);
        let ok = (0..=depth).any(|k| cert.verify(&p.phi().image_k(&w, k), &allowed).is_ok());
        if !ok {
            return Err(Error::Verification("oracle certificate does not check out".into()).into());
        }
    }
    let code = if verdict.value == Verdict::Unknown { 3 } else { 0 };
    let text = match ctx.format {
        Format::Json => to_json(&json!({ "oracle": p.oracle().name(), "word": w, "verdict": verdict })),
        _ => {
            let mut s = format!("{:?}", verdict.value);
            if let Some(e) = &verdict.evidence {
                let _ = write!(s, " ({e})");
            }
            if let Some(c) = &verdict.certificate {
                let _ = write!(s, "\ncertificate: {} factors, verified", c.len());
            }
            s
        }
    };
    Ok(Outcome::with_code(text, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("ahnn: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
