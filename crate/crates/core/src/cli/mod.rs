//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 no applicable theorem or
//! failed hypothesis, 3 oracle disagreement.

mod parse;

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::thread;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::assembly::{evaluate, AssemblyError, Query, QueryOptions, ResultRow, TheoremId, Theory};
use crate::formal::{render, Card, Decoration, Format, RingSpec};
use crate::groupcat::{ActionAnalysis, GroupDesc};
use crate::oracles::{run_suite, OracleReport, SuiteConfig, DEFAULT_BOUND};

pub use parse::{parse_family, parse_group, parse_range, parse_ring};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_THEOREM: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

/// Environment variable overriding the coset-enumeration cap.
pub const ORACLE_BOUND_VAR: &str = "KLA_ORACLE_BOUND";

const COMPUTE_SCHEMA: &str = "kla.compute/1";
const ANALYZE_SCHEMA: &str = "kla.analyze/1";
const TABLE_SCHEMA: &str = "kla.table/1";
const ORACLE_SCHEMA: &str = "kla.oracle/1";

#[derive(Debug, Parser)]
#[command(name = "kla", version, about = "K- and L-theory of group rings in closed form")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one group over a range of degrees.
    Compute(ComputeArgs),
    /// Report the invariants of a Z/p action on Z^d.
    Analyze(AnalyzeArgs),
    /// Evaluate a one-parameter family of groups.
    Table(TableArgs),
    /// Cross-check the engine against the independent oracles.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Ring preset (Z, regular, regularQ, dedekind0, generic) or ring file.
    #[arg(long, default_value = "generic")]
    ring: String,
    /// K, Wh, L or Sper.
    #[arg(long)]
    theory: Theory,
    /// s, h, p, <j> or <-oo>; defaults to <-oo> for L and Sper.
    #[arg(long, allow_hyphen_values = true)]
    decoration: Option<Decoration>,
    /// Degree N or inclusive range A..B.
    #[arg(long = "n", default_value = "0", allow_hyphen_values = true)]
    degrees: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Invert 2, dropping UNil terms.
    #[arg(long)]
    localize2: bool,
    /// Use the closed form for structure sets of Z/p over Z.
    #[arg(long)]
    structure_set_preset: bool,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    /// Shorthand (zd:3, free:2, surface:2, tfhyp:1,4,1, hyp:micy=omega,
    /// prod:2:Z/3, crystZp:{..}), inline JSON, or @file.
    #[arg(long)]
    group: String,
    /// Cardinality of J for a crystZp group, e.g. for a non-split extension.
    #[arg(long)]
    jcard: Option<Card>,
    #[command(flatten)]
    query: QueryArgs,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    jcard: Option<Card>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct TableArgs {
    /// KIND:A..B with KIND one of zd, free, surface.
    #[arg(long)]
    family: String,
    #[command(flatten)]
    query: QueryArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run a reduced instance count.
    #[arg(long)]
    quick: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// A failure carrying its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<AssemblyError> for Failure {
    fn from(e: AssemblyError) -> Self {
        Failure {
            code: if e.is_hypothesis_failure() { EXIT_NO_THEOREM } else { EXIT_USAGE },
            message: e.to_string(),
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing to the given
/// streams, and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => run_compute(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Table(a) => run_table(a),
        Command::Oracle(a) => run_oracle(a),
    };
    match result {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

struct Common {
    ring: RingSpec,
    theory: Theory,
    decoration: Option<Decoration>,
    degrees: RangeInclusive<i64>,
    options: QueryOptions,
    format: Format,
}

fn common(a: QueryArgs) -> Result<Common, Failure> {
    let ring = parse_ring(&a.ring).map_err(Failure::usage)?;
    let degrees = parse_range(&a.degrees).map_err(Failure::usage)?;
    if a.decoration.is_some() && !a.theory.takes_decoration() {
        return Err(Failure::usage(format!("theory {} takes no decoration", a.theory)));
    }
    Ok(Common {
        ring,
        theory: a.theory,
        decoration: a.decoration,
        degrees,
        options: QueryOptions {
            localize2: a.localize2,
            structure_set_preset: a.structure_set_preset,
        },
        format: a.format,
    })
}

fn build_query(group: GroupDesc, c: &Common) -> Query {
    let mut q = Query::new(group, c.ring.clone(), c.theory, c.degrees.clone()).with_options(c.options);
    if let Some(d) = c.decoration {
        q = q.with_decoration(d);
    }
    q
}

fn apply_jcard(group: GroupDesc, jcard: Option<Card>) -> Result<GroupDesc, Failure> {
    match (group, jcard) {
        (g, None) => Ok(g),
        (GroupDesc::CrystZp { d, p, rho, split, .. }, Some(j)) => Ok(GroupDesc::CrystZp {
            d,
            p,
            rho,
            split,
            j_card: Some(j),
        }),
        (g, Some(_)) => Err(Failure::usage(format!("--jcard applies only to crystZp groups, not {}", g.kind()))),
    }
}

fn group_arg(s: &str, jcard: Option<Card>) -> Result<GroupDesc, Failure> {
    apply_jcard(parse_group(s).map_err(Failure::usage)?, jcard)
}

fn label(theory: Theory, decoration: Option<Decoration>, group: &str, ring: &RingSpec) -> String {
    let deco = match (theory.takes_decoration(), decoration) {
        (true, Some(d)) => format!("^{d}"),
        (true, None) => "^<-oo>".into(),
        (false, _) => String::new(),
    };
    match theory {
        Theory::K | Theory::L => format!("{theory}{deco}_n({}[{group}])", ring.name()),
        Theory::Wh | Theory::Sper => format!("{theory}{deco}_n({group};{})", ring.name()),
    }
}

fn query_json(q: &Query) -> Value {
    json!({
        "group": q.group,
        "ring": q.ring,
        "theory": q.theory,
        "decoration": q.decoration.map(|d| d.to_string()),
        "degrees": {"from": q.degrees.start(), "to": q.degrees.end()},
        "options": q.options,
    })
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn provenance_text(out: &mut String, row: &ResultRow, indent: &str) {
    let p = &row.provenance;
    let _ = writeln!(out, "{indent}theorem: {} ({})", p.theorem, p.statement);
    for h in &p.hypotheses {
        let status = if h.satisfied {
            if h.via.is_empty() {
                "holds".to_string()
            } else {
                let via: Vec<&str> = h.via.iter().map(|a| a.name()).collect();
                format!("holds via {}", via.join(", "))
            }
        } else {
            "assumed".to_string()
        };
        let _ = writeln!(out, "{indent}hypothesis: {} [{status}]", h.name);
    }
    if !p.rules.is_empty() {
        let rules: Vec<String> = p.rules.iter().map(|r| serde_json::to_value(r).expect("rule").as_str().unwrap_or_default().to_string()).collect();
        let _ = writeln!(out, "{indent}rules: {}", rules.join(", "));
    }
    for n in &p.notes {
        let _ = writeln!(out, "{indent}note: {n}");
    }
}

fn latex_escape(s: &str) -> String {
    s.replace('_', "\\_").replace('^', "\\^{}").replace('<', "$<$").replace('>', "$>$")
}

fn run_compute(a: ComputeArgs) -> Result<(String, i32), Failure> {
    let group = group_arg(&a.group, a.jcard)?;
    let c = common(a.query)?;
    let q = build_query(group, &c);
    let rows = evaluate(&q)?;
    let title = label(c.theory, q.decoration, &q.group.to_string(), &c.ring);
    let mut out = String::new();
    match c.format {
        Format::Text => {
            let _ = writeln!(out, "{title}");
            for row in &rows {
                let mark = if row.provenance.conditional { " (conditional)" } else { "" };
                let _ = writeln!(out, "n = {}: {}{mark}", row.degree, render(&row.expr, Format::Text));
                provenance_text(&mut out, row, "    ");
            }
        }
        Format::Latex => {
            let _ = writeln!(out, "% {}", title);
            out.push_str("\\begin{tabular}{r|l}\n$n$ & value \\\\ \\hline\n");
            for row in &rows {
                let _ = writeln!(out, "{} & ${}$ \\\\", row.degree, render(&row.expr, Format::Latex));
                let _ = writeln!(out, "% theorem: {}", row.provenance.theorem);
                for h in &row.provenance.hypotheses {
                    let _ = writeln!(out, "% hypothesis: {} [{}]", latex_escape(&h.name), if h.satisfied { "holds" } else { "assumed" });
                }
                for n in &row.provenance.notes {
                    let _ = writeln!(out, "% note: {n}");
                }
            }
            out.push_str("\\end{tabular}\n");
        }
        Format::Json => {
            out = to_json_text(&json!({
                "schema": COMPUTE_SCHEMA,
                "query": query_json(&q),
                "rows": rows,
            }));
        }
    }
    Ok((out, EXIT_OK))
}

/// Theorems whose group-theoretic hypotheses the action satisfies.
pub fn applicable_theorems(a: &ActionAnalysis) -> Vec<(TheoremId, &'static str)> {
    let mut out = Vec::new();
    if a.free_away_from_zero {
        out.push((TheoremId::FreeActionK, "Wh, any ring"));
        out.push((TheoremId::FreeActionL, "Sper^<-oo>, R Dedekind of characteristic 0 or regular containing Q"));
    }
    out.push((TheoremId::CyclicPrimeK, "Wh, R regular"));
    if a.p % 2 == 1 {
        out.push((TheoremId::OddPrimeL, "Sper^<-oo>"));
        out.push((TheoremId::OddPrimeLIntegral, "Sper with decoration, R = Z"));
    }
    out
}

fn card_text(c: &Option<Card>) -> String {
    c.as_ref().map_or_else(|| "unknown".to_string(), Card::to_string)
}

fn run_analyze(a: AnalyzeArgs) -> Result<(String, i32), Failure> {
    let group = group_arg(&a.group, a.jcard)?;
    let analysis = group.analysis().map_err(|e| Failure::usage(e.to_string()))?;
    let theorems = applicable_theorems(&analysis);
    let out = match a.format {
        Format::Json => to_json_text(&json!({
            "schema": ANALYZE_SCHEMA,
            "group": group,
            "analysis": analysis,
            "h1Order": analysis.h1.order().to_string(),
            "theorems": theorems.iter().map(|(t, _)| t.id()).collect::<Vec<_>>(),
        })),
        Format::Text | Format::Latex => {
            let mut s = String::new();
            let a = &analysis;
            let _ = writeln!(s, "group: {group}");
            let _ = writeln!(s, "d = {}", a.d);
            let _ = writeln!(s, "p = {}", a.p);
            let _ = writeln!(s, "e = {}", a.e);
            let _ = writeln!(s, "free away from 0: {}", if a.free_away_from_zero { "yes" } else { "no" });
            let _ = writeln!(s, "H^1 = {} (order {})", a.h1, a.h1.order());
            let _ = writeln!(s, "|J| = {}", card_text(&a.j_card));
            let _ = writeln!(s, "|M^Z/p| = {}", a.micy_fixed_card);
            let _ = writeln!(s, "|I1| = {}", card_text(&a.i1_card));
            let _ = writeln!(s, "|I2| = {}", card_text(&a.i2_card));
            let _ = writeln!(s, "|J_C| = {}", a.jc_size.as_ref().map_or_else(|| "n/a".to_string(), Card::to_string));
            for (t, scope) in &theorems {
                let _ = writeln!(s, "applies: {t} ({scope})");
            }
            s
        }
    };
    Ok((out, EXIT_OK))
}

type Cell = Result<ResultRow, AssemblyError>;

fn evaluate_column(q: &Query) -> Vec<Cell> {
    match evaluate(q) {
        Ok(rows) => rows.into_iter().map(Ok).collect(),
        Err(e) => q.degrees.clone().map(|_| Err(e.clone())).collect(),
    }
}

fn run_table(a: TableArgs) -> Result<(String, i32), Failure> {
    let family = parse_family(&a.family).map_err(Failure::usage)?;
    let c = common(a.query)?;
    let queries: Vec<Query> = family.iter().map(|(_, g)| build_query(g.clone(), &c)).collect();
    if let Some(q) = queries.first() {
        q.validate()?;
    }
    let columns: Vec<Vec<Cell>> = thread::scope(|s| {
        let handles: Vec<_> = queries.iter().map(|q| s.spawn(move || evaluate_column(q))).collect();
        handles.into_iter().map(|h| h.join().expect("table worker")).collect()
    });
    let labels: Vec<&str> = family.iter().map(|(l, _)| l.as_str()).collect();
    let degrees: Vec<i64> = if labels.is_empty() { Vec::new() } else { c.degrees.clone().collect() };
    let cell_text = |cell: &Cell, f: Format| match cell {
        Ok(row) => render(&row.expr, f),
        Err(_) => "ERR".to_string(),
    };

    let mut out = String::new();
    match c.format {
        Format::Json => {
            let rows: Vec<Value> = degrees
                .iter()
                .enumerate()
                .map(|(i, n)| {
                    let cells: Vec<Value> = columns
                        .iter()
                        .map(|col| match &col[i] {
                            Ok(row) => json!({"expr": row.expr, "provenance": row.provenance}),
                            Err(e) => json!({"error": e.to_string()}),
                        })
                        .collect();
                    json!({"degree": n, "cells": cells})
                })
                .collect();
            out = to_json_text(&json!({
                "schema": TABLE_SCHEMA,
                "family": a.family,
                "ring": c.ring,
                "theory": c.theory,
                "decoration": c.decoration.map(|d| d.to_string()),
                "columns": labels,
                "rows": rows,
            }));
        }
        Format::Latex => {
            let _ = writeln!(out, "\\begin{{tabular}}{{r|{}}}", "l".repeat(labels.len()));
            let _ = writeln!(out, "$n${} \\\\ \\hline", labels.iter().map(|l| format!(" & \\texttt{{{l}}}")).collect::<String>());
            for (i, n) in degrees.iter().enumerate() {
                let cells: String = columns
                    .iter()
                    .map(|col| match &col[i] {
                        Ok(_) => format!(" & ${}$", cell_text(&col[i], Format::Latex)),
                        Err(_) => " & ERR".to_string(),
                    })
                    .collect();
                let _ = writeln!(out, "{n}{cells} \\\\");
            }
            out.push_str("\\end{tabular}\n");
        }
        Format::Text => {
            let mut grid: Vec<Vec<String>> = vec![std::iter::once("n".to_string()).chain(labels.iter().map(|l| l.to_string())).collect()];
            for (i, n) in degrees.iter().enumerate() {
                grid.push(std::iter::once(n.to_string()).chain(columns.iter().map(|col| cell_text(&col[i], Format::Text))).collect());
            }
            let widths: Vec<usize> = (0..grid[0].len())
                .map(|j| grid.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            for r in &grid {
                let line: Vec<String> = r.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
                let _ = writeln!(out, "{}", line.join(" | ").trim_end());
            }
            for (label, col) in labels.iter().zip(&columns) {
                match col.iter().find_map(|c| c.as_ref().ok()) {
                    Some(row) => {
                        let _ = writeln!(out, "{label}: {}", row.provenance.theorem);
                    }
                    None => {
                        if let Some(Err(e)) = col.first() {
                            let _ = writeln!(out, "{label}: ERR {e}");
                        }
                    }
                }
            }
        }
    }
    Ok((out, EXIT_OK))
}

fn oracle_bound() -> Result<u64, Failure> {
    match std::env::var(ORACLE_BOUND_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{ORACLE_BOUND_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

fn family_of(r: &OracleReport) -> &str {
    r.name.split('/').next().unwrap_or(&r.name)
}

fn run_oracle(a: OracleArgs) -> Result<(String, i32), Failure> {
    let cfg = SuiteConfig {
        seed: a.seed,
        quick: a.quick,
        inject_fault: a.inject_fault,
        bound: oracle_bound()?,
    };
    let reports = run_suite(&cfg);
    let failed: Vec<&OracleReport> = reports.iter().filter(|r| !r.agree).collect();
    let code = if failed.is_empty() { EXIT_OK } else { EXIT_DISAGREEMENT };
    let out = match a.format {
        Format::Json => to_json_text(&json!({
            "schema": ORACLE_SCHEMA,
            "seed": cfg.seed,
            "quick": cfg.quick,
            "bound": cfg.bound,
            "agree": failed.is_empty(),
            "reports": reports,
        })),
        Format::Text | Format::Latex => {
            let mut s = String::new();
            let mut families: Vec<(&str, usize, usize)> = Vec::new();
            for r in &reports {
                let f = family_of(r);
                match families.iter_mut().find(|(name, _, _)| *name == f) {
                    Some(entry) => {
                        entry.1 += 1;
                        entry.2 += usize::from(r.agree);
                    }
                    None => families.push((f, 1, usize::from(r.agree))),
                }
            }
            let _ = writeln!(s, "seed {}{}", cfg.seed, if cfg.quick { " (quick)" } else { "" });
            for (f, total, ok) in &families {
                let _ = writeln!(s, "{f}: {ok}/{total} agree");
            }
            for r in &failed {
                let _ = writeln!(s, "DISAGREE {}: main {} oracle {}", r.name, r.main_value, r.oracle_value);
            }
            let _ = writeln!(s, "{} of {} checks agree", reports.len() - failed.len(), reports.len());
            s
        }
    };
    Ok((out, code))
}
