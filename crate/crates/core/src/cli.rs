//! Command-line front end.
//!
//! [`run`] takes the full argument vector and returns the exit status and
//! the rendered streams, so the binary is a thin wrapper and every verb can
//! be tested in-process.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::camonoid::{count_invertible, verify_memory_theorem, CaSpace};
use crate::configs::{alpha_direct, alpha_mobius, enumerate_orbits_with, total_orbits_cf};
use crate::counting::{ac_bounds, ac_enumeration, applicable_formulas};
use crate::genset::{rank_upper_bound, relrank, verify_generation};
use crate::groups::{build_group, enumerate_subgroups_with, group_rank, SubgroupLattice};
use crate::ica::{ca_order, ica_structure};
use crate::{Error, Execution, Limits};

pub const SCHEMA: &str = "ca-algebra/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "ca-algebra", version, about = "Exact invariants of cellular automata over finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Group descriptor: Z<n>, D<n>, Q8, S<n>, A<n>, products joined by `x`,
    /// or file:<path> for a Cayley table.
    group: String,
    /// Alphabet size.
    #[arg(short = 'q', default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=1 << 16))]
    q: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cap on exhaustive enumerations (configurations and automata).
    #[arg(long)]
    max_enum: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Orbits,
    IcaOrder,
    Counting,
    Memory,
    Relrank,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Group order, subgroup lattice and conjugacy classes.
    Info(Common),
    /// Orbit counts per conjugacy class of stabilisers.
    Alpha(Common),
    /// Wreath-product structure and order of the invertible automata.
    Ica(Common),
    /// Number of aperiodic configurations by every applicable method.
    Aperiodic(Common),
    /// Upper and lower bounds on the aperiodic count.
    Bounds(Common),
    /// Class graph and relative rank of the invertible automata.
    Relrank(Common),
    /// Cross-check a formula against brute force.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Scalar fields plus at most one table.
struct Report {
    fields: Vec<(&'static str, Value)>,
    table: Option<Table>,
    ok: bool,
}

struct Table {
    name: &'static str,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Report {
    fn new() -> Self {
        Report {
            fields: Vec::new(),
            table: None,
            ok: true,
        }
    }

    fn field(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    fn table(mut self, name: &'static str, columns: Vec<&'static str>, rows: Vec<Vec<Value>>) -> Self {
        self.table = Some(Table { name, columns, rows });
        self
    }
}

fn s(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_cell(text: String) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("schema".into(), s(SCHEMA));
            for (k, v) in &report.fields {
                obj.insert((*k).into(), v.clone());
            }
            if let Some(t) = &report.table {
                let rows = t
                    .rows
                    .iter()
                    .map(|r| {
                        Value::Object(
                            t.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect(),
                        )
                    })
                    .collect();
                obj.insert(t.name.into(), Value::Array(rows));
            }
            let mut out = serde_json::to_string_pretty(&Value::Object(obj)).expect("json");
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut out = String::new();
            match &report.table {
                Some(t) => {
                    out.push_str(&t.columns.join(","));
                    out.push('\n');
                    for r in &t.rows {
                        let cells: Vec<String> = r.iter().map(|v| csv_cell(scalar(v))).collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
                None => {
                    out.push_str("key,value\n");
                    for (k, v) in &report.fields {
                        let _ = writeln!(out, "{},{}", k, csv_cell(scalar(v)));
                    }
                }
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            let width = report.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &report.fields {
                let _ = writeln!(out, "{k:<width$}  {}", scalar(v));
            }
            if let Some(t) = &report.table {
                if !report.fields.is_empty() {
                    out.push('\n');
                }
                let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(scalar).collect()).collect();
                let widths: Vec<usize> = t
                    .columns
                    .iter()
                    .enumerate()
                    .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap())
                    .collect();
                let line = |items: Vec<&str>| {
                    items
                        .iter()
                        .zip(&widths)
                        .map(|(x, w)| format!("{x:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                let _ = writeln!(out, "{}", line(t.columns.clone()));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
                }
            }
            out
        }
    }
}

struct Ctx {
    lat: SubgroupLattice,
    spec: String,
    q: usize,
    limits: Limits,
}

impl Ctx {
    fn new(common: &Common) -> crate::Result<Self> {
        let mut limits = Limits::from_env();
        if let Some(cap) = common.max_enum {
            limits = limits.with_max_enum(cap);
        }
        let group = build_group(&common.group)?;
        let lat = enumerate_subgroups_with(&group, &limits, Execution::default())?;
        Ok(Ctx {
            lat,
            spec: common.group.clone(),
            q: common.q as usize,
            limits,
        })
    }

    fn header(&self) -> Report {
        Report::new()
            .field("group", self.spec.clone())
            .field("order", s(self.lat.group().order()))
            .field("q", s(self.q))
    }
}

fn info(ctx: &Ctx) -> crate::Result<Report> {
    let lat = &ctx.lat;
    let rank = match group_rank(lat.group(), &ctx.limits) {
        Ok(m) => s(m),
        Err(Error::LimitExceeded { .. }) => Value::Null,
        Err(e) => return Err(e),
    };
    let rows = lat
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            vec![
                s(i),
                s(lat.subgroup(c.rep).order),
                s(c.members.len()),
                s(lat.subgroup(c.normalizer).order),
                Value::Bool(lat.is_normal(c.rep)),
            ]
        })
        .collect();
    Ok(Report::new()
        .field("group", ctx.spec.clone())
        .field("order", s(lat.group().order()))
        .field("abelian", lat.group().is_abelian())
        .field("dedekind", lat.is_dedekind())
        .field("subgroups", s(lat.len()))
        .field("classes", s(lat.classes().len()))
        .field("rank", rank)
        .table("class_table", vec!["class", "order", "conjugates", "normalizer", "normal"], rows))
}

fn alpha(ctx: &Ctx) -> crate::Result<Report> {
    let av = alpha_mobius(&ctx.lat, ctx.q)?;
    let rows = av
        .entries
        .iter()
        .map(|e| {
            vec![
                s(e.class),
                s(ctx.lat.subgroup(ctx.lat.classes()[e.class].rep).order),
                s(&e.alpha),
                s(&e.b_size),
                s(e.orbit_size),
            ]
        })
        .collect();
    Ok(ctx
        .header()
        .field("alpha", Value::Array(av.alphas().iter().map(s).collect()))
        .field("total_orbits", s(av.total_orbits()))
        .table("classes", vec!["class", "stabilizer_order", "alpha", "configurations", "orbit_size"], rows))
}

fn ica(ctx: &Ctx) -> crate::Result<Report> {
    let st = ica_structure(&ctx.lat, ctx.q, &ctx.limits)?;
    let rows = st
        .factors
        .iter()
        .map(|f| {
            Ok(vec![
                s(f.class),
                s(f.quotient_order),
                s(&f.alpha),
                s(f.order(&ctx.limits)?),
            ])
        })
        .collect::<crate::Result<Vec<_>>>()?;
    let ca = match ca_order(ctx.lat.group().order(), ctx.q) {
        Ok(v) => s(v),
        Err(Error::LimitExceeded { .. }) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(ctx
        .header()
        .field("ica_order", s(&st.total_order))
        .field("ca_order", ca)
        .table("factors", vec!["class", "quotient_order", "alpha", "factor_order"], rows))
}

fn aperiodic(ctx: &Ctx) -> crate::Result<Report> {
    let mut counts = applicable_formulas(&ctx.lat, ctx.q)?;
    match ac_enumeration(ctx.lat.group(), ctx.q, &ctx.limits, Execution::default()) {
        Ok(c) => counts.push(c),
        Err(Error::LimitExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    let agree = counts.windows(2).all(|w| w[0].value == w[1].value);
    let rows = counts.iter().map(|c| vec![s(c.method.name()), s(&c.value)]).collect();
    let mut r = ctx
        .header()
        .field("aperiodic", s(&counts[0].value))
        .field("agree", agree)
        .table("methods", vec!["method", "value"], rows);
    r.ok = agree;
    Ok(r)
}

fn bounds(ctx: &Ctx) -> crate::Result<Report> {
    let b = ac_bounds(&ctx.lat, ctx.q)?;
    Ok(ctx
        .header()
        .field("aperiodic", s(&b.ac.value))
        .field("upper", s(&b.upper))
        .field("lower", s(&b.lower_subgroup))
        .field("lower_gjs", s(&b.lower_gjs))
        .field("smallest_prime", s(b.p))
        .field("holds", b.holds())
        .field("upper_tight", b.upper_tight())
        .field("gjs_tight", b.gjs_tight()))
}

fn relrank_report(ctx: &Ctx) -> crate::Result<Report> {
    let r = relrank(&ctx.lat, ctx.q, &ctx.limits)?;
    let upper = match rank_upper_bound(&ctx.lat, &ctx.limits) {
        Ok(v) => s(v),
        Err(Error::NotDedekind) | Err(Error::LimitExceeded { .. }) => Value::Null,
        Err(e) => return Err(e),
    };
    let rows = r
        .generators
        .iter()
        .map(|d| {
            vec![
                s(d.kind.name()),
                s(d.source_class),
                s(d.target_class),
                s(d.source),
                s(d.target),
            ]
        })
        .collect();
    Ok(ctx
        .header()
        .field("vertices", s(r.graph.vertices))
        .field("edges", s(r.graph.edge_count()))
        .field("index2", s(r.graph.index2_count))
        .field("lower_bound", s(r.lower_bound))
        .field("exact", r.is_exact)
        .field("rank_upper_bound", upper)
        .table("generators", vec!["kind", "source_class", "target_class", "source", "target"], rows))
}

fn verify(ctx: &Ctx, suite: Suite) -> crate::Result<Report> {
    let (name, expected, actual) = match suite {
        Suite::Orbits => {
            let table = enumerate_orbits_with(&ctx.lat, ctx.q, &ctx.limits, Execution::default())?;
            let direct = alpha_direct(&ctx.lat, &table);
            let formula = alpha_mobius(&ctx.lat, ctx.q)?;
            let cf = total_orbits_cf(ctx.lat.group(), ctx.q)?;
            let same_alpha = direct.alphas() == formula.alphas();
            let r = ctx
                .header()
                .field("orbits", s(table.len()))
                .field("cauchy_frobenius", s(&cf))
                .field("alpha_formula", Value::Array(formula.alphas().iter().map(s).collect()))
                .field("alpha_scan", Value::Array(direct.alphas().iter().map(s).collect()));
            let ok = same_alpha && cf == table.len().into();
            return Ok(Report { ok, ..r.field("result", if ok { "pass" } else { "FAIL" }) });
        }
        Suite::IcaOrder => {
            let st = ica_structure(&ctx.lat, ctx.q, &ctx.limits)?;
            let space = CaSpace::new(ctx.lat.group(), ctx.q, &ctx.limits)?;
            let brute = count_invertible(&space, &ctx.limits, Execution::default())?;
            ("ica_order", st.total_order.to_string(), brute.to_string())
        }
        Suite::Counting => {
            let formulas = applicable_formulas(&ctx.lat, ctx.q)?;
            let scan = ac_enumeration(ctx.lat.group(), ctx.q, &ctx.limits, Execution::default())?;
            let rows = formulas.iter().map(|c| vec![s(c.method.name()), s(&c.value)]).collect();
            let ok = formulas.iter().all(|c| c.value == scan.value);
            let r = ctx
                .header()
                .field("enumeration", s(&scan.value))
                .field("result", if ok { "pass" } else { "FAIL" })
                .table("methods", vec!["method", "value"], rows);
            return Ok(Report { ok, ..r });
        }
        Suite::Memory => {
            let space = CaSpace::new(ctx.lat.group(), ctx.q, &ctx.limits)?;
            let m = verify_memory_theorem(&space, &ctx.limits)?;
            let ok = m.confirmed();
            let r = ctx
                .header()
                .field("small_memory", s(m.small_memory))
                .field("closure", s(m.closure_size))
                .field("ca_order", s(m.ca_count))
                .field("contains_zero_to_one", m.contains_zero_to_one)
                .field("result", if ok { "pass" } else { "FAIL" });
            return Ok(Report { ok, ..r });
        }
        Suite::Relrank => {
            let g = verify_generation(&ctx.lat, ctx.q, &ctx.limits)?;
            let ok = g.confirmed();
            let r = ctx
                .header()
                .field("units", s(g.units))
                .field("v", s(g.v_size))
                .field("closure", s(g.closure_size))
                .field("ca_order", s(g.ca_count))
                .field("irredundant", g.irredundant.iter().all(|&b| b))
                .field("result", if ok { "pass" } else { "FAIL" });
            return Ok(Report { ok, ..r });
        }
    };
    let ok = expected == actual;
    let r = ctx
        .header()
        .field("check", name)
        .field("formula", s(&expected))
        .field("brute_force", s(&actual))
        .field(
            "result",
            format!("{expected} {} {actual}", if ok { "=" } else { "!=" }),
        );
    Ok(Report { ok, ..r })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LimitExceeded { .. } | Error::CapExceeded { .. } => EXIT_LIMIT,
        Error::Internal(_) => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

type Job = Box<dyn Fn(&Ctx) -> crate::Result<Report>>;

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let (common, job): (&Common, Job) = match &cli.command {
        Verb::Info(c) => (c, Box::new(info)),
        Verb::Alpha(c) => (c, Box::new(alpha)),
        Verb::Ica(c) => (c, Box::new(ica)),
        Verb::Aperiodic(c) => (c, Box::new(aperiodic)),
        Verb::Bounds(c) => (c, Box::new(bounds)),
        Verb::Relrank(c) => (c, Box::new(relrank_report)),
        Verb::Verify { suite, common } => {
            let suite = *suite;
            (common, Box::new(move |ctx: &Ctx| verify(ctx, suite)))
        }
    };
    match Ctx::new(common).and_then(|ctx| job(&ctx)) {
        Ok(report) => Outcome {
            code: if report.ok { EXIT_OK } else { EXIT_MISMATCH },
            stdout: render(&report, common.format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Re-renders a JSON document the way [`run`] prints it.
pub fn rerender_json(text: &str) -> serde_json::Result<String> {
    let v: Value = serde_json::from_str(text)?;
    let mut out = serde_json::to_string_pretty(&v)?;
    out.push('\n');
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn go(args: &str) -> Outcome {
        run(std::iter::once("ca-algebra").chain(args.split_whitespace()))
    }

    #[test]
    fn alpha_json() {
        let o = go("alpha Z2xZ2 -q 2 --format json");
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["alpha"], json!(["2", "1", "1", "1", "2"]));
        assert_eq!(rerender_json(&o.stdout).unwrap(), o.stdout);
    }

    #[test]
    fn ica_table() {
        let o = go("ica Z2xZ2 -q 2");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("ica_order  512"), "{}", o.stdout);
    }

    #[test]
    fn verify_ica_order() {
        let o = go("verify ica-order Z3 -q 2");
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("36 = 36"));
    }

    #[test]
    fn csv_rows() {
        let o = go("alpha Z3 -q 2 --format csv");
        assert_eq!(o.stdout, "class,stabilizer_order,alpha,configurations,orbit_size\n0,3,2,2,1\n1,1,2,6,3\n");
        let o = go("bounds Z3 --format csv");
        assert!(o.stdout.starts_with("key,value\ngroup,Z3\n"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go("frobnicate Z2").code, EXIT_USAGE);
        assert_eq!(go("alpha Z2 -q 1").code, EXIT_USAGE);
        assert_eq!(go("alpha Z0").code, EXIT_INVALID);
        assert_eq!(go("alpha Y7").code, EXIT_INVALID);
        assert_eq!(go("verify ica-order Z2xZ2 -q 3").code, EXIT_LIMIT);
        assert_eq!(go("verify relrank S3").code, EXIT_INVALID);
        assert_eq!(go("verify orbits Z4 --max-enum 8").code, EXIT_LIMIT);
        assert_eq!(go("--help").code, EXIT_OK);
    }
}
