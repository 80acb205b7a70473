//! Command-line front end. Every subcommand parses its arguments, calls into
//! the library and formats the result; nothing here computes.
//!
//! Precedence for shared settings is flag, then `PIL_*` environment variable,
//! then built-in default. Exit status: 0 success, 1 verification failure,
//! 2 usage or input error.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bijection;
use crate::counting::{self, CountTable, Family, Query};
use crate::error::{Error, Result};
use crate::partition::{parse_partition, Partition};
use crate::qseries::GfName;
use crate::verify::{self, CheckName, Grid, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "pil", version, about = "Exact counting, q-series and bijections for generalized Franklin identities")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Largest n in verification grids
    #[arg(long, global = true, env = "PIL_NMAX")]
    pub nmax: Option<u64>,
    /// Largest j in verification grids
    #[arg(long, global = true, env = "PIL_JMAX")]
    pub jmax: Option<u64>,
    /// Values of k, comma separated
    #[arg(long, alias = "k", global = true, env = "PIL_KSET", value_delimiter = ',')]
    pub kset: Option<Vec<u64>>,
    /// Values of b, comma separated
    #[arg(long, alias = "b", global = true, env = "PIL_BSET", value_delimiter = ',')]
    pub bset: Option<Vec<u64>>,
    /// Series truncation order
    #[arg(long, global = true, env = "PIL_TRUNC", value_parser = clap::value_parser!(u64).range(1..))]
    pub trunc: Option<u64>,
    /// Output format; verify defaults to json, everything else to text
    #[arg(long, global = true, env = "PIL_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// CSV file of previously computed counts, read and extended by `count`
    #[arg(long, global = true, env = "PIL_CACHE")]
    pub cache: Option<PathBuf>,
    /// Leave elapsed_ms out of verify reports so output is byte-stable
    #[arg(long, global = true, env = "PIL_NO_TIMING")]
    pub no_timing: bool,
}

pub const DEFAULT_TRUNC: u64 = 40;

impl Config {
    pub fn trunc(&self) -> u64 {
        self.trunc.unwrap_or(DEFAULT_TRUNC)
    }

    fn format_or(&self, fallback: Format) -> Format {
        self.format.unwrap_or(fallback)
    }

    /// `base` with every bound given on the command line replaced.
    pub fn grid(&self, base: Grid) -> Grid {
        Grid {
            nmax: self.nmax.unwrap_or(base.nmax),
            jmax: self.jmax.unwrap_or(base.jmax),
            kset: self.kset.clone().unwrap_or(base.kset),
            bset: self.bset.clone().unwrap_or(base.bset),
            trunc: self.trunc.map(|t| t as usize).unwrap_or(base.trunc),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count partitions in a family, e.g. `count O 1 2 1 5`
    Count(CountArgs),
    /// Apply phi or psi to a partition, e.g. `map psi "4^5 6 12^7" 2 6`
    Map(MapArgs),
    /// Print the n=29, (j,k,b)=(3,2,2) correspondence table
    Table29,
    /// Dump a truncated series or one coefficient, e.g. `gf O 2 1 10 --coeff 0 - 5`
    Gf(GfArgs),
    /// Run a named check (or `all`) and print its report
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// O, D, O_m, D_m, O_t, D_t, Dbar, O1u, D1u, Ocum or Dcum
    pub family: String,
    pub j: u64,
    pub k: u64,
    pub b: u64,
    /// Size; omit when --range is given
    pub n: Option<u64>,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Multiplicity class for O1u and D1u
    #[arg(long)]
    pub u: Option<u64>,
    /// Inclusive range of sizes, `n0..n1`
    #[arg(long, value_parser = parse_range)]
    pub range: Option<RangeInclusive<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Phi,
    Psi,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(value_enum)]
    pub direction: Direction,
    /// Partition text, e.g. "1^2 3" or "3+1+1"
    #[arg(allow_hyphen_values = true)]
    pub partition: String,
    pub k: u64,
    pub b: u64,
}

#[derive(Debug, Args)]
pub struct GfArgs {
    /// O, D, jO, O_w, D_w, O_t, O_0, D_t or Dbar
    pub name: String,
    /// `k b N`, or `k b t N` for O_t and D_t
    #[arg(num_args = 3..=4, required = true)]
    pub numbers: Vec<u64>,
    /// Single coefficient `j m n`; `-` for m sums over m
    #[arg(long, num_args = 3, value_names = ["J", "M", "N"], allow_hyphen_values = true)]
    pub coeff: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A check name or `all`
    pub check: String,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected n0..n1, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: u64 = a.trim().parse().map_err(|_| format!("bad range start `{a}`"))?;
    let hi: u64 = b.trim().parse().map_err(|_| format!("bad range end `{b}`"))?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

/// Parses `args` (including the program name) and runs the command, writing
/// to `out` and `err`. Returns the process exit status.
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
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(&cli, &mut buf);
    let _ = out.write_all(&buf);
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut Vec<u8>) -> Result<i32> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Count(a) => cmd_count(cfg, a, out),
        Command::Map(a) => cmd_map(cfg, a, out),
        Command::Table29 => cmd_table29(cfg, out),
        Command::Gf(a) => cmd_gf(cfg, a, out),
        Command::Verify(a) => cmd_verify(cfg, a, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn query_for(a: &CountArgs, n: u64) -> Result<Query> {
    let family: Family = a.family.parse()?;
    let m = match (family, a.u, a.m) {
        (Family::O1u | Family::D1u, Some(_), Some(_)) => {
            return Err(Error::arg("give either --u or --m, not both"));
        }
        (Family::O1u | Family::D1u, u, m) => u.or(m),
        (_, Some(_), _) => return Err(Error::arg(format!("family {family} does not take --u"))),
        (_, None, m) => m,
    };
    let q = Query {
        family,
        j: a.j,
        k: a.k,
        b: a.b,
        t: a.t,
        m,
        n,
    };
    q.validate()?;
    Ok(q)
}

pub fn cmd_count(cfg: &Config, a: &CountArgs, out: &mut Vec<u8>) -> Result<i32> {
    let sizes: Vec<u64> = match (&a.range, a.n) {
        (Some(_), Some(_)) => return Err(Error::arg("give either n or --range, not both")),
        (Some(r), None) => r.clone().collect(),
        (None, Some(n)) => vec![n],
        (None, None) => return Err(Error::arg("missing n (or --range n0..n1)")),
    };
    let mut table = match &cfg.cache {
        Some(path) if path.exists() => CountTable::load(path)?,
        _ => CountTable::new(),
    };
    let mut rows = Vec::with_capacity(sizes.len());
    for n in sizes {
        let q = query_for(a, n)?;
        rows.push((q, table.get_or_compute(&q)?.value));
    }
    if let Some(path) = &cfg.cache {
        table.save(path)?;
    }

    let single = a.range.is_none();
    match cfg.format_or(Format::Text) {
        Format::Text if single => writeln!(out, "{}", rows[0].1).map_err(io)?,
        Format::Text => {
            let width = rows.iter().map(|(q, _)| q.n.to_string().len()).max().unwrap_or(1).max(1);
            for (q, v) in &rows {
                writeln!(out, "{:>width$}  {v}", q.n).map_err(io)?;
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(q, v)| {
                    json!({"family": q.family.name(), "j": q.j, "k": q.k, "b": q.b,
                           "t": q.t, "m": q.m, "n": q.n, "value": v})
                })
                .collect();
            let value = if single { items[0].clone() } else { json!(items) };
            writeln!(out, "{value}").map_err(io)?;
        }
        Format::Csv => {
            let mut t = CountTable::new();
            for (q, v) in &rows {
                t.insert(
                    *q,
                    counting::CountRow {
                        value: *v,
                        provenance: counting::Provenance::Enumeration,
                    },
                );
            }
            t.write_csv(&mut *out)?;
        }
    }
    Ok(EXIT_OK)
}

struct Side<'a> {
    partition: &'a Partition,
    j_o: u64,
    j_d: u64,
}

impl<'a> Side<'a> {
    fn new(partition: &'a Partition, k: u64, b: u64) -> Self {
        Self {
            partition,
            j_o: counting::o_index(partition, k, b),
            j_d: counting::d_index(partition, k, b),
        }
    }
}

pub fn cmd_map(cfg: &Config, a: &MapArgs, out: &mut Vec<u8>) -> Result<i32> {
    let input = parse_partition(&a.partition)?;
    let (image, from, to) = match a.direction {
        Direction::Phi => (bijection::phi(&input, a.k, a.b)?, "O", "D"),
        Direction::Psi => (bijection::psi(&input, a.k, a.b)?, "D", "O"),
    };
    let src = Side::new(&input, a.k, a.b);
    let dst = Side::new(&image, a.k, a.b);
    let (j_src, j_dst) = match a.direction {
        Direction::Phi => (src.j_o, dst.j_d),
        Direction::Psi => (src.j_d, dst.j_o),
    };
    let n = input.weight();
    match cfg.format_or(Format::Text) {
        Format::Text => {
            writeln!(out, "{image}").map_err(io)?;
            writeln!(out, "source {from}: j={j_src} k={} b={} n={n}", a.k, a.b).map_err(io)?;
            writeln!(out, "image  {to}: j={j_dst} k={} b={} n={}", a.k, a.b, image.weight()).map_err(io)?;
        }
        Format::Json => {
            let v = json!({
                "direction": match a.direction { Direction::Phi => "phi", Direction::Psi => "psi" },
                "k": a.k, "b": a.b,
                "input": src.partition.to_string(), "image": dst.partition.to_string(),
                "source": {"family": from, "j": j_src, "n": n},
                "target": {"family": to, "j": j_dst, "n": image.weight()},
            });
            writeln!(out, "{v}").map_err(io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["input", "image", "k", "b", "n", "j_source", "j_image"]).map_err(csv_io)?;
            w.write_record([
                input.to_string(),
                image.to_string(),
                a.k.to_string(),
                a.b.to_string(),
                n.to_string(),
                j_src.to_string(),
                j_dst.to_string(),
            ])
            .map_err(csv_io)?;
            w.flush().map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Rows `(O-side, D-side)` of the n=29, j=3, k=2, b=2 correspondence, in
/// enumeration order of the O-side.
pub fn table29_rows() -> Result<Vec<(Partition, Partition)>> {
    let (j, k, b, n) = (3, 2, 2, 29);
    counting::o_set(j, k, b, n)?
        .into_iter()
        .map(|pi| {
            let image = bijection::phi(&pi, k, b)?;
            Ok((pi, image))
        })
        .collect()
}

pub fn cmd_table29(cfg: &Config, out: &mut Vec<u8>) -> Result<i32> {
    let rows = table29_rows()?;
    match cfg.format_or(Format::Text) {
        Format::Text => {
            for (o, d) in &rows {
                writeln!(out, "{} <-> {}", o.to_full_exponent_string(), d.to_full_exponent_string()).map_err(io)?;
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(o, d)| json!({"o": o.to_full_exponent_string(), "d": d.to_full_exponent_string()}))
                .collect();
            writeln!(out, "{}", json!(items)).map_err(io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["o", "d"]).map_err(csv_io)?;
            for (o, d) in &rows {
                w.write_record([o.to_full_exponent_string(), d.to_full_exponent_string()]).map_err(csv_io)?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn parse_index(s: &str, what: &str) -> Result<u32> {
    s.parse().map_err(|_| Error::arg(format!("bad {what} index `{s}`")))
}

pub fn cmd_gf(cfg: &Config, a: &GfArgs, out: &mut Vec<u8>) -> Result<i32> {
    let name: GfName = a.name.parse()?;
    let (k, b, t, order) = match (name.needs_t(), a.numbers.as_slice()) {
        (false, &[k, b, n]) => (k, b, None, n),
        (true, &[k, b, t, n]) => (k, b, Some(t), n),
        (false, _) => return Err(Error::arg(format!("series {name} takes `k b N`"))),
        (true, _) => return Err(Error::arg(format!("series {name} takes `k b t N`"))),
    };
    let order = usize::try_from(order).map_err(|_| Error::Overflow("truncation order"))?;
    let series = name.build(k, b, t, order)?;

    if let Some(c) = &a.coeff {
        let j = parse_index(&c[0], "j")?;
        let n = parse_index(&c[2], "n")? as usize;
        if n > order {
            return Err(Error::arg(format!("q^{n} is beyond truncation order {order}")));
        }
        let value = match c[1].as_str() {
            "-" => series.coeff_zq(j, n)?,
            m => series.coeff_zwq(j, parse_index(m, "m")?, n)?,
        };
        match cfg.format_or(Format::Text) {
            Format::Text => writeln!(out, "{value}").map_err(io)?,
            Format::Json => writeln!(
                out,
                "{}",
                json!({"series": name.name(), "k": k, "b": b, "t": t, "order": order,
                       "j": j, "m": if c[1] == "-" { None } else { Some(&c[1]) }, "n": n, "value": value})
            )
            .map_err(io)?,
            Format::Csv => {
                writeln!(out, "series,k,b,t,order,j,m,n,value").map_err(io)?;
                let t = t.map(|t| t.to_string()).unwrap_or_default();
                let m = if c[1] == "-" { "" } else { &c[1] };
                writeln!(out, "{name},{k},{b},{t},{order},{j},{m},{n},{value}").map_err(io)?;
            }
        }
        return Ok(EXIT_OK);
    }

    match cfg.format_or(Format::Text) {
        Format::Text => out.extend_from_slice(series.dump().as_bytes()),
        Format::Json => {
            let coeffs: Vec<Vec<[i64; 3]>> = series
                .coeffs()
                .iter()
                .map(|p| p.terms().map(|((z, w), c)| [i64::from(z), i64::from(w), c]).collect())
                .collect();
            writeln!(
                out,
                "{}",
                json!({"series": name.name(), "k": k, "b": b, "t": t, "order": order, "coeffs": coeffs})
            )
            .map_err(io)?;
        }
        Format::Csv => {
            writeln!(out, "n,z,w,coeff").map_err(io)?;
            for (n, p) in series.coeffs().iter().enumerate() {
                for ((z, w), c) in p.terms() {
                    writeln!(out, "{n},{z},{w},{c}").map_err(io)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_verify(cfg: &Config, a: &VerifyArgs, out: &mut Vec<u8>) -> Result<i32> {
    let checks: Vec<CheckName> = if a.check == "all" {
        CheckName::ALL.to_vec()
    } else {
        vec![a.check.parse()?]
    };
    let reports = verify::run_checks(&checks, |c| cfg.grid(c.default_grid()))?;
    let timing = !cfg.no_timing;
    match cfg.format_or(Format::Json) {
        Format::Json => {
            if reports.len() == 1 {
                writeln!(out, "{}", reports[0].to_json(timing)).map_err(io)?;
            } else {
                let body: Vec<String> = reports.iter().map(|r| r.to_json(timing)).collect();
                writeln!(out, "[{}]", body.join(",")).map_err(io)?;
            }
        }
        Format::Text => {
            for r in &reports {
                if timing {
                    writeln!(out, "{}", r.summary()).map_err(io)?;
                } else {
                    let status = if r.passed() { "PASS" } else { "FAIL" };
                    writeln!(out, "{:<18} {status} ({} cells, {} failures)", r.check_name, r.grid.len(), r.failures.len())
                        .map_err(io)?;
                }
                for f in r.failures.iter().take(20) {
                    writeln!(out, "  {}: {:?} != {:?} at {:?}{}", f.what, f.lhs, f.rhs, f.cell,
                        f.witness.as_ref().map(|w| format!(" [{w}]")).unwrap_or_default())
                    .map_err(io)?;
                }
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["check", "pass", "cells", "failures"]).map_err(csv_io)?;
            for r in &reports {
                w.write_record([
                    r.check_name.clone(),
                    r.passed().to_string(),
                    r.grid.len().to_string(),
                    r.failures.len().to_string(),
                ])
                .map_err(csv_io)?;
            }
            w.flush().map_err(io)?;
        }
    }
    Ok(if reports.iter().all(VerificationReport::passed) { EXIT_OK } else { EXIT_FAIL })
}
