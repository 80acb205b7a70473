//! Named, grid-driven checks.
//!
//! Each check evaluates both sides of one identity through different code
//! paths (enumeration, series coefficients, or the bijection) and returns a
//! [`VerificationReport`]. Cells are evaluated in parallel; reports are sorted
//! afterwards so their serialization depends only on the grid.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bijection;
use crate::counting::{self, Params};
use crate::error::{self, Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::qseries::{self, PolyZW, TruncatedSeries};

/// One grid point. For series checks `n` is the truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    pub k: u64,
    pub b: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    pub n: u64,
}

impl Cell {
    pub fn new(j: Option<u64>, k: u64, b: u64, t: Option<u64>, n: u64) -> Self {
        Self { j, k, b, t, n }
    }
}

// field order matters for sorting: (k, b, t, j, n) reads better than the
// declaration order, so compare explicitly
fn cell_key(c: &Cell) -> (u64, u64, Option<u64>, Option<u64>, u64) {
    (c.k, c.b, c.t, c.j, c.n)
}

/// A value on either side of a failed comparison.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum Val {
    Int(i64),
    Text(String),
}

impl From<i64> for Val {
    fn from(v: i64) -> Self {
        Val::Int(v)
    }
}

impl From<u64> for Val {
    fn from(v: u64) -> Self {
        i64::try_from(v).map(Val::Int).unwrap_or_else(|_| Val::Text(v.to_string()))
    }
}

impl From<&Partition> for Val {
    fn from(p: &Partition) -> Self {
        Val::Text(p.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub cell: Cell,
    pub what: String,
    pub lhs: Val,
    pub rhs: Val,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub check_name: String,
    pub grid: Vec<Cell>,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    check: &'a str,
    grid: &'a [Cell],
    failures: &'a [Failure],
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(check: &str, mut grid: Vec<Cell>, mut failures: Vec<Failure>, elapsed: Duration) -> Self {
        grid.sort_by_key(cell_key);
        grid.dedup();
        failures.sort_by(|a, b| {
            (cell_key(&a.cell), &a.what, &a.witness).cmp(&(cell_key(&b.cell), &b.what, &b.witness))
        });
        Self {
            check_name: check.to_string(),
            grid,
            failures,
            elapsed,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// JSON object `{check, grid, failures, pass, elapsed_ms}`. Without timing
    /// the bytes depend only on the grid and the results.
    pub fn to_json(&self, with_timing: bool) -> String {
        let body = ReportJson {
            check: &self.check_name,
            grid: &self.grid,
            failures: &self.failures,
            pass: self.passed(),
            elapsed_ms: with_timing.then_some(self.elapsed.as_millis()),
        };
        serde_json::to_string(&body).expect("report serialization")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        format!(
            "{:<18} {} ({} cells, {} failures, {} ms)",
            self.check_name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.grid.len(),
            self.failures.len(),
            self.elapsed.as_millis()
        )
    }
}

/// Parameter bounds for a check. Enumeration checks range over
/// `0..=nmax`, `0..=jmax`, `kset` and `bset`; series checks use `trunc` as the
/// truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub nmax: u64,
    pub jmax: u64,
    pub kset: Vec<u64>,
    pub bset: Vec<u64>,
    pub trunc: usize,
}

impl Grid {
    /// `n <= 40, j <= 4, k in 1..=4, b in 1..=3`.
    pub fn main_theorem() -> Self {
        Self {
            nmax: 40,
            jmax: 4,
            kset: vec![1, 2, 3, 4],
            bset: vec![1, 2, 3],
            trunc: 40,
        }
    }

    /// `n <= 30, j <= 3, k in {2,3}, b in {1,2}`.
    pub fn excess() -> Self {
        Self {
            nmax: 30,
            jmax: 3,
            kset: vec![2, 3],
            bset: vec![1, 2],
            trunc: 30,
        }
    }

    /// `n <= 25, j <= 4, k in {2,3,4}, b in {1,2,3}`.
    pub fn special() -> Self {
        Self {
            nmax: 25,
            jmax: 4,
            kset: vec![2, 3, 4],
            bset: vec![1, 2, 3],
            trunc: 25,
        }
    }

    /// Truncation 30, `k in {2,3}, b in {1,2}`.
    pub fn series() -> Self {
        Self {
            nmax: 30,
            jmax: 3,
            kset: vec![2, 3],
            bset: vec![1, 2],
            trunc: 30,
        }
    }

    /// `n <= 25, k in {2,3}, b in {1,2}`.
    pub fn bijection() -> Self {
        Self {
            nmax: 25,
            jmax: 0,
            kset: vec![2, 3],
            bset: vec![1, 2],
            trunc: 25,
        }
    }

    fn validate(&self, min_k: u64, check: CheckName) -> Result<()> {
        if self.kset.is_empty() || self.bset.is_empty() {
            return Err(Error::arg("kset and bset must be non-empty"));
        }
        if let Some(&k) = self.kset.iter().find(|&&k| k < min_k) {
            return Err(Error::arg(format!("check `{check}` needs every k >= {min_k}, got k={k}")));
        }
        if self.bset.contains(&0) {
            return Err(Error::arg("b must be at least 1"));
        }
        for &k in &self.kset {
            for &b in &self.bset {
                Params::new(0, k, b)?;
            }
        }
        Ok(())
    }

    fn kb_pairs(&self) -> Vec<(u64, u64)> {
        let mut pairs = Vec::new();
        for &k in &self.kset {
            for &b in &self.bset {
                pairs.push((k, b));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

/// Every named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckName {
    Main,
    Beck,
    Corollary,
    Refinement,
    NoKbMultiple,
    GlaisherFranklin,
    Aab,
    FuTang,
    AndrewsSecond,
    Series,
    Bijection,
}

impl CheckName {
    pub const ALL: [CheckName; 11] = [
        CheckName::Main,
        CheckName::Beck,
        CheckName::Corollary,
        CheckName::Refinement,
        CheckName::NoKbMultiple,
        CheckName::GlaisherFranklin,
        CheckName::Aab,
        CheckName::FuTang,
        CheckName::AndrewsSecond,
        CheckName::Series,
        CheckName::Bijection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::Main => "main",
            CheckName::Beck => "beck",
            CheckName::Corollary => "corollary",
            CheckName::Refinement => "refinement",
            CheckName::NoKbMultiple => "no_kb_multiple",
            CheckName::GlaisherFranklin => "glaisher_franklin",
            CheckName::Aab => "aab",
            CheckName::FuTang => "fu_tang",
            CheckName::AndrewsSecond => "andrews_second",
            CheckName::Series => "series",
            CheckName::Bijection => "bijection",
        }
    }

    pub fn default_grid(self) -> Grid {
        match self {
            CheckName::Main => Grid::main_theorem(),
            CheckName::Beck | CheckName::Corollary | CheckName::Refinement => Grid::excess(),
            CheckName::Series => Grid::series(),
            CheckName::Bijection => Grid::bijection(),
            _ => Grid::special(),
        }
    }

    pub fn run(self, grid: &Grid) -> Result<VerificationReport> {
        match self {
            CheckName::Main => check_main_theorem(grid),
            CheckName::Beck => check_beck(grid),
            CheckName::Corollary => check_corollary(grid),
            CheckName::Refinement => check_refinement(grid),
            CheckName::NoKbMultiple => check_no_kb_multiple(grid),
            CheckName::GlaisherFranklin => check_glaisher_franklin(grid),
            CheckName::Aab => check_aab(grid),
            CheckName::FuTang => check_fu_tang(grid),
            CheckName::AndrewsSecond => check_andrews_second(grid),
            CheckName::Series => check_series_identities(grid.trunc, &grid.kset, &grid.bset),
            CheckName::Bijection => check_bijection(grid),
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = CheckName::ALL.iter().map(|c| c.name()).collect();
            Error::arg(format!("unknown check `{s}` (expected all or one of {})", names.join(", ")))
        })
    }
}

/// Which check covers each identity, for coverage audits.
pub const COVERAGE: &[(&str, CheckName)] = &[
    ("odd parts = distinct parts", CheckName::GlaisherFranklin),
    ("no part divisible by k = no part repeated k times", CheckName::GlaisherFranklin),
    ("O_{j,k} = D_{j,k}", CheckName::GlaisherFranklin),
    ("no part divisible by kb = no part divisible by b and repeated k times", CheckName::NoKbMultiple),
    ("O_{j,k,b} = D_{j,k,b}", CheckName::Main),
    ("O^(u)_{1,k} = D^(u)_{1,k}", CheckName::Aab),
    ("excess over O_{0,2} vs D_{0,2} = O_{1,2}", CheckName::Beck),
    ("sum_D l - sum_O lbar = D_{1,3}", CheckName::AndrewsSecond),
    ("sum_O l_{k,1} - sum_D lbar = O_{1,k}", CheckName::FuTang),
    ("E/(k-1) = (j+1)O_{j+1} - jO_j for b = 1", CheckName::Beck),
    ("cumulative excess for b = 1", CheckName::Corollary),
    ("E/(k-1) = (j+1)O_{j+1,k,b} - jO_{j,k,b}", CheckName::Beck),
    ("E(O_{<=j}, D_{<=j}) = (k-1)(j+1)O_{j+1,k,b}", CheckName::Corollary),
    ("E_{j,k,b,t} = (j+1)O_{j+1} - jO_j for every t", CheckName::Refinement),
    ("product forms of the O and D series agree", CheckName::Series),
    ("two forms of the (j+1)O_{j+1} series", CheckName::Series),
    ("w = 1 specializations", CheckName::Series),
    ("product rule for d/dw at w = 1", CheckName::Series),
    ("dw O_w - dw D_w = (k-1)(1-z) jO", CheckName::Series),
    ("dw (O_t - O_0 - D_t) = (1-z) jO", CheckName::Series),
    ("dw O_t, dw O_0, dw D_t closed forms", CheckName::Series),
    ("O_0 series = Dbar series", CheckName::Series),
    ("phi and psi are inverse, weight and j preserving", CheckName::Bijection),
];

fn u32_of(j: u64) -> Result<u32> {
    u32::try_from(j).map_err(|_| Error::Overflow("z degree"))
}

fn hist_at(hist: &[i64], j: u64) -> i64 {
    hist.get(j as usize).copied().unwrap_or(0)
}

fn collect_cells<F>(cells: Vec<Cell>, eval: F) -> Result<Vec<Failure>>
where
    F: Fn(&Cell) -> Result<Vec<Failure>> + Sync + Send,
{
    let per_cell: Vec<Vec<Failure>> = cells.par_iter().map(eval).collect::<Result<_>>()?;
    Ok(per_cell.into_iter().flatten().collect())
}

fn mismatch(cell: Cell, what: &str, lhs: i64, rhs: i64) -> Option<Failure> {
    (lhs != rhs).then(|| Failure {
        cell,
        what: what.to_string(),
        lhs: Val::Int(lhs),
        rhs: Val::Int(rhs),
        witness: None,
    })
}

fn series_by_kb(
    grid: &Grid,
    build: impl Fn(u64, u64, usize) -> Result<TruncatedSeries> + Sync,
) -> Result<Vec<((u64, u64), TruncatedSeries)>> {
    let order = grid.nmax as usize;
    grid.kb_pairs()
        .into_par_iter()
        .map(|(k, b)| Ok(((k, b), build(k, b, order)?)))
        .collect()
}

fn lookup(table: &[((u64, u64), TruncatedSeries)], k: u64, b: u64) -> &TruncatedSeries {
    &table.iter().find(|(key, _)| *key == (k, b)).expect("series built for every (k, b)").1
}

/// `count_O = count_D = [z^j q^n] gf_O = [z^j q^n] gf_D` on the grid.
pub fn check_main_theorem(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    grid.validate(1, CheckName::Main)?;
    let gf_o = series_by_kb(grid, qseries::gf_o)?;
    let gf_d = series_by_kb(grid, qseries::gf_d)?;
    let mut cells = Vec::new();
    for (k, b) in grid.kb_pairs() {
        for n in 0..=grid.nmax {
            cells.push(Cell::new(None, k, b, None, n));
        }
    }
    let failures = collect_cells(cells.clone(), |cell| {
        let (k, b, n) = (cell.k, cell.b, cell.n);
        let o_hist = counting::o_histogram(k, b, n)?;
        let d_hist = counting::d_histogram(k, b, n)?;
        let mut out = Vec::new();
        for j in 0..=grid.jmax {
            let c = Cell::new(Some(j), k, b, None, n);
            let o = hist_at(&o_hist, j);
            let d = hist_at(&d_hist, j);
            let so = lookup(&gf_o, k, b).coeff_zq(u32_of(j)?, n as usize)?;
            let sd = lookup(&gf_d, k, b).coeff_zq(u32_of(j)?, n as usize)?;
            out.extend(mismatch(c, "count_O vs count_D", o, d));
            out.extend(mismatch(c, "count_O vs [z^j q^n] gf_O", o, so));
            out.extend(mismatch(c, "count_O vs [z^j q^n] gf_D", o, sd));
        }
        Ok(out)
    })?;
    let full_grid = expand_j(&cells, grid.jmax);
    Ok(VerificationReport::new("main", full_grid, failures, started.elapsed()))
}

fn expand_j(cells: &[Cell], jmax: u64) -> Vec<Cell> {
    cells
        .iter()
        .flat_map(|c| (0..=jmax).map(move |j| Cell { j: Some(j), ..*c }))
        .collect()
}

fn jkbn_cells(grid: &Grid) -> Vec<Cell> {
    let mut cells = Vec::new();
    for (k, b) in grid.kb_pairs() {
        for j in 0..=grid.jmax {
            for n in 0..=grid.nmax {
                cells.push(Cell::new(Some(j), k, b, None, n));
            }
        }
    }
    cells
}

/// `(j+1) O_{j+1} - j O_j` read off the `O` series.
fn beck_rhs_series(gf_o: &TruncatedSeries, j: u64, n: u64) -> Result<i64> {
    let next = gf_o.coeff_zq(u32_of(j + 1)?, n as usize)?;
    let here = gf_o.coeff_zq(u32_of(j)?, n as usize)?;
    error::sub(error::mul(j as i64 + 1, next)?, error::mul(j as i64, here)?)
}

/// Excess identity with divisibility by `k - 1`; the right side is read from
/// the `O` series and, separately, from enumerated D-counts.
pub fn check_beck(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    grid.validate(2, CheckName::Beck)?;
    let gf_o = series_by_kb(grid, qseries::gf_o)?;
    let cells = jkbn_cells(grid);
    let failures = collect_cells(cells.clone(), |c| {
        let (j, k, b, n) = (c.j.unwrap_or(0), c.k, c.b, c.n);
        let e = counting::excess(j, k, b, n)?;
        let km1 = k as i64 - 1;
        let mut out = Vec::new();
        if e % km1 != 0 {
            out.extend(mismatch(*c, "E mod (k-1)", e % km1, 0));
            return Ok(out);
        }
        let lhs = e / km1;
        let rhs_o = beck_rhs_series(lookup(&gf_o, k, b), j, n)?;
        let d_next = counting::count_d(j + 1, k, b, n)?;
        let d_here = counting::count_d(j, k, b, n)?;
        let rhs_d = error::sub(error::mul(j as i64 + 1, d_next)?, error::mul(j as i64, d_here)?)?;
        out.extend(mismatch(*c, "E/(k-1) vs (j+1)O_{j+1} - jO_j", lhs, rhs_o));
        out.extend(mismatch(*c, "E/(k-1) vs (j+1)D_{j+1} - jD_j", lhs, rhs_d));
        Ok(out)
    })?;
    Ok(VerificationReport::new("beck", cells, failures, started.elapsed()))
}

/// Cumulative excess against `(k-1)(j+1) O_{j+1}` read from the `(j+1)O_{j+1}`
/// series. `k = 1` is allowed (both sides vanish).
pub fn check_corollary(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    grid.validate(1, CheckName::Corollary)?;
    let gf_jo = series_by_kb(grid, qseries::gf_jo)?;
    let cells = jkbn_cells(grid);
    let failures = collect_cells(cells.clone(), |c| {
        let (j, k, b, n) = (c.j.unwrap_or(0), c.k, c.b, c.n);
        let lhs = counting::excess_cumulative(j, k, b, n)?;
        let jo = lookup(&gf_jo, k, b).coeff_zq(u32_of(j)?, n as usize)?;
        let rhs = error::mul(k as i64 - 1, jo)?;
        Ok(mismatch(*c, "E(O_{<=j}, D_{<=j}) vs (k-1)(j+1)O_{j+1}", lhs, rhs)
            .into_iter()
            .collect())
    })?;
    Ok(VerificationReport::new("corollary", cells, failures, started.elapsed()))
}

/// Refined excess for every `t in [1, k-1]` against the `O` series, plus
/// explicit `t`-independence.
pub fn check_refinement(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    grid.validate(2, CheckName::Refinement)?;
    let gf_o = series_by_kb(grid, qseries::gf_o)?;
    let mut cells = Vec::new();
    for c in jkbn_cells(grid) {
        for t in 1..c.k {
            cells.push(Cell { t: Some(t), ..c });
        }
    }
    let failures = collect_cells(cells.clone(), |c| {
        let (j, k, b, t, n) = (c.j.unwrap_or(0), c.k, c.b, c.t.unwrap_or(1), c.n);
        let refined = counting::excess_refined(j, k, b, t, n)?;
        let rhs = beck_rhs_series(lookup(&gf_o, k, b), j, n)?;
        let mut out: Vec<Failure> = mismatch(*c, "E_t vs (j+1)O_{j+1} - jO_j", refined, rhs)
            .into_iter()
            .collect();
        if t > 1 {
            let first = counting::excess_refined(j, k, b, 1, n)?;
            out.extend(mismatch(*c, "E_t vs E_1", refined, first));
        }
        Ok(out)
    })?;
    Ok(VerificationReport::new("refinement", cells, failures, started.elapsed()))
}

fn kbn_cells(grid: &Grid) -> Vec<Cell> {
    let mut cells = Vec::new();
    for (k, b) in grid.kb_pairs() {
        for n in 0..=grid.nmax {
            cells.push(Cell::new(None, k, b, None, n));
        }
    }
    cells
}

/// No part divisible by `kb` vs no part both divisible by `b` and repeated at
/// least `k` times, each tested directly on part lists, and against `[z^0]` of
/// the part-by-part D series.
pub fn check_no_kb_multiple(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    grid.validate(1, CheckName::NoKbMultiple)?;
    let gf_d = series_by_kb(grid, qseries::gf_d)?;
    let cells = kbn_cells(grid);
    let failures = collect_cells(cells.clone(), |c| {
        let lhs = counting::count_no_part_divisible(c.k, c.b, c.n)?;
        let rhs = counting::count_no_part_divisible_and_repeated(c.k, c.b, c.n)?;
        let series = lookup(&gf_d, c.k, c.b).coeff_zq(0, c.n as usize)?;
        let mut out: Vec<Failure> = mismatch(*c, "no part div by kb vs none div by b repeated k times", lhs, rhs)
            .into_iter()
            .collect();
        out.extend(mismatch(*c, "no part div by kb vs [z^0 q^n] gf_D", lhs, series));
        Ok(out)
    })?;
    Ok(VerificationReport::new("no_kb_multiple", cells, failures, started.elapsed()))
}

/// Glaisher (`b = 1`, `j = 0`, direct part-list predicates) and Franklin
/// (`b = 1`, every `j <= jmax`) over the grid's `kset`.
pub fn check_glaisher_franklin(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = Grid {
        bset: vec![1],
        ..grid.clone()
    };
    grid.validate(1, CheckName::GlaisherFranklin)?;
    let cells = jkbn_cells(&grid);
    let failures = collect_cells(cells.clone(), |c| {
        let (j, k, n) = (c.j.unwrap_or(0), c.k, c.n);
        let mut out = Vec::new();
        if j == 0 {
            let lhs = counting::count_no_part_divisible(k, 1, n)?;
            let rhs = counting::count_no_part_divisible_and_repeated(k, 1, n)?;
            out.extend(mismatch(*c, "no part div by k vs no part repeated k times", lhs, rhs));
        }
        let o = counting::count_o(j, k, 1, n)?;
        let d = counting::count_d(j, k, 1, n)?;
        out.extend(mismatch(*c, "O_{j,k} vs D_{j,k}", o, d));
        Ok(out)
    })?;
    Ok(VerificationReport::new("glaisher_franklin", cells, failures, started.elapsed()))
}

/// `O^(u)_{1,k}(n) = D^(u)_{1,k}(n)` for every `1 <= u <= n`.
pub fn check_aab(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = Grid {
        bset: vec![1],
        ..grid.clone()
    };
    grid.validate(2, CheckName::Aab)?;
    let mut cells = Vec::new();
    for &k in &grid.kset {
        for n in 0..=grid.nmax {
            for u in 1..=n.max(1) {
                // u rides in the j slot of the cell
                cells.push(Cell::new(Some(u), k, 1, None, n));
            }
        }
    }
    let failures = collect_cells(cells.clone(), |c| {
        let (u, k, n) = (c.j.unwrap_or(1), c.k, c.n);
        let lhs = counting::count_o1k_u(k, u, n)?;
        let rhs = counting::count_d1k_u(k, u, n)?;
        Ok(mismatch(*c, "O^(u)_{1,k} vs D^(u)_{1,k}", lhs, rhs).into_iter().collect())
    })?;
    Ok(VerificationReport::new("aab", cells, failures, started.elapsed()))
}

/// Fu-Tang left side against `[z^1 q^n]` of the `O` series with `b = 1`.
pub fn check_fu_tang(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = Grid {
        bset: vec![1],
        ..grid.clone()
    };
    grid.validate(2, CheckName::FuTang)?;
    let gf_o = series_by_kb(&grid, qseries::gf_o)?;
    let cells = kbn_cells(&grid);
    let failures = collect_cells(cells.clone(), |c| {
        let lhs = counting::fu_tang_lhs(c.k, c.n)?;
        let rhs = lookup(&gf_o, c.k, 1).coeff_zq(1, c.n as usize)?;
        Ok(mismatch(*c, "sum_O l_{k,1} - sum_D lbar vs O_{1,k}", lhs, rhs)
            .into_iter()
            .collect())
    })?;
    Ok(VerificationReport::new("fu_tang", cells, failures, started.elapsed()))
}

/// `sum_{D_{0,2}} l - sum_{O_{0,2}} lbar` against `D_{1,3}` (enumerated) and
/// `O_{1,3}` (series). Only `nmax` is read from the grid.
pub fn check_andrews_second(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    let gf_o = qseries::gf_o(3, 1, grid.nmax as usize)?;
    let cells: Vec<Cell> = (1..=grid.nmax).map(|n| Cell::new(None, 3, 1, None, n)).collect();
    let failures = collect_cells(cells.clone(), |c| {
        let lhs = counting::andrews_second_lhs(c.n)?;
        let d13 = counting::count_d(1, 3, 1, c.n)?;
        let o13 = gf_o.coeff_zq(1, c.n as usize)?;
        let mut out: Vec<Failure> = mismatch(*c, "sum_D l - sum_O lbar vs D_{1,3}", lhs, d13)
            .into_iter()
            .collect();
        out.extend(mismatch(*c, "sum_D l - sum_O lbar vs O_{1,3}", lhs, o13));
        Ok(out)
    })?;
    Ok(VerificationReport::new("andrews_second", cells, failures, started.elapsed()))
}

/// Exhaustive bijection round trips over the grid's `kset x bset`.
pub fn check_bijection(grid: &Grid) -> Result<VerificationReport> {
    let started = Instant::now();
    grid.validate(2, CheckName::Bijection)?;
    let cells = kbn_cells(grid);
    let failures = collect_cells(cells.clone(), |c| {
        let mut out = Vec::new();
        for pi in partitions_of(c.n).iter() {
            out.extend(bijection::roundtrip_failures(pi, c.k, c.b, *c)?);
        }
        Ok(out)
    })?;
    Ok(VerificationReport::new("bijection", cells, failures, started.elapsed()))
}

/// First coefficient where two series differ, as a failure record.
fn series_mismatch(cell: Cell, what: &str, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Option<Failure> {
    if lhs.order() != rhs.order() {
        return Some(Failure {
            cell,
            what: format!("{what}: order"),
            lhs: Val::from(lhs.order() as u64),
            rhs: Val::from(rhs.order() as u64),
            witness: None,
        });
    }
    for (n, (a, b)) in lhs.coeffs().iter().zip(rhs.coeffs()).enumerate() {
        if a != b {
            let key = a
                .terms()
                .chain(b.terms())
                .map(|(key, _)| key)
                .find(|&(z, w)| a.coeff(z, w) != b.coeff(z, w))
                .unwrap_or((0, 0));
            return Some(Failure {
                cell,
                what: what.to_string(),
                lhs: Val::Int(a.coeff(key.0, key.1)),
                rhs: Val::Int(b.coeff(key.0, key.1)),
                witness: Some(format!("z^{} w^{} q^{n}", key.0, key.1)),
            });
        }
    }
    None
}

fn degree_failure(cell: Cell, name: &str, s: &TruncatedSeries, z_step: usize) -> Option<Failure> {
    (!s.degree_bounds_hold(z_step)).then(|| Failure {
        cell,
        what: format!("degree bounds of {name}"),
        lhs: Val::Int(0),
        rhs: Val::Int(1),
        witness: None,
    })
}

/// Series-level identities at truncation `order` for every `k in k_set`
/// (`k >= 2`), `b in b_set` and, where applicable, `t in [1, k-1]`.
pub fn check_series_identities(order: usize, k_set: &[u64], b_set: &[u64]) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = Grid {
        nmax: order as u64,
        jmax: 0,
        kset: k_set.to_vec(),
        bset: b_set.to_vec(),
        trunc: order,
    };
    grid.validate(2, CheckName::Series)?;
    let mut cells = Vec::new();
    for (k, b) in grid.kb_pairs() {
        cells.push(Cell::new(None, k, b, None, order as u64));
        for t in 1..k {
            cells.push(Cell::new(None, k, b, Some(t), order as u64));
        }
    }
    let failures = collect_cells(cells.clone(), |c| match c.t {
        None => series_kb_failures(*c, order),
        Some(t) => series_t_failures(*c, t, order),
    })?;
    Ok(VerificationReport::new("series", cells, failures, started.elapsed()))
}

fn series_kb_failures(c: Cell, order: usize) -> Result<Vec<Failure>> {
    let (k, b) = (c.k, c.b);
    let kb = (k * b) as usize;
    let mut out = Vec::new();
    let o = qseries::gf_o(k, b, order)?;
    let d = qseries::gf_d(k, b, order)?;
    let jo = qseries::gf_jo(k, b, order)?;
    let o_w = qseries::gf_o_w(k, b, order)?;
    let d_w = qseries::gf_d_w(k, b, order)?;
    let o_0 = qseries::gf_o_class0(k, b, order)?;
    let dbar = qseries::gf_dbar(k, b, order)?;
    for (name, s) in [("O", &o), ("D", &d), ("jO", &jo), ("O_w", &o_w), ("D_w", &d_w), ("O_0", &o_0), ("Dbar", &dbar)] {
        out.extend(degree_failure(c, name, s, kb));
    }

    out.extend(series_mismatch(c, "gf_O vs gf_D", &o, &d));
    out.extend(series_mismatch(c, "jO product form vs sum form", &jo, &qseries::gf_jo_sum_form(k, b, order)?));
    out.extend(series_mismatch(c, "O_w at w=1 vs gf_O", &o_w.at_w_one()?, &o));
    out.extend(series_mismatch(c, "D_w at w=1 vs gf_D", &d_w.at_w_one()?, &d));
    out.extend(series_mismatch(c, "O_0 at w=1 vs gf_O", &o_0.at_w_one()?, &o));

    let d_o_w = o_w.d_dw_at_1()?;
    let d_d_w = d_w.d_dw_at_1()?;
    let factor = PolyZW::one_minus_z().scale(k as i64 - 1)?;
    out.extend(series_mismatch(
        c,
        "dw O_w - dw D_w vs (k-1)(1-z) jO",
        &d_o_w.sub(&d_d_w)?,
        &jo.scale(&factor)?,
    ));
    out.extend(series_mismatch(
        c,
        "dw O_w vs product rule",
        &d_o_w,
        &qseries::d_dw_at_1_product(&qseries::gf_o_w_factors(k, b, order)?)?,
    ));
    out.extend(series_mismatch(
        c,
        "dw D_w vs product rule",
        &d_d_w,
        &qseries::d_dw_at_1_product(&qseries::gf_d_w_factors(k, b, order)?)?,
    ));

    // dw O_0 = gf_O * sum_i z q^(kbi) / ((1 - q^(kbi)) (1 - (1-z) q^(kbi)))
    let mut tail = TruncatedSeries::zero(order);
    for d_i in (1..).map(|i| kb * i).take_while(|&d| d <= order) {
        let mut term = TruncatedSeries::monomial(PolyZW::z(), d_i, order);
        term.div_one_minus(&PolyZW::one(), d_i)?;
        term.div_one_minus(&PolyZW::one_minus_z(), d_i)?;
        tail = tail.add(&term)?;
    }
    out.extend(series_mismatch(c, "dw O_0 closed form", &o_0.d_dw_at_1()?, &o.mul(&tail)?));

    out.extend(series_mismatch(c, "O_0 vs Dbar", &o_0, &dbar));
    Ok(out)
}

fn series_t_failures(c: Cell, t: u64, order: usize) -> Result<Vec<Failure>> {
    let (k, b) = (c.k, c.b);
    let kb = (k * b) as usize;
    let tb = (t * b) as usize;
    let mut out = Vec::new();
    let o = qseries::gf_o(k, b, order)?;
    let d = qseries::gf_d(k, b, order)?;
    let jo = qseries::gf_jo(k, b, order)?;
    let o_t = qseries::gf_o_class(k, b, t, order)?;
    let o_0 = qseries::gf_o_class0(k, b, order)?;
    let d_t = qseries::gf_d_resmult(k, b, t, order)?;
    for (name, s) in [("O_t", &o_t), ("D_t", &d_t)] {
        out.extend(degree_failure(c, name, s, kb));
    }
    out.extend(series_mismatch(c, "O_t at w=1 vs gf_O", &o_t.at_w_one()?, &o));
    out.extend(series_mismatch(c, "D_t at w=1 vs gf_D", &d_t.at_w_one()?, &d));

    let combined = o_t.sub(&o_0)?.sub(&d_t)?.d_dw_at_1()?;
    out.extend(series_mismatch(
        c,
        "dw (O_t - O_0 - D_t) vs (1-z) jO",
        &combined,
        &jo.scale(&PolyZW::one_minus_z())?,
    ));

    // dw O_t = gf_O * sum_{i>=1} q^(tbi) / (1 - q^(kbi))
    let lambert = qseries::ratio_lambert(tb, kb, order)?;
    out.extend(series_mismatch(c, "dw O_t closed form", &o_t.d_dw_at_1()?, &o.mul(&lambert)?));

    // dw D_t = gf_O * sum_{i>=1} (q^(tbi) - q^(kbi)) / (1 - q^(kbi))
    let mut tail = TruncatedSeries::zero(order);
    for i in (1..).take_while(|i| tb * i <= order) {
        let mut term = TruncatedSeries::from_terms(
            [(tb * i, PolyZW::one()), (kb * i, PolyZW::constant(-1))],
            order,
        )?;
        term.div_one_minus(&PolyZW::one(), kb * i)?;
        tail = tail.add(&term)?;
    }
    out.extend(series_mismatch(c, "dw D_t closed form", &d_t.d_dw_at_1()?, &o.mul(&tail)?));
    Ok(out)
}

/// Runs `checks` concurrently, each on the grid `grid_for` gives it. Reports
/// come back in the order of `checks`.
pub fn run_checks(
    checks: &[CheckName],
    grid_for: impl Fn(CheckName) -> Grid + Sync,
) -> Result<Vec<VerificationReport>> {
    checks.par_iter().map(|&c| c.run(&grid_for(c))).collect()
}

/// Every check on its default grid.
pub fn run_all() -> Result<Vec<VerificationReport>> {
    run_checks(&CheckName::ALL, CheckName::default_grid)
}
