//! Brute-force counting by filtered exhaustive enumeration.
//!
//! Every function here walks the partitions of `n` and tests a predicate or
//! sums a statistic. Nothing in this module uses a generating function, so it
//! serves as the reference the series and bijection paths are checked against.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{self, Error, Result};
use crate::partition::{partitions_of, Partition};

/// The `(j, k, b)` triple selecting a counting family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub j: u64,
    pub k: u64,
    pub b: u64,
}

impl Params {
    pub fn new(j: u64, k: u64, b: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::arg("k must be at least 1"));
        }
        if b == 0 {
            return Err(Error::arg("b must be at least 1"));
        }
        k.checked_mul(b).ok_or(Error::Overflow("k*b"))?;
        Ok(Self { j, k, b })
    }

    /// Same as [`Params::new`] but additionally rejects `k = 1`, for the
    /// excess identities whose statement divides by `k - 1`.
    pub fn beck(j: u64, k: u64, b: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::arg(format!(
                "k={k}: excess identities need k >= 2"
            )));
        }
        Self::new(j, k, b)
    }

    pub fn kb(&self) -> u64 {
        self.k * self.b
    }

    pub fn with_j(self, j: u64) -> Self {
        Self { j, ..self }
    }
}

fn check_t(t: u64, k: u64, min: u64) -> Result<()> {
    if t < min || t >= k {
        return Err(Error::arg(format!(
            "t={t} outside [{min}, {}]",
            k.saturating_sub(1)
        )));
    }
    Ok(())
}

fn as_count(x: usize) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("count"))
}

fn as_stat(x: u64) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow("statistic"))
}

/// The `j` for which `pi` lies in the O-family: number of different parts
/// divisible by `k*b`.
pub fn o_index(pi: &Partition, k: u64, b: u64) -> u64 {
    let kb = k * b;
    pi.pairs().iter().filter(|&&(p, _)| p % kb == 0).count() as u64
}

/// The `j` for which `pi` lies in the D-family: number of different parts
/// divisible by `b` occurring at least `k` times.
pub fn d_index(pi: &Partition, k: u64, b: u64) -> u64 {
    pi.pairs()
        .iter()
        .filter(|&&(p, m)| p % b == 0 && m >= k)
        .count() as u64
}

/// Exactly `j` different part values divisible by `k*b`; repetitions of those
/// parts do not change the count.
pub fn is_in_o(pi: &Partition, params: &Params) -> bool {
    o_index(pi, params.k, params.b) == params.j
}

pub fn is_in_d(pi: &Partition, params: &Params) -> bool {
    d_index(pi, params.k, params.b) == params.j
}

fn o_members(params: &Params, n: u64) -> impl Iterator<Item = Partition> {
    let params = *params;
    let list = partitions_of(n);
    (0..list.len())
        .map(move |i| list[i].clone())
        .filter(move |pi| is_in_o(pi, &params))
}

fn d_members(params: &Params, n: u64) -> impl Iterator<Item = Partition> {
    let params = *params;
    let list = partitions_of(n);
    (0..list.len())
        .map(move |i| list[i].clone())
        .filter(move |pi| is_in_d(pi, &params))
}

/// Members of the O-family of size `n`, in enumeration order.
pub fn o_set(j: u64, k: u64, b: u64, n: u64) -> Result<Vec<Partition>> {
    Ok(o_members(&Params::new(j, k, b)?, n).collect())
}

/// Members of the D-family of size `n`, in enumeration order.
pub fn d_set(j: u64, k: u64, b: u64, n: u64) -> Result<Vec<Partition>> {
    Ok(d_members(&Params::new(j, k, b)?, n).collect())
}

fn count_where(n: u64, pred: impl Fn(&Partition) -> bool) -> Result<i64> {
    as_count(partitions_of(n).iter().filter(|pi| pred(pi)).count())
}

fn sum_over(n: u64, pred: impl Fn(&Partition) -> bool, stat: impl Fn(&Partition) -> u64) -> Result<i64> {
    let mut total = 0i64;
    for pi in partitions_of(n).iter().filter(|pi| pred(pi)) {
        total = error::add(total, as_stat(stat(pi))?)?;
    }
    Ok(total)
}

pub fn count_o(j: u64, k: u64, b: u64, n: u64) -> Result<i64> {
    let params = Params::new(j, k, b)?;
    count_where(n, |pi| is_in_o(pi, &params))
}

pub fn count_d(j: u64, k: u64, b: u64, n: u64) -> Result<i64> {
    let params = Params::new(j, k, b)?;
    count_where(n, |pi| is_in_d(pi, &params))
}

/// `O_{<=j}`: partitions with at most `j` different parts divisible by `k*b`.
pub fn count_o_at_most(j: u64, k: u64, b: u64, n: u64) -> Result<i64> {
    Params::new(j, k, b)?;
    count_where(n, |pi| o_index(pi, k, b) <= j)
}

pub fn count_d_at_most(j: u64, k: u64, b: u64, n: u64) -> Result<i64> {
    Params::new(j, k, b)?;
    count_where(n, |pi| d_index(pi, k, b) <= j)
}

/// O-family members of `n` having `m` parts in total.
pub fn count_o_by_length(j: u64, k: u64, b: u64, m: u64, n: u64) -> Result<i64> {
    let params = Params::new(j, k, b)?;
    count_where(n, |pi| is_in_o(pi, &params) && pi.total_parts() == m)
}

pub fn count_d_by_length(j: u64, k: u64, b: u64, m: u64, n: u64) -> Result<i64> {
    let params = Params::new(j, k, b)?;
    count_where(n, |pi| is_in_d(pi, &params) && pi.total_parts() == m)
}

/// O-family members of `n` with exactly `m` parts (with multiplicity)
/// congruent to `t*b` modulo `k*b`, for `0 <= t <= k-1`.
pub fn count_o_class(j: u64, k: u64, b: u64, t: u64, m: u64, n: u64) -> Result<i64> {
    let params = Params::new(j, k, b)?;
    check_t(t, k, 0)?;
    let (modulus, residue) = (params.kb(), t * b);
    count_where(n, |pi| {
        is_in_o(pi, &params) && pi.parts_in_class(modulus, residue).unwrap_or(0) == m
    })
}

/// D-family members of `n` with exactly `m` different parts divisible by `b`
/// whose multiplicity modulo `k` is at least `t`.
pub fn count_d_resmult(j: u64, k: u64, b: u64, t: u64, m: u64, n: u64) -> Result<i64> {
    let params = Params::beck(j, k, b)?;
    check_t(t, k, 0)?;
    count_where(n, |pi| {
        is_in_d(pi, &params) && pi.distinct_parts_resmult_at_least(b, k, t).unwrap_or(0) == m
    })
}

/// `sum over parts i divisible by b of floor(s_i / k)`.
pub fn quotient_sum(pi: &Partition, k: u64, b: u64) -> u64 {
    pi.pairs()
        .iter()
        .filter(|&&(p, _)| p % b == 0)
        .map(|&(_, s)| s / k)
        .sum()
}

/// D-family members of `n` whose quotients `floor(s_i/k)`, summed over parts
/// divisible by `b`, total `m`.
pub fn count_dbar(j: u64, k: u64, b: u64, m: u64, n: u64) -> Result<i64> {
    let params = Params::beck(j, k, b)?;
    count_where(n, |pi| is_in_d(pi, &params) && quotient_sum(pi, k, b) == m)
}

/// Total parts over the O-family minus total parts over the D-family.
pub fn excess(j: u64, k: u64, b: u64, n: u64) -> Result<i64> {
    let params = Params::new(j, k, b)?;
    let over_o = sum_over(n, |pi| is_in_o(pi, &params), Partition::total_parts)?;
    let over_d = sum_over(n, |pi| is_in_d(pi, &params), Partition::total_parts)?;
    error::sub(over_o, over_d)
}

/// Excess between the cumulative families `O_{<=j}` and `D_{<=j}`.
pub fn excess_cumulative(j: u64, k: u64, b: u64, n: u64) -> Result<i64> {
    Params::new(j, k, b)?;
    let over_o = sum_over(n, |pi| o_index(pi, k, b) <= j, Partition::total_parts)?;
    let over_d = sum_over(n, |pi| d_index(pi, k, b) <= j, Partition::total_parts)?;
    error::sub(over_o, over_d)
}

/// Residue-class refined excess:
/// `sum_O (l_{kb,tb} - l_{kb,0}) - sum_D lbar_{b,0,t}` for `1 <= t <= k-1`.
pub fn excess_refined(j: u64, k: u64, b: u64, t: u64, n: u64) -> Result<i64> {
    let params = Params::beck(j, k, b)?;
    check_t(t, k, 1)?;
    let kb = params.kb();
    let mut total = 0i64;
    for pi in partitions_of(n).iter() {
        if is_in_o(pi, &params) {
            let in_class = as_stat(pi.parts_in_class(kb, t * b)?)?;
            let divisible = as_stat(pi.parts_in_class(kb, 0)?)?;
            total = error::add(total, error::sub(in_class, divisible)?)?;
        }
        if is_in_d(pi, &params) {
            let lbar = as_stat(pi.distinct_parts_resmult_at_least(b, k, t)?)?;
            total = error::sub(total, lbar)?;
        }
    }
    Ok(total)
}

/// Partitions of `n` with exactly one different part divisible by `k`, that
/// part occurring exactly `u` times.
pub fn count_o1k_u(k: u64, u: u64, n: u64) -> Result<i64> {
    Params::beck(1, k, 1)?;
    if u == 0 {
        return Err(Error::arg("u must be at least 1"));
    }
    count_where(n, |pi| {
        let mut hits = pi.pairs().iter().filter(|&&(p, _)| p % k == 0);
        matches!((hits.next(), hits.next()), (Some(&(_, s)), None) if s == u)
    })
}

/// Partitions of `n` with exactly one different part occurring at least `k`
/// times, that part being `u`.
pub fn count_d1k_u(k: u64, u: u64, n: u64) -> Result<i64> {
    Params::beck(1, k, 1)?;
    if u == 0 {
        return Err(Error::arg("u must be at least 1"));
    }
    count_where(n, |pi| {
        let mut hits = pi.pairs().iter().filter(|&&(_, s)| s >= k);
        matches!((hits.next(), hits.next()), (Some(&(p, _)), None) if p == u)
    })
}

/// `sum_{O_{0,k}} l_{k,1} - sum_{D_{0,k}} lbar`.
pub fn fu_tang_lhs(k: u64, n: u64) -> Result<i64> {
    let params = Params::beck(0, k, 1)?;
    let ones = sum_over(
        n,
        |pi| is_in_o(pi, &params),
        |pi| pi.parts_in_class(k, 1 % k).unwrap_or(0),
    )?;
    let distinct = sum_over(n, |pi| is_in_d(pi, &params), Partition::distinct_parts)?;
    error::sub(ones, distinct)
}

/// `sum_{D_{0,2}} l - sum_{O_{0,2}} lbar`.
pub fn andrews_second_lhs(n: u64) -> Result<i64> {
    let params = Params::new(0, 2, 1)?;
    let parts = sum_over(n, |pi| is_in_d(pi, &params), Partition::total_parts)?;
    let distinct = sum_over(n, |pi| is_in_o(pi, &params), Partition::distinct_parts)?;
    error::sub(parts, distinct)
}

/// Partitions of `n` with no part divisible by `k*b`, tested directly on the
/// parts.
pub fn count_no_part_divisible(k: u64, b: u64, n: u64) -> Result<i64> {
    let kb = Params::new(0, k, b)?.kb();
    count_where(n, |pi| pi.parts_desc().iter().all(|p| p % kb != 0))
}

/// Partitions of `n` in which no part is both divisible by `b` and repeated at
/// least `k` times, tested directly on the flat part list.
pub fn count_no_part_divisible_and_repeated(k: u64, b: u64, n: u64) -> Result<i64> {
    Params::new(0, k, b)?;
    count_where(n, |pi| {
        let parts = pi.parts_desc();
        parts.iter().all(|&p| {
            p % b != 0 || (parts.iter().filter(|&&q| q == p).count() as u64) < k
        })
    })
}

/// Counts for every `j` at once: `hist[j] = O_{j,k,b}(n)`.
pub fn o_histogram(k: u64, b: u64, n: u64) -> Result<Vec<i64>> {
    Params::new(0, k, b)?;
    histogram(n, |pi| o_index(pi, k, b))
}

/// `hist[j] = D_{j,k,b}(n)`.
pub fn d_histogram(k: u64, b: u64, n: u64) -> Result<Vec<i64>> {
    Params::new(0, k, b)?;
    histogram(n, |pi| d_index(pi, k, b))
}

fn histogram(n: u64, index: impl Fn(&Partition) -> u64) -> Result<Vec<i64>> {
    let mut hist: Vec<i64> = Vec::new();
    for pi in partitions_of(n).iter() {
        let j = index(pi) as usize;
        if hist.len() <= j {
            hist.resize(j + 1, 0);
        }
        hist[j] = error::add(hist[j], 1)?;
    }
    Ok(hist)
}

/// Counting families addressable by name from the CLI and the cache.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    O,
    D,
    OM,
    DM,
    OT,
    DT,
    Dbar,
    O1u,
    D1u,
    Ocum,
    Dcum,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::O,
        Family::D,
        Family::OM,
        Family::DM,
        Family::OT,
        Family::DT,
        Family::Dbar,
        Family::O1u,
        Family::D1u,
        Family::Ocum,
        Family::Dcum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::O => "O",
            Family::D => "D",
            Family::OM => "O_m",
            Family::DM => "D_m",
            Family::OT => "O_t",
            Family::DT => "D_t",
            Family::Dbar => "Dbar",
            Family::O1u => "O1u",
            Family::D1u => "D1u",
            Family::Ocum => "Ocum",
            Family::Dcum => "Dcum",
        }
    }

    pub fn needs_t(self) -> bool {
        matches!(self, Family::OT | Family::DT)
    }

    /// Whether the `m` index is required. For `O1u`/`D1u` the `m` slot carries `u`.
    pub fn needs_m(self) -> bool {
        matches!(
            self,
            Family::OM | Family::DM | Family::OT | Family::DT | Family::Dbar | Family::O1u | Family::D1u
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::arg(format!("unknown family `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// A fully specified counting query; the cache key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Query {
    pub family: Family,
    pub j: u64,
    pub k: u64,
    pub b: u64,
    pub t: Option<u64>,
    pub m: Option<u64>,
    pub n: u64,
}

impl Query {
    pub fn validate(&self) -> Result<()> {
        let f = self.family;
        if f.needs_t() != self.t.is_some() {
            return Err(Error::arg(format!(
                "family {f} {} the t index",
                if f.needs_t() { "requires" } else { "does not take" }
            )));
        }
        if f.needs_m() != self.m.is_some() {
            let what = if matches!(f, Family::O1u | Family::D1u) { "u" } else { "m" };
            return Err(Error::arg(format!(
                "family {f} {} the {what} index",
                if f.needs_m() { "requires" } else { "does not take" }
            )));
        }
        if matches!(f, Family::O1u | Family::D1u) && (self.j != 1 || self.b != 1) {
            return Err(Error::arg(format!("family {f} is defined for j=1, b=1 only")));
        }
        Ok(())
    }

    pub fn evaluate(&self) -> Result<i64> {
        self.validate()?;
        let Query { j, k, b, n, .. } = *self;
        let t = self.t.unwrap_or(0);
        let m = self.m.unwrap_or(0);
        match self.family {
            Family::O => count_o(j, k, b, n),
            Family::D => count_d(j, k, b, n),
            Family::OM => count_o_by_length(j, k, b, m, n),
            Family::DM => count_d_by_length(j, k, b, m, n),
            Family::OT => count_o_class(j, k, b, t, m, n),
            Family::DT => count_d_resmult(j, k, b, t, m, n),
            Family::Dbar => count_dbar(j, k, b, m, n),
            Family::O1u => count_o1k_u(k, m, n),
            Family::D1u => count_d1k_u(k, m, n),
            Family::Ocum => count_o_at_most(j, k, b, n),
            Family::Dcum => count_d_at_most(j, k, b, n),
        }
    }
}

/// Where a cached value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Enumeration,
    CacheFile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRow {
    pub value: i64,
    pub provenance: Provenance,
}

/// Computed counts keyed by query, persisted as CSV with header
/// `family,j,k,b,t,m,n,value`. Rows are kept sorted by key so the file written
/// is independent of insertion order.
#[derive(Debug, Clone, Default)]
pub struct CountTable {
    rows: BTreeMap<Query, CountRow>,
}

pub const CACHE_HEADER: [&str; 8] = ["family", "j", "k", "b", "t", "m", "n", "value"];

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, q: &Query) -> Option<CountRow> {
        self.rows.get(q).copied()
    }

    pub fn insert(&mut self, q: Query, row: CountRow) {
        self.rows.insert(q, row);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Query, &CountRow)> {
        self.rows.iter()
    }

    /// Looks the query up, computing and recording it on a miss.
    pub fn get_or_compute(&mut self, q: &Query) -> Result<CountRow> {
        if let Some(row) = self.get(q) {
            return Ok(row);
        }
        let row = CountRow {
            value: q.evaluate()?,
            provenance: Provenance::Enumeration,
        };
        self.insert(*q, row);
        Ok(row)
    }

    /// Merges `other` into `self`; entries already present are kept.
    pub fn merge(&mut self, other: CountTable) {
        for (q, row) in other.rows {
            self.rows.entry(q).or_insert(row);
        }
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CACHE_HEADER).map_err(io)?;
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        for (q, row) in &self.rows {
            out.write_record([
                q.family.name().to_string(),
                q.j.to_string(),
                q.k.to_string(),
                q.b.to_string(),
                opt(q.t),
                opt(q.m),
                q.n.to_string(),
                row.value.to_string(),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn read_csv<R: std::io::Read>(r: R) -> Result<Self> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers().map_err(io)?.clone();
        if header.iter().ne(CACHE_HEADER.iter().copied()) {
            return Err(Error::Io(format!(
                "unexpected cache header `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut table = CountTable::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(io)?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let num = |i: usize| -> Result<u64> {
                field(i).parse().map_err(|_| {
                    Error::Io(format!("row {}: bad `{}` value `{}`", line + 2, CACHE_HEADER[i], field(i)))
                })
            };
            let opt = |i: usize| -> Result<Option<u64>> {
                if field(i).is_empty() {
                    Ok(None)
                } else {
                    num(i).map(Some)
                }
            };
            let q = Query {
                family: field(0).parse()?,
                j: num(1)?,
                k: num(2)?,
                b: num(3)?,
                t: opt(4)?,
                m: opt(5)?,
                n: num(6)?,
            };
            q.validate()?;
            let value: i64 = field(7)
                .parse()
                .map_err(|_| Error::Io(format!("row {}: bad value `{}`", line + 2, field(7))))?;
            table.insert(
                q,
                CountRow {
                    value,
                    provenance: Provenance::CacheFile,
                },
            );
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read_csv(file)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Partition {
        text.parse().unwrap()
    }

    #[test]
    fn membership_examples() {
        let params = Params::new(1, 2, 1).unwrap();
        for text in ["4+1", "3+2", "2+2+1", "2+1+1+1"] {
            assert!(is_in_o(&p(text), &params), "{text}");
        }
        let big = p("4^5 6^7 18^2 24^3 36^4 48^4");
        assert!(is_in_o(&big, &Params::new(3, 2, 6).unwrap()));
        let big_d = p("4^5 6 12^7 18^8 24^9 36");
        assert!(is_in_d(&big_d, &Params::new(3, 2, 6).unwrap()));
        assert!(is_in_d(&p("3+2"), &Params::new(0, 2, 1).unwrap()));

        let e = Partition::empty();
        assert!(is_in_o(&e, &Params::new(0, 3, 2).unwrap()));
        assert!(!is_in_o(&e, &Params::new(1, 3, 2).unwrap()));
        assert!(is_in_d(&e, &Params::new(0, 3, 2).unwrap()));
    }

    #[test]
    fn repeated_parts_count_once() {
        // 1 4^2 8 12 has three different even parts
        assert_eq!(o_index(&p("1 4^2 8 12"), 2, 2), 3);
        assert_eq!(o_index(&p("4^9"), 2, 1), 1);
    }

    #[test]
    fn euler_beck_small_values() {
        assert_eq!(count_o(0, 2, 1, 5).unwrap(), 3);
        assert_eq!(count_d(0, 2, 1, 5).unwrap(), 3);
        assert_eq!(count_o(1, 2, 1, 5).unwrap(), 4);
        assert_eq!(count_o(3, 2, 2, 29).unwrap(), 8);
        assert_eq!(count_d(3, 2, 2, 29).unwrap(), 8);
        assert_eq!(count_o(0, 4, 3, 0).unwrap(), 1);
        assert_eq!(count_o(2, 4, 3, 0).unwrap(), 0);
        assert_eq!(excess(0, 2, 1, 5).unwrap(), 4);
        assert_eq!(excess(2, 3, 2, 0).unwrap(), 0);
        assert_eq!(excess_cumulative(0, 2, 1, 5).unwrap(), 4);
        assert_eq!(excess_cumulative(3, 1, 2, 17).unwrap(), 0);
    }

    #[test]
    fn length_refinements() {
        let total: i64 = (0..=5).map(|m| count_o_by_length(0, 2, 1, m, 5).unwrap()).sum();
        assert_eq!(total, 3);
        let parts: i64 = (0..=5)
            .map(|m| m as i64 * count_o_by_length(0, 2, 1, m, 5).unwrap())
            .sum();
        assert_eq!(parts, 9);
        let parts_d: i64 = (0..=5)
            .map(|m| m as i64 * count_d_by_length(0, 2, 1, m, 5).unwrap())
            .sum();
        assert_eq!(parts_d, 5);
        assert_eq!(count_o_by_length(0, 2, 1, 0, 0).unwrap(), 1);
        assert_eq!(count_o_by_length(1, 2, 1, 0, 0).unwrap(), 0);
    }

    #[test]
    fn class_and_resmult_refinements() {
        let weighted = |f: &dyn Fn(u64) -> i64| (0..=5).map(|m| m as i64 * f(m)).sum::<i64>();
        assert_eq!(weighted(&|m| count_o_class(0, 2, 1, 1, m, 5).unwrap()), 9);
        assert_eq!(weighted(&|m| count_o_class(0, 2, 1, 0, m, 5).unwrap()), 0);
        assert_eq!(weighted(&|m| count_d_resmult(0, 2, 1, 1, m, 5).unwrap()), 5);
        assert_eq!(count_o_class(0, 3, 2, 1, 0, 0).unwrap(), 1);
        assert_eq!(count_o_class(0, 3, 2, 1, 1, 0).unwrap(), 0);
        assert_eq!(count_d_resmult(0, 3, 2, 2, 0, 0).unwrap(), 1);
        assert!(count_o_class(0, 3, 1, 3, 0, 5).is_err());
        assert!(count_d_resmult(0, 3, 1, 3, 0, 5).is_err());

        for n in 0..=12 {
            let d = count_d(1, 3, 2, n).unwrap();
            let sum: i64 = (0..=n).map(|m| count_d_resmult(1, 3, 2, 0, m, n).unwrap()).sum();
            assert_eq!(sum, d);
        }
    }

    #[test]
    fn dbar_and_refined_excess() {
        assert_eq!(count_dbar(0, 2, 1, 0, 5).unwrap(), 3);
        assert!(count_dbar(0, 1, 1, 0, 5).is_err());
        assert_eq!(excess_refined(0, 2, 1, 1, 5).unwrap(), 4);
        assert_eq!(excess_refined(1, 3, 2, 2, 0).unwrap(), 0);
        assert!(excess_refined(0, 1, 1, 1, 5).is_err());
        assert!(excess_refined(0, 3, 1, 0, 5).is_err());
        assert!(excess_refined(0, 3, 1, 3, 5).is_err());
        for n in 0..=14 {
            assert_eq!(
                excess_refined(1, 3, 1, 1, n).unwrap(),
                excess_refined(1, 3, 1, 2, n).unwrap()
            );
        }
    }

    #[test]
    fn amdeberhan_andrews_ballantine_split() {
        // 4+1, 3+2 and 2+1+1+1 each carry their one even part once; 2+2+1 twice
        assert_eq!(count_o1k_u(2, 1, 5).unwrap(), 3);
        assert_eq!(count_o1k_u(2, 2, 5).unwrap(), 1);
        assert_eq!(count_d1k_u(2, 1, 5).unwrap(), 3);
        for n in 0..=15 {
            let split: i64 = (1..=n.max(1)).map(|u| count_o1k_u(3, u, n).unwrap()).sum();
            assert_eq!(split, count_o(1, 3, 1, n).unwrap());
        }
        assert!(count_o1k_u(2, 0, 5).is_err());
        assert!(count_d1k_u(1, 1, 5).is_err());
    }

    #[test]
    fn beck_style_lhs() {
        assert_eq!(fu_tang_lhs(2, 5).unwrap(), 4);
        assert_eq!(fu_tang_lhs(3, 0).unwrap(), 0);
        assert_eq!(fu_tang_lhs(3, 4).unwrap(), 1);
        // distinct parts of 5: 5 + 2 + 2; different parts of odd partitions: 1 + 2 + 1
        assert_eq!(andrews_second_lhs(5).unwrap(), 1);
        assert!(fu_tang_lhs(1, 4).is_err());
    }

    #[test]
    fn direct_no_kb_multiple_predicates() {
        assert_eq!(count_no_part_divisible(2, 1, 5).unwrap(), 3);
        assert_eq!(count_no_part_divisible_and_repeated(2, 1, 5).unwrap(), 3);
        assert_eq!(count_no_part_divisible(1, 1, 0).unwrap(), 1);
        assert_eq!(count_no_part_divisible(1, 1, 3).unwrap(), 0);
    }

    #[test]
    fn histograms_match_pointwise_counts() {
        let h = o_histogram(2, 2, 29).unwrap();
        assert_eq!(h[3], 8);
        for (j, &v) in h.iter().enumerate() {
            assert_eq!(v, count_o(j as u64, 2, 2, 29).unwrap());
        }
        assert_eq!(d_histogram(2, 2, 29).unwrap(), h);
    }

    #[test]
    fn parameter_validation() {
        assert!(Params::new(0, 0, 1).is_err());
        assert!(Params::new(0, 1, 0).is_err());
        assert!(Params::new(0, u64::MAX, 2).is_err());
        assert!(Params::beck(0, 1, 1).is_err());
        assert!(count_o(0, 0, 1, 3).is_err());
    }

    #[test]
    fn queries_validate_indices() {
        let q = |family, t, m| Query { family, j: 1, k: 2, b: 1, t, m, n: 5 };
        assert_eq!(q(Family::O, None, None).evaluate().unwrap(), 4);
        assert!(q(Family::O, Some(1), None).evaluate().is_err());
        assert!(q(Family::OT, None, Some(1)).evaluate().is_err());
        assert_eq!(q(Family::O1u, None, Some(1)).evaluate().unwrap(), 3);
        assert!(Query { b: 2, ..q(Family::O1u, None, Some(1)) }.evaluate().is_err());
        assert_eq!(q(Family::Ocum, None, None).evaluate().unwrap(), 7);
        assert_eq!("Dbar".parse::<Family>().unwrap(), Family::Dbar);
        assert!("Q".parse::<Family>().is_err());
    }

    #[test]
    fn cache_roundtrip_is_sorted_and_typed() {
        let mut table = CountTable::new();
        let qs = [
            Query { family: Family::OT, j: 0, k: 2, b: 1, t: Some(1), m: Some(3), n: 5 },
            Query { family: Family::D, j: 3, k: 2, b: 2, t: None, m: None, n: 29 },
            Query { family: Family::O, j: 1, k: 2, b: 1, t: None, m: None, n: 5 },
        ];
        for q in &qs {
            table.get_or_compute(q).unwrap();
        }
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "family,j,k,b,t,m,n,value\nO,1,2,1,,,5,4\nD,3,2,2,,,29,8\nO_t,0,2,1,1,3,5,1\n"
        );
        let back = CountTable::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.len(), 3);
        for q in &qs {
            let row = back.get(q).unwrap();
            assert_eq!(row.value, table.get(q).unwrap().value);
            assert_eq!(row.provenance, Provenance::CacheFile);
        }
        assert!(CountTable::read_csv("family,j\nO,1\n".as_bytes()).is_err());
        assert!(CountTable::read_csv("family,j,k,b,t,m,n,value\nO,1,2,1,1,,5,4\n".as_bytes()).is_err());
    }
}
