//! Canonical integer partitions and the per-partition statistics used by the
//! counting, series and bijection layers.
//!
//! A [`Partition`] is stored as `(part, multiplicity)` pairs with strictly
//! increasing parts. Every part and every multiplicity is at least one, so the
//! representation of a given multiset is unique and `==` is multiset equality.
//! Parts that do not occur have multiplicity zero by convention; all statistics
//! treat them uniformly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    pairs: Vec<(u64, u64)>,
    weight: u64,
}

/// Multiplicity `s` of one part split as `s = residual + k * quotient`, with the
/// quotient further expanded in base `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultDecomposition {
    pub residual: u64,
    pub quotient: u64,
    /// Base-`k` digits of `quotient`, least significant first: `digits[e]` is the
    /// coefficient of `k^(e+1)` in the expansion of the multiplicity. Empty when
    /// the quotient is zero or when `k == 1`.
    pub base_k_digits: Vec<u64>,
}

/// `part = b * k^alpha * core` with `k` not dividing `core`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KadicForm {
    pub alpha: u32,
    pub core: u64,
}

/// Accumulates `(part, multiplicity)` contributions into a canonical partition.
/// Zero multiplicities are dropped, repeated parts merge.
#[derive(Debug, Default)]
pub struct PartitionBuilder {
    acc: BTreeMap<u64, u64>,
}

impl PartitionBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, part: u64, mult: u64) -> Result<&mut Self> {
        if mult == 0 {
            return Ok(self);
        }
        if part == 0 {
            return Err(Error::arg("parts must be positive"));
        }
        let slot = self.acc.entry(part).or_insert(0);
        *slot = slot.checked_add(mult).ok_or(Error::Overflow("multiplicity"))?;
        Ok(self)
    }

    pub fn build(self) -> Result<Partition> {
        let mut weight: u64 = 0;
        for (&p, &m) in &self.acc {
            let size = p.checked_mul(m).ok_or(Error::Overflow("weight"))?;
            weight = weight.checked_add(size).ok_or(Error::Overflow("weight"))?;
        }
        Ok(Partition {
            pairs: self.acc.into_iter().collect(),
            weight,
        })
    }
}

impl Partition {
    /// The unique partition of zero.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a partition from `(part, multiplicity)` pairs in any order;
    /// repeated parts accumulate and zero multiplicities are ignored.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut b = PartitionBuilder::new();
        for (p, m) in pairs {
            b.add(p, m)?;
        }
        b.build()
    }

    /// Builds a partition from a flat list of parts in any order.
    pub fn from_parts(parts: &[u64]) -> Result<Self> {
        Self::from_pairs(parts.iter().map(|&p| (p, 1)))
    }

    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// `s_i`: multiplicity of `part`, zero when absent.
    pub fn multiplicity(&self, part: u64) -> u64 {
        match self.pairs.binary_search_by_key(&part, |&(p, _)| p) {
            Ok(idx) => self.pairs[idx].1,
            Err(_) => 0,
        }
    }

    /// Parts as a non-increasing flat list.
    pub fn parts_desc(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.total_parts() as usize);
        for &(p, m) in self.pairs.iter().rev() {
            out.extend(std::iter::repeat_n(p, m as usize));
        }
        out
    }

    /// Number of parts counted with multiplicity.
    pub fn total_parts(&self) -> u64 {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    /// Number of different part values.
    pub fn distinct_parts(&self) -> u64 {
        self.pairs.len() as u64
    }

    /// Number of parts congruent to `residue` modulo `modulus`, with multiplicity.
    pub fn parts_in_class(&self, modulus: u64, residue: u64) -> Result<u64> {
        check_class(modulus, residue)?;
        Ok(self
            .pairs
            .iter()
            .filter(|&&(p, _)| p % modulus == residue)
            .map(|&(_, m)| m)
            .sum())
    }

    /// Number of different part values congruent to `residue` modulo `modulus`.
    pub fn distinct_parts_in_class(&self, modulus: u64, residue: u64) -> Result<u64> {
        check_class(modulus, residue)?;
        Ok(self.pairs.iter().filter(|&&(p, _)| p % modulus == residue).count() as u64)
    }

    pub fn mult_decomposition(&self, part: u64, k: u64) -> Result<MultDecomposition> {
        decompose_multiplicity(self.multiplicity(part), k)
    }

    /// Number of different parts divisible by `b` whose multiplicity modulo `k`
    /// is at least `t`.
    pub fn distinct_parts_resmult_at_least(&self, b: u64, k: u64, t: u64) -> Result<u64> {
        if b == 0 {
            return Err(Error::arg("b must be at least 1"));
        }
        if k < 2 {
            return Err(Error::arg("k must be at least 2"));
        }
        if t >= k {
            return Err(Error::arg(format!("t={t} outside [0, {}]", k - 1)));
        }
        Ok(self
            .pairs
            .iter()
            .filter(|&&(p, m)| p % b == 0 && m % k >= t)
            .count() as u64)
    }

    /// Exponent form with every exponent written out, `^1` included.
    pub fn to_full_exponent_string(&self) -> String {
        let tokens: Vec<String> = self.pairs.iter().map(|(p, m)| format!("{p}^{m}")).collect();
        tokens.join(" ")
    }
}

fn check_class(modulus: u64, residue: u64) -> Result<()> {
    if modulus == 0 {
        return Err(Error::arg("modulus must be at least 1"));
    }
    if residue >= modulus {
        return Err(Error::arg(format!(
            "residue {residue} outside [0, {}]",
            modulus - 1
        )));
    }
    Ok(())
}

/// Splits a multiplicity as `residual + k * quotient` and expands the quotient
/// in base `k`. With `k == 1` the residual is zero and no digits are produced.
pub fn decompose_multiplicity(s: u64, k: u64) -> Result<MultDecomposition> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    let residual = s % k;
    let quotient = s / k;
    let mut base_k_digits = Vec::new();
    if k >= 2 {
        let mut q = quotient;
        while q > 0 {
            base_k_digits.push(q % k);
            q /= k;
        }
    }
    Ok(MultDecomposition {
        residual,
        quotient,
        base_k_digits,
    })
}

pub fn kadic_form(part: u64, b: u64, k: u64) -> Result<KadicForm> {
    if b == 0 || k < 2 {
        return Err(Error::arg("kadic_form needs b >= 1 and k >= 2"));
    }
    if part == 0 || !part.is_multiple_of(b) {
        return Err(Error::arg(format!("{b} does not divide {part}")));
    }
    let mut core = part / b;
    let mut alpha = 0;
    while core.is_multiple_of(k) {
        core /= k;
        alpha += 1;
    }
    Ok(KadicForm { alpha, core })
}

impl fmt::Display for Partition {
    /// Canonical exponent form: ascending parts, `^1` omitted, empty string for
    /// the empty partition.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, &(p, m)) in self.pairs.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            if m == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_partition(s)
    }
}

fn parse_positive(token: &str, what: &str) -> Result<u64> {
    let bad = |reason: String| Error::Parse {
        token: token.to_string(),
        reason,
    };
    if token.is_empty() || !token.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad(format!("{what} must be a positive decimal integer")));
    }
    let v: u64 = token
        .parse()
        .map_err(|_| bad(format!("{what} does not fit in 64 bits")))?;
    if v == 0 {
        return Err(bad(format!("{what} must be positive")));
    }
    Ok(v)
}

/// Parses either exponent form (`4^5 12^7 36`) or sum form (`3+1+1`). The empty
/// or all-whitespace string is the empty partition.
pub fn parse_partition(text: &str) -> Result<Partition> {
    let text = text.trim();
    let mut b = PartitionBuilder::new();
    if text.is_empty() {
        return b.build();
    }
    if text.contains('+') {
        for raw in text.split('+') {
            let token = raw.trim();
            let part = parse_positive(token, "part")?;
            b.add(part, 1)?;
        }
    } else {
        for token in text.split_whitespace() {
            let (part, mult) = match token.split_once('^') {
                Some((p, m)) => {
                    let part = parse_positive(p, "part").map_err(|_| Error::Parse {
                        token: token.to_string(),
                        reason: "part must be a positive decimal integer".into(),
                    })?;
                    let mult = parse_positive(m, "exponent").map_err(|_| Error::Parse {
                        token: token.to_string(),
                        reason: "exponent must be a positive decimal integer".into(),
                    })?;
                    (part, mult)
                }
                None => (parse_positive(token, "part")?, 1),
            };
            b.add(part, mult)?;
        }
    }
    b.build()
}

/// All partitions of `n`, largest part first, in lexicographically decreasing
/// order of their non-increasing part sequences: `5, 4+1, 3+2, 3+1+1, ...`.
pub struct PartitionIter {
    // non-increasing parts of the partition to yield next; None once exhausted
    current: Option<Vec<u64>>,
}

impl PartitionIter {
    pub fn new(n: u64) -> Self {
        let start = if n == 0 { Vec::new() } else { vec![n] };
        Self {
            current: Some(start),
        }
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let parts = self.current.take()?;
        let out = partition_from_desc(&parts);

        // successor: drop trailing ones, decrement the last part > 1 and
        // refill the freed amount greedily with parts no larger than it
        let mut next = parts;
        let mut freed = 0u64;
        while next.last() == Some(&1) {
            next.pop();
            freed += 1;
        }
        if let Some(last) = next.pop() {
            let smaller = last - 1;
            freed += last;
            while freed >= smaller {
                next.push(smaller);
                freed -= smaller;
            }
            if freed > 0 {
                next.push(freed);
            }
            self.current = Some(next);
        }
        Some(out)
    }
}

fn partition_from_desc(parts: &[u64]) -> Partition {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for &p in parts.iter().rev() {
        match pairs.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => pairs.push((p, 1)),
        }
    }
    Partition {
        pairs,
        weight: parts.iter().sum(),
    }
}

pub fn enumerate_partitions(n: u64) -> PartitionIter {
    PartitionIter::new(n)
}

const MEMO_LIMIT: u64 = 64;

/// Memoized enumeration used by the counting layer. Sizes above an internal
/// limit are enumerated afresh on every call.
pub fn partitions_of(n: u64) -> Arc<[Partition]> {
    static MEMO: OnceLock<Mutex<Vec<Option<Arc<[Partition]>>>>> = OnceLock::new();
    if n > MEMO_LIMIT {
        return enumerate_partitions(n).collect();
    }
    let memo = MEMO.get_or_init(|| Mutex::new(vec![None; MEMO_LIMIT as usize + 1]));
    if let Some(hit) = memo.lock().unwrap()[n as usize].clone() {
        return hit;
    }
    let list: Arc<[Partition]> = enumerate_partitions(n).collect();
    memo.lock().unwrap()[n as usize] = Some(list.clone());
    list
}
