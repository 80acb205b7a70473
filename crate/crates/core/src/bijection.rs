//! The explicit correspondence between the O- and D-families.
//!
//! `phi` rewrites each block `i^s` of a partition:
//!
//! * `kb | i`: `(i/k)^(k s)`,
//! * `b | i`, `kb ∤ i`: `i^r, (k i)^(u_1), (k^2 i)^(u_2), ...` where
//!   `s = r + u_1 k + u_2 k^2 + ...` is the base-`k` expansion of `s`,
//! * `b ∤ i`: unchanged.
//!
//! `psi` rewrites each block `i^s` with `b | i` and `s = r + k u` as
//! `(k i)^u, (i / k^a)^(k^a r)` where `a` is the `k`-adic valuation of `i/b`;
//! other blocks are unchanged.
//!
//! Output blocks landing on the same part value are merged. With `k = 1` both
//! maps are the identity.

use std::time::Instant;

use crate::counting::{d_index, o_index};
use crate::error::{Error, Result};
use crate::partition::{decompose_multiplicity, kadic_form, partitions_of, Partition, PartitionBuilder};
use crate::verify::{Cell, Failure, Val, VerificationReport};

fn check_kb(k: u64, b: u64) -> Result<()> {
    if k == 0 || b == 0 {
        return Err(Error::arg("k and b must be at least 1"));
    }
    k.checked_mul(b).ok_or(Error::Overflow("k*b"))?;
    Ok(())
}

fn times(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow("bijection part size"))
}

pub fn phi(pi: &Partition, k: u64, b: u64) -> Result<Partition> {
    check_kb(k, b)?;
    if k == 1 {
        return Ok(pi.clone());
    }
    let kb = k * b;
    let mut out = PartitionBuilder::new();
    for &(i, s) in pi.pairs() {
        if i % kb == 0 {
            out.add(i / k, times(k, s)?)?;
        } else if i % b == 0 {
            let d = decompose_multiplicity(s, k)?;
            out.add(i, d.residual)?;
            let mut part = i;
            for &digit in &d.base_k_digits {
                part = times(part, k)?;
                out.add(part, digit)?;
            }
        } else {
            out.add(i, s)?;
        }
    }
    out.build()
}

pub fn psi(pi: &Partition, k: u64, b: u64) -> Result<Partition> {
    check_kb(k, b)?;
    if k == 1 {
        return Ok(pi.clone());
    }
    let mut out = PartitionBuilder::new();
    for &(i, s) in pi.pairs() {
        if i % b == 0 {
            let (r, u) = (s % k, s / k);
            out.add(times(k, i)?, u)?;
            let form = kadic_form(i, b, k)?;
            let scale = k.checked_pow(form.alpha).ok_or(Error::Overflow("k^alpha"))?;
            out.add(i / scale, times(scale, r)?)?;
        } else {
            out.add(i, s)?;
        }
    }
    out.build()
}

fn not_divisible_blocks(pi: &Partition, b: u64) -> Vec<(u64, u64)> {
    pi.pairs().iter().copied().filter(|&(p, _)| p % b != 0).collect()
}

/// Exhaustively checks both maps on every partition of every `n <= n_max`:
/// weight preservation, transport of the family index `j`, both inverse laws,
/// and that blocks with parts not divisible by `b` are left untouched.
pub fn verify_roundtrip(n_max: u64, k: u64, b: u64) -> Result<VerificationReport> {
    check_kb(k, b)?;
    if k < 2 {
        return Err(Error::arg("round-trip verification needs k >= 2"));
    }
    let started = Instant::now();
    let mut grid = Vec::new();
    let mut failures = Vec::new();
    for n in 0..=n_max {
        let cell = Cell::new(None, k, b, None, n);
        grid.push(cell);
        for pi in partitions_of(n).iter() {
            failures.extend(roundtrip_failures(pi, k, b, cell)?);
        }
    }
    Ok(VerificationReport::new("bijection", grid, failures, started.elapsed()))
}

pub(crate) fn roundtrip_failures(pi: &Partition, k: u64, b: u64, cell: Cell) -> Result<Vec<Failure>> {
    let mut failures = Vec::new();
    let witness = || Some(pi.to_string());
    let mut fail = |what: &str, lhs: Val, rhs: Val| {
        failures.push(Failure {
            cell,
            what: what.to_string(),
            lhs,
            rhs,
            witness: witness(),
        })
    };

    let image = phi(pi, k, b)?;
    if image.weight() != pi.weight() {
        fail("weight of phi", Val::from(image.weight()), Val::from(pi.weight()));
    }
    if d_index(&image, k, b) != o_index(pi, k, b) {
        fail(
            "j transported by phi",
            Val::from(d_index(&image, k, b)),
            Val::from(o_index(pi, k, b)),
        );
    }
    let back = psi(&image, k, b)?;
    if &back != pi {
        fail("psi(phi(pi)) = pi", Val::from(&back), Val::from(pi));
    }
    if not_divisible_blocks(&image, b) != not_divisible_blocks(pi, b) {
        fail("phi fixes parts not divisible by b", Val::from(&image), Val::from(pi));
    }

    let image = psi(pi, k, b)?;
    if image.weight() != pi.weight() {
        fail("weight of psi", Val::from(image.weight()), Val::from(pi.weight()));
    }
    if o_index(&image, k, b) != d_index(pi, k, b) {
        fail(
            "j transported by psi",
            Val::from(o_index(&image, k, b)),
            Val::from(d_index(pi, k, b)),
        );
    }
    let back = phi(&image, k, b)?;
    if &back != pi {
        fail("phi(psi(pi)) = pi", Val::from(&back), Val::from(pi));
    }
    if not_divisible_blocks(&image, b) != not_divisible_blocks(pi, b) {
        fail("psi fixes parts not divisible by b", Val::from(&image), Val::from(pi));
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Partition {
        text.parse().unwrap()
    }

    #[test]
    fn worked_example_both_directions() {
        let d_side = p("4^5 6 12^7 18^8 24^9 36");
        let o_side = p("4^5 6^7 18^2 24^3 36^4 48^4");
        assert_eq!(psi(&d_side, 2, 6).unwrap(), o_side);
        assert_eq!(phi(&o_side, 2, 6).unwrap(), d_side);
        assert_eq!(d_side.weight(), 506);
        assert_eq!(o_side.weight(), 506);
    }

    #[test]
    fn block_rules() {
        // 12^7 with b=6, k=2: r=1, u=3, alpha=1 -> 24^3 and 6^2
        assert_eq!(psi(&p("12^7"), 2, 6).unwrap(), p("6^2 24^3"));
        // 6^7: base-2 digits of 7 -> 6, 12, 24 once each
        assert_eq!(phi(&p("6^7"), 2, 6).unwrap(), p("6 12 24"));
        assert_eq!(phi(&p("1 4 8 16"), 2, 2).unwrap(), p("1 2^2 4^2 8^2"));
        assert_eq!(psi(&p("1 2^2 4^2 8^2"), 2, 2).unwrap(), p("1 4 8 16"));
        // parts not divisible by b pass through
        assert_eq!(phi(&p("5^3 7"), 3, 2).unwrap(), p("5^3 7"));
    }

    #[test]
    fn empty_and_identity_cases() {
        let e = Partition::empty();
        assert_eq!(phi(&e, 2, 1).unwrap(), e);
        assert_eq!(psi(&e, 3, 2).unwrap(), e);
        let q = p("2^5 4^3 6");
        assert_eq!(phi(&q, 1, 2).unwrap(), q);
        assert_eq!(psi(&q, 1, 2).unwrap(), q);
        assert!(phi(&q, 0, 2).is_err());
        assert!(psi(&q, 2, 0).is_err());
    }

    #[test]
    fn outputs_accumulate_on_shared_values() {
        // psi(4^3 2^1, k=2, b=1): 4^3 -> 8^1 + 1^4 ; 2^1 -> 1^2 ; the ones merge
        assert_eq!(psi(&p("2 4^3"), 2, 1).unwrap(), p("1^6 8"));
    }

    #[test]
    fn small_roundtrips_pass() {
        let report = verify_roundtrip(12, 3, 2).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.grid.len(), 13);
        assert!(verify_roundtrip(0, 2, 1).unwrap().passed());
        assert!(verify_roundtrip(5, 1, 1).is_err());
    }
}
