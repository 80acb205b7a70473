//! Independent oracles: pentagonal-number recurrence, block-by-block dynamic
//! programming over part values, divisor counts and dense q-polynomial
//! products. None of them touch the library's enumerator or series code.

use pil::counting;
use pil::partition::partitions_of;
use pil::qseries::{self, PolyZW, TruncatedSeries};

/// p(0..=n) from Euler's pentagonal recurrence.
fn pentagonal_p(n: usize) -> Vec<i64> {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut total = 0i64;
        for i in 1i64.. {
            let g1 = (i * (3 * i - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if i % 2 == 1 { 1 } else { -1 };
            total += sign * p[m - g1];
            let g2 = (i * (3 * i + 1) / 2) as usize;
            if g2 <= m {
                total += sign * p[m - g2];
            }
        }
        p[m] = total;
    }
    p
}

/// Per (n, j): number of partitions and total number of parts, where block
/// `i^s` raises j by one when `marks(i, s)`.
#[derive(Clone, Copy, Default, Debug, PartialEq)]
struct Cell {
    count: i64,
    parts: i64,
}

fn block_dp(nmax: usize, marks: impl Fn(usize, usize) -> bool) -> Vec<Vec<Cell>> {
    let jdim = nmax + 2;
    let mut table = vec![vec![Cell::default(); jdim]; nmax + 1];
    table[0][0].count = 1;
    for i in 1..=nmax {
        let mut next = vec![vec![Cell::default(); jdim]; nmax + 1];
        for n in 0..=nmax {
            for j in 0..jdim {
                let here = table[n][j];
                if here.count == 0 {
                    continue;
                }
                for s in 0..=(nmax - n) / i {
                    let dj = usize::from(s > 0 && marks(i, s));
                    let slot = &mut next[n + s * i][j + dj];
                    slot.count += here.count;
                    slot.parts += here.parts + s as i64 * here.count;
                }
            }
        }
        table = next;
    }
    table
}

fn o_dp(k: usize, b: usize, nmax: usize) -> Vec<Vec<Cell>> {
    block_dp(nmax, |i, _| i % (k * b) == 0)
}

fn d_dp(k: usize, b: usize, nmax: usize) -> Vec<Vec<Cell>> {
    block_dp(nmax, |i, s| i % b == 0 && s >= k)
}

fn divisor_count(n: usize) -> i64 {
    (1..=n).filter(|d| n % d == 0).count() as i64
}

#[test]
fn partition_numbers_match_pentagonal_recurrence() {
    let p = pentagonal_p(45);
    for (n, &expected) in p.iter().enumerate() {
        assert_eq!(partitions_of(n as u64).len() as i64, expected, "p({n})");
    }
    let euler = qseries::pochhammer_product(&PolyZW::one(), 0, 1, 45).unwrap().inverse().unwrap();
    for (n, &expected) in p.iter().enumerate() {
        assert_eq!(euler.coeff_zq(0, n).unwrap(), expected, "1/(q;q) at q^{n}");
    }
    assert_eq!(p[29], 4565);
    assert_eq!(p[40], 37338);
}

#[test]
fn family_counts_match_block_dp() {
    let nmax = 24;
    for k in 1..=4 {
        for b in 1..=3 {
            let o = o_dp(k, b, nmax);
            let d = d_dp(k, b, nmax);
            let gf_o = qseries::gf_o(k as u64, b as u64, nmax).unwrap();
            let gf_d = qseries::gf_d(k as u64, b as u64, nmax).unwrap();
            for n in 0..=nmax {
                for j in 0..=4 {
                    let (ku, bu, ju, nu) = (k as u64, b as u64, j as u64, n as u64);
                    let tag = format!("k={k} b={b} j={j} n={n}");
                    assert_eq!(counting::count_o(ju, ku, bu, nu).unwrap(), o[n][j].count, "O {tag}");
                    assert_eq!(counting::count_d(ju, ku, bu, nu).unwrap(), d[n][j].count, "D {tag}");
                    assert_eq!(gf_o.coeff_zq(j as u32, n).unwrap(), o[n][j].count, "gf_O {tag}");
                    assert_eq!(gf_d.coeff_zq(j as u32, n).unwrap(), d[n][j].count, "gf_D {tag}");
                }
            }
        }
    }
}

#[test]
fn excess_matches_block_dp_totals() {
    let nmax = 22;
    for k in 1..=3 {
        for b in 1..=2 {
            let o = o_dp(k, b, nmax);
            let d = d_dp(k, b, nmax);
            for n in 0..=nmax {
                for j in 0..=3 {
                    let expected = o[n][j].parts - d[n][j].parts;
                    let got = counting::excess(j as u64, k as u64, b as u64, n as u64).unwrap();
                    assert_eq!(got, expected, "E k={k} b={b} j={j} n={n}");
                    let cum: i64 = (0..=j).map(|i| o[n][i].parts - d[n][i].parts).sum();
                    let got = counting::excess_cumulative(j as u64, k as u64, b as u64, n as u64).unwrap();
                    assert_eq!(got, cum, "Ecum k={k} b={b} j={j} n={n}");
                }
            }
        }
    }
}

#[test]
fn no_divisible_part_counts_match_dp() {
    // the j = 0 slices of the block DP
    for (k, b) in [(2, 1), (3, 1), (2, 2), (3, 2), (4, 3)] {
        let o = o_dp(k, b, 20);
        for n in 0..=20 {
            assert_eq!(
                counting::count_no_part_divisible(k as u64, b as u64, n as u64).unwrap(),
                o[n][0].count
            );
            assert_eq!(
                counting::count_no_part_divisible_and_repeated(k as u64, b as u64, n as u64).unwrap(),
                o[n][0].count
            );
        }
    }
}

#[test]
fn lambert_series_gives_divisor_counts() {
    let s = qseries::ratio_lambert(1, 1, 60).unwrap();
    assert_eq!(s.coeff_zq(0, 0).unwrap(), 0);
    for n in 1..=60 {
        assert_eq!(s.coeff_zq(0, n).unwrap(), divisor_count(n), "d({n})");
    }
    // num=1, den=2 counts divisors d of n with n/d odd
    let s = qseries::ratio_lambert(1, 2, 40).unwrap();
    for n in 1..=40usize {
        let expected = (1..=n).filter(|d| n % d == 0 && (n / d) % 2 == 1).count() as i64;
        assert_eq!(s.coeff_zq(0, n).unwrap(), expected, "n={n}");
    }
}

fn dense(series: &TruncatedSeries) -> Vec<i64> {
    (0..=series.order()).map(|n| series.coeff_zwq(0, 0, n).unwrap()).collect()
}

#[test]
fn series_product_matches_naive_convolution() {
    let order = 30;
    let a: Vec<i64> = (0..=order as i64).map(|i| (i * 7 % 11) - 5).collect();
    let b: Vec<i64> = (0..=order as i64).map(|i| (i * 3 % 5) - 2).collect();
    let to_series = |v: &[i64]| {
        TruncatedSeries::from_terms(v.iter().enumerate().map(|(d, &c)| (d, PolyZW::constant(c))), order).unwrap()
    };
    let mut naive = vec![0i64; order + 1];
    for i in 0..=order {
        for j in 0..=order - i {
            naive[i + j] += a[i] * b[j];
        }
    }
    let product = to_series(&a).mul(&to_series(&b)).unwrap();
    assert_eq!(dense(&product), naive);
}

#[test]
fn w_tracked_totals_match_dp() {
    // d/dw at w=1 of the part-tracking series gives total parts per (j, n)
    let nmax = 20;
    for (k, b) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
        let o = o_dp(k, b, nmax);
        let d = d_dp(k, b, nmax);
        let dow = qseries::gf_o_w(k as u64, b as u64, nmax).unwrap().d_dw_at_1().unwrap();
        let ddw = qseries::gf_d_w(k as u64, b as u64, nmax).unwrap().d_dw_at_1().unwrap();
        for n in 0..=nmax {
            for j in 0..=3 {
                assert_eq!(dow.coeff_zq(j as u32, n).unwrap(), o[n][j].parts, "O k={k} b={b} j={j} n={n}");
            }
            for j in 0..=3 {
                assert_eq!(ddw.coeff_zq(j as u32, n).unwrap(), d[n][j].parts, "D k={k} b={b} j={j} n={n}");
            }
        }
    }
}

#[test]
fn frozen_values() {
    // small worked example
    assert_eq!(counting::count_o(0, 2, 1, 5).unwrap(), 3);
    assert_eq!(counting::count_d(0, 2, 1, 5).unwrap(), 3);
    assert_eq!(counting::count_o(1, 2, 1, 5).unwrap(), 4);
    assert_eq!(counting::excess(0, 2, 1, 5).unwrap(), 4);
    // n = 29 table
    assert_eq!(counting::count_o(3, 2, 2, 29).unwrap(), 8);
    assert_eq!(counting::count_d(3, 2, 2, 29).unwrap(), 8);
    // both sides of the u=1, k=2 refinement at n=5 are 3
    assert_eq!(counting::count_o1k_u(2, 1, 5).unwrap(), 3);
    assert_eq!(counting::count_d1k_u(2, 1, 5).unwrap(), 3);
}
