//! Generating functions for the O/D families and their refinements, built as
//! truncated products.
//!
//! Conventions: `kb = k*b`; `(a; q^s)_inf` with `a = c w^e q^o` is the product
//! over `m >= 0` of `1 - c w^e q^(o + s m)`; only factors whose `q` offset is at
//! most the truncation order are applied, which is exact at that order.

use std::fmt;
use std::str::FromStr;

use super::poly::PolyZW;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

fn kb_of(k: u64, b: u64) -> Result<usize> {
    if k == 0 || b == 0 {
        return Err(Error::arg("k and b must be at least 1"));
    }
    let kb = k.checked_mul(b).ok_or(Error::Overflow("k*b"))?;
    usize::try_from(kb).map_err(|_| Error::Overflow("k*b"))
}

fn check_k2(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::arg(format!("k={k}: this series needs k >= 2")));
    }
    Ok(())
}

fn check_t(k: u64, t: u64) -> Result<usize> {
    check_k2(k)?;
    if t == 0 || t >= k {
        return Err(Error::arg(format!("t={t} outside [1, {}]", k - 1)));
    }
    Ok(t as usize)
}

fn offsets(offset: usize, step: usize, order: usize) -> impl Iterator<Item = usize> {
    (0..)
        .map(move |m: usize| offset.saturating_add(step.saturating_mul(m)))
        .take_while(move |&d| d <= order)
}

/// `s *= (c w^e q^offset; q^step)_inf`
pub fn mul_pochhammer(s: &mut TruncatedSeries, c: &PolyZW, w_exp: u32, offset: usize, step: usize) -> Result<()> {
    if offset == 0 || step == 0 {
        return Err(Error::arg("q-Pochhammer offset and step must be at least 1"));
    }
    let a = c.shift_w(w_exp)?;
    for d in offsets(offset, step, s.order()) {
        s.mul_one_minus(&a, d)?;
    }
    Ok(())
}

/// `s /= (c w^e q^offset; q^step)_inf`
pub fn div_pochhammer(s: &mut TruncatedSeries, c: &PolyZW, w_exp: u32, offset: usize, step: usize) -> Result<()> {
    if offset == 0 || step == 0 {
        return Err(Error::arg("q-Pochhammer offset and step must be at least 1"));
    }
    let a = c.shift_w(w_exp)?;
    for d in offsets(offset, step, s.order()) {
        s.div_one_minus(&a, d)?;
    }
    Ok(())
}

/// `prod_{m>=1} (1 - c w^w_exp q^(step m))`, i.e. `(c w^e q^step; q^step)_inf`.
pub fn pochhammer_product(c: &PolyZW, w_exp: u32, step: usize, order: usize) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, c, w_exp, step, step)?;
    Ok(s)
}

/// `sum_{i>=1} q^(step i) / (1 - c q^(step i))`.
pub fn geom_tail(step: usize, c: &PolyZW, order: usize) -> Result<TruncatedSeries> {
    if step == 0 {
        return Err(Error::arg("step must be at least 1"));
    }
    let mut terms = Vec::new();
    for base in offsets(step, step, order) {
        let mut power = PolyZW::one();
        for d in offsets(base, base, order) {
            terms.push((d, power.clone()));
            power = power.mul(c)?;
        }
    }
    TruncatedSeries::from_terms(terms, order)
}

/// `sum_{j>=1} q^(num j) / (1 - q^(den j))`, with `w`/`z` absent.
pub fn ratio_lambert(num: usize, den: usize, order: usize) -> Result<TruncatedSeries> {
    if num == 0 || den == 0 {
        return Err(Error::arg("steps must be at least 1"));
    }
    let mut terms = Vec::new();
    for j in 1.. {
        let start = num.saturating_mul(j);
        if start > order {
            break;
        }
        terms.extend(offsets(start, den.saturating_mul(j), order).map(|d| (d, PolyZW::one())));
    }
    TruncatedSeries::from_terms(terms, order)
}

// prod over i >= 1 with b not dividing i of 1/(1 - w^e q^i): the unrestricted
// parts not divisible by b, built directly rather than as a quotient
fn parts_not_divisible_by(b: usize, w_exp: u32, order: usize) -> Result<TruncatedSeries> {
    let mut s = TruncatedSeries::one(order);
    let a = PolyZW::one().shift_w(w_exp)?;
    for i in (1..=order).filter(|i| i % b != 0) {
        s.div_one_minus(&a, i)?;
    }
    Ok(s)
}

/// `sum O_{j,k,b}(n) z^j q^n = ((1-z) q^kb; q^kb)_inf / (q; q)_inf`.
pub fn gf_o(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, &PolyZW::one_minus_z(), 0, kb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 0, 1, 1)?;
    Ok(s)
}

/// `sum D_{j,k,b}(n) z^j q^n`, assembled part by part: parts not divisible by
/// `b` are unrestricted; each part `bi` contributes
/// `1 + x + ... + x^(k-1) + z x^k + z x^(k+1) + ...` with `x = q^(bi)`.
pub fn gf_d(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    kb_of(k, b)?;
    let (k, b) = (k as usize, b as usize);
    let mut s = parts_not_divisible_by(b, 0, order)?;
    for part in offsets(b, b, order) {
        let factor: Vec<(usize, PolyZW)> = (0..)
            .map(|e: usize| e * part)
            .take_while(|&d| d <= order)
            .enumerate()
            .map(|(e, d)| (d, if e < k { PolyZW::one() } else { PolyZW::z() }))
            .collect();
        s.mul_sparse(&factor)?;
    }
    Ok(s)
}

/// `sum (j+1) O_{j+1,k,b}(n) z^j q^n = gf_o * sum_{i>=1} q^(kbi) / (1 - (1-z) q^(kbi))`.
pub fn gf_jo(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    gf_o(k, b, order)?.mul(&geom_tail(kb, &PolyZW::one_minus_z(), order)?)
}

/// Second form of the `(j+1) O_{j+1}` series: `(q^kb;q^kb)/(q;q)` times
/// `sum_i q^(kbi)/(1-q^(kbi)) prod_{m != i} (1-(1-z)q^(kbm))/(1-q^(kbm))`.
pub fn gf_jo_sum_form(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    let one_minus_z = PolyZW::one_minus_z();
    let mut base = TruncatedSeries::one(order);
    mul_pochhammer(&mut base, &PolyZW::one(), 0, kb, kb)?;
    div_pochhammer(&mut base, &PolyZW::one(), 0, 1, 1)?;

    let mut total = TruncatedSeries::zero(order);
    for d_i in offsets(kb, kb, order) {
        let mut term = TruncatedSeries::monomial(PolyZW::one(), d_i, order);
        term.div_one_minus(&PolyZW::one(), d_i)?;
        for d_m in offsets(kb, kb, order).filter(|&d| d != d_i) {
            term.mul_one_minus(&one_minus_z, d_m)?;
            term.div_one_minus(&PolyZW::one(), d_m)?;
        }
        total = total.add(&term)?;
    }
    base.mul(&total)
}

/// `sum O_{j,k,b}(m,n) z^j w^m q^n = ((1-z) w q^kb; q^kb)_inf / (w q; q)_inf`.
pub fn gf_o_w(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, &PolyZW::one_minus_z(), 1, kb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 1, 1, 1)?;
    Ok(s)
}

/// `sum D_{j,k,b}(m,n) z^j w^m q^n = ((1-z) w^k q^kb; q^kb)_inf / (w q; q)_inf`.
pub fn gf_d_w(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    let w_exp = u32::try_from(k).map_err(|_| Error::Overflow("w degree"))?;
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, &PolyZW::one_minus_z(), w_exp, kb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 1, 1, 1)?;
    Ok(s)
}

/// `w` tracks parts congruent to `tb` mod `kb` (`1 <= t <= k-1`):
/// `((1-z)q^kb;q^kb) (q^tb;q^kb) / ((q;q) (w q^tb;q^kb))`.
pub fn gf_o_class(k: u64, b: u64, t: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    let tb = check_t(k, t)? * b as usize;
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, &PolyZW::one_minus_z(), 0, kb, kb)?;
    mul_pochhammer(&mut s, &PolyZW::one(), 0, tb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 0, 1, 1)?;
    div_pochhammer(&mut s, &PolyZW::one(), 1, tb, kb)?;
    Ok(s)
}

/// `w` tracks parts divisible by `kb`:
/// `((1-z) w q^kb;q^kb) (q^kb;q^kb) / ((w q^kb;q^kb) (q;q))`.
pub fn gf_o_class0(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    check_k2(k)?;
    let kb = kb_of(k, b)?;
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, &PolyZW::one_minus_z(), 1, kb, kb)?;
    mul_pochhammer(&mut s, &PolyZW::one(), 0, kb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 1, kb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 0, 1, 1)?;
    Ok(s)
}

/// `w` tracks different parts divisible by `b` with multiplicity mod `k` at
/// least `t`: `((1-z)q^kb;q^kb) / ((q;q)(q^kb;q^kb))` times
/// `prod_{i>=1} ((1 - q^(tbi)) + w (q^(tbi) - q^(kbi)))`.
pub fn gf_d_resmult(k: u64, b: u64, t: u64, order: usize) -> Result<TruncatedSeries> {
    let kb = kb_of(k, b)?;
    let tb = check_t(k, t)? * b as usize;
    let mut s = TruncatedSeries::one(order);
    mul_pochhammer(&mut s, &PolyZW::one_minus_z(), 0, kb, kb)?;
    div_pochhammer(&mut s, &PolyZW::one(), 0, 1, 1)?;
    div_pochhammer(&mut s, &PolyZW::one(), 0, kb, kb)?;
    let w_minus_one = PolyZW::w().sub(&PolyZW::one())?;
    let minus_w = PolyZW::monomial(-1, 0, 1);
    for i in (1..).take_while(|i| tb.saturating_mul(*i) <= order) {
        s.mul_sparse(&[
            (0, PolyZW::one()),
            (tb * i, w_minus_one.clone()),
            (kb.saturating_mul(i), minus_w.clone()),
        ])?;
    }
    Ok(s)
}

/// `sum Dbar_{j,k,b}(m,n) z^j w^m q^n` from its product form: parts not
/// divisible by `b` unrestricted, and each part `bi` contributes
/// `(1 + x + ... + x^(k-1)) (1 + z w x^k + z w^2 x^(2k) + ...)`, `x = q^(bi)`.
pub fn gf_dbar(k: u64, b: u64, order: usize) -> Result<TruncatedSeries> {
    check_k2(k)?;
    kb_of(k, b)?;
    let (k, b) = (k as usize, b as usize);
    let mut s = parts_not_divisible_by(b, 0, order)?;
    for part in offsets(b, b, order) {
        let residual: Vec<(usize, PolyZW)> = (0..k)
            .map(|e| (e * part, PolyZW::one()))
            .filter(|&(d, _)| d <= order)
            .collect();
        s.mul_sparse(&residual)?;
        let mut quotient = vec![(0, PolyZW::one())];
        for (r, d) in offsets(k * part, k * part, order).enumerate() {
            quotient.push((d, PolyZW::monomial(1, 1, r as u32 + 1)));
        }
        s.mul_sparse(&quotient)?;
    }
    Ok(s)
}

/// `d/dw |_{w=1}` of a product computed factor by factor:
/// `(prod f_i(1)) * sum_i f_i'(1) / f_i(1)`. Every `f_i(1)` must have constant
/// term `+-1`.
pub fn d_dw_at_1_product(factors: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    let order = factors
        .first()
        .map(TruncatedSeries::order)
        .ok_or_else(|| Error::arg("empty factor list"))?;
    let mut value = TruncatedSeries::one(order);
    let mut log_deriv = TruncatedSeries::zero(order);
    for f in factors {
        let at_one = f.at_w_one()?;
        let deriv = f.d_dw_at_1()?;
        log_deriv = log_deriv.add(&deriv.mul(&at_one.inverse()?)?)?;
        value = value.mul(&at_one)?;
    }
    value.mul(&log_deriv)
}

fn ratio_factor(numer_w_exp: u32, kb: usize, i: usize, order: usize) -> Result<TruncatedSeries> {
    let mut f = TruncatedSeries::one(order);
    f.mul_one_minus(&PolyZW::one_minus_z().shift_w(numer_w_exp)?, kb * i)?;
    f.div_one_minus(&PolyZW::w(), i)?;
    Ok(f)
}

/// Factors `(1 - (1-z) w q^(kbi)) / (1 - w q^i)`, `i = 1..=order`, whose
/// product is [`gf_o_w`].
pub fn gf_o_w_factors(k: u64, b: u64, order: usize) -> Result<Vec<TruncatedSeries>> {
    let kb = kb_of(k, b)?;
    (1..=order.max(1)).map(|i| ratio_factor(1, kb, i, order)).collect()
}

/// Factors `(1 - (1-z) w^k q^(kbi)) / (1 - w q^i)` whose product is [`gf_d_w`].
pub fn gf_d_w_factors(k: u64, b: u64, order: usize) -> Result<Vec<TruncatedSeries>> {
    let kb = kb_of(k, b)?;
    let w_exp = u32::try_from(k).map_err(|_| Error::Overflow("w degree"))?;
    (1..=order.max(1)).map(|i| ratio_factor(w_exp, kb, i, order)).collect()
}

/// Generating functions addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GfName {
    O,
    D,
    JO,
    OW,
    DW,
    OT,
    O0,
    DT,
    Dbar,
}

impl GfName {
    pub const ALL: [GfName; 9] = [
        GfName::O,
        GfName::D,
        GfName::JO,
        GfName::OW,
        GfName::DW,
        GfName::OT,
        GfName::O0,
        GfName::DT,
        GfName::Dbar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GfName::O => "O",
            GfName::D => "D",
            GfName::JO => "jO",
            GfName::OW => "O_w",
            GfName::DW => "D_w",
            GfName::OT => "O_t",
            GfName::O0 => "O_0",
            GfName::DT => "D_t",
            GfName::Dbar => "Dbar",
        }
    }

    pub fn needs_t(self) -> bool {
        matches!(self, GfName::OT | GfName::DT)
    }

    /// `z` never exceeds `n / z_step` in the `q^n` coefficient.
    pub fn z_step(self, k: u64, b: u64) -> usize {
        (k * b) as usize
    }

    pub fn build(self, k: u64, b: u64, t: Option<u64>, order: usize) -> Result<TruncatedSeries> {
        if self.needs_t() != t.is_some() {
            return Err(Error::arg(format!(
                "series {} {} a t index",
                self.name(),
                if self.needs_t() { "requires" } else { "does not take" }
            )));
        }
        let t = t.unwrap_or(0);
        match self {
            GfName::O => gf_o(k, b, order),
            GfName::D => gf_d(k, b, order),
            GfName::JO => gf_jo(k, b, order),
            GfName::OW => gf_o_w(k, b, order),
            GfName::DW => gf_d_w(k, b, order),
            GfName::OT => gf_o_class(k, b, t, order),
            GfName::O0 => gf_o_class0(k, b, order),
            GfName::DT => gf_d_resmult(k, b, t, order),
            GfName::Dbar => gf_dbar(k, b, order),
        }
    }
}

impl fmt::Display for GfName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GfName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GfName::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| {
            let names: Vec<&str> = GfName::ALL.iter().map(|g| g.name()).collect();
            Error::arg(format!("unknown series `{s}` (expected one of {})", names.join(", ")))
        })
    }
}
