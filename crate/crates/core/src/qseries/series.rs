use std::fmt::Write as _;

use rayon::prelude::*;

use super::poly::PolyZW;
use crate::error::{Error, Result};

// below this order the sequential convolution is faster than spawning tasks
const PARALLEL_MUL_ORDER: usize = 48;

/// Formal power series in `q` with [`PolyZW`] coefficients, known exactly up
/// to and including `q^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<PolyZW>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![PolyZW::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(PolyZW::one(), order)
    }

    pub fn constant(c: PolyZW, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * q^degree`, or zero when the degree lies beyond the order.
    pub fn monomial(c: PolyZW, degree: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// Builds a series from `(q_degree, coefficient)` terms; terms beyond the
    /// order are dropped and repeated degrees accumulate.
    pub fn from_terms<I: IntoIterator<Item = (usize, PolyZW)>>(terms: I, order: usize) -> Result<Self> {
        let mut s = Self::zero(order);
        for (d, c) in terms {
            if d <= order {
                s.coeffs[d].add_assign(&c)?;
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PolyZW] {
        &self.coeffs
    }

    /// Coefficient of `q^n`; `None` beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&PolyZW> {
        self.coeffs.get(n)
    }

    /// `[z^j w^m q^n]`, erroring when `n` exceeds the order.
    pub fn coeff_zwq(&self, j: u32, m: u32, n: usize) -> Result<i64> {
        self.coeff(n)
            .map(|p| p.coeff(j, m))
            .ok_or_else(|| Error::arg(format!("q^{n} is beyond truncation order {}", self.order())))
    }

    /// `[z^j q^n]` after setting `w = 1`.
    pub fn coeff_zq(&self, j: u32, n: usize) -> Result<i64> {
        let p = self
            .coeff(n)
            .ok_or_else(|| Error::arg(format!("q^{n} is beyond truncation order {}", self.order())))?;
        let mut total = 0i64;
        for ((z, _), c) in p.terms() {
            if z == j {
                total = crate::error::add(total, c)?;
            }
        }
        Ok(total)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Same series known to a smaller order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::arg(format!(
                "cannot extend a series of order {} to {order}",
                self.order()
            )));
        }
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    /// Multiplies every coefficient by the polynomial `c`.
    pub fn scale(&self, c: &PolyZW) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    /// Truncated Cauchy product. Output coefficients are computed
    /// independently, so the parallel path is bit-identical to the sequential one.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let out_coeff = |n: usize| -> Result<PolyZW> {
            let mut acc = PolyZW::zero();
            for i in 0..=n {
                let (a, b) = (&self.coeffs[i], &other.coeffs[n - i]);
                if !a.is_zero() && !b.is_zero() {
                    acc.add_product(a, b)?;
                }
            }
            Ok(acc)
        };
        let coeffs = if order >= PARALLEL_MUL_ORDER {
            (0..=order).into_par_iter().map(out_coeff).collect::<Result<Vec<_>>>()?
        } else {
            (0..=order).map(out_coeff).collect::<Result<Vec<_>>>()?
        };
        Ok(Self { coeffs })
    }

    /// In place: `self *= sum_s c_s q^s` for a sparse polynomial in `q`.
    pub fn mul_sparse(&mut self, factor: &[(usize, PolyZW)]) -> Result<()> {
        let order = self.order();
        let mut out = vec![PolyZW::zero(); order + 1];
        for (shift, c) in factor {
            if c.is_zero() || *shift > order {
                continue;
            }
            for n in *shift..=order {
                let src = &self.coeffs[n - shift];
                if !src.is_zero() {
                    out[n].add_product(src, c)?;
                }
            }
        }
        self.coeffs = out;
        Ok(())
    }

    /// In place: `self *= 1 - c q^shift` (`shift >= 1`).
    pub fn mul_one_minus(&mut self, c: &PolyZW, shift: usize) -> Result<()> {
        if shift == 0 {
            return Err(Error::arg("q-shift must be at least 1"));
        }
        let order = self.order();
        if shift > order || c.is_zero() {
            return Ok(());
        }
        // descending so each source coefficient is read before it is updated
        for n in (shift..=order).rev() {
            let prod = self.coeffs[n - shift].mul(c)?;
            self.coeffs[n] = self.coeffs[n].sub(&prod)?;
        }
        Ok(())
    }

    /// In place: `self /= 1 - c q^shift` (`shift >= 1`), i.e. multiplication by
    /// `sum_r c^r q^(r*shift)`.
    pub fn div_one_minus(&mut self, c: &PolyZW, shift: usize) -> Result<()> {
        if shift == 0 {
            return Err(Error::arg("q-shift must be at least 1"));
        }
        let order = self.order();
        if shift > order || c.is_zero() {
            return Ok(());
        }
        // ascending so each update sees the already-divided lower coefficient
        for n in shift..=order {
            let prod = self.coeffs[n - shift].mul(c)?;
            self.coeffs[n] = self.coeffs[n].add(&prod)?;
        }
        Ok(())
    }

    /// Multiplicative inverse; the constant term must be the constant `+1` or `-1`.
    pub fn inverse(&self) -> Result<Self> {
        let unit = match self.coeffs[0].as_constant() {
            Some(c @ (1 | -1)) => c,
            _ => return Err(Error::NotInvertible),
        };
        let order = self.order();
        let mut inv = vec![PolyZW::zero(); order + 1];
        inv[0] = PolyZW::constant(unit);
        for n in 1..=order {
            let mut acc = PolyZW::zero();
            for i in 1..=n {
                let a = &self.coeffs[i];
                if !a.is_zero() && !inv[n - i].is_zero() {
                    acc.add_product(a, &inv[n - i])?;
                }
            }
            // a0 * inv[n] = -acc with a0 = unit = 1/unit
            inv[n] = acc.scale(-unit)?;
        }
        Ok(Self { coeffs: inv })
    }

    pub fn map_coeffs(&self, f: impl Fn(&PolyZW) -> Result<PolyZW>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    /// Substitutes `w = 1`.
    pub fn at_w_one(&self) -> Result<Self> {
        self.map_coeffs(PolyZW::at_w_one)
    }

    /// Substitutes `z = 1`.
    pub fn at_z_one(&self) -> Result<Self> {
        self.map_coeffs(PolyZW::at_z_one)
    }

    /// Formal `d/dw` followed by `w = 1`.
    pub fn d_dw_at_1(&self) -> Result<Self> {
        self.map_coeffs(PolyZW::d_dw_at_1)
    }

    /// True when every `q^n` coefficient has `w` degree at most `n` and `z`
    /// degree at most `n / z_step`.
    pub fn degree_bounds_hold(&self, z_step: usize) -> bool {
        self.coeffs.iter().enumerate().all(|(n, p)| {
            let w_ok = p.max_w_degree().is_none_or(|w| w as usize <= n);
            let z_ok = p.max_z_degree().is_none_or(|z| z as usize <= n / z_step.max(1));
            w_ok && z_ok
        })
    }

    /// One line per `q` degree: `n: [ (zdeg,wdeg,coeff), ... ]`, terms sorted
    /// by `(zdeg, wdeg)`; an empty coefficient prints as `n: [ ]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (n, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                let _ = writeln!(out, "{n}: [ ]");
            } else {
                let _ = writeln!(out, "{n}: [ {p} ]");
            }
        }
        out
    }
}
