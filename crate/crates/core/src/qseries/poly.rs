use std::collections::BTreeMap;
use std::fmt;

use crate::error::{self, Error, Result};

/// Sparse polynomial in the tracking variables `z` and `w` with exact `i64`
/// coefficients. Keys are `(z_degree, w_degree)`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PolyZW {
    terms: BTreeMap<(u32, u32), i64>,
}

impl PolyZW {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: i64, z: u32, w: u32) -> Self {
        let mut p = Self::zero();
        if c != 0 {
            p.terms.insert((z, w), c);
        }
        p
    }

    pub fn z() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn w() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// `1 - z`
    pub fn one_minus_z() -> Self {
        let mut p = Self::one();
        p.terms.insert((1, 0), -1);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), i64)>>(terms: I) -> Result<Self> {
        let mut p = Self::zero();
        for ((z, w), c) in terms {
            p.add_term(z, w, c)?;
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&(0, 0)).copied(),
            _ => None,
        }
    }

    pub fn coeff(&self, z: u32, w: u32) -> i64 {
        self.terms.get(&(z, w)).copied().unwrap_or(0)
    }

    /// Terms in lexicographic `(z, w)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), i64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn max_z_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(z, _)| z).max()
    }

    pub fn max_w_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, w)| w).max()
    }

    pub fn add_term(&mut self, z: u32, w: u32, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry((z, w)).or_insert(0);
        *slot = error::add(*slot, c)?;
        if *slot == 0 {
            self.terms.remove(&(z, w));
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &PolyZW) -> Result<()> {
        for (&(z, w), &c) in &other.terms {
            self.add_term(z, w, c)?;
        }
        Ok(())
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &PolyZW, c: i64) -> Result<()> {
        for (&(z, w), &v) in &other.terms {
            self.add_term(z, w, error::mul(v, c)?)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyZW) -> Result<PolyZW> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &PolyZW) -> Result<PolyZW> {
        let mut out = self.clone();
        out.add_scaled(other, -1)?;
        Ok(out)
    }

    pub fn neg(&self) -> Result<PolyZW> {
        self.scale(-1)
    }

    pub fn scale(&self, c: i64) -> Result<PolyZW> {
        let mut out = PolyZW::zero();
        out.add_scaled(self, c)?;
        Ok(out)
    }

    /// `self += a * b`
    pub fn add_product(&mut self, a: &PolyZW, b: &PolyZW) -> Result<()> {
        for (&(za, wa), &ca) in &a.terms {
            for (&(zb, wb), &cb) in &b.terms {
                let z = za.checked_add(zb).ok_or(Error::Overflow("z degree"))?;
                let w = wa.checked_add(wb).ok_or(Error::Overflow("w degree"))?;
                self.add_term(z, w, error::mul(ca, cb)?)?;
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &PolyZW) -> Result<PolyZW> {
        let mut out = PolyZW::zero();
        out.add_product(self, other)?;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<PolyZW> {
        let mut out = PolyZW::one();
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Multiplies by `w^e`.
    pub fn shift_w(&self, e: u32) -> Result<PolyZW> {
        let mut out = PolyZW::zero();
        for (&(z, w), &c) in &self.terms {
            let w = w.checked_add(e).ok_or(Error::Overflow("w degree"))?;
            out.terms.insert((z, w), c);
        }
        Ok(out)
    }

    /// Substitutes `w = 1`.
    pub fn at_w_one(&self) -> Result<PolyZW> {
        let mut out = PolyZW::zero();
        for (&(z, _), &c) in &self.terms {
            out.add_term(z, 0, c)?;
        }
        Ok(out)
    }

    /// Substitutes `z = 1`.
    pub fn at_z_one(&self) -> Result<PolyZW> {
        let mut out = PolyZW::zero();
        for (&(_, w), &c) in &self.terms {
            out.add_term(0, w, c)?;
        }
        Ok(out)
    }

    /// `d/dw` followed by `w = 1`: the `z^j` coefficient becomes
    /// `sum_m m * [z^j w^m]`.
    pub fn d_dw_at_1(&self) -> Result<PolyZW> {
        let mut out = PolyZW::zero();
        for (&(z, w), &c) in &self.terms {
            if w > 0 {
                out.add_term(z, 0, error::mul(c, i64::from(w))?)?;
            }
        }
        Ok(out)
    }

    /// Sum of coefficients weighted by `w` degree, restricted to one `z` degree.
    pub fn w_weighted_sum(&self, z: u32) -> Result<i64> {
        let mut total = 0i64;
        for (&(zz, w), &c) in &self.terms {
            if zz == z {
                total = error::add(total, error::mul(c, i64::from(w))?)?;
            }
        }
        Ok(total)
    }
}

impl fmt::Display for PolyZW {
    /// `(zdeg,wdeg,coeff)` triples, lexicographic, comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .terms
            .iter()
            .map(|(&(z, w), c)| format!("({z},{w},{c})"))
            .collect();
        f.write_str(&body.join(", "))
    }
}
