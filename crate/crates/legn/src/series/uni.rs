//! Truncated univariate series in the parameter s with exact rational
//! coefficients.
//!
//! Invariants:
//! - no stored zero coefficients,
//! - every stored exponent is <= `trunc`,
//! - coefficients are exact for all exponents <= `trunc`; the tail is unknown.
//!
//! Binary operations propagate the truncation honestly: additions use the min
//! of the two bounds, products use the sharper `min(ta + ord(b), tb + ord(a))`
//! (the low-order part of one factor shifts the reliable window of the other).

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniSeries {
    coeffs: BTreeMap<u32, Rat>,
    trunc: u32,
}

impl UniSeries {
    pub fn zero(trunc: u32) -> Self {
        UniSeries { coeffs: BTreeMap::new(), trunc }
    }

    pub fn one(trunc: u32) -> Self {
        Self::monomial(Rat::one(), 0, trunc)
    }

    /// c * s^r + O(s^{trunc+1}).
    pub fn monomial(c: Rat, r: u32, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        if !c.is_zero() && r <= trunc {
            s.coeffs.insert(r, c);
        }
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, Rat)>, trunc: u32) -> Self {
        let mut s = Self::zero(trunc);
        for (r, c) in terms {
            if r <= trunc && !c.is_zero() {
                let e = s.coeffs.entry(r).or_insert_with(Rat::zero);
                *e += c;
                if e.is_zero() {
                    s.coeffs.remove(&r);
                }
            }
        }
        s
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, r: u32) -> Rat {
        self.coeffs.get(&r).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order of the lowest nonzero term, None for the (truncated) zero series.
    pub fn ord(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(u32, Rat)> {
        self.coeffs.iter().next().map(|(r, c)| (*r, c.clone()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(r, c)| (*r, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Single-term detection (fast path for substitutions).
    pub fn as_monomial(&self) -> Option<(u32, Rat)> {
        if self.coeffs.len() == 1 {
            self.leading()
        } else {
            None
        }
    }

    /// Effective order for truncation bookkeeping: tail-only series count as
    /// trunc + 1.
    pub(crate) fn ord_or_tail(&self) -> u64 {
        self.ord().map(|o| o as u64).unwrap_or(self.trunc as u64 + 1)
    }

    /// Restrict to a (smaller) truncation bound.
    pub fn weaken(&self, trunc: u32) -> Self {
        let t = trunc.min(self.trunc);
        UniSeries {
            coeffs: self.coeffs.range(..=t).map(|(r, c)| (*r, c.clone())).collect(),
            trunc: t,
        }
    }

    pub fn neg(&self) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|(r, c)| (*r, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.weaken(trunc);
        for (r, c) in other.coeffs.range(..=trunc) {
            let e = out.coeffs.entry(*r).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(r);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        UniSeries {
            coeffs: self.coeffs.iter().map(|(r, v)| (*r, c * v)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add_term(&self, r: u32, c: &Rat) -> Self {
        self.add(&Self::monomial(c.clone(), r, self.trunc))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bound = (self.trunc as u64 + other.ord_or_tail())
            .min(other.trunc as u64 + self.ord_or_tail())
            .min(u32::MAX as u64) as u32;
        let mut coeffs: BTreeMap<u32, Rat> = BTreeMap::new();
        for (ra, ca) in &self.coeffs {
            if *ra > bound {
                break;
            }
            for (rb, cb) in &other.coeffs {
                let r = ra + rb;
                if r > bound {
                    break;
                }
                let e = coeffs.entry(r).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        UniSeries { coeffs, trunc: bound }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.trunc);
        }
        let mut result: Option<UniSeries> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    /// Multiply by s^m.
    pub fn shift_up(&self, m: u32) -> Self {
        UniSeries {
            coeffs: self.coeffs.iter().map(|(r, c)| (r + m, c.clone())).collect(),
            trunc: self.trunc.saturating_add(m),
        }
    }

    /// Divide by s^m; every stored exponent must be >= m.
    pub fn shift_down(&self, m: u32) -> Result<Self> {
        if let Some(o) = self.ord() {
            if o < m {
                return Err(Error::BadOrder { expected: m, found: Some(o) });
            }
        }
        Ok(UniSeries {
            coeffs: self.coeffs.iter().map(|(r, c)| (r - m, c.clone())).collect(),
            trunc: self.trunc.saturating_sub(m),
        })
    }

    /// d/ds.
    pub fn deriv(&self) -> Self {
        UniSeries {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(r, _)| **r >= 1)
                .map(|(r, c)| (r - 1, c * Rat::from_integer((*r).into())))
                .collect(),
            trunc: self.trunc.saturating_sub(1),
        }
    }

    /// Quotient by a unit (nonzero constant term), via a Neumann series on the
    /// unit part.
    pub fn div_unit(&self, divisor: &Self) -> Result<Self> {
        let c0 = divisor.coeff(0);
        if c0.is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let trunc = self.trunc.min(divisor.trunc);
        // u = 1 - divisor/c0 has positive order; 1/divisor = (1/c0) * sum u^m.
        let u = Self::one(trunc).sub(&divisor.weaken(trunc).scale(&c0.recip()));
        let inv = match u.ord() {
            None => Self::one(trunc),
            Some(o) => {
                let steps = trunc / o.max(1) + 1;
                let mut acc = Self::one(trunc);
                for _ in 0..steps {
                    acc = Self::one(trunc).add(&u.mul(&acc).weaken(trunc));
                }
                acc
            }
        };
        Ok(self.weaken(trunc).mul(&inv).weaken(trunc).scale(&c0.recip()))
    }

    /// f(g(s)); g must vanish at the origin.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let og = match g.ord() {
            Some(0) => return Err(Error::NotLocal),
            Some(o) => o as u64,
            None => g.trunc as u64 + 1,
        };
        let bound = (g.trunc as u64)
            .min((self.trunc as u64 + 1) * og - 1)
            .min(u32::MAX as u64) as u32;
        let mut out = Self::monomial(self.coeff(0), 0, bound);
        let mut gp = Self::one(bound);
        let mut cur = 0u32;
        for (r, c) in self.coeffs.iter() {
            if *r == 0 {
                continue;
            }
            if (*r as u64) * og > bound as u64 {
                break;
            }
            gp = gp.mul(&g.weaken(bound).pow(r - cur)).weaken(bound);
            cur = *r;
            out = out.add(&gp.scale(c));
        }
        Ok(out)
    }

    /// k-th root of a unit series with constant term 1, by the binomial series.
    pub fn root(&self, k: u32) -> Result<Self> {
        if k == 0 || !self.coeff(0).is_one() {
            return Err(Error::RootOfNonUnit);
        }
        let v = self.sub(&Self::one(self.trunc));
        let mut out = Self::one(self.trunc);
        if let Some(o) = v.ord() {
            let exp = Rat::new(1.into(), k.into());
            let mut binom = Rat::one();
            let mut vp = Self::one(self.trunc);
            let mut m = 0u32;
            while (m as u64 + 1) * o as u64 <= self.trunc as u64 {
                m += 1;
                binom = binom * (exp.clone() - Rat::from_integer((m - 1).into()))
                    / Rat::from_integer(m.into());
                vp = vp.mul(&v).weaken(self.trunc);
                if vp.is_zero() {
                    break;
                }
                out = out.add(&vp.scale(&binom));
            }
        }
        Ok(out)
    }

    /// Compositional inverse g with g(f(s)) = s; requires order exactly 1.
    pub fn comp_inverse(&self) -> Result<Self> {
        if self.ord() != Some(1) {
            return Err(Error::NotInvertibleOrder);
        }
        let trunc = self.trunc;
        let c1 = self.coeff(1);
        let mut g = Self::monomial(c1.recip(), 1, trunc);
        // acc = sum of g_r f^r built so far; each new order-m defect of acc
        // fixes g_m.
        let mut acc = self.scale(&c1.recip());
        let mut fp = self.clone();
        let mut c1p = c1.clone();
        for m in 2..=trunc {
            fp = fp.mul(self).weaken(trunc);
            c1p *= &c1;
            let d = acc.coeff(m);
            if d.is_zero() {
                continue;
            }
            let gm = -d / c1p.clone();
            acc = acc.add(&fp.scale(&gm));
            g = g.add_term(m, &gm);
        }
        Ok(g)
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.coeffs {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (*r, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "s")?,
                (1, false) => write!(f, "{mag}*s")?,
                (_, true) => write!(f, "s^{r}")?,
                (_, false) => write!(f, "{mag}*s^{r}")?,
            }
        }
        Ok(())
    }
}
