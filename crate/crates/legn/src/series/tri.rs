//! Weight-truncated series in x, y, p over exact rationals.
//!
//! A series stores the monomials x^i y^j p^l of weight ki + nj + (n-k)l up to
//! the bound `trunc` (inclusive); everything heavier is unknown tail. The map
//! iterates in lexicographic (i, j, l) order, so output is reproducible.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_pow, Rat};
use crate::series::uni::UniSeries;
use crate::weights::WeightSystem;

/// Exponent triple of x^i y^j p^l; `Ord` is lexicographic on (i, j, l).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Mono3 {
    pub i: u32,
    pub j: u32,
    pub l: u32,
}

impl Mono3 {
    pub fn new(i: u32, j: u32, l: u32) -> Self {
        Mono3 { i, j, l }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
    P,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries3 {
    ws: WeightSystem,
    coeffs: BTreeMap<Mono3, Rat>,
    trunc: u64,
}

impl TruncSeries3 {
    pub fn zero(ws: WeightSystem, trunc: u64) -> Self {
        TruncSeries3 { ws, coeffs: BTreeMap::new(), trunc }
    }

    pub fn one(ws: WeightSystem, trunc: u64) -> Self {
        Self::monomial(ws, Mono3::new(0, 0, 0), Rat::one(), trunc)
    }

    pub fn constant(ws: WeightSystem, c: Rat, trunc: u64) -> Self {
        Self::monomial(ws, Mono3::new(0, 0, 0), c, trunc)
    }

    pub fn var(ws: WeightSystem, v: Var, trunc: u64) -> Self {
        let m = match v {
            Var::X => Mono3::new(1, 0, 0),
            Var::Y => Mono3::new(0, 1, 0),
            Var::P => Mono3::new(0, 0, 1),
        };
        Self::monomial(ws, m, Rat::one(), trunc)
    }

    pub fn monomial(ws: WeightSystem, m: Mono3, c: Rat, trunc: u64) -> Self {
        let mut s = Self::zero(ws, trunc);
        if !c.is_zero() && ws.weight(m.i, m.j, m.l) <= trunc {
            s.coeffs.insert(m, c);
        }
        s
    }

    pub fn from_terms(
        ws: WeightSystem,
        terms: impl IntoIterator<Item = (Mono3, Rat)>,
        trunc: u64,
    ) -> Self {
        let mut s = Self::zero(ws, trunc);
        for (m, c) in terms {
            if c.is_zero() || ws.weight(m.i, m.j, m.l) > trunc {
                continue;
            }
            let e = s.coeffs.entry(m).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                s.coeffs.remove(&m);
            }
        }
        s
    }

    /// Convenience constructor from integer-pair coefficients.
    pub fn from_int_terms(ws: WeightSystem, terms: &[(u32, u32, u32, i64, i64)], trunc: u64) -> Self {
        Self::from_terms(
            ws,
            terms
                .iter()
                .map(|&(i, j, l, num, den)| (Mono3::new(i, j, l), crate::rat::rat(num, den))),
            trunc,
        )
    }

    pub fn ws(&self) -> WeightSystem {
        self.ws
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }

    pub fn coeff(&self, m: Mono3) -> Rat {
        self.coeffs.get(&m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mono3, &Rat)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_p_free(&self) -> bool {
        self.coeffs.keys().all(|m| m.l == 0)
    }

    /// Smallest weight among stored monomials.
    pub fn min_weight(&self) -> Option<u64> {
        self.coeffs.keys().map(|m| self.ws.weight(m.i, m.j, m.l)).min()
    }

    fn min_weight_or_tail(&self) -> u64 {
        self.min_weight().unwrap_or(self.trunc + 1)
    }

    pub fn weaken(&self, trunc: u64) -> Self {
        let t = trunc.min(self.trunc);
        TruncSeries3 {
            ws: self.ws,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| self.ws.weight(m.i, m.j, m.l) <= t)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            trunc: t,
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries3 {
            ws: self.ws,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ws, other.ws, "weight systems differ");
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.weaken(trunc);
        for (m, c) in &other.coeffs {
            if other.ws.weight(m.i, m.j, m.l) > trunc {
                continue;
            }
            let e = out.coeffs.entry(*m).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(m);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.ws, self.trunc);
        }
        TruncSeries3 {
            ws: self.ws,
            coeffs: self.coeffs.iter().map(|(m, v)| (*m, c * v)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ws, other.ws, "weight systems differ");
        let bound = (self.trunc + other.min_weight_or_tail())
            .min(other.trunc + self.min_weight_or_tail());
        let ws = self.ws;
        let mut a: Vec<(Mono3, u64, &Rat)> = self
            .coeffs
            .iter()
            .map(|(m, c)| (*m, ws.weight(m.i, m.j, m.l), c))
            .collect();
        a.sort_by_key(|t| t.1);
        let mut b: Vec<(Mono3, u64, &Rat)> = other
            .coeffs
            .iter()
            .map(|(m, c)| (*m, ws.weight(m.i, m.j, m.l), c))
            .collect();
        b.sort_by_key(|t| t.1);
        let mut coeffs: BTreeMap<Mono3, Rat> = BTreeMap::new();
        for (ma, wa, ca) in &a {
            if wa + b.first().map(|t| t.1).unwrap_or(0) > bound {
                break;
            }
            for (mb, wb, cb) in &b {
                if wa + wb > bound {
                    break;
                }
                let m = Mono3::new(ma.i + mb.i, ma.j + mb.j, ma.l + mb.l);
                let e = coeffs.entry(m).or_insert_with(Rat::zero);
                *e += *ca * *cb;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        TruncSeries3 { ws, coeffs, trunc: bound }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.ws, self.trunc);
        }
        let mut result: Option<TruncSeries3> = None;
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

    /// Formal partial derivative; the bound drops by the variable's weight.
    pub fn partial(&self, v: Var) -> Self {
        let w = match v {
            Var::X => self.ws.k(),
            Var::Y => self.ws.n(),
            Var::P => self.ws.wp(),
        } as u64;
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(m, c)| {
                let (e, m2) = match v {
                    Var::X if m.i >= 1 => (m.i, Mono3::new(m.i - 1, m.j, m.l)),
                    Var::Y if m.j >= 1 => (m.j, Mono3::new(m.i, m.j - 1, m.l)),
                    Var::P if m.l >= 1 => (m.l, Mono3::new(m.i, m.j, m.l - 1)),
                    _ => return None,
                };
                Some((m2, c * Rat::from_integer(e.into())))
            })
            .collect();
        TruncSeries3 { ws: self.ws, coeffs, trunc: self.trunc.saturating_sub(w) }
    }

    /// Quotient by a unit (nonzero constant term).
    pub fn div_unit(&self, divisor: &Self) -> Result<Self> {
        self.ws.same(&divisor.ws)?;
        let c0 = divisor.coeff(Mono3::new(0, 0, 0));
        if c0.is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let trunc = self.trunc.min(divisor.trunc);
        let u = Self::one(self.ws, trunc).sub(&divisor.weaken(trunc).scale(&c0.recip()));
        let inv = match u.min_weight() {
            None => Self::one(self.ws, trunc),
            Some(o) => {
                let steps = trunc / o.max(1) + 1;
                let mut acc = Self::one(self.ws, trunc);
                for _ in 0..steps {
                    acc = Self::one(self.ws, trunc).add(&u.mul(&acc).weaken(trunc));
                }
                acc
            }
        };
        Ok(self.weaken(trunc).mul(&inv).weaken(trunc).scale(&c0.recip()))
    }

    /// Multiply by p^l.
    pub fn mul_p_power(&self, l: u32) -> Self {
        let shift = self.ws.wp() as u64 * l as u64;
        TruncSeries3 {
            ws: self.ws,
            coeffs: self
                .coeffs
                .iter()
                .map(|(m, c)| (Mono3::new(m.i, m.j, m.l + l), c.clone()))
                .collect(),
            trunc: self.trunc + shift,
        }
    }

    /// Split into p-free coefficients of p^0, p^1, ...; level l is reliable up
    /// to weight trunc - l*(n-k).
    pub fn p_levels(&self) -> Vec<TruncSeries3> {
        let wp = self.ws.wp() as u64;
        let lmax = (self.trunc / wp.max(1)) as usize;
        let mut levels =
            vec![Self::zero(self.ws, 0); lmax + 1];
        for (idx, level) in levels.iter_mut().enumerate() {
            level.trunc = self.trunc - wp * idx as u64;
        }
        for (m, c) in &self.coeffs {
            let l = m.l as usize;
            if l < levels.len() {
                levels[l].coeffs.insert(Mono3::new(m.i, m.j, 0), c.clone());
            }
        }
        levels
    }

    /// Reassemble sum levels[l] * p^l; the bound is the min of what each level
    /// supports, capped at `target`.
    pub fn assemble_p_levels(ws: WeightSystem, levels: &[TruncSeries3], target: u64) -> Self {
        let wp = ws.wp() as u64;
        let mut trunc = target;
        for (l, lev) in levels.iter().enumerate() {
            trunc = trunc.min(lev.trunc + wp * l as u64);
        }
        let mut out = Self::zero(ws, trunc);
        for (l, lev) in levels.iter().enumerate() {
            out = out.add(&lev.mul_p_power(l as u32).weaken(trunc));
        }
        out
    }

    /// f(sx, sy, sp) as a univariate series; each substituted series must
    /// vanish at the origin (checked on variables actually present in f).
    ///
    /// The result bound accounts for both the inputs' windows and the unknown
    /// tail of f: monomials above the weight bound contribute s-order at least
    /// ord(s_v)/weight(v) per weight unit.
    pub fn substitute(&self, sx: &UniSeries, sy: &UniSeries, sp: &UniSeries) -> Result<UniSeries> {
        let mut used = [false; 3];
        for m in self.coeffs.keys() {
            used[0] |= m.i > 0;
            used[1] |= m.j > 0;
            used[2] |= m.l > 0;
        }
        let vars = [sx, sy, sp];
        let wgts = [self.ws.k() as u64, self.ws.n() as u64, self.ws.wp() as u64];
        let mut bound = u32::MAX as u64;
        let mut any = false;
        for v in 0..3 {
            if !used[v] {
                continue;
            }
            any = true;
            if !vars[v].coeff(0).is_zero() {
                return Err(Error::NotLocal);
            }
            let ord = vars[v].ord_or_tail();
            bound = bound
                .min(ord * (self.trunc + 1) / wgts[v] - 1)
                .min(vars[v].trunc() as u64);
        }
        if !any {
            bound = bound
                .min(sx.trunc() as u64)
                .min(sy.trunc() as u64)
                .min(sp.trunc() as u64);
        }
        let bound = bound.min(u32::MAX as u64) as u32;

        let sxw = sx.weaken(bound);
        let syw = sy.weaken(bound);
        let spw = sp.weaken(bound);
        let x_mono = sxw.as_monomial();
        let ords = [sxw.ord_or_tail(), syw.ord_or_tail(), spw.ord_or_tail()];

        let mut xpow: Vec<UniSeries> = vec![UniSeries::one(bound)];
        let mut ypow: Vec<UniSeries> = vec![UniSeries::one(bound)];
        let mut ppow: Vec<UniSeries> = vec![UniSeries::one(bound)];
        let mut jl_cache: BTreeMap<(u32, u32), UniSeries> = BTreeMap::new();

        fn get<'a>(cache: &'a mut Vec<UniSeries>, base: &UniSeries, e: u32, bound: u32) -> &'a UniSeries {
            while cache.len() <= e as usize {
                let next = cache.last().unwrap().mul(base).weaken(bound);
                cache.push(next);
            }
            &cache[e as usize]
        }

        let mut out = UniSeries::zero(bound);
        for (m, c) in &self.coeffs {
            let min_ord =
                m.i as u64 * ords[0] + m.j as u64 * ords[1] + m.l as u64 * ords[2];
            if min_ord > bound as u64 {
                continue;
            }
            let t = jl_cache.entry((m.j, m.l)).or_insert_with(|| {
                get(&mut ypow, &syw, m.j, bound)
                    .mul(get(&mut ppow, &spw, m.l, bound))
                    .weaken(bound)
            });
            let term = match &x_mono {
                Some((r, cx)) if m.i > 0 => {
                    let shift = *r as u64 * m.i as u64;
                    if shift > bound as u64 {
                        continue;
                    }
                    t.shift_up(shift as u32).weaken(bound).scale(&rat_pow(cx, m.i as i64))
                }
                _ => t.mul(get(&mut xpow, &sxw, m.i, bound)).weaken(bound),
            };
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }

    /// f(gx, gy, gp) as a trivariate series; each component must lie in the
    /// maximal ideal (positive minimal weight, checked on used variables).
    pub fn substitute_tri(
        &self,
        gx: &TruncSeries3,
        gy: &TruncSeries3,
        gp: &TruncSeries3,
    ) -> Result<TruncSeries3> {
        self.ws.same(&gx.ws)?;
        self.ws.same(&gy.ws)?;
        self.ws.same(&gp.ws)?;
        let mut used = [false; 3];
        for m in self.coeffs.keys() {
            used[0] |= m.i > 0;
            used[1] |= m.j > 0;
            used[2] |= m.l > 0;
        }
        let vars = [gx, gy, gp];
        let wgts = [self.ws.k() as u64, self.ws.n() as u64, self.ws.wp() as u64];
        let mut bound = u64::MAX / 4;
        let mut any = false;
        for v in 0..3 {
            if !used[v] {
                continue;
            }
            any = true;
            if !vars[v].coeff(Mono3::new(0, 0, 0)).is_zero() {
                return Err(Error::NotLocal);
            }
            let mw = vars[v].min_weight_or_tail();
            bound = bound.min(mw * (self.trunc + 1) / wgts[v] - 1).min(vars[v].trunc);
        }
        if !any {
            bound = bound.min(gx.trunc).min(gy.trunc).min(gp.trunc);
        }

        let gxw = gx.weaken(bound);
        let gyw = gy.weaken(bound);
        let gpw = gp.weaken(bound);
        let mws = [gxw.min_weight_or_tail(), gyw.min_weight_or_tail(), gpw.min_weight_or_tail()];

        let ws = self.ws;
        let mut xpow: Vec<TruncSeries3> = vec![TruncSeries3::one(ws, bound)];
        let mut ypow: Vec<TruncSeries3> = vec![TruncSeries3::one(ws, bound)];
        let mut ppow: Vec<TruncSeries3> = vec![TruncSeries3::one(ws, bound)];
        let mut jl_cache: BTreeMap<(u32, u32), TruncSeries3> = BTreeMap::new();

        fn get<'a>(
            cache: &'a mut Vec<TruncSeries3>,
            base: &TruncSeries3,
            e: u32,
            bound: u64,
        ) -> &'a TruncSeries3 {
            while cache.len() <= e as usize {
                let next = cache.last().unwrap().mul(base).weaken(bound);
                cache.push(next);
            }
            &cache[e as usize]
        }

        let mut out = TruncSeries3::zero(ws, bound);
        for (m, c) in &self.coeffs {
            let min_w = m.i as u64 * mws[0] + m.j as u64 * mws[1] + m.l as u64 * mws[2];
            if min_w > bound {
                continue;
            }
            let t = jl_cache.entry((m.j, m.l)).or_insert_with(|| {
                get(&mut ypow, &gyw, m.j, bound)
                    .mul(get(&mut ppow, &gpw, m.l, bound))
                    .weaken(bound)
            });
            let term = t.mul(get(&mut xpow, &gxw, m.i, bound)).weaken(bound);
            out = out.add(&term.scale(c));
        }
        Ok(out)
    }
}

impl fmt::Display for TruncSeries3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (m.i == 0 && m.j == 0 && m.l == 0) {
                parts.push(mag.to_string());
            }
            for (e, name) in [(m.i, "x"), (m.j, "y"), (m.l, "p")] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
