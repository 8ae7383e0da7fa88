//! Conormal lifts of branches, the valuation oracle w, tangent-cone
//! classification, multiplicities, and smooth-surface containment.
//!
//! The ideal of the conormal is never materialized: membership of f is decided
//! by the valuation of f along the parametrization, reported as `AtLeast`
//! (never a fake finite value) when nothing is visible inside the reliable
//! window.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::branch::BranchParam;
use crate::error::Result;
use crate::rat::Rat;
use crate::series::{Mono3, TruncSeries3, UniSeries};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConormalParam {
    branch: BranchParam,
    p: UniSeries,
}

/// Lift a branch to its conormal: p = y'(s)/x'(s), computed by exact series
/// division (x' = k s^{k-1}).
pub fn conormal(b: &BranchParam) -> ConormalParam {
    let k = b.k();
    let p = b
        .y_series()
        .deriv()
        .shift_down(k - 1)
        .expect("y' has order n-1 >= k-1")
        .scale(&Rat::from_integer(k.into()).recip());
    ConormalParam { branch: b.clone(), p }
}

impl ConormalParam {
    pub fn branch(&self) -> &BranchParam {
        &self.branch
    }

    pub fn p_series(&self) -> &UniSeries {
        &self.p
    }

    /// Orders up to this bound are trustworthy for membership certificates;
    /// the guard of k*n absorbs window erosion from derivatives and
    /// renormalizations upstream.
    pub fn window(&self) -> u32 {
        let guard = self.branch.k() as u64 * self.branch.n() as u64;
        (self.branch.trunc() as u64).saturating_sub(guard) as u32
    }

    /// f composed with the parametrization (x(s), y(s), p(s)).
    pub fn pull_back(&self, f: &TruncSeries3) -> Result<UniSeries> {
        if f.ws().k() != self.branch.k() || f.ws().n() != self.branch.n() {
            return Err(crate::error::Error::WeightMismatch(
                f.ws().k(),
                f.ws().n(),
                self.branch.k(),
                self.branch.n(),
            ));
        }
        f.substitute(&self.branch.x_series(), &self.branch.y_series(), &self.p)
    }

    /// The valuation w(f): the s-order of f along the conormal.
    pub fn valuation(&self, f: &TruncSeries3) -> Result<Valuation> {
        let u = self.pull_back(f)?;
        Ok(match u.ord() {
            Some(m) => Valuation::Finite(m),
            None => Valuation::AtLeast(u.trunc().saturating_add(1)),
        })
    }

    /// Membership certificate for the conormal ideal, valid within `window()`.
    pub fn in_ideal(&self, f: &TruncSeries3) -> Result<bool> {
        Ok(self.valuation(f)?.certifies_at_least(self.window()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(u32),
    /// No nonzero coefficient below this order; the true valuation is >= it.
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Valuation::Finite(m) => Some(*m),
            Valuation::AtLeast(_) => None,
        }
    }

    /// True when the value is known to be > `window` (an "infinite within the
    /// window" certificate).
    pub fn certifies_at_least(&self, window: u32) -> bool {
        match self {
            Valuation::Finite(_) => false,
            Valuation::AtLeast(w) => *w > window,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(m) => write!(f, "{m}"),
            Valuation::AtLeast(w) => write!(f, ">={w}"),
        }
    }
}

/// mult L = min(k, n-k).
pub fn multiplicity_legendrian(l: &ConormalParam) -> u32 {
    let b = l.branch();
    b.k().min(b.n() - b.k())
}

/// mult of the plane projection = k.
pub fn multiplicity_projection(l: &ConormalParam) -> u32 {
    l.branch().k()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TangentConeClass {
    /// delta < 2: the cone is the p-axis {x = y = 0}.
    PAxis,
    /// delta = 2: the cone is {y = p - slope*x = 0} with slope = 2 a_2.
    TiltedLine { slope: Rat },
    /// delta > 2: the cone is the x-axis {y = p = 0}.
    XAxis,
}

/// Classify the tangent cone of the conormal from delta = n/k.
pub fn tangent_cone_class(b: &BranchParam) -> TangentConeClass {
    let (k, n) = (b.k() as u64, b.n() as u64);
    if n < 2 * k {
        TangentConeClass::PAxis
    } else if n == 2 * k {
        // gcd(k, n) = 1 forces k = 1, so a_2 is the branch coefficient of s^2.
        TangentConeClass::TiltedLine { slope: Rat::from_integer(2.into()) * b.a_n() }
    } else {
        TangentConeClass::XAxis
    }
}

/// Strong generic position: the tangent cone avoids the projection's fiber
/// direction (the p-axis).
pub fn in_strong_generic_position(l: &ConormalParam) -> bool {
    !matches!(tangent_cone_class(l.branch()), TangentConeClass::PAxis)
}

/// Search for a smooth surface f = (linear) + higher containing the conormal,
/// weight by weight up to half the truncation. Returns a primitive integer
/// witness, or None if no witness exists within the window (a semidecision).
pub fn smooth_surface_test(l: &ConormalParam) -> Result<Option<TruncSeries3>> {
    let ws = l.branch().ws()?;
    let (k, n, wp) = (ws.k(), ws.n(), ws.wp());
    let window = l.window();
    let wcap = l.branch().trunc() as u64 / 2;

    // Monomials of weight in [1, wcap], ascending by (weight, lex).
    let mut monos: Vec<(u64, Mono3)> = Vec::new();
    for i in 0..=(wcap / k as u64) as u32 {
        for j in 0..=((wcap - ws.weight(i, 0, 0)).max(0) / n as u64) as u32 {
            let base = ws.weight(i, j, 0);
            for lexp in 0..=((wcap - base) / wp as u64) as u32 {
                let w = ws.weight(i, j, lexp);
                if w >= 1 && w <= wcap {
                    monos.push((w, Mono3::new(i, j, lexp)));
                }
            }
        }
    }
    monos.sort();

    let y = l.branch().y_series();
    let p = l.p_series().clone();
    let mut ypow: Vec<UniSeries> = vec![UniSeries::one(y.trunc())];
    let mut ppow: Vec<UniSeries> = vec![UniSeries::one(y.trunc())];
    let mut pair_cache: BTreeMap<(u32, u32), UniSeries> = BTreeMap::new();

    // Row-reduction state: pivot order -> (vector with pivot coeff 1, combo).
    let mut pivots: BTreeMap<u32, (UniSeries, Vec<(Mono3, Rat)>)> = BTreeMap::new();

    for (_, m) in monos {
        while ypow.len() <= m.j as usize {
            let nx = ypow.last().unwrap().mul(&y).weaken(y.trunc());
            ypow.push(nx);
        }
        while ppow.len() <= m.l as usize {
            let nx = ppow.last().unwrap().mul(&p).weaken(y.trunc());
            ppow.push(nx);
        }
        let base = pair_cache
            .entry((m.j, m.l))
            .or_insert_with(|| ypow[m.j as usize].mul(&ppow[m.l as usize]))
            .clone();
        let mut v = base.shift_up(k * m.i).weaken(window);
        let mut combo: Vec<(Mono3, Rat)> = vec![(m, Rat::one())];

        loop {
            let ord = match v.ord() {
                Some(o) => o,
                None => break,
            };
            let Some((pv, pc)) = pivots.get(&ord) else { break };
            let c = v.coeff(ord);
            v = v.sub(&pv.scale(&c));
            for (pm, coeff) in pc {
                merge_combo(&mut combo, *pm, -(&c * coeff));
            }
        }

        if v.is_zero() {
            if combo.iter().any(|(m, c)| m.i + m.j + m.l == 1 && !c.is_zero()) {
                let witness = primitive_witness(ws, combo, l.branch().trunc() as u64);
                debug_assert!(l.in_ideal(&witness)?);
                return Ok(Some(witness));
            }
        } else {
            let (ord, lead) = v.leading().expect("nonzero");
            let vn = v.scale(&lead.recip());
            let cn = combo
                .into_iter()
                .map(|(m, c)| (m, c / lead.clone()))
                .collect();
            pivots.insert(ord, (vn, cn));
        }
    }
    Ok(None)
}

fn merge_combo(combo: &mut Vec<(Mono3, Rat)>, m: Mono3, c: Rat) {
    if c.is_zero() {
        return;
    }
    if let Some(e) = combo.iter_mut().find(|(em, _)| *em == m) {
        e.1 += c;
        return;
    }
    combo.push((m, c));
}

/// Clear denominators, divide by the content, and fix the sign on the
/// lexicographically first monomial.
fn primitive_witness(
    ws: crate::weights::WeightSystem,
    combo: Vec<(Mono3, Rat)>,
    trunc: u64,
) -> TruncSeries3 {
    use num::bigint::BigInt;
    let combo: Vec<(Mono3, Rat)> = combo.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    let mut denom = BigInt::one();
    for (_, c) in &combo {
        denom = num::integer::lcm(denom, c.denom().clone());
    }
    let mut ints: Vec<(Mono3, BigInt)> = combo
        .iter()
        .map(|(m, c)| (*m, c.numer() * (&denom / c.denom())))
        .collect();
    let mut content = BigInt::zero();
    for (_, v) in &ints {
        content = num::integer::gcd(content, v.clone());
    }
    if !content.is_zero() {
        for (_, v) in ints.iter_mut() {
            *v /= &content;
        }
    }
    ints.sort_by_key(|(m, _)| *m);
    if ints.first().map(|(_, v)| v.is_negative()).unwrap_or(false) {
        for (_, v) in ints.iter_mut() {
            *v = -v.clone();
        }
    }
    TruncSeries3::from_terms(
        ws,
        ints.into_iter().map(|(m, v)| (m, Rat::from_integer(v))),
        trunc,
    )
}
