//! Deformation bases, monomial cleaning, formal reduction to the plane,
//! Jacobian division, and the two reduction algorithms: equisingular versal
//! reduction (plane coordinate changes) and microlocal versal reduction
//! (contact transformations that empty the coordinates outside the microlocal
//! rectangle).
//!
//! Both reductions are valuation-guided greedy loops on a concrete branch: at
//! each step the lowest defect order of F(., ., t) along the current
//! parametrization is either absorbed into a basis coordinate or killed by a
//! coordinate change obtained from Jacobian division. Every step is logged so
//! the whole run can be replayed and certified against the output normal form.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::branch::{
    normalize_param, puiseux_invariants, semigroup_rep, BranchParam,
};
use crate::conormal::{conormal, ConormalParam, Valuation};
use crate::contact::{apply_to_conormal, jtype_from_cauchy, ContactTx};
use crate::error::{Error, Result};
use crate::rat::{rat_pow, Rat};
use crate::series::{Mono3, TruncSeries3, UniSeries};
use crate::weights::WeightSystem;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisFlavor {
    B,
    C,
}

/// The ordered deformation basis: pairs (i, j) with k i + n j > k n inside the
/// rectangle i <= n-2, j <= k-2; flavor C keeps those with i + j <= n-2.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeformBasis {
    ws: WeightSystem,
    flavor: BasisFlavor,
    pairs: Vec<(u32, u32)>,
}

pub fn basis(ws: WeightSystem, flavor: BasisFlavor) -> Result<DeformBasis> {
    let (k, n) = (ws.k(), ws.n());
    if k < 2 {
        return Err(Error::HypothesisViolated(format!(
            "deformation bases need n > k > 1, got ({k}, {n})"
        )));
    }
    if flavor == BasisFlavor::C && n as u64 <= 2 * k as u64 {
        return Err(Error::HypothesisViolated(format!(
            "the microlocal basis needs n > 2k, got ({k}, {n})"
        )));
    }
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for i in 0..=(n - 2) {
        for j in 0..=(k - 2) {
            if ws.weight_xy(i, j) <= ws.kn() {
                continue;
            }
            if flavor == BasisFlavor::C && i + j > n - 2 {
                continue;
            }
            pairs.push((i, j));
        }
    }
    pairs.sort_by_key(|&(i, j)| ws.weight_xy(i, j));
    // no ties: gcd(k, n) = 1 and j < k make the weights distinct
    for w in pairs.windows(2) {
        assert_ne!(
            ws.weight_xy(w[0].0, w[0].1),
            ws.weight_xy(w[1].0, w[1].1),
            "weight tie in basis"
        );
    }
    Ok(DeformBasis { ws, flavor, pairs })
}

impl DeformBasis {
    pub fn ws(&self) -> WeightSystem {
        self.ws
    }

    pub fn flavor(&self) -> BasisFlavor {
        self.flavor
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (u32, u32)) -> bool {
        self.pairs.contains(&pair)
    }

    /// Weight excess d = k i + n j - k n (the scaling-action exponent).
    pub fn excess(&self, pair: (u32, u32)) -> u64 {
        self.ws.weight_xy(pair.0, pair.1) - self.ws.kn()
    }
}

/// Exact coordinates over a deformation basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VersalCoords {
    basis: DeformBasis,
    vals: BTreeMap<(u32, u32), Rat>,
}

impl VersalCoords {
    pub fn zero(basis: DeformBasis) -> Self {
        VersalCoords { basis, vals: BTreeMap::new() }
    }

    pub fn from_pairs(
        basis: DeformBasis,
        vals: impl IntoIterator<Item = ((u32, u32), Rat)>,
    ) -> Result<Self> {
        let mut out = Self::zero(basis);
        for (pair, c) in vals {
            out.set(pair, c)?;
        }
        Ok(out)
    }

    pub fn basis(&self) -> &DeformBasis {
        &self.basis
    }

    pub fn get(&self, pair: (u32, u32)) -> Rat {
        self.vals.get(&pair).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, pair: (u32, u32), c: Rat) -> Result<()> {
        if !self.basis.contains(pair) {
            return Err(Error::Format(format!("pair {pair:?} outside the basis")));
        }
        if c.is_zero() {
            self.vals.remove(&pair);
        } else {
            self.vals.insert(pair, c);
        }
        Ok(())
    }

    pub fn add_to(&mut self, pair: (u32, u32), delta: &Rat) -> Result<()> {
        let c = self.get(pair) + delta;
        self.set(pair, c)
    }

    pub fn support(&self) -> impl Iterator<Item = ((u32, u32), &Rat)> {
        self.vals.iter().map(|(p, c)| (*p, c))
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Values in basis order, zeros included.
    pub fn dense(&self) -> Vec<((u32, u32), Rat)> {
        self.basis.pairs().iter().map(|&p| (p, self.get(p))).collect()
    }

    /// The deformed equation F(x, y, t) = y^k - x^n + sum t_{ij} x^i y^j.
    pub fn equation(&self, trunc: u64) -> TruncSeries3 {
        let ws = self.basis.ws();
        let mut f = TruncSeries3::from_terms(
            ws,
            [
                (Mono3::new(0, ws.k(), 0), Rat::one()),
                (Mono3::new(ws.n(), 0, 0), -Rat::one()),
            ],
            trunc,
        );
        for (&(i, j), c) in &self.vals {
            f = f.add(&TruncSeries3::monomial(ws, Mono3::new(i, j, 0), c.clone(), trunc));
        }
        f
    }

    /// Reinterpret over another basis; fails if the support does not fit.
    pub fn restrict(&self, basis: DeformBasis) -> Result<VersalCoords> {
        let mut out = VersalCoords::zero(basis);
        for (pair, c) in self.support() {
            out.set(pair, c.clone())?;
        }
        Ok(out)
    }
}

/// Rewrite x^i y^j p^l into (n/k)^l x^a y^b of the same weight, by the rules
/// x p -> (n/k) y, p^k -> (n/k)^k x^{n-k} and, for i = 0,
/// y^j p^l -> (n/k)^l x^{n-l} y^{j+l-k}.
///
/// The first two rules are exact identities along the reference conormal at
/// any weight (this covers the pure p-powers); the last needs j + l > k,
/// which holds whenever the weight exceeds kn. Monomials for which the
/// rewrite gets stuck are rejected.
pub fn clean_monomial(ws: WeightSystem, i: u32, j: u32, l: u32) -> Result<((u32, u32), Rat)> {
    let w = ws.weight(i, j, l);
    let (k, n) = (ws.k(), ws.n());
    let coeff = rat_pow(&Rat::new(n.into(), k.into()), l as i64);
    let (mut i, mut j, mut l) = (i, j, l);
    while l >= k {
        i += n - k;
        l -= k;
    }
    while l >= 1 && i >= 1 {
        i -= 1;
        j += 1;
        l -= 1;
    }
    if l >= 1 {
        // i = 0 here; the last rule needs j + l > k, guaranteed for w > kn
        if j + l <= k {
            return Err(Error::BelowConductorRegion(w, ws.kn()));
        }
        j = j + l - k;
        i = n - l;
    }
    debug_assert_eq!(ws.weight_xy(i, j), w);
    Ok(((i, j), coeff))
}

/// g = A * n x^{n-1} + Bq * k y^{k-1} + R with R inside the rectangle
/// i <= n-2, j <= k-2. Deterministic: i >= n-1 goes to A, then j >= k-1 to Bq.
pub fn jacobian_divide(
    g: &TruncSeries3,
) -> (TruncSeries3, TruncSeries3, TruncSeries3) {
    let ws = g.ws();
    let (k, n) = (ws.k(), ws.n());
    let mut a = TruncSeries3::zero(ws, g.trunc());
    let mut bq = TruncSeries3::zero(ws, g.trunc());
    let mut r = TruncSeries3::zero(ws, g.trunc());
    for (m, c) in g.terms() {
        if m.i >= n - 1 {
            let t = TruncSeries3::monomial(
                ws,
                Mono3::new(m.i - (n - 1), m.j, m.l),
                c / Rat::from_integer(n.into()),
                g.trunc(),
            );
            a = a.add(&t);
        } else if m.j >= k - 1 {
            let t = TruncSeries3::monomial(
                ws,
                Mono3::new(m.i, m.j - (k - 1), m.l),
                c / Rat::from_integer(k.into()),
                g.trunc(),
            );
            bq = bq.add(&t);
        } else {
            r = r.add(&TruncSeries3::monomial(ws, m, c.clone(), g.trunc()));
        }
    }
    (a, bq, r)
}

/// Formal reduction to the plane: the p-free v with u - v in the conormal
/// ideal (within the window), by the greedy leading-term loop.
pub fn reduce_to_xy(u: &TruncSeries3, l: &ConormalParam) -> Result<TruncSeries3> {
    let ws = u.ws();
    let (k, n) = (ws.k(), ws.n());
    let c = ws.conductor();
    match l.valuation(u)? {
        Valuation::Finite(m) if m < c => return Err(Error::BelowConductor(m, c)),
        _ => {}
    }
    let y = l.branch().y_series();
    let mut ypow: Vec<UniSeries> = vec![UniSeries::one(y.trunc())];
    for _ in 1..k {
        ypow.push(ypow.last().unwrap().mul(&y).weaken(y.trunc()));
    }
    let mut residual = l.pull_back(u)?;
    let mut v = TruncSeries3::zero(ws, u.trunc());
    while let Some(m) = residual.ord() {
        let (a, b) = semigroup_rep(m as u64, k, n).ok_or_else(|| {
            Error::ReductionFailed(format!("order {m} not representable in <{k},{n}>"))
        })?;
        let image = ypow[b as usize].shift_up(k * a).weaken(residual.trunc());
        let xi = residual.coeff(m) / image.coeff(m);
        v = v.add(&TruncSeries3::monomial(ws, Mono3::new(a, b, 0), xi.clone(), u.trunc()));
        residual = residual.sub(&image.scale(&xi));
    }
    Ok(v)
}

/// Where the defect-killing loop stops.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cutoff {
    /// Keep killing until nothing is visible in the valuation window (gives
    /// exact transport certificates).
    Window,
    /// Discard defects above this weight (the classical determinacy bound).
    Bound(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ReduceOptions {
    pub cutoff: Cutoff,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { cutoff: Cutoff::Window }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LogStep {
    /// Plane scaling (x, y) -> (lambda x, mu y) (used to normalize a_n).
    Scale { lambda: Rat, mu: Rat },
    /// A defect absorbed into a basis coordinate (no change to the branch).
    Absorb { weight: u64, pair: (u32, u32), delta: Rat, value: Rat },
    /// Plane coordinate change (x, y) -> (x + alpha, y + beta), p-free series.
    Plane { weight: u64, alpha: TruncSeries3, beta: TruncSeries3 },
    /// A contact transformation eliminating the coordinate at `pair`.
    Contact { weight: u64, pair: (u32, u32), lambda: Rat, tx: ContactTx },
}

impl LogStep {
    pub fn weight(&self) -> Option<u64> {
        match self {
            LogStep::Scale { .. } => None,
            LogStep::Absorb { weight, .. }
            | LogStep::Plane { weight, .. }
            | LogStep::Contact { weight, .. } => Some(*weight),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ReductionLog {
    pub steps: Vec<LogStep>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub coords: VersalCoords,
    pub log: ReductionLog,
    pub branch: BranchParam,
}

/// Equisingular versal reduction: drive the branch onto a member of the
/// F-family over basis B.
pub fn equisingular_reduce(b: &BranchParam, opts: ReduceOptions) -> Result<Reduction> {
    let ws = b.ws().map_err(|_| Error::NotSemiQuasiHomogeneous {
        k: b.k(),
        n: b.n(),
        reason: "k and n are not coprime".into(),
    })?;
    let (k, n) = (ws.k(), ws.n());
    if k < 2 {
        return Err(Error::HypothesisViolated("reduction needs k > 1".into()));
    }
    let pi = puiseux_invariants(b)?;
    if pi.pairs != vec![(n, k)] {
        return Err(Error::NotSemiQuasiHomogeneous {
            k,
            n,
            reason: format!("Puiseux pairs {:?}, expected [({n}, {k})]", pi.pairs),
        });
    }
    if (b.trunc() as u64) < 2 * ws.kn() {
        return Err(Error::TruncationTooSmall(format!(
            "reduction needs truncation >= 2kn = {}, have {}",
            2 * ws.kn(),
            b.trunc()
        )));
    }

    let mut log = ReductionLog::default();
    let mut work = b.clone();
    if !work.a_n().is_one() {
        let mu = work.a_n().recip();
        work = work.scale_y(&mu)?;
        log.steps.push(LogStep::Scale { lambda: Rat::one(), mu });
    }

    let bas = basis(ws, BasisFlavor::B)?;
    let mut coords = VersalCoords::zero(bas);
    let trunc = work.trunc();
    let mut xs = work.x_series();
    let mut ys = work.y_series();
    let zero_uni = UniSeries::zero(trunc);

    let bound = match opts.cutoff {
        Cutoff::Window => u64::MAX,
        Cutoff::Bound(d) => d,
    };

    let mut xpow: Vec<UniSeries> = Vec::new();
    let mut ypow: Vec<UniSeries> = Vec::new();
    let rebuild = |cache: &mut Vec<UniSeries>, base: &UniSeries| {
        cache.clear();
        cache.push(UniSeries::one(base.trunc()));
    };
    fn grow<'c>(cache: &'c mut Vec<UniSeries>, base: &UniSeries, e: u32) -> &'c UniSeries {
        while cache.len() <= e as usize {
            let nx = cache.last().unwrap().mul(base).weaken(base.trunc());
            cache.push(nx);
        }
        &cache[e as usize]
    }
    rebuild(&mut xpow, &xs);
    rebuild(&mut ypow, &ys);

    let residual_of = |xpow: &mut Vec<UniSeries>,
                       ypow: &mut Vec<UniSeries>,
                       xs: &UniSeries,
                       ys: &UniSeries,
                       coords: &VersalCoords| {
        let mut r = grow(ypow, ys, k).clone();
        r = r.sub(grow(xpow, xs, n));
        for (&(i, j), c) in &coords.vals {
            let t = grow(xpow, xs, i).mul(grow(ypow, ys, j)).scale(c);
            r = r.add(&t);
        }
        r
    };

    let mut residual = residual_of(&mut xpow, &mut ypow, &xs, &ys, &coords);
    let mut last_weight: u64 = 0;
    loop {
        let m = match residual.ord() {
            Some(m) => m as u64,
            None => break,
        };
        if m <= ws.kn() {
            return Err(Error::NotEquisingular(m));
        }
        if m > bound {
            break;
        }
        if m <= last_weight {
            return Err(Error::ReductionFailed(format!(
                "defect weight did not increase past {last_weight}"
            )));
        }
        last_weight = m;

        let (a, bj) = semigroup_rep(m, k, n)
            .ok_or_else(|| Error::ReductionFailed(format!("{m} not representable")))?;
        let image = grow(&mut xpow, &xs, a).mul(grow(&mut ypow, &ys, bj));
        let xi = residual.coeff(m as u32) / image.coeff(m as u32);

        if a <= n - 2 && bj <= k - 2 {
            // rectangle defect: absorb into the coordinate
            let delta = -xi.clone();
            coords.add_to((a, bj), &delta)?;
            log.steps.push(LogStep::Absorb {
                weight: m,
                pair: (a, bj),
                delta,
                value: coords.get((a, bj)),
            });
            residual = residual.sub(&image.scale(&xi).weaken(residual.trunc()));
        } else {
            // kill with the plane coordinate change from Jacobian division
            let g = TruncSeries3::monomial(ws, Mono3::new(a, bj, 0), xi, trunc as u64);
            let (adiv, bdiv, r) = jacobian_divide(&g);
            debug_assert!(r.is_zero());
            let alpha = adiv;
            let beta = bdiv.neg();
            if !alpha.is_zero() {
                xs = xs.add(&alpha.substitute(&xs, &ys, &zero_uni)?);
                rebuild(&mut xpow, &xs);
            }
            if !beta.is_zero() {
                ys = ys.add(&beta.substitute(&xs, &ys, &zero_uni)?);
                rebuild(&mut ypow, &ys);
            }
            log.steps.push(LogStep::Plane { weight: m, alpha, beta });
            residual = residual_of(&mut xpow, &mut ypow, &xs, &ys, &coords);
        }
    }

    let branch = normalize_param(&xs, &ys)?;
    Ok(Reduction { coords, log, branch })
}

/// The paper's closed form for the contact coefficient, in this crate's
/// transport direction: lambda = -t (n-a) (k/n)^{n-1-a} / n.
pub fn closed_form_lambda(ws: WeightSystem, a: u32, t: &Rat) -> Rat {
    let (k, n) = (ws.k(), ws.n());
    let ratio = rat_pow(&Rat::new(k.into(), n.into()), (n - 1 - a) as i64);
    -t * Rat::new((n - a).into(), n.into()) * ratio
}

fn kill_tx(ws: WeightSystem, a: u32, b: u32, lambda: &Rat, trunc: u64) -> Result<ContactTx> {
    let n = ws.n();
    let alpha = TruncSeries3::monomial(
        ws,
        Mono3::new(0, a + b + 1 - n, n - 1 - a),
        lambda.clone(),
        trunc,
    );
    jtype_from_cauchy(alpha, TruncSeries3::zero(ws, trunc))
}

#[derive(Clone, Debug)]
pub struct MicrolocalReduction {
    /// Final coordinates over the microlocal basis C.
    pub coords: VersalCoords,
    /// The equisingular coordinates over B of the input branch.
    pub equi_coords: VersalCoords,
    pub log: ReductionLog,
    pub branch: BranchParam,
}

/// Microlocal versal reduction: equisingular reduction followed by one contact
/// elimination per nonzero coordinate outside C, ascending by weight. Each
/// elimination coefficient is solved linearly and checked against the closed
/// form.
pub fn microlocal_reduce(b: &BranchParam, opts: ReduceOptions) -> Result<MicrolocalReduction> {
    let ws = b.ws().map_err(|_| Error::NotSemiQuasiHomogeneous {
        k: b.k(),
        n: b.n(),
        reason: "k and n are not coprime".into(),
    })?;
    let (k, n) = (ws.k(), ws.n());
    if n as u64 <= 2 * k as u64 {
        return Err(Error::HypothesisViolated(format!(
            "microlocal reduction needs n > 2k, got ({k}, {n})"
        )));
    }
    let basis_b = basis(ws, BasisFlavor::B)?;
    let basis_c = basis(ws, BasisFlavor::C)?;
    let bc: Vec<(u32, u32)> = basis_b
        .pairs()
        .iter()
        .copied()
        .filter(|p| !basis_c.contains(*p))
        .collect();

    let mut red = equisingular_reduce(b, opts)?;
    let equi_coords = red.coords.clone();
    let mut log = std::mem::take(&mut red.log);

    for &(a, bj) in &bc {
        let t = red.coords.get((a, bj));
        if t.is_zero() {
            continue;
        }
        let v = ws.weight_xy(a, bj);
        let trunc = red.branch.trunc() as u64;

        // the coordinate at (a, bj) after the transport is affine in lambda
        let probe = transport_and_reduce(&red.branch, ws, a, bj, &Rat::one(), trunc, opts)?;
        let d1 = probe.coords.get((a, bj));
        let slope = d1 - &t;
        if slope.is_zero() {
            return Err(Error::ReductionFailed(format!(
                "degenerate elimination condition at {:?}",
                (a, bj)
            )));
        }
        let lambda = -&t / slope;
        let expected = closed_form_lambda(ws, a, &t);
        if lambda != expected {
            return Err(Error::ReductionFailed(format!(
                "solved lambda {lambda} disagrees with the closed form {expected} at {:?}",
                (a, bj)
            )));
        }

        let next = transport_and_reduce(&red.branch, ws, a, bj, &lambda, trunc, opts)?;
        if !next.coords.get((a, bj)).is_zero() {
            return Err(Error::ReductionFailed(format!(
                "coordinate {:?} survived its elimination",
                (a, bj)
            )));
        }
        for &q in basis_b.pairs() {
            if ws.weight_xy(q.0, q.1) < v && next.coords.get(q) != red.coords.get(q) {
                return Err(Error::ReductionFailed(format!(
                    "coordinate {q:?} below weight {v} changed during elimination"
                )));
            }
        }
        log.steps.push(LogStep::Contact {
            weight: v,
            pair: (a, bj),
            lambda: lambda.clone(),
            tx: kill_tx(ws, a, bj, &lambda, trunc)?,
        });
        log.steps.extend(next.log.steps.clone());
        red = next;
    }

    for (pair, _) in red.coords.support() {
        if !basis_c.contains(pair) {
            return Err(Error::ReductionFailed(format!(
                "support {pair:?} left outside the microlocal basis"
            )));
        }
    }
    let coords = red.coords.restrict(basis_c)?;
    Ok(MicrolocalReduction { coords, equi_coords, log, branch: red.branch })
}

fn transport_and_reduce(
    b: &BranchParam,
    ws: WeightSystem,
    a: u32,
    bj: u32,
    lambda: &Rat,
    trunc: u64,
    opts: ReduceOptions,
) -> Result<Reduction> {
    let tx = kill_tx(ws, a, bj, lambda, trunc)?;
    let l = apply_to_conormal(&tx, &conormal(b))?;
    equisingular_reduce(l.branch(), opts)
}

/// Replay a reduction log on a branch: scalings, plane changes, and contact
/// transformations move the branch; absorb steps only touch coordinates.
pub fn replay_log(b: &BranchParam, log: &ReductionLog) -> Result<BranchParam> {
    let mut cur = b.clone();
    for step in &log.steps {
        match step {
            LogStep::Absorb { .. } => {}
            LogStep::Scale { lambda, mu } => {
                if !lambda.is_one() {
                    let l = apply_to_conormal(
                        &ContactTx::Scaling { lambda: lambda.clone(), mu: mu.clone() },
                        &conormal(&cur),
                    )?;
                    cur = l.branch().clone();
                } else {
                    cur = cur.scale_y(mu)?;
                }
            }
            LogStep::Plane { alpha, beta, .. } => {
                let xs = cur.x_series();
                let ys = cur.y_series();
                let z = UniSeries::zero(cur.trunc());
                let nx = xs.add(&alpha.substitute(&xs, &ys, &z)?);
                let ny = ys.add(&beta.substitute(&xs, &ys, &z)?);
                cur = normalize_param(&nx, &ny)?;
            }
            LogStep::Contact { tx, .. } => {
                cur = apply_to_conormal(tx, &conormal(&cur))?.branch().clone();
            }
        }
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::parametrize_equation;
    use crate::rat::{rat, rat_int};

    fn ws411() -> WeightSystem {
        WeightSystem::new(4, 11).unwrap()
    }

    #[test]
    fn basis_b_and_c_for_4_11() {
        let b = basis(ws411(), BasisFlavor::B).unwrap();
        assert_eq!(b.pairs(), &[(6, 2), (9, 1), (7, 2), (8, 2), (9, 2)]);
        let weights: Vec<u64> = b.pairs().iter().map(|&(i, j)| ws411().weight_xy(i, j)).collect();
        assert_eq!(weights, vec![46, 47, 50, 54, 58]);

        let c = basis(ws411(), BasisFlavor::C).unwrap();
        assert_eq!(c.pairs(), &[(6, 2), (7, 2)]);
        assert_eq!(c.excess((6, 2)), 2);
        assert_eq!(c.excess((7, 2)), 6);
    }

    #[test]
    fn rigid_bases_are_empty() {
        for (k, n) in [(3u32, 7u32), (3, 8), (2, 5), (2, 9), (2, 21)] {
            let ws = WeightSystem::new(k, n).unwrap();
            let c = basis(ws, BasisFlavor::C).unwrap();
            assert!(c.is_empty(), "C({k},{n}) = {:?}", c.pairs());
        }
        assert!(!basis(WeightSystem::new(3, 10).unwrap(), BasisFlavor::C).unwrap().is_empty());
    }

    #[test]
    fn basis_c_needs_n_above_2k() {
        let ws = WeightSystem::new(3, 5).unwrap();
        assert!(matches!(basis(ws, BasisFlavor::C), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn clean_monomial_rules() {
        let ws = ws411();
        // p^k becomes (n/k)^k x^{n-k}
        assert_eq!(clean_monomial(ws, 0, 0, 4).unwrap(), ((7, 0), rat(14641, 256)));
        // xp becomes (n/k) y
        assert_eq!(clean_monomial(ws, 1, 0, 1).unwrap(), ((0, 1), rat(11, 4)));
        // x^{n-1} y^{a+b-n+1} p^{n-1-a} lands back on (a, b)
        assert_eq!(clean_monomial(ws, 10, 0, 1).unwrap(), ((9, 1), rat(11, 4)));
        // the i = 0 rule is unavailable below the conductor region
        assert!(matches!(
            clean_monomial(ws, 0, 1, 2),
            Err(Error::BelowConductorRegion(25, 44))
        ));
    }

    #[test]
    fn clean_monomial_certificate_samples() {
        let ws = ws411();
        let l = conormal(&BranchParam::monomial_curve(ws, 132));
        for (i, j, lexp) in [(0u32, 0u32, 4u32), (1, 0, 1), (10, 0, 1), (0, 2, 5), (3, 1, 2)] {
            let ((a, b), c) = clean_monomial(ws, i, j, lexp).unwrap();
            let w = ws.weight_xy(a, b);
            assert_eq!(ws.weight(i, j, lexp), w);
            let diff = TruncSeries3::monomial(ws, Mono3::new(i, j, lexp), Rat::one(), 132).sub(
                &TruncSeries3::monomial(ws, Mono3::new(a, b, 0), c, 132),
            );
            match l.valuation(&diff).unwrap() {
                Valuation::Finite(m) => assert!(m as u64 > w, "residual order {m} <= {w}"),
                Valuation::AtLeast(_) => {}
            }
        }
    }

    #[test]
    fn jacobian_division_examples() {
        let ws = ws411();
        // g = n x^{n-1}
        let g = TruncSeries3::from_int_terms(ws, &[(10, 0, 0, 11, 1)], 80);
        let (a, bq, r) = jacobian_divide(&g);
        assert_eq!(a, TruncSeries3::one(ws, 80));
        assert!(bq.is_zero() && r.is_zero());

        // rectangle monomial stays in the remainder
        let g = TruncSeries3::from_int_terms(ws, &[(6, 2, 0, 1, 1)], 80);
        let (a, bq, r) = jacobian_divide(&g);
        assert!(a.is_zero() && bq.is_zero());
        assert_eq!(r, g);

        // split case: x^10 y -> A = y/11; x y^3 -> Bq = x/4
        let g = TruncSeries3::from_int_terms(ws, &[(10, 1, 0, 1, 1), (1, 3, 0, 1, 1)], 80);
        let (a, bq, r) = jacobian_divide(&g);
        assert_eq!(a, TruncSeries3::from_int_terms(ws, &[(0, 1, 0, 1, 11)], 80));
        assert_eq!(bq, TruncSeries3::from_int_terms(ws, &[(1, 0, 0, 1, 4)], 80));
        assert!(r.is_zero());

        // reassembly identity
        let g = TruncSeries3::from_int_terms(
            ws,
            &[(10, 1, 0, 3, 2), (1, 3, 0, -1, 5), (6, 2, 0, 7, 1), (12, 0, 0, 1, 1)],
            80,
        );
        let (a, bq, r) = jacobian_divide(&g);
        let nx = TruncSeries3::from_int_terms(ws, &[(10, 0, 0, 11, 1)], 80);
        let ky = TruncSeries3::from_int_terms(ws, &[(0, 3, 0, 4, 1)], 80);
        assert_eq!(a.mul(&nx).add(&bq.mul(&ky)).add(&r).weaken(80), g);
    }

    #[test]
    fn reduce_to_xy_examples() {
        let ws = ws411();
        let l = conormal(&BranchParam::monomial_curve(ws, 132));

        // already p-free
        let u = TruncSeries3::from_int_terms(ws, &[(11, 0, 0, 2, 1), (6, 2, 0, -1, 3)], 132);
        assert_eq!(reduce_to_xy(&u, &l).unwrap(), u);

        // x^4 p^4 has valuation 44 and cleans to (11/4)^4 x^11
        let u = TruncSeries3::from_int_terms(ws, &[(4, 0, 4, 1, 1)], 132);
        let v = reduce_to_xy(&u, &l).unwrap();
        assert_eq!(v, TruncSeries3::monomial(ws, Mono3::new(11, 0, 0), rat(14641, 256), 132));
        assert!(l.in_ideal(&u.sub(&v)).unwrap());

        // an ideal element reduces to zero
        let u = TruncSeries3::from_int_terms(ws, &[(0, 1, 0, 11, 1), (1, 0, 1, -4, 1)], 132);
        assert!(reduce_to_xy(&u, &l).unwrap().is_zero());

        // below the conductor
        let u = TruncSeries3::from_int_terms(ws, &[(1, 0, 0, 1, 1)], 132);
        assert!(matches!(reduce_to_xy(&u, &l), Err(Error::BelowConductor(4, 30))));
    }

    #[test]
    fn equisingular_reduce_undeformed_curve() {
        let b = BranchParam::monomial_curve(ws411(), 132);
        let red = equisingular_reduce(&b, ReduceOptions::default()).unwrap();
        assert!(red.coords.is_zero());
        assert!(red.log.steps.is_empty());
    }

    #[test]
    fn equisingular_reduce_f1_instance() {
        let ws = ws411();
        let f1 = TruncSeries3::from_int_terms(
            ws,
            &[(0, 4, 0, 1, 1), (11, 0, 0, -1, 1), (6, 2, 0, 1, 1)],
            132,
        );
        let b = parametrize_equation(&f1, 132).unwrap();
        let red = equisingular_reduce(&b, ReduceOptions::default()).unwrap();
        assert_eq!(red.coords.dense(), vec![
            ((6, 2), rat_int(1)),
            ((9, 1), rat_int(0)),
            ((7, 2), rat_int(0)),
            ((8, 2), rat_int(0)),
            ((9, 2), rat_int(0)),
        ]);
    }

    #[test]
    fn equisingular_reduce_kills_off_rectangle_defect() {
        let ws = ws411();
        // x^10 y has weight 51 with i = 10 > n-2: a coordinate change removes it.
        let f = TruncSeries3::from_int_terms(
            ws,
            &[(0, 4, 0, 1, 1), (11, 0, 0, -1, 1), (10, 1, 0, 1, 1)],
            132,
        );
        let b = parametrize_equation(&f, 132).unwrap();
        let red = equisingular_reduce(&b, ReduceOptions::default()).unwrap();
        assert!(red.log.steps.iter().any(|s| matches!(s, LogStep::Plane { .. })));
        for ((i, j), c) in red.coords.support() {
            assert!(ws.weight_xy(i, j) > 51, "coordinate ({i},{j}) = {c}");
        }
        // transport certificate: replaying the log on the input reproduces the
        // final branch, and F(., coords) vanishes on it within the window.
        let replayed = replay_log(&b, &red.log).unwrap();
        let w = replayed.trunc().min(red.branch.trunc());
        assert_eq!(replayed.y_series().weaken(w), red.branch.y_series().weaken(w));
        let f_out = red.coords.equation(red.branch.trunc() as u64);
        assert!(conormal(&red.branch).in_ideal(&f_out).unwrap());
    }

    #[test]
    fn equisingular_reduce_rejects_non_sqh() {
        let xs = UniSeries::monomial(Rat::one(), 4, 80);
        let ys = UniSeries::from_terms([(6, rat_int(1)), (7, rat_int(1))], 80);
        let b = crate::branch::normalize_param(&xs, &ys).unwrap();
        assert!(matches!(
            equisingular_reduce(&b, ReduceOptions::default()),
            Err(Error::NotSemiQuasiHomogeneous { .. })
        ));
    }

    #[test]
    fn equisingular_reduce_scales_a_n() {
        let ws = ws411();
        let b = BranchParam::monomial_curve(ws, 132).scale_y(&rat_int(3)).unwrap();
        let red = equisingular_reduce(&b, ReduceOptions::default()).unwrap();
        assert!(red.coords.is_zero());
        assert!(matches!(red.log.steps[0], LogStep::Scale { .. }));
        assert_eq!(red.branch.a_n(), rat_int(1));
    }

    #[test]
    fn equisingular_idempotence() {
        let ws = ws411();
        let mut coords = VersalCoords::zero(basis(ws, BasisFlavor::B).unwrap());
        coords.set((6, 2), rat(2, 3)).unwrap();
        coords.set((9, 1), rat(-1, 2)).unwrap();
        coords.set((9, 2), rat_int(5)).unwrap();
        let f = coords.equation(132);
        let b = parametrize_equation(&f, 132).unwrap();
        let red = equisingular_reduce(&b, ReduceOptions::default()).unwrap();
        assert_eq!(red.coords, coords);
    }

    #[test]
    fn microlocal_reduce_g_instance_is_fixed() {
        let ws = ws411();
        let f1 = TruncSeries3::from_int_terms(
            ws,
            &[(0, 4, 0, 1, 1), (11, 0, 0, -1, 1), (6, 2, 0, 1, 1)],
            132,
        );
        let b = parametrize_equation(&f1, 132).unwrap();
        let red = microlocal_reduce(&b, ReduceOptions::default()).unwrap();
        assert_eq!(red.coords.dense(), vec![((6, 2), rat_int(1)), ((7, 2), rat_int(0))]);
        // a G-instance needs no transformation, only coordinate bookkeeping
        assert!(red
            .log
            .steps
            .iter()
            .all(|s| matches!(s, LogStep::Absorb { .. })));
    }

    #[test]
    fn microlocal_reduce_eliminates_x9y() {
        let ws = ws411();
        let f = TruncSeries3::from_int_terms(
            ws,
            &[(0, 4, 0, 1, 1), (11, 0, 0, -1, 1), (9, 1, 0, 1, 1)],
            132,
        );
        let b = parametrize_equation(&f, 132).unwrap();
        let red = microlocal_reduce(&b, ReduceOptions::default()).unwrap();
        // support landed in C
        for (pair, _) in red.coords.support() {
            assert!(red.coords.basis().contains(pair));
        }
        // a contact step at weight 47 was used
        assert!(red
            .log
            .steps
            .iter()
            .any(|s| matches!(s, LogStep::Contact { weight: 47, pair: (9, 1), .. })));
        // full transport certificate: replay the log on the input branch and
        // compare with the parametrization of the output normal form.
        let replayed = replay_log(&b, &red.log).unwrap();
        let g = red.coords.equation(replayed.trunc() as u64);
        let model = parametrize_equation(&g, replayed.trunc()).unwrap();
        let w = replayed
            .trunc()
            .min(model.trunc())
            .min(conormal(&replayed).window());
        assert_eq!(replayed.y_series().weaken(w), model.y_series().weaken(w));
    }

    #[test]
    fn lambda_matches_closed_form() {
        // (9,1) at t = 1 for (4,11): lambda = -t (n-a) (k/n)^{n-1-a} / n = -8/121.
        assert_eq!(closed_form_lambda(ws411(), 9, &rat_int(1)), rat(-8, 121));
    }
}
