//! Normalized parametrizations of irreducible plane branches, Puiseux
//! invariants and semigroup data, implicitization, and topological-type
//! comparison.
//!
//! A branch is always stored with x-component exactly s^k:
//! x = s^k, y = a_n s^n + sum_{r > n} a_r s^r, with a_n != 0. Arbitrary
//! order-k parametrizations are brought to this form by `normalize_param`
//! (k-th root of the x-component plus compositional inversion), which never
//! changes the curve.

use std::collections::BTreeMap;

use num::integer::gcd;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_nth_root, Rat};
use crate::series::{Mono3, TruncSeries3, UniSeries};
use crate::weights::WeightSystem;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BranchParam {
    k: u32,
    n: u32,
    coeffs: BTreeMap<u32, Rat>,
    trunc: u32,
}

impl BranchParam {
    /// Branch from y-coefficients { r -> a_r }; requires n > k >= 1, a_n != 0
    /// and all exponents in [n, trunc]. gcd(k, n) > 1 is allowed here (the
    /// full support decides primitivity); the coprime weight system is only
    /// needed by the equation-level machinery, see `ws()`.
    pub fn new(k: u32, n: u32, coeffs: BTreeMap<u32, Rat>, trunc: u32) -> Result<Self> {
        if k == 0 || n <= k {
            return Err(Error::BadOrder { expected: k + 1, found: Some(n) });
        }
        let mut clean: BTreeMap<u32, Rat> = BTreeMap::new();
        for (r, c) in coeffs {
            if c.is_zero() || r > trunc {
                continue;
            }
            if r < n {
                return Err(Error::BadOrder { expected: n, found: Some(r) });
            }
            clean.insert(r, c);
        }
        if clean.get(&n).map(|c| c.is_zero()).unwrap_or(true) {
            return Err(Error::BadOrder { expected: n, found: clean.keys().next().copied() });
        }
        Ok(BranchParam { k, n, coeffs: clean, trunc })
    }

    /// The undeformed branch of y^k = x^n: (s^k, s^n).
    pub fn monomial_curve(ws: WeightSystem, trunc: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(ws.n(), Rat::one());
        BranchParam { k: ws.k(), n: ws.n(), coeffs, trunc }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The coprime weight system of a semi-quasi-homogeneous branch.
    pub fn ws(&self) -> Result<WeightSystem> {
        WeightSystem::new(self.k, self.n)
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn a(&self, r: u32) -> Rat {
        self.coeffs.get(&r).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn a_n(&self) -> Rat {
        self.a(self.n)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs.iter().map(|(r, c)| (*r, c))
    }

    pub fn x_series(&self) -> UniSeries {
        UniSeries::monomial(Rat::one(), self.k, self.trunc)
    }

    pub fn y_series(&self) -> UniSeries {
        UniSeries::from_terms(self.coeffs.iter().map(|(r, c)| (*r, c.clone())), self.trunc)
    }

    /// The image under (x, y) -> (x, mu*y): same parametrization with all
    /// y-coefficients scaled.
    pub fn scale_y(&self, mu: &Rat) -> Result<Self> {
        if mu.is_zero() {
            return Err(Error::ScaleNotRational("mu = 0".into()));
        }
        Ok(BranchParam {
            k: self.k,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(r, c)| (*r, mu * c)).collect(),
            trunc: self.trunc,
        })
    }
}

/// A normalization together with the parameter change that produced it:
/// x(s(t)) = t^k exactly, y(s(t)) = the branch's y-series.
pub struct NormalizedParam {
    pub branch: BranchParam,
    /// t as a series in the original parameter s.
    pub t_of_s: UniSeries,
    /// s as a series in the new parameter t.
    pub s_of_t: UniSeries,
}

/// Bring an arbitrary parametrization (xs, ys) with ord(xs) = k < ord(ys) = n
/// to the normal form x = t^k. The curve is unchanged; only the parameter
/// moves. For even k the parameter sign is fixed so that a_n > 0.
pub fn normalize_param_full(xs: &UniSeries, ys: &UniSeries) -> Result<NormalizedParam> {
    let k = match xs.ord() {
        Some(o) if o >= 1 => o,
        other => return Err(Error::BadOrder { expected: 1, found: other }),
    };
    let n = match ys.ord() {
        Some(o) if o > k => o,
        other => return Err(Error::BadOrder { expected: k + 1, found: other }),
    };
    let ck = xs.coeff(k);
    let gamma = rat_nth_root(&ck, k)
        .ok_or_else(|| Error::ScaleNotRational(format!("leading coefficient {ck} has no rational {k}-th root")))?;
    // xs = ck * s^k * (1 + v); t = gamma * s * (1+v)^{1/k} gives t^k = xs.
    let unit = xs.shift_down(k)?.scale(&ck.recip());
    let root = unit.root(k)?;
    let mut t_of_s = root.shift_up(1).scale(&gamma);
    let mut s_of_t = t_of_s.comp_inverse()?;
    let mut y_t = ys.compose(&s_of_t)?;
    if k % 2 == 0 && y_t.coeff(n).is_negative() {
        // t -> -t keeps x = t^k and flips a_n (n is odd when k is even).
        t_of_s = t_of_s.neg();
        s_of_t = UniSeries::from_terms(
            s_of_t.terms().map(|(r, c)| (r, if r % 2 == 1 { -c.clone() } else { c.clone() })),
            s_of_t.trunc(),
        );
        y_t = ys.compose(&s_of_t)?;
    }
    let trunc = y_t.trunc();
    let branch =
        BranchParam::new(k, n, y_t.terms().map(|(r, c)| (r, c.clone())).collect(), trunc)?;
    Ok(NormalizedParam { branch, t_of_s, s_of_t })
}

pub fn normalize_param(xs: &UniSeries, ys: &UniSeries) -> Result<BranchParam> {
    Ok(normalize_param_full(xs, ys)?.branch)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PuiseuxInvariants {
    /// Multiplicity of the branch (= k).
    pub mult: u32,
    /// Characteristic exponents e_1 < ... < e_g of the y-support.
    pub char_exponents: Vec<u32>,
    /// Puiseux pairs (n_i, k_i) with k_g = k, ordered by increasing n_i/k_i.
    pub pairs: Vec<(u32, u32)>,
    /// Minimal generators of the value semigroup.
    pub semigroup: Vec<u32>,
    /// Conductor, found by a brute-force gap scan of the semigroup.
    pub conductor: u32,
}

/// Gcd-descent over the exponent support {k} U {r : a_r != 0}.
pub fn puiseux_invariants(b: &BranchParam) -> Result<PuiseuxInvariants> {
    let k = b.k();
    let mut d = k;
    let mut chars: Vec<u32> = Vec::new();
    let mut ds: Vec<u32> = Vec::new();
    for (r, _) in b.coeffs() {
        let g = gcd(d, r);
        if g < d {
            chars.push(r);
            ds.push(g);
            d = g;
            if d == 1 {
                break;
            }
        }
    }
    if d > 1 {
        return Err(Error::NotPrimitive(d));
    }

    let mut pairs = Vec::with_capacity(chars.len());
    for (e, di) in chars.iter().zip(&ds) {
        pairs.push((e / di, k / di));
    }

    // Semigroup generators by the standard recursion on the gcd chain.
    let mut gens: Vec<u32> = vec![k];
    let mut prev_d = k;
    let mut prev_gen: u64 = 0;
    for (q, (&e, &di)) in chars.iter().zip(&ds).enumerate() {
        let gen: u64 = if q == 0 {
            e as u64
        } else {
            (prev_d / di) as u64 * prev_gen - chars[q - 1] as u64 + e as u64
        };
        gens.push(gen as u32);
        prev_gen = gen;
        prev_d = di;
    }

    let conductor = conductor_by_sieve(&gens);
    Ok(PuiseuxInvariants { mult: k, char_exponents: chars, pairs, semigroup: gens, conductor })
}

/// Least c with [c, infinity) inside the numerical semigroup: sieve upward
/// until a run of min-generator consecutive members appears.
pub fn conductor_by_sieve(gens: &[u32]) -> u32 {
    let k = *gens.iter().min().expect("nonempty generators") as usize;
    let mut member = vec![false; 1];
    member[0] = true;
    let mut run = 1usize;
    let mut m = 0usize;
    loop {
        if run >= k {
            return (m + 1 - k) as u32;
        }
        m += 1;
        let is = gens.iter().any(|&g| m >= g as usize && member[m - g as usize]);
        member.push(is);
        run = if is { run + 1 } else { 0 };
    }
}

/// The unique monic-in-y equation F = y^k + sum_{j<k} c_j(x) y^j vanishing on
/// the branch within the reliable window; found degree-by-degree in weight.
pub fn implicitize(b: &BranchParam) -> Result<TruncSeries3> {
    let ws = b.ws()?;
    let (k, n) = (ws.k(), ws.n());
    let guard = ws.kn();
    let trunc = b.trunc() as u64;
    if trunc <= guard + ws.kn() {
        return Err(Error::TruncationTooSmall(format!(
            "need trunc > 2kn = {}, have {}",
            2 * ws.kn(),
            trunc
        )));
    }
    let window = (trunc - guard) as u32;

    let y = b.y_series();
    let mut ypow: Vec<UniSeries> = vec![UniSeries::one(b.trunc())];
    for _ in 0..k {
        ypow.push(ypow.last().unwrap().mul(&y).weaken(b.trunc()));
    }

    let mut f = TruncSeries3::monomial(ws, Mono3::new(0, k, 0), Rat::one(), window as u64);
    let mut residual = ypow[k as usize].clone();
    loop {
        let m = match residual.ord() {
            Some(m) if m <= window => m,
            _ => break,
        };
        let (a, bj) = semigroup_rep(m as u64, k, n).ok_or_else(|| {
            Error::TruncationTooSmall(format!("residual order {m} not representable"))
        })?;
        let image = ypow[bj as usize].shift_up(k * a).weaken(residual.trunc());
        let lead = image.coeff(m);
        let xi = -residual.coeff(m) / lead;
        f = f.add(&TruncSeries3::monomial(ws, Mono3::new(a, bj, 0), xi.clone(), window as u64));
        residual = residual.add(&image.scale(&xi));
    }
    Ok(f)
}

/// The unique (a, b) with m = k*a + n*b and 0 <= b < k, when it exists.
pub(crate) fn semigroup_rep(m: u64, k: u32, n: u32) -> Option<(u32, u32)> {
    for b in 0..k {
        let nb = n as u64 * b as u64;
        if m >= nb && (m - nb) % k as u64 == 0 {
            return Some((((m - nb) / k as u64) as u32, b));
        }
    }
    None
}

/// Parametrize a semi-quasi-homogeneous equation y^k - x^n + (weight > kn) by
/// undetermined coefficients ascending in the exponent.
pub fn parametrize_equation(f: &TruncSeries3, trunc_s: u32) -> Result<BranchParam> {
    let ws = f.ws();
    let (k, n) = (ws.k(), ws.n());
    let reject = |reason: String| Error::NotSemiQuasiHomogeneous { k, n, reason };
    if !f.coeff(Mono3::new(0, k, 0)).is_one() {
        return Err(reject("leading term y^k with coefficient 1 is missing".into()));
    }
    if f.coeff(Mono3::new(n, 0, 0)) != -Rat::one() {
        return Err(reject(format!("term -x^{n} is missing")));
    }
    for (m, _) in f.terms() {
        if m.l > 0 {
            return Err(reject("equation depends on p".into()));
        }
        if m == Mono3::new(0, k, 0) || m == Mono3::new(n, 0, 0) {
            continue;
        }
        let w = ws.weight(m.i, m.j, 0);
        if w <= ws.kn() {
            return Err(reject(format!(
                "term x^{}y^{} has weight {w} <= kn = {}",
                m.i,
                m.j,
                ws.kn()
            )));
        }
    }

    let sx = UniSeries::monomial(Rat::one(), k, trunc_s);
    let sp = UniSeries::zero(trunc_s);
    let mut y = UniSeries::monomial(Rat::one(), n, trunc_s);
    let shift = n as u64 * (k as u64 - 1);
    loop {
        let residual = f.substitute(&sx, &y, &sp)?;
        let m = match residual.ord() {
            Some(m) => m as u64,
            None => break,
        };
        if m <= shift + n as u64 {
            return Err(reject(format!("defect at order {m} cannot be matched")));
        }
        let r = m - shift;
        if r > trunc_s as u64 {
            break;
        }
        let ar = -residual.coeff(m as u32) / Rat::from_integer(k.into());
        y = y.add_term(r as u32, &ar);
    }
    BranchParam::new(k, n, y.terms().map(|(r, c)| (r, c.clone())).collect(), y.trunc())
}

/// Branches have the same topological type iff their Puiseux pairs agree.
pub fn same_topological_type(b1: &BranchParam, b2: &BranchParam) -> Result<bool> {
    Ok(puiseux_invariants(b1)?.pairs == puiseux_invariants(b2)?.pairs)
}
