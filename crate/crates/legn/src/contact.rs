//! Relative contact transformations.
//!
//! Two building blocks: scalings (x, y, p) -> (lambda x, mu y, mu/lambda p)
//! and the maps (x, y, p) -> (x + alpha, y + beta, p + gamma) whose components
//! and diagonal linear parts lie in the maximal ideal. A general group element
//! is represented as scaling-after-jtype.
//!
//! beta is produced by the Cauchy-problem recursion on powers of p; gamma is
//! never guessed: it is forced by requiring the pullback of dy - p dx to be
//! proportional to dy - p dx, and every constructed transformation carries the
//! recomputed certificate (dp-component identically zero, dx-component equal
//! to -p times the unit dy-component).

use num::{One, Zero};

use crate::branch::{normalize_param_full, BranchParam};
use crate::conormal::{conormal, ConormalParam};
use crate::error::{Error, Result};
use crate::rat::{rat_pow, Rat};
use crate::series::{Mono3, TruncSeries3, Var};
use crate::weights::WeightSystem;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JContact {
    alpha: TruncSeries3,
    beta: TruncSeries3,
    gamma: TruncSeries3,
    unit: TruncSeries3,
}

impl JContact {
    /// Assemble and certify a jtype transformation from its components.
    pub fn verified(alpha: TruncSeries3, beta: TruncSeries3, gamma: TruncSeries3) -> Result<Self> {
        require_in_ideal(&alpha, "alpha")?;
        require_in_ideal(&beta, "beta")?;
        require_in_ideal(&gamma, "gamma")?;
        for (s, mono, name) in [
            (&alpha, Mono3::new(1, 0, 0), "d_x alpha"),
            (&beta, Mono3::new(0, 1, 0), "d_y beta"),
            (&gamma, Mono3::new(0, 0, 1), "d_p gamma"),
        ] {
            if !s.coeff(mono).is_zero() {
                return Err(Error::NotInGroupJ(format!("{name} has a constant term")));
            }
        }
        let unit = certify(&alpha, &beta, &gamma)?;
        Ok(JContact { alpha, beta, gamma, unit })
    }

    pub fn identity(ws: WeightSystem, trunc: u64) -> Self {
        JContact {
            alpha: TruncSeries3::zero(ws, trunc),
            beta: TruncSeries3::zero(ws, trunc),
            gamma: TruncSeries3::zero(ws, trunc),
            unit: TruncSeries3::one(ws, trunc),
        }
    }

    pub fn alpha(&self) -> &TruncSeries3 {
        &self.alpha
    }

    pub fn beta(&self) -> &TruncSeries3 {
        &self.beta
    }

    pub fn gamma(&self) -> &TruncSeries3 {
        &self.gamma
    }

    /// The certified unit factor of the pullback.
    pub fn unit(&self) -> &TruncSeries3 {
        &self.unit
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero() && self.gamma.is_zero()
    }

    /// Components of the transformed chart: (x + alpha, y + beta, p + gamma).
    pub fn chart(&self) -> (TruncSeries3, TruncSeries3, TruncSeries3) {
        let ws = self.alpha.ws();
        let t = self.alpha.trunc();
        (
            TruncSeries3::var(ws, Var::X, t).add(&self.alpha),
            TruncSeries3::var(ws, Var::Y, t).add(&self.beta),
            TruncSeries3::var(ws, Var::P, t).add(&self.gamma),
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ContactTx {
    Scaling { lambda: Rat, mu: Rat },
    JType(JContact),
    /// scaling-after-jtype, the normal form of a general group element.
    Composed { lambda: Rat, mu: Rat, j: JContact },
}

impl ContactTx {
    pub fn scaling(lambda: Rat, mu: Rat) -> Result<Self> {
        if lambda.is_zero() || mu.is_zero() {
            return Err(Error::ScaleNotRational("scaling with lambda*mu = 0".into()));
        }
        Ok(ContactTx::Scaling { lambda, mu })
    }

    pub fn identity(ws: WeightSystem, trunc: u64) -> Self {
        ContactTx::JType(JContact::identity(ws, trunc))
    }
}

fn require_in_ideal(s: &TruncSeries3, name: &str) -> Result<()> {
    if !s.coeff(Mono3::new(0, 0, 0)).is_zero() {
        return Err(Error::NotInGroupJ(format!("{name} has a constant term")));
    }
    Ok(())
}

/// Solve the Cauchy problem
/// (1 + a_x + p a_y) b_p - a_p b_x - p a_p b_y = p a_p,  beta = beta0 mod (p)
/// by recursion on the coefficients of powers of p.
pub fn solve_cauchy(alpha: &TruncSeries3, beta0: &TruncSeries3) -> Result<TruncSeries3> {
    let ws = alpha.ws();
    ws.same(&beta0.ws())?;
    require_in_ideal(alpha, "alpha")?;
    require_in_ideal(beta0, "beta0")?;
    if !alpha.coeff(Mono3::new(1, 0, 0)).is_zero() {
        return Err(Error::NotInGroupJ("d_x alpha has a constant term".into()));
    }
    if !beta0.coeff(Mono3::new(0, 1, 0)).is_zero() {
        return Err(Error::NotInGroupJ("d_y beta0 has a constant term".into()));
    }
    if !beta0.is_p_free() {
        return Err(Error::NotInGroupJ("beta0 must not depend on p".into()));
    }

    let wp = ws.wp() as u64;
    let target = alpha.trunc().min(beta0.trunc());
    let alev = alpha.p_levels();
    let u0 = TruncSeries3::one(ws, alev[0].trunc()).add(&alev[0].partial(Var::X));

    let mut levels: Vec<TruncSeries3> = vec![beta0.clone()];
    let lmax = (target / wp.max(1)) as usize;
    let huge = u64::MAX / 4;
    for l in 0..lmax {
        let mut rhs = TruncSeries3::zero(ws, huge);
        if l >= 1 && l < alev.len() {
            rhs = rhs.add(&alev[l].scale(&Rat::from_integer(l.into())));
        }
        for m in 1..=l.min(alev.len().saturating_sub(1)) {
            let um = alev[m].partial(Var::X).add(&alev[m - 1].partial(Var::Y));
            let r = l - m + 1;
            rhs = rhs.sub(&um.mul(&levels[r]).scale(&Rat::from_integer(r.into())));
        }
        for m in 0..=l {
            if m + 1 >= alev.len() {
                break;
            }
            let term = alev[m + 1].mul(&levels[l - m].partial(Var::X));
            rhs = rhs.add(&term.scale(&Rat::from_integer((m + 1).into())));
        }
        for m in 0..l {
            if m + 1 >= alev.len() {
                break;
            }
            let term = alev[m + 1].mul(&levels[l - 1 - m].partial(Var::Y));
            rhs = rhs.add(&term.scale(&Rat::from_integer((m + 1).into())));
        }
        let next = rhs.div_unit(&u0)?.scale(&Rat::from_integer((l + 1).into()).recip());
        levels.push(next);
    }
    Ok(TruncSeries3::assemble_p_levels(ws, &levels, target))
}

/// gamma is pinned down by the dx-component of the pullback condition:
/// gamma (1 + a_x + p a_y) = b_x + p b_y - p (a_x + p a_y).
pub fn solve_gamma(alpha: &TruncSeries3, beta: &TruncSeries3) -> Result<TruncSeries3> {
    let ws = alpha.ws();
    ws.same(&beta.ws())?;
    let t = alpha.trunc().max(beta.trunc());
    let p = TruncSeries3::var(ws, Var::P, t);
    let ax = alpha.partial(Var::X);
    let ay = alpha.partial(Var::Y);
    let u = TruncSeries3::one(ws, t).add(&ax).add(&p.mul(&ay));
    if u.coeff(Mono3::new(0, 0, 0)).is_zero() {
        return Err(Error::DegenerateJacobian);
    }
    let num = beta
        .partial(Var::X)
        .add(&p.mul(&beta.partial(Var::Y)))
        .sub(&p.mul(&ax))
        .sub(&p.pow(2).mul(&ay));
    num.div_unit(&u)
}

/// Build a certified jtype transformation from Cauchy data (alpha, beta0).
pub fn jtype_from_cauchy(alpha: TruncSeries3, beta0: TruncSeries3) -> Result<ContactTx> {
    let beta = solve_cauchy(&alpha, &beta0)?;
    let gamma = solve_gamma(&alpha, &beta)?;
    Ok(ContactTx::JType(JContact::verified(alpha, beta, gamma)?))
}

/// The components A dx + B dy + C dp of the pullback of dy - p dx under
/// (x, y, p) -> (x + alpha, y + beta, p + gamma).
pub fn pullback_components(
    alpha: &TruncSeries3,
    beta: &TruncSeries3,
    gamma: &TruncSeries3,
) -> (TruncSeries3, TruncSeries3, TruncSeries3) {
    let ws = alpha.ws();
    let t = alpha.trunc().max(beta.trunc()).max(gamma.trunc());
    let one = TruncSeries3::one(ws, t);
    let pg = TruncSeries3::var(ws, Var::P, t).add(gamma);
    let a = beta.partial(Var::X).sub(&pg.mul(&one.add(&alpha.partial(Var::X))));
    let b = one.add(&beta.partial(Var::Y)).sub(&pg.mul(&alpha.partial(Var::Y)));
    let c = beta.partial(Var::P).sub(&pg.mul(&alpha.partial(Var::P)));
    (a, b, c)
}

fn certify(alpha: &TruncSeries3, beta: &TruncSeries3, gamma: &TruncSeries3) -> Result<TruncSeries3> {
    let (a, b, c) = pullback_components(alpha, beta, gamma);
    if !c.is_zero() {
        return Err(Error::NotContact(format!("dp-component is {c}")));
    }
    let ws = alpha.ws();
    let p = TruncSeries3::var(ws, Var::P, b.trunc());
    let residual = a.add(&p.mul(&b));
    if !residual.is_zero() {
        return Err(Error::NotContact(format!("dx-component mismatch {residual}")));
    }
    if b.coeff(Mono3::new(0, 0, 0)).is_zero() {
        return Err(Error::NotContact("dy-component is not a unit".into()));
    }
    Ok(b)
}

/// Recompute the pullback certificate of a transformation and return its unit
/// factor.
pub fn verify_contact(tx: &ContactTx) -> Result<TruncSeries3> {
    match tx {
        ContactTx::Scaling { lambda, mu } => {
            if lambda.is_zero() || mu.is_zero() {
                return Err(Error::NotContact("degenerate scaling".into()));
            }
            // d(mu y) - (mu/lambda) p d(lambda x) = mu (dy - p dx).
            let ws = WeightSystem::new(1, 2).expect("static");
            Ok(TruncSeries3::constant(ws, mu.clone(), 0))
        }
        ContactTx::JType(j) => certify(&j.alpha, &j.beta, &j.gamma),
        ContactTx::Composed { mu, j, .. } => {
            let u = certify(&j.alpha, &j.beta, &j.gamma)?;
            Ok(u.scale(mu))
        }
    }
}

fn flip_branch_sign(b: BranchParam) -> BranchParam {
    // parameter t -> -t; legal exactly when k is even (x = t^k is unchanged).
    use num::Signed;
    if b.k() % 2 != 0 || !b.a_n().is_negative() {
        return b;
    }
    let coeffs = b
        .coeffs()
        .map(|(r, c)| (r, if r % 2 == 1 { -c.clone() } else { c.clone() }))
        .collect();
    BranchParam::new(b.k(), b.n(), coeffs, b.trunc()).expect("sign flip keeps validity")
}

/// Transport a conormal through a transformation: compose with the
/// parametrization, renormalize the branch, recompute p, and check that the
/// transported p-component agrees with the recomputed one.
pub fn apply_to_conormal(tx: &ContactTx, l: &ConormalParam) -> Result<ConormalParam> {
    match tx {
        ContactTx::Scaling { lambda, mu } => apply_scaling(lambda, mu, l),
        ContactTx::JType(j) => apply_jtype(j, l),
        ContactTx::Composed { lambda, mu, j } => {
            let mid = apply_jtype(j, l)?;
            apply_scaling(lambda, mu, &mid)
        }
    }
}

fn apply_scaling(lambda: &Rat, mu: &Rat, l: &ConormalParam) -> Result<ConormalParam> {
    let b = l.branch();
    let k = b.k();
    if lambda.is_one() {
        return Ok(conormal(&flip_branch_sign(b.scale_y(mu)?)));
    }
    let gs = crate::rat::rat_nth_root(lambda, k).ok_or_else(|| {
        Error::ScaleNotRational(format!("lambda = {lambda} has no rational {k}-th root"))
    })?;
    // t = gs * s; x = lambda s^k = t^k, y-coefficients pick up mu * gs^{-r}.
    let coeffs = b
        .coeffs()
        .map(|(r, c)| (r, mu * c * rat_pow(&gs, -(r as i64))))
        .collect();
    let nb = BranchParam::new(b.k(), b.n(), coeffs, b.trunc())?;
    Ok(conormal(&flip_branch_sign(nb)))
}

fn apply_jtype(j: &JContact, l: &ConormalParam) -> Result<ConormalParam> {
    let b = l.branch();
    let sx = b.x_series();
    let sy = b.y_series();
    let sp = l.p_series();
    let xs = sx.add(&j.alpha.substitute(&sx, &sy, sp)?);
    let ys = sy.add(&j.beta.substitute(&sx, &sy, sp)?);
    let ps = sp.add(&j.gamma.substitute(&sx, &sy, sp)?);
    if xs.ord() != Some(b.k()) {
        return Err(Error::NotLegendrianImage(format!(
            "transported x-component has order {:?}, expected {}",
            xs.ord(),
            b.k()
        )));
    }
    let np = normalize_param_full(&xs, &ys)?;
    let out = conormal(&np.branch);
    // p-consistency: the transported p, re-expressed in the new parameter,
    // must equal y'/x' recomputed from the new branch.
    let transported = ps.compose(&np.s_of_t)?;
    let w = transported.trunc().min(out.p_series().trunc());
    if transported.weaken(w) != out.p_series().weaken(w) {
        return Err(Error::NotLegendrianImage(
            "transported p-series disagrees with y'/x'".into(),
        ));
    }
    Ok(out)
}

/// Conjugation H . J . H^{-1} by the scaling H = (lambda, mu): a diagonal
/// rescale of the component coefficients.
fn conj_by_scaling(j: &JContact, lambda: &Rat, mu: &Rat) -> Result<JContact> {
    let nu = mu / lambda;
    let rescale = |s: &TruncSeries3, outer: &Rat| {
        TruncSeries3::from_terms(
            s.ws(),
            s.terms().map(|(m, c)| {
                let f = rat_pow(lambda, -(m.i as i64))
                    * rat_pow(mu, -(m.j as i64))
                    * rat_pow(&nu, -(m.l as i64));
                (m, outer * c * f)
            }),
            s.trunc(),
        )
    };
    JContact::verified(
        rescale(&j.alpha, lambda),
        rescale(&j.beta, mu),
        rescale(&j.gamma, &nu),
    )
}

fn compose_j(j1: &JContact, j2: &JContact) -> Result<JContact> {
    let (gx, gy, gp) = j2.chart();
    let alpha = j2.alpha.add(&j1.alpha.substitute_tri(&gx, &gy, &gp)?);
    let beta = j2.beta.add(&j1.beta.substitute_tri(&gx, &gy, &gp)?);
    let gamma = j2.gamma.add(&j1.gamma.substitute_tri(&gx, &gy, &gp)?);
    JContact::verified(alpha, beta, gamma)
}

fn split(tx: &ContactTx, ws: WeightSystem, trunc: u64) -> (Rat, Rat, JContact) {
    match tx {
        ContactTx::Scaling { lambda, mu } => {
            (lambda.clone(), mu.clone(), JContact::identity(ws, trunc))
        }
        ContactTx::JType(j) => (Rat::one(), Rat::one(), j.clone()),
        ContactTx::Composed { lambda, mu, j } => (lambda.clone(), mu.clone(), j.clone()),
    }
}

fn repack(lambda: Rat, mu: Rat, j: JContact) -> ContactTx {
    match (lambda.is_one() && mu.is_one(), j.is_identity()) {
        (true, _) => ContactTx::JType(j),
        (false, true) => ContactTx::Scaling { lambda, mu },
        (false, false) => ContactTx::Composed { lambda, mu, j },
    }
}

fn default_ws_trunc(a: &ContactTx, b: &ContactTx) -> (WeightSystem, u64) {
    for tx in [a, b] {
        match tx {
            ContactTx::JType(j) | ContactTx::Composed { j, .. } => {
                return (j.alpha.ws(), j.alpha.trunc())
            }
            ContactTx::Scaling { .. } => {}
        }
    }
    (WeightSystem::new(1, 2).expect("static"), 0)
}

/// Group composition: apply `b` first, then `a`. The result is renormalized to
/// scaling-after-jtype (the jtype part is an invariant subgroup, so the
/// conjugations stay inside it).
pub fn compose(a: &ContactTx, b: &ContactTx) -> Result<ContactTx> {
    let (ws, trunc) = default_ws_trunc(a, b);
    let (l1, m1, j1) = split(a, ws, trunc);
    let (l2, m2, j2) = split(b, ws, trunc);
    // a . b = S1 J1 S2 J2 = (S1 S2) (S2^{-1} J1 S2) J2.
    let j1c = if l2.is_one() && m2.is_one() {
        j1
    } else {
        conj_by_scaling(&j1, &l2.clone().recip(), &m2.clone().recip())?
    };
    let j = if j1c.is_identity() {
        j2
    } else if j2.is_identity() {
        j1c
    } else {
        compose_j(&j1c, &j2)?
    };
    Ok(repack(l1 * l2, m1 * m2, j))
}

/// Inverse transformation; the jtype part is found by fixed-point iteration on
/// (a, b, c) = -(alpha, beta, gamma) o (id + (a, b, c)).
pub fn invert(tx: &ContactTx) -> Result<ContactTx> {
    match tx {
        ContactTx::Scaling { lambda, mu } => {
            ContactTx::scaling(lambda.clone().recip(), mu.clone().recip())
        }
        ContactTx::JType(j) => Ok(ContactTx::JType(invert_j(j)?)),
        ContactTx::Composed { lambda, mu, j } => {
            // (S J)^{-1} = J^{-1} S^{-1} = S^{-1} (S J^{-1} S^{-1}).
            let ji = invert_j(j)?;
            let jc = conj_by_scaling(&ji, lambda, mu)?;
            Ok(repack(lambda.clone().recip(), mu.clone().recip(), jc))
        }
    }
}

fn invert_j(j: &JContact) -> Result<JContact> {
    let ws = j.alpha.ws();
    let trunc = j.alpha.trunc();
    let x = TruncSeries3::var(ws, Var::X, trunc);
    let y = TruncSeries3::var(ws, Var::Y, trunc);
    let p = TruncSeries3::var(ws, Var::P, trunc);
    let mut a = TruncSeries3::zero(ws, trunc);
    let mut b = TruncSeries3::zero(ws, trunc);
    let mut c = TruncSeries3::zero(ws, trunc);
    for _ in 0..=(trunc as usize + 1) {
        let gx = x.add(&a);
        let gy = y.add(&b);
        let gp = p.add(&c);
        let na = j.alpha.substitute_tri(&gx, &gy, &gp)?.neg();
        let nb = j.beta.substitute_tri(&gx, &gy, &gp)?.neg();
        let nc = j.gamma.substitute_tri(&gx, &gy, &gp)?.neg();
        if na == a && nb == b && nc == c {
            break;
        }
        a = na;
        b = nb;
        c = nc;
    }
    JContact::verified(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::puiseux_invariants;
    use crate::rat::{rat, rat_int};

    fn ws411() -> WeightSystem {
        WeightSystem::new(4, 11).unwrap()
    }

    #[test]
    fn cauchy_zero_forcing() {
        let ws = ws411();
        let z = TruncSeries3::zero(ws, 80);
        let beta = solve_cauchy(&z, &z).unwrap();
        assert!(beta.is_zero());
    }

    #[test]
    fn cauchy_beta1_vanishes_for_zero_beta0() {
        let ws = ws411();
        let alpha = TruncSeries3::from_int_terms(
            ws,
            &[(0, 1, 0, 2, 3), (2, 0, 1, -1, 2), (0, 0, 2, 1, 1)],
            90,
        );
        let beta = solve_cauchy(&alpha, &TruncSeries3::zero(ws, 90)).unwrap();
        let levels = beta.p_levels();
        assert!(levels[0].is_zero());
        assert!(levels[1].is_zero(), "beta_1 = {}", levels[1]);
    }

    #[test]
    fn cauchy_monomial_leading_term() {
        // alpha = y^a p^b gives beta = b y^a p^{b+1}/(b+1) + eps with
        // eps starting at -a b y^{2a-1} p^{2b+2} / ((2b+2)(b+1)).
        let ws = ws411();
        let (a, b) = (1u32, 1u32);
        let alpha = TruncSeries3::monomial(ws, Mono3::new(0, a, b), Rat::one(), 120);
        let beta = solve_cauchy(&alpha, &TruncSeries3::zero(ws, 120)).unwrap();
        assert_eq!(beta.coeff(Mono3::new(0, a, b + 1)), rat(1, 2));
        let eps = beta.sub(&TruncSeries3::monomial(
            ws,
            Mono3::new(0, a, b + 1),
            rat(1, 2),
            beta.trunc(),
        ));
        let bound = ws.weight(0, 2 * a - 1, 2 * b + 2);
        assert!(eps.min_weight().map(|w| w >= bound).unwrap_or(true), "eps = {eps}");
        assert_eq!(eps.coeff(Mono3::new(0, 1, 4)), rat(-1, 8));
    }

    #[test]
    fn cauchy_pure_p_power_is_exact() {
        // alpha = lambda p: beta = lambda p^2/2 exactly, gamma = 0.
        let ws = ws411();
        let lam = rat(2, 7);
        let alpha = TruncSeries3::monomial(ws, Mono3::new(0, 0, 1), lam.clone(), 100);
        let beta = solve_cauchy(&alpha, &TruncSeries3::zero(ws, 100)).unwrap();
        let expect =
            TruncSeries3::monomial(ws, Mono3::new(0, 0, 2), lam / rat_int(2), beta.trunc());
        assert_eq!(beta, expect);
        let gamma = solve_gamma(&alpha, &beta).unwrap();
        assert!(gamma.is_zero());
    }

    #[test]
    fn gamma_for_plane_shear() {
        // alpha = 0, beta = c x^2: gamma = 2 c x.
        let ws = ws411();
        let c = rat(3, 5);
        let alpha = TruncSeries3::zero(ws, 80);
        let beta = TruncSeries3::monomial(ws, Mono3::new(2, 0, 0), c.clone(), 80);
        let gamma = solve_gamma(&alpha, &beta).unwrap();
        let expect =
            TruncSeries3::monomial(ws, Mono3::new(1, 0, 0), c * rat_int(2), gamma.trunc());
        assert_eq!(gamma, expect);
        // and the triple passes certification
        assert!(JContact::verified(alpha, beta, gamma).is_ok());
    }

    #[test]
    fn certificates() {
        let ws = ws411();
        let id = ContactTx::identity(ws, 60);
        assert!(verify_contact(&id).unwrap().coeff(Mono3::new(0, 0, 0)).is_one());

        let s = ContactTx::scaling(rat_int(3), rat(5, 2)).unwrap();
        assert_eq!(verify_contact(&s).unwrap().coeff(Mono3::new(0, 0, 0)), rat(5, 2));

        let alpha = TruncSeries3::from_int_terms(ws, &[(0, 1, 1, 1, 3), (2, 0, 0, -2, 1)], 90);
        let tx = jtype_from_cauchy(alpha, TruncSeries3::zero(ws, 90)).unwrap();
        let u = verify_contact(&tx).unwrap();
        assert!(u.coeff(Mono3::new(0, 0, 0)).is_one());
    }

    #[test]
    fn cauchy_rejects_bad_data() {
        let ws = ws411();
        let bad = TruncSeries3::monomial(ws, Mono3::new(1, 0, 0), Rat::one(), 50);
        assert!(matches!(
            solve_cauchy(&bad, &TruncSeries3::zero(ws, 50)),
            Err(Error::NotInGroupJ(_))
        ));
        let alpha = TruncSeries3::zero(ws, 50);
        let bad0 = TruncSeries3::monomial(ws, Mono3::new(0, 0, 1), Rat::one(), 50);
        assert!(matches!(solve_cauchy(&alpha, &bad0), Err(Error::NotInGroupJ(_))));
    }

    #[test]
    fn apply_identity_and_scaling() {
        let ws = ws411();
        let b = BranchParam::monomial_curve(ws, 132);
        let l = conormal(&b);
        let id = ContactTx::identity(ws, 132);
        let l2 = apply_to_conormal(&id, &l).unwrap();
        let w = l2.branch().trunc();
        assert_eq!(l2.branch().y_series(), l.branch().y_series().weaken(w));

        let s = ContactTx::scaling(rat_int(1), rat(1, 3)).unwrap();
        let l3 = apply_to_conormal(&s, &l).unwrap();
        assert_eq!(l3.branch().a_n(), rat(1, 3));
    }

    #[test]
    fn jtype_preserves_puiseux_pairs() {
        let ws = ws411();
        let b = BranchParam::monomial_curve(ws, 132);
        let l = conormal(&b);
        let alpha = TruncSeries3::from_int_terms(ws, &[(0, 1, 1, 1, 2), (0, 1, 0, 1, 1)], 132);
        let beta0 = TruncSeries3::from_int_terms(ws, &[(2, 0, 0, 1, 3)], 132);
        let tx = jtype_from_cauchy(alpha, beta0).unwrap();
        let l2 = apply_to_conormal(&tx, &l).unwrap();
        assert_eq!(
            puiseux_invariants(l2.branch()).unwrap().pairs,
            puiseux_invariants(&b).unwrap().pairs
        );
    }

    #[test]
    fn scaling_group_law() {
        let a = ContactTx::scaling(rat_int(2), rat_int(3)).unwrap();
        let b = ContactTx::scaling(rat(1, 2), rat_int(5)).unwrap();
        let c = compose(&a, &b).unwrap();
        assert_eq!(c, ContactTx::Scaling { lambda: rat_int(1), mu: rat_int(15) });
    }

    #[test]
    fn compose_with_identity() {
        let ws = ws411();
        let alpha = TruncSeries3::from_int_terms(ws, &[(0, 1, 1, 1, 4)], 70);
        let tx = jtype_from_cauchy(alpha, TruncSeries3::zero(ws, 70)).unwrap();
        let id = ContactTx::identity(ws, 70);
        let c = compose(&id, &tx).unwrap();
        assert_eq!(c, tx);
    }

    #[test]
    fn inverse_acts_as_identity_on_a_conormal() {
        let ws = ws411();
        let b = BranchParam::monomial_curve(ws, 72);
        let l = conormal(&b);
        let alpha = TruncSeries3::from_int_terms(ws, &[(0, 1, 0, 1, 2), (0, 0, 2, -1, 3)], 72);
        let tx = jtype_from_cauchy(alpha, TruncSeries3::zero(ws, 72)).unwrap();
        let inv = invert(&tx).unwrap();
        let round = apply_to_conormal(&inv, &apply_to_conormal(&tx, &l).unwrap()).unwrap();
        // agreement within the eroded common window
        let w = 40u32;
        assert_eq!(round.branch().y_series().weaken(w), b.y_series().weaken(w));
    }

    #[test]
    fn composed_application_matches_sequential() {
        let ws = ws411();
        let b = BranchParam::monomial_curve(ws, 132);
        let l = conormal(&b);
        let alpha = TruncSeries3::from_int_terms(ws, &[(0, 1, 1, 1, 6)], 132);
        let j = jtype_from_cauchy(alpha, TruncSeries3::zero(ws, 132)).unwrap();
        let s = ContactTx::scaling(rat_int(1), rat_int(2)).unwrap();
        let both = compose(&s, &j).unwrap();
        assert!(matches!(both, ContactTx::Composed { .. }));
        let seq = apply_to_conormal(&s, &apply_to_conormal(&j, &l).unwrap()).unwrap();
        let one = apply_to_conormal(&both, &l).unwrap();
        let w = 100u32;
        assert_eq!(seq.branch().y_series().weaken(w), one.branch().y_series().weaken(w));
    }
}
