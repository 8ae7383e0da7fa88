//! Moduli classification over the microlocal normal-form parameters: the
//! scaling-orbit action on coordinates, the complete classification for
//! (k, n) = (4, 11), machine-checkable distinguishing evidence, and the
//! rigidity table.

use num::{One, Zero};

use crate::conormal::{smooth_surface_test, ConormalParam};
use crate::error::{Error, Result};
use crate::rat::{rat_pow, Rat};
use crate::series::{Mono3, TruncSeries3};
use crate::versal::{basis, BasisFlavor, VersalCoords};
use crate::weights::WeightSystem;
use std::fmt;

/// The three pairwise non-isomorphic conormals over (4, 11).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NormalFormId {
    /// the undeformed curve y^4 = x^11
    F0,
    /// the orbit with t2 != 0 (representative y^4 - x^11 + x^6 y^2)
    F1,
    /// the orbit with t2 = 0, t6 != 0 (representative y^4 - x^11 + x^7 y^2)
    F2,
}

impl fmt::Display for NormalFormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalFormId::F0 => write!(f, "F0"),
            NormalFormId::F1 => write!(f, "F1"),
            NormalFormId::F2 => write!(f, "F2"),
        }
    }
}

/// The exponents d_{ij} = k i + n j - k n of the scaling action on the basis
/// coordinates; all strictly positive.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalingWeights {
    ws: WeightSystem,
    d: Vec<((u32, u32), u64)>,
}

pub fn scaling_weights(coords: &VersalCoords) -> ScalingWeights {
    let b = coords.basis();
    ScalingWeights {
        ws: b.ws(),
        d: b.pairs().iter().map(|&p| (p, b.excess(p))).collect(),
    }
}

impl ScalingWeights {
    pub fn get(&self, pair: (u32, u32)) -> Option<u64> {
        self.d.iter().find(|(p, _)| *p == pair).map(|(_, d)| *d)
    }

    pub fn iter(&self) -> impl Iterator<Item = &((u32, u32), u64)> {
        self.d.iter()
    }
}

/// The scaling orbit map t_{ij} -> tau^{d_{ij}} t_{ij} induced by
/// (x, y, p) -> (tau^k x, tau^n y, tau^{n-k} p).
pub fn scaling_action(coords: &VersalCoords, tau: &Rat) -> Result<VersalCoords> {
    if tau.is_zero() {
        return Err(Error::ScaleNotRational("tau = 0".into()));
    }
    let mut out = VersalCoords::zero(coords.basis().clone());
    for (pair, c) in coords.support() {
        let d = coords.basis().excess(pair);
        out.set(pair, c * rat_pow(tau, d as i64))?;
    }
    Ok(out)
}

/// Exact check of the scaling identity
/// G(tau^k x, tau^n y, t) = tau^{kn} G(x, y, scaled t) at a concrete tau.
pub fn scaling_identity_holds(coords: &VersalCoords, tau: &Rat, trunc: u64) -> Result<bool> {
    let ws = coords.basis().ws();
    let g = coords.equation(trunc);
    let lhs = TruncSeries3::from_terms(
        ws,
        g.terms().map(|(m, c)| {
            let e = ws.k() as i64 * m.i as i64 + ws.n() as i64 * m.j as i64;
            (m, c * rat_pow(tau, e))
        }),
        trunc,
    );
    let rhs = scaling_action(coords, tau)?
        .equation(trunc)
        .scale(&rat_pow(tau, ws.kn() as i64));
    Ok(lhs == rhs)
}

/// The complete moduli decision for (4, 11): the zero/nonzero pattern of
/// (t2, t6) is a scaling-orbit invariant and separates the three classes.
pub fn classify_4_11(coords: &VersalCoords) -> Result<NormalFormId> {
    let b = coords.basis();
    if (b.ws().k(), b.ws().n()) != (4, 11) || b.flavor() != BasisFlavor::C {
        return Err(Error::HypothesisViolated(
            "classification table is proved complete only over C(4, 11)".into(),
        ));
    }
    let t2 = coords.get((6, 2));
    let t6 = coords.get((7, 2));
    Ok(if !t2.is_zero() {
        NormalFormId::F1
    } else if !t6.is_zero() {
        NormalFormId::F2
    } else {
        NormalFormId::F0
    })
}

/// General classification output; completeness of the zero/nonzero pattern is
/// proved only for (4, 11), so other types carry `complete = false`.
#[derive(Clone, Debug)]
pub enum Classification {
    FourEleven(NormalFormId),
    General { coords: VersalCoords, complete: bool },
}

pub fn classify(coords: &VersalCoords) -> Result<Classification> {
    let ws = coords.basis().ws();
    if (ws.k(), ws.n()) == (4, 11) {
        Ok(Classification::FourEleven(classify_4_11(coords)?))
    } else {
        Ok(Classification::General { coords: coords.clone(), complete: false })
    }
}

/// Machine-checkable evidence distinguishing two normal forms.
#[derive(Clone, Debug)]
pub enum DistinguishEvidence {
    Equal,
    /// F0 against the others: a smooth-surface witness on one side, none
    /// within the window on the other.
    SmoothSurface { first: Option<TruncSeries3>, second: Option<TruncSeries3> },
    /// F1 against F2: distinct coordinates under the complete procedure.
    DistinctCoords { first: NormalFormId, second: NormalFormId },
}

pub fn distinguish(
    a: NormalFormId,
    b: NormalFormId,
    la: &ConormalParam,
    lb: &ConormalParam,
) -> Result<DistinguishEvidence> {
    if a == b {
        return Ok(DistinguishEvidence::Equal);
    }
    if a == NormalFormId::F0 || b == NormalFormId::F0 {
        let first = smooth_surface_test(la)?;
        let second = smooth_surface_test(lb)?;
        return Ok(DistinguishEvidence::SmoothSurface { first, second });
    }
    Ok(DistinguishEvidence::DistinctCoords { first: a, second: b })
}

/// A conormal of y^k = x^n (n > 2k) is rigid iff its microlocal basis C is
/// empty.
pub fn rigidity_check(k: u32, n: u32) -> Result<bool> {
    let ws = WeightSystem::new(k, n)?;
    if n as u64 <= 2 * k as u64 {
        return Err(Error::HypothesisViolated(format!(
            "rigidity table needs n > 2k, got ({k}, {n})"
        )));
    }
    Ok(basis(ws, BasisFlavor::C)?.is_empty())
}

/// The canonical smooth-surface witness of the undeformed conormal:
/// n y - k x p.
pub fn reference_witness(ws: WeightSystem, trunc: u64) -> TruncSeries3 {
    TruncSeries3::from_terms(
        ws,
        [
            (Mono3::new(0, 1, 0), Rat::from_integer(ws.n().into())),
            (Mono3::new(1, 0, 1), -Rat::from_integer(ws.k().into())),
        ],
        trunc,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::versal::basis;

    fn coords_c411(t2: Rat, t6: Rat) -> VersalCoords {
        let ws = WeightSystem::new(4, 11).unwrap();
        let b = basis(ws, BasisFlavor::C).unwrap();
        VersalCoords::from_pairs(b, [((6, 2), t2), ((7, 2), t6)]).unwrap()
    }

    #[test]
    fn scaling_action_examples() {
        let c = coords_c411(rat_int(1), rat_int(1));
        // tau = 1 is the identity
        assert_eq!(scaling_action(&c, &rat_int(1)).unwrap(), c);
        // tau = 2 multiplies by 2^2 and 2^6
        let s = scaling_action(&c, &rat_int(2)).unwrap();
        assert_eq!(s.get((6, 2)), rat_int(4));
        assert_eq!(s.get((7, 2)), rat_int(64));
        // tau then 1/tau is the identity
        let back = scaling_action(&s, &rat(1, 2)).unwrap();
        assert_eq!(back, c);
        assert!(matches!(
            scaling_action(&c, &rat_int(0)),
            Err(Error::ScaleNotRational(_))
        ));
    }

    #[test]
    fn scaling_identity_exact() {
        let c = coords_c411(rat_int(3), rat(1, 5));
        for tau in [rat_int(2), rat(1, 3), rat(-7, 2)] {
            assert!(scaling_identity_holds(&c, &tau, 132).unwrap());
        }
    }

    #[test]
    fn scaling_weights_match_excess() {
        let c = coords_c411(rat_int(1), rat_int(1));
        let sw = scaling_weights(&c);
        assert_eq!(sw.get((6, 2)), Some(2));
        assert_eq!(sw.get((7, 2)), Some(6));
    }

    #[test]
    fn classification_table() {
        assert_eq!(
            classify_4_11(&coords_c411(rat_int(0), rat_int(0))).unwrap(),
            NormalFormId::F0
        );
        assert_eq!(
            classify_4_11(&coords_c411(rat_int(1), rat(1, 3))).unwrap(),
            NormalFormId::F1
        );
        assert_eq!(
            classify_4_11(&coords_c411(rat_int(0), rat_int(7))).unwrap(),
            NormalFormId::F2
        );
    }

    #[test]
    fn classification_is_orbit_invariant() {
        for (t2, t6) in [
            (rat_int(0), rat_int(0)),
            (rat_int(2), rat(5, 3)),
            (rat_int(0), rat(-1, 4)),
            (rat(-3, 7), rat_int(0)),
        ] {
            let c = coords_c411(t2, t6);
            let id = classify_4_11(&c).unwrap();
            for tau in [rat_int(2), rat(-1, 3), rat(7, 5)] {
                let s = scaling_action(&c, &tau).unwrap();
                assert_eq!(classify_4_11(&s).unwrap(), id);
            }
        }
    }

    #[test]
    fn classify_general_is_incomplete() {
        let ws = WeightSystem::new(3, 10).unwrap();
        let b = basis(ws, BasisFlavor::C).unwrap();
        let c = VersalCoords::from_pairs(b, [((7, 1), rat_int(2))]).unwrap();
        match classify(&c).unwrap() {
            Classification::General { complete, .. } => assert!(!complete),
            Classification::FourEleven(_) => panic!("wrong branch"),
        }
    }

    #[test]
    fn rigidity_table() {
        assert!(rigidity_check(3, 7).unwrap());
        assert!(rigidity_check(3, 8).unwrap());
        assert!(rigidity_check(2, 9).unwrap());
        assert!(!rigidity_check(4, 11).unwrap());
        assert!(!rigidity_check(3, 10).unwrap());
        assert!(matches!(rigidity_check(3, 5), Err(Error::HypothesisViolated(_))));
        assert!(matches!(rigidity_check(2, 4), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn distinguish_equal_and_coords() {
        let ws = WeightSystem::new(4, 11).unwrap();
        let b = crate::branch::BranchParam::monomial_curve(ws, 60);
        let l = crate::conormal::conormal(&b);
        assert!(matches!(
            distinguish(NormalFormId::F1, NormalFormId::F1, &l, &l).unwrap(),
            DistinguishEvidence::Equal
        ));
        assert!(matches!(
            distinguish(NormalFormId::F1, NormalFormId::F2, &l, &l).unwrap(),
            DistinguishEvidence::DistinctCoords { .. }
        ));
    }
}
