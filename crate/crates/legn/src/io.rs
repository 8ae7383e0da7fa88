//! Wire formats: curve description files, transformation files, and reduction
//! reports. All rationals travel as exact `"num/den"` strings, so files
//! round-trip bit-exactly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::branch::{parametrize_equation, BranchParam};
use crate::contact::{jtype_from_cauchy, ContactTx, JContact};
use crate::error::{Error, Result};
use crate::rat::{parse_rat, rat_str, Rat};
use crate::series::{Mono3, TruncSeries3};
use crate::versal::{LogStep, MicrolocalReduction, Reduction, ReductionLog};
use crate::weights::WeightSystem;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Equation,
    Parametrization,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermIJC {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoeffRC {
    pub r: u32,
    pub c: String,
}

/// Curve description file: an equation y^k - x^n + sum c x^i y^j, or a
/// parametrization x = s^k, y = sum a_r s^r.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub kind: CurveKind,
    pub k: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<TermIJC>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs: Vec<CoeffRC>,
    pub trunc: u32,
}

impl CurveFile {
    pub fn ws(&self) -> Result<WeightSystem> {
        WeightSystem::new(self.k, self.n)
    }

    pub fn equation(&self) -> Result<TruncSeries3> {
        if self.kind != CurveKind::Equation {
            return Err(Error::Format("expected an equation-kind curve file".into()));
        }
        let ws = self.ws()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push((Mono3::new(t.i, t.j, 0), parse_rat(&t.c)?));
        }
        Ok(TruncSeries3::from_terms(ws, terms, self.trunc as u64))
    }

    pub fn branch(&self) -> Result<BranchParam> {
        match self.kind {
            CurveKind::Equation => parametrize_equation(&self.equation()?, self.trunc),
            CurveKind::Parametrization => {
                let mut coeffs = std::collections::BTreeMap::new();
                for c in &self.coeffs {
                    coeffs.insert(c.r, parse_rat(&c.c)?);
                }
                BranchParam::new(self.k, self.n, coeffs, self.trunc)
            }
        }
    }

    pub fn from_equation(f: &TruncSeries3) -> Result<Self> {
        let ws = f.ws();
        if !f.is_p_free() {
            return Err(Error::Format("equation files are p-free".into()));
        }
        Ok(CurveFile {
            kind: CurveKind::Equation,
            k: ws.k(),
            n: ws.n(),
            terms: f
                .terms()
                .map(|(m, c)| TermIJC { i: m.i, j: m.j, c: rat_str(c) })
                .collect(),
            coeffs: Vec::new(),
            trunc: f.trunc() as u32,
        })
    }

    pub fn from_branch(b: &BranchParam) -> Self {
        CurveFile {
            kind: CurveKind::Parametrization,
            k: b.k(),
            n: b.n(),
            terms: Vec::new(),
            coeffs: b.coeffs().map(|(r, c)| CoeffRC { r, c: rat_str(c) }).collect(),
            trunc: b.trunc(),
        }
    }
}

/// Trivariate series as `[[i, j, l], "num/den"]` entries.
pub type SeriesWire = Vec<([u32; 3], String)>;

pub fn series_to_wire(s: &TruncSeries3) -> SeriesWire {
    s.terms().map(|(m, c)| ([m.i, m.j, m.l], rat_str(c))).collect()
}

pub fn wire_to_series(ws: WeightSystem, wire: &SeriesWire, trunc: u64) -> Result<TruncSeries3> {
    let mut terms = Vec::with_capacity(wire.len());
    for ([i, j, l], c) in wire {
        terms.push((Mono3::new(*i, *j, *l), parse_rat(c)?));
    }
    Ok(TruncSeries3::from_terms(ws, terms, trunc))
}

/// A transformation to apply from the command line.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TxFile {
    Scaling { lambda: String, mu: String },
    Jtype {
        alpha: SeriesWire,
        #[serde(default)]
        beta0: SeriesWire,
    },
}

impl TxFile {
    pub fn to_tx(&self, ws: WeightSystem, trunc: u64) -> Result<ContactTx> {
        match self {
            TxFile::Scaling { lambda, mu } => {
                ContactTx::scaling(parse_rat(lambda)?, parse_rat(mu)?)
            }
            TxFile::Jtype { alpha, beta0 } => {
                let a = wire_to_series(ws, alpha, trunc)?;
                let b0 = wire_to_series(ws, beta0, trunc)?;
                jtype_from_cauchy(a, b0)
            }
        }
    }
}

/// Trivariate function terms (for valuation queries).
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TriTermsFile {
    pub terms: Vec<TriTerm>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TriTerm {
    pub i: u32,
    pub j: u32,
    #[serde(default)]
    pub l: u32,
    pub c: String,
}

impl TriTermsFile {
    pub fn to_series(&self, ws: WeightSystem, trunc: u64) -> Result<TruncSeries3> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push((Mono3::new(t.i, t.j, t.l), parse_rat(&t.c)?));
        }
        Ok(TruncSeries3::from_terms(ws, terms, trunc))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CoordEntry {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LogStepWire {
    Scaling {
        lambda: String,
        mu: String,
    },
    Absorb {
        weight: u64,
        i: u32,
        j: u32,
        delta: String,
        value: String,
    },
    Plane {
        weight: u64,
        alpha: SeriesWire,
        beta: SeriesWire,
    },
    Jtype {
        weight: u64,
        i: u32,
        j: u32,
        lambda: String,
        alpha: SeriesWire,
        beta: SeriesWire,
        gamma: SeriesWire,
    },
}

/// Reduction report file.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub input: CurveFile,
    pub basis: String,
    pub coords: Vec<CoordEntry>,
    pub log: Vec<LogStepWire>,
    pub trunc: u32,
    pub determinacy_bound: u64,
}

fn step_to_wire(step: &LogStep) -> Result<LogStepWire> {
    Ok(match step {
        LogStep::Scale { lambda, mu } => {
            LogStepWire::Scaling { lambda: rat_str(lambda), mu: rat_str(mu) }
        }
        LogStep::Absorb { weight, pair, delta, value } => LogStepWire::Absorb {
            weight: *weight,
            i: pair.0,
            j: pair.1,
            delta: rat_str(delta),
            value: rat_str(value),
        },
        LogStep::Plane { weight, alpha, beta } => LogStepWire::Plane {
            weight: *weight,
            alpha: series_to_wire(alpha),
            beta: series_to_wire(beta),
        },
        LogStep::Contact { weight, pair, lambda, tx } => {
            let j = match tx {
                ContactTx::JType(j) => j,
                _ => {
                    return Err(Error::Format(
                        "contact log steps are always jtype transformations".into(),
                    ))
                }
            };
            LogStepWire::Jtype {
                weight: *weight,
                i: pair.0,
                j: pair.1,
                lambda: rat_str(lambda),
                alpha: series_to_wire(j.alpha()),
                beta: series_to_wire(j.beta()),
                gamma: series_to_wire(j.gamma()),
            }
        }
    })
}

fn wire_to_step(wire: &LogStepWire, ws: WeightSystem, trunc: u64) -> Result<LogStep> {
    Ok(match wire {
        LogStepWire::Scaling { lambda, mu } => {
            LogStep::Scale { lambda: parse_rat(lambda)?, mu: parse_rat(mu)? }
        }
        LogStepWire::Absorb { weight, i, j, delta, value } => LogStep::Absorb {
            weight: *weight,
            pair: (*i, *j),
            delta: parse_rat(delta)?,
            value: parse_rat(value)?,
        },
        LogStepWire::Plane { weight, alpha, beta } => LogStep::Plane {
            weight: *weight,
            alpha: wire_to_series(ws, alpha, trunc)?,
            beta: wire_to_series(ws, beta, trunc)?,
        },
        LogStepWire::Jtype { weight, i, j, lambda, alpha, beta, gamma } => {
            // re-certify on parse
            let jc = JContact::verified(
                wire_to_series(ws, alpha, trunc)?,
                wire_to_series(ws, beta, trunc)?,
                wire_to_series(ws, gamma, trunc)?,
            )?;
            LogStep::Contact {
                weight: *weight,
                pair: (*i, *j),
                lambda: parse_rat(lambda)?,
                tx: ContactTx::JType(jc),
            }
        }
    })
}

pub fn report_from_equisingular(input: CurveFile, red: &Reduction) -> Result<ReportFile> {
    let ws = red.branch.ws()?;
    let log = red.log.steps.iter().map(step_to_wire).collect::<Result<Vec<_>>>()?;
    Ok(ReportFile {
        input,
        basis: "B".into(),
        coords: red
            .coords
            .dense()
            .into_iter()
            .map(|((i, j), c)| CoordEntry { i, j, c: rat_str(&c) })
            .collect(),
        log,
        trunc: red.branch.trunc(),
        determinacy_bound: ws.max_basis_weight(),
    })
}

pub fn report_from_microlocal(input: CurveFile, red: &MicrolocalReduction) -> Result<ReportFile> {
    let ws = red.branch.ws()?;
    let log = red.log.steps.iter().map(step_to_wire).collect::<Result<Vec<_>>>()?;
    Ok(ReportFile {
        input,
        basis: "C".into(),
        coords: red
            .coords
            .dense()
            .into_iter()
            .map(|((i, j), c)| CoordEntry { i, j, c: rat_str(&c) })
            .collect(),
        log,
        trunc: red.branch.trunc(),
        determinacy_bound: ws.max_basis_weight(),
    })
}

impl ReportFile {
    pub fn to_log(&self) -> Result<ReductionLog> {
        let ws = WeightSystem::new(self.input.k, self.input.n)?;
        let steps = self
            .log
            .iter()
            .map(|w| wire_to_step(w, ws, self.trunc as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(ReductionLog { steps })
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// Rationals rendered as decimal approximations, for `--decimal` display only.
pub fn decimal_str(r: &Rat) -> String {
    let num = r.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = r.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    format!("{}", num / den)
}
