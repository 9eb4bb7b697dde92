//! Ideal-membership certificates recorded by the completion engines.

use std::collections::BTreeMap;

use num::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::completion::PartialMatrix;
use crate::conditions::CGraphReport;
use crate::error::CertificateError;
use crate::lattice::LatticePoint;
use crate::minor::{bilinear_coefficients, MinorSpec};
use crate::removability::RemovabilityReport;
use crate::scalar::Scalar;

/// Constant in the degree bounds checked by [`check_degree_bound`].
pub const DEGREE_BOUND_CONSTANT: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    OneUnknown,
    Elimination,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertStep<S> {
    pub target: LatticePoint,
    pub kind: StepKind,
    pub minor: MinorSpec,
    pub alpha: S,
    pub beta: S,
    pub c1: Option<S>,
    pub c2: Option<S>,
    pub value: S,
    pub dependencies: Vec<usize>,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<S> {
    pub rank: usize,
    pub steps: Vec<CertStep<S>>,
    pub total_degree: usize,
    pub per_entry: BTreeMap<LatticePoint, usize>,
}

impl<S: Scalar> Default for Certificate<S> {
    fn default() -> Self {
        Self { rank: 0, steps: Vec::new(), total_degree: 0, per_entry: BTreeMap::new() }
    }
}

impl<S: Scalar> Certificate<S> {
    pub fn new(rank: usize) -> Self {
        Self { rank, ..Self::default() }
    }

    pub fn push(&mut self, step: CertStep<S>) -> usize {
        let k = self.steps.len();
        self.total_degree = self.total_degree.max(step.degree);
        self.per_entry.insert(step.target, k);
        self.steps.push(step);
        k
    }

    pub fn to_json_value(&self) -> Value {
        let s = |v: &S| Value::String(v.to_exact_string());
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|st| {
                let mut o = json!({
                    "target": [st.target.row, st.target.col],
                    "kind": st.kind,
                    "minor": st.minor,
                    "alpha": s(&st.alpha),
                    "beta": s(&st.beta),
                    "value": s(&st.value),
                    "dependencies": st.dependencies,
                    "degree": st.degree,
                });
                if let (Some(c1), Some(c2)) = (&st.c1, &st.c2) {
                    o["c1"] = s(c1);
                    o["c2"] = s(c2);
                }
                o
            })
            .collect();
        json!({ "rank": self.rank, "total_degree": self.total_degree, "steps": steps })
    }

    /// Value-free projection: targets, minors, kinds, dependencies, degrees.
    pub fn structure_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|st| {
                json!({
                    "target": [st.target.row, st.target.col],
                    "kind": st.kind,
                    "minor": st.minor,
                    "dependencies": st.dependencies,
                    "degree": st.degree,
                })
            })
            .collect();
        json!({ "rank": self.rank, "total_degree": self.total_degree, "steps": steps })
    }

    pub fn from_json_value(v: &Value) -> Result<Self, CertificateError> {
        let bad = |what: &str| CertificateError::Malformed(format!("missing or invalid {what}"));
        let scalar = |o: &Value, k: &str| -> Result<S, CertificateError> { S::from_json_value(&o[k]).ok_or_else(|| bad(k)) };
        let rank = v["rank"].as_u64().ok_or_else(|| bad("rank"))? as usize;
        let mut cert = Certificate::new(rank);
        for st in v["steps"].as_array().ok_or_else(|| bad("steps"))? {
            let target: LatticePoint = serde_json::from_value::<(usize, usize)>(st["target"].clone())
                .map_err(|_| bad("target"))?
                .into();
            let c1 = st.get("c1").map(|_| scalar(st, "c1")).transpose()?;
            let c2 = st.get("c2").map(|_| scalar(st, "c2")).transpose()?;
            cert.push(CertStep {
                target,
                kind: serde_json::from_value(st["kind"].clone()).map_err(|_| bad("kind"))?,
                minor: serde_json::from_value(st["minor"].clone()).map_err(|_| bad("minor"))?,
                alpha: scalar(st, "alpha")?,
                beta: scalar(st, "beta")?,
                c1,
                c2,
                value: scalar(st, "value")?,
                dependencies: serde_json::from_value(st["dependencies"].clone()).map_err(|_| bad("dependencies"))?,
                degree: st["degree"].as_u64().ok_or_else(|| bad("degree"))? as usize,
            });
        }
        Ok(cert)
    }
}

pub fn certificate_degree<S: Scalar>(cert: &Certificate<S>) -> usize {
    cert.steps.iter().map(|s| s.degree).max().unwrap_or(0)
}

/// Degree of a step whose minor uses `dep_degrees.len()` previously solved
/// entries: the telescoped identity multiplies each solved difference by at
/// most that many other entries.
pub fn step_degree(rank: usize, dep_degrees: &[usize]) -> usize {
    let top = dep_degrees.iter().copied().max().unwrap_or(0);
    (rank + 1).max(top + dep_degrees.len())
}

fn structural_check<S: Scalar>(cert: &Certificate<S>) -> Result<(), CertificateError> {
    let mut owners = BTreeMap::new();
    for (k, st) in cert.steps.iter().enumerate() {
        if let Some(&d) = st.dependencies.iter().find(|&&d| d >= k) {
            return Err(CertificateError::Malformed(format!("step {k} depends on later step {d}")));
        }
        if owners.insert(st.target, k).is_some() {
            return Err(CertificateError::Malformed(format!("entry {} filled twice", st.target)));
        }
        if st.minor.unknown != st.target {
            return Err(CertificateError::Malformed(format!("step {k} solves a different entry")));
        }
        if (st.kind == StepKind::Elimination) != st.minor.resolved.is_some() {
            return Err(CertificateError::Malformed(format!("step {k} kind does not match its minor")));
        }
    }
    Ok(())
}

fn exact<S: Scalar>(v: &S, what: &str) -> Result<BigRational, CertificateError> {
    v.to_rational().ok_or_else(|| CertificateError::InexactInput(format!("{what} = {v}")))
}

/// Replays every step in rational arithmetic and checks the recorded
/// coefficients, values and elimination identities exactly.
pub fn verify_certificate_exact<S: Scalar>(
    cert: &Certificate<S>,
    instance: &PartialMatrix<S>,
) -> Result<bool, CertificateError> {
    structural_check(cert)?;
    let mut known: BTreeMap<LatticePoint, BigRational> = BTreeMap::new();
    for (p, v) in &instance.entries {
        known.insert(*p, exact(v, &format!("entry {p}"))?);
    }
    let mut solved: BTreeMap<LatticePoint, usize> = BTreeMap::new();
    for (k, st) in cert.steps.iter().enumerate() {
        if known.contains_key(&st.target) || st.minor.validate().is_err() || st.minor.size() != cert.rank + 1 {
            return Ok(false);
        }
        // every non-observed entry used must come from a listed dependency
        for p in st.minor.points().filter(|&p| p != st.target) {
            if !instance.entries.contains_key(&p) && !solved.get(&p).is_some_and(|d| st.dependencies.contains(d)) {
                return Ok(false);
            }
        }
        let lookup = |p: LatticePoint| known.get(&p).cloned();
        let Ok(sol) = crate::minor::solve_linear::<BigRational>(&st.minor, &lookup) else {
            return Ok(false);
        };
        if exact(&st.alpha, "alpha")? != sol.alpha || exact(&st.beta, "beta")? != sol.beta {
            return Ok(false);
        }
        if let Some(x1) = st.minor.resolved {
            let (a, b, c, d) = match bilinear_coefficients::<BigRational>(&st.minor, &lookup, x1) {
                Ok(t) => t,
                Err(_) => return Ok(false),
            };
            let (Some(c1), Some(c2)) = (&st.c1, &st.c2) else {
                return Ok(false);
            };
            let x1v = known[&x1].clone();
            let ok = exact(c1, "c1")? == a
                && exact(c2, "c2")? == b
                && sol.alpha == c.clone() + a * x1v.clone()
                && sol.beta == d + b * x1v;
            if !ok {
                return Ok(false);
            }
        }
        let v = exact(&st.value, "value")?;
        if !(sol.alpha.clone() * v.clone() + sol.beta.clone()).is_zero() {
            return Ok(false);
        }
        known.insert(st.target, v);
        solved.insert(st.target, k);
    }
    Ok(true)
}

pub enum BoundReport<'a> {
    Removability(&'a RemovabilityReport),
    CGraph(&'a CGraphReport),
}

/// Bound `c * size * (r+1) + (r+1)` with `size = max(L, N_r)` or `kappa`.
pub fn degree_bound(report: &BoundReport<'_>, r: usize) -> usize {
    let size = match report {
        BoundReport::Removability(rep) => rep.l.max(rep.n_r),
        BoundReport::CGraph(rep) => rep.kappa,
    };
    DEGREE_BOUND_CONSTANT * size * (r + 1) + (r + 1)
}

pub fn check_degree_bound<S: Scalar>(cert: &Certificate<S>, report: &BoundReport<'_>, r: usize) -> bool {
    certificate_degree(cert) <= degree_bound(report, r)
}
