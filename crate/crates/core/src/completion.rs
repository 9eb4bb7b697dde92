//! Constructive completion by minors with a single unknown.

use std::collections::{BTreeMap, BTreeSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::{step_degree, CertStep, Certificate, StepKind};
use crate::conditions::CGraphReport;
use crate::error::CompletionError;
use crate::lattice::{interior_points, spans_all_indices, LatticePoint, Mask, Walk};
use crate::minor::{solve_linear, MinorSpec};
use crate::removability::RemovabilityReport;
use crate::scalar::Scalar;

/// Observed entries of an `m x n` matrix with target rank.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialMatrix<S> {
    pub m: usize,
    pub n: usize,
    pub rank: usize,
    pub entries: BTreeMap<LatticePoint, S>,
}

impl<S: Scalar> PartialMatrix<S> {
    pub fn new(m: usize, n: usize, rank: usize, entries: BTreeMap<LatticePoint, S>) -> Result<Self, CompletionError> {
        if m == 0 || n == 0 || rank == 0 {
            return Err(CompletionError::InvalidInput(format!("dimensions {m}x{n}, rank {rank}")));
        }
        for (p, v) in &entries {
            if !p.in_region(m, n) {
                return Err(CompletionError::InvalidInput(format!("entry {p} outside {m}x{n}")));
            }
            if !v.to_f64().is_finite() && !S::is_exact() {
                return Err(CompletionError::InvalidInput(format!("entry {p} is not finite")));
            }
        }
        Ok(Self { m, n, rank, entries })
    }

    /// Restriction of a full matrix to a mask.
    pub fn from_dense(rows: &[Vec<S>], mask: &Mask, rank: usize) -> Result<Self, CompletionError> {
        let entries = mask.support.iter().map(|&p| (p, rows[p.row - 1][p.col - 1].clone())).collect();
        Self::new(mask.m, mask.n, rank, entries)
    }

    pub fn mask(&self) -> Mask {
        Mask::new(self.m, self.n, self.entries.keys().copied()).expect("entries validated")
    }

    pub fn to_json_value(&self) -> Value {
        let entries: Vec<Value> = self.entries.iter().map(|(p, v)| json!([p.row, p.col, v.to_json_value()])).collect();
        json!({ "m": self.m, "n": self.n, "rank": self.rank, "entries": entries })
    }

    pub fn from_json_value(v: &Value) -> Result<Self, CompletionError> {
        let bad = |w: &str| CompletionError::InvalidInput(format!("missing or invalid {w}"));
        let dim = |k: &str| v[k].as_u64().map(|x| x as usize).ok_or_else(|| bad(k));
        let mut entries = BTreeMap::new();
        for e in v["entries"].as_array().ok_or_else(|| bad("entries"))? {
            let e = e.as_array().filter(|e| e.len() == 3).ok_or_else(|| bad("entry"))?;
            let r = e[0].as_u64().ok_or_else(|| bad("entry row"))? as usize;
            let c = e[1].as_u64().ok_or_else(|| bad("entry column"))? as usize;
            let x = S::from_json_value(&e[2]).ok_or_else(|| bad("entry value"))?;
            if entries.insert(LatticePoint::new(r, c), x).is_some() {
                return Err(CompletionError::InvalidInput(format!("duplicate entry ({r},{c})")));
            }
        }
        Self::new(dim("m")?, dim("n")?, dim("rank")?, entries)
    }

    pub fn from_json(s: &str) -> Result<Self, CompletionError> {
        let v: Value = serde_json::from_str(s).map_err(|e| CompletionError::InvalidInput(e.to_string()))?;
        Self::from_json_value(&v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Complete,
    Partial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Completion<S> {
    pub m: usize,
    pub n: usize,
    /// Row-major values; `None` where nothing could be filled.
    pub values: Vec<Option<S>>,
    pub certificate: Certificate<S>,
    pub fill_order: Vec<(LatticePoint, MinorSpec)>,
    pub status: Status,
}

impl<S: Scalar> Completion<S> {
    pub fn get(&self, p: LatticePoint) -> Option<&S> {
        self.values[(p.row - 1) * self.n + p.col - 1].as_ref()
    }

    pub fn matrix(&self) -> Option<Vec<Vec<S>>> {
        (0..self.m)
            .map(|i| (0..self.n).map(|j| self.values[i * self.n + j].clone()).collect())
            .collect()
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = (0..self.m)
            .map(|i| {
                Value::Array(
                    (0..self.n)
                        .map(|j| self.values[i * self.n + j].as_ref().map_or(Value::Null, |v| v.to_json_value()))
                        .collect(),
                )
            })
            .collect();
        let order: Vec<Value> = self.fill_order.iter().map(|(p, s)| json!({"target": [p.row, p.col], "minor": s})).collect();
        json!({
            "m": self.m,
            "n": self.n,
            "status": self.status,
            "matrix": rows,
            "fill_order": order,
            "certificate": self.certificate.to_json_value(),
        })
    }
}

/// Mutable completion state shared by the engines.
struct Work<S> {
    m: usize,
    n: usize,
    r: usize,
    vals: Vec<Option<S>>,
    observed: Vec<bool>,
    degree: Vec<usize>,
    owner: Vec<Option<usize>>,
    cert: Certificate<S>,
    order: Vec<(LatticePoint, MinorSpec)>,
}

impl<S: Scalar> Work<S> {
    fn new(p: &PartialMatrix<S>) -> Self {
        let mut vals = vec![None; p.m * p.n];
        let mut observed = vec![false; p.m * p.n];
        for (q, v) in &p.entries {
            let k = (q.row - 1) * p.n + q.col - 1;
            vals[k] = Some(v.clone());
            observed[k] = true;
        }
        Self {
            m: p.m,
            n: p.n,
            r: p.rank,
            vals,
            observed,
            degree: vec![0; p.m * p.n],
            owner: vec![None; p.m * p.n],
            cert: Certificate::new(p.rank),
            order: Vec::new(),
        }
    }

    fn idx(&self, p: LatticePoint) -> usize {
        (p.row - 1) * self.n + p.col - 1
    }

    fn known(&self, p: LatticePoint) -> bool {
        self.vals[self.idx(p)].is_some()
    }

    fn unknowns(&self) -> Vec<LatticePoint> {
        (1..=self.m)
            .flat_map(|r| (1..=self.n).map(move |c| LatticePoint::new(r, c)))
            .filter(|&p| !self.known(p))
            .collect()
    }

    fn degree_at(&self, p: LatticePoint) -> usize {
        self.degree[self.idx(p)]
    }

    /// Minor for `t` whose other entries all satisfy `ok`, preferring the
    /// nearest rows and then the nearest columns.
    fn search(&self, t: LatticePoint, ok: &dyn Fn(LatticePoint) -> bool) -> Option<MinorSpec> {
        let r = self.r;
        let at = LatticePoint::new;
        let mut rows: Vec<usize> = (1..=self.m).filter(|&k| k != t.row && ok(at(k, t.col))).collect();
        rows.sort_by_key(|&k| (k.abs_diff(t.row), k));
        let mut cols: Vec<usize> = (1..=self.n).filter(|&l| l != t.col && ok(at(t.row, l))).collect();
        cols.sort_by_key(|&l| (l.abs_diff(t.col), l));
        if rows.len() < r || cols.len() < r {
            return None;
        }
        fn dfs(
            rows: &[usize],
            start: usize,
            chosen: &mut Vec<usize>,
            cand: &[usize],
            r: usize,
            ok: &dyn Fn(LatticePoint) -> bool,
        ) -> Option<(Vec<usize>, Vec<usize>)> {
            if chosen.len() == r {
                return Some((chosen.clone(), cand[..r].to_vec()));
            }
            for s in start..rows.len() {
                if rows.len() - s < r - chosen.len() {
                    break;
                }
                let k = rows[s];
                let next: Vec<usize> = cand.iter().copied().filter(|&l| ok(LatticePoint::new(k, l))).collect();
                if next.len() < r {
                    continue;
                }
                chosen.push(k);
                if let Some(found) = dfs(rows, s + 1, chosen, &next, r, ok) {
                    return Some(found);
                }
                chosen.pop();
            }
            None
        }
        let (mut ri, mut ci) = dfs(&rows, 0, &mut Vec::new(), &cols, r, ok)?;
        ri.push(t.row);
        ci.push(t.col);
        ri.sort_unstable();
        ci.sort_unstable();
        Some(MinorSpec::new(ri, ci, t))
    }

    fn filled_degree(&self, p: LatticePoint) -> Option<usize> {
        let i = self.idx(p);
        (!self.observed[i]).then(|| self.degree[i])
    }

    /// Minor of least certificate degree for `t`, ties going to the nearest
    /// rows and then the nearest columns.
    fn optimal_minor(&self, t: LatticePoint) -> Option<(usize, MinorSpec)> {
        let r = self.r;
        let at = LatticePoint::new;
        let mut rows: Vec<usize> = (1..=self.m).filter(|&k| k != t.row && self.known(at(k, t.col))).collect();
        rows.sort_by_key(|&k| (k.abs_diff(t.row), k));
        let mut cols: Vec<usize> = (1..=self.n).filter(|&l| l != t.col && self.known(at(t.row, l))).collect();
        cols.sort_by_key(|&l| (l.abs_diff(t.col), l));
        if rows.len() < r || cols.len() < r {
            return None;
        }
        let cost = |c: usize, md: usize| if c == 0 { r + 1 } else { (r + 1).max(md + c) };
        struct Best {
            degree: usize,
            rows: Vec<usize>,
            cols: Vec<usize>,
        }
        let mut best: Option<Best> = None;

        let leaf = |chosen: &[usize], cand: &[usize], c_rows: usize, md_rows: usize, best: &mut Option<Best>| {
            let stats: Vec<(usize, usize, usize)> = cand
                .iter()
                .map(|&l| {
                    let ds: Vec<usize> =
                        chosen.iter().chain([&t.row]).filter_map(|&k| self.filled_degree(at(k, l))).collect();
                    (l, ds.len(), ds.into_iter().max().unwrap_or(0))
                })
                .collect();
            let levels: BTreeSet<usize> = stats.iter().map(|s| s.2).collect();
            for &cap in &levels {
                let mut pick: Vec<&(usize, usize, usize)> = stats.iter().filter(|s| s.2 <= cap).collect();
                if pick.len() < r {
                    continue;
                }
                pick.sort_by_key(|s| s.1);
                let pick = &pick[..r];
                let c = c_rows + pick.iter().map(|s| s.1).sum::<usize>();
                let md = pick.iter().filter(|s| s.1 > 0).map(|s| s.2).max().unwrap_or(0).max(md_rows);
                let g = cost(c, md);
                if best.as_ref().map_or(true, |b| g < b.degree) {
                    *best = Some(Best { degree: g, rows: chosen.to_vec(), cols: pick.iter().map(|s| s.0).collect() });
                }
            }
        };

        #[allow(clippy::too_many_arguments)]
        fn dfs<S: Scalar>(
            w: &Work<S>,
            t: LatticePoint,
            rows: &[usize],
            start: usize,
            chosen: &mut Vec<usize>,
            cand: &[usize],
            c_rows: usize,
            md_rows: usize,
            best: &mut Option<Best>,
            cost: &dyn Fn(usize, usize) -> usize,
            leaf: &dyn Fn(&[usize], &[usize], usize, usize, &mut Option<Best>),
        ) {
            let r = w.r;
            if best.as_ref().is_some_and(|b| b.degree <= cost(c_rows, md_rows)) {
                return;
            }
            if chosen.len() == r {
                leaf(chosen, cand, c_rows, md_rows, best);
                return;
            }
            for s in start..rows.len() {
                if rows.len() - s < r - chosen.len() || best.as_ref().is_some_and(|b| b.degree == r + 1) {
                    break;
                }
                let k = rows[s];
                let next: Vec<usize> = cand.iter().copied().filter(|&l| w.known(LatticePoint::new(k, l))).collect();
                if next.len() < r {
                    continue;
                }
                let (c, md) = match w.filled_degree(LatticePoint::new(k, t.col)) {
                    Some(d) => (c_rows + 1, md_rows.max(d)),
                    None => (c_rows, md_rows),
                };
                chosen.push(k);
                dfs(w, t, rows, s + 1, chosen, &next, c, md, best, cost, leaf);
                chosen.pop();
            }
        }
        dfs(self, t, &rows, 0, &mut Vec::new(), &cols, 0, 0, &mut best, &cost, &leaf);
        let b = best?;
        let (mut ri, mut ci) = (b.rows, b.cols);
        ri.push(t.row);
        ci.push(t.col);
        ri.sort_unstable();
        ci.sort_unstable();
        Some((b.degree, MinorSpec::new(ri, ci, t)))
    }

    fn nearest_minor(&self, t: LatticePoint) -> Option<MinorSpec> {
        self.search(t, &|p| self.known(p))
    }

    fn fill(&mut self, mut spec: MinorSpec) -> Result<(), CompletionError> {
        let t = spec.unknown;
        let filled: Vec<LatticePoint> = spec.points().filter(|&p| p != t && !self.observed[self.idx(p)]).collect();
        let kind = if filled.len() == 1 { StepKind::Elimination } else { StepKind::OneUnknown };
        if kind == StepKind::Elimination {
            spec.resolved = Some(filled[0]);
        }
        let lookup = |p: LatticePoint| self.vals[self.idx(p)].clone();
        let sol = solve_linear(&spec, &lookup)?;
        let mut deps: Vec<usize> = filled.iter().map(|&p| self.owner[self.idx(p)].expect("filled entry has a step")).collect();
        deps.sort_unstable();
        let dep_degrees: Vec<usize> = filled.iter().map(|&p| self.degree_at(p)).collect();
        let degree = step_degree(self.r, &dep_degrees);
        let (c1, c2) = match sol.elimination {
            Some((a, b)) => (Some(a), Some(b)),
            None => (None, None),
        };
        let k = self.cert.push(CertStep {
            target: t,
            kind,
            minor: spec.clone(),
            alpha: sol.alpha,
            beta: sol.beta,
            c1,
            c2,
            value: sol.value.clone(),
            dependencies: deps,
            degree,
        });
        let i = self.idx(t);
        self.vals[i] = Some(sol.value);
        self.degree[i] = degree;
        self.owner[i] = Some(k);
        self.order.push((t, spec));
        Ok(())
    }

    /// Nearest-minor rounds over `cells` until nothing more can be filled.
    fn run_greedy(&mut self, cells: &BTreeSet<LatticePoint>) -> Result<(), CompletionError> {
        loop {
            let plans: Vec<MinorSpec> =
                cells.iter().filter(|&&t| !self.known(t)).filter_map(|&t| self.nearest_minor(t)).collect();
            if plans.is_empty() {
                return Ok(());
            }
            for spec in plans {
                self.fill(spec)?;
            }
        }
    }

    /// Rounds of lowest-degree fills; within a round entries are taken in
    /// phase order, then row-major. A plan is reused while no newly filled
    /// entry could improve it.
    fn run_schedule(mut self, phases: Vec<BTreeSet<LatticePoint>>) -> Result<Completion<S>, CompletionError> {
        let mut phase_of: BTreeMap<LatticePoint, usize> = BTreeMap::new();
        for (k, ph) in phases.iter().enumerate() {
            for &p in ph {
                phase_of.entry(p).or_insert(k);
            }
        }
        let rank = |p: &LatticePoint| (phase_of.get(p).copied().unwrap_or(phases.len()), *p);
        let mut plans: BTreeMap<LatticePoint, (usize, MinorSpec)> = BTreeMap::new();
        let mut last_low = 0usize;
        loop {
            for t in self.unknowns() {
                let stale = plans.get(&t).map_or(true, |(d, _)| *d > last_low + 1);
                if stale {
                    match self.optimal_minor(t) {
                        Some(plan) => plans.insert(t, plan),
                        None => plans.remove(&t),
                    };
                }
            }
            let Some(low) = plans.values().map(|(d, _)| *d).min() else {
                break;
            };
            let mut batch: Vec<LatticePoint> = plans.iter().filter(|(_, (d, _))| *d == low).map(|(p, _)| *p).collect();
            batch.sort_by_key(|p| rank(p));
            for p in batch {
                let (_, spec) = plans.remove(&p).expect("planned");
                self.fill(spec)?;
            }
            last_low = low;
        }
        if let Some(gap) = self.unknowns().into_iter().min_by_key(|p| rank(p)) {
            return Err(CompletionError::ScheduleGap(gap));
        }
        Ok(self.finish())
    }

    fn finish(self) -> Completion<S> {
        let status = if self.vals.iter().all(Option::is_some) { Status::Complete } else { Status::Partial };
        Completion {
            m: self.m,
            n: self.n,
            values: self.vals,
            certificate: self.cert,
            fill_order: self.order,
            status,
        }
    }
}

/// Solves the single minor `spec` against the observed entries.
pub fn solve_minor_one_unknown<S: Scalar>(
    partial: &PartialMatrix<S>,
    spec: &MinorSpec,
) -> Result<(S, CertStep<S>), CompletionError> {
    if spec.resolved.is_some() || spec.points().any(|p| p != spec.unknown && !partial.entries.contains_key(&p)) {
        return Err(CompletionError::InvalidMinor("minor must have exactly one unknown".into()));
    }
    if partial.entries.contains_key(&spec.unknown) {
        return Err(CompletionError::InvalidMinor(format!("{} is observed", spec.unknown)));
    }
    let sol = solve_linear(spec, &|p| partial.entries.get(&p).cloned())?;
    let step = CertStep {
        target: spec.unknown,
        kind: StepKind::OneUnknown,
        minor: spec.clone(),
        alpha: sol.alpha,
        beta: sol.beta,
        c1: None,
        c2: None,
        value: sol.value.clone(),
        dependencies: Vec::new(),
        degree: step_degree(spec.size() - 1, &[]),
    };
    Ok((sol.value, step))
}

/// Solves for `spec2.unknown` in a minor whose other unknown `spec2.resolved`
/// was solved by `resolved`; returns `(alpha', beta')` and the step.
pub fn eliminate_second_unknown<S: Scalar>(
    partial: &PartialMatrix<S>,
    spec2: &MinorSpec,
    resolved: &CertStep<S>,
    resolved_index: usize,
) -> Result<((S, S), CertStep<S>), CompletionError> {
    let x1 = spec2.resolved.ok_or_else(|| CompletionError::InvalidMinor("no resolved entry".into()))?;
    if resolved.target != x1 {
        return Err(CompletionError::InvalidMinor(format!("step solves {} not {x1}", resolved.target)));
    }
    let lookup = |p: LatticePoint| if p == x1 { Some(resolved.value.clone()) } else { partial.entries.get(&p).cloned() };
    let sol = solve_linear(spec2, &lookup)?;
    let (c1, c2) = sol.elimination.clone().expect("resolved entry present");
    let step = CertStep {
        target: spec2.unknown,
        kind: StepKind::Elimination,
        minor: spec2.clone(),
        alpha: sol.alpha.clone(),
        beta: sol.beta.clone(),
        c1: Some(c1),
        c2: Some(c2),
        value: sol.value,
        dependencies: vec![resolved_index],
        degree: step_degree(spec2.size() - 1, &[resolved.degree]),
    };
    Ok(((sol.alpha, sol.beta), step))
}

fn all_cells(m: usize, n: usize) -> BTreeSet<LatticePoint> {
    (1..=m).flat_map(|r| (1..=n).map(move |c| LatticePoint::new(r, c))).collect()
}

/// Rank-2 completion ordered by the removal schedule: witness rectangles by
/// level, then the interior of the circuit, then the exterior.
pub fn complete_rank2<S: Scalar>(
    partial: &PartialMatrix<S>,
    report: &RemovabilityReport,
    circuit: &Walk,
) -> Result<Completion<S>, CompletionError> {
    if partial.rank != 2 {
        return Err(CompletionError::Precondition(format!("rank {} is not 2", partial.rank)));
    }
    if let Some(&v) = report.not_removable().first() {
        return Err(CompletionError::ScheduleGap(v));
    }
    let (m, n) = (partial.m, partial.n);
    if !spans_all_indices(circuit, m, n) {
        return Err(CompletionError::Precondition("circuit does not span all indices".into()));
    }
    if circuit.points.iter().any(|p| !partial.entries.contains_key(p)) {
        return Err(CompletionError::Precondition("circuit not contained in the observed entries".into()));
    }
    let mut phases: Vec<BTreeSet<LatticePoint>> = report.schedule.iter().map(|e| e.witness.cells().into_iter().collect()).collect();
    let inside = interior_points(&report.initial, m, n).map_err(|e| CompletionError::Precondition(e.to_string()))?;
    phases.push(inside);
    phases.push(all_cells(m, n));
    Work::new(partial).run_schedule(phases)
}

/// Row span `[lo, hi]` of a monotone walk in each column.
fn column_spans(w: &Walk, n: usize) -> Option<Vec<(usize, usize)>> {
    let mut span = vec![(usize::MAX, 0usize); n + 1];
    for p in &w.points {
        let s = &mut span[p.col];
        s.0 = s.0.min(p.row);
        s.1 = s.1.max(p.row);
    }
    (1..=n).all(|c| span[c].1 > 0).then_some(span)
}

/// Rank-r completion following the staircase order: for the innermost walk
/// outward, its step rectangles then the band to the previous walk; finally
/// the region beyond the innermost walk.
pub fn complete_rank_r<S: Scalar>(
    partial: &PartialMatrix<S>,
    report: &CGraphReport,
) -> Result<Completion<S>, CompletionError> {
    if !report.is_c_graph {
        return Err(CompletionError::Precondition("walks do not form a C-graph".into()));
    }
    if partial.rank != report.rank {
        return Err(CompletionError::Precondition(format!("rank {} differs from report rank {}", partial.rank, report.rank)));
    }
    let (m, n) = (partial.m, partial.n);
    if (report.m, report.n) != (m, n) {
        return Err(CompletionError::Precondition("report dimensions differ".into()));
    }
    let spans: Option<Vec<_>> = report.walks.iter().map(|w| column_spans(w, n)).collect();
    let mut phases = Vec::new();
    if let Some(spans) = spans {
        let last = spans.len() - 1;
        for l in (1..=last).rev() {
            let band: BTreeSet<LatticePoint> = all_cells(m, n)
                .into_iter()
                .filter(|p| p.row <= spans[l - 1][p.col].1 && p.row >= spans[l][p.col].0)
                .collect();
            for s in &report.steps[l] {
                let b = s.bounds;
                phases.push(band.iter().copied().filter(|&p| b.contains_point(p)).collect());
            }
            phases.push(band);
        }
        phases.push(all_cells(m, n).into_iter().filter(|p| p.row < spans[last][p.col].0).collect());
    }
    Work::new(partial).run_schedule(phases)
}

/// Row-major fixpoint with the nearest admissible minor at each entry.
pub fn propagate_greedy<S: Scalar>(partial: &PartialMatrix<S>, r: usize) -> Result<Completion<S>, CompletionError> {
    let mut p = partial.clone();
    p.rank = r;
    let mut w = Work::new(&p);
    w.run_greedy(&all_cells(p.m, p.n))?;
    Ok(w.finish())
}

/// Dense `m x n` product `U V^T` of standard normal factors.
pub fn random_low_rank(m: usize, n: usize, r: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |k: usize| -> Vec<Vec<f64>> {
        (0..k).map(|_| (0..r).map(|_| StandardNormal.sample(&mut rng)).collect()).collect()
    };
    let u = draw(m);
    let v = draw(n);
    u.iter()
        .map(|ui| v.iter().map(|vj| ui.iter().zip(vj).map(|(a, b)| a * b).sum()).collect())
        .collect()
}

/// Random rank-`r` instance observed on `mask`, with its ground truth.
pub fn random_instance(mask: &Mask, r: usize, seed: u64) -> (PartialMatrix<f64>, Vec<Vec<f64>>) {
    let truth = random_low_rank(mask.m, mask.n, r, seed);
    let partial = PartialMatrix::from_dense(&truth, mask, r).expect("finite normal samples");
    (partial, truth)
}
