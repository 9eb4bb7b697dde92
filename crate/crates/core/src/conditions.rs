//! Structural conditions for general rank: non-occlusion of lattice trees,
//! nested steps, connection by turn sequences and separation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::ConditionError;
use crate::lattice::{spans_all_indices, step, LatticePoint, Mask, Walk, DOWN, RIGHT};

/// Connected acyclic set of lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeTree {
    pub points: BTreeSet<LatticePoint>,
    pub edges: BTreeSet<(LatticePoint, LatticePoint)>,
}

impl LatticeTree {
    pub fn new(
        points: BTreeSet<LatticePoint>,
        edges: BTreeSet<(LatticePoint, LatticePoint)>,
    ) -> Result<Self, ConditionError> {
        if points.is_empty() {
            return Err(ConditionError::NotATree("empty".into()));
        }
        for &(a, b) in &edges {
            if a.l1(b) != 1 || !points.contains(&a) || !points.contains(&b) {
                return Err(ConditionError::NotATree(format!("bad edge {a}-{b}")));
            }
        }
        if edges.len() + 1 != points.len() {
            return Err(ConditionError::NotATree(format!(
                "{} points with {} edges",
                points.len(),
                edges.len()
            )));
        }
        let t = Self { points, edges };
        if t.components(&t.points).len() != 1 {
            return Err(ConditionError::NotATree("disconnected".into()));
        }
        Ok(t)
    }

    /// Union of walks sharing points.
    pub fn from_walks(walks: &[&Walk]) -> Result<Self, ConditionError> {
        let mut points = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for w in walks {
            points.extend(w.points.iter().copied());
            let k = w.len();
            let steps = if w.closed { k } else { k.saturating_sub(1) };
            for i in 0..steps {
                let (a, b) = (w.at(i), w.at(i + 1));
                edges.insert((a.min(b), a.max(b)));
            }
        }
        Self::new(points, edges)
    }

    /// Connected components of `keep` using this tree's edges.
    pub fn components(&self, keep: &BTreeSet<LatticePoint>) -> Vec<BTreeSet<LatticePoint>> {
        components_of(keep, self.edges.iter())
    }
}

fn components_of<'a>(
    keep: &BTreeSet<LatticePoint>,
    edges: impl Iterator<Item = &'a (LatticePoint, LatticePoint)>,
) -> Vec<BTreeSet<LatticePoint>> {
    let mut adj: BTreeMap<LatticePoint, Vec<LatticePoint>> = BTreeMap::new();
    for &(a, b) in edges {
        if keep.contains(&a) && keep.contains(&b) {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &s in keep {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(p) = stack.pop() {
            for &q in adj.get(&p).into_iter().flatten() {
                if seen.insert(q) {
                    comp.insert(q);
                    stack.push(q);
                }
            }
        }
        out.push(comp);
    }
    out
}

pub fn tree_index_spans(points: &BTreeSet<LatticePoint>) -> (BTreeSet<usize>, BTreeSet<usize>) {
    (points.iter().map(|p| p.row).collect(), points.iter().map(|p| p.col).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OcclusionFailure {
    pub pair: (usize, usize),
    pub uncovered_rows: Vec<usize>,
    pub uncovered_cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OcclusionReport {
    pub pass: bool,
    pub failures: Vec<OcclusionFailure>,
}

/// For each intersecting pair, every row and column index of the shared
/// part must be reached by a subtree of the union avoiding the shared part.
pub fn check_non_occlusion(trees: &[LatticeTree]) -> OcclusionReport {
    let mut failures = Vec::new();
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            let shared: BTreeSet<_> = trees[i].points.intersection(&trees[j].points).copied().collect();
            if shared.is_empty() {
                continue;
            }
            let (rows, cols) = tree_index_spans(&shared);
            let rest: BTreeSet<_> = trees[i].points.union(&trees[j].points).filter(|p| !shared.contains(p)).copied().collect();
            let comps = components_of(&rest, trees[i].edges.iter().chain(trees[j].edges.iter()));
            let reach_r: BTreeSet<usize> = comps.iter().flat_map(|c| c.iter().map(|p| p.row)).collect();
            let reach_c: BTreeSet<usize> = comps.iter().flat_map(|c| c.iter().map(|p| p.col)).collect();
            let ur: Vec<_> = rows.difference(&reach_r).copied().collect();
            let uc: Vec<_> = cols.difference(&reach_c).copied().collect();
            if !ur.is_empty() || !uc.is_empty() {
                failures.push(OcclusionFailure { pair: (i, j), uncovered_rows: ur, uncovered_cols: uc });
            }
        }
    }
    OcclusionReport { pass: failures.is_empty(), failures }
}

/// Inclusive rectangle `[r0, r1] x [c0, c1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub r0: usize,
    pub r1: usize,
    pub c0: usize,
    pub c1: usize,
}

impl Bounds {
    fn of(pts: impl IntoIterator<Item = LatticePoint>) -> Option<Bounds> {
        let mut it = pts.into_iter();
        let f = it.next()?;
        let mut b = Bounds { r0: f.row, r1: f.row, c0: f.col, c1: f.col };
        for p in it {
            b.r0 = b.r0.min(p.row);
            b.r1 = b.r1.max(p.row);
            b.c0 = b.c0.min(p.col);
            b.c1 = b.c1.max(p.col);
        }
        Some(b)
    }

    pub fn contains(&self, o: &Bounds) -> bool {
        self.r0 <= o.r0 && o.r1 <= self.r1 && self.c0 <= o.c0 && o.c1 <= self.c1
    }

    pub fn hull(&self, o: &Bounds) -> Bounds {
        Bounds { r0: self.r0.min(o.r0), r1: self.r1.max(o.r1), c0: self.c0.min(o.c0), c1: self.c1.max(o.c1) }
    }

    pub fn contains_point(&self, p: LatticePoint) -> bool {
        (self.r0..=self.r1).contains(&p.row) && (self.c0..=self.c1).contains(&p.col)
    }
}

/// Step of a staircase: a descent `j..j'` followed by a run to the right `j'..j''`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StepTriple {
    pub j: usize,
    pub j_prime: usize,
    pub j_dprime: usize,
    pub bounds: Bounds,
}

fn is_anchor(walk: &Walk, j: usize) -> bool {
    if walk.closed || j + 1 >= walk.len() || step(walk.points[j], walk.points[j + 1]) != DOWN {
        return false;
    }
    (j == 0 && walk.points[0].row == 1) || (j > 0 && step(walk.points[j - 1], walk.points[j]) == RIGHT)
}

pub fn nested_step_indices(walk: &Walk, j: usize) -> Result<StepTriple, ConditionError> {
    if !is_anchor(walk, j) {
        return Err(ConditionError::NotAStepAnchor(j));
    }
    let pts = &walk.points;
    let mut jp = j;
    while jp + 1 < pts.len() && pts[jp + 1].col == pts[j].col {
        jp += 1;
    }
    let mut jpp = jp;
    while jpp + 1 < pts.len() && pts[jpp + 1].row == pts[jp].row {
        jpp += 1;
    }
    if jpp == jp {
        return Err(ConditionError::NotAStepAnchor(j));
    }
    let bounds = Bounds { r0: pts[j].row, r1: pts[jp].row, c0: pts[j].col, c1: pts[jpp].col };
    Ok(StepTriple { j, j_prime: jp, j_dprime: jpp, bounds })
}

pub fn step_triples(walk: &Walk) -> Vec<StepTriple> {
    (0..walk.len()).filter_map(|j| nested_step_indices(walk, j).ok()).collect()
}

fn dims(walks: &[&Walk]) -> (usize, usize) {
    let pts = walks.iter().flat_map(|w| w.points.iter());
    pts.fold((0, 0), |(m, n), p| (m.max(p.row), n.max(p.col)))
}

fn require_spanning(walks: &[&Walk]) -> Result<(), ConditionError> {
    let (m, n) = dims(walks);
    if walks.iter().all(|w| spans_all_indices(w, m, n)) {
        Ok(())
    } else {
        Err(ConditionError::SpanViolation)
    }
}

/// Part of an inner step not shared with the outer walk.
fn clipped_bounds(inner: &Walk, s: &StepTriple, outer: &BTreeSet<LatticePoint>) -> Option<Bounds> {
    Bounds::of(inner.points[s.j..=s.j_dprime].iter().copied().filter(|p| !outer.contains(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Enclosed(usize),
    Bridged(usize),
    Outside,
}

fn place(b: &Bounds, territories: &[StepTriple]) -> Placement {
    if let Some(k) = territories.iter().position(|t| t.bounds.contains(b)) {
        return Placement::Enclosed(k);
    }
    for k in 0..territories.len().saturating_sub(1) {
        if territories[k].bounds.hull(&territories[k + 1].bounds).contains(b) {
            return Placement::Bridged(k);
        }
    }
    Placement::Outside
}

/// Placement of every unshared inner step relative to the outer steps.
pub fn step_placements(outer: &Walk, inner: &Walk) -> Vec<(StepTriple, Placement)> {
    let territories = step_triples(outer);
    let shared = outer.point_set();
    step_triples(inner)
        .into_iter()
        .filter_map(|s| clipped_bounds(inner, &s, &shared).map(|b| (s, place(&b, &territories))))
        .collect()
}

/// Every inner step lies within one outer step, or within the hull of two
/// consecutive outer steps.
pub fn check_nested_steps(outer: &Walk, inner: &Walk) -> Result<bool, ConditionError> {
    require_spanning(&[outer, inner])?;
    Ok(step_placements(outer, inner).iter().all(|(_, p)| *p != Placement::Outside))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionWitness {
    pub step: StepTriple,
    pub turns: [usize; 5],
}

fn run_constant(w: &Walk, a: usize, b: usize, by_col: bool) -> bool {
    w.points[a..=b].iter().all(|p| if by_col { p.col == w.points[a].col } else { p.row == w.points[a].row })
}

/// Turn sequence `k1..k5` of `prev` alternating column- and row-constant runs
/// around the hull that holds a bridging step.
fn turn_sequence(prev: &Walk, a: &StepTriple, b: &StepTriple) -> Option<[usize; 5]> {
    let k = [a.j, a.j_prime, a.j_dprime, b.j_prime, b.j_dprime];
    let ok = a.j_dprime == b.j
        && k.windows(2).all(|w| w[0] < w[1])
        && run_constant(prev, k[0], k[1], true)
        && run_constant(prev, k[1], k[2], false)
        && run_constant(prev, k[2], k[3], true)
        && run_constant(prev, k[3], k[4], false);
    ok.then_some(k)
}

/// Witnesses for the bridged steps of `cur`; `None` when some step is
/// neither enclosed nor bridged by a valid turn sequence.
pub fn connection_witnesses(prev: &Walk, cur: &Walk) -> Result<Option<Vec<ConnectionWitness>>, ConditionError> {
    require_spanning(&[prev, cur])?;
    let territories = step_triples(prev);
    let mut out = Vec::new();
    for (s, pl) in step_placements(prev, cur) {
        match pl {
            Placement::Enclosed(_) => {}
            Placement::Bridged(k) => match turn_sequence(prev, &territories[k], &territories[k + 1]) {
                Some(turns) => out.push(ConnectionWitness { step: s, turns }),
                None => return Ok(None),
            },
            Placement::Outside => return Ok(None),
        }
    }
    Ok(Some(out))
}

pub fn check_connection(prev: &Walk, cur: &Walk) -> Result<bool, ConditionError> {
    Ok(connection_witnesses(prev, cur)?.is_some())
}

fn off_boundary(w: &Walk, m: usize, n: usize) -> Vec<LatticePoint> {
    w.points.iter().copied().filter(|p| p.row != 1 && p.row != m && p.col != 1 && p.col != n).collect()
}

/// Smallest Chebyshev distance between distinct walks away from the region
/// boundary; `None` when no pair has off-boundary points on both sides.
pub fn min_separation(walks: &[&Walk], m: usize, n: usize) -> Option<usize> {
    let inner: Vec<_> = walks.iter().map(|w| off_boundary(w, m, n)).collect();
    let mut best: Option<usize> = None;
    for i in 0..inner.len() {
        for j in i + 1..inner.len() {
            for a in &inner[i] {
                for b in &inner[j] {
                    let d = a.chebyshev(*b);
                    best = Some(best.map_or(d, |x| x.min(d)));
                }
            }
        }
    }
    best
}

pub fn check_separation(walks: &[Walk], r: usize) -> bool {
    let refs: Vec<&Walk> = walks.iter().collect();
    let (m, n) = dims(&refs);
    min_separation(&refs, m, n).map_or(true, |d| d > r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub walk_count: bool,
    pub spanning: bool,
    pub non_occlusion: bool,
    pub nested_steps: bool,
    pub connection: bool,
    pub separation: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.walk_count && self.spanning && self.non_occlusion && self.nested_steps && self.connection && self.separation
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CGraphReport {
    pub rank: usize,
    pub m: usize,
    pub n: usize,
    pub walks: Vec<Walk>,
    pub auxiliary_walks: Vec<Walk>,
    /// Main walk each auxiliary walk is attached to.
    pub attachments: Vec<Option<usize>>,
    pub verdicts: Verdicts,
    pub occlusion_failures: Vec<OcclusionFailure>,
    pub tree_errors: Vec<String>,
    /// Consecutive pairs `(l-1, l)` whose inner walk has a step outside the outer steps.
    pub nested_failures: Vec<(usize, usize)>,
    pub connection_failures: Vec<(usize, usize)>,
    pub connection_witnesses: Vec<((usize, usize), ConnectionWitness)>,
    pub min_separation: Option<usize>,
    pub steps: Vec<Vec<StepTriple>>,
    pub kappa: usize,
    pub is_c_graph: bool,
}

impl CGraphReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Highest-index main walk touched by an endpoint of `aux`.
fn attachment(walks: &[Walk], aux: &Walk) -> Option<usize> {
    let ends = [aux.points.first().copied(), aux.points.last().copied()];
    (0..walks.len()).rev().find(|&k| ends.iter().flatten().any(|p| walks[k].index_of(*p).is_some()))
}

pub fn verify_c_graph(
    mask: &Mask,
    r: usize,
    walks: &[Walk],
    auxiliary: &[Walk],
) -> Result<CGraphReport, ConditionError> {
    let covered: BTreeSet<_> = walks.iter().chain(auxiliary).flat_map(|w| w.points.iter().copied()).collect();
    let missing = mask.support.difference(&covered).count();
    let extra = covered.difference(&mask.support).count();
    if missing + extra > 0 {
        return Err(ConditionError::CoverMismatch { missing, extra });
    }
    let (m, n) = (mask.m, mask.n);
    let attachments: Vec<_> = auxiliary.iter().map(|a| attachment(walks, a)).collect();

    let mut groups: Vec<Vec<&Walk>> = walks.iter().map(|w| vec![w]).collect();
    for (a, at) in auxiliary.iter().zip(&attachments) {
        match at {
            Some(k) => groups[*k].push(a),
            None => groups.push(vec![a]),
        }
    }
    let mut trees = Vec::new();
    let mut tree_errors = Vec::new();
    for (k, g) in groups.iter().enumerate() {
        match LatticeTree::from_walks(g) {
            Ok(t) => trees.push(t),
            Err(e) => tree_errors.push(format!("tree {k}: {e}")),
        }
    }
    let occ = check_non_occlusion(&trees);

    let spanning = walks.iter().all(|w| !w.closed && spans_all_indices(w, m, n));
    let mut nested_failures = Vec::new();
    let mut connection_failures = Vec::new();
    let mut connection_witnesses = Vec::new();
    if spanning {
        for l in 1..walks.len() {
            if !check_nested_steps(&walks[l - 1], &walks[l])? {
                nested_failures.push((l - 1, l));
            }
            match crate::conditions::connection_witnesses(&walks[l - 1], &walks[l])? {
                Some(ws) => connection_witnesses.extend(ws.into_iter().map(|w| ((l - 1, l), w))),
                None => connection_failures.push((l - 1, l)),
            }
        }
    }
    let refs: Vec<&Walk> = walks.iter().collect();
    let sep = min_separation(&refs, m, n);
    let steps: Vec<_> = walks.iter().map(step_triples).collect();
    let kappa = steps.iter().map(Vec::len).sum();
    let verdicts = Verdicts {
        walk_count: walks.len() >= r,
        spanning,
        non_occlusion: tree_errors.is_empty() && occ.pass,
        nested_steps: spanning && nested_failures.is_empty(),
        connection: spanning && connection_failures.is_empty(),
        separation: sep.map_or(true, |d| d > r),
    };
    let is_c_graph = verdicts.all();
    Ok(CGraphReport {
        rank: r,
        m,
        n,
        walks: walks.to_vec(),
        auxiliary_walks: auxiliary.to_vec(),
        attachments,
        verdicts,
        occlusion_failures: occ.failures,
        tree_errors,
        nested_failures,
        connection_failures,
        connection_witnesses,
        min_separation: sep,
        steps,
        kappa,
        is_c_graph,
    })
}
