//! Reflex-vertex removal by rectangle closing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::RemovabilityError;
use crate::lattice::{
    classify_vertices, rectangle_of_closed_path, step, Dir, LatticePoint, Mask, TurnKind, Walk,
};

/// Axis along which the edge through the reflex vertex is prolonged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// The prolongation moves along rows (first coordinate changes).
    Vertical,
    Horizontal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathSide {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleWitness {
    pub vertex: LatticePoint,
    /// 1-based position in the listing: vertical/forward, vertical/backward,
    /// horizontal/forward, horizontal/backward.
    pub condition: u8,
    pub axis: Axis,
    pub side: PathSide,
    pub facing_index: usize,
    pub facing: LatticePoint,
    /// Rectangle corners `(a,c),(b,c),(b,d),(a,d)`.
    pub corners: [LatticePoint; 4],
    pub k: i64,
    pub companion_line: Vec<LatticePoint>,
}

impl RectangleWitness {
    /// The closing side from the vertex to the facing point, endpoints included.
    pub fn closing_side(&self) -> Vec<LatticePoint> {
        segment(self.vertex, self.facing)
    }

    pub fn cells(&self) -> Vec<LatticePoint> {
        let [a, _, c, _] = self.corners;
        (a.row..=c.row)
            .flat_map(|r| (a.col..=c.col).map(move |col| LatticePoint::new(r, col)))
            .collect()
    }
}

fn segment(a: LatticePoint, b: LatticePoint) -> Vec<LatticePoint> {
    let d = ((b.row as i64 - a.row as i64).signum(), (b.col as i64 - a.col as i64).signum());
    (0..=a.l1(b) as i64).map(|k| a.offset(d, k).expect("segment in region")).collect()
}

fn neg(d: Dir) -> Dir {
    (-d.0, -d.1)
}

struct Prolongation {
    facing_index: usize,
    facing: LatticePoint,
}

fn prolong(index: &HashMap<LatticePoint, usize>, v: LatticePoint, dir: Dir, m: usize, n: usize) -> Option<Prolongation> {
    let mut k = 1;
    loop {
        let q = v.offset(dir, k)?;
        if !q.in_region(m, n) {
            return None;
        }
        if let Some(&i) = index.get(&q) {
            return Some(Prolongation { facing_index: i, facing: q });
        }
        k += 1;
    }
}

fn check_condition(
    circuit: &Walk,
    mask: &Mask,
    vi: usize,
    pr: &Prolongation,
    axis: Axis,
    side: PathSide,
    condition: u8,
) -> Option<RectangleWitness> {
    let len = circuit.len();
    let v = circuit.points[vi];
    let mut path = vec![v];
    let mut i = vi;
    while i != pr.facing_index {
        i = match side {
            PathSide::Forward => (i + 1) % len,
            PathSide::Backward => (i + len - 1) % len,
        };
        path.push(circuit.points[i]);
        if path.len() > len {
            return None;
        }
    }
    let seg = segment(pr.facing, v);
    path.extend_from_slice(&seg[1..seg.len() - 1]);
    let corners = rectangle_of_closed_path(&path)?;
    // perpendicular offset from the closing side to the far side
    let far = match axis {
        Axis::Vertical => {
            let w = if corners[0].col == v.col { corners[2].col } else { corners[0].col };
            w as i64 - v.col as i64
        }
        Axis::Horizontal => {
            let w = if corners[0].row == v.row { corners[2].row } else { corners[0].row };
            w as i64 - v.row as i64
        }
    };
    let perp: Dir = match axis {
        Axis::Vertical => (0, 1),
        Axis::Horizontal => (1, 0),
    };
    let closing = segment(v, pr.facing);
    let span = (mask.m.max(mask.n)) as i64;
    for mag in 1..=span {
        for k in [mag, -mag] {
            if k == far {
                continue;
            }
            let line: Option<Vec<_>> = closing.iter().map(|p| p.offset(perp, k)).collect();
            let Some(line) = line else { continue };
            if line.iter().all(|q| q.in_region(mask.m, mask.n) && mask.contains(*q)) {
                return Some(RectangleWitness {
                    vertex: v,
                    condition,
                    axis,
                    side,
                    facing_index: pr.facing_index,
                    facing: pr.facing,
                    corners,
                    k,
                    companion_line: line,
                });
            }
        }
    }
    None
}

fn point_index(circuit: &Walk) -> HashMap<LatticePoint, usize> {
    circuit.points.iter().enumerate().map(|(i, &p)| (p, i)).collect()
}

/// Witness for the first 1-removability condition that holds at `vertex`.
pub fn is_1_removable(
    circuit: &Walk,
    mask: &Mask,
    vertex: usize,
) -> Result<Option<RectangleWitness>, RemovabilityError> {
    let turns = classify_vertices(circuit)?;
    let t = turns.get(vertex).ok_or(RemovabilityError::NotReflex(vertex))?;
    if t.kind != TurnKind::Reflex {
        return Err(RemovabilityError::NotReflex(vertex));
    }
    let rays = [t.incoming, neg(t.outgoing)];
    let vertical = *rays.iter().find(|d| d.0 != 0).expect("reflex vertex has a vertical edge");
    let horizontal = *rays.iter().find(|d| d.1 != 0).expect("reflex vertex has a horizontal edge");
    let index = point_index(circuit);
    let mut cond = 0u8;
    for (axis, dir) in [(Axis::Vertical, vertical), (Axis::Horizontal, horizontal)] {
        let pr = prolong(&index, t.point, dir, mask.m, mask.n);
        for side in [PathSide::Forward, PathSide::Backward] {
            cond += 1;
            if let Some(pr) = &pr {
                if let Some(w) = check_condition(circuit, mask, vertex, pr, axis, side, cond) {
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Replaces the cut-off rectangle boundary by the closing side.
pub fn remove_and_close(
    circuit: &Walk,
    vertex: usize,
    witness: &RectangleWitness,
) -> Result<Walk, RemovabilityError> {
    let len = circuit.len();
    if vertex >= len || circuit.points[vertex] != witness.vertex {
        return Err(RemovabilityError::InvalidWitness("vertex does not match".into()));
    }
    if circuit.points.get(witness.facing_index) != Some(&witness.facing) {
        return Err(RemovabilityError::InvalidWitness("facing point does not match".into()));
    }
    let mut path = vec![witness.vertex];
    let mut i = vertex;
    while i != witness.facing_index {
        i = match witness.side {
            PathSide::Forward => (i + 1) % len,
            PathSide::Backward => (i + len - 1) % len,
        };
        path.push(circuit.points[i]);
    }
    let seg = segment(witness.facing, witness.vertex);
    path.extend_from_slice(&seg[1..seg.len() - 1]);
    if rectangle_of_closed_path(&path) != Some(witness.corners) {
        return Err(RemovabilityError::InvalidWitness("subpath no longer forms the rectangle".into()));
    }
    // walk the kept part from the facing point back to the vertex, then the closing side
    let mut pts = Vec::with_capacity(len);
    let mut i = witness.facing_index;
    while i != vertex {
        pts.push(circuit.points[i]);
        i = match witness.side {
            PathSide::Forward => (i + 1) % len,
            PathSide::Backward => (i + len - 1) % len,
        };
    }
    let closing = segment(witness.vertex, witness.facing);
    pts.extend_from_slice(&closing[..closing.len() - 1]);
    let w = Walk::circuit(pts).map_err(RemovabilityError::Lattice)?;
    if !w.is_self_avoiding() || w.len() < 4 {
        return Err(RemovabilityError::InvalidWitness("closing produced a self-intersection".into()));
    }
    Ok(w.normalized())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Finite(usize),
    NotRemovable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub level: usize,
    pub witness: RectangleWitness,
    /// Reflex vertices that disappear with this closing, the removed vertex included.
    pub eliminated: Vec<LatticePoint>,
    /// Circuit after the closing.
    pub circuit: Walk,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovabilityReport {
    pub levels: BTreeMap<LatticePoint, Level>,
    pub l: usize,
    pub n_r: usize,
    pub initial: Walk,
    pub schedule: Vec<ScheduleEntry>,
}

impl RemovabilityReport {
    pub fn all_removable(&self) -> bool {
        self.levels.values().all(|l| matches!(l, Level::Finite(_)))
    }

    pub fn not_removable(&self) -> Vec<LatticePoint> {
        self.levels
            .iter()
            .filter(|(_, l)| **l == Level::NotRemovable)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn final_circuit(&self) -> &Walk {
        self.schedule.last().map_or(&self.initial, |e| &e.circuit)
    }

    pub fn to_json_value(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|(p, l)| match l {
                Level::Finite(k) => json!([p.row, p.col, k]),
                Level::NotRemovable => json!([p.row, p.col, "none"]),
            })
            .collect();
        let pts = |w: &Walk| w.points.iter().map(|p| [p.row, p.col]).collect::<Vec<_>>();
        let schedule: Vec<Value> = self
            .schedule
            .iter()
            .map(|e| {
                json!({
                    "level": e.level,
                    "vertex": [e.witness.vertex.row, e.witness.vertex.col],
                    "condition": e.witness.condition,
                    "k": e.witness.k,
                    "corners": e.witness.corners.iter().map(|p| [p.row, p.col]).collect::<Vec<_>>(),
                    "eliminated": e.eliminated.iter().map(|p| [p.row, p.col]).collect::<Vec<_>>(),
                    "circuit": pts(&e.circuit),
                })
            })
            .collect();
        json!({
            "levels": levels,
            "L": self.l,
            "N_r": self.n_r,
            "initial": pts(&self.initial),
            "schedule": schedule,
        })
    }
}

fn reflex_points(c: &Walk) -> Result<BTreeSet<LatticePoint>, RemovabilityError> {
    Ok(classify_vertices(c)?
        .into_iter()
        .filter(|t| t.kind == TurnKind::Reflex)
        .map(|t| t.point)
        .collect())
}

pub fn removability_analysis(circuit: &Walk, mask: &Mask) -> Result<RemovabilityReport, RemovabilityError> {
    let initial = circuit.normalized();
    let reflex0 = reflex_points(&initial)?;
    let mut levels: BTreeMap<_, _> = reflex0.iter().map(|&p| (p, Level::NotRemovable)).collect();
    let mut schedule = Vec::new();
    let mut cur = initial.clone();
    let mut level = 0;
    loop {
        let reflex = reflex_points(&cur)?;
        if reflex.is_empty() {
            break;
        }
        let mut candidates = Vec::new();
        for &p in &reflex {
            let vi = cur.index_of(p).expect("reflex point on circuit");
            if is_1_removable(&cur, mask, vi)?.is_some() {
                candidates.push(p);
            }
        }
        if candidates.is_empty() {
            for p in reflex {
                levels.entry(p).or_insert(Level::NotRemovable);
            }
            break;
        }
        level += 1;
        let mut working = cur.clone();
        for p in candidates {
            let before = reflex_points(&working)?;
            if !before.contains(&p) {
                continue;
            }
            let vi = working.index_of(p).expect("reflex point on circuit");
            let Some(w) = is_1_removable(&working, mask, vi)? else { continue };
            let next = remove_and_close(&working, vi, &w)?;
            let after = reflex_points(&next)?;
            let eliminated: Vec<_> = before.difference(&after).copied().collect();
            for q in &eliminated {
                levels.insert(*q, Level::Finite(level));
            }
            for q in after.difference(&before) {
                levels.entry(*q).or_insert(Level::NotRemovable);
            }
            schedule.push(ScheduleEntry { level, witness: w, eliminated, circuit: next.clone() });
            working = next;
        }
        cur = working;
    }
    let l = levels
        .values()
        .filter_map(|l| match l {
            Level::Finite(k) => Some(*k),
            Level::NotRemovable => None,
        })
        .max()
        .unwrap_or(0);
    Ok(RemovabilityReport { levels, l, n_r: reflex0.len(), initial, schedule })
}

/// Unit direction of the walk at index `i`.
pub fn direction_at(w: &Walk, i: usize) -> Dir {
    step(w.points[i], w.points[w.next(i)])
}
