//! Lattice region, masks, walks and circuit geometry.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// A point of the region, 1-based `(row, col)`. Ordering is row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub row: usize,
    pub col: usize,
}

impl LatticePoint {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn offset(self, d: Dir, k: i64) -> Option<LatticePoint> {
        let r = self.row as i64 + d.0 * k;
        let c = self.col as i64 + d.1 * k;
        (r >= 1 && c >= 1).then(|| LatticePoint::new(r as usize, c as usize))
    }

    pub fn l1(self, other: LatticePoint) -> usize {
        self.row.abs_diff(other.row) + self.col.abs_diff(other.col)
    }

    pub fn chebyshev(self, other: LatticePoint) -> usize {
        self.row.abs_diff(other.row).max(self.col.abs_diff(other.col))
    }

    pub fn in_region(self, m: usize, n: usize) -> bool {
        (1..=m).contains(&self.row) && (1..=n).contains(&self.col)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

impl From<(usize, usize)> for LatticePoint {
    fn from((row, col): (usize, usize)) -> Self {
        Self { row, col }
    }
}

/// Unit direction `(d_row, d_col)`.
pub type Dir = (i64, i64);

pub const DOWN: Dir = (1, 0);
pub const UP: Dir = (-1, 0);
pub const RIGHT: Dir = (0, 1);
pub const LEFT: Dir = (0, -1);

pub fn step(a: LatticePoint, b: LatticePoint) -> Dir {
    (b.row as i64 - a.row as i64, b.col as i64 - a.col as i64)
}

/// Cross product in screen orientation (x = col, y = -row); positive is a left turn.
pub fn turn_cross(d_in: Dir, d_out: Dir) -> i64 {
    let (ax, ay) = (d_in.1, -d_in.0);
    let (bx, by) = (d_out.1, -d_out.0);
    ax * by - ay * bx
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    pub m: usize,
    pub n: usize,
    pub support: BTreeSet<LatticePoint>,
}

#[derive(Serialize, Deserialize)]
struct MaskJson {
    m: usize,
    n: usize,
    support: Vec<[usize; 2]>,
}

impl Mask {
    pub fn new(
        m: usize,
        n: usize,
        support: impl IntoIterator<Item = LatticePoint>,
    ) -> Result<Self, LatticeError> {
        if m == 0 || n == 0 {
            return Err(LatticeError::InvalidDimensions { m, n });
        }
        let support: BTreeSet<_> = support.into_iter().collect();
        if let Some(p) = support.iter().find(|p| !p.in_region(m, n)) {
            return Err(LatticeError::OutOfRange(*p));
        }
        Ok(Self { m, n, support })
    }

    pub fn full(m: usize, n: usize) -> Result<Self, LatticeError> {
        let pts = (1..=m).flat_map(|r| (1..=n).map(move |c| LatticePoint::new(r, c)));
        Self::new(m, n, pts)
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        self.support.contains(&p)
    }

    pub fn to_json(&self) -> String {
        let j = MaskJson {
            m: self.m,
            n: self.n,
            support: self.support.iter().map(|p| [p.row, p.col]).collect(),
        };
        serde_json::to_string(&j).expect("mask serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        let j: MaskJson = serde_json::from_str(s).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::new(j.m, j.n, j.support.iter().map(|&[r, c]| LatticePoint::new(r, c)))
    }

    pub fn to_ascii(&self) -> String {
        let mut out = String::with_capacity((self.n + 1) * self.m);
        for r in 1..=self.m {
            for c in 1..=self.n {
                out.push(if self.contains(LatticePoint::new(r, c)) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_ascii(s: &str) -> Result<Self, LatticeError> {
        let rows: Vec<&str> = s.lines().map(str::trim_end).filter(|l| !l.is_empty()).collect();
        let m = rows.len();
        let n = rows.first().map_or(0, |l| l.chars().count());
        let mut support = Vec::new();
        for (i, line) in rows.iter().enumerate() {
            if line.chars().count() != n {
                return Err(LatticeError::Parse(format!("row {} has ragged length", i + 1)));
            }
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '#' => support.push(LatticePoint::new(i + 1, j + 1)),
                    '.' => {}
                    other => return Err(LatticeError::Parse(format!("unexpected character {other:?}"))),
                }
            }
        }
        Self::new(m, n, support)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSubgraph {
    pub vertices: BTreeSet<LatticePoint>,
    /// Each edge stored once with the smaller endpoint first.
    pub edges: BTreeSet<(LatticePoint, LatticePoint)>,
}

impl LatticeSubgraph {
    pub fn neighbours(&self, p: LatticePoint) -> Vec<LatticePoint> {
        [UP, LEFT, RIGHT, DOWN]
            .iter()
            .filter_map(|&d| p.offset(d, 1))
            .filter(|q| self.vertices.contains(q))
            .collect()
    }

    pub fn degree(&self, p: LatticePoint) -> usize {
        self.neighbours(p).len()
    }
}

pub fn build_lattice_subgraph(mask: &Mask) -> LatticeSubgraph {
    let vertices = mask.support.clone();
    let mut edges = BTreeSet::new();
    for &p in &vertices {
        for d in [RIGHT, DOWN] {
            if let Some(q) = p.offset(d, 1) {
                if vertices.contains(&q) {
                    edges.insert((p, q));
                }
            }
        }
    }
    LatticeSubgraph { vertices, edges }
}

/// Ordered lattice path. Closed walks store each vertex once; the closing
/// step runs from the last point back to the first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub points: Vec<LatticePoint>,
    pub closed: bool,
}

impl Walk {
    pub fn new(points: Vec<LatticePoint>, closed: bool) -> Result<Self, LatticeError> {
        let mut points = points;
        if closed && points.len() > 1 && points.first() == points.last() {
            points.pop();
        }
        for k in 1..points.len() {
            if points[k - 1].l1(points[k]) != 1 {
                return Err(LatticeError::NotUnitStep(k - 1));
            }
        }
        if closed && points.len() > 1 && points[points.len() - 1].l1(points[0]) != 1 {
            return Err(LatticeError::NotUnitStep(points.len() - 1));
        }
        Ok(Self { points, closed })
    }

    pub fn open(points: Vec<LatticePoint>) -> Result<Self, LatticeError> {
        Self::new(points, false)
    }

    pub fn circuit(points: Vec<LatticePoint>) -> Result<Self, LatticeError> {
        Self::new(points, true)
    }

    /// Expands an axis-aligned corner list into unit steps.
    pub fn from_corners(corners: &[LatticePoint], closed: bool) -> Result<Self, LatticeError> {
        let mut pts = Vec::new();
        for w in corners.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a.row != b.row && a.col != b.col {
                return Err(LatticeError::NotUnitStep(pts.len()));
            }
            let d = ((b.row as i64 - a.row as i64).signum(), (b.col as i64 - a.col as i64).signum());
            let len = a.l1(b) as i64;
            for k in 0..len {
                pts.push(a.offset(d, k).expect("corner path stays positive"));
            }
        }
        if let Some(&last) = corners.last() {
            pts.push(last);
        }
        pts.dedup();
        Self::new(pts, closed)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point at `i`, wrapping for closed walks.
    pub fn at(&self, i: usize) -> LatticePoint {
        if self.closed {
            self.points[i % self.points.len()]
        } else {
            self.points[i]
        }
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.points.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.points.len() - 1) % self.points.len()
    }

    pub fn index_of(&self, p: LatticePoint) -> Option<usize> {
        self.points.iter().position(|&q| q == p)
    }

    pub fn is_self_avoiding(&self) -> bool {
        let set: BTreeSet<_> = self.points.iter().collect();
        set.len() == self.points.len()
    }

    pub fn point_set(&self) -> BTreeSet<LatticePoint> {
        self.points.iter().copied().collect()
    }

    /// Twice the signed area in screen orientation; positive means counterclockwise.
    pub fn signed_area2(&self) -> i64 {
        let k = self.points.len();
        let mut s = 0i64;
        for i in 0..k {
            let a = self.points[i];
            let b = self.points[(i + 1) % k];
            let (ax, ay) = (a.col as i64, -(a.row as i64));
            let (bx, by) = (b.col as i64, -(b.row as i64));
            s += ax * by - bx * ay;
        }
        s
    }

    pub fn reversed(&self) -> Walk {
        let mut pts = self.points.clone();
        pts.reverse();
        Walk { points: pts, closed: self.closed }
    }

    /// Counterclockwise orientation starting at the row-major smallest point.
    pub fn normalized(&self) -> Walk {
        if !self.closed || self.points.len() < 3 {
            return self.clone();
        }
        let w = if self.signed_area2() < 0 { self.reversed() } else { self.clone() };
        let start = w
            .points
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| **p)
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut pts = w.points[start..].to_vec();
        pts.extend_from_slice(&w.points[..start]);
        Walk { points: pts, closed: true }
    }

    fn check_circuit(&self) -> Result<(), LatticeError> {
        if !self.closed {
            return Err(LatticeError::NotACircuit("walk is open".into()));
        }
        if self.points.len() < 4 {
            return Err(LatticeError::NotACircuit("fewer than four points".into()));
        }
        if !self.is_self_avoiding() {
            return Err(LatticeError::NotACircuit("self-intersecting".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct WalkJson {
    closed: bool,
    points: Vec<[usize; 2]>,
}

impl Walk {
    /// `{"closed": bool, "points": [[r, c], ...]}`.
    pub fn to_json(&self) -> String {
        let j = WalkJson { closed: self.closed, points: self.points.iter().map(|p| [p.row, p.col]).collect() };
        serde_json::to_string(&j).expect("walk serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, LatticeError> {
        let j: WalkJson = serde_json::from_str(s).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Walk::new(j.points.iter().map(|&[r, c]| LatticePoint::new(r, c)).collect(), j.closed)
    }
}

pub fn spans_all_indices(walk: &Walk, m: usize, n: usize) -> bool {
    let rows: BTreeSet<_> = walk.points.iter().map(|p| p.row).collect();
    let cols: BTreeSet<_> = walk.points.iter().map(|p| p.col).collect();
    (1..=m).all(|r| rows.contains(&r)) && (1..=n).all(|c| cols.contains(&c))
}

/// Splits the subgraph into walks. Components with a vertex of degree three
/// or more are rejected.
pub fn extract_circuits(g: &LatticeSubgraph) -> Result<Vec<Walk>, LatticeError> {
    let branching: Vec<_> = g.vertices.iter().copied().filter(|&p| g.degree(p) >= 3).collect();
    if !branching.is_empty() {
        return Err(LatticeError::AmbiguousDecomposition(branching));
    }
    let mut seen = BTreeSet::new();
    let mut walks = Vec::new();
    for &start in &g.vertices {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(p) = queue.pop_front() {
            comp.push(p);
            for q in g.neighbours(p) {
                if seen.insert(q) {
                    queue.push_back(q);
                }
            }
        }
        comp.sort();
        let ends: Vec<_> = comp.iter().copied().filter(|&p| g.degree(p) < 2).collect();
        let first = ends.first().copied().unwrap_or(comp[0]);
        let mut order = vec![first];
        let mut prev: Option<LatticePoint> = None;
        let mut cur = first;
        loop {
            let next = g
                .neighbours(cur)
                .into_iter()
                .filter(|&q| Some(q) != prev && !(q == first && order.len() < 3))
                .min();
            match next {
                Some(q) if q == first => break,
                Some(q) => {
                    order.push(q);
                    prev = Some(cur);
                    cur = q;
                }
                None => break,
            }
        }
        let closed = ends.is_empty() && order.len() >= 4;
        let w = Walk::new(order, closed)?;
        walks.push(if closed { w.normalized() } else { w });
    }
    Ok(walks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnKind {
    Convex,
    Reflex,
    Straight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TurnInfo {
    pub index: usize,
    pub point: LatticePoint,
    pub kind: TurnKind,
    pub incoming: Dir,
    pub outgoing: Dir,
}

pub fn classify_vertices(circuit: &Walk) -> Result<Vec<TurnInfo>, LatticeError> {
    circuit.check_circuit()?;
    let orient = circuit.signed_area2().signum();
    let k = circuit.len();
    Ok((0..k)
        .map(|i| {
            let a = circuit.points[circuit.prev(i)];
            let v = circuit.points[i];
            let b = circuit.points[circuit.next(i)];
            let (incoming, outgoing) = (step(a, v), step(v, b));
            let kind = if incoming == outgoing {
                TurnKind::Straight
            } else if turn_cross(incoming, outgoing) * orient > 0 {
                TurnKind::Convex
            } else {
                TurnKind::Reflex
            };
            TurnInfo { index: i, point: v, kind, incoming, outgoing }
        })
        .collect())
}

pub fn reflex_indices(circuit: &Walk) -> Result<Vec<usize>, LatticeError> {
    Ok(classify_vertices(circuit)?
        .into_iter()
        .filter(|t| t.kind == TurnKind::Reflex)
        .map(|t| t.index)
        .collect())
}

fn strict_inside(vertical_edges: &BTreeMap<usize, Vec<usize>>, p: LatticePoint) -> bool {
    vertical_edges
        .get(&p.row)
        .map_or(false, |cols| cols.iter().filter(|&&c| c < p.col).count() % 2 == 1)
}

fn vertical_edge_index(circuit: &Walk) -> BTreeMap<usize, Vec<usize>> {
    let mut idx: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let k = circuit.len();
    for i in 0..k {
        let a = circuit.points[i];
        let b = circuit.points[(i + 1) % k];
        if a.col == b.col {
            idx.entry(a.row.min(b.row)).or_default().push(a.col);
        }
    }
    idx
}

/// Points of the region inside or on the circuit.
pub fn interior_points(circuit: &Walk, m: usize, n: usize) -> Result<BTreeSet<LatticePoint>, LatticeError> {
    circuit.check_circuit()?;
    let on: BTreeSet<_> = circuit.point_set();
    let edges = vertical_edge_index(circuit);
    let mut out = BTreeSet::new();
    for r in 1..=m {
        for c in 1..=n {
            let p = LatticePoint::new(r, c);
            if on.contains(&p) || strict_inside(&edges, p) {
                out.insert(p);
            }
        }
    }
    Ok(out)
}

pub fn strict_interior_points(
    circuit: &Walk,
    m: usize,
    n: usize,
) -> Result<BTreeSet<LatticePoint>, LatticeError> {
    let on = circuit.point_set();
    Ok(interior_points(circuit, m, n)?.into_iter().filter(|p| !on.contains(p)).collect())
}

pub fn exterior_points(circuit: &Walk, m: usize, n: usize) -> Result<BTreeSet<LatticePoint>, LatticeError> {
    let int = interior_points(circuit, m, n)?;
    Ok((1..=m)
        .flat_map(|r| (1..=n).map(move |c| LatticePoint::new(r, c)))
        .filter(|p| !int.contains(p))
        .collect())
}

fn straight_between(walk: &Walk, i: usize, j: usize) -> bool {
    let (a, b) = (walk.at(i), walk.at(j));
    if a == b || (a.row != b.row && a.col != b.col) || a.l1(b) != j - i {
        return false;
    }
    let d = step(walk.at(i), walk.at(i + 1));
    (i..j).all(|k| step(walk.at(k), walk.at(k + 1)) == d)
}

/// Checks the corner pattern `(a,c),(b,c),(b,d),(a,d),(a,c)` with `a<b`, `c<d`.
/// Indices may reach `len` on a closed walk, which denotes the start again.
pub fn forms_rectangle(walk: &Walk, idx: [usize; 5]) -> Result<bool, LatticeError> {
    let limit = if walk.closed { walk.len() } else { walk.len().saturating_sub(1) };
    for &i in &idx {
        if i > limit {
            return Err(LatticeError::IndexOutOfRange { index: i, len: walk.len() });
        }
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(false);
    }
    let p: Vec<_> = idx.iter().map(|&i| walk.at(i)).collect();
    let (a, c) = (p[0].row, p[0].col);
    let (b, d) = (p[2].row, p[2].col);
    let pattern = a < b
        && c < d
        && p[1] == LatticePoint::new(b, c)
        && p[3] == LatticePoint::new(a, d)
        && p[4] == p[0];
    Ok(pattern && idx.windows(2).all(|w| straight_between(walk, w[0], w[1])))
}

/// Corners of a closed path that traces an axis-aligned rectangle, in any
/// orientation or starting point.
pub fn rectangle_of_closed_path(points: &[LatticePoint]) -> Option<[LatticePoint; 4]> {
    let k = points.len();
    if k < 4 {
        return None;
    }
    let mut corners = Vec::new();
    for i in 0..k {
        let a = points[(i + k - 1) % k];
        let v = points[i];
        let b = points[(i + 1) % k];
        if a.l1(v) != 1 || v.l1(b) != 1 {
            return None;
        }
        if step(a, v) != step(v, b) {
            corners.push(v);
        }
    }
    if corners.len() != 4 {
        return None;
    }
    let rmin = corners.iter().map(|p| p.row).min()?;
    let rmax = corners.iter().map(|p| p.row).max()?;
    let cmin = corners.iter().map(|p| p.col).min()?;
    let cmax = corners.iter().map(|p| p.col).max()?;
    let expect = [
        LatticePoint::new(rmin, cmin),
        LatticePoint::new(rmax, cmin),
        LatticePoint::new(rmax, cmax),
        LatticePoint::new(rmin, cmax),
    ];
    let set: BTreeSet<_> = points.iter().collect();
    let perimeter = 2 * (rmax - rmin) + 2 * (cmax - cmin);
    (expect.iter().all(|e| corners.contains(e)) && set.len() == k && k == perimeter).then_some(expect)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(r: usize, c: usize) -> LatticePoint {
        LatticePoint::new(r, c)
    }

    fn rect(r0: usize, c0: usize, r1: usize, c1: usize) -> Walk {
        Walk::from_corners(&[p(r0, c0), p(r1, c0), p(r1, c1), p(r0, c1), p(r0, c0)], true).unwrap()
    }

    fn boundary_mask(m: usize, n: usize) -> Mask {
        Mask::new(m, n, rect(1, 1, m, n).points).unwrap()
    }

    #[test]
    fn subgraph_small_cases() {
        let g = build_lattice_subgraph(&Mask::new(1, 1, [p(1, 1)]).unwrap());
        assert_eq!((g.vertices.len(), g.edges.len()), (1, 0));
        let g = build_lattice_subgraph(&Mask::full(2, 2).unwrap());
        assert_eq!((g.vertices.len(), g.edges.len()), (4, 4));
        let g = build_lattice_subgraph(&boundary_mask(3, 3));
        assert_eq!((g.vertices.len(), g.edges.len()), (8, 8));
    }

    #[test]
    fn extract_boundary_and_disjoint_squares() {
        let w = extract_circuits(&build_lattice_subgraph(&boundary_mask(3, 3))).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].closed);
        assert_eq!(w[0].len(), 8);
        assert!(w[0].signed_area2() > 0);

        let mut pts = rect(1, 1, 3, 3).points;
        pts.extend(rect(1, 5, 3, 7).points);
        let w = extract_circuits(&build_lattice_subgraph(&Mask::new(3, 7, pts).unwrap())).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|c| c.closed && c.len() == 8));
    }

    #[test]
    fn plus_shape_is_ambiguous() {
        let m = Mask::new(3, 3, [p(1, 2), p(2, 1), p(2, 2), p(2, 3), p(3, 2)]).unwrap();
        let err = extract_circuits(&build_lattice_subgraph(&m)).unwrap_err();
        assert_eq!(err, LatticeError::AmbiguousDecomposition(vec![p(2, 2)]));
    }

    #[test]
    fn open_path_extraction() {
        let m = Mask::new(2, 3, [p(1, 1), p(1, 2), p(1, 3), p(2, 3)]).unwrap();
        let w = extract_circuits(&build_lattice_subgraph(&m)).unwrap();
        assert_eq!(w.len(), 1);
        assert!(!w[0].closed);
        assert_eq!(w[0].points, vec![p(1, 1), p(1, 2), p(1, 3), p(2, 3)]);
    }

    #[test]
    fn classify_rectangle_and_l_shape() {
        let t = classify_vertices(&rect(1, 1, 3, 4)).unwrap();
        assert_eq!(t.iter().filter(|x| x.kind == TurnKind::Convex).count(), 4);
        assert_eq!(t.iter().filter(|x| x.kind == TurnKind::Reflex).count(), 0);

        let l = Walk::from_corners(&[p(1, 1), p(4, 1), p(4, 4), p(2, 4), p(2, 2), p(1, 2), p(1, 1)], true).unwrap();
        for w in [l.clone(), l.reversed()] {
            let t = classify_vertices(&w).unwrap();
            assert_eq!(t.iter().filter(|x| x.kind == TurnKind::Convex).count(), 5);
            let reflex: Vec<_> = t.iter().filter(|x| x.kind == TurnKind::Reflex).map(|x| x.point).collect();
            assert_eq!(reflex, vec![p(2, 2)]);
        }
    }

    #[test]
    fn classify_rejects_open_walks() {
        let w = Walk::open(vec![p(1, 1), p(1, 2)]).unwrap();
        assert!(matches!(classify_vertices(&w), Err(LatticeError::NotACircuit(_))));
    }

    #[test]
    fn interior_small_cases() {
        let i = interior_points(&rect(1, 1, 3, 3), 3, 3).unwrap();
        assert_eq!(i.len(), 9);
        assert_eq!(strict_interior_points(&rect(1, 1, 3, 3), 3, 3).unwrap(), BTreeSet::from([p(2, 2)]));
        let i = interior_points(&rect(2, 2, 3, 3), 4, 4).unwrap();
        assert_eq!(i.len(), 4);
        let e = exterior_points(&rect(2, 2, 3, 3), 4, 4).unwrap();
        assert_eq!(e.len(), 12);
    }

    #[test]
    fn spans_indices() {
        assert!(spans_all_indices(&rect(1, 1, 5, 6), 5, 6));
        assert!(!spans_all_indices(&rect(2, 2, 4, 4), 5, 5));
    }

    #[test]
    fn rectangle_pattern() {
        let r = rect(1, 1, 3, 4);
        assert!(forms_rectangle(&r, [0, 2, 5, 7, 10]).unwrap());
        assert!(!forms_rectangle(&r, [0, 2, 5, 7, 9]).unwrap());
        assert!(forms_rectangle(&r, [0, 2, 5, 7, 11]).is_err());

        let stair = Walk::from_corners(&[p(1, 1), p(3, 1), p(3, 3), p(5, 3), p(5, 5)], false).unwrap();
        assert!(!forms_rectangle(&stair, [0, 2, 4, 6, 8]).unwrap());

        let detour = Walk::from_corners(
            &[p(1, 1), p(4, 1), p(4, 3), p(3, 3), p(3, 4), p(4, 4), p(4, 5), p(1, 5), p(1, 1)],
            true,
        )
        .unwrap();
        let i3 = detour.index_of(p(4, 5)).unwrap();
        let i4 = detour.index_of(p(1, 5)).unwrap();
        assert!(!forms_rectangle(&detour, [0, 3, i3, i4, detour.len()]).unwrap());
    }

    #[test]
    fn closed_path_rectangle_detection() {
        let r = rect(2, 3, 4, 6);
        assert_eq!(
            rectangle_of_closed_path(&r.reversed().points),
            Some([p(2, 3), p(4, 3), p(4, 6), p(2, 6)])
        );
        let l = Walk::from_corners(&[p(1, 1), p(4, 1), p(4, 4), p(2, 4), p(2, 2), p(1, 2), p(1, 1)], true).unwrap();
        assert_eq!(rectangle_of_closed_path(&l.points), None);
    }

    #[test]
    fn mask_ascii_and_json_round_trip() {
        let m = boundary_mask(3, 4);
        assert_eq!(m.to_ascii(), "####\n#..#\n####\n");
        assert_eq!(Mask::from_ascii(&m.to_ascii()).unwrap(), m);
        assert_eq!(Mask::from_json(&m.to_json()).unwrap(), m);
        assert!(Mask::from_json(r#"{"m":2,"n":2,"support":[[3,1]]}"#).is_err());
        assert!(Mask::from_ascii("#.\n#").is_err());
        let w = Walk::from_corners(&[p(1, 1), p(1, 3), p(3, 3), p(3, 1), p(1, 1)], true).unwrap();
        assert_eq!(Walk::from_json(&w.to_json()).unwrap(), w);
        assert!(Walk::from_json(r#"{"closed":false,"points":[[1,1],[2,2]]}"#).is_err());
    }
}
