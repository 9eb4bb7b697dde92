#![allow(dead_code)]

use std::collections::BTreeSet;

use latcomp::{LatticePoint, Mask, Walk};

pub fn p(r: usize, c: usize) -> LatticePoint {
    LatticePoint::new(r, c)
}

/// Calls `f` once for every simple cycle of the `m x n` grid graph.
///
/// Each cycle is found from its row-major smallest vertex, leaving to the
/// right and returning from below, so no cycle is visited twice.
pub fn for_each_cycle(m: usize, n: usize, mut f: impl FnMut(&[LatticePoint])) {
    assert!(m * n <= 64);
    let id = |r: usize, c: usize| (r - 1) * n + (c - 1);
    let mut path = Vec::with_capacity(m * n);
    for sr in 1..m {
        for sc in 1..n {
            let start = id(sr, sc);
            let close = id(sr + 1, sc);
            path.clear();
            path.push(p(sr, sc));
            path.push(p(sr, sc + 1));
            let used = (1u64 << start) | (1u64 << id(sr, sc + 1));
            dfs(m, n, start, close, used, &mut path, &mut f);
        }
    }
}

fn dfs(
    m: usize,
    n: usize,
    start: usize,
    close: usize,
    used: u64,
    path: &mut Vec<LatticePoint>,
    f: &mut impl FnMut(&[LatticePoint]),
) {
    let cur = *path.last().unwrap();
    let id = |q: LatticePoint| (q.row - 1) * n + (q.col - 1);
    if id(cur) == close {
        f(path);
        return;
    }
    let mut nbrs = [None; 4];
    if cur.row > 1 {
        nbrs[0] = Some(p(cur.row - 1, cur.col));
    }
    if cur.row < m {
        nbrs[1] = Some(p(cur.row + 1, cur.col));
    }
    if cur.col > 1 {
        nbrs[2] = Some(p(cur.row, cur.col - 1));
    }
    if cur.col < n {
        nbrs[3] = Some(p(cur.row, cur.col + 1));
    }
    for q in nbrs.into_iter().flatten() {
        let k = id(q);
        if k <= start || used & (1 << k) != 0 {
            continue;
        }
        path.push(q);
        dfs(m, n, start, close, used | (1 << k), path, f);
        path.pop();
    }
}

pub fn full_mask(m: usize, n: usize) -> Mask {
    Mask::full(m, n).unwrap()
}

/// Twice the signed area in the frame x = col, y = -row.
fn area2(pts: &[LatticePoint]) -> i64 {
    let k = pts.len();
    (0..k)
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % k]);
            let (x0, y0) = (a.col as i64, -(a.row as i64));
            let (x1, y1) = (b.col as i64, -(b.row as i64));
            x0 * y1 - x1 * y0
        })
        .sum()
}

/// Indices of reflex vertices, by cross product against the orientation.
pub fn reflex_oracle(pts: &[LatticePoint]) -> Vec<usize> {
    let k = pts.len();
    let sign = area2(pts).signum();
    (0..k)
        .filter(|&i| {
            let (a, v, b) = (pts[(i + k - 1) % k], pts[i], pts[(i + 1) % k]);
            let d1 = (v.col as i64 - a.col as i64, a.row as i64 - v.row as i64);
            let d2 = (b.col as i64 - v.col as i64, v.row as i64 - b.row as i64);
            let cross = d1.0 * d2.1 - d1.1 * d2.0;
            cross * sign < 0
        })
        .collect()
}

pub fn convex_count(pts: &[LatticePoint]) -> usize {
    let k = pts.len();
    let sign = area2(pts).signum();
    (0..k)
        .filter(|&i| {
            let (a, v, b) = (pts[(i + k - 1) % k], pts[i], pts[(i + 1) % k]);
            let d1 = (v.col as i64 - a.col as i64, a.row as i64 - v.row as i64);
            let d2 = (b.col as i64 - v.col as i64, v.row as i64 - b.row as i64);
            (d1.0 * d2.1 - d1.1 * d2.0) * sign > 0
        })
        .count()
}

fn line(a: LatticePoint, b: LatticePoint) -> Vec<LatticePoint> {
    if a.row == b.row {
        (a.col.min(b.col)..=a.col.max(b.col)).map(|c| p(a.row, c)).collect()
    } else {
        (a.row.min(b.row)..=a.row.max(b.row)).map(|r| p(r, a.col)).collect()
    }
}

/// Brute-force removability verdict: the first condition (1..=4) that holds
/// and its rectangle `(r0, r1, c0, c1)`.
///
/// For each prolonged edge the facing point is found by scanning the ray.
/// Every rectangle containing the walk from the vertex to the facing point
/// (in the given direction) is enumerated, and accepted when that walk plus
/// the segment back to the vertex is exactly its boundary. Every companion
/// offset `K` (other than 0 and the far side) is then tried.
pub fn removability_oracle(
    pts: &[LatticePoint],
    mask: &Mask,
    v: usize,
) -> Option<(u8, (usize, usize, usize, usize))> {
    let (m, n) = (mask.m, mask.n);
    let mut index = vec![usize::MAX; (m + 2) * (n + 2)];
    for (i, q) in pts.iter().enumerate() {
        index[q.row * (n + 2) + q.col] = i;
    }
    oracle_indexed(pts, &index, mask, v)
}

fn oracle_indexed(
    pts: &[LatticePoint],
    index: &[usize],
    mask: &Mask,
    v: usize,
) -> Option<(u8, (usize, usize, usize, usize))> {
    let k = pts.len();
    let (m, n) = (mask.m as i64, mask.n as i64);
    let at = |r: i64, c: i64| index[(r * (n + 2) + c) as usize];
    let w = pts[v];
    let (a, b) = (pts[(v + k - 1) % k], pts[(v + 1) % k]);
    let away = |u: LatticePoint| (w.row as i64 - u.row as i64, w.col as i64 - u.col as i64);
    let rays = [away(a), away(b)];
    let vertical = *rays.iter().find(|d| d.0 != 0).unwrap();
    let horizontal = *rays.iter().find(|d| d.1 != 0).unwrap();
    let inside = |r: i64, c: i64| r >= 1 && c >= 1 && r <= m && c <= n;
    for (axis, dir) in [(0u8, vertical), (1u8, horizontal)] {
        let mut t = 1;
        let fi = loop {
            let (r, c) = (w.row as i64 + dir.0 * t, w.col as i64 + dir.1 * t);
            if !inside(r, c) {
                break None;
            }
            if at(r, c) != usize::MAX {
                break Some(at(r, c));
            }
            t += 1;
        };
        let Some(fi) = fi else { continue };
        let f = pts[fi];
        let side = line(w, f);
        let gap = side.len() - 2;
        for s in 0u8..2 {
            let step = if s == 0 { 1 } else { k - 1 };
            let mut sub = vec![w];
            let mut i = v;
            while i != fi {
                i = (i + step) % k;
                sub.push(pts[i]);
            }
            let lo_r = sub.iter().map(|q| q.row).min().unwrap();
            let hi_r = sub.iter().map(|q| q.row).max().unwrap();
            let lo_c = sub.iter().map(|q| q.col).min().unwrap();
            let hi_c = sub.iter().map(|q| q.col).max().unwrap();
            let mut found = None;
            for r0 in 1..=lo_r {
                for r1 in hi_r.max(r0 + 1)..=mask.m {
                    for c0 in 1..=lo_c {
                        for c1 in hi_c.max(c0 + 1)..=mask.n {
                            let on_side = if axis == 0 { w.col == c0 || w.col == c1 } else { w.row == r0 || w.row == r1 };
                            if !on_side || sub.len() + gap != 2 * (r1 - r0) + 2 * (c1 - c0) {
                                continue;
                            }
                            // distinct points, all on the boundary, with the right count
                            let on_bd = |q: &LatticePoint| q.row == r0 || q.row == r1 || q.col == c0 || q.col == c1;
                            let along = |x: &[LatticePoint]| {
                                (x[0].row == x[1].row && (x[0].row == r0 || x[0].row == r1))
                                    || (x[0].col == x[1].col && (x[0].col == c0 || x[0].col == c1))
                            };
                            if sub.iter().all(on_bd) && side.iter().all(on_bd) && sub.windows(2).all(along) {
                                found = Some((r0, r1, c0, c1));
                            }
                        }
                    }
                }
            }
            let Some((r0, r1, c0, c1)) = found else { continue };
            let far = if axis == 0 {
                (if w.col == c0 { c1 } else { c0 }) as i64 - w.col as i64
            } else {
                (if w.row == r0 { r1 } else { r0 }) as i64 - w.row as i64
            };
            let span = m.max(n);
            let companion = (-span..=span).filter(|&kk| kk != 0 && kk != far).any(|kk| {
                side.iter().all(|q| {
                    let (rr, cc) =
                        if axis == 0 { (q.row as i64, q.col as i64 + kk) } else { (q.row as i64 + kk, q.col as i64) };
                    inside(rr, cc) && mask.contains(p(rr as usize, cc as usize))
                })
            });
            if companion {
                return Some((2 * axis + s + 1, (r0, r1, c0, c1)));
            }
        }
    }
    None
}

/// Lattice points inside or on the circuit, by 4-connected flood fill from
/// outside on a doubled grid where the circuit's edges are walls.
pub fn flood_interior(pts: &[LatticePoint], m: usize, n: usize) -> BTreeSet<LatticePoint> {
    // doubled coordinates with a one-cell pad on each side
    let (h, w) = (2 * m + 3, 2 * n + 3);
    let mut wall = vec![false; h * w];
    let at = |q: LatticePoint| (2 * q.row, 2 * q.col);
    let k = pts.len();
    for i in 0..k {
        let (a, b) = (at(pts[i]), at(pts[(i + 1) % k]));
        wall[a.0 * w + a.1] = true;
        wall[((a.0 + b.0) / 2) * w + (a.1 + b.1) / 2] = true;
    }
    let mut seen = vec![false; h * w];
    let mut stack = vec![(0usize, 0usize)];
    seen[0] = true;
    while let Some((r, c)) = stack.pop() {
        let mut push = |rr: usize, cc: usize| {
            let i = rr * w + cc;
            if !wall[i] && !seen[i] {
                seen[i] = true;
                stack.push((rr, cc));
            }
        };
        if r > 0 {
            push(r - 1, c);
        }
        if r + 1 < h {
            push(r + 1, c);
        }
        if c > 0 {
            push(r, c - 1);
        }
        if c + 1 < w {
            push(r, c + 1);
        }
    }
    let mut out = BTreeSet::new();
    for r in 1..=m {
        for c in 1..=n {
            let (rr, cc) = at(p(r, c));
            if !seen[rr * w + cc] {
                out.insert(p(r, c));
            }
        }
    }
    out
}

pub fn walk_of(pts: &[LatticePoint]) -> Walk {
    Walk::circuit(pts.to_vec()).unwrap()
}

#[derive(Debug, Default)]
pub struct SweepStats {
    pub circuits: usize,
    pub reflex_vertices: usize,
    pub removable: usize,
    pub removability_mismatches: Vec<String>,
    pub interior_mismatches: Vec<String>,
    pub turn_count_mismatches: Vec<String>,
}

/// Exhaustive comparison of the library against the oracles on every
/// circuit of every region up to `max x max`, with full-support masks.
pub fn sweep(max: usize) -> SweepStats {
    use latcomp::lattice::{classify_vertices, interior_points, TurnKind};
    use latcomp::removability::is_1_removable;
    let mut st = SweepStats::default();
    for m in 2..=max {
        for n in 2..=max {
            let mask = full_mask(m, n);
            let mut index = vec![usize::MAX; (m + 2) * (n + 2)];
            for_each_cycle(m, n, |pts| {
                st.circuits += 1;
                index.iter_mut().for_each(|x| *x = usize::MAX);
                for (i, q) in pts.iter().enumerate() {
                    index[q.row * (n + 2) + q.col] = i;
                }
                let walk = walk_of(pts);
                let interior = interior_points(&walk, m, n).unwrap();
                if interior != flood_interior(pts, m, n) {
                    st.interior_mismatches.push(format!("{m}x{n} {pts:?}"));
                }
                let turns = classify_vertices(&walk).unwrap();
                let reflex: Vec<usize> =
                    turns.iter().enumerate().filter(|(_, t)| t.kind == TurnKind::Reflex).map(|(i, _)| i).collect();
                let convex = turns.iter().filter(|t| t.kind == TurnKind::Convex).count();
                if reflex != reflex_oracle(pts) || convex != convex_count(pts) || convex != reflex.len() + 4 {
                    st.turn_count_mismatches.push(format!("{m}x{n} {pts:?}"));
                }
                for &v in &reflex {
                    st.reflex_vertices += 1;
                    let got = is_1_removable(&walk, &mask, v).unwrap().map(|w| {
                        let [a, _, c, _] = w.corners;
                        (w.condition, (a.row, c.row, a.col, c.col))
                    });
                    if got.is_some() {
                        st.removable += 1;
                    }
                    let want = oracle_indexed(pts, &index, &mask, v);
                    if got != want {
                        st.removability_mismatches.push(format!("{m}x{n} v={v} got={got:?} want={want:?} {pts:?}"));
                    }
                }
            });
        }
    }
    st
}
