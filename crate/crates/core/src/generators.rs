//! Mask families with known completability verdicts.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lattice::{LatticePoint, Mask, Walk};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("dimensions {m}x{n} too small for this family")]
    DimensionTooSmall { m: usize, n: usize },
    #[error("step profile does not fit the region: {0}")]
    ProfileMismatch(String),
}

fn p(r: usize, c: usize) -> LatticePoint {
    LatticePoint::new(r, c)
}

fn circuit_from(corners: &[LatticePoint]) -> Walk {
    Walk::from_corners(corners, true).expect("generator corners are axis aligned").normalized()
}

fn mask_of(m: usize, n: usize, walks: &[&Walk]) -> Mask {
    Mask::new(m, n, walks.iter().flat_map(|w| w.points.iter().copied())).expect("generator points in region")
}

pub fn gen_boundary_cycle(m: usize, n: usize) -> Result<(Mask, Walk), GeneratorError> {
    if m < 3 || n < 3 {
        return Err(GeneratorError::DimensionTooSmall { m, n });
    }
    let w = circuit_from(&[p(1, 1), p(m, 1), p(m, n), p(1, n), p(1, 1)]);
    Ok((mask_of(m, n, &[&w]), w))
}

/// Staircase polygon: from `(1,1)` each `(width, height)` moves right then
/// down, the walk finishes at `(m,n)` and returns along the bottom row and
/// the first column.
pub fn gen_staircase_cycle(
    m: usize,
    n: usize,
    profile: &[(usize, usize)],
) -> Result<(Mask, Walk), GeneratorError> {
    if m < 3 || n < 3 {
        return Err(GeneratorError::DimensionTooSmall { m, n });
    }
    if profile.iter().any(|&(w, h)| w < 2 || h < 2) {
        return Err(GeneratorError::ProfileMismatch("steps must be at least 2 wide and high".into()));
    }
    let (mut r, mut c) = (1usize, 1usize);
    let mut corners = vec![p(1, 1)];
    for &(w, h) in profile {
        c += w;
        corners.push(p(r, c));
        r += h;
        corners.push(p(r, c));
    }
    if c + 2 > n || r + 2 > m {
        return Err(GeneratorError::ProfileMismatch(format!(
            "profile reaches ({r},{c}) leaving no final cell of size 3 in {m}x{n}"
        )));
    }
    corners.extend([p(r, n), p(m, n), p(m, 1), p(1, 1)]);
    let w = circuit_from(&corners);
    Ok((mask_of(m, n, &[&w]), w))
}

/// Diagonal profile with square steps of side 3 filling an `m x n` region.
pub fn diagonal_profile(m: usize, n: usize) -> Vec<(usize, usize)> {
    let k = (m.min(n).saturating_sub(4)) / 3;
    vec![(3, 3); k]
}

/// Circuit whose two notch vertices cannot be closed into supported rectangles.
pub fn gen_nonremovable_counterexample(m: usize, n: usize) -> Result<(Mask, Walk), GeneratorError> {
    if m < 6 || n < 6 {
        return Err(GeneratorError::DimensionTooSmall { m, n });
    }
    let w = circuit_from(&[
        p(3, 1),
        p(m - 1, 1),
        p(m - 1, 3),
        p(m, 3),
        p(m, n - 1),
        p(m - 1, n - 1),
        p(m - 1, n),
        p(3, n),
        p(3, n - 2),
        p(1, n - 2),
        p(1, 2),
        p(3, 2),
        p(3, 1),
    ]);
    Ok((mask_of(m, n, &[&w]), w))
}

/// Maps `(x, y)` drawing coordinates on a `size x size` grid to lattice points.
fn from_drawing(pts: &[(usize, usize)], size: usize) -> Vec<LatticePoint> {
    pts.iter().map(|&(x, y)| p(size - y, x + 1)).collect()
}

/// 7x7 polygon whose reflex vertices are all finitely removable.
pub fn notched_polygon_removable() -> (Mask, Walk) {
    let pts = [
        (0, 1), (1, 1), (1, 0), (5, 0), (5, 1), (6, 1), (6, 4), (4, 4), (4, 5),
        (3, 5), (3, 6), (2, 6), (2, 5), (1, 5), (1, 4), (0, 4), (0, 1),
    ];
    let w = circuit_from(&from_drawing(&pts, 7));
    (mask_of(7, 7, &[&w]), w)
}

/// 7x7 polygon with deep notches that cannot be closed.
pub fn notched_polygon_blocked() -> (Mask, Walk) {
    let pts = [
        (0, 1), (2, 1), (2, 0), (5, 0), (5, 1), (6, 1), (6, 4), (4, 4), (4, 6),
        (1, 6), (1, 4), (0, 4), (0, 1),
    ];
    let w = circuit_from(&from_drawing(&pts, 7));
    (mask_of(7, 7, &[&w]), w)
}

fn dedup_corners(mut cs: Vec<LatticePoint>) -> Vec<LatticePoint> {
    cs.dedup();
    // drop collinear interior corners
    let mut out: Vec<LatticePoint> = Vec::new();
    for c in cs {
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if (a.row == b.row && b.row == c.row) || (a.col == b.col && b.col == c.col) {
                out.pop();
            }
        }
        out.push(c);
    }
    out
}

/// Output of [`gen_nested_staircase_family`].
#[derive(Clone, Debug)]
pub struct NestedFamily {
    pub mask: Mask,
    pub walks: Vec<Walk>,
    pub auxiliary: Vec<Walk>,
    pub gap: usize,
}

/// `r + 1` spanning walks: the left/bottom boundary followed by `r`
/// staircases, each a translate of the previous one by `(-g, +g)` toward the
/// top-right corner, plus connector segments that keep shared row and column
/// indices covered.
pub fn gen_nested_staircase_family(
    m: usize,
    n: usize,
    r: usize,
    min_cell: usize,
) -> Result<NestedFamily, GeneratorError> {
    let g = min_cell.max(r + 1);
    if r < 1 || m < r * g + 2 || n < r * g + 2 {
        return Err(GeneratorError::DimensionTooSmall { m, n });
    }
    let two_step = m >= (r + 1) * g + 2 && n >= (r + 1) * g + 2;
    let mut walks = vec![Walk::from_corners(&[p(1, 1), p(m, 1), p(m, n)], false).expect("boundary walk")];
    let mut meta = Vec::new();
    for l in 0..r {
        let t = l * g;
        let e = 1 + g + t;
        let x = m - g - t;
        let cs = if two_step {
            let mid_row = m - 2 * g - t;
            let mid_col = (1 + 2 * g + t).min(n);
            vec![p(1, 1), p(1, e), p(mid_row, e), p(mid_row, mid_col), p(x, mid_col), p(x, n), p(m, n)]
        } else {
            vec![p(1, 1), p(1, e), p(x, e), p(x, n), p(m, n)]
        };
        let cs = dedup_corners(cs);
        let first_run_end = cs[2].row;
        walks.push(Walk::from_corners(&cs, false).expect("staircase walk"));
        meta.push((e, x, first_run_end));
    }
    let mut auxiliary = Vec::new();
    for (l, &(e, x, first_run_end)) in meta.iter().enumerate().take(r.saturating_sub(1)) {
        let a = (2 + l).min(first_run_end);
        let row_aux: Vec<_> = (1..=e).rev().map(|c| p(a, c)).collect();
        auxiliary.push(Walk::open(row_aux).expect("connector"));
        let b = n - 1 - l;
        let col_aux: Vec<_> = (x..=m).map(|rr| p(rr, b)).collect();
        auxiliary.push(Walk::open(col_aux).expect("connector"));
    }
    let all: Vec<&Walk> = walks.iter().chain(auxiliary.iter()).collect();
    Ok(NestedFamily { mask: mask_of(m, n, &all), walks, auxiliary, gap: g })
}

/// Circuit formed by the boundary walk and the outermost staircase of a
/// nested family.
pub fn family_outer_circuit(fam: &NestedFamily) -> Walk {
    let outer = fam.walks.last().expect("family has walks");
    let mut pts = fam.walks[0].points.clone();
    let inner: Vec<_> = outer.points.iter().rev().skip(1).copied().collect();
    pts.extend(inner.into_iter().take(outer.len() - 2));
    Walk::circuit(pts).expect("outer circuit closes").normalized()
}

/// Row-major point set helper used by tests and rendering.
pub fn support_points(walks: &[Walk]) -> BTreeSet<LatticePoint> {
    walks.iter().flat_map(|w| w.points.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{classify_vertices, spans_all_indices, TurnKind};

    fn reflex(w: &Walk) -> Vec<LatticePoint> {
        classify_vertices(w)
            .unwrap()
            .into_iter()
            .filter(|t| t.kind == TurnKind::Reflex)
            .map(|t| t.point)
            .collect()
    }

    #[test]
    fn boundary_sizes() {
        assert_eq!(gen_boundary_cycle(3, 3).unwrap().0.support.len(), 8);
        assert_eq!(gen_boundary_cycle(6, 6).unwrap().0.support.len(), 20);
        assert_eq!(gen_boundary_cycle(2, 5), Err(GeneratorError::DimensionTooSmall { m: 2, n: 5 }));
    }

    #[test]
    fn staircase_profiles() {
        let (_, w) = gen_staircase_cycle(6, 6, &[(2, 2)]).unwrap();
        assert_eq!(reflex(&w), vec![p(3, 3)]);
        assert!(spans_all_indices(&w, 6, 6));
        let (_, w) = gen_staircase_cycle(10, 10, &diagonal_profile(10, 10)).unwrap();
        assert_eq!(reflex(&w).len(), 2);
        assert!(w.is_self_avoiding() && spans_all_indices(&w, 10, 10));
        assert!(matches!(gen_staircase_cycle(10, 10, &[(5, 3), (5, 3)]), Err(GeneratorError::ProfileMismatch(_))));
    }

    #[test]
    fn counterexample_sizes() {
        assert!(gen_nonremovable_counterexample(5, 5).is_err());
        let (mask, w) = gen_nonremovable_counterexample(6, 6).unwrap();
        assert!(spans_all_indices(&w, 6, 6));
        assert_eq!(mask.support.len(), w.len());
        assert_eq!(reflex(&w).len(), 4);
    }

    #[test]
    fn panels_are_simple() {
        let (_, l) = notched_polygon_removable();
        assert_eq!(reflex(&l).len(), 6);
        let (_, r) = notched_polygon_blocked();
        assert_eq!(reflex(&r).len(), 4);
    }

    #[test]
    fn nested_family_shape() {
        let fam = gen_nested_staircase_family(20, 20, 3, 4).unwrap();
        assert_eq!(fam.walks.len(), 4);
        assert!(fam.walks.iter().all(|w| spans_all_indices(w, 20, 20) && w.is_self_avoiding()));
        assert_eq!(fam.auxiliary.len(), 4);
        assert!(gen_nested_staircase_family(6, 6, 3, 4).is_err());
        let small = gen_nested_staircase_family(10, 10, 2, 3).unwrap();
        assert_eq!(small.walks.len(), 3);
        let c = family_outer_circuit(&small);
        assert!(spans_all_indices(&c, 10, 10));
    }
}
