//! Deterministic SVG and ASCII drawings of masks, circuits and walks.

use std::collections::BTreeMap;
use std::fmt::Write;

use latcomp::removability::{Level, RemovabilityReport};
use latcomp::{LatticePoint, Mask, Walk};

const CELL: usize = 24;
const MARGIN: usize = 16;

/// Everything a drawing shows.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub m: usize,
    pub n: usize,
    pub support: Vec<LatticePoint>,
    pub circuits: Vec<Walk>,
    pub walks: Vec<Walk>,
    pub auxiliary: Vec<Walk>,
    /// Witness rectangles `(level, corners)` in schedule order.
    pub shading: Vec<(usize, [LatticePoint; 4])>,
    pub levels: BTreeMap<LatticePoint, Level>,
}

impl Scene {
    pub fn from_analysis(mask: &Mask, circuits: &[(Walk, RemovabilityReport)]) -> Self {
        let mut s = Self::bare(mask);
        for (w, rep) in circuits {
            s.circuits.push(w.clone());
            s.shading.extend(rep.schedule.iter().map(|e| (e.level, e.witness.corners)));
            s.levels.extend(rep.levels.iter().map(|(p, l)| (*p, *l)));
        }
        s
    }

    pub fn from_walks(mask: &Mask, walks: Vec<Walk>, auxiliary: Vec<Walk>) -> Self {
        Self { walks, auxiliary, ..Self::bare(mask) }
    }

    fn bare(mask: &Mask) -> Self {
        Self { m: mask.m, n: mask.n, support: mask.support.iter().copied().collect(), ..Self::default() }
    }

    pub fn max_level(&self) -> usize {
        self.shading.iter().map(|(l, _)| *l).max().unwrap_or(0)
    }
}

fn xy(p: LatticePoint) -> (usize, usize) {
    (MARGIN + (p.col - 1) * CELL, MARGIN + (p.row - 1) * CELL)
}

fn points_attr(w: &Walk) -> String {
    w.points.iter().map(|&p| xy(p)).map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(" ")
}

/// Gray for a removal level; deeper levels are lighter.
fn level_fill(level: usize, max: usize) -> String {
    let g = 150 + (level.saturating_sub(1) * 90) / max.max(1);
    format!("#{g:02x}{g:02x}{g:02x}")
}

pub fn svg(s: &Scene) -> String {
    let w = 2 * MARGIN + (s.n - 1) * CELL;
    let h = 2 * MARGIN + (s.m - 1) * CELL;
    let mut o = String::new();
    let _ = writeln!(o, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(o, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let max = s.max_level();
    if !s.shading.is_empty() {
        let _ = writeln!(o, r#"<g class="levels" stroke="none">"#);
        for (level, [a, _, c, _]) in &s.shading {
            let ((x0, y0), (x1, y1)) = (xy(*a), xy(*c));
            let _ = writeln!(
                o,
                r#"<rect class="level-{level}" x="{x0}" y="{y0}" width="{}" height="{}" fill="{}"/>"#,
                x1 - x0,
                y1 - y0,
                level_fill(*level, max)
            );
        }
        let _ = writeln!(o, "</g>");
    }
    let _ = writeln!(o, r##"<g class="grid" stroke="#bbbbbb" stroke-width="1">"##);
    for r in 1..=s.m {
        let (x0, y) = xy(LatticePoint::new(r, 1));
        let (x1, _) = xy(LatticePoint::new(r, s.n));
        let _ = writeln!(o, r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}"/>"#);
    }
    for c in 1..=s.n {
        let (x, y0) = xy(LatticePoint::new(1, c));
        let (_, y1) = xy(LatticePoint::new(s.m, c));
        let _ = writeln!(o, r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}"/>"#);
    }
    let _ = writeln!(o, "</g>");
    let _ = writeln!(o, r#"<g class="circuit" stroke="black" stroke-width="3" fill="none">"#);
    for c in &s.circuits {
        let tag = if c.closed { "polygon" } else { "polyline" };
        let _ = writeln!(o, r#"<{tag} points="{}"/>"#, points_attr(c));
    }
    for wk in &s.walks {
        let _ = writeln!(o, r#"<polyline points="{}"/>"#, points_attr(wk));
    }
    let _ = writeln!(o, "</g>");
    if !s.auxiliary.is_empty() {
        let _ = writeln!(o, r##"<g class="auxiliary" stroke="#d62728" stroke-width="3" fill="none">"##);
        for a in &s.auxiliary {
            let _ = writeln!(o, r#"<polyline points="{}"/>"#, points_attr(a));
        }
        let _ = writeln!(o, "</g>");
    }
    let _ = writeln!(o, r#"<g class="support" fill="black">"#);
    for &p in &s.support {
        let (x, y) = xy(p);
        let _ = writeln!(o, r#"<circle cx="{x}" cy="{y}" r="3"/>"#);
    }
    let _ = writeln!(o, "</g>");
    if !s.levels.is_empty() {
        let _ = writeln!(o, r#"<g class="reflex" font-family="monospace" font-size="10">"#);
        for (p, l) in &s.levels {
            let (x, y) = xy(*p);
            let label = match l {
                Level::Finite(k) => k.to_string(),
                Level::NotRemovable => "x".into(),
            };
            let _ = writeln!(o, r#"<text x="{}" y="{}">{label}</text>"#, x + 4, y - 4);
        }
        let _ = writeln!(o, "</g>");
    }
    o.push_str("</svg>\n");
    o
}

/// One character per lattice point: `.` outside the support, `#` inside;
/// reflex vertices show their removal level (`X` when not removable); main
/// walk points show the walk index, auxiliary points `*`.
pub fn ascii(s: &Scene) -> String {
    let mut grid = vec![vec!['.'; s.n]; s.m];
    let mut put = |p: LatticePoint, ch: char| grid[p.row - 1][p.col - 1] = ch;
    for &p in &s.support {
        put(p, '#');
    }
    for a in &s.auxiliary {
        a.points.iter().for_each(|&p| put(p, '*'));
    }
    for (k, w) in s.walks.iter().enumerate() {
        let ch = char::from_digit((k % 10) as u32, 10).expect("digit");
        w.points.iter().for_each(|&p| put(p, ch));
    }
    for (p, l) in &s.levels {
        let ch = match l {
            Level::Finite(k) if *k < 10 => char::from_digit(*k as u32, 10).expect("digit"),
            Level::Finite(_) => '+',
            Level::NotRemovable => 'X',
        };
        put(*p, ch);
    }
    grid.into_iter().map(|row| row.into_iter().collect::<String>() + "\n").collect()
}
