//! Square minors with one or two unknown entries.

use serde::{Deserialize, Serialize};

use crate::error::CompletionError;
use crate::lattice::LatticePoint;
use crate::scalar::Scalar;

/// Rows `I` and columns `J` of an `(r+1) x (r+1)` minor. `unknown` is the
/// entry being solved; `resolved` is a previously solved entry that is
/// eliminated instead of substituted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorSpec {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub unknown: LatticePoint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved: Option<LatticePoint>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, unknown: LatticePoint) -> Self {
        Self { rows, cols, unknown, resolved: None }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.rows.iter().flat_map(move |&r| self.cols.iter().map(move |&c| LatticePoint::new(r, c)))
    }

    fn position(&self, p: LatticePoint) -> Option<(usize, usize)> {
        Some((self.rows.iter().position(|&r| r == p.row)?, self.cols.iter().position(|&c| c == p.col)?))
    }

    pub fn validate(&self) -> Result<(), CompletionError> {
        let k = self.rows.len();
        if k == 0 || self.cols.len() != k {
            return Err(CompletionError::InvalidMinor("minor must be square and nonempty".into()));
        }
        let distinct = |v: &Vec<usize>| v.windows(2).all(|w| w[0] < w[1]);
        if !distinct(&self.rows) || !distinct(&self.cols) {
            return Err(CompletionError::InvalidMinor("indices must be strictly increasing".into()));
        }
        if self.position(self.unknown).is_none() {
            return Err(CompletionError::InvalidMinor(format!("unknown {} outside minor", self.unknown)));
        }
        if let Some(x1) = self.resolved {
            if x1 == self.unknown || self.position(x1).is_none() {
                return Err(CompletionError::InvalidMinor(format!("resolved entry {x1} invalid")));
            }
        }
        Ok(())
    }
}

/// Determinant by Gaussian elimination. Floats pivot on the largest
/// magnitude, exact scalars on the first nonzero entry.
pub fn determinant<S: Scalar>(mut a: Vec<Vec<S>>) -> S {
    let k = a.len();
    let mut det = S::one();
    for c in 0..k {
        let pivot = if S::is_exact() {
            (c..k).find(|&r| !a[r][c].is_zero())
        } else {
            (c..k)
                .filter(|&r| !a[r][c].is_zero())
                .max_by(|&x, &y| a[x][c].magnitude().total_cmp(&a[y][c].magnitude()))
        };
        let Some(pr) = pivot else {
            return S::zero();
        };
        if pr != c {
            a.swap(pr, c);
            det = -det;
        }
        let pv = a[c][c].clone();
        det = det * pv.clone();
        for r in c + 1..k {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / pv.clone();
            for cc in c..k {
                let d = f.clone() * a[c][cc].clone();
                a[r][cc] = a[r][cc].clone() - d;
            }
        }
    }
    det
}

fn drop_row_col<S: Clone>(a: &[Vec<S>], r: usize, c: usize) -> Vec<Vec<S>> {
    a.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
        .collect()
}

/// Cofactor expansion along row `a`: `det = alpha * x + beta` where `x` is
/// the entry at `(a, b)`. Also returns the largest cofactor magnitude.
pub fn linear_form<S: Scalar>(mat: &[Vec<S>], a: usize, b: usize) -> (S, S, f64) {
    let k = mat.len();
    let mut alpha = S::zero();
    let mut beta = S::zero();
    let mut scale = 0.0f64;
    for c in 0..k {
        let mut cof = if k == 1 { S::one() } else { determinant(drop_row_col(mat, a, c)) };
        if (a + c) % 2 == 1 {
            cof = -cof;
        }
        scale = scale.max(cof.magnitude());
        if c == b {
            alpha = cof;
        } else {
            beta = beta + mat[a][c].clone() * cof;
        }
    }
    (alpha, beta, scale)
}

/// Builds the numeric minor; `value` supplies known entries, `subs` overrides.
pub fn minor_values<S: Scalar>(
    spec: &MinorSpec,
    value: &dyn Fn(LatticePoint) -> Option<S>,
    subs: &[(LatticePoint, S)],
) -> Result<Vec<Vec<S>>, CompletionError> {
    spec.rows
        .iter()
        .map(|&r| {
            spec.cols
                .iter()
                .map(|&c| {
                    let p = LatticePoint::new(r, c);
                    subs.iter()
                        .find(|(q, _)| *q == p)
                        .map(|(_, v)| v.clone())
                        .or_else(|| value(p))
                        .ok_or_else(|| CompletionError::InvalidMinor(format!("entry {p} unknown")))
                })
                .collect()
        })
        .collect()
}

/// Solution of a minor equation for one entry.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolve<S> {
    pub alpha: S,
    pub beta: S,
    pub value: S,
    /// `(C1, C2)` of the elimination identity.
    pub elimination: Option<(S, S)>,
}

/// `x = -beta / alpha` with the genericity test on `alpha`.
pub fn solve_linear<S: Scalar>(
    spec: &MinorSpec,
    value: &dyn Fn(LatticePoint) -> Option<S>,
) -> Result<LinearSolve<S>, CompletionError> {
    spec.validate()?;
    let (a, b) = spec.position(spec.unknown).expect("validated");
    let mat = minor_values(spec, value, &[(spec.unknown, S::zero())])?;
    let (alpha, beta, scale) = linear_form(&mat, a, b);
    if alpha.is_negligible(scale) {
        return Err(CompletionError::GenericityViolation {
            target: spec.unknown,
            rows: spec.rows.clone(),
            cols: spec.cols.clone(),
            alpha: alpha.magnitude(),
            scale,
        });
    }
    let x = -(beta.clone() / alpha.clone());
    let elimination = match spec.resolved {
        Some(x1) => Some(elimination_constants(spec, value, x1)?),
        None => None,
    };
    Ok(LinearSolve { alpha, beta, value: x, elimination })
}

/// Bilinear expansion `det(x1, x2) = A x1 x2 + B x1 + C x2 + D`; returns
/// `(A, B, C, D)` with all other entries fixed.
pub fn bilinear_coefficients<S: Scalar>(
    spec: &MinorSpec,
    value: &dyn Fn(LatticePoint) -> Option<S>,
    x1: LatticePoint,
) -> Result<(S, S, S, S), CompletionError> {
    let x2 = spec.unknown;
    let f = |u: S, v: S| -> Result<S, CompletionError> {
        Ok(determinant(minor_values(spec, value, &[(x1, u), (x2, v)])?))
    };
    let (z, o) = (S::zero(), S::one());
    let f00 = f(z.clone(), z.clone())?;
    let f10 = f(o.clone(), z.clone())?;
    let f01 = f(z.clone(), o.clone())?;
    let f11 = f(o.clone(), o)?;
    let a = f11 - f10.clone() - f01.clone() + f00.clone();
    Ok((a, f10 - f00.clone(), f01 - f00.clone(), f00))
}

fn elimination_constants<S: Scalar>(
    spec: &MinorSpec,
    value: &dyn Fn(LatticePoint) -> Option<S>,
    x1: LatticePoint,
) -> Result<(S, S), CompletionError> {
    let (a, b, _, _) = bilinear_coefficients(spec, value, x1)?;
    Ok((a, b))
}
