use std::collections::{BTreeMap, BTreeSet};

use latcomp::certificate::*;
use latcomp::completion::*;
use latcomp::generators::*;
use latcomp::minor::MinorSpec;
use latcomp::removability::removability_analysis;
use latcomp::{CertificateError, CompletionError, LatticePoint, Mask, Rational, Scalar};
use num::BigInt;

fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

fn product(u: &[[i64; 2]], v: &[[i64; 2]]) -> Vec<Vec<i64>> {
    u.iter().map(|a| v.iter().map(|b| a[0] * b[0] + a[1] * b[1]).collect()).collect()
}

const U: [[i64; 2]; 4] = [[1, 2], [3, 1], [2, 5], [1, -1]];
const V: [[i64; 2]; 4] = [[2, 1], [1, 3], [-1, 2], [4, 1]];

fn exact_instance() -> (PartialMatrix<Rational>, PartialMatrix<f64>, Mask, latcomp::Walk) {
    let (mask, w) = gen_boundary_cycle(4, 4).unwrap();
    let x = product(&U, &V);
    let xq: Vec<Vec<Rational>> = x.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
    let xf: Vec<Vec<f64>> = x.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    (
        PartialMatrix::from_dense(&xq, &mask, 2).unwrap(),
        PartialMatrix::from_dense(&xf, &mask, 2).unwrap(),
        mask,
        w,
    )
}

fn exact_completion() -> (Completion<Rational>, PartialMatrix<Rational>) {
    let (pq, _, mask, w) = exact_instance();
    let rep = removability_analysis(&w, &mask).unwrap();
    (complete_rank2(&pq, &rep, &w).unwrap(), pq)
}

#[test]
fn exact_replay_verifies() {
    let (c, pq) = exact_completion();
    assert_eq!(c.status, Status::Complete);
    assert!(verify_certificate_exact(&c.certificate, &pq).unwrap());
    let truth = product(&U, &V);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(c.get(LatticePoint::new(i + 1, j + 1)).unwrap(), &q(truth[i][j]));
        }
    }
}

#[test]
fn float_engine_matches_exact() {
    let (c, _) = exact_completion();
    let (_, pf, mask, w) = exact_instance();
    let rep = removability_analysis(&w, &mask).unwrap();
    let f = complete_rank2(&pf, &rep, &w).unwrap();
    assert_eq!(f.fill_order, c.fill_order);
    for (a, b) in f.values.iter().zip(&c.values) {
        assert!((a.unwrap() - b.as_ref().unwrap().to_f64()).abs() < 1e-12);
    }
}

#[test]
fn perturbed_coefficient_rejected() {
    let (mut c, pq) = exact_completion();
    c.certificate.steps[0].alpha += q(1);
    assert!(!verify_certificate_exact(&c.certificate, &pq).unwrap());
}

#[test]
fn perturbed_value_rejected() {
    let (mut c, pq) = exact_completion();
    let last = c.certificate.steps.len() - 1;
    c.certificate.steps[last].value += q(1);
    assert!(!verify_certificate_exact(&c.certificate, &pq).unwrap());
}

#[test]
fn forward_dependency_is_malformed() {
    let (mut c, pq) = exact_completion();
    c.certificate.steps[0].dependencies.push(1);
    assert!(matches!(verify_certificate_exact(&c.certificate, &pq), Err(CertificateError::Malformed(_))));
}

#[test]
fn non_finite_instance_is_inexact() {
    let (_, mut pf, mask, w) = exact_instance();
    let rep = removability_analysis(&w, &mask).unwrap();
    let c = complete_rank2(&pf, &rep, &w).unwrap();
    pf.entries.insert(LatticePoint::new(1, 1), f64::NAN);
    assert!(matches!(verify_certificate_exact(&c.certificate, &pf), Err(CertificateError::InexactInput(_))));
}

#[test]
fn certificate_json_round_trip() {
    let (c, pq) = exact_completion();
    let v = c.certificate.to_json_value();
    assert!(v["steps"][0]["alpha"].is_string());
    let back = Certificate::<Rational>::from_json_value(&v).unwrap();
    assert_eq!(back, c.certificate);
    assert!(verify_certificate_exact(&back, &pq).unwrap());
}

#[test]
fn degrees_of_small_certificates() {
    let mask = Mask::full(3, 3).unwrap();
    let (p, _) = random_instance(&mask, 2, 0);
    assert_eq!(certificate_degree(&propagate_greedy(&p, 2).unwrap().certificate), 0);
    let mut single = p.clone();
    single.entries.remove(&LatticePoint::new(3, 3));
    let c = propagate_greedy(&single, 2).unwrap();
    assert_eq!(c.certificate.steps.len(), 1);
    assert_eq!(certificate_degree(&c.certificate), 3);
}

/// Recomputes degrees from the dependency DAG: with k solved entries in the
/// minor the degree is max(r+1, deepest dependency + k).
fn replay_degrees<S: Scalar>(cert: &Certificate<S>) -> Vec<usize> {
    let r = cert.rank;
    let mut out: Vec<usize> = Vec::new();
    for st in &cert.steps {
        let top = st.dependencies.iter().map(|&d| out[d]).max().unwrap_or(0);
        out.push((r + 1).max(top + st.dependencies.len()));
    }
    out
}

#[test]
fn degrees_match_dag_replay() {
    let cases = [
        gen_boundary_cycle(6, 6).unwrap(),
        gen_staircase_cycle(10, 10, &diagonal_profile(10, 10)).unwrap(),
        notched_polygon_removable(),
    ];
    for (mask, w) in cases {
        let rep = removability_analysis(&w, &mask).unwrap();
        let (p, _) = random_instance(&mask, 2, 2);
        let c = complete_rank2(&p, &rep, &w).unwrap();
        let d = replay_degrees(&c.certificate);
        assert_eq!(d, c.certificate.steps.iter().map(|s| s.degree).collect::<Vec<_>>());
        assert_eq!(certificate_degree(&c.certificate), d.into_iter().max().unwrap_or(0));
    }
}

#[test]
fn rectangle_degree_is_minor_degree() {
    let (mask, w) = gen_boundary_cycle(6, 6).unwrap();
    let rep = removability_analysis(&w, &mask).unwrap();
    let (p, _) = random_instance(&mask, 2, 9);
    let c = complete_rank2(&p, &rep, &w).unwrap();
    assert_eq!(certificate_degree(&c.certificate), 3);
    assert!(check_degree_bound(&c.certificate, &BoundReport::Removability(&rep), 2));
}

#[test]
fn elimination_matches_substitution() {
    // rank-2 3x3 minor with unknowns at (3,3) and (3,2)
    let x = product(&[[1, 2], [3, 1], [2, 5]], &[[2, 1], [1, 3], [-1, 2]]);
    let mut entries = BTreeMap::new();
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (2, 2) && (i, j) != (2, 1) {
                entries.insert(LatticePoint::new(i + 1, j + 1), x[i][j] as f64);
            }
        }
    }
    let p = PartialMatrix::new(3, 3, 2, entries.clone()).unwrap();
    let x1 = LatticePoint::new(3, 2);
    let resolved = CertStep {
        target: x1,
        kind: StepKind::OneUnknown,
        minor: MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], x1),
        alpha: 1.0,
        beta: 0.0,
        c1: None,
        c2: None,
        value: x[2][1] as f64,
        dependencies: vec![],
        degree: 3,
    };
    let mut spec = MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], LatticePoint::new(3, 3));
    spec.resolved = Some(x1);
    let ((alpha, beta), step) = eliminate_second_unknown(&p, &spec, &resolved, 0).unwrap();
    assert!((-beta / alpha - x[2][2] as f64).abs() < 1e-12);
    // same row: the determinant has no x1 x2 term
    assert!(step.c1.unwrap().abs() < 1e-12);

    let mut sub = entries.clone();
    sub.insert(x1, x[2][1] as f64);
    let ps = PartialMatrix::new(3, 3, 2, sub).unwrap();
    let (direct, _) = solve_minor_one_unknown(&ps, &MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], LatticePoint::new(3, 3))).unwrap();
    assert!((direct - step.value).abs() < 1e-12);
    assert_eq!(step.degree, 4);
}

#[test]
fn elimination_without_cross_terms_equals_one_unknown() {
    // x1 at (1,1) lies in the row and column deleted for x2's cofactor only
    // when it shares neither; here it shares the row so C1 = 0, and with a
    // zero cofactor C2 also vanishes
    let rows = [[1.0, 0.0, 2.0], [0.0, 0.0, 0.0], [3.0, 0.0, 0.0]];
    let _ = rows;
    let mut e = BTreeMap::new();
    let vals = [[0.0, 1.0, 2.0], [1.0, 3.0, 5.0], [2.0, 5.0, 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (2, 2) && (i, j) != (0, 0) {
                e.insert(LatticePoint::new(i + 1, j + 1), vals[i][j]);
            }
        }
    }
    let x1 = LatticePoint::new(1, 1);
    let p = PartialMatrix::new(3, 3, 2, e.clone()).unwrap();
    // cofactor of (1,1) with (3,3) removed involves only (2,2); making the
    // resolved value zero leaves the one-unknown equation unchanged
    let resolved = CertStep {
        target: x1,
        kind: StepKind::OneUnknown,
        minor: MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], x1),
        alpha: 1.0,
        beta: 0.0,
        c1: None,
        c2: None,
        value: 0.0,
        dependencies: vec![],
        degree: 3,
    };
    let mut spec = MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], LatticePoint::new(3, 3));
    spec.resolved = Some(x1);
    let ((a, b), step) = eliminate_second_unknown(&p, &spec, &resolved, 0).unwrap();
    let mut sub = e;
    sub.insert(x1, 0.0);
    let ps = PartialMatrix::new(3, 3, 2, sub).unwrap();
    let (x, one) = solve_minor_one_unknown(&ps, &MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], LatticePoint::new(3, 3))).unwrap();
    assert_eq!((a, b), (one.alpha, one.beta));
    assert_eq!(step.value, x);
}

#[test]
fn elimination_degenerate_complement() {
    // both unknowns in column 3; rows 1 and 3 are proportional off column 3
    let mut e = BTreeMap::new();
    let vals = [[1.0, 2.0, 0.0], [5.0, 1.0, 0.0], [2.0, 4.0, 7.0]];
    for i in 0..3 {
        for j in 0..3 {
            if (i, j) != (0, 2) && (i, j) != (1, 2) {
                e.insert(LatticePoint::new(i + 1, j + 1), vals[i][j]);
            }
        }
    }
    let p = PartialMatrix::new(3, 3, 2, e).unwrap();
    let x1 = LatticePoint::new(1, 3);
    let resolved = CertStep {
        target: x1,
        kind: StepKind::OneUnknown,
        minor: MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], x1),
        alpha: 1.0,
        beta: 0.0,
        c1: None,
        c2: None,
        value: 3.0,
        dependencies: vec![],
        degree: 3,
    };
    let mut spec = MinorSpec::new(vec![1, 2, 3], vec![1, 2, 3], LatticePoint::new(2, 3));
    spec.resolved = Some(x1);
    assert!(matches!(eliminate_second_unknown(&p, &spec, &resolved, 0), Err(CompletionError::GenericityViolation { .. })));
}

#[test]
fn degree_monotone_under_restriction() {
    let (mask, w) = gen_staircase_cycle(10, 10, &diagonal_profile(10, 10)).unwrap();
    let rep = removability_analysis(&w, &mask).unwrap();
    let extra: Vec<LatticePoint> = [(2, 2), (5, 6), (8, 3), (3, 8), (9, 9), (6, 2)].map(LatticePoint::from).to_vec();
    let degree = |pts: &BTreeSet<LatticePoint>| {
        let m = Mask::new(10, 10, pts.iter().copied()).unwrap();
        let (p, _) = random_instance(&m, 2, 4);
        certificate_degree(&complete_rank2(&p, &rep, &w).unwrap().certificate)
    };
    let mut pts = mask.support.clone();
    pts.extend(extra.iter().copied());
    let mut prev = degree(&pts);
    for e in extra {
        pts.remove(&e);
        let d = degree(&pts);
        assert!(d >= prev, "removing {e} lowered degree {prev} -> {d}");
        prev = d;
    }
}
