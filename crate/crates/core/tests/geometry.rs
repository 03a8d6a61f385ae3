#![allow(clippy::needless_range_loop)]

mod common;

use proptest::prelude::*;
use qstat_core::expr::parse;
use qstat_core::geometry::{
    classify, frame_bracket, metric_jets, musical_flat, musical_sharp, FrameField,
    FramedConnection, ManifoldSpec,
};
use qstat_core::sampling::sample_box;

use common::{coords, entry, generic2};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn gamma_value(spec: &ManifoldSpec, k: usize, i: usize, j: usize, p: &[f64]) -> f64 {
    spec.gamma()
        .get(&(k, i, j))
        .map_or(0.0, |e| e.eval(p).unwrap())
}

#[test]
fn musical_examples() {
    let e2 = entry("line-weighted");
    assert_eq!(musical_flat(&e2, &[3.0], &[0.2]).unwrap(), vec![6.0]);
    assert_eq!(musical_sharp(&e2, &[6.0], &[0.2]).unwrap(), vec![3.0]);
    let e1 = entry("euclidean2");
    assert_eq!(
        musical_flat(&e1, &[0.3, -2.0], &[0.1, 0.1]).unwrap(),
        vec![0.3, -2.0]
    );
    let e5 = entry("symplectic2");
    assert_eq!(
        musical_flat(&e5, &[1.0, 0.0], &[0.0, 0.0]).unwrap(),
        vec![0.0, 1.0]
    );
    let e4 = entry("non-statistical");
    assert!(close(
        &musical_sharp(&e4, &[0.0, 1.0], &[1.0, 0.0]).unwrap(),
        &[0.0, 0.5],
        1e-15
    ));
}

#[test]
fn covariant_derivative_examples() {
    let e2 = entry("line-weighted");
    let p = [0.4];
    let cp = e2.connection().at(&p).unwrap();
    assert_eq!(cp.covariant_02(&e2.metric_jets(&p).unwrap(), 0, 0, 0), -4.0);

    let e3 = entry("torsion-hessian");
    let p = [0.3, -0.6];
    let cp = e3.connection().at(&p).unwrap();
    assert_eq!(cp.covariant_02(&e3.metric_jets(&p).unwrap(), 0, 1, 0), -1.0);
    assert_eq!(cp.torsion(0, 1), vec![1.0, 0.0]);
    assert!(cp.curvature_tensor().max_abs() == 0.0);
    assert_eq!(
        cp.d_nabla_tensor(&e3.metric_jets(&p).unwrap()).max_abs(),
        0.0
    );
}

#[test]
fn euclidean_everything_vanishes() {
    let e1 = entry("euclidean2");
    for p in sample_box(e1.domain(), 10, 3) {
        let cp = e1.connection().at(&p).unwrap();
        let g = e1.metric_jets(&p).unwrap();
        assert_eq!(cp.torsion_tensor().max_abs(), 0.0);
        assert_eq!(cp.curvature_tensor().max_abs(), 0.0);
        assert_eq!(cp.covariant_02_tensor(&g).max_abs(), 0.0);
        assert_eq!(cp.d_nabla_tensor(&g).max_abs(), 0.0);
    }
}

#[test]
fn hyperbolic_examples() {
    let e6 = entry("hyperbolic");
    let cp = e6.connection().at(&[0.0, 1.0]).unwrap();
    assert_eq!(cp.curvature(0, 1, 0), vec![0.0, 1.0]);
    for p in sample_box(e6.domain(), 10, 5) {
        assert!(e6.connection().at(&p).unwrap().torsion_tensor().max_abs() <= 1e-15);
    }
}

#[test]
fn non_statistical_d_component() {
    let e4 = entry("non-statistical");
    let p = [1.0, 0.0];
    let cp = e4.connection().at(&p).unwrap();
    assert_eq!(cp.d_nabla(&e4.metric_jets(&p).unwrap(), 0, 1, 1), 2.0);
}

#[test]
fn classify_examples() {
    let c = classify(&entry("euclidean2"), 20, 42, 1e-9).unwrap();
    assert!(c.torsion_free && c.metric_parallel && c.quasi_statistical && c.flat);
    let c = classify(&entry("torsion-hessian"), 20, 42, 1e-9).unwrap();
    assert!(!c.torsion_free && !c.metric_parallel && c.quasi_statistical && c.flat && c.hessian);
    let c = classify(&entry("non-statistical"), 20, 42, 1e-9).unwrap();
    assert!(c.torsion_free && !c.metric_parallel && !c.quasi_statistical && c.flat);
}

#[test]
fn frame_bracket_examples() {
    let c = coords(2);
    let f = FrameField::new(vec![
        vec![parse("1", &c).unwrap(), parse("0", &c).unwrap()],
        vec![parse("0", &c).unwrap(), parse("x1", &c).unwrap()],
    ])
    .unwrap();
    let b = frame_bracket(&f, 0, 1, &[0.5, 0.3]).unwrap();
    assert!(close(&b, &[0.0, 2.0], 1e-15), "{b:?}");
    let b = frame_bracket(&FrameField::coordinate(3), 0, 2, &[0.1, 0.2, 0.3]).unwrap();
    assert_eq!(b, vec![0.0; 3]);
}

/// Levi-Civita symbols from central differences of the metric alone.
#[test]
fn hyperbolic_connection_is_levi_civita() {
    let e6 = entry("hyperbolic");
    let h = 1e-5;
    for p in sample_box(e6.domain(), 20, 11) {
        let g = e6.metric_values(&p).unwrap();
        let inv = qstat_core::linalg::invert(&g).unwrap();
        let dg = |l: usize, i: usize, j: usize| {
            let mut a = p.clone();
            let mut b = p.clone();
            a[l] += h;
            b[l] -= h;
            (e6.metric_values(&a).unwrap()[i][j] - e6.metric_values(&b).unwrap()[i][j]) / (2.0 * h)
        };
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let fd: f64 = (0..2)
                        .map(|l| 0.5 * inv[k][l] * (dg(i, j, l) + dg(j, i, l) - dg(l, i, j)))
                        .sum();
                    let g = gamma_value(&e6, k, i, j, &p);
                    assert!((fd - g).abs() <= 1e-6, "Γ^{k}_{i}{j} at {p:?}: {fd} vs {g}");
                }
            }
        }
    }
}

/// R^l_{ijk} = ∂_iΓ^l_{jk} − ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik},
/// with the derivatives taken by central differences.
fn fd_curvature(spec: &ManifoldSpec, p: &[f64], h: f64) -> Vec<f64> {
    let n = spec.dim();
    let g = |k, i, j, q: &[f64]| gamma_value(spec, k, i, j, q);
    let dg = |d: usize, k, i, j| {
        let mut a = p.to_vec();
        let mut b = p.to_vec();
        a[d] += h;
        b[d] -= h;
        (g(k, i, j, &a) - g(k, i, j, &b)) / (2.0 * h)
    };
    let mut out = Vec::new();
    for l in 0..n {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut r = dg(i, l, j, k) - dg(j, l, i, k);
                    for m in 0..n {
                        r += g(l, i, m, p) * g(m, j, k, p) - g(l, j, m, p) * g(m, i, k, p);
                    }
                    out.push(r);
                }
            }
        }
    }
    out
}

#[test]
fn curvature_matches_finite_differences() {
    for spec in [entry("hyperbolic"), generic2()] {
        for p in sample_box(spec.domain(), 20, 17) {
            let ad = spec.connection().at(&p).unwrap().curvature_tensor();
            let fd = fd_curvature(&spec, &p, 1e-5);
            let diff = ad
                .components()
                .iter()
                .zip(&fd)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(diff <= 1e-6, "{} at {p:?}: {diff}", spec.label());
        }
    }
}

#[test]
fn covariant_derivative_matches_finite_differences() {
    let spec = generic2();
    let h = 1e-5;
    for p in sample_box(spec.domain(), 20, 19) {
        let cp = spec.connection().at(&p).unwrap();
        let jets = spec.metric_jets(&p).unwrap();
        let g = spec.metric_values(&p).unwrap();
        for a in 0..2 {
            let mut q1 = p.clone();
            let mut q2 = p.clone();
            q1[a] += h;
            q2[a] -= h;
            let (g1, g2) = (
                spec.metric_values(&q1).unwrap(),
                spec.metric_values(&q2).unwrap(),
            );
            for b in 0..2 {
                for c in 0..2 {
                    let mut fd = (g1[b][c] - g2[b][c]) / (2.0 * h);
                    for d in 0..2 {
                        fd -= gamma_value(&spec, d, a, b, &p) * g[d][c]
                            + gamma_value(&spec, d, a, c, &p) * g[b][d];
                    }
                    assert!((fd - cp.covariant_02(&jets, a, b, c)).abs() <= 1e-8);
                }
            }
        }
    }
}

/// Torsion and curvature computed in a non-coordinate frame and pushed to
/// coordinates agree with the coordinate computation.
#[test]
fn frame_invariance() {
    let spec = generic2();
    let c = coords(2);
    let frames = [
        [["1", "0.3*x1"], ["0.2*x2", "1"]],
        [["2+x2", "x1*x2"], ["0.5", "1+0.25*x1^2"]],
        [["0.7", "-1.3"], ["0.4", "0.9"]],
    ];
    for comps in frames {
        let vectors = comps
            .iter()
            .map(|v| v.iter().map(|s| parse(s, &c).unwrap()).collect())
            .collect();
        let frame = FrameField::new(vectors).unwrap();
        let framed = FramedConnection::from_coordinate_connection(spec.gamma(), frame).unwrap();
        for p in sample_box(spec.domain(), 10, 23) {
            let fc = framed.at(&p).unwrap();
            let cc = spec.connection().at(&p).unwrap();
            let e: Vec<Vec<f64>> = fc
                .frame
                .e
                .iter()
                .map(|v| v.iter().map(|j| j.value()).collect())
                .collect();
            let combine = |w: &[f64], basis: &dyn Fn(usize) -> Vec<f64>| -> Vec<f64> {
                let mut out = vec![0.0; 2];
                for (i, wi) in w.iter().enumerate() {
                    for (o, b) in out.iter_mut().zip(basis(i)) {
                        *o += wi * b;
                    }
                }
                out
            };
            for a in 0..2 {
                for b in 0..2 {
                    let framed_t = fc.frame.to_coordinates(&fc.torsion(a, b));
                    let coord_t = combine(&e[a], &|i| combine(&e[b], &|j| cc.torsion(i, j)));
                    assert!(
                        close(&framed_t, &coord_t, 1e-9),
                        "torsion {a}{b}: {framed_t:?} vs {coord_t:?}"
                    );
                    for d in 0..2 {
                        let framed_r = fc.frame.to_coordinates(&fc.curvature(a, b, d));
                        let coord_r = combine(&e[a], &|i| {
                            combine(&e[b], &|j| combine(&e[d], &|k| cc.curvature(i, j, k)))
                        });
                        assert!(close(&framed_r, &coord_r, 1e-9), "curvature {a}{b}{d}");
                    }
                }
            }
        }
    }
}

#[test]
fn d_vanishes_in_dimension_one() {
    let spec = common::spec_from_json(
        r#"{"dimension": 1, "coordinates": ["x1"], "metric": [["2+sin(x1)"]],
            "symmetry": "symmetric", "connection": {"1,1,1": "x1^3"}, "domain": [[-1, 1]]}"#,
    );
    for p in sample_box(spec.domain(), 10, 1) {
        let cp = spec.connection().at(&p).unwrap();
        assert_eq!(cp.d_nabla(&spec.metric_jets(&p).unwrap(), 0, 0, 0), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn d_is_antisymmetric(x in -1.0..1.0_f64, y in -1.0..1.0_f64) {
        let spec = generic2();
        let p = [x, y];
        let cp = spec.connection().at(&p).unwrap();
        let g = metric_jets(spec.metric(), &p).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    prop_assert!((cp.d_nabla(&g, a, b, c) + cp.d_nabla(&g, b, a, c)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn sharp_inverts_flat(x in -1.0..1.0_f64, y in -1.0..1.0_f64, v in prop::array::uniform2(-5.0..5.0_f64)) {
        for spec in [generic2(), entry("symplectic2"), entry("hyperbolic")] {
            let p = [x, if spec.label() == "hyperbolic" { 1.0 + (y + 1.0) / 2.0 } else { y }];
            let back = musical_sharp(&spec, &musical_flat(&spec, &v, &p).unwrap(), &p).unwrap();
            prop_assert!(close(&back, &v, 1e-12));
        }
    }
}
