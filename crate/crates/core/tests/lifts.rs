mod common;

use qstat_core::genbundle::{GenConnectionKind, GenJet, GenPoint, PairingKind};
use qstat_core::geometry::frame_bracket;
use qstat_core::lifts::{
    lifted_invariant_suite, pullback_to_genbundle, tilde_connection, tilde_tilde_connection,
    Bundle, LiftedChart, LiftedMetric, MetricKind, Morphism,
};
use qstat_core::run::SuiteOptions;

use common::{entry, generic2, spec_from_json};

fn chart(name: &str, bundle: Bundle) -> LiftedChart {
    LiftedChart::new(&entry(name), bundle, (-1.0, 1.0)).unwrap()
}

fn frame_values(c: &LiftedChart, p: &[f64]) -> Vec<Vec<f64>> {
    c.frame()
        .vectors()
        .iter()
        .map(|v| v.iter().map(|e| e.eval(p).unwrap()).collect())
        .collect()
}

fn coeff(
    conn: &qstat_core::geometry::FramedConnection,
    key: (usize, usize, usize),
    p: &[f64],
) -> f64 {
    conn.coefficient(key.0, key.1, key.2)
        .map_or(0.0, |e| e.eval(p).unwrap())
}

#[test]
fn cotangent_frame_on_line_weighted() {
    let c = chart("line-weighted", Bundle::Cotangent);
    assert_eq!(c.coords(), ["x1", "y1"]);
    let p = [0.3, 0.7];
    assert_eq!(frame_values(&c, &p), vec![vec![1.0, 0.7], vec![0.0, 1.0]]);
    assert_eq!(frame_bracket(c.frame(), 0, 1, &p).unwrap(), vec![0.0, -1.0]);
}

#[test]
fn euclidean_frames_are_coordinate_frames() {
    for bundle in [Bundle::Cotangent, Bundle::Tangent] {
        let c = chart("euclidean2", bundle);
        let f = frame_values(&c, &[0.1, 0.2, 0.3, 0.4]);
        for (a, row) in f.iter().enumerate() {
            for (mu, v) in row.iter().enumerate() {
                assert_eq!(*v, if a == mu { 1.0 } else { 0.0 });
            }
        }
    }
}

#[test]
fn hyperbolic_tangent_frame() {
    let c = chart("hyperbolic", Bundle::Tangent);
    let (x2, y1, y2) = (1.5, 0.4, -0.8);
    let f = frame_values(&c, &[0.2, x2, y1, y2]);
    let expect = [1.0, 0.0, y2 / x2, -y1 / x2];
    assert!(
        f[0].iter().zip(expect).all(|(a, b)| (a - b).abs() <= 1e-15),
        "{:?}",
        f[0]
    );
}

/// Brackets of the explicit lifted frame fields by central differences agree
/// with the structure functions.
#[test]
fn lifted_structure_functions_match_finite_differences() {
    let spec = generic2();
    for bundle in [Bundle::Cotangent, Bundle::Tangent] {
        let c = LiftedChart::new(&spec, bundle, (-1.0, 1.0)).unwrap();
        let m = c.dim();
        let h = 1e-5;
        for p in c.sample(5, 3) {
            let fp = c.frame().at(&p).unwrap();
            let e = |a: usize, q: &[f64]| -> Vec<f64> {
                c.frame().vectors()[a]
                    .iter()
                    .map(|x| x.eval(q).unwrap())
                    .collect()
            };
            let deriv = |v: &[f64], a: usize| -> Vec<f64> {
                let q1: Vec<f64> = p.iter().zip(v).map(|(x, d)| x + h * d).collect();
                let q2: Vec<f64> = p.iter().zip(v).map(|(x, d)| x - h * d).collect();
                e(a, &q1)
                    .iter()
                    .zip(e(a, &q2))
                    .map(|(u, w)| (u - w) / (2.0 * h))
                    .collect()
            };
            for a in 0..m {
                for b in 0..m {
                    let (ea, eb) = (e(a, &p), e(b, &p));
                    let coord: Vec<f64> = deriv(&ea, b)
                        .iter()
                        .zip(deriv(&eb, a))
                        .map(|(u, w)| u - w)
                        .collect();
                    let fd = fp.to_frame(&coord);
                    let exact = frame_bracket(c.frame(), a, b, &p).unwrap();
                    assert!(
                        fd.iter().zip(&exact).all(|(u, w)| (u - w).abs() <= 1e-8),
                        "{bundle} [{a},{b}]"
                    );
                }
            }
        }
    }
}

#[test]
fn morphism_examples() {
    let e2 = entry("line-weighted");
    assert_eq!(
        Morphism::Phi.apply(&e2, &[0.3], &[1.0], &[0.0]).unwrap(),
        vec![1.0, 0.0]
    );
    assert_eq!(
        Morphism::Phi.apply(&e2, &[0.3], &[0.0], &[1.0]).unwrap(),
        vec![0.0, 1.0]
    );
    assert_eq!(
        Morphism::Psi.apply(&e2, &[0.3], &[0.0], &[1.0]).unwrap(),
        vec![0.0, 0.5]
    );
    let e6 = entry("hyperbolic");
    let p = [0.2, 1.3];
    let w = Morphism::Psi
        .apply(&e6, &p, &[1.0, -2.0], &[0.5, 3.0])
        .unwrap();
    let (x, a) = Morphism::Psi.invert(&e6, &p, &w).unwrap();
    assert!(
        (x[1] + 2.0).abs() <= 1e-15 && (a[0] - 0.5).abs() <= 1e-14 && (a[1] - 3.0).abs() <= 1e-14
    );
}

#[test]
fn metric_examples() {
    let e2 = entry("line-weighted");
    let sasaki = LiftedMetric::build(MetricKind::SasakiCotangent, &e2);
    assert_eq!(sasaki.values(&[0.1, 0.2]).unwrap()[1][1], 0.5);
    let horizontal = LiftedMetric::build(MetricKind::Horizontal, &e2);
    assert_eq!(horizontal.values(&[0.1, 0.2]).unwrap()[0][1], 2.0);
    let pw = LiftedMetric::build(MetricKind::PwPlus, &entry("euclidean2"));
    let expect = [
        [0., 0., 1., 0.],
        [0., 0., 0., 1.],
        [1., 0., 0., 0.],
        [0., 1., 0., 0.],
    ];
    let got = pw.values(&[0.1, 0.2, 0.3, 0.4]).unwrap();
    assert!(got.iter().zip(expect).all(|(r, e)| r.as_slice() == e));
}

#[test]
fn pullback_worked_values() {
    let e2 = entry("line-weighted");
    let (s, t) = ((&[2.0][..], &[3.0][..]), (&[1.0][..], &[5.0][..]));
    let p = [0.3, -0.4];
    let gp = GenPoint::new(&e2, &p[..1]).unwrap();
    let (sj, tj) = (GenJet::constant(1, s.0, s.1), GenJet::constant(1, t.0, t.1));
    let indefinite = gp.pairing_value(PairingKind::Indefinite, &sj, &tj);
    let value =
        |kind| pullback_to_genbundle(&LiftedMetric::build(kind, &e2), &e2, s, t, &p).unwrap();
    assert_eq!(value(MetricKind::PwPlus), 13.0);
    assert_eq!(value(MetricKind::PwPlus), -2.0 * indefinite);
    assert_eq!(value(MetricKind::SasakiCotangent), 11.5);
    assert_eq!(value(MetricKind::Horizontal), 13.0);
    assert_eq!(value(MetricKind::SasakiTangent), 11.5);
}

#[test]
fn tilde_connection_examples() {
    let c = chart("line-weighted", Bundle::Cotangent);
    let conn = tilde_connection(&c).unwrap();
    assert_eq!(coeff(&conn, (1, 0, 1), &[0.2, 0.5]), 1.0);
    let conn = tilde_connection(&chart("euclidean2", Bundle::Cotangent)).unwrap();
    assert!(conn.coefficients().is_empty());

    let e6 = entry("hyperbolic");
    let c = chart("hyperbolic", Bundle::Cotangent);
    let conn = tilde_connection(&c).unwrap();
    let p = [0.3, 1.4, 0.2, -0.6];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let base = e6
                    .gamma()
                    .get(&(k, i, j))
                    .map_or(0.0, |e| e.eval(&p[..2]).unwrap());
                assert_eq!(coeff(&conn, (k, i, j), &p), base);
            }
        }
    }
}

/// ∇̃ is the pull-back of ∇̂ under Φ: on lifts of coordinate sections,
/// ∇̃_{Φσ}Φτ = Φ(∇̂_σ τ).
#[test]
fn tilde_connection_is_the_pullback_of_hat() {
    let spec = generic2();
    let c = LiftedChart::new(&spec, Bundle::Cotangent, (-1.0, 1.0)).unwrap();
    let conn = tilde_connection(&c).unwrap();
    for p in c.sample(5, 7) {
        let gp = GenPoint::new(&spec, &p[..2]).unwrap();
        for i in 0..2 {
            for b in 0..4 {
                let mut t = [0.0; 4];
                t[b] = 1.0;
                let mut s = [0.0; 4];
                s[i] = 1.0;
                let hat = gp
                    .connection(
                        GenConnectionKind::Hat,
                        &GenJet::constant(2, &s[..2], &s[2..]),
                        &GenJet::constant(2, &t[..2], &t[2..]),
                    )
                    .values();
                for (cidx, expect) in hat.iter().enumerate() {
                    let got = coeff(&conn, (cidx, i, b), &p);
                    assert!(
                        (got - expect).abs() <= 1e-12,
                        "({cidx},{i},{b}): {got} vs {expect}"
                    );
                }
            }
        }
    }
}

#[test]
fn tilde_tilde_connection_examples() {
    let conn = tilde_tilde_connection(&chart("line-weighted", Bundle::Tangent)).unwrap();
    assert_eq!(coeff(&conn, (1, 0, 1), &[0.2, 0.5]), 1.0);
    let conn = tilde_tilde_connection(&chart("euclidean2", Bundle::Tangent)).unwrap();
    assert!(conn.coefficients().is_empty());
    let conn = tilde_tilde_connection(&chart("torsion-hessian", Bundle::Tangent)).unwrap();
    assert_eq!(coeff(&conn, (2, 0, 3), &[0.1, 0.2, 0.3, 0.4]), 1.0);
    assert!(tilde_tilde_connection(&chart("euclidean2", Bundle::Cotangent)).is_err());
}

#[test]
fn hyperbolic_torsion_has_curvature_vertical_part() {
    let c = chart("hyperbolic", Bundle::Cotangent);
    let conn = tilde_connection(&c).unwrap();
    for y in [[0.6, -0.8], [1.0, 0.5], [-0.5, -0.7]] {
        let cp = conn.at(&[0.0, 1.0, y[0], y[1]]).unwrap();
        let t = cp.torsion(0, 1);
        assert!(t[0].abs() <= 1e-14 && t[1].abs() <= 1e-14);
        // −y_l R^l_{12k} with R^2_{121} = 1 and R^1_{122} = −1
        assert!(
            (t[2] + y[1]).abs() <= 1e-14 && (t[3] - y[0]).abs() <= 1e-14,
            "{t:?}"
        );
    }
}

fn suite(name: &str, bundle: Bundle) -> qstat_core::report::Report {
    lifted_invariant_suite(
        &entry(name),
        bundle,
        &SuiteOptions {
            samples: 20,
            ..SuiteOptions::default()
        },
    )
    .unwrap()
}

#[test]
fn formula_checks_pass_on_every_entry() {
    for name in qstat_core::catalog::NAMES {
        for bundle in [Bundle::Cotangent, Bundle::Tangent] {
            let r = suite(name, bundle);
            for c in r.checks.iter().filter(|c| !c.id.ends_with(".vanish")) {
                assert!(c.pass, "{name} {}: {}", c.id, c.max_residual);
            }
        }
    }
}

#[test]
fn torsion_hessian_prolongations() {
    let cot = suite("torsion-hessian", Bundle::Cotangent);
    for id in [
        "lift.cot.sasaki.vanish",
        "lift.cot.pw_plus.vanish",
        "lift.cot.pw_minus.vanish",
        "lift.cot.flat",
    ] {
        assert!(cot.check(id).unwrap().pass, "{id}");
    }
    assert!(cot.flags["lift.cot.sasaki.hessian"]);
    let tan = suite("torsion-hessian", Bundle::Tangent);
    assert!(tan.skipped_check("lift.tan.horizontal.vanish").is_some());
    assert!(!tan.flags["lift.tan.horizontal.quasi_statistical"]);
    // d h^S picks up (∇_1 h)(∂2, ∂1) = −1 on the (H, V, V) slots
    let r = tan.check("lift.tan.sasaki.vanish").unwrap();
    assert!(!r.pass && (r.max_residual - 1.0).abs() <= 1e-12);
}

#[test]
fn flatness_transfers_to_the_lifts() {
    for (name, flat) in [
        ("euclidean2", true),
        ("line-weighted", true),
        ("torsion-hessian", true),
        ("hyperbolic", false),
    ] {
        for bundle in [Bundle::Cotangent, Bundle::Tangent] {
            assert_eq!(
                suite(name, bundle).flags[&format!("lift.{}.flat", bundle.tag())],
                flat,
                "{name} {bundle}"
            );
        }
    }
}

#[test]
fn skew_pullbacks() {
    let spec = spec_from_json(
        r#"{"label": "skew-varying", "dimension": 2, "coordinates": ["x1", "x2"],
            "metric": [["0", "2+x2"], ["-2-x2", "0"]], "symmetry": "skew",
            "connection": {"1,1,2": "x1"}, "domain": [[-1, 1], [-1, 1]]}"#,
    );
    for bundle in [Bundle::Cotangent, Bundle::Tangent] {
        let r = lifted_invariant_suite(
            &spec,
            bundle,
            &SuiteOptions {
                samples: 10,
                ..SuiteOptions::default()
            },
        )
        .unwrap();
        for c in r
            .checks
            .iter()
            .filter(|c| c.id.contains("pullback") || c.id.ends_with("formula"))
        {
            assert!(c.pass, "{}: {}", c.id, c.max_residual);
        }
    }
}
