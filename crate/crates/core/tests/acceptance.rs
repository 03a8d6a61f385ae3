//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line is printed on every run; exits non-zero if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use qstat_core::catalog::NAMES;
use qstat_core::genbundle::{
    generalized_suite, GenConnectionKind, GenJet, GenPoint, GeneralizedSection, Structure,
};
use qstat_core::lifts::{
    lifted_invariant_suite, tilde_tilde_connection, Bundle, LiftedChart, LiftedMetric, MetricKind,
};
use qstat_core::linalg;
use qstat_core::norden::{build_jbar, build_jtilde, nijenhuis_endo, norden_suite};
use qstat_core::report::Report;
use qstat_core::run::SuiteOptions;
use qstat_core::sampling::sample_box;

use common::{entry, fd_grad_hess, jet_vs_fd, random_expr, random_point, rng};

const E1: &str = "euclidean2";
const E2: &str = "line-weighted";
const E3: &str = "torsion-hessian";
const E4: &str = "non-statistical";
const E5: &str = "symplectic2";
const E6: &str = "hyperbolic";

const SAMPLES: usize = 50;

struct Reports {
    gen: BTreeMap<&'static str, Report>,
    lift: BTreeMap<(&'static str, Bundle), Report>,
    norden: BTreeMap<(&'static str, Bundle), Report>,
}

impl Reports {
    fn build() -> Self {
        let opts = SuiteOptions {
            samples: SAMPLES,
            ..SuiteOptions::default()
        };
        let mut r = Reports {
            gen: BTreeMap::new(),
            lift: BTreeMap::new(),
            norden: BTreeMap::new(),
        };
        for name in NAMES {
            let spec = entry(name);
            r.gen.insert(name, generalized_suite(&spec, &opts).unwrap());
            for b in [Bundle::Cotangent, Bundle::Tangent] {
                r.lift
                    .insert((name, b), lifted_invariant_suite(&spec, b, &opts).unwrap());
                r.norden
                    .insert((name, b), norden_suite(&spec, b, &opts).unwrap());
            }
        }
        r
    }
}

/// Collects the sub-conditions of one criterion.
#[derive(Default)]
struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn at_most(&mut self, what: &str, value: f64, tol: f64) {
        self.require(value <= tol, format!("{what}: {value:.3e} > {tol:.0e}"));
    }

    fn at_least(&mut self, what: &str, value: f64, floor: f64) {
        self.require(value >= floor, format!("{what}: {value:.3e} < {floor}"));
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }
}

/// Max residual of a check, whether it ran or was skipped for its hypotheses.
fn residual(r: &Report, id: &str) -> f64 {
    r.check(id)
        .map(|c| c.max_residual)
        .or_else(|| r.skipped_check(id).map(|c| c.max_residual))
        .unwrap_or_else(|| panic!("{}: no check `{id}`", r.spec_label))
}

fn basis_jets(n: usize, p: &[f64]) -> Vec<GenJet> {
    GeneralizedSection::basis(n)
        .iter()
        .map(|s| s.jets(p).unwrap())
        .collect()
}

fn max_gen_nijenhuis(name: &str, points: &[Vec<f64>]) -> f64 {
    let spec = entry(name);
    let mut worst = 0.0_f64;
    for p in points {
        let gp = GenPoint::new(&spec, p).unwrap();
        let basis = basis_jets(spec.dim(), p);
        for s in &basis {
            for t in &basis {
                for which in [Structure::Complex, Structure::Product] {
                    worst = worst.max(gp.nijenhuis(which, s, t).max_abs());
                }
            }
        }
    }
    worst
}

fn integrability(_: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in [E1, E3, E5] {
        let spec = entry(name);
        let pts = sample_box(spec.domain(), SAMPLES, 42);
        o.at_most(
            &format!("{name} max |N|"),
            max_gen_nijenhuis(name, &pts),
            1e-9,
        );
    }
    let n = max_gen_nijenhuis(E4, &[vec![1.0, 0.0]]);
    o.at_least("non-statistical |N| at (1,0)", n, 0.9);
    o.note(format!(
        "non-statistical max |N| over basis pairs at (1,0) = {n}"
    ));
    o
}

fn hat_d_identity(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in NAMES {
        o.at_most(
            &format!("{name} d^∇̂ĥ identity"),
            residual(&r.gen[name], "gen.hat.d_formula"),
            1e-9,
        );
        o.at_most(
            &format!("{name} d^∇̂ȟ = d^∇h"),
            residual(&r.gen[name], "gen.hat.d_check_h"),
            1e-9,
        );
    }
    o
}

fn duality(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in NAMES {
        let g = &r.gen[name];
        o.at_most(
            &format!("{name} closed vs implicit dual"),
            residual(g, "gen.dual.closed_vs_implicit"),
            1e-10,
        );
        o.at_most(
            &format!("{name} Leibniz"),
            residual(g, "gen.dual.leibniz"),
            1e-9,
        );
    }
    for name in [E1, E2, E3, E5] {
        o.at_most(
            &format!("{name} T^∇̂*"),
            residual(&r.gen[name], "gen.dual.torsion_free"),
            1e-9,
        );
    }
    o
}

fn curvature(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in NAMES {
        let g = &r.gen[name];
        o.at_most(
            &format!("{name} R^∇̂ closed form"),
            residual(g, "gen.curvature.hat_formula"),
            1e-8,
        );
        o.at_most(
            &format!("{name} R^∇̂* closed form"),
            residual(g, "gen.curvature.dual_formula"),
            1e-8,
        );
    }
    for name in [E1, E2, E3, E4, E5] {
        o.at_most(
            &format!("{name} flat"),
            residual(&r.gen[name], "gen.curvature.flat"),
            1e-9,
        );
    }
    let e6 = entry(E6);
    let gp = GenPoint::new(&e6, &[0.0, 1.0]).unwrap();
    let basis = basis_jets(2, &[0.0, 1.0]);
    let mut worst = 0.0_f64;
    for kind in [GenConnectionKind::Hat, GenConnectionKind::HatDual] {
        for s in &basis {
            for t in &basis {
                for v in &basis {
                    worst = worst.max(gp.gen_curvature(kind, s, t, v).max_abs());
                }
            }
        }
    }
    o.at_least("hyperbolic max |R| at (0,1)", worst, 0.5);
    o.note(format!("hyperbolic max |R| at (0,1) = {worst}"));
    o
}

fn parallelism(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in NAMES {
        o.at_most(
            &format!("{name} ∇̂Ĵ"),
            residual(&r.gen[name], "gen.parallel.hat"),
            1e-10,
        );
        o.at_most(
            &format!("{name} ∇̂*Ĵ"),
            residual(&r.gen[name], "gen.parallel.dual"),
            1e-10,
        );
    }
    o
}

fn check_connection(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in NAMES {
        let g = &r.gen[name];
        o.at_most(
            &format!("{name} d^∇̌ĥ identity"),
            residual(g, "gen.check.d_formula"),
            1e-10,
        );
        o.at_most(
            &format!("{name} ∇̌* = ∇̌"),
            residual(g, "gen.check.self_dual"),
            1e-10,
        );
    }
    for name in [E1, E2, E4, E5, E6] {
        o.at_most(
            &format!("{name} d^∇̌ĥ = 0"),
            residual(&r.gen[name], "gen.check.d_vanish"),
            1e-10,
        );
    }
    for name in [E1, E5, E6] {
        o.at_most(
            &format!("{name} ∇̂ = ∇̌ = ∇̂*"),
            residual(&r.gen[name], "gen.coincide"),
            1e-12,
        );
    }
    o
}

fn lift_formulas(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in [E1, E2, E3, E6] {
        for b in [Bundle::Cotangent, Bundle::Tangent] {
            let rep = &r.lift[&(name, b)];
            let tag = b.tag();
            o.at_most(
                &format!("{name} {tag} torsion"),
                residual(rep, &format!("lift.{tag}.torsion_formula")),
                1e-8,
            );
            o.at_most(
                &format!("{name} {tag} curvature"),
                residual(rep, &format!("lift.{tag}.curvature_formula")),
                1e-8,
            );
            let chart = LiftedChart::new(&entry(name), b, (-1.0, 1.0)).unwrap();
            let n = chart.base_dim();
            let far = chart
                .sample(SAMPLES, 42)
                .iter()
                .any(|p| p[n..].iter().all(|y| y.abs() >= 0.5));
            o.require(
                far,
                format!("{name} {tag}: no sample with every |y_i| ≥ 0.5"),
            );
        }
    }
    o
}

/// Largest |d h^H| over the mixed slots (H_i, V_j, H_k) on the tangent lift.
fn horizontal_mixed(name: &str) -> f64 {
    let spec = entry(name);
    let chart = LiftedChart::new(&spec, Bundle::Tangent, (-1.0, 1.0)).unwrap();
    let conn = tilde_tilde_connection(&chart).unwrap();
    let metric = LiftedMetric::build(MetricKind::Horizontal, &spec);
    let n = spec.dim();
    let mut worst = 0.0_f64;
    for p in chart.sample(SAMPLES, 42) {
        let cp = conn.at(&p).unwrap();
        let g = metric.jets(&p).unwrap();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max(cp.d_nabla(&g, i, n + j, k).abs());
                }
            }
        }
    }
    worst
}

fn prolongation(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    let cot = &r.lift[&(E3, Bundle::Cotangent)];
    let tan = &r.lift[&(E3, Bundle::Tangent)];
    o.at_most(
        "torsion-hessian d^∇̃h^{S*}",
        residual(cot, "lift.cot.sasaki.vanish"),
        1e-9,
    );
    o.at_most(
        "torsion-hessian d^∇̃h̃_+",
        residual(cot, "lift.cot.pw_plus.vanish"),
        1e-9,
    );
    o.at_most(
        "torsion-hessian d^∇̃h̃_−",
        residual(cot, "lift.cot.pw_minus.vanish"),
        1e-9,
    );
    o.at_most(
        "torsion-hessian d^∇̃̃h^S",
        residual(tan, "lift.tan.sasaki.vanish"),
        1e-9,
    );
    o.require(
        cot.flags["lift.cot.sasaki.hessian"],
        "torsion-hessian (T*M, h^{S*}, ∇̃) not Hessian",
    );
    let e3 = horizontal_mixed(E3);
    o.require(
        (e3 - 1.0).abs() <= 1e-9,
        format!("torsion-hessian d^∇̃̃h^H mixed component {e3} ≠ 1"),
    );
    for name in [E1, E5, E6] {
        o.at_most(
            &format!("{name} d^∇̃̃h^H mixed"),
            horizontal_mixed(name),
            1e-9,
        );
    }
    for name in [E1, E5] {
        o.at_most(
            &format!("{name} d^∇̃̃h^H"),
            residual(
                &r.lift[&(name, Bundle::Tangent)],
                "lift.tan.horizontal.vanish",
            ),
            1e-9,
        );
    }
    o
}

fn pullbacks(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for name in NAMES {
        for b in [Bundle::Cotangent, Bundle::Tangent] {
            let rep = &r.lift[&(name, b)];
            for c in rep.checks.iter().filter(|c| c.id.contains(".pullback.")) {
                o.at_most(&format!("{name} {}", c.id), c.max_residual, 1e-10);
            }
        }
    }
    let e2 = entry(E2);
    let v = qstat_core::lifts::pullback_to_genbundle(
        &LiftedMetric::build(MetricKind::PwPlus, &e2),
        &e2,
        (&[2.0], &[3.0]),
        (&[1.0], &[5.0]),
        &[0.0, 0.0],
    )
    .unwrap();
    o.require(v == 13.0, format!("worked value {v} ≠ 13"));
    o
}

fn lifted_nijenhuis_max(
    name: &str,
    bundle: Bundle,
    structure: Structure,
    points: &[Vec<f64>],
) -> f64 {
    let chart = LiftedChart::new(&entry(name), bundle, (-1.0, 1.0)).unwrap();
    let j = match bundle {
        Bundle::Cotangent => build_jtilde(&chart, structure),
        Bundle::Tangent => build_jbar(&chart, structure),
    }
    .unwrap();
    let mut worst = 0.0_f64;
    for p in points {
        for a in 0..chart.dim() {
            for b in (a + 1)..chart.dim() {
                worst = worst.max(linalg::max_abs(
                    nijenhuis_endo(&j, &chart, a, b, p).unwrap(),
                ));
            }
        }
    }
    worst
}

fn norden(r: &Reports) -> Outcome {
    let mut o = Outcome::default();
    for ((name, _), rep) in &r.norden {
        for c in rep
            .checks
            .iter()
            .filter(|c| c.id.ends_with(".square") || c.id.ends_with(".displays"))
        {
            o.at_most(&format!("{name} {}", c.id), c.max_residual, 1e-10);
        }
    }
    let sample = |name: &str, b| {
        LiftedChart::new(&entry(name), b, (-1.0, 1.0))
            .unwrap()
            .sample(SAMPLES, 42)
    };
    for s in [Structure::Complex, Structure::Product] {
        let n = lifted_nijenhuis_max(E3, Bundle::Cotangent, s, &sample(E3, Bundle::Cotangent));
        o.at_most(&format!("torsion-hessian N_J̃ {s:?}"), n, 1e-9);
        let n = lifted_nijenhuis_max(E4, Bundle::Cotangent, s, &[vec![1.0, 0.0, 0.0, 0.0]]);
        o.at_least(&format!("non-statistical N_J̃ {s:?} at (1,0), y=0"), n, 0.5);
        o.note(format!(
            "non-statistical max |N_J̃ {s:?}| over frame pairs at (1,0), y=0 = {n}"
        ));
    }
    let n = lifted_nijenhuis_max(
        E1,
        Bundle::Tangent,
        Structure::Complex,
        &sample(E1, Bundle::Tangent),
    );
    o.at_most("euclidean2 N_J̄−", n, 1e-9);
    let n = lifted_nijenhuis_max(
        E3,
        Bundle::Tangent,
        Structure::Complex,
        &sample(E3, Bundle::Tangent),
    );
    o.at_least("torsion-hessian N_J̄−", n, 1e-2);
    o
}

fn ad_soundness(_: &Reports) -> Outcome {
    let mut o = Outcome::default();
    let mut r = rng(2024);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let n = 3;
        let e = random_expr(&mut r, n, 4);
        let p = random_point(&mut r, n);
        let jet = e.eval_jet2(&p).unwrap();
        let (g, h) = fd_grad_hess(|q| e.eval(q).unwrap(), &p, 5e-4);
        worst = worst.max(jet_vs_fd(&jet, &g, &h));
    }
    o.at_most("max relative error over 200 pairs", worst, 1e-6);
    o.note(format!("max relative error {worst:.2e}"));
    o
}

fn main() -> ExitCode {
    let reports = Reports::build();
    type Criterion = fn(&Reports) -> Outcome;
    let criteria: [(&str, Criterion); 11] = [
        ("integrability of Ĵ_c, Ĵ_p iff d^∇h = 0", integrability),
        ("d^∇̂ĥ = −½ d^∇h(·,·,h⁻¹γ) and d^∇̂ȟ = d^∇h", hat_d_identity),
        ("duality of ∇̂ and ∇̂*", duality),
        ("curvature of ∇̂ and ∇̂*", curvature),
        ("Ĵ parallel for ∇̂ and ∇̂*", parallelism),
        ("∇̌ identities", check_connection),
        ("lifted torsion and curvature closed forms", lift_formulas),
        ("prolongation of quasi-statistical structures", prolongation),
        ("pull-back identities", pullbacks),
        ("Norden structures", norden),
        ("jet derivatives vs finite differences", ad_soundness),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let out = check(&reports);
        let status = if out.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let mut line = format!("acceptance criterion {:>2} {status}: {title}", k + 1);
        if !out.notes.is_empty() {
            line.push_str(&format!(" [{}]", out.notes.join("; ")));
        }
        println!("{line}");
        for f in &out.failures {
            println!("    {f}");
        }
        failed += usize::from(!out.failures.is_empty());
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
