use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_structure, nijenhuis_endo, EndoField};
use crate::genbundle::{GenJet, GenPoint, Structure};
use crate::geometry::{classify_points, ConnectionPoint, GeometryError, ManifoldSpec, Symmetry};
use crate::lifts::{lifted_connection, Bundle, LiftedChart, LiftedMetric, MetricKind, Morphism};
use crate::linalg;
use crate::report::{CheckSet, Report};
use crate::run::SuiteOptions;

const SECTION_SALT: u64 = 0x4E0_7DE4;

/// Frame components of T(u, v).
fn torsion_on(cp: &ConnectionPoint, u: &[f64], v: &[f64]) -> Vec<f64> {
    let m = u.len();
    let mut out = vec![0.0; m];
    for a in 0..m {
        for b in 0..m {
            let w = u[a] * v[b];
            if w != 0.0 {
                for (c, t) in cp.torsion(a, b).into_iter().enumerate() {
                    out[c] += w * t;
                }
            }
        }
    }
    out
}

fn unit(m: usize, a: usize) -> Vec<f64> {
    let mut e = vec![0.0; m];
    e[a] = 1.0;
    e
}

/// For J parallel with respect to a connection with torsion T:
/// N_J(A, B) = −T(JA, JB) + J T(JA, B) + J T(A, JB) − J² T(A, B).
fn nijenhuis_from_torsion(cp: &ConnectionPoint, j: &[Vec<f64>], a: &[f64], b: &[f64]) -> Vec<f64> {
    let ja = linalg::mat_vec(j, a);
    let jb = linalg::mat_vec(j, b);
    let t1 = torsion_on(cp, &ja, &jb);
    let t2 = linalg::mat_vec(j, &torsion_on(cp, &ja, b));
    let t3 = linalg::mat_vec(j, &torsion_on(cp, a, &jb));
    let t4 = linalg::mat_vec(j, &linalg::mat_vec(j, &torsion_on(cp, a, b)));
    (0..a.len())
        .map(|c| -t1[c] + t2[c] + t3[c] - t4[c])
        .collect()
}

/// The sign ρ in g(JA, B) = ρ g(A, JB) for a lift metric, when defined.
fn metric_sign(kind: MetricKind, symmetry: Symmetry) -> Option<f64> {
    match kind {
        MetricKind::PwPlus => symmetry.sign(),
        MetricKind::PwMinus => symmetry.sign().map(|e| -e),
        MetricKind::Horizontal => Some(1.0),
        MetricKind::SasakiCotangent | MetricKind::SasakiTangent => None,
    }
}

/// Norden/Para-Norden checks for J̃_∓ (cotangent) or J̄_∓ (tangent).
///
/// J̃ is paired with the Patterson–Walker metrics, J̄ with h^H. The Norden
/// metric flags use h̃_+ and h^H. Integrability is a vanishing check with the
/// hypotheses of the corresponding statements: ∇ flat and d^∇h = 0 for J̃,
/// ∇ flat and torsion-free for J̄.
pub fn norden_suite(
    spec: &ManifoldSpec,
    bundle: Bundle,
    opts: &SuiteOptions,
) -> Result<Report, GeometryError> {
    let chart = LiftedChart::new(spec, bundle, opts.fiber)?;
    let conn = lifted_connection(&chart)?;
    let points = chart.sample(opts.samples.max(1), opts.seed);
    let base_points: Vec<Vec<f64>> = points.iter().map(|p| p[..spec.dim()].to_vec()).collect();
    spec.validate_at(&base_points)?;
    let cls = classify_points(&spec.connection(), spec.metric(), &base_points, opts.tol)?;
    let n = spec.dim();
    let m = 2 * n;
    let tag = bundle.tag();
    let morphism = Morphism::for_bundle(bundle);
    let metrics: Vec<LiftedMetric> = MetricKind::on(bundle)
        .filter(|k| metric_sign(*k, Symmetry::Symmetric).is_some())
        .map(|k| LiftedMetric::build(k, spec))
        .collect();
    let norden_metric = if bundle == Bundle::Cotangent {
        MetricKind::PwPlus
    } else {
        MetricKind::Horizontal
    };
    let structures = [Structure::Complex, Structure::Product];
    let endos: Vec<EndoField> = structures
        .iter()
        .map(|s| build_structure(&chart, *s))
        .collect::<Result<_, _>>()?;

    let reason = |ok: bool, why: &str| if ok { None } else { Some(why.to_string()) };
    let integrable_gate = match bundle {
        Bundle::Cotangent => reason(cls.flat, "base connection is not flat")
            .or_else(|| reason(cls.quasi_statistical, "d^∇h ≠ 0")),
        Bundle::Tangent => reason(cls.flat, "base connection is not flat")
            .or_else(|| reason(cls.torsion_free, "base connection has torsion")),
    };
    let (jname, mname, cname) = match bundle {
        Bundle::Cotangent => ("J̃", "Φ", "∇̃"),
        Bundle::Tangent => ("J̄", "Ψ", "∇̃̃"),
    };
    let mut set = CheckSet::new(opts.tol);
    let cid = |e: &EndoField, rest: &str| format!("norden.{tag}.{}.{rest}", e.id());
    for e in &endos {
        let sq = if e.structure() == Structure::Complex {
            "−Id"
        } else {
            "+Id"
        };
        set.define(&cid(e, "square"), &format!("{jname}² = {sq}"), None);
        if e.structure() == Structure::Product {
            set.define(
                &cid(e, "rank"),
                &format!("trace {jname}_+ = 0 (eigenbundles of equal rank)"),
                None,
            );
        }
        set.define(
            &cid(e, "conjugation"),
            &format!("{jname} ∘ {mname} = {mname} ∘ Ĵ"),
            None,
        );
        if bundle == Bundle::Cotangent {
            set.define(
                &cid(e, "displays"),
                "h̃_+(J̃X_i^H, X_j^H) = h_ij, h̃_+(J̃∂y_i, ∂y_j) = ∓h^{ij}, mixed terms 0",
                None,
            );
        }
        for g in &metrics {
            let k = g.kind();
            set.define(
                &cid(e, &format!("metric_sign.{}", k.id())),
                &format!(
                    "g(JA, B) = ρ g(A, JB) for g = {}, ρ = ±1 from the lift and the symmetry of h",
                    k.id()
                ),
                reason(
                    metric_sign(k, spec.symmetry()).is_some(),
                    "requires symmetric or skew-symmetric h",
                ),
            );
        }
        set.define(&cid(e, "parallel"), &format!("{cname}{jname} = 0"), None);
        set.define(
            &cid(e, "nijenhuis_formula"),
            &format!("N_{jname}(A,B) = −T(JA,JB) + J T(JA,B) + J T(A,JB) − J² T(A,B), T the torsion of {cname}"),
            None,
        );
        set.define(
            &cid(e, "integrable"),
            &format!("N_{jname} = 0"),
            integrable_gate.clone(),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ SECTION_SALT);
    let mut flags_sym = vec![0.0_f64; endos.len()];
    for p in &points {
        let (x, _) = chart.split(p);
        let gp = GenPoint::new(spec, x)?;
        let cp = conn.at(p)?;
        let mut sections: Vec<(Vec<f64>, Vec<f64>)> = (0..m)
            .map(|a| {
                let e = unit(m, a);
                (e[..n].to_vec(), e[n..].to_vec())
            })
            .collect();
        for _ in 0..2 {
            let mut draw = || -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect() };
            sections.push((draw(), draw()));
        }
        let gvals: Vec<(MetricKind, Vec<Vec<f64>>)> = metrics
            .iter()
            .map(|g| Ok((g.kind(), g.values(p)?)))
            .collect::<Result<_, GeometryError>>()?;

        for (slot, e) in endos.iter().enumerate() {
            let jets = e.jets(p)?;
            let j: Vec<Vec<f64>> = jets
                .iter()
                .map(|r| r.iter().map(|v| v.value()).collect())
                .collect();
            let j2 = linalg::mat_mul(&j, &j);
            for a in 0..m {
                for b in 0..m {
                    let id = if a == b { e.square_sign() } else { 0.0 };
                    set.observe(&cid(e, "square"), j2[a][b] - id);
                }
            }
            if e.structure() == Structure::Product {
                set.observe(&cid(e, "rank"), (0..m).map(|a| j[a][a]).sum());
            }

            for (sx, sa) in &sections {
                let s = GenJet::constant(n, sx, sa);
                let js = gp.j_apply(e.structure(), &s);
                let lhs = linalg::mat_vec(&j, &morphism.apply(spec, x, sx, sa)?);
                let rhs = morphism.apply(spec, x, &js.vector_values(), &js.covector_values())?;
                set.observe(
                    &cid(e, "conjugation"),
                    linalg::max_abs(lhs.iter().zip(&rhs).map(|(a, b)| a - b)),
                );
            }

            for (kind, g) in &gvals {
                let gja = |a: usize, b: usize| (0..m).map(|c| j[c][a] * g[c][b]).sum::<f64>();
                let gjb = |a: usize, b: usize| (0..m).map(|c| j[c][b] * g[a][c]).sum::<f64>();
                if *kind == MetricKind::PwPlus {
                    let (h, hi) = (gp.metric(), gp.inverse_metric());
                    for a in 0..n {
                        for b in 0..n {
                            set.observe_all(
                                &cid(e, "displays"),
                                [
                                    gja(a, b) - h[a][b],
                                    gja(n + a, n + b) - e.square_sign() * hi[a][b],
                                    gja(a, n + b),
                                    gja(n + a, b),
                                ],
                            );
                        }
                    }
                }
                if *kind == norden_metric {
                    for a in 0..m {
                        for b in 0..m {
                            flags_sym[slot] = flags_sym[slot].max((gja(a, b) - gjb(a, b)).abs());
                        }
                    }
                }
                if let Some(rho) = metric_sign(*kind, spec.symmetry()) {
                    let id = cid(e, &format!("metric_sign.{}", kind.id()));
                    for a in 0..m {
                        for b in 0..m {
                            set.observe(&id, gja(a, b) - rho * gjb(a, b));
                        }
                    }
                }
            }

            // (∇_a J)^c_b = e_a(J^c_b) + Γ^c_{ad} J^d_b − J^c_d Γ^d_{ab}
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        let mut v = cp.frame.derivative(a, &jets[c][b]);
                        for d in 0..m {
                            v += cp.gamma[c][a][d].value() * j[d][b]
                                - j[c][d] * cp.gamma[d][a][b].value();
                        }
                        set.observe(&cid(e, "parallel"), v);
                    }
                }
            }

            for a in 0..m {
                for b in (a + 1)..m {
                    let nij = nijenhuis_endo(e, &chart, a, b, p)?;
                    let closed = nijenhuis_from_torsion(&cp, &j, &unit(m, a), &unit(m, b));
                    set.observe(
                        &cid(e, "nijenhuis_formula"),
                        linalg::max_abs(nij.iter().zip(&closed).map(|(x, y)| x - y)),
                    );
                    set.observe_all(&cid(e, "integrable"), nij);
                }
            }
        }
    }

    let mut report = Report::new(spec.label(), opts.seed, points.len());
    report.set_classification(&cls);
    let flag_checks = set_snapshot(&set, &endos, &cid);
    let tol = opts.tol;
    for (slot, e) in endos.iter().enumerate() {
        let (square, rank, integrable) = flag_checks[slot];
        report.flags.insert(cid(e, "square_ok"), square <= tol);
        report.flags.insert(cid(e, "rank_ok"), rank <= tol);
        report
            .flags
            .insert(cid(e, "h_symmetric"), flags_sym[slot] <= tol);
        report.flags.insert(cid(e, "integrable"), integrable <= tol);
    }
    Ok(set.into_report(report))
}

fn set_snapshot(
    set: &CheckSet,
    endos: &[EndoField],
    cid: &impl Fn(&EndoField, &str) -> String,
) -> Vec<(f64, f64, f64)> {
    endos
        .iter()
        .map(|e| {
            let get = |k: &str| set.residual(&cid(e, k)).unwrap_or(0.0);
            (get("square"), get("rank"), get("integrable"))
        })
        .collect()
}
