use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chart::{lifted_connection, LiftedChart};
use super::closed::{curvature_display, d_display, torsion_display};
use super::metric::{pullback_to_genbundle, LiftedMetric, MetricKind};
use super::Bundle;
use crate::genbundle::{GenJet, GenPoint, PairingKind};
use crate::geometry::{classify_points, GeometryError, ManifoldSpec, Symmetry};
use crate::report::{CheckSet, Report};
use crate::run::SuiteOptions;

const PAIR_SALT: u64 = 0x9A1_12B4;
const PAIRS_PER_POINT: usize = 2;

/// The pairing on TM ⊕ T*M that the pull-back of `kind` should reproduce,
/// with its factor, or `None` when h has no symmetry class.
fn pullback_target(kind: MetricKind, symmetry: Symmetry) -> Option<(PairingKind, f64)> {
    match kind {
        MetricKind::PwPlus => Some((PairingKind::Indefinite, -2.0)),
        MetricKind::PwMinus => Some((PairingKind::Symplectic, -2.0)),
        MetricKind::SasakiCotangent | MetricKind::SasakiTangent => Some((PairingKind::CheckH, 1.0)),
        MetricKind::Horizontal => PairingKind::natural(symmetry).map(|pk| (pk, -2.0)),
    }
}

fn pullback_anchor(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::PwPlus => "Φ*h̃_+ = −2⟨·,·⟩",
        MetricKind::PwMinus => "Φ*h̃_− = −2(·,·)",
        MetricKind::SasakiCotangent => "Φ*h^{S*} = ȟ",
        MetricKind::SasakiTangent => "Ψ*h^S = ȟ",
        MetricKind::Horizontal => "Ψ*h^H = −2⟨·,·⟩ (symmetric h), −2(·,·) (skew h)",
    }
}

fn d_anchor(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::PwPlus | MetricKind::PwMinus => {
            "d h̃_±: (H,H,H) = −y_l R^l_{ijk}, (H,H,V^k) = ±ε h^{kl} d^∇h(i,j,l), rest 0"
        }
        MetricKind::SasakiCotangent => "d h^{S*}: (H,H,H) = d^∇h, (H,H,V^k) = −y_l R^l_{ijr} h^{kr}, rest 0",
        MetricKind::SasakiTangent => {
            "d h^S: (H,H,H) = d^∇h, (H,H,V_k) = y^l R^r_{ijl} h_{rk}, (H_i,V_j,V_k) = (∇_i h)_{jk}, rest 0"
        }
        MetricKind::Horizontal => {
            "d h^H: (H,H,H_k) = y^l R^r_{ijl} h_{rk}, (H,H,V) = d^∇h, (H_i,V_j,H_k) = (∇_i h)_{jk}, rest 0"
        }
    }
}

/// Verifies the lifted geometry over T*M (∇̃ with h̃_±, h^{S*}) or TM
/// (∇̃̃ with h^S, h^H) on sampled lifted points.
///
/// Formula checks compare the frame-generic torsion, curvature and d of each
/// lift metric against their closed forms and always run. Vanishing checks
/// carry the hypotheses of the prolongation statements (∇ flat and
/// d^∇h = 0; for h^H also ∇h = 0) and are skipped when those fail.
pub fn lifted_invariant_suite(
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
    let tag = bundle.tag();
    let id = |rest: &str| format!("lift.{tag}.{rest}");
    let metrics: Vec<LiftedMetric> = MetricKind::on(bundle)
        .map(|k| LiftedMetric::build(k, spec))
        .collect();

    let reason = |ok: bool, why: &str| if ok { None } else { Some(why.to_string()) };
    let prolong = reason(cls.flat, "base connection is not flat")
        .or_else(|| reason(cls.quasi_statistical, "d^∇h ≠ 0"));
    let mut set = CheckSet::new(opts.tol);
    let conn_name = if bundle == Bundle::Cotangent {
        "∇̃"
    } else {
        "∇̃̃"
    };
    set.define(
        &id("torsion_formula"),
        &format!("frame torsion of {conn_name} equals its closed form"),
        None,
    );
    set.define(
        &id("curvature_formula"),
        &format!("frame curvature of {conn_name} equals its closed form"),
        None,
    );
    set.define(
        &id("flat"),
        &format!("{conn_name} is flat when ∇ is flat"),
        reason(cls.flat, "base connection is not flat"),
    );
    for m in &metrics {
        let k = m.kind();
        let no_class = if matches!(k, MetricKind::PwPlus | MetricKind::PwMinus) {
            reason(
                spec.symmetry() != Symmetry::General,
                "closed form needs symmetric or skew h",
            )
        } else {
            None
        };
        set.define(&id(&format!("{}.d_formula", k.id())), d_anchor(k), no_class);
        let vanish = if k == MetricKind::Horizontal {
            prolong
                .clone()
                .or_else(|| reason(cls.metric_parallel, "∇h ≠ 0"))
        } else {
            prolong.clone()
        };
        set.define(
            &id(&format!("{}.vanish", k.id())),
            &format!(
                "d^{conn_name} of the {} lift vanishes for flat quasi-statistical (M, h, ∇)",
                k.id()
            ),
            vanish,
        );
        let target = pullback_target(k, spec.symmetry());
        set.define(
            &id(&format!("pullback.{}", k.id())),
            pullback_anchor(k),
            reason(target.is_some(), "requires symmetric or skew-symmetric h"),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ PAIR_SALT);
    let mut lifted_max_r: f64 = 0.0;
    let mut lifted_max_d = vec![0.0_f64; metrics.len()];
    for p in &points {
        let (x, y) = chart.split(p);
        let gp = GenPoint::new(spec, x)?;
        let cp = conn.at(p)?;
        let torsion = cp.torsion_tensor();
        set.observe(
            &id("torsion_formula"),
            torsion.max_diff(&torsion_display(bundle, &gp, y)),
        );
        let curvature = cp.curvature_tensor();
        set.observe(
            &id("curvature_formula"),
            curvature.max_diff(&curvature_display(bundle, &gp)),
        );
        set.observe(&id("flat"), curvature.max_abs());
        lifted_max_r = lifted_max_r.max(curvature.max_abs());

        for (slot, m) in metrics.iter().enumerate() {
            let k = m.kind();
            let d = cp.d_nabla_tensor(&m.jets(p)?);
            if let Some(expected) = d_display(k, &gp, y) {
                set.observe(&id(&format!("{}.d_formula", k.id())), d.max_diff(&expected));
            }
            set.observe(&id(&format!("{}.vanish", k.id())), d.max_abs());
            lifted_max_d[slot] = lifted_max_d[slot].max(d.max_abs());

            if let Some((pk, factor)) = pullback_target(k, spec.symmetry()) {
                for _ in 0..PAIRS_PER_POINT {
                    let mut draw =
                        || -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect() };
                    let (sx, sa, tx, ta) = (draw(), draw(), draw(), draw());
                    let lhs = pullback_to_genbundle(m, spec, (&sx, &sa), (&tx, &ta), p)?;
                    let s = GenJet::constant(n, &sx, &sa);
                    let t = GenJet::constant(n, &tx, &ta);
                    let rhs = factor * gp.pairing_value(pk, &s, &t);
                    set.observe(&id(&format!("pullback.{}", k.id())), lhs - rhs);
                }
            }
        }
    }

    let mut report = Report::new(spec.label(), opts.seed, points.len());
    report.set_classification(&cls);
    let lifted_flat = lifted_max_r <= opts.tol;
    report.flags.insert(id("flat"), lifted_flat);
    for (m, max_d) in metrics.iter().zip(lifted_max_d) {
        let qs = max_d <= opts.tol;
        report
            .flags
            .insert(id(&format!("{}.quasi_statistical", m.kind().id())), qs);
        report
            .flags
            .insert(id(&format!("{}.hessian", m.kind().id())), qs && lifted_flat);
    }
    Ok(set.into_report(report))
}
