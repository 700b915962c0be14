use rand_chacha::ChaCha8Rng;

use super::{Spec, Tracker};
use crate::analyzer::{
    lemma31_residual, lemma41_residual, null2type_test, system44_residuals, Analysis, FEstimate, GridSpec, Outcome,
    Verdict,
};
use crate::catalog;
use crate::expr::SurfaceDef;

pub(super) fn properties() -> Vec<Spec> {
    vec![
        Spec { name: "lemma31-minimal-catalog", tolerance: 1e-8, body: lemma31_catalog },
        Spec { name: "lemma41-minimal-catalog", tolerance: 1e-7, body: lemma41_catalog },
        Spec { name: "lemma31-random-null-translations", tolerance: 1e-8, body: lemma31_random },
        Spec { name: "identities-vanish-on-degenerate-null", tolerance: 1e-10, body: degenerate_null },
        Spec { name: "hyperplane-normal-terms-vanish", tolerance: 1e-10, body: hyperplane_mu_terms },
        Spec { name: "identities-gated-by-minimality", tolerance: 0.0, body: minimality_gate },
        Spec { name: "system44-fails-on-generic", tolerance: 0.0, body: system44_generic },
    ]
}

pub(super) fn analyse(tr: &mut Tracker, s: &SurfaceDef) -> Option<Analysis> {
    match Analysis::new(s, &GridSpec::default()) {
        Ok(a) if a.excluded.is_empty() => Some(a),
        Ok(a) => {
            tr.error(format!("{}: {} grid points excluded, first: {:?}", s.name, a.excluded.len(), a.excluded[0]));
            None
        }
        Err(e) => {
            tr.error(format!("{}: {e}", s.name));
            None
        }
    }
}

/// Worst residual of a verdict that must hold; any other outcome counts
/// as an infinite residual.
fn record_holding(tr: &mut Tracker, name: &str, v: &Verdict) {
    let r = if v.outcome == Outcome::Holds { v.worst_residual } else { f64::INFINITY };
    tr.record(r, || {
        format!(
            "{name}: {} {:?} ({}) residual {:e} at {:?}",
            v.predicate, v.outcome, v.label, v.worst_residual, v.worst_point
        )
    });
}

fn lemma31_catalog(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in catalog::minimal_surfaces() {
        if let Some(a) = analyse(tr, &s) {
            record_holding(tr, &s.name, &lemma31_residual(&a));
        }
    }
}

fn lemma41_catalog(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in catalog::minimal_surfaces() {
        if let Some(a) = analyse(tr, &s) {
            record_holding(tr, &s.name, &lemma41_residual(&a));
        }
    }
}

fn lemma31_random(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for i in 0..5 {
        let s = catalog::random_null_translation(rng, &format!("random-null-{i}"));
        if let Some(a) = analyse(tr, &s) {
            record_holding(tr, &s.to_file_string(), &lemma31_residual(&a));
        }
    }
}

fn degenerate_null(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let s = catalog::builtin("degenerate-null").expect("catalog entry");
    let Some(a) = analyse(tr, &s) else { return };
    let mut verdicts = vec![lemma31_residual(&a), lemma41_residual(&a)];
    verdicts.extend(system44_residuals(&a, &FEstimate::Constant(0.0)));
    for v in &verdicts {
        record_holding(tr, &s.name, v);
    }
    // each side of both identities vanishes separately
    for p in &a.samples {
        let terms = [p.lap_nu.euclid_norm(), p.lap2_nu.euclid_norm(), p.k.abs(), p.kd.abs()];
        let worst = terms.iter().fold(0.0f64, |m, x| m.max(*x));
        tr.record(worst, || format!("degenerate-null at {:?}: ‖Δν‖, ‖Δ²ν‖, |K|, |K^D| = {terms:?}", p.point));
    }
}

fn hyperplane_mu_terms(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let s = catalog::builtin("hyperplane-minimal").expect("catalog entry");
    let Some(a) = analyse(tr, &s) else { return };
    for p in &a.samples {
        let terms = [p.kd.abs(), p.lap_kd.abs(), p.grad_kd_mu.euclid_norm()];
        let worst = terms.iter().fold(0.0f64, |m, x| m.max(*x));
        tr.record(worst, || format!("hyperplane-minimal at {:?}: |K^D|, |ΔK^D|, ‖(∇K^D)(μ)‖ = {terms:?}", p.point));
    }
}

fn minimality_gate(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let s = catalog::nonminimal_graph(0.2);
    let Some(a) = analyse(tr, &s) else { return };
    let h = a.max_mean_curvature();
    tr.agree(h > a.tol().nonzero_margin, || format!("nonminimal-graph: max ‖H‖ = {h:e}"));
    for v in [lemma31_residual(&a), lemma41_residual(&a), null2type_test(&a)] {
        tr.agree(v.outcome == Outcome::Inconclusive, || format!("nonminimal-graph: {} {:?}", v.predicate, v.outcome));
    }
}

fn system44_generic(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let s = catalog::builtin("generic-minimal").expect("catalog entry");
    let Some(a) = analyse(tr, &s) else { return };
    let n2 = null2type_test(&a);
    let fs: Vec<f64> = n2.details.iter().map(|r| r.value.unwrap_or(0.0)).collect();
    let fmean = fs.iter().sum::<f64>() / fs.len().max(1) as f64;
    for f in [FEstimate::Pointwise(fs.clone()), FEstimate::Constant(fmean)] {
        let vs = system44_residuals(&a, &f);
        let worst = vs.iter().map(|v| v.worst_residual).fold(0.0, f64::max);
        tr.agree(worst > a.tol().nonzero_margin, || format!("generic-minimal: largest system residual {worst:e}"));
    }
}
