use rand_chacha::ChaCha8Rng;

use super::identities_suite::analyse;
use super::{Spec, Tracker};
use crate::algebra::Biv6;
use crate::analyzer::{
    fit_second_kind, lemma31_residual, null2type_test, pw1type_classify, theorem35_battery, Analysis, GridSpec, Outcome,
};
use crate::catalog;
use crate::expr::SurfaceDef;

pub(super) fn properties() -> Vec<Spec> {
    vec![
        Spec { name: "pw1type-expected-labels", tolerance: 0.0, body: expected_labels },
        Spec { name: "pw1type-coherence-with-flat-normal", tolerance: 0.0, body: coherence },
        Spec { name: "first-kind-f-equals-2k", tolerance: 1e-8, body: first_kind_f },
        Spec { name: "second-kind-never-fits", tolerance: 0.0, body: no_second_kind },
        Spec { name: "battery-degenerate-null-holds", tolerance: 1e-8, body: battery_degenerate },
        Spec { name: "battery-generic-fails-with-margin", tolerance: 0.0, body: battery_generic },
        Spec { name: "battery-consistency", tolerance: 0.0, body: battery_consistency },
        Spec { name: "null2type-never-violates", tolerance: 0.0, body: null2type },
        Spec { name: "determinism-across-thread-pools", tolerance: 0.0, body: determinism },
    ]
}

fn builtin(name: &str) -> SurfaceDef {
    catalog::builtin(name).expect("catalog entry")
}

fn minimal_with_random(rng: &mut ChaCha8Rng, n: usize) -> Vec<SurfaceDef> {
    let mut out = catalog::minimal_surfaces();
    for i in 0..n {
        out.push(catalog::random_null_translation(rng, &format!("random-null-{i}")));
    }
    out
}

fn expected_labels(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let expect = [
        ("degenerate-null", "harmonic"),
        ("plane", "harmonic"),
        ("hyperplane-minimal", "first-kind"),
        ("generic-minimal", "none"),
    ];
    for (name, label) in expect {
        if let Some(a) = analyse(tr, &builtin(name)) {
            let v = pw1type_classify(&a);
            tr.agree(v.label == label, || format!("{name}: expected {label}, got {} ({:?})", v.label, v.params));
        }
    }
}

fn coherence(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in minimal_with_random(rng, 4) {
        let Some(a) = analyse(tr, &s) else { continue };
        let flat = a.samples.iter().all(|p| p.kd.abs() <= a.tol().zero_tol);
        let v = pw1type_classify(&a);
        let first_or_harmonic = v.label == "first-kind" || v.label == "harmonic";
        let ok = if flat { first_or_harmonic } else { v.label == "none" };
        tr.agree(ok, || format!("{}: K^D ≡ 0 is {flat}, classified {}", s.name, v.label));
    }
}

fn first_kind_f(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let Some(a) = analyse(tr, &builtin("hyperplane-minimal")) else { return };
    let v = pw1type_classify(&a);
    if v.label != "first-kind" {
        return tr.error(format!("hyperplane-minimal classified {}", v.label));
    }
    let ks: Vec<f64> = a.samples.iter().map(|p| p.k).collect();
    let (lo, hi) = ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), k| (l.min(*k), h.max(*k)));
    tr.agree(hi - lo > a.tol().nonzero_margin, || format!("K is constant on the grid: [{lo}, {hi}]"));
    for (r, k) in v.details.iter().zip(ks) {
        let f = r.value.unwrap_or(f64::NAN);
        tr.record((f - 2.0 * k).abs(), || format!("at {:?}: f = {f}, 2K = {}", r.point, 2.0 * k));
    }
}

fn no_second_kind(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in minimal_with_random(rng, 4) {
        let Some(a) = analyse(tr, &s) else { continue };
        let lap: Vec<Biv6> = a.samples.iter().map(|p| p.lap_nu).collect();
        let nu: Vec<Biv6> = a.samples.iter().map(|p| p.nu).collect();
        let fit = fit_second_kind(&lap, &nu);
        let c = fit.c.euclid_norm();
        let second = !fit.diverged && fit.residual <= a.tol().identity_tol && c >= a.tol().nonzero_margin;
        tr.agree(!second, || format!("{}: second-kind fit with residual {:e} and ‖C‖ = {c:e}", s.name, fit.residual));
        let v = pw1type_classify(&a);
        tr.agree(v.label != "second-kind", || format!("{}: classified second-kind", s.name));
    }
}

fn battery_degenerate(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let Some(a) = analyse(tr, &builtin("degenerate-null")) else { return };
    let b = theorem35_battery(&a);
    tr.agree(b.consistent && b.hypothesis_met, || format!("consistent {} hypothesis {}", b.consistent, b.hypothesis_met));
    for v in &b.predicates {
        let r = if v.holds() { v.worst_residual } else { f64::INFINITY };
        tr.record(r, || format!("{} {:?} residual {:e}", v.predicate, v.outcome, v.worst_residual));
    }
}

fn battery_generic(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let Some(a) = analyse(tr, &builtin("generic-minimal")) else { return };
    let b = theorem35_battery(&a);
    tr.agree(b.consistent && b.hypothesis_met, || format!("consistent {} hypothesis {}", b.consistent, b.hypothesis_met));
    let margin = a.tol().nonzero_margin;
    for v in &b.predicates {
        let ok = v.outcome == Outcome::Fails && v.worst_residual >= margin;
        tr.agree(ok, || format!("{} {:?} residual {:e}", v.predicate, v.outcome, v.worst_residual));
    }
}

fn battery_consistency(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in minimal_with_random(rng, 4) {
        let Some(a) = analyse(tr, &s) else { continue };
        let b = theorem35_battery(&a);
        if s.name == "hyperplane-minimal" || s.name == "plane" {
            tr.agree(b.in_hyperplane.holds() && !b.hypothesis_met, || {
                format!("{}: hyperplane ratio {:e}", s.name, b.in_hyperplane.worst_residual)
            });
        } else if b.hypothesis_met {
            tr.agree(b.consistent, || {
                let outcomes: Vec<_> = b.predicates.iter().map(|v| (v.predicate.as_str(), v.outcome)).collect();
                format!("{}: {outcomes:?}", s.name)
            });
        }
    }
}

fn null2type(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in minimal_with_random(rng, 20) {
        let Some(a) = analyse(tr, &s) else { continue };
        let v = null2type_test(&a);
        let ok = v.label == "no-null-2-type-witness" || v.label == "harmonic";
        tr.agree(ok, || format!("{}: {} ({:?})", s.to_file_string(), v.label, v.params));
    }
}

fn determinism(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    let run = |threads: usize, s: &SurfaceDef| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| {
            Analysis::new(s, &GridSpec::default()).map(|a| {
                (lemma31_residual(&a), pw1type_classify(&a), null2type_test(&a), theorem35_battery(&a))
            })
        })
    };
    for name in ["generic-minimal", "degenerate-null"] {
        let s = builtin(name);
        match (run(1, &s), run(3, &s)) {
            (Ok(x), Ok(y)) => {
                // Debug output prints every float exactly
                tr.agree(format!("{x:?}") == format!("{y:?}"), || format!("{name}: verdicts differ between 1 and 3 threads"));
            }
            (Err(e), _) | (_, Err(e)) => tr.error(format!("{name}: {e}")),
        }
    }
}
