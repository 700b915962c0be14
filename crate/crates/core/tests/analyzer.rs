use gaussmap::analyzer::{
    lemma31_residual, lemma41_residual, matrices45_check, null2type_test, pw1type_classify, system44_residuals,
    theorem35_battery, Analysis, AnalyzerError, FEstimate, GridSpec, Outcome, Tolerances,
};
use gaussmap::catalog::{builtin, nonminimal_graph, riemannian_graph};
use gaussmap::expr::Domain;

fn analysis(name: &str) -> Analysis {
    let a = Analysis::new(&builtin(name).unwrap(), &GridSpec::default()).unwrap();
    assert!(a.excluded.is_empty(), "{name}: {:?}", a.excluded.first());
    a
}

#[test]
fn grid_validation() {
    let d = Domain::square(-0.8, 0.8);
    assert!(matches!(GridSpec::new(d, 2), Err(AnalyzerError::InvalidGrid(_))));
    assert!(GridSpec::new(Domain::square(0.5, 0.5), 5).is_err());
    let bad = Tolerances { identity_tol: 1e-12, ..Tolerances::default() };
    assert!(GridSpec::new(d, 5).unwrap().with_tol(bad).is_err());
    let neg = Tolerances { zero_tol: -1.0, ..Tolerances::default() };
    assert!(GridSpec::new(d, 5).unwrap().with_tol(neg).is_err());
}

#[test]
fn grid_points_are_lexicographic_and_closed() {
    let g = GridSpec::default();
    let pts = g.points();
    assert_eq!(pts.len(), 289);
    assert_eq!(pts[0], (-0.8, -0.8));
    assert_eq!(pts[1].0, -0.8);
    assert_eq!(*pts.last().unwrap(), (0.8, 0.8));
    assert!(pts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn lemma31_on_catalog() {
    let v = lemma31_residual(&analysis("degenerate-null"));
    assert_eq!(v.outcome, Outcome::Holds);
    assert!(v.worst_residual <= 1e-10);
    // every residual is zero, so the first grid point is the worst
    assert_eq!(v.worst_point, Some([-0.8, -0.8]));

    let v = lemma31_residual(&analysis("generic-minimal"));
    assert_eq!(v.outcome, Outcome::Holds);
    assert!(v.worst_residual <= 1e-8, "{:e}", v.worst_residual);
    assert_eq!(v.details.len(), 289);
}

#[test]
fn lemma41_on_catalog() {
    for name in ["degenerate-null", "generic-minimal", "hyperplane-minimal"] {
        let v = lemma41_residual(&analysis(name));
        assert_eq!(v.outcome, Outcome::Holds, "{name}");
        assert!(v.worst_residual <= 1e-7, "{name}: {:e}", v.worst_residual);
    }
    let a = analysis("degenerate-null");
    assert!(a.samples.iter().all(|p| p.lap2_nu.euclid_norm() <= 1e-10));
}

#[test]
fn nonminimal_control_is_inconclusive() {
    let a = Analysis::new(&nonminimal_graph(0.2), &GridSpec::default()).unwrap();
    assert!(!a.is_minimal());
    assert!(a.max_mean_curvature() > 1e-4);
    for v in [lemma31_residual(&a), lemma41_residual(&a), null2type_test(&a)] {
        assert_eq!(v.outcome, Outcome::Inconclusive, "{}", v.predicate);
    }
    let b = theorem35_battery(&a);
    assert!(!b.minimal && !b.hypothesis_met && !b.consistent);
}

#[test]
fn pointwise_one_type_labels() {
    assert_eq!(pw1type_classify(&analysis("degenerate-null")).label, "harmonic");
    assert_eq!(pw1type_classify(&analysis("plane")).label, "harmonic");
    assert_eq!(pw1type_classify(&analysis("generic-minimal")).label, "none");

    let a = analysis("hyperplane-minimal");
    let v = pw1type_classify(&a);
    assert_eq!(v.label, "first-kind");
    for (r, p) in v.details.iter().zip(&a.samples) {
        assert!((r.value.unwrap() - 2.0 * p.k).abs() <= 1e-8);
    }
}

#[test]
fn generic_surface_second_kind_fit_is_rejected() {
    let v = pw1type_classify(&analysis("generic-minimal"));
    let residual = v.params["second_kind_residual"];
    let c = v.params["c_norm"];
    assert!(!(residual <= 1e-8 && c >= 1e-4), "residual {residual:e}, ‖C‖ {c:e}");
}

#[test]
fn battery_on_degenerate_null_surface() {
    let b = theorem35_battery(&analysis("degenerate-null"));
    assert!(b.minimal && b.hypothesis_met && b.consistent);
    assert!(!b.in_hyperplane.holds());
    assert_eq!(b.predicates.len(), 6);
    for v in &b.predicates {
        assert!(v.holds() && v.worst_residual <= 1e-8, "{} {:e}", v.predicate, v.worst_residual);
    }
}

#[test]
fn battery_on_generic_surface() {
    let b = theorem35_battery(&analysis("generic-minimal"));
    assert!(b.hypothesis_met && b.consistent);
    for v in &b.predicates {
        assert_eq!(v.outcome, Outcome::Fails, "{}", v.predicate);
        assert!(v.worst_residual >= 1e-4, "{} {:e}", v.predicate, v.worst_residual);
    }
}

#[test]
fn battery_on_hyperplane_surface() {
    let b = theorem35_battery(&analysis("hyperplane-minimal"));
    assert!(b.in_hyperplane.holds(), "ratio {:e}", b.in_hyperplane.worst_residual);
    assert!(!b.hypothesis_met);
}

#[test]
fn system44_residuals_on_catalog() {
    let a = analysis("degenerate-null");
    for v in system44_residuals(&a, &FEstimate::Constant(0.0)) {
        assert!(v.holds() && v.worst_residual <= 1e-10, "{}", v.predicate);
    }
    let a = analysis("generic-minimal");
    let n2 = null2type_test(&a);
    let f: Vec<f64> = n2.details.iter().map(|r| r.value.unwrap()).collect();
    let worst = system44_residuals(&a, &FEstimate::Pointwise(f))
        .iter()
        .map(|v| v.worst_residual)
        .fold(0.0, f64::max);
    assert!(worst > 1e-4, "{worst:e}");
}

#[test]
fn matrix_products_are_diagnostic() {
    let v = matrices45_check(&analysis("degenerate-null"));
    assert_eq!(v.label, "diagnostic");
    assert!(v.worst_residual <= 1e-10);
    let v = matrices45_check(&analysis("generic-minimal"));
    assert!(v.worst_residual > 1e-4);
}

#[test]
fn null_two_type_verdicts() {
    assert_eq!(null2type_test(&analysis("degenerate-null")).label, "harmonic");
    for name in ["generic-minimal", "hyperplane-minimal"] {
        let v = null2type_test(&analysis(name));
        assert_eq!(v.label, "no-null-2-type-witness", "{name}: {:?}", v.params);
    }
    let v = null2type_test(&analysis("hyperplane-minimal"));
    assert!(v.params["f_spread"] > 1e-4);
}

#[test]
fn engine_failures_are_excluded_with_reasons() {
    let a = Analysis::new(&riemannian_graph(), &GridSpec::default()).unwrap();
    assert!(a.samples.is_empty());
    assert_eq!(a.excluded.len(), 289);
    assert!(a.excluded[0].reason.contains("not Lorentzian"));
    assert_eq!(a.excluded_fraction(), 1.0);
}
