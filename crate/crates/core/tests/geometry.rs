use gaussmap::algebra::{inner4, inner6};
use gaussmap::catalog::{builtin, canonical, control_surfaces, nonminimal_graph, plane};
use gaussmap::expr::SurfaceDef;
use gaussmap::geometry::{
    frame_at, gauss_maps, nu_field, relative_null_space, shape_operator, FramePoint, GeometryError, LocalFrame,
};

fn grid(n: usize) -> Vec<(f64, f64)> {
    let c = |i: usize| -0.8 + 1.6 * i as f64 / (n - 1) as f64;
    (0..n).flat_map(|i| (0..n).map(move |j| (c(i), c(j)))).collect()
}

fn surf(name: &str) -> SurfaceDef {
    builtin(name).unwrap()
}

fn check_invariants(fp: &FramePoint) {
    let tol = 1e-10;
    assert!(inner4(&fp.f1, &fp.f1).abs() < tol);
    assert!(inner4(&fp.f2, &fp.f2).abs() < tol);
    assert!((inner4(&fp.f1, &fp.f2) + 1.0).abs() < tol);
    assert!((inner4(&fp.e3, &fp.e3) - 1.0).abs() < tol);
    assert!((inner4(&fp.e4, &fp.e4) - 1.0).abs() < tol);
    assert!(inner4(&fp.e3, &fp.e4).abs() < tol);
    for f in [fp.f1, fp.f2] {
        for e in [fp.e3, fp.e4] {
            assert!(inner4(&f, &e).abs() < tol);
        }
    }
    assert!((inner6(&fp.nu, &fp.nu) + 1.0).abs() < tol);
    assert!((inner6(&fp.mu, &fp.mu) - 1.0).abs() < tol);
    assert!(inner6(&fp.nu, &fp.mu).abs() < tol);
    assert!(fp.g.det < 0.0);
}

#[test]
fn frame_invariants_on_catalog() {
    let mut surfaces = canonical();
    surfaces.push(plane());
    surfaces.push(nonminimal_graph(0.2));
    for s in &surfaces {
        for p in grid(9) {
            let fp = frame_at(s, p).unwrap_or_else(|e| panic!("{} at {p:?}: {e}", s.name));
            check_invariants(&fp);
        }
    }
}

#[test]
fn degenerate_null_example() {
    let fp = frame_at(&surf("degenerate-null"), (0.3, 0.7)).unwrap();
    assert!(fp.mean_curvature.euclid_norm() <= 1e-12);
    // f1 or f2 spans the ruling; whichever it is has h(f,f) = 0
    let h11 = fp.h_vec(0, 0).euclid_norm();
    let h22 = fp.h_vec(1, 1).euclid_norm();
    assert!(h11.min(h22) <= 1e-12, "{h11} {h22}");
    assert!(fp.k.abs() <= 1e-12 && fp.kd.abs() <= 1e-12);
    let rns = relative_null_space(&fp);
    assert_eq!(rns.dimension, 1);
    assert!(rns.degenerate);
    let g = rns.generator.unwrap();
    assert!(inner4(&g, &g).abs() < 1e-12);
}

#[test]
fn plane_and_riemannian_controls() {
    let fp = frame_at(&plane(), (0.1, -0.2)).unwrap();
    assert!((fp.g.det + 4.0).abs() < 1e-14);
    assert!(fp.h.iter().all(|h| h.abs() < 1e-14));
    assert_eq!(fp.k, 0.0);
    assert_eq!(fp.kd, 0.0);
    let rns = relative_null_space(&fp);
    assert_eq!((rns.dimension, rns.degenerate), (2, false));
    let a = shape_operator(&fp, &fp.e3).unwrap();
    assert!(a.iter().flatten().all(|x| *x == 0.0));
    let nu = nu_field(&plane(), (0.1, -0.2)).unwrap();
    assert!(nu.ds().value().euclid_norm() < 1e-14 && nu.dt().value().euclid_norm() < 1e-14);

    let riem = control_surfaces().into_iter().find(|s| s.name == "riemannian-graph").unwrap();
    assert!(matches!(frame_at(&riem, (0.0, 0.0)), Err(GeometryError::NotLorentzian { .. })));
}

#[test]
fn shape_operator_defining_relation() {
    let s = surf("generic-minimal");
    for p in grid(5) {
        let fp = frame_at(&s, p).unwrap();
        for xi in [fp.e3, fp.e4, fp.e3 * 0.3 + fp.e4 * -1.7] {
            let a = shape_operator(&fp, &xi).unwrap();
            for j in 0..2 {
                let ax = fp.f1 * a[0][j] + fp.f2 * a[1][j];
                for k in 0..2 {
                    let lhs = inner4(&ax, &fp.frame(k));
                    let rhs = inner4(&fp.h_vec(j, k), &xi);
                    assert!((lhs - rhs).abs() < 1e-10);
                }
            }
        }
        assert!(matches!(shape_operator(&fp, &fp.f1), Err(GeometryError::NotNormal(_))));
    }
    let fp = frame_at(&surf("degenerate-null"), (0.3, 0.7)).unwrap();
    let a = shape_operator(&fp, &fp.e3).unwrap();
    // the column of the ruling direction vanishes
    let col = if fp.h_vec(0, 0).euclid_norm() < 1e-12 { 0 } else { 1 };
    assert!(a[0][col].abs() < 1e-12 && a[1][col].abs() < 1e-12);
}

#[test]
fn minimality_of_null_translations() {
    for name in ["generic-minimal", "hyperplane-minimal", "degenerate-null"] {
        let s = surf(name);
        for p in grid(9) {
            let fp = frame_at(&s, p).unwrap();
            assert!(fp.mean_curvature.euclid_norm() <= 1e-10, "{name} {p:?}");
        }
    }
    let s = nonminimal_graph(0.2);
    let worst = grid(9)
        .into_iter()
        .map(|p| frame_at(&s, p).unwrap().mean_curvature.euclid_norm())
        .fold(0.0, f64::max);
    assert!(worst > 1e-4);
}

#[test]
fn hyperplane_surface_has_flat_normal_bundle() {
    let s = surf("hyperplane-minimal");
    let ks: Vec<f64> = grid(9)
        .into_iter()
        .map(|p| {
            let fp = frame_at(&s, p).unwrap();
            assert!(fp.kd.abs() < 1e-12);
            fp.k
        })
        .collect();
    let spread = ks.iter().cloned().fold(f64::MIN, f64::max) - ks.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread > 1e-3);
}

#[test]
fn generic_surface_has_curved_normal_bundle() {
    let fp = frame_at(&surf("generic-minimal"), (0.2, -0.4)).unwrap();
    assert!(fp.kd.abs() > 1e-3);
    assert_eq!(relative_null_space(&fp).dimension, 0);
}

#[test]
fn degenerate_null_gauss_map_depends_on_t_only() {
    let s = surf("degenerate-null");
    for p in grid(5) {
        let nu = nu_field(&s, p).unwrap();
        assert!(nu.0 .0.iter().all(|j| (1..=4).all(|a| j.coeff(a, 0).abs() <= 1e-12)));
        let fp = frame_at(&s, p).unwrap();
        assert_eq!(nu.value(), gauss_maps(&fp).0);
    }
}

#[test]
fn gauss_map_constraint_differentiates() {
    for s in canonical() {
        for p in grid(5) {
            let nu = nu_field(&s, p).unwrap();
            let v = nu.value();
            assert!(inner6(&nu.ds().value(), &v).abs() < 1e-10);
            assert!(inner6(&nu.dt().value(), &v).abs() < 1e-10);
        }
    }
}

#[test]
fn codazzi_holds() {
    let mut surfaces = canonical();
    surfaces.push(plane());
    for s in &surfaces {
        for p in grid(9) {
            let c = LocalFrame::new(s, p).unwrap().codazzi();
            assert!(c.general <= 1e-9, "{} {p:?} {c:?}", s.name);
            assert!(c.minimal[0] <= 1e-9 && c.minimal[1] <= 1e-9, "{} {p:?} {c:?}", s.name);
        }
    }
    let s = nonminimal_graph(0.2);
    for p in grid(9) {
        let c = LocalFrame::new(&s, p).unwrap().codazzi();
        assert!(c.general <= 1e-9, "{p:?} {c:?}");
    }
}

#[test]
fn outside_domain_is_rejected() {
    assert!(matches!(
        frame_at(&plane(), (0.9, 0.0)),
        Err(GeometryError::OutsideDomain(..))
    ));
}
