use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{
    fd_partial, frame_laplacian, null_chart_christoffel, null_chart_laplacian, riemann_curvature, wedge_normal_curvature,
};
use super::{Spec, Tracker};
use crate::algebra::{inner4, inner6, Vec4};
use crate::analyzer::GridSpec;
use crate::catalog;
use crate::expr::{Domain, SurfaceDef};
use crate::geometry::{frame_at, nu_field, shape_operator, FramePoint, GeometryError, LocalFrame};
use crate::jet::{Jet, DEFAULT_ORDER};

pub(super) fn properties() -> Vec<Spec> {
    vec![
        Spec { name: "frame-invariants", tolerance: 1e-10, body: frame_invariants },
        Spec { name: "catalog-passes-frame", tolerance: 0.0, body: catalog_frames },
        Spec { name: "gauss-curvature-riemann-oracle", tolerance: 1e-9, body: gauss_oracle },
        Spec { name: "normal-curvature-wedge-oracle", tolerance: 1e-9, body: ricci_oracle },
        Spec { name: "laplacian-frame-vs-coordinate", tolerance: 1e-10, body: laplacian_forms },
        Spec { name: "laplacian-null-chart", tolerance: 1e-10, body: null_chart_laplace },
        Spec { name: "christoffel-null-chart-pattern", tolerance: 1e-9, body: null_chart_connection },
        Spec { name: "laplacian-product-rule", tolerance: 1e-10, body: product_rule },
        Spec { name: "gradient-defining-property", tolerance: 1e-10, body: gradient_property },
        Spec { name: "gradient-finite-difference", tolerance: 1e-5, body: gradient_fd },
        Spec { name: "gauss-map-constraint", tolerance: 1e-10, body: gauss_map_constraint },
        Spec { name: "null-translation-minimal", tolerance: 1e-10, body: null_translation_minimal },
        Spec { name: "codazzi", tolerance: 1e-9, body: codazzi },
        Spec { name: "shape-operator-defining-relation", tolerance: 1e-10, body: shape_relation },
        Spec { name: "relative-null-space", tolerance: 0.0, body: null_space },
    ]
}

/// Every catalog surface with a Lorentzian immersion.
fn lorentzian_surfaces() -> Vec<SurfaceDef> {
    let mut out = catalog::canonical();
    out.push(catalog::plane());
    out.push(catalog::nonminimal_graph(0.2));
    out
}

fn grid_points(s: &SurfaceDef) -> Vec<(f64, f64)> {
    GridSpec::new(s.domain, 17).map(|g| g.points()).unwrap_or_default()
}

fn random_point(rng: &mut ChaCha8Rng, d: &Domain) -> (f64, f64) {
    (rng.random_range(d.s_min..=d.s_max), rng.random_range(d.t_min..=d.t_max))
}

fn random_jet(rng: &mut ChaCha8Rng, base: (f64, f64)) -> Jet {
    let n = (DEFAULT_ORDER + 1) * (DEFAULT_ORDER + 2) / 2;
    let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Jet::from_coeffs(base, DEFAULT_ORDER, &c).expect("order within range")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn with_frame(tr: &mut Tracker, s: &SurfaceDef, p: (f64, f64), body: impl FnOnce(&mut Tracker, FramePoint)) {
    match frame_at(s, p) {
        Ok(fp) => body(tr, fp),
        Err(e) => tr.error(format!("{} at {p:?}: {e}", s.name)),
    }
}

fn with_local(tr: &mut Tracker, s: &SurfaceDef, p: (f64, f64), body: impl FnOnce(&mut Tracker, LocalFrame)) {
    match LocalFrame::new(s, p) {
        Ok(lf) => body(tr, lf),
        Err(e) => tr.error(format!("{} at {p:?}: {e}", s.name)),
    }
}

fn frame_invariants(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for p in grid_points(&s) {
            with_frame(tr, &s, p, |tr, fp| {
                let (f1, f2, e3, e4) = (fp.f1, fp.f2, fp.e3, fp.e4);
                let mut r = [
                    inner4(&f1, &f1),
                    inner4(&f2, &f2),
                    inner4(&f1, &f2) + 1.0,
                    inner4(&e3, &e3) - 1.0,
                    inner4(&e4, &e4) - 1.0,
                    inner4(&e3, &e4),
                    inner4(&f1, &e3),
                    inner4(&f1, &e4),
                    inner4(&f2, &e3),
                    inner4(&f2, &e4),
                    inner6(&fp.nu, &fp.nu) + 1.0,
                    inner6(&fp.mu, &fp.mu) - 1.0,
                    inner6(&fp.nu, &fp.mu),
                ]
                .iter()
                .fold(0.0f64, |m, x| m.max(x.abs()));
                if !(fp.g.det < 0.0) {
                    r = f64::INFINITY;
                }
                tr.record(r, || format!("{} at {p:?}: det g = {}", s.name, fp.g.det));
            });
        }
    }
}

fn catalog_frames(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for p in grid_points(&s) {
            let r = frame_at(&s, p);
            tr.agree(r.is_ok(), || format!("{} at {p:?}: {:?}", s.name, r.err()));
        }
    }
    let rg = catalog::riemannian_graph();
    let r = frame_at(&rg, (0.1, 0.2));
    tr.agree(matches!(r, Err(GeometryError::NotLorentzian { .. })), || {
        format!("riemannian-graph accepted: {:?}", r.as_ref().map(|fp| fp.g.det))
    });
}

fn gauss_oracle(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for _ in 0..100 {
            let p = random_point(rng, &s.domain);
            with_frame(tr, &s, p, |tr, fp| {
                let intrinsic = riemann_curvature(&fp.x_jets);
                tr.record(rel(fp.k, intrinsic), || format!("{} at {p:?}: gauss={} riemann={intrinsic}", s.name, fp.k));
            });
        }
    }
}

fn ricci_oracle(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in catalog::minimal_surfaces() {
        for _ in 0..100 {
            let p = random_point(rng, &s.domain);
            with_frame(tr, &s, p, |tr, fp| {
                let w = wedge_normal_curvature(&fp);
                tr.record(rel(fp.kd, w), || format!("{} at {p:?}: ricci={} wedge={w}", s.name, fp.kd));
            });
        }
    }
}

fn laplacian_forms(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for _ in 0..40 {
            let p = random_point(rng, &s.domain);
            let phi = random_jet(rng, p);
            with_local(tr, &s, p, |tr, lf| match lf.laplacian(&phi) {
                Ok(c) => {
                    let (c, f) = (c.value(), frame_laplacian(&lf, &phi));
                    tr.record(rel(c, f), || format!("{} at {p:?}: coordinate={c} frame={f}", s.name));
                }
                Err(e) => tr.error(format!("{} at {p:?}: {e}", s.name)),
            });
        }
    }
}

/// Catalog surfaces in null coordinates plus random null translations.
fn null_chart_surfaces(rng: &mut ChaCha8Rng) -> Vec<SurfaceDef> {
    let mut out = catalog::minimal_surfaces();
    for i in 0..5 {
        out.push(catalog::random_null_translation(rng, &format!("random-null-{i}")));
    }
    out
}

fn null_chart_laplace(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in null_chart_surfaces(rng) {
        for _ in 0..30 {
            let p = random_point(rng, &s.domain);
            let phi = random_jet(rng, p);
            with_local(tr, &s, p, |tr, lf| {
                let Some(chart) = null_chart_laplacian(&lf.x.0, &phi) else {
                    return tr.error(format!("{} at {p:?}: chart is not in null form", s.name));
                };
                let c = lf.laplacian(&phi).map(|j| j.value()).unwrap_or(f64::NAN);
                let f = frame_laplacian(&lf, &phi);
                tr.record(rel(c, chart).max(rel(f, chart)), || {
                    format!("{} at {p:?}: coordinate={c} frame={f} null-chart={chart}", s.name)
                });
            });
        }
    }
}

fn null_chart_connection(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in null_chart_surfaces(rng) {
        for _ in 0..30 {
            let p = random_point(rng, &s.domain);
            with_frame(tr, &s, p, |tr, fp| {
                let Some(pattern) = null_chart_christoffel(&fp.x_jets) else {
                    return tr.error(format!("{} at {p:?}: chart is not in null form", s.name));
                };
                let mut worst = 0.0f64;
                for k in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            worst = worst.max(rel(fp.christoffel[k][i][j], pattern[k][i][j]));
                        }
                    }
                }
                tr.record(worst, || format!("{} at {p:?}: engine={:?} pattern={pattern:?}", s.name, fp.christoffel));
            });
        }
    }
}

/// `∇φ(ξ)`: derivative of `ξ` along the gradient of `φ`.
fn along_gradient(lf: &LocalFrame, phi: &Jet, xi: &Jet) -> Result<f64, GeometryError> {
    let g = lf.gradient(phi)?.coord_values();
    Ok(g[0] * xi.ds().value() + g[1] * xi.dt().value())
}

fn product_rule(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for _ in 0..40 {
            let p = random_point(rng, &s.domain);
            let phi = random_jet(rng, p);
            let xi = random_jet(rng, p);
            with_local(tr, &s, p, |tr, lf| {
                // ξ a random scalar field, then the Gauss map itself
                let mut fields = vec![xi];
                fields.extend(lf.nu.0 .0.iter().map(|j| j.truncate(DEFAULT_ORDER)));
                for xi in fields {
                    let terms = (|| -> Result<[f64; 4], GeometryError> {
                        Ok([
                            lf.laplacian(&(phi * xi))?.value(),
                            lf.laplacian(&phi)?.value() * xi.value(),
                            phi.value() * lf.laplacian(&xi)?.value(),
                            2.0 * along_gradient(&lf, &phi, &xi)?,
                        ])
                    })();
                    match terms {
                        Ok(t) => {
                            let r = t[0] - t[1] - t[2] + t[3];
                            let scale = t.iter().fold(1.0f64, |m, x| m.max(x.abs()));
                            tr.record(r.abs() / scale, || format!("{} at {p:?}: terms {t:?}", s.name));
                        }
                        Err(e) => tr.error(format!("{} at {p:?}: {e}", s.name)),
                    }
                }
            });
        }
    }
}

fn gradient_property(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for _ in 0..40 {
            let p = random_point(rng, &s.domain);
            let phi = random_jet(rng, p);
            with_local(tr, &s, p, |tr, lf| {
                let grad = match lf.gradient(&phi) {
                    Ok(g) => g.vector.values(),
                    Err(e) => return tr.error(format!("{} at {p:?}: {e}", s.name)),
                };
                let frame = [lf.f1.values(), lf.f2.values()];
                for (a, f) in frame.iter().enumerate() {
                    let want = lf.frame_derivative(a, &phi).map(|j| j.value()).unwrap_or(f64::NAN);
                    let got = inner4(&grad, f);
                    tr.record(rel(got, want), || format!("{} at {p:?}: ⟨∇φ,f{}⟩={got} f(φ)={want}", s.name, a + 1));
                }
                let zero = Jet::constant(3.0, p, DEFAULT_ORDER);
                let g0 = lf.gradient(&zero).map(|g| g.vector.values().euclid_norm()).unwrap_or(f64::NAN);
                tr.record(g0, || format!("{} at {p:?}: gradient of a constant has norm {g0}", s.name));
            });
        }
    }
}

fn gradient_fd(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    let s = catalog::builtin("generic-minimal").expect("catalog entry");
    let k_at = |s_: f64, t_: f64| frame_at(&s, (s_, t_)).map(|fp| fp.k).unwrap_or(f64::NAN);
    let h = 1e-3;
    for _ in 0..30 {
        let p = (rng.random_range(-0.7..0.7), rng.random_range(-0.7..0.7));
        with_local(tr, &s, p, |tr, lf| {
            let grad = match lf.gradient(&lf.k) {
                Ok(g) => g.vector.values(),
                Err(e) => return tr.error(format!("at {p:?}: {e}")),
            };
            let ks = fd_partial(k_at, p, 1, 0, h);
            let kt = fd_partial(k_at, p, 0, 1, h);
            let c = lf.f_coeffs.map(|r| r.map(|j| j.value()));
            let d = [c[0][0] * ks + c[0][1] * kt, c[1][0] * ks + c[1][1] * kt];
            let fd: Vec4 = lf.f2.values() * (-d[0]) - lf.f1.values() * d[1];
            let err = (grad - fd).euclid_norm() / fd.euclid_norm().max(1.0);
            tr.record(err, || format!("at {p:?}: jet ∇K={grad:?} finite-difference ∇K={fd:?}"));
        });
    }
}

fn gauss_map_constraint(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for _ in 0..40 {
            let p = random_point(rng, &s.domain);
            match (nu_field(&s, p), frame_at(&s, p)) {
                (Ok(f), Ok(fp)) => {
                    let nu = f.value();
                    let ds = inner6(&f.ds().value(), &nu).abs();
                    let dt = inner6(&f.dt().value(), &nu).abs();
                    let same = (nu - fp.nu).euclid_norm();
                    tr.record(ds.max(dt).max(same), || format!("{} at {p:?}: ⟨ν_s,ν⟩={ds:e} ⟨ν_t,ν⟩={dt:e}", s.name));
                }
                (Err(e), _) | (_, Err(e)) => tr.error(format!("{} at {p:?}: {e}", s.name)),
            }
        }
    }
    // ν of the degenerate null surface depends on t only
    let s = catalog::builtin("degenerate-null").expect("catalog entry");
    for p in grid_points(&s) {
        match nu_field(&s, p) {
            Ok(f) => {
                let d = f.ds();
                let worst = d.0 .0.iter().flat_map(|j| j.coeffs()).fold(0.0f64, |m, c| m.max(c.abs()));
                tr.record(worst, || format!("degenerate-null at {p:?}: ∂ν/∂s coefficient {worst:e}"));
            }
            Err(e) => tr.error(format!("degenerate-null at {p:?}: {e}")),
        }
    }
}

fn null_translation_minimal(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    let mut surfaces: Vec<SurfaceDef> = catalog::minimal_surfaces();
    for i in 0..10 {
        surfaces.push(catalog::random_null_translation(rng, &format!("random-null-{i}")));
    }
    for s in surfaces {
        for p in grid_points(&s) {
            with_frame(tr, &s, p, |tr, fp| {
                let h = fp.mean_curvature.euclid_norm();
                tr.record(h, || format!("{} at {p:?}: ‖H‖ = {h:e}", s.name));
            });
        }
    }
}

fn codazzi(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        let minimal = s.name != "nonminimal-graph";
        for p in grid_points(&s) {
            with_local(tr, &s, p, |tr, lf| {
                let c = lf.codazzi();
                let r = if minimal { c.general.max(c.minimal[0]).max(c.minimal[1]) } else { c.general };
                tr.record(r, || format!("{} at {p:?}: {c:?}", s.name));
            });
        }
    }
}

fn shape_relation(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for s in lorentzian_surfaces() {
        for _ in 0..30 {
            let p = random_point(rng, &s.domain);
            let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            with_frame(tr, &s, p, |tr, fp| {
                let xi = fp.e3 * a + fp.e4 * b;
                let m = match shape_operator(&fp, &xi) {
                    Ok(m) => m,
                    Err(e) => return tr.error(format!("{} at {p:?}: {e}", s.name)),
                };
                let mut worst = 0.0f64;
                for j in 0..2 {
                    // A f_j = m[0][j] f1 + m[1][j] f2
                    let af = fp.f1 * m[0][j] + fp.f2 * m[1][j];
                    for k in 0..2 {
                        let lhs = inner4(&af, &fp.frame(k));
                        let rhs = inner4(&fp.h_vec(j, k), &xi);
                        worst = worst.max(rel(lhs, rhs));
                    }
                }
                tr.record(worst, || format!("{} at {p:?}: ξ = {a}e3 + {b}e4, A = {m:?}", s.name));
            });
        }
    }
    let fp = frame_at(&catalog::plane(), (0.1, -0.3)).expect("plane frame");
    tr.agree(!shape_operator(&fp, &fp.f1).is_ok(), || "tangent vector accepted as normal".into());
}

fn null_space(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    use crate::geometry::relative_null_space;
    let expect = [("plane", 2, false), ("degenerate-null", 1, true), ("generic-minimal", 0, false)];
    for (name, dim, degenerate) in expect {
        let s = catalog::builtin(name).expect("catalog entry");
        for p in grid_points(&s) {
            with_frame(tr, &s, p, |tr, fp| {
                let n = relative_null_space(&fp);
                let mut ok = n.dimension == dim && n.degenerate == degenerate;
                if name == "degenerate-null" {
                    ok &= n.generator.is_some_and(|g| super::oracle::rank_defect(&g, &fp.f1) <= 1e-9);
                }
                tr.agree(ok, || format!("{name} at {p:?}: {n:?}"));
            });
        }
    }
}
