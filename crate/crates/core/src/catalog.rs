//! Built-in surfaces: the canonical data files, the two null-curve
//! generators, control surfaces, and random null translation surfaces.

use rand::Rng;
use thiserror::Error;

use crate::algebra::{inner4, Vec4, DEGENERACY_TOL};
use crate::expr::{eval_jet, parse, parse_surface, Domain, EvalError, Expr, Params, SurfaceDef, SurfaceError};
use crate::jet::Var;

/// Samples per axis used when checking curve conditions: ten times the
/// default analysis grid spacing.
pub const CHECK_SAMPLES: usize = 10 * (17 - 1) + 1;

/// Relative floor below which `⟨η₀, β′⟩` or `⟨φ′, ψ′⟩` counts as zero.
pub const CROSS_TOL: f64 = 1e-6;

const CANONICAL: [(&str, &str); 3] = [
    ("degenerate-null", include_str!("../catalog/degenerate-null.surf")),
    ("generic-minimal", include_str!("../catalog/generic-minimal.surf")),
    ("hyperplane-minimal", include_str!("../catalog/hyperplane-minimal.surf")),
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("direction {0:?} is not lightlike")]
    NotLightlikeDirection([f64; 4]),
    #[error("{curve}' is not lightlike at {at} (⟨c', c'⟩ = {value:e})")]
    NotNullCurve { curve: &'static str, at: f64, value: f64 },
    #[error("{curve} component {component} must depend on {var} only")]
    WrongVariable {
        curve: &'static str,
        component: usize,
        var: &'static str,
    },
    #[error("induced metric degenerates near (s, t) = ({s}, {t}) (g_st = {value:e})")]
    DegenerateMetric { s: f64, t: f64, value: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// The canonical surfaces shipped as data files.
pub fn canonical() -> Vec<SurfaceDef> {
    CANONICAL
        .iter()
        .map(|(name, text)| parse_surface(text).unwrap_or_else(|e| panic!("catalog file {name}: {e}")))
        .collect()
}

/// Minimal surfaces among the built-ins.
pub fn minimal_surfaces() -> Vec<SurfaceDef> {
    let mut out = canonical();
    out.push(plane());
    out
}

/// Every built-in surface by name, including the Riemannian control.
pub fn builtin(name: &str) -> Option<SurfaceDef> {
    canonical().into_iter().chain(control_surfaces()).find(|s| s.name == name)
}

pub fn names() -> Vec<String> {
    canonical()
        .into_iter()
        .chain(control_surfaces())
        .map(|s| s.name)
        .collect()
}

fn samples(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let n = CHECK_SAMPLES - 1;
    (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64)
}

/// Velocity of a curve `c(u)` given by four expressions in `var`.
fn velocity(c: &[Expr; 4], var: Var, u: f64, params: &Params) -> Result<Vec4, EvalError> {
    let point = match var {
        Var::S => (u, 0.0),
        Var::T => (0.0, u),
    };
    let mut out = [0.0; 4];
    for (o, e) in out.iter_mut().zip(c) {
        let j = eval_jet(e, point, params, 1)?;
        *o = match var {
            Var::S => j.coeff(1, 0),
            Var::T => j.coeff(0, 1),
        };
    }
    Ok(Vec4(out))
}

fn check_curve(
    curve: &'static str,
    c: &[Expr; 4],
    var: Var,
    (lo, hi): (f64, f64),
) -> Result<Vec<(f64, Vec4)>, CatalogError> {
    let other = if var == Var::S { Var::T } else { Var::S };
    for (component, e) in c.iter().enumerate() {
        if e.mentions(other) {
            return Err(CatalogError::WrongVariable {
                curve,
                component,
                var: if var == Var::S { "s" } else { "t" },
            });
        }
    }
    let params = Params::new();
    samples(lo, hi)
        .map(|u| {
            let v = velocity(c, var, u, &params)?;
            let n = v.euclid_norm();
            let q = inner4(&v, &v);
            if n == 0.0 || q.abs() > DEGENERACY_TOL * n * n {
                return Err(CatalogError::NotNullCurve { curve, at: u, value: q });
            }
            Ok((u, v))
        })
        .collect()
}

/// Check that `⟨a(u), b(w)⟩` stays away from zero with a fixed sign over
/// all sample pairs.
fn check_cross(a: &[(f64, Vec4)], b: &[(f64, Vec4)], a_is_s: bool) -> Result<(), CatalogError> {
    let mut sign = 0.0;
    for (u, va) in a {
        for (w, vb) in b {
            let g = inner4(va, vb);
            let (s, t) = if a_is_s { (*u, *w) } else { (*w, *u) };
            let floor = CROSS_TOL * va.euclid_norm() * vb.euclid_norm();
            if g.abs() <= floor || (sign != 0.0 && g.signum() != sign) {
                return Err(CatalogError::DegenerateMetric { s, t, value: g });
            }
            sign = g.signum();
        }
    }
    Ok(())
}

fn lift_sum(a: &[Expr; 4], b: &[Expr; 4]) -> [Expr; 4] {
    std::array::from_fn(|i| Expr::Add(Box::new(a[i].clone()), Box::new(b[i].clone())))
}

/// `x(s,t) = s·η₀ + β(t)` for a lightlike `η₀` and a null curve `β`.
pub fn degenerate_null_surface(
    name: &str,
    eta0: Vec4,
    beta: [Expr; 4],
    domain: Domain,
) -> Result<SurfaceDef, CatalogError> {
    let n = eta0.euclid_norm();
    if n == 0.0 || inner4(&eta0, &eta0).abs() > DEGENERACY_TOL * n * n {
        return Err(CatalogError::NotLightlikeDirection(eta0.0));
    }
    let b = check_curve("beta", &beta, Var::T, (domain.t_min, domain.t_max))?;
    check_cross(&b, &[(0.0, eta0)], false)?;
    let line = eta0.0.map(|c| Expr::Mul(Box::new(Expr::Num(c)), Box::new(Expr::S)));
    Ok(SurfaceDef::new(name, lift_sum(&line, &beta), domain, Params::new())?)
}

/// `x(s,t) = φ(s) + ψ(t)` for null curves `φ`, `ψ`. Such surfaces are
/// minimal since `x_st = 0`.
pub fn null_translation(name: &str, phi: [Expr; 4], psi: [Expr; 4], domain: Domain) -> Result<SurfaceDef, CatalogError> {
    let a = check_curve("phi", &phi, Var::S, (domain.s_min, domain.s_max))?;
    let b = check_curve("psi", &psi, Var::T, (domain.t_min, domain.t_max))?;
    check_cross(&a, &b, true)?;
    Ok(SurfaceDef::new(name, lift_sum(&phi, &psi), domain, Params::new())?)
}

fn def(name: &str, comps: [&str; 4], params: Params) -> SurfaceDef {
    let components = comps.map(|c| parse(c).unwrap_or_else(|e| panic!("{name}: {e}")));
    SurfaceDef::new(name, components, Domain::square(-0.8, 0.8), params).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Totally geodesic Lorentzian plane in null coordinates.
pub fn plane() -> SurfaceDef {
    def("plane", ["s + t", "s - t", "0", "0"], Params::new())
}

/// Lorentzian graph with nonzero mean curvature, amplitude `q`.
pub fn nonminimal_graph(q: f64) -> SurfaceDef {
    let mut p = Params::new();
    p.insert("q".into(), q);
    def("nonminimal-graph", ["s + t", "s - t", "q*sin(s)", "q*cos(t)"], p)
}

/// Spacelike surface, rejected by the engine.
pub fn riemannian_graph() -> SurfaceDef {
    def("riemannian-graph", ["0", "s", "t", "0"], Params::new())
}

pub fn control_surfaces() -> Vec<SurfaceDef> {
    vec![plane(), nonminimal_graph(0.2), riemannian_graph()]
}

/// Antiderivative vanishing at 0 of a null velocity written in the
/// four-square form
/// `(p²+q²+r²+w², p²+q²−r²−w², 2(pw+qr), 2(qw−pr))` with `p, q, r, w`
/// affine in `var`.
fn four_square_curve(lin: [[f64; 2]; 4], var: &str) -> [Expr; 4] {
    let [p, q, r, w] = lin;
    // products of affine functions as quadratic coefficients
    let mul = |a: [f64; 2], b: [f64; 2]| [a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]];
    let add = |a: [f64; 3], b: [f64; 3], k: f64| [a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2]];
    let (pp, qq, rr, ww) = (mul(p, p), mul(q, q), mul(r, r), mul(w, w));
    let v = [
        add(add(add(pp, qq, 1.0), rr, 1.0), ww, 1.0),
        add(add(add(pp, qq, 1.0), rr, -1.0), ww, -1.0),
        add(mul(p, w), mul(q, r), 1.0).map(|c| 2.0 * c),
        add(mul(q, w), mul(p, r), -1.0).map(|c| 2.0 * c),
    ];
    v.map(|c| {
        let text = format!("{}*{var} + {}*{var}^2 + {}*{var}^3", c[0], c[1] / 2.0, c[2] / 3.0);
        parse(&text).expect("generated polynomial parses")
    })
}

/// A random null translation surface. `φ′` stays close to `(1,1,0,0)`
/// and `ψ′` close to `(1,−1,0,0)` up to scale, so `⟨φ′, ψ′⟩` keeps away
/// from zero on `[−0.8, 0.8]²`; candidates failing the generator checks
/// are redrawn.
pub fn random_null_translation<R: Rng>(rng: &mut R, name: &str) -> SurfaceDef {
    let domain = Domain::square(-0.8, 0.8);
    let small = |rng: &mut R| rng.random_range(-0.25..0.25);
    loop {
        let mut lin_phi = [[0.0; 2]; 4];
        let mut lin_psi = [[0.0; 2]; 4];
        for (k, (a, b)) in lin_phi.iter_mut().zip(lin_psi.iter_mut()).enumerate() {
            *a = [small(rng), small(rng)];
            *b = [small(rng), small(rng)];
            if k == 0 {
                a[0] += 1.0;
            }
            if k == 2 {
                b[0] += 1.0;
            }
        }
        let phi = four_square_curve(lin_phi, "s");
        let psi = four_square_curve(lin_psi, "t");
        if let Ok(def) = null_translation(name, phi, psi, domain) {
            return def;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exprs(c: [&str; 4]) -> [Expr; 4] {
        c.map(|x| parse(x).unwrap())
    }

    const BETA: [&str; 4] = ["t + t^3/3", "t^2", "t - t^3/3", "0"];

    #[test]
    fn canonical_files_load() {
        let names: Vec<_> = canonical().into_iter().map(|s| s.name).collect();
        assert_eq!(names, ["degenerate-null", "generic-minimal", "hyperplane-minimal"]);
        assert!(builtin("plane").is_some());
        assert!(builtin("nope").is_none());
    }

    #[test]
    fn degenerate_null_generator() {
        let d = Domain::square(-0.8, 0.8);
        let surf = degenerate_null_surface("x", Vec4::new(1.0, 0.0, 0.0, 1.0), exprs(BETA), d).unwrap();
        let file = builtin("degenerate-null").unwrap();
        for p in [(0.3, 0.7), (-0.8, 0.1)] {
            let (a, b) = (surf.position(p).unwrap(), file.position(p).unwrap());
            for i in 0..4 {
                assert!((a[i] - b[i]).abs() < 1e-14);
            }
        }
        assert_eq!(
            degenerate_null_surface("x", Vec4::new(1.0, 0.0, 0.0, 0.0), exprs(BETA), d),
            Err(CatalogError::NotLightlikeDirection([1.0, 0.0, 0.0, 0.0]))
        );
        match degenerate_null_surface("x", Vec4::new(1.0, 0.0, 1.0, 0.0), exprs(BETA), d) {
            Err(CatalogError::DegenerateMetric { t, .. }) => assert!(t.abs() < 0.1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_null_curve_rejected() {
        let d = Domain::square(-0.8, 0.8);
        let beta = exprs(["t", "t^2", "0", "0"]);
        assert!(matches!(
            degenerate_null_surface("x", Vec4::new(1.0, 0.0, 0.0, 1.0), beta, d),
            Err(CatalogError::NotNullCurve { .. })
        ));
        let beta = exprs(["t + s", "t^2", "t - t^3/3", "0"]);
        assert!(matches!(
            degenerate_null_surface("x", Vec4::new(1.0, 0.0, 0.0, 1.0), beta, d),
            Err(CatalogError::WrongVariable { .. })
        ));
    }

    #[test]
    fn null_translation_generator() {
        let d = Domain::square(-0.8, 0.8);
        let phi = exprs(["s + s^3/3", "s^2", "s - s^3/3", "0"]);
        let psi = exprs(["t + t^3/3", "t^2", "0", "t - t^3/3"]);
        let surf = null_translation("g", phi.clone(), psi, d).unwrap();
        let file = builtin("generic-minimal").unwrap();
        let (a, b) = (surf.position((0.2, -0.4)).unwrap(), file.position((0.2, -0.4)).unwrap());
        for i in 0..4 {
            assert!((a[i] - b[i]).abs() < 1e-14);
        }
        let hyper = exprs(["t + t^3/3", "t^2", "-(t - t^3/3)", "0"]);
        assert!(null_translation("h", phi.clone(), hyper, d).is_ok());
        // the same curve in both variables meets itself on the diagonal
        let same = exprs(["t + t^3/3", "t^2", "t - t^3/3", "0"]);
        assert!(matches!(
            null_translation("d", phi, same, d),
            Err(CatalogError::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn random_surfaces_are_reproducible() {
        let a = random_null_translation(&mut ChaCha8Rng::seed_from_u64(7), "r");
        let b = random_null_translation(&mut ChaCha8Rng::seed_from_u64(7), "r");
        assert_eq!(a, b);
        let c = random_null_translation(&mut ChaCha8Rng::seed_from_u64(8), "r");
        assert_ne!(a, c);
    }
}
