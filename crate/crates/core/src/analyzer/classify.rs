use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

use super::{spread, Analysis, Outcome, PointSample, Verdict};
use crate::algebra::{inner6, Biv6, Vec4};
use crate::geometry::NULL_SPACE_TOL;

const MAX_SWEEPS: usize = 50;
const SWEEP_IMPROVEMENT: f64 = 1e-12;

/// `f = −⟨Δν, ν⟩`, the first-kind coefficient (uses `⟨ν, ν⟩ = −1`).
fn first_kind_f(s: &PointSample) -> f64 {
    -inner6(&s.lap_nu, &s.nu)
}

fn first_kind_residual(s: &PointSample) -> f64 {
    (s.lap_nu - s.nu * first_kind_f(s)).euclid_norm()
}

/// Least-squares fit of `Δν = f (ν + C)` with pointwise `f` and one
/// constant `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondKindFit {
    pub c: Biv6,
    pub f: Vec<f64>,
    /// Largest pointwise residual `‖Δν − f(ν + C)‖`.
    pub residual: f64,
    pub objective: f64,
    pub sweeps: usize,
    pub diverged: bool,
}

fn objective(lap: &[Biv6], nu: &[Biv6], f: &[f64], c: &Biv6) -> (f64, f64) {
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for ((l, n), fp) in lap.iter().zip(nu).zip(f) {
        let r = (*l - (*n + *c) * *fp).euclid_norm();
        sum += r * r;
        worst = worst.max(r);
    }
    (sum, worst)
}

/// Alternating least squares: `C` in closed form given `f`, then each
/// `f_p` in closed form given `C`. Starts from the first-kind fit.
pub fn fit_second_kind(lap: &[Biv6], nu: &[Biv6]) -> SecondKindFit {
    let mut f: Vec<f64> = lap.iter().zip(nu).map(|(l, n)| -inner6(l, n)).collect();
    let mut c = Biv6::ZERO;
    let (mut obj, mut worst) = objective(lap, nu, &f, &c);
    let mut sweeps = 0;
    let mut diverged = false;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let ff: f64 = f.iter().map(|x| x * x).sum();
        if ff > 0.0 {
            let mut acc = Biv6::ZERO;
            for ((l, n), fp) in lap.iter().zip(nu).zip(&f) {
                acc = acc + (*l - *n * *fp) * *fp;
            }
            c = acc * (1.0 / ff);
        }
        for ((l, n), fp) in lap.iter().zip(nu).zip(f.iter_mut()) {
            let v = *n + c;
            let vv = v.euclid_dot(&v);
            *fp = if vv > 0.0 { l.euclid_dot(&v) / vv } else { 0.0 };
        }
        let (next, next_worst) = objective(lap, nu, &f, &c);
        if !next.is_finite() || next > obj * (1.0 + 1e-9) + 1e-300 {
            diverged = true;
            break;
        }
        let improvement = obj - next;
        obj = next;
        worst = next_worst;
        if improvement < SWEEP_IMPROVEMENT {
            break;
        }
    }
    SecondKindFit {
        c,
        f,
        residual: worst,
        objective: obj,
        sweeps,
        diverged,
    }
}

/// Staged pointwise 1-type classification: harmonic, first kind, second
/// kind, or none.
pub fn pw1type_classify(a: &Analysis) -> Verdict {
    let tol = *a.tol();
    let harmonic = a.samples.iter().map(|s| s.lap_nu.euclid_norm()).fold(0.0, f64::max);
    let first = a.samples.iter().map(first_kind_residual).fold(0.0, f64::max);
    let mut params = std::collections::BTreeMap::new();
    params.insert("harmonic_residual".to_string(), harmonic);
    params.insert("first_kind_residual".to_string(), first);

    let mut v = if harmonic <= tol.zero_tol {
        a.verdict("pointwise-1-type", tol.zero_tol, |_, s| (s.lap_nu.euclid_norm(), Some(0.0)))
            .labelled("harmonic")
    } else if first <= tol.identity_tol {
        a.verdict("pointwise-1-type", tol.identity_tol, |_, s| (first_kind_residual(s), Some(first_kind_f(s))))
            .labelled("first-kind")
    } else {
        let lap: Vec<Biv6> = a.samples.iter().map(|s| s.lap_nu).collect();
        let nu: Vec<Biv6> = a.samples.iter().map(|s| s.nu).collect();
        let fit = fit_second_kind(&lap, &nu);
        let c_norm = fit.c.euclid_norm();
        params.insert("second_kind_residual".into(), fit.residual);
        params.insert("c_norm".into(), c_norm);
        params.insert("sweeps".into(), fit.sweeps as f64);
        params.insert("diverged".into(), if fit.diverged { 1.0 } else { 0.0 });
        for (i, c) in fit.c.0.iter().enumerate() {
            params.insert(format!("c{i}"), *c);
        }
        if !fit.diverged && fit.residual <= tol.identity_tol && c_norm >= tol.nonzero_margin {
            a.verdict("pointwise-1-type", tol.identity_tol, |i, s| {
                let r = (s.lap_nu - (s.nu + fit.c) * fit.f[i]).euclid_norm();
                (r, Some(fit.f[i]))
            })
            .labelled("second-kind")
        } else {
            a.verdict("pointwise-1-type", tol.identity_tol, |_, s| (first_kind_residual(s), Some(first_kind_f(s))))
                .labelled("none")
        }
    };
    v.params.extend(params);
    v
}

/// Pointwise best `f` for `Δ²ν = f Δν`, or `None` where `Δν` vanishes.
fn null2type_point(s: &PointSample, zero_tol: f64) -> (f64, Option<f64>) {
    let lap = s.lap_nu.euclid_norm();
    if lap <= zero_tol {
        return (s.lap2_nu.euclid_norm(), None);
    }
    let f = s.lap2_nu.euclid_dot(&s.lap_nu) / (lap * lap);
    ((s.lap2_nu - s.lap_nu * f).euclid_norm(), Some(f))
}

/// Search for a null 2-type Gauss map `Δ²ν = fΔν` on a minimal surface.
///
/// Labels: `harmonic` (`Δν ≡ 0`), `no-null-2-type-witness` (the fit
/// fails or `f` varies), `one-type` (fit with constant `f`),
/// `violates-theorem` (a fit with `Δν ≢ 0` and `K^D ≢ 0`), otherwise
/// `inconclusive`.
pub fn null2type_test(a: &Analysis) -> Verdict {
    let tol = *a.tol();
    let mut v = a.verdict("null-2-type", tol.identity_tol, |_, s| null2type_point(s, tol.zero_tol));
    let fs: Vec<f64> = v.details.iter().filter_map(|r| r.value).collect();
    let harmonic = a.samples.iter().all(|s| s.lap_nu.euclid_norm() <= tol.zero_tol);
    let kd_max = a.samples.iter().map(|s| s.kd.abs()).fold(0.0, f64::max);
    let (lo, hi) = if fs.is_empty() { (0.0, 0.0) } else { spread(fs.iter().copied()) };
    let f_spread = hi - lo;
    let fit_ok = v.worst_residual <= tol.identity_tol;
    let label = if harmonic {
        "harmonic"
    } else if fit_ok && kd_max > tol.zero_tol {
        "violates-theorem"
    } else if v.worst_residual > tol.nonzero_margin || f_spread > tol.nonzero_margin {
        "no-null-2-type-witness"
    } else if fit_ok {
        "one-type"
    } else {
        "inconclusive"
    };
    v.params.insert("f_min".into(), lo);
    v.params.insert("f_max".into(), hi);
    v.params.insert("f_spread".into(), f_spread);
    v.params.insert("max_abs_kd".into(), kd_max);
    v = v.labelled(label);
    a.gate_minimal(v)
}

/// The six equivalent conditions for minimal surfaces not lying in a
/// hyperplane, plus the hyperplane test itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Battery {
    pub minimal: bool,
    pub in_hyperplane: Verdict,
    /// Minimal and not contained in a hyperplane.
    pub hypothesis_met: bool,
    pub predicates: Vec<Verdict>,
    /// All six predicates have the same conclusive outcome.
    pub consistent: bool,
}

/// Distance from a degenerate relative null line: the smallest singular
/// value of the `h` matrix, or how far its kernel direction is from null.
fn null_bundle_defect(s: &PointSample) -> f64 {
    let rns = &s.null_space;
    if rns.sigma[1] <= NULL_SPACE_TOL {
        // h ≡ 0: the relative null space is the whole Lorentzian plane
        return 1.0;
    }
    let [x1, x2] = rns.min_direction;
    rns.sigma[0].max(2.0 * (x1 * x2).abs())
}

/// `sqrt(λ_min / λ_max)` of the scatter of normalized tangent vectors and
/// centred positions: zero iff the sampled patch lies in an affine
/// hyperplane.
fn hyperplane_ratio(samples: &[PointSample]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let n = samples.len() as f64;
    let mut mean = Vec4::ZERO;
    for s in samples {
        mean = mean + s.x * (1.0 / n);
    }
    let spread = samples.iter().map(|s| (s.x - mean).euclid_norm()).fold(0.0, f64::max);
    let mut m = Matrix4::<f64>::zeros();
    let mut add = |v: Vec4, scale: f64| {
        if scale > 0.0 {
            let u = Vector4::from(v.0) / scale;
            m += u * u.transpose();
        }
    };
    for s in samples {
        add(s.xs, s.xs.euclid_norm());
        add(s.xt, s.xt.euclid_norm());
        add(s.x - mean, spread);
    }
    let eig = SymmetricEigen::new(m).eigenvalues;
    let hi = eig.max();
    let lo = eig.min().max(0.0);
    if hi <= 0.0 {
        0.0
    } else {
        (lo / hi).sqrt()
    }
}

pub fn theorem35_battery(a: &Analysis) -> Battery {
    let tol = *a.tol();
    let minimal = a.is_minimal();

    let ratio = hyperplane_ratio(&a.samples);
    let mut in_hyperplane = a.verdict("in-hyperplane", tol.identity_tol, |_, _| (0.0, None));
    in_hyperplane.details.clear();
    in_hyperplane.worst_residual = ratio;
    in_hyperplane.worst_point = None;
    in_hyperplane.outcome = if ratio <= tol.identity_tol { Outcome::Holds } else { Outcome::Fails };

    let mut pw1 = pw1type_classify(a);
    pw1.predicate = "pointwise-1-type".into();
    let first = a.verdict("first-kind", tol.identity_tol, |_, s| (first_kind_residual(s), Some(first_kind_f(s))));
    let harmonic = a.verdict("harmonic", tol.zero_tol, |_, s| (s.lap_nu.euclid_norm(), None));
    let null_bundle = a.verdict("degenerate-relative-null-bundle", tol.identity_tol, |_, s| {
        (null_bundle_defect(s), Some(s.null_space.dimension as f64))
    });
    let flat = a.verdict("flat-normal-bundle", tol.zero_tol, |_, s| (s.kd.abs(), Some(s.kd)));

    let hnorm = |s: &PointSample, c: usize| {
        let (p, q) = (s.h_at(0, c, c), s.h_at(1, c, c));
        p.hypot(q)
    };
    let max_h = |c: usize| a.samples.iter().map(|s| hnorm(s, c)).fold(0.0, f64::max);
    let ruled = if max_h(0) <= max_h(1) { 0 } else { 1 };
    let mut family = a.verdict("null-scroll-family", tol.identity_tol, |_, s| (hnorm(s, ruled), None));
    family.params.insert("ruling_frame_index".into(), (ruled + 1) as f64);

    let predicates: Vec<Verdict> = [pw1, first, harmonic, null_bundle, flat, family]
        .into_iter()
        .map(|v| a.gate_minimal(v))
        .collect();
    let first_outcome = predicates[0].outcome;
    let consistent =
        first_outcome != Outcome::Inconclusive && predicates.iter().all(|v| v.outcome == first_outcome);
    Battery {
        minimal,
        hypothesis_met: minimal && !in_hyperplane.holds(),
        in_hyperplane,
        predicates,
        consistent,
    }
}
