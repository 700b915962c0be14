use super::{Analysis, PointSample, Verdict};
use crate::algebra::Biv6;

/// `‖Δν − 2Kν − 2K^D μ‖` on a minimal surface.
pub fn lemma31_residual(a: &Analysis) -> Verdict {
    let v = a.verdict("lemma31", a.tol().identity_tol, |_, s| {
        let rhs = s.nu * (2.0 * s.k) + s.mu * (2.0 * s.kd);
        ((s.lap_nu - rhs).euclid_norm(), None)
    });
    a.gate_minimal(v)
}

/// Right-hand side of the bi-Laplacian formula for `ν` on a minimal
/// surface.
pub(crate) fn bilaplacian_rhs(s: &PointSample) -> Biv6 {
    let (k, kd) = (s.k, s.kd);
    s.nu * (2.0 * (s.lap_k + 2.0 * k * k - 2.0 * kd * kd)) + s.mu * (2.0 * (s.lap_kd + 4.0 * k * kd))
        - s.grad_k_nu * 4.0
        - s.grad_kd_mu * 4.0
}

/// `‖Δ²ν − RHS‖`; the derivative chain is one order longer, so the
/// tolerance is ten times `identity_tol`.
pub fn lemma41_residual(a: &Analysis) -> Verdict {
    let v = a.verdict("lemma41", 10.0 * a.tol().identity_tol, |_, s| {
        ((s.lap2_nu - bilaplacian_rhs(s)).euclid_norm(), None)
    });
    a.gate_minimal(v)
}

/// Eigenvalue function `f` for the scalar system.
#[derive(Debug, Clone, PartialEq)]
pub enum FEstimate {
    Constant(f64),
    /// One value per entry of [`Analysis::samples`].
    Pointwise(Vec<f64>),
}

impl FEstimate {
    fn at(&self, i: usize) -> f64 {
        match self {
            FEstimate::Constant(f) => *f,
            FEstimate::Pointwise(v) => v[i],
        }
    }
}

/// Residuals of the three component equations of `Δ²ν = fΔν` on a
/// minimal surface: the `ν` and `μ` coefficients and the tangential part
/// `(∇K)(ν) + (∇K^D)(μ)`.
pub fn system44_residuals(a: &Analysis, f: &FEstimate) -> [Verdict; 3] {
    let tol = a.tol().identity_tol;
    let va = a.verdict("system-nu", tol, |i, s| {
        let fi = f.at(i);
        ((s.lap_k + 2.0 * s.k * s.k - 2.0 * s.kd * s.kd - fi * s.k).abs(), Some(fi))
    });
    let vb = a.verdict("system-mu", tol, |i, s| {
        let fi = f.at(i);
        ((s.lap_kd + 4.0 * s.k * s.kd - fi * s.kd).abs(), Some(fi))
    });
    let vc = a.verdict("system-tangential", tol, |_, s| ((s.grad_k_nu + s.grad_kd_mu).euclid_norm(), None));
    [a.gate_minimal(va), a.gate_minimal(vb), a.gate_minimal(vc)]
}

/// The two 2×2 products of second fundamental form entries with
/// `(f_i(K), f_i(K^D))` that make up the tangential equation, in the
/// basis `f1∧e3, f1∧e4` and `f2∧e3, f2∧e4`.
pub fn matrix_products(s: &PointSample) -> [[f64; 2]; 2] {
    let (h3_11, h4_11) = (s.h_at(0, 0, 0), s.h_at(1, 0, 0));
    let (h3_22, h4_22) = (s.h_at(0, 1, 1), s.h_at(1, 1, 1));
    let ([f1k, f2k], [f1kd, f2kd]) = (s.frame_k, s.frame_kd);
    [
        [h3_22 * f1k - h4_22 * f1kd, h4_22 * f1k + h3_22 * f1kd],
        [h3_11 * f2k + h4_11 * f2kd, h4_11 * f2k - h3_11 * f2kd],
    ]
}

/// Diagnostic: magnitude of the matrix products at each point.
pub fn matrices45_check(a: &Analysis) -> Verdict {
    let v = a.verdict("matrix-products", a.tol().identity_tol, |_, s| {
        let [p, q] = matrix_products(s);
        (p[0].hypot(p[1]).max(q[0].hypot(q[1])), None)
    });
    a.gate_minimal(v).labelled("diagnostic")
}
