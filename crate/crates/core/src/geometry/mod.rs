//! Pointwise differential geometry of a Lorentzian surface in E⁴₁.
//!
//! [`LocalFrame`] runs the whole construction (metric, null tangent
//! frame, normal frame, second fundamental form, curvatures, Gauss maps)
//! through jet arithmetic at one parameter point, so every quantity comes
//! with its derivatives. [`FramePoint`] is the value-level snapshot.
//!
//! Conventions:
//! - null frame `⟨f1,f1⟩ = ⟨f2,f2⟩ = 0`, `⟨f1,f2⟩ = −1`;
//! - `H = −h(f1,f2)`;
//! - `K = ⟨h(f2,f2), h(f1,f1)⟩ − ⟨h(f1,f2), h(f1,f2)⟩`;
//! - `Δφ = −g^{ij}(∂i∂jφ − Γ^k_ij ∂kφ)`, which is `(2/m²)∂s∂t φ` on a
//!   chart with `g = −m²(ds dt + dt ds)`;
//! - Gauss maps `ν = f1∧f2`, `μ = e3∧e4`, with `(x_s, x_t, e3, e4)`
//!   positively oriented.

mod calculus;
mod frame;

use thiserror::Error;

use crate::algebra::{det4, inner4, orthonormalize_pair, wedge, AlgebraError, Biv6, Scalar, Vec4};
use crate::expr::{EvalError, SurfaceDef};
use crate::jet::{Jet, DEFAULT_ORDER};

pub use calculus::{nu_field, CodazziResidual, TangentField};
pub use frame::{
    frame_at, gauss_maps, gaussian_curvature, normal_curvature, relative_null_space, shape_operator, FramePoint,
    Metric, RelativeNullSpace, NULL_SPACE_TOL,
};

pub type JVec = Vec4<Jet>;

/// Bivector-valued field carried by jets, e.g. the Gauss map with its
/// derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Field6(pub Biv6<Jet>);

impl Field6 {
    pub fn value(&self) -> Biv6 {
        self.0.values()
    }

    pub fn order(&self) -> usize {
        self.0 .0.iter().map(|j| j.order()).min().unwrap_or(0)
    }

    pub fn ds(&self) -> Field6 {
        Field6(self.0.map(|j| j.ds()))
    }

    pub fn dt(&self) -> Field6 {
        Field6(self.0.map(|j| j.dt()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("point ({0}, {1}) lies outside the surface domain")]
    OutsideDomain(f64, f64),
    #[error("induced metric is not Lorentzian (det g = {det_g:e})")]
    NotLorentzian { det_g: f64 },
    #[error("x_s and x_t are linearly dependent")]
    DegenerateImmersion,
    #[error("null-direction labelling is ambiguous here (gap {gap:e})")]
    FrameBranchSwitch { gap: f64 },
    #[error("normal frame construction failed: {0}")]
    NormalFrame(#[from] AlgebraError),
    #[error("vector is not normal to the surface (⟨ξ, f_i⟩ = {0:e})")]
    NotNormal(f64),
    #[error("operation needs {needed} derivative orders, field has {have}")]
    OrderExhausted { needed: usize, have: usize },
}

/// Relative tolerance for Lorentzian and immersion checks.
pub const METRIC_TOL: f64 = 1e-9;
/// Minimum gap between the normalized ∂s-coefficients of the two null
/// directions before labelling is considered ambiguous.
pub const BRANCH_GAP: f64 = 1e-6;

/// All jet-level geometric data at one parameter point.
#[derive(Debug, Clone)]
pub struct LocalFrame {
    pub point: (f64, f64),
    pub order: usize,
    /// Immersion components.
    pub x: JVec,
    pub xs: JVec,
    pub xt: JVec,
    pub xss: JVec,
    pub xst: JVec,
    pub xtt: JVec,
    /// `[g_ss, g_st, g_tt]`.
    pub g: [Jet; 3],
    pub det_g: Jet,
    /// `[g^ss, g^st, g^tt]`.
    pub g_inv: [Jet; 3],
    /// `gamma[k][i][j] = Γ^k_ij`, coordinate index 0 = s, 1 = t.
    pub gamma: [[[Jet; 2]; 2]; 2],
    /// Coordinate coefficients of the null frame: `f_a = c[a][0] ∂s + c[a][1] ∂t`.
    pub f_coeffs: [[Jet; 2]; 2],
    pub f1: JVec,
    pub f2: JVec,
    pub e3: JVec,
    pub e4: JVec,
    /// `h[α][a][b] = ⟨h(f_a, f_b), e_(3+α)⟩`.
    pub h: [[[Jet; 2]; 2]; 2],
    /// `h_coord[α][i][j] = ⟨x_ij, e_(3+α)⟩`.
    pub h_coord: [[[Jet; 2]; 2]; 2],
    pub k: Jet,
    pub kd: Jet,
    pub nu: Field6,
    pub mu: Field6,
}

/// Null direction `(a, b)` (meaning `a ∂s + b ∂t`) for root `σ = ±1` of
/// `g_ss a² + 2 g_st ab + g_tt b² = 0`. Of the two algebraically
/// equivalent forms, the one that is better conditioned at the base point
/// is used.
fn null_direction(g: &[Jet; 3], w: Jet, sigma: f64) -> [Jet; 2] {
    let [gss, gst, gtt] = *g;
    let rep_a = [-gst + w * sigma, gss];
    let rep_b = [gtt, -gst - w * sigma];
    let norm = |r: &[Jet; 2]| r[0].value().hypot(r[1].value());
    if norm(&rep_a) >= norm(&rep_b) {
        rep_a
    } else {
        rep_b
    }
}

fn lin(a: Jet, u: &JVec, b: Jet, v: &JVec) -> JVec {
    u.scale(a) + v.scale(b)
}

impl LocalFrame {
    /// Build at the default jet order.
    pub fn new(surface: &SurfaceDef, point: (f64, f64)) -> Result<Self, GeometryError> {
        Self::with_order(surface, point, DEFAULT_ORDER)
    }

    pub fn with_order(surface: &SurfaceDef, point: (f64, f64), order: usize) -> Result<Self, GeometryError> {
        if !surface.domain.contains(point) {
            return Err(GeometryError::OutsideDomain(point.0, point.1));
        }
        if order < 2 {
            return Err(GeometryError::OrderExhausted { needed: 2, have: order });
        }
        let x = Vec4(surface.jets(point, order)?);
        Self::from_immersion(x, point)
    }

    /// Build from immersion jets directly.
    pub fn from_immersion(x: JVec, point: (f64, f64)) -> Result<Self, GeometryError> {
        let order = x.0.iter().map(|j| j.order()).min().unwrap_or(0);
        if order < 2 {
            return Err(GeometryError::OrderExhausted { needed: 2, have: order });
        }
        let xs = x.map(|j| j.ds());
        let xt = x.map(|j| j.dt());
        let xss = xs.map(|j| j.ds());
        let xst = xs.map(|j| j.dt());
        let xtt = xt.map(|j| j.dt());

        let g = [inner4(&xs, &xs), inner4(&xs, &xt), inner4(&xt, &xt)];
        let det_g = g[0] * g[2] - g[1] * g[1];

        let (xs0, xt0) = (xs.values(), xt.values());
        let scale = xs0.euclid_norm() * xt0.euclid_norm();
        if scale == 0.0 || wedge(&xs0, &xt0).euclid_norm() <= 1e-12 * scale {
            return Err(GeometryError::DegenerateImmersion);
        }
        if det_g.value() >= -METRIC_TOL * scale * scale {
            return Err(GeometryError::NotLorentzian { det_g: det_g.value() });
        }
        let inv_det = det_g.recip();
        let g_inv = [g[2] * inv_det, -g[1] * inv_det, g[0] * inv_det];

        let gamma = christoffel(&g, &g_inv);
        let f_coeffs = null_frame_coeffs(&g, det_g, &xs, &xt)?;
        let [[a1, b1], [a2, b2]] = f_coeffs;
        let f1 = lin(a1, &xs, b1, &xt);
        let f2 = lin(a2, &xs, b2, &xt);

        let (e3, e4) = normal_frame(&xs, &xt, &g_inv)?;

        let second = [[xss, xst], [xst, xtt]];
        let h_coord: [[[Jet; 2]; 2]; 2] = std::array::from_fn(|al| {
            let e = if al == 0 { &e3 } else { &e4 };
            std::array::from_fn(|i| std::array::from_fn(|j| inner4(&second[i][j], e)))
        });
        let h = std::array::from_fn(|al| {
            std::array::from_fn(|p| {
                std::array::from_fn(|q| {
                    let (fp, fq) = (&f_coeffs[p], &f_coeffs[q]);
                    let hc = &h_coord[al];
                    fp[0] * fq[0] * hc[0][0] + (fp[0] * fq[1] + fp[1] * fq[0]) * hc[0][1] + fp[1] * fq[1] * hc[1][1]
                })
            })
        });

        let k = gauss_curvature_from_h(&h);
        let kd = frame::ricci_normal_curvature(&f1, &f2, &e3, &e4, &h);
        let nu = Field6(wedge(&f1, &f2));
        let mu = Field6(wedge(&e3, &e4));

        Ok(LocalFrame {
            point,
            order,
            x,
            xs,
            xt,
            xss,
            xst,
            xtt,
            g,
            det_g,
            g_inv,
            gamma,
            f_coeffs,
            f1,
            f2,
            e3,
            e4,
            h,
            h_coord,
            k,
            kd,
            nu,
            mu,
        })
    }

    /// `h(f_a, f_b)` as a normal vector field.
    pub fn h_vec(&self, a: usize, b: usize) -> JVec {
        self.e3.scale(self.h[0][a][b]) + self.e4.scale(self.h[1][a][b])
    }

    /// Mean curvature vector `H = −h(f1, f2)`.
    pub fn mean_curvature(&self) -> JVec {
        -self.h_vec(0, 1)
    }

    /// Normal projection of a vector field.
    pub fn normal_part(&self, v: &JVec) -> JVec {
        self.e3.scale(inner4(v, &self.e3)) + self.e4.scale(inner4(v, &self.e4))
    }

    pub fn frame_point(&self) -> FramePoint {
        FramePoint::from_local(self)
    }
}

/// Gauss-equation value of `K` from frame components of `h`.
pub(crate) fn gauss_curvature_from_h<T: Scalar>(h: &[[[T; 2]; 2]; 2]) -> T {
    let mut k = h[0][1][1] * h[0][0][0] - h[0][0][1] * h[0][0][1];
    k = k + h[1][1][1] * h[1][0][0] - h[1][0][1] * h[1][0][1];
    k
}

fn christoffel(g: &[Jet; 3], g_inv: &[Jet; 3]) -> [[[Jet; 2]; 2]; 2] {
    // metric and inverse as 2×2 arrays
    let gm = |i: usize, j: usize| g[i + j];
    let gi = |i: usize, j: usize| g_inv[i + j];
    // dg[l][i][j] = ∂_l g_ij
    let dg: [[[Jet; 2]; 2]; 2] = std::array::from_fn(|l| {
        std::array::from_fn(|i| std::array::from_fn(|j| if l == 0 { gm(i, j).ds() } else { gm(i, j).dt() }))
    });
    std::array::from_fn(|k| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = (dg[i][j][0] + dg[j][i][0] - dg[0][i][j]) * gi(k, 0);
                acc = acc + (dg[i][j][1] + dg[j][i][1] - dg[1][i][j]) * gi(k, 1);
                acc * 0.5
            })
        })
    })
}

/// Coordinate coefficients of the normalized null frame.
///
/// `f1` is the null direction whose unit-normalized coefficient vector
/// (sign fixed so the ∂s-coefficient is non-negative) has the larger
/// ∂s-coefficient. The pair is then scaled so `⟨f1, f2⟩ = −1` and
/// `‖f1‖_E = ‖f2‖_E`.
fn null_frame_coeffs(g: &[Jet; 3], det_g: Jet, xs: &JVec, xt: &JVec) -> Result<[[Jet; 2]; 2], GeometryError> {
    let w = (-det_g).sqrt();
    let mut roots = [null_direction(g, w, 1.0), null_direction(g, w, -1.0)];
    let mut keys = [0.0; 2];
    for (r, key) in roots.iter_mut().zip(keys.iter_mut()) {
        let (a, b) = (r[0].value(), r[1].value());
        let n = a.hypot(b);
        if a < 0.0 || (a == 0.0 && b < 0.0) {
            *r = [-r[0], -r[1]];
        }
        *key = a.abs() / n;
    }
    let gap = (keys[0] - keys[1]).abs();
    if gap < BRANCH_GAP {
        return Err(GeometryError::FrameBranchSwitch { gap });
    }
    if keys[1] > keys[0] {
        roots.swap(0, 1);
    }
    let [[a1, b1], [mut a2, mut b2]] = roots;
    let big1 = lin(a1, xs, b1, xt);
    let mut big2 = lin(a2, xs, b2, xt);
    let mut p = inner4(&big1, &big2);
    if p.value() > 0.0 {
        big2 = -big2;
        a2 = -a2;
        b2 = -b2;
        p = -p;
    }
    let abs_p = -p;
    let n1 = big1.euclid_sq().sqrt();
    let n2 = big2.euclid_sq().sqrt();
    let lam1 = (n2 * (n1 * abs_p).recip()).sqrt();
    let lam2 = (n1 * (n2 * abs_p).recip()).sqrt();
    Ok([[a1 * lam1, b1 * lam1], [a2 * lam2, b2 * lam2]])
}

/// Orthonormal spacelike normal frame. Normal projections of two
/// coordinate axes are orthonormalized; the axis pair with the best
/// conditioned projections at the base point is used, and `e4` is flipped
/// if needed so `(x_s, x_t, e3, e4)` is positively oriented.
fn normal_frame(xs: &JVec, xt: &JVec, g_inv: &[Jet; 3]) -> Result<(JVec, JVec), GeometryError> {
    let like = xs.0[0];
    let axis = |i: usize| Vec4(std::array::from_fn(|k| like.lift(if k == i { 1.0 } else { 0.0 })));
    let project = |v: &JVec| {
        let a = inner4(v, xs);
        let b = inner4(v, xt);
        let cs = g_inv[0] * a + g_inv[1] * b;
        let ct = g_inv[1] * a + g_inv[2] * b;
        *v - xs.scale(cs) - xt.scale(ct)
    };
    let normals: [JVec; 4] = std::array::from_fn(|i| project(&axis(i)));
    let mut best = (0usize, 1usize, f64::NEG_INFINITY);
    for i in 0..4 {
        for j in i + 1..4 {
            let (u, v) = (normals[i].values(), normals[j].values());
            let d = inner4(&u, &u) * inner4(&v, &v) - inner4(&u, &v).powi(2);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (e3, mut e4) = orthonormalize_pair(&normals[best.0], &normals[best.1])?;
    if det4(&xs.values(), &xt.values(), &e3.values(), &e4.values()) < 0.0 {
        e4 = -e4;
    }
    Ok((e3, e4))
}
