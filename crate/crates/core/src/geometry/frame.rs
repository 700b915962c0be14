use serde::{Deserialize, Serialize};

use super::{GeometryError, LocalFrame};
use crate::algebra::{inner4, is_degenerate_subspace, wedge, Biv6, Scalar, Vec4};
use crate::expr::SurfaceDef;
use crate::jet::Jet;

/// Induced metric at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub g_ss: f64,
    pub g_st: f64,
    pub g_tt: f64,
    pub det: f64,
}

/// Value-level frame data at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FramePoint {
    pub point: (f64, f64),
    pub x_jets: [Jet; 4],
    pub g: Metric,
    /// `christoffel[k][i][j] = Γ^k_ij`.
    pub christoffel: [[[f64; 2]; 2]; 2],
    pub f1: Vec4,
    pub f2: Vec4,
    /// `f_a = f_coeffs[a][0] ∂s + f_coeffs[a][1] ∂t`.
    pub f_coeffs: [[Jet; 2]; 2],
    pub e3: Vec4,
    pub e4: Vec4,
    /// `h3_11, h3_12, h3_22, h4_11, h4_12, h4_22` in the null frame.
    pub h: [f64; 6],
    pub mean_curvature: Vec4,
    pub k: f64,
    pub kd: f64,
    pub nu: Biv6,
    pub mu: Biv6,
}

impl FramePoint {
    pub(super) fn from_local(lf: &LocalFrame) -> Self {
        let v = |j: &Jet| j.value();
        let h = [
            lf.h[0][0][0].value(),
            lf.h[0][0][1].value(),
            lf.h[0][1][1].value(),
            lf.h[1][0][0].value(),
            lf.h[1][0][1].value(),
            lf.h[1][1][1].value(),
        ];
        let mut fp = FramePoint {
            point: lf.point,
            x_jets: lf.x.0,
            g: Metric {
                g_ss: v(&lf.g[0]),
                g_st: v(&lf.g[1]),
                g_tt: v(&lf.g[2]),
                det: v(&lf.det_g),
            },
            christoffel: lf.gamma.map(|a| a.map(|b| b.map(|c| c.value()))),
            f1: lf.f1.values(),
            f2: lf.f2.values(),
            f_coeffs: lf.f_coeffs,
            e3: lf.e3.values(),
            e4: lf.e4.values(),
            h,
            mean_curvature: Vec4::ZERO,
            k: 0.0,
            kd: 0.0,
            nu: lf.nu.value(),
            mu: lf.mu.value(),
        };
        fp.mean_curvature = -fp.h_vec(0, 1);
        fp.k = gaussian_curvature(&fp);
        fp.kd = normal_curvature(&fp);
        fp
    }

    /// `⟨h(f_a, f_b), e_(3+alpha)⟩`.
    pub fn h_at(&self, alpha: usize, a: usize, b: usize) -> f64 {
        self.h[3 * alpha + a + b]
    }

    pub fn h_array(&self) -> [[[f64; 2]; 2]; 2] {
        std::array::from_fn(|al| std::array::from_fn(|a| std::array::from_fn(|b| self.h_at(al, a, b))))
    }

    /// `h(f_a, f_b)` as a normal vector.
    pub fn h_vec(&self, a: usize, b: usize) -> Vec4 {
        self.e3 * self.h_at(0, a, b) + self.e4 * self.h_at(1, a, b)
    }

    pub fn frame(&self, a: usize) -> Vec4 {
        if a == 0 {
            self.f1
        } else {
            self.f2
        }
    }
}

/// Frame data at `point`.
pub fn frame_at(surface: &SurfaceDef, point: (f64, f64)) -> Result<FramePoint, GeometryError> {
    Ok(LocalFrame::new(surface, point)?.frame_point())
}

fn solve_shape<T: Scalar>(f1: &Vec4<T>, f2: &Vec4<T>, b: [[T; 2]; 2]) -> [[T; 2]; 2] {
    let g11 = inner4(f1, f1);
    let g12 = inner4(f1, f2);
    let g22 = inner4(f2, f2);
    let inv = (g11 * g22 - g12 * g12).recip();
    let gi = [[g22 * inv, -g12 * inv], [-g12 * inv, g11 * inv]];
    std::array::from_fn(|i| std::array::from_fn(|j| gi[i][0] * b[0][j] + gi[i][1] * b[1][j]))
}

/// Shape-operator matrix for the normal vector with components
/// `(c3, c4)` along `(e3, e4)`. Column `j` holds the frame coefficients
/// of `A f_j`.
fn shape_matrix<T: Scalar>(f1: &Vec4<T>, f2: &Vec4<T>, h: &[[[T; 2]; 2]; 2], c: [T; 2]) -> [[T; 2]; 2] {
    // b[k][j] = ⟨h(f_j, f_k), ξ⟩
    let b = std::array::from_fn(|k| std::array::from_fn(|j| h[0][j][k] * c[0] + h[1][j][k] * c[1]));
    solve_shape(f1, f2, b)
}

fn mat_mul<T: Scalar>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

/// `K^D = ⟨[A_e3, A_e4] f1, f2⟩ / (−det G)` with `G` the frame Gram matrix.
pub(crate) fn ricci_normal_curvature<T: Scalar>(
    f1: &Vec4<T>,
    f2: &Vec4<T>,
    e3: &Vec4<T>,
    e4: &Vec4<T>,
    h: &[[[T; 2]; 2]; 2],
) -> T {
    let c3 = [inner4(e3, e3), inner4(e4, e3)];
    let c4 = [inner4(e3, e4), inner4(e4, e4)];
    let a3 = shape_matrix(f1, f2, h, c3);
    let a4 = shape_matrix(f1, f2, h, c4);
    let p = mat_mul(&a3, &a4);
    let q = mat_mul(&a4, &a3);
    let g11 = inner4(f1, f1);
    let g12 = inner4(f1, f2);
    let g22 = inner4(f2, f2);
    let c0 = p[0][0] - q[0][0];
    let c1 = p[1][0] - q[1][0];
    let num = c0 * g12 + c1 * g22;
    num * (g12 * g12 - g11 * g22).recip()
}

/// Matrix of `A_ξ` in the `(f1, f2)` basis; column `j` is `A_ξ f_j`.
pub fn shape_operator(fp: &FramePoint, xi: &Vec4) -> Result<[[f64; 2]; 2], GeometryError> {
    for f in [fp.f1, fp.f2] {
        let d = inner4(xi, &f);
        if d.abs() > 1e-9 * xi.euclid_norm().max(1.0) * f.euclid_norm() {
            return Err(GeometryError::NotNormal(d));
        }
    }
    let c = [inner4(&fp.e3, xi), inner4(&fp.e4, xi)];
    Ok(shape_matrix(&fp.f1, &fp.f2, &fp.h_array(), c))
}

/// Gauss-equation value `⟨h(f2,f2), h(f1,f1)⟩ − ⟨h(f1,f2), h(f1,f2)⟩`.
pub fn gaussian_curvature(fp: &FramePoint) -> f64 {
    super::gauss_curvature_from_h(&fp.h_array())
}

/// Normal curvature through the Ricci equation.
pub fn normal_curvature(fp: &FramePoint) -> f64 {
    ricci_normal_curvature(&fp.f1, &fp.f2, &fp.e3, &fp.e4, &fp.h_array())
}

/// `(ν, μ) = (f1∧f2, e3∧e4)`.
pub fn gauss_maps(fp: &FramePoint) -> (Biv6, Biv6) {
    (wedge(&fp.f1, &fp.f2), wedge(&fp.e3, &fp.e4))
}

/// Kernel of `X ↦ (h(X, f1), h(X, f2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeNullSpace {
    pub dimension: usize,
    pub degenerate: bool,
    pub generator: Option<Vec4>,
    /// Singular values of the 4×2 matrix of `h`, ascending.
    pub sigma: [f64; 2],
    /// Unit right singular vector for the smaller singular value, as
    /// `(f1, f2)` coefficients.
    pub min_direction: [f64; 2],
}

/// Relative rank tolerance for [`relative_null_space`].
pub const NULL_SPACE_TOL: f64 = 1e-9;

pub fn relative_null_space(fp: &FramePoint) -> RelativeNullSpace {
    let h = fp.h_array();
    let m = |a: usize, c: usize| -> f64 {
        let mut acc = 0.0;
        for hal in &h {
            for b in 0..2 {
                acc += hal[a][b] * hal[c][b];
            }
        }
        acc
    };
    let (p, q, r) = (m(0, 0), m(0, 1), m(1, 1));
    let mean = 0.5 * (p + r);
    let rad = (0.25 * (p - r) * (p - r) + q * q).sqrt();
    let lo = (mean - rad).max(0.0);
    let hi = mean + rad;
    let sigma = [lo.sqrt(), hi.sqrt()];
    let dir = if q.abs() <= f64::EPSILON * (p.abs() + r.abs()) {
        if p <= r {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        }
    } else {
        // eigenvector for the smaller eigenvalue; pick the better conditioned form
        let u = [q, lo - p];
        let w = [lo - r, q];
        let pick = if u[0].hypot(u[1]) >= w[0].hypot(w[1]) { u } else { w };
        let n = pick[0].hypot(pick[1]);
        [pick[0] / n, pick[1] / n]
    };
    let tol = NULL_SPACE_TOL * sigma[1].max(1.0);
    let (dimension, generator) = if sigma[1] <= tol {
        (2, None)
    } else if sigma[0] <= tol {
        (1, Some(fp.f1 * dir[0] + fp.f2 * dir[1]))
    } else {
        (0, None)
    };
    let degenerate = match (dimension, generator) {
        (1, Some(g)) => is_degenerate_subspace(&[g]).unwrap_or(false),
        (2, _) => is_degenerate_subspace(&[fp.f1, fp.f2]).unwrap_or(false),
        _ => false,
    };
    RelativeNullSpace {
        dimension,
        degenerate,
        generator,
        sigma,
        min_direction: dir,
    }
}
