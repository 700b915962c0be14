//! Reference computations that share no code path with the engine
//! beyond jet arithmetic and the immersion itself.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};

use crate::algebra::{wedge, Biv6, Vec4, BIV_SIGNATURE};
use crate::geometry::{FramePoint, LocalFrame};
use crate::jet::Jet;

fn mink(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

fn mink_jet(u: &[Jet; 4], v: &[Jet; 4]) -> Jet {
    -(u[0] * v[0]) + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

/// Metric data from the immersion: `g[i][j]`, `dg[l][i][j] = ∂_l g_ij` and
/// `ddg[l][m][i][j] = ∂_l ∂_m g_ij` at the base point.
struct MetricPartials {
    g: [[f64; 2]; 2],
    dg: [[[f64; 2]; 2]; 2],
    ddg: [[[[f64; 2]; 2]; 2]; 2],
}

fn metric_partials(x: &[Jet; 4]) -> MetricPartials {
    let xs = x.map(|j| j.ds());
    let xt = x.map(|j| j.dt());
    let d = [xs, xt];
    let gj: [[Jet; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| mink_jet(&d[i], &d[j])));
    let p = |j: &Jet, a: usize, b: usize| j.partial(a, b).expect("immersion jet order too low");
    let unit = |l: usize| if l == 0 { (1, 0) } else { (0, 1) };
    MetricPartials {
        g: gj.map(|r| r.map(|j| j.value())),
        dg: std::array::from_fn(|l| {
            let (a, b) = unit(l);
            gj.map(|r| r.map(|j| p(&j, a, b)))
        }),
        ddg: std::array::from_fn(|l| {
            std::array::from_fn(|m| {
                let ((a1, b1), (a2, b2)) = (unit(l), unit(m));
                gj.map(|r| r.map(|j| p(&j, a1 + a2, b1 + b2)))
            })
        }),
    }
}

fn inv2(g: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]]
}

/// Christoffel symbols `Γ^k_ij` of the induced metric and their first
/// partials `dgamma[l][k][i][j] = ∂_l Γ^k_ij`.
#[allow(clippy::type_complexity)]
fn christoffel_with_partials(m: &MetricPartials) -> ([[[f64; 2]; 2]; 2], [[[[f64; 2]; 2]; 2]; 2]) {
    let gi = inv2(&m.g);
    // ∂_l g^{ab} = −g^{ac} ∂_l g_cd g^{db}
    let dgi: [[[f64; 2]; 2]; 2] = std::array::from_fn(|l| {
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut acc = 0.0;
                for c in 0..2 {
                    for d in 0..2 {
                        acc -= gi[a][c] * m.dg[l][c][d] * gi[d][b];
                    }
                }
                acc
            })
        })
    });
    // first-kind symbols Γ_mij = ½(∂_i g_mj + ∂_j g_mi − ∂_m g_ij) and partials
    let first = |mm: usize, i: usize, j: usize| 0.5 * (m.dg[i][mm][j] + m.dg[j][mm][i] - m.dg[mm][i][j]);
    let dfirst = |l: usize, mm: usize, i: usize, j: usize| {
        0.5 * (m.ddg[l][i][mm][j] + m.ddg[l][j][mm][i] - m.ddg[l][mm][i][j])
    };
    let gamma = std::array::from_fn(|k| {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..2).map(|mm| gi[k][mm] * first(mm, i, j)).sum()))
    });
    let dgamma = std::array::from_fn(|l| {
        std::array::from_fn(|k| {
            std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..2)
                        .map(|mm| dgi[l][k][mm] * first(mm, i, j) + gi[k][mm] * dfirst(l, mm, i, j))
                        .sum()
                })
            })
        })
    });
    (gamma, dgamma)
}

/// Intrinsic curvature `−R_stts / det g` from the Riemann tensor of the
/// induced metric. The immersion jets need order 3 or more.
pub fn riemann_curvature(x: &[Jet; 4]) -> f64 {
    let m = metric_partials(x);
    let (gamma, dgamma) = christoffel_with_partials(&m);
    // R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
    let riem_up = |a: usize, b: usize, c: usize, d: usize| {
        let mut r = dgamma[c][a][d][b] - dgamma[d][a][c][b];
        for e in 0..2 {
            r += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
        }
        r
    };
    // R(∂s,∂t)∂t = R^e_tst ∂e
    let r_stts: f64 = (0..2).map(|e| m.g[0][e] * riem_up(e, 1, 0, 1)).sum();
    let det = m.g[0][0] * m.g[1][1] - m.g[0][1] * m.g[1][0];
    -r_stts / det
}

/// Christoffel symbols `Γ^k_ij` at the base point.
pub fn christoffel(x: &[Jet; 4]) -> [[[f64; 2]; 2]; 2] {
    christoffel_with_partials(&metric_partials(x)).0
}

/// Null-chart pattern: with `g_ss = g_tt = 0` only `Γ^s_ss = ∂_s g_st / g_st`
/// and `Γ^t_tt = ∂_t g_st / g_st` survive. `None` when the chart is not
/// in null form within `1e-10`.
pub fn null_chart_christoffel(x: &[Jet; 4]) -> Option<[[[f64; 2]; 2]; 2]> {
    let m = metric_partials(x);
    if m.g[0][0].abs() > 1e-10 || m.g[1][1].abs() > 1e-10 {
        return None;
    }
    let gst = m.g[0][1];
    let mut out = [[[0.0; 2]; 2]; 2];
    out[0][0][0] = m.dg[0][0][1] / gst;
    out[1][1][1] = m.dg[1][0][1] / gst;
    Some(out)
}

/// `(2/m²) ∂s∂t φ` with `m² = −g_st`, valid on null charts.
pub fn null_chart_laplacian(x: &[Jet; 4], phi: &Jet) -> Option<f64> {
    let m = metric_partials(x);
    if m.g[0][0].abs() > 1e-10 || m.g[1][1].abs() > 1e-10 {
        return None;
    }
    let m2 = -m.g[0][1];
    Some(2.0 / m2 * phi.partial(1, 1).ok()?)
}

/// Tangential coordinates `(a, b)` of `v ≈ a x_s + b x_t`, by solving the
/// Gram system.
fn tangent_coords(xs: &[f64; 4], xt: &[f64; 4], v: &[f64; 4]) -> [f64; 2] {
    let g = [[mink(xs, xs), mink(xs, xt)], [mink(xt, xs), mink(xt, xt)]];
    let gi = inv2(&g);
    let r = [mink(v, xs), mink(v, xt)];
    [gi[0][0] * r[0] + gi[0][1] * r[1], gi[1][0] * r[0] + gi[1][1] * r[1]]
}

fn normal_part(xs: &[f64; 4], xt: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
    let [a, b] = tangent_coords(xs, xt, v);
    std::array::from_fn(|i| v[i] - a * xs[i] - b * xt[i])
}

/// Normal curvature as the `e3∧e4` coefficient of `h(f1,f1)∧h(f2,f2)`,
/// with `h` recomputed from the immersion. Equals `K^D` on minimal
/// surfaces.
pub fn wedge_normal_curvature(fp: &FramePoint) -> f64 {
    let x = &fp.x_jets;
    let p = |j: &Jet, a: usize, b: usize| j.partial(a, b).expect("immersion jet order too low");
    let xs = x.map(|j| p(&j, 1, 0));
    let xt = x.map(|j| p(&j, 0, 1));
    let second = [
        [x.map(|j| p(&j, 2, 0)), x.map(|j| p(&j, 1, 1))],
        [x.map(|j| p(&j, 1, 1)), x.map(|j| p(&j, 0, 2))],
    ];
    let h = |a: usize| {
        let c = fp.f_coeffs[a].map(|j| j.value());
        let mut v = [0.0; 4];
        for i in 0..2 {
            for j in 0..2 {
                for (k, vk) in v.iter_mut().enumerate() {
                    *vk += c[i] * c[j] * second[i][j][k];
                }
            }
        }
        Vec4(normal_part(&xs, &xt, &v))
    };
    let hh = wedge(&h(0), &h(1));
    let mu = wedge(&fp.e3, &fp.e4);
    signed_dot6(&hh, &mu) / signed_dot6(&mu, &mu)
}

fn signed_dot6(p: &Biv6, q: &Biv6) -> f64 {
    (0..6).map(|i| BIV_SIGNATURE[i] * p.0[i] * q.0[i]).sum()
}

/// `Δφ = f1 f2 φ + f2 f1 φ − (∇_f1 f2) φ − (∇_f2 f1) φ`, with the
/// connection taken from the Gauss formula (tangent part of the ambient
/// derivative).
pub fn frame_laplacian(lf: &LocalFrame, phi: &Jet) -> f64 {
    let c = lf.f_coeffs;
    let along = |a: usize, f: &Jet| c[a][0] * f.ds() + c[a][1] * f.dt();
    let second = |a: usize, b: usize| along(a, &along(b, phi)).value();
    let xs = lf.xs.values().0;
    let xt = lf.xt.values().0;
    // ∇_{f_a} f_b as coordinates of the tangent part of D_{f_a} F_b
    let nabla = |a: usize, b: usize| {
        let fb: [Jet; 4] = std::array::from_fn(|k| c[b][0] * lf.xs.0[k] + c[b][1] * lf.xt.0[k]);
        let d: [f64; 4] = std::array::from_fn(|k| along(a, &fb[k]).value());
        tangent_coords(&xs, &xt, &d)
    };
    let grad = [phi.ds().value(), phi.dt().value()];
    let conn = |a: usize, b: usize| {
        let v = nabla(a, b);
        v[0] * grad[0] + v[1] * grad[1]
    };
    second(0, 1) + second(1, 0) - conn(0, 1) - conn(1, 0)
}

/// Central finite-difference estimate of `∂^(a+b) f / ∂s^a ∂t^b`,
/// `a, b ≤ 3`, as a tensor product of fourth-order one-dimensional
/// stencils.
pub fn fd_partial(f: impl Fn(f64, f64) -> f64, point: (f64, f64), a: usize, b: usize, h: f64) -> f64 {
    fn stencil(order: usize) -> &'static [(i32, f64)] {
        match order {
            0 => &[(0, 1.0)],
            1 => &[(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)],
            2 => &[(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)],
            3 => &[(-3, 0.125), (-2, -1.0), (-1, 1.625), (1, -1.625), (2, 1.0), (3, -0.125)],
            _ => panic!("finite-difference order {order} unsupported"),
        }
    }
    let mut acc = 0.0;
    for &(i, wi) in stencil(a) {
        for &(j, wj) in stencil(b) {
            acc += wi * wj * f(point.0 + i as f64 * h, point.1 + j as f64 * h);
        }
    }
    acc / h.powi((a + b) as i32)
}

/// Largest `2×2` minor of the `2×4` matrix with rows `u, v`, relative to
/// `‖u‖‖v‖`: zero exactly when the two vectors are dependent.
pub fn rank_defect(u: &Vec4, v: &Vec4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            worst = worst.max((u.0[i] * v.0[j] - u.0[j] * v.0[i]).abs());
        }
    }
    worst / (u.euclid_norm() * v.euclid_norm())
}

/// Whether `U ∩ U^⊥ ≠ {0}` for `U` spanned by the independent `basis`.
/// `U^⊥` is extracted as the null space of the rows `ηb_i`, and the
/// intersection is non-trivial iff `[U | U^⊥]` is singular.
pub fn meets_orthogonal_complement(basis: &[Vec4], tol: f64) -> bool {
    let eta = [-1.0, 1.0, 1.0, 1.0];
    let mut ata = Matrix4::<f64>::zeros();
    for b in basis {
        let row = Vector4::from_fn(|c, _| eta[c] * b.0[c]);
        ata += row * row.transpose();
    }
    let eig = SymmetricEigen::new(ata);
    let lmax = eig.eigenvalues.max().max(1.0);
    let mut cols: Vec<Vector4<f64>> = basis.iter().map(|b| Vector4::from(b.0)).collect();
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        if *l <= tol * lmax {
            cols.push(eig.eigenvectors.column(i).into_owned());
        }
    }
    if cols.len() != 4 {
        return cols.len() < 4;
    }
    let m = Matrix4::from_columns(&cols);
    let scale = basis.iter().map(|b| b.euclid_norm()).fold(1.0, f64::max);
    let gram = SymmetricEigen::new(m.transpose() * m).eigenvalues;
    gram.min().max(0.0).sqrt() <= tol.sqrt() * scale
}
