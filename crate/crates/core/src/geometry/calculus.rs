use super::{Field6, GeometryError, JVec, LocalFrame};
use crate::algebra::{inner4, Biv6, Vec4};
use crate::expr::SurfaceDef;
use crate::jet::Jet;

/// A tangent vector field: coordinate components and the ambient vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentField {
    /// `(a, b)` meaning `a ∂s + b ∂t`.
    pub coords: [Jet; 2],
    pub vector: JVec,
}

impl TangentField {
    pub fn coord_values(&self) -> [f64; 2] {
        [self.coords[0].value(), self.coords[1].value()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodazziResidual {
    /// Largest Euclidean norm of `(∇̄_f1 h)(f2, f_c) − (∇̄_f2 h)(f1, f_c)`.
    pub general: f64,
    /// `‖D_f2 h(f1,f1) − 2ζ2 h(f1,f1)‖` and `‖D_f1 h(f2,f2) + 2ζ1 h(f2,f2)‖`;
    /// these vanish only on minimal surfaces.
    pub minimal: [f64; 2],
}

fn need(phi_order: usize, needed: usize) -> Result<(), GeometryError> {
    if phi_order < needed {
        Err(GeometryError::OrderExhausted {
            needed,
            have: phi_order,
        })
    } else {
        Ok(())
    }
}

fn vec_d(v: &JVec, coord: usize) -> JVec {
    if coord == 0 {
        v.map(|j| j.ds())
    } else {
        v.map(|j| j.dt())
    }
}

impl LocalFrame {
    /// `Δφ = −g^{ij}(∂i∂jφ − Γ^k_ij ∂kφ)`.
    pub fn laplacian(&self, phi: &Jet) -> Result<Jet, GeometryError> {
        need(phi.order(), 2)?;
        let d = [phi.ds(), phi.dt()];
        let dd = [[d[0].ds(), d[0].dt()], [d[1].ds(), d[1].dt()]];
        let gi = |i: usize, j: usize| self.g_inv[i + j];
        let mut acc = Jet::constant(0.0, phi.base(), phi.order() - 2);
        for i in 0..2 {
            for j in 0..2 {
                let conn = self.gamma[0][i][j] * d[0] + self.gamma[1][i][j] * d[1];
                acc = acc + gi(i, j) * (dd[i][j] - conn);
            }
        }
        Ok(-acc)
    }

    pub fn laplacian_field(&self, f: &Field6) -> Result<Field6, GeometryError> {
        let mut out = [Jet::constant(0.0, self.point, 0); 6];
        for (o, c) in out.iter_mut().zip(f.0 .0.iter()) {
            *o = self.laplacian(c)?;
        }
        Ok(Field6(Biv6(out)))
    }

    /// `f_a(φ)`, the derivative of `φ` along the null frame vector `f_a`.
    pub fn frame_derivative(&self, a: usize, phi: &Jet) -> Result<Jet, GeometryError> {
        need(phi.order(), 1)?;
        let c = &self.f_coeffs[a];
        Ok(c[0] * phi.ds() + c[1] * phi.dt())
    }

    /// `f_a` applied to an ambient vector field.
    pub fn frame_derivative_vec(&self, a: usize, v: &JVec) -> JVec {
        let c = &self.f_coeffs[a];
        vec_d(v, 0).scale(c[0]) + vec_d(v, 1).scale(c[1])
    }

    /// `∇φ = −f1(φ) f2 − f2(φ) f1`.
    pub fn gradient(&self, phi: &Jet) -> Result<TangentField, GeometryError> {
        let d1 = self.frame_derivative(0, phi)?;
        let d2 = self.frame_derivative(1, phi)?;
        let [c1, c2] = &self.f_coeffs;
        let coords = [-(d1 * c2[0]) - d2 * c1[0], -(d1 * c2[1]) - d2 * c1[1]];
        let vector = self.xs.scale(coords[0]) + self.xt.scale(coords[1]);
        Ok(TangentField { coords, vector })
    }

    /// Value of the derivative of a bivector field along `a ∂s + b ∂t`.
    pub fn field_derivative(&self, coords: [f64; 2], f: &Field6) -> Biv6 {
        f.ds().value() * coords[0] + f.dt().value() * coords[1]
    }

    /// Connection coefficients `ζ_i` with `∇_{f_i} f1 = ζ_i f1`.
    pub fn zeta(&self) -> [Jet; 2] {
        std::array::from_fn(|a| -inner4(&self.frame_derivative_vec(a, &self.f1), &self.f2))
    }

    fn h_coord_vec(&self, i: usize, j: usize) -> JVec {
        self.e3.scale(self.h_coord[0][i][j]) + self.e4.scale(self.h_coord[1][i][j])
    }

    pub fn codazzi(&self) -> CodazziResidual {
        let hv: [[JVec; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| self.h_coord_vec(i, j)));
        // (∇̄_i h)_jk
        let cov = |i: usize, j: usize, k: usize| -> JVec {
            let mut v = self.normal_part(&vec_d(&hv[j][k], i));
            for m in 0..2 {
                v = v - hv[m][k].scale(self.gamma[m][i][j]) - hv[j][m].scale(self.gamma[m][i][k]);
            }
            v
        };
        let c: [Vec4; 2] = std::array::from_fn(|k| (cov(0, 1, k) - cov(1, 0, k)).values());
        let fc = self.f_coeffs.map(|r| r.map(|j| j.value()));
        let det = fc[0][0] * fc[1][1] - fc[0][1] * fc[1][0];
        let general = (0..2)
            .map(|a| ((c[0] * fc[a][0] + c[1] * fc[a][1]) * det).euclid_norm())
            .fold(0.0, f64::max);

        let [z1, z2] = self.zeta();
        let h11 = self.h_vec(0, 0);
        let h22 = self.h_vec(1, 1);
        let e1 = self.normal_part(&self.frame_derivative_vec(1, &h11)) - h11.scale(z2 * 2.0);
        let e2 = self.normal_part(&self.frame_derivative_vec(0, &h22)) + h22.scale(z1 * 2.0);
        CodazziResidual {
            general,
            minimal: [e1.values().euclid_norm(), e2.values().euclid_norm()],
        }
    }
}

/// The Gauss map `ν` with derivative data at `point`.
pub fn nu_field(surface: &SurfaceDef, point: (f64, f64)) -> Result<Field6, GeometryError> {
    Ok(LocalFrame::new(surface, point)?.nu)
}
