//! Indefinite inner-product algebra of Minkowski space E⁴₁ and its
//! bivector space Λ²(E⁴₁) ≅ E⁶₃.
//!
//! Signature is (−,+,+,+) with the timelike coordinate first. Bivectors
//! are stored by Plücker components in the order
//! `p01, p02, p03, p12, p13, p23`, and carry the metric induced by
//! `⟨a∧b, c∧d⟩ = ⟨a,c⟩⟨b,d⟩ − ⟨a,d⟩⟨b,c⟩`, which is diagonal with
//! signature (−,−,−,+,+,+).
//!
//! Vectors and bivectors are generic over [`Scalar`] so the same code runs
//! on plain reals and on [`Jet`](crate::jet::Jet) values.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Relative tolerance used by the lightlike and degeneracy predicates.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("vector {0:?} is not lightlike")]
    NotLightlike([f64; 4]),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("pair does not span a positive definite plane (Gram {0:?})")]
    NotPositiveDefinite([f64; 3]),
}

/// Field-like scalar used by the vector algebra: plain `f64` or a jet.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Add<f64, Output = Self>
{
    /// Point value (the constant Taylor coefficient for jets).
    fn value(&self) -> f64;
    /// A constant of the same shape as `self`.
    fn lift(&self, c: f64) -> Self;
    /// Square root. Callers guarantee a positive value.
    fn sqrt(self) -> Self;
    /// Reciprocal. Callers guarantee a value bounded away from zero.
    fn recip(self) -> Self;
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn lift(&self, c: f64) -> Self {
        c
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// A vector of E⁴₁; component 0 is timelike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4<T = f64>(pub [T; 4]);

/// A bivector of Λ²(E⁴₁) in Plücker components `p01, p02, p03, p12, p13, p23`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Biv6<T = f64>(pub [T; 6]);

/// Index pairs of the Plücker components, in storage order.
pub const PLUCKER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Diagonal of the induced bivector metric.
pub const BIV_SIGNATURE: [f64; 6] = [-1.0, -1.0, -1.0, 1.0, 1.0, 1.0];

impl Vec4<f64> {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Vec4([x0, x1, x2, x3])
    }

    /// Standard basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        Vec4(v)
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl<T: Scalar> Vec4<T> {
    pub fn map<U>(&self, f: impl Fn(T) -> U) -> Vec4<U> {
        Vec4([f(self.0[0]), f(self.0[1]), f(self.0[2]), f(self.0[3])])
    }

    pub fn values(&self) -> Vec4<f64> {
        self.map(|x| x.value())
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|x| x * k)
    }

    /// Sum of squared components, ignoring the signature.
    pub fn euclid_sq(&self) -> T {
        let [a, b, c, d] = self.0;
        a * a + b * b + c * c + d * d
    }
}

impl<T: Scalar> Add for Vec4<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl<T: Scalar> Sub for Vec4<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl<T: Scalar> Neg for Vec4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Scalar> Mul<f64> for Vec4<T> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.map(|x| x * k)
    }
}

impl Biv6<f64> {
    pub const ZERO: Biv6 = Biv6([0.0; 6]);

    /// Basis bivector `e_i ∧ e_j` for `i < j`.
    pub fn basis(i: usize, j: usize) -> Self {
        let k = PLUCKER_PAIRS
            .iter()
            .position(|&p| p == (i, j))
            .expect("basis bivector needs i < j < 4");
        let mut p = [0.0; 6];
        p[k] = 1.0;
        Biv6(p)
    }

    /// Euclideanized norm: the signature is ignored so that a zero norm
    /// means a zero bivector.
    pub fn euclid_norm(&self) -> f64 {
        self.euclid_dot(self).sqrt()
    }

    pub fn euclid_dot(&self, o: &Self) -> f64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a * b).sum()
    }
}

impl<T: Scalar> Biv6<T> {
    pub fn map<U>(&self, f: impl Fn(T) -> U) -> Biv6<U> {
        Biv6(std::array::from_fn(|i| f(self.0[i])))
    }

    pub fn values(&self) -> Biv6<f64> {
        self.map(|x| x.value())
    }

    pub fn scale(&self, k: T) -> Self {
        self.map(|x| x * k)
    }
}

impl<T: Scalar> Add for Biv6<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Biv6(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl<T: Scalar> Sub for Biv6<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Biv6(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl<T: Scalar> Neg for Biv6<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x)
    }
}

impl<T: Scalar> Mul<f64> for Biv6<T> {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        self.map(|x| x * k)
    }
}

/// Minkowski inner product `−u0v0 + u1v1 + u2v2 + u3v3`.
pub fn inner4<T: Scalar>(u: &Vec4<T>, v: &Vec4<T>) -> T {
    let (u, v) = (&u.0, &v.0);
    -(u[0] * v[0]) + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]
}

/// Exterior product; component `p_ij = u_i v_j − u_j v_i`.
pub fn wedge<T: Scalar>(u: &Vec4<T>, v: &Vec4<T>) -> Biv6<T> {
    Biv6(std::array::from_fn(|k| {
        let (i, j) = PLUCKER_PAIRS[k];
        u.0[i] * v.0[j] - u.0[j] * v.0[i]
    }))
}

/// Induced inner product on bivectors, signature (−,−,−,+,+,+).
pub fn inner6<T: Scalar>(p: &Biv6<T>, q: &Biv6<T>) -> T {
    let mut acc = -(p.0[0] * q.0[0]);
    for k in 1..6 {
        let term = p.0[k] * q.0[k];
        acc = if BIV_SIGNATURE[k] < 0.0 {
            acc - term
        } else {
            acc + term
        };
    }
    acc
}

fn is_lightlike(u: &Vec4) -> bool {
    let scale = u.euclid_norm();
    scale > 0.0 && inner4(u, u).abs() <= DEGENERACY_TOL * scale * scale
}

/// Whether two lightlike vectors are linearly dependent, decided by
/// orthogonality. In an index-1 space two null vectors are dependent
/// exactly when they are orthogonal.
pub fn lightlike_dependent(u: &Vec4, v: &Vec4) -> Result<bool, AlgebraError> {
    for w in [u, v] {
        if !is_lightlike(w) {
            return Err(AlgebraError::NotLightlike(w.0));
        }
    }
    let scale = u.euclid_norm() * v.euclid_norm();
    Ok(inner4(u, v).abs() <= DEGENERACY_TOL * scale)
}

/// Gram matrix of `basis` under the Minkowski product.
pub fn gram_matrix(basis: &[Vec4]) -> Vec<Vec<f64>> {
    basis
        .iter()
        .map(|a| basis.iter().map(|b| inner4(a, b)).collect())
        .collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        d *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    d
}

/// Euclidean Gram determinant, used to detect linear dependence.
fn euclid_gram_det(basis: &[Vec4]) -> f64 {
    let m = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| a.0.iter().zip(b.0.iter()).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    det(m)
}

/// Whether `span(basis)` carries a degenerate induced inner product,
/// i.e. `U ∩ U^⊥ ≠ {0}`. Decided by a singular Gram matrix.
pub fn is_degenerate_subspace(basis: &[Vec4]) -> Result<bool, AlgebraError> {
    if basis.is_empty() || basis.len() > 4 {
        return Err(AlgebraError::DependentBasis);
    }
    let scale: f64 = basis.iter().map(|b| b.euclid_norm().powi(2)).product();
    if scale == 0.0 || euclid_gram_det(basis).abs() <= DEGENERACY_TOL * scale {
        return Err(AlgebraError::DependentBasis);
    }
    let g = det(gram_matrix(basis));
    Ok(g.abs() <= DEGENERACY_TOL * scale)
}

/// Gram–Schmidt on a spacelike plane. `e3` is `n1` normalized; `e4` lies
/// on the same side of `e3` as `n2`, so orientation is preserved.
pub fn orthonormalize_pair<T: Scalar>(
    n1: &Vec4<T>,
    n2: &Vec4<T>,
) -> Result<(Vec4<T>, Vec4<T>), AlgebraError> {
    let g11 = inner4(n1, n1);
    let g12 = inner4(n1, n2);
    let g22 = inner4(n2, n2);
    let (a, b, c) = (g11.value(), g12.value(), g22.value());
    let scale = n1.values().euclid_norm() * n2.values().euclid_norm();
    if a <= 0.0 || a * c - b * b <= DEGENERACY_TOL * scale * scale {
        return Err(AlgebraError::NotPositiveDefinite([a, b, c]));
    }
    let inv1 = g11.sqrt().recip();
    let e3 = n1.scale(inv1);
    let proj = inner4(n2, &e3);
    let w = *n2 - e3.scale(proj);
    let e4 = w.scale(inner4(&w, &w).sqrt().recip());
    Ok((e3, e4))
}

/// Euclidean 4×4 determinant of the column vectors `a, b, c, d`.
pub fn det4(a: &Vec4, b: &Vec4, c: &Vec4, d: &Vec4) -> f64 {
    let m = (0..4).map(|r| vec![a.0[r], b.0[r], c.0[r], d.0[r]]).collect();
    det(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vec4 {
        Vec4::basis(i)
    }

    #[test]
    fn inner4_examples() {
        assert_eq!(inner4(&e(0), &e(0)), -1.0);
        let l = Vec4::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(inner4(&l, &l), 0.0);
        assert_eq!(inner4(&e(1), &e(2)), 0.0);
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge(&e(0), &e(1)).0, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let u = Vec4::new(0.3, -1.0, 2.0, 0.5);
        assert_eq!(wedge(&u, &u), Biv6::ZERO);
        let a = e(0) + e(1);
        let b = e(0) - e(1);
        assert_eq!(wedge(&a, &b), Biv6::basis(0, 1) * -2.0);
    }

    #[test]
    fn inner6_examples() {
        let b01 = Biv6::basis(0, 1);
        let b23 = Biv6::basis(2, 3);
        assert_eq!(inner6(&b01, &b01), -1.0);
        assert_eq!(inner6(&b23, &b23), 1.0);
        assert_eq!(inner6(&b01, &b23), 0.0);
    }

    #[test]
    fn lightlike_dependence() {
        let u = Vec4::new(1.0, 1.0, 0.0, 0.0);
        assert!(lightlike_dependent(&u, &Vec4::new(2.0, 2.0, 0.0, 0.0)).unwrap());
        let v = Vec4::new(1.0, -1.0, 0.0, 0.0);
        assert_eq!(inner4(&u, &v), -2.0);
        assert!(!lightlike_dependent(&u, &v).unwrap());
        assert!(!lightlike_dependent(&u, &Vec4::new(1.0, 0.0, 1.0, 0.0)).unwrap());
        assert!(matches!(
            lightlike_dependent(&u, &e(1)),
            Err(AlgebraError::NotLightlike(_))
        ));
    }

    #[test]
    fn degenerate_subspaces() {
        let l = Vec4::new(1.0, 1.0, 0.0, 0.0);
        assert!(is_degenerate_subspace(&[l]).unwrap());
        assert!(!is_degenerate_subspace(&[e(0), e(1)]).unwrap());
        assert!(is_degenerate_subspace(&[l, e(2)]).unwrap());
        assert_eq!(
            is_degenerate_subspace(&[e(1), e(1) * 2.0]),
            Err(AlgebraError::DependentBasis)
        );
    }

    #[test]
    fn orthonormalize_examples() {
        let (a, b) = orthonormalize_pair(&e(2), &e(3)).unwrap();
        assert_eq!((a, b), (e(2), e(3)));
        let (a, b) =
            orthonormalize_pair(&Vec4::new(0.0, 0.0, 2.0, 0.0), &Vec4::new(0.0, 0.0, 1.0, 1.0))
                .unwrap();
        assert_eq!((a, b), (e(2), e(3)));
        let (a, b) =
            orthonormalize_pair(&Vec4::new(1.0, 0.0, 2.0, 0.0), &Vec4::new(1.0, 0.0, 0.0, 2.0))
                .unwrap();
        assert!((inner4(&a, &a) - 1.0).abs() < 1e-12);
        assert!((inner4(&b, &b) - 1.0).abs() < 1e-12);
        assert!(inner4(&a, &b).abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_lorentzian_plane() {
        assert!(matches!(
            orthonormalize_pair(&e(0), &e(1)),
            Err(AlgebraError::NotPositiveDefinite(_))
        ));
    }
}
