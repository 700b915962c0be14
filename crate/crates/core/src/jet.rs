//! Bivariate truncated Taylor series ("jets") in the surface parameters
//! `(s, t)`.
//!
//! A jet of order `n` at base point `(s₀, t₀)` stores the coefficients
//! `c_ab` of `Σ c_ab (s−s₀)^a (t−t₀)^b` for `a + b ≤ n`, densely, in
//! graded order. Arithmetic is exact truncated polynomial algebra, so
//! every partial derivative up to order `n` is available without
//! finite-difference error. Differentiation lowers the order by one, and
//! binary operations truncate to the smaller order of their operands.
//! Coefficients are carried in double-double precision; the public
//! accessors round to `f64`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;
use twofloat::TwoFloat;

use crate::algebra::Scalar;

/// Largest supported total order.
pub const MAX_ORDER: usize = 8;
/// Default order: enough for fourth derivatives of the Gauss map, which
/// itself consumes one derivative of the immersion.
pub const DEFAULT_ORDER: usize = 5;

const MAX_COEFFS: usize = (MAX_ORDER + 1) * (MAX_ORDER + 2) / 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet whose value {0:e} is numerically zero")]
    DivisionNearZero(f64),
    #[error("jets expanded at different base points {0:?} and {1:?}")]
    MismatchedBase((f64, f64), (f64, f64)),
    #[error("{func} is undefined at {value}")]
    DomainError { func: &'static str, value: f64 },
    #[error("derivative of order ({0},{1}) exceeds jet order {2}")]
    OrderExceeded(usize, usize, usize),
    #[error("jet order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    S,
    T,
}

/// Binary and unary arithmetic available on jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    PowInt(i32),
}

/// Elementary functions composable with jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElemFn {
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Sqrt,
    Log,
}

impl ElemFn {
    pub const ALL: [ElemFn; 7] = [
        ElemFn::Sin,
        ElemFn::Cos,
        ElemFn::Sinh,
        ElemFn::Cosh,
        ElemFn::Exp,
        ElemFn::Sqrt,
        ElemFn::Log,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ElemFn::Sin => "sin",
            ElemFn::Cos => "cos",
            ElemFn::Sinh => "sinh",
            ElemFn::Cosh => "cosh",
            ElemFn::Exp => "exp",
            ElemFn::Sqrt => "sqrt",
            ElemFn::Log => "log",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Plain real evaluation.
    pub fn apply(self, x: f64) -> f64 {
        match self {
            ElemFn::Sin => x.sin(),
            ElemFn::Cos => x.cos(),
            ElemFn::Sinh => x.sinh(),
            ElemFn::Cosh => x.cosh(),
            ElemFn::Exp => x.exp(),
            ElemFn::Sqrt => x.sqrt(),
            ElemFn::Log => x.ln(),
        }
    }

    /// Taylor coefficients `f^(k)(x)/k!` for `k = 0..=n`.
    fn taylor(self, x: TwoFloat, n: usize) -> Result<Vec<TwoFloat>, JetError> {
        let (xh, xl) = (x.hi(), x.lo());
        // f(xh + xl) ≈ f(xh) + f'(xh)·xl
        let shifted = |v: f64, dv: f64| TwoFloat::from(v) + dv * xl;
        let mut d = Vec::with_capacity(n + 1);
        match self {
            ElemFn::Sin | ElemFn::Cos => {
                let (s, c) = xh.sin_cos();
                let (s, c) = (shifted(s, c), shifted(c, -s));
                let cycle = [s, c, -s, -c];
                let shift = if self == ElemFn::Sin { 0 } else { 1 };
                d.extend((0..=n).map(|k| cycle[(k + shift) % 4]));
            }
            ElemFn::Sinh | ElemFn::Cosh => {
                let (s, c) = (xh.sinh(), xh.cosh());
                let (s, c) = (shifted(s, c), shifted(c, s));
                let shift = if self == ElemFn::Sinh { 0 } else { 1 };
                d.extend((0..=n).map(|k| if (k + shift) % 2 == 0 { s } else { c }));
            }
            ElemFn::Exp => {
                let e = xh.exp();
                d.extend(std::iter::repeat_n(shifted(e, e), n + 1));
            }
            ElemFn::Sqrt => {
                if xh <= 0.0 {
                    return Err(JetError::DomainError { func: "sqrt", value: xh });
                }
                // d^k/dx^k x^(1/2) = (1/2)(1/2 − 1)…(1/2 − k + 1) x^(1/2 − k)
                let mut coef = x.sqrt();
                for k in 0..=n {
                    d.push(coef);
                    coef = coef * (0.5 - k as f64) / x;
                }
            }
            ElemFn::Log => {
                if xh <= 0.0 {
                    return Err(JetError::DomainError { func: "log", value: xh });
                }
                d.push(shifted(xh.ln(), 1.0 / xh));
                // (k−1)! (−1)^(k−1) / x^k
                let mut coef = ONE / x;
                for k in 1..=n {
                    d.push(coef);
                    coef = coef * -(k as f64) / x;
                }
            }
        }
        // divide by k!
        let mut fact = 1.0;
        for (k, v) in d.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *v /= fact;
        }
        Ok(d)
    }
}

const ZERO: TwoFloat = TwoFloat::from_f64(0.0);
const ONE: TwoFloat = TwoFloat::from_f64(1.0);

#[inline]
fn idx(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

#[inline]
fn n_coeffs(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Truncated bivariate Taylor expansion of a scalar field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: u8,
    base: (f64, f64),
    coeffs: [TwoFloat; MAX_COEFFS],
}

impl Jet {
    fn zeros(order: usize, base: (f64, f64)) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet {
            order: order as u8,
            base,
            coeffs: [ZERO; MAX_COEFFS],
        }
    }

    pub fn constant(value: f64, base: (f64, f64), order: usize) -> Self {
        let mut j = Self::zeros(order, base);
        j.coeffs[0] = TwoFloat::from(value);
        j
    }

    /// The coordinate function `s` or `t` expanded at `base`.
    pub fn var(which: Var, base: (f64, f64), order: usize) -> Self {
        let (v, slot) = match which {
            Var::S => (base.0, idx(1, 0)),
            Var::T => (base.1, idx(0, 1)),
        };
        let mut j = Self::constant(v, base, order);
        if order >= 1 {
            j.coeffs[slot] = ONE;
        }
        j
    }

    /// Build a jet from Taylor coefficients listed in graded order
    /// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), …`.
    pub fn from_coeffs(base: (f64, f64), order: usize, coeffs: &[f64]) -> Result<Self, JetError> {
        if order > MAX_ORDER {
            return Err(JetError::OrderTooLarge(order));
        }
        let mut j = Self::zeros(order, base);
        let n = n_coeffs(order).min(coeffs.len());
        for (c, &v) in j.coeffs.iter_mut().zip(&coeffs[..n]) {
            *c = TwoFloat::from(v);
        }
        Ok(j)
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn base(&self) -> (f64, f64) {
        self.base
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0].hi()
    }

    /// Raw Taylor coefficient `c_ab` (zero beyond the order).
    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        if a + b > self.order() {
            0.0
        } else {
            self.coeffs[idx(a, b)].hi()
        }
    }

    /// Coefficients in graded order.
    pub fn coeffs(&self) -> Vec<f64> {
        self.coeffs[..n_coeffs(self.order())].iter().map(|c| c.hi()).collect()
    }

    /// `∂^(a+b) f / ∂s^a ∂t^b` at the base point.
    pub fn partial(&self, a: usize, b: usize) -> Result<f64, JetError> {
        if a + b > self.order() {
            return Err(JetError::OrderExceeded(a, b, self.order()));
        }
        Ok((self.coeffs[idx(a, b)] * (factorial(a) * factorial(b))).hi())
    }

    /// Truncate to a lower order.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        let mut j = Self::zeros(order, self.base);
        let n = n_coeffs(order);
        j.coeffs[..n].copy_from_slice(&self.coeffs[..n]);
        j
    }

    /// Partial derivative field `∂f/∂s`, one order lower.
    pub fn ds(&self) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let n = self.order() - 1;
        let mut j = Self::zeros(n, self.base);
        for d in 0..=n {
            for b in 0..=d {
                let a = d - b;
                j.coeffs[idx(a, b)] = self.coeffs[idx(a + 1, b)] * (a + 1) as f64;
            }
        }
        j
    }

    /// Partial derivative field `∂f/∂t`, one order lower.
    pub fn dt(&self) -> Self {
        assert!(self.order > 0, "cannot differentiate an order-0 jet");
        let n = self.order() - 1;
        let mut j = Self::zeros(n, self.base);
        for d in 0..=n {
            for b in 0..=d {
                let a = d - b;
                j.coeffs[idx(a, b)] = self.coeffs[idx(a, b + 1)] * (b + 1) as f64;
            }
        }
        j
    }

    pub fn d(&self, which: Var) -> Self {
        match which {
            Var::S => self.ds(),
            Var::T => self.dt(),
        }
    }

    fn check_base(&self, o: &Self) -> Result<(), JetError> {
        if self.base != o.base {
            Err(JetError::MismatchedBase(self.base, o.base))
        } else {
            Ok(())
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(TwoFloat, TwoFloat) -> TwoFloat) -> Self {
        let n = self.order().min(o.order());
        let mut j = Self::zeros(n, self.base);
        for k in 0..n_coeffs(n) {
            j.coeffs[k] = f(self.coeffs[k], o.coeffs[k]);
        }
        j
    }

    fn cauchy(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut j = Self::zeros(n, self.base);
        for d1 in 0..=n {
            for b1 in 0..=d1 {
                let x = self.coeffs[idx(d1 - b1, b1)];
                if x.hi() == 0.0 {
                    continue;
                }
                for d2 in 0..=n - d1 {
                    let row = (d1 + d2) * (d1 + d2 + 1) / 2 + b1;
                    let src = d2 * (d2 + 1) / 2;
                    for b2 in 0..=d2 {
                        j.coeffs[row + b2] += x * o.coeffs[src + b2];
                    }
                }
            }
        }
        j
    }

    fn div_scale(&self) -> f64 {
        self.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Quotient by series inversion of the divisor.
    pub fn checked_div(&self, o: &Self) -> Result<Self, JetError> {
        self.check_base(o)?;
        let g0 = o.coeffs[0];
        let scale = o.div_scale();
        if scale == 0.0 || g0.hi().abs() <= 1e-12 * scale {
            return Err(JetError::DivisionNearZero(g0.hi()));
        }
        let n = self.order().min(o.order());
        let mut q = Self::zeros(n, self.base);
        for d in 0..=n {
            for b in 0..=d {
                let a = d - b;
                let mut acc = self.coeffs[idx(a, b)];
                // subtract Σ g_ij q_(a−i, b−j) over (i,j) ≠ (0,0)
                for i in 0..=a {
                    for jj in 0..=b {
                        if i == 0 && jj == 0 {
                            continue;
                        }
                        acc -= o.coeffs[idx(i, jj)] * q.coeffs[idx(a - i, b - jj)];
                    }
                }
                q.coeffs[idx(a, b)] = acc / g0;
            }
        }
        Ok(q)
    }

    pub fn checked_recip(&self) -> Result<Self, JetError> {
        Self::constant(1.0, self.base, self.order()).checked_div(self)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i32) -> Result<Self, JetError> {
        let base = if n < 0 { self.checked_recip()? } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::constant(1.0, self.base, self.order());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.cauchy(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.cauchy(&sq);
            }
        }
        Ok(acc)
    }

    /// Compose an elementary function with this jet.
    pub fn elem(&self, f: ElemFn) -> Result<Self, JetError> {
        let n = self.order();
        let d = f.taylor(self.coeffs[0], n)?;
        let mut delta = *self;
        delta.coeffs[0] = ZERO;
        // Horner in δ = self − value; δ^k vanishes beyond the order.
        let mut r = Self::zeros(n, self.base);
        r.coeffs[0] = d[n];
        for k in (0..n).rev() {
            r = r.cauchy(&delta);
            r.coeffs[0] += d[k];
        }
        Ok(r)
    }

    /// Checked arithmetic dispatch. `b` is ignored by unary operations.
    pub fn arith(op: JetOp, a: &Jet, b: &Jet) -> Result<Jet, JetError> {
        match op {
            JetOp::Neg => Ok(-*a),
            JetOp::PowInt(n) => a.powi(n),
            JetOp::Add => a.check_base(b).map(|_| a.zip(b, |x, y| x + y)),
            JetOp::Sub => a.check_base(b).map(|_| a.zip(b, |x, y| x - y)),
            JetOp::Mul => a.check_base(b).map(|_| a.cauchy(b)),
            JetOp::Div => a.checked_div(b),
        }
    }

    pub fn sin(&self) -> Self {
        self.elem(ElemFn::Sin).unwrap()
    }

    pub fn cos(&self) -> Self {
        self.elem(ElemFn::Cos).unwrap()
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::arith(JetOp::Add, &self, &o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::arith(JetOp::Sub, &self, &o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet::arith(JetOp::Mul, &self, &o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self.checked_div(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, k: f64) -> Jet {
        for c in self.coeffs.iter_mut() {
            *c *= k;
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, k: f64) -> Jet {
        self.coeffs[0] += k;
        self
    }
}

impl Scalar for Jet {
    fn value(&self) -> f64 {
        self.coeffs[0].hi()
    }
    fn lift(&self, c: f64) -> Self {
        Jet::constant(c, self.base, self.order())
    }
    fn sqrt(self) -> Self {
        self.elem(ElemFn::Sqrt).unwrap_or_else(|e| panic!("{e}"))
    }
    fn recip(self) -> Self {
        self.checked_recip().unwrap_or_else(|e| panic!("{e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: (f64, f64) = (0.3, 0.7);

    #[test]
    fn var_examples() {
        let s = Jet::var(Var::S, P, 5);
        assert_eq!(s.value(), 0.3);
        assert_eq!(s.coeff(1, 0), 1.0);
        assert!(s.coeffs()[2..].iter().all(|&c| c == 0.0));
        let t = Jet::var(Var::T, (0.0, 0.0), 5);
        assert_eq!((t.value(), t.coeff(0, 1), t.coeff(1, 0)), (0.0, 1.0, 0.0));
        assert_eq!(Jet::var(Var::S, (1.0, 2.0), 5).partial(1, 0).unwrap(), 1.0);
    }

    #[test]
    fn product_of_coordinates() {
        let b = (2.0, 3.0);
        let p = Jet::var(Var::S, b, 5) * Jet::var(Var::T, b, 5);
        assert_eq!(p.coeff(0, 0), 6.0);
        assert_eq!(p.coeff(1, 0), 3.0);
        assert_eq!(p.coeff(0, 1), 2.0);
        assert_eq!(p.coeff(1, 1), 1.0);
        let rest: f64 = p.coeffs()[idx(2, 0)..].iter().map(|c| c.abs()).sum();
        assert_eq!(rest - 1.0, 0.0);
    }

    #[test]
    fn reciprocal_of_s() {
        let b = (2.0, 0.0);
        let q = Jet::constant(1.0, b, 5) / Jet::var(Var::S, b, 5);
        assert_eq!(q.coeff(0, 0), 0.5);
        assert_eq!(q.coeff(1, 0), -0.25);
        assert_eq!(q.coeff(2, 0), 0.125);
        // finite-difference cross-check of the second derivative
        let h = 1e-3;
        let f = |s: f64| 1.0 / s;
        let fd = (f(2.0 + h) - 2.0 * f(2.0) + f(2.0 - h)) / (h * h);
        assert!((q.partial(2, 0).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn add_neg_is_zero() {
        let a = Jet::var(Var::S, P, 5).sin() * Jet::var(Var::T, P, 5);
        assert!((a + -a).coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn elementary_examples() {
        let z = Jet::constant(0.0, P, 5);
        let e = z.elem(ElemFn::Exp).unwrap();
        assert_eq!(e.value(), 1.0);
        assert!(e.coeffs()[1..].iter().all(|&c| c == 0.0));

        let s = Jet::var(Var::S, (0.0, 0.0), 5).sin();
        assert_eq!(s.coeff(1, 0), 1.0);
        assert!((s.coeff(3, 0) + 1.0 / 6.0).abs() < 1e-16);
        assert!((s.coeff(5, 0) - 1.0 / 120.0).abs() < 1e-17);
        for k in [0, 2, 4] {
            assert_eq!(s.coeff(k, 0), 0.0);
        }

        let c = Jet::var(Var::T, (0.0, 0.5), 5).elem(ElemFn::Cosh).unwrap();
        let h = 1e-3;
        let f = |t: f64| t.cosh();
        let d1 = (f(0.5 + h) - f(0.5 - h)) / (2.0 * h);
        let d2 = (f(0.5 + h) - 2.0 * f(0.5) + f(0.5 - h)) / (h * h);
        assert!((c.partial(0, 1).unwrap() - d1).abs() / d1.abs() < 1e-5);
        assert!((c.partial(0, 2).unwrap() - d2).abs() / d2.abs() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        let neg = Jet::constant(-1.0, P, 3);
        assert!(matches!(neg.elem(ElemFn::Sqrt), Err(JetError::DomainError { func: "sqrt", .. })));
        assert!(matches!(neg.elem(ElemFn::Log), Err(JetError::DomainError { func: "log", .. })));
        let zero = Jet::constant(0.0, P, 3);
        assert!(matches!(
            Jet::constant(1.0, P, 3).checked_div(&zero),
            Err(JetError::DivisionNearZero(_))
        ));
    }

    #[test]
    fn mismatched_base() {
        let a = Jet::var(Var::S, (0.0, 0.0), 3);
        let b = Jet::var(Var::S, (1.0, 0.0), 3);
        assert!(matches!(
            Jet::arith(JetOp::Add, &a, &b),
            Err(JetError::MismatchedBase(..))
        ));
    }

    #[test]
    fn partial_examples() {
        let s = Jet::var(Var::S, P, 5);
        let t = Jet::var(Var::T, P, 5);
        assert_eq!((s * t).partial(1, 1).unwrap(), 1.0);
        assert_eq!((s * s).partial(2, 0).unwrap(), 2.0);
        let e = (s + t).elem(ElemFn::Exp).unwrap();
        let v = 1f64.exp();
        for d in 0..=5 {
            for b in 0..=d {
                let p = e.partial(d - b, b).unwrap();
                assert!((p - v).abs() < 1e-13 * v, "({},{}) {p}", d - b, b);
            }
        }
        assert_eq!(s.partial(4, 2), Err(JetError::OrderExceeded(4, 2, 5)));
    }

    #[test]
    fn derivative_lowers_order() {
        let s = Jet::var(Var::S, P, 5);
        let t = Jet::var(Var::T, P, 5);
        let f = s.powi(3).unwrap() * t;
        let fs = f.ds();
        assert_eq!(fs.order(), 4);
        // ∂s(s³t) = 3s²t
        assert!((fs.value() - 3.0 * 0.09 * 0.7).abs() < 1e-15);
        assert!((fs.partial(1, 1).unwrap() - 6.0 * 0.3).abs() < 1e-14);
        assert!((f.dt().value() - 0.027).abs() < 1e-16);
    }

    #[test]
    fn negative_powers() {
        let b = (2.0, 0.0);
        let s = Jet::var(Var::S, b, 4);
        let inv2 = s.powi(-2).unwrap();
        assert!((inv2.value() - 0.25).abs() < 1e-16);
        assert!((inv2.partial(1, 0).unwrap() + 0.25).abs() < 1e-15);
        assert_eq!(s.powi(0).unwrap().value(), 1.0);
    }
}
