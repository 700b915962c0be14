use std::collections::BTreeMap;

use thiserror::Error;

use super::Expr;
use crate::jet::{ElemFn, Jet, JetError, Var};

pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("in `{subexpr}`: {source}")]
    Domain { subexpr: String, source: JetError },
    #[error("exponent in `{0}` must be a constant integer")]
    NonIntegerExponent(String),
}

fn int_exponent(base: &Expr, exp: &Expr, params: &Params) -> Result<i32, EvalError> {
    let whole = || Expr::Pow(Box::new(base.clone()), Box::new(exp.clone())).to_string();
    if exp.depends_on_coords() {
        return Err(EvalError::NonIntegerExponent(whole()));
    }
    let v = eval_real(exp, (0.0, 0.0), params)?;
    let r = v.round();
    if (v - r).abs() > 1e-12 || r.abs() > i32::MAX as f64 {
        return Err(EvalError::NonIntegerExponent(whole()));
    }
    Ok(r as i32)
}

/// Evaluate over jets of the given order at `point`.
pub fn eval_jet(e: &Expr, point: (f64, f64), params: &Params, order: usize) -> Result<Jet, EvalError> {
    let rec = |x: &Expr| eval_jet(x, point, params, order);
    let domain = |source: JetError| EvalError::Domain {
        subexpr: e.to_string(),
        source,
    };
    Ok(match e {
        Expr::Num(v) => Jet::constant(*v, point, order),
        Expr::Pi => Jet::constant(std::f64::consts::PI, point, order),
        Expr::S => Jet::var(Var::S, point, order),
        Expr::T => Jet::var(Var::T, point, order),
        Expr::Param(p) => {
            let v = params.get(p).ok_or_else(|| EvalError::UnboundIdentifier(p.clone()))?;
            Jet::constant(*v, point, order)
        }
        Expr::Neg(a) => -rec(a)?,
        Expr::Add(a, b) => rec(a)? + rec(b)?,
        Expr::Sub(a, b) => rec(a)? - rec(b)?,
        Expr::Mul(a, b) => rec(a)? * rec(b)?,
        Expr::Div(a, b) => rec(a)?.checked_div(&rec(b)?).map_err(domain)?,
        Expr::Pow(a, b) => {
            let n = int_exponent(a, b, params)?;
            rec(a)?.powi(n).map_err(domain)?
        }
        Expr::Call(f, a) => rec(a)?.elem(*f).map_err(domain)?,
    })
}

/// Plain real evaluation, consistent with the value coefficient of
/// [`eval_jet`].
pub fn eval_real(e: &Expr, point: (f64, f64), params: &Params) -> Result<f64, EvalError> {
    let rec = |x: &Expr| eval_real(x, point, params);
    let domain = |source: JetError| EvalError::Domain {
        subexpr: e.to_string(),
        source,
    };
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Pi => std::f64::consts::PI,
        Expr::S => point.0,
        Expr::T => point.1,
        Expr::Param(p) => *params.get(p).ok_or_else(|| EvalError::UnboundIdentifier(p.clone()))?,
        Expr::Neg(a) => -rec(a)?,
        Expr::Add(a, b) => rec(a)? + rec(b)?,
        Expr::Sub(a, b) => rec(a)? - rec(b)?,
        Expr::Mul(a, b) => rec(a)? * rec(b)?,
        Expr::Div(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            if y == 0.0 {
                return Err(domain(JetError::DivisionNearZero(y)));
            }
            x / y
        }
        Expr::Pow(a, b) => {
            let n = int_exponent(a, b, params)?;
            let x = rec(a)?;
            if n < 0 && x == 0.0 {
                return Err(domain(JetError::DivisionNearZero(x)));
            }
            x.powi(n)
        }
        Expr::Call(f, a) => {
            let x = rec(a)?;
            match f {
                ElemFn::Sqrt | ElemFn::Log if x <= 0.0 => {
                    return Err(domain(JetError::DomainError { func: f.name(), value: x }))
                }
                _ => f.apply(x),
            }
        }
    })
}
