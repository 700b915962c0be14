//! A small expression language for immersion components `x^i(s, t)`.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! So `^` binds tighter than unary minus (`-s^2` is `-(s^2)`) and is
//! right-associative. Identifiers other than `s`, `t` and `pi` are
//! parameters, resolved at evaluation time.

mod eval;
mod parse;
mod surface;

use std::fmt;

pub use eval::{eval_jet, eval_real, EvalError, Params};
pub use parse::{parse, ParseError};
pub use surface::{load_surface, parse_surface, Domain, SurfaceDef, SurfaceError};

use crate::jet::{ElemFn, Var};

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    S,
    T,
    Pi,
    Param(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(ElemFn, Box<Expr>),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    /// Parameter names referenced anywhere in the tree.
    pub fn params(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_params<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Param(p) => out.push(p),
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_params(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_params(out);
                b.collect_params(out);
            }
            Expr::Num(_) | Expr::S | Expr::T | Expr::Pi => {}
        }
    }

    /// Whether the tree mentions `s` or `t`.
    pub fn depends_on_coords(&self) -> bool {
        self.mentions(Var::S) || self.mentions(Var::T)
    }

    /// Whether the tree mentions the given coordinate.
    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::S => v == Var::S,
            Expr::T => v == Var::T,
            Expr::Num(_) | Expr::Pi | Expr::Param(_) => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions(v),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.mentions(v) || b.mentions(v)
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.prec() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::S => f.write_str("s")?,
            Expr::T => f.write_str("t")?,
            Expr::Pi => f.write_str("pi")?,
            Expr::Param(p) => f.write_str(p)?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)?;
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write(f, 2)?;
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write(f, 3)?;
            }
            Expr::Pow(a, b) => {
                a.write(f, 5)?;
                f.write_str("^")?;
                b.write(f, 3)?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, 0)?;
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Formats with the minimum parentheses needed to reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
