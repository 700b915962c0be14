//! Surface-definition files.
//!
//! ```text
//! # comment
//! name = degenerate-null
//! x0 = s + t + t^3/3
//! x1 = t^2
//! x2 = t - t^3/3
//! x3 = s
//! domain = -0.8 0.8 -0.8 0.8
//! param q = 0.2
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{eval_jet, eval_real, parse, EvalError, Expr, Params};
use crate::jet::Jet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid surface: {0}")]
    Validation(String),
}

/// Parameter rectangle `[s_min, s_max] × [t_min, t_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub s_min: f64,
    pub s_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Domain {
    pub fn new(s_min: f64, s_max: f64, t_min: f64, t_max: f64) -> Self {
        Domain { s_min, s_max, t_min, t_max }
    }

    pub fn square(a: f64, b: f64) -> Self {
        Self::new(a, b, a, b)
    }

    pub fn is_nonempty(&self) -> bool {
        self.s_min < self.s_max && self.t_min < self.t_max
    }

    /// Closed-rectangle membership with a rounding allowance.
    pub fn contains(&self, (s, t): (f64, f64)) -> bool {
        let eps = 1e-12 * (1.0 + self.s_max.abs().max(self.t_max.abs()));
        s >= self.s_min - eps && s <= self.s_max + eps && t >= self.t_min - eps && t <= self.t_max + eps
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.s_min, self.s_max, self.t_min, self.t_max]
    }
}

/// An immersion `x(s,t) = (x0, x1, x2, x3)` given by expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceDef {
    pub name: String,
    pub components: [Expr; 4],
    pub domain: Domain,
    pub params: Params,
}

impl SurfaceDef {
    /// Build and validate.
    pub fn new(name: impl Into<String>, components: [Expr; 4], domain: Domain, params: Params) -> Result<Self, SurfaceError> {
        let def = SurfaceDef {
            name: name.into(),
            components,
            domain,
            params,
        };
        def.validate()?;
        Ok(def)
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        if !self.domain.is_nonempty() {
            return Err(SurfaceError::Validation("empty domain".into()));
        }
        if self.domain.as_array().iter().any(|v| !v.is_finite()) {
            return Err(SurfaceError::Validation("domain bounds must be finite".into()));
        }
        for (i, c) in self.components.iter().enumerate() {
            for p in c.params() {
                if !self.params.contains_key(p) {
                    return Err(SurfaceError::Validation(format!("x{i} uses unbound parameter `{p}`")));
                }
            }
        }
        Ok(())
    }

    /// Jets of the four components at `point`.
    pub fn jets(&self, point: (f64, f64), order: usize) -> Result<[Jet; 4], EvalError> {
        let [a, b, c, d] = &self.components;
        Ok([
            eval_jet(a, point, &self.params, order)?,
            eval_jet(b, point, &self.params, order)?,
            eval_jet(c, point, &self.params, order)?,
            eval_jet(d, point, &self.params, order)?,
        ])
    }

    pub fn position(&self, point: (f64, f64)) -> Result<[f64; 4], EvalError> {
        let mut out = [0.0; 4];
        for (o, c) in out.iter_mut().zip(self.components.iter()) {
            *o = eval_real(c, point, &self.params)?;
        }
        Ok(out)
    }

    /// Render in the surface-definition file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "name = {}", self.name).unwrap();
        for (i, c) in self.components.iter().enumerate() {
            writeln!(out, "x{i} = {c}").unwrap();
        }
        let d = &self.domain;
        writeln!(out, "domain = {} {} {} {}", d.s_min, d.s_max, d.t_min, d.t_max).unwrap();
        for (k, v) in &self.params {
            writeln!(out, "param {k} = {v}").unwrap();
        }
        out
    }
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> SurfaceError {
    SurfaceError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_real(text: &str, line: usize, column: usize) -> Result<f64, SurfaceError> {
    text.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| perr(line, column, format!("expected a real number, found `{text}`")))
}

/// Parse surface-definition text.
pub fn parse_surface(text: &str) -> Result<SurfaceDef, SurfaceError> {
    let mut name = None;
    let mut comps: [Option<Expr>; 4] = Default::default();
    let mut domain = None;
    let mut params = Params::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(perr(line_no, 1, "expected `key = value`"));
        };
        let key = content[..eq].trim();
        let value_start = eq + 1 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
        let value = content[eq + 1..].trim();
        let col = value_start + 1;
        if value.is_empty() {
            return Err(perr(line_no, col, format!("missing value for `{key}`")));
        }
        let mut words = key.split_whitespace();
        match (words.next(), words.next(), words.next()) {
            (Some("name"), None, _) => {
                if name.replace(value.to_string()).is_some() {
                    return Err(perr(line_no, 1, "duplicate `name`"));
                }
            }
            (Some(k @ ("x0" | "x1" | "x2" | "x3")), None, _) => {
                let i = (k.as_bytes()[1] - b'0') as usize;
                let e = parse(value).map_err(|e| perr(line_no, col + e.offset(), e.to_string()))?;
                if comps[i].replace(e).is_some() {
                    return Err(perr(line_no, 1, format!("duplicate `{k}`")));
                }
            }
            (Some("domain"), None, _) => {
                let vals = value
                    .split_whitespace()
                    .map(|w| parse_real(w, line_no, col))
                    .collect::<Result<Vec<_>, _>>()?;
                let [a, b, c, d] = vals[..] else {
                    return Err(perr(line_no, col, "domain needs four numbers: s_min s_max t_min t_max"));
                };
                if domain.replace(Domain::new(a, b, c, d)).is_some() {
                    return Err(perr(line_no, 1, "duplicate `domain`"));
                }
            }
            (Some("param"), Some(p), None) => {
                let ok = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    && !matches!(p, "s" | "t" | "pi");
                if !ok {
                    return Err(perr(line_no, 1, format!("invalid parameter name `{p}`")));
                }
                let v = parse_real(value, line_no, col)?;
                if params.insert(p.to_string(), v).is_some() {
                    return Err(perr(line_no, 1, format!("duplicate parameter `{p}`")));
                }
            }
            _ => return Err(perr(line_no, 1, format!("unknown key `{key}`"))),
        }
    }

    let name = name.ok_or_else(|| SurfaceError::Validation("missing `name`".into()))?;
    let found = comps.iter().filter(|c| c.is_some()).count();
    if found != 4 {
        return Err(SurfaceError::Validation(format!("expected 4 components, found {found}")));
    }
    let components = comps.map(|c| c.unwrap());
    let domain = domain.ok_or_else(|| SurfaceError::Validation("missing `domain`".into()))?;
    SurfaceDef::new(name, components, domain, params)
}

/// Read and parse a surface file.
pub fn load_surface(path: impl AsRef<Path>) -> Result<SurfaceDef, SurfaceError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| SurfaceError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_surface(&text)
}
