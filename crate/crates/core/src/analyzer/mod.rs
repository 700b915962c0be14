//! Grid evaluation of the finite-type identities and classification
//! predicates, reported as [`Verdict`]s.
//!
//! Every point of a [`GridSpec`] is sampled once (in parallel) into a
//! [`PointSample`]; the predicates are reductions over those samples.
//! Residuals in E⁶₃ are measured with the Euclidean norm of the Plücker
//! components.

mod classify;
mod identities;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Biv6, Vec4};
use crate::expr::{Domain, SurfaceDef};
use crate::geometry::{relative_null_space, GeometryError, LocalFrame, RelativeNullSpace};

pub use classify::{
    fit_second_kind, null2type_test, pw1type_classify, theorem35_battery, Battery, SecondKindFit,
};
pub use identities::{lemma31_residual, lemma41_residual, matrices45_check, system44_residuals, FEstimate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyzerError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub identity_tol: f64,
    pub zero_tol: f64,
    pub nonzero_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity_tol: 1e-8,
            zero_tol: 1e-10,
            nonzero_margin: 1e-4,
        }
    }
}

/// Sampling rectangle, resolution and tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub domain: Domain,
    pub n_s: usize,
    pub n_t: usize,
    pub tol: Tolerances,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            domain: Domain::square(-0.8, 0.8),
            n_s: 17,
            n_t: 17,
            tol: Tolerances::default(),
        }
    }
}

impl GridSpec {
    pub fn new(domain: Domain, n: usize) -> Result<Self, AnalyzerError> {
        let g = GridSpec {
            domain,
            n_s: n,
            n_t: n,
            tol: Tolerances::default(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_tol(mut self, tol: Tolerances) -> Result<Self, AnalyzerError> {
        self.tol = tol;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), AnalyzerError> {
        let bad = |m: &str| Err(AnalyzerError::InvalidGrid(m.into()));
        if self.n_s < 3 || self.n_t < 3 {
            return bad("at least 3 samples per axis are required");
        }
        if !self.domain.is_nonempty() {
            return bad("empty domain");
        }
        let t = &self.tol;
        if !(t.identity_tol > 0.0 && t.zero_tol > 0.0 && t.nonzero_margin > 0.0) {
            return bad("tolerances must be positive");
        }
        if t.identity_tol <= t.zero_tol {
            return bad("identity_tol must exceed zero_tol");
        }
        Ok(())
    }

    /// Sample points in lexicographic `(s, t)` order, endpoints included.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n)
                .map(|i| {
                    let u = i as f64 / (n - 1) as f64;
                    lo * (1.0 - u) + hi * u
                })
                .collect()
        };
        let d = &self.domain;
        let ss = axis(d.s_min, d.s_max, self.n_s);
        let ts = axis(d.t_min, d.t_max, self.n_t);
        ss.iter().flat_map(|&s| ts.iter().map(move |&t| (s, t))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: [f64; 2],
    pub residual: f64,
    /// Fitted or derived scalar at the point, where the predicate has one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excluded {
    pub point: [f64; 2],
    pub reason: String,
}

/// Outcome of one predicate over a grid.
///
/// `outcome` is `Holds` exactly when the preconditions are met and
/// `worst_residual <= tolerance`; `Inconclusive` marks a failed
/// precondition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub predicate: String,
    pub outcome: Outcome,
    /// Classification label where the predicate has one, e.g. `first-kind`.
    pub label: String,
    pub worst_residual: f64,
    pub worst_point: Option<[f64; 2]>,
    pub tolerance: f64,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub details: Vec<PointRecord>,
    pub excluded: Vec<[f64; 2]>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    /// Records reduced to the worst residual; ties keep the
    /// lexicographically first point.
    fn from_records(predicate: &str, records: Vec<PointRecord>, tolerance: f64, a: &Analysis) -> Verdict {
        let mut worst = 0.0;
        let mut worst_point = None;
        for r in &records {
            if worst_point.is_none() || r.residual > worst {
                worst = r.residual;
                worst_point = Some(r.point);
            }
        }
        let outcome = if worst <= tolerance { Outcome::Holds } else { Outcome::Fails };
        Verdict {
            predicate: predicate.into(),
            outcome,
            label: String::new(),
            worst_residual: worst,
            worst_point,
            tolerance,
            params: BTreeMap::new(),
            details: records,
            excluded: a.excluded.iter().map(|e| e.point).collect(),
        }
    }

    fn inconclusive(mut self, why: &str) -> Verdict {
        self.outcome = Outcome::Inconclusive;
        self.label = why.into();
        self
    }

    fn labelled(mut self, label: &str) -> Verdict {
        self.label = label.into();
        self
    }
}

/// Everything the predicates need at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    pub point: (f64, f64),
    pub det_g: f64,
    /// Euclidean norm of the mean curvature vector.
    pub h_norm: f64,
    pub k: f64,
    pub kd: f64,
    pub nu: Biv6,
    pub mu: Biv6,
    pub lap_nu: Biv6,
    pub lap2_nu: Biv6,
    pub lap_k: f64,
    pub lap_kd: f64,
    /// Derivative of `ν` along `∇K`.
    pub grad_k_nu: Biv6,
    /// Derivative of `μ` along `∇K^D`.
    pub grad_kd_mu: Biv6,
    /// `(f1(K), f2(K))`.
    pub frame_k: [f64; 2],
    /// `(f1(K^D), f2(K^D))`.
    pub frame_kd: [f64; 2],
    /// `h3_11, h3_12, h3_22, h4_11, h4_12, h4_22`.
    pub h: [f64; 6],
    pub null_space: RelativeNullSpace,
    pub x: Vec4,
    pub xs: Vec4,
    pub xt: Vec4,
}

impl PointSample {
    pub fn at(surface: &SurfaceDef, point: (f64, f64)) -> Result<Self, GeometryError> {
        let lf = LocalFrame::new(surface, point)?;
        let fp = lf.frame_point();
        let lap = lf.laplacian_field(&lf.nu)?;
        let lap2 = lf.laplacian_field(&lap)?;
        let grad_k = lf.gradient(&lf.k)?.coord_values();
        let grad_kd = lf.gradient(&lf.kd)?.coord_values();
        Ok(PointSample {
            point,
            det_g: fp.g.det,
            h_norm: fp.mean_curvature.euclid_norm(),
            k: fp.k,
            kd: fp.kd,
            nu: fp.nu,
            mu: fp.mu,
            lap_nu: lap.value(),
            lap2_nu: lap2.value(),
            lap_k: lf.laplacian(&lf.k)?.value(),
            lap_kd: lf.laplacian(&lf.kd)?.value(),
            grad_k_nu: lf.field_derivative(grad_k, &lf.nu),
            grad_kd_mu: lf.field_derivative(grad_kd, &lf.mu),
            frame_k: [lf.frame_derivative(0, &lf.k)?.value(), lf.frame_derivative(1, &lf.k)?.value()],
            frame_kd: [lf.frame_derivative(0, &lf.kd)?.value(), lf.frame_derivative(1, &lf.kd)?.value()],
            h: fp.h,
            null_space: relative_null_space(&fp),
            x: lf.x.values(),
            xs: lf.xs.values(),
            xt: lf.xt.values(),
        })
    }

    pub fn h_at(&self, alpha: usize, a: usize, b: usize) -> f64 {
        self.h[3 * alpha + a + b]
    }

    pub fn point_array(&self) -> [f64; 2] {
        [self.point.0, self.point.1]
    }
}

/// Samples of one surface over one grid.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub surface: String,
    pub grid: GridSpec,
    pub total_points: usize,
    pub samples: Vec<PointSample>,
    pub excluded: Vec<Excluded>,
}

impl Analysis {
    /// Sample every grid point; points where the engine fails are
    /// excluded with the error message.
    pub fn new(surface: &SurfaceDef, grid: &GridSpec) -> Result<Self, AnalyzerError> {
        grid.validate()?;
        let points = grid.points();
        let results: Vec<_> = points
            .par_iter()
            .map(|&p| PointSample::at(surface, p))
            .collect();
        let mut samples = Vec::with_capacity(points.len());
        let mut excluded = Vec::new();
        for (p, r) in points.iter().zip(results) {
            match r {
                Ok(s) => samples.push(s),
                Err(e) => excluded.push(Excluded {
                    point: [p.0, p.1],
                    reason: e.to_string(),
                }),
            }
        }
        Ok(Analysis {
            surface: surface.name.clone(),
            grid: *grid,
            total_points: points.len(),
            samples,
            excluded,
        })
    }

    pub fn tol(&self) -> &Tolerances {
        &self.grid.tol
    }

    /// Largest `‖H‖` over the sampled points.
    pub fn max_mean_curvature(&self) -> f64 {
        self.samples.iter().map(|s| s.h_norm).fold(0.0, f64::max)
    }

    /// Minimality gate: `‖H‖ <= zero_tol` at every sampled point.
    pub fn is_minimal(&self) -> bool {
        !self.samples.is_empty() && self.max_mean_curvature() <= self.tol().zero_tol
    }

    pub fn excluded_fraction(&self) -> f64 {
        self.excluded.len() as f64 / self.total_points as f64
    }

    fn records(&self, f: impl Fn(usize, &PointSample) -> (f64, Option<f64>)) -> Vec<PointRecord> {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (residual, value) = f(i, s);
                PointRecord {
                    point: s.point_array(),
                    residual,
                    value,
                }
            })
            .collect()
    }

    fn verdict(
        &self,
        predicate: &str,
        tolerance: f64,
        f: impl Fn(usize, &PointSample) -> (f64, Option<f64>),
    ) -> Verdict {
        Verdict::from_records(predicate, self.records(f), tolerance, self)
    }

    fn gate_minimal(&self, v: Verdict) -> Verdict {
        if self.is_minimal() {
            v
        } else {
            v.inconclusive("not minimal")
        }
    }
}

pub(crate) fn spread(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}
