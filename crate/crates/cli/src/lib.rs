//! Command implementations behind the `gaussmap` binary.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use serde::{Deserialize, Serialize};

use gaussmap::analyzer::{
    lemma31_residual, lemma41_residual, null2type_test, pw1type_classify, theorem35_battery, Analysis, Battery,
    Excluded, GridSpec, Tolerances, Verdict,
};
use gaussmap::catalog;
use gaussmap::expr::{load_surface, Domain, SurfaceDef};
use gaussmap::verify::{self, Check, Suite};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest fraction of grid points allowed to fail in the engine.
pub const MAX_EXCLUDED_FRACTION: f64 = 0.1;

/// A failed command and the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn load(error: anyhow::Error) -> Self {
        Failure { code: 2, error }
    }

    fn engine(error: anyhow::Error) -> Self {
        Failure { code: 3, error }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceEcho {
    pub name: String,
    /// The surface in file format; feeding it back reproduces the run.
    pub definition: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub sampling_seconds: f64,
    pub verdict_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub surface: SurfaceEcho,
    pub grid: GridSpec,
    pub minimal: bool,
    pub max_mean_curvature: f64,
    pub verdicts: Vec<Verdict>,
    /// Present only for minimal surfaces.
    pub battery: Option<Battery>,
    pub excluded: Vec<Excluded>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn verdict(&self, predicate: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.predicate == predicate)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Grid options shared by `analyze` and `fields`.
#[derive(Debug, Clone, Default)]
pub struct GridOptions {
    pub n: Option<usize>,
    pub domain: Option<[f64; 4]>,
    pub identity_tol: Option<f64>,
}

impl GridOptions {
    pub fn grid_for(&self, surface: &SurfaceDef) -> Result<GridSpec, Failure> {
        let domain = match self.domain {
            Some([a, b, c, d]) => Domain::new(a, b, c, d),
            None => surface.domain,
        };
        let base = GridSpec::default();
        let tol = Tolerances {
            identity_tol: self.identity_tol.unwrap_or(base.tol.identity_tol),
            ..base.tol
        };
        GridSpec::new(domain, self.n.unwrap_or(base.n_s))
            .and_then(|g| g.with_tol(tol))
            .map_err(|e| Failure::load(e.into()))
    }
}

/// `catalog:NAME` or a path to a surface file.
pub fn resolve_surface(spec: &str) -> Result<SurfaceDef, Failure> {
    if let Some(name) = spec.strip_prefix("catalog:") {
        return catalog::builtin(name).ok_or_else(|| {
            Failure::load(anyhow!("no catalog surface `{name}`; available: {}", catalog::names().join(", ")))
        });
    }
    load_surface(Path::new(spec)).map_err(|e| Failure::load(anyhow!(e).context(format!("loading surface `{spec}`"))))
}

fn sample(surface: &SurfaceDef, grid: &GridSpec) -> Result<Analysis, Failure> {
    Analysis::new(surface, grid).map_err(|e| Failure::load(e.into()))
}

fn check_excluded(a: &Analysis) -> Result<(), Failure> {
    if a.excluded_fraction() > MAX_EXCLUDED_FRACTION {
        let first = &a.excluded[0];
        return Err(Failure::engine(anyhow!(
            "engine failed at {} of {} grid points (first at ({}, {}): {})",
            a.excluded.len(),
            a.total_points,
            first.point[0],
            first.point[1],
            first.reason
        )));
    }
    Ok(())
}

/// Sample the surface and run every predicate. The report is returned
/// even when too many points failed, together with the failure.
pub fn analyze(surface: &SurfaceDef, grid: &GridSpec, timings: bool) -> Result<(Report, Option<Failure>), Failure> {
    let start = Instant::now();
    let a = sample(surface, grid)?;
    let sampled = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let verdicts = vec![lemma31_residual(&a), lemma41_residual(&a), pw1type_classify(&a), null2type_test(&a)];
    let minimal = a.is_minimal();
    let battery = minimal.then(|| theorem35_battery(&a));
    let report = Report {
        tool: "gaussmap".into(),
        version: VERSION.into(),
        surface: SurfaceEcho {
            name: surface.name.clone(),
            definition: surface.to_file_string(),
        },
        grid: *grid,
        minimal,
        max_mean_curvature: a.max_mean_curvature(),
        verdicts,
        battery,
        excluded: a.excluded.clone(),
        timings: timings.then(|| Timings {
            sampling_seconds: sampled,
            verdict_seconds: start.elapsed().as_secs_f64(),
        }),
    };
    Ok((report, check_excluded(&a).err()))
}

/// Short human-readable digest of a report.
pub fn summary(r: &Report) -> String {
    let mut s = format!("surface {}: minimal {} (max ‖H‖ {:.3e})\n", r.surface.name, r.minimal, r.max_mean_curvature);
    for v in &r.verdicts {
        let label = if v.label.is_empty() { String::new() } else { format!(" [{}]", v.label) };
        writeln!(s, "  {:<18} {:<12} residual {:.3e}{label}", v.predicate, format!("{:?}", v.outcome), v.worst_residual)
            .unwrap();
    }
    if let Some(b) = &r.battery {
        writeln!(s, "  battery: consistent {} hypothesis met {}", b.consistent, b.hypothesis_met).unwrap();
        for v in &b.predicates {
            writeln!(s, "    {:<32} {:?} ({:.3e})", v.predicate, v.outcome, v.worst_residual).unwrap();
        }
    }
    if !r.excluded.is_empty() {
        writeln!(s, "  {} points excluded", r.excluded.len()).unwrap();
    }
    s
}

pub const CSV_HEADER: &str = "s,t,det_g,K,KD,H_norm,lap_nu_norm";

/// One row per grid point; engine failures leave the field columns
/// empty.
pub fn fields_csv(surface: &SurfaceDef, grid: &GridSpec) -> Result<(String, Option<Failure>), Failure> {
    let a = sample(surface, grid)?;
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut samples = a.samples.iter().peekable();
    for (s, t) in grid.points() {
        match samples.peek() {
            Some(p) if p.point == (s, t) => {
                writeln!(out, "{s},{t},{},{},{},{},{}", p.det_g, p.k, p.kd, p.h_norm, p.lap_nu.euclid_norm()).unwrap();
                samples.next();
            }
            _ => writeln!(out, "{s},{t},,,,,").unwrap(),
        }
    }
    Ok((out, check_excluded(&a).err()))
}

/// Run a property suite; an unknown name is a usage error.
pub fn verify(suite: &str, seed: u64, filter: Option<&str>) -> Result<Vec<Check>, Failure> {
    let suite = suite.parse::<Suite>().map_err(|e| Failure::load(e.into()))?;
    Ok(verify::run_filtered(suite, seed, filter))
}

/// Built-in surface names, or one surface in file format.
pub fn catalog_listing(name: Option<&str>) -> Result<String, Failure> {
    match name {
        Some(n) => {
            let n = n.strip_prefix("catalog:").unwrap_or(n);
            resolve_surface(&format!("catalog:{n}")).map(|s| s.to_file_string())
        }
        None => Ok(catalog::names().iter().map(|n| format!("catalog:{n}\n")).collect()),
    }
}

pub fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
