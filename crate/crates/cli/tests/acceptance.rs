//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion
//! and fails if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gaussmap::analyzer::{
    fit_second_kind, lemma31_residual, lemma41_residual, null2type_test, pw1type_classify, theorem35_battery,
    Analysis, GridSpec, Outcome,
};
use gaussmap::catalog::{self, random_null_translation};
use gaussmap::expr::{load_surface, SurfaceDef};
use gaussmap::verify::{run_filtered, Check, Suite};
use gaussmap_cli::Report;

const CANONICAL: [&str; 3] = ["degenerate-null", "generic-minimal", "hyperplane-minimal"];

struct Criterion {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Criterion {
    Criterion { passed, detail }
}

/// The canonical surfaces read through the file parser.
fn canonical() -> Vec<SurfaceDef> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/catalog");
    CANONICAL
        .iter()
        .map(|n| load_surface(dir.join(format!("{n}.surf"))).unwrap())
        .collect()
}

fn analysis(s: &SurfaceDef) -> Analysis {
    let a = Analysis::new(s, &GridSpec::default()).unwrap();
    assert!(a.excluded.is_empty(), "{}: {:?}", s.name, a.excluded.first());
    a
}

fn property(suite: Suite, name: &str) -> Check {
    run_filtered(suite, 20261018, Some(name))
        .into_iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("no property {name}"))
}

fn properties(list: &[(Suite, &str)]) -> Criterion {
    let checks: Vec<Check> = list.iter().map(|(s, n)| property(*s, n)).collect();
    let detail = checks
        .iter()
        .map(|c| format!("{} {:.2e}/{:.0e}", c.name, c.worst, c.tolerance))
        .collect::<Vec<_>>()
        .join(", ");
    let failures: Vec<&str> = checks.iter().filter_map(|c| c.failure.as_deref()).collect();
    let detail = if failures.is_empty() { detail } else { format!("{detail}; {}", failures.join("; ")) };
    outcome(checks.iter().all(|c| c.passed && c.cases > 0), detail)
}

fn gaussmap(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_gaussmap")).args(args).output().unwrap()
}

fn main() {
    let surfaces = canonical();
    let grid = GridSpec::default();
    assert_eq!((grid.n_s, grid.n_t), (17, 17));
    assert_eq!(grid.domain.as_array(), [-0.8, 0.8, -0.8, 0.8]);

    let start = Instant::now();
    let analyses: Vec<Analysis> = surfaces.iter().map(analysis).collect();
    let sampling = start.elapsed().as_secs_f64();
    let mut results = Vec::new();

    // 1
    let start = Instant::now();
    let worst = analyses.iter().map(lemma31_residual).collect::<Vec<_>>();
    let secs = sampling + start.elapsed().as_secs_f64();
    let max = worst.iter().map(|v| v.worst_residual).fold(0.0, f64::max);
    results.push((
        "Δν = 2Kν + 2K^D μ on the canonical surfaces",
        outcome(
            worst.iter().all(|v| v.outcome == Outcome::Holds) && max <= 1e-8 && secs <= 5.0,
            format!("max residual {max:.2e} (≤ 1e-8), {secs:.2} s (≤ 5 s)"),
        ),
    ));

    // 2
    let start = Instant::now();
    let worst = analyses.iter().map(lemma41_residual).collect::<Vec<_>>();
    let secs = sampling + start.elapsed().as_secs_f64();
    let max = worst.iter().map(|v| v.worst_residual).fold(0.0, f64::max);
    results.push((
        "fourth-order Gauss map identity on the canonical surfaces",
        outcome(
            worst.iter().all(|v| v.outcome == Outcome::Holds) && max <= 1e-7 && secs <= 10.0,
            format!("max residual {max:.2e} (≤ 1e-7), {secs:.2} s (≤ 10 s)"),
        ),
    ));

    // 3
    let deg = theorem35_battery(&analyses[0]);
    let gen = theorem35_battery(&analyses[1]);
    let deg_worst = deg.predicates.iter().map(|v| v.worst_residual).fold(0.0, f64::max);
    let gen_margin = gen.predicates.iter().map(|v| v.worst_residual).fold(f64::INFINITY, f64::min);
    results.push((
        "battery: six hold on the degenerate-null surface, six fail on the generic one",
        outcome(
            deg.predicates.len() == 6
                && deg.consistent
                && deg.predicates.iter().all(|v| v.holds())
                && deg_worst <= 1e-8
                && gen.predicates.len() == 6
                && gen.consistent
                && gen.predicates.iter().all(|v| v.outcome == Outcome::Fails)
                && gen_margin >= 1e-4,
            format!("degenerate worst {deg_worst:.2e}, generic smallest margin {gen_margin:.2e}"),
        ),
    ));

    // 4
    let labels: Vec<_> = analyses.iter().map(pw1type_classify).collect();
    let hyper = &labels[2];
    let f_gap = hyper
        .details
        .iter()
        .zip(&analyses[2].samples)
        .map(|(r, p)| r.value.map_or(f64::INFINITY, |f| (f - 2.0 * p.k).abs()))
        .fold(0.0, f64::max);
    let mut second_kind = Vec::new();
    for name in catalog::names() {
        let s = catalog::builtin(&name).unwrap();
        let Ok(a) = Analysis::new(&s, &grid) else { continue };
        if !a.excluded.is_empty() || !a.is_minimal() {
            continue;
        }
        let lap: Vec<_> = a.samples.iter().map(|p| p.lap_nu).collect();
        let nu: Vec<_> = a.samples.iter().map(|p| p.nu).collect();
        let fit = fit_second_kind(&lap, &nu);
        if !fit.diverged && fit.residual <= grid.tol.identity_tol && fit.c.euclid_norm() >= 1e-4 {
            second_kind.push(name);
        }
    }
    results.push((
        "pointwise 1-type: first kind, harmonic, none; never second kind",
        outcome(
            labels[0].label == "harmonic"
                && labels[1].label == "none"
                && hyper.label == "first-kind"
                && f_gap <= 1e-8
                && second_kind.is_empty(),
            format!(
                "labels {}/{}/{}, |f - 2K| {f_gap:.2e}, second-kind fits {second_kind:?}",
                labels[0].label, labels[1].label, hyper.label
            ),
        ),
    ));

    // 5
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut tested = 0;
    let mut bad = Vec::new();
    let random: Vec<SurfaceDef> = (0..20).map(|i| random_null_translation(&mut rng, &format!("random-{i}"))).collect();
    for s in surfaces.iter().chain(&random) {
        let a = analysis(s);
        let v = null2type_test(&a);
        tested += 1;
        if v.label != "no-null-2-type-witness" && v.label != "harmonic" {
            bad.push(format!("{}: {}", s.name, v.label));
        }
    }
    results.push((
        "null 2-type test never finds a violation",
        outcome(bad.is_empty() && tested == 23, format!("{tested} surfaces, offending {bad:?}")),
    ));

    // 6
    results.push((
        "oracle equivalences for K, K^D, the Laplacian and null-chart Christoffels",
        properties(&[
            (Suite::Engine, "gauss-curvature-riemann-oracle"),
            (Suite::Engine, "normal-curvature-wedge-oracle"),
            (Suite::Engine, "laplacian-frame-vs-coordinate"),
            (Suite::Engine, "laplacian-null-chart"),
            (Suite::Engine, "christoffel-null-chart-pattern"),
        ]),
    ));

    // 7
    results.push((
        "substrate: Plücker, jets vs finite differences, product rule, lightlike and degenerate-subspace predicates",
        properties(&[
            (Suite::Algebra, "plucker-identity"),
            (Suite::Jets, "jet-vs-finite-difference"),
            (Suite::Engine, "laplacian-product-rule"),
            (Suite::Algebra, "lemma21-lightlike-dependence"),
            (Suite::Algebra, "lemma22-degenerate-subspace"),
        ]),
    ));

    // 8
    let start = Instant::now();
    let verify = gaussmap(&["verify", "all"]);
    let secs = start.elapsed().as_secs_f64();
    let one = gaussmap(&["--threads", "1", "analyze", "catalog:degenerate-null"]);
    let four = gaussmap(&["--threads", "4", "analyze", "catalog:degenerate-null"]);
    let battery_true = serde_json::from_slice::<Report>(&one.stdout)
        .ok()
        .and_then(|r| r.battery)
        .is_some_and(|b| b.consistent && b.predicates.iter().all(|v| v.holds()));
    let identical = one.stdout == four.stdout;
    results.push((
        "end to end: verify all, degenerate-null report",
        outcome(
            verify.status.code() == Some(0) && secs <= 60.0 && one.status.code() == Some(0) && battery_true && identical,
            format!(
                "verify all exit {:?} in {secs:.1} s (≤ 60 s), battery all true {battery_true}, identical across 1/4 threads {identical}",
                verify.status.code()
            ),
        ),
    ));

    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        println!("{} {}: {name} ({})", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.passed);
    }
    assert_eq!(results.len(), 8);
    println!("{} of 8 acceptance criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
