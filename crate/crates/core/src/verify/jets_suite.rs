use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::fd_partial;
use super::{Spec, Tracker};
use crate::expr::{eval_jet, eval_real, parse, Params};
use crate::jet::{Jet, Var, DEFAULT_ORDER};

/// Expressions whose jets are compared with finite differences; all are
/// smooth on `[−0.5, 0.5]²`.
pub const FD_CORPUS: [&str; 20] = [
    "s*t",
    "s^3 - 2*s*t^2 + t",
    "sin(s)*cos(t)",
    "exp(s + 2*t)",
    "sqrt(2 + s^2 + t)",
    "log(3 + s - t)",
    "1/(2 + s*t)",
    "sinh(s*t) + cosh(s - t)",
    "sin(s^2 + t)",
    "t/(1 + s)^2",
    "exp(-s^2 - t^2)",
    "cos(s*t)^3",
    "(s + 2*t)/(3 - s)",
    "sqrt(1 + exp(s*t))",
    "log(2 + sin(s) + cos(t))",
    "s^5 - t^4*s + 3",
    "sinh(s)/cosh(t)",
    "exp(sin(s + t))",
    "(s^2 + t^2 + 1)^3",
    "t*log(4 + s^2)*sqrt(3 - t)",
];

pub(super) fn properties() -> Vec<Spec> {
    vec![
        Spec { name: "jet-vs-finite-difference", tolerance: 1e-5, body: finite_differences },
        Spec { name: "jet-analytic-high-order", tolerance: 1e-12, body: analytic },
        Spec { name: "jet-ring-axioms", tolerance: 1e-13, body: ring_axioms },
        Spec { name: "jet-division-inverse", tolerance: 1e-13, body: division },
        Spec { name: "jet-composition", tolerance: 1e-14, body: composition },
    ]
}

fn rel(got: f64, exact: f64) -> f64 {
    (got - exact).abs() / exact.abs().max(1.0)
}

fn finite_differences(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    let params = Params::new();
    for text in FD_CORPUS {
        let e = match parse(text) {
            Ok(e) => e,
            Err(err) => return tr.error(format!("{text}: {err}")),
        };
        for _ in 0..3 {
            let p = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let jet = match eval_jet(&e, p, &params, DEFAULT_ORDER) {
                Ok(j) => j,
                Err(err) => return tr.error(format!("{text} at {p:?}: {err}")),
            };
            let f = |s: f64, t: f64| eval_real(&e, (s, t), &params).unwrap_or(f64::NAN);
            for d in 0..=3 {
                for b in 0..=d {
                    let a = d - b;
                    let got = jet.partial(a, b).unwrap_or(f64::NAN);
                    let fd = fd_partial(f, p, a, b, 1e-3);
                    tr.record(rel(got, fd), || format!("{text} at {p:?}: ∂({a},{b}) jet={got} fd={fd}"));
                }
            }
        }
    }
}

fn analytic(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    let params = Params::new();
    type Exact = fn(f64, f64, usize, usize) -> f64;
    let cases: [(&str, Exact); 4] = [
        ("exp(s + t)", |s, t, _, _| (s + t).exp()),
        ("sin(s)*cos(t)", |s, t, a, b| {
            let ds = [s.sin(), s.cos(), -s.sin(), -s.cos()][a % 4];
            let dt = [t.cos(), -t.sin(), -t.cos(), t.sin()][b % 4];
            ds * dt
        }),
        ("s^5*t^2", |s, t, a, b| {
            let pa = |x: f64, n: i32, k: usize| {
                if k as i32 > n {
                    0.0
                } else {
                    (0..k).map(|i| (n - i as i32) as f64).product::<f64>() * x.powi(n - k as i32)
                }
            };
            pa(s, 5, a) * pa(t, 2, b)
        }),
        ("1/(2 + s)", |s, _, a, b| {
            if b > 0 {
                0.0
            } else {
                let k = a as i32;
                (-1f64).powi(k) * (1..=a).map(|i| i as f64).product::<f64>() / (2.0 + s).powi(k + 1)
            }
        }),
    ];
    for (text, exact) in cases {
        let e = parse(text).expect("corpus expression parses");
        for _ in 0..4 {
            let p = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let jet = eval_jet(&e, p, &params, DEFAULT_ORDER).expect("corpus expression evaluates");
            for d in 0..=DEFAULT_ORDER {
                for b in 0..=d {
                    let a = d - b;
                    let got = jet.partial(a, b).unwrap_or(f64::NAN);
                    let want = exact(p.0, p.1, a, b);
                    tr.record(rel(got, want), || format!("{text} at {p:?}: ∂({a},{b}) jet={got} exact={want}"));
                }
            }
        }
    }
}

fn random_jet(rng: &mut ChaCha8Rng, base: (f64, f64)) -> Jet {
    let n = (DEFAULT_ORDER + 1) * (DEFAULT_ORDER + 2) / 2;
    let c: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
    Jet::from_coeffs(base, DEFAULT_ORDER, &c).expect("order within range")
}

fn max_coeff_diff(a: &Jet, b: &Jet) -> f64 {
    let scale = a.coeffs().iter().chain(b.coeffs().iter()).fold(1.0f64, |m, c| m.max(c.abs()));
    a.coeffs()
        .iter()
        .zip(b.coeffs().iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}

fn ring_axioms(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for _ in 0..200 {
        let base = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let [a, b, c] = std::array::from_fn(|_| random_jet(rng, base));
        let assoc = max_coeff_diff(&((a * b) * c), &(a * (b * c)));
        let distrib = max_coeff_diff(&(a * (b + c)), &(a * b + a * c));
        let comm = max_coeff_diff(&(a * b), &(b * a));
        tr.record(assoc.max(distrib).max(comm), || format!("base {base:?}: assoc={assoc:e} distrib={distrib:e} comm={comm:e}"));
    }
}

fn division(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for _ in 0..200 {
        let base = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let a = random_jet(rng, base);
        let b = random_jet(rng, base) + 10.0;
        match a.checked_div(&b) {
            Ok(q) => {
                let back = max_coeff_diff(&(q * b), &a);
                tr.record(back, || format!("base {base:?}: (a/b)·b − a = {back:e}"));
            }
            Err(e) => tr.error(format!("base {base:?}: {e}")),
        }
    }
}

fn composition(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    let e = parse("sin(s^2 + t)").expect("parses");
    for _ in 0..50 {
        let p = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let s = Jet::var(Var::S, p, DEFAULT_ORDER);
        let t = Jet::var(Var::T, p, DEFAULT_ORDER);
        let direct = (s * s + t).sin();
        match eval_jet(&e, p, &Params::new(), DEFAULT_ORDER) {
            Ok(j) => tr.record(max_coeff_diff(&j, &direct), || format!("at {p:?}")),
            Err(err) => tr.error(format!("at {p:?}: {err}")),
        }
    }
}
