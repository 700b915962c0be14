use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle::{meets_orthogonal_complement, rank_defect};
use super::{Spec, Tracker};
use crate::algebra::{
    inner4, inner6, is_degenerate_subspace, lightlike_dependent, orthonormalize_pair, wedge, Biv6, Vec4,
    BIV_SIGNATURE, PLUCKER_PAIRS,
};

pub(super) fn properties() -> Vec<Spec> {
    vec![
        Spec { name: "plucker-identity", tolerance: 1e-12, body: plucker },
        Spec { name: "wedge-antisymmetry", tolerance: 0.0, body: antisymmetry },
        Spec { name: "wedge-bilinearity", tolerance: 1e-13, body: bilinearity },
        Spec { name: "inner6-signature", tolerance: 0.0, body: signature },
        Spec { name: "lemma21-lightlike-dependence", tolerance: 0.0, body: lemma21 },
        Spec { name: "lemma22-degenerate-subspace", tolerance: 0.0, body: lemma22 },
        Spec { name: "orthonormalize-pair", tolerance: 1e-12, body: orthonormal },
    ]
}

fn rand_vec(rng: &mut ChaCha8Rng, r: f64) -> Vec4 {
    Vec4(std::array::from_fn(|_| rng.random_range(-r..=r)))
}

fn plucker(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for _ in 0..1000 {
        let [a, b, c, d] = std::array::from_fn(|_| rand_vec(rng, 2.0));
        let lhs = inner6(&wedge(&a, &b), &wedge(&c, &d));
        let rhs = inner4(&a, &c) * inner4(&b, &d) - inner4(&a, &d) * inner4(&b, &c);
        tr.record((lhs - rhs).abs() / rhs.abs().max(1.0), || format!("a={a:?} b={b:?} c={c:?} d={d:?} lhs={lhs} rhs={rhs}"));
    }
}

fn antisymmetry(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for _ in 0..500 {
        let (u, v) = (rand_vec(rng, 2.0), rand_vec(rng, 2.0));
        let sum = wedge(&u, &v) + wedge(&v, &u);
        let self_wedge = wedge(&u, &u);
        tr.record(sum.euclid_norm().max(self_wedge.euclid_norm()), || format!("u={u:?} v={v:?}"));
    }
}

fn bilinearity(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for _ in 0..500 {
        let [u, v, w] = std::array::from_fn(|_| rand_vec(rng, 2.0));
        let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let lhs = wedge(&(u * a + v * b), &w);
        let rhs = wedge(&u, &w) * a + wedge(&v, &w) * b;
        let scale = (u.euclid_norm() * a.abs() + v.euclid_norm() * b.abs()) * w.euclid_norm();
        tr.record((lhs - rhs).euclid_norm() / scale.max(1.0), || format!("u={u:?} v={v:?} w={w:?} a={a} b={b}"));
    }
}

fn signature(_: &mut ChaCha8Rng, tr: &mut Tracker) {
    for (k, &(i, j)) in PLUCKER_PAIRS.iter().enumerate() {
        let e = wedge(&Vec4::basis(i), &Vec4::basis(j));
        let expected = Biv6::basis(i, j);
        tr.agree(e == expected, || format!("e{i}∧e{j} = {e:?}"));
        tr.record((inner6(&e, &e) - BIV_SIGNATURE[k]).abs(), || format!("⟨e{i}∧e{j}, e{i}∧e{j}⟩"));
        for &(p, q) in &PLUCKER_PAIRS[k + 1..] {
            let f = wedge(&Vec4::basis(p), &Vec4::basis(q));
            tr.record(inner6(&e, &f).abs(), || format!("⟨e{i}∧e{j}, e{p}∧e{q}⟩"));
        }
    }
}

/// A random Lorentzian plane as (timelike unit, spacelike unit) with
/// the two orthogonal.
fn lorentzian_plane(rng: &mut ChaCha8Rng) -> (Vec4, Vec4) {
    loop {
        let mut u = rand_vec(rng, 1.0);
        u.0[0] = rng.random_range(1.5..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let nu = inner4(&u, &u);
        if nu >= -0.2 {
            continue;
        }
        let u = u * (1.0 / (-nu).sqrt());
        let w = rand_vec(rng, 1.0);
        // remove the u component: w − ⟨w,u⟩/⟨u,u⟩ u with ⟨u,u⟩ = −1
        let w = w + u * inner4(&w, &u);
        let nw = inner4(&w, &w);
        if nw < 0.1 {
            continue;
        }
        return (u, w * (1.0 / nw.sqrt()));
    }
}

fn lemma21(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for _ in 0..500 {
        let (u, w) = lorentzian_plane(rng);
        let nulls = [u + w, u - w];
        let i = rng.random_range(0..2);
        let j = rng.random_range(0..2);
        let a = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let b = rng.random_range(0.2..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let (p, q) = (nulls[i] * a, nulls[j] * b);
        let rank_says = rank_defect(&p, &q) <= 1e-9;
        match lightlike_dependent(&p, &q) {
            Ok(dep) => tr.agree(dep == rank_says, || format!("p={p:?} q={q:?} orthogonality={dep} rank={rank_says}")),
            Err(e) => tr.error(format!("p={p:?} q={q:?}: {e}")),
        }
    }
}

fn lemma22(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    for case in 0..600 {
        let (u, w) = lorentzian_plane(rng);
        let l = u + w;
        // a spacelike direction orthogonal to the Lorentzian plane
        let mut z = rand_vec(rng, 1.0);
        z = z + u * inner4(&z, &u) - w * inner4(&z, &w);
        let basis: Vec<Vec4> = match case % 6 {
            0 => vec![l * rng.random_range(0.5..2.0)],
            1 => vec![u],
            2 => vec![w],
            3 => vec![u, w],
            4 => vec![l, z],
            _ => vec![w, z],
        };
        if basis.iter().any(|b| b.euclid_norm() < 1e-3) {
            continue;
        }
        let oracle = meets_orthogonal_complement(&basis, 1e-9);
        match is_degenerate_subspace(&basis) {
            Ok(d) => tr.agree(d == oracle, || format!("basis={basis:?} gram={d} intersection={oracle}")),
            Err(e) => tr.error(format!("basis={basis:?}: {e}")),
        }
    }
}

fn orthonormal(rng: &mut ChaCha8Rng, tr: &mut Tracker) {
    let mut done = 0;
    while done < 300 {
        let mut n1 = rand_vec(rng, 2.0);
        let mut n2 = rand_vec(rng, 2.0);
        n1.0[0] *= 0.2;
        n2.0[0] *= 0.2;
        let (a, b, c) = (inner4(&n1, &n1), inner4(&n1, &n2), inner4(&n2, &n2));
        if a <= 0.1 || a * c - b * b <= 0.1 * (n1.euclid_norm() * n2.euclid_norm()).powi(2) {
            continue;
        }
        done += 1;
        match orthonormalize_pair(&n1, &n2) {
            Ok((e3, e4)) => {
                let gram = (inner4(&e3, &e3) - 1.0)
                    .abs()
                    .max((inner4(&e4, &e4) - 1.0).abs())
                    .max(inner4(&e3, &e4).abs());
                // e3 ∥ n1, and e3∧e4 a positive multiple of n1∧n2
                let parallel = rank_defect(&e3, &n1);
                let orient = inner6(&wedge(&e3, &e4), &wedge(&n1, &n2)) > 0.0;
                let bad = if orient { 0.0 } else { 1.0 };
                tr.record(gram.max(parallel).max(bad), || format!("n1={n1:?} n2={n2:?} e3={e3:?} e4={e4:?}"));
            }
            Err(e) => tr.error(format!("n1={n1:?} n2={n2:?}: {e}")),
        }
    }
}
