//! Oracles and fixtures shared by integration tests.
#![allow(dead_code)]

use multiform::combinatorics::for_each_word;
use multiform::ffla::{FVector, Fp};
use multiform::mform::{self, AlternatingForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every element of the span of `tuple`, indexed by coefficient vectors in base p.
fn span_elements(field: Fp, dim: usize, tuple: &[FVector]) -> Vec<FVector> {
    let p = field.p() as usize;
    let total = p.pow(tuple.len() as u32);
    (0..total)
        .map(|mut code| {
            let mut acc = FVector::zero(field, dim);
            for v in tuple {
                acc.add_scaled(v, (code % p) as u32);
                code /= p;
            }
            acc
        })
        .collect()
}

/// Exhaustive check for a form-preserving linear bijection span(ta) -> span(tb)
/// sending ta[i] to tb[i].
///
/// Linearity forces the candidate map, so the search walks every coefficient
/// vector: the map must be well defined, injective, and preserve the form on
/// every n-tuple of span elements.
pub fn isomorphic_by_search(
    fa: &AlternatingForm,
    ta: &[FVector],
    fb: &AlternatingForm,
    tb: &[FVector],
) -> bool {
    if ta.len() != tb.len() {
        return false;
    }
    let xs = span_elements(fa.field(), fa.dim(), ta);
    let ys = span_elements(fb.field(), fb.dim(), tb);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if (xs[i] == xs[j]) != (ys[i] == ys[j]) {
                return false;
            }
        }
    }
    let n = fa.arity();
    let mut ok = true;
    let mut args_a = Vec::with_capacity(n);
    let mut args_b = Vec::with_capacity(n);
    for_each_word(xs.len(), n, |w| {
        if !ok {
            return;
        }
        args_a.clear();
        args_b.clear();
        args_a.extend(w.iter().map(|&i| xs[i].clone()));
        args_b.extend(w.iter().map(|&i| ys[i].clone()));
        ok = fa.eval(&args_a).unwrap() == fb.eval(&args_b).unwrap();
    });
    ok
}

pub fn random_vector(f: Fp, d: usize, rng: &mut ChaCha8Rng) -> FVector {
    FVector::new(f, (0..d).map(|_| rng.gen_range(0..f.p())).collect())
}

/// Towers over F_2 with n = 2 and dimension at most 6, all with headroom >= 2.
pub fn small_binary_towers(seed: u64) -> Vec<AlternatingForm> {
    let f = Fp::new(2).unwrap();
    let mut out = vec![
        AlternatingForm::symplectic(f, 4).unwrap(),
        AlternatingForm::symplectic(f, 6).unwrap(),
    ];
    for d0 in [2, 3] {
        let zero = AlternatingForm::zero(f, 2, d0).unwrap();
        out.push(mform::certify_tower(&zero, 4).unwrap().top().clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 8 {
        let d0 = rng.gen_range(2..=3);
        let base = mform::random_form(f, 2, d0, rng.gen()).unwrap();
        let top = mform::certify_tower(&base, 4).unwrap().top().clone();
        if top.dim() <= 6 && mform::headroom(&top) >= 2 {
            out.push(top);
        }
    }
    out
}
