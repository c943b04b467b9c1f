mod common;

use common::{isomorphic_by_search, random_vector, small_binary_towers};
use multiform::combinatorics::increasing_tuples;
use multiform::ffla::{FVector, Fp};
use multiform::mform::{self, AlternatingForm};
use multiform::structure::{self, PartialIso};
use multiform::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tuple(form: &AlternatingForm, len: usize, rng: &mut ChaCha8Rng) -> Vec<FVector> {
    (0..len)
        .map(|_| random_vector(form.field(), form.dim(), rng))
        .collect()
}

/// Pushes a tuple through the forth step, returning None when the target runs out of room.
fn transport(
    src: &AlternatingForm,
    tgt: &AlternatingForm,
    tuple: &[FVector],
) -> Option<Vec<FVector>> {
    let mut iso = PartialIso::empty(src, tgt).unwrap();
    for x in tuple {
        match structure::extend_iso(&iso, x) {
            Ok(next) => {
                assert!(next.is_valid());
                iso = next;
            }
            Err(Error::TargetExhausted(_)) => return None,
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    Some(iso.image)
}

#[test]
fn equivalent_agrees_with_exhaustive_search() {
    let towers = small_binary_towers(11);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut agree, mut positives, mut total) = (0, 0, 0);
    while total < 300 {
        let a = &towers[rng.gen_range(0..towers.len())];
        let b = &towers[rng.gen_range(0..towers.len())];
        let cap = 3.min(mform::headroom(a)).min(mform::headroom(b));
        let len = rng.gen_range(0..=cap);
        let ta = random_tuple(a, len, &mut rng);
        let tb = match total % 3 {
            0 => match transport(a, b, &ta) {
                Some(t) => t,
                None => continue,
            },
            1 => random_tuple(b, len, &mut rng),
            _ => match transport(a, b, &ta) {
                Some(mut t) if len > 0 => {
                    let i = rng.gen_range(0..len);
                    t[i] = random_vector(b.field(), b.dim(), &mut rng);
                    t
                }
                _ => continue,
            },
        };
        let decided = structure::equivalent(a, &ta, b, &tb).unwrap();
        let searched = isomorphic_by_search(a, &ta, b, &tb);
        agree += usize::from(decided == searched);
        positives += usize::from(searched);
        total += 1;
    }
    assert_eq!(agree, total);
    assert!(
        positives > 50 && positives < total,
        "{positives} of {total}"
    );
}

#[test]
fn equivalent_is_an_equivalence_relation() {
    let towers = small_binary_towers(21);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let forms: Vec<&AlternatingForm> = (0..3)
            .map(|_| &towers[rng.gen_range(0..towers.len())])
            .collect();
        let len = rng.gen_range(0..=2);
        let t0 = random_tuple(forms[0], len, &mut rng);
        let mut tuples = vec![t0.clone()];
        for f in &forms[1..] {
            let t = if rng.gen_bool(0.5) {
                transport(forms[0], f, &t0).unwrap_or_else(|| random_tuple(f, len, &mut rng))
            } else {
                random_tuple(f, len, &mut rng)
            };
            tuples.push(t);
        }
        let eq = |i: usize, j: usize| {
            structure::equivalent(forms[i], &tuples[i], forms[j], &tuples[j]).unwrap()
        };
        assert!(eq(0, 0));
        assert_eq!(eq(0, 1), eq(1, 0));
        if eq(0, 1) && eq(1, 2) {
            assert!(eq(0, 2));
        }
    }
}

#[test]
fn forth_step_succeeds_below_headroom() {
    let f = Fp::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut targets = Vec::new();
    for (n, d0) in [(2, 2), (2, 3), (3, 3)] {
        let zero = AlternatingForm::zero(f, n, d0).unwrap();
        targets.push(mform::certify_tower(&zero, 2).unwrap().top().clone());
    }
    for tgt in &targets {
        let h = mform::headroom(tgt);
        assert!(h >= 2, "headroom {h} at d={}", tgt.dim());
        let src = mform::random_form(f, tgt.arity(), 5, rng.gen()).unwrap();
        for _ in 0..40 {
            let mut iso = PartialIso::empty(&src, tgt).unwrap();
            while iso.len() < h {
                let x = random_vector(f, src.dim(), &mut rng);
                let independent_image = multiform::ffla::theta(&iso.image).unwrap();
                let next = structure::extend_iso(&iso, &x);
                if independent_image {
                    let next = next.expect("forth step below headroom");
                    assert!(next.is_valid());
                    iso = next;
                } else {
                    break;
                }
            }
        }
    }
}

#[test]
fn embed_commutes_with_eval() {
    let f = Fp::new(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in [2, 3] {
        let steps = if n == 2 { 3 } else { 2 };
        let tgt = mform::certify_tower(&AlternatingForm::zero(f, n, n).unwrap(), steps)
            .unwrap()
            .top()
            .clone();
        let h = mform::headroom(&tgt);
        for _ in 0..30 {
            let src = mform::random_form(f, n, 5, rng.gen()).unwrap();
            let len = rng.gen_range(0..=h);
            let gens = random_tuple(&src, len, &mut rng);
            let sub = structure::generate(&src, &gens).unwrap();
            let iso = structure::embed(&sub, &tgt).unwrap();
            assert_eq!(iso.domain, sub.basis);
            for pos in increasing_tuples(sub.dim(), n) {
                let xs: Vec<FVector> = pos.iter().map(|&i| iso.domain[i].clone()).collect();
                let ys: Vec<FVector> = pos.iter().map(|&i| iso.image[i].clone()).collect();
                assert_eq!(src.eval(&xs).unwrap(), tgt.eval(&ys).unwrap());
            }
            assert!(isomorphic_by_search(&src, &iso.domain, &tgt, &iso.image));
        }
    }
}

#[test]
fn invariant_json_is_canonical() {
    let f = Fp::new(2).unwrap();
    let form = AlternatingForm::symplectic(f, 2).unwrap();
    let e1 = FVector::unit(f, 2, 0);
    let e2 = FVector::unit(f, 2, 1);
    let inv = structure::atomic_invariant(&form, &[e1.clone(), e2.clone(), e1.add(&e2)]).unwrap();
    assert_eq!(
        serde_json::to_string(&inv).unwrap(),
        r#"{"length":3,"supportMask":[0,1],"coords":[[1,0],[0,1],[1,1]],"formValues":[[[0,1],1]]}"#
    );
}
