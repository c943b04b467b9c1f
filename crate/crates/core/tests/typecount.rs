use std::collections::HashSet;

use multiform::boxvc::{self, LabelArray};
use multiform::ffla::{FVector, Fp};
use multiform::mform::{self, AlternatingForm};
use multiform::typecount::{self, LookupTable, RelationOracle, RelationTable};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_table_oracle(universes: Vec<usize>, rng: &mut ChaCha8Rng) -> RelationOracle {
    let len: usize = universes.iter().product();
    let bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
    let dims = universes.clone();
    RelationOracle::table(RelationTable::from_fn(universes, move |a| {
        bits[a.iter().zip(&dims).fold(0, |acc, (&x, &n)| acc * n + x)]
    }))
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn window_counts_are_monotone_and_bounded(seed in any::<u64>(), k in 2usize..=3, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = 6;
        let oracle = random_table_oracle(vec![u; k + 1], &mut rng);
        let seqs: Vec<Vec<usize>> = (0..k - 1).map(|_| (0..n).map(|_| rng.gen_range(0..u)).collect()).collect();
        let long: Vec<usize> = (0..20).map(|_| rng.gen_range(0..u)).collect();
        let b = rng.gen_range(0..u);
        let lo = rng.gen_range(0..long.len());
        let hi = rng.gen_range(lo..=long.len());
        let (lo2, hi2) = (rng.gen_range(0..=lo), rng.gen_range(hi..=long.len()));
        let inner = typecount::phi_types_realized(&oracle, b, &seqs, &long[lo..hi]).unwrap();
        let outer = typecount::phi_types_realized(&oracle, b, &seqs, &long[lo2..hi2]).unwrap();
        prop_assert!(inner <= outer);
        let cap = 1usize << n.pow(k as u32 - 1);
        prop_assert!(outer <= (hi2 - lo2).min(cap));
    }

    #[test]
    fn dagger_counts_match_direct_windows(seed in any::<u64>(), d_exp in 1u32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let oracle = random_table_oracle(vec![3, 4, 4], &mut rng);
        let seqs = vec![vec![0, 1, 3]];
        let long: Vec<usize> = (0..30).map(|_| rng.gen_range(0..4)).collect();
        let r = typecount::dagger_check(&oracle, 1, &seqs, &long, d_exp, 0.2).unwrap();
        let w = r.window_length;
        prop_assert_eq!(w, 29 / 3usize.pow(d_exp));
        for (s, &c) in r.per_interval_type_counts.iter().enumerate() {
            prop_assert_eq!(c, typecount::phi_types_realized(&oracle, 1, &seqs, &long[s..s + w]).unwrap());
        }
        prop_assert_eq!(r.passes, r.per_interval_type_counts.iter().any(|&c| c < 1 << r.bound_exponent));
    }
}

#[test]
fn composition_matches_direct_substitution_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..20 {
        let u = [2usize, 5, 8][trial % 3];
        let k = 2;
        // Base relation on three slots, written as a plain function.
        let salt: u64 = rng.gen();
        let base_fn =
            move |a: &[usize]| (a[0] * 7 + a[1] * 3 + a[2] + salt as usize).is_multiple_of(3);
        let base = RelationOracle::table(RelationTable::from_fn(vec![u; 3], base_fn));
        let slot_map = vec![vec![0], vec![1, 2], vec![2, 0]];
        let fns: Vec<LookupTable> = slot_map
            .iter()
            .map(|s| LookupTable::random(vec![u; s.len()], u, rng.gen()))
            .collect();
        let psi = typecount::compose_relation(&base, &fns, &slot_map, &vec![u; k + 1]).unwrap();
        for y0 in 0..u {
            for y1 in 0..u {
                for y2 in 0..u {
                    let y = [y0, y1, y2];
                    let xs: Vec<usize> = fns
                        .iter()
                        .zip(&slot_map)
                        .map(|(f, s)| {
                            let idx = s.iter().fold(0, |acc, &j| acc * u + y[j]);
                            f.values[idx] as usize
                        })
                        .collect();
                    assert_eq!(psi.evaluate(&y), base_fn(&xs));
                }
            }
        }
    }
}

#[test]
fn order_with_unary_tables_and_identity_composition() {
    let base = RelationOracle::table(RelationTable::order(8));
    let f1 = LookupTable::random(vec![8], 8, 1);
    let f2 = LookupTable::random(vec![8], 8, 2);
    let psi = typecount::compose_relation(
        &base,
        &[f1.clone(), f2.clone()],
        &[vec![0], vec![1]],
        &[8, 8],
    )
    .unwrap();
    let ids = [LookupTable::identity(8), LookupTable::identity(8)];
    let same = typecount::compose_relation(&base, &ids, &[vec![0], vec![1]], &[8, 8]).unwrap();
    for a in 0..8 {
        for b in 0..8 {
            assert_eq!(psi.evaluate(&[a, b]), f1.values[a] < f2.values[b]);
            assert_eq!(same.evaluate(&[a, b]), a < b);
        }
    }
    assert!(
        typecount::compose_relation(&base, std::slice::from_ref(&f1), &[vec![0]], &[8, 8]).is_err()
    );
    assert!(typecount::compose_relation(
        &base,
        &[f1.clone(), f2.clone()],
        &[vec![0], vec![5]],
        &[8, 8]
    )
    .is_err());
}

#[test]
fn form_as_function_composed_with_field_equation() {
    let f = Fp::new(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in [2usize, 3] {
        let form = mform::random_form(f, n, 4, 100 + n as u64).unwrap();
        let q = 16usize;
        let decode =
            |i: usize| FVector::new(f, (0..4).map(|j| ((i >> (3 - j)) & 1) as u32).collect());
        let form_table = LookupTable::from_fn(vec![q; n], 2, |a| {
            let vs: Vec<FVector> = a.iter().map(|&i| decode(i)).collect();
            form.eval(&vs).unwrap().value()
        })
        .unwrap();
        let g = LookupTable::random(vec![q], 2, 5);
        let base = RelationOracle::table(RelationTable::equality(2));
        let slots: Vec<usize> = (1..=n).collect();
        let psi = typecount::compose_relation(
            &base,
            &[form_table, g.clone()],
            &[slots, vec![0]],
            &vec![q; n + 1],
        )
        .unwrap();
        for _ in 0..10_000 {
            let y: Vec<usize> = (0..=n).map(|_| rng.gen_range(0..q)).collect();
            let vs: Vec<FVector> = y[1..].iter().map(|&i| decode(i)).collect();
            let direct = form.eval(&vs).unwrap().value() == g.values[y[0]];
            assert_eq!(psi.evaluate(&y), direct);
        }
    }
}

#[test]
fn form_zero_oracle_uses_base_p_indices() {
    let f = Fp::new(3).unwrap();
    let form = AlternatingForm::symplectic(f, 2).unwrap();
    let o = RelationOracle::form_zero(form.clone()).unwrap();
    assert_eq!(o.universes(), &[9, 9]);
    // b = (0, 1) is index 1, v = (1, 0) is index 3: <v, b> = 1.
    assert!(!o.evaluate(&[1, 3]));
    assert!(o.evaluate(&[1, 1]));
    assert_eq!(typecount::vector_index(&FVector::new(f, vec![1, 0])), 3);
    assert_eq!(
        typecount::vector_from_index(&form, 5),
        FVector::new(f, vec![1, 2])
    );
}

#[test]
fn bad_hypergraph_fails_dagger_exactly() {
    for k in [2usize, 3] {
        for d in [1usize, 2] {
            for n in [2usize, 3] {
                let g = boxvc::build_bad_hypergraph(k, d, n).unwrap();
                let vk = *g.part_sizes().last().unwrap();
                let oracle = RelationOracle::hypergraph(g);
                let seqs = vec![(0..n).collect::<Vec<_>>(); k - 1];
                let long: Vec<usize> = (0..vk).collect();
                let max = 1usize << n.pow(k as u32 - 1);
                let r = typecount::dagger_check_with(&oracle, 0, &seqs, &long, |_| d, 0.2).unwrap();
                assert!(!r.passes && !r.passes_unrounded);
                assert!(r.per_interval_type_counts.iter().all(|&c| c == max));
                assert_eq!(r.intervals_scanned, vk - r.window_length + 1);
            }
        }
    }
    let o = RelationOracle::constant(vec![1, 3, 9], true);
    let r = typecount::dagger_check(&o, 0, &[vec![0, 1, 2]], &(0..9).collect::<Vec<_>>(), 2, 0.2)
        .unwrap();
    assert!(r.passes);
}

/// Second enumerator: recursion over every ζ entry, then over every index tuple.
fn array_family_recursive(
    phi: &dyn Fn(&[usize]) -> bool,
    universe: usize,
    delta: &[usize],
    n: usize,
    k: usize,
) -> usize {
    let entries = n.pow(k as u32 - 1);
    let mut assignment = vec![0usize; k * entries];
    let mut seen = HashSet::new();
    fn rec(
        pos: usize,
        assignment: &mut Vec<usize>,
        universe: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if pos == assignment.len() {
            visit(assignment);
            return;
        }
        for v in 0..universe {
            assignment[pos] = v;
            rec(pos + 1, assignment, universe, visit);
        }
    }
    let mut visit = |z: &[usize]| {
        let mut set = Vec::new();
        for (cell, &label) in delta.iter().enumerate() {
            let idx: Vec<usize> = (0..k)
                .map(|j| cell / n.pow((k - 1 - j) as u32) % n)
                .collect();
            let mut args = Vec::with_capacity(k + 1);
            for t in 0..k {
                let rest: Vec<usize> = (0..k).filter(|&j| j != t).map(|j| idx[j]).collect();
                let e = rest.iter().fold(0, |acc, &x| acc * n + x);
                args.push(z[t * entries + e]);
            }
            args.push(label);
            set.push(phi(&args));
        }
        seen.insert(set);
    };
    rec(0, &mut assignment, universe, &mut visit);
    seen.len()
}

#[test]
fn array_family_exact_matches_recursive_enumerator() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    // Equality of the first zeta entry with the delta entry.
    let eq = |a: &[usize]| a[0] == a[a.len() - 1];
    let oracle = RelationOracle::closure(vec![2, 2, 2], eq);
    for labels in [vec![0, 0, 0, 0], vec![0, 1, 1, 0], vec![1, 0, 0, 1]] {
        let delta = LabelArray::new(vec![2, 2], labels.clone()).unwrap();
        let r = typecount::array_family_cardinality(&oracle, &delta, 1_000_000, 0).unwrap();
        assert!(r.exact);
        assert_eq!(r.assignment_space, Some(16));
        let d: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
        assert_eq!(r.count, array_family_recursive(&eq, 2, &d, 2, 2));
    }
    for (k, n) in [(2usize, 2usize), (2, 3), (3, 2)] {
        for _ in 0..4 {
            let bits: Vec<bool> = (0..1 << (k + 1)).map(|_| rng.gen()).collect();
            let phi = move |a: &[usize]| bits[a.iter().fold(0, |acc, &x| acc * 2 + x)];
            let oracle = RelationOracle::closure(vec![2; k + 1], phi.clone());
            let labels: Vec<u32> = (0..n.pow(k as u32)).map(|_| rng.gen_range(0..2)).collect();
            let delta = LabelArray::new(vec![n; k], labels.clone()).unwrap();
            let r = typecount::array_family_cardinality(&oracle, &delta, 1_000_000, 0).unwrap();
            assert!(r.exact);
            let d: Vec<usize> = labels.iter().map(|&l| l as usize).collect();
            let brute = array_family_recursive(&phi, 2, &d, n, k);
            assert_eq!(r.count, brute);
            assert!(r.count as u128 <= (1u128 << n.pow(k as u32)).min(r.assignment_space.unwrap()));
            let sampled = typecount::array_family_cardinality(
                &oracle,
                &delta,
                r.assignment_space.unwrap() / 2,
                9,
            )
            .unwrap();
            assert!(!sampled.exact && sampled.count <= r.count);
        }
    }
    let constant = RelationOracle::constant(vec![2, 2, 2], false);
    let delta = LabelArray::new(vec![2, 2], vec![0; 4]).unwrap();
    assert_eq!(
        typecount::array_family_cardinality(&constant, &delta, 1000, 0)
            .unwrap()
            .count,
        1
    );
}
