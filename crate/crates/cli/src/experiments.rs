//! Seeded experiment drivers. Each one is reachable from `multiform experiment`.

use std::collections::BTreeSet;

use multiform::boxvc::{self, BitSet, BoxFamily};
use multiform::combinatorics::{binomial, increasing_tuples};
use multiform::exterior::{self, WedgeVector};
use multiform::ffla::{FVector, Fp};
use multiform::mform::{self, AlternatingForm, StepCertificate};
use multiform::structure::{self, PartialIso};
use multiform::typecount::{self, LookupTable, RelationOracle, RelationTable};
use multiform::{conncomp, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Independent stream `i` under a master seed.
pub fn stream(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn field(p: u32) -> Result<Fp> {
    Fp::new(p)
}

fn random_vector(f: Fp, d: usize, rng: &mut ChaCha8Rng) -> FVector {
    FVector::new(f, (0..d).map(|_| rng.gen_range(0..f.p())).collect())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BadGraphReport {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub part_sizes: Vec<usize>,
    pub expected_part_sizes: Vec<usize>,
    pub edge_count: usize,
    pub expected_edge_count: usize,
    pub window_length: usize,
    pub windows: usize,
    pub min_types: usize,
    pub max_types: usize,
    pub expected_types: usize,
    pub claims_hold: bool,
}

/// Part sizes, edge count, and type counts over every shortest qualifying window.
pub fn bad_graph_claims(k: usize, d: usize, n: usize) -> Result<BadGraphReport> {
    let g = boxvc::build_bad_hypergraph(k, d, n)?;
    let big_n = n.pow(k as u32 - 1);
    let mut expected_part_sizes = vec![n; k - 1];
    expected_part_sizes.push((2 * d) << big_n);
    let part_sizes = g.part_sizes().to_vec();
    let edge_count = g.edge_count();
    let expected_edge_count = (2 * d * big_n) << (big_n - 1);
    let vk = *part_sizes.last().unwrap();
    let oracle = RelationOracle::hypergraph(g);
    let seqs = vec![(0..n).collect::<Vec<_>>(); k - 1];
    let long: Vec<usize> = (0..vk).collect();
    let r = typecount::dagger_check_with(&oracle, 0, &seqs, &long, |_| d, 1.0)?;
    let counts = &r.per_interval_type_counts;
    let min_types = counts.iter().copied().min().unwrap_or(0);
    let max_types = counts.iter().copied().max().unwrap_or(0);
    let expected_types = 1usize << big_n;
    Ok(BadGraphReport {
        claims_hold: part_sizes == expected_part_sizes
            && edge_count == expected_edge_count
            && min_types == expected_types
            && max_types == expected_types,
        k,
        d,
        n,
        part_sizes,
        expected_part_sizes,
        edge_count,
        expected_edge_count,
        window_length: r.window_length,
        windows: r.intervals_scanned,
        min_types,
        max_types,
        expected_types,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SauerReport {
    pub n: usize,
    pub d: usize,
    pub extremal_size: usize,
    pub extremal_shattered: bool,
    pub random_size: usize,
    pub trials: usize,
    pub successes: usize,
    pub seed: u64,
}

/// All subsets of [n] with at most `d` elements.
pub fn extremal_family(n: usize, d: usize) -> Result<BoxFamily> {
    let sets = (0u64..1 << n)
        .filter(|m| m.count_ones() as usize <= d)
        .map(|m| BitSet::from_words(n, vec![m]))
        .collect::<Result<Vec<_>>>()?;
    BoxFamily::new(vec![n], sets)
}

/// `size` distinct uniformly random subsets of [n], in increasing mask order.
pub fn random_family(n: usize, size: usize, rng: &mut ChaCha8Rng) -> Result<BoxFamily> {
    if n > 24 || size > 1 << n {
        return Err(Error::InvalidInput(format!(
            "cannot draw {size} distinct subsets of [{n}]"
        )));
    }
    let mut masks = BTreeSet::new();
    while masks.len() < size {
        masks.insert(rng.gen_range(0u64..1 << n));
    }
    let sets = masks
        .into_iter()
        .map(|m| BitSet::from_words(n, vec![m]))
        .collect::<Result<Vec<_>>>()?;
    BoxFamily::new(vec![n], sets)
}

/// Extremal family of <= d-subsets, then random families one set larger searched for a (d+1)-set.
pub fn sauer_shelah(n: usize, d: usize, trials: usize, seed: u64) -> Result<SauerReport> {
    let extremal = extremal_family(n, d)?;
    let extremal_shattered = boxvc::sauer_shelah_search(&extremal, d + 1).is_some();
    let random_size = extremal.len() + 1;
    let successes = (0..trials)
        .into_par_iter()
        .map(|i| {
            let fam = random_family(n, random_size, &mut stream(seed, i as u64))?;
            Ok(usize::from(
                boxvc::sauer_shelah_search(&fam, d + 1).is_some(),
            ))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(SauerReport {
        n,
        d: d + 1,
        extremal_size: extremal.len(),
        extremal_shattered,
        random_size,
        trials,
        successes,
        seed,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ObstructionReport {
    pub p: u32,
    pub n: usize,
    pub d: usize,
    pub exhaustive: bool,
    pub enumerated_forms: usize,
    pub random_forms: usize,
    pub structured_forms: usize,
    pub nondegenerate: usize,
    pub generic: usize,
}

/// Forms used as fixtures: zero, all-ones, and every single-term form.
pub fn structured_forms(f: Fp, n: usize, d: usize) -> Result<Vec<AlternatingForm>> {
    let tuples = increasing_tuples(d, n);
    let mut out = vec![
        AlternatingForm::zero(f, n, d)?,
        AlternatingForm::from_coeffs(f, n, d, tuples.iter().map(|t| (t.clone(), 1)))?,
    ];
    for t in &tuples {
        out.push(AlternatingForm::from_coeffs(f, n, d, [(t.clone(), 1)])?);
    }
    Ok(out)
}

/// Non-degeneracy and genericity over all forms (when few enough), random forms and fixtures.
pub fn finite_obstruction(
    p: u32,
    n: usize,
    d: usize,
    random: usize,
    seed: u64,
) -> Result<ObstructionReport> {
    let f = field(p)?;
    let tuples = increasing_tuples(d, n);
    let total = (p as u128)
        .checked_pow(tuples.len() as u32)
        .filter(|&t| t <= 1 << 16);
    let mut forms = Vec::new();
    if let Some(total) = total {
        for mut code in 0..total {
            let coeffs: Vec<(Vec<usize>, u32)> = tuples
                .iter()
                .map(|t| {
                    let c = (code % p as u128) as u32;
                    code /= p as u128;
                    (t.clone(), c)
                })
                .collect();
            forms.push(AlternatingForm::from_coeffs(f, n, d, coeffs)?);
        }
    }
    let enumerated = forms.len();
    for i in 0..random {
        forms.push(mform::random_form(f, n, d, stream(seed, i as u64).gen())?);
    }
    let structured = structured_forms(f, n, d)?;
    let structured_count = structured.len();
    forms.extend(structured);
    let (nondegenerate, generic) = forms
        .par_iter()
        .map(|g| {
            (
                usize::from(mform::is_nondegenerate(g)),
                usize::from(mform::is_generic(g)),
            )
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ObstructionReport {
        p,
        n,
        d,
        exhaustive: total.is_some(),
        enumerated_forms: enumerated,
        random_forms: random,
        structured_forms: structured_count,
        nondegenerate,
        generic,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VolumeCheck {
    pub p: u32,
    pub n: usize,
    pub nondegenerate: bool,
    pub generic: bool,
}

pub fn volume_checks(primes: &[u32], arities: &[usize]) -> Result<Vec<VolumeCheck>> {
    let mut out = Vec::new();
    for &p in primes {
        for &n in arities {
            let vol = AlternatingForm::volume(field(p)?, n)?;
            out.push(VolumeCheck {
                p,
                n,
                nondegenerate: mform::is_nondegenerate(&vol),
                generic: mform::is_generic(&vol),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    pub p: u32,
    pub n: usize,
    pub d0: usize,
    pub dims: Vec<usize>,
    pub certificates: Vec<StepCertificate>,
    pub certificates_pass: bool,
    pub tower_verified: bool,
    pub find_w_trials: usize,
    pub find_w_successes: usize,
}

/// A nonzero wedge over F_p^d with uniformly random dense coordinates.
pub fn random_nonzero_wedge(f: Fp, n: usize, d: usize, rng: &mut ChaCha8Rng) -> WedgeVector {
    let dim = binomial(d, n - 1) as usize;
    loop {
        let dense: Vec<u32> = (0..dim).map(|_| rng.gen_range(0..f.p())).collect();
        let t = WedgeVector::from_dense(f, n, d, &dense);
        if !t.is_zero() {
            return t;
        }
    }
}

/// Tower from the zero form; for each step, random wedges of the lower level get prescribed pairings one level up.
pub fn extension_chain(
    p: u32,
    n: usize,
    d0: usize,
    steps: usize,
    wedges: usize,
    seed: u64,
) -> Result<ChainReport> {
    let f = field(p)?;
    let tower = mform::certify_tower(&AlternatingForm::zero(f, n, d0)?, steps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = 0;
    let mut successes = 0;
    for pair in tower.levels.windows(2) {
        let (lo, hi) = (&pair[0].form, &pair[1].form);
        for _ in 0..wedges {
            let t = random_nonzero_wedge(f, n, lo.dim(), &mut rng).lift(hi.dim());
            let k = rng.gen_range(0..p);
            trials += 1;
            if let Ok(w) = mform::find_w(hi, std::slice::from_ref(&t), &[k], &[]) {
                if !w.is_zero() && exterior::pairing2(hi, &t, &w)?.value() == k {
                    successes += 1;
                }
            }
        }
    }
    Ok(ChainReport {
        p,
        n,
        d0,
        dims: tower.levels.iter().map(|l| l.dim).collect(),
        certificates_pass: tower.certificates.iter().all(StepCertificate::passes),
        tower_verified: tower.verify(),
        certificates: tower.certificates,
        find_w_trials: trials,
        find_w_successes: successes,
    })
}

/// Towers over F_2 with n = 2, dimension at most 6 and headroom at least 2.
pub fn binary_towers(seed: u64) -> Result<Vec<AlternatingForm>> {
    let f = field(2)?;
    let mut out = vec![
        AlternatingForm::symplectic(f, 4)?,
        AlternatingForm::symplectic(f, 6)?,
    ];
    for d0 in [2, 3] {
        out.push(
            mform::certify_tower(&AlternatingForm::zero(f, 2, d0)?, 4)?
                .top()
                .clone(),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 8 {
        let d0 = rng.gen_range(2..=3);
        let base = mform::random_form(f, 2, d0, rng.gen())?;
        let top = mform::certify_tower(&base, 4)?.top().clone();
        if top.dim() <= 6 && mform::headroom(&top) >= 2 {
            out.push(top);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct QePair {
    /// "transported", "random" or "perturbed".
    pub kind: String,
    pub form_a: AlternatingForm,
    pub tuple_a: Vec<FVector>,
    pub form_b: AlternatingForm,
    pub tuple_b: Vec<FVector>,
    pub equivalent: bool,
}

fn transport(
    a: &AlternatingForm,
    b: &AlternatingForm,
    tuple: &[FVector],
) -> Result<Option<Vec<FVector>>> {
    let mut iso = PartialIso::empty(a, b)?;
    for x in tuple {
        match structure::extend_iso(&iso, x) {
            Ok(next) => iso = next,
            Err(Error::TargetExhausted(_)) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(iso.image))
}

/// Seeded tuple pairs over small binary towers, with their decided equivalence.
///
/// A third of the pairs carry the image of the forth step, a third are
/// independent random tuples, and the rest are images with one entry replaced.
pub fn qe_pairs(count: usize, seed: u64) -> Result<Vec<QePair>> {
    let towers = binary_towers(seed)?;
    let mut rng = stream(seed, 1);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = &towers[rng.gen_range(0..towers.len())];
        let b = &towers[rng.gen_range(0..towers.len())];
        let cap = 3.min(mform::headroom(a)).min(mform::headroom(b));
        let len = rng.gen_range(0..=cap);
        let ta: Vec<FVector> = (0..len)
            .map(|_| random_vector(a.field(), a.dim(), &mut rng))
            .collect();
        let (kind, tb) = match out.len() % 3 {
            0 => match transport(a, b, &ta)? {
                Some(t) => ("transported", t),
                None => continue,
            },
            1 => (
                "random",
                (0..len)
                    .map(|_| random_vector(b.field(), b.dim(), &mut rng))
                    .collect(),
            ),
            _ => match transport(a, b, &ta)? {
                Some(mut t) if len > 0 => {
                    let i = rng.gen_range(0..len);
                    t[i] = random_vector(b.field(), b.dim(), &mut rng);
                    ("perturbed", t)
                }
                _ => continue,
            },
        };
        let equivalent = structure::equivalent(a, &ta, b, &tb)?;
        out.push(QePair {
            kind: kind.to_string(),
            form_a: a.clone(),
            tuple_a: ta,
            form_b: b.clone(),
            tuple_b: tb,
            equivalent,
        });
    }
    Ok(out)
}

/// Forms on F_2^6 for the intersection identity: symplectic, tower levels, and random forms.
pub fn identity_forms(seed: u64) -> Result<Vec<AlternatingForm>> {
    let f = field(2)?;
    let mut out = vec![
        AlternatingForm::symplectic(f, 6)?,
        mform::certify_tower(&AlternatingForm::zero(f, 2, 3)?, 1)?
            .top()
            .clone(),
        mform::certify_tower(&AlternatingForm::zero(f, 3, 3)?, 1)?
            .top()
            .clone(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in [2, 3, 2, 3] {
        out.push(mform::random_form(f, n, 6, rng.gen())?);
    }
    Ok(out)
}

pub struct IdentityInstance {
    pub form: AlternatingForm,
    pub parts: Vec<Vec<FVector>>,
}

/// Seeded instances with n parts of at most two vectors each.
pub fn identity_instances(count: usize, seed: u64) -> Result<Vec<IdentityInstance>> {
    let forms = identity_forms(seed)?;
    let mut rng = stream(seed, 1);
    Ok((0..count)
        .map(|i| {
            let form = forms[i % forms.len()].clone();
            let parts = (0..form.arity())
                .map(|_| {
                    let len = rng.gen_range(0..=2);
                    (0..len)
                        .map(|_| random_vector(form.field(), form.dim(), &mut rng))
                        .collect()
                })
                .collect();
            IdentityInstance { form, parts }
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IdentityReport {
    pub instances: usize,
    pub holds: usize,
    pub arity_two: usize,
    pub arity_three: usize,
}

pub fn identity_check(count: usize, seed: u64) -> Result<IdentityReport> {
    let inst = identity_instances(count, seed)?;
    let holds = inst
        .par_iter()
        .map(|i| conncomp::intersection_identity_check(&i.form, &i.parts).map(usize::from))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(IdentityReport {
        instances: inst.len(),
        holds,
        arity_two: inst.iter().filter(|i| i.form.arity() == 2).count(),
        arity_three: inst.iter().filter(|i| i.form.arity() == 3).count(),
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DaggerSanityRow {
    pub oracle: String,
    pub k: usize,
    pub n: usize,
    pub d_exp: u32,
    pub m: usize,
    pub window_length: usize,
    pub min_count: usize,
    pub max_count: usize,
    pub max_types: usize,
    pub passes: bool,
}

/// Largest |V_k| scanned by the sanity sweep.
pub const SANITY_MAX_VERTICES: usize = 1 << 20;

/// Bad hypergraphs with d = n^dExp, for every in-guard (k, n, dExp) up to the vertex cap, plus constant oracles.
pub fn dagger_sanity(epsilon: f64) -> Result<Vec<DaggerSanityRow>> {
    let mut params = Vec::new();
    for k in 2..=4usize {
        for n in 2usize.. {
            let big_n = n.pow(k as u32 - 1);
            if big_n > boxvc::BAD_GRAPH_MAX_EXPONENT {
                break;
            }
            for d_exp in [1u32, 2] {
                let d = n.pow(d_exp);
                if (2 * d)
                    .checked_shl(big_n as u32)
                    .is_some_and(|v| v <= SANITY_MAX_VERTICES)
                {
                    params.push((k, n, d_exp, d));
                }
            }
        }
    }
    let mut rows = params
        .par_iter()
        .map(|&(k, n, d_exp, d)| {
            let g = boxvc::build_bad_hypergraph(k, d, n)?;
            let vk = *g.part_sizes().last().unwrap();
            let oracle = RelationOracle::hypergraph(g);
            let seqs = vec![(0..n).collect::<Vec<_>>(); k - 1];
            let long: Vec<usize> = (0..vk).collect();
            let r = typecount::dagger_check(&oracle, 0, &seqs, &long, d_exp, epsilon)?;
            Ok(sanity_row(
                "badGraph",
                k,
                n,
                d_exp,
                vk,
                &r,
                1 << n.pow(k as u32 - 1),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    for value in [false, true] {
        for (k, n) in [(2usize, 3usize), (3, 3)] {
            let m = 4 * n.pow(2);
            let mut universes = vec![1];
            universes.extend(std::iter::repeat_n(m, k));
            let oracle = RelationOracle::constant(universes, value);
            let seqs = vec![(0..n).collect::<Vec<_>>(); k - 1];
            let long: Vec<usize> = (0..m).collect();
            let r = typecount::dagger_check(&oracle, 0, &seqs, &long, 2, epsilon)?;
            rows.push(sanity_row(
                "constant",
                k,
                n,
                2,
                m,
                &r,
                1 << n.pow(k as u32 - 1),
            ));
        }
    }
    Ok(rows)
}

fn sanity_row(
    oracle: &str,
    k: usize,
    n: usize,
    d_exp: u32,
    m: usize,
    r: &typecount::TypeCountReport,
    max_types: usize,
) -> DaggerSanityRow {
    DaggerSanityRow {
        oracle: oracle.to_string(),
        k,
        n,
        d_exp,
        m,
        window_length: r.window_length,
        min_count: r
            .per_interval_type_counts
            .iter()
            .copied()
            .min()
            .unwrap_or(0),
        max_count: r
            .per_interval_type_counts
            .iter()
            .copied()
            .max()
            .unwrap_or(0),
        max_types,
        passes: r.passes,
    }
}

/// Universe size of every slot in the composition trials.
pub const COMPOSITION_UNIVERSE: usize = 8;

/// psi(y_0; y_1..y_k) = base(f_1(..), f_2(..)) with each f_t reading k of the k+1 slots.
#[derive(Clone, Debug)]
pub struct CompositionTrial {
    pub k: usize,
    pub n: usize,
    /// Base relation is x < y when true, x = y otherwise.
    pub base_is_order: bool,
    pub fns: Vec<LookupTable>,
    pub slot_map: Vec<Vec<usize>>,
    pub b: usize,
    pub seqs: Vec<Vec<usize>>,
    pub long_seq: Vec<usize>,
}

impl CompositionTrial {
    pub fn generate(n: usize, k: usize, seed: u64, index: u64) -> CompositionTrial {
        let u = COMPOSITION_UNIVERSE;
        let mut rng = stream(seed, index);
        let base_is_order = rng.gen::<bool>();
        let mut slot_map = Vec::new();
        let mut fns = Vec::new();
        for _ in 0..2 {
            let skip = rng.gen_range(0..=k);
            let slots: Vec<usize> = (0..=k).filter(|&s| s != skip).collect();
            fns.push(LookupTable::random(vec![u; k], u, rng.gen()));
            slot_map.push(slots);
        }
        let b = rng.gen_range(0..u);
        let seqs = (0..k - 1)
            .map(|_| (0..n).map(|_| rng.gen_range(0..u)).collect())
            .collect();
        let m = n.pow(2) * 4 * u;
        let long_seq = (0..m).map(|_| rng.gen_range(0..u)).collect();
        CompositionTrial {
            k,
            n,
            base_is_order,
            fns,
            slot_map,
            b,
            seqs,
            long_seq,
        }
    }

    pub fn oracle(&self) -> Result<RelationOracle> {
        let u = COMPOSITION_UNIVERSE;
        let base = RelationOracle::table(if self.base_is_order {
            RelationTable::order(u)
        } else {
            RelationTable::equality(u)
        });
        typecount::compose_relation(&base, &self.fns, &self.slot_map, &vec![u; self.k + 1])
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompositionRow {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub passes: usize,
    pub passes_unrounded: usize,
    pub pass_rate: f64,
    pub max_count_seen: usize,
    pub bound: usize,
}

/// Pass counts of the (dagger) check on seeded composed oracles, one row per (n, k).
pub fn composition_sweep(
    ns: &[usize],
    ks: &[usize],
    trials: usize,
    d_exp: u32,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<CompositionRow>> {
    let mut rows = Vec::new();
    for &n in ns {
        for &k in ks {
            let reports = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let t = CompositionTrial::generate(
                        n,
                        k,
                        seed ^ ((n as u64) << 32 | k as u64),
                        i as u64,
                    );
                    typecount::dagger_check(&t.oracle()?, t.b, &t.seqs, &t.long_seq, d_exp, epsilon)
                })
                .collect::<Result<Vec<_>>>()?;
            let passes = reports.iter().filter(|r| r.passes).count();
            rows.push(CompositionRow {
                n,
                k,
                trials,
                passes,
                passes_unrounded: reports.iter().filter(|r| r.passes_unrounded).count(),
                pass_rate: passes as f64 / trials.max(1) as f64,
                max_count_seen: reports
                    .iter()
                    .flat_map(|r| r.per_interval_type_counts.iter().copied())
                    .max()
                    .unwrap_or(0),
                bound: reports
                    .first()
                    .map_or(0, |r| 1usize << r.bound_exponent.min(63)),
            });
        }
    }
    Ok(rows)
}
