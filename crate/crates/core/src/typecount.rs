//! Counting phi-types realized in intervals, the finitary (dagger) criterion,
//! composition of relations with arbitrary function tables, and array family
//! cardinalities.
//!
//! A relation oracle has one slot per variable. For type counting, slot 0 is
//! the parameter b and slots 1..=k are y_1..y_k; elements of every slot are
//! integers below the slot's universe size.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxvc::{flat_index, unflatten, BitSet, LabelArray, PartiteHypergraph};
use crate::error::{Error, Result};
use crate::ffla::FVector;
use crate::mform::AlternatingForm;

/// A total function on a finite product, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LookupTable {
    pub universes: Vec<usize>,
    pub out_universe: usize,
    pub values: Vec<u32>,
}

impl LookupTable {
    pub fn new(universes: Vec<usize>, out_universe: usize, values: Vec<u32>) -> Result<Self> {
        let len: usize = universes.iter().product();
        if values.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "table has {} values for {len} inputs",
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v as usize >= out_universe) {
            return Err(Error::OutOfRange(format!(
                "table value {v} outside universe of size {out_universe}"
            )));
        }
        Ok(LookupTable {
            universes,
            out_universe,
            values,
        })
    }

    pub fn from_fn(
        universes: Vec<usize>,
        out_universe: usize,
        f: impl Fn(&[usize]) -> u32,
    ) -> Result<Self> {
        let len: usize = universes.iter().product();
        let values = (0..len).map(|i| f(&unflatten(&universes, i))).collect();
        LookupTable::new(universes, out_universe, values)
    }

    pub fn identity(universe: usize) -> Self {
        LookupTable {
            universes: vec![universe],
            out_universe: universe,
            values: (0..universe as u32).collect(),
        }
    }

    /// Uniform random values under a seed, in row-major input order.
    pub fn random(universes: Vec<usize>, out_universe: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len: usize = universes.iter().product();
        let values = (0..len)
            .map(|_| rng.gen_range(0..out_universe as u32))
            .collect();
        LookupTable {
            universes,
            out_universe,
            values,
        }
    }

    pub fn arity(&self) -> usize {
        self.universes.len()
    }

    #[inline]
    pub fn apply(&self, args: &[usize]) -> usize {
        self.values[flat_index(&self.universes, args)] as usize
    }
}

/// A boolean table on a finite product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    pub universes: Vec<usize>,
    pub bits: BitSet,
}

impl RelationTable {
    pub fn from_fn(universes: Vec<usize>, f: impl Fn(&[usize]) -> bool) -> Self {
        let len: usize = universes.iter().product();
        let mut bits = BitSet::new(len);
        for i in 0..len {
            if f(&unflatten(&universes, i)) {
                bits.insert(i);
            }
        }
        RelationTable { universes, bits }
    }

    /// x < y on [u].
    pub fn order(u: usize) -> Self {
        RelationTable::from_fn(vec![u, u], |a| a[0] < a[1])
    }

    /// x = y on [u].
    pub fn equality(u: usize) -> Self {
        RelationTable::from_fn(vec![u, u], |a| a[0] == a[1])
    }
}

type Predicate = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

/// How an oracle evaluates.
#[derive(Clone)]
pub enum Relation {
    Constant(bool),
    Table(RelationTable),
    /// Ignores slot 0; slots 1..=k are the parts of the hypergraph.
    Hypergraph(PartiteHypergraph),
    /// [<v_1, ..., v_k, b> = 0] with b in slot 0 and k = n - 1; vectors indexed in base p.
    FormZero(AlternatingForm),
    Composed(Box<Composition>),
    Closure(Predicate),
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Constant(b) => write!(f, "Constant({b})"),
            Relation::Table(t) => write!(f, "Table({:?})", t.universes),
            Relation::Hypergraph(g) => write!(f, "Hypergraph({:?})", g.part_sizes()),
            Relation::FormZero(form) => {
                write!(
                    f,
                    "FormZero(p={}, n={}, d={})",
                    form.field().p(),
                    form.arity(),
                    form.dim()
                )
            }
            Relation::Composed(c) => write!(f, "Composed({} functions)", c.fns.len()),
            Relation::Closure(_) => write!(f, "Closure"),
        }
    }
}

/// psi(y_0; y_1..y_k) = base(f_1(...), ..., f_D(...)).
#[derive(Clone, Debug)]
pub struct Composition {
    pub base: RelationOracle,
    /// Each table with the psi-slots feeding its arguments.
    pub fns: Vec<(LookupTable, Vec<usize>)>,
}

/// A total boolean function on a product of finite universes.
#[derive(Clone, Debug)]
pub struct RelationOracle {
    universes: Vec<usize>,
    relation: Relation,
}

/// Index of a vector of F_p^d read as base-p digits, most significant first.
pub fn vector_index(v: &FVector) -> usize {
    let p = v.field().p() as usize;
    v.coords().iter().fold(0, |acc, &c| acc * p + c as usize)
}

pub fn vector_from_index(form: &AlternatingForm, mut idx: usize) -> FVector {
    let p = form.field().p() as usize;
    let mut coords = vec![0u32; form.dim()];
    for c in coords.iter_mut().rev() {
        *c = (idx % p) as u32;
        idx /= p;
    }
    FVector::new(form.field(), coords)
}

impl RelationOracle {
    pub fn constant(universes: Vec<usize>, value: bool) -> Self {
        RelationOracle {
            universes,
            relation: Relation::Constant(value),
        }
    }

    pub fn table(table: RelationTable) -> Self {
        RelationOracle {
            universes: table.universes.clone(),
            relation: Relation::Table(table),
        }
    }

    /// Edge membership; the parameter slot has a single element.
    pub fn hypergraph(g: PartiteHypergraph) -> Self {
        let mut universes = vec![1];
        universes.extend_from_slice(g.part_sizes());
        RelationOracle {
            universes,
            relation: Relation::Hypergraph(g),
        }
    }

    /// phi(b; v_1..v_{n-1}) = [<v_1, ..., v_{n-1}, b> = 0]; needs p^d to fit the index space.
    pub fn form_zero(form: AlternatingForm) -> Result<Self> {
        let size = (form.field().p() as u128)
            .checked_pow(form.dim() as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::SizeGuard("p^d exceeds 2^24 vectors".into()))?
            as usize;
        Ok(RelationOracle {
            universes: vec![size; form.arity()],
            relation: Relation::FormZero(form),
        })
    }

    pub fn closure(
        universes: Vec<usize>,
        f: impl Fn(&[usize]) -> bool + Send + Sync + 'static,
    ) -> Self {
        RelationOracle {
            universes,
            relation: Relation::Closure(Arc::new(f)),
        }
    }

    pub fn universes(&self) -> &[usize] {
        &self.universes
    }

    pub fn slots(&self) -> usize {
        self.universes.len()
    }

    /// Number of object slots when slot 0 is the parameter.
    pub fn k(&self) -> usize {
        self.universes.len().saturating_sub(1)
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn evaluate(&self, args: &[usize]) -> bool {
        debug_assert_eq!(args.len(), self.universes.len());
        match &self.relation {
            Relation::Constant(b) => *b,
            Relation::Table(t) => t.bits.contains(flat_index(&t.universes, args)),
            Relation::Hypergraph(g) => g.has_edge(&args[1..]),
            Relation::FormZero(form) => {
                let mut vs: Vec<FVector> = args[1..]
                    .iter()
                    .map(|&i| vector_from_index(form, i))
                    .collect();
                vs.push(vector_from_index(form, args[0]));
                form.eval(&vs).expect("shapes agree").is_zero()
            }
            Relation::Composed(c) => {
                let mut buf = Vec::new();
                let xs: Vec<usize> = c
                    .fns
                    .iter()
                    .map(|(t, slots)| {
                        buf.clear();
                        buf.extend(slots.iter().map(|&s| args[s]));
                        t.apply(&buf)
                    })
                    .collect();
                c.base.evaluate(&xs)
            }
            Relation::Closure(f) => f(args),
        }
    }

    fn check_args(&self, slot: usize, xs: &[usize]) -> Result<()> {
        if let Some(&x) = xs.iter().find(|&&x| x >= self.universes[slot]) {
            return Err(Error::OutOfRange(format!(
                "element {x} in slot {slot} of universe size {}",
                self.universes[slot]
            )));
        }
        Ok(())
    }
}

/// Composes a base relation with function tables.
///
/// `slot_map[t]` lists, for each argument of `fns[t]`, which of y_0..y_k feeds
/// it; `universes` gives the carriers of y_0..y_k. Function t must land in the
/// base's slot t, and each function takes between 1 and k arguments.
pub fn compose_relation(
    base: &RelationOracle,
    fns: &[LookupTable],
    slot_map: &[Vec<usize>],
    universes: &[usize],
) -> Result<RelationOracle> {
    if fns.len() != base.slots() {
        return Err(Error::ShapeMismatch(format!(
            "{} functions for a base relation with {} slots",
            fns.len(),
            base.slots()
        )));
    }
    if slot_map.len() != fns.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} slot lists for {} functions",
            slot_map.len(),
            fns.len()
        )));
    }
    if universes.len() < 2 {
        return Err(Error::ShapeMismatch(
            "need slots y_0 and at least y_1".into(),
        ));
    }
    let k = universes.len() - 1;
    for (t, (f, slots)) in fns.iter().zip(slot_map).enumerate() {
        if f.arity() == 0 || f.arity() > k {
            return Err(Error::ShapeMismatch(format!(
                "function {t} has arity {}, allowed 1..={k}",
                f.arity()
            )));
        }
        if slots.len() != f.arity() {
            return Err(Error::ShapeMismatch(format!(
                "function {t} takes {} arguments but {} slots are mapped",
                f.arity(),
                slots.len()
            )));
        }
        for (a, &s) in slots.iter().enumerate() {
            if s > k {
                return Err(Error::OutOfRange(format!("slot {s} for function {t}")));
            }
            if f.universes[a] != universes[s] {
                return Err(Error::ShapeMismatch(format!(
                    "argument {a} of function {t} expects universe {} but slot {s} has {}",
                    f.universes[a], universes[s]
                )));
            }
        }
        if f.out_universe != base.universes[t] {
            return Err(Error::ShapeMismatch(format!(
                "function {t} lands in universe {} but base slot {t} has {}",
                f.out_universe, base.universes[t]
            )));
        }
    }
    Ok(RelationOracle {
        universes: universes.to_vec(),
        relation: Relation::Composed(Box::new(Composition {
            base: base.clone(),
            fns: fns.iter().cloned().zip(slot_map.iter().cloned()).collect(),
        })),
    })
}

fn check_type_inputs(
    oracle: &RelationOracle,
    b: usize,
    seqs: &[Vec<usize>],
    long: &[usize],
) -> Result<()> {
    if oracle.slots() != seqs.len() + 2 {
        return Err(Error::ShapeMismatch(format!(
            "oracle has {} slots but {} sequences plus parameter and variable were given",
            oracle.slots(),
            seqs.len()
        )));
    }
    oracle.check_args(0, &[b])?;
    for (i, s) in seqs.iter().enumerate() {
        oracle.check_args(i + 1, s)?;
    }
    oracle.check_args(oracle.slots() - 1, long)
}

/// Trace of one element c over I_1 x ... x I_{k-1}, as packed bits in row-major order.
fn trace_of(oracle: &RelationOracle, b: usize, seqs: &[Vec<usize>], c: usize) -> Vec<u64> {
    let sizes: Vec<usize> = seqs.iter().map(Vec::len).collect();
    let cells: usize = sizes.iter().product();
    let mut out = vec![0u64; cells.div_ceil(64).max(1)];
    let mut args = vec![0usize; seqs.len() + 2];
    args[0] = b;
    args[seqs.len() + 1] = c;
    for i in 0..cells {
        let pos = unflatten(&sizes, i);
        for (j, &q) in pos.iter().enumerate() {
            args[j + 1] = seqs[j][q];
        }
        if oracle.evaluate(&args) {
            out[i >> 6] |= 1 << (i & 63);
        }
    }
    out
}

/// Number of distinct phi-types over b and I_1 x ... x I_{k-1} realized by elements of `window`.
pub fn phi_types_realized(
    oracle: &RelationOracle,
    b: usize,
    seqs: &[Vec<usize>],
    window: &[usize],
) -> Result<usize> {
    check_type_inputs(oracle, b, seqs, window)?;
    let traces: HashSet<Vec<u64>> = window
        .par_iter()
        .map(|&c| trace_of(oracle, b, seqs, c))
        .collect();
    Ok(traces.len())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DaggerParameters {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    /// f(n) = n^dExp when given; `None` for a callback f.
    pub d_exp: Option<u32>,
    pub f_of_n: usize,
    pub epsilon: f64,
}

/// Outcome of scanning the intervals required by the (dagger) criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TypeCountReport {
    pub parameters: DaggerParameters,
    /// Minimal qualifying length ceil(m / f(n) - 1), at least 0.
    pub window_length: usize,
    pub intervals_scanned: usize,
    /// Type count of the window starting at each position, left to right.
    pub per_interval_type_counts: Vec<usize>,
    /// The bound is 2^boundExponent with boundExponent = ceil(n^(k-1-eps)).
    pub bound_exponent: u32,
    /// n^(k-1-eps) before rounding.
    pub real_exponent: f64,
    /// First passing window as [start, end).
    pub pass_interval: Option<(usize, usize)>,
    pub passes: bool,
    /// Some window has count < 2^(n^(k-1-eps)) without rounding the exponent up.
    pub passes_unrounded: bool,
}

impl TypeCountReport {
    pub fn csv_header() -> &'static str {
        "k,n,m,f_of_n,epsilon,window_length,intervals,min_count,max_count,bound_exponent,passes,passes_unrounded"
    }

    pub fn csv_row(&self) -> String {
        let p = &self.parameters;
        let min = self
            .per_interval_type_counts
            .iter()
            .min()
            .copied()
            .unwrap_or(0);
        let max = self
            .per_interval_type_counts
            .iter()
            .max()
            .copied()
            .unwrap_or(0);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            p.k,
            p.n,
            p.m,
            p.f_of_n,
            p.epsilon,
            self.window_length,
            self.intervals_scanned,
            min,
            max,
            self.bound_exponent,
            self.passes,
            self.passes_unrounded
        )
    }
}

fn below_pow2(count: usize, exp: u32) -> bool {
    exp >= usize::BITS || count < 1usize << exp
}

/// (dagger) with f(n) = n^dExp.
pub fn dagger_check(
    oracle: &RelationOracle,
    b: usize,
    seqs: &[Vec<usize>],
    long_seq: &[usize],
    d_exp: u32,
    epsilon: f64,
) -> Result<TypeCountReport> {
    let mut report = dagger_check_with(
        oracle,
        b,
        seqs,
        long_seq,
        |n| n.saturating_pow(d_exp),
        epsilon,
    )?;
    report.parameters.d_exp = Some(d_exp);
    Ok(report)
}

/// (dagger) for a general f.
///
/// Only windows of the minimal qualifying length are scanned: a longer window
/// contains one of them and realizes at least as many types.
pub fn dagger_check_with(
    oracle: &RelationOracle,
    b: usize,
    seqs: &[Vec<usize>],
    long_seq: &[usize],
    f: impl Fn(usize) -> usize,
    epsilon: f64,
) -> Result<TypeCountReport> {
    check_type_inputs(oracle, b, seqs, long_seq)?;
    let k = seqs.len() + 1;
    if k < 2 {
        return Err(Error::InvalidInput("the criterion needs k >= 2".into()));
    }
    let n = seqs[0].len();
    if seqs.iter().any(|s| s.len() != n) {
        return Err(Error::ShapeMismatch(
            "sequences I_1..I_{k-1} differ in length".into(),
        ));
    }
    let m = long_seq.len();
    if n > m {
        return Err(Error::InvalidInput(format!("n = {n} exceeds m = {m}")));
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let fn_ = f(n).max(1);
    // ceil(m / f - 1) clamped at 0
    let window = m.saturating_sub(1) / fn_;
    let real_exponent = (n as f64).powf(k as f64 - 1.0 - epsilon);
    let bound_exponent = (real_exponent - 1e-9).ceil().max(0.0) as u32;
    let parameters = DaggerParameters {
        k,
        n,
        m,
        d_exp: None,
        f_of_n: fn_,
        epsilon,
    };

    let counts: Vec<usize> = if window == 0 {
        vec![0]
    } else {
        let traces: Vec<Vec<u64>> = long_seq
            .par_iter()
            .map(|&c| trace_of(oracle, b, seqs, c))
            .collect();
        let mut ids: HashMap<&[u64], usize> = HashMap::new();
        let ids: Vec<usize> = traces
            .iter()
            .map(|t| {
                let next = ids.len();
                *ids.entry(t.as_slice()).or_insert(next)
            })
            .collect();
        let mut multiplicity: HashMap<usize, usize> = HashMap::new();
        let mut distinct = 0usize;
        let mut out = Vec::with_capacity(m - window + 1);
        for (i, &id) in ids.iter().enumerate() {
            let e = multiplicity.entry(id).or_insert(0);
            if *e == 0 {
                distinct += 1;
            }
            *e += 1;
            if i >= window {
                let old = ids[i - window];
                let e = multiplicity.get_mut(&old).expect("present");
                *e -= 1;
                if *e == 0 {
                    distinct -= 1;
                }
            }
            if i + 1 >= window {
                out.push(distinct);
            }
        }
        out
    };
    let pass_start = counts.iter().position(|&c| below_pow2(c, bound_exponent));
    let passes_unrounded = counts
        .iter()
        .any(|&c| c == 0 || (c as f64).log2() < real_exponent);
    Ok(TypeCountReport {
        parameters,
        window_length: window,
        intervals_scanned: counts.len(),
        per_interval_type_counts: counts,
        bound_exponent,
        real_exponent,
        pass_interval: pass_start.map(|s| (s, s + window)),
        passes: pass_start.is_some(),
        passes_unrounded,
    })
}

/// Result of counting the sets S^{phi,delta}_{zeta^1..zeta^k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ArrayFamilyCount {
    pub count: usize,
    pub exact: bool,
    pub assignments_examined: u128,
    pub assignment_space: Option<u128>,
}

/// Number of ζ-assignments: each ζ^t has n^(k-1) entries from universe t.
fn assignment_space(universes: &[usize], n: usize, k: usize) -> Option<u128> {
    let entries = (n as u128).checked_pow(k as u32 - 1)?;
    universes[..k].iter().try_fold(1u128, |acc, &u| {
        let e = u32::try_from(entries).ok()?;
        acc.checked_mul((u as u128).checked_pow(e)?)
    })
}

/// The set S for one assignment, as a bitset over [n]^k.
fn array_set(
    oracle: &RelationOracle,
    delta: &LabelArray,
    zetas: &[Vec<usize>],
    n: usize,
) -> BitSet {
    let k = delta.sizes.len();
    let cells = delta.labels.len();
    let mut out = BitSet::new(cells);
    let mut args = vec![0usize; k + 1];
    let sub_sizes = vec![n; k - 1];
    let mut sub = Vec::with_capacity(k - 1);
    for i in 0..cells {
        let idx = unflatten(&delta.sizes, i);
        for t in 0..k {
            sub.clear();
            sub.extend(
                idx.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != t)
                    .map(|(_, &x)| x),
            );
            args[t] = zetas[t][flat_index(&sub_sizes, &sub)];
        }
        args[k] = delta.labels[i] as usize;
        if oracle.evaluate(&args) {
            out.insert(i);
        }
    }
    out
}

fn decode_assignment(universes: &[usize], entries: usize, mut idx: u128) -> Vec<Vec<usize>> {
    let k = universes.len();
    let mut zetas = vec![vec![0usize; entries]; k];
    for t in (0..k).rev() {
        for e in (0..entries).rev() {
            let u = universes[t] as u128;
            zetas[t][e] = (idx % u) as usize;
            idx /= u;
        }
    }
    zetas
}

/// Cardinality of the family of sets S^{phi,delta}_{zeta^1..zeta^k} over all ζ-arrays.
///
/// `delta` is indexed by [n]^k and fills the last oracle slot; ζ^t is indexed
/// by the index tuple with coordinate t removed and fills slot t-1. Exhaustive
/// when the assignment space fits `budget`, otherwise `budget` seeded samples.
pub fn array_family_cardinality(
    oracle: &RelationOracle,
    delta: &LabelArray,
    budget: u128,
    seed: u64,
) -> Result<ArrayFamilyCount> {
    let k = delta.sizes.len();
    if k == 0 || oracle.slots() != k + 1 {
        return Err(Error::ShapeMismatch(format!(
            "{}-dimensional delta needs an oracle with {} slots, got {}",
            k,
            k + 1,
            oracle.slots()
        )));
    }
    let n = delta.sizes[0];
    if delta.sizes.iter().any(|&s| s != n) {
        return Err(Error::ShapeMismatch("delta must be a cube [n]^k".into()));
    }
    let labels: Vec<usize> = delta.labels.iter().map(|&l| l as usize).collect();
    oracle.check_args(k, &labels)?;
    let entries = n.pow(k as u32 - 1);
    let zeta_universes = &oracle.universes()[..k];
    let space = assignment_space(oracle.universes(), n, k);
    let exact = space.is_some_and(|s| s <= budget);
    let sets: HashSet<BitSet> = if exact {
        let total = space.unwrap();
        (0..total as u64)
            .into_par_iter()
            .map(|i| {
                let z = decode_assignment(zeta_universes, entries, i as u128);
                array_set(oracle, delta, &z, n)
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<Vec<Vec<usize>>> = (0..budget)
            .map(|_| {
                zeta_universes
                    .iter()
                    .map(|&u| (0..entries).map(|_| rng.gen_range(0..u)).collect())
                    .collect()
            })
            .collect();
        draws
            .par_iter()
            .map(|z| array_set(oracle, delta, z, n))
            .collect()
    };
    Ok(ArrayFamilyCount {
        count: sets.len(),
        exact,
        assignments_examined: if exact { space.unwrap() } else { budget },
        assignment_space: space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxvc::build_bad_hypergraph;

    #[test]
    fn constant_oracle_has_one_type() {
        let o = RelationOracle::constant(vec![1, 4, 4], false);
        assert_eq!(
            phi_types_realized(&o, 0, &[vec![0, 1, 2]], &[0, 1, 2, 3]).unwrap(),
            1
        );
        let r = dagger_check(
            &o,
            0,
            &[vec![0, 1, 2]],
            &(0..4).cycle().take(40).collect::<Vec<_>>(),
            2,
            0.2,
        )
        .unwrap();
        assert!(r.passes);
        assert_eq!(r.pass_interval, Some((0, 4)));
    }

    #[test]
    fn singleton_window_has_one_type() {
        let o = RelationOracle::table(RelationTable::from_fn(vec![1, 3, 3], |a| a[1] <= a[2]));
        assert_eq!(
            phi_types_realized(&o, 0, &[vec![0, 1, 2]], &[1]).unwrap(),
            1
        );
    }

    #[test]
    fn bad_hypergraph_realizes_all_types() {
        let (k, d, n) = (2, 1, 2);
        let g = build_bad_hypergraph(k, d, n).unwrap();
        let vk = g.part_sizes()[1];
        let o = RelationOracle::hypergraph(g);
        let seqs = vec![(0..n).collect::<Vec<_>>()];
        let len = vk / d - 1;
        for s in 0..=vk - len {
            let w: Vec<usize> = (s..s + len).collect();
            assert_eq!(phi_types_realized(&o, 0, &seqs, &w).unwrap(), 4);
        }
    }

    #[test]
    fn bad_hypergraph_fails_dagger() {
        let (k, d_exp, n) = (2u32, 2u32, 2usize);
        let g = build_bad_hypergraph(k as usize, n.pow(d_exp), n).unwrap();
        let vk = g.part_sizes()[1];
        let o = RelationOracle::hypergraph(g);
        let r = dagger_check(
            &o,
            0,
            &[vec![0, 1]],
            &(0..vk).collect::<Vec<_>>(),
            d_exp,
            0.2,
        )
        .unwrap();
        assert!(!r.passes);
        assert!(r.per_interval_type_counts.iter().all(|&c| c == 4));
    }

    #[test]
    fn window_length_formula() {
        let o = RelationOracle::constant(vec![1, 3, 50], true);
        let seqs = [vec![0, 1, 2]];
        // m = 9: 9/9 - 1 = 0, so the empty window qualifies
        let r = dagger_check(&o, 0, &seqs, &(0..9).collect::<Vec<_>>(), 2, 0.2).unwrap();
        assert_eq!(r.window_length, 0);
        assert!(r.passes);
        let r = dagger_check(&o, 0, &seqs, &(0..10).collect::<Vec<_>>(), 2, 0.2).unwrap();
        assert_eq!(r.window_length, 1);
        let r = dagger_check(&o, 0, &seqs, &(0..37).collect::<Vec<_>>(), 2, 0.2).unwrap();
        assert_eq!(r.window_length, 4);
        assert_eq!(r.intervals_scanned, 34);
    }

    #[test]
    fn identity_composition_is_base() {
        let base = RelationOracle::table(RelationTable::order(5));
        let psi = compose_relation(
            &base,
            &[LookupTable::identity(5), LookupTable::identity(5)],
            &[vec![0], vec![1]],
            &[5, 5],
        )
        .unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(psi.evaluate(&[a, b]), base.evaluate(&[a, b]));
            }
        }
    }

    #[test]
    fn composition_rejects_bad_shapes() {
        let base = RelationOracle::table(RelationTable::order(4));
        let id = LookupTable::identity(4);
        assert!(compose_relation(&base, std::slice::from_ref(&id), &[vec![0]], &[4, 4]).is_err());
        assert!(compose_relation(
            &base,
            &[id.clone(), id.clone()],
            &[vec![0], vec![2]],
            &[4, 4]
        )
        .is_err());
        let wide = LookupTable::random(vec![4, 4, 4], 4, 1);
        assert!(compose_relation(
            &base,
            &[id.clone(), wide],
            &[vec![0], vec![0, 1, 1]],
            &[4, 4]
        )
        .is_err());
        assert!(
            compose_relation(&base, &[id.clone(), id], &[vec![0], vec![0, 1]], &[4, 4]).is_err()
        );
    }

    #[test]
    fn array_family_of_constant_is_one() {
        let o = RelationOracle::constant(vec![2, 2, 2], true);
        let delta = LabelArray::new(vec![2, 2], vec![0, 1, 1, 0]).unwrap();
        let r = array_family_cardinality(&o, &delta, 1_000_000, 0).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.exact);
        assert_eq!(r.assignment_space, Some(16));
    }

    #[test]
    fn form_zero_oracle_matches_eval() {
        use crate::ffla::Fp;
        let f = Fp::new(2).unwrap();
        let form = AlternatingForm::symplectic(f, 4).unwrap();
        let o = RelationOracle::form_zero(form.clone()).unwrap();
        for b in 0..16 {
            for v in 0..16 {
                let want = form
                    .eval(&[vector_from_index(&form, v), vector_from_index(&form, b)])
                    .unwrap()
                    .is_zero();
                assert_eq!(o.evaluate(&[b, v]), want);
            }
        }
        assert_eq!(vector_index(&vector_from_index(&form, 11)), 11);
    }

    #[test]
    fn csv_row_shape() {
        let o = RelationOracle::constant(vec![1, 3, 3], true);
        let r = dagger_check(
            &o,
            0,
            &[vec![0, 1, 2]],
            &(0..3).cycle().take(30).collect::<Vec<_>>(),
            2,
            0.2,
        )
        .unwrap();
        assert_eq!(
            r.csv_row().split(',').count(),
            TypeCountReport::csv_header().split(',').count()
        );
    }
}
