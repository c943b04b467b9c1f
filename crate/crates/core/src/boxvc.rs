//! Set families over product boxes, box shattering and VC_k dimension.
//!
//! A family over [n_1] x ... x [n_k] is a list of bitsets over the flattened
//! product. Flattening is row-major with coordinate 1 outermost, so the cell
//! (c_1, ..., c_k) sits at ((c_1 * n_2 + c_2) * n_3 + c_3) ... .

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, increasing_tuples};
use crate::error::{Error, Result};

/// Fixed-length bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut b = BitSet::new(len);
        for i in idx {
            if i >= len {
                return Err(Error::OutOfRange(format!(
                    "bit {i} in a set of length {len}"
                )));
            }
            b.insert(i);
        }
        Ok(b)
    }

    pub fn from_words(len: usize, words: Vec<u64>) -> Result<Self> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::ShapeMismatch(format!(
                "{} words for {len} bits",
                words.len()
            )));
        }
        let b = BitSet { len, words };
        if !len.is_multiple_of(64) && b.words.last().is_some_and(|&w| w >> (len % 64) != 0) {
            return Err(Error::OutOfRange("bits set past the end".into()));
        }
        Ok(b)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }
}

/// Row-major flat index of a cell.
pub fn flat_index(sizes: &[usize], cell: &[usize]) -> usize {
    cell.iter().zip(sizes).fold(0, |acc, (&c, &n)| acc * n + c)
}

/// Inverse of `flat_index`.
pub fn unflatten(sizes: &[usize], mut idx: usize) -> Vec<usize> {
    let mut cell = vec![0; sizes.len()];
    for (slot, &n) in cell.iter_mut().zip(sizes).rev() {
        *slot = idx % n;
        idx /= n;
    }
    cell
}

/// A product of one index set per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Box {
    pub parts: Vec<Vec<usize>>,
}

impl Box {
    pub fn new(parts: Vec<Vec<usize>>) -> Self {
        Box { parts }
    }

    pub fn k(&self) -> usize {
        self.parts.len()
    }

    pub fn cell_count(&self) -> usize {
        self.parts.iter().map(Vec::len).product()
    }

    /// Flat indices of the box's cells, lex order.
    pub fn cells(&self, sizes: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cell_count());
        let k = self.parts.len();
        if self.parts.iter().any(Vec::is_empty) {
            return out;
        }
        let mut pos = vec![0usize; k];
        let mut cell = vec![0usize; k];
        loop {
            for i in 0..k {
                cell[i] = self.parts[i][pos[i]];
            }
            out.push(flat_index(sizes, &cell));
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                pos[i] += 1;
                if pos[i] < self.parts[i].len() {
                    break;
                }
                pos[i] = 0;
            }
        }
    }

    fn validate(&self, sizes: &[usize]) -> Result<()> {
        if self.parts.len() != sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "box of arity {} over a family of arity {}",
                self.parts.len(),
                sizes.len()
            )));
        }
        for (part, &n) in self.parts.iter().zip(sizes) {
            if part.iter().any(|&i| i >= n) {
                return Err(Error::OutOfRange(format!(
                    "box part {part:?} exceeds size {n}"
                )));
            }
            if part.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(format!(
                    "box part {part:?} is not strictly increasing"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    k: usize,
    sizes: Vec<usize>,
    sets: Vec<Vec<usize>>,
}

/// A family of subsets of a product box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct BoxFamily {
    sizes: Vec<usize>,
    sets: Vec<BitSet>,
}

impl TryFrom<FamilyRepr> for BoxFamily {
    type Error = Error;
    fn try_from(r: FamilyRepr) -> Result<Self> {
        if r.k != r.sizes.len() {
            return Err(Error::ShapeMismatch(format!(
                "k = {} but {} sizes",
                r.k,
                r.sizes.len()
            )));
        }
        let len: usize = r.sizes.iter().product();
        let sets = r
            .sets
            .into_iter()
            .map(|s| BitSet::from_indices(len, s))
            .collect::<Result<Vec<_>>>()?;
        BoxFamily::new(r.sizes, sets)
    }
}

impl From<BoxFamily> for FamilyRepr {
    fn from(f: BoxFamily) -> Self {
        FamilyRepr {
            k: f.sizes.len(),
            sets: f.sets.iter().map(|s| s.ones().collect()).collect(),
            sizes: f.sizes,
        }
    }
}

const MAGIC: &[u8; 4] = b"MFBX";
const FORMAT_VERSION: u8 = 1;

impl BoxFamily {
    /// Builds a family, dropping repeated sets (first occurrence kept).
    pub fn new(sizes: Vec<usize>, sets: Vec<BitSet>) -> Result<Self> {
        let len: usize = sizes.iter().product();
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(sets.len());
        for s in sets {
            if s.len() != len {
                return Err(Error::ShapeMismatch(format!(
                    "set of length {} over a box with {len} cells",
                    s.len()
                )));
            }
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        Ok(BoxFamily { sizes, sets: out })
    }

    /// Builds a family from lists of cells given as coordinate tuples.
    pub fn from_cells(sizes: Vec<usize>, sets: &[Vec<Vec<usize>>]) -> Result<Self> {
        let len: usize = sizes.iter().product();
        let mut bits = Vec::with_capacity(sets.len());
        for s in sets {
            let mut b = BitSet::new(len);
            for cell in s {
                if cell.len() != sizes.len() || cell.iter().zip(&sizes).any(|(&c, &n)| c >= n) {
                    return Err(Error::OutOfRange(format!("cell {cell:?}")));
                }
                b.insert(flat_index(&sizes, cell));
            }
            bits.push(b);
        }
        BoxFamily::new(sizes, bits)
    }

    /// The full power set of the box; only for at most 20 cells.
    pub fn powerset(sizes: Vec<usize>) -> Result<Self> {
        let len: usize = sizes.iter().product();
        if len > 20 {
            return Err(Error::SizeGuard(format!("power set of {len} cells")));
        }
        let sets = (0u64..1 << len)
            .map(|m| BitSet::from_words(len, vec![m]).expect("fits one word"))
            .collect();
        BoxFamily::new(sizes, sets)
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn sets(&self) -> &[BitSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn is_subfamily_of(&self, other: &BoxFamily) -> bool {
        let theirs: HashSet<&BitSet> = other.sets.iter().collect();
        self.sizes == other.sizes && self.sets.iter().all(|s| theirs.contains(s))
    }

    /// Binary form: magic, version, k, reserved u16, k sizes (u32 LE), count (u32 LE), packed words (u64 LE).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.push(FORMAT_VERSION);
        out.push(self.sizes.len() as u8);
        out.extend_from_slice(&0u16.to_le_bytes());
        for &n in &self.sizes {
            out.extend_from_slice(&(n as u32).to_le_bytes());
        }
        out.extend_from_slice(&(self.sets.len() as u32).to_le_bytes());
        for s in &self.sets {
            for w in s.words() {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |why: &str| Error::InvalidInput(format!("box family file: {why}"));
        if bytes.len() < 8 || &bytes[..4] != MAGIC {
            return Err(bad("missing magic"));
        }
        if bytes[4] != FORMAT_VERSION {
            return Err(bad("unsupported version"));
        }
        let k = bytes[5] as usize;
        let mut at = 8;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = bytes.get(at..at + n).ok_or_else(|| bad("truncated"))?;
            at += n;
            Ok(s)
        };
        let mut sizes = Vec::with_capacity(k);
        for _ in 0..k {
            sizes.push(u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize);
        }
        let count = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
        let len: usize = sizes.iter().product();
        let nwords = len.div_ceil(64);
        let mut sets = Vec::with_capacity(count);
        for _ in 0..count {
            let words = (0..nwords)
                .map(|_| Ok(u64::from_le_bytes(take(8)?.try_into().unwrap())))
                .collect::<Result<Vec<_>>>()?;
            sets.push(BitSet::from_words(len, words)?);
        }
        if at != bytes.len() {
            return Err(bad("trailing bytes"));
        }
        BoxFamily::new(sizes, sets)
    }
}

fn shatters_cells(fam: &BoxFamily, cells: &[usize]) -> bool {
    let m = cells.len();
    if m >= 64 || (fam.sets.len() as u128) < 1u128 << m {
        return false;
    }
    let want = 1usize << m;
    let mut traces = HashSet::with_capacity(want);
    for s in &fam.sets {
        let t = cells
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &c)| acc | (s.contains(c) as u64) << i);
        traces.insert(t);
        if traces.len() == want {
            return true;
        }
    }
    false
}

/// Whether every subset of the box is the trace of some member of the family.
pub fn shatters(fam: &BoxFamily, bx: &Box) -> Result<bool> {
    bx.validate(&fam.sizes)?;
    Ok(shatters_cells(fam, &bx.cells(&fam.sizes)))
}

/// Number of distinct traces of the family on a box.
pub fn trace_count(fam: &BoxFamily, bx: &Box) -> Result<usize> {
    bx.validate(&fam.sizes)?;
    let cells = bx.cells(&fam.sizes);
    let traces: HashSet<Vec<bool>> = fam
        .sets
        .iter()
        .map(|s| cells.iter().map(|&c| s.contains(c)).collect())
        .collect();
    Ok(traces.len())
}

/// Lexicographically first shattered d-box (coordinate 1 outermost), if any.
pub fn sauer_shelah_search(fam: &BoxFamily, d: usize) -> Option<Box> {
    let choices: Vec<Vec<Vec<usize>>> =
        fam.sizes.iter().map(|&n| increasing_tuples(n, d)).collect();
    if choices.iter().any(Vec::is_empty) {
        return None;
    }
    let cells = d.checked_pow(fam.k() as u32).unwrap_or(usize::MAX);
    if cells >= 64 || (fam.len() as u128) < 1u128 << cells {
        return None;
    }
    let radices: Vec<usize> = choices.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    (0..total).into_par_iter().find_map_first(|i| {
        let digits = unflatten(&radices, i);
        let bx = Box::new(
            digits
                .iter()
                .zip(&choices)
                .map(|(&j, c)| c[j].clone())
                .collect(),
        );
        shatters_cells(fam, &bx.cells(&fam.sizes)).then_some(bx)
    })
}

/// Largest d such that some d-box is shattered; 0 when no 1-box is.
pub fn vc_k(fam: &BoxFamily) -> usize {
    let max = fam.sizes.iter().copied().min().unwrap_or(0);
    let mut best = 0;
    for d in 1..=max {
        if sauer_shelah_search(fam, d).is_some() {
            best = d;
        } else {
            break;
        }
    }
    best
}

/// Ordered k-partite hypergraph with one vertex per part in each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartiteHypergraph {
    part_sizes: Vec<usize>,
    adj: BitSet,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct HypergraphRepr {
    k: usize,
    part_sizes: Vec<usize>,
    edges: Vec<Vec<usize>>,
}

impl Serialize for PartiteHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HypergraphRepr {
            k: self.k(),
            part_sizes: self.part_sizes.clone(),
            edges: self.edges(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartiteHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HypergraphRepr::deserialize(d)?;
        if r.k != r.part_sizes.len() {
            return Err(serde::de::Error::custom("k does not match partSizes"));
        }
        let mut g = PartiteHypergraph::empty(r.part_sizes).map_err(serde::de::Error::custom)?;
        for e in r.edges {
            g.add_edge(&e).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}

/// Hard cap on the number of potential edges held in memory.
pub const MAX_CELLS: usize = 1 << 30;

impl PartiteHypergraph {
    pub fn empty(part_sizes: Vec<usize>) -> Result<Self> {
        let cells = part_sizes
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|&c| c <= MAX_CELLS)
            .ok_or_else(|| Error::SizeGuard(format!("product of parts {part_sizes:?}")))?;
        Ok(PartiteHypergraph {
            part_sizes,
            adj: BitSet::new(cells),
        })
    }

    pub fn k(&self) -> usize {
        self.part_sizes.len()
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    fn check(&self, e: &[usize]) -> Result<()> {
        if e.len() != self.k() || e.iter().zip(&self.part_sizes).any(|(&v, &n)| v >= n) {
            return Err(Error::OutOfRange(format!(
                "edge {e:?} for parts {:?}",
                self.part_sizes
            )));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, e: &[usize]) -> Result<()> {
        self.check(e)?;
        self.adj.insert(flat_index(&self.part_sizes, e));
        Ok(())
    }

    #[inline]
    pub fn has_edge(&self, e: &[usize]) -> bool {
        self.adj.contains(flat_index(&self.part_sizes, e))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones()
    }

    /// All edges in lex order.
    pub fn edges(&self) -> Vec<Vec<usize>> {
        self.adj
            .ones()
            .map(|i| unflatten(&self.part_sizes, i))
            .collect()
    }
}

/// Largest allowed n^(k-1) for the adversarial hypergraph.
pub const BAD_GRAPH_MAX_EXPONENT: usize = 20;

/// The adversarial k-partite hypergraph R^{k-1}_{d,n}.
///
/// Parts 1..k-1 are [n]; part k is [2d] x [2^N] with N = n^(k-1), read in
/// lex order as c = t * 2^N + a. Subset a of [n]^(k-1) is the binary counter
/// over the row-major flattening, so (a_1, ..., a_{k-1}, c) is an edge iff
/// bit flat(a_1..a_{k-1}) of a is set.
pub fn build_bad_hypergraph(k: usize, d: usize, n: usize) -> Result<PartiteHypergraph> {
    build_bad_hypergraph_with(k, d, n, None)
}

/// Same construction with subset `a` replaced by `enumeration[a]`, which must
/// be a permutation of 0..2^N.
pub fn build_bad_hypergraph_with(
    k: usize,
    d: usize,
    n: usize,
    enumeration: Option<&[u64]>,
) -> Result<PartiteHypergraph> {
    if k < 1 || d < 1 || n < 1 {
        return Err(Error::InvalidInput("k, d and n must be positive".into()));
    }
    let big_n = n
        .checked_pow(k as u32 - 1)
        .filter(|&x| x <= BAD_GRAPH_MAX_EXPONENT)
        .ok_or_else(|| {
            Error::SizeGuard(format!(
                "n^(k-1) must be at most {BAD_GRAPH_MAX_EXPONENT} (k={k}, n={n})"
            ))
        })?;
    let block = 1usize << big_n;
    if let Some(e) = enumeration {
        let mut seen = vec![false; block];
        if e.len() != block
            || !e
                .iter()
                .all(|&x| (x as usize) < block && !std::mem::replace(&mut seen[x as usize], true))
        {
            return Err(Error::InvalidInput(format!(
                "enumeration must be a permutation of 0..{block}"
            )));
        }
    }
    let subset = |a: usize| enumeration.map_or(a as u64, |e| e[a]);
    let mut sizes = vec![n; k - 1];
    sizes.push(2 * d * block);
    let mut g = PartiteHypergraph::empty(sizes)?;
    let vk = 2 * d * block;
    for f in 0..big_n {
        for c in 0..vk {
            if subset(c % block) >> f & 1 == 1 {
                g.adj.insert(f * vk + c);
            }
        }
    }
    Ok(g)
}

/// Each potential edge independently with probability 1/2, seeded.
pub fn random_partite_extension_graph(
    part_sizes: Vec<usize>,
    seed: u64,
) -> Result<PartiteHypergraph> {
    let mut g = PartiteHypergraph::empty(part_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..g.adj.len() {
        if rng.gen::<bool>() {
            g.adj.insert(i);
        }
    }
    Ok(g)
}

/// Fraction of sampled extension demands met.
///
/// A demand picks a part j and `demand` distinct tuples from the other parts,
/// each marked in or out; it is met when some vertex of part j forms an edge
/// exactly with the tuples marked in.
pub fn extension_score(g: &PartiteHypergraph, demand: usize, samples: usize, seed: u64) -> f64 {
    let k = g.k();
    if k < 2 || samples == 0 {
        return 1.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut met = 0usize;
    for _ in 0..samples {
        let j = rng.gen_range(0..k);
        let others: Vec<usize> = (0..k)
            .filter(|&i| i != j)
            .map(|i| g.part_sizes[i])
            .collect();
        let space: usize = others.iter().product();
        let want = demand.min(space);
        let mut picked: Vec<usize> = Vec::with_capacity(want);
        while picked.len() < want {
            let t = rng.gen_range(0..space);
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        let signs: Vec<bool> = (0..want).map(|_| rng.gen()).collect();
        let ok = (0..g.part_sizes[j]).any(|b| {
            picked.iter().zip(&signs).all(|(&t, &s)| {
                let mut e = unflatten(&others, t);
                e.insert(j, b);
                g.has_edge(&e) == s
            })
        });
        met += ok as usize;
    }
    met as f64 / samples as f64
}

/// A k-dimensional array of labels, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelArray {
    pub sizes: Vec<usize>,
    pub labels: Vec<u32>,
}

impl LabelArray {
    pub fn new(sizes: Vec<usize>, labels: Vec<u32>) -> Result<Self> {
        let len: usize = sizes.iter().product();
        if labels.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {len} cells",
                labels.len()
            )));
        }
        Ok(LabelArray { sizes, labels })
    }

    pub fn get(&self, cell: &[usize]) -> u32 {
        self.labels[flat_index(&self.sizes, cell)]
    }
}

/// Lex-first sub-box of the target sizes on which the label is constant.
///
/// A single cell takes one index from each coordinate, so its order type is
/// trivial and indiscernibility for cell labels means a constant label.
pub fn indiscernible_subbox(
    colors: &LabelArray,
    target_sizes: &[usize],
    budget: u128,
) -> Result<Option<Box>> {
    if target_sizes.len() != colors.sizes.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} target sizes for a {}-dimensional array",
            target_sizes.len(),
            colors.sizes.len()
        )));
    }
    if target_sizes.iter().zip(&colors.sizes).any(|(&t, &n)| t > n) {
        return Ok(None);
    }
    let required = target_sizes
        .iter()
        .zip(&colors.sizes)
        .fold(1u128, |acc, (&t, &n)| acc.saturating_mul(binomial(n, t)));
    if required > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let choices: Vec<Vec<Vec<usize>>> = target_sizes
        .iter()
        .zip(&colors.sizes)
        .map(|(&t, &n)| increasing_tuples(n, t))
        .collect();
    let radices: Vec<usize> = choices.iter().map(Vec::len).collect();
    let total: usize = radices.iter().product();
    Ok((0..total).into_par_iter().find_map_first(|i| {
        let digits = unflatten(&radices, i);
        let bx = Box::new(
            digits
                .iter()
                .zip(&choices)
                .map(|(&j, c)| c[j].clone())
                .collect(),
        );
        let cells = bx.cells(&colors.sizes);
        let first = cells.first().map(|&c| colors.labels[c]);
        cells
            .iter()
            .all(|&c| Some(colors.labels[c]) == first)
            .then_some(bx)
    }))
}
