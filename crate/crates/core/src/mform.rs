//! Alternating n-linear forms on F_p^d.
//!
//! A form is stored by its values on strictly increasing tuples of standard
//! basis vectors. Everything else (evaluation, the pairing with wedges,
//! radical, genericity) is derived from those coefficients.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, increasing_tuples, sort_with_sign};
use crate::error::{Error, Result};
use crate::exterior::{self, WedgeVector};
use crate::ffla::{self, EchelonBasis, FMatrix, FVector, Fp, Scalar};

/// Largest ambient dimension a tower may reach.
pub const MAX_TOWER_DIM: usize = 64;

/// Default cap on enumerated candidates for exhaustive searches.
pub const DEFAULT_BUDGET: u128 = 1_000_000;

#[derive(Serialize, Deserialize)]
struct FormRepr {
    p: u32,
    n: usize,
    d: usize,
    coeffs: Vec<(Vec<usize>, u64)>,
}

/// Alternating n-linear form on F_p^d, keyed by increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormRepr", into = "FormRepr")]
pub struct AlternatingForm {
    field: Fp,
    n: usize,
    d: usize,
    coeffs: BTreeMap<Vec<usize>, u32>,
}

impl TryFrom<FormRepr> for AlternatingForm {
    type Error = Error;
    fn try_from(r: FormRepr) -> Result<Self> {
        let field = Fp::new(r.p)?;
        let mut form = AlternatingForm::zero(field, r.n, r.d)?;
        let mut seen = std::collections::BTreeSet::new();
        for (idx, c) in r.coeffs {
            if c >= r.p as u64 {
                return Err(Error::InvalidInput(format!(
                    "coefficient {c} is not reduced modulo {}",
                    r.p
                )));
            }
            if !seen.insert(idx.clone()) {
                return Err(Error::InvalidInput(format!("duplicate tuple {idx:?}")));
            }
            form.set(&idx, c as u32)?;
        }
        Ok(form)
    }
}

impl From<AlternatingForm> for FormRepr {
    fn from(f: AlternatingForm) -> Self {
        FormRepr {
            p: f.field.p(),
            n: f.n,
            d: f.d,
            coeffs: f
                .coeffs
                .into_iter()
                .map(|(k, v)| (k, u64::from(v)))
                .collect(),
        }
    }
}

impl AlternatingForm {
    pub fn zero(field: Fp, n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("arity {n} is below 2")));
        }
        Ok(AlternatingForm {
            field,
            n,
            d,
            coeffs: BTreeMap::new(),
        })
    }

    /// The determinant form on F_p^n.
    pub fn volume(field: Fp, n: usize) -> Result<Self> {
        let mut f = AlternatingForm::zero(field, n, n)?;
        f.set(&(0..n).collect::<Vec<_>>(), 1)?;
        Ok(f)
    }

    /// Standard symplectic form on F_p^d: <e_{2i}, e_{2i+1}> = 1.
    pub fn symplectic(field: Fp, d: usize) -> Result<Self> {
        if !d.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "symplectic form needs even dimension, got {d}"
            )));
        }
        let mut f = AlternatingForm::zero(field, 2, d)?;
        for i in 0..d / 2 {
            f.set(&[2 * i, 2 * i + 1], 1)?;
        }
        Ok(f)
    }

    pub fn from_coeffs(
        field: Fp,
        n: usize,
        d: usize,
        coeffs: impl IntoIterator<Item = (Vec<usize>, u32)>,
    ) -> Result<Self> {
        let mut f = AlternatingForm::zero(field, n, d)?;
        for (idx, c) in coeffs {
            f.set(&idx, c)?;
        }
        Ok(f)
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, u32> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// C(d, n-1), the dimension of the wedge space.
    pub fn wedge_dim(&self) -> usize {
        binomial(self.d, self.n - 1) as usize
    }

    pub fn set(&mut self, idx: &[usize], c: u32) -> Result<()> {
        if idx.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "tuple {idx:?} has length {}, arity is {}",
                idx.len(),
                self.n
            )));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= self.d) {
            return Err(Error::InvalidInput(format!(
                "tuple {idx:?} is not strictly increasing within 0..{}",
                self.d
            )));
        }
        let c = c % self.field.p();
        if c == 0 {
            self.coeffs.remove(idx);
        } else {
            self.coeffs.insert(idx.to_vec(), c);
        }
        Ok(())
    }

    /// Coefficient at an increasing tuple (0 when absent).
    pub fn coeff(&self, idx: &[usize]) -> u32 {
        self.coeffs.get(idx).copied().unwrap_or(0)
    }

    /// Value on standard basis vectors in arbitrary order: signed, 0 on repeats.
    pub fn coeff_signed(&self, tuple: &[usize]) -> u32 {
        match sort_with_sign(tuple) {
            None => 0,
            Some((sorted, negative)) => {
                let c = self.coeff(&sorted);
                if negative {
                    self.field.neg(c)
                } else {
                    c
                }
            }
        }
    }

    /// The restriction to the first `d` coordinates.
    pub fn restrict(&self, d: usize) -> AlternatingForm {
        assert!(d <= self.d);
        AlternatingForm {
            field: self.field,
            n: self.n,
            d,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.iter().all(|&i| i < d))
                .map(|(k, &v)| (k.clone(), v))
                .collect(),
        }
    }

    fn check_vectors(&self, vs: &[FVector]) -> Result<()> {
        for v in vs {
            if v.field() != self.field {
                return Err(Error::FieldMismatch {
                    expected: self.field.p(),
                    found: v.field().p(),
                });
            }
            if v.dim() != self.d {
                return Err(Error::DimensionMismatch {
                    expected: self.d,
                    found: v.dim(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates the form: sum over stored tuples of coefficient times the matching minor.
    pub fn eval(&self, vs: &[FVector]) -> Result<Scalar> {
        if vs.len() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "form of arity {} applied to {} vectors",
                self.n,
                vs.len()
            )));
        }
        self.check_vectors(vs)?;
        let f = self.field;
        let n = self.n;
        let mut minor = FMatrix::zeros(f, n, n);
        let mut acc = 0u32;
        for (idx, &c) in &self.coeffs {
            for (i, v) in vs.iter().enumerate() {
                for (j, &col) in idx.iter().enumerate() {
                    minor.set(i, j, v.coords()[col]);
                }
            }
            acc = f.add(acc, f.mul(c, ffla::determinant(&minor)));
        }
        Ok(f.scalar(acc as i64))
    }
}

/// Seeded form with uniform coefficients on every increasing tuple, lex order.
pub fn random_form(field: Fp, n: usize, d: usize, seed: u64) -> Result<AlternatingForm> {
    let mut form = AlternatingForm::zero(field, n, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for idx in increasing_tuples(d, n) {
        let c = rng.gen_range(0..field.p());
        form.set(&idx, c)?;
    }
    Ok(form)
}

pub fn psi_rank(form: &AlternatingForm) -> usize {
    ffla::rank(&exterior::psi_matrix(form))
}

/// Basis of the kernel of Psi.
pub fn radical(form: &AlternatingForm) -> Vec<WedgeVector> {
    ffla::kernel_basis(&exterior::psi_matrix(form))
        .into_iter()
        .map(|v| WedgeVector::from_dense(form.field, form.n, form.d, v.coords()))
        .collect()
}

/// Trivial radical. True when d < n-1, where the wedge space is zero.
pub fn is_nondegenerate(form: &AlternatingForm) -> bool {
    psi_rank(form) == form.wedge_dim()
}

/// Phi over the full standard basis is surjective.
pub fn is_generic(form: &AlternatingForm) -> bool {
    let basis: Vec<FVector> = (0..form.d)
        .map(|i| FVector::unit(form.field, form.d, i))
        .collect();
    let phi = exterior::phi_matrix(form, &basis).expect("standard basis is independent");
    ffla::rank(&phi) == phi.rows()
}

/// Wedge basis of span(w_basis) together with vectors dual to it under the pairing.
pub fn dual_tuples(
    form: &AlternatingForm,
    w_basis: &[FVector],
) -> Result<(Vec<WedgeVector>, Vec<FVector>)> {
    let ts = exterior::wedge_basis_of(form, w_basis)?;
    let phi = exterior::phi_matrix(form, w_basis)?;
    let m = ts.len();
    let mut us = Vec::with_capacity(m);
    for j in 0..m {
        let target = FVector::unit(form.field, m, j);
        match ffla::solve(&phi, &target)? {
            Some(u) => us.push(u),
            None => return Err(Error::NotGenericHere),
        }
    }
    Ok((ts, us))
}

/// A vector outside span(U) with prescribed pairings <t_i, w> = k_i.
///
/// Takes the zero-free-variable solution first, then that solution plus each
/// kernel basis vector in order. If all of these lie in span(U) then the whole
/// solution set does, so the scan is complete.
pub fn find_w(
    form: &AlternatingForm,
    ts: &[WedgeVector],
    ks: &[u32],
    u: &[FVector],
) -> Result<FVector> {
    if ts.len() != ks.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} wedges but {} targets",
            ts.len(),
            ks.len()
        )));
    }
    form.check_vectors(u)?;
    let rows = ts
        .iter()
        .map(|t| exterior::pairing_functional(form, t))
        .collect::<Result<Vec<_>>>()?;
    let a = FMatrix::from_row_vectors(form.field, form.d, &rows)?;
    let b = FVector::new(form.field, ks.to_vec());
    let Some(w0) = ffla::solve(&a, &b)? else {
        return Err(Error::NoSolution(
            "prescribed pairings are inconsistent".into(),
        ));
    };
    let mut span = EchelonBasis::new(form.field, form.d);
    for v in u {
        span.insert(v);
    }
    if !span.contains(&w0) {
        return Ok(w0);
    }
    for kv in ffla::kernel_basis(&a) {
        let w = w0.add(&kv);
        if !span.contains(&w) {
            return Ok(w);
        }
    }
    Err(Error::NoSolution(
        "every solution lies in the span of U".into(),
    ))
}

/// One step of the extension chain: kills the radical with fresh dimensions.
///
/// The wedge basis is the radical basis followed by greedily chosen standard
/// wedges. Fresh vector w_i gets <t_j, w_i> = delta_ij; tuples containing two
/// or more fresh vectors get 0.
pub fn extend_step(form: &AlternatingForm) -> AlternatingForm {
    let rad = ffla::kernel_basis(&exterior::psi_matrix(form));
    let r = rad.len();
    if r == 0 {
        return form.clone();
    }
    let field = form.field;
    let big_n = form.wedge_dim();
    let mut echelon = EchelonBasis::new(field, big_n);
    let mut basis = Vec::with_capacity(big_n);
    for v in &rad {
        echelon.insert(v);
        basis.push(v.clone());
    }
    for i in 0..big_n {
        if basis.len() == big_n {
            break;
        }
        let e = FVector::unit(field, big_n, i);
        if echelon.insert(&e) {
            basis.push(e);
        }
    }
    let t = FMatrix::from_row_vectors(field, big_n, &basis).expect("shapes agree");
    let tuples = increasing_tuples(form.d, form.n - 1);
    let new_d = form.d + r;
    let mut out = AlternatingForm {
        field,
        n: form.n,
        d: new_d,
        coeffs: form.coeffs.clone(),
    };
    for i in 0..r {
        let lambda = ffla::solve(&t, &FVector::unit(field, big_n, i))
            .expect("shapes agree")
            .expect("wedge basis matrix is invertible");
        for (s, &c) in tuples.iter().zip(lambda.coords()) {
            if c != 0 {
                let mut idx = s.clone();
                idx.push(form.d + i);
                out.coeffs.insert(idx, c);
            }
        }
    }
    out
}

/// Columns of Psi for the new form restricted to wedges of the first `d_old` coordinates.
fn restricted_psi(form: &AlternatingForm, d_old: usize) -> FMatrix {
    let tuples = increasing_tuples(d_old, form.n - 1);
    let mut m = FMatrix::zeros(form.field, form.d, tuples.len());
    let mut buf = Vec::with_capacity(form.n);
    for (col, idx) in tuples.iter().enumerate() {
        for j in 0..form.d {
            buf.clear();
            buf.extend_from_slice(idx);
            buf.push(j);
            let k = form.coeff_signed(&buf);
            if k != 0 {
                m.set(j, col, k);
            }
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StepCertificate {
    pub from_dim: usize,
    pub to_dim: usize,
    pub radical_size: usize,
    /// C(from_dim, n-1)
    pub wedge_dim: usize,
    /// Rank of the old wedge space mapped into the dual of the new space.
    pub rank: usize,
    pub restricts: bool,
}

impl StepCertificate {
    pub fn passes(&self) -> bool {
        self.rank == self.wedge_dim
            && self.restricts
            && self.to_dim == self.from_dim + self.radical_size
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerLevel {
    pub dim: usize,
    pub form: AlternatingForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub levels: Vec<TowerLevel>,
    pub certificates: Vec<StepCertificate>,
}

impl Tower {
    pub fn top(&self) -> &AlternatingForm {
        &self.levels.last().expect("towers are nonempty").form
    }

    /// Recomputes every certificate from the stored levels.
    pub fn verify(&self) -> bool {
        self.levels
            .windows(2)
            .zip(&self.certificates)
            .all(|(w, c)| certify_step(&w[0].form, &w[1].form) == *c && c.passes())
            && self.certificates.len() + 1 == self.levels.len()
    }
}

fn certify_step(old: &AlternatingForm, new: &AlternatingForm) -> StepCertificate {
    StepCertificate {
        from_dim: old.d,
        to_dim: new.d,
        radical_size: old.wedge_dim() - psi_rank(old),
        wedge_dim: old.wedge_dim(),
        rank: ffla::rank(&restricted_psi(new, old.d)),
        restricts: new.restrict(old.d) == *old,
    }
}

/// Iterates `extend_step` up to `steps` times.
///
/// Stops early once the current level is non-degenerate, since a further
/// step would not change the form and dimensions must strictly increase.
pub fn certify_tower(form0: &AlternatingForm, steps: usize) -> Result<Tower> {
    let mut levels = vec![TowerLevel {
        dim: form0.d,
        form: form0.clone(),
    }];
    let mut certificates = Vec::new();
    for _ in 0..steps {
        let cur = &levels.last().unwrap().form;
        let r = cur.wedge_dim() - psi_rank(cur);
        if r == 0 {
            break;
        }
        if cur.d + r > MAX_TOWER_DIM {
            return Err(Error::SizeGuard(format!(
                "tower step would reach dimension {} > {MAX_TOWER_DIM}",
                cur.d + r
            )));
        }
        let next = extend_step(cur);
        let cert = certify_step(cur, &next);
        if !cert.passes() {
            return Err(Error::InvalidInput(format!(
                "extension certificate failed: {cert:?}"
            )));
        }
        certificates.push(cert);
        levels.push(TowerLevel {
            dim: next.d,
            form: next,
        });
    }
    Ok(Tower {
        levels,
        certificates,
    })
}

/// Number of r-dimensional subspaces of F_p^d, `None` on overflow.
pub fn gaussian_binomial(p: u32, d: usize, r: usize) -> Option<u128> {
    if r > d {
        return Some(0);
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        let a = p.checked_pow((d - i) as u32)? - 1;
        let b = p.checked_pow((i + 1) as u32)? - 1;
        num = num.checked_mul(a)?;
        den = den.checked_mul(b)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    Some(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Calls `f` on a reduced echelon basis of every r-dimensional subspace of F_p^d.
pub fn for_each_subspace(field: Fp, d: usize, r: usize, mut f: impl FnMut(&[FVector]) -> bool) {
    let p = field.p() as usize;
    for pivots in increasing_tuples(d, r) {
        let mut free = Vec::new();
        for (row, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..d {
                if !pivots.contains(&c) {
                    free.push((row, c));
                }
            }
        }
        let mut stop = false;
        crate::combinatorics::for_each_word(p, free.len(), |vals| {
            if stop {
                return;
            }
            let mut rows = vec![vec![0u32; d]; r];
            for (row, &pc) in pivots.iter().enumerate() {
                rows[row][pc] = 1;
            }
            for (&(row, c), &v) in free.iter().zip(vals) {
                rows[row][c] = v as u32;
            }
            let vs: Vec<FVector> = rows.into_iter().map(|x| FVector::new(field, x)).collect();
            if !f(&vs) {
                stop = true;
            }
        });
        if stop {
            return;
        }
    }
}

/// Pure-tensor criterion: every independent (n-1)-tuple pairs nontrivially with some vector.
pub fn nondeg_pure_tensors_bruteforce(form: &AlternatingForm) -> Result<bool> {
    nondeg_pure_tensors_bruteforce_with_budget(form, DEFAULT_BUDGET)
}

pub fn nondeg_pure_tensors_bruteforce_with_budget(
    form: &AlternatingForm,
    budget: u128,
) -> Result<bool> {
    let r = form.n - 1;
    let required = gaussian_binomial(form.field.p(), form.d, r).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::TooLarge { required, budget });
    }
    let units: Vec<FVector> = (0..form.d)
        .map(|j| FVector::unit(form.field, form.d, j))
        .collect();
    let mut all = true;
    let mut args = Vec::with_capacity(form.n);
    for_each_subspace(form.field, form.d, r, |vs| {
        let witnessed = units.iter().any(|e| {
            args.clear();
            args.extend_from_slice(vs);
            args.push(e.clone());
            !form.eval(&args).expect("shapes agree").is_zero()
        });
        all &= witnessed;
        witnessed
    });
    Ok(all)
}

/// Largest h such that Case 2 of the back-and-forth is guaranteed for image spans of dimension < h.
///
/// For a span of dimension k the prescribed pairings live on C(k, n-1) wedges.
/// They are solvable when that count is 0 or the form is generic; a solution
/// outside the span exists when the solution space has dimension d - C(k, n-1) > k.
pub fn headroom(form: &AlternatingForm) -> usize {
    let generic = is_generic(form);
    let mut h = 0;
    loop {
        let c = binomial(h, form.n - 1);
        let solvable = c == 0 || generic;
        if !solvable || (form.d as u128) < c + h as u128 + 1 {
            return h;
        }
        h += 1;
    }
}
