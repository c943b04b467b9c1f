//! Coordinates on the exterior power of degree n-1, the induced pairing and
//! the matrices of Psi and Phi_W.
//!
//! Wedge coordinates are indexed by strictly increasing tuples of standard
//! basis positions, ordered lexicographically. A form of arity n pairs a wedge
//! of degree n-1 with a vector, so every wedge here is tagged with the arity n
//! of the forms it pairs with, not with its own degree.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{increasing_tuples, tuple_rank};
use crate::error::{Error, Result};
use crate::ffla::{self, FMatrix, FVector, Fp, Scalar};
use crate::mform::AlternatingForm;

#[derive(Serialize, Deserialize)]
struct WedgeRepr {
    p: u32,
    n: usize,
    d: usize,
    terms: Vec<Vec<u64>>,
}

/// Element of the (n-1)-th exterior power of F_p^d, sparse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WedgeRepr", into = "WedgeRepr")]
pub struct WedgeVector {
    field: Fp,
    n: usize,
    d: usize,
    terms: BTreeMap<Vec<usize>, u32>,
}

impl TryFrom<WedgeRepr> for WedgeVector {
    type Error = Error;
    fn try_from(r: WedgeRepr) -> Result<Self> {
        let field = Fp::new(r.p)?;
        if r.n < 2 {
            return Err(Error::InvalidInput("arity must be at least 2".into()));
        }
        let mut w = WedgeVector::zero(field, r.n, r.d);
        for term in r.terms {
            if term.len() != r.n {
                return Err(Error::InvalidInput(format!(
                    "wedge term needs {} indices and a coefficient",
                    r.n - 1
                )));
            }
            let (idx, c) = term.split_at(r.n - 1);
            let idx: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            if c[0] >= r.p as u64 {
                return Err(Error::InvalidInput(format!(
                    "coefficient {} is not reduced modulo {}",
                    c[0], r.p
                )));
            }
            if w.terms.contains_key(&idx) {
                return Err(Error::InvalidInput(format!(
                    "duplicate wedge index {idx:?}"
                )));
            }
            w.set(&idx, c[0] as u32)?;
        }
        Ok(w)
    }
}

impl From<WedgeVector> for WedgeRepr {
    fn from(w: WedgeVector) -> Self {
        WedgeRepr {
            p: w.field.p(),
            n: w.n,
            d: w.d,
            terms: w
                .terms
                .into_iter()
                .map(|(idx, c)| {
                    let mut t: Vec<u64> = idx.into_iter().map(|i| i as u64).collect();
                    t.push(c as u64);
                    t
                })
                .collect(),
        }
    }
}

impl WedgeVector {
    pub fn zero(field: Fp, n: usize, d: usize) -> Self {
        assert!(n >= 2, "arity must be at least 2");
        WedgeVector {
            field,
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    /// The standard wedge e_{i_1} ^ ... ^ e_{i_{n-1}} for an increasing index tuple.
    pub fn basis(field: Fp, n: usize, d: usize, idx: &[usize]) -> Result<Self> {
        let mut w = WedgeVector::zero(field, n, d);
        w.set(idx, 1)?;
        Ok(w)
    }

    /// Rebuilds a wedge from dense coordinates in lex tuple order.
    pub fn from_dense(field: Fp, n: usize, d: usize, dense: &[u32]) -> Self {
        let tuples = increasing_tuples(d, n - 1);
        assert_eq!(
            tuples.len(),
            dense.len(),
            "dense wedge has the wrong length"
        );
        let terms = tuples
            .into_iter()
            .zip(dense)
            .filter(|(_, &c)| c % field.p() != 0)
            .map(|(t, &c)| (t, c % field.p()))
            .collect();
        WedgeVector { field, n, d, terms }
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0; self.wedge_dim()];
        for (idx, &c) in &self.terms {
            out[tuple_rank(self.d, idx)] = c;
        }
        out
    }

    pub fn to_dense_vector(&self) -> FVector {
        FVector::new(self.field, self.to_dense())
    }

    /// Number of standard wedges, C(d, n-1).
    pub fn wedge_dim(&self) -> usize {
        crate::combinatorics::binomial(self.d, self.n - 1) as usize
    }

    fn validate_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.n - 1 {
            return Err(Error::ShapeMismatch(format!(
                "wedge index {idx:?} should have length {}",
                self.n - 1
            )));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) || idx.iter().any(|&i| i >= self.d) {
            return Err(Error::InvalidInput(format!(
                "wedge index {idx:?} is not strictly increasing within 0..{}",
                self.d
            )));
        }
        Ok(())
    }

    /// Sets the coefficient at an increasing index tuple.
    pub fn set(&mut self, idx: &[usize], c: u32) -> Result<()> {
        self.validate_index(idx)?;
        let c = c % self.field.p();
        if c == 0 {
            self.terms.remove(idx);
        } else {
            self.terms.insert(idx.to_vec(), c);
        }
        Ok(())
    }

    pub fn coeff(&self, idx: &[usize]) -> u32 {
        self.terms.get(idx).copied().unwrap_or(0)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    /// Arity of the forms this wedge pairs with (its degree is one less).
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, u32> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &WedgeVector) {
        assert_eq!(
            (self.field, self.n, self.d),
            (other.field, other.n, other.d),
            "incompatible wedge vectors"
        );
    }

    pub fn add(&self, other: &WedgeVector) -> WedgeVector {
        self.add_scaled(other, 1)
    }

    /// `self + c * other`
    pub fn add_scaled(&self, other: &WedgeVector, c: u32) -> WedgeVector {
        self.check_compatible(other);
        let f = self.field;
        let mut out = self.clone();
        for (idx, &b) in &other.terms {
            let v = f.add(out.coeff(idx), f.mul(b, c % f.p()));
            if v == 0 {
                out.terms.remove(idx);
            } else {
                out.terms.insert(idx.clone(), v);
            }
        }
        out
    }

    pub fn scale(&self, c: u32) -> WedgeVector {
        let f = self.field;
        let c = c % f.p();
        let terms = if c == 0 {
            BTreeMap::new()
        } else {
            self.terms
                .iter()
                .map(|(k, &v)| (k.clone(), f.mul(v, c)))
                .collect()
        };
        WedgeVector {
            field: f,
            n: self.n,
            d: self.d,
            terms,
        }
    }

    /// The same wedge read in a larger ambient space F_p^{d'} (old basis first).
    pub fn lift(&self, d: usize) -> WedgeVector {
        assert!(d >= self.d);
        WedgeVector {
            field: self.field,
            n: self.n,
            d,
            terms: self.terms.clone(),
        }
    }
}

/// Wedge of n-1 vectors: coefficient at I is the minor of the rows on columns I.
pub fn wedge_of_vectors(vs: &[FVector]) -> Result<WedgeVector> {
    let Some(first) = vs.first() else {
        return Err(Error::ShapeMismatch(
            "a wedge needs at least one factor".into(),
        ));
    };
    let (field, d) = (first.field(), first.dim());
    let m = FMatrix::from_row_vectors(field, d, vs)?;
    let r = vs.len();
    let mut w = WedgeVector::zero(field, r + 1, d);
    for idx in increasing_tuples(d, r) {
        let mut minor = FMatrix::zeros(field, r, r);
        for i in 0..r {
            for (j, &c) in idx.iter().enumerate() {
                minor.set(i, j, m.get(i, c));
            }
        }
        let det = ffla::determinant(&minor);
        if det != 0 {
            w.terms.insert(idx, det);
        }
    }
    Ok(w)
}

fn check_form_wedge(form: &AlternatingForm, t: &WedgeVector) -> Result<()> {
    if t.field != form.field() {
        return Err(Error::FieldMismatch {
            expected: form.field().p(),
            found: t.field.p(),
        });
    }
    if t.n != form.arity() || t.d != form.dim() {
        return Err(Error::ShapeMismatch(format!(
            "wedge for (n={}, d={}) paired with form of (n={}, d={})",
            t.n,
            t.d,
            form.arity(),
            form.dim()
        )));
    }
    Ok(())
}

/// The functional v -> <t, v>_2 in the dual standard basis.
pub fn pairing_functional(form: &AlternatingForm, t: &WedgeVector) -> Result<FVector> {
    check_form_wedge(form, t)?;
    let f = form.field();
    let d = form.dim();
    let mut out = vec![0u32; d];
    let mut buf = Vec::with_capacity(form.arity());
    for (idx, &c) in &t.terms {
        for (j, slot) in out.iter_mut().enumerate() {
            buf.clear();
            buf.extend_from_slice(idx);
            buf.push(j);
            let k = form.coeff_signed(&buf);
            if k != 0 {
                *slot = f.add(*slot, f.mul(c, k));
            }
        }
    }
    Ok(FVector::new(f, out))
}

/// The induced bilinear pairing of a wedge with a vector.
pub fn pairing2(form: &AlternatingForm, t: &WedgeVector, w: &FVector) -> Result<Scalar> {
    if w.dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            found: w.dim(),
        });
    }
    let func = pairing_functional(form, t)?;
    let f = form.field();
    let v = func
        .coords()
        .iter()
        .zip(w.coords())
        .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
    Ok(f.scalar(v as i64))
}

/// Matrix of Psi: d rows, one column per standard wedge in lex order.
pub fn psi_matrix(form: &AlternatingForm) -> FMatrix {
    let d = form.dim();
    let n = form.arity();
    let tuples = increasing_tuples(d, n - 1);
    let mut m = FMatrix::zeros(form.field(), d, tuples.len());
    let mut buf = Vec::with_capacity(n);
    for (col, idx) in tuples.iter().enumerate() {
        for j in 0..d {
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

/// Wedges of all increasing (n-1)-subtuples of an independent tuple, lex order of positions.
pub fn wedge_basis_of(form: &AlternatingForm, w_basis: &[FVector]) -> Result<Vec<WedgeVector>> {
    let n = form.arity();
    for v in w_basis {
        if v.dim() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: v.dim(),
            });
        }
    }
    if !ffla::theta(w_basis)? {
        return Err(Error::DependentBasis);
    }
    increasing_tuples(w_basis.len(), n - 1)
        .into_iter()
        .map(|pos| {
            let vs: Vec<FVector> = pos.iter().map(|&i| w_basis[i].clone()).collect();
            wedge_of_vectors(&vs)
        })
        .collect()
}

/// Matrix of Phi_W: one row per wedge of `w_basis`, one column per ambient basis vector.
pub fn phi_matrix(form: &AlternatingForm, w_basis: &[FVector]) -> Result<FMatrix> {
    let wedges = wedge_basis_of(form, w_basis)?;
    let rows = wedges
        .iter()
        .map(|t| pairing_functional(form, t))
        .collect::<Result<Vec<_>>>()?;
    FMatrix::from_row_vectors(form.field(), form.dim(), &rows)
}
