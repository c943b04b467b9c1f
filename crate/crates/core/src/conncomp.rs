//! Subspaces cut out by an alternating form, and the intersection formula for
//! the connected component of the additive group.
//!
//! For a parameter set A the component is the intersection of the kernels
//! V_a = { v : <a, v> = 0 } over all (n-1)-tuples a from A.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::for_each_word;
use crate::error::{Error, Result};
use crate::ffla::{self, FMatrix, FVector, Fp};
use crate::mform::AlternatingForm;

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    p: u32,
    d: usize,
    basis: Vec<Vec<u32>>,
}

/// Subspace of F_p^d stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    field: Fp,
    d: usize,
    basis: Vec<FVector>,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;
    fn try_from(r: SubspaceRepr) -> Result<Self> {
        let field = Fp::new(r.p)?;
        let vs = r
            .basis
            .into_iter()
            .map(|row| {
                if row.len() != r.d {
                    Err(Error::DimensionMismatch {
                        expected: r.d,
                        found: row.len(),
                    })
                } else {
                    Ok(FVector::new(field, row))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(field, r.d, &vs))
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr {
            p: s.field.p(),
            d: s.d,
            basis: s.basis.into_iter().map(FVector::into_coords).collect(),
        }
    }
}

impl Subspace {
    /// Span of arbitrary vectors, canonicalized.
    pub fn span(field: Fp, d: usize, vs: &[FVector]) -> Self {
        let m = FMatrix::from_row_vectors(field, d, vs).expect("vectors match the ambient");
        let r = ffla::rref(&m);
        let basis = (0..r.rank).map(|i| r.reduced.row_vector(i)).collect();
        Subspace { field, d, basis }
    }

    pub fn full(field: Fp, d: usize) -> Self {
        Subspace {
            field,
            d,
            basis: (0..d).map(|i| FVector::unit(field, d, i)).collect(),
        }
    }

    pub fn zero(field: Fp, d: usize) -> Self {
        Subspace {
            field,
            d,
            basis: Vec::new(),
        }
    }

    pub fn basis(&self) -> &[FVector] {
        &self.basis
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.d - self.basis.len()
    }

    pub fn contains(&self, v: &FVector) -> bool {
        let mut e = ffla::EchelonBasis::new(self.field, self.d);
        for b in &self.basis {
            e.insert(b);
        }
        e.contains(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Vectors orthogonal to every basis vector under the standard dot product.
    fn annihilator_rows(&self) -> Vec<FVector> {
        let m = FMatrix::from_row_vectors(self.field, self.d, &self.basis).expect("shapes agree");
        ffla::kernel_basis(&m)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!((self.field, self.d), (other.field, other.d));
        let mut rows = self.annihilator_rows();
        rows.extend(other.annihilator_rows());
        Subspace::cut_out(self.field, self.d, &rows)
    }

    /// Common kernel of the given functionals.
    pub fn cut_out(field: Fp, d: usize, functionals: &[FVector]) -> Subspace {
        let m = FMatrix::from_row_vectors(field, d, functionals).expect("functionals match");
        Subspace::span(field, d, &ffla::kernel_basis(&m))
    }
}

/// The functional v -> <a_1, ..., a_{n-1}, v> in the dual standard basis.
fn tuple_functional(form: &AlternatingForm, a: &[FVector]) -> Result<FVector> {
    let d = form.dim();
    let mut args = a.to_vec();
    args.push(FVector::zero(form.field(), d));
    let coords = (0..d)
        .map(|j| {
            args[a.len()] = FVector::unit(form.field(), d, j);
            form.eval(&args).map(|s| s.value())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FVector::new(form.field(), coords))
}

/// Kernel of v -> <a, v> for an (n-1)-tuple a.
pub fn v_perp(form: &AlternatingForm, a_tuple: &[FVector]) -> Result<Subspace> {
    if a_tuple.len() + 1 != form.arity() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} parameters, got {}",
            form.arity() - 1,
            a_tuple.len()
        )));
    }
    let func = tuple_functional(form, a_tuple)?;
    Ok(Subspace::cut_out(form.field(), form.dim(), &[func]))
}

/// Intersection of `v_perp` over all (n-1)-tuples from `a`, repetitions allowed.
pub fn g_infty(form: &AlternatingForm, a: &[FVector]) -> Result<Subspace> {
    let r = form.arity() - 1;
    let mut words = Vec::new();
    if !a.is_empty() {
        for_each_word(a.len(), r, |w| words.push(w.to_vec()));
    }
    let funcs = words
        .par_iter()
        .map(|w| {
            let tuple: Vec<FVector> = w.iter().map(|&i| a[i].clone()).collect();
            tuple_functional(form, &tuple)
        })
        .collect::<Result<Vec<_>>>()?;
    let nonzero: Vec<FVector> = funcs.into_iter().filter(|f| !f.is_zero()).collect();
    Ok(Subspace::cut_out(form.field(), form.dim(), &nonzero))
}

/// Checks g(A_1 u ... u A_n) = intersection over i of g(union of the parts other than A_i).
pub fn intersection_identity_check(form: &AlternatingForm, parts: &[Vec<FVector>]) -> Result<bool> {
    if parts.len() != form.arity() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} parts, got {}",
            form.arity(),
            parts.len()
        )));
    }
    let all: Vec<FVector> = parts.iter().flatten().cloned().collect();
    let lhs = g_infty(form, &all)?;
    let mut rhs = Subspace::full(form.field(), form.dim());
    for i in 0..parts.len() {
        let rest: Vec<FVector> = parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, p)| p.iter().cloned())
            .collect();
        rhs = rhs.intersect(&g_infty(form, &rest)?);
    }
    Ok(lhs == rhs)
}
