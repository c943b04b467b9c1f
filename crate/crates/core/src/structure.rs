//! Finitely generated substructures, their quantifier-free fingerprints and
//! the back-and-forth extension of partial isomorphisms.
//!
//! Over a prime field the field sort is generated by 1, so a substructure is
//! just the span of its generators together with the form values on a basis.
//! The field sort never has to be extended during back-and-forth.

use serde::{Deserialize, Serialize};

use crate::combinatorics::increasing_tuples;
use crate::error::{Error, Result};
use crate::exterior;
use crate::ffla::{self, FVector};
use crate::mform::{self, AlternatingForm};

/// Span of some generators inside an ambient form, with its Gram data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substructure {
    pub form: AlternatingForm,
    pub basis: Vec<FVector>,
    /// Form values on increasing n-tuples of basis positions, zeros included.
    pub gram: Vec<(Vec<usize>, u32)>,
}

impl Substructure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn check_tuple(form: &AlternatingForm, tuple: &[FVector]) -> Result<()> {
    for v in tuple {
        if v.field() != form.field() {
            return Err(Error::FieldMismatch {
                expected: form.field().p(),
                found: v.field().p(),
            });
        }
        if v.dim() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: v.dim(),
            });
        }
    }
    Ok(())
}

fn gram_of(form: &AlternatingForm, basis: &[FVector]) -> Vec<(Vec<usize>, u32)> {
    increasing_tuples(basis.len(), form.arity())
        .into_iter()
        .map(|pos| {
            let args: Vec<FVector> = pos.iter().map(|&i| basis[i].clone()).collect();
            let v = form.eval(&args).expect("shapes checked").value();
            (pos, v)
        })
        .collect()
}

/// Substructure generated by `vectors`; basis is the greedy leftmost independent subtuple.
pub fn generate(form: &AlternatingForm, vectors: &[FVector]) -> Result<Substructure> {
    check_tuple(form, vectors)?;
    let basis: Vec<FVector> = ffla::greedy_independent(vectors)
        .into_iter()
        .map(|i| vectors[i].clone())
        .collect();
    let gram = gram_of(form, &basis);
    Ok(Substructure {
        form: form.clone(),
        basis,
        gram,
    })
}

/// Canonical quantifier-free fingerprint of a tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AtomicInvariant {
    pub length: usize,
    /// Positions of the greedy leftmost maximal independent subtuple.
    pub support_mask: Vec<usize>,
    /// Coordinates of every entry over the support vectors.
    pub coords: Vec<Vec<u32>>,
    /// Form values on increasing n-tuples of support positions (indices into `support_mask`).
    pub form_values: Vec<(Vec<usize>, u32)>,
}

pub fn atomic_invariant(form: &AlternatingForm, tuple: &[FVector]) -> Result<AtomicInvariant> {
    check_tuple(form, tuple)?;
    let support = ffla::greedy_independent(tuple);
    let basis: Vec<FVector> = support.iter().map(|&i| tuple[i].clone()).collect();
    let coords = tuple
        .iter()
        .map(|v| ffla::coordinates(v, &basis).expect("support spans the tuple"))
        .collect();
    Ok(AtomicInvariant {
        length: tuple.len(),
        support_mask: support,
        coords,
        form_values: gram_of(form, &basis),
    })
}

/// Type equality of two tuples, decided by their atomic invariants.
///
/// Both ambients must offer headroom at least the tuple length, so that the
/// back-and-forth witnesses needed for the decision exist.
pub fn equivalent(
    form_a: &AlternatingForm,
    tuple_a: &[FVector],
    form_b: &AlternatingForm,
    tuple_b: &[FVector],
) -> Result<bool> {
    if form_a.field() != form_b.field() || form_a.arity() != form_b.arity() {
        return Err(Error::ShapeMismatch(format!(
            "forms over (p={}, n={}) and (p={}, n={})",
            form_a.field().p(),
            form_a.arity(),
            form_b.field().p(),
            form_b.arity()
        )));
    }
    for (form, tuple) in [(form_a, tuple_a), (form_b, tuple_b)] {
        let h = mform::headroom(form);
        if h < tuple.len() {
            return Err(Error::InsufficientHeadroom {
                needed: tuple.len(),
                available: h,
            });
        }
    }
    Ok(atomic_invariant(form_a, tuple_a)? == atomic_invariant(form_b, tuple_b)?)
}

/// A finite map domain[i] -> image[i] between two ambient forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PartialIso {
    pub source: AlternatingForm,
    pub target: AlternatingForm,
    pub domain: Vec<FVector>,
    pub image: Vec<FVector>,
}

impl PartialIso {
    pub fn empty(source: &AlternatingForm, target: &AlternatingForm) -> Result<Self> {
        if source.field() != target.field() || source.arity() != target.arity() {
            return Err(Error::ShapeMismatch(
                "partial isomorphisms need forms of equal (p, n)".into(),
            ));
        }
        Ok(PartialIso {
            source: source.clone(),
            target: target.clone(),
            domain: Vec::new(),
            image: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    /// The map preserves independence, coordinates and form values on generators.
    pub fn is_valid(&self) -> bool {
        self.domain.len() == self.image.len()
            && matches!(
                (
                    atomic_invariant(&self.source, &self.domain),
                    atomic_invariant(&self.target, &self.image),
                ),
                (Ok(a), Ok(b)) if a == b
            )
    }
}

/// Forth step: extends the map to `x`.
///
/// If `x` is in the span of the domain its image is forced. Otherwise the
/// image is a vector outside the image span whose pairings with the image
/// wedges copy those of `x` with the domain wedges.
pub fn extend_iso(iso: &PartialIso, x: &FVector) -> Result<PartialIso> {
    check_tuple(&iso.source, std::slice::from_ref(x))?;
    let support = ffla::greedy_independent(&iso.domain);
    let dom: Vec<FVector> = support.iter().map(|&i| iso.domain[i].clone()).collect();
    let img: Vec<FVector> = support.iter().map(|&i| iso.image[i].clone()).collect();
    let field = iso.source.field();

    let y = if let Some(c) = ffla::coordinates(x, &dom) {
        FVector::combination(field, iso.target.dim(), &c, &img)
    } else {
        let n = iso.source.arity();
        let mut ts = Vec::new();
        let mut ks = Vec::new();
        for pos in increasing_tuples(dom.len(), n - 1) {
            let mut args: Vec<FVector> = pos.iter().map(|&i| dom[i].clone()).collect();
            args.push(x.clone());
            ks.push(iso.source.eval(&args)?.value());
            let factors: Vec<FVector> = pos.iter().map(|&i| img[i].clone()).collect();
            ts.push(exterior::wedge_of_vectors(&factors)?);
        }
        match mform::find_w(&iso.target, &ts, &ks, &img) {
            Ok(w) => w,
            Err(Error::NoSolution(why)) => return Err(Error::TargetExhausted(why)),
            Err(e) => return Err(e),
        }
    };
    let mut out = iso.clone();
    out.domain.push(x.clone());
    out.image.push(y);
    Ok(out)
}

/// Embeds a substructure into a target form by iterating the forth step over its basis.
pub fn embed(sub: &Substructure, target: &AlternatingForm) -> Result<PartialIso> {
    let mut iso = PartialIso::empty(&sub.form, target)?;
    for v in &sub.basis {
        iso = extend_iso(&iso, v)?;
    }
    Ok(iso)
}
