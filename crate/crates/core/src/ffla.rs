//! Exact linear algebra over prime fields.
//!
//! Everything here is dense and small: ambient dimensions stay in the tens, so
//! a `Vec<u32>` per vector and a row-major `Vec<u32>` per matrix is all the
//! structure needed. Moduli are primes below 2^16, so every product of two
//! residues fits in a `u64` before reduction.
//!
//! Besides row reduction, the module provides the two language primitives of
//! the two-sorted vector-space language: [`theta`] (linear independence) and
//! [`coord`] (coordinate extraction, total with value 0 off its domain).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exclusive upper bound on supported moduli.
pub const MAX_PRIME: u32 = 1 << 16;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if p >= MAX_PRIME || !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    pub fn scalar(self, value: i64) -> Scalar {
        Scalar {
            value: self.reduce(value),
            field: self,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A residue class modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    field: Fp,
}

impl Scalar {
    pub fn zero(field: Fp) -> Self {
        Scalar { value: 0, field }
    }

    pub fn one(field: Fp) -> Self {
        Scalar {
            value: 1 % field.p,
            field,
        }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(self) -> Fp {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Scalar> {
        self.field.inv(self.value).map(|value| Scalar {
            value,
            field: self.field,
        })
    }

    fn same_field(self, other: Scalar) {
        assert_eq!(self.field, other.field, "scalars from different fields");
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        self.same_field(rhs);
        Scalar {
            value: self.field.add(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        self.same_field(rhs);
        Scalar {
            value: self.field.sub(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self.same_field(rhs);
        Scalar {
            value: self.field.mul(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    p: u32,
    coords: Vec<u64>,
}

/// A vector of F_p^d with dense coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct FVector {
    field: Fp,
    coords: Vec<u32>,
}

impl TryFrom<VectorRepr> for FVector {
    type Error = Error;
    fn try_from(r: VectorRepr) -> Result<Self> {
        let field = Fp::new(r.p)?;
        if let Some(&bad) = r.coords.iter().find(|&&c| c >= r.p as u64) {
            return Err(Error::InvalidInput(format!(
                "coordinate {bad} is not reduced modulo {}",
                r.p
            )));
        }
        Ok(FVector {
            field,
            coords: r.coords.into_iter().map(|c| c as u32).collect(),
        })
    }
}

impl From<FVector> for VectorRepr {
    fn from(v: FVector) -> Self {
        VectorRepr {
            p: v.field.p,
            coords: v.coords.into_iter().map(u64::from).collect(),
        }
    }
}

impl FVector {
    /// Builds a vector, reducing every coordinate modulo p.
    pub fn new(field: Fp, coords: Vec<u32>) -> Self {
        let coords = coords.into_iter().map(|c| c % field.p).collect();
        FVector { field, coords }
    }

    pub fn from_ints(field: Fp, coords: &[i64]) -> Self {
        FVector {
            field,
            coords: coords.iter().map(|&c| field.reduce(c)).collect(),
        }
    }

    pub fn zero(field: Fp, dim: usize) -> Self {
        FVector {
            field,
            coords: vec![0; dim],
        }
    }

    /// The standard basis vector e_i of F_p^dim.
    pub fn unit(field: Fp, dim: usize, i: usize) -> Self {
        let mut v = FVector::zero(field, dim);
        v.coords[i] = 1 % field.p;
        v
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.coords
    }

    pub fn get(&self, i: usize) -> Scalar {
        Scalar {
            value: self.coords[i],
            field: self.field,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &FVector) {
        assert_eq!(self.field, other.field, "vectors over different fields");
        assert_eq!(self.dim(), other.dim(), "vectors of different dimension");
    }

    pub fn add(&self, other: &FVector) -> FVector {
        self.check_compatible(other);
        let f = self.field;
        FVector {
            field: f,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &FVector) -> FVector {
        self.check_compatible(other);
        let f = self.field;
        FVector {
            field: f,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FVector {
        let f = self.field;
        let c = c % f.p;
        FVector {
            field: f,
            coords: self.coords.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &FVector, c: u32) {
        self.check_compatible(other);
        let f = self.field;
        let c = c % f.p;
        if c == 0 {
            return;
        }
        for (a, &b) in self.coords.iter_mut().zip(&other.coords) {
            *a = f.add(*a, f.mul(b, c));
        }
    }

    /// Re-embeds into a larger ambient space by appending zero coordinates.
    pub fn padded(&self, dim: usize) -> FVector {
        assert!(dim >= self.dim());
        let mut coords = self.coords.clone();
        coords.resize(dim, 0);
        FVector {
            field: self.field,
            coords,
        }
    }

    /// Linear combination `sum coeffs[i] * vs[i]`; `vs` must be non-empty or `dim` given by caller.
    pub fn combination(field: Fp, dim: usize, coeffs: &[u32], vs: &[FVector]) -> FVector {
        assert_eq!(coeffs.len(), vs.len());
        let mut acc = FVector::zero(field, dim);
        for (&c, v) in coeffs.iter().zip(vs) {
            acc.add_scaled(v, c);
        }
        acc
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    #[serde(default)]
    cols: Option<usize>,
    rows: Vec<Vec<u64>>,
}

/// Dense row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct FMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl TryFrom<MatrixRepr> for FMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        let field = Fp::new(r.p)?;
        let cols = match (r.cols, r.rows.first()) {
            (Some(c), _) => c,
            (None, Some(first)) => first.len(),
            (None, None) => 0,
        };
        let mut data = Vec::with_capacity(r.rows.len() * cols);
        for row in &r.rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch("ragged matrix rows".into()));
            }
            for &c in row {
                if c >= r.p as u64 {
                    return Err(Error::InvalidInput(format!(
                        "entry {c} is not reduced modulo {}",
                        r.p
                    )));
                }
                data.push(c as u32);
            }
        }
        Ok(FMatrix {
            field,
            rows: r.rows.len(),
            cols,
            data,
        })
    }
}

impl From<FMatrix> for MatrixRepr {
    fn from(m: FMatrix) -> Self {
        MatrixRepr {
            p: m.field.p,
            cols: Some(m.cols),
            rows: (0..m.rows)
                .map(|i| m.row(i).iter().map(|&c| u64::from(c)).collect())
                .collect(),
        }
    }
}

impl FMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        FMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Fp, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch("ragged matrix rows".into()));
            }
            data.extend(row.iter().map(|&c| c % field.p));
        }
        Ok(FMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose rows are the given vectors; `cols` is used when `vs` is empty.
    pub fn from_row_vectors(field: Fp, cols: usize, vs: &[FVector]) -> Result<Self> {
        let mut m = FMatrix::zeros(field, vs.len(), cols);
        for (i, v) in vs.iter().enumerate() {
            if v.field() != field {
                return Err(Error::FieldMismatch {
                    expected: field.p,
                    found: v.field().p,
                });
            }
            if v.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: v.dim(),
                });
            }
            m.data[i * cols..(i + 1) * cols].copy_from_slice(v.coords());
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_column_vectors(field: Fp, rows: usize, vs: &[FVector]) -> Result<Self> {
        Ok(FMatrix::from_row_vectors(field, rows, vs)?.transpose())
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.data[i * self.cols + j] = value % self.field.p;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> FVector {
        FVector {
            field: self.field,
            coords: self.row(i).to_vec(),
        }
    }

    pub fn column_vector(&self, j: usize) -> FVector {
        FVector {
            field: self.field,
            coords: (0..self.rows).map(|i| self.get(i, j)).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &FVector) -> Result<FVector> {
        if v.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.dim(),
            });
        }
        let f = self.field;
        let coords = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.coords())
                    .fold(0u32, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect();
        Ok(FVector { field: f, coords })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot stack {} columns onto {}",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FMatrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: FMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form over F_p.
pub fn rref(m: &FMatrix) -> Rref {
    let mut r = m.clone();
    let f = r.field;
    let (rows, cols) = (r.rows, r.cols);
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        let Some(src) = (prow..rows).find(|&i| r.get(i, col) != 0) else {
            continue;
        };
        r.swap_rows(prow, src);
        let inv = f.inv(r.get(prow, col)).expect("nonzero pivot");
        for j in col..cols {
            let v = f.mul(r.get(prow, j), inv);
            r.data[prow * cols + j] = v;
        }
        for i in 0..rows {
            if i == prow {
                continue;
            }
            let factor = r.get(i, col);
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let v = f.sub(r.get(i, j), f.mul(factor, r.get(prow, j)));
                r.data[i * cols + j] = v;
            }
        }
        pivots.push(col);
        prow += 1;
    }
    let rank = pivots.len();
    Rref {
        reduced: r,
        pivots,
        rank,
    }
}

pub fn rank(m: &FMatrix) -> usize {
    rref(m).rank
}

/// Basis of the right null space, one vector per free column in increasing order.
pub fn kernel_basis(m: &FMatrix) -> Vec<FVector> {
    let Rref {
        reduced, pivots, ..
    } = rref(m);
    let f = m.field;
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = FVector::zero(f, m.cols);
            x.coords[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                x.coords[pc] = f.neg(reduced.get(i, free));
            }
            x
        })
        .collect()
}

/// Some `x` with `m x = b`, free variables set to zero; `None` when inconsistent.
pub fn solve(m: &FMatrix, b: &FVector) -> Result<Option<FVector>> {
    if b.dim() != m.rows {
        return Err(Error::DimensionMismatch {
            expected: m.rows,
            found: b.dim(),
        });
    }
    let f = m.field;
    let cols = m.cols;
    let mut aug = FMatrix::zeros(f, m.rows, cols + 1);
    for i in 0..m.rows {
        aug.data[i * (cols + 1)..i * (cols + 1) + cols].copy_from_slice(m.row(i));
        aug.data[i * (cols + 1) + cols] = b.coords[i] % f.p;
    }
    let Rref {
        reduced, pivots, ..
    } = rref(&aug);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = FVector::zero(f, cols);
    for (i, &pc) in pivots.iter().enumerate() {
        x.coords[pc] = reduced.get(i, cols);
    }
    Ok(Some(x))
}

/// Determinant of a square matrix.
pub fn determinant(m: &FMatrix) -> u32 {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let f = m.field;
    let n = m.rows;
    let mut a = m.clone();
    let mut det = 1 % f.p;
    for col in 0..n {
        let Some(src) = (col..n).find(|&i| a.get(i, col) != 0) else {
            return 0;
        };
        if src != col {
            a.swap_rows(src, col);
            det = f.neg(det);
        }
        let pivot = a.get(col, col);
        det = f.mul(det, pivot);
        let inv = f.inv(pivot).expect("nonzero pivot");
        for i in col + 1..n {
            let factor = f.mul(a.get(i, col), inv);
            if factor == 0 {
                continue;
            }
            for j in col..n {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(col, j)));
                a.data[i * n + j] = v;
            }
        }
    }
    det
}

fn common_shape(vs: &[FVector]) -> Result<Option<(Fp, usize)>> {
    let Some(first) = vs.first() else {
        return Ok(None);
    };
    for v in &vs[1..] {
        if v.field() != first.field() {
            return Err(Error::FieldMismatch {
                expected: first.field().p,
                found: v.field().p,
            });
        }
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: v.dim(),
            });
        }
    }
    Ok(Some((first.field(), first.dim())))
}

/// Linear independence predicate; the empty tuple is independent.
pub fn theta(vs: &[FVector]) -> Result<bool> {
    let Some((field, dim)) = common_shape(vs)? else {
        return Ok(true);
    };
    if vs.len() > dim {
        return Ok(false);
    }
    let m = FMatrix::from_row_vectors(field, dim, vs)?;
    Ok(rank(&m) == vs.len())
}

/// Coordinates of `v` over `basis`, when `basis` is independent and spans `v`.
pub fn coordinates(v: &FVector, basis: &[FVector]) -> Option<Vec<u32>> {
    if basis.is_empty() {
        return v.is_zero().then(Vec::new);
    }
    if !theta(basis).ok()? {
        return None;
    }
    if basis[0].dim() != v.dim() || basis[0].field() != v.field() {
        return None;
    }
    let m = FMatrix::from_column_vectors(v.field(), v.dim(), basis).ok()?;
    solve(&m, v).ok()?.map(FVector::into_coords)
}

/// The coordinate function: the i-th (0-based) coefficient of `v` over an
/// independent `basis` spanning it, and 0 otherwise.
///
/// Panics if `i` is not a position of `basis`.
pub fn coord(v: &FVector, basis: &[FVector], i: usize) -> Scalar {
    assert!(i < basis.len(), "coordinate index {i} out of range");
    match coordinates(v, basis) {
        Some(c) => Scalar {
            value: c[i],
            field: v.field(),
        },
        None => Scalar::zero(v.field()),
    }
}

/// Incrementally maintained row-echelon basis, used for greedy independence scans.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: Fp,
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(field: Fp, dim: usize) -> Self {
        EchelonBasis {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut w = v.to_vec();
        for (pc, row) in &self.rows {
            let c = w[*pc];
            if c != 0 {
                for (a, &b) in w.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &FVector) -> bool {
        self.reduce(v.coords()).iter().all(|&c| c == 0)
    }

    /// Adds `v` if it is independent of the current span; reports whether it was added.
    pub fn insert(&mut self, v: &FVector) -> bool {
        assert_eq!(v.dim(), self.dim);
        let f = self.field;
        let mut w = self.reduce(v.coords());
        let Some(pc) = w.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]).expect("nonzero");
        for a in w.iter_mut() {
            *a = f.mul(*a, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (a, &b) in row.iter_mut().zip(&w) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
        }
        self.rows.push((pc, w));
        true
    }
}

/// Positions of the greedy leftmost maximal independent subtuple.
pub fn greedy_independent(vs: &[FVector]) -> Vec<usize> {
    let Some(first) = vs.first() else {
        return Vec::new();
    };
    let mut echelon = EchelonBasis::new(first.field(), first.dim());
    vs.iter()
        .enumerate()
        .filter(|(_, v)| echelon.insert(v))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Fp {
        Fp::new(p).unwrap()
    }

    fn mat(p: u32, rows: &[&[u32]]) -> FMatrix {
        FMatrix::from_rows(f(p), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rejects_composite_moduli() {
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(65537).is_err());
        assert!(Fp::new(65521).is_ok());
    }

    #[test]
    fn field_axioms_small_primes() {
        for p in [2, 3, 5, 7, 13] {
            let k = f(p);
            for a in 1..p {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            }
            assert_eq!(k.inv(0), None);
        }
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = FMatrix::identity(f(2), 3);
        let r = rref(&id);
        assert_eq!(r.reduced, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_zero_matrix() {
        let z = FMatrix::zeros(f(3), 2, 3);
        let r = rref(&z);
        assert_eq!(r.reduced, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one_over_f5() {
        let r = rref(&mat(5, &[&[1, 2], &[2, 4]]));
        assert_eq!(r.reduced, mat(5, &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&FMatrix::identity(f(5), 4)).is_empty());
        let k = kernel_basis(&FMatrix::zeros(f(3), 3, 3));
        assert_eq!(
            k,
            (0..3)
                .map(|i| FVector::unit(f(3), 3, i))
                .collect::<Vec<_>>()
        );
        let k = kernel_basis(&mat(2, &[&[1, 1]]));
        assert_eq!(k, vec![FVector::new(f(2), vec![1, 1])]);
    }

    #[test]
    fn solve_examples() {
        let b = FVector::new(f(7), vec![3, 5, 6]);
        assert_eq!(
            solve(&FMatrix::identity(f(7), 3), &b).unwrap(),
            Some(b.clone())
        );
        assert_eq!(
            solve(&mat(5, &[&[0]]), &FVector::new(f(5), vec![1])).unwrap(),
            None
        );
        assert_eq!(
            solve(
                &mat(3, &[&[1, 1], &[0, 1]]),
                &FVector::new(f(3), vec![2, 1])
            )
            .unwrap(),
            Some(FVector::new(f(3), vec![1, 1]))
        );
        assert!(solve(&mat(3, &[&[1, 1]]), &FVector::new(f(3), vec![2, 1])).is_err());
    }

    #[test]
    fn theta_examples() {
        let k = f(2);
        let e1 = FVector::unit(k, 3, 0);
        let e2 = FVector::unit(k, 3, 1);
        assert!(theta(&[e1.clone(), e2]).unwrap());
        assert!(!theta(&[e1.clone(), e1.clone()]).unwrap());
        assert!(!theta(&[FVector::zero(k, 3)]).unwrap());
        assert!(theta(&[]).unwrap());
        assert!(matches!(
            theta(&[e1, FVector::unit(k, 2, 0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coord_examples() {
        let k = f(5);
        let v1 = FVector::new(k, vec![1, 1, 0]);
        let v2 = FVector::new(k, vec![0, 1, 3]);
        let v = v1.scale(2).add(&v2.scale(3));
        let basis = [v1.clone(), v2.clone()];
        assert_eq!(coord(&v, &basis, 0).value(), 2);
        assert_eq!(coord(&v, &basis, 1).value(), 3);
        for j in 0..2 {
            for i in 0..2 {
                assert_eq!(coord(&basis[j], &basis, i).value(), u32::from(i == j));
            }
        }
        // dependent basis: total-function convention
        assert_eq!(coord(&v, &[v1.clone(), v1.scale(2)], 0).value(), 0);
        // outside the span
        assert_eq!(coord(&FVector::unit(k, 3, 2), &[v1], 0).value(), 0);
    }

    #[test]
    fn determinant_matches_cofactor_on_3x3() {
        let m = mat(7, &[&[2, 3, 1], &[4, 0, 5], &[1, 6, 2]]);
        // 2(0-30) - 3(8-5) + 1(24-0) = -60 - 9 + 24 = -45 = 4 mod 7
        assert_eq!(determinant(&m), 4);
    }

    #[test]
    fn greedy_support_is_leftmost() {
        let k = f(5);
        let v = FVector::new(k, vec![1, 2, 0]);
        let w = FVector::new(k, vec![0, 1, 1]);
        assert_eq!(greedy_independent(&[v.clone(), v.scale(2), w]), vec![0, 2]);
    }

    #[test]
    fn vector_json_carries_modulus() {
        let v = FVector::new(f(5), vec![1, 4, 0]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"p":5,"coords":[1,4,0]}"#);
        assert_eq!(serde_json::from_str::<FVector>(&s).unwrap(), v);
        assert!(serde_json::from_str::<FVector>(r#"{"p":5,"coords":[7]}"#).is_err());
        assert!(serde_json::from_str::<FVector>(r#"{"p":6,"coords":[1]}"#).is_err());
    }
}
