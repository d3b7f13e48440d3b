//! Exact linear algebra over a field (ℚ or ℤ/p).
//!
//! Subspaces are stored by their reduced row-echelon basis, which is
//! canonical: two subspaces are equal iff their bases are identical.

use crate::error::Result;
use crate::scalars::{RingSpec, Scalar};

/// A subspace of `field^dim`, stored as a reduced row-echelon basis with
/// strictly increasing pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    field: RingSpec,
    dim: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: RingSpec, dim: usize) -> Result<Self> {
        field.require_field()?;
        Ok(Subspace { field, dim, rows: Vec::new(), pivots: Vec::new() })
    }

    pub fn whole(field: RingSpec, dim: usize) -> Result<Self> {
        let rows = (0..dim)
            .map(|i| {
                let mut v = vec![field.zero(); dim];
                v[i] = field.one();
                v
            })
            .collect();
        field.require_field()?;
        Ok(Subspace { field, dim, rows, pivots: (0..dim).collect() })
    }

    /// Row space of `vectors`, each of length `dim`.
    pub fn span(field: RingSpec, dim: usize, vectors: impl IntoIterator<Item = Vec<Scalar>>) -> Result<Self> {
        field.require_field()?;
        let rows: Vec<Vec<Scalar>> = vectors.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == dim));
        let (rows, pivots) = rref(rows, dim);
        Ok(Subspace { field, dim, rows, pivots })
    }

    /// Solution space of `matrix · x = 0`, where `matrix` has `ncols` columns.
    pub fn kernel(field: RingSpec, ncols: usize, matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        field.require_field()?;
        let (reduced, pivots) = rref(matrix, ncols);
        let mut is_pivot = vec![None; ncols];
        for (row, &col) in pivots.iter().enumerate() {
            is_pivot[col] = Some(row);
        }
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|&c| is_pivot[c].is_none()) {
            let mut v = vec![field.zero(); ncols];
            v[free] = field.one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -&reduced[row][free];
            }
            basis.push(v);
        }
        Subspace::span(field, ncols, basis)
    }

    pub fn field(&self) -> RingSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (row, &col) in self.rows.iter().zip(&self.pivots) {
            if r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (x, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x = &*x - &(&factor * b);
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&c| v[c].clone()).collect())
    }

    /// First basis vector of `other` that is not in `self`.
    pub fn first_outside<'a>(&self, other: &'a Subspace) -> Option<&'a [Scalar]> {
        other.rows.iter().find(|v| !self.contains(v)).map(Vec::as_slice)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        other.first_outside(self).is_none()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.field, self.dim, self.rows.iter().chain(&other.rows).cloned())
            .expect("field checked at construction")
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

/// Row-reduces `rows` (each of length `ncols`) to reduced echelon form,
/// dropping zero rows. Returns the rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].inverse().expect("nonzero pivot over a field");
        for x in rows[next].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    (rows, pivots)
}

pub fn rank(field: RingSpec, ncols: usize, rows: Vec<Vec<Scalar>>) -> Result<usize> {
    Ok(Subspace::span(field, ncols, rows)?.dim())
}
