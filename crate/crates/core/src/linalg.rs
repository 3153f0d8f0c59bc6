//! Dense row-echelon linear algebra over `F_p` on monomial bases of graded
//! pieces. Sizes here stay in the low thousands of columns, so incremental
//! Gaussian elimination is enough.

use std::collections::HashMap;

use crate::ring::{monomials_of_degree, Monomial, PrimeField, Polynomial};

/// Incremental row space with unit pivots; rows stay reduced against the
/// recorded pivots only (no back-substitution, ranks don't need it).
pub(crate) struct RowReducer {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<u32>>,
    pivot_of_col: Vec<Option<usize>>,
}

impl RowReducer {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        RowReducer { field, ncols, rows: Vec::new(), pivot_of_col: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn eliminate(&self, v: &mut [u32]) {
        let f = self.field;
        for c in 0..self.ncols {
            if v[c] == 0 {
                continue;
            }
            if let Some(r) = self.pivot_of_col[c] {
                let factor = v[c];
                let row = &self.rows[r];
                for k in c..self.ncols {
                    if row[k] != 0 {
                        v[k] = f.sub(v[k], f.mul(factor, row[k]));
                    }
                }
            }
        }
    }

    /// Returns true when `v` was independent of the current row space.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.ncols);
        self.eliminate(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[c]);
        for x in v.iter_mut() {
            if *x != 0 {
                *x = self.field.mul(*x, inv);
            }
        }
        self.pivot_of_col[c] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    #[cfg(test)]
    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.eliminate(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

/// Monomial basis of one graded piece `S_d`, with index lookup.
pub(crate) struct PieceIndex {
    pub monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl PieceIndex {
    pub fn new(nvars: usize, d: i64) -> Self {
        let monos = if d < 0 { Vec::new() } else { monomials_of_degree(nvars, d as u32) };
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        PieceIndex { monos, index }
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// Basis of a graded piece of a free module `⊕ S(t_i)` in internal degree
/// `d`: per position, the monomials of degree `d + t_i`.
pub(crate) struct ModulePiece {
    pub pieces: Vec<PieceIndex>,
    pub offsets: Vec<usize>,
    pub dim: usize,
}

impl ModulePiece {
    pub fn new(nvars: usize, twists: &[i64], d: i64) -> Self {
        let mut pieces = Vec::with_capacity(twists.len());
        let mut offsets = Vec::with_capacity(twists.len());
        let mut dim = 0usize;
        for &t in twists {
            offsets.push(dim);
            let p = PieceIndex::new(nvars, d + t);
            dim += p.dim();
            pieces.push(p);
        }
        ModulePiece { pieces, offsets, dim }
    }

    /// Dense coordinates of a homogeneous element given per-position
    /// polynomials; panics if a monomial falls outside the piece (degree
    /// mismatch), which callers rule out by homogeneity checks.
    pub fn expand(&self, components: &[(usize, &Polynomial)]) -> Vec<u32> {
        let mut v = vec![0u32; self.dim];
        for &(pos, poly) in components {
            let piece = &self.pieces[pos];
            let off = self.offsets[pos];
            for t in poly.terms() {
                let idx = piece
                    .position(&t.mono)
                    .expect("monomial outside graded piece (inhomogeneous data)");
                v[off + idx] = t.coeff;
            }
        }
        v
    }
}
