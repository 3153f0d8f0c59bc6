//! Graded pieces of `Ext^j(S/I, S)` as finite linear algebra over `F_p`,
//! and the sheaf-cohomology dimensions obtained from them by graded local
//! duality.

use crate::error::{Error, Result};
use crate::gb::Ideal;
use crate::linalg::{ModulePiece, RowReducer};
use crate::ring::monomials_of_degree;

use super::{minimal_free_resolution, ChainComplex, GradedMatrix};

/// Dimension of `Ext^j(S/I, S)` in internal degree `d`, computed as
/// homology of the transposed-with-negated-twists complex restricted to the
/// degree-`d` piece. Indices beyond the resolution length give 0 (projective
/// dimension bound).
pub fn ext_graded_dim(res: &ChainComplex, j: usize, d: i64) -> Result<usize> {
    if j > res.len() {
        return Ok(0);
    }
    let ring = res.differential(1).ring();
    let nvars = ring.nvars();
    let dual_twists: Vec<i64> = res.term_twists(j).iter().map(|t| -t).collect();
    let piece = ModulePiece::new(nvars, &dual_twists, d);
    let outgoing = if j < res.len() {
        transpose_piece_rank(res.differential(j + 1), d)
    } else {
        0
    };
    let incoming = if j >= 1 { transpose_piece_rank(res.differential(j), d) } else { 0 };
    Ok(piece.dim - outgoing - incoming)
}

/// Rank of the degree-`d` piece of the dual map
/// `Hom(target(m), S)_d -> Hom(source(m), S)_d`.
fn transpose_piece_rank(m: &GradedMatrix, d: i64) -> usize {
    let ring = m.ring();
    let nvars = ring.nvars();
    let src_twists: Vec<i64> = m.target_twists().iter().map(|t| -t).collect();
    let dst_twists: Vec<i64> = m.source_twists().iter().map(|t| -t).collect();
    let dst = ModulePiece::new(nvars, &dst_twists, d);
    if dst.dim == 0 {
        return 0;
    }
    let mut rr = RowReducer::new(ring.field(), dst.dim);
    for (i, &t) in src_twists.iter().enumerate() {
        let deg = d + t;
        if deg < 0 {
            continue;
        }
        for mono in monomials_of_degree(nvars, deg as u32) {
            let images: Vec<_> =
                (0..m.cols()).map(|jj| m.entry(i, jj).mul_monomial(&mono)).collect();
            let refs: Vec<(usize, &_)> = images
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(jj, p)| (jj, p))
                .collect();
            rr.insert(dst.expand(&refs));
        }
    }
    rr.rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheafKind {
    /// `H^i(X, O_X(m))`, `i >= 1`.
    Structure,
    /// `H^1(P^{n-1}, I~(m))`; only `i = 1` is meaningful.
    IdealSheaf,
}

/// Sheaf-cohomology dimensions via graded local duality with `n` variables:
/// `h^i(X, O_X(m)) = dim Ext^{(n-1)-i}(S/I, S)_{-m-n}` for `i >= 1`, and
/// `h^1(I~(m)) = dim Ext^{n-1}(S/I, S)_{-m-n}`.
pub fn sheaf_cohomology_dim_res(
    res: &ChainComplex,
    kind: SheafKind,
    i: u32,
    m: i64,
) -> Result<usize> {
    let n = res.differential(1).ring().nvars();
    let ambient = n - 1;
    match kind {
        SheafKind::Structure => {
            if i < 1 || i as usize > ambient {
                return Err(Error::UnsupportedCohomology(format!(
                    "H^{} of the structure sheaf (need 1 <= i <= {})",
                    i, ambient
                )));
            }
            ext_graded_dim(res, ambient - i as usize, -m - n as i64)
        }
        SheafKind::IdealSheaf => {
            if i != 1 {
                return Err(Error::UnsupportedCohomology(format!(
                    "only H^1 of the ideal sheaf is supported, got H^{}",
                    i
                )));
            }
            ext_graded_dim(res, ambient, -m - n as i64)
        }
    }
}

/// Convenience wrapper resolving `S/I` first.
pub fn sheaf_cohomology_dim(ideal: &Ideal, kind: SheafKind, i: u32, m: i64) -> Result<usize> {
    let res = minimal_free_resolution(ideal)?;
    sheaf_cohomology_dim_res(&res, kind, i, m)
}
