//! The coarse smoothness test and the `c3` computation from the
//! degeneracy curve of a random triple.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gb::{combinations, Ideal};
use crate::hilbert::{curve_invariants, cy_invariants_from_hp, hilbert_polynomial, locus_dimension};
use crate::linalg::{ModulePiece, RowReducer};
use crate::ring::{jacobian, monomials_of_degree, Polynomial, Ring};

use super::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmoothVerdict {
    Smooth,
    IsolatedHypersurfaceSingularities,
    Inconclusive,
}

/// Per-triple record: dimensions and Hilbert polynomials of
/// `V(I4(triple)+I)` and `V(Jac3(triple)+I)`.
#[derive(Clone, Debug, Serialize)]
pub struct TripleReport {
    pub i4_dim: i64,
    pub jac3_dim: i64,
    pub i4_hp: String,
    pub jac3_hp: String,
    pub clause_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub triples: Vec<TripleReport>,
    /// Dimension of `V(Jac3(f)+Jac3(g)+I)`; `None` when clauses (1)/(2)
    /// already failed.
    pub combined_dim: Option<i64>,
    pub verdict: SmoothVerdict,
}

/// Draws a random element of the degree-`e` graded piece of `I` (a uniform
/// `F_p`-combination of the monomial multiples of the generators).
fn random_element_of_degree(ideal: &Ideal, e: u32, rng: &mut Rng) -> Polynomial {
    let ring = *ideal.ring();
    let p = ring.modulus();
    let mut acc = ring.zero();
    for g in ideal.generators() {
        let gd = g.degree().unwrap();
        if gd > e {
            continue;
        }
        for m in monomials_of_degree(ring.nvars(), e - gd) {
            let c = rng.below(p);
            if c != 0 {
                acc = acc.merge_scaled(g, c, &m);
            }
        }
    }
    acc
}

fn degree_piece_dim(ideal: &Ideal, e: u32) -> usize {
    let ring = ideal.ring();
    let piece = ModulePiece::new(ring.nvars(), &[0], e as i64);
    let mut rr = RowReducer::new(ring.field(), piece.dim);
    for g in ideal.generators() {
        let gd = g.degree().unwrap();
        if gd > e {
            continue;
        }
        for m in monomials_of_degree(ring.nvars(), e - gd) {
            rr.insert(piece.expand(&[(0, &g.mul_monomial(&m))]));
        }
    }
    rr.rank()
}

/// All `3x3` minors of the gradient matrix of a triple (rows = variables).
fn jac3_minors(ring: &Ring, triple: &[Polynomial; 3]) -> Result<Vec<Polynomial>> {
    let grads = jacobian(&triple.to_vec())?; // nvars x 3
    let n = ring.nvars();
    let mut out = Vec::new();
    for rows in combinations(n, 3) {
        let det = det3_rows(ring, &grads, &rows)?;
        if !det.is_zero() {
            out.push(det);
        }
    }
    Ok(out)
}

fn det3_rows(ring: &Ring, grads: &[Vec<Polynomial>], rows: &[usize]) -> Result<Polynomial> {
    let m = |r: usize, c: usize| &grads[rows[r]][c];
    let mut acc = ring.zero();
    let perms: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([0, 2, 1], false),
        ([1, 0, 2], false),
        ([2, 1, 0], false),
    ];
    for (p, pos) in perms {
        let t = m(0, p[0]).mul(m(1, p[1]))?.mul(m(2, p[2]))?;
        acc = if pos { acc.add(&t)? } else { acc.sub(&t)? };
    }
    Ok(acc)
}

/// `I4(h1,h2,h3)`: all `4x4` minors of `[grad h1 | grad h2 | grad h3 |
/// grad h]` as `h` runs over the generators of `I`, expanded along the
/// fourth column against the shared `3x3` minors of the triple.
fn i4_minors(ring: &Ring, ideal: &Ideal, triple: &[Polynomial; 3]) -> Result<Vec<Polynomial>> {
    let n = ring.nvars();
    let grads = jacobian(&triple.to_vec())?;
    // 3x3 minors of the triple's Jacobian indexed by ascending row triples
    let mut minor3 = std::collections::HashMap::new();
    for rows in combinations(n, 3) {
        let det = det3_rows(ring, &grads, &rows)?;
        minor3.insert(rows.clone(), det);
    }
    let mut out = Vec::new();
    for h in ideal.generators() {
        let gh: Vec<Polynomial> =
            (0..n).map(|i| h.partial_derivative(i)).collect::<Result<Vec<_>>>()?;
        for rows in combinations(n, 4) {
            // Laplace along the fourth column: sum over the deleted row.
            let mut acc = ring.zero();
            for (t, &r) in rows.iter().enumerate() {
                if gh[r].is_zero() {
                    continue;
                }
                let sub: Vec<usize> =
                    rows.iter().enumerate().filter(|(u, _)| *u != t).map(|(_, &v)| v).collect();
                let m3 = &minor3[&sub];
                if m3.is_zero() {
                    continue;
                }
                let term = gh[r].mul(m3)?;
                // cofactor sign of entry (t, 3) in a 4x4: (-1)^{t+3}
                acc = if t % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            if !acc.is_zero() {
                out.push(acc);
            }
        }
    }
    Ok(out)
}

fn triple_report(ideal: &Ideal, triple: &[Polynomial; 3]) -> Result<TripleReport> {
    let ring = ideal.ring();
    let i4 = ideal.sum(&Ideal::new(*ring, i4_minors(ring, ideal, triple)?)?)?;
    let jac3 = ideal.sum(&Ideal::new(*ring, jac3_minors(ring, triple)?)?)?;
    let i4_dim = locus_dimension(&i4)?;
    let jac3_dim = locus_dimension(&jac3)?;
    let i4_hp = hilbert_polynomial(&i4)?;
    let jac3_hp = hilbert_polynomial(&jac3)?;
    let clause_holds = i4_dim == 1 && jac3_dim == 1 && i4_hp == jac3_hp;
    Ok(TripleReport {
        i4_dim,
        jac3_dim,
        i4_hp: i4_hp.to_string(),
        jac3_hp: jac3_hp.to_string(),
        clause_holds,
    })
}

/// The coarse smoothness test: draws two random degree-`e` triples from
/// `I`, evaluates the two per-triple clauses and the combined-locus clause,
/// and returns the verdict.
pub fn coarse_smoothness(ideal: &Ideal, e: u32, rng: &mut Rng) -> Result<SmoothnessReport> {
    let dim = locus_dimension(ideal)?;
    if dim != 3 {
        return Err(Error::WrongDimension { expected: 3, found: dim });
    }
    if degree_piece_dim(ideal, e) < 3 {
        return Err(Error::BadData(format!(
            "ideal has fewer than 3 independent elements in degree {}",
            e
        )));
    }
    let ring = ideal.ring();
    let draw_triple = |rng: &mut Rng| -> [Polynomial; 3] {
        [
            random_element_of_degree(ideal, e, rng),
            random_element_of_degree(ideal, e, rng),
            random_element_of_degree(ideal, e, rng),
        ]
    };
    let f = draw_triple(rng);
    let g = draw_triple(rng);
    let rf = triple_report(ideal, &f)?;
    let rg = triple_report(ideal, &g)?;
    if !rf.clause_holds || !rg.clause_holds {
        return Ok(SmoothnessReport {
            triples: vec![rf, rg],
            combined_dim: None,
            verdict: SmoothVerdict::Inconclusive,
        });
    }
    let mut combined_gens = jac3_minors(ring, &f)?;
    combined_gens.extend(jac3_minors(ring, &g)?);
    let combined = ideal.sum(&Ideal::new(*ring, combined_gens)?)?;
    let cdim = locus_dimension(&combined)?;
    let verdict = if cdim == -1 {
        SmoothVerdict::Smooth
    } else if cdim == 0 {
        SmoothVerdict::IsolatedHypersurfaceSingularities
    } else {
        SmoothVerdict::Inconclusive
    };
    Ok(SmoothnessReport { triples: vec![rf, rg], combined_dim: Some(cdim), verdict })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveData {
    pub degree: i64,
    pub pa: i64,
}

/// Draws degree-`e` triples until `V(Jac3 + I)` is a curve, then applies
/// the `c3` formula with `(d, c2H)` from the Hilbert polynomial of `I`.
/// Returns `(c3, pa, curve data)`.
pub fn c3_of(ideal: &Ideal, e: u32, rng: &mut Rng, tries: u32) -> Result<(i64, i64, CurveData)> {
    let hp = hilbert_polynomial(ideal)?;
    let (d, c2h, _) = cy_invariants_from_hp(&hp, ideal.ring().nvars())?;
    let ring = ideal.ring();
    let mut last_dim = i64::MIN;
    for _ in 0..tries.max(1) {
        let triple = [
            random_element_of_degree(ideal, e, rng),
            random_element_of_degree(ideal, e, rng),
            random_element_of_degree(ideal, e, rng),
        ];
        let jac3 = ideal.sum(&Ideal::new(*ring, jac3_minors(ring, &triple)?)?)?;
        last_dim = locus_dimension(&jac3)?;
        if last_dim != 1 {
            continue;
        }
        let (deg, pa) = curve_invariants(&jac3)?;
        let c3 = super::invariants::c3_via_degeneracy_curve(d, c2h, e as i64, pa);
        return Ok((c3, pa, CurveData { degree: deg, pa }));
    }
    Err(Error::WrongDimension { expected: 1, found: last_dim })
}
