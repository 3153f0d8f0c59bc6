//! Degree-0 first-order deformations over `F_p`: the dimension of
//! `(ker(syz^T over S/I) / im(jac^T over S/I))_0`, mirroring the
//! Macaulay2 `kernel transpose syz / image transpose jacobian` recipe.
//!
//! Kernels over `S/I` are computed by augmenting the transposed syzygy
//! matrix with `g * Id` columns for the Groebner basis elements `g` and
//! taking module syzygies over `S`, truncated at degree 0 (higher-degree
//! kernel generators cannot meet the degree-0 piece).

use crate::error::Result;
use crate::gb::engine::{Engine, EngineOpts, ModOrder, ModPoly};
use crate::gb::{normal_form_by, Ideal};
use crate::linalg::RowReducer;
use crate::ring::{jacobian, monomials_of_degree, Monomial, Polynomial};

use super::{syzygy_matrix, ChainComplex, GradedMatrix};

pub fn t1_degree0(ideal: &Ideal) -> Result<usize> {
    let ring = *ideal.ring();
    let (gens, _) = ideal.minimal_generators()?;
    let twists: Vec<i64> = gens.iter().map(|g| -(g.degree().unwrap() as i64)).collect();
    let d1 = GradedMatrix::new(ring, vec![0], twists, vec![gens])?;
    let d2 = syzygy_matrix(&d1)?;
    t1_degree0_from_presentation(ideal, &d1, &d2)
}

/// Variant reusing an already-computed minimal free resolution.
pub fn t1_degree0_with_res(ideal: &Ideal, res: &ChainComplex) -> Result<usize> {
    t1_degree0_from_presentation(ideal, res.differential(1), res.differential(2))
}

fn t1_degree0_from_presentation(
    ideal: &Ideal,
    d1: &GradedMatrix,
    d2: &GradedMatrix,
) -> Result<usize> {
    let ring = *ideal.ring();
    let field = ring.field();
    let nvars = ring.nvars();
    let gb = ideal.groebner_basis()?.to_vec();
    let leads: Vec<Monomial> = gb.iter().map(|g| g.lead().unwrap().mono).collect();
    let gens: Vec<Polynomial> = (0..d1.cols()).map(|j| d1.entry(0, j).clone()).collect();
    let gen_degs: Vec<i64> = gens.iter().map(|g| g.degree().unwrap() as i64).collect();

    // phi = d2^T : ⊕ S(d_k) -> ⊕ S(-b_c); kernel over S/I via augmentation.
    let phi = d2.transpose_dual();
    let order = ModOrder::with_weights(phi.target_twists().iter().map(|t| -t).collect());
    let mut cols: Vec<ModPoly> = Vec::new();
    let mut col_degrees: Vec<i64> = Vec::new();
    for k in 0..phi.cols() {
        let mut terms = Vec::new();
        for r in 0..phi.rows() {
            for t in phi.entry(r, k).terms() {
                terms.push(order.term(r, t.mono, t.coeff));
            }
        }
        cols.push(ModPoly::from_unsorted(field, terms));
        col_degrees.push(-phi.source_twists()[k]);
    }
    let n_kernel_cols = cols.len();
    for r in 0..phi.rows() {
        let w = -phi.target_twists()[r];
        for g in &gb {
            let terms =
                g.terms().iter().map(|t| order.term(r, t.mono, t.coeff)).collect::<Vec<_>>();
            cols.push(ModPoly::from_unsorted(field, terms));
            col_degrees.push(g.degree().unwrap() as i64 + w);
        }
    }
    let rep_order = ModOrder::with_weights(col_degrees);
    let eopts = EngineOpts {
        track: true,
        budget_steps: None,
        truncate: Some(0),
        interreduce_inputs: false,
        reduce_tails: false,
    };
    let out = Engine::run(&ring, &order, &cols, rep_order, eopts)?;

    // Kernel generators of internal degree <= 0, projected to the first
    // block of coordinates.
    let mut kernel_gens: Vec<(i64, Vec<Polynomial>)> = Vec::new();
    for syz in &out.syzygies {
        let Some(lead) = syz.lead() else { continue };
        let degree = lead.tdeg;
        if degree > 0 {
            continue;
        }
        let mut comps = vec![ring.zero(); n_kernel_cols];
        let mut nontrivial = false;
        for t in &syz.terms {
            if (t.pos as usize) < n_kernel_cols {
                let add = ring.monomial(t.mono, t.coeff as i64);
                comps[t.pos as usize] = comps[t.pos as usize].add(&add)?;
                nontrivial = true;
            }
        }
        if nontrivial {
            kernel_gens.push((degree, comps));
        }
    }

    // Standard-monomial coordinates of ⊕_k R_{d_k}.
    let std_of = |d: i64| -> Vec<Monomial> {
        if d < 0 {
            return Vec::new();
        }
        monomials_of_degree(nvars, d as u32)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .collect()
    };
    let mut offsets = Vec::with_capacity(gens.len());
    let mut index = std::collections::HashMap::new();
    let mut dim = 0usize;
    for (k, &dk) in gen_degs.iter().enumerate() {
        offsets.push(dim);
        for m in std_of(dk) {
            index.insert((k, m), dim);
            dim += 1;
        }
    }
    let expand = |comps: &[Polynomial]| -> Vec<u32> {
        let mut v = vec![0u32; dim];
        for (k, c) in comps.iter().enumerate() {
            let nf = normal_form_by(c, &gb);
            for t in nf.terms() {
                let idx = index[&(k, t.mono)];
                v[idx] = t.coeff;
            }
        }
        v
    };

    // Degree-0 piece of the kernel: R-multiples of the generators.
    let mut ker = RowReducer::new(field, dim);
    for (degree, comps) in &kernel_gens {
        for m in std_of(-degree) {
            let shifted: Vec<Polynomial> = comps.iter().map(|c| c.mul_monomial(&m)).collect();
            ker.insert(expand(&shifted));
        }
    }

    // Degree-0 piece of the image of the transposed Jacobian: columns have
    // internal degree -1, so multiply by the linear standard monomials.
    let jac = jacobian(&gens)?;
    let mut img = RowReducer::new(field, dim);
    for row in jac.iter().take(nvars) {
        for m in std_of(1) {
            let shifted: Vec<Polynomial> = row.iter().map(|c| c.mul_monomial(&m)).collect();
            img.insert(expand(&shifted));
        }
    }

    Ok(ker.rank() - img.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolve::minimal_free_resolution;
    use crate::ring::{parse_polynomial, Ring};

    /// Independent dense-linear-algebra oracle for the degree-0 piece:
    /// builds the degree-0 slice of the map `⊕ R_{d_k} -> ⊕ R_{u_c}` given
    /// by the transposed syzygy matrix and takes nullity minus the rank of
    /// the transposed-Jacobian slice, never touching the module engine.
    fn t1_degree0_dense_oracle(ideal: &Ideal) -> usize {
        let ring = *ideal.ring();
        let field = ring.field();
        let nvars = ring.nvars();
        let gb = ideal.groebner_basis().unwrap().to_vec();
        let leads: Vec<Monomial> = gb.iter().map(|g| g.lead().unwrap().mono).collect();
        let (gens, _) = ideal.minimal_generators().unwrap();
        let gen_degs: Vec<i64> = gens.iter().map(|g| g.degree().unwrap() as i64).collect();
        let twists: Vec<i64> = gen_degs.iter().map(|d| -d).collect();
        let d1 = GradedMatrix::new(ring, vec![0], twists, vec![gens.clone()]).unwrap();
        let d2 = syzygy_matrix(&d1).unwrap();

        let std_of = |d: i64| -> Vec<Monomial> {
            if d < 0 {
                return Vec::new();
            }
            monomials_of_degree(nvars, d as u32)
                .into_iter()
                .filter(|m| !leads.iter().any(|l| l.divides(m)))
                .collect()
        };
        // Source coordinates: (k, monomial of degree d_k).
        let mut src: Vec<(usize, Monomial)> = Vec::new();
        for (k, &dk) in gen_degs.iter().enumerate() {
            for m in std_of(dk) {
                src.push((k, m));
            }
        }
        // Target coordinates: per syzygy column c, monomials of degree u_c.
        let mut tgt_index = std::collections::HashMap::new();
        let mut tgt_dim = 0usize;
        let col_degs: Vec<i64> = d2.source_twists().iter().map(|u| -u).collect();
        for (c, &uc) in col_degs.iter().enumerate() {
            for m in std_of(uc) {
                tgt_index.insert((c, m), tgt_dim);
                tgt_dim += 1;
            }
        }
        // Row-space of the degree-0 slice of phi equals its column space;
        // nullity = dim source - rank.
        let mut rr = RowReducer::new(field, tgt_dim);
        let mut rank = 0usize;
        for &(k, m) in &src {
            let mut v = vec![0u32; tgt_dim];
            for c in 0..d2.cols() {
                // phi[c][k] = d2[k][c]
                let prod = d2.entry(k, c).mul_monomial(&m);
                let nf = normal_form_by(&prod, &gb);
                for t in nf.terms() {
                    v[tgt_index[&(c, t.mono)]] = field.add(v[tgt_index[&(c, t.mono)]], t.coeff);
                }
            }
            if rr.insert(v) {
                rank += 1;
            }
        }
        let nullity = src.len() - rank;

        // Image of the transposed Jacobian in degree 0, in source coords.
        let mut src_index = std::collections::HashMap::new();
        for (i, &(k, m)) in src.iter().enumerate() {
            src_index.insert((k, m), i);
        }
        let jac = jacobian(&gens).unwrap();
        let mut img = RowReducer::new(field, src.len());
        for row in jac.iter().take(nvars) {
            for m in std_of(1) {
                let mut v = vec![0u32; src.len()];
                for (k, c) in row.iter().enumerate() {
                    let nf = normal_form_by(&c.mul_monomial(&m), &gb);
                    for t in nf.terms() {
                        v[src_index[&(k, t.mono)]] = field.add(v[src_index[&(k, t.mono)]], t.coeff);
                    }
                }
                img.insert(v);
            }
        }
        nullity - img.rank()
    }

    #[test]
    fn matches_dense_oracle_on_complete_intersection() {
        // Two generic quadrics in P^3 (an elliptic-curve cone).
        let ring = Ring::new(101, 4).unwrap();
        let i = Ideal::new(
            ring,
            vec![
                parse_polynomial(&ring, "x0^2+3*x1*x2+5*x3^2+7*x0*x3").unwrap(),
                parse_polynomial(&ring, "x1^2+11*x0*x2+13*x2*x3+2*x0*x1").unwrap(),
            ],
        )
        .unwrap();
        let via_engine = t1_degree0(&i).unwrap();
        let via_dense = t1_degree0_dense_oracle(&i);
        assert_eq!(via_engine, via_dense);
    }

    #[test]
    fn matches_dense_oracle_on_pfaffian_quadrics() {
        // Codimension-3 Pfaffian quadrics in P^5 keep the syzygy matrix
        // nontrivial (non-Koszul relations).
        let ring = Ring::new(101, 6).unwrap();
        let p = |s: &str| parse_polynomial(&ring, s).unwrap();
        let i = Ideal::new(
            ring,
            vec![
                p("x0*x3+17*x1*x4+3*x2*x5+x0^2"),
                p("x1*x3+5*x2*x4+29*x0*x5+x1^2"),
                p("x2*x3+7*x0*x4+11*x1*x5+41*x2^2"),
                p("x3^2+19*x4*x5+23*x0*x1"),
                p("x4^2+31*x3*x5+37*x0*x2"),
            ],
        )
        .unwrap();
        let via_engine = t1_degree0(&i).unwrap();
        let via_dense = t1_degree0_dense_oracle(&i);
        assert_eq!(via_engine, via_dense);
    }

    #[test]
    fn resolution_variant_agrees() {
        let ring = Ring::new(101, 4).unwrap();
        let i = Ideal::new(
            ring,
            vec![
                parse_polynomial(&ring, "x0^2+x1*x3").unwrap(),
                parse_polynomial(&ring, "x1^2+9*x2*x3").unwrap(),
            ],
        )
        .unwrap();
        let res = minimal_free_resolution(&i).unwrap();
        assert_eq!(t1_degree0(&i).unwrap(), t1_degree0_with_res(&i, &res).unwrap());
    }
}
