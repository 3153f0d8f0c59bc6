//! Graded free modules and matrices, syzygies, minimal free resolutions,
//! Betti tables and Castelnuovo-Mumford regularity; graded Ext pieces and
//! sheaf-cohomology dimensions live in [`ext`], the tangent-space count in
//! [`t1`].

mod ext;
mod t1;

pub use ext::{ext_graded_dim, sheaf_cohomology_dim, sheaf_cohomology_dim_res, SheafKind};
pub use t1::{t1_degree0, t1_degree0_with_res};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gb::engine::{interreduce_modpolys, Engine, EngineOpts, ModOrder, ModPoly};
use crate::gb::{GbOptions, Ideal};
use crate::ring::{Monomial, Polynomial, Ring};

/// Matrix of homogeneous polynomials between twisted graded free modules:
/// a map `⊕ S(u_j) -> ⊕ S(t_i)` whose entry `(i, j)` is zero or homogeneous
/// of degree `t_i - u_j`.
#[derive(Clone, Debug)]
pub struct GradedMatrix {
    ring: Ring,
    target_twists: Vec<i64>,
    source_twists: Vec<i64>,
    entries: Vec<Polynomial>, // row-major
}

impl GradedMatrix {
    pub fn new(
        ring: Ring,
        target_twists: Vec<i64>,
        source_twists: Vec<i64>,
        rows: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        if rows.len() != target_twists.len() || rows.iter().any(|r| r.len() != source_twists.len())
        {
            return Err(Error::Shape(format!(
                "matrix is not {} x {}",
                target_twists.len(),
                source_twists.len()
            )));
        }
        let entries: Vec<Polynomial> = rows.into_iter().flatten().collect();
        let m = GradedMatrix { ring, target_twists, source_twists, entries };
        m.check_homogeneous("matrix construction")?;
        Ok(m)
    }

    /// Construction without the homogeneity check (used where the caller
    /// immediately verifies and wants the error location itself).
    pub(crate) fn new_unchecked(
        ring: Ring,
        target_twists: Vec<i64>,
        source_twists: Vec<i64>,
        entries: Vec<Polynomial>,
    ) -> Self {
        GradedMatrix { ring, target_twists, source_twists, entries }
    }

    pub fn check_homogeneous(&self, context: &str) -> Result<()> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let e = self.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                let forced = self.target_twists[i] - self.source_twists[j];
                match e.homogeneous_degree() {
                    Some(d) if d as i64 == forced => {}
                    found => {
                        return Err(Error::TwistViolation {
                            context: context.to_string(),
                            row: i,
                            col: j,
                            found,
                            forced,
                        })
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.target_twists.len()
    }

    pub fn cols(&self) -> usize {
        self.source_twists.len()
    }

    pub fn target_twists(&self) -> &[i64] {
        &self.target_twists
    }

    pub fn source_twists(&self) -> &[i64] {
        &self.source_twists
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols() + j]
    }

    pub fn column(&self, j: usize) -> Vec<Polynomial> {
        (0..self.rows()).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.ring.check_same(&other.ring)?;
        if self.source_twists != other.target_twists {
            return Err(Error::Shape(
                "inner twist sequences do not match for composition".into(),
            ));
        }
        let mut entries = Vec::with_capacity(self.rows() * other.cols());
        for i in 0..self.rows() {
            for j in 0..other.cols() {
                let mut acc = self.ring.zero();
                for k in 0..self.cols() {
                    let (a, b) = (self.entry(i, k), other.entry(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(GradedMatrix {
            ring: self.ring,
            target_twists: self.target_twists.clone(),
            source_twists: other.source_twists.clone(),
            entries,
        })
    }

    /// The dual map: transposed entries, negated and swapped twists.
    pub fn transpose_dual(&self) -> GradedMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols() {
            for i in 0..self.rows() {
                entries.push(self.entry(i, j).clone());
            }
        }
        GradedMatrix {
            ring: self.ring,
            target_twists: self.source_twists.iter().map(|u| -u).collect(),
            source_twists: self.target_twists.iter().map(|t| -t).collect(),
            entries,
        }
    }

    /// Tensor with `O(n)`: shifts every twist by `n`, entries unchanged.
    pub fn twist(&self, n: i64) -> GradedMatrix {
        GradedMatrix {
            ring: self.ring,
            target_twists: self.target_twists.iter().map(|t| t + n).collect(),
            source_twists: self.source_twists.iter().map(|u| u + n).collect(),
            entries: self.entries.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Position of the first nonzero degree-0 entry, if any.
    pub fn find_unit(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let e = self.entry(i, j);
                if !e.is_zero() && e.homogeneous_degree() == Some(0) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// A sequence of composable graded matrices `d_1, ..., d_len` with
/// `d_i ∘ d_{i+1} = 0`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    mats: Vec<GradedMatrix>,
}

impl ChainComplex {
    /// Checks interfaces only; composition-zero is the builder's contract
    /// and is verified separately ([`crate::complexes::verify_complex`]).
    pub fn new(mats: Vec<GradedMatrix>) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::Shape("empty complex".into()));
        }
        for w in mats.windows(2) {
            if w[0].source_twists != w[1].target_twists {
                return Err(Error::Shape(
                    "consecutive differentials have mismatched interfaces".into(),
                ));
            }
        }
        Ok(ChainComplex { mats })
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    /// `d_i` for `i` in `1..=len`.
    pub fn differential(&self, i: usize) -> &GradedMatrix {
        &self.mats[i - 1]
    }

    pub fn differentials(&self) -> &[GradedMatrix] {
        &self.mats
    }

    /// Twists of the terms `F_0, ..., F_len`.
    pub fn term_twists(&self, i: usize) -> &[i64] {
        if i == 0 {
            self.mats[0].target_twists()
        } else {
            self.mats[i - 1].source_twists()
        }
    }

    /// First failing composition `d_i ∘ d_{i+1}`, as (i, row, col).
    pub fn first_composition_failure(&self) -> Result<Option<(usize, usize, usize)>> {
        for i in 0..self.mats.len() - 1 {
            let prod = self.mats[i].mul(&self.mats[i + 1])?;
            for r in 0..prod.rows() {
                for c in 0..prod.cols() {
                    if !prod.entry(r, c).is_zero() {
                        return Ok(Some((i + 1, r, c)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_minimal(&self) -> bool {
        self.mats.iter().all(|m| m.find_unit().is_none())
    }
}

/// Betti table: `(homological index i, internal degree j) -> multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i64), u64>,
}

impl BettiTable {
    pub fn get(&self, i: usize, j: i64) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: i64, count: u64) {
        if count > 0 {
            self.entries.insert((i, j), count);
        }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, i64), u64> {
        &self.entries
    }

    /// Number of homological steps (max i).
    pub fn length(&self) -> usize {
        self.entries.keys().map(|&(i, _)| i).max().unwrap_or(0)
    }

    pub fn column_sum(&self, i: usize) -> u64 {
        self.entries.iter().filter(|(&(a, _), _)| a == i).map(|(_, &c)| c).sum()
    }

    /// Castelnuovo-Mumford regularity: `max (j - i)` over nonzero entries.
    pub fn regularity(&self) -> i64 {
        self.entries.keys().map(|&(i, j)| j - i as i64).max().unwrap_or(0)
    }

    /// Minimal degree of a first-syzygy-column generator:
    /// `min { j : beta_{1,j} != 0 }`.
    pub fn min_generator_degree(&self) -> Result<i64> {
        self.entries
            .keys()
            .filter(|&&(i, _)| i == 1)
            .map(|&(_, j)| j)
            .min()
            .ok_or(Error::MissingFirstColumn)
    }

    /// Canonical JSON object `{"i,j": count}` with lexicographically sorted
    /// keys.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, u64> =
            self.entries.iter().map(|(&(i, j), &c)| (format!("{},{}", i, j), c)).collect();
        serde_json::to_value(map).expect("static shape")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<BettiTable> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Shape("Betti JSON must be an object".into()))?;
        let mut t = BettiTable::default();
        for (k, val) in obj {
            let mut parts = k.splitn(2, ',');
            let (i, j) = match (parts.next(), parts.next()) {
                (Some(a), Some(b)) => (
                    a.trim().parse::<usize>().map_err(|_| Error::Shape(format!("bad key {}", k)))?,
                    b.trim().parse::<i64>().map_err(|_| Error::Shape(format!("bad key {}", k)))?,
                ),
                _ => return Err(Error::Shape(format!("bad Betti key {}", k))),
            };
            let c = val.as_u64().ok_or_else(|| Error::Shape(format!("bad count for {}", k)))?;
            t.set(i, j, c);
        }
        Ok(t)
    }
}

impl fmt::Display for BettiTable {
    /// Macaulay2 row convention: row `r`, column `i` holds `beta_{i, i+r}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let len = self.length();
        let maxrow = self.entries.keys().map(|&(i, j)| j - i as i64).max().unwrap_or(0);
        let minrow = self.entries.keys().map(|&(i, j)| j - i as i64).min().unwrap_or(0).min(0);
        write!(f, "    ")?;
        for i in 0..=len {
            write!(f, "{:>6}", i)?;
        }
        writeln!(f)?;
        for r in minrow..=maxrow {
            write!(f, "{:>3}:", r)?;
            for i in 0..=len {
                let c = self.get(i, i as i64 + r);
                if c == 0 {
                    write!(f, "{:>6}", "-")?;
                } else {
                    write!(f, "{:>6}", c)?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `beta_{i,j}` read off a minimal complex: multiplicities of twist `-j` at
/// step `i`, including `F_0` at step 0.
pub fn betti_table(complex: &ChainComplex) -> Result<BettiTable> {
    if let Some((i, j)) = complex.mats.iter().find_map(|m| m.find_unit()) {
        return Err(Error::Shape(format!(
            "complex is not minimal: unit entry at ({}, {})",
            i, j
        )));
    }
    let mut t = BettiTable::default();
    for (step, m) in complex.mats.iter().enumerate() {
        if step == 0 {
            for &tw in m.target_twists() {
                let c = t.get(0, -tw);
                t.set(0, -tw, c + 1);
            }
        }
        for &tw in m.source_twists() {
            let c = t.get(step + 1, -tw);
            t.set(step + 1, -tw, c + 1);
        }
    }
    Ok(t)
}

/// Castelnuovo-Mumford regularity straight from a minimal Betti table.
pub fn regularity(table: &BettiTable) -> i64 {
    table.regularity()
}

/// Columns generating `ker(M)`, as a graded matrix with
/// `M ∘ syzygy_matrix(M) = 0`; the column set is degreewise-minimal.
pub fn syzygy_matrix(m: &GradedMatrix) -> Result<GradedMatrix> {
    let order = ModOrder::with_weights(m.target_twists().iter().map(|t| -t).collect());
    syzygy_matrix_ordered(m, &order, &GbOptions::default())
}

/// As [`syzygy_matrix`] with an explicit module order on the target free
/// module (the resolution builder threads Schreyer-style orders through).
///
/// The recorded syzygies are first interreduced to the reduced Groebner
/// basis of the syzygy module (which caps their degrees), then trimmed to a
/// degreewise-minimal generating subset by graded-piece linear algebra.
pub(crate) fn syzygy_matrix_ordered(
    m: &GradedMatrix,
    order: &ModOrder,
    opts: &GbOptions,
) -> Result<GradedMatrix> {
    m.check_homogeneous("syzygy input")?;
    let ring = m.ring;
    let cols: Vec<ModPoly> = (0..m.cols()).map(|j| column_to_mod(m, j, order)).collect();
    let rep_order = ModOrder::with_weights(m.source_twists().iter().map(|u| -u).collect());
    let eopts = EngineOpts {
        track: true,
        budget_steps: opts.budget_steps,
        truncate: opts.truncate_degree.map(|d| d as i64),
        interreduce_inputs: false,
        reduce_tails: false,
    };
    let out = Engine::run(&ring, order, &cols, rep_order, eopts)?;
    let reduced = interreduce_modpolys(ring.field(), out.syzygies);

    // Convert to columns over the source module of M.
    let mut raw: Vec<(i64, Vec<Polynomial>)> = Vec::with_capacity(reduced.len());
    for syz in &reduced {
        let degree = syz.terms[0].tdeg;
        debug_assert!(syz.terms.iter().all(|t| t.tdeg == degree), "inhomogeneous syzygy");
        let mut comps = vec![ring.zero(); m.cols()];
        for t in &syz.terms {
            let add = ring.monomial(t.mono, t.coeff as i64);
            comps[t.pos as usize] = comps[t.pos as usize].add(&add)?;
        }
        raw.push((degree, comps));
    }
    let kept = minimal_columns(&ring, m.source_twists(), raw);

    let target_twists = m.source_twists().to_vec();
    let source_twists: Vec<i64> = kept.iter().map(|(d, _)| -d).collect();
    let mut rows = vec![Vec::with_capacity(kept.len()); m.cols()];
    for (_, comps) in &kept {
        for (i, c) in comps.iter().enumerate() {
            rows[i].push(c.clone());
        }
    }
    GradedMatrix::new(ring, target_twists, source_twists, rows)
}

/// Greedy degreewise-minimal generating subset of module elements
/// (columns given as (internal degree, components) over the free module
/// with the given twists).
fn minimal_columns(
    ring: &Ring,
    target_twists: &[i64],
    mut cols: Vec<(i64, Vec<Polynomial>)>,
) -> Vec<(i64, Vec<Polynomial>)> {
    use crate::linalg::{ModulePiece, RowReducer};
    use crate::ring::monomials_of_degree;
    cols.sort_by_key(|(d, _)| *d);
    let mut kept: Vec<(i64, Vec<Polynomial>)> = Vec::new();
    let degrees: Vec<i64> = {
        let mut ds: Vec<i64> = cols.iter().map(|(d, _)| *d).collect();
        ds.dedup();
        ds
    };
    for d in degrees {
        let piece = ModulePiece::new(ring.nvars(), target_twists, d);
        let mut rr = RowReducer::new(ring.field(), piece.dim);
        for (kd, comps) in &kept {
            if kd >= &d {
                continue;
            }
            for mono in monomials_of_degree(ring.nvars(), (d - kd) as u32) {
                let shifted: Vec<Polynomial> =
                    comps.iter().map(|c| c.mul_monomial(&mono)).collect();
                let refs: Vec<(usize, &Polynomial)> =
                    shifted.iter().enumerate().filter(|(_, p)| !p.is_zero()).collect();
                rr.insert(piece.expand(&refs));
            }
        }
        for (cd, comps) in cols.iter().filter(|(cd, _)| *cd == d) {
            let refs: Vec<(usize, &Polynomial)> =
                comps.iter().enumerate().filter(|(_, p)| !p.is_zero()).collect();
            if rr.insert(piece.expand(&refs)) {
                kept.push((*cd, comps.clone()));
            }
        }
    }
    kept
}

fn column_to_mod(m: &GradedMatrix, j: usize, order: &ModOrder) -> ModPoly {
    let field = m.ring.field();
    let mut terms = Vec::new();
    for i in 0..m.rows() {
        for t in m.entry(i, j).terms() {
            terms.push(order.term(i, t.mono, t.coeff));
        }
    }
    ModPoly::from_unsorted(field, terms)
}

/// Minimal graded free resolution of `S/I`: degreewise-minimal generators,
/// then Groebner-basis syzygies with unit entries cancelled after every
/// step, so the partial complex stays minimal and the length is bounded by
/// the projective dimension.
pub fn minimal_free_resolution(ideal: &Ideal) -> Result<ChainComplex> {
    minimal_free_resolution_with(ideal, &GbOptions::default())
}

pub fn minimal_free_resolution_with(ideal: &Ideal, opts: &GbOptions) -> Result<ChainComplex> {
    let ring = *ideal.ring();
    let (gens, _) = ideal.minimal_generators()?;
    let source_twists: Vec<i64> = gens.iter().map(|g| -(g.degree().unwrap() as i64)).collect();
    let d1 = GradedMatrix::new(ring, vec![0], source_twists, vec![gens])?;
    let mut mats = vec![d1];
    for step in 0..=ring.nvars() + 1 {
        if step == ring.nvars() + 1 {
            return Err(Error::Shape(
                "resolution did not terminate within the variable count".into(),
            ));
        }
        let cur = mats.last().unwrap();
        // Schreyer-style order on the target of the syzygies, induced by
        // the current columns (weights from twists, tie monomials from the
        // recursively composed leads).
        let order = schreyer_order_chain(&mats);
        let syz = syzygy_matrix_ordered(cur, &order, opts)?;
        if syz.cols() == 0 {
            break;
        }
        mats.push(syz);
        let minimized = minimize_complex(&ChainComplex::new(mats)?)?;
        mats = minimized.mats;
        if mats.last().map_or(true, |m| m.cols() == 0) {
            break;
        }
    }
    let mut complex = ChainComplex::new(mats)?;
    sort_columns_canonically(&mut complex);
    debug_assert!(complex.is_minimal(), "unit sweep left a unit entry");
    Ok(complex)
}

/// Composes Schreyer tie monomials along the chain: the order on the source
/// of `mats.last()` has ties `lead-skey(column)` computed recursively from
/// rank-1 at the bottom.
fn schreyer_order_chain(mats: &[GradedMatrix]) -> ModOrder {
    let mut order = ModOrder::trivial(1);
    for m in &mats[..mats.len() - 1] {
        let mut ties = Vec::with_capacity(m.cols());
        let mut weights = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            let col = column_to_mod(m, j, &order);
            ties.push(col.lead().map(|l| l.skey).unwrap_or_else(Monomial::one));
            weights.push(-m.source_twists()[j]);
        }
        order = ModOrder { weights, ties };
    }
    let last = mats.last().unwrap();
    debug_assert_eq!(order.rank(), last.rows());
    order
}

/// Sorts each differential's columns by ascending degree (descending source
/// twist is ascending degree since twists are negative), permuting the next
/// differential's rows to match.
fn sort_columns_canonically(complex: &mut ChainComplex) {
    for k in 0..complex.mats.len() {
        let m = &complex.mats[k];
        let mut perm: Vec<usize> = (0..m.cols()).collect();
        perm.sort_by_key(|&j| -m.source_twists()[j]);
        if perm.iter().enumerate().all(|(a, &b)| a == b) {
            continue;
        }
        let m = &complex.mats[k];
        let source_twists: Vec<i64> = perm.iter().map(|&j| m.source_twists()[j]).collect();
        let mut entries = Vec::with_capacity(m.entries.len());
        for i in 0..m.rows() {
            for &j in &perm {
                entries.push(m.entry(i, j).clone());
            }
        }
        complex.mats[k] = GradedMatrix {
            ring: m.ring,
            target_twists: m.target_twists.clone(),
            source_twists,
            entries,
        };
        if k + 1 < complex.mats.len() {
            let nxt = &complex.mats[k + 1];
            let target_twists: Vec<i64> = perm.iter().map(|&i| nxt.target_twists()[i]).collect();
            let mut entries = Vec::with_capacity(nxt.entries.len());
            for &i in &perm {
                for j in 0..nxt.cols() {
                    entries.push(nxt.entry(i, j).clone());
                }
            }
            complex.mats[k + 1] = GradedMatrix {
                ring: nxt.ring,
                target_twists,
                source_twists: nxt.source_twists.clone(),
                entries,
            };
        }
    }
}

/// Hilbert function of `S/I` at `m` from a free resolution of it, by the
/// alternating sum of twisted binomial counts.
pub fn euler_hilbert_function(complex: &ChainComplex, m: i64) -> i64 {
    let n = complex.differential(1).ring().nvars() as i64;
    let binom = |top: i64| -> i64 {
        if top < n - 1 {
            return 0;
        }
        let mut acc = 1i128;
        for i in 0..(n - 1) {
            acc = acc * (top - i) as i128 / (i as i128 + 1);
        }
        acc as i64
    };
    let mut total = 0i64;
    for step in 0..=complex.len() {
        let sign = if step % 2 == 0 { 1 } else { -1 };
        for &t in complex.term_twists(step) {
            total += sign * binom(m + t + n - 1);
        }
    }
    total
}

/// Cancels unit entries (Gaussian/Schur-complement steps) until the complex
/// is minimal; homotopy type, hence homology, is preserved.
pub fn minimize_complex(complex: &ChainComplex) -> Result<ChainComplex> {
    let mut mats = complex.mats.clone();
    loop {
        let mut found: Option<(usize, usize, usize)> = None;
        for (k, m) in mats.iter().enumerate() {
            if let Some((i, j)) = m.find_unit() {
                found = Some((k, i, j));
                break;
            }
        }
        let Some((k, i, j)) = found else { break };
        let field = mats[k].ring.field();
        let c = mats[k].entry(i, j).terms()[0].coeff;
        let cinv = field.inv(c);
        // Schur complement of the (i, j) unit in d_{k+1}.
        let m = &mats[k];
        let mut rows_new = Vec::with_capacity(m.rows() - 1);
        let mut target_twists = Vec::with_capacity(m.rows() - 1);
        for r in 0..m.rows() {
            if r == i {
                continue;
            }
            target_twists.push(m.target_twists[r]);
            let gamma = m.entry(r, j);
            let mut row = Vec::with_capacity(m.cols() - 1);
            for cidx in 0..m.cols() {
                if cidx == j {
                    continue;
                }
                let rho = m.entry(i, cidx);
                let mut e = m.entry(r, cidx).clone();
                if !gamma.is_zero() && !rho.is_zero() {
                    let corr = gamma.mul(rho)?.scale(cinv);
                    e = e.sub(&corr)?;
                }
                row.push(e);
            }
            rows_new.push(row);
        }
        let source_twists: Vec<i64> = m
            .source_twists
            .iter()
            .enumerate()
            .filter(|(cidx, _)| *cidx != j)
            .map(|(_, &u)| u)
            .collect();
        mats[k] = GradedMatrix::new(m.ring, target_twists, source_twists, rows_new)?;
        if k + 1 < mats.len() {
            let nxt = &mats[k + 1];
            let mut rows = Vec::with_capacity(nxt.rows() - 1);
            let mut twists = Vec::with_capacity(nxt.rows() - 1);
            for r in 0..nxt.rows() {
                if r == j {
                    continue;
                }
                twists.push(nxt.target_twists[r]);
                rows.push((0..nxt.cols()).map(|cc| nxt.entry(r, cc).clone()).collect());
            }
            mats[k + 1] = GradedMatrix::new(nxt.ring, twists, nxt.source_twists.clone(), rows)?;
        }
        if k > 0 {
            let prv = &mats[k - 1];
            let mut rows = Vec::with_capacity(prv.rows());
            for r in 0..prv.rows() {
                rows.push(
                    (0..prv.cols())
                        .filter(|cc| *cc != i)
                        .map(|cc| prv.entry(r, cc).clone())
                        .collect(),
                );
            }
            let twists: Vec<i64> = prv
                .source_twists
                .iter()
                .enumerate()
                .filter(|(cc, _)| *cc != i)
                .map(|(_, &u)| u)
                .collect();
            mats[k - 1] = GradedMatrix::new(prv.ring, prv.target_twists.clone(), twists, rows)?;
        }
        // Drop empty tail steps.
        while mats.last().is_some_and(|m| m.cols() == 0) {
            mats.pop();
        }
    }
    ChainComplex::new(mats)
}
