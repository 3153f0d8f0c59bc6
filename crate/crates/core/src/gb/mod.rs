//! Reduced Groebner bases over prime fields, normal forms, ideal
//! constructors (minors, sums) and degreewise-minimal generators.

pub(crate) mod engine;

use std::collections::HashMap;
use std::collections::HashSet;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{ModulePiece, RowReducer};
use crate::ring::{monomials_of_degree, Monomial, Polynomial, Ring};

use engine::{Engine, EngineOpts, ModOrder, ModPoly};

/// Knobs for a single Groebner run. The default is uncapped unless a
/// process-wide budget was installed; callers that want graceful failure
/// set a step budget and get [`Error::Budget`] back instead of a silent
/// truncation.
#[derive(Clone, Copy, Debug)]
pub struct GbOptions {
    /// Abort after this many reduction steps.
    pub budget_steps: Option<u64>,
    /// Discard S-pairs above this total degree; the result is only a
    /// Groebner basis through the cap.
    pub truncate_degree: Option<u32>,
}

static DEFAULT_BUDGET: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);

/// Installs a step budget picked up by every `GbOptions::default()` run
/// (0 clears it). Cached Groebner bases consult it at computation time.
pub fn set_default_step_budget(steps: Option<u64>) {
    DEFAULT_BUDGET.store(steps.unwrap_or(0), std::sync::atomic::Ordering::Relaxed);
}

impl Default for GbOptions {
    fn default() -> Self {
        let b = DEFAULT_BUDGET.load(std::sync::atomic::Ordering::Relaxed);
        GbOptions { budget_steps: (b > 0).then_some(b), truncate_degree: None }
    }
}

/// A homogeneous ideal with its reduced Groebner basis cached on first use.
#[derive(Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Polynomial>,
    gb: OnceLock<Vec<Polynomial>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal { ring: self.ring, gens: self.gens.clone(), gb }
    }
}

impl Ideal {
    /// Zero generators are dropped; the rest must be homogeneous and live in
    /// `ring`.
    pub fn new(ring: Ring, gens: Vec<Polynomial>) -> Result<Self> {
        let mut kept = Vec::with_capacity(gens.len());
        for g in gens {
            ring.check_same(g.ring())?;
            if g.is_zero() {
                continue;
            }
            if g.homogeneous_degree().is_none() {
                return Err(Error::NotHomogeneous(g.to_string()));
            }
            kept.push(g);
        }
        Ok(Ideal { ring, gens: kept, gb: OnceLock::new() })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Ideal sum `I + J`.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.ring.check_same(&other.ring)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.ring, gens)
    }

    /// The reduced Groebner basis, computed once per value (idempotent fill;
    /// concurrent racers compute the same deterministic result).
    pub fn groebner_basis(&self) -> Result<&[Polynomial]> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb);
        }
        let gb = groebner_basis_with(&self.ring, &self.gens, &GbOptions::default())?;
        Ok(self.gb.get_or_init(|| gb))
    }

    /// Uncached variant with an explicit budget/truncation.
    pub fn groebner_basis_with(&self, opts: &GbOptions) -> Result<Vec<Polynomial>> {
        groebner_basis_with(&self.ring, &self.gens, opts)
    }

    /// Fully reduced normal form; zero exactly on ideal members.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(f.ring())?;
        let gb = self.groebner_basis()?;
        Ok(normal_form_by(f, gb))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// The multiset of leading monomials of the reduced basis.
    pub fn lead_monomials(&self) -> Result<Vec<Monomial>> {
        Ok(self.groebner_basis()?.iter().map(|g| g.lead().unwrap().mono).collect())
    }

    /// Degreewise-minimal generating subset and the smallest generator
    /// degree `m0`. Greedy by ascending degree: a candidate survives iff it
    /// is independent of lower-degree multiples and of the same-degree picks
    /// before it.
    pub fn minimal_generators(&self) -> Result<(Vec<Polynomial>, u32)> {
        if self.gens.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let mut cands: Vec<&Polynomial> = self.gens.iter().collect();
        cands.sort_by(|a, b| {
            let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
            da.cmp(&db).then_with(|| a.lead().unwrap().mono.cmp_grevlex(&b.lead().unwrap().mono))
        });
        let mut kept: Vec<Polynomial> = Vec::new();
        let degrees: Vec<u32> = {
            let mut ds: Vec<u32> = cands.iter().map(|g| g.degree().unwrap()).collect();
            ds.dedup();
            ds
        };
        for d in degrees {
            let piece = ModulePiece::new(self.ring.nvars(), &[0], d as i64);
            let mut rr = RowReducer::new(self.ring.field(), piece.dim);
            for g in &kept {
                let gd = g.degree().unwrap();
                if gd >= d {
                    continue;
                }
                for m in monomials_of_degree(self.ring.nvars(), d - gd) {
                    let shifted = g.mul_monomial(&m);
                    rr.insert(piece.expand(&[(0, &shifted)]));
                }
            }
            for g in cands.iter().filter(|g| g.degree().unwrap() == d) {
                if rr.insert(piece.expand(&[(0, g)])) {
                    kept.push((*g).clone());
                }
            }
        }
        let m0 = kept.iter().map(|g| g.degree().unwrap()).min().unwrap();
        Ok((kept, m0))
    }
}

/// Reduced Groebner basis of homogeneous generators under grevlex: monic,
/// no term of any element divisible by another element's lead, sorted by
/// ascending lead. Deterministic regardless of generator order.
pub fn groebner_basis_with(
    ring: &Ring,
    gens: &[Polynomial],
    opts: &GbOptions,
) -> Result<Vec<Polynomial>> {
    for g in gens {
        ring.check_same(g.ring())?;
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous(g.to_string()));
        }
    }
    let order = ModOrder::trivial(1);
    let mut sorted: Vec<&Polynomial> = gens.iter().filter(|g| !g.is_zero()).collect();
    sorted.sort_by(|a, b| {
        a.degree()
            .unwrap()
            .cmp(&b.degree().unwrap())
            .then_with(|| a.lead().unwrap().mono.cmp_grevlex(&b.lead().unwrap().mono))
    });
    let mods: Vec<ModPoly> = sorted.iter().map(|g| poly_to_mod(&order, g)).collect();
    let eopts = EngineOpts {
        track: false,
        budget_steps: opts.budget_steps,
        truncate: opts.truncate_degree.map(|d| d as i64),
        interreduce_inputs: true,
        reduce_tails: true,
    };
    let out = Engine::run(ring, &order, &mods, ModOrder::trivial(mods.len().max(1)), eopts)?;
    let basis: Vec<Polynomial> = out.basis.iter().map(|m| mod_to_poly(ring, m)).collect();
    Ok(reduce_basis(ring, basis))
}

/// Interreduction to the unique reduced basis.
fn reduce_basis(ring: &Ring, mut basis: Vec<Polynomial>) -> Vec<Polynomial> {
    basis.retain(|g| !g.is_zero());
    basis.sort_by(|a, b| a.lead().unwrap().mono.cmp_grevlex(&b.lead().unwrap().mono));
    let mut kept: Vec<Polynomial> = Vec::new();
    'cand: for g in basis {
        let lm = g.lead().unwrap().mono;
        for k in &kept {
            if k.lead().unwrap().mono.divides(&lm) {
                continue 'cand;
            }
        }
        kept.push(g);
    }
    let reduced: Vec<Polynomial> = (0..kept.len())
        .map(|i| {
            let others: Vec<&Polynomial> =
                kept.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, h)| h).collect();
            normal_form_refs(&kept[i], &others).monic()
        })
        .filter(|g| !g.is_zero())
        .collect();
    let mut out = reduced;
    out.sort_by(|a, b| a.lead().unwrap().mono.cmp_grevlex(&b.lead().unwrap().mono));
    let _ = ring;
    out
}

/// Full normal form of `f` against monic-or-not reducers (scaling handled).
pub(crate) fn normal_form_by(f: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let refs: Vec<&Polynomial> = basis.iter().collect();
    normal_form_refs(f, &refs)
}

fn normal_form_refs(f: &Polynomial, basis: &[&Polynomial]) -> Polynomial {
    let ring = *f.ring();
    let field = ring.field();
    let mut out: Vec<crate::ring::Term> = Vec::new();
    let mut cur = f.clone();
    let mut head = 0usize;
    'outer: while head < cur.terms().len() {
        let lead = cur.terms()[head];
        for g in basis {
            let Some(gl) = g.lead() else { continue };
            if gl.mono.divides(&lead.mono) {
                let m = lead.mono.checked_div(&gl.mono).unwrap();
                let c = field.neg(field.mul(lead.coeff, field.inv(gl.coeff)));
                cur = merge_tail(&cur, head + 1, g, 1, c, &m);
                head = 0;
                continue 'outer;
            }
        }
        out.push(lead);
        head += 1;
    }
    ring.from_terms(out.into_iter().map(|t| (t.coeff as i64, t.mono)))
}

/// `cur[skip..] + c*m*g[skip_g..]` as a plain polynomial merge.
fn merge_tail(cur: &Polynomial, skip: usize, g: &Polynomial, skip_g: usize, c: u32, m: &Monomial) -> Polynomial {
    let ring = *cur.ring();
    let tail = ring.from_terms(cur.terms()[skip..].iter().map(|t| (t.coeff as i64, t.mono)));
    let gtail = ring.from_terms(g.terms()[skip_g..].iter().map(|t| (t.coeff as i64, t.mono)));
    tail.merge_scaled(&gtail, c, m)
}

pub(crate) fn poly_to_mod(order: &ModOrder, f: &Polynomial) -> ModPoly {
    ModPoly { terms: f.terms().iter().map(|t| order.term(0, t.mono, t.coeff)).collect() }
}

pub(crate) fn mod_to_poly(ring: &Ring, m: &ModPoly) -> Polynomial {
    ring.from_terms(m.terms.iter().map(|t| (t.coeff as i64, t.mono)))
}

/// Ideal of all `k x k` minors of a polynomial matrix, by Laplace expansion
/// with shared subdeterminants; zero and (up to sign) duplicate minors are
/// dropped.
pub fn minors_ideal(ring: &Ring, rows: &[Vec<Polynomial>], k: usize) -> Result<Ideal> {
    let nr = rows.len();
    let nc = rows.first().map(|r| r.len()).unwrap_or(0);
    if rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Shape("ragged matrix".into()));
    }
    if k == 0 || k > nr.min(nc) {
        return Err(Error::MinorSize { k, rows: nr, cols: nc });
    }
    let row_sets = combinations(nr, k);
    let col_sets = combinations(nc, k);
    let mut memo: HashMap<(u32, u32), Polynomial> = HashMap::new();
    let mut seen: HashSet<Polynomial> = HashSet::new();
    let mut gens = Vec::new();
    for rs in &row_sets {
        for cs in &col_sets {
            let d = det_memo(ring, rows, rs, cs, &mut memo);
            if d.is_zero() {
                continue;
            }
            if seen.insert(d.monic()) {
                gens.push(d);
            }
        }
    }
    Ideal::new(*ring, gens)
}

/// Determinant of the submatrix on `rs x cs` (index slices, ascending).
pub fn determinant(ring: &Ring, rows: &[Vec<Polynomial>]) -> Result<Polynomial> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("determinant needs a square matrix".into()));
    }
    if n == 0 {
        return Ok(ring.constant(1));
    }
    let rs: Vec<usize> = (0..n).collect();
    let mut memo = HashMap::new();
    Ok(det_memo(ring, rows, &rs, &rs, &mut memo))
}

fn det_memo(
    ring: &Ring,
    rows: &[Vec<Polynomial>],
    rs: &[usize],
    cs: &[usize],
    memo: &mut HashMap<(u32, u32), Polynomial>,
) -> Polynomial {
    debug_assert_eq!(rs.len(), cs.len());
    if rs.len() == 1 {
        return rows[rs[0]][cs[0]].clone();
    }
    let key = (mask(rs), mask(cs));
    if let Some(d) = memo.get(&key) {
        return d.clone();
    }
    // Expand along the first column of the selection.
    let c0 = cs[0];
    let rest: Vec<usize> = cs[1..].to_vec();
    let mut acc = ring.zero();
    for (t, &r) in rs.iter().enumerate() {
        let entry = &rows[r][c0];
        if entry.is_zero() {
            continue;
        }
        let sub_rows: Vec<usize> =
            rs.iter().enumerate().filter(|(u, _)| *u != t).map(|(_, &v)| v).collect();
        let sub = det_memo(ring, rows, &sub_rows, &rest, memo);
        let term = entry.mul(&sub).expect("same ring");
        acc = if t % 2 == 0 {
            acc.add(&term).expect("same ring")
        } else {
            acc.sub(&term).expect("same ring")
        };
    }
    memo.insert(key, acc.clone());
    acc
}

fn mask(idx: &[usize]) -> u32 {
    idx.iter().fold(0u32, |m, &i| m | (1 << i))
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_polynomial;

    fn ring(p: u32, n: usize) -> Ring {
        Ring::new(p, n).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(*r, gens.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()).unwrap()
    }

    fn gb_strings(i: &Ideal) -> Vec<String> {
        i.groebner_basis().unwrap().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn linear_span_reduces() {
        let r = ring(101, 2);
        let i = ideal(&r, &["x0", "x0+x1"]);
        let mut gb = gb_strings(&i);
        gb.sort();
        assert_eq!(gb, vec!["1*x0", "1*x1"]);
    }

    #[test]
    fn already_reduced_pair() {
        let r = ring(101, 3);
        let i = ideal(&r, &["x0*x1", "x0*x2"]);
        let mut gb = gb_strings(&i);
        gb.sort();
        assert_eq!(gb, vec!["1*x0*x1", "1*x0*x2"]);
    }

    #[test]
    fn zero_ideal_empty_basis() {
        let r = ring(101, 2);
        let i = Ideal::new(r, vec![]).unwrap();
        assert!(i.groebner_basis().unwrap().is_empty());
    }

    /// Degree-by-degree oracle: the span of monomial multiples of the
    /// generators (the ideal's graded piece) must have codimension equal to
    /// the number of standard monomials of the reduced basis's lead ideal.
    fn check_lead_ideal_against_macaulay(i: &Ideal, maxdeg: u32) {
        let r = i.ring();
        let leads = i.lead_monomials().unwrap();
        for d in 0..=maxdeg {
            let piece = ModulePiece::new(r.nvars(), &[0], d as i64);
            let mut rr = RowReducer::new(r.field(), piece.dim);
            for g in i.generators() {
                let gd = g.degree().unwrap();
                if gd > d {
                    continue;
                }
                for m in monomials_of_degree(r.nvars(), d - gd) {
                    rr.insert(piece.expand(&[(0, &g.mul_monomial(&m))]));
                }
            }
            let standard = monomials_of_degree(r.nvars(), d)
                .into_iter()
                .filter(|m| !leads.iter().any(|l| l.divides(m)))
                .count();
            assert_eq!(piece.dim - rr.rank(), standard, "degree {}", d);
        }
    }

    #[test]
    fn twisted_cubic_cone_hilbert_oracle() {
        let r = ring(101, 3);
        let i = ideal(&r, &["x0^2+100*x1*x2", "x0*x1+100*x2^2", "x1^2+100*x0*x2"]);
        check_lead_ideal_against_macaulay(&i, 8);
    }

    #[test]
    fn reduced_gb_unique_under_shuffle_and_scale() {
        let r = ring(101, 4);
        let base = ["x0^2+3*x1*x2", "x1^3+x2^2*x3", "x0*x2*x3+5*x3^3", "x2^2+7*x0*x3"];
        let i1 = ideal(&r, &base);
        let gb1 = gb_strings(&i1);
        let mut gens2: Vec<Polynomial> =
            base.iter().map(|s| parse_polynomial(&r, s).unwrap()).collect();
        gens2.reverse();
        let gens2: Vec<Polynomial> =
            gens2.iter().enumerate().map(|(k, g)| g.scale(7 + 11 * k as u32)).collect();
        let i2 = Ideal::new(r, gens2).unwrap();
        assert_eq!(gb1, gb_strings(&i2));
        // Membership soundness: every original generator reduces to zero.
        for s in base {
            assert!(i1.contains(&parse_polynomial(&r, s).unwrap()).unwrap());
        }
    }

    #[test]
    fn buchberger_criterion_on_output() {
        let r = ring(101, 3);
        let i = ideal(&r, &["x0*x1+x2^2", "x1^2+100*x0*x2", "x0^3+x1*x2^2"]);
        let gb = i.groebner_basis().unwrap();
        for a in 0..gb.len() {
            for b in a + 1..gb.len() {
                let (la, lb) = (gb[a].lead().unwrap(), gb[b].lead().unwrap());
                let lcm = la.mono.lcm(&lb.mono);
                let ma = lcm.checked_div(&la.mono).unwrap();
                let mb = lcm.checked_div(&lb.mono).unwrap();
                let f = r.field();
                let s = gb[a]
                    .mul_monomial(&ma)
                    .scale(f.inv(la.coeff))
                    .sub(&gb[b].mul_monomial(&mb).scale(f.inv(lb.coeff)))
                    .unwrap();
                assert!(normal_form_by(&s, gb).is_zero());
            }
        }
    }

    #[test]
    fn normal_form_cases() {
        let r = ring(101, 4);
        let i = ideal(&r, &["x0", "x1^2+100*x2*x3"]);
        // generators reduce to zero
        assert!(i.contains(&parse_polynomial(&r, "x0").unwrap()).unwrap());
        // 1 survives a proper homogeneous ideal
        let one = r.constant(1);
        assert_eq!(i.normal_form(&one).unwrap(), one);
        // hand reduction: x1^2 -> x2*x3
        let f = parse_polynomial(&r, "x1^2").unwrap();
        assert_eq!(i.normal_form(&f).unwrap().to_string(), "1*x2*x3");
        // ring mismatch
        let other = ring(107, 4);
        assert!(i.normal_form(&parse_polynomial(&other, "x1").unwrap()).is_err());
    }

    #[test]
    fn minors_examples() {
        let r = ring(101, 3);
        let x0 = r.var(0).unwrap();
        let x1 = r.var(1).unwrap();
        let z = r.zero();
        let diag = vec![vec![x0.clone(), z.clone()], vec![z.clone(), x1.clone()]];
        let i = minors_ideal(&r, &diag, 2).unwrap();
        assert_eq!(i.generators().len(), 1);
        assert_eq!(i.generators()[0].to_string(), "1*x0*x1");
        assert!(minors_ideal(&r, &diag, 0).is_err());
        assert!(minors_ideal(&r, &diag, 3).is_err());

        // zero row kills every row-spanning minor
        let with_zero_row = vec![vec![x0.clone(), x1.clone()], vec![z.clone(), z.clone()]];
        let i = minors_ideal(&r, &with_zero_row, 2).unwrap();
        assert!(i.is_zero());
    }

    #[test]
    fn generic_det_matches_permutation_sum() {
        let r = ring(101, 9);
        let m: Vec<Vec<Polynomial>> =
            (0..3).map(|i| (0..3).map(|j| r.var(3 * i + j).unwrap()).collect()).collect();
        let i = minors_ideal(&r, &m, 3).unwrap();
        assert_eq!(i.generators().len(), 1);
        let det = &i.generators()[0];
        // permutation-sum oracle
        let perms: [( [usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([2, 1, 0], -1),
        ];
        let mut want = r.zero();
        for (perm, sgn) in perms {
            let mut term = r.constant(sgn);
            for (row, &col) in perm.iter().enumerate() {
                term = term.mul(&m[row][col]).unwrap();
            }
            want = want.add(&term).unwrap();
        }
        assert_eq!(det.terms().len(), 6);
        assert!(det == &want || det == &want.neg());
    }

    #[test]
    fn minors_invariant_under_permutation() {
        let r = ring(101, 4);
        let e = |s: &str| parse_polynomial(&r, s).unwrap();
        let m = vec![
            vec![e("x0"), e("x1"), e("x2")],
            vec![e("x1+x2"), e("x3"), e("x0")],
            vec![e("x2"), e("x0+3*x3"), e("x1")],
        ];
        let mut perm = m.clone();
        perm.swap(0, 2);
        for row in &mut perm {
            row.swap(1, 2);
        }
        let i1 = minors_ideal(&r, &m, 2).unwrap();
        let i2 = minors_ideal(&r, &perm, 2).unwrap();
        for g in i2.generators() {
            assert!(i1.contains(g).unwrap());
        }
        for g in i1.generators() {
            assert!(i2.contains(g).unwrap());
        }
    }

    #[test]
    fn minimal_generators_examples() {
        let r = ring(101, 2);
        let i = ideal(&r, &["x0", "x0^2", "x0*x1"]);
        let (gens, m0) = i.minimal_generators().unwrap();
        assert_eq!(m0, 1);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].to_string(), "1*x0");
        let zero = Ideal::new(r, vec![]).unwrap();
        assert!(zero.minimal_generators().is_err());
    }

    #[test]
    fn budget_aborts() {
        let r = ring(101, 4);
        let gens: Vec<Polynomial> = ["x0^2+x1*x2", "x1^2+x2*x3", "x2^2+x0*x3", "x3^2+x0*x1"]
            .iter()
            .map(|s| parse_polynomial(&r, s).unwrap())
            .collect();
        let opts = GbOptions { budget_steps: Some(2), truncate_degree: None };
        match groebner_basis_with(&r, &gens, &opts) {
            Err(Error::Budget(_)) => {}
            other => panic!("expected budget error, got {:?}", other.map(|v| v.len())),
        }
    }
}
