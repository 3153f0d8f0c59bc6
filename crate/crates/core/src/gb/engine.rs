//! Buchberger engine for submodules of graded free modules over
//! `F_p[x0..xn]`, with optional representation tracking and syzygy
//! collection.
//!
//! Ideals are the rank-1 case. Elements are flat term lists sorted under a
//! degree-refining Schreyer-style order: twisted degree first, then grevlex
//! of the term monomial times a per-position tie monomial, then position.
//! Pair selection is degree-ascending; the chain criterion is applied in the
//! processed-pairs form that remains sound for syzygy generation, and the
//! product criterion only in the rank-1 case (where the skipped pair's
//! syzygy is the Koszul relation, emitted directly).

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::ring::{Monomial, PrimeField, Ring};

/// Order data for one free module: per-position degree weight and Schreyer
/// tie monomial. Trivial ties give plain grevlex-over-position.
#[derive(Clone, Debug)]
pub(crate) struct ModOrder {
    pub weights: Vec<i64>,
    pub ties: Vec<Monomial>,
}

impl ModOrder {
    pub fn trivial(rank: usize) -> Self {
        ModOrder { weights: vec![0; rank], ties: vec![Monomial::one(); rank] }
    }

    pub fn with_weights(weights: Vec<i64>) -> Self {
        let ties = vec![Monomial::one(); weights.len()];
        ModOrder { weights, ties }
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn term(&self, pos: usize, mono: Monomial, coeff: u32) -> ModTerm {
        ModTerm {
            tdeg: mono.degree() as i64 + self.weights[pos],
            skey: mono.mul(&self.ties[pos]),
            mono,
            pos: pos as u32,
            coeff,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct ModTerm {
    pub tdeg: i64,
    pub skey: Monomial,
    pub mono: Monomial,
    pub pos: u32,
    pub coeff: u32,
}

#[inline]
fn cmp_term(a: &ModTerm, b: &ModTerm) -> Ordering {
    a.tdeg
        .cmp(&b.tdeg)
        .then_with(|| a.skey.cmp_grevlex(&b.skey))
        .then_with(|| b.pos.cmp(&a.pos))
}

/// Element of a graded free module: terms strictly descending under the
/// module order, coefficients nonzero.
#[derive(Clone, Debug, Default)]
pub(crate) struct ModPoly {
    pub terms: Vec<ModTerm>,
}

impl ModPoly {
    pub fn zero() -> Self {
        ModPoly { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&ModTerm> {
        self.terms.first()
    }

    pub fn from_unsorted(field: PrimeField, mut terms: Vec<ModTerm>) -> Self {
        terms.sort_by(|a, b| cmp_term(b, a));
        let mut out: Vec<ModTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.pos == t.pos && last.mono == t.mono => {
                    last.coeff = field.add(last.coeff, t.coeff);
                    if last.coeff == 0 {
                        out.pop();
                    }
                }
                _ => {
                    if t.coeff % field.modulus() != 0 {
                        out.push(t);
                    }
                }
            }
        }
        ModPoly { terms: out }
    }

    pub fn scale(&self, field: PrimeField, c: u32) -> ModPoly {
        if c == 0 {
            return ModPoly::zero();
        }
        ModPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm { coeff: field.mul(t.coeff, c), ..*t })
                .collect(),
        }
    }

    /// `self + c * m * other`, merged in order. `skip_head` drops that many
    /// leading terms of `self` first (used to discard a cancelled lead
    /// without shifting the vector).
    pub fn axpy(
        &self,
        skip_head: usize,
        field: PrimeField,
        c: u32,
        m: &Monomial,
        other: &ModPoly,
        skip_other: usize,
    ) -> ModPoly {
        let a = &self.terms[skip_head..];
        let b = &other.terms[skip_other..];
        if c == 0 || b.is_empty() {
            return ModPoly { terms: a.to_vec() };
        }
        let mdeg = m.degree() as i64;
        let mut out: Vec<ModTerm> = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0usize, 0usize);
        let shift = |t: &ModTerm| ModTerm {
            tdeg: t.tdeg + mdeg,
            skey: t.skey.mul(m),
            mono: t.mono.mul(m),
            pos: t.pos,
            coeff: field.mul(c, t.coeff),
        };
        let mut bj = if j < b.len() { Some(shift(&b[j])) } else { None };
        while i < a.len() {
            let Some(bt) = bj else {
                out.extend_from_slice(&a[i..]);
                return ModPoly { terms: out };
            };
            match cmp_term(&a[i], &bt) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bt);
                    j += 1;
                    bj = if j < b.len() { Some(shift(&b[j])) } else { None };
                }
                Ordering::Equal => {
                    let coeff = field.add(a[i].coeff, bt.coeff);
                    if coeff != 0 {
                        out.push(ModTerm { coeff, ..bt });
                    }
                    i += 1;
                    j += 1;
                    bj = if j < b.len() { Some(shift(&b[j])) } else { None };
                }
            }
        }
        if let Some(bt) = bj {
            out.push(bt);
            j += 1;
            for t in &b[j..] {
                out.push(shift(t));
            }
        }
        ModPoly { terms: out }
    }
}

pub(crate) struct EngineOpts {
    pub track: bool,
    pub budget_steps: Option<u64>,
    /// Skip S-pairs whose twisted lcm degree exceeds this bound.
    pub truncate: Option<i64>,
    /// Reduce incoming generators against the growing basis and drop the
    /// redundant ones. Must be false when tracking (originals anchor the
    /// representation bookkeeping).
    pub interreduce_inputs: bool,
    /// Normal forms reduce tails too. Keeps bodies small in the big ideal
    /// runs; tracked runs leave it off so representations stay lean.
    pub reduce_tails: bool,
}

impl Default for EngineOpts {
    fn default() -> Self {
        EngineOpts {
            track: false,
            budget_steps: None,
            truncate: None,
            interreduce_inputs: true,
            reduce_tails: true,
        }
    }
}

pub(crate) struct EngineOut {
    pub basis: Vec<ModPoly>,
    /// Generators of the syzygy module of the original generators, as
    /// elements over `rep_order` positions; empty unless tracking.
    pub syzygies: Vec<ModPoly>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Pair {
    tdeg: i64,
    i: u32,
    j: u32,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap pops the max, we want the lowest degree.
        other
            .tdeg
            .cmp(&self.tdeg)
            .then_with(|| other.j.cmp(&self.j))
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Support bitmask: bit `i` set when variable `i` occurs. A divisor's mask
/// is a subset of the multiple's, which rejects most candidates in one
/// `u16` operation.
#[inline]
fn divmask(m: &Monomial) -> u16 {
    let mut mask = 0u16;
    for (i, &e) in m.exps().iter().enumerate() {
        if e > 0 {
            mask |= 1 << i;
        }
    }
    mask
}

#[derive(Clone, Copy)]
struct LeadRef {
    mask: u16,
    deg: u16,
    idx: u32,
}

pub(crate) struct Engine<'a> {
    field: PrimeField,
    order: &'a ModOrder,
    rep_order: ModOrder,
    opts: EngineOpts,
    basis: Vec<ModPoly>,
    reps: Vec<ModPoly>,
    by_pos: Vec<Vec<LeadRef>>,
    pairs: BinaryHeap<Pair>,
    done: HashSet<(u32, u32)>,
    syzygies: Vec<ModPoly>,
    steps: u64,
    progress: bool,
    processed: u64,
    scratch: Vec<ModTerm>,
}

impl<'a> Engine<'a> {
    /// Runs Buchberger on `gens`. `rep_order` carries one position per
    /// generator; its weights record generator degrees so that tracked
    /// syzygies stay graded.
    pub fn run(
        ring: &Ring,
        order: &'a ModOrder,
        gens: &[ModPoly],
        rep_order: ModOrder,
        opts: EngineOpts,
    ) -> Result<EngineOut> {
        assert!(!(opts.track && opts.interreduce_inputs));
        let mut eng = Engine {
            field: ring.field(),
            order,
            rep_order,
            opts,
            basis: Vec::new(),
            reps: Vec::new(),
            by_pos: vec![Vec::new(); order.rank()],
            pairs: BinaryHeap::new(),
            done: HashSet::new(),
            syzygies: Vec::new(),
            steps: 0,
            progress: std::env::var_os("CY3_PROGRESS").is_some(),
            processed: 0,
            scratch: Vec::new(),
        };
        for (k, g) in gens.iter().enumerate() {
            let rep = if eng.opts.track {
                let c = g.lead().map(|l| l.coeff).unwrap_or(1);
                Some(ModPoly {
                    terms: vec![eng.rep_order.term(k, Monomial::one(), eng.field.inv(c))],
                })
            } else {
                None
            };
            if g.is_zero() {
                // A zero column contributes the trivial syzygy e_k.
                if let Some(rep) = rep {
                    eng.syzygies.push(rep.scale(eng.field, 1));
                }
                continue;
            }
            // When tracking, originals stay in the basis verbatim (monic):
            // every original column being its own basis element makes the
            // collected syzygies generate the full syzygy module.
            let mut g = g.clone();
            if eng.opts.interreduce_inputs {
                let (r, _) = eng.normal_form(g, None)?;
                if r.is_zero() {
                    continue;
                }
                g = r;
            }
            let c = g.lead().unwrap().coeff;
            let inv = eng.field.inv(c);
            eng.insert(g.scale(eng.field, inv), rep);
        }
        eng.main_loop()?;
        Ok(EngineOut { basis: eng.basis, syzygies: eng.syzygies })
    }

    fn insert(&mut self, g: ModPoly, rep: Option<ModPoly>) {
        let idx = self.basis.len();
        let lead = *g.lead().expect("inserting zero element");
        for other in &self.by_pos[lead.pos as usize] {
            let ol = self.basis[other.idx as usize].lead().unwrap();
            let lcm = lead.mono.lcm(&ol.mono);
            let tdeg = lcm.degree() as i64 + self.order.weights[lead.pos as usize];
            if self.opts.truncate.map_or(true, |cap| tdeg <= cap) {
                self.pairs.push(Pair { tdeg, i: other.idx, j: idx as u32 });
            }
        }
        self.by_pos[lead.pos as usize].push(LeadRef {
            mask: divmask(&lead.mono),
            deg: lead.mono.degree() as u16,
            idx: idx as u32,
        });
        self.basis.push(g);
        if let Some(rep) = rep {
            self.reps.push(rep);
        }
    }

    fn main_loop(&mut self) -> Result<()> {
        while let Some(Pair { tdeg, i, j }) = self.pairs.pop() {
            if let Some(cap) = self.opts.truncate {
                if tdeg > cap {
                    continue;
                }
            }
            self.processed += 1;
            if self.progress && self.processed % 2048 == 0 {
                eprintln!(
                    "  gb: degree {}, {} pairs queued, basis {}, {} steps",
                    tdeg,
                    self.pairs.len(),
                    self.basis.len(),
                    self.steps
                );
            }
            let (li, lj) = (
                *self.basis[i as usize].lead().unwrap(),
                *self.basis[j as usize].lead().unwrap(),
            );
            debug_assert_eq!(li.pos, lj.pos);
            let lcm = li.mono.lcm(&lj.mono);

            // Product criterion, rank-1 only: the syzygy of a coprime pair
            // is the Koszul relation, available without reduction.
            if self.order.rank() == 1 && li.mono.coprime(&lj.mono) {
                if self.opts.track {
                    let k = self.koszul_syzygy(i as usize, j as usize);
                    self.syzygies.push(k);
                }
                self.done.insert((i, j));
                continue;
            }

            // Chain criterion over already-settled pairs.
            if self.chain_criterion(i, j, &lcm, li.pos) {
                self.done.insert((i, j));
                continue;
            }

            let (spoly, srep) = self.s_pair(i as usize, j as usize, &lcm);
            let (red, rrep) = self.normal_form(spoly, srep)?;
            self.done.insert((i, j));
            if red.is_zero() {
                if let Some(rrep) = rrep {
                    if !rrep.is_zero() {
                        self.syzygies.push(rrep);
                    }
                }
            } else {
                let c = red.lead().unwrap().coeff;
                let inv = self.field.inv(c);
                let red = red.scale(self.field, inv);
                let rrep = rrep.map(|r| r.scale(self.field, inv));
                self.insert(red, rrep);
            }
        }
        Ok(())
    }

    fn chain_criterion(&self, i: u32, j: u32, lcm: &Monomial, pos: u32) -> bool {
        let lcm_mask = divmask(lcm);
        let lcm_deg = lcm.degree() as u16;
        for lr in &self.by_pos[pos as usize] {
            let k = lr.idx;
            if k == i || k == j || lr.deg > lcm_deg || lr.mask & !lcm_mask != 0 {
                continue;
            }
            if !self.basis[k as usize].lead().unwrap().mono.divides(lcm) {
                continue;
            }
            let a = (i.min(k), i.max(k));
            let b = (j.min(k), j.max(k));
            if self.done.contains(&a) && self.done.contains(&b) {
                return true;
            }
        }
        false
    }

    fn s_pair(&self, i: usize, j: usize, lcm: &Monomial) -> (ModPoly, Option<ModPoly>) {
        let li = self.basis[i].lead().unwrap();
        let lj = self.basis[j].lead().unwrap();
        let mi = lcm.checked_div(&li.mono).unwrap();
        let mj = lcm.checked_div(&lj.mono).unwrap();
        // Both monic: S = m_i * g_i - m_j * g_j.
        let s = self.basis[i]
            .mul_monomial(&mi)
            .axpy(0, self.field, self.field.neg(1), &mj, &self.basis[j], 0);
        let srep = if self.opts.track {
            let ri = self.reps[i].mul_monomial(&mi);
            Some(ri.axpy(0, self.field, self.field.neg(1), &mj, &self.reps[j], 0))
        } else {
            None
        };
        (s, srep)
    }

    fn koszul_syzygy(&self, i: usize, j: usize) -> ModPoly {
        // g_j * rep_i - g_i * rep_j, all rank-1 monic.
        let mut acc = ModPoly::zero();
        for t in &self.basis[j].terms {
            acc = acc.axpy(0, self.field, t.coeff, &t.mono, &self.reps[i], 0);
        }
        for t in &self.basis[i].terms {
            acc = acc.axpy(0, self.field, self.field.neg(t.coeff), &t.mono, &self.reps[j], 0);
        }
        acc
    }

    /// Normal form against the current basis, mirroring every step on the
    /// representation when present. With `reduce_tails` the result is fully
    /// reduced; otherwise reduction stops at the first irreducible lead.
    fn normal_form(
        &mut self,
        h: ModPoly,
        mut rep: Option<ModPoly>,
    ) -> Result<(ModPoly, Option<ModPoly>)> {
        let mut out: Vec<ModTerm> = Vec::new();
        let mut cur = h.terms;
        let mut head = 0usize;
        'outer: while head < cur.len() {
            let lead = cur[head];
            let lead_mask = divmask(&lead.mono);
            let lead_deg = lead.mono.degree() as u16;
            for lr in &self.by_pos[lead.pos as usize] {
                if lr.deg > lead_deg || lr.mask & !lead_mask != 0 {
                    continue;
                }
                let b = lr.idx as usize;
                let bl = self.basis[b].lead().unwrap();
                if bl.mono.divides(&lead.mono) {
                    self.steps += 1;
                    if let Some(cap) = self.opts.budget_steps {
                        if self.steps > cap {
                            return Err(Error::Budget(format!(
                                "Groebner step budget {} exceeded",
                                cap
                            )));
                        }
                    }
                    let m = lead.mono.checked_div(&bl.mono).unwrap();
                    let c = self.field.neg(lead.coeff);
                    // Lead term cancels; the merge skips it on both sides.
                    let mut next = std::mem::take(&mut self.scratch);
                    axpy_into(
                        &cur[head + 1..],
                        self.field,
                        c,
                        &m,
                        &self.basis[b].terms[1..],
                        &mut next,
                    );
                    self.scratch = cur;
                    cur = next;
                    head = 0;
                    if let Some(r) = rep.take() {
                        rep = Some(r.axpy(0, self.field, c, &m, &self.reps[b], 0));
                    }
                    continue 'outer;
                }
            }
            if !self.opts.reduce_tails {
                // Irreducible lead: keep the rest as is.
                out.push(lead);
                out.extend_from_slice(&cur[head + 1..]);
                return Ok((ModPoly { terms: out }, rep));
            }
            out.push(lead);
            head += 1;
        }
        Ok((ModPoly { terms: out }, rep))
    }
}

/// `a + c * m * b` merged into `out` (cleared first).
fn axpy_into(
    a: &[ModTerm],
    field: PrimeField,
    c: u32,
    m: &Monomial,
    b: &[ModTerm],
    out: &mut Vec<ModTerm>,
) {
    out.clear();
    out.reserve(a.len() + b.len());
    if c == 0 || b.is_empty() {
        out.extend_from_slice(a);
        return;
    }
    let mdeg = m.degree() as i64;
    let shift = |t: &ModTerm| ModTerm {
        tdeg: t.tdeg + mdeg,
        skey: t.skey.mul(m),
        mono: t.mono.mul(m),
        pos: t.pos,
        coeff: field.mul(c, t.coeff),
    };
    let (mut i, mut j) = (0usize, 0usize);
    let mut bj = if j < b.len() { Some(shift(&b[j])) } else { None };
    while i < a.len() {
        let Some(bt) = bj else {
            out.extend_from_slice(&a[i..]);
            return;
        };
        match cmp_term(&a[i], &bt) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push(bt);
                j += 1;
                bj = if j < b.len() { Some(shift(&b[j])) } else { None };
            }
            Ordering::Equal => {
                let coeff = field.add(a[i].coeff, bt.coeff);
                if coeff != 0 {
                    out.push(ModTerm { coeff, ..bt });
                }
                i += 1;
                j += 1;
                bj = if j < b.len() { Some(shift(&b[j])) } else { None };
            }
        }
    }
    if let Some(bt) = bj {
        out.push(bt);
        j += 1;
        for t in &b[j..] {
            out.push(shift(t));
        }
    }
}

/// Interreduces a set of module elements by full normal forms against each
/// other: zeros drop, leads end up pairwise non-dividing, output is monic
/// and sorted by ascending lead. Generation is preserved.
pub(crate) fn interreduce_modpolys(field: PrimeField, elems: Vec<ModPoly>) -> Vec<ModPoly> {
    let mut work: Vec<ModPoly> = elems.into_iter().filter(|e| !e.is_zero()).collect();
    work.sort_by(|a, b| cmp_term(a.lead().unwrap(), b.lead().unwrap()));
    let mut kept: Vec<ModPoly> = Vec::new();
    for e in work {
        let r = normal_form_against(field, e, &kept);
        if r.is_zero() {
            continue;
        }
        let inv = field.inv(r.lead().unwrap().coeff);
        kept.push(r.scale(field, inv));
    }
    // One tail-cleaning pass now that all leads are known.
    let snapshot = kept.clone();
    let mut out = Vec::with_capacity(snapshot.len());
    for (i, e) in snapshot.iter().enumerate() {
        let others: Vec<ModPoly> = snapshot
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, x)| x.clone())
            .collect();
        let r = normal_form_against(field, e.clone(), &others);
        if !r.is_zero() {
            let inv = field.inv(r.lead().unwrap().coeff);
            out.push(r.scale(field, inv));
        }
    }
    out.sort_by(|a, b| cmp_term(a.lead().unwrap(), b.lead().unwrap()));
    out
}

fn normal_form_against(field: PrimeField, h: ModPoly, basis: &[ModPoly]) -> ModPoly {
    let mut out: Vec<ModTerm> = Vec::new();
    let mut cur = h;
    let mut head = 0usize;
    'outer: while head < cur.terms.len() {
        let lead = cur.terms[head];
        for b in basis {
            let bl = b.lead().unwrap();
            if bl.pos == lead.pos && bl.mono.divides(&lead.mono) {
                let m = lead.mono.checked_div(&bl.mono).unwrap();
                let c = field.neg(field.mul(lead.coeff, field.inv(bl.coeff)));
                cur = cur.axpy(head + 1, field, c, &m, b, 1);
                head = 0;
                continue 'outer;
            }
        }
        out.push(lead);
        head += 1;
    }
    ModPoly { terms: out }
}

impl ModPoly {
    pub fn mul_monomial(&self, m: &Monomial) -> ModPoly {
        let mdeg = m.degree() as i64;
        ModPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm {
                    tdeg: t.tdeg + mdeg,
                    skey: t.skey.mul(m),
                    mono: t.mono.mul(m),
                    pos: t.pos,
                    coeff: t.coeff,
                })
                .collect(),
        }
    }
}
