//! Hilbert series and polynomials, dimension and degree of zero loci, curve
//! arithmetic genus and the Calabi-Yau invariant extraction for 3-folds in
//! `P^7`.
//!
//! Everything routes through the lead-term monomial ideal of the reduced
//! Groebner basis; the series numerator is computed by the classical pivot
//! recursion on a most-frequent variable.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gb::Ideal;
use crate::ring::Monomial;

/// Numerator `N(t)` with `HS(S/I) = N(t) / (1-t)^nvars`, as integer
/// coefficients indexed by degree.
pub fn hilbert_series_numerator(ideal: &Ideal) -> Result<Vec<i64>> {
    let leads = ideal.lead_monomials()?;
    let gens = minimalize(leads);
    let mut memo = HashMap::new();
    Ok(numerator_rec(&gens, &mut memo))
}

/// Dimension of the projective locus `V(I)`: Krull dimension of `S/I` minus
/// one, with `-1` for the empty locus.
///
/// Computed as `nvars - min vertex cover` of the lead-ideal supports,
/// exhaustively over variable subsets.
pub fn locus_dimension(ideal: &Ideal) -> Result<i64> {
    let leads = ideal.lead_monomials()?;
    let gens = minimalize(leads);
    if gens.iter().any(|m| m.is_one()) {
        return Ok(-1); // unit ideal, empty locus
    }
    let n = ideal.ring().nvars();
    let supports: Vec<u32> = gens
        .iter()
        .map(|m| (0..n).filter(|&i| m.exp(i) > 0).fold(0u32, |s, i| s | (1 << i)))
        .collect();
    let mut best = n as u32;
    if supports.is_empty() {
        best = 0;
    } else {
        'subset: for mask in 0u32..(1 << n) {
            let size = mask.count_ones();
            if size >= best {
                continue;
            }
            for &s in &supports {
                if s & mask == 0 {
                    continue 'subset;
                }
            }
            best = size;
        }
    }
    Ok(n as i64 - best as i64 - 1)
}

/// Exact rational-coefficient polynomial agreeing with the Hilbert function
/// of `S/I` in all large degrees.
pub fn hilbert_polynomial(ideal: &Ideal) -> Result<HilbertPolynomial> {
    let numerator = hilbert_series_numerator(ideal)?;
    let n = ideal.ring().nvars();
    Ok(hilbert_polynomial_from_numerator(&numerator, n))
}

pub fn hilbert_polynomial_from_numerator(numerator: &[i64], nvars: usize) -> HilbertPolynomial {
    let mut reduced: Vec<i64> = numerator.to_vec();
    trim(&mut reduced);
    if reduced.is_empty() {
        return HilbertPolynomial::zero(); // S/I = 0
    }
    let mut cancelled = 0usize;
    while cancelled < nvars && !reduced.is_empty() && reduced.iter().sum::<i64>() == 0 {
        // divide by (1 - t): q_i = sum of p_0..p_i
        let mut acc = 0i64;
        let mut q = Vec::with_capacity(reduced.len().saturating_sub(1));
        for (i, &c) in reduced.iter().enumerate() {
            acc += c;
            if i + 1 < reduced.len() {
                q.push(acc);
            }
        }
        reduced = q;
        trim(&mut reduced);
        cancelled += 1;
    }
    let dim = nvars - cancelled; // Krull dimension of S/I
    if dim == 0 {
        return HilbertPolynomial::zero();
    }
    // HP(t) = sum_k n_k * binom(t - k + dim - 1, dim - 1)
    let mut coeffs = vec![BigRational::zero(); dim];
    for (k, &c) in reduced.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let b = binom_poly(-(k as i64), dim - 1);
        for (i, v) in b.iter().enumerate() {
            coeffs[i] += v * BigRational::from(BigInt::from(c));
        }
    }
    HilbertPolynomial::from_coeffs(coeffs)
}

/// Coefficients of `binom(t + shift + d, d)` as a degree-`d` polynomial in
/// `t`: the product of `(t + shift + i)` for `i = 1..=d`, divided by `d!`.
fn binom_poly(shift: i64, d: usize) -> Vec<BigRational> {
    let mut poly = vec![BigRational::one()];
    for i in 1..=d {
        let c = BigRational::from(BigInt::from(shift + i as i64));
        // multiply by (t + c)
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (j, v) in poly.iter().enumerate() {
            next[j] += v * &c;
            next[j + 1] += v;
        }
        poly = next;
    }
    let mut fact = BigRational::one();
    for i in 1..=d {
        fact *= BigRational::from(BigInt::from(i as i64));
    }
    for v in poly.iter_mut() {
        *v /= &fact;
    }
    poly
}

/// Degree and arithmetic genus of a 1-dimensional locus: from
/// `HP_C(t) = deg * t + chi` return `(deg, p_a = 1 - chi)`.
pub fn curve_invariants(ideal: &Ideal) -> Result<(i64, i64)> {
    let d = locus_dimension(ideal)?;
    if d != 1 {
        return Err(Error::WrongDimension { expected: 1, found: d });
    }
    let hp = hilbert_polynomial(ideal)?;
    if hp.degree() > 1 {
        return Err(Error::WrongDimension { expected: 1, found: hp.degree() as i64 });
    }
    let deg = hp
        .coeff_as_integer(1)
        .ok_or_else(|| Error::NotCalabiYauShape("curve HP has non-integer slope".into()))?;
    let chi = hp
        .coeff_as_integer(0)
        .ok_or_else(|| Error::NotCalabiYauShape("curve HP has non-integer constant".into()))?;
    Ok((deg, 1 - chi))
}

/// For a Calabi-Yau 3-fold the Hilbert polynomial is
/// `(d/6) t^3 + (c2.H/12) t`; extracts `(d, c2.H)` and flags linear
/// normality: `chi(O_X(1)) = d/6 + c2.H/12 = nvars`, i.e.
/// `c2.H = 12*nvars - 2d` (the familiar `96 - 2d` in `P^7`).
pub fn cy_invariants_from_hp(hp: &HilbertPolynomial, nvars: usize) -> Result<(i64, i64, bool)> {
    if hp.degree() != 3 {
        return Err(Error::NotCalabiYauShape(format!("degree {} where a cubic was expected", hp.degree())));
    }
    if !hp.coeff(2).is_zero() || !hp.coeff(0).is_zero() {
        return Err(Error::NotCalabiYauShape(
            "t^2 and constant coefficients must vanish".into(),
        ));
    }
    let six = BigRational::from(BigInt::from(6));
    let twelve = BigRational::from(BigInt::from(12));
    let d = hp.coeff(3) * six;
    let c2h = hp.coeff(1) * twelve;
    let (d, c2h) = match (rational_to_i64(&d), rational_to_i64(&c2h)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::NotCalabiYauShape(
                "6*lead and 12*linear coefficients must be integers".into(),
            ))
        }
    };
    Ok((d, c2h, c2h == 12 * nvars as i64 - 2 * d))
}

fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if !r.denom().is_one() {
        return None;
    }
    i64::try_from(r.numer().clone()).ok()
}

/// Exact rational univariate polynomial in `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HilbertPolynomial {
    coeffs: Vec<BigRational>, // index = power of t, trailing zeros trimmed
}

impl HilbertPolynomial {
    pub fn zero() -> Self {
        HilbertPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        HilbertPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff_as_integer(&self, i: usize) -> Option<i64> {
        rational_to_i64(&self.coeff(i))
    }

    pub fn eval(&self, t: i64) -> BigRational {
        let t = BigRational::from(BigInt::from(t));
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &t + c;
        }
        acc
    }

    /// Integer value at `t`; panics if the value is non-integral (Hilbert
    /// polynomials of graded quotients are integer-valued on integers).
    pub fn eval_integer(&self, t: i64) -> i64 {
        let v = self.eval(t);
        assert!(v.denom().is_one(), "non-integral Hilbert polynomial value");
        i64::try_from(v.numer().clone()).expect("Hilbert value overflows i64")
    }
}

impl fmt::Display for HilbertPolynomial {
    /// Exact rationals, descending powers, e.g. `5/2*t^3+11/2*t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "{}", if c.is_negative() { "-" } else { "+" })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    write!(f, "{}*t", a)?;
                    if i > 1 {
                        write!(f, "^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Drops generators divisible by another and duplicates.
fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.cmp_grevlex(b));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    'cand: for g in gens {
        for kept in &out {
            if kept.divides(&g) {
                continue 'cand;
            }
        }
        out.push(g);
    }
    out
}

type IntPoly = Vec<i64>;

fn trim(p: &mut IntPoly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn shift(p: &[i64], k: usize) -> IntPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; p.len() + k];
    out[k..].copy_from_slice(p);
    out
}

fn one_minus_t_pow(d: u32) -> IntPoly {
    let mut p = vec![0i64; d as usize + 1];
    p[0] = 1;
    p[d as usize] -= 1;
    p // 1 - t^d
}

/// Numerator of the Hilbert series of a monomial quotient, by pivot
/// recursion. `gens` must be minimal (pairwise non-dividing).
fn numerator_rec(gens: &[Monomial], memo: &mut HashMap<Vec<Monomial>, IntPoly>) -> IntPoly {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return Vec::new();
    }
    if gens.len() == 1 {
        return one_minus_t_pow(gens[0].degree());
    }
    if gens.len() == 2 {
        // 1 - t^d1 - t^d2 + t^lcm
        let l = gens[0].lcm(&gens[1]);
        let mut p = poly_add(
            &one_minus_t_pow(gens[0].degree()),
            &one_minus_t_pow(gens[1].degree()),
        );
        p[0] -= 1;
        let lc = shift(&[1], l.degree() as usize);
        return poly_add(&p, &lc);
    }
    if let Some(p) = memo.get(gens) {
        return p.clone();
    }
    let result = numerator_split(gens, memo);
    memo.insert(gens.to_vec(), result.clone());
    result
}

/// Splits into variable-disjoint blocks when possible, else pivots.
fn numerator_split(gens: &[Monomial], memo: &mut HashMap<Vec<Monomial>, IntPoly>) -> IntPoly {
    let n = crate::ring::MAX_VARS;
    let mut comp: Vec<usize> = (0..gens.len()).collect();
    fn find(comp: &mut Vec<usize>, i: usize) -> usize {
        if comp[i] != i {
            let r = find(comp, comp[i]);
            comp[i] = r;
        }
        comp[i]
    }
    for v in 0..n {
        let mut prev: Option<usize> = None;
        for (i, g) in gens.iter().enumerate() {
            if g.exp(v) > 0 {
                if let Some(p) = prev {
                    let (a, b) = (find(&mut comp, p), find(&mut comp, i));
                    if a != b {
                        comp[a.max(b)] = a.min(b);
                    }
                }
                prev = Some(i);
            }
        }
    }
    let roots: Vec<usize> = {
        let mut r: Vec<usize> = (0..gens.len()).map(|i| find(&mut comp, i)).collect();
        r.sort_unstable();
        r.dedup();
        r
    };
    if roots.len() > 1 {
        let mut acc = vec![1i64];
        for root in roots {
            let block: Vec<Monomial> = (0..gens.len())
                .filter(|&i| find(&mut comp, i) == root)
                .map(|i| gens[i])
                .collect();
            acc = poly_mul(&acc, &numerator_rec(&block, memo));
        }
        return acc;
    }

    // Pivot on the most frequent variable:  N(M) = N(M + (x)) + t * N(M : x)
    let pivot = (0..n)
        .max_by_key(|&v| gens.iter().filter(|g| g.exp(v) > 0).count())
        .unwrap();
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| g.exp(pivot) == 0).copied().collect();
    plus.push(Monomial::var(pivot));
    let plus = minimalize(plus);
    let colon: Vec<Monomial> = gens.iter().map(|g| g.divide_by_var(pivot)).collect();
    let colon = minimalize(colon);
    poly_add(&numerator_rec(&plus, memo), &shift(&numerator_rec(&colon, memo), 1))
}
