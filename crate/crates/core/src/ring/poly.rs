use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::field::PrimeField;
use super::monomial::{Monomial, MAX_VARS};

/// Ring descriptor: a polynomial ring `F_p[x0..x{n-1}]` under grevlex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    field: PrimeField,
    nvars: usize,
}

impl Ring {
    pub fn new(p: u32, nvars: usize) -> Result<Self> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "nvars must be in 1..={}, got {}",
                MAX_VARS, nvars
            )));
        }
        Ok(Ring { field: PrimeField::new(p)?, nvars })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.field.modulus()
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn check_same(&self, other: &Ring) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial { ring: *self, terms: Vec::new() }
    }

    pub fn constant(&self, c: i64) -> Polynomial {
        let c = self.field.reduce_i64(c);
        if c == 0 {
            return self.zero();
        }
        Polynomial { ring: *self, terms: vec![Term { mono: Monomial::one(), coeff: c }] }
    }

    pub fn var(&self, i: usize) -> Result<Polynomial> {
        if i >= self.nvars {
            return Err(Error::VarIndex { index: i, nvars: self.nvars });
        }
        Ok(Polynomial { ring: *self, terms: vec![Term { mono: Monomial::var(i), coeff: 1 }] })
    }

    pub fn monomial(&self, mono: Monomial, coeff: i64) -> Polynomial {
        let c = self.field.reduce_i64(coeff);
        if c == 0 {
            return self.zero();
        }
        Polynomial { ring: *self, terms: vec![Term { mono, coeff: c }] }
    }

    /// Builds a polynomial from arbitrary (coefficient, monomial) pairs,
    /// merging duplicates and restoring canonical order.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (i64, Monomial)>) -> Polynomial {
        let mut v: Vec<Term> = terms
            .into_iter()
            .map(|(c, m)| Term { mono: m, coeff: self.field.reduce_i64(c) })
            .collect();
        v.sort_by(|a, b| b.mono.cmp_grevlex(&a.mono));
        let mut out: Vec<Term> = Vec::with_capacity(v.len());
        for t in v {
            match out.last_mut() {
                Some(last) if last.mono == t.mono => {
                    last.coeff = self.field.add(last.coeff, t.coeff);
                    if last.coeff == 0 {
                        out.pop();
                    }
                }
                _ => {
                    if t.coeff != 0 {
                        out.push(t);
                    }
                }
            }
        }
        Polynomial { ring: *self, terms: out }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mono: Monomial,
    pub coeff: u32,
}

/// Sparse multivariate polynomial over a prime field; terms are strictly
/// descending in grevlex with nonzero canonical coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring: Ring,
    terms: Vec<Term>,
}

impl Polynomial {
    #[inline]
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    #[inline]
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.mono.is_one())
    }

    /// Leading term under grevlex; `None` for the zero polynomial.
    #[inline]
    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    /// `Some(d)` when every term has total degree `d` (zero counts as
    /// homogeneous of any degree and returns `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.mono.degree();
        self.terms.iter().all(|t| t.mono.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        Ok(self.merge_scaled(other, 1, &Monomial::one()))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        let minus_one = self.ring.field().neg(1);
        Ok(self.merge_scaled(other, minus_one, &Monomial::one()))
    }

    /// `self + c * m * other`, the workhorse of every reduction.
    pub(crate) fn merge_scaled(&self, other: &Polynomial, c: u32, m: &Monomial) -> Polynomial {
        let f = self.ring.field();
        if c == 0 || other.is_zero() {
            return self.clone();
        }
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            let bm = b[j].mono.mul(m);
            match a[i].mono.cmp_grevlex(&bm) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { mono: bm, coeff: f.mul(c, b[j].coeff) });
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = f.add(a[i].coeff, f.mul(c, b[j].coeff));
                    if coeff != 0 {
                        out.push(Term { mono: bm, coeff });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            out.push(Term { mono: t.mono.mul(m), coeff: f.mul(c, t.coeff) });
        }
        Polynomial { ring: self.ring, terms: out }
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field();
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|t| Term { mono: t.mono, coeff: f.neg(t.coeff) }).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = self.ring.field();
        let c = f.reduce_u64(c as u64);
        if c == 0 {
            return self.ring.zero();
        }
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|t| Term { mono: t.mono, coeff: f.mul(t.coeff, c) }).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ring: self.ring,
            terms: self.terms.iter().map(|t| Term { mono: t.mono.mul(m), coeff: t.coeff }).collect(),
        }
    }

    /// Monic rescaling; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.lead() {
            None => self.clone(),
            Some(t) => self.scale(self.ring.field().inv(t.coeff)),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.ring.check_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.ring.zero());
        }
        // Schoolbook: accumulate one scaled shift of `other` per term of the
        // shorter factor.
        let (short, long) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = self.ring.zero();
        for t in &short.terms {
            acc = acc.merge_scaled(long, t.coeff, &t.mono);
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.ring.nvars() {
            return Err(Error::VarIndex { index: i, nvars: self.ring.nvars() });
        }
        let f = self.ring.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let e = t.mono.exp(i);
            if e == 0 {
                continue;
            }
            let coeff = f.mul(t.coeff, f.reduce_u64(e as u64));
            if coeff != 0 {
                terms.push(Term { mono: t.mono.divide_by_var(i), coeff });
            }
        }
        // Dropping terms keeps descending order intact.
        Ok(Polynomial { ring: self.ring, terms })
    }

    /// Evaluates at a point of `F_p^n` (used by randomized checks).
    pub fn eval(&self, point: &[u32]) -> u32 {
        let f = self.ring.field();
        let mut acc = 0u32;
        for t in &self.terms {
            let mut v = t.coeff;
            for (i, &x) in point.iter().enumerate().take(self.ring.nvars()) {
                for _ in 0..t.mono.exp(i) {
                    v = f.mul(v, x);
                }
            }
            acc = f.add(acc, v);
        }
        acc
    }
}

/// Column `j` is the gradient of `gens[j]`: entry `(i, j) = d gens[j] / d x_i`.
pub fn jacobian(gens: &[Polynomial]) -> Result<Vec<Vec<Polynomial>>> {
    let first = gens.first().ok_or(Error::EmptyGenerators)?;
    let ring = *first.ring();
    for g in gens {
        ring.check_same(g.ring())?;
    }
    let mut rows = Vec::with_capacity(ring.nvars());
    for i in 0..ring.nvars() {
        let mut row = Vec::with_capacity(gens.len());
        for g in gens {
            row.push(g.partial_derivative(i)?);
        }
        rows.push(row);
    }
    Ok(rows)
}

impl fmt::Display for Polynomial {
    /// Canonical text form: descending grevlex, explicit coefficient in
    /// `[0, p)`, `*` between factors, `^` for powers, e.g.
    /// `3*x0^2*x3+100*x1^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{}", t.coeff)?;
            for i in 0..self.ring.nvars() {
                let e = t.mono.exp(i);
                if e == 1 {
                    write!(f, "*x{}", i)?;
                } else if e > 1 {
                    write!(f, "*x{}^{}", i, e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parses the canonical text form back into a polynomial. Accepts leading
/// `-` on terms and omitted coefficients (`x0^2`) for hand-written files;
/// errors carry a column for diagnostics.
pub fn parse_polynomial(ring: &Ring, input: &str) -> Result<Polynomial> {
    let s: Vec<char> = input.chars().collect();
    let mut pos = 0usize;
    let mut terms: Vec<(i64, Monomial)> = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse { column: pos + 1, message: msg.to_string() };

    let skip_ws = |pos: &mut usize| {
        while *pos < s.len() && s[*pos].is_whitespace() {
            *pos += 1;
        }
    };

    skip_ws(&mut pos);
    if pos >= s.len() {
        return Err(err(pos, "empty polynomial"));
    }
    let mut sign: i64 = 1;
    if s[pos] == '-' {
        sign = -1;
        pos += 1;
    } else if s[pos] == '+' {
        pos += 1;
    }
    loop {
        skip_ws(&mut pos);
        // One term: [coeff] factors separated by '*'.
        let mut coeff: i64 = 1;
        let mut saw_coeff = false;
        let mut mono = Monomial::one();
        let mut saw_factor = false;
        loop {
            skip_ws(&mut pos);
            if pos < s.len() && s[pos].is_ascii_digit() {
                let start = pos;
                while pos < s.len() && s[pos].is_ascii_digit() {
                    pos += 1;
                }
                let n: i64 = input[start..pos]
                    .parse()
                    .map_err(|_| err(start, "coefficient out of range"))?;
                if saw_coeff || saw_factor {
                    return Err(err(start, "unexpected number"));
                }
                coeff = n;
                saw_coeff = true;
            } else if pos < s.len() && s[pos] == 'x' {
                pos += 1;
                let start = pos;
                while pos < s.len() && s[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(start, "expected variable index after 'x'"));
                }
                let idx: usize =
                    input[start..pos].parse().map_err(|_| err(start, "bad variable index"))?;
                if idx >= ring.nvars() {
                    return Err(err(start, "variable index out of range for ring"));
                }
                let mut exp: u32 = 1;
                if pos < s.len() && s[pos] == '^' {
                    pos += 1;
                    let estart = pos;
                    while pos < s.len() && s[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if estart == pos {
                        return Err(err(estart, "expected exponent after '^'"));
                    }
                    exp = input[estart..pos].parse().map_err(|_| err(estart, "bad exponent"))?;
                }
                let mut step = Monomial::one();
                for _ in 0..exp {
                    step = step.mul(&Monomial::var(idx));
                }
                mono = mono.mul(&step);
                saw_factor = true;
            } else {
                return Err(err(pos, "expected coefficient or variable"));
            }
            skip_ws(&mut pos);
            if pos < s.len() && s[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        if !saw_coeff && !saw_factor {
            return Err(err(pos, "empty term"));
        }
        terms.push((sign * coeff, mono));
        skip_ws(&mut pos);
        if pos >= s.len() {
            break;
        }
        sign = match s[pos] {
            '+' => 1,
            '-' => -1,
            _ => return Err(err(pos, "expected '+' or '-' between terms")),
        };
        pos += 1;
    }
    let p = ring.from_terms(terms);
    // "0" parses as constant 0 and collapses to the zero polynomial.
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: u32, n: usize) -> Ring {
        Ring::new(p, n).unwrap()
    }

    #[test]
    fn additive_inverse_and_identity() {
        let ring = r(101, 2);
        let x0 = ring.var(0).unwrap();
        let x1 = ring.var(1).unwrap();
        // (x0+x1) + (p-1)*x1 = x0
        let f = x0.add(&x1).unwrap();
        let g = x1.scale(100);
        assert_eq!(f.add(&g).unwrap(), x0);
        // f * 1 = f
        let one = ring.constant(1);
        assert_eq!(f.mul(&one).unwrap(), f);
    }

    #[test]
    fn schoolbook_product() {
        let ring = r(101, 2);
        let x0 = ring.var(0).unwrap();
        let x1 = ring.var(1).unwrap();
        let f = x0.add(&x1).unwrap();
        let g = x0.sub(&x1).unwrap();
        let want = parse_polynomial(&ring, "x0^2+100*x1^2").unwrap();
        assert_eq!(f.mul(&g).unwrap(), want);
    }

    #[test]
    fn ring_mismatch_rejected() {
        let a = r(101, 2).var(0).unwrap();
        let b = r(107, 2).var(0).unwrap();
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn derivative_cases() {
        let ring = r(101, 2);
        let f = parse_polynomial(&ring, "x0^3").unwrap();
        assert_eq!(f.partial_derivative(0).unwrap().to_string(), "3*x0^2");
        let g = parse_polynomial(&ring, "x1^2").unwrap();
        assert!(g.partial_derivative(0).unwrap().is_zero());
        // d(x0^p)/dx0 = p*x0^(p-1) = 0 in characteristic p.
        let ring5 = r(5, 1);
        let h = parse_polynomial(&ring5, "x0^5").unwrap();
        assert!(h.partial_derivative(0).unwrap().is_zero());
        assert!(f.partial_derivative(7).is_err());
    }

    #[test]
    fn jacobian_shapes() {
        let ring = r(101, 8);
        let g = parse_polynomial(&ring, "x0^2").unwrap();
        let j = jacobian(&[g]).unwrap();
        assert_eq!(j.len(), 8);
        assert_eq!(j[0][0].to_string(), "2*x0");
        for row in j.iter().skip(1) {
            assert!(row[0].is_zero());
        }

        let g0 = parse_polynomial(&ring, "x0*x1").unwrap();
        let g1 = parse_polynomial(&ring, "x2").unwrap();
        let j = jacobian(&[g0, g1]).unwrap();
        assert_eq!(j[0][0].to_string(), "1*x1");
        assert_eq!(j[1][0].to_string(), "1*x0");
        assert_eq!(j[2][1].to_string(), "1");
        assert!(jacobian(&[]).is_err());
    }

    #[test]
    fn display_canonical_form() {
        let ring = r(101, 4);
        // Under grevlex x1^3 beats x0^2*x3 (rightmost differing exponent).
        let f = parse_polynomial(&ring, "3*x0^2*x3+100*x1^3").unwrap();
        assert_eq!(f.to_string(), "100*x1^3+3*x0^2*x3");
        assert_eq!(ring.zero().to_string(), "0");
        // -1 normalizes to p-1; term order restored.
        let g = parse_polynomial(&ring, "x0^3 - x0^2*x1").unwrap();
        assert_eq!(g.to_string(), "1*x0^3+100*x0^2*x1");
    }

    #[test]
    fn parse_rejects_garbage() {
        let ring = r(101, 2);
        assert!(parse_polynomial(&ring, "x5").is_err());
        assert!(parse_polynomial(&ring, "3**x0").is_err());
        assert!(parse_polynomial(&ring, "").is_err());
        assert!(parse_polynomial(&ring, "x0^").is_err());
    }

    #[test]
    fn eval_matches_terms() {
        let ring = r(101, 3);
        let f = parse_polynomial(&ring, "2*x0^2+3*x1*x2+7").unwrap();
        assert_eq!(f.eval(&[1, 2, 3]), (2 + 18 + 7) % 101);
    }
}
