use std::cmp::Ordering;
use std::fmt;

/// Hard cap on the number of ring variables. `P^7` needs 8; the generic
/// determinantal oracle needs 9; intermediate rings never need more.
pub const MAX_VARS: usize = 16;

/// A monomial in at most [`MAX_VARS`] variables with cached total degree.
///
/// Exponents are stored in a fixed array so the type is `Copy`; the active
/// variable count lives in the ring descriptor, with unused slots zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: [0; MAX_VARS], deg: 0 }
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many variables");
        let mut m = Monomial::one();
        m.exps[..exps.len()].copy_from_slice(exps);
        m.deg = exps.iter().map(|&e| e as u16).sum();
        m
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u8 {
        self.exps[i]
    }

    #[inline]
    pub fn exps(&self) -> &[u8; MAX_VARS] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..MAX_VARS {
            out.exps[i] = out.exps[i]
                .checked_add(other.exps[i])
                .expect("monomial exponent overflow");
        }
        out.deg = self.deg + other.deg;
        out
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    #[inline]
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Monomial::one();
        for i in 0..MAX_VARS {
            if self.exps[i] < other.exps[i] {
                return None;
            }
            out.exps[i] = self.exps[i] - other.exps[i];
        }
        out.deg = self.deg - other.deg;
        Some(out)
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        (0..MAX_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::one();
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
            deg += out.exps[i] as u16;
        }
        out.deg = deg;
        out
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Monomial::one();
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].min(other.exps[i]);
            deg += out.exps[i] as u16;
        }
        out.deg = deg;
        out
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || other.exps[i] == 0)
    }

    /// Exponent of `var` dropped by one (used for monomial-ideal colons).
    pub fn divide_by_var(&self, var: usize) -> Monomial {
        let mut out = *self;
        if out.exps[var] > 0 {
            out.exps[var] -= 1;
            out.deg -= 1;
        }
        out
    }

    /// Graded reverse lexicographic comparison with `x0 > x1 > ...`:
    /// higher total degree wins, ties broken by the last position where the
    /// exponents differ, smaller exponent there winning.
    #[inline]
    pub fn cmp_grevlex(&self, other: &Monomial) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..MAX_VARS).rev() {
            if self.exps[i] != other.exps[i] {
                return if self.exps[i] < other.exps[i] {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_grevlex(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i)?;
            } else {
                write!(f, "x{}^{}", i, e)?;
            }
        }
        Ok(())
    }
}

/// All monomials of total degree `d` in `nvars` variables, in descending
/// grevlex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    assert!(nvars <= MAX_VARS);
    let mut out = Vec::new();
    let mut exps = [0u8; MAX_VARS];
    fill(&mut out, &mut exps, 0, nvars, d);
    out.sort_by(|a, b| b.cmp_grevlex(a));
    out
}

fn fill(out: &mut Vec<Monomial>, exps: &mut [u8; MAX_VARS], var: usize, nvars: usize, rem: u32) {
    if var + 1 == nvars {
        exps[var] = u8::try_from(rem).expect("monomial exponent overflow");
        out.push(Monomial::from_exps(&exps[..nvars]));
        exps[var] = 0;
        return;
    }
    for e in 0..=rem {
        exps[var] = u8::try_from(e).expect("monomial exponent overflow");
        fill(out, exps, var + 1, nvars, rem - e);
    }
    exps[var] = 0;
}
