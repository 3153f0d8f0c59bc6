//! Chern-class formulas, the `rho = 1` vanishing criterion, Hodge numbers
//! and the deformation distinguisher.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gb::Ideal;
use crate::resolve::{
    betti_table, ext_graded_dim, sheaf_cohomology_dim_res, BettiTable, ChainComplex, SheafKind,
};

/// `c3 = 2 [ d(-14e^3 + 84e^2 - 180e + 140) + 3e c2H - 8 c2H + 1 - pa ]`.
pub fn c3_formula(d: i64, c2h: i64, e: i64, pa: i64) -> i64 {
    let p = -14 * e * e * e + 84 * e * e - 180 * e + 140;
    2 * (d * p + 3 * e * c2h - 8 * c2h + 1 - pa)
}

/// `c3` from the invariants of an actual degree-`e` degeneracy curve:
/// `c3 = 2 [ d(-14e^3 + 84e^2 - 180e + 140) + 3e c2H - 8 c2H - 1 + pa ]`.
///
/// The curve's Euler characteristic enters through
/// `chi(N^v(-3e+8)) = 3 PH(-4e+8) + chi(O_X) - chi(O_C)`, i.e. with
/// `-(1 - pa)`; this is the form the four-term exact sequence bookkeeping
/// forces, and it reproduces the known `c3` of the degree-15 example from
/// its computed curve. [`c3_formula`] keeps the opposite written
/// convention for the `pa` term.
pub fn c3_via_degeneracy_curve(d: i64, c2h: i64, e: i64, pa: i64) -> i64 {
    let p = -14 * e * e * e + 84 * e * e - 180 * e + 140;
    2 * (d * p + 3 * e * c2h - 8 * c2h - 1 + pa)
}

/// `chi(N^v(h)) = c3/2 + d(2h^3/3 - 4h^2 + 4h - 4/3) + (2 c2H / 3)(2h - 1)`.
pub fn chi_conormal(h: i64, d: i64, c2h: i64, c3: i64) -> BigRational {
    let r = |n: i64, den: i64| BigRational::new(BigInt::from(n), BigInt::from(den));
    r(c3, 2)
        + r(d, 1) * (r(2 * h * h * h, 3) - r(4 * h * h, 1) + r(4 * h, 1) - r(4, 3))
        + r(2 * c2h, 3) * r(2 * h - 1, 1)
}

/// Hodge numbers under `rho = 1`: `h11 = 1`, `h12 = 1 - c3/2`.
pub fn hodge(c3: i64, rho: &RhoReport) -> Result<(i64, i64)> {
    if rho.verdict != RhoVerdict::RhoOne {
        return Err(Error::BadData("hodge requires a rho=1 verdict".into()));
    }
    if c3 % 2 != 0 {
        return Err(Error::OddChernNumber(c3));
    }
    Ok((1, 1 - c3 / 2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RhoVerdict {
    /// All window vanishings hold; `h^{1,1} = 1`.
    RhoOne,
    /// Some cohomology survived; the criterion is silent.
    Unverified,
}

/// Outcome of the vanishing criterion. The criterion is sufficient only: a
/// passing non-Calabi-Yau input does not acquire a Picard-number
/// computation, which `sufficient_only` records.
#[derive(Clone, Debug, Serialize)]
pub struct RhoReport {
    pub verdict: RhoVerdict,
    pub m0: i64,
    /// Inclusive window `[m0, reg+1]` actually checked; vanishing beyond it
    /// follows from regularity.
    pub window: (i64, i64),
    /// `(i, m, dim H^i(X, O_X(m)))` for `i = 1..=3` over the window.
    pub h_structure: Vec<(u32, i64, usize)>,
    /// `(m, dim H^1(P^N, I~(m)))` over the window.
    pub h_ideal: Vec<(i64, usize)>,
    /// Resolution length equals the codimension (arithmetically
    /// Cohen-Macaulay): every window value vanishes for degree reasons.
    pub fast_path_acm: bool,
    /// Saturation of `I` is assumed; it holds automatically when
    /// `length <= nvars - 2` (depth at least 2), else flagged.
    pub saturation_assumed_unverified: bool,
    pub sufficient_only: &'static str,
}

/// Checks `H^i(X, O_X(m)) = 0` for `i in {1,2,3}` and `H^1(I~(m)) = 0` over
/// `m in [m0, reg+1]` on the minimal free resolution of `S/I`.
pub fn rho_check(ideal: &Ideal, res: &ChainComplex) -> Result<RhoReport> {
    let (_, m0) = ideal.minimal_generators()?;
    let m0 = m0 as i64;
    let table = betti_table(res)?;
    let reg = table.regularity();
    let nvars = ideal.ring().nvars();
    let window = (m0, reg + 1);
    let mut h_structure = Vec::new();
    let mut h_ideal = Vec::new();
    let mut all_zero = true;
    for m in window.0..=window.1 {
        for i in 1..=3u32 {
            let h = sheaf_cohomology_dim_res(res, SheafKind::Structure, i, m)?;
            all_zero &= h == 0;
            h_structure.push((i, m, h));
        }
        let h = sheaf_cohomology_dim_res(res, SheafKind::IdealSheaf, 1, m)?;
        all_zero &= h == 0;
        h_ideal.push((m, h));
    }
    let codim = (res.len()) == nvars - 1 - 3; // length-4 fast path in P^7
    Ok(RhoReport {
        verdict: if all_zero { RhoVerdict::RhoOne } else { RhoVerdict::Unverified },
        m0,
        window,
        h_structure,
        h_ideal,
        fast_path_acm: codim,
        saturation_assumed_unverified: res.len() > nvars - 2,
        sufficient_only:
            "vanishing criterion is sufficient for rho=1, not a Picard-number computation",
    })
}

/// Sanity accessor used by tests: `dim Ext^j(S/I, S)_d` on the resolution.
pub fn ext_dim(res: &ChainComplex, j: usize, d: i64) -> Result<usize> {
    ext_graded_dim(res, j, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DistinguishVerdict {
    /// Minimal generator degrees differ, so no flat family connects them.
    NotDeformationEquivalent { s1: i64, s2: i64 },
    /// Equal minimal generator degrees decide nothing.
    Indeterminate,
}

/// Compares `min { j : beta_{1,j} != 0 }` of two Betti tables; differing
/// minimal generator degrees obstruct deformation equivalence.
pub fn deformation_distinguisher(b1: &BettiTable, b2: &BettiTable) -> Result<DistinguishVerdict> {
    let s1 = b1.min_generator_degree()?;
    let s2 = b2.min_generator_degree()?;
    if s1 != s2 {
        Ok(DistinguishVerdict::NotDeformationEquivalent { s1, s2 })
    } else {
        Ok(DistinguishVerdict::Indeterminate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn c3_formula_paper_values() {
        assert_eq!(c3_formula(15, 66, 2, 4), -150);
        assert_eq!(c3_formula(17, 62, 2, 1), -112);
        // The curve-facing variant carries the opposite pa sign; at pa = 1
        // both agree.
        assert_eq!(c3_via_degeneracy_curve(17, 62, 2, 1), -112);
        // Values realized by the actually computed degeneracy curves:
        assert_eq!(c3_via_degeneracy_curve(17, 62, 2, 3), -108);
        assert_eq!(c3_via_degeneracy_curve(15, 66, 3, 190), -150);
    }

    #[test]
    fn chi_conormal_values() {
        let r = |n: i64| BigRational::from(BigInt::from(n));
        assert_eq!(chi_conormal(0, 15, 66, -150), r(-139));
        // h = 2: the cubic bracket collapses to -4, so chi = c3/2 - 4d + 2 c2H
        let v = chi_conormal(2, 15, 66, -150);
        assert_eq!(v, r(-150 / 2 - 4 * 15 + 2 * 66));
    }

    /// Eagon-Northcott consistency: with c3 from the formula,
    /// `chi_conormal(-3e+8) = 3 PH(-4e+8) + 1 - pa` identically.
    #[test]
    fn eagon_northcott_identity_random() {
        let mut state = 12345u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..1000 {
            let d = (next() % 50) as i64 + 1;
            let c2h = (next() % 200) as i64 - 100;
            let e = (next() % 6) as i64 + 1;
            let pa = (next() % 400) as i64 - 200;
            let c3 = c3_formula(d, c2h, e, pa);
            let lhs = chi_conormal(-3 * e + 8, d, c2h, c3);
            let t = -4 * e + 8;
            let ph = BigRational::new(BigInt::from(d * t * t * t), 6.into())
                + BigRational::new(BigInt::from(c2h * t), 12.into());
            let rhs = BigRational::from(BigInt::from(3)) * ph
                + BigRational::from(BigInt::from(1 - pa));
            assert_eq!(lhs, rhs, "d={} c2h={} e={} pa={}", d, c2h, e, pa);
        }
    }

    #[test]
    fn hodge_values() {
        let rho = RhoReport {
            verdict: RhoVerdict::RhoOne,
            m0: 2,
            window: (2, 5),
            h_structure: vec![],
            h_ideal: vec![],
            fast_path_acm: true,
            saturation_assumed_unverified: false,
            sufficient_only: "",
        };
        assert_eq!(hodge(-112, &rho).unwrap(), (1, 57));
        assert_eq!(hodge(-64, &rho).unwrap(), (1, 33));
        assert_eq!(hodge(-98, &rho).unwrap(), (1, 50));
        assert!(hodge(-7, &rho).is_err());
        let zero = chi_conormal(0, 0, 0, 0);
        assert!(zero.is_zero());
    }

    #[test]
    fn distinguisher_verdicts() {
        let mut b1 = BettiTable::default();
        b1.set(0, 0, 1);
        b1.set(1, 2, 1);
        b1.set(1, 4, 14);
        let mut b2 = BettiTable::default();
        b2.set(0, 0, 1);
        b2.set(1, 3, 7);
        match deformation_distinguisher(&b1, &b2).unwrap() {
            DistinguishVerdict::NotDeformationEquivalent { s1, s2 } => {
                assert_eq!((s1, s2), (2, 3));
            }
            v => panic!("unexpected {:?}", v),
        }
        assert_eq!(
            deformation_distinguisher(&b2, &b2).unwrap(),
            DistinguishVerdict::Indeterminate
        );
        let empty = BettiTable::default();
        assert!(deformation_distinguisher(&empty, &b2).is_err());
    }
}
