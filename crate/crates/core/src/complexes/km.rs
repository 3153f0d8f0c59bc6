//! The Kustin-Miller complex over split bundles: auxiliary data
//! `(w, z, S, Z, B, T)` and the length-4 self-dual complex with
//! differentials `d_1..d_4`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gb::Ideal;
use crate::resolve::{ChainComplex, GradedMatrix};
use crate::ring::{parse_polynomial, Polynomial, Ring};

use super::{
    alt3_from_row, pfaffian_row, poly_rows_from_dto, poly_rows_to_dto, signed_pfaffian,
    AlternatingMatrix, PolyMatrixDto,
};

/// Input data: `tau = 2s+1`, twists for `E = ⊕O(a_i)`, `F = ⊕O(f_j)`
/// (rank 3), line bundles `L1, L2`; the alternating `Y` on `E` with twist
/// `l1`, `A : F -> E`, `b : F -> L2`, and nonzero `u`, `v`.
#[derive(Clone, Debug)]
pub struct KmData {
    ring: Ring,
    a: Vec<i64>,
    f: [i64; 3],
    l1: i64,
    l2: i64,
    y: AlternatingMatrix,
    a_mat: Vec<Vec<Polynomial>>,
    b_row: Vec<Polynomial>,
    u: Polynomial,
    v: Polynomial,
    pub provenance: Option<String>,
}

impl KmData {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ring: Ring,
        a: Vec<i64>,
        f: [i64; 3],
        l1: i64,
        l2: i64,
        y: AlternatingMatrix,
        a_mat: Vec<Vec<Polynomial>>,
        b_row: Vec<Polynomial>,
        u: Polynomial,
        v: Polynomial,
    ) -> Result<Self> {
        let tau = a.len();
        if tau % 2 == 0 || tau < 3 {
            return Err(Error::BadData(format!("tau must be odd >= 3, got {}", tau)));
        }
        if y.size() != tau || y.twists_e() != a.as_slice() || y.twist_l() != l1 {
            return Err(Error::BadData("Y twist data does not match (a, l1)".into()));
        }
        if a_mat.len() != tau || a_mat.iter().any(|r| r.len() != 3) || b_row.len() != 3 {
            return Err(Error::BadData("A must be tau x 3 and b 1 x 3".into()));
        }
        if u.is_zero() || v.is_zero() {
            return Err(Error::BadData("u and v must be nonzero".into()));
        }
        let data = KmData { ring, a, f, l1, l2, y, a_mat, b_row, u, v, provenance: None };
        data.check_twists()?;
        Ok(data)
    }

    fn check_twists(&self) -> Result<()> {
        let check = |p: &Polynomial, forced: i64, what: &str, row: usize, col: usize| {
            if p.is_zero() {
                return Ok(());
            }
            match p.homogeneous_degree() {
                Some(d) if forced >= 0 && d as i64 == forced => Ok(()),
                found => Err(Error::TwistViolation {
                    context: format!("KM data {}", what),
                    row,
                    col,
                    found,
                    forced,
                }),
            }
        };
        for (i, r) in self.a_mat.iter().enumerate() {
            for (j, p) in r.iter().enumerate() {
                check(p, self.a[i] - self.f[j], "A", i, j)?;
            }
        }
        for (j, p) in self.b_row.iter().enumerate() {
            check(p, self.l2 - self.f[j], "b", 0, j)?;
        }
        check(&self.u, self.m_twist() - self.l2, "u", 0, 0)?;
        check(&self.v, self.l2 - self.l1 - self.sum_f(), "v", 0, 0)?;
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn tau(&self) -> usize {
        self.a.len()
    }

    pub fn y(&self) -> &AlternatingMatrix {
        &self.y
    }

    pub fn a_mat(&self) -> &[Vec<Polynomial>] {
        &self.a_mat
    }

    pub fn b_row(&self) -> &[Polynomial] {
        &self.b_row
    }

    pub fn u(&self) -> &Polynomial {
        &self.u
    }

    pub fn v(&self) -> &Polynomial {
        &self.v
    }

    pub fn twists(&self) -> (&[i64], [i64; 3], i64, i64) {
        (&self.a, self.f, self.l1, self.l2)
    }

    pub fn sum_f(&self) -> i64 {
        self.f.iter().sum()
    }

    /// `c1(M) = sum a_i + s * l1` where `M = det(E) ⊗ L1^s`.
    pub fn m_twist(&self) -> i64 {
        let s = (self.tau() as i64 - 1) / 2;
        self.a.iter().sum::<i64>() + s * self.l1
    }

    /// The `G_4` twist making the complex quasi-self-dual twist-by-twist:
    /// `g4 = l1 - l2 - 3m + 2*sum(f)`.
    pub fn g4_twist(&self) -> i64 {
        self.l1 - self.l2 - 3 * self.m_twist() + 2 * self.sum_f()
    }

    /// Twist of `omega_X = O(-(N+1) + 3m - 2*sum(f) + l2 - l1)`.
    pub fn canonical_twist(&self) -> i64 {
        -(self.ring.nvars() as i64) + 3 * self.m_twist() - 2 * self.sum_f() + self.l2 - self.l1
    }

    /// `deg u + deg v`; below 2 the scheme lies in a hyperplane.
    pub fn uv_degree(&self) -> i64 {
        (self.m_twist() - self.l2) + (self.l2 - self.l1 - self.sum_f())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dto = KmDataDto {
            prime: self.ring.modulus(),
            nvars: self.ring.nvars(),
            a: self.a.clone(),
            f: self.f.to_vec(),
            l1: self.l1,
            l2: self.l2,
            y_upper: self.y.to_rows().iter().enumerate().flat_map(|(i, r)| {
                r.iter().skip(i + 1).map(|p| p.to_string()).collect::<Vec<_>>()
            }).collect(),
            a_mat: poly_rows_to_dto(&self.a_mat),
            b: self.b_row.iter().map(|p| p.to_string()).collect(),
            u: self.u.to_string(),
            v: self.v.to_string(),
            provenance: self.provenance.clone(),
        };
        serde_json::to_value(dto).expect("static shape")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<KmData> {
        let dto: KmDataDto = serde_json::from_value(v.clone())?;
        let ring = Ring::new(dto.prime, dto.nvars)?;
        let y_upper = dto
            .y_upper
            .iter()
            .map(|s| parse_polynomial(&ring, s))
            .collect::<Result<Vec<_>>>()?;
        let y = AlternatingMatrix::new(ring, dto.a.clone(), dto.l1, y_upper)?;
        let f: [i64; 3] = dto
            .f
            .as_slice()
            .try_into()
            .map_err(|_| Error::BadData("f must have length 3".into()))?;
        let mut data = KmData::new(
            ring,
            dto.a,
            f,
            dto.l1,
            dto.l2,
            y,
            poly_rows_from_dto(&ring, &dto.a_mat)?,
            dto.b.iter().map(|s| parse_polynomial(&ring, s)).collect::<Result<Vec<_>>>()?,
            parse_polynomial(&ring, &dto.u)?,
            parse_polynomial(&ring, &dto.v)?,
        )?;
        data.provenance = dto.provenance;
        Ok(data)
    }
}

#[derive(Serialize, Deserialize)]
struct KmDataDto {
    prime: u32,
    nvars: usize,
    a: Vec<i64>,
    f: Vec<i64>,
    l1: i64,
    l2: i64,
    y_upper: Vec<String>,
    a_mat: PolyMatrixDto,
    b: Vec<String>,
    u: String,
    v: String,
    provenance: Option<String>,
}

/// The derived matrices: `w`, `z = u b - y A`, `S`, `Z`, `B`, `T = -B A^T`
/// and the Pfaffian row of `Y`.
#[derive(Clone, Debug)]
pub struct KmAux {
    pub w: Polynomial,
    pub z: Vec<Polynomial>,
    pub s_mat: Vec<Vec<Polynomial>>,
    pub z_alt: AlternatingMatrix,
    pub b_alt: AlternatingMatrix,
    pub t_mat: Vec<Vec<Polynomial>>,
    pub y_row: Vec<Polynomial>,
}

pub fn km_auxiliaries(d: &KmData) -> Result<KmAux> {
    let ring = d.ring;
    let tau = d.tau();
    let y_row = pfaffian_row(&d.y)?;

    // w = sum over triples i<j<k of det(A rows i,j,k) * Y_{ijk}
    let mut w = ring.zero();
    for i in 0..tau {
        for j in (i + 1)..tau {
            for k in (j + 1)..tau {
                let pf = signed_pfaffian(&d.y, &[i, j, k]);
                if pf.is_zero() {
                    continue;
                }
                let det = det3(&ring, &d.a_mat, [i, j, k])?;
                if det.is_zero() {
                    continue;
                }
                w = w.add(&det.mul(&pf)?)?;
            }
        }
    }

    // z = u*b - y*A
    let mut z = Vec::with_capacity(3);
    for j in 0..3 {
        let mut acc = d.u.mul(&d.b_row[j])?;
        for i in 0..tau {
            let e = &d.a_mat[i][j];
            if e.is_zero() || y_row[i].is_zero() {
                continue;
            }
            acc = acc.sub(&y_row[i].mul(e)?)?;
        }
        z.push(acc);
    }

    // s_{l,k} = (-1)^{l+1} sum_{i<j} Y_{kij} det2(A rows i,j; cols m,n)
    // with {l,m,n} = {1,2,3}, m < n (1-based); sign is (-1)^l 0-based.
    let mut s_mat = Vec::with_capacity(3);
    for l in 0..3usize {
        let (m, n) = match l {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut row = Vec::with_capacity(tau);
        for k in 0..tau {
            let mut acc = ring.zero();
            for i in 0..tau {
                for j in (i + 1)..tau {
                    if i == k || j == k {
                        continue;
                    }
                    let pf = signed_pfaffian(&d.y, &[k, i, j]);
                    if pf.is_zero() {
                        continue;
                    }
                    let det = d.a_mat[i][m]
                        .mul(&d.a_mat[j][n])?
                        .sub(&d.a_mat[i][n].mul(&d.a_mat[j][m])?)?;
                    if det.is_zero() {
                        continue;
                    }
                    acc = acc.add(&pf.mul(&det)?)?;
                }
            }
            if l % 2 == 1 {
                acc = acc.neg();
            }
            row.push(acc);
        }
        s_mat.push(row);
    }

    let m_twist = d.m_twist();
    let sf = d.sum_f();
    let z_alt = alt3_from_row(ring, &z, d.f.to_vec(), m_twist - sf)?;
    let b_alt = alt3_from_row(ring, &d.b_row, d.f.to_vec(), d.l2 - sf)?;

    // T = -B * A^T (3 x tau)
    let mut t_mat = Vec::with_capacity(3);
    for l in 0..3usize {
        let mut row = Vec::with_capacity(tau);
        for i in 0..tau {
            let mut acc = ring.zero();
            for k in 0..3usize {
                let b = b_alt.entry(l, k);
                if b.is_zero() || d.a_mat[i][k].is_zero() {
                    continue;
                }
                acc = acc.add(&b.mul(&d.a_mat[i][k])?)?;
            }
            row.push(acc.neg());
        }
        t_mat.push(row);
    }

    Ok(KmAux { w, z, s_mat, z_alt, b_alt, t_mat, y_row })
}

fn det3(ring: &Ring, m: &[Vec<Polynomial>], rows: [usize; 3]) -> Result<Polynomial> {
    let [i, j, k] = rows;
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
        let t = m[i][p[0]].mul(&m[j][p[1]])?.mul(&m[k][p[2]])?;
        acc = if pos { acc.add(&t)? } else { acc.sub(&t)? };
    }
    Ok(acc)
}

/// Builds the length-4 Kustin-Miller complex and the ideal generated by the
/// entries of `d_1 = (z | v y - b S | w - u v)`.
pub fn build_km_complex(d: &KmData) -> Result<(ChainComplex, Ideal)> {
    let ring = d.ring;
    let tau = d.tau();
    let aux = km_auxiliaries(d)?;
    let m = d.m_twist();
    let sf = d.sum_f();
    let g4 = d.g4_twist();
    let (a, f, l1, l2) = (d.a.clone(), d.f, d.l1, d.l2);

    let mut g1: Vec<i64> = f.iter().map(|fj| fj - m).collect();
    g1.extend(a.iter().map(|ai| ai + l1 - l2 + sf - m));
    g1.push(l1 + sf - m);

    let mut g2: Vec<i64> = f.iter().map(|fj| -fj + sf - 2 * m).collect();
    g2.extend(a.iter().map(|ai| ai + l1 + sf - 2 * m));
    g2.extend(f.iter().map(|fj| fj + l1 - l2 + sf - m));
    g2.extend(a.iter().map(|ai| -ai - l2 + sf - m));

    let g3: Vec<i64> = g1.iter().map(|t| g4 - t).collect();

    // d1 = (z | v*y - b*S | w - u*v)
    let mut d1_row: Vec<Polynomial> = aux.z.clone();
    for i in 0..tau {
        let mut e = d.v.mul(&aux.y_row[i])?;
        for l in 0..3 {
            if d.b_row[l].is_zero() || aux.s_mat[l][i].is_zero() {
                continue;
            }
            e = e.sub(&d.b_row[l].mul(&aux.s_mat[l][i])?)?;
        }
        d1_row.push(e);
    }
    d1_row.push(aux.w.sub(&d.u.mul(&d.v)?)?);
    let d1 = GradedMatrix::new_unchecked(ring, vec![0], g1.clone(), d1_row.clone());
    d1.check_homogeneous("km d1")?;

    // d2 = [[Z, S, v I3, T], [0, u I_tau, A, Y], [0, y, b, 0]]
    let zero = ring.zero();
    let mut rows: Vec<Vec<Polynomial>> = Vec::with_capacity(tau + 4);
    for r in 0..3 {
        let mut row = Vec::with_capacity(2 * tau + 6);
        for c in 0..3 {
            row.push(aux.z_alt.entry(r, c));
        }
        row.extend(aux.s_mat[r].iter().cloned());
        for c in 0..3 {
            row.push(if c == r { d.v.clone() } else { zero.clone() });
        }
        row.extend(aux.t_mat[r].iter().cloned());
        rows.push(row);
    }
    for i in 0..tau {
        let mut row = Vec::with_capacity(2 * tau + 6);
        row.extend(std::iter::repeat_with(|| zero.clone()).take(3));
        for c in 0..tau {
            row.push(if c == i { d.u.clone() } else { zero.clone() });
        }
        for c in 0..3 {
            row.push(d.a_mat[i][c].clone());
        }
        for c in 0..tau {
            row.push(d.y.entry(i, c));
        }
        rows.push(row);
    }
    {
        let mut row = Vec::with_capacity(2 * tau + 6);
        row.extend(std::iter::repeat_with(|| zero.clone()).take(3));
        row.extend(aux.y_row.iter().cloned());
        row.extend(d.b_row.iter().cloned());
        row.extend(std::iter::repeat_with(|| zero.clone()).take(tau));
        rows.push(row);
    }
    let d2 = GradedMatrix::new_unchecked(
        ring,
        g1.clone(),
        g2.clone(),
        rows.into_iter().flatten().collect(),
    );
    d2.check_homogeneous("km d2")?;

    // d3 = (swap of the two (tau+3)-sized halves) ∘ d2^T ⊗ g4
    let half = tau + 3;
    let mut d3_entries = vec![zero.clone(); (2 * tau + 6) * (tau + 4)];
    for r in 0..(2 * tau + 6) {
        let swapped = if r < half { r + half } else { r - half };
        for c in 0..(tau + 4) {
            d3_entries[swapped * (tau + 4) + c] = d2.entry(c, r).clone();
        }
    }
    let d3 = GradedMatrix::new_unchecked(ring, g2, g3.clone(), d3_entries);
    d3.check_homogeneous("km d3")?;

    // d4 = d1^T ⊗ g4
    let d4 = GradedMatrix::new_unchecked(ring, g3, vec![g4], d1_row.clone());
    d4.check_homogeneous("km d4")?;

    let ideal = Ideal::new(ring, d1_row)?;
    Ok((ChainComplex::new(vec![d1, d2, d3, d4])?, ideal))
}
