//! Gulliksen-Negard schemes: submaximal minors of a square morphism
//! `phi : E -> F` between split bundles of rank `e >= 3`, plus the
//! expected rank/twist shape `(1, e^2, 2e^2 - 2, e^2, 1)` of the generic
//! minimal resolution. The differentials beyond `d_1` are not transcribed;
//! the syzygy engine recovers the resolution and callers compare shapes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gb::{minors_ideal, Ideal};
use crate::ring::{Polynomial, Ring};

use super::{poly_rows_from_dto, poly_rows_to_dto, PolyMatrixDto};

#[derive(Clone, Debug)]
pub struct GnData {
    ring: Ring,
    a: Vec<i64>,
    f: Vec<i64>,
    /// `e x e`, rows indexed by `F`, columns by `E`: entry `(i, j)` is
    /// homogeneous of degree `f_i - a_j`.
    phi: Vec<Vec<Polynomial>>,
    pub provenance: Option<String>,
}

impl GnData {
    pub fn new(ring: Ring, a: Vec<i64>, f: Vec<i64>, phi: Vec<Vec<Polynomial>>) -> Result<Self> {
        let e = a.len();
        if e < 3 {
            return Err(Error::BadData(format!("GN needs rank e >= 3, got {}", e)));
        }
        if f.len() != e || phi.len() != e || phi.iter().any(|r| r.len() != e) {
            return Err(Error::BadData("phi must be square of rank e with matching twists".into()));
        }
        for (i, row) in phi.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let forced = f[i] - a[j];
                match p.homogeneous_degree() {
                    Some(d) if forced >= 0 && d as i64 == forced => {}
                    found => {
                        return Err(Error::TwistViolation {
                            context: "GN phi".into(),
                            row: i,
                            col: j,
                            found,
                            forced,
                        })
                    }
                }
            }
        }
        Ok(GnData { ring, a, f, phi, provenance: None })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn phi(&self) -> &[Vec<Polynomial>] {
        &self.phi
    }

    /// Twist of `omega_X = O(-2 (c1(E) - c1(F)) - N - 1)`.
    pub fn canonical_twist(&self) -> i64 {
        let ca: i64 = self.a.iter().sum();
        let cf: i64 = self.f.iter().sum();
        -2 * (ca - cf) - self.ring.nvars() as i64
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dto = GnDataDto {
            prime: self.ring.modulus(),
            nvars: self.ring.nvars(),
            a: self.a.clone(),
            f: self.f.clone(),
            phi: poly_rows_to_dto(&self.phi),
            provenance: self.provenance.clone(),
        };
        serde_json::to_value(dto).expect("static shape")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GnData> {
        let dto: GnDataDto = serde_json::from_value(v.clone())?;
        let ring = Ring::new(dto.prime, dto.nvars)?;
        let mut data = GnData::new(ring, dto.a, dto.f, poly_rows_from_dto(&ring, &dto.phi)?)?;
        data.provenance = dto.provenance;
        Ok(data)
    }
}

#[derive(Serialize, Deserialize)]
struct GnDataDto {
    prime: u32,
    nvars: usize,
    a: Vec<i64>,
    f: Vec<i64>,
    phi: PolyMatrixDto,
    provenance: Option<String>,
}

pub struct GnConstruction {
    pub ideal: Ideal,
    /// Twists of the expected resolution terms `F_0..F_4`, each ascending
    /// by degree (descending twist); ranks are `(1, e^2, 2e^2-2, e^2, 1)`.
    pub expected_shape: Vec<Vec<i64>>,
}

/// The submaximal-minors ideal `I_{e-1}(phi)` together with the expected
/// shape of its generic minimal resolution.
pub fn gn_scheme(data: &GnData) -> Result<GnConstruction> {
    let e = data.rank();
    let ideal = minors_ideal(&data.ring, &data.phi, e - 1)?;
    let sa: i64 = data.a.iter().sum();
    let sf: i64 = data.f.iter().sum();

    let mut t1 = Vec::with_capacity(e * e);
    for &ai in &data.a {
        for &fj in &data.f {
            t1.push((sa - ai) - (sf - fj));
        }
    }
    // hook weights of V = multiset {v_i + sum v - v_j} minus one copy of sum v
    let hook = |v: &[i64]| -> Vec<i64> {
        let s: i64 = v.iter().sum();
        let mut out = Vec::with_capacity(v.len() * v.len() - 1);
        let mut removed = false;
        for &vi in v {
            for &vj in v {
                let w = vi + s - vj;
                if !removed && w == s {
                    removed = true;
                    continue;
                }
                out.push(w);
            }
        }
        out
    };
    let fdual: Vec<i64> = data.f.iter().map(|x| -x).collect();
    let mut t2: Vec<i64> = hook(&fdual).into_iter().map(|w| sa + w).collect();
    t2.extend(hook(&data.a).into_iter().map(|w| -sf + w));

    let mut t3 = Vec::with_capacity(e * e);
    for &ai in &data.a {
        for &fj in &data.f {
            t3.push(ai - fj + (sa - sf));
        }
    }
    let t4 = vec![2 * (sa - sf)];

    let mut shape = vec![vec![0], t1, t2, t3, t4];
    for t in &mut shape {
        t.sort_by_key(|x| -x);
    }
    Ok(GnConstruction { ideal, expected_shape: shape })
}
