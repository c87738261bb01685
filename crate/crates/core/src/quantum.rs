//! Dual containment, stabilizer parameters from self-orthogonal codes, the
//! quantum Singleton-like defect and purity.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::codes::{distance_exceeds, DistanceMethod, DistanceProvenance, LinearCode, FULL_ENUM_BUDGET};
use crate::error::{Error, Result};
use crate::galois::{Duality, Gf};
use crate::locality::LocalityCertificate;

/// `dual(C) ⊆ C`.
pub fn is_dual_containing(code: &LinearCode, mode: Duality) -> Result<bool> {
    code.contains_code(&code.dual(mode)?)
}

/// `C ⊆ dual(C)`.
pub fn is_self_orthogonal(code: &LinearCode, mode: Duality) -> Result<bool> {
    code.dual(mode)?.contains_code(code)
}

/// `(n + 2) - [k + 2d + 2(⌈(n + k)/(2r)⌉ - 1)(δ - 1)]`.
pub fn quantum_singleton_defect(n: usize, k: usize, d: usize, r: usize, delta: usize) -> i64 {
    let blocks = (n + k).div_ceil(2 * r.max(1)) as i64;
    (n as i64 + 2) - (k as i64 + 2 * d as i64 + 2 * (blocks - 1) * (delta as i64 - 1))
}

/// Qudit dimension for codes over `F_field_order`: the field itself in
/// Euclidean mode, its square root in Hermitian mode.
pub fn qudit_dimension(field_order: u32, mode: Duality) -> Result<u32> {
    match mode {
        Duality::Euclidean => Ok(field_order),
        Duality::Hermitian => {
            crate::galois::GaloisTower::sqrt_order(field_order).ok_or(Error::FieldNotSquare(field_order))
        }
    }
}

/// Minimum weight of `outer \ inner`; `None` when the two codes coincide.
fn min_weight_outside(inner: &LinearCode, outer: &LinearCode) -> Result<Option<usize>> {
    let cost = (outer.field_order() as f64).powi(outer.dimension() as i32);
    if cost > FULL_ENUM_BUDGET {
        return Err(Error::Infeasible(format!(
            "enumerating {}^{} outer codewords for purity",
            outer.field_order(),
            outer.dimension()
        )));
    }
    // rows completing a basis of inner to one of outer come first
    let mut basis = inner.generator().clone();
    let mut extra: Vec<Vec<Gf>> = Vec::new();
    for row in outer.generator().row_iter() {
        if !basis.in_row_space(row)? {
            extra.push(row.to_vec());
            basis = basis.vstack(&crate::matrix::GfMatrix::from_rows(
                outer.tower().clone(),
                outer.field_order(),
                outer.len(),
                &[row.to_vec()],
            )?)?;
        }
    }
    if extra.is_empty() {
        return Ok(None);
    }
    let mut rows: Vec<&[Gf]> = extra.iter().map(Vec::as_slice).collect();
    rows.extend(inner.generator().row_iter());
    crate::codes::min_weight_leading_rows(outer.tower(), outer.field_order(), &rows, outer.len(), extra.len())
}

/// Whether the minimum weight of `dual(inner)` is attained outside `inner`.
///
/// Certified by `dis(inner) > dis(outer)` when that holds, otherwise by
/// enumerating `outer \ inner`.
pub fn purity_check(inner: &LinearCode, mode: Duality) -> Result<bool> {
    let outer = inner.dual(mode)?;
    if !outer.contains_code(inner)? {
        return Err(Error::NotSelfOrthogonal);
    }
    if inner.dimension() == 0 {
        return Ok(true);
    }
    let d_out = match outer.distance() {
        Some(rec) if rec.provenance == DistanceProvenance::Verified => rec.value,
        _ => outer.min_distance(DistanceMethod::Auto)?,
    };
    if distance_exceeds(inner, d_out)? {
        return Ok(true);
    }
    Ok(min_weight_outside(inner, &outer)? == Some(d_out))
}

/// Derived stabilizer-code parameters with provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumCodeRecord {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub d_method: DistanceProvenance,
    pub r: Option<usize>,
    pub delta: Option<usize>,
    pub quantum_defect: Option<i64>,
    pub pure: bool,
    pub optimal: bool,
    pub family: String,
    pub family_params: BTreeMap<String, serde_json::Value>,
}

impl QuantumCodeRecord {
    /// Attaches locality and recomputes the defect and optimality flag.
    pub fn with_locality(mut self, r: usize, delta: usize) -> Self {
        let defect = quantum_singleton_defect(self.n, self.k, self.d, r, delta);
        self.r = Some(r);
        self.delta = Some(delta);
        self.quantum_defect = Some(defect);
        self.optimal = defect == 0 && self.pure;
        self
    }

    pub fn with_certificate(self, cert: &LocalityCertificate) -> Self {
        self.with_locality(cert.r, cert.delta)
    }

    pub fn with_family(mut self, family: &str, params: BTreeMap<String, serde_json::Value>) -> Self {
        self.family = family.to_string();
        self.family_params = params;
        self
    }

    /// `[[n, k, d]]_q`.
    pub fn label(&self) -> String {
        format!("[[{}, {}, {}]]_{}", self.n, self.k, self.d, self.q)
    }
}

/// Record for the stabilizer code of a dual-containing `code` (with
/// `C_1 = C_2 = code` in Euclidean mode): `k = 2 dim C - n` and `d = dis(C)`.
pub fn stabilizer_from_dual_containing(code: &LinearCode, mode: Duality) -> Result<QuantumCodeRecord> {
    let q = qudit_dimension(code.field_order(), mode)?;
    if !is_dual_containing(code, mode)? {
        return Err(Error::NotDualContaining);
    }
    let n = code.len();
    let k = 2 * code.dimension() - n;
    let (d, mut d_method) = match code.distance() {
        Some(rec) => (rec.value, rec.provenance),
        None => (code.min_distance(DistanceMethod::Auto)?, DistanceProvenance::Verified),
    };
    let inner = code.dual(mode)?;
    let pure = inner.dimension() == 0
        || distance_exceeds(&inner, d)?
        || min_weight_outside(&inner, code)? == Some(d);
    if !pure {
        d_method = DistanceProvenance::LowerBound;
    }
    Ok(QuantumCodeRecord {
        q,
        n,
        k,
        d,
        d_method,
        r: None,
        delta: None,
        quantum_defect: None,
        pure,
        optimal: false,
        family: String::new(),
        family_params: BTreeMap::new(),
    })
}
