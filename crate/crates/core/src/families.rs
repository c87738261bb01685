//! The optimal pure quantum (r, δ)-LRC families: exponent-set builders,
//! parameter windows, the construction pipeline with its verification, the
//! monomial-Cartesian extension and the parameter table.
//!
//! The family with `λ = 2`, `n = q² - 1` and `1 ≤ v ≤ 2q - 3` is recorded with
//! `k = 2n - 4v` information qudits. That is the value meeting the quantum
//! Singleton-like bound with equality and the one the matrix pipeline
//! produces; the corollary introducing the family prints `2n - 2v`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::codes::{DistanceMethod, DistanceProvenance, LinearCode};
use crate::cosets::{a_set, minkowski_sum, ExponentSet};
use crate::error::{Error, Result};
use crate::evaluation::{build_domain, cartesian_code, evaluation_code, CartesianDomain, EvaluationDomain};
use crate::galois::{build_tower, prime_power, Duality, GaloisTower, Gf, MAX_FIELD_ORDER};
use crate::locality::{
    certify_locality, quantum_locality_criterion, BlockStructure,
    LocalityCertificate,
};
use crate::quantum::{is_dual_containing, stabilizer_from_dual_containing, QuantumCodeRecord};

/// `B(u) = {q²/2 + i : 1 ≤ i ≤ u} ∪ {1 + q²/2 - i : 1 ≤ i ≤ u}` modulo `q² + 1`.
pub fn b_set(q: u32, u: usize) -> Result<ExponentSet> {
    if !q.is_multiple_of(2) {
        return Err(Error::SpecInvalid(format!("OddQ: B(u) needs even q, got q = {q}")));
    }
    let half = (q * q / 2) as usize;
    if u == 0 || u > half {
        return Err(Error::SpecInvalid(format!("URange: u = {u} must lie in 1..={half}")));
    }
    let n = 2 * half + 1;
    Ok(ExponentSet::new(n, (1..=u).flat_map(|i| [half + i, half + 1 - i])))
}

/// `B'(v) = {1, ..., v}` modulo `n`.
pub fn b_prime_set(v: usize, n: usize) -> Result<ExponentSet> {
    if v == 0 || v >= n {
        return Err(Error::SpecInvalid(format!("VRange: v = {v} must lie in 1..{n}")));
    }
    Ok(ExponentSet::new(n, 1..=v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    C2,
    #[serde(rename = "cartA")]
    CartA,
    #[serde(rename = "cartB")]
    CartB,
    #[serde(rename = "cartC")]
    CartC,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::A, Family::B, Family::C, Family::C2, Family::CartA, Family::CartB, Family::CartC];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::C2 => "C2",
            Family::CartA => "cartA",
            Family::CartB => "cartB",
            Family::CartC => "cartC",
        }
    }

    pub fn mode(self) -> Duality {
        match self {
            Family::B | Family::CartB => Duality::Euclidean,
            _ => Duality::Hermitian,
        }
    }

    pub fn is_cartesian(self) -> bool {
        matches!(self, Family::CartA | Family::CartB | Family::CartC)
    }

    /// Whether the family parameter is `u` (rather than `v`).
    pub fn uses_u(self) -> bool {
        matches!(self, Family::A | Family::CartA)
    }

    /// Block length `n` for a given `q`.
    pub fn block_length(self, q: u32) -> usize {
        let q = q as usize;
        match self {
            Family::A | Family::CartA => q * q + 1,
            Family::B | Family::CartB => q - 1,
            _ => q * q - 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::SpecInvalid(format!("unknown family {s:?}")))
    }
}

/// A requested family instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub q: u32,
    pub s: u32,
    pub lambda: usize,
    pub u_or_v: usize,
    /// Extra axis sizes `n_2, ..., n_w` (Cartesian families only).
    pub axes: Vec<usize>,
}

/// Parameters the family's theorem asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicted {
    pub n: usize,
    pub classical_k: usize,
    pub d: usize,
    pub quantum_k: usize,
    pub r: usize,
    pub delta: usize,
}

fn divides_group(q: u32, s: u32, m: usize) -> bool {
    match (q as u64).checked_pow(s) {
        Some(order) => (order - 1) % m as u64 == 0,
        None => false,
    }
}

impl FamilySpec {
    pub fn new(family: Family, q: u32, s: u32, lambda: usize, u_or_v: usize, axes: Vec<usize>) -> Self {
        FamilySpec { family, q, s, lambda, u_or_v, axes }
    }

    pub fn mode(&self) -> Duality {
        self.family.mode()
    }

    /// `𝔮`: `q` for Euclidean families, `q²` for Hermitian ones.
    pub fn code_field(&self) -> u32 {
        match self.mode() {
            Duality::Euclidean => self.q,
            Duality::Hermitian => self.q * self.q,
        }
    }

    pub fn block_length(&self) -> usize {
        self.family.block_length(self.q)
    }

    pub fn axis_product(&self) -> usize {
        self.axes.iter().product()
    }

    /// Length `λ n n_2 ⋯ n_w`.
    pub fn length(&self) -> usize {
        self.lambda * self.block_length() * self.axis_product()
    }

    /// Largest allowed `u` or `v` for this `q` and `λ`.
    pub fn param_limit(&self) -> usize {
        let q = self.q as usize;
        let n = self.block_length();
        match self.family {
            Family::A | Family::CartA => q / 2,
            Family::B | Family::CartB => n.saturating_sub(1) / 2,
            Family::C => n.saturating_sub(1) / (q + 1),
            Family::C2 => (2 * q).saturating_sub(3),
            Family::CartC => {
                let general = n.saturating_sub(1) / (q + 1);
                if self.lambda == 2 {
                    general.max((2 * q).saturating_sub(3))
                } else {
                    general
                }
            }
        }
    }

    /// Checks the family's window; every violation is a `SpecInvalid`
    /// naming the failed condition.
    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        let limit = self.param_limit();
        if self.u_or_v > limit {
            let pname = if self.family.uses_u() { "u" } else { "v" };
            return Err(Error::SpecInvalid(format!(
                "family {} requires {pname} in 1..={limit}, got {pname} = {}",
                self.family, self.u_or_v
            )));
        }
        Ok(())
    }

    /// Every condition of [`FamilySpec::validate`] except the upper bound on
    /// `u` or `v`.
    pub fn validate_structure(&self) -> Result<()> {
        let fam = self.family;
        let q = self.q;
        let invalid = |msg: String| Err(Error::SpecInvalid(format!("family {fam} {msg}")));
        if prime_power(q as u64).is_none() {
            return invalid(format!("requires a prime power q, got q = {q}"));
        }
        if self.s == 0 {
            return invalid("requires s >= 1".into());
        }
        if self.lambda == 0 {
            return invalid("requires lambda >= 1".into());
        }
        match fam {
            Family::A | Family::CartA if !q.is_multiple_of(2) => {
                return invalid(format!("requires even q, got q = {q}"))
            }
            Family::B | Family::CartB if q < 3 => return invalid(format!("requires q >= 3, got q = {q}")),
            _ => {}
        }
        if self.mode() == Duality::Hermitian && !self.s.is_multiple_of(2) {
            return invalid(format!("requires even s, got s = {}", self.s));
        }
        if fam == Family::CartC && self.s <= 2 {
            return invalid(format!("requires s > 2, got s = {}", self.s));
        }
        if fam == Family::C2 && self.lambda != 2 {
            return invalid(format!("requires lambda = 2, got {}", self.lambda));
        }
        let pname = if fam.uses_u() { "u" } else { "v" };
        if self.u_or_v == 0 {
            return invalid(format!("requires {pname} >= 1"));
        }
        let ln = self.lambda * self.block_length();
        if !divides_group(q, self.s, ln) {
            return invalid(format!("requires lambda * n = {ln} to divide {}^{} - 1", q, self.s));
        }
        if fam.is_cartesian() {
            let frak = self.code_field();
            if let Some(&bad) = self.axes.iter().find(|&&a| a < 2 || a >= frak as usize) {
                return Err(Error::AxisTooLarge { size: bad, limit: frak });
            }
        } else if !self.axes.is_empty() {
            return invalid("takes no extra axes".into());
        }
        Ok(())
    }

    /// The theorem's parameters for this spec.
    pub fn predicted(&self) -> Predicted {
        let n = self.block_length();
        let x = self.u_or_v;
        let (delta_size, d) = if self.family.uses_u() { (2 * x, 2 * x + 1) } else { (x, x + 1) };
        let p = self.axis_product();
        let len = self.lambda * n * p;
        let gamma = self.lambda * delta_size * p;
        Predicted {
            n: len,
            classical_k: len - gamma,
            d,
            quantum_k: len - 2 * gamma,
            r: n + 1 - d,
            delta: d,
        }
    }

    /// `Δ = 𝒜 + B` modulo `λn`.
    pub fn exponent_set(&self) -> Result<ExponentSet> {
        let n = self.block_length();
        let big = self.lambda * n;
        let b = if self.family.uses_u() { b_set(self.q, self.u_or_v)? } else { b_prime_set(self.u_or_v, n)? };
        minkowski_sum(&a_set(n, big)?, &b.lift(big)?)
    }

    fn params_json(&self) -> BTreeMap<String, serde_json::Value> {
        let mut m = BTreeMap::new();
        m.insert("q".into(), json!(self.q));
        m.insert("s".into(), json!(self.s));
        m.insert("lambda".into(), json!(self.lambda));
        m.insert((if self.family.uses_u() { "u" } else { "v" }).into(), json!(self.u_or_v));
        if self.family.is_cartesian() {
            m.insert("axes".into(), json!(self.axes));
        }
        m
    }
}

/// Everything the pipeline produced for one spec.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub spec: FamilySpec,
    pub tower: Arc<GaloisTower>,
    pub delta: ExponentSet,
    pub inner: LinearCode,
    pub outer: LinearCode,
    pub certificate: LocalityCertificate,
    pub record: QuantumCodeRecord,
    pub predicted: Predicted,
    /// `Some(true)` when the shortening/puncturing criterion was checked and
    /// holds; `None` when it exceeded its budget.
    pub quantum_locality: Option<bool>,
    /// Every reported number was confirmed by an oracle.
    pub verified: bool,
}

impl FamilyInstance {
    pub fn classical_defect(&self) -> i64 {
        self.certificate.classical_defect.unwrap_or(i64::MIN)
    }

    pub fn summary(&self) -> SummaryRow {
        SummaryRow {
            family: self.spec.family,
            q: self.spec.q,
            s: self.spec.s,
            lambda: self.spec.lambda,
            u_or_v: self.spec.u_or_v,
            axes: self.spec.axes.clone(),
            n: self.record.n,
            k: self.record.k,
            d: self.record.d,
            r: self.certificate.r,
            delta: self.certificate.delta,
            classical_defect: self.classical_defect(),
            quantum_defect: self.record.quantum_defect.unwrap_or(i64::MIN),
            pure: self.record.pure,
            verified: self.verified,
        }
    }
}

/// One line of the CSV mirror.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: Family,
    pub q: u32,
    pub s: u32,
    pub lambda: usize,
    pub u_or_v: usize,
    pub axes: Vec<usize>,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub delta: usize,
    pub classical_defect: i64,
    pub quantum_defect: i64,
    pub pure: bool,
    pub verified: bool,
}

pub const CSV_HEADER: &str =
    "family,q,s,lambda,u_or_v,axes,n,k,d,r,delta,classical_defect,quantum_defect,pure,verified";

impl SummaryRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.family,
            self.q,
            self.s,
            self.lambda,
            self.u_or_v,
            self.axes.iter().map(usize::to_string).collect::<Vec<_>>().join("x"),
            self.n,
            self.k,
            self.d,
            self.r,
            self.delta,
            self.classical_defect,
            self.quantum_defect,
            self.pure,
            self.verified
        )
    }
}

fn mismatch<T: PartialEq + fmt::Debug>(what: &str, measured: T, predicted: T) -> Result<()> {
    if measured != predicted {
        return Err(Error::VerificationMismatch(format!(
            "{what}: measured {measured:?}, predicted {predicted:?}"
        )));
    }
    Ok(())
}

/// Default extra axes: the first `n_ℓ` elements of `F_𝔮` in code order.
pub fn default_axes(tower: &GaloisTower, frak_q: u32, sizes: &[usize]) -> Result<Vec<Vec<Gf>>> {
    let elems = tower.subfield_elements(frak_q)?;
    sizes
        .iter()
        .map(|&n| {
            if n < 2 || n >= frak_q as usize {
                Err(Error::AxisTooLarge { size: n, limit: frak_q })
            } else {
                Ok(elems[..n].to_vec())
            }
        })
        .collect()
}

/// Codes produced by the construction, before any comparison with the
/// theorem.
#[derive(Clone, Debug)]
pub struct Construction {
    pub tower: Arc<GaloisTower>,
    pub domain: EvaluationDomain,
    pub delta: ExponentSet,
    pub inner: LinearCode,
    pub outer: LinearCode,
    pub blocks: BlockStructure,
}

/// Builds `Δ`, the evaluation (or monomial-Cartesian) code, its subfield
/// subcode over `F_𝔮` and that subcode's dual, skipping the window checks.
pub fn construct_codes(spec: &FamilySpec, axis_points: Option<Vec<Vec<Gf>>>) -> Result<Construction> {
    let (p, e) = prime_power(spec.q as u64)
        .ok_or_else(|| Error::SpecInvalid(format!("q = {} is not a prime power", spec.q)))?;
    let mode = spec.mode();
    let tower = Arc::new(build_tower(p, e, spec.s, mode)?);
    let n = spec.block_length();
    let big = spec.lambda * n;
    let domain = build_domain(tower.clone(), big, n, spec.lambda)?;
    let delta = spec.exponent_set()?;
    let frak = spec.code_field();
    let (generator, blocks) = if spec.axes.is_empty() && axis_points.is_none() {
        (evaluation_code(&delta, &domain)?, domain.blocks())
    } else {
        let axes = match axis_points {
            Some(points) => {
                if points.iter().map(Vec::len).collect::<Vec<_>>() != spec.axes {
                    return Err(Error::SpecInvalid("axis point sets do not match --axes".into()));
                }
                points
            }
            None => default_axes(&tower, frak, &spec.axes)?,
        };
        let cd = CartesianDomain::new(domain.clone(), axes, frak)?;
        let others: Vec<Vec<usize>> = spec.axes.iter().map(|&m| (0..m).collect()).collect();
        (cartesian_code(&delta, &others, &cd)?, cd.blocks())
    };
    let inner = LinearCode::from_generator(&generator).subfield_subcode(frak)?;
    let outer = inner.dual(mode)?;
    Ok(Construction { tower, domain, delta, inner, outer, blocks })
}

/// Runs the whole pipeline for a valid spec and checks every measured
/// parameter against the theorem.
pub fn build_family_instance(spec: &FamilySpec) -> Result<FamilyInstance> {
    spec.validate()?;
    verify_pipeline(spec, None)
}

/// [`build_family_instance`] without the upper bound on `u` or `v`: the
/// theorem's parameters are still predicted and every one is checked.
pub fn build_outside_window(spec: &FamilySpec) -> Result<FamilyInstance> {
    spec.validate_structure()?;
    verify_pipeline(spec, None)
}

fn build_with_axes(spec: &FamilySpec, axis_points: Option<Vec<Vec<Gf>>>) -> Result<FamilyInstance> {
    spec.validate()?;
    verify_pipeline(spec, axis_points)
}

fn verify_pipeline(spec: &FamilySpec, axis_points: Option<Vec<Vec<Gf>>>) -> Result<FamilyInstance> {
    let mode = spec.mode();
    let pred = spec.predicted();
    let c = construct_codes(spec, axis_points)?;
    let mut verified = true;

    mismatch("inner dimension", c.inner.dimension(), pred.n - pred.classical_k)?;
    mismatch("length", c.outer.len(), pred.n)?;
    mismatch("classical dimension", c.outer.dimension(), pred.classical_k)?;
    if !is_dual_containing(&c.outer, mode)? {
        return Err(Error::VerificationMismatch(format!("{mode} dual containment fails")));
    }

    let outer = match c.outer.min_distance(DistanceMethod::Auto) {
        Ok(d) => {
            mismatch("minimum distance", d, pred.d)?;
            c.outer.clone().with_distance(d, DistanceProvenance::Verified)
        }
        Err(Error::Infeasible(_)) => {
            verified = false;
            c.outer.clone().with_distance(pred.d, DistanceProvenance::Predicted)
        }
        Err(e) => return Err(e),
    };

    let cert = certify_locality(&outer, pred.r, pred.delta, Some(c.blocks)).map_err(|e| match e {
        Error::NotLocallyRecoverable { coordinate } => Error::VerificationMismatch(format!(
            "({}, {})-locality fails at coordinate {coordinate}",
            pred.r, pred.delta
        )),
        other => other,
    })?;
    let cert = cert.with_defect(outer.len(), outer.dimension(), pred.d);
    mismatch("classical defect", cert.classical_defect, Some(0))?;

    let record = stabilizer_from_dual_containing(&outer, mode)?
        .with_certificate(&cert)
        .with_family(spec.family.name(), spec.params_json());
    mismatch("quantum dimension", record.k, pred.quantum_k)?;
    mismatch("quantum defect", record.quantum_defect, Some(0))?;
    if !record.pure {
        return Err(Error::VerificationMismatch("record is not pure".into()));
    }

    let quantum_locality = match quantum_locality_criterion(&c.inner, mode, &cert) {
        Ok(true) => Some(true),
        Ok(false) => {
            return Err(Error::VerificationMismatch(
                "shortening/puncturing criterion fails for the quantum code".into(),
            ))
        }
        Err(Error::SearchInfeasible(_)) => None,
        Err(e) => return Err(e),
    };

    Ok(FamilyInstance {
        spec: spec.clone(),
        tower: c.tower,
        delta: c.delta,
        inner: c.inner,
        outer,
        certificate: cert,
        record,
        predicted: pred,
        quantum_locality,
        verified,
    })
}

/// Extends a base instance by extra axes of the given sizes, optionally with
/// explicit point sets inside `F_𝔮`. With no axes the base is returned.
pub fn cartesian_extend(
    base: &FamilyInstance,
    axis_sizes: &[usize],
    axis_points: Option<Vec<Vec<Gf>>>,
) -> Result<FamilyInstance> {
    if axis_sizes.is_empty() {
        return Ok(base.clone());
    }
    let family = match base.spec.family {
        Family::A | Family::CartA => Family::CartA,
        Family::B | Family::CartB => Family::CartB,
        Family::C | Family::C2 | Family::CartC => Family::CartC,
    };
    let mut axes = if base.spec.family.is_cartesian() { base.spec.axes.clone() } else { Vec::new() };
    let frak = base.spec.code_field();
    if let Some(&bad) = axis_sizes.iter().find(|&&a| a < 2 || a >= frak as usize) {
        return Err(Error::AxisTooLarge { size: bad, limit: frak });
    }
    if let Some(points) = &axis_points {
        if points.iter().flatten().any(|&z| !base.tower.in_subfield(z, frak)) {
            return Err(Error::AxisNotInSubfield(frak));
        }
    }
    let points = match axis_points {
        Some(extra) if !axes.is_empty() => {
            let mut all = default_axes(&base.tower, frak, &axes)?;
            all.extend(extra);
            Some(all)
        }
        other => other,
    };
    axes.extend_from_slice(axis_sizes);
    let spec = FamilySpec { family, axes, ..base.spec.clone() };
    build_with_axes(&spec, points)
}

/// One row of the parameter table: symbolic formulas plus every concrete
/// instance under the length cap that passed matrix-level verification.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub family: Family,
    pub qudit: &'static str,
    pub r: &'static str,
    pub delta: &'static str,
    pub length: &'static str,
    pub info: &'static str,
    pub instances: Vec<QuantumCodeRecord>,
    pub mismatches: Vec<TableMismatch>,
    #[serde(skip)]
    pub summaries: Vec<SummaryRow>,
}

/// A concrete instance whose matrix-level parameters disagree with the row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableMismatch {
    pub spec: FamilySpec,
    pub message: String,
}

struct RowShape {
    family: Family,
    /// Only `λ = 2`.
    lambda_two: bool,
    odd_q: bool,
    qudit: &'static str,
    r: &'static str,
    delta: &'static str,
    length: &'static str,
    info: &'static str,
}

impl RowShape {
    /// Largest `u` or `v` the row's `δ` range reaches.
    fn param_max(&self, q: usize) -> usize {
        match self.family {
            Family::A | Family::CartA => q / 2,
            Family::B | Family::CartB => q.div_ceil(2) - 1,
            _ if self.lambda_two => (2 * q).saturating_sub(3),
            _ => q - 1,
        }
    }
}

const ROWS: [RowShape; 8] = [
    RowShape {
        family: Family::A,
        lambda_two: false,
        odd_q: false,
        qudit: "even q",
        r: "q^2+2-delta",
        delta: "3, 5, ..., q+1",
        length: "lambda(q^2+1)",
        info: "lambda(q^2+3-2delta)",
    },
    RowShape {
        family: Family::B,
        lambda_two: false,
        odd_q: true,
        qudit: "odd q",
        r: "q-delta",
        delta: "2, 3, ..., (q+1)/2",
        length: "lambda(q-1)",
        info: "lambda(q+1-2delta)",
    },
    RowShape {
        family: Family::C,
        lambda_two: false,
        odd_q: true,
        qudit: "odd q",
        r: "q^2-delta",
        delta: "2, 3, ..., q",
        length: "lambda(q^2-1)",
        info: "lambda(q^2+1-2delta)",
    },
    RowShape {
        family: Family::C2,
        lambda_two: true,
        odd_q: true,
        qudit: "odd q",
        r: "q^2-delta",
        delta: "2, 3, ..., 2q-2",
        length: "2(q^2-1)",
        info: "2(q^2+1-2delta)",
    },
    RowShape {
        family: Family::CartA,
        lambda_two: false,
        odd_q: false,
        qudit: "even q",
        r: "q^2+2-delta",
        delta: "3, 5, ..., q+1",
        length: "lambda n_2...n_w(q^2+1)",
        info: "lambda n_2...n_w(q^2+3-2delta)",
    },
    RowShape {
        family: Family::CartB,
        lambda_two: false,
        odd_q: true,
        qudit: "odd q",
        r: "q-delta",
        delta: "2, 3, ..., (q+1)/2",
        length: "lambda n_2...n_w(q-1)",
        info: "lambda n_2...n_w(q+1-2delta)",
    },
    RowShape {
        family: Family::CartC,
        lambda_two: false,
        odd_q: true,
        qudit: "odd q",
        r: "q^2-delta",
        delta: "2, 3, ..., q",
        length: "lambda n_2...n_w(q^2-1)",
        info: "lambda n_2...n_w(q^2+1-2delta)",
    },
    RowShape {
        family: Family::CartC,
        lambda_two: true,
        odd_q: true,
        qudit: "odd q",
        r: "q^2-delta",
        delta: "2, 3, ..., 2q-2",
        length: "2 n_2...n_w(q^2-1)",
        info: "2 n_2...n_w(q^2+1-2delta)",
    },
];

/// Smallest admissible `s` with `m | q^s - 1` and `q^s` within the field cap.
pub fn minimal_s(q: u32, m: usize, even: bool, above_two: bool) -> Option<u32> {
    (1..=20u32)
        .filter(|&s| (!even || s % 2 == 0) && (!above_two || s > 2))
        .take_while(|&s| (q as u64).checked_pow(s).is_some_and(|o| o <= MAX_FIELD_ORDER))
        .find(|&s| divides_group(q, s, m))
}

/// Nondecreasing axis tuples with entries in `2..limit` and product at most
/// `max_product`.
fn axis_tuples(limit: usize, max_product: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, limit: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for a in start..limit {
            if a > budget {
                break;
            }
            cur.push(a);
            out.push(cur.clone());
            rec(a, limit, budget / a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(2, limit, max_product, &mut Vec::new(), &mut out);
    out
}

/// Structurally valid specs of `family` for `q` with length at most
/// `max_length`, `u`/`v` running up to `param_max`.
fn enumerate_specs(
    family: Family,
    q: u32,
    max_length: usize,
    only_lambda_two: bool,
    param_max: impl Fn(&FamilySpec) -> usize,
) -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    if prime_power(q as u64).is_none() || q < 2 {
        return specs;
    }
    let n = family.block_length(q);
    if n == 0 {
        return specs;
    }
    let hermitian = family.mode() == Duality::Hermitian;
    let frak = if hermitian { (q * q) as usize } else { q as usize };
    for lambda in 1..=max_length / n {
        if (only_lambda_two || family == Family::C2) && lambda != 2 {
            continue;
        }
        let Some(s) = minimal_s(q, lambda * n, hermitian, family == Family::CartC) else { continue };
        let tuples = if family.is_cartesian() { axis_tuples(frak, max_length / (lambda * n)) } else { vec![Vec::new()] };
        for axes in tuples {
            let probe = FamilySpec::new(family, q, s, lambda, 1, axes.clone());
            for x in 1..=param_max(&probe) {
                let spec = FamilySpec::new(family, q, s, lambda, x, axes.clone());
                if spec.length() <= max_length && spec.validate_structure().is_ok() {
                    specs.push(spec);
                }
            }
        }
    }
    specs
}

/// Every spec inside its family's window, for the given `q` values and
/// length cap, sorted.
pub fn window_specs(families: &[Family], qs: &[u32], max_length: usize) -> Vec<FamilySpec> {
    let mut specs: Vec<FamilySpec> = families
        .iter()
        .flat_map(|&f| qs.iter().flat_map(move |&q| enumerate_specs(f, q, max_length, false, FamilySpec::param_limit)))
        .filter(|s| s.validate().is_ok())
        .collect();
    specs.sort();
    specs.dedup();
    specs
}

fn row_specs(shape: &RowShape, q: u32, max_length: usize) -> Vec<FamilySpec> {
    if shape.odd_q && q.is_multiple_of(2) {
        return Vec::new();
    }
    let mut specs = enumerate_specs(shape.family, q, max_length, shape.lambda_two, |_| shape.param_max(q as usize));
    specs.sort();
    specs
}

/// All eight table rows for the given `q` values, listing every `δ` the
/// row states. Each instance is built and verified against the family's
/// formulas and the row's; failures land in the row's `mismatches`.
pub fn table_one(qs: &[u32], max_length: usize) -> Vec<TableRow> {
    ROWS.iter()
        .map(|shape| {
            let specs: Vec<FamilySpec> = qs.iter().flat_map(|&q| row_specs(shape, q, max_length)).collect();
            let outcomes: Vec<Result<FamilyInstance>> = specs
                .par_iter()
                .map(|spec| {
                    let inst = build_outside_window(spec)?;
                    check_row_formulas(shape, &inst)?;
                    Ok(inst)
                })
                .collect();
            let mut built = Vec::new();
            let mut mismatches = Vec::new();
            for (spec, outcome) in specs.into_iter().zip(outcomes) {
                match outcome {
                    Ok(inst) => built.push(inst),
                    Err(e) => mismatches.push(TableMismatch { spec, message: e.to_string() }),
                }
            }
            TableRow {
                family: shape.family,
                qudit: shape.qudit,
                r: shape.r,
                delta: shape.delta,
                length: shape.length,
                info: shape.info,
                instances: built.iter().map(|i| i.record.clone()).collect(),
                mismatches,
                summaries: built.iter().map(FamilyInstance::summary).collect(),
            }
        })
        .collect()
}

/// Compares a verified instance with the row's formulas written in terms
/// of `δ`.
fn check_row_formulas(shape: &RowShape, inst: &FamilyInstance) -> Result<()> {
    let q = inst.spec.q as usize;
    let delta = inst.record.delta.unwrap_or(0);
    let p = inst.spec.axis_product();
    let lambda = inst.spec.lambda;
    let (r, len, info) = match shape.family {
        Family::A | Family::CartA => (q * q + 2 - delta, lambda * p * (q * q + 1), lambda * p * (q * q + 3 - 2 * delta)),
        Family::B | Family::CartB => (q - delta, lambda * p * (q - 1), lambda * p * (q + 1 - 2 * delta)),
        _ => (q * q - delta, lambda * p * (q * q - 1), lambda * p * (q * q + 1 - 2 * delta)),
    };
    mismatch("table r", inst.record.r, Some(r))?;
    mismatch("table length", inst.record.n, len)?;
    mismatch("table information qudits", inst.record.k, info)?;
    mismatch("table optimality", inst.record.optimal, true)
}
