//! Evaluation-point domains and the evaluation codes built on them.
//!
//! Points of a domain come in blocks: block `i` is `a^i · {1, ζ_n, ..., ζ_n^{n-1}}`
//! where `a` is a primitive `N`-th root of unity and `ζ_n = a^{N/n}`. Block
//! `i` occupies coordinates `i·n .. i·n + n - 1`; the locality certificates
//! rely on that order.

use serde::{Serialize, Serializer};
use std::sync::Arc;

use crate::cosets::ExponentSet;
use crate::error::{Error, Result};
use crate::galois::{GaloisTower, Gf};
use crate::locality::BlockStructure;
use crate::matrix::GfMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    /// `λ = N/n`: all `N`-th roots of unity.
    Full,
    /// `λn ∤ N`: a homothetic-BCH point set.
    Partial,
    /// `λn | N`, `λn < N`.
    Divisor,
}

#[derive(Clone, Debug)]
pub struct EvaluationDomain {
    tower: Arc<GaloisTower>,
    modulus: usize,
    block: usize,
    lambda: usize,
    points: Vec<Gf>,
    kind: DomainKind,
}

impl Serialize for EvaluationDomain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(rename = "N")]
            modulus: usize,
            n: usize,
            lambda: usize,
            kind: DomainKind,
            points: &'a [Gf],
        }
        Repr {
            modulus: self.modulus,
            n: self.block,
            lambda: self.lambda,
            kind: self.kind,
            points: &self.points,
        }
        .serialize(serializer)
    }
}

/// Builds the `λ` blocks of `n` points for ambient modulus `N`.
pub fn build_domain(
    tower: Arc<GaloisTower>,
    modulus: usize,
    n: usize,
    lambda: usize,
) -> Result<EvaluationDomain> {
    let group = tower.group_order();
    if modulus == 0 || !group.is_multiple_of(modulus) {
        return Err(Error::DivisibilityViolation(format!("N = {modulus} must divide {group}")));
    }
    if n == 0 || !modulus.is_multiple_of(n) {
        return Err(Error::DivisibilityViolation(format!("n = {n} must divide N = {modulus}")));
    }
    if lambda == 0 || lambda > modulus / n {
        return Err(Error::DivisibilityViolation(format!(
            "lambda = {lambda} must lie in 1..={}",
            modulus / n
        )));
    }
    let a = tower.nth_root_of_unity(modulus)?;
    let zeta = tower.pow(a, (modulus / n) as u64);
    let mut points = Vec::with_capacity(lambda * n);
    let mut prefix = Gf::ONE;
    for _ in 0..lambda {
        let mut x = prefix;
        for _ in 0..n {
            points.push(x);
            x = tower.mul(x, zeta);
        }
        prefix = tower.mul(prefix, a);
    }
    let len = lambda * n;
    let kind = if len == modulus {
        DomainKind::Full
    } else if modulus.is_multiple_of(len) {
        DomainKind::Divisor
    } else {
        DomainKind::Partial
    };
    Ok(EvaluationDomain { tower, modulus, block: n, lambda, points, kind })
}

impl EvaluationDomain {
    pub fn tower(&self) -> &Arc<GaloisTower> {
        &self.tower
    }
    pub fn modulus(&self) -> usize {
        self.modulus
    }
    pub fn block_size(&self) -> usize {
        self.block
    }
    pub fn lambda(&self) -> usize {
        self.lambda
    }
    pub fn points(&self) -> &[Gf] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn kind(&self) -> DomainKind {
        self.kind
    }
    pub fn blocks(&self) -> BlockStructure {
        BlockStructure::new(self.block, self.lambda)
    }
}

/// Generator matrix of `⟨ev(X^e) : e ∈ Δ⟩` on the domain, one row per
/// exponent in ascending order.
pub fn evaluation_code(delta: &ExponentSet, domain: &EvaluationDomain) -> Result<GfMatrix> {
    if delta.modulus() != domain.modulus {
        return Err(Error::ModulusMismatch { left: delta.modulus(), right: domain.modulus });
    }
    let t = &domain.tower;
    let data = delta
        .elements()
        .iter()
        .flat_map(|&e| domain.points.iter().map(move |&x| t.pow(x, e as u64)))
        .collect();
    Ok(GfMatrix::from_raw(t.clone(), t.order(), delta.len(), domain.len(), data))
}

/// `Z_1 × Z_2 × ... × Z_w` with `Z_1` the points of an evaluation domain and
/// every further axis a set of distinct elements of a subfield.
#[derive(Clone, Debug)]
pub struct CartesianDomain {
    base: EvaluationDomain,
    axes: Vec<Vec<Gf>>,
    points: Vec<Vec<Gf>>,
}

impl CartesianDomain {
    /// Extra axes must consist of distinct elements of `F_axis_field`.
    pub fn new(base: EvaluationDomain, axes: Vec<Vec<Gf>>, axis_field: u32) -> Result<Self> {
        let t = base.tower.clone();
        for axis in &axes {
            if axis.iter().any(|&z| !t.contains(z) || !t.in_subfield(z, axis_field)) {
                return Err(Error::AxisNotInSubfield(axis_field));
            }
            let mut sorted = axis.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != axis.len() {
                return Err(Error::Parse("axis points must be distinct".into()));
            }
        }
        // axis 1 fastest
        let mut points: Vec<Vec<Gf>> = base.points.iter().map(|&z| vec![z]).collect();
        for axis in &axes {
            let mut next = Vec::with_capacity(points.len() * axis.len());
            for &z in axis {
                for p in &points {
                    let mut v = p.clone();
                    v.push(z);
                    next.push(v);
                }
            }
            points = next;
        }
        Ok(CartesianDomain { base, axes, points })
    }

    pub fn base(&self) -> &EvaluationDomain {
        &self.base
    }
    pub fn axes(&self) -> &[Vec<Gf>] {
        &self.axes
    }
    pub fn axis_sizes(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }
    pub fn points(&self) -> &[Vec<Gf>] {
        &self.points
    }
    /// Total point count `β = λn · n_2 ⋯ n_w`.
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    /// Blocks of `n` consecutive coordinates sharing the homothety factor and
    /// the values on the extra axes.
    pub fn blocks(&self) -> BlockStructure {
        BlockStructure::new(self.base.block, self.len() / self.base.block)
    }
}

/// Generator matrix of the monomial-Cartesian code with exponent set
/// `first × others[0] × ... × others[w-2]`, entry `∏_ℓ z_ℓ^{e_ℓ}` with `0^0 = 1`.
pub fn cartesian_code(
    first: &ExponentSet,
    others: &[Vec<usize>],
    domain: &CartesianDomain,
) -> Result<GfMatrix> {
    if first.modulus() != domain.base.modulus {
        return Err(Error::ModulusMismatch { left: first.modulus(), right: domain.base.modulus });
    }
    if others.len() != domain.axes.len() {
        return Err(Error::ExponentOutOfRange(format!(
            "{} exponent factors for {} axes",
            others.len() + 1,
            domain.axes.len() + 1
        )));
    }
    for (l, (exps, axis)) in others.iter().zip(&domain.axes).enumerate() {
        if axis.len() < 2 {
            return Err(Error::ExponentOutOfRange(format!(
                "axis {} has {} point(s); at least 2 are required",
                l + 2,
                axis.len()
            )));
        }
        if let Some(&e) = exps.iter().find(|&&e| e >= axis.len()) {
            return Err(Error::ExponentOutOfRange(format!(
                "exponent {e} on axis {} must be below {}",
                l + 2,
                axis.len()
            )));
        }
    }
    let t = domain.base.tower.clone();
    let mut tuples: Vec<Vec<usize>> = first.elements().iter().map(|&e| vec![e]).collect();
    for exps in others {
        let mut next = Vec::with_capacity(tuples.len() * exps.len());
        for &e in exps {
            for tup in &tuples {
                let mut v = tup.clone();
                v.push(e);
                next.push(v);
            }
        }
        tuples = next;
    }
    let mut data = Vec::with_capacity(tuples.len() * domain.len());
    for tup in &tuples {
        for z in &domain.points {
            let v = z
                .iter()
                .zip(tup)
                .fold(Gf::ONE, |acc, (&x, &e)| t.mul(acc, t.pow(x, e as u64)));
            data.push(v);
        }
    }
    Ok(GfMatrix::from_raw(t.clone(), t.order(), tuples.len(), domain.len(), data))
}
