//! Linear codes held as canonical generator matrices, and the code-level
//! transforms: duals, puncturing, shortening, subfield-subcodes and trace
//! codes.

mod distance;

pub(crate) use distance::min_weight_leading as min_weight_leading_rows;

pub use distance::{
    column_dependency_distance, distance_exceeds, full_enumeration_distance, DistanceMethod,
    COLUMN_DEPENDENCY_LIMIT, CROSS_CHECK_BUDGET, FULL_ENUM_BUDGET,
};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{Duality, GaloisTower, Gf};
use crate::matrix::GfMatrix;

/// Where a cached minimum distance came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceProvenance {
    /// Exact, confirmed by an oracle.
    Verified,
    /// Substituted from a theorem's formula.
    Predicted,
    /// Only a lower bound is known.
    LowerBound,
}

impl fmt::Display for DistanceProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceProvenance::Verified => "verified",
            DistanceProvenance::Predicted => "predicted",
            DistanceProvenance::LowerBound => "lower-bound",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub value: usize,
    pub provenance: DistanceProvenance,
}

/// A linear code over `F_field_order`, stored as its canonical RREF generator
/// (zero rows stripped). Equality compares the generators.
#[derive(Clone)]
pub struct LinearCode {
    generator: GfMatrix,
    distance: Option<DistanceRecord>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]_{}", self.len(), self.dimension(), self.field_order())?;
        if let Some(d) = self.distance {
            write!(f, " d={} ({})", d.value, d.provenance)?;
        }
        Ok(())
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator
    }
}

impl Eq for LinearCode {}

/// JSON shape of a code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub field: u32,
    pub n: usize,
    pub k: usize,
    pub d: Option<usize>,
    pub d_method: String,
    pub generator: String,
}

fn sorted_indices(t: &[usize], n: usize) -> Result<Vec<usize>> {
    if t.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    if let Some(&bad) = t.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad, bound: n });
    }
    let mut v = t.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

impl LinearCode {
    /// The row space of `generator`.
    pub fn from_generator(generator: &GfMatrix) -> LinearCode {
        LinearCode { generator: generator.canonical(), distance: None }
    }

    pub fn zero(tower: Arc<GaloisTower>, field_order: u32, n: usize) -> LinearCode {
        LinearCode { generator: GfMatrix::zeros(tower, field_order, 0, n), distance: None }
    }

    pub fn full(tower: Arc<GaloisTower>, field_order: u32, n: usize) -> LinearCode {
        LinearCode { generator: GfMatrix::identity(tower, field_order, n), distance: None }
    }

    pub fn tower(&self) -> &Arc<GaloisTower> {
        self.generator.tower()
    }
    pub fn field_order(&self) -> u32 {
        self.generator.field_order()
    }
    pub fn len(&self) -> usize {
        self.generator.cols()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }
    pub fn generator(&self) -> &GfMatrix {
        &self.generator
    }
    pub fn distance(&self) -> Option<DistanceRecord> {
        self.distance
    }

    /// Same code with a distance attached.
    pub fn with_distance(mut self, value: usize, provenance: DistanceProvenance) -> LinearCode {
        self.distance = Some(DistanceRecord { value, provenance });
        self
    }

    /// Computes the exact minimum distance and caches it as verified.
    pub fn verified(self, method: DistanceMethod) -> Result<LinearCode> {
        let d = self.min_distance(method)?;
        Ok(self.with_distance(d, DistanceProvenance::Verified))
    }

    /// The same generator regarded over a larger field.
    pub fn extend_scalars(&self, field_order: u32) -> Result<LinearCode> {
        if !self.tower().is_subfield_order(field_order)
            || self.tower().relative_trace(Gf::ZERO, field_order, self.field_order()).is_err()
        {
            return Err(Error::NotASubfield { order: self.field_order(), big: field_order });
        }
        Ok(LinearCode::from_generator(&self.generator.with_field_order(field_order)?))
    }

    pub fn contains_code(&self, other: &LinearCode) -> Result<bool> {
        self.generator.contains_row_space(&other.generator)
    }

    pub fn contains_word(&self, word: &[Gf]) -> Result<bool> {
        self.generator.in_row_space(word)
    }

    /// Generator of the Euclidean dual, i.e. a parity-check matrix.
    pub fn parity_check(&self) -> GfMatrix {
        self.generator.kernel()
    }

    pub fn euclidean_dual(&self) -> LinearCode {
        LinearCode::from_generator(&self.parity_check())
    }

    /// `q` with `field_order = q^2`.
    pub fn conjugation_exponent(&self) -> Result<u32> {
        GaloisTower::sqrt_order(self.field_order()).ok_or(Error::FieldNotSquare(self.field_order()))
    }

    /// `{x : Σ x_i y_i^q = 0 for all y ∈ C}`, the Euclidean kernel of the
    /// entrywise `q`-th power of the generator.
    pub fn hermitian_dual(&self) -> Result<LinearCode> {
        let q = self.conjugation_exponent()?;
        let t = self.tower().clone();
        let conj = self.generator.map(self.field_order(), |x| t.pow(x, q as u64));
        Ok(LinearCode::from_generator(&conj.kernel()))
    }

    pub fn dual(&self, mode: Duality) -> Result<LinearCode> {
        match mode {
            Duality::Euclidean => Ok(self.euclidean_dual()),
            Duality::Hermitian => self.hermitian_dual(),
        }
    }

    /// `π_T(C)`: every codeword projected onto the coordinates in `T`.
    pub fn puncture(&self, t: &[usize]) -> Result<LinearCode> {
        let t = sorted_indices(t, self.len())?;
        Ok(LinearCode::from_generator(&self.generator.select_columns(&t)))
    }

    /// `σ_T(C)`: the codewords supported inside `T`, projected onto `T`.
    pub fn shorten(&self, t: &[usize]) -> Result<LinearCode> {
        let t = sorted_indices(t, self.len())?;
        let outside: Vec<usize> = (0..self.len()).filter(|i| t.binary_search(i).is_err()).collect();
        if outside.is_empty() {
            return Ok(LinearCode::from_generator(&self.generator));
        }
        // messages m with m · G[:, outside] = 0
        let messages = self.generator.select_columns(&outside).transpose().kernel();
        if messages.rows() == 0 {
            return Ok(LinearCode::zero(self.tower().clone(), self.field_order(), t.len()));
        }
        let words = messages.mul(&self.generator)?.with_field_order(self.field_order())?;
        Ok(LinearCode::from_generator(&words.select_columns(&t)))
    }

    /// Basis `1, γ, ..., γ^{e-1}` of `F_field_order` over `F_target`, with `γ`
    /// a generator of the multiplicative group.
    fn subfield_basis(&self, target: u32) -> Result<Vec<Gf>> {
        let t = self.tower();
        let from = self.field_order();
        t.relative_trace(Gf::ZERO, from, target)?;
        let e = t.subfield_degree(from).unwrap() / t.subfield_degree(target).unwrap();
        let gamma = t.subfield_generator(from)?;
        Ok((0..e).map(|i| t.pow(gamma, i as u64)).collect())
    }

    /// `C ∩ F_target^n`, returned as a code over `F_target`.
    ///
    /// Each parity check `Σ_j h_j x_j = 0` with `x_j ∈ F_target` is replaced by
    /// the checks `Σ_j Tr(β h_j) x_j = 0` for `β` in a basis over `F_target`;
    /// nondegeneracy of the trace form makes these equivalent.
    pub fn subfield_subcode(&self, target: u32) -> Result<LinearCode> {
        let basis = self.subfield_basis(target)?;
        let t = self.tower().clone();
        let from = self.field_order();
        if from == target {
            return Ok(LinearCode::from_generator(&self.generator));
        }
        let h = self.parity_check();
        let n = self.len();
        let mut data = Vec::with_capacity(h.rows() * basis.len() * n);
        for row in h.row_iter() {
            for &beta in &basis {
                for &x in row {
                    data.push(t.relative_trace(t.mul(beta, x), from, target)?);
                }
            }
        }
        let expanded = GfMatrix::from_raw(t, target, h.rows() * basis.len(), n, data);
        Ok(LinearCode::from_generator(&expanded.kernel()))
    }

    /// Componentwise trace image `Tr(C)` as a code over `F_target`.
    pub fn trace_code(&self, target: u32) -> Result<LinearCode> {
        let basis = self.subfield_basis(target)?;
        let t = self.tower().clone();
        let from = self.field_order();
        let n = self.len();
        let mut data = Vec::with_capacity(self.dimension() * basis.len() * n);
        for row in self.generator.row_iter() {
            for &beta in &basis {
                for &x in row {
                    data.push(t.relative_trace(t.mul(beta, x), from, target)?);
                }
            }
        }
        let rows = self.dimension() * basis.len();
        Ok(LinearCode::from_generator(&GfMatrix::from_raw(t, target, rows, n, data)))
    }

    pub fn min_distance(&self, method: DistanceMethod) -> Result<usize> {
        distance::min_distance(self, method)
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            field: self.field_order(),
            n: self.len(),
            k: self.dimension(),
            d: self.distance.map(|d| d.value),
            d_method: self.distance.map_or("none".to_string(), |d| d.provenance.to_string()),
            generator: self.generator.export(),
        }
    }

    /// Rebuilds a code from its JSON form; the generator must match `k` and `n`.
    pub fn from_json(tower: Arc<GaloisTower>, json: &CodeJson) -> Result<LinearCode> {
        let g = GfMatrix::parse(tower, &json.generator)?;
        if g.field_order() != json.field {
            return Err(Error::Parse(format!(
                "generator field {} does not match field {}",
                g.field_order(),
                json.field
            )));
        }
        if g.cols() != json.n {
            return Err(Error::DimensionMismatch { expected: json.n, found: g.cols() });
        }
        let code = LinearCode::from_generator(&g);
        if code.dimension() != json.k {
            return Err(Error::DimensionMismatch { expected: json.k, found: code.dimension() });
        }
        let provenance = match json.d_method.as_str() {
            "verified" => Some(DistanceProvenance::Verified),
            "predicted" => Some(DistanceProvenance::Predicted),
            "lower-bound" => Some(DistanceProvenance::LowerBound),
            _ => None,
        };
        Ok(match (json.d, provenance) {
            (Some(d), Some(p)) => code.with_distance(d, p),
            _ => code,
        })
    }
}
