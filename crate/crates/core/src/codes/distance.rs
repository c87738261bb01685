//! Minimum-distance oracles: exhaustive codeword enumeration and the
//! smallest linearly dependent set of parity-check columns.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::atomic::{AtomicBool, Ordering};

use super::LinearCode;
use crate::error::{Error, Result};
use crate::galois::{GaloisTower, Gf};
use crate::matrix::axpy;

/// Largest `field^k` the exhaustive oracle will walk.
pub const FULL_ENUM_BUDGET: f64 = 1e8;
/// Below this `field^k`, auto mode enumerates and cross-checks.
pub const CROSS_CHECK_BUDGET: f64 = 1e6;
/// Deepest column-subset size the dependency search tries.
pub const COLUMN_DEPENDENCY_LIMIT: usize = 6;
const SUBSET_BUDGET: f64 = 5e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    Auto,
    FullEnum,
    ColumnDependency,
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn enum_cost(code: &LinearCode) -> f64 {
    (code.field_order() as f64).powi(code.dimension() as i32)
}

pub(super) fn min_distance(code: &LinearCode, method: DistanceMethod) -> Result<usize> {
    if code.dimension() == 0 {
        return Err(Error::ZeroCode);
    }
    match method {
        DistanceMethod::FullEnum => full_enumeration_distance(code),
        DistanceMethod::ColumnDependency => column_dependency_distance(code, COLUMN_DEPENDENCY_LIMIT)?
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "no dependent set of at most {COLUMN_DEPENDENCY_LIMIT} columns"
                ))
            }),
        DistanceMethod::Auto => {
            if enum_cost(code) <= CROSS_CHECK_BUDGET {
                let d = full_enumeration_distance(code)?;
                if d <= COLUMN_DEPENDENCY_LIMIT && binomial(code.len(), d) <= SUBSET_BUDGET {
                    let other = column_dependency_distance(code, d)?;
                    if other != Some(d) {
                        return Err(Error::VerificationMismatch(format!(
                            "enumeration gives d = {d}, column search gives {other:?}"
                        )));
                    }
                }
                return Ok(d);
            }
            if let Some(d) = column_dependency_distance(code, COLUMN_DEPENDENCY_LIMIT)? {
                return Ok(d);
            }
            if enum_cost(code) <= FULL_ENUM_BUDGET {
                return full_enumeration_distance(code);
            }
            Err(Error::Infeasible(format!(
                "{:?} is too large for both distance oracles",
                code
            )))
        }
    }
}

/// Minimum weight over all nonzero codewords whose leading message
/// coefficient is 1.
pub fn full_enumeration_distance(code: &LinearCode) -> Result<usize> {
    let k = code.dimension();
    if k == 0 {
        return Err(Error::ZeroCode);
    }
    if enum_cost(code) > FULL_ENUM_BUDGET {
        return Err(Error::Infeasible(format!(
            "{}^{} codewords exceed the enumeration budget",
            code.field_order(),
            k
        )));
    }
    let rows: Vec<&[Gf]> = code.generator().row_iter().collect();
    let best = min_weight_leading(code.tower(), code.field_order(), &rows, code.len(), k)?;
    Ok(best.unwrap_or(code.len()))
}

/// Minimum weight of `Σ m_i rows[i]` over all messages whose first nonzero
/// coefficient sits at an index below `lead_limit`; `None` when no such
/// message exists.
pub(crate) fn min_weight_leading(
    t: &GaloisTower,
    field_order: u32,
    rows: &[&[Gf]],
    n: usize,
    lead_limit: usize,
) -> Result<Option<usize>> {
    let k = rows.len();
    let elems = t.subfield_elements(field_order)?;
    // Tasks: leading row i, plus the value of row i+1 when present.
    let mut tasks: Vec<(usize, Option<usize>)> = Vec::new();
    for i in 0..lead_limit.min(k) {
        if i + 1 < k {
            tasks.extend((0..elems.len()).map(|v| (i, Some(v))));
        } else {
            tasks.push((i, None));
        }
    }
    Ok(tasks
        .par_iter()
        .map(|&(lead, second)| {
            let mut word = rows[lead].to_vec();
            let mut rest = lead + 1;
            if let Some(v) = second {
                axpy(t, &mut word, rows[lead + 1], t.neg(elems[v]));
                rest = lead + 2;
            }
            enumerate_tail(t, &elems, &rows[rest..], word, n)
        })
        .min())
}

/// Walks every combination of the tail rows with an odometer, adding one
/// difference per step.
fn enumerate_tail(t: &GaloisTower, elems: &[Gf], tail: &[&[Gf]], mut word: Vec<Gf>, n: usize) -> usize {
    let weight = |w: &[Gf]| w.iter().filter(|x| !x.is_zero()).count();
    let mut best = weight(&word);
    if tail.is_empty() {
        return best;
    }
    let m = elems.len();
    let mut digits = vec![0usize; tail.len()];
    loop {
        let mut pos = 0;
        loop {
            if pos == tail.len() {
                return best;
            }
            let old = elems[digits[pos]];
            digits[pos] = (digits[pos] + 1) % m;
            let new = elems[digits[pos]];
            // word += (new - old) * tail[pos]
            axpy(t, &mut word, tail[pos], t.sub(old, new));
            if digits[pos] != 0 {
                break;
            }
            pos += 1;
        }
        let w = weight(&word);
        if w < best {
            best = w;
            if best == 1 {
                return best.min(n);
            }
        }
    }
}

/// Incrementally reduced set of column vectors.
struct Echelon<'a> {
    t: &'a GaloisTower,
    basis: Vec<(usize, Vec<Gf>)>,
}

impl<'a> Echelon<'a> {
    /// Reduces `v` against the basis; pushes it and returns true when
    /// independent.
    fn push(&mut self, mut v: Vec<Gf>) -> bool {
        for (p, b) in &self.basis {
            let f = v[*p];
            axpy(self.t, &mut v, b, f);
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = self.t.inv(v[p]).expect("nonzero pivot");
                for x in v.iter_mut() {
                    *x = self.t.mul(*x, inv);
                }
                self.basis.push((p, v));
                true
            }
        }
    }
}

fn dependent_within(
    t: &GaloisTower,
    cols: &[Vec<Gf>],
    first: usize,
    limit: usize,
    stop: &AtomicBool,
) -> bool {
    fn dfs(e: &mut Echelon, cols: &[Vec<Gf>], start: usize, limit: usize, stop: &AtomicBool) -> bool {
        if stop.load(Ordering::Relaxed) {
            return false;
        }
        for c in start..cols.len() {
            if !e.push(cols[c].clone()) {
                return true;
            }
            let found = e.basis.len() < limit && dfs(e, cols, c + 1, limit, stop);
            e.basis.pop();
            if found {
                return true;
            }
        }
        false
    }
    let mut e = Echelon { t, basis: Vec::new() };
    if !e.push(cols[first].clone()) {
        return true;
    }
    limit > 1 && dfs(&mut e, cols, first + 1, limit, stop)
}

/// Smallest `t ≤ limit` such that some `t` columns of a parity-check matrix
/// are linearly dependent, which equals the minimum distance when it exists.
pub fn column_dependency_distance(code: &LinearCode, limit: usize) -> Result<Option<usize>> {
    if code.dimension() == 0 {
        return Err(Error::ZeroCode);
    }
    let h = code.parity_check();
    let n = code.len();
    let r = h.rows();
    let cols: Vec<Vec<Gf>> = (0..n).map(|j| (0..r).map(|i| h.get(i, j)).collect()).collect();
    let t = code.tower();
    for size in 1..=limit.min(n) {
        let stop = AtomicBool::new(false);
        let hit = (0..n).into_par_iter().any(|c| {
            let found = dependent_within(t, &cols, c, size, &stop);
            if found {
                stop.store(true, Ordering::Relaxed);
            }
            found
        });
        if hit {
            return Ok(Some(size));
        }
    }
    Ok(None)
}

/// True when every nonzero codeword has weight greater than `bound`.
pub fn distance_exceeds(code: &LinearCode, bound: usize) -> Result<bool> {
    if code.dimension() == 0 {
        return Ok(true);
    }
    if bound == 0 {
        return Ok(true);
    }
    if let Some(rec) = code.distance() {
        if rec.provenance == super::DistanceProvenance::Verified {
            return Ok(rec.value > bound);
        }
    }
    if binomial(code.len(), bound) * (bound as f64) <= SUBSET_BUDGET * 10.0 {
        return Ok(column_dependency_distance(code, bound)?.is_none());
    }
    if enum_cost(code) <= FULL_ENUM_BUDGET {
        return Ok(full_enumeration_distance(code)? > bound);
    }
    Err(Error::Infeasible(format!("cannot certify {:?} has distance above {bound}", code)))
}
