//! (r, δ)-locality certificates, the classical Singleton-like defect and the
//! shortening/puncturing test for quantum locality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{distance_exceeds, DistanceMethod, LinearCode};
use crate::error::{Error, Result};
use crate::galois::Duality;

/// Exhaustive search caps.
pub const EXHAUSTIVE_MAX_LEN: usize = 40;
pub const EXHAUSTIVE_MAX_SET: usize = 12;
const EXHAUSTIVE_SUBSET_BUDGET: f64 = 2e5;
const CRITERION_BUDGET: f64 = 2e5;

/// `count` consecutive blocks of `block_size` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockStructure {
    block_size: usize,
    count: usize,
}

impl BlockStructure {
    pub fn new(block_size: usize, count: usize) -> Self {
        BlockStructure { block_size, count }
    }
    pub fn block_size(&self) -> usize {
        self.block_size
    }
    pub fn count(&self) -> usize {
        self.count
    }
    pub fn len(&self) -> usize {
        self.block_size * self.count
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Coordinates `i·b .. i·b + b - 1`.
    pub fn block(&self, i: usize) -> Vec<usize> {
        (i * self.block_size..(i + 1) * self.block_size).collect()
    }
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        (0..self.count).map(|i| self.block(i)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalityMethod {
    StructuredBlocks,
    Exhaustive,
}

/// Recovery sets covering every coordinate, each with punctured distance at
/// least `delta` and size at most `r + delta - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityCertificate {
    pub r: usize,
    pub delta: usize,
    pub sets: Vec<Vec<usize>>,
    pub method: LocalityMethod,
    pub classical_defect: Option<i64>,
    #[serde(skip)]
    pub optimal: bool,
}

impl LocalityCertificate {
    /// The first stored set containing coordinate `i`.
    pub fn recovery_set(&self, i: usize) -> Option<&[usize]> {
        self.sets.iter().find(|s| s.contains(&i)).map(Vec::as_slice)
    }

    /// Fills in the defect against the given length, dimension and distance.
    pub fn with_defect(mut self, n: usize, k: usize, d: usize) -> Self {
        let defect = classical_singleton_defect(n, k, d, self.r, self.delta);
        self.classical_defect = Some(defect);
        self.optimal = defect == 0;
        self
    }

    /// Re-checks size and punctured distance of every set against `code`.
    pub fn recheck(&self, code: &LinearCode) -> Result<bool> {
        let n = code.len();
        if (0..n).any(|i| self.recovery_set(i).is_none()) {
            return Ok(false);
        }
        for set in &self.sets {
            if set.len() > self.r + self.delta - 1 || !punctured_distance_at_least(code, set, self.delta)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(n + 1) - [k + d + (⌈k/r⌉ - 1)(δ - 1)]`.
pub fn classical_singleton_defect(n: usize, k: usize, d: usize, r: usize, delta: usize) -> i64 {
    let blocks = k.div_ceil(r.max(1)) as i64;
    (n as i64 + 1) - (k as i64 + d as i64 + (blocks - 1) * (delta as i64 - 1))
}

fn punctured_distance_at_least(code: &LinearCode, set: &[usize], delta: usize) -> Result<bool> {
    let p = code.puncture(set)?;
    distance_exceeds(&p, delta - 1)
}

fn check_params(n: usize, r: usize, delta: usize) -> Result<()> {
    if delta < 2 {
        return Err(Error::InvalidLocality(format!("delta = {delta} must be at least 2")));
    }
    if r == 0 {
        return Err(Error::InvalidLocality("r must be positive".into()));
    }
    if r + delta - 1 > n {
        return Err(Error::InvalidLocality(format!("r + delta - 1 = {} exceeds n = {n}", r + delta - 1)));
    }
    Ok(())
}

/// Certifies `(r, delta)`-locality, from the given blocks when present and by
/// exhaustive search otherwise.
pub fn certify_locality(
    code: &LinearCode,
    r: usize,
    delta: usize,
    hints: Option<BlockStructure>,
) -> Result<LocalityCertificate> {
    let n = code.len();
    check_params(n, r, delta)?;
    let max_size = r + delta - 1;
    let (sets, method) = match hints {
        Some(b) => {
            if b.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.len() });
            }
            let blocks = b.blocks();
            let ok: Vec<bool> = blocks
                .par_iter()
                .map(|j| Ok(j.len() <= max_size && punctured_distance_at_least(code, j, delta)?))
                .collect::<Result<_>>()?;
            if let Some(bad) = ok.iter().position(|&x| !x) {
                return Err(Error::NotLocallyRecoverable { coordinate: blocks[bad][0] });
            }
            (blocks, LocalityMethod::StructuredBlocks)
        }
        None => (exhaustive_sets(code, delta, max_size)?, LocalityMethod::Exhaustive),
    };
    Ok(LocalityCertificate { r, delta, sets, method, classical_defect: None, optimal: false })
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn exhaustive_sets(code: &LinearCode, delta: usize, max_size: usize) -> Result<Vec<Vec<usize>>> {
    let n = code.len();
    if n > EXHAUSTIVE_MAX_LEN || max_size > EXHAUSTIVE_MAX_SET {
        return Err(Error::SearchInfeasible(format!(
            "exhaustive search needs n <= {EXHAUSTIVE_MAX_LEN} and |J| <= {EXHAUSTIVE_MAX_SET}, got n = {n}, |J| <= {max_size}"
        )));
    }
    let cost: f64 = (1..=max_size).map(|s| binomial(n - 1, s - 1)).sum();
    if cost > EXHAUSTIVE_SUBSET_BUDGET {
        return Err(Error::SearchInfeasible(format!(
            "{cost:.0} candidate sets per coordinate exceed the budget"
        )));
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if sets.iter().any(|s| s.contains(&i)) {
            continue;
        }
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let mut found = None;
        'sizes: for size in 1..=max_size {
            let mut c: Vec<usize> = (0..size - 1).collect();
            loop {
                let mut j: Vec<usize> = c.iter().map(|&x| others[x]).collect();
                j.push(i);
                j.sort_unstable();
                if punctured_distance_at_least(code, &j, delta)? {
                    found = Some(j);
                    break 'sizes;
                }
                if size == 1 || !next_combination(&mut c, others.len()) {
                    break;
                }
            }
        }
        match found {
            Some(j) => sets.push(j),
            None => return Err(Error::NotLocallyRecoverable { coordinate: i }),
        }
    }
    Ok(sets)
}

/// Strongest block pair: `δ` is the least punctured distance over the blocks
/// and `r = b - δ + 1`.
pub fn discover_block_locality(code: &LinearCode, blocks: BlockStructure) -> Result<LocalityCertificate> {
    if blocks.len() != code.len() {
        return Err(Error::DimensionMismatch { expected: code.len(), found: blocks.len() });
    }
    let sets = blocks.blocks();
    let dists: Vec<Option<usize>> = sets
        .par_iter()
        .map(|j| {
            let p = code.puncture(j)?;
            if p.dimension() == 0 {
                Ok(None)
            } else {
                p.min_distance(DistanceMethod::Auto).map(Some)
            }
        })
        .collect::<Result<_>>()?;
    let b = blocks.block_size();
    let delta = dists.iter().map(|d| d.unwrap_or(b)).min().unwrap_or(0);
    if delta < 2 {
        let bad = dists.iter().position(|d| d.unwrap_or(b) < 2).unwrap_or(0);
        return Err(Error::NotLocallyRecoverable { coordinate: sets[bad][0] });
    }
    Ok(LocalityCertificate {
        r: b - delta + 1,
        delta,
        sets,
        method: LocalityMethod::StructuredBlocks,
        classical_defect: None,
        optimal: false,
    })
}

/// For every recovery set `J` and every `I ⊆ J` with `|I| = δ - 1`, checks
/// `σ_I(π_J(C^⊥)) = σ_I(C)`, where `C` is the self-orthogonal code.
pub fn quantum_locality_criterion(
    inner: &LinearCode,
    mode: Duality,
    certificate: &LocalityCertificate,
) -> Result<bool> {
    if certificate.delta < 2 {
        return Err(Error::InvalidLocality(format!("delta = {} must be at least 2", certificate.delta)));
    }
    let outer = inner.dual(mode)?;
    if !outer.contains_code(inner)? {
        return Err(Error::NotSelfOrthogonal);
    }
    let m = certificate.delta - 1;
    let cost: f64 = certificate.sets.iter().map(|j| binomial(j.len(), m)).sum();
    if cost > CRITERION_BUDGET {
        return Err(Error::SearchInfeasible(format!("{cost:.0} (I, J) pairs exceed the budget")));
    }
    let mut work: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for j in &certificate.sets {
        if j.len() < m {
            return Ok(false);
        }
        let mut c: Vec<usize> = (0..m).collect();
        loop {
            work.push((j.clone(), c.clone()));
            if !next_combination(&mut c, j.len()) {
                break;
            }
        }
    }
    let results: Vec<bool> = work
        .par_iter()
        .map(|(j, local)| {
            let global: Vec<usize> = local.iter().map(|&x| j[x]).collect();
            let lhs = outer.puncture(j)?.shorten(local)?;
            let rhs = inner.shorten(&global)?;
            Ok(lhs == rhs)
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().all(|x| x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::ExponentSet;
    use crate::evaluation::{build_domain, evaluation_code};
    use crate::galois::{build_tower, Gf};
    use crate::matrix::GfMatrix;
    use std::sync::Arc;

    fn flagship() -> (LinearCode, LinearCode, BlockStructure) {
        let t = Arc::new(build_tower(2, 1, 4, Duality::Hermitian).unwrap());
        let d = build_domain(t, 15, 5, 3).unwrap();
        let h = evaluation_code(&ExponentSet::new(15, [2, 3, 7, 8, 12, 13]), &d).unwrap();
        let inner = LinearCode::from_generator(&h).subfield_subcode(4).unwrap();
        let outer = inner.hermitian_dual().unwrap();
        (inner, outer, d.blocks())
    }

    #[test]
    fn defect_examples() {
        assert_eq!(classical_singleton_defect(15, 9, 3, 3, 3), 0);
        assert_eq!(classical_singleton_defect(24, 18, 2, 3, 2), 0);
        for n in 2..12 {
            for d in 1..=n {
                let k = n - d + 1;
                assert_eq!(classical_singleton_defect(n, k, d, k, 2), 0);
            }
        }
    }

    #[test]
    fn flagship_blocks() {
        let (inner, outer, blocks) = flagship();
        let cert = certify_locality(&outer, 3, 3, Some(blocks)).unwrap();
        assert_eq!(cert.sets.len(), 3);
        assert!(cert.sets.iter().all(|s| s.len() == 5));
        assert!(cert.recheck(&outer).unwrap());
        let found = discover_block_locality(&outer, blocks).unwrap();
        assert_eq!((found.r, found.delta), (3, 3));
        assert!(quantum_locality_criterion(&inner, Duality::Hermitian, &cert).unwrap());
        // weaker r also certifies
        assert!(certify_locality(&outer, 4, 3, Some(blocks)).is_ok());
        let json = serde_json::to_string(&cert.clone().with_defect(15, 9, 3)).unwrap();
        assert_eq!(
            json,
            r#"{"r":3,"delta":3,"sets":[[0,1,2,3,4],[5,6,7,8,9],[10,11,12,13,14]],"method":"structured-blocks","classical_defect":0}"#
        );
    }

    #[test]
    fn full_space_fails() {
        let t = Arc::new(build_tower(2, 1, 2, Duality::Euclidean).unwrap());
        let full = LinearCode::full(t, 4, 6);
        assert_eq!(
            certify_locality(&full, 2, 2, Some(BlockStructure::new(3, 2))),
            Err(Error::NotLocallyRecoverable { coordinate: 0 })
        );
        assert_eq!(certify_locality(&full, 2, 2, None), Err(Error::NotLocallyRecoverable { coordinate: 0 }));
    }

    #[test]
    fn repetition_pairs() {
        let t = Arc::new(build_tower(3, 1, 1, Duality::Euclidean).unwrap());
        let g = GfMatrix::from_rows(t, 3, 4, &[vec![Gf(1); 4]]).unwrap();
        let rep = LinearCode::from_generator(&g);
        let cert = certify_locality(&rep, 1, 2, None).unwrap();
        assert_eq!(cert.method, LocalityMethod::Exhaustive);
        assert_eq!(cert.sets, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert!(cert.recheck(&rep).unwrap());
    }

    #[test]
    fn degenerate_delta_rejected() {
        let (inner, outer, blocks) = flagship();
        assert!(matches!(certify_locality(&outer, 3, 1, Some(blocks)), Err(Error::InvalidLocality(_))));
        let mut cert = certify_locality(&outer, 3, 3, Some(blocks)).unwrap();
        cert.delta = 1;
        assert!(matches!(
            quantum_locality_criterion(&inner, Duality::Hermitian, &cert),
            Err(Error::InvalidLocality(_))
        ));
        // the outer code is not self-orthogonal
        assert_eq!(
            quantum_locality_criterion(&outer, Duality::Hermitian, &certify_locality(&outer, 3, 3, Some(blocks)).unwrap()),
            Err(Error::NotSelfOrthogonal)
        );
    }

    #[test]
    fn permutation_invariant_defect() {
        let (_, outer, blocks) = flagship();
        let cert = certify_locality(&outer, 3, 3, Some(blocks)).unwrap().with_defect(15, 9, 3);
        let perm: Vec<usize> = (0..15).rev().collect();
        let permuted = LinearCode::from_generator(&outer.generator().select_columns(&perm));
        let d = permuted.min_distance(DistanceMethod::Auto).unwrap();
        assert_eq!(
            classical_singleton_defect(15, permuted.dimension(), d, 3, 3),
            cert.classical_defect.unwrap()
        );
    }
}
