//! Arithmetic on exponent subsets of `Z_N`: cyclotomic cosets, completeness,
//! Minkowski sums, modular reductions and negations, and the structured sets
//! used by the code families.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::galois::{gcd, Duality};

/// A subset of `Z_N`, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentSet {
    #[serde(rename = "N")]
    modulus: usize,
    elements: Vec<usize>,
}

impl ExponentSet {
    /// Builds a set, reducing every element modulo `modulus`.
    pub fn new(modulus: usize, elements: impl IntoIterator<Item = usize>) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let set: BTreeSet<usize> = elements.into_iter().map(|e| e % modulus).collect();
        ExponentSet { modulus, elements: set.into_iter().collect() }
    }

    pub fn empty(modulus: usize) -> Self {
        ExponentSet::new(modulus, [])
    }

    pub fn full(modulus: usize) -> Self {
        ExponentSet::new(modulus, 0..modulus)
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.elements.binary_search(&(e % self.modulus)).is_ok()
    }

    pub fn min(&self) -> Option<usize> {
        self.elements.first().copied()
    }

    pub fn union(&self, other: &ExponentSet) -> Result<ExponentSet> {
        self.same_modulus(other)?;
        Ok(ExponentSet::new(self.modulus, self.elements.iter().chain(&other.elements).copied()))
    }

    pub fn intersection(&self, other: &ExponentSet) -> Result<ExponentSet> {
        self.same_modulus(other)?;
        Ok(ExponentSet::new(
            self.modulus,
            self.elements.iter().copied().filter(|&e| other.contains(e)),
        ))
    }

    /// `Z_N` minus this set.
    pub fn complement(&self) -> ExponentSet {
        ExponentSet::new(self.modulus, (0..self.modulus).filter(|&e| !self.contains(e)))
    }

    pub fn is_subset(&self, other: &ExponentSet) -> bool {
        self.modulus == other.modulus && self.elements.iter().all(|&e| other.contains(e))
    }

    /// Reinterprets the elements as residues of a larger modulus that is a
    /// multiple of this one, without changing their integer values.
    pub fn lift(&self, modulus: usize) -> Result<ExponentSet> {
        if !modulus.is_multiple_of(self.modulus) {
            return Err(Error::NotADivisor { divisor: self.modulus, modulus });
        }
        Ok(ExponentSet::new(modulus, self.elements.iter().copied()))
    }

    fn same_modulus(&self, other: &ExponentSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch { left: self.modulus, right: other.modulus });
        }
        Ok(())
    }
}

fn check_coprime(z: usize, modulus: usize) -> Result<()> {
    if gcd(z % modulus.max(1), modulus) != 1 && modulus != 1 {
        return Err(Error::BaseNotCoprime { base: z, modulus });
    }
    Ok(())
}

fn check_divisor(divisor: usize, modulus: usize) -> Result<()> {
    if divisor == 0 || !modulus.is_multiple_of(divisor) {
        return Err(Error::NotADivisor { divisor, modulus });
    }
    Ok(())
}

/// The orbit `{z^i e mod N : i >= 0}`.
pub fn cyclotomic_coset(e: usize, modulus: usize, z: usize) -> Result<ExponentSet> {
    check_coprime(z, modulus)?;
    if e >= modulus {
        return Err(Error::IndexOutOfRange { index: e, bound: modulus });
    }
    let mut orbit = vec![e];
    let mut x = e * z % modulus;
    while x != e {
        orbit.push(x);
        x = x * z % modulus;
    }
    Ok(ExponentSet::new(modulus, orbit))
}

/// All cyclotomic cosets of `Z_N` under multiplication by `z`, ordered by
/// their minimal representative.
pub fn all_cosets(modulus: usize, z: usize) -> Result<Vec<ExponentSet>> {
    check_coprime(z, modulus)?;
    let mut seen = vec![false; modulus];
    let mut out = Vec::new();
    for e in 0..modulus {
        if seen[e] {
            continue;
        }
        let c = cyclotomic_coset(e, modulus, z)?;
        for &x in c.elements() {
            seen[x] = true;
        }
        out.push(c);
    }
    Ok(out)
}

/// Minimal coset representatives `0 = α_0 < α_1 < ... < α_ν`.
pub fn coset_representatives(modulus: usize, z: usize) -> Result<Vec<usize>> {
    Ok(all_cosets(modulus, z)?.iter().filter_map(ExponentSet::min).collect())
}

/// True iff `z·D ≡ D (mod N)`.
pub fn is_complete(set: &ExponentSet, z: usize) -> Result<bool> {
    check_coprime(z, set.modulus)?;
    Ok(set.elements.iter().all(|&e| set.contains(e * z % set.modulus)))
}

/// Smallest `z`-complete superset: the union of the cosets of all elements.
pub fn complete_closure(set: &ExponentSet, z: usize) -> Result<ExponentSet> {
    check_coprime(z, set.modulus)?;
    let n = set.modulus;
    let mut out = BTreeSet::new();
    for &e in &set.elements {
        let mut x = e;
        while out.insert(x) {
            x = x * z % n;
        }
    }
    Ok(ExponentSet::new(n, out))
}

/// `A + B = {(a + b) mod N}`.
pub fn minkowski_sum(a: &ExponentSet, b: &ExponentSet) -> Result<ExponentSet> {
    a.same_modulus(b)?;
    let n = a.modulus;
    Ok(ExponentSet::new(
        n,
        a.elements.iter().flat_map(|&x| b.elements.iter().map(move |&y| (x + y) % n)),
    ))
}

/// `D_M`: residues of `D` modulo a divisor `M` of `N`.
pub fn reduce_mod(set: &ExponentSet, m: usize) -> Result<ExponentSet> {
    check_divisor(m, set.modulus)?;
    Ok(ExponentSet::new(m, set.elements.iter().map(|&e| e % m)))
}

/// `-D_M = {M - i mod M : i ∈ D}`.
pub fn negate_mod(set: &ExponentSet, m: usize) -> Result<ExponentSet> {
    check_divisor(m, set.modulus)?;
    Ok(ExponentSet::new(m, set.elements.iter().map(|&e| (m - e % m) % m)))
}

/// `-D_M^q = {M - q·i mod M : i ∈ D}`.
pub fn negate_q_mod(set: &ExponentSet, m: usize, q: usize) -> Result<ExponentSet> {
    check_divisor(m, set.modulus)?;
    Ok(ExponentSet::new(m, set.elements.iter().map(|&e| (m - (q % m) * (e % m) % m) % m)))
}

/// `{0, n, 2n, ..., N - n} ⊂ Z_N`.
pub fn a_set(n: usize, modulus: usize) -> Result<ExponentSet> {
    check_divisor(n, modulus)?;
    Ok(ExponentSet::new(modulus, (0..modulus / n).map(|i| i * n)))
}

/// Union of the cosets of the representatives `α_t, ..., α_{t'}`.
pub fn delta_range(t: usize, t_prime: usize, modulus: usize, z: usize) -> Result<ExponentSet> {
    let cosets = all_cosets(modulus, z)?;
    if t_prime >= cosets.len() {
        return Err(Error::IndexOutOfRange { index: t_prime, bound: cosets.len() });
    }
    if t > t_prime {
        return Err(Error::IndexOutOfRange { index: t, bound: t_prime + 1 });
    }
    Ok(ExponentSet::new(
        modulus,
        cosets[t..=t_prime].iter().flat_map(|c| c.elements.iter().copied()),
    ))
}

/// Longest run of consecutive integers inside `D ∩ {1, ..., N-1}`; no
/// wraparound past `N - 1`.
pub fn consecutive_run(set: &ExponentSet) -> usize {
    let mut best = 0;
    let mut run = 0;
    let mut prev: Option<usize> = None;
    for &e in set.elements.iter().filter(|&&e| e != 0) {
        run = match prev {
            Some(p) if p + 1 == e => run + 1,
            _ => 1,
        };
        best = best.max(run);
        prev = Some(e);
    }
    best
}

/// Exponent set of the dual evaluation code on the full set of `N`-th roots
/// of unity: `Z_N \ -Δ` (Euclidean) or `Z_N \ -Δ^q` (Hermitian).
///
/// Euclidean mode requires `Δ` to be `q`-complete, Hermitian mode
/// `q^2`-complete.
pub fn dual_exponents(delta: &ExponentSet, mode: Duality, q: usize) -> Result<ExponentSet> {
    let n = delta.modulus;
    let base = match mode {
        Duality::Euclidean => q,
        Duality::Hermitian => q * q,
    };
    if !is_complete(delta, base)? {
        return Err(Error::NotComplete { base });
    }
    let negated = match mode {
        Duality::Euclidean => negate_mod(delta, n)?,
        Duality::Hermitian => negate_q_mod(delta, n, q)?,
    };
    Ok(negated.complement())
}

/// Every union of a subfamily of `cosets`, in bitmask order.
pub fn coset_unions(cosets: &[ExponentSet]) -> impl Iterator<Item = ExponentSet> + '_ {
    let modulus = cosets.first().map_or(1, ExponentSet::modulus);
    (0u64..1 << cosets.len()).map(move |mask| {
        ExponentSet::new(
            modulus,
            cosets
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, c)| c.elements.iter().copied()),
        )
    })
}
