//! Exact arithmetic in a finite field `F_{q^s}` together with its subfield
//! chain `F_p ⊆ F_q ⊆ F_{q^s}`.
//!
//! Every element is stored as its integer code: the base-`p` digit vector of
//! its coordinates in the polynomial basis `{1, g, g^2, ...}`, least
//! significant digit first, where `g` is a root of the defining primitive
//! polynomial. Subfields are never given their own arithmetic; an element of
//! `F_{p^t}` is simply an element of the big field fixed by `x -> x^{p^t}`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// A field element, identified by its integer code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which inner product the constructions use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duality {
    Euclidean,
    Hermitian,
}

impl fmt::Display for Duality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Duality::Euclidean => f.write_str("euclidean"),
            Duality::Hermitian => f.write_str("hermitian"),
        }
    }
}

/// The field chain `F_p ⊆ F_q ⊆ F_{q^s}` with log/antilog tables for the big
/// field. Immutable after construction.
#[derive(Clone)]
pub struct GaloisTower {
    p: u32,
    q: u32,
    q_exponent: u32,
    s: u32,
    mode: Duality,
    frak_q: u32,
    degree: u32,
    order: u32,
    /// Low coefficients `c_0..c_{m-1}` of the monic defining polynomial.
    modulus: Vec<u32>,
    /// `exp[i] = g^i`, doubled so products of logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
}

impl fmt::Debug for GaloisTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisTower")
            .field("p", &self.p)
            .field("q", &self.q)
            .field("s", &self.s)
            .field("mode", &self.mode)
            .field("frak_q", &self.frak_q)
            .field("order", &self.order)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for GaloisTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.q == other.q
            && self.s == other.s
            && self.mode == other.mode
            && self.modulus == other.modulus
    }
}

impl Eq for GaloisTower {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(base^exp) mod m` for small moduli.
pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

/// Decomposes a prime power `q = p^e`, returning `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

/// Builds the tower for `q = p^q_exponent` and big field `F_{q^s}`.
///
/// The primitive polynomial is the first monic degree-`m` polynomial
/// `x^m + c_{m-1} x^{m-1} + ... + c_0` whose root has order `p^m - 1`, where
/// candidates are scanned by ascending value of `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
pub fn build_tower(p: u32, q_exponent: u32, s: u32, mode: Duality) -> Result<GaloisTower> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if q_exponent == 0 || s == 0 {
        return Err(Error::Parse("q exponent and s must be positive".into()));
    }
    if mode == Duality::Hermitian && !s.is_multiple_of(2) {
        return Err(Error::HermitianNeedsEvenS(s));
    }
    let degree = q_exponent * s;
    let order = (p as u64).checked_pow(degree).filter(|&o| o <= MAX_FIELD_ORDER);
    let order = order.ok_or(Error::FieldTooLarge { p, degree })? as u32;
    let q = p.pow(q_exponent);
    let frak_q = match mode {
        Duality::Euclidean => q,
        Duality::Hermitian => q * q,
    };

    let (modulus, exp) = find_primitive(p, degree, order);
    let group = order as usize - 1;
    let mut log = vec![NO_LOG; order as usize];
    for (i, &c) in exp.iter().enumerate() {
        log[c as usize] = i as u32;
    }
    let mut zech = vec![NO_LOG; group];
    for (k, z) in zech.iter_mut().enumerate() {
        let v = exp[k];
        let d0 = v % p;
        let w = v - d0 + (d0 + 1) % p;
        if w != 0 {
            *z = log[w as usize];
        }
    }
    let mut doubled = exp;
    doubled.extend_from_within(..);

    Ok(GaloisTower {
        p,
        q,
        q_exponent,
        s,
        mode,
        frak_q,
        degree,
        order,
        modulus,
        exp: doubled,
        log,
        zech,
    })
}

fn digits_of(mut code: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn code_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn find_primitive(p: u32, m: u32, order: u32) -> (Vec<u32>, Vec<u32>) {
    let group = order - 1;
    for t in 0..order {
        let coeffs = digits_of(t, p, m);
        if coeffs[0] == 0 {
            continue;
        }
        // x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        let reduction: Vec<u32> = coeffs.iter().map(|&c| (p - c) % p).collect();
        let mut state = vec![0u32; m as usize];
        state[0] = 1;
        let mut table = Vec::with_capacity(group as usize);
        let mut ok = true;
        for step in 0..group {
            let code = code_of(&state, p);
            if step > 0 && code == 1 {
                ok = false;
                break;
            }
            table.push(code);
            let top = state[m as usize - 1];
            for i in (1..m as usize).rev() {
                state[i] = state[i - 1];
            }
            state[0] = 0;
            if top != 0 {
                for (d, r) in state.iter_mut().zip(&reduction) {
                    *d = (*d + top * r) % p;
                }
            }
        }
        if ok && code_of(&state, p) == 1 {
            return (coeffs, table);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

impl GaloisTower {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn q_exponent(&self) -> u32 {
        self.q_exponent
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn mode(&self) -> Duality {
        self.mode
    }
    /// Working subfield order: `q` in Euclidean mode, `q^2` in Hermitian mode.
    pub fn frak_q(&self) -> u32 {
        self.frak_q
    }
    /// Order of the big field `q^s`.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Degree of the big field over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }
    /// Low coefficients of the defining primitive polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// Antilog table `g^0, g^1, ..., g^{order-2}`.
    pub fn antilog_table(&self) -> &[u32] {
        &self.exp[..self.group_order()]
    }
    pub fn group_order(&self) -> usize {
        self.order as usize - 1
    }

    /// True when both towers describe the same big field with the same basis.
    pub fn same_field(&self, other: &GaloisTower) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }

    pub fn generator(&self) -> Gf {
        Gf(self.exp[1 % self.group_order()])
    }

    pub fn contains(&self, x: Gf) -> bool {
        x.0 < self.order
    }

    /// Embeds an integer into the prime field.
    pub fn from_int(&self, v: i64) -> Gf {
        Gf(v.rem_euclid(self.p as i64) as u32)
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, x: Gf) -> Option<u32> {
        (!x.is_zero()).then(|| self.log[x.0 as usize])
    }

    /// `g^i` for any integer exponent.
    pub fn exp(&self, i: i64) -> Gf {
        Gf(self.exp[i.rem_euclid(self.group_order() as i64) as usize])
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if self.p == 2 {
            return Gf(a.0 ^ b.0);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let la = self.log[a.0 as usize] as usize;
        let lb = self.log[b.0 as usize] as usize;
        let group = self.group_order();
        let k = (lb + group - la) % group;
        match self.zech[k] {
            NO_LOG => Gf::ZERO,
            z => Gf(self.exp[la + z as usize]),
        }
    }

    /// Digit-wise addition in polynomial coordinates; slower than [`add`](Self::add)
    /// and kept as an independent route.
    pub fn add_by_digits(&self, a: Gf, b: Gf) -> Gf {
        let da = digits_of(a.0, self.p, self.degree);
        let db = digits_of(b.0, self.p, self.degree);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        Gf(code_of(&sum, self.p))
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        let half = self.group_order() / 2;
        Gf(self.exp[self.log[a.0 as usize] as usize + half])
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        Gf(self.exp[self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let group = self.group_order();
        let l = self.log[a.0 as usize] as usize;
        Ok(Gf(self.exp[(group - l) % group]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        if e == 0 {
            return Gf::ONE;
        }
        if a.is_zero() {
            return Gf::ZERO;
        }
        let group = self.group_order() as u64;
        let l = self.log[a.0 as usize] as u64;
        let r = (l as u128 * (e % group) as u128 % group as u128) as usize;
        Gf(self.exp[r])
    }

    /// `a^{p^k}`.
    pub fn frobenius(&self, a: Gf, k: u32) -> Gf {
        let group = self.group_order() as u64;
        self.pow(a, pow_mod(self.p as u64, k as u64, group).max(if group == 1 { 1 } else { 0 }))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Gf) -> Option<usize> {
        let l = self.log(a)? as usize;
        let group = self.group_order();
        Some(group / gcd(group, l))
    }

    /// Exponent `t` with `order = p^t` when `F_order` is a subfield of the big field.
    pub fn subfield_degree(&self, order: u32) -> Option<u32> {
        let (p, t) = prime_power(order as u64)?;
        (p == self.p && self.degree.is_multiple_of(t)).then_some(t)
    }

    pub fn is_subfield_order(&self, order: u32) -> bool {
        self.subfield_degree(order).is_some()
    }

    fn check_subfield(&self, order: u32) -> Result<u32> {
        self.subfield_degree(order)
            .ok_or(Error::NotASubfield { order, big: self.order })
    }

    /// Membership in `F_order` via the Frobenius fixed-point test `x^order = x`.
    pub fn in_subfield(&self, x: Gf, order: u32) -> bool {
        self.pow(x, order as u64) == x
    }

    /// Elements of `F_order`, sorted by code.
    pub fn subfield_elements(&self, order: u32) -> Result<Vec<Gf>> {
        self.check_subfield(order)?;
        let step = self.group_order() / (order as usize - 1);
        let mut out: Vec<Gf> = std::iter::once(Gf::ZERO)
            .chain((0..order as usize - 1).map(|i| Gf(self.exp[i * step])))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// A generator of the multiplicative group of `F_order`.
    pub fn subfield_generator(&self, order: u32) -> Result<Gf> {
        self.check_subfield(order)?;
        Ok(Gf(self.exp[self.group_order() / (order as usize - 1)]))
    }

    /// `a = g^{(q^s - 1)/n}`, a primitive `n`-th root of unity.
    pub fn nth_root_of_unity(&self, n: usize) -> Result<Gf> {
        let group = self.group_order();
        if n == 0 || !group.is_multiple_of(n) {
            return Err(Error::DoesNotDivideGroupOrder { n, order: group });
        }
        Ok(Gf(self.exp[group / n]))
    }

    /// Trace from the big field down to `F_sub_order`.
    pub fn trace_to_subfield(&self, x: Gf, sub_order: u32) -> Result<Gf> {
        self.relative_trace(x, self.order, sub_order)
    }

    /// Trace from `F_from` to `F_to`, both subfields of the big field with
    /// `F_to ⊆ F_from`: `sum_{i < e} x^{to^i}` where `to^e = from`.
    pub fn relative_trace(&self, x: Gf, from: u32, to: u32) -> Result<Gf> {
        let tf = self.check_subfield(from)?;
        let tt = self.check_subfield(to)?;
        if tf % tt != 0 {
            return Err(Error::NotASubfield { order: to, big: from });
        }
        let e = tf / tt;
        let mut acc = Gf::ZERO;
        let mut term = x;
        for _ in 0..e {
            acc = self.add(acc, term);
            term = self.pow(term, to as u64);
        }
        Ok(acc)
    }

    /// Integer square root of a field order, when it is a perfect square.
    pub fn sqrt_order(order: u32) -> Option<u32> {
        let r = (order as f64).sqrt().round() as u32;
        (r * r == order).then_some(r)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f16() -> GaloisTower {
        build_tower(2, 1, 4, Duality::Hermitian).unwrap()
    }

    #[test]
    fn parameter_echo() {
        let t = f16();
        assert_eq!((t.order(), t.frak_q()), (16, 4));
        let t = build_tower(5, 1, 2, Duality::Euclidean).unwrap();
        assert_eq!((t.order(), t.frak_q()), (25, 5));
        assert_eq!(
            build_tower(2, 1, 3, Duality::Hermitian).unwrap_err(),
            Error::HermitianNeedsEvenS(3)
        );
        assert_eq!(build_tower(4, 1, 2, Duality::Euclidean).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn f16_uses_x4_x_1() {
        // 1 + x + x^4 is the first primitive quartic in the scan.
        assert_eq!(f16().modulus(), &[1, 1, 0, 0]);
        assert_eq!(f16().generator(), Gf(2));
    }

    #[test]
    fn roots_of_unity() {
        let t = f16();
        let g = t.generator();
        assert_eq!(t.nth_root_of_unity(15).unwrap(), g);
        let a = t.nth_root_of_unity(5).unwrap();
        assert_eq!(a, t.pow(g, 3));
        // order 5 by direct powering
        let mut x = a;
        let mut k = 1;
        while x != Gf::ONE {
            x = t.mul(x, a);
            k += 1;
        }
        assert_eq!(k, 5);
        assert!(matches!(t.nth_root_of_unity(7), Err(Error::DoesNotDivideGroupOrder { .. })));
    }

    #[test]
    fn trace_examples() {
        let t = f16();
        assert_eq!(t.trace_to_subfield(Gf::ZERO, 4).unwrap(), Gf::ZERO);
        assert_eq!(t.trace_to_subfield(Gf::ONE, 4).unwrap(), Gf::ZERO);
        for c in 0..16 {
            let x = Gf(c);
            let expect = t.add(x, t.pow(x, 4));
            assert_eq!(t.trace_to_subfield(x, 4).unwrap(), expect);
        }
        assert!(matches!(t.trace_to_subfield(Gf(3), 8), Err(Error::NotASubfield { .. })));
    }

    #[test]
    fn arithmetic_examples() {
        let t = f16();
        let g = t.generator();
        assert_eq!(t.add(g, g), Gf::ZERO);
        assert_eq!(t.mul(g, t.pow(g, 14)), Gf::ONE);
        assert_eq!(t.inv(Gf::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn group_order_kills_everything() {
        for (p, e, s) in [(2, 1, 4), (3, 1, 4), (5, 1, 2), (2, 2, 3), (7, 1, 2)] {
            let t = build_tower(p, e, s, Duality::Euclidean).unwrap();
            let g = t.group_order() as u64;
            for c in 1..t.order() {
                assert_eq!(t.pow(Gf(c), g), Gf::ONE);
            }
        }
    }

    #[test]
    fn zech_addition_matches_digits() {
        for (p, s) in [(3, 4), (5, 2), (7, 2), (2, 5)] {
            let t = build_tower(p, 1, s, Duality::Euclidean).unwrap();
            for a in 0..t.order() {
                for b in (0..t.order()).step_by(3) {
                    assert_eq!(t.add(Gf(a), Gf(b)), t.add_by_digits(Gf(a), Gf(b)));
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_subfield() {
        let t = build_tower(3, 1, 4, Duality::Hermitian).unwrap();
        for order in [3u32, 9, 81] {
            let fixed = (0..t.order()).filter(|&c| t.in_subfield(Gf(c), order)).count();
            assert_eq!(fixed as u32, order);
            assert_eq!(t.subfield_elements(order).unwrap().len() as u32, order);
        }
    }

    #[test]
    fn trace_is_balanced_and_lands_in_subfield() {
        let t = build_tower(3, 1, 4, Duality::Hermitian).unwrap();
        let mut counts = std::collections::BTreeMap::new();
        for c in 0..t.order() {
            let tr = t.trace_to_subfield(Gf(c), 9).unwrap();
            assert!(t.in_subfield(tr, 9));
            *counts.entry(tr).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 9);
        assert!(counts.values().all(|&n| n == 9));
    }

    #[test]
    fn deterministic_construction() {
        let a = build_tower(5, 1, 4, Duality::Hermitian).unwrap();
        let b = build_tower(5, 1, 4, Duality::Hermitian).unwrap();
        assert_eq!(a.antilog_table(), b.antilog_table());
        assert_eq!(a, b);
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
    }
}
