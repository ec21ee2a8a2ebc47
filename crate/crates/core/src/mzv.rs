//! The coefficient ring: exact rational combinations of monomials
//! `π^{2a} · ∏ ζ(odd) · ∏ unknowns`.
//!
//! π², the odd single zeta values and the opaque unknowns are treated as
//! algebraically independent symbols. Every identity checked over this ring
//! is therefore an identity of formal expressions.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque MZVs whose values are never used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Unknown {
    /// `ζ₁(2^{m} 3 2^{n})`, weight `2m+2n+4`.
    Hoffman1 { m: u32, n: u32 },
    /// The associator coefficient of `(x0x1)^{m+1} (x1x0)^{n+1}`, weight `2m+2n+4`.
    DualSingular { m: u32, n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UnknownKind {
    Hoffman1,
    DualSingular,
}

impl Unknown {
    pub fn weight(&self) -> u32 {
        match *self {
            Unknown::Hoffman1 { m, n } | Unknown::DualSingular { m, n } => 2 * m + 2 * n + 4,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Unknown::Hoffman1 { m, n } => format!("H({m},{n})"),
            Unknown::DualSingular { m, n } => format!("Hhat({m},{n})"),
        }
    }
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `π^{pi_pow} · ∏ ζ(odd[k]) · ∏ unknowns[k]`, multisets kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub pi_pow: u32,
    pub odd: Vec<u32>,
    pub unknowns: Vec<Unknown>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn weight(&self) -> u32 {
        self.pi_pow + self.odd.iter().sum::<u32>() + self.unknowns.iter().map(Unknown::weight).sum::<u32>()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut odd = self.odd.clone();
        odd.extend_from_slice(&other.odd);
        odd.sort_unstable();
        let mut unknowns = self.unknowns.clone();
        unknowns.extend_from_slice(&other.unknowns);
        unknowns.sort_unstable();
        Monomial { pi_pow: self.pi_pow + other.pi_pow, odd, unknowns }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.pi_pow > 0 {
            parts.push(if self.pi_pow == 1 { "pi".to_string() } else { format!("pi^{}", self.pi_pow) });
        }
        parts.extend(self.odd.iter().map(|s| format!("zeta({s})")));
        parts.extend(self.unknowns.iter().map(Unknown::label));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MzvExpr {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl MzvExpr {
    pub fn zero() -> Self {
        MzvExpr::default()
    }

    pub fn one() -> Self {
        MzvExpr::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        MzvExpr::term(c, Monomial::one())
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut e = MzvExpr::zero();
        e.add_term(m, c);
        e
    }

    /// `π^{2a}`.
    pub fn pi_even(a: u32) -> Self {
        MzvExpr::term(BigRational::one(), Monomial { pi_pow: 2 * a, ..Monomial::default() })
    }

    /// `ζ(s)` for odd `s ≥ 3`; `ζ(1)` is regularised to zero.
    pub fn zeta_odd(s: u32) -> Self {
        assert!(s % 2 == 1, "zeta_odd needs an odd argument");
        if s == 1 {
            return MzvExpr::zero();
        }
        MzvExpr::term(BigRational::one(), Monomial { odd: vec![s], ..Monomial::default() })
    }

    pub fn unknown(u: Unknown) -> Self {
        MzvExpr::term(BigRational::one(), Monomial { unknowns: vec![u], ..Monomial::default() })
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(entry) => {
                *entry += c;
                if entry.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return MzvExpr::zero();
        }
        MzvExpr { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// The common weight of all monomials, `None` for zero or mixed weight.
    pub fn weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::weight);
        let first = it.next()?;
        it.all(|x| x == first).then_some(first)
    }

    pub fn has_unknowns(&self) -> bool {
        self.terms.keys().any(|m| !m.unknowns.is_empty())
    }

    pub fn unknowns(&self) -> Vec<Unknown> {
        let mut out: Vec<Unknown> = self.terms.keys().flat_map(|m| m.unknowns.iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Replace every occurrence of `u` by `value`.
    pub fn substitute(&self, u: &Unknown, value: &MzvExpr) -> MzvExpr {
        let mut out = MzvExpr::zero();
        for (m, c) in &self.terms {
            let hits = m.unknowns.iter().filter(|x| *x == u).count();
            if hits == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest = Monomial {
                pi_pow: m.pi_pow,
                odd: m.odd.clone(),
                unknowns: m.unknowns.iter().filter(|x| *x != u).copied().collect(),
            };
            let mut term = MzvExpr::term(c.clone(), rest);
            for _ in 0..hits {
                term = &term * value;
            }
            out += &term;
        }
        out
    }

    /// If the expression is `q · ζ(s)`, return `(q, s)`.
    pub fn as_single_zeta(&self) -> Option<(BigRational, u32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        (m.pi_pow == 0 && m.unknowns.is_empty() && m.odd.len() == 1).then(|| (c.clone(), m.odd[0]))
    }

    /// Floating evaluation with absolute error below `10^{-digits}` relative
    /// to the magnitude of the terms. Only double precision is available.
    pub fn numeric(&self, digits: u32, assignment: Option<&HashMap<Unknown, f64>>) -> Result<f64> {
        const AVAILABLE: u32 = 15;
        if digits > AVAILABLE {
            return Err(Error::PrecisionUnavailable { requested: digits, available: AVAILABLE });
        }
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut v = c.to_f64().expect("finite rational");
            v *= std::f64::consts::PI.powi(m.pi_pow as i32);
            for &s in &m.odd {
                v *= zeta_numeric(s);
            }
            for u in &m.unknowns {
                let val = assignment.and_then(|a| a.get(u)).ok_or_else(|| Error::UnassignedUnknown(u.label()))?;
                v *= val;
            }
            acc += v;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!({
                    "coeff": c.to_string(),
                    "pi_pow": m.pi_pow,
                    "odd": m.odd,
                    "unknown": m.unknowns.iter().map(Unknown::label).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::Value::Array(list)
    }
}

impl fmt::Display for MzvExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let is_one_mono = *m == Monomial::one();
            if abs.is_one() && !is_one_mono {
                write!(f, "{m}")?;
            } else if is_one_mono {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add<&MzvExpr> for &MzvExpr {
    type Output = MzvExpr;
    fn add(self, rhs: &MzvExpr) -> MzvExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&MzvExpr> for MzvExpr {
    fn add_assign(&mut self, rhs: &MzvExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MzvExpr> for MzvExpr {
    fn sub_assign(&mut self, rhs: &MzvExpr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Sub<&MzvExpr> for &MzvExpr {
    type Output = MzvExpr;
    fn sub(self, rhs: &MzvExpr) -> MzvExpr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &MzvExpr {
    type Output = MzvExpr;
    fn neg(self) -> MzvExpr {
        MzvExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul<&MzvExpr> for &MzvExpr {
    type Output = MzvExpr;
    fn mul(self, rhs: &MzvExpr) -> MzvExpr {
        let mut out = MzvExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// `ζ(2^{n}) = π^{2n}/(2n+1)!`.
pub fn zeta_two_string(n: u32) -> MzvExpr {
    MzvExpr::pi_even(n).scale(&BigRational::new(BigInt::one(), factorial(2 * n + 1)))
}

/// `ζ₁(2^{n}) = 2 Σ_{i=1}^{n} (-1)^i ζ(2i+1) ζ(2^{n-i})`.
pub fn zeta1_two_string(n: u32) -> MzvExpr {
    let mut out = MzvExpr::zero();
    for i in 1..=n {
        let sign = if i % 2 == 0 { 2 } else { -2 };
        out += &(&MzvExpr::zeta_odd(2 * i + 1) * &zeta_two_string(n - i)).scale(&rat(sign));
    }
    out
}

pub fn binom(n: u32, k: u32) -> BigRational {
    if k > n {
        return BigRational::zero();
    }
    BigRational::from_integer(BigInt::from(binomial(n as u64, k as u64)))
}

/// `A^r_a = C(2r, 2a+2)`.
pub fn binom_a(r: u32, a: u32) -> BigRational {
    binom(2 * r, 2 * a + 2)
}

/// `B^r_b = (1 - 2^{-2r}) C(2r, 2b+1)`.
pub fn binom_b(r: u32, b: u32) -> BigRational {
    one_minus_two_pow(2 * r) * binom(2 * r, 2 * b + 1)
}

/// `1 - 2^{-k}`.
pub fn one_minus_two_pow(k: u32) -> BigRational {
    BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// `ζ(2^{a} 3 2^{b})` by Zagier's formula.
pub fn hoffman_232(a: u32, b: u32) -> MzvExpr {
    let mut out = MzvExpr::zero();
    for r in 1..=a + b + 1 {
        let mut c = binom_a(r, a) - binom_b(r, b);
        c *= rat(if r % 2 == 0 { 2 } else { -2 });
        out += &(&MzvExpr::zeta_odd(2 * r + 1) * &zeta_two_string(a + b + 1 - r)).scale(&c);
    }
    out
}

pub fn unknown_singular(kind: UnknownKind, m: u32, n: u32) -> MzvExpr {
    MzvExpr::unknown(match kind {
        UnknownKind::Hoffman1 => Unknown::Hoffman1 { m, n },
        UnknownKind::DualSingular => Unknown::DualSingular { m, n },
    })
}

/// `ζ(s)` for integer `s ≥ 2` in double precision: a short direct sum plus an
/// Euler–Maclaurin tail whose first omitted term is below 1e-20.
pub fn zeta_numeric(s: u32) -> f64 {
    assert!(s >= 2);
    const N: u32 = 16;
    // B_{2j}/(2j)! for j = 1..6.
    const B_OVER_FACT: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
    ];
    let sf = s as f64;
    let n = N as f64;
    // Sum small terms first.
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += (k as f64).powf(-sf);
    }
    sum += n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    // Rising factorial s(s+1)...(s+2j-2) times N^{-s-2j+1}.
    let mut rising = sf;
    let mut npow = n.powf(-sf - 1.0);
    for (j, b) in B_OVER_FACT.iter().enumerate() {
        sum += b * rising * npow;
        let k = 2 * j as u32 + 1;
        rising *= (sf + k as f64) * (sf + k as f64 + 1.0);
        npow /= n * n;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(s: u32) -> MzvExpr {
        MzvExpr::zeta_odd(s)
    }

    /// Nested sum `Σ_{0<k1<...<kr} ∏ k_i^{-s_i}` truncated at `kr ≤ K`, then
    /// Richardson-extrapolated in K. Every exponent is at least 2, so the
    /// truncation error is a pure power series in 1/K.
    pub(crate) fn nested_sum(s: &[u32]) -> f64 {
        let partial = |kmax: usize| -> f64 {
            // below[k] = value of the inner levels summed over indices < k.
            let mut below = vec![1.0f64; kmax + 2];
            below[0] = 0.0;
            let mut total = 0.0;
            for &e in s {
                let mut next = vec![0.0f64; kmax + 2];
                let mut acc = 0.0;
                for k in 1..=kmax {
                    next[k] = acc;
                    acc += (k as f64).powi(-(e as i32)) * below[k];
                }
                total = acc;
                below = next;
            }
            total
        };
        let levels = 7;
        let mut table: Vec<f64> = (0..levels).map(|j| partial(2000 << j)).collect();
        for order in 1..levels {
            let f = (1u64 << order) as f64;
            for j in (order..levels).rev() {
                table[j] = (f * table[j] - table[j - 1]) / (f - 1.0);
            }
        }
        table[levels - 1]
    }

    #[test]
    fn nested_sum_oracle_reproduces_known_values() {
        assert!((nested_sum(&[3]) - 1.2020569031595943).abs() < 1e-12);
        // ζ(2,2) = π⁴/120.
        assert!((nested_sum(&[2, 2]) - std::f64::consts::PI.powi(4) / 120.0).abs() < 1e-12);
    }

    #[test]
    fn hoffman_matches_nested_sums() {
        for a in 0..=2u32 {
            for b in 0..=(2 - a) {
                let mut idx = vec![2u32; a as usize];
                idx.push(3);
                idx.extend(std::iter::repeat_n(2, b as usize));
                let brute = nested_sum(&idx);
                let formula = hoffman_232(a, b).numeric(15, None).unwrap();
                assert!((brute - formula).abs() < 1e-10, "({a},{b}): {brute} vs {formula}");
            }
        }
    }

    #[test]
    fn zeta_numeric_values() {
        assert!((zeta_numeric(2) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
        assert!((zeta_numeric(3) - 1.2020569031595943).abs() < 1e-15);
        assert!((zeta_numeric(5) - 1.036_927_755_143_37).abs() < 1e-15);
        assert!((zeta_numeric(4) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn two_strings() {
        assert_eq!(zeta_two_string(0), MzvExpr::one());
        assert_eq!(zeta_two_string(1), MzvExpr::pi_even(1).scale(&ratio(1, 6)));
        assert_eq!(zeta_two_string(2), MzvExpr::pi_even(2).scale(&ratio(1, 120)));
        assert_eq!(zeta1_two_string(0), MzvExpr::zero());
        assert_eq!(zeta1_two_string(1), z(3).scale(&rat(-2)));
        let expect = &(&MzvExpr::pi_even(1) * &z(3)).scale(&ratio(-1, 3)) + &z(5).scale(&rat(2));
        assert_eq!(zeta1_two_string(2), expect);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom_a(1, 0), rat(1));
        assert_eq!(binom_b(1, 0), ratio(3, 2));
        assert_eq!(binom_b(2, 0), ratio(15, 4));
    }

    #[test]
    fn hoffman_examples() {
        assert_eq!(hoffman_232(0, 0), z(3));
        let expect = &(&MzvExpr::pi_even(1) * &z(3)).scale(&ratio(1, 2)) - &z(5).scale(&ratio(11, 2));
        assert_eq!(hoffman_232(1, 0), expect);
        // (0,1): 2[(A¹₀ - B¹₁)(-1) ζ(3) ζ(2) + (A²₀ - B²₁) ζ(5)].
        let c1 = (binom_a(1, 0) - binom_b(1, 1)) * rat(-2);
        let c2 = (binom_a(2, 0) - binom_b(2, 1)) * rat(2);
        let expect = &(&z(3) * &zeta_two_string(1)).scale(&c1) + &z(5).scale(&c2);
        assert_eq!(hoffman_232(0, 1), expect);
        assert_eq!(hoffman_232(2, 1).weight(), Some(9));
    }

    #[test]
    fn unknowns_are_distinct_and_weighted() {
        let a = unknown_singular(UnknownKind::Hoffman1, 0, 0);
        assert_eq!(a.weight(), Some(4));
        assert_ne!(unknown_singular(UnknownKind::Hoffman1, 1, 0), unknown_singular(UnknownKind::Hoffman1, 0, 1));
        assert_ne!(unknown_singular(UnknownKind::Hoffman1, 1, 0), unknown_singular(UnknownKind::DualSingular, 1, 0));
        assert_eq!(unknown_singular(UnknownKind::Hoffman1, 2, 3).weight(), Some(14));
        assert_eq!(a.numeric(10, None), Err(Error::UnassignedUnknown("H(0,0)".into())));
        let mut assign = HashMap::new();
        assign.insert(Unknown::Hoffman1 { m: 0, n: 0 }, 2.5);
        assert_eq!(a.numeric(10, Some(&assign)), Ok(2.5));
    }

    #[test]
    fn numeric_constants() {
        assert!((z(3).numeric(15, None).unwrap() - 1.2020569031595943).abs() < 1e-15);
        assert!((zeta_two_string(1).numeric(15, None).unwrap() - 1.6449340668482264).abs() < 1e-15);
        assert!(z(3).numeric(20, None).is_err());
    }

    #[test]
    fn json_is_deterministic() {
        let e = &(&z(5).scale(&rat(2)) + &MzvExpr::unknown(Unknown::Hoffman1 { m: 1, n: 0 })) + &zeta_two_string(1);
        let j = e.to_json();
        assert_eq!(j, e.clone().to_json());
        let s = j.to_string();
        assert!(s.contains("\"coeff\":\"1/6\""), "{s}");
        assert!(s.contains("\"unknown\":[\"H(1,0)\"]"), "{s}");
    }

    fn arb_expr() -> impl Strategy<Value = MzvExpr> {
        let mono = (0u32..3, proptest::collection::vec(prop_oneof![Just(3u32), Just(5), Just(7)], 0..3), 0u32..2)
            .prop_map(|(p, mut odd, u)| {
                odd.sort_unstable();
                let unknowns = if u == 1 { vec![Unknown::Hoffman1 { m: 0, n: 0 }] } else { vec![] };
                Monomial { pi_pow: 2 * p, odd, unknowns }
            });
        proptest::collection::vec((mono, -5i64..6, 1i64..4), 0..4).prop_map(|ts| {
            let mut e = MzvExpr::zero();
            for (m, p, q) in ts {
                e.add_term(m, ratio(p, q));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn products_add_weights(a in arb_expr(), b in arb_expr()) {
            let p = &a * &b;
            for (m, _) in p.terms() {
                let ok = a.terms().any(|(ma, _)| b.terms().any(|(mb, _)| ma.weight() + mb.weight() == m.weight()));
                prop_assert!(ok);
            }
            if let (Some(wa), Some(wb)) = (a.weight(), b.weight()) {
                if !p.is_zero() {
                    prop_assert_eq!(p.weight(), Some(wa + wb));
                }
            }
        }
    }
}
