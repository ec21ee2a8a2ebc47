//! Words over the two-letter alphabet {x0, x1}, the shuffle Hopf algebra and
//! the Hoffman-type word classes.
//!
//! A word is packed left-aligned into a `u64`: the leftmost letter occupies
//! bit 63. Comparing `(bits, len)` lexicographically is then exactly the
//! lexicographic word order with x0 < x1, shorter prefixes first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// Longest representable word.
pub const MAX_LEN: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    len: u8,
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    pub fn letter(i: u8) -> Word {
        assert!(i < 2);
        Word { bits: (i as u64) << 63, len: 1 }
    }

    pub fn from_letters(letters: &[u8]) -> Word {
        assert!(letters.len() <= MAX_LEN, "word longer than {MAX_LEN}");
        let mut bits = 0u64;
        for (k, &l) in letters.iter().enumerate() {
            assert!(l < 2);
            bits |= (l as u64) << (63 - k);
        }
        Word { bits, len: letters.len() as u8 }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `k` (0 = leftmost).
    pub fn at(&self, k: usize) -> u8 {
        debug_assert!(k < self.len());
        ((self.bits >> (63 - k)) & 1) as u8
    }

    pub fn first(&self) -> Option<u8> {
        (!self.is_empty()).then(|| self.at(0))
    }

    pub fn last(&self) -> Option<u8> {
        (!self.is_empty()).then(|| self.at(self.len() - 1))
    }

    pub fn letters(&self) -> Vec<u8> {
        (0..self.len()).map(|k| self.at(k)).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_LEN, "word longer than {MAX_LEN}");
        let shifted = if self.is_empty() { other.bits } else { other.bits >> self.len() };
        Word { bits: self.bits | shifted, len: len as u8 }
    }

    pub fn push(&self, letter: u8) -> Word {
        self.concat(&Word::letter(letter))
    }

    /// Subword `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        assert!(start <= end && end <= self.len());
        let len = end - start;
        if len == 0 {
            return Word::EMPTY;
        }
        let bits = (self.bits << start) & (u64::MAX << (64 - len));
        Word { bits, len: len as u8 }
    }

    pub fn reverse(&self) -> Word {
        if self.is_empty() {
            return *self;
        }
        Word { bits: self.bits.reverse_bits() << (64 - self.len()), len: self.len }
    }

    /// Interchange x0 and x1.
    pub fn swap_letters(&self) -> Word {
        if self.is_empty() {
            return *self;
        }
        Word { bits: !self.bits & (u64::MAX << (64 - self.len())), len: self.len }
    }

    /// The duality involution: reverse and swap letters.
    pub fn dual(&self) -> Word {
        self.reverse().swap_letters()
    }

    pub fn count(&self, letter: u8) -> usize {
        let ones = self.bits.count_ones() as usize;
        if letter == 1 { ones } else { self.len() - ones }
    }

    /// Number of (possibly overlapping) occurrences of `xa xa`.
    pub fn count_pairs(&self, a: u8) -> usize {
        (1..self.len()).filter(|&k| self.at(k - 1) == a && self.at(k) == a).count()
    }

    /// Whether `xa xa xa` occurs.
    pub fn has_triple(&self, a: u8) -> bool {
        (2..self.len()).any(|k| self.at(k - 2) == a && self.at(k - 1) == a && self.at(k) == a)
    }

    /// Index in the dense enumeration of all words: `2^len - 1 + value`.
    pub fn dense_index(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        ((1usize << self.len()) - 1) + (self.bits >> (64 - self.len())) as usize
    }

    pub fn from_dense_index(idx: usize) -> Word {
        let len = (usize::BITS - (idx + 1).leading_zeros() - 1) as usize;
        let value = (idx + 1 - (1usize << len)) as u64;
        if len == 0 {
            return Word::EMPTY;
        }
        Word { bits: value << (64 - len), len: len as u8 }
    }

    /// All words of length exactly `n`, in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word> {
        assert!(n < 32);
        (0u64..(1u64 << n)).map(move |v| Word { bits: if n == 0 { 0 } else { v << (64 - n) }, len: n as u8 })
    }

    /// `(x_a x_b)^k`.
    pub fn alternating_pairs(a: u8, b: u8, k: usize) -> Word {
        let mut letters = Vec::with_capacity(2 * k);
        for _ in 0..k {
            letters.push(a);
            letters.push(b);
        }
        Word::from_letters(&letters)
    }

    /// Whether no two adjacent letters coincide.
    pub fn is_alternating(&self) -> bool {
        (1..self.len()).all(|k| self.at(k - 1) != self.at(k))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len() {
            write!(f, "{}", self.at(k))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word, Error> {
        if s.len() > MAX_LEN {
            return Err(Error::Parse(format!("word longer than {MAX_LEN} letters")));
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => letters.push(0),
                '1' => letters.push(1),
                _ => return Err(Error::Parse(format!("invalid letter {c:?} in word {s:?}"))),
            }
        }
        Ok(Word::from_letters(&letters))
    }
}

/// Shorthand used heavily in tests: `w("0101")`.
pub fn w(s: &str) -> Word {
    s.parse().expect("valid word literal")
}

/// A finite rational linear combination of words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordPoly {
    terms: BTreeMap<Word, BigRational>,
}

impl WordPoly {
    pub fn zero() -> Self {
        WordPoly::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut p = WordPoly::zero();
        p.add_term(w, BigRational::one());
        p
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&mut self, other: &WordPoly) {
        for (w, c) in &other.terms {
            self.add_term(*w, c.clone());
        }
    }

    pub fn coeff(&self, w: &Word) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients.
    pub fn mass(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn shuffle(&self, other: &WordPoly) -> WordPoly {
        let mut out = WordPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                for (x, n) in shuffle(*u, *v).terms {
                    out.add_term(x, n * a * b);
                }
            }
        }
        out
    }
}

/// Shuffle product of two words.
pub fn shuffle(u: Word, v: Word) -> WordPoly {
    let mut counts: BTreeMap<Word, u64> = BTreeMap::new();
    shuffle_into(u, v, &mut counts);
    let mut out = WordPoly::zero();
    for (x, n) in counts {
        out.add_term(x, BigRational::from_integer(BigInt::from(n)));
    }
    out
}

/// Shuffle multiplicities as machine integers.
pub fn shuffle_counts(u: Word, v: Word) -> BTreeMap<Word, u64> {
    let mut counts = BTreeMap::new();
    shuffle_into(u, v, &mut counts);
    counts
}

fn shuffle_into(u: Word, v: Word, out: &mut BTreeMap<Word, u64>) {
    // Peel the last letter: (u a) ш (v b) = (u ш v b) a + (u a ш v) b.
    // Memoised on suffix lengths to keep the recursion polynomial.
    let (m, n) = (u.len(), v.len());
    let mut table: Vec<Vec<BTreeMap<Word, u64>>> = vec![vec![BTreeMap::new(); n + 1]; m + 1];
    for i in 0..=m {
        for j in 0..=n {
            let mut cell = BTreeMap::new();
            if i == 0 {
                cell.insert(v.slice(0, j), 1);
            } else if j == 0 {
                cell.insert(u.slice(0, i), 1);
            } else {
                let a = u.at(i - 1);
                let b = v.at(j - 1);
                for (x, c) in &table[i - 1][j] {
                    *cell.entry(x.push(a)).or_insert(0) += c;
                }
                for (x, c) in &table[i][j - 1] {
                    *cell.entry(x.push(b)).or_insert(0) += c;
                }
            }
            table[i][j] = cell;
        }
    }
    for (x, c) in std::mem::take(&mut table[m][n]) {
        *out.entry(x).or_insert(0) += c;
    }
}

/// All splittings `w = u v`, left to right.
pub fn deconcatenations(w: Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|k| (w.slice(0, k), w.slice(k, w.len()))).collect()
}

/// All splittings `w = u1 u2 u3`.
pub fn triple_splittings(w: Word) -> Vec<(Word, Word, Word)> {
    let n = w.len();
    let mut out = Vec::with_capacity((n + 1) * (n + 2) / 2);
    for i in 0..=n {
        for j in i..=n {
            out.push((w.slice(0, i), w.slice(i, j), w.slice(j, n)));
        }
    }
    out
}

/// The antipode on a word: `(-1)^{|w|}` times the reversed word.
pub fn antipode(w: Word) -> (i8, Word) {
    let sign = if w.len().is_multiple_of(2) { 1 } else { -1 };
    (sign, w.reverse())
}

/// Which Hoffman-type class a word is tested against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    /// No x1x1, no x0x0x0, at most one x0x0.
    B0,
    /// Letters swapped: no x0x0, no x1x1x1, at most one x1x1.
    B1,
}

impl Mode {
    /// The letter whose doubled occurrences carry the level.
    pub fn heavy(self) -> u8 {
        match self {
            Mode::B0 => 0,
            Mode::B1 => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HoffmanClass {
    /// Basis word with `level` doubled heavy letters; `ends` are the first and
    /// last letters, `None` for the empty word.
    Basis { mode: Mode, level: u8, ends: Option<(u8, u8)> },
    /// In the ideal `I_H` (mode B0) or `I_Ĥ` (mode B1).
    Ideal(Mode),
}

impl HoffmanClass {
    pub fn is_basis(&self) -> bool {
        matches!(self, HoffmanClass::Basis { .. })
    }

    pub fn level(&self) -> Option<u8> {
        match self {
            HoffmanClass::Basis { level, .. } => Some(*level),
            HoffmanClass::Ideal(_) => None,
        }
    }
}

pub fn classify(w: Word, mode: Mode) -> HoffmanClass {
    let heavy = mode.heavy();
    let light = 1 - heavy;
    let doubled = w.count_pairs(heavy);
    if w.count_pairs(light) > 0 || doubled > 1 {
        return HoffmanClass::Ideal(mode);
    }
    let ends = w.first().map(|a| (a, w.last().unwrap()));
    HoffmanClass::Basis { mode, level: doubled as u8, ends }
}

pub fn in_basis(w: Word, mode: Mode) -> bool {
    let heavy = mode.heavy();
    w.count_pairs(1 - heavy) == 0 && w.count_pairs(heavy) <= 1
}

/// Basis words of the given length, ordered by level and then
/// lexicographically.
pub fn enumerate_basis(mode: Mode, weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if weight == 0 {
        return vec![Word::EMPTY];
    }
    // Alternating words: two per length.
    for a in 0..2u8 {
        out.push(Word::from_letters(&(0..weight).map(|k| a ^ (k as u8 & 1)).collect::<Vec<_>>()));
    }
    out.sort();
    // Level one: exactly one doubled heavy letter at position (p, p+1),
    // alternating elsewhere.
    let heavy = mode.heavy();
    let mut level1 = Vec::new();
    for p in 0..weight.saturating_sub(1) {
        let mut letters = vec![0u8; weight];
        letters[p] = heavy;
        letters[p + 1] = heavy;
        for k in (0..p).rev() {
            letters[k] = 1 - letters[k + 1];
        }
        for k in p + 2..weight {
            letters[k] = 1 - letters[k - 1];
        }
        level1.push(Word::from_letters(&letters));
    }
    level1.sort();
    out.extend(level1);
    out
}

/// All basis words of length at most `max_weight`.
pub fn basis_up_to(mode: Mode, max_weight: usize) -> Vec<Word> {
    (0..=max_weight).flat_map(|n| enumerate_basis(mode, n)).collect()
}

/// Sign helper for `(-1)^n` as a rational.
pub fn sign_rat(n: usize) -> BigRational {
    if n.is_multiple_of(2) { BigRational::one() } else { -BigRational::one() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn brute_shuffle(u: &[u8], v: &[u8]) -> BTreeMap<Word, u64> {
        // Enumerate interleavings as position subsets.
        let n = u.len() + v.len();
        let mut out = BTreeMap::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != u.len() {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut letters = Vec::with_capacity(n);
            for k in 0..n {
                if mask >> k & 1 == 1 {
                    letters.push(u[i]);
                    i += 1;
                } else {
                    letters.push(v[j]);
                    j += 1;
                }
            }
            *out.entry(Word::from_letters(&letters)).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["", "0", "1", "0110", "10101010100"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!("012".parse::<Word>().is_err());
    }

    #[test]
    fn order_is_lexicographic() {
        let mut ws = [w("1"), w("01"), w("0"), w(""), w("00"), w("10")];
        ws.sort();
        let s: Vec<String> = ws.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["", "0", "00", "01", "1", "10"]);
    }

    #[test]
    fn shuffle_small_cases() {
        let p = shuffle(w("0"), w("1"));
        assert_eq!(p.coeff(&w("01")), rat(1));
        assert_eq!(p.coeff(&w("10")), rat(1));
        assert_eq!(p.len(), 2);
        assert_eq!(shuffle(w("0"), w("0")).coeff(&w("00")), rat(2));
        let p = shuffle(w("01"), w("0"));
        assert_eq!(p.coeff(&w("010")), rat(1));
        assert_eq!(p.coeff(&w("001")), rat(2));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn shuffle_matches_interleaving_oracle_exhaustively() {
        for lu in 0..=4 {
            for lv in 0..=4 {
                for u in Word::all_of_length(lu) {
                    for v in Word::all_of_length(lv) {
                        assert_eq!(shuffle_counts(u, v), brute_shuffle(&u.letters(), &v.letters()));
                    }
                }
            }
        }
    }

    #[test]
    fn deconcatenation_examples() {
        assert_eq!(deconcatenations(w("01")), vec![(w(""), w("01")), (w("0"), w("1")), (w("01"), w(""))]);
        assert_eq!(deconcatenations(w("")), vec![(w(""), w(""))]);
        assert_eq!(deconcatenations(w("010")).len(), 4);
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode(w("01")), (1, w("10")));
        assert_eq!(antipode(w("0")), (-1, w("0")));
        assert_eq!(antipode(w("011")), (-1, w("110")));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(w("11"), Mode::B0), HoffmanClass::Ideal(Mode::B0));
        assert_eq!(
            classify(w("0100"), Mode::B0),
            HoffmanClass::Basis { mode: Mode::B0, level: 1, ends: Some((0, 0)) }
        );
        assert_eq!(classify(w("00100"), Mode::B0), HoffmanClass::Ideal(Mode::B0));
        assert_eq!(classify(w("000"), Mode::B0), HoffmanClass::Ideal(Mode::B0));
        assert_eq!(classify(w("0"), Mode::B0).level(), Some(0));
        assert_eq!(classify(w("1101"), Mode::B1).level(), Some(1));
        assert_eq!(classify(w("00"), Mode::B1), HoffmanClass::Ideal(Mode::B1));
    }

    #[test]
    fn enumerate_basis_examples() {
        assert_eq!(enumerate_basis(Mode::B0, 0), vec![w("")]);
        assert_eq!(enumerate_basis(Mode::B0, 2), vec![w("01"), w("10"), w("00")]);
        assert_eq!(enumerate_basis(Mode::B0, 3), vec![w("010"), w("101"), w("001"), w("100")]);
        assert_eq!(enumerate_basis(Mode::B1, 2), vec![w("01"), w("10"), w("11")]);
    }

    #[test]
    fn basis_counts_match_brute_force() {
        for mode in [Mode::B0, Mode::B1] {
            for n in 0..=14 {
                let brute: Vec<Word> = Word::all_of_length(n).filter(|&x| classify(x, mode).is_basis()).collect();
                let mut listed = enumerate_basis(mode, n);
                assert_eq!(listed.len(), brute.len(), "mode {mode:?} n {n}");
                listed.sort();
                assert_eq!(listed, brute);
            }
        }
    }

    #[test]
    fn hopf_compatibility_exhaustive() {
        // Δ(u ш v) = Δ(u) ш Δ(v), compared as maps (left, right) -> coefficient.
        for total in 0..=6 {
            for lu in 0..=total {
                let lv = total - lu;
                for u in Word::all_of_length(lu) {
                    for v in Word::all_of_length(lv) {
                        let mut lhs: BTreeMap<(Word, Word), u64> = BTreeMap::new();
                        for (x, c) in shuffle_counts(u, v) {
                            for (a, b) in deconcatenations(x) {
                                *lhs.entry((a, b)).or_insert(0) += c;
                            }
                        }
                        let mut rhs: BTreeMap<(Word, Word), u64> = BTreeMap::new();
                        for (u1, u2) in deconcatenations(u) {
                            for (v1, v2) in deconcatenations(v) {
                                for (a, ca) in shuffle_counts(u1, v1) {
                                    for (b, cb) in shuffle_counts(u2, v2) {
                                        *rhs.entry((a, b)).or_insert(0) += ca * cb;
                                    }
                                }
                            }
                        }
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn dense_index_round_trip() {
        for idx in 0..2047 {
            let x = Word::from_dense_index(idx);
            assert_eq!(x.dense_index(), idx);
        }
        assert_eq!(w("").dense_index(), 0);
        assert_eq!(w("1").dense_index(), 2);
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..2, 0..=max).prop_map(|v| Word::from_letters(&v))
    }

    proptest! {
        #[test]
        fn shuffle_commutes(u in arb_word(8), v in arb_word(8)) {
            prop_assert_eq!(shuffle_counts(u, v), shuffle_counts(v, u));
        }

        #[test]
        fn shuffle_associates(u in arb_word(4), v in arb_word(4), x in arb_word(4)) {
            let a = shuffle(u, v).shuffle(&WordPoly::from_word(x));
            let b = WordPoly::from_word(u).shuffle(&shuffle(v, x));
            prop_assert_eq!(a, b);
        }

        #[test]
        fn shuffle_mass_is_binomial(u in arb_word(8), v in arb_word(8)) {
            let mass: u64 = shuffle_counts(u, v).values().sum();
            prop_assert_eq!(mass, num_integer::binomial((u.len() + v.len()) as u64, u.len() as u64));
        }

        #[test]
        fn reverse_is_involution(u in arb_word(40)) {
            prop_assert_eq!(u.reverse().reverse(), u);
            prop_assert_eq!(u.dual().dual(), u);
        }

        #[test]
        fn classify_stable_under_reversal_and_swaps_modes(u in arb_word(16)) {
            for mode in [Mode::B0, Mode::B1] {
                prop_assert_eq!(classify(u, mode).level(), classify(u.reverse(), mode).level());
            }
            prop_assert_eq!(classify(u, Mode::B0).level(), classify(u.swap_letters(), Mode::B1).level());
        }

        #[test]
        fn slice_concat_round_trip(u in arb_word(30), k in 0usize..31) {
            let k = k.min(u.len());
            prop_assert_eq!(u.slice(0, k).concat(&u.slice(k, u.len())), u);
        }
    }
}
