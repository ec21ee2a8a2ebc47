//! Dense complex series over all words of length at most `cutoff`.
//!
//! Word `u` of length `ℓ` and binary value `v` (x0 = 0, x1 = 1, first letter
//! most significant) sits at index `2^ℓ - 1 + v`, the same layout as
//! [`Word::dense_index`]. Appending `x_a` maps index `i` to `2i + 1 + a`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::NcSeries;
use crate::word::{shuffle_counts, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct CSeries {
    cutoff: usize,
    c: Vec<Complex64>,
}

pub(crate) fn size(cutoff: usize) -> usize {
    (1usize << (cutoff + 1)) - 1
}

fn index(len: usize, value: usize) -> usize {
    (1usize << len) - 1 + value
}

impl CSeries {
    pub fn zero(cutoff: usize) -> Self {
        CSeries { cutoff, c: vec![Complex64::new(0.0, 0.0); size(cutoff)] }
    }

    pub fn one(cutoff: usize) -> Self {
        let mut s = Self::zero(cutoff);
        s.c[0] = Complex64::new(1.0, 0.0);
        s
    }

    pub(crate) fn from_vec(cutoff: usize, c: Vec<Complex64>) -> Self {
        assert_eq!(c.len(), size(cutoff));
        CSeries { cutoff, c }
    }

    /// Numeric image of an exact series; fails on unassigned symbols.
    pub fn from_series(s: &NcSeries, cutoff: usize) -> Result<Self> {
        let mut out = Self::zero(cutoff);
        for (w, e) in s.terms() {
            if w.len() <= cutoff {
                out.c[w.dense_index()] = Complex64::new(e.numeric(15, None)?, 0.0);
            }
        }
        Ok(out)
    }

    /// `exp(c · x_a)`.
    pub fn exp_letter(a: u8, c: Complex64, cutoff: usize) -> Self {
        let mut out = Self::zero(cutoff);
        let mut term = Complex64::new(1.0, 0.0);
        let mut w = Word::EMPTY;
        for k in 0..=cutoff {
            out.c[w.dense_index()] = term;
            term *= c / (k as f64 + 1.0);
            w = w.push(a);
        }
        out
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeff(&self, w: Word) -> Result<Complex64> {
        if w.len() > self.cutoff {
            return Err(Error::CutoffTooSmall { have: self.cutoff, need: w.len() });
        }
        Ok(self.c[w.dense_index()])
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.c
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, Complex64)> + '_ {
        self.c.iter().enumerate().map(|(i, v)| (Word::from_dense_index(i), *v))
    }

    pub fn conj(&self) -> Self {
        CSeries { cutoff: self.cutoff, c: self.c.iter().map(|v| v.conj()).collect() }
    }

    /// Reverse every word.
    pub fn reverse(&self) -> Self {
        self.permute(|w| w.reverse())
    }

    /// Interchange x0 and x1.
    pub fn swap_letters(&self) -> Self {
        self.permute(|w| w.swap_letters())
    }

    fn permute(&self, f: impl Fn(Word) -> Word) -> Self {
        let mut out = Self::zero(self.cutoff);
        for (i, v) in self.c.iter().enumerate() {
            out.c[f(Word::from_dense_index(i)).dense_index()] = *v;
        }
        out
    }

    /// `S⁻¹ = S̃(-x0, -x1)`, valid for group-like `S`.
    pub fn grouplike_inverse(&self) -> Self {
        let mut out = self.reverse();
        for len in (1..=self.cutoff).step_by(2) {
            for v in &mut out.c[index(len, 0)..index(len + 1, 0)] {
                *v = -*v;
            }
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        CSeries { cutoff: self.cutoff, c: self.c.iter().map(|v| v * k).collect() }
    }

    /// Truncated concatenation product.
    pub fn mul(&self, other: &CSeries) -> CSeries {
        assert_eq!(self.cutoff, other.cutoff);
        let n = self.cutoff;
        let mut out = Self::zero(n);
        for p in 0..=n {
            for q in 0..=n - p {
                let (a, b) = (&self.c[index(p, 0)..index(p + 1, 0)], &other.c[index(q, 0)..index(q + 1, 0)]);
                let base = index(p + q, 0);
                for (u, x) in a.iter().enumerate() {
                    if x.re == 0.0 && x.im == 0.0 {
                        continue;
                    }
                    let row = &mut out.c[base + (u << q)..base + ((u + 1) << q)];
                    for (r, y) in row.iter_mut().zip(b) {
                        *r += x * y;
                    }
                }
            }
        }
        out
    }

    /// `out += k · self · x_a`, dropping words beyond the cutoff.
    pub(crate) fn add_times_letter(&self, a: u8, k: Complex64, out: &mut CSeries) {
        let top = index(self.cutoff, 0);
        for (i, v) in self.c[..top].iter().enumerate() {
            out.c[2 * i + 1 + a as usize] += k * v;
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `S_u S_v = S_{u ⧢ v}` over all `|u| + |v| ≤ max`,
    /// relative to `max(1, |S_u S_v|)`.
    pub fn shuffle_defect(&self, max: usize) -> f64 {
        let max = max.min(self.cutoff);
        let mut worst: f64 = 0.0;
        for p in 1..=max {
            for q in p..=max - p {
                for u in Word::all_of_length(p) {
                    for v in Word::all_of_length(q) {
                        let lhs = self.c[u.dense_index()] * self.c[v.dense_index()];
                        let rhs: Complex64 =
                            shuffle_counts(u, v).iter().map(|(x, k)| self.c[x.dense_index()] * (*k as f64)).sum();
                        worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
                    }
                }
            }
        }
        worst
    }
}

impl Index<Word> for CSeries {
    type Output = Complex64;
    fn index(&self, w: Word) -> &Complex64 {
        &self.c[w.dense_index()]
    }
}

impl IndexMut<Word> for CSeries {
    fn index_mut(&mut self, w: Word) -> &mut Complex64 {
        &mut self.c[w.dense_index()]
    }
}

impl Add for &CSeries {
    type Output = CSeries;
    fn add(self, rhs: &CSeries) -> CSeries {
        assert_eq!(self.cutoff, rhs.cutoff);
        CSeries { cutoff: self.cutoff, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CSeries {
    type Output = CSeries;
    fn sub(self, rhs: &CSeries) -> CSeries {
        assert_eq!(self.cutoff, rhs.cutoff);
        CSeries { cutoff: self.cutoff, c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &CSeries {
    type Output = CSeries;
    fn mul(self, rhs: &CSeries) -> CSeries {
        CSeries::mul(self, rhs)
    }
}
