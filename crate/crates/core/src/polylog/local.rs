//! Expansion of `L(z)` at the origin: `L(z) = exp(x0 log z) h(z)` with
//! `h(z) = Σ_k h_k z^k`, `h_0 = 1`.
//!
//! Inserting into `L' = L (x0/z + x1/(z-1))` gives
//! `k h_k - (h_k x0 - x0 h_k) = -(h_0 + … + h_{k-1}) x1`,
//! which fixes `h_k` word by word in order of increasing length.

use num_complex::Complex64;

use super::cseries::{size, CSeries};
use crate::error::{Error, Result};

/// Radius of the disk on which [`LogTaylor::eval`] is used.
pub const LOCAL_RADIUS: f64 = 0.75;
const TERMS: usize = 220;

#[derive(Clone, Debug)]
pub struct LogTaylor {
    cutoff: usize,
    /// `h[k]` in the dense word layout.
    h: Vec<Vec<f64>>,
}

impl LogTaylor {
    pub fn new(cutoff: usize) -> Self {
        let n = size(cutoff);
        let mut h = vec![vec![0.0; n]];
        h[0][0] = 1.0;
        // Running sum h_0 + … + h_{k-1}.
        let mut partial = h[0].clone();
        for k in 1..TERMS {
            let mut hk = vec![0.0; n];
            let kf = k as f64;
            for i in 1..n {
                let len = usize::BITS - (i + 1).leading_zeros() - 1;
                let value = i + 1 - (1 << len);
                let last = value & 1;
                let parent = (i - 1 - last) / 2;
                let mut r = if last == 1 { -partial[parent] } else { hk[parent] };
                if value >> (len - 1) == 0 {
                    // Leading x0: drop it.
                    r -= hk[i - (1 << (len - 1))];
                }
                hk[i] = r / kf;
            }
            for (p, x) in partial.iter_mut().zip(&hk) {
                *p += x;
            }
            h.push(hk);
        }
        LogTaylor { cutoff, h }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `h(z)` by Horner's rule, with the modulus of the first omitted term
    /// scaled by the geometric tail as an error estimate.
    pub fn eval_h(&self, z: Complex64) -> (CSeries, f64) {
        let n = size(self.cutoff);
        let mut acc = vec![Complex64::new(0.0, 0.0); n];
        for hk in self.h.iter().rev() {
            for (a, x) in acc.iter_mut().zip(hk) {
                *a = *a * z + x;
            }
        }
        let r = z.norm();
        let last = self.h[TERMS - 1].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let tail = last * r.powi(TERMS as i32) / (1.0 - r);
        (CSeries::from_vec(self.cutoff, acc), tail)
    }

    /// `L(z)` on the principal branch of `log z`.
    pub fn eval(&self, z: Complex64) -> Result<(CSeries, f64)> {
        let r = z.norm();
        if r.is_nan() || r > LOCAL_RADIUS || r == 0.0 {
            return Err(Error::OutOfDomain(format!("{z}")));
        }
        let (h, tail) = self.eval_h(z);
        let lead = CSeries::exp_letter(0, z.ln(), self.cutoff);
        let scale = 1.0 + z.ln().norm().powi(self.cutoff as i32);
        Ok((lead.mul(&h), tail * scale))
    }

    /// Coefficient `h_k` of `z^k` in `h` at word index `i`.
    pub fn taylor(&self, k: usize, w: crate::word::Word) -> f64 {
        self.h[k][w.dense_index()]
    }
}
