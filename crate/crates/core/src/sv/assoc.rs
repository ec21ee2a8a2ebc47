//! Exact associator coefficients `ζ(w)` (shuffle-regularised, `ζ(x0) = ζ(x1) = 0`)
//! on the word families that survive modulo `I_H` or `I_Ĥ`.
//!
//! Sources per family:
//! - `(x1x0)^n`: `(-1)^n ζ(2^{n})`;
//! - `x0(x1x0)^n`: `(-1)^n ζ₁(2^{n})`;
//! - `(x1x0)^{m+1} x0 (x1x0)^n`: `(-1)^{m+n+1} ζ(2^{m}32^{n})`;
//! - `x0(x1x0)^{m+1} x0 (x1x0)^n`: `(-1)^{m+n+1}` times the opaque `H(m,n)`;
//! - `x0x0(x1x0)^n`: a combination of the `H(m,n)` by shuffle regularisation;
//! - `(x0x1)^{m+1}(x1x0)^{n+1}`: the opaque `Hhat(m,n)`;
//! - duality `ζ(w) = (-1)^{|w|} ζ(dual w)` for `x1(x0x1)^n` and the `x1x1`
//!   words starting in x1 and ending in x0;
//! - `(x0x1)^n` from the inversion relation `Z · Z̃(-x0,-x1) = 1`.

use crate::mzv::{hoffman_232, rat, zeta1_two_string, zeta_two_string, MzvExpr, Unknown};
use crate::word::{classify, HoffmanClass, Mode, Word};

fn sign(n: usize) -> i64 {
    if n.is_multiple_of(2) { 1 } else { -1 }
}

/// Alternating word of length `len` starting with `first`.
pub fn alternating(first: u8, len: usize) -> Word {
    Word::from_letters(&(0..len).map(|k| first ^ (k as u8 & 1)).collect::<Vec<_>>())
}

/// `ζ(w)` for the supported families, `None` otherwise.
pub fn assoc_coeff(w: Word) -> Option<MzvExpr> {
    if w.is_empty() {
        return Some(MzvExpr::one());
    }
    if w.len() == 1 {
        return Some(MzvExpr::zero());
    }
    let n = w.len();
    if w.is_alternating() {
        let (first, last) = (w.at(0), w.at(n - 1));
        return Some(match (first, last) {
            (1, 0) => zeta_two_string((n / 2) as u32).scale(&rat(sign(n / 2))),
            (0, 0) => zeta1_two_string((n / 2) as u32).scale(&rat(sign(n / 2))),
            (1, 1) => assoc_coeff(w.dual())?.scale(&rat(sign(n))),
            _ => zeta_x0x1_power(n / 2),
        });
    }
    if let HoffmanClass::Basis { level: 1, ends: Some((first, 0)), .. } = classify(w, Mode::B0) {
        let p = pair_position(w, 0);
        // Left part ends at the first letter of the x0x0 pair.
        let left = p + 1;
        let right = n - left;
        return Some(match first {
            1 => {
                let (m, k) = ((left / 2 - 1) as u32, (right / 2) as u32);
                hoffman_232(m, k).scale(&rat(sign((m + k + 1) as usize)))
            }
            _ if left == 1 => {
                // ζ(x0) ζ(x0(x1x0)^n) = 0 spreads over the words with the
                // doubled x0 at each x0 of x0(x1x0)^n, so
                // ζ(x0x0(x1x0)^n) = -(-1)^n Σ_{k=1}^{n} H(k-1, n-k).
                let k = (right / 2) as u32;
                let mut out = MzvExpr::zero();
                for i in 1..=k {
                    out -= &MzvExpr::unknown(Unknown::Hoffman1 { m: i - 1, n: k - i });
                }
                out.scale(&rat(sign(k as usize)))
            }
            _ => {
                let (m, k) = (((left - 1) / 2 - 1) as u32, (right / 2) as u32);
                MzvExpr::unknown(Unknown::Hoffman1 { m, n: k }).scale(&rat(sign((m + k + 1) as usize)))
            }
        });
    }
    if let HoffmanClass::Basis { level: 1, ends: Some((first, 0)), .. } = classify(w, Mode::B1) {
        return Some(match first {
            1 => assoc_coeff(w.dual())?.scale(&rat(sign(n))),
            _ => {
                let p = pair_position(w, 1);
                let a = p.div_ceil(2);
                let b = (n - a * 2) / 2;
                MzvExpr::unknown(Unknown::DualSingular { m: (a - 1) as u32, n: (b - 1) as u32 })
            }
        });
    }
    None
}

fn pair_position(w: Word, letter: u8) -> usize {
    (0..w.len() - 1).find(|&k| w.at(k) == letter && w.at(k + 1) == letter).expect("word has a doubled letter")
}

/// `ζ((x0x1)^n)` from the alternating part of the inversion relation:
/// splitting `(x0x1)^n = u v` gives
/// `Σ_k ζ((x0x1)^k) ζ((x1x0)^{n-k}) - Σ_k ζ(x0(x1x0)^k) ζ(x1(x0x1)^{n-k-1}) = 0`.
pub fn zeta_x0x1_power(n: usize) -> MzvExpr {
    let mut vals: Vec<MzvExpr> = vec![MzvExpr::one()];
    for t in 1..=n {
        let mut acc = MzvExpr::zero();
        for (k, v) in vals.iter().enumerate() {
            let even = assoc_coeff(alternating(1, 2 * (t - k))).expect("alternating");
            acc -= &(v * &even);
            let a = assoc_coeff(alternating(0, 2 * k + 1)).expect("alternating");
            let b = assoc_coeff(alternating(1, 2 * (t - k - 1) + 1)).expect("alternating");
            acc += &(&a * &b);
        }
        vals.push(acc);
    }
    vals.swap_remove(n)
}
