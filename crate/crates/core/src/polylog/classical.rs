//! Classical dilogarithm and the Bloch–Wigner function, independent of the
//! word machinery; they serve as oracles for it.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::mzv::zeta_numeric;

/// Catalan's constant.
pub const CATALAN: f64 = 0.915_965_594_177_219_015_054_603_514_932_384_110_774;

/// Principal branch `Li₂(z)`, cut along `[1, ∞)`.
pub fn li2(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z == one {
        return Complex64::new(PI * PI / 6.0, 0.0);
    }
    if z.norm() > 1.0 {
        // Li₂(z) = -Li₂(1/z) - π²/6 - ½ log²(-z).
        let l = (-z).ln();
        return -li2(one / z) - PI * PI / 6.0 - 0.5 * l * l;
    }
    if z.re > 0.5 {
        // Li₂(z) = -Li₂(1-z) + π²/6 - log z log(1-z).
        return -li2(one - z) + PI * PI / 6.0 - z.ln() * (one - z).ln();
    }
    bernoulli_series(-(one - z).ln())
}

/// `Σ_n B_n u^{n+1}/(n+1)!` for `|u| < 2π`, using
/// `B_{2k}/(2k+1)! = (-1)^{k+1} 2 ζ(2k) / ((2k+1)(2π)^{2k})`.
fn bernoulli_series(u: Complex64) -> Complex64 {
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut pow = u;
    for k in 1..40u32 {
        pow *= u2;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let c = sign * 2.0 * zeta_numeric(2 * k) / ((2 * k + 1) as f64 * (2.0 * PI).powi(2 * k as i32));
        let term = pow * c;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// `D(z) = Im(Li₂(z) + log|z| log(1-z))`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    // D vanishes on the real line, where the two branch cuts would need a
    // matching side convention.
    if z.im == 0.0 {
        return 0.0;
    }
    let one = Complex64::new(1.0, 0.0);
    li2(z).im + z.norm().ln() * (one - z).arg()
}
