//! Numeric single-valued functions `F_w`, `F̂_w` and `f_{2w}`.
//!
//! With `L` continued along a path `γ`, the antiholomorphic factor is `L`
//! continued along `γ̄`, which is the entrywise conjugate because the KZ
//! connection has real coefficients. So the whole generating series is
//! `F(z) = rev(conj L(z)) · S · L(z)`.

use num_complex::Complex64;
use serde::Serialize;

use super::cseries::CSeries;
use super::local::LogTaylor;
use super::transport::{l_principal, loop_path, LoopAround, Transporter, DEFAULT_CLEARANCE};
use crate::error::{Error, Result};
use crate::sv::{build_s, build_shat};
use crate::word::{in_basis, Mode, Word};

/// Which single-valued family to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SvMode {
    /// `F_w`, words in `B⁰`, built from `S`.
    F,
    /// `F̂_w`, words in `B¹`, built from `Ŝ`.
    Fhat,
}

impl SvMode {
    pub fn class(self) -> Mode {
        match self {
            SvMode::F => Mode::B0,
            SvMode::Fhat => Mode::B1,
        }
    }
}

/// Residual of one finite-difference ODE check.
#[derive(Clone, Debug, Serialize)]
pub struct OdeResidual {
    pub word: String,
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub relative: f64,
}

/// Change of `F_w` under one loop.
#[derive(Clone, Debug, Serialize)]
pub struct LoopDefect {
    pub word: String,
    pub before: (f64, f64),
    pub after: (f64, f64),
    pub absolute: f64,
    /// `absolute / |F_w|`.
    pub relative: f64,
}

fn pair(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 { 0.0 } else { d / a.norm().max(b.norm()) }
}

/// Holds the local expansion and numeric `S`, `Ŝ` at one cutoff.
#[derive(Clone, Debug)]
pub struct SvEvaluator {
    local: LogTaylor,
    s: CSeries,
    shat: CSeries,
}

impl SvEvaluator {
    pub fn new(cutoff: usize) -> Result<Self> {
        let s = CSeries::from_series(&build_s(cutoff), cutoff)?;
        let shat = CSeries::from_series(&build_shat(cutoff), cutoff)?;
        Ok(SvEvaluator { local: LogTaylor::new(cutoff), s, shat })
    }

    /// Same expansion with `S` and `Ŝ` replaced, e.g. by `1` for controls.
    pub fn with_series(&self, s: CSeries, shat: CSeries) -> Self {
        assert_eq!(s.cutoff(), self.cutoff());
        assert_eq!(shat.cutoff(), self.cutoff());
        SvEvaluator { local: self.local.clone(), s, shat }
    }

    pub fn cutoff(&self) -> usize {
        self.local.cutoff()
    }

    pub fn local(&self) -> &LogTaylor {
        &self.local
    }

    fn series(&self, mode: SvMode) -> &CSeries {
        match mode {
            SvMode::F => &self.s,
            SvMode::Fhat => &self.shat,
        }
    }

    pub fn l(&self, z: Complex64) -> Result<Transporter> {
        l_principal(&self.local, z)
    }

    /// `rev(conj l) · S · l` for a continued value `l` of `L`.
    pub fn f_from_l(&self, l: &CSeries, mode: SvMode) -> CSeries {
        l.conj().reverse().mul(self.series(mode)).mul(l)
    }

    /// The full truncated series `Σ_w F_w(z) w`.
    pub fn f_series(&self, z: Complex64, mode: SvMode) -> Result<CSeries> {
        Ok(self.f_from_l(&self.l(z)?.value, mode))
    }

    fn check_word(&self, w: Word, mode: SvMode) -> Result<()> {
        if w.len() > self.cutoff() {
            return Err(Error::CutoffTooSmall { have: self.cutoff(), need: w.len() });
        }
        if !in_basis(w, mode.class()) {
            return Err(Error::WordNotInClass { word: w.to_string(), class: format!("{:?}", mode.class()) });
        }
        Ok(())
    }

    pub fn eval_f(&self, w: Word, z: Complex64, mode: SvMode) -> Result<Complex64> {
        self.check_word(w, mode)?;
        Ok(self.f_series(z, mode)?[w])
    }

    /// `v = w̃ x0 x1 w` and the family used for `f_{2w}`.
    pub fn f2w_word(w: Word) -> Result<(Word, SvMode)> {
        if !w.is_alternating() {
            return Err(Error::InvalidArgument(format!("f_2w needs an alternating word, got {w}")));
        }
        let v = w.reverse().concat(&Word::from_letters(&[0, 1])).concat(&w);
        let mode = if w.first() == Some(1) { SvMode::Fhat } else { SvMode::F };
        Ok((v, mode))
    }

    /// `(z - z̄) f_{2w}(z) = (-1)^{|w|} (F_v - F_ṽ)`.
    pub fn f2w_numerator(&self, w: Word, z: Complex64) -> Result<Complex64> {
        let (v, mode) = Self::f2w_word(w)?;
        self.check_word(v, mode)?;
        let f = self.f_series(z, mode)?;
        let sign = if w.len().is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok((f[v] - f[v.reverse()]) * sign)
    }

    /// `f_{2w}(z)`; real for every `z` off the real axis.
    pub fn eval_f2w_complex(&self, w: Word, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Err(Error::RealAxis(format!("{z}")));
        }
        Ok(self.f2w_numerator(w, z)? / (z - z.conj()))
    }

    pub fn eval_f2w(&self, w: Word, z: Complex64) -> Result<f64> {
        Ok(self.eval_f2w_complex(w, z)?.re)
    }

    /// `∂²/∂z∂z̄ = ¼ Δ` on the whole series by the fourth-order central
    /// difference stencil with spacing `h` along both axes, plus `F(z)`.
    ///
    /// The stencil weights sum to zero, so it is applied to the increments
    /// `F(z+d) - F(z)`, which are assembled from `D = L(z+d) - L(z)` as
    /// `rev(conj D) S L + rev(conj L) S D + rev(conj D) S D` without
    /// cancellation.
    pub fn mixed_partial(&self, z: Complex64, h: f64, mode: SvMode) -> Result<(CSeries, CSeries)> {
        let l = self.l(z)?;
        let s = self.series(mode);
        let lbar = l.value.conj().reverse();
        let mut acc = CSeries::zero(self.cutoff());
        for dir in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
            for (k, wgt) in [(1.0, 16.0), (-1.0, 16.0), (2.0, -1.0), (-2.0, -1.0)] {
                let (d, _) = l.increment(dir * k);
                let dbar = d.conj().reverse();
                let sd = s.mul(&d);
                let inc = &(&dbar.mul(&s.mul(&l.value)) + &lbar.mul(&sd)) + &dbar.mul(&sd);
                acc = &acc + &inc.scale(Complex64::new(wgt, 0.0));
            }
        }
        let lap = acc.scale(Complex64::new(0.25 / (12.0 * h * h), 0.0));
        Ok((lap, self.f_from_l(&l.value, mode)))
    }

    /// `∂²F_{x_i w x_j}/∂z∂z̄` against `F_w/((z̄-i)(z-j))`.
    pub fn check_ode(&self, w: Word, i: u8, j: u8, z: Complex64, h: f64, mode: SvMode) -> Result<OdeResidual> {
        let outer = Word::letter(i).concat(&w).push(j);
        self.check_word(outer, mode)?;
        let (dd, center) = self.mixed_partial(z, h, mode)?;
        Ok(ode_residual(&dd, &center, w, i, j, z))
    }

    /// All ODE checks for class words `x_i w x_j` of length at most `max_len`
    /// at one point, sharing the finite-difference stencil.
    pub fn check_ode_all(&self, max_len: usize, z: Complex64, h: f64, mode: SvMode) -> Result<Vec<OdeResidual>> {
        let (dd, center) = self.mixed_partial(z, h, mode)?;
        let mut out = Vec::new();
        for len in 2..=max_len.min(self.cutoff()) {
            for outer in Word::all_of_length(len) {
                if in_basis(outer, mode.class()) {
                    let w = outer.slice(1, len - 1);
                    out.push(ode_residual(&dd, &center, w, outer.at(0), outer.at(len - 1), z));
                }
            }
        }
        Ok(out)
    }

    /// `-(z-z̄)⁻¹ ∂²/∂z∂z̄ [(z-z̄) f_{2wx_a}]` against `f_{2w}/((z-a)(z̄-a))`.
    pub fn check_f_ode(&self, w: Word, a: u8, z: Complex64, h: f64) -> Result<OdeResidual> {
        if z.im == 0.0 {
            return Err(Error::RealAxis(format!("{z}")));
        }
        let wa = w.push(a);
        let (v, mode) = Self::f2w_word(wa)?;
        self.check_word(v, mode)?;
        let (dd, _) = self.mixed_partial(z, h, mode)?;
        let sign = if wa.len().is_multiple_of(2) { 1.0 } else { -1.0 };
        let lap = (dd[v] - dd[v.reverse()]) * sign;
        let lhs = -lap / (z - z.conj());
        let af = a as f64;
        let rhs = self.eval_f2w_complex(w, z)? / ((z - af) * (z.conj() - af));
        Ok(OdeResidual { word: wa.to_string(), lhs: pair(lhs), rhs: pair(rhs), relative: relative(lhs, rhs) })
    }

    /// `F_w` before and after continuing `L` once around `around`.
    pub fn loop_defect(
        &self,
        w: Word,
        base: Complex64,
        around: LoopAround,
        radius: f64,
        mode: SvMode,
    ) -> Result<LoopDefect> {
        self.check_word(w, mode)?;
        let start = self.l(base)?;
        Ok(self.loop_defects(&[w], &start, around, radius, mode)?.remove(0))
    }

    /// Loop defects for many words from one transported `L`.
    pub fn loop_defects(
        &self,
        words: &[Word],
        start: &Transporter,
        around: LoopAround,
        radius: f64,
        mode: SvMode,
    ) -> Result<Vec<LoopDefect>> {
        let after = start.transported(&loop_path(start.point, around, radius, 64), DEFAULT_CLEARANCE)?;
        let f0 = self.f_from_l(&start.value, mode);
        let f1 = self.f_from_l(&after.value, mode);
        Ok(words
            .iter()
            .map(|&w| {
                let (a, b) = (f0[w], f1[w]);
                let absolute = (b - a).norm();
                LoopDefect {
                    word: w.to_string(),
                    before: pair(a),
                    after: pair(b),
                    absolute,
                    relative: if absolute == 0.0 { 0.0 } else { absolute / a.norm() },
                }
            })
            .collect())
    }
}

fn ode_residual(dd: &CSeries, center: &CSeries, w: Word, i: u8, j: u8, z: Complex64) -> OdeResidual {
    let outer = Word::letter(i).concat(&w).push(j);
    let lhs = dd[outer];
    let rhs = center[w] / ((z.conj() - i as f64) * (z - j as f64));
    OdeResidual { word: outer.to_string(), lhs: pair(lhs), rhs: pair(rhs), relative: relative(lhs, rhs) }
}
