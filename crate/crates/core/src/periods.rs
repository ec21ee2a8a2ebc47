//! Zig-zag periods: the closed form, the extraction from `S`/`Ŝ`, and the
//! numeric limit of `f_{2w}` at the origin.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mzv::MzvExpr;
use crate::polylog::SvEvaluator;
use crate::sv::assoc::alternating;
use crate::sv::{s10_word, shat10_word, SeriesBundle};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodSource {
    FromS,
    ClosedForm,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodResult {
    pub n: usize,
    /// `q · ζ(2n-3)`.
    pub symbolic: MzvExpr,
    pub numeric: f64,
    pub source: PeriodSource,
}

impl PeriodResult {
    fn new(n: usize, symbolic: MzvExpr, source: PeriodSource) -> Result<Self> {
        let numeric = symbolic.numeric(15, None)?;
        Ok(PeriodResult { n, symbolic, numeric, source })
    }

    /// The rational `q` when the value is `q · ζ(2n-3)`.
    pub fn coefficient(&self) -> Option<BigRational> {
        match self.symbolic.as_single_zeta() {
            Some((q, s)) if s as usize == 2 * self.n - 3 => Some(q),
            _ => None,
        }
    }

    pub fn to_json(&self, matches_closed_form: bool) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "coefficient": self.coefficient().map(|q| q.to_string()),
            "zeta_weight": 2 * self.n - 3,
            "numeric": self.numeric,
            "source": self.source,
            "matches_closed_form": matches_closed_form,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("zig-zag periods start at n = 3, got {n}")));
    }
    Ok(())
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `4 (2n-2)! / (n! (n-1)!) · (1 - (1 - (-1)^n) / 2^{2n-3}) · ζ(2n-3)`.
pub fn closed_form(n: usize) -> Result<PeriodResult> {
    check_n(n)?;
    let lead = BigRational::new(factorial(2 * n - 2) * 4, factorial(n) * factorial(n - 1));
    let correction = if n.is_multiple_of(2) {
        BigRational::one()
    } else {
        BigRational::one() - BigRational::new(BigInt::from(2), BigInt::one() << (2 * n - 3))
    };
    let symbolic = MzvExpr::zeta_odd((2 * n - 3) as u32).scale(&(lead * correction));
    PeriodResult::new(n, symbolic, PeriodSource::ClosedForm)
}

fn need(bundle: &SeriesBundle, n: usize) -> Result<()> {
    check_n(n)?;
    if bundle.cutoff < 2 * n - 3 {
        return Err(Error::CutoffTooSmall { have: bundle.cutoff, need: 2 * n - 3 });
    }
    Ok(())
}

/// The period read off the parametrised coefficients: for even `n`,
/// `-S¹₁₀((n-2)/2, (n-2)/2) + S¹₁₀(n/2, (n-4)/2)`; for odd `n`,
/// `Ŝ¹₁₀((n-1)/2, (n-3)/2) - Ŝ¹₁₀((n-3)/2, (n-1)/2)`.
pub fn period_from_s(bundle: &SeriesBundle, n: usize) -> Result<PeriodResult> {
    need(bundle, n)?;
    let symbolic = if n.is_multiple_of(2) {
        let (a, b) = (s10_word((n - 2) / 2, (n - 2) / 2), s10_word(n / 2, (n - 4) / 2));
        &bundle.s.coeff(&b) - &bundle.s.coeff(&a)
    } else {
        let (a, b) = (shat10_word((n - 1) / 2, (n - 3) / 2), shat10_word((n - 3) / 2, (n - 1) / 2));
        &bundle.shat.coeff(&a) - &bundle.shat.coeff(&b)
    };
    PeriodResult::new(n, symbolic, PeriodSource::FromS)
}

/// The alternating word of length `n - 2` ending in x1.
pub fn zigzag_word(n: usize) -> Word {
    alternating(if n.is_multiple_of(2) { 0 } else { 1 }, n - 2)
}

/// Regularised `f_{2w}(0)` for alternating `w` ending in x1: with
/// `w̃ x0 x1 w = x1 u x1` it is `-S_{x1u} + S_{ux1}` when `w` starts with x0
/// and `Ŝ_{x1u} - Ŝ_{ux1}` when it starts with x1.
pub fn reg_value_at_zero(bundle: &SeriesBundle, w: Word) -> Result<MzvExpr> {
    if !w.is_alternating() || w.last() != Some(1) {
        return Err(Error::InvalidArgument(format!("{w} is not alternating ending in x1")));
    }
    need(bundle, w.len() + 2)?;
    let (v, _) = SvEvaluator::f2w_word(w)?;
    let head = v.slice(0, v.len() - 1);
    let tail = v.slice(1, v.len());
    Ok(if w.first() == Some(0) {
        &bundle.s.coeff(&tail) - &bundle.s.coeff(&head)
    } else {
        &bundle.shat.coeff(&head) - &bundle.shat.coeff(&tail)
    })
}

/// Numeric limit of `f_{2w}(δ e^{iπ/4})` as `δ → 0` by Neville
/// extrapolation in `δ` over `δ ∈ {10⁻³, 10⁻⁴, 10⁻⁵}`; also returns the
/// change from the two-point to the three-point extrapolant.
///
/// The remainder is `a δ + δ² (b + c log δ + …)`, so the extrapolant is left
/// with `O(δ² log δ)`; smaller `δ` keep that below 1e-6.
pub fn f2w_limit_at_zero(ev: &SvEvaluator, w: Word) -> Result<(f64, f64)> {
    let deltas = [1e-3, 1e-4, 1e-5];
    let mut table = Vec::new();
    for d in deltas {
        table.push(ev.eval_f2w(w, Complex64::from_polar(d, std::f64::consts::FRAC_PI_4))?);
    }
    // Neville's scheme evaluated at δ = 0.
    let mut p = table.clone();
    let mut previous = p[p.len() - 1];
    for level in 1..deltas.len() {
        for i in (level..deltas.len()).rev() {
            let (di, dj) = (deltas[i], deltas[i - level]);
            p[i] = (p[i] * dj - p[i - 1] * di) / (dj - di);
        }
        if level + 1 < deltas.len() {
            previous = p[deltas.len() - 1];
        }
    }
    let best = p[deltas.len() - 1];
    Ok((best, (best - previous).abs()))
}

/// Whether the two exact values agree and are a rational multiple of
/// `ζ(2n-3)` whose denominator is a power of two (trivial for even `n`).
pub fn is_valid_period(r: &PeriodResult) -> bool {
    let Some(q) = r.coefficient() else { return false };
    let d = q.denom().clone();
    let pow2 = d.is_positive() && (&d & (&d - BigInt::one())) == BigInt::from(0);
    pow2 && (r.n % 2 == 1 || d == BigInt::one())
}
