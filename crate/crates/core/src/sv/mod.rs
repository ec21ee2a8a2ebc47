//! The series `S`, `Ŝ`, the associator families and the components of
//! `V = Z x1 Z⁻¹` modulo `I_H` and `I_Ĥ`.

pub mod assoc;
pub mod relations;
pub mod verify;

use crate::mzv::{binom, one_minus_two_pow, rat, ratio, MzvExpr};
use crate::series::{ComponentKey, NcSeries};
use crate::word::{basis_up_to, classify, w, HoffmanClass, Mode, Word};
use assoc::{alternating, assoc_coeff};
use relations::SingularRelations;

pub use verify::{verify_all, verify_identity, ResidualReport, IDENTITIES};

/// `(x1x0)^m x0 (x1x0)^n`.
pub fn s10_word(m: usize, n: usize) -> Word {
    alternating(1, 2 * m).concat(&alternating(0, 2 * n + 1))
}

/// `(x1x0)^m x1 (x1x0)^n`.
pub fn shat10_word(m: usize, n: usize) -> Word {
    alternating(1, 2 * m + 1).concat(&alternating(1, 2 * n))
}

/// `S⁰₀₀(n) = -4 ζ(2n+1)`, the coefficient of `(x0x1)^n x0`.
pub fn s00_coeff(n: u32) -> MzvExpr {
    MzvExpr::zeta_odd(2 * n + 1).scale(&rat(-4))
}

/// `S¹₁₀(m,n) = -4 C(2m+2n, 2m) ζ(2m+2n+1)` for `m ≥ 1`.
pub fn s10_coeff(m: u32, n: u32) -> MzvExpr {
    MzvExpr::zeta_odd(2 * m + 2 * n + 1).scale(&(binom(2 * m + 2 * n, 2 * m) * rat(-4)))
}

/// `Ŝ¹₁₀(m,n) = -4 (1 - 2^{-2m-2n}) C(2m+2n, 2m+1) ζ(2m+2n+1)` for `n ≥ 1`.
pub fn shat10_coeff(m: u32, n: u32) -> MzvExpr {
    let c = one_minus_two_pow(2 * m + 2 * n) * binom(2 * m + 2 * n, 2 * m + 1) * rat(-4);
    MzvExpr::zeta_odd(2 * m + 2 * n + 1).scale(&c)
}

fn s00_series(cutoff: usize) -> NcSeries {
    let mut out = NcSeries::zero(cutoff);
    for n in 1..=cutoff.saturating_sub(1) / 2 {
        out.add_term(alternating(0, 2 * n + 1), &s00_coeff(n as u32));
    }
    out
}

/// `S = 1 + S⁰₀₀ + S¹₀₁ + S¹₁₀ + S¹₀₀` truncated at `cutoff`.
pub fn build_s(cutoff: usize) -> NcSeries {
    let s0 = s00_series(cutoff);
    let mut s10 = NcSeries::zero(cutoff);
    for m in 1..=cutoff / 2 {
        for n in 0..=(cutoff.saturating_sub(2 * m + 1)) / 2 {
            if 2 * m + 2 * n < cutoff {
                s10.add_term(s10_word(m, n), &s10_coeff(m as u32, n as u32));
            }
        }
    }
    let s01 = s10.reverse();
    let s00 = s0.mul(&s0).add(&s0.mul(&s10)).add(&s01.mul(&s0)).scale(&ratio(1, 2));
    NcSeries::one(cutoff).add(&s0).add(&s10).add(&s01).add(&s00)
}

/// `Ŝ = 1 + S⁰₀₀ + Ŝ¹₀₁ + Ŝ¹₁₀ + Ŝ¹₀₀` truncated at `cutoff`.
pub fn build_shat(cutoff: usize) -> NcSeries {
    let s0 = s00_series(cutoff);
    let mut s10 = NcSeries::zero(cutoff);
    for m in 0..=cutoff / 2 {
        for n in 1..=cutoff / 2 {
            if 2 * m + 2 * n < cutoff {
                s10.add_term(shat10_word(m, n), &shat10_coeff(m as u32, n as u32));
            }
        }
    }
    let s01 = s10.reverse();
    let s00 = s0.mul(&s10).add(&s01.mul(&s0)).scale(&ratio(1, 2));
    NcSeries::one(cutoff).add(&s0).add(&s10).add(&s01).add(&s00)
}

/// The associator families entering `V` modulo either ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct ZFamilies {
    /// `Σ (-1)^n ζ(2^{n}) (x1x0)^n`, including the constant 1.
    pub zpi: NcSeries,
    pub z0: NcSeries,
    pub zh: NcSeries,
    /// Carries the opaque `H(m,n)` symbols.
    pub zs: NcSeries,
    pub z01: NcSeries,
    pub z11: NcSeries,
    pub zh_hat: NcSeries,
    /// Carries the opaque `Hhat(m,n)` symbols.
    pub zs_hat: NcSeries,
}

fn family(cutoff: usize, mode: Mode, keep: impl Fn(Word) -> bool) -> NcSeries {
    let mut out = NcSeries::zero(cutoff);
    for x in basis_up_to(mode, cutoff) {
        if keep(x) {
            out.add_term(x, &assoc_coeff(x).expect("family word has a known coefficient"));
        }
    }
    out
}

fn in_component(x: Word, mode: Mode, level: u8, first: u8, last: u8) -> bool {
    matches!(classify(x, mode), HoffmanClass::Basis { level: l, ends: Some((i, j)), .. } if l == level && i == first && j == last)
}

pub fn build_z_families(cutoff: usize) -> ZFamilies {
    let b0 = Mode::B0;
    let b1 = Mode::B1;
    ZFamilies {
        zpi: family(cutoff, b0, |x| x.is_empty() || in_component(x, b0, 0, 1, 0)),
        z0: family(cutoff, b0, |x| in_component(x, b0, 0, 0, 0)),
        zh: family(cutoff, b0, |x| in_component(x, b0, 1, 1, 0)),
        zs: family(cutoff, b0, |x| in_component(x, b0, 1, 0, 0)),
        z01: family(cutoff, b0, |x| in_component(x, b0, 0, 0, 1)),
        z11: family(cutoff, b0, |x| in_component(x, b0, 0, 1, 1)),
        zh_hat: family(cutoff, b1, |x| in_component(x, b1, 1, 1, 0)),
        zs_hat: family(cutoff, b1, |x| in_component(x, b1, 1, 0, 0)),
    }
}

/// The eight components `V^k_{i,j}` for one mode, indexed `4k + 2i + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct VComponents {
    pub mode: Mode,
    comps: Vec<NcSeries>,
}

impl VComponents {
    pub fn get(&self, level: u8, first: u8, last: u8) -> &NcSeries {
        &self.comps[(4 * level + 2 * first + last) as usize]
    }

    pub fn by_key(&self, key: ComponentKey) -> &NcSeries {
        self.get(key.level, key.first, key.last)
    }

    /// `V` modulo the ideal: the sum of all components.
    pub fn total(&self) -> NcSeries {
        self.comps.iter().fold(NcSeries::zero(self.comps[0].cutoff()), |acc, c| acc.add(c))
    }
}

/// `V` modulo `I_H` (mode B0) or `I_Ĥ` (mode B1) from the family formulas.
pub fn build_v(z: &ZFamilies, mode: Mode) -> VComponents {
    let x1 = NcSeries::word(w("1"), z.zpi.cutoff());
    let p = |a: &NcSeries, b: &NcSeries| a.mul_mod(&x1, mode).mul_mod(b, mode);
    let z0 = &z.z0;
    let zpi = &z.zpi;
    let zpi_r = zpi.reverse();
    let v000 = p(z0, z0).neg();
    let v001 = p(z0, &zpi_r);
    let v010 = p(zpi, z0).neg();
    let v011 = p(zpi, &zpi_r);
    let level1 = match mode {
        Mode::B0 => {
            let (zs, zh) = (&z.zs, &z.zh);
            let (zs_r, zh_r) = (zs.reverse(), zh.reverse());
            [
                p(z0, &zs_r).sub(&p(zs, z0)),
                p(z0, &zh_r).neg().add(&p(zs, &zpi_r)),
                p(zpi, &zs_r).sub(&p(zh, z0)),
                p(zpi, &zh_r).neg().add(&p(zh, &zpi_r)),
            ]
        }
        Mode::B1 => {
            let (zs, zh, z01, z11) = (&z.zs_hat, &z.zh_hat, &z.z01, &z.z11);
            let (zs_r, zh_r, z01_r) = (zs.reverse(), zh.reverse(), z01.reverse());
            [
                p(z0, &zs_r).sub(&p(zs, z0)).add(&p(z0, &z01_r)).sub(&p(z01, z0)),
                p(z0, &zh_r).neg().add(&p(zs, &zpi_r)).sub(&p(z0, z11)).add(&p(z01, &zpi_r)),
                p(zpi, &zs_r).sub(&p(zh, z0)).add(&p(zpi, &z01_r)).sub(&p(z11, z0)),
                p(zpi, z11).neg().add(&p(zh, &zpi_r)).sub(&p(zpi, &zh_r)).add(&p(z11, &zpi_r)),
            ]
        }
    };
    let [v100, v101, v110, v111] = level1;
    VComponents { mode, comps: vec![v000, v001, v010, v011, v100, v101, v110, v111] }
}

/// Everything the identity checks consume, immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesBundle {
    pub cutoff: usize,
    pub s: NcSeries,
    pub shat: NcSeries,
    pub z: ZFamilies,
    pub v: VComponents,
    pub vhat: VComponents,
    pub relations: SingularRelations,
}

impl SeriesBundle {
    pub fn build(cutoff: usize) -> SeriesBundle {
        let z = build_z_families(cutoff);
        let v = build_v(&z, Mode::B0);
        let vhat = build_v(&z, Mode::B1);
        let relations = SingularRelations::derive(&z);
        SeriesBundle { cutoff, s: build_s(cutoff), shat: build_shat(cutoff), z, v, vhat, relations }
    }

    /// A copy with `delta` added to the coefficient of `word` in `S`
    /// (negative control).
    pub fn with_perturbed_s(&self, word: Word, delta: &MzvExpr) -> SeriesBundle {
        let mut out = self.clone();
        out.s.add_term(word, delta);
        out
    }

    pub fn with_perturbed_shat(&self, word: Word, delta: &MzvExpr) -> SeriesBundle {
        let mut out = self.clone();
        out.shat.add_term(word, delta);
        out
    }

    /// `S^k_{i,j}` (mode B0).
    pub fn s_comp(&self, level: u8, first: u8, last: u8) -> NcSeries {
        self.s.component(ComponentKey::new(level, first, last), Mode::B0)
    }

    /// `Ŝ^k_{i,j}` (mode B1).
    pub fn shat_comp(&self, level: u8, first: u8, last: u8) -> NcSeries {
        self.shat.component(ComponentKey::new(level, first, last), Mode::B1)
    }
}
