//! Zero-residual checks of the single-valuedness identities.
//!
//! Each identity is a list of parts; each part is a list of series whose sum,
//! reduced modulo the ideal, must vanish exactly. Monodromy checks adjoin
//! `t = 2πi` formally and contribute one part per power of `t`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::assoc::alternating;
use super::{s10_word, shat10_word, SeriesBundle, VComponents};
use crate::error::{Error, Result};
use crate::series::{NcSeries, TPoly};
use crate::word::{w, Mode};

/// Names accepted by [`verify_identity`], in proof order.
pub const IDENTITIES: &[&str] = &[
    "ZoasS",
    "Vfourtoone",
    "firstset0",
    "secondset0",
    "thirdset0",
    "reflected0",
    "sing",
    "vlllid",
    "commutator_x0",
    "eSe",
    "prop_ii",
    "monodromy_1",
    "reverse_symmetry",
    "v_square",
    "firstset1",
    "sing1",
    "vlllid1",
    "commutator_x0_hat",
    "eSe_hat",
    "prop_ii_hat",
    "monodromy_1_hat",
    "reverse_symmetry_hat",
    "v_cube_hat",
    "overlap_S_Shat",
];

/// Checks whose vanishing needs the relations among singular symbols: the
/// nilpotency of `V` and, through it, the quadratic part of the monodromy.
pub const NEEDS_RELATIONS: &[&str] = &["v_square", "monodromy_1", "v_cube_hat", "monodromy_1_hat"];

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub identity: String,
    /// One residual per independent equation; all must be zero.
    pub parts: Vec<NcSeries>,
    pub pass: bool,
    pub max_weight_checked: usize,
    /// Whether some summand carried opaque unknown symbols before cancellation.
    pub unknowns_before: bool,
    /// Whether the residual was reduced by the inversion relations among the
    /// singular symbols before testing for zero.
    pub uses_relations: bool,
    pub time_ms: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    identity: &'a str,
    pass: bool,
    max_weight_checked: usize,
    uses_relations: bool,
    nonzero_words: Vec<String>,
    time_ms: f64,
}

impl ResidualReport {
    /// `part:word` for every surviving coefficient.
    pub fn nonzero_words(&self) -> Vec<String> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(k, p)| p.terms().map(move |(x, _)| format!("{k}:{x}")))
            .collect()
    }

    pub fn has_unknowns_after(&self) -> bool {
        self.parts.iter().any(NcSeries::has_unknowns)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ReportJson {
            identity: &self.identity,
            pass: self.pass,
            max_weight_checked: self.max_weight_checked,
            uses_relations: self.uses_relations,
            nonzero_words: self.nonzero_words(),
            time_ms: self.time_ms,
        })
        .expect("report serialises")
    }
}

/// Series and products for one mode; every product is reduced modulo the
/// ideal of that mode.
struct Ctx<'a> {
    mode: Mode,
    cutoff: usize,
    v: &'a VComponents,
    /// `s[k][i][j]`.
    s: [[[NcSeries; 2]; 2]; 2],
    full_s: NcSeries,
}

impl<'a> Ctx<'a> {
    fn new(b: &'a SeriesBundle, mode: Mode) -> Ctx<'a> {
        let (full, v) = match mode {
            Mode::B0 => (&b.s, &b.v),
            Mode::B1 => (&b.shat, &b.vhat),
        };
        let comp = |k, i, j| full.component(crate::series::ComponentKey::new(k, i, j), mode);
        let s = [0u8, 1].map(|k| [0u8, 1].map(|i| [0u8, 1].map(|j| comp(k, i, j))));
        Ctx { mode, cutoff: b.cutoff, v, s, full_s: full.reduce_mod_ideal(mode) }
    }

    fn s(&self, k: u8, i: u8, j: u8) -> &NcSeries {
        &self.s[k as usize][i as usize][j as usize]
    }

    fn v(&self, k: u8, i: u8, j: u8) -> &NcSeries {
        self.v.get(k, i, j)
    }

    fn m(&self, a: &NcSeries, b: &NcSeries) -> NcSeries {
        a.mul_mod(b, self.mode)
    }

    fn m3(&self, a: &NcSeries, b: &NcSeries, c: &NcSeries) -> NcSeries {
        self.m(&self.m(a, b), c)
    }

    /// Summands of `V^sing = 2V¹₀₀ - V¹₀₁ S⁰₀₀ + S⁰₀₀ V¹₁₀`, kept apart so the
    /// singular symbols are visible before they cancel.
    fn v_sing(&self) -> Vec<NcSeries> {
        let s0 = self.s(0, 0, 0);
        vec![self.v(1, 0, 0).scale_int(2), self.m(self.v(1, 0, 1), s0).neg(), self.m(s0, self.v(1, 1, 0))]
    }

    fn x0(&self) -> NcSeries {
        NcSeries::word(w("0"), self.cutoff)
    }

    /// `W̃̄ S W - S` with `W = exp(t V)`, one part per power of `t`.
    fn monodromy_1(&self) -> Vec<Vec<NcSeries>> {
        let wt = TPoly::exp_t(&self.v.total(), Some(self.mode));
        let wbar = wt.reverse().negate_t();
        let s = TPoly::constant(self.full_s.clone());
        let lhs = wbar.mul(&s, Some(self.mode)).mul(&wt, Some(self.mode));
        tpoly_parts(lhs, &self.full_s)
    }

    /// `e^{-t x0} S e^{t x0} - S`, one part per power of `t`.
    fn e_s_e(&self) -> Vec<Vec<NcSeries>> {
        let e = TPoly::exp_t(&self.x0(), Some(self.mode));
        let s = TPoly::constant(self.full_s.clone());
        let lhs = e.negate_t().mul(&s, Some(self.mode)).mul(&e, Some(self.mode));
        tpoly_parts(lhs, &self.full_s)
    }

    /// `V₋ S + S V` with `V₋ = V(-x0,-x1)`.
    fn prop_ii(&self) -> Vec<NcSeries> {
        let v = self.v.total();
        vec![self.m(&v.sign_flip(), &self.full_s), self.m(&self.full_s, &v)]
    }

    fn commutator(&self) -> Vec<NcSeries> {
        vec![self.m(&self.full_s, &self.x0()), self.m(&self.x0(), &self.full_s).neg()]
    }
}

fn tpoly_parts(lhs: TPoly, s: &NcSeries) -> Vec<Vec<NcSeries>> {
    lhs.coeffs
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k == 0 { vec![c, s.neg()] } else { vec![c] })
        .collect()
}

fn anti(c: &Ctx, a: &NcSeries, b: &NcSeries) -> NcSeries {
    c.m(a, b).add(&c.m(b, a))
}

/// Coefficient identities behind `[S, x0] = 0`, read off the built `S`:
/// `S⁰₀₀(a) = S¹₁₀(a,0)` and `S¹₁₀(a,b) = S¹₁₀(b,a)`, placed on the projection
/// word `(x0x1)^a x0 x0 (x1x0)^b`.
fn commutator_coefficients(b: &SeriesBundle) -> Vec<NcSeries> {
    let cutoff = b.cutoff;
    let mut out = NcSeries::zero(cutoff + 1);
    for a in 1..=cutoff / 2 {
        for bb in 0..=cutoff / 2 {
            if 2 * a + 2 * bb + 1 > cutoff {
                continue;
            }
            let target = alternating(0, 2 * a + 1).concat(&alternating(0, 2 * bb + 1));
            let lhs = if bb == 0 { b.s.coeff(&alternating(0, 2 * a + 1)) } else { b.s.coeff(&s10_word(a, bb)) };
            let diff = &lhs - &b.s.coeff(&s10_word(if bb == 0 { a } else { bb }, if bb == 0 { 0 } else { a }));
            out.add_term(target, &diff);
        }
    }
    vec![out]
}

/// `Ŝ¹₁₀(a-1,b) = Ŝ¹₁₀(b-1,a)` on the projection word `(x0x1)^a (x1x0)^b`.
fn commutator_coefficients_hat(b: &SeriesBundle) -> Vec<NcSeries> {
    let cutoff = b.cutoff;
    let mut out = NcSeries::zero(cutoff + 1);
    for a in 1..=cutoff / 2 {
        for bb in 1..=cutoff / 2 {
            if 2 * a + 2 * bb - 1 > cutoff {
                continue;
            }
            let target = alternating(0, 2 * a).concat(&alternating(1, 2 * bb));
            let diff = &b.shat.coeff(&shat10_word(a - 1, bb)) - &b.shat.coeff(&shat10_word(bb - 1, a));
            out.add_term(target, &diff);
        }
    }
    vec![out]
}

/// `S_w = Ŝ_w` for every word in both bases.
fn overlap(b: &SeriesBundle) -> Vec<NcSeries> {
    let both = |x: crate::word::Word| crate::word::in_basis(x, Mode::B0) && crate::word::in_basis(x, Mode::B1);
    vec![b.s.filter(both), b.shat.filter(both).neg()]
}

/// Summands per part for the named identity.
fn terms(b: &SeriesBundle, name: &str) -> Result<(Mode, Vec<Vec<NcSeries>>)> {
    let c0 = Ctx::new(b, Mode::B0);
    let c1 = Ctx::new(b, Mode::B1);
    let (mode, parts) = match name {
        "ZoasS" => {
            let c = &c0;
            let (z0, zpi) = (&b.z.z0, &b.z.zpi);
            let s0 = c.s(0, 0, 0);
            (Mode::B0, vec![vec![z0.scale_int(2), c.m(s0, zpi)], vec![z0.scale_int(2), c.m(&zpi.reverse(), s0)]])
        }
        "Vfourtoone" => {
            let c = &c0;
            let s0 = c.s(0, 0, 0);
            let v11 = c.v(0, 1, 1);
            (
                Mode::B0,
                vec![
                    vec![c.v(0, 0, 0).scale_int(4), c.m3(s0, v11, s0)],
                    vec![c.v(0, 0, 1).scale_int(2), c.m(s0, v11)],
                    vec![c.v(0, 1, 0).scale_int(2), c.m(v11, s0).neg()],
                ],
            )
        }
        "firstset0" => {
            let c = &c0;
            (Mode::B0, vec![vec![c.v(0, 0, 1).scale_int(2), c.m(c.s(0, 0, 0), c.v(0, 1, 1))]])
        }
        "secondset0" | "vlllid" => {
            let c = &c0;
            (Mode::B0, vec![second_set(c)])
        }
        "thirdset0" => {
            let c = &c0;
            let (s0, s01, s10, s00) = (c.s(0, 0, 0), c.s(1, 0, 1), c.s(1, 1, 0), c.s(1, 0, 0));
            let first = vec![
                anti(c, c.v(0, 0, 1), s01),
                c.m(s0, &c.v(0, 0, 1).add(c.v(1, 1, 1))),
                c.m(s00, c.v(0, 1, 1)),
            ];
            let v000 = c.v(0, 0, 0);
            let mut second = c.v_sing();
            second.extend([
                c.m(s0, v000),
                c.m(v000, s0).neg(),
                c.m(v000, s10).neg(),
                c.m(s01, v000),
                c.m(c.v(0, 0, 1), s00),
                c.m(s00, c.v(0, 1, 0)),
            ]);
            (Mode::B0, vec![first, second])
        }
        "reflected0" => {
            let c = &c0;
            let (s0, s10, s00) = (c.s(0, 0, 0), c.s(1, 1, 0), c.s(1, 0, 0));
            let (v10, v11, v111) = (c.v(0, 1, 0), c.v(0, 1, 1), c.v(1, 1, 1));
            (
                Mode::B0,
                vec![
                    vec![v10.scale_int(2), c.m(v11, s0).neg()],
                    vec![anti(c, v10, s10), c.m(&v10.add(v111), s0), c.m(v11, s00).neg()],
                    vec![c.m(c.v(0, 0, 1), s0), c.m(s0, v10)],
                ],
            )
        }
        "sing" => {
            let c = &c0;
            let s0 = c.s(0, 0, 0);
            let mut part: Vec<NcSeries> = c.v_sing().iter().map(|x| x.scale_int(2)).collect();
            part.push(c.m3(s0, c.v(1, 1, 1), s0).neg());
            (Mode::B0, vec![part])
        }
        "commutator_x0" => {
            let mut parts = vec![c0.commutator()];
            parts.extend(commutator_coefficients(b).into_iter().map(|p| vec![p]));
            (Mode::B0, parts)
        }
        "eSe" => (Mode::B0, c0.e_s_e()),
        "prop_ii" => (Mode::B0, vec![c0.prop_ii()]),
        "monodromy_1" => (Mode::B0, c0.monodromy_1()),
        "reverse_symmetry" => (Mode::B0, vec![vec![c0.full_s.clone(), c0.full_s.reverse().neg()]]),
        "v_square" => {
            let v = c0.v.total();
            (Mode::B0, vec![vec![c0.m(&v, &v)]])
        }
        "firstset1" => {
            let c = &c1;
            let (s0, s01, s10, s00) = (c.s(0, 0, 0), c.s(1, 0, 1), c.s(1, 1, 0), c.s(1, 0, 0));
            let v000 = c.v(0, 0, 0);
            (
                Mode::B1,
                vec![
                    vec![c.v(0, 0, 1).scale_int(2), c.m(s0, c.v(0, 1, 1))],
                    second_set(c),
                    vec![anti(c, c.v(0, 0, 1), s01), c.m(s0, c.v(1, 1, 1)), c.m(s00, c.v(0, 1, 1))],
                    [
                        c.v_sing(),
                        vec![
                            c.m(v000, s10).neg(),
                            c.m(s01, v000),
                            c.m(c.v(0, 0, 1), s00),
                            c.m(s00, c.v(0, 1, 0)),
                        ],
                    ]
                    .concat(),
                ],
            )
        }
        "sing1" => {
            let c = &c1;
            let s0 = c.s(0, 0, 0);
            let mut part: Vec<NcSeries> = c.v_sing().iter().map(|x| x.scale_int(2)).collect();
            part.push(c.m3(s0, c.v(1, 1, 1), s0).neg());
            (Mode::B1, vec![part])
        }
        "vlllid1" => {
            let c = &c1;
            let v11 = c0.v(0, 1, 1);
            (
                Mode::B1,
                vec![vec![c.v(1, 1, 1).scale_int(2), c.m(v11, c.s(1, 0, 1)).neg(), c.m(c.s(1, 1, 0), v11)]],
            )
        }
        "commutator_x0_hat" => {
            let c = &c1;
            let x0 = c.x0();
            let mut parts = vec![c.commutator(), vec![c.m(c.s(1, 0, 1), &x0), c.m(&x0, c.s(1, 1, 0)).neg()]];
            parts.extend(commutator_coefficients_hat(b).into_iter().map(|p| vec![p]));
            (Mode::B1, parts)
        }
        "eSe_hat" => (Mode::B1, c1.e_s_e()),
        "prop_ii_hat" => (Mode::B1, vec![c1.prop_ii()]),
        "monodromy_1_hat" => (Mode::B1, c1.monodromy_1()),
        "reverse_symmetry_hat" => (Mode::B1, vec![vec![c1.full_s.clone(), c1.full_s.reverse().neg()]]),
        "v_cube_hat" => {
            let v = c1.v.total();
            (Mode::B1, vec![vec![c1.m3(&v, &v, &v)]])
        }
        "overlap_S_Shat" => (Mode::B0, vec![overlap(b)]),
        other => return Err(Error::InvalidArgument(format!("unknown identity {other}"))),
    };
    Ok((mode, parts))
}

/// `2V¹₁₁ - V⁰₁₁ S¹₀₁ + S¹₁₀ V⁰₁₁`.
fn second_set(c: &Ctx) -> Vec<NcSeries> {
    let v11 = c.v(0, 1, 1);
    vec![c.v(1, 1, 1).scale_int(2), c.m(v11, c.s(1, 0, 1)).neg(), c.m(c.s(1, 1, 0), v11)]
}

pub fn verify_identity(b: &SeriesBundle, name: &str) -> Result<ResidualReport> {
    let start = Instant::now();
    let (mode, parts) = terms(b, name)?;
    let unknowns_before = parts.iter().flatten().any(NcSeries::has_unknowns);
    let uses_relations = NEEDS_RELATIONS.contains(&name);
    let residuals: Vec<NcSeries> = parts
        .into_iter()
        .map(|summands| {
            let cutoff = summands.first().map_or(b.cutoff, NcSeries::cutoff);
            let r = summands.iter().fold(NcSeries::zero(cutoff), |acc, x| acc.add(x)).reduce_mod_ideal(mode);
            if uses_relations {
                b.relations.reduce_series(&r)
            } else {
                r
            }
        })
        .collect();
    let pass = residuals.iter().all(NcSeries::is_zero);
    Ok(ResidualReport {
        identity: name.to_string(),
        parts: residuals,
        pass,
        max_weight_checked: b.cutoff,
        unknowns_before,
        uses_relations,
        time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// All of [`IDENTITIES`], optionally in parallel; output order is fixed.
pub fn verify_all(b: &SeriesBundle, parallel: bool) -> Vec<ResidualReport> {
    let run = |name: &&str| verify_identity(b, name).expect("listed identity");
    if parallel {
        IDENTITIES.par_iter().map(run).collect()
    } else {
        IDENTITIES.iter().map(run).collect()
    }
}
