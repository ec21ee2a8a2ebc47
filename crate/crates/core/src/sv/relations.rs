//! Linear relations among the singular symbols `H(m,n)` and `Hhat(m,n)`.
//!
//! `Z⁻¹ Z = 1` projected onto words that start and end in x0 only involves
//! associator words ending in x0, all of which the families cover. Modulo
//! either ideal this yields linear relations whose coefficients are known
//! values. They are what makes `V² ≡ 0 (mod I_H)` and `V³ ≡ 0 (mod I_Ĥ)` hold
//! once `V` is written through opaque symbols; the identities of the
//! construction itself never need them.

use std::collections::BTreeMap;

use super::ZFamilies;
use crate::mzv::{MzvExpr, Unknown};
use crate::series::NcSeries;
use crate::word::{Mode, Word};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SingularRelations {
    /// `u ↦ value`, each value free of every rewritten symbol.
    rules: BTreeMap<Unknown, MzvExpr>,
    /// Relations without symbols that failed to vanish; nonempty means an
    /// associator coefficient is wrong.
    pub inconsistent: Vec<(Word, MzvExpr)>,
    /// Relations left over with no symbol carrying a rational coefficient.
    pub unresolved: Vec<(Word, MzvExpr)>,
}

/// `Z⁻¹ Z` projected onto `x0 … x0` words modulo the ideal of `mode`.
pub fn inversion_relations(z: &ZFamilies, mode: Mode) -> NcSeries {
    let ends_in_x0 = match mode {
        Mode::B0 => z.zpi.add(&z.z0).add(&z.zh).add(&z.zs),
        Mode::B1 => z.zpi.add(&z.z0).add(&z.zh_hat).add(&z.zs_hat),
    };
    ends_in_x0
        .antipode()
        .mul_mod(&ends_in_x0, mode)
        .filter(|x| x.first() == Some(0) && x.last() == Some(0))
}

impl SingularRelations {
    pub fn derive(z: &ZFamilies) -> SingularRelations {
        let mut rel = SingularRelations::default();
        let mut eqs: Vec<(Word, MzvExpr)> = Vec::new();
        for mode in [Mode::B0, Mode::B1] {
            eqs.extend(inversion_relations(z, mode).terms().map(|(x, c)| (*x, c.clone())));
        }
        eqs.sort_by_key(|(x, _)| (x.len(), *x));
        for (x, e) in eqs {
            let e = rel.reduce(&e);
            if e.is_zero() {
                continue;
            }
            if !e.has_unknowns() {
                rel.inconsistent.push((x, e));
                continue;
            }
            match pivot(&e) {
                Some((u, c)) => {
                    // e = c·u + rest = 0.
                    let mut rest = e.clone();
                    rest -= &MzvExpr::unknown(u).scale(&c);
                    let value = rest.scale(&(-c.recip()));
                    for v in rel.rules.values_mut() {
                        *v = v.substitute(&u, &value);
                    }
                    rel.rules.insert(u, value);
                }
                None => rel.unresolved.push((x, e)),
            }
        }
        rel
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Unknown, &MzvExpr)> {
        self.rules.iter()
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn reduce(&self, e: &MzvExpr) -> MzvExpr {
        let mut out = e.clone();
        for u in e.unknowns() {
            if let Some(v) = self.rules.get(&u) {
                out = out.substitute(&u, v);
            }
        }
        out
    }

    pub fn reduce_series(&self, s: &NcSeries) -> NcSeries {
        let mut out = NcSeries::zero(s.cutoff());
        for (x, c) in s.terms() {
            out.add_term(*x, &self.reduce(c));
        }
        out
    }
}

/// The heaviest symbol that appears alone with a rational coefficient.
fn pivot(e: &MzvExpr) -> Option<(Unknown, num_rational::BigRational)> {
    e.terms()
        .filter(|(m, _)| m.pi_pow == 0 && m.odd.is_empty() && m.unknowns.len() == 1)
        .map(|(m, c)| (m.unknowns[0], c.clone()))
        .max_by_key(|(u, _)| (u.weight(), *u))
}
