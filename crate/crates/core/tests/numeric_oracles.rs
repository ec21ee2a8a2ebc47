//! Numeric cross-checks of the exact associator values and of the singular
//! relations, against the associator computed by transport.

use std::collections::HashMap;

use num_complex::Complex64;
use proptest::prelude::*;
use zigzag_core::mzv::{MzvExpr, Unknown};
use zigzag_core::polylog::{associator_by_reflection, CSeries, LogTaylor, Transporter};
use zigzag_core::sv::assoc::{alternating, assoc_coeff};
use zigzag_core::sv::{build_z_families, relations::SingularRelations};
use zigzag_core::word::{basis_up_to, shuffle_counts, Mode, Word};

const W: usize = 10;

fn associator() -> CSeries {
    associator_by_reflection(&LogTaylor::new(W)).unwrap()
}

/// `H(m,n)` and `Hhat(m,n)` read off their defining words.
fn symbol_values(z: &CSeries) -> HashMap<Unknown, f64> {
    let mut out = HashMap::new();
    for m in 0..W as u32 {
        for n in 0..W as u32 {
            if 2 * m + 2 * n + 4 > W as u32 {
                continue;
            }
            let h = alternating(0, 2 * m as usize + 3).concat(&alternating(0, 2 * n as usize + 1));
            let sign = if (m + n + 1) % 2 == 0 { 1.0 } else { -1.0 };
            out.insert(Unknown::Hoffman1 { m, n }, sign * z[h].re);
            let hh = alternating(0, 2 * m as usize + 2).concat(&alternating(1, 2 * n as usize + 2));
            out.insert(Unknown::DualSingular { m, n }, z[hh].re);
        }
    }
    out
}

fn check(expr: &MzvExpr, value: Complex64, vals: &HashMap<Unknown, f64>, what: &str) {
    let exact = expr.numeric(15, Some(vals)).unwrap();
    assert!(value.im.abs() < 1e-11, "{what}: imaginary part {}", value.im);
    assert!((exact - value.re).abs() < 1e-11 * (1.0 + exact.abs()), "{what}: exact {exact} vs numeric {}", value.re);
}

#[test]
fn associator_families_match_transport() {
    let z = associator();
    let vals = symbol_values(&z);
    let mut checked = 0;
    for mode in [Mode::B0, Mode::B1] {
        for x in basis_up_to(mode, W) {
            if let Some(e) = assoc_coeff(x) {
                check(&e, z[x], &vals, &format!("ζ({x})"));
                checked += 1;
            }
        }
    }
    assert!(checked > 60);
}

#[test]
fn doubled_x0_prefix_words() {
    // ζ(x0x0(x1x0)^n) = -(-1)^n Σ_k H(k-1, n-k), the words outside the named families.
    let z = associator();
    let vals = symbol_values(&z);
    for n in 1..=4 {
        let x = Word::from_letters(&[0, 0]).concat(&alternating(1, 2 * n));
        check(&assoc_coeff(x).unwrap(), z[x], &vals, &format!("ζ({x})"));
    }
}

#[test]
fn singular_relations_hold_numerically() {
    let z = associator();
    let vals = symbol_values(&z);
    let rel = SingularRelations::derive(&build_z_families(W));
    assert!(!rel.is_empty());
    for (u, value) in rel.rules() {
        let lhs = MzvExpr::unknown(*u).numeric(15, Some(&vals)).unwrap();
        let rhs = value.numeric(15, Some(&vals)).unwrap();
        assert!((lhs - rhs).abs() < 1e-11 * (1.0 + lhs.abs()), "{}: {lhs} vs {rhs}", u.label());
    }
    // Hhat(0,0) = ζ(x0x1x1x0) = -π⁴/72.
    let pi4 = std::f64::consts::PI.powi(4);
    assert!((vals[&Unknown::DualSingular { m: 0, n: 0 }] + pi4 / 72.0).abs() < 1e-13);
}

#[test]
fn associator_is_grouplike() {
    assert!(associator().shuffle_defect(W) < 1e-11);
}

fn arb_point() -> impl Strategy<Value = Complex64> {
    (0.05f64..0.7, -3.0f64..3.0).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    // L_u L_v = L_{u ⧢ v} for |u| + |v| ≤ 6.
    #[test]
    fn polylogs_shuffle(z in arb_point()) {
        let l = Transporter::at(&LogTaylor::new(6), z).unwrap().value;
        prop_assert!(l.shuffle_defect(6) < 1e-9);
    }

    // A closed triangle inside one half plane winds around neither point, so
    // continuing along it returns the starting value, still group-like.
    #[test]
    fn transport_is_homotopy_invariant(z in arb_point(), bump in 0.2f64..1.0) {
        let local = LogTaylor::new(5);
        let t = Transporter::at(&local, z).unwrap();
        let side = if z.im >= 0.0 { 1.0 } else { -1.0 };
        let path = [Complex64::new(2.5, side * bump), Complex64::new(2.5, side * (bump + 1.0)), z];
        let a = t.transported(&path, 1e-3).unwrap();
        prop_assert!((&a.value - &t.value).max_abs() < 1e-10);
        let (u, v) = (Word::from_letters(&[0, 1]), Word::from_letters(&[1]));
        let lhs = a.value[u] * a.value[v];
        let rhs: Complex64 = shuffle_counts(u, v).iter().map(|(x, k)| a.value[*x] * (*k as f64)).sum();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }
}
