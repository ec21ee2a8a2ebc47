//! Numeric KZ transport `dL = L (x0 dz/z + x1 dz/(z-1))` along polylines.
//!
//! Each segment is cut into steps with `|h| ≤ STEP_RATIO · dist(c, {0,1})`;
//! on a step the solution is a power series in `h` whose `k`-th term obeys
//! `(k+1) M_{k+1} = Σ_j M_{k-j} ((-1)^j (h/c)^{j+1} x0 + (-1)^j (h/(c-1))^{j+1} x1)`
//! with `M_k = L_k h^k`. Terms shrink like `STEP_RATIO^k`.

use num_complex::Complex64;

use super::cseries::CSeries;
use super::local::{LogTaylor, LOCAL_RADIUS};
use crate::error::{Error, Result};
use crate::word::Word;

pub const STEP_RATIO: f64 = 0.4;
const MAX_ORDER: usize = 64;
/// Default smallest allowed distance between a path and `{0, 1}`.
pub const DEFAULT_CLEARANCE: f64 = 1e-3;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numeric value of `L` continued to `point` along some recorded path.
#[derive(Clone, Debug)]
pub struct Transporter {
    pub point: Complex64,
    /// `point - 1`, tracked separately so that it keeps full relative
    /// precision as the path approaches 1.
    from_one: Complex64,
    pub value: CSeries,
    /// Accumulated error estimate (sum of per-step truncation estimates).
    pub est_error: f64,
}

/// Distance from the segment `[a, b]` to the point `p`.
fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let t = if d.norm_sqr() == 0.0 { 0.0 } else { ((p - a) * d.conj()).re / d.norm_sqr() };
    (a + d * t.clamp(0.0, 1.0) - p).norm()
}

/// Smallest distance between a polyline and `{0, 1}`.
pub fn clearance(path: &[Complex64]) -> f64 {
    let mut m = f64::INFINITY;
    for p in [c(0.0, 0.0), c(1.0, 0.0)] {
        for s in path.windows(2) {
            m = m.min(segment_distance(s[0], s[1], p));
        }
        if let Some(z) = path.first() {
            m = m.min((z - p).norm());
        }
    }
    m
}

impl Transporter {
    /// `L` at a point of the local disk, principal branch.
    pub fn at(local: &LogTaylor, z: Complex64) -> Result<Transporter> {
        let (value, est_error) = local.eval(z)?;
        Ok(Transporter { point: z, from_one: z - 1.0, value, est_error })
    }

    pub fn cutoff(&self) -> usize {
        self.value.cutoff()
    }

    /// `L(point + h) - L(point)` summed from the Taylor terms of order ≥ 1,
    /// so small increments keep full relative precision. Requires
    /// `|h| ≤ STEP_RATIO · dist(point, {0, 1})` for the stated accuracy.
    /// Also returns the size of the last term kept.
    pub fn increment(&self, h: Complex64) -> (CSeries, f64) {
        let (r0, r1) = (h / self.point, h / self.from_one);
        let cutoff = self.cutoff();
        // alpha[j] = (-1)^j (h/c)^{j+1}, beta likewise for c - 1.
        let mut alpha = Vec::with_capacity(MAX_ORDER);
        let mut beta = Vec::with_capacity(MAX_ORDER);
        let (mut a, mut b) = (r0, r1);
        for _ in 0..MAX_ORDER {
            alpha.push(a);
            beta.push(b);
            a *= -r0;
            b *= -r1;
        }
        let mut terms = vec![self.value.clone()];
        let mut sum = CSeries::zero(cutoff);
        let mut last = f64::INFINITY;
        let scale = self.value.max_abs().max(1.0);
        for k in 0..MAX_ORDER - 1 {
            let mut next = CSeries::zero(cutoff);
            for j in 0..=k {
                let m = &terms[k - j];
                m.add_times_letter(0, alpha[j], &mut next);
                m.add_times_letter(1, beta[j], &mut next);
            }
            next = next.scale(c(1.0 / (k as f64 + 1.0), 0.0));
            let size = next.max_abs();
            sum = &sum + &next;
            terms.push(next);
            // Two consecutive negligible terms end the series.
            if size.max(last) < 1e-18 * scale {
                last = size;
                break;
            }
            last = size;
        }
        (sum, last)
    }

    /// One Taylor step from the current point to `point + h`.
    fn step(&mut self, h: Complex64) {
        let (inc, last) = self.increment(h);
        self.est_error += last + 1e-16 * self.value.max_abs().max(1.0);
        self.value = &self.value + &inc;
        self.point += h;
        self.from_one += h;
    }

    fn set_point(&mut self, z: Complex64) {
        self.point = z;
        // Exact for z within a factor 2 of 1.
        self.from_one = z - 1.0;
    }

    /// `target - point`, computed from whichever of `point`, `point - 1`
    /// carries more relative precision.
    fn remaining(&self, target: Complex64) -> Complex64 {
        if self.from_one.norm() < self.point.norm() {
            (target - 1.0) - self.from_one
        } else {
            target - self.point
        }
    }

    /// Follow a polyline starting at the current point.
    pub fn transport(&mut self, path: &[Complex64], min_clearance: f64) -> Result<()> {
        let mut full = vec![self.point];
        full.extend_from_slice(path);
        let cl = clearance(&full);
        if cl < min_clearance {
            return Err(Error::PathTooClose { clearance: cl, minimum: min_clearance });
        }
        for &target in path {
            loop {
                let rest = self.remaining(target);
                let cap = STEP_RATIO * self.point.norm().min(self.from_one.norm());
                if rest.norm() <= cap {
                    if rest.norm() > 0.0 {
                        self.step(rest);
                    }
                    break;
                }
                self.step(rest * (cap / rest.norm()));
            }
            self.set_point(target);
        }
        Ok(())
    }

    pub fn transported(&self, path: &[Complex64], min_clearance: f64) -> Result<Transporter> {
        let mut t = self.clone();
        t.transport(path, min_clearance)?;
        Ok(t)
    }
}

/// Which singular point a loop encircles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopAround {
    Zero,
    One,
}

impl LoopAround {
    pub fn center(self) -> Complex64 {
        match self {
            LoopAround::Zero => c(0.0, 0.0),
            LoopAround::One => c(1.0, 0.0),
        }
    }
}

/// Closed positively oriented path from `base`: radially to the circle of
/// `radius` about the chosen point, once around it as a `segments`-gon,
/// and back.
pub fn loop_path(base: Complex64, around: LoopAround, radius: f64, segments: usize) -> Vec<Complex64> {
    let p = around.center();
    let theta0 = (base - p).arg();
    let mut path = Vec::with_capacity(segments + 3);
    for k in 0..=segments {
        let t = theta0 + 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
        path.push(p + Complex64::from_polar(radius, t));
    }
    path.push(base);
    path
}

/// `L(z)` on the principal branch: directly on the local disk, otherwise
/// transported radially from `LOCAL_RADIUS/1.5 · z/|z|`.
pub fn l_principal(local: &LogTaylor, z: Complex64) -> Result<Transporter> {
    if z.norm() <= LOCAL_RADIUS {
        return Transporter::at(local, z);
    }
    let start = z * (LOCAL_RADIUS / 1.5 / z.norm());
    let mut t = Transporter::at(local, start)?;
    t.transport(&[z], DEFAULT_CLEARANCE)?;
    Ok(t)
}

/// Numeric associator with a per-word error estimate.
#[derive(Clone, Debug)]
pub struct AssociatorEstimate {
    pub value: CSeries,
    errors: Vec<f64>,
}

impl AssociatorEstimate {
    pub fn error(&self, w: Word) -> f64 {
        self.errors[w.dense_index()]
    }
}

/// Regularised limit at 1 by the `ε` route: `L(1-ε) exp(-x1 log ε)` along
/// `ε = 10^{-6}, 10^{-9}, 10^{-12}`.
///
/// The remainder is `ε·P(log ε)` with `deg P < |w|`, so polynomial
/// Richardson in `ε` does not remove it; the value at the smallest `ε` is
/// returned and the last difference, scaled by the predicted ratio of
/// remainders, estimates its error.
pub fn regularized_limit_at_1(local: &LogTaylor) -> Result<AssociatorEstimate> {
    let cutoff = local.cutoff();
    let mut t = Transporter::at(local, c(0.5, 0.0))?;
    let mut values = Vec::new();
    let mut eps = Vec::new();
    for k in [6, 9, 12] {
        let x = 1.0 - 10f64.powi(-k);
        t.transport(&[c(x, 0.0)], 0.5 * (1.0 - x))?;
        // Exact distance of the representable point to 1.
        let e = 1.0 - x;
        values.push(t.value.mul(&CSeries::exp_letter(1, c(-e.ln(), 0.0), cutoff)));
        eps.push(e);
    }
    let (a, b) = (&values[1], &values[2]);
    let errors = (0..a.as_slice().len())
        .map(|i| {
            let len = Word::from_dense_index(i).len() as i32;
            let ratio = eps[2] / eps[1] * (eps[2].ln() / eps[1].ln()).powi((len - 1).max(0));
            // Stripping cancels terms as large as |log ε|^{|w|}/|w|!.
            let cancel = (1.0 - eps[2].ln()).powi(len) / (1..=len).map(f64::from).product::<f64>();
            (a.as_slice()[i] - b.as_slice()[i]).norm() * ratio / (1.0 - ratio) + 1e-14 * cancel
        })
        .collect();
    Ok(AssociatorEstimate { value: b.clone(), errors })
}

/// The associator by reflection: `L(z) = Z · L(1-z)|_{x0↔x1}`, so at `z = ½`,
/// `Z = L(½) · (L(½)|_{x0↔x1})⁻¹`.
pub fn associator_by_reflection(local: &LogTaylor) -> Result<CSeries> {
    let l = Transporter::at(local, c(0.5, 0.0))?.value;
    Ok(l.mul(&l.swap_letters().grouplike_inverse()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mzv::zeta_numeric;
    use crate::word::w;
    use std::f64::consts::PI;

    #[test]
    fn transport_agrees_with_local_expansion() {
        let local = LogTaylor::new(6);
        let mut t = Transporter::at(&local, c(0.3, 0.2)).unwrap();
        t.transport(&[c(-0.2, 0.5), c(0.6, -0.1), c(0.1, -0.6)], DEFAULT_CLEARANCE).unwrap();
        let direct = local.eval(c(0.1, -0.6)).unwrap().0;
        assert!((&t.value - &direct).max_abs() < 1e-13, "{}", (&t.value - &direct).max_abs());
    }

    #[test]
    fn homotopic_paths_agree_and_stay_grouplike() {
        let local = LogTaylor::new(6);
        let t = Transporter::at(&local, c(0.5, 0.3)).unwrap();
        let a = t.transported(&[c(1.5, 0.8), c(2.0, 0.1)], DEFAULT_CLEARANCE).unwrap();
        let b = t.transported(&[c(0.9, 1.5), c(2.5, 1.0), c(2.0, 0.1)], DEFAULT_CLEARANCE).unwrap();
        assert!((&a.value - &b.value).max_abs() < 1e-12);
        assert!(a.value.shuffle_defect(6) < 1e-11);
    }

    #[test]
    fn loop_around_neither_point_is_trivial() {
        let local = LogTaylor::new(5);
        let base = c(0.5, 0.05);
        let t = Transporter::at(&local, base).unwrap();
        let mut path = Vec::new();
        // Circle about 0.5 + i through 0.5 + 0.1i, enclosing neither point.
        for k in 0..=32 {
            path.push(c(0.5, 1.0) + Complex64::from_polar(0.9, -PI / 2.0 + 2.0 * PI * k as f64 / 32.0));
        }
        let path: Vec<Complex64> = std::iter::once(c(0.5, 0.1)).chain(path).chain(std::iter::once(base)).collect();
        let after = t.transported(&path, DEFAULT_CLEARANCE).unwrap();
        assert!((&after.value - &t.value).max_abs() < 1e-12);
    }

    #[test]
    fn monodromy_at_zero() {
        let local = LogTaylor::new(5);
        let base = c(0.5, 0.05);
        let t = Transporter::at(&local, base).unwrap();
        let after = t.transported(&loop_path(base, LoopAround::Zero, 0.5, 48), DEFAULT_CLEARANCE).unwrap();
        assert!((after.value[w("0")] - t.value[w("0")] - c(0.0, 2.0 * PI)).norm() < 1e-13);
        let expect = CSeries::exp_letter(0, c(0.0, 2.0 * PI), 5).mul(&t.value);
        assert!((&after.value - &expect).max_abs() < 1e-11);
    }

    #[test]
    fn monodromy_at_one() {
        let local = LogTaylor::new(5);
        let base = c(0.5, 0.05);
        let t = Transporter::at(&local, base).unwrap();
        let after = t.transported(&loop_path(base, LoopAround::One, 0.5, 48), DEFAULT_CLEARANCE).unwrap();
        assert!((after.value[w("1")] - t.value[w("1")] - c(0.0, 2.0 * PI)).norm() < 1e-13);
        let z = associator_by_reflection(&local).unwrap();
        let m1 = z.mul(&CSeries::exp_letter(1, c(0.0, 2.0 * PI), 5)).mul(&z.grouplike_inverse());
        let expect = m1.mul(&t.value);
        assert!((&after.value - &expect).max_abs() < 1e-11);
    }

    #[test]
    fn path_too_close_is_reported() {
        let local = LogTaylor::new(3);
        let mut t = Transporter::at(&local, c(0.5, 0.5)).unwrap();
        let err = t.transport(&[c(1.0, -1e-6), c(1.5, 0.0)], DEFAULT_CLEARANCE).unwrap_err();
        assert!(matches!(err, Error::PathTooClose { .. }));
    }

    #[test]
    fn two_routes_to_the_associator() {
        let local = LogTaylor::new(6);
        let est = regularized_limit_at_1(&local).unwrap();
        let eps = &est.value;
        let refl = associator_by_reflection(&local).unwrap();
        assert!((eps[w("1")]).norm() < 1e-12, "{}", eps[w("1")]);
        assert!((eps[w("10")].re + zeta_numeric(2)).abs() < 1e-9);
        assert!((eps[w("100")].re + zeta_numeric(3)).abs() < 1e-9);
        for x in (0..=4).flat_map(Word::all_of_length) {
            let d = (eps[x] - refl[x]).norm();
            assert!((x.len() > 3 || d < 1e-8) && d < 10.0 * est.error(x) + 1e-13, "{x}: {} vs {}, est {}", eps[x], refl[x], est.error(x));
        }
    }
}
