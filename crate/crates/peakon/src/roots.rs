//! Root-finding kernels: bracketed bisection with a safeguarded Newton polish,
//! and real-root isolation for polynomials via the derivative chain.
//!
//! Companion-matrix methods are deliberately not used; every root comes from a
//! certified bracket.

use crate::poly::Poly;

/// Relative tolerance on the bracket width at which bisection stops.
const BRACKET_TOL: f64 = 1e-15;

/// Root of a strictly increasing function on the open interval `(lo, hi)`.
///
/// The endpoints are never evaluated (they may be poles); monotonicity alone
/// steers the bisection. `df` drives the Newton polish once the bracket is
/// small.
pub fn root_increasing<F, D>(f: F, df: D, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    debug_assert!(lo < hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket exhausted at f64 resolution
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        if hi - lo <= BRACKET_TOL * scale {
            break;
        }
    }
    newton_polish(&f, &df, 0.5 * (lo + hi), lo, hi)
}

/// A few Newton iterations confined to the bracket; falls back to the midpoint
/// when a step escapes.
fn newton_polish<F, D>(f: &F, df: &D, mut x: f64, lo: f64, hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    for _ in 0..8 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let step = fx / d;
        let next = x - step;
        if !(next > lo && next < hi) {
            break;
        }
        x = next;
        if step.abs() <= 1e-16 * x.abs().max(1e-300) {
            break;
        }
    }
    x
}

/// Root of a general continuous function on `[lo, hi]` given a sign change
/// `f(lo)` vs `f(hi)`. Plain bisection plus Newton polish.
pub fn root_bracketed<F, D>(f: F, df: D, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    let fhi = f(hi);
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(flo * fhi < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = v;
        } else {
            hi = mid;
        }
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        if hi - lo <= BRACKET_TOL * scale {
            break;
        }
    }
    newton_polish(&f, &df, 0.5 * (lo + hi), lo, hi)
}

/// All real roots of a polynomial, ascending, via recursive isolation between
/// the roots of the derivative.
///
/// Intended for the modest degrees produced by transfer matrices; multiple
/// roots are reported once.
pub fn poly_real_roots(p: &Poly<f64>) -> Vec<f64> {
    let Some(deg) = p.degree() else {
        return Vec::new(); // zero polynomial: roots are not isolated
    };
    if deg == 0 {
        return Vec::new();
    }
    let coeffs = p.coeffs();
    if deg == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }

    // All real roots lie within the Cauchy bound.
    let lead = coeffs[deg].abs();
    let bound = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max);

    let crit = poly_real_roots(&p.derivative());
    let mut nodes = Vec::with_capacity(crit.len() + 2);
    nodes.push(-bound);
    nodes.extend(crit.into_iter().filter(|c| c.abs() < bound));
    nodes.push(bound);

    let scale = p.max_abs_coeff().max(f64::MIN_POSITIVE);
    let dp = p.derivative();
    let mut roots = Vec::new();
    for w in nodes.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(lo < hi) {
            continue;
        }
        let (flo, fhi) = (p.eval(&lo), p.eval(&hi));
        // A critical point sitting on the axis is a (multiple) root.
        if flo.abs() <= 1e-13 * scale {
            push_unique(&mut roots, lo);
            continue;
        }
        if flo * fhi < 0.0 {
            let r = root_bracketed(|x| p.eval(&x), |x| dp.eval(&x), lo, hi);
            push_unique(&mut roots, r);
        }
    }
    let last = *nodes.last().unwrap();
    if p.eval(&last).abs() <= 1e-13 * scale {
        push_unique(&mut roots, last);
    }
    roots
}

fn push_unique(roots: &mut Vec<f64>, r: f64) {
    if let Some(&prev) = roots.last() {
        let scale = prev.abs().max(r.abs()).max(1e-300);
        if (r - prev).abs() <= 1e-12 * scale {
            return;
        }
    }
    roots.push(r);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[f64]) -> Poly<f64> {
        Poly::new(cs.to_vec())
    }

    #[test]
    fn linear_and_quadratic_roots() {
        assert_eq!(poly_real_roots(&p(&[1.0, -4.0])), vec![0.25]);
        // (x - 1)(x - 3) = 3 - 4x + x^2
        let r = poly_real_roots(&p(&[3.0, -4.0, 1.0]));
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn no_real_roots() {
        assert!(poly_real_roots(&p(&[1.0, 0.0, 1.0])).is_empty());
    }

    #[test]
    fn clustered_quartic() {
        // (x - 1)(x - 1.001)(x + 2)(x - 5)
        let a = p(&[-1.0, 1.0]);
        let b = p(&[-1.001, 1.0]);
        let c = p(&[2.0, 1.0]);
        let d = p(&[-5.0, 1.0]);
        let q = a.mul(&b).mul(&c).mul(&d);
        let r = poly_real_roots(&q);
        assert_eq!(r.len(), 4);
        assert!((r[0] + 2.0).abs() < 1e-10);
        assert!((r[1] - 1.0).abs() < 1e-8);
        assert!((r[2] - 1.001).abs() < 1e-8);
        assert!((r[3] - 5.0).abs() < 1e-10);
    }

    #[test]
    fn increasing_branch_root() {
        // 1/(0.25 - x) = 2 on (-inf, 0.25): x = -0.25
        let f = |x: f64| 0.5 / (0.25 - x) - 1.0;
        let df = |x: f64| 0.5 / ((0.25 - x) * (0.25 - x));
        let r = root_increasing(f, df, -10.0, 0.25 - 1e-12);
        assert!((r + 0.25).abs() < 1e-13);
    }
}
