//! Rational Herglotz functions `alpha + sum nu_k / (gamma_k - lambda)` with
//! positive residues: evaluation, level-set root systems (Jacobi ellipsoidal
//! coordinates), Moebius and parameter transforms, and the Boole-type sum
//! identities.
//!
//! A function is stored in two linked representations: the partial-fraction
//! sum (when expressible in the active scalar type) and a polynomial fraction
//! (always). Transforms of exact-rational functions generally move the poles
//! to irrational points, so those results stay fraction-backed; all identity
//! and round-trip checks compare fractions by cross multiplication.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{Poly, RatFn};
use crate::roots::{poly_real_roots, root_increasing};
use crate::scalar::{Rat, Scalar};

/// Relative tolerance for "x equals a pole" in evaluation.
const POLE_EVAL_EPS: f64 = 1e-12;
/// Relative tolerance for "level equals the constant at infinity".
const LEVEL_ALPHA_EPS: f64 = 1e-13;

/// Partial-fraction data: constant at infinity, increasing poles, residues.
#[derive(Clone, Debug, PartialEq)]
pub struct SumForm<T: Scalar> {
    pub alpha: T,
    pub poles: Vec<T>,
    pub residues: Vec<T>,
}

/// Which interlacing pattern the level roots satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Level above the constant at infinity: each root sits below its pole.
    BelowPoles,
    /// Level below the constant at infinity: each root sits above its pole.
    AbovePoles,
}

/// Roots of `f(chi) = level`, strictly interlacing the poles of `f`.
#[derive(Clone, Debug)]
pub struct LevelRoots {
    pub level: f64,
    pub roots: Vec<f64>,
    pub side: Side,
}

/// Moments `s_n = sum nu_k gamma_k^n` of the residue measure.
#[derive(Clone, Debug)]
pub struct Moments<T: Scalar> {
    /// `s_-1`; absent when some pole sits at zero.
    pub s_minus1: Option<T>,
    pub s0: T,
    pub s1: T,
}

/// Both sides of one sum identity.
pub type IdentityPair<T> = (T, T);

/// Report for the three level-root sum identities.
#[derive(Clone, Debug)]
pub struct BooleReport<T: Scalar> {
    /// `(C - alpha) * sum(gamma_k - chi_k)` vs `s0`.
    pub first: IdentityPair<T>,
    /// `(C - alpha)^2 * sum(gamma_k^2 - chi_k^2)` vs `2 s1 (C - alpha) - s0^2`.
    pub second: IdentityPair<T>,
    /// `prod(gamma_k / chi_k)` vs `C / (C - s_-1)`; present only when the
    /// product form applies (no constant term, positive poles, `C > s_-1`).
    pub product: Option<IdentityPair<T>>,
}

/// Interlacing diagnostics for the level roots.
#[derive(Clone, Debug)]
pub struct NyDiagnostics {
    /// `sum |gamma_k - chi_k|`.
    pub ks_sum: f64,
    /// `sum (gamma_k/chi_k - 1)` above the constant, `sum (chi_k/gamma_k - 1)`
    /// below; absent when some pole or root is nonpositive.
    pub ny_sum: Option<f64>,
}

/// Rational Herglotz function.
#[derive(Clone, Debug)]
pub struct Herglotz<T: Scalar> {
    sum: Option<SumForm<T>>,
    frac: RatFn<T>,
}

fn build_fraction<T: Scalar>(sum: &SumForm<T>) -> RatFn<T> {
    // den = prod (gamma_k - lambda), num = alpha * den + sum nu_k * prod_{j != k}
    let n = sum.poles.len();
    let factors: Vec<Poly<T>> = sum
        .poles
        .iter()
        .map(|g| Poly::new(vec![g.clone(), -T::one()]))
        .collect();
    let mut den = Poly::constant(T::one());
    for f in &factors {
        den = den.mul(f);
    }
    let mut num = den.scale(&sum.alpha);
    for k in 0..n {
        let mut partial = Poly::constant(sum.residues[k].clone());
        for (j, f) in factors.iter().enumerate() {
            if j != k {
                partial = partial.mul(f);
            }
        }
        num = num.add(&partial);
    }
    RatFn::new(num, den)
}

impl<T: Scalar> Herglotz<T> {
    /// Strict constructor: poles strictly increasing, residues positive.
    pub fn new(alpha: T, poles: Vec<T>, residues: Vec<T>) -> Result<Self> {
        Self::validate(&poles, &residues, true)?;
        let sum = SumForm { alpha, poles, residues };
        let frac = build_fraction(&sum);
        Ok(Herglotz { sum: Some(sum), frac })
    }

    /// Signed constructor: residues only need to be nonzero. Positivity-based
    /// operations (level roots, identities) reject such functions.
    pub fn new_signed(alpha: T, poles: Vec<T>, residues: Vec<T>) -> Result<Self> {
        Self::validate(&poles, &residues, false)?;
        let sum = SumForm { alpha, poles, residues };
        let frac = build_fraction(&sum);
        Ok(Herglotz { sum: Some(sum), frac })
    }

    fn validate(poles: &[T], residues: &[T], strict: bool) -> Result<()> {
        if poles.len() != residues.len() {
            return Err(Error::InvalidInput(format!(
                "{} poles but {} residues",
                poles.len(),
                residues.len()
            )));
        }
        for x in poles.iter().chain(residues.iter()) {
            if !x.to_f64().is_finite() {
                return Err(Error::InvalidInput(format!("non-finite entry {x}")));
            }
        }
        for w in poles.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidInput(format!(
                    "poles not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for (k, r) in residues.iter().enumerate() {
            if r.is_zero() {
                return Err(Error::InvalidInput(format!("residue {k} is zero")));
            }
            if strict && *r < T::zero() {
                return Err(Error::InvalidInput(format!(
                    "residue {k} = {r} is negative"
                )));
            }
        }
        Ok(())
    }

    /// The constant function `alpha`.
    pub fn constant(alpha: T) -> Self {
        let sum = SumForm { alpha, poles: Vec::new(), residues: Vec::new() };
        let frac = build_fraction(&sum);
        Herglotz { sum: Some(sum), frac }
    }

    /// Wraps a polynomial fraction bounded at infinity. No sum form attached.
    pub(crate) fn from_fraction(frac: RatFn<T>) -> Self {
        debug_assert!(
            frac.value_at_infinity().is_some(),
            "Herglotz functions are bounded at infinity"
        );
        Herglotz { sum: None, frac }
    }


    /// Constant term at infinity.
    pub fn alpha(&self) -> T {
        match &self.sum {
            Some(s) => s.alpha.clone(),
            None => self
                .frac
                .value_at_infinity()
                .expect("fraction bounded at infinity"),
        }
    }

    /// Number of poles (counted from the sum when present, else from the
    /// denominator degree of the reduced fraction).
    pub fn n_poles(&self) -> usize {
        match &self.sum {
            Some(s) => s.poles.len(),
            None => self.frac.den.degree().unwrap_or(0),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.n_poles() == 0
    }

    pub fn sum_form(&self) -> Option<&SumForm<T>> {
        self.sum.as_ref()
    }

    pub fn fraction(&self) -> &RatFn<T> {
        &self.frac
    }

    /// Evaluation away from poles.
    pub fn eval(&self, x: &T) -> Result<T> {
        if let Some(sum) = &self.sum {
            for (k, g) in sum.poles.iter().enumerate() {
                let gap = (x.clone() - g.clone()).abs().to_f64();
                let scale = g.abs().to_f64().max(1.0);
                if gap <= POLE_EVAL_EPS * scale {
                    return Err(Error::PoleEvaluation { index: k, pole: g.to_f64() });
                }
            }
            let mut acc = sum.alpha.clone();
            for (g, r) in sum.poles.iter().zip(&sum.residues) {
                acc = acc + r.clone() / (g.clone() - x.clone());
            }
            Ok(acc)
        } else {
            let d = self.frac.den.eval(x);
            let scale = self.frac.den.max_abs_coeff().max(f64::MIN_POSITIVE);
            if d.to_f64().abs() <= POLE_EVAL_EPS * scale {
                return Err(Error::PoleEvaluation { index: 0, pole: x.to_f64() });
            }
            Ok(self.frac.num.eval(x) / d)
        }
    }

    /// `self + c`: shifts the constant term, poles and residues unchanged.
    pub fn add_const(&self, c: &T) -> Self {
        let sum = self.sum.as_ref().map(|s| SumForm {
            alpha: s.alpha.clone() + c.clone(),
            poles: s.poles.clone(),
            residues: s.residues.clone(),
        });
        Herglotz { sum, frac: self.frac.add_const(c) }
    }

    /// `-1/(f - s)` in pole/residue form where representable.
    ///
    /// The poles of the result are the level roots of `f` at `s`; a closed
    /// form covers at most one pole, beyond that the result stays
    /// fraction-backed (exact scalars cannot express the irrational roots).
    /// See [`Herglotz::mobius_with_sum`] for the floating-point enrichment.
    pub fn mobius_shift_invert(&self, s: &T) -> Result<Self> {
        let alpha = self.alpha();
        let alpha_shift = alpha.clone() - s.clone();
        if self.is_constant() {
            if alpha_shift.is_zero() {
                return Err(Error::ZeroFunction);
            }
            return Ok(Herglotz::constant(-T::one() / alpha_shift));
        }
        let near_zero = if T::EXACT {
            alpha_shift.is_zero()
        } else {
            alpha_shift.to_f64().abs()
                <= LEVEL_ALPHA_EPS * alpha.to_f64().abs().max(s.to_f64().abs()).max(1.0)
        };
        if near_zero {
            // f - s vanishes at infinity, so -1/(f - s) grows linearly and
            // leaves the representable class.
            return Err(Error::LevelEqualsAlpha { level: s.to_f64() });
        }

        let shifted = self.frac.sub_const(s);
        let frac = RatFn::new(shifted.den.neg(), shifted.num);
        let new_alpha = -T::one() / alpha_shift.clone();

        if let Some(sum) = &self.sum {
            if sum.poles.len() == 1 {
                // Single pole: the level root and its residue are closed forms.
                let g = sum.poles[0].clone();
                let nu = sum.residues[0].clone();
                let chi = g.clone() - nu.clone() / (s.clone() - alpha.clone());
                let dgap = g - chi.clone();
                let residue = dgap.clone() * dgap / nu;
                let out = SumForm {
                    alpha: new_alpha,
                    poles: vec![chi],
                    residues: vec![residue],
                };
                return Ok(Herglotz { sum: Some(out), frac });
            }
        }
        Ok(Herglotz { sum: None, frac })
    }

    /// `-1/f`.
    pub fn negate_invert(&self) -> Result<Self> {
        self.mobius_shift_invert(&T::zero())
    }

    /// Representation in the flipped parameter `lambda' = -1/lambda`:
    /// poles `-1/gamma_k`, residues `nu_k / gamma_k^2`, constant `f(0)`.
    /// An involution; requires no pole at zero.
    pub fn flip_parameter(&self) -> Result<Self> {
        if let Some(sum) = &self.sum {
            let mut mapped: Vec<(T, T)> = Vec::with_capacity(sum.poles.len());
            for (g, r) in sum.poles.iter().zip(&sum.residues) {
                if g.is_zero()
                    || (!T::EXACT && g.to_f64().abs() <= f64::MIN_POSITIVE.sqrt())
                {
                    return Err(Error::PoleAtZero);
                }
                let new_pole = -T::one() / g.clone();
                let new_res = r.clone() / (g.clone() * g.clone());
                mapped.push((new_pole, new_res));
            }
            let mut alpha = sum.alpha.clone();
            for (g, r) in sum.poles.iter().zip(&sum.residues) {
                alpha = alpha + r.clone() / g.clone();
            }
            mapped.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable poles"));
            let (poles, residues) = mapped.into_iter().unzip();
            let out = SumForm { alpha, poles, residues };
            let frac = build_fraction(&out);
            return Ok(Herglotz { sum: Some(out), frac });
        }
        // Fraction-backed: substitute lambda = -1/mu and clear powers of mu.
        if self.frac.den.eval(&T::zero()).is_zero() {
            return Err(Error::PoleAtZero);
        }
        let d = self.frac.den.degree().expect("nonzero denominator");
        let rev = |p: &Poly<T>| {
            let coeffs = (0..=d)
                .map(|j| {
                    let c = p.coeff(d - j);
                    if (d - j) % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .collect();
            Poly::new(coeffs)
        };
        Ok(Herglotz::from_fraction(RatFn::new(
            rev(&self.frac.num),
            rev(&self.frac.den),
        )))
    }

    /// Moments of the residue measure; requires the sum form.
    pub fn moments(&self) -> Result<Moments<T>> {
        let sum = self
            .sum
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("moments need pole/residue data".into()))?;
        let mut s0 = T::zero();
        let mut s1 = T::zero();
        let mut s_minus1 = Some(T::zero());
        for (g, r) in sum.poles.iter().zip(&sum.residues) {
            s0 = s0 + r.clone();
            s1 = s1 + r.clone() * g.clone();
            s_minus1 = match s_minus1 {
                Some(acc) if !g.is_zero() => Some(acc + r.clone() / g.clone()),
                _ => None,
            };
        }
        Ok(Moments { s_minus1, s0, s1 })
    }

    /// Equality as rational functions (cross multiplication, exact).
    pub fn fraction_eq(&self, other: &Self) -> bool {
        self.frac.cross_eq(&other.frac)
    }

    /// Relative comparison as rational functions.
    pub fn fraction_approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.frac.approx_eq(&other.frac, tol)
    }

    /// Polynomial fraction with exactly lifted coefficients: expanded from
    /// the sum form when present, so no floating-point product rounding
    /// enters the algebra downstream (the fraction-to-string map is far more
    /// ill-conditioned than the pole/residue data itself).
    pub fn exact_fraction(&self) -> RatFn<Rat> {
        match &self.sum {
            Some(s) => build_fraction(&SumForm {
                alpha: s.alpha.to_rat(),
                poles: s.poles.iter().map(Scalar::to_rat).collect(),
                residues: s.residues.iter().map(Scalar::to_rat).collect(),
            }),
            None => RatFn::new(
                Poly::new(self.frac.num.coeffs().iter().map(Scalar::to_rat).collect()),
                Poly::new(self.frac.den.coeffs().iter().map(Scalar::to_rat).collect()),
            ),
        }
    }

    /// Floating-point view of the function.
    pub fn to_f64(&self) -> Herglotz<f64> {
        let sum = self.sum.as_ref().map(|s| SumForm {
            alpha: s.alpha.to_f64(),
            poles: s.poles.iter().map(Scalar::to_f64).collect(),
            residues: s.residues.iter().map(Scalar::to_f64).collect(),
        });
        Herglotz { sum, frac: self.frac.to_f64() }
    }
}

impl Herglotz<f64> {
    /// Derivative `f'(x) = sum nu_k / (gamma_k - x)^2` (or the quotient rule
    /// on the fraction when no sum is attached).
    pub fn derivative_at(&self, x: f64) -> f64 {
        match &self.sum {
            Some(sum) => sum
                .poles
                .iter()
                .zip(&sum.residues)
                .map(|(g, r)| {
                    let d = g - x;
                    r / (d * d)
                })
                .sum(),
            None => {
                let n = self.frac.num.eval(&x);
                let d = self.frac.den.eval(&x);
                let np = self.frac.num.derivative().eval(&x);
                let dp = self.frac.den.derivative().eval(&x);
                (np * d - n * dp) / (d * d)
            }
        }
    }

    /// All `n` real solutions of `f(chi) = level`, bracketed by interlacing
    /// with the poles and refined by bisection plus safeguarded Newton.
    pub fn level_roots(&self, level: f64) -> Result<LevelRoots> {
        let sum = self
            .sum
            .as_ref()
            .ok_or_else(|| Error::Numerical("level roots need pole/residue data".into()))?;
        let n = sum.poles.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "level roots of a constant function".into(),
            ));
        }
        if sum.residues.iter().any(|r| *r <= 0.0) {
            return Err(Error::Numerical(
                "level roots require positive residues".into(),
            ));
        }
        let alpha = sum.alpha;
        let cc = level - alpha;
        if cc.abs() <= LEVEL_ALPHA_EPS * alpha.abs().max(level.abs()).max(1.0) {
            return Err(Error::LevelEqualsAlpha { level });
        }

        let poles = &sum.poles;
        let residues = &sum.residues;
        let g = |x: f64| -> f64 {
            poles
                .iter()
                .zip(residues)
                .map(|(p, r)| r / (p - x))
                .sum::<f64>()
                - cc
        };
        let dg = |x: f64| -> f64 {
            poles
                .iter()
                .zip(residues)
                .map(|(p, r)| {
                    let d = p - x;
                    r / (d * d)
                })
                .sum()
        };
        let s0: f64 = residues.iter().sum();

        let mut roots = Vec::with_capacity(n);
        let side;
        if cc > 0.0 {
            side = Side::BelowPoles;
            // One root left of the first pole, then one per interior gap.
            let margin = 2.0 * s0 / cc + 1.0;
            roots.push(root_increasing(g, dg, poles[0] - margin, poles[0]));
            for w in poles.windows(2) {
                roots.push(root_increasing(g, dg, w[0], w[1]));
            }
        } else {
            side = Side::AbovePoles;
            // One root per interior gap, then one right of the last pole.
            for w in poles.windows(2) {
                roots.push(root_increasing(g, dg, w[0], w[1]));
            }
            let margin = 2.0 * s0 / cc.abs() + 1.0;
            roots.push(root_increasing(
                g,
                dg,
                poles[n - 1],
                poles[n - 1] + margin,
            ));
        }

        let out = LevelRoots { level, roots, side };
        self.check_level_roots(&out)?;
        Ok(out)
    }

    fn check_level_roots(&self, lr: &LevelRoots) -> Result<()> {
        let sum = self.sum.as_ref().expect("checked by caller");
        let cc = lr.level - sum.alpha;
        for (k, &chi) in lr.roots.iter().enumerate() {
            let (ok, g) = match lr.side {
                Side::BelowPoles => (chi < sum.poles[k], sum.poles[k]),
                Side::AbovePoles => (chi > sum.poles[k], sum.poles[k]),
            };
            if !ok {
                return Err(Error::Numerical(format!(
                    "interlacing violated: root {chi} vs pole {g}"
                )));
            }
            // Residual measured in the gap variable: every term is formed
            // from pole differences, so the check stays well-defined even
            // when the root sits within rounding distance of its pole.
            let g_k = sum.poles[k];
            let d = g_k - chi;
            let mut val = -cc;
            let mut slope = 0.0;
            for (g, r) in sum.poles.iter().zip(&sum.residues) {
                let den = (g - g_k) + d;
                val += r / den;
                slope += r / (den * den);
            }
            // Backward error: the Newton correction must be negligible
            // relative to the root scale.
            let step = val / slope;
            if !(step.abs() <= 1e-8 * chi.abs().max(1.0)) {
                return Err(Error::Numerical(format!(
                    "level-root correction {:e} too large at root {k}",
                    step.abs()
                )));
            }
        }
        for w in lr.roots.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Numerical("level roots not increasing".into()));
            }
        }
        Ok(())
    }

    /// Like [`Herglotz::mobius_shift_invert`] but always attaches the sum
    /// form: the poles come from the level roots of `f` at `s` (never from
    /// polynomial coefficient root extraction) and each residue is
    /// `1 / f'(chi_k)`.
    pub fn mobius_with_sum(&self, s: f64) -> Result<Self> {
        let base = self.mobius_shift_invert(&s)?;
        if base.sum.is_some() {
            return Ok(base);
        }
        let lr = self.level_roots(s)?;
        let residues: Vec<f64> = lr.roots.iter().map(|&chi| 1.0 / self.derivative_at(chi)).collect();
        let alpha = -1.0 / (self.alpha() - s);
        let sum = SumForm { alpha, poles: lr.roots, residues };
        Ok(Herglotz { sum: Some(sum), frac: base.frac })
    }

    /// Recovers a sum form from the fraction by real-root isolation of the
    /// denominator. Fails when the denominator has fewer real simple roots
    /// than its degree.
    pub fn recovered_sum(&self) -> Result<Self> {
        if self.sum.is_some() {
            return Ok(self.clone());
        }
        let deg = self.frac.den.degree().unwrap_or(0);
        let poles = poly_real_roots(&self.frac.den);
        if poles.len() != deg {
            return Err(Error::Numerical(format!(
                "denominator of degree {deg} has {} isolated real roots",
                poles.len()
            )));
        }
        let dden = self.frac.den.derivative();
        let residues: Vec<f64> = poles
            .iter()
            .map(|&g| -self.frac.num.eval(&g) / dden.eval(&g))
            .collect();
        let alpha = self.alpha();
        Ok(Herglotz {
            sum: Some(SumForm { alpha, poles, residues }),
            frac: self.frac.clone(),
        })
    }

    /// Both sides of the first and second level-root identities, and of the
    /// product identity when its domain conditions hold.
    /// The pole-to-root gaps entering the sums are re-solved in the gap
    /// variable itself, so they carry full relative precision even when a
    /// root hugs its pole.
    pub fn boole_identities(&self, level: f64) -> Result<BooleReport<f64>> {
        let lr = self.level_roots(level)?;
        let sum = self.sum.as_ref().expect("level_roots requires sum form");
        let m = self.moments()?;
        let cc = level - sum.alpha;

        let gaps: Vec<f64> = lr
            .roots
            .iter()
            .enumerate()
            .map(|(k, &chi)| self.refined_pole_gap(k, chi, cc))
            .collect();
        let sum_gap: f64 = gaps.iter().sum();
        // gamma^2 - chi^2 = d (2 gamma - d) with d = gamma - chi.
        let sum_gap2: f64 = sum
            .poles
            .iter()
            .zip(&gaps)
            .map(|(g, d)| d * (2.0 * g - d))
            .sum();
        let first = (cc * sum_gap, m.s0);
        let second = (cc * cc * sum_gap2, 2.0 * m.s1 * cc - m.s0 * m.s0);
        let product = self.product_identity_pair(&lr, &m, level);
        Ok(BooleReport { first, second, product })
    }

    /// Signed gap `gamma_k - chi_k`, polished by Newton in the gap variable:
    /// every term of `f(gamma_k - d) - level` is formed from pole differences
    /// and `d` directly, avoiding the cancellation of nearby values.
    fn refined_pole_gap(&self, k: usize, chi: f64, cc: f64) -> f64 {
        let sum = self.sum.as_ref().expect("sum form present");
        let g_k = sum.poles[k];
        let mut d = g_k - chi;
        for _ in 0..3 {
            let mut val = -cc;
            let mut slope = 0.0;
            for (g, r) in sum.poles.iter().zip(&sum.residues) {
                let den = (g - g_k) + d;
                val += r / den;
                slope -= r / (den * den);
            }
            let step = val / slope;
            let next = d - step;
            // The gap keeps its sign; a step across zero would leave the branch.
            if next == 0.0 || next.signum() != d.signum() {
                break;
            }
            d = next;
            if step.abs() <= 1e-16 * d.abs() {
                break;
            }
        }
        d
    }

    fn product_identity_pair(
        &self,
        lr: &LevelRoots,
        m: &Moments<f64>,
        level: f64,
    ) -> Option<IdentityPair<f64>> {
        let sum = self.sum.as_ref()?;
        let s_m1 = m.s_minus1?;
        if sum.alpha != 0.0 || !(level > s_m1) || sum.poles.iter().any(|&g| g <= 0.0) {
            return None;
        }
        let mut ratio = 1.0;
        for (g, chi) in sum.poles.iter().zip(&lr.roots) {
            ratio *= g / chi;
        }
        Some((ratio, level / (level - s_m1)))
    }

    /// The product identity with its domain conditions enforced.
    pub fn boole_product(&self, level: f64) -> Result<IdentityPair<f64>> {
        let lr = self.level_roots(level)?;
        let m = self.moments()?;
        self.product_identity_pair(&lr, &m, level)
            .ok_or_else(|| {
                Error::InvalidInput(
                    "product identity needs alpha = 0, positive poles, and level > s_-1"
                        .into(),
                )
            })
    }

    /// Interlacing-gap diagnostics for the level roots.
    pub fn ny_diagnostics(&self, level: f64) -> Result<NyDiagnostics> {
        if self.n_poles() == 0 {
            return Ok(NyDiagnostics { ks_sum: 0.0, ny_sum: Some(0.0) });
        }
        let lr = self.level_roots(level)?;
        let sum = self.sum.as_ref().expect("level_roots requires sum form");
        let ks_sum = sum
            .poles
            .iter()
            .zip(&lr.roots)
            .map(|(g, chi)| (g - chi).abs())
            .sum();
        let positive = sum.poles.iter().all(|&g| g > 0.0) && lr.roots.iter().all(|&c| c > 0.0);
        let ny_sum = positive.then(|| {
            sum.poles
                .iter()
                .zip(&lr.roots)
                .map(|(g, chi)| match lr.side {
                    Side::BelowPoles => g / chi - 1.0,
                    Side::AbovePoles => chi / g - 1.0,
                })
                .sum()
        });
        Ok(NyDiagnostics { ks_sum, ny_sum })
    }

    /// JSON object `{alpha, poles, residues}`.
    pub fn to_json(&self) -> Result<Value> {
        let sum = self.sum.as_ref().ok_or_else(|| {
            Error::InvalidInput("function has no pole/residue form to serialize".into())
        })?;
        Ok(json!({
            "alpha": sum.alpha,
            "poles": sum.poles,
            "residues": sum.residues,
        }))
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (alpha, poles, residues) = parse_sum_json(v, |x| Ok(x.to_f64()))?;
        Herglotz::new(alpha, poles, residues)
    }

    /// Parses without sign validation; used to probe corrupted data.
    pub fn from_json_unvalidated(v: &Value) -> Result<Self> {
        let (alpha, poles, residues) = parse_sum_json(v, |x| Ok(x.to_f64()))?;
        Herglotz::new_signed(alpha, poles, residues)
    }
}

impl Herglotz<Rat> {
    /// Exact identity check: the root power sums come from the coefficients
    /// of the level polynomial (Newton/Vieta), so both sides are exact
    /// rationals and must agree exactly.
    pub fn boole_identities(&self, level: &Rat) -> Result<BooleReport<Rat>> {
        let sum = self
            .sum
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("exact identities need pole data".into()))?;
        let n = sum.poles.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "level roots of a constant function".into(),
            ));
        }
        if sum.residues.iter().any(|r| *r <= Rat::zero()) {
            return Err(Error::Numerical(
                "level roots require positive residues".into(),
            ));
        }
        let cc = level.clone() - sum.alpha.clone();
        if cc.is_zero() {
            return Err(Error::LevelEqualsAlpha { level: level.to_f64() });
        }

        // Level polynomial P = num - level * den, degree n exactly.
        let p = self.frac.num.sub(&self.frac.den.scale(level));
        assert_eq!(p.degree(), Some(n), "level polynomial degree");
        let lead = p.coeff(n);
        let e1 = -p.coeff(n - 1) / lead.clone();
        let e2 = if n >= 2 {
            p.coeff(n - 2) / lead.clone()
        } else {
            Rat::zero()
        };
        let chi_sum = e1.clone();
        let chi_sum2 = e1.clone() * e1 - Rat::from_int(2) * e2;

        let m = self.moments()?;
        let mut pole_sum = Rat::zero();
        let mut pole_sum2 = Rat::zero();
        for g in &sum.poles {
            pole_sum = pole_sum + g.clone();
            pole_sum2 = pole_sum2 + g.clone() * g.clone();
        }
        let first = (cc.clone() * (pole_sum - chi_sum), m.s0.clone());
        let second = (
            cc.clone() * cc.clone() * (pole_sum2 - chi_sum2),
            Rat::from_int(2) * m.s1.clone() * cc.clone() - m.s0.clone() * m.s0.clone(),
        );

        let product = match (&m.s_minus1, sum.alpha.is_zero()) {
            (Some(sm1), true)
                if level > sm1 && sum.poles.iter().all(|g| *g > Rat::zero()) =>
            {
                // prod chi = (-1)^n P(0)/lead and prod gamma = den(0).
                let mut chi_prod = p.coeff(0) / lead.clone();
                if n % 2 == 1 {
                    chi_prod = -chi_prod;
                }
                let pole_prod = self.frac.den.coeff(0);
                let lhs = pole_prod / chi_prod;
                let rhs = level.clone() / (level.clone() - sm1.clone());
                Some((lhs, rhs))
            }
            _ => None,
        };
        Ok(BooleReport { first, second, product })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (alpha, poles, residues) = parse_sum_json(v, |x| match x {
            JsonNum::Int(i) => Ok(Rat::from_int(i)),
            JsonNum::Float(f) => Err(Error::InvalidInput(format!(
                "exact mode needs integers or \"p/q\" strings, got {f}"
            ))),
            JsonNum::Str(s) => s
                .parse::<Rat>()
                .map_err(|e| Error::InvalidInput(format!("bad rational {s:?}: {e}"))),
        })?;
        Herglotz::new(alpha, poles, residues)
    }

    pub fn to_json(&self) -> Result<Value> {
        let sum = self.sum.as_ref().ok_or_else(|| {
            Error::InvalidInput(
                "exact function has no rational pole/residue form; serialize its float view"
                    .into(),
            )
        })?;
        Ok(json!({
            "alpha": sum.alpha.to_string(),
            "poles": sum.poles.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "residues": sum.residues.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }))
    }
}

/// A JSON scalar that may encode a rational number.
pub(crate) enum JsonNum {
    Int(i64),
    Float(f64),
    Str(String),
}

impl JsonNum {
    fn of(v: &Value) -> Result<JsonNum> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(JsonNum::Int(i))
                } else {
                    Ok(JsonNum::Float(n.as_f64().ok_or_else(|| {
                        Error::InvalidInput(format!("bad number {n}"))
                    })?))
                }
            }
            Value::String(s) => Ok(JsonNum::Str(s.clone())),
            other => Err(Error::InvalidInput(format!("expected number, got {other}"))),
        }
    }

    fn to_f64(self) -> f64 {
        match self {
            JsonNum::Int(i) => i as f64,
            JsonNum::Float(f) => f,
            JsonNum::Str(s) => s
                .parse::<Rat>()
                .map(|r| Scalar::to_f64(&r))
                .unwrap_or(f64::NAN),
        }
    }
}

fn parse_sum_json<T, F>(v: &Value, mut conv: F) -> Result<(T, Vec<T>, Vec<T>)>
where
    F: FnMut(JsonNum) -> Result<T>,
{
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("expected a JSON object".into()))?;
    let get_list = |key: &str| -> Result<&Vec<Value>> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput(format!("missing array field {key:?}")))
    };
    let alpha_v = obj
        .get("alpha")
        .ok_or_else(|| Error::InvalidInput("missing field \"alpha\"".into()))?;
    let alpha = conv(JsonNum::of(alpha_v)?)?;
    let poles = get_list("poles")?
        .iter()
        .map(|x| conv(JsonNum::of(x)?))
        .collect::<Result<Vec<T>>>()?;
    let residues = get_list("residues")?
        .iter()
        .map(|x| conv(JsonNum::of(x)?))
        .collect::<Result<Vec<T>>>()?;
    Ok((alpha, poles, residues))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_peakon_omega0() -> Herglotz<f64> {
        Herglotz::new(2.0, vec![0.25], vec![0.5]).unwrap()
    }

    fn one_peakon_e0() -> Herglotz<f64> {
        Herglotz::new(-0.5, vec![0.5], vec![0.125]).unwrap()
    }

    #[test]
    fn eval_matches_normalizations() {
        // Omega0(0) = 4 and E0(0) = -1/4 for the unit one-peakon data.
        assert_eq!(one_peakon_omega0().eval(&0.0).unwrap(), 4.0);
        assert_eq!(one_peakon_e0().eval(&0.0).unwrap(), -0.25);
        assert_eq!(Herglotz::constant(7.0).eval(&3.0).unwrap(), 7.0);
        assert!(matches!(
            one_peakon_omega0().eval(&0.25),
            Err(Error::PoleEvaluation { .. })
        ));
    }

    #[test]
    fn level_roots_one_peakon() {
        let f = one_peakon_omega0();
        let lr = f.level_roots(1.0).unwrap();
        assert_eq!(lr.side, Side::AbovePoles);
        assert!((lr.roots[0] - 0.75).abs() < 1e-14);
        let lr = f.level_roots(0.0).unwrap();
        assert!((lr.roots[0] - 0.5).abs() < 1e-14);
        let e0 = one_peakon_e0();
        let lr = e0.level_roots(0.0).unwrap();
        assert!((lr.roots[0] - 0.25).abs() < 1e-14);
        assert_eq!(lr.side, Side::BelowPoles);
    }

    #[test]
    fn level_equals_alpha_rejected() {
        let f = one_peakon_omega0();
        assert!(matches!(
            f.level_roots(2.0),
            Err(Error::LevelEqualsAlpha { .. })
        ));
    }

    #[test]
    fn negate_invert_one_peakon() {
        let omega = one_peakon_omega0();
        let e0 = omega.negate_invert().unwrap();
        let sum = e0.sum_form().unwrap();
        assert!((sum.alpha + 0.5).abs() < 1e-15);
        assert!((sum.poles[0] - 0.5).abs() < 1e-15);
        assert!((sum.residues[0] - 0.125).abs() < 1e-15);
        // Involution, compared as rational functions.
        let back = e0.negate_invert().unwrap();
        assert!(back.fraction_approx_eq(&omega, 1e-14));
        // Constant case.
        let c = Herglotz::constant(4.0).negate_invert().unwrap();
        assert_eq!(c.eval(&1.0).unwrap(), -0.25);
    }

    #[test]
    fn negate_invert_exact_involution() {
        let omega = Herglotz::new(
            Rat::from_int(2),
            vec![Rat::new(1, 4)],
            vec![Rat::new(1, 2)],
        )
        .unwrap();
        let e0 = omega.negate_invert().unwrap();
        let sum = e0.sum_form().unwrap();
        assert_eq!(sum.alpha, Rat::new(-1, 2));
        assert_eq!(sum.poles[0], Rat::new(1, 2));
        assert_eq!(sum.residues[0], Rat::new(1, 8));
        let back = e0.negate_invert().unwrap();
        assert!(back.fraction_eq(&omega));
    }

    #[test]
    fn mobius_examples() {
        let omega = one_peakon_omega0();
        let g = omega.mobius_with_sum(1.0).unwrap();
        assert!((g.sum_form().unwrap().poles[0] - 0.75).abs() < 1e-14);
        // Shift zero coincides with plain inversion.
        let a = omega.mobius_shift_invert(&0.0).unwrap();
        let b = omega.negate_invert().unwrap();
        assert!(a.fraction_approx_eq(&b, 1e-15));
        // E0 shifted by 1: pole at 5/12.
        let e0 = one_peakon_e0();
        let h = e0.mobius_with_sum(1.0).unwrap();
        assert!((h.sum_form().unwrap().poles[0] - 5.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn flip_parameter_one_peakon_e0() {
        let e0 = one_peakon_e0();
        let flipped = e0.flip_parameter().unwrap();
        let sum = flipped.sum_form().unwrap();
        assert!((sum.alpha + 0.25).abs() < 1e-15);
        assert!((sum.poles[0] + 2.0).abs() < 1e-15);
        assert!((sum.residues[0] - 0.5).abs() < 1e-15);
        // Involution.
        let back = flipped.flip_parameter().unwrap();
        let orig = e0.sum_form().unwrap();
        let got = back.sum_form().unwrap();
        assert!((got.alpha - orig.alpha).abs() < 1e-15);
        assert!((got.poles[0] - orig.poles[0]).abs() < 1e-15);
        assert!((got.residues[0] - orig.residues[0]).abs() < 1e-15);
        // Constants are fixed points.
        let c = Herglotz::constant(3.0).flip_parameter().unwrap();
        assert_eq!(c.eval(&1.0).unwrap(), 3.0);
    }

    #[test]
    fn boole_identity_examples() {
        // Upsilon with gamma = 1/4, nu = 1/2 at level -1: chi = 3/4.
        let f = Herglotz::new(0.0, vec![0.25], vec![0.5]).unwrap();
        let rep = f.boole_identities(-1.0).unwrap();
        assert!((rep.first.0 - 0.5).abs() < 1e-14);
        assert!((rep.first.1 - 0.5).abs() < 1e-14);
        assert!((rep.second.0 + 0.5).abs() < 1e-14);
        assert!((rep.second.1 + 0.5).abs() < 1e-14);
        // Product: gamma = 1, nu = 1, level 2 > s_-1 = 1: chi = 1/2.
        let g = Herglotz::new(0.0, vec![1.0], vec![1.0]).unwrap();
        let (lhs, rhs) = g.boole_product(2.0).unwrap();
        assert!((lhs - 2.0).abs() < 1e-14);
        assert!((rhs - 2.0).abs() < 1e-14);
    }

    #[test]
    fn boole_identities_exact() {
        let f = Herglotz::new(
            Rat::zero(),
            vec![Rat::new(1, 4), Rat::new(7, 3)],
            vec![Rat::new(1, 2), Rat::new(5, 7)],
        )
        .unwrap();
        let rep = f.boole_identities(&Rat::from_int(-2)).unwrap();
        assert_eq!(rep.first.0, rep.first.1);
        assert_eq!(rep.second.0, rep.second.1);
        let rep = f.boole_identities(&Rat::from_int(3)).unwrap();
        assert_eq!(rep.first.0, rep.first.1);
        assert_eq!(rep.second.0, rep.second.1);
        let (lhs, rhs) = rep.product.expect("product applies");
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ny_diagnostics_examples() {
        let f = Herglotz::new(0.0, vec![0.25], vec![0.5]).unwrap();
        let d = f.ny_diagnostics(-1.0).unwrap();
        assert!((d.ks_sum - 0.5).abs() < 1e-14);
        assert!((d.ny_sum.unwrap() - 2.0).abs() < 1e-13);
        let c = Herglotz::constant(1.0);
        let d = c.ny_diagnostics(5.0).unwrap();
        assert_eq!(d.ks_sum, 0.0);
        assert_eq!(d.ny_sum, Some(0.0));
    }

    #[test]
    fn json_roundtrip() {
        let f = one_peakon_omega0();
        let v = f.to_json().unwrap();
        let g = Herglotz::<f64>::from_json(&v).unwrap();
        assert!(f.fraction_approx_eq(&g, 0.0));

        let exact = Herglotz::new(
            Rat::from_int(2),
            vec![Rat::new(1, 4)],
            vec![Rat::new(1, 2)],
        )
        .unwrap();
        let v = exact.to_json().unwrap();
        assert_eq!(v["poles"][0], "1/4");
        let back = Herglotz::<Rat>::from_json(&v).unwrap();
        assert!(back.fraction_eq(&exact));
    }

    #[test]
    fn negative_residue_rejected_strict_allowed_signed() {
        assert!(Herglotz::new(0.0, vec![1.0], vec![-1.0]).is_err());
        let f = Herglotz::new_signed(0.0, vec![1.0], vec![-1.0]).unwrap();
        assert!(matches!(f.level_roots(1.0), Err(Error::Numerical(_))));
    }
}
