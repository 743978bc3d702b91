//! Discrete Krein string on `[-2, 2]`: the peakon/string Liouville
//! correspondence, transfer-matrix characteristic polynomials, spectra for
//! mixed boundary conditions, and the Weyl functions `Omega_0` and `E_0`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::herglotz::Herglotz;
use crate::poly::{Poly, RatFn};
use crate::roots::poly_real_roots;
use crate::scalar::{Rat, Scalar};

/// Tolerance on the total string length `sum gaps = 4` in floating point.
const LENGTH_TOL: f64 = 1e-12;
/// Transformed mass positions closer than this (relative) are coincident.
const POSITION_EPS: f64 = 1e-12;

/// Positions and momenta of peakons on the line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakonState {
    q: Vec<f64>,
    p: Vec<f64>,
    #[serde(default)]
    t: f64,
}

impl PeakonState {
    pub fn new(q: Vec<f64>, p: Vec<f64>, t: f64) -> Result<Self> {
        if q.len() != p.len() {
            return Err(Error::InvalidInput(format!(
                "{} positions but {} momenta",
                q.len(),
                p.len()
            )));
        }
        for w in q.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidInput(format!(
                    "positions not strictly increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        for (k, &pk) in p.iter().enumerate() {
            if pk == 0.0 || !pk.is_finite() {
                return Err(Error::InvalidInput(format!("momentum {k} = {pk}")));
            }
        }
        if q.iter().any(|x| !x.is_finite()) || !t.is_finite() {
            return Err(Error::InvalidInput("non-finite position or time".into()));
        }
        Ok(PeakonState { q, p, t })
    }

    pub fn empty() -> Self {
        PeakonState { q: Vec::new(), p: Vec::new(), t: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.q
    }

    pub fn momenta(&self) -> &[f64] {
        &self.p
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// All momenta positive (the phase space where the spectral theory holds).
    pub fn is_positive(&self) -> bool {
        self.p.iter().all(|&p| p > 0.0)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let parsed: PeakonState = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidInput(format!("bad peakon state: {e}")))?;
        PeakonState::new(parsed.q, parsed.p, parsed.t)
    }
}

/// Point masses separated by massless gaps on `[-2, 2]`.
///
/// `gaps` has one more entry than `masses`; the first and last gaps are
/// strictly positive and the gaps sum to 4.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteString<T: Scalar> {
    gaps: Vec<T>,
    masses: Vec<T>,
    /// Amount added to the final gap to restore `sum gaps = 4` (floating mode).
    adjustment: f64,
}

pub type StringF = DiscreteString<f64>;
pub type StringQ = DiscreteString<Rat>;

impl<T: Scalar> DiscreteString<T> {
    pub fn new(gaps: Vec<T>, masses: Vec<T>) -> Result<Self> {
        Self::with_length_tol(gaps, masses, LENGTH_TOL)
    }

    /// Constructor with a caller-chosen tolerance on the total length
    /// (reconstruction output carries slightly more rounding than 1e-12).
    pub fn with_length_tol(gaps: Vec<T>, masses: Vec<T>, tol: f64) -> Result<Self> {
        if gaps.len() != masses.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} gaps for {} masses (need one more gap than masses)",
                gaps.len(),
                masses.len()
            )));
        }
        for (k, g) in gaps.iter().enumerate() {
            if !(*g > T::zero()) {
                return Err(Error::InvalidInput(format!("gap {k} = {g} not positive")));
            }
            if !g.to_f64().is_finite() {
                return Err(Error::InvalidInput(format!("gap {k} not finite")));
            }
        }
        for (k, m) in masses.iter().enumerate() {
            if m.is_zero() || !m.to_f64().is_finite() {
                return Err(Error::InvalidInput(format!("mass {k} = {m} must be nonzero")));
            }
        }
        let mut total = T::zero();
        for g in &gaps {
            total = total + g.clone();
        }
        let four = T::from_int(4);
        let mut gaps = gaps;
        let mut adjustment = 0.0;
        if T::EXACT {
            if total != four {
                return Err(Error::InvalidInput(format!(
                    "gaps sum to {total}, expected 4"
                )));
            }
        } else {
            let err = (total.to_f64() - 4.0).abs();
            if err > tol {
                return Err(Error::InvalidInput(format!(
                    "gaps sum to {}, off from 4 by {err:e}",
                    total.to_f64()
                )));
            }
            // Renormalize the final gap and record the adjustment.
            let defect = four - total;
            adjustment = defect.to_f64();
            let last = gaps.last_mut().expect("at least one gap");
            *last = last.clone() + defect;
        }
        Ok(DiscreteString { gaps, masses, adjustment })
    }

    /// Massless string: a single gap spanning the whole interval.
    pub fn empty() -> Self {
        DiscreteString {
            gaps: vec![T::from_int(4)],
            masses: Vec::new(),
            adjustment: 0.0,
        }
    }

    pub fn n_masses(&self) -> usize {
        self.masses.len()
    }

    pub fn gaps(&self) -> &[T] {
        &self.gaps
    }

    pub fn masses(&self) -> &[T] {
        &self.masses
    }

    /// Length of the mass-free interval at the left end.
    pub fn left_gap(&self) -> T {
        self.gaps[0].clone()
    }

    /// Recorded renormalization of the final gap.
    pub fn length_adjustment(&self) -> f64 {
        self.adjustment
    }

    /// Positions `xi_k` of the masses, strictly increasing in `(-2, 2)`.
    pub fn positions(&self) -> Vec<T> {
        let mut xi = Vec::with_capacity(self.masses.len());
        let mut acc = T::from_int(-2);
        for g in &self.gaps[..self.masses.len()] {
            acc = acc + g.clone();
            xi.push(acc.clone());
        }
        xi
    }

    pub fn is_positive(&self) -> bool {
        self.masses.iter().all(|m| *m > T::zero())
    }

    /// Transfer-matrix solution of `f'' + lambda g f = 0` across the string:
    /// over a gap `(f, f') -> (f + l f', f')`, across a mass
    /// `(f, f') -> (f, f' - lambda m f)`. Exact in the coefficients.
    pub fn characteristic(&self) -> CharacteristicData<T> {
        // phi starts as (1, 0), psi as (0, 1) at xi = -2.
        let mut phi = Poly::constant(T::one());
        let mut phi_d = Poly::zero();
        let mut psi = Poly::zero();
        let mut psi_d = Poly::constant(T::one());
        for (k, m) in self.masses.iter().enumerate() {
            let l = &self.gaps[k];
            phi = phi.add(&phi_d.scale(l));
            psi = psi.add(&psi_d.scale(l));
            phi_d = phi_d.sub(&phi.mul_x().scale(m));
            psi_d = psi_d.sub(&psi.mul_x().scale(m));
        }
        let l = self.gaps.last().expect("at least one gap");
        phi = phi.add(&phi_d.scale(l));
        psi = psi.add(&psi_d.scale(l));
        CharacteristicData {
            phi,
            psi,
            phi_prime: phi_d,
            psi_prime: psi_d,
        }
    }

    pub fn to_f64(&self) -> DiscreteString<f64> {
        DiscreteString {
            gaps: self.gaps.iter().map(Scalar::to_f64).collect(),
            masses: self.masses.iter().map(Scalar::to_f64).collect(),
            adjustment: self.adjustment,
        }
    }

    /// `Omega_0 = psi(2,.) / phi(2,.)`, the Weyl function of the string with
    /// free left end and fixed right end, as a polynomial fraction.
    /// Its constant at infinity is the left gap, and `Omega_0(0) = 4`.
    pub fn weyl_omega0_fraction(&self) -> RatFn<T> {
        let ch = self.characteristic();
        RatFn::new(ch.psi, ch.phi)
    }

    /// `E_0 = -phi(2,.) / psi(2,.)`, the Weyl function with both ends fixed.
    /// Its constant at infinity is `-1/left_gap`, and `E_0(0) = -1/4`.
    pub fn weyl_e0_fraction(&self) -> RatFn<T> {
        let ch = self.characteristic();
        RatFn::new(ch.phi.neg(), ch.psi)
    }
}

/// The four right-end boundary quantities as exact polynomials in lambda.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicData<T: Scalar> {
    pub phi: Poly<T>,
    pub psi: Poly<T>,
    pub phi_prime: Poly<T>,
    pub psi_prime: Poly<T>,
}

impl<T: Scalar> CharacteristicData<T> {
    /// `phi psi' - psi phi'`, identically one for any string.
    pub fn wronskian(&self) -> Poly<T> {
        self.phi.mul(&self.psi_prime).sub(&self.psi.mul(&self.phi_prime))
    }
}

/// Mixed right-end boundary condition `a phi(2,.) + b psi(2,.) = 0`,
/// understood projectively.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedBoundary {
    pub a: f64,
    pub b: f64,
}

impl MixedBoundary {
    pub const DIRICHLET: MixedBoundary = MixedBoundary { a: 0.0, b: 1.0 };
    pub const SECOND: MixedBoundary = MixedBoundary { a: 1.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if (a == 0.0 && b == 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!("bad boundary pair ({a}, {b})")));
        }
        Ok(MixedBoundary { a, b })
    }

    /// `a + 4b`, the value of the boundary combination at lambda = 0.
    pub fn weight(&self) -> f64 {
        self.a + 4.0 * self.b
    }
}

/// Liouville map `x -> xi = 2 tanh(x/2)` on atomic momenta: each peakon
/// `(q_k, p_k)` becomes a point mass `2 p_k cosh^2(q_k/2)` at `2 tanh(q_k/2)`.
pub fn from_peakons(s: &PeakonState) -> Result<DiscreteString<f64>> {
    let n = s.len();
    if n == 0 {
        return Ok(DiscreteString::empty());
    }
    let xi: Vec<f64> = s.positions().iter().map(|&q| 2.0 * (q / 2.0).tanh()).collect();
    for (k, w) in xi.windows(2).enumerate() {
        let gap = w[1] - w[0];
        if gap <= POSITION_EPS * w[0].abs().max(w[1].abs()).max(1.0) {
            return Err(Error::CoincidentPositions { i: k, j: k + 1, gap });
        }
    }
    if let Some(k) = xi.iter().position(|&x| x.abs() >= 2.0) {
        return Err(Error::BoundaryMass { index: k, xi: xi[k] });
    }
    let masses: Vec<f64> = s
        .positions()
        .iter()
        .zip(s.momenta())
        .map(|(&q, &p)| {
            let c = (q / 2.0).cosh();
            2.0 * p * c * c
        })
        .collect();
    let mut gaps = Vec::with_capacity(n + 1);
    gaps.push(xi[0] + 2.0);
    for w in xi.windows(2) {
        gaps.push(w[1] - w[0]);
    }
    gaps.push(2.0 - xi[n - 1]);
    DiscreteString::new(gaps, masses)
}

/// Inverse Liouville map; requires every mass strictly inside the interval.
pub fn to_peakons(d: &DiscreteString<f64>, t: f64) -> Result<PeakonState> {
    let xi = d.positions();
    if let Some(k) = xi.iter().position(|&x| x.abs() >= 2.0 - 1e-14) {
        return Err(Error::BoundaryMass { index: k, xi: xi[k] });
    }
    let q: Vec<f64> = xi.iter().map(|&x| ((2.0 + x) / (2.0 - x)).ln()).collect();
    let p: Vec<f64> = xi
        .iter()
        .zip(d.masses())
        .map(|(&x, &m)| m * (1.0 - x * x / 4.0) / 2.0)
        .collect();
    PeakonState::new(q, p, t)
}

/// All real roots of `a phi + b psi`, ascending.
///
/// For positive strings with `b != 0` the roots are the level roots of
/// `Omega_0` at `-a/b`, certified by interlacing; otherwise they come from
/// bracketed bisection between the critical points of the combination
/// polynomial.
pub fn mixed_spectrum(d: &DiscreteString<f64>, bc: MixedBoundary) -> Result<Vec<f64>> {
    if bc.weight().abs() <= 1e-13 * (bc.a.abs() + bc.b.abs()) {
        return Err(Error::DegenerateBoundary { a: bc.a, b: bc.b });
    }
    if d.n_masses() == 0 {
        return Ok(Vec::new());
    }
    if bc.b != 0.0 && d.is_positive() {
        let level = -bc.a / bc.b;
        let omega = weyl_omega0(d)?;
        match omega.level_roots(level) {
            Ok(lr) => return Ok(lr.roots),
            // Level at the constant term: the top coefficient degenerates and
            // one root escapes; fall through to the polynomial path.
            Err(Error::LevelEqualsAlpha { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let ch = d.characteristic();
    let combo = ch.phi.scale(&bc.a).add(&ch.psi.scale(&bc.b));
    let roots = poly_real_roots(&combo);
    if d.is_positive() {
        check_positive_interlacing(d, &roots, bc)?;
    }
    Ok(roots)
}

fn check_positive_interlacing(
    d: &DiscreteString<f64>,
    roots: &[f64],
    bc: MixedBoundary,
) -> Result<()> {
    // Dirichlet and second-spectrum roots of a positive string are positive
    // and as many as there are masses.
    if (bc.b == 0.0 || bc.a == 0.0) && roots.len() != d.n_masses() {
        return Err(Error::Numerical(format!(
            "found {} spectrum points for {} masses",
            roots.len(),
            d.n_masses()
        )));
    }
    if (bc.b == 0.0 || bc.a == 0.0) && roots.iter().any(|&r| r <= 0.0) {
        return Err(Error::Numerical("nonpositive eigenvalue for a positive string".into()));
    }
    Ok(())
}

/// One polished simple zero of a polynomial, with a companion polynomial and
/// the derivative evaluated there.
pub(crate) struct RootEval {
    pub root: f64,
    /// Companion polynomial value at the root.
    pub value: f64,
    /// Derivative of the root's own polynomial at the root.
    pub slope: f64,
}

/// Evaluates a companion polynomial `num` at the simple real zeros of `den`.
///
/// Evaluating `num` at a zero of `den` cancels catastrophically when the two
/// root systems nearly collide (the value is then tiny), so whenever the f64
/// Horner evaluation cannot guarantee ~1e-12 relative accuracy the root is
/// Newton-refined in exact rational arithmetic and both polynomials are
/// evaluated there exactly.
pub(crate) fn refined_root_evals(
    num: &Poly<f64>,
    den: &Poly<f64>,
    num_exact: &Poly<Rat>,
    den_exact: &Poly<Rat>,
    seeds: &[f64],
) -> Vec<RootEval> {
    let dden = den.derivative();
    let dden_exact = den_exact.derivative();
    let mut out = Vec::with_capacity(seeds.len());
    for &mu in seeds {
        let v = num.eval(&mu);
        let bound = num.eval_abs(mu);
        // Horner loses ~eps * bound absolutely; demand headroom.
        if v.abs() >= 3e-4 * bound {
            out.push(RootEval { root: mu, value: v, slope: dden.eval(&mu) });
            continue;
        }
        let mut x = mu.to_rat();
        for _ in 0..3 {
            let step = den_exact.eval(&x) / dden_exact.eval(&x);
            x = (x - step).dyadic_round(260);
        }
        out.push(RootEval {
            root: Scalar::to_f64(&x),
            value: Scalar::to_f64(&num_exact.eval(&x)),
            slope: Scalar::to_f64(&dden_exact.eval(&x)),
        });
    }
    out
}

/// Pole/residue extraction for a ratio `num/den` at the simple real zeros of
/// `den`: residue of the `r/(mu - lambda)` form is `-num(mu)/den'(mu)`.
fn pole_residue_data(
    num: &Poly<f64>,
    den: &Poly<f64>,
    num_exact: &Poly<Rat>,
    den_exact: &Poly<Rat>,
    seeds: Vec<f64>,
) -> (Vec<f64>, Vec<f64>) {
    refined_root_evals(num, den, num_exact, den_exact, &seeds)
        .into_iter()
        .map(|re| (re.root, -re.value / re.slope))
        .unzip()
}

impl DiscreteString<f64> {
    /// Lossless lift into exact rationals; the recorded length adjustment has
    /// already been applied, so the lifted gaps sum to the lifted total.
    pub(crate) fn lift_exact(&self) -> DiscreteString<Rat> {
        DiscreteString {
            gaps: self.gaps.iter().map(Scalar::to_rat).collect(),
            masses: self.masses.iter().map(Scalar::to_rat).collect(),
            adjustment: self.adjustment,
        }
    }
}

/// `Omega_0` in pole/residue form: `l + sum sigma_k / (mu_k - lambda)` with
/// the `mu_k` the second spectrum (zeros of phi).
pub fn weyl_omega0(d: &DiscreteString<f64>) -> Result<Herglotz<f64>> {
    let ch = d.characteristic();
    let n = d.n_masses();
    if n == 0 {
        return Ok(Herglotz::constant(4.0));
    }
    let seeds = poly_real_roots(&ch.phi);
    if seeds.len() != n {
        return Err(Error::Numerical(format!(
            "phi of degree {n} has {} isolated real zeros",
            seeds.len()
        )));
    }
    let chq = d.lift_exact().characteristic();
    let (mu, residues) = pole_residue_data(&ch.psi, &ch.phi, &chq.psi, &chq.phi, seeds);
    // The pole/residue data is the stable parametrization: downstream
    // algebra (peeling) rebuilds its fraction from these coordinates rather
    // than from the transfer-matrix monomial coefficients.
    if d.is_positive() {
        Herglotz::new(d.left_gap(), mu, residues)
    } else {
        Herglotz::new_signed(d.left_gap(), mu, residues)
    }
}

/// `E_0` in pole/residue form: `-1/l + sum rho_k / (lambda_k - lambda)` with
/// the `lambda_k` the Dirichlet spectrum (zeros of psi).
pub fn weyl_e0(d: &DiscreteString<f64>) -> Result<Herglotz<f64>> {
    let ch = d.characteristic();
    let n = d.n_masses();
    if n == 0 {
        return Ok(Herglotz::constant(-0.25));
    }
    let seeds = poly_real_roots(&ch.psi);
    if seeds.len() != n {
        return Err(Error::Numerical(format!(
            "psi of degree {n} has {} isolated real zeros",
            seeds.len()
        )));
    }
    let chq = d.lift_exact().characteristic();
    let neg_phi = ch.phi.neg();
    let neg_phi_exact = chq.phi.neg();
    let (lam, residues) = pole_residue_data(&neg_phi, &ch.psi, &neg_phi_exact, &chq.psi, seeds);
    let alpha = -1.0 / d.left_gap();
    if d.is_positive() {
        Herglotz::new(alpha, lam, residues)
    } else {
        Herglotz::new_signed(alpha, lam, residues)
    }
}

/// Exact Weyl functions for rational strings (fraction-backed; the poles are
/// generally irrational).
pub fn weyl_omega0_exact(d: &DiscreteString<Rat>) -> Herglotz<Rat> {
    Herglotz::from_fraction(d.weyl_omega0_fraction())
}

pub fn weyl_e0_exact(d: &DiscreteString<Rat>) -> Herglotz<Rat> {
    Herglotz::from_fraction(d.weyl_e0_fraction())
}

/// JSON helpers for the `{"gaps": [...], "masses": [...]}` schema.
impl DiscreteString<f64> {
    pub fn to_json(&self) -> Value {
        json!({ "gaps": self.gaps, "masses": self.masses })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let gaps = f64_list(v, "gaps")?;
        let masses = f64_list(v, "masses")?;
        DiscreteString::new(gaps, masses)
    }
}

impl DiscreteString<Rat> {
    pub fn to_json(&self) -> Value {
        json!({
            "gaps": self.gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "masses": self.masses.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let gaps = rat_list(v, "gaps")?;
        let masses = rat_list(v, "masses")?;
        DiscreteString::new(gaps, masses)
    }
}

fn f64_list(v: &Value, key: &str) -> Result<Vec<f64>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput(format!("missing array field {key:?}")))?
        .iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::InvalidInput(format!("bad number in {key:?}: {x}")))
        })
        .collect()
}

fn rat_list(v: &Value, key: &str) -> Result<Vec<Rat>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput(format!("missing array field {key:?}")))?
        .iter()
        .map(|x| match x {
            Value::String(s) => s
                .parse::<Rat>()
                .map_err(|e| Error::InvalidInput(format!("bad rational {s:?}: {e}"))),
            Value::Number(n) => n
                .as_i64()
                .map(Rat::from_int)
                .ok_or_else(|| Error::InvalidInput(format!("non-integer number {n} in exact data"))),
            other => Err(Error::InvalidInput(format!("bad entry in {key:?}: {other}"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_peakon() -> PeakonState {
        PeakonState::new(vec![0.0], vec![1.0], 0.0).unwrap()
    }

    fn unit_string() -> DiscreteString<f64> {
        from_peakons(&unit_peakon()).unwrap()
    }

    #[test]
    fn liouville_map_unit_peakon() {
        let d = unit_string();
        assert_eq!(d.gaps(), &[2.0, 2.0]);
        assert_eq!(d.masses(), &[2.0]);
        // m1 l0 l1 = 8p.
        assert_eq!(d.masses()[0] * d.gaps()[0] * d.gaps()[1], 8.0);
        // Masses scale linearly with momentum.
        let half = PeakonState::new(vec![0.0], vec![0.5], 0.0).unwrap();
        let d = from_peakons(&half).unwrap();
        assert_eq!(d.masses(), &[1.0]);
        assert_eq!(d.gaps(), &[2.0, 2.0]);
        // Empty configuration.
        let e = from_peakons(&PeakonState::empty()).unwrap();
        assert_eq!(e.gaps(), &[4.0]);
        assert!(e.masses().is_empty());
    }

    #[test]
    fn liouville_round_trip() {
        let s = PeakonState::new(
            vec![-1.3, -0.2, 0.45, 1.7, 3.2],
            vec![0.7, 1.1, 0.3, 2.0, 0.9],
            1.5,
        )
        .unwrap();
        let back = to_peakons(&from_peakons(&s).unwrap(), s.time()).unwrap();
        for k in 0..s.len() {
            assert!((back.positions()[k] - s.positions()[k]).abs() < 1e-12);
            assert!((back.momenta()[k] - s.momenta()[k]).abs() < 1e-12);
        }
        let empty = to_peakons(&DiscreteString::empty(), 0.0).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn characteristic_one_peakon() {
        let ch = unit_string().characteristic();
        assert_eq!(ch.phi.coeffs(), &[1.0, -4.0]);
        assert_eq!(ch.psi.coeffs(), &[4.0, -8.0]);
        assert_eq!(ch.wronskian().coeffs(), &[1.0]);
    }

    #[test]
    fn characteristic_empty_string() {
        let ch = DiscreteString::<f64>::empty().characteristic();
        assert_eq!(ch.phi.coeffs(), &[1.0]);
        assert_eq!(ch.psi.coeffs(), &[4.0]);
        assert_eq!(ch.phi_prime.coeffs(), &[] as &[f64]);
        assert_eq!(ch.psi_prime.coeffs(), &[1.0]);
    }

    #[test]
    fn characteristic_normalizations_random() {
        let d = DiscreteString::new(
            vec![0.7, 1.1, 0.4, 1.8],
            vec![2.0, 0.5, 1.25],
        )
        .unwrap();
        let ch = d.characteristic();
        assert_eq!(ch.phi.eval(&0.0), 1.0);
        assert_eq!(ch.psi.eval(&0.0), 4.0);
        assert_eq!(ch.phi_prime.eval(&0.0), 0.0);
        assert_eq!(ch.psi_prime.eval(&0.0), 1.0);
        let w = ch.wronskian();
        assert!((w.eval(&0.37) - 1.0).abs() < 1e-12);
        assert!((w.eval(&5.3) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_peakon_psi_coefficients() {
        // psi's quadratic coefficient is m1 m2 l0 l1 l2 = 16 pbar1 pbar2 and its
        // linear coefficient is -8P.
        let s = PeakonState::new(vec![-0.4, 0.9], vec![0.8, 1.7], 0.0).unwrap();
        let d = from_peakons(&s).unwrap();
        let ch = d.characteristic();
        let m = d.masses();
        let g = d.gaps();
        let expect2 = m[0] * m[1] * g[0] * g[1] * g[2];
        assert!((ch.psi.coeff(2) - expect2).abs() < 1e-12 * expect2.abs());
        let p_total: f64 = s.momenta().iter().sum();
        assert!((ch.psi.coeff(1) + 8.0 * p_total).abs() < 1e-12);

        // Eigenvalues are 1/(2 pbar) with pbar from the conserved pair (P, H).
        let h = 0.5 * (0.8f64 * 0.8 + 1.7 * 1.7) + 0.8 * 1.7 * (-(1.3f64)).exp();
        let disc = (4.0 * h - p_total * p_total).sqrt();
        let pbar1 = 0.5 * (p_total + disc);
        let pbar2 = 0.5 * (p_total - disc);
        let lam = mixed_spectrum(&d, MixedBoundary::DIRICHLET).unwrap();
        assert!((lam[0] - 1.0 / (2.0 * pbar1)).abs() < 1e-12);
        assert!((lam[1] - 1.0 / (2.0 * pbar2)).abs() < 1e-12);
    }

    #[test]
    fn mixed_spectrum_one_peakon() {
        let d = unit_string();
        let lam = mixed_spectrum(&d, MixedBoundary::DIRICHLET).unwrap();
        assert!((lam[0] - 0.5).abs() < 1e-14);
        let mu = mixed_spectrum(&d, MixedBoundary::SECOND).unwrap();
        assert!((mu[0] - 0.25).abs() < 1e-14);
        let mixed = mixed_spectrum(&d, MixedBoundary::new(-1.0, 1.0).unwrap()).unwrap();
        assert!((mixed[0] - 0.75).abs() < 1e-14);
        assert!(matches!(
            mixed_spectrum(&d, MixedBoundary { a: -4.0, b: 1.0 }),
            Err(Error::DegenerateBoundary { .. })
        ));
    }

    #[test]
    fn weyl_functions_one_peakon() {
        let d = unit_string();
        let omega = weyl_omega0(&d).unwrap();
        let s = omega.sum_form().unwrap();
        assert!((s.alpha - 2.0).abs() < 1e-14);
        assert!((s.poles[0] - 0.25).abs() < 1e-14);
        assert!((s.residues[0] - 0.5).abs() < 1e-14);
        let e0 = weyl_e0(&d).unwrap();
        let s = e0.sum_form().unwrap();
        assert!((s.alpha + 0.5).abs() < 1e-14);
        assert!((s.poles[0] - 0.5).abs() < 1e-14);
        assert!((s.residues[0] - 0.125).abs() < 1e-14);
        // Definitional identity E0 = -1/Omega0.
        assert!(omega
            .negate_invert()
            .unwrap()
            .fraction_approx_eq(&e0, 1e-12));
    }

    #[test]
    fn weyl_normalizations_hold() {
        let d = DiscreteString::new(vec![0.3, 0.9, 1.2, 1.6], vec![1.5, 0.25, 3.0]).unwrap();
        let omega = weyl_omega0(&d).unwrap();
        assert!((omega.eval(&0.0).unwrap() - 4.0).abs() < 1e-10);
        let e0 = weyl_e0(&d).unwrap();
        assert!((e0.eval(&0.0).unwrap() + 0.25).abs() < 1e-10);
        // Empty string.
        assert_eq!(
            weyl_omega0(&DiscreteString::empty()).unwrap().eval(&1.0).unwrap(),
            4.0
        );
        assert_eq!(
            weyl_e0(&DiscreteString::empty()).unwrap().eval(&1.0).unwrap(),
            -0.25
        );
    }

    #[test]
    fn dirichlet_and_second_spectrum_interlace() {
        let d = DiscreteString::new(vec![0.5, 0.7, 1.1, 1.7], vec![2.0, 1.0, 0.5]).unwrap();
        let mu = mixed_spectrum(&d, MixedBoundary::SECOND).unwrap();
        let lam = mixed_spectrum(&d, MixedBoundary::DIRICHLET).unwrap();
        assert_eq!(mu.len(), 3);
        assert_eq!(lam.len(), 3);
        assert!(mu[0] > 0.0);
        for k in 0..3 {
            assert!(mu[k] < lam[k]);
            if k + 1 < 3 {
                assert!(lam[k] < mu[k + 1]);
            }
        }
    }

    #[test]
    fn exact_string_characteristic() {
        let d: StringQ = DiscreteString::new(
            vec![Rat::from_int(2), Rat::from_int(2)],
            vec![Rat::from_int(2)],
        )
        .unwrap();
        let ch = d.characteristic();
        assert_eq!(ch.phi.coeffs(), &[Rat::from_int(1), Rat::from_int(-4)]);
        assert_eq!(ch.psi.coeffs(), &[Rat::from_int(4), Rat::from_int(-8)]);
        assert_eq!(ch.wronskian().coeffs(), &[Rat::from_int(1)]);
    }

    #[test]
    fn boundary_mass_and_coincident_positions_rejected() {
        // artanh saturates near +/- 2 for huge positions.
        let s = PeakonState::new(vec![0.0, 800.0], vec![1.0, 1.0], 0.0).unwrap();
        assert!(matches!(
            from_peakons(&s),
            Err(Error::BoundaryMass { .. }) | Err(Error::CoincidentPositions { .. })
        ));
        let s = PeakonState::new(vec![100.0, 100.0 + 1e-15], vec![1.0, 1.0], 0.0);
        // Construction itself may reject the non-increasing positions.
        if let Ok(s) = s {
            assert!(from_peakons(&s).is_err());
        }
    }
}
