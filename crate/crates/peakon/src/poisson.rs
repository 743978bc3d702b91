//! The Atiyah-Hitchin Poisson structure on the spectral coordinates
//! `(lambda_k, rho_k)` of `E_0`: structure constants, brackets of arbitrary
//! functionals via the chain rule, and numerical verification of the bracket
//! formula and the canonical relations.
//!
//! Structure constants:
//! `{rho_k, rho_n} = 2 lambda_k lambda_n rho_k rho_n / (lambda_n - lambda_k)`,
//! `{rho_k, lambda_n} = lambda_k^2 rho_k delta_kn`, `{lambda_k, lambda_n} = 0`.
//! The orientation of the rho-rho constant is fixed by requiring consistency
//! with the bracket `{E_0(x), E_0(y)} = xy/(x-y) (E_0(x) - E_0(y))^2` and
//! with the flipped-parameter constants under `lambda -> -1/lambda`; both
//! checks run in this module's tests.
//! The constant term of `E_0` is treated as the dependent quantity
//! `-1/4 - sum rho_k/lambda_k`, so `(lambda, rho)` is an unconstrained
//! coordinate system and that term's gradient contributes to every bracket.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::herglotz::Herglotz;
use crate::inverse_spectral::{reconstruct, WeylData, WeylFlavor};
use crate::spectral_flow::{chart, ChartKind};
use crate::string::{weyl_e0, DiscreteString};

/// Default relative finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;
/// Relative step used for functionals routed through the reconstruction
/// pipeline, whose evaluations carry more rounding noise than closed forms.
pub const PIPELINE_FD_STEP: f64 = 2e-3;

/// A point in the spectral phase space: poles and residues of `E_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonPoint {
    lambdas: Vec<f64>,
    rhos: Vec<f64>,
}

impl PoissonPoint {
    pub fn new(lambdas: Vec<f64>, rhos: Vec<f64>) -> Result<Self> {
        if lambdas.len() != rhos.len() {
            return Err(Error::InvalidInput(format!(
                "{} poles but {} residues",
                lambdas.len(),
                rhos.len()
            )));
        }
        for w in lambdas.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidInput("poles not strictly increasing".into()));
            }
        }
        if lambdas.iter().any(|&l| l <= 0.0) {
            return Err(Error::InvalidInput("poles must be positive".into()));
        }
        if rhos.iter().any(|&r| r <= 0.0) {
            return Err(Error::InvalidInput("residues must be positive".into()));
        }
        Ok(PoissonPoint { lambdas, rhos })
    }

    /// The `E_0` data of a string.
    pub fn from_string(d: &DiscreteString<f64>) -> Result<Self> {
        let e0 = weyl_e0(d)?;
        let sum = e0
            .sum_form()
            .ok_or_else(|| Error::Numerical("no pole/residue form for E_0".into()))?;
        PoissonPoint::new(sum.poles.clone(), sum.residues.clone())
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    /// Coordinate vector `(lambda_1..lambda_n, rho_1..rho_n)`.
    pub fn coords(&self) -> Vec<f64> {
        self.lambdas.iter().chain(self.rhos.iter()).copied().collect()
    }

    fn from_coords(u: &[f64]) -> Result<Self> {
        let n = u.len() / 2;
        PoissonPoint::new(u[..n].to_vec(), u[n..].to_vec())
    }

    /// Constant term of `E_0` resolved from `E_0(0) = -1/4`.
    pub fn dependent_constant(&self) -> f64 {
        -0.25
            - self
                .lambdas
                .iter()
                .zip(&self.rhos)
                .map(|(l, r)| r / l)
                .sum::<f64>()
    }

    /// The function `E_0` these coordinates parametrize.
    pub fn e0(&self) -> Result<Herglotz<f64>> {
        Herglotz::new(self.dependent_constant(), self.lambdas.clone(), self.rhos.clone())
    }

    /// The string these coordinates encode, via inverse reconstruction.
    pub fn to_string_data(&self) -> Result<DiscreteString<f64>> {
        let data = WeylData::new(self.e0()?, WeylFlavor::E0)?;
        reconstruct(&data)
    }
}

/// Which block of structure constants to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordPair {
    RhoRho,
    RhoLambda,
    LambdaLambda,
}

/// Structure constant `{u_i, u_j}` at a point.
pub fn bracket_coords(pt: &PoissonPoint, i: usize, j: usize, which: CoordPair) -> Result<f64> {
    let n = pt.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let l = &pt.lambdas;
    let r = &pt.rhos;
    Ok(match which {
        CoordPair::LambdaLambda => 0.0,
        CoordPair::RhoLambda => {
            if i == j {
                l[i] * l[i] * r[i]
            } else {
                0.0
            }
        }
        CoordPair::RhoRho => {
            if i == j {
                0.0 // forced by antisymmetry
            } else {
                2.0 * l[i] * l[j] * r[i] * r[j] / (l[j] - l[i])
            }
        }
    })
}

/// Antisymmetric matrix `{u_a, u_b}` over `u = (lambda, rho)`.
pub fn poisson_matrix(pt: &PoissonPoint) -> Vec<Vec<f64>> {
    let n = pt.n();
    let dim = 2 * n;
    let mut m = vec![vec![0.0; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            let rho_lambda = bracket_coords(pt, i, j, CoordPair::RhoLambda).unwrap();
            m[n + i][j] = rho_lambda;
            m[j][n + i] = -rho_lambda;
            let rho_rho = bracket_coords(pt, i, j, CoordPair::RhoRho).unwrap();
            m[n + i][n + j] = rho_rho;
        }
    }
    m
}

/// How to differentiate a functional.
#[derive(Clone, Copy, Debug)]
pub enum Differentiation {
    Analytic,
    FiniteDifference { rel_step: f64 },
}

/// A scalar functional of the spectral coordinates with a gradient recipe.
pub struct Functional<'a> {
    eval: Box<dyn Fn(&PoissonPoint) -> Result<f64> + 'a>,
    gradient: Gradient<'a>,
}

enum Gradient<'a> {
    Analytic(Box<dyn Fn(&PoissonPoint) -> Result<Vec<f64>> + 'a>),
    FiniteDifference { rel_step: f64 },
}

impl<'a> Functional<'a> {
    pub fn analytic(
        eval: impl Fn(&PoissonPoint) -> Result<f64> + 'a,
        grad: impl Fn(&PoissonPoint) -> Result<Vec<f64>> + 'a,
    ) -> Self {
        Functional {
            eval: Box::new(eval),
            gradient: Gradient::Analytic(Box::new(grad)),
        }
    }

    pub fn finite_difference(
        eval: impl Fn(&PoissonPoint) -> Result<f64> + 'a,
        rel_step: f64,
    ) -> Self {
        Functional {
            eval: Box::new(eval),
            gradient: Gradient::FiniteDifference { rel_step },
        }
    }

    /// The coordinate `lambda_i` (for `i < n`) or `rho_{i-n}`.
    pub fn coordinate(index: usize, dim: usize) -> Self {
        Functional::analytic(
            move |pt| {
                let u = pt.coords();
                u.get(index)
                    .copied()
                    .ok_or(Error::IndexOutOfRange { index, n: dim })
            },
            move |pt| {
                let mut g = vec![0.0; 2 * pt.n()];
                if index >= g.len() {
                    return Err(Error::IndexOutOfRange { index, n: dim });
                }
                g[index] = 1.0;
                Ok(g)
            },
        )
    }

    pub fn value(&self, pt: &PoissonPoint) -> Result<f64> {
        (self.eval)(pt)
    }

    /// Gradient over `(lambda, rho)`; finite differences are centered, pass a
    /// step-halving consistency check, and get one Richardson extrapolation.
    pub fn grad(&self, pt: &PoissonPoint) -> Result<Vec<f64>> {
        match &self.gradient {
            Gradient::Analytic(g) => g(pt),
            Gradient::FiniteDifference { rel_step } => {
                fd_gradient(&self.eval, pt, *rel_step)
            }
        }
    }
}

fn fd_gradient(
    eval: &dyn Fn(&PoissonPoint) -> Result<f64>,
    pt: &PoissonPoint,
    rel_step: f64,
) -> Result<Vec<f64>> {
    let u = pt.coords();
    let dim = u.len();
    let n = pt.n();
    let mut grad = vec![0.0; dim];
    for i in 0..dim {
        // Steps stay well inside the ordering/positivity region.
        let base = rel_step * u[i].abs().max(1e-3);
        let slack = if i < n {
            let left = if i > 0 { u[i] - u[i - 1] } else { u[i] };
            let right = if i + 1 < n { u[i + 1] - u[i] } else { f64::INFINITY };
            left.min(right)
        } else {
            u[i]
        };
        let h0 = base.min(0.25 * slack);
        if !(h0 > 0.0) {
            return Err(Error::GradientConsistency { coord: i, ratio: f64::NAN });
        }

        let central = |hh: f64| -> Result<f64> {
            let mut up = u.clone();
            up[i] += hh;
            let mut dn = u.clone();
            dn[i] -= hh;
            let fu = eval(&PoissonPoint::from_coords(&up)?)?;
            let fd = eval(&PoissonPoint::from_coords(&dn)?)?;
            Ok((fu - fd) / (2.0 * hh))
        };

        // Step-halving consistency: successive differences must shrink by
        // the central-difference factor ~4 (more when the quadratic term
        // happens to vanish). A noise-dominated step is retried larger; the
        // escalation is safe because it only triggers when curvature is
        // invisible at the smaller step.
        let mut accepted = None;
        let mut last_ratio = f64::NAN;
        for scale in [1.0, 4.0, 16.0] {
            let h = (h0 * scale).min(0.25 * slack);
            let d1 = central(h)?;
            let d2 = central(0.5 * h)?;
            let d4 = central(0.25 * h)?;
            let e1 = d1 - d2;
            let e2 = d2 - d4;
            let tiny = 2e-9 * (1.0 + d2.abs());
            if e1.abs() <= tiny || e2.abs() <= e1.abs() / 1.8 {
                accepted = Some((4.0 * d4 - d2) / 3.0);
                break;
            }
            last_ratio = e1 / e2;
        }
        match accepted {
            Some(g) => grad[i] = g,
            None => {
                return Err(Error::GradientConsistency {
                    coord: i,
                    ratio: last_ratio,
                })
            }
        }
    }
    Ok(grad)
}

/// `{A, B}` at a point: `grad A . Pi . grad B`. Antisymmetric and bilinear.
pub fn bracket(pt: &PoissonPoint, a: &Functional, b: &Functional) -> Result<f64> {
    let ga = a.grad(pt)?;
    let gb = b.grad(pt)?;
    Ok(contract(&poisson_matrix(pt), &ga, &gb))
}

fn contract(m: &[Vec<f64>], ga: &[f64], gb: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, row) in m.iter().enumerate() {
        if ga[a] == 0.0 {
            continue;
        }
        for (b, w) in row.iter().enumerate() {
            if *w != 0.0 {
                acc += ga[a] * w * gb[b];
            }
        }
    }
    acc
}

/// Evaluation functional `E_0(x)` with the dependent constant resolved from
/// `E_0(0) = -1/4`, i.e. `E(x) = -1/4 + sum rho_k (1/(lambda_k - x) - 1/lambda_k)`.
pub fn e0_functional<'a>(x: f64, mode: Differentiation) -> Functional<'a> {
    let eval = move |pt: &PoissonPoint| -> Result<f64> {
        check_argument(pt, x)?;
        Ok(-0.25
            + pt
                .lambdas()
                .iter()
                .zip(pt.rhos())
                .map(|(l, r)| r * (1.0 / (l - x) - 1.0 / l))
                .sum::<f64>())
    };
    match mode {
        Differentiation::Analytic => Functional::analytic(eval, move |pt| {
            check_argument(pt, x)?;
            let n = pt.n();
            let mut g = vec![0.0; 2 * n];
            for k in 0..n {
                let l = pt.lambdas()[k];
                let r = pt.rhos()[k];
                g[k] = r * (1.0 / (l * l) - 1.0 / ((l - x) * (l - x)));
                g[n + k] = 1.0 / (l - x) - 1.0 / l;
            }
            Ok(g)
        }),
        Differentiation::FiniteDifference { rel_step } => {
            Functional::finite_difference(eval, rel_step)
        }
    }
}

fn check_argument(pt: &PoissonPoint, x: f64) -> Result<()> {
    if x == 0.0 {
        return Err(Error::InvalidInput("argument must be nonzero".into()));
    }
    for (k, &l) in pt.lambdas().iter().enumerate() {
        if (l - x).abs() <= 1e-12 * l.abs().max(1.0) {
            return Err(Error::PoleEvaluation { index: k, pole: l });
        }
    }
    Ok(())
}

/// One verified identity: both sides and the relative residual.
#[derive(Clone, Copy, Debug)]
pub struct AhReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl AhReport {
    fn of(lhs: f64, rhs: f64) -> Self {
        AhReport {
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / rhs.abs().max(1.0),
        }
    }

    pub fn to_json(&self, check: &str, params: Value, tolerance: f64) -> Value {
        json!({
            "check": check,
            "params": params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": tolerance,
            "pass": self.residual <= tolerance,
        })
    }
}

/// Verifies `{E_0(x), E_0(y)} = xy/(x-y) (E_0(x) - E_0(y))^2`.
pub fn verify_ah(pt: &PoissonPoint, x: f64, y: f64, mode: Differentiation) -> Result<AhReport> {
    if x == y {
        return Err(Error::CoincidentArguments(x));
    }
    let fx = e0_functional(x, mode);
    let fy = e0_functional(y, mode);
    let lhs = bracket(pt, &fx, &fy)?;
    let ex = fx.value(pt)?;
    let ey = fy.value(pt)?;
    let rhs = x * y / (x - y) * (ex - ey) * (ex - ey);
    Ok(AhReport::of(lhs, rhs))
}

/// Verifies the same bracket form for a linear-fractional transform
/// `(a E_0 + b)/(c E_0 + d)`; the Atiyah-Hitchin bracket is invariant under
/// these.
pub fn verify_ah_mobius(
    pt: &PoissonPoint,
    x: f64,
    y: f64,
    (a, b, c, d): (f64, f64, f64, f64),
    mode: Differentiation,
) -> Result<AhReport> {
    if x == y {
        return Err(Error::CoincidentArguments(x));
    }
    let det = a * d - b * c;
    if det.abs() <= 1e-12 * (a.abs() + b.abs() + c.abs() + d.abs()).max(1.0) {
        return Err(Error::InvalidInput("singular linear-fractional transform".into()));
    }
    let transformed = move |arg: f64, mode: Differentiation| -> Functional<'static> {
        let base = e0_functional(arg, Differentiation::Analytic);
        let eval = move |pt: &PoissonPoint| -> Result<f64> {
            let e = base.value(pt)?;
            let den = c * e + d;
            if den.abs() <= 1e-12 {
                return Err(Error::Numerical("transform pole hit".into()));
            }
            Ok((a * e + b) / den)
        };
        match mode {
            Differentiation::Analytic => {
                let base_g = e0_functional(arg, Differentiation::Analytic);
                Functional::analytic(eval, move |pt| {
                    let e = base_g.value(pt)?;
                    let den = c * e + d;
                    let scale = det / (den * den);
                    Ok(base_g.grad(pt)?.into_iter().map(|g| scale * g).collect())
                })
            }
            Differentiation::FiniteDifference { rel_step } => {
                Functional::finite_difference(eval, rel_step)
            }
        }
    };
    let fx = transformed(x, mode);
    let fy = transformed(y, mode);
    let lhs = bracket(pt, &fx, &fy)?;
    let ox = fx.value(pt)?;
    let oy = fy.value(pt)?;
    let rhs = x * y / (x - y) * (ox - oy) * (ox - oy);
    Ok(AhReport::of(lhs, rhs))
}

/// Max residuals of the canonical relations for one chart.
#[derive(Clone, Copy, Debug)]
pub struct CanonicalReport {
    /// max |{I_k, I_n}|.
    pub action_action: f64,
    /// max |{theta_k, theta_n}|.
    pub angle_angle: f64,
    /// max |{theta_k, I_n} - delta_kn|.
    pub pairing: f64,
}

impl CanonicalReport {
    pub fn max_residual(&self) -> f64 {
        self.action_action.max(self.angle_angle).max(self.pairing)
    }

    pub fn to_json(&self, check: &str, params: Value, tolerance: f64) -> Value {
        json!({
            "check": check,
            "params": params,
            "lhs": self.max_residual(),
            "rhs": 0.0,
            "residual": self.max_residual(),
            "tolerance": tolerance,
            "pass": self.max_residual() <= tolerance,
        })
    }
}

/// Verifies the canonical relations `{I, I} = 0`, `{theta, theta} = 0`,
/// `{theta_k, I_n} = delta_kn` for a chart, realizing each chart quantity as
/// a functional of `(lambda, rho)` through the reconstruction ->
/// transfer-matrix -> chart composition, differentiated by central finite
/// differences.
pub fn verify_canonical(
    pt: &PoissonPoint,
    kind: ChartKind,
    parameter: f64,
) -> Result<CanonicalReport> {
    let n = pt.n();
    let quantity = move |is_angle: bool, index: usize| -> Functional<'static> {
        Functional::finite_difference(
            move |p: &PoissonPoint| -> Result<f64> {
                let d = p.to_string_data()?;
                let ch = chart(&d, kind, parameter)?;
                if is_angle {
                    Ok(ch.angles()[index])
                } else {
                    Ok(ch.actions()[index])
                }
            },
            PIPELINE_FD_STEP,
        )
    };

    // Gradients are computed once per quantity, then contracted pairwise.
    let m = poisson_matrix(pt);
    let mut action_grads = Vec::with_capacity(n);
    let mut angle_grads = Vec::with_capacity(n);
    for k in 0..n {
        action_grads.push(quantity(false, k).grad(pt)?);
        angle_grads.push(quantity(true, k).grad(pt)?);
    }

    let mut report = CanonicalReport {
        action_action: 0.0,
        angle_angle: 0.0,
        pairing: 0.0,
    };
    for k in 0..n {
        for j in 0..n {
            let ii = contract(&m, &action_grads[k], &action_grads[j]);
            report.action_action = report.action_action.max(ii.abs());
            let tt = contract(&m, &angle_grads[k], &angle_grads[j]);
            report.angle_angle = report.angle_angle.max(tt.abs());
            let ti = contract(&m, &angle_grads[k], &action_grads[j]);
            let delta = if k == j { 1.0 } else { 0.0 };
            report.pairing = report.pairing.max((ti - delta).abs());
        }
    }
    Ok(report)
}

/// Closed-form structure-constant functional `{u_i, u_j}` with analytic
/// gradient, for Jacobi-identity checks.
fn structure_functional<'a>(i: usize, j: usize, n: usize) -> Functional<'a> {
    // Indices address the coordinate vector: < n lambda, >= n rho.
    Functional::analytic(
        move |pt| {
            let (pi, pj) = (i, j);
            structure_value(pt, pi, pj)
        },
        move |pt| structure_grad(pt, i, j, n),
    )
}

fn structure_value(pt: &PoissonPoint, a: usize, b: usize) -> Result<f64> {
    let n = pt.n();
    match (a < n, b < n) {
        (true, true) => Ok(0.0),
        (false, true) => bracket_coords(pt, a - n, b, CoordPair::RhoLambda),
        (true, false) => Ok(-bracket_coords(pt, b - n, a, CoordPair::RhoLambda)?),
        (false, false) => bracket_coords(pt, a - n, b - n, CoordPair::RhoRho),
    }
}

fn structure_grad(pt: &PoissonPoint, a: usize, b: usize, dim_n: usize) -> Result<Vec<f64>> {
    let n = pt.n();
    debug_assert_eq!(n, dim_n);
    let l = pt.lambdas();
    let r = pt.rhos();
    let mut g = vec![0.0; 2 * n];
    match (a < n, b < n) {
        (true, true) => {}
        (false, true) => {
            // {rho_i, lambda_j} = lambda_i^2 rho_i delta_ij
            let (i, j) = (a - n, b);
            if i == j {
                g[i] = 2.0 * l[i] * r[i];
                g[n + i] = l[i] * l[i];
            }
        }
        (true, false) => {
            let (j, i) = (a, b - n);
            if i == j {
                g[i] = -2.0 * l[i] * r[i];
                g[n + i] = -(l[i] * l[i]);
            }
        }
        (false, false) => {
            let (i, j) = (a - n, b - n);
            if i != j {
                let denom = l[j] - l[i];
                let v = 2.0 * l[i] * l[j] * r[i] * r[j] / denom;
                g[i] = 2.0 * r[i] * r[j] * l[j] * l[j] / (denom * denom);
                g[j] = -2.0 * r[i] * r[j] * l[i] * l[i] / (denom * denom);
                g[n + i] = v / r[i];
                g[n + j] = v / r[j];
            }
        }
    }
    Ok(g)
}

/// Jacobi cyclic sum `{u_a, {u_b, u_c}} + {u_b, {u_c, u_a}} + {u_c, {u_a, u_b}}`
/// over coordinate indices into `(lambda, rho)`.
pub fn jacobi_residual(pt: &PoissonPoint, a: usize, b: usize, c: usize) -> Result<f64> {
    let n = pt.n();
    let dim = 2 * n;
    for &idx in &[a, b, c] {
        if idx >= dim {
            return Err(Error::IndexOutOfRange { index: idx, n: dim });
        }
    }
    let term = |x: usize, y: usize, z: usize| -> Result<f64> {
        let coord = Functional::coordinate(x, dim);
        let inner = structure_functional(y, z, n);
        bracket(pt, &coord, &inner)
    };
    Ok(term(a, b, c)? + term(b, c, a)? + term(c, a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_peakon_point() -> PoissonPoint {
        PoissonPoint::new(vec![0.5], vec![0.125]).unwrap()
    }

    fn two_point() -> PoissonPoint {
        PoissonPoint::new(vec![0.5, 1.0], vec![0.125, 0.25]).unwrap()
    }

    #[test]
    fn structure_constants_examples() {
        let pt = one_peakon_point();
        assert_eq!(
            bracket_coords(&pt, 0, 0, CoordPair::LambdaLambda).unwrap(),
            0.0
        );
        // {rho_1, lambda_1} = lambda^2 rho = 1/32.
        assert!(
            (bracket_coords(&pt, 0, 0, CoordPair::RhoLambda).unwrap() - 1.0 / 32.0).abs()
                < 1e-15
        );
        let pt2 = two_point();
        // {rho_1, rho_2} = 2 (1/2)(1)(1/8)(1/4)/(1 - 1/2) = 1/16.
        assert!(
            (bracket_coords(&pt2, 0, 1, CoordPair::RhoRho).unwrap() - 1.0 / 16.0).abs()
                < 1e-15
        );
        // Antisymmetry across the pair.
        assert!(
            (bracket_coords(&pt2, 1, 0, CoordPair::RhoRho).unwrap() + 1.0 / 16.0).abs()
                < 1e-15
        );
        assert_eq!(bracket_coords(&pt2, 1, 1, CoordPair::RhoRho).unwrap(), 0.0);
    }

    #[test]
    fn bracket_of_coordinates_matches_structure_constants() {
        let pt = two_point();
        let dim = 4;
        // {lambda_k, lambda_n} = 0.
        let l0 = Functional::coordinate(0, dim);
        let l1 = Functional::coordinate(1, dim);
        assert_eq!(bracket(&pt, &l0, &l1).unwrap(), 0.0);
        // {rho_1, lambda_1} through the chain rule.
        let r0 = Functional::coordinate(2, dim);
        let direct = bracket_coords(&pt, 0, 0, CoordPair::RhoLambda).unwrap();
        assert!((bracket(&pt, &r0, &l0).unwrap() - direct).abs() < 1e-15);
        // Antisymmetry: {A, A} = 0.
        assert_eq!(bracket(&pt, &r0, &r0).unwrap(), 0.0);
    }

    #[test]
    fn ah_identity_analytic() {
        for pt in [one_peakon_point(), two_point()] {
            let rep = verify_ah(&pt, -1.0, -2.0, Differentiation::Analytic).unwrap();
            assert!(rep.residual < 1e-13, "residual {:e}", rep.residual);
        }
        // Degenerate zero-mass point: both sides vanish.
        let empty = PoissonPoint::new(vec![], vec![]).unwrap();
        let rep = verify_ah(&empty, -1.0, -2.0, Differentiation::Analytic).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
    }

    #[test]
    fn ah_identity_finite_difference_and_richardson_order() {
        let pt = two_point();
        let rep = verify_ah(
            &pt,
            -1.0,
            -2.0,
            Differentiation::FiniteDifference { rel_step: 1e-3 },
        )
        .unwrap();
        assert!(rep.residual < 1e-8, "residual {:e}", rep.residual);
        // After one Richardson extrapolation the gradient error is O(h^4):
        // halving the step should cut the residual by roughly 16.
        let coarse = verify_ah(
            &pt,
            -0.7,
            -2.3,
            Differentiation::FiniteDifference { rel_step: 4e-2 },
        )
        .unwrap();
        let fine = verify_ah(
            &pt,
            -0.7,
            -2.3,
            Differentiation::FiniteDifference { rel_step: 2e-2 },
        )
        .unwrap();
        let ratio = coarse.residual / fine.residual.max(1e-300);
        assert!(
            (6.0..80.0).contains(&ratio),
            "expected ~16x drop, got {ratio} ({:e} -> {:e})",
            coarse.residual,
            fine.residual
        );
    }

    #[test]
    fn ah_identity_mobius_invariance() {
        let pt = two_point();
        let rep = verify_ah_mobius(
            &pt,
            -1.3,
            -0.4,
            (0.7, 1.1, -0.3, 2.0),
            Differentiation::Analytic,
        )
        .unwrap();
        assert!(rep.residual < 1e-13, "residual {:e}", rep.residual);
        assert!(verify_ah_mobius(&pt, -1.0, -1.0, (1.0, 0.0, 0.0, 1.0), Differentiation::Analytic)
            .is_err());
    }

    #[test]
    fn canonical_relations_one_peakon() {
        let pt = one_peakon_point();
        let rep = verify_canonical(&pt, ChartKind::C, 0.0).unwrap();
        assert!(rep.pairing < 1e-6, "pairing residual {:e}", rep.pairing);
        assert!(rep.action_action < 1e-8);
        assert!(rep.angle_angle < 1e-6);
    }

    #[test]
    fn canonical_relations_two_masses_both_charts() {
        let pt = two_point();
        for (kind, param) in [
            (ChartKind::C, 0.0),
            (ChartKind::C, -1.0),
            (ChartKind::F, 1.0),
        ] {
            let rep = verify_canonical(&pt, kind, param).unwrap();
            assert!(
                rep.max_residual() < 1e-6,
                "{kind:?} at {param}: residual {:e}",
                rep.max_residual()
            );
        }
    }

    #[test]
    fn jacobi_identity_on_coordinates() {
        let pt = PoissonPoint::new(vec![0.3, 0.9, 1.7], vec![0.2, 0.05, 0.6]).unwrap();
        let n = pt.n();
        for a in 0..2 * n {
            for b in 0..2 * n {
                for c in 0..2 * n {
                    let res = jacobi_residual(&pt, a, b, c).unwrap();
                    assert!(
                        res.abs() < 1e-12,
                        "jacobi residual {res:e} at ({a}, {b}, {c})"
                    );
                }
            }
        }
    }

    #[test]
    fn flipped_coordinates_satisfy_primed_constants() {
        // Under lambda' = -1/lambda, rho' = rho/lambda^2 the brackets must
        // become {rho'_k, rho'_n} = 2 rho'_k rho'_n/(lambda'_n - lambda'_k),
        // {rho'_k, lambda'_n} = rho'_k delta_kn, {lambda', lambda'} = 0.
        let pt = PoissonPoint::new(vec![0.4, 0.9, 2.1], vec![0.3, 0.11, 0.7]).unwrap();
        let n = pt.n();
        let lam_p = |k: usize| {
            Functional::analytic(
                move |p: &PoissonPoint| Ok(-1.0 / p.lambdas()[k]),
                move |p: &PoissonPoint| {
                    let mut g = vec![0.0; 2 * p.n()];
                    g[k] = 1.0 / (p.lambdas()[k] * p.lambdas()[k]);
                    Ok(g)
                },
            )
        };
        let rho_p = |k: usize| {
            Functional::analytic(
                move |p: &PoissonPoint| Ok(p.rhos()[k] / (p.lambdas()[k] * p.lambdas()[k])),
                move |p: &PoissonPoint| {
                    let l = p.lambdas()[k];
                    let mut g = vec![0.0; 2 * p.n()];
                    g[k] = -2.0 * p.rhos()[k] / (l * l * l);
                    g[p.n() + k] = 1.0 / (l * l);
                    Ok(g)
                },
            )
        };
        for k in 0..n {
            for m in 0..n {
                let ll = bracket(&pt, &lam_p(k), &lam_p(m)).unwrap();
                assert!(ll.abs() < 1e-14, "{{lambda'_{k}, lambda'_{m}}} = {ll:e}");
                let rl = bracket(&pt, &rho_p(k), &lam_p(m)).unwrap();
                let expect = if k == m {
                    rho_p(k).value(&pt).unwrap()
                } else {
                    0.0
                };
                assert!((rl - expect).abs() < 1e-14, "{{rho'_{k}, lambda'_{m}}}");
                let rr = bracket(&pt, &rho_p(k), &rho_p(m)).unwrap();
                let expect = if k == m {
                    0.0
                } else {
                    let lpk = -1.0 / pt.lambdas()[k];
                    let lpm = -1.0 / pt.lambdas()[m];
                    2.0 * rho_p(k).value(&pt).unwrap() * rho_p(m).value(&pt).unwrap()
                        / (lpm - lpk)
                };
                assert!(
                    (rr - expect).abs() < 1e-14 * expect.abs().max(1.0),
                    "{{rho'_{k}, rho'_{m}}} = {rr} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn leibniz_rule() {
        let pt = two_point();
        let dim = 4;
        // A = lambda_1, B = rho_1, C = rho_2 as functionals; check
        // {A*B, C} = A{B,C} + B{A,C} with analytic gradients.
        let a = || Functional::coordinate(0, dim);
        let b = || Functional::coordinate(2, dim);
        let c = Functional::coordinate(3, dim);
        let product = Functional::analytic(
            |p: &PoissonPoint| Ok(p.lambdas()[0] * p.rhos()[0]),
            |p: &PoissonPoint| {
                let mut g = vec![0.0; 4];
                g[0] = p.rhos()[0];
                g[2] = p.lambdas()[0];
                Ok(g)
            },
        );
        let lhs = bracket(&pt, &product, &c).unwrap();
        let rhs = a().value(&pt).unwrap() * bracket(&pt, &b(), &c).unwrap()
            + b().value(&pt).unwrap() * bracket(&pt, &a(), &c).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn point_round_trips_through_string() {
        let pt = two_point();
        let d = pt.to_string_data().unwrap();
        let back = PoissonPoint::from_string(&d).unwrap();
        for k in 0..pt.n() {
            assert!((back.lambdas()[k] - pt.lambdas()[k]).abs() < 1e-9);
            assert!((back.rhos()[k] - pt.rhos()[k]).abs() < 1e-9);
        }
    }
}
