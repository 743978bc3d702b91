//! Generalized action-angle charts on the string spectral data, trace
//! coefficients and Hamiltonians, and the linear evolution of spectral
//! coordinates under the flow hierarchy.
//!
//! A chart holds the level roots of a Weyl function together with frozen
//! derivative weights; angles and residues are linked by
//! `rho_n = exp(theta_n) / |combination'(root_n)|`, so residues move
//! exponentially exactly when angles move linearly. Flow times are
//! accumulated per Hamiltonian and applied in a canonical order, which makes
//! commuting flows compose bit-exactly.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::herglotz::Herglotz;
use crate::scalar::Scalar;
use crate::string::{weyl_e0, weyl_omega0, DiscreteString, MixedBoundary, PeakonState};

/// Which family of boundary conditions the chart parametrizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChartKind {
    /// Roots of `psi - C phi` (level set of `Omega_0` at `C`, `C < l0`).
    C,
    /// Roots of `phi + F psi` (level set of `E_0` at `F`, `F > -1/l0`).
    F,
}

impl ChartKind {
    /// The boundary pair realizing the chart's level equation.
    pub fn boundary(self, parameter: f64) -> MixedBoundary {
        match self {
            ChartKind::C => MixedBoundary { a: -parameter, b: 1.0 },
            ChartKind::F => MixedBoundary { a: 1.0, b: parameter },
        }
    }
}

/// Canonical identity of a Hamiltonian's coefficient map.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct FlowKey(Vec<(u32, u64)>);

impl FlowKey {
    fn of(coeffs: &BTreeMap<u32, f64>) -> Self {
        FlowKey(
            coeffs
                .iter()
                .filter(|(_, c)| **c != 0.0)
                .map(|(&m, &c)| (m, c.to_bits()))
                .collect(),
        )
    }

    fn coeffs(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.0.iter().map(|&(m, bits)| (m, f64::from_bits(bits)))
    }
}

/// Power-sum Hamiltonian `h(I) = sum_m c_m sum_n I_n^m` bound to one chart.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    pub kind: ChartKind,
    pub parameter: f64,
    pub coeffs: BTreeMap<u32, f64>,
}

impl HamiltonianSpec {
    /// Momentum-type flow: `h = -sum I_n` (the translation flow at C = 0).
    pub fn h1(kind: ChartKind, parameter: f64) -> Self {
        HamiltonianSpec { kind, parameter, coeffs: BTreeMap::from([(1, -1.0)]) }
    }

    /// Energy-type flow: `h = (1/4) sum I_n^2` (the CH flow at C = 0).
    pub fn h2(kind: ChartKind, parameter: f64) -> Self {
        HamiltonianSpec { kind, parameter, coeffs: BTreeMap::from([(2, 0.25)]) }
    }

    pub fn custom(kind: ChartKind, parameter: f64, coeffs: BTreeMap<u32, f64>) -> Self {
        HamiltonianSpec { kind, parameter, coeffs }
    }

    /// Angle velocity `dh/dI` at one action value.
    fn velocity(&self, action: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(&m, &c)| c * m as f64 * action.powi(m as i32 - 1))
            .sum()
    }

    pub fn to_json(&self) -> Value {
        let kind = match self.kind {
            ChartKind::C => "c",
            ChartKind::F => "f",
        };
        let coeffs: serde_json::Map<String, Value> = self
            .coeffs
            .iter()
            .map(|(m, c)| (m.to_string(), json!(c)))
            .collect();
        json!({
            "chart": { "kind": kind, "parameter": self.parameter },
            "coeffs": coeffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let chart = v
            .get("chart")
            .ok_or_else(|| Error::InvalidInput("missing field \"chart\"".into()))?;
        let kind = match chart.get("kind").and_then(Value::as_str) {
            Some("c") | Some("C") => ChartKind::C,
            Some("f") | Some("F") => ChartKind::F,
            other => {
                return Err(Error::InvalidInput(format!("bad chart kind {other:?}")))
            }
        };
        let parameter = chart
            .get("parameter")
            .and_then(Value::as_f64)
            .ok_or_else(|| Error::InvalidInput("missing chart parameter".into()))?;
        let mut coeffs = BTreeMap::new();
        let obj = v
            .get("coeffs")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::InvalidInput("missing object field \"coeffs\"".into()))?;
        for (k, val) in obj {
            let m: u32 = k
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad power {k:?}")))?;
            let c = val
                .as_f64()
                .ok_or_else(|| Error::InvalidInput(format!("bad coefficient {val}")))?;
            coeffs.insert(m, c);
        }
        Ok(HamiltonianSpec { kind, parameter, coeffs })
    }
}

/// Spectral coordinates for one boundary-condition family: level roots,
/// actions `-1/root`, angles, and residues of the associated Weyl function.
#[derive(Clone, Debug)]
pub struct SpectralChart {
    pub kind: ChartKind,
    pub parameter: f64,
    roots: Vec<f64>,
    base_angles: Vec<f64>,
    /// `|d/dlambda (a phi + b psi)|` at each root, frozen at extraction.
    weights: Vec<f64>,
    flows: BTreeMap<FlowKey, f64>,
}

impl SpectralChart {
    pub fn n(&self) -> usize {
        self.roots.len()
    }

    /// Roots, unchanged by any flow.
    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn actions(&self) -> Vec<f64> {
        self.roots.iter().map(|&r| -1.0 / r).collect()
    }

    /// Angles after all accumulated flows, applied in canonical order.
    pub fn angles(&self) -> Vec<f64> {
        let mut out = self.base_angles.clone();
        for (key, &t) in &self.flows {
            for (n, angle) in out.iter_mut().enumerate() {
                let action = -1.0 / self.roots[n];
                let v: f64 = key
                    .coeffs()
                    .map(|(m, c)| c * m as f64 * action.powi(m as i32 - 1))
                    .sum();
                *angle += v * t;
            }
        }
        out
    }

    /// Residues through the frozen-weight consistency relation.
    pub fn residues(&self) -> Vec<f64> {
        self.angles()
            .iter()
            .zip(&self.weights)
            .map(|(&th, &w)| th.exp() / w)
            .collect()
    }

    /// Constant term of the chart's Weyl function, resolved from the value it
    /// must take at zero (`-1/(4-C)` for C-charts, `4/(1+4F)` for F-charts).
    pub fn chart_constant(&self) -> f64 {
        let ratio_sum: f64 = self
            .residues()
            .iter()
            .zip(&self.roots)
            .map(|(r, root)| r / root)
            .sum();
        match self.kind {
            ChartKind::C => -1.0 / (4.0 - self.parameter) - ratio_sum,
            ChartKind::F => 4.0 / (1.0 + 4.0 * self.parameter) - ratio_sum,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": match self.kind { ChartKind::C => "c", ChartKind::F => "f" },
            "parameter": self.parameter,
            "roots": self.roots,
            "actions": self.actions(),
            "angles": self.angles(),
            "residues": self.residues(),
            "chart_constant": self.chart_constant(),
        })
    }
}

/// Extracts the spectral chart of a string for one boundary family.
///
/// C-charts need `C < l0` (and `C < 4`); F-charts need `F > -1/l0`. Roots sit
/// at the admissible level of `Omega_0` or `E_0`; angles are
/// `log |phi(2, root)|` resp. `log |psi(2, root)|`.
pub fn chart(d: &DiscreteString<f64>, kind: ChartKind, parameter: f64) -> Result<SpectralChart> {
    let l0 = d.left_gap();
    match kind {
        ChartKind::C => {
            if !(parameter < l0) {
                return Err(Error::InadmissibleParameter(format!(
                    "C = {parameter} not below the left gap l0 = {l0}"
                )));
            }
            if parameter >= 4.0 {
                return Err(Error::InadmissibleParameter(format!("C = {parameter} >= 4")));
            }
        }
        ChartKind::F => {
            if !(parameter > -1.0 / l0) {
                return Err(Error::InadmissibleParameter(format!(
                    "F = {parameter} not above -1/l0 = {}",
                    -1.0 / l0
                )));
            }
        }
    }

    let n = d.n_masses();
    let ch = d.characteristic();
    let bc = kind.boundary(parameter);
    let combo = ch.phi.scale(&bc.a).add(&ch.psi.scale(&bc.b));

    let (seeds, weyl) = if n == 0 {
        (Vec::new(), None)
    } else {
        let weyl = match kind {
            ChartKind::C => weyl_omega0(d)?,
            ChartKind::F => weyl_e0(d)?,
        };
        let lr = weyl.level_roots(parameter)?;
        (lr.roots, Some(weyl))
    };

    // Angle values log|phi| (C) or log|psi| (F) cancel catastrophically when
    // a chart root sits close to the angle polynomial's own root system, so
    // the evaluations go through the adaptive exact-refinement path.
    let chq = d.lift_exact().characteristic();
    let param_exact = parameter.to_rat();
    let (combo_exact, angle_poly, angle_exact) = match kind {
        ChartKind::C => (
            chq.psi.sub(&chq.phi.scale(&param_exact)),
            &ch.phi,
            &chq.phi,
        ),
        ChartKind::F => (
            chq.phi.add(&chq.psi.scale(&param_exact)),
            &ch.psi,
            &chq.psi,
        ),
    };
    let evals = crate::string::refined_root_evals(
        angle_poly,
        &combo,
        angle_exact,
        &combo_exact,
        &seeds,
    );
    let mut roots = Vec::with_capacity(n);
    let mut base_angles = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for re in evals {
        if re.root.abs() < 1e-12 {
            return Err(Error::Numerical(format!(
                "degenerate chart root at {:e}",
                re.root
            )));
        }
        roots.push(re.root);
        base_angles.push(re.value.abs().ln());
        weights.push(re.slope.abs());
    }

    let out = SpectralChart {
        kind,
        parameter,
        roots,
        base_angles,
        weights,
        flows: BTreeMap::new(),
    };

    // Residue consistency: the frozen-weight relation must agree with the
    // derivative of the generating Weyl function at each root. The reference
    // route loses relative precision when neighboring spectra nearly
    // coincide, so this guards against structural mistakes, not last digits.
    if let Some(weyl) = weyl {
        for (k, (&root, res)) in out.roots.iter().zip(out.residues()).enumerate() {
            let direct = 1.0 / weyl.derivative_at(root);
            if (direct - res).abs() > 1e-5 * direct.abs().max(res.abs()).max(1e-300) {
                return Err(Error::Numerical(format!(
                    "chart residue {k} inconsistent: {res} vs {direct}"
                )));
            }
        }
    }
    Ok(out)
}

/// Evolves the chart for time `t` under a power-sum Hamiltonian of its own
/// actions: roots and actions are untouched, angles move with velocity
/// `dh/dI_n`, residues follow through the frozen-weight relation.
pub fn evolve(chart: &SpectralChart, spec: &HamiltonianSpec, t: f64) -> Result<SpectralChart> {
    if spec.kind != chart.kind || spec.parameter != chart.parameter {
        return Err(Error::ChartMismatch);
    }
    let mut out = chart.clone();
    if t != 0.0 {
        *out.flows.entry(FlowKey::of(&spec.coeffs)).or_insert(0.0) += t;
    }
    Ok(out)
}

/// Value of a power-sum Hamiltonian on a chart's actions.
pub fn hamiltonian_value(chart: &SpectralChart, spec: &HamiltonianSpec) -> Result<f64> {
    if spec.kind != chart.kind || spec.parameter != chart.parameter {
        return Err(Error::ChartMismatch);
    }
    let actions = chart.actions();
    Ok(spec
        .coeffs
        .iter()
        .map(|(&m, &c)| {
            c * actions
                .iter()
                .map(|a| a.powi(m as i32))
                .sum::<f64>()
        })
        .sum())
}

/// Angle velocities `dh/dI_n` of a Hamiltonian on a chart.
pub fn angle_velocities(chart: &SpectralChart, spec: &HamiltonianSpec) -> Result<Vec<f64>> {
    if spec.kind != chart.kind || spec.parameter != chart.parameter {
        return Err(Error::ChartMismatch);
    }
    Ok(chart
        .actions()
        .iter()
        .map(|&a| spec.velocity(a))
        .collect())
}

/// Closed-form evaluations of the atomic-momentum integrals entering the
/// trace coefficients, with `m = sum 2 p_n delta(x - q_n)`.
#[derive(Clone, Copy, Debug)]
pub struct AtomicIntegrals {
    /// `int m`.
    pub m0: f64,
    /// `int m (1 + e^{-x})`.
    pub m1: f64,
    /// `int m v`.
    pub mv: f64,
    /// `int e^{-x} m D^{-1} m` with the symmetric anti-derivative convention
    /// (an atom contributes zero at its own location).
    pub g: f64,
}

pub fn atomic_integrals(s: &PeakonState) -> AtomicIntegrals {
    let q = s.positions();
    let p = s.momenta();
    let n = q.len();
    let m0 = 2.0 * p.iter().sum::<f64>();
    let m1 = 2.0
        * q.iter()
            .zip(p)
            .map(|(&qk, &pk)| pk * (1.0 + (-qk).exp()))
            .sum::<f64>();
    let mv = 4.0 * crate::dynamics::hamiltonian(s);
    let mut g = 0.0;
    for k in 0..n {
        let left: f64 = p[..k].iter().sum();
        let right: f64 = p[k + 1..].iter().sum();
        g += 2.0 * p[k] * (-q[k]).exp() * (left - right);
    }
    AtomicIntegrals { m0, m1, mv, g }
}

/// First Wronskian expansion coefficients for one boundary pair.
#[derive(Clone, Copy, Debug)]
pub struct TraceCoefficients {
    pub i0: f64,
    pub i1: f64,
    pub i2: f64,
    pub boundary: MixedBoundary,
}

impl TraceCoefficients {
    /// `sum 1/lambda_k(a,b) = -I1/I0`.
    pub fn first_power_sum(&self) -> f64 {
        -self.i1 / self.i0
    }

    /// `sum 1/lambda_k(a,b)^2 = (I1/I0)^2 - 2 I2/I0`.
    pub fn second_power_sum(&self) -> f64 {
        let r = self.i1 / self.i0;
        r * r - 2.0 * self.i2 / self.i0
    }
}

/// Trace coefficients `I0, I1, I2` in terms of the potential, evaluated in
/// closed form on atomic momenta. Linear in `(a, b)`.
pub fn trace_coefficients(s: &PeakonState, bc: MixedBoundary) -> TraceCoefficients {
    let ai = atomic_integrals(s);
    let i1_10 = -ai.m1;
    let i1_01 = -4.0 * ai.m0;
    let i2_10 = 0.5 * ai.m0 * ai.m0 - 2.0 * ai.g - ai.mv;
    let i2_01 = 2.0 * ai.m0 * ai.m0 - 4.0 * ai.mv;
    TraceCoefficients {
        i0: bc.weight(),
        i1: bc.a * i1_10 + bc.b * i1_01,
        i2: bc.a * i2_10 + bc.b * i2_01,
        boundary: bc,
    }
}

/// The four direct-space Hamiltonian families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectKind {
    H1,
    H2,
    T1,
    T2,
}

/// Direct-space evaluation of the flow Hamiltonians from the closed-form
/// atomic integrals. Matches the spectral power sums `-sum I_n` (first) and
/// `(1/4) sum I_n^2` (second) on the corresponding chart.
pub fn hamiltonian_direct(s: &PeakonState, kind: DirectKind, parameter: f64) -> Result<f64> {
    let ai = atomic_integrals(s);
    match kind {
        DirectKind::H1 | DirectKind::H2 => {
            let c = parameter;
            let d = 4.0 - c;
            if d.abs() < 1e-12 {
                return Err(Error::InadmissibleParameter("C = 4".into()));
            }
            if matches!(kind, DirectKind::H1) {
                Ok((-c * ai.m1 + 4.0 * ai.m0) / d)
            } else {
                let sq = (c * ai.m1 - 4.0 * ai.m0) / d;
                let bracket = 0.5 * (c - 4.0) * ai.m0 * ai.m0 - 2.0 * c * ai.g + d * ai.mv;
                Ok((sq * sq + 2.0 / d * bracket) / 4.0)
            }
        }
        DirectKind::T1 | DirectKind::T2 => {
            let f = parameter;
            let d = 1.0 + 4.0 * f;
            if d.abs() < 1e-12 {
                return Err(Error::InadmissibleParameter("F = -1/4".into()));
            }
            if matches!(kind, DirectKind::T1) {
                Ok((ai.m1 + 4.0 * f * ai.m0) / d)
            } else {
                let sq = (ai.m1 + 4.0 * f * ai.m0) / d;
                let bracket = 0.5 * d * ai.m0 * ai.m0 - 2.0 * ai.g - d * ai.mv;
                Ok((sq * sq - 2.0 / d * bracket) / 4.0)
            }
        }
    }
}

/// Rebuilds the chart's Weyl function (`E_0^C` or `Omega_0^F`) in
/// pole/residue form, with the constant term resolved from its value at zero.
pub fn chart_weyl_function(chart: &SpectralChart) -> Result<Herglotz<f64>> {
    Herglotz::new(
        chart.chart_constant(),
        chart.roots().to_vec(),
        chart.residues(),
    )
}

/// CSV rows `(n, root, action, angle, residue)`.
pub fn chart_csv(chart: &SpectralChart) -> String {
    let mut out = String::from("n,root,action,angle,residue\n");
    let actions = chart.actions();
    let angles = chart.angles();
    let residues = chart.residues();
    for (n, &r) in chart.roots().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            n + 1,
            r,
            actions[n],
            angles[n],
            residues[n]
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::string::{from_peakons, mixed_spectrum};

    fn unit_string() -> DiscreteString<f64> {
        let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).unwrap();
        from_peakons(&s).unwrap()
    }

    #[test]
    fn c_chart_at_zero_one_peakon() {
        let ch = chart(&unit_string(), ChartKind::C, 0.0).unwrap();
        assert!((ch.roots()[0] - 0.5).abs() < 1e-14);
        assert!((ch.actions()[0] + 2.0).abs() < 1e-13);
        // theta = log|phi(2, 1/2)| = log 1 = 0.
        assert!(ch.angles()[0].abs() < 1e-13);
        assert!((ch.residues()[0] - 0.125).abs() < 1e-14);
        assert!((ch.chart_constant() + 0.5).abs() < 1e-13);
    }

    #[test]
    fn c_chart_at_one_matches_level_roots() {
        let ch = chart(&unit_string(), ChartKind::C, 1.0).unwrap();
        assert!((ch.roots()[0] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn f_chart_at_zero_one_peakon() {
        let ch = chart(&unit_string(), ChartKind::F, 0.0).unwrap();
        assert!((ch.roots()[0] - 0.25).abs() < 1e-14);
        assert!((ch.actions()[0] + 4.0).abs() < 1e-13);
        // tau = log|psi(2, 1/4)| = log 2.
        assert!((ch.angles()[0] - 2.0f64.ln()).abs() < 1e-13);
        // sigma_1 = 1/2 (residue of Omega_0 itself at F = 0).
        assert!((ch.residues()[0] - 0.5).abs() < 1e-13);
        assert!((ch.chart_constant() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inadmissible_parameters_rejected() {
        let d = unit_string();
        assert!(matches!(
            chart(&d, ChartKind::C, 2.5),
            Err(Error::InadmissibleParameter(_))
        ));
        assert!(matches!(
            chart(&d, ChartKind::F, -0.5),
            Err(Error::InadmissibleParameter(_))
        ));
    }

    #[test]
    fn evolve_moves_residues_exponentially() {
        let ch = chart(&unit_string(), ChartKind::C, 0.0).unwrap();
        let h2 = HamiltonianSpec::h2(ChartKind::C, 0.0);
        for &t in &[0.0, 1.0, 5.0] {
            let moved = evolve(&ch, &h2, t).unwrap();
            assert_eq!(moved.roots(), ch.roots());
            let expect = 0.125 * (-t).exp();
            assert!(
                (moved.residues()[0] - expect).abs() < 1e-14 * expect.max(1.0),
                "t = {t}"
            );
        }
        let h1 = HamiltonianSpec::h1(ChartKind::C, 0.0);
        let moved = evolve(&ch, &h1, 2.0).unwrap();
        assert!((moved.residues()[0] - 0.125 * (-2.0f64).exp()).abs() < 1e-15);
        // Mismatched chart rejected.
        let wrong = HamiltonianSpec::h1(ChartKind::F, 0.0);
        assert!(matches!(evolve(&ch, &wrong, 1.0), Err(Error::ChartMismatch)));
    }

    #[test]
    fn flows_commute_bit_exactly() {
        let s = PeakonState::new(vec![-1.0, 0.3, 1.2], vec![0.9, 1.4, 0.6], 0.0).unwrap();
        let d = from_peakons(&s).unwrap();
        let ch = chart(&d, ChartKind::C, 0.0).unwrap();
        let h1 = HamiltonianSpec::h1(ChartKind::C, 0.0);
        let h2 = HamiltonianSpec::h2(ChartKind::C, 0.0);
        let ab = evolve(&evolve(&ch, &h1, 0.7).unwrap(), &h2, 1.3).unwrap();
        let ba = evolve(&evolve(&ch, &h2, 1.3).unwrap(), &h1, 0.7).unwrap();
        assert_eq!(ab.angles(), ba.angles());
        assert_eq!(ab.residues(), ba.residues());
        assert_eq!(ab.roots(), ba.roots());
    }

    #[test]
    fn trace_formula_one_peakon() {
        let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).unwrap();
        let tc = trace_coefficients(&s, MixedBoundary::DIRICHLET);
        assert_eq!(tc.i0, 4.0);
        assert_eq!(tc.i1, -8.0);
        assert!((tc.first_power_sum() - 2.0).abs() < 1e-14);
        let tc = trace_coefficients(&s, MixedBoundary::new(-1.0, 1.0).unwrap());
        assert_eq!(tc.i0, 3.0);
        assert!((tc.i1 - (4.0 - 8.0)).abs() < 1e-14);
        assert!((tc.first_power_sum() - 4.0 / 3.0).abs() < 1e-14);
        // Empty state.
        let tc = trace_coefficients(&PeakonState::empty(), MixedBoundary::DIRICHLET);
        assert_eq!((tc.i1, tc.i2), (0.0, 0.0));
        assert_eq!(tc.i0, 4.0);
    }

    #[test]
    fn dual_hamiltonians_one_peakon() {
        let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).unwrap();
        let d = from_peakons(&s).unwrap();
        // H1(0): spectral -sum I = 2, direct int m = 2.
        let ch = chart(&d, ChartKind::C, 0.0).unwrap();
        let h1 = hamiltonian_value(&ch, &HamiltonianSpec::h1(ChartKind::C, 0.0)).unwrap();
        assert!((h1 - 2.0).abs() < 1e-13);
        assert!((hamiltonian_direct(&s, DirectKind::H1, 0.0).unwrap() - 2.0).abs() < 1e-14);
        // H2(0) = 1.
        let h2 = hamiltonian_value(&ch, &HamiltonianSpec::h2(ChartKind::C, 0.0)).unwrap();
        assert!((h2 - 1.0).abs() < 1e-13);
        assert!((hamiltonian_direct(&s, DirectKind::H2, 0.0).unwrap() - 1.0).abs() < 1e-14);
        // H1(1) = 4/3.
        let ch1 = chart(&d, ChartKind::C, 1.0).unwrap();
        let h11 = hamiltonian_value(&ch1, &HamiltonianSpec::h1(ChartKind::C, 1.0)).unwrap();
        assert!((h11 - 4.0 / 3.0).abs() < 1e-13);
        assert!(
            (hamiltonian_direct(&s, DirectKind::H1, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14
        );
        // T2(1) = 36/25 via the F-chart.
        let chf = chart(&d, ChartKind::F, 1.0).unwrap();
        assert!((chf.roots()[0] - 5.0 / 12.0).abs() < 1e-14);
        let t2 = hamiltonian_value(&chf, &HamiltonianSpec::h2(ChartKind::F, 1.0)).unwrap();
        assert!((t2 - 36.0 / 25.0).abs() < 1e-13);
        assert!(
            (hamiltonian_direct(&s, DirectKind::T2, 1.0).unwrap() - 36.0 / 25.0).abs() < 1e-13
        );
    }

    #[test]
    fn spectrum_matches_trace_for_random_boundary(){
        let s = PeakonState::new(vec![-0.8, 0.2, 1.1], vec![1.2, 0.4, 0.9], 0.0).unwrap();
        let d = from_peakons(&s).unwrap();
        for &(a, b) in &[(0.0, 1.0), (1.0, 0.0), (-0.7, 1.3), (2.0, 0.6)] {
            let bc = MixedBoundary::new(a, b).unwrap();
            let lam = mixed_spectrum(&d, bc).unwrap();
            let tc = trace_coefficients(&s, bc);
            let s1: f64 = lam.iter().map(|l| 1.0 / l).sum();
            let s2: f64 = lam.iter().map(|l| 1.0 / (l * l)).sum();
            assert!(
                (s1 - tc.first_power_sum()).abs() < 1e-10 * s1.abs().max(1.0),
                "first trace at ({a}, {b})"
            );
            assert!(
                (s2 - tc.second_power_sum()).abs() < 1e-10 * s2.abs().max(1.0),
                "second trace at ({a}, {b})"
            );
        }
    }

    #[test]
    fn hamiltonian_spec_json_roundtrip() {
        let h = HamiltonianSpec::h2(ChartKind::C, 0.5);
        let v = h.to_json();
        let back = HamiltonianSpec::from_json(&v).unwrap();
        assert_eq!(h, back);
    }
}
