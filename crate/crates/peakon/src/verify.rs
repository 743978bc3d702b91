//! Seeded verification suites: identity checks, round trips, trace formulas,
//! canonical relations, and dynamics equivalences, each reported as a
//! machine-readable pass/fail record. The CLI `verify` subcommand and the
//! acceptance tests both drive these.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::dynamics::{
    integrate, integrate_grid, two_peakon_closed_form, Controls, Outcome,
    TwoPeakonBranch, TwoPeakonParams,
};
use crate::error::Error;
use crate::herglotz::Herglotz;
use crate::inverse_spectral::{from_chart, reconstruct, WeylData, WeylFlavor};
use crate::poisson::{
    jacobi_residual, verify_ah, verify_ah_mobius, verify_canonical, Differentiation,
    PoissonPoint,
};
use crate::scalar::{Rat, Scalar};
use crate::spectral_flow::{
    chart, evolve, hamiltonian_direct, hamiltonian_value, ChartKind, DirectKind,
    HamiltonianSpec,
};
use crate::string::{
    from_peakons, mixed_spectrum, to_peakons, weyl_e0, weyl_omega0, weyl_omega0_exact,
    DiscreteString, MixedBoundary, PeakonState,
};

/// One executed check.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub check: String,
    pub params: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn compare(check: &str, params: Value, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
        CheckRecord {
            check: check.to_string(),
            params,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    pub fn residual(check: &str, params: Value, residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            check: check.to_string(),
            params,
            lhs: residual,
            rhs: 0.0,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// A check that must reject its input; `rejected` says whether it did.
    pub fn expects_rejection(check: &str, params: Value, rejected: bool) -> Self {
        CheckRecord {
            check: check.to_string(),
            params,
            lhs: if rejected { 1.0 } else { 0.0 },
            rhs: 1.0,
            residual: if rejected { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: rejected,
        }
    }

    pub fn failure(check: &str, params: Value, message: &str) -> Self {
        let mut params = params;
        if let Some(obj) = params.as_object_mut() {
            obj.insert("error".into(), json!(message));
        }
        CheckRecord {
            check: check.to_string(),
            params,
            lhs: f64::NAN,
            rhs: f64::NAN,
            residual: f64::INFINITY,
            tolerance: 0.0,
            pass: false,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "check": self.check,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.pass,
        })
    }
}

/// Aggregated suite output.
#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckRecord>,
}

impl VerifyReport {
    pub fn push(&mut self, rec: CheckRecord) {
        self.checks.push(rec);
    }

    pub fn extend(&mut self, recs: Vec<CheckRecord>) {
        self.checks.extend(recs);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self, seed: u64) -> Value {
        json!({
            "seed": seed,
            "total": self.checks.len(),
            "failed": self.failures().len(),
            "pass": self.all_pass(),
            "checks": self.checks.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Suite sizes and tolerances. The defaults are the pinned acceptance values.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub boole_count: usize,
    pub boole_tol: f64,
    pub roundtrip_count: usize,
    pub roundtrip_tol: f64,
    pub trace_count: usize,
    pub trace_tol: f64,
    pub dual_count: usize,
    pub dual_tol: f64,
    pub canonical_tol: f64,
    pub ah_tol: f64,
    pub jacobi_tol: f64,
    /// Scales every tolerance; 0 forces all residual-based checks to fail.
    pub tol_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 7,
            boole_count: 500,
            boole_tol: 1e-12,
            roundtrip_count: 200,
            roundtrip_tol: 1e-10,
            trace_count: 100,
            trace_tol: 1e-10,
            dual_count: 25,
            dual_tol: 1e-10,
            canonical_tol: 1e-6,
            ah_tol: 1e-12,
            jacobi_tol: 1e-8,
            tol_scale: 1.0,
        }
    }
}

impl SuiteConfig {
    fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

fn rng_for(cfg: &SuiteConfig, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(stream))
}

// ---------------------------------------------------------------------------
// Random data generators
// ---------------------------------------------------------------------------

pub fn random_positive_state(rng: &mut impl Rng, max_n: usize) -> PeakonState {
    let n = rng.gen_range(1..=max_n);
    let mut q = Vec::with_capacity(n);
    let mut x = rng.gen_range(-3.0..-2.0);
    for _ in 0..n {
        x += rng.gen_range(0.3..1.5);
        q.push(x);
    }
    let p = (0..n).map(|_| rng.gen_range(0.15..2.0)).collect();
    PeakonState::new(q, p, 0.0).expect("generated state valid")
}

pub fn random_positive_herglotz(
    rng: &mut impl Rng,
    max_n: usize,
    zero_alpha: bool,
) -> Herglotz<f64> {
    let n = rng.gen_range(1..=max_n);
    let mut poles = Vec::with_capacity(n);
    let mut g = rng.gen_range(0.5..3.0);
    for _ in 0..n {
        poles.push(g);
        g += rng.gen_range(0.5..(96.0 / n as f64).max(0.6));
    }
    let residues = (0..n).map(|_| rng.gen_range(0.5..10.0)).collect();
    let alpha = if zero_alpha { 0.0 } else { rng.gen_range(-3.0..3.0) };
    Herglotz::new(alpha, poles, residues).expect("generated function valid")
}

pub fn random_rational_string(rng: &mut impl Rng, max_n: usize) -> DiscreteString<Rat> {
    let n = rng.gen_range(1..=max_n);
    // Gap weights k/64 normalized to total length 4 stay exact rationals.
    let weights: Vec<i64> = (0..=n).map(|_| rng.gen_range(4..64)).collect();
    let total: i64 = weights.iter().sum();
    let gaps: Vec<Rat> = weights
        .iter()
        .map(|&w| Rat::from_int(4 * w) / Rat::from_int(total))
        .collect();
    let masses: Vec<Rat> = (0..n)
        .map(|_| Rat::new(rng.gen_range(3..48), 16))
        .collect();
    DiscreteString::new(gaps, masses).expect("generated string valid")
}

pub fn random_float_string(rng: &mut impl Rng, max_n: usize) -> DiscreteString<f64> {
    let n = rng.gen_range(1..=max_n);
    let raw: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.25..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let gaps: Vec<f64> = raw.iter().map(|w| 4.0 * w / total).collect();
    let masses: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..3.0)).collect();
    DiscreteString::new(gaps, masses).expect("generated string valid")
}

pub fn random_point(rng: &mut impl Rng, max_n: usize) -> PoissonPoint {
    let n = rng.gen_range(1..=max_n);
    let mut lambdas = Vec::with_capacity(n);
    let mut l = rng.gen_range(0.2..0.6);
    for _ in 0..n {
        lambdas.push(l);
        l += rng.gen_range(0.3..1.2);
    }
    let rhos = (0..n).map(|_| rng.gen_range(0.02..0.6)).collect();
    PoissonPoint::new(lambdas, rhos).expect("generated point valid")
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

/// Level-root sum identities on random functions: floating at `boole_tol`,
/// plus an exact-rational batch that must hold with zero residual.
pub fn boole_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 1);
    let tol = cfg.tol(cfg.boole_tol);
    let mut out = Vec::new();
    for case in 0..cfg.boole_count {
        let zero_alpha = rng.gen_bool(0.5);
        let f = random_positive_herglotz(&mut rng, 10, zero_alpha);
        let alpha = f.alpha();
        let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let level = alpha + side * rng.gen_range(0.2..4.0);
        let params = json!({"case": case, "n": f.n_poles(), "level": level});
        match f.boole_identities(level) {
            Ok(rep) => {
                out.push(CheckRecord::compare(
                    "boole.first",
                    params.clone(),
                    rep.first.0,
                    rep.first.1,
                    tol,
                ));
                out.push(CheckRecord::compare(
                    "boole.second",
                    params.clone(),
                    rep.second.0,
                    rep.second.1,
                    tol,
                ));
                if let Some((lhs, rhs)) = rep.product {
                    out.push(CheckRecord::compare("boole.product", params, lhs, rhs, tol));
                }
            }
            Err(e) => out.push(CheckRecord::failure("boole.first", params, &e.to_string())),
        }
    }
    // Exact batch: both sides must agree exactly.
    for case in 0..20 {
        let n = rng.gen_range(1..=6usize);
        let mut poles = Vec::new();
        let mut acc = 0i64;
        for _ in 0..n {
            acc += rng.gen_range(1..20);
            poles.push(Rat::new(acc, 8));
        }
        let residues: Vec<Rat> = (0..n).map(|_| Rat::new(rng.gen_range(1..40), 8)).collect();
        let f = Herglotz::new(Rat::zero(), poles, residues).expect("valid");
        let level = Rat::new(rng.gen_range(1..10) * if rng.gen_bool(0.5) { 1 } else { -1 }, 2);
        let params = json!({"case": case, "n": n, "exact": true});
        match f.boole_identities(&level) {
            Ok(rep) => {
                let exact_ok = rep.first.0 == rep.first.1 && rep.second.0 == rep.second.1;
                let product_ok = rep.product.is_none_or(|(l, r)| l == r);
                out.push(CheckRecord::residual(
                    "boole.exact",
                    params,
                    if exact_ok && product_ok { 0.0 } else { 1.0 },
                    0.0,
                ));
            }
            Err(e) => out.push(CheckRecord::failure("boole.exact", params, &e.to_string())),
        }
    }
    out
}

/// Inverse-problem round trip: exact strings reproduce exactly, floating
/// strings to `roundtrip_tol` relative on every gap and mass.
pub fn roundtrip_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 2);
    let tol = cfg.tol(cfg.roundtrip_tol);
    let mut out = Vec::new();
    let exact_cases = cfg.roundtrip_count / 2;
    for case in 0..exact_cases {
        let d = random_rational_string(&mut rng, 8);
        let params = json!({"case": case, "n": d.n_masses(), "exact": true});
        let omega = weyl_omega0_exact(&d);
        let rec = match WeylData::new(omega, WeylFlavor::Omega0).and_then(|w| reconstruct(&w)) {
            Ok(back) => CheckRecord::residual(
                "roundtrip.exact",
                params,
                if back == d { 0.0 } else { 1.0 },
                0.0,
            ),
            Err(e) => CheckRecord::failure("roundtrip.exact", params, &e.to_string()),
        };
        out.push(rec);
    }
    for case in 0..(cfg.roundtrip_count - exact_cases) {
        let d = random_float_string(&mut rng, 8);
        let params = json!({"case": case, "n": d.n_masses(), "exact": false});
        let rec = match weyl_omega0(&d)
            .and_then(|o| WeylData::new(o, WeylFlavor::Omega0))
            .and_then(|w| reconstruct(&w))
        {
            Ok(back) => {
                let mut worst = 0.0f64;
                for (a, b) in back.gaps().iter().zip(d.gaps()) {
                    worst = worst.max((a - b).abs() / b.abs());
                }
                for (a, b) in back.masses().iter().zip(d.masses()) {
                    worst = worst.max((a - b).abs() / b.abs());
                }
                CheckRecord::residual("roundtrip.float", params, worst, tol)
            }
            Err(e) => CheckRecord::failure("roundtrip.float", params, &e.to_string()),
        };
        out.push(rec);
    }
    out
}

/// First and second trace formulas against transfer-matrix spectra, plus the
/// fixed anchor `sum 1/lambda_k(-1, 1) = 4/3` for the unit one-peakon.
pub fn trace_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 3);
    let tol = cfg.tol(cfg.trace_tol);
    let mut out = Vec::new();
    for case in 0..cfg.trace_count {
        let s = random_positive_state(&mut rng, 6);
        // Boundary pairs bounded away from the degenerate line a + 4b = 0.
        let (a, b) = loop {
            let a = rng.gen_range(-2.0..2.0);
            let b = rng.gen_range(-2.0..2.0);
            if (a + 4.0 * b).abs() >= 0.1 {
                break (a, b);
            }
        };
        let bc = MixedBoundary::new(a, b).expect("valid boundary");
        let params = json!({"case": case, "n": s.len(), "a": a, "b": b});
        let d = match from_peakons(&s) {
            Ok(d) => d,
            Err(e) => {
                out.push(CheckRecord::failure("trace.first", params, &e.to_string()));
                continue;
            }
        };
        match mixed_spectrum(&d, bc) {
            Ok(lam) => {
                let tc = crate::spectral_flow::trace_coefficients(&s, bc);
                let s1: f64 = lam.iter().map(|l| 1.0 / l).sum();
                let s2: f64 = lam.iter().map(|l| 1.0 / (l * l)).sum();
                out.push(CheckRecord::compare(
                    "trace.first",
                    params.clone(),
                    s1,
                    tc.first_power_sum(),
                    tol,
                ));
                out.push(CheckRecord::compare(
                    "trace.second",
                    params,
                    s2,
                    tc.second_power_sum(),
                    tol,
                ));
            }
            Err(e) => out.push(CheckRecord::failure("trace.first", params, &e.to_string())),
        }
    }
    // Anchor: unit one-peakon, boundary (-1, 1).
    let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).expect("valid");
    let d = from_peakons(&s).expect("valid");
    let lam = mixed_spectrum(&d, MixedBoundary::new(-1.0, 1.0).expect("valid")).expect("spectrum");
    let s1: f64 = lam.iter().map(|l| 1.0 / l).sum();
    out.push(CheckRecord::compare(
        "trace.anchor",
        json!({"state": "unit one-peakon", "a": -1, "b": 1}),
        s1,
        4.0 / 3.0,
        tol,
    ));
    out
}

/// Spectral power sums vs the direct closed-form Hamiltonians, for the
/// canonical parameter samples of both chart families.
pub fn dual_hamiltonian_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 4);
    let tol = cfg.tol(cfg.dual_tol);
    let mut out = Vec::new();
    for case in 0..cfg.dual_count {
        let s = random_positive_state(&mut rng, 6);
        let d = match from_peakons(&s) {
            Ok(d) => d,
            Err(e) => {
                out.push(CheckRecord::failure(
                    "dual.h1",
                    json!({"case": case}),
                    &e.to_string(),
                ));
                continue;
            }
        };
        let l0 = d.left_gap();
        for &c in &[0.0, l0 / 2.0, -1.0] {
            let params = json!({"case": case, "chart": "c", "parameter": c});
            match chart(&d, ChartKind::C, c) {
                Ok(ch) => {
                    let h1_spec = hamiltonian_value(&ch, &HamiltonianSpec::h1(ChartKind::C, c))
                        .expect("matching chart");
                    let h1_dir = hamiltonian_direct(&s, DirectKind::H1, c).expect("admissible");
                    out.push(CheckRecord::compare("dual.h1", params.clone(), h1_spec, h1_dir, tol));
                    let h2_spec = hamiltonian_value(&ch, &HamiltonianSpec::h2(ChartKind::C, c))
                        .expect("matching chart");
                    let h2_dir = hamiltonian_direct(&s, DirectKind::H2, c).expect("admissible");
                    out.push(CheckRecord::compare("dual.h2", params, h2_spec, h2_dir, tol));
                }
                Err(e) => out.push(CheckRecord::failure("dual.h1", params, &e.to_string())),
            }
        }
        for &f in &[0.0, 1.0, -0.5 / l0] {
            let params = json!({"case": case, "chart": "f", "parameter": f});
            match chart(&d, ChartKind::F, f) {
                Ok(ch) => {
                    let t1_spec = hamiltonian_value(&ch, &HamiltonianSpec::h1(ChartKind::F, f))
                        .expect("matching chart");
                    let t1_dir = hamiltonian_direct(&s, DirectKind::T1, f).expect("admissible");
                    out.push(CheckRecord::compare("dual.t1", params.clone(), t1_spec, t1_dir, tol));
                    let t2_spec = hamiltonian_value(&ch, &HamiltonianSpec::h2(ChartKind::F, f))
                        .expect("matching chart");
                    let t2_dir = hamiltonian_direct(&s, DirectKind::T2, f).expect("admissible");
                    out.push(CheckRecord::compare("dual.t2", params, t2_spec, t2_dir, tol));
                }
                Err(e) => out.push(CheckRecord::failure("dual.t1", params, &e.to_string())),
            }
        }
    }
    out
}

/// Canonical relations on both charts (finite differences) and the bracket
/// identity with analytic gradients, including a linear-fractional transform.
pub fn canonical_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 5);
    let fd_tol = cfg.tol(cfg.canonical_tol);
    let ah_tol = cfg.tol(cfg.ah_tol);
    let mut out = Vec::new();
    for case in 0..3 {
        let pt = random_point(&mut rng, 4);
        let d = match pt.to_string_data() {
            Ok(d) => d,
            Err(e) => {
                out.push(CheckRecord::failure(
                    "canonical.c",
                    json!({"case": case}),
                    &e.to_string(),
                ));
                continue;
            }
        };
        let l0 = d.left_gap();
        for &c in &[0.0, -0.8, 0.4 * l0] {
            let params = json!({"case": case, "chart": "c", "parameter": c, "n": pt.n()});
            match verify_canonical(&pt, ChartKind::C, c) {
                Ok(rep) => out.push(CheckRecord::residual(
                    "canonical.c",
                    params,
                    rep.max_residual(),
                    fd_tol,
                )),
                Err(e) => out.push(CheckRecord::failure("canonical.c", params, &e.to_string())),
            }
        }
        for &f in &[0.0, 0.7, -0.4 / l0] {
            let params = json!({"case": case, "chart": "f", "parameter": f, "n": pt.n()});
            match verify_canonical(&pt, ChartKind::F, f) {
                Ok(rep) => out.push(CheckRecord::residual(
                    "canonical.f",
                    params,
                    rep.max_residual(),
                    fd_tol,
                )),
                Err(e) => out.push(CheckRecord::failure("canonical.f", params, &e.to_string())),
            }
        }
    }
    // Bracket identity with analytic gradients.
    for case in 0..10 {
        let pt = random_point(&mut rng, 4);
        let x = -rng.gen_range(0.3..3.0);
        let y = -rng.gen_range(0.3..3.0) - 3.1;
        let params = json!({"case": case, "x": x, "y": y, "n": pt.n()});
        match verify_ah(&pt, x, y, Differentiation::Analytic) {
            Ok(rep) => out.push(CheckRecord::residual("ah.identity", params.clone(), rep.residual, ah_tol)),
            Err(e) => out.push(CheckRecord::failure("ah.identity", params.clone(), &e.to_string())),
        }
        let (a, b, c, dd) = loop {
            let m = (
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            if (m.0 * m.3 - m.1 * m.2).abs() > 0.2 {
                break m;
            }
        };
        let params = json!({"case": case, "x": x, "y": y, "mobius": [a, b, c, dd]});
        match verify_ah_mobius(&pt, x, y, (a, b, c, dd), Differentiation::Analytic) {
            Ok(rep) => out.push(CheckRecord::residual("ah.mobius", params, rep.residual, ah_tol)),
            Err(e) => out.push(CheckRecord::failure("ah.mobius", params, &e.to_string())),
        }
    }
    out
}

/// Jacobi identity of the structure constants on random points.
pub fn jacobi_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 6);
    let tol = cfg.tol(cfg.jacobi_tol);
    let mut out = Vec::new();
    for case in 0..8 {
        let pt = random_point(&mut rng, 4);
        let dim = 2 * pt.n();
        let mut worst = 0.0f64;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    match jacobi_residual(&pt, a, b, c) {
                        Ok(r) => worst = worst.max(r.abs()),
                        Err(e) => {
                            out.push(CheckRecord::failure(
                                "jacobi",
                                json!({"case": case}),
                                &e.to_string(),
                            ));
                            return out;
                        }
                    }
                }
            }
        }
        out.push(CheckRecord::residual(
            "jacobi",
            json!({"case": case, "n": pt.n()}),
            worst,
            tol,
        ));
    }
    out
}

/// One-peakon golden values: both spectra, the Weyl data, and the residue
/// law of the energy flow.
pub fn golden_one_peakon(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let tol = cfg.tol(1e-12);
    let mut out = Vec::new();
    let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).expect("valid");
    let d = from_peakons(&s).expect("valid");
    let lam = mixed_spectrum(&d, MixedBoundary::DIRICHLET).expect("spectrum");
    out.push(CheckRecord::compare("golden1.lambda", json!({}), lam[0], 0.5, tol));
    let mu = mixed_spectrum(&d, MixedBoundary::SECOND).expect("spectrum");
    out.push(CheckRecord::compare("golden1.mu", json!({}), mu[0], 0.25, tol));
    let omega = weyl_omega0(&d).expect("weyl");
    let sum = omega.sum_form().expect("sum form");
    out.push(CheckRecord::compare("golden1.omega_alpha", json!({}), sum.alpha, 2.0, tol));
    out.push(CheckRecord::compare("golden1.omega_pole", json!({}), sum.poles[0], 0.25, tol));
    out.push(CheckRecord::compare(
        "golden1.omega_residue",
        json!({}),
        sum.residues[0],
        0.5,
        tol,
    ));
    let e0 = weyl_e0(&d).expect("weyl");
    out.push(CheckRecord::compare(
        "golden1.rho0",
        json!({}),
        e0.sum_form().expect("sum").residues[0],
        0.125,
        tol,
    ));
    let ch = chart(&d, ChartKind::C, 0.0).expect("chart");
    let h2 = HamiltonianSpec::h2(ChartKind::C, 0.0);
    for &t in &[0.0, 1.0, 5.0] {
        let moved = evolve(&ch, &h2, t).expect("same chart");
        out.push(CheckRecord::compare(
            "golden1.energy_flow_residue",
            json!({"t": t}),
            moved.residues()[0],
            0.125 * (-t).exp(),
            tol,
        ));
    }
    out
}

/// Two-peakon golden checks: eigenvalues from the conserved pair, residue
/// trajectories on the pure branch, and collision detection on the mixed
/// branch with `s_1 = rho_1 + rho_2` tending to zero.
pub fn golden_two_peakon(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 7);
    let mut out = Vec::new();

    // Pure branch with random data. Velocities are capped so positions stay
    // within the f64 range of the interval map (2 tanh(q/2) saturates and
    // the last gap loses relative precision beyond |q| ~ 14) over t in [0, 10].
    let pbar2 = rng.gen_range(0.25..0.5);
    let pbar1 = pbar2 + rng.gen_range(0.3..0.55);
    let beta = rng.gen_range(0.3..2.0);
    let q_sum0 = rng.gen_range(-1.0..1.0);
    let params = TwoPeakonParams {
        pbar1,
        pbar2,
        branch_constant: beta,
        q_sum0,
        branch: TwoPeakonBranch::PurePeakon,
    };
    let s0 = two_peakon_closed_form(&params, 0.0).expect("regular");
    let d0 = from_peakons(&s0).expect("valid");
    let lam = mixed_spectrum(&d0, MixedBoundary::DIRICHLET).expect("spectrum");
    let ptol = cfg.tol(1e-10);
    out.push(CheckRecord::compare(
        "golden2.lambda1",
        json!({"pbar1": pbar1}),
        lam[0],
        1.0 / (2.0 * pbar1),
        ptol,
    ));
    out.push(CheckRecord::compare(
        "golden2.lambda2",
        json!({"pbar2": pbar2}),
        lam[1],
        1.0 / (2.0 * pbar2),
        ptol,
    ));

    // Residue trajectories: rho_1 = (R/8A) e^{-pbar1 t}, rho_2 = (R beta/8A) e^{-pbar2 t},
    // R^2 = e^{-Q(0)} (pbar2 + beta pbar1) / (beta (pbar1 + beta pbar2)).
    let a = pbar1 - pbar2;
    let r_const = ((-q_sum0).exp() / beta * (pbar2 + beta * pbar1) / (pbar1 + beta * pbar2)).sqrt();
    let rtol = cfg.tol(1e-9);
    let mut worst = 0.0f64;
    for k in 0..=20 {
        let t = 0.5 * k as f64;
        let st = two_peakon_closed_form(&params, t).expect("regular");
        let e0 = weyl_e0(&from_peakons(&st).expect("valid")).expect("weyl");
        let sum = e0.sum_form().expect("sum");
        let expect1 = r_const / (8.0 * a) * (-pbar1 * t).exp();
        let expect2 = r_const * beta / (8.0 * a) * (-pbar2 * t).exp();
        // Poles ascend: 1/(2 pbar1) < 1/(2 pbar2).
        worst = worst.max((sum.residues[0] - expect1).abs() / expect1);
        worst = worst.max((sum.residues[1] - expect2).abs() / expect2);
    }
    out.push(CheckRecord::residual(
        "golden2.residue_trajectories",
        json!({"pbar1": pbar1, "pbar2": pbar2, "beta": beta}),
        worst,
        rtol,
    ));

    // Mixed branch: collision detection and s1 -> 0.
    let pbar1m = rng.gen_range(0.5..1.2);
    let pbar2m = -rng.gen_range(0.4..1.0);
    let zeta = rng.gen_range(0.1..0.6);
    let mparams = TwoPeakonParams {
        pbar1: pbar1m,
        pbar2: pbar2m,
        branch_constant: zeta,
        q_sum0: rng.gen_range(-0.5..0.5),
        branch: TwoPeakonBranch::PeakonAntipeakon,
    };
    let t_star = mparams.collision_time().expect("mixed branch");
    let s0 = two_peakon_closed_form(&mparams, 0.0).expect("before collision");
    let traj = integrate(&s0, t_star + 1.0, &Controls::default()).expect("integrates");
    match traj.outcome {
        Outcome::Collision { time, estimate } => {
            out.push(CheckRecord::compare(
                "golden2.collision_time",
                json!({"zeta": zeta, "t_star": t_star}),
                estimate,
                t_star,
                cfg.tol(1e-6),
            ));
            // Closed-form s1 vanishes at the collision and the halt-state
            // residue sum agrees with the closed form on the way in.
            let am = mparams.pbar1 - mparams.pbar2;
            let d_const = ((-mparams.q_sum0).exp() / zeta * (mparams.pbar1 * zeta - mparams.pbar2)
                / (mparams.pbar1 - mparams.pbar2 * zeta))
                .sqrt();
            let s1_closed = |t: f64| {
                d_const / (8.0 * am) * ((-mparams.pbar1 * t).exp() - zeta * (-mparams.pbar2 * t).exp())
            };
            out.push(CheckRecord::residual(
                "golden2.s1_at_collision",
                json!({"t_star": t_star}),
                s1_closed(t_star).abs(),
                cfg.tol(1e-12),
            ));
            let halt = traj.final_state();
            let e0 = weyl_e0(&from_peakons(halt).expect("valid")).expect("weyl");
            let sum = e0.sum_form().expect("sum");
            let s1_halt: f64 = sum.residues.iter().sum();
            out.push(CheckRecord::compare(
                "golden2.s1_matches_closed_form",
                json!({"t_halt": time}),
                s1_halt,
                s1_closed(time),
                cfg.tol(1e-6),
            ));
        }
        Outcome::Completed => out.push(CheckRecord::failure(
            "golden2.collision_time",
            json!({"t_star": t_star}),
            "collision not detected",
        )),
    }
    out
}

/// Dynamics equivalence: spectral evolution plus reconstruction against
/// direct integration, exact translation under the momentum flow, and
/// spectrum constancy along trajectories.
pub fn dynamics_suite(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut rng = rng_for(cfg, 8);
    let mut out = Vec::new();
    let s = loop {
        let s = random_positive_state(&mut rng, 3);
        if s.len() == 3 {
            break s;
        }
    };
    let d = from_peakons(&s).expect("valid");
    let ch = chart(&d, ChartKind::C, 0.0).expect("chart");
    let h2 = HamiltonianSpec::h2(ChartKind::C, 0.0);

    // Energy flow vs adaptive integration.
    let times: Vec<f64> = (1..=10).map(|k| 0.5 * k as f64).collect();
    let traj = integrate_grid(&s, &times, &Controls::default()).expect("integrates");
    let mut worst = 0.0f64;
    for sample in traj.samples.iter().skip(1) {
        let moved = evolve(&ch, &h2, sample.t).expect("same chart");
        let reconstructed = from_chart(&moved).expect("reconstructs");
        let spectral = to_peakons(&reconstructed, sample.t).expect("interior masses");
        for k in 0..3 {
            worst = worst.max((spectral.positions()[k] - sample.state.positions()[k]).abs());
        }
    }
    out.push(CheckRecord::residual(
        "dynamics.energy_flow_positions",
        json!({"n": 3, "t_max": 5.0}),
        worst,
        cfg.tol(1e-6),
    ));

    // Momentum flow is exact translation.
    let h1 = HamiltonianSpec::h1(ChartKind::C, 0.0);
    let mut worst = 0.0f64;
    for &t in &[0.7, 2.0, 4.5] {
        let moved = evolve(&ch, &h1, t).expect("same chart");
        let spectral = to_peakons(&from_chart(&moved).expect("reconstructs"), t).expect("interior");
        for k in 0..3 {
            worst = worst.max((spectral.positions()[k] - (s.positions()[k] + t)).abs());
            worst = worst.max((spectral.momenta()[k] - s.momenta()[k]).abs());
        }
    }
    out.push(CheckRecord::residual(
        "dynamics.translation_flow",
        json!({"n": 3}),
        worst,
        cfg.tol(1e-9),
    ));

    // Translation flow commutes with re-extraction in another chart.
    let t = 1.3;
    let moved = evolve(&ch, &h1, t).expect("same chart");
    let via_spectral = from_chart(&moved).expect("reconstructs");
    let translated = PeakonState::new(
        s.positions().iter().map(|q| q + t).collect(),
        s.momenta().to_vec(),
        t,
    )
    .expect("valid");
    let direct = from_peakons(&translated).expect("valid");
    let c_prime = -0.6;
    let chart_a = chart(&via_spectral, ChartKind::C, c_prime).expect("chart");
    let chart_b = chart(&direct, ChartKind::C, c_prime).expect("chart");
    let mut worst = 0.0f64;
    for k in 0..3 {
        worst = worst.max((chart_a.roots()[k] - chart_b.roots()[k]).abs());
        worst = worst.max((chart_a.residues()[k] - chart_b.residues()[k]).abs());
    }
    out.push(CheckRecord::residual(
        "dynamics.chart_reextraction",
        json!({"c_prime": c_prime, "t": t}),
        worst,
        cfg.tol(1e-8),
    ));

    // Dirichlet spectrum constant along the trajectory.
    let lam0 = mixed_spectrum(&d, MixedBoundary::DIRICHLET).expect("spectrum");
    let mut worst = 0.0f64;
    for sample in traj.samples.iter() {
        let dt = from_peakons(&sample.state).expect("valid");
        let lam = mixed_spectrum(&dt, MixedBoundary::DIRICHLET).expect("spectrum");
        for k in 0..3 {
            worst = worst.max((lam[k] - lam0[k]).abs() / lam0[k]);
        }
    }
    out.push(CheckRecord::residual(
        "dynamics.isospectrality",
        json!({"n": 3}),
        worst,
        cfg.tol(1e-9),
    ));
    out
}

/// Inputs that must be rejected: corrupted Weyl data and inadmissible chart
/// parameters.
pub fn negative_controls(_cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    // Negative residue in Weyl data.
    let bad = Herglotz::new_signed(2.0, vec![0.25, 0.5], vec![0.6, -0.1]).expect("signed ok");
    let rejected = WeylData::new(bad, WeylFlavor::Omega0).is_err();
    out.push(CheckRecord::expects_rejection(
        "negative.corrupt_weyl",
        json!({"residues": [0.6, -0.1]}),
        rejected,
    ));
    // Chart parameters outside the admissible ranges.
    let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).expect("valid");
    let d = from_peakons(&s).expect("valid");
    let c_bad = chart(&d, ChartKind::C, d.left_gap() + 0.5);
    out.push(CheckRecord::expects_rejection(
        "negative.c_above_left_gap",
        json!({"c": d.left_gap() + 0.5}),
        matches!(c_bad, Err(Error::InadmissibleParameter(_))),
    ));
    let f_bad = chart(&d, ChartKind::F, -1.0 / d.left_gap());
    out.push(CheckRecord::expects_rejection(
        "negative.f_at_lower_bound",
        json!({"f": -1.0 / d.left_gap()}),
        matches!(f_bad, Err(Error::InadmissibleParameter(_))),
    ));
    out
}

/// Runs every suite.
pub fn run_all(cfg: &SuiteConfig) -> VerifyReport {
    let mut report = VerifyReport::default();
    report.extend(golden_one_peakon(cfg));
    report.extend(golden_two_peakon(cfg));
    report.extend(boole_suite(cfg));
    report.extend(roundtrip_suite(cfg));
    report.extend(trace_suite(cfg));
    report.extend(dual_hamiltonian_suite(cfg));
    report.extend(canonical_suite(cfg));
    report.extend(jacobi_suite(cfg));
    report.extend(dynamics_suite(cfg));
    report.extend(negative_controls(cfg));
    report
}

/// Identity checks on externally supplied (possibly corrupted) Weyl data:
/// the level-root identities at two levels plus reconstruction validity.
pub fn check_weyl_input(f: &Herglotz<f64>, cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let tol = cfg.tol(cfg.boole_tol);
    let alpha = f.alpha();
    for (k, &level) in [alpha + 1.5, alpha - 1.5].iter().enumerate() {
        let params = json!({"level": level, "which": k});
        match f.boole_identities(level) {
            Ok(rep) => {
                out.push(CheckRecord::compare(
                    "input.boole_first",
                    params.clone(),
                    rep.first.0,
                    rep.first.1,
                    tol,
                ));
                out.push(CheckRecord::compare(
                    "input.boole_second",
                    params,
                    rep.second.0,
                    rep.second.1,
                    tol,
                ));
            }
            Err(e) => {
                out.push(CheckRecord::failure("input.boole_first", params, &e.to_string()))
            }
        }
    }
    let params = json!({"alpha": alpha});
    match WeylData::new(f.clone(), WeylFlavor::Omega0).and_then(|w| reconstruct(&w)) {
        Ok(d) => out.push(CheckRecord::residual(
            "input.reconstruct",
            params,
            (d.gaps().iter().copied().sum::<f64>() - 4.0).abs(),
            cfg.tol(1e-8),
        )),
        Err(e) => out.push(CheckRecord::failure("input.reconstruct", params, &e.to_string())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> SuiteConfig {
        SuiteConfig {
            seed: 11,
            boole_count: 40,
            roundtrip_count: 20,
            trace_count: 15,
            dual_count: 5,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn quick_suites_pass() {
        let cfg = quick_cfg();
        for (name, checks) in [
            ("golden1", golden_one_peakon(&cfg)),
            ("golden2", golden_two_peakon(&cfg)),
            ("boole", boole_suite(&cfg)),
            ("roundtrip", roundtrip_suite(&cfg)),
            ("trace", trace_suite(&cfg)),
            ("dual", dual_hamiltonian_suite(&cfg)),
            ("jacobi", jacobi_suite(&cfg)),
            ("negative", negative_controls(&cfg)),
        ] {
            for c in &checks {
                assert!(
                    c.pass,
                    "{name}: {} failed with residual {:e} (params {})",
                    c.check, c.residual, c.params
                );
            }
        }
    }

    #[test]
    fn determinism_same_seed_same_records() {
        let cfg = quick_cfg();
        let a = boole_suite(&cfg);
        let b = boole_suite(&cfg);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.lhs.to_bits(), y.lhs.to_bits());
            assert_eq!(x.rhs.to_bits(), y.rhs.to_bits());
        }
    }

    #[test]
    fn corrupted_input_fails_checks() {
        let cfg = quick_cfg();
        let bad = Herglotz::new_signed(2.0, vec![0.25, 0.5], vec![0.6, -0.1]).unwrap();
        let checks = check_weyl_input(&bad, &cfg);
        assert!(checks.iter().any(|c| !c.pass));
    }

    #[test]
    fn zero_tolerance_fails_fd_checks() {
        let cfg = SuiteConfig {
            tol_scale: 0.0,
            ..quick_cfg()
        };
        let checks = dynamics_suite(&cfg);
        assert!(checks.iter().any(|c| !c.pass));
    }
}
