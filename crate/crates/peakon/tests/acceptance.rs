//! Acceptance suite: each test drives one numbered criterion at its pinned
//! tolerance and prints a single PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use peakon::dynamics::{integrate, Controls, Outcome, TwoPeakonBranch, TwoPeakonParams};
use peakon::error::Error;
use peakon::herglotz::Herglotz;
use peakon::inverse_spectral::{from_chart, reconstruct, WeylData, WeylFlavor};
use peakon::poisson::{verify_ah, verify_ah_mobius, Differentiation, PoissonPoint};
use peakon::scalar::{Rat, Scalar};
use peakon::spectral_flow::{chart, ChartKind};
use peakon::string::{from_peakons, mixed_spectrum, weyl_e0, MixedBoundary, PeakonState};
use peakon::verify::{self, SuiteConfig};

fn report(criterion: u32, description: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion}: {verdict} - {description}{detail}");
    assert!(pass, "criterion {criterion} failed{detail}");
}

fn run_records(criterion: u32, description: &str, checks: Vec<verify::CheckRecord>) {
    let failures: Vec<String> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} residual {:e} (params {})", c.check, c.residual, c.params))
        .collect();
    let detail = if failures.is_empty() {
        format!(" ({} checks)", checks.len())
    } else {
        format!(" ({} checks; first failure: {})", checks.len(), failures[0])
    };
    report(criterion, description, failures.is_empty(), &detail);
}

fn spec_config() -> SuiteConfig {
    // Spec-pinned sizes and tolerances.
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

#[test]
fn criterion_01_one_peakon_golden() {
    run_records(
        1,
        "one-peakon golden values (spectra, Weyl data, energy-flow residue law) at 1e-12",
        verify::golden_one_peakon(&spec_config()),
    );
}

#[test]
fn criterion_02_two_peakon_golden() {
    // Random pure-branch data at 1e-10/1e-9, mixed branch up to collision
    // detected within 1e-6 with the residue sum tending to zero.
    run_records(
        2,
        "two-peakon eigenvalues, residue trajectories, and collision detection",
        verify::golden_two_peakon(&spec_config()),
    );
}

#[test]
fn criterion_03_roundtrip_inverse_problem() {
    // 200 random strings with up to 8 masses: exact data round-trips exactly,
    // floating data to 1e-10 relative.
    run_records(
        3,
        "string -> Weyl -> string round trip (exact and floating)",
        verify::roundtrip_suite(&spec_config()),
    );
}

#[test]
fn criterion_04_boole_identities() {
    // 500 random functions with up to 10 poles at 1e-12 relative, plus an
    // exact-arithmetic batch that must hold with zero residual.
    run_records(
        4,
        "level-root sum identities (first, second, product)",
        verify::boole_suite(&spec_config()),
    );
}

#[test]
fn criterion_05_trace_formulas() {
    // 100 random positive states, |a + 4b| >= 0.1, both formulas at 1e-10,
    // including the fixed anchor sum 1/lambda_k(-1,1) = 4/3.
    run_records(
        5,
        "trace formulas against transfer-matrix spectra",
        verify::trace_suite(&spec_config()),
    );
}

#[test]
fn criterion_06_dual_hamiltonians() {
    // Spectral power sums vs direct closed forms at 1e-10 for
    // C in {0, l0/2, -1} and F in {0, 1, -1/(2 l0)}.
    run_records(
        6,
        "direct Hamiltonians equal spectral power sums",
        verify::dual_hamiltonian_suite(&spec_config()),
    );
}

#[test]
fn criterion_07_canonical_relations() {
    // Finite-difference canonical relations at 1e-6 on both charts, and the
    // bracket identity (plus a random linear-fractional transform) at 1e-12
    // with analytic gradients.
    run_records(
        7,
        "canonical relations and the rational-function bracket identity",
        verify::canonical_suite(&spec_config()),
    );
}

#[test]
fn criterion_08_dynamics_equivalence() {
    // Spectral evolution + reconstruction vs adaptive integration (1e-6),
    // exact translation under the momentum flow (1e-9), spectrum constancy
    // along trajectories (1e-9).
    run_records(
        8,
        "spectral evolution agrees with direct integration",
        verify::dynamics_suite(&spec_config()),
    );
}

#[test]
fn criterion_09_jacobi_identity() {
    // Structure constants define a genuine bracket: cyclic sums below 1e-8
    // over all coordinate triples on random points.
    run_records(
        9,
        "Jacobi identity of the spectral bracket",
        verify::jacobi_suite(&spec_config()),
    );
}

#[test]
fn criterion_10_negative_controls() {
    let mut checks = verify::negative_controls(&spec_config());

    // Corrupted Weyl data must be rejected by reconstruction directly too.
    let bad = Herglotz::new_signed(2.0, vec![0.25, 0.5], vec![0.6, -0.1]).unwrap();
    let rejected = WeylData::new(bad, WeylFlavor::Omega0).is_err();
    checks.push(verify::CheckRecord::expects_rejection(
        "negative.reconstruct_corrupt",
        serde_json::json!({}),
        rejected,
    ));
    run_records(10, "corrupted data and inadmissible parameters rejected", checks);
}

// --- Supplementary acceptance-grade fixtures -------------------------------

#[test]
fn one_peakon_closed_numbers() {
    // The concrete numbers behind criterion 1, asserted directly.
    let s = PeakonState::new(vec![0.0], vec![1.0], 0.0).unwrap();
    let d = from_peakons(&s).unwrap();
    assert_eq!(d.gaps(), &[2.0, 2.0]);
    assert_eq!(d.masses(), &[2.0]);
    let lam = mixed_spectrum(&d, MixedBoundary::DIRICHLET).unwrap();
    assert!((lam[0] - 0.5).abs() < 1e-12);
    let e0 = weyl_e0(&d).unwrap();
    assert!((e0.sum_form().unwrap().residues[0] - 0.125).abs() < 1e-12);
}

#[test]
fn exact_one_peakon_reconstruction_is_exact() {
    let omega = Herglotz::new(
        Rat::from_int(2),
        vec![Rat::new(1, 4)],
        vec![Rat::new(1, 2)],
    )
    .unwrap();
    let w = WeylData::new(omega, WeylFlavor::Omega0).unwrap();
    let d = reconstruct(&w).unwrap();
    assert_eq!(d.gaps(), &[Rat::from_int(2), Rat::from_int(2)]);
    assert_eq!(d.masses(), &[Rat::from_int(2)]);
}

#[test]
fn antipeakon_collision_blowup_masses() {
    // Momenta diverge toward the collision; the integrator halts rather than
    // continuing through.
    let s = PeakonState::new(vec![-1.0, 1.0], vec![1.2, -0.7], 0.0).unwrap();
    let params = TwoPeakonParams::from_state(&s).unwrap();
    assert_eq!(params.branch, TwoPeakonBranch::PeakonAntipeakon);
    let t_star = params.collision_time().unwrap();
    let traj = integrate(&s, t_star + 0.5, &Controls::default()).unwrap();
    match traj.outcome {
        Outcome::Collision { time, estimate } => {
            assert!(time <= t_star);
            assert!((estimate - t_star).abs() < 1e-6);
            let p = traj.final_state().momenta();
            assert!(p[0] > 1e3 && p[1] < -1e3, "momenta blow up: {p:?}");
        }
        Outcome::Completed => panic!("collision missed"),
    }
}

#[test]
fn chart_roundtrip_with_admissibility_errors() {
    let s = PeakonState::new(vec![-0.5, 0.7], vec![0.8, 1.1], 0.0).unwrap();
    let d = from_peakons(&s).unwrap();
    let l0 = d.left_gap();
    // Inadmissible parameters: C at/above the left gap, F at/below -1/l0.
    assert!(matches!(
        chart(&d, ChartKind::C, l0),
        Err(Error::InadmissibleParameter(_))
    ));
    assert!(matches!(
        chart(&d, ChartKind::F, -1.0 / l0 - 0.1),
        Err(Error::InadmissibleParameter(_))
    ));
    // Admissible ones round-trip.
    let ch = chart(&d, ChartKind::C, -0.3).unwrap();
    let back = from_chart(&ch).unwrap();
    for (a, b) in back.masses().iter().zip(d.masses()) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn ah_identity_spot_checks() {
    let pt = PoissonPoint::new(vec![0.4, 1.1, 2.2], vec![0.15, 0.3, 0.05]).unwrap();
    let rep = verify_ah(&pt, -0.9, -2.4, Differentiation::Analytic).unwrap();
    assert!(rep.residual < 1e-12);
    let rep = verify_ah_mobius(
        &pt,
        -0.9,
        -2.4,
        (1.3, -0.2, 0.4, 0.9),
        Differentiation::Analytic,
    )
    .unwrap();
    assert!(rep.residual < 1e-12);
}
