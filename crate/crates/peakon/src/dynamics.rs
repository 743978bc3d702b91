//! Direct integration of the finite-dimensional peakon Hamiltonian system
//! `H = (1/2) sum p_i p_j exp(-|q_i - q_j|)`, plus the closed-form one- and
//! two-peakon solutions used as independent oracles for the spectral side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::string::PeakonState;

/// Value of the peakon Hamiltonian.
pub fn hamiltonian(s: &PeakonState) -> f64 {
    let q = s.positions();
    let p = s.momenta();
    let mut h = 0.0;
    for i in 0..q.len() {
        for j in 0..q.len() {
            h += 0.5 * p[i] * p[j] * (-(q[i] - q[j]).abs()).exp();
        }
    }
    h
}

/// Total momentum `P = sum p_n`.
pub fn total_momentum(s: &PeakonState) -> f64 {
    s.momenta().iter().sum()
}

/// Integrator controls.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct Controls {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    /// Halt with a collision diagnostic when the smallest position gap drops
    /// below this (mixed-sign momenta only).
    pub collision_eps: f64,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            collision_eps: 1e-8,
        }
    }
}

/// One sampled point of a trajectory.
#[derive(Clone, Debug)]
pub struct Sample {
    pub t: f64,
    pub state: PeakonState,
    pub h: f64,
    pub p_total: f64,
}

/// How an integration ended.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Completed,
    /// Halted when two peakons of opposite sign closed below the gap
    /// threshold. `time` is where integration stopped; `estimate` extrapolates
    /// the blow-up time from the diverging momentum difference.
    Collision { time: f64, estimate: f64 },
}

/// Trajectory samples plus conservation diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub outcome: Outcome,
    /// Max relative drift of H over accepted steps.
    pub h_drift: f64,
    /// Max relative drift of P over accepted steps.
    pub p_drift: f64,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &PeakonState {
        &self.samples.last().expect("at least the initial sample").state
    }
}

fn rhs(q: &[f64], p: &[f64], dq: &mut [f64], dp: &mut [f64]) {
    let n = q.len();
    for i in 0..n {
        let mut vq = 0.0;
        let mut vp = 0.0;
        for j in 0..n {
            let e = (-(q[i] - q[j]).abs()).exp();
            vq += p[j] * e;
            if i != j {
                vp += p[i] * p[j] * (q[i] - q[j]).signum() * e;
            }
        }
        dq[i] = vq;
        dp[i] = vp;
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Stepper {
    n: usize,
    k: [Vec<f64>; 7],
    scratch: Vec<f64>,
}

impl Stepper {
    fn new(n: usize) -> Self {
        Stepper {
            n,
            k: std::array::from_fn(|_| vec![0.0; 2 * n]),
            scratch: vec![0.0; 2 * n],
        }
    }

    fn eval(&mut self, stage: usize, y: &[f64]) {
        let (q, p) = y.split_at(self.n);
        let (dq, dp) = self.scratch.split_at_mut(self.n);
        rhs(q, p, dq, dp);
        self.k[stage].copy_from_slice(&self.scratch);
    }

    /// One embedded step from `y`; returns (y5, error_norm) with the error
    /// measured in the mixed absolute/relative norm.
    fn step(&mut self, y: &[f64], h: f64, rtol: f64, atol: f64) -> (Vec<f64>, f64) {
        let dim = 2 * self.n;
        self.eval(0, y);
        let mut ytmp = vec![0.0; dim];
        for s in 0..6 {
            for d in 0..dim {
                let mut acc = 0.0;
                for (j, a) in A[s].iter().enumerate().take(s + 1) {
                    acc += a * self.k[j][d];
                }
                ytmp[d] = y[d] + h * acc;
            }
            let _ = C;
            self.eval(s + 1, &ytmp);
        }
        let mut y5 = vec![0.0; dim];
        let mut err = 0.0;
        for d in 0..dim {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for s in 0..7 {
                acc5 += B5[s] * self.k[s][d];
                acc4 += B4[s] * self.k[s][d];
            }
            y5[d] = y[d] + h * acc5;
            let sc = atol + rtol * y[d].abs().max(y5[d].abs());
            let e = h * (acc5 - acc4) / sc;
            err += e * e;
        }
        (y5, (err / dim as f64).sqrt())
    }
}

/// Integrates the peakon system, sampling the state at each requested time.
///
/// `times` must be nondecreasing and start at or after the state's own time
/// label. Conserved `H` and `P` are monitored along every accepted step. In
/// mixed-sign mode the run halts with a collision diagnostic once the
/// smallest gap drops below `controls.collision_eps`; in pure mode the strict
/// ordering of positions is asserted instead.
pub fn integrate_grid(
    s: &PeakonState,
    times: &[f64],
    controls: &Controls,
) -> Result<Trajectory> {
    let n = s.len();
    let t0 = s.time();
    for w in times.windows(2) {
        if w[1] < w[0] {
            return Err(Error::InvalidInput("output times must be nondecreasing".into()));
        }
    }
    if let Some(&first) = times.first() {
        if first < t0 {
            return Err(Error::InvalidInput(format!(
                "first output time {first} precedes state time {t0}"
            )));
        }
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidInput("non-finite output time".into()));
    }

    let mixed = !s.is_positive() && !s.momenta().iter().all(|&p| p < 0.0);
    let h0 = hamiltonian(s);
    let p0 = total_momentum(s);

    let mut traj = Trajectory {
        samples: vec![Sample { t: t0, state: s.clone(), h: h0, p_total: p0 }],
        outcome: Outcome::Completed,
        h_drift: 0.0,
        p_drift: 0.0,
        steps_accepted: 0,
        steps_rejected: 0,
    };
    if n == 0 {
        for &t in times {
            traj.samples.push(Sample {
                t,
                state: PeakonState::empty().with_time(t),
                h: 0.0,
                p_total: 0.0,
            });
        }
        return Ok(traj);
    }

    let mut y: Vec<f64> = s.positions().iter().chain(s.momenta()).copied().collect();
    let mut t = t0;
    let mut stepper = Stepper::new(n);
    let t_end = times.last().copied().unwrap_or(t0);
    let span = (t_end - t0).max(1e-3);
    let mut h = (1e-3 * span).min(controls.max_step);
    let h_min = 1e-14 * span.max(1.0);

    let state_of = |y: &[f64], t: f64| -> Result<PeakonState> {
        PeakonState::new(y[..n].to_vec(), y[n..].to_vec(), t)
    };

    let mut next_out = 0;
    while next_out < times.len() && times[next_out] <= t {
        let sample_state = state_of(&y, times[next_out])?;
        traj.samples.push(Sample {
            t: times[next_out],
            h: hamiltonian(&sample_state),
            p_total: total_momentum(&sample_state),
            state: sample_state,
        });
        next_out += 1;
    }

    'outer: while next_out < times.len() {
        let target = times[next_out];
        while t < target {
            let h_try = h.min(target - t).min(controls.max_step);
            let (y_new, err) = stepper.step(&y, h_try, controls.rtol, controls.atol);

            if !err.is_finite() {
                return Err(Error::StepFailure { t, reason: "non-finite error estimate".into() });
            }
            if err > 1.0 {
                traj.steps_rejected += 1;
                h = h_try * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                if h < h_min {
                    return Err(Error::StepFailure {
                        t,
                        reason: format!("step size underflow ({h:e})"),
                    });
                }
                continue;
            }

            // Ordering must survive the step; otherwise the smooth-regime
            // right-hand side is no longer valid, so retry smaller.
            let ordered = y_new[..n].windows(2).all(|w| w[0] < w[1]);
            if !ordered {
                traj.steps_rejected += 1;
                h = 0.5 * h_try;
                if h < h_min {
                    return Err(Error::StepFailure {
                        t,
                        reason: "ordering loss at minimum step".into(),
                    });
                }
                continue;
            }

            t += h_try;
            y = y_new;
            traj.steps_accepted += 1;
            h = h_try * (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);

            let st = state_of(&y, t)?;
            let hv = hamiltonian(&st);
            let pv = total_momentum(&st);
            traj.h_drift = traj.h_drift.max((hv - h0).abs() / h0.abs().max(1e-300));
            traj.p_drift = traj.p_drift.max((pv - p0).abs() / p0.abs().max(1.0));

            if mixed {
                let min_gap = y[..n]
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(f64::INFINITY, f64::min);
                if min_gap < controls.collision_eps {
                    // The colliding pair's momentum difference diverges like
                    // 2/(t* - t); invert that for the blow-up estimate.
                    let (i, _) = y[..n]
                        .windows(2)
                        .map(|w| w[1] - w[0])
                        .enumerate()
                        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                        .unwrap();
                    let dp = (y[n + i] - y[n + i + 1]).abs();
                    let estimate = t + 2.0 / dp.max(1e-300);
                    traj.samples.push(Sample { t, h: hv, p_total: pv, state: st });
                    traj.outcome = Outcome::Collision { time: t, estimate };
                    break 'outer;
                }
            }
        }
        if matches!(traj.outcome, Outcome::Collision { .. }) {
            break;
        }
        let st = state_of(&y, t)?;
        traj.samples.push(Sample {
            t,
            h: hamiltonian(&st),
            p_total: total_momentum(&st),
            state: st,
        });
        next_out += 1;
    }
    Ok(traj)
}

/// Integrates to a single final time.
pub fn integrate(s: &PeakonState, t_final: f64, controls: &Controls) -> Result<Trajectory> {
    integrate_grid(s, &[t_final], controls)
}

/// Which closed-form branch a two-peakon configuration follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoPeakonBranch {
    PurePeakon,
    PeakonAntipeakon,
}

/// Scattering data of the two-peakon system: asymptotic velocities, the
/// branch constant, and the conserved center.
#[derive(Clone, Debug)]
pub struct TwoPeakonParams {
    pub pbar1: f64,
    pub pbar2: f64,
    /// `beta` on the pure branch, `zeta` on the mixed branch.
    pub branch_constant: f64,
    pub q_sum0: f64,
    pub branch: TwoPeakonBranch,
}

impl TwoPeakonParams {
    /// Solves the scattering data from a two-peakon state via the conserved
    /// pair `(P, H)`: the asymptotic velocities are the roots of
    /// `z^2 - P z + (P^2 - 2H)/2`.
    pub fn from_state(s: &PeakonState) -> Result<Self> {
        if s.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "two-peakon data required, got {}",
                s.len()
            )));
        }
        let p = s.momenta();
        let q = s.positions();
        let p_total = p[0] + p[1];
        let h = hamiltonian(s);
        let disc = 4.0 * h - p_total * p_total;
        if disc <= 0.0 {
            return Err(Error::InvalidInput(
                "equal asymptotic velocities are excluded".into(),
            ));
        }
        let a = disc.sqrt();
        let pbar1 = 0.5 * (p_total + a);
        let pbar2 = 0.5 * (p_total - a);
        let p_diff = p[0] - p[1];
        let (branch, branch_constant) = if pbar1 * pbar2 > 0.0 {
            let beta = (a - p_diff) / (a + p_diff);
            if beta <= 0.0 {
                return Err(Error::Numerical(format!("nonpositive beta = {beta}")));
            }
            (TwoPeakonBranch::PurePeakon, beta)
        } else {
            let zeta = (p_diff - a) / (p_diff + a);
            if zeta <= 0.0 {
                return Err(Error::Numerical(format!("nonpositive zeta = {zeta}")));
            }
            (TwoPeakonBranch::PeakonAntipeakon, zeta)
        };
        Ok(TwoPeakonParams {
            pbar1,
            pbar2,
            branch_constant,
            q_sum0: q[0] + q[1],
            branch,
        })
    }

    /// `A = pbar1 - pbar2`.
    pub fn velocity_gap(&self) -> f64 {
        self.pbar1 - self.pbar2
    }

    /// Collision time of the mixed branch (`zeta e^{A t} = 1`).
    pub fn collision_time(&self) -> Option<f64> {
        match self.branch {
            TwoPeakonBranch::PeakonAntipeakon => {
                Some(-self.branch_constant.ln() / self.velocity_gap())
            }
            TwoPeakonBranch::PurePeakon => None,
        }
    }
}

/// Closed-form two-peakon state at time `t`.
///
/// Mixed-branch evaluation close to the collision time is rejected: the
/// momenta blow up there and no continuation is defined.
pub fn two_peakon_closed_form(params: &TwoPeakonParams, t: f64) -> Result<PeakonState> {
    let a = params.velocity_gap();
    let (p1b, p2b) = (params.pbar1, params.pbar2);
    let p_total = p1b + p2b;
    let (p_diff, q_diff, q_sum) = match params.branch {
        TwoPeakonBranch::PurePeakon => {
            let beta = params.branch_constant;
            let w = beta * (a * t).exp();
            let p_diff = a * (1.0 - w) / (1.0 + w);
            let q_diff = (a * a * w / ((p1b + p2b * w) * (p2b + p1b * w))).ln();
            let q_sum = params.q_sum0 + p_total * t
                - ((p1b + p2b * w) / (p2b + p1b * w)).ln()
                + ((p1b + beta * p2b) / (p2b + beta * p1b)).ln();
            (p_diff, q_diff, q_sum)
        }
        TwoPeakonBranch::PeakonAntipeakon => {
            let zeta = params.branch_constant;
            let w = zeta * (a * t).exp();
            if (1.0 - w).abs() < 1e-12 {
                return Err(Error::Numerical(format!(
                    "evaluation at the collision singularity (t = {t})"
                )));
            }
            let p_diff = a * (1.0 + w) / (1.0 - w);
            let q_diff = (a * a * w / ((p1b * w - p2b) * (p1b - p2b * w))).ln();
            let q_sum = params.q_sum0 + p_total * t
                - ((p1b - p2b * w) / (p1b - p2b * zeta)).ln()
                + ((p2b - p1b * w) / (p2b - p1b * zeta)).ln();
            (p_diff, q_diff, q_sum)
        }
    };
    let q1 = 0.5 * (q_sum + q_diff);
    let q2 = 0.5 * (q_sum - q_diff);
    let p1 = 0.5 * (p_total + p_diff);
    let p2 = 0.5 * (p_total - p_diff);
    PeakonState::new(vec![q1, q2], vec![p1, p2], t)
}
