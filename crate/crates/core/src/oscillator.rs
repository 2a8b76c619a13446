//! The Dafermos oscillator `x'' = g(x, x')`.
//!
//! Outside the unit disk centred at `(1, 0)` trajectories run clockwise on
//! circles of radius `c` centred at `(c, 0)`, all of which pass through the
//! origin, where `g` is undefined and a trajectory may leave on any circle.
//! Along a circle the Lagrangian `x'^2 / (2x) - x / 2` reduces to `c - x`,
//! so the action of the exit trajectory on `[0, t1]` is `c sin t1`, smallest
//! for the smallest admissible `c`.

use std::f64::consts::PI;

use crate::{Error, Result, ZERO_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscState {
    pub x: f64,
    pub xdot: f64,
}

impl OscState {
    pub fn new(x: f64, xdot: f64) -> Self {
        Self { x, xdot }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.xdot)
    }

    /// `(x - 1)^2 + x'^2 >= 1` with `x > 0`.
    pub fn is_exterior(&self) -> bool {
        self.x > 0.0 && (self.x - 1.0).powi(2) + self.xdot * self.xdot >= 1.0
    }

    /// `(x^2 + x'^2) / (2x)`, the radius of the circle through this state.
    pub fn circle_parameter(&self) -> f64 {
        (self.x * self.x + self.xdot * self.xdot) / (2.0 * self.x)
    }

    /// Distance from this state to the circle of radius `c` centred at `(c, 0)`.
    pub fn distance_to_circle(&self, c: f64) -> f64 {
        ((self.x - c).hypot(self.xdot) - c).abs()
    }
}

/// Circle `x = c cos(theta0 - t) + c`, `x' = c sin(theta0 - t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleTrajectory {
    pub c: f64,
    pub theta0: f64,
}

impl CircleTrajectory {
    pub fn new(c: f64, theta0: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 1.0) {
            return Err(Error::rejected(format!("circle parameter must be >= 1, got {c}")));
        }
        Ok(Self { c, theta0 })
    }

    pub fn at(&self, t: f64) -> OscState {
        exact_trajectory(self.c, self.theta0, t)
    }
}

pub fn g_rhs(s: OscState) -> Result<f64> {
    if s.x.abs() <= ZERO_TOL && s.xdot.abs() <= ZERO_TOL {
        return Err(Error::UndefinedPoint { x: s.x, xdot: s.xdot });
    }
    let r2 = (s.x - 1.0).powi(2) + s.xdot * s.xdot;
    if r2 < 1.0 {
        Ok(1.0 - s.x)
    } else if s.x > 0.0 {
        Ok((s.xdot * s.xdot - s.x * s.x) / (2.0 * s.x))
    } else {
        Err(Error::UndefinedPoint { x: s.x, xdot: s.xdot })
    }
}

pub fn exact_trajectory(c: f64, theta0: f64, t: f64) -> OscState {
    let phase = theta0 - t;
    // half-angle form keeps x accurate next to the origin
    let half = (0.5 * phase).cos();
    OscState { x: 2.0 * c * half * half, xdot: c * phase.sin() }
}

/// `x'^2 / (2x) - x / 2` on the exterior branch.
pub fn lagrangian(s: OscState) -> Result<f64> {
    if !(s.x > 0.0) {
        return Err(Error::UndefinedPoint { x: s.x, xdot: s.xdot });
    }
    Ok(s.xdot * s.xdot / (2.0 * s.x) - 0.5 * s.x)
}

fn check_window(t1: f64) -> Result<()> {
    if t1 > 0.0 && t1 < PI {
        Ok(())
    } else {
        Err(Error::rejected(format!("t1 must lie in (0, pi), got {t1}")))
    }
}

/// Action on `[0, t1]` of the trajectory leaving the origin on circle `c`.
pub fn action_exit_circle(c: f64, t1: f64) -> Result<f64> {
    check_window(t1)?;
    CircleTrajectory::new(c, PI)?;
    Ok(c * (PI - t1).sin())
}

/// Least-action choice of exit circle; ties go to the smaller `c`.
pub fn select_exit_circle(t1: f64, candidates: &[f64]) -> Result<f64> {
    check_window(t1)?;
    if candidates.is_empty() {
        return Err(Error::rejected("no candidate circles"));
    }
    let mut best: Option<(f64, f64)> = None;
    for &c in candidates {
        let a = action_exit_circle(c, t1)?;
        best = match best {
            Some((bc, ba)) if ba < a || (ba == a && bc <= c) => Some((bc, ba)),
            _ => Some((c, a)),
        };
    }
    Ok(best.map(|(c, _)| c).unwrap())
}

/// Radius of the event ball around the origin.
pub const SWITCH_RADIUS: f64 = 1e-6;
/// Near the origin a step covers at most this fraction of `|state|`.
const APPROACH_FRACTION: f64 = 2e-3;
const MIN_STEP: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscSample {
    pub t: f64,
    pub state: OscState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscTrajectory {
    pub samples: Vec<OscSample>,
    /// Times at which the state reached the origin and was moved to the
    /// exit circle.
    pub switch_times: Vec<f64>,
    pub switch_c: f64,
}

impl OscTrajectory {
    pub fn last(&self) -> OscSample {
        *self.samples.last().expect("trajectory has samples")
    }

    /// Composite trapezoid of the Lagrangian over all samples. Within the
    /// switch ball the Lagrangian is replaced by its limit `c - x` on the
    /// exit circle.
    pub fn action(&self) -> Result<f64> {
        let value = |s: &OscSample| -> Result<f64> {
            if s.state.norm() <= SWITCH_RADIUS {
                Ok(self.switch_c - s.state.x)
            } else {
                lagrangian(s.state)
            }
        };
        let mut total = 0.0;
        for w in self.samples.windows(2) {
            total += 0.5 * (value(&w[0])? + value(&w[1])?) * (w[1].t - w[0].t);
        }
        Ok(total)
    }
}

fn rk4_step(s: OscState, h: f64) -> Result<OscState> {
    let f = |s: OscState| -> Result<(f64, f64)> { Ok((s.xdot, g_rhs(s)?)) };
    let shift = |s: OscState, k: (f64, f64), a: f64| OscState {
        x: s.x + a * k.0,
        xdot: s.xdot + a * k.1,
    };
    let k1 = f(s)?;
    let k2 = f(shift(s, k1, 0.5 * h))?;
    let k3 = f(shift(s, k2, 0.5 * h))?;
    let k4 = f(shift(s, k3, h))?;
    Ok(OscState {
        x: s.x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        xdot: s.xdot + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    })
}

/// Seed on the exit circle at the time `tau` after leaving the origin at
/// which `|state| = 2 * SWITCH_RADIUS`, so the event cannot fire again.
fn exit_seed(c: f64) -> (f64, OscState) {
    let tau = 2.0 * (SWITCH_RADIUS / c).asin();
    let half = (0.5 * tau).sin();
    (tau, OscState { x: 2.0 * c * half * half, xdot: c * tau.sin() })
}

/// RK4 integration of the oscillator with a switch at the origin.
///
/// Steps are `dt` away from the origin and shrink in proportion to `|state|`
/// near it, which keeps the circle parameter conserved where `g` has
/// gradients of order `1 / x`. A step that would overshoot the origin is
/// halved. Once the state is within [`SWITCH_RADIUS`] of the origin it is
/// moved onto the circle `switch_c` at exit phase `theta0 = pi`.
pub fn integrate_with_switching(
    initial: OscState,
    dt: f64,
    t_end: f64,
    switch_c: f64,
) -> Result<OscTrajectory> {
    if !initial.is_exterior() {
        return Err(Error::rejected(format!("initial state {initial:?} is not exterior")));
    }
    run(vec![OscSample { t: 0.0, state: initial }], Vec::new(), dt, t_end, switch_c)
}

/// Trajectory that leaves the origin at `t = 0` on circle `exit_c`.
pub fn integrate_exit(exit_c: f64, dt: f64, t_end: f64) -> Result<OscTrajectory> {
    let origin = OscSample { t: 0.0, state: OscState::new(0.0, 0.0) };
    run(vec![origin], vec![0.0], dt, t_end, exit_c)
}

fn run(
    mut samples: Vec<OscSample>,
    mut switch_times: Vec<f64>,
    dt: f64,
    t_end: f64,
    switch_c: f64,
) -> Result<OscTrajectory> {
    if !(dt > 0.0 && dt <= 1e-2) {
        return Err(Error::rejected(format!("dt must lie in (0, 1e-2], got {dt}")));
    }
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(Error::rejected(format!("t_end must be finite and >= 0, got {t_end}")));
    }
    CircleTrajectory::new(switch_c, PI)?;

    let mut t = samples[0].t;
    let mut state = samples[0].state;
    if state.norm() < SWITCH_RADIUS {
        let (tau, seed) = exit_seed(switch_c);
        if tau >= t_end {
            let s = exact_trajectory(switch_c, PI, t_end);
            samples.push(OscSample { t: t_end, state: s });
            return Ok(OscTrajectory { samples, switch_times, switch_c });
        }
        t += tau;
        state = seed;
        samples.push(OscSample { t, state });
    }

    while t < t_end {
        if state.norm() < SWITCH_RADIUS {
            switch_times.push(t);
            let (tau, seed) = exit_seed(switch_c);
            if t + tau >= t_end {
                let s = exact_trajectory(switch_c, PI, t_end - t);
                samples.push(OscSample { t: t_end, state: s });
                break;
            }
            t += tau;
            state = seed;
            samples.push(OscSample { t, state });
            continue;
        }
        let speed = state.xdot.hypot(g_rhs(state)?);
        let mut h = dt.min(APPROACH_FRACTION * state.norm() / speed).min(t_end - t);
        let next = loop {
            let overshoot = |n: &OscState| n.x <= 0.0 || (state.xdot < 0.0 && n.xdot >= 0.0);
            match rk4_step(state, h) {
                Ok(n) if !overshoot(&n) => break n,
                _ => {
                    h *= 0.5;
                    if h < MIN_STEP {
                        return Err(Error::IntegrationDomain { t, x: state.x, xdot: state.xdot });
                    }
                }
            }
        };
        t = if t_end - t <= h { t_end } else { t + h };
        state = next;
        samples.push(OscSample { t, state });
    }
    Ok(OscTrajectory { samples, switch_times, switch_c })
}
