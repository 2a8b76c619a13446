//! Fan sub-solutions: piecewise-constant `(rho, v, u)` on the wedges
//! `P- = {x2 < nu- t}`, `P1 = {nu- t < x2 < nu+ t}`, `P+ = {x2 > nu+ t}`.
//!
//! The outer wedges carry the Riemann states. Inside `P1` the density is
//! `rho1`, the velocity `v1` and the trace-free tensor `u1`, and the
//! momentum flux gains the isotropic term `C rho1 / 2`. Because the outer
//! states move along `x2` only, the `x1`-momentum jumps force `v1 = (0, beta)`
//! and `u1 = diag(g11, -g11)`.
//!
//! Every convex-integration solution built on a strict sub-solution has
//! `|v + v1|^2 = C` almost everywhere in `P1`, so its kinetic energy density
//! there is `rho1 C / 2`.

use nalgebra::{Matrix4, Vector4};

use crate::riemann::{solve_middle_state, RiemannData};
use crate::{Error, Result};

/// Symmetric trace-free 2x2 matrix `[[g11, g12], [g12, -g11]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceFreeSym2 {
    pub g11: f64,
    pub g12: f64,
}

impl TraceFreeSym2 {
    pub fn g22(&self) -> f64 {
        -self.g11
    }

    pub fn to_matrix(&self) -> [[f64; 2]; 2] {
        [[self.g11, self.g12], [self.g12, -self.g11]]
    }

    pub fn trace(&self) -> f64 {
        0.0
    }
}

/// `v (x) v - |v|^2 / 2 Id`.
pub fn u_from_v(v: [f64; 2]) -> TraceFreeSym2 {
    TraceFreeSym2 { g11: 0.5 * (v[0] * v[0] - v[1] * v[1]), g12: v[0] * v[1] }
}

/// Smallest eigenvalue of `C/2 Id - (v1 (x) v1 - u1)`; the sub-solution is
/// strict iff this is positive.
pub fn admissibility_gap(v1: [f64; 2], u1: TraceFreeSym2, c: f64) -> f64 {
    let m11 = 0.5 * c - (v1[0] * v1[0] - u1.g11);
    let m22 = 0.5 * c - (v1[1] * v1[1] - u1.g22());
    let m12 = -(v1[0] * v1[1] - u1.g12);
    let mean = 0.5 * (m11 + m22);
    let half_diff = 0.5 * (m11 - m22);
    mean - half_diff.hypot(m12)
}

/// How the kinetic constant `C` is chosen for a given `rho1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosureRule {
    /// Use this `C` as given, admissible or not.
    FixedC(f64),
    /// Smallest `C` whose fan is strict with `admissibility_gap > gap_tol (1 + C)`.
    MinC { gap_tol: f64 },
}

impl Default for ClosureRule {
    fn default() -> Self {
        ClosureRule::MinC { gap_tol: DEFAULT_GAP_TOL }
    }
}

impl ClosureRule {
    pub fn label(&self) -> String {
        match self {
            ClosureRule::FixedC(c) => format!("fixed:{c}"),
            ClosureRule::MinC { .. } => "min-c".to_string(),
        }
    }
}

pub const DEFAULT_GAP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanSubsolution {
    pub rho1: f64,
    pub v1: [f64; 2],
    pub u1: TraceFreeSym2,
    /// Kinetic constant `C`.
    pub c: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub data: RiemannData,
}

impl FanSubsolution {
    pub fn gap(&self) -> f64 {
        admissibility_gap(self.v1, self.u1, self.c)
    }

    pub fn is_strict(&self) -> bool {
        self.gap() > 0.0
    }

    /// `x2`-momentum flux inside `P1`: `rho1 u22 + p(rho1) + C rho1 / 2`.
    pub fn middle_momentum_flux(&self) -> f64 {
        self.rho1 * self.u1.g22() + self.data.law.p(self.rho1) + 0.5 * self.c * self.rho1
    }
}

/// Jump residuals of the fan: mass and `x2`-momentum across `x2 = nu- t`,
/// then across `x2 = nu+ t`.
pub fn subsolution_residuals(s: &FanSubsolution) -> [f64; 4] {
    let law = &s.data.law;
    let (l, r) = (s.data.left, s.data.right);
    let m1 = s.rho1 * s.v1[1];
    let flux1 = s.middle_momentum_flux();
    [
        s.nu_minus * (l.rho - s.rho1) - (l.momentum() - m1),
        s.nu_minus * (l.momentum() - m1) - (l.momentum_flux(law) - flux1),
        s.nu_plus * (s.rho1 - r.rho) - (m1 - r.momentum()),
        s.nu_plus * (m1 - r.momentum()) - (flux1 - r.momentum_flux(law)),
    ]
}

/// `rho1 C / 2`, the kinetic energy density in `P1` of every
/// convex-integration solution on `s`.
pub fn ci_kinetic_energy_density(s: &FanSubsolution) -> f64 {
    0.5 * s.rho1 * s.c
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_TOL: f64 = 1e-10;
const MIN_STEP: f64 = 1.0 / (1u64 << 40) as f64;
const MIN_C_BISECTIONS: usize = 60;
const MAX_C_DOUBLINGS: usize = 64;

pub fn solve_fan(data: &RiemannData, rho1: f64, closure: ClosureRule) -> Result<FanSubsolution> {
    let ts = solve_middle_state(data)?;
    let lower = data.max_density();
    if !(rho1.is_finite() && rho1 >= lower && rho1 <= ts.rho_m * (1.0 + 1e-12)) {
        return Err(Error::rejected(format!(
            "rho1 = {rho1} outside [{lower}, {}]",
            ts.rho_m
        )));
    }
    let seed = FanSubsolution {
        rho1,
        v1: [0.0, ts.v_m],
        u1: TraceFreeSym2::default(),
        c: 0.0,
        nu_minus: ts.nu_minus,
        nu_plus: ts.nu_plus,
        data: *data,
    };
    match closure {
        ClosureRule::FixedC(c) => {
            if !c.is_finite() {
                return Err(Error::rejected(format!("C must be finite, got {c}")));
            }
            newton(&seed, c, ts.v_m)
        }
        ClosureRule::MinC { gap_tol } => min_c(&seed, ts.v_m * ts.v_m, gap_tol, ts.v_m),
    }
}

fn newton(seed: &FanSubsolution, c: f64, v_m: f64) -> Result<FanSubsolution> {
    // Unknowns (beta, g11, nu-, nu+); the seed carries the two-shock flux.
    let mut s = FanSubsolution { c, ..*seed };
    s.u1 = TraceFreeSym2 { g11: 0.5 * c - v_m * v_m, g12: 0.0 };

    let law = &s.data.law;
    let scale = [
        s.data.left.momentum_flux(law),
        s.data.right.momentum_flux(law),
        s.rho1 * v_m * v_m + law.p(s.rho1),
        1.0,
    ]
    .iter()
    .fold(0.0f64, |a, x| a.max(x.abs()));
    // absolute tolerance, unless round-off in large fluxes forbids it
    let tol = NEWTON_TOL.max(1e-15 * scale);

    let norm = |r: &[f64; 4]| r.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut res = subsolution_residuals(&s);
    for _ in 0..NEWTON_MAX_ITER {
        if norm(&res) <= tol {
            return finish(s);
        }
        let step = jacobian(&s)
            .lu()
            .solve(&Vector4::from(res).map(|x| -x))
            .ok_or_else(|| Error::InfeasibleClosure("singular fan Jacobian".into()))?;
        let mut lambda = 1.0;
        loop {
            let trial = apply(&s, &step, lambda);
            let trial_res = subsolution_residuals(&trial);
            if norm(&trial_res) < norm(&res) || norm(&trial_res) <= tol {
                s = trial;
                res = trial_res;
                break;
            }
            lambda *= 0.5;
            if lambda < MIN_STEP {
                return Err(Error::InfeasibleClosure(format!(
                    "Newton stalled at residual {:e}",
                    norm(&res)
                )));
            }
        }
    }
    if norm(&res) <= tol {
        return finish(s);
    }
    Err(Error::InfeasibleClosure(format!(
        "Newton did not converge in {NEWTON_MAX_ITER} iterations (residual {:e})",
        norm(&res)
    )))
}

fn finish(s: FanSubsolution) -> Result<FanSubsolution> {
    if !(s.nu_minus < s.nu_plus) {
        return Err(Error::InfeasibleClosure(format!(
            "fan speeds out of order: nu- = {}, nu+ = {}",
            s.nu_minus, s.nu_plus
        )));
    }
    Ok(s)
}

fn apply(s: &FanSubsolution, step: &Vector4<f64>, lambda: f64) -> FanSubsolution {
    FanSubsolution {
        v1: [0.0, s.v1[1] + lambda * step[0]],
        u1: TraceFreeSym2 { g11: s.u1.g11 + lambda * step[1], g12: 0.0 },
        nu_minus: s.nu_minus + lambda * step[2],
        nu_plus: s.nu_plus + lambda * step[3],
        ..*s
    }
}

fn jacobian(s: &FanSubsolution) -> Matrix4<f64> {
    let (l, r) = (s.data.left, s.data.right);
    let (rho1, beta) = (s.rho1, s.v1[1]);
    let m1 = rho1 * beta;
    #[rustfmt::skip]
    let j = Matrix4::new(
        rho1,                 0.0,   l.rho - rho1,     0.0,
        -s.nu_minus * rho1,   -rho1, l.momentum() - m1, 0.0,
        -rho1,                0.0,   0.0,              rho1 - r.rho,
        s.nu_plus * rho1,     rho1,  0.0,              m1 - r.momentum(),
    );
    j
}

fn min_c(seed: &FanSubsolution, v_m_sq: f64, gap_tol: f64, v_m: f64) -> Result<FanSubsolution> {
    // Newton round-off in g11 grows with C, so the margin does too.
    let feasible = |c: f64| -> Option<FanSubsolution> {
        newton(seed, c, v_m).ok().filter(|s| s.gap() > gap_tol * (1.0 + c))
    };
    let lo_start = v_m_sq;
    let mut width = 1.0;
    let mut best = None;
    for _ in 0..MAX_C_DOUBLINGS {
        if let Some(s) = feasible(lo_start + width) {
            best = Some(s);
            break;
        }
        width *= 2.0;
    }
    let mut best = best.ok_or_else(|| {
        Error::InfeasibleClosure(format!(
            "no strict fan for rho1 = {} with C up to {:e}",
            seed.rho1,
            lo_start + width
        ))
    })?;
    let (mut lo, mut hi) = (lo_start, best.c);
    for _ in 0..MIN_C_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        match feasible(mid) {
            Some(s) => {
                hi = mid;
                best = s;
            }
            None => lo = mid,
        }
    }
    Ok(best)
}
