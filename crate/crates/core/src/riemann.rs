//! Two-shock solution of the planar barotropic Riemann problem.
//!
//! The initial states are separated by the line `x2 = 0` and carry velocity
//! only along `x2`, so each state is a pair `(rho, v)` with `v` the
//! `x2`-component. The middle density solves
//!
//! ```text
//! F(rho) = h(rho; rho_-) + h(rho; rho_+) - (v_- - v_+) = 0,
//! h(rho; r) = sqrt((rho - r)(p(rho) - p(r)) / (rho r)),
//! ```
//!
//! which is increasing on `(max(rho_-, rho_+), inf)` for a monotone pressure.

use crate::eos::{check_density, PressureLaw};
use crate::{Error, Result, ZERO_TOL};

/// A constant planar state: density and `x2`-velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub rho: f64,
    pub v: f64,
}

impl State {
    pub fn new(rho: f64, v: f64) -> Result<Self> {
        check_density(rho)?;
        if !v.is_finite() {
            return Err(Error::rejected(format!("velocity must be finite, got {v}")));
        }
        Ok(Self { rho, v })
    }

    pub fn momentum(&self) -> f64 {
        self.rho * self.v
    }

    /// `x2`-momentum flux `rho v^2 + p(rho)`.
    pub fn momentum_flux(&self, law: &PressureLaw) -> f64 {
        self.rho * self.v * self.v + law.p(self.rho)
    }

    /// Total energy density `rho v^2 / 2 + rho eps(rho)`.
    pub fn energy(&self, law: &PressureLaw) -> f64 {
        0.5 * self.rho * self.v * self.v + self.rho * law.eps(self.rho)
    }

    /// Energy flux `(E + p) v`.
    pub fn energy_flux(&self, law: &PressureLaw) -> f64 {
        (self.energy(law) + law.p(self.rho)) * self.v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannData {
    /// State in `x2 < 0`.
    pub left: State,
    /// State in `x2 > 0`.
    pub right: State,
    pub law: PressureLaw,
}

impl RiemannData {
    pub fn new(
        rho_minus: f64,
        vb_minus: f64,
        rho_plus: f64,
        vb_plus: f64,
        law: PressureLaw,
    ) -> Result<Self> {
        Ok(Self {
            left: State::new(rho_minus, vb_minus)?,
            right: State::new(rho_plus, vb_plus)?,
            law,
        })
    }

    pub fn max_density(&self) -> f64 {
        self.left.rho.max(self.right.rho)
    }

    /// The same data with both velocities shifted by `s`.
    pub fn shifted(&self, s: f64) -> Self {
        Self {
            left: State { v: self.left.v + s, ..self.left },
            right: State { v: self.right.v + s, ..self.right },
            law: self.law,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoShockSolution {
    pub rho_m: f64,
    pub v_m: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
}

impl TwoShockSolution {
    pub fn middle(&self) -> State {
        State { rho: self.rho_m, v: self.v_m }
    }
}

/// Outcome of the data-only test for a two-shock solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoShockCondition {
    /// `v_+ - v_- < -sqrt(radicand)` and `(v_+ - v_-)^2 > radicand` both hold.
    pub holds: bool,
    /// `(rho_+ - rho_-)(p(rho_+) - p(rho_-)) / (rho_+ rho_-)`.
    pub radicand: f64,
    /// `v_+ - v_-`.
    pub velocity_jump: f64,
    /// `-sqrt(radicand)`.
    pub threshold: f64,
    pub jump_squared: f64,
}

/// Velocity drop across a shock joining density `reference` to `rho`.
fn hugoniot_gap(law: &PressureLaw, reference: f64, rho: f64) -> f64 {
    let r = (rho - reference) * (law.p(rho) - law.p(reference)) / (rho * reference);
    r.max(0.0).sqrt()
}

pub fn check_two_shock_conditions(data: &RiemannData) -> Result<TwoShockCondition> {
    let law = &data.law;
    let (l, r) = (data.left, data.right);
    let radicand = (r.rho - l.rho) * (law.p(r.rho) - law.p(l.rho)) / (r.rho * l.rho);
    if radicand < 0.0 {
        let scale = law.p(r.rho).max(law.p(l.rho)) / r.rho.min(l.rho);
        if radicand < -ZERO_TOL * scale.max(1.0) {
            return Err(Error::InternalConsistency(format!(
                "negative two-shock radicand {radicand} for a monotone pressure law"
            )));
        }
    }
    let radicand = radicand.max(0.0);
    let velocity_jump = r.v - l.v;
    let threshold = -radicand.sqrt();
    let jump_squared = velocity_jump * velocity_jump;
    let holds = velocity_jump < threshold && velocity_jump < 0.0 && jump_squared > radicand;
    Ok(TwoShockCondition { holds, radicand, velocity_jump, threshold, jump_squared })
}

/// Speed of a jump from the mass balance, `None` for a zero-strength jump.
pub fn mass_jump_speed(left: State, right: State) -> Option<f64> {
    let drho = left.rho - right.rho;
    if drho.abs() <= ZERO_TOL * left.rho.max(right.rho) {
        None
    } else {
        Some((left.momentum() - right.momentum()) / drho)
    }
}

/// Momentum balance `nu [rho v] - [rho v^2 + p]` across a jump, divided by
/// the largest flux term.
pub fn momentum_residual(left: State, right: State, nu: f64, law: &PressureLaw) -> f64 {
    let (fl, fr) = (left.momentum_flux(law), right.momentum_flux(law));
    let (ql, qr) = (nu * left.momentum(), nu * right.momentum());
    let scale = fl.abs().max(fr.abs()).max(ql.abs()).max(qr.abs()).max(f64::MIN_POSITIVE);
    ((ql - qr) - (fl - fr)) / scale
}

/// Mass balance across a jump, divided by the largest flux term.
pub fn mass_residual(left: State, right: State, nu: f64) -> f64 {
    let (ml, mr) = (left.momentum(), right.momentum());
    let (al, ar) = (nu * left.rho, nu * right.rho);
    let scale = ml.abs().max(mr.abs()).max(al.abs()).max(ar.abs()).max(f64::MIN_POSITIVE);
    ((al - ar) - (ml - mr)) / scale
}

/// Relative Rankine-Hugoniot residuals: left mass, left momentum, right mass,
/// right momentum.
pub fn rankine_hugoniot_residuals(data: &RiemannData, ts: &TwoShockSolution) -> [f64; 4] {
    let m = ts.middle();
    [
        mass_residual(data.left, m, ts.nu_minus),
        momentum_residual(data.left, m, ts.nu_minus, &data.law),
        mass_residual(m, data.right, ts.nu_plus),
        momentum_residual(m, data.right, ts.nu_plus, &data.law),
    ]
}

const BRACKET_CEILING: f64 = 1e6;
const ROOT_TOL: f64 = 1e-10;
const RH_TOL: f64 = 1e-8;

pub fn solve_middle_state(data: &RiemannData) -> Result<TwoShockSolution> {
    let cond = check_two_shock_conditions(data)?;
    if !cond.holds {
        return Err(Error::NoTwoShock(format!(
            "data fail the two-shock condition: v+ - v- = {} is not below {}",
            cond.velocity_jump, cond.threshold
        )));
    }
    let law = &data.law;
    let (l, r) = (data.left, data.right);
    let target = l.v - r.v;
    let f = |rho: f64| hugoniot_gap(law, l.rho, rho) + hugoniot_gap(law, r.rho, rho) - target;

    let rho_max = data.max_density();
    let mut lo = rho_max * (1.0 + 1e-12);
    let f_lo = f(lo);
    if f_lo >= 0.0 {
        return Err(Error::NoTwoShock(format!(
            "F does not start negative above max density (F = {f_lo})"
        )));
    }
    let ceiling = BRACKET_CEILING * rho_max;
    let mut hi = 2.0 * rho_max;
    while f(hi) <= 0.0 {
        if hi >= ceiling {
            return Err(Error::NoTwoShock(format!("no sign change of F below {ceiling}")));
        }
        hi = (2.0 * hi).min(ceiling);
    }

    let mut rho_m = 0.5 * (lo + hi);
    for _ in 0..200 {
        rho_m = 0.5 * (lo + hi);
        let fm = f(rho_m);
        if fm.abs() <= ROOT_TOL || rho_m <= lo || rho_m >= hi {
            break;
        }
        if fm < 0.0 {
            lo = rho_m;
        } else {
            hi = rho_m;
        }
    }

    let v_m = l.v - hugoniot_gap(law, l.rho, rho_m);
    let v_m_right = r.v + hugoniot_gap(law, r.rho, rho_m);
    if (v_m - v_m_right).abs() > RH_TOL * v_m.abs().max(1.0) {
        return Err(Error::InternalConsistency(format!(
            "middle velocity disagrees between shocks: {v_m} vs {v_m_right}"
        )));
    }
    let middle = State { rho: rho_m, v: v_m };
    let nu_minus = mass_jump_speed(l, middle)
        .ok_or_else(|| Error::NoTwoShock("left shock has zero strength".into()))?;
    let nu_plus = mass_jump_speed(middle, r)
        .ok_or_else(|| Error::NoTwoShock("right shock has zero strength".into()))?;
    let ts = TwoShockSolution { rho_m, v_m, nu_minus, nu_plus };

    let worst = rankine_hugoniot_residuals(data, &ts).iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if worst > RH_TOL {
        return Err(Error::InternalConsistency(format!("Rankine-Hugoniot residual {worst}")));
    }
    if !(nu_minus < nu_plus && r.v < v_m && v_m < l.v && rho_m > rho_max) {
        return Err(Error::InternalConsistency(format!("ordering violated by {ts:?}")));
    }
    Ok(ts)
}

/// Energy production `-nu [E] + [(E + p) v]` across a jump from `left` to
/// `right`; non-positive values dissipate energy.
pub fn shock_energy_production(
    left: State,
    right: State,
    nu: f64,
    law: &PressureLaw,
) -> Result<f64> {
    check_density(left.rho)?;
    check_density(right.rho)?;
    let de = right.energy(law) - left.energy(law);
    let dflux = right.energy_flux(law) - left.energy_flux(law);
    Ok(-nu * de + dflux)
}
