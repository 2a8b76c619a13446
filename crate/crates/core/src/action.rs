//! Least-action and entropy-rate comparison of the two-shock solution with
//! the convex-integration family.
//!
//! Actions are integrated over the box `-L3 < x1 < L3`, `nu- T < x2 < nu+ T`,
//! `0 < t < T`. Both candidates are evaluated on the same wedge partition, so
//! the outer wedges contribute identically and the actions differ only
//! through the Lagrangian in `P1`.

use crate::eos::PressureLaw;
use crate::riemann::{RiemannData, State, TwoShockSolution};
use crate::subsolution::{ci_kinetic_energy_density, FanSubsolution};
use crate::{Error, Result};

/// Relative tolerance under which two candidates are reported as tied.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wedge {
    pub nu_minus: f64,
    pub nu_plus: f64,
}

impl Wedge {
    pub fn new(nu_minus: f64, nu_plus: f64) -> Result<Self> {
        if !(nu_minus.is_finite() && nu_plus.is_finite() && nu_minus < nu_plus) {
            return Err(Error::rejected(format!(
                "wedge needs nu- < nu+, got ({nu_minus}, {nu_plus})"
            )));
        }
        Ok(Self { nu_minus, nu_plus })
    }
}

impl From<&TwoShockSolution> for Wedge {
    fn from(ts: &TwoShockSolution) -> Self {
        Self { nu_minus: ts.nu_minus, nu_plus: ts.nu_plus }
    }
}

impl From<&FanSubsolution> for Wedge {
    fn from(s: &FanSubsolution) -> Self {
        Self { nu_minus: s.nu_minus, nu_plus: s.nu_plus }
    }
}

/// Truncated space-time region of integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanDomain {
    l3: f64,
    t_final: f64,
    wedge: Wedge,
}

/// Space-time volumes of `P-`, `P1`, `P+` clipped to the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVolumes {
    pub minus: f64,
    pub middle: f64,
    pub plus: f64,
}

impl RegionVolumes {
    pub fn total(&self) -> f64 {
        self.minus + self.middle + self.plus
    }
}

impl FanDomain {
    pub fn new(l3: f64, t_final: f64, wedge: Wedge) -> Result<Self> {
        if !(l3.is_finite() && l3 > 0.0) {
            return Err(Error::rejected(format!("L3 must be positive, got {l3}")));
        }
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::rejected(format!("T must be positive, got {t_final}")));
        }
        let wedge = Wedge::new(wedge.nu_minus, wedge.nu_plus)?;
        Ok(Self { l3, t_final, wedge })
    }

    /// Box and partition attached to the two-shock solution.
    pub fn for_two_shock(ts: &TwoShockSolution, l3: f64, t_final: f64) -> Result<Self> {
        Self::new(l3, t_final, ts.into())
    }

    pub fn l3(&self) -> f64 {
        self.l3
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn wedge(&self) -> Wedge {
        self.wedge
    }

    /// `x2`-extent `[nu- T, nu+ T]` of the box.
    pub fn x2_range(&self) -> (f64, f64) {
        (self.wedge.nu_minus * self.t_final, self.wedge.nu_plus * self.t_final)
    }

    pub fn box_volume(&self) -> f64 {
        let (a, b) = self.x2_range();
        2.0 * self.l3 * (b - a) * self.t_final
    }

    /// Exact clipped volumes. Each slice length is piecewise linear in `t`
    /// with kinks where a wedge edge meets a box edge, so the trapezoid rule
    /// between kinks is exact.
    pub fn region_volumes(&self) -> RegionVolumes {
        let (a, b) = self.x2_range();
        let Wedge { nu_minus, nu_plus } = self.wedge;
        let t_end = self.t_final;
        let slices = |t: f64| {
            let (lm, lp) = (nu_minus * t, nu_plus * t);
            [
                (lm.min(b) - a).max(0.0),
                (lp.min(b) - lm.max(a)).max(0.0),
                (b - lp.max(a)).max(0.0),
            ]
        };
        let mut knots = vec![0.0, t_end];
        for nu in [nu_minus, nu_plus] {
            if nu != 0.0 {
                for edge in [a, b] {
                    let t = edge / nu;
                    if t > 0.0 && t < t_end {
                        knots.push(t);
                    }
                }
            }
        }
        knots.sort_by(f64::total_cmp);
        let mut acc = [0.0; 3];
        for w in knots.windows(2) {
            let (s0, s1) = (slices(w[0]), slices(w[1]));
            let dt = w[1] - w[0];
            for k in 0..3 {
                acc[k] += 0.5 * (s0[k] + s1[k]) * dt;
            }
        }
        let width = 2.0 * self.l3;
        RegionVolumes { minus: width * acc[0], middle: width * acc[1], plus: width * acc[2] }
    }
}

/// `rho |v|^2 / 2 - rho eps(rho)`.
pub fn lagrangian_density(state: State, law: &PressureLaw) -> f64 {
    0.5 * state.rho * state.v * state.v - state.rho * law.eps(state.rho)
}

fn outer_action(data: &RiemannData, vols: &RegionVolumes) -> f64 {
    vols.minus * lagrangian_density(data.left, &data.law)
        + vols.plus * lagrangian_density(data.right, &data.law)
}

pub fn action_two_shock(ts: &TwoShockSolution, data: &RiemannData, dom: &FanDomain) -> f64 {
    let vols = dom.region_volumes();
    outer_action(data, &vols) + vols.middle * lagrangian_density(ts.middle(), &data.law)
}

/// Action of every convex-integration solution built on `s`: the kinetic
/// density in `P1` is `rho1 C / 2`.
pub fn action_convex_integration(s: &FanSubsolution, dom: &FanDomain) -> f64 {
    let vols = dom.region_volumes();
    let law = &s.data.law;
    let middle = ci_kinetic_energy_density(s) - s.rho1 * law.eps(s.rho1);
    outer_action(&s.data, &vols) + vols.middle * middle
}

/// Two-shock Lagrangian minus convex-integration Lagrangian in `P1`.
pub fn l_diff(ts: &TwoShockSolution, rho1: f64, c: f64, law: &PressureLaw) -> f64 {
    0.5 * ts.rho_m * ts.v_m * ts.v_m - ts.rho_m * law.eps(ts.rho_m) - 0.5 * rho1 * c
        + rho1 * law.eps(rho1)
}

/// Lower bound for the left limit of `d l_diff / d rho1` at `rho_m`:
/// `-max(v_+^2, v_-^2) / 2 + eps(rho_m) + p(rho_m) / rho_m`.
pub fn l_diff_derivative_bound(ts: &TwoShockSolution, data: &RiemannData) -> f64 {
    let vmax_sq = (data.left.v * data.left.v).max(data.right.v * data.right.v);
    -0.5 * vmax_sq + data.law.enthalpy(ts.rho_m)
}

/// True when least action prefers the two-shock solution over fans with
/// `rho1` in a left neighbourhood of `rho_m`.
pub fn laap_theorem_check(ts: &TwoShockSolution, data: &RiemannData) -> bool {
    l_diff_derivative_bound(ts, data) > 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryCheck {
    pub holds: bool,
    pub value: f64,
}

/// Data-only sufficient condition; implies [`laap_theorem_check`].
pub fn laap_corollary_check(data: &RiemannData) -> CorollaryCheck {
    let (l, r) = (data.left, data.right);
    let vmax_sq = (l.v * l.v).max(r.v * r.v);
    let h = data.law.enthalpy(l.rho).max(data.law.enthalpy(r.rho));
    let value = -0.5 * vmax_sq + h;
    CorollaryCheck { holds: value > 0.0, value }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    TwoShock,
    ConvexIntegration,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Laap,
    EntropyRate,
}

/// A comparison outcome. A positive margin always favours the two-shock
/// solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub preferred: Preference,
    pub margin: f64,
    pub criterion: Criterion,
}

impl Verdict {
    fn from_margin(margin: f64, scale: f64, criterion: Criterion) -> Self {
        let preferred = if margin.abs() <= TIE_TOL * scale {
            Preference::Tie
        } else if margin > 0.0 {
            Preference::TwoShock
        } else {
            Preference::ConvexIntegration
        };
        Self { preferred, margin, criterion }
    }
}

/// Difference of energy dissipation rates, convex integration minus two
/// shock, over the box. Both candidates share their outer states, so only
/// `P1` contributes: `2 L3 (nu+ - nu-) (E_ci - E_2s)`. A negative value
/// means the convex-integration family dissipates faster.
pub fn dissipation_difference(
    ts: &TwoShockSolution,
    s: &FanSubsolution,
    data: &RiemannData,
    dom: &FanDomain,
) -> Verdict {
    let law = &data.law;
    let e_two = ts.middle().energy(law);
    let e_ci = ci_kinetic_energy_density(s) + s.rho1 * law.eps(s.rho1);
    let Wedge { nu_minus, nu_plus } = dom.wedge();
    let width = 2.0 * dom.l3() * (nu_plus - nu_minus);
    let delta = width * (e_ci - e_two);
    Verdict::from_margin(delta, width * e_two.abs().max(e_ci.abs()), Criterion::EntropyRate)
}

/// Least-action verdict; the margin is `A_ci - A_2s = -vol(P1) l_diff`.
pub fn laap_verdict(
    ts: &TwoShockSolution,
    s: &FanSubsolution,
    data: &RiemannData,
    dom: &FanDomain,
) -> Verdict {
    let a_two = action_two_shock(ts, data, dom);
    let a_ci = action_convex_integration(s, dom);
    Verdict::from_margin(a_ci - a_two, a_two.abs(), Criterion::Laap)
}
