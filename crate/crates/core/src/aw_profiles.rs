//! Scalar calculus of the Akramov-Wiedemann solutions.
//!
//! Their momentum satisfies `|m|^2 = rho0 chi(t)` on `Omega'`, so total
//! energy, dissipation rate and action reduce to functionals of the profile
//! `chi`. A profile is admissible when
//!
//! ```text
//! chi' <= -C1 chi^(1/2) - C2 chi^(3/2)   and   chi > n lambda(t).
//! ```
//!
//! Such profiles lie below `(chi(0)^(1/2) - C1 t / 2)^2`, which vanishes at
//! `2 chi(0)^(1/2) / C1`. Profiles are sampled on a time grid and treated as
//! piecewise linear between samples.

use crate::{Error, Result};

/// Slack on the discrete slope inequality.
pub const SLOPE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwConstants {
    pub c1: f64,
    pub c2: f64,
    /// Space dimension `n >= 2`.
    pub n_dim: u32,
    /// `meas Omega'`.
    pub meas_omega_prime: f64,
    /// `integral of rho0 eps(rho0)` over `Omega'`.
    pub background_internal: f64,
}

impl AwConstants {
    pub fn new(
        c1: f64,
        c2: f64,
        n_dim: u32,
        meas_omega_prime: f64,
        background_internal: f64,
    ) -> Result<Self> {
        if !(c1.is_finite() && c1 > 0.0) {
            return Err(Error::rejected(format!("C1 must be positive, got {c1}")));
        }
        if !(c2.is_finite() && c2 >= 0.0) {
            return Err(Error::rejected(format!("C2 must be non-negative, got {c2}")));
        }
        if n_dim < 2 {
            return Err(Error::rejected(format!("dimension must be >= 2, got {n_dim}")));
        }
        if !(meas_omega_prime.is_finite() && meas_omega_prime > 0.0) {
            return Err(Error::rejected(format!("meas must be positive, got {meas_omega_prime}")));
        }
        if !background_internal.is_finite() {
            return Err(Error::rejected("background internal energy must be finite"));
        }
        Ok(Self { c1, c2, n_dim, meas_omega_prime, background_internal })
    }

    /// `n = 2`, unit measure and zero background.
    pub fn demo(c1: f64, c2: f64) -> Result<Self> {
        Self::new(c1, c2, 2, 1.0, 0.0)
    }

    /// Lower bound on the admissible slope, `-C1 chi^(1/2) - C2 chi^(3/2)`.
    pub fn slope_bound(&self, chi: f64) -> f64 {
        let s = chi.max(0.0).sqrt();
        -self.c1 * s - self.c2 * s * s * s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiProfile {
    pub constants: AwConstants,
    times: Vec<f64>,
    chi: Vec<f64>,
    lambda: Vec<f64>,
}

impl ChiProfile {
    pub fn new(constants: AwConstants, times: Vec<f64>, chi: Vec<f64>, lambda: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || chi.len() != times.len() || lambda.len() != times.len() {
            return Err(Error::rejected("profile needs >= 2 samples of matching lengths"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || !times.iter().all(|t| t.is_finite()) {
            return Err(Error::rejected("profile times must be finite and strictly increasing"));
        }
        if chi.iter().chain(&lambda).any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::rejected("chi and lambda samples must be finite and >= 0"));
        }
        Ok(Self { constants, times, chi, lambda })
    }

    /// Profile with `lambda = 0`.
    pub fn without_obstruction(constants: AwConstants, times: Vec<f64>, chi: Vec<f64>) -> Result<Self> {
        let lambda = vec![0.0; times.len()];
        Self::new(constants, times, chi, lambda)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn chi0(&self) -> f64 {
        self.chi[0]
    }

    pub fn t_start(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Last sample time with `chi > 0`, if any.
    pub fn last_positive_time(&self) -> Option<f64> {
        self.times.iter().zip(&self.chi).filter(|(_, c)| **c > 0.0).map(|(t, _)| *t).last()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if t >= self.t_start() && t <= self.t_end() {
            Ok(())
        } else {
            Err(Error::rejected(format!(
                "t = {t} outside samples [{}, {}]",
                self.t_start(),
                self.t_end()
            )))
        }
    }

    /// Index `k` of the segment `[t_k, t_k+1)` containing `t`.
    fn segment(&self, t: f64) -> usize {
        let k = self.times.partition_point(|&s| s <= t);
        k.saturating_sub(1).min(self.times.len() - 2)
    }

    /// Linear interpolation of `chi` at `t`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let k = self.segment(t);
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        if t == t1 {
            return Ok(self.chi[k + 1]);
        }
        let w = (t - t0) / (t1 - t0);
        Ok(self.chi[k] + w * (self.chi[k + 1] - self.chi[k]))
    }

    /// Right derivative of the interpolant at `t`.
    pub fn forward_slope(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        if t >= self.t_end() {
            return Err(Error::rejected(format!("no forward difference at the last sample {t}")));
        }
        let k = self.segment(t);
        Ok((self.chi[k + 1] - self.chi[k]) / (self.times[k + 1] - self.times[k]))
    }
}

pub fn uniform_grid(t_end: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| t_end * k as f64 / steps as f64).collect()
}

/// `2 chi0^(1/2) / C1`.
pub fn vanishing_time(chi0: f64, c1: f64) -> f64 {
    2.0 * chi0.sqrt() / c1
}

/// `max(chi0^(1/2) - C1 t / 2, 0)^2` on `times`, with `lambda = 0`.
pub fn dominating_profile(chi0: f64, constants: AwConstants, times: Vec<f64>) -> Result<ChiProfile> {
    if !(chi0.is_finite() && chi0 >= 0.0) {
        return Err(Error::rejected(format!("chi0 must be >= 0, got {chi0}")));
    }
    let root = chi0.sqrt();
    let chi = times.iter().map(|t| (root - 0.5 * constants.c1 * t).max(0.0).powi(2)).collect();
    ChiProfile::without_obstruction(constants, times, chi)
}

/// Explicit Euler samples of `chi' = -a chi^(1/2) - b chi^(3/2)` from `chi0`,
/// clamped at zero once the step would turn negative.
pub fn integrate_profile(chi0: f64, a: f64, b: f64, times: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    let mut chi = chi0;
    out.push(chi);
    for w in times.windows(2) {
        let s = chi.sqrt();
        chi = (chi - (w[1] - w[0]) * (a * s + b * s * s * s)).max(0.0);
        out.push(chi);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ViolationKind {
    /// Discrete slope above `-C1 chi^(1/2) - C2 chi^(3/2)`.
    Slope,
    /// `chi <= n lambda`.
    Obstruction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub first_violation: Option<Violation>,
}

/// Checks both admissibility conditions at the samples in `[from, to]`; a
/// slope is checked when both of its end samples lie in the interval.
pub fn check_admissible(p: &ChiProfile, from: f64, to: f64) -> Result<AdmissibilityReport> {
    if !(from <= to) || from < p.t_start() || to > p.t_end() {
        return Err(Error::rejected(format!(
            "interval [{from}, {to}] not covered by samples [{}, {}]",
            p.t_start(),
            p.t_end()
        )));
    }
    let n = p.constants.n_dim as f64;
    let inside = |t: f64| t >= from && t <= to;
    for k in 0..p.times.len() {
        let t = p.times[k];
        if !inside(t) {
            continue;
        }
        if !(p.chi[k] > n * p.lambda[k]) {
            return Ok(violated(t, ViolationKind::Obstruction));
        }
        if k + 1 < p.times.len() && inside(p.times[k + 1]) {
            let slope = (p.chi[k + 1] - p.chi[k]) / (p.times[k + 1] - t);
            if slope > p.constants.slope_bound(p.chi[k]) + SLOPE_SLACK {
                return Ok(violated(t, ViolationKind::Slope));
            }
        }
    }
    Ok(AdmissibilityReport { admissible: true, first_violation: None })
}

fn violated(t: f64, kind: ViolationKind) -> AdmissibilityReport {
    AdmissibilityReport { admissible: false, first_violation: Some(Violation { t, kind }) }
}

/// `chi(t) meas / 2 + background`.
pub fn total_energy(p: &ChiProfile, t: f64) -> Result<f64> {
    let c = &p.constants;
    Ok(0.5 * p.value_at(t)? * c.meas_omega_prime + c.background_internal)
}

/// `d+/dt` of the total energy, `chi'(t) meas / 2` with a forward difference.
pub fn dissipation_rate(p: &ChiProfile, t: f64) -> Result<f64> {
    Ok(0.5 * p.forward_slope(t)? * p.constants.meas_omega_prime)
}

/// `meas / 2 * integral of chi over [t0, t_bar] - t_bar * background`, by the
/// trapezoid rule on the samples.
pub fn aw_action(p: &ChiProfile, t_bar: f64) -> Result<f64> {
    p.check_time(t_bar)?;
    let mut integral = 0.0;
    for k in 0..p.times.len() - 1 {
        let (t0, t1) = (p.times[k], p.times[k + 1]);
        if t0 >= t_bar {
            break;
        }
        let (upper, chi1) = if t1 <= t_bar { (t1, p.chi[k + 1]) } else { (t_bar, p.value_at(t_bar)?) };
        integral += 0.5 * (p.chi[k] + chi1) * (upper - t0);
    }
    let c = &p.constants;
    Ok(0.5 * integral * c.meas_omega_prime - t_bar * c.background_internal)
}

/// A steeper profile together with the evidence that it beats the original.
#[derive(Debug, Clone, PartialEq)]
pub struct Domination {
    pub profile: ChiProfile,
    pub delta: f64,
    /// `D_new(0) - D_old(0)`, negative.
    pub rate_gain: f64,
    /// Action difference over the common interval, negative.
    pub action_gain: f64,
    /// End of the common interval.
    pub common_t: f64,
}

/// Builds the profile driven by `C1 + delta`, `C2 + delta` from the same
/// `chi(0)`, truncated to the samples where it stays above `n lambda`.
///
/// The result is checked to be admissible for the original constants, to
/// dissipate faster at `t = 0` and to have smaller action on the common
/// interval.
pub fn entropy_rate_dominate(p: &ChiProfile, delta: f64) -> Result<Domination> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::rejected(format!("delta must be positive, got {delta}")));
    }
    if !(p.chi0() > 0.0) {
        return Err(Error::CannotDominate("the zero profile has nothing to improve".into()));
    }
    let c = p.constants;
    let n = c.n_dim as f64;
    let steep = integrate_profile(p.chi0(), c.c1 + delta, c.c2 + delta, &p.times);
    let keep = steep
        .iter()
        .zip(&p.lambda)
        .take_while(|(chi, lam)| **chi > n * **lam)
        .count();
    if keep < 2 {
        return Err(Error::CannotDominate("steeper profile leaves the obstruction at once".into()));
    }
    let profile = ChiProfile::new(
        c,
        p.times[..keep].to_vec(),
        steep[..keep].to_vec(),
        p.lambda[..keep].to_vec(),
    )?;
    let common_t = profile.t_end();

    let report = check_admissible(&profile, profile.t_start(), common_t)?;
    if !report.admissible {
        return Err(Error::CannotDominate(format!(
            "steeper profile is not admissible: {:?}",
            report.first_violation
        )));
    }
    let rate_gain = dissipation_rate(&profile, p.t_start())? - dissipation_rate(p, p.t_start())?;
    if !(rate_gain < 0.0) {
        return Err(Error::CannotDominate(format!("rate not lowered (gain {rate_gain})")));
    }
    let action_gain = aw_action(&profile, common_t)? - aw_action(p, common_t)?;
    if !(action_gain < 0.0) {
        return Err(Error::CannotDominate(format!("action not lowered (gain {action_gain})")));
    }
    Ok(Domination { profile, delta, rate_gain, action_gain, common_t })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AwLaapReport {
    pub actions: Vec<f64>,
    /// Index of the action-minimal candidate (first on ties).
    pub best: usize,
    /// Action of `chi = 0`, the infimum over all admissible profiles. It
    /// means `m = 0`, which solves the problem only when `m0 = 0`.
    pub zero_profile_action: f64,
    pub best_is_zero_profile: bool,
    /// For each candidate with `chi(0) > 0`, a strictly better profile.
    pub refinements: Vec<Option<Domination>>,
}

impl AwLaapReport {
    /// No candidate with `chi(0) > 0` can be action-minimal in the family.
    pub fn every_positive_candidate_dominated(&self) -> bool {
        self.refinements.iter().all(|r| r.is_some())
    }
}

pub fn laap_verdict_aw(profiles: &[ChiProfile], t_bar: f64, delta: f64) -> Result<AwLaapReport> {
    if profiles.is_empty() {
        return Err(Error::rejected("no candidate profiles"));
    }
    let actions = profiles.iter().map(|p| aw_action(p, t_bar)).collect::<Result<Vec<_>>>()?;
    let best = actions
        .iter()
        .enumerate()
        .fold(0, |b, (i, a)| if *a < actions[b] { i } else { b });
    let refinements = profiles
        .iter()
        .filter(|p| p.chi0() > 0.0)
        .map(|p| entropy_rate_dominate(p, delta).ok())
        .collect();
    let winner = &profiles[best];
    Ok(AwLaapReport {
        zero_profile_action: -t_bar * winner.constants.background_internal,
        best_is_zero_profile: winner.chi().iter().all(|c| *c == 0.0),
        actions,
        best,
        refinements,
    })
}
