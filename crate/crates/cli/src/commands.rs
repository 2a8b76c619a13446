use std::fmt;

use laap_core::aw_profiles::{
    aw_action, check_admissible, dissipation_rate, dominating_profile, integrate_profile,
    laap_verdict_aw, total_energy, uniform_grid, vanishing_time, AwConstants, ChiProfile,
};
use laap_core::oscillator::{action_exit_circle, integrate_exit, select_exit_circle};
use laap_core::subsolution::subsolution_residuals;
use laap_core::{
    action_convex_integration, action_two_shock, check_two_shock_conditions,
    dissipation_difference, l_diff, l_diff_derivative_bound, laap_corollary_check,
    laap_theorem_check, laap_verdict, shock_energy_production, solve_fan, solve_middle_state,
    ClosureRule, Error, FanDomain, Preference, PressureLaw, RiemannData,
};
use rayon::prelude::*;

use crate::args::{AwArgs, BoxArgs, Command, CompareArgs, DataArgs, FanArgs, OscillatorArgs, SweepArgs};
use crate::report::{Report, Table, Value};

pub const THREADS_VAR: &str = "LAAP_LAB_THREADS";

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Core(e) => match e {
                Error::Domain { .. } | Error::RejectedInput(_) | Error::UndefinedPoint { .. } => 2,
                Error::NoTwoShock(_) | Error::InfeasibleClosure(_) | Error::CannotDominate(_) => 3,
                Error::IntegrationDomain { .. } | Error::InternalConsistency(_) => 4,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Core(e) => e.fmt(f),
            Failure::Input(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub fn execute(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Riemann(a) => riemann(a),
        Command::Laap(a) => laap(a),
        Command::Subsolution(a) => subsolution(a),
        Command::Compare(a) => compare(a),
        Command::Sweep(a) => sweep(a),
        Command::Oscillator(a) => oscillator(a),
        Command::Aw(a) => aw(a),
        Command::Scenario(_) => Err(Failure::Input("scenario files cannot nest".into())),
    }
}

fn data(a: &DataArgs) -> Result<RiemannData, Failure> {
    let law = PressureLaw::new(a.kappa, a.gamma)?;
    Ok(RiemannData::new(a.rho_minus, a.v_minus, a.rho_plus, a.v_plus, law)?)
}

fn preference(p: Preference) -> &'static str {
    match p {
        Preference::TwoShock => "two-shock",
        Preference::ConvexIntegration => "convex-integration",
        Preference::Tie => "tie",
    }
}

fn riemann(a: &DataArgs) -> Result<Report, Failure> {
    let data = data(a)?;
    let cond = check_two_shock_conditions(&data)?;
    let ts = solve_middle_state(&data)?;
    let law = &data.law;
    let m = ts.middle();
    let mut r = Report::default();
    r.push("rho_m", ts.rho_m)
        .push("v_m", ts.v_m)
        .push("nu_minus", ts.nu_minus)
        .push("nu_plus", ts.nu_plus)
        .push("radicand", cond.radicand)
        .push("velocity_jump", cond.velocity_jump)
        .push("jump_below_threshold", cond.velocity_jump < cond.threshold)
        .push("jump_squared_exceeds_radicand", cond.jump_squared > cond.radicand)
        .push("two_shock", cond.holds)
        .push("energy_production_minus", shock_energy_production(data.left, m, ts.nu_minus, law)?)
        .push("energy_production_plus", shock_energy_production(m, data.right, ts.nu_plus, law)?);
    Ok(r)
}

fn laap(a: &DataArgs) -> Result<Report, Failure> {
    let data = data(a)?;
    let ts = solve_middle_state(&data)?;
    let bound = l_diff_derivative_bound(&ts, &data);
    let theorem = laap_theorem_check(&ts, &data);
    let corollary = laap_corollary_check(&data);
    let verdict = if theorem {
        "least action prefers the two-shock solution over fans with rho1 just below rho_m"
    } else {
        "no conclusion: the derivative bound is not positive"
    };
    let mut r = Report::default();
    r.push("rho_m", ts.rho_m)
        .push("l_diff_derivative_bound", bound)
        .push("theorem", theorem)
        .push("corollary_value", corollary.value)
        .push("corollary", corollary.holds)
        .push("verdict", verdict);
    Ok(r)
}

fn subsolution(a: &FanArgs) -> Result<Report, Failure> {
    let data = data(&a.data)?;
    let s = solve_fan(&data, a.rho1, a.closure)?;
    let residual = subsolution_residuals(&s).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut r = Report::default();
    r.push("closure", a.closure.label())
        .push("rho1", s.rho1)
        .push("C", s.c)
        .push("v1_x1", s.v1[0])
        .push("v1_x2", s.v1[1])
        .push("u1_11", s.u1.g11)
        .push("u1_12", s.u1.g12)
        .push("nu_minus", s.nu_minus)
        .push("nu_plus", s.nu_plus)
        .push("admissibility_gap", s.gap())
        .push("strict", s.is_strict())
        .push("max_residual", residual);
    Ok(r)
}

struct Comparison {
    c: f64,
    vol_p1: f64,
    l_diff: f64,
    action_two_shock: f64,
    action_ci: f64,
    laap: laap_core::Verdict,
    entropy: laap_core::Verdict,
}

fn comparison(data: &RiemannData, rho1: f64, closure: ClosureRule, b: &BoxArgs) -> Result<Comparison, Failure> {
    let ts = solve_middle_state(data)?;
    let s = solve_fan(data, rho1, closure)?;
    let dom = FanDomain::for_two_shock(&ts, b.l3, b.t_final)?;
    Ok(Comparison {
        c: s.c,
        vol_p1: dom.region_volumes().middle,
        l_diff: l_diff(&ts, s.rho1, s.c, &data.law),
        action_two_shock: action_two_shock(&ts, data, &dom),
        action_ci: action_convex_integration(&s, &dom),
        laap: laap_verdict(&ts, &s, data, &dom),
        entropy: dissipation_difference(&ts, &s, data, &dom),
    })
}

fn compare(a: &CompareArgs) -> Result<Report, Failure> {
    let data = data(&a.fan.data)?;
    let c = comparison(&data, a.fan.rho1, a.fan.closure, &a.domain)?;
    let mut r = Report::default();
    r.push("closure", a.fan.closure.label())
        .push("rho1", a.fan.rho1)
        .push("C", c.c)
        .push("T", a.domain.t_final)
        .push("L3", a.domain.l3)
        .push("vol_p1", c.vol_p1)
        .push("l_diff", c.l_diff)
        .push("action_two_shock", c.action_two_shock)
        .push("action_convex_integration", c.action_ci)
        .push("action_margin", c.laap.margin)
        .push("laap_preferred", preference(c.laap.preferred))
        .push("dissipation_difference", c.entropy.margin)
        .push("entropy_rate_preferred", preference(c.entropy.preferred));
    Ok(r)
}

fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Input(format!("{THREADS_VAR} must be a positive integer, got `{v}`"))),
        },
    }
}

fn sweep(a: &SweepArgs) -> Result<Report, Failure> {
    let data = data(&a.data)?;
    let ts = solve_middle_state(&data)?;
    if a.steps == 0 || !(a.rho1_from.is_finite() && a.rho1_to.is_finite()) {
        return Err(Failure::Input("sweep needs --steps >= 1 and finite end points".into()));
    }
    let grid: Vec<f64> = (0..=a.steps)
        .map(|i| a.rho1_from + (a.rho1_to - a.rho1_from) * i as f64 / a.steps as f64)
        .collect();
    let row = |&rho1: &f64| -> Result<Vec<Value>, Failure> {
        let (vals, status) = match comparison(&data, rho1, a.closure, &a.domain) {
            Ok(c) => ([c.c, c.l_diff, c.laap.margin, c.entropy.margin], "ok"),
            Err(Failure::Core(Error::InfeasibleClosure(_))) => ([f64::NAN; 4], "infeasible"),
            Err(Failure::Core(Error::RejectedInput(_))) => ([f64::NAN; 4], "out-of-range"),
            Err(e) => return Err(e),
        };
        let mut r: Vec<Value> = std::iter::once(rho1).chain(vals).map(Value::Num).collect();
        r.push(status.into());
        Ok(r)
    };
    // collect keeps grid order whatever the scheduling
    let rows = match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Failure::Input(format!("cannot start {n} threads: {e}")))?
            .install(|| grid.par_iter().map(row).collect::<Result<Vec<_>, _>>())?,
        None => grid.par_iter().map(row).collect::<Result<Vec<_>, _>>()?,
    };
    let mut r = Report::default();
    r.push("closure", a.closure.label())
        .push("rho_m", ts.rho_m)
        .push("v_m_squared", ts.v_m * ts.v_m)
        .push("T", a.domain.t_final)
        .push("L3", a.domain.l3)
        .push("points", grid.len());
    r.table = Some(Table {
        columns: vec!["rho1", "C", "l_diff", "action_margin", "dissipation_difference", "status"],
        rows,
    });
    Ok(r)
}

fn oscillator(a: &OscillatorArgs) -> Result<Report, Failure> {
    let closed = action_exit_circle(a.c, a.t1)?;
    let mut r = Report::default();
    r.push("c", a.c).push("t1", a.t1).push("action_closed_form", closed);
    if a.numeric {
        let numeric = integrate_exit(a.c, a.dt, a.t1)?.action()?;
        r.push("dt", a.dt).push("action_numeric", numeric).push("numeric_error", numeric - closed);
    }
    let selected = select_exit_circle(a.t1, &a.candidates)?;
    r.push("selected_c", selected);
    let rows = a
        .candidates
        .iter()
        .map(|&c| Ok(vec![Value::Num(c), Value::Num(action_exit_circle(c, a.t1)?)]))
        .collect::<Result<Vec<_>, Failure>>()?;
    r.table = Some(Table { columns: vec!["candidate_c", "action"], rows });
    Ok(r)
}

/// Samples per unit of the vanishing time.
const AW_STEPS: f64 = 1e4;
const AW_TABLE_ROWS: usize = 20;

fn aw(a: &AwArgs) -> Result<Report, Failure> {
    let constants = AwConstants::new(a.c1, a.c2, 2, a.meas, a.background)?;
    if !(a.chi0.is_finite() && a.chi0 > 0.0) {
        return Err(Failure::Input(format!("--chi0 must be positive, got {}", a.chi0)));
    }
    if !(a.delta.is_finite() && a.delta > 0.0) {
        return Err(Failure::Input(format!("--delta must be positive, got {}", a.delta)));
    }
    let t_star = vanishing_time(a.chi0, a.c1);
    let t_bar = a.t_bar.unwrap_or(t_star);
    if !(t_bar.is_finite() && t_bar > 0.0) {
        return Err(Failure::Input(format!("--t-bar must be positive, got {t_bar}")));
    }
    let t_end = t_star.max(t_bar);
    let steps = (AW_STEPS * t_end / t_star).ceil() as usize;
    let times = uniform_grid(t_end, steps);

    let profile = ChiProfile::without_obstruction(
        constants,
        times.clone(),
        integrate_profile(a.chi0, a.c1, a.c2, &times),
    )?;
    let dominating = dominating_profile(a.chi0, constants, times.clone())?;
    let last = profile.last_positive_time().unwrap_or(0.0);
    let admissible = check_admissible(&profile, 0.0, last)?.admissible;
    let verdict = laap_verdict_aw(std::slice::from_ref(&profile), t_bar, a.delta)?;
    let refined = verdict.refinements.first().cloned().flatten();

    let mut r = Report::default();
    r.push("chi0", a.chi0)
        .push("c1", a.c1)
        .push("c2", a.c2)
        .push("meas", a.meas)
        .push("background", a.background)
        .push("delta", a.delta)
        .push("vanishing_time", t_star)
        .push("t_bar", t_bar)
        .push("profile_admissible", admissible)
        .push("profile_last_positive_time", last)
        .push("action_profile", verdict.actions[0])
        .push("action_dominating", aw_action(&dominating, t_bar)?)
        .push("zero_profile_action", verdict.zero_profile_action)
        .push("best_is_zero_profile", verdict.best_is_zero_profile)
        .push("dominated", verdict.every_positive_candidate_dominated());
    let (rate_gain, action_gain, common_t) =
        refined.as_ref().map_or((f64::NAN, f64::NAN, f64::NAN), |d| (d.rate_gain, d.action_gain, d.common_t));
    r.push("refined_rate_gain", rate_gain)
        .push("refined_action_gain", action_gain)
        .push("refined_common_t", common_t);

    let stride = (steps / AW_TABLE_ROWS).max(1);
    let mut rows = Vec::new();
    for k in (0..times.len()).step_by(stride) {
        let t = times[k];
        let refined_chi = refined
            .as_ref()
            .and_then(|d| d.profile.chi().get(k).copied())
            .unwrap_or(f64::NAN);
        let rate = if k + 1 < times.len() { dissipation_rate(&profile, t)? } else { f64::NAN };
        rows.push(
            [
                t,
                profile.chi()[k],
                dominating.chi()[k],
                refined_chi,
                total_energy(&profile, t)?,
                rate,
                aw_action(&profile, t)?,
            ]
            .into_iter()
            .map(Value::Num)
            .collect(),
        );
    }
    r.table = Some(Table {
        columns: vec!["t", "chi", "chi_dominating", "chi_refined", "energy", "dissipation_rate", "action"],
        rows,
    });
    Ok(r)
}
