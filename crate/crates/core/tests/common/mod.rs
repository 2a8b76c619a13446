//! Property checks shared by the proptest suite and the acceptance gate.
//!
//! Each property drives its own strategy through a caller-supplied
//! `TestRunner`, so the same check runs with random seeds under
//! `cargo test` and with a fixed seed in the acceptance run.

#![allow(dead_code)]

use std::f64::consts::PI;

use laap_core::aw_profiles::{
    check_admissible, dominating_profile, entropy_rate_dominate, total_energy, uniform_grid,
    AwConstants, ChiProfile,
};
use laap_core::oscillator::{
    action_exit_circle, exact_trajectory, g_rhs, integrate_exit, integrate_with_switching,
    lagrangian, select_exit_circle, SWITCH_RADIUS,
};
use laap_core::riemann::{mass_residual, momentum_residual};
use laap_core::subsolution::{subsolution_residuals, u_from_v};
use laap_core::{
    action_convex_integration, action_two_shock, check_two_shock_conditions,
    dissipation_difference, l_diff, laap_corollary_check, laap_theorem_check, laap_verdict,
    shock_energy_production, solve_fan, solve_middle_state, ClosureRule, Error, FanDomain,
    PressureLaw, RiemannData, Wedge,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub struct Property {
    pub name: &'static str,
    pub cases: u32,
    check: fn(&mut TestRunner) -> Result<(), String>,
}

impl Property {
    pub fn run(&self, mut runner: TestRunner) -> Result<(), String> {
        (self.check)(&mut runner)
    }

    pub fn config(&self) -> Config {
        Config { cases: self.cases, failure_persistence: None, ..Config::default() }
    }
}

pub fn property(name: &str) -> &'static Property {
    PROPERTIES.iter().find(|p| p.name == name).unwrap_or_else(|| panic!("no property {name}"))
}

pub const PROPERTIES: &[Property] = &[
    Property { name: "eos_energy_derivative", cases: 64, check: eos_energy_derivative },
    Property { name: "eos_enthalpy_monotone", cases: 256, check: eos_enthalpy_monotone },
    Property { name: "eos_enthalpy_derivative", cases: 64, check: eos_enthalpy_derivative },
    Property { name: "riemann_rankine_hugoniot", cases: 256, check: riemann_rankine_hugoniot },
    Property { name: "riemann_ordering", cases: 256, check: riemann_ordering },
    Property { name: "riemann_galilean_shift", cases: 256, check: riemann_galilean_shift },
    Property { name: "riemann_shocks_dissipate", cases: 1000, check: riemann_shocks_dissipate },
    Property { name: "subsolution_trace_free", cases: 256, check: subsolution_trace_free },
    Property { name: "subsolution_solved_fan", cases: 64, check: subsolution_solved_fan },
    Property { name: "subsolution_degenerate_limit", cases: 64, check: subsolution_degenerate_limit },
    Property { name: "subsolution_c_limit", cases: 32, check: subsolution_c_limit },
    Property { name: "action_identity", cases: 100, check: action_identity },
    Property { name: "action_volumes_sum", cases: 256, check: action_volumes_sum },
    Property { name: "action_width_scaling", cases: 64, check: action_width_scaling },
    Property { name: "action_corollary_implies_theorem", cases: 256, check: action_corollary_implies_theorem },
    Property { name: "action_l_diff_slope", cases: 32, check: action_l_diff_slope },
    Property { name: "oscillator_conservation", cases: 16, check: oscillator_conservation },
    Property { name: "oscillator_closed_form", cases: 4, check: oscillator_closed_form },
    Property { name: "oscillator_monotone_selection", cases: 256, check: oscillator_monotone_selection },
    Property { name: "oscillator_lagrangian_identity", cases: 256, check: oscillator_lagrangian_identity },
    Property { name: "oscillator_exit_stays_exterior", cases: 16, check: oscillator_exit_stays_exterior },
    Property { name: "aw_upper_bound", cases: 64, check: aw_upper_bound },
    Property { name: "aw_vanishing_time", cases: 64, check: aw_vanishing_time },
    Property { name: "aw_dominate_postconditions", cases: 64, check: aw_dominate_postconditions },
    Property { name: "aw_energy_identity", cases: 64, check: aw_energy_identity },
];

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// ---- strategies ----

pub fn law() -> impl Strategy<Value = PressureLaw> {
    (0.5f64..=2.0, 1.001f64..=3.0).prop_map(|(k, g)| PressureLaw::new(k, g).unwrap())
}

/// Data satisfying the two-shock condition: the velocity drop exceeds the
/// Hugoniot threshold by `extra`.
pub fn valid_data() -> impl Strategy<Value = RiemannData> {
    (law(), 0.5f64..5.0, 0.5f64..5.0, 0.05f64..10.0, -5.0f64..5.0).prop_map(
        |(law, rm, rp, extra, shift)| {
            let probe = RiemannData::new(rm, 0.0, rp, 0.0, law).unwrap();
            let cond = check_two_shock_conditions(&probe).unwrap();
            let jump = cond.radicand.sqrt() + extra;
            RiemannData::new(rm, shift + 0.5 * jump, rp, shift - 0.5 * jump, law).unwrap()
        },
    )
}

// ---- eos ----

fn log_grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

fn eos_energy_derivative(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&law(), |law| {
            for rho in log_grid(100, 1e-2, 1e2) {
                let h = 1e-5 * rho;
                let fd = (law.internal_energy(rho + h).unwrap()
                    - law.internal_energy(rho - h).unwrap())
                    / (2.0 * h);
                let exact = law.pressure(rho).unwrap() / (rho * rho);
                ensure((fd - exact).abs() <= 1e-6 * exact.max(1.0), || {
                    format!("{law:?} rho={rho}: fd {fd} vs {exact}")
                })?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn eos_enthalpy_monotone(runner: &mut TestRunner) -> Result<(), String> {
    let grid = proptest::collection::vec(1e-3f64..1e3, 2..50);
    runner
        .run(&(law(), grid), |(law, mut grid)| {
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            let h: Vec<f64> = grid.iter().map(|r| law.enthalpy_like(*r).unwrap()).collect();
            ensure(h.windows(2).all(|w| w[1] > w[0]), || format!("{law:?} not increasing on {grid:?}"))
        })
        .map_err(|e| e.to_string())
}

fn eos_enthalpy_derivative(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&law(), |law| {
            for rho in log_grid(100, 1e-2, 1e2) {
                let h = 1e-5 * rho;
                let fd = (law.enthalpy_like(rho + h).unwrap() - law.enthalpy_like(rho - h).unwrap())
                    / (2.0 * h);
                let exact = law.dpressure(rho).unwrap() / rho;
                ensure((fd - exact).abs() <= 1e-6 * exact.abs(), || {
                    format!("{law:?} rho={rho}: fd {fd} vs {exact}")
                })?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

// ---- riemann ----

fn riemann_rankine_hugoniot(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&valid_data(), |data| {
            let ts = solve_middle_state(&data).map_err(|e| fail(e.to_string()))?;
            let law = &data.law;
            let m = ts.middle();
            for (l, r, nu) in [(data.left, m, ts.nu_minus), (m, data.right, ts.nu_plus)] {
                let scale = l.momentum_flux(law).abs().max(r.momentum_flux(law).abs());
                let mass_scale = (nu * l.rho).abs().max(l.momentum().abs()).max(1.0);
                let mass = mass_residual(l, r, nu);
                let mom = momentum_residual(l, r, nu, law);
                ensure(mass.abs() <= 1e-12 * mass_scale, || format!("mass residual {mass} for {data:?}"))?;
                ensure(mom.abs() <= 1e-8 * scale, || format!("momentum residual {mom} for {data:?}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn riemann_ordering(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&valid_data(), |data| {
            let ts = solve_middle_state(&data).map_err(|e| fail(e.to_string()))?;
            ensure(
                data.right.v < ts.v_m && ts.v_m < data.left.v && ts.rho_m > data.max_density(),
                || format!("{ts:?} out of order for {data:?}"),
            )
        })
        .map_err(|e| e.to_string())
}

fn riemann_galilean_shift(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(valid_data(), -10.0f64..10.0), |(data, s)| {
            let a = solve_middle_state(&data).map_err(|e| fail(e.to_string()))?;
            let b = solve_middle_state(&data.shifted(s)).map_err(|e| fail(e.to_string()))?;
            let ok = close(a.rho_m, b.rho_m, 1e-8)
                && close(a.v_m + s, b.v_m, 1e-8)
                && close(a.nu_minus + s, b.nu_minus, 1e-8)
                && close(a.nu_plus + s, b.nu_plus, 1e-8);
            ensure(ok, || format!("shift {s}: {a:?} vs {b:?}"))
        })
        .map_err(|e| e.to_string())
}

fn riemann_shocks_dissipate(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&valid_data(), |data| {
            let ts = solve_middle_state(&data).map_err(|e| fail(e.to_string()))?;
            let law = &data.law;
            let m = ts.middle();
            for (l, r, nu) in [(data.left, m, ts.nu_minus), (m, data.right, ts.nu_plus)] {
                let d = shock_energy_production(l, r, nu, law).unwrap();
                let scale = l.energy_flux(law).abs().max(r.energy_flux(law).abs());
                ensure(d <= 1e-12 * scale, || format!("production {d} > 0 for {data:?}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

// ---- subsolution ----

fn subsolution_trace_free(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(-1e3f64..1e3, -1e3f64..1e3), |(a, b)| {
            let u = u_from_v([a, b]);
            ensure(u.trace() == 0.0, || format!("trace {} for ({a}, {b})", u.trace()))
        })
        .map_err(|e| e.to_string())
}

/// Valid data with a density between `max(rho+-)` and `rho_m`, at relative
/// position `theta` of that interval.
fn fan_case() -> impl Strategy<Value = (RiemannData, f64)> {
    (valid_data(), 0.05f64..0.999).prop_map(|(data, theta)| {
        let ts = solve_middle_state(&data).unwrap();
        let lo = data.max_density();
        (data, lo + theta * (ts.rho_m - lo))
    })
}

fn subsolution_solved_fan(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&fan_case(), |(data, rho1)| {
            let s = match solve_fan(&data, rho1, ClosureRule::default()) {
                Ok(s) => s,
                Err(Error::InfeasibleClosure(_)) => return Err(TestCaseError::reject("infeasible")),
                Err(e) => return Err(fail(e.to_string())),
            };
            let r = subsolution_residuals(&s);
            ensure(r.iter().all(|x| x.abs() <= 1e-8), || format!("residuals {r:?}"))?;
            ensure(s.gap() > 0.0, || format!("gap {}", s.gap()))?;
            ensure(s.nu_minus < s.nu_plus, || format!("speeds {} {}", s.nu_minus, s.nu_plus))
        })
        .map_err(|e| e.to_string())
}

/// Valid data whose two shocks both raise the density by at least 20% of
/// `rho_m`. Weaker shocks make the fan speeds ill-conditioned in `rho1`.
fn strong_shock_data() -> impl Strategy<Value = RiemannData> {
    valid_data().prop_filter("weak shock", |data| {
        let ts = solve_middle_state(data).unwrap();
        ts.rho_m - data.max_density() >= 0.2 * ts.rho_m
    })
}

fn subsolution_degenerate_limit(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&strong_shock_data(), |data| {
            let ts = solve_middle_state(&data).unwrap();
            let rho1 = ts.rho_m * (1.0 - 1e-4);
            let s = solve_fan(&data, rho1, ClosureRule::default()).map_err(|e| fail(e.to_string()))?;
            // compared on the scale of the data velocities and shock speeds
            let scale = [data.left.v, data.right.v, ts.nu_minus, ts.nu_plus]
                .iter()
                .fold(1.0f64, |a, x| a.max(x.abs()));
            let tol = 1e-3 * scale;
            let ok = (s.v1[1] - ts.v_m).abs() <= tol
                && (s.nu_minus - ts.nu_minus).abs() <= tol
                && (s.nu_plus - ts.nu_plus).abs() <= tol;
            ensure(ok, || format!("{s:?} far from {ts:?}"))
        })
        .map_err(|e| e.to_string())
}

fn subsolution_c_limit(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&valid_data(), |data| {
            let ts = solve_middle_state(&data).unwrap();
            let vm2 = ts.v_m * ts.v_m;
            let mut dist = Vec::new();
            for k in [3, 5, 7] {
                let rho1 = ts.rho_m * (1.0 - 10f64.powi(-k));
                let s = solve_fan(&data, rho1, ClosureRule::default())
                    .map_err(|e| fail(e.to_string()))?;
                ensure(s.c >= vm2, || format!("C = {} below v_m^2 = {vm2}", s.c))?;
                dist.push(s.c - vm2);
            }
            ensure(dist[2] <= 0.05 * dist[0] + 1e-8, || format!("C - v_m^2 not shrinking: {dist:?}"))
        })
        .map_err(|e| e.to_string())
}

// ---- action ----

fn action_case() -> impl Strategy<Value = (RiemannData, f64, f64, f64)> {
    (fan_case(), 0.1f64..3.0, 0.1f64..3.0).prop_map(|((d, r), l3, t)| (d, r, l3, t))
}

fn action_identity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&action_case(), |(data, rho1, l3, t)| {
            let Ok(s) = solve_fan(&data, rho1, ClosureRule::default()) else {
                return Err(TestCaseError::reject("infeasible"));
            };
            let ts = solve_middle_state(&data).unwrap();
            let dom = FanDomain::for_two_shock(&ts, l3, t).unwrap();
            let a2 = action_two_shock(&ts, &data, &dom);
            let aci = action_convex_integration(&s, &dom);
            let vol = dom.region_volumes().middle;
            let err = aci - a2 + vol * l_diff(&ts, s.rho1, s.c, &data.law);
            ensure(err.abs() <= 1e-10 * a2.abs(), || format!("identity off by {err} (A = {a2})"))
        })
        .map_err(|e| e.to_string())
}

fn action_volumes_sum(runner: &mut TestRunner) -> Result<(), String> {
    let wedge = (-10.0f64..10.0, 0.01f64..20.0);
    runner
        .run(&(wedge, 0.01f64..5.0, 0.01f64..5.0), |((nm, w), l3, t)| {
            let dom = FanDomain::new(l3, t, Wedge::new(nm, nm + w).unwrap()).unwrap();
            let v = dom.region_volumes();
            let total = v.minus + v.middle + v.plus;
            ensure(
                (total - dom.box_volume()).abs() <= 1e-12 * dom.box_volume(),
                || format!("{v:?} vs box {}", dom.box_volume()),
            )
        })
        .map_err(|e| e.to_string())
}

fn action_width_scaling(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(action_case(), 0.1f64..10.0), |((data, rho1, l3, t), lam)| {
            let Ok(s) = solve_fan(&data, rho1, ClosureRule::default()) else {
                return Err(TestCaseError::reject("infeasible"));
            };
            let ts = solve_middle_state(&data).unwrap();
            let a = FanDomain::for_two_shock(&ts, l3, t).unwrap();
            let b = FanDomain::for_two_shock(&ts, lam * l3, t).unwrap();
            for (va, vb) in [
                (laap_verdict(&ts, &s, &data, &a), laap_verdict(&ts, &s, &data, &b)),
                (dissipation_difference(&ts, &s, &data, &a), dissipation_difference(&ts, &s, &data, &b)),
            ] {
                ensure(va.preferred == vb.preferred, || format!("{va:?} vs {vb:?}"))?;
                ensure((vb.margin - lam * va.margin).abs() <= 1e-9 * vb.margin.abs().max(1e-300), || {
                    format!("margin {} not {lam} x {}", vb.margin, va.margin)
                })?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn action_corollary_implies_theorem(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&valid_data(), |data| {
            let ts = solve_middle_state(&data).unwrap();
            let cor = laap_corollary_check(&data);
            ensure(!cor.holds || laap_theorem_check(&ts, &data), || {
                format!("corollary {cor:?} without theorem for {data:?}")
            })
        })
        .map_err(|e| e.to_string())
}

fn action_l_diff_slope(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(valid_data(), 0.2f64..0.95), |(data, theta)| {
            let ts = solve_middle_state(&data).unwrap();
            let lo = data.max_density();
            let rho1 = lo + theta * (ts.rho_m - lo);
            let h = 1e-4 * rho1;
            let c_at = |r: f64| solve_fan(&data, r, ClosureRule::default()).map(|s| s.c);
            let (Ok(cm), Ok(c0), Ok(cp)) = (c_at(rho1 - h), c_at(rho1), c_at(rho1 + h)) else {
                return Err(TestCaseError::reject("infeasible"));
            };
            let law = &data.law;
            let fd = (l_diff(&ts, rho1 + h, cp, law) - l_diff(&ts, rho1 - h, cm, law)) / (2.0 * h);
            let dc = (cp - cm) / (2.0 * h);
            let formula = -0.5 * c0 - 0.5 * rho1 * dc + law.enthalpy_like(rho1).unwrap();
            let scale = (0.5 * c0).abs() + (0.5 * rho1 * dc).abs() + law.enthalpy_like(rho1).unwrap();
            ensure((fd - formula).abs() <= 1e-6 * scale, || format!("fd {fd} vs {formula}"))
        })
        .map_err(|e| e.to_string())
}

// ---- oscillator ----

fn oscillator_conservation(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(1.0f64..5.0, 0.1f64..(2.0 * PI - 0.1)), |(c, phase)| {
            let start = exact_trajectory(c, phase, 0.0);
            let traj = integrate_with_switching(start, 1e-3, 2.0 * PI, c).map_err(|e| fail(e.to_string()))?;
            for s in &traj.samples {
                if s.state.norm() > SWITCH_RADIUS {
                    let drift = (s.state.circle_parameter() - c).abs();
                    ensure(drift <= 1e-6, || format!("c drift {drift} at {s:?}"))?;
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn oscillator_closed_form(runner: &mut TestRunner) -> Result<(), String> {
    // each case checks 1000 phases with a five-point second difference
    let phases = proptest::collection::vec(0.0f64..(2.0 * PI), 1000);
    runner
        .run(&(1.0f64..10.0, phases), |(c, phases)| {
            let h = 1e-2;
            for phase in phases {
                let at = |dt: f64| exact_trajectory(c, phase, dt);
                if at(0.0).x < 1e-2 * c || at(-2.0 * h).x <= 0.0 || at(2.0 * h).x <= 0.0 {
                    continue;
                }
                let acc = (-at(2.0 * h).x + 16.0 * at(h).x - 30.0 * at(0.0).x + 16.0 * at(-h).x
                    - at(-2.0 * h).x)
                    / (12.0 * h * h);
                let g = g_rhs(at(0.0)).unwrap();
                ensure((acc - g).abs() <= 1e-8 * c, || format!("c={c} phase={phase}: {acc} vs {g}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn oscillator_monotone_selection(runner: &mut TestRunner) -> Result<(), String> {
    let cands = proptest::collection::vec(1.0f64..20.0, 1..8);
    runner
        .run(&(0.01f64..(PI - 0.01), 1.0f64..10.0, 1e-6f64..10.0, cands), |(t1, c, dc, cands)| {
            let a = action_exit_circle(c, t1).unwrap();
            let b = action_exit_circle(c + dc, t1).unwrap();
            ensure(b > a, || format!("action not increasing at t1={t1}: {a} {b}"))?;
            let min = cands.iter().cloned().fold(f64::INFINITY, f64::min);
            let sel = select_exit_circle(t1, &cands).unwrap();
            ensure(sel == min, || format!("selected {sel} from {cands:?}"))
        })
        .map_err(|e| e.to_string())
}

fn oscillator_lagrangian_identity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(1.0f64..10.0, 0.0f64..(2.0 * PI)), |(c, phase)| {
            let s = exact_trajectory(c, phase, 0.0);
            if s.x < 1e-3 {
                return Err(TestCaseError::reject("too close to the origin"));
            }
            let l = lagrangian(s).unwrap();
            ensure((l - (c - s.x)).abs() <= 1e-10 * c, || format!("L = {l} vs c - x = {}", c - s.x))
        })
        .map_err(|e| e.to_string())
}

fn oscillator_exit_stays_exterior(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(1.0f64..5.0, 0.5f64..3.0), |(c, t_end)| {
            let traj = integrate_exit(c, 1e-3, t_end).map_err(|e| fail(e.to_string()))?;
            for s in &traj.samples {
                let inside = (s.state.x - 1.0).powi(2) + s.state.xdot.powi(2) < 1.0 - 1e-12;
                ensure(!inside, || format!("entered the interior disk at {s:?}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

// ---- aw_profiles ----

/// An admissible test profile: explicit Euler steps whose slope is the
/// bound minus a non-negative, oscillating excess.
pub fn admissible_profile() -> impl Strategy<Value = ChiProfile> {
    (0.1f64..10.0, 0.1f64..5.0, 0.0f64..3.0, 0.0f64..2.0, 0.0f64..20.0, 0.0f64..0.9)
        .prop_map(|(chi0, c1, c2, amp, freq, obstruction)| admissible(chi0, c1, c2, amp, freq, obstruction))
}

/// Profiles on the slope bound itself, parametrised by `(chi0, C1, C2)`.
pub fn saturated_profile() -> impl Strategy<Value = ChiProfile> {
    (0.1f64..10.0, 0.1f64..5.0, 0.0f64..3.0, 0.0f64..0.5)
        .prop_map(|(chi0, c1, c2, obstruction)| admissible(chi0, c1, c2, 0.0, 0.0, obstruction))
}

pub fn admissible(chi0: f64, c1: f64, c2: f64, amp: f64, freq: f64, obstruction: f64) -> ChiProfile {
    let constants = AwConstants::new(c1, c2, 2, 1.0, 0.0).unwrap();
    let t_star = 2.0 * chi0.sqrt() / c1;
    let times = uniform_grid(1.2 * t_star, 12_000);
    let mut chi = Vec::with_capacity(times.len());
    let mut x = chi0;
    for (k, t) in times.iter().enumerate() {
        chi.push(x);
        if k + 1 < times.len() {
            let excess = amp * (1.0 + (freq * t).sin());
            x = (x + (times[k + 1] - t) * (constants.slope_bound(x) - excess)).max(0.0);
        }
    }
    // lambda below chi / n by a margin
    let lambda = chi.iter().map(|c| obstruction * c / 2.0).collect();
    ChiProfile::new(constants, times, chi, lambda).unwrap()
}

fn positive_span(p: &ChiProfile) -> f64 {
    p.last_positive_time().unwrap()
}

fn aw_upper_bound(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&admissible_profile(), |p| {
            let last = positive_span(&p);
            let report = check_admissible(&p, 0.0, last).unwrap();
            ensure(report.admissible, || format!("test profile not admissible: {report:?}"))?;
            let dom = dominating_profile(p.chi0(), p.constants, p.times().to_vec()).unwrap();
            for ((t, a), b) in p.times().iter().zip(p.chi()).zip(dom.chi()) {
                ensure(*a <= b + 1e-8, || format!("chi({t}) = {a} above {b}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn aw_vanishing_time(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&admissible_profile(), |p| {
            let dt = p.times()[1] - p.times()[0];
            let bound = 2.0 * p.chi0().sqrt() / p.constants.c1 + dt;
            let last = positive_span(&p);
            ensure(last < bound, || format!("positive until {last}, bound {bound}"))
        })
        .map_err(|e| e.to_string())
}

fn aw_dominate_postconditions(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(saturated_profile(), 1e-3f64..2.0), |(p, delta)| {
            let d = entropy_rate_dominate(&p, delta).map_err(|e| fail(e.to_string()))?;
            let report = check_admissible(&d.profile, 0.0, d.common_t).unwrap();
            ensure(report.admissible, || format!("refined profile not admissible: {report:?}"))?;
            ensure(d.rate_gain < 0.0 && d.action_gain < 0.0, || format!("gains {} {}", d.rate_gain, d.action_gain))
        })
        .map_err(|e| e.to_string())
}

fn aw_energy_identity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(admissible_profile(), 0.1f64..10.0, -5.0f64..5.0), |(p, meas, bg)| {
            let c = AwConstants { meas_omega_prime: meas, background_internal: bg, ..p.constants };
            let p = ChiProfile::new(c, p.times().to_vec(), p.chi().to_vec(), p.lambda().to_vec()).unwrap();
            for (t, chi) in p.times().iter().zip(p.chi()).step_by(97) {
                let e = total_energy(&p, *t).unwrap() - bg;
                let expected = 0.5 * chi * meas;
                // exact up to the rounding of adding and removing bg
                let ulp = 4.0 * f64::EPSILON * (expected.abs() + bg.abs());
                ensure((e - expected).abs() <= ulp, || format!("E - bg = {e} vs {expected} at {t}"))?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}
