use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::analysis::{
    blaschke_lower_bound_check, default_p_sequence, fit_growth, fit_pole_decay, rank_drop_audit, resolved_window,
};
use super::data::{
    RANK_SECTION,
    blaschke_factor_datum, blaschke_factor_zero, builtin_growth_datum, builtin_lifted_datum, load_datum,
    random_rational_state, widest_k_level,
};
use super::{standard_tables, Check, Comparison, Metric, Scenario, ScenarioOutput, Settings, Table};
use crate::blaschke::{compose_with_blaschke, lift_plan, BlaschkeProduct};
use crate::crossing::detect_crossings;
use crate::error::{Error, Result};
use crate::grid::GridPlan;
use crate::hankel::{hankel_square, operator_norm};
use crate::integrator::{integrate, AuditLevel, Event, SimulationConfig, TrajectoryRecord};
use crate::invariants::{
    default_fd_step, generating_values, hierarchy_l, j_product_formula, mass, poisson_bracket, Functional,
};
use crate::lax::blaschke_orbit_trace;
use crate::rational::{rational_to_fourier, RationalState};
use crate::special::{crossing_oracle_i, CrossingOracleParams};
use crate::spectral::{decompose, effective_size, ranks, DEFAULT_CLUSTER_REL_TOL};
use crate::state::{FourierState, DEFAULT_TAIL_TOL};

pub(crate) fn run(scenario: Scenario, s: &Settings) -> Result<ScenarioOutput> {
    match scenario {
        Scenario::ConservationAudit => conservation(s),
        Scenario::InvolutionAudit => involution(s),
        Scenario::CrossingL1 => crossing(s),
        Scenario::Growth => growth(s),
        Scenario::Bounded => bounded(s),
        Scenario::LiftedGrowth => lifted(s),
        Scenario::BlaschkeLowerBound => blaschke(s),
        Scenario::RankDropNecessary => rank_drop(s),
    }
}

const DRIFT_TOL: f64 = 1e-8;

fn config(s: &Settings, audit: AuditLevel) -> SimulationConfig {
    SimulationConfig {
        alpha: s.alpha,
        truncation: s.n,
        grid_size: s.grid,
        rel_tol: s.rel_tol,
        abs_tol: s.abs_tol,
        t_max: s.t_max,
        sample_interval: s.sample_interval,
        audit,
        ..SimulationConfig::default()
    }
}

fn datum_or(
    s: &Settings,
    builtin: impl FnOnce() -> Result<FourierState>,
) -> Result<(FourierState, Option<RationalState>)> {
    match &s.data {
        Some(path) => load_datum(path, s.n),
        None => Ok((builtin()?, None)),
    }
}

fn lt(bound: f64) -> Comparison {
    Comparison::Lt { bound }
}

fn gt(bound: f64) -> Comparison {
    Comparison::Gt { bound }
}

fn table_metric(kind: &str, table: &str, column: &str) -> Metric {
    let (table, column) = (table.to_string(), column.to_string());
    match kind {
        "drift" => Metric::MaxRelDrift { table, column },
        "p2p" => Metric::PeakToPeak { table, column },
        "min" => Metric::Min { table, column },
        "max" => Metric::Max { table, column },
        _ => unreachable!("unknown metric kind {kind}"),
    }
}

/// Drift checks on the named invariants and on every initial σ.
fn drift_checks(traj: &TrajectoryRecord) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some(inv) = traj.samples.first().and_then(|s| s.invariants.as_ref()) {
        for (name, _) in inv.named() {
            out.push(Check::from_tables(&format!("drift {name}"), table_metric("drift", "invariants", &name), lt(DRIFT_TOL)));
        }
    }
    let nsig = traj.samples.first().and_then(|s| s.spectral.as_ref()).map_or(0, |sp| sp.k_eigenvalues.len());
    for k in 1..=nsig {
        let col = format!("sigma_{k}");
        out.push(Check::from_tables(&format!("drift {col}"), table_metric("drift", "spectral", &col), lt(DRIFT_TOL)));
    }
    out
}

fn horizon_check(traj: &TrajectoryRecord) -> Check {
    Check::stored("horizon reached", traj.end_time - traj.start_time(), gt(traj.config.t_max - 1e-9))
}

fn run_report(traj: &TrajectoryRecord) -> serde_json::Value {
    json!({
        "end_time": traj.end_time,
        "tail_breach": traj.tail_breach(),
        "samples": traj.samples.len(),
    })
}

fn conservation(s: &Settings) -> Result<ScenarioOutput> {
    let (u0, _) = datum_or(s, || Ok(FourierState::from_real(s.n, &[1.0, 1.0])))?;
    let traj = integrate(&config(s, AuditLevel::Full), &u0)?;
    let mut checks = drift_checks(&traj);
    if s.alpha != 0.0 && u0.coeff(0).norm() > 0.0 {
        checks.push(Check::from_tables("rho_1 peak-to-peak", table_metric("p2p", "spectral", "rho_1"), gt(1e-3)));
    }
    checks.push(horizon_check(&traj));
    Ok(ScenarioOutput {
        tables: standard_tables(&traj),
        events: traj.events.clone(),
        checks,
        report: run_report(&traj),
    })
}

fn involution(s: &Settings) -> Result<ScenarioOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let plan = GridPlan::new(s.n, s.grid)?;
    let m = s.n;
    let mut brackets = Table::new(vec!["state".into(), "x".into(), "y".into()]);
    let mut generating = Table::new(vec!["state".into(), "x".into()]);
    let (mut worst_lxy, mut worst_qe, mut worst_rel, mut worst_prod, mut worst_jitter) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for idx in 0..5 {
        let r = random_rational_state(&mut rng, 2)?;
        let u = rational_to_fourier(&r, s.n, DEFAULT_TAIL_TOL)?;
        let lam = operator_norm(&hankel_square(&u, m)?.entries);
        let h = default_fd_step(&u);
        for _ in 0..10 {
            let x = rng.random_range(0.05..0.45) / lam;
            let y = rng.random_range(0.05..0.45) / lam;
            let b = poisson_bracket(Functional::Lx(x), Functional::Lx(y), &u, s.alpha, &plan, m, h)?;
            worst_lxy = worst_lxy.max(b.normalized);
            worst_jitter = worst_jitter.max(b.jitter);
            brackets.push_named(&[
                ("state".into(), idx as f64),
                ("x".into(), x),
                ("y".into(), y),
                ("bracket".into(), b.bracket),
                ("normalized".into(), b.normalized),
                ("jitter".into(), b.jitter),
            ]);
        }
        let qe = poisson_bracket(Functional::Mass, Functional::Energy, &u, s.alpha, &plan, m, h)?;
        worst_qe = worst_qe.max(qe.normalized);
        let dec = decompose(&u, m, DEFAULT_CLUSTER_REL_TOL)?;
        for _ in 0..10 {
            let x = rng.random_range(-0.9..0.9) / lam;
            let (rel, prod) = match generating_values(&u, s.alpha, x, m) {
                Ok(g) => {
                    let (r1, r2) = g.relation_residuals();
                    (r1.max(r2), (g.j - j_product_formula(&dec, x)).abs() / g.j.abs())
                }
                Err(Error::AssemblyCheck(_)) => (f64::INFINITY, f64::INFINITY),
                Err(e) => return Err(e),
            };
            worst_rel = worst_rel.max(rel);
            worst_prod = worst_prod.max(prod);
            generating.push_named(&[
                ("state".into(), idx as f64),
                ("x".into(), x),
                ("relation_residual".into(), rel),
                ("product_residual".into(), prod),
            ]);
        }
    }
    let checks = vec![
        Check::stored("{L_x, L_y} normalized", worst_lxy, lt(1e-6)),
        Check::stored("{Q, E_alpha} normalized", worst_qe, lt(1e-6)),
        Check::stored("gradient jitter", worst_jitter, lt(0.1)),
        Check::stored("generating relations", worst_rel, lt(1e-10)),
        Check::stored("J product formula", worst_prod, lt(1e-10)),
    ];
    Ok(ScenarioOutput {
        tables: vec![("brackets".into(), brackets), ("generating".into(), generating)],
        events: vec![],
        checks,
        report: json!({ "states": 5, "pairs_per_state": 10, "seed": s.seed }),
    })
}

/// Tolerance on detected crossing times against the zeros of `cn`.
const CROSSING_TIME_TOL: f64 = 1e-3;

fn crossing(s: &Settings) -> Result<ScenarioOutput> {
    if s.alpha != 1.0 {
        return Err(Error::InvalidInput(format!("the crossing oracle holds at α = 1, got {}", s.alpha)));
    }
    let p = match &s.data {
        Some(path) => {
            let (_, r) = load_datum(path, s.n)?;
            r.as_ref()
                .and_then(blaschke_factor_zero)
                .ok_or_else(|| Error::InvalidInput("crossing_L1 data must be a Blaschke factor (z − p)/(1 − p̄z)".into()))?
        }
        None => Complex64::new(0.5, 0.0),
    };
    let u0 = blaschke_factor_datum(p, s.n)?;
    let mut traj = integrate(&config(s, AuditLevel::Full), &u0)?;
    let params = CrossingOracleParams::new(p)?;
    let r2 = p.norm_sqr();

    let inv0 = traj.samples[0].invariants.clone().expect("full audit");
    let ell = inv0.per_level.iter().find(|l| (l.sigma - 1.0).abs() < 1e-6).map_or(f64::NAN, |l| l.ell);
    let l1 = inv0.hierarchy[1];

    let report = detect_crossings(&traj, 1.0, 0.05);
    let zeros = params.zeros(traj.end_time);
    let worst_dt = zeros
        .iter()
        .map(|z| report.times.iter().map(|c| (c.t - z).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    for c in &report.times {
        traj.events.push(Event::Crossing { t: c.t, sigma: 1.0, min_gap: c.min_gap });
    }

    let mut tables = standard_tables(&traj);
    if let Some((_, spec)) = tables.iter_mut().find(|(n, _)| n == "spectral") {
        spec.add_column("oracle_abs_I", |t| Some(crossing_oracle_i(t, &params).abs()));
    }
    let mut checks = vec![
        Check::from_tables(
            "oracle sup |(rho1^2-rho2^2)/2 - |I||",
            Metric::MaxAbsDiff { table: "spectral".into(), a: "half_gap".into(), b: "oracle_abs_I".into() },
            lt(1e-6),
        ),
        Check::stored("E_alpha(u0) - (1/4 + |p|^2/2)", (inv0.energy - (0.25 + 0.5 * r2)).abs(), lt(1e-10)),
        Check::stored("L1(u0) + (1 - |p|^2)", (l1 + (1.0 - r2)).abs(), lt(1e-10)),
        Check::stored("ell at sigma=1 minus L1", (ell - l1).abs(), lt(1e-10)),
        Check::stored("crossing count minus cn zero count", report.times.len() as f64 - zeros.len() as f64, Comparison::Within { target: 0.0, tol: 0.5 }),
        Check::stored("crossing times vs cn zeros", worst_dt, lt(CROSSING_TIME_TOL)),
        Check::stored("crossing at t=0", report.times.first().map_or(f64::NAN, |c| c.t), Comparison::Within { target: 0.0, tol: 1e-12 }),
    ];
    checks.extend(drift_checks(&traj));
    checks.push(horizon_check(&traj));
    Ok(ScenarioOutput {
        tables,
        events: traj.events.clone(),
        checks,
        report: json!({
            "oracle": params,
            "oracle_zeros": zeros,
            "crossings": report,
            "run": run_report(&traj),
        }),
    })
}

/// Start of the growth windows (excludes the initial transient).
const GROWTH_T0: f64 = 2.0;

fn l1_check(u0: &FourierState, s: &Settings, name: &str) -> Check {
    let plan = GridPlan::for_truncation(u0.truncation());
    let l1 = hierarchy_l(u0, s.alpha, 1, &plan)[1];
    Check::stored(name, l1.abs() / (mass(u0) + s.alpha.abs()), lt(1e-10))
}

fn growth_checks(window: (f64, f64)) -> Vec<Check> {
    let (lo, hi) = window;
    let mid = 0.5 * (lo + hi);
    let slope = |col: &str, lo: f64, hi: f64| Metric::LogSlope { table: "invariants".into(), column: col.into(), lo, hi };
    vec![
        Check::stored("resolved window length", hi - lo, gt(1.0)),
        Check::from_tables("slope s=1", slope("hs_1", lo, hi), gt(0.0)),
        Check::from_tables(
            "R^2 s=1",
            Metric::LogR2 { table: "invariants".into(), column: "hs_1".into(), lo, hi },
            gt(0.99),
        ),
        Check::from_tables(
            "slope ratio s=2 / s=1",
            Metric::LogSlopeRatio { table: "invariants".into(), num: "hs_2".into(), den: "hs_1".into(), lo, hi },
            Comparison::Within { target: 3.0, tol: 0.45 },
        ),
        Check::from_tables("slope s=1/2", slope("hs_0.5", lo, hi), Comparison::Within { target: 0.0, tol: 0.01 }),
        Check::from_tables("slope s=1 first half", slope("hs_1", lo, mid), gt(0.0)),
        Check::from_tables("slope s=1 second half", slope("hs_1", mid, hi), gt(0.0)),
    ]
}

fn growth(s: &Settings) -> Result<ScenarioOutput> {
    let (u0, _) = datum_or(s, || builtin_growth_datum(s.alpha, 1.0, s.n))?;
    let mut cfg = config(s, AuditLevel::NormsOnly);
    cfg.hierarchy_order = 2;
    let traj = integrate(&cfg, &u0)?;
    let window = resolved_window(&traj, GROWTH_T0);
    let mut checks = vec![l1_check(&u0, s, "|L1(u0)| relative")];
    checks.extend(growth_checks(window));
    let fits = fit_growth(&traj, &[0.5, 1.0, 2.0], &[window]).ok();
    let pole = fit_pole_decay(&traj, window).ok();
    Ok(ScenarioOutput {
        tables: standard_tables(&traj),
        events: traj.events.clone(),
        checks,
        report: json!({
            "window": window,
            "fits": fits,
            "c_alpha": fits.as_ref().and_then(|f| f.iter().find(|g| g.s == 1.0)).and_then(|g| g.c_alpha()),
            "log_one_minus_pole_slope": pole.map(|p| p.0),
            "run": run_report(&traj),
        }),
    })
}

fn bounded(s: &Settings) -> Result<ScenarioOutput> {
    let (u0, _) = datum_or(s, || Ok(FourierState::from_real(s.n, &[1.0, 1.0])))?;
    let traj = integrate(&config(s, AuditLevel::Full), &u0)?;
    let first = &traj.samples[0];
    let k0 = first
        .spectral
        .as_ref()
        .and_then(|sp| sp.k_eigenvalues.last())
        .map_or(f64::NAN, |l| l.sqrt());
    let ell_min = first
        .invariants
        .as_ref()
        .map(|inv| inv.per_level.iter().filter(|l| l.sigma > 0.0).map(|l| l.ell).fold(f64::INFINITY, f64::min))
        .unwrap_or(f64::NAN);
    let split = traj.start_time() + 0.5 * s.t_max;
    let checks = vec![
        Check::from_tables(
            "sup H1 late / early - 1",
            Metric::SupGrowth { table: "invariants".into(), column: "hs_1".into(), split },
            lt(0.05),
        ),
        Check::from_tables("smallest K singular value", table_metric("min", "spectral", "k_min"), gt(0.5 * k0)),
        Check::stored("min ell_k(u0)", ell_min, gt(0.0)),
        Check::from_tables("max pole radius", table_metric("max", "invariants", "pole_radius"), lt(1.0 - 10.0 / s.n as f64)),
        horizon_check(&traj),
    ];
    Ok(ScenarioOutput {
        tables: standard_tables(&traj),
        events: traj.events.clone(),
        checks,
        report: json!({ "k_min_initial": k0, "ell_min": ell_min, "run": run_report(&traj) }),
    })
}

/// Base size and horizon of the substitution comparison.
const SUBST_N: usize = 64;
const SUBST_T: f64 = 5.0;

/// Sup over samples of `‖ũ(t) − u(t, z²)‖` for the truncated flows at `N`
/// and `2N`, with the tail guard off.
fn substitution_gap(s: &Settings) -> Result<(f64, Table)> {
    let chi = BlaschkeProduct::z();
    let base0 = builtin_growth_datum(s.alpha, 1.0, SUBST_N)?;
    let lift0 = builtin_lifted_datum(s.alpha, 1.0, &chi, SUBST_N)?;
    let mk = |n: usize| SimulationConfig {
        alpha: s.alpha,
        truncation: n,
        grid_size: 4 * n,
        rel_tol: s.rel_tol,
        abs_tol: s.abs_tol,
        t_max: SUBST_T,
        sample_interval: 0.25,
        tail_guard: None,
        audit: AuditLevel::StateOnly,
        ..SimulationConfig::default()
    };
    let base = integrate(&mk(SUBST_N), &base0)?;
    let lift = integrate(&mk(2 * SUBST_N), &lift0)?;
    let plan = lift_plan(SUBST_N, &chi);
    let mut table = Table::new(vec!["t".into(), "distance".into()]);
    let mut worst = 0.0f64;
    for (b, l) in base.samples.iter().zip(&lift.samples) {
        let composed = compose_with_blaschke(&b.state, &chi, &plan)?;
        let d = composed.l2_distance(&l.state);
        worst = worst.max(d);
        table.push_named(&[("t".into(), b.t), ("distance".into(), d)]);
    }
    Ok((worst, table))
}

fn lifted(s: &Settings) -> Result<ScenarioOutput> {
    let chi = BlaschkeProduct::z();
    let base0 = builtin_growth_datum(s.alpha, 1.0, s.n)?;
    let lift0 = builtin_lifted_datum(s.alpha, 1.0, &chi, s.n)?;
    let small = lift0.resized(effective_size(&lift0, 1e-16).clamp(8, RANK_SECTION));
    let rk = ranks(&small, 1e-10)?.rank_k;

    let mut cfg = config(s, AuditLevel::NormsOnly);
    cfg.hierarchy_order = 2;
    let base = integrate(&cfg, &base0)?;
    let cfg_l = SimulationConfig { truncation: 2 * s.n, grid_size: 2 * s.grid, ..cfg };
    let lift = integrate(&cfg_l, &lift0)?;
    let window = (GROWTH_T0, resolved_window(&base, GROWTH_T0).1.min(resolved_window(&lift, GROWTH_T0).1));
    let fb = fit_growth(&base, &[1.0], &[window]);
    let fl = fit_growth(&lift, &[1.0], &[window]);
    let ratio = match (&fb, &fl) {
        (Ok(b), Ok(l)) => l[0].slope / b[0].slope,
        _ => f64::NAN,
    };
    let (subst, subst_table) = substitution_gap(s)?;

    let checks = vec![
        l1_check(&lift0, s, "|L1(lifted u0)| relative"),
        Check::stored("rk K(lifted u0)", rk as f64, Comparison::Within { target: 2.0, tol: 0.5 }),
        Check::stored("resolved window length", window.1 - window.0, gt(1.0)),
        Check::from_tables(
            "lifted slope s=1",
            Metric::LogSlope { table: "invariants".into(), column: "hs_1".into(), lo: window.0, hi: window.1 },
            gt(0.0),
        ),
        Check::stored("C_alpha lifted / base", ratio, Comparison::Within { target: 1.0, tol: 0.05 }),
        Check::stored("substitution sup distance", subst, lt(1e-6)),
    ];
    let mut tables = standard_tables(&lift);
    tables.push(("base_invariants".into(), super::invariant_table(&base)));
    tables.push(("substitution".into(), subst_table));
    Ok(ScenarioOutput {
        tables,
        events: lift.events.iter().chain(&base.events).cloned().collect(),
        checks,
        report: json!({
            "window": window,
            "base_fit": fb.ok(),
            "lifted_fit": fl.ok(),
            "c_alpha_ratio": ratio,
            "rank_k": rk,
            "substitution_sup": subst,
            "base_run": run_report(&base),
            "lifted_run": run_report(&lift),
        }),
    })
}

fn blaschke(s: &Settings) -> Result<ScenarioOutput> {
    let chi = BlaschkeProduct::factor(Complex64::new(0.3, 0.0))?;
    let u0 = builtin_lifted_datum(s.alpha, s.alpha.sqrt(), &chi, s.n / 2)?;
    let (sigma, mult) = widest_k_level(&u0)?;
    let traj = integrate(&config(s, AuditLevel::StateOnly), &u0)?;
    let orbit = blaschke_orbit_trace(&traj, sigma, 1e-6)?;
    let mut orbit_table = Table::new(vec!["t".into(), "angle".into()]);
    for (i, t) in orbit.times.iter().enumerate() {
        let mut row = vec![("t".into(), *t), ("angle".into(), orbit.angles[i])];
        for (j, z) in orbit.zeros[i].iter().enumerate() {
            row.push((format!("zero{}_re", j + 1), z.re));
            row.push((format!("zero{}_im", j + 1), z.im));
        }
        orbit_table.push_named(&row);
    }
    let mut checks = vec![
        Check::stored("Psi degree", mult as f64 - 1.0, Comparison::Within { target: 1.0, tol: 0.5 }),
        Check::stored("Psi zero drift", orbit.worst_drift(), lt(1e-6)),
        horizon_check(&traj),
    ];

    let psis = [
        ("z", BlaschkeProduct::z()),
        ("deg2", BlaschkeProduct::new(0.0, vec![Complex64::new(0.3, 0.0), Complex64::new(-0.4, 0.0)])?),
    ];
    let ps = default_p_sequence();
    let mut lb_table = Table::new(vec!["degree".into(), "s".into(), "one_minus_p".into(), "norm".into()]);
    let mut reports = Vec::new();
    for (label, psi) in &psis {
        for sv in [0.0, 0.25, 0.5] {
            let rep = blaschke_lower_bound_check(psi, sv, &ps)?;
            for &(eps, v) in &rep.points {
                lb_table.push_named(&[
                    ("degree".into(), psi.degree() as f64),
                    ("s".into(), sv),
                    ("one_minus_p".into(), eps),
                    ("norm".into(), v),
                ]);
            }
            checks.push(Check::stored(&format!("log-log slope Psi={label} s={sv}"), rep.slope, lt(rep.bound)));
            if *label == "z" && sv == 0.0 {
                let worst = rep
                    .points
                    .iter()
                    .map(|&(eps, v)| {
                        let r = 1.0 - eps;
                        (v * v * (1.0 - r * r) - 1.0).abs()
                    })
                    .fold(0.0, f64::max);
                checks.push(Check::stored("Psi=z s=0 closed form 1/(1-|p|^2)", worst, lt(1e-10)));
            }
            reports.push(rep);
        }
    }
    let mut tables = standard_tables(&traj);
    tables.push(("orbit".into(), orbit_table));
    tables.push(("lower_bound".into(), lb_table));
    Ok(ScenarioOutput {
        tables,
        events: traj.events.clone(),
        checks,
        report: json!({ "sigma": sigma, "multiplicity": mult, "orbit": orbit, "lower_bound": reports }),
    })
}

fn rank_drop(s: &Settings) -> Result<ScenarioOutput> {
    let (u0, _) = datum_or(s, || blaschke_factor_datum(Complex64::new(0.5, 0.0), s.n))?;
    let traj = integrate(&config(s, AuditLevel::Full), &u0)?;
    let ell0 = traj.samples[0].invariants.as_ref().map(|i| i.per_level.clone()).unwrap_or_default();
    let rep = rank_drop_audit(&traj, &ell0);
    let mut checks = Vec::new();
    if s.alpha < 0.0 || !rep.necessary_condition_met {
        checks.push(Check::stored("sustained K singular value decay", rep.sustained_decay as u8 as f64, lt(0.5)));
        checks.push(Check::from_tables(
            "max pole radius",
            table_metric("max", "invariants", "pole_radius"),
            lt(rep.pole_threshold),
        ));
        checks.push(horizon_check(&traj));
    }
    Ok(ScenarioOutput {
        tables: standard_tables(&traj),
        events: traj.events.clone(),
        checks,
        report: json!({ "audit": rep, "run": run_report(&traj) }),
    })
}
