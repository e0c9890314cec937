//! Scenario runner: configures a run, integrates, audits, and writes
//! plot-ready tables plus a pass/fail summary that `check` can re-evaluate
//! from the stored tables.

pub mod analysis;
pub mod data;
mod scenarios;
pub mod tables;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{Event, TrajectoryRecord};
use crate::state::sobolev_norm;

pub use analysis::{
    blaschke_lower_bound_check, fit_growth, fit_line, rank_drop_audit, GrowthFit, LowerBoundReport, RankDropReport,
};
pub use data::{builtin_growth_datum, builtin_lifted_datum, random_rational_state};
pub use tables::Table;

/// Summary file schema version.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest exit code used for failed checks.
pub const EXIT_CAP: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    ConservationAudit,
    InvolutionAudit,
    #[serde(rename = "crossing_L1")]
    CrossingL1,
    Growth,
    Bounded,
    LiftedGrowth,
    BlaschkeLowerBound,
    RankDropNecessary,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::ConservationAudit,
        Scenario::InvolutionAudit,
        Scenario::CrossingL1,
        Scenario::Growth,
        Scenario::Bounded,
        Scenario::LiftedGrowth,
        Scenario::BlaschkeLowerBound,
        Scenario::RankDropNecessary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::ConservationAudit => "conservation_audit",
            Scenario::InvolutionAudit => "involution_audit",
            Scenario::CrossingL1 => "crossing_L1",
            Scenario::Growth => "growth",
            Scenario::Bounded => "bounded",
            Scenario::LiftedGrowth => "lifted_growth",
            Scenario::BlaschkeLowerBound => "blaschke_lower_bound",
            Scenario::RankDropNecessary => "rank_drop_necessary",
        }
    }

    /// Defaults before any config file or flag.
    pub fn defaults(self) -> Settings {
        let base = |alpha: f64, n: usize, t_max: f64, sample_interval: f64| Settings {
            alpha,
            n,
            grid: 4 * n,
            t_max,
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            sample_interval,
            seed: 7,
            data: None,
        };
        match self {
            Scenario::ConservationAudit => base(1.0, 256, 50.0, 0.1),
            Scenario::InvolutionAudit => base(1.0, 64, 0.0, 1.0),
            Scenario::CrossingL1 => base(1.0, 128, 10.0, 0.05),
            Scenario::Growth => base(1.0, 16384, 10.0, 0.05),
            Scenario::Bounded => base(-1.0, 256, 100.0, 0.25),
            Scenario::LiftedGrowth => base(1.0, 16384, 10.0, 0.05),
            Scenario::BlaschkeLowerBound => base(0.1, 256, 5.0, 0.1),
            Scenario::RankDropNecessary => base(1.0, 128, 50.0, 0.1),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub alpha: f64,
    pub n: usize,
    pub grid: usize,
    pub t_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub sample_interval: f64,
    pub seed: u64,
    pub data: Option<PathBuf>,
}

/// Partial settings from a config file or from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub alpha: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub grid: Option<usize>,
    pub t_max: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub sample_interval: Option<f64>,
    pub seed: Option<u64>,
    pub data: Option<PathBuf>,
}

impl Overrides {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// `self` wins over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        Overrides {
            alpha: self.alpha.or(lower.alpha),
            n: self.n.or(lower.n),
            grid: self.grid.or(lower.grid),
            t_max: self.t_max.or(lower.t_max),
            rel_tol: self.rel_tol.or(lower.rel_tol),
            abs_tol: self.abs_tol.or(lower.abs_tol),
            sample_interval: self.sample_interval.or(lower.sample_interval),
            seed: self.seed.or(lower.seed),
            data: self.data.or(lower.data),
        }
    }

    /// Applies to scenario defaults. A new `N` without a grid resets the
    /// grid to `4N`.
    pub fn resolve(self, scenario: Scenario) -> Settings {
        let d = scenario.defaults();
        let n = self.n.unwrap_or(d.n);
        Settings {
            alpha: self.alpha.unwrap_or(d.alpha),
            n,
            grid: self.grid.unwrap_or(if self.n.is_some() { 4 * n } else { d.grid }),
            t_max: self.t_max.unwrap_or(d.t_max),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            sample_interval: self.sample_interval.unwrap_or(d.sample_interval),
            seed: self.seed.unwrap_or(d.seed),
            data: self.data.or(d.data),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Comparison {
    Lt { bound: f64 },
    Gt { bound: f64 },
    Within { target: f64, tol: f64 },
}

impl Comparison {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Comparison::Lt { bound } => v < bound,
            Comparison::Gt { bound } => v > bound,
            Comparison::Within { target, tol } => (v - target).abs() <= tol,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Comparison::Lt { bound } => write!(f, "< {bound:e}"),
            Comparison::Gt { bound } => write!(f, "> {bound:e}"),
            Comparison::Within { target, tol } => write!(f, "= {target} ± {tol:e}"),
        }
    }
}

/// How a check value is obtained. Everything except `Stored` is recomputed
/// from the run's CSV tables by `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Metric {
    /// Measured during the run (not a time series).
    Stored,
    /// `max_t |x(t) − x(t₀)| / max(|x(t₀)|, 1)`.
    MaxRelDrift { table: String, column: String },
    PeakToPeak { table: String, column: String },
    MaxAbsDiff { table: String, a: String, b: String },
    Min { table: String, column: String },
    Max { table: String, column: String },
    /// `sup_{t ≥ split} x / sup_{t ≤ split} x − 1`.
    SupGrowth { table: String, column: String, split: f64 },
    /// Slope of `log x` against `t` on `[lo, hi]` over resolved rows.
    LogSlope { table: String, column: String, lo: f64, hi: f64 },
    LogR2 { table: String, column: String, lo: f64, hi: f64 },
    /// Ratio of two `LogSlope`s on the same window.
    LogSlopeRatio { table: String, num: String, den: String, lo: f64, hi: f64 },
}

fn get_table<'a>(tables: &'a std::collections::BTreeMap<String, Table>, name: &str) -> Result<&'a Table> {
    tables.get(name).ok_or_else(|| Error::InvalidInput(format!("missing table {name}.csv")))
}

fn log_fit(t: &Table, column: &str, lo: f64, hi: f64) -> Result<(f64, f64, f64)> {
    let resolved = t.column("resolved");
    let tv = t.column("t").ok_or_else(|| Error::InvalidInput("no t column".into()))?;
    let xv = t.column(column).ok_or_else(|| Error::InvalidInput(format!("no column {column}")))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, (ti, xi)) in tv.iter().zip(&xv).enumerate() {
        let ok = resolved.as_ref().is_none_or(|r| r[i] == Some(1.0));
        if let (Some(ti), Some(xi), true) = (ti, xi, ok) {
            if *ti >= lo - 1e-12 && *ti <= hi + 1e-12 {
                xs.push(*ti);
                ys.push(xi.ln());
            }
        }
    }
    if xs.len() < 3 {
        return Err(Error::WindowUnresolved { lo, hi, count: xs.len() });
    }
    Ok(fit_line(&xs, &ys))
}

impl Metric {
    pub fn evaluate(&self, tables: &std::collections::BTreeMap<String, Table>) -> Result<Option<f64>> {
        let values = |table: &str, column: &str| -> Result<Vec<(f64, f64)>> { get_table(tables, table)?.series(column) };
        Ok(Some(match self {
            Metric::Stored => return Ok(None),
            Metric::MaxRelDrift { table, column } => {
                let s = values(table, column)?;
                let x0 = s.first().map_or(0.0, |p| p.1);
                s.iter().map(|p| (p.1 - x0).abs()).fold(0.0, f64::max) / x0.abs().max(1.0)
            }
            Metric::PeakToPeak { table, column } => {
                let s = values(table, column)?;
                let hi = s.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                let lo = s.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
                hi - lo
            }
            Metric::MaxAbsDiff { table, a, b } => {
                let t = get_table(tables, table)?;
                let (ca, cb) = (t.column(a), t.column(b));
                let (Some(ca), Some(cb)) = (ca, cb) else {
                    return Err(Error::InvalidInput(format!("missing column {a} or {b}")));
                };
                ca.iter()
                    .zip(&cb)
                    .filter_map(|(x, y)| Some((x.as_ref()? - y.as_ref()?).abs()))
                    .fold(0.0, f64::max)
            }
            Metric::Min { table, column } => values(table, column)?.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
            Metric::Max { table, column } => {
                values(table, column)?.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
            }
            Metric::SupGrowth { table, column, split } => {
                let s = values(table, column)?;
                let early = s.iter().filter(|p| p.0 <= *split).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                let late = s.iter().filter(|p| p.0 >= *split).map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
                late / early - 1.0
            }
            Metric::LogSlope { table, column, lo, hi } => log_fit(get_table(tables, table)?, column, *lo, *hi)?.0,
            Metric::LogR2 { table, column, lo, hi } => log_fit(get_table(tables, table)?, column, *lo, *hi)?.2,
            Metric::LogSlopeRatio { table, num, den, lo, hi } => {
                let t = get_table(tables, table)?;
                log_fit(t, num, *lo, *hi)?.0 / log_fit(t, den, *lo, *hi)?.0
            }
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub metric: Metric,
    pub comparison: Comparison,
    pub value: f64,
    pub passed: bool,
}

impl Check {
    pub fn stored(name: &str, value: f64, comparison: Comparison) -> Self {
        Self { name: name.into(), metric: Metric::Stored, comparison, value, passed: comparison.holds(value) }
    }

    pub fn from_tables(name: &str, metric: Metric, comparison: Comparison) -> Self {
        Self { name: name.into(), metric, comparison, value: f64::NAN, passed: false }
    }

    /// Recomputes the value from the tables (keeps stored values) and
    /// re-applies the comparison. Evaluation errors fail the check.
    pub fn reevaluate(&mut self, tables: &std::collections::BTreeMap<String, Table>) {
        match self.metric.evaluate(tables) {
            Ok(Some(v)) => self.value = v,
            Ok(None) => {}
            Err(_) => self.value = f64::NAN,
        }
        self.passed = self.comparison.holds(self.value);
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {}: {:.6e} (want {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.comparison
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub scenario: Scenario,
    pub settings: Settings,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    /// Scenario-specific measurements (fits, reports).
    pub report: serde_json::Value,
}

impl Summary {
    pub fn exit_code(&self) -> i32 {
        self.failed.min(EXIT_CAP) as i32
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn recount(&mut self) {
        self.passed = self.checks.iter().filter(|c| c.passed).count();
        self.failed = self.checks.len() - self.passed;
    }
}

/// What a scenario hands back for writing.
pub(crate) struct ScenarioOutput {
    pub tables: Vec<(String, Table)>,
    pub events: Vec<Event>,
    pub checks: Vec<Check>,
    pub report: serde_json::Value,
}

/// Columns `t, tail, resolved, re_k, im_k` for the first `keep` modes.
pub fn trajectory_table(traj: &TrajectoryRecord, keep: usize) -> Table {
    let mut t = Table::new(vec!["t".into(), "tail".into(), "resolved".into()]);
    for s in &traj.samples {
        let mut row = vec![("t".into(), s.t), ("tail".into(), s.tail), ("resolved".into(), s.resolved as u8 as f64)];
        for k in 0..keep.min(s.state.truncation()) {
            let c = s.state.coeff(k);
            row.push((format!("re_{k}"), c.re));
            row.push((format!("im_{k}"), c.im));
        }
        t.push_named(&row);
    }
    t
}

/// Sobolev indices recorded in the invariant table.
pub const AUDIT_S: [(f64, &str); 3] = [(0.5, "hs_0.5"), (1.0, "hs_1"), (2.0, "hs_2")];

/// Columns `t, resolved, E_alpha, Q, M, L0.., hs_*, pole_radius, tail,
/// sigma_k, ell_k`.
pub fn invariant_table(traj: &TrajectoryRecord) -> Table {
    let mut t = Table::new(vec!["t".into(), "resolved".into()]);
    for s in &traj.samples {
        let mut row = vec![("t".into(), s.t), ("resolved".into(), s.resolved as u8 as f64)];
        if let Some(inv) = &s.invariants {
            row.extend(inv.named());
            for (k, l) in inv.per_level.iter().enumerate() {
                row.push((format!("sigma_{}", k + 1), l.sigma));
                row.push((format!("ell_{}", k + 1), l.ell));
            }
        }
        for (sv, name) in AUDIT_S {
            row.push((name.into(), sobolev_norm(&s.state, sv)));
        }
        if let Some(r) = s.pole_radius {
            row.push(("pole_radius".into(), r));
        }
        row.push(("tail".into(), s.tail));
        t.push_named(&row);
    }
    t
}

/// Columns `t, rho_j, sigma_k, gap, k_min, half_gap, psi{k}_re{j}, …`.
pub fn spectral_table(traj: &TrajectoryRecord) -> Table {
    let mut t = Table::new(vec!["t".into()]);
    for s in &traj.samples {
        let Some(spec) = &s.spectral else { continue };
        let rho: Vec<f64> = spec.h_eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        let sig: Vec<f64> = spec.k_eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        let mut row = vec![("t".into(), s.t)];
        row.extend(rho.iter().enumerate().map(|(j, &r)| (format!("rho_{}", j + 1), r)));
        row.extend(sig.iter().enumerate().map(|(j, &r)| (format!("sigma_{}", j + 1), r)));
        let gap = rho
            .iter()
            .flat_map(|r| sig.iter().map(move |s| (r - s).abs()))
            .fold(f64::INFINITY, f64::min);
        if gap.is_finite() {
            row.push(("gap".into(), gap));
        }
        if let Some(&k) = sig.last() {
            row.push(("k_min".into(), k));
        }
        if let Some(h) = spec.half_top_gap() {
            row.push(("half_gap".into(), h));
        }
        for (k, (_, zeros)) in spec.blaschke_zeros.iter().enumerate() {
            for (j, z) in zeros.iter().enumerate() {
                row.push((format!("psi{}_re{}", k + 1, j + 1), z.re));
                row.push((format!("psi{}_im{}", k + 1, j + 1), z.im));
            }
        }
        t.push_named(&row);
    }
    t
}

/// Standard trajectory, invariant and spectral tables.
pub(crate) fn standard_tables(traj: &TrajectoryRecord) -> Vec<(String, Table)> {
    vec![
        ("trajectory".into(), trajectory_table(traj, 16)),
        ("invariants".into(), invariant_table(traj)),
        ("spectral".into(), spectral_table(traj)),
    ]
}

/// Runs `scenario` with `overrides` (flags already merged over any config
/// file) and writes all outputs into `out_dir`.
pub fn run_scenario(scenario: Scenario, overrides: Overrides, out_dir: &Path) -> Result<Summary> {
    let settings = overrides.resolve(scenario);
    std::fs::create_dir_all(out_dir)?;
    let out = scenarios::run(scenario, &settings)?;
    let mut tables = std::collections::BTreeMap::new();
    for (name, table) in out.tables {
        table.write(&out_dir.join(format!("{name}.csv")))?;
        tables.insert(name, table);
    }
    std::fs::write(out_dir.join("events.json"), serde_json::to_string_pretty(&out.events)?)?;
    let mut checks = out.checks;
    for c in &mut checks {
        c.reevaluate(&tables);
    }
    let mut summary = Summary {
        schema_version: SCHEMA_VERSION,
        scenario,
        settings,
        checks,
        passed: 0,
        failed: 0,
        report: out.report,
    };
    summary.recount();
    std::fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

/// Re-evaluates every check of a finished run from its stored tables.
pub fn check_run(dir: &Path) -> Result<Summary> {
    let mut summary: Summary = serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json"))?)?;
    if summary.schema_version != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "summary schema {} (expected {SCHEMA_VERSION})",
            summary.schema_version
        )));
    }
    let tables = tables::load_tables(dir)?;
    for c in &mut summary.checks {
        c.reevaluate(&tables);
    }
    summary.recount();
    Ok(summary)
}
