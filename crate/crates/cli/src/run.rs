//! Pipeline stages behind each subcommand.

use crate::config::{Scenario, SweepOrbit};
use crate::error::CliError;
use crate::output::{fmt_f64, fmt_time, json_artifact, parse_f64, RunOutput, Table};
use chrono::{DateTime, Duration, NaiveDate, Utc};
use satqkd::orbit::{compute_access_windows, union_duration, AccessInterval, Propagator, EARTH_RADIUS_KM};
use satqkd::qkd::{accumulate_keys, link_samples, EtaSample, KeyMatrix};
use satqkd::sched::{
    delivered_distribution, evaluate, is_feasible, kl_divergence, solve, Distribution, Schedule, SolverKind,
    StrategyKind,
};
use satqkd::{LinkSample, OpticalParams, Trajectory};
use serde_json::json;
use std::collections::{BTreeMap, BTreeSet};

pub fn compute_access(sc: &Scenario) -> Result<Vec<AccessInterval>, CliError> {
    access_for(sc, sc.trajectory.as_ref())
}

fn access_for(sc: &Scenario, traj: &dyn Trajectory) -> Result<Vec<AccessInterval>, CliError> {
    if sc.stations.is_empty() {
        return Ok(Vec::new());
    }
    compute_access_windows(traj, &sc.stations, sc.span, &sc.access).map_err(CliError::model)
}

/// UTC dates touched by the span, in order.
fn span_days(sc: &Scenario) -> Vec<NaiveDate> {
    let first = sc.span.0.date_naive();
    let last = (sc.span.1 - Duration::seconds(1)).date_naive();
    first.iter_days().take_while(|d| *d <= last).collect()
}

pub fn run_access(sc: &Scenario) -> Result<RunOutput, CliError> {
    let access = compute_access(sc)?;
    let step = i64::from(sc.access.step_seconds);

    let mut list =
        Table::new(&["station", "start_utc", "end_utc", "duration_s", "samples", "max_elevation_deg", "min_range_km"]);
    for iv in &access {
        let max_el = iv.samples.iter().map(|s| s.look.elevation).fold(f64::NEG_INFINITY, f64::max);
        let min_rg = iv.samples.iter().map(|s| s.look.slant_range).fold(f64::INFINITY, f64::min);
        list.row([
            sc.stations[iv.station].name.clone(),
            fmt_time(iv.start),
            fmt_time(iv.end),
            iv.duration_seconds().to_string(),
            iv.samples.len().to_string(),
            fmt_f64(max_el),
            fmt_f64(min_rg),
        ]);
    }

    let days = span_days(sc);
    let mut per_day = vec![vec![0i64; sc.stations.len()]; days.len()];
    let mut union_times: Vec<BTreeSet<DateTime<Utc>>> = vec![BTreeSet::new(); days.len()];
    let day_index = |t: DateTime<Utc>| days.iter().position(|d| *d == t.date_naive()).expect("sample inside span");
    for iv in &access {
        for s in &iv.samples {
            let d = day_index(s.time);
            per_day[d][iv.station] += step;
            union_times[d].insert(s.time);
        }
    }
    let mut daily = Table::new(&["date", "station", "duration_s"]);
    let mut daily_union = Vec::new();
    for (d, day) in days.iter().enumerate() {
        for (i, st) in sc.stations.iter().enumerate() {
            daily.row([day.to_string(), st.name.clone(), per_day[d][i].to_string()]);
        }
        let u = union_times[d].len() as i64 * step;
        daily_union.push(u);
        daily.row([day.to_string(), "ALL".to_string(), u.to_string()]);
    }

    let total_union = union_duration(&access);
    let per_station: BTreeMap<&str, i64> = sc
        .stations
        .iter()
        .enumerate()
        .map(|(i, st)| {
            (st.name.as_str(), access.iter().filter(|iv| iv.station == i).map(|iv| iv.duration_seconds()).sum())
        })
        .collect();
    let summary = json!({
        "intervals": access.len(),
        "union_duration_s": total_union,
        "summed_duration_s": access.iter().map(|iv| iv.duration_seconds()).sum::<i64>(),
        "mean_daily_union_s": if days.is_empty() { 0.0 } else { total_union as f64 / days.len() as f64 },
        "daily_union_s": days.iter().zip(&daily_union).map(|(d, u)| (d.to_string(), json!(u))).collect::<serde_json::Map<_, _>>(),
        "per_station_s": per_station,
    });
    Ok(RunOutput {
        subcommand: "access",
        artifacts: vec![
            list.finish("access.csv"),
            daily.finish("access_daily.csv"),
            json_artifact("access_summary.json", &summary),
        ],
    })
}

/// Per-sample link budget for every access sample, in access order.
pub fn compute_links(
    sc: &Scenario,
    access: &[AccessInterval],
    optics: &OpticalParams,
) -> Result<Vec<(usize, LinkSample)>, CliError> {
    link_samples(access, &sc.stations, sc.cloud.as_ref(), optics).map_err(CliError::model)
}

const LINK_HEADER: [&str; 10] =
    ["time_utc", "station", "elevation_deg", "range_km", "geo_db", "atm_db", "cloud_db", "fixed_db", "total_db", "eta"];

pub fn run_linkbudget(sc: &Scenario) -> Result<RunOutput, CliError> {
    let access = compute_access(sc)?;
    let links = compute_links(sc, &access, &sc.config.optics)?;
    let mut t = Table::new(&LINK_HEADER);
    for (station, s) in &links {
        let l = &s.loss;
        t.row([
            fmt_time(s.time),
            sc.stations[*station].name.clone(),
            fmt_f64(s.look.elevation),
            fmt_f64(s.look.slant_range),
            fmt_f64(l.geometric_db),
            fmt_f64(l.atmospheric_db),
            fmt_f64(l.cloud_db),
            fmt_f64(l.fixed_db),
            fmt_f64(l.total_db),
            fmt_f64(l.transmittance),
        ]);
    }
    Ok(RunOutput { subcommand: "linkbudget", artifacts: vec![t.finish("linkbudget.csv")] })
}

/// Transmittance samples recovered from a link-budget CSV.
pub fn parse_linkbudget(sc: &Scenario, text: &str) -> Result<Vec<EtaSample>, CliError> {
    let bad = |line: usize, m: String| CliError::input("linkbudget", format!("line {line}: {m}"));
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != LINK_HEADER {
        return Err(bad(1, format!("expected header {}", LINK_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        let time =
            DateTime::parse_from_rfc3339(&rec[0]).map_err(|e| bad(line, format!("bad time: {e}")))?.with_timezone(&Utc);
        let station = sc
            .stations
            .iter()
            .position(|s| s.name == rec[1])
            .ok_or_else(|| bad(line, format!("unknown station {:?}", &rec[1])))?;
        let eta = parse_f64(&rec[9])
            .filter(|e| (0.0..=1.0).contains(e))
            .ok_or_else(|| bad(line, "eta must lie in [0, 1]".into()))?;
        out.push(EtaSample { station, time, eta });
    }
    Ok(out)
}

fn node_names(sc: &Scenario) -> Vec<String> {
    sc.stations.iter().map(|s| s.name.clone()).collect()
}

pub fn key_matrix_from_samples(sc: &Scenario, samples: &[EtaSample]) -> Result<KeyMatrix, CliError> {
    accumulate_keys(samples, sc.access.step_seconds, node_names(sc), sc.grid, &sc.config.qkd).map_err(CliError::model)
}

/// Key matrix straight from geometry, without an intermediate file.
pub fn compute_key_matrix(sc: &Scenario) -> Result<KeyMatrix, CliError> {
    let access = compute_access(sc)?;
    let samples: Vec<EtaSample> = compute_links(sc, &access, &sc.config.optics)?
        .into_iter()
        .map(|(station, s)| EtaSample { station, time: s.time, eta: s.loss.transmittance })
        .collect();
    key_matrix_from_samples(sc, &samples)
}

pub fn run_keymatrix(sc: &Scenario, linkbudget: Option<&str>) -> Result<RunOutput, CliError> {
    let k = match linkbudget {
        Some(text) => key_matrix_from_samples(sc, &parse_linkbudget(sc, text)?)?,
        None => compute_key_matrix(sc)?,
    };
    let mut t = Table::new(&["interval_index", "node_name", "start_utc", "key_bits"]);
    let days = span_days(sc);
    let mut daily = vec![vec![0.0f64; k.n_nodes()]; days.len()];
    for m in 0..k.n_intervals() {
        let start = k.grid.interval_start(m);
        let d = days.iter().position(|d| *d == start.date_naive()).expect("interval inside span");
        for (n, &v) in k.row(m).iter().enumerate() {
            if v > 0.0 {
                t.row([m.to_string(), k.node_names[n].clone(), fmt_time(start), fmt_f64(v)]);
                daily[d][n] += v;
            }
        }
    }
    let mut dt = Table::new(&["date", "station", "key_bits"]);
    for (d, day) in days.iter().enumerate() {
        for (n, name) in k.node_names.iter().enumerate() {
            dt.row([day.to_string(), name.clone(), fmt_f64(daily[d][n])]);
        }
    }
    let params = json!({ "qkd": sc.config.qkd, "optics": sc.config.optics });
    let meta = json!({
        "grid_start": fmt_time(k.grid.start),
        "interval_seconds": k.grid.interval_seconds,
        "intervals": k.n_intervals(),
        "sample_step_seconds": sc.access.step_seconds,
        "nodes": k.node_names,
        "node_totals_bits": k.node_totals().iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>(),
        "params": params,
        "params_sha256": crate::output::sha256_hex(params.to_string().as_bytes()),
        "layout": "sparse: intervals with zero key for a node are omitted",
    });
    Ok(RunOutput {
        subcommand: "keymatrix",
        artifacts: vec![t.finish("keymatrix.csv"), json_artifact("keymatrix.json", &meta), dt.finish("keys_daily.csv")],
    })
}

/// Outcome of one strategy run.
#[derive(Debug, Clone)]
pub struct StrategyResult {
    pub kind: StrategyKind,
    pub solver: &'static str,
    pub schedule: Schedule,
    pub per_node: Vec<f64>,
    pub total: f64,
    /// Divergence of the delivered distribution from the target; `None` if nothing was delivered.
    pub kl: Option<f64>,
}

fn solver_label(kind: StrategyKind, solver: SolverKind) -> &'static str {
    match (solver, kind) {
        (SolverKind::Auto, StrategyKind::TargetedDelivery) | (SolverKind::Genetic, _) => "genetic",
        (SolverKind::Auto | SolverKind::Exact, _) => "exact",
        (SolverKind::Greedy, _) => "greedy",
    }
}

/// Run every configured strategy on `k`.
pub fn schedule_all(sc: &Scenario, k: &KeyMatrix) -> Result<Vec<StrategyResult>, CliError> {
    let station_weights: Vec<f64> = sc.stations.iter().map(|s| s.weight).collect();
    let mut out = Vec::new();
    for cfg in &sc.strategies {
        let schedule =
            if k.n_nodes() == 0 { Schedule::idle(k.n_intervals()) } else { solve(k, cfg).map_err(CliError::model)? };
        if !is_feasible(&schedule, k.n_intervals(), k.n_nodes(), &cfg.switch) {
            return Err(CliError::Model(format!("{} produced an infeasible schedule", cfg.kind.label())));
        }
        let per_node = evaluate(&schedule, k).map_err(CliError::model)?;
        let total = per_node.iter().sum();
        let target_w = if cfg.weights.is_empty() { &station_weights } else { &cfg.weights };
        let kl = match (delivered_distribution(&schedule, k), Distribution::from_masses(target_w)) {
            (Ok(p), Ok(q)) => Some(kl_divergence(&p, &q)),
            _ => None,
        };
        out.push(StrategyResult {
            kind: cfg.kind,
            solver: solver_label(cfg.kind, cfg.solver),
            schedule,
            per_node,
            total,
            kl,
        });
    }
    Ok(out)
}

fn kl_json(kl: Option<f64>) -> serde_json::Value {
    match kl {
        Some(v) if v.is_finite() => json!(v),
        Some(_) => json!("Inf"),
        None => serde_json::Value::Null,
    }
}

pub fn run_schedule(sc: &Scenario) -> Result<RunOutput, CliError> {
    let k = compute_key_matrix(sc)?;
    let results = schedule_all(sc, &k)?;
    let mut artifacts = Vec::new();
    let mut header = vec!["strategy", "solver", "total_bits", "kl_vs_weights"];
    header.extend(k.node_names.iter().map(String::as_str));
    let mut cmp = Table::new(&header);
    let mut summaries = Vec::new();
    for (r, cfg) in results.iter().zip(&sc.strategies) {
        let mut t = Table::new(&["interval_index", "start_utc", "activity"]);
        for (m, a) in r.schedule.assignment.iter().enumerate() {
            let label = match a {
                satqkd::Activity::Idle => "IDLE".to_string(),
                satqkd::Activity::Switch => "SWITCH".to_string(),
                satqkd::Activity::Node(n) => k.node_names[*n].clone(),
            };
            t.row([m.to_string(), fmt_time(k.grid.interval_start(m)), label]);
        }
        artifacts.push(t.finish(&format!("schedule_{}.csv", r.kind.label())));
        let mut row = vec![
            r.kind.label().to_string(),
            r.solver.to_string(),
            fmt_f64(r.total),
            r.kl.map_or(String::new(), fmt_f64),
        ];
        row.extend(r.per_node.iter().map(|v| fmt_f64(*v)));
        cmp.row(row);
        summaries.push(json!({
            "strategy": r.kind.label(),
            "solver": r.solver,
            "seed": cfg.ga.seed,
            "ga": cfg.ga,
            "kl_tolerance": cfg.kl_tolerance,
            "switch_intervals": cfg.switch.intervals,
            "weights": cfg.weights,
            "per_node_bits": k.node_names.iter().zip(&r.per_node).map(|(n, v)| (n.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "total_bits": r.total,
            "kl_vs_weights": kl_json(r.kl),
        }));
    }
    artifacts.push(cmp.finish("strategy_comparison.csv"));
    artifacts.push(json_artifact("schedule_summary.json", &json!({ "strategies": summaries })));
    Ok(RunOutput { subcommand: "schedule", artifacts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Altitude,
    Divergence,
    Grid,
}

/// One row of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub orbit: String,
    pub altitude_km: f64,
    pub divergence_urad: f64,
    /// Station name or `ALL`.
    pub station: String,
    pub samples: usize,
    pub min_total_db: Option<f64>,
    pub max_total_db: Option<f64>,
    pub visible_s: i64,
}

pub fn compute_sweep(sc: &Scenario, variable: SweepVariable) -> Result<Vec<SweepRow>, CliError> {
    let base_div = sc.config.optics.divergence * 1e6;
    let orbits: Vec<(String, Box<dyn Trajectory>, f64)> = match variable {
        SweepVariable::Divergence => {
            let tle = sc.tle.as_ref().ok_or_else(|| CliError::config("satellite", "sweeps need two-line elements"))?;
            let prop = Propagator::new(tle).map_err(CliError::model)?;
            let alt = prop.semi_major_axis_km() - EARTH_RADIUS_KM;
            vec![("base".to_string(), Box::new(prop), alt)]
        }
        _ => {
            let mut v: Vec<(String, Box<dyn Trajectory>, f64)> = Vec::new();
            for (i, o) in sc.config.sweep.orbits.iter().enumerate() {
                let e = sc.sweep_elements(o)?;
                let prop = if sc.config.satellite.j2 { Propagator::new(&e) } else { Propagator::two_body(&e) };
                let prop = prop.map_err(|err| CliError::config(&format!("sweep.orbits[{i}]"), err.to_string()))?;
                v.push((orbit_label(o), Box::new(prop), o.altitude_km));
            }
            v
        }
    };
    let divergences: Vec<f64> = match variable {
        SweepVariable::Altitude => vec![base_div],
        _ => sc.config.sweep.divergences_urad.clone(),
    };
    let mut rows = Vec::new();
    for (label, traj, alt) in &orbits {
        let access = access_for(sc, traj.as_ref())?;
        let union = union_duration(&access);
        for &d in &divergences {
            let optics = OpticalParams { divergence: d * 1e-6, ..sc.config.optics };
            let links = compute_links(sc, &access, &optics)?;
            let mut stats: Vec<(usize, f64, f64)> = vec![(0, f64::INFINITY, f64::NEG_INFINITY); sc.stations.len()];
            for (st, s) in &links {
                let e = &mut stats[*st];
                e.0 += 1;
                e.1 = e.1.min(s.loss.total_db);
                e.2 = e.2.max(s.loss.total_db);
            }
            let row = |station: String, (n, lo, hi): (usize, f64, f64), visible: i64| SweepRow {
                orbit: label.clone(),
                altitude_km: *alt,
                divergence_urad: d,
                station,
                samples: n,
                min_total_db: (n > 0).then_some(lo),
                max_total_db: (n > 0).then_some(hi),
                visible_s: visible,
            };
            for (i, st) in sc.stations.iter().enumerate() {
                let visible = access.iter().filter(|iv| iv.station == i).map(|iv| iv.duration_seconds()).sum();
                rows.push(row(st.name.clone(), stats[i], visible));
            }
            let all = stats
                .iter()
                .fold((0, f64::INFINITY, f64::NEG_INFINITY), |a, s| (a.0 + s.0, a.1.min(s.1), a.2.max(s.2)));
            rows.push(row("ALL".to_string(), all, union));
        }
    }
    Ok(rows)
}

fn orbit_label(o: &SweepOrbit) -> String {
    o.label.clone().unwrap_or_else(|| format!("{}km", fmt_f64(o.altitude_km)))
}

pub fn run_sweep(sc: &Scenario, variable: SweepVariable) -> Result<RunOutput, CliError> {
    let rows = compute_sweep(sc, variable)?;
    let mut t = Table::new(&[
        "orbit",
        "altitude_km",
        "divergence_urad",
        "station",
        "samples",
        "min_total_db",
        "max_total_db",
        "visible_s",
    ]);
    for r in &rows {
        t.row([
            r.orbit.clone(),
            fmt_f64(r.altitude_km),
            fmt_f64(r.divergence_urad),
            r.station.clone(),
            r.samples.to_string(),
            r.min_total_db.map_or(String::new(), fmt_f64),
            r.max_total_db.map_or(String::new(), fmt_f64),
            r.visible_s.to_string(),
        ]);
    }
    let name = match variable {
        SweepVariable::Altitude => "sweep_altitude.csv",
        SweepVariable::Divergence => "sweep_divergence.csv",
        SweepVariable::Grid => "sweep_grid.csv",
    };
    Ok(RunOutput { subcommand: "sweep", artifacts: vec![t.finish(name)] })
}
