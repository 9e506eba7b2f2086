use std::fs;
use std::io::Write;
use std::path::Path;

use advmatch_core::adversary::StrategyKind;
use advmatch_core::experiments::{
    build_instance, capacity_curve, histogram_uniqueness_study, run_trials,
    run_vulnerability_trials, summarize, RowCount, TrialConfig,
};
use advmatch_core::generator::DEFAULT_MEMORY_CAP;
use advmatch_core::Error;

use crate::error::{CliError, Result};
use crate::grid::Grid;
use crate::output::{csv_writer, flag, num, sink};
use crate::settings::Settings;

pub const CAPACITY_KEYS: &[&str] = &["dist", "delta", "output", "workers"];
pub const SIMULATE_KEYS: &[&str] = &[
    "dist",
    "n",
    "rate",
    "rows",
    "delta",
    "strategy",
    "trials",
    "seed",
    "row_sample",
    "memory_cap",
    "exhaustive_budget",
    "pair_scan_limit",
    "sampled_pairs",
    "workers",
    "output",
    "save_db",
];
pub const SWEEP_KEYS: &[&str] = &[
    "dist",
    "n",
    "rate",
    "rows",
    "delta",
    "strategy",
    "trials",
    "seed",
    "row_sample",
    "memory_cap",
    "exhaustive_budget",
    "pair_scan_limit",
    "sampled_pairs",
    "workers",
    "output",
];
pub const VULNERABILITY_KEYS: &[&str] = &[
    "dist",
    "n",
    "rate",
    "rows",
    "delta",
    "trials",
    "seed",
    "row_sample",
    "memory_cap",
    "workers",
    "output",
];
pub const HISTOGRAM_KEYS: &[&str] = &[
    "dist",
    "n",
    "rows",
    "trials",
    "seed",
    "memory_cap",
    "workers",
    "output",
];
pub const INGEST_KEYS: &[&str] = &[
    "input",
    "columns",
    "delta",
    "max_distinct",
    "output",
    "workers",
];

pub const DEFAULT_DELTA_GRID: &str = "0:1:0.05";
pub const DEFAULT_MAX_DISTINCT: usize = 10_000;

pub const CAVEAT: &str = "the selected columns are pooled into a single law and treated as \
     independent; real attributes are usually dependent, so these capacities describe an \
     idealized database with the same symbol frequencies, not a guarantee for this one";

fn delta_grid(s: &Settings) -> Result<Vec<f64>> {
    let grid = match &s.delta {
        Some(g) => g.clone(),
        None => DEFAULT_DELTA_GRID.parse()?,
    };
    if let Some(&bad) = grid.values().iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(CliError::config(
            "delta",
            format!("{bad} is outside [0, 1]"),
        ));
    }
    Ok(grid.values().to_vec())
}

pub fn capacity(s: &Settings) -> Result<()> {
    s.only("capacity", CAPACITY_KEYS)?;
    let dist = Settings::require(&s.dist, "dist")?;
    let deltas = delta_grid(s)?;
    let mut w = csv_writer(sink(s.output.as_deref())?);
    w.write_record([
        "delta",
        "adv_capacity_bits",
        "random_capacity_bits",
        "qhat",
        "threshold",
    ])?;
    for row in capacity_curve(dist, &deltas) {
        w.write_record([
            num(row.point.delta),
            num(row.point.adv_bits),
            num(row.point.random_bits),
            num(row.qhat),
            num(row.threshold),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn integers(grid: &Grid, key: &str) -> Result<Vec<u64>> {
    grid.integers()
        .ok_or_else(|| CliError::config(key, "expected whole numbers"))
}

/// Every combination of columns, row count, budget and strategy, in that
/// nesting order.
fn cells(s: &Settings) -> Result<Vec<TrialConfig>> {
    let dist = Settings::require(&s.dist, "dist")?;
    let ns = integers(Settings::require(&s.n, "n")?, "n")?;
    if ns.contains(&0) {
        return Err(CliError::config("n", "column count must be positive"));
    }
    let rows: Vec<RowCount> = match (&s.rate, &s.rows) {
        (Some(_), Some(_)) => {
            return Err(CliError::config(
                "rows",
                "give either `rate` or `rows`, not both",
            ))
        }
        (Some(r), None) => r.values().iter().map(|&r| RowCount::Rate(r)).collect(),
        (None, Some(m)) => integers(m, "rows")?
            .into_iter()
            .map(RowCount::Explicit)
            .collect(),
        (None, None) => {
            return Err(CliError::config(
                "rate",
                "one of `rate` or `rows` is required",
            ))
        }
    };
    let deltas = Settings::require(&s.delta, "delta")?.values().to_vec();
    if let Some(&bad) = deltas.iter().find(|d| !(0.0..=1.0).contains(*d)) {
        return Err(CliError::config(
            "delta",
            format!("{bad} is outside [0, 1]"),
        ));
    }
    let kinds = match &s.strategy {
        Some(list) => list.0.clone(),
        None => vec![StrategyKind::MinPair],
    };
    if s.trials == Some(0) {
        return Err(CliError::config("trials", "must be positive"));
    }
    if s.row_sample == Some(0) {
        return Err(CliError::config("row_sample", "must be positive"));
    }
    let mut out = Vec::new();
    for &n in &ns {
        for &r in &rows {
            for &delta in &deltas {
                for &kind in &kinds {
                    let mut cfg = TrialConfig::new(dist.clone(), n as usize, r, delta)
                        .with_strategy(kind)
                        .with_trials(s.trials.unwrap_or(1))
                        .with_seed(s.seed.unwrap_or(0))
                        .with_row_sample(s.row_sample);
                    cfg.memory_cap = s.memory_cap.unwrap_or(DEFAULT_MEMORY_CAP);
                    if let Some(b) = s.exhaustive_budget {
                        cfg.strategy.exhaustive_budget = b;
                    }
                    if let Some(l) = s.pair_scan_limit {
                        cfg.strategy.pair_scan_limit = l;
                    }
                    if let Some(p) = s.sampled_pairs {
                        cfg.strategy.sampled_pairs = p;
                    }
                    out.push(cfg);
                }
            }
        }
    }
    Ok(out)
}

/// Validation failures other than resource limits are configuration errors
/// and stop the run before anything is computed.
fn check_cells(cells: &[TrialConfig]) -> Result<()> {
    for cfg in cells {
        match cfg.validate() {
            Ok(()) | Err(Error::Capacity(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn single(cells: Vec<TrialConfig>, command: &str) -> Result<TrialConfig> {
    if cells.len() != 1 {
        return Err(CliError::config(
            "n",
            format!(
                "`{command}` runs one cell but the grids give {}; use `sweep`",
                cells.len()
            ),
        ));
    }
    let cfg = cells.into_iter().next().expect("one cell");
    cfg.validate()?;
    Ok(cfg)
}

fn note_heuristic(kind: StrategyKind, trials: usize) {
    if trials > 0 {
        eprintln!("note: {kind} used sampled pair search (heuristic) in {trials} trial(s)");
    }
}

pub fn simulate(s: &Settings) -> Result<()> {
    s.only("simulate", SIMULATE_KEYS)?;
    let cfg = single(cells(s)?, "simulate")?;
    if let Some(s) = &s.strategy {
        if s.0.len() > 1 {
            return Err(CliError::config(
                "strategy",
                "`simulate` takes one strategy",
            ));
        }
    }
    let outcomes = run_trials(&cfg)?;
    if let Some(dir) = &s.save_db {
        save_instances(&cfg, dir)?;
    }
    let (rate_eff, delta_eff) = (cfg.rate_eff()?, cfg.delta_eff()?);
    let mut w = csv_writer(sink(s.output.as_deref())?);
    w.write_record([
        "n",
        "m",
        "rate_eff",
        "delta_eff",
        "strategy",
        "trial",
        "error_fraction",
        "detection_error",
        "collided_rows",
        "vulnerable_fraction",
        "seed",
    ])?;
    for o in &outcomes {
        w.write_record([
            cfg.n.to_string(),
            o.m.to_string(),
            num(rate_eff),
            num(delta_eff),
            cfg.strategy.kind.to_string(),
            o.trial.to_string(),
            num(o.error_fraction),
            flag(o.detection_error).to_owned(),
            o.collided_rows.to_string(),
            num(o.vulnerable_fraction),
            cfg.master_seed.to_string(),
        ])?;
    }
    w.flush()?;
    note_heuristic(
        cfg.strategy.kind,
        outcomes.iter().filter(|o| o.heuristic).count(),
    );
    Ok(())
}

/// Writes `trial-T.d1.txt`, `trial-T.d2.txt` and `trial-T.truth.txt` for each
/// trial. Truth holds the 1-based labeling (row `i` of D1 is row `labeling[i]`
/// of D2) and the 1-based deleted columns.
fn save_instances(cfg: &TrialConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    for t in 0..cfg.trials {
        let inst = build_instance(cfg, t)?;
        let write = |name: String, body: String| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| CliError::io(path, e))
        };
        write(format!("trial-{t}.d1.txt"), inst.d1.to_text())?;
        write(format!("trial-{t}.d2.txt"), inst.d2.to_text())?;
        let join = |v: Vec<usize>| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let labeling = join(inst.labeling.forward().iter().map(|i| i + 1).collect());
        let pattern = join(inst.chosen.pattern.one_based());
        write(
            format!("trial-{t}.truth.txt"),
            format!("labeling = {labeling}\npattern = {pattern}\n"),
        )?;
    }
    Ok(())
}

pub fn sweep(s: &Settings) -> Result<()> {
    s.only("sweep", SWEEP_KEYS)?;
    let grid = cells(s)?;
    check_cells(&grid)?;
    let mut w = csv_writer(sink(s.output.as_deref())?);
    w.write_record([
        "n",
        "m",
        "rate_eff",
        "delta_eff",
        "strategy",
        "trials",
        "err_mean",
        "err_stderr",
        "vuln_mean",
        "vuln_stderr",
        "det_err_rate",
        "C_adv",
        "C_random",
        "margin",
    ])?;
    let mut first_failure = None;
    let mut failures = 0;
    for cfg in &grid {
        let result = run_trials(cfg).and_then(|outs| summarize(cfg, &outs));
        let cell = match result {
            Ok(c) => c,
            Err(e) => {
                eprintln!(
                    "cell n={} rows={:?} delta={} strategy={} failed: {e}",
                    cfg.n, cfg.rows, cfg.delta, cfg.strategy.kind
                );
                let opt = |v: advmatch_core::Result<f64>| v.map(num).unwrap_or_default();
                w.write_record([
                    cfg.n.to_string(),
                    cfg.row_count().map(|m| m.to_string()).unwrap_or_default(),
                    opt(cfg.rate_eff()),
                    opt(cfg.delta_eff()),
                    cfg.strategy.kind.to_string(),
                    "0".to_owned(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ])?;
                failures += 1;
                first_failure.get_or_insert(e);
                continue;
            }
        };
        if cell.heuristic {
            eprintln!(
                "note: cell n={} m={} used sampled pair search (heuristic)",
                cell.n, cell.m
            );
        }
        w.write_record([
            cell.n.to_string(),
            cell.m.to_string(),
            num(cell.rate_eff),
            num(cell.delta_eff),
            cell.strategy.to_string(),
            cell.trials.to_string(),
            num(cell.error.mean()),
            num(cell.error.stderr()),
            num(cell.vulnerable.mean()),
            num(cell.vulnerable.stderr()),
            num(cell.detection_error_rate),
            num(cell.c_adv),
            num(cell.c_random),
            num(cell.margin),
        ])?;
    }
    w.flush()?;
    match first_failure {
        Some(e) if failures == grid.len() => Err(e.into()),
        _ => Ok(()),
    }
}

pub fn vulnerability(s: &Settings) -> Result<()> {
    s.only("vulnerability", VULNERABILITY_KEYS)?;
    let grid = cells(s)?;
    for cfg in &grid {
        cfg.validate()?;
    }
    let mut w = csv_writer(sink(s.output.as_deref())?);
    w.write_record([
        "n",
        "m",
        "rate_eff",
        "delta_eff",
        "trial",
        "vulnerable_fraction",
        "seed",
    ])?;
    for cfg in &grid {
        let (rate_eff, delta_eff) = (cfg.rate_eff()?, cfg.delta_eff()?);
        for o in run_vulnerability_trials(cfg)? {
            w.write_record([
                cfg.n.to_string(),
                o.m.to_string(),
                num(rate_eff),
                num(delta_eff),
                o.trial.to_string(),
                num(o.vulnerable_fraction),
                cfg.master_seed.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn histogram_study(s: &Settings) -> Result<()> {
    s.only("histogram-study", HISTOGRAM_KEYS)?;
    let dist = Settings::require(&s.dist, "dist")?;
    let n = match integers(Settings::require(&s.n, "n")?, "n")?.as_slice() {
        &[n] if n >= 2 => n as usize,
        _ => {
            return Err(CliError::config(
                "n",
                "expected one column count of at least 2",
            ))
        }
    };
    let ms = integers(Settings::require(&s.rows, "rows")?, "rows")?;
    let trials = s.trials.unwrap_or(100);
    if trials == 0 {
        return Err(CliError::config("trials", "must be positive"));
    }
    let rows = histogram_uniqueness_study(
        n,
        &ms,
        dist,
        trials,
        s.seed.unwrap_or(0),
        s.memory_cap.unwrap_or(DEFAULT_MEMORY_CAP),
    )?;
    let mut w = csv_writer(sink(s.output.as_deref())?);
    w.write_record([
        "n",
        "m",
        "alphabet",
        "trials",
        "dup_prob_emp",
        "dup_prob_stderr",
        "bound_exact",
        "scaling_ref",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.m.to_string(),
            r.alphabet.to_string(),
            r.trials.to_string(),
            num(r.dup_prob),
            num(r.dup_prob_stderr),
            r.bound_exact.map(num).unwrap_or_default(),
            num(r.scaling_ref),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn ingest(s: &Settings) -> Result<()> {
    s.only("ingest", INGEST_KEYS)?;
    let path = Settings::require(&s.input, "input")?;
    let names = &Settings::require(&s.columns, "columns")?.0;
    let max_distinct = s.max_distinct.unwrap_or(DEFAULT_MAX_DISTINCT);
    let deltas = delta_grid(s)?;
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let report = crate::ingest::estimate(file, names, max_distinct)?;
    let mut out = sink(s.output.as_deref())?;
    report.write(&mut out, &deltas)?;
    out.flush()?;
    Ok(())
}
