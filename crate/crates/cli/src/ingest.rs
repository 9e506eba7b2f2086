//! Estimating a symbol law from real categorical data.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use advmatch_core::probability::{adv_capacity, collision_param, random_capacity};
use advmatch_core::AlphabetDistribution;

use crate::commands::CAVEAT;
use crate::error::{CliError, Result};
use crate::output::{csv_writer, num};

#[derive(Debug, Clone)]
pub struct IngestReport {
    pub rows: u64,
    pub columns: usize,
    /// Empty cells, left out of the counts.
    pub skipped: u64,
    /// Distinct values in sorted order; value `i` is symbol `i + 1`.
    pub values: Vec<String>,
    pub counts: Vec<u64>,
    pub dist: AlphabetDistribution,
}

/// Pools the named columns of a headed CSV into one frequency table.
pub fn estimate<R: Read>(input: R, names: &[String], max_distinct: usize) -> Result<IngestReport> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    let mut picked = Vec::with_capacity(names.len());
    for name in names {
        let idx = header
            .iter()
            .position(|h| h.trim() == name.trim())
            .ok_or_else(|| CliError::config("columns", format!("no column named `{name}`")))?;
        if picked.contains(&idx) {
            return Err(CliError::config(
                "columns",
                format!("`{name}` selected twice"),
            ));
        }
        picked.push(idx);
    }
    let mut freq: BTreeMap<String, u64> = BTreeMap::new();
    let (mut rows, mut skipped) = (0u64, 0u64);
    for record in reader.records() {
        let record = record?;
        rows += 1;
        for &idx in &picked {
            let v = record.get(idx).unwrap_or("").trim();
            if v.is_empty() {
                skipped += 1;
                continue;
            }
            if let Some(c) = freq.get_mut(v) {
                *c += 1;
            } else {
                if freq.len() == max_distinct {
                    return Err(CliError::config(
                        "max_distinct",
                        format!("more than {max_distinct} distinct values; the columns do not look categorical"),
                    ));
                }
                freq.insert(v.to_owned(), 1);
            }
        }
    }
    if rows == 0 {
        return Err(CliError::config("input", "no data rows"));
    }
    if freq.len() < 2 {
        return Err(CliError::config(
            "columns",
            format!("{} distinct value(s); at least two are needed", freq.len()),
        ));
    }
    let (values, counts): (Vec<String>, Vec<u64>) = freq.into_iter().unzip();
    Ok(IngestReport {
        rows,
        columns: picked.len(),
        skipped,
        dist: AlphabetDistribution::from_counts(&counts)?,
        values,
        counts,
    })
}

impl IngestReport {
    /// `log2(rows) / columns`: the growth rate of a database shaped like the
    /// input.
    pub fn rate(&self) -> f64 {
        (self.rows as f64).log2() / self.columns as f64
    }

    /// `key = value` lines, the caveat, a blank line, then the capacity
    /// curve as CSV.
    pub fn write<W: Write>(&self, mut w: W, deltas: &[f64]) -> Result<()> {
        let qhat = collision_param(&self.dist);
        writeln!(w, "rows = {}", self.rows)?;
        writeln!(w, "columns = {}", self.columns)?;
        writeln!(w, "skipped_cells = {}", self.skipped)?;
        writeln!(w, "symbols = {}", self.values.len())?;
        writeln!(w, "distribution = {}", self.dist)?;
        writeln!(w, "qhat = {}", num(qhat))?;
        writeln!(w, "zero_capacity_budget = {}", num(1.0 - qhat))?;
        writeln!(w, "rate = {}", num(self.rate()))?;
        writeln!(w, "caveat = {CAVEAT}")?;
        writeln!(w)?;
        let mut csv = csv_writer(&mut w);
        csv.write_record([
            "delta",
            "adv_capacity_bits",
            "random_capacity_bits",
            "margin",
        ])?;
        for &d in deltas {
            let adv = adv_capacity(&self.dist, d);
            csv.write_record([
                num(d),
                num(adv),
                num(random_capacity(&self.dist, d)),
                num(self.rate() - adv),
            ])?;
        }
        csv.flush()?;
        Ok(())
    }
}
