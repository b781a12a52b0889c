//! Corpus scans: filter graphs by odd girth, compute the measure, and
//! summarise per vertex count.
//!
//! Work is split into fixed-size chunks processed on a `jobs`-thread pool.
//! Every chunk is reduced on its own and partial results are merged in
//! input order, so the summary does not depend on the thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::bound_entries;
use crate::error::{require_odd_k, Error, Result};
use crate::graph::{enumerate_labeled_graphs, odd_girth, Graph};
use crate::graph6::{encode_graph6, parse_graph6};
use crate::spectral::{bipartiteness_measure, eigenvalues};

const CHUNK: usize = 4096;

/// One summary row per vertex count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub k: usize,
    /// Graphs on `n` vertices read from the input.
    pub graphs_scanned: u64,
    /// Of those, graphs with odd girth at least `k`.
    pub eligible: u64,
    pub max_measure: Option<f64>,
    pub argmax_graph6: Option<String>,
    /// 1-based input line (file scans) or edge bitmask (enumeration).
    pub argmax_index: Option<u64>,
    /// The bound attaining the smallest slack over all eligible graphs.
    pub tightest_bound: Option<String>,
    pub tightest_value: Option<f64>,
    pub min_slack: Option<f64>,
    /// Eligible graphs whose measure exceeds an applicable bound.
    pub violations: u64,
}

pub const CSV_HEADER: &str =
    "n,k,graphs_scanned,eligible,max_measure,argmax_graph6,argmax_index,tightest_bound,tightest_value,min_slack,violations";

impl ScanRow {
    fn empty(n: usize, k: usize) -> Self {
        ScanRow {
            n,
            k,
            graphs_scanned: 0,
            eligible: 0,
            max_measure: None,
            argmax_graph6: None,
            argmax_index: None,
            tightest_bound: None,
            tightest_value: None,
            min_slack: None,
            violations: 0,
        }
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.graphs_scanned,
            self.eligible,
            opt(self.max_measure),
            self.argmax_graph6.as_deref().unwrap_or(""),
            self.argmax_index.map(|i| i.to_string()).unwrap_or_default(),
            self.tightest_bound.as_deref().unwrap_or(""),
            opt(self.tightest_value),
            opt(self.min_slack),
            self.violations
        )
    }

    /// Folds `later` (covering inputs after `self`) into `self`. Ties keep
    /// the earlier input.
    fn merge(&mut self, later: ScanRow) {
        self.graphs_scanned += later.graphs_scanned;
        self.eligible += later.eligible;
        self.violations += later.violations;
        if let Some(m) = later.max_measure {
            if self.max_measure.is_none_or(|cur| m > cur) {
                self.max_measure = Some(m);
                self.argmax_graph6 = later.argmax_graph6;
                self.argmax_index = later.argmax_index;
            }
        }
        if let Some(s) = later.min_slack {
            if self.min_slack.is_none_or(|cur| s < cur) {
                self.min_slack = Some(s);
                self.tightest_bound = later.tightest_bound;
                self.tightest_value = later.tightest_value;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedInput {
    /// 1-based line number, or edge bitmask for enumeration.
    pub index: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub k: usize,
    pub rows: Vec<ScanRow>,
    pub malformed: Vec<SkippedInput>,
    /// Graphs the eigensolver failed on.
    pub numeric_failures: Vec<SkippedInput>,
}

impl ScanSummary {
    pub fn max_measure(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.max_measure)
            .reduce(f64::max)
    }

    pub fn total_violations(&self) -> u64 {
        self.rows.iter().map(|r| r.violations).sum()
    }
}

#[derive(Default)]
struct Partial {
    rows: BTreeMap<usize, ScanRow>,
    malformed: Vec<SkippedInput>,
    numeric_failures: Vec<SkippedInput>,
}

impl Partial {
    fn merge(&mut self, later: Partial) {
        for (n, row) in later.rows {
            match self.rows.get_mut(&n) {
                Some(cur) => cur.merge(row),
                None => {
                    self.rows.insert(n, row);
                }
            }
        }
        self.malformed.extend(later.malformed);
        self.numeric_failures.extend(later.numeric_failures);
    }

    fn record(&mut self, g: &Graph, index: u64, k: usize) {
        let row = self
            .rows
            .entry(g.n())
            .or_insert_with(|| ScanRow::empty(g.n(), k));
        row.graphs_scanned += 1;
        if !odd_girth(g).at_least(k) || g.n() == 0 {
            return;
        }
        let spectrum = match eigenvalues(g) {
            Ok(s) => s,
            Err(e) => {
                self.numeric_failures.push(SkippedInput {
                    index,
                    reason: e.to_string(),
                });
                return;
            }
        };
        let row = self.rows.get_mut(&g.n()).expect("row inserted above");
        row.eligible += 1;
        let measure = bipartiteness_measure(&spectrum).expect("n > 0");
        let lambda1 = spectrum.largest().unwrap_or(0.0);
        if row.max_measure.is_none_or(|m| measure > m) {
            row.max_measure = Some(measure);
            row.argmax_graph6 = encode_graph6(g).ok();
            row.argmax_index = Some(index);
        }
        let entries = bound_entries(k, lambda1, g.n(), measure);
        if entries.iter().any(|b| !b.satisfied) {
            row.violations += 1;
        }
        if let Some(tight) = entries.iter().min_by(|a, b| a.slack.total_cmp(&b.slack)) {
            if row.min_slack.is_none_or(|s| tight.slack < s) {
                row.min_slack = Some(tight.slack);
                row.tightest_bound = Some(tight.name.clone());
                row.tightest_value = Some(tight.value);
            }
        }
    }

    fn finish(self, k: usize) -> ScanSummary {
        ScanSummary {
            k,
            rows: self.rows.into_values().collect(),
            malformed: self.malformed,
            numeric_failures: self.numeric_failures,
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} worker threads: {e}")))
}

/// Scans graph6 lines. Blank lines and an optional `>>graph6<<` prefix are
/// ignored; malformed lines are recorded and skipped.
pub fn scan_lines(lines: &[String], k: usize, jobs: usize) -> Result<ScanSummary> {
    require_odd_k(k, 3)?;
    let partials: Vec<Partial> = pool(jobs)?.install(|| {
        lines
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, chunk)| {
                let mut part = Partial::default();
                for (i, line) in chunk.iter().enumerate() {
                    let index = (c * CHUNK + i + 1) as u64;
                    let text = line.trim_end_matches(['\n', '\r']);
                    let text = text.strip_prefix(">>graph6<<").unwrap_or(text);
                    if text.trim().is_empty() {
                        continue;
                    }
                    match parse_graph6(text) {
                        Ok(g) => part.record(&g, index, k),
                        Err(e) => part.malformed.push(SkippedInput {
                            index,
                            reason: e.to_string(),
                        }),
                    }
                }
                part
            })
            .collect()
    });
    Ok(merge_all(partials).finish(k))
}

/// Scans every labeled graph on `n` vertices.
pub fn scan_enumerated(n: usize, k: usize, jobs: usize) -> Result<ScanSummary> {
    require_odd_k(k, 3)?;
    let total = enumerate_labeled_graphs(n)?.len() as u64;
    let chunk = CHUNK as u64;
    let chunks = total.div_ceil(chunk);
    let partials: Result<Vec<Partial>> = pool(jobs)?.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * chunk;
                let mut part = Partial::default();
                for (offset, g) in enumerate_labeled_graphs(n)?
                    .restrict(start..start + chunk)
                    .enumerate()
                {
                    part.record(&g, start + offset as u64, k);
                }
                Ok(part)
            })
            .collect()
    });
    Ok(merge_all(partials?).finish(k))
}

fn merge_all(partials: Vec<Partial>) -> Partial {
    let mut acc = Partial::default();
    for p in partials {
        acc.merge(p);
    }
    acc
}
