use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::Pattern;
use crate::error::{Error, Result};
use crate::eval::{evaluate, Graph};
use crate::wdtree::k_approximate;

pub struct BenchQuery {
    pub name: String,
    pub pattern: Pattern,
}

pub struct Dataset<'a> {
    pub name: String,
    pub graph: &'a Graph,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub query: String,
    pub dataset: String,
    pub triples: usize,
    pub k: usize,
    pub opt_count: Option<usize>,
    pub answers: Option<usize>,
    pub median_ms: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub repeats: usize,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn extend(&mut self, other: BenchReport) {
        self.repeats = self.repeats.max(other.repeats);
        self.rows.extend(other.rows);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// (query, dataset, k, answers) with times dropped, for determinism checks.
    pub fn answer_counts(&self) -> Vec<(String, String, usize, Option<usize>)> {
        self.rows
            .iter()
            .map(|r| (r.query.clone(), r.dataset.clone(), r.k, r.answers))
            .collect()
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn row_skeleton(q: &BenchQuery, ds: &Dataset<'_>, k: usize) -> BenchRow {
    BenchRow {
        query: q.name.clone(),
        dataset: ds.name.clone(),
        triples: ds.graph.len(),
        k,
        opt_count: None,
        answers: None,
        median_ms: None,
        error: None,
    }
}

/// Evaluates `P^(k)` for every query and k, one warm-up run then the median of
/// `repeats` timed runs. A failing row records its error and the run goes on.
pub fn run_workload(queries: &[BenchQuery], ds: &Dataset<'_>, ks: &[usize], repeats: usize) -> BenchReport {
    let repeats = repeats.max(1);
    let mut rows = Vec::new();
    for q in queries {
        for &k in ks {
            let mut row = row_skeleton(q, ds, k);
            match k_approximate(&q.pattern, k) {
                Err(e) => row.error = Some(e.to_string()),
                Ok(approx) => {
                    row.opt_count = Some(approx.opt_count());
                    let answers = evaluate(&approx, ds.graph).len();
                    let times = (0..repeats)
                        .map(|_| {
                            let start = Instant::now();
                            std::hint::black_box(evaluate(&approx, ds.graph));
                            start.elapsed().as_secs_f64() * 1e3
                        })
                        .collect();
                    row.answers = Some(answers);
                    row.median_ms = Some(median(times));
                }
            }
            rows.push(row);
        }
    }
    BenchReport { repeats, rows }
}

/// Answer counts only, rows spread over `threads` workers sharing the graph.
pub fn count_answers_parallel(queries: &[BenchQuery], ds: &Dataset<'_>, ks: &[usize], threads: usize) -> BenchReport {
    let jobs: Vec<(&BenchQuery, usize)> = queries.iter().flat_map(|q| ks.iter().map(move |&k| (q, k))).collect();
    let threads = threads.clamp(1, jobs.len().max(1));
    let chunk = jobs.len().div_ceil(threads).max(1);
    let rows = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|&(q, k)| {
                            let mut row = row_skeleton(q, ds, k);
                            match k_approximate(&q.pattern, k) {
                                Err(e) => row.error = Some(e.to_string()),
                                Ok(approx) => {
                                    row.opt_count = Some(approx.opt_count());
                                    row.answers = Some(evaluate(&approx, ds.graph).len());
                                }
                            }
                            row
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("bench worker panicked"))
            .collect()
    });
    BenchReport { repeats: 0, rows }
}
