//! Exhaustive desk-scale validation: enumerate labeled graphs, classify
//! each with both methods, and aggregate the (expected-empty) mismatch
//! list.

use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::building::Budget;
use crate::classify::{classify, ClassifyError, Method};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("node count {0} out of range 1..=8")]
    BadNodeCount(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("corpus line {line}: {source}")]
    CorpusLine { line: usize, source: GraphError },
}

/// One graph on which the two classification routes disagreed. Any
/// entry is an implementation bug, never a mathematical finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub graph6: String,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CensusReport {
    pub n: Option<usize>,
    pub graphs_total: usize,
    pub graphs_connected: usize,
    pub graphs_classified: usize,
    pub fano_count: usize,
    pub weak_fano_count: usize,
    pub neither_count: usize,
    pub mismatches: Vec<Mismatch>,
    /// graph6 of graphs whose wall computation ran out of budget;
    /// recorded, never silently skipped.
    pub budget_exceeded: Vec<String>,
    pub runtime_ms: u128,
}

/// Edge bit order shared with graph6: (1,2),(1,3),(2,3),(1,4),...
pub fn graph_from_edge_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for j in 2..=n {
        for i in 1..j {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::new(n, &edges).expect("generated edges are valid")
}

/// All labeled graphs on n nodes, by ascending edge mask.
pub fn all_labeled_graphs(
    n: usize,
    connected_only: bool,
) -> Result<impl Iterator<Item = Graph>, CensusError> {
    if n < 1 || n > 8 {
        return Err(CensusError::BadNodeCount(n));
    }
    let bits = n * (n - 1) / 2;
    Ok((0u64..1u64 << bits)
        .map(move |mask| graph_from_edge_mask(n, mask))
        .filter(move |g| !connected_only || g.is_connected()))
}

fn census_over(
    graphs: Vec<Graph>,
    n: Option<usize>,
    graphs_total: usize,
    budget: Budget,
) -> CensusReport {
    let start = Instant::now();
    let graphs_connected = graphs.iter().filter(|g| g.is_connected()).count();
    // Parallel classification; results collected in input order so the
    // report is deterministic regardless of scheduling.
    let results: Vec<(String, Result<crate::classify::Classification, ClassifyError>)> = graphs
        .par_iter()
        .map(|g| (g.to_graph6(), classify(g, Method::Both, budget)))
        .collect();
    let mut fano_count = 0;
    let mut weak_fano_count = 0;
    let mut neither_count = 0;
    let mut classified = 0;
    let mut mismatches = Vec::new();
    let mut budget_exceeded = Vec::new();
    for (g6, res) in results {
        match res {
            Ok(c) => {
                classified += 1;
                if c.fano {
                    fano_count += 1;
                }
                if c.weak_fano {
                    weak_fano_count += 1;
                } else {
                    neither_count += 1;
                }
            }
            Err(e) if e.is_budget_exceeded() => budget_exceeded.push(g6),
            Err(e) => mismatches.push(Mismatch { graph6: g6, detail: e.to_string() }),
        }
    }
    CensusReport {
        n,
        graphs_total,
        graphs_connected,
        graphs_classified: classified,
        fano_count,
        weak_fano_count,
        neither_count,
        mismatches,
        budget_exceeded,
        runtime_ms: start.elapsed().as_millis(),
    }
}

/// Runs classify(both) over every labeled graph on n nodes (optionally
/// connected only) and aggregates the census.
pub fn cross_validate(
    n: usize,
    connected_only: bool,
    budget: Budget,
) -> Result<CensusReport, CensusError> {
    let bits = if n >= 1 && n <= 8 { n * (n - 1) / 2 } else { 0 };
    let graphs: Vec<Graph> = all_labeled_graphs(n, connected_only)?.collect();
    Ok(census_over(graphs, Some(n), 1usize << bits, budget))
}

/// Parses a graph6 corpus: one graph per line, '#' comments and blank
/// lines ignored.
pub fn parse_corpus(text: &str) -> Result<Vec<Graph>, CensusError> {
    let mut graphs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        graphs.push(
            Graph::parse_graph6(line).map_err(|source| CensusError::CorpusLine {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(graphs)
}

/// Census over an explicit corpus of graphs.
pub fn cross_validate_corpus(graphs: Vec<Graph>, budget: Budget) -> CensusReport {
    let total = graphs.len();
    census_over(graphs, None, total, budget)
}
