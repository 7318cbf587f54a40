//! Machine-readable report documents (schema version "1"). Field order
//! is fixed so that serialized output is byte-stable for a fixed input.

use serde::Serialize;

use crate::census::CensusReport;
use crate::classify::{Classification, Witness, WallReport};
use crate::fan::Fan;
use crate::graph::{nodes_of, Graph, NodeMask};

pub const SCHEMA_VERSION: &str = "1";

fn set_doc(mask: NodeMask) -> Vec<usize> {
    nodes_of(mask)
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    pub input: InputEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub walls: Option<Vec<WallDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusDoc>,
}

impl ReportDocument {
    pub fn new(input: InputEcho) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            input,
            classification: None,
            walls: None,
            fan: None,
            witness: None,
            census: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct InputEcho {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub source: String,
}

impl InputEcho {
    pub fn from_graph(graph: &Graph, source: &str) -> Self {
        InputEcho {
            n: graph.node_count(),
            edges: graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            source: source.to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationDoc {
    pub fano: bool,
    pub weak_fano: bool,
    pub min_a: Option<i64>,
    pub method: &'static str,
}

impl From<&Classification> for ClassificationDoc {
    fn from(c: &Classification) -> Self {
        ClassificationDoc {
            fano: c.fano,
            weak_fano: c.weak_fano,
            min_a: c.min_a,
            method: c.method.name(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WallDoc {
    pub wall: Vec<Vec<usize>>,
    pub j: Vec<usize>,
    pub j_prime: Vec<usize>,
    pub union: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub m: usize,
    pub a: i64,
    pub intersection_number: i64,
    pub a_oracle: i64,
    pub agree: bool,
}

impl From<&WallReport> for WallDoc {
    fn from(r: &WallReport) -> Self {
        WallDoc {
            wall: r.wall.iter().map(|&s| set_doc(s)).collect(),
            j: set_doc(r.j),
            j_prime: set_doc(r.j_prime),
            union: set_doc(r.union),
            components: r.components.iter().map(|&s| set_doc(s)).collect(),
            m: r.m,
            a: r.a,
            intersection_number: r.intersection_number,
            a_oracle: r.a_oracle,
            agree: r.agree,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FanDoc {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray_sets: Option<Vec<Vec<usize>>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl From<&Fan> for FanDoc {
    fn from(f: &Fan) -> Self {
        FanDoc {
            dim: f.dim,
            rays: f.rays.clone(),
            ray_sets: f.ray_sets.as_ref().map(|s| s.iter().map(|&m| set_doc(m)).collect()),
            max_cones: f.max_cones.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WitnessDoc {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nested_set: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_report: Option<WallDoc>,
}

impl From<&Witness> for WitnessDoc {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::InducedCycle { subset } => WitnessDoc {
                kind: "induced_cycle",
                subset: Some(set_doc(*subset)),
                nested_set: None,
                wall_report: None,
            },
            Witness::InducedDiamond { subset } => WitnessDoc {
                kind: "induced_diamond",
                subset: Some(set_doc(*subset)),
                nested_set: None,
                wall_report: None,
            },
            Witness::BadWall { report } => WitnessDoc {
                kind: "bad_wall",
                subset: None,
                nested_set: Some(report.wall.iter().map(|&s| set_doc(s)).collect()),
                wall_report: Some(WallDoc::from(report.as_ref())),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MismatchDoc {
    pub graph6: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct CensusDoc {
    pub n: Option<usize>,
    pub graphs_total: usize,
    pub graphs_connected: usize,
    pub graphs_classified: usize,
    pub fano_count: usize,
    pub weak_fano_count: usize,
    pub neither_count: usize,
    pub mismatches: Vec<MismatchDoc>,
    pub budget_exceeded: Vec<String>,
    pub runtime_ms: u128,
}

impl From<&CensusReport> for CensusDoc {
    fn from(r: &CensusReport) -> Self {
        CensusDoc {
            n: r.n,
            graphs_total: r.graphs_total,
            graphs_connected: r.graphs_connected,
            graphs_classified: r.graphs_classified,
            fano_count: r.fano_count,
            weak_fano_count: r.weak_fano_count,
            neither_count: r.neither_count,
            mismatches: r
                .mismatches
                .iter()
                .map(|m| MismatchDoc { graph6: m.graph6.clone(), detail: m.detail.clone() })
                .collect(),
            budget_exceeded: r.budget_exceeded.clone(),
            runtime_ms: r.runtime_ms,
        }
    }
}
