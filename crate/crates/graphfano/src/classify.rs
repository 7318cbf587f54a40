//! Fano / weak Fano classification.
//!
//! Two independent routes are implemented for every wall value a(τ):
//! the component-count formula (a = -m or -m-1 depending on whether
//! J ∪ J' covers the node set) and an exact integer solve of the wall
//! relation v + v' + Σ a_i v_i = 0. Classification is likewise done two
//! ways: from wall values and from the graph-theoretic criteria
//! (components of at most three nodes for Fano; no proper induced long
//! cycle or diamond for weak Fano).

use rayon::prelude::*;
use thiserror::Error;

use crate::building::{Budget, BuildingError, BuildingSet};
use crate::fan::{Fan, FanError};
use crate::graph::{format_mask, mask_from_nodes, node_bit, nodes_of, Graph, GraphError, NodeMask};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("wall/theorem disagreement on {graph6}: walls say fano={walls_fano}, weak_fano={walls_weak}; theorem says fano={theorem_fano}, weak_fano={theorem_weak}")]
    MethodDisagreement {
        graph6: String,
        walls_fano: bool,
        walls_weak: bool,
        theorem_fano: bool,
        theorem_weak: bool,
    },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

impl ClassifyError {
    pub fn is_budget_exceeded(&self) -> bool {
        matches!(
            self,
            ClassifyError::Building(BuildingError::BudgetExceeded { .. })
                | ClassifyError::Fan(FanError::Building(BuildingError::BudgetExceeded { .. }))
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Walls,
    Theorem,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Walls => "walls",
            Method::Theorem => "theorem",
            Method::Both => "both",
        }
    }
}

/// Everything known about one wall: the nested set, its completion
/// pair, the component count m, the wall value a from the component
/// formula, and the independent linear-algebra value with agreement flag.
/// Node sets are in the graph's original labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallReport {
    pub wall: Vec<NodeMask>,
    pub j: NodeMask,
    pub j_prime: NodeMask,
    pub union: NodeMask,
    pub components: Vec<NodeMask>,
    pub m: usize,
    pub a: i64,
    pub intersection_number: i64,
    pub a_oracle: i64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    InducedCycle { subset: NodeMask },
    InducedDiamond { subset: NodeMask },
    BadWall { report: Box<WallReport> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub fano: bool,
    pub weak_fano: bool,
    /// Minimum wall value over all components; None when there are no
    /// walls (every component is a single node) or in theorem mode.
    pub min_a: Option<i64>,
    pub method: Method,
    pub witness: Option<Witness>,
}

/// Wall classification plus the full per-wall evidence, in
/// deterministic order (components by smallest element, walls in
/// enumeration order).
#[derive(Debug, Clone)]
pub struct WallAnalysis {
    pub classification: Classification,
    pub reports: Vec<WallReport>,
}

/// Shared per-component context so callers can price the building set
/// and fan once for many walls.
pub struct WallContext {
    building: BuildingSet,
    fan: Fan,
}

impl WallContext {
    pub fn new(graph: &Graph, budget: Budget) -> Result<WallContext, ClassifyError> {
        let building = BuildingSet::new(graph, budget)?;
        let fan = Fan::from_building(&building, budget)?;
        Ok(WallContext { building, fan })
    }

    pub fn building(&self) -> &BuildingSet {
        &self.building
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Wall report for one wall nested set (in this context's labels).
    pub fn a_value(&self, wall: &[NodeMask]) -> Result<WallReport, ClassifyError> {
        let graph = self.building.graph();
        let completion = self.building.wall_completions(wall)?;
        let m = completion.components.len();
        let full = graph.full_mask();
        let a = if completion.union == full { -(m as i64) } else { -(m as i64) - 1 };

        // Independent route: exact solve of the wall relation.
        let full_idx = |s: NodeMask| self.building.member_index(s).expect("member of B");
        let wall_rays: Vec<usize> =
            wall.iter().filter(|&&s| s != full).map(|&s| full_idx(s)).collect();
        let rel = self.fan.wall_relation_vectors(
            &wall_rays,
            full_idx(completion.j),
            full_idx(completion.j_prime),
        )?;
        let a_oracle = rel.a_sum;
        Ok(WallReport {
            wall: wall.to_vec(),
            j: completion.j,
            j_prime: completion.j_prime,
            union: completion.union,
            components: completion.components,
            m,
            a,
            intersection_number: 2 + a,
            a_oracle,
            agree: a == a_oracle,
        })
    }
}

/// Wall report for a single wall of a connected graph.
pub fn a_value(
    graph: &Graph,
    wall: &[NodeMask],
    budget: Budget,
) -> Result<WallReport, ClassifyError> {
    WallContext::new(graph, budget)?.a_value(wall)
}

fn remap_mask(mask: NodeMask, comp_nodes: &[usize]) -> NodeMask {
    nodes_of(mask).into_iter().fold(0u64, |m, v| m | node_bit(comp_nodes[v - 1]))
}

fn remap_report(mut report: WallReport, comp_nodes: &[usize]) -> WallReport {
    for s in report.wall.iter_mut() {
        *s = remap_mask(*s, comp_nodes);
    }
    report.j = remap_mask(report.j, comp_nodes);
    report.j_prime = remap_mask(report.j_prime, comp_nodes);
    report.union = remap_mask(report.union, comp_nodes);
    for s in report.components.iter_mut() {
        *s = remap_mask(*s, comp_nodes);
    }
    report
}

/// Classifies by computing every wall value, component by component.
/// A single-node component is a point and counts as Fano.
pub fn classify_via_walls(graph: &Graph, budget: Budget) -> Result<WallAnalysis, ClassifyError> {
    let mut reports: Vec<WallReport> = Vec::new();
    for comp in graph.connected_components() {
        if comp.count_ones() == 1 {
            continue;
        }
        let comp_nodes = nodes_of(comp);
        let sub = graph.induced_subgraph(comp).expect("component is nonempty");
        let ctx = WallContext::new(&sub, budget)?;
        let walls = ctx.building().walls(budget)?;
        let comp_reports: Vec<WallReport> = walls
            .par_iter()
            .map(|w| ctx.a_value(w))
            .collect::<Result<_, _>>()?;
        reports.extend(comp_reports.into_iter().map(|r| remap_report(r, &comp_nodes)));
    }
    let min_a = reports.iter().map(|r| r.a).min();
    let fano = min_a.map_or(true, |a| a >= -1);
    let weak_fano = min_a.map_or(true, |a| a >= -2);
    let witness = if weak_fano {
        None
    } else {
        reports
            .iter()
            .filter(|r| r.a == min_a.unwrap())
            .map(|r| Witness::BadWall { report: Box::new(r.clone()) })
            .next()
    };
    Ok(WallAnalysis {
        classification: Classification { fano, weak_fano, min_a, method: Method::Walls, witness },
        reports,
    })
}

/// Fano criterion of the characterization theorem: every connected
/// component has at most three nodes.
pub fn is_fano_theorem(graph: &Graph) -> bool {
    graph.connected_components().iter().all(|c| c.count_ones() <= 3)
}

/// Reference weak-Fano check: scan all subsets in ascending mask order
/// for a proper induced long cycle or diamond. Exponential; desk scale.
pub fn weak_fano_brute(graph: &Graph) -> (bool, Option<Witness>) {
    match find_forbidden_subgraph(graph) {
        Some(w) => (false, Some(w)),
        None => (true, None),
    }
}

/// First (smallest-mask) proper induced cycle of length >= 4 or
/// diamond, as a witness. A hit mask is connected, so it lies inside a
/// single component; properness is against that component.
fn find_forbidden_subgraph(graph: &Graph) -> Option<Witness> {
    let components = graph.connected_components();
    let full = graph.full_mask();
    for mask in 1..=full {
        if graph.induces_long_cycle(mask) {
            let comp = components.iter().find(|&&c| mask & c == mask).unwrap();
            if mask != *comp {
                return Some(Witness::InducedCycle { subset: mask });
            }
        } else if graph.induces_diamond(mask) {
            let comp = components.iter().find(|&&c| mask & c == mask).unwrap();
            if mask != *comp {
                return Some(Witness::InducedDiamond { subset: mask });
            }
        }
    }
    None
}

/// True iff the subgraph induced by `mask` is chordal
/// (maximum-cardinality search plus perfect-elimination check).
fn is_chordal_subset(graph: &Graph, mask: NodeMask) -> bool {
    let nodes = nodes_of(mask);
    let n = nodes.len();
    if n <= 2 {
        return true;
    }
    // MCS: repeatedly pick the unchosen node with the most chosen
    // neighbors, smallest label first.
    let mut chosen: NodeMask = 0;
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for _ in 0..n {
        let v = nodes
            .iter()
            .copied()
            .filter(|&v| chosen & node_bit(v) == 0)
            .max_by_key(|&v| {
                let weight = (graph.neighbors(v) & chosen).count_ones();
                (weight, std::cmp::Reverse(v))
            })
            .unwrap();
        chosen |= node_bit(v);
        order.push(v);
    }
    // Reverse of an MCS order is a perfect elimination order iff chordal.
    order.reverse();
    let mut pos = vec![usize::MAX; graph.node_count() + 1];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = nodes_of(graph.neighbors(v) & mask)
            .into_iter()
            .filter(|&u| pos[u] > i)
            .collect();
        if later.len() < 2 {
            continue;
        }
        let u = *later.iter().min_by_key(|&&u| pos[u]).unwrap();
        for &w in &later {
            if w != u && !graph.adjacent(u, w) {
                return false;
            }
        }
    }
    true
}

/// True iff the subgraph induced by `mask` contains an induced diamond:
/// an edge whose common neighborhood within the mask is not a clique.
fn has_induced_diamond_subset(graph: &Graph, mask: NodeMask) -> bool {
    for u in nodes_of(mask) {
        let mut higher = graph.neighbors(u) & mask & !((node_bit(u) << 1) - 1);
        while higher != 0 {
            let v = higher.trailing_zeros() as usize + 1;
            higher &= higher - 1;
            let common = graph.neighbors(u) & graph.neighbors(v) & mask;
            let mut c = common;
            while c != 0 {
                let x = c.trailing_zeros() as usize + 1;
                c &= c - 1;
                if common & !graph.neighbors(x) & !node_bit(x) != 0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Polynomial weak-Fano shortcut. A connected component passes iff it
/// is itself a long cycle, itself the diamond, or chordal with no
/// induced diamond. Cross-validated against `weak_fano_brute` on all
/// connected graphs with up to 7 nodes in the acceptance suite.
pub fn weak_fano_fast(graph: &Graph) -> bool {
    graph.connected_components().iter().all(|&comp| {
        if graph.induces_long_cycle(comp) || graph.induces_diamond(comp) {
            return true;
        }
        is_chordal_subset(graph, comp) && !has_induced_diamond_subset(graph, comp)
    })
}

/// Theorem-side weak-Fano decision. The boolean comes from the fast
/// path; the witness, when one exists, from the canonical ascending
/// scan (which terminates quickly exactly when a witness exists).
pub fn is_weak_fano_theorem(graph: &Graph) -> (bool, Option<Witness>) {
    if weak_fano_fast(graph) {
        (true, None)
    } else {
        let w = find_forbidden_subgraph(graph)
            .expect("fast path rejected the graph, so a forbidden subgraph exists");
        (false, Some(w))
    }
}

/// Builds the explicit bad nested set (wall value -3) from an induced
/// cycle or diamond witness, translated back to the graph's labels.
pub fn bad_nested_set(graph: &Graph, witness: &Witness) -> Result<Vec<NodeMask>, ClassifyError> {
    if !graph.is_connected() {
        return Err(ClassifyError::Graph(GraphError::Disconnected));
    }
    let n_plus_1 = graph.node_count();
    let (seed, singles, first_prefix) = match witness {
        Witness::InducedCycle { subset } => {
            if !graph.induces_long_cycle(*subset) || *subset == graph.full_mask() {
                return Err(ClassifyError::InvalidWitness(format!(
                    "{} is not a proper induced cycle of length >= 4",
                    format_mask(*subset)
                )));
            }
            // Walk the cycle from its smallest node toward the smaller
            // neighbor; every prefix of the walk is an arc, so connected.
            let l = subset.count_ones() as usize;
            let start = subset.trailing_zeros() as usize + 1;
            let mut walk = vec![start];
            let mut seen = node_bit(start);
            let mut current = start;
            for _ in 1..l {
                let next = nodes_of(graph.neighbors(current) & subset & !seen)
                    .into_iter()
                    .min()
                    .expect("cycle walk continues");
                walk.push(next);
                seen |= node_bit(next);
                current = next;
            }
            // N = {1}, {1,2}, ..., {1..l-3}, {l-1}, {1..l}, ..., {1..n+1}
            let singles = vec![l - 1];
            (walk, singles, l)
        }
        Witness::InducedDiamond { subset } => {
            if !graph.induces_diamond(*subset) || *subset == graph.full_mask() {
                return Err(ClassifyError::InvalidWitness(format!(
                    "{} is not a proper induced diamond",
                    format_mask(*subset)
                )));
            }
            // Apexes (degree 3 within the subset) first, ascending.
            let mut apexes = Vec::new();
            let mut others = Vec::new();
            for v in nodes_of(*subset) {
                if (graph.neighbors(v) & subset).count_ones() == 3 {
                    apexes.push(v);
                } else {
                    others.push(v);
                }
            }
            let seed = vec![apexes[0], apexes[1], others[0], others[1]];
            // N = {3}, {4}, {1,2,3,4}, {1..5}, ..., {1..n+1}
            (seed, vec![3, 4], 4)
        }
        Witness::BadWall { .. } => {
            return Err(ClassifyError::InvalidWitness(
                "bad_nested_set requires an induced-subgraph witness".into(),
            ))
        }
    };
    let order = graph.connected_extension_order(&seed)?;
    let mut nested: Vec<NodeMask> = Vec::with_capacity(n_plus_1 - 1);
    match witness {
        Witness::InducedCycle { subset } => {
            let l = subset.count_ones() as usize;
            for k in 1..=l - 3 {
                nested.push(mask_from_nodes(order[..k].iter().copied()));
            }
        }
        _ => {}
    }
    for &i in &singles {
        nested.push(node_bit(order[i - 1]));
    }
    for k in first_prefix..=n_plus_1 {
        nested.push(mask_from_nodes(order[..k].iter().copied()));
    }
    nested.sort_unstable();
    debug_assert_eq!(nested.len(), n_plus_1 - 1);
    Ok(nested)
}

/// Ray-count bound satisfied by every Fano graph fan: at most 3n rays
/// for even n, 3n - 1 for odd n, where n = |V(G)| - 1.
pub fn casagrande_bound_holds(graph: &Graph, budget: Budget) -> Result<bool, ClassifyError> {
    let building = BuildingSet::new(graph, budget)?;
    let ray_count = building.len() - 1;
    let n = graph.node_count() - 1;
    let bound = if n % 2 == 0 { 3 * n } else { 3 * n - 1 };
    Ok(ray_count <= bound)
}

/// Classifies by the requested method; `Both` runs the wall computation
/// and the theorem checks and errors on any disagreement.
pub fn classify(graph: &Graph, mode: Method, budget: Budget) -> Result<Classification, ClassifyError> {
    match mode {
        Method::Walls => Ok(classify_via_walls(graph, budget)?.classification),
        Method::Theorem => {
            let fano = is_fano_theorem(graph);
            let (weak_fano, witness) = is_weak_fano_theorem(graph);
            Ok(Classification { fano, weak_fano, min_a: None, method: Method::Theorem, witness })
        }
        Method::Both => {
            let walls = classify_via_walls(graph, budget)?.classification;
            let fano = is_fano_theorem(graph);
            let (weak_fano, theorem_witness) = is_weak_fano_theorem(graph);
            if walls.fano != fano || walls.weak_fano != weak_fano {
                return Err(ClassifyError::MethodDisagreement {
                    graph6: graph.to_graph6(),
                    walls_fano: walls.fano,
                    walls_weak: walls.weak_fano,
                    theorem_fano: fano,
                    theorem_weak: weak_fano,
                });
            }
            Ok(Classification {
                fano,
                weak_fano,
                min_a: walls.min_a,
                method: Method::Both,
                witness: theorem_witness.or(walls.witness),
            })
        }
    }
}
