//! Graphical building sets and nested sets.
//!
//! Members of a building set are node masks; a nested set is a sorted
//! `Vec<NodeMask>` (ascending mask value) that always contains the full
//! node set. Nested sets of maximal cardinality |V| index the maximal
//! cones of the fan; those of cardinality |V|-1 index walls.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{nodes_of, format_mask, Graph, NodeMask};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildingError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("node set {} is not a member of the building set", format_mask(*.0))]
    NotAMember(NodeMask),
    #[error("enumeration budget exceeded after {visited} search nodes (limit {limit})")]
    BudgetExceeded { visited: usize, limit: usize },
    #[error("internal fan inconsistency: {0}")]
    Inconsistent(String),
}

/// Cap on search nodes spent enumerating connected subsets and nested
/// sets, to fail gracefully on permutohedron-sized inputs.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    pub max_search_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_search_nodes: 1 << 20 }
    }
}

struct BudgetCounter {
    visited: usize,
    limit: usize,
}

impl BudgetCounter {
    fn new(budget: Budget) -> Self {
        BudgetCounter { visited: 0, limit: budget.max_search_nodes }
    }

    fn tick(&mut self) -> Result<(), BuildingError> {
        self.visited += 1;
        if self.visited > self.limit {
            Err(BuildingError::BudgetExceeded { visited: self.visited, limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Fixed-size bitset over building-set member indices.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn zeros(len: usize) -> Self {
        BitRow { words: vec![0; (len + 63) / 64] }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    fn and_assign(&mut self, other: &BitRow) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w &= o;
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Ascending iteration over set bit positions.
    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Clears all bits at positions <= i.
    fn clear_through(&mut self, i: usize) {
        let wi = i / 64;
        for w in &mut self.words[..wi] {
            *w = 0;
        }
        if i % 64 == 63 {
            self.words[wi] = 0;
        } else {
            self.words[wi] &= !((1u64 << (i % 64 + 1)) - 1);
        }
    }
}

/// All pieces of the wall completion of Proposition-style wall pairs:
/// the two sets J < J' completing the wall to maximal nested sets, their
/// union, and the connected components of G restricted to their
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCompletion {
    pub j: NodeMask,
    pub j_prime: NodeMask,
    pub union: NodeMask,
    pub components: Vec<NodeMask>,
}

/// The graphical building set of a connected graph: every nonempty node
/// subset inducing a connected subgraph, in ascending mask order.
#[derive(Debug, Clone)]
pub struct BuildingSet {
    graph: Graph,
    members: Vec<NodeMask>,
    index: HashMap<NodeMask, usize>,
    compat: Vec<BitRow>,
}

impl BuildingSet {
    /// Enumerates connected subsets by breadth-wise growth from
    /// singletons. Errors on disconnected input or budget exhaustion.
    pub fn new(graph: &Graph, budget: Budget) -> Result<BuildingSet, BuildingError> {
        if !graph.is_connected() {
            return Err(BuildingError::Disconnected);
        }
        let mut counter = BudgetCounter::new(budget);
        let n = graph.node_count();
        let mut seen: HashMap<NodeMask, ()> = HashMap::new();
        let mut queue: Vec<NodeMask> = Vec::new();
        for v in 1..=n {
            let m = crate::graph::node_bit(v);
            seen.insert(m, ());
            queue.push(m);
        }
        let mut head = 0;
        while head < queue.len() {
            let s = queue[head];
            head += 1;
            counter.tick()?;
            let mut frontier: NodeMask = 0;
            for v in nodes_of(s) {
                frontier |= graph.neighbors(v);
            }
            frontier &= !s;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize + 1;
                f &= f - 1;
                let grown = s | crate::graph::node_bit(v);
                if seen.insert(grown, ()).is_none() {
                    queue.push(grown);
                }
            }
        }
        let mut members: Vec<NodeMask> = seen.into_keys().collect();
        members.sort_unstable();
        let index: HashMap<NodeMask, usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();

        // Pairwise compatibility: nested, or disjoint with non-connected
        // union. Nested sets are exactly {V} plus cliques of this relation.
        let len = members.len();
        let mut compat = vec![BitRow::zeros(len); len];
        for i in 0..len {
            for j in (i + 1)..len {
                let (a, b) = (members[i], members[j]);
                let ok = if a & b == 0 {
                    !index.contains_key(&(a | b))
                } else {
                    a & b == a || a & b == b
                };
                if ok {
                    compat[i].set(j);
                    compat[j].set(i);
                }
            }
        }
        Ok(BuildingSet { graph: graph.clone(), members, index, compat })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Members in ascending mask order; the full node set is last.
    pub fn members(&self) -> &[NodeMask] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mask: NodeMask) -> bool {
        self.index.contains_key(&mask)
    }

    pub fn member_index(&self, mask: NodeMask) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Direct check of the three nested-set conditions. Errors if some
    /// member of `sets` is not in the building set.
    pub fn is_nested_set(&self, sets: &[NodeMask]) -> Result<bool, BuildingError> {
        for &s in sets {
            if !self.contains(s) {
                return Err(BuildingError::NotAMember(s));
            }
        }
        let full = self.graph.full_mask();
        if !sets.contains(&full) {
            return Ok(false);
        }
        for (i, &a) in sets.iter().enumerate() {
            for &b in &sets[i + 1..] {
                let inter = a & b;
                if inter == 0 {
                    if self.contains(a | b) {
                        return Ok(false);
                    }
                } else if inter != a && inter != b {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All nested sets of the given cardinality (counting the full node
    /// set), each sorted ascending, in lexicographic member-index order.
    pub fn nested_sets_of_size(
        &self,
        size: usize,
        budget: Budget,
    ) -> Result<Vec<Vec<NodeMask>>, BuildingError> {
        let full_idx = self.members.len() - 1;
        debug_assert_eq!(self.members[full_idx], self.graph.full_mask());
        if size == 0 {
            return Ok(Vec::new());
        }
        let mut counter = BudgetCounter::new(budget);
        let mut out = Vec::new();
        let need = size - 1; // members besides V
        let mut initial = BitRow::zeros(self.members.len());
        for i in 0..full_idx {
            initial.set(i);
        }
        let mut current: Vec<usize> = Vec::with_capacity(need);
        self.extend_nested(&mut current, &initial, need, &mut out, &mut counter)?;
        Ok(out)
    }

    fn extend_nested(
        &self,
        current: &mut Vec<usize>,
        candidates: &BitRow,
        need: usize,
        out: &mut Vec<Vec<NodeMask>>,
        counter: &mut BudgetCounter,
    ) -> Result<(), BuildingError> {
        if need == 0 {
            let mut sets: Vec<NodeMask> = current.iter().map(|&i| self.members[i]).collect();
            sets.push(self.graph.full_mask());
            out.push(sets);
            return Ok(());
        }
        if candidates.count() < need {
            return Ok(());
        }
        for i in candidates.iter_ones() {
            counter.tick()?;
            current.push(i);
            let mut next = candidates.clone();
            next.and_assign(&self.compat[i]);
            next.clear_through(i);
            self.extend_nested(current, &next, need - 1, out, counter)?;
            current.pop();
        }
        Ok(())
    }

    /// Nested sets of cardinality |V| (maximal cones of the fan).
    pub fn maximal_nested_sets(&self, budget: Budget) -> Result<Vec<Vec<NodeMask>>, BuildingError> {
        self.nested_sets_of_size(self.graph.node_count(), budget)
    }

    /// Nested sets of cardinality |V|-1 (codimension-1 cones).
    pub fn walls(&self, budget: Budget) -> Result<Vec<Vec<NodeMask>>, BuildingError> {
        self.nested_sets_of_size(self.graph.node_count() - 1, budget)
    }

    /// For a wall N, the two completions {J, J'} with N ∪ {J} and
    /// N ∪ {J'} nested, plus J ∪ J' and the connected components of the
    /// graph restricted to J ∩ J'. Any deviation from exactly two
    /// completions, or a missing union/component, is an internal
    /// inconsistency.
    pub fn wall_completions(&self, wall: &[NodeMask]) -> Result<WallCompletion, BuildingError> {
        debug_assert_eq!(wall.len(), self.graph.node_count() - 1);
        let mut cand = BitRow::zeros(self.members.len());
        for i in 0..self.members.len() {
            cand.set(i);
        }
        for &s in wall {
            let idx = self.member_index(s).ok_or(BuildingError::NotAMember(s))?;
            cand.and_assign(&self.compat[idx]);
            cand.clear(idx);
        }
        let completions: Vec<usize> = cand.iter_ones().collect();
        if completions.len() != 2 {
            return Err(BuildingError::Inconsistent(format!(
                "wall has {} completions, expected 2",
                completions.len()
            )));
        }
        let j = self.members[completions[0]];
        let j_prime = self.members[completions[1]];
        let union = j | j_prime;
        if !wall.contains(&union) {
            return Err(BuildingError::Inconsistent(format!(
                "J ∪ J' = {} is not a member of the wall",
                format_mask(union)
            )));
        }
        let inter = j & j_prime;
        let components = if inter == 0 {
            Vec::new()
        } else {
            let comps = subset_components(&self.graph, inter);
            for &c in &comps {
                if !wall.contains(&c) {
                    return Err(BuildingError::Inconsistent(format!(
                        "component {} of G|_(J ∩ J') is not in the wall",
                        format_mask(c)
                    )));
                }
            }
            comps
        };
        Ok(WallCompletion { j, j_prime, union, components })
    }
}

/// Connected components of the subgraph induced by `mask`, ordered by
/// smallest element.
pub fn subset_components(graph: &Graph, mask: NodeMask) -> Vec<NodeMask> {
    let mut out = Vec::new();
    let mut remaining = mask;
    while remaining != 0 {
        let mut comp = remaining & remaining.wrapping_neg();
        loop {
            let mut grow = comp;
            for v in nodes_of(comp) {
                grow |= graph.neighbors(v) & mask;
            }
            if grow == comp {
                break;
            }
            comp = grow;
        }
        out.push(comp);
        remaining &= !comp;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{mask_from_nodes, FamilyKind};

    fn building(g: &Graph) -> BuildingSet {
        BuildingSet::new(g, Budget::default()).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::family(FamilyKind::Path, n).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::family(FamilyKind::Cycle, n).unwrap()
    }

    /// Independent route: test every nonempty subset for connectivity.
    fn brute_building(g: &Graph) -> Vec<NodeMask> {
        (1..=g.full_mask()).filter(|&m| g.is_connected_subset(m)).collect()
    }

    #[test]
    fn building_set_path3() {
        let b = building(&path(3));
        let expected: Vec<NodeMask> = vec![
            mask_from_nodes([1]),
            mask_from_nodes([2]),
            mask_from_nodes([1, 2]),
            mask_from_nodes([3]),
            mask_from_nodes([2, 3]),
            mask_from_nodes([1, 2, 3]),
        ];
        let mut expected = expected;
        expected.sort_unstable();
        assert_eq!(b.members(), expected.as_slice());
        assert_eq!(b.members(), brute_building(&path(3)).as_slice());
    }

    #[test]
    fn building_set_complete4_and_paths() {
        let k4 = Graph::family(FamilyKind::Complete, 4).unwrap();
        assert_eq!(building(&k4).len(), 15);
        // |B(L_{n+1})| = (n+1)(n+2)/2
        for m in 2..=8usize {
            let b = building(&path(m));
            assert_eq!(b.len(), m * (m + 1) / 2);
        }
    }

    #[test]
    fn building_set_matches_brute_force() {
        for g in [path(4), cycle(5), Graph::family(FamilyKind::Diamond, 4).unwrap()] {
            assert_eq!(building(&g).members(), brute_building(&g).as_slice());
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(
            BuildingSet::new(&g, Budget::default()).unwrap_err(),
            BuildingError::Disconnected
        );
    }

    #[test]
    fn is_nested_set_examples() {
        let b = building(&path(3));
        let v = mask_from_nodes([1, 2, 3]);
        assert!(b
            .is_nested_set(&[mask_from_nodes([1]), mask_from_nodes([3]), v])
            .unwrap());
        // {1} ∪ {2} = {1,2} is connected: violates condition (2).
        assert!(!b
            .is_nested_set(&[mask_from_nodes([1]), mask_from_nodes([2]), v])
            .unwrap());
        // V(G) missing: condition (3).
        assert!(!b
            .is_nested_set(&[mask_from_nodes([1]), mask_from_nodes([1, 2])])
            .unwrap());
        // {1,3} is not in B(L_3).
        assert_eq!(
            b.is_nested_set(&[mask_from_nodes([1, 3]), v]).unwrap_err(),
            BuildingError::NotAMember(mask_from_nodes([1, 3]))
        );
    }

    /// Independent oracle: all size-k subsets of B containing V, passed
    /// through the direct condition check.
    fn brute_nested_of_size(b: &BuildingSet, size: usize) -> Vec<Vec<NodeMask>> {
        let full = b.graph().full_mask();
        let mut out = Vec::new();
        let others: Vec<NodeMask> =
            b.members().iter().copied().filter(|&m| m != full).collect();
        let k = size - 1;
        let mut pick = vec![0usize; k];
        fn rec(
            others: &[NodeMask],
            b: &BuildingSet,
            full: NodeMask,
            pick: &mut Vec<usize>,
            depth: usize,
            start: usize,
            out: &mut Vec<Vec<NodeMask>>,
        ) {
            if depth == pick.len() {
                let mut sets: Vec<NodeMask> = pick.iter().map(|&i| others[i]).collect();
                sets.push(full);
                if b.is_nested_set(&sets).unwrap() {
                    out.push(sets);
                }
                return;
            }
            for i in start..others.len() {
                pick[depth] = i;
                rec(others, b, full, pick, depth + 1, i + 1, out);
            }
        }
        if k == 0 {
            out.push(vec![full]);
        } else {
            rec(&others, b, full, &mut pick, 0, 0, &mut out);
        }
        out
    }

    #[test]
    fn maximal_nested_sets_path3() {
        let b = building(&path(3));
        let got = b.maximal_nested_sets(Budget::default()).unwrap();
        assert_eq!(got.len(), 5);
        let v = mask_from_nodes([1, 2, 3]);
        let expect: Vec<Vec<NodeMask>> = vec![
            vec![mask_from_nodes([1]), mask_from_nodes([1, 2]), v],
            vec![mask_from_nodes([1]), mask_from_nodes([3]), v],
            vec![mask_from_nodes([2]), mask_from_nodes([1, 2]), v],
            vec![mask_from_nodes([2]), mask_from_nodes([2, 3]), v],
            vec![mask_from_nodes([3]), mask_from_nodes([2, 3]), v],
        ];
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut expect = expect;
        expect.sort();
        assert_eq!(got_sorted, expect);
        assert_eq!(got.len(), brute_nested_of_size(&b, 3).len());
    }

    #[test]
    fn maximal_nested_set_counts() {
        // Triangle: permutohedron vertex count 3! = 6.
        let b = building(&cycle(3));
        assert_eq!(b.maximal_nested_sets(Budget::default()).unwrap().len(), 6);
        // C_4: cyclohedron vertex count binomial(6,3) = 20.
        let b = building(&cycle(4));
        assert_eq!(b.maximal_nested_sets(Budget::default()).unwrap().len(), 20);
    }

    #[test]
    fn enumeration_matches_brute_oracle_small() {
        let graphs = [
            path(4),
            path(5),
            cycle(4),
            cycle(5),
            Graph::family(FamilyKind::Complete, 4).unwrap(),
            Graph::family(FamilyKind::Complete, 5).unwrap(),
            Graph::family(FamilyKind::Diamond, 4).unwrap(),
            Graph::family(FamilyKind::Star, 5).unwrap(),
        ];
        for g in graphs {
            let b = building(&g);
            for size in [g.node_count() - 1, g.node_count()] {
                let fast = b.nested_sets_of_size(size, Budget::default()).unwrap();
                let mut fast_sorted = fast.clone();
                fast_sorted.sort();
                let mut brute = brute_nested_of_size(&b, size);
                brute.sort();
                assert_eq!(fast_sorted, brute, "graph {} size {}", g, size);
            }
        }
    }

    #[test]
    fn walls_examples() {
        // 2-node path: the single wall {V} (the zero cone).
        let b = building(&path(2));
        assert_eq!(
            b.walls(Budget::default()).unwrap(),
            vec![vec![mask_from_nodes([1, 2])]]
        );
        let b = building(&path(3));
        let got = b.walls(Budget::default()).unwrap();
        assert_eq!(got.len(), 5);
        let v = mask_from_nodes([1, 2, 3]);
        let mut got_sorted = got;
        got_sorted.sort();
        let mut expect = vec![
            vec![mask_from_nodes([1]), v],
            vec![mask_from_nodes([2]), v],
            vec![mask_from_nodes([3]), v],
            vec![mask_from_nodes([1, 2]), v],
            vec![mask_from_nodes([2, 3]), v],
        ];
        expect.sort();
        assert_eq!(got_sorted, expect);
    }

    #[test]
    fn walls_contains_paper_example() {
        // C_4 with a pendant node 5 on node 1.
        let g = Graph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5)]).unwrap();
        let b = building(&g);
        let walls = b.walls(Budget::default()).unwrap();
        let target = vec![
            mask_from_nodes([1]),
            mask_from_nodes([3]),
            mask_from_nodes([1, 2, 3, 4]),
            mask_from_nodes([1, 2, 3, 4, 5]),
        ];
        assert!(walls.iter().any(|w| {
            let mut w = w.clone();
            w.sort_unstable();
            let mut t = target.clone();
            t.sort_unstable();
            w == t
        }));
    }

    #[test]
    fn wall_completions_examples() {
        let b = building(&path(3));
        let v = mask_from_nodes([1, 2, 3]);
        let c = b.wall_completions(&[mask_from_nodes([2]), v]).unwrap();
        assert_eq!(c.j, mask_from_nodes([1, 2]));
        assert_eq!(c.j_prime, mask_from_nodes([2, 3]));
        assert_eq!(c.union, v);
        assert_eq!(c.components, vec![mask_from_nodes([2])]);

        let c = b.wall_completions(&[mask_from_nodes([1]), v]).unwrap();
        assert_eq!(c.j, mask_from_nodes([1, 2]));
        assert_eq!(c.j_prime, mask_from_nodes([3]));
        assert_eq!(c.union, v);
        assert!(c.components.is_empty());

        let g = Graph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 5)]).unwrap();
        let b = building(&g);
        let wall = vec![
            mask_from_nodes([1]),
            mask_from_nodes([3]),
            mask_from_nodes([1, 2, 3, 4]),
            mask_from_nodes([1, 2, 3, 4, 5]),
        ];
        let c = b.wall_completions(&wall).unwrap();
        assert_eq!(c.j, mask_from_nodes([1, 2, 3]));
        assert_eq!(c.j_prime, mask_from_nodes([1, 3, 4]));
        assert_eq!(c.union, mask_from_nodes([1, 2, 3, 4]));
        assert_eq!(c.components, vec![mask_from_nodes([1]), mask_from_nodes([3])]);
    }

    #[test]
    fn every_wall_in_exactly_two_maximal_nested_sets() {
        for g in [path(4), cycle(4), Graph::family(FamilyKind::Diamond, 4).unwrap()] {
            let b = building(&g);
            let walls = b.walls(Budget::default()).unwrap();
            let maxes = b.maximal_nested_sets(Budget::default()).unwrap();
            for w in &walls {
                let containing: Vec<&Vec<NodeMask>> = maxes
                    .iter()
                    .filter(|m| w.iter().all(|s| m.contains(s)))
                    .collect();
                assert_eq!(containing.len(), 2);
                let c = b.wall_completions(w).unwrap();
                for m in containing {
                    let extra: Vec<NodeMask> =
                        m.iter().copied().filter(|s| !w.contains(s)).collect();
                    assert_eq!(extra.len(), 1);
                    assert!(extra[0] == c.j || extra[0] == c.j_prime);
                }
            }
        }
    }

    #[test]
    fn budget_exhaustion_reported() {
        let g = Graph::family(FamilyKind::Complete, 6).unwrap();
        let b = BuildingSet::new(&g, Budget::default()).unwrap();
        let err = b.maximal_nested_sets(Budget { max_search_nodes: 10 }).unwrap_err();
        assert!(matches!(err, BuildingError::BudgetExceeded { .. }));
    }
}
