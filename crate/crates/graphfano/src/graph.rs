//! Finite simple graphs on up to 62 labeled nodes, stored as per-node
//! adjacency bitmasks. Node labels are 1-based; bit `v - 1` of a mask
//! stands for node `v`.

use std::fmt;

use thiserror::Error;

/// Hard cap on node count: one machine word per mask, and single-byte
/// graph6 sizes.
pub const MAX_NODES: usize = 62;

/// A subset of the node set, as a bitmask.
pub type NodeMask = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node count must be in 1..={MAX_NODES}, got {0}")]
    BadNodeCount(usize),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("edge endpoint {0} out of range 1..={1}")]
    EndpointOutOfRange(usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("invalid graph6: {0}")]
    Graph6(String),
    #[error("invalid size {size} for family {kind}")]
    BadFamilySize { kind: &'static str, size: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("empty node set")]
    EmptySet,
    #[error("invalid seed ordering: {0}")]
    BadSeed(String),
}

/// Returns the mask with bits for nodes `1..=n`.
pub fn full_mask(n: usize) -> NodeMask {
    debug_assert!(n <= MAX_NODES);
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask of a single node (1-based).
pub fn node_bit(v: usize) -> NodeMask {
    debug_assert!(v >= 1);
    1u64 << (v - 1)
}

pub fn mask_from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> NodeMask {
    nodes.into_iter().fold(0, |m, v| m | node_bit(v))
}

/// Node labels of a mask, ascending.
pub fn nodes_of(mask: NodeMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let b = m.trailing_zeros() as usize;
        out.push(b + 1);
        m &= m - 1;
    }
    out
}

/// Renders a mask as `{1, 3, 4}`.
pub fn format_mask(mask: NodeMask) -> String {
    let labels: Vec<String> = nodes_of(mask).iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", labels.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Path,
    Cycle,
    Complete,
    Diamond,
    Star,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Path => "path",
            FamilyKind::Cycle => "cycle",
            FamilyKind::Complete => "complete",
            FamilyKind::Diamond => "diamond",
            FamilyKind::Star => "star",
        }
    }

    pub fn from_name(s: &str) -> Option<FamilyKind> {
        match s {
            "path" => Some(FamilyKind::Path),
            "cycle" => Some(FamilyKind::Cycle),
            "complete" => Some(FamilyKind::Complete),
            "diamond" => Some(FamilyKind::Diamond),
            "star" => Some(FamilyKind::Star),
            _ => None,
        }
    }
}

/// A finite simple graph on nodes `1..=node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    adj: Vec<NodeMask>,
}

impl Graph {
    /// Builds a graph from an edge list. Rejects out-of-range endpoints,
    /// self-loops and duplicate edges.
    pub fn new(node_count: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if node_count < 1 || node_count > MAX_NODES {
            return Err(GraphError::BadNodeCount(node_count));
        }
        let mut adj = vec![0u64; node_count];
        for &(u, v) in edges {
            if u < 1 || u > node_count {
                return Err(GraphError::EndpointOutOfRange(u, node_count));
            }
            if v < 1 || v > node_count {
                return Err(GraphError::EndpointOutOfRange(v, node_count));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u - 1] & node_bit(v) != 0 {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u - 1] |= node_bit(v);
            adj[v - 1] |= node_bit(u);
        }
        Ok(Graph { node_count, adj })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn full_mask(&self) -> NodeMask {
        full_mask(self.node_count)
    }

    /// Neighbor mask of node `v` (1-based).
    pub fn neighbors(&self, v: usize) -> NodeMask {
        self.adj[v - 1]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u - 1] & node_bit(v) != 0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.node_count {
            let mut m = self.adj[u - 1] & !(full_mask(u));
            while m != 0 {
                let v = m.trailing_zeros() as usize + 1;
                out.push((u, v));
                m &= m - 1;
            }
        }
        out
    }

    /// Parses the `"n m"` header format: one edge per following line.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (lineno, header) = lines.next().ok_or(GraphError::Malformed {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let mut it = header.split_whitespace();
        let parse_num = |tok: Option<&str>, lineno: usize| -> Result<usize, GraphError> {
            tok.and_then(|t| t.parse::<usize>().ok())
                .ok_or(GraphError::Malformed {
                    line: lineno + 1,
                    msg: format!("expected integers, got {:?}", header),
                })
        };
        let n = parse_num(it.next(), lineno)?;
        let m = parse_num(it.next(), lineno)?;
        if it.next().is_some() {
            return Err(GraphError::Malformed {
                line: lineno + 1,
                msg: "trailing tokens after header".into(),
            });
        }
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (lineno, line) = lines.next().ok_or(GraphError::Malformed {
                line: 0,
                msg: format!("expected {} edge lines, got {}", m, edges.len()),
            })?;
            let mut it = line.split_whitespace();
            let parse_end = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.and_then(|t| t.parse::<usize>().ok())
                    .ok_or(GraphError::Malformed {
                        line: lineno + 1,
                        msg: format!("bad edge line {:?}", line),
                    })
            };
            let u = parse_end(it.next())?;
            let v = parse_end(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::Malformed {
                    line: lineno + 1,
                    msg: "trailing tokens after edge".into(),
                });
            }
            edges.push((u, v));
        }
        if let Some((lineno, _)) = lines.next() {
            return Err(GraphError::Malformed {
                line: lineno + 1,
                msg: "extra lines after edge list".into(),
            });
        }
        Graph::new(n, &edges)
    }

    /// Decodes a graph6 line (single size byte, so n <= 62).
    pub fn parse_graph6(line: &str) -> Result<Graph, GraphError> {
        let bytes = line.trim_end().as_bytes();
        if bytes.is_empty() {
            return Err(GraphError::Graph6("empty input".into()));
        }
        if bytes[0] == 126 {
            return Err(GraphError::Graph6("n > 62 is unsupported".into()));
        }
        for &b in bytes {
            if !(63..=126).contains(&b) {
                return Err(GraphError::Graph6(format!("byte {} out of range [63, 126]", b)));
            }
        }
        let n = (bytes[0] - 63) as usize;
        if n < 1 || n > MAX_NODES {
            return Err(GraphError::Graph6(format!("node count {} out of range", n)));
        }
        let nbits = n * (n - 1) / 2;
        let nbytes = (nbits + 5) / 6;
        if bytes.len() != 1 + nbytes {
            return Err(GraphError::Graph6(format!(
                "expected {} adjacency bytes, got {}",
                nbytes,
                bytes.len() - 1
            )));
        }
        let mut adj = vec![0u64; n];
        let mut bit_idx = 0usize;
        // Upper-triangle bits in column order: (0,1),(0,2),(1,2),(0,3),...
        'outer: for j in 1..n {
            for i in 0..j {
                let byte = bytes[1 + bit_idx / 6] - 63;
                let bit = (byte >> (5 - bit_idx % 6)) & 1;
                if bit == 1 {
                    adj[i] |= 1u64 << j;
                    adj[j] |= 1u64 << i;
                }
                bit_idx += 1;
                if bit_idx == nbits {
                    break 'outer;
                }
            }
        }
        // Padding bits must be zero.
        if nbits % 6 != 0 {
            let last = bytes[bytes.len() - 1] - 63;
            let pad = 6 - nbits % 6;
            if last & ((1 << pad) - 1) != 0 {
                return Err(GraphError::Graph6("nonzero padding bits".into()));
            }
        }
        Ok(Graph { node_count: n, adj })
    }

    /// Encodes as graph6 with zero padding bits.
    pub fn to_graph6(&self) -> String {
        let n = self.node_count;
        let mut bits: Vec<u8> = Vec::with_capacity(n * (n - 1) / 2);
        for j in 1..n {
            for i in 0..j {
                bits.push(((self.adj[i] >> j) & 1) as u8);
            }
        }
        let mut out = vec![(n as u8) + 63];
        for chunk in bits.chunks(6) {
            let mut byte = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                byte |= b << (5 - k);
            }
            out.push(byte + 63);
        }
        String::from_utf8(out).unwrap()
    }

    /// Canonical labeled member of one of the named families.
    pub fn family(kind: FamilyKind, size: usize) -> Result<Graph, GraphError> {
        let bad = || GraphError::BadFamilySize { kind: kind.name(), size };
        match kind {
            FamilyKind::Path => {
                if size < 1 {
                    return Err(bad());
                }
                let edges: Vec<_> = (1..size).map(|i| (i, i + 1)).collect();
                Graph::new(size, &edges)
            }
            FamilyKind::Cycle => {
                if size < 3 {
                    return Err(bad());
                }
                let mut edges: Vec<_> = (1..size).map(|i| (i, i + 1)).collect();
                edges.push((size, 1));
                Graph::new(size, &edges)
            }
            FamilyKind::Complete => {
                if size < 1 {
                    return Err(bad());
                }
                let mut edges = Vec::new();
                for u in 1..=size {
                    for v in (u + 1)..=size {
                        edges.push((u, v));
                    }
                }
                Graph::new(size, &edges)
            }
            FamilyKind::Diamond => {
                if size != 4 {
                    return Err(bad());
                }
                // Nodes 1, 2 are the degree-3 apexes.
                Graph::new(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
            }
            FamilyKind::Star => {
                if size < 1 {
                    return Err(bad());
                }
                let edges: Vec<_> = (2..=size).map(|v| (1, v)).collect();
                Graph::new(size, &edges)
            }
        }
    }

    /// The subgraph induced by `mask`, relabeled 1..|mask| in ascending
    /// label order.
    pub fn induced_subgraph(&self, mask: NodeMask) -> Result<Graph, GraphError> {
        if mask == 0 {
            return Err(GraphError::EmptySet);
        }
        debug_assert_eq!(mask & !self.full_mask(), 0);
        let nodes = nodes_of(mask);
        let k = nodes.len();
        let mut adj = vec![0u64; k];
        for (i, &u) in nodes.iter().enumerate() {
            for (j, &v) in nodes.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    adj[i] |= 1u64 << j;
                    adj[j] |= 1u64 << i;
                }
            }
        }
        Ok(Graph { node_count: k, adj })
    }

    /// True iff the nonempty subset `mask` induces a connected subgraph.
    pub fn is_connected_subset(&self, mask: NodeMask) -> bool {
        if mask == 0 {
            return false;
        }
        let start = mask & mask.wrapping_neg();
        let mut reached = start;
        loop {
            let mut grow = reached;
            let mut m = reached;
            while m != 0 {
                let v = m.trailing_zeros() as usize + 1;
                grow |= self.neighbors(v) & mask;
                m &= m - 1;
            }
            if grow == reached {
                return reached == mask;
            }
            reached = grow;
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_subset(self.full_mask())
    }

    /// Maximal connected node sets, ordered by smallest element.
    pub fn connected_components(&self) -> Vec<NodeMask> {
        let mut out = Vec::new();
        let mut remaining = self.full_mask();
        while remaining != 0 {
            let start = remaining & remaining.wrapping_neg();
            let mut comp = start;
            loop {
                let mut grow = comp;
                let mut m = comp;
                while m != 0 {
                    let v = m.trailing_zeros() as usize + 1;
                    grow |= self.neighbors(v);
                    m &= m - 1;
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

    /// Connected, every degree 2, at least 3 nodes. Callers filter by
    /// length when they need cycles of length >= 4.
    pub fn is_cycle_graph(&self) -> bool {
        self.node_count >= 3
            && self.adj.iter().all(|m| m.count_ones() == 2)
            && self.is_connected()
    }

    /// The diamond graph: 4 nodes, 5 edges, degrees {3,3,2,2} with the
    /// two degree-2 nodes nonadjacent.
    pub fn is_diamond(&self) -> bool {
        if self.node_count != 4 || self.edge_count() != 5 {
            return false;
        }
        let mut degs: Vec<u32> = self.adj.iter().map(|m| m.count_ones()).collect();
        degs.sort_unstable();
        if degs != [2, 2, 3, 3] {
            return false;
        }
        let low: Vec<usize> = (1..=4).filter(|&v| self.degree(v) == 2).collect();
        !self.adjacent(low[0], low[1])
    }

    /// True iff `mask` induces a cycle graph of length >= 4 (without
    /// materializing the subgraph).
    pub fn induces_long_cycle(&self, mask: NodeMask) -> bool {
        if mask.count_ones() < 4 {
            return false;
        }
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize + 1;
            if (self.neighbors(v) & mask).count_ones() != 2 {
                return false;
            }
            m &= m - 1;
        }
        self.is_connected_subset(mask)
    }

    /// True iff `mask` induces the diamond graph.
    pub fn induces_diamond(&self, mask: NodeMask) -> bool {
        if mask.count_ones() != 4 {
            return false;
        }
        let mut deg3 = 0u32;
        let mut low = [0usize; 2];
        let mut nlow = 0;
        let mut edges = 0u32;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize + 1;
            let d = (self.neighbors(v) & mask).count_ones();
            edges += d;
            match d {
                3 => deg3 += 1,
                2 => {
                    if nlow < 2 {
                        low[nlow] = v;
                    }
                    nlow += 1;
                }
                _ => return false,
            }
            m &= m - 1;
        }
        deg3 == 2 && nlow == 2 && edges == 10 && !self.adjacent(low[0], low[1])
    }

    /// Extends `seed` to a full ordering of V(G) in which every prefix
    /// induces a connected subgraph. Greedy: smallest-label node
    /// adjacent to the prefix.
    pub fn connected_extension_order(&self, seed: &[usize]) -> Result<Vec<usize>, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let mut prefix: NodeMask = 0;
        for &v in seed {
            if v < 1 || v > self.node_count {
                return Err(GraphError::BadSeed(format!("node {} out of range", v)));
            }
            if prefix & node_bit(v) != 0 {
                return Err(GraphError::BadSeed(format!("node {} repeated", v)));
            }
            prefix |= node_bit(v);
            if !self.is_connected_subset(prefix) {
                return Err(GraphError::BadSeed(format!(
                    "prefix through node {} is not connected",
                    v
                )));
            }
        }
        let mut order = seed.to_vec();
        while order.len() < self.node_count {
            let mut frontier: NodeMask = 0;
            let mut m = prefix;
            while m != 0 {
                let v = m.trailing_zeros() as usize + 1;
                frontier |= self.neighbors(v);
                m &= m - 1;
            }
            frontier &= !prefix;
            if prefix == 0 {
                frontier = self.full_mask();
            }
            debug_assert_ne!(frontier, 0);
            let v = frontier.trailing_zeros() as usize + 1;
            order.push(v);
            prefix |= node_bit(v);
        }
        Ok(order)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, edges={:?})", self.node_count, self.edges())
    }
}
