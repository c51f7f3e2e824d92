//! Spatial graph representation, BFS node ordering, and the banded
//! adjacency encoding consumed by the topology model.
//!
//! A [`Graph`] stores `n` nodes with `d` continuous features each (the first
//! `k` columns are spatial coordinates) and an undirected simple edge set.
//! Graphs are immutable after construction.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Undirected spatial graph with per-node continuous features.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph<S: Scalar> {
    n: usize,
    d: usize,
    k: usize,
    feature_names: Vec<String>,
    features: Vec<S>, // n×d, row-major
    edges: Vec<(usize, usize)>, // i < j, sorted, deduplicated
    adj_offsets: Vec<usize>,
    adj_targets: Vec<usize>,
}

impl<S: Scalar> Graph<S> {
    /// Build a graph, validating edge endpoints and rejecting self-loops
    /// and duplicate edges.
    pub fn new(
        n: usize,
        features: Vec<S>,
        spatial_dims: usize,
        feature_names: Vec<String>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let d = feature_names.len();
        if features.len() != n * d {
            return Err(Error::dim("graph features", n * d, features.len()));
        }
        if spatial_dims > d {
            return Err(Error::InvalidArgument(format!(
                "spatial_dims {spatial_dims} exceeds feature count {d}"
            )));
        }
        let mut edges: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at node {a}")));
            }
            if b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a}, {b}) references node outside [0, {n})"
                )));
            }
        }
        let (adj_offsets, adj_targets) = build_csr(n, &edges);
        Ok(Self {
            n,
            d,
            k: spatial_dims,
            feature_names,
            features,
            edges,
            adj_offsets,
            adj_targets,
        })
    }

    /// Topology-only graph: zero features per node.
    pub fn from_topology(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, Vec::new(), 0, Vec::new(), edges)
    }

    /// Same topology with a fresh feature matrix attached.
    pub fn with_features(
        &self,
        features: Vec<S>,
        spatial_dims: usize,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        Self::new(
            self.n,
            features,
            spatial_dims,
            feature_names,
            self.edges.clone(),
        )
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_features(&self) -> usize {
        self.d
    }

    /// Number of leading feature columns that are spatial coordinates.
    pub fn spatial_dims(&self) -> usize {
        self.k
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj_targets[self.adj_offsets[v]..self.adj_offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj_offsets[v + 1] - self.adj_offsets[v]
    }

    pub fn feature(&self, v: usize, f: usize) -> S {
        self.features[v * self.d + f]
    }

    pub fn node_features(&self, v: usize) -> &[S] {
        &self.features[v * self.d..(v + 1) * self.d]
    }

    /// Flat n×d row-major feature matrix.
    pub fn features(&self) -> &[S] {
        &self.features
    }

    /// Euclidean distance between two nodes in the spatial columns.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        let mut acc = 0.0;
        for f in 0..self.k {
            let delta = self.feature(u, f).to_f64() - self.feature(v, f).to_f64();
            acc += delta * delta;
        }
        acc.sqrt()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.component_of(0).len() == self.n
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![start];
        let mut out = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            out.push(v);
            for &u in self.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        out
    }

    /// Connected components as node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let comp = self.component_of(s);
            for &v in &comp {
                seen[v] = true;
            }
            comps.push(comp);
        }
        comps
    }

    /// Induced subgraph on the largest connected component, nodes renumbered
    /// by ascending original index.
    pub fn largest_component(&self) -> Result<Graph<S>> {
        let mut comps = self.components();
        comps.sort_by_key(|c| std::cmp::Reverse(c.len()));
        let mut keep = comps.into_iter().next().unwrap_or_default();
        keep.sort_unstable();
        self.induced(&keep)
    }

    /// Induced subgraph on `keep`; node `keep[i]` becomes node `i`.
    pub fn induced(&self, keep: &[usize]) -> Result<Graph<S>> {
        let mut new_index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let mut features = Vec::with_capacity(keep.len() * self.d);
        for &v in keep {
            features.extend_from_slice(self.node_features(v));
        }
        let edges = self
            .edges
            .iter()
            .filter(|(a, b)| new_index[*a] != usize::MAX && new_index[*b] != usize::MAX)
            .map(|&(a, b)| (new_index[a], new_index[b]))
            .collect();
        Graph::new(
            keep.len(),
            features,
            self.k,
            self.feature_names.clone(),
            edges,
        )
    }
}

fn build_csr(n: usize, edges: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut degree = vec![0usize; n];
    for &(a, b) in edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let mut offsets = vec![0usize; n + 1];
    for v in 0..n {
        offsets[v + 1] = offsets[v] + degree[v];
    }
    let mut targets = vec![0usize; offsets[n]];
    let mut cursor = offsets.clone();
    for &(a, b) in edges {
        targets[cursor[a]] = b;
        cursor[a] += 1;
        targets[cursor[b]] = a;
        cursor[b] += 1;
    }
    for v in 0..n {
        targets[offsets[v]..offsets[v + 1]].sort_unstable();
    }
    (offsets, targets)
}

/// A node relabeling: `perm[original_index]` is the node's new position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeOrdering {
    perm: Vec<usize>,
}

impl NodeOrdering {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidArgument(
                    "ordering is not a permutation".into(),
                ));
            }
            seen[p] = true;
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn position(&self, original: usize) -> usize {
        self.perm[original]
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }
}

/// BFS ordering after a uniformly random relabeling of the nodes.
///
/// The relabeling supplies all stochasticity: the traversal itself starts at
/// relabeled node 0 and appends the not-yet-visited neighbors of each
/// sequence node in ascending relabeled order.
pub fn bfs_order<S: Scalar, R: Rng + ?Sized>(
    graph: &Graph<S>,
    rng: &mut R,
) -> Result<NodeOrdering> {
    let n = graph.num_nodes();
    let mut orig_of_label: Vec<usize> = (0..n).collect();
    orig_of_label.shuffle(rng);
    bfs_order_with_labels(graph, &orig_of_label)
}

/// Deterministic BFS ordering for a given relabeling
/// (`orig_of_label[label] = original index`).
pub fn bfs_order_with_labels<S: Scalar>(
    graph: &Graph<S>,
    orig_of_label: &[usize],
) -> Result<NodeOrdering> {
    let n = graph.num_nodes();
    if n == 0 {
        return NodeOrdering::new(Vec::new());
    }
    if orig_of_label.len() != n {
        return Err(Error::dim("bfs relabeling", n, orig_of_label.len()));
    }
    let mut label_of = vec![0usize; n];
    for (label, &orig) in orig_of_label.iter().enumerate() {
        label_of[orig] = label;
    }
    let mut seq = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    seq.push(0usize);
    visited[0] = true;
    let mut head = 0;
    let mut frontier = Vec::new();
    while head < seq.len() {
        let label = seq[head];
        head += 1;
        frontier.clear();
        for &nb in graph.neighbors(orig_of_label[label]) {
            let nl = label_of[nb];
            if !visited[nl] {
                frontier.push(nl);
            }
        }
        frontier.sort_unstable();
        for &nl in &frontier {
            visited[nl] = true;
            seq.push(nl);
        }
    }
    if seq.len() < n {
        return Err(Error::GraphNotConnected);
    }
    let mut pos_of_label = vec![0usize; n];
    for (pos, &label) in seq.iter().enumerate() {
        pos_of_label[label] = pos;
    }
    NodeOrdering::new((0..n).map(|orig| pos_of_label[label_of[orig]]).collect())
}

/// Banded encoding of a BFS-ordered adjacency matrix: row `i` stores the
/// connections of the node at position `i+1` to the `m` preceding positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandedAdjacency {
    n: usize,
    m: usize,
    rows: Vec<u8>, // (n−1)×m, entry (i, j) = connection between positions i+1 and i−j
}

impl BandedAdjacency {
    /// Validates band shape and zero padding at positions `j > i`.
    pub fn new(n: usize, m: usize, rows: Vec<u8>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(
                "banded adjacency needs n ≥ 1 and m ≥ 1".into(),
            ));
        }
        if rows.len() != (n - 1) * m {
            return Err(Error::dim("banded rows", (n - 1) * m, rows.len()));
        }
        for i in 0..n.saturating_sub(1) {
            for j in 0..m {
                let bit = rows[i * m + j];
                if bit > 1 {
                    return Err(Error::InvalidArgument("banded entries must be 0/1".into()));
                }
                if j > i && bit != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "banded row {i} has nonzero padding at offset {j}"
                    )));
                }
            }
        }
        Ok(Self { n, m, rows })
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.m
    }

    pub fn num_rows(&self) -> usize {
        self.n - 1
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i * self.m..(i + 1) * self.m]
    }
}

/// Encode a graph under `ordering` into its banded adjacency.
pub fn encode_banded<S: Scalar>(
    graph: &Graph<S>,
    ordering: &NodeOrdering,
    m: usize,
) -> Result<BandedAdjacency> {
    let n = graph.num_nodes();
    if ordering.len() != n {
        return Err(Error::dim("ordering length", n, ordering.len()));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("bandwidth m must be ≥ 1".into()));
    }
    let mut rows = vec![0u8; n.saturating_sub(1) * m];
    for &(u, v) in graph.edges() {
        let (a, b) = {
            let (pu, pv) = (ordering.position(u), ordering.position(v));
            (pu.min(pv), pu.max(pv))
        };
        let span = b - a;
        if span > m {
            return Err(Error::BandwidthExceeded { span, limit: m });
        }
        rows[(b - 1) * m + (span - 1)] = 1;
    }
    BandedAdjacency::new(n, m, rows)
}

/// Decode a banded adjacency back into a topology-only graph (the inverse of
/// [`encode_banded`] under the identity ordering).
pub fn decode_banded<S: Scalar>(banded: &BandedAdjacency) -> Graph<S> {
    let n = banded.num_nodes();
    let m = banded.bandwidth();
    let mut edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let row = banded.row(i);
        for (j, &bit) in row.iter().enumerate().take(m.min(i + 1)) {
            if bit == 1 {
                edges.push((i - j, i + 1));
            }
        }
    }
    Graph::from_topology(n, edges).expect("banded decode yields a valid simple graph")
}

/// Maximum index span of any edge under `ordering` (0 for edgeless graphs).
pub fn max_edge_span<S: Scalar>(graph: &Graph<S>, ordering: &NodeOrdering) -> usize {
    graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (pu, pv) = (ordering.position(u), ordering.position(v));
            pu.max(pv) - pu.min(pv)
        })
        .max()
        .unwrap_or(0)
}
