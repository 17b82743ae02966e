//! Bipartite occupancy graphs and matchings.
//!
//! Vertices are 0-based on both sides. The occupancy graph of a [`CellSet`]
//! puts row `i` at left index `i - 1` and column `j` at right index `j - 1`.
//!
//! The central routine is [`merge_matchings`]: given a matching covering a
//! set of left vertices and another covering a set of right vertices, it
//! combines them into one matching covering both sets by walking the paths
//! and cycles of their symmetric difference. Together with
//! [`saturating_matching`] this yields a matching covering every
//! maximum-degree vertex of a graph whose degrees are bounded, which is what
//! the symbol-layer fill in [`crate::builder`] peels off one layer at a time.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::square::CellSet;

/// `(left, right)` endpoint indices.
pub type Edge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A vertex of a bipartite graph. Ordered left before right, then by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub side: Side,
    pub index: usize,
}

impl Vertex {
    pub const fn left(index: usize) -> Self {
        Self {
            side: Side::Left,
            index,
        }
    }

    pub const fn right(index: usize) -> Self {
        Self {
            side: Side::Right,
            index,
        }
    }

    /// The endpoint of `edge` opposite to `self`.
    fn across(self, edge: Edge) -> Vertex {
        match self.side {
            Side::Left => Vertex::right(edge.1),
            Side::Right => Vertex::left(edge.0),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "L{}", self.index),
            Side::Right => write!(f, "R{}", self.index),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge ({0},{1}) is outside the graph")]
    EdgeOutOfRange(usize, usize),
    #[error("edge ({0},{1}) listed twice")]
    DuplicateEdge(usize, usize),
    #[error("edges {0:?} and {1:?} share an endpoint")]
    SharedEndpoint(Edge, Edge),
    #[error("target vertex {0} is outside the graph")]
    TargetOutOfRange(Vertex),
    #[error(
        "no matching saturates the targets: {} {side:?} vertices {witness:?} \
         have only {} neighbours {neighbours:?}",
        witness.len(),
        neighbours.len()
    )]
    NoSaturation {
        side: Side,
        /// A set `Z` of target-side vertices with `|Z| > |N(Z)|`.
        witness: Vec<usize>,
        neighbours: Vec<usize>,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// A simple bipartite graph with sorted adjacency lists on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new<I>(left_size: usize, right_size: usize, edges: I) -> Result<Self, MatchingError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut left_adj = vec![Vec::new(); left_size];
        let mut right_adj = vec![Vec::new(); right_size];
        let mut seen = HashSet::new();
        for (l, r) in edges {
            if l >= left_size || r >= right_size {
                return Err(MatchingError::EdgeOutOfRange(l, r));
            }
            if !seen.insert((l, r)) {
                return Err(MatchingError::DuplicateEdge(l, r));
            }
            left_adj[l].push(r);
            right_adj[r].push(l);
        }
        left_adj.iter_mut().for_each(|a| a.sort_unstable());
        right_adj.iter_mut().for_each(|a| a.sort_unstable());
        Ok(Self {
            left_adj,
            right_adj,
        })
    }

    pub fn left_size(&self) -> usize {
        self.left_adj.len()
    }

    pub fn right_size(&self) -> usize {
        self.right_adj.len()
    }

    pub fn size(&self, side: Side) -> usize {
        self.adjacency(side).len()
    }

    fn adjacency(&self, side: Side) -> &[Vec<usize>] {
        match side {
            Side::Left => &self.left_adj,
            Side::Right => &self.right_adj,
        }
    }

    /// Neighbours of `v`, ascending.
    pub fn neighbours(&self, v: Vertex) -> &[usize] {
        &self.adjacency(v.side)[v.index]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbours(v).len()
    }

    pub fn has_edge(&self, (l, r): Edge) -> bool {
        self.left_adj
            .get(l)
            .is_some_and(|adj| adj.binary_search(&r).is_ok())
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.left_adj
            .iter()
            .enumerate()
            .flat_map(|(l, adj)| adj.iter().map(move |&r| (l, r)))
    }

    pub fn edge_count(&self) -> usize {
        self.left_adj.iter().map(Vec::len).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.left_adj
            .iter()
            .chain(&self.right_adj)
            .map(Vec::len)
            .max()
            .unwrap_or(0)
    }

    /// Vertices on `side` whose degree is exactly `degree`.
    pub fn vertices_of_degree(&self, side: Side, degree: usize) -> Vec<usize> {
        self.adjacency(side)
            .iter()
            .enumerate()
            .filter(|(_, adj)| adj.len() == degree)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Rows become left vertices, columns right vertices, cells edges.
pub fn occupancy_graph(cells: &CellSet) -> BipartiteGraph {
    BipartiteGraph::new(
        cells.rows(),
        cells.cols(),
        cells.iter().map(|(r, c)| (r - 1, c - 1)),
    )
    .expect("cell set coordinates are in bounds and distinct")
}

/// A set of edges with pairwise disjoint endpoints.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    edges: BTreeSet<Edge>,
}

impl Matching {
    pub fn new<I: IntoIterator<Item = Edge>>(edges: I) -> Result<Self, MatchingError> {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        let mut by_left: BTreeMap<usize, Edge> = BTreeMap::new();
        let mut by_right: BTreeMap<usize, Edge> = BTreeMap::new();
        for &e in &edges {
            if let Some(&prev) = by_left.get(&e.0).or_else(|| by_right.get(&e.1)) {
                return Err(MatchingError::SharedEndpoint(prev, e));
            }
            by_left.insert(e.0, e);
            by_right.insert(e.1, e);
        }
        Ok(Self { edges })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: Edge) -> bool {
        self.edges.contains(&edge)
    }

    pub fn covers(&self, v: Vertex) -> bool {
        self.edges.iter().any(|&(l, r)| match v.side {
            Side::Left => l == v.index,
            Side::Right => r == v.index,
        })
    }

    pub fn is_subset_of(&self, graph: &BipartiteGraph) -> bool {
        self.edges.iter().all(|&e| graph.has_edge(e))
    }
}

/// Finds a matching covering exactly the `targets` on `side`.
///
/// Runs one augmenting-path search per target in increasing index order.
/// Each step takes the lowest free neighbour if there is one, and otherwise
/// tries to reroute the owners of the neighbours in increasing index order. Only targets ever become
/// matched on `side`, so the result has exactly `|targets|` edges.
pub fn saturating_matching(
    graph: &BipartiteGraph,
    side: Side,
    targets: &[usize],
) -> Result<Matching, MatchingError> {
    let targets: BTreeSet<usize> = targets.iter().copied().collect();
    let adj = graph.adjacency(side);
    if let Some(&t) = targets.iter().find(|&&t| t >= adj.len()) {
        return Err(MatchingError::TargetOutOfRange(Vertex { side, index: t }));
    }
    let mut owner: Vec<Option<usize>> = vec![None; graph.size(side.other())];
    let mut visited = vec![false; owner.len()];
    for &t in &targets {
        visited.fill(false);
        if !augment(t, adj, &mut owner, &mut visited) {
            let mut witness: BTreeSet<usize> = BTreeSet::from([t]);
            let mut neighbours = Vec::new();
            for (w, _) in visited.iter().enumerate().filter(|(_, &v)| v) {
                neighbours.push(w);
                witness.extend(owner[w]);
            }
            return Err(MatchingError::NoSaturation {
                side,
                witness: witness.into_iter().collect(),
                neighbours,
            });
        }
    }
    let edges = owner
        .iter()
        .enumerate()
        .filter_map(|(w, u)| u.map(|u| (u, w)))
        .map(|(u, w)| match side {
            Side::Left => (u, w),
            Side::Right => (w, u),
        });
    let matching = Matching::new(edges).expect("augmentation keeps a matching");
    debug_assert_eq!(matching.len(), targets.len());
    Ok(matching)
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    owner: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    if let Some(&w) = adj[u].iter().find(|&&w| !visited[w] && owner[w].is_none()) {
        visited[w] = true;
        owner[w] = Some(u);
        return true;
    }
    for &w in &adj[u] {
        if visited[w] {
            continue;
        }
        visited[w] = true;
        if let Some(prev) = owner[w] {
            if augment(prev, adj, owner, visited) {
                owner[w] = Some(u);
                return true;
            }
        }
    }
    false
}

/// Which of the two matchings an edge of the symmetric difference came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    M,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Path,
    Cycle,
}

/// A connected piece of `M △ N`, in traversal order.
///
/// For a path, `vertices` has one more entry than `edges` and starts at the
/// smaller endpoint. For a cycle the start vertex is not repeated at the end,
/// it is the smallest vertex of the cycle, and the walk leaves it along its
/// `M` edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    pub edges: Vec<(Tag, Edge)>,
    pub vertices: Vec<Vertex>,
}

impl Component {
    pub fn edges_tagged(&self, tag: Tag) -> impl Iterator<Item = Edge> + '_ {
        self.edges
            .iter()
            .filter(move |(t, _)| *t == tag)
            .map(|&(_, e)| e)
    }
}

/// Splits `M △ N` into its maximal alternating paths and cycles.
///
/// Paths come first, ordered by their starting endpoint, then cycles ordered
/// by their smallest vertex.
pub fn symmetric_difference_components(m: &Matching, n: &Matching) -> Vec<Component> {
    let mut incident: BTreeMap<Vertex, Vec<(Tag, Edge)>> = BTreeMap::new();
    let tagged = m
        .edges
        .difference(&n.edges)
        .map(|&e| (Tag::M, e))
        .chain(n.edges.difference(&m.edges).map(|&e| (Tag::N, e)));
    for (tag, e) in tagged {
        incident
            .entry(Vertex::left(e.0))
            .or_default()
            .push((tag, e));
        incident
            .entry(Vertex::right(e.1))
            .or_default()
            .push((tag, e));
    }

    let mut used: HashSet<Edge> = HashSet::new();
    let mut components = Vec::new();

    for (&start, edges) in &incident {
        if edges.len() == 1 && !used.contains(&edges[0].1) {
            components.push(walk(
                start,
                edges[0],
                ComponentKind::Path,
                &incident,
                &mut used,
            ));
        }
    }
    for (&start, edges) in &incident {
        if let Some(&first) = edges
            .iter()
            .filter(|(_, e)| !used.contains(e))
            .min_by_key(|(tag, _)| *tag == Tag::N)
        {
            components.push(walk(
                start,
                first,
                ComponentKind::Cycle,
                &incident,
                &mut used,
            ));
        }
    }
    components
}

fn walk(
    start: Vertex,
    first: (Tag, Edge),
    kind: ComponentKind,
    incident: &BTreeMap<Vertex, Vec<(Tag, Edge)>>,
    used: &mut HashSet<Edge>,
) -> Component {
    let mut edges = vec![first];
    let mut vertices = vec![start];
    used.insert(first.1);
    let mut at = start.across(first.1);
    loop {
        if at != start {
            vertices.push(at);
        }
        let next = incident[&at].iter().find(|(_, e)| !used.contains(e));
        match next {
            Some(&(tag, e)) => {
                used.insert(e);
                edges.push((tag, e));
                at = at.across(e);
            }
            None => break,
        }
    }
    Component {
        kind,
        edges,
        vertices,
    }
}

/// Combines a matching `m` covering `x1` (left) and a matching `n` covering
/// `y1` (right) into one matching `K ⊆ M ∪ N` covering `x1 ∪ y1`.
///
/// `K` is `M ∩ N` together with one choice of edges per component of
/// `M △ N`: the `M` edges of every cycle, and for each path the edges
/// selected by the case analysis on where its second and last vertices lie.
/// Each membership that analysis relies on is checked rather than assumed.
pub fn merge_matchings(
    graph: &BipartiteGraph,
    m: &Matching,
    n: &Matching,
    x1: &[usize],
    y1: &[usize],
) -> Result<Matching, MatchingError> {
    let x1: BTreeSet<usize> = x1.iter().copied().collect();
    let y1: BTreeSet<usize> = y1.iter().copied().collect();
    check_cover(graph, m, Side::Left, &x1, "M")?;
    check_cover(graph, n, Side::Right, &y1, "N")?;

    let in_x1 = |v: Vertex| v.side == Side::Left && x1.contains(&v.index);
    let in_y1 = |v: Vertex| v.side == Side::Right && y1.contains(&v.index);
    // Targets of the matching with the given tag.
    let targets_of = |tag: Tag, v: Vertex| match tag {
        Tag::M => in_x1(v),
        Tag::N => in_y1(v),
    };
    let other = |tag: Tag| match tag {
        Tag::M => Tag::N,
        Tag::N => Tag::M,
    };

    let mut merged: Vec<Edge> = m.edges.intersection(&n.edges).copied().collect();
    for comp in symmetric_difference_components(m, n) {
        let take = match comp.kind {
            ComponentKind::Cycle => Tag::M,
            ComponentKind::Path if comp.edges.len() == 1 => comp.edges[0].0,
            ComponentKind::Path => {
                let first = comp.edges[0].0;
                let second = other(first);
                let (v1, v2) = (comp.vertices[0], comp.vertices[1]);
                let last = *comp.vertices.last().expect("paths have vertices");
                if targets_of(first, v2) {
                    if targets_of(second, v1) {
                        return Err(violated(format!(
                            "path starting at {v1} is not maximal: {v1} is a target of the other matching"
                        )));
                    }
                    if targets_of(first, last) {
                        first
                    } else if targets_of(second, last) {
                        second
                    } else {
                        return Err(violated(format!(
                            "path from {v1} ends at {last}, which neither matching targets"
                        )));
                    }
                } else if targets_of(second, v2) {
                    if !targets_of(first, v1) {
                        return Err(violated(format!(
                            "path starting at {v1} begins with an edge whose endpoint is not a target"
                        )));
                    }
                    first
                } else {
                    return Err(violated(format!(
                        "{v2} is covered by both matchings but targeted by neither"
                    )));
                }
            }
        };
        let chosen: Vec<Edge> = comp.edges_tagged(take).collect();
        let covered = |v: &Vertex| {
            chosen.iter().any(|&e| match v.side {
                Side::Left => e.0 == v.index,
                Side::Right => e.1 == v.index,
            })
        };
        if let Some(v) = comp
            .vertices
            .iter()
            .find(|&&v| (in_x1(v) || in_y1(v)) && !covered(&v))
        {
            return Err(violated(format!("merged edges leave target {v} uncovered")));
        }
        merged.extend(chosen);
    }

    let k = Matching::new(merged)
        .map_err(|e| violated(format!("merged edge set is not a matching: {e}")))?;
    Ok(k)
}

fn violated(msg: String) -> MatchingError {
    MatchingError::PreconditionViolated(msg)
}

fn check_cover(
    graph: &BipartiteGraph,
    matching: &Matching,
    side: Side,
    targets: &BTreeSet<usize>,
    name: &str,
) -> Result<(), MatchingError> {
    if !matching.is_subset_of(graph) {
        return Err(violated(format!("{name} uses an edge not in the graph")));
    }
    if matching.len() != targets.len() {
        return Err(violated(format!(
            "{name} has {} edges but must have exactly {}",
            matching.len(),
            targets.len()
        )));
    }
    if let Some(&t) = targets
        .iter()
        .find(|&&t| !matching.covers(Vertex { side, index: t }))
    {
        return Err(violated(format!(
            "{name} does not cover {}",
            Vertex { side, index: t }
        )));
    }
    Ok(())
}

/// A matching covering `x1 ∪ y1`: saturate each side, then merge.
pub fn covering_matching(
    graph: &BipartiteGraph,
    x1: &[usize],
    y1: &[usize],
) -> Result<Matching, MatchingError> {
    let m = saturating_matching(graph, Side::Left, x1)?;
    let n = saturating_matching(graph, Side::Right, y1)?;
    merge_matchings(graph, &m, &n, x1, y1)
}
