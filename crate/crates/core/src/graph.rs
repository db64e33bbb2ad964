//! Strategy profiles and the undirected graphs they induce.
//!
//! Edge formation is unilateral: the edge `{i, j}` exists as soon as either
//! endpoint declares it. The induced graph is always simple; a pair declared
//! by both endpoints is a single edge with two owners.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Extended, Result};

/// Agents are indexed `0..n`.
pub type Agent = usize;

/// Hop count between two agents, `Infinite` across components.
pub type Hops = Extended<u32>;

/// The joint strategy `s = (s_0, ..., s_{n-1})`; `strategies[i]` is the set of
/// agents `i` builds a link to, kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct StrategyProfile {
    n: usize,
    strategies: Vec<Vec<Agent>>,
}

#[derive(Deserialize)]
struct RawProfile {
    n: usize,
    strategies: Vec<Vec<Agent>>,
}

impl TryFrom<RawProfile> for StrategyProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        StrategyProfile::new(raw.n, raw.strategies)
    }
}

impl StrategyProfile {
    /// Validates and normalises a profile. Duplicate entries within one
    /// strategy collapse, since a strategy is a set.
    pub fn new(n: usize, strategies: Vec<Vec<Agent>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Structural("a profile needs at least one agent".into()));
        }
        if strategies.len() != n {
            return Err(Error::Structural(format!(
                "expected {n} strategies, got {}",
                strategies.len()
            )));
        }
        let mut normalised = Vec::with_capacity(n);
        for (i, mut s) in strategies.into_iter().enumerate() {
            if let Some(&j) = s.iter().find(|&&j| j >= n) {
                return Err(Error::Structural(format!(
                    "agent {i} links to {j}, outside 0..{n}"
                )));
            }
            if s.contains(&i) {
                return Err(Error::Structural(format!("agent {i} links to itself")));
            }
            s.sort_unstable();
            s.dedup();
            normalised.push(s);
        }
        Ok(StrategyProfile {
            n,
            strategies: normalised,
        })
    }

    /// The profile where nobody builds anything.
    pub fn empty(n: usize) -> Self {
        StrategyProfile {
            n,
            strategies: vec![Vec::new(); n],
        }
    }

    /// Skips validation; callers guarantee sorted, in-range, loop-free sets.
    pub(crate) fn from_normalised(n: usize, strategies: Vec<Vec<Agent>>) -> Self {
        StrategyProfile { n, strategies }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strategy(&self, i: Agent) -> &[Agent] {
        &self.strategies[i]
    }

    pub fn strategies(&self) -> &[Vec<Agent>] {
        &self.strategies
    }

    pub fn declares(&self, i: Agent, j: Agent) -> bool {
        self.strategies[i].binary_search(&j).is_ok()
    }

    /// Total number of declarations, counting parallel ones twice.
    pub fn declaration_count(&self) -> usize {
        self.strategies.iter().map(Vec::len).sum()
    }

    /// Replaces agent `i`'s strategy (a unilateral deviation).
    pub fn with_strategy(&self, i: Agent, strategy: &[Agent]) -> Result<Self> {
        let mut strategies = self.strategies.clone();
        strategies[i] = strategy.to_vec();
        StrategyProfile::new(self.n, strategies)
    }

    /// Relabels agents: agent `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[Agent]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Structural("permutation length mismatch".into()));
        }
        let mut strategies = vec![Vec::new(); self.n];
        for (i, s) in self.strategies.iter().enumerate() {
            strategies[perm[i]] = s.iter().map(|&j| perm[j]).collect();
        }
        StrategyProfile::new(self.n, strategies)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serialisation is infallible")
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// True iff some pair of agents declare each other.
pub fn has_parallel_declaration(profile: &StrategyProfile) -> bool {
    (0..profile.n()).any(|i| {
        profile
            .strategy(i)
            .iter()
            .any(|&j| j > i && profile.declares(j, i))
    })
}

/// An undirected edge with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(Agent, Agent);

impl Edge {
    pub fn new(a: Agent, b: Agent) -> Result<Self> {
        if a == b {
            return Err(Error::Structural(format!("loop at {a}")));
        }
        Ok(Edge(a.min(b), a.max(b)))
    }

    pub fn endpoints(self) -> (Agent, Agent) {
        (self.0, self.1)
    }
}

/// The simple graph `G_s` together with who declared each edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedGraph {
    n: usize,
    adjacency: Vec<Vec<Agent>>,
    owners: BTreeMap<Edge, Vec<Agent>>,
}

/// Builds `G_s`. Profiles are validated at construction, so this cannot fail.
pub fn induce_graph(profile: &StrategyProfile) -> InducedGraph {
    let n = profile.n();
    let mut owners: BTreeMap<Edge, Vec<Agent>> = BTreeMap::new();
    for i in 0..n {
        for &j in profile.strategy(i) {
            let e = Edge(i.min(j), i.max(j));
            let set = owners.entry(e).or_default();
            set.push(i);
            set.sort_unstable();
        }
    }
    let mut adjacency = vec![Vec::new(); n];
    for &Edge(a, b) in owners.keys() {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    InducedGraph {
        n,
        adjacency,
        owners,
    }
}

impl InducedGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.owners.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.owners.keys().copied()
    }

    pub fn owners(&self, edge: Edge) -> Option<&[Agent]> {
        self.owners.get(&edge).map(Vec::as_slice)
    }

    pub fn has_edge(&self, a: Agent, b: Agent) -> bool {
        a != b && self.owners.contains_key(&Edge(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, i: Agent) -> &[Agent] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: Agent) -> usize {
        self.adjacency[i].len()
    }

    pub fn adjacency(&self) -> &[Vec<Agent>] {
        &self.adjacency
    }

    /// Hop counts from `source` to every agent.
    pub fn distances_from(&self, source: Agent) -> Vec<Hops> {
        bfs(&self.adjacency, source, None)
    }

    /// Component label per agent, labels assigned in order of smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        component_labels(&self.adjacency, None)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// All bridges, found with a single low-link depth-first search.
    pub fn bridges(&self) -> Vec<Edge> {
        let n = self.n;
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut bridges = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            // (vertex, parent, next neighbour index)
            let mut stack: Vec<(Agent, Option<Agent>, usize)> = vec![(root, None, 0)];
            order[root] = time;
            low[root] = time;
            time += 1;
            while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
                if let Some(&w) = self.adjacency[v].get(*next) {
                    *next += 1;
                    if Some(w) == parent {
                        continue;
                    }
                    if order[w] == usize::MAX {
                        order[w] = time;
                        low[w] = time;
                        time += 1;
                        stack.push((w, Some(v), 0));
                    } else {
                        low[v] = low[v].min(order[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(p) = parent {
                        low[p] = low[p].min(low[v]);
                        if low[v] > order[p] {
                            bridges.push(Edge(p.min(v), p.max(v)));
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }
}

/// True iff removing `edge` increases the number of components.
pub fn is_bridge(graph: &InducedGraph, edge: Edge) -> Result<bool> {
    if !graph.owners.contains_key(&edge) {
        let (a, b) = edge.endpoints();
        return Err(Error::Structural(format!("edge {{{a},{b}}} is not in the graph")));
    }
    Ok(graph.bridges().binary_search(&edge).is_ok())
}

/// Exact all-pairs hop counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Hops>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: Agent, j: Agent) -> Hops {
        self.dist[i * self.n + j]
    }

    pub fn row(&self, i: Agent) -> &[Hops] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// Sum of distances from `i` to everyone else.
    pub fn row_sum(&self, i: Agent) -> Extended<u64> {
        self.row(i).iter().map(|d| d.map(u64::from)).sum()
    }

    /// Largest entry; `Infinite` if any pair is disconnected.
    pub fn diameter(&self) -> Hops {
        self.dist.iter().copied().max().unwrap_or(Extended::Finite(0))
    }
}

const PARALLEL_APSP_THRESHOLD: usize = 256;

/// Breadth-first search from every vertex.
pub fn all_pairs_distances(graph: &InducedGraph) -> DistanceMatrix {
    let n = graph.n;
    let rows: Vec<Vec<Hops>> = if n >= PARALLEL_APSP_THRESHOLD {
        (0..n).into_par_iter().map(|s| graph.distances_from(s)).collect()
    } else {
        (0..n).map(|s| graph.distances_from(s)).collect()
    };
    DistanceMatrix {
        n,
        dist: rows.into_iter().flatten().collect(),
    }
}

pub fn diameter(graph: &InducedGraph) -> Hops {
    all_pairs_distances(graph).diameter()
}

/// Agents within `radius` hops of `i`, excluding `i`, ascending.
pub fn neighborhood(graph: &InducedGraph, i: Agent, radius: u32) -> Result<Vec<Agent>> {
    if i >= graph.n {
        return Err(Error::Structural(format!("agent {i} outside 0..{}", graph.n)));
    }
    Ok(graph
        .distances_from(i)
        .into_iter()
        .enumerate()
        .filter(|&(j, d)| j != i && d <= Extended::Finite(radius))
        .map(|(j, _)| j)
        .collect())
}

/// BFS over an adjacency list, optionally ignoring one undirected edge.
pub(crate) fn bfs(adjacency: &[Vec<Agent>], source: Agent, skip: Option<Edge>) -> Vec<Hops> {
    let n = adjacency.len();
    let mut dist = vec![Extended::Infinite; n];
    let mut queue = VecDeque::with_capacity(n);
    dist[source] = Extended::Finite(0);
    queue.push_back((source, 0u32));
    while let Some((v, d)) = queue.pop_front() {
        for &w in &adjacency[v] {
            if skip == Some(Edge(v.min(w), v.max(w))) {
                continue;
            }
            if dist[w] == Extended::Infinite {
                dist[w] = Extended::Finite(d + 1);
                queue.push_back((w, d + 1));
            }
        }
    }
    dist
}

pub(crate) fn component_labels(adjacency: &[Vec<Agent>], skip: Option<Edge>) -> Vec<usize> {
    let n = adjacency.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        for (v, d) in bfs(adjacency, s, skip).into_iter().enumerate() {
            if d.is_finite() {
                label[v] = next;
            }
        }
        next += 1;
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(n: usize, s: &[&[Agent]]) -> StrategyProfile {
        StrategyProfile::new(n, s.iter().map(|x| x.to_vec()).collect()).unwrap()
    }

    fn circulant(n: usize, k: usize) -> StrategyProfile {
        StrategyProfile::new(n, (0..n).map(|i| (1..=k).map(|d| (i + d) % n).collect()).collect())
            .unwrap()
    }

    fn triangle() -> StrategyProfile {
        profile(3, &[&[1], &[2], &[0]])
    }

    fn path3() -> StrategyProfile {
        profile(3, &[&[1], &[2], &[]])
    }

    #[test]
    fn rejects_self_links_and_bad_indices() {
        assert!(matches!(
            StrategyProfile::new(3, vec![vec![0], vec![], vec![]]),
            Err(Error::Structural(_))
        ));
        assert!(matches!(
            StrategyProfile::new(3, vec![vec![3], vec![], vec![]]),
            Err(Error::Structural(_))
        ));
        assert!(StrategyProfile::new(3, vec![vec![1]]).is_err());
    }

    #[test]
    fn triangle_has_single_owners() {
        let g = induce_graph(&triangle());
        assert_eq!(g.edge_count(), 3);
        for e in g.edges() {
            assert_eq!(g.owners(e).unwrap().len(), 1);
        }
    }

    #[test]
    fn parallel_declaration_collapses() {
        let p = profile(3, &[&[1], &[0], &[]]);
        let g = induce_graph(&p);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.owners(Edge::new(0, 1).unwrap()), Some(&[0, 1][..]));
        assert_eq!(g.degree(2), 0);
        assert!(has_parallel_declaration(&p));
        assert!(!has_parallel_declaration(&triangle()));
    }

    #[test]
    fn ring_n8_k2() {
        let g = induce_graph(&circulant(8, 2));
        assert_eq!(g.edge_count(), 16);
        assert!((0..8).all(|i| g.degree(i) == 4));
        let d = all_pairs_distances(&g);
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert!(matches!(d.get(i, j), Extended::Finite(1 | 2)));
                }
            }
        }
        assert_eq!(d.diameter(), Extended::Finite(2));
        assert_eq!(neighborhood(&g, 0, 1).unwrap(), vec![1, 2, 6, 7]);
    }

    #[test]
    fn distances_and_diameter() {
        let d = all_pairs_distances(&induce_graph(&triangle()));
        assert_eq!(d.get(0, 1), Extended::Finite(1));
        assert_eq!(d.get(2, 0), Extended::Finite(1));
        let d = all_pairs_distances(&induce_graph(&path3()));
        assert_eq!(d.get(0, 2), Extended::Finite(2));
        let complete = profile(4, &[&[1, 2, 3], &[2, 3], &[3], &[]]);
        assert_eq!(diameter(&induce_graph(&complete)), Extended::Finite(1));
        let isolated = StrategyProfile::empty(2);
        assert_eq!(diameter(&induce_graph(&isolated)), Extended::Infinite);
    }

    #[test]
    fn neighbourhoods() {
        let g = induce_graph(&triangle());
        assert_eq!(neighborhood(&g, 0, 1).unwrap(), vec![1, 2]);
        let g = induce_graph(&path3());
        assert_eq!(neighborhood(&g, 0, 2).unwrap(), vec![1, 2]);
        assert_eq!(neighborhood(&g, 0, 1).unwrap(), vec![1]);
        assert!(neighborhood(&g, 5, 1).is_err());
    }

    #[test]
    fn bridges_on_small_graphs() {
        let g = induce_graph(&path3());
        assert!(is_bridge(&g, Edge::new(0, 1).unwrap()).unwrap());
        let g = induce_graph(&triangle());
        for e in g.edges().collect::<Vec<_>>() {
            assert!(!is_bridge(&g, e).unwrap());
        }
        let p = profile(4, &[&[1], &[2], &[], &[]]);
        assert!(matches!(
            is_bridge(&induce_graph(&p), Edge::new(2, 3).unwrap()),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn turbine_blade_edge_is_a_bridge() {
        let p = profile(6, &[&[1], &[2], &[0], &[0], &[0], &[0]]);
        let g = induce_graph(&p);
        for blade in 3..6 {
            assert!(is_bridge(&g, Edge::new(0, blade).unwrap()).unwrap());
        }
        assert!(!is_bridge(&g, Edge::new(0, 1).unwrap()).unwrap());
    }

    #[test]
    fn relabel_is_structure_preserving() {
        let p = profile(4, &[&[1], &[2], &[0], &[0]]);
        let q = p.relabel(&[3, 2, 1, 0]).unwrap();
        assert_eq!(q.strategy(3), &[2]);
        assert_eq!(q.strategy(0), &[3]);
        assert_eq!(induce_graph(&q).edge_count(), 4);
    }

    #[test]
    fn serde_round_trip_uses_contract_field_names() {
        let p = triangle();
        let json = p.to_json();
        assert_eq!(json, r#"{"n":3,"strategies":[[1],[2],[0]]}"#);
        let back: StrategyProfile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<StrategyProfile>(r#"{"n":2,"strategies":[[0],[]]}"#).is_err());
    }
}
