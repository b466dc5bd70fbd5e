//! The derivation hypergraph, its growth from parameter nodes, and
//! scheduling.

mod dot;
mod schedule;

use indexmap::IndexSet;
use thiserror::Error;

use crate::dim::Dim;
use crate::dsl::{ExprRef, HypothesisModel};
use crate::rules::{discover, param_nodes, CapExceeded, Caps, Hyperedge};
use crate::scene::{Scene, Witness};

pub use dot::to_dot;
pub use schedule::{reachable, topo_order, Schedule, ScheduleError, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{0} is not a node of the graph")]
    UnknownNode(String),
    #[error("hyperedge into {0} targets a parameter node")]
    IntoParam(String),
    #[error("hyperedge into {0} lists its target among its sources")]
    SelfLoop(String),
}

/// Dimension nodes in discovery order, parameter and goal subsets, and
/// hyperedges in group-label order.
#[derive(Debug, Clone, Default)]
pub struct DerivationGraph {
    nodes: IndexSet<Dim>,
    params: Vec<usize>,
    goals: Vec<usize>,
    edges: Vec<Hyperedge>,
}

impl DerivationGraph {
    pub fn new() -> DerivationGraph {
        DerivationGraph::default()
    }

    /// Adds a node if absent; returns its discovery index.
    pub fn add_node(&mut self, d: Dim) -> usize {
        self.nodes.insert_full(d).0
    }

    pub fn add_param(&mut self, d: Dim) -> usize {
        let i = self.add_node(d);
        if !self.params.contains(&i) {
            self.params.push(i);
        }
        i
    }

    pub fn add_goal(&mut self, d: Dim) -> usize {
        let i = self.add_node(d);
        if !self.goals.contains(&i) {
            self.goals.push(i);
        }
        i
    }

    /// Adds an edge with the next group label. Sources must already be nodes;
    /// the target is added if new.
    pub fn add_edge(&mut self, mut e: Hyperedge) -> Result<u32, GraphError> {
        if let Some(s) = e.sources.iter().find(|s| !self.nodes.contains(*s)) {
            return Err(GraphError::UnknownNode(s.to_string()));
        }
        if e.sources.contains(&e.target) {
            return Err(GraphError::SelfLoop(e.target.to_string()));
        }
        if let Some(i) = self.nodes.get_index_of(&e.target) {
            if self.params.contains(&i) {
                return Err(GraphError::IntoParam(e.target.to_string()));
            }
        }
        self.add_node(e.target.clone());
        e.group = self.edges.len() as u32 + 1;
        let g = e.group;
        self.edges.push(e);
        Ok(g)
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = &Dim> {
        self.nodes.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, d: &Dim) -> bool {
        self.nodes.contains(d)
    }

    pub fn index_of(&self, d: &Dim) -> Option<usize> {
        self.nodes.get_index_of(d)
    }

    pub fn node(&self, i: usize) -> &Dim {
        &self.nodes[i]
    }

    pub fn params(&self) -> impl Iterator<Item = &Dim> {
        self.params.iter().map(|&i| &self.nodes[i])
    }

    pub fn goals(&self) -> impl Iterator<Item = &Dim> {
        self.goals.iter().map(|&i| &self.nodes[i])
    }

    pub fn is_param(&self, d: &Dim) -> bool {
        self.index_of(d).is_some_and(|i| self.params.contains(&i))
    }

    pub fn is_goal(&self, d: &Dim) -> bool {
        self.index_of(d).is_some_and(|i| self.goals.contains(&i))
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, group: u32) -> Option<&Hyperedge> {
        self.edges.get((group as usize).checked_sub(1)?)
    }

    pub fn incoming<'a>(&'a self, d: &'a Dim) -> impl Iterator<Item = &'a Hyperedge> + 'a {
        self.edges.iter().filter(move |e| &e.target == d)
    }

    /// Non-parameter nodes that no hyperedge targets.
    pub fn pending(&self) -> Vec<&Dim> {
        let targeted: IndexSet<&Dim> = self.edges.iter().map(|e| &e.target).collect();
        self.nodes
            .iter()
            .enumerate()
            .filter(|(i, d)| !self.params.contains(i) && !targeted.contains(d))
            .map(|(_, d)| d)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrowStatus {
    Connected,
    /// Some goal has no derivation from the parameters.
    Disconnected { unreached: Vec<String> },
}

/// The grown graph, kept even when disconnected so it can be drawn.
#[derive(Debug, Clone)]
pub struct Growth {
    pub graph: DerivationGraph,
    pub status: GrowStatus,
    pub caps: Vec<CapExceeded>,
    pub rings: usize,
    pub rejected: usize,
}

impl Growth {
    pub fn connected(&self) -> Option<&DerivationGraph> {
        matches!(self.status, GrowStatus::Connected).then_some(&self.graph)
    }
}

/// Lengths referenced by the claims.
pub fn goal_nodes(model: &HypothesisModel) -> Vec<Dim> {
    let mut out = Vec::new();
    for c in &model.claims {
        for e in [&c.lhs, &c.rhs] {
            e.visit_refs(&mut |r| {
                if let ExprRef::Len(a, b) = r {
                    if a.name != b.name {
                        let d = Dim::len(&a.name, &b.name);
                        if !out.contains(&d) {
                            out.push(d);
                        }
                    }
                }
            });
        }
    }
    out
}

/// Seeds the parameter and goal nodes and adds discovered hyperedges ring by
/// ring: each ring takes every edge whose sources are all already present.
pub fn grow(model: &HypothesisModel, scene: &Scene, witness: &Witness, caps: &Caps) -> Growth {
    let discovery = discover(model, scene, witness, caps);
    let mut g = DerivationGraph::new();
    for (_, d) in param_nodes(model) {
        g.add_param(d);
    }
    let goals = goal_nodes(model);
    for d in &goals {
        g.add_goal(d.clone());
    }
    let mut reached: IndexSet<Dim> = g.params().cloned().collect();
    let mut used = vec![false; discovery.edges.len()];
    let mut reports = discovery.caps;
    let mut rings = 0;
    let missing_params = model.params.len() != g.params.len();

    let unreached = |reached: &IndexSet<Dim>| -> Vec<String> {
        goals.iter().filter(|d| !reached.contains(*d)).map(|d| d.to_string()).collect()
    };

    loop {
        if unreached(&reached).is_empty() {
            break;
        }
        let ring: Vec<usize> = (0..discovery.edges.len())
            .filter(|&i| {
                let e = &discovery.edges[i];
                !used[i] && !g.is_param(&e.target) && e.sources.iter().all(|s| reached.contains(s))
            })
            .collect();
        if ring.is_empty() {
            break;
        }
        rings += 1;
        let mut capped = false;
        let mut fresh = Vec::new();
        for i in ring {
            let e = &discovery.edges[i];
            let new_node = !g.contains(&e.target);
            if g.edges.len() >= caps.max_edges {
                reports.push(CapExceeded::Edges { limit: caps.max_edges });
                capped = true;
                break;
            }
            if new_node && g.node_count() >= caps.max_nodes {
                reports.push(CapExceeded::Nodes { limit: caps.max_nodes });
                capped = true;
                break;
            }
            used[i] = true;
            g.add_edge(e.clone()).expect("ring edges have reached sources");
            fresh.push(e.target.clone());
        }
        reached.extend(fresh);
        if capped {
            break;
        }
    }

    let missing = unreached(&reached);
    let status = if missing.is_empty() && !missing_params {
        GrowStatus::Connected
    } else {
        let mut unreached = missing;
        if missing_params {
            for p in &model.params {
                if !param_nodes(model).iter().any(|(n, _)| n == p) {
                    unreached.push(format!("parameter {p}"));
                }
            }
        }
        GrowStatus::Disconnected { unreached }
    };
    Growth { graph: g, status, caps: reports, rings, rejected: discovery.rejected }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load;
    use crate::rules::{Formula, Rule};
    use crate::scene::{build_scene, SampleRange};

    fn d(s: &str) -> Dim {
        Dim::parse(s).unwrap()
    }

    fn copy(from: &str, to: &str) -> Hyperedge {
        Hyperedge::new(d(to), Rule::SegmentChain, "test", Formula::Linear(vec![(1, d(from))]))
    }

    #[test]
    fn edges_get_sequential_labels() {
        let mut g = DerivationGraph::new();
        g.add_param(d("AB"));
        assert_eq!(g.add_edge(copy("AB", "CD")).unwrap(), 1);
        assert_eq!(g.add_edge(copy("CD", "EF")).unwrap(), 2);
        assert_eq!(g.edge(2).unwrap().target, d("EF"));
        assert!(matches!(g.add_edge(copy("XY", "EF")), Err(GraphError::UnknownNode(_))));
        assert!(matches!(g.add_edge(copy("CD", "AB")), Err(GraphError::IntoParam(_))));
    }

    #[test]
    fn pending_nodes() {
        let mut g = DerivationGraph::new();
        g.add_param(d("AB"));
        g.add_goal(d("CD"));
        assert_eq!(g.pending(), vec![&d("CD")]);
        g.add_edge(copy("AB", "CD")).unwrap();
        assert!(g.pending().is_empty());
    }

    fn grow_text(text: &str) -> Growth {
        let model = load(text).unwrap();
        let scene = build_scene(&model).unwrap();
        let w = Witness::draw(&scene, 42, &SampleRange::default()).unwrap();
        grow(&model, &scene, &w, &Caps::default())
    }

    #[test]
    fn parallelogram_grows_connected() {
        let g = grow_text(include_str!("../../../../fixtures/parallelogram.gthm"));
        assert_eq!(g.status, GrowStatus::Connected);
        let params: Vec<String> = g.graph.params().map(|p| p.to_string()).collect();
        assert_eq!(params, ["AO", "EO", "BE"]);
        assert!(g.graph.node_count() <= Caps::default().max_nodes);
    }

    #[test]
    fn isolated_goal_is_disconnected() {
        let text = "param x\nparam y\nparam z\npoint O = origin\npoint A = baseline(O, x)\nline OA = through(O, A)\n\
                    point B = offset_perp(A, OA, y)\npoint C = on_segment(O, B, z)\nclaim len(A,C) = len(O,C)\n";
        let g = grow_text(text);
        assert!(matches!(g.status, GrowStatus::Disconnected { .. }));
        assert!(g.connected().is_none());
    }
}
