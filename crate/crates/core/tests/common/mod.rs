//! Shared test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use dimgraph::dim::Dim;
use dimgraph::graph::DerivationGraph;
use dimgraph::rules::{Formula, Hyperedge, Rule};
use proptest::prelude::*;

pub const FIXTURES: [(&str, &str); 5] = [
    ("parallelogram", include_str!("../../../../fixtures/parallelogram.gthm")),
    ("parallelogram_bad", include_str!("../../../../fixtures/parallelogram_bad.gthm")),
    ("parallelogram_bd", include_str!("../../../../fixtures/parallelogram_bd.gthm")),
    ("imo2012", include_str!("../../../../fixtures/imo2012.gthm")),
    ("imo2012_bad", include_str!("../../../../fixtures/imo2012_bad.gthm")),
];

pub const UNREACHABLE: &str = include_str!("../data/unreachable.gthm");

pub fn node(i: usize) -> Dim {
    Dim::len("Z", &format!("N{i:02}"))
}

pub fn edge(sources: &[usize], target: usize) -> Hyperedge {
    Hyperedge::new(node(target), Rule::SegmentChain, "test", Formula::Linear(sources.iter().map(|&s| (1, node(s))).collect()))
}

#[derive(Debug, Clone)]
pub struct Spec {
    pub n: usize,
    pub params: Vec<usize>,
    pub goals: Vec<usize>,
    pub edges: Vec<(Vec<usize>, usize)>,
}

impl Spec {
    pub fn build(&self) -> DerivationGraph {
        let mut g = DerivationGraph::new();
        for i in 0..self.n {
            if self.params.contains(&i) {
                g.add_param(node(i));
            } else {
                g.add_node(node(i));
            }
        }
        for &i in &self.goals {
            g.add_goal(node(i));
        }
        for (s, t) in &self.edges {
            g.add_edge(edge(s, *t)).unwrap();
        }
        g
    }
}

pub fn spec(max_nodes: usize, max_edges: usize) -> impl Strategy<Value = Spec> {
    (3..=max_nodes).prop_flat_map(move |n| {
        let params = prop::collection::btree_set(0..n, 1..=3.min(n - 1));
        let goals = prop::collection::btree_set(0..n, 1..=3);
        let edges = prop::collection::vec((prop::collection::btree_set(0..n, 0..=3), 0..n), 0..=max_edges);
        (Just(n), params, goals, edges).prop_map(|(n, params, goals, edges)| {
            let params: Vec<usize> = params.into_iter().collect();
            let edges = edges
                .into_iter()
                .filter(|(s, t)| !params.contains(t) && !s.contains(t))
                .map(|(s, t)| (s.into_iter().collect(), t))
                .collect();
            Spec { n, params, goals: goals.into_iter().collect(), edges }
        })
    })
}

/// Tries every assignment of one incoming edge per node; an order exists iff
/// under some assignment the goals are derivable by following only the
/// chosen edges.
pub fn brute_force_exists(s: &Spec) -> bool {
    let incoming: Vec<Vec<usize>> = (0..s.n).map(|t| (0..s.edges.len()).filter(|&k| s.edges[k].1 == t).collect()).collect();
    let choosers: Vec<usize> = (0..s.n).filter(|&t| !incoming[t].is_empty()).collect();
    let mut pick = vec![0usize; choosers.len()];
    loop {
        let mut known: HashSet<usize> = s.params.iter().copied().collect();
        loop {
            let before = known.len();
            for (c, &t) in choosers.iter().enumerate() {
                let (src, _) = &s.edges[incoming[t][pick[c]]];
                if !known.contains(&t) && src.iter().all(|x| known.contains(x)) {
                    known.insert(t);
                }
            }
            if known.len() == before {
                break;
            }
        }
        if s.goals.iter().all(|g| known.contains(g)) {
            return true;
        }
        let mut c = 0;
        loop {
            if c == choosers.len() {
                return false;
            }
            pick[c] += 1;
            if pick[c] < incoming[choosers[c]].len() {
                break;
            }
            pick[c] = 0;
            c += 1;
        }
    }
}

pub fn textbook_kahn(n: usize, params: &[usize], parent: &[Option<usize>]) -> Vec<usize> {
    let mut indeg: Vec<usize> = (0..n).map(|i| usize::from(parent[i].is_some())).collect();
    let mut ready: BTreeSet<usize> = params.iter().copied().filter(|&i| indeg[i] == 0).collect();
    let mut out = Vec::new();
    while let Some(i) = ready.pop_first() {
        out.push(i);
        for j in 0..n {
            if parent[j] == Some(i) {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
    }
    out
}
