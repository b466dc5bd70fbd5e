use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::DerivationGraph;
use crate::dim::Dim;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub node: Dim,
    /// Group label of the chosen hyperedge; `None` for parameters.
    pub edge: Option<u32>,
}

/// Nodes in an order where every chosen hyperedge's sources come earlier.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("step {index}: {node} is not a node of the graph")]
    UnknownNode { index: usize, node: String },
    #[error("step {index}: {node} is scheduled twice")]
    Duplicate { index: usize, node: String },
    #[error("step {index}: {node} has no hyperedge and is not a parameter")]
    NoEdge { index: usize, node: String },
    #[error("step {index}: hyperedge {group} does not target {node}")]
    WrongEdge { index: usize, node: String, group: u32 },
    #[error("step {index}: source {input} of {node} is not scheduled earlier")]
    SourceNotReady { index: usize, node: String, input: String },
    #[error("goal {0} is not scheduled")]
    GoalMissing(String),
}

impl Schedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn covers(&self, d: &Dim) -> bool {
        self.steps.iter().any(|s| &s.node == d)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Dim> {
        self.steps.iter().map(|s| &s.node)
    }

    pub fn position(&self, d: &Dim) -> Option<usize> {
        self.steps.iter().position(|s| &s.node == d)
    }

    /// Linear scan: every step's sources precede it, each node appears once,
    /// and all goals are covered.
    pub fn validate(&self, g: &DerivationGraph) -> Result<(), ScheduleError> {
        let mut done: HashSet<&Dim> = HashSet::new();
        for (index, step) in self.steps.iter().enumerate() {
            let node = step.node.to_string();
            if !g.contains(&step.node) {
                return Err(ScheduleError::UnknownNode { index, node });
            }
            if done.contains(&step.node) {
                return Err(ScheduleError::Duplicate { index, node });
            }
            match step.edge {
                None if g.is_param(&step.node) => {}
                None => return Err(ScheduleError::NoEdge { index, node }),
                Some(group) => {
                    let e = g.edge(group).filter(|e| e.target == step.node);
                    let Some(e) = e else { return Err(ScheduleError::WrongEdge { index, node, group }) };
                    if let Some(s) = e.sources.iter().find(|s| !done.contains(s)) {
                        return Err(ScheduleError::SourceNotReady { index, node, input: s.to_string() });
                    }
                }
            }
            done.insert(&step.node);
        }
        match g.goals().find(|d| !done.contains(d)) {
            Some(goal) => Err(ScheduleError::GoalMissing(goal.to_string())),
            None => Ok(()),
        }
    }

    /// The steps needed for `targets`, following chosen edges backwards, in
    /// the original order.
    pub fn restrict<'a>(&self, g: &DerivationGraph, targets: impl IntoIterator<Item = &'a Dim>) -> Schedule {
        let mut need: HashSet<&Dim> = targets.into_iter().collect();
        let mut keep = vec![false; self.steps.len()];
        for (i, step) in self.steps.iter().enumerate().rev() {
            if !need.contains(&step.node) {
                continue;
            }
            keep[i] = true;
            if let Some(e) = step.edge.and_then(|l| g.edge(l)) {
                need.extend(e.sources.iter());
            }
        }
        Schedule { steps: self.steps.iter().zip(keep).filter(|(_, k)| *k).map(|(s, _)| s.clone()).collect() }
    }
}

/// Kahn's algorithm over hyperedges. A node becomes ready once any incoming
/// hyperedge has all sources scheduled; the least ready node by discovery
/// index goes next, with its least-labelled complete hyperedge.
pub fn topo_order(g: &DerivationGraph) -> Option<Schedule> {
    let n = g.node_count();
    let idx = |d: &Dim| g.index_of(d).expect("edge endpoints are nodes");
    let mut missing: Vec<usize> = g.edges().iter().map(|e| e.sources.len()).collect();
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, e) in g.edges().iter().enumerate() {
        for s in &e.sources {
            by_source[idx(s)].push(k);
        }
    }
    // least complete edge per node, as an edge index
    let mut best: Vec<Option<usize>> = vec![None; n];
    let mut ready: BTreeSet<(usize, String)> = BTreeSet::new();
    let mut scheduled = vec![false; n];
    for p in g.params() {
        ready.insert((idx(p), p.to_string()));
    }
    for (k, e) in g.edges().iter().enumerate() {
        if e.sources.is_empty() {
            let t = idx(&e.target);
            if best[t].is_none_or(|b| k < b) {
                best[t] = Some(k);
            }
            ready.insert((t, e.target.to_string()));
        }
    }

    let mut steps = Vec::new();
    while let Some((i, _)) = ready.pop_first() {
        if scheduled[i] {
            continue;
        }
        scheduled[i] = true;
        let node = g.node(i).clone();
        let edge = if g.is_param(&node) { None } else { best[i].map(|k| g.edges()[k].group) };
        steps.push(Step { node, edge });
        for &k in &by_source[i] {
            missing[k] -= 1;
            if missing[k] == 0 {
                let t = idx(&g.edges()[k].target);
                if scheduled[t] {
                    continue;
                }
                if best[t].is_none_or(|b| k < b) {
                    best[t] = Some(k);
                }
                ready.insert((t, g.node(t).to_string()));
            }
        }
    }

    let schedule = Schedule { steps };
    g.goals().all(|d| schedule.covers(d)).then_some(schedule)
}

/// Whether `target` is derivable from the parameters (least fixed point).
pub fn reachable(g: &DerivationGraph, target: &Dim) -> bool {
    let mut known: HashSet<&Dim> = g.params().collect();
    loop {
        if known.contains(target) {
            return true;
        }
        let before = known.len();
        for e in g.edges() {
            if !known.contains(&e.target) && e.sources.iter().all(|s| known.contains(s)) {
                known.insert(&e.target);
            }
        }
        if known.len() == before {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{Formula, Hyperedge, Rule};

    fn d(s: &str) -> Dim {
        Dim::parse(s).unwrap()
    }

    fn edge(sources: &[&str], to: &str) -> Hyperedge {
        Hyperedge::new(
            d(to),
            Rule::SegmentChain,
            "test",
            Formula::Linear(sources.iter().map(|s| (1, d(s))).collect()),
        )
    }

    #[test]
    fn two_cycle_is_absent() {
        let mut g = DerivationGraph::new();
        g.add_param(d("PQ"));
        g.add_node(d("AB"));
        g.add_node(d("CD"));
        g.add_goal(d("AB"));
        g.add_edge(edge(&["AB"], "CD")).unwrap();
        g.add_edge(edge(&["CD"], "AB")).unwrap();
        assert!(topo_order(&g).is_none());
        assert!(!reachable(&g, &d("AB")));
        assert!(reachable(&g, &d("PQ")));
    }

    #[test]
    fn alternatives_choose_least_label() {
        let mut g = DerivationGraph::new();
        g.add_param(d("AB"));
        g.add_param(d("BC"));
        g.add_goal(d("AC"));
        g.add_edge(edge(&["AB", "BC"], "AC")).unwrap();
        g.add_edge(edge(&["AB"], "AC")).unwrap();
        let s = topo_order(&g).unwrap();
        s.validate(&g).unwrap();
        assert_eq!(s.steps.last().unwrap().edge, Some(1));

        let mut alt = s.clone();
        alt.steps.last_mut().unwrap().edge = Some(2);
        alt.validate(&g).unwrap();
    }

    #[test]
    fn validator_rejects_early_use() {
        let mut g = DerivationGraph::new();
        g.add_param(d("AB"));
        g.add_goal(d("CD"));
        g.add_edge(edge(&["AB"], "EF")).unwrap();
        g.add_edge(edge(&["EF"], "CD")).unwrap();
        let bad = Schedule {
            steps: vec![
                Step { node: d("AB"), edge: None },
                Step { node: d("CD"), edge: Some(2) },
                Step { node: d("EF"), edge: Some(1) },
            ],
        };
        assert!(matches!(bad.validate(&g), Err(ScheduleError::SourceNotReady { .. })));
        let good = topo_order(&g).unwrap();
        assert_eq!(good.nodes().cloned().collect::<Vec<_>>(), vec![d("AB"), d("EF"), d("CD")]);
        assert_eq!(good.restrict(&g, [&d("EF")]).len(), 2);
    }

    #[test]
    fn pending_node_is_unreachable() {
        let mut g = DerivationGraph::new();
        g.add_param(d("AO"));
        g.add_node(d("AG"));
        assert!(!reachable(&g, &d("AG")));
    }
}
