//! Weighted-matching heuristic for all-binary attribute spaces.
//!
//! Two instantiations at Hamming distance one merge into a bundle with a
//! single hidden attribute. Instantiations split by coordinate parity, and
//! every merge joins an even vertex to an odd one, so a bipartite
//! maximum-weight matching finds the best scheme whose bundles each hide one
//! attribute.

use crate::attribute::{AttributeSpec, NaturalBundle, Slot};
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::scheme::HidingScheme;

#[derive(Clone, Debug, PartialEq)]
pub struct MatchEdge {
    /// Endpoint with even coordinate sum.
    pub even: usize,
    /// Endpoint with odd coordinate sum.
    pub odd: usize,
    pub bundle: NaturalBundle,
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct MatchGraph {
    spec: AttributeSpec,
    edges: Vec<MatchEdge>,
}

impl MatchGraph {
    pub fn spec(&self) -> &AttributeSpec {
        &self.spec
    }

    pub fn edges(&self) -> &[MatchEdge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.spec.instantiation_count()
    }
}

pub fn parity(index: usize) -> bool {
    index.count_ones() % 2 == 1
}

/// Edges between instantiations differing in one attribute, weighted by the
/// merged bundle's gain; non-positive gains are dropped.
pub fn build_match_graph(inst: &ProblemInstance) -> Result<MatchGraph> {
    let spec = inst.spec();
    if let Some((attribute, &cardinality)) = spec
        .cardinalities()
        .iter()
        .enumerate()
        .find(|(_, &c)| c != 2)
    {
        return Err(Error::NonBinaryAttributes {
            attribute,
            cardinality,
        });
    }
    let k = spec.k();
    let mut edges = Vec::new();
    for w in 0..spec.instantiation_count() {
        // Binary mixed radix: attribute x is bit (k - 1 - x).
        for x in 0..k {
            let bit = 1usize << (k - 1 - x);
            if w & bit != 0 {
                continue;
            }
            let mut slots: Vec<Slot> = spec.instantiation(w).0.into_iter().map(Slot::Value).collect();
            slots[x] = Slot::Hidden;
            let bundle = NaturalBundle::new(slots);
            let weight = inst.bundle_gain(&bundle)?;
            if weight > 0.0 {
                let (even, odd) = if parity(w) { (w | bit, w) } else { (w, w | bit) };
                edges.push(MatchEdge {
                    even,
                    odd,
                    bundle,
                    weight,
                });
            }
        }
    }
    Ok(MatchGraph {
        spec: spec.clone(),
        edges,
    })
}

/// Exact maximum-weight bipartite matching by successive shortest augmenting
/// paths: each round augments along the path of largest weight gain and the
/// search stops once no path gains weight.
pub fn max_weight_matching(graph: &MatchGraph) -> HidingScheme {
    let m = graph.vertex_count();
    let edges = graph.edges();
    // Residual network: source -> even -> odd -> sink, costs are negated weights.
    let source = m;
    let sink = m + 1;
    let nodes = m + 2;
    let mut arcs: Vec<Arc> = Vec::new();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut add_arc = |arcs: &mut Vec<Arc>, from: usize, to: usize, cost: f64| {
        adjacency[from].push(arcs.len());
        arcs.push(Arc { to, cap: 1, cost });
        adjacency[to].push(arcs.len());
        arcs.push(Arc { to: from, cap: 0, cost: -cost });
    };
    let mut touched = vec![false; m];
    for e in edges {
        touched[e.even] = true;
        touched[e.odd] = true;
    }
    for w in (0..m).filter(|&w| touched[w]) {
        if parity(w) {
            add_arc(&mut arcs, w, sink, 0.0);
        } else {
            add_arc(&mut arcs, source, w, 0.0);
        }
    }
    let edge_arcs: Vec<usize> = edges
        .iter()
        .map(|e| {
            let id = arcs.len();
            add_arc(&mut arcs, e.even, e.odd, -e.weight);
            id
        })
        .collect();

    loop {
        // Bellman-Ford on the residual graph; the network has no negative
        // cycles after each shortest-path augmentation.
        let mut dist = vec![f64::INFINITY; nodes];
        let mut via = vec![usize::MAX; nodes];
        dist[source] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for u in 0..nodes {
                if dist[u] == f64::INFINITY {
                    continue;
                }
                for &a in &adjacency[u] {
                    let arc = &arcs[a];
                    if arc.cap > 0 && dist[u] + arc.cost < dist[arc.to] - 1e-12 {
                        dist[arc.to] = dist[u] + arc.cost;
                        via[arc.to] = a;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if !(dist[sink] < -1e-12) {
            break;
        }
        let mut v = sink;
        while v != source {
            let a = via[v];
            arcs[a].cap -= 1;
            arcs[a ^ 1].cap += 1;
            v = arcs[a ^ 1].to;
        }
    }

    edges
        .iter()
        .zip(&edge_arcs)
        .filter(|(_, &a)| arcs[a].cap == 0)
        .map(|(e, _)| e.bundle.clone())
        .collect()
}

struct Arc {
    to: usize,
    cap: i32,
    cost: f64,
}

/// Total weight of the matching heuristic's scheme.
pub fn matching_gain(inst: &ProblemInstance) -> Result<(f64, HidingScheme)> {
    let graph = build_match_graph(inst)?;
    let scheme = max_weight_matching(&graph);
    let gain = graph
        .edges()
        .iter()
        .filter(|e| scheme.contains(&e.bundle))
        .map(|e| e.weight)
        .sum();
    Ok((gain, scheme))
}
