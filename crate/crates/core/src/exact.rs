//! Ground-truth optimum: a maximum-weight set of pairwise-disjoint bundles.
//!
//! Candidates are the pruned relaxation variables. Branch-and-bound visits
//! them in descending weight order and bounds each subproblem by the
//! smaller of the remaining positive weight and a per-instantiation density
//! bound: any disjoint selection earns at most, for every instantiation, the
//! best `r(b) / |b|` among remaining candidates containing it.

use crate::attribute::NaturalBundle;
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::relax::prune_variables;
use crate::scheme::HidingScheme;
use crate::tree::{tree_dp, TreeSolution};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Largest candidate set the brute-force oracle accepts.
pub const BRUTE_FORCE_CAP: usize = 25;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Proven,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub gain: f64,
    pub scheme: HidingScheme,
    pub status: SearchStatus,
    pub nodes: u64,
}

/// Candidate bundles with weights and a dense conflict matrix.
pub struct ConflictGraph {
    bundles: Vec<NaturalBundle>,
    weights: Vec<f64>,
    members: Vec<Vec<usize>>,
    sizes: Vec<f64>,
    adjacency: Vec<Bitset>,
}

impl ConflictGraph {
    pub fn new(inst: &ProblemInstance, bundles: Vec<NaturalBundle>) -> Result<Self> {
        let weights = bundles
            .iter()
            .map(|b| inst.bundle_gain(b))
            .collect::<Result<Vec<_>>>()?;
        let spec = inst.spec();
        let members: Vec<Vec<usize>> = bundles.iter().map(|b| spec.instantiations_of(b)).collect();
        let sizes = members.iter().map(|m| m.len() as f64).collect();
        let n = bundles.len();
        let mut adjacency = vec![Bitset::new(n); n];
        for i in 0..n {
            for j in i + 1..n {
                if bundles[i].intersects(&bundles[j])? {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        Ok(Self {
            bundles,
            weights,
            members,
            sizes,
            adjacency,
        })
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn bundles(&self) -> &[NaturalBundle] {
        &self.bundles
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn conflicts(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }
}

pub fn exact_optimum(inst: &ProblemInstance, node_budget: u64) -> ExactSolution {
    exact_optimum_with(inst, &tree_dp(inst), node_budget).expect("tree built from this instance")
}

pub fn exact_optimum_with(inst: &ProblemInstance, tree: &TreeSolution, node_budget: u64) -> Result<ExactSolution> {
    let survivors = prune_variables(inst, tree)?;
    let graph = ConflictGraph::new(inst, survivors)?;
    Ok(branch_and_bound(&graph, inst.spec().instantiation_count(), node_budget))
}

/// Maximum-weight independent set of the conflict graph.
pub fn branch_and_bound(graph: &ConflictGraph, instantiation_count: usize, node_budget: u64) -> ExactSolution {
    let mut order: Vec<usize> = (0..graph.len()).filter(|&i| graph.weights[i] > 0.0).collect();
    order.sort_by(|&a, &b| graph.weights[b].total_cmp(&graph.weights[a]).then(a.cmp(&b)));

    let mut search = Search {
        graph,
        order,
        density: vec![0.0; instantiation_count],
        touched: Vec::new(),
        chosen: Vec::new(),
        best: Vec::new(),
        best_gain: 0.0,
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    let mut available = Bitset::new(graph.len());
    for &i in &search.order {
        available.insert(i);
    }
    search.explore(&available, 0, 0.0);

    let scheme = search.best.iter().map(|&i| graph.bundles[i].clone()).collect();
    ExactSolution {
        gain: search.best.iter().map(|&i| graph.weights[i]).sum(),
        scheme,
        status: if search.exhausted {
            SearchStatus::BudgetExhausted
        } else {
            SearchStatus::Proven
        },
        nodes: search.nodes,
    }
}

struct Search<'a> {
    graph: &'a ConflictGraph,
    order: Vec<usize>,
    density: Vec<f64>,
    touched: Vec<usize>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    best_gain: f64,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// `available` holds candidates compatible with the current selection;
    /// positions before `cursor` in `order` are already decided.
    fn explore(&mut self, available: &Bitset, cursor: usize, gain: f64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if gain > self.best_gain {
            self.best_gain = gain;
            self.best = self.chosen.clone();
        }
        let Some(pos) = (cursor..self.order.len()).find(|&p| available.contains(self.order[p])) else {
            return;
        };
        if gain + self.bound(available, pos) <= self.best_gain {
            return;
        }
        let v = self.order[pos];

        let mut with = available.clone();
        with.remove(v);
        with.subtract(&self.graph.adjacency[v]);
        self.chosen.push(v);
        self.explore(&with, pos + 1, gain + self.graph.weights[v]);
        self.chosen.pop();

        let mut without = available.clone();
        without.remove(v);
        self.explore(&without, pos + 1, gain);
    }

    fn bound(&mut self, available: &Bitset, from: usize) -> f64 {
        let mut weight_sum = 0.0;
        for &i in &self.order[from..] {
            if !available.contains(i) {
                continue;
            }
            weight_sum += self.graph.weights[i];
            let d = self.graph.weights[i] / self.graph.sizes[i];
            for &w in &self.graph.members[i] {
                if self.density[w] == 0.0 {
                    self.touched.push(w);
                }
                if d > self.density[w] {
                    self.density[w] = d;
                }
            }
        }
        let mut density_sum = 0.0;
        for w in self.touched.drain(..) {
            density_sum += self.density[w];
            self.density[w] = 0.0;
        }
        weight_sum.min(density_sum)
    }
}

/// Exhaustive optimum over every positive-gain non-unit bundle; a test
/// oracle independent of the tree-based pruning.
pub fn brute_force_optimum(inst: &ProblemInstance) -> Result<(f64, HidingScheme)> {
    let candidates = inst
        .spec()
        .enumerate_bundles()
        .filter(|b| !b.is_unit())
        .filter_map(|b| match inst.bundle_gain(&b) {
            Ok(g) if g > 0.0 => Some(Ok(b)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<Vec<_>>>()?;
    brute_force_optimum_over(inst, candidates)
}

/// Exhaustive optimum restricted to the given candidates.
pub fn brute_force_optimum_over(inst: &ProblemInstance, candidates: Vec<NaturalBundle>) -> Result<(f64, HidingScheme)> {
    if candidates.len() > BRUTE_FORCE_CAP {
        return Err(Error::BruteForceCap {
            cap: BRUTE_FORCE_CAP,
            count: candidates.len(),
        });
    }
    let graph = ConflictGraph::new(inst, candidates)?;
    let mut best = (0.0, Vec::new());
    let mut chosen = Vec::new();
    enumerate_independent(&graph, 0, 0.0, &mut chosen, &mut best);
    let scheme = best.1.iter().map(|&i| graph.bundles[i].clone()).collect();
    Ok((best.0, scheme))
}

fn enumerate_independent(
    graph: &ConflictGraph,
    next: usize,
    gain: f64,
    chosen: &mut Vec<usize>,
    best: &mut (f64, Vec<usize>),
) {
    if next == graph.len() {
        if gain > best.0 {
            *best = (gain, chosen.clone());
        }
        return;
    }
    enumerate_independent(graph, next + 1, gain, chosen, best);
    if chosen.iter().all(|&c| !graph.conflicts(c, next)) {
        chosen.push(next);
        enumerate_independent(graph, next + 1, gain + graph.weights[next], chosen, best);
        chosen.pop();
    }
}

#[derive(Clone, Debug)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn subtract(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}
