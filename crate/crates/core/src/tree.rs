//! Optimal tree-structured hiding schemes.
//!
//! `t(b)` is the best revenue obtainable from `b` by either selling it whole
//! or revealing one hidden attribute and recursing on the parts. Bundles are
//! visited in ascending id order, which places every child before its parent.

use crate::attribute::{AttributeSpec, NaturalBundle, Odometer};
use crate::error::Result;
use crate::instance::{approx_ge, ProblemInstance};
use crate::scheme::HidingScheme;
use crate::table::GainTable;

pub struct TreeSolution {
    table: GainTable,
    bidder_count: usize,
    t_values: Vec<f64>,
    best_split: Vec<f64>,
    optimal_scheme: HidingScheme,
    optimal_gain: f64,
}

impl TreeSolution {
    pub fn spec(&self) -> &AttributeSpec {
        self.table.spec()
    }

    pub fn table(&self) -> &GainTable {
        &self.table
    }

    pub(crate) fn bidder_count(&self) -> usize {
        self.bidder_count
    }

    /// `t(b)` by bundle id.
    pub fn t_by_id(&self, id: usize) -> f64 {
        self.t_values[id]
    }

    pub fn t(&self, bundle: &NaturalBundle) -> Result<f64> {
        Ok(self.t_values[self.spec().bundle_id(bundle)?])
    }

    /// Best revenue from revealing one attribute first; `-inf` for units.
    pub fn best_split_by_id(&self, id: usize) -> f64 {
        self.best_split[id]
    }

    /// True if selling the bundle whole is at least as good as any split.
    pub fn whole_beats_split(&self, id: usize) -> bool {
        approx_ge(self.table.second_price(id), self.best_split[id])
    }

    pub fn optimal_scheme(&self) -> &HidingScheme {
        &self.optimal_scheme
    }

    pub fn optimal_gain(&self) -> f64 {
        self.optimal_gain
    }

    /// `t((?,...,?))`.
    pub fn optimal_revenue(&self) -> f64 {
        *self.t_values.last().expect("non-empty lattice")
    }
}

pub fn tree_dp(inst: &ProblemInstance) -> TreeSolution {
    tree_dp_with_table(inst, GainTable::build(inst))
}

pub(crate) fn tree_dp_with_table(inst: &ProblemInstance, table: GainTable) -> TreeSolution {
    let spec = inst.spec().clone();
    let count = spec.bundle_count();
    let strides: Vec<usize> = (0..spec.k()).map(|i| spec.bundle_stride(i)).collect();
    let cards: Vec<usize> = spec.cardinalities().iter().map(|&c| c as usize).collect();

    let mut t = vec![0.0; count];
    let mut best_split = vec![f64::NEG_INFINITY; count];
    Odometer::new(&spec).for_each(|id, digits| {
        let mut best = f64::NEG_INFINITY;
        for (x, &d) in digits.iter().enumerate() {
            let c = cards[x];
            if d as usize == c {
                let s: f64 = (0..c).map(|j| t[id - (c - j) * strides[x]]).sum();
                if s > best {
                    best = s;
                }
            }
        }
        best_split[id] = best;
        t[id] = table.second_price(id).max(best);
    });

    let mut solution = TreeSolution {
        table,
        bidder_count: inst.bidder_count(),
        t_values: t,
        best_split,
        optimal_scheme: HidingScheme::empty(),
        optimal_gain: 0.0,
    };
    let mut kept = Vec::new();
    extract(&solution, spec.all_hidden(), &mut kept);
    solution.optimal_scheme = HidingScheme::new(kept);
    solution.optimal_gain = solution.optimal_revenue() - solution.table.baseline_revenue();
    solution
}

/// Keeps `bundle` when selling it whole ties or beats every split, otherwise
/// follows the best split, preferring the lowest attribute index on ties.
fn extract(sol: &TreeSolution, bundle: NaturalBundle, kept: &mut Vec<NaturalBundle>) {
    if bundle.is_unit() {
        return;
    }
    let spec = sol.spec();
    let id = spec.bundle_id(&bundle).expect("bundle from lattice");
    if sol.whole_beats_split(id) {
        kept.push(bundle);
        return;
    }
    let mut best: Option<(usize, f64)> = None;
    for x in bundle.hidden_attributes() {
        let c = spec.cardinality(x) as usize;
        let stride = spec.bundle_stride(x);
        let s: f64 = (0..c).map(|j| sol.t_values[id - (c - j) * stride]).sum();
        if best.map_or(true, |(_, b)| s > b) {
            best = Some((x, s));
        }
    }
    let (x, _) = best.expect("non-unit bundle has a hidden attribute");
    for child in spec.split(&bundle, x).expect("x is hidden") {
        extract(sol, child, kept);
    }
}

/// Bundles with at least two hidden attributes for which no split beats
/// selling whole.
pub fn hm_count(inst: &ProblemInstance) -> usize {
    hm_count_from(&tree_dp(inst))
}

pub fn hm_count_from(sol: &TreeSolution) -> usize {
    let mut count = 0;
    let cards = sol.spec().cardinalities().to_vec();
    Odometer::new(sol.spec()).for_each(|id, digits| {
        let hidden = digits.iter().zip(&cards).filter(|(d, c)| d == c).count();
        if hidden >= 2 && sol.whole_beats_split(id) {
            count += 1;
        }
    });
    count
}
