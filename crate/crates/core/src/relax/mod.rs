//! Integer program over natural bundles, its preprocessing and the linear
//! relaxation that bounds the optimal revenue from above.
//!
//! The program has one variable `z_b` per candidate bundle with weight
//! `r(b)` and a packing constraint `z_a + z_b <= 1` for every intersecting
//! pair. Components of the conflict graph are independent, so each one is
//! solved on its own; an isolated variable simply takes `z = 1`.

pub mod simplex;

use std::collections::BTreeMap;
use std::io::Write;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::attribute::NaturalBundle;
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::tree::{tree_dp, TreeSolution};

use simplex::{maximize, SimplexOutcome};

/// Non-unit bundles that no split beats and that have positive gain.
pub fn prune_variables(inst: &ProblemInstance, tree: &TreeSolution) -> Result<Vec<NaturalBundle>> {
    if tree.spec() != inst.spec() || tree.bidder_count() != inst.bidder_count() {
        return Err(Error::InstanceMismatch);
    }
    let spec = inst.spec();
    let table = tree.table();
    Ok((0..spec.bundle_count())
        .filter(|&id| {
            tree.best_split_by_id(id) > f64::NEG_INFINITY
                && tree.whole_beats_split(id)
                && table.gain(id) > 0.0
        })
        .map(|id| spec.bundle(id))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    variables: Vec<NaturalBundle>,
    weights: Vec<f64>,
    conflicts: Vec<(usize, usize)>,
}

impl LinearProgram {
    pub fn new(variables: Vec<NaturalBundle>, weights: Vec<f64>) -> Result<Self> {
        if variables.len() != weights.len() {
            return Err(Error::InvalidParameters("one weight per variable".into()));
        }
        let mut conflicts = Vec::new();
        for i in 0..variables.len() {
            for j in i + 1..variables.len() {
                if variables[i].intersects(&variables[j])? {
                    conflicts.push((i, j));
                }
            }
        }
        Ok(Self {
            variables,
            weights,
            conflicts,
        })
    }

    pub fn variables(&self) -> &[NaturalBundle] {
        &self.variables
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Intersecting pairs `(i, j)` with `i < j`.
    pub fn conflicts(&self) -> &[(usize, usize)] {
        &self.conflicts
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// Writes the program in CPLEX LP text format; see `docs/lp-format.md`.
    pub fn write_lp<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "\\ attribute hiding relaxation: {} variables", self.len())?;
        for (i, b) in self.variables.iter().enumerate() {
            writeln!(out, "\\ z{i} = {b}")?;
        }
        writeln!(out, "Maximize")?;
        write!(out, " obj:")?;
        if self.is_empty() {
            write!(out, " 0 z")?;
        }
        for (i, w) in self.weights.iter().enumerate() {
            let sign = if i == 0 { "" } else { " +" };
            write!(out, "{sign} {w} z{i}")?;
        }
        writeln!(out)?;
        writeln!(out, "Subject To")?;
        for (c, (i, j)) in self.conflicts.iter().enumerate() {
            writeln!(out, " c{c}: z{i} + z{j} <= 1")?;
        }
        writeln!(out, "Bounds")?;
        for i in 0..self.len() {
            writeln!(out, " 0 <= z{i} <= 1")?;
        }
        writeln!(out, "End")
    }
}

/// Objective weights are the directly computed bundle gains.
pub fn build_program(inst: &ProblemInstance, survivors: &[NaturalBundle]) -> Result<LinearProgram> {
    let weights = survivors
        .iter()
        .map(|b| inst.bundle_gain(b))
        .collect::<Result<Vec<_>>>()?;
    LinearProgram::new(survivors.to_vec(), weights)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelaxationSolution {
    pub exact_gain: BigRational,
    pub gain: f64,
    pub assignment: Vec<BigRational>,
}

impl RelaxationSolution {
    pub fn assignment_f64(&self) -> Vec<f64> {
        self.assignment.iter().map(to_f64).collect()
    }

    pub fn assignment_map(&self, lp: &LinearProgram) -> BTreeMap<NaturalBundle, f64> {
        lp.variables()
            .iter()
            .cloned()
            .zip(self.assignment_f64())
            .collect()
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("finite rational")
}

fn rational(w: f64) -> BigRational {
    BigRational::from_float(w).expect("finite weight")
}

pub fn solve_relaxation(lp: &LinearProgram) -> RelaxationSolution {
    let n = lp.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(i, j) in lp.conflicts() {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        components.entry(root).or_default().push(i);
    }
    let mut edges_by_component: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for &(i, j) in lp.conflicts() {
        edges_by_component
            .entry(find(&mut parent, i))
            .or_default()
            .push((i, j));
    }

    let mut assignment = vec![BigRational::zero(); n];
    let mut total = BigRational::zero();
    for (root, members) in &components {
        if members.len() == 1 {
            let i = members[0];
            if lp.weights()[i] > 0.0 {
                assignment[i] = BigRational::from_integer(1.into());
                total += rational(lp.weights()[i]);
            }
            continue;
        }
        // Every member has a conflict, which already implies z <= 1.
        let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let objective: Vec<BigRational> = members.iter().map(|&g| rational(lp.weights()[g])).collect();
        let one = BigRational::from_integer(1.into());
        let edges = &edges_by_component[root];
        let rows: Vec<Vec<BigRational>> = edges
            .iter()
            .map(|(i, j)| {
                let mut row = vec![BigRational::zero(); members.len()];
                row[local[i]] = one.clone();
                row[local[j]] = one.clone();
                row
            })
            .collect();
        let rhs = vec![one.clone(); rows.len()];
        match maximize(&objective, &rows, &rhs) {
            SimplexOutcome::Optimal { value, x } => {
                total += value;
                for (l, v) in x.into_iter().enumerate() {
                    assignment[members[l]] = v;
                }
            }
            SimplexOutcome::Unbounded => unreachable!("packing program is bounded"),
        }
    }
    RelaxationSolution {
        gain: to_f64(&total),
        exact_gain: total,
        assignment,
    }
}

/// Relaxation gain from an already computed tree solution; also returns the
/// number of program variables.
pub fn upper_bound_gain_with(inst: &ProblemInstance, tree: &TreeSolution) -> Result<(f64, usize)> {
    let survivors = prune_variables(inst, tree)?;
    let lp = build_program(inst, &survivors)?;
    Ok((solve_relaxation(&lp).gain, lp.len()))
}

/// Upper bound on the revenue of any attribute hiding scheme.
pub fn upper_bound_revenue(inst: &ProblemInstance) -> f64 {
    let tree = tree_dp(inst);
    let (gain, _) = upper_bound_gain_with(inst, &tree).expect("tree built from this instance");
    gain + tree.table().baseline_revenue()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attribute::AttributeSpec;
    use crate::instance::fixtures::{m1, m2};

    fn patterns(bundles: &[NaturalBundle]) -> Vec<String> {
        bundles.iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn m1_survivors() {
        let inst = m1();
        let survivors = prune_variables(&inst, &tree_dp(&inst)).unwrap();
        assert_eq!(patterns(&survivors), ["0?", "1?", "?0", "?1", "??"]);
    }

    #[test]
    fn m1_program_and_bound() {
        let inst = m1();
        let survivors = prune_variables(&inst, &tree_dp(&inst)).unwrap();
        let lp = build_program(&inst, &survivors).unwrap();
        assert_eq!(lp.len(), 5);
        assert_eq!(lp.conflicts().len(), 8);
        assert!(lp.conflicts().contains(&(0, 2)));
        assert!(!lp.conflicts().contains(&(0, 1)));
        let sol = solve_relaxation(&lp);
        assert_eq!(sol.gain, 3.0);
        assert!(sol.assignment_f64().iter().all(|&z| z == 0.5));
        assert_eq!(upper_bound_revenue(&inst), 3.0);
    }

    #[test]
    fn m2_bound_is_integral() {
        assert_eq!(upper_bound_revenue(&m2()), 3.0);
    }

    #[test]
    fn trivial_programs() {
        let empty = LinearProgram::new(vec![], vec![]).unwrap();
        assert!(empty.conflicts().is_empty());
        assert_eq!(solve_relaxation(&empty).gain, 0.0);

        let single = LinearProgram::new(vec!["0?".parse().unwrap()], vec![2.5]).unwrap();
        assert!(single.conflicts().is_empty());
        let sol = solve_relaxation(&single);
        assert_eq!(sol.gain, 2.5);
        assert_eq!(sol.assignment_f64(), [1.0]);
    }

    #[test]
    fn prune_rejects_foreign_tree() {
        let other = ProblemInstance::new(
            AttributeSpec::uniform(2, 2).unwrap(),
            vec![vec![0.0; 4], vec![1.0; 4], vec![1.0; 4]],
        )
        .unwrap();
        assert!(matches!(
            prune_variables(&m1(), &tree_dp(&other)),
            Err(Error::InstanceMismatch)
        ));
    }

    #[test]
    fn lp_dump_format() {
        let inst = m1();
        let survivors = prune_variables(&inst, &tree_dp(&inst)).unwrap();
        let lp = build_program(&inst, &survivors).unwrap();
        let mut out = Vec::new();
        lp.write_lp(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("Maximize\n obj: 1 z0 + 1 z1 + 1 z2 + 1 z3 + 2 z4\n"));
        assert!(text.contains(" c0: z0 + z2 <= 1\n"));
        assert_eq!(text.lines().filter(|l| l.starts_with(" c")).count(), 8);
        assert!(text.ends_with("End\n"));
    }
}
