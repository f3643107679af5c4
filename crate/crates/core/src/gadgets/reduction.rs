//! Auction instances encoding monotone one-in-three 3SAT.
//!
//! Attributes are binary: a block encoding a variable, a block encoding a
//! clause, then eleven fixed positions that distinguish seven bundle
//! families. Variable `e` and clause `d` are written big-endian as `e - 1`
//! and `d - 1` in `ceil(log2 E)` and `ceil(log2 D)` bits.
//!
//! Bidders: two baseline bidders value every instantiation at `L`; every
//! helpful bundle `b` with intended gain `r` adds two bidders who value the
//! instantiations of `b` at `L` and nothing else, except that one of them
//! values `b` with all hidden slots set to 0 at `L + r` and the other values
//! `b` with all hidden slots set to 1 at `L + r`.

use rand::Rng;

use super::random::trial_rng;
use super::sat::OneInThreeSat;
use crate::attribute::{AttributeSpec, NaturalBundle, Slot};
use crate::error::{Error, Result};
use crate::instance::{approx_eq, ProblemInstance};
use crate::table::GainTable;

const FIXED: usize = 11;
const H: Option<u32> = None;
const fn v(x: u32) -> Option<u32> {
    Some(x)
}

/// Fixed tail of each family, positions 1..=11 after the two blocks.
const TAILS: [[Option<u32>; FIXED]; 7] = [
    [v(0), H, H, v(0), v(1), v(0), v(1), v(0), v(1), v(0), v(1)],
    [H, v(0), H, v(0), v(1), v(0), v(1), v(0), v(1), v(0), v(1)],
    [H, H, v(0), v(0), v(1), v(0), v(1), v(0), v(1), v(0), v(1)],
    [v(0), v(0), v(0), H, H, v(0), v(1), v(0), v(1), v(0), v(1)],
    [v(1), H, H, v(0), v(1), H, H, v(0), v(1), v(0), v(1)],
    [H, v(1), H, v(0), v(1), v(0), v(1), H, H, v(0), v(1)],
    [H, H, v(1), v(0), v(1), v(0), v(1), v(0), v(1), H, H],
];

/// The seven bundle families; `Occurrence(i)` is family `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Variable `e` in position `i` (0-based) of clause `d`.
    Occurrence(usize),
    /// All occurrences of one variable.
    Variable,
    /// One of the three clause bundles, indexed 0..3.
    Clause(usize),
}

fn ceil_log2(x: usize) -> usize {
    (usize::BITS - (x.max(1) - 1).leading_zeros()) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReductionLayout {
    pub variable_bits: usize,
    pub clause_bits: usize,
}

impl ReductionLayout {
    pub fn for_formula(sat: &OneInThreeSat) -> Self {
        Self {
            variable_bits: ceil_log2(sat.variable_count()),
            clause_bits: ceil_log2(sat.clause_count()),
        }
    }

    /// `ceil(log2 D) + ceil(log2 E) + 11`.
    pub fn attribute_count(&self) -> usize {
        self.variable_bits + self.clause_bits + FIXED
    }

    pub fn spec(&self) -> AttributeSpec {
        AttributeSpec::uniform(self.attribute_count(), 2).expect("binary spec")
    }

    /// `variable` and `clause` are 1-based and ignored where the family hides
    /// that block.
    pub fn bundle(&self, family: Family, variable: usize, clause: usize) -> NaturalBundle {
        let (tail, var_shown, clause_shown) = match family {
            Family::Occurrence(i) => (TAILS[i], true, true),
            Family::Variable => (TAILS[3], true, false),
            Family::Clause(i) => (TAILS[4 + i], false, true),
        };
        let mut slots = Vec::with_capacity(self.attribute_count());
        push_block(&mut slots, self.variable_bits, var_shown.then(|| variable - 1));
        push_block(&mut slots, self.clause_bits, clause_shown.then(|| clause - 1));
        slots.extend(tail.iter().map(|s| s.map_or(Slot::Hidden, Slot::Value)));
        NaturalBundle::new(slots)
    }
}

fn push_block(slots: &mut Vec<Slot>, width: usize, value: Option<usize>) {
    for bit in (0..width).rev() {
        slots.push(match value {
            Some(x) => Slot::Value(((x >> bit) & 1) as u32),
            None => Slot::Hidden,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionParams {
    /// Baseline valuation `L` of every instantiation; must exceed `D`.
    pub baseline: f64,
    /// Gain slack; `0 < epsilon < 1 / D`.
    pub epsilon: f64,
}

impl ReductionParams {
    /// `L = D + 1`, `epsilon = 1 / (2D)`.
    pub fn default_for(sat: &OneInThreeSat) -> Self {
        let d = sat.clause_count() as f64;
        Self {
            baseline: d + 1.0,
            epsilon: 1.0 / (2.0 * d),
        }
    }

    pub fn validate(&self, sat: &OneInThreeSat) -> Result<()> {
        let d = sat.clause_count() as f64;
        if !(self.baseline > d) {
            return Err(Error::InvalidParameters(format!(
                "baseline {} must exceed the clause count {d}",
                self.baseline
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0 / d) {
            return Err(Error::InvalidParameters(format!(
                "epsilon {} must lie in (0, 1/{d})",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HelpfulBundle {
    pub bundle: NaturalBundle,
    pub family: Family,
    pub intended_gain: f64,
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub instance: ProblemInstance,
    pub helpful: Vec<HelpfulBundle>,
    pub layout: ReductionLayout,
    pub params: ReductionParams,
}

impl ReductionInstance {
    /// `6D - 2D epsilon`, reached exactly when the formula is satisfiable.
    pub fn target_gain(&self, sat: &OneInThreeSat) -> f64 {
        let d = sat.clause_count() as f64;
        6.0 * d - 2.0 * d * self.params.epsilon
    }
}

/// Two baseline bidders plus two bidders per helpful bundle.
pub fn gadget_instance(spec: &AttributeSpec, helpful: &[(NaturalBundle, f64)], baseline: f64) -> Result<ProblemInstance> {
    let m = spec.instantiation_count();
    let mut valuations = vec![vec![baseline; m], vec![baseline; m]];
    for (bundle, gain) in helpful {
        let members = spec.instantiations_of(bundle);
        for fill in [0, 1] {
            let mut row = vec![0.0; m];
            for &w in &members {
                row[w] = baseline;
            }
            row[spec.instantiation_index(&bundle.fill_hidden(fill))?] = baseline + gain;
            valuations.push(row);
        }
    }
    ProblemInstance::new(spec.clone(), valuations)
}

pub fn reduction_instance(sat: &OneInThreeSat, params: ReductionParams) -> Result<ReductionInstance> {
    params.validate(sat)?;
    let layout = ReductionLayout::for_formula(sat);
    let mut helpful = Vec::new();
    for (d, clause) in sat.clauses().iter().enumerate() {
        for (i, &e) in clause.iter().enumerate() {
            helpful.push(HelpfulBundle {
                bundle: layout.bundle(Family::Occurrence(i), e, d + 1),
                family: Family::Occurrence(i),
                intended_gain: 1.0,
            });
        }
    }
    for e in 1..=sat.variable_count() {
        let count = sat.occurrences(e);
        if count > 0 {
            helpful.push(HelpfulBundle {
                bundle: layout.bundle(Family::Variable, e, 1),
                family: Family::Variable,
                intended_gain: count as f64 * (1.0 - params.epsilon),
            });
        }
    }
    for d in 1..=sat.clause_count() {
        for i in 0..3 {
            helpful.push(HelpfulBundle {
                bundle: layout.bundle(Family::Clause(i), 1, d),
                family: Family::Clause(i),
                intended_gain: 3.0,
            });
        }
    }
    let pairs: Vec<_> = helpful
        .iter()
        .map(|h| (h.bundle.clone(), h.intended_gain))
        .collect();
    let instance = gadget_instance(&layout.spec(), &pairs, params.baseline)?;
    Ok(ReductionInstance {
        instance,
        helpful,
        layout,
        params,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    /// Helpful bundles, everything intersecting them, and `samples` other
    /// bundles drawn uniformly (all of them if fewer remain).
    Sampled { samples: usize, seed: u64 },
    /// Every natural bundle.
    FullSweep,
}

impl Default for VerifyMode {
    fn default() -> Self {
        VerifyMode::Sampled {
            samples: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub bundle: NaturalBundle,
    pub expected: f64,
    pub found: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub helpful_checked: usize,
    pub intersecting_checked: usize,
    pub other_checked: usize,
    pub direct_cross_checks: usize,
    pub violation_count: usize,
    /// First violations found, capped at [`MAX_LISTED`].
    pub violations: Vec<Violation>,
}

pub const MAX_LISTED: usize = 50;
const DIRECT_CHECKS: usize = 200;

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, bundle: NaturalBundle, expected: f64, found: f64) {
        self.violation_count += 1;
        if self.violations.len() < MAX_LISTED {
            self.violations.push(Violation {
                bundle,
                expected,
                found,
            });
        }
    }
}

/// Checks that helpful bundles have their intended gains and every other
/// natural bundle has zero gain.
pub fn verify_reduction(red: &ReductionInstance, mode: VerifyMode) -> Result<VerifyReport> {
    verify_gadget(&red.instance, &red.helpful, &GainTable::build(&red.instance), mode)
}

/// As [`verify_reduction`], reusing a gain table already built for the
/// instance (for example the one inside a tree solution).
pub fn verify_reduction_with(red: &ReductionInstance, table: &GainTable, mode: VerifyMode) -> Result<VerifyReport> {
    if table.spec() != red.instance.spec() {
        return Err(Error::InstanceMismatch);
    }
    verify_gadget(&red.instance, &red.helpful, table, mode)
}

pub(crate) fn verify_gadget(
    inst: &ProblemInstance,
    helpful: &[HelpfulBundle],
    table: &GainTable,
    mode: VerifyMode,
) -> Result<VerifyReport> {
    let spec = inst.spec();
    let mut report = VerifyReport::default();
    // 0 = unvisited, 1 = helpful, 2 = intersects a helpful bundle.
    let mut class = vec![0u8; spec.bundle_count()];

    for h in helpful {
        let id = spec.bundle_id(&h.bundle)?;
        class[id] = 1;
        let direct = inst.bundle_gain(&h.bundle)?;
        report.helpful_checked += 1;
        report.direct_cross_checks += 1;
        if !approx_eq(direct, h.intended_gain) {
            report.record(h.bundle.clone(), h.intended_gain, direct);
        } else if !approx_eq(table.gain(id), h.intended_gain) {
            report.record(h.bundle.clone(), h.intended_gain, table.gain(id));
        }
    }
    for h in helpful {
        for_each_intersecting(spec, &h.bundle, |id| {
            if class[id] == 0 {
                class[id] = 2;
            }
        });
    }
    for (id, &c) in class.iter().enumerate() {
        if c == 2 {
            report.intersecting_checked += 1;
            let g = table.gain(id);
            if !approx_eq(g, 0.0) {
                report.record(spec.bundle(id), 0.0, g);
            }
        }
    }

    let remaining = class.iter().filter(|&&c| c == 0).count();
    let check_other = |report: &mut VerifyReport, id: usize, direct: bool| -> Result<()> {
        report.other_checked += 1;
        let g = table.gain(id);
        if !approx_eq(g, 0.0) {
            report.record(spec.bundle(id), 0.0, g);
        }
        if direct {
            report.direct_cross_checks += 1;
            let d = inst.bundle_gain(&spec.bundle(id))?;
            if !approx_eq(d, g) {
                report.record(spec.bundle(id), g, d);
            }
        }
        Ok(())
    };
    match mode {
        VerifyMode::Sampled { samples, seed } if samples < remaining => {
            let mut rng = trial_rng(seed, 0);
            let mut taken = 0;
            while taken < samples {
                let id = rng.gen_range(0..class.len());
                if class[id] == 0 {
                    check_other(&mut report, id, taken < DIRECT_CHECKS)?;
                    taken += 1;
                }
            }
        }
        _ => {
            let mut taken = 0;
            for id in (0..class.len()).filter(|&id| class[id] == 0) {
                check_other(&mut report, id, taken < DIRECT_CHECKS)?;
                taken += 1;
            }
        }
    }
    Ok(report)
}

/// Calls `f` with the id of every natural bundle intersecting `bundle`.
fn for_each_intersecting(spec: &AttributeSpec, bundle: &NaturalBundle, mut f: impl FnMut(usize)) {
    let options: Vec<Vec<usize>> = bundle
        .slots()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let c = spec.cardinality(i) as usize;
            let stride = spec.bundle_stride(i);
            match *s {
                Slot::Value(v) => vec![v as usize * stride, c * stride],
                Slot::Hidden => (0..=c).map(|d| d * stride).collect(),
            }
        })
        .collect();
    let mut choice = vec![0usize; options.len()];
    loop {
        f(choice.iter().zip(&options).map(|(&c, o)| o[c]).sum());
        let mut i = options.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}
