//! Problem instances and the direct (per-bundle) revenue functions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attribute::{AttributeSpec, Instantiation, NaturalBundle};
use crate::error::{Error, Result};

/// Relative tolerance used for every float equality in the crate.
pub const REL_TOL: f64 = 1e-9;

/// `a == b` up to [`REL_TOL`] relative to the larger magnitude (floored at 1).
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// `a >= b` up to [`REL_TOL`].
pub fn approx_ge(a: f64, b: f64) -> bool {
    a >= b || approx_eq(a, b)
}

/// Second-highest element counted with multiplicity.
pub fn second_highest(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut first = f64::NEG_INFINITY;
    let mut second = f64::NEG_INFINITY;
    for v in values {
        if v > first {
            second = first;
            first = v;
        } else if v > second {
            second = v;
        }
    }
    second
}

/// Attribute space plus the bidders' expected valuations of every
/// instantiation (probabilities already multiplied in).
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    spec: AttributeSpec,
    valuations: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    cardinalities: Vec<u32>,
    valuations: Vec<Vec<f64>>,
}

impl ProblemInstance {
    pub fn new(spec: AttributeSpec, valuations: Vec<Vec<f64>>) -> Result<Self> {
        if valuations.len() < 2 {
            return Err(Error::InvalidInstance(format!(
                "second-price revenue needs at least 2 bidders, got {}",
                valuations.len()
            )));
        }
        let m = spec.instantiation_count();
        for (i, row) in valuations.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "bidder {i} has {} valuations, expected {m}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "bidder {i} valuation {j} is {}; valuations must be finite and non-negative",
                    row[j]
                )));
            }
        }
        Ok(Self { spec, valuations })
    }

    pub fn spec(&self) -> &AttributeSpec {
        &self.spec
    }

    pub fn bidder_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuations(&self) -> &[Vec<f64>] {
        &self.valuations
    }

    /// Bidder `i`'s valuation row indexed by instantiation.
    pub fn bidder(&self, i: usize) -> &[f64] {
        &self.valuations[i]
    }

    /// Every valuation multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let valuations = self
            .valuations
            .iter()
            .map(|row| row.iter().map(|v| v * factor).collect())
            .collect();
        Self::new(self.spec.clone(), valuations)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        let spec = AttributeSpec::new(file.cardinalities)?;
        Self::new(spec, file.valuations)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = InstanceFile {
            cardinalities: self.spec.cardinalities().to_vec(),
            valuations: self.valuations.clone(),
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    /// `v_i(b)`: additive valuation of bidder `i` for the bundle.
    pub fn bundle_value(&self, bidder: usize, bundle: &NaturalBundle) -> Result<f64> {
        let row = self
            .valuations
            .get(bidder)
            .ok_or(Error::BidderOutOfRange {
                index: bidder,
                count: self.valuations.len(),
            })?;
        self.spec.validate_bundle(bundle)?;
        Ok(self.spec.instantiations_of(bundle).iter().map(|&w| row[w]).sum())
    }

    /// Vickrey revenue of selling the bundle on its own.
    pub fn second_price(&self, bundle: &NaturalBundle) -> Result<f64> {
        self.spec.validate_bundle(bundle)?;
        let members = self.spec.instantiations_of(bundle);
        Ok(second_highest(
            self.valuations
                .iter()
                .map(|row| members.iter().map(|&w| row[w]).sum::<f64>()),
        ))
    }

    /// Second price of a single instantiation, by mixed-radix index.
    pub fn unit_second_price(&self, index: usize) -> f64 {
        second_highest(self.valuations.iter().map(|row| row[index]))
    }

    /// Extra revenue from selling the bundle whole rather than its
    /// instantiations separately.
    pub fn bundle_gain(&self, bundle: &NaturalBundle) -> Result<f64> {
        let whole = self.second_price(bundle)?;
        let separate: f64 = self
            .spec
            .instantiations_of(bundle)
            .iter()
            .map(|&w| self.unit_second_price(w))
            .sum();
        Ok(whole - separate)
    }

    /// Revenue of selling every instantiation separately.
    pub fn baseline_revenue(&self) -> f64 {
        (0..self.spec.instantiation_count())
            .map(|w| self.unit_second_price(w))
            .sum()
    }

    pub fn instantiation(&self, index: usize) -> Instantiation {
        self.spec.instantiation(index)
    }
}
