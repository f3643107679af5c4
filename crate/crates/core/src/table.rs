//! Lattice-wide second prices and gains.
//!
//! Bidder valuations are additive, so `v_i(b) = sum_j v_i(b|_x^j)` for any
//! hidden attribute `x`. Filling one bidder's table costs a single pass over
//! all bundles in id order; the two largest values per bundle are merged as
//! each bidder is processed, so memory stays at a few arrays of `|B|` floats.

use crate::attribute::{AttributeSpec, NaturalBundle, Odometer};
use crate::error::Result;
use crate::instance::ProblemInstance;

const UNIT: u8 = u8::MAX;

/// For every bundle id: the attribute used to decompose it (or `UNIT`).
pub(crate) struct Decomposition {
    pivot: Vec<u8>,
    strides: Vec<usize>,
    cards: Vec<usize>,
}

impl Decomposition {
    pub(crate) fn new(spec: &AttributeSpec) -> Self {
        assert!(spec.k() < UNIT as usize, "too many attributes");
        let mut pivot = vec![UNIT; spec.bundle_count()];
        let cards: Vec<usize> = spec.cardinalities().iter().map(|&c| c as usize).collect();
        Odometer::new(spec).for_each(|id, digits| {
            // Least significant hidden attribute keeps child ids close.
            if let Some(x) = (0..digits.len()).rev().find(|&i| digits[i] as usize == cards[i]) {
                pivot[id] = x as u8;
            }
        });
        Self {
            pivot,
            strides: (0..spec.k()).map(|i| spec.bundle_stride(i)).collect(),
            cards,
        }
    }

    /// Extends per-instantiation values additively to every bundle.
    pub(crate) fn additive(&self, unit_values: &[f64], out: &mut [f64]) {
        let mut next_unit = 0;
        for id in 0..self.pivot.len() {
            let x = self.pivot[id];
            out[id] = if x == UNIT {
                let v = unit_values[next_unit];
                next_unit += 1;
                v
            } else {
                let x = x as usize;
                let c = self.cards[x];
                let stride = self.strides[x];
                (0..c).map(|j| out[id - (c - j) * stride]).sum()
            };
        }
        debug_assert_eq!(next_unit, unit_values.len());
    }
}

/// Second price, separate-sale revenue and gain for every natural bundle.
pub struct GainTable {
    spec: AttributeSpec,
    second_price: Vec<f64>,
    separate: Vec<f64>,
}

impl GainTable {
    pub fn build(inst: &ProblemInstance) -> Self {
        let spec = inst.spec().clone();
        let count = spec.bundle_count();
        let decomposition = Decomposition::new(&spec);

        let mut first = vec![f64::NEG_INFINITY; count];
        let mut second = vec![f64::NEG_INFINITY; count];
        let mut values = vec![0.0; count];
        for row in inst.valuations() {
            decomposition.additive(row, &mut values);
            for ((f, s), &v) in first.iter_mut().zip(second.iter_mut()).zip(&values) {
                if v > *f {
                    *s = *f;
                    *f = v;
                } else if v > *s {
                    *s = v;
                }
            }
        }
        drop(first);

        let unit_prices: Vec<f64> = (0..spec.instantiation_count())
            .map(|w| inst.unit_second_price(w))
            .collect();
        decomposition.additive(&unit_prices, &mut values);

        Self {
            spec,
            second_price: second,
            separate: values,
        }
    }

    pub fn spec(&self) -> &AttributeSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.second_price.len()
    }

    pub fn is_empty(&self) -> bool {
        self.second_price.is_empty()
    }

    pub fn second_price(&self, id: usize) -> f64 {
        self.second_price[id]
    }

    /// Revenue of selling the bundle's instantiations separately.
    pub fn separate_revenue(&self, id: usize) -> f64 {
        self.separate[id]
    }

    pub fn gain(&self, id: usize) -> f64 {
        self.second_price[id] - self.separate[id]
    }

    pub fn gain_of(&self, bundle: &NaturalBundle) -> Result<f64> {
        Ok(self.gain(self.spec.bundle_id(bundle)?))
    }

    /// Revenue of selling everything separately.
    pub fn baseline_revenue(&self) -> f64 {
        *self.separate.last().expect("non-empty lattice")
    }
}
