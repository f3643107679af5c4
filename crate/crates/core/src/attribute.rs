//! Attribute space, instantiations and natural bundles.
//!
//! Instantiations are indexed in mixed radix with the first attribute most
//! significant. Natural bundles use the same layout with radix `C_i + 1`,
//! where digit `C_i` encodes a hidden attribute. Because the hidden digit is
//! the largest, bundle ids follow the canonical lexicographic order with
//! hidden slots sorting last, and every child of a split has a smaller id
//! than its parent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One attribute position of a natural bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Value(u32),
    Hidden,
}

impl Slot {
    pub fn is_hidden(self) -> bool {
        matches!(self, Slot::Hidden)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct AttributeSpec {
    cardinalities: Vec<u32>,
    instantiation_strides: Vec<usize>,
    bundle_strides: Vec<usize>,
    instantiation_count: usize,
    bundle_count: usize,
}

impl AttributeSpec {
    pub fn new(cardinalities: Vec<u32>) -> Result<Self> {
        if cardinalities.is_empty() {
            return Err(Error::InvalidSpec("at least one attribute is required".into()));
        }
        if let Some((i, &c)) = cardinalities.iter().enumerate().find(|(_, &c)| c < 2) {
            return Err(Error::InvalidSpec(format!(
                "attribute {i} has cardinality {c}; every attribute needs at least 2 values"
            )));
        }
        let k = cardinalities.len();
        let mut instantiation_strides = vec![0; k];
        let mut bundle_strides = vec![0; k];
        let mut m: usize = 1;
        let mut b: usize = 1;
        for i in (0..k).rev() {
            instantiation_strides[i] = m;
            bundle_strides[i] = b;
            let c = cardinalities[i] as usize;
            m = m
                .checked_mul(c)
                .ok_or_else(|| Error::InvalidSpec("instantiation count overflows".into()))?;
            b = b
                .checked_mul(c + 1)
                .ok_or_else(|| Error::InvalidSpec("bundle count overflows".into()))?;
        }
        Ok(Self {
            cardinalities,
            instantiation_strides,
            bundle_strides,
            instantiation_count: m,
            bundle_count: b,
        })
    }

    pub fn uniform(k: usize, cardinality: u32) -> Result<Self> {
        Self::new(vec![cardinality; k])
    }

    /// Number of attributes `k`.
    pub fn k(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn cardinality(&self, attribute: usize) -> u32 {
        self.cardinalities[attribute]
    }

    pub fn cardinalities(&self) -> &[u32] {
        &self.cardinalities
    }

    pub fn is_binary(&self) -> bool {
        self.cardinalities.iter().all(|&c| c == 2)
    }

    /// Number of instantiations `m`.
    pub fn instantiation_count(&self) -> usize {
        self.instantiation_count
    }

    /// Number of natural bundles, `prod (C_i + 1)`.
    pub fn bundle_count(&self) -> usize {
        self.bundle_count
    }

    pub(crate) fn bundle_stride(&self, attribute: usize) -> usize {
        self.bundle_strides[attribute]
    }

    pub fn instantiation(&self, index: usize) -> Instantiation {
        assert!(index < self.instantiation_count, "instantiation index out of range");
        let coords = self
            .cardinalities
            .iter()
            .zip(&self.instantiation_strides)
            .map(|(&c, &s)| ((index / s) % c as usize) as u32)
            .collect();
        Instantiation(coords)
    }

    pub fn instantiation_index(&self, omega: &Instantiation) -> Result<usize> {
        self.check_len(omega.0.len())?;
        let mut index = 0;
        for (i, &v) in omega.0.iter().enumerate() {
            self.check_value(i, v)?;
            index += v as usize * self.instantiation_strides[i];
        }
        Ok(index)
    }

    pub fn bundle(&self, id: usize) -> NaturalBundle {
        assert!(id < self.bundle_count, "bundle id out of range");
        let slots = self
            .cardinalities
            .iter()
            .zip(&self.bundle_strides)
            .map(|(&c, &s)| {
                let digit = ((id / s) % (c as usize + 1)) as u32;
                if digit == c {
                    Slot::Hidden
                } else {
                    Slot::Value(digit)
                }
            })
            .collect();
        NaturalBundle(slots)
    }

    pub fn bundle_id(&self, bundle: &NaturalBundle) -> Result<usize> {
        self.validate_bundle(bundle)?;
        Ok(bundle
            .0
            .iter()
            .enumerate()
            .map(|(i, slot)| {
                let digit = match *slot {
                    Slot::Value(v) => v,
                    Slot::Hidden => self.cardinalities[i],
                };
                digit as usize * self.bundle_strides[i]
            })
            .sum())
    }

    /// Checks that `bundle` is a natural bundle over this attribute space.
    pub fn validate_bundle(&self, bundle: &NaturalBundle) -> Result<()> {
        self.check_len(bundle.0.len())?;
        for (i, slot) in bundle.0.iter().enumerate() {
            if let Slot::Value(v) = *slot {
                self.check_value(i, v)?;
            }
        }
        Ok(())
    }

    /// All natural bundles in canonical order.
    pub fn enumerate_bundles(&self) -> impl Iterator<Item = NaturalBundle> + '_ {
        (0..self.bundle_count).map(move |id| self.bundle(id))
    }

    pub fn all_hidden(&self) -> NaturalBundle {
        NaturalBundle(vec![Slot::Hidden; self.k()])
    }

    pub fn unit_bundle(&self, omega: &Instantiation) -> NaturalBundle {
        NaturalBundle(omega.0.iter().map(|&v| Slot::Value(v)).collect())
    }

    /// Number of instantiations in the bundle.
    pub fn bundle_size(&self, bundle: &NaturalBundle) -> usize {
        bundle
            .0
            .iter()
            .zip(&self.cardinalities)
            .filter(|(s, _)| s.is_hidden())
            .map(|(_, &c)| c as usize)
            .product()
    }

    /// Reveals hidden attribute `attribute`, producing `C_x` disjoint bundles
    /// whose union is `bundle`.
    pub fn split(&self, bundle: &NaturalBundle, attribute: usize) -> Result<Vec<NaturalBundle>> {
        self.validate_bundle(bundle)?;
        match bundle.0.get(attribute) {
            Some(Slot::Hidden) => {}
            _ => return Err(Error::NotHidden(attribute)),
        }
        Ok((0..self.cardinalities[attribute])
            .map(|v| {
                let mut child = bundle.clone();
                child.0[attribute] = Slot::Value(v);
                child
            })
            .collect())
    }

    /// Mixed-radix indices of every instantiation in the bundle, ascending.
    pub fn instantiations_of(&self, bundle: &NaturalBundle) -> Vec<usize> {
        let mut out = vec![0usize];
        for (i, slot) in bundle.0.iter().enumerate() {
            let stride = self.instantiation_strides[i];
            match *slot {
                Slot::Value(v) => out.iter_mut().for_each(|x| *x += v as usize * stride),
                Slot::Hidden => {
                    let c = self.cardinalities[i] as usize;
                    out = out
                        .iter()
                        .flat_map(|&x| (0..c).map(move |v| x + v * stride))
                        .collect();
                }
            }
        }
        out
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: len,
            });
        }
        Ok(())
    }

    fn check_value(&self, attribute: usize, value: u32) -> Result<()> {
        let cardinality = self.cardinalities[attribute];
        if value >= cardinality {
            return Err(Error::ValueOutOfRange {
                attribute,
                value,
                cardinality,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for AttributeSpec {
    type Error = Error;

    fn try_from(cardinalities: Vec<u32>) -> Result<Self> {
        Self::new(cardinalities)
    }
}

impl From<AttributeSpec> for Vec<u32> {
    fn from(spec: AttributeSpec) -> Self {
        spec.cardinalities
    }
}

/// A concrete assignment of every attribute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instantiation(pub Vec<u32>);

impl Instantiation {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.0.iter().all(|&v| v < 10);
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A set of instantiations obtained by fixing some attributes and hiding the
/// rest.
///
/// The textual form writes one character per attribute (`?` for hidden) when
/// every concrete value is a single digit, and separates attributes with
/// commas otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NaturalBundle(pub Vec<Slot>);

impl NaturalBundle {
    pub fn new(slots: Vec<Slot>) -> Self {
        Self(slots)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Indices of the hidden attributes, ascending.
    pub fn hidden_attributes(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_hidden())
            .map(|(i, _)| i)
    }

    pub fn hidden_count(&self) -> usize {
        self.0.iter().filter(|s| s.is_hidden()).count()
    }

    pub fn is_unit(&self) -> bool {
        self.hidden_count() == 0
    }

    pub fn contains(&self, omega: &Instantiation) -> Result<bool> {
        if self.0.len() != omega.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                found: omega.0.len(),
            });
        }
        Ok(self.0.iter().zip(&omega.0).all(|(slot, &v)| match *slot {
            Slot::Hidden => true,
            Slot::Value(w) => w == v,
        }))
    }

    /// True unless some attribute is concrete in both bundles with different
    /// values.
    pub fn intersects(&self, other: &NaturalBundle) -> Result<bool> {
        if self.0.len() != other.0.len() {
            return Err(Error::DimensionMismatch {
                expected: self.0.len(),
                found: other.0.len(),
            });
        }
        Ok(!self.0.iter().zip(&other.0).any(|pair| match pair {
            (Slot::Value(a), Slot::Value(b)) => a != b,
            _ => false,
        }))
    }

    /// Instantiation obtained by replacing every hidden slot with `fill`.
    pub fn fill_hidden(&self, fill: u32) -> Instantiation {
        Instantiation(
            self.0
                .iter()
                .map(|s| match *s {
                    Slot::Value(v) => v,
                    Slot::Hidden => fill,
                })
                .collect(),
        )
    }
}

impl fmt::Display for NaturalBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.0.iter().all(|s| match s {
            Slot::Value(v) => *v < 10,
            Slot::Hidden => true,
        });
        for (i, slot) in self.0.iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(",")?;
            }
            match slot {
                Slot::Value(v) => write!(f, "{v}")?,
                Slot::Hidden => f.write_str("?")?,
            }
        }
        Ok(())
    }
}

impl FromStr for NaturalBundle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_slot = |tok: &str| -> Result<Slot> {
            let tok = tok.trim();
            if tok == "?" {
                Ok(Slot::Hidden)
            } else {
                tok.parse::<u32>()
                    .map(Slot::Value)
                    .map_err(|_| Error::Parse(format!("bad bundle slot {tok:?} in {s:?}")))
            }
        };
        let slots = if s.contains(',') {
            s.split(',').map(parse_slot).collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| parse_slot(c.encode_utf8(&mut [0u8; 4])))
                .collect::<Result<Vec<_>>>()?
        };
        if slots.is_empty() {
            return Err(Error::Parse("empty bundle pattern".into()));
        }
        Ok(NaturalBundle(slots))
    }
}

/// Walks every bundle id in ascending order while tracking its digits.
pub(crate) struct Odometer<'a> {
    spec: &'a AttributeSpec,
    digits: Vec<u32>,
    id: usize,
}

impl<'a> Odometer<'a> {
    pub(crate) fn new(spec: &'a AttributeSpec) -> Self {
        Self {
            spec,
            digits: vec![0; spec.k()],
            id: 0,
        }
    }

    /// Calls `f(id, digits)` for every bundle; digit `C_i` means hidden.
    pub(crate) fn for_each(mut self, mut f: impl FnMut(usize, &[u32])) {
        let k = self.spec.k();
        let total = self.spec.bundle_count();
        while self.id < total {
            f(self.id, &self.digits);
            self.id += 1;
            for i in (0..k).rev() {
                self.digits[i] += 1;
                if self.digits[i] <= self.spec.cardinality(i) {
                    break;
                }
                self.digits[i] = 0;
            }
        }
    }
}
