//! Attribute hiding schemes: validation, evaluation and serialization.

use std::collections::BTreeSet;
use std::fmt;

use crate::attribute::{AttributeSpec, Instantiation, NaturalBundle, Slot};
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;

/// A set of pairwise-disjoint natural bundles, kept in canonical order.
/// Instantiations outside every bundle are sold separately.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HidingScheme {
    bundles: BTreeSet<NaturalBundle>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeViolation {
    NotNatural { bundle: NaturalBundle, reason: String },
    Overlap {
        first: NaturalBundle,
        second: NaturalBundle,
        witness: Instantiation,
    },
}

impl fmt::Display for SchemeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeViolation::NotNatural { bundle, reason } => {
                write!(f, "bundle {bundle} is not a natural bundle: {reason}")
            }
            SchemeViolation::Overlap {
                first,
                second,
                witness,
            } => write!(f, "bundles {first} and {second} intersect at {witness}"),
        }
    }
}

impl HidingScheme {
    pub fn new(bundles: impl IntoIterator<Item = NaturalBundle>) -> Self {
        Self {
            bundles: bundles.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn bundles(&self) -> impl Iterator<Item = &NaturalBundle> {
        self.bundles.iter()
    }

    pub fn len(&self) -> usize {
        self.bundles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }

    pub fn contains(&self, bundle: &NaturalBundle) -> bool {
        self.bundles.contains(bundle)
    }

    /// Patterns in canonical order, e.g. `["0?", "1?"]`.
    pub fn to_patterns(&self) -> Vec<String> {
        self.bundles.iter().map(|b| b.to_string()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_patterns()).expect("string list serializes")
    }

    pub fn from_patterns<S: AsRef<str>>(patterns: &[S]) -> Result<Self> {
        patterns
            .iter()
            .map(|p| p.as_ref().parse::<NaturalBundle>())
            .collect::<Result<BTreeSet<_>>>()
            .map(|bundles| Self { bundles })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let patterns: Vec<String> = serde_json::from_str(text)?;
        Self::from_patterns(&patterns)
    }
}

impl FromIterator<NaturalBundle> for HidingScheme {
    fn from_iter<I: IntoIterator<Item = NaturalBundle>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Checks naturality and pairwise disjointness; reports the first offending
/// bundle or pair in canonical order.
pub fn validate_scheme(spec: &AttributeSpec, scheme: &HidingScheme) -> Result<(), SchemeViolation> {
    for bundle in scheme.bundles() {
        if let Err(e) = spec.validate_bundle(bundle) {
            return Err(SchemeViolation::NotNatural {
                bundle: bundle.clone(),
                reason: e.to_string(),
            });
        }
    }
    let bundles: Vec<_> = scheme.bundles().collect();
    for (i, first) in bundles.iter().enumerate() {
        for second in &bundles[i + 1..] {
            if first.intersects(second).expect("validated dimensions") {
                let witness = first
                    .slots()
                    .iter()
                    .zip(second.slots())
                    .map(|pair| match pair {
                        (Slot::Value(v), _) | (Slot::Hidden, Slot::Value(v)) => *v,
                        (Slot::Hidden, Slot::Hidden) => 0,
                    })
                    .collect();
                return Err(SchemeViolation::Overlap {
                    first: (*first).clone(),
                    second: (*second).clone(),
                    witness: Instantiation(witness),
                });
            }
        }
    }
    Ok(())
}

/// Sum of bundle gains over the scheme.
pub fn scheme_gain(inst: &ProblemInstance, scheme: &HidingScheme) -> Result<f64> {
    validate_scheme(inst.spec(), scheme).map_err(Error::InvalidScheme)?;
    scheme.bundles().map(|b| inst.bundle_gain(b)).sum()
}

/// Auctioneer revenue: every bundle sold whole, every uncovered
/// instantiation sold on its own.
pub fn scheme_revenue(inst: &ProblemInstance, scheme: &HidingScheme) -> Result<f64> {
    validate_scheme(inst.spec(), scheme).map_err(Error::InvalidScheme)?;
    let spec = inst.spec();
    let mut covered = vec![false; spec.instantiation_count()];
    let mut revenue = 0.0;
    for bundle in scheme.bundles() {
        revenue += inst.second_price(bundle)?;
        for w in spec.instantiations_of(bundle) {
            covered[w] = true;
        }
    }
    revenue += covered
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(w, _)| inst.unit_second_price(w))
        .sum::<f64>();
    Ok(revenue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{m1, m2};
    use crate::instance::{approx_eq, ProblemInstance};

    fn scheme(patterns: &[&str]) -> HidingScheme {
        HidingScheme::from_patterns(patterns).unwrap()
    }

    #[test]
    fn validation_examples() {
        let spec2 = AttributeSpec::uniform(2, 2).unwrap();
        assert_eq!(validate_scheme(&spec2, &scheme(&["0?", "1?"])), Ok(()));
        match validate_scheme(&spec2, &scheme(&["0?", "?0"])) {
            Err(SchemeViolation::Overlap { witness, .. }) => {
                assert_eq!(witness, Instantiation(vec![0, 0]))
            }
            other => panic!("expected overlap, got {other:?}"),
        }
        let spec3 = AttributeSpec::uniform(3, 2).unwrap();
        assert_eq!(validate_scheme(&spec3, &scheme(&["?10", "0?1", "10?"])), Ok(()));
        assert!(matches!(
            validate_scheme(&spec3, &scheme(&["?2?"])),
            Err(SchemeViolation::NotNatural { .. })
        ));
    }

    #[test]
    fn gain_examples() {
        let inst = m1();
        assert_eq!(scheme_gain(&inst, &scheme(&["0?", "1?"])).unwrap(), 2.0);
        assert_eq!(scheme_gain(&inst, &HidingScheme::empty()).unwrap(), 0.0);
        assert_eq!(scheme_gain(&inst, &scheme(&["??"])).unwrap(), 2.0);
        assert!(matches!(
            scheme_gain(&inst, &scheme(&["0?", "?0"])),
            Err(Error::InvalidScheme(_))
        ));
    }

    #[test]
    fn revenue_examples() {
        assert_eq!(scheme_revenue(&m1(), &scheme(&["??"])).unwrap(), 2.0);
        assert_eq!(scheme_revenue(&m2(), &scheme(&["?"])).unwrap(), 3.0);
        assert_eq!(scheme_revenue(&m2(), &HidingScheme::empty()).unwrap(), 0.0);
    }

    #[test]
    fn serialization() {
        let s = scheme(&["1?", "0?"]);
        assert_eq!(s.to_json(), r#"["0?","1?"]"#);
        assert_eq!(HidingScheme::from_json(&s.to_json()).unwrap(), s);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        /// Random instance over `k <= 3` attributes with small cardinalities.
        fn instance() -> impl Strategy<Value = ProblemInstance> {
            (prop::collection::vec(2u32..4, 1..4), 2usize..4).prop_flat_map(|(cards, n)| {
                let spec = AttributeSpec::new(cards).unwrap();
                let m = spec.instantiation_count();
                prop::collection::vec(prop::collection::vec(0.0f64..1.0, m), n)
                    .prop_map(move |vals| ProblemInstance::new(spec.clone(), vals).unwrap())
            })
        }

        /// Greedily keeps disjoint bundles from a random pick list.
        fn random_scheme(spec: &AttributeSpec, picks: &[usize]) -> HidingScheme {
            let mut chosen: Vec<NaturalBundle> = Vec::new();
            for &p in picks {
                let b = spec.bundle(p % spec.bundle_count());
                if chosen.iter().all(|c| !c.intersects(&b).unwrap()) {
                    chosen.push(b);
                }
            }
            HidingScheme::new(chosen)
        }

        proptest! {
            #[test]
            fn revenue_identity(inst in instance(), picks in prop::collection::vec(any::<usize>(), 0..6)) {
                let s = random_scheme(inst.spec(), &picks);
                let lhs = scheme_revenue(&inst, &s).unwrap() - scheme_revenue(&inst, &HidingScheme::empty()).unwrap();
                let rhs = scheme_gain(&inst, &s).unwrap();
                prop_assert!(approx_eq(lhs, rhs), "{lhs} vs {rhs}");
            }

            #[test]
            fn scaling_covariance(inst in instance(), picks in prop::collection::vec(any::<usize>(), 0..6), factor in 0.1f64..10.0) {
                let s = random_scheme(inst.spec(), &picks);
                let scaled = inst.scaled(factor).unwrap();
                for b in inst.spec().enumerate_bundles() {
                    prop_assert!(approx_eq(scaled.second_price(&b).unwrap(), factor * inst.second_price(&b).unwrap()));
                    prop_assert!(approx_eq(scaled.bundle_gain(&b).unwrap(), factor * inst.bundle_gain(&b).unwrap()));
                }
                prop_assert!(approx_eq(scheme_gain(&scaled, &s).unwrap(), factor * scheme_gain(&inst, &s).unwrap()));
            }
        }
    }
}
