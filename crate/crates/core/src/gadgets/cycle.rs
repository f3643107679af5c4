//! A valid scheme that no sequence of attribute reveals can produce.

use super::reduction::gadget_instance;
use crate::attribute::{AttributeSpec, NaturalBundle, Slot};
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;
use crate::scheme::HidingScheme;

fn cycle_bundles(k: usize) -> Result<Vec<NaturalBundle>> {
    if k < 3 {
        return Err(Error::InvalidParameters(format!("cycle scheme needs k >= 3, got {k}")));
    }
    Ok((0..k)
        .map(|j| {
            let mut slots = vec![Slot::Value(0); k];
            slots[j] = Slot::Hidden;
            slots[(j + 1) % k] = Slot::Value(1);
            NaturalBundle::new(slots)
        })
        .collect())
}

/// Bundle `j` hides attribute `j`, fixes attribute `j + 1 (mod k)` to 1 and
/// all others to 0.
pub fn cycle_scheme(k: usize) -> Result<HidingScheme> {
    Ok(HidingScheme::new(cycle_bundles(k)?))
}

/// Binary instance where each cycle bundle gains 1 and every other natural
/// bundle gains nothing, so the cycle scheme is the unique optimum.
pub fn cycle_instance(k: usize) -> Result<ProblemInstance> {
    let helpful: Vec<_> = cycle_bundles(k)?.into_iter().map(|b| (b, 1.0)).collect();
    gadget_instance(&AttributeSpec::uniform(k, 2)?, &helpful, 2.0)
}
