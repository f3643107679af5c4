use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attribute::AttributeSpec;
use crate::error::{Error, Result};
use crate::instance::ProblemInstance;

/// Counter-based stream for trial `stream` under `master_seed`; streams are
/// independent of the order in which trials run.
pub fn trial_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// `k` attributes of cardinality `cardinality`, `n` bidders, valuations
/// i.i.d. uniform on `[0, 1)`.
pub fn random_instance(k: usize, cardinality: u32, n: usize, seed: u64) -> Result<ProblemInstance> {
    random_instance_stream(k, cardinality, n, seed, 0)
}

pub fn random_instance_stream(
    k: usize,
    cardinality: u32,
    n: usize,
    master_seed: u64,
    stream: u64,
) -> Result<ProblemInstance> {
    if k == 0 || cardinality < 2 || n < 2 {
        return Err(Error::InvalidParameters(format!(
            "need k >= 1, cardinality >= 2 and n >= 2 (got k={k}, cardinality={cardinality}, n={n})"
        )));
    }
    let spec = AttributeSpec::uniform(k, cardinality)?;
    let m = spec.instantiation_count();
    let mut rng = trial_rng(master_seed, stream);
    let valuations = (0..n)
        .map(|_| (0..m).map(|_| rng.gen::<f64>()).collect())
        .collect();
    ProblemInstance::new(spec, valuations)
}
