//! Instances where arbitrary clusterings of instantiations earn nearly twice
//! the revenue of any attribute hiding scheme.

use crate::attribute::AttributeSpec;
use crate::error::{Error, Result};
use crate::instance::{second_highest, ProblemInstance};

/// `m = 2^k` binary instantiations and `m` bidders. Bidder `i` values only
/// instantiation `i`: the first and last at `m / 2`, all others at 1.
pub fn gap_instance(k: usize) -> Result<ProblemInstance> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!("gap instance needs k >= 2, got {k}")));
    }
    let spec = AttributeSpec::uniform(k, 2)?;
    let m = spec.instantiation_count();
    let valuations = (0..m)
        .map(|i| {
            let mut row = vec![0.0; m];
            row[i] = if i == 0 || i == m - 1 { m as f64 / 2.0 } else { 1.0 };
            row
        })
        .collect();
    ProblemInstance::new(spec, valuations)
}

/// `{0, m-1}` together, then consecutive pairs of the remaining instantiations.
pub fn gap_clustering_schedule(k: usize) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!("gap instance needs k >= 2, got {k}")));
    }
    let m = 1usize << k;
    let mut clusters = vec![vec![0, m - 1]];
    clusters.extend((1..m - 1).step_by(2).map(|i| vec![i, i + 1]));
    Ok(clusters)
}

/// Second-price revenue when every cluster is sold as one item and the
/// instantiations outside all clusters are sold separately.
pub fn clustering_revenue(inst: &ProblemInstance, clusters: &[Vec<usize>]) -> Result<f64> {
    let m = inst.spec().instantiation_count();
    let mut covered = vec![false; m];
    let mut revenue = 0.0;
    for cluster in clusters {
        for &w in cluster {
            if w >= m {
                return Err(Error::InvalidParameters(format!("instantiation {w} out of range")));
            }
            if std::mem::replace(&mut covered[w], true) {
                return Err(Error::InvalidParameters(format!("instantiation {w} in two clusters")));
            }
        }
        revenue += second_highest(
            inst.valuations()
                .iter()
                .map(|row| cluster.iter().map(|&w| row[w]).sum::<f64>()),
        );
    }
    revenue += (0..m)
        .filter(|&w| !covered[w])
        .map(|w| inst.unit_second_price(w))
        .sum::<f64>();
    Ok(revenue)
}
