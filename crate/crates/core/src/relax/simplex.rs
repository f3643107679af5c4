//! Dense tableau simplex over exact rationals with Bland's rule.
//!
//! Solves `max c.x  s.t.  A x <= b, x >= 0` for `b >= 0`, so the slack basis
//! is a feasible starting point and no phase one is needed.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum SimplexOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Unbounded,
}

/// Maximizes `objective . x` subject to `rows[i] . x <= rhs[i]`, `x >= 0`.
///
/// Panics if any `rhs[i]` is negative or a row has the wrong width.
pub fn maximize(objective: &[BigRational], rows: &[Vec<BigRational>], rhs: &[BigRational]) -> SimplexOutcome {
    let n = objective.len();
    let m = rows.len();
    assert_eq!(rhs.len(), m, "one right-hand side per row");
    assert!(rhs.iter().all(|b| !b.is_negative()), "rhs must be non-negative");

    // Columns: n structural, m slack, then the rhs.
    let width = n + m + 1;
    let mut tableau: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "row {i} has the wrong width");
            let mut t = Vec::with_capacity(width);
            t.extend(row.iter().cloned());
            t.extend((0..m).map(|j| if i == j { one() } else { BigRational::zero() }));
            t.push(rhs[i].clone());
            t
        })
        .collect();
    // Reduced costs: entering candidates have positive entries.
    let mut costs: Vec<BigRational> = objective.iter().cloned().collect();
    costs.extend((0..=m).map(|_| BigRational::zero()));
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(entering) = (0..n + m).find(|&j| costs[j].is_positive()) else {
            break;
        };
        let mut leaving: Option<(usize, BigRational)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if !row[entering].is_positive() {
                continue;
            }
            let ratio = &row[width - 1] / &row[entering];
            let better = match &leaving {
                None => true,
                Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
            };
            if better {
                leaving = Some((i, ratio));
            }
        }
        let Some((pivot_row, _)) = leaving else {
            return SimplexOutcome::Unbounded;
        };
        pivot(&mut tableau, &mut costs, pivot_row, entering);
        basis[pivot_row] = entering;
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tableau[i][width - 1].clone();
        }
    }
    let value = -costs[width - 1].clone();
    SimplexOutcome::Optimal { value, x }
}

fn one() -> BigRational {
    BigRational::from_integer(1.into())
}

fn pivot(tableau: &mut [Vec<BigRational>], costs: &mut [BigRational], row: usize, col: usize) {
    let inv = tableau[row][col].recip();
    for v in tableau[row].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = tableau[row].clone();
    let eliminate = |target: &mut Vec<BigRational>| {
        let factor = target[col].clone();
        if factor.is_zero() {
            return;
        }
        for (t, p) in target.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *t -= &factor * p;
            }
        }
    };
    for (i, r) in tableau.iter_mut().enumerate() {
        if i != row {
            eliminate(r);
        }
    }
    let mut c = costs.to_vec();
    eliminate(&mut c);
    costs.clone_from_slice(&c);
}
