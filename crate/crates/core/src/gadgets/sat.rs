use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Monotone 3SAT formula; variables are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneInThreeSat {
    variables: usize,
    clauses: Vec<[usize; 3]>,
}

impl OneInThreeSat {
    pub fn new(variables: usize, clauses: Vec<[usize; 3]>) -> Result<Self> {
        if variables == 0 || clauses.is_empty() {
            return Err(Error::InvalidParameters("need at least one variable and one clause".into()));
        }
        for (d, c) in clauses.iter().enumerate() {
            if c.iter().any(|&v| v == 0 || v > variables) {
                return Err(Error::InvalidParameters(format!(
                    "clause {} uses a variable outside 1..={variables}",
                    d + 1
                )));
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(Error::InvalidParameters(format!("clause {} repeats a variable", d + 1)));
            }
        }
        Ok(Self { variables, clauses })
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[usize; 3]] {
        &self.clauses
    }

    /// Number of occurrences of variable `e`.
    pub fn occurrences(&self, e: usize) -> usize {
        self.clauses.iter().flatten().filter(|&&v| v == e).count()
    }

    /// Exhaustive check for an assignment making exactly one literal per
    /// clause true.
    pub fn is_one_in_three_satisfiable(&self) -> bool {
        (0u64..1 << self.variables).any(|assignment| {
            self.clauses.iter().all(|c| {
                c.iter()
                    .filter(|&&v| assignment >> (v - 1) & 1 == 1)
                    .count()
                    == 1
            })
        })
    }

    /// Header `p cnf E D`, then one 0-terminated clause per line. Lines
    /// starting with `c` are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let bad = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if line.starts_with('p') {
                let parts: Vec<_> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(bad("expected `p cnf <variables> <clauses>`"));
                }
                let e = parts[2].parse().map_err(|_| bad("bad variable count"))?;
                let d = parts[3].parse().map_err(|_| bad("bad clause count"))?;
                header = Some((e, d));
                continue;
            }
            if header.is_none() {
                return Err(bad("clause before `p cnf` header"));
            }
            let nums = line
                .split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| bad("non-integer literal")))
                .collect::<Result<Vec<_>>>()?;
            if nums.len() != 4 || nums[3] != 0 {
                return Err(bad("each clause needs three literals and a terminating 0"));
            }
            if nums[..3].iter().any(|&v| v <= 0) {
                return Err(bad("literals must be positive"));
            }
            clauses.push([nums[0] as usize, nums[1] as usize, nums[2] as usize]);
        }
        let (e, d) = header.ok_or_else(|| Error::Parse("missing `p cnf` header".into()))?;
        if clauses.len() != d {
            return Err(Error::Parse(format!("header declares {d} clauses, found {}", clauses.len())));
        }
        Self::new(e, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.variables, self.clauses.len());
        for c in &self.clauses {
            writeln!(out, "{} {} {} 0", c[0], c[1], c[2]).expect("write to string");
        }
        out
    }
}

/// Every formula with `clauses` ordered clauses of three distinct variables
/// over `variables` variables, in lexicographic order.
pub fn all_formulas(variables: usize, clauses: usize) -> Vec<OneInThreeSat> {
    let triples: Vec<[usize; 3]> = (1..=variables)
        .flat_map(|a| (1..=variables).flat_map(move |b| (1..=variables).map(move |c| [a, b, c])))
        .filter(|t| t[0] != t[1] && t[0] != t[2] && t[1] != t[2])
        .collect();
    let mut formulas: Vec<Vec<[usize; 3]>> = vec![Vec::new()];
    for _ in 0..clauses {
        formulas = formulas
            .into_iter()
            .flat_map(|f| {
                triples.iter().map(move |t| {
                    let mut g = f.clone();
                    g.push(*t);
                    g
                })
            })
            .collect();
    }
    formulas
        .into_iter()
        .filter_map(|c| OneInThreeSat::new(variables, c).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let text = "c example\np cnf 4 2\n1 2 3 0\n2 3 4 0\n";
        let sat = OneInThreeSat::parse_dimacs(text).unwrap();
        assert_eq!(sat.clauses(), &[[1, 2, 3], [2, 3, 4]]);
        assert_eq!(sat.occurrences(2), 2);
        assert_eq!(sat.to_dimacs(), "p cnf 4 2\n1 2 3 0\n2 3 4 0\n");
    }

    #[test]
    fn parse_errors() {
        assert!(OneInThreeSat::parse_dimacs("1 2 3 0\n").is_err());
        assert!(OneInThreeSat::parse_dimacs("p cnf 3 1\n1 2 0\n").is_err());
        assert!(OneInThreeSat::parse_dimacs("p cnf 3 1\n1 -2 3 0\n").is_err());
        assert!(OneInThreeSat::parse_dimacs("p cnf 3 1\n1 1 3 0\n").is_err());
        assert!(OneInThreeSat::parse_dimacs("p cnf 3 2\n1 2 3 0\n").is_err());
        assert!(OneInThreeSat::parse_dimacs("p cnf 3 1\n1 2 4 0\n").is_err());
    }

    #[test]
    fn satisfiability() {
        assert!(OneInThreeSat::new(3, vec![[1, 2, 3]]).unwrap().is_one_in_three_satisfiable());
        let sat = OneInThreeSat::new(4, vec![[1, 2, 3], [1, 2, 4]]).unwrap();
        assert!(sat.is_one_in_three_satisfiable());
        // Each variable occurs three times, so the true-literal count 3|T| never equals 4.
        let unsat = OneInThreeSat::new(4, vec![[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        assert!(!unsat.is_one_in_three_satisfiable());
    }

    #[test]
    fn formula_counts() {
        assert_eq!(all_formulas(3, 1).len(), 6);
        assert_eq!(all_formulas(3, 2).len(), 36);
        assert_eq!(all_formulas(4, 1).len(), 24);
        assert_eq!(all_formulas(4, 2).len(), 576);
        assert!(all_formulas(2, 1).is_empty());
    }
}
