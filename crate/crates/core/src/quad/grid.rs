use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Midpoint,
    Simpson,
}

/// Per-axis node counts (space axes then time) and the quadrature rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub counts: Vec<usize>,
    pub rule: Rule,
}

pub const MIN_NODES_PER_AXIS: usize = 8;

impl GridSpec {
    pub fn new(counts: Vec<usize>, rule: Rule) -> Result<Self> {
        if counts.len() < 3 {
            return domain("grid needs at least two space axes and one time axis");
        }
        if let Some(n) = counts.iter().find(|&&n| n < MIN_NODES_PER_AXIS) {
            return domain(format!("grid axes need at least {MIN_NODES_PER_AXIS} nodes, got {n}"));
        }
        if rule == Rule::Simpson && counts.iter().any(|n| n % 2 == 0) {
            return domain("Simpson grids need an odd node count on every axis");
        }
        Ok(Self { counts, rule })
    }

    /// `n` nodes on each of the `dim + 1` axes.
    pub fn uniform(dim: usize, n: usize, rule: Rule) -> Result<Self> {
        Self::new(vec![n; dim + 1], rule)
    }

    /// 81 Simpson nodes per axis in two dimensions, 41 otherwise.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::uniform(dim, if dim <= 2 { 81 } else { 41 }, Rule::Simpson)
    }

    pub fn total_nodes(&self) -> usize {
        self.counts.iter().product()
    }

    /// Nodes and weights of the one-dimensional rule on `[lo, hi]`.
    pub(crate) fn axis(&self, n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
        match self.rule {
            Rule::Midpoint => {
                let h = (hi - lo) / n as f64;
                ((0..n).map(|i| lo + (i as f64 + 0.5) * h).collect(), vec![h; n])
            }
            Rule::Simpson => {
                let h = (hi - lo) / (n - 1) as f64;
                let nodes = (0..n).map(|i| lo + i as f64 * h).collect();
                let weights = (0..n)
                    .map(|i| {
                        let c = if i == 0 || i == n - 1 {
                            1.0
                        } else if i % 2 == 1 {
                            4.0
                        } else {
                            2.0
                        };
                        c * h / 3.0
                    })
                    .collect();
                (nodes, weights)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::uniform(2, 81, Rule::Simpson).is_ok());
        assert!(GridSpec::uniform(2, 80, Rule::Simpson).is_err());
        assert!(GridSpec::uniform(2, 80, Rule::Midpoint).is_ok());
        assert!(GridSpec::uniform(2, 7, Rule::Midpoint).is_err());
        assert!(GridSpec::new(vec![9, 9], Rule::Simpson).is_err());
        assert_eq!(GridSpec::default_for(3).unwrap().counts, vec![41; 4]);
    }

    #[test]
    fn rules_integrate_cubics_exactly() {
        let g = GridSpec::uniform(2, 9, Rule::Simpson).unwrap();
        let (x, w) = g.axis(9, 0.0, 2.0);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(3)).sum();
        assert!((s - 4.0).abs() < 1e-13);
        let g = GridSpec::uniform(2, 10, Rule::Midpoint).unwrap();
        let (x, w) = g.axis(10, 0.0, 2.0);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x).sum();
        assert!((s - 2.0).abs() < 1e-13);
    }
}
