use alloc::format;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Architecture {
    /// Active array with one phase shifter per antenna.
    Active,
    /// Diagonal (phase-only) RIS.
    Dris,
    /// Fully-connected BD-RIS.
    BdFull,
    /// Group-connected BD-RIS.
    BdGroup,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityReport {
    pub architecture: Architecture,
    /// Number of circuit components.
    pub circuit_count: u64,
    /// Configuration cost model: `G (M/G)^3` for BD-RIS, `M` for
    /// per-element phase alignment.
    pub algo_flop_model: f64,
}

/// Circuit topology count and configuration cost of an architecture with
/// `cells` elements; `groups` is only read for [`Architecture::BdGroup`].
pub fn circuit_complexity(
    architecture: Architecture,
    cells: usize,
    groups: usize,
) -> Result<ComplexityReport> {
    if cells == 0 {
        return Err(Error::invalid("cells", "need at least one cell"));
    }
    let m = cells as u64;
    let mf = cells as f64;
    let (circuit_count, algo_flop_model) = match architecture {
        Architecture::Active => (m, mf),
        Architecture::Dris => (3 * m, mf),
        Architecture::BdFull => ((2 * m + 1) * m, mf * mf * mf),
        Architecture::BdGroup => {
            if groups == 0 || cells % groups != 0 {
                return Err(Error::invalid(
                    "groups",
                    format!("G = {groups} does not divide M = {cells}"),
                ));
            }
            let g = groups as u64;
            let gf = groups as f64;
            ((2 * m / g + 1) * m, mf * mf * mf / (gf * gf))
        }
    };
    Ok(ComplexityReport {
        architecture,
        circuit_count,
        algo_flop_model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(a: Architecture, m: usize, g: usize) -> u64 {
        circuit_complexity(a, m, g).unwrap().circuit_count
    }

    #[test]
    fn table_counts() {
        assert_eq!(count(Architecture::BdFull, 100, 1), 20100);
        assert_eq!(count(Architecture::BdGroup, 100, 10), 2100);
        assert_eq!(count(Architecture::Dris, 100, 1), 300);
        assert_eq!(count(Architecture::Active, 100, 1), 100);
        let ratio: f64 = 2100.0 / 20100.0;
        assert!((ratio - 0.104).abs() < 1e-3);
    }

    #[test]
    fn fully_split_matches_diagonal() {
        for m in [1, 4, 36, 100] {
            assert_eq!(
                count(Architecture::BdGroup, m, m),
                count(Architecture::Dris, m, 1)
            );
        }
    }

    #[test]
    fn strictly_decreasing_in_groups() {
        let divisors: std::vec::Vec<usize> = (1..=100).filter(|g| 100 % g == 0).collect();
        for w in divisors.windows(2) {
            assert!(
                count(Architecture::BdGroup, 100, w[1]) < count(Architecture::BdGroup, 100, w[0])
            );
        }
    }

    #[test]
    fn algorithm_model_scales_inverse_square() {
        let full = circuit_complexity(Architecture::BdGroup, 100, 1)
            .unwrap()
            .algo_flop_model;
        let ten = circuit_complexity(Architecture::BdGroup, 100, 10)
            .unwrap()
            .algo_flop_model;
        assert!((full / ten - 100.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_group_count() {
        assert!(circuit_complexity(Architecture::BdGroup, 100, 7).is_err());
        assert!(circuit_complexity(Architecture::BdGroup, 100, 0).is_err());
        assert!(circuit_complexity(Architecture::Active, 0, 1).is_err());
    }
}
