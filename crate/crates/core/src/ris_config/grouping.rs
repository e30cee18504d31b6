use alloc::format;
use alloc::vec::Vec;

use crate::geometry::ArrayGeometry;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupingStrategy {
    /// Consecutive blocks of `M / G` cell indices.
    Linear,
    /// Each group is a run of whole rows.
    Rows,
    /// Each parent group (the whole array, or a run of rows) is split into
    /// two halves that are mirror images around the feed axis.
    MirrorSymmetric,
}

/// A partition of the cell indices into equal-size disjoint groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    strategy: GroupingStrategy,
    groups: Vec<Vec<usize>>,
    cells: usize,
}

impl Grouping {
    /// Validates an explicit partition of `0..cells` into equal-size groups.
    pub fn from_groups(
        strategy: GroupingStrategy,
        cells: usize,
        groups: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::invalid("groups", "need at least one group"));
        }
        let size = groups[0].len();
        let mut seen = alloc::vec![false; cells];
        for (q, g) in groups.iter().enumerate() {
            if g.len() != size || size == 0 {
                return Err(Error::invalid(
                    "groups",
                    format!("group {q} has size {}, expected {size}", g.len()),
                ));
            }
            for &m in g {
                if m >= cells || seen[m] {
                    return Err(Error::invalid(
                        "groups",
                        format!("cell {m} is out of range or repeated"),
                    ));
                }
                seen[m] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::invalid("groups", "groups do not cover every cell"));
        }
        Ok(Self {
            strategy,
            groups,
            cells,
        })
    }

    /// `G` consecutive blocks over `cells` indices.
    pub fn linear(cells: usize, group_count: usize) -> Result<Self> {
        if group_count == 0 || cells == 0 || cells % group_count != 0 {
            return Err(Error::invalid(
                "group_count",
                format!("G = {group_count} does not divide M = {cells}"),
            ));
        }
        let size = cells / group_count;
        let groups = (0..group_count)
            .map(|q| (q * size..(q + 1) * size).collect())
            .collect();
        Ok(Self {
            strategy: GroupingStrategy::Linear,
            groups,
            cells,
        })
    }

    pub fn strategy(&self) -> GroupingStrategy {
        self.strategy
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn group_size(&self) -> usize {
        self.groups[0].len()
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn group(&self, q: usize) -> &[usize] {
        &self.groups[q]
    }
}

/// Builds a grouping of the array's cells.
///
/// `Rows` needs `G | M_y`. `MirrorSymmetric` needs an even `G`; its parents
/// are the whole array (`G = 2`) or `Rows(G / 2)`, and each parent is split by
/// the first fixed-point-free reflection (through the center, across the
/// vertical axis, across the horizontal axis) that maps it onto itself.
pub fn make_grouping(
    geometry: &ArrayGeometry,
    group_count: usize,
    strategy: GroupingStrategy,
) -> Result<Grouping> {
    let cells = geometry.len();
    match strategy {
        GroupingStrategy::Linear => Grouping::linear(cells, group_count),
        GroupingStrategy::Rows => {
            let rows = geometry.m_y_count();
            if group_count == 0 || rows % group_count != 0 {
                return Err(Error::invalid(
                    "group_count",
                    format!("row grouping needs G to divide M_y = {rows}, got {group_count}"),
                ));
            }
            let mut g = Grouping::linear(cells, group_count)?;
            g.strategy = GroupingStrategy::Rows;
            Ok(g)
        }
        GroupingStrategy::MirrorSymmetric => {
            if group_count == 0 || group_count % 2 != 0 {
                return Err(Error::invalid(
                    "group_count",
                    format!("mirror-symmetric grouping needs an even G, got {group_count}"),
                ));
            }
            let parents = if group_count == 2 {
                Grouping::linear(cells, 1)?
            } else {
                make_grouping(geometry, group_count / 2, GroupingStrategy::Rows)?
            };
            let mut groups = Vec::with_capacity(group_count);
            for (p, parent) in parents.groups().iter().enumerate() {
                let (a, b) = split_symmetric(geometry, parent).ok_or_else(|| {
                    Error::invalid(
                        "strategy",
                        format!("parent group {p} has no fixed-point-free mirror symmetry"),
                    )
                })?;
                groups.push(a);
                groups.push(b);
            }
            Ok(Grouping {
                strategy: GroupingStrategy::MirrorSymmetric,
                groups,
                cells,
            })
        }
    }
}

fn split_symmetric(geometry: &ArrayGeometry, parent: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let maps: [fn(&ArrayGeometry, usize) -> usize; 3] = [
        ArrayGeometry::mirror,
        ArrayGeometry::reflect_x,
        ArrayGeometry::reflect_y,
    ];
    for map in maps {
        let closed = parent.iter().all(|&m| {
            let s = map(geometry, m);
            s != m && parent.contains(&s)
        });
        if closed {
            let first: Vec<usize> = parent
                .iter()
                .copied()
                .filter(|&m| m < map(geometry, m))
                .collect();
            let mut second: Vec<usize> = first.iter().map(|&m| map(geometry, m)).collect();
            second.sort_unstable();
            return Some((first, second));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units;
    use std::vec;

    fn geom(mx: usize, my: usize) -> ArrayGeometry {
        let l = units::wavelength(28e9);
        ArrayGeometry::half_wavelength(mx, my, l / 2.0, l).unwrap()
    }

    fn sorted_distances(g: &ArrayGeometry, idx: &[usize]) -> Vec<f64> {
        let mut d: Vec<f64> = idx.iter().map(|&m| g.distances()[m]).collect();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d
    }

    #[test]
    fn single_group() {
        let g = make_grouping(&geom(2, 2), 1, GroupingStrategy::Linear).unwrap();
        assert_eq!(g.groups(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn linear_blocks_of_four() {
        let g = make_grouping(&geom(6, 6), 9, GroupingStrategy::Linear).unwrap();
        assert_eq!(g.group_count(), 9);
        for (q, grp) in g.groups().iter().enumerate() {
            assert_eq!(grp, &(4 * q..4 * q + 4).collect::<Vec<_>>());
        }
    }

    #[test]
    fn indivisible_counts_rejected() {
        let g = geom(10, 10);
        assert!(make_grouping(&g, 7, GroupingStrategy::Linear).is_err());
        assert!(make_grouping(&g, 4, GroupingStrategy::Rows).is_err());
        assert!(make_grouping(&g, 3, GroupingStrategy::MirrorSymmetric).is_err());
        assert!(make_grouping(&g, 0, GroupingStrategy::Linear).is_err());
        assert!(make_grouping(&geom(3, 3), 2, GroupingStrategy::MirrorSymmetric).is_err());
    }

    #[test]
    fn rows_are_whole_rows() {
        let g = geom(10, 10);
        let r = make_grouping(&g, 5, GroupingStrategy::Rows).unwrap();
        for grp in r.groups() {
            assert_eq!(grp.len(), 20);
            assert!(grp
                .iter()
                .all(|&m| g.cell_coords(m).1 / 2 == g.cell_coords(grp[0]).1 / 2));
        }
    }

    #[test]
    fn symmetric_halves_have_equal_distance_multisets() {
        let g = geom(10, 10);
        for count in [2, 20, 4, 10] {
            let s = make_grouping(&g, count, GroupingStrategy::MirrorSymmetric).unwrap();
            assert_eq!(s.group_count(), count);
            for pair in s.groups().chunks(2) {
                assert_eq!(
                    sorted_distances(&g, &pair[0]),
                    sorted_distances(&g, &pair[1])
                );
            }
        }
    }

    #[test]
    fn symmetric_splits_match_linear_layouts() {
        // through the center on the full array, across the vertical axis
        // on rows: both coincide with consecutive index blocks
        let g = geom(10, 10);
        for (count, linear) in [(2, 2), (20, 20)] {
            let s = make_grouping(&g, count, GroupingStrategy::MirrorSymmetric).unwrap();
            let l = make_grouping(&g, linear, GroupingStrategy::Linear).unwrap();
            assert_eq!(s.groups(), l.groups());
        }
    }

    #[test]
    fn explicit_groups_validated() {
        assert!(
            Grouping::from_groups(GroupingStrategy::Linear, 4, vec![vec![0, 1], vec![2, 3]])
                .is_ok()
        );
        assert!(
            Grouping::from_groups(GroupingStrategy::Linear, 4, vec![vec![0, 1], vec![1, 3]])
                .is_err()
        );
        assert!(
            Grouping::from_groups(GroupingStrategy::Linear, 4, vec![vec![0, 1, 2], vec![3]])
                .is_err()
        );
        assert!(
            Grouping::from_groups(GroupingStrategy::Linear, 5, vec![vec![0, 1], vec![2, 3]])
                .is_err()
        );
    }
}
