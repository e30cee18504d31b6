//! Scattering-matrix synthesis.
//!
//! BD-RIS groups are configured so that each block maps its normalized feed
//! sub-channel onto the normalized beamformer sub-vector; the diagonal RIS
//! benchmark only aligns phases, and the active array benchmark applies
//! phase-only weights directly.

mod complexity;
mod grouping;
mod takagi;

pub use complexity::{circuit_complexity, Architecture, ComplexityReport};
pub use grouping::{make_grouping, Grouping, GroupingStrategy};
pub use takagi::{coupling_matrix, group_scattering, group_scattering_dense, takagi, Takagi};

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_traits::Euclid;
#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::{CMatrix, CVector, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScatteringKind {
    /// Block-diagonal, each block unitary and symmetric.
    BlockUnitary,
    /// Diagonal with unit-modulus entries.
    DiagonalPhase,
}

/// How each group block is synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TakagiRoute {
    /// Uses the rank-two structure of the coupling matrix.
    #[default]
    Structured,
    /// Dense SVD of the full coupling matrix.
    Dense,
}

/// Block-diagonal scattering matrix over a grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringMatrix {
    kind: ScatteringKind,
    grouping: Grouping,
    blocks: Vec<CMatrix>,
    phase_corrected: bool,
}

impl ScatteringMatrix {
    /// Validates blocks against the grouping and the structural constraints
    /// of `kind`.
    pub fn from_blocks(
        kind: ScatteringKind,
        grouping: Grouping,
        blocks: Vec<CMatrix>,
    ) -> Result<Self> {
        Error::check_len(grouping.group_count(), blocks.len())?;
        let size = grouping.group_size();
        for (q, b) in blocks.iter().enumerate() {
            if b.nrows() != size || b.ncols() != size {
                return Err(Error::Contract(format!(
                    "block {q} is {}x{}, expected {size}x{size}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        let s = Self {
            kind,
            grouping,
            blocks,
            phase_corrected: false,
        };
        let tol = 1e-9 * (s.len() as f64).sqrt();
        match kind {
            ScatteringKind::BlockUnitary => {
                if s.unitarity_error() > tol {
                    return Err(Error::Contract("blocks are not unitary".into()));
                }
                if s.symmetry_error() > tol {
                    return Err(Error::Contract("blocks are not symmetric".into()));
                }
            }
            ScatteringKind::DiagonalPhase => {
                if size != 1 {
                    return Err(Error::Contract(
                        "diagonal scattering needs 1x1 blocks".into(),
                    ));
                }
                if s.blocks
                    .iter()
                    .any(|b| (b[(0, 0)].norm() - 1.0).abs() > 1e-12)
                {
                    return Err(Error::Contract(
                        "diagonal entries must have unit modulus".into(),
                    ));
                }
            }
        }
        Ok(s)
    }

    pub fn kind(&self) -> ScatteringKind {
        self.kind
    }

    pub fn grouping(&self) -> &Grouping {
        &self.grouping
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.grouping.cells()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether a common phase per group was applied to align the groups.
    pub fn phase_corrected(&self) -> bool {
        self.phase_corrected
    }

    /// `Omega x` without forming the full matrix.
    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        Error::check_len(self.len(), x.len())?;
        let mut y = CVector::zeros(x.len());
        for (idx, block) in self.grouping.groups().iter().zip(&self.blocks) {
            let xq = CVector::from_iterator(idx.len(), idx.iter().map(|&m| x[m]));
            let yq = block * xq;
            for (k, &m) in idx.iter().enumerate() {
                y[m] = yq[k];
            }
        }
        Ok(y)
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.len();
        let mut full = CMatrix::zeros(n, n);
        for (idx, block) in self.grouping.groups().iter().zip(&self.blocks) {
            for (i, &r) in idx.iter().enumerate() {
                for (j, &c) in idx.iter().enumerate() {
                    full[(r, c)] = block[(i, j)];
                }
            }
        }
        full
    }

    /// `||Omega^H Omega - I||_F`.
    pub fn unitarity_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b.adjoint() * b - CMatrix::identity(b.nrows(), b.ncols())).norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// `||Omega - Omega^T||_F`.
    pub fn symmetry_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b - b.transpose()).norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

fn gather(x: &CVector, idx: &[usize]) -> CVector {
    CVector::from_iterator(idx.len(), idx.iter().map(|&m| x[m]))
}

fn wrap(angle: f64) -> f64 {
    let a = Euclid::rem_euclid(&(angle + PI), &(2.0 * PI)) - PI;
    if a == -PI {
        PI
    } else {
        a
    }
}

/// Largest pairwise circular difference between phases.
pub fn phase_spread(phases: &[f64]) -> f64 {
    let mut spread: f64 = 0.0;
    for (i, &a) in phases.iter().enumerate() {
        for &b in &phases[i + 1..] {
            spread = spread.max(wrap(a - b).abs());
        }
    }
    spread
}

/// BD-RIS configuration with the default (structured) Takagi route.
pub fn configure_bdris(g: &CVector, b: &CVector, grouping: &Grouping) -> Result<ScatteringMatrix> {
    configure_bdris_with(g, b, grouping, TakagiRoute::Structured)
}

/// BD-RIS configuration: per group, `u = g_q/||g_q||`, `v = b_q/||b_q||`,
/// `Omega_q = Q Q^T` from the Takagi factor of `v u^H + (v u^H)^T`.
///
/// If the groups' residual phases `arg(b_q^H Omega_q g_q)` spread by more
/// than 1e-6 rad, each block is rotated by its own residual so the groups
/// combine coherently.
pub fn configure_bdris_with(
    g: &CVector,
    b: &CVector,
    grouping: &Grouping,
    route: TakagiRoute,
) -> Result<ScatteringMatrix> {
    Error::check_len(grouping.cells(), g.len())?;
    Error::check_len(grouping.cells(), b.len())?;
    let mut blocks = Vec::with_capacity(grouping.group_count());
    let mut residuals = Vec::with_capacity(grouping.group_count());
    for (q, idx) in grouping.groups().iter().enumerate() {
        let gq = gather(g, idx);
        let aq = gather(b, idx);
        let (ng, na) = (gq.norm(), aq.norm());
        if !(ng > 0.0) {
            return Err(Error::Degenerate(format!(
                "feed sub-channel of group {q} is zero"
            )));
        }
        if !(na > 0.0) {
            return Err(Error::Degenerate(format!(
                "beamformer sub-vector of group {q} is zero"
            )));
        }
        let u = gq.unscale(ng);
        let v = aq.unscale(na);
        let block = match route {
            TakagiRoute::Structured => group_scattering(&u, &v)?,
            TakagiRoute::Dense => group_scattering_dense(&u, &v)?,
        };
        residuals.push(aq.dotc(&(&block * &gq)).arg());
        blocks.push(block);
    }
    let phase_corrected = phase_spread(&residuals) > 1e-6;
    if phase_corrected {
        for (block, &psi) in blocks.iter_mut().zip(&residuals) {
            *block *= C64::from_polar(1.0, -psi);
        }
    }
    Ok(ScatteringMatrix {
        kind: ScatteringKind::BlockUnitary,
        grouping: grouping.clone(),
        blocks,
        phase_corrected,
    })
}

/// Diagonal RIS: `Omega = diag(exp(-j arg(g * conj(b))))`, so every cell's
/// contribution lines up with the phase of `b`.
pub fn configure_dris(g: &CVector, b: &CVector) -> Result<ScatteringMatrix> {
    Error::check_len(g.len(), b.len())?;
    if let Some(m) = g.iter().position(|z| *z == C64::new(0.0, 0.0)) {
        return Err(Error::Degenerate(format!("feed channel entry {m} is zero")));
    }
    let blocks = g
        .iter()
        .zip(b.iter())
        .map(|(gm, bm)| CMatrix::from_element(1, 1, C64::from_polar(1.0, -(gm * bm.conj()).arg())))
        .collect();
    Ok(ScatteringMatrix {
        kind: ScatteringKind::DiagonalPhase,
        grouping: Grouping::linear(g.len(), g.len())?,
        blocks,
        phase_corrected: false,
    })
}

/// Phase-only active array weights `exp(j arg(v1))`; zero entries get
/// phase 0.
pub fn active_array_weights(v1: &CVector) -> CVector {
    v1.map(|z| C64::from_polar(1.0, z.arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> CVector {
        CVector::from_fn(n, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn singleton_groups_are_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_vector(8, &mut rng);
        let b = random_vector(8, &mut rng);
        let om = configure_bdris(&g, &b, &Grouping::linear(8, 8).unwrap()).unwrap();
        for blk in om.blocks() {
            assert_eq!(blk.shape(), (1, 1));
            assert!((blk[(0, 0)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn collinearity_and_power_per_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (n, groups) in [(12, 1), (12, 3), (12, 4), (16, 2)] {
            let g = random_vector(n, &mut rng);
            let b = random_vector(n, &mut rng);
            let grouping = Grouping::linear(n, groups).unwrap();
            for route in [TakagiRoute::Structured, TakagiRoute::Dense] {
                let om = configure_bdris_with(&g, &b, &grouping, route).unwrap();
                let zeta = om.apply(&g).unwrap();
                assert!((zeta.norm() - g.norm()).abs() < 1e-10 * g.norm());
                for idx in grouping.groups() {
                    let gq = gather(&g, idx);
                    let aq = gather(&b, idx);
                    let zq = gather(&zeta, idx);
                    assert!((aq.dotc(&zq).norm() - aq.norm() * gq.norm()).abs() < 1e-8);
                }
                assert!(om.unitarity_error() < 1e-9);
                assert!(om.symmetry_error() < 1e-9);
                assert!(!om.phase_corrected());
            }
        }
    }

    #[test]
    fn zero_group_is_named() {
        let mut g = CVector::from_element(4, C64::new(1.0, 0.0));
        g[2] = C64::new(0.0, 0.0);
        g[3] = C64::new(0.0, 0.0);
        let b = g.map(|_| C64::new(1.0, 0.0));
        let err = configure_bdris(&g, &b, &Grouping::linear(4, 2).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Degenerate(ref s) if s.contains("group 1")));
    }

    #[test]
    fn dense_apply_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_vector(9, &mut rng);
        let b = random_vector(9, &mut rng);
        let grouping = Grouping::from_groups(
            GroupingStrategy::Linear,
            9,
            alloc::vec![
                alloc::vec![0, 4, 8],
                alloc::vec![1, 3, 5],
                alloc::vec![2, 6, 7]
            ],
        )
        .unwrap();
        let om = configure_bdris(&g, &b, &grouping).unwrap();
        assert!((om.to_dense() * &g - om.apply(&g).unwrap()).norm() < 1e-14);
        let dense = om.to_dense();
        assert_eq!(dense[(0, 1)], C64::new(0.0, 0.0));
        let round =
            ScatteringMatrix::from_blocks(om.kind(), om.grouping().clone(), om.blocks().to_vec())
                .unwrap();
        assert_eq!(round.blocks(), om.blocks());
    }

    #[test]
    fn from_blocks_rejects_non_unitary() {
        let grouping = Grouping::linear(2, 1).unwrap();
        let blk = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(ScatteringMatrix::from_blocks(
            ScatteringKind::BlockUnitary,
            grouping,
            alloc::vec![blk]
        )
        .is_err());
    }

    #[test]
    fn dris_identity_for_aligned_inputs() {
        let g = CVector::from_fn(5, |i, _| C64::new(1.0 + i as f64, 0.0));
        let b = CVector::from_element(5, C64::new(0.3, 0.0));
        let om = configure_dris(&g, &b).unwrap();
        assert!((om.to_dense() - CMatrix::identity(5, 5)).norm() < 1e-15);
    }

    #[test]
    fn dris_unit_modulus_and_alignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = random_vector(20, &mut rng);
        let b = random_vector(20, &mut rng);
        let om = configure_dris(&g, &b).unwrap();
        let zeta = om.apply(&g).unwrap();
        for m in 0..20 {
            assert!((om.blocks()[m][(0, 0)].norm() - 1.0).abs() < 1e-12);
            assert!((zeta[m] * b[m].conj()).arg().abs() < 1e-12);
        }
        let dense = om.to_dense();
        assert!(dense
            .iter()
            .enumerate()
            .all(|(k, z)| k % 21 == 0 || *z == C64::new(0.0, 0.0)));
    }

    #[test]
    fn dris_rank_one_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_vector(16, &mut rng);
        let v1 = random_vector(16, &mut rng).normalize();
        let sigma = 2.5;
        let h = v1.conjugate() * C64::new(sigma, 0.0);
        let om = configure_dris(&g, &v1).unwrap();
        let heff = h.dot(&om.apply(&g).unwrap());
        let expected: f64 = sigma
            * v1.iter()
                .zip(g.iter())
                .map(|(a, b)| a.norm() * b.norm())
                .sum::<f64>();
        assert!((heff.norm() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn dris_rejects_zero_feed() {
        let mut g = CVector::from_element(3, C64::new(1.0, 0.0));
        g[1] = C64::new(0.0, 0.0);
        assert!(configure_dris(&g, &g.clone()).is_err());
    }

    #[test]
    fn active_weights() {
        let ones = active_array_weights(&CVector::from_element(4, C64::new(0.2, 0.0)));
        assert!(ones
            .iter()
            .all(|z| (*z - C64::new(1.0, 0.0)).norm() < 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let v = random_vector(10, &mut rng);
        let w = active_array_weights(&v);
        for (a, b) in v.iter().zip(w.iter()) {
            assert!((b.norm() - 1.0).abs() < 1e-15);
            assert!(wrap(a.arg() - b.arg()).abs() < 1e-15);
        }
        let z = active_array_weights(&CVector::zeros(2));
        assert_eq!(z[0], C64::new(1.0, 0.0));
    }

    #[test]
    fn spread_is_circular() {
        assert!(phase_spread(&[PI - 0.1, -PI + 0.1]) < 0.2 + 1e-12);
        assert_eq!(phase_spread(&[0.3]), 0.0);
    }
}
