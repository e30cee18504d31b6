//! Uniform planar array layout of the surface cells.
//!
//! Cells are indexed `m = m_y * m_x_count + m_x` (0-based, row-major). Cell
//! positions are measured from the corner cell; the feed antenna sits on the
//! axis through the geometric center of the surface at distance
//! `separation` behind it.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)] // inherent float methods need std
use num_traits::Float;

use crate::{CVector, Error, Result, C64};

/// A departure direction: azimuth in `[-pi, pi]`, elevation (polar angle from
/// broadside) in `[0, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    azimuth: f64,
    elevation: f64,
}

impl Direction {
    pub fn new(azimuth: f64, elevation: f64) -> Result<Self> {
        if !(azimuth.is_finite() && (-PI..=PI).contains(&azimuth)) {
            return Err(Error::invalid("azimuth", "must lie in [-pi, pi]"));
        }
        if !(elevation.is_finite() && (0.0..=PI / 2.0).contains(&elevation)) {
            return Err(Error::invalid("elevation", "must lie in [0, pi/2]"));
        }
        Ok(Self { azimuth, elevation })
    }

    /// Broadside, `(0, 0)`.
    pub const BROADSIDE: Direction = Direction {
        azimuth: 0.0,
        elevation: 0.0,
    };

    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }

    pub fn elevation(&self) -> f64 {
        self.elevation
    }
}

/// Wave-number vector `(2 pi / lambda) [sin el cos az, sin el sin az]`.
pub fn wavevector(direction: Direction, wavelength: f64) -> [f64; 2] {
    wavevector_raw(direction.azimuth, direction.elevation, wavelength)
}

/// Same as [`wavevector`] without range validation. Sampled path angles can
/// spill past the nominal ranges and are used as-is.
pub fn wavevector_raw(azimuth: f64, elevation: f64, wavelength: f64) -> [f64; 2] {
    let k = 2.0 * PI / wavelength;
    let (se, _) = elevation.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    [k * se * ca, k * se * sa]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    m_x_count: usize,
    m_y_count: usize,
    dx: f64,
    dy: f64,
    separation: f64,
    wavelength: f64,
    element_area: f64,
    positions: Vec<[f64; 2]>,
    center_offsets: Vec<f64>,
    distances: Vec<f64>,
}

impl ArrayGeometry {
    /// Builds the layout and the feed-to-cell distances.
    ///
    /// `separation` is the feed-to-surface distance `d_c`; all lengths in
    /// meters, `element_area` in square meters.
    pub fn new(
        m_x_count: usize,
        m_y_count: usize,
        dx: f64,
        dy: f64,
        separation: f64,
        wavelength: f64,
        element_area: f64,
    ) -> Result<Self> {
        if m_x_count == 0 {
            return Err(Error::invalid("m_x_count", "must be at least 1"));
        }
        if m_y_count == 0 {
            return Err(Error::invalid("m_y_count", "must be at least 1"));
        }
        for (name, v) in [
            ("dx", dx),
            ("dy", dy),
            ("separation", separation),
            ("wavelength", wavelength),
            ("element_area", element_area),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, "must be positive and finite"));
            }
        }

        let m = m_x_count * m_y_count;
        let mut positions = Vec::with_capacity(m);
        let mut center_offsets = Vec::with_capacity(m);
        let mut distances = Vec::with_capacity(m);
        for my in 0..m_y_count {
            for mx in 0..m_x_count {
                positions.push([mx as f64 * dx, my as f64 * dy]);
                // Integer offsets from the center keep mirrored cells bit-identical.
                let ox = dx * (2 * mx).abs_diff(m_x_count - 1) as f64;
                let oy = dy * (2 * my).abs_diff(m_y_count - 1) as f64;
                let offset = 0.5 * (ox * ox + oy * oy).sqrt();
                center_offsets.push(offset);
                distances.push((separation * separation + offset * offset).sqrt());
            }
        }

        Ok(Self {
            m_x_count,
            m_y_count,
            dx,
            dy,
            separation,
            wavelength,
            element_area,
            positions,
            center_offsets,
            distances,
        })
    }

    /// Half-wavelength lattice with cell area `(lambda/2)^2`, the default
    /// surface of the simulation setup.
    pub fn half_wavelength(
        m_x_count: usize,
        m_y_count: usize,
        separation: f64,
        wavelength: f64,
    ) -> Result<Self> {
        let half = wavelength / 2.0;
        Self::new(
            m_x_count,
            m_y_count,
            half,
            half,
            separation,
            wavelength,
            half * half,
        )
    }

    /// Number of cells `M`.
    pub fn len(&self) -> usize {
        self.m_x_count * self.m_y_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn m_x_count(&self) -> usize {
        self.m_x_count
    }

    pub fn m_y_count(&self) -> usize {
        self.m_y_count
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dy(&self) -> f64 {
        self.dy
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn element_area(&self) -> f64 {
        self.element_area
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// In-plane distances `d_m'` from each cell to the surface center.
    pub fn center_offsets(&self) -> &[f64] {
        &self.center_offsets
    }

    /// Feed-to-cell distances `d_m`.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn cell_index(&self, m_x: usize, m_y: usize) -> usize {
        debug_assert!(m_x < self.m_x_count && m_y < self.m_y_count);
        m_y * self.m_x_count + m_x
    }

    /// `(m_x, m_y)` of cell `m`.
    pub fn cell_coords(&self, m: usize) -> (usize, usize) {
        (m % self.m_x_count, m / self.m_x_count)
    }

    /// Point reflection through the surface center.
    pub fn mirror(&self, m: usize) -> usize {
        let (mx, my) = self.cell_coords(m);
        self.cell_index(self.m_x_count - 1 - mx, self.m_y_count - 1 - my)
    }

    /// Reflection across the vertical center line (`m_x -> M_x - 1 - m_x`).
    pub fn reflect_x(&self, m: usize) -> usize {
        let (mx, my) = self.cell_coords(m);
        self.cell_index(self.m_x_count - 1 - mx, my)
    }

    /// Reflection across the horizontal center line (`m_y -> M_y - 1 - m_y`).
    pub fn reflect_y(&self, m: usize) -> usize {
        let (mx, my) = self.cell_coords(m);
        self.cell_index(mx, self.m_y_count - 1 - my)
    }

    /// Array response toward a validated direction.
    pub fn steering_vector(&self, direction: Direction) -> CVector {
        self.response(direction.azimuth, direction.elevation)
    }

    /// Array response `a(az, el)` with entries `exp(j k^T p_m) / sqrt(M)`,
    /// accepting any real angles.
    pub fn response(&self, azimuth: f64, elevation: f64) -> CVector {
        let [kx, ky] = wavevector_raw(azimuth, elevation, self.wavelength);
        let scale = 1.0 / (self.len() as f64).sqrt();
        let cols: Vec<C64> = (0..self.m_x_count)
            .map(|mx| C64::from_polar(1.0, kx * mx as f64 * self.dx))
            .collect();
        let rows: Vec<C64> = (0..self.m_y_count)
            .map(|my| C64::from_polar(scale, ky * my as f64 * self.dy))
            .collect();
        CVector::from_fn(self.len(), |m, _| {
            rows[m / self.m_x_count] * cols[m % self.m_x_count]
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units;
    use std::vec;

    fn lambda() -> f64 {
        units::wavelength(28e9)
    }

    #[test]
    fn rejects_non_positive_dimensions() {
        let l = lambda();
        let err = ArrayGeometry::new(2, 2, 0.0, l, l, l, l).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "dx", .. }));
        let err = ArrayGeometry::new(2, 2, l, l, -1.0, l, l).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                field: "separation",
                ..
            }
        ));
        let err = ArrayGeometry::new(0, 2, l, l, l, l, l).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                field: "m_x_count",
                ..
            }
        ));
        let err = ArrayGeometry::new(2, 2, l, l, l, l, f64::NAN).unwrap_err();
        assert!(matches!(
            err,
            Error::InvalidParameter {
                field: "element_area",
                ..
            }
        ));
    }

    #[test]
    fn single_cell_sits_on_axis() {
        let g = ArrayGeometry::half_wavelength(1, 1, 0.37, lambda()).unwrap();
        assert_eq!(g.center_offsets(), &[0.0]);
        assert_eq!(g.distances(), &[0.37]);
    }

    #[test]
    fn two_by_two_offsets_are_equal() {
        let l = lambda();
        let g = ArrayGeometry::half_wavelength(2, 2, l / 2.0, l).unwrap();
        let expected = l * 2f64.sqrt() / 4.0;
        for &d in g.center_offsets() {
            assert!((d - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn ten_by_ten_matches_scalar_oracle() {
        let l = lambda();
        let dc = l / 2.0;
        let g = ArrayGeometry::half_wavelength(10, 10, dc, l).unwrap();
        for my in 0..10 {
            for mx in 0..10 {
                let m = my * 10 + mx;
                // independent evaluation from the centered coordinates
                let cx = (mx as f64 - 4.5) * l / 2.0;
                let cy = (my as f64 - 4.5) * l / 2.0;
                let dp = (cx * cx + cy * cy).sqrt();
                let d = (dc * dc + dp * dp).sqrt();
                assert!((g.center_offsets()[m] - dp).abs() < 1e-15);
                assert!((g.distances()[m] - d).abs() / d < 1e-14);
                assert_eq!(g.positions()[m], [mx as f64 * l / 2.0, my as f64 * l / 2.0]);
            }
        }
    }

    #[test]
    fn offsets_are_mirror_symmetric() {
        let l = lambda();
        let g = ArrayGeometry::new(5, 4, 0.6 * l, 0.45 * l, l, l, l * l / 4.0).unwrap();
        for m in 0..g.len() {
            assert_eq!(g.distances()[m], g.distances()[g.reflect_x(m)]);
            assert_eq!(g.distances()[m], g.distances()[g.reflect_y(m)]);
            assert_eq!(g.distances()[m], g.distances()[g.mirror(m)]);
            assert!(g.distances()[m] >= g.separation());
        }
    }

    #[test]
    fn min_distance_depends_on_parity() {
        let l = lambda();
        let dc = 0.7 * l;
        let odd = ArrayGeometry::new(5, 4, 0.5 * l, 0.4 * l, dc, l, 1e-6).unwrap();
        let min = odd
            .distances()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        // M_x odd but M_y even: the closest cells sit half a row off center
        assert!((min - (dc * dc + (0.2 * l).powi(2)).sqrt()).abs() < 1e-15);

        let odd_both = ArrayGeometry::new(5, 3, 0.5 * l, 0.4 * l, dc, l, 1e-6).unwrap();
        let min = odd_both
            .distances()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min, dc);

        let even = ArrayGeometry::new(6, 4, 0.5 * l, 0.4 * l, dc, l, 1e-6).unwrap();
        let min = even
            .distances()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let expected = (dc * dc + (0.25 * l * l + 0.16 * l * l) / 4.0).sqrt();
        assert!((min - expected).abs() < 1e-15);
    }

    #[test]
    fn transposed_layout_has_same_distances() {
        let l = lambda();
        let a = ArrayGeometry::new(4, 3, 0.5 * l, 0.7 * l, l, l, 1e-6).unwrap();
        let b = ArrayGeometry::new(3, 4, 0.7 * l, 0.5 * l, l, l, 1e-6).unwrap();
        for mx in 0..4 {
            for my in 0..3 {
                let da = a.distances()[a.cell_index(mx, my)];
                let db = b.distances()[b.cell_index(my, mx)];
                assert!((da - db).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(PI, PI / 2.0).is_ok());
        assert!(Direction::new(-PI, 0.0).is_ok());
        assert!(Direction::new(3.2, 0.1).is_err());
        assert!(Direction::new(0.0, -0.01).is_err());
        assert!(Direction::new(0.0, 1.6).is_err());
        assert!(Direction::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn wavevector_examples() {
        let l = lambda();
        let k = 2.0 * PI / l;
        assert_eq!(wavevector(Direction::BROADSIDE, l), [0.0, 0.0]);
        let endfire = wavevector(Direction::new(0.0, PI / 2.0).unwrap(), l);
        assert!((endfire[0] - k).abs() < 1e-9 && endfire[1].abs() < 1e-9);
        let w = wavevector(Direction::new(PI / 4.0, PI / 6.0).unwrap(), l);
        let expected = k * 0.5 * 2f64.sqrt() / 2.0;
        assert!((w[0] - expected).abs() < 1e-9 && (w[1] - expected).abs() < 1e-9);
    }

    #[test]
    fn broadside_response_is_uniform() {
        let g = ArrayGeometry::half_wavelength(3, 4, 0.01, lambda()).unwrap();
        let a = g.steering_vector(Direction::BROADSIDE);
        for z in a.iter() {
            assert!((z - C64::new(1.0 / 12f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn two_element_endfire_response() {
        let l = lambda();
        let g = ArrayGeometry::half_wavelength(2, 1, l, l).unwrap();
        let a = g.steering_vector(Direction::new(0.0, PI / 2.0).unwrap());
        let s = 1.0 / 2f64.sqrt();
        assert!((a[0] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((a[1] - C64::new(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn response_matches_direct_phase_evaluation() {
        let l = lambda();
        let g = ArrayGeometry::new(4, 3, 0.5 * l, 0.6 * l, l, l, 1e-6).unwrap();
        for &(az, el) in &[(0.3, 0.2), (-2.9, 1.4), (4.0, -0.3)] {
            let a = g.response(az, el);
            let k = 2.0 * PI / l;
            let kv = vec![k * el.sin() * az.cos(), k * el.sin() * az.sin()];
            for (m, p) in g.positions().iter().enumerate() {
                let phase = kv[0] * p[0] + kv[1] * p[1];
                let direct = C64::new(phase.cos(), phase.sin()) / 12f64.sqrt();
                assert!((a[m] - direct).norm() < 1e-14);
            }
            assert!((a.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distinct_directions_correlate_at_most_one() {
        let g = ArrayGeometry::half_wavelength(6, 6, 0.01, lambda()).unwrap();
        let a = g.response(0.2, 0.3);
        let b = g.response(-1.0, 0.9);
        let c = a.dotc(&b).norm();
        assert!(c < 1.0);
        assert!((a.dotc(&a).norm() - 1.0).abs() < 1e-12);
    }
}
