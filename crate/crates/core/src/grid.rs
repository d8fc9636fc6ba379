use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Uniform periodic grid on the box `[-L, L)^d`, `d = 1` or `2`.
///
/// Points per axis are `x_j = -L + j * dx` with `dx = 2L/N`, and the
/// wavenumbers follow the convention `k_m = pi * m / L` with signed
/// frequencies `m in {-N/2, ..., N/2 - 1}` stored in FFT order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    d: usize,
    l: f64,
    n: usize,
}

impl Grid {
    pub fn new(d: usize, l: f64, n: usize) -> Result<Self> {
        if d != 1 && d != 2 {
            return Err(Error::InvalidDimension(d));
        }
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidGrid(format!("box half-width L = {l} must be positive")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::NonPowerOfTwo(n));
        }
        Ok(Grid { d, l, n })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Half-width of the periodic box.
    pub fn half_width(&self) -> f64 {
        self.l
    }

    /// Points per axis.
    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    /// Total number of grid points, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.l / self.n as f64
    }

    /// Cell volume `dx^d`.
    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.d as i32)
    }

    /// Coordinate of index `j` along one axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.l + j as f64 * self.dx()
    }

    /// All axis coordinates in index order.
    pub fn axis_coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    /// Signed frequency of FFT bin `m` (ordering `0..N/2-1, -N/2..-1`).
    pub fn freq_index(&self, m: usize) -> i64 {
        if m < self.n / 2 {
            m as i64
        } else {
            m as i64 - self.n as i64
        }
    }

    /// Wavenumbers `k_m = pi * m / L` in FFT bin order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n)
            .map(|m| std::f64::consts::PI * self.freq_index(m) as f64 / self.l)
            .collect()
    }

    /// Flat index of the multi-index `(ix, iy)`; in 1d `iy` is ignored.
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        match self.d {
            1 => ix,
            _ => ix * self.n + iy,
        }
    }

    /// Spatial position of a flat index.
    pub fn position(&self, idx: usize) -> Vec<f64> {
        match self.d {
            1 => vec![self.coord(idx)],
            _ => vec![self.coord(idx / self.n), self.coord(idx % self.n)],
        }
    }

    /// `|x|` of a flat index.
    pub fn radius(&self, idx: usize) -> f64 {
        match self.d {
            1 => self.coord(idx).abs(),
            _ => {
                let x = self.coord(idx / self.n);
                let y = self.coord(idx % self.n);
                x.hypot(y)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_1d_spacing() {
        let g = Grid::new(1, 20.0, 256).unwrap();
        assert_eq!(g.dx(), 0.15625);
        // dx * N = 2L exactly
        assert_eq!(g.dx() * 256.0, 40.0);
        assert_eq!(g.len(), 256);
    }

    #[test]
    fn grid_2d_point_count() {
        let g = Grid::new(2, 10.0, 64).unwrap();
        assert_eq!(g.len(), 4096);
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(matches!(Grid::new(1, 20.0, 100), Err(Error::NonPowerOfTwo(100))));
        assert!(matches!(Grid::new(1, 20.0, 8), Err(Error::NonPowerOfTwo(8))));
    }

    #[test]
    fn rejects_bad_dimension_and_width() {
        assert!(matches!(Grid::new(3, 20.0, 64), Err(Error::InvalidDimension(3))));
        assert!(Grid::new(1, 0.0, 64).is_err());
        assert!(Grid::new(1, -1.0, 64).is_err());
    }

    #[test]
    fn wavenumber_convention() {
        let g = Grid::new(1, 20.0, 16).unwrap();
        let k = g.wavenumbers();
        let pi = std::f64::consts::PI;
        assert_eq!(k[0], 0.0);
        assert!((k[1] - pi / 20.0).abs() < 1e-15);
        // Nyquist bin carries the signed frequency -N/2
        assert!((k[8] + 8.0 * pi / 20.0).abs() < 1e-15);
        assert!((k[15] + pi / 20.0).abs() < 1e-15);
    }

    #[test]
    fn positions_cover_box() {
        let g = Grid::new(1, 20.0, 16).unwrap();
        assert_eq!(g.coord(0), -20.0);
        assert!(g.coord(15) < 20.0);
        let g2 = Grid::new(2, 10.0, 16).unwrap();
        let p = g2.position(g2.index(3, 5));
        assert_eq!(p[0], g2.coord(3));
        assert_eq!(p[1], g2.coord(5));
    }
}
