use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::orbit::ComplexValue;

/// A rectangle of the complex plane split into `cols x rows` cells.
///
/// Cells are sampled at their centers. Row 0 is the top row (largest
/// imaginary part) so that row-major data reads like an image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub cols: usize,
    pub rows: usize,
}

// Bounds are validated finite, so equality is total.
impl Eq for GridSpec {}

impl GridSpec {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, cols: usize, rows: usize) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidGrid(format!(
                "bounds [{re_min}, {re_max}] x [{im_min}, {im_max}] must be finite and increasing"
            )));
        }
        if cols == 0 || rows == 0 {
            return Err(Error::InvalidGrid("cols and rows must be at least 1".into()));
        }
        Ok(GridSpec {
            re_min,
            re_max,
            im_min,
            im_max,
            cols,
            rows,
        })
    }

    /// Square grid `[-half, half]^2` centered on the origin.
    pub fn centered_square(half: f64, size: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, size, size)
    }

    pub fn len(&self) -> usize {
        self.cols * self.rows
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_width(&self) -> f64 {
        (self.re_max - self.re_min) / self.cols as f64
    }

    pub fn cell_height(&self) -> f64 {
        (self.im_max - self.im_min) / self.rows as f64
    }

    pub fn re_at(&self, col: usize) -> f64 {
        self.re_min + (col as f64 + 0.5) * self.cell_width()
    }

    pub fn im_at(&self, row: usize) -> f64 {
        self.im_max - (row as f64 + 0.5) * self.cell_height()
    }

    pub fn point(&self, col: usize, row: usize) -> ComplexValue {
        ComplexValue::new(self.re_at(col), self.im_at(row))
    }

    /// Center of the cell with row-major index `i`.
    pub fn point_at(&self, i: usize) -> ComplexValue {
        self.point(i % self.cols, i / self.cols)
    }

    /// The `(col, row)` of the cell containing `z`, if any.
    pub fn cell_of(&self, z: ComplexValue) -> Option<(usize, usize)> {
        let x = (z.re - self.re_min) / self.cell_width();
        let y = (self.im_max - z.im) / self.cell_height();
        if x < 0.0 || y < 0.0 || x >= self.cols as f64 || y >= self.rows as f64 {
            return None;
        }
        Some((x as usize, y as usize))
    }

    /// Whether the rectangle contains `[-r, r]^2`.
    pub fn covers_disc(&self, r: f64) -> bool {
        self.re_min <= -r && self.re_max >= r && self.im_min <= -r && self.im_max >= r
    }

    pub fn points(&self) -> impl Iterator<Item = ComplexValue> + '_ {
        (0..self.len()).map(|i| self.point_at(i))
    }
}

/// Parses `re_min,re_max,im_min,im_max,cols,rows`.
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::InvalidGrid(format!(
                "expected re_min,re_max,im_min,im_max,cols,rows, got {s:?}"
            )));
        }
        let bound = |t: &str| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("bad bound {t:?}")))
        };
        let count = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::InvalidGrid(format!("bad cell count {t:?}")))
        };
        GridSpec::new(
            bound(parts[0])?,
            bound(parts[1])?,
            bound(parts[2])?,
            bound(parts[3])?,
            count(parts[4])?,
            count(parts[5])?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_centers() {
        let g = GridSpec::new(-2.0, 2.0, -1.0, 1.0, 4, 2).unwrap();
        assert_eq!(g.point(0, 0), ComplexValue::new(-1.5, 0.5));
        assert_eq!(g.point(3, 1), ComplexValue::new(1.5, -0.5));
        assert_eq!(g.point_at(5), g.point(1, 1));
        assert_eq!(g.cell_of(ComplexValue::new(0.1, 0.2)), Some((2, 0)));
        assert_eq!(g.cell_of(ComplexValue::new(2.1, 0.0)), None);
    }

    #[test]
    fn parse_and_validate() {
        let g: GridSpec = "-2,2,-2,2,64,64".parse().unwrap();
        assert_eq!((g.cols, g.rows), (64, 64));
        assert!("-2,2,-2,2,64".parse::<GridSpec>().is_err());
        assert!("2,-2,-2,2,4,4".parse::<GridSpec>().is_err());
        assert!("-2,2,-2,2,0,4".parse::<GridSpec>().is_err());
        assert!("-2,2,-2,nan,4,4".parse::<GridSpec>().is_err());
    }

    #[test]
    fn coverage() {
        let g = GridSpec::centered_square(2.5, 11).unwrap();
        assert!(g.covers_disc(2.0));
        assert!(g.covers_disc(2.5));
        assert!(!g.covers_disc(2.6));
    }
}
