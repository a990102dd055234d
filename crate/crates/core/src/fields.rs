//! Parameter-plane sweeps: hybrid sets, contour sets, multi-Mandelbrot
//! slices and the classical Mandelbrot mask.
//!
//! Every cell is an independent pure computation, so fields are evaluated
//! in parallel and come out identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::GridSpec;
use crate::msets::{survivor_count, survivor_fraction, Budget, CriticalMode};
use crate::orbit::{iterate_bits, ComplexValue, ParamPair};

/// One real value per grid cell, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub data: Vec<f64>,
}

impl ScalarField {
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(ComplexValue) -> f64 + Sync,
    {
        let data = (0..grid.len())
            .into_par_iter()
            .map(|i| f(grid.point_at(i)))
            .collect();
        ScalarField { grid, data }
    }

    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.data[row * self.grid.cols + col]
    }

    /// Value at the cell containing `z`.
    pub fn at(&self, z: ComplexValue) -> Option<f64> {
        self.grid.cell_of(z).map(|(c, r)| self.get(c, r))
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One boolean per grid cell, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolField {
    pub grid: GridSpec,
    pub data: Vec<bool>,
}

impl BoolField {
    pub fn from_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn(ComplexValue) -> bool + Sync,
    {
        let data = (0..grid.len())
            .into_par_iter()
            .map(|i| f(grid.point_at(i)))
            .collect();
        BoolField { grid, data }
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.data[row * self.grid.cols + col]
    }

    pub fn at(&self, z: ComplexValue) -> Option<bool> {
        self.grid.cell_of(z).map(|(c, r)| self.get(c, r))
    }

    pub fn count_true(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Cellwise implication `self => other`; grids must match.
    pub fn is_subset_of(&self, other: &BoolField) -> bool {
        self.grid == other.grid && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }
}

/// Root hybrid set over a `c1` grid: `b(c1) = phi^N_{c0,c1}(1)`.
pub fn hybrid_field(
    c0: ComplexValue,
    grid: &GridSpec,
    depth: u32,
    mode: CriticalMode,
    budget: &Budget,
) -> Result<ScalarField> {
    budget.check(grid.len() as u64, depth)?;
    Ok(ScalarField::from_fn(*grid, |c1| {
        survivor_fraction(&ParamPair::new(c0, c1), depth, mode)
    }))
}

/// Cells where the value is exactly 1.
pub fn central_plateau(field: &ScalarField) -> BoolField {
    BoolField {
        grid: field.grid,
        data: field.data.iter().map(|&v| v == 1.0).collect(),
    }
}

/// Contour set over a `c0` grid: the maximum of `phi^N_{c0,c1}(1)` over the
/// finite `c1` grid. This is a lower bound of the supremum over all `c1`.
pub fn contour_field(
    grid_c0: &GridSpec,
    grid_c1: &GridSpec,
    depth: u32,
    mode: CriticalMode,
    budget: &Budget,
) -> Result<ScalarField> {
    let cells = (grid_c0.len() as u64).saturating_mul(grid_c1.len() as u64);
    budget.check(cells, depth)?;
    let full = 1u64 << depth;
    Ok(ScalarField::from_fn(*grid_c0, |c0| {
        let best = (0..grid_c1.len())
            .into_par_iter()
            .map(|i| survivor_count(&ParamPair::new(c0, grid_c1.point_at(i)), depth, mode))
            .max()
            .unwrap_or(0);
        debug_assert!(best <= full);
        best as f64 / full as f64
    }))
}

/// Which parameter of a 2D multi-Mandelbrot slice is held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "fixed", rename_all = "lowercase")]
pub enum SliceAxis {
    /// Fix `c0`, sweep `c1` over the grid.
    C0 { re: f64, im: f64 },
    /// Fix `c1`, sweep `c0` over the grid.
    C1 { re: f64, im: f64 },
}

impl SliceAxis {
    fn pair(&self, free: ComplexValue) -> ParamPair {
        match *self {
            SliceAxis::C0 { re, im } => ParamPair::new(ComplexValue::new(re, im), free),
            SliceAxis::C1 { re, im } => ParamPair::new(free, ComplexValue::new(re, im)),
        }
    }
}

/// 2D slice of the N-rooted multi-Mandelbrot set: N-well-behavedness over the
/// free parameter. Regular and multicritical multi-Mandelbrot sets coincide,
/// so only the regular test is run.
pub fn multi_mandelbrot_slice(axis: SliceAxis, grid: &GridSpec, depth: u32, budget: &Budget) -> Result<BoolField> {
    budget.check(grid.len() as u64, depth)?;
    let full = 1u64 << depth;
    Ok(BoolField::from_fn(*grid, |free| {
        survivor_count(&axis.pair(free), depth, CriticalMode::Regular) == full
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Voxel {
    pub re_c0: f64,
    pub re_c1: f64,
    pub im_c1: f64,
}

/// Samples of `Re(c0)`: centers of `samples` equal bins of `[lo, hi]`.
pub fn line_samples(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let step = (hi - lo) / samples as f64;
    (0..samples).map(|k| lo + (k as f64 + 0.5) * step).collect()
}

/// 3D slice: `c0 = Re(c0) + i im_offset` along a line, stacked 2D slices over
/// the `c1` grid, emitted as the list of well-behaved voxels.
pub fn multi_mandelbrot_voxels(
    re_range: (f64, f64),
    samples: usize,
    im_offset: f64,
    grid_c1: &GridSpec,
    depth: u32,
    budget: &Budget,
) -> Result<Vec<Voxel>> {
    let cells = (samples as u64).saturating_mul(grid_c1.len() as u64);
    budget.check(cells, depth)?;
    let mut voxels = Vec::new();
    for re_c0 in line_samples(re_range.0, re_range.1, samples) {
        let axis = SliceAxis::C0 { re: re_c0, im: im_offset };
        let slice = multi_mandelbrot_slice(axis, grid_c1, depth, &Budget::unlimited())?;
        voxels.extend(slice.data.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| {
            let c1 = grid_c1.point_at(i);
            Voxel {
                re_c0,
                re_c1: c1.re,
                im_c1: c1.im,
            }
        }));
    }
    Ok(voxels)
}

/// Truncated classical Mandelbrot set: the orbit of 0 under `f_c` stays
/// within `max(2, |c|)` for `iters` steps.
pub fn classical_mandelbrot_mask(grid: &GridSpec, iters: usize) -> BoolField {
    BoolField::from_fn(*grid, |c| {
        let pair = ParamPair::diagonal(c);
        iterate_bits(&pair, std::iter::repeat_n(false, iters), ComplexValue::new(0.0, 0.0)).survived()
    })
}
