//! Filled-Julia-set approximations for a fixed template root, and
//! connected-component counting on the resulting masks.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{BoolField, ScalarField};
use crate::grid::GridSpec;
use crate::orbit::{iterate_root, ComplexValue, ParamPair};
use crate::templates::TemplateRoot;

/// Neighbourhood used when joining mask cells into components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    /// Edge neighbours only. Diagonal contacts do not merge dust.
    #[default]
    Four,
    Eight,
}

/// Cells of the z-plane whose orbit stays in the escape disc for every step
/// of the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JuliaMask(pub BoolField);

impl JuliaMask {
    pub fn grid(&self) -> &GridSpec {
        &self.0.grid
    }

    pub fn field(&self) -> &BoolField {
        &self.0
    }

    pub fn at(&self, z: ComplexValue) -> Option<bool> {
        self.0.at(z)
    }
}

fn check_coverage(grid: &GridSpec, radius: f64) -> Result<()> {
    if grid.covers_disc(radius) {
        Ok(())
    } else {
        Err(Error::InsufficientCoverage { radius })
    }
}

pub fn julia_mask(pair: &ParamPair, root: &TemplateRoot, grid: &GridSpec) -> Result<JuliaMask> {
    check_coverage(grid, pair.escape_radius())?;
    Ok(mask_unchecked(pair, root, grid))
}

fn mask_unchecked(pair: &ParamPair, root: &TemplateRoot, grid: &GridSpec) -> JuliaMask {
    let data = (0..grid.len())
        .into_par_iter()
        .map(|i| iterate_root(pair, root, grid.point_at(i)).survived())
        .collect();
    JuliaMask(BoolField { grid: *grid, data })
}

/// Number of connected components of the true cells.
pub fn component_count(mask: &BoolField, connectivity: Connectivity) -> usize {
    let (cols, rows) = (mask.grid.cols, mask.grid.rows);
    let mut seen = vec![false; mask.data.len()];
    let mut queue = VecDeque::new();
    let mut components = 0;

    let offsets: &[(isize, isize)] = match connectivity {
        Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        Connectivity::Eight => &[(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)],
    };

    for start in 0..mask.data.len() {
        if !mask.data[start] || seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (x, y) = ((i % cols) as isize, (i / cols) as isize);
            for &(dx, dy) in offsets {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= cols as isize || ny >= rows as isize {
                    continue;
                }
                let n = ny as usize * cols + nx as usize;
                if mask.data[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
    }
    components
}

/// Component count of the Julia mask at every `c1` cell, with `c0` fixed.
pub fn connectedness_field(
    c0: ComplexValue,
    c1_grid: &GridSpec,
    root: &TemplateRoot,
    z_grid: &GridSpec,
    connectivity: Connectivity,
) -> Result<ScalarField> {
    let max_radius = c1_grid
        .points()
        .map(|c1| ParamPair::new(c0, c1).escape_radius())
        .fold(2.0, f64::max);
    check_coverage(z_grid, max_radius)?;
    Ok(ScalarField::from_fn(*c1_grid, |c1| {
        let mask = mask_unchecked(&ParamPair::new(c0, c1), root, z_grid);
        component_count(&mask.0, connectivity) as f64
    }))
}
