use serde::Serialize;

use super::bivariate::BivariateSample;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HexCell {
    pub x: f64,
    pub y: f64,
    pub count: usize,
}

/// Counts of surviving pairs on a `bins`×`bins` grid over [0, 100]². Rendered
/// as offset hexagons; stored row-major, `y` outer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HexGrid {
    pub bins: usize,
    pub cells: Vec<HexCell>,
}

impl HexGrid {
    pub fn total(&self) -> usize {
        self.cells.iter().map(|c| c.count).sum()
    }

    pub fn cell(&self, col: usize, row: usize) -> &HexCell {
        &self.cells[row * self.bins + col]
    }
}

fn bin_of(v: f64, bins: usize) -> usize {
    ((v / 100.0 * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

pub fn hexbin(sample: &BivariateSample, bins: usize) -> Result<HexGrid> {
    if bins == 0 {
        return Err(Error::InvalidParameter("bins must be at least 1".into()));
    }
    let width = 100.0 / bins as f64;
    let mut cells: Vec<HexCell> = (0..bins * bins)
        .map(|i| HexCell {
            x: (i % bins) as f64 * width + width / 2.0,
            y: (i / bins) as f64 * width + width / 2.0,
            count: 0,
        })
        .collect();
    for p in sample.surviving() {
        let idx = bin_of(p.out_sim, bins) * bins + bin_of(p.in_sim, bins);
        cells[idx].count += 1;
    }
    Ok(HexGrid { bins, cells })
}
