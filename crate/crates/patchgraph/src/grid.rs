//! Non-overlapping patch partition of a square image.
//!
//! Coordinates are pixels with x = column, y = row, origin at the top-left
//! corner, y growing downward. Each patch owns the half-open rectangle
//! `[col*patch, (col+1)*patch) x [row*patch, (row+1)*patch)`, so every
//! in-bounds point belongs to exactly one patch.

use crate::error::{Error, Result};
use crate::graph::Point;

/// Offsets of the eight adjacent patches in `(d_row, d_col)` order.
///
/// Direction `j` and direction `7 - j` are opposite, which is what lets a
/// link stored by one patch be mirrored by its neighbor.
pub const NEIGHBOR_OFFSETS: [(i32, i32); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Geometry of the patch partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchGrid {
    image_size: u32,
    patch_size: u32,
    n: u32,
}

impl PatchGrid {
    /// Default patch edge length in pixels.
    pub const DEFAULT_PATCH_SIZE: u32 = 16;

    pub fn new(image_size: u32, patch_size: u32) -> Result<Self> {
        if patch_size == 0 || image_size == 0 || image_size % patch_size != 0 {
            return Err(Error::InvalidGrid {
                image_size,
                patch_size,
            });
        }
        Ok(PatchGrid {
            image_size,
            patch_size,
            n: image_size / patch_size,
        })
    }

    pub fn image_size(&self) -> u32 {
        self.image_size
    }

    pub fn patch_size(&self) -> u32 {
        self.patch_size
    }

    /// Patches per side.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total patch count `n*n`.
    pub fn num_patches(&self) -> usize {
        (self.n as usize) * (self.n as usize)
    }

    pub fn row_col(&self, i: usize) -> (u32, u32) {
        let n = self.n as usize;
        ((i / n) as u32, (i % n) as u32)
    }

    pub fn index(&self, row: u32, col: u32) -> usize {
        row as usize * self.n as usize + col as usize
    }

    /// Pixel coordinates of patch `i`'s upper-left corner.
    pub fn patch_origin(&self, i: usize) -> Point {
        let (row, col) = self.row_col(i);
        Point {
            x: (col * self.patch_size) as f64,
            y: (row * self.patch_size) as f64,
        }
    }

    /// Center of patch `i`'s rectangle.
    pub fn patch_center(&self, i: usize) -> Point {
        let o = self.patch_origin(i);
        let h = self.patch_size as f64 / 2.0;
        Point {
            x: o.x + h,
            y: o.y + h,
        }
    }

    /// Index of the patch owning `pt`. Errors when `pt` is outside the image.
    pub fn patch_of_point(&self, pt: Point) -> Result<usize> {
        let size = self.image_size as f64;
        if !(pt.x >= 0.0 && pt.x < size && pt.y >= 0.0 && pt.y < size) {
            return Err(Error::OutOfBounds {
                x: pt.x,
                y: pt.y,
                size: self.image_size,
            });
        }
        let p = self.patch_size as f64;
        let col = (pt.x / p).floor() as usize;
        let row = (pt.y / p).floor() as usize;
        Ok(row * self.n as usize + col)
    }

    /// Index of the `j`-th neighbor of patch `i`, or `None` off-grid.
    pub fn neighbor(&self, i: usize, j: usize) -> Option<usize> {
        let (dr, dc) = NEIGHBOR_OFFSETS[j];
        let (row, col) = self.row_col(i);
        let nr = row as i32 + dr;
        let nc = col as i32 + dc;
        if nr < 0 || nc < 0 || nr >= self.n as i32 || nc >= self.n as i32 {
            return None;
        }
        Some(self.index(nr as u32, nc as u32))
    }

    /// Whether two distinct patches are 8-adjacent (Chebyshev distance 1).
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        let (ra, ca) = self.row_col(a);
        let (rb, cb) = self.row_col(b);
        let dr = (ra as i64 - rb as i64).abs();
        let dc = (ca as i64 - cb as i64).abs();
        dr.max(dc) == 1
    }

    /// Whether two patches are diagonally adjacent (both axes differ).
    pub fn diagonal(&self, a: usize, b: usize) -> bool {
        let (ra, ca) = self.row_col(a);
        let (rb, cb) = self.row_col(b);
        (ra as i64 - rb as i64).abs() == 1 && (ca as i64 - cb as i64).abs() == 1
    }
}

/// Opposite link direction: patch `i`'s direction `j` seen from its neighbor.
pub fn opposite(j: usize) -> usize {
    7 - j
}

/// Position of `(d_row, d_col)` in [`NEIGHBOR_OFFSETS`], if 8-adjacent.
pub fn offset_index(d_row: i32, d_col: i32) -> Option<usize> {
    NEIGHBOR_OFFSETS.iter().position(|&o| o == (d_row, d_col))
}
