//! Graph rasterization: stroked masks and supercover centerlines.
//!
//! Pixel centers sit at integer coordinates; pixel (px, py) covers the closed
//! unit square [px−0.5, px+0.5] × [py−0.5, py+0.5].

use crate::geom::{dist_point_segment, segment_intersects_rect};
use crate::graph::{Point, RoadGraph};
use crate::mask::SegMask;

/// Rasterizes `g` as a stroked mask: pixel on iff its center lies within
/// `g.width / 2` of some edge polyline.
pub fn rasterize_graph(g: &RoadGraph) -> SegMask {
    rasterize_with_width(g, g.width as f64)
}

/// Stroked mask with an explicit stroke width (diameter, pixels).
pub fn rasterize_with_width(g: &RoadGraph, width: f64) -> SegMask {
    let size = g.image_size;
    let mut mask = SegMask::new(size, size);
    let r = width / 2.0;
    for e in &g.edges {
        let poly = g.edge_polyline(e);
        for w in poly.windows(2) {
            stroke_segment(&mut mask, w[0], w[1], r);
        }
    }
    mask
}

fn stroke_segment(mask: &mut SegMask, a: Point, b: Point, r: f64) {
    let size = mask.width() as i64;
    let x_lo = ((a.x.min(b.x) - r).ceil() as i64).max(0);
    let x_hi = ((a.x.max(b.x) + r).floor() as i64).min(size - 1);
    let y_lo = ((a.y.min(b.y) - r).ceil() as i64).max(0);
    let y_hi = ((a.y.max(b.y) + r).floor() as i64).min(size - 1);
    for py in y_lo..=y_hi {
        for px in x_lo..=x_hi {
            if dist_point_segment(Point::new(px as f64, py as f64), a, b) <= r {
                mask.set(px as u32, py as u32, 1.0);
            }
        }
    }
}

/// Supercover centerline raster: pixel on iff its closed unit square
/// intersects some edge polyline (corner touches included).
pub fn rasterize_centerline(g: &RoadGraph) -> SegMask {
    let size = g.image_size;
    let mut mask = SegMask::new(size, size);
    for e in &g.edges {
        let poly = g.edge_polyline(e);
        for w in poly.windows(2) {
            supercover_segment(&mut mask, w[0], w[1]);
        }
    }
    mask
}

fn supercover_segment(mask: &mut SegMask, a: Point, b: Point) {
    let size = mask.width() as i64;
    let x_lo = (((a.x.min(b.x) - 0.5).ceil()) as i64).max(0);
    let x_hi = (((a.x.max(b.x) + 0.5).floor()) as i64).min(size - 1);
    let y_lo = (((a.y.min(b.y) - 0.5).ceil()) as i64).max(0);
    let y_hi = (((a.y.max(b.y) + 0.5).floor()) as i64).min(size - 1);
    for py in y_lo..=y_hi {
        for px in x_lo..=x_hi {
            let (cx, cy) = (px as f64, py as f64);
            if segment_intersects_rect(a, b, cx - 0.5, cy - 0.5, cx + 0.5, cy + 0.5) {
                mask.set(px as u32, py as u32, 1.0);
            }
        }
    }
}
