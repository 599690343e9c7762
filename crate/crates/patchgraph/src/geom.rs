//! Polyline geometry: arc-length walking, projection, clipping, simplification.

use crate::graph::{polyline_length, Point};

/// Distance from `p` to the closed segment `a`–`b`.
pub fn dist_point_segment(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.dist(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Point at arc-length position `s` along `poly` (clamped to the ends).
pub fn point_at_arc(poly: &[Point], s: f64) -> Point {
    debug_assert!(!poly.is_empty());
    if s <= 0.0 {
        return poly[0];
    }
    let mut remaining = s;
    for w in poly.windows(2) {
        let seg = w[0].dist(w[1]);
        if remaining <= seg {
            if seg == 0.0 {
                return w[0];
            }
            let t = remaining / seg;
            return Point::new(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y));
        }
        remaining -= seg;
    }
    poly[poly.len() - 1]
}

/// Points along `poly` at arc positions 0, step, 2·step, …, plus the final
/// endpoint.
pub fn sample_arc(poly: &[Point], step: f64) -> Vec<Point> {
    debug_assert!(step > 0.0);
    let total = polyline_length(poly);
    let mut out = Vec::with_capacity((total / step) as usize + 2);
    let mut s = 0.0;
    while s < total {
        out.push(point_at_arc(poly, s));
        s += step;
    }
    out.push(poly[poly.len() - 1]);
    out
}

/// Nearest point on `poly` to `p`: returns (distance, arc position).
pub fn project_onto_polyline(p: Point, poly: &[Point]) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    let mut arc = 0.0;
    for w in poly.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let len2 = dx * dx + dy * dy;
        let seg = len2.sqrt();
        let t = if len2 == 0.0 {
            0.0
        } else {
            (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
        };
        let q = Point::new(a.x + t * dx, a.y + t * dy);
        let d = p.dist(q);
        if d < best.0 {
            best = (d, arc + t * seg);
        }
        arc += seg;
    }
    best
}

/// Liang–Barsky clip of segment `a`–`b` to the closed rectangle
/// [x0, x1] × [y0, y1]; returns the parameter interval kept, if any.
fn clip_segment(a: Point, b: Point, x0: f64, y0: f64, x1: f64, y1: f64) -> Option<(f64, f64)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    let checks = [
        (-dx, a.x - x0),
        (dx, x1 - a.x),
        (-dy, a.y - y0),
        (dy, y1 - a.y),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                if r > t1 {
                    return None;
                }
                if r > t0 {
                    t0 = r;
                }
            } else {
                if r < t0 {
                    return None;
                }
                if r < t1 {
                    t1 = r;
                }
            }
        }
    }
    Some((t0, t1))
}

/// True if segment `a`–`b` intersects the closed rectangle
/// [x0, x1] × [y0, y1], corner touches included.
pub fn segment_intersects_rect(a: Point, b: Point, x0: f64, y0: f64, x1: f64, y1: f64) -> bool {
    clip_segment(a, b, x0, y0, x1, y1).is_some()
}

/// Clips `poly` to the half-open square [x0, x0+size) × [y0, y0+size).
///
/// Segments are clipped to the closed square, consecutive pieces are stitched
/// into fragments, and fragments that are zero-length or lie entirely on the
/// excluded right/bottom boundary lines are dropped.
pub fn clip_polyline_to_patch(poly: &[Point], x0: f64, y0: f64, size: f64) -> Vec<Vec<Point>> {
    let (x1, y1) = (x0 + size, y0 + size);
    let mut fragments: Vec<Vec<Point>> = Vec::new();
    for w in poly.windows(2) {
        let (a, b) = (w[0], w[1]);
        let Some((t0, t1)) = clip_segment(a, b, x0, y0, x1, y1) else {
            continue;
        };
        let pa = Point::new(a.x + t0 * (b.x - a.x), a.y + t0 * (b.y - a.y));
        let pb = Point::new(a.x + t1 * (b.x - a.x), a.y + t1 * (b.y - a.y));
        match fragments.last_mut() {
            Some(frag) if frag.last().unwrap().dist(pa) < 1e-9 => frag.push(pb),
            _ => fragments.push(vec![pa, pb]),
        }
    }
    fragments.retain(|frag| {
        if polyline_length(frag) == 0.0 {
            return false;
        }
        let on_right = frag.iter().all(|p| p.x == x1);
        let on_bottom = frag.iter().all(|p| p.y == y1);
        !(on_right || on_bottom)
    });
    fragments
}

/// Ramer–Douglas–Peucker simplification with perpendicular tolerance `tol`.
pub fn simplify_rdp(poly: &[Point], tol: f64) -> Vec<Point> {
    if poly.len() <= 2 {
        return poly.to_vec();
    }
    let mut keep = vec![false; poly.len()];
    keep[0] = true;
    keep[poly.len() - 1] = true;
    let mut stack = vec![(0usize, poly.len() - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let (mut max_d, mut max_i) = (0.0f64, lo);
        for i in lo + 1..hi {
            let d = dist_point_segment(poly[i], poly[lo], poly[hi]);
            if d > max_d {
                max_d = d;
                max_i = i;
            }
        }
        if max_d > tol {
            keep[max_i] = true;
            stack.push((lo, max_i));
            stack.push((max_i, hi));
        }
    }
    poly.iter()
        .zip(&keep)
        .filter_map(|(p, &k)| k.then_some(*p))
        .collect()
}
