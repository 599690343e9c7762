//! Graph and mask evaluation: APLS, buffer-relaxed pixel F1, IoU.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_at_arc, project_onto_polyline};
use crate::graph::{polyline_length, Point, RoadGraph};
use crate::mask::SegMask;
use crate::raster::{rasterize_centerline, rasterize_graph};

/// Evaluation settings.
#[derive(Debug, Clone, Copy)]
pub struct MetricParams {
    /// Snap / match tolerance in pixels (Chebyshev for pixel F1, Euclidean
    /// for APLS snapping).
    pub buffer_px: f64,
    /// Target spacing of APLS control points injected along edges.
    pub inject_interval_px: f64,
    /// Control-point pairs above this count are subsampled.
    pub max_pairs: usize,
    /// Seed for the pair subsampling.
    pub rng_seed: u64,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            buffer_px: 4.0,
            inject_interval_px: 50.0,
            max_pairs: 1000,
            rng_seed: 0,
        }
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.buffer_px >= 0.0) {
            return Err(Error::InvalidParams("buffer_px must be >= 0".into()));
        }
        if !(self.inject_interval_px > 0.0) {
            return Err(Error::InvalidParams(
                "inject_interval_px must be positive".into(),
            ));
        }
        if self.max_pairs == 0 {
            return Err(Error::InvalidParams("max_pairs must be positive".into()));
        }
        Ok(())
    }
}

/// Buffer-relaxed pixel precision / recall / F1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PixelF1 {
    pub p: f64,
    pub r: f64,
    pub f1: f64,
}

/// Bundle of every metric for one (prediction, target) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub apls: f64,
    pub pf1: PixelF1,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iou: Option<f64>,
}

/// IoU of the binarized (value > 0.5) masks. Both empty counts as 1.
pub fn iou(pred: &SegMask, target: &SegMask) -> Result<f64> {
    if (pred.width(), pred.height()) != (target.width(), target.height()) {
        return Err(Error::ShapeMismatch(format!(
            "mask {}x{} vs {}x{}",
            pred.width(),
            pred.height(),
            target.width(),
            target.height()
        )));
    }
    let mut inter = 0u64;
    let mut union = 0u64;
    for (&p, &t) in pred.data().iter().zip(target.data()) {
        let (p, t) = (p > 0.5, t > 0.5);
        inter += (p && t) as u64;
        union += (p || t) as u64;
    }
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}

/// Binary Chebyshev dilation by integer radius `floor(r)`, separable per
/// axis: a pixel turns on iff some on-pixel lies within the (2r+1)^2 square.
fn dilate_chebyshev(mask: &SegMask, radius: f64) -> SegMask {
    let r = radius.floor() as i64;
    if r <= 0 {
        return mask.clone();
    }
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let pass = |input: &[f32], len_outer: i64, len_inner: i64, idx: &dyn Fn(i64, i64) -> usize| {
        let mut out = vec![0.0f32; (len_outer * len_inner) as usize];
        for o in 0..len_outer {
            // nearest on-pixel to the left/above of each position
            let mut last_on = i64::MIN / 2;
            for i in 0..len_inner {
                if input[idx(o, i)] > 0.5 {
                    last_on = i;
                }
                if i - last_on <= r {
                    out[idx(o, i)] = 1.0;
                }
            }
            let mut next_on = i64::MAX / 2;
            for i in (0..len_inner).rev() {
                if input[idx(o, i)] > 0.5 {
                    next_on = i;
                }
                if next_on - i <= r {
                    out[idx(o, i)] = 1.0;
                }
            }
        }
        out
    };
    let row_major = |y: i64, x: i64| (y * w + x) as usize;
    let horizontal = pass(mask.data(), h, w, &row_major);
    let col_major = |x: i64, y: i64| (y * w + x) as usize;
    let vertical = pass(&horizontal, w, h, &col_major);
    SegMask::from_data(mask.width(), mask.height(), vertical).expect("same shape")
}

/// Buffer-relaxed pixel F1 over supercover centerline rasters: a predicted
/// pixel is correct if a target centerline pixel lies within Chebyshev
/// distance `buffer_px`, and symmetrically for recall.
pub fn pixel_f1(pred: &RoadGraph, target: &RoadGraph, buffer_px: f64) -> Result<PixelF1> {
    if pred.image_size != target.image_size {
        return Err(Error::ShapeMismatch(format!(
            "image {} vs {}",
            pred.image_size, target.image_size
        )));
    }
    match (pred.edges.is_empty(), target.edges.is_empty()) {
        (true, true) => {
            return Ok(PixelF1 {
                p: 1.0,
                r: 1.0,
                f1: 1.0,
            })
        }
        (true, false) | (false, true) => {
            return Ok(PixelF1 {
                p: 0.0,
                r: 0.0,
                f1: 0.0,
            })
        }
        _ => {}
    }
    let pm = rasterize_centerline(pred);
    let tm = rasterize_centerline(target);
    let t_dilated = dilate_chebyshev(&tm, buffer_px);
    let p_dilated = dilate_chebyshev(&pm, buffer_px);
    let count_in = |a: &SegMask, within: &SegMask| {
        a.data()
            .iter()
            .zip(within.data())
            .filter(|&(&x, &y)| x > 0.5 && y > 0.5)
            .count() as f64
    };
    let p_total = pm.count_on() as f64;
    let t_total = tm.count_on() as f64;
    let p = count_in(&pm, &t_dilated) / p_total;
    let r = count_in(&tm, &p_dilated) / t_total;
    let f1 = if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    };
    Ok(PixelF1 { p, r, f1 })
}

#[derive(PartialEq)]
struct HeapState {
    dist: f64,
    v: u32,
}

impl Eq for HeapState {}

impl Ord for HeapState {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed: BinaryHeap pops the smallest distance first
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.v.cmp(&self.v))
    }
}

impl PartialOrd for HeapState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(u32, f64)>], src: u32) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[src as usize] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapState { dist: 0.0, v: src });
    while let Some(HeapState { dist: d, v }) = heap.pop() {
        if d > dist[v as usize] {
            continue;
        }
        for &(u, w) in &adj[v as usize] {
            let nd = d + w;
            if nd < dist[u as usize] {
                dist[u as usize] = nd;
                heap.push(HeapState { dist: nd, v: u });
            }
        }
    }
    dist
}

/// Splits `g`'s edges at the given `(edge index, arc position)` points and
/// returns the weighted adjacency plus the vertex assigned to each split.
/// Vertices `0..nodes.len()` are the original nodes; split points at an
/// edge's ends reuse the endpoint vertex, and coincident splits share one.
fn augment(g: &RoadGraph, splits: &[(usize, f64)]) -> (Vec<Vec<(u32, f64)>>, Vec<u32>) {
    let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); g.nodes.len()];
    let mut vertex_of = vec![0u32; splits.len()];
    let mut by_edge: Vec<Vec<(f64, usize)>> = vec![Vec::new(); g.edges.len()];
    for (si, &(e, arc)) in splits.iter().enumerate() {
        by_edge[e].push((arc, si));
    }
    for (ei, e) in g.edges.iter().enumerate() {
        let len = polyline_length(&g.edge_polyline(e));
        let mut pts = std::mem::take(&mut by_edge[ei]);
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (a, b) = (e.a, e.b);
        let mut prev_v = a;
        let mut prev_pos = 0.0f64;
        for (pos, si) in pts {
            let v = if pos <= 1e-9 {
                a
            } else if pos >= len - 1e-9 {
                b
            } else if prev_v != a && pos - prev_pos <= 1e-9 {
                prev_v
            } else {
                let v = adj.len() as u32;
                adj.push(Vec::new());
                v
            };
            let canon_pos = if v == a {
                0.0
            } else if v == b {
                len
            } else {
                pos
            };
            if v != prev_v && v != a {
                let w = canon_pos - prev_pos;
                adj[prev_v as usize].push((v, w));
                adj[v as usize].push((prev_v, w));
                prev_v = v;
                prev_pos = canon_pos;
            }
            vertex_of[si] = v;
        }
        if prev_v != b {
            let w = len - prev_pos;
            adj[prev_v as usize].push((b, w));
            adj[b as usize].push((prev_v, w));
        }
    }
    (adj, vertex_of)
}

/// Nearest point of any edge of `g` to `p`: (distance, edge index, arc).
fn snap_point(p: Point, g: &RoadGraph) -> (f64, usize, f64) {
    let mut best = (f64::INFINITY, 0usize, 0.0f64);
    for (ei, e) in g.edges.iter().enumerate() {
        let poly = g.edge_polyline(e);
        let (d, arc) = project_onto_polyline(p, &poly);
        if d < best.0 {
            best = (d, ei, arc);
        }
    }
    best
}

/// Control points of `g`: every node, plus points injected along each edge
/// so that segments between consecutive controls stay near the interval.
/// An edge of length `L` gets `ceil(L / interval) - 1` interior points at
/// even arc fractions.
fn control_points(g: &RoadGraph, interval: f64) -> Vec<(Point, Option<(usize, f64)>)> {
    let mut out: Vec<(Point, Option<(usize, f64)>)> = g
        .nodes
        .iter()
        .map(|n| (n.pos(), None))
        .collect();
    for (ei, e) in g.edges.iter().enumerate() {
        let poly = g.edge_polyline(e);
        let len = polyline_length(&poly);
        let m = (len / interval).ceil() as usize;
        for i in 1..m {
            let arc = len * i as f64 / m as f64;
            out.push((point_at_arc(&poly, arc), Some((ei, arc))));
        }
    }
    out
}

/// One APLS direction: control points on `a`, snapped onto `b`; pairs with a
/// finite positive path length in `a` are scored
/// `1 - min(1, |L - L'| / L)`, with 0 for unsnappable ends or missing `b`
/// paths, and averaged.
fn apls_directional(a: &RoadGraph, b: &RoadGraph, params: &MetricParams) -> f64 {
    let controls = control_points(a, params.inject_interval_px);
    let k = controls.len();
    if k < 2 {
        return 0.0;
    }

    let splits_a: Vec<(usize, f64)> = controls
        .iter()
        .filter_map(|&(_, anchor)| anchor)
        .collect();
    let (adj_a, split_vertices) = augment(a, &splits_a);
    let mut vertex_a = Vec::with_capacity(k);
    let mut si = 0;
    for (idx, &(_, anchor)) in controls.iter().enumerate() {
        match anchor {
            None => vertex_a.push(idx as u32), // nodes come first, ids align
            Some(_) => {
                vertex_a.push(split_vertices[si]);
                si += 1;
            }
        }
    }

    let snaps: Vec<Option<(usize, f64)>> = controls
        .iter()
        .map(|&(p, _)| {
            let (d, ei, arc) = snap_point(p, b);
            (d <= params.buffer_px).then_some((ei, arc))
        })
        .collect();
    let splits_b: Vec<(usize, f64)> = snaps.iter().filter_map(|&s| s).collect();
    let (adj_b, snap_vertices) = augment(b, &splits_b);
    let mut vertex_b: Vec<Option<u32>> = Vec::with_capacity(k);
    let mut bi = 0;
    for s in &snaps {
        match s {
            None => vertex_b.push(None),
            Some(_) => {
                vertex_b.push(Some(snap_vertices[bi]));
                bi += 1;
            }
        }
    }

    // Pair selection: exhaustive when small, else a seeded distinct sample.
    let total_pairs = k * (k - 1) / 2;
    let mut by_source: HashMap<u32, Vec<u32>> = HashMap::new();
    if total_pairs <= params.max_pairs {
        for i in 0..k as u32 {
            for j in i + 1..k as u32 {
                by_source.entry(i).or_default().push(j);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
        let mut chosen: HashSet<(u32, u32)> = HashSet::with_capacity(params.max_pairs);
        while chosen.len() < params.max_pairs {
            let i = rng.gen_range(0..k as u32);
            let j = rng.gen_range(0..k as u32);
            if i == j {
                continue;
            }
            if chosen.insert((i.min(j), i.max(j))) {
                by_source
                    .entry(i.min(j))
                    .or_default()
                    .push(i.max(j));
            }
        }
    }

    let mut sources: Vec<u32> = by_source.keys().copied().collect();
    sources.sort_unstable();
    let mut sum = 0.0f64;
    let mut count = 0u64;
    for src in sources {
        let dist_a = dijkstra(&adj_a, vertex_a[src as usize]);
        let dist_b = vertex_b[src as usize].map(|v| dijkstra(&adj_b, v));
        for &dst in &by_source[&src] {
            let l = dist_a[vertex_a[dst as usize] as usize];
            if !l.is_finite() || l <= 1e-9 {
                continue; // no reference path; the pair is not scored
            }
            count += 1;
            let term = match (&dist_b, vertex_b[dst as usize]) {
                (Some(db), Some(vd)) => {
                    let lp = db[vd as usize];
                    if lp.is_finite() {
                        1.0 - (1.0f64).min((l - lp).abs() / l)
                    } else {
                        0.0
                    }
                }
                _ => 0.0,
            };
            sum += term;
        }
    }
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

/// Symmetric APLS: mean of the two directional scores. A graph with no
/// edges counts as empty; two empty graphs score 1, one empty scores 0.
pub fn apls(pred: &RoadGraph, target: &RoadGraph, params: &MetricParams) -> Result<f64> {
    params.validate()?;
    if pred.image_size != target.image_size {
        return Err(Error::ShapeMismatch(format!(
            "image {} vs {}",
            pred.image_size, target.image_size
        )));
    }
    match (pred.edges.is_empty(), target.edges.is_empty()) {
        (true, true) => return Ok(1.0),
        (true, false) | (false, true) => return Ok(0.0),
        _ => {}
    }
    let forward = apls_directional(target, pred, params);
    let backward = apls_directional(pred, target, params);
    Ok((forward + backward) / 2.0)
}

/// Computes APLS, pixel F1, and stroked-mask IoU for one pair.
pub fn eval_all(pred: &RoadGraph, target: &RoadGraph, params: &MetricParams) -> Result<Report> {
    let apls_score = apls(pred, target, params)?;
    let pf1 = pixel_f1(pred, target, params.buffer_px)?;
    let mask_iou = iou(&rasterize_graph(pred), &rasterize_graph(target))?;
    Ok(Report {
        apls: apls_score,
        pf1,
        iou: Some(mask_iou),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Node};

    fn graph(size: u32, pts: &[(f64, f64)], edges: &[(u32, u32)]) -> RoadGraph {
        poly_graph(size, pts, &edges.iter().map(|&e| (e, None)).collect::<Vec<_>>())
    }

    #[allow(clippy::type_complexity)]
    fn poly_graph(
        size: u32,
        pts: &[(f64, f64)],
        edges: &[((u32, u32), Option<Vec<[f64; 2]>>)],
    ) -> RoadGraph {
        let g = RoadGraph {
            image_size: size,
            width: 15.0,
            nodes: pts
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Node {
                    id: i as u32,
                    x,
                    y,
                    patch: None,
                })
                .collect(),
            edges: edges
                .iter()
                .map(|((a, b), poly)| Edge {
                    a: *a,
                    b: *b,
                    poly: poly.clone(),
                })
                .collect(),
        };
        g.validate().unwrap();
        g
    }

    #[test]
    fn apls_detour_fixture() {
        // Straight 100 px target; prediction takes a 120 px detour through
        // an apex chosen so both leg lengths are exactly 60.
        let apex_y = 50.0 + 1100.0f64.sqrt();
        let target = graph(192, &[(10.0, 50.0), (110.0, 50.0)], &[(0, 1)]);
        let pred = poly_graph(
            192,
            &[(10.0, 50.0), (110.0, 50.0)],
            &[(
                (0, 1),
                Some(vec![[10.0, 50.0], [60.0, apex_y], [110.0, 50.0]]),
            )],
        );
        let params = MetricParams {
            inject_interval_px: 200.0, // no interior control points
            ..MetricParams::default()
        };
        let got = apls(&pred, &target, &params).unwrap();
        let expected = (0.8 + 5.0 / 6.0) / 2.0; // 49/60
        assert!((got - expected).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn apls_self_is_one() {
        let g = graph(
            128,
            &[(10.0, 10.0), (100.0, 12.0), (60.0, 90.0), (15.0, 70.0)],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        );
        let got = apls(&g, &g, &MetricParams::default()).unwrap();
        assert!((got - 1.0).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn apls_empty_conventions() {
        let g = graph(64, &[(5.0, 5.0), (40.0, 40.0)], &[(0, 1)]);
        let empty = RoadGraph::empty(64);
        let params = MetricParams::default();
        assert_eq!(apls(&empty, &empty, &params).unwrap(), 1.0);
        assert_eq!(apls(&g, &empty, &params).unwrap(), 0.0);
        assert_eq!(apls(&empty, &g, &params).unwrap(), 0.0);
    }

    #[test]
    fn apls_snap_buffer_gates_matching() {
        let target = graph(128, &[(10.0, 50.0), (110.0, 50.0)], &[(0, 1)]);
        let near = graph(128, &[(10.0, 52.0), (110.0, 52.0)], &[(0, 1)]);
        let far = graph(128, &[(10.0, 57.0), (110.0, 57.0)], &[(0, 1)]);
        let params = MetricParams::default(); // buffer 4
        let near_score = apls(&near, &target, &params).unwrap();
        assert!((near_score - 1.0).abs() < 1e-12, "got {near_score}");
        assert_eq!(apls(&far, &target, &params).unwrap(), 0.0);
    }

    #[test]
    fn apls_matches_tiny_floyd_warshall_oracle() {
        // Y-junction vs the same graph missing one arm.
        let target = graph(
            128,
            &[(20.0, 20.0), (60.0, 60.0), (110.0, 20.0), (60.0, 110.0)],
            &[(0, 1), (1, 2), (1, 3)],
        );
        let pred = graph(
            128,
            &[(20.0, 20.0), (60.0, 60.0), (110.0, 20.0)],
            &[(0, 1), (1, 2)],
        );
        let params = MetricParams {
            inject_interval_px: 1e6,
            ..MetricParams::default()
        };
        // dir(target->pred): nodes 0,1,2 snap; node 3 does not (> 4 px from
        // every pred edge). Pairs: (0,1),(0,2),(1,2) score 1; (0,3),(1,3),
        // (2,3) score 0 -> 0.5. dir(pred->target): all three pairs score 1.
        let got = apls(&pred, &target, &params).unwrap();
        assert!((got - 0.75).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn control_points_follow_interval_rule() {
        let g = graph(256, &[(0.0, 0.0), (120.0, 0.0)], &[(0, 1)]);
        // L = 120, interval 50 -> m = 3 -> interior at 40 and 80
        let pts = control_points(&g, 50.0);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[2].0.x, 40.0);
        assert_eq!(pts[3].0.x, 80.0);
        // interval larger than the edge injects nothing
        assert_eq!(control_points(&g, 200.0).len(), 2);
    }

    #[test]
    fn augment_splits_share_coincident_vertices() {
        let g = graph(256, &[(0.0, 0.0), (100.0, 0.0)], &[(0, 1)]);
        let (adj, verts) = augment(&g, &[(0, 30.0), (0, 30.0 + 1e-12), (0, 70.0)]);
        assert_eq!(verts[0], verts[1]);
        assert_ne!(verts[0], verts[2]);
        assert_eq!(adj.len(), 4); // 2 nodes + 2 split vertices
        let d = dijkstra(&adj, 0);
        assert!((d[1] - 100.0).abs() < 1e-9);
        assert!((d[verts[2] as usize] - 70.0).abs() < 1e-9);
    }

    #[test]
    fn pixel_f1_partial_overlap_fixture() {
        let target = graph(256, &[(0.0, 0.0), (199.0, 0.0)], &[(0, 1)]);
        let pred = graph(256, &[(0.0, 0.0), (95.0, 0.0)], &[(0, 1)]);
        let got = pixel_f1(&pred, &target, 4.0).unwrap();
        assert_eq!(got.p, 1.0);
        assert_eq!(got.r, 0.5); // 100 of 200 target pixels within 4 px
        assert!((got.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pixel_f1_empty_conventions() {
        let g = graph(64, &[(5.0, 5.0), (40.0, 40.0)], &[(0, 1)]);
        let empty = RoadGraph::empty(64);
        let both = pixel_f1(&empty, &empty, 4.0).unwrap();
        assert_eq!((both.p, both.r, both.f1), (1.0, 1.0, 1.0));
        let one = pixel_f1(&g, &empty, 4.0).unwrap();
        assert_eq!((one.p, one.r, one.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn pixel_f1_swaps_precision_and_recall() {
        let a = graph(256, &[(0.0, 0.0), (199.0, 0.0)], &[(0, 1)]);
        let b = graph(256, &[(0.0, 0.0), (95.0, 0.0)], &[(0, 1)]);
        let ab = pixel_f1(&b, &a, 4.0).unwrap();
        let ba = pixel_f1(&a, &b, 4.0).unwrap();
        assert_eq!(ab.p, ba.r);
        assert_eq!(ab.r, ba.p);
        assert_eq!(ab.f1, ba.f1);
    }

    #[test]
    fn dilation_grows_chebyshev_square() {
        let mut m = SegMask::new(16, 16);
        m.set(8, 8, 1.0);
        let d = dilate_chebyshev(&m, 2.0);
        assert_eq!(d.count_on(), 25);
        assert_eq!(d.get(6, 6), 1.0);
        assert_eq!(d.get(10, 10), 1.0);
        assert_eq!(d.get(5, 8), 0.0);
    }

    #[test]
    fn iou_basics() {
        let a = SegMask::from_data(3, 1, vec![1.0, 1.0, 0.0]).unwrap();
        let b = SegMask::from_data(3, 1, vec![0.0, 1.0, 1.0]).unwrap();
        assert!((iou(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(iou(&a, &a).unwrap(), 1.0);
        let empty = SegMask::new(3, 1);
        assert_eq!(iou(&empty, &empty).unwrap(), 1.0);
        assert_eq!(iou(&a, &empty).unwrap(), 0.0);
    }

    #[test]
    fn eval_all_reports_all_metrics() {
        let g = graph(
            128,
            &[(10.0, 10.0), (100.0, 12.0), (60.0, 90.0)],
            &[(0, 1), (1, 2)],
        );
        let r = eval_all(&g, &g, &MetricParams::default()).unwrap();
        assert!((r.apls - 1.0).abs() < 1e-12);
        assert_eq!(r.pf1.f1, 1.0);
        assert_eq!(r.iou, Some(1.0));
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"apls\""));
        assert!(s.contains("\"pf1\""));
    }
}
