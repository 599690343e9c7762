//! Mask skeletonization and skeleton vectorization.
//!
//! `thin_mask` erodes a binary mask to a one-pixel-wide skeleton with the
//! two-subiteration directional thinning scheme (batch deletion per
//! subiteration, so opposite borders erode symmetrically and a band thins
//! to its centerline). `vectorize_skeleton` turns a thin mask into a
//! `RoadGraph`: junction pixel clusters and endpoints become nodes, the
//! pixel chains between them become simplified polyline edges.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::geom::simplify_rdp;
use crate::graph::{Edge, Node, Point, RoadGraph};
use crate::mask::SegMask;

/// Polyline simplification tolerance for vectorized chains, in pixels.
const RDP_TOL: f64 = 2.0;

/// The 8 neighbors as (dx, dy), clockwise from north. Thinning conditions
/// index into this ring.
const RING: [(i64, i64); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

struct Bitmap {
    w: i64,
    h: i64,
    on: Vec<bool>,
}

impl Bitmap {
    fn from_mask(mask: &SegMask) -> Self {
        Bitmap {
            w: mask.width() as i64,
            h: mask.height() as i64,
            on: mask.data().iter().map(|&v| v > 0.5).collect(),
        }
    }

    fn get(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.w && y < self.h && self.on[(y * self.w + x) as usize]
    }

    fn ring(&self, x: i64, y: i64) -> [bool; 8] {
        let mut p = [false; 8];
        for (i, &(dx, dy)) in RING.iter().enumerate() {
            p[i] = self.get(x + dx, y + dy);
        }
        p
    }

    fn to_mask(&self) -> SegMask {
        let data = self.on.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        SegMask::from_data(self.w as u32, self.h as u32, data).expect("same shape")
    }
}

fn neighbor_count(p: &[bool; 8]) -> usize {
    p.iter().filter(|&&v| v).count()
}

/// Number of off->on transitions around the neighbor ring.
fn transitions(p: &[bool; 8]) -> usize {
    (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count()
}

/// Thins the binarized mask (value > 0.5) to a roughly one-pixel-wide
/// skeleton. Each iteration runs two directional subiterations; every
/// subiteration marks its candidates against the frozen state and deletes
/// them together, which keeps the erosion symmetric. A final cleanup pass
/// dissolves any residual 2x2 blocks by removing locally redundant pixels.
pub fn thin_mask(mask: &SegMask) -> SegMask {
    let mut bm = Bitmap::from_mask(mask);
    let mut marked: Vec<usize> = Vec::new();
    loop {
        let mut deleted_any = false;
        for pass in 0..2 {
            marked.clear();
            for y in 0..bm.h {
                for x in 0..bm.w {
                    if !bm.on[(y * bm.w + x) as usize] {
                        continue;
                    }
                    let p = bm.ring(x, y);
                    let b = neighbor_count(&p);
                    if !(2..=6).contains(&b) || transitions(&p) != 1 {
                        continue;
                    }
                    // ring indices: 0=N 2=E 4=S 6=W
                    let keep = if pass == 0 {
                        (p[0] && p[2] && p[4]) || (p[2] && p[4] && p[6])
                    } else {
                        (p[0] && p[2] && p[6]) || (p[0] && p[4] && p[6])
                    };
                    if !keep {
                        marked.push((y * bm.w + x) as usize);
                    }
                }
            }
            for &idx in &marked {
                bm.on[idx] = false;
            }
            deleted_any |= !marked.is_empty();
        }
        if !deleted_any {
            break;
        }
    }

    // Residual 2x2 blocks: drop one member whose removal cannot split the
    // neighborhood (single transition around its ring, and not a line
    // interior or tip). Each deletion removes a pixel, so this terminates.
    loop {
        let mut removed = false;
        'scan: for y in 0..bm.h - 1 {
            for x in 0..bm.w - 1 {
                let block = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
                if !block.iter().all(|&(bx, by)| bm.get(bx, by)) {
                    continue;
                }
                for &(bx, by) in &block {
                    let p = bm.ring(bx, by);
                    if neighbor_count(&p) >= 3 && transitions(&p) == 1 {
                        bm.on[(by * bm.w + bx) as usize] = false;
                        removed = true;
                        break 'scan;
                    }
                }
            }
        }
        if !removed {
            break;
        }
    }
    bm.to_mask()
}

/// Index of a pixel's node, for pixels that anchor nodes (junctions and
/// endpoints); interior chain pixels are absent.
type NodeIndex = HashMap<(i64, i64), u32>;

fn new_pixel_node(nodes: &mut Vec<Node>, px: (i64, i64)) -> u32 {
    let id = nodes.len() as u32;
    nodes.push(Node {
        id,
        x: px.0 as f64,
        y: px.1 as f64,
        patch: None,
    });
    id
}

fn push_edge(
    nodes: &[Node],
    edges: &mut Vec<Edge>,
    seen: &mut HashSet<(u32, u32)>,
    a: u32,
    b: u32,
    interior: &[(i64, i64)],
) {
    let (a, b, rev) = if a <= b { (a, b, false) } else { (b, a, true) };
    seen.insert((a, b));
    let mut pts = Vec::with_capacity(interior.len() + 2);
    pts.push(nodes[a as usize].pos());
    if rev {
        pts.extend(
            interior
                .iter()
                .rev()
                .map(|&(x, y)| Point::new(x as f64, y as f64)),
        );
    } else {
        pts.extend(interior.iter().map(|&(x, y)| Point::new(x as f64, y as f64)));
    }
    pts.push(nodes[b as usize].pos());
    let simple = simplify_rdp(&pts, RDP_TOL);
    let poly = (simple.len() > 2).then(|| simple.iter().map(|p| [p.x, p.y]).collect());
    edges.push(Edge { a, b, poly });
}

/// Adds one traced chain, splitting it when it would form a self-loop or
/// duplicate an existing node pair (the graph format forbids both).
fn insert_chain(
    nodes: &mut Vec<Node>,
    edges: &mut Vec<Edge>,
    seen: &mut HashSet<(u32, u32)>,
    a: u32,
    b: u32,
    interior: &[(i64, i64)],
) {
    if a == b {
        if interior.len() < 2 {
            // a one-pixel loop hugging a junction cluster; nothing to keep
            return;
        }
        let k1 = interior.len() / 3;
        let k2 = interior.len() * 2 / 3;
        let m1 = new_pixel_node(nodes, interior[k1]);
        let m2 = new_pixel_node(nodes, interior[k2]);
        push_edge(nodes, edges, seen, a, m1, &interior[..k1]);
        push_edge(nodes, edges, seen, m1, m2, &interior[k1 + 1..k2]);
        push_edge(nodes, edges, seen, m2, a, &interior[k2 + 1..]);
    } else if seen.contains(&(a.min(b), a.max(b))) {
        if interior.is_empty() {
            // parallel direct contact between the same two clusters
            return;
        }
        let k = interior.len() / 2;
        let m = new_pixel_node(nodes, interior[k]);
        push_edge(nodes, edges, seen, a, m, &interior[..k]);
        push_edge(nodes, edges, seen, m, b, &interior[k + 1..]);
    } else {
        push_edge(nodes, edges, seen, a, b, interior);
    }
}

/// Converts a thin skeleton mask into a road graph. Junction pixels
/// (3 or more on-neighbors) are clustered with their adjacent junction
/// pixels into one node each, endpoint pixels become nodes, degree-2 pixel
/// chains become edges, and closed chains with no anchor become small
/// rings. The mask must be square and free of 2x2 on-blocks.
pub fn vectorize_skeleton(mask: &SegMask) -> Result<RoadGraph> {
    if mask.width() != mask.height() {
        return Err(Error::ShapeMismatch(format!(
            "skeleton mask must be square, got {}x{}",
            mask.width(),
            mask.height()
        )));
    }
    let bm = Bitmap::from_mask(mask);
    for y in 0..bm.h.max(1) - 1 {
        for x in 0..bm.w.max(1) - 1 {
            if bm.get(x, y) && bm.get(x + 1, y) && bm.get(x, y + 1) && bm.get(x + 1, y + 1) {
                return Err(Error::NotThin {
                    x: x as u32,
                    y: y as u32,
                });
            }
        }
    }

    let deg = |x: i64, y: i64| neighbor_count(&bm.ring(x, y));
    let is_node_pixel = |x: i64, y: i64| bm.get(x, y) && deg(x, y) != 2;

    let mut nodes: Vec<Node> = Vec::new();
    let mut node_of: NodeIndex = HashMap::new();
    for y in 0..bm.h {
        for x in 0..bm.w {
            if !is_node_pixel(x, y) || node_of.contains_key(&(x, y)) {
                continue;
            }
            let d = deg(x, y);
            if d == 0 {
                continue; // isolated pixel carries no structure
            }
            if d == 1 {
                let id = new_pixel_node(&mut nodes, (x, y));
                node_of.insert((x, y), id);
                continue;
            }
            // junction: flood over 8-adjacent junction pixels
            let mut cluster = vec![(x, y)];
            let mut head = 0;
            node_of.insert((x, y), u32::MAX); // claimed, id set below
            while head < cluster.len() {
                let (cx, cy) = cluster[head];
                head += 1;
                for &(dx, dy) in &RING {
                    let q = (cx + dx, cy + dy);
                    if bm.get(q.0, q.1)
                        && deg(q.0, q.1) >= 3
                        && !node_of.contains_key(&q)
                    {
                        node_of.insert(q, u32::MAX);
                        cluster.push(q);
                    }
                }
            }
            let n = cluster.len() as f64;
            let cx = cluster.iter().map(|p| p.0 as f64).sum::<f64>() / n;
            let cy = cluster.iter().map(|p| p.1 as f64).sum::<f64>() / n;
            let rounded = (cx.round() as i64, cy.round() as i64);
            let pos = if cluster.contains(&rounded) {
                (cx, cy)
            } else {
                // centroid fell off the cluster; use the member nearest it
                let best = cluster
                    .iter()
                    .min_by(|p, q| {
                        let dp = (p.0 as f64 - cx).powi(2) + (p.1 as f64 - cy).powi(2);
                        let dq = (q.0 as f64 - cx).powi(2) + (q.1 as f64 - cy).powi(2);
                        dp.total_cmp(&dq)
                    })
                    .unwrap();
                (best.0 as f64, best.1 as f64)
            };
            let id = nodes.len() as u32;
            nodes.push(Node {
                id,
                x: pos.0,
                y: pos.1,
                patch: None,
            });
            for p in cluster {
                node_of.insert(p, id);
            }
        }
    }

    let mut edges: Vec<Edge> = Vec::new();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut visited: HashSet<(i64, i64)> = HashSet::new();
    let other_neighbor = |cur: (i64, i64), prev: (i64, i64)| -> (i64, i64) {
        for &(dx, dy) in &RING {
            let q = (cur.0 + dx, cur.1 + dy);
            if q != prev && bm.get(q.0, q.1) {
                return q;
            }
        }
        unreachable!("chain pixels have exactly two neighbors")
    };

    for y in 0..bm.h {
        for x in 0..bm.w {
            let np = (x, y);
            if !node_of.contains_key(&np) {
                continue;
            }
            for &(dx, dy) in &RING {
                let nb = (x + dx, y + dy);
                if !bm.get(nb.0, nb.1) {
                    continue;
                }
                if let Some(&other) = node_of.get(&nb) {
                    let a = node_of[&np];
                    if a != other && (np.1, np.0) < (nb.1, nb.0) {
                        insert_chain(&mut nodes, &mut edges, &mut seen, a, other, &[]);
                    }
                    continue;
                }
                if visited.contains(&nb) {
                    continue;
                }
                // trace the degree-2 chain until the next anchor pixel
                let mut chain = vec![nb];
                visited.insert(nb);
                let mut prev = np;
                let mut cur = nb;
                let end = loop {
                    let nxt = other_neighbor(cur, prev);
                    if let Some(&id) = node_of.get(&nxt) {
                        break id;
                    }
                    visited.insert(nxt);
                    chain.push(nxt);
                    prev = cur;
                    cur = nxt;
                };
                insert_chain(&mut nodes, &mut edges, &mut seen, node_of[&np], end, &chain);
            }
        }
    }

    // closed chains that touch no junction or endpoint; isolated pixels
    // (degree 0) carry no extent and are dropped
    for y in 0..bm.h {
        for x in 0..bm.w {
            let p0 = (x, y);
            if !bm.get(x, y)
                || deg(x, y) != 2
                || node_of.contains_key(&p0)
                || visited.contains(&p0)
            {
                continue;
            }
            visited.insert(p0);
            let mut ring_chain: Vec<(i64, i64)> = Vec::new();
            let mut prev = p0;
            let mut cur = other_neighbor(p0, p0); // first neighbor in scan order
            while cur != p0 {
                visited.insert(cur);
                ring_chain.push(cur);
                let nxt = other_neighbor(cur, prev);
                prev = cur;
                cur = nxt;
            }
            let anchor = new_pixel_node(&mut nodes, p0);
            insert_chain(&mut nodes, &mut edges, &mut seen, anchor, anchor, &ring_chain);
        }
    }

    edges.sort_unstable_by_key(|e| (e.a, e.b));
    let g = RoadGraph {
        image_size: mask.width(),
        width: RoadGraph::DEFAULT_WIDTH,
        nodes,
        edges,
    };
    debug_assert!(g.validate().is_ok(), "vectorized skeleton must validate");
    Ok(g)
}

/// Thins `mask` and vectorizes the result.
pub fn mask_to_graph(mask: &SegMask) -> Result<RoadGraph> {
    vectorize_skeleton(&thin_mask(mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RoadGraph;
    use crate::raster::rasterize_graph;
    use crate::synth::{generate_network, SynthParams};

    fn mask_from(pixels: &[(u32, u32)], w: u32, h: u32) -> SegMask {
        let mut m = SegMask::new(w, h);
        for &(x, y) in pixels {
            m.set(x, y, 1.0);
        }
        m
    }

    fn on_pixels(m: &SegMask) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for y in 0..m.height() {
            for x in 0..m.width() {
                if m.get(x, y) > 0.5 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn count_components(m: &SegMask) -> usize {
        let mut seen = vec![false; (m.width() * m.height()) as usize];
        let idx = |x: u32, y: u32| (y * m.width() + x) as usize;
        let mut n = 0;
        for sy in 0..m.height() {
            for sx in 0..m.width() {
                if m.get(sx, sy) <= 0.5 || seen[idx(sx, sy)] {
                    continue;
                }
                n += 1;
                let mut stack = vec![(sx, sy)];
                seen[idx(sx, sy)] = true;
                while let Some((x, y)) = stack.pop() {
                    for dy in -1i64..=1 {
                        for dx in -1i64..=1 {
                            let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                            if nx < 0
                                || ny < 0
                                || nx >= m.width() as i64
                                || ny >= m.height() as i64
                            {
                                continue;
                            }
                            let (nx, ny) = (nx as u32, ny as u32);
                            if m.get(nx, ny) > 0.5 && !seen[idx(nx, ny)] {
                                seen[idx(nx, ny)] = true;
                                stack.push((nx, ny));
                            }
                        }
                    }
                }
            }
        }
        n
    }

    fn has_2x2(m: &SegMask) -> bool {
        for y in 0..m.height().saturating_sub(1) {
            for x in 0..m.width().saturating_sub(1) {
                if m.get(x, y) > 0.5
                    && m.get(x + 1, y) > 0.5
                    && m.get(x, y + 1) > 0.5
                    && m.get(x + 1, y + 1) > 0.5
                {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn wide_band_thins_to_centerline_row() {
        let mut m = SegMask::new(64, 64);
        for y in 1..=15 {
            for x in 0..64 {
                m.set(x, y, 1.0);
            }
        }
        let thin = thin_mask(&m);
        let px = on_pixels(&thin);
        assert!(!px.is_empty());
        assert!(px.iter().all(|&(_, y)| y == 8), "band centered on row 8");
        let xs: Vec<u32> = px.iter().map(|&(x, _)| x).collect();
        let (lo, hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        assert!(lo <= 10 && hi >= 53, "span {lo}..{hi}");
        assert_eq!(px.len() as u32, hi - lo + 1, "contiguous run");
        assert!(!has_2x2(&thin));
        // already-thin input is a fixed point
        assert_eq!(thin_mask(&thin).data(), thin.data());
    }

    #[test]
    fn plus_sign_vectorizes_to_cross() {
        let mut px = Vec::new();
        for t in 2..=18 {
            px.push((t, 10));
            px.push((10, t));
        }
        let m = mask_from(&px, 21, 21);
        assert_eq!(thin_mask(&m).data(), m.data(), "already thin");
        let g = vectorize_skeleton(&m).unwrap();
        assert_eq!(g.nodes.len(), 5);
        assert_eq!(g.edges.len(), 4);
        let mut coords: Vec<(f64, f64)> = g.nodes.iter().map(|n| (n.x, n.y)).collect();
        coords.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(
            coords,
            vec![(2.0, 10.0), (10.0, 2.0), (10.0, 10.0), (10.0, 18.0), (18.0, 10.0)]
        );
        let center = g.nodes.iter().find(|n| (n.x, n.y) == (10.0, 10.0)).unwrap();
        assert!(g.edges.iter().all(|e| e.a == center.id || e.b == center.id));
        assert!(g.edges.iter().all(|e| e.poly.is_none()), "straight arms");
    }

    #[test]
    fn thinning_preserves_connectivity_of_scene_masks() {
        for seed in [1, 2, 3] {
            let params = SynthParams {
                image_size: 256,
                ..SynthParams::default()
            };
            let g = generate_network(&params, seed).unwrap();
            let mask = rasterize_graph(&g);
            assert_eq!(count_components(&mask), 1, "stroked scene is connected");
            let thin = thin_mask(&mask);
            assert_eq!(count_components(&thin), 1, "seed {seed}");
            assert!(!has_2x2(&thin), "seed {seed}");
        }
    }

    #[test]
    fn vectorize_rejects_thick_input() {
        let mut m = SegMask::new(6, 6);
        for y in 1..4 {
            for x in 1..4 {
                m.set(x, y, 1.0);
            }
        }
        match vectorize_skeleton(&m) {
            Err(Error::NotThin { x: 1, y: 1 }) => {}
            other => panic!("expected NotThin at (1,1), got {other:?}"),
        }
    }

    #[test]
    fn stroked_segment_round_trips_through_skeleton() {
        let g = RoadGraph {
            image_size: 128,
            width: 15.0,
            nodes: vec![
                Node { id: 0, x: 8.0, y: 32.0, patch: None },
                Node { id: 1, x: 120.0, y: 32.0, patch: None },
            ],
            edges: vec![Edge { a: 0, b: 1, poly: None }],
        };
        g.validate().unwrap();
        let rec = mask_to_graph(&rasterize_graph(&g)).unwrap();
        assert_eq!(rec.nodes.len(), 2);
        assert_eq!(rec.edges.len(), 1);
        for n in &rec.nodes {
            assert_eq!(n.y, 32.0, "skeleton stays on the centerline row");
        }
        let (lo, hi) = (
            rec.nodes.iter().map(|n| n.x).fold(f64::INFINITY, f64::min),
            rec.nodes.iter().map(|n| n.x).fold(0.0, f64::max),
        );
        assert!(hi - lo >= 78.0, "span {lo}..{hi}");
        assert!(lo <= 25.0 && hi >= 103.0, "span {lo}..{hi}");
    }

    /// Pixels of the diamond |x-cx| + |y-cy| == r: a pure degree-2 cycle
    /// (each pixel touches exactly its two diagonal ring neighbors).
    fn diamond(cx: i64, cy: i64, r: i64) -> Vec<(u32, u32)> {
        let mut px = Vec::new();
        for dx in -r..=r {
            let dy = r - dx.abs();
            px.push(((cx + dx) as u32, (cy + dy) as u32));
            if dy != 0 {
                px.push(((cx + dx) as u32, (cy - dy) as u32));
            }
        }
        px.sort_unstable();
        px.dedup();
        px
    }

    #[test]
    fn isolated_ring_becomes_three_edge_cycle() {
        let m = mask_from(&diamond(8, 8, 4), 17, 17);
        let g = vectorize_skeleton(&m).unwrap();
        assert_eq!(g.nodes.len(), 3);
        assert_eq!(g.edges.len(), 3);
        assert!(g.degrees().iter().all(|&d| d == 2));
        // 16 unit-diagonal steps
        let total: f64 = g.total_length();
        assert!(total > 20.0, "perimeter-ish length, got {total}");
    }

    #[test]
    fn axis_aligned_ring_anchors_at_corners() {
        // The two pixels flanking each square corner see each other
        // diagonally as well as the corner, so every corner becomes a small
        // junction cluster and the ring keeps four anchor nodes.
        let mut px = Vec::new();
        for t in 4..=12 {
            px.push((t, 4));
            px.push((t, 12));
            px.push((4, t));
            px.push((12, t));
        }
        px.sort_unstable();
        px.dedup();
        let m = mask_from(&px, 17, 17);
        let g = vectorize_skeleton(&m).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges.len(), 4);
        assert!(g.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn parallel_chains_between_same_nodes_split() {
        // theta shape: a diamond ring with a horizontal chord; the chord
        // meets the ring in two junction clusters, so three chains join the
        // same node pair and the later two must each gain a split point
        let mut px = diamond(8, 8, 4);
        for t in 5..=11 {
            px.push((t, 8)); // chord
        }
        px.sort_unstable();
        px.dedup();
        let m = mask_from(&px, 17, 17);
        let g = vectorize_skeleton(&m).unwrap();
        assert_eq!(g.nodes.len(), 4, "two junctions plus two split points");
        assert_eq!(g.edges.len(), 5);
        let mut degs = g.degrees();
        degs.sort_unstable();
        assert_eq!(degs, vec![2, 2, 3, 3]);
    }

    #[test]
    fn loop_at_junction_splits_into_ring() {
        // lollipop: a stick meeting a square loop
        let mut px = vec![(2, 6), (3, 6), (4, 6)];
        for t in 5..=9 {
            px.push((t, 4));
            px.push((t, 8));
        }
        for t in 5..8 {
            px.push((5, t));
            px.push((9, t));
        }
        px.sort_unstable();
        px.dedup();
        let m = mask_from(&px, 12, 12);
        let g = vectorize_skeleton(&m).unwrap();
        assert_eq!(g.nodes.len(), 4, "endpoint, junction, two split points");
        assert_eq!(g.edges.len(), 4);
        let mut degs = g.degrees();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 2, 2, 3]);
    }

    #[test]
    fn diagonal_chain_simplifies_to_straight_edge() {
        let px: Vec<(u32, u32)> = (2..=20).map(|t| (t, t)).collect();
        let m = mask_from(&px, 24, 24);
        let g = vectorize_skeleton(&m).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert!(g.edges[0].poly.is_none(), "collinear chain needs no bends");
        let mut xs: Vec<f64> = g.nodes.iter().map(|n| n.x).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(xs, vec![2.0, 20.0]);
    }

    #[test]
    fn degenerate_masks_vectorize_to_empty_graphs() {
        let empty = SegMask::new(16, 16);
        let g = vectorize_skeleton(&empty).unwrap();
        assert!(g.nodes.is_empty() && g.edges.is_empty());
        // a lone pixel has no extent
        let dot = mask_from(&[(5, 5)], 16, 16);
        let g = vectorize_skeleton(&dot).unwrap();
        assert!(g.nodes.is_empty() && g.edges.is_empty());
        // two adjacent pixels are the smallest representable segment
        let pair = mask_from(&[(5, 5), (6, 5)], 16, 16);
        let g = vectorize_skeleton(&pair).unwrap();
        assert_eq!((g.nodes.len(), g.edges.len()), (2, 1));
        assert!(mask_to_graph(&SegMask::new(8, 4)).is_err(), "square only");
    }
}
