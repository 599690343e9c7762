//! Decoded-graph refinement: endpoint reconnection and removal of spurious
//! triangle / quadrilateral links.
//!
//! All passes leave the node set and node positions untouched; they only add
//! or remove edges, deterministically. [`optimize`] runs the three passes to
//! a global fixpoint, so running it twice never changes anything further.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{polyline_length, Edge, RoadGraph};
use crate::grid::PatchGrid;

/// Settings for [`optimize`] and its passes.
#[derive(Debug, Clone, Copy)]
pub struct OptParams {
    pub patch_size: u32,
    /// Endpoints already reachable within this many hops are not reconnected.
    pub hop_guard: u32,
    /// Cap on full connect/remove rounds before giving up.
    pub max_rounds: u32,
}

impl Default for OptParams {
    fn default() -> Self {
        OptParams {
            patch_size: PatchGrid::DEFAULT_PATCH_SIZE,
            hop_guard: 5,
            max_rounds: 32,
        }
    }
}

type EdgeKey = (u32, u32);

fn key(a: u32, b: u32) -> EdgeKey {
    (a.min(b), a.max(b))
}

/// Mutable edge-set view over a fixed node set.
struct Working {
    grid: PatchGrid,
    /// (row, col) of each node's patch.
    cells: Vec<(i32, i32)>,
    edges: BTreeMap<EdgeKey, Edge>,
    adj: Vec<BTreeSet<u32>>,
}

impl Working {
    fn new(g: &RoadGraph, patch_size: u32) -> Result<Self> {
        g.validate()?;
        let grid = PatchGrid::new(g.image_size, patch_size)?;
        let cells = g
            .nodes
            .iter()
            .map(|n| {
                let i = match n.patch {
                    Some(p) if (p as usize) < grid.num_patches() => p as usize,
                    _ => grid.patch_of_point(n.pos())?,
                };
                let (r, c) = grid.row_col(i);
                Ok((r as i32, c as i32))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut adj = vec![BTreeSet::new(); g.nodes.len()];
        let mut edges = BTreeMap::new();
        for e in &g.edges {
            adj[e.a as usize].insert(e.b);
            adj[e.b as usize].insert(e.a);
            edges.insert(key(e.a, e.b), e.clone());
        }
        Ok(Working {
            grid,
            cells,
            edges,
            adj,
        })
    }

    fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains_key(&key(a, b))
    }

    fn insert_edge(&mut self, a: u32, b: u32) {
        let k = key(a, b);
        self.adj[a as usize].insert(b);
        self.adj[b as usize].insert(a);
        self.edges.insert(
            k,
            Edge {
                a: k.0,
                b: k.1,
                poly: None,
            },
        );
    }

    fn remove_edge(&mut self, a: u32, b: u32) {
        self.adj[a as usize].remove(&b);
        self.adj[b as usize].remove(&a);
        self.edges.remove(&key(a, b));
    }

    /// Chebyshev distance 1 between the nodes' patches.
    fn patch_adjacent(&self, a: u32, b: u32) -> bool {
        let (ra, ca) = self.cells[a as usize];
        let (rb, cb) = self.cells[b as usize];
        (ra - rb).abs().max((ca - cb).abs()) == 1
    }

    /// Both patch axes differ: the endpoints sit in diagonal patches.
    fn patch_diagonal(&self, a: u32, b: u32) -> bool {
        let (ra, ca) = self.cells[a as usize];
        let (rb, cb) = self.cells[b as usize];
        (ra - rb).abs() == 1 && (ca - cb).abs() == 1
    }

    fn edge_len(&self, g: &RoadGraph, k: EdgeKey) -> f64 {
        polyline_length(&g.edge_polyline(&self.edges[&k]))
    }

    /// Patch-pair sort key for deterministic candidate ordering.
    fn patch_key(&self, a: u32, b: u32) -> (i32, i32, i32, i32) {
        let pa = self.cells[a as usize];
        let pb = self.cells[b as usize];
        let (lo, hi) = if pa <= pb { (pa, pb) } else { (pb, pa) };
        (lo.0, lo.1, hi.0, hi.1)
    }

    /// True if `v` is reachable from `u` in at most `max_hops` edges.
    fn reachable_within(&self, u: u32, v: u32, max_hops: u32, visited: &mut [u32], gen: u32) -> bool {
        let mut queue = VecDeque::new();
        queue.push_back((u, 0u32));
        visited[u as usize] = gen;
        while let Some((x, d)) = queue.pop_front() {
            if x == v {
                return true;
            }
            if d == max_hops {
                continue;
            }
            for &y in &self.adj[x as usize] {
                if visited[y as usize] != gen {
                    visited[y as usize] = gen;
                    queue.push_back((y, d + 1));
                }
            }
        }
        false
    }

    fn into_graph(self, g: &RoadGraph) -> RoadGraph {
        RoadGraph {
            image_size: g.image_size,
            width: g.width,
            nodes: g.nodes.clone(),
            edges: self.edges.into_values().collect(),
        }
    }
}

/// Adds an edge between every pair of loose ends (degree <= 1) sitting in
/// 8-adjacent patches, unless the two are already within `hop_guard` hops of
/// each other. Candidates are processed in patch order against live degrees,
/// so a node connected by an earlier candidate stops being a loose end.
pub fn connect_endpoints(g: &RoadGraph, patch_size: u32, hop_guard: u32) -> Result<RoadGraph> {
    let mut w = Working::new(g, patch_size)?;

    let mut by_cell: HashMap<(i32, i32), Vec<u32>> = HashMap::new();
    for (i, &cell) in w.cells.iter().enumerate() {
        if w.degree(i as u32) <= 1 {
            by_cell.entry(cell).or_default().push(i as u32);
        }
    }

    let mut candidates: Vec<((i32, i32, i32, i32), u32, u32, u32, u32)> = Vec::new();
    for (&(r, c), nodes) in &by_cell {
        for &u in nodes {
            for dr in -1..=1 {
                for dc in -1..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let Some(others) = by_cell.get(&(r + dr, c + dc)) else {
                        continue;
                    };
                    for &v in others {
                        if u < v {
                            candidates.push((w.patch_key(u, v), u.min(v), u.max(v), u, v));
                        }
                    }
                }
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let mut visited = vec![0u32; g.nodes.len()];
    let mut gen = 0u32;
    for (_, a, b, _, _) in candidates {
        if w.degree(a) > 1 || w.degree(b) > 1 || w.has_edge(a, b) {
            continue;
        }
        gen += 1;
        if w.reachable_within(a, b, hop_guard, &mut visited, gen) {
            continue;
        }
        w.insert_edge(a, b);
    }
    Ok(w.into_graph(g))
}

/// Removes the diagonal edge of every patch-level triangle.
///
/// For three distinct pairwise-8-adjacent patches, axis steps flip the
/// row+col parity while diagonal steps preserve it; a closed 3-step walk
/// therefore uses exactly two axis steps and one diagonal step, so every
/// such triangle has exactly one diagonal edge to drop.
pub fn remove_triangles(g: &RoadGraph, patch_size: u32) -> Result<RoadGraph> {
    let mut w = Working::new(g, patch_size)?;
    let cap = 10 * w.grid.num_patches() as u64;
    let mut removed = 0u64;
    loop {
        let mut changed = false;
        let snapshot: Vec<EdgeKey> = w.edges.keys().copied().collect();
        for (u, v) in snapshot {
            if !w.has_edge(u, v) {
                continue;
            }
            let commons: Vec<u32> = w.adj[u as usize]
                .intersection(&w.adj[v as usize])
                .copied()
                .collect();
            for t in commons {
                if !(w.has_edge(u, v) && w.has_edge(u, t) && w.has_edge(v, t)) {
                    continue;
                }
                if !(w.patch_adjacent(u, v) && w.patch_adjacent(u, t) && w.patch_adjacent(v, t)) {
                    continue;
                }
                let diagonals: Vec<EdgeKey> = [(u, v), (u, t), (v, t)]
                    .into_iter()
                    .filter(|&(x, y)| w.patch_diagonal(x, y))
                    .map(|(x, y)| key(x, y))
                    .collect();
                debug_assert_eq!(diagonals.len(), 1, "patch triangles have one diagonal");
                if let [d] = diagonals.as_slice() {
                    w.remove_edge(d.0, d.1);
                    changed = true;
                    removed += 1;
                    if removed > cap {
                        return Err(Error::IterationCap(cap));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(w.into_graph(g))
}

/// Removes the longest edge of every chordless 4-cycle. Ties prefer an edge
/// between diagonal patches, then the smallest patch pair, then the smallest
/// node pair.
pub fn remove_quadrilaterals(g: &RoadGraph, patch_size: u32) -> Result<RoadGraph> {
    let mut w = Working::new(g, patch_size)?;
    let cap = 10 * w.grid.num_patches() as u64;
    let mut removed = 0u64;
    loop {
        let cycles = chordless_quads(&w);
        if cycles.is_empty() {
            break;
        }
        for [a, b, c, d] in cycles {
            // Re-verify on the live graph: ring edges present, chords absent.
            let ring = [(a, b), (b, c), (c, d), (d, a)];
            if !ring.iter().all(|&(x, y)| w.has_edge(x, y))
                || w.has_edge(a, c)
                || w.has_edge(b, d)
            {
                continue;
            }
            let target = ring
                .into_iter()
                .map(|(x, y)| key(x, y))
                .min_by(|&p, &q| {
                    let lp = w.edge_len(g, p);
                    let lq = w.edge_len(g, q);
                    // longest first, diagonal-patch edges preferred on ties
                    lq.total_cmp(&lp)
                        .then_with(|| {
                            w.patch_diagonal(q.0, q.1)
                                .cmp(&w.patch_diagonal(p.0, p.1))
                        })
                        .then_with(|| w.patch_key(p.0, p.1).cmp(&w.patch_key(q.0, q.1)))
                        .then(p.cmp(&q))
                })
                .expect("ring has four edges");
            w.remove_edge(target.0, target.1);
            removed += 1;
            if removed > cap {
                return Err(Error::IterationCap(cap));
            }
        }
    }
    Ok(w.into_graph(g))
}

/// Chordless 4-cycles as `[a, b, c, d]` in ring order, `a` smallest and its
/// smaller neighbor second; each cycle listed once, sorted.
fn chordless_quads(w: &Working) -> Vec<[u32; 4]> {
    let mut out = BTreeSet::new();
    let n = w.adj.len() as u32;
    for b in 0..n {
        let nbrs: Vec<u32> = w.adj[b as usize].iter().copied().collect();
        for (ia, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[ia + 1..] {
                if w.has_edge(a, c) {
                    continue;
                }
                for &d in w.adj[a as usize].intersection(&w.adj[c as usize]) {
                    if d == b || w.has_edge(b, d) {
                        continue;
                    }
                    // Canonical ring from the two diagonal pairs {a, c} and
                    // {b, d}: every a/c-b/d combination is a ring edge, so
                    // any interleaving is valid; fixing the order makes the
                    // cycle unique regardless of which corner found it.
                    let (x1, x2) = (a.min(c), a.max(c));
                    let (y1, y2) = (b.min(d), b.max(d));
                    let ring = if x1 < y1 {
                        [x1, y1, x2, y2]
                    } else {
                        [y1, x1, y2, x2]
                    };
                    out.insert(ring);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Runs connect / triangle / quadrilateral passes until a full round changes
/// nothing. The fixpoint makes the whole refinement idempotent.
pub fn optimize(g: &RoadGraph, params: &OptParams) -> Result<RoadGraph> {
    if params.max_rounds == 0 {
        return Err(Error::InvalidParams("max_rounds must be positive".into()));
    }
    let edge_keys = |g: &RoadGraph| -> BTreeSet<EdgeKey> {
        g.edges.iter().map(|e| key(e.a, e.b)).collect()
    };
    let mut cur = g.clone();
    for _ in 0..params.max_rounds {
        let mut step = connect_endpoints(&cur, params.patch_size, params.hop_guard)?;
        step = remove_triangles(&step, params.patch_size)?;
        step = remove_quadrilaterals(&step, params.patch_size)?;
        if edge_keys(&step) == edge_keys(&cur) {
            return Ok(step);
        }
        cur = step;
    }
    Err(Error::IterationCap(params.max_rounds as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Node;
    use crate::psl::{decode_graph, encode_psl, DecodeParams};
    use crate::synth::{generate_network, perturb_psl, NoiseParams, SynthParams};

    /// Nodes at given patch (row, col) cells of a 16-px grid, at an offset
    /// inside the patch; edges as id pairs.
    fn patch_graph(cells: &[(u32, u32)], offsets: &[(f64, f64)], edges: &[(u32, u32)]) -> RoadGraph {
        let nodes = cells
            .iter()
            .zip(offsets)
            .enumerate()
            .map(|(i, (&(r, c), &(ox, oy)))| Node {
                id: i as u32,
                x: c as f64 * 16.0 + ox,
                y: r as f64 * 16.0 + oy,
                patch: None,
            })
            .collect();
        let g = RoadGraph {
            image_size: 128,
            width: 15.0,
            nodes,
            edges: edges
                .iter()
                .map(|&(a, b)| Edge { a, b, poly: None })
                .collect(),
        };
        g.validate().unwrap();
        g
    }

    fn edge_set(g: &RoadGraph) -> BTreeSet<EdgeKey> {
        g.edges.iter().map(|e| key(e.a, e.b)).collect()
    }

    fn centered(n: usize) -> Vec<(f64, f64)> {
        vec![(8.0, 8.0); n]
    }

    #[test]
    fn triangle_loses_its_diagonal_edge() {
        // Patches (0,0)-(0,1)-(1,1): the (0,0)-(1,1) edge is the diagonal.
        let g = patch_graph(
            &[(0, 0), (0, 1), (1, 1)],
            &centered(3),
            &[(0, 1), (1, 2), (0, 2)],
        );
        let out = remove_triangles(&g, 16).unwrap();
        assert_eq!(edge_set(&out), BTreeSet::from([(0, 1), (1, 2)]));
        // idempotent
        let again = remove_triangles(&out, 16).unwrap();
        assert_eq!(edge_set(&again), edge_set(&out));
    }

    #[test]
    fn two_triangles_sharing_an_edge_both_resolve() {
        // (0,0)-(0,1)-(1,1) and (0,0)-(1,0)-(1,1) share the diagonal
        // (0,0)-(1,1); removing it clears both triangles at once.
        let g = patch_graph(
            &[(0, 0), (0, 1), (1, 1), (1, 0)],
            &centered(4),
            &[(0, 1), (1, 2), (0, 2), (0, 3), (2, 3)],
        );
        let out = remove_triangles(&g, 16).unwrap();
        assert_eq!(
            edge_set(&out),
            BTreeSet::from([(0, 1), (1, 2), (0, 3), (2, 3)])
        );
    }

    #[test]
    fn quad_loses_longest_edge() {
        // Axis-aligned 4-cycle over patches (0,0),(0,1),(1,1),(1,0); the
        // (1,1)-(1,0) edge is stretched to be strictly longest.
        let g = patch_graph(
            &[(0, 0), (0, 1), (1, 1), (1, 0)],
            &[(8.0, 8.0), (8.0, 8.0), (14.0, 8.0), (2.0, 8.0)],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        );
        let out = remove_quadrilaterals(&g, 16).unwrap();
        assert_eq!(edge_set(&out), BTreeSet::from([(0, 1), (1, 2), (0, 3)]));
    }

    #[test]
    fn quad_tie_prefers_diagonal_patch_edge() {
        // Ring over patches (0,0)-(1,1)-(2,0)-(1,0): two diagonal edges and
        // two axis edges. Lengths are rigged so one diagonal ties one axis
        // edge at 20 px for longest; the diagonal one must go.
        let g = patch_graph(
            &[(0, 0), (1, 1), (2, 0), (1, 0)],
            &[(8.0, 8.0), (4.0, 8.0), (8.0, 6.0), (8.0, 12.0)],
            &[(0, 1), (1, 2), (2, 3), (3, 0)],
        );
        // check the rigging: |0-1| = hypot(12,16) = 20, |3-0| = 20,
        // |1-2| = hypot(12,14), |2-3| = 10
        let d01 = g.nodes[0].pos().dist(g.nodes[1].pos());
        let d30 = g.nodes[3].pos().dist(g.nodes[0].pos());
        assert_eq!(d01, 20.0);
        assert_eq!(d30, 20.0);
        let out = remove_quadrilaterals(&g, 16).unwrap();
        assert_eq!(edge_set(&out), BTreeSet::from([(1, 2), (2, 3), (0, 3)]));
    }

    #[test]
    fn quad_with_chord_is_left_alone() {
        // The same ring with a chord is not chordless; nothing is removed.
        let g = patch_graph(
            &[(0, 0), (0, 1), (1, 1), (1, 0)],
            &centered(4),
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)],
        );
        // (the chord creates triangles, so only test the quad pass here)
        let out = remove_quadrilaterals(&g, 16).unwrap();
        assert_eq!(edge_set(&out), edge_set(&g));
    }

    #[test]
    fn endpoints_in_adjacent_patches_reconnect() {
        // Two 3-node chains whose tips end in horizontally adjacent patches.
        let g = patch_graph(
            &[(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (0, 5)],
            &centered(6),
            &[(0, 1), (1, 2), (3, 4), (4, 5)],
        );
        let out = connect_endpoints(&g, 16, 5).unwrap();
        let mut expected = edge_set(&g);
        expected.insert((2, 3));
        assert_eq!(edge_set(&out), expected);
    }

    #[test]
    fn nearby_endpoints_respect_hop_guard() {
        // A U-shaped path whose two tips are patch-adjacent but only 3 hops
        // apart; the guard must prevent closing the loop.
        let g = patch_graph(
            &[(0, 0), (0, 1), (1, 1), (1, 0)],
            &centered(4),
            &[(0, 1), (1, 2), (2, 3)],
        );
        let out = connect_endpoints(&g, 16, 5).unwrap();
        assert_eq!(edge_set(&out), edge_set(&g));
        // With a guard of 2 the tips count as far apart and do reconnect.
        let out = connect_endpoints(&g, 16, 2).unwrap();
        let mut expected = edge_set(&g);
        expected.insert((0, 3));
        assert_eq!(edge_set(&out), expected);
    }

    #[test]
    fn disconnected_endpoints_reconnect_regardless_of_distance() {
        let g = patch_graph(
            &[(2, 2), (2, 3), (3, 3), (3, 4)],
            &centered(4),
            &[(0, 1), (2, 3)],
        );
        let out = connect_endpoints(&g, 16, 5).unwrap();
        assert!(out.has_edge(1, 2) || out.has_edge(0, 2) || out.has_edge(1, 3));
        // exactly one repair: live degrees stop the second candidate
        assert_eq!(out.edges.len(), 3);
    }

    #[test]
    fn connect_skips_nodes_of_degree_two() {
        // A chain passing next to a lone endpoint: interior chain nodes have
        // degree 2 and must not attract connections.
        let g = patch_graph(
            &[(0, 0), (0, 1), (0, 2), (1, 1)],
            &centered(4),
            &[(0, 1), (1, 2)],
        );
        let out = connect_endpoints(&g, 16, 5).unwrap();
        // node 3 connects to an endpoint of the chain (node 0 or 2, both at
        // patch distance 1), never to the middle (node 1)
        assert!(!out.has_edge(1, 3));
        assert_eq!(out.edges.len(), 3);
    }

    #[test]
    fn optimize_is_idempotent_on_noisy_scenes() {
        let params = SynthParams::default();
        for seed in 0..3u64 {
            let g = generate_network(&params, seed).unwrap();
            let t = encode_psl(&g, params.patch_size).unwrap();
            let noisy = perturb_psl(
                &t,
                &NoiseParams {
                    p_drop: 0.2,
                    p_add: 0.01,
                    ..NoiseParams::default()
                },
                seed,
            )
            .unwrap();
            let decoded = decode_graph(&noisy, &DecodeParams::default()).unwrap();
            let opt_params = OptParams::default();
            let once = optimize(&decoded, &opt_params).unwrap();
            let twice = optimize(&once, &opt_params).unwrap();
            assert_eq!(edge_set(&once), edge_set(&twice), "seed {seed}");
            assert_eq!(once.nodes.len(), decoded.nodes.len());
            for (a, b) in once.nodes.iter().zip(&decoded.nodes) {
                assert_eq!((a.x, a.y), (b.x, b.y));
            }
        }
    }

    #[test]
    fn optimize_never_splits_components() {
        fn component_count(g: &RoadGraph) -> usize {
            let adj = g.adjacency();
            let mut seen = vec![false; g.nodes.len()];
            let mut n = 0;
            for s in 0..g.nodes.len() {
                if seen[s] {
                    continue;
                }
                n += 1;
                let mut stack = vec![s as u32];
                seen[s] = true;
                while let Some(u) = stack.pop() {
                    for &v in &adj[u as usize] {
                        if !seen[v as usize] {
                            seen[v as usize] = true;
                            stack.push(v);
                        }
                    }
                }
            }
            n
        }
        let params = SynthParams::default();
        for seed in 0..3u64 {
            let g = generate_network(&params, seed).unwrap();
            let t = encode_psl(&g, params.patch_size).unwrap();
            let noisy = perturb_psl(
                &t,
                &NoiseParams {
                    p_drop: 0.25,
                    ..NoiseParams::default()
                },
                seed,
            )
            .unwrap();
            let decoded = decode_graph(&noisy, &DecodeParams::default()).unwrap();
            let optimized = optimize(&decoded, &OptParams::default()).unwrap();
            assert!(
                component_count(&optimized) <= component_count(&decoded),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn optimize_is_identity_on_clean_decoded_scene() {
        let params = SynthParams::default();
        let g = generate_network(&params, 42).unwrap();
        let t = encode_psl(&g, params.patch_size).unwrap();
        let decoded = decode_graph(&t, &DecodeParams::default()).unwrap();
        let optimized = optimize(&decoded, &OptParams::default()).unwrap();
        assert_eq!(edge_set(&optimized), edge_set(&decoded));
    }
}
