//! Deterministic synthetic road scenes and prediction-noise injection.
//!
//! Two scene styles:
//!
//! - [`SceneStyle::JitteredGrid`]: nodes on a jittered lattice whose spacing
//!   and jitter amplitude are derived from the separation floor. Grid cells
//!   align with patch boundaries and the jitter keeps every node well inside
//!   a patch interior, so edges stay near-axis-aligned and the encoded link
//!   chains contain no triangle or quadrilateral patterns. The full
//!   4-neighbor lattice is thinned at random under two vetoes — stay
//!   connected, and never leave a perpendicular degree-2 elbow — so bends
//!   only occur at intersections, as in real road graphs.
//! - [`SceneStyle::ProximityGraph`]: Poisson-disc samples joined by their
//!   relative neighborhood graph; organic layouts, arbitrary edge slopes.
//!
//! Everything is a pure function of the parameters and an explicit seed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::graph::{Edge, Node, Point, RoadGraph};
use crate::grid::{opposite, PatchGrid};
use crate::psl::{PslTensors, MAX_OFFSET_FRAC};

/// Per-edge probability of attempting a removal when thinning the full
/// lattice into a street network.
const THIN_ATTEMPT_PROB: f64 = 0.7;

/// Candidate attempts per active sample in Poisson-disc sampling.
const POISSON_ATTEMPTS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SceneStyle {
    #[default]
    JitteredGrid,
    ProximityGraph,
}

/// Scene generation parameters.
#[derive(Debug, Clone, Copy)]
pub struct SynthParams {
    pub image_size: u32,
    pub patch_size: u32,
    /// Minimum pairwise distance between nodes, pixels.
    pub min_sep: f64,
    /// Rasterization stroke width carried on the generated graph.
    pub width: f32,
    pub style: SceneStyle,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            image_size: 1024,
            patch_size: 16,
            min_sep: 48.0,
            width: 15.0,
            style: SceneStyle::JitteredGrid,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        PatchGrid::new(self.image_size, self.patch_size)?;
        if self.min_sep < 2.0 * self.patch_size as f64 {
            return Err(Error::InvalidParams(format!(
                "min_sep {} below twice the patch size {}",
                self.min_sep, self.patch_size
            )));
        }
        if !(self.width >= 1.0) {
            return Err(Error::InvalidParams(format!(
                "stroke width {} below 1",
                self.width
            )));
        }
        let spacing = self.lattice_spacing();
        if (self.image_size as f64) < 2.0 * spacing {
            return Err(Error::InvalidParams(format!(
                "image size {} too small for node spacing {spacing}",
                self.image_size
            )));
        }
        Ok(())
    }

    /// Lattice spacing: the smallest patch multiple strictly above `min_sep`.
    fn lattice_spacing(&self) -> f64 {
        let p = self.patch_size as f64;
        p * ((self.min_sep + p) / p).ceil()
    }

    /// Jitter amplitude: capped both by patch fraction (keeps nodes in patch
    /// interiors) and by a conservative separation bound (keeps every jittered
    /// pair at least `min_sep` apart).
    fn jitter_amplitude(&self) -> f64 {
        let sep_cap = (self.lattice_spacing() - self.min_sep) / (2.0 * std::f64::consts::SQRT_2)
            - 0.5;
        (0.2 * self.patch_size as f64).min(sep_cap)
    }
}

/// Noise model applied to ground-truth tensors to mimic predictions.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoiseParams {
    /// Gaussian noise added to `p` in logit space.
    pub sigma_p: f32,
    /// Gaussian noise added to keypoint offsets of road patches, in offset
    /// fraction units, clipped back into [0, 1).
    pub sigma_s: f32,
    /// Probability of deleting each stored link (both directions at once).
    pub p_drop: f64,
    /// Probability of inserting a spurious link between adjacent road
    /// patches (both directions at once).
    pub p_add: f64,
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_p >= 0.0 && self.sigma_s >= 0.0) {
            return Err(Error::InvalidParams("negative noise sigma".into()));
        }
        for (name, p) in [("p_drop", self.p_drop), ("p_add", self.p_add)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Generates a deterministic road network for `params` and `seed`.
pub fn generate_network(params: &SynthParams, seed: u64) -> Result<RoadGraph> {
    params.validate()?;
    let g = match params.style {
        SceneStyle::JitteredGrid => jittered_grid(params, seed),
        SceneStyle::ProximityGraph => proximity_graph(params, seed),
    };
    g.validate()?;
    Ok(g)
}

fn jittered_grid(params: &SynthParams, seed: u64) -> RoadGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spacing = params.lattice_spacing();
    let amp = params.jitter_amplitude();
    let phase = params.patch_size as f64 / 2.0;
    let m = (params.image_size as f64 / spacing) as usize;

    let mut nodes = Vec::with_capacity(m * m);
    for gy in 0..m {
        for gx in 0..m {
            let jx = rng.gen_range(-amp..=amp);
            let jy = rng.gen_range(-amp..=amp);
            nodes.push(Node {
                id: nodes.len() as u32,
                x: phase + gx as f64 * spacing + jx,
                y: phase + gy as f64 * spacing + jy,
                patch: None,
            });
        }
    }

    // The street network starts as the full 4-neighbor lattice and is
    // thinned at random, with two vetoes: the graph must stay connected,
    // and no node may be left with exactly two perpendicular links.
    // Streets end (degree 1) or run straight through mid-block nodes;
    // right-angle turns happen only at intersections (degree >= 3), which
    // matches how road graphs place their vertices.
    let idx = |gy: usize, gx: usize| (gy * m + gx) as u32;
    let mut order = Vec::new();
    for gy in 0..m {
        for gx in 0..m {
            if gx + 1 < m {
                order.push((idx(gy, gx), idx(gy, gx + 1)));
            }
            if gy + 1 < m {
                order.push((idx(gy, gx), idx(gy + 1, gx)));
            }
        }
    }
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); m * m];
    for &(a, b) in &order {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    order.shuffle(&mut rng);

    // Degree check for `v` once `gone` is removed: street ends and straight
    // continuations are fine, perpendicular degree-2 elbows are not.
    let degree_ok = |adj: &[Vec<u32>], v: u32, gone: Option<u32>| -> bool {
        let rest: Vec<u32> = adj[v as usize]
            .iter()
            .copied()
            .filter(|&w| Some(w) != gone)
            .collect();
        match rest.len() {
            0 => false,
            2 => {
                let d = |w: u32| {
                    (
                        (w as usize / m) as i64 - (v as usize / m) as i64,
                        (w as usize % m) as i64 - (v as usize % m) as i64,
                    )
                };
                let (d0, d1) = (d(rest[0]), d(rest[1]));
                d0.0 + d1.0 == 0 && d0.1 + d1.1 == 0
            }
            _ => true,
        }
    };
    // Reachability of `b` from `a` with the direct (a, b) hop disabled.
    let still_connected = |adj: &[Vec<u32>], a: u32, b: u32| -> bool {
        let mut seen = vec![false; m * m];
        let mut stack = vec![a];
        seen[a as usize] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if (v == a && w == b) || (v == b && w == a) || seen[w as usize] {
                    continue;
                }
                if w == b {
                    return true;
                }
                seen[w as usize] = true;
                stack.push(w);
            }
        }
        false
    };
    let delete = |adj: &mut [Vec<u32>], a: u32, b: u32| {
        adj[a as usize].retain(|&w| w != b);
        adj[b as usize].retain(|&w| w != a);
    };

    for (a, b) in order {
        if !rng.gen_bool(THIN_ATTEMPT_PROB) {
            continue;
        }
        if degree_ok(&adj, a, Some(b))
            && degree_ok(&adj, b, Some(a))
            && still_connected(&adj, a, b)
        {
            delete(&mut adj, a, b);
        }
    }
    // Scene corners begin with exactly two perpendicular links; turn each
    // leftover elbow into a street end where a removal stays legal.
    for v in 0..(m * m) as u32 {
        if degree_ok(&adj, v, None) {
            continue;
        }
        let inc = adj[v as usize].clone();
        for w in inc {
            if degree_ok(&adj, w, Some(v)) && still_connected(&adj, v, w) {
                delete(&mut adj, v, w);
                break;
            }
        }
    }

    let mut edges = Vec::new();
    for v in 0..(m * m) as u32 {
        for &w in &adj[v as usize] {
            if v < w {
                edges.push(Edge {
                    a: v,
                    b: w,
                    poly: None,
                });
            }
        }
    }
    edges.sort_unstable_by_key(|e| (e.a, e.b));

    RoadGraph {
        image_size: params.image_size,
        width: params.width,
        nodes,
        edges,
    }
}

fn proximity_graph(params: &SynthParams, seed: u64) -> RoadGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = params.patch_size as f64 / 2.0;
    let lo = margin;
    let hi = params.image_size as f64 - margin;
    let pts = poisson_disc(&mut rng, lo, hi, params.min_sep);

    let nodes: Vec<Node> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| Node {
            id: i as u32,
            x: p.x,
            y: p.y,
            patch: None,
        })
        .collect();

    // Relative neighborhood graph: keep (u, v) unless some w is strictly
    // closer to both ends. Contains the Euclidean MST, hence connected.
    let mut edges = Vec::new();
    for u in 0..pts.len() {
        for v in u + 1..pts.len() {
            let d = pts[u].dist(pts[v]);
            let blocked = (0..pts.len())
                .filter(|&w| w != u && w != v)
                .any(|w| pts[u].dist(pts[w]) < d && pts[v].dist(pts[w]) < d);
            if !blocked {
                edges.push(Edge {
                    a: u as u32,
                    b: v as u32,
                    poly: None,
                });
            }
        }
    }

    RoadGraph {
        image_size: params.image_size,
        width: params.width,
        nodes,
        edges,
    }
}

/// Bridson Poisson-disc sampling over the square [lo, hi]^2 with radius `r`.
fn poisson_disc(rng: &mut ChaCha8Rng, lo: f64, hi: f64, r: f64) -> Vec<Point> {
    let cell = r / std::f64::consts::SQRT_2;
    let extent = hi - lo;
    let gw = (extent / cell).ceil() as usize + 1;
    let cell_of = |p: Point| -> (usize, usize) {
        (
            (((p.x - lo) / cell) as usize).min(gw - 1),
            (((p.y - lo) / cell) as usize).min(gw - 1),
        )
    };
    let mut grid: Vec<Option<usize>> = vec![None; gw * gw];
    let mut pts: Vec<Point> = Vec::new();
    let mut active: Vec<usize> = Vec::new();

    let insert = |p: Point,
                  pts: &mut Vec<Point>,
                  grid: &mut Vec<Option<usize>>,
                  active: &mut Vec<usize>| {
        let (cx, cy) = cell_of(p);
        grid[cy * gw + cx] = Some(pts.len());
        active.push(pts.len());
        pts.push(p);
    };

    let first = Point::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi));
    insert(first, &mut pts, &mut grid, &mut active);

    while !active.is_empty() {
        let slot = rng.gen_range(0..active.len());
        let base = pts[active[slot]];
        let mut placed = false;
        for _ in 0..POISSON_ATTEMPTS {
            let ang = rng.gen_range(0.0..std::f64::consts::TAU);
            let rad = rng.gen_range(r..2.0 * r);
            let cand = Point::new(base.x + rad * ang.cos(), base.y + rad * ang.sin());
            if !(cand.x >= lo && cand.x < hi && cand.y >= lo && cand.y < hi) {
                continue;
            }
            let (cx, cy) = cell_of(cand);
            let mut ok = true;
            'scan: for ny in cy.saturating_sub(2)..=(cy + 2).min(gw - 1) {
                for nx in cx.saturating_sub(2)..=(cx + 2).min(gw - 1) {
                    if let Some(i) = grid[ny * gw + nx] {
                        if pts[i].dist(cand) < r {
                            ok = false;
                            break 'scan;
                        }
                    }
                }
            }
            if ok {
                insert(cand, &mut pts, &mut grid, &mut active);
                placed = true;
                break;
            }
        }
        if !placed {
            active.swap_remove(slot);
        }
    }
    pts
}

/// Applies prediction noise to ground-truth tensors, deterministically in
/// `seed`. Zero-noise parameters return the input bit-for-bit.
///
/// Each distortion stage has its own random stream and draws a fixed number
/// of variates per tensor shape, so (for example) raising `p_drop` only
/// widens the set of dropped links; it never reshuffles the other stages.
pub fn perturb_psl(t: &PslTensors, noise: &NoiseParams, seed: u64) -> Result<PslTensors> {
    noise.validate()?;
    let mut out = t.clone();
    let grid = *t.grid();
    let n2 = grid.num_patches();

    let stream = |stage: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stage);
        rng
    };

    if noise.sigma_p > 0.0 {
        let mut rng = stream(1);
        let normal = Normal::new(0.0f64, noise.sigma_p as f64).unwrap();
        for i in 0..n2 {
            let eps = 1e-6f64;
            let p = (t.p_at(i) as f64).clamp(eps, 1.0 - eps);
            let logit = (p / (1.0 - p)).ln() + normal.sample(&mut rng);
            out.set_p(i, (1.0 / (1.0 + (-logit).exp())) as f32);
        }
    }

    if noise.sigma_s > 0.0 {
        let mut rng = stream(2);
        let normal = Normal::new(0.0f64, noise.sigma_s as f64).unwrap();
        for i in 0..n2 {
            let (dx, dy) = (normal.sample(&mut rng), normal.sample(&mut rng));
            if t.p_at(i) > 0.5 {
                let (sx, sy) = t.s_at(i);
                out.set_s(
                    i,
                    (sx as f64 + dx).clamp(0.0, MAX_OFFSET_FRAC as f64) as f32,
                    (sy as f64 + dy).clamp(0.0, MAX_OFFSET_FRAC as f64) as f32,
                );
            }
        }
    }

    if noise.p_drop > 0.0 {
        let mut rng = stream(3);
        for_each_adjacent_pair(&grid, |i, j, k| {
            let u: f64 = rng.gen();
            if u < noise.p_drop && t.l_at(i, j) > 0.5 {
                out.set_l(i, j, 0.0);
                out.set_l(k, opposite(j), 0.0);
            }
        });
    }

    if noise.p_add > 0.0 {
        let mut rng = stream(4);
        for_each_adjacent_pair(&grid, |i, j, k| {
            let u: f64 = rng.gen();
            if u < noise.p_add && t.l_at(i, j) < 0.5 && t.p_at(i) > 0.5 && t.p_at(k) > 0.5 {
                out.set_l(i, j, 1.0);
                out.set_l(k, opposite(j), 1.0);
            }
        });
    }

    Ok(out)
}

/// Visits every unordered adjacent patch pair exactly once, in a fixed
/// order, as `(lower index, direction, higher index)`.
fn for_each_adjacent_pair(grid: &PatchGrid, mut f: impl FnMut(usize, usize, usize)) {
    for i in 0..grid.num_patches() {
        for j in 4..8 {
            if let Some(k) = grid.neighbor(i, j) {
                f(i, j, k);
            }
        }
    }
}
