//! Patch tensor codec: lossless graph encoding and single-pass decoding.
//!
//! Each patch `i` of the grid carries:
//! - `p[i]`: road probability,
//! - `s[2i], s[2i+1]`: keypoint offset from the patch origin as fractions of
//!   the patch size, in `[0, 1)`, x first,
//! - `l[8i + j]`: probability of a road link toward neighbor `j` in
//!   [`NEIGHBOR_OFFSETS`](crate::grid::NEIGHBOR_OFFSETS) order.
//!
//! Ground-truth encoding walks every edge polyline at a fixed arc step and
//! links consecutive distinct patches, so stored links are reciprocal by
//! construction. Decoding reads each unordered patch pair once and never
//! revisits a decision.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geom::{clip_polyline_to_patch, point_at_arc, sample_arc};
use crate::graph::{polyline_length, Edge, Node, Point, RoadGraph};
use crate::grid::{offset_index, opposite, PatchGrid};

/// Arc-length step used when tracing edge polylines across patches, in
/// pixels. Small enough that consecutive samples never skip a patch.
pub const SAMPLE_STEP: f64 = 0.25;

/// Largest storable offset fraction; keeps decoded keypoints strictly inside
/// the half-open patch rectangle.
pub const MAX_OFFSET_FRAC: f32 = 1.0 - 1e-6;

/// How the two directed copies of a link are combined before thresholding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkSymmetrization {
    #[default]
    Mean,
    Min,
    Max,
}

impl LinkSymmetrization {
    pub fn combine(self, a: f32, b: f32) -> f32 {
        match self {
            LinkSymmetrization::Mean => (a + b) / 2.0,
            LinkSymmetrization::Min => a.min(b),
            LinkSymmetrization::Max => a.max(b),
        }
    }
}

/// Thresholds controlling [`decode_graph`].
#[derive(Debug, Clone, Copy)]
pub struct DecodeParams {
    /// Patch is road iff `p > tau_p`.
    pub tau_p: f32,
    /// Link exists iff the symmetrized value exceeds `tau_l`.
    pub tau_l: f32,
    pub symmetrization: LinkSymmetrization,
}

impl Default for DecodeParams {
    fn default() -> Self {
        DecodeParams {
            tau_p: 0.5,
            tau_l: 0.5,
            symmetrization: LinkSymmetrization::Mean,
        }
    }
}

impl DecodeParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("tau_p", self.tau_p), ("tau_l", self.tau_l)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidParams(format!(
                    "{name} must lie strictly in (0, 1), got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Which rule produced a patch keypoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeypointKind {
    /// A node of degree >= 3 inside the patch.
    Intersection,
    /// A node of degree 1 inside the patch.
    Endpoint,
    /// Arc-length midpoint of the longest road fragment in the patch.
    Midpoint,
}

/// A selected keypoint and the rule that selected it.
#[derive(Debug, Clone, Copy)]
pub struct KeypointChoice {
    pub kind: KeypointKind,
    pub pos: Point,
}

/// The three per-patch tensors over a grid, row-major by patch index.
#[derive(Debug, Clone, PartialEq)]
pub struct PslTensors {
    grid: PatchGrid,
    p: Vec<f32>,
    s: Vec<f32>,
    l: Vec<f32>,
}

impl PslTensors {
    pub fn new(grid: PatchGrid) -> Self {
        let n2 = grid.num_patches();
        PslTensors {
            grid,
            p: vec![0.0; n2],
            s: vec![0.0; 2 * n2],
            l: vec![0.0; 8 * n2],
        }
    }

    pub fn grid(&self) -> &PatchGrid {
        &self.grid
    }

    pub fn p(&self) -> &[f32] {
        &self.p
    }

    pub fn s(&self) -> &[f32] {
        &self.s
    }

    pub fn l(&self) -> &[f32] {
        &self.l
    }

    pub fn p_mut(&mut self) -> &mut [f32] {
        &mut self.p
    }

    pub fn s_mut(&mut self) -> &mut [f32] {
        &mut self.s
    }

    pub fn l_mut(&mut self) -> &mut [f32] {
        &mut self.l
    }

    #[inline]
    pub fn p_at(&self, i: usize) -> f32 {
        self.p[i]
    }

    /// Offset fractions `(sx, sy)` of patch `i`'s keypoint.
    #[inline]
    pub fn s_at(&self, i: usize) -> (f32, f32) {
        (self.s[2 * i], self.s[2 * i + 1])
    }

    #[inline]
    pub fn l_at(&self, i: usize, j: usize) -> f32 {
        self.l[8 * i + j]
    }

    pub fn set_p(&mut self, i: usize, v: f32) {
        self.p[i] = v;
    }

    pub fn set_s(&mut self, i: usize, sx: f32, sy: f32) {
        self.s[2 * i] = sx;
        self.s[2 * i + 1] = sy;
    }

    pub fn set_l(&mut self, i: usize, j: usize, v: f32) {
        self.l[8 * i + j] = v;
    }

    /// Pixel position of patch `i`'s keypoint.
    pub fn keypoint_position(&self, i: usize) -> Point {
        let o = self.grid.patch_origin(i);
        let ps = self.grid.patch_size() as f64;
        let (sx, sy) = self.s_at(i);
        Point {
            x: o.x + sx as f64 * ps,
            y: o.y + sy as f64 * ps,
        }
    }

    /// Checks value ranges: `p` and `l` in [0, 1], `s` in [0, 1), all finite.
    pub fn validate(&self) -> Result<()> {
        for (name, vals) in [("p", &self.p), ("l", &self.l)] {
            if let Some(pos) = vals.iter().position(|v| !(*v >= 0.0 && *v <= 1.0)) {
                return Err(Error::ShapeMismatch(format!(
                    "{name}[{pos}] = {} outside [0, 1]",
                    vals[pos]
                )));
            }
        }
        if let Some(pos) = self.s.iter().position(|v| !(*v >= 0.0 && *v < 1.0)) {
            return Err(Error::ShapeMismatch(format!(
                "s[{pos}] = {} outside [0, 1)",
                self.s[pos]
            )));
        }
        Ok(())
    }

    /// Writes the binary form: magic `PSL1`, little-endian u32 grid side and
    /// patch size, then the `p`, `s`, `l` arrays as little-endian f32.
    pub fn write_bin<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = Vec::with_capacity(12 + 4 * (self.p.len() + self.s.len() + self.l.len()));
        buf.extend_from_slice(b"PSL1");
        buf.extend_from_slice(&self.grid.n().to_le_bytes());
        buf.extend_from_slice(&self.grid.patch_size().to_le_bytes());
        for arr in [&self.p, &self.s, &self.l] {
            for v in arr.iter() {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_bin<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() < 12 || &bytes[0..4] != b"PSL1" {
            return Err(Error::format("psl", "missing PSL1 magic"));
        }
        let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        let patch_size = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        let image_size = (n as u64) * (patch_size as u64);
        if n == 0 || patch_size == 0 || image_size > u32::MAX as u64 {
            return Err(Error::format(
                "psl",
                format!("bad header: n = {n}, patch size = {patch_size}"),
            ));
        }
        let grid = PatchGrid::new(image_size as u32, patch_size)?;
        let n2 = grid.num_patches();
        let expected = 12 + 4 * (n2 + 2 * n2 + 8 * n2);
        if bytes.len() != expected {
            return Err(Error::format(
                "psl",
                format!("expected {expected} bytes for n = {n}, got {}", bytes.len()),
            ));
        }
        let mut off = 12;
        let mut take = |count: usize| -> Vec<f32> {
            let out = bytes[off..off + 4 * count]
                .chunks_exact(4)
                .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            off += 4 * count;
            out
        };
        let tensors = PslTensors {
            grid,
            p: take(n2),
            s: take(2 * n2),
            l: take(8 * n2),
        };
        tensors
            .validate()
            .map_err(|e| Error::format("psl", e.to_string()))?;
        Ok(tensors)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_bin(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_bin(std::fs::File::open(path)?)
    }
}

/// Context shared by keypoint selection over one graph.
struct EncodeCtx<'a> {
    g: &'a RoadGraph,
    grid: PatchGrid,
    degrees: Vec<u32>,
    /// Node ids per patch, ascending.
    nodes_in_patch: Vec<Vec<u32>>,
}

impl<'a> EncodeCtx<'a> {
    fn new(g: &'a RoadGraph, grid: PatchGrid) -> Result<Self> {
        let mut nodes_in_patch = vec![Vec::new(); grid.num_patches()];
        for node in &g.nodes {
            let i = grid.patch_of_point(node.pos())?;
            nodes_in_patch[i].push(node.id);
        }
        Ok(EncodeCtx {
            g,
            grid,
            degrees: g.degrees(),
            nodes_in_patch,
        })
    }

    /// Applies the keypoint priority for `patch`: an intersection node if the
    /// patch holds one, else an endpoint node, else the arc-length midpoint
    /// of the longest road fragment crossing the patch.
    fn select_keypoint(&self, patch: usize) -> Option<KeypointChoice> {
        let center = self.grid.patch_center(patch);
        let pick_node = |filter: &dyn Fn(u32) -> bool| -> Option<u32> {
            self.nodes_in_patch[patch]
                .iter()
                .copied()
                .filter(|&id| filter(self.degrees[id as usize]))
                .min_by(|&a, &b| {
                    let (da, db) = (self.degrees[a as usize], self.degrees[b as usize]);
                    db.cmp(&da) // higher degree first
                        .then(
                            self.g.nodes[a as usize]
                                .pos()
                                .dist(center)
                                .total_cmp(&self.g.nodes[b as usize].pos().dist(center)),
                        )
                        .then(a.cmp(&b))
                })
        };
        if let Some(id) = pick_node(&|d| d >= 3) {
            return Some(KeypointChoice {
                kind: KeypointKind::Intersection,
                pos: self.g.nodes[id as usize].pos(),
            });
        }
        if let Some(id) = pick_node(&|d| d == 1) {
            return Some(KeypointChoice {
                kind: KeypointKind::Endpoint,
                pos: self.g.nodes[id as usize].pos(),
            });
        }
        let o = self.grid.patch_origin(patch);
        let ps = self.grid.patch_size() as f64;
        let mut best: Option<(f64, Vec<Point>)> = None;
        for e in &self.g.edges {
            let poly = self.g.edge_polyline(e);
            for frag in clip_polyline_to_patch(&poly, o.x, o.y, ps) {
                let len = polyline_length(&frag);
                if best.as_ref().map_or(true, |(bl, _)| len > *bl) {
                    best = Some((len, frag));
                }
            }
        }
        best.map(|(len, frag)| KeypointChoice {
            kind: KeypointKind::Midpoint,
            pos: point_at_arc(&frag, len / 2.0),
        })
    }
}

/// Keypoint the encoder would choose for `patch`, or `None` when the patch
/// holds no node and no road fragment.
pub fn keypoint_for_patch(
    g: &RoadGraph,
    patch_size: u32,
    patch: usize,
) -> Result<Option<KeypointChoice>> {
    let grid = PatchGrid::new(g.image_size, patch_size)?;
    Ok(EncodeCtx::new(g, grid)?.select_keypoint(patch))
}

/// Encodes `g` into ground-truth tensors: binary `p`, reciprocal binary
/// links from arc-step patch tracing, and one keypoint per road patch.
pub fn encode_psl(g: &RoadGraph, patch_size: u32) -> Result<PslTensors> {
    g.validate()?;
    let grid = PatchGrid::new(g.image_size, patch_size)?;
    let mut t = PslTensors::new(grid);
    let n2 = grid.num_patches();
    let mut first_sample: Vec<Option<Point>> = vec![None; n2];

    for e in &g.edges {
        let poly = g.edge_polyline(e);
        let mut prev: Option<usize> = None;
        for pt in sample_arc(&poly, SAMPLE_STEP) {
            let i = grid.patch_of_point(pt)?;
            if t.p[i] == 0.0 {
                t.p[i] = 1.0;
                first_sample[i] = Some(pt);
            }
            if let Some(a) = prev {
                if a != i {
                    let (ra, ca) = grid.row_col(a);
                    let (ri, ci) = grid.row_col(i);
                    let j = offset_index(ri as i32 - ra as i32, ci as i32 - ca as i32)
                        .expect("arc step below patch size keeps steps 8-adjacent");
                    t.l[8 * a + j] = 1.0;
                    t.l[8 * i + opposite(j)] = 1.0;
                }
            }
            prev = Some(i);
        }
    }

    let ctx = EncodeCtx::new(g, grid)?;
    let ps = grid.patch_size() as f64;
    for i in 0..n2 {
        if t.p[i] == 0.0 {
            continue;
        }
        let kp = match ctx.select_keypoint(i) {
            Some(choice) => choice.pos,
            // Road geometry touched the patch only degenerately (e.g. at the
            // exact shared corner); anchor to the sample that marked it.
            None => first_sample[i].expect("road patch has at least one sample"),
        };
        let o = grid.patch_origin(i);
        let sx = (((kp.x - o.x) / ps) as f32).clamp(0.0, MAX_OFFSET_FRAC);
        let sy = (((kp.y - o.y) / ps) as f32).clamp(0.0, MAX_OFFSET_FRAC);
        t.set_s(i, sx, sy);
    }
    Ok(t)
}

/// Decodes tensors into a graph in one pass: one node per road patch at its
/// keypoint, one edge per symmetrized link above threshold. Each unordered
/// patch pair is visited exactly once, so the result is independent of
/// traversal order.
pub fn decode_graph(t: &PslTensors, params: &DecodeParams) -> Result<RoadGraph> {
    params.validate()?;
    t.validate()?;
    let grid = t.grid();
    let n2 = grid.num_patches();

    let mut node_of_patch: Vec<Option<u32>> = vec![None; n2];
    let mut nodes = Vec::new();
    for i in 0..n2 {
        if t.p_at(i) > params.tau_p {
            let pos = t.keypoint_position(i);
            node_of_patch[i] = Some(nodes.len() as u32);
            nodes.push(Node {
                id: nodes.len() as u32,
                x: pos.x,
                y: pos.y,
                patch: Some(i as u32),
            });
        }
    }

    let mut edges = Vec::new();
    for i in 0..n2 {
        let Some(a) = node_of_patch[i] else { continue };
        // Directions 4..8 all point to higher patch indices, so each
        // unordered pair is considered exactly once.
        for j in 4..8 {
            let Some(k) = grid.neighbor(i, j) else {
                continue;
            };
            let Some(b) = node_of_patch[k] else { continue };
            let v = params
                .symmetrization
                .combine(t.l_at(i, j), t.l_at(k, opposite(j)));
            if v > params.tau_l {
                edges.push(Edge {
                    a,
                    b,
                    poly: None,
                });
            }
        }
    }

    let g = RoadGraph {
        image_size: grid.image_size(),
        width: RoadGraph::DEFAULT_WIDTH,
        nodes,
        edges,
    };
    debug_assert!(g.validate().is_ok());
    Ok(g)
}
