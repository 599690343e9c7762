//! Planar road graphs in pixel coordinates.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in pixel coordinates (x = column, y = row, origin top-left).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Graph node. `patch` carries the owning patch index on decoded graphs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Node {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patch: Option<u32>,
}

impl Node {
    pub fn pos(&self) -> Point {
        Point {
            x: self.x,
            y: self.y,
        }
    }
}

/// Undirected edge between nodes `a` and `b`.
///
/// `poly`, when present, is the full polyline from `a`'s position to `b`'s
/// position (both endpoints included); absent means a straight segment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<[f64; 2]>>,
}

/// Undirected planar graph of pixel-coordinate nodes and polyline edges.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RoadGraph {
    pub image_size: u32,
    pub width: f32,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl RoadGraph {
    /// Default rasterization stroke width in pixels.
    pub const DEFAULT_WIDTH: f32 = 15.0;

    pub fn empty(image_size: u32) -> Self {
        RoadGraph {
            image_size,
            width: Self::DEFAULT_WIDTH,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Polyline of `edge` including both endpoint positions.
    pub fn edge_polyline(&self, edge: &Edge) -> Vec<Point> {
        match &edge.poly {
            Some(poly) => poly.iter().map(|&[x, y]| Point { x, y }).collect(),
            None => vec![
                self.nodes[edge.a as usize].pos(),
                self.nodes[edge.b as usize].pos(),
            ],
        }
    }

    /// Sum of Euclidean polyline lengths over all edges.
    pub fn total_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| polyline_length(&self.edge_polyline(e)))
            .sum()
    }

    /// Node degrees indexed by node id.
    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.nodes.len()];
        for e in &self.edges {
            deg[e.a as usize] += 1;
            deg[e.b as usize] += 1;
        }
        deg
    }

    /// Adjacency lists indexed by node id.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.a as usize].push(e.b);
            adj[e.b as usize].push(e.a);
        }
        adj
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges
            .iter()
            .any(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// Checks the structural invariants: dense ids, no self-loops or
    /// duplicate edges, in-bounds coordinates, polylines anchored at their
    /// endpoint nodes.
    pub fn validate(&self) -> Result<()> {
        let size = self.image_size as f64;
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id as usize != i {
                return Err(Error::InvalidGraph(format!(
                    "node id {} at position {i}; ids must be dense 0..n-1",
                    node.id
                )));
            }
            if !(node.x >= 0.0 && node.x < size && node.y >= 0.0 && node.y < size) {
                return Err(Error::InvalidGraph(format!(
                    "node {} at ({}, {}) outside image of size {}",
                    node.id, node.x, node.y, self.image_size
                )));
            }
        }
        let mut seen = HashSet::new();
        for e in &self.edges {
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("self-loop at node {}", e.a)));
            }
            if e.a as usize >= self.nodes.len() || e.b as usize >= self.nodes.len() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) references missing node",
                    e.a, e.b
                )));
            }
            let key = (e.a.min(e.b), e.a.max(e.b));
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    key.0, key.1
                )));
            }
            if let Some(poly) = &e.poly {
                if poly.len() < 2 {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({}, {}) polyline has fewer than 2 points",
                        e.a, e.b
                    )));
                }
                for &[x, y] in poly {
                    if !(x >= 0.0 && x < size && y >= 0.0 && y < size) {
                        return Err(Error::InvalidGraph(format!(
                            "edge ({}, {}) polyline point ({x}, {y}) out of bounds",
                            e.a, e.b
                        )));
                    }
                }
                let a = self.nodes[e.a as usize].pos();
                let b = self.nodes[e.b as usize].pos();
                let first = Point::new(poly[0][0], poly[0][1]);
                let last = Point::new(poly[poly.len() - 1][0], poly[poly.len() - 1][1]);
                let anchored = (first.dist(a) == 0.0 && last.dist(b) == 0.0)
                    || (first.dist(b) == 0.0 && last.dist(a) == 0.0);
                if !anchored {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({}, {}) polyline does not start/end at its endpoint nodes",
                        e.a, e.b
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: RoadGraph = serde_json::from_str(s)?;
        g.validate()?;
        Ok(g)
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        let s = self.to_json()?;
        w.write_all(s.as_bytes())?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_json<R: Read>(mut r: R) -> Result<Self> {
        let mut s = String::new();
        r.read_to_string(&mut s)?;
        Self::from_json(&s)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_json(std::fs::File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_json(std::fs::File::open(path)?)
    }
}

/// Euclidean length of a polyline.
pub fn polyline_length(poly: &[Point]) -> f64 {
    poly.windows(2).map(|w| w[0].dist(w[1])).sum()
}
