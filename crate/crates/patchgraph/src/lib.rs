//! Patch-wise road-graph codec and evaluation toolkit.
//!
//! A road network over a raster image is represented per grid patch by three
//! tensors: a road probability `P`, a keypoint offset `S` relative to the
//! patch origin, and eight link probabilities `L` toward the adjacent
//! patches. This crate provides:
//!
//! - lossless ground-truth encoding of vector road graphs into `P`/`S`/`L`
//!   tensors and single-pass decoding back into graphs ([`psl`]),
//! - graph refinement passes that reconnect broken endpoints and dissolve
//!   spurious triangle/quadrilateral links ([`opt`]),
//! - the joint training objective as pure functions ([`loss`]),
//! - evaluation metrics: APLS, buffer-relaxed pixel F1, IoU ([`metrics`]),
//! - a segmentation-style baseline via morphological thinning and
//!   vectorization ([`skeleton`]),
//! - a deterministic synthetic scene generator and prediction-noise model
//!   ([`synth`]).
//!
//! All operations are pure functions on immutable values; everything is
//! deterministic given explicit seeds.

pub mod error;
pub mod geom;
pub mod graph;
pub mod grid;
pub mod loss;
pub mod mask;
pub mod metrics;
pub mod opt;
pub mod psl;
pub mod raster;
pub mod skeleton;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{Edge, Node, Point, RoadGraph};
pub use grid::PatchGrid;
pub use mask::SegMask;
pub use psl::{DecodeParams, LinkSymmetrization, PslTensors};
