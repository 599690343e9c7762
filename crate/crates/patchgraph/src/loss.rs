//! Training objective over patch tensors and segmentation masks.
//!
//! All terms are pure `f64` functions of (prediction, target) pairs. Log
//! arguments are floored at `EPS`, so a prediction that matches its binary
//! target exactly contributes exactly zero — the loss of a perfect
//! prediction is 0.0, not a clamp artifact.

use crate::error::{Error, Result};
use crate::mask::SegMask;
use crate::psl::PslTensors;

/// Floor for log arguments and the dice smoothing constant.
pub const EPS: f64 = 1e-7;

/// Mixing weights for the graph-side terms.
#[derive(Debug, Clone, Copy)]
pub struct LossWeights {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights {
            alpha: 0.5,
            beta: 1.0,
            gamma: 1.0,
        }
    }
}

/// All loss terms of one (prediction, target) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    pub l_p: f64,
    pub l_s: f64,
    pub l_l: f64,
    pub l_seg: f64,
    /// `alpha * l_p + beta * l_s + gamma * l_l`.
    pub l_graph: f64,
    /// `l_seg + l_graph`.
    pub total: f64,
}

/// Binary cross-entropy of prediction `p` against target `y`.
#[inline]
fn bce(p: f64, y: f64) -> f64 {
    -(y * p.max(EPS).ln() + (1.0 - y) * (1.0 - p).max(EPS).ln())
}

fn check_grids(pred: &PslTensors, target: &PslTensors) -> Result<()> {
    if pred.grid() != target.grid() {
        return Err(Error::ShapeMismatch(format!(
            "prediction grid {}x{} vs target grid {}x{}",
            pred.grid().n(),
            pred.grid().n(),
            target.grid().n(),
            target.grid().n()
        )));
    }
    Ok(())
}

/// Road patches of the target: indices with `p > 0.5`.
fn road_patches(target: &PslTensors) -> Vec<usize> {
    (0..target.grid().num_patches())
        .filter(|&i| target.p_at(i) > 0.5)
        .collect()
}

/// Road-probability term: unnormalized BCE summed over every patch.
pub fn loss_p(pred: &PslTensors, target: &PslTensors) -> Result<f64> {
    check_grids(pred, target)?;
    Ok(pred
        .p()
        .iter()
        .zip(target.p())
        .map(|(&p, &y)| bce(p as f64, y as f64))
        .sum())
}

/// Keypoint-offset term: mean over target road patches of the summed
/// absolute offset error. Zero when the target has no road patches.
pub fn loss_s(pred: &PslTensors, target: &PslTensors) -> Result<f64> {
    check_grids(pred, target)?;
    let road = road_patches(target);
    if road.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = road
        .iter()
        .map(|&i| {
            let (px, py) = pred.s_at(i);
            let (tx, ty) = target.s_at(i);
            (px as f64 - tx as f64).abs() + (py as f64 - ty as f64).abs()
        })
        .sum();
    Ok(sum / road.len() as f64)
}

/// Link term: mean over target road patches of the BCE summed across the
/// eight directions. Zero when the target has no road patches.
pub fn loss_l(pred: &PslTensors, target: &PslTensors) -> Result<f64> {
    check_grids(pred, target)?;
    let road = road_patches(target);
    if road.is_empty() {
        return Ok(0.0);
    }
    let sum: f64 = road
        .iter()
        .map(|&i| {
            (0..8)
                .map(|j| bce(pred.l_at(i, j) as f64, target.l_at(i, j) as f64))
                .sum::<f64>()
        })
        .sum();
    Ok(sum / road.len() as f64)
}

/// Segmentation term: per-pixel mean BCE plus soft-dice loss
/// `1 - (2*sum(p*y) + EPS) / (sum(p) + sum(y) + EPS)`.
pub fn loss_seg(pred: &SegMask, target: &SegMask) -> Result<f64> {
    if (pred.width(), pred.height()) != (target.width(), target.height()) {
        return Err(Error::ShapeMismatch(format!(
            "prediction mask {}x{} vs target mask {}x{}",
            pred.width(),
            pred.height(),
            target.width(),
            target.height()
        )));
    }
    let n = pred.data().len() as f64;
    let mut bce_sum = 0.0;
    let mut inter = 0.0;
    let mut p_sum = 0.0;
    let mut y_sum = 0.0;
    for (&p, &y) in pred.data().iter().zip(target.data()) {
        let (p, y) = (p as f64, y as f64);
        bce_sum += bce(p, y);
        inter += p * y;
        p_sum += p;
        y_sum += y;
    }
    let dice = (2.0 * inter + EPS) / (p_sum + y_sum + EPS);
    Ok(bce_sum / n + (1.0 - dice))
}

/// Mixes precomputed terms into the full breakdown.
pub fn combine(l_p: f64, l_s: f64, l_l: f64, l_seg: f64, w: &LossWeights) -> LossBreakdown {
    let l_graph = w.alpha * l_p + w.beta * l_s + w.gamma * l_l;
    LossBreakdown {
        l_p,
        l_s,
        l_l,
        l_seg,
        l_graph,
        total: l_seg + l_graph,
    }
}

/// Computes every term of the joint objective.
pub fn loss_joint(
    pred: &PslTensors,
    target: &PslTensors,
    pred_mask: &SegMask,
    target_mask: &SegMask,
    w: &LossWeights,
) -> Result<LossBreakdown> {
    Ok(combine(
        loss_p(pred, target)?,
        loss_s(pred, target)?,
        loss_l(pred, target)?,
        loss_seg(pred_mask, target_mask)?,
        w,
    ))
}
