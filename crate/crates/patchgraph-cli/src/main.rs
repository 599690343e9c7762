//! Command-line driver for the patch road-graph toolkit.
//!
//! Every subcommand reads and writes plain files (graphs as JSON, masks as
//! PGM, patch tensors in their binary format) and prints a small JSON
//! summary to stdout. Exit codes: 0 on success, 1 for usage errors, 2 for
//! data or I/O errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use patchgraph::grid::opposite;
use patchgraph::loss::{self, LossWeights};
use patchgraph::metrics::{eval_all, MetricParams};
use patchgraph::opt::{optimize, OptParams};
use patchgraph::psl::{decode_graph, encode_psl, DecodeParams, LinkSymmetrization};
use patchgraph::raster::rasterize_graph;
use patchgraph::skeleton::mask_to_graph;
use patchgraph::synth::{generate_network, perturb_psl, NoiseParams, SceneStyle, SynthParams};
use patchgraph::{PslTensors, RoadGraph, SegMask};

#[derive(Parser)]
#[command(
    name = "patchgraph",
    version,
    about = "Patch-grid road graph codec, optimizer, and evaluation tools"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a synthetic road network scene
    Synth(SynthCmd),
    /// Encode a graph into patch tensors
    Encode(EncodeCmd),
    /// Decode patch tensors into a graph
    Decode(DecodeCmd),
    /// Repair a decoded graph (reconnect endpoints, drop redundant cycles)
    Optimize(OptimizeCmd),
    /// Thin a mask and vectorize the skeleton into a graph
    Skeletonize(SkeletonizeCmd),
    /// Compare predicted tensors (and optionally masks) against targets
    Loss(LossCmd),
    /// Score a predicted graph against a target graph
    Eval(EvalCmd),
    /// Run whole synth-encode-decode-optimize-eval cycles
    Roundtrip(RoundtripCmd),
    /// Time decode and optimize across grid sizes
    Bench(BenchCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    /// Jittered lattice with a spanning tree plus extra edges
    Jittered,
    /// Poisson-disc samples joined by a proximity rule
    Proximity,
}

impl From<StyleArg> for SceneStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Jittered => SceneStyle::JitteredGrid,
            StyleArg::Proximity => SceneStyle::ProximityGraph,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SymArg {
    Mean,
    Min,
    Max,
}

impl From<SymArg> for LinkSymmetrization {
    fn from(s: SymArg) -> Self {
        match s {
            SymArg::Mean => LinkSymmetrization::Mean,
            SymArg::Min => LinkSymmetrization::Min,
            SymArg::Max => LinkSymmetrization::Max,
        }
    }
}

#[derive(Args, Clone, Copy)]
struct SceneArgs {
    /// Image side length in pixels
    #[arg(long, default_value_t = 1024)]
    size: u32,
    /// Patch side length in pixels
    #[arg(long, default_value_t = 16)]
    patch: u32,
    /// Minimum pairwise node distance in pixels
    #[arg(long, default_value_t = 48.0)]
    min_sep: f64,
    /// Stroke width carried on the generated graph
    #[arg(long, default_value_t = 15.0)]
    width: f32,
    /// Scene layout style
    #[arg(long, value_enum, default_value_t = StyleArg::Jittered)]
    style: StyleArg,
}

impl SceneArgs {
    fn params(&self) -> SynthParams {
        SynthParams {
            image_size: self.size,
            patch_size: self.patch,
            min_sep: self.min_sep,
            width: self.width,
            style: self.style.into(),
        }
    }
}

#[derive(Args)]
struct SynthCmd {
    #[command(flatten)]
    scene: SceneArgs,
    /// RNG seed
    #[arg(long)]
    seed: u64,
    /// Where to write the graph JSON
    #[arg(long)]
    out_graph: PathBuf,
    /// Also rasterize the stroked mask to this PGM file
    #[arg(long)]
    out_mask: Option<PathBuf>,
    /// Also encode patch tensors to this file
    #[arg(long)]
    out_psl: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeCmd {
    /// Input graph JSON
    #[arg(long)]
    graph: PathBuf,
    /// Patch side length in pixels
    #[arg(long, default_value_t = 16)]
    patch: u32,
    /// Output tensor file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DecodeCmd {
    /// Input tensor file
    #[arg(long)]
    psl: PathBuf,
    /// Road-patch probability threshold
    #[arg(long, default_value_t = 0.5)]
    tau_p: f32,
    /// Link probability threshold
    #[arg(long, default_value_t = 0.5)]
    tau_l: f32,
    /// How the two directed link probabilities merge
    #[arg(long, value_enum, default_value_t = SymArg::Mean)]
    symmetrize: SymArg,
    /// Output graph JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OptimizeCmd {
    /// Input graph JSON
    #[arg(long)]
    graph: PathBuf,
    /// Patch side length in pixels
    #[arg(long, default_value_t = 16)]
    patch: u32,
    /// Skip reconnecting endpoint pairs already this close (in hops)
    #[arg(long, default_value_t = 5)]
    hop_guard: u32,
    /// Cap on repair rounds
    #[arg(long, default_value_t = 32)]
    max_rounds: u32,
    /// Output graph JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SkeletonizeCmd {
    /// Input mask PGM
    #[arg(long)]
    mask: PathBuf,
    /// Output graph JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LossCmd {
    /// Predicted tensor file
    #[arg(long)]
    pred: PathBuf,
    /// Target tensor file
    #[arg(long)]
    target: PathBuf,
    /// Weight of the road-probability term
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Weight of the keypoint-offset term
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Weight of the link term
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Predicted segmentation mask (PGM); adds the segmentation term
    #[arg(long, requires = "target_mask")]
    pred_mask: Option<PathBuf>,
    /// Target segmentation mask (PGM)
    #[arg(long, requires = "pred_mask")]
    target_mask: Option<PathBuf>,
}

#[derive(Args, Clone, Copy)]
struct MetricArgs {
    /// Snap / match tolerance in pixels
    #[arg(long, default_value_t = 4.0)]
    buffer: f64,
    /// Spacing of injected path control points in pixels
    #[arg(long, default_value_t = 50.0)]
    inject: f64,
    /// Cap on scored control-point pairs per direction
    #[arg(long, default_value_t = 1000)]
    max_pairs: usize,
}

impl MetricArgs {
    fn params(&self, rng_seed: u64) -> MetricParams {
        MetricParams {
            buffer_px: self.buffer,
            inject_interval_px: self.inject,
            max_pairs: self.max_pairs,
            rng_seed,
        }
    }
}

#[derive(Args)]
struct EvalCmd {
    /// Predicted graph JSON
    #[arg(long)]
    pred: PathBuf,
    /// Target graph JSON
    #[arg(long)]
    target: PathBuf,
    #[command(flatten)]
    metric: MetricArgs,
    /// Seed for control-point pair subsampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RoundtripCmd {
    #[command(flatten)]
    scene: SceneArgs,
    /// Number of scenes; scene i uses seed + i
    #[arg(long, default_value_t = 8)]
    scenes: u64,
    /// Base RNG seed
    #[arg(long)]
    seed: u64,
    /// Logit-space noise on road probabilities
    #[arg(long, default_value_t = 0.0)]
    sigma_p: f32,
    /// Noise on keypoint offsets, in offset fraction units
    #[arg(long, default_value_t = 0.0)]
    sigma_s: f32,
    /// Probability of dropping each true link
    #[arg(long, default_value_t = 0.0)]
    p_drop: f64,
    /// Probability of adding a spurious link between road patches
    #[arg(long, default_value_t = 0.0)]
    p_add: f64,
    /// Road-patch probability threshold
    #[arg(long, default_value_t = 0.5)]
    tau_p: f32,
    /// Link probability threshold
    #[arg(long, default_value_t = 0.5)]
    tau_l: f32,
    /// Skip reconnecting endpoint pairs already this close (in hops)
    #[arg(long, default_value_t = 5)]
    hop_guard: u32,
    /// Decode only; skip the graph repair pass
    #[arg(long)]
    no_optimize: bool,
    #[command(flatten)]
    metric: MetricArgs,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct BenchCmd {
    /// Grid side lengths (in patches) to time
    #[arg(long, value_delimiter = ',', default_values_t = vec![64u32, 128, 256])]
    sizes: Vec<u32>,
    /// RNG seed for the benchmark scenes
    #[arg(long)]
    seed: u64,
    /// Patch side length in pixels
    #[arg(long, default_value_t = 16)]
    patch: u32,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                std::process::exit(1); // usage error
            }
            return; // --help / --version
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(2);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Synth(c) => synth(c),
        Cmd::Encode(c) => encode(c),
        Cmd::Decode(c) => decode(c),
        Cmd::Optimize(c) => do_optimize(c),
        Cmd::Skeletonize(c) => skeletonize(c),
        Cmd::Loss(c) => do_loss(c),
        Cmd::Eval(c) => eval(c),
        Cmd::Roundtrip(c) => roundtrip(c),
        Cmd::Bench(c) => bench(c),
    }
}

fn emit(v: serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&v)?);
    Ok(())
}

fn load_graph(path: &PathBuf) -> Result<RoadGraph> {
    RoadGraph::load(path).with_context(|| format!("reading graph {}", path.display()))
}

fn load_psl(path: &PathBuf) -> Result<PslTensors> {
    PslTensors::load(path).with_context(|| format!("reading tensors {}", path.display()))
}

fn load_mask(path: &PathBuf) -> Result<SegMask> {
    SegMask::load(path).with_context(|| format!("reading mask {}", path.display()))
}

fn synth(c: SynthCmd) -> Result<()> {
    let params = c.scene.params();
    let g = generate_network(&params, c.seed)?;
    g.save(&c.out_graph)
        .with_context(|| format!("writing {}", c.out_graph.display()))?;
    if let Some(path) = &c.out_mask {
        rasterize_graph(&g)
            .save(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &c.out_psl {
        encode_psl(&g, params.patch_size)?
            .save(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    emit(json!({
        "nodes": g.nodes.len(),
        "edges": g.edges.len(),
        "total_length": g.total_length(),
    }))
}

fn encode(c: EncodeCmd) -> Result<()> {
    let g = load_graph(&c.graph)?;
    let t = encode_psl(&g, c.patch)?;
    t.save(&c.out)
        .with_context(|| format!("writing {}", c.out.display()))?;
    let road = t.p().iter().filter(|&&p| p > 0.5).count();
    emit(json!({
        "patches": t.grid().num_patches(),
        "road_patches": road,
        "links": link_pairs(&t, 0.5).len(),
    }))
}

fn decode(c: DecodeCmd) -> Result<()> {
    let t = load_psl(&c.psl)?;
    let params = DecodeParams {
        tau_p: c.tau_p,
        tau_l: c.tau_l,
        symmetrization: c.symmetrize.into(),
    };
    let g = decode_graph(&t, &params)?;
    g.save(&c.out)
        .with_context(|| format!("writing {}", c.out.display()))?;
    emit(json!({"nodes": g.nodes.len(), "edges": g.edges.len()}))
}

fn do_optimize(c: OptimizeCmd) -> Result<()> {
    let g = load_graph(&c.graph)?;
    let params = OptParams {
        patch_size: c.patch,
        hop_guard: c.hop_guard,
        max_rounds: c.max_rounds,
    };
    let out = optimize(&g, &params)?;
    out.save(&c.out)
        .with_context(|| format!("writing {}", c.out.display()))?;
    emit(json!({
        "edges_before": g.edges.len(),
        "edges_after": out.edges.len(),
        "nodes": out.nodes.len(),
    }))
}

fn skeletonize(c: SkeletonizeCmd) -> Result<()> {
    let mask = load_mask(&c.mask)?;
    let g = mask_to_graph(&mask)?;
    g.save(&c.out)
        .with_context(|| format!("writing {}", c.out.display()))?;
    emit(json!({"nodes": g.nodes.len(), "edges": g.edges.len()}))
}

fn do_loss(c: LossCmd) -> Result<()> {
    let pred = load_psl(&c.pred)?;
    let target = load_psl(&c.target)?;
    let w = LossWeights {
        alpha: c.alpha,
        beta: c.beta,
        gamma: c.gamma,
    };
    let b = match (&c.pred_mask, &c.target_mask) {
        (Some(pm), Some(tm)) => {
            loss::loss_joint(&pred, &target, &load_mask(pm)?, &load_mask(tm)?, &w)?
        }
        _ => {
            let l_p = loss::loss_p(&pred, &target)?;
            let l_s = loss::loss_s(&pred, &target)?;
            let l_l = loss::loss_l(&pred, &target)?;
            loss::combine(l_p, l_s, l_l, 0.0, &w)
        }
    };
    emit(json!({
        "l_p": b.l_p,
        "l_s": b.l_s,
        "l_l": b.l_l,
        "l_seg": b.l_seg,
        "l_graph": b.l_graph,
        "total": b.total,
    }))
}

fn eval(c: EvalCmd) -> Result<()> {
    let pred = load_graph(&c.pred)?;
    let target = load_graph(&c.target)?;
    let report = eval_all(&pred, &target, &c.metric.params(c.seed))?;
    emit(serde_json::to_value(&report)?)
}

/// Unordered patch pairs whose stored link probability exceeds `tau`.
fn link_pairs(t: &PslTensors, tau: f32) -> BTreeSet<(u32, u32)> {
    let grid = t.grid();
    let mut out = BTreeSet::new();
    for i in 0..grid.num_patches() {
        for j in 4..8 {
            if let Some(k) = grid.neighbor(i, j) {
                if t.l_at(i, j) > tau && t.l_at(k, opposite(j)) > tau {
                    out.insert((i as u32, k as u32));
                }
            }
        }
    }
    out
}

/// Unordered patch pairs spanned by a decoded graph's edges.
fn edge_patch_pairs(g: &RoadGraph) -> Option<BTreeSet<(u32, u32)>> {
    let mut out = BTreeSet::new();
    for e in &g.edges {
        let a = g.nodes[e.a as usize].patch?;
        let b = g.nodes[e.b as usize].patch?;
        out.insert((a.min(b), a.max(b)));
    }
    Some(out)
}

fn roundtrip(c: RoundtripCmd) -> Result<()> {
    let scene_params = c.scene.params();
    let noise = NoiseParams {
        sigma_p: c.sigma_p,
        sigma_s: c.sigma_s,
        p_drop: c.p_drop,
        p_add: c.p_add,
    };
    let decode_params = DecodeParams {
        tau_p: c.tau_p,
        tau_l: c.tau_l,
        symmetrization: LinkSymmetrization::Mean,
    };
    let opt_params = OptParams {
        patch_size: scene_params.patch_size,
        hop_guard: c.hop_guard,
        max_rounds: 32,
    };

    let run_scene = |i: u64| -> Result<serde_json::Value> {
        let seed = c.seed + i;
        let gt = generate_network(&scene_params, seed)?;
        let encoded = encode_psl(&gt, scene_params.patch_size)?;
        let observed = perturb_psl(&encoded, &noise, seed)?;
        let mut rec = decode_graph(&observed, &decode_params)?;
        if !c.no_optimize {
            rec = optimize(&rec, &opt_params)?;
        }
        let report = eval_all(&rec, &gt, &c.metric.params(seed))?;
        let exact = edge_patch_pairs(&rec)
            .map(|pairs| pairs == link_pairs(&encoded, 0.5))
            .unwrap_or(false);
        Ok(json!({
            "seed": seed,
            "apls": report.apls,
            "f1": report.pf1.f1,
            "iou": report.iou,
            "exact_links": exact,
        }))
    };

    let indices: Vec<u64> = (0..c.scenes).collect();
    let per_scene: Vec<serde_json::Value> = match c.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .context("building worker pool")?
            .install(|| indices.par_iter().map(|&i| run_scene(i)).collect::<Result<_>>())?,
        None => indices
            .par_iter()
            .map(|&i| run_scene(i))
            .collect::<Result<_>>()?,
    };

    let apls: Vec<f64> = per_scene
        .iter()
        .map(|v| v["apls"].as_f64().unwrap_or(0.0))
        .collect();
    let f1: Vec<f64> = per_scene
        .iter()
        .map(|v| v["f1"].as_f64().unwrap_or(0.0))
        .collect();
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len().max(1) as f64;
    emit(json!({
        "scenes": c.scenes,
        "mean_apls": mean(&apls),
        "min_apls": apls.iter().copied().fold(f64::INFINITY, f64::min),
        "mean_f1": mean(&f1),
        "exact_scenes": per_scene.iter().filter(|v| v["exact_links"] == json!(true)).count(),
        "per_scene": per_scene,
    }))
}

fn bench(c: BenchCmd) -> Result<()> {
    let mut rows = Vec::new();
    for &n in &c.sizes {
        let params = SynthParams {
            image_size: n * c.patch,
            patch_size: c.patch,
            ..SynthParams::default()
        };
        let g = generate_network(&params, c.seed)?;
        let t = encode_psl(&g, c.patch)?;
        let start = Instant::now();
        let decoded = decode_graph(&t, &DecodeParams::default())?;
        let decode_ms = start.elapsed().as_secs_f64() * 1e3;
        let start = Instant::now();
        let optimized = optimize(&decoded, &OptParams::default())?;
        let optimize_ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push(json!({
            "grid": n,
            "patches": (n as u64) * (n as u64),
            "nodes": decoded.nodes.len(),
            "edges_after": optimized.edges.len(),
            "decode_ms": decode_ms,
            "optimize_ms": optimize_ms,
        }));
    }
    emit(serde_json::Value::Array(rows))
}
