//! Algebraic distances on hypergraphs.
//!
//! The hypergraph is replaced by its star expansion: a bipartite graph whose
//! nodes are the original vertices followed by one node per hyperedge. Random
//! coordinates on that graph are smoothed with Jacobi over-relaxation and
//! rescaled to `[-0.5, 0.5]` after every sweep. A hyperedge whose pins end up
//! close together is one whose vertices are similar, and it receives a large
//! algebraic weight.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Bipartite star expansion. Nodes `0..n_vertices` are the original vertices,
/// node `n_vertices + e` stands for hyperedge `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarExpansion {
    n_vertices: usize,
    n_edges: usize,
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    node_weights: Vec<f64>,
}

impl StarExpansion {
    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.n_edges
    }

    pub fn node_count(&self) -> usize {
        self.n_vertices + self.n_edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn node_weight(&self, node: usize) -> f64 {
        self.node_weights[node]
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn is_edge_node(&self, node: usize) -> bool {
        node >= self.n_vertices
    }

    /// Number of (undirected) star edges, i.e. the pin count.
    pub fn link_count(&self) -> usize {
        self.adjacency.len() / 2
    }
}

/// Builds the star expansion. Hyperedge node weights are `w(e) / |e|`.
pub fn star_expand(h: &Hypergraph) -> StarExpansion {
    let n = h.vertex_count();
    let m = h.edge_count();
    let mut offsets = Vec::with_capacity(n + m + 1);
    let mut adjacency = Vec::with_capacity(2 * h.pin_count());
    offsets.push(0);
    for v in 0..n {
        adjacency.extend(h.incident_edges(v).iter().map(|&e| n + e));
        offsets.push(adjacency.len());
    }
    for e in 0..m {
        adjacency.extend_from_slice(h.pins(e));
        offsets.push(adjacency.len());
    }
    let node_weights = h
        .vertex_weights()
        .iter()
        .copied()
        .chain((0..m).map(|e| h.edge_weight(e) / h.cardinality(e) as f64))
        .collect();
    StarExpansion {
        n_vertices: n,
        n_edges: m,
        offsets,
        adjacency,
        node_weights,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgdConfig {
    /// Relaxation factor, strictly inside (0, 1).
    pub omega: f64,
    /// Number of random initial vectors.
    pub num_random: usize,
    /// Sweeps per random vector.
    pub num_iter: usize,
    pub seed: u64,
    /// Lower clamp for hyperedge spreads before taking reciprocals.
    pub distance_floor: f64,
}

impl Default for AlgdConfig {
    fn default() -> Self {
        Self {
            omega: 0.5,
            num_random: 5,
            num_iter: 20,
            seed: 0,
            distance_floor: 1e-9,
        }
    }
}

impl AlgdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 1.0) {
            return Err(Error::Config(format!(
                "omega must lie strictly between 0 and 1, got {}",
                self.omega
            )));
        }
        if self.num_random == 0 {
            return Err(Error::Config(
                "at least one random vector is required".into(),
            ));
        }
        if !(self.distance_floor > 0.0 && self.distance_floor.is_finite()) {
            return Err(Error::Config("distance floor must be positive".into()));
        }
        Ok(())
    }
}

/// Relaxed value of a single node, reading only `prev`.
#[inline]
pub(crate) fn relax_node(g: &StarExpansion, prev: &[f64], omega: f64, node: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for &u in g.neighbors(node) {
        let w = g.node_weights[u];
        num += w * prev[u];
        den += w;
    }
    if den > 0.0 {
        omega * (num / den) + (1.0 - omega) * prev[node]
    } else {
        prev[node]
    }
}

/// One simultaneous JOR sweep: every node moves `omega` of the way towards
/// the weighted average of its neighbours. Nodes without weighted neighbours
/// keep their value.
pub fn jor_sweep_into(g: &StarExpansion, prev: &[f64], omega: f64, out: &mut [f64]) {
    assert_eq!(prev.len(), g.node_count());
    assert_eq!(out.len(), g.node_count());
    for (node, slot) in out.iter_mut().enumerate() {
        *slot = relax_node(g, prev, omega, node);
    }
}

pub fn jor_sweep(g: &StarExpansion, prev: &[f64], omega: f64) -> Vec<f64> {
    let mut out = vec![0.0; prev.len()];
    jor_sweep_into(g, prev, omega, &mut out);
    out
}

/// Affine map applied by [`rescale`]: `x -> alpha * x + beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescaling {
    pub alpha: f64,
    pub beta: f64,
    /// The row was constant (or empty) and was replaced by zeros.
    pub degenerate: bool,
}

/// Maps `x` affinely so that its minimum is -0.5 and its maximum 0.5.
/// A constant row becomes all zeros and is reported as degenerate with
/// `alpha = beta = 0`.
pub fn rescale(x: &mut [f64]) -> Rescaling {
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, r), &v| {
            (l.min(v), r.max(v))
        });
    let span = hi - lo;
    if !span.is_finite() || span <= 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Rescaling {
            alpha: 0.0,
            beta: 0.0,
            degenerate: true,
        };
    }
    for v in x.iter_mut() {
        *v = (*v - lo) / span - 0.5;
    }
    Rescaling {
        alpha: 1.0 / span,
        beta: -(hi + lo) / (2.0 * span),
        degenerate: false,
    }
}

/// Squared sine of the angle between two vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquaredSine {
    pub value: f64,
    /// One of the inputs had zero norm; `value` is then 1.
    pub degenerate: bool,
}

/// `1 - <a/|a|, b/|b|>^2`, clamped to `[0, 1]`.
pub fn iterate_angle(a: &[f64], b: &[f64]) -> SquaredSine {
    assert_eq!(a.len(), b.len());
    let na = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let nb = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return SquaredSine {
            value: 1.0,
            degenerate: true,
        };
    }
    let cos = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x / na) * (y / nb))
        .sum::<f64>();
    SquaredSine {
        value: (1.0 - cos * cos).clamp(0.0, 1.0),
        degenerate: false,
    }
}

/// What one relaxation step did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub alpha: f64,
    pub beta: f64,
    /// Squared sine between the iterate before and after this step.
    pub sq_sine: f64,
    pub degenerate: bool,
}

/// Iterative engine for a single coordinate vector: JOR sweep followed by
/// rescaling, repeated.
pub struct Relaxation<'g> {
    graph: &'g StarExpansion,
    omega: f64,
    current: Vec<f64>,
    scratch: Vec<f64>,
}

impl<'g> Relaxation<'g> {
    pub fn new(graph: &'g StarExpansion, omega: f64, start: Vec<f64>) -> Self {
        assert_eq!(start.len(), graph.node_count());
        let scratch = vec![0.0; start.len()];
        Self {
            graph,
            omega,
            current: start,
            scratch,
        }
    }

    /// Starts from coordinates drawn uniformly from `[-0.5, 0.5)`.
    pub fn random<R: Rng>(graph: &'g StarExpansion, omega: f64, rng: &mut R) -> Self {
        let start = (0..graph.node_count())
            .map(|_| rng.random_range(-0.5..0.5))
            .collect();
        Self::new(graph, omega, start)
    }

    pub fn current(&self) -> &[f64] {
        &self.current
    }

    pub fn into_current(self) -> Vec<f64> {
        self.current
    }

    pub fn step(&mut self) -> StepRecord {
        jor_sweep_into(self.graph, &self.current, self.omega, &mut self.scratch);
        let scaling = rescale(&mut self.scratch);
        let angle = iterate_angle(&self.current, &self.scratch);
        std::mem::swap(&mut self.current, &mut self.scratch);
        StepRecord {
            alpha: scaling.alpha,
            beta: scaling.beta,
            sq_sine: angle.value,
            degenerate: scaling.degenerate,
        }
    }
}

/// Per-vector history of the affine rescaling and the convergence proxy.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VectorTrace {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub sq_sine: Vec<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub vectors: Vec<VectorTrace>,
}

impl IterationTrace {
    pub fn any_degenerate(&self) -> bool {
        self.vectors.iter().any(|v| v.degenerate)
    }
}

/// `R x |V'|` coordinates, one row per random vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicCoordinates {
    pub rows: Vec<Vec<f64>>,
    pub iterations_run: usize,
}

impl AlgebraicCoordinates {
    pub fn num_random(&self) -> usize {
        self.rows.len()
    }
}

/// Random stream for vector `r`, independent of scheduling.
pub fn vector_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

/// Runs `num_iter` relaxation steps from `num_random` random starts.
/// Vectors are processed in parallel; each draws from its own stream derived
/// from `(cfg.seed, r)`.
pub fn compute_coordinates(
    g: &StarExpansion,
    cfg: &AlgdConfig,
) -> Result<(AlgebraicCoordinates, IterationTrace)> {
    cfg.validate()?;
    let runs: Vec<(Vec<f64>, VectorTrace)> = (0..cfg.num_random)
        .into_par_iter()
        .map(|r| {
            let mut rng = vector_rng(cfg.seed, r);
            let mut relax = Relaxation::random(g, cfg.omega, &mut rng);
            let mut trace = VectorTrace::default();
            for _ in 0..cfg.num_iter {
                let rec = relax.step();
                trace.alpha.push(rec.alpha);
                trace.beta.push(rec.beta);
                trace.sq_sine.push(rec.sq_sine);
                trace.degenerate |= rec.degenerate;
            }
            (relax.into_current(), trace)
        })
        .collect();
    let (rows, vectors) = runs.into_iter().unzip();
    Ok((
        AlgebraicCoordinates {
            rows,
            iterations_run: cfg.num_iter,
        },
        IterationTrace { vectors },
    ))
}

/// `1 / max(floor, widest coordinate spread inside e over all vectors)`.
pub fn algebraic_weights(h: &Hypergraph, coords: &AlgebraicCoordinates, floor: f64) -> Vec<f64> {
    (0..h.edge_count())
        .map(|e| {
            let pins = h.pins(e);
            let spread = coords
                .rows
                .iter()
                .map(|x| {
                    let (lo, hi) = pins
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, r), &v| {
                            (l.min(x[v]), r.max(x[v]))
                        });
                    hi - lo
                })
                .fold(0.0, f64::max);
            1.0 / spread.max(floor)
        })
        .collect()
}

/// Original weights scaled by each edge's algebraic weight relative to the
/// mean algebraic weight.
pub fn scaled_weights(h: &Hypergraph, alg: &[f64]) -> Result<Vec<f64>> {
    if h.edge_count() == 0 {
        return Err(Error::Validation(
            "cannot scale weights of a hypergraph without hyperedges".into(),
        ));
    }
    if alg.len() != h.edge_count() {
        return Err(Error::WeightCount {
            kind: "algebraic",
            expected: h.edge_count(),
            got: alg.len(),
        });
    }
    if let Some(index) = alg.iter().position(|&a| !(a > 0.0 && a.is_finite())) {
        return Err(Error::InvalidWeight {
            kind: "algebraic",
            index,
            value: alg[index],
        });
    }
    let mean = alg.iter().sum::<f64>() / alg.len() as f64;
    Ok(h.edge_weights()
        .iter()
        .zip(alg)
        .map(|(&w, &a)| w * (a / mean))
        .collect())
}

/// Steps 1 to 3 in one call: star expansion, coordinates, and the scaled
/// hyperedge weights handed to matching.
pub fn reweight(h: &Hypergraph, cfg: &AlgdConfig) -> Result<Vec<f64>> {
    let g = star_expand(h);
    let (coords, _) = compute_coordinates(&g, cfg)?;
    let alg = algebraic_weights(h, &coords, cfg.distance_floor);
    scaled_weights(h, &alg)
}
