//! Initial bisection, projection, and Fiduccia-Mattheyses refinement.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coarsen::CoarseningLevel;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partition::{hyperedge_cut, part_weights, Partition};

#[derive(Debug, Clone, PartialEq)]
pub struct RefineConfig {
    /// Allowed ratio of the heaviest part to the average part, e.g. 1.05.
    pub max_imbalance: f64,
    pub fm_passes: usize,
    pub initial_trials: usize,
    pub seed: u64,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            max_imbalance: 1.05,
            fm_passes: 10,
            initial_trials: 10,
            seed: 0,
        }
    }
}

impl RefineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_imbalance > 1.0 && self.max_imbalance.is_finite()) {
            return Err(Error::Config(format!(
                "max imbalance must be finite and greater than 1, got {}",
                self.max_imbalance
            )));
        }
        if self.initial_trials == 0 {
            return Err(Error::Config(
                "at least one initial trial is required".into(),
            ));
        }
        Ok(())
    }
}

/// Maximum weight each side of a bisection may carry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacities(pub [f64; 2]);

impl Capacities {
    /// Side 0 targets `fraction` of the total weight, side 1 the rest; each
    /// may exceed its target by the factor `tolerance`.
    pub fn proportional(total: f64, fraction: f64, tolerance: f64) -> Self {
        Self([
            total * fraction * tolerance,
            total * (1.0 - fraction) * tolerance,
        ])
    }

    pub fn balanced(total: f64, tolerance: f64) -> Self {
        Self::proportional(total, 0.5, tolerance)
    }

    /// Largest load-to-capacity ratio; at most 1 when the bisection fits.
    pub fn overload(&self, loads: [f64; 2]) -> f64 {
        let ratio = |load: f64, cap: f64| {
            if load <= 0.0 {
                0.0
            } else if cap <= 0.0 {
                f64::INFINITY
            } else {
                load / cap
            }
        };
        ratio(loads[0], self.0[0]).max(ratio(loads[1], self.0[1]))
    }
}

const FEASIBLE_EPS: f64 = 1e-12;

fn loads(h: &Hypergraph, parts: &[usize]) -> [f64; 2] {
    let w = part_weights(h, parts, 2);
    [w[0], w[1]]
}

/// Priority key: larger gain first, then smaller vertex id.
#[derive(Debug, Clone, Copy)]
struct Key {
    gain: f64,
    vertex: usize,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .gain
            .total_cmp(&self.gain)
            .then(self.vertex.cmp(&other.vertex))
    }
}

/// A move executed during a pass, with the gain it was chosen for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Move {
    pub vertex: usize,
    pub gain: f64,
}

struct PassState<'a> {
    h: &'a Hypergraph,
    side: &'a mut [usize],
    count: Vec<[usize; 2]>,
    gain: Vec<f64>,
    locked: Vec<bool>,
    queue: [BTreeSet<Key>; 2],
}

impl<'a> PassState<'a> {
    fn new(h: &'a Hypergraph, side: &'a mut [usize]) -> Self {
        let mut count = vec![[0usize; 2]; h.edge_count()];
        for (e, c) in count.iter_mut().enumerate() {
            for &v in h.pins(e) {
                c[side[v]] += 1;
            }
        }
        let mut gain = vec![0.0; h.vertex_count()];
        for (v, g) in gain.iter_mut().enumerate() {
            let from = side[v];
            for &e in h.incident_edges(v) {
                let w = h.edge_weight(e);
                if count[e][from] == 1 {
                    *g += w;
                }
                if count[e][1 - from] == 0 {
                    *g -= w;
                }
            }
        }
        let mut queue = [BTreeSet::new(), BTreeSet::new()];
        for (v, &g) in gain.iter().enumerate() {
            queue[side[v]].insert(Key { gain: g, vertex: v });
        }
        Self {
            h,
            side,
            count,
            gain,
            locked: vec![false; h.vertex_count()],
            queue,
        }
    }

    fn adjust(&mut self, v: usize, delta: f64) {
        if self.locked[v] {
            return;
        }
        let q = &mut self.queue[self.side[v]];
        q.remove(&Key {
            gain: self.gain[v],
            vertex: v,
        });
        self.gain[v] += delta;
        q.insert(Key {
            gain: self.gain[v],
            vertex: v,
        });
    }

    /// Moves `v` to the other side, locks it, and updates neighbour gains.
    fn apply(&mut self, v: usize) {
        let from = self.side[v];
        let to = 1 - from;
        self.queue[from].remove(&Key {
            gain: self.gain[v],
            vertex: v,
        });
        self.locked[v] = true;
        let h = self.h;
        for &e in h.incident_edges(v) {
            let w = h.edge_weight(e);
            let pins = h.pins(e);
            if self.count[e][to] == 0 {
                for &u in pins {
                    if u != v {
                        self.adjust(u, w);
                    }
                }
            } else if self.count[e][to] == 1 {
                if let Some(&u) = pins.iter().find(|&&u| u != v && self.side[u] == to) {
                    self.adjust(u, -w);
                }
            }
            self.count[e][from] -= 1;
            self.count[e][to] += 1;
            if self.count[e][from] == 0 {
                for &u in pins {
                    if u != v {
                        self.adjust(u, -w);
                    }
                }
            } else if self.count[e][from] == 1 {
                if let Some(&u) = pins.iter().find(|&&u| u != v && self.side[u] == from) {
                    self.adjust(u, w);
                }
            }
        }
        self.side[v] = to;
    }
}

/// One FM pass. Returns the number of moves kept after rolling back to the
/// best prefix.
///
/// Moves may overshoot a capacity by at most one maximum vertex weight so
/// that pairs of moves can act as swaps, but only prefixes whose overload is
/// within `max(1, starting overload)` are eligible as the result.
fn fm_pass(
    h: &Hypergraph,
    side: &mut [usize],
    caps: &Capacities,
    mut log: Option<&mut Vec<Move>>,
) -> usize {
    let max_vertex_weight = h.vertex_weights().iter().copied().fold(0.0, f64::max);
    let mut load = loads(h, side);
    let start_overload = caps.overload(load);
    let accept_limit = start_overload.max(1.0) + FEASIBLE_EPS;

    let mut state = PassState::new(h, side);
    let mut moves: Vec<usize> = Vec::new();
    let mut cut_delta = 0.0;
    let mut best = (0.0f64, start_overload, 0usize);

    loop {
        let mut pick: Option<Key> = None;
        for from in 0..2 {
            let to = 1 - from;
            let room = caps.0[to] + max_vertex_weight - load[to];
            let found = state.queue[from]
                .iter()
                .find(|k| h.vertex_weight(k.vertex) <= room + FEASIBLE_EPS)
                .copied();
            if let Some(k) = found {
                if pick.is_none_or(|p| k < p) {
                    pick = Some(k);
                }
            }
        }
        let Some(Key { gain, vertex }) = pick else {
            break;
        };
        let from = state.side[vertex];
        let w = h.vertex_weight(vertex);
        state.apply(vertex);
        load[from] -= w;
        load[1 - from] += w;
        moves.push(vertex);
        if let Some(log) = log.as_deref_mut() {
            log.push(Move { vertex, gain });
        }
        cut_delta -= gain;

        let overload = caps.overload(load);
        if overload <= accept_limit {
            let tol = 1e-12 * (1.0 + cut_delta.abs());
            let improves = cut_delta < best.0 - tol
                || (cut_delta <= best.0 + tol && overload < best.1 - FEASIBLE_EPS);
            if improves {
                best = (cut_delta, overload, moves.len());
            }
        }
    }

    let kept = best.2;
    for &v in &moves[kept..] {
        state.side[v] = 1 - state.side[v];
    }
    if let Some(log) = log {
        log.truncate(log.len() - (moves.len() - kept));
    }
    kept
}

/// Runs FM passes until a pass keeps no move or `max_passes` is reached.
/// Returns the final cut. The cut never increases, and the overload never
/// exceeds `max(1, starting overload)`.
pub fn fm_refine(h: &Hypergraph, side: &mut [usize], caps: &Capacities, max_passes: usize) -> f64 {
    assert_eq!(side.len(), h.vertex_count());
    assert!(side.iter().all(|&s| s < 2), "fm_refine expects a bisection");
    for _ in 0..max_passes {
        if fm_pass(h, side, caps, None) == 0 {
            break;
        }
    }
    hyperedge_cut(h, side, 2).expect("validated bisection")
}

/// [`fm_refine`] on a balanced bisection stored as a [`Partition`].
pub fn fm_refine_partition(h: &Hypergraph, p: &Partition, cfg: &RefineConfig) -> Result<Partition> {
    cfg.validate()?;
    if p.k() != 2 {
        return Err(Error::Validation("FM refinement needs a bisection".into()));
    }
    let mut side = p.parts().to_vec();
    let caps = Capacities::balanced(h.total_vertex_weight(), cfg.max_imbalance);
    fm_refine(h, &mut side, &caps, cfg.fm_passes);
    Partition::new(h, side, 2)
}

/// Greedily moves vertices out of overloaded sides, cheapest first, until
/// the bisection fits or no move reduces the overload.
fn rebalance(h: &Hypergraph, side: &mut [usize], caps: &Capacities) {
    let mut load = loads(h, side);
    loop {
        let current = caps.overload(load);
        if current <= 1.0 + FEASIBLE_EPS {
            return;
        }
        let from = if load[0] / caps.0[0].max(f64::MIN_POSITIVE)
            >= load[1] / caps.0[1].max(f64::MIN_POSITIVE)
        {
            0
        } else {
            1
        };
        let mut best: Option<(f64, usize)> = None;
        for v in (0..h.vertex_count()).filter(|&v| side[v] == from) {
            let w = h.vertex_weight(v);
            let mut after = load;
            after[from] -= w;
            after[1 - from] += w;
            if caps.overload(after) >= current {
                continue;
            }
            let mut cost = 0.0;
            for &e in h.incident_edges(v) {
                let pins = h.pins(e);
                let others_here = pins.iter().any(|&u| u != v && side[u] == from);
                let others_there = pins.iter().any(|&u| side[u] != from);
                if others_here && !others_there {
                    cost += h.edge_weight(e);
                } else if !others_here && others_there {
                    cost -= h.edge_weight(e);
                }
            }
            if best.is_none_or(|(c, _)| cost < c) {
                best = Some((cost, v));
            }
        }
        let Some((_, v)) = best else { return };
        let w = h.vertex_weight(v);
        side[v] = 1 - from;
        load[from] -= w;
        load[1 - from] += w;
    }
}

/// Outcome of bisecting the coarsest hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialBisection {
    pub side: Vec<usize>,
    pub cut: f64,
    /// Whether both sides fit their capacities.
    pub feasible: bool,
}

/// Best of `cfg.initial_trials` randomized greedy assignments, each refined
/// with FM. Infeasibility is reported, not treated as an error.
pub fn initial_partition<R: Rng>(
    h: &Hypergraph,
    caps: &Capacities,
    cfg: &RefineConfig,
    rng: &mut R,
) -> InitialBisection {
    let n = h.vertex_count();
    let mut best: Option<(InitialBisection, f64)> = None;
    for _ in 0..cfg.initial_trials.max(1) {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        order.sort_by(|&a, &b| h.vertex_weight(b).total_cmp(&h.vertex_weight(a)));

        let mut side = vec![0usize; n];
        let mut load = [0.0f64; 2];
        for &v in &order {
            let w = h.vertex_weight(v);
            let fill = |s: usize| (load[s] + w) / caps.0[s].max(f64::MIN_POSITIVE);
            let s = match fill(0).total_cmp(&fill(1)) {
                Ordering::Less => 0,
                Ordering::Greater => 1,
                Ordering::Equal => rng.random_range(0..2),
            };
            side[v] = s;
            load[s] += w;
        }
        rebalance(h, &mut side, caps);
        let cut = fm_refine(h, &mut side, caps, cfg.fm_passes);
        let overload = caps.overload(loads(h, &side));
        let feasible = overload <= 1.0 + FEASIBLE_EPS;
        let better = match &best {
            None => true,
            Some((b, b_over)) => feasible
                .cmp(&b.feasible)
                .then(b.cut.total_cmp(&cut))
                .then(b_over.total_cmp(&overload))
                .is_gt(),
        };
        if better {
            best = Some((
                InitialBisection {
                    side,
                    cut,
                    feasible,
                },
                overload,
            ));
        }
    }
    best.expect("at least one trial").0
}

/// Interpolates a coarse assignment onto the fine vertices of `level`.
pub fn project(coarse_parts: &[usize], level: &CoarseningLevel) -> Vec<usize> {
    assert_eq!(coarse_parts.len(), level.coarse.vertex_count());
    level.map.iter().map(|&c| coarse_parts[c]).collect()
}
