//! The V-cycle: coarsen, bisect the coarsest hypergraph, then project and
//! refine level by level. k-way partitions come from recursive bisection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algdist::AlgdConfig;
use crate::coarsen::{coarsen_level, CoarsenConfig, CoarseningLevel, CoarseningMode};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::partition::{hyperedge_cut, Partition};
use crate::refine::{fm_refine, initial_partition, project, Capacities, RefineConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionConfig {
    pub k: usize,
    pub max_imbalance: f64,
    pub mode: CoarseningMode,
    pub algd: AlgdConfig,
    pub fm_passes: usize,
    pub initial_trials: usize,
    /// Stop coarsening at this many vertices. `None` means `max(100, 10 k)`.
    pub coarsest_size: Option<usize>,
    /// A level shrinking the vertex count by less than this fraction ends
    /// coarsening.
    pub min_reduction: f64,
    pub seed: u64,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        let refine = RefineConfig::default();
        Self {
            k: 2,
            max_imbalance: refine.max_imbalance,
            mode: CoarseningMode::Algebraic,
            algd: AlgdConfig::default(),
            fm_passes: refine.fm_passes,
            initial_trials: refine.initial_trials,
            coarsest_size: None,
            min_reduction: 0.1,
            seed: 0,
        }
    }
}

impl PartitionConfig {
    pub fn coarsest_size(&self) -> usize {
        self.coarsest_size.unwrap_or_else(|| (10 * self.k).max(100))
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.coarsest_size() < 2 {
            return Err(Error::Config("coarsest size must be at least 2".into()));
        }
        if !(self.min_reduction > 0.0 && self.min_reduction < 1.0) {
            return Err(Error::Config(format!(
                "min reduction must lie strictly between 0 and 1, got {}",
                self.min_reduction
            )));
        }
        self.refine_config(self.max_imbalance).validate()?;
        if self.mode == CoarseningMode::Algebraic {
            self.algd.validate()?;
        }
        Ok(())
    }

    fn refine_config(&self, max_imbalance: f64) -> RefineConfig {
        RefineConfig {
            max_imbalance,
            fm_passes: self.fm_passes,
            initial_trials: self.initial_trials,
            seed: self.seed,
        }
    }
}

/// Coarsening levels from fine to coarse.
#[derive(Debug, Clone)]
pub struct Hierarchy<'a> {
    pub finest: &'a Hypergraph,
    pub levels: Vec<CoarseningLevel>,
}

impl Hierarchy<'_> {
    pub fn coarsest(&self) -> &Hypergraph {
        self.levels.last().map_or(self.finest, |l| &l.coarse)
    }

    /// Hypergraph that level `i` was built from.
    pub fn fine_of(&self, i: usize) -> &Hypergraph {
        if i == 0 {
            self.finest
        } else {
            &self.levels[i - 1].coarse
        }
    }
}

/// Coarsens until the vertex count drops to `coarsest_size` or a level stalls.
/// Re-weighting, when enabled, is recomputed on every level.
pub fn build_hierarchy<'a, R: Rng>(
    h: &'a Hypergraph,
    cfg: &CoarsenConfig,
    coarsest_size: usize,
    min_reduction: f64,
    rng: &mut R,
) -> Result<Hierarchy<'a>> {
    let mut levels: Vec<CoarseningLevel> = Vec::new();
    loop {
        let current = levels.last().map_or(h, |l| &l.coarse);
        let n = current.vertex_count();
        if n <= coarsest_size {
            break;
        }
        let level = coarsen_level(current, cfg, levels.len(), rng)?;
        let coarse_n = level.coarse.vertex_count();
        if coarse_n >= n {
            break;
        }
        let stalled = (coarse_n as f64) > (1.0 - min_reduction) * n as f64;
        levels.push(level);
        if stalled {
            break;
        }
    }
    Ok(Hierarchy { finest: h, levels })
}

/// Cuts observed while uncoarsening one level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelStep {
    pub level: usize,
    pub coarse_cut: f64,
    pub projected_cut: f64,
    pub refined_cut: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectionOutcome {
    pub side: Vec<usize>,
    pub cut: f64,
    pub feasible: bool,
    pub levels: usize,
    pub initial_cut: f64,
    pub steps: Vec<LevelStep>,
}

/// Multilevel bisection with side 0 targeting `fraction` of the weight.
pub fn bisect<R: Rng>(
    h: &Hypergraph,
    fraction: f64,
    tolerance: f64,
    cfg: &PartitionConfig,
    rng: &mut R,
) -> Result<BisectionOutcome> {
    let total = h.total_vertex_weight();
    let caps = Capacities::proportional(total, fraction, tolerance);
    let coarsen_cfg = CoarsenConfig {
        mode: cfg.mode,
        algd: cfg.algd.clone(),
        max_cluster_weight: total * fraction.min(1.0 - fraction) / tolerance,
    };
    let hierarchy = build_hierarchy(h, &coarsen_cfg, cfg.coarsest_size(), cfg.min_reduction, rng)?;

    let refine_cfg = cfg.refine_config(tolerance);
    let init = initial_partition(hierarchy.coarsest(), &caps, &refine_cfg, rng);
    let mut side = init.side;
    let mut cut = init.cut;
    let mut steps = Vec::with_capacity(hierarchy.levels.len());
    for (i, level) in hierarchy.levels.iter().enumerate().rev() {
        let fine = hierarchy.fine_of(i);
        let mut projected = project(&side, level);
        let projected_cut = hyperedge_cut(fine, &projected, 2)?;
        let refined_cut = fm_refine(fine, &mut projected, &caps, cfg.fm_passes);
        steps.push(LevelStep {
            level: i,
            coarse_cut: cut,
            projected_cut,
            refined_cut,
        });
        side = projected;
        cut = refined_cut;
    }
    let feasible = caps.overload(side_loads(h, &side)) <= 1.0 + 1e-12;
    Ok(BisectionOutcome {
        side,
        cut,
        feasible,
        levels: hierarchy.levels.len(),
        initial_cut: init.cut,
        steps,
    })
}

fn side_loads(h: &Hypergraph, side: &[usize]) -> [f64; 2] {
    let mut loads = [0.0; 2];
    for (v, &s) in side.iter().enumerate() {
        loads[s] += h.vertex_weight(v);
    }
    loads
}

/// Balanced multilevel bisection.
pub fn bipartition(h: &Hypergraph, cfg: &PartitionConfig) -> Result<PartitionResult> {
    partition(
        h,
        &PartitionConfig {
            k: 2,
            ..cfg.clone()
        },
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionResult {
    pub partition: Partition,
    /// Final imbalance is within `max_imbalance`.
    pub feasible: bool,
    /// Deepest hierarchy built by any bisection.
    pub levels: usize,
    /// Uncoarsening steps of every bisection, in execution order.
    pub steps: Vec<LevelStep>,
}

/// k-way partition by recursive multilevel bisection.
///
/// Part counts split as `ceil(k/2)` and `floor(k/2)` with proportional
/// weight targets. Each bisection gets tolerance `max_imbalance^(1/d)`,
/// where `d` is the number of bisection levels still ahead, so the
/// compounded imbalance cannot exceed `max_imbalance`.
pub fn partition(h: &Hypergraph, cfg: &PartitionConfig) -> Result<PartitionResult> {
    cfg.validate()?;
    let n = h.vertex_count();
    if cfg.k > n {
        return Err(Error::Validation(format!(
            "cannot split {n} vertices into {} parts",
            cfg.k
        )));
    }
    if h.total_vertex_weight() <= 0.0 {
        return Err(Error::Validation(
            "hypergraph has zero total vertex weight".into(),
        ));
    }
    if cfg.k == 1 {
        return Ok(PartitionResult {
            partition: Partition::trivial(h)?,
            feasible: true,
            levels: 0,
            steps: Vec::new(),
        });
    }

    let mut parts = vec![0usize; n];
    let mut acc = Accumulator::default();
    let vertices: Vec<usize> = (0..n).collect();
    recurse(h, &vertices, cfg.k, 0, 1, cfg, &mut parts, &mut acc)?;

    let partition = Partition::new(h, parts, cfg.k)?;
    let feasible = partition.imbalance() <= cfg.max_imbalance * (1.0 + 1e-12);
    Ok(PartitionResult {
        partition,
        feasible,
        levels: acc.levels,
        steps: acc.steps,
    })
}

#[derive(Default)]
struct Accumulator {
    levels: usize,
    steps: Vec<LevelStep>,
}

fn bisection_depth(k: usize) -> u32 {
    usize::BITS - (k - 1).leading_zeros()
}

/// `path` numbers the recursion tree (root 1, children 2p and 2p+1) and
/// seeds each subproblem independently of execution order.
#[allow(clippy::too_many_arguments)]
fn recurse(
    h: &Hypergraph,
    vertices: &[usize],
    k: usize,
    first_part: usize,
    path: u64,
    cfg: &PartitionConfig,
    parts: &mut [usize],
    acc: &mut Accumulator,
) -> Result<()> {
    if k == 1 {
        for &v in vertices {
            parts[v] = first_part;
        }
        return Ok(());
    }
    let sub = if vertices.len() == h.vertex_count() {
        None
    } else {
        Some(h.induced(vertices))
    };
    let local = sub.as_ref().unwrap_or(h);

    let k0 = k.div_ceil(2);
    let k1 = k / 2;
    let tolerance = cfg.max_imbalance.powf(1.0 / f64::from(bisection_depth(k)));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(path);
    let out = bisect(local, k0 as f64 / k as f64, tolerance, cfg, &mut rng)?;
    acc.levels = acc.levels.max(out.levels);
    acc.steps.extend_from_slice(&out.steps);

    let mut left = Vec::new();
    let mut right = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        if out.side[i] == 0 {
            left.push(v);
        } else {
            right.push(v);
        }
    }
    recurse(h, &left, k0, first_part, 2 * path, cfg, parts, acc)?;
    recurse(
        h,
        &right,
        k1,
        first_part + k0,
        2 * path + 1,
        cfg,
        parts,
        acc,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn chain(n: usize) -> Hypergraph {
        let edges: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        Hypergraph::unweighted(n, &edges).unwrap()
    }

    fn plain_cfg(k: usize) -> CoarsenConfig {
        CoarsenConfig {
            mode: CoarseningMode::Plain,
            algd: AlgdConfig::default(),
            max_cluster_weight: 64.0 / (k as f64 * 1.05),
        }
    }

    #[test]
    fn small_input_has_no_levels() {
        let h = chain(10);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let hier = build_hierarchy(&h, &plain_cfg(2), 10, 0.1, &mut rng).unwrap();
        assert!(hier.levels.is_empty());
    }

    #[test]
    fn chain_hierarchy_shrinks() {
        let h = chain(64);
        for mode in [CoarseningMode::Plain, CoarseningMode::Algebraic] {
            let cfg = CoarsenConfig {
                mode,
                ..plain_cfg(2)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let hier = build_hierarchy(&h, &cfg, 8, 0.1, &mut rng).unwrap();
            assert!(
                hier.levels.len() >= 3,
                "{mode:?}: {} levels",
                hier.levels.len()
            );
            let mut prev = 64;
            for level in &hier.levels {
                assert!(level.coarse.vertex_count() < prev);
                prev = level.coarse.vertex_count();
            }
        }
    }

    #[test]
    fn edgeless_input_stalls() {
        let h = Hypergraph::unweighted(200, &[] as &[Vec<usize>]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let hier = build_hierarchy(&h, &plain_cfg(2), 10, 0.1, &mut rng).unwrap();
        assert!(hier.levels.is_empty());
    }

    #[test]
    fn depth() {
        assert_eq!(bisection_depth(2), 1);
        assert_eq!(bisection_depth(3), 2);
        assert_eq!(bisection_depth(4), 2);
        assert_eq!(bisection_depth(5), 3);
    }

    #[test]
    fn k_one_is_trivial() {
        let h = chain(5);
        let cfg = PartitionConfig {
            k: 1,
            ..PartitionConfig::default()
        };
        let r = partition(&h, &cfg).unwrap();
        assert_eq!(r.partition.cut(), 0.0);
        assert_eq!(r.partition.imbalance(), 1.0);
    }

    #[test]
    fn too_many_parts_is_error() {
        let h = chain(3);
        let cfg = PartitionConfig {
            k: 4,
            ..PartitionConfig::default()
        };
        assert!(matches!(partition(&h, &cfg), Err(Error::Validation(_))));
        let cfg = PartitionConfig {
            k: 0,
            ..PartitionConfig::default()
        };
        assert!(matches!(partition(&h, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn single_spanning_edge_is_always_cut() {
        let h = Hypergraph::new(&[(0..6).collect::<Vec<_>>()], vec![1.0; 6], vec![2.5]).unwrap();
        let r = bipartition(&h, &PartitionConfig::default()).unwrap();
        assert_eq!(r.partition.cut(), 2.5);
        assert!(r.feasible);
    }

    #[test]
    fn three_way_respects_caps() {
        let h = chain(9);
        let cfg = PartitionConfig {
            k: 3,
            ..PartitionConfig::default()
        };
        let r = partition(&h, &cfg).unwrap();
        let mut sizes = [0usize; 3];
        for &p in r.partition.parts() {
            sizes[p] += 1;
        }
        let cap = (9.0 * cfg.max_imbalance / 3.0).ceil() as usize;
        assert!(sizes.iter().all(|&s| s <= cap), "{sizes:?}");
        assert!(r.feasible);
    }

    #[test]
    fn four_blocks_four_parts() {
        let mut edges = Vec::new();
        for b in 0..4 {
            let base = 4 * b;
            edges.push(vec![base, base + 1, base + 2]);
            edges.push(vec![base + 1, base + 2, base + 3]);
            edges.push(vec![base, base + 3]);
        }
        let h = Hypergraph::unweighted(16, &edges).unwrap();
        let cfg = PartitionConfig {
            k: 4,
            ..PartitionConfig::default()
        };
        let r = partition(&h, &cfg).unwrap();
        assert_eq!(r.partition.cut(), 0.0);
        assert_eq!(hyperedge_cut(&h, r.partition.parts(), 4).unwrap(), 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let h = chain(300);
        let cfg = PartitionConfig {
            k: 3,
            seed: 11,
            coarsest_size: Some(20),
            ..PartitionConfig::default()
        };
        let a = partition(&h, &cfg).unwrap();
        let b = partition(&h, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.levels > 0);
        for s in &a.steps {
            assert!((s.projected_cut - s.coarse_cut).abs() <= 1e-9);
            assert!(s.refined_cut <= s.projected_cut + 1e-9);
        }
    }
}
