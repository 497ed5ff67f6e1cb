//! Multilevel hypergraph partitioning with coarsening steered by algebraic
//! distances, plus a dense spectral oracle for the relaxation that produces
//! those distances.
//!
//! ```
//! use hyperalg::{partition, Hypergraph, PartitionConfig};
//!
//! let h = Hypergraph::unweighted(4, &[vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
//! let result = partition(&h, &PartitionConfig::default()).unwrap();
//! assert_eq!(result.partition.cut(), 1.0);
//! ```

pub mod algdist;
pub mod coarsen;
pub mod error;
pub mod formats;
pub mod generate;
pub mod harness;
pub mod hypergraph;
pub mod multilevel;
pub mod partition;
pub mod refine;
pub mod spectral;

pub use algdist::{star_expand, AlgdConfig, StarExpansion};
pub use coarsen::{CoarsenConfig, CoarseningLevel, CoarseningMode};
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use multilevel::{bipartition, partition, PartitionConfig, PartitionResult};
pub use partition::{connectivity_metric, hyperedge_cut, imbalance, Partition};
pub use refine::RefineConfig;
