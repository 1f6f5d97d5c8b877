//! Small-scale ground truth: clique expansion, persistence over Z/2,
//! zigzag persistence and bottleneck distance. Everything here favors
//! simplicity over speed and refuses inputs beyond a simplex budget.

pub mod bottleneck;
pub mod diagram;
pub mod flag;
pub mod gf2;
pub mod persistence;
pub mod zigzag;

pub use bottleneck::bottleneck_distance;
pub use diagram::{diagrams_equal, Interval, IntervalConvention, PersistenceDiagram};
pub use flag::{flag_expand, flag_expand_with_budget, OracleError, Simplex, SimplicialFiltration, DEFAULT_SIMPLEX_BUDGET};
pub use persistence::{flag_persistence, flag_persistence_with_budget, persistence};
pub use zigzag::{closed_to_half_open, zigzag_persistence, zigzag_persistence_on_grid};
