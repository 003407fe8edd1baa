//! Explicit cell models and their direct-sum bookkeeping.

mod bouquet;
mod rd2;
mod rd3;
mod smith;

pub use bouquet::{
    rd2_bouquet_assembly, rd3_bouquet_assembly, Assembly, BouquetSpec, Contributions,
    ExpansionCheck, ExpansionGroup,
};
pub use rd2::{
    canonical_pattern, rd2_cells, rd2_sphere_complex, split_rd2, CellKind, Sign, SignVectorCell,
    MAX_RD2_DIM,
};
pub use rd3::{
    rd3_cells, rd3_sphere_complex, rd3_sphere_uv_cells, TripleCell, TripleCensus, WeakOrder,
    MAX_RD3_DIM,
};
pub use smith::{smith_feasibility, smith_sequence_dims, Feasibility};
