//! Toric ideals of graphs and the operations that build their universal
//! Gröbner bases recursively.

pub mod binomial;
pub mod graph;
pub mod ops;
pub mod oracle;
pub mod script;

pub use binomial::{is_toric_member, primitive_filter, WalkBinomial};
pub use graph::LabeledGraph;
pub use ops::{glue_cycle, glue_vertex, star_contract, star_subdivide, CycleLabels, SubdivisionLabels};
pub use oracle::{kernel_oracle, primitive_oracle, OracleConfig};
pub use script::{build, build_basis, random_script, two_squares_script, BuildScript, GraphSpec, Step};
