mod checks;
mod cuts;
mod graph;
mod iso;
mod loops;

pub use checks::{graph_family, verify_gluing_family, verify_symmetry_oracle};
pub use cuts::{
    cut_pieces, cuts_a_cycle, enumerate_graphs, glue, gluing_coefficient, is_complete, minimal_cuts,
    verify_gluing, verify_gluing_identity, cut_multiplicity, CutData, PieceShape,
};
pub use graph::{bubble, contract_to_rose, is_tadpole, rose, sunset, triangle, ExtTag, GraphBuilder, HalfEdgeGraph};
pub use iso::{isomorphic, symmetry_factor, symmetry_factor_brute_force};
pub use loops::{cut_ledger, loop_graphs, verify_cut_vanishing, CutLedger};
