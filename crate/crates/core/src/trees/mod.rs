//! Leaf-labelled series-reduced trees, the Feynman rules of the
//! diffeomorphed free theory, tree amplitudes and the sequence `b_n`.

mod amplitude;
mod bseq;
pub mod modp;
mod rules;
mod tree;
mod vanish;

pub use amplitude::{
    amplitude_at, amplitude_sum, amplitude_sum_with, tree_amplitude, tree_phase, tree_sign,
    tree_value_at, tree_values_at, PointTable, Strategy, COMMON_PHASE,
};
pub use bseq::{
    b_doubleprime_by_partitions, b_doubleprime_recursive, b_full_recursive, b_full_recursive_with,
    b_prime_recursive, b_via_definition, b_via_definition_exact, b_via_definition_symbolic,
    definition_config, definition_point, has_grading, EdgeTerm,
};
pub use rules::{a_poly, c_coefficient, d_coefficient, RuleTable, VertexKind, VertexRule};
pub use tree::{
    enumerate_trees, enumerate_trees_with_cutoff, expanded_vertex_count,
    expanded_vertex_count_by_trees, for_each_mask_partition, for_each_product, mask_label,
    proper_partitions, tree_count, trees_by_insertion, visit_trees, LeafTree, SubtreeCache, Sub,
    VertexView, TREE_CUTOFF,
};
pub use vanish::{on_shell_point, verify_one_offshell, verify_vanishing, Mode, SYMBOLIC_MAX};
