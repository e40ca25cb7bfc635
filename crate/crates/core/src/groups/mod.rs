//! Braid words and the braided automorphism groups of rooted trees.

mod baut;
mod braid;

pub use baut::{
    aut_order, baut_compose, baut_equal, baut_inverse, baut_is_pure, baut_is_trivial,
    baut_project, pure_signature, random_baut, BAutDocument, BAutElement, BAutElementDoc,
    TreeAutomorphism,
};
pub use braid::{
    braid_in_block_subgroup, braid_is_trivial, braid_is_trivial_by_action,
    braid_is_trivial_with_budget, braid_permutation, free_group_action, handle_reduce,
    permutation_word, BraidWord, FreeWord, Permutation, DEFAULT_REDUCTION_BUDGET,
};
