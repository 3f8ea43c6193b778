//! Sesquilinear, hermitian and quadratic spaces on free modules A^m.
pub mod alg_matrix;
pub mod classify;
pub mod forms;

pub use alg_matrix::AlgMatrix;
pub use classify::{brute_force_classify, find_isometry, gl_order, isometries, ClassList, Flavor, FormClass, Match};
pub use forms::{
    herm_of, is_isometry, is_unimodular, lambda_p_extension, lambda_p_generators, orth_sum, quad_equal, reduce_components, scalar_extend, scalar_extend_into,
    ComponentForms,
    HermForm, QuadClass, ResidueMap, SesqForm,
};
