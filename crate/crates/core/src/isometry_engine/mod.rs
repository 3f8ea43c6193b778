//! Reflections, orthogonal groups over finite rings, Dickson invariants and
//! reflection factorizations.
pub mod dickson;
pub mod factorize;
pub mod group;
pub mod reflection;
pub mod verify;

pub use dickson::{dickson, dickson_signature, DicksonContext, DicksonEngine, DicksonSignature};
pub use factorize::{
    approximation_suite, cd_factorize, reflection_product, weak_approximate, Approximation, ApproximationSuiteReport,
};
pub use group::{closure, orthogonal_group, reflection_subgroup, GroupEnumeration};
pub use reflection::{all_reflections, inverse_reflection, reflection_map, Reflection};
pub use verify::{verify_gen_by_reflections, GenerationReport};
