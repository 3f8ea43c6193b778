//! Finite-rank algebras with involution and form parameter.

pub mod algebra;
pub mod factor;
pub mod radical;
pub mod span;
pub mod unitary;

pub use algebra::{AlgElem, Algebra};
pub use factor::{
    classify_component, semisimple_factorization, Classification, ComponentReport, InvolutionKind, SimpleFactorization,
    SplitHint,
};
pub use radical::{bar_construction, jacobson_radical, reduce_unitary, BarData};
pub use span::Span;
pub use unitary::{check_unitary, lambda_min_max, MatrixInvolution, UnitaryRing};
