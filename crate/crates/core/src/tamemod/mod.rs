//! Truncated functors on finite sets and injections, read as tame modules
//! over the injection monoid through their colimit.

pub mod colim;
pub mod functor;
pub mod graded;
pub mod io;
pub mod ops;
pub mod sigma;

pub use colim::{ActionWitness, ColimElement, EqVerdict, FiltrationVerdict, SemistableVerdict, SurjectivityVerdict};
pub use functor::{Relation, TruncIFunctor, Violation};
pub use graded::GradedTameModule;
pub use ops::{
    cokernel_functor, constant, d_map, d_stage, direct_sum, induce, kernel_functor, shift, tensor_group,
    tensor_sigma, truncate_above, zero, NatTrans,
};
pub use sigma::SigmaModule;
