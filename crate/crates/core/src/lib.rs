//! Finite quantities over object sets, the partitions they induce, the
//! dependence calculus between them, and systems of quantities with
//! isomorphism testing and canonical forms.

pub mod cli;
pub mod correspondence;
pub mod error;
pub mod io;
pub mod limits;
pub mod partition;
pub mod quantity;
pub mod system;
pub mod universe;

pub use correspondence::{
    are_equivalent, find_complete_sets, is_complete_set, is_constant, is_dependent, is_independent,
    quantity_join, quantity_meet, relate, value_correspondence, CompleteSetFailure,
    CompleteSetReport, QuantityRelation, SignScope, ValueCorrespondence,
};
pub use error::{Error, Result};
pub use partition::{all_partitions, Partition};
pub use quantity::{Classification, Kind, Quantity, SignSet};
pub use system::{
    canonical_form, find_isomorphism, is_concretion, is_homomorphism, is_part, is_proper_part,
    is_subsystem, is_uniform, structure_attributes, Certificate, IsoMode, Isomorphism,
    StructureAttributes, System, VertexMap,
};
pub use universe::Universe;
