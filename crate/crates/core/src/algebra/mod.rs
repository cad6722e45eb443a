//! Symbolic symmetry generators and their structure relations.

mod generator;
pub mod poly;
mod relations;

pub use generator::{
    format_combination, generator_labels, linear_combination, make_generator, AlgebraParams, GeneratorLabel, Layout,
    VectorFieldGenerator,
};
pub use poly::Polynomial;
pub use relations::{expected_bracket, verify_structure_relations, RelationCheck, StructureReport};
