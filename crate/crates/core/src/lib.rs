//! Non-redundancy of constraint satisfaction predicates: predicate algebra,
//! balance tests, instance verification, exact NRD at toy scale, SAT-based
//! search for substructure reductions, extremal instance generators, and
//! the end-to-end reduction pipeline.

pub mod analysis;
pub mod catalog;
pub mod checks;
pub mod error;
pub mod generators;
pub mod instance;
pub mod pipeline;
pub mod predicate;
pub mod sat;
pub mod substructure;
pub mod tables;

pub use error::{NrdError, Result};
pub use instance::{Instance, NrdCertificate, PartiteHypergraph, WitnessSource};
pub use predicate::{ConditionalPredicate, IndexFamily, Predicate, Status, Tuple};
pub use sat::{Cnf, SolveResult, SolverConfig, VarTag};
pub use substructure::SubstructureCertificate;
