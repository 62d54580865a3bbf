pub mod cli;
pub mod coding;
pub mod constructions;
pub mod hierarchy;
pub mod proofs;
pub mod semantics;
pub mod syntax;
pub mod theories;
