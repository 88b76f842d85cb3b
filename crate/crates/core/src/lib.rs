//! Exact structure-constant toolkit for hom-type algebras, coalgebras,
//! bialgebras and dialgebras.

pub mod axioms;
pub mod constructions;
pub mod corpus;
pub mod document;
pub mod linalg;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod search;
pub mod structures;
