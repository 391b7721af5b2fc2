//! Exact delta-invariant certificates for degree-2 Du Val del Pezzo surfaces.
//!
//! The pipeline runs from the Picard lattice ([`lattice`]) through surface
//! models ([`surface`]), Zariski chambers of `-K - vC` ([`zariski`]) and
//! flag integrals ([`delta`]) to a global certificate per surface type.

pub mod ade;
pub mod lattice;
pub mod poly;
pub mod rational;
pub mod surface;
pub mod table;
pub mod simplex;
pub mod zariski;
pub mod blowup;
pub mod delta;
pub mod strategy;
pub mod catalog;
pub mod report;
