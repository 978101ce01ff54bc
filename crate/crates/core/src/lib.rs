//! Knot invariants from planar diagram codes: reduced Khovanov homology,
//! Jones and Alexander polynomials, determinants, cyclotomic-polynomial
//! checks, and detection reports built on them.

pub mod bigint_serde;
pub mod cyclotomic;
pub mod diagram;
pub mod exactlinalg;
pub mod khovanov;
pub mod knotpoly;
pub mod corpus;
pub mod census;
pub mod cli;
pub mod detector;
