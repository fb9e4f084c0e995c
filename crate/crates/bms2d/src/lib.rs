//! Locator decoding of bivariate abelian codes with the
//! Berlekamp-Massey-Sakata algorithm.
//!
//! The decoder runs the 2-D shift-register synthesis over the translated
//! syndrome table of a received word and visits only the index set B_{2t+1},
//! which is both the iteration schedule and the termination criterion for
//! error weights up to 4.

pub mod gf;
pub mod lattice;
pub mod poly2;
pub mod syndrome;
pub mod code;
pub mod bms;
pub mod decode;
pub mod oracle;
pub mod cli;
