//! Exact expansions and asymptotic checks for Bailey-type mock theta functions.

pub mod cuspasym;
pub mod exactq;
pub mod minorarcs;
pub mod mp;
pub mod numkernel;
pub mod predict;
pub mod quad;

pub use mp::{Cx, Prec, Real};
