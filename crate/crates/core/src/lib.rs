//! Weight-two Eisenstein series with character, their constant terms at the
//! cusps of `X_0(N)`, and the orders of the cuspidal groups they cut out.

pub mod arith;
pub mod characters;
pub mod cuspidal;
pub mod cusps;
pub mod eisenstein;
pub mod error;
pub mod scanner;
