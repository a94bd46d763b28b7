pub mod cyclotomic;
pub mod lattice;
pub mod matrix;
pub mod nt;
pub mod rat;
pub mod special;

pub use cyclotomic::CycNum;
pub use lattice::{lattice_index, Lattice};
pub use rat::{bernoulli2, Rat};
pub use special::{gauss_sum, gen_bernoulli1};
