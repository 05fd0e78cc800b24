pub mod simplex;
pub mod trap;
