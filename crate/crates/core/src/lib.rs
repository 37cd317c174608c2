pub mod arith;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod finite;
pub mod hilbert;
pub mod maslov;
pub mod weil;
