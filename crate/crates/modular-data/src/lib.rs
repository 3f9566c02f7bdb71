//! Exact modular data for exterior powers of cyclic character tables, the
//! semisimplified quantum gl_n categories at roots of unity, and Malle's
//! Fourier matrices for G(d,1,n).

pub mod cyclo;

pub mod cycmat;
pub mod cyclic_tables;
pub mod fusion;
pub mod glcat;
pub mod glweights;
pub mod malle;

pub use cycmat::{CycMatrix, MatrixError};
pub use cyclo::{CycloError, CyclotomicNumber};
