//! KMS states on Cuntz–Krieger algebras `O_A`: Perron–Frobenius data,
//! normal forms of words in the generators, the states `ρ_a`, their
//! Kronecker tensor products and the type labels `λ(a)`.

pub mod error;
pub mod scalars;
pub mod matrix01;
pub mod perron;
pub mod ckwords;
pub mod states;
pub mod par;
pub mod tensorops;
pub mod classify;
pub mod config;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
