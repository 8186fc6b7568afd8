//! Exact verification of discrete Brunn-Minkowski and Borell-Brascamp-Lieb
//! inequalities for the lattice point enumerator.

pub mod cli;
pub mod exactnum;
pub mod functions;
pub mod search;
pub mod sets;
pub mod verifiers;
