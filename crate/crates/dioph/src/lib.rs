//! Exact-arithmetic laboratory for best approximations of systems of linear
//! forms and their Diophantine exponents.
//!
//! Given an `n x m` matrix of certified real numbers, the crate enumerates
//! the full best-approximation sequence up to a height bound with certified
//! interval arithmetic, estimates the uniform and individual exponents from
//! the sequence, evaluates the transference bound functions relating them,
//! and runs exact integer structure analysis (coplanar runs, determinant
//! bounds, tail ranks) over the extended approximation vectors.

pub mod bestapprox;
pub mod bounds;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod exponents;
pub mod forms;
pub mod realnum;
pub mod structure;
