//! Exact creative telescoping and Apéry limits for the generalized Franel
//! numbers `A^(s)(n) = sum_k binom(n,k)^s`.

pub mod algebra;
pub mod hyperterm;
pub mod operator;
pub mod telescoper;
pub mod franel;
pub mod limits;
