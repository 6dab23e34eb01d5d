//! Exact fusion rings, quantum dimensions, braiding r-matrices, and coset branching for unitary Virasoro minimal models and affine sl2.

pub mod exactnum;
pub mod kac;
pub mod fusion;
pub mod qdim;
pub mod braiding;
pub mod gko;
pub mod sixa;
