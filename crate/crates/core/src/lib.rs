//! Exact computations with Kraśkiewicz–Pragacz modules over the Lie algebra
//! of upper-triangular matrices: Schubert polynomials, weight modules, Hom and
//! Ext groups, standard filtrations, tilting modules and Ringel duality.

pub mod error;
pub mod homological;
pub mod kp;
pub mod linalg;
pub mod perm;
pub mod poly;
pub mod ringel;
pub mod schubert;
pub mod weightmod;

pub use error::{Error, Result};
pub use perm::{Permutation, Weight};
