//! Exact-arithmetic calculator for wall-and-chamber computations on the
//! algebraic Mukai lattice of a K3 surface: pairings and autoequivalence
//! actions, spherical-class enumeration, wall geometry in the
//! (beta, alpha) half plane, wall-kind classification, and a verified
//! reduction of any primitive vector to the length-n ideal-sheaf normal
//! form `(1, 0, 1-n)`.
//!
//! All lattice arithmetic is over arbitrary-precision integers and exact
//! rationals. The hot enumeration loops drop to fixed-width integers only
//! where entry caps make overflow impossible.

pub mod arith;
pub mod check;
pub mod mukai;
pub mod rank2;
pub mod stability;
pub mod wallcross;
pub mod walls;
pub mod reduction;
