//! Fourier analysis on compact Vilenkin groups realized through finite
//! quotient towers.
//!
//! The crate builds finite models `G/G_N` of three profinite families
//! (Vilenkin products, `l`-adic modules, `l`-adic Heisenberg groups),
//! enumerates their unitary duals, computes nonabelian Fourier transforms,
//! applies the Vladimirov-Taibleson spectral calculus, and measures
//! `L^2` moduli of continuity against Fourier-side decay.

pub mod dual;
pub mod error;
pub mod families;
pub mod fit;
pub mod regularity;
pub mod tower;
pub mod transform;
pub mod vladimirov;

pub use error::{Error, Result};
pub use tower::{make_tower, Element, Family, Rat, TowerSpec};
