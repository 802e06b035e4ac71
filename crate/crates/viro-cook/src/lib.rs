//! Exact engine for combinatorial patchworking and the cooking calculus of
//! asymptotic Betti numbers of real projective hypersurfaces.
//!
//! Modules, bottom up:
//! - [`coefficients`]: Eulerian numbers, Hodge coefficients, second differences.
//! - [`cooking`]: the cooking recursion and the ingredient registry.
//! - [`search`]: enumeration over recursive cooking plans.
//! - [`limit`]: the Gaussian limit machinery and splitting moments.
//! - [`triangulation`]: certified convex triangulations of dilated simplices.
//! - [`patchwork`]: charts, gluing and `Z_2` homology.
//! - [`verify`]: the acceptance suite behind `viro verify`.

pub mod coefficients;
pub mod cooking;
pub mod error;
pub mod limit;
pub mod patchwork;
pub mod rational;
pub mod search;
pub mod triangulation;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Q;
