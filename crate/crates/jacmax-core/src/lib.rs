//! Exact-arithmetic laboratory for certifying that products of hyperelliptic
//! Jacobians have maximal Galois image: discriminant valuation witnesses,
//! infinite curve families, finite symplectic group checks and division-field
//! intersections.

pub mod certify;
pub mod bigjson;
pub mod divfields;
pub mod error;
pub mod family;
pub mod group;
pub mod modpoly;
pub mod poly;

pub use error::{Error, Result};
pub use modpoly::{FactorShape, ModPoly};
pub use poly::{IntPoly, PolyJson};
