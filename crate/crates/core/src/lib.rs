//! Signature, nullity, Conway and Alexander invariants of colored links,
//! computed directly from colored planar diagrams through a region-indexed
//! symmetric matrix and an independent determinantal model.
//!
//! The pipeline is: parse a colored PD code ([`diagram`]), build the
//! symmetric matrix in symbolic or numeric form and the crossing-by-region
//! label matrix ([`kashaev`]), then read off signatures and nullities from
//! inertia and the Conway/Alexander polynomials from exact determinants
//! ([`invariants`]). A Wirtinger-presentation Alexander computation
//! ([`oracle`]) provides an independent cross-check, and [`verify`] bundles
//! the built-in consistency suite.

pub mod corpus;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod kashaev;
pub mod laurent;
pub mod oracle;
pub mod verify;

pub use diagram::{Color, ColoredDiagram, Crossing, EdgeId, Frame, RegionMap};
pub use error::{Error, Result};
pub use laurent::{LaurentPoly, RationalFn, TorusPoint};
