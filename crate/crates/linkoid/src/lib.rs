//! Kauffman bracket and Jones polynomials of linkoids (open-ended link
//! diagrams) via the segment-cycle state sum, and of collections of open or
//! closed polygonal curves in 3-space via projection averaged over the
//! sphere of directions.
//!
//! The crate is organized around the pipeline:
//!
//! - [`poly`]: sparse Laurent polynomials in the bracket variable A, exact
//!   or real coefficients, with the Jones variable t as a presentation.
//! - [`segcycle`]: pairings on endpoint labels and segment-cycle counting.
//! - [`diagram`]: the extended PD data model, parsing, smoothing,
//!   Reidemeister simplification, and closure.
//! - [`bracket`]: the state-sum and skein evaluations of the bracket and the
//!   writhe-normalized Jones polynomial.
//! - [`projection`]: 3D polygonal curves projected to linkoid diagrams along
//!   a direction, with degeneracy detection.
//! - [`sphere`]: sphere-averaged Jones/bracket estimation with a per-type
//!   diagram cache, plus closure sweeps.

pub mod bracket;
pub mod diagram;
pub mod fixtures;
pub mod poly;
pub mod projection;
pub mod segcycle;
pub mod sphere;
mod unionfind;

pub use bracket::{bracket, jones, skein_check, BracketEngine, BracketOptions, BracketResult};
pub use diagram::{parse_diagram, parse_diagram_json, LinkoidDiagram};
pub use poly::{LaurentPoly, TPoly};
pub use projection::{project, CurveSet, ProjectionOutcome};
pub use sphere::{estimate_bracket, estimate_jones, sweep, SamplerConfig, SphereEstimate};
