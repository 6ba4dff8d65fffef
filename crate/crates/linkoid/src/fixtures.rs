//! Bundled fixtures: the Hopf-type linkoid PD code and the open Borromean
//! ring coordinates used by the golden tests and the CLI selftest.

use crate::diagram::{parse_diagram, LinkoidDiagram};
use crate::projection::CurveSet;

/// Extended PD code of the two-component Hopf-type linkoid (writhe -2).
pub const HOPF_LINKOID_PD: &str = include_str!("../fixtures/hopf_linkoid.pd");

/// Coordinate lists of the three open Borromean ring components.
pub const OPEN_BORROMEAN_TXT: &str = include_str!("../fixtures/open_borromean.txt");

/// The Hopf-type linkoid diagram.
pub fn hopf_linkoid() -> LinkoidDiagram {
    parse_diagram(HOPF_LINKOID_PD).expect("bundled fixture parses")
}

/// The open Borromean rings as a curve set (three open components).
pub fn open_borromean() -> CurveSet {
    CurveSet::parse_text(OPEN_BORROMEAN_TXT).expect("bundled fixture parses")
}
