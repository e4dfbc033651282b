//! Minimum-length coordinated translation of two convex centrally-symmetric robots.
//!
//! The planner returns a three-phase decoupled co-motion together with the data needed to
//! certify that no shorter collision-free co-motion exists.

pub mod geom;
pub mod motion;
pub mod pathfind;
pub mod planner;
pub mod samples;
pub mod shape;
pub mod verify;

pub use geom::{Angle, AngularInterval, Point, RigidTransform, TolerancePolicy};
pub use motion::CoMotion;
pub use planner::{plan, CaseLabel, Candidate, Instance, PlanError, PlanResult};
pub use shape::{CcsShape, SumBoundary, Turn};
