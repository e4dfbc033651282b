//! Scene and result files.

use std::fs;
use std::path::Path;

use ccs_duet::motion::{CoMotion, ScheduleSegment};
use ccs_duet::pathfind::PointPath;
use ccs_duet::verify::CertificateReport;
use ccs_duet::{CaseLabel, CcsShape, Instance, PlanResult, Point, Turn};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeSpec {
    Disc { radius: f64 },
    Polygon { vertices: Vec<[f64; 2]> },
}

impl From<&ShapeSpec> for CcsShape {
    fn from(s: &ShapeSpec) -> Self {
        match s {
            ShapeSpec::Disc { radius } => CcsShape::disc(*radius),
            ShapeSpec::Polygon { vertices } => CcsShape::polygon(vertices.iter().map(|&v| Point::from(v)).collect()),
        }
    }
}

impl From<&CcsShape> for ShapeSpec {
    fn from(s: &CcsShape) -> Self {
        match s {
            CcsShape::Disc { radius } => ShapeSpec::Disc { radius: *radius },
            CcsShape::Polygon { vertices } => ShapeSpec::Polygon {
                vertices: vertices.iter().map(|&v| v.into()).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub robot_a: ShapeSpec,
    pub robot_b: ShapeSpec,
    pub a0: [f64; 2],
    pub b0: [f64; 2],
    pub a1: [f64; 2],
    pub b1: [f64; 2],
}

impl SceneFile {
    pub fn instance(&self) -> Instance {
        Instance::new(
            (&self.robot_a).into(),
            (&self.robot_b).into(),
            self.a0.into(),
            self.b0.into(),
            self.a1.into(),
            self.b1.into(),
        )
    }

    pub fn from_instance(inst: &Instance) -> Self {
        SceneFile {
            robot_a: (&inst.shape_a).into(),
            robot_b: (&inst.shape_b).into(),
            a0: inst.a0.into(),
            b0: inst.b0.into(),
            a1: inst.a1.into(),
            b1: inst.b1.into(),
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
    }
}

/// Everything `plan` writes. Walk pieces list the boundary elements they follow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub length: f64,
    pub direction: Turn,
    pub case: CaseLabel,
    pub a_int: Point,
    pub lower_bound_ccw: f64,
    pub lower_bound_cw: f64,
    pub rejected_nonconvex: Vec<f64>,
    pub certificate: CertificateReport,
    pub robot_a: PointPath,
    pub robot_b: PointPath,
    pub schedule: Vec<ScheduleSegment>,
    pub phase_marks: Vec<f64>,
}

impl ResultFile {
    pub fn new(plan: &PlanResult) -> Self {
        let m = &plan.chosen.comotion;
        ResultFile {
            length: plan.length(),
            direction: plan.chosen.direction,
            case: plan.case,
            a_int: plan.chosen.a_int,
            lower_bound_ccw: plan.lower_bound_ccw,
            lower_bound_cw: plan.lower_bound_cw,
            rejected_nonconvex: plan.rejected_nonconvex.clone(),
            certificate: plan.certificate.clone(),
            robot_a: m.path_a.clone(),
            robot_b: m.path_b.clone(),
            schedule: m.schedule.clone(),
            phase_marks: m.phase_marks.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }
}

/// The parts of a result file needed to re-check it. Other fields are ignored, so a result
/// with non-finite residuals (written as `null`) still loads.
#[derive(Debug, Clone, Deserialize)]
pub struct ClaimedMotion {
    pub length: f64,
    pub robot_a: PointPath,
    pub robot_b: PointPath,
    pub schedule: Vec<ScheduleSegment>,
    #[serde(default)]
    pub phase_marks: Vec<f64>,
}

impl ClaimedMotion {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
    }

    pub fn comotion(&self) -> CoMotion {
        CoMotion {
            path_a: self.robot_a.clone(),
            path_b: self.robot_b.clone(),
            schedule: self.schedule.clone(),
            phase_marks: self.phase_marks.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scene_round_trip() {
        let text = r#"{"robot_a":{"type":"disc","radius":1.0},
            "robot_b":{"type":"polygon","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]},
            "a0":[0,0],"b0":[5,0],"a1":[10,0],"b1":[-5,0]}"#;
        let scene: SceneFile = serde_json::from_str(text).unwrap();
        let inst = scene.instance();
        assert_eq!(inst.b0, Point::new(5.0, 0.0));
        assert_eq!(SceneFile::from_instance(&inst), scene);
    }

    #[test]
    fn unknown_shape_is_rejected() {
        let text = r#"{"robot_a":{"type":"ellipse","a":1.0,"b":2.0},
            "robot_b":{"type":"disc","radius":1.0},
            "a0":[0,0],"b0":[5,0],"a1":[10,0],"b1":[-5,0]}"#;
        assert!(serde_json::from_str::<SceneFile>(text).is_err());
    }
}
