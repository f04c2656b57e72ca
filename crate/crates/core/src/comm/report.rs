use serde::Serialize;

use crate::boxes::{ALICE, BOB};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "C->A")]
    CToA,
    #[serde(rename = "C->B")]
    CToB,
    #[serde(rename = "C->AB")]
    CToAB,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::CToA, Direction::CToB, Direction::CToAB];

    pub fn target_labels(self) -> &'static [&'static str] {
        match self {
            Direction::CToA => &[ALICE],
            Direction::CToB => &[BOB],
            Direction::CToAB => &[ALICE, BOB],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::CToA => "C->A",
            Direction::CToB => "C->B",
            Direction::CToAB => "C->AB",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub pass: bool,
    pub residual: f64,
}

/// Communication summary of one box.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommReport {
    pub box_id: String,
    pub outcome_entropy_bits: f64,
    pub cc_lower_bound_bits: f64,
    pub cv_lower_bound_bits: f64,
    pub capacity_upper_bound_bits: Option<f64>,
    /// `(direction, is_signaling, max residual)`.
    pub nonsignaling: Vec<(Direction, bool, f64)>,
    pub verdicts: Vec<Verdict>,
}

impl CommReport {
    /// Internal consistency: the value protocol never beats the capacity
    /// estimate (`1e-6`) and the cost bound never exceeds the broadcast
    /// entropy (`1e-9`). Returns the violated conditions.
    pub fn inconsistencies(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(cap) = self.capacity_upper_bound_bits {
            if self.cv_lower_bound_bits > cap + 1e-6 {
                out.push(format!(
                    "value lower bound {} exceeds capacity estimate {}",
                    self.cv_lower_bound_bits, cap
                ));
            }
        }
        if self.cc_lower_bound_bits > self.outcome_entropy_bits + 1e-9 {
            out.push(format!(
                "cost bound {} exceeds outcome entropy {}",
                self.cc_lower_bound_bits, self.outcome_entropy_bits
            ));
        }
        out
    }

    /// The box needs more bits than it can carry.
    pub fn irreversible(&self) -> bool {
        self.capacity_upper_bound_bits
            .is_some_and(|cap| self.cc_lower_bound_bits > cap + 1e-6)
    }
}
