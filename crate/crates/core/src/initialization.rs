//! Jump discontinuities and consistent post-initial conditions.
//!
//! The jump of `y⁽ᵏ⁾` across the origin is the integral of the singular part of
//! `y⁽ᵏ⁺¹⁾`, which is its `δ` coefficient. Higher delta derivatives in
//! `y_s⁽ᵏ⁺¹⁾` come from differentiating `y`'s own singular content and
//! integrate to zero.

use serde::Serialize;

use crate::algebra::Q;
use crate::decomposition::{SingularSolution, SysSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JumpRow {
    pub order: usize,
    #[serde(serialize_with = "crate::render::ser_q")]
    pub pre: Q,
    #[serde(serialize_with = "crate::render::ser_q")]
    pub jump: Q,
    #[serde(serialize_with = "crate::render::ser_q")]
    pub post: Q,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct JumpReport {
    pub rows: Vec<JumpRow>,
}

impl JumpReport {
    /// Rows from pre-initial and post-initial values; jumps are their difference.
    pub fn from_pre_post(pre: &[Q], post: &[Q]) -> Result<Self> {
        if pre.len() != post.len() {
            return Err(Error::LengthMismatch {
                expected: pre.len(),
                found: post.len(),
            });
        }
        Ok(JumpReport {
            rows: pre
                .iter()
                .zip(post)
                .enumerate()
                .map(|(order, (p, q))| JumpRow {
                    order,
                    pre: p.clone(),
                    jump: q - p,
                    post: q.clone(),
                })
                .collect(),
        })
    }

    pub fn jumps(&self) -> Vec<Q> {
        self.rows.iter().map(|r| r.jump.clone()).collect()
    }
}

pub fn compute_jumps(ss: &SingularSolution, sys: &SysSpec) -> Result<JumpReport> {
    let n = sys.order();
    if ss.derivative_parts.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            found: ss.derivative_parts.len(),
        });
    }
    let rows = (0..n)
        .map(|k| {
            let jump = ss.derivative_parts[k + 1].integral_total();
            let pre = sys.y_pre()[k].clone();
            JumpRow {
                order: k,
                post: &pre + &jump,
                pre,
                jump,
            }
        })
        .collect();
    Ok(JumpReport { rows })
}

/// `[y(0⁺), y′(0⁺), …, y⁽ⁿ⁻¹⁾(0⁺)]`
pub fn post_initial_conditions(report: &JumpReport) -> Vec<Q> {
    report.rows.iter().map(|r| r.post.clone()).collect()
}
