//! Integer Picard lattices of the compact divisors.
//!
//! A plain level `X_{|n|}` has basis `{C_0, f}`. A modified bottom surface
//! `X^m_e` has basis `{C_0^m, f}` followed by the exceptional components of
//! every modified fiber (all chain components except the strict transform of
//! the original fiber). Classes are coefficient vectors over that basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;
use crate::local_models::ModifiedRuledSurface;
use crate::tower::Level;

/// How a curve sits inside one of its incident surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum CurveRole {
    /// Upper distinguished curve of a level (`C_0^m` on a modified surface).
    UpperSection,
    LowerSection,
    /// Full fiber over a marked point.
    Fiber {
        over: String,
    },
    ChainComponent {
        point: String,
        index: usize,
    },
    /// Strict transform of `g`; `component` is `Some(±1)` when it splits.
    StrictTransform {
        component: Option<i8>,
    },
    /// Curve on a surface without a modelled lattice.
    Unmodelled,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub surface: String,
    pub basis: Vec<String>,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct SurfaceLattice {
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    n: i64,
    modified: Option<ModifiedRuledSurface>,
    /// Offset of each modified point's exceptional block in the basis.
    offsets: Vec<usize>,
}

impl SurfaceLattice {
    pub fn for_level(level: &Level) -> Self {
        match &level.modified {
            None => {
                let a = level.n.abs();
                SurfaceLattice {
                    basis: vec!["C0".into(), "f".into()],
                    gram: vec![vec![-a, 1], vec![1, 0]],
                    n: level.n,
                    modified: None,
                    offsets: vec![],
                }
            }
            Some(s) => {
                let mut basis = vec!["C0m".to_string(), "f".to_string()];
                let mut offsets = Vec::new();
                for p in &s.modified_points {
                    offsets.push(basis.len());
                    for k in 1..p.chain.components.len() {
                        basis.push(format!("E[{}:{}]", p.label, k));
                    }
                }
                let r = basis.len();
                let mut gram = vec![vec![0i64; r]; r];
                gram[0][0] = -s.e;
                gram[0][1] = 1;
                gram[1][0] = 1;
                for (p, &off) in s.modified_points.iter().zip(&offsets) {
                    let comps = &p.chain.components;
                    for k in 1..comps.len() {
                        let i = off + k - 1;
                        gram[i][i] = comps[k].self_int;
                        if k + 1 < comps.len() {
                            gram[i][i + 1] = 1;
                            gram[i + 1][i] = 1;
                        }
                    }
                }
                SurfaceLattice {
                    basis,
                    gram,
                    n: level.n,
                    modified: Some(s.clone()),
                    offsets,
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        lattice::pair(&self.gram, a, b)
    }

    fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    fn point(&self, label: &str) -> Result<(usize, &crate::local_models::ModifiedPoint)> {
        let s = self
            .modified
            .as_ref()
            .ok_or_else(|| Error::Consistency("chain component on a plain level".into()))?;
        s.modified_points
            .iter()
            .enumerate()
            .find(|(_, p)| p.label == label)
            .ok_or_else(|| Error::Consistency(format!("no modified point `{label}`")))
    }

    /// `C_1^m`, determined by its pairings with the basis.
    pub fn c1_class(&self) -> Result<Vec<i64>> {
        let Some(s) = &self.modified else {
            let a = self.n.abs();
            return Ok(vec![1, a]);
        };
        let mut rhs = vec![0i64; self.rank()];
        rhs[1] = 1;
        for (p, &off) in s.modified_points.iter().zip(&self.offsets) {
            let len = p.chain.components.len();
            if len > 1 {
                rhs[off + len - 2] = 1;
            }
        }
        lattice::solve_integral(&self.gram, &rhs)
            .ok_or_else(|| Error::Consistency("C1 class is not integral".into()))
    }

    /// Class of a curve with the given role; `self_int` disambiguates sections
    /// of a plain level.
    pub fn class_of(&self, role: &CurveRole, self_int: Option<i64>) -> Result<Vec<i64>> {
        let a = self.n.abs();
        match role {
            CurveRole::UpperSection | CurveRole::LowerSection => {
                if self.modified.is_some() {
                    return match role {
                        CurveRole::UpperSection => Ok(self.unit(0)),
                        _ => self.c1_class(),
                    };
                }
                let s = self_int.ok_or_else(|| {
                    Error::Consistency("section without self-intersection".into())
                })?;
                if s.abs() != a {
                    return Err(Error::Consistency(format!(
                        "section self-intersection {s} on X_{a}"
                    )));
                }
                Ok(vec![1, (s + a) / 2])
            }
            CurveRole::Fiber { .. } => Ok(self.unit(1)),
            CurveRole::ChainComponent { point, index } => {
                let (pi, p) = self.point(point)?;
                let off = self.offsets[pi];
                if *index == 0 {
                    let mut v = self.unit(1);
                    for k in 1..p.chain.components.len() {
                        v[off + k - 1] -= p.chain.components[k].fiber_mult;
                    }
                    Ok(v)
                } else if *index < p.chain.components.len() {
                    Ok(self.unit(off + index - 1))
                } else {
                    Err(Error::Consistency(format!(
                        "chain index {index} out of range"
                    )))
                }
            }
            CurveRole::StrictTransform { component } => {
                let Some(s) = &self.modified else {
                    // Middle X_0 of an odd tower: a section missing both distinguished curves.
                    return Ok(vec![1, 0]);
                };
                let c1 = self.c1_class()?;
                if component.is_some() {
                    return Ok(c1);
                }
                let mut v: Vec<i64> = c1.iter().map(|x| 2 * x).collect();
                for (p, &off) in s.modified_points.iter().zip(&self.offsets) {
                    if p.weight % 2 != 0 && p.weight >= 3 {
                        let len = p.chain.components.len();
                        v[off + len - 2] += 1;
                    }
                }
                Ok(v)
            }
            CurveRole::Unmodelled => Err(Error::Consistency(
                "no lattice for an unmodelled curve".into(),
            )),
        }
    }
}
