//! The stack of ruled surfaces created over one exceptional curve `A_i`.
//!
//! Over a generic point of `A_i` the total transform of `g` is the transversal
//! `A_{m_i - 1}` curve singularity `u^{m_i} + z^2 = 0`; resolving it along
//! `A_i` produces one ruled surface per exceptional curve of the transversal
//! resolution. The non-compact divisor `E^m(A_i)` sits on top.

use serde::{Deserialize, Serialize};

use crate::curve_graph::OrderedCurveGraph;
use crate::error::{Error, Result};
use crate::local_models::{blow_up_count, DiscBundleModel, ModifiedRuledSurface};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Neighbor {
    pub label: String,
    pub m: i64,
    pub arrow: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexContext {
    pub id: String,
    pub e: i64,
    pub m: i64,
    pub l: i64,
    /// `-(1/2) Σ_{older adjacent j} m_j`.
    pub x: i64,
    pub older: Vec<Neighbor>,
    /// Younger adjacent vertices followed by attached arrows.
    pub younger: Vec<Neighbor>,
}

impl VertexContext {
    pub fn is_even(&self) -> bool {
        self.m % 2 == 0
    }

    pub fn younger_weights(&self) -> Vec<i64> {
        self.younger.iter().map(|n| n.m).collect()
    }
}

pub fn vertex_context(ordered: &OrderedCurveGraph, id: &str) -> Result<VertexContext> {
    let g = &ordered.graph;
    let v = g
        .vertex(id)
        .ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
    let rank = ordered
        .rank(id)
        .ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
    let mut older = Vec::new();
    let mut younger = Vec::new();
    let mut nbrs: Vec<&str> = g.neighbors(id);
    nbrs.sort_by_key(|n| ordered.rank(n));
    for n in nbrs {
        let w = g.vertex(n).unwrap();
        let entry = Neighbor {
            label: n.to_string(),
            m: w.m,
            arrow: false,
        };
        if ordered.rank(n).unwrap() < rank {
            older.push(entry);
        } else {
            younger.push(entry);
        }
    }
    for a in g.arrows_at(id) {
        younger.push(Neighbor {
            label: a.id.clone(),
            m: a.m,
            arrow: true,
        });
    }
    let older_sum: i64 = older.iter().map(|n| n.m).sum();
    if older_sum % 2 != 0 {
        return Err(Error::NotNormalized(format!(
            "older neighbors of `{id}` have odd total multiplicity"
        )));
    }
    Ok(VertexContext {
        id: id.to_string(),
        e: v.e,
        m: v.m,
        l: v.m / 2,
        x: -older_sum / 2,
        older,
        younger,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelRole {
    /// `k`-th rung of the `-2` ladder (1-based).
    Rung(i64),
    /// The `X_0` carrying the strict transform in the odd case.
    Middle,
    /// Lowest surface in the odd case.
    Lowest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub role: LevelRole,
    /// Signed parameter: the upper distinguished curve has self-intersection
    /// `n`, the lower one `-n`. The surface is `X_{|n|}`.
    pub n: i64,
    pub g_mult: i64,
    /// Present on the bottom surface of an even tower.
    pub modified: Option<ModifiedRuledSurface>,
}

impl Level {
    pub fn label(&self) -> String {
        match &self.modified {
            Some(s) => format!("X^m_{}", s.e),
            None => format!("X_{}", self.n.abs()),
        }
    }

    pub fn picard_rank(&self) -> usize {
        self.modified.as_ref().map_or(2, |s| s.picard_rank)
    }
}

/// Curve shared by two consecutive surfaces of a tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerCurve {
    /// Self-intersection in the upper surface (`E^m(A_i)` for the first one).
    pub upper_self_int: i64,
    pub lower_self_int: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub vertex: String,
    /// Normal bundle data `O(x_i) ⊕ O(e_i)`.
    pub x: i64,
    pub e: i64,
    pub top: DiscBundleModel,
    pub levels: Vec<Level>,
    pub curves: Vec<TowerCurve>,
    /// 0 is the top `E^m(A_i)`, `k ≥ 1` is `levels[k-1]`.
    pub strict_site: usize,
    /// Self-intersection of the free lower section of the lowest surface (odd case).
    pub free_section: Option<i64>,
}

impl TowerDescriptor {
    pub fn g_mults(&self) -> Vec<i64> {
        std::iter::once(0)
            .chain(self.levels.iter().map(|l| l.g_mult))
            .collect()
    }

    pub fn bottom_surface(&self) -> Option<&ModifiedRuledSurface> {
        self.levels.last().and_then(|l| l.modified.as_ref())
    }
}

pub fn build_tower(ctx: &VertexContext) -> Result<TowerDescriptor> {
    let (e, x, l) = (ctx.e, ctx.x, ctx.l);
    let top = DiscBundleModel::new(
        x,
        ctx.older
            .iter()
            .map(|n| (n.label.clone(), (n.m / 2) as usize))
            .collect(),
    );
    let rung = |k: i64| Level {
        role: LevelRole::Rung(k),
        n: k * e - x,
        g_mult: 2 * k,
        modified: None,
    };
    let mut levels: Vec<Level> = (1..=l).map(rung).collect();
    let strict_site;
    let mut free_section = None;

    if ctx.is_even() {
        let younger_sum: i64 = ctx.younger_weights().iter().sum();
        let bottom_e = x - l * e;
        if bottom_e < 0 || 2 * bottom_e != younger_sum {
            return Err(Error::Precondition(format!(
                "vertex `{}`: x - l·e = {bottom_e} but younger weights sum to {younger_sum}",
                ctx.id
            )));
        }
        let marked = ctx.older.iter().map(|n| n.label.clone()).collect();
        let modified = ctx.younger.iter().map(|n| (n.label.clone(), n.m)).collect();
        let surface = ModifiedRuledSurface::new(bottom_e, marked, modified)?;
        levels.last_mut().expect("even m has l ≥ 1").modified = Some(surface);
        strict_site = levels.len();
    } else {
        if !ctx.younger.is_empty() {
            return Err(Error::NotNormalized(format!(
                "odd vertex `{}` has younger neighbors or arrows",
                ctx.id
            )));
        }
        if (2 * l + 1) * e - 2 * x != 0 {
            return Err(Error::Precondition(format!(
                "vertex `{}`: (2l+1)e - 2x = {} ≠ 0",
                ctx.id,
                (2 * l + 1) * e - 2 * x
            )));
        }
        if ctx.m == 1 {
            strict_site = 0;
        } else {
            levels.push(Level {
                role: LevelRole::Middle,
                n: (2 * l + 1) * e - 2 * x,
                g_mult: 4 * l + 2,
                modified: None,
            });
            strict_site = levels.len();
            let n = (l + 1) * e - x;
            levels.push(Level {
                role: LevelRole::Lowest,
                n,
                g_mult: 2 * l + 1,
                modified: None,
            });
            free_section = Some(-n);
        }
    }

    let mut curves = Vec::new();
    if let Some(first) = levels.first() {
        curves.push(TowerCurve {
            upper_self_int: x,
            lower_self_int: first.n,
        });
    }
    for w in levels.windows(2) {
        curves.push(TowerCurve {
            upper_self_int: -w[0].n,
            lower_self_int: w[1].n,
        });
    }
    let expected = blow_up_count(ctx.m)?;
    if levels.len() != expected {
        return Err(Error::Consistency(format!(
            "tower over `{}` has {} levels, expected {expected}",
            ctx.id,
            levels.len()
        )));
    }
    Ok(TowerDescriptor {
        vertex: ctx.id.clone(),
        x,
        e,
        top,
        levels,
        curves,
        strict_site,
        free_section,
    })
}
