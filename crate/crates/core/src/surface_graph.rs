//! Strict-transform curves `S_i` and the dual resolution graph of `{f + z² = 0}`.

use std::collections::BTreeMap;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::assembler::{DivisorComplex, STG};
use crate::error::{Error, Result};
use crate::lattice;
use crate::pic::CurveClass;
use crate::tower::VertexContext;

/// Number of irreducible components of `S_i`.
pub fn s_components(ctx: &VertexContext) -> usize {
    let all_even = ctx.older.iter().chain(&ctx.younger).all(|n| n.m % 2 == 0);
    if ctx.is_even() && all_even {
        2
    } else {
        1
    }
}

pub fn branch_count(ctx: &VertexContext) -> usize {
    ctx.older
        .iter()
        .chain(&ctx.younger)
        .filter(|n| n.m % 2 != 0)
        .count()
}

/// Self-intersection of each component of `S_i` inside `St(g)`.
pub fn s_self_int_in_stg(ctx: &VertexContext) -> Result<i64> {
    if !ctx.is_even() {
        if ctx.e % 2 != 0 {
            return Err(Error::Consistency(format!(
                "odd vertex `{}` has odd e = {}",
                ctx.id, ctx.e
            )));
        }
        Ok(ctx.e / 2)
    } else if s_components(ctx) == 2 {
        Ok(ctx.e)
    } else {
        Ok(2 * ctx.e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SCurveData {
    pub vertex: String,
    pub host: String,
    pub components: usize,
    pub genus: usize,
    /// Null when the host is a non-compact `E^m`.
    pub self_int_in_host: Option<i64>,
    pub self_int_in_stg: i64,
    pub class_in_host: Option<CurveClass>,
    pub c1m_meets: usize,
    pub branch_count: usize,
}

pub fn strict_transform_curve(complex: &DivisorComplex, i: &str) -> Result<SCurveData> {
    let ctx = complex
        .context(i)
        .ok_or_else(|| Error::UnknownVertex(i.to_string()))?;
    let components = s_components(ctx);
    let bc = branch_count(ctx);
    if !bc.is_multiple_of(2) {
        return Err(Error::Consistency(format!(
            "`{i}` has an odd number ({bc}) of odd neighbors"
        )));
    }
    if ctx.is_even() && components == 1 && bc == 0 {
        return Err(Error::Consistency(format!(
            "`{i}`: irreducible S without branch points"
        )));
    }
    let genus = if components == 1 && bc >= 2 {
        (bc - 2) / 2
    } else {
        0
    };
    let id = if components == 2 {
        format!("S({i})+")
    } else {
        format!("S({i})")
    };
    let curve = complex
        .curve(&id)
        .ok_or_else(|| Error::Consistency(format!("missing curve `{id}`")))?;
    let host_side = curve
        .other_side(STG)
        .ok_or_else(|| Error::Consistency(format!("`{id}` has no host")))?;
    let host = host_side.surface.clone();
    let class_in_host = match complex.lattice(&host) {
        Some(lat) => {
            // The whole curve: both components when it splits.
            let mut coeffs = complex.class_on(curve, &host)?;
            if components == 2 {
                coeffs.iter_mut().for_each(|x| *x *= 2);
            }
            Some(CurveClass {
                surface: host.clone(),
                basis: lat.basis.clone(),
                coeffs,
            })
        }
        None => None,
    };
    let self_int_in_host = match (&class_in_host, complex.lattice(&host)) {
        (Some(c), Some(lat)) => Some(lat.pair(&c.coeffs, &c.coeffs)),
        _ => None,
    };
    Ok(SCurveData {
        vertex: i.to_string(),
        host,
        components,
        genus,
        self_int_in_host,
        self_int_in_stg: s_self_int_in_stg(ctx)?,
        class_in_host,
        c1m_meets: ctx
            .older
            .iter()
            .chain(&ctx.younger)
            .filter(|n| n.m == 1)
            .count(),
        branch_count: bc,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SVertex {
    pub id: String,
    pub from_vertex: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub component: Option<String>,
    pub genus: usize,
    pub self_int: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SGraph {
    pub vertices: Vec<SVertex>,
    pub edges: Vec<[String; 2]>,
}

impl SGraph {
    fn index(&self) -> BTreeMap<&str, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(k, v)| (v.id.as_str(), k))
            .collect()
    }

    /// Symmetric edge-multiplicity matrix.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let idx = self.index();
        let n = self.vertices.len();
        let mut a = vec![vec![0i64; n]; n];
        for [p, q] in &self.edges {
            let (i, j) = (idx[p.as_str()], idx[q.as_str()]);
            a[i][j] += 1;
            if i != j {
                a[j][i] += 1;
            }
        }
        a
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let mut a = self.adjacency();
        for (k, v) in self.vertices.iter().enumerate() {
            a[k][k] = v.self_int;
        }
        a
    }

    pub fn is_negative_definite(&self) -> bool {
        lattice::is_negative_definite(&self.intersection_matrix())
    }
}

pub fn surface_dual_graph(complex: &DivisorComplex) -> Result<SGraph> {
    let mut vertices = Vec::new();
    let mut comps: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for v in &complex.order {
        let d = strict_transform_curve(complex, v)?;
        let tags: Vec<Option<&str>> = if d.components == 2 {
            vec![Some("+"), Some("-")]
        } else {
            vec![None]
        };
        for tag in tags {
            let id = format!("S({v}){}", tag.unwrap_or(""));
            comps.entry(v.clone()).or_default().push(id.clone());
            vertices.push(SVertex {
                id,
                from_vertex: v.clone(),
                component: tag.map(str::to_string),
                genus: d.genus,
                self_int: d.self_int_in_stg,
            });
        }
    }
    let rank = |v: &str| complex.order.iter().position(|x| x == v);
    let mut pairs: Vec<(usize, usize, String, String)> = Vec::new();
    for c in &complex.contexts {
        for n in c.younger.iter().filter(|n| !n.arrow) {
            pairs.push((
                rank(&c.id).unwrap(),
                rank(&n.label).unwrap(),
                c.id.clone(),
                n.label.clone(),
            ));
        }
    }
    pairs.sort();
    let mut edges = Vec::new();
    for (_, _, j, i) in pairs {
        let cj = &comps[&j];
        let ci = &comps[&i];
        let mi = complex.context(&i).unwrap().m;
        match (cj.len(), ci.len()) {
            (1, 1) if mi % 2 != 0 => edges.push([cj[0].clone(), ci[0].clone()]),
            (1, 1) => {
                edges.push([cj[0].clone(), ci[0].clone()]);
                edges.push([cj[0].clone(), ci[0].clone()]);
            }
            (2, 1) => {
                for a in cj {
                    edges.push([a.clone(), ci[0].clone()]);
                }
            }
            (1, 2) => {
                for b in ci {
                    edges.push([cj[0].clone(), b.clone()]);
                }
            }
            (2, 2) => {
                // Sign propagation along any spanning tree joins equal signs.
                edges.push([cj[0].clone(), ci[0].clone()]);
                edges.push([cj[1].clone(), ci[1].clone()]);
            }
            _ => {
                return Err(Error::Consistency(format!(
                    "cannot pair components of `{j}` and `{i}`"
                )))
            }
        }
    }
    Ok(SGraph { vertices, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowDown {
    pub graph: SGraph,
    pub contractions: usize,
    /// `-1` rational vertices left in place because their edges are not simple.
    pub non_contractible: Vec<String>,
}

fn contractible(g: &SGraph, adj: &[Vec<i64>], k: usize) -> bool {
    adj[k][k] == 0 && adj[k].iter().all(|&x| x <= 1) && g.vertices[k].genus == 0
}

pub fn blow_down_minimal(g: &SGraph) -> BlowDown {
    let mut g = g.clone();
    let mut contractions = 0;
    loop {
        let adj = g.adjacency();
        let pick = (0..g.vertices.len())
            .find(|&k| g.vertices[k].self_int == -1 && contractible(&g, &adj, k));
        let Some(k) = pick else { break };
        let gone = g.vertices[k].id.clone();
        let nbrs: Vec<usize> = (0..g.vertices.len()).filter(|&j| adj[k][j] == 1).collect();
        let names: Vec<String> = nbrs.iter().map(|&j| g.vertices[j].id.clone()).collect();
        for &j in &nbrs {
            g.vertices[j].self_int += 1;
        }
        g.edges.retain(|[a, b]| *a != gone && *b != gone);
        for (p, a) in names.iter().enumerate() {
            for b in &names[p + 1..] {
                g.edges.push([a.clone(), b.clone()]);
            }
        }
        g.vertices.remove(k);
        contractions += 1;
    }
    let non_contractible = g
        .vertices
        .iter()
        .filter(|v| v.self_int == -1 && v.genus == 0)
        .map(|v| v.id.clone())
        .collect();
    BlowDown {
        graph: g,
        contractions,
        non_contractible,
    }
}

fn weighted(g: &SGraph) -> UnGraph<(usize, i64), i64> {
    let adj = g.adjacency();
    let mut out = UnGraph::new_undirected();
    let nodes: Vec<_> = g
        .vertices
        .iter()
        .map(|v| out.add_node((v.genus, v.self_int)))
        .collect();
    for (i, row) in adj.iter().enumerate() {
        for (j, &k) in row.iter().enumerate().skip(i) {
            if k > 0 {
                out.add_edge(nodes[i], nodes[j], k);
            }
        }
    }
    out
}

/// Isomorphism of decorated multigraphs, matching genus, self-intersection
/// and edge multiplicities.
pub fn is_isomorphic(a: &SGraph, b: &SGraph) -> bool {
    is_isomorphic_matching(&weighted(a), &weighted(b), |x, y| x == y, |x, y| x == y)
}

/// The `A_n` chain of `-2` rational curves.
pub fn a_chain(n: usize) -> SGraph {
    let vertices = (1..=n)
        .map(|k| SVertex {
            id: format!("a{k}"),
            from_vertex: String::new(),
            component: None,
            genus: 0,
            self_int: -2,
        })
        .collect();
    let edges = (1..n)
        .map(|k| [format!("a{k}"), format!("a{}", k + 1)])
        .collect();
    SGraph { vertices, edges }
}
