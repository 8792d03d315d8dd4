//! Decorated embedded resolution graphs of plane curve singularities.
//!
//! A [`CurveGraph`] records the exceptional curves `A_i` of an embedded
//! resolution of `f`, each with its self-intersection `e` and the vanishing
//! order `m` of `f` along it, together with arrows for the strict transform
//! branches. Validity is the usual set of numerical constraints: the
//! divisor of `f` has zero intersection with every `A_i`, and the
//! intersection matrix is negative definite.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub e: i64,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub attach: String,
    pub m: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveGraph {
    pub name: String,
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyGraph,
    SelfLoop { vertex: String },
    MultipleEdge { a: String, b: String },
    NonPositiveMultiplicity { vertex: String, m: i64 },
    NonNegativeSelfIntersection { vertex: String, e: i64 },
    ArrowMultiplicity { arrow: String, m: i64 },
    Relation { vertex: String, residual: i64 },
    Disconnected,
    NotNegativeDefinite { minor: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CurveGraph {
    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn vertex_mut(&mut self, id: &str) -> &mut Vertex {
        self.vertices
            .iter_mut()
            .find(|v| v.id == id)
            .expect("vertex id checked by caller")
    }

    /// Edge neighbors of `id`, in edge-list order.
    pub fn neighbors(&self, id: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter_map(|[a, b]| {
                if a == id {
                    Some(b.as_str())
                } else if b == id {
                    Some(a.as_str())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn arrows_at(&self, id: &str) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.attach == id).collect()
    }

    /// `e_i m_i + Σ_neighbors m_j + Σ_arrows m`, which vanishes on valid graphs.
    pub fn relation_residual(&self, id: &str) -> i64 {
        let v = self.vertex(id).expect("known vertex");
        let nb: i64 = self
            .neighbors(id)
            .iter()
            .map(|n| self.vertex(n).map_or(0, |w| w.m))
            .sum();
        let ar: i64 = self.arrows_at(id).iter().map(|a| a.m).sum();
        v.e * v.m + nb + ar
    }

    /// Symmetric intersection matrix in vertex-list order.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let idx: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            m[i][i] = v.e;
        }
        for [a, b] in &self.edges {
            if let (Some(&i), Some(&j)) = (idx.get(a.as_str()), idx.get(b.as_str())) {
                if i != j {
                    m[i][j] += 1;
                    m[j][i] += 1;
                }
            }
        }
        m
    }

    fn check_structure(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.as_str()) {
                return Err(Error::Structure(format!("duplicate vertex id `{}`", v.id)));
            }
        }
        let vertex_ids = seen.clone();
        for a in &self.arrows {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::Structure(format!("duplicate id `{}`", a.id)));
            }
            if !vertex_ids.contains(a.attach.as_str()) {
                return Err(Error::Structure(format!(
                    "arrow `{}` attaches to unknown vertex `{}`",
                    a.id, a.attach
                )));
            }
        }
        for [a, b] in &self.edges {
            for end in [a, b] {
                if !vertex_ids.contains(end.as_str()) {
                    return Err(Error::Structure(format!(
                        "edge {a}-{b} references unknown vertex `{end}`"
                    )));
                }
            }
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let Some(first) = self.vertices.first() else {
            return true;
        };
        let mut seen = BTreeSet::from([first.id.as_str()]);
        let mut queue = VecDeque::from([first.id.as_str()]);
        while let Some(v) = queue.pop_front() {
            for n in self.neighbors(v) {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Describes the first odd–odd adjacency, if any.
    pub fn parity_defect(&self) -> Option<String> {
        let odd = |id: &str| self.vertex(id).is_some_and(|v| v.m % 2 != 0);
        for [a, b] in &self.edges {
            if odd(a) && odd(b) {
                return Some(format!("edge {a}-{b} joins two odd-multiplicity vertices"));
            }
        }
        for ar in &self.arrows {
            if odd(&ar.attach) {
                return Some(format!(
                    "arrow `{}` attaches to odd-multiplicity vertex `{}`",
                    ar.id, ar.attach
                ));
            }
        }
        None
    }

    pub fn is_parity_normalized(&self) -> bool {
        self.parity_defect().is_none()
    }

    fn fresh_id(&self, base: &str) -> String {
        let taken = |s: &str| {
            self.vertices.iter().any(|v| v.id == s) || self.arrows.iter().any(|a| a.id == s)
        };
        let mut id = base.to_string();
        let mut k = 1;
        while taken(&id) {
            k += 1;
            id = format!("{base}#{k}");
        }
        id
    }

    /// Blows up the point `a ∩ b` between two vertices.
    fn blow_up_edge(&mut self, edge_index: usize, new_id: String) {
        let [a, b] = self.edges[edge_index].clone();
        let m = self.vertex(&a).unwrap().m + self.vertex(&b).unwrap().m;
        self.vertex_mut(&a).e -= 1;
        self.vertex_mut(&b).e -= 1;
        self.vertices.push(Vertex {
            id: new_id.clone(),
            e: -1,
            m,
        });
        self.edges[edge_index] = [a, new_id.clone()];
        self.edges.push([new_id, b]);
    }

    /// Blows up the point where arrow `arrow_index` meets its vertex.
    fn blow_up_arrow(&mut self, arrow_index: usize, new_id: String) {
        let attach = self.arrows[arrow_index].attach.clone();
        let m = self.vertex(&attach).unwrap().m + self.arrows[arrow_index].m;
        self.vertex_mut(&attach).e -= 1;
        self.vertices.push(Vertex {
            id: new_id.clone(),
            e: -1,
            m,
        });
        self.edges.push([attach, new_id.clone()]);
        self.arrows[arrow_index].attach = new_id;
    }

    /// Blows up a free point of vertex `id`.
    fn blow_up_free(&mut self, id: &str, new_id: String) {
        let m = self.vertex(id).unwrap().m;
        self.vertex_mut(id).e -= 1;
        self.vertices.push(Vertex {
            id: new_id.clone(),
            e: -1,
            m,
        });
        self.edges.push([id.to_string(), new_id]);
    }
}

pub fn validate(graph: &CurveGraph) -> Result<ValidationReport> {
    graph.check_structure()?;
    let mut violations = Vec::new();
    if graph.vertices.is_empty() {
        violations.push(Violation::EmptyGraph);
        return Ok(ValidationReport { violations });
    }
    let mut pairs = BTreeSet::new();
    for [a, b] in &graph.edges {
        if a == b {
            violations.push(Violation::SelfLoop { vertex: a.clone() });
            continue;
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if !pairs.insert(key) {
            violations.push(Violation::MultipleEdge {
                a: key.0.clone(),
                b: key.1.clone(),
            });
        }
    }
    for v in &graph.vertices {
        if v.m < 1 {
            violations.push(Violation::NonPositiveMultiplicity {
                vertex: v.id.clone(),
                m: v.m,
            });
        }
        if v.e > -1 {
            violations.push(Violation::NonNegativeSelfIntersection {
                vertex: v.id.clone(),
                e: v.e,
            });
        }
    }
    for a in &graph.arrows {
        if a.m != 1 {
            violations.push(Violation::ArrowMultiplicity {
                arrow: a.id.clone(),
                m: a.m,
            });
        }
    }
    for v in &graph.vertices {
        let residual = graph.relation_residual(&v.id);
        if residual != 0 {
            violations.push(Violation::Relation {
                vertex: v.id.clone(),
                residual,
            });
        }
    }
    if !graph.is_connected() {
        violations.push(Violation::Disconnected);
    }
    if let Some(minor) = lattice::first_non_negative_definite_minor(&graph.intersection_matrix()) {
        violations.push(Violation::NotNegativeDefinite { minor });
    }
    Ok(ValidationReport { violations })
}

fn require_valid(graph: &CurveGraph) -> Result<()> {
    let report = validate(graph)?;
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{:?}", report.violations)))
    }
}

/// Blows up every point where two odd-multiplicity divisors meet.
///
/// Inserted vertices carry the even multiplicity `m_i + m_j`, so a single
/// pass leaves no odd–odd adjacency behind.
pub fn normalize_parity(graph: &CurveGraph) -> Result<CurveGraph> {
    require_valid(graph)?;
    let mut out = graph.clone();
    let odd = |g: &CurveGraph, id: &str| g.vertex(id).unwrap().m % 2 != 0;
    for k in 0..graph.edges.len() {
        let [a, b] = graph.edges[k].clone();
        if odd(&out, &a) && odd(&out, &b) {
            let id = out.fresh_id(&format!("{a}~{b}"));
            out.blow_up_edge(k, id);
        }
    }
    for k in 0..graph.arrows.len() {
        let attach = out.arrows[k].attach.clone();
        if odd(&out, &attach) {
            let id = out.fresh_id(&format!("{attach}~{}", out.arrows[k].id));
            out.blow_up_arrow(k, id);
        }
    }
    Ok(out)
}

/// A curve graph together with a total order ("older first") of its vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedCurveGraph {
    pub graph: CurveGraph,
    pub order: Vec<String>,
}

impl OrderedCurveGraph {
    /// Position of `id` in the order; smaller is older.
    pub fn rank(&self, id: &str) -> Option<usize> {
        self.order.iter().position(|o| o == id)
    }

    pub fn is_older(&self, a: &str, b: &str) -> bool {
        self.rank(a) < self.rank(b)
    }
}

/// Canonical order: even multiplicities first, each class by ascending id.
pub fn order_vertices(graph: &CurveGraph) -> Result<OrderedCurveGraph> {
    require_valid(graph)?;
    if let Some(d) = graph.parity_defect() {
        return Err(Error::NotNormalized(d));
    }
    let mut ids: Vec<(&str, bool)> = graph
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), v.m % 2 != 0))
        .collect();
    ids.sort_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(y.0)));
    Ok(OrderedCurveGraph {
        graph: graph.clone(),
        order: ids.into_iter().map(|(id, _)| id.to_string()).collect(),
    })
}

/// Attaches an explicit order after checking it is a permutation that puts
/// every even-multiplicity vertex before every odd one.
pub fn with_order(graph: &CurveGraph, order: &[String]) -> Result<OrderedCurveGraph> {
    require_valid(graph)?;
    if let Some(d) = graph.parity_defect() {
        return Err(Error::NotNormalized(d));
    }
    let given: BTreeSet<&str> = order.iter().map(String::as_str).collect();
    let expected: BTreeSet<&str> = graph.vertices.iter().map(|v| v.id.as_str()).collect();
    if given != expected || order.len() != graph.vertices.len() {
        return Err(Error::Order(
            "order must list every vertex exactly once".to_string(),
        ));
    }
    let mut seen_odd = None;
    for id in order {
        let odd = graph.vertex(id).unwrap().m % 2 != 0;
        match (odd, &seen_odd) {
            (true, None) => seen_odd = Some(id.clone()),
            (false, Some(o)) => {
                return Err(Error::Order(format!(
                    "even vertex `{id}` comes after odd vertex `{o}`"
                )))
            }
            _ => {}
        }
    }
    Ok(OrderedCurveGraph {
        graph: graph.clone(),
        order: order.to_vec(),
    })
}

/// Embedded resolution graph of `x^p + y^q`, parity-normalized.
///
/// The point blow-ups follow the Euclidean algorithm on `(p, q)`: at each
/// step the curve is `x^a + y^b` at a corner of the divisors `{x=0}` and
/// `{y=0}`, and the blow-up replaces the larger exponent by the difference.
/// When the exponents agree the `gcd(p, q)` branches separate on the last
/// exceptional curve. Vertices are renamed `A1, A2, …` along a depth-first
/// walk from the first exceptional curve.
pub fn brieskorn_graph(p: i64, q: i64) -> Result<CurveGraph> {
    if p < 2 || q < 2 {
        return Err(Error::Precondition(format!(
            "Brieskorn exponents must be at least 2, got ({p}, {q})"
        )));
    }
    struct Div {
        e: i64,
        m: i64,
    }
    let mut divs: Vec<Div> = Vec::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    // x-divisor, y-divisor: indices into `divs`, or None for the coordinate axes.
    let (mut a, mut b) = (p, q);
    let (mut dx, mut dy): (Option<usize>, Option<usize>) = (None, None);
    loop {
        let mult = dx.map_or(0, |i| divs[i].m) + dy.map_or(0, |i| divs[i].m) + a.min(b);
        let new = divs.len();
        divs.push(Div { e: -1, m: mult });
        for d in [dx, dy].into_iter().flatten() {
            divs[d].e -= 1;
            edges.insert(key(d, new));
        }
        if let (Some(x), Some(y)) = (dx, dy) {
            edges.remove(&key(x, y));
        }
        if a == b {
            break;
        }
        if a < b {
            b -= a;
            dy = Some(new);
        } else {
            a -= b;
            dx = Some(new);
        }
    }
    let last = divs.len() - 1;
    let branches = a;

    // Depth-first renaming from the first exceptional curve.
    let mut names = vec![String::new(); divs.len()];
    let mut stack = vec![0usize];
    let mut counter = 0;
    let mut visited = vec![false; divs.len()];
    while let Some(v) = stack.pop() {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        counter += 1;
        names[v] = format!("A{counter}");
        let mut nbrs: Vec<usize> = edges
            .iter()
            .filter_map(|&(x, y)| {
                if x == v {
                    Some(y)
                } else if y == v {
                    Some(x)
                } else {
                    None
                }
            })
            .filter(|&n| !visited[n])
            .collect();
        nbrs.sort_unstable_by(|x, y| y.cmp(x));
        stack.extend(nbrs);
    }
    let mut vertices: Vec<Vertex> = divs
        .iter()
        .enumerate()
        .map(|(i, d)| Vertex {
            id: names[i].clone(),
            e: d.e,
            m: d.m,
        })
        .collect();
    vertices.sort_by_key(|v| v.id[1..].parse::<usize>().unwrap());
    let mut edge_list: Vec<[String; 2]> = edges
        .iter()
        .map(|&(x, y)| {
            let (nx, ny) = (&names[x], &names[y]);
            let (kx, ky): (usize, usize) = (nx[1..].parse().unwrap(), ny[1..].parse().unwrap());
            if kx < ky {
                [nx.clone(), ny.clone()]
            } else {
                [ny.clone(), nx.clone()]
            }
        })
        .collect();
    edge_list.sort_by_key(|[x, y]| {
        (
            x[1..].parse::<usize>().unwrap(),
            y[1..].parse::<usize>().unwrap(),
        )
    });
    let arrows = (1..=branches)
        .map(|k| Arrow {
            id: format!("St{k}"),
            attach: names[last].clone(),
            m: 1,
        })
        .collect();
    let g = CurveGraph {
        name: format!("brieskorn_{p}_{q}"),
        vertices,
        edges: edge_list,
        arrows,
    };
    normalize_parity(&g)
}

/// Applies `steps` random blow-ups (free or satellite) and re-normalizes.
///
/// Each step keeps the relation `(f)·A_i = 0` and negative definiteness, so
/// valid input yields valid output. The sequence is a pure function of
/// `(graph, seed, steps)`.
pub fn random_refinement(graph: &CurveGraph, seed: u64, steps: usize) -> Result<CurveGraph> {
    require_valid(graph)?;
    if let Some(d) = graph.parity_defect() {
        return Err(Error::NotNormalized(d));
    }
    if steps == 0 {
        return Ok(graph.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = graph.clone();
    for step in 0..steps {
        let new_id = g.fresh_id(&format!("R{}", step + 1));
        let satellite_sites = g.edges.len() + g.arrows.len();
        if satellite_sites > 0 && rng.gen_bool(0.5) {
            let k = rng.gen_range(0..satellite_sites);
            if k < g.edges.len() {
                g.blow_up_edge(k, new_id);
            } else {
                g.blow_up_arrow(k - g.edges.len(), new_id);
            }
        } else {
            let v = g.vertices.choose(&mut rng).unwrap().id.clone();
            g.blow_up_free(&v, new_id);
        }
    }
    normalize_parity(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cusp() -> CurveGraph {
        CurveGraph {
            name: "cusp".into(),
            vertices: vec![
                Vertex {
                    id: "A1".into(),
                    e: -3,
                    m: 2,
                },
                Vertex {
                    id: "A2".into(),
                    e: -1,
                    m: 6,
                },
                Vertex {
                    id: "A3".into(),
                    e: -2,
                    m: 3,
                },
            ],
            edges: vec![["A1".into(), "A2".into()], ["A2".into(), "A3".into()]],
            arrows: vec![Arrow {
                id: "St1".into(),
                attach: "A2".into(),
                m: 1,
            }],
        }
    }

    fn single(e: i64, m: i64, arrows: usize) -> CurveGraph {
        CurveGraph {
            name: "single".into(),
            vertices: vec![Vertex {
                id: "A".into(),
                e,
                m,
            }],
            edges: vec![],
            arrows: (1..=arrows)
                .map(|k| Arrow {
                    id: format!("St{k}"),
                    attach: "A".into(),
                    m: 1,
                })
                .collect(),
        }
    }

    #[test]
    fn cusp_and_node_are_valid() {
        assert!(validate(&cusp()).unwrap().is_valid());
        assert!(validate(&single(-1, 2, 2)).unwrap().is_valid());
    }

    #[test]
    fn relation_violation_is_reported() {
        let r = validate(&single(-1, 3, 1)).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation::Relation {
                vertex: "A".into(),
                residual: -2
            }]
        );
    }

    #[test]
    fn structural_errors_are_errors() {
        let mut g = cusp();
        g.edges.push(["A1".into(), "A9".into()]);
        assert!(matches!(validate(&g), Err(Error::Structure(_))));
        let mut g = cusp();
        g.vertices.push(Vertex {
            id: "A1".into(),
            e: -1,
            m: 1,
        });
        assert!(matches!(validate(&g), Err(Error::Structure(_))));
    }

    #[test]
    fn multi_edges_and_bad_arrows_rejected() {
        let mut g = cusp();
        g.edges.push(["A2".into(), "A1".into()]);
        let r = validate(&g).unwrap();
        assert!(r.violations.contains(&Violation::MultipleEdge {
            a: "A1".into(),
            b: "A2".into()
        }));
        let mut g = single(-1, 2, 2);
        g.arrows[0].m = 2;
        let r = validate(&g).unwrap();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ArrowMultiplicity { .. })));
        let empty = CurveGraph {
            name: "e".into(),
            vertices: vec![],
            edges: vec![],
            arrows: vec![],
        };
        assert_eq!(
            validate(&empty).unwrap().violations,
            vec![Violation::EmptyGraph]
        );
    }

    #[test]
    fn normalize_inserts_between_odd_pairs() {
        let g = single(-2, 1, 2);
        let n = normalize_parity(&g).unwrap();
        assert_eq!(n.vertex("A").unwrap().e, -4);
        assert_eq!(n.vertices.len(), 3);
        for v in &n.vertices[1..] {
            assert_eq!((v.e, v.m), (-1, 2));
        }
        assert!(n.arrows.iter().all(|a| a.attach != "A"));
        assert!(validate(&n).unwrap().is_valid());
        assert!(n.is_parity_normalized());
    }

    #[test]
    fn normalize_leaves_cusp_alone() {
        assert_eq!(normalize_parity(&cusp()).unwrap(), cusp());
        let node = single(-1, 2, 2);
        assert_eq!(normalize_parity(&node).unwrap(), node);
    }

    #[test]
    fn order_puts_even_first() {
        let o = order_vertices(&cusp()).unwrap();
        assert_eq!(o.order, vec!["A1", "A2", "A3"]);
        let g = CurveGraph {
            name: "t".into(),
            vertices: vec![
                Vertex {
                    id: "Z".into(),
                    e: -2,
                    m: 1,
                },
                Vertex {
                    id: "B".into(),
                    e: -1,
                    m: 2,
                },
            ],
            edges: vec![["Z".into(), "B".into()]],
            arrows: vec![Arrow {
                id: "s".into(),
                attach: "B".into(),
                m: 1,
            }],
        };
        assert!(validate(&g).unwrap().is_valid());
        assert_eq!(order_vertices(&g).unwrap().order, vec!["B", "Z"]);
    }

    #[test]
    fn order_requires_normalized_graph() {
        assert!(matches!(
            order_vertices(&single(-2, 1, 2)),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn explicit_order_checked() {
        let g = cusp();
        assert!(with_order(&g, &["A2".into(), "A1".into(), "A3".into()]).is_ok());
        assert!(matches!(
            with_order(&g, &["A3".into(), "A1".into(), "A2".into()]),
            Err(Error::Order(_))
        ));
        assert!(matches!(
            with_order(&g, &["A1".into(), "A2".into()]),
            Err(Error::Order(_))
        ));
    }

    #[test]
    fn brieskorn_small_cases() {
        let c = brieskorn_graph(2, 3).unwrap();
        assert_eq!(c.vertices, cusp().vertices);
        assert_eq!(c.edges, cusp().edges);
        assert_eq!(c.arrows, cusp().arrows);

        let n = brieskorn_graph(2, 2).unwrap();
        assert_eq!(
            n.vertices,
            vec![Vertex {
                id: "A1".into(),
                e: -1,
                m: 2
            }]
        );
        assert_eq!(n.arrows.len(), 2);

        let g = brieskorn_graph(2, 5).unwrap();
        assert!(validate(&g).unwrap().is_valid());
        let ms: Vec<i64> = g.vertices.iter().map(|v| v.m).collect();
        assert_eq!(ms, vec![2, 4, 10, 5]);
        assert!(brieskorn_graph(1, 3).is_err());
    }

    #[test]
    fn brieskorn_general_exponents_valid() {
        for p in 2..7 {
            for q in 2..9 {
                let g = brieskorn_graph(p, q).unwrap();
                assert!(validate(&g).unwrap().is_valid(), "({p},{q})");
                assert!(g.is_parity_normalized());
                let branches = num_integer_gcd(p, q);
                assert_eq!(g.arrows.len() as i64, branches);
            }
        }
    }

    fn num_integer_gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a
        } else {
            num_integer_gcd(b, a % b)
        }
    }

    #[test]
    fn free_refinement_step_on_node() {
        // Find a seed whose single step is a free blow-up and check its effect.
        let node = single(-1, 2, 2);
        let mut found = false;
        for seed in 0..64 {
            let r = random_refinement(&node, seed, 1).unwrap();
            if r.arrows.iter().all(|a| a.attach == "A") {
                assert_eq!(r.vertex("A").unwrap().e, -2);
                assert_eq!(r.vertices.len(), 2);
                assert_eq!((r.vertices[1].e, r.vertices[1].m), (-1, 2));
                found = true;
                break;
            }
        }
        assert!(found);
        assert_eq!(random_refinement(&node, 5, 0).unwrap(), node);
    }

    #[test]
    fn refinement_is_deterministic() {
        let a = random_refinement(&cusp(), 42, 6).unwrap();
        let b = random_refinement(&cusp(), 42, 6).unwrap();
        assert_eq!(a, b);
    }
}
