//! Exact cross-checks over a built complex. Faults are reported, never repaired.

use serde::{Deserialize, Serialize};

use crate::assembler::{build_complex, self_intersection_class, DivisorComplex, SurfaceKind};
use crate::curve_graph::{
    normalize_parity, order_vertices, random_refinement, validate, with_order, CurveGraph,
};
use crate::error::Result;
use crate::lattice;
use crate::local_models::{blow_up_count, fiber_chain, local_blowup_oracle, ChainDescriptor};
use crate::surface_graph::{
    blow_down_minimal, is_isomorphic, strict_transform_curve, surface_dual_graph, SGraph,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CheckEntry {
    pub check: String,
    pub scope: String,
    pub pass: bool,
    pub details: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    fn push(
        &mut self,
        check: &str,
        scope: impl Into<String>,
        pass: bool,
        details: impl Into<String>,
    ) {
        self.entries.push(CheckEntry {
            check: check.into(),
            scope: scope.into(),
            pass,
            details: details.into(),
        });
    }

    fn sorted(mut self) -> Self {
        self.entries.sort();
        self
    }

    pub fn merge(mut self, other: CheckReport) -> Self {
        self.entries.extend(other.entries);
        self.sorted()
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn of(&self, check: &str) -> impl Iterator<Item = &CheckEntry> {
        let check = check.to_string();
        self.entries.iter().filter(move |e| e.check == check)
    }
}

pub fn check_chain_balance(scope: &str, chain: &ChainDescriptor) -> CheckReport {
    let mut r = CheckReport::default();
    let res = chain.balance_residuals();
    let pass = res.iter().all(|&x| x == 0);
    r.push("fiber_balance", scope, pass, format!("residuals {res:?}"));
    r
}

pub fn check_fiber_balance(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for s in complex.compact_surfaces() {
        if let Some(m) = s.level.as_ref().and_then(|l| l.modified.as_ref()) {
            for p in &m.modified_points {
                let sub = check_chain_balance(&format!("{}@{}", s.id, p.label), &p.chain);
                r.entries.extend(sub.entries);
            }
        }
    }
    r.sorted()
}

pub fn check_triple_point_formula(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for c in complex
        .curves
        .iter()
        .filter(|c| c.compact && c.sides.len() == 2)
    {
        let (d1, d2) = (&c.sides[0], &c.sides[1]);
        let (Some(b), Some(a)) = (d1.self_int, d2.self_int) else {
            continue;
        };
        let (Ok(m1), Ok(m2)) = (complex.g_mult(&d1.surface), complex.g_mult(&d2.surface)) else {
            r.push(
                "triple_point_formula",
                &c.id,
                false,
                "unknown incident surface",
            );
            continue;
        };
        let mut triple = 0;
        for t in complex.triple_points_on(&c.id) {
            match complex.g_mult(&t.third) {
                Ok(m) => triple += m * t.count,
                Err(_) => {
                    r.push(
                        "triple_point_formula",
                        &c.id,
                        false,
                        format!("unknown third `{}`", t.third),
                    );
                }
            }
        }
        let total = m1 * a + m2 * b + triple;
        r.push(
            "triple_point_formula",
            &c.id,
            total == 0,
            format!("{m1}·({a}) + {m2}·({b}) + {triple} = {total}"),
        );
    }
    r.sorted()
}

/// Triple points seen from the second compact side agree with the stored ones.
pub fn check_triple_point_symmetry(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for c in complex.curves.iter().filter(|c| c.compact) {
        let compact: Vec<&str> = c
            .sides
            .iter()
            .filter(|s| complex.surface(&s.surface).is_some_and(|x| x.is_compact()))
            .map(|s| s.surface.as_str())
            .collect();
        if compact.len() < 2 {
            continue;
        }
        let norm = |v: Vec<(String, i64)>| {
            let mut v = v;
            v.sort();
            v
        };
        let stored = norm(
            complex
                .triple_points_on(&c.id)
                .map(|t| (t.third.clone(), t.count))
                .collect(),
        );
        match complex.triple_points_via(c, compact[1]) {
            Ok(tp) => {
                let seen = norm(tp.into_iter().map(|t| (t.third, t.count)).collect());
                let pass = seen == stored;
                r.push(
                    "triple_point_symmetry",
                    &c.id,
                    pass,
                    format!("{stored:?} vs {seen:?}"),
                );
            }
            Err(e) => r.push("triple_point_symmetry", &c.id, false, e.to_string()),
        }
    }
    r.sorted()
}

pub fn check_negative_definite(g: &SGraph) -> CheckReport {
    check_negative_definite_scoped(g, "sgraph")
}

fn check_negative_definite_scoped(g: &SGraph, scope: &str) -> CheckReport {
    let mut r = CheckReport::default();
    let m = g.intersection_matrix();
    match lattice::first_non_negative_definite_minor(&m) {
        None => r.push(
            "negative_definite",
            scope,
            true,
            format!("{} vertices", m.len()),
        ),
        Some(k) => r.push(
            "negative_definite",
            scope,
            false,
            format!("leading minor {k} has the wrong sign"),
        ),
    }
    r
}

pub fn check_picard_rank(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for s in complex.compact_surfaces() {
        let level = s.level.as_ref().expect("compact level");
        let weights = level
            .modified
            .as_ref()
            .map(|m| m.weights())
            .unwrap_or_default();
        let expected = weights
            .iter()
            .map(|&w| blow_up_count(w))
            .sum::<Result<usize>>()
            .map(|x| x + 2);
        let lat = complex.lattice(&s.id).expect("compact level");
        let unimodular = lattice::determinant(&lat.gram).magnitude() == &1u32.into();
        let pass = expected.as_ref().ok() == Some(&lat.rank())
            && s.picard_rank == Some(lat.rank())
            && unimodular;
        r.push(
            "picard_rank",
            &s.id,
            pass,
            format!(
                "recorded {:?}, basis {}, expected {:?}, unimodular {unimodular}",
                s.picard_rank,
                lat.rank(),
                expected.ok()
            ),
        );
    }
    r.sorted()
}

pub fn check_divisibility(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for s in complex.compact_surfaces() {
        match self_intersection_class(complex, &s.id) {
            Ok(c) => r.push(
                "divisibility",
                &s.id,
                true,
                format!("E² = {:?} over {:?}", c.coeffs, c.basis),
            ),
            Err(e) => r.push("divisibility", &s.id, false, e.to_string()),
        }
    }
    r.sorted()
}

/// `E_k²·C` equals the self-intersection of `C` in the other surface through it.
pub fn check_normal_bundles(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for s in complex.compact_surfaces() {
        let Ok(e2) = self_intersection_class(complex, &s.id) else {
            continue;
        };
        let lat = complex.lattice(&s.id).unwrap();
        for c in complex.curves_on(&s.id) {
            let Some(other) = c.other_side(&s.id).and_then(|o| o.self_int) else {
                continue;
            };
            let scope = format!("{}@{}", c.id, s.id);
            match complex.class_on(c, &s.id) {
                Ok(cls) => {
                    let v = lat.pair(&e2.coeffs, &cls);
                    r.push(
                        "normal_bundle",
                        scope,
                        v == other,
                        format!("E²·C = {v}, C² in other = {other}"),
                    );
                }
                Err(e) => r.push("normal_bundle", scope, false, e.to_string()),
            }
        }
    }
    r.sorted()
}

/// Recorded self-intersections agree with the squares of the lattice classes.
pub fn check_classes(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for c in &complex.curves {
        for side in &c.sides {
            let Some(lat) = complex.lattice(&side.surface) else {
                continue;
            };
            let scope = format!("{}@{}", c.id, side.surface);
            match complex.class_on(c, &side.surface) {
                Ok(cls) => {
                    let sq = lat.pair(&cls, &cls);
                    r.push(
                        "class_square",
                        scope,
                        Some(sq) == side.self_int,
                        format!("class² = {sq}, recorded {:?}", side.self_int),
                    );
                }
                Err(e) => r.push("class_square", scope, false, e.to_string()),
            }
        }
    }
    r.sorted()
}

pub fn check_surface_counts(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    let expected: Result<usize> = complex.contexts.iter().map(|c| blow_up_count(c.m)).sum();
    let compact = complex.compact_surfaces().count();
    let es = complex
        .surfaces
        .iter()
        .filter(|s| s.kind == SurfaceKind::NoncompactE)
        .count();
    r.push(
        "surface_count",
        "compact",
        expected.as_ref().ok() == Some(&compact),
        format!("{compact} compact levels, expected {:?}", expected.ok()),
    );
    r.push(
        "surface_count",
        "noncompact_E",
        es == complex.order.len(),
        format!("{es} for {} vertices", complex.order.len()),
    );
    r
}

pub fn check_strict_transforms(complex: &DivisorComplex) -> CheckReport {
    let mut r = CheckReport::default();
    for v in &complex.order {
        match strict_transform_curve(complex, v) {
            Ok(d) => {
                let degree = d.class_in_host.as_ref().map(|c| {
                    let lat = complex.lattice(&c.surface).unwrap();
                    let mut f = vec![0; lat.rank()];
                    f[1] = 1;
                    lat.pair(&c.coeffs, &f)
                });
                // a bisection over even vertices, a section of the middle level otherwise
                let want = if complex.context(v).is_some_and(|c| c.is_even()) {
                    2
                } else {
                    1
                };
                let pass = degree.is_none_or(|x| x == want) && d.branch_count % 2 == 0;
                r.push(
                    "strict_transform",
                    v.clone(),
                    pass,
                    format!(
                        "components {}, genus {}, S·f = {degree:?}",
                        d.components, d.genus
                    ),
                );
            }
            Err(e) => r.push("strict_transform", v.clone(), false, e.to_string()),
        }
    }
    r.sorted()
}

pub fn check_oracle(weights: impl IntoIterator<Item = i64>) -> CheckReport {
    let mut r = CheckReport::default();
    let mut ws: Vec<i64> = weights.into_iter().collect();
    ws.sort();
    ws.dedup();
    for m in ws {
        let scope = format!("m'={m:03}");
        match (fiber_chain(m), local_blowup_oracle(m)) {
            (Ok(a), Ok(b)) => r.push("oracle", scope, a == b, format!("{:?}", a.pairs())),
            (a, b) => r.push(
                "oracle",
                scope,
                false,
                format!("{:?} / {:?}", a.err(), b.err()),
            ),
        }
    }
    r
}

pub fn check_complex(complex: &DivisorComplex) -> CheckReport {
    let weights: Vec<i64> = complex
        .compact_surfaces()
        .filter_map(|s| s.level.as_ref().and_then(|l| l.modified.as_ref()))
        .flat_map(|m| m.weights())
        .collect();
    check_fiber_balance(complex)
        .merge(check_triple_point_formula(complex))
        .merge(check_triple_point_symmetry(complex))
        .merge(check_picard_rank(complex))
        .merge(check_divisibility(complex))
        .merge(check_normal_bundles(complex))
        .merge(check_classes(complex))
        .merge(check_surface_counts(complex))
        .merge(check_strict_transforms(complex))
        .merge(check_oracle(weights))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub oracle_range: i64,
    pub refinement_seeds: Vec<u64>,
    pub refinement_steps: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle_range: 50,
            refinement_seeds: (0..4).collect(),
            refinement_steps: 4,
        }
    }
}

pub struct Pipeline {
    pub normalized: CurveGraph,
    pub complex: DivisorComplex,
    pub sgraph: SGraph,
    pub minimal: SGraph,
}

pub fn pipeline(graph: &CurveGraph, order: Option<&[String]>) -> Result<Pipeline> {
    let normalized = normalize_parity(graph)?;
    let ordered = match order {
        Some(o) => with_order(&normalized, o)?,
        None => order_vertices(&normalized)?,
    };
    let complex = build_complex(&ordered)?;
    let sgraph = surface_dual_graph(&complex)?;
    let minimal = blow_down_minimal(&sgraph).graph;
    Ok(Pipeline {
        normalized,
        complex,
        sgraph,
        minimal,
    })
}

/// Every check on one graph, including refinement invariance of the minimal graph.
pub fn run_all(
    graph: &CurveGraph,
    order: Option<&[String]>,
    opts: &RunOptions,
) -> Result<CheckReport> {
    let mut r = CheckReport::default();
    let report = validate(graph)?;
    r.push(
        "validate",
        graph.name.clone(),
        report.is_valid(),
        format!("{} violation(s)", report.violations.len()),
    );
    if !report.is_valid() {
        return Ok(r);
    }
    let p = match pipeline(graph, order) {
        Ok(p) => p,
        Err(e) => {
            r.push("pipeline", graph.name.clone(), false, e.to_string());
            return Ok(r.sorted());
        }
    };
    let mut r = r
        .merge(check_complex(&p.complex))
        .merge(check_oracle(1..=opts.oracle_range))
        .merge(check_negative_definite(&p.sgraph))
        .merge(check_negative_definite_scoped(&p.minimal, "minimal"));
    for &seed in &opts.refinement_seeds {
        let scope = format!("seed={seed},steps={}", opts.refinement_steps);
        let refined =
            random_refinement(graph, seed, opts.refinement_steps).and_then(|g| pipeline(&g, None));
        match refined {
            Ok(q) => {
                let same = is_isomorphic(&q.minimal, &p.minimal);
                r.push(
                    "refinement_invariance",
                    scope,
                    same,
                    format!(
                        "{} → {} vertices",
                        q.sgraph.vertices.len(),
                        q.minimal.vertices.len()
                    ),
                );
            }
            Err(e) => r.push("refinement_invariance", scope, false, e.to_string()),
        }
    }
    r.entries.sort();
    Ok(r)
}
