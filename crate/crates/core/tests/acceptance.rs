//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::{fixture, fixture_path};
use surfres::assembler::{DivisorComplex, SurfaceKind};
use surfres::curve_graph::{random_refinement, validate};
use surfres::local_models::{
    blow_up_count, c1m_self_int, fiber_chain, local_blowup_oracle, picard_rank,
};
use surfres::surface_graph::{
    a_chain, blow_down_minimal, is_isomorphic, strict_transform_curve, SGraph, SVertex,
};
use surfres::verifier::{
    check_divisibility, check_fiber_balance, check_negative_definite, check_picard_rank,
    check_triple_point_formula, pipeline,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Outcome {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn binary(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_surfres"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn sgraph(nodes: &[i64], edges: &[(usize, usize)]) -> SGraph {
    SGraph {
        vertices: nodes
            .iter()
            .enumerate()
            .map(|(k, &e)| SVertex {
                id: format!("v{k}"),
                from_vertex: String::new(),
                component: None,
                genus: 0,
                self_int: e,
            })
            .collect(),
        edges: edges
            .iter()
            .map(|&(a, b)| [format!("v{a}"), format!("v{b}")])
            .collect(),
    }
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let cusp = fixture_path("cusp.json");
    let cusp = cusp.to_str().unwrap();
    let complex: DivisorComplex =
        serde_json::from_slice(&binary(&["build", cusp])?).map_err(|e| e.to_string())?;
    let mut compact: Vec<(String, String, i64)> = complex
        .compact_surfaces()
        .map(|s| (s.owner.clone().unwrap(), s.param.clone(), s.g_mult))
        .collect();
    compact.sort();
    let mut want: Vec<(String, String, i64)> = [
        ("A1", "X^m_3", 2),
        ("A2", "X_0", 2),
        ("A2", "X_1", 4),
        ("A2", "X^m_2", 6),
        ("A3", "X_1", 2),
        ("A3", "X_0", 6),
        ("A3", "X_1", 3),
    ]
    .iter()
    .map(|&(a, b, c)| (a.to_string(), b.to_string(), c))
    .collect();
    want.sort();
    ensure(compact == want, || format!("compact surfaces {compact:?}"))?;
    let es: Vec<i64> = complex
        .surfaces
        .iter()
        .filter(|s| s.kind == SurfaceKind::NoncompactE)
        .map(|s| s.g_mult)
        .collect();
    ensure(es == vec![0, 0, 0], || {
        format!("non-compact E g-mults {es:?}")
    })?;

    let g: SGraph =
        serde_json::from_slice(&binary(&["surface-graph", cusp])?).map_err(|e| e.to_string())?;
    let expected = sgraph(&[-3, -3, -2, -1], &[(0, 2), (1, 2), (2, 3)]);
    ensure(is_isomorphic(&g, &expected), || {
        format!("surface graph {g:?}")
    })?;
    within(Duration::from_secs(1), start, "build + surface-graph")
}

fn minimal_models() -> Outcome {
    let start = Instant::now();
    let p = pipeline(&fixture("cusp.json"), None).map_err(|e| e.to_string())?;
    ensure(
        is_isomorphic(&blow_down_minimal(&p.sgraph).graph, &a_chain(2)),
        || "cusp does not reduce to A2".into(),
    )?;
    within(Duration::from_secs(1), start, "cusp")?;
    for q in 3..=9usize {
        let start = Instant::now();
        let p = pipeline(&fixture(&format!("brieskorn_2_{q}.json")), None)
            .map_err(|e| e.to_string())?;
        let min = blow_down_minimal(&p.sgraph).graph;
        ensure(is_isomorphic(&min, &a_chain(q - 1)), || {
            format!("(2,{q}) gives {min:?}")
        })?;
        within(Duration::from_secs(1), start, &format!("(2,{q})"))?;
    }
    Ok(())
}

fn node_sanity() -> Outcome {
    let p = pipeline(&fixture("node.json"), None).map_err(|e| e.to_string())?;
    let v = &p.sgraph.vertices;
    ensure(
        v.len() == 1 && v[0].genus == 0 && v[0].self_int == -2 && p.sgraph.edges.is_empty(),
        || format!("node graph {:?}", p.sgraph),
    )?;
    ensure(blow_down_minimal(&p.sgraph).contractions == 0, || {
        "node graph is not minimal".into()
    })
}

fn oracle_equivalence() -> Outcome {
    for m in 1..=50 {
        let (a, b) = (fiber_chain(m), local_blowup_oracle(m));
        ensure(matches!((&a, &b), (Ok(x), Ok(y)) if x == y), || {
            format!("m' = {m}: {a:?} vs {b:?}")
        })?;
    }
    let names = ["cusp.json", "node.json", "cusp_refined_seed7_steps6.json"]
        .into_iter()
        .map(String::from)
        .chain((3..=9).map(|q| format!("brieskorn_2_{q}.json")));
    for name in names {
        let p = pipeline(&fixture(&name), None).map_err(|e| e.to_string())?;
        let r = check_picard_rank(&p.complex);
        ensure(r.all_pass(), || {
            format!("{name}: {:?}", r.failures().collect::<Vec<_>>())
        })?;
        for s in p.complex.compact_surfaces() {
            let weights = s
                .level
                .as_ref()
                .unwrap()
                .modified
                .as_ref()
                .map(|m| m.weights())
                .unwrap_or_default();
            let want = 2 + weights
                .iter()
                .map(|&w| blow_up_count(w).unwrap())
                .sum::<usize>();
            ensure(s.picard_rank == Some(want), || {
                format!("{name} {}: rank {:?}", s.id, s.picard_rank)
            })?;
        }
    }
    Ok(())
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    for name in ["cusp.json", "node.json"] {
        let base = fixture(name);
        let reference = pipeline(&base, None).map_err(|e| e.to_string())?.minimal;
        for seed in 1..=20u64 {
            let steps = (seed as usize % 8) + 1;
            let tag = format!("{name} seed {seed} steps {steps}");
            let g = random_refinement(&base, seed, steps).map_err(|e| format!("{tag}: {e}"))?;
            ensure(validate(&g).map_err(|e| e.to_string())?.is_valid(), || {
                format!("{tag}: invalid")
            })?;
            let p = pipeline(&g, None).map_err(|e| format!("{tag}: {e}"))?;
            for r in [
                check_fiber_balance(&p.complex),
                check_triple_point_formula(&p.complex),
                check_divisibility(&p.complex),
                check_negative_definite(&p.sgraph),
            ] {
                ensure(r.all_pass(), || format!("{tag}: {:?}", r.failures().next()))?;
            }
            ensure(is_isomorphic(&p.minimal, &reference), || {
                format!("{tag}: minimal graph differs")
            })?;
        }
    }
    within(Duration::from_secs(30), start, "property suite")
}

fn formula_checks() -> Outcome {
    let c1 = c1m_self_int(2, &[3, 1]).map_err(|e| e.to_string())?;
    ensure(c1 == 0, || format!("c1m_self_int(2, [3, 1]) = {c1}"))?;
    let rank = picard_rank(&[3, 1]).map_err(|e| e.to_string())?;
    ensure(rank == 5, || format!("picard_rank([3, 1]) = {rank}"))?;

    let p = pipeline(&fixture("cusp.json"), None).map_err(|e| e.to_string())?;
    let s = |v: &str| strict_transform_curve(&p.complex, v).map_err(|e| e.to_string());
    let (a1, a2, a3) = (s("A1")?, s("A2")?, s("A3")?);
    ensure(
        a1.components == 2 && a1.genus == 0 && a1.self_int_in_stg == -3,
        || format!("A1: {a1:?}"),
    )?;
    ensure(
        a2.components == 1 && a2.branch_count == 2 && a2.genus == 0,
        || format!("A2: {a2:?}"),
    )?;
    ensure(a2.genus == (a2.branch_count - 2) / 2, || {
        format!("A2 genus: {a2:?}")
    })?;
    let bottom = p.complex.tower("A2").unwrap().bottom_surface().unwrap();
    let m_odd = bottom
        .weights()
        .iter()
        .filter(|&&w| w % 2 == 1 && w >= 3)
        .count() as i64;
    let expected = 4 * bottom.c1m_self_int + 2 * m_odd;
    ensure(
        expected == 2 && a2.self_int_in_host == Some(expected),
        || format!("A2 host: {a2:?}"),
    )?;
    ensure(a2.self_int_in_stg == -2, || format!("A2 in St(g): {a2:?}"))?;
    ensure(
        a3.components == 1 && a3.genus == 0 && a3.self_int_in_stg == -1,
        || format!("A3: {a3:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("worked example reproduction", worked_example),
        ("minimal-model identification", minimal_models),
        ("node sanity", node_sanity),
        ("oracle equivalence and picard ranks", oracle_equivalence),
        ("property suite over random refinements", property_suite),
        ("formula unit checks", formula_checks),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let ms = start.elapsed().as_millis();
        match res {
            Ok(()) => println!("criterion {} PASS  {name} ({ms} ms)", k + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {} FAIL  {name} ({ms} ms): {e}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
