//! JSON and DOT formats and the command implementations behind the binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::assembler::{build_complex, DivisorComplex, SurfaceKind};
use crate::curve_graph::{
    normalize_parity, order_vertices, random_refinement, validate, with_order, CurveGraph,
};
use crate::error::{Error, Result};
use crate::surface_graph::{blow_down_minimal, surface_dual_graph, SGraph};
use crate::verifier::{run_all, CheckEntry, CheckReport, RunOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliConfig {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub order: Option<Vec<String>>,
    pub minimal: bool,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
}

/// What a command produced: the document and whether its checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmdOutput {
    pub text: String,
    pub ok: bool,
}

pub fn read_curve_graph(path: &Path) -> Result<CurveGraph> {
    let text = fs::read_to_string(path)?;
    parse_curve_graph(&text)
}

pub fn parse_curve_graph(text: &str) -> Result<CurveGraph> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn kind_name(k: SurfaceKind) -> &'static str {
    match k {
        SurfaceKind::CompactTowerLevel => "compact_tower_level",
        SurfaceKind::NoncompactE => "noncompact_E(A)",
        SurfaceKind::StrictTransformSheet => "strict_transform_sheet",
        SurfaceKind::NoncompactDTilde => "noncompact_D~",
    }
}

fn fmt_self_int(x: Option<i64>) -> String {
    x.map_or("?".into(), |v| v.to_string())
}

/// Surface adjacency multigraph; one edge per intersection curve.
pub fn complex_dot(c: &DivisorComplex) -> String {
    let mut out = String::from("graph complex {\n  node [shape=box];\n");
    for s in &c.surfaces {
        let label = format!("{}/{} ({})", kind_name(s.kind), s.param, s.g_mult);
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\"];",
            dot_escape(&s.id),
            dot_escape(&label)
        );
    }
    for curve in &c.curves {
        if let [a, b] = curve.sides.as_slice() {
            let style = if curve.compact { "" } else { ", style=dashed" };
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}|{}\"{style}];",
                dot_escape(&a.surface),
                dot_escape(&b.surface),
                fmt_self_int(a.self_int),
                fmt_self_int(b.self_int)
            );
        }
    }
    out.push_str("}\n");
    out
}

pub fn sgraph_dot(g: &SGraph) -> String {
    let mut out = String::from("graph sgraph {\n");
    for v in &g.vertices {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"[{}] {}\"];",
            dot_escape(&v.id),
            v.genus,
            v.self_int
        );
    }
    for [a, b] in &g.edges {
        let _ = writeln!(out, "  \"{}\" -- \"{}\";", dot_escape(a), dot_escape(b));
    }
    out.push_str("}\n");
    out
}

pub fn curve_graph_dot(g: &CurveGraph) -> String {
    let mut out = String::from("graph curves {\n");
    for v in &g.vertices {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{} ({}, {})\"];",
            dot_escape(&v.id),
            dot_escape(&v.id),
            v.e,
            v.m
        );
    }
    for a in &g.arrows {
        let _ = writeln!(out, "  \"{}\" [shape=point];", dot_escape(&a.id));
        let _ = writeln!(
            out,
            "  \"{}\" -- \"{}\";",
            dot_escape(&a.attach),
            dot_escape(&a.id)
        );
    }
    for [a, b] in &g.edges {
        let _ = writeln!(out, "  \"{}\" -- \"{}\";", dot_escape(a), dot_escape(b));
    }
    out.push_str("}\n");
    out
}

/// Reads the input and applies the optional refinement.
pub fn load_input(cfg: &CliConfig) -> Result<CurveGraph> {
    let g = read_curve_graph(&cfg.input)?;
    match (cfg.seed, cfg.steps) {
        (None, None) => Ok(g),
        (seed, steps) => random_refinement(
            &normalize_parity(&g)?,
            seed.unwrap_or(0),
            steps.unwrap_or(4),
        ),
    }
}

fn build_from(cfg: &CliConfig, g: &CurveGraph) -> Result<DivisorComplex> {
    let normalized = normalize_parity(g)?;
    let ordered = match &cfg.order {
        Some(o) => with_order(&normalized, o)?,
        None => order_vertices(&normalized)?,
    };
    build_complex(&ordered)
}

pub fn cmd_validate(cfg: &CliConfig) -> Result<CmdOutput> {
    let g = load_input(cfg)?;
    let report = validate(&g)?;
    let mut r = CheckReport::default();
    if report.violations.is_empty() {
        r.entries.push(CheckEntry {
            check: "validate".into(),
            scope: g.name.clone(),
            pass: true,
            details: "no violations".into(),
        });
    }
    for v in &report.violations {
        r.entries.push(CheckEntry {
            check: "validate".into(),
            scope: g.name.clone(),
            pass: false,
            details: serde_json::to_string(v)?,
        });
    }
    if let Some(o) = &cfg.order {
        let normalized = normalize_parity(&g)?;
        let res = with_order(&normalized, o);
        r.entries.push(CheckEntry {
            check: "order".into(),
            scope: g.name.clone(),
            pass: res.is_ok(),
            details: res.err().map_or("accepted".into(), |e| e.to_string()),
        });
    }
    r.entries.sort();
    Ok(CmdOutput {
        text: to_json(&r)?,
        ok: r.all_pass(),
    })
}

pub fn cmd_normalize(cfg: &CliConfig) -> Result<CmdOutput> {
    let g = normalize_parity(&load_input(cfg)?)?;
    let text = match cfg.format {
        Format::Json => to_json(&g)?,
        Format::Dot => curve_graph_dot(&g),
    };
    Ok(CmdOutput { text, ok: true })
}

pub fn cmd_build(cfg: &CliConfig) -> Result<CmdOutput> {
    let c = build_from(cfg, &load_input(cfg)?)?;
    let text = match cfg.format {
        Format::Json => to_json(&c)?,
        Format::Dot => complex_dot(&c),
    };
    Ok(CmdOutput { text, ok: true })
}

pub fn cmd_surface_graph(cfg: &CliConfig) -> Result<CmdOutput> {
    let c = build_from(cfg, &load_input(cfg)?)?;
    let mut g = surface_dual_graph(&c)?;
    let mut ok = true;
    if cfg.minimal {
        let b = blow_down_minimal(&g);
        ok = b.non_contractible.is_empty();
        g = b.graph;
    }
    let text = match cfg.format {
        Format::Json => to_json(&g)?,
        Format::Dot => sgraph_dot(&g),
    };
    Ok(CmdOutput { text, ok })
}

pub fn cmd_check(cfg: &CliConfig) -> Result<CmdOutput> {
    let g = load_input(cfg)?;
    let r = run_all(&g, cfg.order.as_deref(), &RunOptions::default())?;
    Ok(CmdOutput {
        text: to_json(&r)?,
        ok: r.all_pass(),
    })
}

pub fn cmd_render(cfg: &CliConfig) -> Result<CmdOutput> {
    let c = build_from(cfg, &load_input(cfg)?)?;
    Ok(CmdOutput {
        text: complex_dot(&c),
        ok: true,
    })
}

pub fn parse_order(s: &str) -> Result<Vec<String>> {
    let ids: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    if ids.iter().any(String::is_empty) {
        return Err(Error::Order(format!("empty vertex id in `{s}`")));
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve_graph::tests_support::cusp_graph;

    #[test]
    fn curve_graph_round_trip() {
        let g = cusp_graph();
        let back = parse_curve_graph(&to_json(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn complex_round_trip() {
        let c = build_complex(&order_vertices(&cusp_graph()).unwrap()).unwrap();
        let back: DivisorComplex = serde_json::from_str(&to_json(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_curve_graph("{\n  \"name\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn dot_labels() {
        let c = build_complex(&order_vertices(&cusp_graph()).unwrap()).unwrap();
        let dot = complex_dot(&c);
        assert!(dot.contains("compact_tower_level/X^m_2 (6)"));
        assert!(dot.starts_with("graph complex {") && dot.ends_with("}\n"));
        let s = sgraph_dot(&surface_dual_graph(&c).unwrap());
        assert!(s.contains("[label=\"[0] -3\"]"));
    }

    #[test]
    fn order_lists() {
        assert_eq!(parse_order("A1, A2").unwrap(), vec!["A1", "A2"]);
        assert!(parse_order("A1,,A2").is_err());
    }
}
