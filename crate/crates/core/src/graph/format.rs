//! Line-oriented graph files:
//!
//! ```text
//! # comment
//! vertex <name> <kirchhoff|neumann|dirichlet>
//! bond <name> <vertexA> <vertexB> <length>
//! ```

use super::{is_valid_name, BoundaryKind, Graph, GraphSpec};
use crate::{Error, Result};

pub fn parse_graph_file(text: &str) -> Result<Graph> {
    parse_spec(text)?.build()
}

pub(crate) fn parse_spec(text: &str) -> Result<GraphSpec> {
    let mut spec = GraphSpec::default();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "vertex" => {
                let [_, name, kind] = tokens[..] else {
                    return Err(syntax(format!(
                        "expected `vertex <name> <kind>`, got {} fields",
                        tokens.len()
                    )));
                };
                check_name(name).map_err(syntax)?;
                let kind = match kind {
                    "kirchhoff" => BoundaryKind::Kirchhoff,
                    "neumann" => BoundaryKind::Neumann,
                    "dirichlet" => BoundaryKind::Dirichlet,
                    other => return Err(syntax(format!("unknown boundary kind `{other}`"))),
                };
                spec.vertex(name, kind);
            }
            "bond" => {
                let [_, name, from, to, length] = tokens[..] else {
                    return Err(syntax(format!(
                        "expected `bond <name> <vertexA> <vertexB> <length>`, got {} fields",
                        tokens.len()
                    )));
                };
                for n in [name, from, to] {
                    check_name(n).map_err(syntax)?;
                }
                let length: f64 = length
                    .parse()
                    .ok()
                    .filter(|x: &f64| x.is_finite())
                    .ok_or_else(|| syntax(format!("invalid length `{length}`")))?;
                spec.bond(name, from, to, length);
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }
    Ok(spec)
}

fn check_name(name: &str) -> std::result::Result<(), String> {
    if is_valid_name(name) {
        Ok(())
    } else {
        Err(format!("invalid name `{name}`"))
    }
}

/// Serialize in the format read by [`parse_graph_file`]. Lengths use the
/// shortest representation that parses back to the same `f64`.
pub fn to_graph_file(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        out.push_str(&format!("vertex {} {}\n", v.name, v.kind));
    }
    for b in g.bonds() {
        out.push_str(&format!(
            "bond {} {} {} {}\n",
            b.name,
            g.vertices()[b.ends[0]].name,
            g.vertices()[b.ends[1]].name,
            b.length
        ));
    }
    out
}
