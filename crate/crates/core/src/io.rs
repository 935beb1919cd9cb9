//! Reading and writing complexes.
//!
//! Text format:
//!
//! ```text
//! dim 2
//! vertices 4
//! 0 a
//! 1 b
//! 2
//! 3 d
//! facets 4
//! 0 1 2
//! ...
//! ```
//!
//! A vertex line is an id optionally followed by a label (the rest of the
//! line). Blank lines and lines starting with `#` are ignored. The JSON form
//! carries the same fields.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, SimplicialComplex, VertexId};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonVertex {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonComplex {
    pub dim: usize,
    pub vertices: Vec<JsonVertex>,
    pub facets: Vec<Vec<VertexId>>,
}

/// Vertex order of the canonical form: by label, then id; unlabeled last.
fn vertex_order(k: &SimplicialComplex) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = (0..k.vertex_count() as VertexId).collect();
    order.sort_by(|&a, &b| match (k.label(a), k.label(b)) {
        (Some(x), Some(y)) => x.cmp(y).then(a.cmp(&b)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.cmp(&b),
    });
    order
}

/// Deterministic text form: vertices by label then id, facets sorted.
pub fn canonical_serialize(k: &SimplicialComplex) -> String {
    let mut out = String::with_capacity(16 * (k.vertex_count() + k.facet_count() * (k.dim() + 1)));
    writeln!(out, "dim {}", k.dim()).unwrap();
    writeln!(out, "vertices {}", k.vertex_count()).unwrap();
    for v in vertex_order(k) {
        match k.label(v) {
            Some(l) => writeln!(out, "{v} {l}").unwrap(),
            None => writeln!(out, "{v}").unwrap(),
        }
    }
    let facets = k.sorted_facets();
    writeln!(out, "facets {}", facets.len()).unwrap();
    for f in facets {
        let mut first = true;
        for x in f {
            if !first {
                out.push(' ');
            }
            first = false;
            write!(out, "{x}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn to_json(k: &SimplicialComplex) -> JsonComplex {
    JsonComplex {
        dim: k.dim(),
        vertices: vertex_order(k)
            .into_iter()
            .map(|v| JsonVertex { id: v, label: k.label(v).map(str::to_string) })
            .collect(),
        facets: k.sorted_facets().into_iter().map(<[VertexId]>::to_vec).collect(),
    }
}

pub fn to_json_string(k: &SimplicialComplex) -> String {
    serde_json::to_string_pretty(&to_json(k)).expect("complexes serialize")
}

fn build(
    dim: usize,
    vertices: Vec<(VertexId, Option<String>)>,
    facets: Vec<Vec<VertexId>>,
) -> Result<SimplicialComplex, IoError> {
    let n = vertices.len();
    let mut labels: Vec<Option<Option<String>>> = vec![None; n];
    for (id, label) in vertices {
        let slot = labels
            .get_mut(id as usize)
            .ok_or_else(|| IoError::Parse { line: 0, message: format!("vertex id {id} outside 0..{n}") })?;
        if slot.is_some() {
            return Err(IoError::Parse { line: 0, message: format!("vertex id {id} listed twice") });
        }
        *slot = Some(label);
    }
    let labels: Vec<Option<String>> = labels.into_iter().map(|l| l.expect("every id listed once")).collect();
    if let Some(f) = facets.iter().find(|f| f.len() != dim + 1) {
        return Err(IoError::Parse { line: 0, message: format!("facet {f:?} does not have {} vertices", dim + 1) });
    }
    Ok(SimplicialComplex::from_labeled_facets(facets, labels)?)
}

pub fn from_json(j: JsonComplex) -> Result<SimplicialComplex, IoError> {
    build(j.dim, j.vertices.into_iter().map(|v| (v.id, v.label)).collect(), j.facets)
}

pub fn parse_json(s: &str) -> Result<SimplicialComplex, IoError> {
    from_json(serde_json::from_str(s)?)
}

/// Parses the text format.
pub fn parse_text(s: &str) -> Result<SimplicialComplex, IoError> {
    let mut lines =
        s.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut last = 0;
    let mut next = |what: &str| -> Result<(usize, &str), IoError> {
        let r = lines.next().ok_or_else(|| IoError::Parse { line: last + 1, message: format!("expected {what}") });
        if let Ok((n, _)) = r {
            last = n;
        }
        r
    };
    let header = |(line, text): (usize, &str), key: &str| -> Result<usize, IoError> {
        let rest = text
            .strip_prefix(key)
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| IoError::Parse { line, message: format!("expected `{key} <count>`, found `{text}`") })?;
        rest.trim().parse().map_err(|_| IoError::Parse { line, message: format!("bad {key} count `{}`", rest.trim()) })
    };
    let number = |line: usize, tok: &str| -> Result<VertexId, IoError> {
        tok.parse().map_err(|_| IoError::Parse { line, message: format!("expected a vertex id, found `{tok}`") })
    };

    let dim = header(next("`dim`")?, "dim")?;
    let n = header(next("`vertices`")?, "vertices")?;
    let mut vertices = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, text) = next("a vertex line")?;
        let (id, label) = match text.split_once(char::is_whitespace) {
            Some((id, label)) => (id, Some(label.trim().to_string())),
            None => (text, None),
        };
        vertices.push((number(line, id)?, label));
    }
    let m = header(next("`facets`")?, "facets")?;
    let mut facets = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, text) = next("a facet line")?;
        let f = text.split_whitespace().map(|t| number(line, t)).collect::<Result<Vec<_>, _>>()?;
        if f.len() != dim + 1 {
            return Err(IoError::Parse {
                line,
                message: format!("facet has {} vertices, dimension {dim} needs {}", f.len(), dim + 1),
            });
        }
        facets.push(f);
    }
    if let Ok((line, text)) = next("") {
        return Err(IoError::Parse { line, message: format!("unexpected trailing content `{text}`") });
    }
    build(dim, vertices, facets)
}

/// Parses either format, choosing JSON when the input starts with `{`.
pub fn parse_any(s: &str) -> Result<SimplicialComplex, IoError> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn read_complex(path: &std::path::Path) -> Result<SimplicialComplex, IoError> {
    parse_any(&std::fs::read_to_string(path)?)
}

/// Writes the canonical text form, or JSON when `json` is set.
pub fn write_complex(path: &std::path::Path, k: &SimplicialComplex, json: bool) -> Result<(), IoError> {
    let body = if json { to_json_string(k) } else { canonical_serialize(k) };
    std::fs::write(path, body)?;
    Ok(())
}
