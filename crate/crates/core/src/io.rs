//! JSON quiver documents and DOT rendering.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::quiver::{Arrow, BoundQuiver, Path, Relation};
use crate::scalar;
use crate::zquiver::{ZVertex, ZWindow};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub id: String,
    pub from: String,
    pub to: String,
    /// Omitted for the default bidegree `(1, 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<[i32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    /// Rational `p` or `p/q`.
    pub coef: String,
    /// Arrow ids, first traversed first.
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDocument {
    pub schema_version: u32,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub relations: Vec<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

fn get_str(v: &Value, ptr: &str) -> Result<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| schema(ptr, "expected a string"))
}

fn get_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

fn field<'a>(obj: &'a Value, key: &str, ptr: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{ptr}/{key}"), "missing field"))
}

impl QuiverDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        Self::from_value(&root)
    }

    pub fn from_value(root: &Value) -> Result<Self> {
        if !root.is_object() {
            return Err(schema("", "expected an object"));
        }
        let schema_version = match root.get("schema_version") {
            None => SCHEMA_VERSION,
            Some(v) => {
                let n = v
                    .as_u64()
                    .ok_or_else(|| schema("/schema_version", "expected an integer"))?;
                if n != SCHEMA_VERSION as u64 {
                    return Err(schema("/schema_version", format!("unsupported version {n}")));
                }
                n as u32
            }
        };
        let vertices = get_array(field(root, "vertices", "")?, "/vertices")?
            .iter()
            .enumerate()
            .map(|(k, v)| get_str(v, &format!("/vertices/{k}")))
            .collect::<Result<Vec<_>>>()?;
        let mut arrows = Vec::new();
        for (k, a) in get_array(field(root, "arrows", "")?, "/arrows")?.iter().enumerate() {
            let ptr = format!("/arrows/{k}");
            if !a.is_object() {
                return Err(schema(ptr, "expected an object"));
            }
            let bidegree = match a.get("bidegree") {
                None | Some(Value::Null) => None,
                Some(b) => {
                    let items = get_array(b, &format!("{ptr}/bidegree"))?;
                    let nums: Option<Vec<i32>> = items.iter().map(|x| x.as_i64().map(|x| x as i32)).collect();
                    match nums.as_deref() {
                        Some([x, y]) => Some([*x, *y]),
                        _ => return Err(schema(format!("{ptr}/bidegree"), "expected two integers")),
                    }
                }
            };
            arrows.push(ArrowDoc {
                id: get_str(field(a, "id", &ptr)?, &format!("{ptr}/id"))?,
                from: get_str(field(a, "from", &ptr)?, &format!("{ptr}/from"))?,
                to: get_str(field(a, "to", &ptr)?, &format!("{ptr}/to"))?,
                bidegree,
            });
        }
        let mut relations = Vec::new();
        if let Some(rels) = root.get("relations") {
            for (i, r) in get_array(rels, "/relations")?.iter().enumerate() {
                let rptr = format!("/relations/{i}");
                let mut terms = Vec::new();
                for (j, t) in get_array(r, &rptr)?.iter().enumerate() {
                    let tptr = format!("{rptr}/{j}");
                    if !t.is_object() {
                        return Err(schema(tptr, "expected an object"));
                    }
                    let coef = match field(t, "coef", &tptr)? {
                        Value::String(s) => s.clone(),
                        Value::Number(n) if n.is_i64() => n.to_string(),
                        _ => return Err(schema(format!("{tptr}/coef"), "expected a rational string")),
                    };
                    let path = get_array(field(t, "path", &tptr)?, &format!("{tptr}/path"))?
                        .iter()
                        .enumerate()
                        .map(|(k, a)| get_str(a, &format!("{tptr}/path/{k}")))
                        .collect::<Result<Vec<_>>>()?;
                    terms.push(TermDoc { coef, path });
                }
                relations.push(terms);
            }
        }
        let metadata = match root.get("metadata") {
            None | Some(Value::Null) => None,
            Some(m) => Some(
                serde_json::from_value(m.clone()).map_err(|e| schema("/metadata", e.to_string()))?,
            ),
        };
        Ok(QuiverDocument {
            schema_version,
            vertices,
            arrows,
            relations,
            metadata,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Validates the document and builds the bound quiver.
    pub fn to_quiver(&self) -> Result<BoundQuiver> {
        let mut seen = HashSet::new();
        for (k, v) in self.vertices.iter().enumerate() {
            if !seen.insert(v) {
                return Err(schema(format!("/vertices/{k}"), format!("duplicate vertex `{v}`")));
            }
        }
        let vindex: BTreeMap<&str, usize> = self.vertices.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        let mut arrows = Vec::new();
        let mut aindex: BTreeMap<&str, usize> = BTreeMap::new();
        for (k, a) in self.arrows.iter().enumerate() {
            let ptr = format!("/arrows/{k}");
            let source = *vindex
                .get(a.from.as_str())
                .ok_or_else(|| schema(format!("{ptr}/from"), format!("unknown vertex `{}`", a.from)))?;
            let target = *vindex
                .get(a.to.as_str())
                .ok_or_else(|| schema(format!("{ptr}/to"), format!("unknown vertex `{}`", a.to)))?;
            if aindex.insert(a.id.as_str(), k).is_some() {
                return Err(schema(format!("{ptr}/id"), format!("duplicate arrow `{}`", a.id)));
            }
            let [x, y] = a.bidegree.unwrap_or([1, 0]);
            arrows.push(Arrow {
                id: a.id.clone(),
                source,
                target,
                bidegree: (x, y),
            });
        }
        let bare = BoundQuiver::new(self.vertices.clone(), arrows.clone(), Vec::new())
            .map_err(|e| schema("/arrows", e.to_string()))?;
        let mut relations = Vec::new();
        for (i, r) in self.relations.iter().enumerate() {
            let mut terms = Vec::new();
            for (j, t) in r.iter().enumerate() {
                let tptr = format!("/relations/{i}/{j}");
                let coef = scalar::parse(&t.coef).map_err(|e| schema(format!("{tptr}/coef"), e.to_string()))?;
                if t.path.is_empty() {
                    return Err(schema(format!("{tptr}/path"), "paths in relations must be non-empty"));
                }
                let ids = t
                    .path
                    .iter()
                    .enumerate()
                    .map(|(k, id)| {
                        aindex
                            .get(id.as_str())
                            .copied()
                            .ok_or_else(|| schema(format!("{tptr}/path/{k}"), format!("unknown arrow `{id}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let path: Path = bare
                    .path_from_indices(ids)
                    .map_err(|e| schema(format!("{tptr}/path"), e.to_string()))?;
                terms.push((coef, path));
            }
            let rel = Relation::new(terms).map_err(|e| schema(format!("/relations/{i}"), e.to_string()))?;
            bare.with_relations(vec![rel.clone()])
                .map_err(|e| schema(format!("/relations/{i}"), e.to_string()))?;
            relations.push(rel);
        }
        BoundQuiver::new(self.vertices.clone(), arrows, relations).map_err(|e| schema("/relations", e.to_string()))
    }

    pub fn from_quiver(q: &BoundQuiver, metadata: Option<Metadata>) -> Self {
        let arrows = q
            .arrows()
            .iter()
            .map(|a| ArrowDoc {
                id: a.id.clone(),
                from: q.vertex_id(a.source).to_string(),
                to: q.vertex_id(a.target).to_string(),
                bidegree: (a.bidegree != (1, 0)).then_some([a.bidegree.0, a.bidegree.1]),
            })
            .collect();
        let relations = q
            .relations()
            .iter()
            .map(|r| {
                r.terms()
                    .iter()
                    .map(|(c, p)| TermDoc {
                        coef: scalar::format(c),
                        path: p.arrows.iter().map(|&a| q.arrow(a).id.clone()).collect(),
                    })
                    .collect()
            })
            .collect();
        QuiverDocument {
            schema_version: SCHEMA_VERSION,
            vertices: q.vertices().to_vec(),
            arrows,
            relations,
            metadata,
        }
    }
}

pub fn load_quiver(text: &str) -> Result<BoundQuiver> {
    QuiverDocument::from_json(text)?.to_quiver()
}

pub fn quiver_json(q: &BoundQuiver, metadata: Option<Metadata>) -> String {
    QuiverDocument::from_quiver(q, metadata).to_json()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT for a bound quiver; relations are listed in a comment.
pub fn quiver_dot(q: &BoundQuiver, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for r in q.relations() {
        writeln!(out, "  // {}", q.relation_text(r)).unwrap();
    }
    for v in q.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for a in q.arrows() {
        let style = if a.bidegree.1 != 0 { ", style=dashed" } else { "" };
        writeln!(
            out,
            "  {} -> {} [label={}{}];",
            quote(q.vertex_id(a.source)),
            quote(q.vertex_id(a.target)),
            quote(&a.id),
            style
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// A named vertex set drawn in one fill colour.
#[derive(Debug, Clone)]
pub struct Highlight {
    pub name: String,
    pub color: String,
    pub vertices: BTreeSet<ZVertex>,
}

/// DOT for a window with node ids `i@t`, one rank per level, and optional
/// highlighted vertex sets (the first matching set wins).
pub fn window_dot(w: &ZWindow, highlights: &[Highlight]) -> String {
    let mut out = String::new();
    let (lo, hi) = w.range();
    writeln!(out, "digraph {} {{", quote(&format!("window {lo}..{hi}"))).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for h in highlights {
        writeln!(out, "  // {}: {}", h.name, h.color).unwrap();
    }
    let mut by_level: BTreeMap<i64, Vec<ZVertex>> = BTreeMap::new();
    for &v in w.vertices() {
        by_level.entry(v.level).or_default().push(v);
    }
    for (level, vs) in by_level {
        writeln!(out, "  subgraph {} {{ rank=same;", quote(&format!("level {level}"))).unwrap();
        for v in vs {
            let fill = highlights
                .iter()
                .find(|h| h.vertices.contains(&v))
                .map(|h| format!(", style=filled, fillcolor={}", quote(&h.color)))
                .unwrap_or_default();
            writeln!(out, "    {} [label={}{}];", quote(&w.node_id(v)), quote(&w.label(v)), fill).unwrap();
        }
        out.push_str("  }\n");
    }
    let tilde = w.base().tilde();
    for a in w.arrows() {
        let style = if tilde.arrow(a.arrow).bidegree.1 != 0 { ", style=dashed" } else { "" };
        writeln!(
            out,
            "  {} -> {} [label={}{}];",
            quote(&w.node_id(a.source)),
            quote(&w.node_id(a.target)),
            quote(&w.arrow_label(a)),
            style
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip() {
        let q = fixtures::a4_auslander_gamma();
        let doc = QuiverDocument::from_quiver(&q, Some(Metadata { name: Some("Γ".into()), n: Some(2), notes: None }));
        let text = doc.to_json();
        let back = QuiverDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_quiver().unwrap(), q);
    }

    #[test]
    fn bad_coefficient_pointer() {
        let text = r#"{"schema_version":1,"vertices":["1","2","3"],
            "arrows":[{"id":"a","from":"1","to":"2"},{"id":"b","from":"2","to":"3"}],
            "relations":[[{"coef":"1/0","path":["a","b"]}]]}"#;
        let err = load_quiver(text).unwrap_err();
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/relations/0/0/coef"), "{err}");
    }

    #[test]
    fn mixed_lengths_are_rejected() {
        let text = r#"{"schema_version":1,"vertices":["1","2","3"],
            "arrows":[{"id":"a","from":"1","to":"2"},{"id":"b","from":"2","to":"3"},{"id":"c","from":"1","to":"3"}],
            "relations":[[{"coef":"1","path":["a","b"]},{"coef":"-1","path":["c"]}]]}"#;
        let err = load_quiver(text).unwrap_err();
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/relations/0"), "{err}");
    }

    #[test]
    fn unknown_vertex_pointer() {
        let text = r#"{"vertices":["1"],"arrows":[{"id":"a","from":"1","to":"9"}]}"#;
        let err = load_quiver(text).unwrap_err();
        assert!(matches!(err, Error::Schema { ref pointer, .. } if pointer == "/arrows/0/to"));
    }

    #[test]
    fn dot_has_edges() {
        let dot = quiver_dot(&fixtures::kronecker(2), "k2");
        assert_eq!(dot.matches("->").count(), 2);
    }
}
