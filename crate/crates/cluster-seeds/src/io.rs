//! JSON seed format and DOT export.
//!
//! Labels are written to a pool in post-order (children before parents) so
//! that shared subtrees are stored once; vertices refer to pool indices.
//! Reading and writing a seed are inverse to each other byte for byte.

use crate::error::{Error, Result};
use crate::label::{Label, LabelNode, Monomial};
use crate::root_data::WeightTuple;
use crate::seed::{Seed, Vertex, VertexTag};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

#[derive(Serialize, Deserialize)]
struct SeedFile {
    node_names: Vec<String>,
    vertices: Vec<VertexRecord>,
    b2: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<LabelRecord>,
}

#[derive(Serialize, Deserialize)]
struct VertexRecord {
    id: usize,
    tag: VertexTag,
    frozen: bool,
    d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<WeightTuple>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum LabelRecord {
    Atomic {
        tag: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        weights: Option<WeightTuple>,
    },
    Exchange {
        vertex: usize,
        plus: Vec<(usize, i64)>,
        minus: Vec<(usize, i64)>,
        denom: usize,
    },
}

struct Pool {
    index: HashMap<usize, usize>,
    records: Vec<LabelRecord>,
}

impl Pool {
    fn add(&mut self, l: &Label) -> usize {
        if let Some(&i) = self.index.get(&l.key()) {
            return i;
        }
        let record = match l.node() {
            LabelNode::Atomic { tag, weights } => LabelRecord::Atomic {
                tag: tag.clone(),
                weights: weights.clone(),
            },
            LabelNode::Exchange {
                vertex,
                plus,
                minus,
                denom,
            } => {
                let mut mono = |m: &Monomial| m.iter().map(|(x, e)| (self.add(x), *e)).collect::<Vec<_>>();
                let plus = mono(plus);
                let minus = mono(minus);
                let denom = self.add(denom);
                LabelRecord::Exchange {
                    vertex: *vertex,
                    plus,
                    minus,
                    denom,
                }
            }
        };
        self.records.push(record);
        let i = self.records.len() - 1;
        self.index.insert(l.key(), i);
        i
    }
}

/// Serializes a seed to pretty-printed JSON.
pub fn seed_to_json(seed: &Seed) -> String {
    let mut pool = Pool {
        index: HashMap::new(),
        records: Vec::new(),
    };
    let vertices = seed
        .vertices()
        .iter()
        .map(|v| VertexRecord {
            id: v.id,
            tag: v.tag.clone(),
            frozen: v.frozen,
            d: v.d,
            weights: v.weights.clone(),
            label: v.label.as_ref().map(|l| pool.add(l)),
        })
        .collect();
    let file = SeedFile {
        node_names: seed.node_names().to_vec(),
        vertices,
        b2: seed.b2().to_vec(),
        labels: pool.records,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("seed serialization cannot fail");
    s.push('\n');
    s
}

/// Parses a seed from JSON and checks its invariants.
pub fn seed_from_json(text: &str) -> Result<Seed> {
    let file: SeedFile = serde_json::from_str(text)?;
    let mut labels: Vec<Label> = Vec::with_capacity(file.labels.len());
    let get = |labels: &Vec<Label>, i: usize| -> Result<Label> {
        labels
            .get(i)
            .cloned()
            .ok_or_else(|| Error::Format(format!("label {i} referenced before definition")))
    };
    for record in file.labels {
        let label = match record {
            LabelRecord::Atomic { tag, weights } => Label::atomic(tag, weights),
            LabelRecord::Exchange {
                vertex,
                plus,
                minus,
                denom,
            } => {
                let mono = |m: Vec<(usize, i64)>| -> Result<Monomial> {
                    m.into_iter().map(|(i, e)| Ok((get(&labels, i)?, e))).collect()
                };
                let plus = mono(plus)?;
                let minus = mono(minus)?;
                let denom = get(&labels, denom)?;
                Label::exchange_raw(vertex, plus, minus, denom)
            }
        };
        labels.push(label);
    }
    let vertices = file
        .vertices
        .into_iter()
        .map(|v| {
            Ok(Vertex {
                id: v.id,
                tag: v.tag,
                frozen: v.frozen,
                d: v.d,
                weights: v.weights,
                label: v.label.map(|i| get(&labels, i)).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Seed::new(vertices, file.b2, file.node_names)
}

/// Graphviz rendering: one solid edge per unit arrow, a dashed edge for a
/// half-arrow; vertices with multiplier above 1 are circles, the others
/// points; frozen vertices are drawn in blue.
pub fn seed_to_dot(seed: &Seed) -> String {
    let mut out = String::from("digraph seed {\n  node [fontsize=10];\n");
    for (i, v) in seed.vertices().iter().enumerate() {
        let mut text = v.tag.name.clone();
        if let Some(w) = &v.weights {
            text.push_str("\\n");
            text.push_str(&w.display(seed.node_names()));
        }
        let shape = if v.d > 1 {
            format!("shape=circle, label=\"{text}\"")
        } else {
            format!("shape=point, width=0.08, label=\"\", xlabel=\"{text}\"")
        };
        let color = if v.frozen { ", color=blue, fontcolor=blue" } else { "" };
        let _ = writeln!(out, "  v{i} [{shape}{color}];");
    }
    for (from, to, b2) in seed.arrows() {
        let (dt, df) = (seed.vertex(to).d, seed.vertex(from).d);
        let strength = if dt >= df { (dt / df).max(1) } else { 1 };
        let halves = b2 / strength;
        for _ in 0..halves / 2 {
            let _ = writeln!(out, "  v{from} -> v{to};");
        }
        if halves % 2 == 1 {
            let _ = writeln!(out, "  v{from} -> v{to} [style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::VertexRole;

    fn small() -> Seed {
        let a = Label::atomic("a", None);
        let b = Label::atomic("b", None);
        let v = |id: usize, name: &str, label: Label, frozen: bool| Vertex {
            id,
            tag: VertexTag::new(name, VertexRole::Other),
            frozen,
            d: 1,
            weights: None,
            label: Some(label),
        };
        Seed::new(
            vec![v(0, "x", a, false), v(1, "y", b, true)],
            vec![vec![0, 2], vec![-2, 0]],
            vec!["1".into()],
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let s = small().mutate(0).unwrap();
        let text = seed_to_json(&s);
        let back = seed_from_json(&text).unwrap();
        assert_eq!(seed_to_json(&back), text);
        assert_eq!(back, s);
    }

    #[test]
    fn dot_marks_arrows() {
        let dot = seed_to_dot(&small());
        assert!(dot.contains("v1 -> v0;"));
        assert!(dot.contains("color=blue"));
    }
}
