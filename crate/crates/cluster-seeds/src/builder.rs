//! Seeds from reduced words: the quiver glued from elementary pieces, the
//! weight grading of its vertices, and the completion to a triangle seed by
//! adding the vertices of the third edge.

use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::solve_unique;
use crate::root_data::{DynkinKind, RootDatum, Weight, WeightTuple, WeylWord, Q};
use crate::seed::{Seed, Vertex, VertexRole, VertexTag};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Adds the arrow `j -> i` carrying `halves` half-arrows to a doubled
/// exchange matrix.  Between a long and a short vertex the entry on the long
/// row is multiplied by the ratio of multipliers.
pub(crate) fn add_arrow(b2: &mut [Vec<i64>], d: &[i64], j: usize, i: usize, halves: i64) {
    let strength = |x: i64, y: i64| if x >= y { (x / y).max(1) } else { 1 };
    b2[i][j] += halves * strength(d[i], d[j]);
    b2[j][i] -= halves * strength(d[j], d[i]);
}

/// The vertex name used throughout: `x_<node><occurrence>` for word vertices
/// and `x_<node>` for vertices on the third edge.
pub fn vertex_name(datum: &RootDatum, role: VertexRole) -> String {
    match role {
        VertexRole::Minor { node, occurrence } => format!("x_{}{}", datum.node_names[node], occurrence),
        VertexRole::Edge { node } => format!("x_{}", datum.node_names[node]),
        VertexRole::Other => "x".into(),
    }
}

/// Per vertex `(node, occurrence)`: the position in the word at which it is
/// created (`None` for occurrence 0) and the last occurrence of each node.
fn creation_positions(datum: &RootDatum, word: &WeylWord) -> (HashMap<(usize, usize), usize>, Vec<usize>) {
    let mut count = vec![0; datum.rank];
    let mut pos = HashMap::new();
    for p in (0..word.len()).rev() {
        let i = word.0[p];
        count[i] += 1;
        pos.insert((i, count[i]), p);
    }
    (pos, count)
}

/// Glues elementary pieces along the word, read right to left.  Vertex `x_i0`
/// starts row `i`; each letter `i` creates the next vertex `v` of row `i`
/// with a solid arrow `v -> current(i)` and half-arrows
/// `current(i) -> current(j)`, `current(j) -> v` for every Dynkin neighbour `j`.
/// The first and last vertex of every row are frozen.  Labels record the
/// generalized minor `Delta(u w_i, w_i)` with `u` the letters from the right
/// end up to the creation position.
pub fn build_bruhat_seed(datum: &RootDatum, word: &WeylWord) -> Result<Seed> {
    if word.0.iter().any(|&i| i >= datum.rank) {
        return Err(Error::InvalidNode(format!("{:?}", word.0)));
    }
    if !datum.is_longest_word(word) {
        return Err(Error::NotLongestWord(datum.format_word(word)));
    }
    let (pos, count) = creation_positions(datum, word);
    let mut roles: Vec<(usize, usize)> = (0..datum.rank).map(|n| (n, 0)).collect();
    let mut current: Vec<usize> = (0..datum.rank).collect();
    let mut occ = vec![0; datum.rank];
    let mut arrows: Vec<(usize, usize, i64)> = Vec::new();
    for &i in word.0.iter().rev() {
        occ[i] += 1;
        roles.push((i, occ[i]));
        let v = roles.len() - 1;
        arrows.push((v, current[i], 2));
        for j in datum.neighbors(i) {
            arrows.push((current[i], current[j], 1));
            arrows.push((current[j], v, 1));
        }
        current[i] = v;
    }
    let d: Vec<i64> = roles.iter().map(|&(n, _)| datum.multipliers[n]).collect();
    let n = roles.len();
    let mut b2 = vec![vec![0; n]; n];
    for &(from, to, halves) in &arrows {
        add_arrow(&mut b2, &d, from, to, halves);
    }
    let vertices = roles
        .iter()
        .enumerate()
        .map(|(id, &(node, occurrence))| {
            let role = VertexRole::Minor { node, occurrence };
            let prefix = match occurrence {
                0 => String::new(),
                _ => {
                    let p = pos[&(node, occurrence)];
                    datum.format_word(&WeylWord(word.0[p..].to_vec()))
                }
            };
            let tag = format!("minor(u={prefix}; w_{})", datum.node_names[node]);
            Vertex {
                id,
                tag: VertexTag::new(vertex_name(datum, role), role),
                frozen: occurrence == 0 || occurrence == count[node],
                d: d[id],
                weights: None,
                label: Some(Label::atomic(tag, None)),
            }
        })
        .collect();
    Seed::new(vertices, b2, datum.node_names.clone())
}

/// Weight triples keyed by `(node, occurrence)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightTable(pub BTreeMap<(usize, usize), WeightTuple>);

impl WeightTable {
    /// Parses `{"<node name>,<occurrence>": [[coords], [coords], [coords]], ...}`.
    pub fn from_json(datum: &RootDatum, text: &str) -> Result<Self> {
        let raw: BTreeMap<String, WeightTuple> = serde_json::from_str(text)?;
        let mut out = BTreeMap::new();
        for (key, triple) in raw {
            let (node, occ) = key
                .split_once(',')
                .ok_or_else(|| Error::Format(format!("weight-table key `{key}` is not `node,occurrence`")))?;
            let node = datum
                .node_names
                .iter()
                .position(|n| n == node.trim())
                .ok_or_else(|| Error::InvalidNode(node.to_string()))?;
            let occ: usize = occ
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("bad occurrence in `{key}`")))?;
            if triple.points() != 3 || triple.rank() != datum.rank {
                return Err(Error::Weights(format!("entry `{key}` is not a triple of rank-{} weights", datum.rank)));
            }
            out.insert((node, occ), triple);
        }
        Ok(WeightTable(out))
    }

    pub fn to_json(&self, datum: &RootDatum) -> String {
        let map: BTreeMap<String, &WeightTuple> = self
            .0
            .iter()
            .map(|((n, j), w)| (format!("{},{}", datum.node_names[*n], j), w))
            .collect();
        serde_json::to_string_pretty(&map).expect("weight tables serialize")
    }
}

/// Where the weight triples of the word vertices come from.
#[derive(Clone, Debug, Default)]
pub enum WeightSource {
    /// Closed form for type A on words commuting to the canonical word, the
    /// tabulated G2 triples for `bababa`, the uniform rule otherwise.
    #[default]
    Auto,
    /// The uniform rule for every vertex.
    Uniform,
    /// A user-supplied table.
    Table(WeightTable),
}

fn positive_part(v: &Weight) -> Weight {
    Weight::new(v.coords().iter().map(|x| if x.is_positive() { *x } else { Q::zero() }).collect())
}

/// Uniform rule: with `p` the creation position of vertex `(i, j)` and
/// `v = w0 (s_{i_1} ... s_{i_{p-1}} w_i)` (`v = w_i` for `j = 0`), the triple is
/// `(-w0 [v]_+, [-v]_+, w_i)`.
pub fn uniform_weight(datum: &RootDatum, word: &WeylWord, node: usize, occurrence: usize) -> WeightTuple {
    let (pos, _) = creation_positions(datum, word);
    let omega = datum.fundamental(node);
    let v = match occurrence {
        0 => omega.clone(),
        _ => datum.w0(&datum.act(&word.0[..pos[&(node, occurrence)]], &omega)),
    };
    let lam_dual = positive_part(&v);
    let mu = positive_part(&-&v);
    WeightTuple(vec![datum.w0_dual(&lam_dual), mu, omega])
}

/// Type `A_{n-1}`: the vertex of node `i` (1-based) and occurrence `j` has
/// `(w_{n-i-j}, w_j, w_i)` with `w_0 = 0`.
pub fn type_a_weight(datum: &RootDatum, node: usize, occurrence: usize) -> WeightTuple {
    let n = datum.rank + 1;
    let w = |k: usize| if k == 0 { datum.zero() } else { datum.fundamental(k - 1) };
    let i = node + 1;
    WeightTuple(vec![w(n - i - occurrence), w(occurrence), w(i)])
}

/// The tabulated G2 triples for the word `s_b s_a s_b s_a s_b s_a`.
pub fn g2_table() -> WeightTable {
    let t = |x: [[i64; 2]; 3]| WeightTuple(x.iter().map(|c| Weight::from_ints(c)).collect());
    let (a, b, o) = ([1, 0], [0, 1], [0, 0]);
    WeightTable(BTreeMap::from([
        ((0, 0), t([a, o, a])),
        ((0, 1), t([b, a, a])),
        ((0, 2), t([b, [2, 0], a])),
        ((0, 3), t([o, a, a])),
        ((1, 0), t([b, o, b])),
        ((1, 1), t([[0, 2], [3, 0], b])),
        ((1, 2), t([b, [3, 0], b])),
        ((1, 3), t([o, b, b])),
    ]))
}

/// Attaches weight triples (and weighted atomic labels) to a seed produced by
/// [`build_bruhat_seed`] for `word`.
pub fn assign_weights(seed: &Seed, datum: &RootDatum, word: &WeylWord, source: &WeightSource) -> Result<Seed> {
    let canonical = datum.commutation_normal_form(&datum.longest_word());
    let table = match (source, datum.kind) {
        (WeightSource::Table(t), _) => Some(t.clone()),
        (WeightSource::Auto, DynkinKind::G2) if word.0 == [1, 0, 1, 0, 1, 0] => Some(g2_table()),
        _ => None,
    };
    let closed_form = matches!(source, WeightSource::Auto)
        && matches!(datum.kind, DynkinKind::A(_))
        && datum.commutation_normal_form(word) == canonical;
    let mut out = seed.clone();
    for v in &mut out.vertices {
        let VertexRole::Minor { node, occurrence } = v.tag.role else {
            return Err(Error::Weights(format!("`{}` is not a word vertex", v.tag.name)));
        };
        let w = match &table {
            Some(t) => t.0.get(&(node, occurrence)).cloned().ok_or_else(|| {
                Error::Weights(format!("no table entry for `{}`", v.tag.name))
            })?,
            None if closed_form => type_a_weight(datum, node, occurrence),
            None => uniform_weight(datum, word, node, occurrence),
        };
        if w.0.iter().any(|x| !x.is_dominant() || !x.is_integral()) {
            return Err(Error::Weights(format!(
                "weight {} of `{}` is not dominant integral",
                w.display(&datum.node_names),
                v.tag.name
            )));
        }
        v.label = v.label.as_ref().map(|l| match l.node() {
            crate::label::LabelNode::Atomic { tag, .. } => Label::atomic(tag.clone(), Some(w.clone())),
            _ => l.clone(),
        });
        v.weights = Some(w);
    }
    out.check_invariants()?;
    Ok(out)
}

/// Diagnostics of the completion to a triangle seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompletionReport {
    /// `(phase, number of unknowns, number of equations)`; every phase had a
    /// zero kernel.
    pub phases: Vec<(String, usize, usize)>,
    /// Per node `k`: the edge-sum values at the first and second endpoint of
    /// every edge whose first endpoint carries `w_k`.
    pub edge_sums: Vec<(String, Weight, Weight)>,
}

/// Slot with zero weight (the marked point opposite an edge vertex) and the
/// edge endpoints in counterclockwise order `0 -> 1 -> 2 -> 0`.
fn edge_slots(w: &WeightTuple) -> Option<(usize, usize, usize)> {
    let zeros: Vec<usize> = (0..3).filter(|&p| w.0[p].is_zero()).collect();
    if zeros.len() != 1 {
        return None;
    }
    let z = zeros[0];
    let (first, second) = ((z + 1) % 3, (z + 2) % 3);
    Some((z, first, second))
}

fn single_node(w: &Weight) -> Result<usize> {
    let nz: Vec<usize> = (0..w.rank()).filter(|&c| !w.coords()[c].is_zero()).collect();
    match nz.as_slice() {
        [k] => Ok(*k),
        _ => Err(Error::Weights(format!("edge weight {w:?} is not a multiple of one fundamental weight"))),
    }
}

struct Completion<'a> {
    datum: &'a RootDatum,
    b: Vec<Vec<Q>>,
    w: Vec<WeightTuple>,
    d: Vec<i64>,
}

impl Completion<'_> {
    /// Solves for the entries `b[i][e]` listed in `unknowns` (the skew partner
    /// `b[e][i]` follows), subject to `S(v)[p] = target` for every equation
    /// `(v, p, target)`.
    fn solve(&mut self, phase: &str, unknowns: &[(usize, usize)], eqs: &[(usize, usize, Weight)]) -> Result<(usize, usize)> {
        let index: HashMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(u, &k)| (k, u)).collect();
        let n = self.b.len();
        let r = self.datum.rank;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (v, p, target) in eqs {
            for c in 0..r {
                let mut row = vec![Q::zero(); unknowns.len()];
                let mut constant = Q::zero();
                for j in 0..n {
                    let wj = self.w[j].0[*p].coords()[c];
                    if let Some(&u) = index.get(&(*v, j)) {
                        row[u] += wj;
                    } else if let Some(&u) = index.get(&(j, *v)) {
                        row[u] -= Q::new(self.d[*v], self.d[j]) * wj;
                    } else {
                        constant += self.b[*v][j] * wj;
                    }
                }
                rows.push(row);
                rhs.push(target.coords()[c] - constant);
            }
        }
        let x = solve_unique(phase, &rows, &rhs, unknowns.len())?;
        for (&(i, e), val) in unknowns.iter().zip(x) {
            self.b[i][e] = val;
            self.b[e][i] = -val * Q::new(self.d[e], self.d[i]);
        }
        Ok((unknowns.len(), rows.len()))
    }

    fn sum(&self, v: usize) -> WeightTuple {
        let mut tot = WeightTuple::zero(3, self.datum.rank);
        for j in 0..self.b.len() {
            if !self.b[v][j].is_zero() {
                tot.add_scaled(&self.w[j], self.b[v][j]);
            }
        }
        tot
    }
}

/// Completes a weighted word seed to the triangle seed: adds one frozen
/// vertex per node `k` on the third edge with triple `(-w0 w_k, w_k, 0)` and
/// solves, in order, for
/// 1. the arrows from unfrozen vertices to the new vertices (face balance);
/// 2. the arrows from the old frozen vertices to the new ones (each old edge
///    sum vanishes at its opposite marked point);
/// 3. after checking that both old edges carry the same per-node edge sums,
///    equal to `(alpha_k / 2, w0(alpha_k) / 2)`, the half-arrows among the new
///    vertices (the new edge carries the same sums).
///
/// Every system must be uniquely solvable.
pub fn complete_triangle_seed(seed: &Seed, datum: &RootDatum) -> Result<(Seed, CompletionReport)> {
    if !seed.has_weights() {
        return Err(Error::MissingWeights);
    }
    let n0 = seed.len();
    let r = datum.rank;
    let n = n0 + r;
    let mut b = vec![vec![Q::zero(); n]; n];
    for (i, row) in b.iter_mut().enumerate().take(n0) {
        for (j, x) in row.iter_mut().enumerate().take(n0) {
            *x = seed.b(i, j);
        }
    }
    let mut w: Vec<WeightTuple> = seed.vertices().iter().map(|v| v.weights.clone().expect("weights")).collect();
    let mut d: Vec<i64> = seed.vertices().iter().map(|v| v.d).collect();
    for k in 0..r {
        let omega = datum.fundamental(k);
        w.push(WeightTuple(vec![datum.w0_dual(&omega), omega, datum.zero()]));
        d.push(datum.multipliers[k]);
    }
    let mut c = Completion { datum, b, w, d };
    let new: Vec<usize> = (n0..n).collect();
    let unfrozen = seed.unfrozen();
    let old_frozen: Vec<usize> = (0..n0).filter(|&i| seed.is_frozen(i)).collect();
    let mut report = CompletionReport {
        phases: Vec::new(),
        edge_sums: Vec::new(),
    };

    let unknowns: Vec<_> = unfrozen.iter().flat_map(|&i| new.iter().map(move |&e| (i, e))).collect();
    let eqs: Vec<_> = unfrozen.iter().flat_map(|&i| (0..3).map(move |p| (i, p, Weight::zero(r)))).collect();
    let (u, e) = c.solve("face balance", &unknowns, &eqs)?;
    report.phases.push(("face balance".into(), u, e));

    let mut eqs = Vec::new();
    for &f in &old_frozen {
        let (z, _, _) = edge_slots(&c.w[f])
            .ok_or_else(|| Error::Weights(format!("frozen `{}` does not sit on one edge", seed.name(f))))?;
        eqs.push((f, z, Weight::zero(r)));
    }
    let unknowns: Vec<_> = old_frozen.iter().flat_map(|&f| new.iter().map(move |&e| (f, e))).collect();
    let (u, e) = c.solve("old edges", &unknowns, &eqs)?;
    report.phases.push(("old edges".into(), u, e));

    let mut pattern: BTreeMap<usize, (Weight, Weight)> = BTreeMap::new();
    for &f in &old_frozen {
        let (_, first, second) = edge_slots(&c.w[f]).expect("checked above");
        let k = single_node(&c.w[f].0[first])?;
        let s = c.sum(f);
        let got = (s.0[first].clone(), s.0[second].clone());
        match pattern.get(&k) {
            Some(p) if *p != got => {
                return Err(Error::EdgeWeights(format!(
                    "node {}: ({}, {}) on one edge, ({}, {}) on the other",
                    datum.node_names[k],
                    p.0.display(&datum.node_names),
                    p.1.display(&datum.node_names),
                    got.0.display(&datum.node_names),
                    got.1.display(&datum.node_names)
                )))
            }
            Some(_) => {}
            None => {
                pattern.insert(k, got);
            }
        }
    }
    let half = Q::new(1, 2);
    for (&k, (first, second)) in &pattern {
        let alpha = datum.simple_root(k);
        let expected = (alpha.scaled(half), datum.w0(&alpha).scaled(half));
        if (first.clone(), second.clone()) != expected {
            return Err(Error::EdgeWeights(format!(
                "node {}: edge sums ({}, {}) differ from half the simple root and its w0 image",
                datum.node_names[k],
                first.display(&datum.node_names),
                second.display(&datum.node_names)
            )));
        }
        report
            .edge_sums
            .push((datum.node_names[k].clone(), first.clone(), second.clone()));
    }

    let mut eqs = Vec::new();
    for &e in &new {
        let (z, first, second) = edge_slots(&c.w[e]).expect("new edge weights");
        let k = single_node(&c.w[e].0[first])?;
        let (lam, mu) = pattern
            .get(&k)
            .cloned()
            .ok_or_else(|| Error::EdgeWeights(format!("no edge sum known for node {}", datum.node_names[k])))?;
        eqs.push((e, first, lam));
        eqs.push((e, second, mu));
        eqs.push((e, z, Weight::zero(r)));
    }
    let unknowns: Vec<_> = new
        .iter()
        .flat_map(|&e| new.iter().filter(move |&&f| f > e).map(move |&f| (e, f)))
        .collect();
    let (u, e) = c.solve("new edge", &unknowns, &eqs)?;
    report.phases.push(("new edge".into(), u, e));

    let mut b2 = vec![vec![0i64; n]; n];
    let mut vertices = seed.vertices().to_vec();
    for k in 0..r {
        let role = VertexRole::Edge { node: k };
        let weights = c.w[n0 + k].clone();
        vertices.push(Vertex {
            id: n0 + k,
            tag: VertexTag::new(vertex_name(datum, role), role),
            frozen: true,
            d: c.d[n0 + k],
            label: Some(Label::atomic(format!("edge(w_{})", datum.node_names[k]), Some(weights.clone()))),
            weights: Some(weights),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let twice = c.b[i][j] * Q::from_integer(2);
            if !twice.is_integer() {
                return Err(Error::Invariant(format!(
                    "entry between `{}` and `{}` is not half-integral",
                    vertices[i].tag.name, vertices[j].tag.name
                )));
            }
            b2[i][j] = twice.to_integer();
        }
    }
    let out = Seed::new(vertices, b2, datum.node_names.clone())?;
    for i in out.unfrozen() {
        if !out.weight_balance(i)?.is_zero() {
            return Err(Error::Invariant(format!("face balance fails at `{}`", out.name(i))));
        }
    }
    Ok((out, report))
}

/// Word seed, weights and completion in one step.
pub fn triangle_seed(datum: &RootDatum, word: &WeylWord, source: &WeightSource) -> Result<(Seed, CompletionReport)> {
    let bruhat = build_bruhat_seed(datum, word)?;
    let weighted = assign_weights(&bruhat, datum, word, source)?;
    complete_triangle_seed(&weighted, datum)
}

/// The triangle seed of the reversed word.
pub fn reverse_word_seed(datum: &RootDatum, word: &WeylWord) -> Result<Seed> {
    Ok(triangle_seed(datum, &word.reversed(), &WeightSource::Auto)?.0)
}
