//! The seed data model: vertices with multipliers, weights and labels, the
//! half-integral exchange matrix (stored doubled), mutation, weight balance,
//! the p-map exponents and Langlands duality.

use crate::error::{Error, Result};
use crate::label::{Label, Monomial};
use crate::root_data::{RootDatum, Weight, WeightTuple, Q};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Structural role of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexRole {
    /// The `occurrence`-th vertex of node row `node` of the reduced-word quiver
    /// (occurrence 0 is the frozen start vertex of the row).
    Minor { node: usize, occurrence: usize },
    /// A vertex added on the third edge of a triangle, attached to `omega_node`.
    Edge { node: usize },
    /// Anything else (user-provided seeds).
    Other,
}

/// Stable identity of a vertex.  Mutation never changes tags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexTag {
    pub name: String,
    /// 1-based triangle index inside a polygon seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle: Option<usize>,
    pub role: VertexRole,
    /// Names of vertices merged into this one by gluing.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

impl VertexTag {
    pub fn new(name: impl Into<String>, role: VertexRole) -> Self {
        VertexTag {
            name: name.into(),
            triangle: None,
            role,
            aliases: Vec::new(),
        }
    }

    pub fn answers_to(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }
}

/// One vertex of a seed.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    /// Stable integer handle, unique within the seed.
    pub id: usize,
    pub tag: VertexTag,
    pub frozen: bool,
    /// Multiplier `d_i`.
    pub d: i64,
    pub weights: Option<WeightTuple>,
    pub label: Option<Label>,
}

impl Vertex {
    pub fn name(&self) -> &str {
        &self.tag.name
    }
}

/// A seed.  `b2[i][j] = 2 b_ij`, so half-arrows are integers here.
#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub(crate) vertices: Vec<Vertex>,
    pub(crate) b2: Vec<Vec<i64>>,
    pub(crate) node_names: Vec<String>,
}

impl Seed {
    /// Builds a seed and checks every structural invariant.
    pub fn new(vertices: Vec<Vertex>, b2: Vec<Vec<i64>>, node_names: Vec<String>) -> Result<Seed> {
        let seed = Seed {
            vertices,
            b2,
            node_names,
        };
        seed.check_invariants()?;
        Ok(seed)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn name(&self, i: usize) -> &str {
        self.vertices[i].name()
    }

    pub fn names(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.tag.name.clone()).collect()
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn b2(&self) -> &[Vec<i64>] {
        &self.b2
    }

    /// The exchange-matrix entry `b_ij`.
    pub fn b(&self, i: usize, j: usize) -> Q {
        Q::new(self.b2[i][j], 2)
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.vertices[i].frozen
    }

    pub fn unfrozen(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.is_frozen(i)).collect()
    }

    pub fn weights(&self, i: usize) -> Option<&WeightTuple> {
        self.vertices[i].weights.as_ref()
    }

    pub fn has_weights(&self) -> bool {
        !self.is_empty() && self.vertices.iter().all(|v| v.weights.is_some())
    }

    /// Number of marked points the weights refer to.
    pub fn points(&self) -> Option<usize> {
        self.vertices
            .first()
            .and_then(|v| v.weights.as_ref())
            .map(WeightTuple::points)
    }

    /// Index of the vertex with the given name (or alias).
    pub fn index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.tag.answers_to(name))
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Index of the vertex with the given stable handle.
    pub fn index_of_id(&self, id: usize) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    /// Checks skew-symmetrizability, integrality away from frozen pairs, and
    /// consistency of the weight data.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.len();
        if self.b2.len() != n || self.b2.iter().any(|r| r.len() != n) {
            return Err(Error::Invariant("exchange matrix is not square of seed size".into()));
        }
        let mut ids: Vec<usize> = self.vertices.iter().map(|v| v.id).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() != n {
            return Err(Error::Invariant("vertex handles are not unique".into()));
        }
        for i in 0..n {
            if self.vertices[i].d <= 0 {
                return Err(Error::Invariant(format!("multiplier of `{}` is not positive", self.name(i))));
            }
            for j in 0..n {
                let (di, dj) = (self.vertices[i].d, self.vertices[j].d);
                if self.b2[i][j] * dj != -self.b2[j][i] * di {
                    return Err(Error::Invariant(format!(
                        "b[{}][{}] d = {} but -b[{}][{}] d = {}",
                        self.name(i),
                        self.name(j),
                        self.b2[i][j] * dj,
                        self.name(j),
                        self.name(i),
                        -self.b2[j][i] * di
                    )));
                }
                if self.b2[i][j] % 2 != 0 && !(self.is_frozen(i) && self.is_frozen(j)) {
                    return Err(Error::Invariant(format!(
                        "half-integral entry between `{}` and `{}` touches an unfrozen vertex",
                        self.name(i),
                        self.name(j)
                    )));
                }
            }
        }
        let shapes: Vec<(usize, usize)> = self
            .vertices
            .iter()
            .filter_map(|v| v.weights.as_ref().map(|w| (w.points(), w.rank())))
            .collect();
        if !shapes.is_empty() {
            if shapes.len() != n {
                return Err(Error::Invariant("only some vertices carry weights".into()));
            }
            if shapes.iter().any(|s| *s != shapes[0]) {
                return Err(Error::Invariant("weight tuples have different shapes".into()));
            }
        }
        Ok(())
    }

    /// Matrix mutation at `k`, with the new weight and exchange label at `k`.
    pub fn mutate(&self, k: usize) -> Result<Seed> {
        if k >= self.len() {
            return Err(Error::UnknownVertex(k.to_string()));
        }
        if self.is_frozen(k) {
            return Err(Error::FrozenVertex(self.name(k).to_string()));
        }
        let n = self.len();
        let b2 = &self.b2;
        let mut nb = b2.clone();
        for i in 0..n {
            for j in 0..n {
                if i == k || j == k {
                    nb[i][j] = -b2[i][j];
                } else if b2[i][k] * b2[k][j] > 0 {
                    let delta = b2[i][k].abs() * b2[k][j];
                    debug_assert!(delta % 2 == 0, "entries at an unfrozen vertex are integral");
                    nb[i][j] = b2[i][j] + delta / 2;
                }
            }
        }
        let mut out = self.clone();
        out.b2 = nb;

        if self.has_weights() {
            let (plus, minus) = self.exchange_weights(k);
            if plus != minus {
                return Err(Error::Inhomogeneous {
                    vertex: self.name(k).to_string(),
                    plus: plus.display(&self.node_names),
                    minus: minus.display(&self.node_names),
                });
            }
            let mut w = plus;
            w.add_scaled(self.weights(k).expect("weights present"), Q::from_integer(-1));
            out.vertices[k].weights = Some(w);
        }

        if let Some(old) = &self.vertices[k].label {
            let mut plus: Monomial = Vec::new();
            let mut minus: Monomial = Vec::new();
            let mut complete = true;
            for j in 0..n {
                let b = self.b2[k][j] / 2;
                if b == 0 {
                    continue;
                }
                match &self.vertices[j].label {
                    Some(l) if b > 0 => plus.push((l.clone(), b)),
                    Some(l) => minus.push((l.clone(), -b)),
                    None => complete = false,
                }
            }
            out.vertices[k].label = complete.then(|| Label::exchange(self.vertices[k].id, plus, minus, old));
        }
        Ok(out)
    }

    pub fn mutate_named(&self, name: &str) -> Result<Seed> {
        self.mutate(self.index(name)?)
    }

    /// Weights of the two exchange monomials at `k`:
    /// `sum_{b_kj > 0} b_kj w_j` and `sum_{b_kj < 0} (-b_kj) w_j`.
    pub fn exchange_weights(&self, k: usize) -> (WeightTuple, WeightTuple) {
        let w0 = self.weights(k).expect("weights present");
        let mut plus = WeightTuple::zero(w0.points(), w0.rank());
        let mut minus = plus.clone();
        for j in 0..self.len() {
            let b = self.b(k, j);
            let wj = self.weights(j).expect("weights present");
            if b > Q::zero() {
                plus.add_scaled(wj, b);
            } else if b < Q::zero() {
                minus.add_scaled(wj, -b);
            }
        }
        (plus, minus)
    }

    /// `sum_j b_ij (weight tuple of j)`.  Zero at unfrozen vertices of a valid
    /// seed; at frozen edge vertices this is the edge sum.
    pub fn weight_balance(&self, i: usize) -> Result<WeightTuple> {
        if !self.has_weights() {
            return Err(Error::MissingWeights);
        }
        let w0 = self.weights(i).expect("weights present");
        let mut tot = WeightTuple::zero(w0.points(), w0.rank());
        for j in 0..self.len() {
            if self.b2[i][j] != 0 {
                tot.add_scaled(self.weights(j).expect("weights present"), self.b(i, j));
            }
        }
        Ok(tot)
    }

    /// Exponents of the monomial `p*(X_i) = prod_j A_j^{b_ij}`.
    pub fn p_exponents(&self, i: usize) -> Result<Vec<i64>> {
        if self.b2[i].iter().any(|b| b % 2 != 0) {
            return Err(Error::NonIntegralRow(self.name(i).to_string()));
        }
        Ok(self.b2[i].iter().map(|b| b / 2).collect())
    }

    /// Lists arrows as `(from, to, 2|b_{to,from}|)` with `b_{to,from} > 0`.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.b2[i][j] > 0 {
                    out.push((j, i, self.b2[i][j]));
                }
            }
        }
        out
    }

    /// The same seed with every arrow reversed.
    pub fn reversed(&self) -> Seed {
        let mut out = self.clone();
        for row in &mut out.b2 {
            for b in row.iter_mut() {
                *b = -*b;
            }
        }
        out
    }

    /// Moves weight slot `p` to slot `perm[p]` in every vertex weight and in
    /// every atomic label.
    pub fn with_points_permuted(&self, perm: &[usize]) -> Seed {
        let mut out = self.clone();
        let relabel = |l: &Label| -> Label {
            match l.node() {
                crate::label::LabelNode::Atomic { tag, weights } => {
                    Label::atomic(tag.clone(), weights.as_ref().map(|w| w.permuted(perm)))
                }
                _ => unreachable!("map_atomic only visits leaves"),
            }
        };
        for v in &mut out.vertices {
            v.weights = v.weights.as_ref().map(|w| w.permuted(perm));
            v.label = v.label.as_ref().map(|l| l.map_atomic(&mut |x| relabel(x)));
        }
        out
    }

    /// Renames vertices through `rename` (unmapped names are kept).
    pub fn renamed(&self, rename: &dyn Fn(&str) -> Option<String>) -> Seed {
        let mut out = self.clone();
        for v in &mut out.vertices {
            if let Some(n) = rename(&v.tag.name) {
                v.tag.name = n;
            }
        }
        out
    }

    /// Langlands dual seed: `b^vee = b^T`, `d^vee_i = D / d_i` with `D = max d`,
    /// and each weight tuple mapped by `omega_i -> d_i omega_{i'}` (with `i'`
    /// the dual node) and divided by the vertex multiplier.
    pub fn langlands_dual(&self, datum: &RootDatum) -> Result<Seed> {
        let n = self.len();
        let dmax = self.vertices.iter().map(|v| v.d).max().unwrap_or(1);
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.b2[i][j] = self.b2[j][i];
            }
        }
        let lmap = |w: &Weight, d: i64| -> Weight {
            let mut c = vec![Q::zero(); datum.rank];
            for (i, x) in w.coords().iter().enumerate() {
                c[datum.langlands_node(i)] += x * Q::from_integer(datum.multipliers[i]) / Q::from_integer(d);
            }
            Weight::new(c)
        };
        for v in &mut out.vertices {
            if dmax % v.d != 0 {
                return Err(Error::Invariant(format!("multiplier of `{}` does not divide {dmax}", v.tag.name)));
            }
            let d = v.d;
            v.d = dmax / d;
            v.weights = v
                .weights
                .as_ref()
                .map(|t| WeightTuple(t.0.iter().map(|w| lmap(w, d)).collect()));
        }
        out.check_invariants()?;
        Ok(out)
    }
}
