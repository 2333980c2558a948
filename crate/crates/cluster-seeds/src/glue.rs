//! Triangulated polygons, per-triangle dressings, and amalgamation of triangle
//! seeds into seeds for configurations of `m` flags.

use crate::builder::{triangle_seed, WeightSource};
use crate::error::{Error, Result};
use crate::label::{Label, LabelNode};
use crate::root_data::{RootDatum, WeylWord};
use crate::seed::{Seed, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

/// A triangulation of a convex `m`-gon with marked points `0..m` in
/// counterclockwise order.  Triangles are stored as increasing (hence
/// counterclockwise) triples, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulatedPolygon {
    m: usize,
    diagonals: BTreeSet<(usize, usize)>,
    triangles: Vec<[usize; 3]>,
}

/// File form: 1-based marked points.
#[derive(Serialize, Deserialize)]
struct TriangulationFile {
    m: usize,
    diagonals: Vec<[usize; 2]>,
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl TriangulatedPolygon {
    /// Builds and validates a triangulation from 0-based diagonals.
    pub fn new(m: usize, diagonals: &[(usize, usize)]) -> Result<Self> {
        if m < 3 {
            return Err(Error::Triangulation(format!("a polygon needs at least 3 marked points, got {m}")));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in diagonals {
            let (a, b) = ordered(a, b);
            if b >= m || a == b || b - a == 1 || (a == 0 && b == m - 1) {
                return Err(Error::Triangulation(format!("{{{}, {}}} is not a diagonal", a + 1, b + 1)));
            }
            if !set.insert((a, b)) {
                return Err(Error::Triangulation(format!("diagonal {{{}, {}}} listed twice", a + 1, b + 1)));
            }
        }
        for &(a, b) in &set {
            for &(c, d) in &set {
                if a < c && c < b && b < d {
                    return Err(Error::Triangulation(format!(
                        "diagonals {{{}, {}}} and {{{}, {}}} cross",
                        a + 1,
                        b + 1,
                        c + 1,
                        d + 1
                    )));
                }
            }
        }
        if set.len() != m - 3 {
            return Err(Error::Triangulation(format!("{} diagonals do not triangulate a {m}-gon", set.len())));
        }
        let side = |a: usize, b: usize| {
            let (a, b) = ordered(a, b);
            b - a == 1 || (a == 0 && b == m - 1) || set.contains(&(a, b))
        };
        let mut triangles = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    if side(i, j) && side(j, k) && side(i, k) {
                        triangles.push([i, j, k]);
                    }
                }
            }
        }
        debug_assert_eq!(triangles.len(), m - 2);
        Ok(TriangulatedPolygon {
            m,
            diagonals: set,
            triangles,
        })
    }

    /// The fan from the first marked point.
    pub fn fan(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Triangulation(format!("a polygon needs at least 3 marked points, got {m}")));
        }
        let diagonals: Vec<_> = (2..m - 1).map(|k| (0, k)).collect();
        Self::new(m, &diagonals)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        self.diagonals.iter().copied().collect()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Replaces diagonal `{a, c}` of the quadrilateral `a b c d` by `{b, d}`.
    pub fn flip(&self, a: usize, c: usize) -> Result<Self> {
        let diag = ordered(a, c);
        if !self.diagonals.contains(&diag) {
            return Err(Error::Triangulation(format!("{{{}, {}}} is not a diagonal", a + 1, c + 1)));
        }
        let apex: Vec<usize> = self
            .triangles
            .iter()
            .filter(|t| t.contains(&diag.0) && t.contains(&diag.1))
            .map(|t| *t.iter().find(|&&x| x != diag.0 && x != diag.1).expect("triangle has a third corner"))
            .collect();
        let [b, d] = apex[..] else {
            return Err(Error::Triangulation("diagonal does not border two triangles".into()));
        };
        let mut diagonals = self.diagonals.clone();
        diagonals.remove(&diag);
        diagonals.insert(ordered(b, d));
        let list: Vec<_> = diagonals.into_iter().collect();
        Self::new(self.m, &list)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: TriangulationFile = serde_json::from_str(text)?;
        let mut diagonals = Vec::new();
        for [a, b] in f.diagonals {
            if a == 0 || b == 0 {
                return Err(Error::Triangulation("marked points are numbered from 1".into()));
            }
            diagonals.push((a - 1, b - 1));
        }
        Self::new(f.m, &diagonals)
    }

    pub fn to_json(&self) -> String {
        let f = TriangulationFile {
            m: self.m,
            diagonals: self.diagonals.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
        };
        serde_json::to_string(&f).expect("triangulations serialize")
    }
}

/// For each triangle (in the order of [`TriangulatedPolygon::triangles`]):
/// the marked points placed at slots `A1, A2, A3`, and the reduced word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dressing {
    pub triangles: Vec<TriangleDressing>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleDressing {
    pub order: [usize; 3],
    pub word: WeylWord,
}

#[derive(Serialize, Deserialize)]
struct DressingEntry {
    order: [usize; 3],
    word: String,
}

/// The three rotations of a counterclockwise triple.
pub fn rotations(t: [usize; 3]) -> [[usize; 3]; 3] {
    [t, [t[1], t[2], t[0]], [t[2], t[0], t[1]]]
}

impl Dressing {
    /// Counterclockwise orderings with `A2` opposite the least diagonal the
    /// triangle borders (the first triangle of a fan keeps its order), and the
    /// canonical word everywhere.
    pub fn default_for(datum: &RootDatum, tri: &TriangulatedPolygon) -> Self {
        let triangles = tri
            .triangles()
            .iter()
            .map(|&t| {
                let least = tri
                    .diagonals
                    .iter()
                    .find(|(a, b)| t.contains(a) && t.contains(b))
                    .copied();
                let order = match least {
                    None => t,
                    Some((a, b)) => {
                        let apex = *t.iter().find(|&&x| x != a && x != b).expect("third corner");
                        *rotations(t).iter().find(|r| r[1] == apex).expect("some rotation")
                    }
                };
                TriangleDressing {
                    order,
                    word: datum.longest_word(),
                }
            })
            .collect();
        Dressing { triangles }
    }

    /// Every dressing obtained by rotating the triangles of `tri`
    /// independently (canonical word everywhere).
    pub fn all_rotations(datum: &RootDatum, tri: &TriangulatedPolygon) -> Vec<Dressing> {
        let mut out = vec![Vec::new()];
        for &t in tri.triangles() {
            let mut next = Vec::new();
            for prefix in &out {
                for r in rotations(t) {
                    let mut v: Vec<TriangleDressing> = prefix.clone();
                    v.push(TriangleDressing {
                        order: r,
                        word: datum.longest_word(),
                    });
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(|triangles| Dressing { triangles }).collect()
    }

    /// Reads `[{"order": [1-based points], "word": "..."}, ...]`.
    pub fn from_json(datum: &RootDatum, tri: &TriangulatedPolygon, text: &str) -> Result<Self> {
        let entries: Vec<DressingEntry> = serde_json::from_str(text)?;
        if entries.len() != tri.triangles().len() {
            return Err(Error::Triangulation(format!(
                "dressing lists {} triangles, triangulation has {}",
                entries.len(),
                tri.triangles().len()
            )));
        }
        let mut triangles = Vec::new();
        for (e, t) in entries.into_iter().zip(tri.triangles()) {
            if e.order.contains(&0) {
                return Err(Error::Triangulation("marked points are numbered from 1".into()));
            }
            let order = e.order.map(|p| p - 1);
            let mut a = order;
            a.sort_unstable();
            if a != *t {
                return Err(Error::Triangulation(format!("order {:?} is not a corner ordering of {:?}", e.order, t.map(|p| p + 1))));
            }
            let word = datum.parse_word(&e.word)?;
            if !datum.is_longest_word(&word) {
                return Err(Error::NotLongestWord(e.word));
            }
            triangles.push(TriangleDressing { order, word });
        }
        Ok(Dressing { triangles })
    }

    pub fn to_json(&self, datum: &RootDatum) -> String {
        let entries: Vec<DressingEntry> = self
            .triangles
            .iter()
            .map(|t| DressingEntry {
                order: t.order.map(|p| p + 1),
                word: datum.format_word(&t.word),
            })
            .collect();
        serde_json::to_string(&entries).expect("dressings serialize")
    }
}

/// Sign of a permutation of `0..n`.
pub fn is_odd(perm: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Acts on a triangle seed by `sigma`: weight slot `p` moves to `sigma[p]`;
/// odd permutations also reverse every arrow.
pub fn dress_triangle(seed: &Seed, sigma: &[usize]) -> Seed {
    let s = seed.with_points_permuted(sigma);
    if is_odd(sigma) {
        s.reversed()
    } else {
        s
    }
}

fn embed_label(l: &Label, points: &[usize], m: usize) -> Label {
    l.map_atomic(&mut |leaf| match leaf.node() {
        LabelNode::Atomic { tag, weights } => Label::atomic(tag.clone(), weights.as_ref().map(|w| w.embedded(points, m))),
        _ => unreachable!("map_atomic only visits leaves"),
    })
}

/// Places a triangle seed in an `m`-gon: slot `s` goes to marked point
/// `points[s]`; vertex names get the prefix `t<index>:`.
pub fn embed(seed: &Seed, index: usize, points: [usize; 3], m: usize) -> Seed {
    let mut out = seed.clone();
    for v in &mut out.vertices {
        v.tag.name = format!("t{index}:{}", v.tag.name);
        v.tag.triangle = Some(index);
        v.weights = v.weights.as_ref().map(|w| w.embedded(&points, m));
        v.label = v.label.as_ref().map(|l| embed_label(l, &points, m));
    }
    out
}

/// Glues `b` onto `a` along the edge `{p, q}`: frozen vertices of `a`
/// supported exactly on `{p, q}` are matched with frozen vertices of `b`
/// with the same weight tuple and multiplier.  Matched pairs merge into one
/// unfrozen vertex (named as in `a`, with the `b` name as an alias) and the
/// exchange matrices add.
pub fn amalgamate(a: &Seed, b: &Seed, p: usize, q: usize) -> Result<Seed> {
    if !a.has_weights() || !b.has_weights() {
        return Err(Error::MissingWeights);
    }
    let on_edge = |s: &Seed| -> Vec<usize> {
        (0..s.len())
            .filter(|&i| {
                let sup = s.weights(i).expect("weights").support();
                s.is_frozen(i) && sup.len() == 2 && sup.contains(&p) && sup.contains(&q)
            })
            .collect()
    };
    let ea = on_edge(a);
    let eb = on_edge(b);
    if ea.is_empty() || ea.len() != eb.len() {
        return Err(Error::Glue(format!(
            "edge {{{}, {}}}: {} vertices on one side, {} on the other",
            p + 1,
            q + 1,
            ea.len(),
            eb.len()
        )));
    }
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for &j in &eb {
        let matches: Vec<usize> = ea
            .iter()
            .copied()
            .filter(|&i| a.weights(i) == b.weights(j) && a.vertex(i).d == b.vertex(j).d)
            .collect();
        let [i] = matches[..] else {
            return Err(Error::Glue(format!(
                "`{}` matches {} vertices of the other seed by weight and multiplier",
                b.name(j),
                matches.len()
            )));
        };
        if partner.values().any(|&x| x == i) {
            return Err(Error::Glue(format!("`{}` is matched twice", a.name(i))));
        }
        partner.insert(j, i);
    }
    let mut vertices: Vec<Vertex> = a.vertices().to_vec();
    let mut index_b = vec![0; b.len()];
    for j in 0..b.len() {
        match partner.get(&j) {
            Some(&i) => {
                index_b[j] = i;
                vertices[i].frozen = false;
                vertices[i].tag.aliases.push(b.name(j).to_string());
                vertices[i].tag.aliases.extend(b.vertex(j).tag.aliases.iter().cloned());
            }
            None => {
                index_b[j] = vertices.len();
                vertices.push(b.vertex(j).clone());
            }
        }
    }
    for (id, v) in vertices.iter_mut().enumerate() {
        v.id = id;
    }
    let n = vertices.len();
    let mut b2 = vec![vec![0i64; n]; n];
    for i in 0..a.len() {
        for j in 0..a.len() {
            b2[i][j] += a.b2()[i][j];
        }
    }
    for i in 0..b.len() {
        for j in 0..b.len() {
            b2[index_b[i]][index_b[j]] += b.b2()[i][j];
        }
    }
    Seed::new(vertices, b2, a.node_names().to_vec()).map_err(|e| Error::Glue(e.to_string()))
}

/// Amalgamates the dressed triangle seeds of a triangulated `m`-gon.
/// Triangles are added in breadth-first order of the dual tree, each glued
/// along the single diagonal it shares with the part already built.
pub fn build_conf_m_seed(datum: &RootDatum, tri: &TriangulatedPolygon, dressing: &Dressing) -> Result<Seed> {
    let m = tri.m();
    let ts = tri.triangles();
    if dressing.triangles.len() != ts.len() {
        return Err(Error::Triangulation("dressing does not match the triangulation".into()));
    }
    let mut cache: HashMap<Vec<usize>, Seed> = HashMap::new();
    let mut pieces = Vec::new();
    for (k, (t, dr)) in ts.iter().zip(&dressing.triangles).enumerate() {
        let mut sorted = dr.order;
        sorted.sort_unstable();
        if sorted != *t {
            return Err(Error::Triangulation(format!("dressing of triangle {} uses other corners", k + 1)));
        }
        if !cache.contains_key(&dr.word.0) {
            let (seed, _) = triangle_seed(datum, &dr.word, &WeightSource::Auto)?;
            cache.insert(dr.word.0.clone(), seed);
        }
        pieces.push(embed(&cache[&dr.word.0], k + 1, dr.order, m));
    }
    let mut placed = vec![false; ts.len()];
    placed[0] = true;
    let mut result = pieces[0].clone();
    let mut corners: Vec<[usize; 3]> = vec![ts[0]];
    while placed.iter().any(|x| !x) {
        let next = (0..ts.len()).find_map(|k| {
            if placed[k] {
                return None;
            }
            corners.iter().find_map(|c| {
                let shared: Vec<usize> = ts[k].iter().copied().filter(|x| c.contains(x)).collect();
                (shared.len() == 2).then(|| (k, shared[0], shared[1]))
            })
        });
        let (k, p, q) = next.ok_or_else(|| Error::Triangulation("triangles are not connected".into()))?;
        result = amalgamate(&result, &pieces[k], p, q)?;
        placed[k] = true;
        corners.push(ts[k]);
    }
    Ok(result)
}
