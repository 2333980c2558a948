//! Cartan data, Weyl-group word calculus and weight-lattice arithmetic.
//!
//! Conventions: `cartan[i][j] = <alpha_j, alpha_i^vee>`, so the simple root
//! `alpha_j` expands as `sum_i cartan[i][j] * omega_i`: column `j` of the Cartan
//! matrix.  All weights are written in the basis of fundamental weights.
//! Words are stored in written order and act right-to-left.

use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

/// Exact rational scalar used for weights and exchange-matrix entries.
pub type Q = Rational64;

/// Formats a rational as `p` or `p/q`.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A weight, in fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<Q>);

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![Q::zero(); rank])
    }

    /// The fundamental weight `omega_i` (0-based node index).
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Weight::zero(rank);
        w.0[i] = Q::from_integer(1);
        w
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| Q::from_integer(c)).collect())
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    pub fn scaled(&self, c: Q) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect())
    }

    /// If this weight is a single fundamental weight `omega_k`, returns `k`.
    pub fn as_fundamental(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.rank()).filter(|&i| !self.0[i].is_zero()).collect();
        match nz.as_slice() {
            [k] if self.0[*k] == Q::from_integer(1) => Some(*k),
            _ => None,
        }
    }

    /// Renders the weight as a combination of node names, e.g. `2a+b`.
    pub fn display(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = names
                .get(i)
                .map(|n| {
                    if n.chars().all(char::is_alphabetic) {
                        n.clone()
                    } else {
                        format!("w{n}")
                    }
                })
                .unwrap_or_else(|| format!("w{}", i + 1));
            let sign = if c.is_negative() { "-" } else { "+" };
            if !out.is_empty() || c.is_negative() {
                out.push_str(sign);
            }
            let a = c.abs();
            if a == Q::from_integer(1) {
            } else if a.is_integer() {
                out.push_str(&a.numer().to_string());
            } else {
                out.push_str(&format!("({})", fmt_q(&a)));
            }
            out.push_str(&name);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            if c.is_integer() {
                seq.serialize_element(c.numer())?;
            } else {
                seq.serialize_element(&fmt_q(c))?;
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        raw.iter()
            .map(|v| match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(Q::from_integer)
                    .ok_or_else(|| de::Error::custom("weight coordinate must be an integer or \"p/q\"")),
                serde_json::Value::String(s) => parse_q(s).map_err(de::Error::custom),
                _ => Err(de::Error::custom("weight coordinate must be an integer or \"p/q\"")),
            })
            .collect::<std::result::Result<Vec<Q>, _>>()
            .map(Weight)
    }
}

/// One weight per marked point: the graded piece a cluster variable lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightTuple(pub Vec<Weight>);

impl WeightTuple {
    pub fn zero(points: usize, rank: usize) -> Self {
        WeightTuple(vec![Weight::zero(rank); points])
    }

    pub fn points(&self) -> usize {
        self.0.len()
    }

    pub fn rank(&self) -> usize {
        self.0.first().map_or(0, Weight::rank)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Weight::is_zero)
    }

    pub fn add_scaled(&mut self, other: &WeightTuple, c: Q) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = &*a + &b.scaled(c);
        }
    }

    pub fn scaled(&self, c: Q) -> WeightTuple {
        WeightTuple(self.0.iter().map(|w| w.scaled(c)).collect())
    }

    /// Marked points carrying a nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.points()).filter(|&p| !self.0[p].is_zero()).collect()
    }

    /// Moves slot `p` to slot `perm[p]`.
    pub fn permuted(&self, perm: &[usize]) -> WeightTuple {
        let mut out = self.0.clone();
        for (p, &q) in perm.iter().enumerate() {
            out[q] = self.0[p].clone();
        }
        WeightTuple(out)
    }

    /// Places slot `s` of this tuple at marked point `points[s]` of an `m`-point tuple.
    pub fn embedded(&self, points: &[usize], m: usize) -> WeightTuple {
        let mut out = WeightTuple::zero(m, self.rank());
        for (s, &p) in points.iter().enumerate() {
            out.0[p] = self.0[s].clone();
        }
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.0.iter().map(|w| w.display(names)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Root-system type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynkinKind {
    A(usize),
    D4,
    G2,
}

impl FromStr for DynkinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let l = s.trim().to_ascii_lowercase();
        match l.as_str() {
            "g2" => Ok(DynkinKind::G2),
            "d4" => Ok(DynkinKind::D4),
            _ => match l.strip_prefix('a').and_then(|n| n.parse::<usize>().ok()) {
                Some(n) if n >= 1 => Ok(DynkinKind::A(n)),
                _ => Err(Error::UnsupportedKind(s.to_string())),
            },
        }
    }
}

impl fmt::Display for DynkinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinKind::A(n) => write!(f, "a{n}"),
            DynkinKind::D4 => write!(f, "d4"),
            DynkinKind::G2 => write!(f, "g2"),
        }
    }
}

/// A word in the simple reflections: 0-based node indices in written order.
/// The rightmost letter acts first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeylWord(pub Vec<usize>);

impl WeylWord {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> WeylWord {
        WeylWord(self.0.iter().rev().copied().collect())
    }
}

/// Lie-theoretic ground data for one of the supported types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub kind: DynkinKind,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// Squared root lengths `d_i`, normalised so that short roots have 1.
    pub multipliers: Vec<i64>,
    pub positive_root_count: usize,
    pub node_names: Vec<String>,
}

impl RootDatum {
    /// Standard Cartan data.  G2 nodes are ordered (a = short, b = long); D4
    /// nodes are ordered (1, 2, 3, b) with `b` the central node.
    pub fn new(kind: DynkinKind) -> Result<Self> {
        let (cartan, multipliers, node_names, positive_root_count) = match kind {
            DynkinKind::A(n) => {
                if n == 0 {
                    return Err(Error::UnsupportedKind("a0".into()));
                }
                let c = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| match i.abs_diff(j) {
                                0 => 2,
                                1 => -1,
                                _ => 0,
                            })
                            .collect()
                    })
                    .collect();
                let names = (1..=n).map(|i| i.to_string()).collect();
                (c, vec![1; n], names, n * (n + 1) / 2)
            }
            DynkinKind::G2 => (
                vec![vec![2, -3], vec![-1, 2]],
                vec![1, 3],
                vec!["a".into(), "b".into()],
                6,
            ),
            DynkinKind::D4 => (
                vec![
                    vec![2, 0, 0, -1],
                    vec![0, 2, 0, -1],
                    vec![0, 0, 2, -1],
                    vec![-1, -1, -1, 2],
                ],
                vec![1, 1, 1, 1],
                vec!["1".into(), "2".into(), "3".into(), "b".into()],
                12,
            ),
        };
        let rank = multipliers.len();
        Ok(RootDatum {
            kind,
            rank,
            cartan,
            multipliers,
            positive_root_count,
            node_names,
        })
    }

    pub fn parse(kind: &str) -> Result<Self> {
        RootDatum::new(kind.parse()?)
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::InvalidNode(i.to_string()))
        }
    }

    /// `alpha_i` in fundamental-weight coordinates.
    pub fn simple_root(&self, i: usize) -> Weight {
        Weight((0..self.rank).map(|j| Q::from_integer(self.cartan[j][i])).collect())
    }

    pub fn fundamental(&self, i: usize) -> Weight {
        Weight::fundamental(self.rank, i)
    }

    pub fn zero(&self) -> Weight {
        Weight::zero(self.rank)
    }

    /// Dynkin neighbours of node `i`.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank).filter(|&j| j != i && self.cartan[i][j] != 0).collect()
    }

    /// `s_i(w) = w - <w, alpha_i^vee> alpha_i`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let c = w.0[i];
        w - &self.simple_root(i).scaled(c)
    }

    /// Applies a word to a weight (rightmost letter first).
    pub fn act(&self, word: &[usize], w: &Weight) -> Weight {
        word.iter().rev().fold(w.clone(), |acc, &i| self.reflect(i, &acc))
    }

    /// Reflection of a root written in simple-root coordinates.
    fn reflect_root(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let pairing: i64 = (0..self.rank).map(|j| self.cartan[i][j] * beta[j]).sum();
        let mut out = beta.to_vec();
        out[i] -= pairing;
        out
    }

    /// All positive roots in simple-root coordinates.
    pub fn positive_roots(&self) -> Vec<Vec<i64>> {
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..self.rank {
            let mut e = vec![0; self.rank];
            e[i] = 1;
            seen.insert(e.clone());
            queue.push_back(e);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..self.rank {
                let r = self.reflect_root(i, &beta);
                if r.iter().all(|&c| c >= 0) && seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// A word is reduced iff each letter inverts a new positive root: the roots
    /// `s_{i_1} ... s_{i_{t-1}} (alpha_{i_t})` must all be positive.
    pub fn is_reduced(&self, word: &WeylWord) -> bool {
        if word.0.iter().any(|&i| i >= self.rank) {
            return false;
        }
        let mut inverted = HashSet::new();
        for t in 0..word.len() {
            let mut beta = vec![0; self.rank];
            beta[word.0[t]] = 1;
            for &i in word.0[..t].iter().rev() {
                beta = self.reflect_root(i, &beta);
            }
            if beta.iter().any(|&c| c < 0) || !inverted.insert(beta) {
                return false;
            }
        }
        true
    }

    pub fn is_longest_word(&self, word: &WeylWord) -> bool {
        word.len() == self.positive_root_count && self.is_reduced(word)
    }

    /// The canonical reduced word for `w0` used throughout the library.
    /// Type A: `(s1 s2 ... sn)(s1 ... s_{n-1}) ... (s1)`; G2: `s_b s_a s_b s_a s_b s_a`;
    /// D4: `(s_b s_1 s_2 s_3)` three times.
    pub fn longest_word(&self) -> WeylWord {
        match self.kind {
            DynkinKind::A(n) => WeylWord((1..=n).rev().flat_map(|top| 0..top).collect()),
            DynkinKind::G2 => WeylWord(vec![1, 0, 1, 0, 1, 0]),
            DynkinKind::D4 => WeylWord([3, 0, 1, 2].repeat(3)),
        }
    }

    pub fn w0(&self, w: &Weight) -> Weight {
        self.act(&self.longest_word().0, w)
    }

    /// `-w0(w)`.
    pub fn w0_dual(&self, w: &Weight) -> Weight {
        -&self.w0(w)
    }

    /// The node `k^vee` with `omega_{k^vee} = -w0(omega_k)`.
    pub fn dual_node(&self, k: usize) -> usize {
        self.w0_dual(&self.fundamental(k))
            .as_fundamental()
            .expect("-w0 permutes fundamental weights")
    }

    /// The node of the Langlands-dual diagram identified with node `i`
    /// (the long and short nodes trade places for G2).
    pub fn langlands_node(&self, i: usize) -> usize {
        match self.kind {
            DynkinKind::G2 => 1 - i,
            _ => i,
        }
    }

    /// Parses a word written with node names, e.g. `bababa` or `121321`.
    /// Tokens may be separated by spaces or commas (needed for names longer than
    /// one character).
    pub fn parse_word(&self, s: &str) -> Result<WeylWord> {
        let tokens: Vec<String> = if s.contains([' ', ',']) {
            s.split([' ', ','])
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let t = t.strip_prefix("s_").unwrap_or(t);
                    match t.strip_prefix('s') {
                        Some(rest) if !rest.is_empty() => rest.to_string(),
                        _ => t.to_string(),
                    }
                })
                .collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        tokens
            .iter()
            .map(|t| {
                self.node_names
                    .iter()
                    .position(|n| n.eq_ignore_ascii_case(t))
                    .ok_or_else(|| Error::InvalidNode(t.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(WeylWord)
    }

    pub fn format_word(&self, w: &WeylWord) -> String {
        let sep = if self.node_names.iter().any(|n| n.len() > 1) { " " } else { "" };
        w.0.iter()
            .map(|&i| self.node_names[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Lexicographic normal form of the commutation class of a word: two words
    /// related by swaps of adjacent commuting letters have the same normal form.
    pub fn commutation_normal_form(&self, word: &WeylWord) -> WeylWord {
        let mut rest = word.0.clone();
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            // A letter may move to the front if it commutes with every earlier letter.
            let best = (0..rest.len())
                .filter(|&p| {
                    rest[..p]
                        .iter()
                        .all(|&q| q != rest[p] && self.cartan[q][rest[p]] == 0)
                })
                .min_by_key(|&p| rest[p])
                .expect("the first letter is always movable");
            out.push(rest.remove(best));
        }
        WeylWord(out)
    }
}

/// Folds a D4 word onto G2: each block containing the three outer letters once
/// each (in any order) becomes `a`, each central letter becomes `b`.
pub fn fold_d4_word(word: &WeylWord) -> Result<WeylWord> {
    let mut out = Vec::new();
    let mut t = 0;
    let w = &word.0;
    while t < w.len() {
        match w[t] {
            3 => {
                out.push(1);
                t += 1;
            }
            x if x < 3 => {
                let block: BTreeSet<usize> = w[t..].iter().take(3).copied().collect();
                if w.len() - t < 3 || block != BTreeSet::from([0, 1, 2]) {
                    return Err(Error::Folding(format!(
                        "outer letters starting at position {} do not form a block {{1,2,3}}",
                        t + 1
                    )));
                }
                out.push(0);
                t += 3;
            }
            x => return Err(Error::InvalidNode(x.to_string())),
        }
    }
    Ok(WeylWord(out))
}
