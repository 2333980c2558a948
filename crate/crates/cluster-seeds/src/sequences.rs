//! Named mutation sequences, their application stage by stage, and the
//! verifications built on them: triangle symmetries, diagonal flips,
//! Langlands pairings and the D4 diagram automorphisms.

use crate::builder::{triangle_seed, WeightSource};
use crate::error::{Error, Result};
use crate::glue::{build_conf_m_seed, Dressing, TriangulatedPolygon};
use crate::iso::{permutations, quiver_isomorphic, IsoOptions};
use crate::reference::{compare, ReferenceSeed};
use crate::root_data::{DynkinKind, RootDatum, WeightTuple, Weight};
use crate::seed::Seed;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, VecDeque};

/// The seed a built-in sequence starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SequenceBase {
    /// Triangle seed of the canonical word of the given type.
    Triangle(DynkinKind),
    /// Seed of four marked points (fan triangulation, default dressing).
    Quadrilateral(DynkinKind),
}

impl SequenceBase {
    pub fn datum(&self) -> RootDatum {
        let kind = match self {
            SequenceBase::Triangle(k) | SequenceBase::Quadrilateral(k) => *k,
        };
        RootDatum::new(kind).expect("built-in types are supported")
    }

    pub fn seed(&self) -> Result<Seed> {
        let datum = self.datum();
        match self {
            SequenceBase::Triangle(_) => Ok(triangle_seed(&datum, &datum.longest_word(), &WeightSource::Auto)?.0),
            SequenceBase::Quadrilateral(_) => {
                let tri = TriangulatedPolygon::fan(4)?;
                build_conf_m_seed(&datum, &tri, &Dressing::default_for(&datum, &tri))
            }
        }
    }
}

/// A mutation sequence: stages of pairwise commuting mutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationSequence {
    pub name: String,
    pub description: String,
    pub base: SequenceBase,
    pub stages: Vec<Vec<String>>,
}

impl MutationSequence {
    pub fn len(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stage_sizes(&self) -> Vec<usize> {
        self.stages.iter().map(Vec::len).collect()
    }

    /// The same mutations in reverse order (stages reversed).
    pub fn reversed(&self) -> MutationSequence {
        MutationSequence {
            name: format!("{}_reversed", self.name),
            description: format!("{} read backwards", self.name),
            base: self.base,
            stages: self.stages.iter().rev().cloned().collect(),
        }
    }
}

fn stages(list: &[&[&str]]) -> Vec<Vec<String>> {
    list.iter().map(|s| s.iter().map(|x| x.to_string()).collect()).collect()
}

/// Every built-in sequence.
pub fn builtin_sequences() -> Vec<MutationSequence> {
    let g2_13 = stages(&[&["x_a2"], &["x_a1", "x_b1"], &["x_a2"]]);
    let g2_23 = stages(&[&["x_b1"], &["x_b2", "x_a2"], &["x_b1"]]);
    let g2_12: Vec<Vec<String>> = g2_13.iter().chain(&g2_23).chain(&g2_13).cloned().collect();
    vec![
        MutationSequence {
            name: "g2_13".into(),
            description: "G2 triangle: exchanges the flags at marked points 1 and 3".into(),
            base: SequenceBase::Triangle(DynkinKind::G2),
            stages: g2_13,
        },
        MutationSequence {
            name: "g2_23".into(),
            description: "G2 triangle: exchanges the flags at marked points 2 and 3".into(),
            base: SequenceBase::Triangle(DynkinKind::G2),
            stages: g2_23,
        },
        MutationSequence {
            name: "g2_12".into(),
            description: "G2 triangle: the composite (13)(23)(13), exchanging marked points 1 and 2".into(),
            base: SequenceBase::Triangle(DynkinKind::G2),
            stages: g2_12,
        },
        MutationSequence {
            name: "g2_flip".into(),
            description: "G2 quadrilateral: flips the diagonal {1,3} to {2,4}".into(),
            base: SequenceBase::Quadrilateral(DynkinKind::G2),
            stages: stages(&[
                &["t1:x_a0"],
                &["t1:x_a1", "t1:x_b0", "t2:x_a1"],
                &["t1:x_a2", "t1:x_b1", "t1:x_a0", "t2:x_b1", "t2:x_a2"],
                &["t1:x_b2", "t1:x_a1", "t1:x_b0", "t2:x_a1", "t2:x_b2"],
                &["t1:x_b1", "t1:x_a0", "t2:x_b1"],
                &["t1:x_b0"],
            ]),
        },
        MutationSequence {
            name: "sl2_flip".into(),
            description: "SL2 quadrilateral: the single exchange flipping {1,3} to {2,4}".into(),
            base: SequenceBase::Quadrilateral(DynkinKind::A(1)),
            stages: stages(&[&["t1:x_10"]]),
        },
        MutationSequence {
            name: "sl3_flip".into(),
            description: "SL3 quadrilateral: flip {1,3} to {2,4}, found by breadth-first search".into(),
            base: SequenceBase::Quadrilateral(DynkinKind::A(2)),
            stages: stages(SL3_FLIP),
        },
        MutationSequence {
            name: "sl4_flip".into(),
            description: "SL4 quadrilateral: flip {1,3} to {2,4}, found by bidirectional breadth-first search".into(),
            base: SequenceBase::Quadrilateral(DynkinKind::A(3)),
            stages: stages(SL4_FLIP),
        },
    ]
}

/// Flip sequences found with [`search_flip`] and frozen here; tests re-run
/// the search and the evaluation oracle against them.
const SL3_FLIP: &[&[&str]] = &[&["t1:x_10"], &["t1:x_20"], &["t1:x_11"], &["t2:x_11"]];
const SL4_FLIP: &[&[&str]] = &[
    &["t1:x_10"],
    &["t1:x_20"],
    &["t1:x_30"],
    &["t1:x_21"],
    &["t2:x_11"],
    &["t1:x_11"],
    &["t1:x_12"],
    &["t2:x_21"],
    &["t1:x_20"],
    &["t2:x_12"],
];

pub fn builtin_sequence(name: &str) -> Result<MutationSequence> {
    builtin_sequences()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownSequence(name.to_string()))
}

/// Weights of every vertex after one stage.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageTrace {
    pub stage: usize,
    pub mutated: Vec<String>,
    pub weights: Vec<(String, Option<WeightTuple>)>,
}

fn trace(seed: &Seed, stage: usize, mutated: &[String]) -> StageTrace {
    StageTrace {
        stage,
        mutated: mutated.to_vec(),
        weights: seed
            .vertices()
            .iter()
            .map(|v| (v.tag.name.clone(), v.weights.clone()))
            .collect(),
    }
}

/// Applies the stages in order.  Each stage is applied in the listed order
/// and in the reverse order; the two results must agree.
pub fn apply_stages(seed: &Seed, name: &str, stages: &[Vec<String>]) -> Result<(Seed, Vec<StageTrace>)> {
    let mut cur = seed.clone();
    let mut traces = Vec::new();
    for (k, stage) in stages.iter().enumerate() {
        let mut forward = cur.clone();
        for v in stage {
            forward = forward.mutate_named(v)?;
        }
        let mut backward = cur.clone();
        for v in stage.iter().rev() {
            backward = backward.mutate_named(v)?;
        }
        if forward != backward {
            return Err(Error::StageOrder {
                sequence: name.to_string(),
                stage: k + 1,
            });
        }
        cur = forward;
        traces.push(trace(&cur, k + 1, stage));
    }
    Ok((cur, traces))
}

pub fn apply_sequence(seed: &Seed, seq: &MutationSequence) -> Result<(Seed, Vec<StageTrace>)> {
    apply_stages(seed, &seq.name, &seq.stages)
}

/// Outcome of a verification.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub passed: bool,
    /// Vertex correspondence `(computed, target)` when one was found.
    pub mapping: Option<Vec<(String, String)>>,
    pub weight_trace: Vec<StageTrace>,
    pub diagnostics: Vec<String>,
}

impl VerificationReport {
    pub(crate) fn new(name: impl Into<String>) -> Self {
        VerificationReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub(crate) fn fail(&mut self, msg: impl Into<String>) {
        self.passed = false;
        self.diagnostics.push(msg.into());
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        match self.diagnostics.first() {
            Some(d) if !self.passed => format!("{status} {}: {d}", self.name),
            _ => format!("{status} {}", self.name),
        }
    }
}

fn named_mapping(a: &Seed, b: &Seed, map: &[usize]) -> Vec<(String, String)> {
    map.iter()
        .enumerate()
        .map(|(i, &j)| (a.name(i).to_string(), b.name(j).to_string()))
        .collect()
}

/// Applies `stages` and checks that the result is the original seed with the
/// marked points permuted by `sigma` (slot `p` of the result is slot
/// `sigma[p]` of the original) and, if `expect_reversed`, every arrow
/// reversed.
pub fn verify_s3(seed: &Seed, seq: &MutationSequence, sigma: &[usize], expect_reversed: bool) -> VerificationReport {
    let mut report = VerificationReport::new(format!("{} realizes the permutation {:?} of marked points", seq.name, sigma));
    match apply_sequence(seed, seq) {
        Err(e) => report.fail(e.to_string()),
        Ok((result, traces)) => {
            report.weight_trace = traces;
            let opts = IsoOptions::strict().reversed(expect_reversed).with_points(sigma.to_vec());
            match quiver_isomorphic(&result, seed, &opts) {
                Some(map) => {
                    report.passed = true;
                    report.mapping = Some(named_mapping(&result, seed, &map));
                }
                None => report.fail("result is not isomorphic to the permuted original"),
            }
        }
    }
    report
}

/// Compares every stage with its reference drawing.
pub fn compare_stages(
    seed: &Seed,
    seq: &MutationSequence,
    references: &[ReferenceSeed],
) -> Result<Vec<(String, crate::reference::Comparison)>> {
    apply_sequence(seed, seq)?;
    let mut out = Vec::new();
    let mut cur = seed.clone();
    for (stage, reference) in seq.stages.iter().zip(references) {
        for v in stage {
            cur = cur.mutate_named(v)?;
        }
        out.push((reference.name.clone(), compare(&cur, reference)));
    }
    Ok(out)
}

/// Applies a flip sequence to the quadrilateral seed of the diagonal {1,3}
/// and looks for a rotation dressing of the flipped triangulation whose seed
/// is isomorphic to the result (marked points fixed).
pub fn verify_flip(datum: &RootDatum, seed: &Seed, seq: &MutationSequence) -> VerificationReport {
    let mut report = VerificationReport::new(format!("{} flips the diagonal", seq.name));
    let result = match apply_sequence(seed, seq) {
        Ok((r, t)) => {
            report.weight_trace = t;
            r
        }
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    let flipped = match TriangulatedPolygon::fan(4).and_then(|t| t.flip(0, 2)) {
        Ok(t) => t,
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    match flip_target(datum, &flipped, &result) {
        Ok(Some((target, map, dressing))) => {
            report.passed = true;
            report.mapping = Some(named_mapping(&result, &target, &map));
            report.diagnostics.push(format!("target dressing {}", dressing.to_json(datum)));
        }
        Ok(None) => report.fail("no rotation dressing of the flipped triangulation matches"),
        Err(e) => report.fail(e.to_string()),
    }
    report
}

/// The first rotation dressing of `flipped` whose seed is isomorphic to
/// `result` with marked points fixed, with the vertex map.
pub fn flip_target(
    datum: &RootDatum,
    flipped: &TriangulatedPolygon,
    result: &Seed,
) -> Result<Option<(Seed, Vec<usize>, Dressing)>> {
    for dressing in Dressing::all_rotations(datum, flipped) {
        let target = build_conf_m_seed(datum, flipped, &dressing)?;
        if let Some(map) = quiver_isomorphic(result, &target, &IsoOptions::strict()) {
            return Ok(Some((target, map, dressing)));
        }
    }
    Ok(None)
}

/// The Langlands pairing of vertex names for a G2 triangle seed:
/// `x_aj <-> x_b(3-j)`, `x_a <-> x_b`.
pub fn langlands_pairing_triangle(name: &str) -> String {
    let swap = |c: char| if c == 'a' { 'b' } else { 'a' };
    let rest = name.strip_prefix("x_").unwrap_or(name);
    let mut chars = rest.chars();
    match (chars.next(), chars.next(), chars.next()) {
        (Some(c @ ('a' | 'b')), None, _) => format!("x_{}", swap(c)),
        (Some(c @ ('a' | 'b')), Some(j), None) if j.is_ascii_digit() => {
            let j = j.to_digit(10).expect("digit");
            format!("x_{}{}", swap(c), 3 - j.min(3))
        }
        _ => name.to_string(),
    }
}

/// The Langlands pairing of vertex names for the G2 quadrilateral seed:
/// `ti:x_aj <-> ti:x_bj`, and the boundary pairs `t1:x_a <-> t2:x_b`,
/// `t2:x_a <-> t1:x_b`.
pub fn langlands_pairing_quadrilateral(name: &str) -> String {
    match name {
        "t1:x_a" => "t2:x_b".into(),
        "t2:x_b" => "t1:x_a".into(),
        "t2:x_a" => "t1:x_b".into(),
        "t1:x_b" => "t2:x_a".into(),
        _ => {
            let Some((prefix, rest)) = name.split_once(":x_") else {
                return name.to_string();
            };
            let mut chars = rest.chars();
            match chars.next() {
                Some('a') => format!("{prefix}:x_b{}", chars.as_str()),
                Some('b') => format!("{prefix}:x_a{}", chars.as_str()),
                _ => name.to_string(),
            }
        }
    }
}

/// Renames vertices through a pairing (aliases follow).
pub fn relabel(seed: &Seed, pairing: &dyn Fn(&str) -> String) -> Seed {
    let mut out = seed.renamed(&|n| Some(pairing(n)));
    for v in &mut out.vertices {
        v.tag.aliases = v.tag.aliases.iter().map(|a| pairing(a)).collect();
    }
    out
}

/// Compares two seeds vertex by vertex through their names.
fn same_by_name(a: &Seed, b: &Seed) -> std::result::Result<(), String> {
    if a.len() != b.len() {
        return Err("different vertex counts".into());
    }
    let idx: Vec<usize> = (0..a.len())
        .map(|i| b.index(a.name(i)).map_err(|e| e.to_string()))
        .collect::<std::result::Result<_, _>>()?;
    for i in 0..a.len() {
        let (va, vb) = (a.vertex(i), b.vertex(idx[i]));
        if va.frozen != vb.frozen || va.d != vb.d || va.weights != vb.weights {
            return Err(format!("vertex {} differs", a.name(i)));
        }
        for j in 0..a.len() {
            if a.b2()[i][j] != b.b2()[idx[i]][idx[j]] {
                return Err(format!("entry ({}, {}) differs", a.name(i), a.name(j)));
            }
        }
    }
    Ok(())
}

fn map_stages(stages: &[Vec<String>], pairing: &dyn Fn(&str) -> String) -> Vec<BTreeSet<String>> {
    stages.iter().map(|s| s.iter().map(|x| pairing(x)).collect()).collect()
}

fn as_sets(stages: &[Vec<String>]) -> Vec<BTreeSet<String>> {
    stages.iter().map(|s| s.iter().cloned().collect()).collect()
}

/// Checks `P(L(mu(S))) = mu'(P(L(S)))` vertex by vertex, where `mu` mutates at
/// `names` in order and `mu'` at their images under the pairing `P`.
pub fn verify_langlands_covariance(
    datum: &RootDatum,
    seed: &Seed,
    names: &[String],
    pairing: &dyn Fn(&str) -> String,
) -> VerificationReport {
    let mut report = VerificationReport::new(format!("Langlands duality commutes with mutation at {names:?}"));
    let run = || -> Result<std::result::Result<(), String>> {
        let mut mutated = seed.clone();
        for n in names {
            mutated = mutated.mutate_named(n)?;
        }
        let left = relabel(&mutated.langlands_dual(datum)?, pairing);
        let mut right = relabel(&seed.langlands_dual(datum)?, pairing);
        for n in names {
            right = right.mutate_named(&pairing(n))?;
        }
        Ok(same_by_name(&left, &right))
    };
    match run() {
        Ok(Ok(())) => report.passed = true,
        Ok(Err(msg)) => report.fail(msg),
        Err(e) => report.fail(e.to_string()),
    }
    report
}

/// Checks that the Langlands dual `L` (followed by the vertex pairing `P`)
/// turns `seq_a` into `seq_b`:
/// 1. `P` maps the stages of `seq_a` onto those of `seq_b`;
/// 2. `P(L(mu_a(S))) = mu_b(P(L(S)))` vertex by vertex;
/// 3. `P(L(S))` is isomorphic (for some permutation of marked points, arrows
///    possibly reversed) to `S` or to `mu_a(S)`.
pub fn verify_langlands_pairing(
    datum: &RootDatum,
    seed: &Seed,
    seq_a: &MutationSequence,
    seq_b: &MutationSequence,
    pairing: &dyn Fn(&str) -> String,
) -> VerificationReport {
    let mut report = VerificationReport::new(format!("Langlands duality pairs {} with {}", seq_a.name, seq_b.name));
    report.passed = true;
    if map_stages(&seq_a.stages, pairing) != as_sets(&seq_b.stages) {
        report.fail(format!("the pairing does not map {} onto {}", seq_a.name, seq_b.name));
        return report;
    }
    let run = || -> Result<(Seed, Seed, Seed)> {
        let (after_a, _) = apply_sequence(seed, seq_a)?;
        let left = relabel(&after_a.langlands_dual(datum)?, pairing);
        let dual = relabel(&seed.langlands_dual(datum)?, pairing);
        let (right, _) = apply_sequence(&dual, seq_b)?;
        Ok((left, right, after_a))
    };
    let (left, right, after_a) = match run() {
        Ok(x) => x,
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    if let Err(msg) = same_by_name(&left, &right) {
        report.fail(format!("duality does not intertwine the sequences: {msg}"));
        return report;
    }
    let dual = match seed.langlands_dual(datum) {
        Ok(d) => relabel(&d, pairing),
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    let m = seed.points().unwrap_or(0);
    for (target, what) in [(seed, "the original seed"), (&after_a, "the mutated seed")] {
        for perm in permutations(m) {
            for reverse in [false, true] {
                let opts = IsoOptions::strict().reversed(reverse).with_points(perm.clone());
                if let Some(map) = quiver_isomorphic(&dual, target, &opts) {
                    report.mapping = Some(named_mapping(&dual, target, &map));
                    report.diagnostics.push(format!(
                        "dual seed matches {what} with marked points {:?}{}",
                        perm.iter().map(|p| p + 1).collect::<Vec<_>>(),
                        if reverse { " and arrows reversed" } else { "" }
                    ));
                    return report;
                }
            }
        }
    }
    report.fail("the dual seed matches neither the original nor the mutated seed");
    report
}

/// Checks that permuting the D4 nodes by `perm` (length 4, node order
/// 1, 2, 3, b) is an automorphism of the D4 triangle seed: it must preserve
/// frozen status, multipliers, every exchange-matrix entry, and map weights
/// by the same permutation of fundamental weights.
pub fn verify_dynkin_automorphism_d4(perm: &[usize]) -> VerificationReport {
    let mut report = VerificationReport::new(format!("D4 node permutation {perm:?} is a seed automorphism"));
    let datum = RootDatum::new(DynkinKind::D4).expect("D4 is supported");
    let seed = match triangle_seed(&datum, &datum.longest_word(), &WeightSource::Auto) {
        Ok((s, _)) => s,
        Err(e) => {
            report.fail(e.to_string());
            return report;
        }
    };
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != [0, 1, 2, 3] {
        report.fail("not a permutation of the four nodes");
        return report;
    }
    let rename = |name: &str| -> String {
        let rest = &name[2..];
        let mut chars = rest.chars();
        let node = chars.next().expect("node letter");
        let i = datum.node_names.iter().position(|n| n.starts_with(node)).expect("node");
        format!("x_{}{}", datum.node_names[perm[i]], chars.as_str())
    };
    let mut map = Vec::new();
    for i in 0..seed.len() {
        match seed.index(&rename(seed.name(i))) {
            Ok(j) => map.push(j),
            Err(e) => {
                report.fail(e.to_string());
                return report;
            }
        }
    }
    let permute_weight = |w: &Weight| {
        let mut c = vec![w.coords()[0]; 4];
        for (i, x) in w.coords().iter().enumerate() {
            c[perm[i]] = *x;
        }
        Weight::new(c)
    };
    report.passed = true;
    for i in 0..seed.len() {
        let j = map[i];
        let (vi, vj) = (seed.vertex(i), seed.vertex(j));
        if vi.frozen != vj.frozen || vi.d != vj.d {
            report.fail(format!("{} and {} differ in frozen status or multiplier", vi.tag.name, vj.tag.name));
            return report;
        }
        let wi = vi.weights.as_ref().map(|t| WeightTuple(t.0.iter().map(permute_weight).collect()));
        if wi != vj.weights {
            report.fail(format!("weight of {} does not map to that of {}", vi.tag.name, vj.tag.name));
            return report;
        }
        for k in 0..seed.len() {
            if seed.b2()[i][k] != seed.b2()[j][map[k]] {
                report.fail(format!(
                    "arrow {} - {} is not mapped to {} - {}",
                    seed.name(i),
                    seed.name(k),
                    seed.name(j),
                    seed.name(map[k])
                ));
                return report;
            }
        }
    }
    report.mapping = Some(named_mapping(&seed, &seed, &map));
    report
}

/// Vertex signature used by the canonical form.
type Signature = (bool, i64, Option<WeightTuple>);

/// Canonical form for isomorphism with marked points fixed.
pub type CanonicalKey = (Vec<Signature>, Vec<i64>);

/// Isomorphism invariant used by the breadth-first searches: when all
/// vertices have distinct (frozen, multiplier, weights) signatures, sorting by
/// signature gives a canonical form, and two seeds are isomorphic with
/// marked points fixed exactly when their keys agree.
pub fn canonical_key(seed: &Seed) -> Option<CanonicalKey> {
    let sigs: Vec<Signature> = seed
        .vertices()
        .iter()
        .map(|v| (v.frozen, v.d, v.weights.clone()))
        .collect();
    let mut order: Vec<usize> = (0..seed.len()).collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    if order.windows(2).any(|w| sigs[w[0]] == sigs[w[1]]) {
        return None;
    }
    let mut matrix = Vec::with_capacity(seed.len() * seed.len());
    for &i in &order {
        for &j in &order {
            matrix.push(seed.b2()[i][j]);
        }
    }
    Some((order.iter().map(|&i| sigs[i].clone()).collect(), matrix))
}

/// Breadth-first search (meeting in the middle) for a mutation sequence
/// taking `start` to a seed whose canonical key is in `targets`.  Returns
/// the shortest sequence found with total length at most `2 * half_depth`.
pub fn search_flip(start: &Seed, targets: &[Seed], half_depth: usize) -> Option<Vec<String>> {
    let start_key = canonical_key(start)?;
    type Layer = HashMap<CanonicalKey, (Seed, Vec<usize>)>;
    let expand = |roots: Vec<(CanonicalKey, Seed)>, depth: usize| -> Layer {
        let mut seen: Layer = HashMap::new();
        let mut queue = VecDeque::new();
        for (k, s) in roots {
            seen.insert(k, (s.clone(), Vec::new()));
            queue.push_back((s, Vec::new()));
        }
        while let Some((s, path)) = queue.pop_front() {
            if path.len() == depth {
                continue;
            }
            for k in s.unfrozen() {
                if path.last() == Some(&k) {
                    continue;
                }
                let Ok(t) = s.mutate(k) else { continue };
                let Some(key) = canonical_key(&t) else { continue };
                if seen.contains_key(&key) {
                    continue;
                }
                let mut p = path.clone();
                p.push(k);
                seen.insert(key, (t.clone(), p.clone()));
                queue.push_back((t, p));
            }
        }
        seen
    };
    let forward = expand(vec![(start_key, start.clone())], half_depth);
    let roots: Vec<(CanonicalKey, Seed)> = targets
        .iter()
        .filter_map(|t| canonical_key(t).map(|k| (k, t.clone())))
        .collect();
    let backward = expand(roots, half_depth);
    let mut best: Option<(usize, Vec<String>)> = None;
    let mut keys: Vec<&CanonicalKey> = forward.keys().collect();
    keys.sort();
    for key in keys {
        let (_, fpath) = &forward[key];
        if let Some((meet, bpath)) = backward.get(key) {
            let total = fpath.len() + bpath.len();
            if best.as_ref().is_some_and(|(l, _)| *l <= total) {
                continue;
            }
            let mut names: Vec<String> = fpath.iter().map(|&k| start.name(k).to_string()).collect();
            // The backward path indexes the target's vertices; carry it over
            // to the forward seed through the signature bijection.
            let (fseed, _) = &forward[key];
            let to_forward = signature_map(meet, fseed)?;
            for &k in bpath.iter().rev() {
                names.push(fseed.name(to_forward[k]).to_string());
            }
            best = Some((total, names));
        }
    }
    best.map(|(_, n)| n)
}

/// Index map between two seeds with equal canonical keys, via signatures.
fn signature_map(a: &Seed, b: &Seed) -> Option<Vec<usize>> {
    let sig = |s: &Seed, i: usize| (s.is_frozen(i), s.vertex(i).d, s.weights(i).cloned());
    let lookup: HashMap<_, usize> = (0..b.len()).map(|j| (sig(b, j), j)).collect();
    (0..a.len()).map(|i| lookup.get(&sig(a, i)).copied()).collect()
}

/// The seeds of every rotation dressing of the flipped quadrilateral.
pub fn flipped_targets(datum: &RootDatum) -> Result<Vec<Seed>> {
    let flipped = TriangulatedPolygon::fan(4)?.flip(0, 2)?;
    Dressing::all_rotations(datum, &flipped)
        .iter()
        .map(|d| build_conf_m_seed(datum, &flipped, d))
        .collect()
}
