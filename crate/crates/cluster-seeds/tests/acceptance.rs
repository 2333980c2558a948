//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use cluster_seeds::builder::{assign_weights, build_bruhat_seed, reverse_word_seed, triangle_seed, WeightSource};
use cluster_seeds::glue::{build_conf_m_seed, Dressing, TriangulatedPolygon};
use cluster_seeds::oracle::{
    check_all_exchanges, check_cyclic_symmetry, check_shear_action, generic_flags, generic_shear_flags,
    quadrilateral_seed, random_torus, s_g_scalar, torus_weight_check, type_a_triangle_seed, Exact,
};
use cluster_seeds::reference::{compare, reference};
use cluster_seeds::sequences::*;
use cluster_seeds::{quiver_isomorphic, DynkinKind, IsoOptions, RootDatum, Seed, Weight, WeightTuple, Q};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn matches_reference(seed: &Seed, name: &str) -> Result<usize, String> {
    let r = reference(name).map_err(|e| e.to_string())?;
    let c = compare(seed, &r);
    ensure(c.passed(), format!("{name}: {}", c.mismatches.join("; ")))?;
    Ok(c.pinned.len())
}

fn datum(kind: &str) -> Result<RootDatum, String> {
    RootDatum::parse(kind).map_err(|e| e.to_string())
}

fn bruhat(kind: &str, word: &str) -> Result<Seed, String> {
    let d = datum(kind)?;
    let w = d.parse_word(word).map_err(|e| e.to_string())?;
    build_bruhat_seed(&d, &w).map_err(|e| e.to_string())
}

fn word_quivers() -> Outcome {
    let d = datum("a3")?;
    let word = d.parse_word("121321").map_err(|e| e.to_string())?;
    let sl4 = bruhat("a3", "121321")?;
    ensure(sl4.len() == 9, "SL4 seed does not have 9 vertices")?;
    let sl4 = assign_weights(&sl4, &d, &word, &WeightSource::Auto).map_err(|e| e.to_string())?;
    matches_reference(&sl4, "sl4-bruhat")?;
    let g2 = bruhat("g2", "bababa")?;
    ensure(g2.len() == 8, "G2 seed does not have 8 vertices")?;
    matches_reference(&g2, "g2-bruhat")?;
    let d4 = bruhat("d4", "b123b123b123")?;
    ensure(d4.len() == 16, "Spin8 seed does not have 16 vertices")?;
    matches_reference(&d4, "d4-bruhat")?;
    Ok("SL4 (9), G2 (8), Spin8 (16) match their drawings arrow by arrow".into())
}

fn triangle_completion() -> Outcome {
    let mut lines = Vec::new();
    for (kind, word, size, refs) in [
        ("a3", "121321", 12, &["sl4-triangle"][..]),
        ("g2", "bababa", 10, &["g2-triangle-quiver", "g2-triangle"][..]),
    ] {
        let d = datum(kind)?;
        let w = d.parse_word(word).map_err(|e| e.to_string())?;
        // Completion fails unless every linear system has a zero kernel.
        let (seed, report) = triangle_seed(&d, &w, &WeightSource::Auto).map_err(|e| e.to_string())?;
        ensure(seed.len() == size, format!("{kind}: {} vertices", seed.len()))?;
        for r in refs {
            matches_reference(&seed, r)?;
        }
        lines.push(format!(
            "{kind}: {size} vertices, systems {}",
            report
                .phases
                .iter()
                .map(|(p, u, e)| format!("{p} {u}x{e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(format!("{}; all unique", lines.join("; ")))
}

fn q(p: i64, d: i64) -> Q {
    Q::new(p, d)
}

fn edge_sums() -> Outcome {
    let s = type_a_triangle_seed(4).map_err(|e| e.to_string())?;
    let w = |c: [Q; 3]| Weight::new(c.to_vec());
    let z = q(0, 1);
    // Expected values of the edge sum on the edge A3A1 for omega_1, omega_2, omega_3.
    let expected = [
        (w([z, q(1, 2), q(-1, 1)]), w([q(1, 1), q(-1, 2), z])),
        (w([q(1, 2), q(-1, 1), q(1, 2)]), w([q(-1, 2), q(1, 1), q(-1, 2)])),
        (w([q(-1, 1), q(1, 2), z]), w([z, q(-1, 2), q(1, 1)])),
    ];
    for (k, (at_a1, at_a3)) in expected.into_iter().enumerate() {
        let i = (0..s.len())
            .find(|&i| {
                let t = s.weights(i).unwrap();
                s.is_frozen(i) && t.support() == [0, 2] && t.0[2].as_fundamental() == Some(k)
            })
            .ok_or(format!("no edge vertex with omega_{} at A3", k + 1))?;
        let got = s.weight_balance(i).map_err(|e| e.to_string())?;
        let want = WeightTuple(vec![at_a1, Weight::zero(3), at_a3]);
        ensure(
            got == want,
            format!("omega_{}: got {}", k + 1, got.display(s.node_names())),
        )?;
    }
    Ok("S sums on A3A1 for omega_1, omega_2, omega_3 are exact".into())
}

fn g2_triangle() -> Result<Seed, String> {
    SequenceBase::Triangle(DynkinKind::G2).seed().map_err(|e| e.to_string())
}

fn g2_transpositions() -> Outcome {
    let s = g2_triangle()?;
    let mut pinned = 0;
    for (name, prefix, sigma) in [
        ("g2_13", "g2-transposition-13", [2, 1, 0]),
        ("g2_23", "g2-transposition-23", [0, 2, 1]),
    ] {
        let seq = builtin_sequence(name).map_err(|e| e.to_string())?;
        ensure(seq.len() == 4, format!("{name} has {} mutations", seq.len()))?;
        let refs = (1..=3)
            .map(|k| reference(&format!("{prefix}-stage{k}")))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        for (n, c) in compare_stages(&s, &seq, &refs).map_err(|e| e.to_string())? {
            ensure(c.passed(), format!("{n}: {}", c.mismatches.join("; ")))?;
            pinned += c.pinned.len();
        }
        let r = verify_s3(&s, &seq, &sigma, true);
        ensure(r.passed, r.summary())?;
    }
    Ok(format!(
        "(13), (23): all stages match, results are the arrow-reversed seed with points exchanged ({pinned} listed drawing discrepancies observed)"
    ))
}

fn g2_flip() -> Outcome {
    let d = datum("g2")?;
    let tri = TriangulatedPolygon::fan(4).map_err(|e| e.to_string())?;
    let seed = build_conf_m_seed(&d, &tri, &Dressing::default_for(&d, &tri)).map_err(|e| e.to_string())?;
    matches_reference(&seed, "g2-conf4")?;
    let seq = builtin_sequence("g2_flip").map_err(|e| e.to_string())?;
    ensure(seq.len() == 18 && seq.stages.len() == 6, "flip sequence is not 18 mutations in 6 stages")?;
    let refs = (1..=6)
        .map(|k| reference(&format!("g2-flip-stage{k}")))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut pinned = 0;
    for (n, c) in compare_stages(&seed, &seq, &refs).map_err(|e| e.to_string())? {
        ensure(c.passed(), format!("{n}: {}", c.mismatches.join("; ")))?;
        pinned += c.pinned.len();
    }
    let r = verify_flip(&d, &seed, &seq);
    ensure(r.passed, r.summary())?;
    Ok(format!(
        "6 stage tables match, result is the flipped-triangulation seed ({pinned} listed drawing discrepancies observed)"
    ))
}

fn g2_composite() -> Outcome {
    let d = datum("g2")?;
    let s = g2_triangle()?;
    let seq = builtin_sequence("g2_12").map_err(|e| e.to_string())?;
    ensure(seq.len() == 12, "composite is not 12 mutations")?;
    let (after, _) = apply_sequence(&s, &seq).map_err(|e| e.to_string())?;
    let other = reverse_word_seed(&d, &d.parse_word("bababa").map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    ensure(
        quiver_isomorphic(&after, &other, &IsoOptions::strict()).is_some(),
        "(12) result is not the seed of the word ababab",
    )?;
    ensure(
        quiver_isomorphic(&s, &other, &IsoOptions::strict()).is_none(),
        "the two reduced words give the same seed, the check is vacuous",
    )?;
    Ok("(13)(23)(13) takes the bababa seed to the ababab seed".into())
}

fn same_by_name(a: &Seed, b: &Seed) -> Result<(), String> {
    for i in 0..a.len() {
        let j = b.index(a.name(i)).map_err(|e| e.to_string())?;
        let (va, vb) = (a.vertex(i), b.vertex(j));
        ensure(va.frozen == vb.frozen && va.d == vb.d && va.weights == vb.weights, format!("{} differs", a.name(i)))?;
        for k in 0..a.len() {
            let l = b.index(a.name(k)).map_err(|e| e.to_string())?;
            ensure(a.b2()[i][k] == b.b2()[j][l], format!("entry {} {} differs", a.name(i), a.name(k)))?;
        }
    }
    Ok(())
}

fn langlands() -> Outcome {
    let d = datum("g2")?;
    let s = g2_triangle()?;
    let dual = relabel(&s.langlands_dual(&d).map_err(|e| e.to_string())?, &langlands_pairing_triangle);
    let self_dual = cluster_seeds::iso::permutations(3).into_iter().any(|p| {
        [false, true]
            .into_iter()
            .any(|rev| quiver_isomorphic(&dual, &s, &IsoOptions::strict().reversed(rev).with_points(p.clone())).is_some())
    });
    ensure(self_dual, "the triangle seed is not self-dual")?;

    let quad = SequenceBase::Quadrilateral(DynkinKind::G2).seed().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..100 {
        let (base, pairing): (&Seed, fn(&str) -> String) = if trial % 2 == 0 {
            (&s, langlands_pairing_triangle)
        } else {
            (&quad, langlands_pairing_quadrilateral)
        };
        let u = base.unfrozen();
        let len = rng.gen_range(0..=10);
        let names: Vec<String> = (0..len).map(|_| base.name(u[rng.gen_range(0..u.len())]).to_string()).collect();
        let mut mutated = base.clone();
        for n in &names {
            mutated = mutated.mutate_named(n).map_err(|e| e.to_string())?;
        }
        let left = relabel(&mutated.langlands_dual(&d).map_err(|e| e.to_string())?, &pairing);
        let mut right = relabel(&base.langlands_dual(&d).map_err(|e| e.to_string())?, &pairing);
        for n in &names {
            right = right.mutate_named(&pairing(n)).map_err(|e| e.to_string())?;
        }
        same_by_name(&left, &right).map_err(|e| format!("sequence {names:?}: {e}"))?;
    }

    let t13 = builtin_sequence("g2_13").map_err(|e| e.to_string())?;
    let t23 = builtin_sequence("g2_23").map_err(|e| e.to_string())?;
    let r = verify_langlands_pairing(&d, &s, &t13, &t23, &langlands_pairing_triangle);
    ensure(r.passed, r.summary())?;
    let flip = builtin_sequence("g2_flip").map_err(|e| e.to_string())?;
    let r = verify_langlands_pairing(&d, &quad, &flip, &flip.reversed(), &langlands_pairing_quadrilateral);
    ensure(r.passed, r.summary())?;
    Ok("self-dual triangle; duality commutes with 100 random sequences; (13)<->(23) and flip<->reversed flip".into())
}

fn oracle_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    for n in [3, 4] {
        let seed = type_a_triangle_seed(n).map_err(|e| e.to_string())?;
        let r = check_all_exchanges(&format!("SL{n} triangle"), &seed, n, 100, &mut rng);
        ensure(r.passed, r.summary())?;
        notes.push(format!("SL{n} triangle: {}", r.diagnostics.join("")));
        for _ in 0..10 {
            let flags = generic_flags(&[&seed], n, &mut rng).map_err(|e| e.to_string())?;
            let h: Vec<Vec<Exact>> = (0..3).map(|_| random_torus(n, &mut rng)).collect();
            let r = torus_weight_check(&seed, &flags, &h);
            ensure(r.passed, r.summary())?;
        }
    }
    let (_, quad) = quadrilateral_seed(3).map_err(|e| e.to_string())?;
    let r = check_all_exchanges("SL3 quadrilateral", &quad, 3, 100, &mut rng);
    ensure(r.passed, r.summary())?;
    notes.push(format!("SL3 quadrilateral: {}", r.diagnostics.join("")));
    let flags = generic_flags(&[&quad], 3, &mut rng).map_err(|e| e.to_string())?;
    let h: Vec<Vec<Exact>> = (0..4).map(|_| random_torus(3, &mut rng)).collect();
    let r = torus_weight_check(&quad, &flags, &h);
    ensure(r.passed, r.summary())?;

    ensure(s_g_scalar(4) == Some(-Exact::one()), "s_G is not -1 for SL4")?;
    let sl4 = type_a_triangle_seed(4).map_err(|e| e.to_string())?;
    for _ in 0..10 {
        let flags = generic_flags(&[&sl4], 4, &mut rng).map_err(|e| e.to_string())?;
        let r = check_cyclic_symmetry(&sl4, &flags);
        ensure(r.passed, r.summary())?;
    }
    notes.push("torus weights confirmed; SL4 cluster closed under the twisted shift with s_G = -1".into());
    Ok(notes.join("; "))
}

fn shear() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (_, quad) = quadrilateral_seed(3).map_err(|e| e.to_string())?;
    for _ in 0..20 {
        let flags = generic_shear_flags(&quad, 3, &mut rng).map_err(|e| e.to_string())?;
        let h = random_torus(3, &mut rng);
        let r = check_shear_action(&quad, &flags, &h);
        ensure(r.passed, r.summary())?;
        ensure(r.diagnostics.len() == 2, "expected two glued-edge coordinates")?;
    }
    Ok("both glued-edge X-coordinates scale by alpha_j(h) for 20 random h".into())
}

fn check_invariants_after(s: &Seed) -> Result<(), String> {
    s.check_invariants().map_err(|e| e.to_string())?;
    for i in s.unfrozen() {
        for j in 0..s.len() {
            ensure(s.b2()[i][j] % 2 == 0, format!("row of {} is not integral", s.name(i)))?;
        }
        let (plus, minus) = s.exchange_weights(i);
        ensure(plus == minus, format!("exchange at {} is not homogeneous", s.name(i)))?;
        ensure(
            s.weight_balance(i).map_err(|e| e.to_string())?.is_zero(),
            format!("face balance fails at {}", s.name(i)),
        )?;
    }
    Ok(())
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bases = Vec::new();
    for kind in [DynkinKind::A(2), DynkinKind::A(3), DynkinKind::G2, DynkinKind::D4] {
        bases.push(SequenceBase::Triangle(kind).seed().map_err(|e| e.to_string())?);
    }
    for kind in [DynkinKind::A(2), DynkinKind::A(3), DynkinKind::G2] {
        bases.push(SequenceBase::Quadrilateral(kind).seed().map_err(|e| e.to_string())?);
    }
    let mut mutations = 0;
    for base in &bases {
        for _ in 0..20 {
            let mut s = base.clone();
            check_invariants_after(&s)?;
            for _ in 0..rng.gen_range(1..=12) {
                let u = s.unfrozen();
                let k = u[rng.gen_range(0..u.len())];
                let next = s.mutate(k).map_err(|e| e.to_string())?;
                ensure(next.mutate(k).map_err(|e| e.to_string())? == s, "mutation is not an involution")?;
                check_invariants_after(&next)?;
                s = next;
                mutations += 1;
            }
        }
    }
    for seq in builtin_sequences() {
        let base = seq.base.seed().map_err(|e| e.to_string())?;
        let shuffled: Vec<Vec<String>> = seq
            .stages
            .iter()
            .map(|st| {
                let mut st = st.clone();
                let r = rng.gen_range(0..st.len().max(1));
                st.rotate_left(r);
                st
            })
            .collect();
        let (a, _) = apply_stages(&base, &seq.name, &seq.stages).map_err(|e| e.to_string())?;
        let (b, _) = apply_stages(&base, &seq.name, &shuffled).map_err(|e| e.to_string())?;
        ensure(a == b, format!("{}: stage order matters", seq.name))?;
    }
    Ok(format!(
        "{mutations} random mutations keep involution, skew-symmetrizability, homogeneity, integrality, face balance; stages commute"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("word quivers reproduce the drawings", word_quivers),
        ("triangle completion is unique and reproduces the drawings", triangle_completion),
        ("SL4 edge sums", edge_sums),
        ("G2 transposition sequences", g2_transpositions),
        ("G2 flip", g2_flip),
        ("G2 composite transposition relates the two reduced words", g2_composite),
        ("Langlands duality", langlands),
        ("type-A exchange, torus and cyclic-shift identities", oracle_identities),
        ("shear action", shear),
        ("seed invariants under mutation", properties),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {title}: {detail} [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {title}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
