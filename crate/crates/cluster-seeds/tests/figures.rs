//! Computed seeds against the bundled reference drawings.

use cluster_seeds::builder::{assign_weights, build_bruhat_seed, triangle_seed, WeightSource};
use cluster_seeds::glue::{build_conf_m_seed, Dressing, TriangulatedPolygon};
use cluster_seeds::reference::{compare, reference, Comparison};
use cluster_seeds::sequences::{builtin_sequence, SequenceBase};
use cluster_seeds::{RootDatum, Seed};

fn assert_matches(seed: &Seed, name: &str) -> Comparison {
    let r = reference(name).unwrap();
    let c = compare(seed, &r);
    assert!(c.passed(), "{name}: {:#?}", c.mismatches);
    c
}

fn bruhat(kind: &str, word: &str) -> Seed {
    let datum = RootDatum::parse(kind).unwrap();
    build_bruhat_seed(&datum, &datum.parse_word(word).unwrap()).unwrap()
}

fn triangle(kind: &str, word: &str) -> Seed {
    let datum = RootDatum::parse(kind).unwrap();
    triangle_seed(&datum, &datum.parse_word(word).unwrap(), &WeightSource::Auto)
        .unwrap()
        .0
}

#[test]
fn word_quivers_match_drawings() {
    let sl4 = bruhat("a3", "121321");
    assert_eq!(sl4.len(), 9);
    assert_eq!(sl4.unfrozen().len(), 3);
    // The SL4 drawing names its vertices by their weights, so compare with weights attached.
    let datum = RootDatum::parse("a3").unwrap();
    let word = datum.parse_word("121321").unwrap();
    let weighted = assign_weights(&sl4, &datum, &word, &WeightSource::Auto).unwrap();
    assert_matches(&weighted, "sl4-bruhat");
    let g2 = bruhat("g2", "bababa");
    assert_eq!(g2.len(), 8);
    assert_matches(&g2, "g2-bruhat");
    let d4 = bruhat("d4", "b123b123b123");
    assert_eq!(d4.len(), 16);
    assert_matches(&d4, "d4-bruhat");
}

#[test]
fn g2_long_short_arrows_have_strength_three() {
    let g2 = bruhat("g2", "bababa");
    let (b1, a1) = (g2.index("x_b1").unwrap(), g2.index("x_a1").unwrap());
    let mut long_short: Vec<i64> = Vec::new();
    for i in 0..g2.len() {
        for j in 0..g2.len() {
            if g2.vertex(i).d == 3 && g2.vertex(j).d == 1 && g2.b2()[i][j] % 2 == 0 && g2.b2()[i][j] != 0 {
                long_short.push(g2.b2()[i][j].abs() / 2);
            }
        }
    }
    assert!(long_short.iter().all(|&x| x == 3), "{long_short:?}");
    assert_eq!(g2.b2()[b1][a1].abs() % 3, 0);
}

#[test]
fn triangle_seeds_match_drawings() {
    let sl4 = triangle("a3", "121321");
    assert_eq!(sl4.len(), 12);
    assert_matches(&sl4, "sl4-triangle");
    let g2 = triangle("g2", "bababa");
    assert_eq!(g2.len(), 10);
    assert_matches(&g2, "g2-triangle-quiver");
    assert_matches(&g2, "g2-triangle");
}

#[test]
fn transposition_stages_match_drawings() {
    for (seq, prefix, pinned) in [("g2_13", "g2-transposition-13", 0), ("g2_23", "g2-transposition-23", 1)] {
        let seq = builtin_sequence(seq).unwrap();
        let mut cur = SequenceBase::Triangle(cluster_seeds::DynkinKind::G2).seed().unwrap();
        let mut seen = 0;
        for (k, stage) in seq.stages.iter().enumerate() {
            for v in stage {
                cur = cur.mutate_named(v).unwrap();
            }
            seen += assert_matches(&cur, &format!("{prefix}-stage{}", k + 1)).pinned.len();
        }
        assert_eq!(seen, pinned, "{prefix}");
    }
}

#[test]
fn quadrilateral_and_flip_stages_match_drawings() {
    let datum = RootDatum::parse("g2").unwrap();
    let tri = TriangulatedPolygon::fan(4).unwrap();
    let seed = build_conf_m_seed(&datum, &tri, &Dressing::default_for(&datum, &tri)).unwrap();
    assert_eq!(seed.len(), 18);
    assert_eq!(seed.unfrozen().len(), 10);
    assert_matches(&seed, "g2-conf4-quiver");
    assert_matches(&seed, "g2-conf4");
    let seq = builtin_sequence("g2_flip").unwrap();
    let mut cur = seed;
    for (k, stage) in seq.stages.iter().enumerate() {
        for v in stage {
            cur = cur.mutate_named(v).unwrap();
        }
        assert_matches(&cur, &format!("g2-flip-stage{}", k + 1));
    }
}

#[test]
fn a_wrong_seed_is_reported() {
    let g2 = triangle("g2", "bababa");
    let once = g2.mutate_named("x_a1").unwrap();
    let c = compare(&once, &reference("g2-triangle").unwrap());
    assert!(!c.passed());
}
