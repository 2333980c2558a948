//! Mutation sequences: transpositions, flips, Langlands duality, D4 symmetry.

use cluster_seeds::builder::{reverse_word_seed, triangle_seed, WeightSource};
use cluster_seeds::sequences::*;
use cluster_seeds::{quiver_isomorphic, DynkinKind, Error, IsoOptions, RootDatum, Weight, WeightTuple};

fn g2() -> RootDatum {
    RootDatum::new(DynkinKind::G2).unwrap()
}

fn g2_triangle() -> cluster_seeds::Seed {
    SequenceBase::Triangle(DynkinKind::G2).seed().unwrap()
}

fn tuple(ws: &[[i64; 2]]) -> WeightTuple {
    WeightTuple(ws.iter().map(|w| Weight::from_ints(w)).collect())
}

#[test]
fn first_mutation_of_the_g2_triangle() {
    let s = g2_triangle().mutate_named("x_a2").unwrap();
    // (omega_b, 2 omega_a, omega_b) at marked points (1, 2, 3), in (a, b)
    // coordinates.  The drawing lists the same triple starting from point 3.
    assert_eq!(s.weights(s.index("x_a2").unwrap()).unwrap(), &tuple(&[[0, 1], [2, 0], [0, 1]]));
}

#[test]
fn exponents_and_balance_of_a_g2_face_vertex() {
    let s = g2_triangle();
    let i = s.index("x_a1").unwrap();
    let row = s.p_exponents(i).unwrap();
    for (name, e) in [("x_a2", 1), ("x_b0", 1), ("x_a", 1), ("x_b1", -1), ("x_a0", -1)] {
        assert_eq!(row[s.index(name).unwrap()], e, "{name}");
    }
    assert_eq!(row.iter().filter(|&&e| e != 0).count(), 5);
    assert!(s.weight_balance(i).unwrap().is_zero());
    for j in s.unfrozen() {
        assert!(s.weight_balance(j).unwrap().is_zero(), "{}", s.name(j));
    }
}

#[test]
fn g2_transpositions_permute_marked_points_and_reverse_arrows() {
    let s = g2_triangle();
    for (name, sigma) in [("g2_13", [2, 1, 0]), ("g2_23", [0, 2, 1]), ("g2_12", [1, 0, 2])] {
        let seq = builtin_sequence(name).unwrap();
        let r = verify_s3(&s, &seq, &sigma, true);
        assert!(r.passed, "{}", r.summary());
        // Arrows are reversed, so the unreversed claim must fail.
        assert!(!verify_s3(&s, &seq, &sigma, false).passed, "{name}");
        // A wrong permutation must fail.
        assert!(!verify_s3(&s, &seq, &[0, 1, 2], true).passed, "{name}");
    }
}

#[test]
fn composite_transposition_relates_the_two_reduced_words() {
    let datum = g2();
    let s = g2_triangle();
    let (after, _) = apply_sequence(&s, &builtin_sequence("g2_12").unwrap()).unwrap();
    let other = reverse_word_seed(&datum, &datum.parse_word("bababa").unwrap()).unwrap();
    assert!(quiver_isomorphic(&after, &other, &IsoOptions::strict()).is_some());
    // The untouched seed is not the other word's seed.
    assert!(quiver_isomorphic(&s, &other, &IsoOptions::strict()).is_none());
    // Applying the composite twice returns to the start.
    let (twice, _) = apply_sequence(&after, &builtin_sequence("g2_12").unwrap()).unwrap();
    assert!(quiver_isomorphic(&twice, &s, &IsoOptions::strict()).is_some());
}

#[test]
fn g2_flip_reaches_the_flipped_triangulation() {
    let datum = g2();
    let q = SequenceBase::Quadrilateral(DynkinKind::G2).seed().unwrap();
    let seq = builtin_sequence("g2_flip").unwrap();
    assert_eq!(seq.len(), 18);
    assert_eq!(seq.stages.len(), 6);
    let r = verify_flip(&datum, &q, &seq);
    assert!(r.passed, "{}", r.summary());
    // Stopping one stage early does not reach it.
    let mut short = seq.clone();
    short.stages.pop();
    assert!(!verify_flip(&datum, &q, &short).passed);
}

#[test]
fn type_a_flips_reach_the_flipped_triangulation() {
    for n in 1..=3 {
        let datum = RootDatum::new(DynkinKind::A(n)).unwrap();
        let seq = builtin_sequence(&format!("sl{}_flip", n + 1)).unwrap();
        let q = seq.base.seed().unwrap();
        let r = verify_flip(&datum, &q, &seq);
        assert!(r.passed, "{}", r.summary());
    }
}

#[test]
fn langlands_duality_pairs_the_g2_sequences() {
    let datum = g2();
    let s = g2_triangle();
    let t13 = builtin_sequence("g2_13").unwrap();
    let t23 = builtin_sequence("g2_23").unwrap();
    let r = verify_langlands_pairing(&datum, &s, &t13, &t23, &langlands_pairing_triangle);
    assert!(r.passed, "{}", r.summary());
    let r = verify_langlands_pairing(&datum, &s, &t23, &t13, &langlands_pairing_triangle);
    assert!(r.passed, "{}", r.summary());
    // (13) is not paired with itself.
    assert!(!verify_langlands_pairing(&datum, &s, &t13, &t13, &langlands_pairing_triangle).passed);

    let q = SequenceBase::Quadrilateral(DynkinKind::G2).seed().unwrap();
    let flip = builtin_sequence("g2_flip").unwrap();
    let r = verify_langlands_pairing(&datum, &q, &flip, &flip.reversed(), &langlands_pairing_quadrilateral);
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn g2_triangle_is_self_dual() {
    let datum = g2();
    let s = g2_triangle();
    let dual = relabel(&s.langlands_dual(&datum).unwrap(), &langlands_pairing_triangle);
    let found = cluster_seeds::iso::permutations(3).into_iter().any(|perm| {
        [false, true].into_iter().any(|rev| {
            quiver_isomorphic(&dual, &s, &IsoOptions::strict().reversed(rev).with_points(perm.clone())).is_some()
        })
    });
    assert!(found);
}

#[test]
fn d4_outer_automorphisms_are_seed_automorphisms() {
    for perm in [[0, 1, 2, 3], [1, 0, 2, 3], [1, 2, 0, 3], [2, 0, 1, 3], [0, 2, 1, 3], [2, 1, 0, 3]] {
        let r = verify_dynkin_automorphism_d4(&perm);
        assert!(r.passed, "{}", r.summary());
    }
    // Moving the central node is not a diagram symmetry.
    assert!(!verify_dynkin_automorphism_d4(&[3, 1, 2, 0]).passed);
}

#[test]
fn d4_triangle_seed_has_the_expected_size() {
    let datum = RootDatum::new(DynkinKind::D4).unwrap();
    let (s, report) = triangle_seed(&datum, &datum.longest_word(), &WeightSource::Auto).unwrap();
    assert_eq!(s.len(), 16 + 4);
    // Completion only succeeds when every linear system has a unique solution.
    assert_eq!(report.phases.len(), 3);
    assert!(report.phases.iter().all(|(_, unknowns, equations)| unknowns > &0 && equations >= unknowns));
}

#[test]
fn non_commuting_stage_is_rejected() {
    let s = g2_triangle();
    // x_a1 and x_a2 are joined by an arrow, so the two orders disagree.
    let err = apply_stages(&s, "bad", &[vec!["x_a1".into(), "x_a2".into()]]).unwrap_err();
    assert!(matches!(err, Error::StageOrder { stage: 1, .. }));
}

#[test]
fn stage_traces_record_weights() {
    let s = g2_triangle();
    let (_, traces) = apply_sequence(&s, &builtin_sequence("g2_13").unwrap()).unwrap();
    assert_eq!(traces.len(), 3);
    assert_eq!(traces[1].mutated, vec!["x_a1".to_string(), "x_b1".to_string()]);
    assert!(traces.iter().all(|t| t.weights.len() == s.len()));
}
