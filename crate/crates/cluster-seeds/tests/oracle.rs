//! Exact evaluation checks on random decorated flags.

use cluster_seeds::oracle::*;
use cluster_seeds::sequences::{builtin_sequence, flipped_targets, search_flip};
use cluster_seeds::Seed;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn exchange_residuals_vanish_on_triangle_seeds() {
    for n in [3, 4] {
        let seed = type_a_triangle_seed(n).unwrap();
        let r = check_all_exchanges(&format!("SL{n} triangle"), &seed, n, 100, &mut rng(n as u64));
        assert!(r.passed, "{}", r.summary());
    }
}

#[test]
fn exchange_residuals_vanish_on_the_quadrilateral_seed() {
    let (_, seed) = quadrilateral_seed(3).unwrap();
    assert_eq!(seed.unfrozen().len(), 4);
    let r = check_all_exchanges("SL3 quadrilateral", &seed, 3, 100, &mut rng(11));
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn exchange_residuals_vanish_along_the_flip_sequences() {
    for (n, samples) in [(3, 30), (4, 5)] {
        let (_, mut seed) = quadrilateral_seed(n).unwrap();
        let mut rng = rng(20 + n as u64);
        for stage in &builtin_sequence(&format!("sl{n}_flip")).unwrap().stages {
            for v in stage {
                seed = seed.mutate_named(v).unwrap();
            }
            let r = check_all_exchanges(&format!("SL{n} after {stage:?}"), &seed, n, samples, &mut rng);
            assert!(r.passed, "{}", r.summary());
        }
    }
}

fn corrupted(seed: &Seed, k: usize) -> Seed {
    let mut b2: Vec<Vec<i64>> = seed.b2().to_vec();
    let j = (0..seed.len()).find(|&j| b2[k][j] != 0).unwrap();
    b2[k][j] = -b2[k][j];
    b2[j][k] = -b2[j][k];
    Seed::new(seed.vertices().to_vec(), b2, seed.node_names().to_vec()).unwrap()
}

#[test]
fn a_flipped_arrow_gives_a_nonzero_residual() {
    let mut rng = rng(3);
    for n in [3, 4] {
        let seed = type_a_triangle_seed(n).unwrap();
        for k in seed.unfrozen() {
            let bad = corrupted(&seed, k);
            let flags = generic_flags(&[&seed], n, &mut rng).unwrap();
            // The corrupted exchange is no longer weight-homogeneous or no longer
            // divisible; either way it must not pass.
            match check_exchange(&bad, k, &flags, &mut rng) {
                Ok(r) => assert!(!r.is_zero(), "{} in SL{n}", seed.name(k)),
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn stored_weights_match_the_torus_action() {
    let mut rng = rng(5);
    for n in [3, 4] {
        let seed = type_a_triangle_seed(n).unwrap();
        for _ in 0..10 {
            let flags = generic_flags(&[&seed], n, &mut rng).unwrap();
            let h: Vec<_> = (0..3).map(|_| random_torus(n, &mut rng)).collect();
            let r = torus_weight_check(&seed, &flags, &h);
            assert!(r.passed, "{}", r.summary());
        }
    }
    let (_, quad) = quadrilateral_seed(3).unwrap();
    let flags = generic_flags(&[&quad], 3, &mut rng).unwrap();
    let h: Vec<_> = (0..4).map(|_| random_torus(3, &mut rng)).collect();
    assert!(torus_weight_check(&quad, &flags, &h).passed);
}

#[test]
fn a_wrong_stored_weight_is_pinpointed() {
    let mut rng = rng(6);
    let seed = type_a_triangle_seed(4).unwrap();
    // Swap the weights of two vertices (keeping the labels): the check must
    // name exactly those two vertices.
    let mut vs = seed.vertices().to_vec();
    let (a, b) = (seed.index("x_11").unwrap(), seed.index("x_21").unwrap());
    let wa = vs[a].weights.clone();
    vs[a].weights = vs[b].weights.clone();
    vs[b].weights = wa;
    let bad = Seed::new(vs, seed.b2().to_vec(), seed.node_names().to_vec()).unwrap();
    let flags = generic_flags(&[&seed], 4, &mut rng).unwrap();
    let h: Vec<_> = (0..3).map(|_| random_torus(4, &mut rng)).collect();
    let r = torus_weight_check(&bad, &flags, &h);
    assert!(!r.passed);
    assert!(r.diagnostics[0].contains("x_11") && r.diagnostics[0].contains("x_21"), "{:?}", r.diagnostics);
}

#[test]
fn diagonal_scaling_of_a_single_variable() {
    // h_1 = diag(t, 1, 1, 1/t) at the first point scales a variable with
    // weight omega_2 there by omega_2(h_1) = t.
    let seed = type_a_triangle_seed(4).unwrap();
    let i = (0..seed.len())
        .find(|&i| degrees_of(seed.weights(i).unwrap()).unwrap() == [2, 1, 1])
        .unwrap();
    let mut rng = rng(7);
    let flags = generic_flags(&[&seed], 4, &mut rng).unwrap();
    let t = Exact::from_integer(5.into());
    let one = Exact::one();
    let h = vec![
        vec![t.clone(), one.clone(), one.clone(), t.recip()],
        vec![one.clone(); 4],
        vec![one.clone(); 4],
    ];
    let before = evaluate_seed(&seed, &flags).unwrap();
    let after = evaluate_seed(&seed, &flags.torus_scaled(&h)).unwrap();
    assert_eq!(after[i], &before[i] * &t);
    assert_eq!(before[i], wedge_invariant(&[2, 1, 1], &flags).unwrap());
}

#[test]
fn twisted_cyclic_shift_preserves_the_cluster() {
    assert_eq!(s_g_scalar(4), Some(-Exact::one()));
    assert_eq!(s_g_scalar(3), Some(Exact::one()));
    let mut rng = rng(8);
    for n in [3, 4] {
        let seed = type_a_triangle_seed(n).unwrap();
        for _ in 0..5 {
            let flags = generic_flags(&[&seed], n, &mut rng).unwrap();
            let r = check_cyclic_symmetry(&seed, &flags);
            assert!(r.passed, "{}", r.summary());
        }
    }
}

#[test]
fn twisted_shift_negates_the_wrapped_flag_for_sl4() {
    let flags = FlagTuple::random(4, 3, &mut rng(9));
    let shifted = twisted_cyclic_shift(&flags);
    assert_eq!(shifted.flags[0], flags.flags[1]);
    assert_eq!(shifted.flags[1], flags.flags[2]);
    let negated: Matrix = flags.flags[0].iter().map(|v| v.iter().map(|x| -x).collect()).collect();
    assert_eq!(shifted.flags[2], negated);
    // Three shifts act by the scalar s_G on every flag.
    let thrice = twisted_cyclic_shift(&twisted_cyclic_shift(&shifted));
    for (a, b) in thrice.flags.iter().zip(&flags.flags) {
        let neg: Matrix = b.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        assert_eq!(*a, neg);
    }
}

#[test]
fn shear_scales_glued_edge_coordinates_by_simple_roots() {
    let mut rng = rng(10);
    for n in [3, 4] {
        let (_, seed) = quadrilateral_seed(n).unwrap();
        for _ in 0..20 {
            let flags = generic_shear_flags(&seed, n, &mut rng).unwrap();
            let h = random_torus(n, &mut rng);
            let r = check_shear_action(&seed, &flags, &h);
            assert!(r.passed, "{}", r.summary());
            assert_eq!(r.diagnostics.len(), n - 1);
        }
        let flags = generic_shear_flags(&seed, n, &mut rng).unwrap();
        let identity = vec![Exact::one(); n];
        assert!(check_shear_action(&seed, &flags, &identity).passed);
    }
}

#[test]
fn flip_sequences_agree_as_functions() {
    let mut rng = rng(12);
    for n in [2, 3, 4] {
        let r = verify_flip_type_a(n, 25, &mut rng);
        assert!(r.passed, "{} {:?}", r.summary(), r.diagnostics);
    }
}

#[test]
fn sl2_flip_is_the_ptolemy_relation() {
    let mut rng = rng(13);
    for _ in 0..25 {
        let flags = FlagTuple::random(2, 4, &mut rng);
        assert!(ptolemy_residual(&flags).unwrap().is_zero());
    }
    assert_eq!(builtin_sequence("sl2_flip").unwrap().len(), 1);
}

#[test]
fn flip_search_finds_the_stored_sequences_and_rejects_wrong_targets() {
    for (n, half) in [(2usize, 2usize), (3, 3)] {
        let (datum, start) = quadrilateral_seed(n).unwrap();
        let targets = flipped_targets(&datum).unwrap();
        let found = search_flip(&start, &targets, half).unwrap();
        let stored: Vec<String> = builtin_sequence(&format!("sl{n}_flip")).unwrap().stages.concat();
        assert_eq!(found, stored);
        // Arrow-reversed targets share every frozen weight but are not reachable.
        let wrong: Vec<Seed> = targets.iter().map(Seed::reversed).collect();
        assert_eq!(search_flip(&start, &wrong, half), None);
    }
    assert_eq!(builtin_sequence("sl3_flip").unwrap().len(), 4);
    assert_eq!(builtin_sequence("sl4_flip").unwrap().len(), 10);
}

/// `check_p_map` on fresh generic flags, resampling when an intermediate
/// value happens to vanish (e.g. some `1 + X_k = 0`).
fn p_map_holds(seed: &Seed, seq: &[usize], n: usize, rng: &mut ChaCha8Rng) -> bool {
    for _ in 0..20 {
        let flags = generic_flags(&[seed], n, rng).unwrap();
        match check_p_map(seed, seq, &flags) {
            Ok(ok) => return ok,
            Err(cluster_seeds::Error::Degenerate) => continue,
            Err(e) => panic!("{e}"),
        }
    }
    panic!("no generic flags found");
}

#[test]
fn x_mutation_matches_a_mutation_through_the_p_map() {
    let mut rng = rng(14);
    let (_, seed) = quadrilateral_seed(3).unwrap();
    let seq: Vec<usize> = builtin_sequence("sl3_flip")
        .unwrap()
        .stages
        .concat()
        .iter()
        .map(|v| seed.index(v).unwrap())
        .collect();
    for _ in 0..10 {
        assert!(p_map_holds(&seed, &seq, 3, &mut rng));
    }
    let tri = type_a_triangle_seed(4).unwrap();
    let u = tri.unfrozen();
    assert!(p_map_holds(&tri, &[u[0], u[1], u[2], u[0]], 4, &mut rng));
}

#[test]
fn wedge_is_multilinear_and_alternating() {
    let mut rng = rng(15);
    for _ in 0..10 {
        let flags = FlagTuple::random(3, 3, &mut rng);
        let other = FlagTuple::random(3, 3, &mut rng);
        let c = Exact::new(3.into(), 7.into());
        // Replace the first vector of flag 0 by v + c w.
        let mut mixed = flags.clone();
        let mut with_w = flags.clone();
        for i in 0..3 {
            mixed.flags[0][0][i] = &flags.flags[0][0][i] + &c * &other.flags[0][0][i];
            with_w.flags[0][0][i] = other.flags[0][0][i].clone();
        }
        let deg = [1, 1, 1];
        assert_eq!(
            wedge_invariant(&deg, &mixed).unwrap(),
            wedge_invariant(&deg, &flags).unwrap() + &c * wedge_invariant(&deg, &with_w).unwrap()
        );
        // Exchanging the first two vectors of flag 0 negates a degree-2 wedge.
        let mut swapped = flags.clone();
        swapped.flags[0].swap(0, 1);
        assert_eq!(
            wedge_invariant(&[2, 1, 0], &swapped).unwrap(),
            -wedge_invariant(&[2, 1, 0], &flags).unwrap()
        );
    }
}

#[test]
fn edge_variables_are_units_on_standard_flags() {
    // Flags U^- and w0 U^- at points 1 and 2: every edge invariant between
    // them is a signed unit minor of the lifted longest element.
    for n in [2, 3, 4] {
        let w0 = lift_w0(n);
        let flags = FlagTuple::new(n, vec![identity(n), transpose(&w0), identity(n)]).unwrap();
        for k in 1..n {
            let v = wedge_invariant(&[k, n - k, 0], &flags).unwrap();
            assert!(v.is_one() || (-v).is_one());
        }
    }
}
