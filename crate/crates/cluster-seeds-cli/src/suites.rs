//! Verification suites run by `clusterseed verify`.
//!
//! Every suite draws its randomness from its own stream of a ChaCha
//! generator keyed by `--rng-seed`, so a suite gives the same result whether
//! it runs alone or as part of `all`.  Under `all` the suites run on separate
//! threads and their output is collected and printed in a fixed order.

use crate::{produce_seed, Suite};
use cluster_seeds::builder::{reverse_word_seed, triangle_seed, WeightSource};
use cluster_seeds::iso::permutations;
use cluster_seeds::oracle::{
    check_all_exchanges, check_cyclic_symmetry, check_shear_action, generic_flags, generic_shear_flags,
    ptolemy_residual, quadrilateral_seed, random_torus, torus_weight_check, type_a_triangle_seed,
    verify_flip_type_a, FlagTuple,
};
use cluster_seeds::reference::{compare, reference, REFERENCES};
use cluster_seeds::sequences::{
    apply_sequence, apply_stages, builtin_sequence, builtin_sequences, langlands_pairing_quadrilateral,
    langlands_pairing_triangle, relabel, verify_dynkin_automorphism_d4, verify_flip, verify_langlands_covariance,
    verify_langlands_pairing, verify_s3, SequenceBase, VerificationReport,
};
use cluster_seeds::{quiver_isomorphic, DynkinKind, IsoOptions, RootDatum, Seed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Outcome of one check.
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

impl Check {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: true,
            details: vec![detail.into()],
        }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: false,
            details: vec![detail.into()],
        }
    }

    fn from_report(r: VerificationReport) -> Check {
        Check {
            name: r.name,
            passed: r.passed,
            details: r.diagnostics,
        }
    }

    /// A check that must fail (negative control).
    fn must_fail(r: VerificationReport) -> Check {
        Check {
            name: format!("rejected: {}", r.name),
            passed: !r.passed,
            details: r.diagnostics,
        }
    }
}

/// One line describing a library verification report.
pub fn describe(r: &VerificationReport) -> String {
    let status = if r.passed { "PASS" } else { "FAIL" };
    if r.diagnostics.is_empty() {
        format!("{status} {}", r.name)
    } else {
        format!("{status} {}: {}", r.name, r.diagnostics.join("; "))
    }
}

pub struct SuiteReport {
    pub rng_seed: u64,
    pub suites: Vec<(Suite, Vec<Check>)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|(_, cs)| cs.iter().all(|c| c.passed))
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (suite, checks) in &self.suites {
            for c in checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let detail = if c.details.is_empty() {
                    String::new()
                } else {
                    format!(": {}", c.details.join("; "))
                };
                out.push(format!("{status} [{}] {}{detail}", suite_name(*suite), c.name));
            }
        }
        let (total, failed) = self
            .suites
            .iter()
            .flat_map(|(_, cs)| cs)
            .fold((0, 0), |(t, f), c| (t + 1, f + usize::from(!c.passed)));
        out.push(format!("{} checks, {failed} failed (rng seed {})", total, self.rng_seed));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rng_seed": self.rng_seed,
            "passed": self.passed(),
            "suites": self.suites.iter().map(|(s, checks)| json!({
                "suite": suite_name(*s),
                "passed": checks.iter().all(|c| c.passed),
                "checks": checks.iter().map(|c| json!({
                    "name": c.name,
                    "passed": c.passed,
                    "details": c.details,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Figures => "figures",
        Suite::G2S3 => "g2-s3",
        Suite::G2Flip => "g2-flip",
        Suite::Langlands => "langlands",
        Suite::D4 => "d4",
        Suite::Oracle => "oracle",
        Suite::Properties => "properties",
    }
}

const ALL: [Suite; 7] = [
    Suite::Figures,
    Suite::G2S3,
    Suite::G2Flip,
    Suite::Langlands,
    Suite::D4,
    Suite::Oracle,
    Suite::Properties,
];

pub fn run_suites(suite: Suite, rng_seed: u64, samples: usize) -> SuiteReport {
    let selected: Vec<Suite> = if suite == Suite::All { ALL.to_vec() } else { vec![suite] };
    let suites = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&s| scope.spawn(move || (s, run_one(s, rng_seed, samples))))
            .collect();
        handles
            .into_iter()
            .zip(&selected)
            .map(|(h, &s)| h.join().unwrap_or_else(|_| (s, vec![Check::fail("suite", "panicked")])))
            .collect()
    });
    SuiteReport { rng_seed, suites }
}

fn run_one(suite: Suite, rng_seed: u64, samples: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(ALL.iter().position(|&s| s == suite).unwrap_or(0) as u64);
    let result = match suite {
        Suite::All => unreachable!("expanded by run_suites"),
        Suite::Figures => figures(),
        Suite::G2S3 => g2_s3(),
        Suite::G2Flip => flips(),
        Suite::Langlands => langlands(&mut rng),
        Suite::D4 => Ok(d4()),
        Suite::Oracle => oracle(&mut rng, samples),
        Suite::Properties => properties(&mut rng),
    };
    result.unwrap_or_else(|e| vec![Check::fail("setup", format!("{e:#}"))])
}

type Checks = anyhow::Result<Vec<Check>>;

/// Regenerates every bundled reference from the command in its header and
/// compares.
fn figures() -> Checks {
    let mut out = Vec::new();
    for (name, _) in REFERENCES {
        let r = reference(name)?;
        let argv: Vec<&str> = r.command.split_whitespace().collect();
        let check = match produce_seed(&argv) {
            Err(e) => Check::fail(*name, format!("`{}`: {e:#}", r.command)),
            Ok(seed) => {
                let c = compare(&seed, &r);
                let mut details = vec![format!("`{}`: {} vertices, {} arrows", r.command, r.vertices.len(), r.arrows.len())];
                details.extend(c.pinned.iter().map(|p| format!("listed discrepancy observed: {p}")));
                details.extend(c.mismatches.iter().cloned());
                Check {
                    name: name.to_string(),
                    passed: c.passed(),
                    details,
                }
            }
        };
        out.push(check);
    }
    Ok(out)
}

fn g2_triangle() -> anyhow::Result<Seed> {
    Ok(SequenceBase::Triangle(DynkinKind::G2).seed()?)
}

fn g2_s3() -> Checks {
    let seed = g2_triangle()?;
    let mut out = Vec::new();
    for (name, sigma) in [("g2_13", [2, 1, 0]), ("g2_23", [0, 2, 1]), ("g2_12", [1, 0, 2])] {
        let seq = builtin_sequence(name)?;
        let mut r = verify_s3(&seed, &seq, &sigma, true);
        r.name.push_str(" with arrows reversed");
        out.push(Check::from_report(r));
    }
    for prefix in ["g2-transposition-13", "g2-transposition-23"] {
        for k in 1..=3 {
            let name = format!("{prefix}-stage{k}");
            let r = reference(&name)?;
            let c = compare(&produce_seed(&r.command.split_whitespace().collect::<Vec<_>>())?, &r);
            let mut details: Vec<String> = c.pinned.iter().map(|p| format!("listed discrepancy observed: {p}")).collect();
            details.extend(c.mismatches.iter().cloned());
            out.push(Check {
                name: format!("stage {k} matches {name}"),
                passed: c.passed(),
                details,
            });
        }
    }
    let datum = RootDatum::new(DynkinKind::G2)?;
    let (after, _) = apply_sequence(&seed, &builtin_sequence("g2_12")?)?;
    let other = reverse_word_seed(&datum, &datum.parse_word("bababa")?)?;
    out.push(if quiver_isomorphic(&after, &other, &IsoOptions::strict()).is_some() {
        Check::pass("g2_12 relates the two reduced words", "result is isomorphic to the seed of ababab")
    } else {
        Check::fail("g2_12 relates the two reduced words", "result is not isomorphic to the seed of ababab")
    });
    Ok(out)
}

fn flips() -> Checks {
    let mut out = Vec::new();
    for (kind, name) in [
        (DynkinKind::G2, "g2_flip"),
        (DynkinKind::A(1), "sl2_flip"),
        (DynkinKind::A(2), "sl3_flip"),
        (DynkinKind::A(3), "sl4_flip"),
    ] {
        let datum = RootDatum::new(kind)?;
        let seq = builtin_sequence(name)?;
        let quad = seq.base.seed()?;
        out.push(Check::from_report(verify_flip(&datum, &quad, &seq)));
    }
    for k in 1..=6 {
        let name = format!("g2-flip-stage{k}");
        let r = reference(&name)?;
        let c = compare(&produce_seed(&r.command.split_whitespace().collect::<Vec<_>>())?, &r);
        out.push(Check {
            name: format!("stage {k} matches {name}"),
            passed: c.passed(),
            details: c.pinned.iter().map(|p| format!("listed discrepancy observed: {p}")).chain(c.mismatches).collect(),
        });
    }
    Ok(out)
}

fn langlands(rng: &mut ChaCha8Rng) -> Checks {
    let datum = RootDatum::new(DynkinKind::G2)?;
    let tri = g2_triangle()?;
    let quad = SequenceBase::Quadrilateral(DynkinKind::G2).seed()?;
    let mut out = Vec::new();

    let dual = relabel(&tri.langlands_dual(&datum)?, &langlands_pairing_triangle);
    let self_dual = permutations(3).into_iter().find_map(|p| {
        [false, true].into_iter().find_map(|rev| {
            quiver_isomorphic(&dual, &tri, &IsoOptions::strict().reversed(rev).with_points(p.clone()))
                .map(|_| format!("marked points {p:?}, arrows reversed: {rev}"))
        })
    });
    out.push(match self_dual {
        Some(d) => Check::pass("the G2 triangle seed is Langlands self-dual", d),
        None => Check::fail("the G2 triangle seed is Langlands self-dual", "no isomorphism"),
    });

    let t13 = builtin_sequence("g2_13")?;
    let t23 = builtin_sequence("g2_23")?;
    let flip = builtin_sequence("g2_flip")?;
    out.push(Check::from_report(verify_langlands_pairing(&datum, &tri, &t13, &t23, &langlands_pairing_triangle)));
    out.push(Check::from_report(verify_langlands_pairing(&datum, &tri, &t23, &t13, &langlands_pairing_triangle)));
    out.push(Check::must_fail(verify_langlands_pairing(&datum, &tri, &t13, &t13, &langlands_pairing_triangle)));
    out.push(Check::from_report(verify_langlands_pairing(
        &datum,
        &quad,
        &flip,
        &flip.reversed(),
        &langlands_pairing_quadrilateral,
    )));

    let trials = 100;
    let mut failures = Vec::new();
    for t in 0..trials {
        let (seed, pairing): (&Seed, fn(&str) -> String) = if t % 2 == 0 {
            (&tri, langlands_pairing_triangle)
        } else {
            (&quad, langlands_pairing_quadrilateral)
        };
        let u = seed.unfrozen();
        let len = rng.gen_range(0..=10);
        let names: Vec<String> = (0..len).map(|_| seed.name(u[rng.gen_range(0..u.len())]).to_string()).collect();
        let r = verify_langlands_covariance(&datum, seed, &names, &pairing);
        if !r.passed {
            failures.push(describe(&r));
        }
    }
    out.push(Check {
        name: format!("duality commutes with {trials} random mutation sequences of length at most 10"),
        passed: failures.is_empty(),
        details: failures,
    });
    Ok(out)
}

fn d4() -> Vec<Check> {
    let mut out: Vec<Check> = [[0, 1, 2, 3], [1, 0, 2, 3], [0, 2, 1, 3], [2, 1, 0, 3], [1, 2, 0, 3], [2, 0, 1, 3]]
        .iter()
        .map(|p| Check::from_report(verify_dynkin_automorphism_d4(p)))
        .collect();
    out.push(Check::must_fail(verify_dynkin_automorphism_d4(&[3, 1, 2, 0])));
    out
}

fn oracle(rng: &mut ChaCha8Rng, samples: usize) -> Checks {
    let mut out = Vec::new();
    let sl3 = type_a_triangle_seed(3)?;
    let sl4 = type_a_triangle_seed(4)?;
    let (_, quad) = quadrilateral_seed(3)?;
    for (name, seed, n) in [("SL3 triangle", &sl3, 3), ("SL4 triangle", &sl4, 4), ("SL3 quadrilateral", &quad, 3)] {
        out.push(Check::from_report(check_all_exchanges(name, seed, n, samples, rng)));
        let flags = generic_flags(&[seed], n, rng)?;
        let points = seed.points().unwrap_or(0);
        let h: Vec<_> = (0..points).map(|_| random_torus(n, rng)).collect();
        let mut r = torus_weight_check(seed, &flags, &h);
        r.name = format!("{name}: {}", r.name);
        out.push(Check::from_report(r));
    }
    for (seed, n) in [(&sl3, 3), (&sl4, 4)] {
        let flags = generic_flags(&[seed], n, rng)?;
        let mut r = check_cyclic_symmetry(seed, &flags);
        r.name = format!("SL{n} triangle: {}", r.name);
        out.push(Check::from_report(r));
    }
    let mut shear_failures = Vec::new();
    for _ in 0..20 {
        let flags = generic_shear_flags(&quad, 3, rng)?;
        let r = check_shear_action(&quad, &flags, &random_torus(3, rng));
        if !r.passed {
            shear_failures.push(describe(&r));
        }
    }
    out.push(Check {
        name: "SL3 quadrilateral: glued-edge X-coordinates scale by a simple root under 20 random h".into(),
        passed: shear_failures.is_empty(),
        details: shear_failures,
    });
    for n in 2..=4 {
        out.push(Check::from_report(verify_flip_type_a(n, samples.min(25), rng)));
    }
    let nonzero = (0..samples)
        .map(|_| ptolemy_residual(&FlagTuple::random(2, 4, rng)))
        .filter(|r| !matches!(r, Ok(x) if *x == Default::default()))
        .count();
    out.push(if nonzero == 0 {
        Check::pass("Ptolemy relation for SL2", format!("residual 0 on {samples} flag quadruples"))
    } else {
        Check::fail("Ptolemy relation for SL2", format!("{nonzero} nonzero residuals"))
    });
    Ok(out)
}

fn properties(rng: &mut ChaCha8Rng) -> Checks {
    let mut bases = Vec::new();
    for kind in [DynkinKind::A(2), DynkinKind::A(3), DynkinKind::G2, DynkinKind::D4] {
        let datum = RootDatum::new(kind)?;
        bases.push(triangle_seed(&datum, &datum.longest_word(), &WeightSource::Auto)?.0);
    }
    for kind in [DynkinKind::A(2), DynkinKind::A(3), DynkinKind::G2] {
        bases.push(SequenceBase::Quadrilateral(kind).seed()?);
    }
    let mut violations = Vec::new();
    let mut mutations = 0;
    let invariants = |s: &Seed, violations: &mut Vec<String>| {
        if let Err(e) = s.check_invariants() {
            violations.push(e.to_string());
        }
        for i in s.unfrozen() {
            if (0..s.len()).any(|j| s.b2()[i][j] % 2 != 0) {
                violations.push(format!("row of {} is not integral", s.name(i)));
            }
            let (plus, minus) = s.exchange_weights(i);
            if plus != minus {
                violations.push(format!("exchange at {} is not homogeneous", s.name(i)));
            }
            if !s.weight_balance(i).map(|b| b.is_zero()).unwrap_or(false) {
                violations.push(format!("face balance fails at {}", s.name(i)));
            }
        }
    };
    for base in &bases {
        for _ in 0..20 {
            let mut s = base.clone();
            for _ in 0..rng.gen_range(1..=12) {
                let u = s.unfrozen();
                let k = u[rng.gen_range(0..u.len())];
                let next = s.mutate(k)?;
                if next.mutate(k)? != s {
                    violations.push(format!("mutation at {} is not an involution", s.name(k)));
                }
                invariants(&next, &mut violations);
                for i in 0..s.len() {
                    if s.is_frozen(i) && next.weights(i) != base.weights(i) {
                        violations.push(format!("frozen {} changed weight", s.name(i)));
                    }
                }
                s = next;
                mutations += 1;
            }
        }
    }
    let mut out = vec![Check {
        name: format!("{mutations} random mutations preserve involution, skew-symmetrizability, integrality, homogeneity and face balance"),
        passed: violations.is_empty(),
        details: violations.into_iter().take(10).collect(),
    }];
    let mut order_failures = Vec::new();
    for seq in builtin_sequences() {
        let base = seq.base.seed()?;
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
        let (a, _) = apply_stages(&base, &seq.name, &seq.stages)?;
        let (b, _) = apply_stages(&base, &seq.name, &shuffled)?;
        if a != b {
            order_failures.push(seq.name.clone());
        }
    }
    out.push(Check {
        name: "mutations within a stage commute for every built-in sequence".into(),
        passed: order_failures.is_empty(),
        details: order_failures,
    });
    Ok(out)
}
