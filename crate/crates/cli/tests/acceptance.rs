//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Every expectation is exact; timing bounds are asserted.

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use rinf_core::certificate::{certify_rinf, replay, CertificateDocument, CertifyOptions};
use rinf_core::clifford::{commutant_dimension, decompose_restriction};
use rinf_core::group::DEFAULT_SCAN_CAP;
use rinf_core::normalizer::{compute_normalizer, verify_corollary_subgroup, CorollaryVerdict};
use rinf_core::perm::{check_odd_degree_lemma, transitive_subgroups, LemmaVerdict};
use rinf_core::reidemeister::{
    reidemeister_finite, reidemeister_torus, FiniteGroupTable, TorusCount,
};
use rinf_core::witness::{brute_force_table, constructive_table, verify_entry, BruteForceOutcome};
use rinf_core::{fixtures, IntMatrix, Integer};

fn finish(criterion: usize, start: Instant, budget: Duration, summary: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("criterion {criterion} PASS ({elapsed:?}): {summary}");
}

#[test]
fn criterion_1_tetrahedral_structure() {
    let start = Instant::now();
    let g = fixtures::tetrahedral();
    assert_eq!(g.order(), 12);

    let a = g
        .maximal_normal_elementary_abelian_two(DEFAULT_SCAN_CAP)
        .unwrap()
        .expect("the Klein subgroup exists");
    assert_eq!(a.order(), 4);

    let bd = decompose_restriction(&g, &a).unwrap();
    assert_eq!(bd.block_count(), 3);
    assert_eq!(bd.multiplicity(), 1);
    let distinct: BTreeSet<&Vec<i8>> = bd.characters().iter().collect();
    assert_eq!(distinct.len(), 3);
    for character in bd.characters() {
        assert!(character.contains(&-1), "characters must be surjective");
    }

    assert_eq!(commutant_dimension(&g), 1);
    assert!(bd.image().is_transitive());
    assert_eq!(bd.image().order(), 3);

    finish(
        1,
        start,
        Duration::from_secs(1),
        "order 12, Klein subgroup of order 4, k=3 e=1, commutant 1, transitive image of order 3",
    );
}

#[test]
fn criterion_2_tetrahedral_normalizer_is_signed_permutations() {
    let start = Instant::now();
    let g = fixtures::tetrahedral();
    let a = g
        .maximal_normal_elementary_abelian_two(DEFAULT_SCAN_CAP)
        .unwrap()
        .unwrap();
    let bd = decompose_restriction(&g, &a).unwrap();
    let n = compute_normalizer(&g, &bd, DEFAULT_SCAN_CAP).unwrap();
    assert_eq!(n.order(), 48);

    // Independent oracle: enumerate all 48 signed permutation matrices and
    // keep those whose conjugation maps the group onto itself. A signed
    // permutation is orthogonal, so its inverse is its transpose.
    let mut oracle: BTreeSet<IntMatrix> = BTreeSet::new();
    let perms = [
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in perms {
        for signs in 0..8u8 {
            let d = IntMatrix::from_fn(3, 3, |i, j| {
                if perm[j] == i {
                    let s: i64 = if signs & (1 << j) != 0 { -1 } else { 1 };
                    Integer::from(s)
                } else {
                    Integer::from(0)
                }
            });
            let dt = d.transpose();
            let normalizes = g.elements().iter().all(|m| g.contains(&(&(&d * m) * &dt)));
            if normalizes {
                oracle.insert(d);
            }
        }
    }
    assert_eq!(oracle.len(), 48, "all 48 signed permutations normalize");
    let computed: BTreeSet<IntMatrix> = n.matrices().into_iter().collect();
    assert_eq!(computed, oracle);

    // Every element factors as a block permutation times a sign diagonal.
    for elem in n.elements() {
        assert_eq!(elem.blocks.len(), 3);
        for block in &elem.blocks {
            assert_eq!(block.rows(), 1);
            let entry = block[(0, 0)].clone().abs();
            assert_eq!(entry, num_rational::BigRational::from_integer(1.into()));
        }
    }

    // Every element normalizes the subgroup image.
    assert_eq!(verify_corollary_subgroup(&a, &n), CorollaryVerdict::Holds);

    finish(
        2,
        start,
        Duration::from_secs(5),
        "normalizer equals the 48 signed permutation matrices, factored and subgroup-normalizing",
    );
}

#[test]
fn criterion_3_witnesses_for_all_48() {
    let start = Instant::now();
    let g = fixtures::tetrahedral();
    let a = g
        .maximal_normal_elementary_abelian_two(DEFAULT_SCAN_CAP)
        .unwrap()
        .unwrap();
    let bd = decompose_restriction(&g, &a).unwrap();
    let n = compute_normalizer(&g, &bd, DEFAULT_SCAN_CAP).unwrap();

    let brute = match brute_force_table(&g, &n.matrices()) {
        BruteForceOutcome::Complete(table) => table,
        BruteForceOutcome::Counterexample(d) => panic!("unexpected counterexample {d:?}"),
    };
    assert_eq!(brute.entries.len(), 48);

    let constructive = constructive_table(&g, &bd, &n).unwrap();
    assert_eq!(constructive.entries.len(), 48);
    for entry in brute.entries.iter().chain(&constructive.entries) {
        verify_entry(&g, entry).unwrap();
    }

    finish(
        3,
        start,
        Duration::from_secs(5),
        "brute force and the constructive procedure each witness all 48 normalizer elements",
    );
}

#[test]
fn criterion_4_even_degree_negative_control() {
    let start = Instant::now();
    let g = fixtures::z3_gl2();
    let id = IntMatrix::identity(2);
    let minus_id = IntMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]);
    match brute_force_table(&g, &[id, minus_id.clone()]) {
        BruteForceOutcome::Counterexample(d) => assert_eq!(d, minus_id),
        BruteForceOutcome::Complete(_) => panic!("the even-degree control must fail"),
    }
    finish(
        4,
        start,
        Duration::from_secs(1),
        "brute force returns the counterexample D = -I for Z3 in GL(2,Z)",
    );
}

#[test]
fn criterion_5_odd_degree_lemma_exhaustive() {
    let start = Instant::now();

    for degree in [3usize, 5] {
        let groups = transitive_subgroups(degree).unwrap();
        for q in &groups {
            assert_eq!(
                check_odd_degree_lemma(q).unwrap(),
                LemmaVerdict::Holds,
                "odd degree {degree} admits no nontrivial normal elementary abelian 2-subgroup"
            );
        }
        if degree == 5 {
            // Cross-check of the enumeration: degree 5 has exactly the five
            // known transitive groups, with these counts as element sets.
            let mut by_order: BTreeMap<usize, usize> = BTreeMap::new();
            for q in &groups {
                *by_order.entry(q.order()).or_insert(0) += 1;
            }
            let expected: BTreeMap<usize, usize> =
                [(5, 6), (10, 6), (20, 6), (60, 1), (120, 1)].into();
            assert_eq!(by_order, expected);
        }
    }

    let groups4 = transitive_subgroups(4).unwrap();
    let regular_klein_found = groups4.iter().any(|q| {
        q.order() == 4
            && matches!(
                check_odd_degree_lemma(q),
                Ok(LemmaVerdict::Counterexample(h)) if h.order() == 4
            )
    });
    assert!(
        regular_klein_found,
        "the regular Klein group is its own counterexample"
    );

    finish(
        5,
        start,
        Duration::from_secs(60),
        "all transitive groups of degrees 3 and 5 pass; degree 4 yields the regular Klein counterexample",
    );
}

#[test]
fn criterion_6_reidemeister_oracles() {
    let start = Instant::now();

    // Orbit enumeration against an inline Burnside oracle, for every
    // automorphism of every fixture group of order at most 24.
    let mut automorphism_count = 0;
    for fixture in fixtures::all() {
        let g = &fixture.group;
        if g.order() > 24 {
            continue;
        }
        let table = FiniteGroupTable::from_matrix_group(g);
        for phi in g.automorphisms(DEFAULT_SCAN_CAP).unwrap() {
            let images = phi.images();
            let orbit_count = reidemeister_finite(&table, images).unwrap();
            let n = table.order();
            let fixed: usize = (0..n)
                .map(|gamma| {
                    (0..n)
                        .filter(|&alpha| {
                            table.mul(table.mul(gamma, alpha), table.inverse(images[gamma]))
                                == alpha
                        })
                        .count()
                })
                .sum();
            assert_eq!(
                orbit_count,
                fixed / n,
                "Burnside disagreement on {}",
                fixture.name
            );
            automorphism_count += 1;
        }
    }
    assert!(
        automorphism_count >= 60,
        "fixture set exercises many automorphisms"
    );

    // Torus counts against the Smith invariant factor product, over every
    // 2x2 integer matrix with entries in -2..=2.
    let mut finite_cases = 0;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                for d in -2i64..=2 {
                    let f = IntMatrix::from_i64_rows(&[&[a, b], &[c, d]]);
                    let shifted = &f - &IntMatrix::identity(2);
                    let det = shifted.det_bareiss().unwrap();
                    let snf_product = shifted
                        .smith_normal_form()
                        .factors
                        .iter()
                        .fold(Integer::from(1), |acc, v| acc * v.clone());
                    match reidemeister_torus(&f).unwrap() {
                        TorusCount::Infinite => assert!(det.is_zero()),
                        TorusCount::Finite(count) => {
                            assert_eq!(count, det.abs());
                            assert_eq!(count, snf_product);
                            finite_cases += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(finite_cases > 500);

    finish(
        6,
        start,
        Duration::from_secs(60),
        "orbit counts match Burnside on every fixture automorphism; torus counts match the Smith factor product",
    );
}

#[test]
fn criterion_7_certificate_round_trip() {
    let start = Instant::now();
    let input = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/tetrahedral.json"
    );
    let run = |out: &str| {
        let output = Command::new(env!("CARGO_BIN_EXE_rinf"))
            .args(["certify", "--input", input, "--output", out])
            .output()
            .expect("the certify command runs");
        assert_eq!(output.status.code(), Some(0), "certify must exit 0");
    };
    let out_a = std::env::temp_dir().join("rinf_acceptance_cert_a.json");
    let out_b = std::env::temp_dir().join("rinf_acceptance_cert_b.json");
    run(out_a.to_str().unwrap());
    run(out_b.to_str().unwrap());

    let bytes_a = std::fs::read(&out_a).unwrap();
    let bytes_b = std::fs::read(&out_b).unwrap();
    assert_eq!(
        bytes_a, bytes_b,
        "output must be byte-identical across runs"
    );

    let doc = CertificateDocument::from_json_str(std::str::from_utf8(&bytes_a).unwrap()).unwrap();
    assert!(doc.is_certified());
    let report = replay(&doc).unwrap();
    assert!(report.ok(), "replay failures: {:?}", report.failures);

    // The in-process route produces the same document.
    let g = fixtures::tetrahedral();
    let mut assumptions = BTreeMap::new();
    assumptions.insert(
        "note".to_string(),
        "rotation group of the tetrahedron".to_string(),
    );
    assumptions.insert("r_irreducible".to_string(), "true".to_string());
    let direct = certify_rinf(&g, &assumptions, CertifyOptions::default()).unwrap();
    assert_eq!(direct.to_json_string().unwrap().into_bytes(), bytes_a);

    finish(
        7,
        start,
        Duration::from_secs(60),
        "certify emits a byte-stable certificate that replays from the document alone",
    );
}

#[test]
fn criterion_8_commutant_property_suite() {
    let start = Instant::now();
    for fixture in fixtures::all() {
        let g = &fixture.group;
        if fixture.declared_r_irreducible && g.degree() % 2 == 1 {
            assert_eq!(
                commutant_dimension(g),
                1,
                "odd-degree R-irreducible fixture {} must be absolutely irreducible",
                fixture.name
            );
        }
    }
    for g in [fixtures::z3_gl2(), fixtures::z4_gl2()] {
        assert_eq!(
            commutant_dimension(&g),
            2,
            "complex-character rotation fixtures have a quadratic commutant"
        );
    }
    finish(
        8,
        start,
        Duration::from_secs(1),
        "odd R-irreducible fixtures have commutant 1; rotation fixtures have commutant 2",
    );
}
