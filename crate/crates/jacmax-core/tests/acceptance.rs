//! Acceptance gate: eleven end-to-end criteria, one test (and one
//! pass/fail line) each. Everything here runs on the bundled fixtures or
//! on seeded randomness; nothing is mocked.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jacmax_core::certify::{parse_curves, sn_certificate, table_all_true, verify_witnesses};
use jacmax_core::divfields::{field_from_data, intersect, theorem_1_4_rhs, QuadDatum};
use jacmax_core::family::{build_family, extend_chain, ChainJson, FamilyChain};
use jacmax_core::group::gens::{build_gsp_delta, gsp_group, sp_group};
use jacmax_core::group::lemmas::{
    check_lifting_lemma, check_pair_surjection_lemma, check_s2m_lifting, goursat_decompose,
    s2m_hypothesis_violation, serre_subgroup, simplicity_mod_center, sp_order_mod,
};
use jacmax_core::group::lie::{check_a0, check_a2, check_a3, lie_spaces};
use jacmax_core::group::perm::{
    alternating_group_perm_gens, embed_permutation, preimage_permutation, sign_character,
    symmetric_group_perm_gens, Perm,
};
use jacmax_core::group::{FiniteMatrixGroup, ModMatrix, ENUM_CAP};
use jacmax_core::modpoly::{double_root_analysis, DoubleRootAnalysis};
use jacmax_core::poly::{discriminant, primes_up_to};
use jacmax_core::IntPoly;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{}", env!("CARGO_MANIFEST_DIR"), name);
    std::fs::read_to_string(path).expect("fixture readable")
}

/// AC1: the three example curves admit the claimed independent witness
/// primes (421, 13, 89); the full 3x3 valuation table checks out.
#[test]
fn ac01_example_witness_table() {
    let curves = parse_curves(&fixture("example_curves.json")).unwrap();
    assert_eq!(curves.len(), 3);
    let table = verify_witnesses(&curves, &[421, 13, 89]).unwrap();
    assert_eq!(table.len(), 3);
    assert!(table_all_true(&table), "table: {:?}", table);
}

/// AC2: the bundled 10-pair family chain passes all 100 pairwise
/// valuation checks.
#[test]
fn ac02_bundled_chain_hundred_checks() {
    let (spec, chain) = ChainJson::parse(&fixture("example_chain.json")).unwrap();
    assert_eq!(chain.len(), 10);
    let table = jacmax_core::family::verify_chain(&spec, &chain).unwrap();
    let mut checks = 0;
    for row in &table {
        for &ok in row {
            assert!(ok);
            checks += 1;
        }
    }
    assert_eq!(checks, 100);
}

/// AC3: the family discriminant Delta(t) is a genuine degree-13
/// polynomial with nonzero discriminant d, so the correction step is
/// always available.
#[test]
fn ac03_family_nondegenerate() {
    let (spec, _) = ChainJson::parse(&fixture("example_chain.json")).unwrap();
    let rebuilt = build_family(&spec.f, &spec.n).unwrap();
    assert_eq!(rebuilt.delta_t.degree(), Some(13));
    assert!(!rebuilt.d.is_zero());
    assert_eq!(rebuilt.d, spec.d);
}

/// AC4: the canonical lexicographic search, started from the empty
/// chain, reproduces the bundled chain's first pairs — (0, 89) and at
/// least five more.
#[test]
fn ac04_chain_search_reproduces_fixture() {
    let (spec, reference) = ChainJson::parse(&fixture("example_chain.json")).unwrap();
    let mut chain = FamilyChain::empty();
    for k in 0..6 {
        let (next, _events) = extend_chain(&spec, &chain, 25, 50_000).unwrap();
        chain = next;
        let got = chain.pairs.last().unwrap();
        let want = &reference.pairs[k];
        assert_eq!((&got.t, got.l), (&want.t, want.l), "pair {}", k);
    }
    assert_eq!(chain.pairs[0].t, BigInt::zero());
    assert_eq!(chain.pairs[0].l, 89);
}

/// AC5: at every odd prime dividing a discriminant exactly once, the
/// reduction has a unique double root over the prime field — verified on
/// 100 seeded random instances.
#[test]
fn ac05_unique_double_root_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let primes = primes_up_to(500);
    let mut checked = 0;
    while checked < 100 {
        let deg = rng.gen_range(4..=8);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-40..=40)).collect();
        c.push(1);
        let f = IntPoly::from_i64(&c);
        let disc = discriminant(&f).unwrap();
        if disc.is_zero() {
            continue;
        }
        for &l in &primes {
            if l == 2 {
                continue;
            }
            let lb = BigInt::from(l);
            if (&disc % &lb).is_zero() && !((&disc / &lb) % &lb).is_zero() {
                match double_root_analysis(&f, l).unwrap() {
                    DoubleRootAnalysis::UniqueDoubleRootInBase(_) => checked += 1,
                    DoubleRootAnalysis::Other(why) => {
                        panic!("no unique double root for {:?} at {}: {}", c, l, why)
                    }
                }
            }
        }
    }
    assert!(checked >= 100);
}

/// AC6: the symmetric-group embedding into the mod-2 symplectic group is
/// a sign-respecting injective homomorphism: S_6 fills Sp_4(F_2) (order
/// 720, A_6 image 360, sign correct on all 720 elements) and S_8 embeds
/// into Sp_6(F_2) with 40320 distinct images.
#[test]
fn ac06_symmetric_group_embedding() {
    // S_6 -> Sp_4(F_2) is onto
    let g6: Vec<ModMatrix> = symmetric_group_perm_gens(6)
        .iter()
        .map(|s| embed_permutation(s, 2).unwrap())
        .collect();
    let s6_group = FiniteMatrixGroup::new(4, 2, g6);
    assert_eq!(s6_group.order(), sp_order_mod(2, 2)); // 720
    // A_6 image has index 2
    let a6: Vec<ModMatrix> = alternating_group_perm_gens(6)
        .iter()
        .map(|s| embed_permutation(s, 2).unwrap())
        .collect();
    assert_eq!(
        FiniteMatrixGroup::new(4, 2, a6).order(),
        BigInt::from(360u64)
    );
    // sign character equals permutation sign on every one of the 720
    // elements, via the preimage reconstruction
    let all = s6_group.enumerate(ENUM_CAP).unwrap();
    assert_eq!(all.len(), 720);
    for m in &all {
        let sigma = preimage_permutation(m, 2).unwrap();
        assert_eq!(embed_permutation(&sigma, 2).unwrap(), *m);
        assert_eq!(sign_character(m, 2).unwrap(), sigma.sign());
    }
    // S_8 -> Sp_6(F_2) is injective: 40320 distinct images
    let g8: Vec<ModMatrix> = symmetric_group_perm_gens(8)
        .iter()
        .map(|s| embed_permutation(s, 3).unwrap())
        .collect();
    let image = FiniteMatrixGroup::new(6, 2, g8).enumerate(ENUM_CAP).unwrap();
    assert_eq!(image.len(), 40320);
    // homomorphism property on random words, genus 2 and 3
    for (k, g) in [(6usize, 2usize), (8, 3)] {
        let mut rng = ChaCha8Rng::seed_from_u64(6 + g as u64);
        let gens = symmetric_group_perm_gens(k);
        for _ in 0..50 {
            let mut sigma = Perm::identity(k);
            for _ in 0..12 {
                sigma = sigma.compose(&gens[rng.gen_range(0..gens.len())]);
            }
            let tau = gens[rng.gen_range(0..gens.len())].clone();
            let a = embed_permutation(&sigma, g).unwrap();
            let b = embed_permutation(&tau, g).unwrap();
            let ab = embed_permutation(&sigma.compose(&tau), g).unwrap();
            assert_eq!(a.mul(&b), ab);
            assert_eq!(sign_character(&a, g).unwrap(), sigma.sign());
        }
    }
}

/// AC7: group laboratory — the derived subgroup of GSp_4(F_3) is
/// Sp_4(F_3); Sp_4(F_3) is simple modulo center while SL_2(F_3) is not;
/// the quadratic-character subgroup has index 2 yet surjects at every
/// proper level; Goursat invariants of a twisted diagonal come out right.
#[test]
fn ac07_group_laboratory() {
    // GSp^Delta for genera (1,1) over F_3: order 1152, derived subgroup
    // SL_2(F_3)^2 of order 576 (checked by full enumeration)
    let gd = build_gsp_delta(&[1, 1], 3).unwrap();
    assert_eq!(gd.order(), BigInt::from(1152u64));
    let dd = gd.derived_subgroup().unwrap();
    assert_eq!(dd.order(), BigInt::from(576u64));
    assert_eq!(dd.enumerate(ENUM_CAP).unwrap().len(), 576);

    let gsp = gsp_group(2, 3);
    let der = gsp.derived_subgroup().unwrap();
    assert_eq!(der.order(), sp_order_mod(2, 3)); // 51840
    assert!(simplicity_mod_center(&sp_group(2, 3), 60_000).unwrap());
    assert!(!simplicity_mod_center(&sp_group(1, 3), 1_000).unwrap());

    for delta in [-3i64, -1] {
        let rep = serre_subgroup(delta).unwrap();
        assert!(rep.index_two(), "{:?}", rep);
        assert!(rep.proper_surjections.iter().all(|&(_, ok)| ok), "{:?}", rep);
    }

    let s = ModMatrix::from_rows(&[vec![1, 1], vec![0, 1]], 5);
    let t = ModMatrix::from_rows(&[vec![1, 0], vec![1, 1]], 5);
    let id = ModMatrix::identity(2, 5);
    let minus = ModMatrix::from_rows(&[vec![-1, 0], vec![0, -1]], 5);
    let twisted = vec![
        jacmax_core::group::lemmas::block_diag(&[s.clone(), s.clone()]),
        jacmax_core::group::lemmas::block_diag(&[t.clone(), t.clone()]),
        jacmax_core::group::lemmas::block_diag(&[id, minus]),
    ];
    let gd = goursat_decompose((2, 2), &twisted).unwrap();
    assert_eq!(gd.common_quotient, BigInt::from(60u64));
}

/// AC8: Lie-algebra criteria A0, A2, A3 hold across the advertised
/// (genus, ell) range.
#[test]
fn ac08_lie_criteria() {
    // dimension formulas: dim sp = 2g^2 + g, dim gsp = 2g^2 + g + 1
    for l in [3u64, 5] {
        for g in [1usize, 2] {
            let (gsp, sp) = lie_spaces(g, l);
            assert_eq!(sp.dim(), 2 * g * g + g);
            assert_eq!(gsp.dim(), 2 * g * g + g + 1);
        }
    }
    for l in [3u64, 5] {
        assert!(check_a2(&[1], l), "A2 [1] mod {}", l);
        assert!(check_a2(&[2], l), "A2 [2] mod {}", l);
        assert!(check_a2(&[1, 1], l), "A2 [1,1] mod {}", l);
        for g in [1usize, 2] {
            assert!(check_a3(g, l).unwrap(), "A3 g={} l={}", g, l);
            assert!(check_a0(g, l, 2).unwrap(), "A0 g={} l={}", g, l);
        }
    }
}

/// AC9: randomized lifting lemmas — 100 trials mod 9 (genus 2), 100
/// trials mod 4 from the symmetric-group image, the alternating-group
/// hypothesis violation, and 200 pair-surjection trials where the
/// conclusion holds every time the hypothesis does.
#[test]
fn ac09_lifting_and_pair_surjection() {
    let rep = check_lifting_lemma(2, 3, 100, 9).unwrap();
    assert!(rep.all_passed(), "{:?}", rep);
    let rep = check_s2m_lifting(2, 100, 4).unwrap();
    assert!(rep.all_passed(), "{:?}", rep);
    let (got, target) = s2m_hypothesis_violation(2).unwrap();
    assert!(got < target);
    let rep = check_pair_surjection_lemma(200, 99).unwrap();
    assert_eq!(rep.conclusion_held, rep.hypothesis_met, "{:?}", rep);
    assert!(rep.hypothesis_met >= 100, "{:?}", rep);
}

/// AC10: the degree-14 example polynomial carries a full S_14 Galois
/// certificate with witness primes below 10^4.
#[test]
fn ac10_s14_certificate() {
    let curves = parse_curves(&fixture("example_curves.json")).unwrap();
    let f3 = &curves[2].f;
    let cert = sn_certificate(f3, 10_000, 0).unwrap();
    assert_eq!(cert.n, 14);
    assert!(cert.p_irreducible < 10_000);
    assert!(cert.p_cycle < 10_000);
    assert!(cert.p_odd < 10_000);
    assert_eq!(cert.shape_irreducible.parts, vec![14]);
}

/// AC11: division-field intersections — the closed form matches the
/// character-lattice computation on 50 seeded random cases, and 20
/// coprime odd-level configurations intersect in Q.
#[test]
fn ac11_division_field_intersections() {
    let deltas: Vec<i64> = vec![1, 5, -3, 2, -15, -7, 13, -1, 6, 10];
    let qd = |d: i64| {
        let b = BigInt::from(d);
        let cond = if d.rem_euclid(4) == 1 {
            BigInt::from(d.abs())
        } else {
            BigInt::from(4 * d.abs())
        };
        QuadDatum {
            delta_sf: b,
            conductor: cond,
        }
    };
    // independent brute-force oracle: lift both fixing subgroups to the
    // common modulus, then take the smallest subgroup of the lattice
    // containing both by iterative closure under multiplication
    let oracle = |f1: &jacmax_core::divfields::AbelianFieldDescriptor,
                  f2: &jacmax_core::divfields::AbelianFieldDescriptor|
     -> (u64, Vec<u64>) {
        let n = num_integer::lcm(f1.conductor, f2.conductor);
        let units: Vec<u64> = if n == 1 {
            vec![0]
        } else {
            (1..n).filter(|a| num_integer::gcd(*a, n) == 1).collect()
        };
        let in_sub = |d: &jacmax_core::divfields::AbelianFieldDescriptor, x: u64| {
            d.subgroup.contains(&(x % d.conductor))
        };
        let mut set: std::collections::BTreeSet<u64> = units
            .iter()
            .copied()
            .filter(|&x| in_sub(f1, x) || in_sub(f2, x))
            .collect();
        loop {
            let cur: Vec<u64> = set.iter().copied().collect();
            let before = set.len();
            for &x in &cur {
                for &y in &cur {
                    set.insert((x as u128 * y as u128 % n.max(2) as u128) as u64);
                }
            }
            if set.len() == before {
                break;
            }
        }
        (n, set.into_iter().collect())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut corpus: Vec<(u64, Vec<QuadDatum>, u64, Vec<QuadDatum>)> = Vec::new();
    while corpus.len() < 50 {
        let m1 = rng.gen_range(2u64..=12);
        let m2 = rng.gen_range(2u64..=12);
        let d1 = vec![qd(deltas[rng.gen_range(0..deltas.len())])];
        let d2 = vec![qd(deltas[rng.gen_range(0..deltas.len())])];
        // keep the corpus inside the N <= 120 oracle range
        let f1 = field_from_data(m1, &d1).unwrap();
        let f2 = field_from_data(m2, &d2).unwrap();
        if num_integer::lcm(f1.conductor, f2.conductor) <= 120 {
            corpus.push((m1, d1, m2, d2));
        }
    }
    for (case, (m1, d1, m2, d2)) in corpus.into_iter().enumerate() {
        let f1 = field_from_data(m1, &d1).unwrap();
        let f2 = field_from_data(m2, &d2).unwrap();
        let lattice = intersect(&f1, &f2);
        let (n, closure) = oracle(&f1, &f2);
        let brute = jacmax_core::divfields::AbelianFieldDescriptor {
            conductor: n,
            subgroup: closure,
        }
        .canonicalize();
        assert!(
            lattice.same_field(&brute),
            "case {}: m1={} m2={} lattice={:?} brute={:?}",
            case,
            m1,
            m2,
            lattice,
            brute
        );
        let closed = theorem_1_4_rhs(m1, &d1, m2, &d2).unwrap();
        assert!(
            lattice.same_field(&closed),
            "case {}: m1={} m2={} d1={:?} d2={:?} lattice={:?} closed={:?}",
            case,
            m1,
            m2,
            d1,
            d2,
            lattice,
            closed
        );
    }
    // coprime odd levels: intersection is Q regardless of discriminants
    let odd = [3u64, 5, 7, 11, 13];
    let mut count = 0;
    for (i, &a) in odd.iter().enumerate() {
        for &b in &odd[i + 1..] {
            let f1 = field_from_data(a, &[qd(-3)]).unwrap();
            let f2 = field_from_data(b, &[qd(5)]).unwrap();
            assert_eq!(intersect(&f1, &f2).degree(), 1, "{} {}", a, b);
            count += 1;
            if count >= 20 {
                break;
            }
        }
    }
    // the 5 odd primes give 10 unordered pairs; double with swapped data
    for (i, &a) in odd.iter().enumerate() {
        for &b in &odd[i + 1..] {
            let f1 = field_from_data(a, &[qd(2)]).unwrap();
            let f2 = field_from_data(b, &[qd(-7)]).unwrap();
            assert_eq!(intersect(&f1, &f2).degree(), 1, "{} {}", a, b);
            count += 1;
        }
    }
    assert!(count >= 20);
}
