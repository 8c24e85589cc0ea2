//! Property-based invariants for the exact-arithmetic kernels.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use jacmax_core::modpoly::{
    double_root_analysis, factor, reduce_mod, squarefree_decomposition, DoubleRootAnalysis,
};
use jacmax_core::poly::{
    discriminant, discriminant_with, interpolate_family_discriminant, kronecker_symbol,
    primes_up_to, resultant, resultant_with, valuation, ResultantAlgorithm,
};
use jacmax_core::IntPoly;

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 2..=(max_deg + 1))
        .prop_map(|mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            IntPoly::from_i64(&c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Subresultant PRS and fraction-free Sylvester expansion agree.
    #[test]
    fn resultant_algorithms_agree(f in poly_strategy(8), g in poly_strategy(8)) {
        let a = resultant_with(&f, &g, ResultantAlgorithm::SubresultantPrs).unwrap();
        let b = resultant_with(&f, &g, ResultantAlgorithm::SylvesterBareiss).unwrap();
        prop_assert_eq!(a, b);
    }

    /// disc(fg) = disc(f) disc(g) Res(f, g)^2.
    #[test]
    fn discriminant_multiplicative(f in poly_strategy(6), g in poly_strategy(6)) {
        let lhs = discriminant(&f.mul(&g)).unwrap();
        let rhs = discriminant(&f).unwrap() * discriminant(&g).unwrap()
            * resultant(&f, &g).unwrap().pow(2);
        prop_assert_eq!(lhs, rhs);
    }

    /// The two discriminant backends agree.
    #[test]
    fn discriminant_backends_agree(f in poly_strategy(8)) {
        let a = discriminant_with(&f, ResultantAlgorithm::SubresultantPrs).unwrap();
        let b = discriminant_with(&f, ResultantAlgorithm::SylvesterBareiss).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Kronecker symbol is completely multiplicative in the top argument.
    #[test]
    fn kronecker_multiplicative_top(a in -200i64..=200, b in -200i64..=200, n in 1i64..=200) {
        let n = BigInt::from(n);
        let lhs = kronecker_symbol(&BigInt::from(a * b), &n);
        let rhs = kronecker_symbol(&BigInt::from(a), &n) * kronecker_symbol(&BigInt::from(b), &n);
        prop_assert_eq!(lhs, rhs);
    }

    /// ...and in the bottom argument.
    #[test]
    fn kronecker_multiplicative_bottom(a in -200i64..=200, m in 1i64..=100, n in 1i64..=100) {
        let a = BigInt::from(a);
        let lhs = kronecker_symbol(&a, &BigInt::from(m * n));
        let rhs = kronecker_symbol(&a, &BigInt::from(m)) * kronecker_symbol(&a, &BigInt::from(n));
        prop_assert_eq!(lhs, rhs);
    }

    /// Euler's criterion: (a/p) = a^((p-1)/2) mod p for odd primes p.
    #[test]
    fn kronecker_euler_criterion(a in 1i64..=1000, pi in 0usize..=20) {
        let primes = primes_up_to(100);
        let p = primes[pi % primes.len()];
        prop_assume!(p > 2);
        let pb = BigInt::from(p);
        let euler = BigInt::from(a).modpow(&BigInt::from((p - 1) / 2), &pb);
        let sym = kronecker_symbol(&BigInt::from(a), &pb);
        let expect = if euler.is_one() {
            1
        } else if euler == &pb - BigInt::one() {
            -1
        } else {
            0
        };
        prop_assert_eq!(sym, expect);
    }

    /// valuation(p^k * u, p) = k whenever p does not divide u.
    #[test]
    fn valuation_of_prefactored(k in 0u32..=12, u in 1i64..=10_000, pi in 0usize..=10) {
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
        let p = BigInt::from(primes[pi]);
        let ub = BigInt::from(u);
        prop_assume!(!(&ub % &p).is_zero());
        let n = ub * p.pow(k);
        prop_assert_eq!(valuation(&n, &p).unwrap(), k);
    }

    /// The interpolated family discriminant evaluates to the direct
    /// discriminant of the shifted polynomial at fresh points.
    #[test]
    fn family_discriminant_interpolation(f in poly_strategy(6), nstep in 1i64..=50) {
        prop_assume!(f.degree().unwrap_or(0) >= 2);
        let n = BigInt::from(nstep);
        if let Ok(delta_t) = interpolate_family_discriminant(&f, &n) {
            // nodes used are small around zero; probe 10 fresh points
            for t in 20i64..30 {
                let tb = BigInt::from(t);
                let direct = discriminant(&f.add_constant(&(&n * &tb))).unwrap();
                prop_assert_eq!(delta_t.eval(&tb), direct);
            }
        }
    }

    /// Mod-p factorization multiplies back to the (monic rescale of the)
    /// input, with multiplicities.
    #[test]
    fn modp_factorization_recomposes(c in prop::collection::vec(0u64..=50, 3..=9), pi in 0usize..=5, seed in 0u64..=1000) {
        let primes = [2u64, 3, 5, 7, 11, 13];
        let p = primes[pi];
        let f = jacmax_core::ModPoly::new(p, c);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let facs = factor(&f, seed);
        let mut prod = jacmax_core::ModPoly::one(p).scale(f.lc());
        for (q, e) in &facs {
            prop_assert!(q.lc() == 1);
            for _ in 0..*e {
                prod = prod.mul(q);
            }
        }
        prop_assert_eq!(prod, f);
    }

    /// Squarefree decomposition recomposes and its parts are pairwise
    /// coprime.
    #[test]
    fn squarefree_decomposition_recomposes(c in prop::collection::vec(0u64..=50, 3..=9), pi in 0usize..=3) {
        let primes = [2u64, 3, 5, 7];
        let p = primes[pi];
        let f = jacmax_core::ModPoly::new(p, c);
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let parts = squarefree_decomposition(&f.monic());
        let mut prod = jacmax_core::ModPoly::one(p);
        for (q, e) in &parts {
            for _ in 0..*e {
                prod = prod.mul(q);
            }
        }
        prop_assert_eq!(prod, f.monic());
        for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                prop_assert!(parts[i].0.gcd(&parts[j].0).is_one());
            }
        }
    }
}

/// Double-root structure at valuation-one primes: whenever an odd prime
/// divides the discriminant exactly once (and not the leading
/// coefficient), the reduction has a unique double root defined over the
/// base field. Deterministic scan over seeded random polynomials so the
/// instance count is guaranteed.
#[test]
fn unique_double_root_at_valuation_one_primes() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260823);
    let mut checked = 0u32;
    let primes = primes_up_to(500);
    while checked < 100 {
        let deg = rng.gen_range(4..=8);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-40..=40)).collect();
        c.push(1); // monic
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
                    DoubleRootAnalysis::UniqueDoubleRootInBase(r) => {
                        // the root really is a double root mod l
                        let fr = reduce_mod(&f, l);
                        assert_eq!(fr.eval(r), 0);
                        assert_eq!(fr.derivative().eval(r), 0);
                    }
                    DoubleRootAnalysis::Other(why) => {
                        panic!("expected unique double root for {:?} at {}: {}", c, l, why)
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked >= 100);
}
