//! Inductive construction of an infinite family F_t = f + N·t of
//! hyperelliptic models whose discriminants admit pairwise-independent
//! valuation-one witness primes.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{
    discriminant, interpolate_family_discriminant, primes_up_to, valuation, IntPoly, PolyJson,
};

/// A parametric family F_t = f + N·t with its interpolated discriminant
/// polynomial Δ(t) and the discriminant d of Δ(t) itself. d ≠ 0 is what
/// makes the correction step of the chain search work.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub f: IntPoly,
    pub n: BigInt,
    pub delta_t: IntPoly,
    pub d: BigInt,
}

impl FamilySpec {
    /// Δ(t₀) by direct discriminant of F_{t₀} (cheaper than evaluating the
    /// interpolated form, whose coefficients are enormous).
    pub fn delta_at(&self, t: &BigInt) -> Result<BigInt> {
        let ft = self.f.add_constant(&(&self.n * t));
        discriminant(&ft)
    }
}

/// Builds the family: Δ(t) by exact interpolation, d = disc(Δ(t)),
/// rejecting d = 0 (repeated root of Δ(t)).
pub fn build_family(f: &IntPoly, n: &BigInt) -> Result<FamilySpec> {
    let disc_f = discriminant(f)?;
    if disc_f.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let delta_t = interpolate_family_discriminant(f, n)?;
    let d = discriminant(&delta_t)?;
    if d.is_zero() {
        return Err(Error::DegenerateFamily);
    }
    Ok(FamilySpec {
        f: f.clone(),
        n: n.clone(),
        delta_t,
        d,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainPair {
    #[serde(with = "crate::bigjson")]
    pub t: BigInt,
    pub l: u64,
    /// Δ(t), cached so cross-valuation checks don't recompute discriminants
    #[serde(skip)]
    pub delta: BigInt,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FamilyChain {
    pub pairs: Vec<ChainPair>,
}

impl FamilyChain {
    pub fn empty() -> Self {
        FamilyChain { pairs: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// A place where the scan hit ord_ℓ(Δ(t)) ≥ 2 for an ℓ ∤ d: by the
/// double-root argument the shifted parameter t + ℓ must drop back to
/// valuation ≤ 1. Recorded (and re-verified in tests) every time it fires.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrectionEvent {
    #[serde(with = "crate::bigjson")]
    pub t: BigInt,
    pub l: u64,
    pub ord_at_t: u32,
    pub ord_at_t_plus_l: u32,
}

/// Appends one pair to the chain: the lexicographically smallest (t, ℓ)
/// with t above the current chain, ℓ odd, ℓ ∤ d, ℓ fresh,
/// ord_ℓ(Δ(t)) = 1, ord_ℓ(Δ(t_i)) = 0 and ord_{ℓ_i}(Δ(t)) = 0 for all
/// existing pairs. Scan bounds exhausted → Inconclusive, never failure.
pub fn extend_chain(
    spec: &FamilySpec,
    chain: &FamilyChain,
    t_scan_bound: i64,
    prime_bound: u64,
) -> Result<(FamilyChain, Vec<CorrectionEvent>)> {
    let primes = primes_up_to(prime_bound);
    let mut events = Vec::new();
    let t_start: BigInt = match chain.pairs.last() {
        Some(p) => &p.t + 1,
        None => BigInt::zero(),
    };
    let mut t = t_start;
    while t <= BigInt::from(t_scan_bound) {
        let delta = spec.delta_at(&t)?;
        if delta.is_zero() {
            t += 1;
            continue;
        }
        // earlier witnesses must not divide the new discriminant
        if chain.pairs.iter().any(|p| {
            (&delta % BigInt::from(p.l)).is_zero()
        }) {
            t += 1;
            continue;
        }
        for &l in &primes {
            if l == 2 || chain.pairs.iter().any(|p| p.l == l) {
                continue;
            }
            let lb = BigInt::from(l);
            if (&spec.d % &lb).is_zero() {
                continue;
            }
            if !(&delta % &lb).is_zero() {
                continue;
            }
            let ord = valuation(&delta, &lb)?;
            if ord >= 2 {
                // the correction step: probe t + ℓ and log the event
                let shifted = spec.delta_at(&(&t + &lb))?;
                let ord_shifted = if shifted.is_zero() {
                    u32::MAX
                } else {
                    valuation(&shifted, &lb)?
                };
                events.push(CorrectionEvent {
                    t: t.clone(),
                    l,
                    ord_at_t: ord,
                    ord_at_t_plus_l: ord_shifted,
                });
                continue;
            }
            // ord = 1; new prime must avoid all earlier Δ(t_i)
            if chain
                .pairs
                .iter()
                .any(|p| (&p.delta % &lb).is_zero())
            {
                continue;
            }
            let mut pairs = chain.pairs.clone();
            pairs.push(ChainPair { t, l, delta });
            return Ok((FamilyChain { pairs }, events));
        }
        t += 1;
    }
    Err(Error::Inconclusive(format!(
        "no qualifying (t, prime) with t <= {t_scan_bound}, prime <= {prime_bound}"
    )))
}

/// The n×n valuation table: entry (i, j) is true iff ord_{ℓ_j}(Δ(t_i))
/// equals 1 on the diagonal and 0 off it. Empty chain → empty table.
pub fn verify_chain(spec: &FamilySpec, chain: &FamilyChain) -> Result<Vec<Vec<bool>>> {
    let mut table = Vec::new();
    for (i, pi) in chain.pairs.iter().enumerate() {
        let delta = spec.delta_at(&pi.t)?;
        if delta.is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        let mut row = Vec::new();
        for (j, pj) in chain.pairs.iter().enumerate() {
            let v = valuation(&delta, &BigInt::from(pj.l))?;
            row.push(if i == j { v == 1 } else { v == 0 });
        }
        table.push(row);
    }
    Ok(table)
}

/// JSON schema for an externally supplied chain.
#[derive(Debug, Serialize, Deserialize)]
pub struct ChainJson {
    pub base: PolyJson,
    pub n: String,
    pub pairs: Vec<ChainPairJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChainPairJson {
    pub t: String,
    pub l: String,
}

impl ChainJson {
    pub fn parse(json: &str) -> Result<(FamilySpec, FamilyChain)> {
        let raw: ChainJson =
            serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let f = raw.base.to_poly()?;
        let n: BigInt = raw
            .n
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad integer: {}", raw.n)))?;
        let spec = build_family(&f, &n)?;
        let mut pairs = Vec::new();
        for p in raw.pairs {
            let t: BigInt = p
                .t
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer: {}", p.t)))?;
            let l: u64 = p
                .l
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad prime: {}", p.l)))?;
            let delta = spec.delta_at(&t)?;
            pairs.push(ChainPair { t, l, delta });
        }
        Ok((spec, FamilyChain { pairs }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn fixture_chain() -> (FamilySpec, FamilyChain) {
        let path = concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/example_chain.json"
        );
        ChainJson::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_family_accepted() {
        // f = x^2 + x, N = 1: Δ(t) = 1 - 4t, degree 1, d = 1 by convention
        let f = IntPoly::from_i64(&[0, 1, 1]);
        let spec = build_family(&f, &BigInt::one()).unwrap();
        assert_eq!(spec.delta_t, IntPoly::from_i64(&[1, -4]));
        assert_eq!(spec.d, BigInt::one());
    }

    #[test]
    fn degenerate_family_rejected() {
        // f = x^2 + x + 1, N = 0: Δ(t) constant -3, disc of a degree-0 poly
        // is a domain error upstream; use a family with repeated Δ root:
        // f = x^2, disc f = 0 → rejected at separability
        let f = IntPoly::from_i64(&[0, 0, 1]);
        assert!(matches!(
            build_family(&f, &BigInt::one()),
            Err(Error::ZeroDiscriminant)
        ));
    }

    #[test]
    fn quadratic_chain_extends() {
        let f = IntPoly::from_i64(&[0, 1, 1]);
        let spec = build_family(&f, &BigInt::one()).unwrap();
        // Δ(t) = 1 - 4t, d = 1, so no prime divides d
        let (chain, _) = extend_chain(&spec, &FamilyChain::empty(), 50, 1000).unwrap();
        assert_eq!(chain.len(), 1);
        let (chain, _) = extend_chain(&spec, &chain, 50, 1000).unwrap();
        let (chain, _) = extend_chain(&spec, &chain, 50, 1000).unwrap();
        assert_eq!(chain.len(), 3);
        let table = verify_chain(&spec, &chain).unwrap();
        assert!(table.iter().all(|r| r.iter().all(|&b| b)));
        // first pair: Δ(1) = -3, ord_3 = 1 → (1, 3); t=0 gives Δ=1, unit
        assert_eq!(chain.pairs[0].t, BigInt::one());
        assert_eq!(chain.pairs[0].l, 3);
    }

    #[test]
    fn bundled_chain_verifies_100_checks() {
        let (spec, chain) = fixture_chain();
        assert!(!spec.d.is_zero());
        let table = verify_chain(&spec, &chain).unwrap();
        assert_eq!(table.len(), 10);
        assert!(table.iter().all(|r| r.len() == 10 && r.iter().all(|&b| b)));
    }

    #[test]
    fn perturbed_chain_fails() {
        let (spec, mut chain) = fixture_chain();
        chain.pairs[3].l = 97;
        let table = verify_chain(&spec, &chain).unwrap();
        assert!(!table.iter().all(|r| r.iter().all(|&b| b)));
    }

    #[test]
    fn empty_chain_vacuously_true() {
        let f = IntPoly::from_i64(&[0, 1, 1]);
        let spec = build_family(&f, &BigInt::one()).unwrap();
        let table = verify_chain(&spec, &FamilyChain::empty()).unwrap();
        assert!(table.is_empty());
    }

    #[test]
    fn canonical_search_starts_at_first_bundled_pair() {
        let (spec, _) = fixture_chain();
        let (chain, events) = extend_chain(&spec, &FamilyChain::empty(), 3, 1000).unwrap();
        assert_eq!(chain.pairs[0].t, BigInt::zero());
        assert_eq!(chain.pairs[0].l, 89);
        // every correction event (if any) obeys the double-root argument
        for e in &events {
            assert!(e.ord_at_t >= 2);
            assert!(e.ord_at_t_plus_l <= 1);
        }
    }

    #[test]
    fn correction_property_synthetic() {
        // engineered valuation-2 hits: Δ(t) = 1 - 4t; choose primes l ∤ d=1
        // and scan t where ord_l(1-4t) >= 2, then check the shift drops it.
        let f = IntPoly::from_i64(&[0, 1, 1]);
        let spec = build_family(&f, &BigInt::one()).unwrap();
        let mut checked = 0;
        for l in [3u64, 5, 7, 11, 13] {
            let lb = BigInt::from(l);
            for t in 0..400i64 {
                let t = BigInt::from(t);
                let delta = spec.delta_at(&t).unwrap();
                if delta.is_zero() {
                    continue;
                }
                if valuation(&delta, &lb).unwrap() >= 2 {
                    let shifted = spec.delta_at(&(&t + &lb)).unwrap();
                    assert!(valuation(&shifted, &lb).unwrap() <= 1);
                    checked += 1;
                }
            }
        }
        assert!(checked >= 50, "only {checked} synthetic correction cases");
    }
}
