//! Witness-prime certification for products of hyperelliptic Jacobians:
//! per-curve primes of discriminant valuation one, the cross-valuation
//! table, and the mod-p symmetric-group certificate.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modpoly::{factor_shape, FactorShape};
use crate::poly::{discriminant, primes_up_to, valuation, IntPoly, PolyJson};

/// An even-degree hyperelliptic model `y^2 = f(x)` with cached discriminant.
#[derive(Debug, Clone)]
pub struct CurveInput {
    pub label: String,
    pub f: IntPoly,
    pub genus: usize,
    pub disc: BigInt,
}

impl CurveInput {
    /// Requires deg f even and >= 6 (genus >= 2) and f separable.
    pub fn new(label: impl Into<String>, f: IntPoly) -> Result<Self> {
        let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
        if deg < 6 || deg % 2 != 0 {
            return Err(Error::BadCurveDegree(deg));
        }
        let disc = discriminant(&f)?;
        if disc.is_zero() {
            return Err(Error::ZeroDiscriminant);
        }
        Ok(CurveInput {
            label: label.into(),
            f,
            genus: (deg - 1) / 2,
            disc,
        })
    }
}

/// JSON schema for a curve list: `[{"label": ..., "f": {...}}, ...]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct CurveJson {
    pub label: String,
    pub f: PolyJson,
}

pub fn parse_curves(json: &str) -> Result<Vec<CurveInput>> {
    let raw: Vec<CurveJson> =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut out = Vec::new();
    for c in raw {
        out.push(CurveInput::new(c.label, c.f.to_poly()?)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessStatus {
    Certified,
    Inconclusive { bound: u64 },
}

/// One row of evidence: the chosen prime (if any), the primes of
/// valuation one on this curve's discriminant, and the full valuation row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub label: String,
    pub prime: Option<u64>,
    /// all odd primes <= bound with ord_p(disc_i) = 1, before cross-checks
    pub candidates: Vec<u64>,
    /// valuations of the chosen prime on every curve's discriminant
    pub valuations: Vec<u32>,
    pub status: WitnessStatus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeWitnessSet {
    pub entries: Vec<WitnessEntry>,
}

impl PrimeWitnessSet {
    pub fn all_certified(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.status == WitnessStatus::Certified)
    }
}

/// For each curve, scans odd primes p <= bound (by trial division of the
/// discriminants) for ord_p(disc_i) = 1 and ord_p(disc_j) = 0 for j != i.
/// Curves without a qualifying prime below the bound come back
/// `Inconclusive` — absence of a small witness proves nothing.
pub fn find_witnesses(curves: &[CurveInput], bound: u64) -> Result<PrimeWitnessSet> {
    if curves.is_empty() {
        return Err(Error::InvalidInput("no curves supplied".into()));
    }
    {
        let mut seen = std::collections::HashSet::new();
        for c in curves {
            if !seen.insert(&c.label) {
                return Err(Error::DuplicateLabel(c.label.clone()));
            }
        }
    }
    let primes = primes_up_to(bound);
    let mut entries = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        let mut candidates = Vec::new();
        let mut chosen: Option<(u64, Vec<u32>)> = None;
        for &p in &primes {
            if p == 2 {
                continue;
            }
            let pb = BigInt::from(p);
            if (&c.disc % &pb).is_zero() && valuation(&c.disc, &pb)? == 1 {
                candidates.push(p);
                if chosen.is_none() {
                    let vals: Vec<u32> = curves
                        .iter()
                        .map(|d| valuation(&d.disc, &pb))
                        .collect::<Result<_>>()?;
                    if vals
                        .iter()
                        .enumerate()
                        .all(|(j, &v)| if j == i { v == 1 } else { v == 0 })
                    {
                        chosen = Some((p, vals));
                    }
                }
            }
        }
        let entry = match chosen {
            Some((p, vals)) => WitnessEntry {
                label: c.label.clone(),
                prime: Some(p),
                candidates,
                valuations: vals,
                status: WitnessStatus::Certified,
            },
            None => WitnessEntry {
                label: c.label.clone(),
                prime: None,
                candidates,
                valuations: Vec::new(),
                status: WitnessStatus::Inconclusive { bound },
            },
        };
        entries.push(entry);
    }
    Ok(PrimeWitnessSet { entries })
}

/// The n x n valuation table for caller-supplied primes: entry (i, j) is
/// true iff ord_{l_j}(disc_i) equals 1 on the diagonal and 0 off it.
pub fn verify_witnesses(curves: &[CurveInput], claimed: &[u64]) -> Result<Vec<Vec<bool>>> {
    if curves.len() != claimed.len() {
        return Err(Error::InvalidInput(
            "one claimed prime per curve required".into(),
        ));
    }
    for &l in claimed {
        if l <= 2 {
            return Err(Error::BadPrime {
                p: l,
                reason: "witness primes must exceed 2".into(),
            });
        }
    }
    let mut table = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        let mut row = Vec::new();
        for (j, &l) in claimed.iter().enumerate() {
            let v = valuation(&c.disc, &BigInt::from(l))?;
            row.push(if i == j { v == 1 } else { v == 0 });
        }
        table.push(row);
    }
    Ok(table)
}

pub fn table_all_true(table: &[Vec<bool>]) -> bool {
    table.iter().all(|r| r.iter().all(|&b| b))
}

/// How the A_n-containment witness was certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleWitnessKind {
    /// shape {q, 1, ..., 1} with q prime, n/2 < q < n-2 (Jordan)
    PrimeCycle { q: usize },
    /// prime degree n: an n-cycle gives primitivity, and a shape with one
    /// part 2 and the rest odd powers up to a transposition
    TranspositionPower,
}

/// Three factorization shapes that pin the Galois group to S_n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnCertificate {
    pub n: usize,
    pub p_irreducible: u64,
    pub shape_irreducible: FactorShape,
    pub p_cycle: u64,
    pub shape_cycle: FactorShape,
    pub cycle_kind: CycleWitnessKind,
    pub p_odd: u64,
    pub shape_odd: FactorShape,
    pub searched_bound: u64,
}

fn is_prime_usize(n: usize) -> bool {
    crate::poly::is_probable_prime(&BigInt::from(n))
}

fn qualifies_cycle(shape: &FactorShape, n: usize) -> Option<CycleWitnessKind> {
    // Jordan: a prime q with n/2 < q < n-2 appearing as {q,1,...,1}
    let big: Vec<usize> = shape.parts.iter().copied().filter(|&d| d > 1).collect();
    if big.len() == 1 {
        let q = big[0];
        if is_prime_usize(q) && 2 * q > n && q < n - 2 {
            return Some(CycleWitnessKind::PrimeCycle { q });
        }
    }
    // prime-degree fallback: exactly one part 2, all other parts odd
    if is_prime_usize(n) {
        let evens: Vec<usize> = shape.parts.iter().copied().filter(|d| d % 2 == 0).collect();
        if evens == [2] {
            return Some(CycleWitnessKind::TranspositionPower);
        }
    }
    None
}

/// Scans unramified primes collecting factorization shapes until three
/// Jordan-criterion witnesses appear: an irreducible reduction (n-cycle),
/// an A_n-forcing cycle witness, and an odd-sign shape. `seed` is recorded
/// for report reproducibility; the shape computation itself is
/// deterministic. Returns `Inconclusive` when the bound runs out — never
/// a claim that the group is smaller than S_n.
pub fn sn_certificate(f: &IntPoly, prime_bound: u64, _seed: u64) -> Result<SnCertificate> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n < 5 {
        return Err(Error::Unsupported(
            "symmetric-group certificate needs degree >= 5".into(),
        ));
    }
    let disc = discriminant(f)?;
    if disc.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let lc = f.leading_coefficient().unwrap().clone();
    let mut irr: Option<(u64, FactorShape)> = None;
    let mut cyc: Option<(u64, FactorShape, CycleWitnessKind)> = None;
    let mut odd: Option<(u64, FactorShape)> = None;
    let mut shapes_seen = 0usize;
    for p in primes_up_to(prime_bound) {
        if p == 2 {
            continue;
        }
        let pb = BigInt::from(p);
        if (&lc % &pb).is_zero() || (&disc % &pb).is_zero() {
            continue;
        }
        let shape = factor_shape(f, p)?;
        shapes_seen += 1;
        if irr.is_none() && shape.parts == [n] {
            irr = Some((p, shape.clone()));
        }
        if cyc.is_none() {
            if let Some(kind) = qualifies_cycle(&shape, n) {
                cyc = Some((p, shape.clone(), kind));
            }
        }
        if odd.is_none() && shape.sign() == -1 {
            odd = Some((p, shape.clone()));
        }
        if irr.is_some() && cyc.is_some() && odd.is_some() {
            let (p_irreducible, shape_irreducible) = irr.unwrap();
            let (p_cycle, shape_cycle, cycle_kind) = cyc.unwrap();
            let (p_odd, shape_odd) = odd.unwrap();
            return Ok(SnCertificate {
                n,
                p_irreducible,
                shape_irreducible,
                p_cycle,
                shape_cycle,
                cycle_kind,
                p_odd,
                shape_odd,
                searched_bound: prime_bound,
            });
        }
    }
    Err(Error::Inconclusive(format!(
        "no full certificate below {prime_bound}: {shapes_seen} shapes examined, \
         irreducible witness {}, cycle witness {}, odd witness {}",
        irr.is_some(),
        cyc.is_some(),
        odd.is_some()
    )))
}
