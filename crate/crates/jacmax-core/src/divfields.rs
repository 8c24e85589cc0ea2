//! Abelian parts of division fields and their intersections.
//!
//! Every abelian extension of Q sits inside a cyclotomic field Q(zeta_N)
//! and is the fixed field of a subgroup H of (Z/N)^x. This module tracks
//! the maximal abelian subextension of a division field of a Jacobian
//! with maximal Galois image: Q(zeta_m) at odd level m, enlarged by the
//! square roots of the curve discriminants at even level. Intersections
//! of such fields are computed in the character lattice, and the closed
//! form for the intersection of two division fields is checked against
//! it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{kronecker_symbol, squarefree_part, FactorPolicy};

/// Square-free discriminant data of a curve: the square-free part of the
/// discriminant and the conductor of the quadratic character attached to
/// it (1 when the discriminant is a perfect square).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadDatum {
    pub delta_sf: BigInt,
    pub conductor: BigInt,
}

/// Conductor of Q(sqrt(d)) for square-free d: |d| when d = 1 (mod 4),
/// else 4|d|.
fn quad_conductor(d: &BigInt) -> BigInt {
    if d.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
        d.abs()
    } else {
        d.abs() * 4
    }
}

/// Builds the quadratic datum of a discriminant, factoring out its
/// square part.
pub fn quad_datum(delta: &BigInt, policy: &FactorPolicy) -> Result<QuadDatum> {
    if delta.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    let sf = squarefree_part(delta, policy)?;
    let conductor = quad_conductor(&sf);
    Ok(QuadDatum {
        delta_sf: sf,
        conductor,
    })
}

fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0]; // the trivial unit group, residue 0 = 1 mod 1
    }
    (1..n).filter(|a| a.gcd(&n) == 1).collect()
}

fn euler_phi(n: u64) -> u64 {
    units(n).len() as u64
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// An abelian number field presented as the fixed field of a subgroup of
/// (Z/N)^x inside Q(zeta_N). Canonical form uses the minimal possible
/// conductor N; `subgroup` is sorted and multiplicatively closed.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AbelianFieldDescriptor {
    pub conductor: u64,
    pub subgroup: Vec<u64>,
}

impl AbelianFieldDescriptor {
    /// The rational field Q.
    pub fn rationals() -> Self {
        AbelianFieldDescriptor {
            conductor: 1,
            subgroup: vec![0],
        }
    }

    /// The cyclotomic field Q(zeta_m), in canonical form.
    pub fn cyclotomic(m: u64) -> Self {
        AbelianFieldDescriptor {
            conductor: m,
            subgroup: vec![1 % m],
        }
        .canonicalize()
    }

    /// Field degree over Q.
    pub fn degree(&self) -> u64 {
        euler_phi(self.conductor) / self.subgroup.len() as u64
    }

    fn contains_unit(&self, a: u64) -> bool {
        self.subgroup.binary_search(&(a % self.conductor)).is_ok()
    }

    /// Minimal-conductor form: push down to the smallest divisor N' of N
    /// such that H contains every unit congruent to 1 mod N'.
    pub fn canonicalize(&self) -> Self {
        let n = self.conductor;
        for np in divisors(n) {
            let ray_inside = units(n)
                .into_iter()
                .filter(|a| a % np == 1 % np)
                .all(|a| self.contains_unit(a));
            if ray_inside {
                if np == 1 {
                    return AbelianFieldDescriptor::rationals();
                }
                let mut sub: Vec<u64> = self.subgroup.iter().map(|a| a % np).collect();
                sub.sort_unstable();
                sub.dedup();
                return AbelianFieldDescriptor {
                    conductor: np,
                    subgroup: sub,
                };
            }
        }
        self.clone()
    }

    /// Does this field contain sqrt(d) (d square-free)? True iff the
    /// quadratic character attached to d is defined mod the conductor
    /// and trivial on the fixing subgroup.
    pub fn has_sqrt(&self, d: &BigInt) -> bool {
        if d == &BigInt::from(1) {
            return true;
        }
        let cond = quad_conductor(d);
        let n = BigInt::from(self.conductor);
        if !(&n % &cond).is_zero() {
            return false;
        }
        self.subgroup
            .iter()
            .all(|&a| kronecker_symbol(d, &BigInt::from(a)) == 1)
    }

    /// Field equality (canonical forms agree).
    pub fn same_field(&self, other: &AbelianFieldDescriptor) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

/// Maximal abelian subextension of the m-division field of a Jacobian
/// with maximal image: Q(zeta_m) for odd m; for even m also the square
/// roots of the given discriminants. `deltas` lists the quadratic data
/// of the curves whose Jacobians make up the product.
pub fn field_from_data(m: u64, deltas: &[QuadDatum]) -> Result<AbelianFieldDescriptor> {
    if m == 0 {
        return Err(Error::InvalidInput("level must be positive".into()));
    }
    if m % 2 == 1 {
        return Ok(AbelianFieldDescriptor::cyclotomic(m));
    }
    let mut n = m;
    for d in deltas {
        if d.delta_sf == BigInt::from(1) {
            continue;
        }
        let c = d
            .conductor
            .to_u64()
            .ok_or_else(|| Error::Unsupported("conductor exceeds u64".into()))?;
        n = n.lcm(&c);
    }
    let sub: Vec<u64> = units(n)
        .into_iter()
        .filter(|&a| {
            a % m == 1
                && deltas.iter().all(|d| {
                    d.delta_sf == BigInt::from(1)
                        || kronecker_symbol(&d.delta_sf, &BigInt::from(a)) == 1
                })
        })
        .collect();
    Ok(AbelianFieldDescriptor {
        conductor: n,
        subgroup: sub,
    }
    .canonicalize())
}

/// Intersection of two abelian fields: the fixed field of the subgroup
/// generated by the two fixing subgroups lifted to the common modulus.
/// The unit group is abelian, so the generated subgroup is the product
/// set.
pub fn intersect(
    a: &AbelianFieldDescriptor,
    b: &AbelianFieldDescriptor,
) -> AbelianFieldDescriptor {
    let n = a.conductor.lcm(&b.conductor);
    let lift_a: Vec<u64> = units(n)
        .into_iter()
        .filter(|&x| a.contains_unit(x))
        .collect();
    let lift_b: Vec<u64> = units(n)
        .into_iter()
        .filter(|&x| b.contains_unit(x))
        .collect();
    let mut prod: Vec<u64> = Vec::new();
    for &x in &lift_a {
        for &y in &lift_b {
            prod.push((x as u128 * y as u128 % n as u128) as u64);
        }
    }
    prod.sort_unstable();
    prod.dedup();
    AbelianFieldDescriptor {
        conductor: n,
        subgroup: prod,
    }
    .canonicalize()
}

/// Compositum of two abelian fields: fixed field of the intersection of
/// the lifted subgroups.
pub fn compositum(
    a: &AbelianFieldDescriptor,
    b: &AbelianFieldDescriptor,
) -> AbelianFieldDescriptor {
    let n = a.conductor.lcm(&b.conductor);
    let sub: Vec<u64> = units(n)
        .into_iter()
        .filter(|&x| a.contains_unit(x) && b.contains_unit(x))
        .collect();
    AbelianFieldDescriptor {
        conductor: n,
        subgroup: sub,
    }
    .canonicalize()
}

/// Closed form for the intersection of the abelian parts of two division
/// fields at levels m1, m2: the cyclotomic field of the gcd, enlarged by
/// every square root lying in both fields. The square-root content is
/// found by enumerating square-free integers supported on the primes of
/// the two conductors.
pub fn theorem_1_4_rhs(
    m1: u64,
    d1: &[QuadDatum],
    m2: u64,
    d2: &[QuadDatum],
) -> Result<AbelianFieldDescriptor> {
    let f1 = field_from_data(m1, d1)?;
    let f2 = field_from_data(m2, d2)?;
    let g = m1.gcd(&m2);
    let mut rhs = AbelianFieldDescriptor::cyclotomic(g);
    // candidate square roots: square-free d with radical dividing the
    // lcm of the two conductors
    let n = f1.conductor.lcm(&f2.conductor);
    let mut primes: Vec<u64> = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            primes.push(p);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    for mask in 0..(1u32 << primes.len()) {
        let mut v: i64 = 1;
        for (i, &q) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                v *= q as i64;
            }
        }
        for d in [BigInt::from(v), BigInt::from(-v)] {
            if d == BigInt::from(1) {
                continue;
            }
            if f1.has_sqrt(&d) && f2.has_sqrt(&d) {
                let quad = field_from_data(
                    2,
                    &[QuadDatum {
                        conductor: quad_conductor(&d),
                        delta_sf: d,
                    }],
                )?;
                rhs = compositum(&rhs, &quad);
            }
        }
    }
    Ok(rhs)
}

/// Human-readable description of a canonical descriptor.
pub fn describe(desc: &AbelianFieldDescriptor) -> String {
    let d = desc.canonicalize();
    if d.degree() == 1 {
        return "Q".to_string();
    }
    if d.subgroup == vec![1] {
        return format!("Q(zeta_{})", d.conductor);
    }
    if d.degree() == 2 {
        // find the square-free integer whose square root generates it
        for cand in 1..=(4 * d.conductor as i64) {
            for s in [cand, -cand] {
                let b = BigInt::from(s);
                if quad_conductor(&b) == BigInt::from(d.conductor) && d.has_sqrt(&b) {
                    return format!("Q(sqrt({}))", s);
                }
            }
        }
    }
    format!(
        "degree-{} subfield of Q(zeta_{}) fixed by {:?}",
        d.degree(),
        d.conductor,
        d.subgroup
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd(d: i64) -> QuadDatum {
        let b = BigInt::from(d);
        QuadDatum {
            conductor: quad_conductor(&b),
            delta_sf: b,
        }
    }

    #[test]
    fn quad_datum_squarefree_extraction() {
        let pol = FactorPolicy::default();
        let d = quad_datum(&BigInt::from(-12), &pol).unwrap();
        assert_eq!(d.delta_sf, BigInt::from(-3));
        assert_eq!(d.conductor, BigInt::from(3));
        let d = quad_datum(&BigInt::from(8), &pol).unwrap();
        assert_eq!(d.delta_sf, BigInt::from(2));
        assert_eq!(d.conductor, BigInt::from(8));
        let d = quad_datum(&BigInt::from(49), &pol).unwrap();
        assert_eq!(d.delta_sf, BigInt::from(1));
        assert_eq!(d.conductor, BigInt::from(1));
    }

    #[test]
    fn cyclotomic_degrees() {
        assert_eq!(AbelianFieldDescriptor::cyclotomic(1).degree(), 1);
        assert_eq!(AbelianFieldDescriptor::cyclotomic(12).degree(), 4);
        // zeta_2 = -1 is rational: canonical conductor drops to 1
        assert_eq!(AbelianFieldDescriptor::cyclotomic(2).conductor, 1);
        // conductor 2k with k odd is never minimal: Q(zeta_6) = Q(zeta_3)
        assert_eq!(AbelianFieldDescriptor::cyclotomic(6).conductor, 3);
    }

    #[test]
    fn odd_level_is_plain_cyclotomic() {
        let f = field_from_data(9, &[qd(-3), qd(5)]).unwrap();
        assert!(f.same_field(&AbelianFieldDescriptor::cyclotomic(9)));
    }

    #[test]
    fn even_level_gains_square_roots() {
        let f = field_from_data(2, &[qd(5)]).unwrap();
        // Q(sqrt(5)): degree 2, conductor 5
        assert_eq!(f.degree(), 2);
        assert_eq!(f.conductor, 5);
        assert!(f.has_sqrt(&BigInt::from(5)));
        assert!(!f.has_sqrt(&BigInt::from(-5)));
        // sqrt(-3) lies in Q(zeta_12) but also needs the character test
        let f = field_from_data(12, &[qd(-3)]).unwrap();
        assert!(f.same_field(&AbelianFieldDescriptor::cyclotomic(12)));
    }

    #[test]
    fn intersect_cyclotomics_is_gcd() {
        for (a, b) in [(12u64, 18u64), (8, 20), (5, 7), (9, 15)] {
            let fa = AbelianFieldDescriptor::cyclotomic(a);
            let fb = AbelianFieldDescriptor::cyclotomic(b);
            let want = AbelianFieldDescriptor::cyclotomic(a.gcd(&b));
            assert!(intersect(&fa, &fb).same_field(&want), "{} {}", a, b);
        }
    }

    #[test]
    fn compositum_cyclotomics_is_lcm() {
        let fa = AbelianFieldDescriptor::cyclotomic(8);
        let fb = AbelianFieldDescriptor::cyclotomic(12);
        assert!(compositum(&fa, &fb).same_field(&AbelianFieldDescriptor::cyclotomic(24)));
    }

    #[test]
    fn coprime_odd_levels_intersect_trivially() {
        let f1 = field_from_data(5, &[qd(-3)]).unwrap();
        let f2 = field_from_data(7, &[qd(5)]).unwrap();
        assert_eq!(intersect(&f1, &f2).degree(), 1);
    }

    #[test]
    fn shared_square_root_survives_intersection() {
        // both Jacobians acquire sqrt(5) at even level
        let f1 = field_from_data(2, &[qd(5)]).unwrap();
        let f2 = field_from_data(2, &[qd(5)]).unwrap();
        let i = intersect(&f1, &f2);
        assert_eq!(i.degree(), 2);
        assert!(i.has_sqrt(&BigInt::from(5)));
        // different discriminants: sqrt(5) vs sqrt(-3) share nothing
        let f2 = field_from_data(2, &[qd(-3)]).unwrap();
        assert_eq!(intersect(&f1, &f2).degree(), 1);
    }

    #[test]
    fn product_of_discriminants_can_appear() {
        // F1 = Q(sqrt(5), sqrt(-3)); F2 = Q(sqrt(-15)): the product
        // sqrt(5)*sqrt(-3) = sqrt(-15) lies in both
        let f1 = field_from_data(2, &[qd(5), qd(-3)]).unwrap();
        let f2 = field_from_data(2, &[qd(-15)]).unwrap();
        let i = intersect(&f1, &f2);
        assert_eq!(i.degree(), 2);
        assert!(i.has_sqrt(&BigInt::from(-15)));
    }

    #[test]
    fn closed_form_matches_lattice_intersection() {
        let cases: Vec<(u64, Vec<QuadDatum>, u64, Vec<QuadDatum>)> = vec![
            (2, vec![qd(5)], 2, vec![qd(5)]),
            (2, vec![qd(5), qd(-3)], 2, vec![qd(-15)]),
            (4, vec![qd(-3)], 6, vec![qd(5)]),
            (12, vec![qd(-3)], 8, vec![qd(2)]),
            (3, vec![qd(-3)], 6, vec![qd(-3)]),
            (10, vec![qd(5)], 4, vec![qd(5)]),
            (5, vec![qd(-7)], 7, vec![qd(5)]),
            (6, vec![qd(-3), qd(5)], 10, vec![qd(-15)]),
        ];
        for (m1, d1, m2, d2) in cases {
            let f1 = field_from_data(m1, &d1).unwrap();
            let f2 = field_from_data(m2, &d2).unwrap();
            let lattice = intersect(&f1, &f2);
            let closed = theorem_1_4_rhs(m1, &d1, m2, &d2).unwrap();
            assert!(
                lattice.same_field(&closed),
                "m1={} m2={} lattice={:?} closed={:?}",
                m1,
                m2,
                lattice,
                closed
            );
        }
    }

    #[test]
    fn describe_forms() {
        assert_eq!(describe(&AbelianFieldDescriptor::rationals()), "Q");
        assert_eq!(describe(&AbelianFieldDescriptor::cyclotomic(12)), "Q(zeta_12)");
        let f = field_from_data(2, &[qd(5)]).unwrap();
        assert_eq!(describe(&f), "Q(sqrt(5))");
        // Q(sqrt(-3)) is the full cyclotomic field Q(zeta_3)
        let f = field_from_data(2, &[qd(-3)]).unwrap();
        assert_eq!(describe(&f), "Q(zeta_3)");
        // a genuinely non-cyclotomic quadratic
        let f = field_from_data(2, &[qd(-15)]).unwrap();
        assert_eq!(describe(&f), "Q(sqrt(-15))");
    }

    #[test]
    fn descriptor_subgroup_is_a_subgroup() {
        // oracle-style sanity: closure under multiplication and inverses
        for (m, ds) in [(12u64, vec![qd(-3)]), (8, vec![qd(2), qd(5)])] {
            let f = field_from_data(m, &ds).unwrap();
            let n = f.conductor;
            for &a in &f.subgroup {
                for &b in &f.subgroup {
                    let ab = (a as u128 * b as u128 % n as u128) as u64;
                    assert!(f.contains_unit(ab));
                }
            }
        }
    }
}
