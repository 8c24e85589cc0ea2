//! Polynomial arithmetic over prime fields: squarefree decomposition,
//! Cantor-Zassenhaus factorization, factor shapes and the double-root
//! analysis behind the valuation-one reduction criterion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::IntPoly;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

/// Dense polynomial over F_p, coefficients ascending and reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    modulus: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(modulus: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= modulus;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { modulus, coeffs }
    }

    pub fn zero(modulus: u64) -> Self {
        ModPoly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    pub fn one(modulus: u64) -> Self {
        ModPoly::new(modulus, vec![1])
    }

    pub fn x(modulus: u64) -> Self {
        ModPoly::new(modulus, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lc(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x % p, p) + c) % p;
        }
        acc
    }

    pub fn add(&self, other: &ModPoly) -> ModPoly {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::new(
            p,
            (0..n)
                .map(|i| {
                    (self.coeffs.get(i).copied().unwrap_or(0)
                        + other.coeffs.get(i).copied().unwrap_or(0))
                        % p
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let p = self.modulus;
        let n = self.coeffs.len().max(other.coeffs.len());
        ModPoly::new(
            p,
            (0..n)
                .map(|i| {
                    (self.coeffs.get(i).copied().unwrap_or(0) + p
                        - other.coeffs.get(i).copied().unwrap_or(0))
                        % p
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::zero(self.modulus);
        }
        let p = self.modulus;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        ModPoly::new(p, out)
    }

    pub fn scale(&self, c: u64) -> ModPoly {
        let p = self.modulus;
        ModPoly::new(p, self.coeffs.iter().map(|&a| mulmod(a, c, p)).collect())
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.modulus;
        if self.coeffs.len() <= 1 {
            return ModPoly::zero(p);
        }
        ModPoly::new(
            p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
                .collect(),
        )
    }

    pub fn monic(&self) -> ModPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.modulus))
    }

    /// Euclidean division, returns (quotient, remainder).
    pub fn div_rem(&self, d: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.modulus;
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = invmod(d.lc(), p);
        let mut r = self.coeffs.clone();
        if r.len() < dd + 1 {
            return (ModPoly::zero(p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        while r.len() >= dd + 1 {
            let deg_r = r.len() - 1;
            let c = mulmod(*r.last().unwrap(), lc_inv, p);
            if c != 0 {
                q[deg_r - dd] = c;
                for (j, &dc) in d.coeffs.iter().enumerate() {
                    let idx = j + deg_r - dd;
                    r[idx] = (r[idx] + p - mulmod(c, dc, p)) % p;
                }
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
            if r.len() < dd + 1 {
                break;
            }
        }
        (ModPoly::new(p, q), ModPoly::new(p, r))
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        self.div_rem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &ModPoly) -> ModPoly {
        let mut base = self.rem(m);
        let mut acc = ModPoly::one(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// p-th root of a polynomial whose derivative vanishes (coefficients
    /// only at indices divisible by p; Frobenius is identity on F_p).
    fn pth_root(&self) -> ModPoly {
        let p = self.modulus as usize;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(p)
            .copied()
            .collect::<Vec<u64>>();
        ModPoly::new(self.modulus, coeffs)
    }
}

impl std::fmt::Display for ModPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.modulus);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.modulus)
    }
}

/// Coefficientwise reduction of an integer polynomial mod a prime.
pub fn reduce_mod(f: &IntPoly, p: u64) -> ModPoly {
    let pm = BigInt::from(p);
    ModPoly::new(
        p,
        f.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pm).to_u64().unwrap())
            .collect(),
    )
}

/// Squarefree decomposition over F_p: `f = lc * prod g_i^{m_i}` with the
/// `g_i` monic, squarefree and pairwise coprime. Yun/Musser with p-th-root
/// descent for vanishing derivatives.
pub fn squarefree_decomposition(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    assert!(!f.is_zero(), "squarefree decomposition of zero");
    let mut out: Vec<(ModPoly, usize)> = Vec::new();
    let p = f.modulus() as usize;
    let mut f = f.monic();
    let mut e = 1usize;
    loop {
        if f.degree() == Some(0) {
            break;
        }
        let fp = f.derivative();
        if fp.is_zero() {
            f = f.pth_root();
            e *= p;
            continue;
        }
        let mut g = f.gcd(&fp);
        let mut w = f.div_rem(&g).0.monic();
        let mut i = 1usize;
        while !w.is_one() {
            let y = w.gcd(&g);
            let z = w.div_rem(&y).0.monic();
            if !z.is_one() {
                out.push((z, i * e));
            }
            w = y;
            g = g.div_rem(&w).0;
            i += 1;
        }
        if g.degree().map_or(false, |d| d > 0) {
            f = g.monic().pth_root();
            e *= p;
        } else {
            break;
        }
    }
    out.sort_by_key(|(g, m)| (*m, g.coeffs().to_vec()));
    out
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// returns (product of irreducible factors of degree d, d) pairs.
pub fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.modulus();
    let mut f = f.monic();
    let mut out = Vec::new();
    let mut h = ModPoly::x(p);
    let mut d = 0usize;
    while f.degree().map_or(0, |x| x) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p, &f);
        let g = h.sub(&ModPoly::x(p)).gcd(&f);
        if g.degree().map_or(false, |x| x > 0) {
            out.push((g.clone(), d));
            f = f.div_rem(&g).0.monic();
            h = h.rem(&f);
        }
    }
    if f.degree().map_or(false, |x| x > 0) {
        let deg = f.degree().unwrap();
        out.push((f, deg));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: factors a monic squarefree
/// product of degree-d irreducibles into the irreducibles.
pub fn equal_degree(f: &ModPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let p = f.modulus();
    let n = f.degree().unwrap();
    if n == d {
        return vec![f.monic()];
    }
    let mut stack = vec![f.monic()];
    let mut out = Vec::new();
    while let Some(g) = stack.pop() {
        let deg = g.degree().unwrap();
        if deg == d {
            out.push(g);
            continue;
        }
        // try random split
        loop {
            let a = ModPoly::new(
                p,
                (0..deg).map(|_| rng.gen_range(0..p)).collect::<Vec<u64>>(),
            );
            if a.degree().map_or(true, |x| x == 0) {
                continue;
            }
            let h = if p == 2 {
                // trace map over F_{2^d}
                let mut t = a.clone().rem(&g);
                let mut acc = t.clone();
                for _ in 1..d {
                    t = t.mul(&t).rem(&g);
                    acc = acc.add(&t);
                }
                acc.gcd(&g)
            } else {
                // a^((p^d - 1)/2) - 1
                let mut e = BigInt::from(p).pow(d as u32);
                e -= 1;
                e /= 2;
                let b = pow_mod_big(&a, &e, &g);
                b.sub(&ModPoly::one(p)).gcd(&g)
            };
            let hd = h.degree().map_or(0, |x| x);
            if hd > 0 && hd < deg {
                let q = g.div_rem(&h).0.monic();
                stack.push(h.monic());
                stack.push(q);
                break;
            }
        }
    }
    out.sort_by_key(|g| g.coeffs().to_vec());
    out
}

fn pow_mod_big(a: &ModPoly, e: &BigInt, m: &ModPoly) -> ModPoly {
    let mut base = a.rem(m);
    let mut acc = ModPoly::one(a.modulus());
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = acc.mul(&acc).rem(m);
        if e.bit(i) {
            acc = acc.mul(&base).rem(m);
        }
    }
    let _ = &mut base;
    acc
}

/// Full factorization into monic irreducibles with multiplicities.
pub fn factor(f: &ModPoly, seed: u64) -> Vec<(ModPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by_key(|(g, m)| (*m, g.degree(), g.coeffs().to_vec()));
    out
}

/// Roots in F_p with multiplicities.
pub fn roots(f: &ModPoly, seed: u64) -> Vec<(u64, usize)> {
    let p = f.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        // isolate the product of the linear factors: gcd(x^p - x, g)
        let xp = ModPoly::x(p).pow_mod(p, &g);
        let lin = xp.sub(&ModPoly::x(p)).gcd(&g);
        if lin.degree().map_or(true, |d| d == 0) {
            continue;
        }
        for irr in equal_degree(&lin, 1, &mut rng) {
            // irr = x + c, root = -c
            let c = irr.coeffs()[0];
            out.push(((p - c) % p, m));
        }
    }
    out.sort();
    out
}

/// Multiset of degrees of the irreducible factors (a Frobenius cycle type).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FactorShape {
    /// sorted ascending
    pub parts: Vec<usize>,
}

impl FactorShape {
    /// Sign of the corresponding permutation: `(-1)^(n - #parts)`.
    pub fn sign(&self) -> i32 {
        let n: usize = self.parts.iter().sum();
        if (n - self.parts.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl std::fmt::Display for FactorShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{{}}}",
            self.parts
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Factorization shape of `f mod p` for an unramified prime: requires
/// `p` coprime to the leading coefficient and the discriminant so the shape
/// is a genuine Frobenius cycle type (all multiplicities one).
pub fn factor_shape(f: &IntPoly, p: u64) -> Result<FactorShape> {
    let lc = f.leading_coefficient().ok_or(Error::ZeroPolynomial)?;
    if (lc % BigInt::from(p)).is_zero() {
        return Err(Error::BadPrime {
            p,
            reason: "divides the leading coefficient".into(),
        });
    }
    let fbar = reduce_mod(f, p);
    if !fbar.gcd(&fbar.derivative()).is_one() {
        return Err(Error::BadPrime {
            p,
            reason: "ramified: reduction is not squarefree".into(),
        });
    }
    let mut parts = Vec::new();
    for (g, d) in distinct_degree(&fbar.monic()) {
        let count = g.degree().unwrap() / d;
        parts.extend(std::iter::repeat(d).take(count));
    }
    parts.sort_unstable();
    Ok(FactorShape { parts })
}

/// Repeated-root structure of `f mod l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DoubleRootAnalysis {
    /// Exactly one repeated root, of multiplicity two, lying in F_l.
    UniqueDoubleRootInBase(u64),
    /// Anything else, with a short structural description.
    Other(String),
}

/// Classifies the repeated-factor structure of `f mod l` (l odd, coprime to
/// the leading coefficient). Valuation one of the discriminant forces the
/// `UniqueDoubleRootInBase` outcome.
pub fn double_root_analysis(f: &IntPoly, l: u64) -> Result<DoubleRootAnalysis> {
    if l == 2 {
        return Err(Error::Unsupported("modulus 2 not supported here".into()));
    }
    let lc = f.leading_coefficient().ok_or(Error::ZeroPolynomial)?;
    if (lc % BigInt::from(l)).is_zero() {
        return Err(Error::LeadingCoefficientVanishes);
    }
    let fbar = reduce_mod(f, l);
    let decomp = squarefree_decomposition(&fbar);
    let repeated: Vec<&(ModPoly, usize)> = decomp.iter().filter(|(_, m)| *m >= 2).collect();
    match repeated.as_slice() {
        [] => Ok(DoubleRootAnalysis::Other("squarefree reduction".into())),
        [(g, 2)] if g.degree() == Some(1) => {
            // g = x + c monic, root = -c
            let c = g.monic().coeffs()[0];
            Ok(DoubleRootAnalysis::UniqueDoubleRootInBase((l - c) % l))
        }
        _ => {
            let desc = repeated
                .iter()
                .map(|(g, m)| format!("(deg {}, mult {})", g.degree().unwrap(), m))
                .collect::<Vec<_>>()
                .join(", ");
            Ok(DoubleRootAnalysis::Other(format!(
                "repeated factors: {desc}"
            )))
        }
    }
}
