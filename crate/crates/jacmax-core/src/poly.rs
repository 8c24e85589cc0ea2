//! Exact integer and integer-polynomial arithmetic: resultants, discriminants,
//! valuations, Kronecker symbols and the one-parameter family interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense univariate polynomial over Z, coefficients ascending.
///
/// Canonical form: no trailing zero coefficient unless the polynomial is zero
/// (empty coefficient vector). The zero polynomial has degree `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parse ascending decimal-string coefficients.
    pub fn from_decimal_strings(coeffs: &[String]) -> Result<Self> {
        let mut v = Vec::with_capacity(coeffs.len());
        for s in coeffs {
            let c: BigInt = s
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad integer literal: {s:?}")))?;
            v.push(c);
        }
        Ok(Self::new(v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        if self.coeffs.len() <= 1 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `self + c` (shift of the constant term).
    pub fn add_constant(&self, c: &BigInt) -> IntPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c.clone());
        } else {
            coeffs[0] += c;
        }
        IntPoly::new(coeffs)
    }

    /// Positive gcd of the coefficients (1 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// Pseudo-remainder: `lc(d)^(deg n - deg d + 1) * n = q*d + r`, returns `r`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.degree().expect("pseudo_rem by zero");
        let lc = d.leading_coefficient().unwrap().clone();
        let mut r = self.clone();
        let dn = match r.degree() {
            Some(x) if x >= dd => x,
            _ => {
                // still scale to match the definition
                let e = 1u32;
                return r.scale(&lc.pow(e));
            }
        };
        let mut steps = dn - dd + 1;
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let coef = r.leading_coefficient().unwrap().clone();
            let mut next = vec![BigInt::zero(); dr.max(dd) + 1];
            for (i, c) in r.coeffs.iter().enumerate() {
                next[i] = c * &lc;
            }
            for (j, c) in d.coeffs.iter().enumerate() {
                next[j + dr - dd] -= c * &coef;
            }
            r = IntPoly::new(next);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&lc.pow(steps as u32));
        }
        r
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if a.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Shared polynomial file format: big integers as decimal strings, ascending.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyJson {
    pub var: String,
    pub coeffs: Vec<String>,
}

impl PolyJson {
    pub fn from_poly(p: &IntPoly, var: &str) -> Self {
        PolyJson {
            var: var.to_string(),
            coeffs: p.coeffs().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn to_poly(&self) -> Result<IntPoly> {
        IntPoly::from_decimal_strings(&self.coeffs)
    }
}

/// Polynomial with exact rational coefficients; plumbing for interpolation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero_of_len(n: usize) -> Self {
        RatPoly {
            coeffs: vec![BigRational::zero(); n],
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Fails if any coefficient has a nontrivial denominator.
    pub fn into_int_poly(self) -> Result<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs {
            if !c.denom().is_one() {
                return Err(Error::NonIntegralInterpolation);
            }
            out.push(c.numer().clone());
        }
        Ok(IntPoly::new(out))
    }
}

/// Resultant algorithm selector; the Sylvester path is the slow cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResultantAlgorithm {
    #[default]
    SubresultantPrs,
    SylvesterBareiss,
}

pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    resultant_with(f, g, ResultantAlgorithm::SubresultantPrs)
}

pub fn resultant_with(f: &IntPoly, g: &IntPoly, alg: ResultantAlgorithm) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(match alg {
        ResultantAlgorithm::SubresultantPrs => resultant_prs(f.clone(), g.clone()),
        ResultantAlgorithm::SylvesterBareiss => resultant_sylvester(f, g),
    })
}

/// Resultant via the subresultant polynomial remainder sequence
/// (the classical sub-resultant resultant algorithm; every division exact).
fn resultant_prs(mut a: IntPoly, mut b: IntPoly) -> BigInt {
    let mut sign = 1i32;
    if a.degree().unwrap() < b.degree().unwrap() {
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
    // pull out contents: Res(ca*A, cb*B) = ca^degB cb^degA Res(A, B)
    let ca = a.content();
    let cb = b.content();
    a = IntPoly::new(a.coeffs.iter().map(|c| exact_div(c, &ca)).collect());
    b = IntPoly::new(b.coeffs.iter().map(|c| exact_div(c, &cb)).collect());
    let t = ca.pow(b.degree().unwrap() as u32) * cb.pow(a.degree().unwrap() as u32);

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    while b.degree().unwrap() > 0 {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        a = b;
        let divisor = &g * h.pow(delta);
        b = IntPoly::new(r.coeffs.iter().map(|c| exact_div(c, &divisor)).collect());
        g = a.leading_coefficient().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            exact_div(&g.pow(delta), &h.pow(delta - 1))
        };
    }
    // b is a nonzero constant here
    let da = a.degree().unwrap() as u32;
    let lcb = b.leading_coefficient().unwrap();
    let res = if da == 0 {
        BigInt::one()
    } else {
        exact_div(&lcb.pow(da), &h.pow(da - 1))
    };
    let out = t * res;
    if sign < 0 {
        -out
    } else {
        out
    }
}

fn exact_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    debug_assert!(r.is_zero(), "exact division failed");
    q
}

/// Fraction-free Sylvester-determinant resultant (Bareiss elimination).
fn resultant_sylvester(f: &IntPoly, g: &IntPoly) -> BigInt {
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..n {
        for (i, c) in f.coeffs.iter().enumerate() {
            mat[row][row + m - i] = c.clone();
        }
    }
    for row in 0..m {
        for (i, c) in g.coeffs.iter().enumerate() {
            mat[n + row][row + n - i] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Discriminant with the sign convention `(-1)^(n(n-1)/2) * Res(f, f') / lc(f)`.
///
/// Degree-1 polynomials have discriminant 1 (empty product).
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    discriminant_with(f, ResultantAlgorithm::SubresultantPrs)
}

pub fn discriminant_with(f: &IntPoly, alg: ResultantAlgorithm) -> Result<BigInt> {
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::BadDegree(0)),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(BigInt::one());
    }
    let fp = f.derivative();
    if fp.is_zero() {
        return Ok(BigInt::zero());
    }
    let res = resultant_with(f, &fp, alg)?;
    let lc = f.leading_coefficient().unwrap();
    let signed = if (n * (n - 1) / 2) % 2 == 1 { -res } else { res };
    Ok(exact_div(&signed, lc))
}

/// Largest `k` with `p^k | n`. Primality of `p` is the caller's business.
pub fn valuation(n: &BigInt, p: &BigInt) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    debug_assert!(is_probable_prime(p), "valuation at non-prime {p}");
    let mut k = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(k);
        }
        m = q;
        k += 1;
    }
}

/// Full Kronecker symbol `(a/n)`, defined for all integers `n`.
pub fn kronecker_symbol(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n.clone();
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    // 2-part of n
    let two = BigInt::from(2);
    if n.is_even() {
        if a.is_even() {
            return 0;
        }
        let mut e = 0u64;
        while n.is_even() {
            n /= &two;
            e += 1;
        }
        if e % 2 == 1 {
            let r8 = (a.mod_floor(&BigInt::from(8)))
                .to_string()
                .parse::<u8>()
                .unwrap();
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
    }
    // now n odd positive: Jacobi loop
    let mut a = a.mod_floor(&n);
    loop {
        if a.is_zero() {
            return if n.is_one() { result } else { 0 };
        }
        while a.is_even() {
            a /= &two;
            let r8: BigInt = n.mod_floor(&BigInt::from(8));
            let r8 = r8.to_string().parse::<u8>().unwrap();
            if r8 == 3 || r8 == 5 {
                result = -result;
            }
        }
        if a.is_one() {
            return result;
        }
        // quadratic reciprocity
        let a4: BigInt = a.mod_floor(&BigInt::from(4));
        let n4: BigInt = n.mod_floor(&BigInt::from(4));
        if a4 == BigInt::from(3) && n4 == BigInt::from(3) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
}

/// Factoring policy for [`squarefree_part`].
#[derive(Debug, Clone)]
pub struct FactorPolicy {
    pub trial_bound: u64,
    pub rho_rounds: u32,
    pub rho_iterations: u64,
}

impl Default for FactorPolicy {
    fn default() -> Self {
        FactorPolicy {
            trial_bound: 1_000_000,
            rho_rounds: 16,
            rho_iterations: 1 << 20,
        }
    }
}

/// Factor `|n|` into primes under the policy; returns (prime, exponent) pairs.
pub fn factor(n: &BigInt, policy: &FactorPolicy) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let mut m = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if let Some(entry) = out.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += e;
        } else {
            out.push((p, e));
        }
    };
    // trial division
    let mut p = BigInt::from(2);
    while &(&p * &p) <= &m && p <= BigInt::from(policy.trial_bound) {
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&p);
            if r.is_zero() {
                m = q;
                e += 1;
            } else {
                break;
            }
        }
        if e > 0 {
            push(p.clone(), e, &mut out);
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    // remaining cofactor
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            push(c, 1, &mut out);
            continue;
        }
        if let Some(s) = exact_sqrt(&c) {
            stack.push(s.clone());
            stack.push(s);
            continue;
        }
        match pollard_rho(&c, policy) {
            Some(d) => {
                let q = &c / &d;
                stack.push(d);
                stack.push(q);
            }
            None => return Err(Error::FactoringInconclusive { cofactor: c }),
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

fn pollard_rho(n: &BigInt, policy: &FactorPolicy) -> Option<BigInt> {
    // Brent variant with deterministic seeds.
    let one = BigInt::one();
    for round in 0..policy.rho_rounds {
        let c = BigInt::from(round as u64 + 1);
        let mut x = BigInt::from(2 + round as u64);
        let mut y = x.clone();
        let mut d = BigInt::one();
        let mut count = 0u64;
        while d.is_one() && count < policy.rho_iterations {
            x = (&x * &x + &c).mod_floor(n);
            y = (&y * &y + &c).mod_floor(n);
            y = (&y * &y + &c).mod_floor(n);
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
            count += 1;
        }
        if d > one && &d < n {
            return Some(d);
        }
    }
    None
}

/// Squarefree part: `delta / result` is a perfect square, signs agree.
pub fn squarefree_part(delta: &BigInt, policy: &FactorPolicy) -> Result<BigInt> {
    if delta.is_zero() {
        return Err(Error::ZeroValuation);
    }
    let factors = factor(delta, policy)?;
    let mut out = BigInt::one();
    for (p, e) in factors {
        if e % 2 == 1 {
            out *= p;
        }
    }
    if delta.is_negative() {
        out = -out;
    }
    Ok(out)
}

/// Miller-Rabin with a fixed witness set, enough for every size we factor.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigInt::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&BigInt::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Simple sieve, shared by the prime scans.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    if n >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| if b { Some(i as u64) } else { None })
        .collect()
}

/// Discriminant of `f + N*t` as an exact polynomial in `t`.
///
/// Sampled at `t = 0, 1, -1, 2, -2, ...` (2n-1 points for `n = deg f`,
/// covering the degree bound `2n-2`) and recovered by Lagrange interpolation;
/// all coefficients are checked integral.
pub fn interpolate_family_discriminant(f: &IntPoly, n_step: &BigInt) -> Result<IntPoly> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        Some(d) => return Err(Error::BadDegree(d)),
        None => return Err(Error::ZeroPolynomial),
    };
    let points: Vec<BigInt> = sample_nodes(2 * n - 1);
    let values: Result<Vec<BigInt>> = points
        .iter()
        .map(|t| discriminant(&f.add_constant(&(n_step * t))))
        .collect();
    let values = values?;
    lagrange_interpolate(&points, &values)?.into_int_poly()
}

fn sample_nodes(count: usize) -> Vec<BigInt> {
    let mut points = Vec::with_capacity(count);
    points.push(BigInt::zero());
    let mut k = 1i64;
    while points.len() < count {
        points.push(BigInt::from(k));
        if points.len() < count {
            points.push(BigInt::from(-k));
        }
        k += 1;
    }
    points
}

fn lagrange_interpolate(points: &[BigInt], values: &[BigInt]) -> Result<RatPoly> {
    let n = points.len();
    let mut acc = RatPoly::zero_of_len(n);
    for i in 0..n {
        // numerator polynomial prod_{j != i} (X - x_j), denominator prod (x_i - x_j)
        let mut num = vec![BigInt::one()];
        let mut den = BigInt::one();
        for (j, xj) in points.iter().enumerate() {
            if j == i {
                continue;
            }
            den *= &points[i] - xj;
            let mut next = vec![BigInt::zero(); num.len() + 1];
            for (k, c) in num.iter().enumerate() {
                next[k] += c * (-xj);
                next[k + 1] += c;
            }
            num = next;
        }
        let w = BigRational::new(values[i].clone(), den);
        for (k, c) in num.into_iter().enumerate() {
            acc.coeffs[k] += BigRational::from(c) * &w;
        }
    }
    Ok(acc)
}
