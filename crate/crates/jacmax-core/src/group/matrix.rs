//! Square matrices over Z/m with the symplectic form machinery.

use crate::error::{Error, Result};

/// Extended gcd: returns (g, x) with a*x ≡ g (mod m).
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of a unit mod m (any m >= 2).
pub fn unit_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Prime-power factorization of a small modulus.
pub fn prime_power_split(m: u64) -> Vec<(u64, u32)> {
    let mut m = m;
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Dense n x n matrix over Z/m, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    pub m: u64,
    pub n: usize,
    pub a: Vec<u64>,
}

impl ModMatrix {
    pub fn zero(n: usize, m: u64) -> Self {
        ModMatrix {
            m,
            n,
            a: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, m: u64) -> Self {
        let mut z = Self::zero(n, m);
        for i in 0..n {
            z.a[i * n + i] = 1 % m;
        }
        z
    }

    pub fn from_rows(rows: &[Vec<i64>], m: u64) -> Self {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            for &x in r {
                a.push(x.rem_euclid(m as i64) as u64);
            }
        }
        ModMatrix { m, n, a }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.n + j] = v % self.m;
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.m)
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        debug_assert_eq!(self.m, other.m);
        let n = self.n;
        let m = self.m as u128;
        let mut out = ModMatrix::zero(n, self.m);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k] as u128;
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = &mut out.a[i * n + j];
                    *v = ((*v as u128 + aik * other.a[k * n + j] as u128) % m) as u64;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x = (*x + y) % self.m;
        }
        out
    }

    pub fn sub(&self, other: &ModMatrix) -> ModMatrix {
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x = (*x + self.m - y) % self.m;
        }
        out
    }

    pub fn scale(&self, c: u64) -> ModMatrix {
        let m = self.m as u128;
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x = ((*x as u128 * c as u128) % m) as u64;
        }
        out
    }

    pub fn transpose(&self) -> ModMatrix {
        let n = self.n;
        let mut out = ModMatrix::zero(n, self.m);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j];
            }
        }
        out
    }

    /// Reduce entries into Z/d for d dividing (or not) the modulus.
    pub fn reduce(&self, d: u64) -> ModMatrix {
        ModMatrix {
            m: d,
            n: self.n,
            a: self.a.iter().map(|&x| x % d).collect(),
        }
    }

    /// Matrix-vector product (column vector).
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n;
        let m = self.m as u128;
        (0..n)
            .map(|i| {
                let mut acc = 0u128;
                for j in 0..n {
                    acc += self.a[i * n + j] as u128 * v[j] as u128;
                }
                (acc % m) as u64
            })
            .collect()
    }

    /// Inverse over Z/m via CRT over the prime-power factors of m and
    /// Gauss-Jordan with unit pivots in each factor.
    pub fn inverse(&self) -> Result<ModMatrix> {
        let factors = prime_power_split(self.m);
        let mut partial: Option<(u64, ModMatrix)> = None;
        for &(p, k) in &factors {
            let q = p.pow(k);
            let inv_q = self.reduce(q).inverse_prime_power(p)?;
            partial = Some(match partial {
                None => (q, inv_q),
                Some((q0, m0)) => {
                    let qq = q0 * q;
                    // CRT combine entrywise
                    let mut comb = ModMatrix::zero(self.n, qq);
                    let u = unit_inverse(q0 % q, q).unwrap();
                    for idx in 0..self.n * self.n {
                        let a0 = m0.a[idx];
                        let a1 = inv_q.a[idx];
                        // x = a0 + q0 * ((a1 - a0) * u mod q)
                        let diff = (a1 + q - a0 % q) % q;
                        let t = (diff as u128 * u as u128 % q as u128) as u64;
                        comb.a[idx] = (a0 + q0 * t) % qq;
                    }
                    (qq, comb)
                }
            });
        }
        let (q, inv) = partial.ok_or(Error::SingularMatrix(self.m))?;
        debug_assert_eq!(q, self.m);
        Ok(inv)
    }

    fn inverse_prime_power(&self, p: u64) -> Result<ModMatrix> {
        let n = self.n;
        let q = self.m;
        let mut a = self.clone();
        let mut inv = ModMatrix::identity(n, q);
        for col in 0..n {
            // unit pivot: entry not divisible by p
            let pivot = (col..n)
                .find(|&r| a.get(r, col) % p != 0)
                .ok_or(Error::SingularMatrix(q))?;
            if pivot != col {
                for j in 0..n {
                    a.a.swap(pivot * n + j, col * n + j);
                    inv.a.swap(pivot * n + j, col * n + j);
                }
            }
            let pinv = unit_inverse(a.get(col, col), q).unwrap();
            for j in 0..n {
                a.a[col * n + j] = (a.a[col * n + j] as u128 * pinv as u128 % q as u128) as u64;
                inv.a[col * n + j] = (inv.a[col * n + j] as u128 * pinv as u128 % q as u128) as u64;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let c = a.get(r, col);
                if c == 0 {
                    continue;
                }
                for j in 0..n {
                    let s = (c as u128 * a.a[col * n + j] as u128 % q as u128) as u64;
                    a.a[r * n + j] = (a.a[r * n + j] + q - s) % q;
                    let s = (c as u128 * inv.a[col * n + j] as u128 % q as u128) as u64;
                    inv.a[r * n + j] = (inv.a[r * n + j] + q - s) % q;
                }
            }
        }
        Ok(inv)
    }
}

/// The standard symplectic form matrix [[0, I], [-I, 0]] of size 2g.
pub fn omega(g: usize, m: u64) -> ModMatrix {
    let n = 2 * g;
    let mut w = ModMatrix::zero(n, m);
    for i in 0..g {
        w.set(i, g + i, 1);
        w.set(g + i, i, m - 1);
    }
    w
}

/// Similitude test: returns Some(lambda) iff A^T Ω A = λ·Ω with λ a unit.
pub fn gsp_membership(a: &ModMatrix) -> Result<Option<u64>> {
    if a.n % 2 != 0 {
        return Err(Error::Unsupported("odd dimension".into()));
    }
    let g = a.n / 2;
    let w = omega(g, a.m);
    let s = a.transpose().mul(&w).mul(a);
    let lambda = s.get(0, g);
    if unit_inverse(lambda, a.m).is_none() {
        return Ok(None);
    }
    if s == w.scale(lambda) {
        Ok(Some(lambda))
    } else {
        Ok(None)
    }
}

/// Point encoding: vectors of (Z/m)^n as indices in base m.
pub fn encode(v: &[u64], m: u64) -> usize {
    let mut idx = 0usize;
    for &x in v.iter().rev() {
        idx = idx * m as usize + x as usize;
    }
    idx
}

pub fn decode(mut idx: usize, n: usize, m: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        v.push((idx % m as usize) as u64);
        idx /= m as usize;
    }
    v
}
