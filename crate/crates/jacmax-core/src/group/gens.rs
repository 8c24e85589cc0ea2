//! Generator sets: Sp_{2g}(Z/m) via symplectic transvections,
//! similitude scalings, and the equal-similitude block group GSp^Δ.

use crate::error::{Error, Result};
use crate::group::matrix::{omega, prime_power_split, unit_inverse, ModMatrix};
use crate::group::schreier::FiniteMatrixGroup;

/// Transvection matrix T_v = I + v·(Ωv)^T, i.e. x ↦ x + ⟨x, v⟩·v.
pub fn transvection(v: &[u64], m: u64) -> ModMatrix {
    let n = v.len();
    let g = n / 2;
    let w = omega(g, m);
    let wv = w.apply(v);
    let mut t = ModMatrix::identity(n, m);
    for i in 0..n {
        for j in 0..n {
            let cur = t.get(i, j);
            let add = (v[i] as u128 * wv[j] as u128 % m as u128) as u64;
            t.set(i, j, (cur + add) % m);
        }
    }
    t
}

/// Transvections over all nonzero 0/1 vectors generate Sp_{2g}(Z/q) for a
/// prime power q; composite m is handled blockwise by CRT (generators that
/// are a transvection in one prime-power factor and the identity in the
/// others).
pub fn sp_generators(g: usize, m: u64) -> Vec<ModMatrix> {
    let n = 2 * g;
    let factors = prime_power_split(m);
    let mut out = Vec::new();
    for &(p, k) in &factors {
        let q = p.pow(k);
        let cof = m / q;
        // CRT coefficient: 1 mod q, 0 mod m/q
        let e = if cof == 1 {
            1
        } else {
            let u = unit_inverse(cof % q, q).unwrap();
            (cof as u128 * u as u128 % m as u128) as u64
        };
        for mask in 1u64..(1 << n) {
            let v: Vec<u64> = (0..n).map(|i| (mask >> i) & 1).collect();
            let t = transvection(&v, m);
            // I + e·(T - I): transvection mod q, identity mod m/q
            let id = ModMatrix::identity(n, m);
            let gmat = id.add(&t.sub(&id).scale(e));
            if !gmat.is_identity() && !out.contains(&gmat) {
                out.push(gmat);
            }
        }
    }
    out
}

/// diag(c·I_g, I_g): similitude c.
pub fn similitude_scaling(g: usize, m: u64, c: u64) -> ModMatrix {
    let mut d = ModMatrix::identity(2 * g, m);
    for i in 0..g {
        d.set(i, i, c);
    }
    d
}

/// Smallest generator of (Z/q)^× for a prime power q of an odd prime,
/// or of the 2-part handled by the caller.
pub fn unit_group_generators(m: u64) -> Vec<u64> {
    // brute force: grow a generating set until the generated subgroup of
    // (Z/m)^× is everything (moduli here are tiny)
    let units: Vec<u64> = (1..m).filter(|&a| unit_inverse(a, m).is_some()).collect();
    let mut gens: Vec<u64> = Vec::new();
    let mut span = vec![1u64];
    for &u in &units {
        if span.contains(&u) {
            continue;
        }
        gens.push(u);
        // regenerate span
        let mut s = vec![1u64];
        let mut frontier = vec![1u64];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = x * g % m;
                if !s.contains(&y) {
                    s.push(y);
                    frontier.push(y);
                }
            }
        }
        span = s;
        if span.len() == units.len() {
            break;
        }
    }
    gens
}

/// Sp_{2g}(Z/m) as a group object.
pub fn sp_group(g: usize, m: u64) -> FiniteMatrixGroup {
    FiniteMatrixGroup::new(2 * g, m, sp_generators(g, m))
}

/// GSp_{2g}(Z/m): Sp generators plus one scaling per unit-group generator.
pub fn gsp_group(g: usize, m: u64) -> FiniteMatrixGroup {
    let mut gens = sp_generators(g, m);
    for c in unit_group_generators(m) {
        gens.push(similitude_scaling(g, m, c));
    }
    FiniteMatrixGroup::new(2 * g, m, gens)
}

/// Embed a block matrix into the block-diagonal product ∏ GSp_{2g_i}.
pub fn block_embed(genera: &[usize], block: usize, a: &ModMatrix, m: u64) -> ModMatrix {
    let total: usize = genera.iter().map(|&g| 2 * g).sum();
    let offset: usize = genera[..block].iter().map(|&g| 2 * g).sum();
    let mut out = ModMatrix::identity(total, m);
    for i in 0..a.n {
        for j in 0..a.n {
            out.set(offset + i, offset + j, a.get(i, j));
        }
    }
    out
}

/// GSp^Δ(Z/ℓ): tuples of GSp blocks sharing one similitude. Generators:
/// per-block Sp transvections plus a single all-block scaling per unit
/// generator of (Z/ℓ)^×.
pub fn build_gsp_delta(genera: &[usize], l: u64) -> Result<FiniteMatrixGroup> {
    if genera.is_empty() {
        return Err(Error::InvalidInput("no blocks".into()));
    }
    let total: usize = genera.iter().map(|&g| 2 * g).sum();
    let mut gens: Vec<ModMatrix> = Vec::new();
    for (b, &g) in genera.iter().enumerate() {
        for t in sp_generators(g, l) {
            gens.push(block_embed(genera, b, &t, l));
        }
    }
    for c in unit_group_generators(l) {
        let mut scal = ModMatrix::identity(total, l);
        let mut offset = 0;
        for &g in genera {
            for i in 0..g {
                scal.set(offset + i, offset + i, c);
            }
            offset += 2 * g;
        }
        gens.push(scal);
    }
    Ok(FiniteMatrixGroup::new(total, l, gens))
}
