//! The embedding S_{2g+2} ↪ Sp_{2g}(F_2): the symmetric group acts on
//! (Z/2)^{2g+2} by permuting coordinates, preserves the hyperplane
//! e^⊥ = {even-weight vectors} (e = all-ones) and descends to e^⊥/⟨e⟩,
//! where the dot product induces a nondegenerate alternating form.

use crate::error::{Error, Result};
use crate::group::matrix::ModMatrix;

/// Permutation of {0, .., k-1}: images[i] = σ(i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    pub images: Vec<usize>,
}

impl Perm {
    pub fn identity(k: usize) -> Self {
        Perm {
            images: (0..k).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i >= k || seen[i] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Cycle notation constructor on k points, e.g. `[[0,1]]` = transposition.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        for c in cycles {
            for w in 0..c.len() {
                let from = c[w];
                let to = c[(w + 1) % c.len()];
                if from >= k || to >= k {
                    return Err(Error::InvalidInput("cycle point out of range".into()));
                }
                images[from] = to;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// στ means "apply τ first, then σ".
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn sign(&self) -> i32 {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut parity = 0usize;
        for i in 0..k {
            if seen[i] {
                continue;
            }
            let mut j = i;
            let mut len = 0;
            while !seen[j] {
                seen[j] = true;
                j = self.images[j];
                len += 1;
            }
            parity += len - 1;
        }
        if parity % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Coordinate permutation on F_2^k: (σ.v)[σ(i)] = v[i].
    fn act(&self, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.images[i]] = x;
        }
        out
    }
}

fn dot(a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).map(|(x, y)| x & y).fold(0, |s, t| s ^ t)
}

fn add(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Canonical coset representative of v in e^⊥/⟨e⟩: the lexicographically
/// smaller of v and v + e.
fn canon(v: &[u8]) -> Vec<u8> {
    let e = vec![1u8; v.len()];
    let w = add(v, &e);
    if v.to_vec() <= w {
        v.to_vec()
    } else {
        w
    }
}

/// Fixed symplectic basis (a_1..a_g, b_1..b_g) of e^⊥/⟨e⟩ so the induced
/// pairing becomes the standard form: built by deterministic symplectic
/// Gram-Schmidt over lexicographically ordered coset representatives.
pub fn quotient_symplectic_basis(g: usize) -> Vec<Vec<u8>> {
    let k = 2 * g + 2;
    // all canonical nonzero representatives of even-weight cosets, sorted
    let mut reps: Vec<Vec<u8>> = Vec::new();
    for mask in 1u64..(1 << k) {
        let v: Vec<u8> = (0..k).map(|i| ((mask >> i) & 1) as u8).collect();
        if v.iter().map(|&x| x as usize).sum::<usize>() % 2 != 0 {
            continue;
        }
        let c = canon(&v);
        if c.iter().any(|&x| x != 0) && !reps.contains(&c) {
            reps.push(c);
        }
    }
    reps.sort();
    let mut pairs_a: Vec<Vec<u8>> = Vec::new();
    let mut pairs_b: Vec<Vec<u8>> = Vec::new();
    for _ in 0..g {
        let orth = |v: &Vec<u8>| {
            pairs_a.iter().all(|a| dot(v, a) == 0) && pairs_b.iter().all(|b| dot(v, b) == 0)
        };
        let a = reps
            .iter()
            .find(|v| orth(v))
            .expect("form degenerate: no isotropic start vector")
            .clone();
        let b = reps
            .iter()
            .find(|v| orth(v) && dot(&a, v) == 1)
            .expect("form degenerate: no dual vector")
            .clone();
        // anything orthogonal to all chosen pairs lies in their symplectic
        // complement, so nonzero candidates are automatically independent
        pairs_a.push(a);
        pairs_b.push(b);
    }
    let mut basis = pairs_a;
    basis.extend(pairs_b);
    basis
}

/// Coordinates of a coset w in the symplectic basis: with basis
/// (a_1..a_g, b_1..b_g) and ⟨a_i, b_j⟩ = δ_ij, the a-coordinates are
/// ⟨w, b_i⟩ and the b-coordinates ⟨a_i, w⟩ (signs vanish in char 2).
fn coords(w: &[u8], basis: &[Vec<u8>]) -> Vec<u64> {
    let g = basis.len() / 2;
    let mut c = Vec::with_capacity(2 * g);
    for i in 0..g {
        c.push(dot(w, &basis[g + i]) as u64);
    }
    for i in 0..g {
        c.push(dot(w, &basis[i]) as u64);
    }
    c
}

/// Matrix of σ's action on e^⊥/⟨e⟩ in the fixed symplectic basis.
/// Homomorphism: embed(στ) = embed(σ)·embed(τ); requires g >= 2 for
/// injectivity.
pub fn embed_permutation(sigma: &Perm, g: usize) -> Result<ModMatrix> {
    if g < 2 {
        return Err(Error::Unsupported(
            "embedding needs genus >= 2 for injectivity".into(),
        ));
    }
    if sigma.degree() != 2 * g + 2 {
        return Err(Error::InvalidInput(format!(
            "permutation degree {} != {}",
            sigma.degree(),
            2 * g + 2
        )));
    }
    let basis = quotient_symplectic_basis(g);
    let n = 2 * g;
    let mut mat = ModMatrix::zero(n, 2);
    for (j, bj) in basis.iter().enumerate() {
        let img = sigma.act(bj);
        let col = coords(&img, &basis);
        for i in 0..n {
            mat.set(i, j, col[i]);
        }
    }
    Ok(mat)
}

/// Recovers the sign of the (unique) permutation mapping to M by
/// reconstructing σ from the images of the pair classes [e_i + e_j].
pub fn sign_character(m: &ModMatrix, g: usize) -> Result<i32> {
    let sigma = preimage_permutation(m, g)?;
    Ok(sigma.sign())
}

/// Inverts the embedding: finds σ with embed(σ) = M, or errors if M is
/// not in the embedded image of S_{2g+2}.
pub fn preimage_permutation(m: &ModMatrix, g: usize) -> Result<Perm> {
    let k = 2 * g + 2;
    let n = 2 * g;
    if m.n != n || m.m != 2 {
        return Err(Error::InvalidInput("expected a 2g x 2g matrix over F_2".into()));
    }
    let basis = quotient_symplectic_basis(g);
    // pair class [e_i + e_j] -> its coordinate vector
    let mut class_of: std::collections::HashMap<Vec<u64>, (usize, usize)> =
        std::collections::HashMap::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let mut v = vec![0u8; k];
            v[i] = 1;
            v[j] = 1;
            class_of.insert(coords(&v, &basis), (i, j));
        }
    }
    // image of each pair class under M must again be a pair class
    let mut pair_map: std::collections::HashMap<(usize, usize), (usize, usize)> =
        std::collections::HashMap::new();
    for (c, &(i, j)) in &class_of {
        let img = m.apply(c);
        match class_of.get(&img) {
            Some(&p) => {
                pair_map.insert((i, j), p);
            }
            None => return Err(Error::NotInEmbeddedImage),
        }
    }
    // σ(i) = the common point of the images of {i, j1} and {i, j2}
    let mut images = vec![usize::MAX; k];
    for i in 0..k {
        let mut partners = (0..k).filter(|&j| j != i);
        let j1 = partners.next().unwrap();
        let j2 = partners.next().unwrap();
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let (p1, q1) = pair_map[&key(i, j1)];
        let (p2, q2) = pair_map[&key(i, j2)];
        let common = if p1 == p2 || p1 == q2 {
            p1
        } else if q1 == p2 || q1 == q2 {
            q1
        } else {
            return Err(Error::NotInEmbeddedImage);
        };
        images[i] = common;
    }
    let sigma = Perm::from_images(images).map_err(|_| Error::NotInEmbeddedImage)?;
    // confirm
    if embed_permutation(&sigma, g)? != *m {
        return Err(Error::NotInEmbeddedImage);
    }
    Ok(sigma)
}

/// Generators of S_k as permutations: a transposition and a k-cycle.
pub fn symmetric_group_perm_gens(k: usize) -> Vec<Perm> {
    vec![
        Perm::from_cycles(k, &[vec![0, 1]]).unwrap(),
        Perm::from_cycles(k, &[(0..k).collect()]).unwrap(),
    ]
}

/// Generators of A_k: 3-cycles.
pub fn alternating_group_perm_gens(k: usize) -> Vec<Perm> {
    (2..k)
        .map(|i| Perm::from_cycles(k, &[vec![0, 1, i]]).unwrap())
        .collect()
}
