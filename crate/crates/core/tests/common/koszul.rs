//! Hochschild dimensions of `k[x]/(x²)` from its 2-periodic resolution
//! `A^e ← A^e ← A^e ← ...` with differentials alternating between
//! multiplication by `x⊗1 - 1⊗x` and `x⊗1 + 1⊗x`. Self-contained: small
//! integer matrices and ranks modulo a prime, no library linear algebra.

/// Residues modulo `p`; for characteristic 0 a large prime stands in, which
/// is exact here since every minor is a small integer.
fn modulus(characteristic: u64) -> i64 {
    if characteristic == 0 {
        1_000_003
    } else {
        characteristic as i64
    }
}

fn rank(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    for row in m.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(p);
        }
    }
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = pow(m[r][c], p - 2, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let k = m[i][c] * inv % p;
                for j in 0..cols {
                    m[i][j] = (m[i][j] - k * m[r][j]).rem_euclid(p);
                }
            }
        }
        r += 1;
    }
    r
}

fn pow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Multiplication by `x` on `k[x]/(x²)` in the basis `1, x`.
const X: [[i64; 2]; 2] = [[0, 0], [1, 0]];

fn kron(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

const ONE: [[i64; 2]; 2] = [[1, 0], [0, 1]];

fn sign(n: usize) -> i64 {
    if n % 2 == 1 {
        -1
    } else {
        1
    }
}

/// `d_n : P_n → P_{n-1}` on `A^e = A ⊗ A`, `n ≥ 1`.
fn resolution_differential(n: usize) -> Vec<Vec<i64>> {
    let left = kron(&X, &ONE);
    let right = kron(&ONE, &X);
    let s = sign(n);
    left.iter().zip(&right).map(|(l, r)| l.iter().zip(r).map(|(a, b)| a + s * b).collect()).collect()
}

/// The induced map on `A ⊗_{A^e} P_n ≅ A`: `a ↦ x a ± a x`.
fn coinvariant_differential(n: usize) -> Vec<Vec<i64>> {
    let s = sign(n);
    (0..2).map(|i| (0..2).map(|j| X[i][j] + s * X[i][j]).collect()).collect()
}

/// Checks that the resolution is exact in degrees `1..top` and has
/// `H_0 = A`, so the dimensions below are those of Hochschild theory.
pub fn resolution_is_exact(characteristic: u64, top: usize) -> bool {
    let p = modulus(characteristic);
    let augmentation_rank = 2;
    let mut ok = 4 - rank(resolution_differential(1), p) == augmentation_rank;
    for n in 1..top {
        ok &= 4 - rank(resolution_differential(n), p) == rank(resolution_differential(n + 1), p);
    }
    ok
}

fn ranks(characteristic: u64, top: usize) -> Vec<usize> {
    let p = modulus(characteristic);
    (0..=top + 1).map(|n| if n == 0 { 0 } else { rank(coinvariant_differential(n), p) }).collect()
}

/// `dim HH_n(A, A)` for `n < top`.
pub fn homology_dims(characteristic: u64, top: usize) -> Vec<usize> {
    let r = ranks(characteristic, top);
    (0..top).map(|n| 2 - r[n] - r[n + 1]).collect()
}

/// `dim HH^n(A, A)` for `n < top`, from `Hom_{A^e}(P_n, A) ≅ A` with the
/// transposed maps, which have the same ranks.
pub fn cohomology_dims(characteristic: u64, top: usize) -> Vec<usize> {
    let p = modulus(characteristic);
    let r: Vec<usize> = (0..=top)
        .map(|n| {
            if n == 0 {
                return 0;
            }
            let d = coinvariant_differential(n);
            let t: Vec<Vec<i64>> = (0..2).map(|i| (0..2).map(|j| d[j][i]).collect()).collect();
            rank(t, p)
        })
        .collect();
    (0..top).map(|n| 2 - r[n] - r[n + 1]).collect()
}
