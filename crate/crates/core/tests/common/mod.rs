//! Independent reference computations for the integration tests.
//!
//! Every value in the theory is a dyadic rational with a small exponent, so
//! `f64` arithmetic here is exact.
#![allow(dead_code)]

use prbox::{Dyadic, GptTensor};

/// Extremal effects `b^(0..3)`.
pub const B: [[f64; 3]; 4] = [[0.5, 0.5, 0.5], [-0.5, 0.5, 0.5], [-0.5, -0.5, 0.5], [0.5, -0.5, 0.5]];

/// Pure single-site states `ω0..ω3`.
pub const OMEGA: [[f64; 3]; 4] = [[1.0, 0.0, 1.0], [0.0, -1.0, 1.0], [-1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];

/// Upper-left 2x2 blocks of `Ω16..Ω23`, in halves.
pub const NONLOCAL_BLOCKS: [[[f64; 2]; 2]; 8] = [
    [[-1.0, 1.0], [1.0, 1.0]],
    [[-1.0, -1.0], [-1.0, 1.0]],
    [[1.0, -1.0], [-1.0, -1.0]],
    [[-1.0, 1.0], [-1.0, -1.0]],
    [[-1.0, -1.0], [1.0, -1.0]],
    [[1.0, -1.0], [1.0, 1.0]],
    [[1.0, 1.0], [-1.0, 1.0]],
    [[1.0, 1.0], [1.0, -1.0]],
];

/// Standard convention: `x=0: (b0, b2)`, `x=1: (b3, b1)`.
pub const STANDARD: [[usize; 2]; 2] = [[0, 2], [3, 1]];
/// Input roles swapped: `x=0: (b3, b1)`, `x=1: (b0, b2)`.
pub const SWAPPED: [[usize; 2]; 2] = [[3, 1], [0, 2]];

pub fn f(d: Dyadic) -> f64 {
    d.to_f64()
}

pub fn vals(t: &GptTensor) -> Vec<f64> {
    t.entries().iter().map(|d| d.to_f64()).collect()
}

/// Flat 9-vector of a non-local state from its block.
pub fn nonlocal(n: usize) -> Vec<f64> {
    let b = NONLOCAL_BLOCKS[n - 16];
    vec![b[0][0] / 2.0, b[0][1] / 2.0, 0.0, b[1][0] / 2.0, b[1][1] / 2.0, 0.0, 0.0, 0.0, 1.0]
}

pub fn product(parts: &[[f64; 3]]) -> Vec<f64> {
    let mut out = vec![1.0];
    for p in parts {
        out = out.iter().flat_map(|v| p.iter().map(move |w| v * w)).collect();
    }
    out
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn digits(mut flat: usize, n: usize) -> Vec<usize> {
    let mut d = vec![0; n];
    for slot in d.iter_mut().rev() {
        *slot = flat % 3;
        flat /= 3;
    }
    d
}

pub fn bit(packed: usize, k: usize, n: usize) -> usize {
    (packed >> (n - 1 - k)) & 1
}

/// `P(a|x)` of an `n`-party state under `conv`, indexed `(x << n) | a`.
pub fn table_of(state: &[f64], n: usize, conv: [[usize; 2]; 2]) -> Vec<f64> {
    let m = 1 << n;
    let mut out = vec![0.0; m * m];
    for x in 0..m {
        for a in 0..m {
            let parts: Vec<[f64; 3]> = (0..n).map(|k| B[conv[bit(x, k, n)][bit(a, k, n)]]).collect();
            out[(x << n) | a] = dot(&product(&parts), state);
        }
    }
    out
}

pub fn rule_table(n: usize, p: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let m = 1 << n;
    (0..m * m).map(|i| p(i >> n, i & (m - 1))).collect()
}

pub fn parity(v: usize) -> usize {
    v.count_ones() as usize & 1
}

/// `p_{αβγ}`: ½ on `a ⊕ b = xy ⊕ αx ⊕ βy ⊕ γ`.
pub fn pr_table(alpha: usize, beta: usize, gamma: usize) -> Vec<f64> {
    rule_table(2, |xy, ab| {
        let (x, y) = (xy >> 1, xy & 1);
        if parity(ab) == (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma {
            0.5
        } else {
            0.0
        }
    })
}

/// Contract `e = (0, 0, 1)` on every party not in `keep`.
pub fn marginal(state: &[f64], n: usize, keep: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; 3usize.pow(keep.len() as u32)];
    for (flat, v) in state.iter().enumerate() {
        let d = digits(flat, n);
        if (0..n).any(|k| !keep.contains(&k) && d[k] != 2) {
            continue;
        }
        let idx = keep.iter().fold(0, |acc, &k| acc * 3 + d[k]);
        out[idx] += v;
    }
    out
}

pub fn mu(n: usize) -> Vec<f64> {
    product(&vec![[0.0, 0.0, 1.0]; n])
}

pub fn count_11_odd(bits: &[u8]) -> usize {
    (0..bits.len() / 2).filter(|i| bits[2 * i] == 1 && bits[2 * i + 1] == 1).count()
}
