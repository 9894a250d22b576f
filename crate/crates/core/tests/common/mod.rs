//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here is written from the definitions, one weight column at a
//! time, with plain machine integers. It shares no code with the library.

#![allow(
    dead_code,
    clippy::int_plus_one,
    clippy::manual_div_ceil,
    clippy::manual_clamp,
    clippy::too_many_arguments
)]

/// Position of a point in the weight tables: 0 for 1, 1 for even, 2 for odd ≥ 3.
fn kind(x: u64) -> usize {
    if x == 1 {
        0
    } else if x % 2 == 0 {
        1
    } else {
        2
    }
}

pub fn c(x: u64) -> u64 {
    if x % 2 == 0 {
        x / 2
    } else {
        3 * x + 1
    }
}

pub fn t(x: u64) -> u64 {
    if x == 1 {
        1
    } else if x % 2 == 0 {
        x / 2
    } else {
        (3 * x + 1) / 2
    }
}

fn d2(a: u64, b: u64) -> i64 {
    let d = a as i64 - b as i64;
    d * d
}

fn beta0(k: i64, l: i64) -> i64 {
    if k - l <= -2 {
        -2
    } else if k - l >= 2 {
        2
    } else {
        k - l
    }
}

fn lower_gated(k: i64, l: i64) -> bool {
    k - l <= -2 && 11 * k - 10 * l + 1 <= 0
}

fn upper_gated(k: i64, l: i64) -> bool {
    k - l >= 2 && -10 * k + 11 * l + 1 <= 0
}

fn delta0(k: i64, l: i64) -> i64 {
    if lower_gated(k, l) || upper_gated(k, l) {
        -2
    } else {
        -1
    }
}

fn eps0(k: i64, l: i64) -> i64 {
    if lower_gated(k, l) {
        2
    } else {
        0
    }
}

fn zeta0(k: i64, l: i64) -> i64 {
    if upper_gated(k, l) {
        2
    } else {
        0
    }
}

/// `(α, β, γ, δ, ε, ζ)` at `(x, y)`.
pub fn weights(x: u64, y: u64) -> [i64; 6] {
    // Rows: kind of x; columns: kind of y. Odd-odd entries are filled below.
    const ALPHA: [[i64; 3]; 3] = [[1, 1, 0], [1, 1, 0], [1, 0, 2]];
    const BETA: [[i64; 3]; 3] = [[0, 0, 0], [0, 0, 0], [0, -2, 0]];
    const GAMMA: [[i64; 3]; 3] = [[0, 0, 0], [1, -1, -2], [-1, 0, 0]];
    const DELTA: [[i64; 3]; 3] = [[0, -1, -2], [-1, 0, 1], [-1, 1, 0]];
    const EPS: [[i64; 3]; 3] = [[-1, 0, 1], [0, -1, -2], [0, 2, 0]];
    const ZETA: [[i64; 3]; 3] = [[1, 1, 2], [1, 1, 2], [1, -2, 0]];
    let (i, j) = (kind(x), kind(y));
    if i == 2 && j == 2 {
        let (k, l) = ((x / 2) as i64, (y / 2) as i64);
        let b = beta0(k, l);
        return [2, b, -b, delta0(k, l), eps0(k, l), zeta0(k, l)];
    }
    [ALPHA[i][j], BETA[i][j], GAMMA[i][j], DELTA[i][j], EPS[i][j], ZETA[i][j]]
}

/// `d(Tx,Ty)², d(x,Ty)², d(Tx,y)², d(x,y)², d(x,Tx)², d(y,Ty)²`.
pub fn distances(x: u64, y: u64) -> [i64; 6] {
    let (tx, ty) = (t(x), t(y));
    [d2(tx, ty), d2(x, ty), d2(tx, y), d2(x, y), d2(x, tx), d2(y, ty)]
}

pub fn lhs(x: u64, y: u64) -> i64 {
    let w = weights(x, y);
    let d = distances(x, y);
    (0..6).map(|i| w[i] * d[i]).sum()
}

/// The weights at `(y, x)` with β↔γ and ε↔ζ exchanged.
fn swapped(x: u64, y: u64) -> [i64; 6] {
    let [a, b, g, d, e, z] = weights(y, x);
    [a, g, b, d, z, e]
}

/// `q ·` symmetrized weights at `(x, y)` for the constant `λ = p/q`.
pub fn sym_scaled(x: u64, y: u64, p: i64, q: i64) -> [i64; 6] {
    let own = weights(x, y);
    let other = swapped(x, y);
    let mut out = [0; 6];
    for i in 0..6 {
        out[i] = (q - p) * own[i] + p * other[i];
    }
    out
}

/// `q ·` symmetrized left-hand side at `(x, y)` for `λ = p/q`.
pub fn sym_lhs_scaled(x: u64, y: u64, p: i64, q: i64) -> i64 {
    let w = sym_scaled(x, y, p, q);
    let d = distances(x, y);
    (0..6).map(|i| w[i] * d[i]).sum()
}

/// Condition (5) with B-sum and M checks, constant `λ = p/q`, `A = an/ad`, integer `B` and `M`
/// (`M` applied to the raw weights at both orientations).
pub fn fixed_point_condition(x: u64, y: u64, p: i64, q: i64, an: i64, ad: i64, b: i64, m: i64) -> bool {
    let s = sym_scaled(x, y, p, q);
    let [a1, b1, _, d1, e1, z1] = s;
    let mass = a1 + z1 + 2 * b1.min(0);
    let drift = d1 + e1 + 2 * b1.min(0);
    let first = mass > 0 && -drift * ad <= an * mass && a1 + b1 + z1 >= b * q;

    let s = sym_scaled(y, x, p, q);
    let [a2, _, g2, d2, e2, z2] = s;
    let mass = a2 + e2 + 2 * g2.min(0);
    let drift = d2 + z2 + 2 * g2.min(0);
    let mirrored = mass > 0 && -drift * ad <= an * mass && a2 + g2 + e2 >= b * q;

    let bounded = weights(x, y).iter().chain(weights(y, x).iter()).all(|w| w.abs() <= m);
    (first || mirrored) && bounded
}

/// Steps for the Collatz map to reach 1, if within `cap`.
pub fn c_steps(seed: u64, cap: u64) -> Option<u64> {
    let mut x = seed;
    for n in 1..=cap {
        x = c(x);
        if x == 1 {
            return Some(n);
        }
    }
    None
}
