//! A fixed bijective enumeration of `N^h` built from Cantor pairing, nested
//! on the tail: tuple `i` is `(a, rest)` with `(a, r) = unpair(i)` and
//! `rest` the tuple `r` of length `h - 1`. Index 0 is `(0, .., 0)`.

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

/// Cantor pairing; monotone in both arguments.
pub fn pair(x: u64, y: u64) -> u64 {
    let s = x + y;
    s * (s + 1) / 2 + y
}

pub fn unpair(z: u64) -> (u64, u64) {
    let w = (isqrt(8 * z + 1) - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = z - t;
    (w - y, y)
}

/// The `i`-th tuple of length `h` (`h >= 1`).
pub fn next_tuple(i: u64, h: usize) -> Vec<u64> {
    assert!(h >= 1, "tuples have length at least one");
    let mut out = Vec::with_capacity(h);
    let mut rest = i;
    for _ in 1..h {
        let (a, r) = unpair(rest);
        out.push(a);
        rest = r;
    }
    out.push(rest);
    out
}

/// Inverse of [`next_tuple`].
pub fn index_of(tuple: &[u64]) -> u64 {
    let (last, init) = tuple.split_last().expect("nonempty tuple");
    init.iter().rev().fold(*last, |acc, &a| pair(a, acc))
}

/// Every tuple of `[0, bound]^h` has an index below this value.
pub fn box_index_bound(bound: u64, h: usize) -> u64 {
    index_of(&vec![bound; h]) + 1
}
