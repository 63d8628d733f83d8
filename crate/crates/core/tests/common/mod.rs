//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! library's own square detection, canonicalization or length arithmetic.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::RngExt;

/// Every (1-based index, period) with `w[i..i+p] == w[i+p..i+2p]`.
pub fn naive_squares(w: &[u8]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for i in 0..w.len() {
        for p in 1..=(w.len() - i) / 2 {
            if (0..p).all(|t| w[i + t] == w[i + p + t]) {
                out.insert((i + 1, p));
            }
        }
    }
    out
}

pub fn naive_square_free(w: &[u8]) -> bool {
    naive_squares(w).is_empty()
}

/// Binary word whose squares are all among 00, 11 and 0101.
pub fn naive_fs(w: &[u8]) -> bool {
    naive_squares(w).into_iter().all(|(i, p)| {
        let root = &w[i - 1..i - 1 + p];
        p == 1 || root == [0, 1]
    })
}

pub fn rotations(w: &[u8]) -> Vec<Vec<u8>> {
    if w.is_empty() {
        return vec![Vec::new()];
    }
    (0..w.len())
        .map(|s| w[s..].iter().chain(&w[..s]).copied().collect())
        .collect()
}

pub fn naive_least_rotation(w: &[u8]) -> Vec<u8> {
    rotations(w).into_iter().min().unwrap()
}

pub fn naive_circular_fs(w: &[u8]) -> bool {
    rotations(w).iter().all(|r| naive_fs(r))
}

pub fn naive_circular_square_free(w: &[u8]) -> bool {
    rotations(w).iter().all(|r| naive_square_free(r))
}

/// `bits` as a word of the given length, most significant bit first.
pub fn bits_to_word(bits: u64, len: usize) -> Vec<u8> {
    (0..len).rev().map(|b| ((bits >> b) & 1) as u8).collect()
}

pub fn ascii(w: &[u8], letters: &[u8]) -> String {
    w.iter().map(|&s| letters[s as usize] as char).collect()
}

/// Uniform-ish random square-free word of exactly `len` symbols over an
/// alphabet of size `k`, built by random extension with restart.
pub fn random_square_free(rng: &mut StdRng, k: u8, len: usize) -> Vec<u8> {
    'restart: loop {
        let mut w: Vec<u8> = Vec::with_capacity(len);
        while w.len() < len {
            let start = rng.random_range(0..k);
            let mut placed = false;
            for offset in 0..k {
                w.push((start + offset) % k);
                if suffix_square_free(&w) {
                    placed = true;
                    break;
                }
                w.pop();
            }
            if !placed {
                continue 'restart;
            }
        }
        return w;
    }
}

fn suffix_square_free(w: &[u8]) -> bool {
    let n = w.len();
    (1..=n / 2).all(|p| w[n - 2 * p..n - p] != w[n - p..])
}

/// Random circular square-free word over an alphabet of size `k`, by
/// rejection sampling on linear square-free words.
pub fn random_circular_square_free(rng: &mut StdRng, k: u8, len: usize) -> Vec<u8> {
    loop {
        let w = random_square_free(rng, k, len);
        if naive_circular_square_free(&w) {
            return w;
        }
    }
}

/// All square-free words of length `len` over `k` letters.
pub fn all_square_free(k: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut w = Vec::new();
    fn go(k: u8, len: usize, w: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if w.len() == len {
            out.push(w.clone());
            return;
        }
        for x in 0..k {
            w.push(x);
            if suffix_square_free(w) {
                go(k, len, w, out);
            }
            w.pop();
        }
    }
    go(k, len, &mut w, &mut out);
    out
}

/// Lengths in `1..max` not produced by any image-length assignment, computed
/// directly from the two length formulas with the given set of excluded
/// ternary lengths.
pub fn naive_knockout(image_lengths: &[[usize; 4]], max: usize, excluded: &[i64]) -> BTreeSet<usize> {
    let mut hit = vec![false; max];
    for lengths in image_lengths {
        let mut order = *lengths;
        for_each_permutation(&mut order, 0, &mut |p| {
            let [al, be, ga, de] = p.map(|x| x as i64);
            let base = al + be + ga;
            let shortest = p.iter().min().copied().unwrap() as i64;
            // every built word has 3i+j >= 3i-1 letters, each image at least `shortest` long
            for i in 1.. {
                if (3 * i - 1) * shortest >= max as i64 {
                    break;
                }
                for j in -1..=1i64 {
                    if excluded.contains(&(3 * i + j)) {
                        continue;
                    }
                    for k in 0..=(i + j) {
                        let m = base * i + al * j + k * (de - al);
                        if m > 0 && (m as usize) < max {
                            hit[m as usize] = true;
                        }
                    }
                    for k in 0..=i {
                        let m = base * i + al * j + k * (de - be);
                        if m > 0 && (m as usize) < max {
                            hit[m as usize] = true;
                        }
                    }
                }
            }
        });
    }
    (1..max).filter(|&m| !hit[m]).collect()
}

fn for_each_permutation(v: &mut [usize; 4], at: usize, f: &mut impl FnMut([usize; 4])) {
    if at == 4 {
        f(*v);
        return;
    }
    for i in at..4 {
        v.swap(at, i);
        for_each_permutation(v, at + 1, f);
        v.swap(at, i);
    }
}

/// Reference list of lengths below 7400 left over by the knockout.
pub fn reference_leftover() -> BTreeSet<usize> {
    (1..=53)
        .chain(55..=59)
        .chain([61])
        .chain(63..=65)
        .chain(69..=71)
        .chain([73, 77, 116, 127, 232, 241, 253])
        .collect()
}

pub const FORBIDDEN: [usize; 33] = [
    9, 10, 11, 13, 15, 16, 17, 18, 21, 22, 23, 25, 26, 27, 29, 31, 32, 33, 34, 35, 37, 40, 41, 42, 45, 47,
    49, 53, 56, 59, 61, 64, 73,
];
