//! Root and line classes against two independent oracles: a brute-force
//! search over a box of integer vectors and the classical closed-form lists.

use dp2_delta::lattice::{self, Class, RANK};
use std::collections::BTreeSet;

fn form(a: &[i64; 8], b: &[i64; 8]) -> i64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

const KC: [i64; 8] = [-3, 1, 1, 1, 1, 1, 1, 1];

/// Every vector in `[-5,5] x [-3,3]^7` with the given square and degree.
fn brute_force(square: i64, degree: i64) -> BTreeSet<[i64; 8]> {
    let mut out = BTreeSet::new();
    let mut x = [0i64; 8];
    for x0 in -5..=5 {
        x[0] = x0;
        let mut idx = [0usize; 7];
        loop {
            for i in 0..7 {
                x[i + 1] = idx[i] as i64 - 3;
            }
            if form(&x, &x) == square && form(&x, &KC) == degree {
                out.insert(x);
            }
            let mut k = 0;
            while k < 7 {
                idx[k] += 1;
                if idx[k] < 7 {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == 7 {
                break;
            }
        }
    }
    out
}

fn e(i: usize) -> [i64; 8] {
    let mut v = [0; 8];
    v[i] = 1;
    v
}

fn comb(h: i64, minus: &[usize], twice: Option<usize>) -> [i64; 8] {
    let mut v = [0; 8];
    v[0] = h;
    for &i in minus {
        v[i] -= 1;
    }
    if let Some(i) = twice {
        v[i] -= 1;
    }
    v
}

fn subsets(k: usize) -> Vec<Vec<usize>> {
    (0u32..128)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (1..=7).filter(|i| m & (1 << (i - 1)) != 0).collect())
        .collect()
}

fn closed_form_roots() -> BTreeSet<[i64; 8]> {
    let mut s = BTreeSet::new();
    for i in 1..=7 {
        for j in 1..=7 {
            if i != j {
                let mut v = e(i);
                v[j] = -1;
                s.insert(v);
            }
        }
    }
    for (k, h) in [(3, 1), (6, 2)] {
        for sub in subsets(k) {
            let v = comb(h, &sub, None);
            s.insert(v);
            s.insert(v.map(|x| -x));
        }
    }
    s
}

fn closed_form_lines() -> BTreeSet<[i64; 8]> {
    let mut s: BTreeSet<[i64; 8]> = (1..=7).map(e).collect();
    for sub in subsets(2) {
        s.insert(comb(1, &sub, None));
    }
    for sub in subsets(5) {
        s.insert(comb(2, &sub, None));
    }
    let all: Vec<usize> = (1..=7).collect();
    for i in 1..=7 {
        s.insert(comb(3, &all, Some(i)));
    }
    s
}

fn library(classes: &[Class]) -> BTreeSet<[i64; 8]> {
    assert_eq!(RANK, 8);
    classes.iter().copied().collect()
}

#[test]
fn roots_match_brute_force() {
    let bf = brute_force(-2, 0);
    assert_eq!(bf.len(), 126);
    // The box is strictly larger than every solution, so none was cut off.
    assert!(bf.iter().all(|v| v[0].abs() <= 2 && v[1..].iter().all(|x| x.abs() <= 1)));
    assert_eq!(library(lattice::roots()), bf);
    assert_eq!(closed_form_roots(), bf);
}

#[test]
fn lines_match_brute_force() {
    let bf = brute_force(-1, -1);
    assert_eq!(bf.len(), 56);
    assert!(bf.iter().all(|v| v[0].abs() <= 3 && v[1..].iter().all(|x| x.abs() <= 2)));
    assert_eq!(library(lattice::line_classes()), bf);
    assert_eq!(closed_form_lines(), bf);
}

#[test]
fn conics_match_brute_force() {
    let bf = brute_force(0, -2);
    assert_eq!(bf.len(), 126);
    assert_eq!(library(lattice::conic_classes()), bf);
}
