//! The Picard lattice `Z^{1,7}` of a degree-2 del Pezzo surface.
//!
//! Coordinates are `(x0, x1, ..., x7)` for the class `x0 h + sum xi ei`, with
//! `h^2 = 1`, `ei^2 = -1` and all other products zero. The canonical class is
//! `K = -3h + sum ei`, so `K^2 = 2`.

use std::sync::OnceLock;

pub const RANK: usize = 8;

pub type Class = [i64; RANK];

pub const K: Class = [-3, 1, 1, 1, 1, 1, 1, 1];

pub const ROOT_COUNT: usize = 126;
pub const LINE_COUNT: usize = 56;

pub fn intersect(a: &Class, b: &Class) -> i64 {
    a[0] * b[0] - (1..RANK).map(|i| a[i] * b[i]).sum::<i64>()
}

pub fn is_root(r: &Class) -> bool {
    intersect(r, r) == -2 && intersect(r, &K) == 0
}

pub fn is_line(l: &Class) -> bool {
    intersect(l, l) == -1 && intersect(l, &K) == -1
}

/// Reflection in a root: `d + (d.r) r`. Fixes `K` and preserves the form.
pub fn reflect(d: &Class, r: &Class) -> Class {
    debug_assert!(is_root(r));
    let t = intersect(d, r);
    std::array::from_fn(|i| d[i] + t * r[i])
}

pub fn add(a: &Class, b: &Class) -> Class {
    std::array::from_fn(|i| a[i] + b[i])
}

pub fn neg(a: &Class) -> Class {
    std::array::from_fn(|i| -a[i])
}

/// Basis vector `h` (index 0) or `ei` (index i).
pub fn basis(i: usize) -> Class {
    let mut c = [0; RANK];
    c[i] = 1;
    c
}

/// Solutions of `x^2 = self_int`, `x.K = k_deg`, found by a bounded search.
///
/// With `s = sum xi = -(k_deg + 3 x0)` and `sum xi^2 = x0^2 - self_int`,
/// Cauchy-Schwarz `s^2 <= 7 sum xi^2` bounds `x0`, and `xi^2 <= x0^2 - self_int`
/// bounds each remaining coordinate.
fn solve_quadric(self_int: i64, k_deg: i64) -> Vec<Class> {
    let mut out = Vec::new();
    for x0 in -10i64..=10 {
        let s = -(k_deg + 3 * x0);
        let sq = x0 * x0 - self_int;
        if sq < 0 || s * s > 7 * sq {
            continue;
        }
        let bound = (sq as f64).sqrt().floor() as i64;
        let mut cur = [0i64; RANK];
        cur[0] = x0;
        search_tail(&mut cur, 1, s, sq, bound, &mut out);
    }
    out.sort();
    out
}

fn search_tail(cur: &mut Class, i: usize, sum_left: i64, sq_left: i64, bound: i64, out: &mut Vec<Class>) {
    if i == RANK {
        if sum_left == 0 && sq_left == 0 {
            out.push(*cur);
        }
        return;
    }
    let rem = (RANK - i) as i64;
    for x in -bound..=bound {
        let sq = sq_left - x * x;
        let s = sum_left - x;
        // Remaining coordinates must satisfy s^2 <= (rem - 1) sq.
        if sq < 0 || s * s > (rem - 1) * sq {
            continue;
        }
        cur[i] = x;
        search_tail(cur, i + 1, s, sq, bound, out);
    }
    cur[i] = 0;
}

/// All 126 roots, sorted lexicographically by coordinates.
pub fn roots() -> &'static [Class] {
    static R: OnceLock<Vec<Class>> = OnceLock::new();
    R.get_or_init(|| {
        let r = solve_quadric(-2, 0);
        assert_eq!(r.len(), ROOT_COUNT);
        r
    })
}

/// All 56 line classes, sorted lexicographically by coordinates.
pub fn line_classes() -> &'static [Class] {
    static L: OnceLock<Vec<Class>> = OnceLock::new();
    L.get_or_init(|| {
        let l = solve_quadric(-1, -1);
        assert_eq!(l.len(), LINE_COUNT);
        l
    })
}

/// All 126 conic classes (`f^2 = 0`, `f.K = -2`), sorted.
pub fn conic_classes() -> &'static [Class] {
    static C: OnceLock<Vec<Class>> = OnceLock::new();
    C.get_or_init(|| solve_quadric(0, -2))
}

pub fn root_index(r: &Class) -> Option<usize> {
    roots().binary_search(r).ok()
}

/// Observed values of `l.r` over all lines and roots, sorted.
pub fn line_root_pairing_range() -> Vec<i64> {
    let mut vals: Vec<i64> = line_classes()
        .iter()
        .flat_map(|l| roots().iter().map(move |r| intersect(l, r)))
        .collect();
    vals.sort();
    vals.dedup();
    vals
}

pub fn fmt_class(c: &Class) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_class_square() {
        assert_eq!(intersect(&K, &K), 2);
    }

    #[test]
    fn reflection_examples() {
        let e = |i| basis(i);
        let r = add(&e(1), &neg(&e(2)));
        assert_eq!(reflect(&e(1), &r), e(2));
        assert_eq!(reflect(&K, &r), K);
        assert_eq!(reflect(&r, &r), neg(&r));
    }

    #[test]
    fn membership_examples() {
        let e = |i| basis(i);
        assert!(is_root(&add(&e(1), &neg(&e(2)))));
        assert!(is_line(&[1, -1, -1, 0, 0, 0, 0, 0]));
        assert!(is_line(&e(7)));
        assert!(!is_line(&e(0)));
    }

    #[test]
    fn conics_are_anticanonical_minus_roots() {
        let mut from_roots: Vec<Class> = roots()
            .iter()
            .map(|r| std::array::from_fn(|i| -K[i] - r[i]))
            .collect();
        from_roots.sort();
        assert_eq!(from_roots, conic_classes());
    }
}
