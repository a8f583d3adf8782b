//! Test semigroups: every associative table of small order, named families,
//! and seeded samples of transformation semigroups.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semigroup::{validate_table, FiniteSemigroup};

fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> FiniteSemigroup {
    let rows = (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect();
    validate_table(rows).expect("family table is associative")
}

/// `(Z_n, +)`.
pub fn cyclic_group(n: usize) -> FiniteSemigroup {
    from_fn(n, |a, b| (a + b) % n)
}

/// `(Z_m, ·)`.
pub fn multiplicative_mod(m: usize) -> FiniteSemigroup {
    from_fn(m, |a, b| (a * b) % m)
}

/// `x y = x`.
pub fn left_zero(n: usize) -> FiniteSemigroup {
    from_fn(n, |a, _| a)
}

/// `x y = y`.
pub fn right_zero(n: usize) -> FiniteSemigroup {
    from_fn(n, |_, b| b)
}

/// Null semigroup: every product is the zero element `0`.
pub fn null_with_zero(n: usize) -> FiniteSemigroup {
    from_fn(n, |_, _| 0)
}

/// `({0..n-1}, max)`, a chain of idempotents.
pub fn max_semilattice(n: usize) -> FiniteSemigroup {
    from_fn(n, |a, b| a.max(b))
}

/// Every associative table on `0..n`, found by filtering all `n^(n^2)`
/// magmas. Labelled, so isomorphic copies are all included.
pub fn all_of_order(n: usize) -> Vec<FiniteSemigroup> {
    assert!(
        (1..=3).contains(&n),
        "exhaustive generation only for orders 1..=3"
    );
    let cells = n * n;
    let total = n.pow(cells as u32);
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut flat = vec![0; cells];
        for slot in flat.iter_mut() {
            *slot = code % n;
            code /= n;
        }
        let rows = flat.chunks(n).map(<[usize]>::to_vec).collect();
        if let Ok(s) = validate_table(rows) {
            out.push(s);
        }
    }
    out
}

/// Named families of every order in `1..=max_order`.
pub fn named_families(max_order: usize) -> Vec<(String, FiniteSemigroup)> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        out.push((format!("Z{n}+"), cyclic_group(n)));
        out.push((format!("Z{n}*"), multiplicative_mod(n)));
        out.push((format!("left-zero-{n}"), left_zero(n)));
        out.push((format!("right-zero-{n}"), right_zero(n)));
        out.push((format!("null-{n}"), null_with_zero(n)));
        out.push((format!("max-chain-{n}"), max_semilattice(n)));
    }
    out
}

type Map = Vec<u8>;

fn compose(f: &Map, g: &Map) -> Map {
    // apply f, then g
    f.iter().map(|&x| g[x as usize]).collect()
}

/// The subsemigroup of the full transformation monoid on `points` points
/// generated by `gens`, with elements numbered in discovery order.
pub fn transformation_semigroup(gens: &[Map]) -> FiniteSemigroup {
    let mut elems: Vec<Map> = Vec::new();
    let mut index: HashMap<Map, usize> = HashMap::new();
    for g in gens {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
    }
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = compose(&elems[i], g);
            if !index.contains_key(&h) {
                index.insert(h.clone(), elems.len());
                elems.push(h);
            }
        }
        i += 1;
    }
    let n = elems.len();
    from_fn(n, |a, b| index[&compose(&elems[a], &elems[b])])
}

/// `count` seeded transformation semigroups with order in `min..=max`.
pub fn random_transformation_sample(
    seed: u64,
    count: usize,
    min: usize,
    max: usize,
) -> Vec<FiniteSemigroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        assert!(
            attempts < 1_000_000,
            "could not sample {count} semigroups of order {min}..={max}"
        );
        let points = rng.gen_range(2..=4u8);
        let ngens = rng.gen_range(1..=2);
        let gens: Vec<Map> = (0..ngens)
            .map(|_| (0..points).map(|_| rng.gen_range(0..points)).collect())
            .collect();
        let s = transformation_semigroup(&gens);
        if (min..=max).contains(&s.order()) {
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labelled_counts() {
        // labelled associative binary operations on 1, 2, 3 points
        assert_eq!(all_of_order(1).len(), 1);
        assert_eq!(all_of_order(2).len(), 8);
        assert_eq!(all_of_order(3).len(), 113);
    }

    #[test]
    fn sample_is_deterministic_and_sized() {
        let a = random_transformation_sample(7, 10, 4, 6);
        let b = random_transformation_sample(7, 10, 4, 6);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| (4..=6).contains(&s.order())));
    }

    #[test]
    fn transformation_closure() {
        // a 3-cycle generates Z3
        let s = transformation_semigroup(&[vec![1, 2, 0]]);
        assert_eq!(s.order(), 3);
        // a constant map is a single idempotent
        let s = transformation_semigroup(&[vec![0, 0]]);
        assert_eq!(s.order(), 1);
    }
}
