#![allow(dead_code)]

use rand::Rng;
use tpp_core::{build_group, Elem, Group, Subset, TppTriple};

/// Built-in groups of order at most 8, excluding the trivial group.
pub const BUILTIN_UP_TO_8: &[&str] = &[
    "cyc:2",
    "cyc:3",
    "cyc:4",
    "cyc:5",
    "cyc:6",
    "cyc:7",
    "cyc:8",
    "dih:1",
    "dih:2",
    "dih:3",
    "dih:4",
    "sym:2",
    "sym:3",
    "prod:(cyc:2,cyc:2)",
    "prod:(cyc:2,cyc:3)",
    "prod:(cyc:2,cyc:4)",
    "prod:(cyc:2,cyc:2,cyc:2)",
];

/// Built-in groups of order at most 6, including the trivial group.
pub const BUILTIN_UP_TO_6: &[&str] = &[
    "cyc:1",
    "sym:1",
    "cyc:2",
    "cyc:3",
    "cyc:4",
    "cyc:5",
    "cyc:6",
    "dih:1",
    "dih:2",
    "dih:3",
    "sym:2",
    "sym:3",
    "prod:(cyc:2,cyc:2)",
    "prod:(cyc:2,cyc:3)",
];

pub fn group(spec: &str) -> Group {
    build_group(spec).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

/// Scans every sextuple for `s1 s2^-1 t1 t2^-1 u1 u2^-1 = 1` with some pair
/// distinct. Shares no code with the library checkers.
pub fn oracle_tpp(g: &Group, s: &[Elem], t: &[Elem], u: &[Elem]) -> bool {
    for &s1 in s {
        for &s2 in s {
            let a = g.mul(s1, g.inv(s2));
            for &t1 in t {
                for &t2 in t {
                    let b = g.mul(a, g.mul(t1, g.inv(t2)));
                    for &u1 in u {
                        for &u2 in u {
                            let c = g.mul(b, g.mul(u1, g.inv(u2)));
                            if c == 0 && (s1 != s2 || t1 != t2 || u1 != u2) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Element ids selected by the bits of `mask`.
pub fn mask_ids(mask: u64) -> Vec<Elem> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i as Elem).collect()
}

/// Nonempty subsets of an order-`n` group with at most `max_size` elements.
pub fn subsets_up_to(n: usize, max_size: usize) -> Vec<Vec<Elem>> {
    (1u64..1 << n)
        .filter(|m| m.count_ones() as usize <= max_size)
        .map(mask_ids)
        .collect()
}

pub fn triple(g: &Group, s: &[Elem], t: &[Elem], u: &[Elem]) -> TppTriple {
    TppTriple::from_ids(g, s, t, u).expect("valid triple")
}

pub fn random_subset<R: Rng>(rng: &mut R, g: &Group, max_size: usize) -> Subset {
    let n = g.order();
    let k = rng.gen_range(1..=max_size.min(n));
    let ids = rand::seq::index::sample(rng, n, k).into_iter().map(|i| i as Elem);
    Subset::new(g, ids).expect("distinct in-range ids")
}

pub fn random_triple<R: Rng>(rng: &mut R, g: &Group, max_size: usize) -> TppTriple {
    TppTriple::new(
        random_subset(rng, g, max_size),
        random_subset(rng, g, max_size),
        random_subset(rng, g, max_size),
    )
}
