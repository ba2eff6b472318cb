//! Independent reference implementations used across the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use hinv::{Hyperlattice, Hypertuple, SegreChar};
use itertools::Itertools;

pub fn alpha(s: &str) -> SegreChar {
    s.parse().unwrap()
}

pub fn tuple(s: &str) -> Hypertuple {
    s.parse().unwrap()
}

pub fn lattice(s: &str) -> Hyperlattice {
    hinv::hyperlattice::enumerate(&alpha(s)).unwrap()
}

/// Membership straight from the defining inequalities.
pub fn is_member(a: &[u32], u: &[u32]) -> bool {
    let r = a.len();
    if u.len() != r || u.iter().zip(a).any(|(x, y)| x > y) {
        return false;
    }
    (0..r.saturating_sub(1)).all(|i| u[i] >= u[i + 1] && a[i] - u[i] >= a[i + 1] - u[i + 1])
}

/// Every tuple of the box `[0, α₁]^r` that satisfies the inequalities.
pub fn brute_members(a: &SegreChar) -> BTreeSet<Vec<u32>> {
    let parts = a.parts();
    (0..parts.len())
        .map(|_| 0..=parts[0])
        .multi_cartesian_product()
        .filter(|u| is_member(parts, u))
        .collect()
}

fn le(u: &[u32], v: &[u32]) -> bool {
    u.iter().zip(v).all(|(x, y)| x <= y)
}

/// Covers `(u, v)`, `v < u` with nothing strictly between, by pairwise search.
pub fn brute_covers(a: &SegreChar) -> BTreeSet<(Vec<u32>, Vec<u32>)> {
    let all: Vec<Vec<u32>> = brute_members(a).into_iter().collect();
    let mut out = BTreeSet::new();
    for u in &all {
        for v in &all {
            if u == v || !le(v, u) {
                continue;
            }
            let between = all.iter().any(|w| w != u && w != v && le(v, w) && le(w, u));
            if !between {
                out.insert((u.clone(), v.clone()));
            }
        }
    }
    out
}

/// Partitions of `n` into distinct parts, by the usual knapsack recurrence.
pub fn distinct_partition_count(n: usize) -> u64 {
    let mut q = vec![0u64; n + 1];
    q[0] = 1;
    for part in 1..=n {
        for m in (part..=n).rev() {
            q[m] += q[m - part];
        }
    }
    q[n]
}

/// Automorphisms counted by permuting each weight level and testing the
/// full order relation. Feasible only for tiny lattices.
pub fn automorphism_count_by_permutation(a: &SegreChar) -> usize {
    let nodes: Vec<Vec<u32>> = brute_members(a).into_iter().collect();
    let mut levels: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, u) in nodes.iter().enumerate() {
        levels.entry(u.iter().sum()).or_default().push(i);
    }
    let levels: Vec<Vec<usize>> = levels.into_values().collect();
    let per_level: Vec<Vec<Vec<usize>>> = levels
        .iter()
        .map(|l| l.iter().copied().permutations(l.len()).collect())
        .collect();
    let mut count = 0;
    for choice in per_level.iter().map(|p| p.iter()).multi_cartesian_product() {
        let mut f = vec![0; nodes.len()];
        for (level, image) in levels.iter().zip(choice) {
            for (&x, &y) in level.iter().zip(image) {
                f[x] = y;
            }
        }
        let ok = (0..nodes.len()).all(|i| {
            (0..nodes.len()).all(|j| le(&nodes[i], &nodes[j]) == le(&nodes[f[i]], &nodes[f[j]]))
        });
        if ok {
            count += 1;
        }
    }
    count
}

fn padded(r: usize, xs: &[u32]) -> Vec<u32> {
    let mut v = xs.to_vec();
    v.resize(r, 0);
    v
}

/// Special chains as stated in closed form, keyed by kind name.
pub fn stated_special(a: &SegreChar) -> BTreeMap<&'static str, Vec<Vec<u32>>> {
    let r = a.len();
    let (a1, a2, a3) = (a.part(1), a.part(2), a.part(3));
    let mut out = BTreeMap::new();
    let c1: Vec<Vec<u32>> = (0..=r).rev().map(|k| padded(r, &vec![1; k])).collect();
    let c2: Vec<Vec<u32>> = (0..=a1 - a2).rev().map(|x| padded(r, &[x])).collect();
    let c3 = {
        let (mut x, mut y) = (a1 - a3, a2 - a3);
        let mut c = vec![padded(r, &[x, y])];
        while (x, y) != (0, 0) {
            if x > y {
                x -= 1
            } else {
                y -= 1
            }
            c.push(padded(r, &[x, y]));
        }
        c
    };
    match (r, a1 - a2) {
        (1, _) => {
            out.insert("C2", c2);
        }
        (2, 1) => {
            out.insert("C3", c3);
        }
        (_, 1) => {
            out.insert("C1", c1);
            out.insert("C3", c3);
        }
        _ => {
            out.insert("C1", c1);
            out.insert("C2", c2);
        }
    }
    out
}

/// Riding chains as listed case by case, keyed by the special chain they
/// ride on. Each value is the set of stated chains.
pub fn stated_riding(a: &SegreChar) -> BTreeMap<&'static str, BTreeSet<Vec<Vec<u32>>>> {
    let r = a.len();
    let (a1, a2, a3) = (a.part(1), a.part(2), a.part(3));
    let z = |xs: &[u32]| padded(r, xs);
    let mut e: BTreeMap<&'static str, BTreeSet<Vec<Vec<u32>>>> = BTreeMap::new();
    let mut put = |k: &'static str, c: Vec<Vec<u32>>| {
        e.entry(k).or_default().insert(c);
    };
    let rc3 = || {
        let mut c = vec![z(&[a1 - a3 + 1, a2 - a3 + 1, 1])];
        let (mut x, mut y) = (a1 - a3, a2 - a3 + 1);
        loop {
            c.push(z(&[x, y, 1]));
            if (x, y) == (1, 1) {
                break;
            }
            if x > y {
                x -= 1
            } else {
                y -= 1
            }
        }
        c
    };
    let tuples = |v: &[&[u32]]| v.iter().map(|t| z(t)).collect::<Vec<_>>();
    match r {
        1 => {}
        2 => {
            if a1 - a2 > 1 {
                if a2 > 1 {
                    put("C1", tuples(&[&[2, 2], &[2, 1], &[2, 0]]));
                } else if a1 != 3 {
                    put("C1", tuples(&[&[2, 1], &[2, 0]]));
                } else {
                    put("C1", tuples(&[&[3, 1], &[2, 1], &[2, 0]]));
                }
                put("C2", (1..=a1 - a2 + 1).rev().map(|k| z(&[k, 1])).collect());
            }
        }
        3 => {
            let g = a2 - a3;
            if a1 - a2 > 1 {
                if g > 1 {
                    put("C1", tuples(&[&[2, 1, 1], &[2, 1, 0], &[2, 0, 0]]));
                } else if a3 >= 2 {
                    put(
                        "C1",
                        tuples(&[&[2, 2, 2], &[2, 2, 1], &[2, 1, 1], &[2, 1, 0], &[2, 0, 0]]),
                    );
                } else {
                    put(
                        "C1",
                        tuples(&[&[2, 2, 1], &[2, 1, 1], &[2, 1, 0], &[2, 0, 0]]),
                    );
                }
                put(
                    "C2",
                    (1..=a1 - a2 + 1).rev().map(|k| z(&[k, 1, 0])).collect(),
                );
                if a1 - a2 == 2 && g > 1 {
                    let mut c = vec![z(&[2, 2, 0])];
                    c.extend((1..=2).rev().map(|k| z(&[k, 1, 0])));
                    put("C2", c);
                }
            } else {
                if g > 1 {
                    put("C1", tuples(&[&[2, 1, 1], &[2, 1, 0]]));
                } else if a3 >= 2 {
                    put(
                        "C1",
                        tuples(&[&[2, 2, 2], &[2, 2, 1], &[2, 1, 1], &[2, 1, 0]]),
                    );
                } else {
                    put(
                        "C1",
                        tuples(&[&[3, 2, 1], &[2, 2, 1], &[2, 1, 1], &[2, 1, 0]]),
                    );
                }
                put("C3", rc3());
            }
        }
        _ => {
            let rc1 = |len: usize| -> Vec<Vec<u32>> {
                (0..len)
                    .map(|i| {
                        let mut v = vec![2];
                        v.extend(std::iter::repeat_n(1, r - 1 - i));
                        z(&v)
                    })
                    .collect()
            };
            if a1 - a2 > 1 {
                put("C1", rc1(r));
                put("C2", (1..=a1 - a2 + 1).rev().map(|k| z(&[k, 1])).collect());
            } else {
                put("C1", rc1(r - 1));
                put("C3", rc3());
            }
        }
    }
    e
}

pub fn chain_vecs(c: &hinv::chains::Chain) -> Vec<Vec<u32>> {
    c.tuples().iter().map(|u| u.entries().to_vec()).collect()
}

/// Detected riding chains grouped like [`stated_riding`].
pub fn detected_riding(l: &Hyperlattice) -> BTreeMap<&'static str, BTreeSet<Vec<Vec<u32>>>> {
    let mut out: BTreeMap<&'static str, BTreeSet<Vec<Vec<u32>>>> = BTreeMap::new();
    for rc in hinv::chains::riding_chains(l).unwrap() {
        let key = match rc.attached_to {
            hinv::chains::SpecialKind::C1 => "C1",
            hinv::chains::SpecialKind::C2 => "C2",
            hinv::chains::SpecialKind::C3 => "C3",
        };
        out.entry(key).or_default().insert(chain_vecs(&rc.chain));
    }
    out
}
