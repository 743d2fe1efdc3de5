#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use stringc_core::{make_sggi, Permutation, Sggi};

pub fn random_involution(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let k = rng.gen_range(1..=n / 2);
    let pairs: Vec<(usize, usize)> = (0..k).map(|i| (pts[2 * i], pts[2 * i + 1])).collect();
    Permutation::from_transpositions(n, &pairs)
}

/// Rejection sampling for the commuting property; `None` if a position
/// cannot be filled.
pub fn random_sggi(rng: &mut impl Rng, n: usize, r: usize) -> Option<Sggi> {
    let mut gens: Vec<Permutation> = Vec::new();
    for k in 0..r {
        let found = (0..400).find_map(|_| {
            let c = random_involution(rng, n);
            let ok = !gens.contains(&c) && gens[..k.saturating_sub(1)].iter().all(|g| g.commutes_with(&c));
            ok.then_some(c)
        })?;
        gens.push(found);
    }
    make_sggi(gens).ok()
}

pub fn simplex(n: usize) -> Sggi {
    make_sggi((1..n).map(|i| Permutation::from_transpositions(n, &[(i - 1, i)])).collect()).unwrap()
}

/// All elements of `⟨gens⟩` as image vectors, by closure under right
/// multiplication.
pub fn closure(n: usize, gens: &[Permutation]) -> HashSet<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&p| g.image(p)).collect();
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

/// Intersection property by element sets over every pair of index subsets.
pub fn brute_intersection_property(s: &Sggi) -> bool {
    let r = s.rank();
    let n = s.degree();
    let sub = |mask: u32| -> HashSet<Vec<usize>> {
        let gens: Vec<Permutation> = (0..r).filter(|i| mask >> i & 1 == 1).map(|i| s.generators()[i].clone()).collect();
        closure(n, &gens)
    };
    let sets: Vec<HashSet<Vec<usize>>> = (0..1u32 << r).map(sub).collect();
    for j in 0..1usize << r {
        for k in 0..1usize << r {
            let meet = sets[j].intersection(&sets[k]).count();
            if meet != sets[j & k].len() {
                return false;
            }
        }
    }
    true
}
