mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stringc_core::classify::signature;
use stringc_core::{parse_graph, parse_perm, IntersectionMode, PRGraph, PermGroup, Permutation};

use common::*;

fn perm_strategy(max_n: usize) -> impl Strategy<Value = Permutation> {
    (2..=max_n).prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle()).prop_map(|v| Permutation::from_images(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perm_text_round_trip(p in perm_strategy(12)) {
        let text = p.to_string();
        let q = parse_perm(&text, p.degree()).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(parse_perm(&q.to_string(), p.degree()).unwrap(), p);
    }

    #[test]
    fn order_matches_closure(seed in any::<u64>(), n in 2usize..=8, k in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let gens: Vec<Permutation> = (0..k).map(|_| {
            let mut v: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut v[..], &mut rng);
            Permutation::from_images(&v).unwrap()
        }).collect();
        let g = PermGroup::new(n, gens.clone()).unwrap();
        prop_assert_eq!(g.order(), closure(n, &gens).len() as u128);
    }

    #[test]
    fn products_are_members(seed in any::<u64>(), n in 3usize..=10) {
        let mut rng = StdRng::seed_from_u64(seed);
        let gens: Vec<Permutation> = (0..3).map(|_| random_involution(&mut rng, n)).collect();
        let g = PermGroup::new(n, gens.clone()).unwrap();
        for _ in 0..100 {
            let mut p = Permutation::identity(n);
            for _ in 0..rng.gen_range(0..12) {
                p = p.then(&gens[rng.gen_range(0..3)]);
            }
            prop_assert!(g.contains(&p));
        }
    }

    #[test]
    fn odd_permutation_outside_even_group(seed in any::<u64>(), n in 3usize..=9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let three_cycle = |rng: &mut StdRng| {
            let mut v: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut v[..], rng);
            let mut im: Vec<usize> = (0..n).collect();
            im[v[0]] = v[1];
            im[v[1]] = v[2];
            im[v[2]] = v[0];
            Permutation::from_images(&im).unwrap()
        };
        let gens: Vec<Permutation> = (0..3).map(|_| three_cycle(&mut rng)).collect();
        let g = PermGroup::new(n, gens).unwrap();
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        prop_assert!(!g.contains(&Permutation::from_transpositions(n, &[(a, b)])));
    }

    #[test]
    fn block_systems_are_invariant(seed in any::<u64>(), n in 4usize..=12) {
        let mut rng = StdRng::seed_from_u64(seed);
        let gens: Vec<Permutation> = (0..2).map(|_| random_involution(&mut rng, n)).collect();
        let g = PermGroup::new(n, gens.clone()).unwrap();
        if let Ok(systems) = g.block_systems() {
            for b in systems {
                prop_assert!(b.is_invariant_under(&gens));
            }
        }
    }

    #[test]
    fn abelian_product_formula(seed in any::<u64>()) {
        // Subgroups of C2^3 x C3 on 9 points: three swaps and a 3-cycle.
        let mut rng = StdRng::seed_from_u64(seed);
        let basis = [
            parse_perm("(1,2)", 9).unwrap(),
            parse_perm("(3,4)", 9).unwrap(),
            parse_perm("(5,6)", 9).unwrap(),
            parse_perm("(7,8,9)", 9).unwrap(),
        ];
        let pick = |rng: &mut StdRng| -> Vec<Permutation> {
            (0..2).map(|_| {
                let mut p = Permutation::identity(9);
                for b in &basis {
                    p = p.then(&b.pow(rng.gen_range(0..3)));
                }
                p
            }).collect()
        };
        let (ga, gb) = (pick(&mut rng), pick(&mut rng));
        let a = PermGroup::new(9, ga.clone()).unwrap();
        let b = PermGroup::new(9, gb.clone()).unwrap();
        let ea = closure(9, &ga);
        let eb = closure(9, &gb);
        let mut ab: HashSet<Vec<usize>> = HashSet::new();
        for x in &ea {
            for y in &eb {
                ab.insert(x.iter().map(|&p| y[p]).collect());
            }
        }
        let meet = a.intersect(&b).unwrap().order();
        prop_assert_eq!(meet * ab.len() as u128, a.order() * b.order());
        prop_assert_eq!(meet, ea.intersection(&eb).count() as u128);
    }

    #[test]
    fn dual_reverses_schlafli(seed in any::<u64>(), n in 3usize..=10, r in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        if let Some(s) = random_sggi(&mut rng, n, r) {
            prop_assert_eq!(s.dual().schlafli(), s.schlafli().reversed());
            prop_assert_eq!(&s.dual().dual(), &s);
        }
    }

    #[test]
    fn oracles_agree_with_element_sets(seed in any::<u64>(), n in 3usize..=7, r in 2usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        if let Some(s) = random_sggi(&mut rng, n, r) {
            let brute = brute_intersection_property(&s);
            prop_assert_eq!(s.check_intersection_property(IntersectionMode::Naive).holds, brute);
            prop_assert_eq!(s.check_intersection_property(IntersectionMode::Recursive).holds, brute);
        }
    }

    #[test]
    fn intersection_property_implies_independence(seed in any::<u64>(), n in 3usize..=12, r in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        if let Some(s) = random_sggi(&mut rng, n, r) {
            if s.is_string_c_group() {
                prop_assert!(s.is_independent());
            }
        }
    }

    #[test]
    fn rank_bound_for_independent_sggis(seed in any::<u64>(), n in 3usize..=8, r in 2usize..=7) {
        let mut rng = StdRng::seed_from_u64(seed);
        if let Some(s) = random_sggi(&mut rng, n, r) {
            if s.is_independent() {
                prop_assert!(s.rank() < n);
            }
        }
    }

    #[test]
    fn graph_round_trips(seed in any::<u64>(), n in 3usize..=12, r in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        if let Some(s) = random_sggi(&mut rng, n, r) {
            let g = PRGraph::from_sggi(&s);
            prop_assert_eq!(&g.to_sggi().unwrap(), &s);
            prop_assert_eq!(&PRGraph::from_sggi(&g.to_sggi().unwrap()), &g);
            prop_assert_eq!(&parse_graph(&g.to_dsl()).unwrap(), &g);
            prop_assert_eq!(g.is_connected(), s.group().is_transitive());
        }
    }

    #[test]
    fn validator_accepts_iff_commuting(seed in any::<u64>(), n in 3usize..=10, r in 2usize..=5) {
        let mut rng = StdRng::seed_from_u64(seed);
        let gens: Vec<Permutation> = (0..r).map(|_| random_involution(&mut rng, n)).collect();
        let edges: Vec<(usize, usize, usize)> = gens
            .iter()
            .enumerate()
            .flat_map(|(l, g)| g.cycles().into_iter().map(move |c| (l, c[0], c[1])))
            .collect();
        let commuting = (0..r).all(|i| (i + 2..r).all(|j| gens[i].commutes_with(&gens[j])));
        prop_assert_eq!(PRGraph::new(n, r, edges).is_ok(), commuting);
    }

    #[test]
    fn signature_survives_conjugation(seed in any::<u64>(), n in 3usize..=9, r in 2usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        if let Some(s) = random_sggi(&mut rng, n, r) {
            let mut v: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(&mut v[..], &mut rng);
            let c = Permutation::from_images(&v).unwrap();
            prop_assert_eq!(signature(&s.conjugate_by(&c)), signature(&s));
        }
    }
}

#[test]
fn symmetric_groups_are_primitive() {
    for n in 2..=8 {
        assert!(PermGroup::symmetric(n).minimal_block_systems().unwrap().is_empty(), "Sym({n})");
    }
}
