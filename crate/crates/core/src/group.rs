//! Permutation groups backed by a lazily built stabilizer chain.
//!
//! The chain is a Sims table over the complete base `0, 1, .., n-1` built with
//! Knuth's incremental closure, so the effective base is the moved points in
//! increasing order and orders/membership are deterministic.

use std::collections::HashSet;
use std::sync::OnceLock;

use crate::blocks::BlockSystem;
use crate::perm::{PermError, Permutation};

/// Groups of at most this order are intersected by element filtering.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Largest coset orbit explored before falling back to backtracking.
pub const COSET_LIMIT: usize = 2_000_000;

#[derive(Clone)]
struct Rep {
    fwd: Permutation,
    inv: Permutation,
}

#[derive(Clone)]
pub(crate) struct Chain {
    n: usize,
    /// `rows[k][j]` maps `k` to `j` and fixes every point below `k`.
    rows: Vec<Vec<Option<Rep>>>,
    /// Defined columns of each row, in discovery order.
    orbit: Vec<Vec<usize>>,
    tgens: Vec<Vec<Permutation>>,
}

enum Task {
    Add(usize, Permutation),
    Close(usize, Permutation),
}

impl Chain {
    fn new(n: usize) -> Self {
        let id = Permutation::identity(n);
        let rows = (0..n)
            .map(|k| {
                let mut row: Vec<Option<Rep>> = vec![None; n];
                row[k] = Some(Rep { fwd: id.clone(), inv: id.clone() });
                row
            })
            .collect();
        Chain { n, rows, orbit: (0..n).map(|k| vec![k]).collect(), tgens: vec![Vec::new(); n] }
    }

    fn build(n: usize, gens: &[Permutation]) -> Self {
        let mut c = Chain::new(n);
        for g in gens {
            c.insert(g.clone());
        }
        c
    }

    /// Sifts `p` from level `k`; returns the residue and the level where it stuck.
    fn sift_from(&self, mut p: Permutation, k: usize) -> (Permutation, usize) {
        for l in k..self.n {
            let j = p.image(l);
            if j == l {
                continue;
            }
            match &self.rows[l][j] {
                Some(rep) => p.then_assign(&rep.inv),
                None => return (p, l),
            }
        }
        (p, self.n)
    }

    fn contains(&self, p: &Permutation) -> bool {
        self.sift_from(p.clone(), 0).1 == self.n
    }

    /// Adds `g` to the group; returns false if it was already a member.
    fn insert(&mut self, g: Permutation) -> bool {
        if self.contains(&g) {
            return false;
        }
        let mut stack = vec![Task::Add(0, g)];
        while let Some(task) = stack.pop() {
            match task {
                Task::Add(k, p) => {
                    if k >= self.n || self.sift_from(p.clone(), k).1 == self.n {
                        continue;
                    }
                    for &j in &self.orbit[k] {
                        let rep = self.rows[k][j].as_ref().expect("orbit entry");
                        stack.push(Task::Close(k, rep.fwd.then(&p)));
                    }
                    self.tgens[k].push(p);
                }
                Task::Close(k, p) => {
                    let j = p.image(k);
                    match &self.rows[k][j] {
                        Some(rep) => {
                            let r = p.then(&rep.inv);
                            if !r.is_identity() {
                                stack.push(Task::Add(k + 1, r));
                            }
                        }
                        None => {
                            for t in &self.tgens[k] {
                                stack.push(Task::Close(k, p.then(t)));
                            }
                            let inv = p.inverse();
                            self.rows[k][j] = Some(Rep { fwd: p, inv });
                            self.orbit[k].push(j);
                        }
                    }
                }
            }
        }
        true
    }

    fn order(&self) -> u128 {
        self.orbit.iter().fold(1u128, |acc, o| acc.checked_mul(o.len() as u128).expect("group order overflows u128"))
    }

    fn nontrivial_levels(&self) -> Vec<usize> {
        (0..self.n).filter(|&k| self.orbit[k].len() > 1).collect()
    }

    /// Calls `f` on every element exactly once.
    fn for_each(&self, f: &mut dyn FnMut(&Permutation)) {
        let levels = self.nontrivial_levels();
        let id = Permutation::identity(self.n);
        self.walk(&levels, 0, &id, f);
    }

    fn walk(&self, levels: &[usize], depth: usize, prefix: &Permutation, f: &mut dyn FnMut(&Permutation)) {
        if depth == levels.len() {
            f(prefix);
            return;
        }
        let k = levels[depth];
        for &j in &self.orbit[k] {
            let rep = self.rows[k][j].as_ref().expect("orbit entry");
            let next = prefix.then(&rep.inv);
            self.walk(levels, depth + 1, &next, f);
        }
    }

    /// Element with mixed-radix index `idx` over the nontrivial levels.
    fn element_at(&self, mut idx: u128) -> Permutation {
        let mut p = Permutation::identity(self.n);
        for k in self.nontrivial_levels() {
            let len = self.orbit[k].len() as u128;
            let j = self.orbit[k][(idx % len) as usize];
            idx /= len;
            p.then_assign(&self.rows[k][j].as_ref().expect("orbit entry").inv);
        }
        p
    }

    /// Lexicographically least element of the coset `{ b.then(g) : b in self }`.
    fn coset_canonical(&self, g: &Permutation) -> Permutation {
        let mut g = g.clone();
        for k in 0..self.n {
            if self.orbit[k].len() == 1 {
                continue;
            }
            let best = *self.orbit[k].iter().min_by_key(|&&j| g.image(j)).expect("nonempty orbit");
            if best != k {
                g = self.rows[k][best].as_ref().expect("orbit entry").fwd.then(&g);
            }
        }
        g
    }

    fn trivial_from(&self) -> Vec<bool> {
        let mut out = vec![true; self.n + 1];
        for k in (0..self.n).rev() {
            out[k] = out[k + 1] && self.orbit[k].len() == 1;
        }
        out
    }
}

/// Enumerates `A ∩ B` by walking `A`'s chain while pruning base images that
/// cannot be completed inside `B`.
fn backtrack_intersection(a: &Chain, b: &Chain, f: &mut dyn FnMut(&Permutation)) {
    let done = a.trivial_from();
    let id = Permutation::identity(a.n);
    bt_rec(a, b, &done, 0, &id, &id, f);
}

fn bt_rec(
    a: &Chain,
    b: &Chain,
    done: &[bool],
    k: usize,
    right: &Permutation,
    residual: &Permutation,
    f: &mut dyn FnMut(&Permutation),
) {
    if done[k] {
        if b.contains(right) {
            f(right);
        }
        return;
    }
    for &j in &a.orbit[k] {
        let image = right.image(j);
        let h = residual.image(image);
        let Some(brep) = &b.rows[k][h] else { continue };
        let arep = a.rows[k][j].as_ref().expect("orbit entry");
        let next_right = arep.fwd.then(right);
        let next_residual = residual.then(&brep.inv);
        bt_rec(a, b, done, k + 1, &next_right, &next_residual, f);
    }
}

pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    chain: OnceLock<Chain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup { degree: self.degree, gens: self.gens.clone(), chain }
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup").field("degree", &self.degree).field("gens", &self.gens).finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        Ok(PermGroup { degree, gens, chain: OnceLock::new() })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, gens: Vec::new(), chain: OnceLock::new() }
    }

    pub fn symmetric(degree: usize) -> Self {
        let gens = (0..degree.saturating_sub(1)).map(|i| Permutation::from_transpositions(degree, &[(i, i + 1)])).collect();
        PermGroup { degree, gens, chain: OnceLock::new() }
    }

    fn from_chain(degree: usize, chain: Chain) -> Self {
        let gens = chain.tgens.iter().flatten().cloned().collect();
        let lock = OnceLock::new();
        let _ = lock.set(chain);
        PermGroup { degree, gens, chain: lock }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    fn chain(&self) -> &Chain {
        self.chain.get_or_init(|| Chain::build(self.degree, &self.gens))
    }

    /// Builds the stabilizer chain now; later readers never block.
    pub fn finalize(&self) -> &Self {
        self.chain();
        self
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.chain().contains(p)
    }

    /// Base points with nontrivial basic orbits, 0-based.
    pub fn base(&self) -> Vec<usize> {
        self.chain().nontrivial_levels()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        self.chain().for_each(&mut f);
    }

    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        self.for_each_element(|p| out.push(p.clone()));
        out
    }

    /// Element number `idx mod order`; uniform when `idx` is.
    pub fn element_at(&self, idx: u128) -> Permutation {
        self.chain().element_at(idx)
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut out = vec![point];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.gens {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// Finest block system in which `0` and `x` share a block.
    pub fn block_closure(&self, seed: &[usize]) -> BlockSystem {
        let n = self.degree;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut queue = Vec::new();
        for w in seed.windows(2) {
            let (ra, rb) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
                queue.push((w[0], w[1]));
            }
        }
        while let Some((a, b)) = queue.pop() {
            for g in &self.gens {
                let (ga, gb) = (g.image(a), g.image(b));
                let (ra, rb) = (find(&mut parent, ga), find(&mut parent, gb));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                    queue.push((ga, gb));
                }
            }
        }
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = find(&mut parent, x);
            classes[r].push(x);
        }
        BlockSystem::from_partition_unchecked(n, classes.into_iter().filter(|c| !c.is_empty()).collect())
    }

    /// Minimal nontrivial block systems; empty iff primitive.
    pub fn minimal_block_systems(&self) -> Result<Vec<BlockSystem>, PermError> {
        let all = self.pair_closures()?;
        let mut minimal: Vec<BlockSystem> = all
            .iter()
            .filter(|s| !all.iter().any(|t| t != *s && t.refines(s)))
            .cloned()
            .collect();
        minimal.sort_by(|a, b| a.block_size().cmp(&b.block_size()).then_with(|| a.blocks().cmp(b.blocks())));
        Ok(minimal)
    }

    fn pair_closures(&self) -> Result<Vec<BlockSystem>, PermError> {
        if !self.is_transitive() {
            return Err(PermError::NotTransitive);
        }
        let mut out: Vec<BlockSystem> = Vec::new();
        for x in 1..self.degree {
            let s = self.block_closure(&[0, x]);
            if s.num_blocks() > 1 && !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    /// Every nontrivial block system, ordered by block size then blocks.
    pub fn block_systems(&self) -> Result<Vec<BlockSystem>, PermError> {
        let mut found = self.pair_closures()?;
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let mut seed = found[i].block_of_point(0).to_vec();
                seed.extend_from_slice(found[j].block_of_point(0));
                seed.sort_unstable();
                seed.dedup();
                let s = self.block_closure(&seed);
                if s.num_blocks() > 1 && !found.contains(&s) {
                    found.push(s);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.block_size().cmp(&b.block_size()).then_with(|| a.blocks().cmp(b.blocks())));
        Ok(found)
    }

    /// Order of `self ∩ other`.
    pub fn intersection_order(&self, other: &PermGroup) -> Result<u128, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch(self.degree, other.degree));
        }
        let (small, large) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        if small.order() > ENUMERATION_LIMIT {
            if let Some(len) = large.coset_orbit_len(small, COSET_LIMIT) {
                return Ok(small.order() / len);
            }
        }
        let mut count = 0u128;
        self.intersection_walk(other, &mut |_| count += 1)?;
        Ok(count)
    }

    pub fn intersect(&self, other: &PermGroup) -> Result<PermGroup, PermError> {
        let mut chain = Chain::new(self.degree);
        self.intersection_walk(other, &mut |p| {
            chain.insert(p.clone());
        })?;
        Ok(PermGroup::from_chain(self.degree, chain))
    }

    fn intersection_walk(&self, other: &PermGroup, f: &mut dyn FnMut(&Permutation)) -> Result<(), PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch(self.degree, other.degree));
        }
        let (small, large) = if self.order() <= other.order() { (self, other) } else { (other, self) };
        if small.order() <= ENUMERATION_LIMIT {
            let lc = large.chain();
            small.chain().for_each(&mut |p| {
                if lc.contains(p) {
                    f(p)
                }
            });
        } else {
            backtrack_intersection(small.chain(), large.chain(), f);
        }
        Ok(())
    }

    /// Length of the orbit of the coset `self` under right multiplication by
    /// `acting`, which is `|acting : acting ∩ self|`. `None` past `limit`.
    pub fn coset_orbit_len(&self, acting: &PermGroup, limit: usize) -> Option<u128> {
        let chain = self.chain();
        let start = chain.coset_canonical(&Permutation::identity(self.degree));
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(start.clone());
        let mut queue = vec![start];
        while let Some(c) = queue.pop() {
            for a in &acting.gens {
                let next = chain.coset_canonical(&c.then(a));
                if seen.insert(next.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push(next);
                }
            }
        }
        Some(seen.len() as u128)
    }

    /// Generators of the pointwise stabilizer of `0..k`.
    pub fn stabilizer_generators(&self, k: usize) -> Vec<Permutation> {
        let chain = self.chain();
        let mut acc = Chain::new(self.degree);
        let mut out = Vec::new();
        for l in k..self.degree {
            for &j in &chain.orbit[l] {
                let rep = &chain.rows[l][j].as_ref().expect("orbit entry").fwd;
                if !rep.is_identity() && acc.insert(rep.clone()) {
                    out.push(rep.clone());
                }
            }
        }
        out
    }

    /// Enumerates the intersection with the base-image backtrack regardless of size.
    pub fn intersect_by_backtrack(&self, other: &PermGroup) -> Result<PermGroup, PermError> {
        if self.degree != other.degree {
            return Err(PermError::DegreeMismatch(self.degree, other.degree));
        }
        let mut chain = Chain::new(self.degree);
        backtrack_intersection(self.chain(), other.chain(), &mut |p| {
            chain.insert(p.clone());
        });
        Ok(PermGroup::from_chain(self.degree, chain))
    }

    /// Sorted packed elements; `None` if the degree is too large to pack.
    pub(crate) fn packed_elements(&self) -> Option<Vec<u128>> {
        Permutation::identity(self.degree).pack()?;
        let mut out = Vec::with_capacity(self.order().min(1 << 24) as usize);
        self.for_each_element(|p| out.push(p.pack().expect("packable")));
        out.sort_unstable();
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(n, gens.iter().map(|g| parse_perm(g, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(group(4, &["(1,2)", "(2,3)", "(3,4)"]).order(), 24);
        assert_eq!(group(4, &["(1,2)(3,4)", "(1,3)(2,4)"]).order(), 4);
        assert_eq!(PermGroup::trivial(5).order(), 1);
        assert_eq!(PermGroup::symmetric(10).order(), 3_628_800);
        assert_eq!(group(5, &["(1,2,3)", "(3,4,5)"]).order(), 60);
    }

    #[test]
    fn membership() {
        let a5 = group(5, &["(1,2,3)", "(3,4,5)"]);
        assert!(a5.contains(&parse_perm("(1,2)(3,4)", 5).unwrap()));
        assert!(!a5.contains(&parse_perm("(1,2)", 5).unwrap()));
    }

    #[test]
    fn transitivity() {
        assert!(group(3, &["(1,2)", "(2,3)"]).is_transitive());
        assert!(!group(4, &["(1,2)"]).is_transitive());
    }

    #[test]
    fn block_systems_klein_and_sym4() {
        let klein = group(4, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        let systems = klein.minimal_block_systems().unwrap();
        let shown: Vec<String> = systems.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, vec!["{{1,2},{3,4}}", "{{1,3},{2,4}}", "{{1,4},{2,3}}"]);
        assert!(PermGroup::symmetric(4).minimal_block_systems().unwrap().is_empty());
        assert_eq!(group(4, &["(1,2)"]).minimal_block_systems(), Err(PermError::NotTransitive));
    }

    #[test]
    fn all_block_systems_of_cyclic_group() {
        let c12 = group(12, &["(1,2,3,4,5,6,7,8,9,10,11,12)"]);
        let sizes: Vec<usize> = c12.block_systems().unwrap().iter().map(|s| s.block_size()).collect();
        assert_eq!(sizes, vec![2, 3, 4, 6]);
        let minimal: Vec<usize> = c12.minimal_block_systems().unwrap().iter().map(|s| s.block_size()).collect();
        assert_eq!(minimal, vec![2, 3]);
    }

    #[test]
    fn intersections() {
        let s = PermGroup::symmetric(5);
        assert_eq!(s.intersect(&s).unwrap().order(), 120);
        let a = group(3, &["(1,2)"]);
        let b = group(3, &["(2,3)"]);
        assert_eq!(a.intersect(&b).unwrap().order(), 1);
        let left = group(5, &["(2,3)", "(3,4)", "(4,5)"]);
        let right = group(5, &["(1,2)", "(2,3)", "(3,4)"]);
        let meet = left.intersect(&right).unwrap();
        assert_eq!(meet.order(), 6);
        assert!(meet.is_subgroup_of(&group(5, &["(2,3)", "(3,4)"])));
        assert_eq!(left.intersect_by_backtrack(&right).unwrap().order(), 6);
        assert!(matches!(a.intersect(&PermGroup::trivial(4)), Err(PermError::DegreeMismatch(3, 4))));
    }

    #[test]
    fn backtrack_matches_enumeration_on_large_groups() {
        let a = PermGroup::symmetric(9);
        let b = group(9, &["(1,2,3,4,5,6,7,8,9)", "(1,2)"]);
        let c = group(9, &["(1,2)(3,4)", "(2,3,4,5,6,7,8,9)"]);
        assert_eq!(a.intersect_by_backtrack(&b).unwrap().order(), 362_880);
        let e = group(9, &["(1,2,3)", "(4,5,6)", "(7,8,9)", "(1,4,7)(2,5,8)(3,6,9)"]);
        assert_eq!(e.intersect_by_backtrack(&c).unwrap().order(), e.intersect(&c).unwrap().order());
    }

    #[test]
    fn coset_orbit_intersection_matches_backtrack() {
        let a = group(11, &["(1,2,3,4,5,6,7,8,9,10)", "(1,2)"]);
        let b = group(11, &["(2,3,4,5,6,7,8,9,10,11)", "(2,3)"]);
        assert_eq!(b.coset_orbit_len(&a, 100), Some(10));
        assert_eq!(a.intersection_order(&b).unwrap(), 362_880);
        let c = group(11, &["(1,2,3,4,5,6,7,8,9,10,11)", "(1,2)(3,4)"]);
        let w = group(11, &["(1,2,3,4,5,6,7,8,9,10)", "(1,3)(2,4)"]);
        assert_eq!(c.intersection_order(&w).unwrap(), c.intersect_by_backtrack(&w).unwrap().order());
    }

    #[test]
    fn element_enumeration_is_exact() {
        let g = group(6, &["(1,2,3,4,5,6)", "(1,2)"]);
        let mut els = g.elements();
        assert_eq!(els.len(), 720);
        els.sort();
        els.dedup();
        assert_eq!(els.len(), 720);
        assert!(g.contains(&g.element_at(12345)));
    }
}
