//! String groups generated by involutions.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::group::PermGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SggiError {
    #[error("an sggi needs at least one generator")]
    Empty,
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch { index: usize, expected: usize, found: usize },
    #[error("generator {0} is the identity")]
    Identity(usize),
    #[error("generator {0} is not an involution")]
    NotInvolution(usize),
    #[error("generators {0} and {1} are equal")]
    Duplicate(usize, usize),
    #[error("commuting property fails for ({0},{1})")]
    Commuting(usize, usize),
    #[error("index set is empty")]
    EmptyIndexSet,
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

/// A subset of `{0..r-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    rank: usize,
    mask: u64,
}

impl IndexSet {
    pub fn from_mask(rank: usize, mask: u64) -> Self {
        assert!(rank <= 64);
        let full = if rank == 64 { u64::MAX } else { (1u64 << rank) - 1 };
        IndexSet { rank, mask: mask & full }
    }

    pub fn from_indices(rank: usize, idx: impl IntoIterator<Item = usize>) -> Result<Self, SggiError> {
        let mut mask = 0;
        for i in idx {
            if i >= rank {
                return Err(SggiError::IndexOutOfRange { index: i, rank });
            }
            mask |= 1 << i;
        }
        Ok(IndexSet { rank, mask })
    }

    pub fn empty(rank: usize) -> Self {
        Self::from_mask(rank, 0)
    }

    pub fn all(rank: usize) -> Self {
        Self::from_mask(rank, u64::MAX)
    }

    /// `I_{X}`: everything except `X`.
    pub fn excluding(rank: usize, removed: &[usize]) -> Self {
        Self::all(rank).without(removed)
    }

    /// `I^{<=i}`.
    pub fn at_most(rank: usize, i: usize) -> Self {
        Self::from_mask(rank, if i >= 63 { u64::MAX } else { (1u64 << (i + 1)) - 1 })
    }

    /// `I^{<i}`.
    pub fn below(rank: usize, i: usize) -> Self {
        if i == 0 {
            Self::empty(rank)
        } else {
            Self::at_most(rank, i - 1)
        }
    }

    /// `I^{>=i}`.
    pub fn at_least(rank: usize, i: usize) -> Self {
        Self::from_mask(rank, !Self::below(rank, i).mask)
    }

    /// `I^{>i}`.
    pub fn above(rank: usize, i: usize) -> Self {
        Self::at_least(rank, i + 1)
    }

    /// Punctured variant: drops the listed indices.
    pub fn without(self, removed: &[usize]) -> Self {
        let mut mask = self.mask;
        for &i in removed {
            if i < 64 {
                mask &= !(1u64 << i);
            }
        }
        IndexSet { rank: self.rank, mask }
    }

    pub fn with(self, added: &[usize]) -> Self {
        let mut mask = self.mask;
        for &i in added {
            mask |= 1u64 << i;
        }
        Self::from_mask(self.rank, mask)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.mask >> i & 1 == 1
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.rank).filter(|&i| self.contains(i)).collect()
    }

    pub fn union(&self, o: &IndexSet) -> IndexSet {
        IndexSet { rank: self.rank, mask: self.mask | o.mask }
    }

    pub fn intersection(&self, o: &IndexSet) -> IndexSet {
        IndexSet { rank: self.rank, mask: self.mask & o.mask }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.indices().serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchlafliSymbol(pub Vec<u64>);

impl SchlafliSymbol {
    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn reversed(&self) -> SchlafliSymbol {
        SchlafliSymbol(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl fmt::Display for SchlafliSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for SchlafliSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntersectionMode {
    /// Every pair of index subsets.
    Naive,
    /// Reduction through the two end parabolics.
    Recursive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionCheck {
    pub holds: bool,
    /// Failing pair `(J, K)`; for naive mode the least by `(mask J, mask K)`.
    pub witness: Option<(IndexSet, IndexSet)>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sggi {
    degree: usize,
    gens: Vec<Permutation>,
}

impl fmt::Debug for Sggi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

/// Validates involutions, distinctness and the commuting property.
pub fn make_sggi(gens: Vec<Permutation>) -> Result<Sggi, SggiError> {
    let degree = gens.first().ok_or(SggiError::Empty)?.degree();
    for (i, g) in gens.iter().enumerate() {
        if g.degree() != degree {
            return Err(SggiError::DegreeMismatch { index: i, expected: degree, found: g.degree() });
        }
        if g.is_identity() {
            return Err(SggiError::Identity(i));
        }
        if !g.is_involution() {
            return Err(SggiError::NotInvolution(i));
        }
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if gens[i] == gens[j] {
                return Err(SggiError::Duplicate(i, j));
            }
        }
    }
    for i in 0..gens.len() {
        for j in i + 2..gens.len() {
            if !gens[i].commutes_with(&gens[j]) {
                return Err(SggiError::Commuting(i, j));
            }
        }
    }
    Ok(Sggi { degree, gens })
}

impl Sggi {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.gens.clone()).expect("common degree")
    }

    /// `⟨ρ_j : j ∈ keep⟩`.
    pub fn subgroup(&self, keep: &IndexSet) -> PermGroup {
        let gens = keep.indices().into_iter().map(|i| self.gens[i].clone()).collect();
        PermGroup::new(self.degree, gens).expect("common degree")
    }

    pub fn schlafli(&self) -> SchlafliSymbol {
        SchlafliSymbol(self.gens.windows(2).map(|w| w[0].then(&w[1]).order()).collect())
    }

    pub fn dual(&self) -> Sggi {
        Sggi { degree: self.degree, gens: self.gens.iter().rev().cloned().collect() }
    }

    /// Kept generators in their original order.
    pub fn parabolic(&self, keep: &IndexSet) -> Result<Sggi, SggiError> {
        if keep.is_empty() {
            return Err(SggiError::EmptyIndexSet);
        }
        if let Some(i) = keep.indices().into_iter().find(|&i| i >= self.rank()) {
            return Err(SggiError::IndexOutOfRange { index: i, rank: self.rank() });
        }
        Ok(Sggi { degree: self.degree, gens: keep.indices().into_iter().map(|i| self.gens[i].clone()).collect() })
    }

    /// Conjugates every generator by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Sggi {
        Sggi { degree: self.degree, gens: self.gens.iter().map(|p| p.conjugate_by(g)).collect() }
    }

    pub fn is_independent(&self) -> bool {
        (0..self.rank()).all(|i| {
            let others = IndexSet::excluding(self.rank(), &[i]);
            !self.subgroup(&others).contains(&self.gens[i])
        })
    }

    pub fn check_intersection_property(&self, mode: IntersectionMode) -> IntersectionCheck {
        match mode {
            IntersectionMode::Naive => self.naive_intersection(),
            IntersectionMode::Recursive => self.recursive_intersection(),
        }
    }

    pub fn is_string_c_group(&self) -> bool {
        self.check_intersection_property(IntersectionMode::Recursive).holds
    }

    fn naive_intersection(&self) -> IntersectionCheck {
        let r = self.rank();
        assert!(r <= 20, "naive intersection check is limited to rank 20");
        let mut oracle = SubsetOracle::new(self);
        let full = (1u64 << r) - 1;
        for j in 0..=full {
            for k in 0..=full {
                if j & k == j || j & k == k {
                    continue;
                }
                let expected = oracle.order(j & k);
                if oracle.meet_order(j, k) != expected {
                    return IntersectionCheck {
                        holds: false,
                        witness: Some((IndexSet::from_mask(r, j), IndexSet::from_mask(r, k))),
                    };
                }
            }
        }
        IntersectionCheck { holds: true, witness: None }
    }

    fn recursive_intersection(&self) -> IntersectionCheck {
        let r = self.rank();
        let mut memo: HashMap<(usize, usize), Option<(IndexSet, IndexSet)>> = HashMap::new();
        match self.interval_check(0, r - 1, &mut memo) {
            None => IntersectionCheck { holds: true, witness: None },
            w => IntersectionCheck { holds: false, witness: w },
        }
    }

    fn interval(&self, lo: usize, hi: usize) -> IndexSet {
        IndexSet::from_indices(self.rank(), lo..=hi).expect("in range")
    }

    /// Failing pair inside the parabolic on `lo..=hi`, if any.
    fn interval_check(
        &self,
        lo: usize,
        hi: usize,
        memo: &mut HashMap<(usize, usize), Option<(IndexSet, IndexSet)>>,
    ) -> Option<(IndexSet, IndexSet)> {
        if hi <= lo {
            return None;
        }
        if let Some(w) = memo.get(&(lo, hi)) {
            return *w;
        }
        let result = self
            .interval_check(lo, hi - 1, memo)
            .or_else(|| self.interval_check(lo + 1, hi, memo))
            .or_else(|| {
                let left = self.interval(lo, hi - 1);
                let right = self.interval(lo + 1, hi);
                let middle = if hi - lo >= 2 { self.subgroup(&self.interval(lo + 1, hi - 1)).order() } else { 1 };
                let meet = self.subgroup(&left).intersection_order(&self.subgroup(&right)).expect("same degree");
                (meet != middle).then_some((left, right))
            });
        memo.insert((lo, hi), result);
        result
    }
}

/// Subgroups up to this order are intersected as sorted element lists.
const PACK_LIMIT: u128 = 100_000;

/// Memoized subgroup data for the naive check.
struct SubsetOracle<'a> {
    s: &'a Sggi,
    groups: HashMap<u64, PermGroup>,
    elements: HashMap<u64, Vec<u128>>,
    meets: HashMap<(u64, u64), u128>,
    packable: bool,
}

impl<'a> SubsetOracle<'a> {
    fn new(s: &'a Sggi) -> Self {
        let packable = crate::perm::pack_bits(s.degree()).is_some();
        SubsetOracle { s, groups: HashMap::new(), elements: HashMap::new(), meets: HashMap::new(), packable }
    }

    fn group(&mut self, mask: u64) -> &PermGroup {
        let s = self.s;
        self.groups.entry(mask).or_insert_with(|| s.subgroup(&IndexSet::from_mask(s.rank(), mask)))
    }

    fn order(&mut self, mask: u64) -> u128 {
        self.group(mask).order()
    }

    fn packed(&mut self, mask: u64) -> &Vec<u128> {
        if !self.elements.contains_key(&mask) {
            let list = self.group(mask).packed_elements().expect("packable degree");
            self.elements.insert(mask, list);
        }
        &self.elements[&mask]
    }

    fn meet_order(&mut self, j: u64, k: u64) -> u128 {
        let key = (j.min(k), j.max(k));
        if let Some(&m) = self.meets.get(&key) {
            return m;
        }
        let small = self.order(j).max(self.order(k)) <= PACK_LIMIT;
        let m = if self.packable && small {
            self.packed(j);
            self.packed(k);
            count_common(&self.elements[&j], &self.elements[&k])
        } else {
            let a = self.group(j).clone();
            a.intersection_order(self.group(k)).expect("same degree")
        };
        self.meets.insert(key, m);
        m
    }
}

fn count_common(a: &[u128], b: &[u128]) -> u128 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let log = usize::BITS - large.len().leading_zeros();
    if small.len() * (log as usize) < small.len() + large.len() {
        return small.iter().filter(|x| large.binary_search(x).is_ok()).count() as u128;
    }
    let (mut i, mut j, mut n) = (0, 0, 0u128);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;

    fn sggi(n: usize, gens: &[&str]) -> Result<Sggi, SggiError> {
        make_sggi(gens.iter().map(|g| parse_perm(g, n).unwrap()).collect())
    }

    fn simplex(n: usize) -> Sggi {
        make_sggi((0..n - 1).map(|i| Permutation::from_transpositions(n, &[(i, i + 1)])).collect()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(sggi(4, &["(1,2)", "(2,3)", "(3,4)"]).unwrap().rank(), 3);
        assert_eq!(sggi(3, &["(1,2)", "(1,3)"]).unwrap().rank(), 2);
        assert_eq!(sggi(3, &["(1,2)", "(2,3)", "(1,3)"]), Err(SggiError::Commuting(0, 2)));
        assert_eq!(sggi(3, &["(1,2,3)"]), Err(SggiError::NotInvolution(0)));
        assert_eq!(sggi(3, &["(1,2)", "id"]), Err(SggiError::Identity(1)));
        assert_eq!(sggi(3, &["(1,2)", "(1,2)"]), Err(SggiError::Duplicate(0, 1)));
        assert_eq!(make_sggi(vec![]), Err(SggiError::Empty));
        assert_eq!(sggi(3, &["(1,2)"]).unwrap().rank(), 1);
    }

    #[test]
    fn schlafli_and_dual() {
        let s = simplex(5);
        assert_eq!(s.schlafli().to_string(), "{3,3,3}");
        assert_eq!(s.dual().dual(), s);
        let t = sggi(4, &["(1,2)(3,4)", "(2,3)", "(1,2)"]).unwrap();
        assert_eq!(t.schlafli().to_string(), "{4,3}");
        assert_eq!(t.dual().schlafli().to_string(), "{3,4}");
    }

    #[test]
    fn independence() {
        assert!(simplex(4).is_independent());
        assert!(!sggi(4, &["(1,2)", "(3,4)", "(1,2)(3,4)"]).unwrap().is_independent());
    }

    #[test]
    fn intersection_property_examples() {
        let s = simplex(5);
        for mode in [IntersectionMode::Naive, IntersectionMode::Recursive] {
            assert!(s.check_intersection_property(mode).holds);
        }
        let bad = Sggi {
            degree: 3,
            gens: vec![parse_perm("(1,2)", 3).unwrap(), parse_perm("(2,3)", 3).unwrap(), parse_perm("(1,2)", 3).unwrap()],
        };
        let naive = bad.check_intersection_property(IntersectionMode::Naive);
        assert!(!naive.holds);
        let (j, k) = naive.witness.unwrap();
        assert_eq!((j.to_string(), k.to_string()), ("{0}".to_string(), "{2}".to_string()));
        assert!(!bad.check_intersection_property(IntersectionMode::Recursive).holds);
    }

    #[test]
    fn simplex_parabolic_meet() {
        let s = simplex(5);
        let a = s.subgroup(&IndexSet::excluding(4, &[0]));
        let b = s.subgroup(&IndexSet::at_most(4, 2));
        assert_eq!((a.order(), b.order()), (24, 24));
        assert_eq!(a.intersect(&b).unwrap().order(), 6);
        assert_eq!(s.parabolic(&IndexSet::at_most(4, 2)).unwrap().group().order(), 24);
        assert_eq!(s.parabolic(&IndexSet::empty(4)), Err(SggiError::EmptyIndexSet));
    }

    #[test]
    fn index_set_constructors() {
        let r = 6;
        assert_eq!(IndexSet::excluding(r, &[1, 2]).to_string(), "{0,3,4,5}");
        assert_eq!(IndexSet::at_most(r, 2).to_string(), "{0,1,2}");
        assert_eq!(IndexSet::below(r, 2).to_string(), "{0,1}");
        assert_eq!(IndexSet::at_least(r, 4).to_string(), "{4,5}");
        assert_eq!(IndexSet::above(r, 4).to_string(), "{5}");
        assert_eq!(IndexSet::at_most(r, 3).without(&[0, 1]).to_string(), "{2,3}");
        assert_eq!(IndexSet::below(r, 0).len(), 0);
    }

    #[test]
    fn common_count() {
        assert_eq!(count_common(&[1, 3, 5, 7], &[2, 3, 4, 5, 6]), 2);
        assert_eq!(count_common(&[3], &(0..100).collect::<Vec<_>>()), 1);
    }
}
