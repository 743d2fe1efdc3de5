//! Block actions, L/C/R decompositions, kernel classes and the 0/1 vector
//! calculus for block systems with blocks of size two.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::blocks::BlockSystem;
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::sggi::{IndexSet, Sggi};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("block system is not invariant under the group")]
    NotInvariant,
    #[error("block system and group differ in degree")]
    DegreeMismatch,
    #[error("blocks must have size two")]
    NotPairs,
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("the block-action graph is not a path")]
    NotAPath,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockActionResult {
    pub image_order: u128,
    pub kernel_order: u128,
    #[serde(serialize_with = "ser_perms")]
    pub kernel_generators: Vec<Permutation>,
    #[serde(skip)]
    pub image_generators: Vec<Permutation>,
}

fn ser_perms<S: Serializer>(v: &[Permutation], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|p| p.to_string()))
}

fn check_invariant(g: &PermGroup, b: &BlockSystem) -> Result<(), AnalysisError> {
    if g.degree() != b.degree() {
        return Err(AnalysisError::DegreeMismatch);
    }
    if !b.is_invariant_under(g.generators()) {
        return Err(AnalysisError::NotInvariant);
    }
    Ok(())
}

/// Action of `g` on the blocks of `b` and its kernel.
pub fn block_action(g: &PermGroup, b: &BlockSystem) -> Result<BlockActionResult, AnalysisError> {
    check_invariant(g, b)?;
    let m = b.num_blocks();
    let n = g.degree();
    let images: Vec<Permutation> = g.generators().iter().map(|p| b.action_of(p).expect("invariant")).collect();
    let image = PermGroup::new(m, images.clone()).expect("block degree");
    // Blocks become points 0..m and precede the original points in the base, so
    // the stabilizer of the first m levels is the kernel.
    let combined: Vec<Permutation> = g
        .generators()
        .iter()
        .zip(&images)
        .map(|(p, q)| {
            let mut im: Vec<usize> = q.images();
            im.extend((0..n).map(|x| m + p.image(x)));
            Permutation::from_images(&im).expect("combined action")
        })
        .collect();
    let kernel_generators: Vec<Permutation> = if m + n <= crate::perm::MAX_DEGREE {
        let big = PermGroup::new(m + n, combined).expect("combined degree");
        big.stabilizer_generators(m)
            .iter()
            .map(|k| Permutation::from_images(&(0..n).map(|x| k.image(m + x) - m).collect::<Vec<_>>()).expect("restriction"))
            .collect()
    } else {
        let mut kept = Vec::new();
        g.for_each_element(|p| {
            if b.action_of(p).is_some_and(|a| a.is_identity()) && !p.is_identity() {
                kept.push(p.clone());
            }
        });
        kept
    };
    let image_order = image.order();
    Ok(BlockActionResult { image_order, kernel_order: g.order() / image_order, kernel_generators, image_generators: images })
}

#[derive(Debug, Clone, Serialize)]
pub struct LcrDecomposition {
    pub l: IndexSet,
    pub c: IndexSet,
    pub r: IndexSet,
}

/// Deterministic L/C/R split: greedy scan for L, right-to-left pruning, C the
/// generators commuting with all of L, R the rest.
pub fn lcr_decompose(s: &Sggi, b: &BlockSystem) -> Result<LcrDecomposition, AnalysisError> {
    let g = s.group();
    check_invariant(&g, b)?;
    let m = b.num_blocks();
    let images: Vec<Permutation> = s.generators().iter().map(|p| b.action_of(p).expect("invariant")).collect();
    let span = |idx: &[usize]| PermGroup::new(m, idx.iter().map(|&i| images[i].clone()).collect()).expect("degree");
    let mut kept: Vec<usize> = Vec::new();
    for (i, im) in images.iter().enumerate() {
        if !span(&kept).contains(im) {
            kept.push(i);
        }
    }
    for pos in (0..kept.len()).rev() {
        let j = kept[pos];
        let others: Vec<usize> = kept.iter().copied().filter(|&x| x != j).collect();
        if span(&others).contains(&images[j]) {
            kept.remove(pos);
        }
    }
    let r = s.rank();
    let gens = s.generators();
    let l = IndexSet::from_indices(r, kept.iter().copied()).expect("in range");
    let c_idx = (0..r).filter(|i| !l.contains(*i) && kept.iter().all(|&j| gens[*i].commutes_with(&gens[j])));
    let c = IndexSet::from_indices(r, c_idx).expect("in range");
    let rest = IndexSet::all(r).without(&l.indices()).without(&c.indices());
    Ok(LcrDecomposition { l, c, r: rest })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelClass {
    #[serde(rename = "TRIVIAL")]
    Trivial,
    C2,
    #[serde(rename = "C2^(m-1)")]
    C2PowMMinus1,
    #[serde(rename = "C2^m")]
    C2PowM,
    #[serde(rename = "OTHER")]
    Other,
}

impl fmt::Display for KernelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelClass::Trivial => "TRIVIAL",
            KernelClass::C2 => "C2",
            KernelClass::C2PowMMinus1 => "C2^(m-1)",
            KernelClass::C2PowM => "C2^m",
            KernelClass::Other => "OTHER",
        })
    }
}

pub fn classify_kernel(result: &BlockActionResult, m: usize) -> KernelClass {
    let gens = &result.kernel_generators;
    let elementary = gens.iter().all(|g| g.is_involution())
        && gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b)));
    let o = result.kernel_order;
    if o == 1 {
        return KernelClass::Trivial;
    }
    if !elementary || m == 0 || m > 127 {
        return KernelClass::Other;
    }
    if o == 1u128 << m {
        KernelClass::C2PowM
    } else if o == 1u128 << (m - 1) {
        KernelClass::C2PowMMinus1
    } else if o == 2 {
        KernelClass::C2
    } else {
        KernelClass::Other
    }
}

/// Index of `G` in `C2 ≀ H`, `H` its block image, for blocks of size two.
pub fn wreath_index(result: &BlockActionResult, m: usize) -> u128 {
    (1u128 << m) / result.kernel_order
}

/// Product of the transpositions inside every block.
pub fn all_swap(b: &BlockSystem) -> Permutation {
    let pairs: Vec<(usize, usize)> = b.blocks().iter().map(|bl| (bl[0], bl[1])).collect();
    Permutation::from_transpositions(b.degree(), &pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedForm {
    O,
    U,
    L(usize),
    R(usize),
    V(usize),
    T(usize),
    Other,
}

impl NamedForm {
    /// Name of a 0/1 vector; `L`/`R` take precedence over `V`/`T`.
    pub fn of_bits(bits: &[u8]) -> NamedForm {
        let m = bits.len();
        let ones_prefix = bits.iter().take_while(|&&b| b == 1).count();
        let zeros_prefix = bits.iter().take_while(|&&b| b == 0).count();
        if zeros_prefix == m {
            return NamedForm::O;
        }
        if ones_prefix == m {
            return NamedForm::U;
        }
        if bits[ones_prefix..].iter().all(|&b| b == 0) {
            return NamedForm::L(ones_prefix);
        }
        if bits[zeros_prefix..].iter().all(|&b| b == 1) {
            return NamedForm::R(zeros_prefix);
        }
        let i = ones_prefix;
        let gap = bits[i..].iter().take_while(|&&b| b == 0).count();
        if i >= 1 && bits[i + gap..].iter().all(|&b| b == 1) {
            match gap {
                2 => return NamedForm::V(i),
                3 => return NamedForm::T(i),
                _ => {}
            }
        }
        NamedForm::Other
    }

    /// The vector of length `m`, if the form makes sense there.
    pub fn bits(self, m: usize) -> Option<Vec<u8>> {
        let run = |ones: usize, zeros: usize| -> Option<Vec<u8>> {
            let tail = m.checked_sub(ones + zeros)?;
            let mut v = vec![1u8; ones];
            v.extend(std::iter::repeat_n(0, zeros));
            v.extend(std::iter::repeat_n(1, tail));
            Some(v)
        };
        match self {
            NamedForm::O => Some(vec![0; m]),
            NamedForm::U => Some(vec![1; m]),
            NamedForm::L(i) => (i <= m).then(|| {
                let mut v = vec![1u8; i];
                v.resize(m, 0);
                v
            }),
            NamedForm::R(i) => run(0, i),
            NamedForm::V(i) => run(i, 2),
            NamedForm::T(i) => run(i, 3),
            NamedForm::Other => None,
        }
    }
}

impl fmt::Display for NamedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedForm::O => f.write_str("O"),
            NamedForm::U => f.write_str("U"),
            NamedForm::L(i) => write!(f, "L_{i}"),
            NamedForm::R(i) => write!(f, "R_{i}"),
            NamedForm::V(i) => write!(f, "V_{i}"),
            NamedForm::T(i) => write!(f, "T_{i}"),
            NamedForm::Other => f.write_str("OTHER"),
        }
    }
}

impl Serialize for NamedForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelVector {
    pub bits: Vec<u8>,
    pub named_form: NamedForm,
}

impl KernelVector {
    pub fn from_bits(bits: Vec<u8>) -> Self {
        let named_form = NamedForm::of_bits(&bits);
        KernelVector { bits, named_form }
    }
}

impl fmt::Display for KernelVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        write!(f, " ({})", self.named_form)
    }
}

/// Blocks (indices into `b.blocks()`) ordered along the block-action graph,
/// starting at the endpoint whose incident label is lowest.
pub fn block_path_order(s: &Sggi, b: &BlockSystem) -> Result<Vec<usize>, AnalysisError> {
    let m = b.num_blocks();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for (label, g) in s.generators().iter().enumerate() {
        let act = b.action_of(g).ok_or(AnalysisError::NotInvariant)?;
        for x in 0..m {
            let y = act.image(x);
            if x < y {
                adj[x].push((label, y));
                adj[y].push((label, x));
            }
        }
    }
    let mut nbrs: Vec<Vec<usize>> = adj.iter().map(|a| a.iter().map(|&(_, y)| y).collect()).collect();
    for v in nbrs.iter_mut() {
        v.sort_unstable();
        v.dedup();
    }
    if m == 1 {
        return Ok(vec![0]);
    }
    if nbrs.iter().any(|v| v.is_empty() || v.len() > 2) {
        return Err(AnalysisError::NotAPath);
    }
    let start = (0..m)
        .filter(|&x| nbrs[x].len() == 1)
        .min_by_key(|&x| (adj[x].iter().map(|&(l, _)| l).min(), x))
        .ok_or(AnalysisError::NotAPath)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = nbrs[cur].iter().find(|&&y| y != prev) {
        if order.contains(&next) {
            return Err(AnalysisError::NotAPath);
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() != m {
        return Err(AnalysisError::NotAPath);
    }
    Ok(order)
}

fn ensure_pairs(b: &BlockSystem) -> Result<(), AnalysisError> {
    if b.block_size() != 2 {
        return Err(AnalysisError::NotPairs);
    }
    Ok(())
}

/// 0/1 vector of a block-fixing permutation over the ordered blocks; `None`
/// if `p` moves some block.
pub fn kernel_vector(p: &Permutation, b: &BlockSystem, order: &[usize]) -> Option<KernelVector> {
    let bits = order
        .iter()
        .map(|&k| {
            let bl = &b.blocks()[k];
            match p.image(bl[0]) {
                x if x == bl[0] && p.image(bl[1]) == bl[1] => Some(0),
                x if x == bl[1] => Some(1),
                _ => None,
            }
        })
        .collect::<Option<Vec<u8>>>()?;
    Some(KernelVector::from_bits(bits))
}

/// `δ_i = (ρ_i ρ_{i+1})^3`.
pub fn delta(s: &Sggi, i: usize) -> Result<Permutation, AnalysisError> {
    if i == 0 || i + 2 > s.rank() {
        return Err(AnalysisError::IndexOutOfRange(i));
    }
    let g = s.generators();
    Ok(g[i].then(&g[i + 1]).pow(3))
}

/// Vector of `δ_i`; `Ok(None)` when `δ_i` is not in the kernel.
pub fn delta_vector(s: &Sggi, i: usize, b: &BlockSystem, order: &[usize]) -> Result<Option<KernelVector>, AnalysisError> {
    ensure_pairs(b)?;
    Ok(kernel_vector(&delta(s, i)?, b, order))
}

/// Swaps blocks `order[i-1]` and `order[i]` pointwise, least point to least point.
pub fn beta(b: &BlockSystem, order: &[usize], i: usize) -> Result<Permutation, AnalysisError> {
    ensure_pairs(b)?;
    if i == 0 || i >= order.len() {
        return Err(AnalysisError::IndexOutOfRange(i));
    }
    let (x, y) = (&b.blocks()[order[i - 1]], &b.blocks()[order[i]]);
    Ok(Permutation::from_transpositions(b.degree(), &[(x[0], y[0]), (x[1], y[1])]))
}

/// Vector of `α_i`, where `ρ_i = α_i β_i`; `Ok(None)` if `α_i` moves a block.
pub fn alpha_vector(s: &Sggi, i: usize, b: &BlockSystem, order: &[usize]) -> Result<Option<KernelVector>, AnalysisError> {
    if i == 0 || i >= s.rank() {
        return Err(AnalysisError::IndexOutOfRange(i));
    }
    let a = s.generators()[i].then(&beta(b, order, i)?);
    Ok(kernel_vector(&a, b, order))
}

/// An entry of the table of possibilities for `δ̃_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table3Cell {
    Form(NamedForm),
    Odd,
}

impl fmt::Display for Table3Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Table3Cell::Form(n) => write!(f, "{n}"),
            Table3Cell::Odd => f.write_str("odd"),
        }
    }
}

#[derive(Clone, Copy)]
enum Tpl {
    O,
    U,
    L(isize),
    R(isize),
    V(isize),
    T(isize),
    Odd,
}

impl Tpl {
    fn at(self, i: usize) -> Option<Table3Cell> {
        let k = |d: isize| usize::try_from(i as isize + d).ok();
        Some(match self {
            Tpl::O => Table3Cell::Form(NamedForm::O),
            Tpl::U => Table3Cell::Form(NamedForm::U),
            Tpl::L(d) => Table3Cell::Form(NamedForm::L(k(d)?)),
            Tpl::R(d) => Table3Cell::Form(NamedForm::R(k(d)?)),
            Tpl::V(d) => Table3Cell::Form(NamedForm::V(k(d)?)),
            Tpl::T(d) => Table3Cell::Form(NamedForm::T(k(d)?)),
            Tpl::Odd => Table3Cell::Odd,
        })
    }
}

struct Table3Block {
    rows: &'static [Tpl],
    cols: &'static [Tpl],
    cells: &'static [&'static [Tpl]],
}

const MIDDLE: Table3Block = Table3Block {
    rows: &[Tpl::O, Tpl::L(-1), Tpl::R(1), Tpl::V(-1)],
    cols: &[Tpl::O, Tpl::L(0), Tpl::R(2), Tpl::V(0)],
    cells: &[
        &[Tpl::O, Tpl::L(2), Tpl::R(2), Tpl::U],
        &[Tpl::L(-1), Tpl::Odd, Tpl::T(-1), Tpl::R(-1)],
        &[Tpl::R(-1), Tpl::T(-1), Tpl::Odd, Tpl::L(-1)],
        &[Tpl::U, Tpl::R(2), Tpl::L(2), Tpl::O],
    ],
};

const FIRST: Table3Block = Table3Block {
    rows: &[Tpl::O, Tpl::R(1)],
    cols: &[Tpl::O, Tpl::L(0), Tpl::R(2), Tpl::V(0)],
    cells: &[&[Tpl::O, Tpl::Odd, Tpl::R(2), Tpl::U], &[Tpl::U, Tpl::R(2), Tpl::Odd, Tpl::O]],
};

const LAST: Table3Block = Table3Block {
    rows: &[Tpl::O, Tpl::L(-1), Tpl::R(1), Tpl::V(-1)],
    cols: &[Tpl::O, Tpl::L(0)],
    cells: &[&[Tpl::O, Tpl::U], &[Tpl::L(-1), Tpl::Odd], &[Tpl::Odd, Tpl::L(-1)], &[Tpl::U, Tpl::O]],
};

/// Outcome of looking up `(α̃_i, α̃_{i+1})` in the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table3Lookup {
    Cell { row: NamedForm, col: NamedForm, cell: Table3Cell },
    RowNotListed,
    ColumnNotListed,
}

fn template_matches(t: Tpl, i: usize, bits: &[u8]) -> Option<NamedForm> {
    match t.at(i)? {
        Table3Cell::Form(f) if f.bits(bits.len()).as_deref() == Some(bits) => Some(f),
        _ => None,
    }
}

/// Looks up the entry for `(α̃_i, α̃_{i+1})`, matching by vector at length `m`.
pub fn table3_lookup(i: usize, r: usize, alpha_i: &[u8], alpha_next: &[u8]) -> Table3Lookup {
    let block = if i == 1 {
        &FIRST
    } else if i + 2 == r {
        &LAST
    } else {
        &MIDDLE
    };
    let Some((ri, row)) = block.rows.iter().enumerate().find_map(|(k, &t)| template_matches(t, i, alpha_i).map(|f| (k, f)))
    else {
        return Table3Lookup::RowNotListed;
    };
    let Some((ci, col)) = block.cols.iter().enumerate().find_map(|(k, &t)| template_matches(t, i, alpha_next).map(|f| (k, f)))
    else {
        return Table3Lookup::ColumnNotListed;
    };
    let cell = block.cells[ri][ci].at(i).unwrap_or(Table3Cell::Form(NamedForm::Other));
    Table3Lookup::Cell { row, col, cell }
}

/// Cell vector equality, so degenerate forms (e.g. `R_m = O`) compare correctly.
pub fn cell_matches(cell: Table3Cell, v: &KernelVector) -> bool {
    match cell {
        Table3Cell::Odd => false,
        Table3Cell::Form(f) => f.bits(v.bits.len()).as_deref() == Some(&v.bits[..]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_perm;
    use crate::sggi::make_sggi;

    fn wreath_c2_sym(m: usize) -> (PermGroup, BlockSystem) {
        let n = 2 * m;
        let mut gens = vec![Permutation::from_transpositions(n, &[(0, 1)])];
        let cyc: Vec<usize> = (0..n).map(|x| (x + 2) % n).collect();
        gens.push(Permutation::from_images(&cyc).unwrap());
        gens.push(Permutation::from_transpositions(n, &[(0, 2), (1, 3)]));
        let b = BlockSystem::new(n, (0..m).map(|k| vec![2 * k, 2 * k + 1]).collect()).unwrap();
        (PermGroup::new(n, gens).unwrap(), b)
    }

    #[test]
    fn wreath_kernel() {
        let (g, b) = wreath_c2_sym(7);
        let res = block_action(&g, &b).unwrap();
        assert_eq!((res.image_order, res.kernel_order), (5040, 128));
        assert_eq!(classify_kernel(&res, 7), KernelClass::C2PowM);
        assert_eq!(wreath_index(&res, 7), 1);
        let k = PermGroup::new(14, res.kernel_generators.clone()).unwrap();
        assert_eq!(k.order(), 128);
    }

    #[test]
    fn not_invariant_is_rejected() {
        let g = PermGroup::new(4, vec![parse_perm("(1,2,3,4)", 4).unwrap()]).unwrap();
        let b = BlockSystem::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(block_action(&g, &b).unwrap_err(), AnalysisError::NotInvariant);
    }

    #[test]
    fn named_forms() {
        let cases: &[(&[u8], NamedForm)] = &[
            (&[0, 0, 0, 0, 0, 0, 0], NamedForm::O),
            (&[1, 1, 1, 1, 1, 1, 1], NamedForm::U),
            (&[1, 1, 0, 0, 0, 0, 0], NamedForm::L(2)),
            (&[0, 0, 0, 1, 1, 1, 1], NamedForm::R(3)),
            (&[1, 0, 0, 1, 1, 1, 1], NamedForm::V(1)),
            (&[1, 1, 0, 0, 0, 1, 1], NamedForm::T(2)),
            (&[1, 0, 1, 0, 1, 0, 1], NamedForm::Other),
        ];
        for (bits, form) in cases {
            assert_eq!(NamedForm::of_bits(bits), *form, "{bits:?}");
            if *form != NamedForm::Other {
                assert_eq!(form.bits(7).unwrap(), bits.to_vec());
            }
        }
    }

    #[test]
    fn delta_of_simplex_is_trivial() {
        let s = make_sggi(
            ["(1,2)", "(2,3)", "(3,4)", "(4,5)"]
                .iter()
                .map(|t| parse_perm(t, 6).unwrap())
                .collect(),
        )
        .unwrap();
        assert!(delta(&s, 1).unwrap().is_identity());
        assert!(delta(&s, 0).is_err());
        assert!(delta(&s, 3).is_err());
    }

    #[test]
    fn table_lookup_middle() {
        let m = 9;
        let o = NamedForm::O.bits(m).unwrap();
        let l3 = NamedForm::L(3).bits(m).unwrap();
        let Table3Lookup::Cell { cell, .. } = table3_lookup(3, 9, &o, &l3) else { panic!() };
        assert_eq!(cell, Table3Cell::Form(NamedForm::L(5)));
        let v2 = NamedForm::V(2).bits(m).unwrap();
        let Table3Lookup::Cell { cell, .. } = table3_lookup(3, 9, &v2, &o) else { panic!() };
        assert_eq!(cell, Table3Cell::Form(NamedForm::U));
        assert_eq!(table3_lookup(3, 9, &NamedForm::T(1).bits(m).unwrap(), &o), Table3Lookup::RowNotListed);
    }
}
