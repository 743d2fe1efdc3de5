//! The catalog of permutation representation graph families.
//!
//! Two-row figures use `h = n/2` columns: top row vertices `1..h`, bottom
//! row `h+1..n`, column `c` pairing `c` with `h+c`. A gap `g` joins columns
//! `g` and `g+1`. Single-row figures number vertices left to right.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::prgraph::{GraphError, PRGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Table {
    T4,
    T5,
    T6,
    T7,
    T8,
    HighC,
    Rep2n,
    P61,
}

impl Table {
    fn tag(self) -> &'static str {
        match self {
            Table::T4 => "T4",
            Table::T5 => "T5",
            Table::T6 => "T6",
            Table::T7 => "T7",
            Table::T8 => "T8",
            Table::HighC => "HIGHC",
            Table::Rep2n => "REP2N",
            Table::P61 => "P61",
        }
    }

    /// Tables 4 to 8 of the classification.
    pub fn is_classification_table(self) -> bool {
        matches!(self, Table::T4 | Table::T5 | Table::T6 | Table::T7 | Table::T8)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub table: Table,
    pub number: u32,
}

impl FamilyId {
    pub const fn new(table: Table, number: u32) -> Self {
        FamilyId { table, number }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.table.tag(), self.number)
    }
}

impl Serialize for FamilyId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, FamilyError> {
        let (t, num) = s.split_once('#').ok_or_else(|| FamilyError::UnknownId(s.to_string()))?;
        let table = match t.to_ascii_uppercase().as_str() {
            "T4" => Table::T4,
            "T5" => Table::T5,
            "T6" => Table::T6,
            "T7" => Table::T7,
            "T8" => Table::T8,
            "HIGHC" => Table::HighC,
            "REP2N" => Table::Rep2n,
            "P61" => Table::P61,
            _ => return Err(FamilyError::UnknownId(s.to_string())),
        };
        let number: u32 = num.parse().map_err(|_| FamilyError::UnknownId(s.to_string()))?;
        let id = FamilyId { table, number };
        descriptor(id).map(|d| d.id).ok_or_else(|| FamilyError::UnknownId(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family id `{0}`")]
    UnknownId(String),
    #[error("{id}: {msg}")]
    Domain { id: FamilyId, msg: String },
    #[error("{id}: missing parameter `{param}`")]
    MissingParam { id: FamilyId, param: char },
    #[error("{id}: unexpected parameter `{param}`")]
    UnexpectedParam { id: FamilyId, param: char },
    #[error("{id}: figure produced an invalid graph: {err}")]
    Invalid { id: FamilyId, err: GraphError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn admits(self, v: usize) -> bool {
        v.is_multiple_of(2) == (self == Parity::Even)
    }

    fn word(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Rank as a function of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RankRule {
    HalfN,
    HalfNPlusOne,
    NMinusOne,
    NMinusTwo,
}

impl RankRule {
    pub fn rank(self, n: usize) -> usize {
        match self {
            RankRule::HalfN => n / 2,
            RankRule::HalfNPlusOne => n / 2 + 1,
            RankRule::NMinusOne => n - 1,
            RankRule::NMinusTwo => n - 2,
        }
    }
}

/// Extra parameter `i` or `x`, ranging over `lo..=rank-hi_gap` with optional parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: char,
    pub lo: usize,
    pub hi_gap: usize,
    pub parity: Option<Parity>,
}

impl ParamSpec {
    pub fn values(&self, rank: usize) -> Vec<usize> {
        if rank < self.hi_gap {
            return Vec::new();
        }
        (self.lo..=rank - self.hi_gap).filter(|&v| self.parity.is_none_or(|p| p.admits(v))).collect()
    }
}

/// How the vertices split into the figure's natural blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Layout {
    /// Two rows; columns are blocks of size 2.
    Columns,
    /// Two rows forming two blocks of size `n/2`.
    Rows,
    /// Two rows; the blocks are the two colour classes of the graph.
    Checkerboard,
    /// Single row.
    Path,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityPartner {
    SelfDual,
    Partner(FamilyId),
    /// The dual is not itself a catalog entry (the tables list up to duality).
    Unlisted,
}

impl fmt::Display for DualityPartner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualityPartner::SelfDual => f.write_str("SELF"),
            DualityPartner::Partner(id) => write!(f, "{id}"),
            DualityPartner::Unlisted => f.write_str("UNLISTED"),
        }
    }
}

impl Serialize for DualityPartner {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyDescriptor {
    pub id: FamilyId,
    pub case_tags: &'static str,
    pub rank: RankRule,
    /// Meaning of `n`: points for two-row and path figures; for `REP2N` the
    /// symmetric degree, the graph having `2n` vertices.
    pub min_n: usize,
    pub half_parity: Option<Parity>,
    pub param: Option<ParamSpec>,
    pub layout: Layout,
    pub duality_partner: DualityPartner,
}

impl FamilyDescriptor {
    pub fn vertices(&self, n: usize) -> usize {
        if self.id.table == Table::Rep2n {
            2 * n
        } else {
            n
        }
    }

    /// Checks `n` and the extra parameter against the domain.
    pub fn check_domain(&self, n: usize, param: Option<usize>) -> Result<(), FamilyError> {
        let id = self.id;
        let two_row = self.layout != Layout::Path || id.table == Table::Rep2n;
        if two_row && id.table != Table::Rep2n && !n.is_multiple_of(2) {
            return Err(FamilyError::Domain { id, msg: "n must be even".into() });
        }
        if n < self.min_n {
            return Err(FamilyError::Domain { id, msg: format!("requires n >= {}", self.min_n) });
        }
        if let Some(p) = self.half_parity {
            if !p.admits(n / 2) {
                return Err(FamilyError::Domain { id, msg: format!("requires n/2 {}", p.word()) });
            }
        }
        match (self.param, param) {
            (None, None) => Ok(()),
            (None, Some(_)) => Err(FamilyError::UnexpectedParam { id, param: 'i' }),
            (Some(spec), None) => Err(FamilyError::MissingParam { id, param: spec.name }),
            (Some(spec), Some(v)) => {
                if let Some(p) = spec.parity {
                    if !p.admits(v) {
                        return Err(FamilyError::Domain { id, msg: format!("{} {} required", spec.name, p.word()) });
                    }
                }
                let r = self.rank.rank(n);
                if v < spec.lo || v + spec.hi_gap > r {
                    return Err(FamilyError::Domain {
                        id,
                        msg: format!("{} must lie in {}..={}", spec.name, spec.lo, r.saturating_sub(spec.hi_gap)),
                    });
                }
                Ok(())
            }
        }
    }

    /// Every admissible extra-parameter value at `n` (`[None]` if there is none).
    pub fn param_values(&self, n: usize) -> Vec<Option<usize>> {
        match self.param {
            None => vec![None],
            Some(spec) => spec.values(self.rank.rank(n)).into_iter().map(Some).collect(),
        }
    }
}

const fn fid(table: Table, number: u32) -> FamilyId {
    FamilyId::new(table, number)
}

fn desc(
    id: FamilyId,
    case_tags: &'static str,
    rank: RankRule,
    min_n: usize,
    half_parity: Option<Parity>,
    param: Option<ParamSpec>,
    layout: Layout,
    duality_partner: DualityPartner,
) -> FamilyDescriptor {
    FamilyDescriptor { id, case_tags, rank, min_n, half_parity, param, layout, duality_partner }
}

fn param(name: char, lo: usize, hi_gap: usize, parity: Option<Parity>) -> Option<ParamSpec> {
    Some(ParamSpec { name, lo, hi_gap, parity })
}

/// All 41 descriptors, in table order.
pub fn family_catalog() -> Vec<FamilyDescriptor> {
    use DualityPartner::*;
    use Layout::*;
    use RankRule::*;
    use Table::*;
    let odd = Some(Parity::Odd);
    let even = Some(Parity::Even);
    let mut out = Vec::new();

    let t4_intrans = "|R∪C|=2, ⟨L⟩≅Sym_{n/2} intransitive, G≅C2≀Sym_{n/2}, n/2 odd";
    let t4_trans = "|R∪C|=2, ⟨L⟩≅Sym_{n/2} transitive, G≅C2≀Sym_{n/2}, n/2 odd";
    for number in 1..=12u32 {
        let rank = if matches!(number, 1 | 2 | 7 | 8) { HalfNPlusOne } else { HalfN };
        let tags = if number <= 6 { t4_intrans } else { t4_trans };
        out.push(desc(fid(T4, number), tags, rank, 14, odd, None, Columns, Unlisted));
    }
    for number in 13..=16u32 {
        let tags = if number <= 14 {
            "|R∪C|=1, ⟨L⟩≅Sym_{n/2} intransitive"
        } else {
            "|R∪C|=1, ⟨L⟩≅Sym_{n/2} transitive"
        };
        out.push(desc(fid(T5, number), tags, HalfN, 14, None, None, Columns, Unlisted));
    }
    for number in 17..=24u32 {
        let p = if number <= 20 { param('i', 2, 3, None) } else { None };
        out.push(desc(fid(T6, number), "|R∪C|=1, ⟨L⟩≇Sym_{n/2}, Ker(f)≅C2", HalfN, 14, None, p, Columns, Unlisted));
    }
    for number in 25..=28u32 {
        let (tags, p) = if number <= 26 {
            ("|R∪C|=1, ⟨L⟩≇Sym_{n/2}, Ker(f)≇C2, x even and n/2 odd", param('x', 2, 3, even))
        } else {
            ("|R∪C|=1, ⟨L⟩≇Sym_{n/2}, Ker(f)≇C2, x odd and n/2 odd", param('x', 1, 3, odd))
        };
        out.push(desc(fid(T7, number), tags, HalfN, 14, odd, p, Columns, Unlisted));
    }
    for number in 1..=7u32 {
        let (tags, layout, p) = match number {
            1 => ("m=2, |R|=0, G≅C2×Sym_{n/2}", Rows, None),
            2 => ("m=2, |R|=0, G≅C2×Sym_{n/2}", Checkerboard, None),
            4 => ("m=2, |R|>0", Rows, param('i', 2, 3, None)),
            _ => ("m=2, |R|>0", Rows, None),
        };
        out.push(desc(fid(T8, number), tags, HalfN, 14, None, p, layout, Unlisted));
    }
    out.push(desc(fid(HighC, 1), "simplex, rank n-1, G≅Sym_n", NMinusOne, 3, None, None, Path, SelfDual));
    out.push(desc(fid(HighC, 2), "rank n-2, G≅Sym_n, Schläfli {4,6,3,…,3}", NMinusTwo, 5, None, None, Path, Unlisted));
    out.push(desc(fid(Rep2n, 1), "Sym_n on 2n points, rank n-1", NMinusOne, 4, None, None, Columns, Unlisted));
    out.push(desc(fid(Rep2n, 2), "Sym_n on 2n points, rank n-2", NMinusTwo, 5, None, None, Columns, Unlisted));
    out.push(desc(fid(P61, 1), "m=2, |R|=0, G≅C2×Sym_{n/2}, Schläfli {2,3,…,3}", HalfN, 14, None, None, Rows, Unlisted));
    out.push(desc(fid(P61, 2), "m=2, |R|=0, G≅C2×Sym_{n/2}, Schläfli {2,3,…,3}", HalfN, 14, None, None, Checkerboard, Unlisted));

    for d in out.iter_mut() {
        d.duality_partner = frozen_partner(d.id);
    }
    out
}

/// Duality partners as computed by `compute_duality_partner` at `n = 14`
/// (`n = 8` for `HIGHC`, `n = 7` for `REP2N`).
fn frozen_partner(id: FamilyId) -> DualityPartner {
    match (id.table, id.number) {
        (Table::T8, 4) | (Table::HighC, 1) | (Table::Rep2n, 1) => DualityPartner::SelfDual,
        _ => DualityPartner::Unlisted,
    }
}

/// Finds the catalog entry whose instance at `n` is isomorphic to the dual of
/// `id`'s instance, by canonical-form comparison over every admissible parameter.
pub fn compute_duality_partner(id: FamilyId, n: usize) -> Result<DualityPartner, FamilyError> {
    let d = descriptor(id).ok_or_else(|| FamilyError::UnknownId(id.to_string()))?;
    let p = d.param_values(n).into_iter().next().flatten();
    let dual = instantiate_family(id, n, p)?.dual().canonical_form();
    if instantiate_family(id, n, p)?.canonical_form() == dual {
        return Ok(DualityPartner::SelfDual);
    }
    for other in family_catalog() {
        if other.id.table != id.table && !(id.table.is_classification_table() && other.id.table == Table::P61) {
            continue;
        }
        for q in other.param_values(n) {
            let Ok(g) = instantiate_family(other.id, n, q) else { continue };
            if g.rank() == d.rank.rank(n) && g.canonical_form() == dual {
                return Ok(if other.id == id { DualityPartner::SelfDual } else { DualityPartner::Partner(other.id) });
            }
        }
    }
    Ok(DualityPartner::Unlisted)
}

pub fn descriptor(id: FamilyId) -> Option<FamilyDescriptor> {
    family_catalog().into_iter().find(|d| d.id == id)
}

/// Edge lists of a two-row figure before conversion to a graph.
struct Ladder {
    h: usize,
    top: Vec<Vec<usize>>,
    bottom: Vec<Vec<usize>>,
    vertical: Vec<Vec<usize>>,
}

impl Ladder {
    /// Same single label on both rows at every gap; `gap(g)` for `g in 1..h`.
    fn symmetric(h: usize, gap: impl Fn(usize) -> usize) -> Self {
        let rows: Vec<Vec<usize>> = (1..h).map(|g| vec![gap(g)]).collect();
        Ladder { h, top: rows.clone(), bottom: rows, vertical: vec![Vec::new(); h] }
    }

    /// Labels on the top-row gaps touching column `c`.
    fn incident(&self, c: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if c >= 2 {
            out.extend_from_slice(&self.top[c - 2]);
        }
        if c < self.h {
            out.extend_from_slice(&self.top[c - 1]);
        }
        out
    }

    fn set_vertical(&mut self, f: impl Fn(&Ladder, usize) -> Vec<usize>) {
        let v: Vec<Vec<usize>> = (1..=self.h).map(|c| f(self, c)).collect();
        self.vertical = v;
    }

    /// `pool` minus the incident labels minus `extra`.
    fn complement(&self, c: usize, pool: impl IntoIterator<Item = usize>, extra: &[usize]) -> Vec<usize> {
        let inc = self.incident(c);
        pool.into_iter().filter(|l| !inc.contains(l) && !extra.contains(l)).collect()
    }

    fn edges(&self) -> Vec<(usize, usize, usize)> {
        let h = self.h;
        let mut e = Vec::new();
        for g in 1..h {
            for &l in &self.top[g - 1] {
                e.push((l, g - 1, g));
            }
            for &l in &self.bottom[g - 1] {
                e.push((l, h + g - 1, h + g));
            }
        }
        for c in 1..=h {
            for &l in &self.vertical[c - 1] {
                e.push((l, c - 1, h + c - 1));
            }
        }
        e
    }
}

fn when(cond: bool, labels: &[usize]) -> Vec<usize> {
    if cond {
        labels.to_vec()
    } else {
        Vec::new()
    }
}

/// Builds the graph of `id` at `n` (and `i`/`x` where the figure has one).
pub fn instantiate_family(id: FamilyId, n: usize, param: Option<usize>) -> Result<PRGraph, FamilyError> {
    let d = descriptor(id).ok_or_else(|| FamilyError::UnknownId(id.to_string()))?;
    d.check_domain(n, param)?;
    let r = d.rank.rank(n);
    let (vertices, edges) = match id.table {
        Table::HighC => (n, path_edges(n, id.number)),
        Table::Rep2n => (2 * n, rep2n(n, id.number).edges()),
        Table::P61 => (n, t8(n, id.number, None).edges()),
        Table::T8 => (n, t8(n, id.number, param).edges()),
        Table::T4 => (n, t4(n, id.number).edges()),
        Table::T5 => (n, t5(n, id.number).edges()),
        Table::T6 => (n, t6(n, id.number, param).edges()),
        Table::T7 => (n, t7(n, id.number, param.expect("checked"))),
    };
    PRGraph::new(vertices, r, edges).map_err(|err| FamilyError::Invalid { id, err })
}

fn path_edges(n: usize, number: u32) -> Vec<(usize, usize, usize)> {
    (1..n)
        .map(|g| {
            let label = match number {
                1 => g - 1,
                _ => match g {
                    1 | 3 => 1,
                    2 => 0,
                    _ => g - 2,
                },
            };
            (label, g - 1, g)
        })
        .collect()
}

fn rep2n(n: usize, number: u32) -> Ladder {
    if number == 1 {
        let r = n - 1;
        let mut l = Ladder::symmetric(n, |g| g - 1);
        l.set_vertical(|l, c| l.complement(c, 0..r, &[]));
        l
    } else {
        let r = n - 2;
        let mut l = Ladder::symmetric(n, |g| match g {
            1 | 3 => 1,
            2 => 0,
            _ => g - 2,
        });
        l.set_vertical(|l, c| l.complement(c, 0..r, &when(c >= 5, &[1])));
        l
    }
}

fn t4(n: usize, number: u32) -> Ladder {
    let h = n / 2;
    let plus_one = matches!(number, 1 | 2 | 7 | 8);
    let r = if plus_one { h + 1 } else { h };
    // Horizontal patterns shared by the intransitive/transitive pairs.
    let shifted = |g: usize| g + 1;
    let plain = |g: usize| g;
    let three_two = |g: usize| match g {
        1 => 3,
        2 => 2,
        _ => g,
    };
    let two_one = |g: usize| match g {
        1 => 2,
        2 => 1,
        _ => g - 1,
    };
    let tail_back = move |g: usize| if g == h - 1 { r - 2 } else { g + 1 };
    let tail_back_low = move |g: usize| if g == h - 1 { r - 3 } else { g };
    let mut l = match number {
        1 | 7 => Ladder::symmetric(h, shifted),
        2 | 8 => Ladder::symmetric(h, plain),
        3 | 9 => Ladder::symmetric(h, three_two),
        4 | 10 => Ladder::symmetric(h, two_one),
        5 | 11 => Ladder::symmetric(h, tail_back),
        _ => Ladder::symmetric(h, tail_back_low),
    };
    match number {
        1 => l.set_vertical(|_, c| if c == 1 { vec![0] } else { vec![0, 1] }),
        2 => l.set_vertical(|_, c| if c < h { vec![0, r - 1] } else { vec![0] }),
        3 => l.set_vertical(|_, c| if c <= 2 { vec![0, 1] } else { vec![0] }),
        4 => l.set_vertical(|_, c| if c < h { vec![0, r - 1] } else { vec![0] }),
        5 => l.set_vertical(|_, c| if c == 1 { vec![0] } else { vec![0, 1] }),
        6 => l.set_vertical(|_, c| if c <= h - 2 { vec![0] } else { vec![0, r - 1] }),
        7 => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c == 1, &[1]))),
        8 => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c == h, &[r - 1]))),
        9 => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c >= 3, &[1, 3]))),
        10 => l.set_vertical(|l, c| {
            let mut extra = when(c >= 5, &[2]);
            extra.extend(when(c == h, &[r - 1]));
            l.complement(c, 0..r, &extra)
        }),
        11 => l.set_vertical(|l, c| {
            let mut extra = vec![r - 2];
            extra.extend(when(c == 1, &[1]));
            l.complement(c, 0..r, &extra)
        }),
        _ => l.set_vertical(|l, c| {
            let mut extra = vec![r - 3];
            extra.extend(when(c <= h - 2, &[r - 1]));
            l.complement(c, 0..r, &extra)
        }),
    }
    l
}

fn t5(n: usize, number: u32) -> Ladder {
    let h = n / 2;
    let r = h;
    let mut l = Ladder::symmetric(h, |g| g);
    match number {
        13 => l.set_vertical(|_, c| when(c == 1, &[0])),
        14 => l.set_vertical(|_, c| when(c >= 2, &[0])),
        15 => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c >= 2, &[0]))),
        _ => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c == 1, &[0]))),
    }
    l
}

fn t6(n: usize, number: u32, param: Option<usize>) -> Ladder {
    let h = n / 2;
    let r = h;
    let mut l = Ladder::symmetric(h, |g| g);
    match number {
        17 => {
            let i = param.expect("checked");
            l.set_vertical(|l, c| l.complement(c, 0..=i, &when(c == 1, &[0])));
        }
        18 => {
            let i = param.expect("checked");
            l.set_vertical(|l, c| l.complement(c, 0..=i, &when(c >= 2, &[0])));
        }
        19 => {
            let i = param.expect("checked");
            l.set_vertical(|l, c| {
                let mut v = when(c >= 2, &[0]);
                v.extend(l.complement(c, i + 1..r, &[]));
                v
            });
        }
        20 => {
            let i = param.expect("checked");
            l.set_vertical(|l, c| {
                let mut v = when(c == 1, &[0]);
                v.extend(l.complement(c, i + 1..r, &[]));
                v
            });
        }
        21 => l.set_vertical(|_, c| match c {
            1 => vec![0],
            2 => vec![],
            _ => vec![1],
        }),
        22 => l.set_vertical(|_, c| match c {
            1 => vec![],
            2 => vec![0],
            _ => vec![0, 1],
        }),
        23 => l.set_vertical(|_, c| {
            if c == 1 {
                vec![0, r - 1]
            } else if c <= h - 2 {
                vec![r - 1]
            } else {
                vec![]
            }
        }),
        _ => l.set_vertical(|_, c| {
            if c == 1 {
                vec![r - 1]
            } else if c <= h - 2 {
                vec![0, r - 1]
            } else {
                vec![0]
            }
        }),
    }
    l
}

fn t7(n: usize, number: u32, x: usize) -> Vec<(usize, usize, usize)> {
    let h = n / 2;
    let r = h;
    let mut l = Ladder::symmetric(h, |g| g);
    match number {
        25 => l.set_vertical(|_, c| if c <= x { vec![0, x + 1] } else { vec![0] }),
        26 => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c <= x, &[x + 1]))),
        27 => l.set_vertical(|_, c| if c <= x + 2 { vec![0] } else { vec![0, x + 1] }),
        _ => l.set_vertical(|l, c| l.complement(c, 0..r, &when(c >= x + 3, &[x + 1]))),
    }
    l.edges()
}

fn t8(n: usize, number: u32, param: Option<usize>) -> Ladder {
    let h = n / 2;
    let r = h;
    let mut l = Ladder::symmetric(h, |g| g);
    match number {
        1 => l.set_vertical(|_, _| vec![0]),
        2 => l.set_vertical(|l, c| l.complement(c, 0..r, &[])),
        3 => {
            l.top[0].clear();
            l.set_vertical(|_, _| vec![0]);
        }
        4 => {
            let i = param.expect("checked");
            for g in 1..h {
                l.top[g - 1] = match g {
                    g if g <= i => vec![g - 1],
                    g if g == i + 1 => vec![],
                    g => vec![g],
                };
                l.bottom[g - 1] = match g {
                    g if g < i => vec![g - 1],
                    g if g == i => vec![],
                    g => vec![g],
                };
            }
            l.set_vertical(|_, _| vec![i]);
        }
        5 => {
            l.top[0] = vec![0, 2];
            l.top[1].clear();
            l.bottom[0].clear();
            l.set_vertical(|_, _| vec![1]);
        }
        6 | 7 => {
            l.top[0] = if number == 6 { vec![0, 3] } else { vec![0, 2, 3] };
            l.top[1].clear();
            l.bottom[0] = vec![3];
            l.bottom[1] = vec![2];
            l.set_vertical(|_, _| vec![1]);
        }
        _ => unreachable!("T8 has graphs 1..=7"),
    }
    l
}

/// The figure's natural block system (0-based blocks).
pub fn natural_blocks(id: FamilyId, graph: &PRGraph) -> Option<Vec<Vec<usize>>> {
    let d = descriptor(id)?;
    let v = graph.vertices();
    let h = v / 2;
    match d.layout {
        Layout::Columns => Some((0..h).map(|c| vec![c, h + c]).collect()),
        Layout::Rows => Some(vec![(0..h).collect(), (h..v).collect()]),
        Layout::Checkerboard => {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for c in 0..h {
                if c % 2 == 0 {
                    a.push(c);
                    b.push(h + c);
                } else {
                    b.push(c);
                    a.push(h + c);
                }
            }
            a.sort_unstable();
            b.sort_unstable();
            Some(vec![a, b])
        }
        Layout::Path => None,
    }
}

/// Every admissible `(id, param)` at `n` for the classification tables, plus
/// the reasons for skipped descriptors.
pub fn catalog_instances(n: usize) -> (Vec<(FamilyId, Option<usize>)>, BTreeMap<FamilyId, String>) {
    let mut ok = Vec::new();
    let mut skipped = BTreeMap::new();
    for d in family_catalog() {
        if !(d.id.table.is_classification_table() || d.id.table == Table::P61) {
            continue;
        }
        let values = d.param_values(n);
        if values.is_empty() {
            skipped.insert(d.id, "empty parameter range".to_string());
            continue;
        }
        let mut any = false;
        for p in values {
            match d.check_domain(n, p) {
                Ok(()) => {
                    ok.push((d.id, p));
                    any = true;
                }
                Err(FamilyError::Domain { msg, .. }) => {
                    skipped.insert(d.id, msg);
                }
                Err(e) => {
                    skipped.insert(d.id, e.to_string());
                }
            }
        }
        if any {
            skipped.remove(&d.id);
        }
    }
    (ok, skipped)
}
