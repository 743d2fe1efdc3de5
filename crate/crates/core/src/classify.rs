//! Verification reports for catalog instances, sggi signatures, and the
//! exhaustive search for small string C-groups.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{self, KernelClass, NamedForm, Table3Lookup};
use crate::blocks::BlockSystem;
use crate::families::{self, DualityPartner, FamilyError, FamilyId, Table};
use crate::group::PermGroup;
use crate::perm::{parse_perm, Permutation};
use crate::prgraph::{CanonicalForm, PRGraph};
use crate::sggi::{make_sggi, IntersectionCheck, IntersectionMode, SchlafliSymbol, Sggi};

/// Largest ambient order accepted by the search.
pub const SEARCH_ORDER_LIMIT: u128 = 1_000_000;
/// Partial groups up to this order are checked for the intersection property
/// during the search; larger ones only at acceptance.
pub const PRUNE_ORDER_LIMIT: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("catalog runs need n even with n/2 >= 7, got n = {0}")]
    CatalogDegree(usize),
    #[error("ambient group of order {0} exceeds the search limit {SEARCH_ORDER_LIMIT}")]
    AmbientTooLarge(u128),
    #[error("target order {target} does not divide the ambient order {ambient}")]
    TargetNotDivisor { target: u128, ambient: u128 },
    #[error("rank range {0}..={1} is empty or starts below 2")]
    BadRankRange(usize, usize),
    #[error("unknown ambient `{0}`")]
    UnknownAmbient(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub status: Status,
    pub evidence: Value,
}

impl Check {
    pub fn of(ok: bool, evidence: Value) -> Self {
        Check { status: if ok { Status::Pass } else { Status::Fail }, evidence }
    }

    pub fn skip(reason: &str) -> Self {
        Check { status: Status::Skip, evidence: json!({ "reason": reason }) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub instance: FamilyId,
    pub params: BTreeMap<String, usize>,
    pub status: Status,
    pub checks: BTreeMap<String, Check>,
    pub schlafli: Option<SchlafliSymbol>,
    pub order: Option<u128>,
    pub timing_ms: Option<u64>,
}

impl VerificationReport {
    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, c)| c.status == Status::Fail).map(|(k, _)| k.as_str()).collect()
    }

    /// `T7#25 x=2` style label.
    pub fn label(&self) -> String {
        let extra: Vec<String> = self.params.iter().filter(|(k, _)| *k != "n").map(|(k, v)| format!("{k}={v}")).collect();
        if extra.is_empty() {
            self.instance.to_string()
        } else {
            format!("{} {}", self.instance, extra.join(" "))
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Run the all-pairs oracle up to this rank.
    pub naive_max_rank: usize,
    pub timing: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { naive_max_rank: 7, timing: true }
    }
}

/// Canonical forms of catalog instances at one `n`, for duality lookups.
pub struct FormIndex {
    entries: Vec<(FamilyId, Option<usize>, CanonicalForm)>,
}

impl FormIndex {
    pub fn build(items: &[(FamilyId, usize, Option<usize>)]) -> Self {
        let entries = items
            .par_iter()
            .filter_map(|&(id, n, p)| families::instantiate_family(id, n, p).ok().map(|g| (id, p, g.canonical_form())))
            .collect();
        FormIndex { entries }
    }

    /// Index over every table entry that can partner `id` at `n`.
    pub fn for_instance(id: FamilyId, n: usize) -> Self {
        let items: Vec<(FamilyId, usize, Option<usize>)> = families::family_catalog()
            .into_iter()
            .filter(|d| same_duality_scope(id.table, d.id.table))
            .flat_map(|d| d.param_values(n).into_iter().map(move |p| (d.id, n, p)))
            .collect();
        Self::build(&items)
    }

    fn partner(&self, id: FamilyId, graph: &PRGraph) -> DualityPartner {
        let dual = graph.dual().canonical_form();
        if graph.canonical_form() == dual {
            return DualityPartner::SelfDual;
        }
        match self.entries.iter().find(|(other, _, f)| same_duality_scope(id.table, other.table) && *f == dual) {
            Some((other, _, _)) if *other == id => DualityPartner::SelfDual,
            Some((other, _, _)) => DualityPartner::Partner(*other),
            None => DualityPartner::Unlisted,
        }
    }
}

fn same_duality_scope(a: Table, b: Table) -> bool {
    let group = |t: Table| if t.is_classification_table() || t == Table::P61 { Table::T4 } else { t };
    group(a) == group(b)
}

fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn perms_json(v: &[Permutation]) -> Vec<String> {
    v.iter().map(|p| p.to_string()).collect()
}

fn witness_json(c: &IntersectionCheck) -> Value {
    match &c.witness {
        Some((j, k)) => json!([j.to_string(), k.to_string()]),
        None => Value::Null,
    }
}

/// Expectations from a table header, for the `|R ∪ C|`, `⟨L⟩` and kernel cases.
struct Header {
    rc: usize,
    l_symmetric: bool,
    l_transitive: Option<bool>,
    l_kernel: KernelClass,
}

fn header(id: FamilyId) -> Option<Header> {
    let h = |rc, l_symmetric, l_transitive, l_kernel| Some(Header { rc, l_symmetric, l_transitive, l_kernel });
    match id.table {
        Table::T4 => h(2, true, Some(id.number >= 7), KernelClass::Trivial),
        Table::T5 => h(1, true, Some(id.number >= 15), KernelClass::Trivial),
        Table::T6 => h(1, false, None, KernelClass::C2),
        Table::T7 => h(1, false, None, KernelClass::C2PowMMinus1),
        _ => None,
    }
}

/// Runs every applicable predicate on one catalog instance.
pub fn verify_instance(id: FamilyId, n: usize, param: Option<usize>, cfg: &VerifyConfig) -> Result<VerificationReport, ClassifyError> {
    let d = families::descriptor(id).ok_or_else(|| FamilyError::UnknownId(id.to_string()))?;
    d.check_domain(n, param)?;
    let index = FormIndex::for_instance(id, n);
    verify_with_index(id, n, param, cfg, &index)
}

fn verify_with_index(
    id: FamilyId,
    n: usize,
    param: Option<usize>,
    cfg: &VerifyConfig,
    index: &FormIndex,
) -> Result<VerificationReport, ClassifyError> {
    let start = Instant::now();
    let d = families::descriptor(id).ok_or_else(|| FamilyError::UnknownId(id.to_string()))?;
    let graph = families::instantiate_family(id, n, param)?;
    let mut params = BTreeMap::new();
    params.insert("n".to_string(), n);
    if let (Some(spec), Some(v)) = (d.param, param) {
        params.insert(spec.name.to_string(), v);
    }
    let mut checks: BTreeMap<String, Check> = BTreeMap::new();
    let mut put = |name: &str, c: Check| {
        checks.insert(name.to_string(), c);
    };
    put("graph_valid", Check::of(true, json!({ "vertices": graph.vertices(), "edges": graph.edges().len(), "rank": graph.rank() })));

    let mut report = VerificationReport {
        instance: id,
        params,
        status: Status::Pass,
        checks: BTreeMap::new(),
        schlafli: None,
        order: None,
        timing_ms: None,
    };
    let s = match graph.to_sggi() {
        Ok(s) => s,
        Err(e) => {
            put("sggi", Check::of(false, json!({ "error": e.to_string() })));
            report.checks = checks;
            return Ok(finish(report, start, cfg));
        }
    };
    let r = s.rank();
    let g = s.group();
    let order = g.order();
    let schlafli = s.schlafli();
    let degree = s.degree();
    put("sggi", Check::of(true, json!({ "rank": r, "degree": degree, "generators": perms_json(s.generators()) })));
    put("independent", Check::of(s.is_independent(), json!({})));

    let rec = s.check_intersection_property(IntersectionMode::Recursive);
    put("intersection_recursive", Check::of(rec.holds, json!({ "witness": witness_json(&rec) })));
    if r <= cfg.naive_max_rank {
        let naive = s.check_intersection_property(IntersectionMode::Naive);
        put("intersection_naive", Check::of(naive.holds, json!({ "witness": witness_json(&naive) })));
        put("oracle_agreement", Check::of(naive.holds == rec.holds, json!({ "naive": naive.holds, "recursive": rec.holds })));
    } else {
        put("intersection_naive", Check::skip("rank above the naive oracle limit"));
        put("oracle_agreement", Check::skip("rank above the naive oracle limit"));
    }

    let expected_rank = d.rank.rank(n);
    put("rank", Check::of(r == expected_rank, json!({ "rank": r, "expected": expected_rank })));
    let transitive = g.is_transitive();
    put("transitive", Check::of(transitive, json!({ "degree": degree })));

    if id.table == Table::HighC {
        put("proper_subgroup", Check::skip("family realizes the full symmetric group"));
    } else {
        let proper = factorial(degree).is_none_or(|f| order < f);
        put("proper_subgroup", Check::of(proper, json!({ "order": order, "degree": degree })));
    }

    let m2_family = matches!(id.table, Table::T8 | Table::P61);
    let block_family = id.table.is_classification_table() || id.table == Table::P61;
    let mut lcr_rows = None;
    if block_family && transitive {
        let systems = g.block_systems().unwrap_or_default();
        let sizes: Vec<usize> = systems.iter().map(|b| b.block_size()).collect();
        put("imprimitive", Check::of(!systems.is_empty(), json!({ "block_system_sizes": sizes })));
        let maximal: Vec<&BlockSystem> = systems.iter().filter(|s| !systems.iter().any(|t| t != *s && s.refines(t))).collect();
        let shapes: Vec<[usize; 2]> = maximal.iter().map(|b| [b.block_size(), b.num_blocks()]).collect();
        let k2m2 = !maximal.is_empty() && maximal.iter().all(|b| b.block_size() == 2 || b.num_blocks() == 2);
        put("k2_or_m2", Check::of(k2m2, json!({ "maximal_systems": shapes })));

        let nat = families::natural_blocks(id, &graph).and_then(|bl| BlockSystem::new(degree, bl).ok());
        match nat {
            Some(b) if b.is_invariant_under(s.generators()) => {
                let is_max = maximal.iter().any(|m| **m == b);
                put(
                    "natural_blocks",
                    Check::of(is_max, json!({ "block_size": b.block_size(), "blocks": b.num_blocks(), "maximal": is_max })),
                );
                lcr_rows = Some(block_checks(id, param, &s, &g, &b, &mut put));
            }
            _ => put("natural_blocks", Check::of(false, json!({ "invariant": false }))),
        }
    } else if block_family {
        put("imprimitive", Check::skip("group is intransitive"));
    }

    let h = degree / 2;
    let mut expected_order = None;
    let mut expected_schlafli: Option<Box<dyn Fn(&[u64]) -> bool>> = None;
    let mut schlafli_rule = "";
    match id.table {
        Table::HighC | Table::Rep2n => expected_order = factorial(n),
        _ => {}
    }
    if id == FamilyId::new(Table::HighC, 1) {
        schlafli_rule = "all entries 3";
        expected_schlafli = Some(Box::new(|e: &[u64]| e.iter().all(|&p| p == 3)));
    }
    if id == FamilyId::new(Table::Rep2n, 2) {
        schlafli_rule = "begins 4, 6";
        expected_schlafli = Some(Box::new(|e: &[u64]| e.starts_with(&[4, 6])));
    }
    if m2_family && lcr_rows == Some(0) {
        expected_order = factorial(h).map(|f| 2 * f);
        schlafli_rule = "2 followed by 3s";
        expected_schlafli = Some(Box::new(|e: &[u64]| e.first() == Some(&2) && e[1..].iter().all(|&p| p == 3)));
    }
    if let Some(want) = expected_order {
        put("order", Check::of(order == want, json!({ "order": order, "expected": want })));
    }
    if let Some(rule) = expected_schlafli {
        put("schlafli", Check::of(rule(schlafli.entries()), json!({ "schlafli": schlafli.to_string(), "rule": schlafli_rule })));
    }

    let computed = index.partner(id, &graph);
    put(
        "duality_partner",
        Check::of(computed == d.duality_partner, json!({ "declared": d.duality_partner, "computed": computed })),
    );

    report.checks = checks;
    report.schlafli = Some(schlafli);
    report.order = Some(order);
    Ok(finish(report, start, cfg))
}

fn finish(mut report: VerificationReport, start: Instant, cfg: &VerifyConfig) -> VerificationReport {
    report.status = if report.checks.values().any(|c| c.status == Status::Fail) { Status::Fail } else { Status::Pass };
    report.timing_ms = cfg.timing.then(|| start.elapsed().as_millis() as u64);
    report
}

/// L/C/R, kernel and vector predicates against the natural block system.
/// Returns `|R|`.
fn block_checks(
    id: FamilyId,
    param: Option<usize>,
    s: &Sggi,
    g: &PermGroup,
    b: &BlockSystem,
    put: &mut impl FnMut(&str, Check),
) -> usize {
    let (k, m) = (b.block_size(), b.num_blocks());
    let lcr = analysis::lcr_decompose(s, b).expect("invariant blocks");
    let bounds = lcr.c.len() < k && lcr.l.len() < m;
    put(
        "lcr",
        Check::of(
            bounds,
            json!({ "L": lcr.l.to_string(), "C": lcr.c.to_string(), "R": lcr.r.to_string(), "k": k, "m": m }),
        ),
    );

    let l_group = PermGroup::new(s.degree(), lcr.l.indices().iter().map(|&i| s.generators()[i].clone()).collect())
        .expect("common degree");
    let l_action = analysis::block_action(&l_group, b).expect("invariant blocks");
    if let Some(hd) = header(id) {
        let rc = lcr.r.len() + lcr.c.len();
        let l_sym = l_action.kernel_order == 1 && factorial(m) == Some(l_action.image_order);
        let l_trans = l_group.is_transitive();
        let l_kernel = analysis::classify_kernel(&l_action, m);
        let ok = rc == hd.rc && l_sym == hd.l_symmetric && hd.l_transitive.is_none_or(|t| t == l_trans) && l_kernel == hd.l_kernel;
        put(
            "case_header",
            Check::of(
                ok,
                json!({
                    "r_union_c": rc, "expected_r_union_c": hd.rc,
                    "l_symmetric": l_sym, "expected_l_symmetric": hd.l_symmetric,
                    "l_transitive": l_trans, "expected_l_transitive": hd.l_transitive,
                    "l_kernel": l_kernel, "expected_l_kernel": hd.l_kernel,
                }),
            ),
        );
    }

    if k != 2 {
        put("kernel", Check::skip("blocks are not pairs"));
        put("delta", Check::skip("blocks are not pairs"));
        return lcr.r.len();
    }
    let ba = analysis::block_action(g, b).expect("invariant blocks");
    let class = analysis::classify_kernel(&ba, m);
    let index = analysis::wreath_index(&ba, m);
    let full = 1u128 << m;
    let index_ok = [1, 2, full / 2, full].contains(&index);
    let swap_member = (index == full / 2).then(|| g.contains(&analysis::all_swap(b)));
    let ok = class != KernelClass::Other && index_ok && swap_member != Some(false);
    put(
        "kernel",
        Check::of(
            ok,
            json!({
                "class": class, "kernel_order": ba.kernel_order, "image_order": ba.image_order,
                "wreath_index": index, "all_swap_member": swap_member, "l_kernel_class": analysis::classify_kernel(&l_action, m),
            }),
        ),
    );

    if s.rank() != m {
        put("delta", Check::skip("rank differs from the number of blocks"));
    } else if lcr.l.indices() != (1..s.rank()).collect::<Vec<_>>() {
        put("delta", Check::skip("L is not rho_1..rho_(r-1)"));
    } else {
        put("delta", delta_check(id, param, s, b));
    }
    lcr.r.len()
}

fn delta_check(id: FamilyId, param: Option<usize>, s: &Sggi, b: &BlockSystem) -> Check {
    let r = s.rank();
    let m = b.num_blocks();
    let order = match analysis::block_path_order(s, b) {
        Ok(o) => o,
        Err(e) => return Check::of(false, json!({ "error": e.to_string() })),
    };
    let mut ok = true;
    let mut rows = Vec::new();
    let mut nontrivial = Vec::new();
    let mut u_count = 0;
    for i in 1..=r.saturating_sub(2) {
        let d = analysis::delta(s, i).expect("index in range");
        let Some(dv) = analysis::kernel_vector(&d, b, &order) else {
            ok = false;
            rows.push(json!({ "i": i, "delta": "NOT_IN_KERNEL" }));
            continue;
        };
        if !d.is_identity() {
            nontrivial.push(i);
        }
        if dv.named_form == NamedForm::U {
            u_count += 1;
        }
        let odd = !d.is_even();
        if odd && dv.named_form != NamedForm::U {
            ok = false;
        }
        let a = analysis::alpha_vector(s, i, b, &order).expect("index in range");
        let a2 = analysis::alpha_vector(s, i + 1, b, &order).expect("index in range");
        let (cell, matched) = match (&a, &a2) {
            (Some(a), Some(a2)) => match analysis::table3_lookup(i, r, &a.bits, &a2.bits) {
                Table3Lookup::Cell { cell, .. } => (cell.to_string(), analysis::cell_matches(cell, &dv)),
                Table3Lookup::RowNotListed => ("ROW_NOT_LISTED".to_string(), false),
                Table3Lookup::ColumnNotListed => ("COLUMN_NOT_LISTED".to_string(), false),
            },
            _ => ("ALPHA_NOT_IN_KERNEL".to_string(), false),
        };
        ok &= matched;
        rows.push(json!({
            "i": i,
            "delta": dv.named_form,
            "alpha_i": a.map(|v| v.named_form),
            "alpha_next": a2.map(|v| v.named_form),
            "table_cell": cell,
            "odd": odd,
        }));
    }
    let rho0 = analysis::kernel_vector(&s.generators()[0], b, &order).map(|v| v.named_form);
    let mut case = Value::Null;
    match id.table {
        Table::T6 => {
            let allowed = [NamedForm::L(1), NamedForm::R(1), NamedForm::L(m - 1), NamedForm::R(m - 1)];
            let case_ok = u_count == 1 && nontrivial.len() == 1 && rho0.is_some_and(|f| allowed.contains(&f));
            ok &= case_ok;
            case = json!({ "u_count": u_count, "rho0": rho0, "ok": case_ok });
        }
        Table::T7 => {
            let x = param.unwrap_or(0);
            let case_ok = nontrivial == [x, x + 1] && rho0 == Some(NamedForm::U);
            ok &= case_ok;
            case = json!({ "expected_nontrivial": [x, x + 1], "rho0": rho0, "ok": case_ok });
        }
        _ => {}
    }
    Check::of(ok, json!({ "block_order": order, "deltas": rows, "nontrivial": nontrivial, "case": case }))
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogSummary {
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped_families: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub n: usize,
    pub reports: Vec<VerificationReport>,
    pub skipped: BTreeMap<String, String>,
    pub duality_closure: Check,
    pub summary: CatalogSummary,
}

/// Every admissible catalog instance at `n`, with the extra parameter swept.
pub fn verify_catalog(n: usize, cfg: &VerifyConfig, jobs: usize) -> Result<CatalogReport, ClassifyError> {
    if !n.is_multiple_of(2) || n / 2 < 7 {
        return Err(ClassifyError::CatalogDegree(n));
    }
    let (instances, skipped) = families::catalog_instances(n);
    let pool = thread_pool(jobs);
    let (index, reports) = pool.install(|| {
        let items: Vec<(FamilyId, usize, Option<usize>)> = instances.iter().map(|&(id, p)| (id, n, p)).collect();
        let index = FormIndex::build(&items);
        let reports: Result<Vec<VerificationReport>, ClassifyError> =
            instances.par_iter().map(|&(id, p)| verify_with_index(id, n, p, cfg, &index)).collect();
        (index, reports)
    });
    drop(index);
    let reports = reports?;
    let mismatched: Vec<String> = reports
        .iter()
        .filter(|r| r.checks.get("duality_partner").is_some_and(|c| c.status == Status::Fail))
        .map(|r| r.label())
        .collect();
    let mut partners: BTreeMap<String, usize> = BTreeMap::new();
    for r in &reports {
        if let Some(c) = r.checks.get("duality_partner") {
            *partners.entry(c.evidence["computed"].as_str().unwrap_or("?").to_string()).or_default() += 1;
        }
    }
    let duality_closure = Check::of(mismatched.is_empty(), json!({ "computed_partners": partners, "mismatched": mismatched }));
    let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
    let summary = CatalogSummary { instances: reports.len(), pass, fail: reports.len() - pass, skipped_families: skipped.len() };
    Ok(CatalogReport {
        n,
        reports,
        skipped: skipped.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        duality_closure,
        summary,
    })
}

fn thread_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool")
}

/// Conjugation-invariant summary of an sggi; equal signatures do not imply
/// isomorphic string C-groups.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Signature {
    pub degree: usize,
    pub rank: usize,
    pub order: u128,
    pub schlafli: Vec<u64>,
    /// Sorted multiset of generator cycle types.
    pub cycle_types: Vec<Vec<usize>>,
    /// Sorted block sizes of the minimal block systems.
    pub min_block_sizes: Vec<usize>,
    /// Sorted kernel classes over the minimal systems with blocks of size two.
    pub kernel_classes: Vec<String>,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sch: Vec<String> = self.schlafli.iter().map(u64::to_string).collect();
        write!(f, "degree {} rank {} order {} {{{}}}", self.degree, self.rank, self.order, sch.join(","))?;
        if !self.min_block_sizes.is_empty() {
            let b: Vec<String> = self.min_block_sizes.iter().map(usize::to_string).collect();
            write!(f, " blocks {}", b.join(","))?;
        }
        if !self.kernel_classes.is_empty() {
            write!(f, " kernel {}", self.kernel_classes.join(","))?;
        }
        Ok(())
    }
}

pub fn signature(s: &Sggi) -> Signature {
    let g = s.group();
    let mut cycle_types: Vec<Vec<usize>> = s.generators().iter().map(Permutation::cycle_type).collect();
    cycle_types.sort();
    let minimal = g.minimal_block_systems().unwrap_or_default();
    let mut min_block_sizes: Vec<usize> = minimal.iter().map(BlockSystem::block_size).collect();
    min_block_sizes.sort_unstable();
    let mut kernel_classes: Vec<String> = minimal
        .iter()
        .filter(|b| b.block_size() == 2)
        .map(|b| {
            let ba = analysis::block_action(&g, b).expect("block system of the group");
            analysis::classify_kernel(&ba, b.num_blocks()).to_string()
        })
        .collect();
    kernel_classes.sort();
    Signature {
        degree: s.degree(),
        rank: s.rank(),
        order: g.order(),
        schlafli: s.schlafli().0,
        cycle_types,
        min_block_sizes,
        kernel_classes,
    }
}

/// The orientation (`s` or its dual) with the smaller signature.
pub fn canonical_orientation(s: &Sggi) -> (Signature, Sggi) {
    let a = signature(s);
    let mut b = a.clone();
    b.schlafli.reverse();
    if b < a {
        (b, s.dual())
    } else {
        (a, s.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchTarget {
    /// Generate the whole ambient group.
    Full,
    /// Generate a subgroup of exactly this order.
    Order(u128),
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub min_rank: usize,
    /// Defaults to degree − 1.
    pub max_rank: Option<usize>,
    pub target: SearchTarget,
    pub require_transitive: bool,
    pub budget: Option<Duration>,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { min_rank: 2, max_rank: None, target: SearchTarget::Full, require_transitive: true, budget: None, jobs: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchHit {
    pub sggi: Sggi,
    pub signature: Signature,
    /// Pairwise non-conjugate representation graphs merged under this signature.
    pub classes: usize,
}

impl SearchHit {
    /// Several non-conjugate representations share the signature; whether
    /// they are isomorphic as string C-groups is not decided.
    pub fn multiplicity_unknown(&self) -> bool {
        self.classes > 1
    }
}

impl Serialize for SearchHit {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        json!({
            "schlafli": SchlafliSymbol(self.signature.schlafli.clone()).to_string(),
            "order": self.signature.order,
            "rank": self.signature.rank,
            "degree": self.signature.degree,
            "generators": perms_json(self.sggi.generators()),
            "signature": self.signature,
            "classes": self.classes,
            "multiplicity_unknown": self.multiplicity_unknown(),
        })
        .serialize(ser)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub ambient_order: u128,
    pub target_order: u128,
    pub involutions: usize,
    /// Accepted generating tuples before deduplication.
    pub raw_count: usize,
    /// False when the time budget ran out.
    pub complete: bool,
    pub hits: Vec<SearchHit>,
}

struct Search<'a> {
    degree: usize,
    invs: &'a [Permutation],
    target: u128,
    min_rank: usize,
    max_rank: usize,
    require_transitive: bool,
    deadline: Option<Instant>,
    aborted: &'a AtomicBool,
}

impl Search<'_> {
    fn perms(&self, tuple: &[usize]) -> Vec<Permutation> {
        tuple.iter().map(|&i| self.invs[i].clone()).collect()
    }

    /// Order of the extended tuple if it survives the pruning rules.
    fn admit(&self, tuple: &[usize], current: &PermGroup, c: usize) -> Option<u128> {
        let cand = &self.invs[c];
        if tuple.contains(&c) || current.contains(cand) {
            return None;
        }
        let k = tuple.len();
        if !tuple[..k.saturating_sub(1)].iter().all(|&j| self.invs[j].commutes_with(cand)) {
            return None;
        }
        let mut gens = self.perms(tuple);
        gens.push(cand.clone());
        let o = PermGroup::new(self.degree, gens.clone()).expect("degree").order();
        if !self.target.is_multiple_of(o) {
            return None;
        }
        if o <= PRUNE_ORDER_LIMIT && !make_sggi(gens).expect("valid sggi").is_string_c_group() {
            return None;
        }
        Some(o)
    }

    fn visit(&self, tuple: &mut Vec<usize>, order: u128, found: &mut Vec<Vec<usize>>) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        if order == self.target {
            if tuple.len() >= self.min_rank && self.accept(tuple) {
                found.push(tuple.clone());
            }
            return;
        }
        if tuple.len() >= self.max_rank {
            return;
        }
        let current = PermGroup::new(self.degree, self.perms(tuple)).expect("degree");
        for c in 0..self.invs.len() {
            if let Some(o) = self.admit(tuple, &current, c) {
                tuple.push(c);
                self.visit(tuple, o, found);
                tuple.pop();
            }
        }
    }

    fn accept(&self, tuple: &[usize]) -> bool {
        let s = make_sggi(self.perms(tuple)).expect("valid sggi");
        (!self.require_transitive || s.group().is_transitive()) && s.is_string_c_group()
    }
}

fn sorted_involutions(ambient: &PermGroup) -> Vec<Permutation> {
    let mut invs = Vec::new();
    ambient.for_each_element(|p| {
        if p.is_involution() {
            invs.push(p.clone());
        }
    });
    invs.sort_by_key(Permutation::images);
    invs
}

/// Least member of each conjugacy class of `invs` under `ambient`.
fn class_representatives(ambient: &PermGroup, invs: &[Permutation]) -> Vec<usize> {
    let pos: HashMap<&Permutation, usize> = invs.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut seen = vec![false; invs.len()];
    let mut reps = Vec::new();
    for start in 0..invs.len() {
        if seen[start] {
            continue;
        }
        reps.push(start);
        seen[start] = true;
        let mut queue = vec![start];
        while let Some(i) = queue.pop() {
            for g in ambient.generators() {
                let j = pos[&invs[i].conjugate_by(g)];
                if !seen[j] {
                    seen[j] = true;
                    queue.push(j);
                }
            }
        }
    }
    reps
}

fn resolve(ambient: &PermGroup, opts: &SearchOptions) -> Result<(u128, usize), ClassifyError> {
    let order = ambient.order();
    if order > SEARCH_ORDER_LIMIT {
        return Err(ClassifyError::AmbientTooLarge(order));
    }
    let max_rank = opts.max_rank.unwrap_or(ambient.degree().saturating_sub(1));
    if opts.min_rank < 2 || max_rank < opts.min_rank {
        return Err(ClassifyError::BadRankRange(opts.min_rank, max_rank));
    }
    let target = match opts.target {
        SearchTarget::Full => order,
        SearchTarget::Order(o) => o,
    };
    if target == 0 || !order.is_multiple_of(target) {
        return Err(ClassifyError::TargetNotDivisor { target, ambient: order });
    }
    Ok((target, max_rank))
}

/// Depth-first search for string C-groups generated by involutions of
/// `ambient`, deduplicated by signature up to duality.
pub fn exhaustive_search(ambient: &PermGroup, opts: &SearchOptions) -> Result<SearchOutcome, ClassifyError> {
    let (target, max_rank) = resolve(ambient, opts)?;
    let invs = sorted_involutions(ambient);
    let reps = class_representatives(ambient, &invs);
    let aborted = AtomicBool::new(false);
    let search = Search {
        degree: ambient.degree(),
        invs: &invs,
        target,
        min_rank: opts.min_rank,
        max_rank,
        require_transitive: opts.require_transitive,
        deadline: opts.budget.map(|b| Instant::now() + b),
        aborted: &aborted,
    };
    let mut seeds: Vec<(Vec<usize>, u128)> = Vec::new();
    for &r0 in &reps {
        let first = PermGroup::new(ambient.degree(), vec![invs[r0].clone()]).expect("degree");
        for c in 0..invs.len() {
            if let Some(o) = search.admit(&[r0], &first, c) {
                seeds.push((vec![r0, c], o));
            }
        }
    }
    let found: Vec<Vec<usize>> = thread_pool(opts.jobs).install(|| {
        seeds
            .into_par_iter()
            .flat_map_iter(|(mut t, o)| {
                let mut out = Vec::new();
                search.visit(&mut t, o, &mut out);
                out
            })
            .collect()
    });
    let raw: Vec<Sggi> = found.iter().map(|t| make_sggi(search.perms(t)).expect("valid sggi")).collect();
    Ok(SearchOutcome {
        ambient_order: ambient.order(),
        target_order: target,
        involutions: invs.len(),
        raw_count: raw.len(),
        complete: !aborted.load(Ordering::Relaxed),
        hits: dedup(raw),
    })
}

/// Every tuple of involutions with no pruning; the reference for the search.
pub fn brute_force_search(ambient: &PermGroup, opts: &SearchOptions) -> Result<Vec<SearchHit>, ClassifyError> {
    let (target, max_rank) = resolve(ambient, opts)?;
    let invs = sorted_involutions(ambient);
    let mut raw = Vec::new();
    for rank in opts.min_rank..=max_rank {
        let mut idx = vec![0usize; rank];
        'tuples: loop {
            let gens: Vec<Permutation> = idx.iter().map(|&i| invs[i].clone()).collect();
            if let Ok(s) = make_sggi(gens) {
                let g = s.group();
                if g.order() == target
                    && (!opts.require_transitive || g.is_transitive())
                    && s.check_intersection_property(IntersectionMode::Naive).holds
                {
                    raw.push(s);
                }
            }
            for pos in (0..rank).rev() {
                idx[pos] += 1;
                if idx[pos] < invs.len() {
                    continue 'tuples;
                }
                idx[pos] = 0;
            }
            break;
        }
    }
    Ok(dedup(raw))
}

fn dedup(raw: Vec<Sggi>) -> Vec<SearchHit> {
    let mut groups: BTreeMap<Signature, Vec<Sggi>> = BTreeMap::new();
    for s in raw {
        let (sig, oriented) = canonical_orientation(&s);
        groups.entry(sig).or_default().push(oriented);
    }
    groups
        .into_iter()
        .map(|(signature, list)| {
            let classes: BTreeSet<CanonicalForm> = list
                .iter()
                .map(|s| {
                    let g = PRGraph::from_sggi(s);
                    g.canonical_form().min(g.dual().canonical_form())
                })
                .collect();
            let sggi = list
                .into_iter()
                .min_by_key(|s| s.generators().iter().map(Permutation::images).collect::<Vec<_>>())
                .expect("nonempty group");
            SearchHit { sggi, signature, classes: classes.len() }
        })
        .collect()
}

/// A built-in ambient group with its default search settings.
#[derive(Debug, Clone)]
pub struct NamedAmbient {
    pub name: &'static str,
    pub description: &'static str,
    pub group: PermGroup,
    pub target: SearchTarget,
    pub min_rank: usize,
    pub max_rank: Option<usize>,
    /// Slow; only run on request.
    pub stretch: bool,
}

pub const AMBIENT_NAMES: [&str; 8] =
    ["alt5-deg6", "sym5-deg6", "c2wrS4-deg8", "s4wrS2-deg8", "s3wrS2-deg6", "c2wrS3-deg6", "sym6-deg10", "sym4"];

fn from_cycles(degree: usize, gens: &[&str]) -> PermGroup {
    let gens = gens.iter().map(|g| parse_perm(g, degree).expect("built-in generator")).collect();
    PermGroup::new(degree, gens).expect("built-in generators")
}

/// Sym(6) on the ten splits of {1..6} into two triples.
fn sym6_on_splits() -> PermGroup {
    let mut splits: Vec<u8> = Vec::new();
    for mask in 0u8..64 {
        if mask.count_ones() == 3 && mask & 1 == 1 {
            splits.push(mask);
        }
    }
    let act = |perm: &[usize]| -> Permutation {
        let images: Vec<usize> = splits
            .iter()
            .map(|&s| {
                let mut t = 0u8;
                for (x, &y) in perm.iter().enumerate() {
                    if s >> x & 1 == 1 {
                        t |= 1 << y;
                    }
                }
                if t & 1 == 0 {
                    t ^= 63;
                }
                splits.iter().position(|&u| u == t).expect("split image")
            })
            .collect();
        Permutation::from_images(&images).expect("action on splits")
    };
    PermGroup::new(10, vec![act(&[1, 0, 2, 3, 4, 5]), act(&[1, 2, 3, 4, 5, 0])]).expect("degree 10")
}

pub fn named_ambient(name: &str) -> Result<NamedAmbient, ClassifyError> {
    let mk = |name, description, group, target, min_rank, max_rank, stretch| NamedAmbient {
        name,
        description,
        group,
        target,
        min_rank,
        max_rank,
        stretch,
    };
    use SearchTarget::*;
    // Degree-6 PSL(2,5) and PGL(2,5): points ∞, 0, 1, 2, 3, 4 are 1..6.
    let psl = ["(2,3,4,5,6)", "(3,6)(4,5)", "(1,2)(3,6)"];
    Ok(match name {
        "alt5-deg6" => mk("alt5-deg6", "Alt(5) = PSL(2,5) on the projective line over GF(5)", from_cycles(6, &psl), Full, 3, None, false),
        "sym5-deg6" => {
            let mut gens = psl.to_vec();
            gens.push("(3,4,6,5)");
            mk("sym5-deg6", "Sym(5) = PGL(2,5) on the projective line over GF(5)", from_cycles(6, &gens), Full, 3, None, false)
        }
        "c2wrS4-deg8" => mk(
            "c2wrS4-deg8",
            "C2 wr Sym(4), blocks {1,2},{3,4},{5,6},{7,8}",
            from_cycles(8, &["(1,2)", "(1,3)(2,4)", "(1,3,5,7)(2,4,6,8)"]),
            Full,
            5,
            Some(5),
            false,
        ),
        "s4wrS2-deg8" => mk(
            "s4wrS2-deg8",
            "Sym(4) wr C2, blocks {1..4},{5..8}; subgroups of order 576",
            from_cycles(8, &["(1,2)", "(1,2,3,4)", "(1,5)(2,6)(3,7)(4,8)"]),
            Order(576),
            5,
            Some(5),
            false,
        ),
        "s3wrS2-deg6" => mk(
            "s3wrS2-deg6",
            "Sym(3) wr C2, blocks {1,2,3},{4,5,6}; subgroups of order 36",
            from_cycles(6, &["(1,2)", "(1,2,3)", "(1,4)(2,5)(3,6)"]),
            Order(36),
            4,
            Some(4),
            false,
        ),
        "c2wrS3-deg6" => mk(
            "c2wrS3-deg6",
            "C2 wr Sym(3), blocks {1,2},{3,4},{5,6}",
            from_cycles(6, &["(1,2)", "(1,3)(2,4)", "(1,3,5)(2,4,6)"]),
            Full,
            4,
            Some(4),
            false,
        ),
        "sym6-deg10" => mk("sym6-deg10", "Sym(6) on the 10 splits of six points into two triples", sym6_on_splits(), Full, 5, Some(5), true),
        "sym4" => mk("sym4", "Sym(4), natural action", PermGroup::symmetric(4), Full, 2, None, false),
        other => return Err(ClassifyError::UnknownAmbient(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambient_orders() {
        let want = [60u128, 120, 384, 1152, 72, 48, 720, 24];
        for (name, o) in AMBIENT_NAMES.iter().zip(want) {
            let a = named_ambient(name).unwrap();
            assert_eq!(a.group.order(), o, "{name}");
            assert!(a.group.is_transitive(), "{name}");
        }
        assert!(named_ambient("nope").is_err());
    }

    #[test]
    fn signature_is_conjugation_invariant() {
        let simplex: Vec<Permutation> = (1..5).map(|i| Permutation::from_transpositions(5, &[(i - 1, i)])).collect();
        let s = make_sggi(simplex).unwrap();
        let sig = signature(&s);
        assert_eq!((sig.degree, sig.rank, sig.order, sig.schlafli.clone()), (5, 4, 120, vec![3, 3, 3]));
        let c = Permutation::from_transpositions(5, &[(0, 4)]);
        assert_eq!(signature(&s.conjugate_by(&c)), sig);
    }

    #[test]
    fn target_must_divide() {
        let a = named_ambient("c2wrS4-deg8").unwrap();
        let opts = SearchOptions { target: SearchTarget::Order(576), min_rank: 5, max_rank: Some(5), ..Default::default() };
        assert!(matches!(exhaustive_search(&a.group, &opts), Err(ClassifyError::TargetNotDivisor { .. })));
    }
}
