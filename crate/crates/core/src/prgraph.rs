//! Permutation representation graphs: edge-labelled multigraphs whose
//! `i`-edges are the transpositions of `ρ_i`.
//!
//! Text form:
//!
//! ```text
//! prg 4 3          # header: vertices, rank
//! 0 1 2 / 1 2 3    # records: label u v, separated by '/' or newlines
//! {0,2} 3 4        # J-edge: one parallel edge per label
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::perm::Permutation;
use crate::sggi::{make_sggi, Sggi, SggiError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("record {record}: {msg}")]
    Syntax { record: usize, msg: String },
    #[error("label {label} not below rank {rank}")]
    LabelOutOfRange { label: usize, rank: usize },
    #[error("vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("label {label} used twice at vertex {vertex}")]
    Matching { label: usize, vertex: usize },
    #[error("label {0} has no edge")]
    UnusedLabel(usize),
    #[error("labels {i},{j} form a component that is not a square: vertices {component:?}")]
    Square { i: usize, j: usize, component: Vec<usize> },
    #[error(transparent)]
    Sggi(#[from] SggiError),
}

/// An `i`-edge between 0-based vertices `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub label: usize,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PRGraph {
    n: usize,
    rank: usize,
    /// Sorted by `(label, u, v)`.
    edges: Vec<Edge>,
}

/// Vertex-renaming invariant form of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub rank: usize,
    pub edges: Vec<(usize, usize, usize)>,
}

impl PRGraph {
    /// Validates 0-based edges `(label, u, v)`.
    pub fn new(n: usize, rank: usize, edges: impl IntoIterator<Item = (usize, usize, usize)>) -> Result<Self, GraphError> {
        let mut list = Vec::new();
        for (label, a, b) in edges {
            if label >= rank {
                return Err(GraphError::LabelOutOfRange { label, rank });
            }
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x + 1, n });
                }
            }
            if a == b {
                return Err(GraphError::Loop(a + 1));
            }
            list.push(Edge { label, u: a.min(b), v: a.max(b) });
        }
        list.sort();
        let g = PRGraph { n, rank, edges: list };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let mut mate = vec![vec![None; self.n]; self.rank];
        for e in &self.edges {
            for x in [e.u, e.v] {
                if mate[e.label][x].is_some() {
                    return Err(GraphError::Matching { label: e.label, vertex: x + 1 });
                }
            }
            mate[e.label][e.u] = Some(e.v);
            mate[e.label][e.v] = Some(e.u);
        }
        for (label, m) in mate.iter().enumerate() {
            if m.iter().all(Option::is_none) {
                return Err(GraphError::UnusedLabel(label));
            }
        }
        for i in 0..self.rank {
            for j in i + 2..self.rank {
                square_check(self.n, &mate[i], &mate[j]).map_err(|component| GraphError::Square {
                    i,
                    j,
                    component: component.into_iter().map(|x| x + 1).collect(),
                })?;
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn to_sggi(&self) -> Result<Sggi, GraphError> {
        let gens = (0..self.rank)
            .map(|i| {
                let pairs: Vec<(usize, usize)> =
                    self.edges.iter().filter(|e| e.label == i).map(|e| (e.u, e.v)).collect();
                Permutation::from_transpositions(self.n, &pairs)
            })
            .collect();
        Ok(make_sggi(gens)?)
    }

    pub fn from_sggi(s: &Sggi) -> Self {
        let mut edges = Vec::new();
        for (label, g) in s.generators().iter().enumerate() {
            for c in g.cycles() {
                edges.push(Edge { label, u: c[0], v: c[1] });
            }
        }
        edges.sort();
        PRGraph { n: s.degree(), rank: s.rank(), edges }
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(_, y) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Per vertex: `(label mask, neighbour)` for each neighbour, sorted by mask.
    fn adjacency(&self) -> Vec<Vec<(u64, usize)>> {
        let mut maps: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); self.n];
        for e in &self.edges {
            *maps[e.u].entry(e.v).or_default() |= 1 << e.label;
            *maps[e.v].entry(e.u).or_default() |= 1 << e.label;
        }
        maps.into_iter()
            .map(|m| {
                let mut v: Vec<(u64, usize)> = m.into_iter().map(|(y, mask)| (mask, y)).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// J-edge records grouped by vertex pair, 1-based.
    fn records(&self) -> Vec<(Vec<usize>, usize, usize)> {
        let mut by_pair: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for e in &self.edges {
            by_pair.entry((e.u, e.v)).or_default().push(e.label);
        }
        by_pair.into_iter().map(|((u, v), labels)| (labels, u + 1, v + 1)).collect()
    }

    /// DSL text, one record per vertex pair.
    pub fn to_dsl(&self) -> String {
        let mut out = format!("prg {} {}\n", self.n, self.rank);
        for (labels, u, v) in self.records() {
            let l = if labels.len() == 1 {
                labels[0].to_string()
            } else {
                format!("{{{}}}", labels.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            };
            let _ = writeln!(out, "{l} {u} {v}");
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph prg {\n");
        for x in 1..=self.n {
            let _ = writeln!(out, "  {x};");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", e.u + 1, e.v + 1, e.label);
        }
        out.push_str("}\n");
        out
    }

    /// Relabels vertices: vertex `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> PRGraph {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.u], perm[e.v]);
                Edge { label: e.label, u: a.min(b), v: a.max(b) }
            })
            .collect();
        edges.sort();
        PRGraph { n: self.n, rank: self.rank, edges }
    }

    /// Same graph with label `i` renamed `r-1-i`.
    pub fn dual(&self) -> PRGraph {
        let mut edges: Vec<Edge> =
            self.edges.iter().map(|e| Edge { label: self.rank - 1 - e.label, u: e.u, v: e.v }).collect();
        edges.sort();
        PRGraph { n: self.n, rank: self.rank, edges }
    }

    /// Colour refinement followed by BFS numbering from every vertex of the
    /// smallest colour class of each component; the least result wins.
    ///
    /// Because every label class is a matching, a BFS that orders neighbours
    /// by connecting label set is determined by its start vertex, so this is
    /// exact for these graphs rather than a heuristic.
    pub fn canonical_form(&self) -> CanonicalForm {
        let adj = self.adjacency();
        let colours = self.refined_colours(&adj);
        let mut comp_of = vec![usize::MAX; self.n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.n {
            if comp_of[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![s];
            comp_of[s] = id;
            let mut i = 0;
            while i < members.len() {
                for &(_, y) in &adj[members[i]] {
                    if comp_of[y] == usize::MAX {
                        comp_of[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            comps.push(members);
        }
        let mut forms: Vec<(usize, Vec<(usize, usize, usize)>)> = comps
            .iter()
            .map(|members| {
                let mut class_size: BTreeMap<usize, usize> = BTreeMap::new();
                for &x in members {
                    *class_size.entry(colours[x]).or_default() += 1;
                }
                let target = class_size.iter().min_by_key(|(c, size)| (**size, **c)).map(|(c, _)| *c).expect("nonempty");
                let best = members
                    .iter()
                    .filter(|&&x| colours[x] == target)
                    .map(|&start| bfs_form(&adj, start, members.len()))
                    .min()
                    .expect("nonempty class");
                (members.len(), best)
            })
            .collect();
        forms.sort();
        let mut edges = Vec::new();
        let mut offset = 0;
        for (size, form) in forms {
            edges.extend(form.into_iter().map(|(l, u, v)| (l, u + offset, v + offset)));
            offset += size;
        }
        edges.sort_unstable();
        CanonicalForm { n: self.n, rank: self.rank, edges }
    }

    fn refined_colours(&self, adj: &[Vec<(u64, usize)>]) -> Vec<usize> {
        let mut colours = vec![0usize; self.n];
        let mut classes = 1;
        loop {
            let sigs: Vec<(usize, Vec<(u64, usize)>)> = (0..self.n)
                .map(|x| {
                    let mut s: Vec<(u64, usize)> = adj[x].iter().map(|&(m, y)| (m, colours[y])).collect();
                    s.sort_unstable();
                    (colours[x], s)
                })
                .collect();
            let mut sorted: Vec<&(usize, Vec<(u64, usize)>)> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| sorted.binary_search(&s).expect("present")).collect();
            let count = sorted.len();
            colours = next;
            if count == classes {
                return colours;
            }
            classes = count;
        }
    }
}

fn bfs_form(adj: &[Vec<(u64, usize)>], start: usize, size: usize) -> Vec<(usize, usize, usize)> {
    let mut index = BTreeMap::new();
    index.insert(start, 0usize);
    let mut order = vec![start];
    let mut i = 0;
    while i < order.len() {
        for &(_, y) in &adj[order[i]] {
            if let std::collections::btree_map::Entry::Vacant(e) = index.entry(y) {
                e.insert(order.len());
                order.push(y);
            }
        }
        i += 1;
    }
    debug_assert_eq!(order.len(), size);
    let mut edges = Vec::new();
    for &x in &order {
        for &(mask, y) in &adj[x] {
            let (a, b) = (index[&x], index[&y]);
            if a < b {
                for l in 0..64 {
                    if mask >> l & 1 == 1 {
                        edges.push((l, a, b));
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Components of the `{i,j}`-subgraph with more than two vertices must be
/// alternating 4-cycles; returns the offending component otherwise.
fn square_check(n: usize, mi: &[Option<usize>], mj: &[Option<usize>]) -> Result<(), Vec<usize>> {
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] || (mi[s].is_none() && mj[s].is_none()) {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let x = comp[k];
            for y in [mi[x], mj[x]].into_iter().flatten() {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                }
            }
            k += 1;
        }
        if comp.len() > 2 && (comp.len() != 4 || comp.iter().any(|&x| mi[x].is_none() || mj[x].is_none())) {
            comp.sort_unstable();
            return Err(comp);
        }
    }
    Ok(())
}

/// Parses the DSL; see the module docs.
pub fn parse_graph(text: &str) -> Result<PRGraph, GraphError> {
    let mut records = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        for rec in line.split('/') {
            let rec = rec.trim();
            if !rec.is_empty() {
                records.push(rec);
            }
        }
    }
    let syntax = |record: usize, msg: &str| GraphError::Syntax { record, msg: msg.to_string() };
    let header = records.first().ok_or_else(|| syntax(0, "missing header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 || parts[0] != "prg" {
        return Err(syntax(0, "header must be `prg <n> <r>`"));
    }
    let n: usize = parts[1].parse().map_err(|_| syntax(0, "bad vertex count"))?;
    let rank: usize = parts[2].parse().map_err(|_| syntax(0, "bad rank"))?;
    if n == 0 || n > crate::perm::MAX_DEGREE || rank == 0 || rank > 64 {
        return Err(syntax(0, "vertex count or rank out of range"));
    }
    let mut edges = Vec::new();
    for (idx, rec) in records.iter().enumerate().skip(1) {
        let (labels, rest) = if let Some(body) = rec.strip_prefix('{') {
            let close = body.find('}').ok_or_else(|| syntax(idx, "unclosed '{'"))?;
            let labels = body[..close]
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| syntax(idx, "bad label")))
                .collect::<Result<Vec<_>, _>>()?;
            (labels, &body[close + 1..])
        } else {
            let mut it = rec.splitn(2, char::is_whitespace);
            let l = it.next().unwrap_or("").parse::<usize>().map_err(|_| syntax(idx, "bad label"))?;
            (vec![l], it.next().unwrap_or(""))
        };
        let ends: Vec<usize> = rest
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| syntax(idx, "bad vertex")))
            .collect::<Result<_, _>>()?;
        if ends.len() != 2 {
            return Err(syntax(idx, "expected `<label> <u> <v>`"));
        }
        for &x in &ends {
            if x == 0 || x > n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        for l in labels {
            edges.push((l, ends[0] - 1, ends[1] - 1));
        }
    }
    PRGraph::new(n, rank, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let g = parse_graph("prg 3 2 / 0 1 2 / 1 2 3").unwrap();
        assert_eq!(g.edges().len(), 2);
        let s = g.to_sggi().unwrap();
        assert_eq!(s.generators()[0].to_string(), "(1,2)");
        assert_eq!(s.generators()[1].to_string(), "(2,3)");
        let d = parse_graph("prg 2 2 / {0,1} 1 2").unwrap();
        assert_eq!(d.edges().len(), 2);
        let multi = parse_graph("prg 4 3 # comment\n0 1 2\n{1} 2 3 / 2 3 4\n").unwrap();
        assert_eq!(multi.rank(), 3);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_graph("prg 3 2 / 2 1 2 / 1 2 3"), Err(GraphError::LabelOutOfRange { label: 2, rank: 2 }));
        assert_eq!(parse_graph("prg 3 2 / 0 1 4 / 1 2 3"), Err(GraphError::VertexOutOfRange { vertex: 4, n: 3 }));
        assert_eq!(parse_graph("prg 3 2 / 0 1 2 / 0 2 3"), Err(GraphError::Matching { label: 0, vertex: 2 }));
        assert_eq!(parse_graph("prg 3 2 / 0 1 2"), Err(GraphError::UnusedLabel(1)));
        assert_eq!(
            parse_graph("prg 3 3 / 0 1 2 / 2 2 3 / 1 1 3"),
            Err(GraphError::Square { i: 0, j: 2, component: vec![1, 2, 3] })
        );
        assert!(matches!(parse_graph("graph 3 2"), Err(GraphError::Syntax { .. })));
        assert!(matches!(parse_graph("prg 3 2 / {0,1 1 2"), Err(GraphError::Syntax { .. })));
    }

    #[test]
    fn squares_are_accepted() {
        let g = parse_graph("prg 4 3 / 0 1 2 / 0 3 4 / 2 1 3 / 2 2 4 / 1 2 3").unwrap();
        assert!(g.to_sggi().is_ok());
    }

    #[test]
    fn dot_output() {
        let g = parse_graph("prg 2 2 / {0,1} 1 2").unwrap();
        assert_eq!(g.to_dot(), "graph prg {\n  1;\n  2;\n  1 -- 2 [label=\"0\"];\n  1 -- 2 [label=\"1\"];\n}\n");
    }

    #[test]
    fn dsl_round_trip() {
        let g = parse_graph("prg 4 3 / {0,2} 1 2 / 1 2 3 / 0 3 4 / 2 3 4").unwrap();
        assert_eq!(g.to_dsl(), "prg 4 3\n{0,2} 1 2\n1 2 3\n{0,2} 3 4\n");
        assert_eq!(parse_graph(&g.to_dsl()).unwrap(), g);
    }

    #[test]
    fn canonical_form_ignores_vertex_names() {
        let g = parse_graph("prg 5 4 / 0 1 2 / 1 2 3 / 2 3 4 / 3 4 5").unwrap();
        let h = g.relabel(&[4, 2, 0, 3, 1]);
        assert_ne!(g, h);
        assert_eq!(g.canonical_form(), h.canonical_form());
        assert_eq!(g.canonical_form(), g.dual().canonical_form());
        let cube = parse_graph("prg 4 3 / {0,2} 1 2 / 1 2 3 / 0 3 4").unwrap();
        assert_ne!(cube.canonical_form(), cube.dual().canonical_form());
        assert_eq!(cube.dual().dual(), cube);
    }
}
