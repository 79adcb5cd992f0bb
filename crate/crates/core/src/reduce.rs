//! Block configurations built from SAT formulas, set families, graphs and
//! binary linear systems, with decoders from cyclic transversals back to the
//! original objects.

use std::collections::{BTreeSet, VecDeque};

use serde::Deserialize;

use crate::config::{BlockConfiguration, CoordIndex};
use crate::enumerate::{cyclic_transversals, Transversal};
use crate::gf2::{BitMatrix, BitVec};
use crate::{CtpError, Limits, Result};

fn invalid(msg: impl Into<String>) -> CtpError {
    CtpError::InvalidInput(msg.into())
}

/// A CNF formula; literals are nonzero integers, `-v` negating variable `v`
/// (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct SatFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl SatFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        let f = SatFormula { num_vars, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.num_vars];
        for (i, c) in self.clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(invalid(format!("clause {} is empty", i + 1)));
            }
            let mut vars = BTreeSet::new();
            for &l in c {
                let v = l.unsigned_abs() as usize;
                if l == 0 || v > self.num_vars {
                    return Err(invalid(format!("literal {l} out of range in clause {}", i + 1)));
                }
                if !vars.insert(v) {
                    return Err(invalid(format!("variable {v} repeated in clause {}", i + 1)));
                }
                used[v - 1] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(invalid(format!("variable {} does not appear in any clause", v + 1)));
        }
        Ok(())
    }

    pub fn max_clause_len(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: SatFormula = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    /// DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header, and
    /// zero-terminated clauses.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                match parts.as_slice() {
                    ["cnf", v, c] => {
                        let bad = |_| CtpError::Parse(format!("bad header {line:?}"));
                        header = Some((v.parse().map_err(bad)?, c.parse().map_err(bad)?));
                    }
                    _ => return Err(CtpError::Parse(format!("bad header {line:?}"))),
                }
                continue;
            }
            for tok in line.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| CtpError::Parse(format!("bad literal {tok:?}")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(l);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let (num_vars, count) = header.ok_or_else(|| CtpError::Parse("missing p cnf header".into()))?;
        if count != clauses.len() {
            return Err(CtpError::Parse(format!("header declares {count} clauses, found {}", clauses.len())));
        }
        Self::new(num_vars, clauses)
    }
}

/// A family of non-empty subsets of `0..ground`; duplicates allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    ground: usize,
    members: Vec<Vec<usize>>,
}

impl SetFamily {
    /// Members are sorted and deduplicated internally.
    pub fn new(ground: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut out = Vec::with_capacity(members.len());
        for (k, m) in members.into_iter().enumerate() {
            let set: BTreeSet<usize> = m.into_iter().collect();
            if set.is_empty() {
                return Err(invalid(format!("member {} is empty", k + 1)));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= ground) {
                return Err(invalid(format!("element {} outside the ground set", e + 1)));
            }
            out.push(set.into_iter().collect());
        }
        Ok(SetFamily { ground, members: out })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    /// `{"ground": m, "members": [[1, 2], ...]}`, 1-based.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            ground: usize,
            members: Vec<Vec<usize>>,
        }
        let f: File = serde_json::from_str(text)?;
        let members = f
            .members
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|e| e.checked_sub(1).ok_or_else(|| invalid("elements are 1-based")))
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        Self::new(f.ground, members)
    }
}

/// Simple undirected graph on nodes `0..nodes`; edges are stored as
/// `(u, v)` with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u == v {
                return Err(invalid(format!("loop at node {}", u + 1)));
            }
            if u >= nodes || v >= nodes {
                return Err(invalid(format!("edge ({}, {}) out of range", u + 1, v + 1)));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(invalid(format!("parallel edge ({}, {})", u + 1, v + 1)));
            }
        }
        Ok(Graph {
            nodes,
            edges: set.into_iter().collect(),
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|u| (u - 1, u)).collect();
        Graph::new(n, &edges).unwrap()
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn first_isolated(&self) -> Option<usize> {
        (0..self.nodes).find(|&v| self.degree(v) == 0)
    }

    /// `{"nodes": n, "edges": [[u, v], ...]}`, 1-based.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct File {
            nodes: usize,
            edges: Vec<[usize; 2]>,
        }
        let f: File = serde_json::from_str(text)?;
        let edges = f
            .edges
            .iter()
            .map(|[u, v]| match (u.checked_sub(1), v.checked_sub(1)) {
                (Some(a), Some(b)) => Ok((a, b)),
                _ => Err(invalid("nodes are 1-based")),
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(f.nodes, &edges)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    Sat,
    StableSet,
    Packing,
    PackingSmall,
    Matching,
    PerfectMatching,
    Subspace,
    Cut,
}

/// A configuration together with one coordinate per original 0/1 variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub kind: ReductionKind,
    pub config: BlockConfiguration,
    pub projection: Vec<CoordIndex>,
}

impl ReductionResult {
    /// The original 0/1 vector: bit `k` is set iff the transversal picks the
    /// element of `projection[k]` in its block.
    pub fn decode(&self, xi: &Transversal) -> Result<Vec<bool>> {
        if !xi.is_valid_for(&self.config) {
            return Err(invalid("transversal does not belong to the configuration"));
        }
        Ok(self
            .projection
            .iter()
            .map(|c| xi.entries()[c.block] == c.elem)
            .collect())
    }

    /// Decoded images of all cyclic transversals, sorted.
    pub fn solutions(&self, limits: &Limits) -> Result<Vec<Vec<bool>>> {
        let mut out = cyclic_transversals(&self.config, limits)?
            .iter()
            .map(|xi| self.decode(xi))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }
}

fn unit(d: usize, j: usize) -> BitVec {
    BitVec::unit(d, j)
}

/// One block per variable, `{w(v, true), w(v, false)}`, then one block per
/// clause holding every nonzero truth pattern on that clause's own bits.
/// `k` bounds the clause length.
pub fn from_sat(f: &SatFormula, k: usize) -> Result<ReductionResult> {
    f.validate()?;
    if f.max_clause_len() > k {
        return Err(invalid(format!("clause of length {} exceeds k = {k}", f.max_clause_len())));
    }
    let mut offsets = Vec::with_capacity(f.clauses.len());
    let mut d = 0;
    for c in &f.clauses {
        offsets.push(d);
        d += c.len();
    }
    let mut truthy = vec![BitVec::zero(d); f.num_vars];
    let mut falsy = vec![BitVec::zero(d); f.num_vars];
    for (c, &off) in f.clauses.iter().zip(&offsets) {
        for (j, &l) in c.iter().enumerate() {
            let v = l.unsigned_abs() as usize - 1;
            let target = if l > 0 { &mut truthy[v] } else { &mut falsy[v] };
            *target = target.with_bit(off + j, true);
        }
    }
    let mut blocks: Vec<Vec<BitVec>> = (0..f.num_vars).map(|v| vec![truthy[v], falsy[v]]).collect();
    for (c, &off) in f.clauses.iter().zip(&offsets) {
        let patterns = (1u64..1 << c.len())
            .map(|z| BitVec::new(d, z << off))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(patterns);
    }
    let config = BlockConfiguration::new(d, blocks)?;
    let projection = (0..f.num_vars).map(|v| CoordIndex::new(v, truthy[v])).collect();
    Ok(ReductionResult {
        kind: ReductionKind::Sat,
        config,
        projection,
    })
}

/// 2-SAT with clause `(not u or not v)` per edge; true means "in the set".
pub fn stable_set_config(g: &Graph) -> Result<ReductionResult> {
    if let Some(v) = g.first_isolated() {
        return Err(invalid(format!("node {} is isolated", v + 1)));
    }
    let clauses = g
        .edges()
        .iter()
        .map(|&(u, v)| vec![-(u as i64 + 1), -(v as i64 + 1)])
        .collect();
    let mut r = from_sat(&SatFormula::new(g.nodes(), clauses)?, 2)?;
    r.kind = ReductionKind::StableSet;
    Ok(r)
}

/// Blocks `{0, w(H)}` per member, then `{0} + {w(H, e) : e in H}` per ground
/// element. Coordinates `(H, j)` are laid out member by member.
pub fn packing_config(fam: &SetFamily) -> Result<ReductionResult> {
    let d: usize = fam.members().iter().map(Vec::len).sum();
    let m = fam.members().len();
    let mut blocks: Vec<Vec<BitVec>> = Vec::with_capacity(m + fam.ground());
    let mut elem_blocks: Vec<Vec<BitVec>> = vec![vec![BitVec::zero(d)]; fam.ground()];
    let mut projection = Vec::with_capacity(m);
    let mut off = 0;
    for (h, members) in fam.members().iter().enumerate() {
        let head = unit(d, off);
        blocks.push(vec![BitVec::zero(d), head]);
        projection.push(CoordIndex::new(h, head));
        let len = members.len();
        for (j, &e) in members.iter().enumerate() {
            let mut w = unit(d, off + j);
            if j + 1 < len {
                w = w.with_bit(off + j + 1, true);
            }
            elem_blocks[e].push(w);
        }
        off += len;
    }
    blocks.extend(elem_blocks);
    Ok(ReductionResult {
        kind: ReductionKind::Packing,
        config: BlockConfiguration::new(d, blocks)?,
        projection,
    })
}

/// Only element blocks; member `H` uses `|H| - 1` coordinates and is
/// represented by its smallest element.
pub fn packing_config_small(fam: &SetFamily) -> Result<ReductionResult> {
    small_packing(fam, false, ReductionKind::PackingSmall)
}

fn small_packing(fam: &SetFamily, drop_zero: bool, kind: ReductionKind) -> Result<ReductionResult> {
    if let Some(k) = fam.members().iter().position(|h| h.len() < 2) {
        return Err(invalid(format!("member {} has fewer than two elements", k + 1)));
    }
    let d: usize = fam.members().iter().map(|h| h.len() - 1).sum();
    let mut blocks: Vec<Vec<BitVec>> = vec![Vec::new(); fam.ground()];
    if !drop_zero {
        for b in blocks.iter_mut() {
            b.push(BitVec::zero(d));
        }
    }
    let mut projection = Vec::with_capacity(fam.members().len());
    let mut off = 0;
    for members in fam.members() {
        let len = members.len();
        for (j, &e) in members.iter().enumerate() {
            let w = if j == 0 {
                unit(d, off)
            } else if j + 1 < len {
                unit(d, off + j - 1).with_bit(off + j, true)
            } else {
                unit(d, off + len - 2)
            };
            if j == 0 {
                projection.push(CoordIndex::new(e, w));
            }
            blocks[e].push(w);
        }
        off += len - 1;
    }
    if let Some(e) = blocks.iter().position(Vec::is_empty) {
        return Err(invalid(format!("element {} lies in no member", e + 1)));
    }
    Ok(ReductionResult {
        kind,
        config: BlockConfiguration::new(d, blocks)?,
        projection,
    })
}

fn edge_family(g: &Graph) -> Result<SetFamily> {
    SetFamily::new(g.nodes(), g.edges().iter().map(|&(u, v)| vec![u, v]).collect())
}

/// Matchings of `g`: the small packing configuration of its edges over the
/// node set. Projection bit `k` is edge `k` of `g.edges()`.
pub fn matching_config(g: &Graph) -> Result<ReductionResult> {
    small_packing(&edge_family(g)?, false, ReductionKind::Matching)
}

/// As [`matching_config`] with the zero element removed from every node
/// block. Fails on an isolated node, whose block would be empty.
pub fn perfect_matching_config(g: &Graph) -> Result<ReductionResult> {
    if let Some(v) = g.first_isolated() {
        return Err(invalid(format!("node {} is isolated", v + 1)));
    }
    small_packing(&edge_family(g)?, true, ReductionKind::PerfectMatching)
}

fn columns(m: &BitMatrix) -> Result<Vec<BitVec>> {
    if m.nrows() == 0 {
        return Err(invalid("matrix has no rows"));
    }
    (0..m.ncols())
        .map(|c| {
            let bits = (0..m.nrows()).fold(0u64, |acc, r| acc | (m.entry(r, c) as u64) << r);
            BitVec::new(m.nrows(), bits)
        })
        .collect()
}

/// Blocks `{M_col_i, 0}` per column and, when `rhs_block`, the singleton
/// `{b}`; the decoded vectors are the 0/1 solutions of `M x = b`.
pub fn bsp_config(m: &BitMatrix, b: Option<&BitVec>, rhs_block: bool) -> Result<ReductionResult> {
    let cols = columns(m)?;
    if let Some(c) = cols.iter().position(BitVec::is_zero) {
        return Err(invalid(format!("column {} is zero", c + 1)));
    }
    let r = m.nrows();
    let rhs = match b {
        Some(v) if v.width() != r => {
            return Err(CtpError::WidthMismatch {
                expected: r,
                found: v.width(),
            })
        }
        Some(v) => *v,
        None => BitVec::zero(r),
    };
    if !rhs_block && !rhs.is_zero() {
        return Err(invalid("a nonzero right-hand side needs its own block"));
    }
    let mut blocks: Vec<Vec<BitVec>> = cols.iter().map(|c| vec![*c, BitVec::zero(r)]).collect();
    if rhs_block {
        blocks.push(vec![rhs]);
    }
    Ok(ReductionResult {
        kind: ReductionKind::Subspace,
        config: BlockConfiguration::new(r, blocks)?,
        projection: cols.iter().enumerate().map(|(i, c)| CoordIndex::new(i, *c)).collect(),
    })
}

/// Fundamental cycles of a breadth-first spanning forest, one row per
/// non-tree edge in edge order; columns follow `g.edges()`.
pub fn cycle_space_matrix(g: &Graph) -> Result<BitMatrix> {
    let n = g.nodes();
    let m = g.edges().len();
    if m > crate::gf2::MAX_WIDTH {
        return Err(CtpError::InvalidWidth(m));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        adj[u].push((v, k));
        adj[v].push((u, k));
    }
    // parent edge and depth per node
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; m];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(v, k) in &adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = Some((u, k));
                    tree[k] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    let mut rows = Vec::new();
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        if tree[k] {
            continue;
        }
        let mut bits = 1u64 << k;
        let (mut a, mut b) = (u, v);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            let (p, e) = parent[a].expect("non-root has a parent");
            bits ^= 1 << e;
            a = p;
        }
        rows.push(bits);
    }
    Ok(BitMatrix::from_raw(m.max(1), rows))
}

/// Cuts of `g` as the binary subspace orthogonal to its cycle space. Fails
/// on forests and on graphs with a bridge (a zero column).
pub fn cut_config(g: &Graph, rhs_block: bool) -> Result<ReductionResult> {
    if g.edges().is_empty() {
        return Err(invalid("graph has no edges"));
    }
    let mut r = bsp_config(&cycle_space_matrix(g)?, None, rhs_block)?;
    r.kind = ReductionKind::Cut;
    Ok(r)
}

/// `(Omega, Omega)`: its CTP is a simplex with one vertex per element.
pub fn simplex_config(omega: &[BitVec]) -> Result<BlockConfiguration> {
    let first = omega.first().ok_or_else(|| invalid("empty element set"))?;
    BlockConfiguration::new(first.width(), vec![omega.to_vec(), omega.to_vec()])
}

/// The `q`-cube as a product of `q` one-dimensional simplices.
pub fn cube_config(q: usize) -> Result<BlockConfiguration> {
    if q == 0 {
        return Err(invalid("cube dimension must be positive"));
    }
    let seg = simplex_config(&[BitVec::zero(1), BitVec::unit(1, 0)])?;
    let mut out = seg.clone();
    for _ in 1..q {
        out = BlockConfiguration::product(&out, &seg)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::vertices;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn nand_clause() {
        let f = SatFormula::new(2, vec![vec![-1, -2]]).unwrap();
        let r = from_sat(&f, 2).unwrap();
        assert_eq!(r.config.len(), 3);
        assert_eq!(r.config.size(), 2 * 2 + 3);
        let sols = r.solutions(&lim()).unwrap();
        assert_eq!(sols, vec![vec![false, false], vec![false, true], vec![true, false]]);
    }

    #[test]
    fn sat_rejects_bad_formulas() {
        assert!(SatFormula::new(2, vec![vec![1, -1]]).is_err());
        assert!(SatFormula::new(3, vec![vec![1, 2]]).is_err());
        assert!(SatFormula::new(2, vec![vec![1, 3]]).is_err());
        let f = SatFormula::new(3, vec![vec![1, 2, 3]]).unwrap();
        assert!(from_sat(&f, 2).is_err());
    }

    #[test]
    fn dimacs_input() {
        let f = SatFormula::from_dimacs("c demo\np cnf 3 2\n1 -2 0\n2 3\n0\n").unwrap();
        assert_eq!(f.clauses, vec![vec![1, -2], vec![2, 3]]);
        assert!(SatFormula::from_dimacs("p cnf 2 2\n1 2 0\n").is_err());
        assert!(SatFormula::from_dimacs("1 2 0\n").is_err());
    }

    #[test]
    fn stable_sets_of_small_graphs() {
        let k3 = stable_set_config(&Graph::complete(3)).unwrap();
        assert_eq!(k3.solutions(&lim()).unwrap().len(), 4);
        assert_eq!(k3.config.size(), 2 * 3 + 3 * 3);
        let p3 = stable_set_config(&Graph::path(3)).unwrap();
        assert_eq!(p3.solutions(&lim()).unwrap().len(), 5);
        assert!(stable_set_config(&Graph::new(3, &[(0, 1)]).unwrap()).is_err());
    }

    #[test]
    fn packing_variants() {
        // stars of the triangle's nodes, over its edges
        let stars = SetFamily::new(3, vec![vec![0, 2], vec![0, 1], vec![1, 2]]).unwrap();
        let big = packing_config(&stars).unwrap();
        assert_eq!(big.config.len(), 3 + 3);
        assert_eq!(big.config.size(), 2 * 3 + 3 + 6);
        let small = packing_config_small(&stars).unwrap();
        assert_eq!(small.config.size(), 3 + 6);
        assert_eq!(big.solutions(&lim()).unwrap(), small.solutions(&lim()).unwrap());
        assert_eq!(big.solutions(&lim()).unwrap().len(), 4);
        assert!(packing_config_small(&SetFamily::new(2, vec![vec![0]]).unwrap()).is_err());
        assert!(SetFamily::new(2, vec![vec![]]).is_err());
    }

    #[test]
    fn matchings() {
        let k4 = Graph::complete(4);
        assert_eq!(matching_config(&k4).unwrap().solutions(&lim()).unwrap().len(), 10);
        assert_eq!(perfect_matching_config(&k4).unwrap().solutions(&lim()).unwrap().len(), 3);
        assert!(perfect_matching_config(&Graph::complete(3)).unwrap().solutions(&lim()).unwrap().is_empty());
        let k3 = matching_config(&Graph::complete(3)).unwrap();
        assert_eq!(k3.config.size(), 3 + 2 * 3);
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(matching_config(&g).unwrap().solutions(&lim()).unwrap().len(), 2);
        assert!(perfect_matching_config(&g).is_err());
    }

    #[test]
    fn parity_and_cuts() {
        let m = BitMatrix::from_strs(3, &["111"]).unwrap();
        let r = bsp_config(&m, None, true).unwrap();
        assert_eq!(r.config.len(), 4);
        let sols = r.solutions(&lim()).unwrap();
        assert_eq!(sols.len(), 4);
        assert!(sols.iter().all(|s| s.iter().filter(|&&b| b).count() % 2 == 0));
        let dropped = bsp_config(&m, None, false).unwrap();
        assert_eq!(dropped.solutions(&lim()).unwrap(), sols);
        let odd = bsp_config(&m, Some(&BitVec::unit(1, 0)), true).unwrap();
        assert!(odd.solutions(&lim()).unwrap().iter().all(|s| s.iter().filter(|&&b| b).count() % 2 == 1));
        let zero_col = BitMatrix::from_strs(3, &["101"]).unwrap();
        assert!(bsp_config(&zero_col, None, true).is_err());
    }

    #[test]
    fn cycle_spaces() {
        assert_eq!(cycle_space_matrix(&Graph::path(4)).unwrap().nrows(), 0);
        let k3 = cycle_space_matrix(&Graph::complete(3)).unwrap();
        assert_eq!(k3, BitMatrix::from_strs(3, &["111"]).unwrap());
        let k4 = cycle_space_matrix(&Graph::complete(4)).unwrap();
        assert_eq!(k4.nrows(), 3);
        assert_eq!(k4.rank(), 3);
        assert_eq!(cut_config(&Graph::complete(3), true).unwrap().solutions(&lim()).unwrap().len(), 4);
        assert_eq!(cut_config(&Graph::cycle(4), true).unwrap().solutions(&lim()).unwrap().len(), 8);
        assert!(cut_config(&Graph::path(3), true).is_err());
    }

    #[test]
    fn simplex_and_cube() {
        let all: Vec<BitVec> = (0..4).map(|e| BitVec::new(2, e).unwrap()).collect();
        let s = simplex_config(&all).unwrap();
        assert_eq!(s, BlockConfiguration::full(2, 2).unwrap());
        assert_eq!(vertices(&s, &lim()).unwrap().len(), 4);
        assert_eq!(vertices(&simplex_config(&all[..1]).unwrap(), &lim()).unwrap().len(), 1);
        assert!(simplex_config(&[]).is_err());
        let c = cube_config(3).unwrap();
        assert_eq!(c.size(), 12);
        assert_eq!(c.rank(), 3);
        assert_eq!(vertices(&c, &lim()).unwrap().len(), 8);
    }

    #[test]
    fn graph_json() {
        let g = Graph::from_json(r#"{"nodes": 3, "edges": [[1, 2], [3, 2]]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert!(Graph::from_json(r#"{"nodes": 2, "edges": [[1, 1]]}"#).is_err());
        assert!(Graph::from_json(r#"{"nodes": 2, "edges": [[0, 1]]}"#).is_err());
        assert!(Graph::from_json(r#"{"nodes": 2, "edges": [[1, 2], [2, 1]]}"#).is_err());
    }
}
