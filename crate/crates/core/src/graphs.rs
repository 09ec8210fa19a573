//! Loopless multigraphs, canonical forms and enumeration up to isomorphism.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Loopless directed multigraph; `edges[(i, j)]` is the multiplicity of `i → j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multigraph {
    n_vertices: usize,
    edges: BTreeMap<(usize, usize), u32>,
}

/// Isomorphism invariant of the underlying undirected multigraph with isolated
/// vertices dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Compact hex rendering used as a stable identifier in reports.
    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::Parse(format!("odd-length key {s:?}")));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(|e| Error::Parse(format!("key {s:?}: {e}"))))
            .collect::<Result<Vec<u8>>>()?;
        let key = CanonicalKey(bytes);
        key.to_graph()?;
        Ok(key)
    }

    /// The canonical representative: components in key order, vertices in
    /// canonical order, every edge directed from the lower to the higher index.
    pub fn to_graph(&self) -> Result<Multigraph> {
        let bad = || Error::InvalidGraph("malformed canonical key".into());
        let mut edges = Vec::new();
        let mut offset = 0usize;
        let mut pos = 0usize;
        let b = &self.0;
        while pos < b.len() {
            let k = b[pos] as usize;
            pos += 1;
            let tri = k * k.saturating_sub(1) / 2;
            if pos + tri > b.len() {
                return Err(bad());
            }
            let mut idx = pos;
            for i in 0..k {
                for j in i + 1..k {
                    if b[idx] > 0 {
                        edges.push((offset + i, offset + j, b[idx] as u32));
                    }
                    idx += 1;
                }
            }
            pos += tri;
            offset += k;
        }
        Multigraph::new(offset.max(1), edges)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Multigraph {
    /// Builds a graph from `(from, to, multiplicity)` triples with 0-based
    /// vertices; repeated pairs accumulate.
    pub fn new<I>(n_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        if n_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut map = BTreeMap::new();
        for (i, j, m) in edges {
            if i == j {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", i + 1)));
            }
            if i >= n_vertices || j >= n_vertices {
                return Err(Error::InvalidGraph(format!("edge ({}, {}) out of range for {n_vertices} vertices", i + 1, j + 1)));
            }
            if m == 0 {
                return Err(Error::InvalidGraph("edge multiplicity must be positive".into()));
            }
            *map.entry((i, j)).or_insert(0) += m;
        }
        Ok(Multigraph { n_vertices, edges: map })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Directed edges with multiplicities in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(i, j), &m)| (i, j, m))
    }

    /// Total number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u32 {
        self.edges.values().sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.n_vertices];
        for (&(i, j), &m) in &self.edges {
            deg[i] += m;
            deg[j] += m;
        }
        deg
    }

    pub fn non_isolated_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d > 0).count()
    }

    /// Every directed multiplicity even.
    pub fn is_square(&self) -> bool {
        self.edges.values().all(|m| m % 2 == 0)
    }

    /// Symmetric matrix of undirected multiplicities.
    pub fn undirected_matrix(&self) -> Vec<Vec<u32>> {
        let mut a = vec![vec![0; self.n_vertices]; self.n_vertices];
        for (&(i, j), &m) in &self.edges {
            a[i][j] += m;
            a[j][i] += m;
        }
        a
    }

    pub fn double(&self) -> Multigraph {
        Multigraph { n_vertices: self.n_vertices, edges: self.edges.iter().map(|(&e, &m)| (e, 2 * m)).collect() }
    }

    /// Vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Multigraph> {
        let n = self.n_vertices;
        if perm.len() != n || perm.iter().collect::<BTreeSet<_>>().len() != n || perm.iter().any(|&p| p >= n) {
            return Err(Error::InvalidGraph(format!("{perm:?} is not a permutation of {n} vertices")));
        }
        Multigraph::new(n, self.edges().map(|(i, j, m)| (perm[i], perm[j], m)))
    }

    /// Reverses the direction of one instance of `from → to`.
    pub fn reverse_one(&self, from: usize, to: usize) -> Result<Multigraph> {
        let mut g = self.clone();
        match g.edges.get_mut(&(from, to)) {
            None => return Err(Error::InvalidGraph(format!("no edge {} -> {}", from + 1, to + 1))),
            Some(m) if *m == 1 => {
                g.edges.remove(&(from, to));
            }
            Some(m) => *m -= 1,
        }
        *g.edges.entry((to, from)).or_insert(0) += 1;
        Ok(g)
    }

    /// Drops isolated vertices, keeping the relative order of the rest.
    pub fn compact(&self) -> Multigraph {
        let deg = self.degrees();
        let mut map = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        for v in 0..self.n_vertices {
            if deg[v] > 0 {
                map[v] = next;
                next += 1;
            }
        }
        Multigraph {
            n_vertices: next.max(1),
            edges: self.edges.iter().map(|(&(i, j), &m)| ((map[i], map[j]), m)).collect(),
        }
    }

    /// Adds isolated vertices up to `n`.
    pub fn with_vertices(&self, n: usize) -> Result<Multigraph> {
        if n < self.n_vertices {
            return Err(Error::TooFewVariables { needed: self.n_vertices, got: n });
        }
        Ok(Multigraph { n_vertices: n, edges: self.edges.clone() })
    }

    /// Vertex sets of connected components, ignoring isolated vertices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n_vertices;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for &(i, j) in self.edges.keys() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let deg = self.degrees();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            if deg[v] > 0 {
                let r = find(&mut parent, v);
                groups.entry(r).or_default().push(v);
            }
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { n: self.n_vertices, edges: self.edges().map(|(i, j, m)| [i + 1, j + 1, m as usize]).collect() }
    }

    pub fn from_json(j: &GraphJson) -> Result<Multigraph> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for &[i, k, m] in &j.edges {
            if i == 0 || k == 0 {
                return Err(Error::InvalidGraph("vertex indices are 1-based".into()));
            }
            let m = u32::try_from(m).map_err(|_| Error::InvalidGraph(format!("multiplicity {m} too large")))?;
            edges.push((i - 1, k - 1, m));
        }
        Multigraph::new(j.n, edges)
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .edges()
            .map(|(i, j, m)| if m == 1 { format!("{}->{}", i + 1, j + 1) } else { format!("{}->{}^{m}", i + 1, j + 1) })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Wire format: `{"n": .., "edges": [[i, j, mult], ...]}`, 1-based, sorted.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 3]>,
}

/// Minimal upper-triangle encoding of one connected component over labelings
/// that list vertices by decreasing degree; only vertices of equal degree are
/// permuted among themselves, which is enough because isomorphisms preserve
/// degrees.
fn component_code(adj: &[Vec<u32>], verts: &[usize]) -> Vec<u8> {
    let deg: Vec<u32> = verts.iter().map(|&v| verts.iter().map(|&w| adj[v][w]).sum()).collect();
    let mut order: Vec<usize> = (0..verts.len()).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]));
    // blocks of equal degree
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match blocks.last_mut() {
            Some(bl) if deg[bl[0]] == deg[i] => bl.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    for bl in &mut blocks {
        bl.sort_unstable();
    }
    let k = verts.len();
    let mut best: Option<Vec<u8>> = None;
    let mut labeling = vec![0usize; k];
    loop {
        let mut pos = 0;
        for bl in &blocks {
            for &i in bl {
                labeling[pos] = verts[i];
                pos += 1;
            }
        }
        let mut code = Vec::with_capacity(1 + k * (k - 1) / 2);
        code.push(u8::try_from(k).expect("component too large"));
        for a in 0..k {
            for b in a + 1..k {
                code.push(u8::try_from(adj[labeling[a]][labeling[b]]).expect("multiplicity exceeds 255"));
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        // odometer over per-block permutations
        let mut advanced = false;
        for bl in blocks.iter_mut().rev() {
            if crate::polyalg::next_permutation(bl) {
                advanced = true;
                break;
            }
            bl.sort_unstable();
        }
        if !advanced {
            break;
        }
    }
    best.expect("at least one labeling")
}

pub fn canonical_form(g: &Multigraph) -> CanonicalKey {
    let adj = g.undirected_matrix();
    let mut codes: Vec<Vec<u8>> = g.components().iter().map(|c| component_code(&adj, c)).collect();
    codes.sort();
    CanonicalKey(codes.concat())
}

/// Canonical representative of `g`'s isomorphism class.
pub fn canonical_graph(g: &Multigraph) -> Multigraph {
    canonical_form(g).to_graph().expect("keys produced by canonical_form decode")
}

/// Connected multigraphs with exactly `e` edges for every `e ≤ d`, keyed
/// canonically.
pub fn connected_multigraphs(d: u32) -> Vec<BTreeMap<CanonicalKey, Multigraph>> {
    let mut levels: Vec<BTreeMap<CanonicalKey, Multigraph>> = vec![BTreeMap::new()];
    if d == 0 {
        return levels;
    }
    let edge = Multigraph::new(2, [(0, 1, 1)]).expect("valid");
    levels.push(BTreeMap::from([(canonical_form(&edge), canonical_graph(&edge))]));
    for _ in 2..=d {
        let prev = levels.last().expect("nonempty");
        let mut next = BTreeMap::new();
        for g in prev.values() {
            let n = g.n_vertices();
            let base: Vec<(usize, usize, u32)> = g.edges().collect();
            let mut push = |extra: (usize, usize), verts: usize| {
                let mut edges = base.clone();
                edges.push((extra.0, extra.1, 1));
                let h = Multigraph::new(verts, edges).expect("valid extension");
                let key = canonical_form(&h);
                next.entry(key).or_insert_with_key(|k: &CanonicalKey| k.to_graph().expect("decodes"));
            };
            for u in 0..n {
                for v in u + 1..n {
                    push((u, v), n);
                }
                push((u, n), n + 1);
            }
        }
        levels.push(next);
    }
    levels
}

/// One representative per isomorphism class of loopless multigraphs with `d`
/// edges and no isolated vertices, sorted by canonical key.
pub fn enumerate_multigraphs(d: u32) -> Vec<Multigraph> {
    if d == 0 {
        return Vec::new();
    }
    let levels = connected_multigraphs(d);
    // every connected component, ordered by key
    let comps: Vec<(CanonicalKey, u32)> =
        levels.iter().enumerate().flat_map(|(e, m)| m.keys().map(move |k| (k.clone(), e as u32))).collect::<BTreeMap<_, _>>().into_iter().collect();
    let mut keys = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        comps: &[(CanonicalKey, u32)],
        start: usize,
        left: u32,
        stack: &mut Vec<usize>,
        out: &mut Vec<CanonicalKey>,
    ) {
        if left == 0 {
            let bytes: Vec<u8> = stack.iter().flat_map(|&i| comps[i].0.as_bytes().iter().copied()).collect();
            out.push(CanonicalKey(bytes));
            return;
        }
        for i in start..comps.len() {
            if comps[i].1 <= left {
                stack.push(i);
                rec(comps, i, left - comps[i].1, stack, out);
                stack.pop();
            }
        }
    }
    rec(&comps, 0, d, &mut stack, &mut keys);
    keys.sort();
    keys.iter().map(|k| k.to_graph().expect("decodes")).collect()
}
