//! Embedded planar graphs with rotation systems, the instance file format,
//! write-only vertex streams, and theoretical-space accounting.

use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

/// An immutable simple graph with a combinatorial embedding: every vertex
/// carries its incident neighbors in clockwise rotation order.
///
/// Construction via [`PlanarGraph::new`] validates the rotation system and the
/// planarity necessary condition `m <= 3n - 6`. Values produced by
/// [`add_dummy_root`] or kernel materialization skip the planarity bound (the
/// dummy star and gadget edges may not respect the embedding) but always keep
/// the rotation system symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarGraph {
    rotation: Vec<Vec<u32>>,
    m: usize,
}

impl PlanarGraph {
    /// Builds a fully validated graph from per-vertex clockwise neighbor lists.
    pub fn new(rotation: Vec<Vec<u32>>) -> Result<Self> {
        let g = Self::new_relaxed(rotation)?;
        let n = g.n();
        if n >= 3 && g.m() > 3 * n - 6 {
            return Err(Error::Invariant(format!(
                "edge count {} exceeds planar bound 3n-6 = {}",
                g.m(),
                3 * n - 6
            )));
        }
        Ok(g)
    }

    /// Builds a graph validating simplicity and rotation symmetry but not the
    /// planar edge bound. Used for dummy-root graphs and materialized kernels.
    pub fn new_relaxed(rotation: Vec<Vec<u32>>) -> Result<Self> {
        let n = rotation.len();
        let mut m = 0usize;
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        for (u, neigh) in rotation.iter().enumerate() {
            let u = u as u32;
            let mut local: HashSet<u32> = HashSet::new();
            for &v in neigh {
                if v as usize >= n {
                    return Err(Error::Invariant(format!(
                        "vertex {u} lists out-of-range neighbor {v}"
                    )));
                }
                if v == u {
                    return Err(Error::Invariant(format!("loop at vertex {u}")));
                }
                if !local.insert(v) {
                    return Err(Error::Invariant(format!(
                        "duplicate edge {{{u},{v}}} in rotation of {u}"
                    )));
                }
                if u < v {
                    seen.insert((u, v));
                    m += 1;
                }
            }
        }
        // Symmetry: every recorded edge must appear in both rotations.
        for &(u, v) in &seen {
            if !rotation[v as usize].contains(&u) {
                return Err(Error::Invariant(format!(
                    "edge {{{u},{v}}} present in rotation of {u} but not of {v}"
                )));
            }
        }
        for (v, neigh) in rotation.iter().enumerate() {
            for &u in neigh {
                if u < v as u32 && !seen.contains(&(u, v as u32)) {
                    return Err(Error::Invariant(format!(
                        "edge {{{u},{v}}} present in rotation of {v} but not of {u}"
                    )));
                }
            }
        }
        Ok(Self { rotation, m })
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Clockwise neighbors of `u`.
    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.rotation[u as usize]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.rotation[u as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.rotation[a as usize].contains(&b)
    }

    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        0..self.n() as u32
    }

    /// Edges as ordered pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.m);
        for u in self.vertices() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Position of `v` inside `u`'s rotation, if adjacent.
    pub fn rotation_index(&self, u: u32, v: u32) -> Option<usize> {
        self.rotation[u as usize].iter().position(|&w| w == v)
    }

    /// Serializes to the instance file format. Inverse of [`load_graph`].
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p planar {} {}", self.n(), self.m());
        for u in self.vertices() {
            let _ = write!(out, "v {} {}", u, self.degree(u));
            for &v in self.neighbors(u) {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    /// BFS distances from `root`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, root: u32) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n()];
        dist[root as usize] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            for &v in self.neighbors(u) {
                if dist[v as usize].is_none() {
                    dist[v as usize] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Parses the line-oriented instance format:
///
/// ```text
/// p planar <n> <m>
/// v <v> <k> <u1> ... <uk>
/// c <comment>
/// ```
pub fn load_graph(text: &str) -> Result<PlanarGraph> {
    let parse_err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut rotation: Option<Vec<Vec<u32>>> = None;
    let mut declared_m = 0usize;
    let mut filled: Vec<bool> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("p") => {
                if rotation.is_some() {
                    return Err(parse_err(lineno, "duplicate problem line"));
                }
                if tok.next() != Some("planar") {
                    return Err(parse_err(lineno, "expected `p planar <n> <m>`"));
                }
                let n: usize = tok
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "bad vertex count"))?;
                declared_m = tok
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "bad edge count"))?;
                rotation = Some(vec![Vec::new(); n]);
                filled = vec![false; n];
            }
            Some("v") => {
                let rot = rotation
                    .as_mut()
                    .ok_or_else(|| parse_err(lineno, "vertex line before problem line"))?;
                let v: usize = tok
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "bad vertex id"))?;
                if v >= rot.len() {
                    return Err(parse_err(lineno, "vertex id out of range"));
                }
                if filled[v] {
                    return Err(parse_err(lineno, "duplicate vertex line"));
                }
                filled[v] = true;
                let k: usize = tok
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| parse_err(lineno, "bad degree"))?;
                let neigh: Vec<u32> = tok
                    .map(|s| s.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| parse_err(lineno, "bad neighbor id"))?;
                if neigh.len() != k {
                    return Err(parse_err(lineno, "degree does not match neighbor list"));
                }
                rot[v] = neigh;
            }
            _ => return Err(parse_err(lineno, "unknown line type")),
        }
    }
    let rotation = rotation.ok_or_else(|| parse_err(0, "missing problem line"))?;
    let g = PlanarGraph::new(rotation)?;
    if g.m() != declared_m {
        return Err(Error::Invariant(format!(
            "declared m = {declared_m} but rotations define {} edges",
            g.m()
        )));
    }
    Ok(g)
}

/// Component id per vertex; two vertices share an id iff connected, and the id
/// is the minimum vertex id of the component.
pub fn connected_components(g: &PlanarGraph) -> Vec<u32> {
    let mut comp = vec![u32::MAX; g.n()];
    for u in g.vertices() {
        if comp[u as usize] != u32::MAX {
            continue;
        }
        // u is the smallest unvisited id, hence the minimum of its component.
        let mut queue = VecDeque::from([u]);
        comp[u as usize] = u;
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if comp[y as usize] == u32::MAX {
                    comp[y as usize] = u;
                    queue.push_back(y);
                }
            }
        }
    }
    comp
}

/// Adds a dummy vertex with id `n` adjacent to the minimum-id vertex of every
/// component, connecting the graph. New edges go at the end of each endpoint's
/// rotation; the result skips the planarity bound check since it is only used
/// for BFS layering.
pub fn add_dummy_root(g: &PlanarGraph) -> PlanarGraph {
    let comp = connected_components(g);
    let root = g.n() as u32;
    let mut rotation: Vec<Vec<u32>> = (0..g.n()).map(|u| g.neighbors(u as u32).to_vec()).collect();
    let mut root_neigh = Vec::new();
    for u in g.vertices() {
        if comp[u as usize] == u {
            rotation[u as usize].push(root);
            root_neigh.push(u);
        }
    }
    rotation.push(root_neigh);
    PlanarGraph::new_relaxed(rotation).expect("dummy-root construction preserves symmetry")
}

/// Append-only vertex stream. The producer writes, a consumer may re-scan the
/// materialized stream; the producer never reads its own output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexStream {
    items: Vec<u32>,
}

impl VertexStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: u32) {
        self.items.push(v);
    }

    pub fn extend_from(&mut self, other: &VertexStream) {
        self.items.extend_from_slice(&other.items);
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.items.iter().copied()
    }

    /// Distinct vertices in ascending order (the dedup pass of consumers).
    pub fn unique_sorted(&self) -> Vec<u32> {
        let mut v = self.items.clone();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl FromIterator<u32> for VertexStream {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        Self {
            items: iter.into_iter().collect(),
        }
    }
}

/// Advisory accounting of theoretical stored words, each weighted
/// `ceil(log2 n)` bits. Reports the paper's costs, not process memory.
#[derive(Debug, Clone)]
pub struct SpaceLedger {
    n: usize,
    counters: BTreeMap<String, u64>,
}

impl SpaceLedger {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            counters: BTreeMap::new(),
        }
    }

    /// Bits per stored word: `ceil(log2 n)`, at least 1.
    pub fn word_bits(&self) -> u64 {
        let n = self.n.max(2) as u64;
        (u64::BITS - (n - 1).leading_zeros()) as u64
    }

    pub fn charge(&mut self, category: &str, words: u64) {
        *self.counters.entry(category.to_string()).or_insert(0) += words;
    }

    /// Records the maximum of the current and given counts: for storage that
    /// is reused across rounds (e.g. one DP table per slice), the peak is the
    /// honest figure, not the sum.
    pub fn charge_peak(&mut self, category: &str, words: u64) {
        let e = self.counters.entry(category.to_string()).or_insert(0);
        *e = (*e).max(words);
    }

    pub fn words(&self, category: &str) -> u64 {
        self.counters.get(category).copied().unwrap_or(0)
    }

    pub fn bits(&self, category: &str) -> u64 {
        self.words(category) * self.word_bits()
    }

    pub fn total_words(&self) -> u64 {
        self.counters.values().sum()
    }

    pub fn total_bits(&self) -> u64 {
        self.total_words() * self.word_bits()
    }

    /// Merges another ledger shard (per-probe shards joined after a parallel
    /// stage).
    pub fn merge(&mut self, other: &SpaceLedger) {
        for (k, v) in &other.counters {
            *self.counters.entry(k.clone()).or_insert(0) += v;
        }
    }

    /// `c ledger <stage> <words> <bits>` comment block.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.counters {
            let _ = writeln!(out, "c ledger {} {} {}", k, v, v * self.word_bits());
        }
        let _ = writeln!(
            out,
            "c ledger total {} {}",
            self.total_words(),
            self.total_bits()
        );
        out
    }

    pub fn categories(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counters.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Combinatorial embedding support: faces traced from the rotation system.
///
/// Darts are ordered pairs `(u, v)`; the successor of dart `(u, v)` on its face
/// is `(v, w)` with `w` the neighbor following `u` in `v`'s clockwise rotation.
#[derive(Debug)]
pub struct Embedding {
    /// face id per dart
    face_of: HashMap<(u32, u32), usize>,
    pub face_count: usize,
    /// darts of each face, in trace order
    pub face_darts: Vec<Vec<(u32, u32)>>,
}

impl Embedding {
    pub fn new(g: &PlanarGraph) -> Self {
        let mut face_of: HashMap<(u32, u32), usize> = HashMap::new();
        let mut face_darts: Vec<Vec<(u32, u32)>> = Vec::new();
        for u in g.vertices() {
            for &v in g.neighbors(u) {
                if face_of.contains_key(&(u, v)) {
                    continue;
                }
                let id = face_darts.len();
                let mut darts = Vec::new();
                let (mut a, mut b) = (u, v);
                loop {
                    face_of.insert((a, b), id);
                    darts.push((a, b));
                    let pos = g.rotation_index(b, a).expect("rotation symmetry");
                    let deg = g.degree(b);
                    let w = g.neighbors(b)[(pos + 1) % deg];
                    a = b;
                    b = w;
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                face_darts.push(darts);
            }
        }
        Self {
            face_count: face_darts.len(),
            face_of,
            face_darts,
        }
    }

    pub fn face_of(&self, u: u32, v: u32) -> Option<usize> {
        self.face_of.get(&(u, v)).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_text() -> &'static str {
        "c smallest cycle\np planar 3 3\nv 0 2 1 2\nv 1 2 2 0\nv 2 2 0 1\n"
    }

    #[test]
    fn load_triangle() {
        let g = load_graph(triangle_text()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn rejects_one_sided_edge() {
        let text = "p planar 3 3\nv 0 2 1 2\nv 1 2 2 0\nv 2 1 1\n";
        assert!(load_graph(text).is_err());
    }

    #[test]
    fn rejects_k5_edge_bound() {
        // K5: m = 10 > 3*5 - 6 = 9
        let rot: Vec<Vec<u32>> = (0..5u32)
            .map(|u| (0..5).filter(|&v| v != u).collect())
            .collect();
        match PlanarGraph::new(rot) {
            Err(Error::Invariant(_)) => {}
            other => panic!("expected invariant error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_declared_edge_count_mismatch() {
        let text = "p planar 3 2\nv 0 2 1 2\nv 1 2 2 0\nv 2 2 0 1\n";
        assert!(load_graph(text).is_err());
    }

    #[test]
    fn serialize_round_trip() {
        let g = load_graph(triangle_text()).unwrap();
        let again = load_graph(&g.serialize()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn components_triangle_all_zero() {
        let g = load_graph(triangle_text()).unwrap();
        assert_eq!(connected_components(&g), vec![0, 0, 0]);
    }

    #[test]
    fn components_two_disjoint_edges() {
        let g = PlanarGraph::new(vec![vec![1], vec![0], vec![3], vec![2]]).unwrap();
        assert_eq!(connected_components(&g), vec![0, 0, 2, 2]);
    }

    #[test]
    fn components_empty_graph_distinct() {
        let g = PlanarGraph::new(vec![vec![]; 4]).unwrap();
        assert_eq!(connected_components(&g), vec![0, 1, 2, 3]);
    }

    #[test]
    fn dummy_root_two_edges() {
        let g = PlanarGraph::new(vec![vec![1], vec![0], vec![3], vec![2]]).unwrap();
        let gp = add_dummy_root(&g);
        assert_eq!(gp.n(), 5);
        assert!(gp.has_edge(4, 0));
        assert!(gp.has_edge(4, 2));
        assert!(!gp.has_edge(4, 1));
        let comp = connected_components(&gp);
        assert!(comp.iter().all(|&c| c == 0));
    }

    #[test]
    fn dummy_root_connected_triangle() {
        let g = load_graph(triangle_text()).unwrap();
        let gp = add_dummy_root(&g);
        assert_eq!(gp.n(), 4);
        assert_eq!(gp.m(), 4);
        assert!(gp.has_edge(3, 0));
    }

    #[test]
    fn dummy_root_empty_graph_star() {
        let g = PlanarGraph::new(vec![vec![], vec![]]).unwrap();
        let gp = add_dummy_root(&g);
        assert_eq!(gp.n(), 3);
        assert!(gp.has_edge(2, 0) && gp.has_edge(2, 1));
    }

    #[test]
    fn ledger_bits_weighting() {
        let mut l = SpaceLedger::new(100);
        l.charge("bfs", 10);
        assert_eq!(l.word_bits(), 7); // ceil(log2 100)
        assert_eq!(l.bits("bfs"), 70);
        l.charge("bfs", 5);
        assert_eq!(l.words("bfs"), 15);
    }

    #[test]
    fn triangle_faces() {
        // Triangle on the sphere: 2 faces, n - m + f = 2.
        let g = load_graph(triangle_text()).unwrap();
        let emb = Embedding::new(&g);
        assert_eq!(emb.face_count, 2);
    }

    #[test]
    fn stream_unique_sorted() {
        let s: VertexStream = [3u32, 1, 3, 2, 1].into_iter().collect();
        assert_eq!(s.unique_sorted(), vec![1, 2, 3]);
        assert_eq!(s.len(), 5);
    }
}
