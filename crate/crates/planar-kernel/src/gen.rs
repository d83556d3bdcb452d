//! Instance generators: deterministic families, seeded random planar
//! triangulations, and an exhaustive enumeration of small connected planar
//! graphs with embeddings, used as the ground-truth corpus.

use crate::graph::{Embedding, PlanarGraph};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

pub fn path(n: usize) -> PlanarGraph {
    let rot = (0..n as u32)
        .map(|u| {
            let mut r = Vec::new();
            if u > 0 {
                r.push(u - 1);
            }
            if (u as usize) + 1 < n {
                r.push(u + 1);
            }
            r
        })
        .collect();
    PlanarGraph::new(rot).expect("path is planar")
}

pub fn cycle(n: usize) -> PlanarGraph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let n32 = n as u32;
    let rot = (0..n32)
        .map(|u| vec![(u + n32 - 1) % n32, (u + 1) % n32])
        .collect();
    PlanarGraph::new(rot).expect("cycle is planar")
}

pub fn star(leaves: usize) -> PlanarGraph {
    let mut rot = vec![(1..=leaves as u32).collect::<Vec<_>>()];
    rot.extend((0..leaves).map(|_| vec![0]));
    PlanarGraph::new(rot).expect("star is planar")
}

/// `rows x cols` grid; vertex `(r, c)` has id `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> PlanarGraph {
    assert!(rows >= 1 && cols >= 1);
    let id = |r: usize, c: usize| (r * cols + c) as u32;
    let mut rot = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            // Clockwise in the drawing: up, right, down, left.
            let mut neigh = Vec::new();
            if r > 0 {
                neigh.push(id(r - 1, c));
            }
            if c + 1 < cols {
                neigh.push(id(r, c + 1));
            }
            if r + 1 < rows {
                neigh.push(id(r + 1, c));
            }
            if c > 0 {
                neigh.push(id(r, c - 1));
            }
            rot.push(neigh);
        }
    }
    PlanarGraph::new(rot).expect("grid is planar")
}

pub fn ladder(rungs: usize) -> PlanarGraph {
    grid(2, rungs)
}

/// Random maximal planar graph (`m = 3n - 6`) built by repeatedly inserting a
/// vertex into a uniformly chosen triangular face of the current embedding.
pub fn triangulation(n: usize, seed: u64) -> PlanarGraph {
    assert!(n >= 3, "triangulation needs at least 3 vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot: Vec<Vec<u32>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    for w in 3..n as u32 {
        let g = PlanarGraph::new_relaxed(rot.clone()).expect("symmetric by construction");
        let emb = Embedding::new(&g);
        let face = &emb.face_darts[rng.gen_range(0..emb.face_count)];
        debug_assert_eq!(face.len(), 3, "all faces stay triangular");
        let (a, b) = face[0];
        let c = face[1].1;
        // Splitting the face (a,b,c) into three triangles around w: the new
        // vertex goes right before the face successor in each corner rotation.
        let pos = |r: &[u32], x: u32| r.iter().position(|&y| y == x).unwrap();
        let pb = pos(&rot[a as usize], b);
        rot[a as usize].insert(pb, w);
        let pc = pos(&rot[b as usize], c);
        rot[b as usize].insert(pc, w);
        let pa = pos(&rot[c as usize], a);
        rot[c as usize].insert(pa, w);
        rot.push(vec![b, a, c]);
    }
    PlanarGraph::new(rot).expect("triangulation is planar")
}

fn rotation_connected(rot: &[Vec<u32>]) -> bool {
    let n = rot.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0u32];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &rot[u as usize] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}

/// Connected random planar graph with exactly `m` edges, obtained from a
/// random triangulation by deleting random non-bridge edges.
pub fn random_planar(n: usize, m: usize, seed: u64) -> Result<PlanarGraph> {
    if n == 0 {
        return Err(Error::Parameter("empty graph requested".into()));
    }
    let max_m = if n >= 3 { 3 * n - 6 } else { n - 1 };
    if m + 1 < n || m > max_m {
        return Err(Error::Parameter(format!(
            "connected planar graph on {n} vertices needs {} <= m <= {max_m}, got {m}",
            n - 1
        )));
    }
    if n < 3 {
        return Ok(path(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = triangulation(n, rng.gen());
    let mut rot: Vec<Vec<u32>> = (0..n).map(|u| full.neighbors(u as u32).to_vec()).collect();
    let mut cur = full.m();
    while cur > m {
        // A connected graph with more than n - 1 edges has a non-bridge edge,
        // so scanning a random rotation of the edge list always succeeds.
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for (u, neigh) in rot.iter().enumerate() {
            for &v in neigh {
                if (u as u32) < v {
                    edges.push((u as u32, v));
                }
            }
        }
        let start = rng.gen_range(0..edges.len());
        let mut removed = false;
        for i in 0..edges.len() {
            let (u, v) = edges[(start + i) % edges.len()];
            let pu = rot[u as usize].iter().position(|&x| x == v).unwrap();
            let pv = rot[v as usize].iter().position(|&x| x == u).unwrap();
            rot[u as usize].remove(pu);
            rot[v as usize].remove(pv);
            if rotation_connected(&rot) {
                removed = true;
                break;
            }
            // Bridge: restore at the original rotation positions to keep the
            // embedding intact.
            rot[u as usize].insert(pu, v);
            rot[v as usize].insert(pv, u);
        }
        debug_assert!(removed, "non-bridge edge must exist while m > n - 1");
        cur -= 1;
    }
    PlanarGraph::new(rot)
}

/// Tries to find a combinatorial embedding of the connected graph given by
/// `edges` on `n` vertices. Backtracks over the cyclic insertion position of
/// each edge endpoint, pruning with Euler's formula after every insertion;
/// returns `None` exactly when the graph is not planar.
pub fn planar_embedding(n: usize, edges: &[(u32, u32)]) -> Option<PlanarGraph> {
    if n == 0 {
        return None;
    }
    if n >= 3 && edges.len() > 3 * n - 6 {
        return None;
    }
    // BFS edge order keeps the embedded subgraph connected, which makes the
    // Euler check per step exact.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut order: Vec<(u32, u32)> = Vec::new();
    let mut seen_edge: HashSet<(u32, u32)> = HashSet::new();
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut queue = std::collections::VecDeque::from([0u32]);
    let mut bfs = Vec::new();
    while let Some(u) = queue.pop_front() {
        bfs.push(u);
        for &v in &adj[u as usize] {
            if !visited[v as usize] {
                visited[v as usize] = true;
                queue.push_back(v);
            }
            let key = (u.min(v), u.max(v));
            if seen_edge.insert(key) {
                order.push(key);
            }
        }
    }
    if bfs.len() != n {
        return None; // embedder is only defined for connected graphs
    }

    fn euler_ok(rot: &[Vec<u32>]) -> bool {
        let nv = rot.iter().filter(|r| !r.is_empty()).count();
        let mut m = 0usize;
        let mut unseen: HashSet<(u32, u32)> = HashSet::new();
        for (u, neigh) in rot.iter().enumerate() {
            m += neigh.len();
            for &v in neigh {
                unseen.insert((u as u32, v));
            }
        }
        m /= 2;
        if m == 0 {
            return true;
        }
        let mut faces = 0usize;
        while let Some(&(su, sv)) = unseen.iter().next() {
            faces += 1;
            let (mut a, mut b) = (su, sv);
            loop {
                unseen.remove(&(a, b));
                let rb = &rot[b as usize];
                let pos = rb.iter().position(|&x| x == a).unwrap();
                let w = rb[(pos + 1) % rb.len()];
                a = b;
                b = w;
                if (a, b) == (su, sv) {
                    break;
                }
            }
        }
        // Connected embedded subgraph: genus zero iff n - m + f = 2.
        nv + faces == 2 + m
    }

    fn place(rot: &mut Vec<Vec<u32>>, order: &[(u32, u32)], idx: usize) -> bool {
        if idx == order.len() {
            return true;
        }
        let (u, v) = order[idx];
        let su = rot[u as usize].len().max(1);
        let sv = rot[v as usize].len().max(1);
        for i in 0..su {
            for j in 0..sv {
                rot[u as usize].insert(i, v);
                rot[v as usize].insert(j, u);
                if euler_ok(rot) && place(rot, order, idx + 1) {
                    return true;
                }
                rot[u as usize].retain(|&x| x != v);
                rot[v as usize].retain(|&x| x != u);
            }
        }
        false
    }

    let mut rot: Vec<Vec<u32>> = vec![Vec::new(); n];
    if place(&mut rot, &order, 0) {
        Some(PlanarGraph::new(rot).expect("verified embedding"))
    } else {
        None
    }
}

/// Connected graphs on exactly `n` vertices up to isomorphism, as adjacency
/// bitmask rows, by vertex-extension with canonical deduplication.
fn connected_graphs_upto_iso(n: usize) -> Vec<Vec<u8>> {
    assert!(n >= 1 && n <= 8);
    let mut level: Vec<Vec<u8>> = vec![vec![0u8]];
    for k in 2..=n {
        let mut seen: HashSet<u32> = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for subset in 0u8..(1 << (k - 1)) {
                let mut adj = g.clone();
                adj.push(subset);
                for (i, row) in adj.iter_mut().enumerate().take(k - 1) {
                    if subset >> i & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                let code = canonical_code(k, &adj);
                if seen.insert(code) {
                    next.push(graph_from_code(k, code));
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .filter(|adj| mask_connected(n, adj))
        .collect()
}

fn mask_connected(n: usize, adj: &[u8]) -> bool {
    let mut reached = 1u8;
    loop {
        let mut next = reached;
        for v in 0..n {
            if reached >> v & 1 == 1 {
                next |= adj[v];
            }
        }
        if next == reached {
            break;
        }
        reached = next;
    }
    reached.count_ones() as usize == n
}

/// Canonical upper-triangle code: lexicographically maximal concatenation of
/// per-slot adjacency bits over all vertex orderings. All orderings achieving
/// the running maximum prefix survive each round, so the result is exact.
fn canonical_code(n: usize, adj: &[u8]) -> u32 {
    let mut partials: Vec<Vec<u8>> = vec![vec![]];
    let mut code = 0u32;
    for slot in 0..n {
        let mut best: Option<u32> = None;
        let mut winners: Vec<Vec<u8>> = Vec::new();
        for p in &partials {
            for v in 0..n as u8 {
                if p.contains(&v) {
                    continue;
                }
                let mut bits = 0u32;
                for (j, &u) in p.iter().enumerate() {
                    if adj[v as usize] >> u & 1 == 1 {
                        bits |= 1 << (slot - 1 - j);
                    }
                }
                if best.map_or(true, |b| bits > b) {
                    best = Some(bits);
                    winners.clear();
                }
                if best == Some(bits) {
                    let mut q = p.clone();
                    q.push(v);
                    winners.push(q);
                }
            }
        }
        code = (code << slot) | best.unwrap_or(0);
        partials = winners;
    }
    code
}

fn graph_from_code(n: usize, code: u32) -> Vec<u8> {
    let mut adj = vec![0u8; n];
    let mut shift: u32 = (n * (n - 1) / 2) as u32;
    for slot in 1..n {
        shift -= slot as u32;
        for j in 0..slot {
            if code >> (shift + (slot - 1 - j) as u32) & 1 == 1 {
                adj[slot] |= 1 << j;
                adj[j] |= 1 << slot;
            }
        }
    }
    adj
}

/// All connected planar graphs on exactly `n <= 8` vertices, one embedded
/// representative per isomorphism class.
pub fn all_connected_planar(n: usize) -> Vec<PlanarGraph> {
    connected_graphs_upto_iso(n)
        .into_iter()
        .filter_map(|adj| {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if adj[u] >> v & 1 == 1 {
                        edges.push((u as u32, v as u32));
                    }
                }
            }
            planar_embedding(n, &edges)
        })
        .collect()
}
