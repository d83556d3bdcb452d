//! (1+eps)-approximation of Dominating Set and Vertex Cover by BFS-level
//! splitting plus exact dynamic programming over bounded-treewidth slices.

use crate::graph::{add_dummy_root, PlanarGraph, SpaceLedger, VertexStream};
use crate::treedec::{tree_decomposition, Subgraph, TreeDecomposition};
use crate::{par, Error, Result};
use std::collections::HashMap;

/// BFS layering of a dummy-rooted graph. The root sits at level 0; the
/// original vertices occupy levels `1..=h`.
#[derive(Debug, Clone)]
pub struct BfsLayering {
    pub root: u32,
    pub h: usize,
    /// level per vertex, indexed by vertex id (root included with level 0)
    pub level_of: Vec<u32>,
}

impl BfsLayering {
    /// Original vertices whose level lies in `lo..=hi`.
    pub fn vertices_in(&self, lo: usize, hi: usize) -> Vec<u32> {
        (0..self.root)
            .filter(|&v| {
                let l = self.level_of[v as usize] as usize;
                l >= lo && l <= hi
            })
            .collect()
    }
}

/// BFS layering from the dummy root (the maximum vertex id).
pub fn bfs_levels(gp: &PlanarGraph) -> Result<BfsLayering> {
    let root = (gp.n() - 1) as u32;
    let dist = gp.bfs_distances(root);
    let mut level_of = vec![0u32; gp.n()];
    let mut h = 0usize;
    for v in gp.vertices() {
        match dist[v as usize] {
            Some(l) => {
                level_of[v as usize] = l;
                h = h.max(l as usize);
            }
            None => {
                return Err(Error::Invariant(format!(
                    "vertex {v} unreachable from the dummy root"
                )))
            }
        }
    }
    Ok(BfsLayering { root, h, level_of })
}

/// One slice of the level splitting: the subgraph induced by levels
/// `lo..=hi`.
#[derive(Debug)]
pub struct GraphSlice {
    pub index: usize,
    pub lo: usize,
    pub hi: usize,
    pub sub: Subgraph,
}

/// Splits the graph into `l + 2` slices: `[1..j]`, the `d`-level windows
/// `[j+(i-2)d .. j+(i-1)d]`, and `[j+ld .. h]`, which pairwise overlap in at
/// most one level and together cover every vertex.
pub fn split_levels(
    g: &PlanarGraph,
    layering: &BfsLayering,
    j: usize,
    d: usize,
) -> Result<Vec<GraphSlice>> {
    let h = layering.h;
    if !(1 <= j && j <= d && d < h) {
        return Err(Error::Parameter(format!(
            "split_levels needs 1 <= j <= d < h, got j={j} d={d} h={h}"
        )));
    }
    let l = (h - j) / d;
    let mut ranges = vec![(1usize, j)];
    for i in 2..l + 2 {
        ranges.push((j + (i - 2) * d, j + (i - 1) * d));
    }
    ranges.push((j + l * d, h));
    Ok(ranges
        .into_iter()
        .enumerate()
        .map(|(index, (lo, hi))| GraphSlice {
            index,
            lo,
            hi,
            sub: Subgraph::induced(g, &layering.vertices_in(lo, hi)),
        })
        .collect())
}

fn adjacent(sub: &Subgraph, a: usize, b: usize) -> bool {
    sub.neighbors(a).binary_search(&b).is_ok()
}

fn dominated_by(sub: &Subgraph, w: usize, set: &[usize]) -> bool {
    set.iter().any(|&u| u == w || adjacent(sub, u, w))
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

type DpValue = Option<(usize, Vec<usize>)>;

/// Memoized recursion for Dominating Set over a tree decomposition. `target`
/// marks the vertices that must be dominated; a delegated vertex carries its
/// obligation down to the child subtree that received it.
struct DsDp<'a> {
    sub: &'a Subgraph,
    td: &'a TreeDecomposition,
    target: Vec<bool>,
    /// per node: target vertices whose topmost bag this is
    fresh: Vec<Vec<usize>>,
    memo: HashMap<(usize, Vec<usize>, Vec<usize>), DpValue>,
}

impl<'a> DsDp<'a> {
    fn new(sub: &'a Subgraph, td: &'a TreeDecomposition, targets: &[usize]) -> Self {
        let mut target = vec![false; sub.len()];
        for &t in targets {
            target[t] = true;
        }
        let fresh = (0..td.node_count())
            .map(|v| {
                let pbag: &[usize] = td.parent[v].map(|p| &td.bags[p][..]).unwrap_or(&[]);
                td.bags[v]
                    .iter()
                    .copied()
                    .filter(|&w| target[w] && !pbag.contains(&w))
                    .collect()
            })
            .collect();
        Self {
            sub,
            td,
            target,
            fresh,
            memo: HashMap::new(),
        }
    }

    /// Completes one bag choice `chosen` at `node`: delegates the still
    /// undominated responsibilities to children holding them and recurses.
    fn settle(
        &mut self,
        node: usize,
        chosen: &[usize],
        base_cost: usize,
        base_wit: &[usize],
        undom: &[usize],
    ) -> DpValue {
        let children = self.td.children[node].clone();
        let mut cands: Vec<Vec<usize>> = Vec::with_capacity(undom.len());
        for &w in undom {
            let c: Vec<usize> = children
                .iter()
                .copied()
                .filter(|&c| self.td.bags[c].contains(&w))
                .collect();
            if c.is_empty() {
                return None; // no subtree can take the obligation
            }
            cands.push(c);
        }
        let mut best: DpValue = None;
        let mut pick = vec![0usize; undom.len()];
        loop {
            let mut delegated: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, &w) in undom.iter().enumerate() {
                delegated.entry(cands[i][pick[i]]).or_default().push(w);
            }
            let mut cost = base_cost;
            let mut wit = base_wit.to_vec();
            let mut ok = true;
            for &c in &children {
                let forced: Vec<usize> = chosen
                    .iter()
                    .copied()
                    .filter(|v| self.td.bags[c].contains(v))
                    .collect();
                let mut u_set = delegated.remove(&c).unwrap_or_default();
                u_set.sort_unstable();
                match self.rec(c, forced, u_set) {
                    Some((sc, sw)) => {
                        cost += sc;
                        wit.extend(sw);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && best.as_ref().map_or(true, |(bc, _)| cost < *bc) {
                best = Some((cost, wit));
            }
            // odometer over delegation choices
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return best;
                }
                pick[i] += 1;
                if pick[i] < cands[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    fn rec(&mut self, node: usize, forced: Vec<usize>, u_set: Vec<usize>) -> DpValue {
        let key = (node, forced.clone(), u_set.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let pbag: Vec<usize> = self.td.parent[node]
            .map(|p| self.td.bags[p].clone())
            .unwrap_or_default();
        let diff: Vec<usize> = self.td.bags[node]
            .iter()
            .copied()
            .filter(|v| !pbag.contains(v))
            .collect();
        let resp = sorted_union(&self.fresh[node], &u_set);
        let mut best: DpValue = None;
        for mask in 0u64..(1u64 << diff.len()) {
            let x: Vec<usize> = diff
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let chosen = sorted_union(&forced, &x);
            let undom: Vec<usize> = resp
                .iter()
                .copied()
                .filter(|&w| !dominated_by(self.sub, w, &chosen))
                .collect();
            if let Some((c, w)) = self.settle(node, &chosen, x.len(), &x, &undom) {
                if best.as_ref().map_or(true, |(bc, _)| c < *bc) {
                    best = Some((c, w));
                }
            }
        }
        self.memo.insert(key, best.clone());
        best
    }

    /// Entry point at `node` with chosen context `d_full` (the procedure's
    /// `D`): minimum addition dominating every target of the subtree not
    /// already dominated by `d_full`.
    fn entry(&mut self, node: usize, d_full: &[usize]) -> DpValue {
        let bag = self.td.bags[node].clone();
        let forced: Vec<usize> = d_full.iter().copied().filter(|v| bag.contains(v)).collect();
        let resp: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|&w| self.target[w] && !dominated_by(self.sub, w, d_full))
            .collect();
        let free: Vec<usize> = bag.iter().copied().filter(|v| !forced.contains(v)).collect();
        let mut best: DpValue = None;
        for mask in 0u64..(1u64 << free.len()) {
            let x: Vec<usize> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let chosen = sorted_union(&forced, &x);
            let undom: Vec<usize> = resp
                .iter()
                .copied()
                .filter(|&w| !dominated_by(self.sub, w, &chosen))
                .collect();
            if let Some((c, w)) = self.settle(node, &chosen, x.len(), &x, &undom) {
                if best.as_ref().map_or(true, |(bc, _)| c < *bc) {
                    best = Some((c, w));
                }
            }
        }
        best
    }
}

const BAG_ENUM_CAP: usize = 60;

fn check_bag_cap(td: &TreeDecomposition) -> Result<()> {
    if td.bags.iter().any(|b| b.len() > BAG_ENUM_CAP) {
        return Err(Error::TooLarge(format!(
            "bag larger than {BAG_ENUM_CAP} vertices; subset enumeration infeasible"
        )));
    }
    Ok(())
}

/// Minimum set dominating all targets of the subtree at `node` not already
/// dominated by `d_set`, plus the witness stream when `emit` is set.
/// `targets = None` means every subgraph vertex must be dominated.
pub fn bdtw_dom_set(
    sub: &Subgraph,
    td: &TreeDecomposition,
    node: usize,
    d_set: &[u32],
    targets: Option<&[u32]>,
    emit: bool,
) -> Result<(usize, Option<VertexStream>)> {
    check_bag_cap(td)?;
    let to_local = |ids: &[u32]| -> Result<Vec<usize>> {
        ids.iter()
            .map(|&v| {
                sub.local_of(v)
                    .ok_or_else(|| Error::Parameter(format!("vertex {v} not in the slice")))
            })
            .collect()
    };
    let target_local: Vec<usize> = match targets {
        Some(t) => to_local(t)?,
        None => (0..sub.len()).collect(),
    };
    let d_local = to_local(d_set)?;
    let mut dp = DsDp::new(sub, td, &target_local);
    let (size, wit) = dp
        .entry(node, &d_local)
        .ok_or_else(|| Error::Invariant("dominating-set recursion found no feasible branch".into()))?;
    let stream = emit.then(|| wit.iter().map(|&v| sub.orig(v)).collect::<VertexStream>());
    Ok((size, stream))
}

/// Vertex-cover analogue. Every edge is checked at the topmost bag containing
/// both endpoints, where the chosen status of both is already fixed, so no
/// obligation needs to be delegated.
struct VcDp<'a> {
    sub: &'a Subgraph,
    td: &'a TreeDecomposition,
    /// per node: edges of the subgraph whose topmost both-endpoint bag this is
    fresh_edges: Vec<Vec<(usize, usize)>>,
    memo: HashMap<(usize, Vec<usize>), DpValue>,
}

impl<'a> VcDp<'a> {
    fn new(sub: &'a Subgraph, td: &'a TreeDecomposition) -> Self {
        let edges = sub.edges();
        let fresh_edges = (0..td.node_count())
            .map(|v| {
                let bag = &td.bags[v];
                let pbag: &[usize] = td.parent[v].map(|p| &td.bags[p][..]).unwrap_or(&[]);
                edges
                    .iter()
                    .copied()
                    .filter(|&(a, b)| {
                        bag.contains(&a)
                            && bag.contains(&b)
                            && !(pbag.contains(&a) && pbag.contains(&b))
                    })
                    .collect()
            })
            .collect();
        Self {
            sub,
            td,
            fresh_edges,
            memo: HashMap::new(),
        }
    }

    fn descend(&mut self, node: usize, chosen: &[usize], base_cost: usize, base_wit: &[usize]) -> DpValue {
        let mut cost = base_cost;
        let mut wit = base_wit.to_vec();
        for c in self.td.children[node].clone() {
            let forced: Vec<usize> = chosen
                .iter()
                .copied()
                .filter(|v| self.td.bags[c].contains(v))
                .collect();
            let (sc, sw) = self.rec(c, forced)?;
            cost += sc;
            wit.extend(sw);
        }
        Some((cost, wit))
    }

    fn rec(&mut self, node: usize, forced: Vec<usize>) -> DpValue {
        let key = (node, forced.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let pbag: Vec<usize> = self.td.parent[node]
            .map(|p| self.td.bags[p].clone())
            .unwrap_or_default();
        let diff: Vec<usize> = self.td.bags[node]
            .iter()
            .copied()
            .filter(|v| !pbag.contains(v))
            .collect();
        let fresh = self.fresh_edges[node].clone();
        let mut best: DpValue = None;
        for mask in 0u64..(1u64 << diff.len()) {
            let x: Vec<usize> = diff
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let chosen = sorted_union(&forced, &x);
            if fresh
                .iter()
                .any(|&(a, b)| !chosen.contains(&a) && !chosen.contains(&b))
            {
                continue;
            }
            if let Some((c, w)) = self.descend(node, &chosen, x.len(), &x) {
                if best.as_ref().map_or(true, |(bc, _)| c < *bc) {
                    best = Some((c, w));
                }
            }
        }
        self.memo.insert(key, best.clone());
        best
    }

    fn entry(&mut self, node: usize, c_full: &[usize]) -> DpValue {
        let bag = self.td.bags[node].clone();
        let forced: Vec<usize> = c_full.iter().copied().filter(|v| bag.contains(v)).collect();
        let free: Vec<usize> = bag.iter().copied().filter(|v| !forced.contains(v)).collect();
        // All bag-internal edges are this entry's responsibility.
        let edges: Vec<(usize, usize)> = self
            .sub
            .edges()
            .into_iter()
            .filter(|&(a, b)| bag.contains(&a) && bag.contains(&b))
            .collect();
        let mut best: DpValue = None;
        for mask in 0u64..(1u64 << free.len()) {
            let x: Vec<usize> = free
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            let chosen = sorted_union(&forced, &x);
            if edges
                .iter()
                .any(|&(a, b)| !chosen.contains(&a) && !chosen.contains(&b))
            {
                continue;
            }
            if let Some((c, w)) = self.descend(node, &chosen, x.len(), &x) {
                if best.as_ref().map_or(true, |(bc, _)| c < *bc) {
                    best = Some((c, w));
                }
            }
        }
        best
    }
}

/// Minimum set covering all edges of the subtree at `node` not already
/// covered by `c_set`; witness stream when `emit` is set.
pub fn bdtw_vertex_cover(
    sub: &Subgraph,
    td: &TreeDecomposition,
    node: usize,
    c_set: &[u32],
    emit: bool,
) -> Result<(usize, Option<VertexStream>)> {
    check_bag_cap(td)?;
    let c_local: Vec<usize> = c_set
        .iter()
        .map(|&v| {
            sub.local_of(v)
                .ok_or_else(|| Error::Parameter(format!("vertex {v} not in the slice")))
        })
        .collect::<Result<_>>()?;
    let mut dp = VcDp::new(sub, td);
    let (size, wit) = dp
        .entry(node, &c_local)
        .ok_or_else(|| Error::Invariant("vertex-cover recursion found no feasible branch".into()))?;
    let stream = emit.then(|| wit.iter().map(|&v| sub.orig(v)).collect::<VertexStream>());
    Ok((size, stream))
}

fn check_eps(num: u32, den: u32) -> Result<()> {
    if num == 0 || den == 0 || num > den {
        return Err(Error::Parameter(format!(
            "eps must satisfy 0 < eps <= 1, got {num}/{den}"
        )));
    }
    Ok(())
}

fn isqrt_ceil(n: usize) -> u64 {
    (1u64..).find(|x| x * x >= n as u64).unwrap_or(1)
}

/// Solves one dominating-set band: the minimum subset of the extended slice
/// dominating every core vertex.
fn solve_ds_band(
    g: &PlanarGraph,
    layering: &BfsLayering,
    core: (usize, usize),
    ledger: &mut SpaceLedger,
) -> Result<Vec<u32>> {
    let (lo, hi) = core;
    let elo = lo.saturating_sub(1).max(1);
    let ehi = (hi + 1).min(layering.h);
    let verts = layering.vertices_in(elo, ehi);
    if verts.is_empty() {
        return Ok(Vec::new());
    }
    let sub = Subgraph::induced(g, &verts);
    let span = ehi - elo + 1;
    let td = tree_decomposition(&sub, span.saturating_sub(1).max(1))?;
    ledger.charge_peak("approx.dp", ((td.width() + 1) * td.depth()) as u64);
    let core_verts: Vec<u32> = layering
        .vertices_in(lo, hi)
        .into_iter()
        .filter(|v| sub.local_of(*v).is_some())
        .collect();
    let (_, stream) = bdtw_dom_set(&sub, &td, td.root, &[], Some(&core_verts), true)?;
    Ok(stream.expect("emit requested").unique_sorted())
}

/// Core ranges for offset `j`: an initial block of `j` levels followed by
/// blocks of `d` levels. Every level lands in exactly one core; the dynamic
/// program for a core may also use the two adjacent levels.
fn ds_cores(h: usize, j: usize, d: usize) -> Vec<(usize, usize)> {
    let mut cores = Vec::new();
    let mut lo = 1usize;
    if j >= 1 {
        cores.push((1, j.min(h)));
        lo = j + 1;
    }
    while lo <= h {
        cores.push((lo, (lo + d - 1).min(h)));
        lo += d;
    }
    cores
}

pub fn approx_ds(g: &PlanarGraph, num: u32, den: u32) -> Result<VertexStream> {
    approx_ds_mode(g, num, den, par::available(), None)
}

/// Dominating set of size at most `(1 + eps) * gamma(G)` with `eps = num/den`.
/// Levels are grouped into cores of `d = ceil(2 den / num)` levels; each core
/// is solved exactly inside its one-level extension, and the offset with the
/// smallest combined answer wins (ties to the smallest offset).
pub fn approx_ds_mode(
    g: &PlanarGraph,
    num: u32,
    den: u32,
    parallel: bool,
    ledger: Option<&mut SpaceLedger>,
) -> Result<VertexStream> {
    check_eps(num, den)?;
    if g.n() == 0 {
        return Ok(VertexStream::new());
    }
    let d = ((2 * den + num - 1) / num) as usize;
    let gp = add_dummy_root(g);
    let layering = bfs_levels(&gp)?;
    let mut master = SpaceLedger::new(g.n());
    master.charge("approx.bfs", isqrt_ceil(g.n()));
    let probes: Vec<usize> = (0..d).collect();
    let results: Vec<Result<(usize, Vec<u32>, SpaceLedger)>> = par::map_collect(
        parallel,
        probes,
        |j| {
            let mut shard = SpaceLedger::new(g.n());
            let mut all = VertexStream::new();
            for core in ds_cores(layering.h, j, d) {
                for v in solve_ds_band(g, &layering, core, &mut shard)? {
                    all.push(v);
                }
            }
            Ok((j, all.unique_sorted(), shard))
        },
    );
    let mut best: Option<(usize, Vec<u32>)> = None;
    for r in results {
        let (j, sol, shard) = r?;
        master.merge(&shard);
        if best.as_ref().map_or(true, |(_, b)| sol.len() < b.len()) {
            best = Some((j, sol));
        }
    }
    let (_, sol) = best.ok_or_else(|| Error::Invariant("no probe produced a solution".into()))?;
    master.charge("approx.stream", sol.len() as u64);
    if let Some(l) = ledger {
        l.merge(&master);
    }
    debug_assert!(crate::oracle::verify_witness(
        g,
        &sol,
        crate::oracle::Problem::DominatingSet
    ));
    Ok(sol.into_iter().collect())
}

pub fn approx_vc(g: &PlanarGraph, num: u32, den: u32) -> Result<VertexStream> {
    approx_vc_mode(g, num, den, par::available(), None)
}

/// Vertex cover of size at most `(1 + eps) * tau(G)` with `eps = num/den`,
/// via the overlapping `d = ceil(den / num)` level windows of the splitting
/// lemma; each slice is solved exactly and the best offset wins.
pub fn approx_vc_mode(
    g: &PlanarGraph,
    num: u32,
    den: u32,
    parallel: bool,
    ledger: Option<&mut SpaceLedger>,
) -> Result<VertexStream> {
    check_eps(num, den)?;
    if g.n() == 0 {
        return Ok(VertexStream::new());
    }
    let d = ((den + num - 1) / num) as usize;
    let gp = add_dummy_root(g);
    let layering = bfs_levels(&gp)?;
    let mut master = SpaceLedger::new(g.n());
    master.charge("approx.bfs", isqrt_ceil(g.n()));

    let solve_slice = |sub: &Subgraph, span: usize, shard: &mut SpaceLedger| -> Result<Vec<u32>> {
        if sub.is_empty() {
            return Ok(Vec::new());
        }
        let td = tree_decomposition(sub, span.saturating_sub(1).max(1))?;
        shard.charge_peak("approx.dp", ((td.width() + 1) * td.depth()) as u64);
        let (_, stream) = bdtw_vertex_cover(sub, &td, td.root, &[], true)?;
        Ok(stream.expect("emit requested").unique_sorted())
    };

    let sol: Vec<u32> = if layering.h <= d {
        // The whole graph fits in one window; solve it exactly.
        let sub = Subgraph::whole(g);
        let mut shard = SpaceLedger::new(g.n());
        let s = solve_slice(&sub, layering.h.max(1), &mut shard)?;
        master.merge(&shard);
        s
    } else {
        let probes: Vec<usize> = (1..=d).collect();
        let results: Vec<Result<(usize, Vec<u32>, SpaceLedger)>> = par::map_collect(
            parallel,
            probes,
            |j| {
                let mut shard = SpaceLedger::new(g.n());
                let mut all = VertexStream::new();
                for slice in split_levels(g, &layering, j, d)? {
                    let span = slice.hi.saturating_sub(slice.lo) + 1;
                    for v in solve_slice(&slice.sub, span, &mut shard)? {
                        all.push(v);
                    }
                }
                Ok((j, all.unique_sorted(), shard))
            },
        );
        let mut best: Option<(usize, Vec<u32>)> = None;
        for r in results {
            let (j, s, shard) = r?;
            master.merge(&shard);
            if best.as_ref().map_or(true, |(_, b)| s.len() < b.len()) {
                best = Some((j, s));
            }
        }
        best.ok_or_else(|| Error::Invariant("no probe produced a solution".into()))?
            .1
    };
    master.charge("approx.stream", sol.len() as u64);
    if let Some(l) = ledger {
        l.merge(&master);
    }
    debug_assert!(crate::oracle::verify_witness(
        g,
        &sol,
        crate::oracle::Problem::VertexCover
    ));
    Ok(sol.into_iter().collect())
}
