//! O(k)-vertex dominating-set kernel via neighborhood reduction rules
//! realized as gadget overlays: the input graph is never mutated, each rule
//! application records a small gadget from which deletions and inserted
//! pendant edges are derived on the fly.

use crate::graph::{PlanarGraph, SpaceLedger, VertexStream};
use crate::scheme::{KernelInstance, Provenance};
use crate::{Error, Result};
use std::collections::HashSet;

/// Which reduction produced a gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetTag {
    RuleI,
    Case11,
    Case12,
    Case13,
    Case2,
}

impl GadgetTag {
    pub fn label(self) -> &'static str {
        match self {
            GadgetTag::RuleI => "rule-1",
            GadgetTag::Case11 => "rule-2-case-1.1",
            GadgetTag::Case12 => "rule-2-case-1.2",
            GadgetTag::Case13 => "rule-2-case-1.3",
            GadgetTag::Case2 => "rule-2-case-2",
        }
    }
}

/// One recorded rule application: the anchors it attaches to, the fresh
/// vertices and pendant edges it inserts, and the vertex set it virtually
/// deletes (evaluated in the overlay state at application time).
#[derive(Debug, Clone)]
pub struct Gadget {
    pub tag: GadgetTag,
    pub anchors: (u32, Option<u32>),
    pub new_vertices: Vec<u32>,
    pub new_edges: Vec<(u32, u32)>,
    pub removed: Vec<u32>,
}

/// Ledger words per stored gadget: tag, two anchors, one spare; fresh ids
/// and pendant edges are derivable from the tag and the gadget index.
pub const GADGET_WORDS: u64 = 4;

/// Overlay view of a planar graph under a list of gadgets: virtually deleted
/// vertices are skipped, gadget vertices and edges are spliced in, and the
/// relative rotation order of surviving base neighbors is preserved.
pub struct VirtualGraph<'a> {
    base: &'a PlanarGraph,
    gadgets: Vec<Gadget>,
    dead: HashSet<u32>,
    next_id: u32,
}

impl<'a> VirtualGraph<'a> {
    pub fn new(base: &'a PlanarGraph) -> Self {
        Self {
            base,
            gadgets: Vec::new(),
            dead: HashSet::new(),
            next_id: base.n() as u32,
        }
    }

    pub fn base(&self) -> &PlanarGraph {
        self.base
    }

    pub fn gadgets(&self) -> &[Gadget] {
        &self.gadgets
    }

    pub fn is_alive(&self, v: u32) -> bool {
        !self.dead.contains(&v)
            && (v < self.base.n() as u32
                || self
                    .gadgets
                    .iter()
                    .any(|g| g.new_vertices.contains(&v)))
    }

    /// Alive vertices: surviving base vertices ascending, then gadget
    /// vertices in insertion order.
    pub fn vertices(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self
            .base
            .vertices()
            .filter(|v| !self.dead.contains(v))
            .collect();
        for g in &self.gadgets {
            out.extend(g.new_vertices.iter().filter(|v| !self.dead.contains(v)));
        }
        out
    }

    /// Virtual neighborhood: surviving base neighbors in base rotation
    /// order, then gadget partners in gadget insertion order.
    pub fn neighbors(&self, v: u32) -> Result<Vec<u32>> {
        if !self.is_alive(v) {
            return Err(Error::Invariant(format!("vertex {v} is virtually deleted")));
        }
        let mut out = Vec::new();
        if v < self.base.n() as u32 {
            out.extend(
                self.base
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|w| !self.dead.contains(w)),
            );
        }
        for g in &self.gadgets {
            for &(a, b) in &g.new_edges {
                let partner = if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                };
                if let Some(w) = partner {
                    if !self.dead.contains(&w) {
                        out.push(w);
                    }
                }
            }
        }
        Ok(out)
    }

    fn fresh_id(&mut self) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn push(&mut self, gadget: Gadget) {
        self.dead.extend(gadget.removed.iter().copied());
        self.gadgets.push(gadget);
    }

    /// Number of virtual edges with at least one endpoint in `set`.
    fn incident_edges(&self, set: &[u32]) -> usize {
        let in_set: HashSet<u32> = set.iter().copied().collect();
        let mut cnt = 0;
        for &r in set {
            for w in self.neighbors(r).expect("removal candidates are alive") {
                if !in_set.contains(&w) || r < w {
                    cnt += 1;
                }
            }
        }
        cnt
    }

    /// True when recording the application strictly shrinks the virtual
    /// graph (fewer vertices, or equally many and fewer edges). Skipping
    /// no-op applications makes the fixpoint terminate and idempotent:
    /// e.g. re-running a rule on its own pendant gadget changes nothing.
    fn worthwhile(&self, removal: &[u32], new_vertices: usize, new_edges: usize) -> bool {
        if removal.len() != new_vertices {
            return removal.len() > new_vertices;
        }
        self.incident_edges(removal) > new_edges
    }

    /// Materializes the overlay as a plain graph with fresh contiguous ids.
    pub fn materialize(&self) -> Result<(PlanarGraph, Vec<Provenance>)> {
        let order = self.vertices();
        let index: std::collections::HashMap<u32, u32> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut rot = Vec::with_capacity(order.len());
        let mut provenance = Vec::with_capacity(order.len());
        for &v in &order {
            rot.push(
                self.neighbors(v)?
                    .into_iter()
                    .map(|w| index[&w])
                    .collect::<Vec<_>>(),
            );
            if v < self.base.n() as u32 {
                provenance.push(Provenance::Original(v));
            } else {
                let g = self
                    .gadgets
                    .iter()
                    .find(|g| g.new_vertices.contains(&v))
                    .expect("gadget vertex");
                let mut anchors = vec![g.anchors.0];
                if let Some(b) = g.anchors.1 {
                    anchors.push(b);
                }
                provenance.push(Provenance::Gadget {
                    tag: g.tag.label(),
                    anchors,
                });
            }
        }
        Ok((PlanarGraph::new_relaxed(rot)?, provenance))
    }
}

/// The neighborhood partition of Rule I: N1 keeps vertices with neighbors
/// outside N[u], N2 those seeing N1, N3 the rest.
pub fn n_sets(gv: &VirtualGraph, u: u32) -> Result<(VertexStream, VertexStream, VertexStream)> {
    let nu = gv.neighbors(u)?;
    let mut closed: HashSet<u32> = nu.iter().copied().collect();
    closed.insert(u);
    let mut n1 = Vec::new();
    let mut rest = Vec::new();
    for &v in &nu {
        if gv.neighbors(v)?.iter().any(|w| !closed.contains(w)) {
            n1.push(v);
        } else {
            rest.push(v);
        }
    }
    let n1_set: HashSet<u32> = n1.iter().copied().collect();
    let mut n2 = Vec::new();
    let mut n3 = Vec::new();
    for &v in &rest {
        if gv.neighbors(v)?.iter().any(|w| n1_set.contains(w)) {
            n2.push(v);
        } else {
            n3.push(v);
        }
    }
    Ok((
        n1.into_iter().collect(),
        n2.into_iter().collect(),
        n3.into_iter().collect(),
    ))
}

/// The pairwise analog over N(u,v) = N(u) ∪ N(v).
pub fn n_sets_pair(
    gv: &VirtualGraph,
    u: u32,
    v: u32,
) -> Result<(VertexStream, VertexStream, VertexStream)> {
    if u == v {
        return Err(Error::Parameter("pair anchors must differ".into()));
    }
    let mut nuv = gv.neighbors(u)?;
    nuv.extend(gv.neighbors(v)?);
    nuv.sort_unstable();
    nuv.dedup();
    let mut closed: HashSet<u32> = nuv.iter().copied().collect();
    closed.insert(u);
    closed.insert(v);
    let mut n1 = Vec::new();
    let mut rest = Vec::new();
    for &w in &nuv {
        if gv.neighbors(w)?.iter().any(|x| !closed.contains(x)) {
            n1.push(w);
        } else {
            rest.push(w);
        }
    }
    let n1_set: HashSet<u32> = n1.iter().copied().collect();
    let mut n2 = Vec::new();
    let mut n3 = Vec::new();
    for &w in &rest {
        if gv.neighbors(w)?.iter().any(|x| n1_set.contains(x)) {
            n2.push(w);
        } else {
            n3.push(w);
        }
    }
    Ok((
        n1.into_iter().collect(),
        n2.into_iter().collect(),
        n3.into_iter().collect(),
    ))
}

/// True iff every vertex of `targets` lies in the closed virtual
/// neighborhood of `w`.
fn dominates_all(gv: &VirtualGraph, w: u32, targets: &[u32]) -> Result<bool> {
    let mut closed: HashSet<u32> = gv.neighbors(w)?.into_iter().collect();
    closed.insert(w);
    Ok(targets.iter().all(|t| closed.contains(t)))
}

const APPLICATION_CAP: usize = 100_000;

/// Applies Rule I to a fixpoint: any vertex u with nonempty N3(u) has
/// N2(u) ∪ N3(u) virtually removed and a pendant u' attached. Returns the
/// number of recorded applications. Each success restarts the scan.
pub fn apply_rule_one(gv: &mut VirtualGraph) -> Result<usize> {
    let mut count = 0;
    'outer: loop {
        if count > APPLICATION_CAP {
            return Err(Error::Invariant("rule I failed to reach a fixpoint".into()));
        }
        for u in gv.vertices() {
            let (_, n2, n3) = n_sets(gv, u)?;
            if n3.is_empty() {
                continue;
            }
            let mut removal = n2.unique_sorted();
            removal.extend(n3.iter());
            removal.sort_unstable();
            removal.dedup();
            if !gv.worthwhile(&removal, 1, 1) {
                continue;
            }
            let pendant = gv.fresh_id();
            gv.push(Gadget {
                tag: GadgetTag::RuleI,
                anchors: (u, None),
                new_vertices: vec![pendant],
                new_edges: vec![(u, pendant)],
                removed: removal,
            });
            count += 1;
            continue 'outer;
        }
        return Ok(count);
    }
}

/// Case analysis for one anchor pair; `None` when (u,v) is not a reduction
/// candidate or the application would not shrink the graph.
pub fn is_reduction_candidate(gv: &VirtualGraph, u: u32, v: u32) -> Result<Option<GadgetTag>> {
    Ok(candidate_with_removal(gv, u, v)?.map(|(tag, _)| tag))
}

fn candidate_with_removal(
    gv: &VirtualGraph,
    u: u32,
    v: u32,
) -> Result<Option<(GadgetTag, Vec<u32>)>> {
    let (_, n2, n3) = n_sets_pair(gv, u, v)?;
    // The anchors can appear in their own N-sets (u ∈ N(v) when adjacent)
    // but are never removal or domination targets of the rule.
    let mut n3: Vec<u32> = n3.unique_sorted();
    n3.retain(|&w| w != u && w != v);
    if n3.len() <= 1 {
        return Ok(None);
    }
    let mut n2: Vec<u32> = n2.unique_sorted();
    n2.retain(|&w| w != u && w != v);
    for w in n2.iter().chain(n3.iter()) {
        if dominates_all(gv, *w, &n3)? {
            return Ok(None);
        }
    }
    let by_u = dominates_all(gv, u, &n3)?;
    let by_v = dominates_all(gv, v, &n3)?;
    let nu: HashSet<u32> = gv.neighbors(u)?.into_iter().collect();
    let nv: HashSet<u32> = gv.neighbors(v)?.into_iter().collect();
    let (tag, extra): (GadgetTag, Vec<u32>) = match (by_u, by_v) {
        (true, true) => (
            GadgetTag::Case11,
            n2.iter()
                .copied()
                .filter(|w| nu.contains(w) && nv.contains(w))
                .collect(),
        ),
        (true, false) => (
            GadgetTag::Case12,
            n2.iter().copied().filter(|w| nu.contains(w)).collect(),
        ),
        (false, true) => (
            GadgetTag::Case13,
            n2.iter().copied().filter(|w| nv.contains(w)).collect(),
        ),
        (false, false) => (GadgetTag::Case2, n2),
    };
    let mut removal: Vec<u32> = n3;
    removal.extend(extra);
    removal.sort_unstable();
    removal.dedup();
    removal.retain(|&w| w != u && w != v);
    let (new_v, new_e) = match tag {
        GadgetTag::Case11 => (2, 4),
        GadgetTag::Case12 | GadgetTag::Case13 => (1, 1),
        GadgetTag::Case2 => (2, 2),
        GadgetTag::RuleI => unreachable!(),
    };
    if !gv.worthwhile(&removal, new_v, new_e) {
        return Ok(None);
    }
    Ok(Some((tag, removal)))
}

/// Applies Rule II to a fixpoint over anchor pairs in lexicographic order.
pub fn apply_rule_two(gv: &mut VirtualGraph) -> Result<usize> {
    let mut count = 0;
    'outer: loop {
        if count > APPLICATION_CAP {
            return Err(Error::Invariant("rule II failed to reach a fixpoint".into()));
        }
        let verts = gv.vertices();
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                let Some((tag, removal)) = candidate_with_removal(gv, u, v)? else {
                    continue;
                };
                let (new_vertices, new_edges) = match tag {
                    GadgetTag::Case11 => {
                        let z = gv.fresh_id();
                        let z2 = gv.fresh_id();
                        (vec![z, z2], vec![(u, z), (v, z), (u, z2), (v, z2)])
                    }
                    GadgetTag::Case12 => {
                        let p = gv.fresh_id();
                        (vec![p], vec![(u, p)])
                    }
                    GadgetTag::Case13 => {
                        let p = gv.fresh_id();
                        (vec![p], vec![(v, p)])
                    }
                    GadgetTag::Case2 => {
                        let pu = gv.fresh_id();
                        let pv = gv.fresh_id();
                        (vec![pu, pv], vec![(u, pu), (v, pv)])
                    }
                    GadgetTag::RuleI => unreachable!(),
                };
                gv.push(Gadget {
                    tag,
                    anchors: (u, Some(v)),
                    new_vertices,
                    new_edges,
                    removed: removal,
                });
                count += 1;
                continue 'outer;
            }
        }
        return Ok(count);
    }
}

/// Alternates Rule I and Rule II until neither applies, then materializes
/// the overlay with provenance. Ledger: `GADGET_WORDS` per gadget.
pub fn alber_kernelize(
    g: &PlanarGraph,
    ledger: Option<&mut SpaceLedger>,
) -> Result<KernelInstance> {
    let mut gv = VirtualGraph::new(g);
    loop {
        let a = apply_rule_one(&mut gv)?;
        let b = apply_rule_two(&mut gv)?;
        if a + b == 0 {
            break;
        }
    }
    if let Some(l) = ledger {
        l.charge("alber.gadgets", gv.gadgets().len() as u64 * GADGET_WORDS);
    }
    let (graph, provenance) = gv.materialize()?;
    Ok(KernelInstance {
        graph,
        provenance,
        k: None,
        bound: None,
    })
}

/// Rule counts (r1, r2) of a reduced overlay.
pub fn rule_counts(gv: &VirtualGraph) -> (usize, usize) {
    let r1 = gv
        .gadgets()
        .iter()
        .filter(|g| g.tag == GadgetTag::RuleI)
        .count();
    (r1, gv.gadgets().len() - r1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlanarGraph;
    use crate::oracle::{brute_force_ds, check_kernel_equivalence, Problem};

    fn star(leaves: usize) -> PlanarGraph {
        let mut rot = vec![(1..=leaves as u32).collect::<Vec<_>>()];
        rot.extend((0..leaves).map(|_| vec![0]));
        PlanarGraph::new(rot).unwrap()
    }

    fn path(n: usize) -> PlanarGraph {
        let rot = (0..n as u32)
            .map(|u| {
                let mut r = Vec::new();
                if u > 0 {
                    r.push(u - 1);
                }
                if (u as usize) < n - 1 {
                    r.push(u + 1);
                }
                r
            })
            .collect();
        PlanarGraph::new(rot).unwrap()
    }

    fn triangle() -> PlanarGraph {
        PlanarGraph::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn n_sets_star_center() {
        let g = star(3);
        let gv = VirtualGraph::new(&g);
        let (n1, n2, n3) = n_sets(&gv, 0).unwrap();
        assert!(n1.is_empty());
        assert!(n2.is_empty());
        assert_eq!(n3.unique_sorted(), vec![1, 2, 3]);
    }

    #[test]
    fn n_sets_path_endpoint() {
        // u–a–b seen from u: a has the outside neighbor b.
        let g = path(3);
        let gv = VirtualGraph::new(&g);
        let (n1, n2, n3) = n_sets(&gv, 0).unwrap();
        assert_eq!(n1.unique_sorted(), vec![1]);
        assert!(n2.is_empty());
        assert!(n3.is_empty());
    }

    #[test]
    fn n_sets_triangle() {
        let g = triangle();
        let gv = VirtualGraph::new(&g);
        let (n1, n2, n3) = n_sets(&gv, 0).unwrap();
        assert!(n1.is_empty());
        assert!(n2.is_empty());
        assert_eq!(n3.unique_sorted(), vec![1, 2]);
    }

    #[test]
    fn rule_one_star() {
        let g = star(5);
        let mut gv = VirtualGraph::new(&g);
        let applied = apply_rule_one(&mut gv).unwrap();
        assert_eq!(applied, 1);
        let alive = gv.vertices();
        assert_eq!(alive, vec![0, 6]);
        assert_eq!(gv.neighbors(0).unwrap(), vec![6]);
    }

    #[test]
    fn rule_one_p3_middle() {
        let g = path(3);
        let mut gv = VirtualGraph::new(&g);
        let applied = apply_rule_one(&mut gv).unwrap();
        assert_eq!(applied, 1);
        assert_eq!(gv.gadgets()[0].anchors.0, 1);
        assert_eq!(gv.vertices(), vec![1, 3]);
    }

    #[test]
    fn rule_one_triangle() {
        let g = triangle();
        let mut gv = VirtualGraph::new(&g);
        apply_rule_one(&mut gv).unwrap();
        assert_eq!(gv.vertices(), vec![0, 3]);
    }

    #[test]
    fn rule_two_c_gadget_case_1_1() {
        // u=0, v=1 not adjacent; w1,w2,w3 adjacent to both.
        let g = PlanarGraph::new(vec![
            vec![2, 3, 4],
            vec![4, 3, 2],
            vec![0, 1],
            vec![0, 1],
            vec![0, 1],
        ])
        .unwrap();
        let gv = VirtualGraph::new(&g);
        assert_eq!(
            is_reduction_candidate(&gv, 0, 1).unwrap(),
            Some(GadgetTag::Case11)
        );
        let mut gv = VirtualGraph::new(&g);
        let applied = apply_rule_two(&mut gv).unwrap();
        assert_eq!(applied, 1);
        assert_eq!(gv.vertices(), vec![0, 1, 5, 6]);
        assert!(check_kernel_equivalence(
            &g,
            &gv.materialize().unwrap().0,
            Problem::DominatingSet
        )
        .unwrap());
    }

    #[test]
    fn rule_two_no_candidate_on_sparse_pairs() {
        let g = path(5);
        let gv = VirtualGraph::new(&g);
        assert_eq!(is_reduction_candidate(&gv, 0, 4).unwrap(), None);
    }

    #[test]
    fn kernelize_star_k19() {
        let k = alber_kernelize(&star(9), None).unwrap();
        assert_eq!(k.graph.n(), 2);
        assert_eq!(brute_force_ds(&k.graph).unwrap().optimum, 1);
    }

    #[test]
    fn kernelize_edgeless_unchanged() {
        let g = PlanarGraph::new(vec![vec![]; 5]).unwrap();
        let k = alber_kernelize(&g, None).unwrap();
        assert_eq!(k.graph.n(), 5);
        assert!(k
            .provenance
            .iter()
            .all(|p| matches!(p, Provenance::Original(_))));
    }

    #[test]
    fn kernelize_idempotent() {
        for g in [star(7), path(9), triangle()] {
            let k1 = alber_kernelize(&g, None).unwrap();
            let k2 = alber_kernelize(&k1.graph, None).unwrap();
            assert_eq!(k1.graph.serialize(), k2.graph.serialize());
        }
    }

    #[test]
    fn kernelize_preserves_gamma_on_random_instances() {
        for seed in 0..12 {
            let g = crate::gen::random_planar(10, 15, seed).unwrap();
            let k = alber_kernelize(&g, None).unwrap();
            assert!(
                check_kernel_equivalence(&g, &k.graph, Problem::DominatingSet).unwrap(),
                "gamma changed on seed {seed}"
            );
        }
    }

    #[test]
    fn ledger_counts_gadgets() {
        let g = star(5);
        let mut ledger = SpaceLedger::new(g.n());
        let _ = alber_kernelize(&g, Some(&mut ledger)).unwrap();
        assert_eq!(ledger.words("alber.gadgets"), GADGET_WORDS);
    }
}
