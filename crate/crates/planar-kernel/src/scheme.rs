//! Region-based linear kernels: per-region reduction rules on top of a
//! maximal region decomposition, yielding 1146k-vertex dominating-set and
//! 46k-vertex vertex-cover kernels.

use crate::baker::{approx_ds_mode, approx_vc_mode};
use crate::graph::{PlanarGraph, SpaceLedger};
use crate::par;
use crate::regions::{
    maximal_region_decomposition, reconstruct_region, DistanceConstants, RegionDecomposition,
};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Where a kernel vertex came from: an input vertex or an inserted gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Original(u32),
    Gadget { tag: &'static str, anchors: Vec<u32> },
}

/// A reduced instance with per-vertex provenance and an optional declared
/// size bound for the supplied parameter.
#[derive(Debug, Clone)]
pub struct KernelInstance {
    pub graph: PlanarGraph,
    /// Provenance of each kernel vertex, indexed by kernel id.
    pub provenance: Vec<Provenance>,
    pub k: Option<usize>,
    /// Declared vertex-count bound (e.g. 1146k), when k is supplied.
    pub bound: Option<usize>,
}

impl KernelInstance {
    /// Instance-format dump with `c origin` provenance comments and, when a
    /// bound is declared, a `c bound <declared> <actual>` line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        if let Some(bound) = self.bound {
            out.push_str(&format!("c bound {bound} {}\n", self.graph.n()));
        }
        for (id, p) in self.provenance.iter().enumerate() {
            match p {
                Provenance::Original(orig) => {
                    out.push_str(&format!("c origin {id} {orig}\n"));
                }
                Provenance::Gadget { tag, anchors } => {
                    let a = anchors
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    out.push_str(&format!("c origin {id} gadget {tag} {a}\n"));
                }
            }
        }
        out.push_str(&self.graph.serialize());
        out
    }
}

/// A region decomposition split into per-region boundary/interior sets plus
/// the vertices covered by no region.
#[derive(Debug, Clone)]
pub struct RegionPartition {
    pub decomposition: RegionDecomposition,
    /// Boundary-walk vertices per region, ascending.
    pub boundary: Vec<Vec<u32>>,
    /// Interior vertices per region (V(R) minus boundary), ascending.
    pub interior: Vec<Vec<u32>>,
    /// Vertices in no region, ascending.
    pub outside: Vec<u32>,
}

impl RegionPartition {
    pub fn new(g: &PlanarGraph, decomposition: RegionDecomposition) -> Result<Self> {
        let c = decomposition.constants;
        // Walks have at most c_v + c_e + 1 edges and share both endpoints.
        let boundary_cap = 2 * (c.c_v + c.c_e) + 2;
        let mut boundary = Vec::with_capacity(decomposition.regions.len());
        let mut interior = Vec::with_capacity(decomposition.regions.len());
        let mut covered = vec![false; g.n()];
        for r in &decomposition.regions {
            let mut b: Vec<u32> = r.walk1(g)?;
            b.extend(r.walk2(g)?);
            b.sort_unstable();
            b.dedup();
            if b.len() > boundary_cap {
                return Err(Error::Invariant(format!(
                    "region ({}, {}) has {} boundary vertices, cap {boundary_cap}",
                    r.u,
                    r.v,
                    b.len()
                )));
            }
            let mut i: Vec<u32> = reconstruct_region(g, r, c)?
                .iter()
                .filter(|v| !b.contains(v))
                .collect();
            i.sort_unstable();
            for &v in b.iter().chain(i.iter()) {
                covered[v as usize] = true;
            }
            boundary.push(b);
            interior.push(i);
        }
        let outside = (0..g.n() as u32).filter(|&v| !covered[v as usize]).collect();
        Ok(Self {
            decomposition,
            boundary,
            interior,
            outside,
        })
    }

    /// V(R) for one region, ascending.
    pub fn region_vertices(&self, idx: usize) -> Vec<u32> {
        let mut all = self.boundary[idx].clone();
        all.extend(&self.interior[idx]);
        all.sort_unstable();
        all
    }
}

/// N_R[C]: the vertices of V(R) dominated by `c` (closed neighborhoods),
/// ascending. `c` must lie within the region's boundary.
pub fn dominated_within(
    g: &PlanarGraph,
    part: &RegionPartition,
    idx: usize,
    c: &[u32],
) -> Result<Vec<u32>> {
    if let Some(&bad) = c.iter().find(|v| !part.boundary[idx].contains(v)) {
        return Err(Error::Parameter(format!(
            "vertex {bad} is not on the boundary of region {idx}"
        )));
    }
    let vr: HashSet<u32> = part.region_vertices(idx).into_iter().collect();
    let mut dom: BTreeSet<u32> = c.iter().copied().collect();
    for &x in c {
        dom.extend(g.neighbors(x).iter().filter(|w| vr.contains(w)));
    }
    Ok(dom.into_iter().collect())
}

/// Per-region dominating-set reduction. Every interior vertex has all its
/// neighbors inside the region, so solutions interact with the interior only
/// through the at most 64 boundary subsets C. The kept interior set T is
/// grown to a fixed point of the following exchange condition: for every C
/// with undominated interior rest = I(R) \ N[C], (i) T retains a vertex of
/// rest, and (ii) whenever an interior vertex x dominates all of T ∩ rest,
/// some kept or boundary vertex q dominates all of rest plus the boundary
/// neighbors of x. Condition (ii) lets any solution swap x for q in either
/// direction (a true dominator of rest is itself such a q and gets kept),
/// while the witness added when no q exists exposes x as a false dominator.
/// Returns T plus the boundary, ascending.
pub fn rule_dom_set_reg(g: &PlanarGraph, part: &RegionPartition, idx: usize) -> Vec<u32> {
    let b = &part.boundary[idx];
    let interior = &part.interior[idx];
    let vr_set: HashSet<u32> = part.region_vertices(idx).into_iter().collect();
    let closed = |v: u32, x: u32| v == x || g.has_edge(v, x);
    let rests: Vec<Vec<u32>> = (0u64..(1 << b.len()))
        .map(|mask| {
            let mut dom: HashSet<u32> = HashSet::new();
            for (j, &x) in b.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    dom.insert(x);
                    dom.extend(g.neighbors(x).iter().filter(|w| vr_set.contains(w)));
                }
            }
            interior
                .iter()
                .copied()
                .filter(|w| !dom.contains(w))
                .collect()
        })
        .collect();
    let mut kept: BTreeSet<u32> = BTreeSet::new();
    loop {
        let mut changed = false;
        for rest in rests.iter().filter(|r| !r.is_empty()) {
            if !rest.iter().any(|w| kept.contains(w)) {
                kept.insert(rest[0]);
                changed = true;
            }
            for &x in interior {
                let rest_t: Vec<u32> = rest
                    .iter()
                    .copied()
                    .filter(|w| kept.contains(w))
                    .collect();
                if !rest_t.iter().all(|&w| closed(x, w)) {
                    continue;
                }
                let mut needed: Vec<u32> = rest.to_vec();
                needed.extend(b.iter().copied().filter(|&y| closed(x, y)));
                let satisfied = |q: u32| needed.iter().all(|&w| closed(q, w));
                if kept.iter().copied().chain(b.iter().copied()).any(satisfied) {
                    continue;
                }
                if let Some(q) = interior.iter().copied().find(|&q| satisfied(q)) {
                    kept.insert(q);
                } else {
                    let t = rest
                        .iter()
                        .copied()
                        .find(|&w| !closed(x, w))
                        .expect("x fails to dominate rest, so a witness exists");
                    kept.insert(t);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut keep: BTreeSet<u32> = b.iter().copied().collect();
    keep.extend(kept);
    keep.into_iter().collect()
}

/// Per-region vertex-cover reduction: keep at most three interior witnesses
/// (smallest id incident with u, with v, and with both) plus the boundary,
/// ascending (at most 4 + 3 = 7 vertices).
pub fn rule_vtx_cov_reg(g: &PlanarGraph, part: &RegionPartition, idx: usize) -> Vec<u32> {
    let r = &part.decomposition.regions[idx];
    let (u, v) = (r.u, r.v);
    let interior = &part.interior[idx];
    let mut keep: BTreeSet<u32> = part.boundary[idx].iter().copied().collect();
    let witness = |want_u: bool, want_v: bool| {
        interior
            .iter()
            .copied()
            .find(|&p| (!want_u || g.has_edge(p, u)) && (!want_v || g.has_edge(p, v)))
    };
    for w in [witness(true, false), witness(false, true), witness(true, true)]
        .into_iter()
        .flatten()
    {
        keep.insert(w);
    }
    keep.into_iter().collect()
}

/// Outside cleanup for the vertex-cover kernel: for each cover vertex, keep
/// the smallest-id outside non-cover vertex incident to it; everything else
/// outside the regions (other than the cover itself) is dropped. Returns the
/// survivors, ascending (at most |cover| vertices).
pub fn rule_vtx_cov_cleanup(g: &PlanarGraph, cover: &[u32], part: &RegionPartition) -> Vec<u32> {
    let cover_set: HashSet<u32> = cover.iter().copied().collect();
    let candidates: Vec<u32> = part
        .outside
        .iter()
        .copied()
        .filter(|v| !cover_set.contains(v))
        .collect();
    let mut keep = BTreeSet::new();
    for &v in cover {
        if let Some(&x) = candidates.iter().find(|&&x| g.has_edge(x, v)) {
            keep.insert(x);
        }
    }
    keep.into_iter().collect()
}

fn induced_kernel(
    g: &PlanarGraph,
    keep: &BTreeSet<u32>,
    k: usize,
    bound: usize,
) -> Result<KernelInstance> {
    let order: Vec<u32> = keep.iter().copied().collect();
    let index: HashMap<u32, u32> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let rotation = order
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| index.get(w).copied())
                .collect::<Vec<_>>()
        })
        .collect();
    let provenance = order.into_iter().map(Provenance::Original).collect();
    Ok(KernelInstance {
        graph: PlanarGraph::new_relaxed(rotation)?,
        provenance,
        k: Some(k),
        bound: Some(bound),
    })
}

pub fn kernelize_ds_scheme(g: &PlanarGraph, k: usize) -> Result<KernelInstance> {
    kernelize_ds_scheme_mode(g, k, par::available(), None)
}

/// Dominating-set kernel: 2-approximate dominating set, maximal region
/// decomposition with c_V = c_E = 1, then per-region reduction; vertices
/// outside regions are kept verbatim. The kernel has at most 1146k vertices
/// whenever gamma(G) <= k.
pub fn kernelize_ds_scheme_mode(
    g: &PlanarGraph,
    k: usize,
    parallel: bool,
    ledger: Option<&mut SpaceLedger>,
) -> Result<KernelInstance> {
    let mut master = SpaceLedger::new(g.n());
    let d = approx_ds_mode(g, 1, 1, parallel, Some(&mut master))?.unique_sorted();
    let c = DistanceConstants::dominating_set();
    let rd = maximal_region_decomposition(g, &d, c, Some(&mut master))?;
    let part = RegionPartition::new(g, rd)?;
    if part.outside.len() > 170 * d.len() {
        eprintln!(
            "warning: {} vertices outside regions exceed the expected bound 170 * {} = {}",
            part.outside.len(),
            d.len(),
            170 * d.len()
        );
    }
    let reduced: Vec<Vec<u32>> = par::map_collect(
        parallel,
        (0..part.decomposition.regions.len()).collect(),
        |i| rule_dom_set_reg(g, &part, i),
    );
    let mut keep: BTreeSet<u32> = part.outside.iter().copied().collect();
    let mut widest = 0u64;
    for r in &reduced {
        if r.len() > 134 {
            return Err(Error::BoundViolation(format!(
                "region replacement has {} vertices, cap 134",
                r.len()
            )));
        }
        widest = widest.max(r.len() as u64);
        keep.extend(r);
    }
    master.charge("scheme.reduce", widest);
    master.charge("scheme.kernel", keep.len() as u64);
    if let Some(l) = ledger {
        l.merge(&master);
    }
    let bound = 1146 * k;
    if keep.len() > bound {
        return Err(Error::BoundViolation(format!(
            "kernel has {} vertices, declared bound {bound}",
            keep.len()
        )));
    }
    induced_kernel(g, &keep, k, bound)
}

pub fn kernelize_vc_scheme(g: &PlanarGraph, k: usize) -> Result<KernelInstance> {
    kernelize_vc_scheme_mode(g, k, par::available(), None)
}

/// Vertex-cover kernel: 2-approximate cover, maximal region decomposition
/// with c_V = 1 and c_E = 0, per-region reduction, then the outside cleanup.
/// The kernel has at most 46k vertices whenever tau(G) <= k.
pub fn kernelize_vc_scheme_mode(
    g: &PlanarGraph,
    k: usize,
    parallel: bool,
    ledger: Option<&mut SpaceLedger>,
) -> Result<KernelInstance> {
    let mut master = SpaceLedger::new(g.n());
    let cover = approx_vc_mode(g, 1, 1, parallel, Some(&mut master))?.unique_sorted();
    // Isolated vertices join the anchor set so the distance property holds;
    // they never enter a minimum cover and the cleanup drops them.
    let mut anchors = cover.clone();
    anchors.extend(g.vertices().filter(|&v| g.degree(v) == 0));
    anchors.sort_unstable();
    anchors.dedup();
    let c = DistanceConstants::vertex_cover();
    let rd = maximal_region_decomposition(g, &anchors, c, Some(&mut master))?;
    let part = RegionPartition::new(g, rd)?;
    let reduced: Vec<Vec<u32>> = par::map_collect(
        parallel,
        (0..part.decomposition.regions.len()).collect(),
        |i| rule_vtx_cov_reg(g, &part, i),
    );
    let mut keep: BTreeSet<u32> = cover.iter().copied().collect();
    let mut widest = 0u64;
    for r in &reduced {
        if r.len() > 7 {
            return Err(Error::BoundViolation(format!(
                "region replacement has {} vertices, cap 7",
                r.len()
            )));
        }
        widest = widest.max(r.len() as u64);
        keep.extend(r);
    }
    keep.extend(rule_vtx_cov_cleanup(g, &cover, &part));
    master.charge("scheme.reduce", widest);
    master.charge("scheme.kernel", keep.len() as u64);
    if let Some(l) = ledger {
        l.merge(&master);
    }
    let bound = 46 * k;
    if keep.len() > bound {
        return Err(Error::BoundViolation(format!(
            "kernel has {} vertices, declared bound {bound}",
            keep.len()
        )));
    }
    induced_kernel(g, &keep, k, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle::{brute_force_ds, brute_force_vc, check_kernel_equivalence, Problem};

    fn ds_partition(g: &PlanarGraph) -> RegionPartition {
        let d = crate::baker::approx_ds(g, 1, 1).unwrap().unique_sorted();
        let rd =
            maximal_region_decomposition(g, &d, DistanceConstants::dominating_set(), None).unwrap();
        RegionPartition::new(g, rd).unwrap()
    }

    #[test]
    fn partition_covers_everything() {
        let g = gen::random_planar(12, 20, 3).unwrap();
        let part = ds_partition(&g);
        let mut seen: BTreeSet<u32> = part.outside.iter().copied().collect();
        for idx in 0..part.decomposition.regions.len() {
            assert!(part.boundary[idx].len() <= 6);
            seen.extend(part.region_vertices(idx));
            let b: BTreeSet<u32> = part.boundary[idx].iter().copied().collect();
            assert!(part.interior[idx].iter().all(|v| !b.contains(v)));
        }
        assert_eq!(seen.len(), g.n());
    }

    #[test]
    fn dominated_within_basics() {
        let g = gen::random_planar(10, 16, 1).unwrap();
        let part = ds_partition(&g);
        for idx in 0..part.decomposition.regions.len() {
            assert!(dominated_within(&g, &part, idx, &[]).unwrap().is_empty());
            let b = part.boundary[idx].clone();
            let full = dominated_within(&g, &part, idx, &b).unwrap();
            let vr = part.region_vertices(idx);
            assert!(full.iter().all(|v| vr.contains(v)));
            assert!(b.iter().all(|v| full.contains(v)));
        }
    }

    #[test]
    fn dominated_within_rejects_non_boundary() {
        let g = gen::path(4);
        let d = vec![1, 2];
        let rd =
            maximal_region_decomposition(&g, &d, DistanceConstants::dominating_set(), None)
                .unwrap();
        let part = RegionPartition::new(&g, rd).unwrap();
        assert!(!part.decomposition.regions.is_empty());
        let outsider = (0..4u32)
            .find(|v| !part.boundary[0].contains(v))
            .unwrap();
        assert!(dominated_within(&g, &part, 0, &[outsider]).is_err());
    }

    #[test]
    fn dom_set_reg_keeps_boundary_and_caps_size() {
        for seed in [2u64, 5, 9, 14] {
            let g = gen::random_planar(14, 24, seed).unwrap();
            let part = ds_partition(&g);
            for idx in 0..part.decomposition.regions.len() {
                let red = rule_dom_set_reg(&g, &part, idx);
                assert!(red.len() <= 134);
                assert!(part.boundary[idx].iter().all(|v| red.contains(v)));
                let vr = part.region_vertices(idx);
                assert!(red.iter().all(|v| vr.contains(v)));
            }
        }
    }

    #[test]
    fn dom_set_reg_empty_interior_is_boundary() {
        let g = gen::cycle(6);
        let d = vec![0, 2, 4];
        let rd =
            maximal_region_decomposition(&g, &d, DistanceConstants::dominating_set(), None)
                .unwrap();
        let part = RegionPartition::new(&g, rd).unwrap();
        for idx in 0..part.decomposition.regions.len() {
            if part.interior[idx].is_empty() {
                assert_eq!(rule_dom_set_reg(&g, &part, idx), part.boundary[idx]);
            }
        }
    }

    #[test]
    fn kernelize_ds_star() {
        let g = gen::star(5);
        let kern = kernelize_ds_scheme(&g, 1).unwrap();
        assert!(kern.graph.n() <= 1146);
        assert!(check_kernel_equivalence(&g, &kern.graph, Problem::DominatingSet).unwrap());
        assert_eq!(brute_force_ds(&kern.graph).unwrap().optimum, 1);
    }

    #[test]
    fn kernelize_ds_path5() {
        let g = gen::path(5);
        let kern = kernelize_ds_scheme(&g, 2).unwrap();
        assert_eq!(brute_force_ds(&kern.graph).unwrap().optimum, 2);
    }

    #[test]
    fn kernelize_ds_edgeless_is_identity() {
        let g = PlanarGraph::new_relaxed(vec![vec![], vec![], vec![]]).unwrap();
        let kern = kernelize_ds_scheme(&g, 3).unwrap();
        assert_eq!(kern.graph.serialize(), g.serialize());
        assert_eq!(
            kern.provenance,
            vec![
                Provenance::Original(0),
                Provenance::Original(1),
                Provenance::Original(2)
            ]
        );
    }

    #[test]
    fn kernelize_ds_preserves_gamma_on_random_instances() {
        for seed in 0..12u64 {
            let n = 9 + seed as usize % 6;
            let g = gen::random_planar(n, n + 5, seed).unwrap();
            let opt = brute_force_ds(&g).unwrap().optimum;
            let kern = kernelize_ds_scheme(&g, opt).unwrap();
            assert!(
                check_kernel_equivalence(&g, &kern.graph, Problem::DominatingSet).unwrap(),
                "gamma mismatch at seed {seed}"
            );
            assert!(kern.graph.n() <= 1146 * opt);
        }
    }

    #[test]
    fn vtx_cov_reg_caps_and_witnesses() {
        for seed in [1u64, 4, 8] {
            let g = gen::random_planar(12, 20, seed).unwrap();
            let cover = crate::baker::approx_vc(&g, 1, 1).unwrap().unique_sorted();
            let rd = maximal_region_decomposition(
                &g,
                &cover,
                DistanceConstants::vertex_cover(),
                None,
            )
            .unwrap();
            let part = RegionPartition::new(&g, rd).unwrap();
            for idx in 0..part.decomposition.regions.len() {
                assert!(part.boundary[idx].len() <= 4);
                let red = rule_vtx_cov_reg(&g, &part, idx);
                assert!(red.len() <= 7);
                assert!(part.boundary[idx].iter().all(|v| red.contains(v)));
            }
        }
    }

    #[test]
    fn cleanup_keeps_one_pendant_per_cover_vertex() {
        // Two pendants hanging off one cover vertex; only the smaller survives.
        let g = PlanarGraph::new(vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]).unwrap();
        let cover = vec![0];
        let rd = maximal_region_decomposition(
            &g,
            &cover,
            DistanceConstants::vertex_cover(),
            None,
        )
        .unwrap();
        let part = RegionPartition::new(&g, rd).unwrap();
        let t = rule_vtx_cov_cleanup(&g, &cover, &part);
        let outside_noncover: Vec<u32> = part
            .outside
            .iter()
            .copied()
            .filter(|v| !cover.contains(v))
            .collect();
        if let Some(&first) = outside_noncover.first() {
            assert_eq!(t, vec![first]);
        } else {
            assert!(t.is_empty());
        }
    }

    #[test]
    fn cleanup_drops_isolated_outside_vertex() {
        let g = PlanarGraph::new_relaxed(vec![vec![1], vec![0], vec![]]).unwrap();
        let cover = vec![0];
        let rd = maximal_region_decomposition(
            &g,
            &[0, 2],
            DistanceConstants::vertex_cover(),
            None,
        )
        .unwrap();
        let part = RegionPartition::new(&g, rd).unwrap();
        let t = rule_vtx_cov_cleanup(&g, &cover, &part);
        assert!(!t.contains(&2));
    }

    #[test]
    fn kernelize_vc_triangle() {
        let g = gen::cycle(3);
        let kern = kernelize_vc_scheme(&g, 2).unwrap();
        assert_eq!(brute_force_vc(&kern.graph).unwrap().optimum, 2);
    }

    #[test]
    fn kernelize_vc_star() {
        let g = gen::star(8);
        let kern = kernelize_vc_scheme(&g, 1).unwrap();
        assert!(kern.graph.n() <= 46);
        assert_eq!(brute_force_vc(&kern.graph).unwrap().optimum, 1);
    }

    #[test]
    fn kernelize_vc_single_edge_is_identity() {
        let g = PlanarGraph::new(vec![vec![1], vec![0]]).unwrap();
        let kern = kernelize_vc_scheme(&g, 1).unwrap();
        assert_eq!(kern.graph.serialize(), g.serialize());
    }

    #[test]
    fn kernelize_vc_preserves_tau_on_random_instances() {
        for seed in 0..12u64 {
            let n = 9 + seed as usize % 6;
            let g = gen::random_planar(n, n + 5, seed).unwrap();
            let opt = brute_force_vc(&g).unwrap().optimum;
            let kern = kernelize_vc_scheme(&g, opt.max(1)).unwrap();
            assert!(
                check_kernel_equivalence(&g, &kern.graph, Problem::VertexCover).unwrap(),
                "tau mismatch at seed {seed}"
            );
            assert!(kern.graph.n() <= 46 * opt.max(1));
        }
    }

    #[test]
    fn kernel_serialization_has_bound_and_origins() {
        let g = gen::star(5);
        let kern = kernelize_ds_scheme(&g, 1).unwrap();
        let text = kern.serialize();
        assert!(text.starts_with("c bound 1146 "));
        assert!(text.contains("c origin 0 "));
    }

    #[test]
    fn pipeline_is_deterministic_across_modes() {
        let g = gen::random_planar(14, 24, 7).unwrap();
        let a = kernelize_ds_scheme_mode(&g, 4, false, None).unwrap();
        let b = kernelize_ds_scheme_mode(&g, 4, true, None).unwrap();
        assert_eq!(a.serialize(), b.serialize());
        let a = kernelize_vc_scheme_mode(&g, 6, false, None).unwrap();
        let b = kernelize_vc_scheme_mode(&g, 6, true, None).unwrap();
        assert_eq!(a.serialize(), b.serialize());
    }
}
