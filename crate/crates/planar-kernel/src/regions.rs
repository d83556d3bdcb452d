//! Maximal S-region decompositions: compressed boundary-walk storage,
//! combinatorial reconstruction of region interiors from the rotation system,
//! candidate enumeration, greedy maximal decomposition, and a verifier.

use crate::graph::{Embedding, PlanarGraph, SpaceLedger, VertexStream};
use crate::{Error, Result};
use std::collections::{HashMap, HashSet, VecDeque};

/// Distance constants of the problem family: every vertex lies within `c_v`
/// of the anchor set, every edge within `c_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceConstants {
    pub c_v: usize,
    pub c_e: usize,
}

impl DistanceConstants {
    pub fn dominating_set() -> Self {
        Self { c_v: 1, c_e: 1 }
    }

    pub fn vertex_cover() -> Self {
        Self { c_v: 1, c_e: 0 }
    }

    /// Maximum boundary-walk length in edges.
    pub fn walk_limit(&self) -> usize {
        self.c_v + self.c_e + 1
    }

    /// Ledger words per stored region: both walks plus the two anchors.
    pub fn region_words(&self) -> u64 {
        2 * self.walk_limit() as u64 + 2
    }
}

/// A region between two anchors, stored as two boundary walks encoded as
/// rotation-index steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedRegion {
    pub u: u32,
    pub v: u32,
    steps1: Vec<usize>,
    steps2: Vec<usize>,
}

impl CompressedRegion {
    /// Encodes two u-v vertex walks. Walks must start at `u`, end at `v`, and
    /// follow edges of `g`.
    pub fn from_walks(g: &PlanarGraph, walk1: &[u32], walk2: &[u32]) -> Result<Self> {
        let encode = |walk: &[u32]| -> Result<Vec<usize>> {
            walk.windows(2)
                .map(|w| {
                    g.rotation_index(w[0], w[1]).ok_or_else(|| {
                        Error::Invariant(format!("walk step {}-{} is not an edge", w[0], w[1]))
                    })
                })
                .collect()
        };
        if walk1.len() < 2 || walk2.len() < 2 {
            return Err(Error::Invariant("walks need at least one edge".into()));
        }
        let (u, v) = (walk1[0], *walk1.last().unwrap());
        if walk2[0] != u || *walk2.last().unwrap() != v {
            return Err(Error::Invariant("walks must share both endpoints".into()));
        }
        if u == v {
            return Err(Error::Invariant("anchors must differ".into()));
        }
        Ok(Self {
            u,
            v,
            steps1: encode(walk1)?,
            steps2: encode(walk2)?,
        })
    }

    fn decode(&self, g: &PlanarGraph, steps: &[usize]) -> Result<Vec<u32>> {
        let mut walk = vec![self.u];
        let mut cur = self.u;
        for &s in steps {
            let neigh = g.neighbors(cur);
            if s >= neigh.len() {
                return Err(Error::Invariant(format!(
                    "rotation index {s} out of range at vertex {cur}"
                )));
            }
            cur = neigh[s];
            walk.push(cur);
        }
        if cur != self.v {
            return Err(Error::Invariant("walk does not end at the second anchor".into()));
        }
        Ok(walk)
    }

    pub fn walk1(&self, g: &PlanarGraph) -> Result<Vec<u32>> {
        self.decode(g, &self.steps1)
    }

    pub fn walk2(&self, g: &PlanarGraph) -> Result<Vec<u32>> {
        self.decode(g, &self.steps2)
    }

    pub fn walk_edge_counts(&self) -> (usize, usize) {
        (self.steps1.len(), self.steps2.len())
    }

    /// `r <u> <v> | <walk1> | <walk2>` dump line.
    pub fn render(&self, g: &PlanarGraph) -> Result<String> {
        let fmt = |w: Vec<u32>| {
            w.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        Ok(format!(
            "r {} {} | {} | {}",
            self.u,
            self.v,
            fmt(self.walk1(g)?),
            fmt(self.walk2(g)?)
        ))
    }
}

/// Boundary vertices/edges plus the strictly interior vertices of a region.
struct RegionBody {
    boundary: Vec<u32>,
    interior: Vec<u32>,
    /// True when the walks genuinely bound the enclosed area: either they are
    /// identical simple paths (a degenerate zero-area region), or they
    /// diverge and every walk edge lies on the rim of the enclosed face set
    /// or forms a zero-width corridor traversed once by each walk. Regions
    /// pinched at shared walk vertices are admitted with all their lobes;
    /// walk pairs with dangling "spike" edges that stick out of the enclosed
    /// area do not bound a region and are inadmissible as candidates.
    bounded: bool,
}

/// Splits the faces into the region side and the complementary side by
/// traversal parity and selects the side holding the corner wedge at the
/// walk-divergence vertex.
fn region_body(g: &PlanarGraph, r: &CompressedRegion) -> Result<RegionBody> {
    let w1 = r.walk1(g)?;
    let w2 = r.walk2(g)?;
    let mut boundary: Vec<u32> = w1.iter().chain(w2.iter()).copied().collect();
    boundary.sort_unstable();
    boundary.dedup();
    let mut bedges: HashSet<(u32, u32)> = HashSet::new();
    for w in [&w1, &w2] {
        for e in w.windows(2) {
            bedges.insert((e[0].min(e[1]), e[0].max(e[1])));
        }
    }
    // Divergence point of the two walks; identical walks (or one a prefix of
    // the other) enclose nothing.
    let k = (0..w1.len().min(w2.len()))
        .find(|&i| w1[i] != w2[i])
        .map(|i| i - 1); // walks share position 0
    let Some(k) = k else {
        let identical = r.steps1 == r.steps2;
        let simple = w1.len() == boundary.len();
        return Ok(RegionBody {
            boundary,
            interior: Vec::new(),
            bounded: identical && simple,
        });
    };
    let pivot = w1[k];
    let (x1, x2) = (w1[k + 1], w2[k + 1]);
    let emb = Embedding::new(g);
    // The enclosed side is identified by traversal parity: crossing an edge
    // swaps sides exactly when the two walks traverse it an odd number of
    // times in total. Propagating that flip rule over the dual graph splits
    // the faces into two classes; the region is the class holding the corner
    // wedge at the divergence vertex. Unlike a plain flood blocked by walk
    // edges, this joins the lobes of regions pinched at shared walk vertices
    // and assigns zero area to doubled "spike" edges and zero-width corridors.
    let mut traversals: HashMap<(u32, u32), usize> = HashMap::new();
    for w in [&w1, &w2] {
        for e in w.windows(2) {
            *traversals.entry((e[0].min(e[1]), e[0].max(e[1]))).or_default() += 1;
        }
    }
    let mut side = vec![u8::MAX; emb.face_count];
    side[0] = 0;
    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);
    while let Some(f) = queue.pop_front() {
        for &(a, b) in &emb.face_darts[f] {
            let odd = traversals
                .get(&(a.min(b), a.max(b)))
                .map_or(false, |&t| t % 2 == 1);
            let across = emb.face_of(b, a).expect("reverse dart exists");
            let val = side[f] ^ (odd as u8);
            if side[across] == u8::MAX {
                side[across] = val;
                queue.push_back(across);
            } else {
                debug_assert_eq!(side[across], val, "side parity is single-valued");
            }
        }
    }
    // Seed corners: around the divergence vertex, clockwise from the walk1
    // departure to the walk2 departure. All seed corners must agree on the
    // side, and the complementary side must be nonempty.
    let rot = g.neighbors(pivot);
    let deg = rot.len();
    let p1 = g.rotation_index(pivot, x1).expect("decoded walk edge");
    let mut seeds = Vec::new();
    let mut i = p1;
    while rot[i] != x2 {
        let nxt = (i + 1) % deg;
        seeds.push(emb.face_of(pivot, rot[nxt]).expect("dart exists"));
        i = nxt;
    }
    let inside = side[seeds[0]];
    let seeds_agree = seeds.iter().all(|&s| side[s] == inside);
    let reached: HashSet<usize> = (0..emb.face_count)
        .filter(|&f| side[f] == inside)
        .collect();
    let separated = seeds_agree && reached.len() < emb.face_count;
    let mut interior: Vec<u32> = reached
        .iter()
        .flat_map(|&f| emb.face_darts[f].iter().map(|&(a, _)| a))
        .filter(|a| boundary.binary_search(a).is_err())
        .collect();
    interior.sort_unstable();
    interior.dedup();
    // A walk edge either rims the enclosed area, or is a zero-width corridor
    // traversed exactly once by each walk (e.g. a shared prefix toward an
    // anchor). Edges doubled within a single walk are dangling spikes.
    let edge_counts = |w: &[u32]| {
        let mut m: HashMap<(u32, u32), usize> = HashMap::new();
        for e in w.windows(2) {
            *m.entry((e[0].min(e[1]), e[0].max(e[1]))).or_default() += 1;
        }
        m
    };
    let (c1, c2) = (edge_counts(&w1), edge_counts(&w2));
    let bounded = separated
        && bedges.iter().all(|&(a, b)| {
            let f1 = emb.face_of(a, b).expect("dart exists");
            let f2 = emb.face_of(b, a).expect("dart exists");
            reached.contains(&f1)
                || reached.contains(&f2)
                || (c1.get(&(a, b)) == Some(&1) && c2.get(&(a, b)) == Some(&1))
        });
    Ok(RegionBody {
        boundary,
        interior,
        bounded,
    })
}

fn bfs_ball(g: &PlanarGraph, sources: &[u32], radius: usize) -> Vec<bool> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s as usize] == usize::MAX {
            dist[s as usize] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        if dist[x as usize] == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            if dist[y as usize] == usize::MAX {
                dist[y as usize] = dist[x as usize] + 1;
                queue.push_back(y);
            }
        }
    }
    dist.into_iter().map(|d| d != usize::MAX).collect()
}

/// All region vertices without the exploration cap (verifier view).
pub(crate) fn reconstruct_region_raw(
    g: &PlanarGraph,
    r: &CompressedRegion,
) -> Result<(Vec<u32>, Vec<u32>)> {
    let body = region_body(g, r)?;
    Ok((body.boundary, body.interior))
}

/// Streams `V(R)` in ascending order: boundary vertices plus interior
/// vertices, interior exploration capped at distance `c_v` from the anchors.
pub fn reconstruct_region(
    g: &PlanarGraph,
    r: &CompressedRegion,
    c: DistanceConstants,
) -> Result<VertexStream> {
    let body = region_body(g, r)?;
    let ball = bfs_ball(g, &[r.u, r.v], c.c_v);
    let mut all = body.boundary;
    all.extend(body.interior.into_iter().filter(|&w| ball[w as usize]));
    all.sort_unstable();
    all.dedup();
    Ok(all.into_iter().collect())
}

pub fn region_contains(
    g: &PlanarGraph,
    r: &CompressedRegion,
    c: DistanceConstants,
    w: u32,
) -> Result<bool> {
    Ok(reconstruct_region(g, r, c)?.iter().any(|x| x == w))
}

/// All walks from `u` to `v` of at most `limit` edges, lexicographic in the
/// rotation-index step sequences. Walks may repeat vertices.
fn walks_between(g: &PlanarGraph, u: u32, v: u32, limit: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![u];
    fn rec(g: &PlanarGraph, v: u32, limit: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let last = *cur.last().unwrap();
        if last == v && cur.len() > 1 {
            out.push(cur.clone());
            // a walk may continue through v and come back
        }
        if cur.len() > limit {
            return;
        }
        for &w in g.neighbors(last) {
            cur.push(w);
            rec(g, v, limit, cur, out);
            cur.pop();
        }
    }
    rec(g, v, limit, &mut cur, &mut out);
    out
}

/// Ordered pairs of boundary walks that properly bound a region satisfying
/// the distance condition; both orders of a divergent walk pair appear since
/// they bound the two complementary sides.
pub fn enumerate_candidate_regions(
    g: &PlanarGraph,
    u: u32,
    v: u32,
    c: DistanceConstants,
) -> Result<Vec<CompressedRegion>> {
    if u == v {
        return Err(Error::Parameter("anchors must differ".into()));
    }
    let walks = walks_between(g, u, v, c.walk_limit());
    let ball = bfs_ball(g, &[u, v], c.c_v);
    let mut out = Vec::new();
    for w1 in &walks {
        for w2 in &walks {
            let r = CompressedRegion::from_walks(g, w1, w2)?;
            let body = region_body(g, &r)?;
            let all_close = body
                .boundary
                .iter()
                .chain(body.interior.iter())
                .all(|&w| ball[w as usize]);
            if body.bounded && all_close {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Checks the distance property of `s`: every vertex within `c_v`, every edge
/// within `c_e` of the anchor set.
pub fn distance_property_ok(g: &PlanarGraph, s: &[u32], c: DistanceConstants) -> Result<()> {
    let vball = bfs_ball(g, s, c.c_v);
    if let Some(w) = (0..g.n()).find(|&w| !vball[w]) {
        return Err(Error::DistanceProperty(format!(
            "vertex {w} is farther than {} from the anchor set",
            c.c_v
        )));
    }
    let eball = bfs_ball(g, s, c.c_e);
    for (a, b) in g.edges() {
        if !eball[a as usize] && !eball[b as usize] {
            return Err(Error::DistanceProperty(format!(
                "edge {{{a},{b}}} is farther than {} from the anchor set",
                c.c_e
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RegionDecomposition {
    pub constants: DistanceConstants,
    pub anchors: Vec<u32>,
    pub regions: Vec<CompressedRegion>,
}

impl RegionDecomposition {
    /// Vertices covered by some region, ascending.
    pub fn covered(&self, g: &PlanarGraph) -> Result<Vec<u32>> {
        let mut all = Vec::new();
        for r in &self.regions {
            all.extend(reconstruct_region(g, r, self.constants)?.iter());
        }
        all.sort_unstable();
        all.dedup();
        Ok(all)
    }
}

/// Greedy maximal S-region decomposition: scan vertices in id order; for each
/// vertex not yet inside a region, add the largest admissible region that
/// (I) contains it, (II) adds no strict-interior vertex already strictly
/// inside an accepted region, and (III) contains no anchor-set vertex besides
/// its two anchors.
pub fn maximal_region_decomposition(
    g: &PlanarGraph,
    s: &[u32],
    c: DistanceConstants,
    ledger: Option<&mut SpaceLedger>,
) -> Result<RegionDecomposition> {
    let mut anchors: Vec<u32> = s.to_vec();
    anchors.sort_unstable();
    anchors.dedup();
    distance_property_ok(g, &anchors, c)?;
    let in_s: HashSet<u32> = anchors.iter().copied().collect();
    let mut covered = vec![false; g.n()];
    let mut strict = vec![false; g.n()];
    let mut regions = Vec::new();
    let reach = c.walk_limit() + c.c_v;
    // Candidate enumeration is independent of the greedy state, and nearby
    // scan vertices share anchor pairs, so the per-pair results are cached.
    let mut cache: HashMap<(u32, u32), Vec<(CompressedRegion, Vec<u32>, Vec<u32>)>> =
        HashMap::new();
    for u in g.vertices() {
        if covered[u as usize] {
            continue;
        }
        let ball = bfs_ball(g, &[u], reach);
        let near: Vec<u32> = anchors
            .iter()
            .copied()
            .filter(|&a| ball[a as usize])
            .collect();
        let mut best: Option<(usize, CompressedRegion, Vec<u32>, Vec<u32>)> = None;
        for (i, &a) in near.iter().enumerate() {
            for &b in &near[i + 1..] {
                if !cache.contains_key(&(a, b)) {
                    let mut items = Vec::new();
                    for r in enumerate_candidate_regions(g, a, b, c)? {
                        let (boundary, interior) = reconstruct_region_raw(g, &r)?;
                        items.push((r, boundary, interior));
                    }
                    cache.insert((a, b), items);
                }
                for (r, boundary, interior) in &cache[&(a, b)] {
                    let holds_u = boundary.binary_search(&u).is_ok()
                        || interior.binary_search(&u).is_ok();
                    if !holds_u {
                        continue;
                    }
                    if interior.iter().any(|&w| strict[w as usize]) {
                        continue;
                    }
                    let foreign = boundary
                        .iter()
                        .chain(interior.iter())
                        .any(|w| in_s.contains(w) && *w != a && *w != b);
                    if foreign {
                        continue;
                    }
                    let size = boundary.len() + interior.len();
                    if best.as_ref().map_or(true, |(bs, ..)| size > *bs) {
                        best = Some((size, r.clone(), boundary.clone(), interior.clone()));
                    }
                }
            }
        }
        if let Some((_, r, boundary, interior)) = best {
            for &w in boundary.iter().chain(interior.iter()) {
                covered[w as usize] = true;
            }
            for &w in &interior {
                strict[w as usize] = true;
            }
            regions.push(r);
        }
    }
    if let Some(l) = ledger {
        l.charge("regions.stored", regions.len() as u64 * c.region_words());
    }
    Ok(RegionDecomposition {
        constants: c,
        anchors,
        regions,
    })
}

/// Itemized verification report for a region decomposition.
#[derive(Debug, Clone)]
pub struct RegionReport {
    pub walk_lengths_ok: bool,
    pub distance_ok: bool,
    pub anchor_ok: bool,
    pub overlap_ok: bool,
    /// `None` when `|S| < 3` (the bound formula is negative there).
    pub count_ok: Option<bool>,
    pub messages: Vec<String>,
}

impl RegionReport {
    pub fn pass(&self) -> bool {
        self.walk_lengths_ok
            && self.distance_ok
            && self.anchor_ok
            && self.overlap_ok
            && self.count_ok.unwrap_or(true)
    }
}

pub fn verify_region_decomposition(g: &PlanarGraph, rd: &RegionDecomposition) -> RegionReport {
    let c = rd.constants;
    let in_s: HashSet<u32> = rd.anchors.iter().copied().collect();
    let mut report = RegionReport {
        walk_lengths_ok: true,
        distance_ok: true,
        anchor_ok: true,
        overlap_ok: true,
        count_ok: None,
        messages: Vec::new(),
    };
    let mut strict_seen: HashSet<u32> = HashSet::new();
    for (i, r) in rd.regions.iter().enumerate() {
        let (e1, e2) = r.walk_edge_counts();
        if e1 > c.walk_limit() || e2 > c.walk_limit() {
            report.walk_lengths_ok = false;
            report
                .messages
                .push(format!("region {i}: walk lengths {e1}/{e2} exceed {}", c.walk_limit()));
        }
        if !in_s.contains(&r.u) || !in_s.contains(&r.v) {
            report.anchor_ok = false;
            report
                .messages
                .push(format!("region {i}: anchors not in the anchor set"));
        }
        let Ok((boundary, interior)) = reconstruct_region_raw(g, r) else {
            report.walk_lengths_ok = false;
            report.messages.push(format!("region {i}: invalid walks"));
            continue;
        };
        let ball = bfs_ball(g, &[r.u, r.v], c.c_v);
        for &w in boundary.iter().chain(interior.iter()) {
            if !ball[w as usize] {
                report.distance_ok = false;
                report
                    .messages
                    .push(format!("region {i}: vertex {w} too far from anchors"));
            }
            if in_s.contains(&w) && w != r.u && w != r.v {
                report.anchor_ok = false;
                report
                    .messages
                    .push(format!("region {i}: contains foreign anchor {w}"));
            }
        }
        for &w in &interior {
            if !strict_seen.insert(w) {
                report.overlap_ok = false;
                report
                    .messages
                    .push(format!("region {i}: vertex {w} strictly inside two regions"));
            }
        }
    }
    if rd.anchors.len() >= 3 {
        let bound = c.c_v * (3 * rd.anchors.len() - 6);
        let ok = rd.regions.len() <= bound;
        if !ok {
            report
                .messages
                .push(format!("{} regions exceed bound {bound}", rd.regions.len()));
        }
        report.count_ok = Some(ok);
    }
    report
}
