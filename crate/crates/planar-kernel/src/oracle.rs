//! Brute-force ground truth for domination number and vertex cover number on
//! small instances, by cardinality-ascending subset enumeration.

use crate::graph::PlanarGraph;
use crate::{par, Error, Result};

/// Hard cap on instance size; 2^24 subsets stay tractable within seconds.
pub const ORACLE_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    DominatingSet,
    VertexCover,
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub optimum: usize,
    pub witness: Vec<u32>,
    /// Number of subsets examined before the optimum was certified.
    pub explored: u64,
}

/// Closed neighborhoods and edge list as bitmasks over up to 24 vertices.
struct MaskGraph {
    n: usize,
    closed: Vec<u32>,
    edges: Vec<(u32, u32)>,
    full: u32,
}

impl MaskGraph {
    fn build(g: &PlanarGraph) -> Result<Self> {
        let n = g.n();
        if n > ORACLE_CAP {
            return Err(Error::TooLarge(format!(
                "oracle supports n <= {ORACLE_CAP}, got {n}"
            )));
        }
        let mut closed = vec![0u32; n];
        for u in g.vertices() {
            let mut mask = 1u32 << u;
            for &v in g.neighbors(u) {
                mask |= 1 << v;
            }
            closed[u as usize] = mask;
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Ok(Self {
            n,
            closed,
            edges: g.edges(),
            full,
        })
    }

    fn dominates(&self, subset: u32) -> bool {
        let mut covered = 0u32;
        let mut rest = subset;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            covered |= self.closed[v];
            rest &= rest - 1;
        }
        covered == self.full
    }

    fn covers(&self, subset: u32) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| subset & ((1 << u) | (1 << v)) != 0)
    }
}

/// Gosper's hack: next subset mask with the same popcount.
fn next_same_popcount(x: u32) -> u32 {
    let c = x & x.wrapping_neg();
    let r = x.wrapping_add(c);
    if c == 0 || r == 0 {
        return 0; // overflowed past the range
    }
    (((x ^ r) >> 2) / c) | r
}

fn masks_of_size(n: usize, k: usize) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit = 1u32 << n;
    let mut out = Vec::new();
    let mut x = (1u32 << k) - 1;
    while x < limit {
        out.push(x);
        x = next_same_popcount(x);
        if x == 0 {
            break;
        }
    }
    out
}

fn search(mg: &MaskGraph, feasible: impl Fn(u32) -> bool + Sync, parallel: bool) -> OracleResult {
    let mut explored = 0u64;
    for k in 0..=mg.n {
        let masks = masks_of_size(mg.n, k);
        explored += masks.len() as u64;
        // Minimum feasible mask within the cardinality class: deterministic
        // witness regardless of the reduction order.
        let best = par::map_reduce(
            parallel,
            masks,
            |m| if feasible(m) { Some(m) } else { None },
            |a, b| match (a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, None) => x,
                (None, y) => y,
            },
        )
        .flatten();
        if let Some(mask) = best {
            let witness = (0..mg.n as u32).filter(|&v| mask & (1 << v) != 0).collect();
            return OracleResult {
                optimum: k,
                witness,
                explored,
            };
        }
    }
    unreachable!("the full vertex set is always feasible");
}

pub fn brute_force_ds(g: &PlanarGraph) -> Result<OracleResult> {
    brute_force_ds_mode(g, par::available())
}

pub fn brute_force_ds_mode(g: &PlanarGraph, parallel: bool) -> Result<OracleResult> {
    let mg = MaskGraph::build(g)?;
    let res = search(&mg, |m| mg.dominates(m), parallel);
    debug_assert!(verify_witness(g, &res.witness, Problem::DominatingSet));
    Ok(res)
}

pub fn brute_force_vc(g: &PlanarGraph) -> Result<OracleResult> {
    brute_force_vc_mode(g, par::available())
}

pub fn brute_force_vc_mode(g: &PlanarGraph, parallel: bool) -> Result<OracleResult> {
    let mg = MaskGraph::build(g)?;
    let res = search(&mg, |m| mg.covers(m), parallel);
    debug_assert!(verify_witness(g, &res.witness, Problem::VertexCover));
    Ok(res)
}

/// Independent feasibility scan, used to re-check oracle witnesses and any
/// solution produced by the pipelines.
pub fn verify_witness(g: &PlanarGraph, set: &[u32], problem: Problem) -> bool {
    match problem {
        Problem::DominatingSet => {
            let mut dominated = vec![false; g.n()];
            for &v in set {
                dominated[v as usize] = true;
                for &w in g.neighbors(v) {
                    dominated[w as usize] = true;
                }
            }
            dominated.iter().all(|&d| d)
        }
        Problem::VertexCover => g
            .edges()
            .iter()
            .all(|&(u, v)| set.contains(&u) || set.contains(&v)),
    }
}

/// True iff the two instances have equal optima for `problem`.
pub fn check_kernel_equivalence(
    g: &PlanarGraph,
    kernel: &PlanarGraph,
    problem: Problem,
) -> Result<bool> {
    let (a, b) = match problem {
        Problem::DominatingSet => (brute_force_ds(g)?, brute_force_ds(kernel)?),
        Problem::VertexCover => (brute_force_vc(g)?, brute_force_vc(kernel)?),
    };
    Ok(a.optimum == b.optimum)
}
