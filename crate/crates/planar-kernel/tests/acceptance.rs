//! End-to-end acceptance suite. Each test covers one release criterion and
//! prints a single `criterion N ...: pass` line on success (visible with
//! `--nocapture`); a failure panics with the offending instance.

use planar_kernel::baker::{approx_ds, approx_vc, bdtw_dom_set};
use planar_kernel::graph::SpaceLedger;
use planar_kernel::oracle::{
    brute_force_ds, brute_force_vc, check_kernel_equivalence, verify_witness, Problem,
};
use planar_kernel::regions::{
    maximal_region_decomposition, verify_region_decomposition, DistanceConstants,
};
use planar_kernel::scheme::{
    kernelize_ds_scheme, kernelize_ds_scheme_mode, kernelize_vc_scheme, kernelize_vc_scheme_mode,
    rule_dom_set_reg, rule_vtx_cov_reg, RegionPartition,
};
use planar_kernel::treedec::{depth_budget, tree_decomposition, width_budget, Subgraph};
use planar_kernel::{alber, gen, PlanarGraph};
use std::sync::OnceLock;

struct Corpus {
    /// All connected planar graphs with up to 8 vertices, one per
    /// isomorphism class.
    exhaustive: Vec<PlanarGraph>,
    /// 200 seeded random planar instances with up to 16 vertices.
    random: Vec<PlanarGraph>,
}

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut exhaustive = Vec::new();
        for n in 1..=8 {
            exhaustive.extend(gen::all_connected_planar(n));
        }
        let mut random = Vec::new();
        let mut seed = 0u64;
        while random.len() < 200 {
            let n = 5 + (seed as usize % 12); // 5..=16
            let m = n + (seed as usize * 3) % (2 * n);
            if let Ok(g) = gen::random_planar(n, m.min(3 * n - 6), seed) {
                random.push(g);
            }
            seed += 1;
        }
        Corpus { exhaustive, random }
    })
}

fn all_instances() -> impl Iterator<Item = &'static PlanarGraph> {
    let c = corpus();
    c.exhaustive.iter().chain(c.random.iter())
}

/// Anchor set for a vertex-cover-style decomposition: the approximate cover
/// plus isolated vertices (the distance property needs them).
fn vc_anchors(g: &PlanarGraph) -> Vec<u32> {
    let mut s = approx_vc(g, 1, 1).unwrap().unique_sorted();
    s.extend(g.vertices().filter(|&v| g.degree(v) == 0));
    s.sort_unstable();
    s.dedup();
    s
}

#[test]
fn criterion_1_dp_matches_oracle() {
    for (i, g) in all_instances().enumerate() {
        let sub = Subgraph::whole(g);
        let td = tree_decomposition(&sub, 1).unwrap();
        let (dp, witness) = bdtw_dom_set(&sub, &td, td.root, &[], None, true).unwrap();
        let opt = brute_force_ds(g).unwrap().optimum;
        assert_eq!(dp, opt, "dp optimum differs at corpus index {i}");
        let w = witness.unwrap().unique_sorted();
        assert_eq!(w.len(), dp, "witness size differs at corpus index {i}");
        assert!(
            verify_witness(g, &w, Problem::DominatingSet),
            "infeasible dp witness at corpus index {i}"
        );
    }
    println!("criterion 1 (dp equals brute force on the corpus): pass");
}

#[test]
fn criterion_2_approximation_ratio() {
    for (i, g) in all_instances().enumerate() {
        let gamma = brute_force_ds(g).unwrap().optimum;
        let tau = brute_force_vc(g).unwrap().optimum;

        let ds1 = approx_ds(g, 1, 1).unwrap().unique_sorted();
        assert!(verify_witness(g, &ds1, Problem::DominatingSet), "index {i}");
        assert!(ds1.len() <= 2 * gamma, "ds eps=1 ratio fails at index {i}");
        let ds2 = approx_ds(g, 1, 2).unwrap().unique_sorted();
        assert!(verify_witness(g, &ds2, Problem::DominatingSet), "index {i}");
        assert!(2 * ds2.len() <= 3 * gamma, "ds eps=1/2 ratio fails at index {i}");

        let vc1 = approx_vc(g, 1, 1).unwrap().unique_sorted();
        assert!(verify_witness(g, &vc1, Problem::VertexCover), "index {i}");
        assert!(vc1.len() <= 2 * tau, "vc eps=1 ratio fails at index {i}");
        let vc2 = approx_vc(g, 1, 2).unwrap().unique_sorted();
        assert!(verify_witness(g, &vc2, Problem::VertexCover), "index {i}");
        assert!(2 * vc2.len() <= 3 * tau, "vc eps=1/2 ratio fails at index {i}");
    }
    println!("criterion 2 (approximation ratios 2 and 1.5 on the corpus): pass");
}

#[test]
fn criterion_3_region_decompositions_verify() {
    for (i, g) in all_instances().enumerate() {
        let ds = approx_ds(g, 1, 1).unwrap().unique_sorted();
        let rd =
            maximal_region_decomposition(g, &ds, DistanceConstants::dominating_set(), None)
                .unwrap();
        let report = verify_region_decomposition(g, &rd);
        assert!(report.pass(), "ds decomposition fails at index {i}: {:?}", report.messages);

        let vc = vc_anchors(g);
        let rd = maximal_region_decomposition(g, &vc, DistanceConstants::vertex_cover(), None)
            .unwrap();
        let report = verify_region_decomposition(g, &rd);
        assert!(report.pass(), "vc decomposition fails at index {i}: {:?}", report.messages);
    }
    println!("criterion 3 (region decompositions verify on the corpus): pass");
}

#[test]
fn criterion_4_alber_kernel() {
    // The shared corpus plus larger instances up to the oracle cap.
    let mut extra = Vec::new();
    for seed in 0..20u64 {
        let n = 17 + (seed as usize % 8); // 17..=24
        let m = n + (seed as usize * 5) % (2 * n);
        if let Ok(g) = gen::random_planar(n, m.min(3 * n - 6), seed) {
            extra.push(g);
        }
    }
    let mut instances: Vec<&PlanarGraph> = all_instances().collect();
    instances.extend(extra.iter());
    for (i, g) in instances.into_iter().enumerate() {
        let mut ledger = SpaceLedger::new(g.n());
        let kern = alber::alber_kernelize(g, Some(&mut ledger)).unwrap();
        assert!(
            check_kernel_equivalence(g, &kern.graph, Problem::DominatingSet).unwrap(),
            "gamma differs at index {i}"
        );

        // Idempotence: a second pass must add zero gadgets.
        let mut ledger2 = SpaceLedger::new(kern.graph.n());
        let kern2 = alber::alber_kernelize(&kern.graph, Some(&mut ledger2)).unwrap();
        assert_eq!(ledger2.words("alber.gadgets"), 0, "not idempotent at index {i}");
        assert_eq!(
            kern2.graph.serialize(),
            kern.graph.serialize(),
            "second pass changed the graph at index {i}"
        );

        // Ledger linearity: words charged are exactly GADGET_WORDS per rule
        // application (independently recounted), with at most 8 words each.
        let mut gv = alber::VirtualGraph::new(g);
        loop {
            let a = alber::apply_rule_one(&mut gv).unwrap();
            let b = alber::apply_rule_two(&mut gv).unwrap();
            if a + b == 0 {
                break;
            }
        }
        let (r1, r2) = alber::rule_counts(&gv);
        assert_eq!(
            ledger.words("alber.gadgets"),
            alber::GADGET_WORDS * (r1 + r2) as u64,
            "ledger not linear in rule applications at index {i}"
        );
        assert!(alber::GADGET_WORDS <= 8);
    }
    println!("criterion 4 (neighborhood-rule kernel: equivalence, idempotence, ledger): pass");
}

#[test]
fn criterion_5_scheme_kernels() {
    let c = corpus();
    let small = c.exhaustive.iter().filter(|g| g.n() <= 7);
    for (i, g) in small.chain(c.random.iter()).enumerate() {
        let gamma = brute_force_ds(g).unwrap().optimum.max(1);
        let tau = brute_force_vc(g).unwrap().optimum.max(1);

        // Per-region caps, asserted on every region of both decompositions.
        let ds = approx_ds(g, 1, 1).unwrap().unique_sorted();
        let rd =
            maximal_region_decomposition(g, &ds, DistanceConstants::dominating_set(), None)
                .unwrap();
        let part = RegionPartition::new(g, rd).unwrap();
        for idx in 0..part.decomposition.regions.len() {
            assert!(rule_dom_set_reg(g, &part, idx).len() <= 134, "index {i}");
        }
        let vc = vc_anchors(g);
        let rd = maximal_region_decomposition(g, &vc, DistanceConstants::vertex_cover(), None)
            .unwrap();
        let part = RegionPartition::new(g, rd).unwrap();
        for idx in 0..part.decomposition.regions.len() {
            assert!(rule_vtx_cov_reg(g, &part, idx).len() <= 7, "index {i}");
        }

        // Solution-size preservation and the global bounds at k = optimum.
        let kern = kernelize_ds_scheme(g, gamma).unwrap();
        assert!(
            check_kernel_equivalence(g, &kern.graph, Problem::DominatingSet).unwrap(),
            "gamma differs at index {i}"
        );
        assert!(kern.graph.n() <= 1146 * gamma, "ds bound fails at index {i}");
        let kern = kernelize_vc_scheme(g, tau).unwrap();
        assert!(
            check_kernel_equivalence(g, &kern.graph, Problem::VertexCover).unwrap(),
            "tau differs at index {i}"
        );
        assert!(kern.graph.n() <= 46 * tau, "vc bound fails at index {i}");
    }

    // Space accounting on low-treewidth families: per-stage stored words stay
    // within a factor of 8 of the declared formulas.
    for n in [64usize, 256, 1024] {
        let families: Vec<(&str, PlanarGraph)> = vec![
            ("path", gen::path(n)),
            ("cycle", gen::cycle(n)),
            ("ladder", gen::grid(2, n / 2)),
        ];
        for (name, g) in &families {
            // Closed-form parameter bounds: gamma <= n/3 + 1 and
            // tau <= n/2 + 1 on paths, cycles, and ladders.
            let k_ds = n / 3 + 1;
            let k_vc = n / 2 + 1;
            let mut ledger = SpaceLedger::new(g.n());
            kernelize_ds_scheme_mode(g, k_ds, true, Some(&mut ledger)).unwrap();
            check_ledger(&ledger, n, 2, k_ds, 1146, 8, &format!("ds {name} n={n}"));
            let mut ledger = SpaceLedger::new(g.n());
            kernelize_vc_scheme_mode(g, k_vc, true, Some(&mut ledger)).unwrap();
            check_ledger(&ledger, n, 1, k_vc, 46, 12, &format!("vc {name} n={n}"));
        }
    }
    println!("criterion 5 (scheme kernels: preservation, size caps, space ledger): pass");
}

/// Asserts each ledger stage stays within a factor of 8 of its declared
/// formula: sqrt(n) for the BFS cursor, one DP table of the budgeted
/// dimensions per probe, 2k for the solution stream, 3 * 2k regions of
/// `region_words` each, and the kernel bound itself for the output.
fn check_ledger(
    ledger: &SpaceLedger,
    n: usize,
    d: usize,
    k: usize,
    kernel_factor: usize,
    region_words: usize,
    label: &str,
) {
    let sqrt_n = (n as f64).sqrt().ceil() as u64;
    let cap = |stage: &str, formula: u64| {
        let measured = ledger.words(stage);
        assert!(
            measured <= 8 * formula,
            "{label}: stage {stage} stores {measured} words, declared {formula}"
        );
    };
    cap("approx.bfs", sqrt_n);
    cap(
        "approx.dp",
        (d as u64) * (width_budget(d) as u64 + 1) * depth_budget(n) as u64,
    );
    cap("approx.stream", 2 * k as u64);
    cap("regions.stored", 6 * k as u64 * region_words as u64);
    cap("scheme.reduce", 134);
    cap("scheme.kernel", (kernel_factor * k) as u64);
}

#[test]
fn criterion_6_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_planar-kernel");
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("t24.pg");
    let run = |args: &[&str]| {
        let out = std::process::Command::new(bin).args(args).output().unwrap();
        assert!(
            out.status.success(),
            "`{}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    std::fs::write(
        &instance,
        String::from_utf8(run(&["gen", "--family", "triangulation", "--n", "24", "--seed", "9"]))
            .unwrap(),
    )
    .unwrap();
    let inst = instance.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "triangulation", "--n", "24", "--seed", "9"],
        vec!["approx-ds", "--epsilon", "1", inst, "--ledger"],
        vec!["approx-vc", "--epsilon", "1/2", inst, "--ledger"],
        vec!["kernel-ds-alber", inst, "--ledger"],
        vec!["kernel-ds-region", inst, "--k", "8", "--ledger"],
        vec!["kernel-vc-region", inst, "--k", "16", "--ledger"],
        vec!["regions", "--cv", "1", "--ce", "1", "--anchors", "auto", inst],
        vec!["solve-brute", "--problem", "ds", inst],
        vec!["verify", "--problem", "vc", inst, inst],
    ];
    for args in &invocations {
        let first = run(args);
        let second = run(args);
        assert_eq!(first, second, "nondeterministic output for `{}`", args.join(" "));
    }
    println!("criterion 6 (byte-identical CLI output across runs): pass");
}

#[test]
fn criterion_7_tree_decompositions() {
    for (i, g) in all_instances().enumerate() {
        let sub = Subgraph::whole(g);
        let d = 1;
        let td = tree_decomposition(&sub, d).unwrap();
        td.verify(&sub).unwrap();
        assert!(td.width() <= width_budget(d), "width budget fails at index {i}");
        assert!(
            td.depth() <= depth_budget(sub.len()),
            "depth budget fails at index {i}"
        );
    }
    // Wider slices from denser instances.
    for seed in 0..10u64 {
        let g = gen::triangulation(40 + 4 * seed as usize, seed);
        let sub = Subgraph::whole(&g);
        let d = 4;
        let td = tree_decomposition(&sub, d).unwrap();
        td.verify(&sub).unwrap();
        assert!(td.width() <= width_budget(d), "width budget fails at seed {seed}");
        assert!(td.depth() <= depth_budget(sub.len()), "depth budget fails at seed {seed}");
    }
    println!("criterion 7 (tree decompositions: axioms, width, depth): pass");
}
