//! Command-line entry point wiring the approximation, region, and kernel
//! pipelines. Artifacts go to standard output (or `--output`); diagnostics go
//! to standard error. Exit codes: 0 success, 1 invariant or bound failure,
//! 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use planar_kernel::graph::load_graph;
use planar_kernel::regions::{
    maximal_region_decomposition, DistanceConstants, RegionDecomposition,
};
use planar_kernel::{alber, baker, gen, oracle, scheme, Error, PlanarGraph, SpaceLedger};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "planar-kernel", version, about = "Planar kernelization toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Emit the per-stage space ledger as `c ledger <stage> <words> <bits>`.
    #[arg(long)]
    ledger: bool,
    /// Write artifacts to this file instead of standard output.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Ds,
    Vc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Star,
    Grid,
    Triangulation,
}

#[derive(Subcommand)]
enum Command {
    /// (1+epsilon)-approximate dominating set.
    ApproxDs {
        instance: std::path::PathBuf,
        /// Approximation slack in (0, 1], as `a/b`, an integer, or a decimal.
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// (1+epsilon)-approximate vertex cover.
    ApproxVc {
        instance: std::path::PathBuf,
        #[arg(long, default_value = "1")]
        epsilon: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Neighborhood-rule dominating-set kernel (gadget overlay).
    KernelDsAlber {
        instance: std::path::PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Region-based dominating-set kernel (at most 1146k vertices).
    KernelDsRegion {
        instance: std::path::PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Region-based vertex-cover kernel (at most 46k vertices).
    KernelVcRegion {
        instance: std::path::PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Maximal region decomposition dump.
    Regions {
        instance: std::path::PathBuf,
        /// Vertex-distance constant of the decomposition.
        #[arg(long)]
        cv: usize,
        /// Edge-distance constant of the decomposition.
        #[arg(long)]
        ce: usize,
        /// Anchor set: a file of whitespace-separated vertex ids, or `auto`
        /// to use an approximate solution (dominating set when ce > 0,
        /// vertex cover otherwise).
        #[arg(long, default_value = "auto")]
        anchors: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Exact optimum by brute force (small instances only).
    SolveBrute {
        instance: std::path::PathBuf,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check that two instances have equal optimum.
    Verify {
        orig: std::path::PathBuf,
        kernel: std::path::PathBuf,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Generate a corpus instance.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        /// Vertex count for paths and triangulations; leaves for stars.
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        rows: usize,
        #[arg(long, default_value_t = 0)]
        cols: usize,
        /// Seed for randomized families; no hidden entropy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
}

/// Parses `a/b`, an integer, or a decimal into a rational in (0, 1].
fn parse_epsilon(text: &str) -> planar_kernel::Result<(u32, u32)> {
    let bad = || Error::Parameter(format!("epsilon `{text}` is not a rational in (0, 1]"));
    let (num, den) = if let Some((a, b)) = text.split_once('/') {
        (
            a.trim().parse::<u32>().map_err(|_| bad())?,
            b.trim().parse::<u32>().map_err(|_| bad())?,
        )
    } else if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let w = if whole.is_empty() {
            0
        } else {
            whole.parse::<u32>().map_err(|_| bad())?
        };
        let den = 10u32.pow(frac.len() as u32);
        let f = frac.parse::<u32>().map_err(|_| bad())?;
        (w.saturating_mul(den).saturating_add(f), den)
    } else {
        (text.trim().parse::<u32>().map_err(|_| bad())?, 1)
    };
    if num == 0 || den == 0 || num > den {
        return Err(bad());
    }
    Ok((num, den))
}

fn read_instance(path: &std::path::Path) -> planar_kernel::Result<PlanarGraph> {
    load_graph(&std::fs::read_to_string(path)?)
}

fn render_solution(sol: &[u32]) -> String {
    let mut out = format!("c size {}\n", sol.len());
    out.push('s');
    for v in sol {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    out
}

fn render_regions(g: &PlanarGraph, rd: &RegionDecomposition) -> planar_kernel::Result<String> {
    let mut out = String::new();
    let _ = write!(out, "c anchors");
    for v in &rd.anchors {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
    let _ = writeln!(out, "c regions {}", rd.regions.len());
    for r in &rd.regions {
        let _ = writeln!(out, "{}", r.render(g)?);
    }
    Ok(out)
}

fn parse_anchors(
    g: &PlanarGraph,
    spec: &str,
    cv: usize,
    ce: usize,
) -> planar_kernel::Result<Vec<u32>> {
    if spec == "auto" {
        let mut s = if ce > 0 {
            baker::approx_ds(g, 1, 1)?.unique_sorted()
        } else {
            baker::approx_vc(g, 1, 1)?.unique_sorted()
        };
        // Cover-based anchor sets miss isolated vertices; the distance
        // property needs them.
        if cv > 0 {
            s.extend(g.vertices().filter(|&v| g.degree(v) == 0));
            s.sort_unstable();
            s.dedup();
        }
        return Ok(s);
    }
    let text = std::fs::read_to_string(spec)?;
    let mut s = Vec::new();
    for tok in text.split_whitespace() {
        let v: u32 = tok
            .parse()
            .map_err(|_| Error::Parameter(format!("bad anchor id `{tok}`")))?;
        if v as usize >= g.n() {
            return Err(Error::Parameter(format!("anchor {v} out of range")));
        }
        s.push(v);
    }
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

fn run(cli: Cli) -> planar_kernel::Result<(String, CommonOpts)> {
    match cli.command {
        Command::ApproxDs {
            instance,
            epsilon,
            common,
        } => {
            let g = read_instance(&instance)?;
            let (num, den) = parse_epsilon(&epsilon)?;
            let mut ledger = SpaceLedger::new(g.n());
            let sol = baker::approx_ds_mode(&g, num, den, true, Some(&mut ledger))?;
            let mut out = render_solution(&sol.unique_sorted());
            if common.ledger {
                out.push_str(&ledger.render());
            }
            Ok((out, common))
        }
        Command::ApproxVc {
            instance,
            epsilon,
            common,
        } => {
            let g = read_instance(&instance)?;
            let (num, den) = parse_epsilon(&epsilon)?;
            let mut ledger = SpaceLedger::new(g.n());
            let sol = baker::approx_vc_mode(&g, num, den, true, Some(&mut ledger))?;
            let mut out = render_solution(&sol.unique_sorted());
            if common.ledger {
                out.push_str(&ledger.render());
            }
            Ok((out, common))
        }
        Command::KernelDsAlber { instance, common } => {
            let g = read_instance(&instance)?;
            let mut ledger = SpaceLedger::new(g.n());
            let kern = alber::alber_kernelize(&g, Some(&mut ledger))?;
            let mut out = kern.serialize();
            if common.ledger {
                out.push_str(&ledger.render());
            }
            Ok((out, common))
        }
        Command::KernelDsRegion {
            instance,
            k,
            common,
        } => {
            let g = read_instance(&instance)?;
            let mut ledger = SpaceLedger::new(g.n());
            let kern = scheme::kernelize_ds_scheme_mode(&g, k, true, Some(&mut ledger))?;
            let mut out = kern.serialize();
            if common.ledger {
                out.push_str(&ledger.render());
            }
            Ok((out, common))
        }
        Command::KernelVcRegion {
            instance,
            k,
            common,
        } => {
            let g = read_instance(&instance)?;
            let mut ledger = SpaceLedger::new(g.n());
            let kern = scheme::kernelize_vc_scheme_mode(&g, k, true, Some(&mut ledger))?;
            let mut out = kern.serialize();
            if common.ledger {
                out.push_str(&ledger.render());
            }
            Ok((out, common))
        }
        Command::Regions {
            instance,
            cv,
            ce,
            anchors,
            common,
        } => {
            let g = read_instance(&instance)?;
            let s = parse_anchors(&g, &anchors, cv, ce)?;
            let c = DistanceConstants { c_v: cv, c_e: ce };
            let mut ledger = SpaceLedger::new(g.n());
            let rd = maximal_region_decomposition(&g, &s, c, Some(&mut ledger))?;
            let mut out = render_regions(&g, &rd)?;
            if common.ledger {
                out.push_str(&ledger.render());
            }
            Ok((out, common))
        }
        Command::SolveBrute {
            instance,
            problem,
            common,
        } => {
            let g = read_instance(&instance)?;
            let res = match problem {
                ProblemArg::Ds => oracle::brute_force_ds(&g)?,
                ProblemArg::Vc => oracle::brute_force_vc(&g)?,
            };
            Ok((render_solution(&res.witness), common))
        }
        Command::Verify {
            orig,
            kernel,
            problem,
            common,
        } => {
            let a = read_instance(&orig)?;
            let b = read_instance(&kernel)?;
            let p = match problem {
                ProblemArg::Ds => oracle::Problem::DominatingSet,
                ProblemArg::Vc => oracle::Problem::VertexCover,
            };
            if oracle::check_kernel_equivalence(&a, &b, p)? {
                Ok(("equivalent\n".into(), common))
            } else {
                Err(Error::Invariant("optima differ".into()))
            }
        }
        Command::Gen {
            family,
            n,
            rows,
            cols,
            seed,
            common,
        } => {
            let need = |v: usize, what: &str| {
                if v == 0 {
                    Err(Error::Parameter(format!("{what} must be positive")))
                } else {
                    Ok(v)
                }
            };
            let g = match family {
                Family::Path => gen::path(need(n, "--n")?),
                Family::Star => gen::star(need(n, "--n")?),
                Family::Grid => gen::grid(need(rows, "--rows")?, need(cols, "--cols")?),
                Family::Triangulation => gen::triangulation(need(n, "--n")?, seed),
            };
            Ok((g.serialize(), common))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, common)) => {
            if let Some(path) = common.output {
                if let Err(e) = std::fs::write(&path, out) {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            } else {
                print!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parameter(_) | Error::Io(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
