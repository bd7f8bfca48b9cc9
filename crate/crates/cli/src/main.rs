//! `crconf`: build, check and realize ⊠(n, k, s) configurations.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 on invalid input or an exhausted search budget.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use crconf::crspace::{build_cr, check_weak_chain_properties, gamma_direct, gamma_formula, predicted_params, CRConfiguration};
use crconf::incidence::{automorphism_group, find_isomorphism, levi_graph, neighborhood, verify_configuration, SearchBudget};
use crconf::realize::{build_frame, canonical_family, enumerate_dependencies, verify_realization_over, Verdict};
use crconf::setcomb::SubsetCode;
use crconf::{with_field, FieldSpec, Scalar};

#[derive(Parser)]
#[command(name = "crconf", version, about = "Generalized Cremona-Richmond configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Triple {
    n: u32,
    k: u32,
    s: u32,
}

impl Triple {
    fn build(self) -> Result<CRConfiguration> {
        Ok(build_cr(self.n, self.k, self.s)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerated (ν r b s) compared with the closed formulas.
    Params(Triple),
    /// Write the configuration as JSON and its Levi graph as DOT.
    Build {
        #[command(flatten)]
        t: Triple,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Run invariant suites; at least one must be selected.
    #[command(group = clap::ArgGroup::new("suite").required(true).multiple(true))]
    Check {
        #[command(flatten)]
        t: Triple,
        /// Definable γ relation against |a ∩ b| = k - 1, over all point pairs.
        #[arg(long, group = "suite")]
        gamma: bool,
        /// The three block-geometry properties of ⊠(4k, k, 4).
        #[arg(long, group = "suite")]
        weak_chain: bool,
        /// Every neighborhood against ⊠(n - k, k, s - 1).
        #[arg(long, group = "suite")]
        neighborhood: bool,
    },
    /// Realize in PG(n-2, F) and print the verdict.
    Embed {
        #[command(flatten)]
        t: Triple,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Exit 1 unless the verdict is this one.
        #[arg(long, value_parser = ["embedding", "not-an-embedding"])]
        expect: Option<String>,
    },
    /// Minimal dependent families among the points p_a, one per pair {a, X \ a}.
    Lines {
        n: u32,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Automorphism group order and generators.
    Aut {
        #[command(flatten)]
        t: Triple,
        /// Refinement calls before giving up.
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Largest Levi graph accepted.
        #[arg(long, default_value_t = 200)]
        max_vertices: usize,
        /// Write generators and order as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn write(path: &PathBuf, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn params(t: Triple) -> Result<bool> {
    let c = t.build()?;
    let got = verify_configuration(&c.structure)?;
    let want = predicted_params(t.n, t.k, t.s)?;
    if got == want {
        println!("{got} OK");
    } else {
        println!("{got} MISMATCH (predicted {want})");
    }
    Ok(got == want)
}

fn build(t: Triple, json: Option<PathBuf>, dot: Option<PathBuf>) -> Result<bool> {
    let c = t.build()?;
    if let Some(path) = json {
        write(&path, &c.structure.to_json())?;
    }
    if let Some(path) = dot {
        write(&path, &levi_graph(&c.structure).to_dot())?;
    }
    println!("⊠{}: {} points, {} blocks", c.params, c.structure.num_points(), c.structure.num_blocks());
    Ok(true)
}

fn check_gamma(c: &CRConfiguration) -> Result<bool> {
    let labels = c.structure.labels().context("configuration has no labels")?;
    let (mut pairs, mut bad) = (0u64, 0u64);
    for (i, &a) in labels.iter().enumerate() {
        for &b in &labels[i + 1..] {
            pairs += 1;
            bad += u64::from(gamma_formula(a, b, c)? != gamma_direct(a, b, c.params.k)?);
        }
    }
    println!("gamma: {} ({pairs} pairs, {bad} discrepancies)", pass(bad == 0));
    Ok(bad == 0)
}

fn check_weak_chain(c: &CRConfiguration) -> Result<bool> {
    let r = check_weak_chain_properties(c)?;
    let rows = [
        ("meeting triangles", r.meeting_triangles, r.meeting_triangle_cases),
        ("two-point meets", r.two_point_meets, r.two_point_cases),
        ("no unique tangent", r.no_unique_tangent, r.tangent_cases),
    ];
    for (name, ok, cases) in rows {
        println!("weak-chain {name}: {} ({cases} cases)", pass(ok));
    }
    let passed = rows.iter().filter(|r| r.1).count();
    println!("weak-chain: {passed}/3 pass");
    Ok(r.all_hold())
}

fn check_neighborhood(c: &CRConfiguration) -> Result<bool> {
    let p = c.params;
    if p.m != 0 || p.s < 3 {
        anyhow::bail!("neighborhood check needs m = 0 and s >= 3, got ⊠{p}");
    }
    let target = build_cr(p.n - p.k, p.k, p.s - 1)?;
    let budget = SearchBudget::default().with_max_vertices(usize::MAX);
    let total = c.structure.num_points();
    let mut found = 0;
    for a in 0..total {
        let nb = neighborhood(&c.structure, a)?;
        found += usize::from(find_isomorphism(&nb, &target.structure, &budget)?.is_some());
    }
    println!("neighborhood: {} ({found}/{total} isomorphic to ⊠{})", pass(found == total), target.params);
    Ok(found == total)
}

fn check(t: Triple, gamma: bool, weak_chain: bool, nbhd: bool) -> Result<bool> {
    let c = t.build()?;
    let mut ok = true;
    if gamma {
        ok &= check_gamma(&c)?;
    }
    if weak_chain {
        ok &= check_weak_chain(&c)?;
    }
    if nbhd {
        ok &= check_neighborhood(&c)?;
    }
    Ok(ok)
}

fn embed(t: Triple, field: FieldSpec, report: Option<PathBuf>, expect: Option<String>) -> Result<bool> {
    let c = t.build()?;
    let r = verify_realization_over(&c, field)?;
    if let Some(path) = report {
        write(&path, &(serde_json::to_string_pretty(&r)? + "\n"))?;
    }
    println!("{}", r.verdict_line());
    Ok(match expect.as_deref() {
        Some("embedding") => r.verdict == Verdict::Embedding,
        Some(_) => r.verdict == Verdict::NotAnEmbedding,
        None => true,
    })
}

fn dependencies<S: Scalar>(n: u32, max_size: usize) -> crconf::Result<Vec<Vec<SubsetCode>>> {
    let frame = build_frame::<S>(n)?;
    enumerate_dependencies(&frame, &canonical_family(n)?, max_size)
}

fn lines(n: u32, field: FieldSpec, max_size: usize) -> Result<bool> {
    let deps = with_field!(field, S => dependencies::<S>(n, max_size))?;
    // Families grouped by size and by the multiset of label sizes.
    let mut shapes: BTreeMap<usize, BTreeMap<String, usize>> = BTreeMap::new();
    for d in &deps {
        let names: Vec<String> = d.iter().map(ToString::to_string).collect();
        println!("{}", names.join(" "));
        let mut cards: Vec<u32> = d.iter().map(|a| a.card()).collect();
        cards.sort_unstable();
        let shape = cards.iter().map(ToString::to_string).collect::<Vec<_>>().join("+");
        *shapes.entry(d.len()).or_default().entry(shape).or_default() += 1;
    }
    for (size, by_shape) in &shapes {
        let total: usize = by_shape.values().sum();
        let parts: Vec<String> = by_shape.iter().map(|(s, c)| format!("{s}: {c}")).collect();
        println!("size {size}: {total} ({})", parts.join(", "));
    }
    println!("{} dependencies over {field}", deps.len());
    Ok(true)
}

fn aut(t: Triple, budget: u64, max_vertices: usize, json: Option<PathBuf>) -> Result<bool> {
    let c = t.build()?;
    let budget = SearchBudget { max_vertices, max_nodes: budget };
    let g = automorphism_group(&c.structure, &budget)?;
    if let Some(path) = json {
        write(&path, &(serde_json::to_string_pretty(&g)? + "\n"))?;
    }
    println!("order {}", g.order);
    println!("generators {}", g.generators.len());
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Params(t) => params(t),
        Command::Build { t, json, dot } => build(t, json, dot),
        Command::Check { t, gamma, weak_chain, neighborhood } => check(t, gamma, weak_chain, neighborhood),
        Command::Embed { t, field, report, expect } => embed(t, field, report, expect),
        Command::Lines { n, field, max_size } => lines(n, field, max_size),
        Command::Aut { t, budget, max_vertices, json } => aut(t, budget, max_vertices, json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
