use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use ffgeom::constructions::{self, ConstructionSpec};
use ffgeom::geometry::{PointSet, Space};
use ffgeom::incidence;
use ffgeom::projections;
use ffgeom::theorems::Theorem;
use ffgeom::FieldContext;
use ffgeom_harness::config::{parse_grid, Cell, Fault, IdentityConfig, Policy, SweepConfig};
use ffgeom_harness::groups;
use ffgeom_harness::{run_identity_suite, run_theorem_sweep, Report, EXIT_IDENTITY_FAILURE, EXIT_OK, EXIT_USAGE};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "ffgeom", version, about = "Finite-field incidence geometry: identity checks, theorem sweeps, constructions, projections")]
struct Cli {
    /// Directory for cached orthogonal groups.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact-identity suite.
    Verify {
        /// Cells as p:ell:d, comma separated; empty for none.
        #[arg(long, default_value = "3:1:2,5:1:2,7:1:2,3:1:3")]
        grid: String,
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Deliberately corrupt one closed form (negative control).
        #[arg(long)]
        inject_fault: Option<Fault>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Measure one theorem over a grid and estimate its constant.
    Sweep {
        #[arg(long)]
        theorem: Theorem,
        /// Primes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        d: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// random | structured | mixed | file:<path>
        #[arg(long, default_value = "mixed")]
        policy: Policy,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Projection dimension for the projection theorems.
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build a construction, re-verify its claim, and write its sets.
    Construct {
        /// subspace_example | ap_lattice | isotropic_lattice | small_A_large_B | projection_sharpness
        #[arg(long)]
        kind: String,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// |X| for the progression constructions.
        #[arg(long)]
        x_len: Option<usize>,
        /// Number of cosets of F_p for projection_sharpness.
        #[arg(long)]
        cosets: Option<usize>,
        /// Group element for subspace_example.
        #[arg(long, default_value_t = 0)]
        g_index: usize,
        /// Directory for A.txt and B.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Projection-intersection sweep over G(d, m) with the counting bound asserted.
    Project {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Point-set files for A and B; random sets otherwise.
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
        /// Per-subspace CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("FFGEOM_THREADS") {
        let n: usize = v.parse().map_err(|_| UsageError(format!("FFGEOM_THREADS={v} is not a number")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &Report, format: Format, out: Option<&Path>) -> anyhow::Result<()> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    emit(&text, out)
}

fn status(ok: bool) -> i32 {
    if ok { EXIT_OK } else { EXIT_IDENTITY_FAILURE }
}

fn space(p: u32, ell: u32, d: usize) -> anyhow::Result<Arc<Space>> {
    Ok(Space::new(Arc::new(FieldContext::new(p, ell)?), d)?)
}

#[allow(clippy::too_many_arguments)]
fn construct(kind: &str, p: u32, ell: u32, d: usize, x_len: Option<usize>, cosets: Option<usize>, g_index: usize, out: Option<&Path>) -> anyhow::Result<i32> {
    let spec = ConstructionSpec::parse(kind, x_len.or(cosets), g_index)?;
    let s = space(p, ell, d)?;
    let (a, b, ok, summary) = match &spec {
        ConstructionSpec::ProjectionSharpness { cosets } => {
            let c = constructions::build_projection_sharpness(&s, *cosets)?;
            let bad = c.violations()?;
            let summary = format!(
                "|A|={} |B|={} |A||B|={} c={:.4} |L|={} (1-c)q={:.2} violations={}",
                c.a.len(),
                c.b.len(),
                c.a.len() * c.b.len(),
                c.c(),
                c.lines.len(),
                (1.0 - c.c()) * s.q() as f64,
                bad.len()
            );
            let ok = bad.is_empty() && c.lines.len() as f64 >= (1.0 - c.c()) * s.q() as f64;
            (c.a, c.b, ok, summary)
        }
        ConstructionSpec::IsotropicLattice => {
            let v = constructions::lattice_vectors(&s)?;
            let all: Vec<_> = s.field().elements().collect();
            let (a, b) = constructions::build_ap_lattice_sets(&s, &all[..1], &v)?;
            let summary = format!("vectors={v:?} |A|={}", a.len());
            (a, b, true, summary)
        }
        ConstructionSpec::ApLattice { x_len } => {
            let v = constructions::lattice_vectors(&s)?;
            let x = constructions::arithmetic_progression(s.field(), *x_len)?;
            let (a, b) = constructions::build_ap_lattice_sets(&s, &x, &v)?;
            let n = incidence::count_n_product(&a, &a)?;
            let floor = (*x_len as f64).powi(3) * (s.q() as f64).powi(2 * d as i32 - 2) / 2.0;
            let summary = format!("|A|={} N(AxA)={n} |X|^3 q^(2d-2)/2={floor}", a.len());
            (a, b, n as f64 >= floor, summary)
        }
        ConstructionSpec::SmallLarge { x_len } => {
            let v = constructions::lattice_vectors(&s)?;
            let x = constructions::arithmetic_progression(s.field(), *x_len)?;
            let (a, b) = constructions::build_small_large_sets(&s, &x, &v)?;
            let g = groups::orthogonal_group(&s)?;
            let worst = incidence::difference_set_sizes(&a, &b, &g)?.into_iter().max().unwrap_or(0);
            let cap = x_len.pow(d as u32);
            let summary = format!("|A|={} |B|={} max_g |A-gB|={worst} |X|^d={cap}", a.len(), b.len());
            (a, b, worst <= cap, summary)
        }
        ConstructionSpec::SubspaceExample { x_len, g_index } => {
            let g = groups::orthogonal_group(&s)?;
            if *g_index >= g.len() {
                bail!("group element {g_index} out of range (|O| = {})", g.len());
            }
            let x = constructions::arithmetic_progression(s.field(), *x_len)?;
            let (a, b) = constructions::build_example2(&s, g.get(*g_index), &x)?;
            let size = incidence::difference_set(&a, &b, g.get(*g_index))?.len();
            let cap = 2.0 * (*x_len as f64 / s.q() as f64) * s.size() as f64;
            let summary = format!("|A|={} |B|={} |A-g0 B|={size} 2cq^d={cap}", a.len(), b.len());
            (a, b, size as f64 <= cap, summary)
        }
    };
    println!("{} q={} d={d}: {summary} {}", spec.kind(), s.q(), if ok { "ok" } else { "FAILED" });
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("A.txt"), a.to_text())?;
        std::fs::write(dir.join("B.txt"), b.to_text())?;
    }
    Ok(status(ok))
}

fn read_set(path: &Path, s: &Arc<Space>) -> anyhow::Result<PointSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let e = PointSet::parse_text(&text, s.field())?;
    if e.space() != s {
        bail!("{} does not live in F_{}^{}", path.display(), s.q(), s.dim());
    }
    Ok(e)
}

#[allow(clippy::too_many_arguments)]
fn project(m: usize, p: u32, ell: u32, d: usize, density: f64, seed: u64, fa: Option<&Path>, fb: Option<&Path>, out: Option<&Path>) -> anyhow::Result<i32> {
    let s = space(p, ell, d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = match fa {
        Some(f) => read_set(f, &s)?,
        None => PointSet::random(&s, density, &mut rng),
    };
    let b = match fb {
        Some(f) => read_set(f, &s)?,
        None => PointSet::random(&s, density, &mut rng),
    };
    let sweep = projections::projection_intersection_sweep(&a, &b, m)?;
    let mut ok = true;
    for (name, e, sizes) in [
        ("A", &a, sweep.rows.iter().map(|r| r.size_a).collect::<Vec<_>>()),
        ("B", &b, sweep.rows.iter().map(|r| r.size_b).collect::<Vec<_>>()),
    ] {
        let checks = projections::projection_count_check(s.field(), d, m, e.len(), &sizes);
        let failed: Vec<_> = checks.iter().filter(|c| !c.holds()).collect();
        ok &= failed.is_empty();
        eprintln!("{name}: |E|={} thresholds checked={} violations={}", e.len(), checks.len(), failed.len());
    }
    eprintln!(
        "|G({d},{m})|={} over_half={} full={} both_large={} common>=|B|/10: {} disjoint={} small-projection budget={:.2}",
        sweep.grassmannian_size(),
        sweep.over_half(),
        sweep.full(),
        sweep.both_large(),
        sweep.common_tenth_of_b(),
        sweep.disjoint(),
        sweep.small_projection_budget(s.q(), d)
    );
    emit(&sweep.to_csv(), out)?;
    Ok(status(ok))
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    configure_threads()?;
    if let Some(dir) = cli.cache_dir {
        groups::set_cache_dir(dir);
    }
    match cli.command {
        Command::Verify { grid, trials, seed, inject_fault, out, format } => {
            let grid = parse_grid(&grid).map_err(UsageError)?;
            let cfg = IdentityConfig { grid, trials, seed, fault: inject_fault };
            let report = run_identity_suite(&cfg)?;
            for c in report.identities.iter().filter(|c| !c.passed) {
                eprintln!("FAILED {} at p={} ell={} d={}: error {:e} > {:e}", c.name, c.p, c.ell, c.d, c.max_error, c.tolerance);
                if let Some(r) = &c.repro {
                    eprintln!("{r}");
                }
            }
            emit_report(&report, format, out.as_deref())?;
            Ok(status(report.passed()))
        }
        Command::Sweep { theorem, p, ell, d, trials, seed, policy, eps, m, out, format } => {
            let grid: Vec<Cell> = p.iter().flat_map(|&p| d.iter().map(move |&d| (p, ell, d))).collect();
            let cfg = SweepConfig { theorem, grid, policy, trials, seed, eps, m };
            let report = run_theorem_sweep(&cfg)?;
            for v in &report.violations {
                eprintln!("VIOLATION {} q={} d={} #{}: {}", v.theorem_id, v.q, v.d, v.instance, v.detail);
            }
            emit_report(&report, format, out.as_deref())?;
            Ok(status(report.passed()))
        }
        Command::Construct { kind, p, ell, d, x_len, cosets, g_index, out } => {
            construct(&kind, p, ell, d, x_len, cosets, g_index, out.as_deref())
        }
        Command::Project { m, p, ell, d, density, seed, a, b, out } => {
            project(m, p, ell, d, density, seed, a.as_deref(), b.as_deref(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage = e.is::<UsageError>()
                || matches!(
                    e.downcast_ref::<ffgeom::Error>(),
                    Some(ffgeom::Error::Domain(_) | ffgeom::Error::InvalidField(_) | ffgeom::Error::Shape(_) | ffgeom::Error::Parse { .. })
                );
            ExitCode::from(if usage { EXIT_USAGE as u8 } else { 1 })
        }
    }
}
