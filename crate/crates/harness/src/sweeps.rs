//! Theorem sweeps: generate instances, measure the bounded quantity, attach
//! the bound, and estimate implied constants.

use std::sync::Arc;

use ffgeom::geometry::{PairSet, PointSet, Space};
use ffgeom::incidence::{self, ExceptionalSetReport};
use ffgeom::motions::{MotionSet, OrthGroup};
use ffgeom::projections;
use ffgeom::spectral::{self, NormClassSums, PairNormSums, Spectrum, ZeroTerms};
use ffgeom::theorems::{Evaluation, Instance, Quantity, Theorem, Tier};
use ffgeom::{Error, FieldContext, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{check_cell, instance_seed, Cell, Policy, SweepConfig};
use crate::families::{self, SetPair};
use crate::report::{ConstantSummary, Report, Row, Violation, SCHEMA};

/// Slack allowed on asserted bounds for floating-point round-off.
const EXACT_SLACK: f64 = 1e-9;

struct CellContext {
    cell: Cell,
    field: Arc<FieldContext>,
    space: Arc<Space>,
    group: Arc<OrthGroup>,
}

impl CellContext {
    fn new(cell: Cell) -> Result<CellContext> {
        check_cell(cell)?;
        let field = Arc::new(FieldContext::new(cell.0, cell.1)?);
        let space = Space::new(field.clone(), cell.2)?;
        let group = Arc::new(crate::groups::orthogonal_group(&space)?);
        Ok(CellContext { cell, field, space, group })
    }

    fn instance(&self) -> Instance {
        Instance::new(&self.field, self.cell.2)
    }
}

struct Sizes {
    a: usize,
    b: usize,
    p: usize,
    r: usize,
}

fn make_row(theorem: Theorem, ctx: &CellContext, sizes: Sizes, observed: f64, eval: &Evaluation, family: &str) -> Row {
    Row {
        schema: SCHEMA,
        theorem_id: theorem.id().into(),
        p: ctx.cell.0,
        ell: ctx.cell.1,
        q: ctx.field.q(),
        d: ctx.cell.2,
        size_a: sizes.a,
        size_b: sizes.b,
        size_p: sizes.p,
        size_r: sizes.r,
        observed,
        bound: eval.bound,
        constant: eval.constant(observed),
        flags: eval.flags.iter().map(|f| f.as_str().to_string()).collect(),
        case: eval.case.into(),
        family: family.into(),
        instance: 0,
    }
}

fn exceptional_row(theorem: Theorem, ctx: &CellContext, rep: &ExceptionalSetReport, sizes: Sizes, family: &str) -> Row {
    make_row(theorem, ctx, sizes, rep.size() as f64, &rep.evaluation, family)
}

/// The motions `{(g, z) : z in A - gB}`, which carry every pair of `A x B`.
fn difference_motions(a: &PointSet, b: &PointSet, group: &Arc<OrthGroup>) -> Result<MotionSet> {
    let diffs: Vec<PointSet> =
        group.elements().iter().map(|g| incidence::difference_set(a, b, g)).collect::<Result<_>>()?;
    MotionSet::filter(group, |g, z| diffs[g].contains(z))
}

fn random_motions(group: &Arc<OrthGroup>, keep: f64, seed: u64) -> Result<MotionSet> {
    MotionSet::filter(group, |g, z| ChaCha8Rng::seed_from_u64(seed ^ ((g as u64) << 32 | z as u64)).gen_bool(keep))
}

fn spectral_sum_rows(theorem: Theorem, ctx: &CellContext, pair: &SetPair) -> Result<Vec<Row>> {
    let ta = NormClassSums::new(&Spectrum::of_set(&pair.a)?);
    let tb = NormClassSums::new(&Spectrum::of_set(&pair.b)?);
    let observed = match theorem {
        Theorem::SpectralPlane => spectral::spectral_sum_equal_norms(&ta, &tb, ZeroTerms::ExcludeZeroPair),
        Theorem::SpectralPrimePlane => {
            (ctx.field.p() as f64).powi(6) * spectral::spectral_sum_equal_norms(&ta, &tb, ZeroTerms::All)
        }
        Theorem::SphereEnergy => {
            let (m_star, m_all) = spectral::restriction_maxima(&ta);
            if ctx.cell.2 % 2 == 1 && ctx.cell.2 >= 3 { m_all } else { m_star }
        }
        Theorem::ZeroSphereEnergy => ta.total[0],
        _ => spectral::spectral_sum_equal_norms(&ta, &tb, ZeroTerms::All),
    };
    let inst = ctx.instance().sets(pair.a.len(), pair.b.len());
    let eval = theorem.evaluate(&inst);
    let sizes = Sizes { a: pair.a.len(), b: pair.b.len(), p: pair.a.len() * pair.b.len(), r: 0 };
    Ok(vec![make_row(theorem, ctx, sizes, observed, &eval, &pair.family)])
}

fn pair_set_rows(theorem: Theorem, ctx: &CellContext, pr: &PairSet, factors: Option<&SetPair>, family: &str) -> Result<Vec<Row>> {
    let half = &ctx.space;
    let mut inst = ctx.instance();
    if let Some(f) = factors {
        inst = inst.sets(f.a.len(), f.b.len());
    }
    inst = inst.pairs(pr.len());
    let sizes = || Sizes { a: factors.map_or(0, |f| f.a.len()), b: factors.map_or(0, |f| f.b.len()), p: pr.len(), r: 0 };
    let q = ctx.field.q() as f64;
    let row = match theorem {
        Theorem::Quadruple => {
            let n = match factors {
                Some(f) => incidence::count_n_product(&f.a, &f.b)?,
                None => incidence::count_n(pr)?,
            } as f64;
            let sp = pr.len() as f64;
            make_row(theorem, ctx, sizes(), (n - sp * sp / q).abs(), &theorem.evaluate(&inst), family)
        }
        Theorem::SpectralGeneral => {
            let sums = PairNormSums::new(&Spectrum::of_pairs(pr)?, half)?;
            let d = half.dim() as i32;
            let observed = q.powi(3 * d - 1) * (q - 1.0) * sums.equal(false);
            make_row(theorem, ctx, sizes(), observed, &theorem.evaluate(&inst), family)
        }
        Theorem::Image => {
            let rep = incidence::image_exceptional_set(pr, &ctx.group)?.against(theorem, &inst);
            exceptional_row(theorem, ctx, &rep, sizes(), family)
        }
        _ => return Err(Error::Domain(format!("{theorem} does not take a pair set"))),
    };
    Ok(vec![row])
}

fn set_pair_rows(theorem: Theorem, ctx: &CellContext, pair: &SetPair, cfg: &SweepConfig, seed: u64) -> Result<Vec<Row>> {
    let (a, b) = (&pair.a, &pair.b);
    let sizes = |r| Sizes { a: a.len(), b: b.len(), p: a.len() * b.len(), r };
    let inst = ctx.instance().sets(a.len(), b.len());
    match theorem.quantity() {
        Quantity::SpectralSum | Quantity::SphereEnergy => spectral_sum_rows(theorem, ctx, pair),
        Quantity::QuadrupleDeviation if theorem == Theorem::Isosceles => {
            let n = incidence::count_n_product(a, a)? as f64;
            let inst = ctx.instance().sets(a.len(), a.len());
            let s = Sizes { a: a.len(), b: a.len(), p: a.len() * a.len(), r: 0 };
            Ok(vec![make_row(theorem, ctx, s, n, &theorem.evaluate(&inst), &pair.family)])
        }
        Quantity::QuadrupleDeviation => pair_set_rows(theorem, ctx, &PairSet::product(a, b)?, Some(pair), &pair.family),
        Quantity::ExceptionalCount => match theorem {
            Theorem::Image => pair_set_rows(theorem, ctx, &PairSet::product(a, b)?, Some(pair), &pair.family),
            Theorem::Growth
            | Theorem::GrowthRestricted
            | Theorem::GrowthPlane
            | Theorem::GrowthPrimeSmall
            | Theorem::GrowthPrimeMedium
            | Theorem::GrowthPrimeLarge => {
                let pair = pair.clone().ordered();
                let rep = incidence::growth_experiment(&pair.a, &pair.b, &ctx.group, cfg.eps)?;
                let inst = ctx.instance().sets(pair.a.len(), pair.b.len()).eps(cfg.eps);
                let rep = rep.against(theorem, &inst);
                let s = Sizes { a: pair.a.len(), b: pair.b.len(), p: pair.a.len() * pair.b.len(), r: 0 };
                Ok(vec![exceptional_row(theorem, ctx, &rep, s, &pair.family)])
            }
            _ => {
                let rep = incidence::intersection_exceptional_set(a, b, &ctx.group)?.against(theorem, &inst);
                Ok(vec![exceptional_row(theorem, ctx, &rep, sizes(0), &pair.family)])
            }
        },
        Quantity::IncidenceDeviation | Quantity::IncidenceCount => {
            let pr = PairSet::product(a, b)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let keep = rng.gen_range(0.05..0.5);
            let motion_sets = [
                ("random-R", random_motions(&ctx.group, keep, rng.gen())?),
                ("difference-R", difference_motions(a, b, &ctx.group)?),
            ];
            let mut rows = Vec::new();
            for (tag, r) in motion_sets {
                let res = incidence::count_incidences(&pr, &r)?;
                let observed = if theorem.quantity() == Quantity::IncidenceCount {
                    res.count as f64
                } else {
                    res.error_observed.to_f64().abs()
                };
                let eval = theorem.evaluate(&inst.clone().motions(r.len()));
                rows.push(make_row(theorem, ctx, sizes(r.len()), observed, &eval, &format!("{}/{tag}", pair.family)));
            }
            Ok(rows)
        }
        Quantity::ProjectionCount => projection_rows(theorem, ctx, a, &pair.family, cfg.m),
    }
}

fn projection_rows(theorem: Theorem, ctx: &CellContext, e: &PointSet, family: &str, m: usize) -> Result<Vec<Row>> {
    let d = ctx.cell.2;
    if m == 0 || m > d {
        return Err(Error::Domain(format!("projection dimension {m} outside 1..={d}")));
    }
    let grass = projections::enumerate_grassmannian(&ctx.field, d, m)?;
    let sizes = projections::projection_sizes(e, &grass)?;
    let s = |n: usize| Sizes { a: e.len(), b: 0, p: n, r: grass.len() };
    let mut rows = Vec::new();
    match theorem {
        Theorem::ProjectionCount => {
            for c in projections::projection_count_check(&ctx.field, d, m, e.len(), &sizes) {
                let inst = ctx.instance().projection(m, c.threshold as usize, e.len());
                let eval = theorem.evaluate(&inst);
                rows.push(make_row(theorem, ctx, s(c.threshold as usize), c.observed as f64, &eval, family));
            }
        }
        _ => {
            for delta in [0.25, 0.5, 0.75] {
                let c = projections::projection_density_check(&ctx.field, d, m, e.len(), &sizes, delta);
                let mut inst = ctx.instance().projection(m, 0, e.len());
                inst.n = delta;
                let eval = theorem.evaluate(&inst);
                rows.push(make_row(theorem, ctx, s(0), c.observed as f64, &eval, &format!("{family}/delta={delta}")));
            }
        }
    }
    Ok(rows)
}

fn pairs_for(cfg: &SweepConfig, ctx: &CellContext) -> Result<Vec<SetPair>> {
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(cfg.seed, cfg.theorem.id(), ctx.cell, usize::MAX));
    let mut out = Vec::new();
    match &cfg.policy {
        Policy::Random => out.extend(families::random_pairs(&ctx.space, cfg.trials, &mut rng)),
        Policy::Structured => out.extend(families::structured_pairs(&ctx.space)),
        Policy::Mixed => {
            out.extend(families::random_pairs(&ctx.space, cfg.trials, &mut rng));
            out.extend(families::structured_pairs(&ctx.space));
        }
        Policy::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
            let a = PointSet::parse_text(&text, &ctx.field)?;
            if a.space() != &ctx.space {
                return Err(Error::Shape(format!("{} is not a subset of the sweep space", path.display())));
            }
            out.push(SetPair { family: "file".into(), a: a.clone(), b: a });
        }
    }
    Ok(out)
}

fn takes_general_pairs(t: Theorem) -> bool {
    matches!(t, Theorem::Quadruple | Theorem::SpectralGeneral | Theorem::Image)
}

fn cell_rows(cfg: &SweepConfig, ctx: &CellContext) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for (i, pair) in pairs_for(cfg, ctx)?.iter().enumerate() {
        let seed = instance_seed(cfg.seed, cfg.theorem.id(), ctx.cell, i);
        rows.extend(set_pair_rows(cfg.theorem, ctx, pair, cfg, seed)?);
    }
    if takes_general_pairs(cfg.theorem) && matches!(cfg.policy, Policy::Random | Policy::Mixed) {
        let grid = families::density_grid(&*Space::new(ctx.field.clone(), 2 * ctx.cell.2)?, cfg.trials);
        for (t, density) in grid.into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(cfg.seed, "pairs", ctx.cell, t));
            let pr = PairSet::random(&ctx.space, density.min(0.5), &mut rng)?;
            rows.extend(pair_set_rows(cfg.theorem, ctx, &pr, None, &format!("random-pairs-{t}"))?);
        }
    }
    for (i, r) in rows.iter_mut().enumerate() {
        r.instance = i;
    }
    Ok(rows)
}

/// Bounds with an explicit constant that a row violates.
fn violations(theorem: Theorem, rows: &[Row]) -> Vec<Violation> {
    if theorem.tier() != Tier::Exact {
        return Vec::new();
    }
    rows.iter()
        .filter(|r| r.is_clean())
        .filter(|r| {
            let b = r.bound.unwrap_or(f64::INFINITY);
            r.observed > b * (1.0 + EXACT_SLACK) + 1e-15
        })
        .map(|r| Violation {
            theorem_id: r.theorem_id.clone(),
            q: r.q,
            d: r.d,
            instance: r.instance,
            detail: format!("observed {} > bound {:?} ({})", r.observed, r.bound, r.family),
        })
        .collect()
}

/// Rows for every cell, the violated asserted bounds, and the constant
/// summary when the theorem has an implied constant.
pub fn run_theorem_sweep(cfg: &SweepConfig) -> Result<Report> {
    cfg.validate()?;
    let mut report = Report::new();
    for &cell in &cfg.grid {
        let ctx = CellContext::new(cell)?;
        report.rows.extend(cell_rows(cfg, &ctx)?);
    }
    report.violations = violations(cfg.theorem, &report.rows);
    if let Ok(s) = estimate_constant(cfg.theorem, &report.rows) {
        report.summary.push(s);
    }
    report.sort();
    Ok(report)
}

/// Why a constant was not estimated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotApplicable {
    /// The bound carries its own constant, which is asserted instead.
    ExplicitConstant,
    /// No clean rows for the theorem.
    NoData,
}

impl std::fmt::Display for NotApplicable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotApplicable::ExplicitConstant => f.write_str("bound has an explicit constant; it is asserted, not estimated"),
            NotApplicable::NoData => f.write_str("no unflagged rows with a bound"),
        }
    }
}

fn max_of(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0, f64::max)
}

/// Max and median of `observed / bound` over the clean rows of `theorem`,
/// the maximum per `q`, and whether it grows with `q`.
pub fn estimate_constant(theorem: Theorem, rows: &[Row]) -> std::result::Result<ConstantSummary, NotApplicable> {
    if theorem.tier() == Tier::Exact {
        return Err(NotApplicable::ExplicitConstant);
    }
    let clean: Vec<&Row> = rows.iter().filter(|r| r.theorem_id == theorem.id() && r.is_clean()).collect();
    let mut consts: Vec<f64> = clean.iter().filter_map(|r| r.constant).collect();
    if consts.is_empty() {
        return Err(NotApplicable::NoData);
    }
    consts.sort_by(f64::total_cmp);
    let mut qs: Vec<u32> = clean.iter().map(|r| r.q).collect();
    qs.sort_unstable();
    qs.dedup();
    let per_q: Vec<(u32, f64)> = qs
        .iter()
        .map(|&q| (q, max_of(clean.iter().filter(|r| r.q == q).filter_map(|r| r.constant))))
        .collect();
    let first = per_q[0].1;
    let last = per_q[per_q.len() - 1].1;
    let stability_ratio = match per_q.len() {
        0 | 1 => 1.0,
        n => {
            let (x, y) = (per_q[n - 2].1, per_q[n - 1].1);
            if x == 0.0 && y == 0.0 {
                1.0
            } else if x == 0.0 || y == 0.0 {
                f64::INFINITY
            } else {
                x.max(y) / x.min(y)
            }
        }
    };
    Ok(ConstantSummary {
        theorem_id: theorem.id().into(),
        rows: consts.len(),
        max_constant: consts[consts.len() - 1],
        median_constant: consts[consts.len() / 2],
        grows_with_q: last > 2.0 * first,
        stability_ratio,
        per_q,
    })
}
