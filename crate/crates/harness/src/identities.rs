//! The exact-identity suite: every closed form and counting identity is
//! recomputed by an independent route on random instances.

use std::collections::BTreeMap;
use std::sync::Arc;

use ffgeom::geometry::{PairSet, PointSet, Space};
use ffgeom::incidence;
use ffgeom::motions::MotionSet;
use ffgeom::projections;
use ffgeom::spectral::{self, Spectrum};
use ffgeom::{FieldContext, Fq, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{check_cell, instance_seed, Cell, Fault, IdentityConfig};
use crate::report::{IdentityCheck, Report};

/// Largest `|P| |R|` checked against the motion-by-motion loop.
pub const NAIVE_INCIDENCE_LIMIT: usize = 10_000_000;
/// Largest `|P|^2` for the pair-loop count of `N(P)`.
pub const NAIVE_QUADRUPLE_LIMIT: usize = 10_000_000;

struct Tally {
    cell: Cell,
    checks: BTreeMap<&'static str, IdentityCheck>,
}

impl Tally {
    fn new(cell: Cell) -> Tally {
        Tally { cell, checks: BTreeMap::new() }
    }

    fn record(&mut self, name: &'static str, error: f64, tol: f64, repro: impl FnOnce() -> String) {
        let (p, ell, d) = self.cell;
        let c = self.checks.entry(name).or_insert_with(|| IdentityCheck {
            name: name.into(),
            p,
            ell,
            d,
            instances: 0,
            max_error: 0.0,
            tolerance: tol,
            passed: true,
            repro: None,
        });
        c.instances += 1;
        let failed = !(error <= tol);
        if failed || error > c.max_error {
            c.max_error = if error.is_nan() { f64::INFINITY } else { error.max(c.max_error) };
        }
        if failed && c.passed {
            c.passed = false;
            c.repro = Some(repro());
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn sets_repro(a: &PointSet, b: &PointSet) -> String {
    format!("A:\n{}B:\n{}", a.to_text(), b.to_text())
}

/// The sphere transform as the suite evaluates it; the fault flips the sign
/// of the Gauss-sum correction.
fn sphere_closed(space: &Space, j: Fq, m: usize, fault: Option<Fault>) -> Complex64 {
    let (main, corr) = spectral::sphere_fourier_parts(space, j, m);
    match fault {
        Some(Fault::SphereSign) => main - corr,
        None => main + corr,
    }
}

/// `I(P, R)` by testing `x = g y + z` for every pair and motion.
pub fn naive_incidences(p: &PairSet, r: &MotionSet) -> u64 {
    let half = p.half();
    let pairs: Vec<(usize, usize)> = p.iter().collect();
    r.iter()
        .map(|(g, z)| {
            let m = r.group().get(g);
            pairs.iter().filter(|&&(x, y)| half.add(m.apply_index(half, y), z) == x).count() as u64
        })
        .sum()
}

fn check_cell_identities(cell: Cell, cfg: &IdentityConfig) -> Result<Vec<IdentityCheck>> {
    check_cell(cell)?;
    let (p, ell, d) = cell;
    let field = Arc::new(FieldContext::new(p, ell)?);
    let space = Space::new(field.clone(), d)?;
    let group = Arc::new(crate::groups::orthogonal_group(&space)?);
    let mut t = Tally::new(cell);
    let qd = space.size();
    let q = space.q();

    let g = field.gauss_sum(Fq::ONE)?;
    t.record("gauss-sum", (g - field.gauss_sum_closed_form()).norm(), 1e-9, || format!("p={p} ell={ell}"));

    let spheres = spectral::sphere_spectra(&space)?;
    for (j, spec) in field.elements().zip(&spheres) {
        let err = (0..qd).map(|m| (sphere_closed(&space, j, m, cfg.fault) - spec.at(m)).norm()).fold(0.0, f64::max);
        t.record("sphere-spectrum", err, 1e-8, || format!("j={j}"));
    }
    let mut srng = ChaCha8Rng::seed_from_u64(instance_seed(cfg.seed, "sphere-pair", cell, 0));
    for _ in 0..cfg.trials.max(1) * 8 {
        let (m, mp) = (srng.gen_range(0..qd), srng.gen_range(0..qd));
        let err = (spectral::sphere_pair_sum_dft(&spheres, m, mp) - spectral::sphere_pair_sum_closed(&space, m, mp)).norm();
        t.record("sphere-pair-sum", err, 1e-8, || format!("m={m} m'={mp}"));
    }

    if qd * qd <= crate::config::MAX_POINTS * 4 {
        let variety = spectral::norm_variety(&space)?;
        let spec = Spectrum::of_pairs(&variety)?;
        let err = (0..qd * qd)
            .map(|idx| (spec.at(idx) - spectral::variety_fourier(&space, idx % qd, idx / qd)).norm())
            .fold(0.0, f64::max);
        t.record("variety-spectrum", err, 1e-10, || format!("q={q} d={d}"));
    }

    for w in 0..=d {
        if projections::gaussian_binomial(q as u128, d, w) > 5_000 {
            continue;
        }
        for sub in projections::enumerate_grassmannian(&field, d, w)? {
            let perp = projections::orthogonal_complement(&field, &sub);
            let err = (sub.dim() + perp.dim()).abs_diff(d) as f64;
            t.record("complement-dimension", err, 0.0, || sub.to_string());
        }
    }

    for inst in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(cfg.seed, "identity", cell, inst));
        let a = PointSet::random(&space, rng.gen_range(0.05..0.9), &mut rng);
        let b = PointSet::random(&space, rng.gen_range(0.05..0.9), &mut rng);

        let spec_a = Spectrum::of_set(&a)?;
        t.record("plancherel", (spec_a.energy() - a.len() as f64 / qd as f64).abs(), 1e-9, || a.to_text());

        let s = field.elem(rng.gen_range(1..field.q()))?;
        let beta: Vec<Fq> = (0..d).map(|_| field.elem(rng.gen_range(0..field.q())).unwrap()).collect();
        let err = (spectral::complete_square_direct(&field, s, &beta) - spectral::complete_square_closed(&field, s, &beta)?).norm();
        t.record("complete-square", err, 1e-8, || format!("s={s} beta={beta:?}"));

        let gi = rng.gen_range(0..group.len());
        let h = incidence::intersection_histogram(&a, &b, group.get(gi))?;
        let err = h.total().abs_diff((a.len() * b.len()) as u64) as f64;
        t.record("histogram-sum", err, 0.0, || format!("g={}\n{}", gi, sets_repro(&a, &b)));

        let pr = PairSet::product(&a, &b)?;
        let ids = incidence::verify_n_identities(&pr, Some((&a, &b)))?;
        let n = ids.n as f64;
        t.record("n-product", rel(ids.product.unwrap_or(f64::NAN), n), 1e-6, || sets_repro(&a, &b));
        t.record("n-general", rel(ids.general, n), 1e-6, || sets_repro(&a, &b));
        t.record("n-variety", rel(ids.variety, n), 1e-6, || sets_repro(&a, &b));
        if pr.len() * pr.len() <= NAIVE_QUADRUPLE_LIMIT {
            let loop_n = incidence::count_n(&pr)? as f64;
            t.record("n-quadruple-loop", (loop_n - n).abs(), 0.0, || sets_repro(&a, &b));
        }

        let gp = PairSet::random(&space, rng.gen_range(0.02..0.5), &mut rng)?;
        let ids = incidence::verify_n_identities(&gp, None)?;
        t.record("n-general-pairs", rel(ids.general, ids.n as f64), 1e-6, || gp.as_point_set().to_text());
        t.record("n-variety-pairs", rel(ids.variety, ids.n as f64), 1e-6, || gp.as_point_set().to_text());

        let keep = rng.gen_range(0.02..0.3);
        let rseed: u64 = rng.gen();
        let r = MotionSet::filter(&group, |g, z| {
            ChaCha8Rng::seed_from_u64(rseed ^ ((g as u64) << 32 | z as u64)).gen_bool(keep)
        })?;
        let count = incidence::count_incidences(&gp, &r)?;
        let exp = incidence::incidence_fourier_expansion(&gp, &r)?;
        let c = count.count as f64;
        let err = rel(exp.total().re, c).max(exp.total().im.abs() / c.max(1.0));
        t.record("incidence-expansion", err, 1e-6, || gp.as_point_set().to_text());
        if gp.len() * r.len() <= NAIVE_INCIDENCE_LIMIT {
            let naive = naive_incidences(&gp, &r) as f64;
            t.record("incidence-naive", (naive - c).abs(), 0.0, || gp.as_point_set().to_text());
        }
    }
    Ok(t.checks.into_values().collect())
}

/// Runs every identity on every cell of the grid. Failures are recorded in
/// the report, not returned as errors.
pub fn run_identity_suite(cfg: &IdentityConfig) -> Result<Report> {
    let mut report = Report::new();
    for &cell in &cfg.grid {
        report.identities.extend(check_cell_identities(cell, cfg)?);
    }
    report.sort();
    Ok(report)
}
