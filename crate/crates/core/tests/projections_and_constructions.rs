mod common;

use std::sync::Arc;

use common::{brute_coset_count, brute_subspace_count, space};
use ffgeom::constructions::{self, Isotropic};
use ffgeom::field::Fq;
use ffgeom::geometry::{PairSet, PointSet};
use ffgeom::incidence;
use ffgeom::motions::{MotionSet, OrthGroup};
use ffgeom::projections::{self, enumerate_grassmannian, gaussian_binomial, orthogonal_complement, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn grassmannian_counts_match_brute_force() {
    for &(p, d, m) in &[(3u32, 2usize, 1usize), (3, 3, 1), (3, 3, 2), (5, 2, 1), (3, 2, 0), (3, 2, 2)] {
        let s = space(p, 1, d);
        let n = enumerate_grassmannian(s.field(), d, m).unwrap().len();
        assert_eq!(n, brute_subspace_count(&s, m), "G({d},{m}) over F_{p}");
        assert_eq!(n as u128, gaussian_binomial(p as u128, d, m));
    }
}

#[test]
fn complement_dimensions_and_involution() {
    for &(p, ell, d) in &[(3u32, 1u32, 3usize), (5, 1, 2), (5, 1, 3), (3, 2, 2)] {
        let s = space(p, ell, d);
        let f = s.field();
        for m in 0..=d {
            for w in enumerate_grassmannian(f, d, m).unwrap() {
                let perp = orthogonal_complement(f, &w);
                assert_eq!(w.dim() + perp.dim(), d);
                assert_eq!(orthogonal_complement(f, &perp), w);
                for a in w.basis() {
                    for b in perp.basis() {
                        assert!(ffgeom::linalg::dot(f, a, b).is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn projection_matches_coset_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for &(p, d, m) in &[(5u32, 3usize, 1usize), (5, 3, 2), (3, 2, 1), (5, 2, 1)] {
        let s = space(p, 1, d);
        let f = s.field();
        for w in enumerate_grassmannian(f, d, m).unwrap() {
            let e = PointSet::random(&s, rng.gen_range(0.01..0.3), &mut rng);
            let perp = orthogonal_complement(f, &w);
            assert_eq!(projections::project(&e, &w).unwrap().len(), brute_coset_count(&e, perp.basis()));
            assert_eq!(projections::project(&PointSet::full(&s), &w).unwrap().len(), s.q().pow(m as u32));
        }
    }
}

#[test]
fn full_space_sweep() {
    let s = space(5, 1, 2);
    let full = PointSet::full(&s);
    let sweep = projections::projection_intersection_sweep(&full, &full, 1).unwrap();
    assert_eq!(sweep.grassmannian_size(), 6);
    assert_eq!(sweep.full(), 6);
    assert!(sweep.to_csv().lines().count() == 7);
}

#[test]
fn projection_count_bound_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in [3u32, 5, 7] {
        let s = space(p, 1, 2);
        let grass = enumerate_grassmannian(s.field(), 2, 1).unwrap();
        for density in [0.05, 0.1, 0.2, 0.4] {
            let e = PointSet::random(&s, density, &mut rng);
            let sizes = projections::projection_sizes(&e, &grass).unwrap();
            for c in projections::projection_count_check(s.field(), 2, 1, e.len(), &sizes) {
                assert!(c.holds(), "q={p} |E|={} N={}: {} > {}", e.len(), c.threshold, c.observed, c.bound);
            }
        }
    }
}

#[test]
fn flats_on_a_line() {
    let s = space(5, 1, 2);
    let f = s.field();
    let dir = Subspace::new(f, 2, &[vec![Fq(1), Fq(3)]]).unwrap();
    let line = projections::AffineFlat::new(f, vec![Fq(2), Fq(0)], dir.clone()).unwrap();
    let pts: Vec<_> = f
        .elements()
        .map(|t| {
            let v = vec![f.add(Fq(2), t), f.mul(Fq(3), t)];
            projections::AffineFlat::point(f, v).unwrap()
        })
        .collect();
    let r = projections::flats_incidences(f, 2, &pts, std::slice::from_ref(&line)).unwrap();
    assert_eq!(r.count, 5);
}

#[test]
fn points_and_planes_within_error_term() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s = space(5, 1, 3);
    let f = s.field();
    let pts = projections::all_flats(&s, 0).unwrap();
    let planes = projections::all_flats(&s, 2).unwrap();
    assert_eq!(planes.len(), 31 * 5);
    for _ in 0..5 {
        let ks: Vec<_> = pts.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
        let hs: Vec<_> = planes.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
        let r = projections::flats_incidences(f, 3, &ks, &hs).unwrap();
        assert!(r.hypothesis);
        let naive = ks.iter().map(|k| hs.iter().filter(|h| h.contains_flat(f, k)).count() as u64).sum::<u64>();
        assert_eq!(r.count, naive);
        assert!(r.ratio() <= 1.0, "ratio {}", r.ratio());
    }
}

#[test]
fn lattice_quadruples_band() {
    let s = space(5, 1, 3);
    let v = constructions::lattice_vectors(&s).unwrap();
    for len in 1..=5 {
        let x = constructions::arithmetic_progression(s.field(), len).unwrap();
        let (a, _) = constructions::build_ap_lattice_sets(&s, &x, &v).unwrap();
        assert_eq!(a.len(), 5 * len);
        let n = incidence::count_n_product(&a, &a).unwrap() as f64;
        assert!(n >= (len as f64).powi(3) * 5f64.powi(4) / 2.0);
    }
}

#[test]
fn small_large_sets_are_saturated() {
    let s = space(5, 1, 3);
    let g = Arc::new(OrthGroup::enumerate(&s).unwrap());
    let v = constructions::lattice_vectors(&s).unwrap();
    let x = constructions::arithmetic_progression(s.field(), 2).unwrap();
    let (a, b) = constructions::build_small_large_sets(&s, &x, &v).unwrap();
    let sizes = incidence::difference_set_sizes(&a, &b, &g).unwrap();
    assert!(sizes.iter().all(|&n| n <= 8));
    // Motions carrying some pair of P meet it |O(d)| |P| times in total.
    let pr = PairSet::product(&a, &b).unwrap();
    let diffs: Vec<PointSet> = g.elements().iter().map(|m| incidence::difference_set(&a, &b, m).unwrap()).collect();
    let r = MotionSet::filter(&g, |gi, z| diffs[gi].contains(z)).unwrap();
    assert_eq!(incidence::count_incidences(&pr, &r).unwrap().count, (g.len() * pr.len()) as u64);
}

#[test]
fn isotropic_lattice_infeasible_in_odd_dimension_three() {
    for p in [3u32, 7, 11] {
        let s = space(p, 1, 3);
        assert!(matches!(
            constructions::mutually_isotropic_vectors(s.field(), 2, 1),
            Isotropic::Infeasible { candidates: 0 }
        ));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn rref_is_canonical(rows in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..4), scale in 1u32..5) {
        let s = space(5, 1, 3);
        let f = s.field();
        let rows: Vec<Vec<Fq>> = rows.iter().map(|r| r.iter().map(|&x| Fq(x)).collect()).collect();
        let w = Subspace::span(f, 3, &rows).unwrap();
        let mut alt: Vec<Vec<Fq>> = rows.iter().rev().map(|r| r.iter().map(|&x| f.mul(Fq(scale), x)).collect()).collect();
        if alt.len() > 1 {
            let first = alt[0].clone();
            for (a, b) in alt[1].iter_mut().zip(&first) {
                *a = f.add(*a, *b);
            }
        }
        prop_assert_eq!(Subspace::span(f, 3, &alt).unwrap(), w);
    }

    #[test]
    fn projections_are_monotone(seed in any::<u64>(), m in 1usize..3) {
        let s = space(3, 1, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = PointSet::random(&s, 0.2, &mut rng);
        let bigger = e.union(&PointSet::random(&s, 0.2, &mut rng)).unwrap();
        for w in enumerate_grassmannian(s.field(), 3, m).unwrap() {
            let (pe, pb) = (projections::project(&e, &w).unwrap(), projections::project(&bigger, &w).unwrap());
            prop_assert!(pe.representatives().is_subset(pb.representatives()).unwrap());
            prop_assert!(pe.len() <= e.len().min(3usize.pow(m as u32)));
        }
    }

    #[test]
    fn enumeration_order_is_stable(pick in 0usize..3) {
        let (p, d, m) = [(3u32, 3usize, 1usize), (5, 2, 1), (3, 3, 2)][pick];
        let s = space(p, 1, d);
        let a = enumerate_grassmannian(s.field(), d, m).unwrap();
        let mut b = a.clone();
        b.reverse();
        b.sort();
        prop_assert_eq!(a, b);
    }
}
