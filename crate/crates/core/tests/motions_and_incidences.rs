mod common;

use std::sync::Arc;

use common::{brute_orthogonal_group, naive_incidences, naive_intersection, naive_quadruples, space};
use ffgeom::field::FieldContext;
use ffgeom::geometry::{PairSet, PointSet};
use ffgeom::incidence::{self, n_from_product_spectra};
use ffgeom::motions::{orthogonal_group_order, MotionSet, OrthGroup};
use ffgeom::spectral::{self, NormClassSums, Spectrum, ZeroTerms};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group(p: u32, d: usize) -> Arc<OrthGroup> {
    Arc::new(OrthGroup::enumerate(&space(p, 1, d)).unwrap())
}

#[test]
fn column_extension_matches_brute_force() {
    for &(p, d) in &[(3u32, 2usize), (5, 2), (3, 3)] {
        let g = group(p, d);
        let f = FieldContext::new(p, 1).unwrap();
        let brute = brute_orthogonal_group(&f, d);
        let mut ours: Vec<Vec<_>> = g.elements().iter().map(|m| m.entries().to_vec()).collect();
        ours.sort();
        assert_eq!(ours, brute, "O({d},{p})");
        assert_eq!(g.len() as u128, orthogonal_group_order(&f, d));
    }
}

#[test]
fn group_orders_follow_formula() {
    for &(p, ell, d) in &[(7u32, 1u32, 2usize), (3, 2, 2), (5, 1, 3), (3, 1, 4)] {
        let s = space(p, ell, d);
        let g = OrthGroup::enumerate(&s).unwrap();
        assert_eq!(g.len() as u128, orthogonal_group_order(s.field(), d));
        let f = s.field();
        for m in g.elements() {
            assert_eq!(m.transpose().mul(f, m), ffgeom::OrthMatrix::identity(d));
        }
    }
}

#[test]
fn printed_product_weight_overcounts() {
    // A = B = F_3 in dimension 1: N = sum_t nu(t)^2 = 45, and the spectral
    // route only agrees when the equal-norm sum is weighted by q^{3d-1}(q-1).
    let s = space(3, 1, 1);
    let a = PointSet::full(&s);
    assert_eq!(incidence::count_n_product(&a, &a).unwrap(), 45);
    let t = NormClassSums::new(&Spectrum::of_set(&a).unwrap());
    let ours = n_from_product_spectra(&t, &t, 9, &s);
    assert!((ours - 45.0).abs() < 1e-9);
    let eq = spectral::spectral_sum_equal_norms(&t, &t, ZeroTerms::All);
    let neq = spectral::spectral_sum_unequal_norms(&t, &t);
    let printed = 81.0 / 3.0 + 27.0 * eq - 9.0 * neq;
    assert!((printed - 54.0).abs() < 1e-9);
}

#[test]
fn n_identities_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for &(p, d) in &[(3u32, 2usize), (5, 2), (3, 3)] {
        let s = space(p, 1, d);
        for _ in 0..6 {
            let a = PointSet::random(&s, rng.gen_range(0.1..0.8), &mut rng);
            let b = PointSet::random(&s, rng.gen_range(0.1..0.8), &mut rng);
            let pr = PairSet::product(&a, &b).unwrap();
            let ids = incidence::verify_n_identities(&pr, Some((&a, &b))).unwrap();
            assert!(ids.max_relative_error() < 1e-9, "{ids:?}");
            if (pr.len() as u64).pow(2) <= 2_000_000 {
                assert_eq!(ids.n, naive_quadruples(&pr));
            }
            let gen = PairSet::random(&s, rng.gen_range(0.1..0.5), &mut rng).unwrap();
            let ids = incidence::verify_n_identities(&gen, None).unwrap();
            assert!(ids.max_relative_error() < 1e-9);
            if (gen.len() as u64).pow(2) <= 2_000_000 {
                assert_eq!(ids.n, naive_quadruples(&gen));
            }
        }
    }
}

#[test]
fn incidence_count_matches_naive_and_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for &(p, d) in &[(3u32, 2usize), (5, 2)] {
        let g = group(p, d);
        let s = g.space().clone();
        for _ in 0..4 {
            let pr = PairSet::random(&s, rng.gen_range(0.1..0.6), &mut rng).unwrap();
            let keep = rng.gen_range(0.05..0.5);
            let seed: u64 = rng.gen();
            let r = MotionSet::filter(&g, |gi, z| {
                let mut h = ChaCha8Rng::seed_from_u64(seed ^ ((gi as u64) << 32) ^ z as u64);
                h.gen_bool(keep)
            })
            .unwrap();
            let res = incidence::count_incidences(&pr, &r).unwrap();
            assert_eq!(res.count, naive_incidences(&pr, &r));
            let e = incidence::incidence_fourier_expansion(&pr, &r).unwrap();
            assert!((e.total().re - res.count as f64).abs() <= 1e-6 * (res.count as f64).max(1.0));
            assert!(e.total().im.abs() < 1e-6);
            assert!((e.main - res.main_term.to_f64()).abs() < 1e-9);
        }
    }
}

#[test]
fn rotated_pairs_meet_every_translate() {
    // P = {(g0 y, y)} lies on the motion (g0, 0) |P| times.
    let g = group(5, 2);
    let s = g.space();
    let g0 = 3;
    let pts: Vec<usize> = (0..s.size()).step_by(4).collect();
    let pr = PairSet::from_pairs(s, pts.iter().map(|&y| (g.get(g0).apply_index(s, y), y))).unwrap();
    let r = MotionSet::from_pairs(&g, [(g0, 0)]).unwrap();
    assert_eq!(incidence::count_incidences(&pr, &r).unwrap().count, pts.len() as u64);
}

#[test]
fn shape_mismatch_is_an_error() {
    let g = group(3, 2);
    let other = space(5, 1, 2);
    let pr = PairSet::empty(&other).unwrap();
    let r = MotionSet::all(&g).unwrap();
    assert!(incidence::count_incidences(&pr, &r).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn histogram_sums_to_product(seed in any::<u64>(), pick in 0usize..3, gi in any::<prop::sample::Index>()) {
        let (p, d) = [(3u32, 2usize), (5, 2), (3, 3)][pick];
        let s = space(p, 1, d);
        let g = OrthGroup::enumerate(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = PointSet::random(&s, rng.gen_range(0.0..1.0), &mut rng);
        let b = PointSet::random(&s, rng.gen_range(0.0..1.0), &mut rng);
        let m = g.get(gi.index(g.len()));
        let h = incidence::intersection_histogram(&a, &b, m).unwrap();
        prop_assert_eq!(h.total(), (a.len() * b.len()) as u64);
        let z = rng.gen_range(0..s.size());
        prop_assert_eq!(h.values()[z], naive_intersection(&a, &b, m, z));
        prop_assert_eq!(h.support(), incidence::difference_set(&a, &b, m).unwrap().len());
    }

    #[test]
    fn incidences_are_motion_invariant(seed in any::<u64>()) {
        // Applying (h, w) to the first coordinate of P permutes the motions.
        let s = space(3, 1, 2);
        let g = Arc::new(OrthGroup::enumerate(&s).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pr = PairSet::random(&s, 0.2, &mut rng).unwrap();
        let w = rng.gen_range(0..s.size());
        let moved = PairSet::from_pairs(&s, pr.iter().map(|(x, y)| (s.add(x, w), y))).unwrap();
        let all = MotionSet::all(&g).unwrap();
        prop_assert_eq!(
            incidence::count_incidences(&pr, &all).unwrap().count,
            incidence::count_incidences(&moved, &all).unwrap().count
        );
    }

    #[test]
    fn image_size_is_support(seed in any::<u64>()) {
        let s = space(5, 1, 2);
        let g = OrthGroup::enumerate(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pr = PairSet::random(&s, 0.3, &mut rng).unwrap();
        let sizes = incidence::image_sizes(&pr, &g).unwrap();
        for (i, m) in g.elements().iter().enumerate() {
            prop_assert_eq!(sizes[i], incidence::sg_image(&pr, m).unwrap().len());
            prop_assert!(sizes[i] <= pr.len());
        }
    }
}
