mod common;

use common::{naive_dft, naive_set_dft, space};
use ffgeom::field::{FieldContext, Fq};
use ffgeom::geometry::PointSet;
use ffgeom::spectral::{self, NormClassSums, Spectrum};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FIELDS: [(u32, u32); 8] = [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (3, 2), (5, 2), (7, 2)];

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn gauss_sum_matches_direct_sum() {
    for &(p, ell) in &FIELDS {
        let f = FieldContext::new(p, ell).unwrap();
        let g = f.gauss_sum(Fq::ONE).unwrap();
        assert!(close(g, f.gauss_sum_closed_form(), 1e-9), "p={p} ell={ell}: {g}");
        assert!((g.norm_sqr() - f.q() as f64).abs() < 1e-8);
    }
}

#[test]
fn gauss_sum_scales_by_eta() {
    // G_a = eta(a) G_1.
    for &(p, ell) in &FIELDS[..6] {
        let f = FieldContext::new(p, ell).unwrap();
        let g1 = f.gauss_sum(Fq::ONE).unwrap();
        for a in f.nonzero_elements() {
            assert!(close(f.gauss_sum(a).unwrap(), g1 * f.quad_char(a) as f64, 1e-8));
        }
    }
}

#[test]
fn trace_is_additive_and_fixed_by_frobenius() {
    for &(p, ell) in &FIELDS {
        let f = FieldContext::new(p, ell).unwrap();
        for x in f.elements() {
            assert_eq!(f.trace(f.frobenius(x)), f.trace(x));
            assert_eq!(f.parts(f.trace(x)).1, 0);
        }
    }
}

#[test]
fn dft_matches_naive_transform() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &(p, ell, d) in &[(3, 1, 2), (5, 1, 2), (3, 1, 3), (3, 2, 2), (7, 1, 1)] {
        let s = space(p, ell, d);
        let e = PointSet::random(&s, 0.4, &mut rng);
        let fast = Spectrum::of_set(&e).unwrap();
        let slow = naive_set_dft(&e);
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            assert!(close(*a, *b, 1e-10));
        }
        let back = fast.inverse();
        for x in 0..s.size() {
            let want = if e.contains(x) { 1.0 } else { 0.0 };
            assert!((back[x] - want).norm() < 1e-9);
        }
    }
}

#[test]
fn sphere_closed_form_matches_dft() {
    for &(p, ell) in &[(3, 1), (5, 1), (7, 1), (3, 2)] {
        for d in [2usize, 3] {
            let s = space(p, ell, d);
            for j in s.field().elements() {
                let spec = Spectrum::of_set(&PointSet::sphere(&s, j)).unwrap();
                for m in 0..s.size() {
                    let c = spectral::sphere_fourier_closed(&s, j, m);
                    assert!(close(c, spec.at(m), 1e-8), "q={} d={d} j={j:?} m={m}", s.q());
                }
            }
        }
    }
}

#[test]
fn sphere_pair_sum_closed_form() {
    for &(p, d) in &[(3, 2), (5, 2), (3, 3)] {
        let s = space(p, 1, d);
        let spheres = spectral::sphere_spectra(&s).unwrap();
        for m in 0..s.size() {
            for mp in (0..s.size()).step_by(3) {
                let a = spectral::sphere_pair_sum_dft(&spheres, m, mp);
                assert!(close(a, spectral::sphere_pair_sum_closed(&s, m, mp), 1e-10));
            }
        }
    }
}

#[test]
fn variety_closed_form_matches_dft() {
    for p in [3u32, 5, 7] {
        for d in [1usize, 2] {
            let half = space(p, 1, d);
            let v = spectral::norm_variety(&half).unwrap();
            let slow = naive_set_dft(v.as_point_set());
            let h = half.size();
            for (idx, c) in slow.iter().enumerate() {
                let closed = spectral::variety_fourier(&half, idx % h, idx / h);
                assert!(close(*c, Complex64::new(closed, 0.0), 1e-10), "p={p} d={d} idx={idx}");
            }
        }
    }
    let half = space(3, 1, 1);
    assert_eq!(ffgeom::exact::scaled_integer(spectral::variety_fourier(&half, 0, 0), 9.0, 1e-12), Some(5));
}

#[test]
fn restricted_sums_vanish_off_zero_for_full_space() {
    let s = space(5, 1, 2);
    let t = NormClassSums::new(&Spectrum::of_set(&PointSet::full(&s)).unwrap());
    assert!(t.nonzero().iter().all(|v| v.abs() < 1e-20));
    assert!((t.energy() - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn character_is_additive(fi in 0usize..8, a in 0u32..169, b in 0u32..169) {
        let (p, ell) = FIELDS[fi];
        let f = FieldContext::new(p, ell).unwrap();
        let (x, y) = (Fq(a % f.q()), Fq(b % f.q()));
        prop_assert!(close(f.add_char(f.add(x, y)), f.add_char(x) * f.add_char(y), 1e-12));
    }

    #[test]
    fn eta_is_multiplicative(fi in 0usize..8, a in 1u32..169, b in 1u32..169) {
        let (p, ell) = FIELDS[fi];
        let f = FieldContext::new(p, ell).unwrap();
        let (x, y) = (Fq(a % f.q()), Fq(b % f.q()));
        prop_assert_eq!(f.quad_char(f.mul(x, y)), f.quad_char(x) * f.quad_char(y));
    }

    #[test]
    fn completing_the_square(fi in 0usize..6, s in 1u32..49, beta in prop::collection::vec(0u32..49, 1..3)) {
        let (p, ell) = [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2), (5, 2)][fi];
        let f = FieldContext::new(p, ell).unwrap();
        let s = Fq(s % (f.q() - 1) + 1);
        let beta: Vec<Fq> = beta.iter().map(|&b| Fq(b % f.q())).collect();
        let direct = spectral::complete_square_direct(&f, s, &beta);
        let closed = spectral::complete_square_closed(&f, s, &beta).unwrap();
        prop_assert!(close(direct, closed, 1e-8));
    }

    #[test]
    fn plancherel(seed in any::<u64>(), density in 0.05f64..0.95, pick in 0usize..4) {
        let (p, ell, d) = [(3, 1, 2), (5, 1, 2), (3, 1, 3), (3, 2, 2)][pick];
        let s = space(p, ell, d);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = PointSet::random(&s, density, &mut rng);
        let spec = Spectrum::of_set(&e).unwrap();
        prop_assert!((spec.energy() - e.len() as f64 / s.size() as f64).abs() < 1e-10);
        prop_assert!((spec.at(0).re - e.len() as f64 / s.size() as f64).abs() < 1e-12);
    }

    #[test]
    fn dft_of_weighted_function(seed in any::<u64>()) {
        let s = space(3, 1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..s.size()).map(|_| rand::Rng::gen_range(&mut rng, -2.0..2.0)).collect();
        let cvals: Vec<Complex64> = vals.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let fast = Spectrum::of_function(&s, &cvals).unwrap();
        let slow = naive_dft(&s, |x| vals[x]);
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            prop_assert!(close(*a, *b, 1e-10));
        }
    }
}
