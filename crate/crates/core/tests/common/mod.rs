//! Brute-force oracles shared by the integration tests. Each one recomputes
//! its quantity straight from the definition with vector arithmetic, without
//! going through the library's fast paths.
#![allow(dead_code)]

use std::sync::Arc;

use ffgeom::field::{FieldContext, Fq};
use ffgeom::geometry::{PairSet, PointSet, Space};
use ffgeom::motions::{MotionSet, OrthMatrix};
use num_complex::Complex64;

pub fn space(p: u32, ell: u32, d: usize) -> Arc<Space> {
    Space::new(Arc::new(FieldContext::new(p, ell).unwrap()), d).unwrap()
}

fn vdot(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Fq {
    let mut acc = Fq::ZERO;
    for (&x, &y) in a.iter().zip(b) {
        acc = f.add(acc, f.mul(x, y));
    }
    acc
}

pub fn vnorm(f: &FieldContext, a: &[Fq]) -> Fq {
    vdot(f, a, a)
}

fn vsub(f: &FieldContext, a: &[Fq], b: &[Fq]) -> Vec<Fq> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

/// `q^{-n} sum_x chi(-m.x) f(x)` for every `m`, one full sum per coefficient.
pub fn naive_dft(space: &Space, f: impl Fn(usize) -> f64) -> Vec<Complex64> {
    let field = space.field();
    let n = space.size();
    let vecs: Vec<Vec<Fq>> = (0..n).map(|i| space.decode(i)).collect();
    let vals: Vec<f64> = (0..n).map(&f).collect();
    (0..n)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..n {
                if vals[x] != 0.0 {
                    acc += field.add_char(field.neg(vdot(field, &vecs[m], &vecs[x]))) * vals[x];
                }
            }
            acc / n as f64
        })
        .collect()
}

pub fn naive_set_dft(set: &PointSet) -> Vec<Complex64> {
    naive_dft(set.space(), |x| if set.contains(x) { 1.0 } else { 0.0 })
}

/// Every `d x d` matrix with `G^T G = I`, by exhausting all `q^{d^2}` matrices.
pub fn brute_orthogonal_group(f: &FieldContext, d: usize) -> Vec<Vec<Fq>> {
    let q = f.q() as usize;
    let mut out = Vec::new();
    let mut m = vec![Fq::ZERO; d * d];
    for mut code in 0..q.pow((d * d) as u32) {
        for e in m.iter_mut() {
            *e = Fq((code % q) as u32);
            code /= q;
        }
        let ok = (0..d).all(|i| {
            (0..d).all(|j| {
                let mut s = Fq::ZERO;
                for k in 0..d {
                    s = f.add(s, f.mul(m[k * d + i], m[k * d + j]));
                }
                s == if i == j { Fq::ONE } else { Fq::ZERO }
            })
        });
        if ok {
            out.push(m.clone());
        }
    }
    out.sort();
    out
}

fn mat_vec(f: &FieldContext, g: &OrthMatrix, v: &[Fq]) -> Vec<Fq> {
    let d = v.len();
    (0..d)
        .map(|i| {
            let mut s = Fq::ZERO;
            for j in 0..d {
                s = f.add(s, f.mul(g.entry(i, j), v[j]));
            }
            s
        })
        .collect()
}

/// `#{((x, y), (g, z)) : x = g y + z}` by testing every combination.
pub fn naive_incidences(p: &PairSet, r: &MotionSet) -> u64 {
    let half = p.half();
    let f = half.field();
    let pairs: Vec<(Vec<Fq>, Vec<Fq>)> = p.iter().map(|(x, y)| (half.decode(x), half.decode(y))).collect();
    let mut count = 0;
    for (g, z) in r.iter() {
        let gm = r.group().get(g);
        let zv = half.decode(z);
        for (x, y) in &pairs {
            let gy = mat_vec(f, gm, y);
            if gy.iter().zip(&zv).zip(x).all(|((&a, &b), &c)| f.add(a, b) == c) {
                count += 1;
            }
        }
    }
    count
}

/// `N(P)` by looping over every pair of pairs.
pub fn naive_quadruples(p: &PairSet) -> u64 {
    let half = p.half();
    let f = half.field();
    let pairs: Vec<(Vec<Fq>, Vec<Fq>)> = p.iter().map(|(x, y)| (half.decode(x), half.decode(y))).collect();
    let mut n = 0;
    for (x, y) in &pairs {
        for (u, v) in &pairs {
            if vnorm(f, &vsub(f, x, u)) == vnorm(f, &vsub(f, y, v)) {
                n += 1;
            }
        }
    }
    n
}

/// `|A ∩ (g B + z)|` for one `z`, by membership tests.
pub fn naive_intersection(a: &PointSet, b: &PointSet, g: &OrthMatrix, z: usize) -> u32 {
    let s = a.space();
    let f = s.field();
    let zv = s.decode(z);
    b.iter()
        .filter(|&y| {
            let gy = mat_vec(f, g, &s.decode(y));
            let w: Vec<Fq> = gy.iter().zip(&zv).map(|(&u, &v)| f.add(u, v)).collect();
            a.contains(s.encode(&w))
        })
        .count() as u32
}

/// Number of cosets `x + U` (with `U` spanned by `basis`) that meet `e`,
/// found by listing every coset explicitly.
pub fn brute_coset_count(e: &PointSet, basis: &[Vec<Fq>]) -> usize {
    let s = e.space();
    let f = s.field();
    let q = f.q() as usize;
    let k = basis.len();
    let mut members: Vec<Vec<Fq>> = Vec::new();
    for mut code in 0..q.pow(k as u32) {
        let mut v = vec![Fq::ZERO; s.dim()];
        for b in basis {
            let c = Fq((code % q) as u32);
            code /= q;
            for (x, &y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        members.push(v);
    }
    let mut seen = vec![false; s.size()];
    let mut count = 0;
    for x in 0..s.size() {
        if seen[x] {
            continue;
        }
        let xv = s.decode(x);
        let coset: Vec<usize> = members
            .iter()
            .map(|u| s.encode(&xv.iter().zip(u).map(|(&a, &b)| f.add(a, b)).collect::<Vec<_>>()))
            .collect();
        let mut hit = false;
        for &c in &coset {
            seen[c] = true;
            hit |= e.contains(c);
        }
        count += hit as usize;
    }
    count
}

/// All `m`-dimensional subspaces, as sets of member indices, by closing every
/// `m`-tuple of vectors under linear combinations.
pub fn brute_subspace_count(s: &Space, m: usize) -> usize {
    let f = s.field();
    let q = f.q() as usize;
    let target = q.pow(m as u32);
    let mut found = std::collections::BTreeSet::new();
    let n = s.size();
    let mut tuple = vec![0usize; m];
    loop {
        let mut members = std::collections::BTreeSet::new();
        for mut code in 0..target {
            let mut v = 0;
            for &t in &tuple {
                v = s.add(v, s.scale(Fq((code % q) as u32), t));
                code /= q;
            }
            members.insert(v);
        }
        if members.len() == target {
            found.insert(members.into_iter().collect::<Vec<_>>());
        }
        let mut i = 0;
        loop {
            if i == m {
                return found.len();
            }
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if m == 0 {
            return 1;
        }
    }
}
