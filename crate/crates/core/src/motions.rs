//! The orthogonal group `O(d, q)`, stabilisers and rigid motions `x -> g x + z`.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldContext, Fq};
use crate::geometry::Space;
use crate::linalg;

/// Largest dimension for which matrices act on point sets.
pub const MAX_MATRIX_DIM: usize = 8;
/// Largest dimension for group enumeration.
pub const MAX_GROUP_DIM: usize = 5;
/// Largest group order enumerated.
pub const MAX_GROUP_ORDER: u128 = 4_000_000;

/// A `d x d` matrix over `F_q` with `G^T G = I`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthMatrix {
    d: usize,
    entries: Vec<Fq>,
}

/// `G^T G = I` for a row-major `d x d` entry list.
pub fn is_orthogonal(field: &FieldContext, d: usize, entries: &[Fq]) -> bool {
    (0..d).all(|i| {
        (i..d).all(|j| {
            let mut acc = Fq::ZERO;
            for k in 0..d {
                acc = field.add(acc, field.mul(entries[k * d + i], entries[k * d + j]));
            }
            acc == if i == j { Fq::ONE } else { Fq::ZERO }
        })
    })
}

impl OrthMatrix {
    /// Validates shape and `G^T G = I`.
    pub fn new(field: &FieldContext, d: usize, entries: Vec<Fq>) -> Result<Self> {
        if d == 0 || d > MAX_MATRIX_DIM || entries.len() != d * d {
            return Err(Error::Shape(format!("{} entries for a {d}x{d} matrix", entries.len())));
        }
        if entries.iter().any(|x| x.0 >= field.q()) {
            return Err(Error::Domain("matrix entry outside the field".into()));
        }
        if !is_orthogonal(field, d, &entries) {
            return Err(Error::Domain("matrix is not orthogonal".into()));
        }
        Ok(OrthMatrix { d, entries })
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![Fq::ZERO; d * d];
        for i in 0..d {
            entries[i * d + i] = Fq::ONE;
        }
        OrthMatrix { d, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn entries(&self) -> &[Fq] {
        &self.entries
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Fq {
        self.entries[i * self.d + j]
    }

    pub fn column(&self, j: usize) -> Vec<Fq> {
        (0..self.d).map(|i| self.entry(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.d;
        let entries = (0..d * d).map(|k| self.entries[(k % d) * d + k / d]).collect();
        OrthMatrix { d, entries }
    }

    /// `self * other`.
    pub fn mul(&self, field: &FieldContext, other: &OrthMatrix) -> Self {
        let d = self.d;
        let mut entries = vec![Fq::ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = Fq::ZERO;
                for k in 0..d {
                    acc = field.add(acc, field.mul(self.entry(i, k), other.entry(k, j)));
                }
                entries[i * d + j] = acc;
            }
        }
        OrthMatrix { d, entries }
    }

    pub fn apply(&self, field: &FieldContext, v: &[Fq]) -> Vec<Fq> {
        (0..self.d)
            .map(|i| {
                (0..self.d).fold(Fq::ZERO, |acc, j| field.add(acc, field.mul(self.entry(i, j), v[j])))
            })
            .collect()
    }

    /// `g x` on canonical vector indices.
    #[inline]
    pub fn apply_index(&self, space: &Space, x: usize) -> usize {
        let field = space.field();
        let q = space.q();
        let d = self.d;
        let mut xs = [Fq::ZERO; MAX_MATRIX_DIM];
        space.decode_into(x, &mut xs[..d]);
        let mut out = 0;
        let mut place = 1;
        for i in 0..d {
            let row = &self.entries[i * d..(i + 1) * d];
            let mut acc = Fq::ZERO;
            for (&a, &b) in row.iter().zip(&xs[..d]) {
                acc = field.add(acc, field.mul(a, b));
            }
            out += acc.index() * place;
            place *= q;
        }
        out
    }

    /// The permutation `x -> g x` of `F_q^d` as an index table.
    pub fn action_table(&self, space: &Space) -> Vec<u32> {
        (0..space.size()).map(|x| self.apply_index(space, x) as u32).collect()
    }
}

/// Closed-form `|O(d, q)|` for the form `x_1^2 + ... + x_d^2`.
pub fn orthogonal_group_order(field: &FieldContext, d: usize) -> u128 {
    let q = field.q() as u128;
    let k = (d / 2) as u32;
    let prod = |upto: u32| (1..=upto).map(|i| q.pow(2 * i) - 1).product::<u128>();
    if d % 2 == 1 {
        2 * q.pow(k * k) * prod(k)
    } else {
        let minus_one_pow = if k.is_multiple_of(2) { Fq::ONE } else { field.neg(Fq::ONE) };
        let eps = field.quad_char(minus_one_pow);
        let middle = if eps == 1 { q.pow(k) - 1 } else { q.pow(k) + 1 };
        2 * q.pow(k * (k - 1)) * middle * prod(k - 1)
    }
}

/// An enumerated orthogonal group, canonically sorted by row-major entries.
#[derive(Debug)]
pub struct OrthGroup {
    space: Arc<Space>,
    elements: Vec<OrthMatrix>,
    index: HashMap<Vec<Fq>, usize>,
}

fn combinations<'a>(field: &'a FieldContext, basis: &'a [Vec<Fq>], d: usize) -> impl Iterator<Item = Vec<Fq>> + 'a {
    let q = field.q() as usize;
    let total = q.pow(basis.len() as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![Fq::ZERO; d];
        for b in basis {
            let c = Fq((code % q) as u32);
            code /= q;
            if c.is_zero() {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(b) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
        v
    })
}

fn extend_columns(field: &FieldContext, d: usize, cols: &mut Vec<Vec<Fq>>, out: &mut Vec<OrthMatrix>) {
    if cols.len() == d {
        let mut entries = vec![Fq::ZERO; d * d];
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                entries[i * d + j] = x;
            }
        }
        out.push(OrthMatrix { d, entries });
        return;
    }
    let basis = linalg::null_space(field, cols, d);
    let candidates: Vec<Vec<Fq>> = combinations(field, &basis, d)
        .filter(|v| linalg::dot(field, v, v) == Fq::ONE)
        .collect();
    for v in candidates {
        cols.push(v);
        extend_columns(field, d, cols, out);
        cols.pop();
    }
}

impl OrthGroup {
    /// Enumerates `O(d, q)` column by column: every new column is a unit
    /// vector in the orthogonal complement of the previous ones.
    pub fn enumerate(space: &Arc<Space>) -> Result<OrthGroup> {
        let d = space.dim();
        let field = space.field().clone();
        if d > MAX_GROUP_DIM {
            return Err(Error::Resource(format!("group enumeration capped at d = {MAX_GROUP_DIM}")));
        }
        let order = orthogonal_group_order(&field, d);
        if order > MAX_GROUP_ORDER {
            return Err(Error::Resource(format!("|O({d},{})| = {order} exceeds budget", field.q())));
        }
        let firsts: Vec<usize> = (0..space.size()).filter(|&i| space.norm(i) == Fq::ONE).collect();
        let mut elements: Vec<OrthMatrix> = firsts
            .par_iter()
            .flat_map_iter(|&i| {
                let mut out = Vec::new();
                let mut cols = vec![space.decode(i)];
                extend_columns(&field, d, &mut cols, &mut out);
                out
            })
            .collect();
        elements.sort();
        elements.dedup();
        Ok(Self::from_sorted(space.clone(), elements))
    }

    fn from_sorted(space: Arc<Space>, elements: Vec<OrthMatrix>) -> Self {
        let index = elements.iter().enumerate().map(|(i, g)| (g.entries.clone(), i)).collect();
        OrthGroup { space, elements, index }
    }

    /// Builds a group from an explicit element list, re-verifying each member.
    pub fn from_elements(space: &Arc<Space>, mut elements: Vec<OrthMatrix>) -> Result<OrthGroup> {
        for g in &elements {
            if g.dim() != space.dim() {
                return Err(Error::Shape(format!("{}x{} matrix for {:?}", g.d, g.d, space)));
            }
            if !is_orthogonal(space.field(), g.d, &g.entries) {
                return Err(Error::Domain("non-orthogonal group element".into()));
            }
        }
        elements.sort();
        elements.dedup();
        Ok(Self::from_sorted(space.clone(), elements))
    }

    #[inline]
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldContext> {
        self.space.field()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    #[inline]
    pub fn elements(&self) -> &[OrthMatrix] {
        &self.elements
    }

    #[inline]
    pub fn get(&self, i: usize) -> &OrthMatrix {
        &self.elements[i]
    }

    pub fn position(&self, g: &OrthMatrix) -> Option<usize> {
        self.index.get(&g.entries).copied()
    }

    /// `{ g : g v = v }` as group indices. `v = 0` is rejected.
    pub fn stabilizer(&self, v: usize) -> Result<Vec<usize>> {
        self.space.check_index(v)?;
        if v == 0 {
            return Err(Error::Domain("stabiliser of the zero vector is the whole group".into()));
        }
        Ok((0..self.len())
            .filter(|&i| self.elements[i].apply_index(&self.space, v) == v)
            .collect())
    }

    /// Writes the cache format: `p, ell, d` as u32 LE, `count` as u64 LE,
    /// then every matrix row-major as u32 LE entries.
    pub fn write_cache<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let f = self.field();
        for x in [f.p(), f.ell(), self.dim() as u32] {
            w.write_all(&x.to_le_bytes())?;
        }
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for g in &self.elements {
            for e in &g.entries {
                w.write_all(&e.0.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads the cache format and re-verifies `G^T G = I` for every entry.
    pub fn read_cache<R: Read>(space: &Arc<Space>, mut r: R) -> Result<OrthGroup> {
        let io = |e: std::io::Error| Error::Parse { line: 0, msg: e.to_string() };
        let mut u32buf = [0u8; 4];
        let mut header = [0u32; 3];
        for h in header.iter_mut() {
            r.read_exact(&mut u32buf).map_err(io)?;
            *h = u32::from_le_bytes(u32buf);
        }
        let f = space.field();
        if header != [f.p(), f.ell(), space.dim() as u32] {
            return Err(Error::Shape(format!(
                "cache is for (p, ell, d) = {header:?}, expected ({}, {}, {})",
                f.p(),
                f.ell(),
                space.dim()
            )));
        }
        let mut u64buf = [0u8; 8];
        r.read_exact(&mut u64buf).map_err(io)?;
        let count = u64::from_le_bytes(u64buf) as usize;
        let d = space.dim();
        let mut elements = Vec::with_capacity(count);
        for _ in 0..count {
            let mut entries = Vec::with_capacity(d * d);
            for _ in 0..d * d {
                r.read_exact(&mut u32buf).map_err(io)?;
                entries.push(Fq(u32::from_le_bytes(u32buf)));
            }
            elements.push(OrthMatrix::new(f, d, entries)?);
        }
        Self::from_elements(space, elements)
    }
}

/// `x -> g x + z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RigidMotion {
    pub g: OrthMatrix,
    pub z: Vec<Fq>,
}

impl RigidMotion {
    pub fn apply(&self, field: &FieldContext, x: &[Fq]) -> Vec<Fq> {
        self.g
            .apply(field, x)
            .into_iter()
            .zip(&self.z)
            .map(|(a, &b)| field.add(a, b))
            .collect()
    }

    /// `self o other = (g2 g1, g2 z1 + z2)`.
    pub fn compose(&self, field: &FieldContext, other: &RigidMotion) -> RigidMotion {
        let g = self.g.mul(field, &other.g);
        let z = self
            .g
            .apply(field, &other.z)
            .into_iter()
            .zip(&self.z)
            .map(|(a, &b)| field.add(a, b))
            .collect();
        RigidMotion { g, z }
    }
}

/// A deduplicated set of rigid motions `(group index, translation index)`,
/// ordered by group index then translation index.
#[derive(Clone, Debug)]
pub struct MotionSet {
    group: Arc<OrthGroup>,
    motions: Vec<(u32, u32)>,
}

impl MotionSet {
    /// The full product `O(d, q) x F_q^d`.
    pub fn all(group: &Arc<OrthGroup>) -> Result<MotionSet> {
        let n = group.len() as u128 * group.space().size() as u128;
        if n > u32::MAX as u128 {
            return Err(Error::Resource(format!("{n} rigid motions")));
        }
        let size = group.space().size() as u32;
        let motions = (0..group.len() as u32).flat_map(|g| (0..size).map(move |z| (g, z))).collect();
        Ok(MotionSet { group: group.clone(), motions })
    }

    pub fn filter(group: &Arc<OrthGroup>, pred: impl Fn(usize, usize) -> bool) -> Result<MotionSet> {
        let mut all = Self::all(group)?;
        all.motions.retain(|&(g, z)| pred(g as usize, z as usize));
        Ok(all)
    }

    pub fn from_pairs(group: &Arc<OrthGroup>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<MotionSet> {
        let mut motions = Vec::new();
        for (g, z) in pairs {
            if g >= group.len() {
                return Err(Error::Domain(format!("group index {g} out of range")));
            }
            group.space().check_index(z)?;
            motions.push((g as u32, z as u32));
        }
        motions.sort_unstable();
        motions.dedup();
        Ok(MotionSet { group: group.clone(), motions })
    }

    #[inline]
    pub fn group(&self) -> &Arc<OrthGroup> {
        &self.group
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.motions.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.motions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.motions.iter().map(|&(g, z)| (g as usize, z as usize))
    }

    /// Motions grouped by group element: `(g, [z...])`.
    pub fn by_group(&self) -> Vec<(usize, Vec<usize>)> {
        let mut out: Vec<(usize, Vec<usize>)> = Vec::new();
        for (g, z) in self.iter() {
            match out.last_mut() {
                Some((last, zs)) if *last == g => zs.push(z),
                _ => out.push((g, vec![z])),
            }
        }
        out
    }

    pub fn motion(&self, i: usize) -> RigidMotion {
        let (g, z) = self.motions[i];
        RigidMotion {
            g: self.group.get(g as usize).clone(),
            z: self.group.space().decode(z as usize),
        }
    }
}
