//! Vectors in `F_q^d`, the quadratic norm, spheres and dense point sets.
//!
//! A vector `(x_1, ..., x_d)` is stored as the mixed-radix index
//! `x_1 + x_2 q + ... + x_d q^(d-1)`, i.e. `x_1` is least significant.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use rand::Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{FieldContext, Fq};
use crate::motions::OrthMatrix;

/// Largest universe `q^n` accepted by [`Space::new`].
pub const MAX_UNIVERSE: usize = 1 << 26;

/// `F_q^n` with canonical vector indexing.
pub struct Space {
    field: Arc<FieldContext>,
    dim: usize,
    size: usize,
    norms: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Space(F_{}^{})", self.field.q(), self.dim)
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && *self.field == *other.field
    }
}

impl Space {
    pub fn new(field: Arc<FieldContext>, dim: usize) -> Result<Arc<Space>> {
        if dim == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        let size = (field.q() as usize)
            .checked_pow(dim as u32)
            .filter(|&s| s <= MAX_UNIVERSE)
            .ok_or_else(|| {
                Error::Resource(format!("universe {}^{} exceeds {}", field.q(), dim, MAX_UNIVERSE))
            })?;
        Ok(Arc::new(Space { field, dim, size, norms: OnceLock::new() }))
    }

    #[inline]
    pub fn field(&self) -> &Arc<FieldContext> {
        &self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `q^dim`.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.field.q() as usize
    }

    pub fn check_index(&self, idx: usize) -> Result<()> {
        if idx < self.size {
            Ok(())
        } else {
            Err(Error::Domain(format!("vector index {idx} outside {self:?}")))
        }
    }

    pub fn encode(&self, v: &[Fq]) -> usize {
        debug_assert_eq!(v.len(), self.dim);
        let q = self.q();
        v.iter().rev().fold(0usize, |acc, x| acc * q + x.index())
    }

    pub fn decode_into(&self, mut idx: usize, out: &mut [Fq]) {
        let q = self.q();
        for slot in out.iter_mut().take(self.dim) {
            *slot = Fq((idx % q) as u32);
            idx /= q;
        }
    }

    pub fn decode(&self, idx: usize) -> Vec<Fq> {
        let mut v = vec![Fq::ZERO; self.dim];
        self.decode_into(idx, &mut v);
        v
    }

    #[inline]
    fn zip_digits(&self, mut a: usize, mut b: usize, op: impl Fn(Fq, Fq) -> Fq) -> usize {
        let q = self.q();
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.dim {
            let r = op(Fq((a % q) as u32), Fq((b % q) as u32));
            out += r.index() * place;
            place *= q;
            a /= q;
            b /= q;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.zip_digits(a, b, |x, y| self.field.add(x, y))
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.zip_digits(a, b, |x, y| self.field.sub(x, y))
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.zip_digits(a, 0, |x, _| self.field.neg(x))
    }

    pub fn scale(&self, c: Fq, a: usize) -> usize {
        self.zip_digits(a, 0, |x, _| self.field.mul(c, x))
    }

    /// Dot product `a . b`.
    pub fn dot(&self, mut a: usize, mut b: usize) -> Fq {
        let q = self.q();
        let f = &self.field;
        let mut acc = Fq::ZERO;
        for _ in 0..self.dim {
            acc = f.add(acc, f.mul(Fq((a % q) as u32), Fq((b % q) as u32)));
            a /= q;
            b /= q;
        }
        acc
    }

    /// `x_1^2 + ... + x_d^2` computed from coordinates.
    pub fn norm_of(&self, v: &[Fq]) -> Fq {
        let f = &self.field;
        v.iter().fold(Fq::ZERO, |acc, &x| f.add(acc, f.square(x)))
    }

    /// Norm table lookup; the table is built on first use.
    #[inline]
    pub fn norm(&self, idx: usize) -> Fq {
        Fq(self.norm_table()[idx])
    }

    pub fn norm_table(&self) -> &[u32] {
        self.norms.get_or_init(|| {
            let mut buf = vec![Fq::ZERO; self.dim];
            (0..self.size)
                .map(|i| {
                    self.decode_into(i, &mut buf);
                    self.norm_of(&buf).0
                })
                .collect()
        })
    }

    /// Index of the `i`-th standard basis vector.
    pub fn basis_vector(&self, i: usize) -> usize {
        self.q().pow(i as u32)
    }
}

/// A subset of `F_q^d` stored as a bit vector over canonical indices.
#[derive(Clone)]
pub struct PointSet {
    space: Arc<Space>,
    bits: BitSet,
    card: usize,
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointSet")
            .field("space", &self.space)
            .field("card", &self.card)
            .finish()
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        *self.space == *other.space && self.bits == other.bits
    }
}

impl PointSet {
    fn from_bits(space: Arc<Space>, bits: BitSet) -> Self {
        let card = bits.count();
        PointSet { space, bits, card }
    }

    pub fn empty(space: &Arc<Space>) -> Self {
        PointSet { space: space.clone(), bits: BitSet::new(space.size()), card: 0 }
    }

    pub fn full(space: &Arc<Space>) -> Self {
        PointSet { space: space.clone(), bits: BitSet::full(space.size()), card: space.size() }
    }

    pub fn from_indices(space: &Arc<Space>, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = BitSet::new(space.size());
        for i in indices {
            space.check_index(i)?;
            bits.insert(i);
        }
        Ok(Self::from_bits(space.clone(), bits))
    }

    pub fn from_vectors<V: AsRef<[Fq]>>(space: &Arc<Space>, vectors: &[V]) -> Result<Self> {
        let mut bits = BitSet::new(space.size());
        for v in vectors {
            let v = v.as_ref();
            if v.len() != space.dim() {
                return Err(Error::Shape(format!(
                    "vector of length {} in dimension {}",
                    v.len(),
                    space.dim()
                )));
            }
            if v.iter().any(|x| x.0 >= space.field().q()) {
                return Err(Error::Domain(format!("coordinate out of range in {v:?}")));
            }
            bits.insert(space.encode(v));
        }
        Ok(Self::from_bits(space.clone(), bits))
    }

    pub fn from_predicate(space: &Arc<Space>, pred: impl Fn(usize) -> bool) -> Self {
        let mut bits = BitSet::new(space.size());
        for i in (0..space.size()).filter(|&i| pred(i)) {
            bits.insert(i);
        }
        Self::from_bits(space.clone(), bits)
    }

    /// Independent inclusion of every vector with probability `density`.
    pub fn random<R: Rng + ?Sized>(space: &Arc<Space>, density: f64, rng: &mut R) -> Self {
        let mut bits = BitSet::new(space.size());
        for i in 0..space.size() {
            if rng.gen::<f64>() < density {
                bits.insert(i);
            }
        }
        Self::from_bits(space.clone(), bits)
    }

    /// A uniformly random subset of exactly `size` vectors.
    pub fn random_of_size<R: Rng + ?Sized>(space: &Arc<Space>, size: usize, rng: &mut R) -> Result<Self> {
        if size > space.size() {
            return Err(Error::Domain(format!("cannot pick {size} of {} vectors", space.size())));
        }
        let picks = rand::seq::index::sample(rng, space.size(), size);
        Self::from_indices(space, picks)
    }

    /// `S_j = { x : x_1^2 + ... + x_d^2 = j }`.
    pub fn sphere(space: &Arc<Space>, j: Fq) -> Self {
        let norms = space.norm_table();
        Self::from_predicate(space, |i| norms[i] == j.0)
    }

    #[inline]
    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    #[inline]
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.card
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.card == 0
    }

    #[inline]
    pub fn contains(&self, idx: usize) -> bool {
        self.bits.contains(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter()
    }

    pub fn to_vectors(&self) -> Vec<Vec<Fq>> {
        self.iter().map(|i| self.space.decode(i)).collect()
    }

    fn check_same_space(&self, other: &PointSet) -> Result<()> {
        if *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::Shape(format!("{:?} vs {:?}", self.space, other.space)))
        }
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_space(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Self::from_bits(self.space.clone(), bits))
    }

    pub fn intersection(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_space(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Self::from_bits(self.space.clone(), bits))
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_space(other)?;
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Ok(Self::from_bits(self.space.clone(), bits))
    }

    pub fn intersection_count(&self, other: &PointSet) -> Result<usize> {
        self.check_same_space(other)?;
        Ok(self.bits.intersection_count(&other.bits))
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        self.check_same_space(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    /// Image under an index map; the map need not be injective.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> PointSet {
        let mut bits = BitSet::new(self.space.size());
        for i in self.iter() {
            bits.insert(f(i));
        }
        Self::from_bits(self.space.clone(), bits)
    }

    /// `S + z`.
    pub fn translate(&self, z: usize) -> Result<PointSet> {
        self.space.check_index(z)?;
        Ok(self.map(|x| self.space.add(x, z)))
    }

    /// `-S`.
    pub fn negate(&self) -> PointSet {
        self.map(|x| self.space.neg(x))
    }

    /// `g S`.
    pub fn apply_matrix(&self, g: &OrthMatrix) -> Result<PointSet> {
        if g.dim() != self.space.dim() {
            return Err(Error::Shape(format!(
                "{}x{} matrix on {:?}",
                g.dim(),
                g.dim(),
                self.space
            )));
        }
        Ok(self.map(|x| g.apply_index(&self.space, x)))
    }

    /// Serialises to the point-set text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("q={} d={}\n", self.space.q(), self.space.dim());
        for v in self.to_vectors() {
            let line: Vec<String> = v.iter().map(|x| x.0.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    /// Parses the point-set text format. Blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str, field: &Arc<FieldContext>) -> Result<PointSet> {
        let (q, d, rows) = parse_point_rows(text)?;
        if q != field.q() {
            return Err(Error::Parse { line: 1, msg: format!("header q={q} but field has q={}", field.q()) });
        }
        let space = Space::new(field.clone(), d)?;
        let mut vectors = Vec::with_capacity(rows.len());
        for (line, coords) in rows {
            if coords.len() != d {
                return Err(Error::Parse { line, msg: format!("expected {d} coordinates, got {}", coords.len()) });
            }
            if let Some(bad) = coords.iter().find(|&&c| c >= q) {
                return Err(Error::Parse { line, msg: format!("coordinate {bad} not in [0, {q})") });
            }
            vectors.push(coords.into_iter().map(Fq).collect::<Vec<_>>());
        }
        PointSet::from_vectors(&space, &vectors)
    }
}

/// Reads the header and raw coordinate rows of a point-set file.
pub fn parse_point_rows(text: &str) -> Result<(u32, usize, Vec<(usize, Vec<u32>)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let mut q = None;
    let mut d = None;
    for tok in header.split_whitespace() {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: hline, msg: format!("bad header token {tok:?}") })?;
        let val: u64 = v
            .parse()
            .map_err(|_| Error::Parse { line: hline, msg: format!("bad number {v:?}") })?;
        match k {
            "q" => q = Some(val as u32),
            "d" => d = Some(val as usize),
            _ => return Err(Error::Parse { line: hline, msg: format!("unknown header key {k:?}") }),
        }
    }
    let (q, d) = match (q, d) {
        (Some(q), Some(d)) => (q, d),
        _ => return Err(Error::Parse { line: hline, msg: "header must be `q=<q> d=<d>`".into() }),
    };
    let mut rows = Vec::new();
    for (line, l) in lines {
        let coords = l
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        rows.push((line, coords));
    }
    Ok((q, d, rows))
}

/// A subset `P` of `F_q^d x F_q^d`, indexed as `x + q^d y`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairSet {
    half: Arc<Space>,
    set: PointSet,
}

impl PairSet {
    pub fn empty(half: &Arc<Space>) -> Result<PairSet> {
        let full = Space::new(half.field().clone(), 2 * half.dim())?;
        Ok(PairSet { half: half.clone(), set: PointSet::empty(&full) })
    }

    /// Wraps a point set of `F_q^{2d}` as pairs over `F_q^d`.
    pub fn from_point_set(set: PointSet) -> Result<PairSet> {
        let dim = set.space().dim();
        if !dim.is_multiple_of(2) {
            return Err(Error::Shape(format!("odd ambient dimension {dim} for a pair set")));
        }
        let half = Space::new(set.space().field().clone(), dim / 2)?;
        Ok(PairSet { half, set })
    }

    pub fn from_pairs(half: &Arc<Space>, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<PairSet> {
        let full = Space::new(half.field().clone(), 2 * half.dim())?;
        let n = half.size();
        let mut idx = Vec::new();
        for (x, y) in pairs {
            half.check_index(x)?;
            half.check_index(y)?;
            idx.push(x + n * y);
        }
        Ok(PairSet { half: half.clone(), set: PointSet::from_indices(&full, idx)? })
    }

    /// `A x B`.
    pub fn product(a: &PointSet, b: &PointSet) -> Result<PairSet> {
        a.check_same_space(b)?;
        let pairs: Vec<(usize, usize)> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).collect();
        Self::from_pairs(a.space(), pairs)
    }

    pub fn random<R: Rng + ?Sized>(half: &Arc<Space>, density: f64, rng: &mut R) -> Result<PairSet> {
        let full = Space::new(half.field().clone(), 2 * half.dim())?;
        Ok(PairSet { half: half.clone(), set: PointSet::random(&full, density, rng) })
    }

    #[inline]
    pub fn half(&self) -> &Arc<Space> {
        &self.half
    }

    #[inline]
    pub fn as_point_set(&self) -> &PointSet {
        &self.set
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.set.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.set.contains(x + self.half.size() * y)
    }

    /// `(x, y)` pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.half.size();
        self.set.iter().map(move |i| (i % n, i / n))
    }
}
