//! Builders for the explicit extremal sets: lattices over mutually isotropic
//! vectors, the small/large pair, the subspace example, and the planar sets
//! whose projections miss each other along most directions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldContext, Fq};
use crate::geometry::{PointSet, Space};
use crate::linalg;
use crate::motions::OrthMatrix;
use crate::projections::{self, Subspace};

/// Result of the isotropic-vector search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isotropic {
    Found(Vec<Vec<Fq>>),
    /// No such family exists; `candidates` isotropic directions were tried.
    Infeasible { candidates: usize },
}

impl Isotropic {
    pub fn vectors(&self) -> Option<&[Vec<Fq>]> {
        match self {
            Isotropic::Found(v) => Some(v),
            Isotropic::Infeasible { .. } => None,
        }
    }
}

/// Nonzero `v` with `v . v = 0`, scaled so the first nonzero coordinate is 1,
/// in lexicographic order with the first coordinate most significant.
fn isotropic_directions(field: &FieldContext, n: usize) -> Vec<Vec<Fq>> {
    let q = field.q() as usize;
    let total = q.pow(n as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut v = vec![Fq::ZERO; n];
        let mut c = code;
        for i in (0..n).rev() {
            v[i] = Fq((c % q) as u32);
            c /= q;
        }
        if v.iter().find(|x| !x.is_zero()) != Some(&Fq::ONE) {
            continue;
        }
        if linalg::dot(field, &v, &v).is_zero() {
            out.push(v);
        }
    }
    out
}

/// `count` linearly independent vectors of `F_q^n` whose pairwise and self
/// dot products all vanish, found by backtracking.
pub fn mutually_isotropic_vectors(field: &FieldContext, n: usize, count: usize) -> Isotropic {
    if count == 0 {
        return Isotropic::Found(Vec::new());
    }
    let cands = isotropic_directions(field, n);
    if 2 * count > n {
        return Isotropic::Infeasible { candidates: cands.len() };
    }
    fn extend(field: &FieldContext, cands: &[Vec<Fq>], start: usize, count: usize, chosen: &mut Vec<Vec<Fq>>) -> bool {
        if chosen.len() == count {
            return true;
        }
        for i in start..cands.len() {
            let v = &cands[i];
            if chosen.iter().any(|u| !linalg::dot(field, u, v).is_zero()) {
                continue;
            }
            chosen.push(v.clone());
            if linalg::rank(field, chosen) == chosen.len() && extend(field, cands, i + 1, count, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    if extend(field, &cands, 0, count, &mut chosen) {
        Isotropic::Found(chosen)
    } else {
        Isotropic::Infeasible { candidates: cands.len() }
    }
}

/// `{0, 1, ..., len - 1}` in `F_q`.
pub fn arithmetic_progression(field: &FieldContext, len: usize) -> Result<Vec<Fq>> {
    if len > field.p() as usize {
        return Err(Error::Construction(format!("a step-1 progression in F_{} has at most {} terms", field.q(), field.p())));
    }
    Ok((0..len).map(|i| field.from_int(i as i64)).collect())
}

/// `vectors` padded with zeros to length `d`.
pub fn pad(vectors: &[Vec<Fq>], d: usize) -> Vec<Vec<Fq>> {
    vectors
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.resize(d, Fq::ZERO);
            w
        })
        .collect()
}

fn check_vectors(space: &Space, vectors: &[Vec<Fq>], isotropic: bool) -> Result<()> {
    let field = space.field();
    let d = space.dim();
    if vectors.iter().any(|v| v.len() != d) {
        return Err(Error::Shape(format!("vectors must have length {d}")));
    }
    let mut rows = vectors.to_vec();
    rows.push(space.decode(space.basis_vector(d - 1)));
    if linalg::rank(field, &rows) != rows.len() {
        return Err(Error::Construction("vectors and e_d are linearly dependent".into()));
    }
    if isotropic {
        for u in vectors {
            for v in vectors {
                if !linalg::dot(field, u, v).is_zero() {
                    return Err(Error::Construction("vectors are not mutually isotropic".into()));
                }
            }
        }
    }
    Ok(())
}

/// `{sum c_i v_i + x e_d : c_i in coeffs[i], x in last}`.
fn lattice(space: &Arc<Space>, vectors: &[Vec<Fq>], coeffs: &[Vec<Fq>], last: &[Fq]) -> PointSet {
    let field = space.field();
    let mut pts = vec![vec![Fq::ZERO; space.dim()]];
    for (v, cs) in vectors.iter().zip(coeffs) {
        let mut next = Vec::with_capacity(pts.len() * cs.len());
        for p in &pts {
            for &c in cs {
                next.push(p.iter().zip(v).map(|(&a, &b)| field.add(a, field.mul(c, b))).collect::<Vec<_>>());
            }
        }
        pts = next;
    }
    let ed = space.basis_vector(space.dim() - 1);
    let idx = pts.iter().flat_map(|p| {
        let base = space.encode(p);
        last.iter().map(move |&x| space.add(base, space.scale(x, ed)))
    });
    PointSet::from_indices(space, idx.collect::<Vec<_>>()).expect("lattice points are in range")
}

/// `A = B = F_q v_1 + ... + F_q v_k + X e_d` for mutually isotropic `v_i`.
pub fn build_ap_lattice_sets(space: &Arc<Space>, x: &[Fq], vectors: &[Vec<Fq>]) -> Result<(PointSet, PointSet)> {
    check_vectors(space, vectors, true)?;
    let all: Vec<Fq> = space.field().elements().collect();
    let coeffs = vec![all; vectors.len()];
    let a = lattice(space, vectors, &coeffs, x);
    Ok((a.clone(), a))
}

/// `A = X v_1 + ... + X v_k` and `B = A + X e_d`. Only independence of the
/// `v_i` and `e_d` is needed for `|A - gB| <= |A||B| = |X|^d`.
pub fn build_small_large_sets(space: &Arc<Space>, x: &[Fq], vectors: &[Vec<Fq>]) -> Result<(PointSet, PointSet)> {
    check_vectors(space, vectors, false)?;
    let coeffs = vec![x.to_vec(); vectors.len()];
    let a = lattice(space, vectors, &coeffs, &[Fq::ZERO]);
    let b = lattice(space, vectors, &coeffs, x);
    Ok((a, b))
}

/// `A = F_q^{(d-1)/2} x {0}^{(d-1)/2} x X` and `B = g0^{-1} A`, so that
/// `A - g0 B = A - A` has at most `q^{d-1} |X - X|` points.
pub fn build_example2(space: &Arc<Space>, g0: &OrthMatrix, x: &[Fq]) -> Result<(PointSet, PointSet)> {
    let d = space.dim();
    if d.is_multiple_of(2) {
        return Err(Error::Construction(format!("the subspace example needs odd d, got {d}")));
    }
    if g0.dim() != d {
        return Err(Error::Shape("matrix dimension differs from the space".into()));
    }
    let k = (d - 1) / 2;
    let a = PointSet::from_predicate(space, |i| {
        let v = space.decode(i);
        v[k..d - 1].iter().all(|c| c.is_zero()) && x.contains(&v[d - 1])
    });
    let b = a.apply_matrix(&g0.transpose())?;
    Ok((a, b))
}

/// Planar sets over `F_{p^2}` whose projections are disjoint on `lines`.
#[derive(Clone, Debug)]
pub struct ProjectionSharpness {
    pub a: PointSet,
    pub b: PointSet,
    /// Union of the chosen cosets of `F_p`.
    pub a1: Vec<Fq>,
    pub lines: Vec<Subspace>,
}

impl ProjectionSharpness {
    /// `|A_1| / q`.
    pub fn c(&self) -> f64 {
        self.a1.len() as f64 / self.a.space().q() as f64
    }

    /// Subspaces of `lines` where `pi_W(A) ∩ pi_W(B)` is nonempty, found by
    /// projecting both sets.
    pub fn violations(&self) -> Result<Vec<Subspace>> {
        let sweep = projections::sweep_subspaces(&self.a, &self.b, &self.lines, 1)?;
        Ok(sweep.rows.into_iter().filter(|r| r.common > 0).map(|r| r.subspace).collect())
    }
}

/// `A = {(a y, y) : a in A_1, y in F_p^*}`, the preimage of `A_1 x F_p` under
/// `(x, y) -> (x/y, 1/y)`, and `B = F_p x {0}`, with `A_1` the union of
/// `cosets` cosets of `F_p`. `x - y` for `x in A`, `y in B` is a multiple of
/// `(c, 1)` only for `c in A_1`, so `lines` keeps every `W` whose `W^perp` is
/// not such a direction.
pub fn build_projection_sharpness(space: &Arc<Space>, cosets: usize) -> Result<ProjectionSharpness> {
    let field = space.field();
    if field.ell() != 2 || space.dim() != 2 {
        return Err(Error::Construction("needs the plane over F_{p^2}".into()));
    }
    let p = field.p();
    if cosets == 0 || cosets >= p as usize {
        return Err(Error::Construction(format!("need 0 < cosets < p = {p}")));
    }
    let a1: Vec<Fq> = (0..cosets as u32).flat_map(|j| (0..p).map(move |i| (i, j))).map(|(i, j)| field.from_parts(i, j)).collect();
    let fp_star: Vec<Fq> = (1..p).map(|i| field.from_parts(i, 0)).collect();
    let a_pts: Vec<Vec<Fq>> = a1.iter().flat_map(|&a| fp_star.iter().map(move |&y| vec![field.mul(a, y), y])).collect();
    let a = PointSet::from_vectors(space, &a_pts)?;
    let b_pts: Vec<Vec<Fq>> = (0..p).map(|i| vec![field.from_parts(i, 0), Fq::ZERO]).collect();
    let b = PointSet::from_vectors(space, &b_pts)?;
    let bad: Vec<Subspace> = a1
        .iter()
        .map(|&c| Subspace::new(field, 2, &[vec![c, Fq::ONE]]))
        .collect::<Result<_>>()?;
    let lines = projections::enumerate_grassmannian(field, 2, 1)?
        .into_iter()
        .filter(|w| !bad.contains(&projections::orthogonal_complement(field, w)))
        .collect();
    Ok(ProjectionSharpness { a, b, a1, lines })
}

/// The named constructions, with their parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ConstructionSpec {
    /// Subspace example with `|X| = x_len`, rotated by the `g_index`-th group element.
    SubspaceExample { x_len: usize, g_index: usize },
    /// `A = B = span(v_i) + X e_d`.
    ApLattice { x_len: usize },
    /// `span(v_i)` alone.
    IsotropicLattice,
    SmallLarge { x_len: usize },
    ProjectionSharpness { cosets: usize },
}

impl ConstructionSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ConstructionSpec::SubspaceExample { .. } => "subspace_example",
            ConstructionSpec::ApLattice { .. } => "ap_lattice",
            ConstructionSpec::IsotropicLattice => "isotropic_lattice",
            ConstructionSpec::SmallLarge { .. } => "small_A_large_B",
            ConstructionSpec::ProjectionSharpness { .. } => "projection_sharpness",
        }
    }

    /// Parses `kind` with an optional integer parameter (`x_len` or `cosets`).
    pub fn parse(kind: &str, param: Option<usize>, g_index: usize) -> Result<ConstructionSpec> {
        let need = |name: &str| param.ok_or_else(|| Error::Domain(format!("{kind} needs {name}")));
        Ok(match kind {
            "subspace_example" => ConstructionSpec::SubspaceExample { x_len: need("x_len")?, g_index },
            "ap_lattice" => ConstructionSpec::ApLattice { x_len: need("x_len")? },
            "isotropic_lattice" => ConstructionSpec::IsotropicLattice,
            "small_A_large_B" => ConstructionSpec::SmallLarge { x_len: need("x_len")? },
            "projection_sharpness" => ConstructionSpec::ProjectionSharpness { cosets: need("cosets")? },
            _ => return Err(Error::Domain(format!("unknown construction {kind}"))),
        })
    }
}

/// Isotropic vectors in `F_q^{d-1} x {0}` for the lattice constructions.
pub fn lattice_vectors(space: &Space) -> Result<Vec<Vec<Fq>>> {
    let d = space.dim();
    if d.is_multiple_of(2) {
        return Err(Error::Construction(format!("lattice constructions need odd d, got {d}")));
    }
    match mutually_isotropic_vectors(space.field(), d - 1, (d - 1) / 2) {
        Isotropic::Found(v) => Ok(pad(&v, d)),
        Isotropic::Infeasible { candidates } => Err(Error::Construction(format!(
            "no {} mutually isotropic vectors in F_{}^{} ({candidates} isotropic directions)",
            (d - 1) / 2,
            space.q(),
            d - 1
        ))),
    }
}
