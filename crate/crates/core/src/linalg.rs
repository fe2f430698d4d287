//! Dense Gaussian elimination over `F_q`. Rows are `Vec<Fq>`.

use crate::field::{FieldContext, Fq};

/// Brings `rows` to reduced row-echelon form in place, drops zero rows, and
/// returns the pivot columns.
pub fn rref(field: &FieldContext, rows: &mut Vec<Vec<Fq>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(factor, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &FieldContext, rows: &[Vec<Fq>]) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m).len()
}

/// Basis of `{ x : row . x = 0 for every row }` in `F_q^ncols`.
pub fn null_space(field: &FieldContext, rows: &[Vec<Fq>], ncols: usize) -> Vec<Vec<Fq>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Fq::ZERO; ncols];
        v[free] = Fq::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Reduces `v` against an RREF basis so it vanishes on every pivot column.
/// Two vectors have the same reduction iff they differ by an element of the span.
pub fn reduce(field: &FieldContext, basis: &[Vec<Fq>], pivots: &[usize], v: &mut [Fq]) {
    for (row, &pc) in basis.iter().zip(pivots) {
        let c = v[pc];
        if c.is_zero() {
            continue;
        }
        for (x, &b) in v.iter_mut().zip(row) {
            *x = field.sub(*x, field.mul(c, b));
        }
    }
}

pub fn in_span(field: &FieldContext, basis: &[Vec<Fq>], pivots: &[usize], v: &[Fq]) -> bool {
    let mut w = v.to_vec();
    reduce(field, basis, pivots, &mut w);
    w.iter().all(|x| x.is_zero())
}

pub fn dot(field: &FieldContext, a: &[Fq], b: &[Fq]) -> Fq {
    a.iter().zip(b).fold(Fq::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u32]) -> Vec<Fq> {
        xs.iter().map(|&x| Fq(x)).collect()
    }

    #[test]
    fn rref_and_rank() {
        let f = FieldContext::new(5, 1).unwrap();
        let mut m = vec![v(&[1, 2, 3]), v(&[2, 4, 1]), v(&[0, 1, 1])];
        let piv = rref(&f, &mut m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(m, vec![v(&[1, 0, 1]), v(&[0, 1, 1])]);
        assert_eq!(rank(&f, &[v(&[0, 0, 0])]), 0);
    }

    #[test]
    fn null_space_is_orthogonal() {
        let f = FieldContext::new(7, 1).unwrap();
        let rows = vec![v(&[1, 2, 3, 4]), v(&[0, 1, 5, 6])];
        let ns = null_space(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for n in &ns {
            for r in &rows {
                assert!(dot(&f, n, r).is_zero());
            }
        }
        // Full-rank null space of the empty system.
        assert_eq!(null_space(&f, &[], 3).len(), 3);
    }

    #[test]
    fn reduction_detects_span() {
        let f = FieldContext::new(3, 1).unwrap();
        let mut b = vec![v(&[1, 1, 0])];
        let piv = rref(&f, &mut b);
        assert!(in_span(&f, &b, &piv, &v(&[2, 2, 0])));
        assert!(!in_span(&f, &b, &piv, &v(&[1, 0, 0])));
    }
}
