//! Row reduction over GF(q).

use crate::gf::{Elem, FieldTable};

/// Reduced row-echelon form of `rows`, zero rows dropped, plus pivot columns.
pub fn rref(f: &FieldTable, rows: &[Vec<Elem>]) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, pr);
        let s = f.recip(m[r][c]);
        for x in m[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..ncols {
                    let t = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(f: &FieldTable, rows: &[Vec<Elem>]) -> usize {
    rref(f, rows).0.len()
}

/// Basis of `{x : r·x = 0 for every row r}` in `ncols` coordinates.
pub fn null_space(f: &FieldTable, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let (red, pivots) = rref(f, rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; ncols];
            v[fc] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// Residue of `v` after elimination against an RREF basis.
pub fn reduce(f: &FieldTable, basis: &[Vec<Elem>], pivots: &[usize], v: &[Elem]) -> Vec<Elem> {
    let mut w = v.to_vec();
    for (row, &pc) in basis.iter().zip(pivots) {
        let c = w[pc];
        if c != 0 {
            for (x, &y) in w.iter_mut().zip(row) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
    }
    w
}

pub fn dot(f: &FieldTable, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `Σ cᵢ·rowsᵢ`.
pub fn combine(f: &FieldTable, coeffs: &[Elem], rows: &[Vec<Elem>], len: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    for (&c, row) in coeffs.iter().zip(rows) {
        if c != 0 {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
    }
    v
}

/// Row vector times matrix: `(v·M)_j = Σ_i v_i M_ij`.
pub fn vec_mat(f: &FieldTable, v: &[Elem], m: &[Vec<Elem>]) -> Vec<Elem> {
    combine(f, v, m, m.first().map_or(0, Vec::len))
}

pub fn mat_mul(f: &FieldTable, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    a.iter().map(|row| vec_mat(f, row, b)).collect()
}

/// Inverse of a square matrix, if it is invertible.
pub fn invert(f: &FieldTable, a: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = a.len();
    let aug: Vec<Vec<Elem>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| (i == j) as Elem));
            r
        })
        .collect();
    let (red, pivots) = rref(f, &aug);
    if red.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn identity(n: usize) -> Vec<Vec<Elem>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as Elem).collect()).collect()
}
