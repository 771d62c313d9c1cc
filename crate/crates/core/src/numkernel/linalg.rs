use rayon::prelude::*;
use rug::{Complex, Float};

use super::poly::largest_index;
use super::precision::{cabs, cmag2, PrecisionCtx};
use crate::error::{Error, Result};

/// Dense complex matrix stored by rows.
#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: Vec<Vec<Complex>>,
    cols: usize,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        CMatrix {
            rows: vec![vec![Complex::new(prec); cols]; rows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(CMatrix { rows, cols })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Complex {
        &self.rows[i][j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Complex {
        &mut self.rows[i][j]
    }

    /// Max row sum of moduli.
    pub fn norm_inf(&self) -> Float {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .fold(Float::with_val(64, 0), |acc, c| acc + cabs(c))
            })
            .fold(Float::with_val(64, 0), |a, b| if b > a { b } else { a })
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        let prec = v.first().map_or(64, |c| c.prec().0);
        self.rows
            .par_iter()
            .map(|r| {
                let mut s = Complex::new(prec);
                for (a, b) in r.iter().zip(v) {
                    s += a * b;
                }
                s
            })
            .collect()
    }

    /// Scales every row so its largest entry has modulus one; zero rows are
    /// left alone. Does not change the null space.
    pub fn equilibrate_rows(&mut self) {
        self.rows.par_iter_mut().for_each(|r| {
            if let Some(i) = largest_index(r) {
                let s = Float::with_val(r[i].prec().0, r[i].abs_ref());
                for c in r.iter_mut() {
                    *c /= &s;
                }
            }
        });
    }
}

/// Result of a homogeneous solve.
#[derive(Clone, Debug)]
pub struct NullSpace {
    /// Null vector normalized so its largest-modulus entry equals one.
    pub vector: Vec<Complex>,
    /// Numerical dimension of the solution space (`cols - rank`).
    pub dim: usize,
    /// `||M v||_inf / (||M||_inf ||v||_inf)`.
    pub residual: Float,
}

impl NullSpace {
    pub fn is_unique(&self) -> bool {
        self.dim == 1
    }
}

/// Nontrivial solution of `M v = 0` by full-pivot Gaussian elimination.
///
/// Pivots with modulus at most `tol * max|M_ij|` count as zero; the number of
/// accepted pivots is the numerical rank. The returned vector sets the first
/// free (non-pivot) variable to one and the rest to zero, then normalizes.
/// Pivot ties are resolved by the lowest row, then lowest column.
pub fn nullspace_vector(m: &CMatrix, ctx: &PrecisionCtx) -> Result<NullSpace> {
    let nr = m.nrows();
    let nc = m.ncols();
    if nc == 0 {
        return Err(Error::InvalidInput("matrix has no columns".into()));
    }
    let prec = ctx.bits();
    let mut a: Vec<Vec<Complex>> = m
        .rows
        .iter()
        .map(|r| r.iter().map(|c| Complex::with_val(prec, c)).collect())
        .collect();
    let mut perm: Vec<usize> = (0..nc).collect();

    let max_entry = a
        .iter()
        .flat_map(|r| r.iter())
        .map(cmag2)
        .fold(Float::with_val(32, 0), |x, y| if y > x { y } else { x });
    let tol2 = Float::with_val(32, ctx.tol() * ctx.tol());
    let thresh = Float::with_val(32, &max_entry * &tol2);

    let steps = nr.min(nc);
    let mut rank = 0;
    for s in 0..steps {
        let mut best: Option<(usize, usize, Float)> = None;
        for (i, row) in a.iter().enumerate().skip(s) {
            for (j, c) in row.iter().enumerate().skip(s) {
                let mag = cmag2(c);
                if best.as_ref().is_none_or(|(_, _, b)| mag > *b) {
                    best = Some((i, j, mag));
                }
            }
        }
        let (pi, pj, pmag) = best.expect("non-empty trailing block");
        if pmag <= thresh || pmag.is_zero() {
            break;
        }
        a.swap(s, pi);
        if pj != s {
            for row in a.iter_mut() {
                row.swap(s, pj);
            }
            perm.swap(s, pj);
        }
        let (top, bottom) = a.split_at_mut(s + 1);
        let pivot_row = &top[s];
        let inv = Complex::with_val(prec, pivot_row[s].recip_ref());
        bottom.par_iter_mut().for_each(|row| {
            if row[s].is_zero() {
                return;
            }
            let f = Complex::with_val(prec, &row[s] * &inv);
            for k in (s + 1)..nc {
                row[k] -= &f * &pivot_row[k];
            }
            row[s] = Complex::new(prec);
        });
        rank = s + 1;
    }

    let dim = nc - rank;
    // y in permuted coordinates
    let mut y = vec![Complex::new(prec); nc];
    y[rank] = Complex::with_val(prec, 1);
    for i in (0..rank).rev() {
        let mut s = Complex::new(prec);
        for k in (i + 1)..nc {
            if !y[k].is_zero() {
                s += &a[i][k] * &y[k];
            }
        }
        s = -s;
        s /= &a[i][i];
        y[i] = s;
    }
    let mut v = vec![Complex::new(prec); nc];
    for (k, yk) in y.into_iter().enumerate() {
        v[perm[k]] = yk;
    }
    let big = largest_index(&v).expect("null vector has a unit entry");
    let scale = Complex::with_val(prec, v[big].recip_ref());
    for c in v.iter_mut() {
        *c *= &scale;
    }
    v[big] = Complex::with_val(prec, 1);

    let mv = m.mul_vec(&v);
    let num = mv
        .iter()
        .map(cabs)
        .fold(Float::with_val(64, 0), |x, y| if y > x { y } else { x });
    let den = m.norm_inf();
    let residual = if den.is_zero() {
        Float::with_val(64, 0)
    } else {
        num / den
    };
    Ok(NullSpace {
        vector: v,
        dim,
        residual,
    })
}
