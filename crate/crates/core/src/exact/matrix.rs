use std::fmt;

use super::{FieldError, RatK};

/// Dense matrix over Q(k), row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatK {
    rows: usize,
    cols: usize,
    data: Vec<RatK>,
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<RatK>),
    NoSolution,
    /// One particular solution plus a basis of the kernel.
    Underdetermined { particular: Vec<RatK>, kernel: Vec<Vec<RatK>> },
}

impl MatK {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatK { rows, cols, data: vec![RatK::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatK::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = RatK::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatK>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        MatK { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[RatK] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> MatK {
        let mut t = MatK::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &MatK) -> Result<MatK, FieldError> {
        if self.cols != o.rows {
            return Err(FieldError::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = MatK::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[RatK]) -> Result<Vec<RatK>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::Shape(format!("{}x{} times vector of {}", self.rows, self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = RatK::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn det(&self) -> Result<RatK, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::Shape("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = RatK::one();
        for col in 0..n {
            let Some(p) = m.pick_pivot(col, col) else {
                return Ok(RatK::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = &det * &piv;
            let inv = piv.inv()?;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &inv;
                m.sub_row_multiple(r, col, &f, col);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<MatK, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = MatK::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = RatK::one();
        }
        let pivots = aug.rref_in_place(n);
        if pivots.len() < n {
            return Err(FieldError::Singular);
        }
        let mut inv = MatK::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place(self.cols).len()
    }

    /// Nonzero rows of the reduced row echelon form.
    pub fn row_basis(&self) -> Vec<Vec<RatK>> {
        let mut m = self.clone();
        let r = m.rref_in_place(self.cols).len();
        (0..r).map(|i| m.row(i).to_vec()).collect()
    }

    /// Basis of the right kernel.
    pub fn kernel(&self) -> Vec<Vec<RatK>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        kernel_from_rref(&m, &pivots, self.cols)
    }

    pub fn solve(&self, b: &[RatK]) -> Result<Solution, FieldError> {
        if b.len() != self.rows {
            return Err(FieldError::Shape(format!("{} rows but right-hand side of {}", self.rows, b.len())));
        }
        let c = self.cols;
        let mut aug = MatK::zeros(self.rows, c + 1);
        for i in 0..self.rows {
            for j in 0..c {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, c)] = b[i].clone();
        }
        let pivots = aug.rref_in_place(c);
        for i in pivots.len()..self.rows {
            if !aug[(i, c)].is_zero() {
                return Ok(Solution::NoSolution);
            }
        }
        let mut x = vec![RatK::zero(); c];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(i, c)].clone();
        }
        if pivots.len() == c {
            Ok(Solution::Unique(x))
        } else {
            Ok(Solution::Underdetermined { particular: x, kernel: kernel_from_rref(&aug, &pivots, c) })
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[r] -= f * row[p], for columns from `from` on.
    fn sub_row_multiple(&mut self, r: usize, p: usize, f: &RatK, from: usize) {
        for j in from..self.cols {
            let pv = &self.data[p * self.cols + j];
            if pv.is_zero() {
                continue;
            }
            let t = f * pv;
            let cell = &mut self.data[r * self.cols + j];
            *cell = &*cell - &t;
        }
    }

    fn pick_pivot(&self, col: usize, start: usize) -> Option<usize> {
        (start..self.rows)
            .filter(|&r| !self[(r, col)].is_zero())
            .min_by_key(|&r| {
                let e = &self[(r, col)];
                e.num().degree().unwrap_or(0) + e.den().degree().unwrap_or(0)
            })
    }

    /// Reduced row echelon form restricted to the first `ncols` columns as
    /// pivot candidates. Returns the pivot columns.
    fn rref_in_place(&mut self, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..ncols {
            if row >= self.rows {
                break;
            }
            let Some(p) = self.pick_pivot(col, row) else { continue };
            self.swap_rows(p, row);
            let inv = self[(row, col)].inv().expect("nonzero pivot");
            for j in col..self.cols {
                let v = &self.data[row * self.cols + j];
                if !v.is_zero() {
                    self.data[row * self.cols + j] = v * &inv;
                }
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let f = self[(r, col)].clone();
                self.sub_row_multiple(r, row, &f, col);
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

fn kernel_from_rref(m: &MatK, pivots: &[usize], ncols: usize) -> Vec<Vec<RatK>> {
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RatK::zero(); ncols];
        v[free] = RatK::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[(i, free)];
        }
        out.push(v);
    }
    out
}

impl std::ops::Index<(usize, usize)> for MatK {
    type Output = RatK;
    fn index(&self, (i, j): (usize, usize)) -> &RatK {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatK {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatK {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for MatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatK {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> MatK {
        MatK::from_rows(rows.iter().map(|r| r.iter().map(|x| RatK::from_i64(*x)).collect()).collect())
    }

    #[test]
    fn determinant_over_qk() {
        let a = MatK::from_rows(vec![vec![RatK::k(), RatK::one()], vec![RatK::one(), RatK::k()]]);
        assert_eq!(a.det().unwrap(), &(&RatK::k() * &RatK::k()) - &RatK::one());
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), MatK::identity(2));
    }

    #[test]
    fn solution_kinds() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(a.solve(&[RatK::one(), RatK::one()]).unwrap(), Solution::NoSolution);
        match a.solve(&[RatK::one(), RatK::from_i64(2)]).unwrap() {
            Solution::Underdetermined { particular, kernel } => {
                assert_eq!(a.mul_vec(&particular).unwrap(), vec![RatK::one(), RatK::from_i64(2)]);
                assert_eq!(kernel.len(), 1);
                assert!(a.mul_vec(&kernel[0]).unwrap().iter().all(RatK::is_zero));
            }
            other => panic!("{:?}", other),
        }
        assert_eq!(m(&[&[2, 0], &[0, 4]]).solve(&[RatK::one(), RatK::one()]).unwrap(), Solution::Unique(vec![RatK::frac(1, 2), RatK::frac(1, 4)]));
        assert!(a.solve(&[RatK::one()]).is_err());
        assert!(a.inverse().is_err());
    }

    proptest! {
        #[test]
        fn rank_plus_nullity(entries in prop::collection::vec(-3i64..=3, 12)) {
            let a = MatK::from_rows(entries.chunks(4).map(|r| r.iter().map(|x| RatK::from_i64(*x)).collect()).collect());
            prop_assert_eq!(a.rank() + a.kernel().len(), 4);
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn det_is_multiplicative(x in prop::collection::vec(-3i64..=3, 9), y in prop::collection::vec(-3i64..=3, 9)) {
            let mk = |v: &[i64]| MatK::from_rows(v.chunks(3).map(|r| r.iter().map(|x| &RatK::from_i64(*x) + &RatK::k()).collect()).collect());
            let (a, b) = (mk(&x), mk(&y));
            prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }
    }
}
