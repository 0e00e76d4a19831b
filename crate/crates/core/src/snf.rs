//! Smith normal form over the integers, with transforms.
//!
//! Entries are arbitrary precision; elimination can blow up entry sizes
//! well past machine words even on small inputs.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {r}");
            for (c, v) in row.iter().enumerate() {
                m[(r, c)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            self[(dst, c)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

/// Result of [`smith_normal_form`]: `left · m · right = diag(invariants, 0…)`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    pub invariants: Vec<BigInt>,
    /// Number of columns minus rank: the free rank of the cokernel `Z^cols / rowspace`.
    pub free_rank: usize,
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Inverse of `right`.
    pub right_inverse: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Torsion coefficients of the cokernel (the invariants greater than one).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariants
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut right_inv = IntMatrix::identity(cols);

    // Column operations on `right` mirror onto `right_inv` as inverse row
    // operations applied in reverse composition.
    let col_swap = |a: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, i: usize, j: usize| {
        a.swap_cols(i, j);
        r.swap_cols(i, j);
        ri.swap_rows(i, j);
    };
    let col_add = |a: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        a.add_col(dst, src, k);
        r.add_col(dst, src, k);
        // (R·E)⁻¹ = E⁻¹·R⁻¹ with E⁻¹ adding -k·row[dst] to row[src].
        let nk = -k;
        ri.add_row(src, dst, &nk);
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let v = &a[(r, c)];
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if a[(br, bc)].abs() <= v.abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap_rows(t, pr);
        left.swap_rows(t, pr);
        col_swap(&mut a, &mut right, &mut right_inv, t, pc);

        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if a[(r, t)].is_zero() {
                    continue;
                }
                let q = a[(r, t)].div_floor(&a[(t, t)]);
                let nq = -q;
                a.add_row(r, t, &nq);
                left.add_row(r, t, &nq);
                if !a[(r, t)].is_zero() {
                    a.swap_rows(t, r);
                    left.swap_rows(t, r);
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if a[(t, c)].is_zero() {
                    continue;
                }
                let q = a[(t, c)].div_floor(&a[(t, t)]);
                let nq = -q;
                col_add(&mut a, &mut right, &mut right_inv, c, t, &nq);
                if !a[(t, c)].is_zero() {
                    col_swap(&mut a, &mut right, &mut right_inv, t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !a[(r, c)].is_multiple_of(&a[(t, t)]) {
                        offender = Some(r);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    a.add_row(t, r, &one);
                    left.add_row(t, r, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }

    let invariants: Vec<BigInt> = (0..rows.min(cols))
        .map(|i| a[(i, i)].clone())
        .filter(|d| !d.is_zero())
        .collect();
    let free_rank = cols - invariants.len();
    SmithForm {
        invariants,
        free_rank,
        left,
        right,
        right_inverse: right_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_transforms(m: &IntMatrix, s: &SmithForm) {
        let d = s.left.mul(m).mul(&s.right);
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let expect = if r == c && r < s.invariants.len() {
                    s.invariants[r].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d[(r, c)], expect, "entry ({r},{c}) of {d:?}");
            }
        }
        assert_eq!(s.right.mul(&s.right_inverse), IntMatrix::identity(m.cols()));
    }

    #[test]
    fn diag_two_three() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariants, ints(&[1, 6]));
        assert_eq!(s.free_rank, 0);
        check_transforms(&m, &s);
    }

    #[test]
    fn zero_row() {
        let m = IntMatrix::from_rows(&[vec![0, 0]], 2);
        let s = smith_normal_form(&m);
        assert!(s.invariants.is_empty());
        assert_eq!(s.free_rank, 2);
    }

    #[test]
    fn single_generator_relator() {
        let m = IntMatrix::from_rows(&[vec![1, 0]], 2);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariants, ints(&[1]));
        assert_eq!(s.free_rank, 1);
        check_transforms(&m, &s);
    }

    #[test]
    fn no_rows() {
        let m = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&m);
        assert_eq!(s.free_rank, 3);
    }

    #[test]
    fn dense_example() {
        let m = IntMatrix::from_rows(
            &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]],
            3,
        );
        let s = smith_normal_form(&m);
        assert_eq!(s.invariants, ints(&[2, 6, 12]));
        check_transforms(&m, &s);
    }
}
