use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseMatrix;

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), n);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn from_sparse(s: &SparseMatrix) -> Self {
        let mut m = Self::zeros(s.rows(), s.cols());
        for (r, c, v) in s.triplets() {
            m[(r, c)] = BigInt::from(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for c in 0..self.cols {
                self.data.swap(i * self.cols + c, j * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + i, r * self.cols + j);
            }
        }
    }

    /// `row_i += k * row_j`.
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(j, c)] * k;
            if !v.is_zero() {
                self[(i, c)] += v;
            }
        }
    }

    /// `col_i += k * col_j`.
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, j)] * k;
            if !v.is_zero() {
                self[(r, i)] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, c)]);
            self[(i, c)] = v;
        }
    }

    fn negate_col(&mut self, i: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self[(r, i)]);
            self[(r, i)] = v;
        }
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

/// `M = U * D * V` with `U`, `V` unimodular and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries of `D` (including trailing zeros).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Records unimodular operations applied to `D` so that `M = U D V` stays true.
struct Tracker<'a> {
    d: &'a mut IntMatrix,
    u: Option<&'a mut IntMatrix>,
    v: Option<&'a mut IntMatrix>,
}

impl Tracker<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        if let Some(u) = self.u.as_deref_mut() {
            u.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        if let Some(v) = self.v.as_deref_mut() {
            v.swap_rows(i, j);
        }
    }

    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_row(i, j, k);
        if let Some(u) = self.u.as_deref_mut() {
            u.add_col(j, i, &-k);
        }
    }

    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        self.d.add_col(i, j, k);
        if let Some(v) = self.v.as_deref_mut() {
            v.add_row(j, i, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(u) = self.u.as_deref_mut() {
            u.negate_col(i);
        }
    }
}

fn diagonalize(t: &mut Tracker<'_>) {
    let (m, n) = (t.d.rows, t.d.cols);
    let mut s = 0;
    while s < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for r in s..m {
            for c in s..n {
                let x = &t.d[(r, c)];
                if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < t.d[(br, bc)].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((r, c)) = best else { break };
        t.swap_rows(s, r);
        t.swap_cols(s, c);
        loop {
            let mut dirty = false;
            for r in s + 1..m {
                if !t.d[(r, s)].is_zero() {
                    let q = &t.d[(r, s)] / &t.d[(s, s)];
                    t.add_row(r, s, &-q);
                    dirty |= !t.d[(r, s)].is_zero();
                }
            }
            for c in s + 1..n {
                if !t.d[(s, c)].is_zero() {
                    let q = &t.d[(s, c)] / &t.d[(s, s)];
                    t.add_col(c, s, &-q);
                    dirty |= !t.d[(s, c)].is_zero();
                }
            }
            if dirty {
                // move a smaller remainder into the pivot
                let mut best = (s, s);
                for r in s + 1..m {
                    let x = &t.d[(r, s)];
                    if !x.is_zero() && x.abs() < t.d[best].abs() {
                        best = (r, s);
                    }
                }
                for c in s + 1..n {
                    let x = &t.d[(s, c)];
                    if !x.is_zero() && x.abs() < t.d[best].abs() {
                        best = (s, c);
                    }
                }
                t.swap_rows(s, best.0);
                t.swap_cols(s, best.1);
                continue;
            }
            let p = t.d[(s, s)].clone();
            let bad = (s + 1..m).find(|&r| (s + 1..n).any(|c| !(&t.d[(r, c)] % &p).is_zero()));
            match bad {
                Some(r) => t.add_row(s, r, &BigInt::one()),
                None => break,
            }
        }
        if t.d[(s, s)].is_negative() {
            t.negate_row(s);
        }
        s += 1;
    }
}

/// Full Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    diagonalize(&mut Tracker { d: &mut d, u: Some(&mut u), v: Some(&mut v) });
    SmithDecomposition { u, d, v }
}

/// Nonzero invariant factors (positive, ascending by divisibility).
///
/// Unit pivots are eliminated sparsely first; the remainder goes through the
/// dense algorithm.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let (units, rest) = eliminate_units(m);
    let mut d = IntMatrix::zeros(rest.len(), 0);
    if !rest.is_empty() {
        let cols: BTreeSet<usize> = rest.iter().flat_map(|r| r.keys().copied()).collect();
        let col_index: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        d = IntMatrix::zeros(rest.len(), cols.len());
        for (r, row) in rest.iter().enumerate() {
            for (c, v) in row {
                d[(r, col_index[c])] = v.clone();
            }
        }
    }
    diagonalize(&mut Tracker { d: &mut d, u: None, v: None });
    let mut out = vec![BigInt::one(); units];
    out.extend((0..d.rows.min(d.cols)).map(|i| d[(i, i)].clone()).filter(|x| !x.is_zero()));
    out
}

/// Repeatedly pivots on entries equal to ±1. Returns the number of pivots and
/// the nonzero rows that remain.
fn eliminate_units(m: &SparseMatrix) -> (usize, Vec<BTreeMap<usize, BigInt>>) {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows()];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (r, c, v) in m.triplets() {
        rows[r].insert(c, BigInt::from(v));
        col_rows[c].insert(r);
    }
    let mut alive: BTreeSet<usize> = (0..m.rows()).filter(|&r| !rows[r].is_empty()).collect();
    let mut units = 0;
    loop {
        // unit pivot with the sparsest column, then the sparsest row
        let mut pick: Option<(usize, usize, usize)> = None;
        for &r in &alive {
            for (&c, v) in &rows[r] {
                if v.abs().is_one() {
                    let cost = (col_rows[c].len() - 1) * (rows[r].len() - 1);
                    if pick.is_none_or(|(_, _, best)| cost < best) {
                        pick = Some((r, c, cost));
                    }
                }
            }
            if pick.is_some_and(|(_, _, cost)| cost == 0) {
                break;
            }
        }
        let Some((pr, pc, _)) = pick else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let sign = pivot_row[&pc].clone();
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        alive.remove(&pr);
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            // row_r -= (x * sign) * pivot_row
            let q = &rows[r][&pc] * &sign;
            for (&c, v) in &pivot_row {
                let e = rows[r].entry(c).or_insert_with(BigInt::zero);
                *e -= &q * v;
                if e.is_zero() {
                    rows[r].remove(&c);
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                }
            }
            if rows[r].is_empty() {
                alive.remove(&r);
            }
        }
        // the pivot column is now empty apart from the removed pivot row
        units += 1;
    }
    (units, alive.into_iter().map(|r| std::mem::take(&mut rows[r])).collect())
}
