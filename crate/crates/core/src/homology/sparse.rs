use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Sparse integer matrix stored column by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![BTreeMap::new(); cols] }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let n = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), n);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.add(r, c, v);
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

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.columns[c].get(&r).copied().unwrap_or(0)
    }

    /// Adds `v` to entry `(r, c)`, dropping it if it becomes zero.
    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of bounds");
        if v == 0 {
            return;
        }
        let e = self.columns[c].entry(r).or_insert(0);
        *e += v;
        if *e == 0 {
            self.columns[c].remove(&r);
        }
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.columns[c].iter().map(|(&r, &v)| (r, v))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// Nonzero entries as `(row, col, value)`, column-major.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, &v)| (r, c, v)))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.cols, self.rows);
        for (r, c, v) in self.triplets() {
            t.add(c, r, v);
        }
        t
    }

    /// `self * rhs`, failing on shape mismatch or `i64` overflow.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::RankMismatch { expected: self.cols, actual: rhs.rows });
        }
        let mut out = SparseMatrix::zeros(self.rows, rhs.cols);
        for (c, col) in rhs.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (&k, &v) in col {
                for (&r, &u) in &self.columns[k] {
                    let p = u.checked_mul(v).ok_or_else(|| Error::Overflow("sparse product".into()))?;
                    let e = acc.entry(r).or_insert(0);
                    *e = e.checked_add(p).ok_or_else(|| Error::Overflow("sparse product".into()))?;
                }
            }
            acc.retain(|_, v| *v != 0);
            out.columns[c] = acc;
        }
        Ok(out)
    }

    /// Sparse triplet text: a `rows cols nnz` header then one `row col value` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.triplets() {
            s.push_str(&format!("{r} {c} {v}\n"));
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<SparseMatrix> {
        let bad = |msg: &str| Error::Unsupported(format!("malformed triplet text: {msg}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad("header")))
            .collect::<Result<_>>()?;
        let [rows, cols, nnz] = header[..] else { return Err(bad("header")) };
        let mut m = SparseMatrix::zeros(rows, cols);
        let mut count = 0;
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let [r, c, v] = f[..] else { return Err(bad(line)) };
            let (r, c): (usize, usize) = (r.parse().map_err(|_| bad(line))?, c.parse().map_err(|_| bad(line))?);
            let v: i64 = v.parse().map_err(|_| bad(line))?;
            if r >= rows || c >= cols {
                return Err(bad(line));
            }
            m.add(r, c, v);
            count += 1;
        }
        if count != nnz {
            return Err(bad("entry count"));
        }
        Ok(m)
    }
}
