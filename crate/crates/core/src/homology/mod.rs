//! Integral homology of finite chain complexes via Smith normal form.

mod snf;
mod sparse;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use snf::{invariant_factors, smith_normal_form, IntMatrix, SmithDecomposition};
pub use sparse::SparseMatrix;

/// Free modules `C_0, ..., C_n` with boundary maps `∂_k : C_k → C_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    // boundaries[k - 1] is ∂_k
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// `boundaries[k - 1]` must be a `ranks[k-1] × ranks[k]` matrix.
    pub fn new(ranks: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(Error::RankMismatch { expected: ranks.len().saturating_sub(1), actual: boundaries.len() });
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[k] || b.cols() != ranks[k + 1] {
                return Err(Error::RankMismatch { expected: ranks[k] * ranks[k + 1], actual: b.rows() * b.cols() });
            }
        }
        Ok(ChainComplex { ranks, boundaries })
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len().saturating_sub(1)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    /// `∂_k`, or `None` for `k = 0` and above the top degree.
    pub fn boundary(&self, k: usize) -> Option<&SparseMatrix> {
        k.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    /// Verifies `∂_k ∂_{k+1} = 0` for every `k`.
    pub fn check(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k])?.is_zero() {
                return Err(Error::NotAComplex { degree: k });
            }
        }
        Ok(())
    }

    pub fn is_complex(&self) -> bool {
        self.check().is_ok()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }
}

/// `H_k ≅ Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_m` with `t_1 | t_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut k = 0;
        while k < self.torsion.len() {
            let t = self.torsion[k];
            let run = self.torsion[k..].iter().take_while(|&&x| x == t).count();
            parts.push(if run == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{run}") });
            k += run;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Homology in every degree. Fails if the boundaries do not square to zero.
pub fn homology_of(complex: &ChainComplex) -> Result<Vec<HomologyGroup>> {
    complex.check()?;
    let n = complex.ranks.len();
    let factors: Vec<Vec<BigInt>> = complex.boundaries.iter().map(invariant_factors).collect();
    // rank of ∂_k, for k = 0..=n
    let rank = |k: usize| -> usize { k.checked_sub(1).and_then(|i| factors.get(i)).map_or(0, Vec::len) };
    (0..n)
        .map(|k| {
            let torsion = match factors.get(k) {
                Some(f) => f
                    .iter()
                    .filter(|d| !d.is_one())
                    .map(|d| d.to_u64().ok_or_else(|| Error::Overflow(format!("torsion coefficient {d}"))))
                    .collect::<Result<Vec<u64>>>()?,
                None => Vec::new(),
            };
            Ok(HomologyGroup { degree: k, free_rank: complex.ranks[k] - rank(k) - rank(k + 1), torsion })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> ChainComplex {
        // two vertices, two edges
        ChainComplex::new(vec![2, 2], vec![SparseMatrix::from_dense(&[vec![-1, 1], vec![1, -1]])]).unwrap()
    }

    #[test]
    fn circle_homology() {
        let h = homology_of(&circle()).unwrap();
        assert_eq!(h.iter().map(ToString::to_string).collect::<Vec<_>>(), ["Z", "Z"]);
        assert_eq!(circle().euler_characteristic(), 0);
    }

    #[test]
    fn real_projective_plane() {
        // one cell in each degree, ∂_1 = 0, ∂_2 = 2
        let c = ChainComplex::new(
            vec![1, 1, 1],
            vec![SparseMatrix::zeros(1, 1), SparseMatrix::from_dense(&[vec![2]])],
        )
        .unwrap();
        let h = homology_of(&c).unwrap();
        assert_eq!(h[0].to_string(), "Z");
        assert_eq!(h[1].torsion, vec![2]);
        assert!(h[2].is_zero());
    }

    #[test]
    fn zero_boundaries_give_full_ranks() {
        let c = ChainComplex::new(vec![3, 4, 2], vec![SparseMatrix::zeros(3, 4), SparseMatrix::zeros(4, 2)]).unwrap();
        let h = homology_of(&c).unwrap();
        assert_eq!(h.iter().map(|g| g.free_rank).collect::<Vec<_>>(), [3, 4, 2]);
    }

    #[test]
    fn rejects_non_complex() {
        let c = ChainComplex::new(
            vec![1, 1, 1],
            vec![SparseMatrix::from_dense(&[vec![1]]), SparseMatrix::from_dense(&[vec![1]])],
        )
        .unwrap();
        assert!(matches!(homology_of(&c), Err(Error::NotAComplex { degree: 1 })));
    }

    #[test]
    fn shape_validation() {
        assert!(ChainComplex::new(vec![2, 2], vec![SparseMatrix::zeros(2, 3)]).is_err());
        assert!(ChainComplex::new(vec![2, 2], vec![]).is_err());
    }

    #[test]
    fn repeated_torsion_display() {
        let g = HomologyGroup { degree: 1, free_rank: 6, torsion: vec![2, 2, 2, 2, 2, 4] };
        assert_eq!(g.to_string(), "Z^6 + (Z/2)^5 + Z/4");
    }

    #[test]
    fn json_shape() {
        let g = HomologyGroup { degree: 1, free_rank: 3, torsion: vec![2] };
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"degree":1,"free_rank":3,"torsion":[2]}"#);
        assert_eq!(g.to_string(), "Z^3 + Z/2");
    }
}
