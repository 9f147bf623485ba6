use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::nodes::MAX_RANK;

/// Cartan–Killing type of a simple root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl RootType {
    pub fn letter(self) -> char {
        match self {
            RootType::A => 'A',
            RootType::B => 'B',
            RootType::C => 'C',
            RootType::D => 'D',
            RootType::E => 'E',
            RootType::F => 'F',
            RootType::G => 'G',
        }
    }

    /// Whether `rank` gives a finite irreducible root system of this type.
    pub fn admits_rank(self, rank: usize) -> bool {
        match self {
            RootType::A => rank >= 1,
            RootType::B | RootType::C => rank >= 2,
            RootType::D => rank >= 4,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        }
    }

    /// Order of the Weyl group, or `None` when it does not fit in a `u128`.
    pub fn weyl_order(self, rank: usize) -> Option<u128> {
        let fact = |n: usize| -> Option<u128> { (1..=n as u128).try_fold(1u128, |a, k| a.checked_mul(k)) };
        let pow2 = |n: usize| -> Option<u128> { 1u128.checked_shl(n as u32) };
        match self {
            RootType::A => fact(rank + 1),
            RootType::B | RootType::C => pow2(rank)?.checked_mul(fact(rank)?),
            RootType::D => pow2(rank - 1)?.checked_mul(fact(rank)?),
            RootType::E => Some(match rank {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            }),
            RootType::F => Some(1152),
            RootType::G => Some(12),
        }
    }
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(RootType::A),
            "B" => Ok(RootType::B),
            "C" => Ok(RootType::C),
            "D" => Ok(RootType::D),
            "E" => Ok(RootType::E),
            "F" => Ok(RootType::F),
            "G" => Ok(RootType::G),
            _ => Err(Error::InvalidType { label: s.to_string(), rank: 0 }),
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Integer Cartan matrix `C[i][j] = <alpha_i, alpha_j^vee>` of a finite root
/// system, in Bourbaki node order.
///
/// With this convention the simple reflection acts as
/// `s_i(alpha_j) = alpha_j - C[j][i] alpha_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanMatrix {
    root_type: RootType,
    rank: usize,
    entries: Vec<i32>,
}

impl CartanMatrix {
    /// Canonical Cartan matrix of type `root_type` and rank `rank`.
    pub fn new(root_type: RootType, rank: usize) -> Result<Self> {
        cartan_matrix(root_type, rank)
    }

    /// Builds a matrix from explicit rows, checking the Cartan axioms.
    ///
    /// Finiteness of the generated Weyl group is checked later, when the group
    /// is enumerated under its order cap.
    pub fn from_rows(root_type: RootType, rows: &[Vec<i32>]) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::InvalidCartan(format!("rank {rank} not in 1..={MAX_RANK}")));
        }
        if rows.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidCartan("matrix is not square".into()));
        }
        for i in 0..rank {
            if rows[i][i] != 2 {
                return Err(Error::InvalidCartan(format!("diagonal entry ({0},{0}) is not 2", i + 1)));
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let (a, b) = (rows[i][j], rows[j][i]);
                if a > 0 {
                    return Err(Error::InvalidCartan(format!("entry ({},{}) is positive", i + 1, j + 1)));
                }
                if (a == 0) != (b == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "entries ({0},{1}) and ({1},{0}) are not simultaneously zero",
                        i + 1,
                        j + 1
                    )));
                }
                if a * b > 3 {
                    return Err(Error::InvalidCartan(format!(
                        "product of entries ({0},{1}),({1},{0}) exceeds 3",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(CartanMatrix { root_type, rank, entries: rows.iter().flatten().copied().collect() })
    }

    pub fn root_type(&self) -> RootType {
        self.root_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Entry `C[i][j]` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> i32 {
        assert!((1..=self.rank).contains(&i) && (1..=self.rank).contains(&j));
        self.entries[(i - 1) * self.rank + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        self.entries.chunks(self.rank).map(|r| r.to_vec()).collect()
    }

    /// Short display name such as `A2` or `F4`.
    pub fn name(&self) -> String {
        format!("{}{}", self.root_type, self.rank)
    }

    /// Whether every node of the diagram is of type A (a single chain).
    pub fn is_type_a(&self) -> bool {
        self.root_type == RootType::A
    }
}

/// Canonical Cartan matrix in Bourbaki numbering.
pub fn cartan_matrix(root_type: RootType, rank: usize) -> Result<CartanMatrix> {
    if !root_type.admits_rank(rank) || rank > MAX_RANK {
        return Err(Error::InvalidType { label: root_type.to_string(), rank });
    }
    // Twice the Gram matrix of the simple roots, so that all entries are integers.
    let mut gram = vec![vec![0i32; rank]; rank];
    let bond = |g: &mut Vec<Vec<i32>>, i: usize, j: usize, v: i32| {
        g[i - 1][j - 1] = v;
        g[j - 1][i - 1] = v;
    };
    match root_type {
        RootType::A => {
            for i in 1..=rank {
                gram[i - 1][i - 1] = 4;
            }
            for i in 1..rank {
                bond(&mut gram, i, i + 1, -2);
            }
        }
        RootType::B => {
            // alpha_1 .. alpha_{l-1} long, alpha_l short
            for i in 1..rank {
                gram[i - 1][i - 1] = 4;
            }
            gram[rank - 1][rank - 1] = 2;
            for i in 1..rank {
                bond(&mut gram, i, i + 1, -2);
            }
        }
        RootType::C => {
            // alpha_1 .. alpha_{l-1} short, alpha_l long
            for i in 1..rank {
                gram[i - 1][i - 1] = 2;
            }
            gram[rank - 1][rank - 1] = 4;
            for i in 1..rank - 1 {
                bond(&mut gram, i, i + 1, -1);
            }
            bond(&mut gram, rank - 1, rank, -2);
        }
        RootType::D => {
            for i in 1..=rank {
                gram[i - 1][i - 1] = 4;
            }
            for i in 1..rank - 1 {
                bond(&mut gram, i, i + 1, -2);
            }
            bond(&mut gram, rank - 2, rank, -2);
        }
        RootType::E => {
            for i in 1..=rank {
                gram[i - 1][i - 1] = 4;
            }
            bond(&mut gram, 1, 3, -2);
            bond(&mut gram, 2, 4, -2);
            for i in 3..rank {
                bond(&mut gram, i, i + 1, -2);
            }
        }
        RootType::F => {
            gram[0][0] = 4;
            gram[1][1] = 4;
            gram[2][2] = 2;
            gram[3][3] = 2;
            bond(&mut gram, 1, 2, -2);
            bond(&mut gram, 2, 3, -2);
            bond(&mut gram, 3, 4, -1);
        }
        RootType::G => {
            gram[0][0] = 2;
            gram[1][1] = 6;
            bond(&mut gram, 1, 2, -3);
        }
    }
    let rows: Vec<Vec<i32>> = (0..rank)
        .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
        .collect();
    CartanMatrix::from_rows(root_type, &rows)
}
