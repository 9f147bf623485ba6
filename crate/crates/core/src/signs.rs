//! Sign vectors `ε ∈ {±1}^l` and the Weyl group action on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{CartanMatrix, ElementId, NodeSet, WeylGroup, MAX_RANK};

/// A sign vector. Bit `i - 1` set means `ε_i = -1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector {
    rank: u8,
    neg: u32,
}

impl SignVector {
    pub fn all_plus(rank: usize) -> Self {
        assert!(rank <= MAX_RANK);
        SignVector { rank: rank as u8, neg: 0 }
    }

    /// Builds a vector with `-1` exactly on `negative`.
    pub fn from_negative_set(rank: usize, negative: NodeSet) -> Self {
        assert!(rank <= MAX_RANK);
        SignVector { rank: rank as u8, neg: negative.bits() & NodeSet::full(rank).bits() }
    }

    pub fn from_values(values: &[i8]) -> Result<Self> {
        if values.len() > MAX_RANK {
            return Err(Error::Signs(format!("rank {} exceeds {MAX_RANK}", values.len())));
        }
        let mut neg = 0;
        for (k, &v) in values.iter().enumerate() {
            match v {
                1 => {}
                -1 => neg |= 1 << k,
                _ => return Err(Error::Signs(format!("entry {v} is not ±1"))),
            }
        }
        Ok(SignVector { rank: values.len() as u8, neg })
    }

    pub fn rank(self) -> usize {
        self.rank as usize
    }

    /// `ε_i` for 1-based `i`.
    pub fn get(self, i: usize) -> i8 {
        if self.neg >> (i - 1) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, i: usize, value: i8) {
        if value < 0 {
            self.neg |= 1 << (i - 1);
        } else {
            self.neg &= !(1 << (i - 1));
        }
    }

    pub fn negative_set(self) -> NodeSet {
        NodeSet::from_bits(self.neg)
    }

    pub fn values(self) -> Vec<i8> {
        (1..=self.rank()).map(|i| self.get(i)).collect()
    }

    pub fn is_all_plus(self) -> bool {
        self.neg == 0
    }

    /// Every sign vector of the given rank, ordered by negative-set bits.
    pub fn all(rank: usize) -> impl Iterator<Item = SignVector> {
        (0..1u32 << rank).map(move |neg| SignVector { rank: rank as u8, neg })
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.rank() {
            f.write_str(if self.get(i) < 0 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                other => Err(Error::Signs(format!("unexpected character {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SignVector::from_values(&values)
    }
}

impl Serialize for SignVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SignVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `s_i` acting on signs: `ε'_j = ε_j ε_i^{C_{j,i} mod 2}`.
pub fn apply_simple_reflection(i: usize, eps: SignVector, cartan: &CartanMatrix) -> SignVector {
    if eps.get(i) > 0 {
        return eps;
    }
    let mut out = eps;
    for j in 1..=eps.rank() {
        if cartan.entry(j, i).rem_euclid(2) == 1 {
            out.set(j, -eps.get(j));
        }
    }
    out
}

/// Applies the letters of `word` from last to first.
pub fn apply_word(word: &[u8], eps: SignVector, cartan: &CartanMatrix) -> SignVector {
    word.iter().rev().fold(eps, |e, &i| apply_simple_reflection(i as usize, e, cartan))
}

/// `ε(w)`, computed along the stored reduced word of `w`.
pub fn apply_weyl(group: &WeylGroup, w: ElementId, eps: SignVector) -> Result<SignVector> {
    if eps.rank() != group.rank() {
        return Err(Error::RankMismatch { expected: group.rank(), actual: eps.rank() });
    }
    Ok(apply_word(group.word(w), eps, group.cartan()))
}
