//! The principal graph of type `A_l` and its closed-form counts.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{invariant_factors, ChainComplex, SparseMatrix};

/// Largest rank accepted by the counting functions.
pub const MAX_PRINCIPAL_RANK: usize = 30;

/// Position of a hypercube face along one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FaceCoord {
    Minus,
    Free,
    Plus,
}

/// A face of the hypercube seeded at `⟨a_{i,j}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrincipalFace {
    pub seed: (usize, usize),
    pub coords: Vec<FaceCoord>,
}

impl PrincipalFace {
    fn count(&self, c: FaceCoord) -> usize {
        self.coords.iter().filter(|&&x| x == c).count()
    }

    /// Morse index: one plus the number of free coordinates.
    pub fn index(&self) -> usize {
        self.count(FaceCoord::Free) + 1
    }

    /// Pattern `0^(i+#minus) *^(#free+1) 0^(j+#plus)`.
    pub fn label(&self) -> String {
        let (i, j) = self.seed;
        let mut s = "0".repeat(i + self.count(FaceCoord::Minus));
        s.push_str(&"*".repeat(self.index()));
        s.push_str(&"0".repeat(j + self.count(FaceCoord::Plus)));
        s
    }

    /// Facets with their coefficients `2(-1)^(p+1)` at the `p`-th free coordinate.
    pub fn boundary(&self) -> Vec<(PrincipalFace, i64)> {
        let mut out = Vec::new();
        let mut p = 0;
        for (k, &c) in self.coords.iter().enumerate() {
            if c != FaceCoord::Free {
                continue;
            }
            p += 1;
            let coeff = if p % 2 == 1 { 2 } else { -2 };
            for side in [FaceCoord::Minus, FaceCoord::Plus] {
                let mut f = self.clone();
                f.coords[k] = side;
                out.push((f, coeff));
            }
        }
        out
    }
}

/// One connected component: all faces of the hypercube of dimension
/// `l - i - j - 1` seeded at `⟨a_{i,j}⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalComponent {
    pub seed: (usize, usize),
    pub dimension: usize,
    pub faces: Vec<PrincipalFace>,
}

/// The principal graph of `A_l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrincipalGraph {
    pub rank: usize,
    pub components: Vec<PrincipalComponent>,
}

pub fn principal_graph(l: usize) -> Result<PrincipalGraph> {
    if l == 0 || l > 12 {
        return Err(Error::Unsupported(format!("principal graph for rank {l} (supported: 1..=12)")));
    }
    let mut components = Vec::new();
    for i in 0..l {
        for j in 0..l - i {
            let dimension = l - i - j - 1;
            let mut faces = Vec::with_capacity(3usize.pow(dimension as u32));
            for mut code in 0..3usize.pow(dimension as u32) {
                let mut coords = Vec::with_capacity(dimension);
                for _ in 0..dimension {
                    coords.push([FaceCoord::Minus, FaceCoord::Free, FaceCoord::Plus][code % 3]);
                    code /= 3;
                }
                faces.push(PrincipalFace { seed: (i, j), coords });
            }
            faces.sort();
            components.push(PrincipalComponent { seed: (i, j), dimension, faces });
        }
    }
    Ok(PrincipalGraph { rank: l, components })
}

impl PrincipalGraph {
    pub fn faces(&self) -> impl Iterator<Item = &PrincipalFace> {
        self.components.iter().flat_map(|c| c.faces.iter())
    }

    /// `|𝒜_k|` for `k = 1..=l`, stored at index `k - 1`.
    pub fn cell_counts(&self) -> Vec<u128> {
        let mut counts = vec![0u128; self.rank];
        for f in self.faces() {
            counts[f.index() - 1] += 1;
        }
        counts
    }

    /// Complex with `𝒜_k` in degree `k - 1`.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        let mut basis: Vec<Vec<&PrincipalFace>> = vec![Vec::new(); self.rank];
        for f in self.faces() {
            basis[f.index() - 1].push(f);
        }
        let pos: Vec<BTreeMap<&PrincipalFace, usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(k, &f)| (f, k)).collect()).collect();
        let mut boundaries = Vec::new();
        for d in 1..self.rank {
            let mut m = SparseMatrix::zeros(basis[d - 1].len(), basis[d].len());
            for (col, f) in basis[d].iter().enumerate() {
                for (g, v) in f.boundary() {
                    m.add(pos[d - 1][&g], col, v);
                }
            }
            boundaries.push(m);
        }
        ChainComplex::new(basis.iter().map(Vec::len).collect(), boundaries)
    }

    /// Graphviz rendering; faces are labeled by their `0`/`*` pattern.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::from("graph principal {\n");
        let mut ids = BTreeMap::new();
        for (n, f) in self.faces().enumerate() {
            ids.insert(f, n);
            let _ = writeln!(s, "  f{n} [label=\"{}\"];", f.label());
        }
        for f in self.faces() {
            for (g, v) in f.boundary() {
                let _ = writeln!(s, "  f{} -- f{} [label=\"{v}\"];", ids[f], ids[&g]);
            }
        }
        s.push_str("}\n");
        s
    }
}

fn check_rank(l: usize) -> Result<()> {
    if l == 0 || l > MAX_PRINCIPAL_RANK {
        return Err(Error::Unsupported(format!("rank {l} (supported: 1..={MAX_PRINCIPAL_RANK})")));
    }
    Ok(())
}

/// Coefficients (constant term first) of `Σ_{n=1}^{l} n (q+2)^(l-n)`.
pub fn poincare_polynomial(l: usize) -> Result<Vec<i128>> {
    check_rank(l)?;
    let mut coeffs = vec![0i128; l];
    // (q+2)^m by repeated multiplication
    let mut power = vec![1i128];
    for n in (1..=l).rev() {
        for (k, c) in power.iter().enumerate() {
            coeffs[k] += n as i128 * c;
        }
        let mut next = vec![0i128; power.len() + 1];
        for (k, c) in power.iter().enumerate() {
            next[k] += 2 * c;
            next[k + 1] += c;
        }
        power = next;
    }
    Ok(coeffs)
}

/// Renders coefficients as `q^2+6q+11`.
pub fn format_polynomial(coeffs: &[i128]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let var = match k {
            0 => String::new(),
            1 => "q".to_string(),
            _ => format!("q^{k}"),
        };
        let mag = c.abs();
        let body = if mag == 1 && k > 0 { var } else { format!("{mag}{var}") };
        let sign = if c < 0 { "-" } else if terms.is_empty() { "" } else { "+" };
        terms.push(format!("{sign}{body}"));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.concat()
    }
}

/// `b_1 = l(l+1)/2`.
pub fn betti_one(l: usize) -> Result<u128> {
    check_rank(l)?;
    Ok((l * (l + 1) / 2) as u128)
}

/// `b_1` computed three ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiOneRoutes {
    pub closed_form: i128,
    pub poincare_at_minus_one: i128,
    /// `|Z_1| - |B_1|` with `|B_1|` the rank of the boundary out of `𝒜_2`.
    pub cycles_minus_boundaries: i128,
    /// The closed form `Σ_{n=1}^{l-1} (l-n)(2^n - 1)` for `|B_1|`.
    pub boundary_rank_closed_form: i128,
}

pub fn betti_one_routes(l: usize) -> Result<BettiOneRoutes> {
    let closed_form = betti_one(l)? as i128;
    let p = poincare_polynomial(l)?;
    let poincare_at_minus_one = p.iter().enumerate().map(|(k, c)| if k % 2 == 0 { *c } else { -c }).sum();
    let graph = principal_graph(l)?;
    let cx = graph.chain_complex()?;
    let z1 = cx.rank(0) as i128;
    let b1 = cx.boundary(1).map_or(0, |m| invariant_factors(m).len()) as i128;
    let boundary_rank_closed_form = (1..l).map(|n| (l - n) as i128 * ((1i128 << n) - 1)).sum();
    Ok(BettiOneRoutes { closed_form, poincare_at_minus_one, cycles_minus_boundaries: z1 - b1, boundary_rank_closed_form })
}

/// `counts[k][n]`: number of elements of `W(A_l)` whose label has exactly
/// `k` maximal blocks of stars and `n` stars in total.
///
/// Computed by a dynamic program over permutations of `l + 1` letters,
/// tracking the relative rank of the last letter.
pub fn whisker_counts(l: usize) -> Result<Vec<Vec<u128>>> {
    check_rank(l)?;
    let overflow = || Error::Overflow("whisker count".into());
    // state[(rank j, blocks, stars, last_is_star)]
    let dim = |m: usize| vec![vec![vec![[0u128; 2]; l + 1]; l + 1]; m + 1];
    let mut f = dim(1);
    f[0][0][0][0] = 1;
    for m in 1..=l {
        // m letters placed; insert letter m + 1 with relative rank r in 0..=m
        let mut g = dim(m + 1);
        for b in 0..=l {
            for s in 0..=l {
                for t in 0..2 {
                    // prefix sums over j of f[j][b][s][t]
                    let mut prefix = vec![0u128; m + 1];
                    for j in 0..m {
                        prefix[j + 1] = prefix[j].checked_add(f[j][b][s][t]).ok_or_else(overflow)?;
                    }
                    let total = prefix[m];
                    if total == 0 {
                        continue;
                    }
                    for r in 0..=m {
                        // ascent (star) iff r > j
                        let up = prefix[r];
                        let down = total - prefix[r];
                        if up > 0 {
                            let nb = if t == 1 { b } else { b + 1 };
                            let e = &mut g[r][nb][s + 1][1];
                            *e = e.checked_add(up).ok_or_else(overflow)?;
                        }
                        if down > 0 {
                            let e = &mut g[r][b][s][0];
                            *e = e.checked_add(down).ok_or_else(overflow)?;
                        }
                    }
                }
            }
        }
        f = g;
    }
    let mut out = vec![vec![0u128; l + 1]; l + 1];
    for row in &f {
        for (b, by_stars) in row.iter().enumerate() {
            for (s, ts) in by_stars.iter().enumerate() {
                out[b][s] = out[b][s].checked_add(ts[0]).and_then(|x| x.checked_add(ts[1])).ok_or_else(overflow)?;
            }
        }
    }
    Ok(out)
}

/// Counts by block shape: sorted block sizes (descending) to the number of
/// elements whose label has exactly those star blocks.
pub fn whisker_shape_counts(l: usize) -> Result<BTreeMap<Vec<usize>, u128>> {
    if l == 0 || l > 16 {
        return Err(Error::Unsupported(format!("shape enumeration for rank {l} (supported: 1..=16)")));
    }
    let mut out = BTreeMap::new();
    for mask in 0u32..1 << l {
        // bit i set: star at position i + 1
        let mut blocks = Vec::new();
        let mut run = 0;
        for i in 0..l {
            if mask >> i & 1 == 1 {
                run += 1;
            } else if run > 0 {
                blocks.push(run);
                run = 0;
            }
        }
        if run > 0 {
            blocks.push(run);
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        *out.entry(blocks).or_insert(0) += ascent_set_count(l, mask)?;
    }
    Ok(out)
}

/// Permutations of `l + 1` letters whose ascent set is exactly `mask`.
fn ascent_set_count(l: usize, mask: u32) -> Result<u128> {
    let mut f = vec![1u128];
    for m in 1..=l {
        let up = mask >> (m - 1) & 1 == 1;
        let mut prefix = vec![0u128; m + 1];
        for j in 0..m {
            prefix[j + 1] = prefix[j] + f[j];
        }
        f = (0..=m).map(|r| if up { prefix[r] } else { prefix[m] - prefix[r] }).collect();
    }
    f.iter().try_fold(0u128, |acc, &x| acc.checked_add(x)).ok_or_else(|| Error::Overflow("ascent count".into()))
}

/// Value of the conjectured Betti number formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjecturedBetti {
    pub rank: usize,
    pub k: usize,
    pub value: i128,
    pub conjecture: bool,
}

/// `b_k = Σ_{n=k}^{l-k+1} (-1)^(n-k) |𝒜_n^(k)|` for `k ≤ (l+1)/2`, else 0.
pub fn conjectured_betti(l: usize, k: usize) -> Result<ConjecturedBetti> {
    check_rank(l)?;
    if k == 0 {
        return Err(Error::Unsupported("conjectured Betti number for k = 0".into()));
    }
    let value = if 2 * k > l + 1 {
        0
    } else {
        let counts = whisker_counts(l)?;
        let mut v: i128 = 0;
        for n in k..=l + 1 - k {
            let c = counts[k][n].to_i128().ok_or_else(|| Error::Overflow("whisker count".into()))?;
            v += if (n - k) % 2 == 0 { c } else { -c };
        }
        v
    };
    Ok(ConjecturedBetti { rank: l, k, value, conjecture: true })
}
