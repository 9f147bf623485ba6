use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lie::cartan::CartanMatrix;
use crate::lie::nodes::NodeSet;

/// Default cap on `|W|`; large enough for `E6`.
pub const DEFAULT_ORDER_CAP: usize = 51_840;

/// Environment variable that overrides [`DEFAULT_ORDER_CAP`] in the CLI.
pub const ORDER_CAP_ENV: &str = "TODA_MAX_WEYL_ORDER";

const MAX_ROOTS: usize = 4096;

/// Index of an element inside its [`WeylGroup`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A Weyl group element: its permutation of the full root set, its length and
/// the lexicographically smallest reduced word (letters are 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    perm: Box<[u16]>,
    length: usize,
    reduced_word: Vec<u8>,
}

impl WeylElement {
    /// Image of every root index under the element.
    pub fn perm(&self) -> &[u16] {
        &self.perm
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn reduced_word(&self) -> &[u8] {
        &self.reduced_word
    }
}

/// The finite root system of a Cartan matrix, in the simple-root basis.
///
/// Roots `0..positive_count` are positive (ordered by height), and root
/// `positive_count + k` is the negative of root `k`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    roots: Vec<Vec<i32>>,
    positive_count: usize,
    reflections: Vec<Vec<u16>>,
}

impl RootSystem {
    fn new(cartan: &CartanMatrix) -> Result<Self> {
        let l = cartan.rank();
        let reflect = |i: usize, r: &[i32]| -> Vec<i32> {
            let c: i32 = (0..l).map(|j| r[j] * cartan.entry(j + 1, i + 1)).sum();
            let mut out = r.to_vec();
            out[i] -= c;
            out
        };
        let simple: Vec<Vec<i32>> = (0..l).map(|i| (0..l).map(|k| i32::from(k == i)).collect()).collect();
        let mut seen: std::collections::HashSet<Vec<i32>> = simple.iter().cloned().collect();
        let mut queue: VecDeque<Vec<i32>> = simple.into_iter().collect();
        while let Some(r) = queue.pop_front() {
            for i in 0..l {
                let s = reflect(i, &r);
                if seen.insert(s.clone()) {
                    if seen.len() > MAX_ROOTS {
                        return Err(Error::InvalidCartan("root system is not finite".into()));
                    }
                    queue.push_back(s);
                }
            }
        }
        let mut positive: Vec<Vec<i32>> = seen.into_iter().filter(|r| r.iter().all(|&x| x >= 0)).collect();
        positive.sort_by(|a, b| {
            let (ha, hb): (i32, i32) = (a.iter().sum(), b.iter().sum());
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let positive_count = positive.len();
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let index: HashMap<&Vec<i32>, u16> = roots.iter().enumerate().map(|(k, r)| (r, k as u16)).collect();
        let reflections = (0..l)
            .map(|i| roots.iter().map(|r| index[&reflect(i, r)]).collect())
            .collect();
        Ok(RootSystem { roots, positive_count, reflections })
    }

    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn positive_count(&self) -> usize {
        self.positive_count
    }

    pub fn is_positive(&self, root: usize) -> bool {
        root < self.positive_count
    }

    /// Root index of `alpha_i` (1-based).
    pub fn simple_root(&self, i: usize) -> usize {
        // Height-one roots come first in the order of their nonzero coordinate.
        let l = self.reflections.len();
        (0..l).find(|&k| self.roots[k][i - 1] == 1).expect("simple roots are listed first")
    }

    /// Permutation of root indices induced by `s_i` (1-based).
    pub fn reflection(&self, i: usize) -> &[u16] {
        &self.reflections[i - 1]
    }
}

/// Complete enumeration of a finite Weyl group.
///
/// Elements are stored in shortlex order of their reduced words, so element
/// ids increase with length. Right multiplication by each generator is
/// tabulated.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    cartan: CartanMatrix,
    roots: RootSystem,
    simple: Vec<usize>,
    elements: Vec<WeylElement>,
    right: Vec<u32>,
    lookup: HashMap<Box<[u16]>, u32>,
}

/// Enumerate `W` with the default order cap.
pub fn generate_weyl_group(cartan: &CartanMatrix) -> Result<WeylGroup> {
    WeylGroup::with_cap(cartan, DEFAULT_ORDER_CAP)
}

impl WeylGroup {
    pub fn new(cartan: &CartanMatrix) -> Result<Self> {
        generate_weyl_group(cartan)
    }

    /// Enumerate `W`, failing with [`Error::GroupTooLarge`] once more than
    /// `cap` elements would be needed.
    pub fn with_cap(cartan: &CartanMatrix, cap: usize) -> Result<Self> {
        if let Some(order) = cartan.root_type().weyl_order(cartan.rank()) {
            // Only trust the closed form for the canonical matrices.
            if crate::lie::cartan_matrix(cartan.root_type(), cartan.rank()).ok().as_ref() == Some(cartan)
                && order > cap as u128
            {
                return Err(Error::GroupTooLarge { cap });
            }
        }
        let roots = RootSystem::new(cartan)?;
        let l = cartan.rank();
        let simple: Vec<usize> = (1..=l).map(|i| roots.simple_root(i)).collect();
        let key = |perm: &[u16]| -> Box<[u16]> { simple.iter().map(|&s| perm[s]).collect() };

        let identity: Box<[u16]> = (0..roots.roots.len() as u16).collect();
        let mut lookup = HashMap::new();
        lookup.insert(key(&identity), 0u32);
        let mut elements = vec![WeylElement { perm: identity, length: 0, reduced_word: Vec::new() }];
        let mut right: Vec<u32> = Vec::new();
        let mut next = 0usize;
        while next < elements.len() {
            for i in 1..=l {
                let refl = roots.reflection(i);
                let perm: Box<[u16]> = {
                    let w = &elements[next].perm;
                    refl.iter().map(|&r| w[r as usize]).collect()
                };
                let k = key(&perm);
                let id = match lookup.get(&k) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        let id = elements.len() as u32;
                        let mut word = elements[next].reduced_word.clone();
                        word.push(i as u8);
                        let length = elements[next].length + 1;
                        elements.push(WeylElement { perm, length, reduced_word: word });
                        lookup.insert(k, id);
                        id
                    }
                };
                right.push(id);
            }
            next += 1;
        }
        Ok(WeylGroup { cartan: cartan.clone(), roots, simple, elements, right, lookup })
    }

    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.elements.len() as u32).map(ElementId)
    }

    pub fn element(&self, w: ElementId) -> &WeylElement {
        &self.elements[w.index()]
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn length(&self, w: ElementId) -> usize {
        self.elements[w.index()].length
    }

    pub fn word(&self, w: ElementId) -> &[u8] {
        &self.elements[w.index()].reduced_word
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if (1..=self.rank()).contains(&i) {
            Ok(())
        } else {
            Err(Error::RootIndex { index: i, rank: self.rank() })
        }
    }

    /// The simple reflection `s_i`.
    pub fn generator(&self, i: usize) -> ElementId {
        self.right_mul_simple(self.identity(), i)
    }

    /// `w * s_i`.
    pub fn right_mul_simple(&self, w: ElementId, i: usize) -> ElementId {
        assert!((1..=self.rank()).contains(&i), "simple root {i} out of range");
        ElementId(self.right[w.index() * self.rank() + (i - 1)])
    }

    /// `s_i * w`.
    pub fn left_mul_simple(&self, i: usize, w: ElementId) -> ElementId {
        self.mul(self.generator(i), w)
    }

    pub fn mul(&self, u: ElementId, v: ElementId) -> ElementId {
        self.word(v).iter().fold(u, |x, &i| self.right_mul_simple(x, i as usize))
    }

    pub fn inverse(&self, w: ElementId) -> ElementId {
        self.word(w).iter().rev().fold(self.identity(), |x, &i| self.right_mul_simple(x, i as usize))
    }

    /// Element represented by an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[u8]) -> Result<ElementId> {
        let mut x = self.identity();
        for &i in word {
            self.check_node(i as usize)?;
            x = self.right_mul_simple(x, i as usize);
        }
        Ok(x)
    }

    /// Looks an element up by its permutation of the roots.
    pub fn find_perm(&self, perm: &[u16]) -> Option<ElementId> {
        let key: Box<[u16]> = self.simple.iter().map(|&s| perm[s]).collect();
        self.lookup.get(&key).map(|&id| ElementId(id))
    }

    /// Permutation of the product `u v`, computed by composing permutations.
    pub fn compose_perms(u: &[u16], v: &[u16]) -> Vec<u16> {
        v.iter().map(|&r| u[r as usize]).collect()
    }

    /// Product of the simple reflections of `word`, computed directly on root
    /// permutations without using the multiplication table.
    pub fn perm_of_word(&self, word: &[u8]) -> Vec<u16> {
        let mut perm: Vec<u16> = (0..self.roots.roots.len() as u16).collect();
        for &i in word {
            perm = Self::compose_perms(&perm, self.roots.reflection(i as usize));
        }
        perm
    }

    /// Unique element of maximal length.
    pub fn longest(&self) -> ElementId {
        ElementId(self.elements.len() as u32 - 1)
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, w: ElementId) -> usize {
        let perm = &self.elements[w.index()].perm;
        (0..self.roots.positive_count).filter(|&r| !self.roots.is_positive(perm[r] as usize)).count()
    }

    /// Whether `l(w s_i) < l(w)`.
    pub fn is_right_descent(&self, w: ElementId, i: usize) -> bool {
        let perm = &self.elements[w.index()].perm;
        !self.roots.is_positive(perm[self.simple[i - 1]] as usize)
    }

    /// Minimal-length representative of the left coset `w W_S`.
    pub fn min_coset_rep(&self, w: ElementId, subset: NodeSet) -> ElementId {
        let mut x = w;
        'outer: loop {
            for i in subset.iter() {
                if self.is_right_descent(x, i) {
                    x = self.right_mul_simple(x, i);
                    continue 'outer;
                }
            }
            return x;
        }
    }

    /// Whether `w` lies in the standard parabolic subgroup `W_S`.
    pub fn in_parabolic(&self, w: ElementId, subset: NodeSet) -> bool {
        self.word(w).iter().all(|&i| subset.contains(i as usize))
    }

    /// Enumerate `W_S` by closure under its generators.
    pub fn parabolic_subgroup(&self, subset: NodeSet) -> ParabolicSubgroup {
        let mut seen = vec![false; self.order()];
        let mut elements = vec![self.identity()];
        seen[0] = true;
        let mut k = 0;
        while k < elements.len() {
            let w = elements[k];
            for i in subset.iter().filter(|&i| i <= self.rank()) {
                let x = self.right_mul_simple(w, i);
                if !seen[x.index()] {
                    seen[x.index()] = true;
                    elements.push(x);
                }
            }
            k += 1;
        }
        elements.sort();
        ParabolicSubgroup { generators: subset, elements }
    }
}

/// A standard parabolic subgroup `W_S` with its elements listed by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicSubgroup {
    pub generators: NodeSet,
    pub elements: Vec<ElementId>,
}

impl ParabolicSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, w: ElementId) -> bool {
        self.elements.binary_search(&w).is_ok()
    }
}
