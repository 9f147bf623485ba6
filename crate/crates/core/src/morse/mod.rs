//! Morse theory on the Weyl group: labels, indices, the Toda graph, algebraic
//! transversality, incidence numbers and the Morse chain complex.

pub mod principal;

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::cells::word_string;
use crate::error::{Error, Result};
use crate::homology::{ChainComplex, SparseMatrix};
use crate::lie::{ElementId, NodeSet, ParabolicSubgroup, WeylGroup};
use crate::signs::{apply_weyl, SignVector};

pub use principal::{
    betti_one, betti_one_routes, conjectured_betti, poincare_polynomial, principal_graph, whisker_counts,
    whisker_shape_counts, BettiOneRoutes, ConjecturedBetti, FaceCoord, PrincipalComponent, PrincipalFace,
    PrincipalGraph,
};

/// `Π^u_a = {i : l(a s_i) > l(a)}`.
pub fn unstable_set(group: &WeylGroup, a: ElementId) -> NodeSet {
    (1..=group.rank()).filter(|&i| !group.is_right_descent(a, i)).collect()
}

/// `Π^s_a`, the complement of the unstable set.
pub fn stable_set(group: &WeylGroup, a: ElementId) -> NodeSet {
    unstable_set(group, a).complement(group.rank())
}

/// `*` at position `i` when `i ∈ Π^u_a`, `0` otherwise.
pub fn label(group: &WeylGroup, a: ElementId) -> String {
    let u = unstable_set(group, a);
    (1..=group.rank()).map(|i| if u.contains(i) { '*' } else { '0' }).collect()
}

/// Morse index `|Π^u_a|`.
pub fn index(group: &WeylGroup, a: ElementId) -> usize {
    unstable_set(group, a).len()
}

/// A critical point of the Morse function, one per Weyl group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    #[serde(skip)]
    pub element: ElementId,
    pub word: Vec<u8>,
    #[serde(serialize_with = "ser_nodes")]
    pub unstable: NodeSet,
    #[serde(serialize_with = "ser_nodes")]
    pub stable: NodeSet,
    pub index: usize,
    pub label: String,
}

fn ser_nodes<S: serde::Serializer>(s: &NodeSet, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(s.iter())
}

pub fn critical_point(group: &WeylGroup, a: ElementId) -> CriticalPoint {
    let unstable = unstable_set(group, a);
    CriticalPoint {
        element: a,
        word: group.word(a).to_vec(),
        unstable,
        stable: unstable.complement(group.rank()),
        index: unstable.len(),
        label: label(group, a),
    }
}

/// `s_{ij}`: the consecutive product `s_i s_{i-1} ... s_j` for `i ≥ j`, or
/// `s_i s_{i+1} ... s_j` for `i < j`.
pub fn s_ij(group: &WeylGroup, i: usize, j: usize) -> Result<ElementId> {
    let word: Vec<u8> = if i >= j { (j..=i).rev().map(|k| k as u8).collect() } else { (i..=j).map(|k| k as u8).collect() };
    group.from_word(&word)
}

/// Whether `W^u(a) = W_{Π^u_a}` is abelian.
pub fn is_abelian_unstable(group: &WeylGroup, a: ElementId) -> bool {
    let u = unstable_set(group, a);
    let sub = group.parabolic_subgroup(u);
    sub.elements.iter().all(|&x| sub.elements.iter().all(|&y| group.mul(x, y) == group.mul(y, x)))
}

/// An edge `a → a s_i` of the Toda graph, oriented towards greater length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TodaEdge {
    pub source: ElementId,
    pub target: ElementId,
    pub root: usize,
}

/// Every edge of the Toda graph, ordered by source id then root.
pub fn toda_graph(group: &WeylGroup) -> Vec<TodaEdge> {
    let mut edges = Vec::new();
    for a in group.ids() {
        for i in 1..=group.rank() {
            if !group.is_right_descent(a, i) {
                edges.push(TodaEdge { source: a, target: group.right_mul_simple(a, i), root: i });
            }
        }
    }
    edges
}

/// Caches standard parabolic subgroups.
struct Parabolics<'a> {
    group: &'a WeylGroup,
    cache: HashMap<NodeSet, ParabolicSubgroup>,
}

impl<'a> Parabolics<'a> {
    fn new(group: &'a WeylGroup) -> Self {
        Parabolics { group, cache: HashMap::new() }
    }

    fn get(&mut self, s: NodeSet) -> &ParabolicSubgroup {
        let group = self.group;
        self.cache.entry(s).or_insert_with(|| group.parabolic_subgroup(s))
    }

    fn transversal(&mut self, a: ElementId, b: ElementId) -> bool {
        let g = self.group;
        let ua = unstable_set(g, a);
        let sb = stable_set(g, b);
        let (ia, ib) = (ua.len(), index(g, b));
        let meet = ua.intersection(sb);
        if ia < ib || meet.len() != ia - ib {
            return false;
        }
        if self.get(ua.union(sb)).order() != g.order() {
            return false;
        }
        let left: HashSet<ElementId> = self.get(ua).elements.iter().map(|&x| g.mul(a, x)).collect();
        let common = self.get(sb).elements.iter().filter(|&&x| left.contains(&g.mul(b, x))).count();
        common == self.get(meet).order()
    }
}

/// Algebraic transversality of the pair `(a, b)`, checked by enumeration.
pub fn is_transversal(group: &WeylGroup, a: ElementId, b: ElementId) -> bool {
    Parabolics::new(group).transversal(a, b)
}

/// Reading of the sign-change count in the incidence formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaReading {
    /// Count `j ∈ Π^u_a` with `ε'_j = -1`.
    #[default]
    NegativeAfter,
    /// Count `j ∈ Π^u_a` with `ε_j ε'_j = -1`.
    Flipped,
}

impl FromStr for SigmaReading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "negative-after" => Ok(SigmaReading::NegativeAfter),
            "flipped" => Ok(SigmaReading::Flipped),
            other => Err(Error::Unsupported(format!("sigma reading {other:?}"))),
        }
    }
}

/// Orientation sign attached to a nonzero incidence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRule {
    /// `(-1)^(l(a) + l(a⁻¹b) + p)` with `p` the position of `α_i` in `Π^s_b`.
    #[default]
    Oriented,
    /// `(-1)^(l(a⁻¹b) + i)`.
    Literal,
}

impl FromStr for SignRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oriented" => Ok(SignRule::Oriented),
            "literal" => Ok(SignRule::Literal),
            other => Err(Error::Unsupported(format!("sign rule {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IncidenceConfig {
    pub sigma: SigmaReading,
    pub sign_rule: SignRule,
}

fn incidence_unchecked(group: &WeylGroup, a: ElementId, b: ElementId, i: usize, cfg: IncidenceConfig) -> Result<i64> {
    let ua = unstable_set(group, a);
    let sb = stable_set(group, b);
    let eps = SignVector::from_negative_set(group.rank(), NodeSet::single(i));
    let x = group.mul(group.inverse(a), b);
    let after = apply_weyl(group, x, eps)?;
    let sigma = ua
        .iter()
        .filter(|&j| match cfg.sigma {
            SigmaReading::NegativeAfter => after.get(j) < 0,
            SigmaReading::Flipped => eps.get(j) * after.get(j) < 0,
        })
        .count();
    if sigma % 2 == 1 {
        return Ok(0);
    }
    let exponent = match cfg.sign_rule {
        SignRule::Literal => group.length(x) + i,
        SignRule::Oriented => group.length(a) + group.length(x) + sb.position(i).expect("i lies in the stable set"),
    };
    Ok(if exponent % 2 == 0 { 2 } else { -2 })
}

/// Incidence number `[a;b] ∈ {0, ±2}`.
pub fn incidence(group: &WeylGroup, a: ElementId, b: ElementId, cfg: IncidenceConfig) -> Result<i64> {
    let ua = unstable_set(group, a);
    let sb = stable_set(group, b);
    if ua.len() != index(group, b) + 1 {
        return Err(Error::Incidence(format!(
            "Ind(a) = {} and Ind(b) = {} do not differ by one",
            ua.len(),
            index(group, b)
        )));
    }
    let meet = ua.intersection(sb);
    if meet.len() != 1 {
        return Err(Error::Incidence(format!("unstable/stable intersection {meet} is not a single root")));
    }
    if !is_transversal(group, a, b) {
        return Err(Error::Incidence("pair is not transversal".into()));
    }
    let i = meet.iter().next().expect("singleton");
    incidence_unchecked(group, a, b, i, cfg)
}

/// A transversal pair `a → b` with `Ind(a) = Ind(b) + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorseEdge {
    pub source: ElementId,
    pub target: ElementId,
    pub incidence: i64,
}

/// The Morse complex with its critical-point bases.
#[derive(Clone, Debug)]
pub struct MorseComplex {
    // critical[k] lists elements of index k ordered by reduced word
    critical: Vec<Vec<ElementId>>,
    edges: Vec<MorseEdge>,
    complex: ChainComplex,
    config: IncidenceConfig,
}

impl MorseComplex {
    pub fn critical_points(&self, k: usize) -> &[ElementId] {
        &self.critical[k]
    }

    pub fn edges(&self) -> &[MorseEdge] {
        &self.edges
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn config(&self) -> IncidenceConfig {
        self.config
    }

    /// Incidence of the edge `a → b`, or 0 when there is no edge.
    pub fn incidence_of(&self, a: ElementId, b: ElementId) -> i64 {
        self.edges.iter().find(|e| e.source == a && e.target == b).map_or(0, |e| e.incidence)
    }

    /// Graphviz rendering of the Morse-Smale graph.
    pub fn to_dot(&self, group: &WeylGroup) -> String {
        let mut s = String::from("digraph morse {\n  rankdir=TB;\n");
        for k in (0..self.critical.len()).rev() {
            for &a in &self.critical[k] {
                node_line(&mut s, group, a);
            }
        }
        for e in &self.edges {
            let _ = writeln!(s, "  w{} -> w{} [label=\"{}\"];", e.source.index(), e.target.index(), e.incidence);
        }
        s.push_str("}\n");
        s
    }
}

fn node_line(s: &mut String, group: &WeylGroup, a: ElementId) {
    let _ = writeln!(s, "  w{} [label=\"{}\\n{}\"];", a.index(), label(group, a), word_string(group.word(a)));
}

/// Graphviz rendering of the Toda graph.
pub fn toda_graph_dot(group: &WeylGroup) -> String {
    let mut s = String::from("digraph toda {\n");
    for a in group.ids() {
        node_line(&mut s, group, a);
    }
    for e in toda_graph(group) {
        let _ = writeln!(s, "  w{} -> w{} [label=\"s{}\"];", e.source.index(), e.target.index(), e.root);
    }
    s.push_str("}\n");
    s
}

/// Builds the Morse complex: degree `k` is spanned by elements of index `k`
/// and `∂⟨a⟩ = Σ [a;b]⟨b⟩` over transversal `b` of index `k - 1`.
pub fn morse_complex(group: &WeylGroup, cfg: IncidenceConfig) -> Result<MorseComplex> {
    let l = group.rank();
    let mut critical: Vec<Vec<ElementId>> = vec![Vec::new(); l + 1];
    for a in group.ids() {
        critical[index(group, a)].push(a);
    }
    for c in &mut critical {
        c.sort_by(|&x, &y| group.word(x).cmp(group.word(y)));
    }
    let mut cache = Parabolics::new(group);
    let mut edges = Vec::new();
    let mut boundaries = Vec::with_capacity(l);
    for k in 1..=l {
        let mut m = SparseMatrix::zeros(critical[k - 1].len(), critical[k].len());
        for (col, &a) in critical[k].iter().enumerate() {
            let ua = unstable_set(group, a);
            for (row, &b) in critical[k - 1].iter().enumerate() {
                let meet = ua.intersection(stable_set(group, b));
                if meet.len() != 1 || !cache.transversal(a, b) {
                    continue;
                }
                let i = meet.iter().next().expect("singleton");
                let v = incidence_unchecked(group, a, b, i, cfg)?;
                edges.push(MorseEdge { source: a, target: b, incidence: v });
                m.add(row, col, v);
            }
        }
        boundaries.push(m);
    }
    let complex = ChainComplex::new(critical.iter().map(Vec::len).collect(), boundaries)?;
    Ok(MorseComplex { critical, edges, complex, config: cfg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::build_chain_complex;
    use crate::homology::homology_of;
    use crate::lie::{cartan_matrix, generate_weyl_group, RootType};

    fn type_a(l: usize) -> WeylGroup {
        generate_weyl_group(&cartan_matrix(RootType::A, l).unwrap()).unwrap()
    }

    #[test]
    fn worked_label_example() {
        let w = type_a(5);
        let a = w.from_word(&[2, 1, 4, 3]).unwrap();
        assert_eq!(label(&w, a), "0*0**");
        assert_eq!(index(&w, a), 3);
        assert_eq!(label(&w, w.identity()), "*****");
        assert_eq!(label(&w, w.longest()), "00000");
        assert_eq!(index(&w, w.longest()), 0);
    }

    #[test]
    fn index_distribution_is_symmetric() {
        for l in 1..=5 {
            let w = type_a(l);
            let mut counts = vec![0usize; l + 1];
            for a in w.ids() {
                counts[index(&w, a)] += 1;
                let flipped = w.mul(a, w.longest());
                assert_eq!(index(&w, flipped), l - index(&w, a));
            }
            let rev: Vec<usize> = counts.iter().rev().copied().collect();
            assert_eq!(counts, rev);
        }
    }

    #[test]
    fn toda_graph_sizes() {
        let w = type_a(1);
        assert_eq!(toda_graph(&w), vec![TodaEdge { source: w.identity(), target: w.generator(1), root: 1 }]);
        assert_eq!(toda_graph(&type_a(2)).len(), 6);
        for l in 1..=4 {
            let w = type_a(l);
            assert_eq!(toda_graph(&w).len(), l * w.order() / 2);
        }
    }

    #[test]
    fn transversality_examples() {
        let w = type_a(2);
        for a in w.ids() {
            assert!(is_transversal(&w, a, a));
            for b in w.ids() {
                if index(&w, a) < index(&w, b) {
                    assert!(!is_transversal(&w, a, b));
                }
            }
        }
        assert!(is_transversal(&w, w.identity(), w.generator(1)));
    }

    #[test]
    fn incidence_closed_form() {
        let cfg = IncidenceConfig::default();
        for l in 1..=4 {
            let w = type_a(l);
            for i in 1..=l {
                let expected = if i == l { 0 } else if i % 2 == 1 { 2 } else { -2 };
                let b = s_ij(&w, i, 1).unwrap();
                assert_eq!(incidence(&w, w.identity(), b, cfg).unwrap(), expected, "l={l} i={i}");
                let b = s_ij(&w, l - i + 1, l).unwrap();
                assert_eq!(incidence(&w, w.identity(), b, cfg).unwrap(), expected, "mirror l={l} i={i}");
            }
        }
    }

    #[test]
    fn incidence_preconditions() {
        let w = type_a(2);
        let cfg = IncidenceConfig::default();
        assert!(matches!(incidence(&w, w.identity(), w.identity(), cfg), Err(Error::Incidence(_))));
        assert!(matches!(incidence(&w, w.identity(), w.longest(), cfg), Err(Error::Incidence(_))));
    }

    #[test]
    fn morse_homology_matches_cells() {
        for l in 1..=3 {
            let w = type_a(l);
            let m = morse_complex(&w, IncidenceConfig::default()).unwrap();
            assert!(m.edges().iter().all(|e| [0, 2, -2].contains(&e.incidence)));
            let hm = homology_of(m.chain_complex()).unwrap();
            let hc = homology_of(build_chain_complex(&w).unwrap().chain_complex()).unwrap();
            assert_eq!(hm, hc, "A{l}");
            assert_eq!(hm[1].free_rank, l * (l + 1) / 2);
        }
    }

    #[test]
    fn a1_morse_complex() {
        let w = type_a(1);
        let m = morse_complex(&w, IncidenceConfig::default()).unwrap();
        assert_eq!(m.critical_points(1), &[w.identity()]);
        assert_eq!(m.critical_points(0), &[w.generator(1)]);
        assert!(m.chain_complex().boundary(1).unwrap().is_zero());
    }

    #[test]
    fn literal_rule_works_on_a2_only() {
        let cfg = IncidenceConfig { sign_rule: SignRule::Literal, ..Default::default() };
        let m2 = morse_complex(&type_a(2), cfg).unwrap();
        let h = homology_of(m2.chain_complex()).unwrap();
        assert_eq!(h.iter().map(ToString::to_string).collect::<Vec<_>>(), ["Z", "Z^3 + Z/2", "0"]);
        assert!(!morse_complex(&type_a(3), cfg).unwrap().chain_complex().is_complex());
    }

    #[test]
    fn flipped_reading_misses_closed_form() {
        let cfg = IncidenceConfig { sigma: SigmaReading::Flipped, ..Default::default() };
        let w = type_a(3);
        let values: Vec<i64> =
            (1..=3).map(|i| incidence(&w, w.identity(), s_ij(&w, i, 1).unwrap(), cfg).unwrap()).collect();
        assert_ne!(values, vec![2, -2, 0]);
    }

    #[test]
    fn abelian_unstable() {
        let w = type_a(3);
        assert!(!is_abelian_unstable(&w, w.identity()));
        assert!(is_abelian_unstable(&w, w.longest()));
        let a = w.from_word(&[2]).unwrap();
        // Π^u = {1, 3}: commuting generators
        assert!(is_abelian_unstable(&w, a));
    }

    #[test]
    fn dot_output() {
        let w = type_a(1);
        let dot = toda_graph_dot(&w);
        assert!(dot.contains("w0 -> w1 [label=\"s1\"]"));
        let m = morse_complex(&w, IncidenceConfig::default()).unwrap();
        assert!(m.to_dot(&w).contains("w0 -> w1 [label=\"0\"]"));
    }
}
