//! Colored Dynkin diagrams, the cells they index and the cellular chain complex.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{ChainComplex, SparseMatrix};
use crate::lie::{ElementId, NodeSet, WeylGroup};
use crate::signs::{apply_weyl, SignVector};

/// Vertex color. Blue is `+1`, Red is `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn sign(self) -> i8 {
        match self {
            Color::Blue => 1,
            Color::Red => -1,
        }
    }

    pub fn from_sign(s: i8) -> Self {
        if s < 0 {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn letter(self) -> char {
        match self {
            Color::Blue => 'B',
            Color::Red => 'R',
        }
    }
}

/// Dynkin diagram with the vertices of `S` colored.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColoredDynkinDiagram {
    rank: usize,
    colored: NodeSet,
    red: NodeSet,
}

impl ColoredDynkinDiagram {
    pub fn uncolored(rank: usize) -> Self {
        ColoredDynkinDiagram { rank, colored: NodeSet::EMPTY, red: NodeSet::EMPTY }
    }

    /// `colors[k]` is the color of the `k`-th smallest vertex of `colored`.
    pub fn new(rank: usize, colored: NodeSet, colors: &[Color]) -> Result<Self> {
        if !colored.is_subset(NodeSet::full(rank)) {
            return Err(Error::RootIndex { index: colored.iter().last().unwrap_or(0), rank });
        }
        if colors.len() != colored.len() {
            return Err(Error::RankMismatch { expected: colored.len(), actual: colors.len() });
        }
        let red = colored.iter().zip(colors).filter(|(_, &c)| c == Color::Red).map(|(i, _)| i).collect();
        Ok(ColoredDynkinDiagram { rank, colored, red })
    }

    /// Parses one character per vertex: `R`, `B`, or `o`/`.` for uncolored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut colored = NodeSet::EMPTY;
        let mut red = NodeSet::EMPTY;
        let chars: Vec<char> = s.trim().chars().collect();
        for (k, ch) in chars.iter().enumerate() {
            match ch {
                'R' | 'r' => {
                    colored = colored.with(k + 1);
                    red = red.with(k + 1);
                }
                'B' | 'b' => colored = colored.with(k + 1),
                'o' | '.' => {}
                other => return Err(Error::Unsupported(format!("diagram character {other:?}"))),
            }
        }
        Ok(ColoredDynkinDiagram { rank: chars.len(), colored, red })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The colored vertex set `S`.
    pub fn colored(&self) -> NodeSet {
        self.colored
    }

    pub fn color(&self, i: usize) -> Option<Color> {
        if !self.colored.contains(i) {
            None
        } else if self.red.contains(i) {
            Some(Color::Red)
        } else {
            Some(Color::Blue)
        }
    }

    /// Colors of `S` in increasing vertex order.
    pub fn colors(&self) -> Vec<Color> {
        self.colored.iter().map(|i| self.color(i).expect("colored vertex")).collect()
    }

    /// `η` as an `R`/`B` string over `S`.
    pub fn eta_string(&self) -> String {
        self.colors().iter().map(|c| c.letter()).collect()
    }

    pub fn uncolored_vertices(&self) -> Vec<usize> {
        self.colored.complement(self.rank).to_vec()
    }

    /// Full sign vector: `η` on `S`, `+1` elsewhere.
    fn signs(&self) -> SignVector {
        SignVector::from_negative_set(self.rank, self.red)
    }

    fn sort_key(&self) -> (Vec<usize>, Vec<Color>) {
        (self.colored.to_vec(), self.colors())
    }
}

impl fmt::Display for ColoredDynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.rank {
            let ch = self.color(i).map_or('o', Color::letter);
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ColoredDynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({self})")
    }
}

/// Colors the `j`-th uncolored vertex Red (`c = 1`) or Blue (`c = 2`) and
/// returns the face sign `(-1)^(j+c+1)`.
pub fn diagram_boundary(d: &ColoredDynkinDiagram, j: usize, c: usize) -> Result<(i8, ColoredDynkinDiagram)> {
    let free = d.uncolored_vertices();
    if j == 0 || j > free.len() {
        return Err(Error::BoundaryPosition { position: j, available: free.len() });
    }
    let color = match c {
        1 => Color::Red,
        2 => Color::Blue,
        other => return Err(Error::BoundaryColor(other)),
    };
    let v = free[j - 1];
    let mut out = *d;
    out.colored = out.colored.with(v);
    if color == Color::Red {
        out.red = out.red.with(v);
    }
    let sign = if (j + c + 1) % 2 == 0 { 1 } else { -1 };
    Ok((sign, out))
}

/// Action of `x ∈ W_S` on a diagram with colored set `S`.
pub fn ws_act_on_diagram(group: &WeylGroup, x: ElementId, d: &ColoredDynkinDiagram) -> Result<ColoredDynkinDiagram> {
    if !group.in_parabolic(x, d.colored) {
        return Err(Error::NotInParabolic { word: group.word(x).to_vec(), set: d.colored.to_string() });
    }
    Ok(act(group, x, d)?.0)
}

/// Pushes `x` through the full sign vector of `d`. Also returns the product of
/// the resulting signs on the uncolored vertices.
fn act(group: &WeylGroup, x: ElementId, d: &ColoredDynkinDiagram) -> Result<(ColoredDynkinDiagram, i8)> {
    let e = apply_weyl(group, x, d.signs())?;
    let neg = e.negative_set();
    let out = ColoredDynkinDiagram { rank: d.rank, colored: d.colored, red: neg.intersection(d.colored) };
    let twist = if neg.difference(d.colored).len() % 2 == 0 { 1 } else { -1 };
    Ok((out, twist))
}

/// A cell: a colored diagram with a minimal left coset representative of `W / W_S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub diagram: ColoredDynkinDiagram,
    pub coset_rep: ElementId,
}

impl Cell {
    /// Canonical cell for the class of `(w, D)`.
    pub fn canonical(group: &WeylGroup, w: ElementId, diagram: ColoredDynkinDiagram) -> Self {
        Cell { diagram, coset_rep: group.min_coset_rep(w, diagram.colored) }
    }

    pub fn dimension(&self) -> usize {
        self.diagram.rank - self.diagram.colored.len()
    }

    pub fn codimension(&self) -> usize {
        self.diagram.colored.len()
    }

    pub fn is_canonical(&self, group: &WeylGroup) -> bool {
        group.min_coset_rep(self.coset_rep, self.diagram.colored) == self.coset_rep
    }
}

/// Minimal representatives of `W / W_S` ordered by reduced word.
pub fn coset_representatives(group: &WeylGroup, subset: NodeSet) -> Vec<ElementId> {
    let mut reps: Vec<ElementId> =
        group.ids().filter(|&w| subset.iter().all(|i| !group.is_right_descent(w, i))).collect();
    reps.sort_by(|&a, &b| group.word(a).cmp(group.word(b)));
    reps
}

/// All cells of codimension `k` in basis order.
pub fn enumerate_cells(group: &WeylGroup, k: usize) -> Vec<Cell> {
    let l = group.rank();
    let mut out = Vec::new();
    for s in NodeSet::subsets_of_size(l, k) {
        let reps = coset_representatives(group, s);
        let mut diagrams: Vec<ColoredDynkinDiagram> = (0..1u32 << k)
            .map(|bits| {
                let red = s.iter().enumerate().filter(|(p, _)| bits >> p & 1 == 1).map(|(_, i)| i).collect();
                ColoredDynkinDiagram { rank: l, colored: s, red }
            })
            .collect();
        diagrams.sort_by_key(ColoredDynkinDiagram::sort_key);
        for d in diagrams {
            out.extend(reps.iter().map(|&w| Cell { diagram: d, coset_rep: w }));
        }
    }
    out
}

/// Closed-form number of codimension-`k` cells: `Σ_{|S|=k} 2^k |W| / |W_S|`.
pub fn expected_cell_count(group: &WeylGroup, k: usize) -> usize {
    NodeSet::subsets_of_size(group.rank(), k)
        .into_iter()
        .map(|s| (group.order() / group.parabolic_subgroup(s).order()) << k)
        .sum()
}

/// The cellular chain complex together with its cell bases.
#[derive(Clone, Debug)]
pub struct CellComplex {
    // cells[k] is the basis in dimension k
    cells: Vec<Vec<Cell>>,
    complex: ChainComplex,
}

impl CellComplex {
    pub fn cells(&self, dim: usize) -> &[Cell] {
        &self.cells[dim]
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    /// CSV cell table with columns `degree,S,eta,coset_word`.
    pub fn write_csv<W: Write>(&self, group: &WeylGroup, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for rec in self.records(group) {
            w.serialize(rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn records(&self, group: &WeylGroup) -> Vec<CellRecord> {
        self.cells
            .iter()
            .enumerate()
            .flat_map(|(k, cells)| {
                cells.iter().map(move |c| CellRecord {
                    degree: k,
                    s: c.diagram.colored.to_string(),
                    eta: c.diagram.eta_string(),
                    coset_word: word_string(group.word(c.coset_rep)),
                })
            })
            .collect()
    }
}

/// One row of the cell table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellRecord {
    pub degree: usize,
    #[serde(rename = "S")]
    pub s: String,
    pub eta: String,
    pub coset_word: String,
}

/// `e` for the identity, otherwise letters separated by spaces.
pub fn word_string(word: &[u8]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// Boundary of one cell as `(target, coefficient)` terms, before collection.
pub fn cell_boundary(group: &WeylGroup, cell: &Cell) -> Result<Vec<(Cell, i64)>> {
    let free = cell.diagram.uncolored_vertices();
    let mut terms = Vec::with_capacity(2 * free.len());
    for j in 1..=free.len() {
        for c in 1..=2 {
            let (sign, face) = diagram_boundary(&cell.diagram, j, c)?;
            let rep = group.min_coset_rep(cell.coset_rep, face.colored);
            let x = group.mul(group.inverse(rep), cell.coset_rep);
            let (moved, twist) = act(group, x, &face)?;
            terms.push((Cell { diagram: moved, coset_rep: rep }, i64::from(sign * twist)));
        }
    }
    Ok(terms)
}

/// Builds the cellular complex of the group's type.
pub fn build_chain_complex(group: &WeylGroup) -> Result<CellComplex> {
    let l = group.rank();
    let cells: Vec<Vec<Cell>> = (0..=l).map(|dim| enumerate_cells(group, l - dim)).collect();
    let index: Vec<HashMap<Cell, usize>> =
        cells.iter().map(|cs| cs.iter().enumerate().map(|(k, &c)| (c, k)).collect()).collect();
    let mut boundaries = Vec::with_capacity(l);
    for dim in 1..=l {
        let mut m = SparseMatrix::zeros(cells[dim - 1].len(), cells[dim].len());
        for (col, cell) in cells[dim].iter().enumerate() {
            for (target, coeff) in cell_boundary(group, cell)? {
                let row = *index[dim - 1]
                    .get(&target)
                    .ok_or_else(|| Error::Unsupported(format!("boundary cell {target:?} is not canonical")))?;
                m.add(row, col, coeff);
            }
        }
        boundaries.push(m);
    }
    let complex = ChainComplex::new(cells.iter().map(Vec::len).collect(), boundaries)?;
    Ok(CellComplex { cells, complex })
}
