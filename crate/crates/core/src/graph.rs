//! Complete graphs whose edges carry one of three colors.

use std::fmt;
use std::str::FromStr;

use crate::error::GraphError;

/// Edge color. Valid values are 1, 2 and 3.
pub type Color = u8;

pub const COLORS: [Color; 3] = [1, 2, 3];

/// Number of unordered pairs on `n` vertices.
pub const fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the pair `{i, j}` (with `i < j`) in row-major upper-triangular order.
#[inline]
pub const fn edge_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// A permutation of the three colors, stored as the images of 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorPerm(pub [Color; 3]);

impl ColorPerm {
    pub const IDENTITY: ColorPerm = ColorPerm([1, 2, 3]);

    #[inline]
    pub fn apply(&self, c: Color) -> Color {
        self.0[(c - 1) as usize]
    }

    pub fn inverse(&self) -> ColorPerm {
        let mut inv = [0; 3];
        for c in COLORS {
            inv[(self.apply(c) - 1) as usize] = c;
        }
        ColorPerm(inv)
    }

    /// All six permutations, identity first.
    pub fn all() -> [ColorPerm; 6] {
        [
            ColorPerm([1, 2, 3]),
            ColorPerm([1, 3, 2]),
            ColorPerm([2, 1, 3]),
            ColorPerm([2, 3, 1]),
            ColorPerm([3, 1, 2]),
            ColorPerm([3, 2, 1]),
        ]
    }
}

/// A complete graph on `n` vertices with every edge colored 1, 2 or 3.
///
/// Vertices are `0..n`. Colors are stored in row-major upper-triangular
/// order: `(0,1), (0,2), .., (0,n-1), (1,2), ..`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TricoloredGraph {
    n: usize,
    colors: Vec<Color>,
}

impl TricoloredGraph {
    pub fn new(n: usize, colors: Vec<Color>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let expected = edge_count(n);
        if colors.len() != expected {
            return Err(GraphError::WrongEdgeCount { n, expected, found: colors.len() });
        }
        if let Some(&bad) = colors.iter().find(|&&c| !(1..=3).contains(&c)) {
            return Err(GraphError::InvalidColor(bad));
        }
        Ok(TricoloredGraph { n, colors })
    }

    pub(crate) fn from_raw(n: usize, colors: Vec<Color>) -> Self {
        debug_assert_eq!(colors.len(), edge_count(n));
        TricoloredGraph { n, colors }
    }

    pub fn monochromatic(n: usize, c: Color) -> Self {
        assert!((1..=3).contains(&c) && n >= 1);
        TricoloredGraph { n, colors: vec![c; edge_count(n)] }
    }

    /// Builds a graph from a function called once per pair `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Color) -> Self {
        assert!(n >= 1);
        let mut colors = Vec::with_capacity(edge_count(n));
        for i in 0..n {
            for j in i + 1..n {
                let c = f(i, j);
                assert!((1..=3).contains(&c), "color {c} out of range");
                colors.push(c);
            }
        }
        TricoloredGraph { n, colors }
    }

    /// Decodes the `index`-th coloring of `K_n` in base 3, first edge most significant.
    pub fn from_coloring_index(n: usize, mut index: usize) -> Self {
        let e = edge_count(n);
        let mut colors = vec![1; e];
        for slot in colors.iter_mut().rev() {
            *slot = (index % 3) as Color + 1;
            index /= 3;
        }
        TricoloredGraph { n, colors }
    }

    /// Inverse of [`TricoloredGraph::from_coloring_index`].
    pub fn coloring_index(&self) -> usize {
        self.colors.iter().fold(0, |acc, &c| acc * 3 + (c - 1) as usize)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    /// Color of the edge `uv`. Panics if `u == v`.
    #[inline]
    pub fn color(&self, u: usize, v: usize) -> Color {
        assert_ne!(u, v, "no loops in a complete graph");
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.colors[edge_index(self.n, i, j)]
    }

    pub fn set_color(&mut self, u: usize, v: usize, c: Color) {
        assert!((1..=3).contains(&c));
        assert_ne!(u, v);
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        self.colors[edge_index(self.n, i, j)] = c;
    }

    /// Subgraph induced by `vertices`, relabeled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> TricoloredGraph {
        let m = vertices.len();
        let mut colors = Vec::with_capacity(edge_count(m));
        for a in 0..m {
            for b in a + 1..m {
                colors.push(self.color(vertices[a], vertices[b]));
            }
        }
        TricoloredGraph { n: m, colors }
    }

    pub fn permute_colors(&self, perm: &ColorPerm) -> TricoloredGraph {
        TricoloredGraph { n: self.n, colors: self.colors.iter().map(|&c| perm.apply(c)).collect() }
    }

    /// Bitmask of colors on edges at `v`: bit `c - 1` set iff some edge at `v` has color `c`.
    pub fn incident_colors(&self, v: usize) -> u8 {
        (0..self.n).filter(|&u| u != v).fold(0, |m, u| m | 1 << (self.color(u, v) - 1))
    }

    /// Bitmask of colors used anywhere in the graph.
    pub fn used_colors(&self) -> u8 {
        self.colors.iter().fold(0, |m, &c| m | 1 << (c - 1))
    }

    pub fn color_degree(&self, v: usize, c: Color) -> usize {
        (0..self.n).filter(|&u| u != v && self.color(u, v) == c).count()
    }

    /// Color permutations mapping this graph onto itself with vertices fixed.
    pub fn color_stabilizer(&self) -> Vec<ColorPerm> {
        ColorPerm::all().into_iter().filter(|p| self.colors.iter().all(|&c| p.apply(c) == c)).collect()
    }

    /// Serializes to the two-line `.tcg` text format.
    pub fn to_tcg(&self) -> String {
        let digits: Vec<String> = self.colors.iter().map(|c| c.to_string()).collect();
        format!("{}\n{}\n", self.n, digits.join(" "))
    }

    pub fn parse_tcg(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| GraphError::Parse("missing vertex count".into()))?
            .parse()
            .map_err(|e| GraphError::Parse(format!("vertex count: {e}")))?;
        let colors = match lines.next() {
            Some(line) => line
                .split_whitespace()
                .map(|tok| tok.parse::<Color>().map_err(|e| GraphError::Parse(format!("color {tok:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        if lines.next().is_some() {
            return Err(GraphError::Parse("trailing content after color line".into()));
        }
        TricoloredGraph::new(n, colors)
    }
}

impl fmt::Debug for TricoloredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}[", self.n)?;
        for c in &self.colors {
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for TricoloredGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colors {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TricoloredGraph {
    type Err = GraphError;

    /// Parses a compact digit string such as `"112"` (a triangle). The vertex
    /// count is recovered from the number of digits.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let colors: Vec<Color> = s
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as Color).ok_or_else(|| GraphError::Parse(format!("bad digit {ch:?}"))))
            .collect::<Result<_, _>>()?;
        let n = (1..=64)
            .find(|&n| edge_count(n) == colors.len())
            .ok_or_else(|| GraphError::Parse(format!("{} digits is not a triangular number", colors.len())))?;
        TricoloredGraph::new(n, colors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_is_row_major() {
        let n = 5;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(edge_index(n, i, j), k);
                k += 1;
            }
        }
        assert_eq!(k, edge_count(n));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(TricoloredGraph::new(3, vec![1, 2]), Err(GraphError::WrongEdgeCount { .. })));
        assert!(matches!(TricoloredGraph::new(2, vec![4]), Err(GraphError::InvalidColor(4))));
        assert!(matches!(TricoloredGraph::new(0, vec![]), Err(GraphError::Empty)));
        assert!(TricoloredGraph::new(1, vec![]).is_ok());
    }

    #[test]
    fn tcg_round_trip() {
        let g: TricoloredGraph = "132".parse().unwrap();
        let text = g.to_tcg();
        assert_eq!(text, "3\n1 3 2\n");
        assert_eq!(TricoloredGraph::parse_tcg(&text).unwrap(), g);
        let k1 = TricoloredGraph::parse_tcg("1\n").unwrap();
        assert_eq!(k1.n(), 1);
        assert!(TricoloredGraph::parse_tcg("3\n1 2\n").is_err());
        assert!(TricoloredGraph::parse_tcg("x\n").is_err());
    }

    #[test]
    fn coloring_index_round_trip() {
        for idx in 0..729 {
            assert_eq!(TricoloredGraph::from_coloring_index(4, idx).coloring_index(), idx);
        }
    }

    #[test]
    fn stabilizer_sizes() {
        assert_eq!(TricoloredGraph::monochromatic(3, 2).color_stabilizer().len(), 2);
        assert_eq!("112".parse::<TricoloredGraph>().unwrap().color_stabilizer().len(), 1);
        assert_eq!("123".parse::<TricoloredGraph>().unwrap().color_stabilizer().len(), 1);
        assert_eq!(TricoloredGraph::monochromatic(1, 1).color_stabilizer().len(), 6);
    }

    #[test]
    fn incident_colors_mask() {
        let g: TricoloredGraph = "132".parse().unwrap();
        // edges: 01 -> 1, 02 -> 3, 12 -> 2
        assert_eq!(g.incident_colors(0), 0b101);
        assert_eq!(g.incident_colors(1), 0b011);
        assert_eq!(g.incident_colors(2), 0b110);
    }
}
