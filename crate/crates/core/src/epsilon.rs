//! Second-order correction terms for the four-vertex domination inequalities,
//! and the four-vertex types they are attached to.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;

use crate::canon::{canonical_form, vertex_canonical_form, CanonicalForm};
use crate::graph::{Color, TricoloredGraph, COLORS};
use crate::Rational;

/// The four possible correction values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EpsilonCase {
    /// Every labeled vertex meets an edge of color `c`.
    Covered,
    /// None of the other cases.
    Zero,
    /// At least two `c`-edges and a vertex all of whose edges share one color other than `c`.
    OneSixth,
    /// Exactly one `c`-edge.
    OneHalf,
}

impl EpsilonCase {
    pub fn value(self) -> Rational {
        let (n, d) = match self {
            EpsilonCase::Covered => (-1, 3),
            EpsilonCase::Zero => (0, 1),
            EpsilonCase::OneSixth => (1, 6),
            EpsilonCase::OneHalf => (1, 2),
        };
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn is_admissible(self) -> bool {
        matches!(self, EpsilonCase::Covered | EpsilonCase::Zero)
    }
}

/// Classifies a four-vertex type against color `c`.
pub fn epsilon_case(sigma: &TricoloredGraph, c: Color) -> EpsilonCase {
    let n = sigma.n();
    let c_edges = sigma.colors().iter().filter(|&&x| x == c).count();
    if c_edges == 1 {
        return EpsilonCase::OneHalf;
    }
    if (0..n).all(|v| sigma.color_degree(v, c) > 0) {
        return EpsilonCase::Covered;
    }
    let c_bit = 1u8 << (c - 1);
    let has_monochrome_other = (0..n).any(|v| {
        let m = sigma.incident_colors(v);
        m.count_ones() == 1 && m != c_bit
    });
    if c_edges >= 2 && has_monochrome_other {
        return EpsilonCase::OneSixth;
    }
    EpsilonCase::Zero
}

pub fn compute_epsilon(sigma: &TricoloredGraph, c: Color) -> Rational {
    epsilon_case(sigma, c).value()
}

/// Published correction values, `PUBLISHED_EPSILON[c - 1][i - 1]` as `(num, den)`.
pub const PUBLISHED_EPSILON: [[(i64, i64); 7]; 3] = [
    [(-1, 3), (0, 1), (-1, 3), (-1, 3), (0, 1), (0, 1), (0, 1)],
    [(1, 2), (0, 1), (1, 6), (-1, 3), (-1, 3), (-1, 3), (0, 1)],
    [(1, 2), (1, 2), (1, 2), (1, 2), (1, 2), (0, 1), (0, 1)],
];

pub fn published_epsilon(i: usize, c: Color) -> Rational {
    let (n, d) = PUBLISHED_EPSILON[(c - 1) as usize][i - 1];
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Correction values computed from seven concrete four-vertex types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonTable {
    values: [[Rational; 3]; 7],
}

impl EpsilonTable {
    pub fn compute(sigmas: &[TricoloredGraph; 7]) -> Self {
        let values = std::array::from_fn(|i| std::array::from_fn(|c| compute_epsilon(&sigmas[i], c as Color + 1)));
        EpsilonTable { values }
    }

    pub fn published() -> Self {
        let values = std::array::from_fn(|i| std::array::from_fn(|c| published_epsilon(i + 1, c as Color + 1)));
        EpsilonTable { values }
    }

    /// Value for type index `i` in `1..=7` and color `c`.
    pub fn get(&self, i: usize, c: Color) -> &Rational {
        &self.values[i - 1][(c - 1) as usize]
    }

    /// The `(i, c)` pairs with a nonpositive value, ordered by `i` then `c`.
    pub fn admissible_pairs(&self) -> Vec<(usize, Color)> {
        let zero = Rational::from_integer(0.into());
        let mut out = Vec::new();
        for i in 1..=7 {
            for c in COLORS {
                if *self.get(i, c) <= zero {
                    out.push((i, c));
                }
            }
        }
        out
    }
}

/// One reading of the seven four-vertex types, each with concrete colors.
///
/// Vertex order inside each type is irrelevant for everything built from it
/// (the inequalities sum over all extensions), so each type is stored in its
/// vertex-canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    sigmas: [TricoloredGraph; 7],
}

impl Interpretation {
    pub fn new(sigmas: [TricoloredGraph; 7]) -> Self {
        Interpretation { sigmas }
    }

    pub fn sigma(&self, i: usize) -> &TricoloredGraph {
        &self.sigmas[i - 1]
    }

    pub fn sigmas(&self) -> &[TricoloredGraph; 7] {
        &self.sigmas
    }

    pub fn epsilon_table(&self) -> EpsilonTable {
        EpsilonTable::compute(&self.sigmas)
    }

    pub fn matches_published(&self) -> bool {
        self.epsilon_table() == EpsilonTable::published()
    }

    /// Identifier of the form `s1=112233/s2=...`, listing each type's color digits.
    pub fn id(&self) -> String {
        self.sigmas.iter().enumerate().map(|(i, s)| format!("s{}={}", i + 1, s)).collect::<Vec<_>>().join("/")
    }

    pub fn parse_id(id: &str) -> Option<Interpretation> {
        let parts: Vec<&str> = id.split('/').collect();
        if parts.len() != 7 {
            return None;
        }
        let mut sigmas = Vec::with_capacity(7);
        for (i, part) in parts.iter().enumerate() {
            let digits = part.strip_prefix(&format!("s{}=", i + 1))?;
            let g: TricoloredGraph = digits.parse().ok()?;
            if g.n() != 4 {
                return None;
            }
            sigmas.push(g);
        }
        Some(Interpretation { sigmas: sigmas.try_into().ok()? })
    }
}

impl fmt::Debug for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Four-vertex colorings (up to vertex relabeling) whose correction values
/// for colors 1, 2, 3 equal column `i` of the published table, and whose
/// nonpositive entries all refer to colors present in the coloring.
pub fn column_candidates(i: usize) -> Vec<TricoloredGraph> {
    let forms: BTreeSet<CanonicalForm> = (0..729)
        .map(|idx| TricoloredGraph::from_coloring_index(4, idx))
        .filter(|g| COLORS.iter().all(|&c| compute_epsilon(g, c) == published_epsilon(i, c)))
        .filter(|g| COLORS.iter().all(|&c| !epsilon_case(g, c).is_admissible() || g.colors().contains(&c)))
        .map(|g| vertex_canonical_form(&g).expect("n = 4"))
        .collect();
    forms.into_iter().map(|f| f.representative()).collect()
}

/// Every interpretation reproducing the published table in which the seven
/// types are pairwise non-isomorphic (as elements of `F_4`), sorted.
///
/// A type is only usable in a column if each color `c` with a nonpositive
/// value actually appears on one of its edges: with no `c`-edge at all the
/// rule yields 0 but the domination bound behind it does not hold.
pub fn admissible_interpretations() -> Vec<Interpretation> {
    let columns: Vec<Vec<TricoloredGraph>> = (1..=7).map(column_candidates).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<TricoloredGraph> = Vec::new();
    let mut classes: Vec<CanonicalForm> = Vec::new();
    fn rec(
        columns: &[Vec<TricoloredGraph>],
        chosen: &mut Vec<TricoloredGraph>,
        classes: &mut Vec<CanonicalForm>,
        out: &mut Vec<Interpretation>,
    ) {
        let i = chosen.len();
        if i == columns.len() {
            out.push(Interpretation { sigmas: chosen.clone().try_into().expect("seven types") });
            return;
        }
        for g in &columns[i] {
            let class = canonical_form(g).expect("n = 4");
            if classes.contains(&class) {
                continue;
            }
            chosen.push(g.clone());
            classes.push(class);
            rec(columns, chosen, classes, out);
            chosen.pop();
            classes.pop();
        }
    }
    rec(&columns, &mut chosen, &mut classes, &mut out);
    out.sort();
    out
}
