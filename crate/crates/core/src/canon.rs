//! Canonical forms under vertex permutations and color permutations.
//!
//! The canonical form of a graph is the lexicographically smallest color
//! sequence (row-major upper-triangular order) over every relabeling of the
//! vertices and every permutation of the colors. For a fixed vertex order the
//! smallest color relabeling is the one that numbers colors by first
//! appearance, so only the `n!` vertex orders need to be scanned.

use std::fmt;
use std::sync::OnceLock;

use crate::error::GraphError;
use crate::graph::{edge_count, Color, TricoloredGraph};

/// Largest vertex count accepted by exhaustive canonicalization.
pub const MAX_CANON_VERTICES: usize = 7;

/// Isomorphism-class key. Ordered first by vertex count, then by the color
/// sequence; this is exactly the lexicographic order of [`CanonicalForm::bytes`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: u8,
    code: u64,
}

impl CanonicalForm {
    pub(crate) fn from_colors(n: usize, colors: impl IntoIterator<Item = Color>) -> Self {
        let code = colors.into_iter().fold(0u64, |acc, c| (acc << 2) | c as u64);
        CanonicalForm { n: n as u8, code }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// The color sequence of the minimal representative.
    pub fn colors(&self) -> Vec<Color> {
        let e = edge_count(self.n());
        (0..e).map(|k| ((self.code >> (2 * (e - 1 - k))) & 3) as Color).collect()
    }

    /// Key bytes: the vertex count followed by the color sequence.
    pub fn bytes(&self) -> Vec<u8> {
        let mut out = vec![self.n];
        out.extend(self.colors());
        out
    }

    pub fn to_hex(&self) -> String {
        self.bytes().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Result<Self, GraphError> {
        if !s.len().is_multiple_of(2) || s.is_empty() {
            return Err(GraphError::Parse(format!("bad key length in {s:?}")));
        }
        let bytes = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(|e| GraphError::Parse(format!("key {s:?}: {e}"))))
            .collect::<Result<Vec<u8>, _>>()?;
        let n = bytes[0] as usize;
        if n > MAX_CANON_VERTICES {
            return Err(GraphError::TooLarge { what: "canonical key", n, max: MAX_CANON_VERTICES });
        }
        let g = TricoloredGraph::new(n, bytes[1..].to_vec())?;
        Ok(CanonicalForm::from_colors(n, g.colors().iter().copied()))
    }

    /// The graph whose color sequence is this key.
    pub fn representative(&self) -> TricoloredGraph {
        TricoloredGraph::from_raw(self.n(), self.colors())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// All permutations of `0..n` (as `new -> old` maps) in lexicographic order.
pub fn permutations(n: usize) -> &'static [Vec<u8>] {
    static TABLES: [OnceLock<Vec<Vec<u8>>>; MAX_CANON_VERTICES + 1] =
        [const { OnceLock::new() }; MAX_CANON_VERTICES + 1];
    assert!(n <= MAX_CANON_VERTICES);
    TABLES[n].get_or_init(|| {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(cur.clone());
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    })
}

fn check_size(g: &TricoloredGraph) -> Result<(), GraphError> {
    if g.n() > MAX_CANON_VERTICES {
        return Err(GraphError::TooLarge { what: "canonical_form", n: g.n(), max: MAX_CANON_VERTICES });
    }
    Ok(())
}

#[inline]
fn code_under(g: &TricoloredGraph, perm: &[u8], relabel_colors: bool) -> u64 {
    let n = g.n();
    let mut map = [0u8; 4];
    let mut next = 1u8;
    let mut code = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            let mut c = g.color(perm[a] as usize, perm[b] as usize);
            if relabel_colors {
                if map[c as usize] == 0 {
                    map[c as usize] = next;
                    next += 1;
                }
                c = map[c as usize];
            }
            code = (code << 2) | c as u64;
        }
    }
    code
}

/// Canonical key under vertex and color permutations.
pub fn canonical_form(g: &TricoloredGraph) -> Result<CanonicalForm, GraphError> {
    check_size(g)?;
    let code = permutations(g.n()).iter().map(|p| code_under(g, p, true)).min().unwrap();
    Ok(CanonicalForm { n: g.n() as u8, code })
}

/// Canonical key under vertex permutations only; colors keep their identity.
pub fn vertex_canonical_form(g: &TricoloredGraph) -> Result<CanonicalForm, GraphError> {
    check_size(g)?;
    let code = permutations(g.n()).iter().map(|p| code_under(g, p, false)).min().unwrap();
    Ok(CanonicalForm { n: g.n() as u8, code })
}

pub fn is_isomorphic(a: &TricoloredGraph, b: &TricoloredGraph) -> Result<bool, GraphError> {
    Ok(a.n() == b.n() && canonical_form(a)? == canonical_form(b)?)
}
