//! Enumeration of isomorphism classes and the ordered bases `F_1 .. F_5`.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalForm, MAX_CANON_VERTICES};
use crate::error::GraphError;
use crate::graph::{edge_count, TricoloredGraph};

pub const MAX_LEVEL: usize = 5;

/// The ordered set of isomorphism classes on `level` vertices.
///
/// Classes are sorted by canonical key; position in that order is the basis
/// index used by every vector over this level. A lookup table maps each of
/// the `3^(level choose 2)` colorings directly to its class index.
#[derive(Debug)]
pub struct Basis {
    level: usize,
    keys: Vec<CanonicalForm>,
    index: HashMap<CanonicalForm, usize>,
    table: Vec<u16>,
}

impl Basis {
    fn build(level: usize) -> Basis {
        let total = 3usize.pow(edge_count(level) as u32);
        let forms: Vec<CanonicalForm> = (0..total)
            .into_par_iter()
            .map(|idx| canonical_form(&TricoloredGraph::from_coloring_index(level, idx)).expect("level <= 5"))
            .collect();
        let keys: Vec<CanonicalForm> = forms.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let index: HashMap<CanonicalForm, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let table = forms.iter().map(|k| index[k] as u16).collect();
        Basis { level, keys, index, table }
    }

    /// The shared basis at `level` (1..=5), built on first use.
    pub fn get(level: usize) -> Result<&'static Basis, GraphError> {
        static CACHE: [OnceLock<Basis>; MAX_LEVEL + 1] = [const { OnceLock::new() }; MAX_LEVEL + 1];
        if !(1..=MAX_LEVEL).contains(&level) {
            return Err(GraphError::LevelOutOfRange { level, min: 1, max: MAX_LEVEL });
        }
        Ok(CACHE[level].get_or_init(|| Basis::build(level)))
    }

    /// Shorthand for the level-5 basis, which indexes every [`crate::RationalVector`].
    pub fn top() -> &'static Basis {
        Basis::get(MAX_LEVEL).expect("level 5 is valid")
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[CanonicalForm] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> CanonicalForm {
        self.keys[i]
    }

    pub fn representative(&self, i: usize) -> TricoloredGraph {
        self.keys[i].representative()
    }

    pub fn representatives(&self) -> Vec<TricoloredGraph> {
        self.keys.iter().map(CanonicalForm::representative).collect()
    }

    pub fn index_of_key(&self, key: &CanonicalForm) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Class index of a graph on exactly `level` vertices, by table lookup.
    #[inline]
    pub fn class_of(&self, g: &TricoloredGraph) -> usize {
        debug_assert_eq!(g.n(), self.level);
        self.table[g.coloring_index()] as usize
    }

    /// Class index of the subgraph of `g` induced by `vertices` (in any order).
    #[inline]
    pub fn class_of_induced(&self, g: &TricoloredGraph, vertices: &[usize]) -> usize {
        debug_assert_eq!(vertices.len(), self.level);
        let mut idx = 0usize;
        for a in 0..vertices.len() {
            for b in a + 1..vertices.len() {
                idx = idx * 3 + (g.color(vertices[a], vertices[b]) - 1) as usize;
            }
        }
        self.table[idx] as usize
    }
}

/// One representative per isomorphism class on `l` vertices, sorted by key.
pub fn enumerate_unlabeled(l: usize) -> Result<Vec<TricoloredGraph>, GraphError> {
    Ok(Basis::get(l)?.representatives())
}

/// Class representatives on `n <= 7` vertices, built by extending every class
/// on `n - 1` vertices by one vertex in all `3^(n-1)` ways.
///
/// Every graph on `n` vertices arises this way (delete any vertex), so the
/// result is complete. Used for `n = 6, 7`, where scanning all colorings is
/// too slow.
pub fn classes_by_extension(n: usize) -> Result<Vec<TricoloredGraph>, GraphError> {
    if n <= MAX_LEVEL {
        return enumerate_unlabeled(n);
    }
    if n > MAX_CANON_VERTICES {
        return Err(GraphError::TooLarge { what: "classes_by_extension", n, max: MAX_CANON_VERTICES });
    }
    let smaller = classes_by_extension(n - 1)?;
    let ext = 3usize.pow((n - 1) as u32);
    let keys: BTreeSet<CanonicalForm> = smaller
        .par_iter()
        .flat_map_iter(|base| {
            (0..ext).map(move |mut code| {
                let mut new_colors = vec![0u8; n - 1];
                for slot in new_colors.iter_mut().rev() {
                    *slot = (code % 3) as u8 + 1;
                    code /= 3;
                }
                let g = TricoloredGraph::from_fn(n, |i, j| if j == n - 1 { new_colors[i] } else { base.color(i, j) });
                canonical_form(&g).expect("n <= 7")
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(keys.into_iter().map(|k| k.representative()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=5).map(|l| Basis::get(l).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 142]);
    }

    #[test]
    fn rejects_levels_outside_range() {
        assert!(enumerate_unlabeled(0).is_err());
        assert!(enumerate_unlabeled(6).is_err());
    }

    #[test]
    fn representatives_are_sorted_and_canonical() {
        let b = Basis::get(4).unwrap();
        for (i, g) in b.representatives().iter().enumerate() {
            assert_eq!(canonical_form(g).unwrap(), b.key(i));
            assert_eq!(b.class_of(g), i);
        }
        assert!(b.keys().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn extension_agrees_with_enumeration_at_five() {
        let direct = Basis::get(5).unwrap().keys().to_vec();
        let four = classes_by_extension(4).unwrap();
        let mut ext: Vec<CanonicalForm> = four
            .iter()
            .flat_map(|b| {
                (0..81).map(move |mut code| {
                    let mut nc = [0u8; 4];
                    for slot in nc.iter_mut().rev() {
                        *slot = (code % 3) as u8 + 1;
                        code /= 3;
                    }
                    canonical_form(&TricoloredGraph::from_fn(5, |i, j| if j == 4 { nc[i] } else { b.color(i, j) }))
                        .unwrap()
                })
            })
            .collect();
        ext.sort();
        ext.dedup();
        assert_eq!(ext, direct);
    }
}
