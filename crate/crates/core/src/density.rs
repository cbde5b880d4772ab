//! Exact induced-subgraph densities.

use itertools::Itertools;
use num_bigint::BigInt;

use crate::basis::{Basis, MAX_LEVEL};
use crate::canon::canonical_form;
use crate::error::GraphError;
use crate::graph::TricoloredGraph;
use crate::Rational;

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Probability that a uniformly random `|h|`-subset of `V(g)` induces a copy of `h`
/// (vertex and color permutations allowed).
pub fn density(h: &TricoloredGraph, g: &TricoloredGraph) -> Result<Rational, GraphError> {
    if h.n() > g.n() {
        return Err(GraphError::PatternTooLarge { small: h.n(), large: g.n() });
    }
    let total = binomial(g.n(), h.n());
    let hits = if h.n() <= MAX_LEVEL {
        let basis = Basis::get(h.n())?;
        let target = basis.class_of(h);
        (0..g.n()).combinations(h.n()).filter(|s| basis.class_of_induced(g, s) == target).count()
    } else {
        let target = canonical_form(h)?;
        let mut hits = 0;
        for s in (0..g.n()).combinations(h.n()) {
            if canonical_form(&g.induced(&s))? == target {
                hits += 1;
            }
        }
        hits
    };
    Ok(Rational::new(BigInt::from(hits), BigInt::from(total)))
}

/// Densities of every class of `F_l` in `g`, in basis order.
pub fn density_profile(l: usize, g: &TricoloredGraph) -> Result<Vec<Rational>, GraphError> {
    let basis = Basis::get(l)?;
    if l > g.n() {
        return Err(GraphError::PatternTooLarge { small: l, large: g.n() });
    }
    let mut counts = vec![0u64; basis.len()];
    for s in (0..g.n()).combinations(l) {
        counts[basis.class_of_induced(g, &s)] += 1;
    }
    let total = BigInt::from(binomial(g.n(), l));
    Ok(counts.into_iter().map(|c| Rational::new(BigInt::from(c), total.clone())).collect())
}
