//! Strong monochromatic domination: exact search, counterexample checks and
//! the extremal constructions.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::classes_by_extension;
use crate::error::DominationError;
use crate::graph::{Color, TricoloredGraph, COLORS};
use crate::json::RationalJson;
use crate::Rational;

/// Largest order searched exhaustively by [`best_domination`].
pub const EXHAUSTIVE_LIMIT: usize = 40;

/// Per-color neighborhoods as bitsets of `u64` words.
#[derive(Clone, Debug)]
pub struct ColorAdjacency {
    n: usize,
    words: usize,
    /// `bits[((c - 1) * n + v) * words ..]` is the `c`-neighborhood of `v`.
    bits: Vec<u64>,
}

impl ColorAdjacency {
    pub fn new(g: &TricoloredGraph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; 3 * n * words];
        for u in 0..n {
            for v in u + 1..n {
                let c = (g.color(u, v) - 1) as usize;
                bits[(c * n + u) * words + v / 64] |= 1 << (v % 64);
                bits[(c * n + v) * words + u / 64] |= 1 << (u % 64);
            }
        }
        ColorAdjacency { n, words, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, c: Color, v: usize) -> &[u64] {
        let start = ((c - 1) as usize * self.n + v) * self.words;
        &self.bits[start..start + self.words]
    }

    /// Union of the `c`-neighborhoods of `a`.
    pub fn dominated_bits(&self, a: &[usize], c: Color) -> Vec<u64> {
        let mut acc = vec![0u64; self.words];
        for &x in a {
            for (w, r) in acc.iter_mut().zip(self.row(c, x)) {
                *w |= r;
            }
        }
        acc
    }

    pub fn dominated_count(&self, a: &[usize], c: Color) -> usize {
        if self.words == 1 {
            return a.iter().fold(0u64, |acc, &x| acc | self.row(c, x)[0]).count_ones() as usize;
        }
        self.dominated_bits(a, c).iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// The vertices `y` having some `x` in `a`, `x != y`, with `xy` colored `c`.
///
/// This covers both halves of strong domination at once: vertices outside
/// `a` need a `c`-neighbor in `a`, and so do vertices inside `a`.
pub fn strongly_dominated(g: &TricoloredGraph, a: &[usize], c: Color) -> Result<Vec<usize>, DominationError> {
    validate_set(g.n(), a)?;
    let adj = ColorAdjacency::new(g);
    let bits = adj.dominated_bits(a, c);
    Ok((0..g.n()).filter(|&v| bits[v / 64] >> (v % 64) & 1 == 1).collect())
}

fn validate_set(n: usize, a: &[usize]) -> Result<(), DominationError> {
    if a.is_empty() {
        return Err(DominationError::EmptySet);
    }
    if let Some(&v) = a.iter().find(|&&v| v >= n) {
        return Err(DominationError::VertexOutOfRange { v, n });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationResult {
    pub n: usize,
    pub t: usize,
    pub color: Color,
    pub dominators: Vec<usize>,
    pub dominated: Vec<usize>,
    pub size: usize,
    /// False when the search was sampled; `size` is then only a lower bound.
    pub exhaustive: bool,
}

impl DominationResult {
    fn new(g: &TricoloredGraph, t: usize, color: Color, dominators: Vec<usize>, exhaustive: bool) -> Self {
        let dominated = strongly_dominated(g, &dominators, color).expect("dominators are valid");
        DominationResult { n: g.n(), t, color, size: dominated.len(), dominators, dominated, exhaustive }
    }

    /// `size / n` as an exact fraction.
    pub fn ratio(&self) -> Rational {
        Rational::new(self.size.into(), self.n.into())
    }

    /// `size >= 2n/3`, compared exactly.
    pub fn reaches_two_thirds(&self) -> bool {
        3 * self.size >= 2 * self.n
    }

    pub fn to_json(&self) -> DominationJson {
        DominationJson {
            n: self.n,
            t: self.t,
            color: self.color,
            dominators: self.dominators.clone(),
            size: self.size,
            ratio: RationalJson::from(&self.ratio()),
            exhaustive: self.exhaustive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationJson {
    pub n: usize,
    pub t: usize,
    pub color: Color,
    pub dominators: Vec<usize>,
    pub size: usize,
    pub ratio: RationalJson,
    pub exhaustive: bool,
}

/// Largest strongly monochromatically dominated set over all colors and all
/// sets of at most `t` vertices (`t > n` allows every set).
///
/// Ties go to the lexicographically first dominating set (as a sorted
/// sequence, so `{0} < {0, 1} < {0, 2}`), then to the smallest color. Above
/// [`EXHAUSTIVE_LIMIT`] vertices the search is greedy plus sampling and the
/// result is marked as a lower bound.
pub fn best_domination(g: &TricoloredGraph, t: usize) -> Result<DominationResult, DominationError> {
    let n = g.n();
    if t == 0 {
        return Err(DominationError::BadSetSize { t, n });
    }
    let adj = ColorAdjacency::new(g);
    if n > EXHAUSTIVE_LIMIT {
        return Ok(heuristic_domination(g, &adj, t));
    }
    let mut best: Option<(usize, Color, Vec<usize>)> = None;
    let mut stack: Vec<usize> = Vec::with_capacity(t);
    let mut masks = [0u64; 4];
    visit_subsets(&adj, t, 0, &mut stack, &mut masks, &mut best);
    let (_, color, set) = best.expect("n >= 1");
    Ok(DominationResult::new(g, t, color, set, true))
}

/// Depth-first walk over sorted subsets in lexicographic order. `masks[c]`
/// holds the dominated set of the current prefix for color `c`.
fn visit_subsets(
    adj: &ColorAdjacency,
    t: usize,
    from: usize,
    stack: &mut Vec<usize>,
    masks: &mut [u64; 4],
    best: &mut Option<(usize, Color, Vec<usize>)>,
) {
    for v in from..adj.n {
        let saved = *masks;
        for c in COLORS {
            masks[c as usize] |= adj.row(c, v)[0];
        }
        stack.push(v);
        for c in COLORS {
            let size = masks[c as usize].count_ones() as usize;
            if best.as_ref().is_none_or(|(s, _, _)| size > *s) {
                *best = Some((size, c, stack.clone()));
            }
        }
        if stack.len() < t {
            visit_subsets(adj, t, v + 1, stack, masks, best);
        }
        stack.pop();
        *masks = saved;
    }
}

fn heuristic_domination(g: &TricoloredGraph, adj: &ColorAdjacency, t: usize) -> DominationResult {
    let n = g.n();
    let mut best: Option<(usize, Color, Vec<usize>)> = None;
    let mut offer = |set: Vec<usize>, c: Color| {
        let mut set = set;
        set.sort_unstable();
        let size = adj.dominated_count(&set, c);
        let better = match &best {
            None => true,
            Some((s, bc, bs)) => size > *s || (size == *s && (&set, c) < (bs, *bc)),
        };
        if better {
            best = Some((size, c, set));
        }
    };
    // greedy from every start vertex
    for c in COLORS {
        for start in 0..n {
            let mut set = vec![start];
            while set.len() < t.min(n) {
                let next = (0..n)
                    .filter(|v| !set.contains(v))
                    .max_by_key(|&v| {
                        let mut s = set.clone();
                        s.push(v);
                        (adj.dominated_count(&s, c), std::cmp::Reverse(v))
                    })
                    .expect("t <= n");
                set.push(next);
            }
            offer(set, c);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..20_000 {
        let set = sample(&mut rng, n, t.min(n)).into_vec();
        let c = COLORS[rng.gen_range(0..3)];
        offer(set, c);
    }
    let (_, color, set) = best.expect("n >= 1");
    DominationResult::new(g, t, color, set, false)
}

/// True iff no set of at most four vertices strongly dominates `2n/3` vertices.
pub fn is_counterexample(g: &TricoloredGraph) -> Result<bool, DominationError> {
    if g.n() < 2 {
        return Err(DominationError::OutOfRange { what: "is_counterexample", n: g.n(), min: 2, max: usize::MAX });
    }
    let best = best_domination(g, 4)?;
    if !best.exhaustive {
        return Err(DominationError::OutOfRange { what: "is_counterexample", n: g.n(), min: 2, max: EXHAUSTIVE_LIMIT });
    }
    Ok(!best.reaches_two_thirds())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheckReport {
    pub n: usize,
    /// `"all-colorings"`, `"classes"` or `"sampled"`.
    pub mode: String,
    pub graphs: usize,
    pub counterexamples: usize,
    /// Smallest best-domination size seen over all graphs.
    pub min_size: usize,
    pub min_ratio: RationalJson,
}

/// Checks every coloring of `K_n` for `2 <= n <= 5`, or every isomorphism
/// class for `n = 6`. A counterexample is returned as an error with the
/// offending coloring.
pub fn exhaustive_theorem_check(n: usize) -> Result<TheoremCheckReport, DominationError> {
    if !(2..=6).contains(&n) {
        return Err(DominationError::OutOfRange { what: "exhaustive_theorem_check", n, min: 2, max: 6 });
    }
    let (graphs, mode): (Vec<TricoloredGraph>, &str) = if n <= 5 {
        let total = 3usize.pow(crate::graph::edge_count(n) as u32);
        ((0..total).map(|i| TricoloredGraph::from_coloring_index(n, i)).collect(), "all-colorings")
    } else {
        (classes_by_extension(n).expect("n = 6"), "classes")
    };
    let sizes: Vec<(usize, &TricoloredGraph)> =
        graphs.par_iter().map(|g| (best_domination(g, 4).expect("t = 4 is valid").size, g)).collect();
    if let Some((_, g)) = sizes.iter().find(|(s, _)| 3 * s < 2 * n) {
        return Err(DominationError::Counterexample { n, witness: g.to_tcg() });
    }
    let min_size = sizes.iter().map(|(s, _)| *s).min().expect("at least one graph");
    Ok(TheoremCheckReport {
        n,
        mode: mode.to_string(),
        graphs: graphs.len(),
        counterexamples: 0,
        min_size,
        min_ratio: RationalJson::from(&Rational::new(min_size.into(), n.into())),
    })
}

/// Checks `samples` uniformly random colorings of `K_n` for `2 <= n <= 40`.
pub fn sampled_theorem_check(n: usize, samples: usize, seed: u64) -> Result<TheoremCheckReport, DominationError> {
    if !(2..=EXHAUSTIVE_LIMIT).contains(&n) || samples == 0 {
        return Err(DominationError::OutOfRange { what: "sampled_theorem_check", n, min: 2, max: EXHAUSTIVE_LIMIT });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graphs: Vec<TricoloredGraph> =
        (0..samples).map(|_| TricoloredGraph::from_fn(n, |_, _| rng.gen_range(1..=3))).collect();
    let sizes: Vec<usize> = graphs.par_iter().map(|g| best_domination(g, 4).expect("t = 4 is valid").size).collect();
    if let Some(i) = sizes.iter().position(|s| 3 * s < 2 * n) {
        return Err(DominationError::Counterexample { n, witness: graphs[i].to_tcg() });
    }
    let min_size = *sizes.iter().min().expect("samples > 0");
    Ok(TheoremCheckReport {
        n,
        mode: "sampled".to_string(),
        graphs: samples,
        counterexamples: 0,
        min_size,
        min_ratio: RationalJson::from(&Rational::new(min_size.into(), n.into())),
    })
}

/// Three equal parts `V_1, V_2, V_3` (vertices `0..n/3` form `V_1`, and so
/// on). An edge inside `V_i` gets color `i`, between `V_1` and `V_2` color 1,
/// between `V_2` and `V_3` color 2, between `V_1` and `V_3` color 3.
pub fn kierstead(n: usize) -> Result<TricoloredGraph, DominationError> {
    if n == 0 || !n.is_multiple_of(3) {
        return Err(DominationError::NotMultipleOfThree(n));
    }
    let part = |v: usize| (v / (n / 3) + 1) as Color;
    Ok(TricoloredGraph::from_fn(n, |u, v| {
        let (i, j) = (part(u).min(part(v)), part(u).max(part(v)));
        if j - i <= 1 {
            i
        } else {
            3
        }
    }))
}

/// A clique on `2m` vertices in color 1 (vertices `0..2m`), a rainbow
/// triangle on `2m, 2m+1, 2m+2` with edge colors 1, 2, 3, and the clique
/// joined to the triangle in color 1 for vertices `0..m` and color 2 for the
/// rest.
pub fn rainbow_block(m: usize) -> Result<TricoloredGraph, DominationError> {
    if m == 0 {
        return Err(DominationError::OutOfRange { what: "rainbow_block", n: 0, min: 1, max: usize::MAX });
    }
    let k = 2 * m;
    Ok(TricoloredGraph::from_fn(k + 3, |u, v| match (u < k, v < k) {
        (true, true) => 1,
        (true, false) => {
            if u < m {
                1
            } else {
                2
            }
        }
        (false, false) => match (u - k, v - k) {
            (0, 1) => 1,
            (0, 2) => 2,
            _ => 3,
        },
        (false, true) => unreachable!("u < v"),
    }))
}

/// The triangle vertices of [`rainbow_block`].
pub fn rainbow_block_triangle(m: usize) -> [usize; 3] {
    [2 * m, 2 * m + 1, 2 * m + 2]
}

/// Every vertex triple whose three edges carry three distinct colors.
pub fn rainbow_triangles(g: &TricoloredGraph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (x, y, z) = (g.color(a, b), g.color(a, c), g.color(b, c));
                if x != y && y != z && x != z {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Best color for a fixed dominating set: `(color, size)`, smallest color on ties.
pub fn best_color_for(g: &TricoloredGraph, a: &[usize]) -> Result<(Color, usize), DominationError> {
    validate_set(g.n(), a)?;
    let adj = ColorAdjacency::new(g);
    Ok(COLORS
        .iter()
        .map(|&c| (c, adj.dominated_count(a, c)))
        .fold((1, 0), |best, cur| if cur.1 > best.1 { cur } else { best }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomPairReport {
    pub n: usize,
    pub seed: u64,
    pub pairs: usize,
    /// Mean of `|dominated| / n` over every sampled pair and every color.
    pub mean_fraction: f64,
    /// Maximum of `|dominated| / n` over every sampled pair and every color.
    pub max_fraction: f64,
}

/// Colors `K_n` uniformly at random and samples `pairs` vertex pairs.
pub fn random_pair_bound(n: usize, seed: u64, pairs: usize) -> Result<RandomPairReport, DominationError> {
    if n < 100 {
        return Err(DominationError::OutOfRange { what: "random_pair_bound", n, min: 100, max: usize::MAX });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = TricoloredGraph::from_fn(n, |_, _| rng.gen_range(1..=3));
    let adj = ColorAdjacency::new(&g);
    let mut sum = 0usize;
    let mut max = 0usize;
    for _ in 0..pairs {
        let pair = sample(&mut rng, n, 2).into_vec();
        for c in COLORS {
            let s = adj.dominated_count(&pair, c);
            sum += s;
            max = max.max(s);
        }
    }
    let denom = (3 * pairs.max(1) * n) as f64;
    Ok(RandomPairReport { n, seed, pairs, mean_fraction: sum as f64 / denom, max_fraction: max as f64 / n as f64 })
}

/// Whether every vertex meets edges of exactly two colors.
pub fn every_vertex_two_colored(g: &TricoloredGraph) -> bool {
    (0..g.n()).all(|v| g.incident_colors(v).count_ones() == 2)
}

/// Whether some vertex has all its edges in one color.
pub fn has_monochromatic_vertex(g: &TricoloredGraph) -> bool {
    (0..g.n()).any(|v| g.incident_colors(v).count_ones() == 1)
}
