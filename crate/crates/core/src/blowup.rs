//! Random blow-ups `G_k` and Monte-Carlo density estimates on them.

use itertools::Itertools;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::Basis;
use crate::density::{density, density_profile};
use crate::domination::ColorAdjacency;
use crate::epsilon::{epsilon_case, EpsilonCase};
use crate::error::BlowupError;
use crate::graph::{Color, TricoloredGraph, COLORS};
use crate::vector::RationalVector;

/// Largest blow-up order accepted by [`blow_up`].
pub const MAX_BLOWUP_VERTICES: usize = 5000;

/// Graphs up to this order are counted exactly instead of sampled.
pub const EXACT_LIMIT: usize = 12;

/// Independent generator streams used by every sampler; fixed so that results
/// do not depend on the thread count.
const STREAMS: u64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec {
    pub base: TricoloredGraph,
    pub k: usize,
    pub seed: u64,
}

impl BlowupSpec {
    pub fn new(base: TricoloredGraph, k: usize, seed: u64) -> Result<Self, BlowupError> {
        if base.n() < 2 {
            return Err(BlowupError::BaseTooSmall(2));
        }
        if k == 0 {
            return Err(BlowupError::ZeroFactor);
        }
        let order = base.n() * k;
        if order > MAX_BLOWUP_VERTICES {
            return Err(BlowupError::Oversize(order));
        }
        Ok(BlowupSpec { base, k, seed })
    }

    pub fn order(&self) -> usize {
        self.base.n() * self.k
    }
}

/// Colors of `mask` (bit `c - 1` for color `c`) in increasing order.
fn mask_colors(mask: u8) -> Vec<Color> {
    COLORS.into_iter().filter(|c| mask >> (c - 1) & 1 == 1).collect()
}

/// Base vertex `v` becomes vertices `v*k .. (v+1)*k`. Edges inside a clique
/// are drawn uniformly from the colors at `v` in the base, in row-major
/// order; edges between cliques copy the base edge.
pub fn blow_up(spec: &BlowupSpec) -> TricoloredGraph {
    let BlowupSpec { base, k, seed } = spec;
    let k = *k;
    let palettes: Vec<Vec<Color>> = (0..base.n()).map(|v| mask_colors(base.incident_colors(v))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
    TricoloredGraph::from_fn(spec.order(), |x, y| {
        let (u, v) = (x / k, y / k);
        if u == v {
            let p = &palettes[u];
            p[rng.gen_range(0..p.len())]
        } else {
            base.color(u, v)
        }
    })
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `samples` over the fixed streams and runs `f(rng, count)` on each.
fn per_stream<T: Send>(samples: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng, usize) -> T + Sync) -> Vec<T> {
    (0..STREAMS)
        .into_par_iter()
        .map(|s| {
            let count = samples / STREAMS as usize + usize::from((s as usize) < samples % STREAMS as usize);
            f(&mut stream_rng(seed, s), count)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub estimate: f64,
    /// `3 * sqrt(p (1 - p) / samples)`; zero for exact counts.
    pub radius: f64,
    pub samples: usize,
    pub exact: bool,
}

/// Estimates the induced density of `h` in `g` from `samples` uniform
/// `|h|`-subsets. Counts exactly when `g` has at most [`EXACT_LIMIT`]
/// vertices or `h` is a single vertex.
pub fn estimate_density(
    h: &TricoloredGraph,
    g: &TricoloredGraph,
    samples: usize,
    seed: u64,
) -> Result<DensityEstimate, BlowupError> {
    let l = h.n();
    let basis = Basis::get(l)?;
    if l > g.n() {
        return Err(crate::error::GraphError::PatternTooLarge { small: l, large: g.n() }.into());
    }
    if g.n() <= EXACT_LIMIT || l == 1 {
        let p = density(h, g)?.to_f64().unwrap_or(f64::NAN);
        return Ok(DensityEstimate { estimate: p, radius: 0.0, samples: 0, exact: true });
    }
    let target = basis.class_of(h);
    let hits: usize = per_stream(samples, seed, |rng, count| {
        (0..count).filter(|_| basis.class_of_induced(g, &sample(rng, g.n(), l).into_vec()) == target).count()
    })
    .into_iter()
    .sum();
    let p = hits as f64 / samples.max(1) as f64;
    Ok(DensityEstimate {
        estimate: p,
        radius: 3.0 * (p * (1.0 - p) / samples.max(1) as f64).sqrt(),
        samples,
        exact: false,
    })
}

/// Sampled distribution of five-vertex classes of `g`, in basis order.
/// Every sample feeds all 142 classes at once.
pub fn class_histogram(g: &TricoloredGraph, samples: usize, seed: u64) -> Vec<f64> {
    let top = Basis::top();
    let counts = per_stream(samples, seed, |rng, count| {
        let mut c = vec![0usize; top.len()];
        for _ in 0..count {
            c[top.class_of_induced(g, &sample(rng, g.n(), 5).into_vec())] += 1;
        }
        c
    });
    let mut total = vec![0usize; top.len()];
    for c in counts {
        total.iter_mut().zip(c).for_each(|(t, x)| *t += x);
    }
    total.into_iter().map(|x| x as f64 / samples.max(1) as f64).collect()
}

/// Five-vertex class distribution of `G_k`: exact when `G_k` is small,
/// sampled otherwise.
pub fn blowup_profile(spec: &BlowupSpec, samples: usize) -> Result<Vec<f64>, BlowupError> {
    let g = blow_up(spec);
    if g.n() < 5 {
        return Err(BlowupError::BaseTooSmall(5usize.div_ceil(spec.k)));
    }
    if g.n() <= EXACT_LIMIT {
        return Ok(density_profile(5, &g)?.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect());
    }
    Ok(class_histogram(&g, samples, spec.seed))
}

/// `sum_H v[H] p(H, G_k)` with densities from [`blowup_profile`].
pub fn empirical_functional(v: &RationalVector, spec: &BlowupSpec, samples: usize) -> Result<f64, BlowupError> {
    Ok(v.dot_f64(&blowup_profile(spec, samples)?))
}

/// Extra vertices allowed beyond the base-level bound, per correction case.
pub fn additive_term(case: EpsilonCase, k: usize) -> f64 {
    let k = k as f64;
    match case {
        EpsilonCase::Covered => 0.0,
        EpsilonCase::Zero => k / 3.0,
        EpsilonCase::OneSixth => k / 2.0,
        EpsilonCase::OneHalf => 5.0 * k / 6.0,
    }
}

pub fn case_label(case: EpsilonCase) -> &'static str {
    match case {
        EpsilonCase::Covered => "-1/3",
        EpsilonCase::Zero => "0",
        EpsilonCase::OneSixth => "1/6",
        EpsilonCase::OneHalf => "1/2",
    }
}

/// Slack as a fraction of `k`.
pub const SLACK: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub base: String,
    pub k: usize,
    pub seed: u64,
    pub sigma: String,
    pub color: Color,
    pub case: String,
    pub additive: f64,
    /// Sampled quadruples that induce the type.
    pub trials: usize,
    pub attempts: usize,
    pub violations: usize,
    /// Largest `(|W| - |V| k - additive) / k` seen.
    pub max_excess: f64,
    pub vacuous: bool,
    /// At most 1% of the trials exceed the bound by more than `SLACK * k`.
    pub pass: bool,
}

/// Samples quadruples `(w_1, .., w_4)` of `G_k` inducing `sigma` with its
/// vertex order and compares the set `W` they strongly `c`-dominate with
/// `|V| k` plus the additive term of the correction case of `(sigma, c)`.
///
/// `V` is the set of base vertices strongly `c`-dominated by the cliques of
/// the `w_i`, plus the clique of any `w_i` with a `c`-neighbor among the
/// `w`'s in its own clique.
pub fn check_domination_slack(
    base: &TricoloredGraph,
    sigma: &TricoloredGraph,
    c: Color,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<SlackReport, BlowupError> {
    if base.n() < 4 {
        return Err(BlowupError::BaseTooSmall(4));
    }
    if sigma.n() != 4 {
        return Err(crate::error::GraphError::WrongEdgeCount { n: 4, expected: 6, found: sigma.colors().len() }.into());
    }
    let spec = BlowupSpec::new(base.clone(), k, seed)?;
    let g = blow_up(&spec);
    let adj = ColorAdjacency::new(&g);
    let case = epsilon_case(sigma, c);
    let additive = additive_term(case, k);
    let max_attempts = trials.saturating_mul(5000).max(100_000);
    let mut rng = stream_rng(seed, STREAMS);
    let (mut done, mut attempts, mut violations) = (0usize, 0usize, 0usize);
    let mut max_excess = f64::NEG_INFINITY;
    while done < trials && attempts < max_attempts {
        attempts += 1;
        let w = sample(&mut rng, g.n(), 4).into_vec();
        let induces = (0..4).tuple_combinations().all(|(a, b)| g.color(w[a], w[b]) == sigma.color(a, b));
        if !induces {
            continue;
        }
        done += 1;
        let cliques: Vec<usize> = w.iter().map(|x| x / k).collect();
        let mut v_set = vec![false; base.n()];
        for (u, slot) in v_set.iter_mut().enumerate() {
            *slot = cliques.iter().any(|&v| v != u && base.color(u, v) == c);
        }
        for (a, b) in (0..4).tuple_combinations() {
            if cliques[a] == cliques[b] && sigma.color(a, b) == c {
                v_set[cliques[a]] = true;
            }
        }
        let v_size = v_set.iter().filter(|&&b| b).count();
        let w_size = adj.dominated_count(&w, c) as f64;
        let excess = w_size - (v_size * k) as f64 - additive;
        max_excess = max_excess.max(excess / k as f64);
        if excess > SLACK * k as f64 {
            violations += 1;
        }
    }
    Ok(SlackReport {
        base: base.to_string(),
        k,
        seed,
        sigma: sigma.to_string(),
        color: c,
        case: case_label(case).to_string(),
        additive,
        trials: done,
        attempts,
        violations,
        max_excess: if done == 0 { 0.0 } else { max_excess },
        vacuous: done == 0,
        pass: violations * 100 <= done,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub base: String,
    pub k: usize,
    pub seed: u64,
    pub functional: String,
    pub estimate: f64,
    /// Three standard errors of the shared-sample estimate.
    pub radius: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Evaluates each `(name, vector)` on one shared sample of `G_k` and checks
/// `estimate >= bound`. Vectors are divided by their largest absolute entry
/// first, so that the tolerance is on a common scale.
pub fn check_functionals(
    spec: &BlowupSpec,
    vectors: &[(String, &RationalVector)],
    samples: usize,
    bound: f64,
) -> Result<Vec<FunctionalReport>, BlowupError> {
    let profile = blowup_profile(spec, samples)?;
    let exact = spec.order() <= EXACT_LIMIT;
    Ok(vectors
        .iter()
        .map(|(name, v)| {
            let scale = v.max_abs().to_f64().filter(|s| *s > 0.0).unwrap_or(1.0);
            let entries: Vec<f64> = v.to_f64().iter().map(|x| x / scale).collect();
            let estimate: f64 = entries.iter().zip(&profile).map(|(a, p)| a * p).sum();
            let radius = if exact {
                0.0
            } else {
                let second: f64 = entries.iter().zip(&profile).map(|(a, p)| a * a * p).sum();
                3.0 * ((second - estimate * estimate).max(0.0) / samples.max(1) as f64).sqrt()
            };
            FunctionalReport {
                base: spec.base.to_string(),
                k: spec.k,
                seed: spec.seed,
                functional: name.clone(),
                estimate,
                radius,
                bound,
                pass: estimate >= bound,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::build_w3;

    fn g(s: &str) -> TricoloredGraph {
        s.parse().unwrap()
    }

    #[test]
    fn edge_blow_up() {
        let spec = BlowupSpec::new(g("2"), 3, 1).unwrap();
        let h = blow_up(&spec);
        assert_eq!(h.n(), 6);
        assert_eq!(h, TricoloredGraph::monochromatic(6, 2));
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(BlowupSpec::new(g("1"), 2501, 0), Err(BlowupError::Oversize(5002)));
        assert_eq!(BlowupSpec::new(g("1"), 0, 0), Err(BlowupError::ZeroFactor));
        assert_eq!(BlowupSpec::new(TricoloredGraph::monochromatic(1, 1), 3, 0), Err(BlowupError::BaseTooSmall(2)));
    }

    #[test]
    fn reproducible_and_seed_sensitive() {
        let a = blow_up(&BlowupSpec::new(g("123"), 20, 9).unwrap());
        let b = blow_up(&BlowupSpec::new(g("123"), 20, 9).unwrap());
        let c = blow_up(&BlowupSpec::new(g("123"), 20, 10).unwrap());
        assert_eq!(a.to_tcg(), b.to_tcg());
        assert_ne!(a, c);
    }

    #[test]
    fn vertex_colors_follow_base() {
        // rainbow triangle: vertex 0 meets 1 and 2, vertex 1 meets 1 and 3, vertex 2 meets 2 and 3
        let base = g("123");
        let k = 15;
        let h = blow_up(&BlowupSpec::new(base.clone(), k, 4).unwrap());
        for x in 0..h.n() {
            let v = x / k;
            let inside = (v * k..(v + 1) * k).filter(|&y| y != x).fold(0u8, |m, y| m | 1 << (h.color(x, y) - 1));
            assert_eq!(inside & !base.incident_colors(v), 0);
            assert_eq!(h.incident_colors(x), base.incident_colors(v));
        }
    }

    #[test]
    fn monochromatic_clique_for_single_color_vertex() {
        // vertex 0 of "11" meets only color 1
        let h = blow_up(&BlowupSpec::new(g("113"), 10, 2).unwrap());
        for x in 0..10 {
            for y in x + 1..10 {
                assert_eq!(h.color(x, y), 1);
            }
        }
    }

    #[test]
    fn trivial_densities() {
        let big = TricoloredGraph::monochromatic(200, 3);
        let e = estimate_density(&TricoloredGraph::monochromatic(1, 1), &big, 100, 0).unwrap();
        assert_eq!(e.estimate, 1.0);
        let e = estimate_density(&TricoloredGraph::monochromatic(3, 3), &big, 1000, 0).unwrap();
        assert_eq!(e.estimate, 1.0);
    }

    #[test]
    fn sampled_density_within_radius_of_exact() {
        // g is above the exact limit, so compare against the exact count directly
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let host = TricoloredGraph::from_fn(16, |_, _| rng.gen_range(1..=3));
        let h = g("112");
        let exact = density(&h, &host).unwrap().to_f64().unwrap();
        let mut inside = 0;
        for seed in 0..200 {
            let e = estimate_density(&h, &host, 2000, seed).unwrap();
            assert!(!e.exact);
            if (e.estimate - exact).abs() <= e.radius {
                inside += 1;
            }
        }
        assert!(inside >= 198, "{inside}/200");
    }

    #[test]
    fn kierstead_blow_up_converges() {
        let base = g("132");
        for h in Basis::get(3).unwrap().representatives() {
            let a = estimate_density(&h, &blow_up(&BlowupSpec::new(base.clone(), 60, 1).unwrap()), 40_000, 5).unwrap();
            let b = estimate_density(&h, &blow_up(&BlowupSpec::new(base.clone(), 120, 1).unwrap()), 40_000, 6).unwrap();
            assert!((a.estimate - b.estimate).abs() <= 0.03, "{h:?}: {} vs {}", a.estimate, b.estimate);
        }
    }

    #[test]
    fn unit_functional_is_one() {
        let spec = BlowupSpec::new(g("132"), 40, 1).unwrap();
        let v = empirical_functional(&RationalVector::ones(), &spec, 5000).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        // exact path
        let small = BlowupSpec::new(g("132"), 3, 1).unwrap();
        assert_eq!(empirical_functional(&RationalVector::ones(), &small, 0).unwrap(), 1.0);
    }

    #[test]
    fn three_colored_vertices_never_appear_over_kierstead() {
        let spec = BlowupSpec::new(g("132"), 40, 1).unwrap();
        assert_eq!(empirical_functional(&build_w3(), &spec, 20_000).unwrap(), 0.0);
    }

    #[test]
    fn additive_terms() {
        assert_eq!(additive_term(EpsilonCase::Covered, 120), 0.0);
        assert_eq!(additive_term(EpsilonCase::Zero, 120), 40.0);
        assert_eq!(additive_term(EpsilonCase::OneSixth, 120), 60.0);
        assert_eq!(additive_term(EpsilonCase::OneHalf, 120), 100.0);
    }

    #[test]
    fn slack_check_on_a_covered_type() {
        // perfect matching in color 1 on (01) and (23), the other edges 2 and 3
        let sigma = g("123321");
        assert_eq!(epsilon_case(&sigma, 1), EpsilonCase::Covered);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let base = TricoloredGraph::from_fn(6, |_, _| rng.gen_range(1..=3));
        let r = check_domination_slack(&base, &sigma, 1, 40, 50, 3).unwrap();
        assert!(r.vacuous || r.max_excess <= 1e-9, "{r:?}");
    }
}
