//! The averaging operator checked against direct enumeration on concrete graphs.
//!
//! For a finite graph `G`, pairing the averaged vector with the level-5
//! density profile of `G` equals the expectation, over a uniformly random
//! injection of the type's vertices into `G` and uniformly random extra
//! vertices, of the flag coefficients. This holds exactly.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricolor_core::candidates::{inequality_vector, named_element, square_vector, SquareName};
use tricolor_core::density::density_profile;
use tricolor_core::{ColorPerm, Rational, TricoloredGraph};

fn random_graph(n: usize, seed: u64) -> TricoloredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TricoloredGraph::from_fn(n, |_, _| rng.gen_range(1..=3))
}

/// Color permutation making `g[nu]` equal to `sigma`, if any.
fn normalizer(g: &TricoloredGraph, nu: &[usize], sigma: &TricoloredGraph) -> Option<ColorPerm> {
    let sub = g.induced(nu);
    ColorPerm::all().into_iter().find(|p| sub.permute_colors(p) == *sigma)
}

fn falling(n: usize, k: usize) -> i64 {
    (0..k).map(|i| (n - i) as i64).product()
}

fn inequality_by_enumeration(g: &TricoloredGraph, sigma: &TricoloredGraph, c: u8) -> Rational {
    let n = g.n();
    let mut total = Rational::zero();
    for nu in (0..n).permutations(4) {
        let Some(p) = normalizer(g, &nu, sigma) else { continue };
        for u in (0..n).filter(|u| !nu.contains(u)) {
            let hit = nu.iter().any(|&x| p.apply(g.color(u, x)) == c);
            total += if hit { Rational::new((-1).into(), 3.into()) } else { Rational::new(2.into(), 3.into()) };
        }
    }
    total / Rational::from_integer(BigInt::from(falling(n, 4) * (n as i64 - 4)))
}

fn square_by_enumeration(g: &TricoloredGraph, name: SquareName, sigma: &TricoloredGraph) -> Rational {
    let n = g.n();
    let coeff = |p: &ColorPerm, nu: &[usize], u: usize| -> i64 {
        let t: Vec<u8> = nu.iter().map(|&x| p.apply(g.color(u, x))).collect();
        name.terms().iter().find(|(cols, _)| cols.as_slice() == t.as_slice()).map_or(0, |(_, a)| *a)
    };
    let mut total = 0i64;
    for nu in (0..n).permutations(3) {
        let Some(p) = normalizer(g, &nu, sigma) else { continue };
        let rest: Vec<usize> = (0..n).filter(|u| !nu.contains(u)).collect();
        for (&u, &v) in rest.iter().tuple_combinations() {
            total += 2 * coeff(&p, &nu, u) * coeff(&p, &nu, v);
        }
    }
    let pairs = ((n - 3) * (n - 4)) as i64;
    Rational::new(BigInt::from(total), BigInt::from(falling(n, 3) * pairs))
}

#[test]
fn inequality_vectors_match_enumeration() {
    for seed in 0..3 {
        let g = random_graph(7, seed);
        let profile = density_profile(5, &g).unwrap();
        for (sigma, c) in [("111123", 1u8), ("112233", 2), ("112323", 3), ("113222", 2)] {
            let sigma: TricoloredGraph = sigma.parse().unwrap();
            let v = inequality_vector(&sigma, c).unwrap();
            assert_eq!(v.dot(&profile), inequality_by_enumeration(&g, &sigma, c), "seed {seed} {sigma:?} c{c}");
        }
    }
}

#[test]
fn square_vectors_match_enumeration() {
    for seed in 10..13 {
        let g = random_graph(7, seed);
        let profile = density_profile(5, &g).unwrap();
        for name in SquareName::ALL {
            for sigma in name.labelings().into_iter().step_by(5) {
                let v = square_vector(&named_element(name, &sigma).unwrap()).unwrap();
                assert_eq!(v.dot(&profile), square_by_enumeration(&g, name, &sigma), "{name} {sigma:?}");
            }
        }
    }
}
