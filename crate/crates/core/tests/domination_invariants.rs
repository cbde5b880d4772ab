//! Structural properties of strong monochromatic domination.

use proptest::prelude::*;
use tricolor_core::basis::classes_by_extension;
use tricolor_core::domination::{
    best_domination, every_vertex_two_colored, has_monochromatic_vertex, is_counterexample, strongly_dominated,
};
use tricolor_core::TricoloredGraph;

fn graph(n: usize) -> impl Strategy<Value = TricoloredGraph> {
    prop::collection::vec(1u8..=3, n * (n - 1) / 2).prop_map(move |c| TricoloredGraph::new(n, c).unwrap())
}

fn all_colorings(n: usize) -> impl Iterator<Item = TricoloredGraph> {
    let total = 3usize.pow((n * (n - 1) / 2) as u32);
    (0..total).map(move |i| TricoloredGraph::from_coloring_index(n, i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dominated_set_grows_with_the_dominators(
        g in (3usize..=9).prop_flat_map(graph),
        mask in any::<u16>(),
        extra in any::<u16>(),
        c in 1u8..=3,
    ) {
        let n = g.n();
        let small: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        prop_assume!(!small.is_empty());
        let large: Vec<usize> = (0..n).filter(|v| (mask | extra) >> v & 1 == 1).collect();
        let a = strongly_dominated(&g, &small, c).unwrap();
        let b = strongly_dominated(&g, &large, c).unwrap();
        prop_assert!(a.iter().all(|y| b.contains(y)));
    }

    #[test]
    fn best_domination_is_monotone_in_t(g in (2usize..=8).prop_flat_map(graph)) {
        let sizes: Vec<usize> = (1..=5).map(|t| best_domination(&g, t).unwrap().size).collect();
        prop_assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{:?}", sizes);
    }
}

#[test]
fn monochromatic_vertex_rules_out_counterexample() {
    let mut seen = 0;
    for n in 2..=5 {
        for g in all_colorings(n).filter(has_monochromatic_vertex) {
            seen += 1;
            assert!(!is_counterexample(&g).unwrap(), "{g}");
        }
    }
    assert!(seen > 0);
}

#[test]
fn two_colored_vertices_give_a_dominating_pair() {
    let mut seen = 0;
    for n in 2..=6 {
        let graphs: Vec<TricoloredGraph> =
            if n <= 5 { all_colorings(n).collect() } else { classes_by_extension(6).unwrap() };
        for g in graphs.into_iter().filter(every_vertex_two_colored) {
            seen += 1;
            let best = best_domination(&g, 2).unwrap();
            assert!(3 * best.size >= 2 * n, "{g}: {}", best.size);
        }
    }
    assert!(seen > 0);
}
