//! Exact rational feasibility LP: find `x >= 0` with `A x <= b`.
//!
//! Dense tableau, two-phase simplex, Dantzig's rule with a fallback to
//! Bland's rule on degenerate runs. When the system is
//! infeasible the final phase-1 reduced costs of the slack columns form a
//! Farkas witness `y >= 0` with `y^T A >= 0` and `y^T b < 0`.

use num_traits::{Signed, Zero};

use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// A nonnegative solution of `A x <= b`.
    Feasible(Vec<Rational>),
    /// `y >= 0` with `y^T A >= 0` componentwise and `y^T b < 0`.
    Infeasible(Vec<Rational>),
}

/// Solves the feasibility problem for the `rows x cols` matrix `a` given row by row.
pub fn solve_feasibility(a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let negative: Vec<usize> = (0..rows).filter(|&i| b[i].is_negative()).collect();
    let n_art = negative.len();
    // columns: x (cols), slack (rows), artificial (n_art), rhs
    let width = cols + rows + n_art + 1;
    let rhs = width - 1;
    let mut t = vec![vec![Rational::zero(); width]; rows];
    let mut basis = vec![0usize; rows];
    let mut art = 0;
    for i in 0..rows {
        let flip = b[i].is_negative();
        for j in 0..cols {
            t[i][j] = if flip { -&a[i][j] } else { a[i][j].clone() };
        }
        t[i][cols + i] = Rational::from_integer(if flip { (-1).into() } else { 1.into() });
        t[i][rhs] = b[i].abs();
        if flip {
            t[i][cols + rows + art] = Rational::from_integer(1.into());
            basis[i] = cols + rows + art;
            art += 1;
        } else {
            basis[i] = cols + i;
        }
    }
    // phase-1 reduced costs: cost 1 on artificials, priced out
    let mut z = vec![Rational::zero(); width];
    for zj in &mut z[cols + rows..cols + rows + n_art] {
        *zj = Rational::from_integer(1.into());
    }
    for &i in &negative {
        for j in 0..width {
            if !t[i][j].is_zero() {
                z[j] -= &t[i][j];
            }
        }
    }
    run_simplex(&mut t, &mut basis, &mut z, rhs);
    if z[rhs].is_negative() {
        // objective value is -z[rhs] > 0
        let y = (0..rows).map(|i| z[cols + i].clone()).collect();
        return LpOutcome::Infeasible(y);
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &v) in basis.iter().enumerate() {
        if v < cols {
            x[v] = t[i][rhs].clone();
        }
    }
    LpOutcome::Feasible(x)
}

const STALL_LIMIT: usize = 50;

fn run_simplex(t: &mut [Vec<Rational>], basis: &mut [usize], z: &mut [Rational], rhs: usize) {
    // Dantzig's rule while the objective improves, Bland's rule after a
    // run of degenerate pivots (guarantees termination).
    let mut stall = 0usize;
    loop {
        let enter = if stall < STALL_LIMIT {
            (0..rhs).filter(|&j| z[j].is_negative()).min_by(|&a, &b| z[a].cmp(&z[b]))
        } else {
            (0..rhs).find(|&j| z[j].is_negative())
        };
        let Some(enter) = enter else { return };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase 1 is bounded below by zero
        let (r, ratio) = leave.expect("phase-1 objective is bounded");
        if ratio.is_zero() {
            stall += 1;
        } else {
            stall = 0;
        }
        pivot(t, z, r, enter);
        basis[r] = enter;
    }
}

fn pivot(t: &mut [Vec<Rational>], z: &mut [Rational], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v /= &p;
        }
    }
    let pivot_row = t[r].clone();
    let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for &j in &nz {
            row[j] -= &f * &pivot_row[j];
        }
    }
    if !z[c].is_zero() {
        let f = z[c].clone();
        for &j in &nz {
            z[j] -= &f * &pivot_row[j];
        }
    }
}

/// Checks `x >= 0` and `A x <= b` exactly.
pub fn check_solution(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) -> bool {
    x.iter().all(|v| !v.is_negative())
        && a.iter().zip(b).all(|(row, bi)| row.iter().zip(x).fold(Rational::zero(), |acc, (p, q)| acc + p * q) <= *bi)
}

/// Checks a Farkas witness exactly: `y >= 0`, `y^T A >= 0`, `y^T b < 0`.
pub fn check_farkas(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    if y.len() != a.len() || y.iter().any(Signed::is_negative) {
        return false;
    }
    let cols = a.first().map_or(0, Vec::len);
    let col_ok = (0..cols).all(|j| {
        let s = a
            .iter()
            .zip(y)
            .fold(Rational::zero(), |acc, (row, yi)| if yi.is_zero() { acc } else { acc + &row[j] * yi });
        !s.is_negative()
    });
    let yb = b.iter().zip(y).fold(Rational::zero(), |acc, (bi, yi)| acc + bi * yi);
    col_ok && yb.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|row| row.iter().map(|&v| r(v)).collect()).collect()
    }

    #[test]
    fn trivially_feasible_at_origin() {
        let a = m(&[&[1, 1], &[2, -1]]);
        let b = vec![r(3), r(0)];
        match solve_feasibility(&a, &b) {
            LpOutcome::Feasible(x) => assert!(check_solution(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn needs_phase_one() {
        // x1 + x2 >= 2, x1 <= 1, x2 <= 3
        let a = m(&[&[-1, -1], &[1, 0], &[0, 1]]);
        let b = vec![r(-2), r(1), r(3)];
        match solve_feasibility(&a, &b) {
            LpOutcome::Feasible(x) => assert!(check_solution(&a, &b, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_with_witness() {
        // x1 >= 2 and x1 <= 1
        let a = m(&[&[-1], &[1]]);
        let b = vec![r(-2), r(1)];
        match solve_feasibility(&a, &b) {
            LpOutcome::Infeasible(y) => assert!(check_farkas(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonnegativity_alone_can_block() {
        // -x <= -1 with x >= 0 is fine, x <= -1 is not
        let a = m(&[&[1, 2]]);
        let b = vec![r(-1)];
        match solve_feasibility(&a, &b) {
            LpOutcome::Infeasible(y) => assert!(check_farkas(&a, &b, &y)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_small_systems_are_decided_correctly() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..4);
            let a: Vec<Vec<Rational>> =
                (0..rows).map(|_| (0..cols).map(|_| r(rng.gen_range(-3..=3))).collect()).collect();
            let b: Vec<Rational> = (0..rows).map(|_| r(rng.gen_range(-3..=3))).collect();
            match solve_feasibility(&a, &b) {
                LpOutcome::Feasible(x) => assert!(check_solution(&a, &b, &x)),
                LpOutcome::Infeasible(y) => assert!(check_farkas(&a, &b, &y)),
            }
        }
    }
}
