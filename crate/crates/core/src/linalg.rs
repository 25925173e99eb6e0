//! Exact linear algebra over the rationals.

use num_traits::{Signed, Zero};

use crate::scalar::Rational;

/// Solution set of `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    None,
    Unique(Vec<Rational>),
    /// `x = particular + Σ λ_k basis[k]`.
    Family { particular: Vec<Rational>, basis: Vec<Vec<Rational>> },
}

/// Solves `A x = b` with `n` unknowns by Gauss-Jordan elimination.
pub fn solve(rows: &[(Vec<Rational>, Rational)], n: usize) -> Solution {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(a, b)| {
            let mut r = a.clone();
            r.resize(n, Rational::zero());
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let k = m[i][col].clone();
                let pivot = m[row].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot).take(n + 1) {
                    *x -= &k * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[n].is_zero()) {
        return Solution::None;
    }
    let mut particular = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Solution::Unique(particular);
    }
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::from_integer(1.into());
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Solution::Family { particular, basis }
}

/// Decides whether the strict system `a · x < b` has a solution, by
/// Fourier-Motzkin elimination.
pub fn strictly_feasible(mut ineqs: Vec<(Vec<Rational>, Rational)>, n: usize) -> bool {
    for var in 0..n {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, b) in ineqs {
            if a[var].is_positive() {
                pos.push((a, b));
            } else if a[var].is_negative() {
                neg.push((a, b));
            } else {
                rest.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                // Scale so that the coefficients of `var` cancel.
                let (kp, kn) = (-an[var].clone(), ap[var].clone());
                let a: Vec<Rational> = ap.iter().zip(an).map(|(x, y)| x * &kp + y * &kn).collect();
                rest.push((a, bp * &kp + bn * &kn));
            }
        }
        ineqs = rest;
    }
    ineqs.iter().all(|(_, b)| b.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn unique_and_inconsistent_systems() {
        let rows = vec![(vec![int(1), int(1)], int(3)), (vec![int(1), int(-1)], int(1))];
        assert_eq!(solve(&rows, 2), Solution::Unique(vec![int(2), int(1)]));
        let bad = vec![(vec![int(1)], int(1)), (vec![int(2)], int(3))];
        assert_eq!(solve(&bad, 1), Solution::None);
    }

    #[test]
    fn families_have_a_basis() {
        let rows = vec![(vec![int(1), int(-1)], rat(1, 2))];
        let Solution::Family { particular, basis } = solve(&rows, 2) else { panic!() };
        assert_eq!(basis.len(), 1);
        let x: Vec<Rational> = particular.iter().zip(&basis[0]).map(|(p, b)| p + b * int(5)).collect();
        assert_eq!(&x[0] - &x[1], rat(1, 2));
        assert!(matches!(solve(&[], 2), Solution::Family { .. }));
    }

    #[test]
    fn strict_feasibility() {
        // 0 < x < 1 and 0 < y < x.
        let ok = vec![
            (vec![int(-1), int(0)], int(0)),
            (vec![int(1), int(0)], int(1)),
            (vec![int(0), int(-1)], int(0)),
            (vec![int(-1), int(1)], int(0)),
        ];
        assert!(strictly_feasible(ok, 2));
        // x < 0 and x > 0.
        let no = vec![(vec![int(1)], int(0)), (vec![int(-1)], int(0))];
        assert!(!strictly_feasible(no, 1));
    }
}
