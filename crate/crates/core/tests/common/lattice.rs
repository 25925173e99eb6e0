//! Brute-force description of `S(D)` through functions that are linear
//! between the nodes of a uniform mesh.
//!
//! Such a function is determined up to a constant by `E = D + div f`, which
//! is a chip configuration on the mesh nodes. The oracle enumerates every
//! effective `E` of the right degree, solves the weighted Laplacian exactly,
//! keeps integral slopes, and applies the cut-set condition on its own graph.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use troplin::scalar::int;
use troplin::{Curve, Divisor, Length, Point, Rational};

pub struct Mesh {
    pub nodes: Vec<Point>,
    /// `(a, b, weight)` with weight `1 / length`.
    pub links: Vec<(usize, usize, Rational)>,
}

impl Mesh {
    /// Splits every edge of a compact curve into `k` equal pieces.
    pub fn new(c: &Curve, k: i64) -> Mesh {
        let mut nodes: Vec<Point> = (0..c.num_vertices()).map(Point::Vertex).collect();
        let mut links = Vec::new();
        for e in 0..c.num_edges() {
            let Length::Finite(l) = c.length(e) else { panic!("compact curves only") };
            let step = l / int(k);
            let w = Rational::one() / &step;
            let mut prev = c.edge(e).ends[0];
            for j in 1..k {
                nodes.push(Point::Edge { edge: e, offset: &step * int(j) });
                links.push((prev, nodes.len() - 1, w.clone()));
                prev = nodes.len() - 1;
            }
            links.push((prev, c.edge(e).ends[1], w.clone()));
        }
        Mesh { nodes, links }
    }

    pub fn node(&self, p: &Point) -> Option<usize> {
        self.nodes.iter().position(|q| q == p)
    }

    fn degree(&self, v: usize) -> usize {
        self.links.iter().map(|&(a, b, _)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Whether removing `cut` disconnects the curve. Open pieces between two
    /// removed nodes count as components of their own.
    pub fn disconnects(&self, cut: &BTreeSet<usize>) -> bool {
        let n = self.nodes.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut isolated = 0;
        for &(a, b, _) in &self.links {
            match (cut.contains(&a), cut.contains(&b)) {
                (false, false) => {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
                (true, true) => isolated += 1,
                _ => {}
            }
        }
        let roots: BTreeSet<usize> = (0..n).filter(|v| !cut.contains(v)).map(|v| find(&mut parent, v)).collect();
        roots.len() + isolated > 1
    }

    /// Inverse of the Laplacian with the row and column of node 0 removed.
    fn reduced_inverse(&self) -> Vec<Vec<Rational>> {
        let m = self.nodes.len() - 1;
        let mut a = vec![vec![Rational::zero(); 2 * m]; m];
        for &(x, y, ref w) in &self.links {
            for (p, q) in [(x, y), (y, x)] {
                if p > 0 {
                    a[p - 1][p - 1] += w;
                    if q > 0 {
                        a[p - 1][q - 1] -= w;
                    }
                }
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[m + i] = Rational::one();
        }
        for col in 0..m {
            let piv = (col..m).find(|&r| !a[r][col].is_zero()).expect("connected mesh");
            a.swap(col, piv);
            let inv = Rational::one() / &a[col][col];
            for x in a[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..m {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= &factor * p;
                    }
                }
            }
        }
        a.into_iter().map(|row| row[m..].to_vec()).collect()
    }
}

/// Chip configurations `D + div f` over `f ∈ S(D)`, as node multisets.
pub fn oracle(c: &Curve, d: &Divisor, k: i64) -> BTreeSet<BTreeMap<usize, i64>> {
    let mesh = Mesh::new(c, k);
    let n = mesh.nodes.len();
    let mut dv = vec![0i64; n];
    for (p, m) in d.iter() {
        dv[mesh.node(p).expect("divisor on the mesh")] += m;
    }
    let inv = mesh.reduced_inverse();
    let mut out = BTreeSet::new();
    let deg = d.degree();
    if deg < 0 {
        return out;
    }
    let mut chips = vec![0usize; deg as usize];
    loop {
        let mut e = vec![0i64; n];
        for &x in &chips {
            e[x] += 1;
        }
        // Laplacian: (L f)(x) = Σ w (f(x) - f(y)) = -(div f)(x) = D - E.
        // The right-hand side has few nonzero entries.
        let rhs: Vec<(usize, Rational)> =
            (1..n).filter(|&x| dv[x] != e[x]).map(|x| (x - 1, int(dv[x] - e[x]))).collect();
        let mut f = vec![Rational::zero()];
        f.extend(inv.iter().map(|row| rhs.iter().map(|(j, b)| &row[*j] * b).sum::<Rational>()));
        let integral = mesh.links.iter().all(|(a, b, w)| ((&f[*b] - &f[*a]) * w).is_integer());
        if integral {
            let smooth: BTreeSet<usize> = (0..n).filter(|&x| e[x] > 0 && mesh.degree(x) == 2).collect();
            if !mesh.disconnects(&smooth) {
                out.insert((0..n).filter(|&x| e[x] > 0).map(|x| (x, e[x])).collect());
            }
        }
        // Next nondecreasing sequence.
        let Some(i) = (0..chips.len()).rev().find(|&i| chips[i] + 1 < n) else { break };
        let next = chips[i] + 1;
        for c in chips[i..].iter_mut() {
            *c = next;
        }
    }
    out
}
