//! Small ready-made curves, handy in examples and tests.

use crate::graph::{Curve, Edge, Point, Vertex};
use crate::scalar::{Length, Rational};

fn v(id: &str) -> Vertex {
    Vertex { id: id.into(), at_infinity: false }
}

fn e(id: &str, a: usize, b: usize, l: Rational) -> Edge {
    Edge { id: id.into(), ends: [a, b], length: Length::Finite(l) }
}

/// A segment `a --e-- b` of length `l`.
pub fn segment(l: Rational) -> Curve {
    Curve::new(vec![v("a"), v("b")], vec![e("e", 0, 1, l)]).expect("valid")
}

/// A circle of circumference `l` with a single vertex `o` and a loop `e`.
pub fn circle_one_vertex(l: Rational) -> Curve {
    Curve::new(vec![v("o")], vec![e("e", 0, 0, l)]).expect("valid")
}

/// Same as [`circle_one_vertex`].
pub fn circle(l: Rational) -> Curve {
    circle_one_vertex(l)
}

/// The point at arc length `pos` (mod the circumference) on a one-vertex
/// circle.
pub fn circle_point(c: &Curve, pos: &Rational) -> Point {
    let l = c.length(0).finite().expect("finite circle").clone();
    let t = pos - (pos / &l).floor() * &l;
    c.point_at(0, &t).expect("on circle")
}

/// A circle with two vertices `p`, `q` and two arcs `e0: p→q`, `e1: q→p`.
pub fn circle_two_vertex(arc0: Rational, arc1: Rational) -> Curve {
    Curve::new(vec![v("p"), v("q")], vec![e("e0", 0, 1, arc0), e("e1", 1, 0, arc1)]).expect("valid")
}

/// A path `v0 - v1 - ... - vn` with the given edge lengths.
pub fn path(lengths: &[Rational]) -> Curve {
    let vs = (0..=lengths.len()).map(|i| v(&format!("v{i}"))).collect();
    let es = lengths
        .iter()
        .enumerate()
        .map(|(i, l)| e(&format!("e{i}"), i, i + 1, l.clone()))
        .collect();
    Curve::new(vs, es).expect("valid")
}

/// A cycle `v0 - v1 - ... - v(n-1) - v0` with the given edge lengths.
pub fn cycle(lengths: &[Rational]) -> Curve {
    let n = lengths.len();
    let vs = (0..n).map(|i| v(&format!("v{i}"))).collect();
    let es = lengths
        .iter()
        .enumerate()
        .map(|(i, l)| e(&format!("e{i}"), i, (i + 1) % n, l.clone()))
        .collect();
    Curve::new(vs, es).expect("valid")
}

/// Two vertices `p`, `q` joined by three edges `e0, e1, e2` of length `l`.
pub fn theta(l: Rational) -> Curve {
    Curve::new(
        vec![v("p"), v("q")],
        (0..3).map(|i| e(&format!("e{i}"), 0, 1, l.clone())).collect(),
    )
    .expect("valid")
}

/// A star with centre `c` and `n` leaves `x0..` at distance `l`.
pub fn star(n: usize, l: Rational) -> Curve {
    let mut vs = vec![v("c")];
    vs.extend((0..n).map(|i| v(&format!("x{i}"))));
    let es = (0..n).map(|i| e(&format!("e{i}"), 0, i + 1, l.clone())).collect();
    Curve::new(vs, es).expect("valid")
}

/// A ray: a finite vertex `o` joined to a point at infinity `z`.
pub fn ray() -> Curve {
    infinite_star(1)
}

/// A vertex `o` with `n` unbounded legs ending at points at infinity `z0..`.
pub fn infinite_star(n: usize) -> Curve {
    let mut vs = vec![v("o")];
    vs.extend((0..n).map(|i| Vertex { id: format!("z{i}"), at_infinity: true }));
    let es = (0..n)
        .map(|i| Edge { id: format!("t{i}"), ends: [0, i + 1], length: Length::Infinite })
        .collect();
    Curve::new(vs, es).expect("valid")
}
