//! Fixtures and random instances shared by the integration tests.
#![allow(dead_code)]

pub mod lattice;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use troplin::fixtures;
use troplin::scalar::{int, rat};
use troplin::{
    chip_firing, close_group, Curve, Divisor, GeneratorSet, GroupAction, Isometry, Length, LinearSystem, PlFunction, Point,
    Rational, Subgraph,
};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A named curve with a finite group acting on it.
pub struct Fixture {
    pub name: &'static str,
    pub curve: Arc<Curve>,
    pub group: GroupAction,
}

fn iso(vm: &[usize], em: &[(usize, bool)]) -> Isometry {
    Isometry { vertex_map: vm.to_vec(), edge_map: em.to_vec() }
}

fn fixture(name: &'static str, c: Curve, gens: &[Isometry]) -> Fixture {
    let curve = Arc::new(c);
    let group = close_group(curve.clone(), gens).expect("fixture group");
    Fixture { name, curve, group }
}

pub fn reflection() -> Isometry {
    iso(&[0, 1], &[(1, true), (0, true)])
}

pub fn rotation() -> Isometry {
    iso(&[1, 0], &[(1, false), (0, false)])
}

/// The circle of circumference 2 with the reflection fixing `p` and `q`.
pub fn reflected_circle() -> Fixture {
    fixture("circle+reflection", fixtures::circle_two_vertex(int(1), int(1)), &[reflection()])
}

pub fn rotated_circle() -> Fixture {
    fixture("circle+rotation", fixtures::circle_two_vertex(int(1), int(1)), &[rotation()])
}

/// The divisor `[1/2] + [3/4]` on the reflected circle.
pub fn example_divisor() -> Divisor {
    Divisor::from_terms([
        (Point::Edge { edge: 0, offset: rat(1, 2) }, 1),
        (Point::Edge { edge: 0, offset: rat(3, 4) }, 1),
    ])
}

/// Curves with groups, compact ones first.
pub fn all() -> Vec<Fixture> {
    vec![
        fixture("segment", fixtures::segment(int(1)), &[]),
        fixture("segment+flip", fixtures::segment(int(1)), &[iso(&[1, 0], &[(0, true)])]),
        reflected_circle(),
        rotated_circle(),
        fixture("circle+dihedral", fixtures::circle_two_vertex(int(1), int(1)), &[reflection(), rotation()]),
        fixture("theta+swap", fixtures::theta(int(1)), &[iso(&[0, 1], &[(1, false), (0, false), (2, false)])]),
        fixture("theta+cycle", fixtures::theta(int(1)), &[iso(&[0, 1], &[(1, false), (2, false), (0, false)])]),
        fixture("theta+flip", fixtures::theta(int(1)), &[iso(&[1, 0], &[(0, true), (1, true), (2, true)])]),
        fixture("star+rotation", fixtures::star(3, int(1)), &[iso(&[0, 2, 3, 1], &[(1, false), (2, false), (0, false)])]),
        fixture("ray", fixtures::ray(), &[]),
        fixture(
            "tripod+rotation",
            fixtures::infinite_star(3),
            &[iso(&[0, 2, 3, 1], &[(1, false), (2, false), (0, false)])],
        ),
    ]
}

/// A random finite point: a vertex or an edge point at a multiple of a
/// quarter of its length (offsets below 3 on unbounded edges).
pub fn point(r: &mut Rng8, c: &Curve) -> Point {
    let finite: Vec<usize> = (0..c.num_vertices()).filter(|&v| !c.vertex(v).at_infinity).collect();
    if c.num_edges() == 0 || r.gen_bool(0.3) {
        return Point::Vertex(*finite.choose(r).expect("finite vertex"));
    }
    let e = r.gen_range(0..c.num_edges());
    let t = match c.length(e) {
        Length::Finite(l) => l * rat(r.gen_range(1..4), 4),
        Length::Infinite => rat(r.gen_range(1..12), 4),
    };
    c.point_at(e, &t).expect("inside")
}

pub fn effective_divisor(r: &mut Rng8, c: &Curve, max_degree: i64) -> Divisor {
    let d = r.gen_range(0..=max_degree);
    Divisor::from_terms((0..d).map(|_| (point(r, c), 1)))
}

pub fn divisor(r: &mut Rng8, c: &Curve) -> Divisor {
    Divisor::from_terms((0..r.gen_range(0..4)).map(|_| (point(r, c), r.gen_range(-2..=2))))
}

/// The orbit sum of a random effective divisor.
pub fn invariant_divisor(r: &mut Rng8, k: &GroupAction, max_points: usize) -> Divisor {
    let mut d = Divisor::zero();
    for _ in 0..r.gen_range(0..=max_points) {
        for q in k.orbit(&point(r, k.curve())) {
            d = &d + &Divisor::point(q);
        }
    }
    d
}

/// A random nonempty subgraph: some closed intervals and points.
pub fn subgraph(r: &mut Rng8, c: &Curve) -> Subgraph {
    let mut g = Subgraph::empty();
    for _ in 0..r.gen_range(1..=2) {
        if c.num_edges() == 0 || r.gen_bool(0.3) {
            g.add_point(point(r, c));
            continue;
        }
        let e = r.gen_range(0..c.num_edges());
        match c.length(e) {
            Length::Finite(l) => {
                let a = r.gen_range(0..4);
                let b = r.gen_range(a + 1..=4);
                g.add_interval(e, l * rat(a, 4), Length::Finite(l * rat(b, 4)));
            }
            Length::Infinite => {
                let a = r.gen_range(0..4);
                if r.gen_bool(0.5) {
                    g.add_interval(e, rat(a, 2), Length::Infinite);
                } else {
                    g.add_interval(e, rat(a, 2), Length::Finite(rat(a + 1, 2)));
                }
            }
        }
    }
    g
}

pub fn reach(r: &mut Rng8, allow_infinite: bool) -> Length {
    if allow_infinite && r.gen_bool(0.25) {
        Length::Infinite
    } else {
        Length::Finite(rat(r.gen_range(1..=8), 4))
    }
}

pub fn constant(r: &mut Rng8) -> Rational {
    rat(r.gen_range(-8..=8), r.gen_range(1..=4))
}

/// A random chip-firing move on `c`.
pub fn move_on(r: &mut Rng8, c: &Arc<Curve>) -> PlFunction {
    let unbounded = (0..c.num_edges()).any(|e| c.length(e).is_infinite());
    loop {
        let g = subgraph(r, c);
        if let Ok(f) = chip_firing(c, &g, &reach(r, unbounded)) {
            return f;
        }
    }
}

/// `⊕_k c_k ⊙ (±CF_k1 ± CF_k2)`, a random rational function.
pub fn function(r: &mut Rng8, c: &Arc<Curve>) -> PlFunction {
    let mut acc: Option<PlFunction> = None;
    for _ in 0..r.gen_range(1..=3) {
        let mut term = move_on(r, c).trop_scale(&constant(r));
        if r.gen_bool(0.5) {
            let k = *[-1i64, 1, 2].choose(r).expect("nonempty");
            term = term.add(&move_on(r, c).times(k).expect("finite multiple")).expect("same curve");
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.trop_add(&term).expect("same curve"),
        });
    }
    acc.expect("at least one term")
}

/// The `K`-symmetrization `Σ_σ f∘σ` of a random chip-firing move.
pub fn invariant_move(r: &mut Rng8, k: &GroupAction) -> PlFunction {
    let c = k.curve();
    let f = move_on(r, c);
    let mut acc = PlFunction::zero(c.clone());
    for s in k.elements() {
        acc = acc.add(&s.pull_function(&f).expect("isometry")).expect("same curve");
    }
    acc
}

/// A random element of `R(D)^K`: a tropical combination of generators,
/// each term perturbed by invariant moves when that stays in `R(D)^K`.
pub fn invariant_element(r: &mut Rng8, sys: &LinearSystem, gens: &GeneratorSet) -> PlFunction {
    let c = sys.curve();
    let mut acc: Option<PlFunction> = None;
    for _ in 0..r.gen_range(1..=3) {
        let mut term = match gens.functions.choose(r) {
            Some(g) => g.trop_scale(&constant(r)),
            None => PlFunction::constant(c.clone(), constant(r)),
        };
        for _ in 0..r.gen_range(0..=2) {
            let moved = term.add(&invariant_move(r, sys.group())).expect("same curve");
            if sys.in_rk(&moved).unwrap_or(false) {
                term = moved;
            }
        }
        acc = Some(match acc {
            None => term,
            Some(a) => a.trop_add(&term).expect("same curve"),
        });
    }
    acc.expect("at least one term")
}
