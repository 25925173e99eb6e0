//! Morphisms of tropical curves and the quotient by a finite group.

use std::sync::Arc;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function::PlFunction;
use crate::graph::{Curve, Edge, HalfEdge, Point, Remodel, Vertex};
use crate::group::{GroupAction, InvariantModel};
use crate::scalar::{int, Length, Rational};

/// Where a source edge goes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeImage {
    /// Mapped to a vertex; dilation zero.
    Collapsed,
    /// Mapped onto an edge, stretched by `dilation`.
    Edge { target: usize, reversed: bool, dilation: i64 },
}

/// Degree of a harmonic morphism. A morphism between singletons has any
/// degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Finite(i64),
    Any,
}

/// A morphism between models: vertices to vertices, each edge either
/// collapsed or mapped linearly onto an edge.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: Arc<Curve>,
    target: Arc<Curve>,
    vertex_map: Vec<usize>,
    edge_map: Vec<EdgeImage>,
    /// Per target edge, the source edges over it.
    over: Vec<Vec<usize>>,
}

impl Morphism {
    pub fn new(
        source: Arc<Curve>,
        target: Arc<Curve>,
        vertex_map: Vec<usize>,
        edge_map: Vec<EdgeImage>,
    ) -> Result<Morphism> {
        let bad = |m: String| Err(Error::InvalidMorphism(m));
        if vertex_map.len() != source.num_vertices() || edge_map.len() != source.num_edges() {
            return bad("maps do not cover the source".into());
        }
        if vertex_map.iter().any(|&w| w >= target.num_vertices()) {
            return bad("vertex image out of range".into());
        }
        for (v, &w) in vertex_map.iter().enumerate() {
            if source.vertex(v).at_infinity && !target.vertex(w).at_infinity {
                return bad(format!("point at infinity `{}` maps to a finite point", source.vertex(v).id));
            }
        }
        let mut over = vec![Vec::new(); target.num_edges()];
        for (e, img) in edge_map.iter().enumerate() {
            let se = source.edge(e);
            let ends = [vertex_map[se.ends[0]], vertex_map[se.ends[1]]];
            match *img {
                EdgeImage::Collapsed => {
                    if ends[0] != ends[1] {
                        return bad(format!("collapsed edge `{}` has ends in different vertices", se.id));
                    }
                }
                EdgeImage::Edge { target: f, reversed, dilation } => {
                    if f >= target.num_edges() || dilation <= 0 {
                        return bad(format!("bad image of edge `{}`", se.id));
                    }
                    let te = target.edge(f);
                    let want = if reversed { [te.ends[1], te.ends[0]] } else { te.ends };
                    if ends != want {
                        return bad(format!("endpoints of `{}` do not map to those of `{}`", se.id, te.id));
                    }
                    if se.length.scale(dilation) != te.length {
                        return bad(format!("length of `{}` times {dilation} differs from `{}`", se.id, te.id));
                    }
                    over[f].push(e);
                }
            }
        }
        Ok(Morphism { source, target, vertex_map, edge_map, over })
    }

    pub fn identity(curve: Arc<Curve>) -> Morphism {
        let vm = (0..curve.num_vertices()).collect();
        let em = (0..curve.num_edges())
            .map(|e| EdgeImage::Edge { target: e, reversed: false, dilation: 1 })
            .collect();
        Morphism::new(curve.clone(), curve, vm, em).expect("identity is a morphism")
    }

    pub fn source(&self) -> &Arc<Curve> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Curve> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[EdgeImage] {
        &self.edge_map
    }

    /// Source edges mapped onto target edge `f`.
    pub fn edges_over(&self, f: usize) -> &[usize] {
        &self.over[f]
    }

    pub fn dilation(&self, e: usize) -> i64 {
        match self.edge_map[e] {
            EdgeImage::Collapsed => 0,
            EdgeImage::Edge { dilation, .. } => dilation,
        }
    }

    /// True if no edge is collapsed.
    pub fn is_finite(&self) -> bool {
        self.edge_map.iter().all(|i| *i != EdgeImage::Collapsed)
    }

    pub fn map_point(&self, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(self.vertex_map[*v]),
            Point::Edge { edge, offset } => match self.edge_map[*edge] {
                EdgeImage::Collapsed => Point::Vertex(self.vertex_map[self.source.edge(*edge).ends[0]]),
                EdgeImage::Edge { target, reversed, dilation } => {
                    let u = offset * int(dilation);
                    let u = if reversed { self.target.length(target).finite().expect("finite") - u } else { u };
                    Point::Edge { edge: target, offset: u }
                }
            },
        }
    }

    /// The target half-edge a source half-edge runs along, with its
    /// dilation, if the edge is not collapsed.
    pub fn image_half_edge(&self, h: HalfEdge) -> Option<(HalfEdge, i64)> {
        match self.edge_map[h.edge] {
            EdgeImage::Collapsed => None,
            EdgeImage::Edge { target, reversed, dilation } => {
                Some((HalfEdge { edge: target, end: h.end ^ usize::from(reversed) }, dilation))
            }
        }
    }

    /// Local degree at a source vertex for each target half-edge at its
    /// image.
    fn local_degrees(&self, v: usize) -> Vec<i64> {
        let w = self.vertex_map[v];
        let hs = self.target.half_edges(w);
        let mut out = vec![0; hs.len()];
        for &h in self.source.half_edges(v) {
            if let Some((th, d)) = self.image_half_edge(h) {
                let k = hs.iter().position(|x| *x == th).expect("image half-edge at image vertex");
                out[k] += d;
            }
        }
        out
    }

    /// `deg_x(φ)` at a source vertex, if well defined.
    pub fn local_degree(&self, v: usize) -> Option<i64> {
        let ds = self.local_degrees(v);
        match ds.first() {
            None => Some(0),
            Some(&d) => ds.iter().all(|&x| x == d).then_some(d),
        }
    }

    /// Harmonicity, with the degree when harmonic.
    pub fn is_harmonic(&self) -> (bool, Option<Degree>) {
        if self.target.is_singleton() {
            let deg = if self.source.is_singleton() { Degree::Any } else { Degree::Finite(0) };
            return (true, Some(deg));
        }
        if (0..self.source.num_vertices()).any(|v| self.local_degree(v).is_none()) {
            return (false, None);
        }
        let sums: Vec<i64> = (0..self.target.num_edges())
            .map(|f| self.over[f].iter().map(|&e| self.dilation(e)).sum())
            .collect();
        if sums.iter().any(|&s| s != sums[0]) {
            return (false, None);
        }
        (true, Some(Degree::Finite(sums[0])))
    }

    fn require_finite_harmonic(&self) -> Result<()> {
        if self.source.is_singleton() && self.target.is_singleton() {
            return Ok(());
        }
        match self.is_harmonic() {
            (true, Some(Degree::Finite(d))) if d > 0 && self.is_finite() => Ok(()),
            _ => Err(Error::NotHarmonic),
        }
    }

    /// `φ_*(D) = Σ D(x) · φ(x)`.
    pub fn push_forward_divisor(&self, d: &Divisor) -> Divisor {
        d.map_points(|p| self.map_point(p))
    }

    /// Preimages of a target point, each with its local degree.
    pub fn fiber(&self, p: &Point) -> Vec<(Point, i64)> {
        match p {
            Point::Vertex(w) => (0..self.source.num_vertices())
                .filter(|&v| self.vertex_map[v] == *w)
                .map(|v| (Point::Vertex(v), self.local_degree(v).unwrap_or(0).max(1)))
                .collect(),
            Point::Edge { edge, offset } => self.over[*edge]
                .iter()
                .map(|&e| {
                    let EdgeImage::Edge { reversed, dilation, .. } = self.edge_map[e] else { unreachable!() };
                    let u = if reversed {
                        self.target.length(*edge).finite().expect("finite") - offset
                    } else {
                        offset.clone()
                    };
                    (Point::Edge { edge: e, offset: u / int(dilation) }, dilation)
                })
                .collect(),
        }
    }

    /// `φ_* f (x') = Σ deg_x(φ) f(x)` over the fiber of `x'`.
    pub fn push_forward_function(&self, f: &PlFunction) -> Result<PlFunction> {
        self.require_finite_harmonic()?;
        if f.is_neg_infinity() {
            return Ok(PlFunction::neg_infinity(self.target.clone()));
        }
        let mut cuts = vec![Vec::new(); self.target.num_edges()];
        for p in f.breakpoints() {
            if let Point::Edge { edge, offset } = self.map_point(&p) {
                cuts[edge].push(offset);
            }
        }
        let tails: Vec<i64> = (0..self.target.num_edges())
            .map(|t| self.over[t].iter().map(|&e| f.tail_slope(e)).sum())
            .collect();
        PlFunction::from_samples(self.target.clone(), &cuts, |t| tails[t], |p| {
            let mut acc = Rational::from_integer(0.into());
            for (x, d) in self.fiber(p) {
                acc += f.eval_finite(&x)? * int(d);
            }
            Ok(acc)
        })
    }

    /// `g ∘ φ`.
    pub fn pull_back_function(&self, g: &PlFunction) -> Result<PlFunction> {
        if g.is_neg_infinity() {
            return Ok(PlFunction::neg_infinity(self.source.clone()));
        }
        let mut cuts = vec![Vec::new(); self.source.num_edges()];
        for p in g.breakpoints() {
            for (x, _) in self.fiber(&p) {
                if let Point::Edge { edge, offset } = x {
                    cuts[edge].push(offset);
                }
            }
        }
        PlFunction::from_samples(
            self.source.clone(),
            &cuts,
            |e| match self.edge_map[e] {
                EdgeImage::Collapsed => 0,
                EdgeImage::Edge { target, dilation, .. } => dilation * g.tail_slope(target),
            },
            |p| g.eval_finite(&self.map_point(p)),
        )
    }
}

/// The quotient `Γ' = Γ/K` with the canonical morphism `φ: Γ → Γ'`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub working: Arc<Curve>,
    pub invariant: InvariantModel,
    /// The invariant model `G1` as a curve.
    pub g1: Arc<Curve>,
    /// `φ: G1 → Γ'` with dilation `|K_e|` on each edge.
    pub phi: Morphism,
    /// `ψ: G1 → H0`, where `H0` has the combinatorics of `Γ'` and the
    /// lengths of `G1`; all dilations are one.
    pub psi: Morphism,
    pub order: usize,
}

/// Builds the quotient of the working model of `k` by `k`.
pub fn build_quotient(k: &GroupAction) -> Result<Quotient> {
    let inv = k.invariant_model()?;
    let g1 = inv.action.curve().clone();
    let od = &inv.orbits;
    let mut rep_v = vec![usize::MAX; od.num_vertex_orbits];
    for v in (0..g1.num_vertices()).rev() {
        rep_v[od.vertex_orbit[v]] = v;
    }
    let mut rep_e = vec![usize::MAX; od.num_edge_orbits];
    for e in (0..g1.num_edges()).rev() {
        rep_e[od.edge_orbit[e]] = e;
    }
    let vertices: Vec<Vertex> = rep_v.iter().map(|&v| g1.vertex(v).clone()).collect();
    let make = |scale: bool| -> Vec<Edge> {
        rep_e
            .iter()
            .map(|&e| {
                let ge = g1.edge(e);
                let d = if scale { od.edge_stabilizer[e] as i64 } else { 1 };
                Edge {
                    id: ge.id.clone(),
                    ends: [od.vertex_orbit[ge.ends[0]], od.vertex_orbit[ge.ends[1]]],
                    length: ge.length.scale(d),
                }
            })
            .collect()
    };
    let target = Arc::new(Curve::new(vertices.clone(), make(true))?);
    let h0 = Arc::new(Curve::new(vertices, make(false))?);
    let vertex_map: Vec<usize> = od.vertex_orbit.clone();
    let images = |scale: bool| -> Vec<EdgeImage> {
        (0..g1.num_edges())
            .map(|e| {
                let o = od.edge_orbit[e];
                let rep = g1.edge(rep_e[o]);
                let reversed = od.vertex_orbit[g1.edge(e).ends[0]] != od.vertex_orbit[rep.ends[0]];
                let dilation = if scale { od.edge_stabilizer[e] as i64 } else { 1 };
                EdgeImage::Edge { target: o, reversed, dilation }
            })
            .collect()
    };
    let phi = Morphism::new(g1.clone(), target, vertex_map.clone(), images(true))?;
    let psi = Morphism::new(g1.clone(), h0, vertex_map, images(false))?;
    Ok(Quotient { working: k.curve().clone(), invariant: inv, g1, phi, psi, order: k.order() })
}

impl Quotient {
    pub fn target(&self) -> &Arc<Curve> {
        self.phi.target()
    }

    pub fn remodel(&self) -> &Remodel {
        &self.invariant.remodel
    }

    /// `φ` on a point of the working model.
    pub fn map_point(&self, p: &Point) -> Point {
        self.phi.map_point(&self.remodel().to_new(p))
    }

    /// Fiber over a quotient point, as points of the working model.
    pub fn fiber(&self, p: &Point) -> Vec<Point> {
        self.phi
            .fiber(p)
            .into_iter()
            .map(|(x, _)| self.remodel().to_old_in(&self.working, &x))
            .collect()
    }

    pub fn push_forward_divisor(&self, d: &Divisor) -> Divisor {
        d.map_points(|p| self.map_point(p))
    }

    /// A function on the working model, moved to `G1`.
    pub fn to_g1(&self, f: &PlFunction) -> Result<PlFunction> {
        f.to_model(self.remodel(), self.g1.clone())
    }

    /// A function on `G1`, moved to the working model.
    pub fn from_g1(&self, f: &PlFunction) -> Result<PlFunction> {
        f.from_model(self.remodel(), self.working.clone())
    }

    pub fn push_forward_function(&self, f: &PlFunction) -> Result<PlFunction> {
        self.phi.push_forward_function(&self.to_g1(f)?)
    }

    pub fn pull_back_function(&self, g: &PlFunction) -> Result<PlFunction> {
        self.from_g1(&self.phi.pull_back_function(g)?)
    }

    /// Total degree of `φ`.
    pub fn degree(&self) -> Degree {
        self.phi.is_harmonic().1.unwrap_or(Degree::Finite(0))
    }

    /// Lengths of `G1` seen on the quotient combinatorics.
    pub fn h0(&self) -> &Arc<Curve> {
        self.psi.target()
    }

    /// Edge lengths on `Γ'`.
    pub fn quotient_length(&self, f: usize) -> &Length {
        self.target().length(f)
    }
}
