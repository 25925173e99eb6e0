//! Finite groups of isometries acting on a curve.
//!
//! Isometries are given combinatorially on a working model: a permutation
//! of the vertices and a permutation of the edges with, per edge, a flag
//! telling whether the orientation is reversed.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function::PlFunction;
use crate::graph::{Curve, Point, Remodel};
use crate::scalar::{Length, Rational};
use crate::subgraph::Subgraph;

/// Default bound on the size of a generated group.
pub const DEFAULT_GROUP_BOUND: usize = 10_000;

/// Environment variable overriding [`DEFAULT_GROUP_BOUND`].
pub const GROUP_BOUND_VAR: &str = "TROPLIN_GROUP_BOUND";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    pub vertex_map: Vec<usize>,
    /// Image edge and whether the orientation is reversed.
    pub edge_map: Vec<(usize, bool)>,
}

impl Isometry {
    pub fn identity(curve: &Curve) -> Isometry {
        Isometry {
            vertex_map: (0..curve.num_vertices()).collect(),
            edge_map: (0..curve.num_edges()).map(|e| (e, false)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.edge_map.iter().enumerate().all(|(i, &(e, r))| i == e && !r)
    }

    /// Checks that the maps are bijections preserving lengths, incidence and
    /// points at infinity.
    pub fn validate(&self, curve: &Curve) -> Result<()> {
        let bad = |m: String| Err(Error::NotIsometry(m));
        if self.vertex_map.len() != curve.num_vertices() || self.edge_map.len() != curve.num_edges() {
            return bad("maps do not cover the model".into());
        }
        let mut seen = vec![false; curve.num_vertices()];
        for &w in &self.vertex_map {
            if w >= seen.len() || std::mem::replace(&mut seen[w], true) {
                return bad("vertex map is not a bijection".into());
            }
        }
        let mut seen = vec![false; curve.num_edges()];
        for &(f, _) in &self.edge_map {
            if f >= seen.len() || std::mem::replace(&mut seen[f], true) {
                return bad("edge map is not a bijection".into());
            }
        }
        for (v, &w) in self.vertex_map.iter().enumerate() {
            if curve.vertex(v).at_infinity != curve.vertex(w).at_infinity {
                return bad(format!("`{}` and `{}` differ at infinity", curve.vertex(v).id, curve.vertex(w).id));
            }
        }
        for (e, &(f, rev)) in self.edge_map.iter().enumerate() {
            let (a, b) = (curve.edge(e), curve.edge(f));
            if a.length != b.length {
                return bad(format!("`{}` and `{}` have different lengths", a.id, b.id));
            }
            let img = [self.vertex_map[a.ends[0]], self.vertex_map[a.ends[1]]];
            let want = if rev { [b.ends[1], b.ends[0]] } else { b.ends };
            if img != want {
                return bad(format!("endpoints of `{}` do not map to those of `{}`", a.id, b.id));
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other
                .edge_map
                .iter()
                .map(|&(e, r)| {
                    let (f, r2) = self.edge_map[e];
                    (f, r ^ r2)
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let mut vm = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vm[w] = v;
        }
        let mut em = vec![(0, false); self.edge_map.len()];
        for (e, &(f, r)) in self.edge_map.iter().enumerate() {
            em[f] = (e, r);
        }
        Isometry { vertex_map: vm, edge_map: em }
    }

    /// Image of a point.
    pub fn apply(&self, curve: &Curve, p: &Point) -> Point {
        match p {
            Point::Vertex(v) => Point::Vertex(self.vertex_map[*v]),
            Point::Edge { edge, offset } => {
                let (f, rev) = self.edge_map[*edge];
                let t = if rev {
                    curve.length(*edge).finite().expect("reversed edges are finite") - offset
                } else {
                    offset.clone()
                };
                Point::Edge { edge: f, offset: t }
            }
        }
    }

    pub fn apply_divisor(&self, curve: &Curve, d: &Divisor) -> Divisor {
        d.map_points(|p| self.apply(curve, p))
    }

    pub fn apply_subgraph(&self, curve: &Curve, g: &Subgraph) -> Subgraph {
        let mut out = Subgraph::empty();
        for (e, (a, b)) in g.intervals() {
            let (f, rev) = self.edge_map[e];
            if rev {
                let l = curve.length(e).finite().expect("reversed edges are finite");
                let b = b.finite().expect("finite");
                out.add_interval(f, l - b, Length::Finite(l - a));
            } else {
                out.add_interval(f, a.clone(), b.clone());
            }
        }
        for p in g.points() {
            out.add_point(self.apply(curve, p));
        }
        out
    }

    /// `f ∘ self`.
    pub fn pull_function(&self, f: &PlFunction) -> Result<PlFunction> {
        let curve = f.curve().clone();
        if f.is_neg_infinity() {
            return Ok(f.clone());
        }
        let inv = self.inverse();
        let mut cuts = vec![Vec::new(); curve.num_edges()];
        for p in f.breakpoints() {
            if let Point::Edge { edge, offset } = inv.apply(&curve, &p) {
                cuts[edge].push(offset);
            }
        }
        PlFunction::from_samples(
            curve.clone(),
            &cuts,
            |e| f.tail_slope(self.edge_map[e].0),
            |p| f.eval_finite(&self.apply(&curve, p)),
        )
    }
}

/// A finite group acting on a working model. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct GroupAction {
    curve: Arc<Curve>,
    elements: Vec<Isometry>,
}

/// Orbits and stabilizer orders on the working model of an action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub vertex_orbit: Vec<usize>,
    pub edge_orbit: Vec<usize>,
    pub num_vertex_orbits: usize,
    pub num_edge_orbits: usize,
    /// `|K_v|`.
    pub vertex_stabilizer: Vec<usize>,
    /// `|K_e|`, elements mapping the edge to itself.
    pub edge_stabilizer: Vec<usize>,
}

fn group_bound() -> usize {
    std::env::var(GROUP_BOUND_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_GROUP_BOUND)
}

/// The group generated by `generators`, bounded by the environment
/// override or [`DEFAULT_GROUP_BOUND`].
pub fn close_group(curve: Arc<Curve>, generators: &[Isometry]) -> Result<GroupAction> {
    close_group_with_bound(curve, generators, group_bound())
}

pub fn close_group_with_bound(
    curve: Arc<Curve>,
    generators: &[Isometry],
    bound: usize,
) -> Result<GroupAction> {
    for g in generators {
        g.validate(&curve)?;
    }
    let id = Isometry::identity(&curve);
    let mut seen: HashSet<Isometry> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                if elements.len() >= bound {
                    return Err(Error::GroupNotFinite(elements.len() + 1));
                }
                elements.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(GroupAction { curve, elements })
}

impl GroupAction {
    pub fn trivial(curve: Arc<Curve>) -> GroupAction {
        let id = Isometry::identity(&curve);
        GroupAction { curve, elements: vec![id] }
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Distinct images of a point.
    pub fn orbit(&self, p: &Point) -> Vec<Point> {
        let mut out: Vec<Point> = self.elements.iter().map(|s| s.apply(&self.curve, p)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Indices of the elements fixing `p`.
    pub fn stabilizer(&self, p: &Point) -> Vec<usize> {
        (0..self.elements.len())
            .filter(|&i| self.elements[i].apply(&self.curve, p) == *p)
            .collect()
    }

    pub fn is_invariant_divisor(&self, d: &Divisor) -> bool {
        self.elements.iter().all(|s| s.apply_divisor(&self.curve, d) == *d)
    }

    pub fn is_invariant_function(&self, f: &PlFunction) -> Result<bool> {
        for s in &self.elements[1..] {
            if s.pull_function(f)? != *f {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Points where the stabilizer is not locally constant.
    pub fn compute_v1(&self) -> Vec<Point> {
        let c = &self.curve;
        let mut out = Vec::new();
        let pointwise = |e: usize| -> Vec<usize> {
            (0..self.elements.len()).filter(|&i| self.elements[i].edge_map[e] == (e, false)).collect()
        };
        for v in 0..c.num_vertices() {
            let stab = self.stabilizer(&Point::Vertex(v));
            if c.half_edges(v).iter().any(|h| pointwise(h.edge) != stab) {
                out.push(Point::Vertex(v));
            }
        }
        for e in 0..c.num_edges() {
            if self.elements.iter().any(|s| s.edge_map[e] == (e, true)) {
                let l = c.length(e).finite().expect("reversed edges are finite");
                out.push(Point::Edge { edge: e, offset: l / Rational::from_integer(2.into()) });
            }
        }
        out
    }

    /// The same action seen on another model of the curve. Fails if the
    /// model's vertex set is not stable.
    pub fn transport(&self, remodel: &Remodel) -> Result<GroupAction> {
        let target = Arc::new(remodel.curve.clone());
        let mut elements = Vec::with_capacity(self.elements.len());
        for s in &self.elements {
            let mut vm = Vec::with_capacity(target.num_vertices());
            for p in &remodel.vertex_points {
                let img = s.apply(&self.curve, p);
                let w = remodel.try_vertex_of(&img).ok_or_else(|| {
                    Error::NotStable(format!("`{}` is not mapped to a vertex", self.curve.point_label(p)))
                })?;
                vm.push(w);
            }
            let mut em = Vec::with_capacity(target.num_edges());
            for e in 0..target.num_edges() {
                let sample = remodel.to_old_in(&self.curve, &target.interior_sample(e));
                let img = remodel.to_new(&s.apply(&self.curve, &sample));
                let Point::Edge { edge: f, .. } = img else {
                    return Err(Error::NotStable(format!("edge `{}` is not mapped to an edge", target.edge(e).id)));
                };
                let ends = target.edge(e).ends;
                let rev = vm[ends[0]] != target.edge(f).ends[0];
                em.push((f, rev));
            }
            let iso = Isometry { vertex_map: vm, edge_map: em };
            iso.validate(&target).map_err(|e| Error::NotStable(e.to_string()))?;
            elements.push(iso);
        }
        Ok(GroupAction { curve: target, elements })
    }

    /// Orbits and stabilizers of vertices and edges of the working model.
    pub fn orbit_data(&self) -> OrbitData {
        let c = &self.curve;
        let mut vertex_orbit = vec![usize::MAX; c.num_vertices()];
        let mut nv = 0;
        for v in 0..c.num_vertices() {
            if vertex_orbit[v] == usize::MAX {
                for s in &self.elements {
                    vertex_orbit[s.vertex_map[v]] = nv;
                }
                nv += 1;
            }
        }
        let mut edge_orbit = vec![usize::MAX; c.num_edges()];
        let mut ne = 0;
        for e in 0..c.num_edges() {
            if edge_orbit[e] == usize::MAX {
                for s in &self.elements {
                    edge_orbit[s.edge_map[e].0] = ne;
                }
                ne += 1;
            }
        }
        let vertex_stabilizer =
            (0..c.num_vertices()).map(|v| self.elements.iter().filter(|s| s.vertex_map[v] == v).count()).collect();
        let edge_stabilizer =
            (0..c.num_edges()).map(|e| self.elements.iter().filter(|s| s.edge_map[e].0 == e).count()).collect();
        OrbitData {
            vertex_orbit,
            edge_orbit,
            num_vertex_orbits: nv,
            num_edge_orbits: ne,
            vertex_stabilizer,
            edge_stabilizer,
        }
    }

    /// The invariant model: vertices are the orbit of the canonical loopless
    /// vertices and of the points with unstable stabilizer, refined so that
    /// no edge joins two vertices of the same orbit.
    pub fn invariant_model(&self) -> Result<InvariantModel> {
        let g0 = self.curve.canonical_loopless_model()?;
        let mut seeds = g0.vertex_points.clone();
        seeds.extend(self.compute_v1());
        let mut pts = self.orbit_closure(&seeds);
        let mut remodel = Remodel::with_vertices(&self.curve, &pts)?;
        let mut action = self.transport(&remodel)?;
        let od = action.orbit_data();
        let c1 = action.curve.clone();
        let loops: Vec<Point> = (0..c1.num_edges())
            .filter(|&e| {
                let ends = c1.edge(e).ends;
                od.vertex_orbit[ends[0]] == od.vertex_orbit[ends[1]]
            })
            .map(|e| remodel.to_old_in(&self.curve, &c1.interior_sample(e)))
            .collect();
        if !loops.is_empty() {
            pts.extend(self.orbit_closure(&loops));
            remodel = Remodel::with_vertices(&self.curve, &pts)?;
            action = self.transport(&remodel)?;
        }
        let orbits = action.orbit_data();
        Ok(InvariantModel { remodel, action, orbits })
    }

    fn orbit_closure(&self, pts: &[Point]) -> Vec<Point> {
        let mut out: Vec<Point> = pts.iter().flat_map(|p| self.orbit(p)).collect();
        out.sort();
        out.dedup();
        out
    }
}

/// The invariant model `G1` of a group action, with the action on it.
#[derive(Clone, Debug)]
pub struct InvariantModel {
    /// From the working model to `G1`.
    pub remodel: Remodel,
    pub action: GroupAction,
    pub orbits: OrbitData,
}
