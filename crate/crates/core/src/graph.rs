//! Tropical curves presented by metric-graph models.
//!
//! A [`Curve`] is a finite connected multigraph with exact edge lengths in
//! `ℚ₊ ∪ {∞}`. Loops and parallel edges are allowed. An edge of infinite
//! length is always a leaf edge whose far end is a vertex flagged
//! `at_infinity`; the constructor orients such edges so that `ends[1]` is the
//! point at infinity and offsets along them are measured from the finite end.
//!
//! Points are either model vertices or interior edge points with an offset
//! measured from `ends[0]`. Most geometric questions are answered by
//! refining the model so that the points involved become vertices and then
//! working on the finite graph; see [`Remodel`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, int, Length, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub at_infinity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
    pub length: Length,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// One end of an edge, seen from the vertex it is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: usize,
    /// 0 if the edge leaves the vertex in its positive direction.
    pub end: usize,
}

/// A model `(G, l)` of a tropical curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<HalfEdge>>,
}

/// A point of a curve.
///
/// Interior edge points carry their offset from `ends[0]` of the edge, with
/// `0 < offset < length`. Use [`Curve::point_on_edge`] to build one from an
/// arbitrary anchor; it normalizes endpoints to vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(usize),
    Edge { edge: usize, offset: Rational },
}

impl Curve {
    /// Builds and validates a model.
    pub fn new(vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> Result<Curve> {
        if vertices.is_empty() {
            return Err(Error::InvalidCurve("no vertices".into()));
        }
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.id.as_str()) {
                return Err(Error::DuplicateId(v.id.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !seen.insert(e.id.as_str()) {
                return Err(Error::DuplicateId(e.id.clone()));
            }
        }
        for e in edges.iter_mut() {
            for &end in &e.ends {
                if end >= vertices.len() {
                    return Err(Error::DanglingId(format!("edge `{}` endpoint {}", e.id, end)));
                }
            }
            match &e.length {
                Length::Finite(q) if !q.is_positive() => {
                    return Err(Error::NonpositiveLength(e.id.clone()))
                }
                Length::Finite(_) => {
                    if e.ends.iter().any(|&v| vertices[v].at_infinity) {
                        return Err(Error::InvalidCurve(format!(
                            "finite edge `{}` touches a point at infinity",
                            e.id
                        )));
                    }
                }
                Length::Infinite => {
                    let inf = [vertices[e.ends[0]].at_infinity, vertices[e.ends[1]].at_infinity];
                    match inf {
                        [false, true] => {}
                        [true, false] => e.ends.swap(0, 1),
                        _ => {
                            return Err(Error::InvalidCurve(format!(
                                "infinite edge `{}` must join a finite vertex to a point at infinity",
                                e.id
                            )))
                        }
                    }
                }
            }
        }
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.ends[0]].push(HalfEdge { edge: i, end: 0 });
            incidence[e.ends[1]].push(HalfEdge { edge: i, end: 1 });
        }
        for (v, vert) in vertices.iter().enumerate() {
            if vert.at_infinity && incidence[v].len() != 1 {
                return Err(Error::InvalidCurve(format!(
                    "point at infinity `{}` must have valence one",
                    vert.id
                )));
            }
        }
        let curve = Curve { vertices, edges, incidence };
        if !curve.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(curve)
    }

    /// A one-vertex curve with no edges.
    pub fn singleton(id: &str) -> Curve {
        Curve::new(vec![Vertex { id: id.into(), at_infinity: false }], vec![]).unwrap()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn half_edges(&self, v: usize) -> &[HalfEdge] {
        &self.incidence[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn is_singleton(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn length(&self, e: usize) -> &Length {
        &self.edges[e].length
    }

    /// The vertex at the other end of a half-edge.
    pub fn far_end(&self, h: HalfEdge) -> usize {
        self.edges[h.edge].ends[1 - h.end]
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &h in &self.incidence[v] {
                let w = self.far_end(h);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Genus (first Betti number) of the underlying graph.
    pub fn genus(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Builds the point at `offset` from `anchor` along edge `edge`.
    /// Offsets equal to 0 or the length land on the corresponding vertex.
    pub fn point_on_edge(&self, edge: usize, offset: &Rational, anchor: usize) -> Result<Point> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::PointOffCurve(format!("no edge {edge}")))?;
        if offset.is_negative() {
            return Err(Error::PointOffCurve(format!("negative offset on `{}`", e.id)));
        }
        let t = if anchor == e.ends[0] {
            offset.clone()
        } else if anchor == e.ends[1] {
            match &e.length {
                Length::Finite(l) => l - offset,
                Length::Infinite => {
                    return Err(Error::PointOffCurve(format!(
                        "offsets on `{}` are measured from its finite end",
                        e.id
                    )))
                }
            }
        } else {
            return Err(Error::PointOffCurve(format!("anchor is not an endpoint of `{}`", e.id)));
        };
        self.point_at(edge, &t)
    }

    /// The point at offset `t` from `ends[0]`, normalizing endpoints.
    pub fn point_at(&self, edge: usize, t: &Rational) -> Result<Point> {
        let e = &self.edges[edge];
        if t.is_negative() || Length::Finite(t.clone()) > e.length {
            return Err(Error::PointOffCurve(format!(
                "offset {} outside edge `{}`",
                format_rational(t),
                e.id
            )));
        }
        if t.is_zero() {
            return Ok(Point::Vertex(e.ends[0]));
        }
        if Length::Finite(t.clone()) == e.length {
            return Ok(Point::Vertex(e.ends[1]));
        }
        Ok(Point::Edge { edge, offset: t.clone() })
    }

    /// Checks that a point reference is valid for this model.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        match p {
            Point::Vertex(v) if *v < self.vertices.len() => Ok(()),
            Point::Vertex(v) => Err(Error::PointOffCurve(format!("no vertex {v}"))),
            Point::Edge { edge, offset } => {
                let e = self
                    .edges
                    .get(*edge)
                    .ok_or_else(|| Error::PointOffCurve(format!("no edge {edge}")))?;
                if !offset.is_positive() || Length::Finite(offset.clone()) >= e.length {
                    return Err(Error::PointOffCurve(format!(
                        "offset {} not interior to `{}`",
                        format_rational(offset),
                        e.id
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn is_at_infinity(&self, p: &Point) -> bool {
        matches!(p, Point::Vertex(v) if self.vertices[*v].at_infinity)
    }

    /// Number of connected components of a small punctured neighbourhood.
    pub fn valence(&self, p: &Point) -> usize {
        match p {
            Point::Vertex(v) => self.incidence[*v].len(),
            Point::Edge { .. } => 2,
        }
    }

    /// True for points of valence two.
    pub fn is_smooth(&self, p: &Point) -> bool {
        self.valence(p) == 2
    }

    /// A readable label: the vertex id or `edge@offset`.
    pub fn point_label(&self, p: &Point) -> String {
        match p {
            Point::Vertex(v) => self.vertices[*v].id.clone(),
            Point::Edge { edge, offset } => {
                format!("{}@{}", self.edges[*edge].id, format_rational(offset))
            }
        }
    }

    /// Finite interior sample of an edge: its midpoint, or offset 1 on an
    /// unbounded edge.
    pub fn interior_sample(&self, e: usize) -> Point {
        let t = match &self.edges[e].length {
            Length::Finite(l) => l / int(2),
            Length::Infinite => int(1),
        };
        Point::Edge { edge: e, offset: t }
    }

    /// Multi-source shortest path distances to every vertex.
    pub fn vertex_distances(&self, sources: &[(usize, Length)]) -> Vec<Length> {
        let mut dist = vec![Length::Infinite; self.vertices.len()];
        let mut queue = BTreeSet::new();
        for (v, d) in sources {
            if *d < dist[*v] {
                dist[*v] = d.clone();
            }
        }
        for (v, d) in dist.iter().enumerate() {
            if !d.is_infinite() {
                queue.insert((d.clone(), v));
            }
        }
        while let Some((d, v)) = queue.pop_first() {
            if d > dist[v] {
                continue;
            }
            for &h in &self.incidence[v] {
                let w = self.far_end(h);
                let nd = &d + &self.edges[h.edge].length;
                if nd < dist[w] {
                    if !dist[w].is_infinite() {
                        queue.remove(&(dist[w].clone(), w));
                    }
                    dist[w] = nd.clone();
                    if !nd.is_infinite() {
                        queue.insert((nd, w));
                    }
                }
            }
        }
        dist
    }

    /// Shortest-path distance between two points.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<Length> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x == y {
            return Ok(Length::zero());
        }
        let r = Remodel::refine(self, &[x.clone(), y.clone()])?;
        let xs = r.vertex_of(x);
        let ys = r.vertex_of(y);
        Ok(r.curve.vertex_distances(&[(xs, Length::zero())])[ys].clone())
    }

    /// Connected components of the curve with the marked vertices removed.
    ///
    /// Every edge keeps its open interior; an edge whose two ends are removed
    /// is a component of its own.
    pub fn components_without(&self, removed: &[bool]) -> Components {
        let n = self.vertices.len();
        let mut uf = UnionFind::new(n + self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            for &v in &e.ends {
                if !removed[v] {
                    uf.union(n + i, v);
                }
            }
        }
        let mut labels = BTreeMap::new();
        let mut label = |x: usize, uf: &mut UnionFind| {
            let r = uf.find(x);
            let k = labels.len();
            *labels.entry(r).or_insert(k)
        };
        let vertex: Vec<Option<usize>> = (0..n)
            .map(|v| if removed[v] { None } else { Some(label(v, &mut uf)) })
            .collect();
        let edge: Vec<usize> = (0..self.edges.len()).map(|i| label(n + i, &mut uf)).collect();
        Components { count: labels.len(), vertex, edge }
    }

    /// True iff removing the given points disconnects the curve.
    pub fn is_cut_set(&self, points: &[Point]) -> Result<bool> {
        if points.is_empty() {
            return Ok(false);
        }
        let r = Remodel::refine(self, points)?;
        let mut removed = vec![false; r.curve.num_vertices()];
        for p in points {
            removed[r.vertex_of(p)] = true;
        }
        Ok(r.curve.components_without(&removed).count > 1)
    }

    /// The canonical loopless model of the curve this model presents.
    pub fn canonical_loopless_model(&self) -> Result<Remodel> {
        if self.is_singleton() {
            return Remodel::refine(self, &[]);
        }
        let mut keep: Vec<Point> = (0..self.vertices.len())
            .filter(|&v| self.incidence[v].len() != 2)
            .map(Point::Vertex)
            .collect();
        let finite_nonsmooth = keep.iter().any(|p| !self.is_at_infinity(p));
        if !finite_nonsmooth {
            // Circle, or a line with two points at infinity: keep one
            // finite point as the distinguished origin.
            let origin = (0..self.vertices.len())
                .find(|&v| !self.vertices[v].at_infinity)
                .expect("a valid curve has a finite vertex");
            keep.push(Point::Vertex(origin));
        }
        let coarse = Remodel::with_vertices(self, &keep)?;
        let midpoints: Vec<Point> = coarse
            .curve
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_loop())
            .map(|(i, _)| coarse.curve.interior_sample(i))
            .collect();
        let mut all: Vec<Point> = keep;
        all.extend(midpoints.iter().map(|m| coarse.to_old_in(self, m)));
        Remodel::with_vertices(self, &all)
    }
}

/// Result of [`Curve::components_without`].
#[derive(Clone, Debug)]
pub struct Components {
    pub count: usize,
    pub vertex: Vec<Option<usize>>,
    pub edge: Vec<usize>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A piece of an old edge traversed by a new edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub edge: usize,
    /// Old offsets covered, `start < end`.
    pub start: Rational,
    pub end: Length,
    /// True if the new edge runs in the old edge's positive direction.
    pub forward: bool,
    /// Offset along the new edge where this piece begins.
    pub at: Rational,
}

impl Piece {
    fn len(&self) -> Length {
        match &self.end {
            Length::Finite(e) => Length::Finite(e - &self.start),
            Length::Infinite => Length::Infinite,
        }
    }
}

/// Another model of the same curve, with the isometry between the two.
///
/// Built either by refinement (adding vertices) or by choosing an arbitrary
/// vertex set containing every point of valence other than two.
#[derive(Clone, Debug)]
pub struct Remodel {
    pub curve: Curve,
    /// Old point underlying each new vertex.
    pub vertex_points: Vec<Point>,
    /// Per new edge, its pieces in order from `ends[0]`.
    pub pieces: Vec<Vec<Piece>>,
    old_vertex: Vec<Point>,
    by_old_edge: Vec<Vec<(usize, usize)>>,
    new_vertex_of: HashMap<Point, usize>,
}

impl Remodel {
    /// Refines `old` so that every given point becomes a vertex.
    pub fn refine(old: &Curve, points: &[Point]) -> Result<Remodel> {
        let mut keep: Vec<Point> = (0..old.num_vertices()).map(Point::Vertex).collect();
        keep.extend(points.iter().cloned());
        Remodel::with_vertices(old, &keep)
    }

    /// The model of the same curve whose vertices are `keep` together with
    /// every point of valence other than two.
    pub fn with_vertices(old: &Curve, keep: &[Point]) -> Result<Remodel> {
        for p in keep {
            old.check_point(p)?;
        }
        // Fine graph: old vertices plus interior keep points.
        let nv = old.num_vertices();
        let mut cuts: Vec<Vec<Rational>> = vec![Vec::new(); old.num_edges()];
        for p in keep {
            if let Point::Edge { edge, offset } = p {
                cuts[*edge].push(offset.clone());
            }
        }
        let mut node_point: Vec<Point> = (0..nv).map(Point::Vertex).collect();
        let mut fine: Vec<(usize, usize, usize, Rational, Length)> = Vec::new();
        for (e, c) in cuts.iter_mut().enumerate() {
            c.sort();
            c.dedup();
            let edge = old.edge(e);
            let mut prev_node = edge.ends[0];
            let mut prev_t = Rational::zero();
            for t in c.iter() {
                let node = node_point.len();
                node_point.push(Point::Edge { edge: e, offset: t.clone() });
                fine.push((prev_node, node, e, prev_t.clone(), Length::Finite(t.clone())));
                prev_node = node;
                prev_t = t.clone();
            }
            fine.push((prev_node, edge.ends[1], e, prev_t, edge.length.clone()));
        }
        let nn = node_point.len();
        let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nn];
        for (i, f) in fine.iter().enumerate() {
            inc[f.0].push((i, 0));
            inc[f.1].push((i, 1));
        }
        let index: HashMap<Point, usize> =
            node_point.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let mut is_vertex = vec![false; nn];
        for p in keep {
            is_vertex[index[p]] = true;
        }
        for (n, i) in inc.iter().enumerate() {
            if i.len() != 2 {
                is_vertex[n] = true;
            }
        }
        if !is_vertex.iter().any(|&b| b) {
            is_vertex[0] = true;
        }
        let mut new_index = vec![usize::MAX; nn];
        let mut vertices = Vec::new();
        let mut vertex_points = Vec::new();
        for n in 0..nn {
            if is_vertex[n] {
                new_index[n] = vertices.len();
                vertices.push(Vertex {
                    id: old.point_label(&node_point[n]),
                    at_infinity: old.is_at_infinity(&node_point[n]),
                });
                vertex_points.push(node_point[n].clone());
            }
        }
        // Walk chains between kept nodes.
        let mut used = vec![false; fine.len()];
        let mut edges = Vec::new();
        let mut pieces = Vec::new();
        let mut joints: Vec<(usize, usize, Rational)> = Vec::new();
        let starts: Vec<usize> = (0..nn)
            .filter(|&n| is_vertex[n] && !old.is_at_infinity(&node_point[n]))
            .chain((0..nn).filter(|&n| is_vertex[n] && old.is_at_infinity(&node_point[n])))
            .collect();
        for &s in &starts {
            for k in 0..inc[s].len() {
                let (f0, side0) = inc[s][k];
                if used[f0] {
                    continue;
                }
                let mut chain = Vec::new();
                let mut at = Rational::zero();
                let mut total = Length::zero();
                let (mut f, mut side) = (f0, side0);
                let mut cur_joints = Vec::new();
                let end_node = loop {
                    used[f] = true;
                    let (a, b, e, st, en) = &fine[f];
                    let forward = side == 0;
                    let piece = Piece {
                        edge: *e,
                        start: st.clone(),
                        end: en.clone(),
                        forward,
                        at: at.clone(),
                    };
                    let plen = piece.len();
                    total = &total + &plen;
                    if let Length::Finite(l) = &plen {
                        at += l;
                    }
                    chain.push(piece);
                    let next = if forward { *b } else { *a };
                    if is_vertex[next] {
                        break next;
                    }
                    cur_joints.push((next, at.clone()));
                    let &(nf, nside) = inc[next]
                        .iter()
                        .find(|(g, sd)| !(*g == f && *sd == 1 - side) && !used[*g])
                        .expect("valence two node continues its chain");
                    f = nf;
                    side = nside;
                };
                let id = chain_id(old, &chain, &cuts);
                let ne = edges.len();
                for (node, t) in cur_joints {
                    joints.push((node, ne, t));
                }
                edges.push(Edge { id, ends: [new_index[s], new_index[end_node]], length: total });
                pieces.push(chain);
            }
        }
        let curve = Curve::new(vertices, edges)?;
        let mut old_vertex: Vec<Point> = vec![Point::Vertex(usize::MAX); nv];
        for v in 0..nv {
            if is_vertex[v] {
                old_vertex[v] = Point::Vertex(new_index[v]);
            }
        }
        for (node, ne, t) in joints {
            if node < nv {
                old_vertex[node] = Point::Edge { edge: ne, offset: t };
            }
        }
        let mut by_old_edge = vec![Vec::new(); old.num_edges()];
        for (ne, ps) in pieces.iter().enumerate() {
            for (k, p) in ps.iter().enumerate() {
                by_old_edge[p.edge].push((ne, k));
            }
        }
        let new_vertex_of =
            vertex_points.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        Ok(Remodel { curve, vertex_points, pieces, old_vertex, by_old_edge, new_vertex_of })
    }

    /// The new vertex sitting at an old point that was kept as a vertex.
    pub fn vertex_of(&self, old: &Point) -> usize {
        self.new_vertex_of[old]
    }

    /// The new vertex at an old point, if the point is a new vertex.
    pub fn try_vertex_of(&self, old: &Point) -> Option<usize> {
        self.new_vertex_of.get(old).copied()
    }

    /// Translates an old point to the new model.
    pub fn to_new(&self, old: &Point) -> Point {
        if let Some(&v) = self.new_vertex_of.get(old) {
            return Point::Vertex(v);
        }
        match old {
            Point::Vertex(v) => self.old_vertex[*v].clone(),
            Point::Edge { edge, offset } => {
                for &(ne, k) in &self.by_old_edge[*edge] {
                    let p = &self.pieces[ne][k];
                    if *offset > p.start && Length::Finite(offset.clone()) < p.end {
                        let u = if p.forward {
                            &p.at + (offset - &p.start)
                        } else {
                            &p.at + (p.end.finite().unwrap() - offset)
                        };
                        return Point::Edge { edge: ne, offset: u };
                    }
                }
                // The offset sits on a piece boundary that is not a vertex:
                // a coarsened-away refinement point. Find the adjacent piece.
                for &(ne, k) in &self.by_old_edge[*edge] {
                    let p = &self.pieces[ne][k];
                    if *offset == p.start {
                        let u = if p.forward { p.at.clone() } else { &p.at + p.len().finite().unwrap() };
                        return Point::Edge { edge: ne, offset: u };
                    }
                }
                unreachable!("point lies on some piece")
            }
        }
    }

    /// Translates a new point back to the old model.
    pub fn to_old(&self, new: &Point) -> Point {
        match new {
            Point::Vertex(v) => self.vertex_points[*v].clone(),
            Point::Edge { edge, offset } => {
                let ps = &self.pieces[*edge];
                let k = ps.iter().rposition(|p| p.at <= *offset).unwrap_or(0);
                let p = &ps[k];
                let d = offset - &p.at;
                let t = if p.forward {
                    &p.start + d
                } else {
                    p.end.finite().unwrap() - d
                };
                Point::Edge { edge: p.edge, offset: t }
            }
        }
    }

    /// Like [`Remodel::to_old`], but normalizes edge endpoints to vertices of
    /// the old model.
    pub fn to_old_in(&self, old: &Curve, new: &Point) -> Point {
        match self.to_old(new) {
            Point::Edge { edge, offset } => old.point_at(edge, &offset).expect("on curve"),
            v => v,
        }
    }
}

fn chain_id(old: &Curve, chain: &[Piece], cuts: &[Vec<Rational>]) -> String {
    if chain.len() == 1 && cuts[chain[0].edge].is_empty() {
        return old.edge(chain[0].edge).id.clone();
    }
    chain
        .iter()
        .map(|p| {
            if cuts[p.edge].is_empty() {
                old.edge(p.edge).id.clone()
            } else {
                let k = cuts[p.edge].iter().filter(|c| **c <= p.start).count();
                format!("{}#{}", old.edge(p.edge).id, k)
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn infinite_edges_are_oriented_toward_infinity() {
        let c = Curve::new(
            vec![
                Vertex { id: "z".into(), at_infinity: true },
                Vertex { id: "a".into(), at_infinity: false },
            ],
            vec![Edge { id: "e".into(), ends: [0, 1], length: Length::Infinite }],
        )
        .unwrap();
        assert_eq!(c.edge(0).ends, [1, 0]);
    }

    #[test]
    fn rejects_bad_models() {
        let v = |id: &str| Vertex { id: id.into(), at_infinity: false };
        let e = |id: &str, a, b, l| Edge { id: id.into(), ends: [a, b], length: l };
        assert_eq!(
            Curve::new(vec![v("a"), v("b")], vec![e("x", 0, 1, Length::Finite(int(0)))]),
            Err(Error::NonpositiveLength("x".into()))
        );
        assert_eq!(Curve::new(vec![v("a"), v("b")], vec![]), Err(Error::Disconnected));
        assert!(matches!(
            Curve::new(vec![v("a"), v("b")], vec![e("x", 0, 1, Length::Infinite)]),
            Err(Error::InvalidCurve(_))
        ));
    }

    #[test]
    fn refine_segment_at_midpoint() {
        let c = fixtures::segment(int(2));
        let p = Point::Edge { edge: 0, offset: int(1) };
        let r = Remodel::refine(&c, std::slice::from_ref(&p)).unwrap();
        assert_eq!(r.curve.num_vertices(), 3);
        assert_eq!(r.curve.num_edges(), 2);
        for e in r.curve.edges() {
            assert_eq!(e.length, Length::Finite(int(1)));
        }
        let q = Point::Edge { edge: 0, offset: rat(3, 2) };
        let q2 = r.to_new(&q);
        assert_eq!(r.to_old(&q2), q);
        let empty = Remodel::refine(&c, &[]).unwrap();
        assert_eq!(empty.curve, c);
    }

    #[test]
    fn refine_circle_at_midpoint() {
        let c = fixtures::circle_one_vertex(int(2));
        let r = Remodel::refine(&c, &[Point::Edge { edge: 0, offset: int(1) }]).unwrap();
        assert_eq!(r.curve.num_vertices(), 2);
        assert_eq!(r.curve.num_edges(), 2);
    }

    #[test]
    fn off_curve_points_are_rejected() {
        let c = fixtures::segment(int(1));
        assert!(c.point_on_edge(0, &int(2), 0).is_err());
        assert!(Remodel::refine(&c, &[Point::Edge { edge: 0, offset: int(1) }]).is_err());
    }

    #[test]
    fn canonical_model_examples() {
        // Segment with a smooth vertex in the middle.
        let seg = fixtures::path(&[rat(1, 2), rat(1, 2)]);
        let m = seg.canonical_loopless_model().unwrap();
        assert_eq!(m.curve.num_vertices(), 2);
        assert_eq!(m.curve.num_edges(), 1);
        assert_eq!(m.curve.edge(0).length, Length::Finite(int(1)));
        // Circle given as three arcs.
        let circ = fixtures::cycle(&[rat(1, 2), rat(1, 2), int(1)]);
        let m = circ.canonical_loopless_model().unwrap();
        assert_eq!(m.curve.num_vertices(), 2);
        assert_eq!(m.curve.num_edges(), 2);
        assert_eq!(m.vertex_points[0], Point::Vertex(0));
        assert_eq!(m.vertex_points[1], Point::Vertex(2));
        // Theta graph is already canonical.
        let theta = fixtures::theta(int(1));
        let m = theta.canonical_loopless_model().unwrap();
        assert_eq!(m.curve, theta);
    }
}
