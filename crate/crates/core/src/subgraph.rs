//! Closed subsets of a curve with finitely many components.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{Curve, Point, Remodel};
use crate::scalar::{int, Length, Rational};

/// A closed subset of a curve: a union of closed edge intervals and
/// isolated points.
///
/// Intervals are stored in offsets from `ends[0]`. An interval ending at
/// `Length::Infinite` contains the point at infinity of its edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subgraph {
    intervals: BTreeMap<usize, Vec<(Rational, Length)>>,
    points: BTreeSet<Point>,
}

/// A subgraph materialized on a refinement in which its boundary points are
/// vertices: every refined edge is either inside or outside.
#[derive(Clone, Debug)]
pub struct Cells {
    pub remodel: Remodel,
    pub edge_in: Vec<bool>,
    pub vertex_in: Vec<bool>,
}

impl Cells {
    /// Boundary vertices (in the refinement) with their number of outgoing
    /// half-edges.
    pub fn boundary(&self) -> Vec<(usize, usize)> {
        let c = &self.remodel.curve;
        (0..c.num_vertices())
            .filter(|&v| self.vertex_in[v])
            .filter_map(|v| {
                let out = c.half_edges(v).iter().filter(|h| !self.edge_in[h.edge]).count();
                (out > 0).then_some((v, out))
            })
            .collect()
    }
}

impl Subgraph {
    pub fn empty() -> Self {
        Subgraph::default()
    }

    /// The whole curve.
    pub fn whole(curve: &Curve) -> Self {
        let mut g = Subgraph::empty();
        for e in 0..curve.num_edges() {
            g.add_edge(curve, e);
        }
        for v in 0..curve.num_vertices() {
            g.points.insert(Point::Vertex(v));
        }
        g
    }

    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Self {
        Subgraph { intervals: BTreeMap::new(), points: points.into_iter().collect() }
    }

    /// Adds a whole closed edge.
    pub fn add_edge(&mut self, curve: &Curve, e: usize) {
        self.add_interval(e, Rational::zero(), curve.length(e).clone());
    }

    /// Adds the closed interval `[start, end]` of edge `e`.
    pub fn add_interval(&mut self, e: usize, start: Rational, end: Length) {
        self.intervals.entry(e).or_default().push((start, end));
    }

    pub fn add_point(&mut self, p: Point) {
        self.points.insert(p);
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        let mut out = self.clone();
        for (e, iv) in &other.intervals {
            out.intervals.entry(*e).or_default().extend(iv.iter().cloned());
        }
        out.points.extend(other.points.iter().cloned());
        out
    }

    pub fn intervals(&self) -> impl Iterator<Item = (usize, &(Rational, Length))> {
        self.intervals.iter().flat_map(|(e, iv)| iv.iter().map(move |i| (*e, i)))
    }

    pub fn points(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.intervals.values().all(|v| v.is_empty())
    }

    /// Membership of a single point.
    pub fn contains(&self, curve: &Curve, p: &Point) -> bool {
        if self.points.contains(p) {
            return true;
        }
        match p {
            Point::Vertex(v) => curve.half_edges(*v).iter().any(|h| {
                self.intervals.get(&h.edge).is_some_and(|iv| {
                    iv.iter().any(|(a, b)| {
                        if h.end == 0 {
                            a.is_zero()
                        } else {
                            *b == *curve.length(h.edge)
                        }
                    })
                })
            }),
            Point::Edge { edge, offset } => self.intervals.get(edge).is_some_and(|iv| {
                iv.iter().any(|(a, b)| a <= offset && Length::Finite(offset.clone()) <= *b)
            }),
        }
    }

    /// Materializes the subgraph on a refinement, also making `extra` points
    /// vertices.
    pub fn cells(&self, curve: &Curve, extra: &[Point]) -> Result<Cells> {
        let mut cut: Vec<Point> = extra.to_vec();
        for (e, (a, b)) in self.intervals() {
            if !a.is_zero() {
                cut.push(curve.point_at(e, a)?);
            }
            if let Length::Finite(b) = b {
                cut.push(curve.point_at(e, b)?);
            }
        }
        for p in &self.points {
            curve.check_point(p)?;
            cut.push(p.clone());
        }
        let remodel = Remodel::refine(curve, &cut)?;
        let rc = &remodel.curve;
        let edge_in: Vec<bool> = (0..rc.num_edges())
            .map(|e| {
                let piece = &remodel.pieces[e][0];
                let mid = match &piece.end {
                    Length::Finite(b) => (&piece.start + b) / int(2),
                    Length::Infinite => &piece.start + int(1),
                };
                self.intervals.get(&piece.edge).is_some_and(|iv| {
                    iv.iter().any(|(a, b)| *a <= mid && Length::Finite(mid.clone()) <= *b)
                })
            })
            .collect();
        let vertex_in: Vec<bool> = (0..rc.num_vertices())
            .map(|v| {
                rc.half_edges(v).iter().any(|h| edge_in[h.edge])
                    || self.contains(curve, &remodel.vertex_points[v])
            })
            .collect();
        Ok(Cells { remodel, edge_in, vertex_in })
    }

    /// Rejects empty subgraphs and components made only of points at
    /// infinity.
    pub fn check_source(&self, curve: &Curve) -> Result<()> {
        let cells = self.cells(curve, &[])?;
        if !cells.vertex_in.iter().any(|&b| b) {
            return Err(Error::EmptySubgraph);
        }
        let rc = &cells.remodel.curve;
        for v in 0..rc.num_vertices() {
            if cells.vertex_in[v]
                && rc.vertex(v).at_infinity
                && !rc.half_edges(v).iter().any(|h| cells.edge_in[h.edge])
            {
                return Err(Error::InvalidSource(format!(
                    "component consisting only of the point at infinity `{}`",
                    rc.vertex(v).id
                )));
            }
        }
        Ok(())
    }

    /// Shortest distance from `x` to the subgraph.
    pub fn distance_from(&self, curve: &Curve, x: &Point) -> Result<Length> {
        let cells = self.cells(curve, std::slice::from_ref(x))?;
        let sources: Vec<(usize, Length)> = (0..cells.vertex_in.len())
            .filter(|&v| cells.vertex_in[v])
            .map(|v| (v, Length::zero()))
            .collect();
        if sources.is_empty() {
            return Err(Error::EmptySubgraph);
        }
        let dist = cells.remodel.curve.vertex_distances(&sources);
        Ok(dist[cells.remodel.vertex_of(x)].clone())
    }

    /// Closure of the complement.
    pub fn closure_of_complement(&self, curve: &Curve) -> Result<Subgraph> {
        let cells = self.cells(curve, &[])?;
        let mut out = Subgraph::empty();
        for (e, inside) in cells.edge_in.iter().enumerate() {
            if !inside {
                let p = &cells.remodel.pieces[e][0];
                out.add_interval(p.edge, p.start.clone(), p.end.clone());
            }
        }
        if cells.remodel.curve.is_singleton() && !cells.vertex_in[0] {
            out.add_point(Point::Vertex(0));
        }
        Ok(out)
    }

    /// Boundary points with the number of edges pointing out of the
    /// subgraph at each.
    pub fn boundary(&self, curve: &Curve) -> Result<Vec<(Point, usize)>> {
        let cells = self.cells(curve, &[])?;
        Ok(cells
            .boundary()
            .into_iter()
            .map(|(v, out)| (cells.remodel.vertex_points[v].clone(), out))
            .collect())
    }

    /// True iff for each boundary point there are at least as many chips of
    /// `chips` as edges pointing out of the subgraph.
    pub fn can_fire(&self, curve: &Curve, chips: &Divisor) -> Result<bool> {
        Ok(self
            .boundary(curve)?
            .into_iter()
            .all(|(p, out)| chips.at(&p) >= out as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn distance_to_point_on_segment() {
        let c = fixtures::segment(int(3));
        let g = Subgraph::from_points([Point::Vertex(0)]);
        let x = Point::Edge { edge: 0, offset: int(2) };
        assert_eq!(g.distance_from(&c, &x).unwrap(), Length::Finite(int(2)));
        let whole = Subgraph::whole(&c);
        assert_eq!(whole.distance_from(&c, &x).unwrap(), Length::zero());
        assert_eq!(Subgraph::empty().distance_from(&c, &x), Err(Error::EmptySubgraph));
    }

    #[test]
    fn distance_on_circle_takes_shorter_arc() {
        let c = fixtures::circle(int(2));
        let g = Subgraph::from_points([Point::Vertex(0)]);
        for (pos, expect) in [(rat(1, 3), rat(1, 3)), (rat(3, 2), rat(1, 2)), (rat(5, 4), rat(3, 4))] {
            let x = fixtures::circle_point(&c, &pos);
            assert_eq!(g.distance_from(&c, &x).unwrap(), Length::Finite(expect));
        }
    }

    #[test]
    fn firing_condition_counts_outgoing_edges() {
        let c = fixtures::segment(int(1));
        let g = Subgraph::from_points([Point::Vertex(0)]);
        assert!(g.can_fire(&c, &Divisor::point(Point::Vertex(0))).unwrap());
        assert!(!g.can_fire(&c, &Divisor::zero()).unwrap());
    }

    #[test]
    fn theta_half_needs_a_chip_per_cut_edge() {
        // Closed neighbourhood of radius 1/2 around one branch vertex.
        let c = fixtures::theta(int(1));
        let mut g = Subgraph::empty();
        for e in 0..3 {
            g.add_interval(e, int(0), Length::Finite(rat(1, 2)));
        }
        let bd = g.boundary(&c).unwrap();
        assert_eq!(bd.len(), 3);
        assert!(bd.iter().all(|(_, out)| *out == 1));
        let mids: Vec<Point> = (0..3).map(|e| Point::Edge { edge: e, offset: rat(1, 2) }).collect();
        let two = Divisor::from_terms([(mids[0].clone(), 2), (mids[1].clone(), 2)]);
        assert!(!g.can_fire(&c, &two).unwrap());
        let three = Divisor::from_terms(mids.iter().map(|p| (p.clone(), 1)));
        assert!(g.can_fire(&c, &three).unwrap());
    }

    #[test]
    fn lone_point_at_infinity_is_not_a_source() {
        let c = fixtures::ray();
        let g = Subgraph::from_points([Point::Vertex(1)]);
        assert!(matches!(g.check_source(&c), Err(Error::InvalidSource(_))));
        let mut h = Subgraph::empty();
        h.add_interval(0, int(2), Length::Infinite);
        assert!(h.check_source(&c).is_ok());
    }
}
