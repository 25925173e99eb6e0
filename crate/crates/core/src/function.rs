//! Piecewise linear functions with integer slopes.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::graph::{Curve, HalfEdge, Point, Remodel};
use crate::scalar::{format_rational, int, to_i64, Length, Rational, Value};

/// Restriction of a function to one edge: values at the interior
/// breakpoints and the slope (in the edge's positive direction) on each of
/// the `breaks.len() + 1` segments.
#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeFn {
    breaks: Vec<Rational>,
    values: Vec<Rational>,
    slopes: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Body {
    vertex: Vec<Value>,
    edges: Vec<EdgeFn>,
}

/// A rational function on a curve: continuous, piecewise linear with
/// integer slopes and finitely many pieces, finite away from the points at
/// infinity.
///
/// The representation is canonical: only points where the slope changes are
/// stored as breakpoints, so `==` is equality of functions. The constant
/// `-∞` function is also representable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlFunction {
    curve: Arc<Curve>,
    body: Option<Body>,
}

impl PlFunction {
    /// The constant function `c`.
    pub fn constant(curve: Arc<Curve>, c: Rational) -> PlFunction {
        let vertex = curve.vertices().iter().map(|_| Value::Finite(c.clone())).collect();
        let edges = curve
            .edges()
            .iter()
            .map(|_| EdgeFn { breaks: vec![], values: vec![], slopes: vec![0] })
            .collect();
        PlFunction { curve, body: Some(Body { vertex, edges }) }
    }

    pub fn zero(curve: Arc<Curve>) -> PlFunction {
        PlFunction::constant(curve, Rational::zero())
    }

    /// The constant `-∞` function, the neutral element of `max`.
    pub fn neg_infinity(curve: Arc<Curve>) -> PlFunction {
        PlFunction { curve, body: None }
    }

    /// Builds a function from finite samples.
    ///
    /// `cuts[e]` lists offsets on edge `e` outside of which the function is
    /// known to be linear; `eval` gives its value at every finite vertex and
    /// at every cut, and `tail(e)` the slope toward infinity on unbounded
    /// edges. Values at points at infinity follow from the tail slopes.
    pub fn from_samples(
        curve: Arc<Curve>,
        cuts: &[Vec<Rational>],
        tail: impl Fn(usize) -> i64,
        mut eval: impl FnMut(&Point) -> Result<Rational>,
    ) -> Result<PlFunction> {
        let mut vertex = vec![Value::zero(); curve.num_vertices()];
        for (v, slot) in vertex.iter_mut().enumerate() {
            if !curve.vertex(v).at_infinity {
                *slot = Value::Finite(eval(&Point::Vertex(v))?);
            }
        }
        let mut edges = Vec::with_capacity(curve.num_edges());
        for (e, edge) in curve.edges().iter().enumerate() {
            let mut pts: Vec<Rational> = cuts
                .get(e)
                .map(|c| {
                    c.iter()
                        .filter(|t| t.is_positive() && Length::Finite((*t).clone()) < edge.length)
                        .cloned()
                        .collect()
                })
                .unwrap_or_default();
            pts.sort();
            pts.dedup();
            let mut xs = vec![Rational::zero()];
            let mut ys = vec![vertex[edge.ends[0]].finite().expect("finite end").clone()];
            for t in &pts {
                xs.push(t.clone());
                ys.push(eval(&Point::Edge { edge: e, offset: t.clone() })?);
            }
            if let Length::Finite(l) = &edge.length {
                xs.push(l.clone());
                ys.push(vertex[edge.ends[1]].finite().expect("finite end").clone());
            }
            let mut slopes = Vec::with_capacity(xs.len());
            for k in 0..xs.len() - 1 {
                let s = (&ys[k + 1] - &ys[k]) / (&xs[k + 1] - &xs[k]);
                slopes.push(to_i64(&s).ok_or_else(|| {
                    Error::NonIntegerSlope(format!("{} on edge `{}`", format_rational(&s), edge.id))
                })?);
            }
            if edge.length.is_infinite() {
                let s = tail(e);
                vertex[edge.ends[1]] = Value::at_infinity(ys.last().expect("nonempty"), s);
                slopes.push(s);
            }
            // Drop points where the slope does not change.
            let mut ef = EdgeFn { breaks: vec![], values: vec![], slopes: vec![slopes[0]] };
            for k in 1..slopes.len() {
                if slopes[k] != slopes[k - 1] {
                    ef.breaks.push(xs[k].clone());
                    ef.values.push(ys[k].clone());
                    ef.slopes.push(slopes[k]);
                }
            }
            edges.push(ef);
        }
        Ok(PlFunction { curve, body: Some(Body { vertex, edges }) })
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    pub fn is_neg_infinity(&self) -> bool {
        self.body.is_none()
    }

    fn body(&self) -> Result<&Body> {
        self.body.as_ref().ok_or(Error::NoPrincipalDivisor)
    }

    fn same_curve(&self, other: &PlFunction) -> Result<()> {
        if Arc::ptr_eq(&self.curve, &other.curve) || self.curve == other.curve {
            Ok(())
        } else {
            Err(Error::CurveMismatch)
        }
    }

    /// Value at a point.
    pub fn eval(&self, p: &Point) -> Value {
        let Some(b) = &self.body else { return Value::NegInf };
        match p {
            Point::Vertex(v) => b.vertex[*v].clone(),
            Point::Edge { edge, offset } => Value::Finite(self.eval_edge(b, *edge, offset)),
        }
    }

    /// Value at a point known to be finite.
    pub fn eval_finite(&self, p: &Point) -> Result<Rational> {
        self.eval(p)
            .finite()
            .cloned()
            .ok_or_else(|| Error::Invalid(format!("infinite value at {}", self.curve.point_label(p))))
    }

    fn eval_edge(&self, b: &Body, e: usize, t: &Rational) -> Rational {
        let ef = &b.edges[e];
        let k = ef.breaks.partition_point(|x| x < t);
        if k < ef.breaks.len() && ef.breaks[k] == *t {
            return ef.values[k].clone();
        }
        let (x0, y0) = if k == 0 {
            let v0 = self.curve.edge(e).ends[0];
            (Rational::zero(), b.vertex[v0].finite().expect("finite").clone())
        } else {
            (ef.breaks[k - 1].clone(), ef.values[k - 1].clone())
        };
        y0 + int(ef.slopes[k]) * (t - x0)
    }

    /// Slope along a half-edge, leaving its vertex.
    pub fn outgoing_slope(&self, h: HalfEdge) -> i64 {
        let Some(b) = &self.body else { return 0 };
        let ef = &b.edges[h.edge];
        if h.end == 0 {
            ef.slopes[0]
        } else {
            -*ef.slopes.last().expect("nonempty")
        }
    }

    /// Slope toward infinity on an unbounded edge (or toward `ends[1]`).
    pub fn tail_slope(&self, e: usize) -> i64 {
        -self.outgoing_slope(HalfEdge { edge: e, end: 1 })
    }

    /// Slope on edge `e` just after offset `t`, in the positive direction.
    pub fn slope_after(&self, e: usize, t: &Rational) -> i64 {
        let Some(b) = &self.body else { return 0 };
        let ef = &b.edges[e];
        ef.slopes[ef.breaks.partition_point(|x| x <= t)]
    }

    /// Sum of outgoing slopes at `x`.
    pub fn ord(&self, p: &Point) -> Result<i64> {
        let b = self.body()?;
        Ok(match p {
            Point::Vertex(v) => self.curve.half_edges(*v).iter().map(|&h| self.outgoing_slope(h)).sum(),
            Point::Edge { edge, offset } => {
                let ef = &b.edges[*edge];
                match ef.breaks.binary_search(offset) {
                    Ok(k) => ef.slopes[k + 1] - ef.slopes[k],
                    Err(_) => 0,
                }
            }
        })
    }

    /// `div(f) = Σ ord_x(f) · x`.
    pub fn principal_divisor(&self) -> Result<Divisor> {
        let b = self.body()?;
        let mut terms = Vec::new();
        for v in 0..self.curve.num_vertices() {
            terms.push((Point::Vertex(v), self.ord(&Point::Vertex(v))?));
        }
        for (e, ef) in b.edges.iter().enumerate() {
            for (k, t) in ef.breaks.iter().enumerate() {
                terms.push((Point::Edge { edge: e, offset: t.clone() }, ef.slopes[k + 1] - ef.slopes[k]));
            }
        }
        Ok(Divisor::from_terms(terms))
    }

    /// Interior breakpoints, as points.
    pub fn breakpoints(&self) -> Vec<Point> {
        let Some(b) = &self.body else { return vec![] };
        b.edges
            .iter()
            .enumerate()
            .flat_map(|(e, ef)| ef.breaks.iter().map(move |t| Point::Edge { edge: e, offset: t.clone() }))
            .collect()
    }

    /// Interior breakpoint offsets on edge `e`.
    pub fn breaks(&self, e: usize) -> &[Rational] {
        self.body.as_ref().map(|b| b.edges[e].breaks.as_slice()).unwrap_or(&[])
    }

    fn cuts(&self) -> Vec<Vec<Rational>> {
        (0..self.curve.num_edges()).map(|e| self.breaks(e).to_vec()).collect()
    }

    /// All values at vertices and breakpoints. The infimum and supremum of
    /// the function are among them.
    pub fn critical_values(&self) -> Vec<Value> {
        let Some(b) = &self.body else { return vec![Value::NegInf] };
        let mut out = b.vertex.clone();
        out.extend(b.edges.iter().flat_map(|ef| ef.values.iter().cloned().map(Value::Finite)));
        out
    }

    pub fn inf(&self) -> Value {
        self.critical_values().into_iter().min().expect("nonempty")
    }

    pub fn sup(&self) -> Value {
        self.critical_values().into_iter().max().expect("nonempty")
    }

    pub fn is_constant(&self) -> bool {
        match &self.body {
            None => true,
            Some(b) => b.edges.iter().all(|ef| ef.slopes == [0]),
        }
    }

    /// Largest absolute slope.
    pub fn max_abs_slope(&self) -> i64 {
        self.body
            .as_ref()
            .map(|b| b.edges.iter().flat_map(|ef| ef.slopes.iter().map(|s| s.abs())).max().unwrap_or(0))
            .unwrap_or(0)
    }

    /// Tropical scaling `c ⊙ f = f + c`.
    pub fn trop_scale(&self, c: &Rational) -> PlFunction {
        let mut out = self.clone();
        if let Some(b) = &mut out.body {
            for v in &mut b.vertex {
                *v = v.shift(c);
            }
            for ef in &mut b.edges {
                for y in &mut ef.values {
                    *y += c;
                }
            }
        }
        out
    }

    /// Tropical sum `f ⊕ g = max(f, g)`.
    pub fn trop_add(&self, other: &PlFunction) -> Result<PlFunction> {
        self.same_curve(other)?;
        let (Some(fb), Some(gb)) = (&self.body, &other.body) else {
            return Ok(if self.body.is_none() { other.clone() } else { self.clone() });
        };
        let mut cuts = merge_cuts(&self.cuts(), &other.cuts());
        for (e, c) in cuts.iter_mut().enumerate() {
            let mut xs = vec![Rational::zero()];
            xs.extend(c.iter().cloned());
            let diff = |t: &Rational| {
                let p = self.curve.point_at(e, t).expect("on edge");
                let fv = match &p {
                    Point::Vertex(v) => fb.vertex[*v].finite().expect("finite").clone(),
                    _ => self.eval_edge(fb, e, t),
                };
                let gv = match &p {
                    Point::Vertex(v) => gb.vertex[*v].finite().expect("finite").clone(),
                    _ => other.eval_edge(gb, e, t),
                };
                fv - gv
            };
            let mut extra = Vec::new();
            match self.curve.length(e) {
                Length::Finite(l) => {
                    xs.push(l.clone());
                    for w in xs.windows(2) {
                        let (da, db) = (diff(&w[0]), diff(&w[1]));
                        if (da.is_positive() && db.is_negative()) || (da.is_negative() && db.is_positive()) {
                            extra.push(&w[0] + &da * (&w[1] - &w[0]) / (&da - &db));
                        }
                    }
                }
                Length::Infinite => {
                    for w in xs.windows(2) {
                        let (da, db) = (diff(&w[0]), diff(&w[1]));
                        if (da.is_positive() && db.is_negative()) || (da.is_negative() && db.is_positive()) {
                            extra.push(&w[0] + &da * (&w[1] - &w[0]) / (&da - &db));
                        }
                    }
                    let a = xs.last().expect("nonempty");
                    let da = diff(a);
                    let ds = int(self.tail_slope(e) - other.tail_slope(e));
                    if (da.is_positive() && ds.is_negative()) || (da.is_negative() && ds.is_positive()) {
                        extra.push(a - &da / &ds);
                    }
                }
            }
            c.extend(extra);
        }
        PlFunction::from_samples(
            self.curve.clone(),
            &cuts,
            |e| self.tail_slope(e).max(other.tail_slope(e)),
            |p| Ok(self.eval_finite(p)?.max(other.eval_finite(p)?)),
        )
    }

    /// Ordinary sum `f + g`, the tropical product. At a point at infinity
    /// the value is the limit along the edge.
    pub fn add(&self, other: &PlFunction) -> Result<PlFunction> {
        self.same_curve(other)?;
        if self.body.is_none() || other.body.is_none() {
            return Ok(PlFunction::neg_infinity(self.curve.clone()));
        }
        PlFunction::from_samples(
            self.curve.clone(),
            &merge_cuts(&self.cuts(), &other.cuts()),
            |e| self.tail_slope(e) + other.tail_slope(e),
            |p| Ok(self.eval_finite(p)? + other.eval_finite(p)?),
        )
    }

    /// `k · f` for an integer `k`.
    pub fn times(&self, k: i64) -> Result<PlFunction> {
        if self.body.is_none() {
            return match k.signum() {
                1 => Ok(self.clone()),
                0 => Ok(PlFunction::zero(self.curve.clone())),
                _ => Err(Error::Invalid("negative multiple of the constant -inf".into())),
            };
        }
        PlFunction::from_samples(
            self.curve.clone(),
            &self.cuts(),
            |e| k * self.tail_slope(e),
            |p| Ok(self.eval_finite(p)? * int(k)),
        )
    }

    /// `f - g`.
    pub fn sub(&self, other: &PlFunction) -> Result<PlFunction> {
        self.add(&other.times(-1)?)
    }

    /// Sum of `Σ k_i · f_i`, starting from the constant `c`.
    pub fn combination<'a>(
        curve: Arc<Curve>,
        c: &Rational,
        terms: impl IntoIterator<Item = (&'a PlFunction, i64)>,
    ) -> Result<PlFunction> {
        let mut acc = PlFunction::constant(curve, c.clone());
        for (f, k) in terms {
            acc = acc.add(&f.times(k)?)?;
        }
        Ok(acc)
    }

    /// The same function on another model of the curve: `remodel` maps the
    /// model of `self` to `target`.
    pub fn to_model(&self, remodel: &Remodel, target: Arc<Curve>) -> Result<PlFunction> {
        if self.body.is_none() {
            return Ok(PlFunction::neg_infinity(target));
        }
        let mut cuts = vec![Vec::new(); target.num_edges()];
        for p in self.breakpoints().iter().chain((0..self.curve.num_vertices()).map(Point::Vertex).collect::<Vec<_>>().iter()) {
            if let Point::Edge { edge, offset } = remodel.to_new(p) {
                cuts[edge].push(offset);
            }
        }
        let tails: Vec<i64> = (0..target.num_edges())
            .map(|ne| match remodel.pieces[ne].last() {
                Some(pc) if pc.end.is_infinite() => self.tail_slope(pc.edge),
                _ => 0,
            })
            .collect();
        PlFunction::from_samples(target, &cuts, |e| tails[e], |p| {
            self.eval_finite(&remodel.to_old_in(&self.curve, p))
        })
    }

    /// Inverse of [`PlFunction::to_model`]: `self` lives on `remodel.curve`
    /// and the result on `base`.
    pub fn from_model(&self, remodel: &Remodel, base: Arc<Curve>) -> Result<PlFunction> {
        if self.body.is_none() {
            return Ok(PlFunction::neg_infinity(base));
        }
        let mut cuts = vec![Vec::new(); base.num_edges()];
        let mut push = |p: Point| {
            if let Point::Edge { edge, offset } = p {
                cuts[edge].push(offset);
            }
        };
        for p in &remodel.vertex_points {
            push(p.clone());
        }
        for p in self.breakpoints() {
            push(remodel.to_old(&p));
        }
        let mut tails = vec![0; base.num_edges()];
        for (ne, ps) in remodel.pieces.iter().enumerate() {
            if let Some(pc) = ps.last() {
                if pc.end.is_infinite() {
                    tails[pc.edge] = self.tail_slope(ne);
                }
            }
        }
        PlFunction::from_samples(base, &cuts, |e| tails[e], |p| self.eval_finite(&remodel.to_new(p)))
    }

    /// The model with the breakpoints of `self` added as vertices, and the
    /// function on it.
    pub fn refinement(&self) -> Result<(Remodel, PlFunction)> {
        let r = Remodel::refine(&self.curve, &self.breakpoints())?;
        let target = Arc::new(r.curve.clone());
        let f = self.to_model(&r, target)?;
        Ok((r, f))
    }
}

fn merge_cuts(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut c: Vec<Rational> = x.iter().chain(y).cloned().collect();
            c.sort();
            c.dedup();
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    fn at(e: usize, t: Rational) -> Point {
        Point::Edge { edge: e, offset: t }
    }

    /// `x ↦ -min(1, x)` on the segment `[0, 3]`.
    fn clamp(c: &Arc<Curve>) -> PlFunction {
        PlFunction::from_samples(c.clone(), &[vec![int(1)]], |_| 0, |p| {
            let x = match p {
                Point::Vertex(0) => int(0),
                Point::Vertex(_) => int(3),
                Point::Edge { offset, .. } => offset.clone(),
            };
            Ok(-x.min(int(1)))
        })
        .unwrap()
    }

    #[test]
    fn clamp_on_segment() {
        let c = Arc::new(fixtures::segment(int(3)));
        let f = clamp(&c);
        assert_eq!(f.eval(&Point::Vertex(1)), Value::Finite(int(-1)));
        assert_eq!(f.eval(&at(0, rat(1, 2))), Value::Finite(rat(-1, 2)));
        assert_eq!(f.ord(&Point::Vertex(0)).unwrap(), -1);
        assert_eq!(f.ord(&at(0, int(1))).unwrap(), 1);
        assert_eq!(f.ord(&at(0, int(2))).unwrap(), 0);
        let d = f.principal_divisor().unwrap();
        assert_eq!(d, Divisor::from_terms([(Point::Vertex(0), -1), (at(0, int(1)), 1)]));
    }

    #[test]
    fn redundant_cuts_are_dropped() {
        let c = Arc::new(fixtures::segment(int(3)));
        let f = PlFunction::from_samples(c.clone(), &[vec![int(1), int(2)]], |_| 0, |p| {
            Ok(match p {
                Point::Vertex(0) => int(0),
                Point::Vertex(_) => int(3),
                Point::Edge { offset, .. } => offset.clone(),
            })
        })
        .unwrap();
        assert!(f.breakpoints().is_empty());
        let d = Divisor::from_terms([(Point::Vertex(0), 1), (Point::Vertex(1), -1)]);
        assert_eq!(f.principal_divisor().unwrap(), d);
    }

    #[test]
    fn non_integer_slope_is_rejected() {
        let c = Arc::new(fixtures::segment(int(2)));
        let r = PlFunction::from_samples(c, &[], |_| 0, |p| Ok(if *p == Point::Vertex(0) { int(0) } else { int(1) }));
        assert!(matches!(r, Err(Error::NonIntegerSlope(_))));
    }

    #[test]
    fn max_of_two_lines_breaks_at_crossing() {
        let c = Arc::new(fixtures::segment(int(1)));
        let line = |s: i64, b: i64| {
            PlFunction::from_samples(c.clone(), &[], |_| 0, move |p| {
                let x = if *p == Point::Vertex(0) { int(0) } else { int(1) };
                Ok(int(s) * x + int(b))
            })
            .unwrap()
        };
        let h = line(-1, 0).trop_add(&line(1, -1)).unwrap();
        assert_eq!(h.breakpoints(), vec![at(0, rat(1, 2))]);
        assert_eq!(h.eval(&at(0, rat(1, 2))), Value::Finite(rat(-1, 2)));
        assert_eq!(h.slope_after(0, &int(0)), -1);
        assert_eq!(h.slope_after(0, &rat(1, 2)), 1);
        assert_eq!(h.trop_add(&h).unwrap(), h);
        assert_eq!(h.trop_scale(&int(0)), h);
    }

    #[test]
    fn infinity_follows_the_tail() {
        let c = Arc::new(fixtures::ray());
        let up = PlFunction::from_samples(c.clone(), &[], |_| 1, |_| Ok(int(0))).unwrap();
        let down = up.times(-1).unwrap();
        assert_eq!(up.eval(&Point::Vertex(1)), Value::PosInf);
        assert_eq!(down.eval(&Point::Vertex(1)), Value::NegInf);
        assert_eq!(up.ord(&Point::Vertex(1)).unwrap(), -1);
        assert_eq!(up.principal_divisor().unwrap().degree(), 0);
        // +∞ and -∞ cancel to the limit value.
        let sum = up.add(&down).unwrap();
        assert_eq!(sum.eval(&Point::Vertex(1)), Value::Finite(int(0)));
        assert_eq!(up.trop_add(&down).unwrap(), up);
    }

    #[test]
    fn neg_infinity_is_neutral_for_max() {
        let c = Arc::new(fixtures::segment(int(3)));
        let f = clamp(&c);
        let bot = PlFunction::neg_infinity(c.clone());
        assert_eq!(bot.trop_add(&f).unwrap(), f);
        assert_eq!(bot.principal_divisor(), Err(Error::NoPrincipalDivisor));
    }

    #[test]
    fn remodel_round_trip() {
        let c = Arc::new(fixtures::segment(int(3)));
        let f = clamp(&c);
        let (r, g) = f.refinement().unwrap();
        assert_eq!(r.curve.num_vertices(), 3);
        assert!(g.breakpoints().is_empty());
        assert_eq!(g.from_model(&r, c.clone()).unwrap(), f);
    }
}
