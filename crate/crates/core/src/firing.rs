//! Chip-firing moves and the decomposition of rational functions into them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::function::PlFunction;
use crate::graph::{Curve, Point};
use crate::scalar::{int, lcm, to_i64, Length, Rational, Value};
use crate::subgraph::Subgraph;

/// The function `x ↦ -min(reach, dist(x, source))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChipFiringMove {
    pub source: Subgraph,
    pub reach: Length,
}

impl ChipFiringMove {
    pub fn new(source: Subgraph, reach: Length) -> Self {
        ChipFiringMove { source, reach }
    }

    pub fn function(&self, curve: &Arc<Curve>) -> Result<PlFunction> {
        chip_firing(curve, &self.source, &self.reach)
    }
}

/// Builds the chip-firing move `CF(source, reach)`.
pub fn chip_firing(curve: &Arc<Curve>, source: &Subgraph, reach: &Length) -> Result<PlFunction> {
    if *reach <= Length::zero() {
        return Err(Error::Invalid("chip-firing reach must be positive".into()));
    }
    source.check_source(curve)?;
    let cells = source.cells(curve, &[])?;
    let r = &cells.remodel;
    let rc = &r.curve;
    let sources: Vec<(usize, Length)> =
        (0..rc.num_vertices()).filter(|&v| cells.vertex_in[v]).map(|v| (v, Length::zero())).collect();
    let dist = rc.vertex_distances(&sources);

    let mut cuts = vec![Vec::new(); curve.num_edges()];
    let mut push = |p: Point| {
        if let Point::Edge { edge, offset } = p {
            cuts[edge].push(offset);
        }
    };
    for p in &r.vertex_points {
        push(p.clone());
    }
    for ne in 0..rc.num_edges() {
        if cells.edge_in[ne] {
            continue;
        }
        let edge = rc.edge(ne);
        let (d0, d1) = (&dist[edge.ends[0]], &dist[edge.ends[1]]);
        let mut cand = Vec::new();
        if let (Length::Finite(l), Length::Finite(a), Length::Finite(b)) = (&edge.length, d0, d1) {
            cand.push((b + l - a) / int(2));
        }
        if let Length::Finite(rch) = reach {
            if let Length::Finite(a) = d0 {
                cand.push(rch - a);
            }
            if let (Length::Finite(l), Length::Finite(b)) = (&edge.length, d1) {
                cand.push(l + b - rch);
            }
        }
        for u in cand {
            if u.is_positive() && Length::Finite(u.clone()) < edge.length {
                push(r.to_old(&Point::Edge { edge: ne, offset: u }));
            }
        }
    }

    let dist_at = |p: &Point| -> Length {
        match r.to_new(p) {
            Point::Vertex(v) => dist[v].clone(),
            Point::Edge { edge, offset } => {
                if cells.edge_in[edge] {
                    return Length::zero();
                }
                let e = rc.edge(edge);
                let via0 = &dist[e.ends[0]] + &offset;
                let via1 = match &e.length {
                    Length::Finite(l) => &dist[e.ends[1]] + &(l - &offset),
                    Length::Infinite => Length::Infinite,
                };
                via0.min(via1)
            }
        }
    };
    let mut tails = vec![0; curve.num_edges()];
    for ne in 0..rc.num_edges() {
        let pc = &r.pieces[ne][0];
        if pc.end.is_infinite() && !cells.edge_in[ne] && reach.is_infinite() {
            tails[pc.edge] = -1;
        }
    }
    PlFunction::from_samples(curve.clone(), &cuts, |e| tails[e], |p| match dist_at(p).min(reach.clone()) {
        Length::Finite(d) => Ok(-d),
        Length::Infinite => Err(Error::Invalid("unbounded chip-firing value at a finite point".into())),
    })
}

/// `f = constant + Σ coeff · CF(move)`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub constant: Rational,
    pub terms: Vec<(ChipFiringMove, i64)>,
}

impl Decomposition {
    /// Evaluates the combination back into a function.
    pub fn reconstruct(&self, curve: &Arc<Curve>) -> Result<PlFunction> {
        let fs: Vec<(PlFunction, i64)> = self
            .terms
            .iter()
            .map(|(m, k)| Ok((m.function(curve)?, *k)))
            .collect::<Result<_>>()?;
        PlFunction::combination(curve.clone(), &self.constant, fs.iter().map(|(f, k)| (f, *k)))
    }
}

/// Writes `f` as a constant plus an integer combination of chip-firing
/// moves.
pub fn decompose_chip_firing(f: &PlFunction) -> Result<Decomposition> {
    if f.is_neg_infinity() {
        return Err(Error::NoPrincipalDivisor);
    }
    let curve = f.curve().clone();
    let mut terms: Vec<(ChipFiringMove, i64)> = Vec::new();

    // Unbounded tails: make the function constant on each of them.
    let mut flat = f.clone();
    for e in 0..curve.num_edges() {
        let s = f.tail_slope(e);
        if !curve.length(e).is_infinite() || s == 0 {
            continue;
        }
        let start = f.breaks(e).last().cloned().unwrap_or_else(Rational::zero);
        let mut g = Subgraph::empty();
        for e2 in 0..curve.num_edges() {
            if e2 != e {
                g.add_edge(&curve, e2);
            }
        }
        for v in 0..curve.num_vertices() {
            if !curve.vertex(v).at_infinity {
                g.add_point(Point::Vertex(v));
            }
        }
        if start.is_positive() {
            g.add_interval(e, Rational::zero(), Length::Finite(start));
        }
        let mv = ChipFiringMove::new(g, Length::Infinite);
        flat = flat.add(&mv.function(&curve)?.times(s)?)?;
        terms.push((mv, -s));
    }

    let mut levels: Vec<Rational> = flat
        .critical_values()
        .into_iter()
        .map(|v| match v {
            Value::Finite(q) => q,
            _ => unreachable!("tails are flat"),
        })
        .collect();
    levels.sort();
    levels.dedup();
    levels.reverse();
    let constant = levels[0].clone();
    for w in levels.windows(2) {
        terms.extend(layer_moves(&flat, &w[0], &w[1])?);
    }

    // Merge identical moves.
    let mut merged: Vec<(ChipFiringMove, i64)> = Vec::new();
    for (m, k) in terms {
        match merged.iter_mut().find(|(m2, _)| *m2 == m) {
            Some(slot) => slot.1 += k,
            None => merged.push((m, k)),
        }
    }
    merged.retain(|(_, k)| *k != 0);
    Ok(Decomposition { constant, terms: merged })
}

/// Linear pieces of `f` on edge `e`: `(x_a, y_a, x_b, y_b)`; `x_b = None`
/// on an unbounded tail, where `f` is constant.
fn segments(f: &PlFunction, e: usize) -> Vec<(Rational, Rational, Option<Rational>, Rational)> {
    let curve = f.curve();
    let edge = curve.edge(e);
    let mut xs = vec![Rational::zero()];
    xs.extend(f.breaks(e).iter().cloned());
    let val = |t: &Rational| f.eval_finite(&curve.point_at(e, t).expect("on edge")).expect("finite");
    let mut out = Vec::new();
    for w in xs.windows(2) {
        out.push((w[0].clone(), val(&w[0]), Some(w[1].clone()), val(&w[1])));
    }
    let last = xs.last().expect("nonempty").clone();
    match &edge.length {
        Length::Finite(l) => out.push((last.clone(), val(&last), Some(l.clone()), val(l))),
        Length::Infinite => {
            let y = val(&last);
            out.push((last, y.clone(), None, y));
        }
    }
    out
}

/// The layer `clamp(f, lo, hi) - lo` as `hi - lo` plus chip-firing moves.
fn layer_moves(f: &PlFunction, hi: &Rational, lo: &Rational) -> Result<Vec<(ChipFiringMove, i64)>> {
    let curve = f.curve();
    let delta = hi - lo;
    let mut upper = Subgraph::empty();
    for v in 0..curve.num_vertices() {
        if !curve.vertex(v).at_infinity && f.eval_finite(&Point::Vertex(v))? >= *hi {
            upper.add_point(Point::Vertex(v));
        }
    }
    // (edge, offset where f = hi, direction toward the lower end, |slope|)
    let mut gaps: Vec<(usize, Rational, i64, i64)> = Vec::new();
    for e in 0..curve.num_edges() {
        for (xa, ya, xb, yb) in segments(f, e) {
            let Some(xb) = xb else {
                if ya >= *hi {
                    upper.add_interval(e, xa, Length::Infinite);
                }
                continue;
            };
            let at_level = |c: &Rational| &xa + (c - &ya) * (&xb - &xa) / (&yb - &ya);
            if ya >= *hi && yb >= *hi {
                upper.add_interval(e, xa.clone(), Length::Finite(xb.clone()));
            } else if ya >= *hi || yb >= *hi {
                let t = at_level(hi);
                if ya >= *hi {
                    add_piece(&mut upper, curve, e, xa.clone(), t);
                } else {
                    add_piece(&mut upper, curve, e, t, xb.clone());
                }
            }
            let (ymax, ymin) = if ya > yb { (&ya, &yb) } else { (&yb, &ya) };
            if *ymax >= *hi && *ymin <= *lo {
                let slope = to_i64(&((&yb - &ya) / (&xb - &xa))).expect("integer slope");
                let dir = if ya > yb { 1 } else { -1 };
                gaps.push((e, at_level(hi), dir, slope.abs()));
            }
        }
    }
    let m = lcm(gaps.iter().map(|g| g.3));
    let step = &delta / int(m);
    let mut counts: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for k in 0..m {
        let key: Vec<i64> = gaps.iter().map(|g| k / g.3).collect();
        *counts.entry(key).or_default() += 1;
    }
    let mut out = Vec::new();
    for (key, count) in counts {
        let mut x = upper.clone();
        for (g, &n) in gaps.iter().zip(&key) {
            if n == 0 {
                continue;
            }
            let far = &g.1 + int(g.2 * n) * &step;
            let (a, b) = if g.2 > 0 { (g.1.clone(), far) } else { (far, g.1.clone()) };
            add_piece(&mut x, curve, g.0, a, b);
        }
        out.push((ChipFiringMove::new(x, Length::Finite(step.clone())), count));
    }
    Ok(out)
}

fn add_piece(g: &mut Subgraph, curve: &Curve, e: usize, a: Rational, b: Rational) {
    if a == b {
        g.add_point(curve.point_at(e, &a).expect("on edge"));
    } else {
        g.add_interval(e, a, Length::Finite(b));
    }
}
