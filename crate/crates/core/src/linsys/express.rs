//! Writing members of `R(D)^K` as tropical combinations of generators.

use std::collections::BTreeMap;

use super::{base_vertex, GeneratorSet, LinearSystem};
use crate::error::{Error, Result};
use crate::firing::chip_firing;
use crate::function::PlFunction;
use crate::graph::{Point, Remodel};
use crate::scalar::{Length, Rational, Value};
use crate::subgraph::Subgraph;

const MAX_DEPTH: usize = 64;

/// `⊕_j c_j ⊙ s_j` over indices into a [`GeneratorSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCombination {
    pub terms: Vec<(usize, Rational)>,
}

impl TropicalCombination {
    pub fn evaluate(&self, gens: &GeneratorSet) -> Result<PlFunction> {
        let mut it = self.terms.iter();
        let Some((i, c)) = it.next() else {
            return Err(Error::Invalid("empty tropical combination".into()));
        };
        let mut acc = gens.functions[*i].trop_scale(c);
        for (i, c) in it {
            acc = acc.trop_add(&gens.functions[*i].trop_scale(c))?;
        }
        Ok(acc)
    }

    fn merge(mut self, other: TropicalCombination) -> TropicalCombination {
        let mut best: BTreeMap<usize, Rational> = self.terms.drain(..).collect();
        for (i, c) in other.terms {
            let slot = best.entry(i).or_insert_with(|| c.clone());
            if c > *slot {
                *slot = c;
            }
        }
        TropicalCombination { terms: best.into_iter().collect() }
    }
}

/// The largest combination below `f`, `c_j = inf(f - s_j)`; returned only
/// if it reaches `f` everywhere.
pub fn project(f: &PlFunction, gens: &GeneratorSet) -> Result<Option<TropicalCombination>> {
    let mut terms = Vec::new();
    for (j, s) in gens.functions.iter().enumerate() {
        if let Value::Finite(c) = f.sub(s)?.inf() {
            terms.push((j, c));
        }
    }
    if terms.is_empty() {
        return Ok(None);
    }
    let comb = TropicalCombination { terms };
    Ok((comb.evaluate(gens)? == *f).then_some(comb))
}

impl LinearSystem {
    /// A combination of `gens` (representatives of `S(D)_K`) equal to `f`.
    pub fn express(&self, f: &PlFunction, gens: &GeneratorSet) -> Result<TropicalCombination> {
        if !self.in_rk(f)? {
            return Err(Error::NotMember("function is not in R(D)^K".into()));
        }
        self.express_at(f, gens, 0)
    }

    fn express_at(&self, f: &PlFunction, gens: &GeneratorSet, depth: usize) -> Result<TropicalCombination> {
        if depth > MAX_DEPTH {
            return Err(Error::SearchLimit("expression recursion too deep".into()));
        }
        if self.in_sk(f)? {
            let i = gens
                .position(f)
                .ok_or_else(|| Error::Enumeration("member of S(D)_K missing from the generators".into()))?;
            let c = f.eval_finite(&Point::Vertex(base_vertex(self.curve())))?;
            return Ok(TropicalCombination { terms: vec![(i, c)] });
        }
        let (g1, g2) = self.firing_pair(f)?;
        let mut out: Option<TropicalCombination> = None;
        for g in [g1, g2] {
            let part = self.express_at(&f.add(&g)?, gens, depth + 1)?;
            out = Some(match out {
                None => part,
                Some(acc) => acc.merge(part),
            });
        }
        Ok(out.expect("two parts"))
    }

    /// `CF(Γ1, l1)` and `CF(Γ2, l2)` for an invariant cover `Γ1 ∪ Γ2` whose
    /// boundary lies over the movable points of `f`.
    fn firing_pair(&self, f: &PlFunction) -> Result<(PlFunction, PlFunction)> {
        let q = self.quotient();
        let curve = self.curve();
        let mut img: Vec<Point> = self.movable_points(f)?.iter().map(|p| q.map_point(p)).collect();
        img.sort();
        img.dedup();
        let target = q.target();
        let cut = Remodel::refine(target, &img)?;
        let mut removed = vec![false; cut.curve.num_vertices()];
        for p in &img {
            removed[cut.vertex_of(p)] = true;
        }
        let comps = cut.curve.components_without(&removed);
        let chosen = comps.edge[0];
        let component_of = |p: &Point| match cut.to_new(&q.map_point(p)) {
            Point::Vertex(v) => comps.vertex[v].expect("not a removed point"),
            Point::Edge { edge, .. } => comps.edge[edge],
        };
        let fibers: Vec<Point> = img.iter().flat_map(|y| q.fiber(y)).collect();
        let cells = Remodel::refine(curve, &fibers)?;
        let (mut s1, mut s2) = (Subgraph::empty(), Subgraph::empty());
        for c in 0..cells.curve.num_edges() {
            let sample = cells.to_old(&cells.curve.interior_sample(c));
            let pc = &cells.pieces[c][0];
            let side = if component_of(&sample) == chosen { &mut s1 } else { &mut s2 };
            side.add_interval(pc.edge, pc.start.clone(), pc.end.clone());
        }
        let g1 = chip_firing(curve, &s1, &self.reach(&s1)?)?;
        let g2 = chip_firing(curve, &s2, &self.reach(&s2)?)?;
        Ok((g1, g2))
    }

    /// Least distance from a boundary point of `g` to the nearest vertex of
    /// `G1` along its edge.
    fn reach(&self, g: &Subgraph) -> Result<Length> {
        let q = self.quotient();
        let mut best = Length::Infinite;
        for (p, _) in g.boundary(self.curve())? {
            if let Point::Edge { edge, offset } = q.remodel().to_new(&p) {
                let d = match q.g1.length(edge) {
                    Length::Finite(l) => Length::Finite(offset.clone().min(l - &offset)),
                    Length::Infinite => Length::Finite(offset),
                };
                best = best.min(d);
            }
        }
        if best.is_infinite() {
            return Err(Error::Invalid("firing subgraph has no boundary off the model vertices".into()));
        }
        Ok(best)
    }
}
