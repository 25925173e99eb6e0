//! Enumeration of `S(D)` and `S(D)_K`.
//!
//! Both run on the quotient combinatorics `H0` with fiber weights; for
//! `S(D)` the group is trivial and `H0` is the canonical loopless model.
//! A candidate is fixed by at most one chip position per chain of relevant
//! points, a distribution of the remaining degree over the other vertices
//! and integer slopes. Unknown chip positions along edges are then solved
//! exactly from the cycle conditions.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use super::{normalize, GeneratorSet, LinearSystem};
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function::PlFunction;
use crate::graph::{HalfEdge, Point, Remodel, UnionFind};
use crate::linalg::{self, Solution};
use crate::scalar::{int, Length, Rational};

const MAX_CHAINS: usize = 20;
const MAX_ATTEMPTS: usize = 5_000_000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Plain,
    Invariant,
}

impl LinearSystem {
    /// Representatives of `S(D)`, ignoring the group.
    pub fn enumerate_s(&self) -> Result<GeneratorSet> {
        if self.group().is_trivial() {
            return run(self, Mode::Plain);
        }
        let plain = LinearSystem::new(self.curve().clone(), self.divisor().clone(), None)?;
        run(&plain, Mode::Plain)
    }

    /// Representatives of `S(D)_K`.
    pub fn enumerate_sk(&self) -> Result<GeneratorSet> {
        run(self, Mode::Invariant)
    }
}

/// `H0` refined at the image of `supp D`, with per-vertex data.
struct Frame<'a> {
    sys: &'a LinearSystem,
    mode: Mode,
    refined: Remodel,
    /// Fiber size of each vertex.
    weight: Vec<i64>,
    /// Per vertex, aligned with its half-edges: how many half-edges of a
    /// fiber point run along it.
    mult: Vec<Vec<i64>>,
    relevant: Vec<bool>,
    /// Minimum of `D` over the fiber.
    dmin: Vec<i64>,
    edge_weight: Vec<i64>,
    budget: i64,
    bound: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Vertex(usize),
    Edge(usize),
}

struct Chain {
    options: Vec<Slot>,
}

impl<'a> Frame<'a> {
    fn new(sys: &'a LinearSystem, mode: Mode) -> Result<Frame<'a>> {
        let q = sys.quotient();
        let h0 = q.h0();
        let od = &q.invariant.orbits;
        let d = sys.divisor();
        let mut dmin_at: BTreeMap<Point, i64> = BTreeMap::new();
        for p in d.support() {
            let y = q.psi.map_point(&q.remodel().to_new(p));
            if dmin_at.contains_key(&y) {
                continue;
            }
            let m = q
                .psi
                .fiber(&y)
                .iter()
                .map(|(x, _)| d.at(&q.remodel().to_old_in(&q.working, x)))
                .min()
                .unwrap_or(0);
            dmin_at.insert(y, m);
        }
        let cuts: Vec<Point> = dmin_at.keys().filter(|p| matches!(p, Point::Edge { .. })).cloned().collect();
        let refined = Remodel::refine(h0, &cuts)?;
        let r = &refined.curve;

        let mut orbit_size = vec![0i64; od.num_vertex_orbits];
        let mut rep = vec![usize::MAX; od.num_vertex_orbits];
        for (v, &o) in od.vertex_orbit.iter().enumerate() {
            orbit_size[o] += 1;
            rep[o] = rep[o].min(v);
        }
        let edge_weight: Vec<i64> =
            (0..r.num_edges()).map(|e| q.psi.edges_over(refined.pieces[e][0].edge).len() as i64).collect();

        let n = r.num_vertices();
        let (mut weight, mut mult, mut relevant, mut dmin) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for v in 0..n {
            let hp = refined.vertex_points[v].clone();
            dmin.push(dmin_at.get(&hp).copied().unwrap_or(0));
            match hp {
                Point::Vertex(w) => {
                    weight.push(orbit_size[w]);
                    relevant.push(mode == Mode::Plain && h0.valence(&hp) == 2);
                    let x = rep[w];
                    let ms = r
                        .half_edges(v)
                        .iter()
                        .map(|h| {
                            let target = h0_half_edge(&refined, *h);
                            q.g1.half_edges(x)
                                .iter()
                                .filter(|g| q.psi.image_half_edge(**g).map(|(t, _)| t) == Some(target))
                                .count() as i64
                        })
                        .collect();
                    mult.push(ms);
                }
                Point::Edge { edge, .. } => {
                    weight.push(q.psi.edges_over(edge).len() as i64);
                    relevant.push(true);
                    mult.push(vec![1; r.half_edges(v).len()]);
                }
            }
        }
        let budget = (0..n).map(|v| weight[v] * dmin[v]).sum();
        let bound = d.positive_degree();
        Ok(Frame { sys, mode, refined, weight, mult, relevant, dmin, edge_weight, budget, bound })
    }

    fn curve(&self) -> &crate::graph::Curve {
        &self.refined.curve
    }

    /// Maximal runs of edges joined through relevant vertices.
    fn chains(&self) -> Vec<Chain> {
        let r = self.curve();
        let mut uf = UnionFind::new(r.num_edges());
        for v in (0..r.num_vertices()).filter(|&v| self.relevant[v]) {
            let hs = r.half_edges(v);
            for h in &hs[1..] {
                uf.union(hs[0].edge, h.edge);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<Slot>> = BTreeMap::new();
        for e in 0..r.num_edges() {
            by_root.entry(uf.find(e)).or_default().push(Slot::Edge(e));
        }
        for v in (0..r.num_vertices()).filter(|&v| self.relevant[v]) {
            let root = uf.find(r.half_edges(v)[0].edge);
            by_root.get_mut(&root).expect("chain of an edge").push(Slot::Vertex(v));
        }
        by_root.into_values().map(|options| Chain { options }).collect()
    }

    /// True if removing the slot points disconnects the curve.
    fn disconnects(&self, slots: &[Slot]) -> bool {
        let r = self.curve();
        let (n, m) = (r.num_vertices(), r.num_edges());
        let mut removed = vec![false; n];
        let mut split = vec![false; m];
        for s in slots {
            match *s {
                Slot::Vertex(v) => removed[v] = true,
                Slot::Edge(e) => split[e] = true,
            }
        }
        // Nodes: vertices, edges (or their first halves), second halves.
        let mut uf = UnionFind::new(n + 2 * m);
        for (e, edge) in r.edges().iter().enumerate() {
            let far = if split[e] { n + m + e } else { n + e };
            if !removed[edge.ends[0]] {
                uf.union(n + e, edge.ends[0]);
            }
            if !removed[edge.ends[1]] {
                uf.union(far, edge.ends[1]);
            }
        }
        let mut roots: Vec<usize> = (0..n)
            .filter(|&v| !removed[v])
            .chain(n..n + m)
            .chain((0..m).filter(|&e| split[e]).map(|e| n + m + e))
            .map(|x| uf.find(x))
            .collect();
        roots.sort();
        roots.dedup();
        roots.len() > 1
    }
}

/// The `H0` half-edge a refined half-edge starts along.
fn h0_half_edge(refined: &Remodel, h: HalfEdge) -> HalfEdge {
    let pieces = &refined.pieces[h.edge];
    let pc = if h.end == 0 { &pieces[0] } else { pieces.last().expect("nonempty") };
    let end = if h.end == 0 { usize::from(!pc.forward) } else { usize::from(pc.forward) };
    HalfEdge { edge: pc.edge, end }
}

fn run(sys: &LinearSystem, mode: Mode) -> Result<GeneratorSet> {
    if sys.divisor().degree() < 0 {
        return Err(Error::EmptyLinearSystem);
    }
    let frame = Frame::new(sys, mode)?;
    if frame.budget < 0 {
        return Err(Error::EmptyLinearSystem);
    }
    let chains = frame.chains();
    if chains.len() > MAX_CHAINS {
        return Err(Error::SearchLimit(format!("{} chains", chains.len())));
    }
    let mut search = Search { frame: &frame, attempts: 0, found: Vec::new() };
    for mask in 0u32..(1 << chains.len()) {
        let chosen: Vec<&Chain> = (0..chains.len()).filter(|i| mask >> i & 1 == 1).map(|i| &chains[i]).collect();
        let mut pick = vec![0usize; chosen.len()];
        loop {
            let slots: Vec<Slot> = chosen.iter().zip(&pick).map(|(c, &k)| c.options[k]).collect();
            if !frame.disconnects(&slots) {
                search.distribute(&slots)?;
            }
            if !advance(&mut pick, |i| chosen[i].options.len()) {
                break;
            }
        }
    }
    let mut found = search.found;
    if found.is_empty() {
        return Err(Error::EmptyLinearSystem);
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(GeneratorSet { functions: found.into_iter().map(|(_, f)| f).collect() })
}

/// Odometer step; false once every digit has wrapped.
fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for (i, d) in digits.iter_mut().enumerate() {
        *d += 1;
        if *d < radix(i) {
            return true;
        }
        *d = 0;
    }
    false
}

struct Search<'f, 'a> {
    frame: &'f Frame<'a>,
    attempts: usize,
    found: Vec<(Divisor, PlFunction)>,
}

/// Where chips may sit: a slot (at least one chip) or a non-relevant
/// vertex.
#[derive(Clone, Copy)]
struct Site {
    slot: Option<usize>,
    vertex: Option<usize>,
    weight: i64,
    min: i64,
}

impl Search<'_, '_> {
    fn distribute(&mut self, slots: &[Slot]) -> Result<()> {
        let fr = self.frame;
        let mut sites = Vec::new();
        for (k, s) in slots.iter().enumerate() {
            let weight = match *s {
                Slot::Vertex(v) => fr.weight[v],
                Slot::Edge(e) => fr.edge_weight[e],
            };
            sites.push(Site { slot: Some(k), vertex: None, weight, min: 1 });
        }
        for v in (0..fr.curve().num_vertices()).filter(|&v| !fr.relevant[v]) {
            sites.push(Site { slot: None, vertex: Some(v), weight: fr.weight[v], min: 0 });
        }
        let mut chips = vec![0i64; sites.len()];
        self.fill(slots, &sites, &mut chips, 0, fr.budget)
    }

    fn fill(&mut self, slots: &[Slot], sites: &[Site], chips: &mut [i64], i: usize, left: i64) -> Result<()> {
        if i == sites.len() {
            return if left == 0 { self.solve(slots, sites, chips) } else { Ok(()) };
        }
        let s = sites[i];
        let mut c = s.min;
        while c * s.weight <= left {
            chips[i] = c;
            self.fill(slots, sites, chips, i + 1, left - c * s.weight)?;
            c += 1;
        }
        Ok(())
    }

    fn solve(&mut self, slots: &[Slot], sites: &[Site], chips: &[i64]) -> Result<()> {
        let fr = self.frame;
        let n = fr.curve().num_vertices();
        let mut at_vertex = vec![0i64; n];
        let mut at_slot = vec![0i64; slots.len()];
        for (s, &c) in sites.iter().zip(chips) {
            if let Some(v) = s.vertex {
                at_vertex[v] = c;
            }
            if let Some(k) = s.slot {
                match slots[k] {
                    Slot::Vertex(v) => at_vertex[v] = c,
                    Slot::Edge(_) => at_slot[k] = c,
                }
            }
        }
        let edge_slots: Vec<(usize, i64)> = slots
            .iter()
            .zip(&at_slot)
            .filter_map(|(s, &c)| if let Slot::Edge(e) = *s { Some((e, c)) } else { None })
            .collect();
        let layout = Layout::new(fr, &at_vertex, &edge_slots);
        for sol in layout.solutions(fr.bound, &mut self.attempts)? {
            let h = layout.function(fr, &sol)?;
            self.accept(h)?;
        }
        Ok(())
    }

    fn accept(&mut self, h: PlFunction) -> Result<()> {
        let fr = self.frame;
        let q = fr.sys.quotient();
        let f = q.from_g1(&q.psi.pull_back_function(&h)?)?;
        let ok = match fr.mode {
            Mode::Plain => fr.sys.in_r(&f)? && fr.sys.in_s(&f)?,
            Mode::Invariant => fr.sys.in_rk(&f)? && fr.sys.in_sk(&f)?,
        };
        if ok {
            let f = normalize(&f);
            if !self.found.iter().any(|(_, g)| *g == f) {
                self.found.push((fr.sys.effective_divisor(&f)?, f));
            }
        }
        Ok(())
    }
}

/// `c + a · t` in the unknown chip positions `t`.
#[derive(Clone, Debug)]
struct Affine {
    c: Rational,
    a: Vec<Rational>,
}

impl Affine {
    fn constant(c: Rational, n: usize) -> Affine {
        Affine { c, a: vec![Rational::zero(); n] }
    }

    fn unknown(k: usize, n: usize) -> Affine {
        let mut a = Affine::constant(Rational::zero(), n);
        a.a[k] = int(1);
        a
    }

    /// `self + s · other`.
    fn plus(&self, other: &Affine, s: i64) -> Affine {
        let s = int(s);
        Affine {
            c: &self.c + &other.c * &s,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y * &s).collect(),
        }
    }

    fn at(&self, t: &[Rational]) -> Rational {
        self.a.iter().zip(t).fold(self.c.clone(), |acc, (x, y)| acc + x * y)
    }
}

/// The refined curve with edge slots split at unknown positions.
struct Layout {
    ends: Vec<[usize; 2]>,
    /// `None` for infinite edges.
    len: Vec<Option<Affine>>,
    /// Per vertex: `(edge, end, multiplicity)`.
    inc: Vec<Vec<(usize, usize, i64)>>,
    tau: Vec<i64>,
    finite: Vec<bool>,
    /// Per unknown: the refined edge, the layout vertex and the far half.
    cuts: Vec<(usize, usize, usize)>,
    upper: Vec<Length>,
    /// Layout edge reaching infinity along each infinite refined edge.
    tail: BTreeMap<usize, usize>,
}

impl Layout {
    fn new(fr: &Frame, at_vertex: &[i64], edge_slots: &[(usize, i64)]) -> Layout {
        let r = fr.curve();
        let n = edge_slots.len();
        let nv = r.num_vertices();
        let mut ends: Vec<[usize; 2]> = r.edges().iter().map(|e| e.ends).collect();
        let mut len: Vec<Option<Affine>> =
            r.edges().iter().map(|e| e.length.finite().map(|l| Affine::constant(l.clone(), n))).collect();
        let mut inc: Vec<Vec<(usize, usize, i64)>> = (0..nv)
            .map(|v| r.half_edges(v).iter().zip(&fr.mult[v]).map(|(h, &m)| (h.edge, h.end, m)).collect())
            .collect();
        let mut tau: Vec<i64> = (0..nv).map(|v| at_vertex[v] - fr.dmin[v]).collect();
        let mut finite: Vec<bool> = (0..nv).map(|v| !r.vertex(v).at_infinity).collect();
        let mut tail: BTreeMap<usize, usize> =
            (0..r.num_edges()).filter(|&e| r.length(e).is_infinite()).map(|e| (e, e)).collect();
        let mut cuts = Vec::new();
        let mut upper = Vec::new();
        for (k, &(e, c)) in edge_slots.iter().enumerate() {
            let s = nv + k;
            let e2 = ends.len();
            let [a, b] = ends[e];
            ends[e] = [a, s];
            ends.push([s, b]);
            len[e] = Some(Affine::unknown(k, n));
            len.push(r.length(e).finite().map(|l| Affine::constant(l.clone(), n).plus(&Affine::unknown(k, n), -1)));
            for x in inc[b].iter_mut().filter(|x| x.0 == e && x.1 == 1) {
                x.0 = e2;
            }
            inc.push(vec![(e, 1, 1), (e2, 0, 1)]);
            tau.push(c);
            finite.push(true);
            if let Some(t) = tail.get_mut(&e) {
                *t = e2;
            }
            cuts.push((e, s, e2));
            upper.push(r.length(e).clone());
        }
        Layout { ends, len, inc, tau, finite, cuts, upper, tail }
    }

    fn unknowns(&self) -> usize {
        self.cuts.len()
    }

    /// All consistent slope assignments with their chip positions and
    /// vertex values.
    fn solutions(&self, bound: i64, attempts: &mut usize) -> Result<Vec<Solved>> {
        let nv = self.tau.len();
        let root = (0..nv).find(|&v| self.finite[v]).expect("a finite vertex");
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        let mut tree = vec![false; self.ends.len()];
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &(e, end, _) in &self.inc[v] {
                let w = self.ends[e][1 - end];
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((e, 1 - end));
                    tree[e] = true;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        let free: Vec<usize> = (0..self.ends.len()).filter(|&e| !tree[e]).collect();
        let radix = (2 * bound + 1) as usize;
        let mut digits = vec![0usize; free.len()];
        let mut out = Vec::new();
        loop {
            *attempts += 1;
            if *attempts > MAX_ATTEMPTS {
                return Err(Error::SearchLimit("too many slope assignments".into()));
            }
            let mut slope = vec![0i64; self.ends.len()];
            for (&e, &d) in free.iter().zip(&digits) {
                slope[e] = d as i64 - bound;
            }
            if self.peel(&order, &parent, &mut slope, bound) {
                if let Some(s) = self.place(&order, &parent, &free, slope)? {
                    out.push(s);
                }
            }
            if !advance(&mut digits, |_| radix) {
                break;
            }
        }
        Ok(out)
    }

    fn outgoing(slope: &[i64], e: usize, end: usize) -> i64 {
        if end == 0 {
            slope[e]
        } else {
            -slope[e]
        }
    }

    /// Fills in tree slopes from the leaves; false if some vertex cannot
    /// be balanced.
    fn peel(&self, order: &[usize], parent: &[Option<(usize, usize)>], slope: &mut [i64], bound: i64) -> bool {
        for &v in order[1..].iter().rev() {
            let (pe, pend) = parent[v].expect("non-root has a parent");
            let mut rest = self.tau[v];
            let mut mp = 0;
            for &(e, end, m) in &self.inc[v] {
                if e == pe {
                    mp = m;
                } else {
                    rest -= m * Layout::outgoing(slope, e, end);
                }
            }
            if mp == 0 || rest % mp != 0 || (rest / mp).abs() > bound {
                return false;
            }
            slope[pe] = if pend == 0 { rest / mp } else { -rest / mp };
        }
        let root = order[0];
        let total: i64 = self.inc[root].iter().map(|&(e, end, m)| m * Layout::outgoing(slope, e, end)).sum();
        total == self.tau[root]
    }

    /// Solves the cycle conditions for the unknown positions.
    fn place(
        &self,
        order: &[usize],
        parent: &[Option<(usize, usize)>],
        free: &[usize],
        slope: Vec<i64>,
    ) -> Result<Option<Solved>> {
        let n = self.unknowns();
        let mut pot: Vec<Option<Affine>> = vec![None; self.tau.len()];
        pot[order[0]] = Some(Affine::constant(Rational::zero(), n));
        for &v in &order[1..] {
            let (pe, pend) = parent[v].expect("non-root has a parent");
            let p = self.ends[pe][1 - pend];
            pot[v] = match (&pot[p], &self.len[pe]) {
                (Some(base), Some(l)) => Some(base.plus(l, Layout::outgoing(&slope, pe, 1 - pend))),
                _ => None,
            };
        }
        let mut rows = Vec::new();
        for &e in free {
            let [a, b] = self.ends[e];
            let (Some(pa), Some(pb), Some(l)) = (&pot[a], &pot[b], &self.len[e]) else {
                unreachable!("cycle edges are finite")
            };
            let diff = pa.plus(l, slope[e]).plus(pb, -1);
            rows.push((diff.a, -diff.c));
        }
        let t = match linalg::solve(&rows, n) {
            Solution::None => return Ok(None),
            Solution::Unique(t) => t,
            Solution::Family { particular, basis } => {
                let mut ineqs = Vec::new();
                for i in 0..n {
                    let col: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
                    ineqs.push((col.iter().map(|x| -x).collect(), particular[i].clone()));
                    if let Length::Finite(u) = &self.upper[i] {
                        ineqs.push((col, u - &particular[i]));
                    }
                }
                if linalg::strictly_feasible(ineqs, basis.len()) {
                    return Err(Error::Enumeration("a continuous family of generators".into()));
                }
                return Ok(None);
            }
        };
        let inside = t.iter().zip(&self.upper).all(|(x, u)| x.is_positive() && Length::Finite(x.clone()) < *u);
        if !inside {
            return Ok(None);
        }
        let values = pot.iter().map(|p| p.as_ref().map(|a| a.at(&t))).collect();
        Ok(Some(Solved { t, values, slope }))
    }

    /// The function on `H0` described by a solution.
    fn function(&self, fr: &Frame, s: &Solved) -> Result<PlFunction> {
        let r = fr.curve();
        let mut cuts = vec![Vec::new(); r.num_edges()];
        let mut at_cut = BTreeMap::new();
        for (k, &(e, v, _)) in self.cuts.iter().enumerate() {
            cuts[e].push(s.t[k].clone());
            at_cut.insert(e, v);
        }
        let on_refined = PlFunction::from_samples(
            std::sync::Arc::new(r.clone()),
            &cuts,
            |e| s.slope[self.tail[&e]],
            |p| {
                let v = match p {
                    Point::Vertex(v) => *v,
                    Point::Edge { edge, .. } => at_cut[edge],
                };
                Ok(s.values[v].clone().expect("finite vertex"))
            },
        )?;
        on_refined.from_model(&fr.refined, fr.sys.quotient().h0().clone())
    }
}

struct Solved {
    t: Vec<Rational>,
    values: Vec<Option<Rational>>,
    slope: Vec<i64>,
}
