//! Extremality in `R(D)^K` and the minimal generating set.

use super::{GeneratorSet, LinearSystem};
use crate::error::{Error, Result};
use crate::function::PlFunction;
use crate::graph::{Point, Remodel};
use crate::subgraph::Subgraph;

/// Cell orbits beyond this make the subset search too large.
const MAX_CELL_ORBITS: usize = 20;

impl LinearSystem {
    /// Whether `f` is an extremal of `R(D)^K`: no two proper invariant
    /// subgraphs covering the curve can both fire on `D + div f`.
    ///
    /// Candidate subgraphs are unions of orbits of closed cells of the
    /// refinement at the orbits of `supp(D + div f)` and the vertices of `G1`.
    pub fn is_extremal_invariant(&self, f: &PlFunction) -> Result<bool> {
        if !self.in_rk(f)? {
            return Err(Error::NotMember("function is not in R(D)^K".into()));
        }
        let curve = self.curve();
        if curve.num_edges() == 0 {
            return Ok(true);
        }
        let e = self.effective_divisor(f)?;
        let q = self.quotient();
        let mut cuts: Vec<Point> = e.support().flat_map(|p| self.group().orbit(p)).collect();
        cuts.extend(q.remodel().vertex_points.iter().cloned());
        let refined = Remodel::refine(curve, &cuts)?;
        let orbits = self.group().transport(&refined)?.orbit_data();
        let m = orbits.num_edge_orbits;
        if m > MAX_CELL_ORBITS {
            return Err(Error::SearchLimit(format!("{m} cell orbits")));
        }
        let cell = |mask: usize| -> Subgraph {
            let mut g = Subgraph::empty();
            for (c, &o) in orbits.edge_orbit.iter().enumerate() {
                if mask >> o & 1 == 1 {
                    let pc = &refined.pieces[c][0];
                    g.add_interval(pc.edge, pc.start.clone(), pc.end.clone());
                }
            }
            g
        };
        let full = (1usize << m) - 1;
        let mut firable = vec![false; full + 1];
        for (mask, slot) in firable.iter_mut().enumerate().take(full).skip(1) {
            *slot = cell(mask).can_fire(curve, &e)?;
        }
        // covered[c]: some proper firable set contains c.
        let mut covered = firable.clone();
        for bit in 0..m {
            for mask in (0..=full).rev() {
                if mask >> bit & 1 == 0 && covered[mask | 1 << bit] {
                    covered[mask] = true;
                }
            }
        }
        Ok(!(1..full).any(|a| firable[a] && covered[full & !a]))
    }

    /// The extremals among [`LinearSystem::enumerate_sk`].
    pub fn minimal_generators(&self) -> Result<GeneratorSet> {
        let all = self.enumerate_sk()?;
        let mut functions = Vec::new();
        for f in all.functions {
            if self.is_extremal_invariant(&f)? {
                functions.push(f);
            }
        }
        Ok(GeneratorSet { functions })
    }
}
