//! Complete linear systems `R(D)`, their invariant parts `R(D)^K`, and the
//! generating sets `S(D)` and `S(D)_K`.

mod enumerate;
mod express;
mod extremal;

use std::sync::Arc;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function::PlFunction;
use crate::graph::{Curve, Point};
use crate::group::GroupAction;
use crate::morphism::{build_quotient, Quotient};
use crate::subgraph::Subgraph;

pub use express::{project, TropicalCombination};

/// A curve, a divisor `D` and a finite group `K` (trivial if not given).
#[derive(Clone, Debug)]
pub struct LinearSystem {
    curve: Arc<Curve>,
    divisor: Divisor,
    group: GroupAction,
    quotient: Quotient,
}

/// Representatives of generator classes modulo tropical scaling, each
/// normalized to vanish at the base vertex.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub functions: Vec<PlFunction>,
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Index of the class of `f`, if present.
    pub fn position(&self, f: &PlFunction) -> Option<usize> {
        let f = normalize(f);
        self.functions.iter().position(|g| *g == f)
    }
}

/// The vertex used to normalize representatives: the first finite vertex
/// in id order.
pub fn base_vertex(curve: &Curve) -> usize {
    (0..curve.num_vertices())
        .filter(|&v| !curve.vertex(v).at_infinity)
        .min_by(|&a, &b| curve.vertex(a).id.cmp(&curve.vertex(b).id))
        .expect("a curve has a finite vertex")
}

/// Shifts `f` so that it vanishes at the base vertex.
pub fn normalize(f: &PlFunction) -> PlFunction {
    if f.is_neg_infinity() {
        return f.clone();
    }
    let v = base_vertex(f.curve());
    let c = f.eval_finite(&Point::Vertex(v)).expect("finite at a finite vertex");
    f.trop_scale(&-c)
}

impl LinearSystem {
    pub fn new(curve: Arc<Curve>, divisor: Divisor, group: Option<GroupAction>) -> Result<LinearSystem> {
        divisor.check_on(&curve)?;
        let group = match group {
            Some(g) => {
                if **g.curve() != *curve {
                    return Err(Error::CurveMismatch);
                }
                g
            }
            None => GroupAction::trivial(curve.clone()),
        };
        let quotient = build_quotient(&group)?;
        Ok(LinearSystem { curve, divisor, group, quotient })
    }

    pub fn curve(&self) -> &Arc<Curve> {
        &self.curve
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn group(&self) -> &GroupAction {
        &self.group
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// The same system with divisor `D'` (same curve and group).
    pub fn with_divisor(&self, divisor: Divisor) -> Result<LinearSystem> {
        divisor.check_on(&self.curve)?;
        Ok(LinearSystem { divisor, ..self.clone() })
    }

    fn check_function(&self, f: &PlFunction) -> Result<()> {
        if **f.curve() != *self.curve {
            return Err(Error::CurveMismatch);
        }
        Ok(())
    }

    /// `D + div(f)`.
    pub fn effective_divisor(&self, f: &PlFunction) -> Result<Divisor> {
        self.check_function(f)?;
        Ok(&self.divisor + &f.principal_divisor()?)
    }

    /// `f ∈ R(D)`: `D + div(f) ≥ 0`.
    pub fn in_r(&self, f: &PlFunction) -> Result<bool> {
        Ok(self.effective_divisor(f)?.is_effective())
    }

    /// `f ∈ R(D)^K`.
    pub fn in_rk(&self, f: &PlFunction) -> Result<bool> {
        Ok(self.in_r(f)? && self.group.is_invariant_function(f)?)
    }

    /// Whether `g` can fire on `e`.
    pub fn can_fire(&self, g: &Subgraph, e: &Divisor) -> Result<bool> {
        g.can_fire(&self.curve, e)
    }

    /// `f ∈ S(D)`: the smooth points of `supp(D + div f)` do not
    /// disconnect the curve.
    pub fn in_s(&self, f: &PlFunction) -> Result<bool> {
        if !self.in_r(f)? {
            return Err(Error::NotMember("function is not in R(D)".into()));
        }
        let e = self.effective_divisor(f)?;
        let smooth: Vec<Point> = e.support().filter(|p| self.curve.is_smooth(p)).cloned().collect();
        Ok(!self.curve.is_cut_set(&smooth)?)
    }

    /// The points of `supp(D + div f)` off `V(G1)` whose whole orbit lies in
    /// the support.
    pub fn movable_points(&self, f: &PlFunction) -> Result<Vec<Point>> {
        let e = self.effective_divisor(f)?;
        let remodel = self.quotient.remodel();
        Ok(e.support()
            .filter(|p| remodel.try_vertex_of(p).is_none())
            .filter(|p| self.group.orbit(p).iter().all(|q| e.at(q) > 0))
            .cloned()
            .collect())
    }

    /// `f ∈ S(D)_K`: the image of [`LinearSystem::movable_points`] is not a
    /// cut set of the quotient.
    pub fn in_sk(&self, f: &PlFunction) -> Result<bool> {
        if !self.in_rk(f)? {
            return Err(Error::NotMember("function is not in R(D)^K".into()));
        }
        let mut img: Vec<Point> =
            self.movable_points(f)?.iter().map(|p| self.quotient.map_point(p)).collect();
        img.sort();
        img.dedup();
        Ok(!self.quotient.target().is_cut_set(&img)?)
    }

    /// `φ_*(D)` as a system on the quotient with the trivial group.
    pub fn pushed_forward(&self) -> Result<LinearSystem> {
        let d = self.quotient.push_forward_divisor(&self.divisor);
        LinearSystem::new(self.quotient.target().clone(), d, None)
    }

    /// Generators `D + div(s)` of the invariant linear subsystem `|D|^K`.
    pub fn invariant_linear_system(&self) -> Result<Vec<Divisor>> {
        if !self.group.is_invariant_divisor(&self.divisor) {
            return Err(Error::DivisorNotInvariant);
        }
        self.enumerate_sk()?.functions.iter().map(|s| self.effective_divisor(s)).collect()
    }
}
