//! Divisors: finite formal integer combinations of points.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::graph::{Curve, Point};

/// A divisor on a curve. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    chips: BTreeMap<Point, i64>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Point, i64)>) -> Self {
        let mut d = Divisor::zero();
        for (p, c) in terms {
            d.add_at(p, c);
        }
        d
    }

    pub fn point(p: Point) -> Self {
        Divisor::from_terms([(p, 1)])
    }

    pub fn add_at(&mut self, p: Point, c: i64) {
        if c == 0 {
            return;
        }
        let total = self.at(&p) + c;
        if total == 0 {
            self.chips.remove(&p);
        } else {
            self.chips.insert(p, total);
        }
    }

    /// Coefficient at `p`.
    pub fn at(&self, p: &Point) -> i64 {
        self.chips.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.chips.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.chips.values().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.chips.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, i64)> {
        self.chips.iter().map(|(p, c)| (p, *c))
    }

    /// Sum of positive coefficients.
    pub fn positive_degree(&self) -> i64 {
        self.chips.values().filter(|c| **c > 0).sum()
    }

    /// Pushes every point through `f`, summing coefficients.
    pub fn map_points(&self, mut f: impl FnMut(&Point) -> Point) -> Divisor {
        Divisor::from_terms(self.chips.iter().map(|(p, c)| (f(p), *c)))
    }

    pub fn check_on(&self, curve: &Curve) -> crate::Result<()> {
        for p in self.chips.keys() {
            curve.check_point(p)?;
        }
        Ok(())
    }

    /// Human readable form such as `2[v] - [e@1/2]`.
    pub fn display<'a>(&'a self, curve: &'a Curve) -> impl fmt::Display + 'a {
        DisplayDivisor { d: self, curve }
    }
}

struct DisplayDivisor<'a> {
    d: &'a Divisor,
    curve: &'a Curve,
}

impl fmt::Display for DisplayDivisor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_zero() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.d.iter().enumerate() {
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "[{}]", self.curve.point_label(p))?;
        }
        Ok(())
    }
}

impl Add for &Divisor {
    type Output = Divisor;
    fn add(self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, c) in rhs.iter() {
            out.add_at(p.clone(), c);
        }
        out
    }
}

impl Neg for &Divisor {
    type Output = Divisor;
    fn neg(self) -> Divisor {
        Divisor::from_terms(self.iter().map(|(p, c)| (p.clone(), -c)))
    }
}

impl Sub for &Divisor {
    type Output = Divisor;
    fn sub(self, rhs: &Divisor) -> Divisor {
        self + &(-rhs)
    }
}
