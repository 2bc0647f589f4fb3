//! Exact convex polygons in the valuation plane. Every constructor routes
//! through the integer-free monotone-chain hull, so a polygon is always in
//! canonical form: counter-clockwise, starting at the lexicographically
//! smallest vertex, no three consecutive vertices collinear. Canonical form
//! makes exact polygon equality plain vertex-list equality.
//!
//! Degenerate hulls (a point, a segment) are represented by vertex lists of
//! length one or two; they arise from slices at the domain boundary and from
//! finite-level section hulls.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

pub type Point = (Rat, Rat);

/// Valuation vector (nu1, nu2) of an effective divisor along a flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValuationVector {
    pub nu1: Rat,
    pub nu2: Rat,
}

impl ValuationVector {
    pub fn point(&self) -> Point {
        (self.nu1.clone(), self.nu2.clone())
    }
}

/// cross(o, a, b) > 0 iff the turn o -> a -> b is counter-clockwise.
pub(crate) fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    let ax = &a.0 - &o.0;
    let ay = &a.1 - &o.1;
    let bx = &b.0 - &o.0;
    let by = &b.1 - &o.1;
    &(&ax * &by) - &(&ay * &bx)
}

#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl std::fmt::Debug for Polygon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Polygon[")?;
        for (i, (x, y)) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "]")
    }
}

impl Polygon {
    pub fn empty() -> Self {
        Polygon { vertices: vec![] }
    }

    /// Convex hull by Andrew's monotone chain, exact.
    pub fn hull_of<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut pts: Vec<Point> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.len() <= 2 {
            return Polygon { vertices: pts };
        }

        let mut lower: Vec<Point> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
            {
                lower.pop();
            }
            lower.push(p.clone());
        }
        let mut upper: Vec<Point> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
            {
                upper.pop();
            }
            upper.push(p.clone());
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Polygon { vertices: lower }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => &self.vertices[0] == p,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                cross(a, b, p).is_zero()
                    && p.0 >= a.0.clone().min(b.0.clone())
                    && p.0 <= a.0.clone().max(b.0.clone())
                    && p.1 >= a.1.clone().min(b.1.clone())
                    && p.1 <= a.1.clone().max(b.1.clone())
            }
            n => (0..n).all(|i| {
                let a = &self.vertices[i];
                let b = &self.vertices[(i + 1) % n];
                !cross(a, b, p).is_negative()
            }),
        }
    }

    /// Both polygons are convex, so inclusion reduces to vertex membership.
    pub fn includes(&self, other: &Polygon) -> bool {
        other.vertices.iter().all(|v| self.contains(v))
    }

    pub fn translate(&self, v: &Point) -> Polygon {
        // translation preserves order and orientation, canonical form survives
        Polygon {
            vertices: self
                .vertices
                .iter()
                .map(|(x, y)| (x + &v.0, y + &v.1))
                .collect(),
        }
    }

    /// Shoelace area; zero for degenerate polygons.
    pub fn area(&self) -> Rat {
        let n = self.vertices.len();
        if n < 3 {
            return Rat::zero();
        }
        let mut twice = Rat::zero();
        for i in 0..n {
            let (x0, y0) = &self.vertices[i];
            let (x1, y1) = &self.vertices[(i + 1) % n];
            twice += &(&(x0 * y1) - &(y0 * x1));
        }
        twice / Rat::from_int(2)
    }

    pub fn bounds(&self) -> Option<(Point, Point)> {
        if self.vertices.is_empty() {
            return None;
        }
        let mut min = self.vertices[0].clone();
        let mut max = self.vertices[0].clone();
        for (x, y) in &self.vertices {
            if *x < min.0 {
                min.0 = x.clone();
            }
            if *y < min.1 {
                min.1 = y.clone();
            }
            if *x > max.0 {
                max.0 = x.clone();
            }
            if *y > max.1 {
                max.1 = y.clone();
            }
        }
        Some((min, max))
    }

    /// { p in poly : p.x >= t }, exact. `t` must lie within the polygon's
    /// horizontal extent.
    pub fn slice_right(&self, t: &Rat) -> Result<Polygon> {
        let (min, max) = self.bounds().ok_or(Error::EmptyPolygon)?;
        if t < &min.0 || t > &max.0 {
            return Err(Error::SliceOutOfDomain {
                t: t.to_string(),
                lo: min.0.to_string(),
                hi: max.0.to_string(),
            });
        }
        let n = self.vertices.len();
        let mut points: Vec<Point> = self
            .vertices
            .iter()
            .filter(|(x, _)| x >= t)
            .cloned()
            .collect();
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            if n == 2 && i == 1 {
                break; // a segment has one edge, not two
            }
            let (ax, bx) = (&a.0, &b.0);
            if (ax < t && bx > t) || (ax > t && bx < t) {
                let ratio = &(t - ax) / &(bx - ax);
                let y = &a.1 + &(&ratio * &(&b.1 - &a.1));
                points.push((t.clone(), y));
            }
        }
        Ok(Polygon::hull_of(points))
    }

    /// Minimum of nu1 + nu2 over the polygon; attained at a vertex.
    pub fn min_sum(&self) -> Result<Rat> {
        self.vertices
            .iter()
            .map(|(x, y)| x + y)
            .min()
            .ok_or(Error::EmptyPolygon)
    }

    /// Largest lambda >= 0 with the standard simplex of size lambda inside
    /// the polygon. By convexity it is enough that (0,0), (lambda,0) and
    /// (0,lambda) all lie inside; the bound along each axis is the tightest
    /// edge constraint.
    pub fn largest_simplex(&self) -> Rat {
        let origin = (Rat::zero(), Rat::zero());
        if self.vertices.len() < 3 || !self.contains(&origin) {
            return Rat::zero();
        }
        let along_x = self.ray_extent(&(Rat::one(), Rat::zero()));
        let along_y = self.ray_extent(&(Rat::zero(), Rat::one()));
        along_x.min(along_y)
    }

    /// sup { s >= 0 : s * dir in poly }, assuming the origin is inside.
    fn ray_extent(&self, dir: &Point) -> Rat {
        let n = self.vertices.len();
        let origin = (Rat::zero(), Rat::zero());
        let mut best: Option<Rat> = None;
        for i in 0..n {
            let a = &self.vertices[i];
            let b = &self.vertices[(i + 1) % n];
            // constraint cross(a, b, s*dir) >= 0 is affine in s
            let k = {
                let ex = &b.0 - &a.0;
                let ey = &b.1 - &a.1;
                &(&ex * &dir.1) - &(&ey * &dir.0)
            };
            let f0 = cross(a, b, &origin);
            if k.is_negative() {
                let bound = &f0 / &(-&k);
                best = Some(match best {
                    Some(cur) => cur.min(bound),
                    None => bound,
                });
            }
        }
        best.expect("bounded polygon constrains every ray")
    }
}

/// The standard simplex of size lambda: hull of (0,0), (lambda,0),
/// (0,lambda).
pub fn standard_simplex(lambda: &Rat) -> Polygon {
    Polygon::hull_of([
        (Rat::zero(), Rat::zero()),
        (lambda.clone(), Rat::zero()),
        (Rat::zero(), lambda.clone()),
    ])
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Polygon, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<(Rat, Rat)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        Ok(Polygon::hull_of(raw.vertices))
    }
}
