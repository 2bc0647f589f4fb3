//! Independent toric oracle. On models carrying a compatible complete smooth
//! fan (the plane and the Hirzebruch surfaces here), global sections of an
//! integral divisor are monomials indexed by the lattice points of its
//! section polytope. For a torus-invariant flag the valuation of a monomial
//! section is a unimodular affine image of its lattice point, so the convex
//! hull of those images, scaled by the level, is a finite inner
//! approximation of the Okounkov polygon that was computed by an entirely
//! different route.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DivisorClass, Flag, SurfaceModel};
use crate::okounkov::okounkov_polygon;
use crate::polygon::Polygon;
use crate::rat::Rat;
use crate::{linalg, models};

/// A complete smooth fan aligned with a surface model: rays in
/// counter-clockwise order, the class of each invariant divisor, optional
/// catalog identifications, and the invariant (host ray, adjacent ray) pair
/// realizing each supported flag.
#[derive(Clone, Debug)]
pub struct ToricModel {
    pub rays: Vec<(i64, i64)>,
    pub ray_classes: Vec<DivisorClass>,
    pub ray_curve_ids: Vec<Option<String>>,
    pub flag_rays: BTreeMap<String, (usize, usize)>,
}

/// Lattice points of one level, mapped into the valuation plane, with their
/// hull scaled back by the level. `hull` is `None` when the level has no
/// sections at all.
#[derive(Clone, Debug, Serialize)]
pub struct SectionHull {
    pub level: u32,
    pub points: Vec<(i64, i64)>,
    pub hull: Option<Polygon>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    pub contained: bool,
    pub area_gap: Rat,
    pub point_count: usize,
    pub empty: bool,
}

fn dot(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.0 + u.1 * v.1
}

fn cross_i(u: (i64, i64), v: (i64, i64)) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl ToricModel {
    /// Compatibility certificate against the surface model: the fan must be
    /// complete, smooth and counter-clockwise; the intersection numbers it
    /// dictates must reproduce the Gram pairings of the declared classes;
    /// the classes must satisfy the two linear equivalences of the lattice;
    /// and every flag mapping must be consistent with the flag's local data.
    pub fn validate_against(&self, model: &SurfaceModel) -> Result<()> {
        let n = self.rays.len();
        if n < 3 || self.ray_classes.len() != n || self.ray_curve_ids.len() != n {
            return Err(Error::Validation("fan needs one class per ray".into()));
        }
        for &(x, y) in &self.rays {
            if gcd(x, y) != 1 {
                return Err(Error::Validation(format!("ray ({x},{y}) is not primitive")));
            }
        }
        for i in 0..n {
            let det = cross_i(self.rays[i], self.rays[(i + 1) % n]);
            if det != 1 {
                return Err(Error::Validation(format!(
                    "rays {i} and {} are not a positively oriented lattice basis",
                    (i + 1) % n
                )));
            }
        }
        // linear equivalences: sum <u, v_rho> [D_rho] = 0 for u = e1, e2
        for axis in 0..2 {
            let mut total = DivisorClass::zero(model.rank);
            for (k, ray) in self.rays.iter().enumerate() {
                let coeff = if axis == 0 { ray.0 } else { ray.1 };
                total = &total + &self.ray_classes[k].scale(&Rat::from_int(coeff));
            }
            if !total.is_zero() {
                return Err(Error::Validation(
                    "ray classes violate the lattice linear equivalences".into(),
                ));
            }
        }
        // fan combinatorics vs Gram pairings
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j {
                    let prev = self.rays[(i + n - 1) % n];
                    let next = self.rays[(i + 1) % n];
                    // v_prev + v_next = b * v_i with b = -D_i^2
                    let v = self.rays[i];
                    let b = if v.0 != 0 {
                        (prev.0 + next.0) / v.0
                    } else {
                        (prev.1 + next.1) / v.1
                    };
                    if (v.0 * b, v.1 * b) != (prev.0 + next.0, prev.1 + next.1) {
                        return Err(Error::Validation(format!(
                            "fan relation fails at ray {i}"
                        )));
                    }
                    Rat::from_int(-b)
                } else if (i + 1) % n == j || (j + 1) % n == i {
                    Rat::one()
                } else {
                    Rat::zero()
                };
                let actual = model.intersect(&self.ray_classes[i], &self.ray_classes[j])?;
                if actual != expected {
                    return Err(Error::Validation(format!(
                        "fan intersection D_{i}.D_{j} = {expected} but Gram gives {actual}"
                    )));
                }
            }
        }
        for (k, id) in self.ray_curve_ids.iter().enumerate() {
            if let Some(id) = id {
                let curve = model.curve(id)?;
                if curve.class != self.ray_classes[k] {
                    return Err(Error::Validation(format!(
                        "catalog curve `{id}` does not have the class of ray {k}"
                    )));
                }
            }
        }
        for (flag_id, &(host, adj)) in &self.flag_rays {
            let flag = model.flag(flag_id)?;
            if host >= n || adj >= n {
                return Err(Error::Validation(format!("flag `{flag_id}` maps outside the fan")));
            }
            if (host + 1) % n != adj && (adj + 1) % n != host {
                return Err(Error::FlagNotToric(flag_id.clone()));
            }
            if self.ray_curve_ids[host].as_deref() != Some(flag.curve.as_str()) {
                return Err(Error::FlagNotToric(flag_id.clone()));
            }
            let incident: Vec<(&String, &u64)> =
                flag.local_mults.iter().filter(|(_, &m)| m > 0).collect();
            match incident.as_slice() {
                [] => {
                    // a very general point is modeled by the fixed point on
                    // the adjacent divisor, legitimate only when that class
                    // can never enter a negative part
                    let sq = model
                        .intersect(&self.ray_classes[adj], &self.ray_classes[adj])?;
                    if sq.is_negative() {
                        return Err(Error::FlagNotToric(flag_id.clone()));
                    }
                }
                [(gamma, &mult)] => {
                    if mult != 1 || self.ray_curve_ids[adj].as_deref() != Some(gamma.as_str()) {
                        return Err(Error::FlagNotToric(flag_id.clone()));
                    }
                }
                _ => return Err(Error::FlagNotToric(flag_id.clone())),
            }
        }
        Ok(())
    }

    /// Writes the class as an integral combination of invariant divisors by
    /// searching small ray subsets. Any representative works: changing it by
    /// a principal divisor translates the section polytope by a lattice
    /// vector, which the valuation map absorbs.
    fn invariant_coefficients(&self, model: &SurfaceModel, d: &DivisorClass) -> Result<Vec<Rat>> {
        let n = self.rays.len();
        let rank = model.rank;
        let indices: Vec<usize> = (0..n).collect();
        for mask in 0u32..(1 << n) {
            if (mask.count_ones() as usize) != rank {
                continue;
            }
            let chosen: Vec<usize> = indices
                .iter()
                .copied()
                .filter(|&k| mask & (1 << k) != 0)
                .collect();
            let mat: Vec<Vec<Rat>> = (0..rank)
                .map(|row| chosen.iter().map(|&k| self.ray_classes[k].0[row].clone()).collect())
                .collect();
            let rhs = vec![d.0.clone()];
            if let Some(sol) = linalg::solve(&mat, &rhs) {
                let mut coeffs = vec![Rat::zero(); n];
                for (pos, &k) in chosen.iter().enumerate() {
                    coeffs[k] = sol[0][pos].clone();
                }
                return Ok(coeffs);
            }
        }
        Err(Error::Validation(format!(
            "no torus-invariant representation found for {d}"
        )))
    }

    /// Lattice points u with <u, v_rho> >= -m a_rho, where mD = sum a_rho
    /// D_rho. Requires mD integral.
    pub fn section_polytope(
        &self,
        model: &SurfaceModel,
        d: &DivisorClass,
        m: u32,
    ) -> Result<Vec<(i64, i64)>> {
        let coeffs = self.invariant_coefficients(model, d)?;
        let m_rat = Rat::from_int(m as i64);
        let mut bounds: Vec<i64> = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            let scaled = c * &m_rat;
            if !scaled.is_integer() {
                return Err(Error::Validation(format!(
                    "mD is not integral at level m = {m}"
                )));
            }
            bounds.push(scaled.numer().to_i64().ok_or_else(|| {
                Error::Validation("section polytope coefficients overflow".into())
            })?);
        }

        // vertices of the (possibly empty) polytope as pairwise constraint
        // intersections that satisfy everything
        let n = self.rays.len();
        let feasible = |x: &Rat, y: &Rat| {
            (0..n).all(|k| {
                let v = self.rays[k];
                let lhs = &(x * &Rat::from_int(v.0)) + &(y * &Rat::from_int(v.1));
                lhs >= Rat::from_int(-bounds[k])
            })
        };
        let mut corners: Vec<(Rat, Rat)> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let det = cross_i(self.rays[i], self.rays[j]);
                if det == 0 {
                    continue;
                }
                // solve <u, v_i> = -b_i, <u, v_j> = -b_j
                let (bi, bj) = (-bounds[i], -bounds[j]);
                let x = Rat::new(bi * self.rays[j].1 - bj * self.rays[i].1, det);
                let y = Rat::new(bj * self.rays[i].0 - bi * self.rays[j].0, det);
                if feasible(&x, &y) {
                    corners.push((x, y));
                }
            }
        }
        if corners.is_empty() {
            return Ok(vec![]);
        }
        let floor = |r: &Rat| -> i64 {
            let q = r.numer() / r.denom();
            let rem = r.numer() % r.denom();
            (if rem.sign() == num_bigint::Sign::Minus {
                q - 1
            } else {
                q
            })
            .to_i64()
            .expect("small lattice range")
        };
        let (mut x_min, mut x_max) = (floor(&corners[0].0), floor(&corners[0].0) + 1);
        let (mut y_min, mut y_max) = (floor(&corners[0].1), floor(&corners[0].1) + 1);
        for (x, y) in &corners {
            x_min = x_min.min(floor(x));
            x_max = x_max.max(floor(x) + 1);
            y_min = y_min.min(floor(y));
            y_max = y_max.max(floor(y) + 1);
        }
        let mut points = Vec::new();
        for x in x_min..=x_max {
            for y in y_min..=y_max {
                if (0..n).all(|k| dot((x, y), self.rays[k]) >= -bounds[k]) {
                    points.push((x, y));
                }
            }
        }
        Ok(points)
    }

    /// Maps the level-m lattice points through the flag's valuation and
    /// hulls them, scaling by 1/m.
    pub fn valuation_hull(
        &self,
        model: &SurfaceModel,
        d: &DivisorClass,
        flag: &Flag,
        m: u32,
    ) -> Result<SectionHull> {
        let &(host, adj) = self
            .flag_rays
            .get(&flag.id)
            .ok_or_else(|| Error::FlagNotToric(flag.id.clone()))?;
        let coeffs = self.invariant_coefficients(model, d)?;
        let m_rat = Rat::from_int(m as i64);
        let a_host = (&coeffs[host] * &m_rat)
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Validation("coefficient overflow".into()))?;
        let a_adj = (&coeffs[adj] * &m_rat)
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Validation("coefficient overflow".into()))?;

        let lattice = self.section_polytope(model, d, m)?;
        let mapped: Vec<(i64, i64)> = lattice
            .iter()
            .map(|&u| {
                (
                    dot(u, self.rays[host]) + a_host,
                    dot(u, self.rays[adj]) + a_adj,
                )
            })
            .collect();
        debug_assert!(mapped.iter().all(|&(a, b)| a >= 0 && b >= 0));

        let hull = if mapped.is_empty() {
            None
        } else {
            let inv_m = Rat::new(1, m as i64);
            let scaled = Polygon::hull_of(
                mapped
                    .iter()
                    .map(|&(a, b)| (Rat::from_int(a), Rat::from_int(b))),
            );
            Some(Polygon::hull_of(
                scaled
                    .vertices()
                    .iter()
                    .map(|(x, y)| (x * &inv_m, y * &inv_m)),
            ))
        };
        Ok(SectionHull {
            level: m,
            points: mapped,
            hull,
        })
    }

    /// hull_m against the chamber-walk polygon: containment is exact, the
    /// area gap measures how much of the polygon level m already sees.
    pub fn oracle_compare(
        &self,
        model: &SurfaceModel,
        d: &DivisorClass,
        flag: &Flag,
        m: u32,
    ) -> Result<OracleComparison> {
        let delta = okounkov_polygon(model, d, flag)?;
        let hull = self.valuation_hull(model, d, flag, m)?;
        let (contained, gap, count, empty) = match &hull.hull {
            Some(h) => (
                delta.includes(h),
                &delta.area() - &h.area(),
                hull.points.len(),
                false,
            ),
            None => (true, delta.area(), 0, true),
        };
        Ok(OracleComparison {
            contained,
            area_gap: gap,
            point_count: count,
            empty,
        })
    }
}

/// Fan for the bundled plane model.
pub fn p2_toric() -> ToricModel {
    ToricModel {
        rays: vec![(1, 0), (0, 1), (-1, -1)],
        ray_classes: vec![
            DivisorClass::from_ints(&[1]),
            DivisorClass::from_ints(&[1]),
            DivisorClass::from_ints(&[1]),
        ],
        ray_curve_ids: vec![Some("line".into()), None, None],
        flag_rays: [("linear".to_string(), (0usize, 1usize))].into(),
    }
}

/// Fan for the bundled blown-up plane model: the exceptional ray sits
/// between the two lines through the blown-up point.
pub fn f1_toric() -> ToricModel {
    ToricModel {
        rays: vec![(1, 0), (1, 1), (0, 1), (-1, -1)],
        ray_classes: vec![
            DivisorClass::from_ints(&[1, -1]),
            DivisorClass::from_ints(&[0, 1]),
            DivisorClass::from_ints(&[1, -1]),
            DivisorClass::from_ints(&[1, 0]),
        ],
        ray_curve_ids: vec![Some("L".into()), Some("E".into()), None, None],
        flag_rays: [
            ("on-E".to_string(), (1usize, 2usize)),
            ("on-L".to_string(), (0usize, 3usize)),
        ]
        .into(),
    }
}

/// Fan for the bundled Hirzebruch models, basis (fiber, negative section).
pub fn hirzebruch_toric(e: u32) -> ToricModel {
    let ei = e as i64;
    ToricModel {
        rays: vec![(1, 0), (0, 1), (-1, ei), (0, -1)],
        ray_classes: vec![
            DivisorClass::from_ints(&[1, 0]),
            DivisorClass::from_ints(&[0, 1]),
            DivisorClass::from_ints(&[1, 0]),
            DivisorClass::from_ints(&[ei, 1]),
        ],
        ray_curve_ids: vec![
            Some("f".into()),
            Some("s".into()),
            None,
            Some("splus".into()),
        ],
        flag_rays: [
            ("corner-fs".to_string(), (0usize, 1usize)),
            ("on-f".to_string(), (0usize, 3usize)),
            ("on-s".to_string(), (1usize, 2usize)),
            ("on-splus".to_string(), (3usize, 2usize)),
        ]
        .into(),
    }
}

/// Structural match of a loaded model against the builtin fans.
pub fn builtin_toric_for(model: &SurfaceModel) -> Option<ToricModel> {
    let candidates: Vec<(SurfaceModel, ToricModel)> = vec![
        (models::p2(), p2_toric()),
        (models::f1(), f1_toric()),
        (models::hirzebruch(0), hirzebruch_toric(0)),
        (models::hirzebruch(1), hirzebruch_toric(1)),
        (models::hirzebruch(2), hirzebruch_toric(2)),
        (models::hirzebruch(3), hirzebruch_toric(3)),
        (models::hirzebruch(4), hirzebruch_toric(4)),
    ];
    for (reference, toric) in candidates {
        if &reference == model {
            return Some(toric);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(coeffs: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(coeffs)
    }

    #[test]
    fn builtin_fans_validate() {
        p2_toric().validate_against(&models::p2()).unwrap();
        f1_toric().validate_against(&models::f1()).unwrap();
        for e in 0..=4 {
            hirzebruch_toric(e)
                .validate_against(&models::hirzebruch(e))
                .unwrap();
        }
    }

    #[test]
    fn section_counts_on_the_plane() {
        let model = models::p2();
        let toric = p2_toric();
        for deg in 0..=5i64 {
            let pts = toric.section_polytope(&model, &d(&[deg]), 1).unwrap();
            assert_eq!(pts.len() as i64, (deg + 1) * (deg + 2) / 2);
        }
        assert!(toric.section_polytope(&model, &d(&[-1]), 1).unwrap().is_empty());
    }

    #[test]
    fn pullback_class_has_three_sections() {
        let model = models::f1();
        let toric = f1_toric();
        let pts = toric.section_polytope(&model, &d(&[1, 0]), 1).unwrap();
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn valuation_hull_examples() {
        let p2 = models::p2();
        let toric = p2_toric();
        let lin = p2.flag("linear").unwrap();
        for deg in 1..=3i64 {
            let hull = toric.valuation_hull(&p2, &d(&[deg]), lin, 1).unwrap();
            let expect = Polygon::hull_of([
                (Rat::zero(), Rat::zero()),
                (Rat::from_int(deg), Rat::zero()),
                (Rat::zero(), Rat::from_int(deg)),
            ]);
            assert_eq!(hull.hull.unwrap(), expect);
        }

        let f1 = models::f1();
        let ftoric = f1_toric();
        let on_e = f1.flag("on-E").unwrap();
        let hull = ftoric.valuation_hull(&f1, &d(&[1, 0]), on_e, 1).unwrap();
        let expect = Polygon::hull_of([
            (Rat::zero(), Rat::zero()),
            (Rat::one(), Rat::zero()),
            (Rat::one(), Rat::one()),
        ]);
        assert_eq!(hull.hull.unwrap(), expect);

        // no sections at all: flagged as empty
        let none = ftoric.valuation_hull(&f1, &d(&[-1, 0]), on_e, 1).unwrap();
        assert!(none.hull.is_none() && none.points.is_empty());
    }

    #[test]
    fn tangential_flag_is_rejected() {
        let f1 = models::f1();
        let toric = f1_toric();
        let cusp = f1.flag("cusp-tangent").unwrap();
        assert!(matches!(
            toric.valuation_hull(&f1, &d(&[1, 1]), cusp, 1),
            Err(Error::FlagNotToric(_))
        ));
    }

    #[test]
    fn comparison_is_exact_for_nef_classes_at_level_one() {
        let p2 = models::p2();
        let toric = p2_toric();
        let lin = p2.flag("linear").unwrap();
        let cmp = toric.oracle_compare(&p2, &d(&[3]), lin, 1).unwrap();
        assert!(cmp.contained);
        assert_eq!(cmp.area_gap, Rat::zero());

        let f1 = models::f1();
        let ftoric = f1_toric();
        for flag_id in ["on-E", "on-L"] {
            let flag = f1.flag(flag_id).unwrap();
            for class in [d(&[1, 0]), d(&[2, -1]), d(&[3, -1])] {
                assert!(cones::is_nef(&f1, &class).unwrap().holds);
                let cmp = ftoric.oracle_compare(&f1, &class, flag, 1).unwrap();
                assert!(cmp.contained, "{class} not contained");
                assert_eq!(cmp.area_gap, Rat::zero(), "{class} has a gap");
            }
        }
    }

    #[test]
    fn hulls_are_contained_and_refine_monotonically() {
        let f1 = models::f1();
        let toric = f1_toric();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut tested = 0;
        while tested < 12 {
            let class = d(&[rng.random_range(-2..=5), rng.random_range(-3..=3)]);
            if !cones::is_big(&f1, &class).unwrap() {
                continue;
            }
            tested += 1;
            for flag_id in ["on-E", "on-L"] {
                let flag = f1.flag(flag_id).unwrap();
                let delta = okounkov_polygon(&f1, &class, flag).unwrap();
                let mut previous: Option<Polygon> = None;
                let mut previous_count = 0usize;
                for m in [1u32, 2, 6] {
                    let hull = toric.valuation_hull(&f1, &class, flag, m).unwrap();
                    if let Some(h) = &hull.hull {
                        assert!(delta.includes(h), "hull at level {m} escapes the polygon");
                        if let Some(prev) = &previous {
                            assert!(h.includes(prev), "level {m} does not refine");
                        }
                        previous = Some(h.clone());
                    }
                    assert!(hull.points.len() >= previous_count);
                    previous_count = hull.points.len();
                }
            }
        }
    }

    #[test]
    fn builtin_lookup_matches_shapes() {
        assert!(builtin_toric_for(&models::p2()).is_some());
        assert!(builtin_toric_for(&models::f1()).is_some());
        assert!(builtin_toric_for(&models::hirzebruch(2)).is_some());
        assert!(builtin_toric_for(&models::dp7()).is_none());
    }
}
