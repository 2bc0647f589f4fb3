//! Newton-Okounkov polygons of big classes along a flag (C, x), computed as
//! the region between two piecewise-linear profiles over [a, mu]:
//!
//!   alpha(t) = (multiplicity at x of N_t restricted to C),
//!   beta(t)  = alpha(t) + P_t . C,
//!
//! where D - tC = P_t + N_t is the Zariski decomposition. Within a chamber
//! the support of N_t is constant and the coefficients are affine in t, so
//! the walk advances chamber by chamber: a jet decomposition just right of
//! the current t yields the support together with exact derivatives, and the
//! next breakpoint is the first t where either a coefficient of N_t or a
//! pairing P_t . Gamma reaches zero.

use std::collections::BTreeMap;

use crate::cones;
use crate::error::{Error, Result};
use crate::model::{DivisorClass, Flag, SurfaceModel};
use crate::polygon::{Polygon, ValuationVector};
use crate::pwl::{Affine, PiecewiseLinear};
use crate::rat::Rat;
use crate::zariski::{self, decompose_jet};

/// The two profiles bounding the polygon over [start, stop].
#[derive(Clone, Debug)]
pub struct Profiles {
    pub start: Rat,
    pub stop: Rat,
    pub lower: PiecewiseLinear,
    pub upper: PiecewiseLinear,
}

/// Valuation vector of an effective combination of catalog curves:
/// nu1 is the coefficient of the host curve, nu2 the local intersection
/// count at x of everything else.
pub fn valuation_vector(
    model: &SurfaceModel,
    flag: &Flag,
    coeffs: &BTreeMap<String, Rat>,
) -> Result<ValuationVector> {
    let mut nu1 = Rat::zero();
    let mut nu2 = Rat::zero();
    for (id, coeff) in coeffs {
        model.curve(id)?;
        if coeff.is_negative() {
            return Err(Error::Validation(format!(
                "negative coefficient {coeff} for curve `{id}` in an effective divisor"
            )));
        }
        if id == &flag.curve {
            nu1 += coeff;
        } else {
            let mult = flag.local_mult(id);
            if mult > 0 {
                nu2 += &(coeff * &Rat::from_int(mult as i64));
            }
        }
    }
    Ok(ValuationVector { nu1, nu2 })
}

pub fn profiles(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<Profiles> {
    if !cones::is_big(model, d)? {
        return Err(Error::NotBig);
    }
    let host = model.curve(&flag.curve)?.clone();
    let start = zariski::sigma_coefficient(model, d, &flag.curve)?;
    let stop = cones::mu_threshold(model, d, &flag.curve)?;
    debug_assert!(start < stop, "big classes always give a < mu");

    let minus_c = &DivisorClass::zero(model.rank) - &host.class;

    let mut breakpoints = vec![start.clone()];
    let mut lower_segs: Vec<Affine> = Vec::new();
    let mut upper_segs: Vec<Affine> = Vec::new();

    let mut t = start.clone();
    let max_chambers = 64 * (model.curves.len() + 2);
    for _ in 0..max_chambers {
        let d_t = d - &host.class.scale(&t);
        let jet = decompose_jet(model, &d_t, &minus_c)?;

        // alpha on this chamber, as a function of the global parameter
        let mut alpha_at = Rat::zero();
        let mut alpha_slope = Rat::zero();
        for (k, &idx) in jet.support.iter().enumerate() {
            let mult = flag.local_mult(&model.curves[idx].id);
            if model.curves[idx].id != flag.curve && mult > 0 {
                let m = Rat::from_int(mult as i64);
                alpha_at += &(&jet.coeff_val[k] * &m);
                alpha_slope += &(&jet.coeff_slope[k] * &m);
            }
        }
        let pc_at = model.intersect(&jet.positive_val, &host.class)?;
        let pc_slope = model.intersect(&jet.positive_slope, &host.class)?;
        let beta_at = &alpha_at + &pc_at;
        let beta_slope = &alpha_slope + &pc_slope;

        // earliest event to the right: a support coefficient vanishing or a
        // pairing of the positive part with an off-support curve vanishing
        let mut t_next = stop.clone();
        for k in 0..jet.support.len() {
            if jet.coeff_slope[k].is_negative() {
                let ev = &t + &(&jet.coeff_val[k] / &(-&jet.coeff_slope[k]));
                if ev < t_next {
                    t_next = ev;
                }
            }
        }
        for (idx, c) in model.curves.iter().enumerate() {
            if jet.support.contains(&idx) {
                continue;
            }
            let pv = model.intersect(&jet.positive_val, &c.class)?;
            let ps = model.intersect(&jet.positive_slope, &c.class)?;
            if ps.is_negative() {
                let ev = &t + &(&pv / &(-&ps));
                if ev < t_next {
                    t_next = ev;
                }
            }
        }
        debug_assert!(t_next > t, "chamber walk must advance");

        lower_segs.push(Affine::new(&alpha_at - &(&alpha_slope * &t), alpha_slope));
        upper_segs.push(Affine::new(&beta_at - &(&beta_slope * &t), beta_slope));
        breakpoints.push(t_next.clone());

        if t_next == stop {
            let lower = PiecewiseLinear::new(breakpoints.clone(), lower_segs)?;
            let upper = PiecewiseLinear::new(breakpoints, upper_segs)?;
            debug_assert!(lower.is_convex(), "alpha must be convex");
            debug_assert!(upper.is_concave(), "beta must be concave");
            debug_assert!(lower.le(&upper), "alpha must stay below beta");
            return Ok(Profiles {
                start,
                stop,
                lower,
                upper,
            });
        }
        t = t_next;
    }
    Err(Error::Validation(
        "chamber walk did not terminate; model data is inconsistent".into(),
    ))
}

/// The polygon { (t, y) : a <= t <= mu, alpha(t) <= y <= beta(t) },
/// assembled into a minimal counter-clockwise vertex list. Closed at mu by
/// continuity of the profiles.
pub fn okounkov_polygon(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<Polygon> {
    let prof = profiles(model, d, flag)?;
    let mut points = prof.lower.vertices();
    points.extend(prof.upper.vertices());
    Ok(Polygon::hull_of(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(coeffs: &[i64]) -> DivisorClass {
        DivisorClass::from_ints(coeffs)
    }

    fn pt(x: i64, y: i64) -> (Rat, Rat) {
        (Rat::from_int(x), Rat::from_int(y))
    }

    fn coeff_map(entries: &[(&str, Rat)]) -> BTreeMap<String, Rat> {
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn valuation_vector_examples() {
        let f1 = models::f1();
        let on_e = f1.flag("on-E").unwrap();
        let v = valuation_vector(&f1, on_e, &coeff_map(&[("E", Rat::one())])).unwrap();
        assert_eq!((v.nu1, v.nu2), (Rat::one(), Rat::zero()));

        let cusp = f1.flag("cusp-tangent").unwrap();
        let v = valuation_vector(&f1, cusp, &coeff_map(&[("E", Rat::one())])).unwrap();
        assert_eq!((v.nu1, v.nu2), (Rat::zero(), Rat::from_int(2)));

        let v = valuation_vector(
            &f1,
            cusp,
            &coeff_map(&[("C", Rat::from_int(2)), ("E", Rat::one())]),
        )
        .unwrap();
        assert_eq!((v.nu1, v.nu2), (Rat::from_int(2), Rat::from_int(2)));

        assert!(valuation_vector(&f1, cusp, &coeff_map(&[("E", Rat::from_int(-1))])).is_err());
    }

    #[test]
    fn cusp_tangent_profiles_are_the_known_lines() {
        let f1 = models::f1();
        let cusp = f1.flag("cusp-tangent").unwrap();
        let prof = profiles(&f1, &d(&[1, 1]), cusp).unwrap();
        assert_eq!(prof.start, Rat::zero());
        assert_eq!(prof.stop, Rat::new(1, 3));
        // single chamber: alpha = 2 + 4t, beta = 5 - 5t
        assert_eq!(prof.lower.segments().len(), 1);
        assert_eq!(prof.lower.segments()[0], Affine::new(Rat::from_int(2), Rat::from_int(4)));
        assert_eq!(prof.upper.segments()[0], Affine::new(Rat::from_int(5), Rat::from_int(-5)));
    }

    #[test]
    fn nef_class_along_exceptional_curve() {
        let f1 = models::f1();
        let on_e = f1.flag("on-E").unwrap();
        let prof = profiles(&f1, &d(&[1, 0]), on_e).unwrap();
        assert_eq!(prof.start, Rat::zero());
        assert_eq!(prof.stop, Rat::one());
        assert_eq!(prof.lower.eval(&Rat::new(1, 2)).unwrap(), Rat::zero());
        assert_eq!(prof.upper.eval(&Rat::new(1, 2)).unwrap(), Rat::new(1, 2));
    }

    #[test]
    fn shifted_domain_when_host_sits_in_the_negative_part() {
        let f1 = models::f1();
        let on_e = f1.flag("on-E").unwrap();
        let prof = profiles(&f1, &d(&[1, 1]), on_e).unwrap();
        assert_eq!(prof.start, Rat::one());
        assert_eq!(prof.stop, Rat::from_int(2));
        let t = Rat::new(3, 2);
        assert_eq!(prof.lower.eval(&t).unwrap(), Rat::zero());
        assert_eq!(prof.upper.eval(&t).unwrap(), Rat::new(1, 2)); // t - 1
    }

    #[test]
    fn polygon_examples() {
        let f1 = models::f1();
        let cusp = f1.flag("cusp-tangent").unwrap();
        let poly = okounkov_polygon(&f1, &d(&[1, 1]), cusp).unwrap();
        assert_eq!(
            poly,
            Polygon::hull_of([pt(0, 2), (Rat::new(1, 3), Rat::new(10, 3)), pt(0, 5)])
        );

        let on_e = f1.flag("on-E").unwrap();
        let poly = okounkov_polygon(&f1, &d(&[2, -1]), on_e).unwrap();
        assert_eq!(
            poly,
            Polygon::hull_of([pt(0, 0), pt(1, 0), pt(1, 2), pt(0, 1)])
        );

        let p2 = models::p2();
        let lin = p2.flag("linear").unwrap();
        for deg in 1..=4 {
            let poly = okounkov_polygon(&p2, &d(&[deg]), lin).unwrap();
            assert_eq!(
                poly,
                Polygon::hull_of([pt(0, 0), pt(deg, 0), pt(0, deg)])
            );
        }
    }

    #[test]
    fn non_big_input_is_rejected() {
        let f1 = models::f1();
        let on_e = f1.flag("on-E").unwrap();
        assert!(matches!(
            profiles(&f1, &d(&[1, -1]), on_e),
            Err(Error::NotBig)
        ));
    }

    fn random_big(model: &SurfaceModel, rng: &mut ChaCha8Rng) -> DivisorClass {
        loop {
            let coeffs: Vec<i64> = (0..model.rank).map(|_| rng.random_range(-5..=7)).collect();
            let class = DivisorClass::from_ints(&coeffs);
            if cones::is_big(model, &class).unwrap() {
                return class;
            }
        }
    }

    #[test]
    fn chamber_walk_agrees_with_fresh_zariski_solves() {
        // evaluate the profiles at random interior points and compare with
        // a decomposition computed from scratch there
        for model in models::bundled() {
            let mut rng = ChaCha8Rng::seed_from_u64(31);
            for _ in 0..10 {
                let class = random_big(&model, &mut rng);
                for flag in &model.flags {
                    let prof = profiles(&model, &class, flag).unwrap();
                    let host = &model.curve(&flag.curve).unwrap().class;
                    for _ in 0..20 {
                        let k = rng.random_range(1..64i64);
                        let t = &prof.start
                            + &(&(&prof.stop - &prof.start) * &Rat::new(k, 64));
                        let d_t = &class - &host.scale(&t);
                        let z = zariski::zariski_decompose(&model, &d_t).unwrap();
                        let mut alpha = Rat::zero();
                        for (id, coeff) in &z.negative {
                            let mult = flag.local_mult(id);
                            if id != &flag.curve && mult > 0 {
                                alpha += &(coeff * &Rat::from_int(mult as i64));
                            }
                        }
                        let beta = &alpha + &model.intersect(&z.positive, host).unwrap();
                        assert_eq!(prof.lower.eval(&t).unwrap(), alpha, "alpha mismatch at t={t}");
                        assert_eq!(prof.upper.eval(&t).unwrap(), beta, "beta mismatch at t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn profile_shape_invariants() {
        for model in models::bundled() {
            let mut rng = ChaCha8Rng::seed_from_u64(32);
            for _ in 0..15 {
                let class = random_big(&model, &mut rng);
                for flag in &model.flags {
                    let prof = profiles(&model, &class, flag).unwrap();
                    assert!(prof.lower.is_convex());
                    assert!(prof.upper.is_concave());
                    assert!(prof.lower.le(&prof.upper));
                    assert!(!prof
                        .lower
                        .eval(&prof.start)
                        .unwrap()
                        .is_negative());
                }
            }
        }
    }

    #[test]
    fn polygon_area_is_half_the_volume() {
        for model in models::bundled() {
            let mut rng = ChaCha8Rng::seed_from_u64(33);
            for _ in 0..15 {
                let class = random_big(&model, &mut rng);
                let vol = zariski::volume(&model, &class).unwrap();
                for flag in &model.flags {
                    let poly = okounkov_polygon(&model, &class, flag).unwrap();
                    assert_eq!(&poly.area() * &Rat::from_int(2), vol);
                }
            }
        }
    }

    #[test]
    fn valuations_of_effective_representatives_land_in_the_polygon() {
        // representatives D = sum c_Gamma Gamma + M with M nef ("mobile"):
        // the catalog part's valuation vector must lie in the polygon
        for model in models::bundled() {
            let mut rng = ChaCha8Rng::seed_from_u64(34);
            let mut found = 0;
            'outer: for _ in 0..400 {
                if found >= 25 {
                    break 'outer;
                }
                let class = random_big(&model, &mut rng);
                let mut coeffs = BTreeMap::new();
                let mut rest = class.clone();
                for c in &model.curves {
                    let v = Rat::new(rng.random_range(0..=4), rng.random_range(1..=2));
                    if v.is_zero() {
                        continue;
                    }
                    rest = &rest - &c.class.scale(&v);
                    coeffs.insert(c.id.clone(), v);
                }
                if !cones::is_nef(&model, &rest).unwrap().holds {
                    continue;
                }
                found += 1;
                for flag in &model.flags {
                    let nu = valuation_vector(&model, flag, &coeffs).unwrap();
                    let poly = okounkov_polygon(&model, &class, flag).unwrap();
                    assert!(
                        poly.contains(&nu.point()),
                        "valuation {:?} of a representative of {class} outside {poly:?}",
                        nu
                    );
                }
            }
            assert!(found > 0, "sampler never produced a decomposable class");
        }
    }

    #[test]
    fn point_multiplicity_is_bounded_by_the_valuation_sum() {
        // for an effective catalog combination, mult_x = sum of coefficients
        // of curves through x, while nu1 + nu2 counts the host coefficient
        // plus local multiplicities >= 1
        for model in models::bundled() {
            let mut rng = ChaCha8Rng::seed_from_u64(35);
            for _ in 0..50 {
                let mut coeffs = BTreeMap::new();
                for c in &model.curves {
                    let v = Rat::from_int(rng.random_range(0..=3));
                    if !v.is_zero() {
                        coeffs.insert(c.id.clone(), v);
                    }
                }
                for flag in &model.flags {
                    let mut mult_x = Rat::zero();
                    for (id, coeff) in &coeffs {
                        if model.flag_incidence(flag, id).unwrap() {
                            mult_x += coeff;
                        }
                    }
                    let nu = valuation_vector(&model, flag, &coeffs).unwrap();
                    assert!(mult_x <= &nu.nu1 + &nu.nu2);
                }
            }
        }
    }
}
