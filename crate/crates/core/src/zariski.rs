//! Zariski decomposition of pseudo-effective classes, volumes, sigma
//! coefficients, asymptotic multiplicity at flag points and divisorial
//! base-locus supports.
//!
//! The solver works over first-order jets `a + b*eps` with `eps` an
//! infinitesimal, compared lexicographically. With a zero slope this is the
//! ordinary decomposition; with slope `-C` it decomposes `D - (t+eps)C` and
//! hands the chamber walk the exact support and coefficient derivatives just
//! right of `t`. The support Gram matrix is rational either way, so the
//! elimination never divides by a jet.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{DivisorClass, Flag, SurfaceModel};
use crate::rat::Rat;

/// D = P + N with P nef, P orthogonal to every support curve, and the
/// support Gram matrix negative definite. Unique on surfaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: DivisorClass,
    /// support curve id -> coefficient, all strictly positive
    pub negative: BTreeMap<String, Rat>,
}

impl ZariskiDecomposition {
    pub fn support(&self) -> Vec<&str> {
        self.negative.keys().map(String::as_str).collect()
    }

    pub fn coefficient(&self, curve_id: &str) -> Rat {
        self.negative
            .get(curve_id)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn negative_class(&self, model: &SurfaceModel) -> DivisorClass {
        let mut total = DivisorClass::zero(model.rank);
        for (id, coeff) in &self.negative {
            let class = &model.curve(id).expect("support curve").class;
            total = &total + &class.scale(coeff);
        }
        total
    }
}

/// Decomposition of `d_val + eps * d_slope` for an infinitesimal eps > 0.
#[derive(Clone, Debug)]
pub(crate) struct JetDecomposition {
    /// indices into the model's curve catalog
    pub support: Vec<usize>,
    pub coeff_val: Vec<Rat>,
    pub coeff_slope: Vec<Rat>,
    pub positive_val: DivisorClass,
    pub positive_slope: DivisorClass,
}

fn lex_negative(val: &Rat, slope: &Rat) -> bool {
    val.is_negative() || (val.is_zero() && slope.is_negative())
}

pub(crate) fn decompose_jet(
    model: &SurfaceModel,
    d_val: &DivisorClass,
    d_slope: &DivisorClass,
) -> Result<JetDecomposition> {
    for n in &model.nef_gens {
        let pv = model.intersect(d_val, n)?;
        let ps = model.intersect(d_slope, n)?;
        if lex_negative(&pv, &ps) {
            return Err(Error::NotPseudoeffective);
        }
    }

    let ncurves = model.curves.len();
    let mut in_support = vec![false; ncurves];
    for (i, c) in model.curves.iter().enumerate() {
        let pv = model.intersect(d_val, &c.class)?;
        let ps = model.intersect(d_slope, &c.class)?;
        if lex_negative(&pv, &ps) {
            in_support[i] = true;
        }
    }

    loop {
        let support: Vec<usize> = (0..ncurves).filter(|&i| in_support[i]).collect();
        let classes: Vec<&DivisorClass> = support.iter().map(|&i| &model.curves[i].class).collect();

        let gram: Vec<Vec<Rat>> = classes
            .iter()
            .map(|a| {
                classes
                    .iter()
                    .map(|b| model.intersect(a, b))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if !linalg::is_negative_definite(&gram) {
            let names: Vec<&str> = support
                .iter()
                .map(|&i| model.curves[i].id.as_str())
                .collect();
            return Err(Error::CatalogInsufficient(format!(
                "support {{{}}} has a Gram matrix that is not negative definite",
                names.join(", ")
            )));
        }

        let rhs_val: Vec<Rat> = classes
            .iter()
            .map(|c| model.intersect(d_val, c))
            .collect::<Result<Vec<_>>>()?;
        let rhs_slope: Vec<Rat> = classes
            .iter()
            .map(|c| model.intersect(d_slope, c))
            .collect::<Result<Vec<_>>>()?;
        let solved = linalg::solve(&gram, &[rhs_val, rhs_slope]).ok_or_else(|| {
            Error::CatalogInsufficient("singular support Gram matrix".into())
        })?;
        let (coeff_val, coeff_slope) = (solved[0].clone(), solved[1].clone());

        let mut positive_val = d_val.clone();
        let mut positive_slope = d_slope.clone();
        for (k, class) in classes.iter().enumerate() {
            positive_val = &positive_val - &class.scale(&coeff_val[k]);
            positive_slope = &positive_slope - &class.scale(&coeff_slope[k]);
        }

        let mut grew = false;
        for i in 0..ncurves {
            if in_support[i] {
                continue;
            }
            let pv = model.intersect(&positive_val, &model.curves[i].class)?;
            let ps = model.intersect(&positive_slope, &model.curves[i].class)?;
            if lex_negative(&pv, &ps) {
                in_support[i] = true;
                grew = true;
            }
        }
        if grew {
            continue;
        }

        for k in 0..support.len() {
            if lex_negative(&coeff_val[k], &coeff_slope[k]) {
                return Err(Error::CatalogInsufficient(format!(
                    "negative coefficient for `{}`: inconsistent cone data",
                    model.curves[support[k]].id
                )));
            }
        }
        for e in &model.eff_gens {
            let pv = model.intersect(&positive_val, e)?;
            let ps = model.intersect(&positive_slope, e)?;
            if lex_negative(&pv, &ps) {
                return Err(Error::CatalogInsufficient(format!(
                    "positive part {positive_val} still pairs negatively with {e}; \
                     a negative curve is missing from the catalog"
                )));
            }
        }

        // drop curves whose coefficient vanishes identically
        let mut kept_support = Vec::new();
        let mut kept_val = Vec::new();
        let mut kept_slope = Vec::new();
        for (k, &idx) in support.iter().enumerate() {
            if coeff_val[k].is_zero() && coeff_slope[k].is_zero() {
                continue;
            }
            kept_support.push(idx);
            kept_val.push(coeff_val[k].clone());
            kept_slope.push(coeff_slope[k].clone());
        }
        return Ok(JetDecomposition {
            support: kept_support,
            coeff_val: kept_val,
            coeff_slope: kept_slope,
            positive_val,
            positive_slope,
        });
    }
}

/// The Zariski decomposition of a pseudo-effective class, by iterated
/// enlargement: start from the curves pairing negatively with D, solve the
/// orthogonality system on the support, and absorb any catalog curve that
/// still meets the candidate positive part negatively. All violating curves
/// are added simultaneously; the fixed point does not depend on the order.
pub fn zariski_decompose(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    let jet = decompose_jet(model, d, &DivisorClass::zero(model.rank))?;
    let mut negative = BTreeMap::new();
    for (k, &idx) in jet.support.iter().enumerate() {
        debug_assert!(jet.coeff_slope[k].is_zero());
        if jet.coeff_val[k].is_positive() {
            negative.insert(model.curves[idx].id.clone(), jet.coeff_val[k].clone());
        }
    }
    Ok(ZariskiDecomposition {
        positive: jet.positive_val,
        negative,
    })
}

/// vol(D) = P.P on a surface; zero for classes outside the pseudo-effective
/// cone.
pub fn volume(model: &SurfaceModel, d: &DivisorClass) -> Result<Rat> {
    match zariski_decompose(model, d) {
        Ok(z) => model.intersect(&z.positive, &z.positive),
        Err(Error::NotPseudoeffective) => Ok(Rat::zero()),
        Err(e) => Err(e),
    }
}

/// Coefficient of the given curve in the negative part; Nakayama's
/// sigma invariant on a surface.
pub fn sigma_coefficient(model: &SurfaceModel, d: &DivisorClass, curve_id: &str) -> Result<Rat> {
    model.curve(curve_id)?;
    Ok(zariski_decompose(model, d)?.coefficient(curve_id))
}

/// Divisorial part of the restricted base locus: the support of N.
pub fn bminus_divisorial_support(model: &SurfaceModel, d: &DivisorClass) -> Result<Vec<String>> {
    let z = zariski_decompose(model, d)?;
    Ok(z.negative.keys().cloned().collect())
}

/// Augmented base locus of a big class: Supp(N) together with the catalog
/// curves on which the positive part degenerates.
pub fn bplus_support(model: &SurfaceModel, d: &DivisorClass) -> Result<Vec<String>> {
    let z = zariski_decompose(model, d)?;
    if !model.intersect(&z.positive, &z.positive)?.is_positive() {
        return Err(Error::NotBig);
    }
    let mut ids: Vec<String> = z.negative.keys().cloned().collect();
    for c in &model.curves {
        if model.intersect(&z.positive, &c.class)?.is_zero() && !ids.contains(&c.id) {
            ids.push(c.id.clone());
        }
    }
    ids.sort();
    Ok(ids)
}

pub fn point_in_bminus(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<bool> {
    for id in bminus_divisorial_support(model, d)? {
        if model.flag_incidence(flag, &id)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn point_in_bplus(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<bool> {
    for id in bplus_support(model, d)? {
        if model.flag_incidence(flag, &id)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Asymptotic multiplicity of a big class at the flag point: a + b' with
/// a the coefficient of the host curve in N(D) and b' the total multiplicity
/// at x of N(D - aC). Catalog curves are smooth at flag points, so each
/// incident curve contributes exactly its coefficient.
pub fn asymptotic_multiplicity(model: &SurfaceModel, d: &DivisorClass, flag: &Flag) -> Result<Rat> {
    let host = model.curve(&flag.curve)?;
    let a = sigma_coefficient(model, d, &flag.curve)?;
    let shifted = d - &host.class.scale(&a);
    let n2 = zariski_decompose(model, &shifted)?;
    let mut b = Rat::zero();
    for (id, coeff) in &n2.negative {
        if id != &flag.curve && flag.local_mult(id) > 0 {
            b += coeff;
        }
    }
    Ok(a + b)
}

/// Independent oracle: tries every subset of the negative catalog curves,
/// solves the orthogonality system on it, and keeps the candidate with
/// non-negative coefficients, negative-definite support Gram and nef
/// positive part. Uniqueness of the decomposition makes every surviving
/// candidate agree after dropping zero coefficients.
pub fn exhaustive_zariski(model: &SurfaceModel, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    let negatives: Vec<usize> = (0..model.curves.len())
        .filter(|&i| model.curves[i].negative)
        .collect();
    assert!(
        negatives.len() <= 16,
        "exhaustive oracle is for small catalogs"
    );

    let mut found: Option<ZariskiDecomposition> = None;
    'subsets: for mask in 0u32..(1 << negatives.len()) {
        let subset: Vec<usize> = (0..negatives.len())
            .filter(|&k| mask & (1 << k) != 0)
            .map(|k| negatives[k])
            .collect();
        let classes: Vec<&DivisorClass> =
            subset.iter().map(|&i| &model.curves[i].class).collect();
        let gram: Vec<Vec<Rat>> = classes
            .iter()
            .map(|a| {
                classes
                    .iter()
                    .map(|b| model.intersect(a, b))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if !linalg::is_negative_definite(&gram) {
            continue;
        }
        let rhs: Vec<Rat> = classes
            .iter()
            .map(|c| model.intersect(d, c))
            .collect::<Result<Vec<_>>>()?;
        let coeffs = match linalg::solve(&gram, &[rhs]) {
            Some(mut cols) => cols.remove(0),
            None => continue,
        };
        if coeffs.iter().any(Rat::is_negative) {
            continue;
        }
        let mut positive = d.clone();
        for (k, class) in classes.iter().enumerate() {
            positive = &positive - &class.scale(&coeffs[k]);
        }
        for e in &model.eff_gens {
            if model.intersect(&positive, e)?.is_negative() {
                continue 'subsets;
            }
        }
        let mut negative = BTreeMap::new();
        for (k, &idx) in subset.iter().enumerate() {
            if coeffs[k].is_positive() {
                negative.insert(model.curves[idx].id.clone(), coeffs[k].clone());
            }
        }
        let candidate = ZariskiDecomposition { positive, negative };
        match &found {
            None => found = Some(candidate),
            Some(prev) => assert_eq!(
                prev, &candidate,
                "two distinct Zariski decompositions for {d}"
            ),
        }
    }

    found.ok_or_else(|| {
        if matches!(
            crate::cones::is_pseudoeffective(model, d),
            Ok(t) if t.holds
        ) {
            Error::CatalogInsufficient(format!("no subset decomposes {d}"))
        } else {
            Error::NotPseudoeffective
        }
    })
}
