//! Exact membership tests for the pseudo-effective, big, nef and ample
//! cones, and the threshold mu(D, C) where D - tC stops being big.
//!
//! Pseudo-effectivity is decided by pairing against the nef generators
//! (cone duality), nefness by pairing against the effective generators;
//! ampleness is the Nakai-Moishezon test on a polyhedral model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DivisorClass, SurfaceModel};
use crate::rat::Rat;
use crate::zariski;

/// Outcome of one cone membership test, with the violating generator when
/// the test fails.
#[derive(Clone, Debug, Serialize)]
pub struct ConeTest {
    pub holds: bool,
    pub witness: Option<DivisorClass>,
}

impl ConeTest {
    fn pass() -> Self {
        ConeTest {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: DivisorClass) -> Self {
        ConeTest {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// Aggregate verdict for the CLI: the four cone memberships plus the failure
/// witness of the strongest failing test.
#[derive(Clone, Debug, Serialize)]
pub struct PositivityVerdict {
    pub pseudoeffective: bool,
    pub big: bool,
    pub nef: bool,
    pub ample: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DivisorClass>,
}

/// D is pseudo-effective iff it pairs >= 0 with every nef generator.
pub fn is_pseudoeffective(model: &SurfaceModel, d: &DivisorClass) -> Result<ConeTest> {
    for n in &model.nef_gens {
        if model.intersect(d, n)?.is_negative() {
            return Ok(ConeTest::fail(n.clone()));
        }
    }
    Ok(ConeTest::pass())
}

/// D is nef iff it pairs >= 0 with every effective generator.
pub fn is_nef(model: &SurfaceModel, d: &DivisorClass) -> Result<ConeTest> {
    for e in &model.eff_gens {
        if model.intersect(d, e)?.is_negative() {
            return Ok(ConeTest::fail(e.clone()));
        }
    }
    Ok(ConeTest::pass())
}

/// D is big iff it is pseudo-effective with positive volume.
pub fn is_big(model: &SurfaceModel, d: &DivisorClass) -> Result<bool> {
    if !is_pseudoeffective(model, d)?.holds {
        return Ok(false);
    }
    Ok(zariski::volume(model, d)?.is_positive())
}

/// Nakai-Moishezon on a polyhedral model: D is ample iff it pairs strictly
/// positively with every effective generator and has positive
/// self-intersection.
pub fn is_ample(model: &SurfaceModel, d: &DivisorClass) -> Result<bool> {
    for e in &model.eff_gens {
        if !model.intersect(d, e)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(model.intersect(d, d)?.is_positive())
}

/// sup { t : D - tC is big }, computed in closed form as the minimum of
/// (D.n)/(C.n) over the nef generators with C.n > 0. For big D the segment
/// leaves the closed pseudo-effective cone exactly where bigness fails, so
/// no bisection is needed.
pub fn mu_threshold(model: &SurfaceModel, d: &DivisorClass, curve_id: &str) -> Result<Rat> {
    let curve = model.curve(curve_id)?;
    let mut best: Option<Rat> = None;
    for n in &model.nef_gens {
        let cn = model.intersect(&curve.class, n)?;
        if !cn.is_positive() {
            continue;
        }
        let ratio = &model.intersect(d, n)? / &cn;
        best = Some(match best {
            Some(b) => b.min(ratio),
            None => ratio,
        });
    }
    best.ok_or_else(|| Error::UnboundedThreshold(curve_id.to_string()))
}

/// Full verdict for reporting.
pub fn classify(model: &SurfaceModel, d: &DivisorClass) -> Result<PositivityVerdict> {
    let psef = is_pseudoeffective(model, d)?;
    if !psef.holds {
        return Ok(PositivityVerdict {
            pseudoeffective: false,
            big: false,
            nef: false,
            ample: false,
            witness: psef.witness,
        });
    }
    let big = is_big(model, d)?;
    let nef = is_nef(model, d)?;
    let ample = is_ample(model, d)?;
    Ok(PositivityVerdict {
        pseudoeffective: true,
        big,
        nef: nef.holds,
        ample,
        witness: nef.witness,
    })
}
