//! Bundled surface models. The JSON files shipped under `models/` are
//! generated from these builders; a test pins them against each other.

use std::collections::BTreeMap;

use crate::model::{CurveRecord, DivisorClass, Flag, SurfaceModel};

fn curve(id: &str, class: &[i64], negative: bool) -> CurveRecord {
    CurveRecord {
        id: id.to_string(),
        class: DivisorClass::from_ints(class),
        negative,
    }
}

fn flag(id: &str, host: &str, mults: &[(&str, u64)], very_general: bool) -> Flag {
    Flag {
        id: id.to_string(),
        curve: host.to_string(),
        local_mults: mults
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect::<BTreeMap<_, _>>(),
        very_general,
    }
}

/// The projective plane: rank-1 lattice, one cataloged line hosting the
/// `linear` flag.
pub fn p2() -> SurfaceModel {
    let model = SurfaceModel {
        rank: 1,
        gram: vec![vec![1]],
        curves: vec![curve("line", &[1], false)],
        nef_gens: vec![DivisorClass::from_ints(&[1])],
        eff_gens: vec![DivisorClass::from_ints(&[1])],
        flags: vec![flag("linear", "line", &[], true)],
    };
    model.validate().expect("builtin model");
    model
}

/// The plane blown up in a point, with basis (H, E). Catalog: the
/// exceptional curve E, a line L through the blown-up point, and the proper
/// transform C of a cuspidal cubic with its cusp there. The `cusp-tangent`
/// flag sits at the point where C and E are tangent to order two.
pub fn f1() -> SurfaceModel {
    let model = SurfaceModel {
        rank: 2,
        gram: vec![vec![1, 0], vec![0, -1]],
        curves: vec![
            curve("E", &[0, 1], true),
            curve("L", &[1, -1], false),
            curve("C", &[3, -2], false),
        ],
        nef_gens: vec![
            DivisorClass::from_ints(&[1, 0]),
            DivisorClass::from_ints(&[1, -1]),
        ],
        eff_gens: vec![
            DivisorClass::from_ints(&[0, 1]),
            DivisorClass::from_ints(&[1, -1]),
        ],
        flags: vec![
            flag("on-E", "E", &[], true),
            flag("on-L", "L", &[], true),
            flag("cusp-tangent", "C", &[("E", 2)], false),
        ],
    };
    model.validate().expect("builtin model");
    model
}

/// The Hirzebruch surface of invariant `e`, basis (f, s) with f a fiber and
/// s the section of self-intersection -e. Supported for 0 <= e <= 4.
pub fn hirzebruch(e: u32) -> SurfaceModel {
    assert!(e <= 4, "hirzebruch builder supports e <= 4");
    let ei = e as i64;
    let mut curves = vec![curve("f", &[1, 0], false), curve("s", &[0, 1], e > 0)];
    // a section disjoint from s, class s + e f
    curves.push(curve("splus", &[ei, 1], false));
    let model = SurfaceModel {
        rank: 2,
        gram: vec![vec![0, 1], vec![1, -ei]],
        curves,
        nef_gens: vec![
            DivisorClass::from_ints(&[1, 0]),
            DivisorClass::from_ints(&[ei, 1]),
        ],
        eff_gens: vec![
            DivisorClass::from_ints(&[1, 0]),
            DivisorClass::from_ints(&[0, 1]),
        ],
        flags: vec![
            flag("on-f", "f", &[], true),
            flag("on-s", "s", &[], true),
            flag("on-splus", "splus", &[], true),
            flag("corner-fs", "f", &[("s", 1)], false),
        ],
    };
    model.validate().expect("builtin model");
    model
}

/// The plane blown up in two points (a degree-7 del Pezzo), basis
/// (H, E1, E2). Negative curves: both exceptional divisors and the line
/// through the two points.
pub fn dp7() -> SurfaceModel {
    let model = SurfaceModel {
        rank: 3,
        gram: vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]],
        curves: vec![
            curve("E1", &[0, 1, 0], true),
            curve("E2", &[0, 0, 1], true),
            curve("L12", &[1, -1, -1], true),
            curve("L1", &[1, -1, 0], false),
            curve("L2", &[1, 0, -1], false),
        ],
        nef_gens: vec![
            DivisorClass::from_ints(&[1, 0, 0]),
            DivisorClass::from_ints(&[1, -1, 0]),
            DivisorClass::from_ints(&[1, 0, -1]),
        ],
        eff_gens: vec![
            DivisorClass::from_ints(&[0, 1, 0]),
            DivisorClass::from_ints(&[0, 0, 1]),
            DivisorClass::from_ints(&[1, -1, -1]),
        ],
        flags: vec![
            flag("on-E1", "E1", &[], true),
            flag("on-E2", "E2", &[], true),
            flag("on-L12", "L12", &[], true),
            flag("on-L1", "L1", &[], true),
            flag("on-L2", "L2", &[], true),
            flag("E1-meets-L12", "E1", &[("L12", 1)], false),
        ],
    };
    model.validate().expect("builtin model");
    model
}

/// All models exercised by the verification suites.
pub fn bundled() -> Vec<SurfaceModel> {
    vec![p2(), f1(), hirzebruch(1), hirzebruch(2), hirzebruch(3), dp7()]
}

/// Canonical JSON document for a model, matching the on-disk format.
pub fn to_json(model: &SurfaceModel) -> String {
    let curves: Vec<serde_json::Value> = model
        .curves
        .iter()
        .map(|c| {
            serde_json::json!({
                "id": c.id,
                "class": c.class,
                "negative": c.negative,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "rank": model.rank,
        "gram": model.gram,
        "curves": curves,
        "nef_gens": model.nef_gens,
        "eff_gens": model.eff_gens,
        "flags": model.flags,
    });
    serde_json::to_string_pretty(&doc).expect("model serialization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_model;

    #[test]
    fn builders_roundtrip_through_json() {
        for model in bundled() {
            let doc = to_json(&model);
            let back = load_model(&doc).unwrap();
            assert_eq!(model, back);
        }
    }

    #[test]
    fn hirzebruch_zero_is_a_quadric() {
        let f0 = hirzebruch(0);
        let f = DivisorClass::from_ints(&[1, 0]);
        let s = DivisorClass::from_ints(&[0, 1]);
        assert_eq!(f0.intersect(&f, &f).unwrap(), crate::rat::Rat::zero());
        assert_eq!(f0.intersect(&s, &s).unwrap(), crate::rat::Rat::zero());
        assert_eq!(f0.intersect(&f, &s).unwrap(), crate::rat::Rat::one());
    }

    #[test]
    fn every_bundled_flag_suite_covers_the_catalog() {
        for model in bundled() {
            for c in &model.curves {
                assert!(
                    model.flags.iter().any(|fl| fl.curve == c.id),
                    "curve {} of a bundled model has no hosting flag",
                    c.id
                );
            }
        }
    }
}
