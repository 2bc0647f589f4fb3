//! Browser demo bindings. Three interactive operations over the bundled
//! models: classify a divisor class, draw its Newton-Okounkov polygon with
//! the largest inscribed simplex, and overlay the two sides of the slice
//! identity at an adjustable parameter. All results come back as JSON
//! strings; failures are reported as `{"error": ...}` values instead of
//! exceptions so the page can surface them inline.

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use okounkov::criteria::largest_simplex_constant;
use okounkov::okounkov::okounkov_polygon;
use okounkov::svg::{render_scene, SvgLayer};
use okounkov::{cones, models, standard_simplex, zariski};
use okounkov::{DivisorClass, Rat, SurfaceModel};

fn model_by_id(id: &str) -> Option<SurfaceModel> {
    match id {
        "p2" => Some(models::p2()),
        "f1" => Some(models::f1()),
        "fe1" => Some(models::hirzebruch(1)),
        "fe2" => Some(models::hirzebruch(2)),
        "fe3" => Some(models::hirzebruch(3)),
        "dp7" => Some(models::dp7()),
        _ => None,
    }
}

fn err(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// The bundled models with their ranks and flags, for populating the UI.
#[wasm_bindgen]
pub fn models_catalog() -> String {
    let ids = ["p2", "f1", "fe1", "fe2", "fe3", "dp7"];
    let entries: Vec<serde_json::Value> = ids
        .iter()
        .map(|id| {
            let m = model_by_id(id).unwrap();
            json!({
                "id": id,
                "rank": m.rank,
                "curves": m.curves.iter().map(|c| &c.id).collect::<Vec<_>>(),
                "flags": m.flags.iter().map(|f| &f.id).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "models": entries }).to_string()
}

/// Cone membership, volume and Zariski decomposition of a divisor class.
#[wasm_bindgen]
pub fn classify(model_id: &str, divisor_csv: &str) -> String {
    let Some(model) = model_by_id(model_id) else {
        return err(format!("unknown model `{model_id}`"));
    };
    let divisor = match DivisorClass::parse_csv(divisor_csv) {
        Ok(d) => d,
        Err(e) => return err(e),
    };
    let verdict = match cones::classify(&model, &divisor) {
        Ok(v) => v,
        Err(e) => return err(e),
    };
    let mut payload = json!({ "divisor": divisor, "verdict": verdict });
    if verdict.pseudoeffective {
        match (
            zariski::volume(&model, &divisor),
            zariski::zariski_decompose(&model, &divisor),
        ) {
            (Ok(volume), Ok(z)) => {
                payload["volume"] = json!(volume);
                payload["zariski"] = json!({ "positive": z.positive, "negative": z.negative });
            }
            (Err(e), _) | (_, Err(e)) => return err(e),
        }
    }
    payload.to_string()
}

/// SVG of the polygon along a flag, with the largest inscribed simplex when
/// it exists, plus the exact headline numbers.
#[wasm_bindgen]
pub fn polygon_svg(model_id: &str, divisor_csv: &str, flag_id: &str) -> String {
    let Some(model) = model_by_id(model_id) else {
        return err(format!("unknown model `{model_id}`"));
    };
    let divisor = match DivisorClass::parse_csv(divisor_csv) {
        Ok(d) => d,
        Err(e) => return err(e),
    };
    let flag = match model.flag(flag_id) {
        Ok(f) => f.clone(),
        Err(e) => return err(e),
    };
    let poly = match okounkov_polygon(&model, &divisor, &flag) {
        Ok(p) => p,
        Err(e) => return err(e),
    };
    let lambda = match largest_simplex_constant(&model, &divisor, &flag) {
        Ok(s) => s.lambda,
        Err(e) => return err(e),
    };
    let simplex = standard_simplex(&lambda);
    let mut layers = vec![SvgLayer {
        polygon: &poly,
        fill: "#cfe3f7",
        stroke: "#17527f",
        label: "okounkov polygon",
    }];
    if lambda.is_positive() {
        layers.push(SvgLayer {
            polygon: &simplex,
            fill: "#f7ddb0",
            stroke: "#a86408",
            label: "largest inscribed simplex",
        });
    }
    json!({
        "svg": render_scene(&layers),
        "polygon": poly,
        "lambda": lambda,
        "area": poly.area(),
        "min_sum": poly.min_sum().ok(),
    })
    .to_string()
}

/// Overlay of the slice identity at t = (num/den) * mu: the polygon cut at
/// t against the polygon of D - tC pushed right by t. The two regions agree
/// exactly; `identity_holds` reports the exact comparison.
#[wasm_bindgen]
pub fn slice_svg(model_id: &str, divisor_csv: &str, flag_id: &str, num: u32, den: u32) -> String {
    let Some(model) = model_by_id(model_id) else {
        return err(format!("unknown model `{model_id}`"));
    };
    let divisor = match DivisorClass::parse_csv(divisor_csv) {
        Ok(d) => d,
        Err(e) => return err(e),
    };
    let flag = match model.flag(flag_id) {
        Ok(f) => f.clone(),
        Err(e) => return err(e),
    };
    if den == 0 || num >= den {
        return err("slice fraction must satisfy 0 <= num/den < 1");
    }
    let mu = match cones::mu_threshold(&model, &divisor, &flag.curve) {
        Ok(mu) => mu,
        Err(e) => return err(e),
    };
    let t = &mu * &Rat::new(num as i64, den as i64);

    let poly = match okounkov_polygon(&model, &divisor, &flag) {
        Ok(p) => p,
        Err(e) => return err(e),
    };
    let left_end = poly.bounds().map(|(lo, _)| lo.0).unwrap_or_else(Rat::zero);
    let sliced = if t <= left_end {
        poly.clone()
    } else {
        match poly.slice_right(&t) {
            Ok(p) => p,
            Err(e) => return err(e),
        }
    };
    let host = model.curve(&flag.curve).unwrap().class.clone();
    let shifted = &divisor - &host.scale(&t);
    let translated = match okounkov_polygon(&model, &shifted, &flag) {
        Ok(p) => p.translate(&(t.clone(), Rat::zero())),
        Err(e) => return err(e),
    };

    let layers = [
        SvgLayer {
            polygon: &poly,
            fill: "#eef2f5",
            stroke: "#9fb3c2",
            label: "full polygon",
        },
        SvgLayer {
            polygon: &sliced,
            fill: "#cfe3f7",
            stroke: "#17527f",
            label: "right slice",
        },
        SvgLayer {
            polygon: &translated,
            fill: "none",
            stroke: "#c22f2f",
            label: "translated polygon of D - tC",
        },
    ];
    json!({
        "svg": render_scene(&layers),
        "t": t,
        "mu": mu,
        "identity_holds": sliced == translated,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_lists_bundled_models() {
        let parsed: serde_json::Value = serde_json::from_str(&models_catalog()).unwrap();
        let models = parsed["models"].as_array().unwrap();
        assert_eq!(models.len(), 6);
        assert!(models.iter().any(|m| m["id"] == "f1"));
    }

    #[test]
    fn classify_round_trips() {
        let parsed: serde_json::Value = serde_json::from_str(&classify("f1", "1,1")).unwrap();
        assert_eq!(parsed["verdict"]["big"], serde_json::json!(true));
        assert_eq!(parsed["volume"], serde_json::json!(1));
        assert_eq!(parsed["zariski"]["negative"]["E"], serde_json::json!(1));

        let bad: serde_json::Value = serde_json::from_str(&classify("nope", "1")).unwrap();
        assert!(bad["error"].is_string());
    }

    #[test]
    fn polygon_payload_has_svg_and_exact_values() {
        let parsed: serde_json::Value =
            serde_json::from_str(&polygon_svg("f1", "1,1", "cusp-tangent")).unwrap();
        assert!(parsed["svg"].as_str().unwrap().starts_with("<svg"));
        assert_eq!(parsed["min_sum"], serde_json::json!(2));
        assert_eq!(
            parsed["polygon"]["vertices"],
            serde_json::json!([[0, 2], ["1/3", "10/3"], [0, 5]])
        );
    }

    #[test]
    fn slice_identity_holds_in_the_demo() {
        for (num, den) in [(0u32, 2u32), (1, 2), (3, 4), (7, 8)] {
            let parsed: serde_json::Value =
                serde_json::from_str(&slice_svg("f1", "1,1", "cusp-tangent", num, den)).unwrap();
            assert_eq!(
                parsed["identity_holds"],
                serde_json::json!(true),
                "slice identity at {num}/{den}"
            );
        }
        let bad: serde_json::Value =
            serde_json::from_str(&slice_svg("f1", "1,1", "cusp-tangent", 2, 2)).unwrap();
        assert!(bad["error"].is_string());
    }
}
