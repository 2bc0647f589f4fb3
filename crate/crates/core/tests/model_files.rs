//! The JSON documents shipped under models/ must stay in lockstep with the
//! library builders.

use okounkov::{load_model, models};

fn file(name: &str) -> String {
    let path = format!("{}/../../models/{name}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

#[test]
fn bundled_files_match_builders() {
    for (name, model) in [
        ("p2", models::p2()),
        ("f1", models::f1()),
        ("fe", models::hirzebruch(2)),
        ("dp7", models::dp7()),
    ] {
        let doc = file(name);
        assert_eq!(doc, models::to_json(&model), "{name}.json drifted");
        assert_eq!(load_model(&doc).unwrap(), model, "{name}.json fails to load");
    }
}

#[test]
fn f1_file_has_the_documented_flags() {
    let model = load_model(&file("f1")).unwrap();
    for id in ["on-E", "on-L", "cusp-tangent"] {
        model.flag(id).unwrap();
    }
    let cusp = model.flag("cusp-tangent").unwrap();
    assert_eq!(cusp.curve, "C");
    assert_eq!(cusp.local_mult("E"), 2);
}
