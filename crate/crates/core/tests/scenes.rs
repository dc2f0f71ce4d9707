use caustics_core::payload;
use caustics_core::scene::{load_scene, SceneDocument};
use caustics_core::svg::render_svg;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn fixtures_load_and_compute() {
    for name in ["coffee_cup.toml", "deltoid_pencil.json", "parabola_point.toml"] {
        let scene = load_scene(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        let out = payload::compute(&scene).unwrap_or_else(|e| panic!("{name}: {e}"));
        let json = out.to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(value["layers"]["caustic"].is_array(), "{name}");
        render_svg(&out).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn toml_and_json_documents_agree() {
    let doc = SceneDocument::parse(&fixture("parabola_point.toml")).unwrap();
    let json = serde_json::to_string(&doc).unwrap();
    let from_json = SceneDocument::parse(&json).unwrap();
    assert_eq!(doc, from_json);
    assert_eq!(SceneDocument::parse(&doc.to_toml()).unwrap(), doc);
}

#[test]
fn compute_is_deterministic() {
    let text = fixture("deltoid_pencil.json");
    let a = payload::compute(&load_scene(&text).unwrap()).unwrap().to_json();
    let b = payload::compute(&load_scene(&text).unwrap()).unwrap().to_json();
    assert_eq!(a, b);
}
