//! The JSON surfaces: measure schema, pair schema, mean-spec schema, and the
//! serialized equality report.

use gqmean::equality::{self, CheckOptions};
use gqmean::generator::{GeneratorPair, PairSpec};
use gqmean::measure::Measure;
use gqmean::MeanSpec;
use serde_json::json;

#[test]
fn measure_schema_accepts_atoms_and_density() {
    let m: Measure = serde_json::from_value(json!({
        "atoms": [{"t": 0.1, "w": 0.25}, {"t": 0.9, "w": 0.25}],
        "density": [{"lo": 0.0, "hi": 1.0, "poly": [0.5]}]
    }))
    .unwrap();
    assert!(m.is_symmetric(1e-11));
    let round_tripped: Measure =
        serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(round_tripped, m);
}

#[test]
fn measure_schema_rejects_invalid_inputs() {
    for bad in [
        json!({"atoms": [{"t": 0.5, "w": 0.5}]}),                      // mass 1/2
        json!({"atoms": [{"t": -0.2, "w": 1.0}]}),                     // position
        json!({"density": [{"lo": 0.3, "hi": 0.1, "poly": [1.0]}]}),   // inverted
        json!({"density": [{"lo": 0.0, "hi": 1.0, "poly": [3.0, -6.0]}]}), // negative
    ] {
        assert!(
            serde_json::from_value::<Measure>(bad.clone()).is_err(),
            "accepted {bad}"
        );
    }
}

#[test]
fn pair_schema_builds_each_family() {
    let specs = [
        json!({"family": "power", "a": 2.0, "b": 1.0, "domain": [0.5, 10.0]}),
        json!({"family": "log-power", "a": 1.0, "domain": [1.2, 6.0]}),
        json!({"family": "trig", "a": -1.0, "phi": "x", "scale": false, "domain": [0.1, 1.4]}),
        json!({"family": "quasiarithmetic", "phi": ["log", "x"], "domain": [0.5, 4.0]}),
        json!({"family": "cauchy-derived", "f": ["pow", 3, "x"], "g": ["pow", 2, "x"],
               "domain": [0.5, 4.0]}),
        json!({"family": "custom", "f": ["sinh", "x"], "g": ["cosh", "x"], "domain": [0.0, 2.0]}),
    ];
    for v in specs {
        let spec: PairSpec = serde_json::from_value(v.clone()).unwrap();
        let pair = GeneratorPair::from_spec(&spec).unwrap();
        pair.validate().unwrap();
        // serialization round-trips through the same schema
        let again: PairSpec =
            serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec, "round trip changed {v}");
    }
}

#[test]
fn pair_schema_rejects_degenerate_pairs() {
    let spec: PairSpec =
        serde_json::from_value(json!({"family": "power", "a": 1.0, "b": 1.0, "domain": [0.5, 2.0]}))
            .unwrap();
    assert!(GeneratorPair::from_spec(&spec).is_err());
}

#[test]
fn mean_spec_schema_covers_every_family() {
    let cases: Vec<(serde_json::Value, f64, f64, f64)> = vec![
        (json!({"family": "power", "a": 2.0}), 1.0, 7.0, 5.0),
        (json!({"family": "gini", "a": 2.0, "b": 1.0}), 1.0, 3.0, 2.5),
        (json!({"family": "stolarsky", "a": 2.0, "b": 1.0}), 2.0, 6.0, 4.0),
        (
            json!({"family": "quasiarithmetic", "phi": ["log", "x"], "domain": [0.5, 20.0]}),
            4.0,
            9.0,
            6.0,
        ),
        (
            json!({"family": "bajraktarevic",
                   "pair": {"family": "power", "a": 2.0, "b": 1.0, "domain": [0.5, 10.0]}}),
            1.0,
            3.0,
            2.5,
        ),
        (
            json!({"family": "cauchy", "f": ["pow", 3, "x"], "g": ["pow", 2, "x"],
                   "domain": [0.5, 10.0]}),
            1.0,
            2.0,
            14.0 / 9.0,
        ),
        (
            json!({"family": "generalized",
                   "pair": {"family": "quasiarithmetic", "phi": "x", "domain": [0.0, 10.0]},
                   "measure": {"density": [{"lo": 0.0, "hi": 1.0, "poly": [1.0]}]}}),
            2.0,
            4.0,
            3.0,
        ),
    ];
    for (v, x, y, want) in cases {
        let spec = MeanSpec::from_json(&v).unwrap();
        let got = spec.eval(x, y).unwrap();
        assert!((got - want).abs() <= 1e-11, "{v}: got {got}, want {want}");
    }
}

#[test]
fn equality_report_serializes_with_conditions_and_constants() {
    let opts = CheckOptions { func_points: 17, mean_grid: 5, ..Default::default() };
    let results = equality::intersection_demo(&equality::default_demo_suite()[..1], &opts).unwrap();
    let text = serde_json::to_string_pretty(&results[0].report).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["verdict"], "equal");
    let conditions = parsed["conditions"].as_array().unwrap();
    assert!(conditions.iter().any(|c| c["id"] == "vii"));
    let iv = conditions.iter().find(|c| c["id"] == "iv").unwrap();
    assert!((iv["constants"]["a"].as_f64().unwrap() - 1.0).abs() < 1e-8);
}
