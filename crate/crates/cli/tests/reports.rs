use std::path::PathBuf;

use kgraph_cli::document::{DirectiveDecl, Span};
use kgraph_cli::report::{verdict_line, Outcome};
use kgraph_cli::{emit, parse_kg, run, Format, Model, Overrides, Report};
use kgraph_core::deciders::simplicity::Simplicity;
use kgraph_core::verdict::{Route, Scope, Status, Witness};
use serde_json::Value;

fn model(name: &str) -> Model {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.kg"));
    let doc = parse_kg(&std::fs::read_to_string(path).unwrap()).unwrap();
    Model::from_doc(&doc, name).unwrap()
}

fn directive(name: &str, args: &[&str], options: &[(&str, &str)]) -> DirectiveDecl {
    DirectiveDecl {
        name: name.to_string(),
        args: args.iter().map(|s| s.to_string()).collect(),
        options: options.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        span: Span::default(),
    }
}

fn fixture_report(name: &str) -> Report {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.kg"));
    let doc = parse_kg(&std::fs::read_to_string(path).unwrap()).unwrap();
    let model = Model::from_doc(&doc, name).unwrap();
    run(&model, &doc.directives, &Overrides::default()).unwrap()
}

const FIXTURES: [&str; 9] = [
    "three-vertex",
    "b2-into-n",
    "t2-parity",
    "t2-shear",
    "t2-shear-alt",
    "f2-theta-identity",
    "delta-window",
    "t2-degree-skew",
    "t2-cyclic3",
];

#[test]
fn primitivity_of_three_vertex_fails_with_parity_certificate() {
    let report = run(&model("three-vertex"), &[directive("primitivity", &[], &[])], &Overrides::default()).unwrap();
    let Outcome::Verdict { verdict, .. } = &report.results[0].outcome else { panic!() };
    assert_eq!((verdict.status, verdict.scope), (Status::Fails, Scope::Exact));
    let Witness::CyclicClasses { period, classes } = &verdict.witness else { panic!("{:?}", verdict.witness) };
    assert_eq!(*period, 2);
    assert_eq!(classes.len(), 2);
}

#[test]
fn af_core_of_f2_theta_is_simple() {
    let report = run(&model("f2-theta-identity"), &[directive("simplicity", &["af-core"], &[])], &Overrides::default()).unwrap();
    let Outcome::Simplicity { report } = &report.results[0].outcome else { panic!() };
    assert_eq!((report.status, report.scope), (Simplicity::Simple, Scope::Exact));
}

#[test]
fn af_core_of_three_vertex_is_not_simple() {
    let report = run(&model("three-vertex"), &[directive("simplicity", &["af-core"], &[])], &Overrides::default()).unwrap();
    let Outcome::Simplicity { report } = &report.results[0].outcome else { panic!() };
    assert_eq!(report.status, Simplicity::NotSimple);
    assert!(report.chain.iter().any(|s| s.verdict.route == Route::ResidueLattice));
}

#[test]
fn b2_system_triple() {
    let report = fixture_report("b2-into-n");
    let statuses: Vec<Status> = report.verdicts().into_iter().map(|(_, v)| v.status).collect();
    assert_eq!(statuses, [Status::Holds, Status::Holds, Status::Fails]);
    let (_, cofinal) = report.verdicts()[2];
    let Witness::ZeroGrowth { a, b, .. } = &cofinal.witness else { panic!("{:?}", cofinal.witness) };
    assert_eq!((a.as_str(), b.as_str()), ("(1)", "(0)"));
}

#[test]
fn text_and_json_carry_the_same_verdicts() {
    for name in FIXTURES {
        let report = fixture_report(name);
        let text = emit(&report, Format::Text);
        let json: Value = serde_json::from_str(&emit(&report, Format::Json)).unwrap();
        let decoded: Report = serde_json::from_value(json).unwrap();
        let verdicts = report.verdicts();
        assert!(!verdicts.is_empty(), "{name}");
        assert_eq!(verdicts.len(), decoded.verdicts().len(), "{name}");
        for ((claim, v), (claim2, v2)) in verdicts.iter().zip(decoded.verdicts()) {
            assert_eq!((claim, *v), (&claim2, v2), "{name}");
            let line = verdict_line(claim, v);
            assert!(text.contains(&line), "{name}: `{line}` missing from\n{text}");
        }
    }
}

#[test]
fn json_round_trips_losslessly() {
    for name in FIXTURES {
        let report = fixture_report(name);
        let json = emit(&report, Format::Json);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report, "{name}");
        assert_eq!(emit(&back, Format::Json), json, "{name}");
    }
}

#[test]
fn reports_validate_against_the_schema() {
    let schema: Value =
        serde_json::from_str(include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report-v1.json"))).unwrap();
    let validator = jsonschema::JSONSchema::compile(&schema).unwrap();
    for name in FIXTURES {
        let json: Value = serde_json::from_str(&emit(&fixture_report(name), Format::Json)).unwrap();
        if let Err(errors) = validator.validate(&json) {
            let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
            panic!("{name}: {msgs:#?}");
        };
    }
    // The verdict enums are closed.
    let mut json: Value = serde_json::from_str(&emit(&fixture_report("three-vertex"), Format::Json)).unwrap();
    let verdict = json["results"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|r| r["outcome"]["kind"] == "verdict")
        .unwrap();
    verdict["outcome"]["verdict"]["status"] = Value::from("probably");
    assert!(!validator.is_valid(&json));
}

#[test]
fn runs_are_deterministic() {
    for name in ["three-vertex", "t2-cyclic3"] {
        assert_eq!(emit(&fixture_report(name), Format::Json), emit(&fixture_report(name), Format::Json));
    }
}

#[test]
fn max_degree_override_reaches_the_bounds() {
    let overrides = Overrides { max_degree: Some(2), max_depth: Some(5), timing: false };
    let report = run(&model("t2-shear"), &[directive("cofinality", &[], &[])], &overrides).unwrap();
    assert_eq!(report.bounds.max_pair_degree, 2);
    assert_eq!(report.bounds.max_cofinal_degree, 2);
    assert_eq!(report.bounds.max_path_depth, Some(5));
    assert!(report.results[0].elapsed_us.is_none());
}

#[test]
fn decider_errors_name_the_directive() {
    let err = run(&model("three-vertex"), &[directive("matrices", &[], &[("degree", "(1,2,3)")])], &Overrides::default())
        .unwrap_err();
    assert!(err.to_string().contains("analyze matrices"), "{err}");
}
