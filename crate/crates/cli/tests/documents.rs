use std::fs;
use std::path::PathBuf;

use kgraph_cli::{parse_kg, print_kg, KgError, Model};
use proptest::prelude::*;

fn fixtures() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut out: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "kg"))
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn fixture(name: &str) -> String {
    fixtures().into_iter().find(|(n, _)| n == name).map(|(_, t)| t).unwrap()
}

#[test]
fn minimal_document_is_one_loop() {
    let doc = parse_kg("kgraph 1\nvertex v\nedge e : 1 v <- v\n").unwrap();
    let model = Model::from_doc(&doc, "loop").unwrap();
    assert_eq!(model.graph.rank(), 1);
    assert_eq!(model.graph.vertex_count(), 1);
    assert_eq!(model.graph.edge_count(), 1);
    let e = model.graph.edge(0);
    assert_eq!((e.source, e.range, e.color), (0, 0, 1));
}

#[test]
fn three_vertex_fixture_counts() {
    let doc = parse_kg(&fixture("three-vertex")).unwrap();
    assert_eq!((doc.vertices.len(), doc.edges.len(), doc.squares.len()), (3, 10, 8));
    let model = Model::from_doc(&doc, "three-vertex").unwrap();
    assert_eq!(model.graph.vertex_count(), 3);
    assert_eq!(model.graph.edge_count(), 10);
}

#[test]
fn undeclared_edge_in_square_is_reported_at_its_line() {
    let text = "kgraph 2\nvertex v\nedge a : 1 v <- v\nedge b : 2 v <- v\n\nsquare a b = b z\n";
    match parse_kg(text) {
        Err(KgError::UnknownReference { line, column, kind, name }) => {
            assert_eq!((line, column), (6, 16));
            assert_eq!((kind, name), ("edge", "z".to_string()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn duplicate_names_point_at_both_lines() {
    let err = parse_kg("kgraph 1\nvertex v\nvertex v\n").unwrap_err();
    assert!(matches!(err, KgError::DuplicateName { line: 3, first: 2, .. }), "{err:?}");
}

#[test]
fn syntax_errors_carry_positions() {
    for (text, line) in [
        ("vertex v\n", 1),
        ("kgraph 1\nvertex v\nedge e : 1 v v\n", 3),
        ("kgraph two\n", 1),
        ("kgraph 1\nvertex v\nedge e : 1 v <- v\nanalyze primitivity --x=1 --x=2\n", 4),
    ] {
        let err = parse_kg(text).unwrap_err();
        assert_eq!(err.line(), line, "{text:?}: {err}");
        assert!(err.column().is_none_or(|c| c >= 1));
    }
}

#[test]
fn bad_color_and_broken_factorization_are_rejected() {
    assert!(parse_kg("kgraph 1\nvertex v\nedge e : 2 v <- v\n").is_err());
    let doc = parse_kg(
        "kgraph 2\nvertex u v\nedge a : 1 v <- u\nedge b : 2 u <- u\nedge c : 2 v <- v\nedge d : 1 v <- u\nsquare a b = c d\n",
    )
    .unwrap();
    // The composable pair `d b` appears in no square.
    assert!(Model::from_doc(&doc, "bad").is_err());
}

#[test]
fn every_fixture_builds() {
    for (name, text) in fixtures() {
        let doc = parse_kg(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        Model::from_doc(&doc, &name).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn parse_print_parse_is_parse_on_fixtures() {
    for (name, text) in fixtures() {
        let doc = parse_kg(&text).unwrap();
        let printed = print_kg(&doc);
        let again = parse_kg(&printed).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(doc, again, "{name}");
        assert_eq!(print_kg(&again), printed, "{name}");
    }
}

fn names() -> impl Strategy<Value = Vec<String>> {
    prop::collection::btree_set("[a-z][a-z0-9_]{0,5}", 1..5).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rank-one documents with arbitrary loops and edges round-trip.
    #[test]
    fn random_rank_one_documents_round_trip(vs in names(), picks in prop::collection::vec((0usize..8, 0usize..8), 0..8)) {
        let mut text = format!("kgraph 1\nvertex {}\n", vs.join(" "));
        for (i, (r, s)) in picks.iter().enumerate() {
            text.push_str(&format!("edge e{i} : 1 {} <- {}   # comment\n", vs[r % vs.len()], vs[s % vs.len()]));
        }
        text.push_str("analyze validate\nanalyze matrices --degree=(2)\n");
        let doc = parse_kg(&text).unwrap();
        let again = parse_kg(&print_kg(&doc)).unwrap();
        prop_assert_eq!(&doc, &again);
        let model = Model::from_doc(&again, "random").unwrap();
        prop_assert_eq!(model.graph.edge_count(), picks.len());
    }
}
