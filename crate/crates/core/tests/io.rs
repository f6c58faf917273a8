use std::fs;
use std::path::{Path, PathBuf};

use motifkit::graph::GraphBuilder;
use motifkit::io::{graph_digest, load_graph, write_edge_csv, write_vertex_csv, LoadError, LoadOptions};
use motifkit::AttributeValue;
use proptest::prelude::*;
use tempfile::TempDir;

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn load(edges: &str) -> Result<motifkit::io::LoadedGraph, LoadError> {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "edges.csv", edges);
    load_graph(&p, None, None, &LoadOptions::default())
}

#[test]
fn small_edge_list() {
    let g = load("src,dst\na,b\nb,c\n").unwrap();
    assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (3, 2));
    assert_eq!(g.duplicate_rows, 0);
    let g = load("a,b\nb,c\n").unwrap();
    assert_eq!((g.graph.vertex_count(), g.graph.edge_count()), (3, 2));
}

#[test]
fn duplicates_are_collapsed_and_counted() {
    let g = load("src,dst\na,b\na,b\nb,a\n").unwrap();
    assert_eq!((g.graph.edge_count(), g.duplicate_rows), (2, 1));
}

#[test]
fn row_errors_carry_line_numbers() {
    match load("a,a\n") {
        Err(LoadError::SelfLoop { line, .. }) => assert_eq!(line, 1),
        other => panic!("{other:?}"),
    }
    let e = load("src,dst\na,b\nc\n").unwrap_err();
    assert!(matches!(e, LoadError::MalformedRow { line: 3, .. }), "{e:?}");
    let e = load("src,dst\na,\n").unwrap_err();
    assert!(matches!(e, LoadError::MalformedRow { line: 2, .. }), "{e:?}");
}

#[test]
fn missing_file() {
    let e = load_graph(Path::new("/nonexistent/edges.csv"), None, None, &LoadOptions::default());
    assert!(matches!(e, Err(LoadError::FileNotFound(_))));
}

#[test]
fn attributes_for_unknown_entities() {
    let dir = TempDir::new().unwrap();
    let edges = write(dir.path(), "e.csv", "src,dst\na,b\n");
    let verts = write(dir.path(), "v.csv", "id,type\na,KC\nz,MBON\n");
    let e = load_graph(&edges, Some(&verts), None, &LoadOptions::default());
    assert!(matches!(e, Err(LoadError::AttributeForUnknownVertex(id)) if id == "z"));
    let eattr = write(dir.path(), "ea.csv", "src,dst,w\nb,a,3\n");
    let e = load_graph(&edges, None, Some(&eattr), &LoadOptions::default());
    assert!(matches!(e, Err(LoadError::AttributeForUnknownEdge(..))));
}

#[test]
fn attribute_types_are_inferred_per_column() {
    let dir = TempDir::new().unwrap();
    let edges = write(dir.path(), "e.csv", "src,dst,weight\na,b,3\nb,c,1.5\nc,a,\n");
    let verts = write(dir.path(), "v.csv", "id,n,flag,kind\na,1,true,x\nb,2,false,7\nc,,true,y\n");
    let g = load_graph(&edges, Some(&verts), None, &LoadOptions::default()).unwrap().graph;
    let v = |id: &str, k: &str| g.vertex_attr(g.index_of(id).unwrap(), k).cloned();
    assert_eq!(v("a", "n"), Some(AttributeValue::Int(1)));
    assert_eq!(v("c", "n"), None);
    assert_eq!(v("b", "flag"), Some(AttributeValue::Bool(false)));
    assert_eq!(v("b", "kind"), Some(AttributeValue::Str("7".into())));
    let pos = g.edge_position(g.index_of("a").unwrap(), g.index_of("b").unwrap()).unwrap();
    assert_eq!(g.edge_attr(pos, "weight"), Some(&AttributeValue::Float(3.0)));
}

#[test]
fn weight_filter() {
    let dir = TempDir::new().unwrap();
    let edges = write(dir.path(), "e.csv", "src,dst,weight\na,b,3\nb,c,1\nc,a,5\n");
    let opts = LoadOptions { min_weight: Some(3.0) };
    let g = load_graph(&edges, None, None, &opts).unwrap();
    assert_eq!((g.graph.edge_count(), g.filtered_rows), (2, 1));
    let plain = write(dir.path(), "p.csv", "a,b\n");
    assert!(matches!(load_graph(&plain, None, None, &opts), Err(LoadError::MissingWeightColumn)));
}

fn attr_value() -> impl Strategy<Value = AttributeValue> {
    prop_oneof![
        any::<i32>().prop_map(|i| AttributeValue::Int(i as i64)),
        (-1e6f64..1e6).prop_map(AttributeValue::Float),
        any::<bool>().prop_map(AttributeValue::Bool),
        "[a-zA-Z][a-zA-Z ,\"]{0,6}[a-z]".prop_map(AttributeValue::Str),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn write_then_load_is_identity(
        edges in prop::collection::vec((0u8..12, 0u8..12), 1..40),
        vtype in attr_value(),
        etype in attr_value(),
        present in prop::collection::vec(any::<bool>(), 40),
    ) {
        let mut b = GraphBuilder::new();
        let mut kept = Vec::new();
        for (s, d) in edges {
            if s != d && b.add_edge(&format!("n{s}"), &format!("n{d}")).unwrap() {
                kept.push((format!("n{s}"), format!("n{d}")));
            }
        }
        prop_assume!(!kept.is_empty());
        // One column per type: reuse the sampled value's type on every row.
        let same_type = |proto: &AttributeValue, i: usize| match proto {
            AttributeValue::Int(x) => AttributeValue::Int(x.wrapping_add(i as i64)),
            AttributeValue::Float(x) => AttributeValue::Float(x + i as f64 * 0.25),
            AttributeValue::Bool(x) => AttributeValue::Bool(*x ^ i.is_multiple_of(2)),
            AttributeValue::Str(x) => AttributeValue::Str(format!("{x}{i}")),
        };
        for (i, (s, d)) in kept.iter().enumerate() {
            if present[i] {
                b.set_edge_attr(s, d, "e", same_type(&etype, i)).unwrap();
                b.set_vertex_attr(s, "v", same_type(&vtype, i)).unwrap();
            }
        }
        let g = b.build().unwrap();

        let dir = TempDir::new().unwrap();
        let ep = dir.path().join("e.csv");
        let vp = dir.path().join("v.csv");
        write_edge_csv(&g, fs::File::create(&ep).unwrap()).unwrap();
        write_vertex_csv(&g, fs::File::create(&vp).unwrap()).unwrap();
        let back = load_graph(&ep, Some(&vp), None, &LoadOptions::default()).unwrap().graph;
        prop_assert_eq!(graph_digest(&back), graph_digest(&g));
        prop_assert_eq!(back, g);
    }
}
