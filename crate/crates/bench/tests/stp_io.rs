use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steiner_bench::{
    load_best_known, parse_stp, write_result, write_stp, BestKnown, RunRecord, Status, StpErrorKind,
};
use steiner_core::{generate::RandomInstance, Edge};

const PATH_DOC: &str = "33D32945 STP File, STP Format Version 1.0
SECTION Graph
Nodes 3
Edges 2
E 1 2 1
E 2 3 1
END
SECTION Terminals
Terminals 2
T 1
T 3
END
EOF
";

#[test]
fn minimal_document_is_the_path() {
    let inst = parse_stp("path", PATH_DOC).unwrap();
    assert_eq!(inst.graph.node_count(), 3);
    assert_eq!(inst.graph.edges(), &[Edge::new(0, 1, 1), Edge::new(1, 2, 1)]);
    assert_eq!(inst.terminals, vec![0, 2]);
    assert_eq!(inst.name, "path");
}

fn err(doc: &str) -> (usize, StpErrorKind) {
    let e = parse_stp("x", doc).unwrap_err();
    (e.line, e.kind)
}

#[test]
fn diagnostics_carry_line_numbers() {
    let zero = PATH_DOC.replace("Terminals 2\nT 1\nT 3\n", "Terminals 0\n");
    assert_eq!(err(&zero), (9, StpErrorKind::EmptyTerminals));
    assert!(parse_stp("x", &zero).unwrap_err().to_string().contains("empty terminal set"));

    let bad_node = PATH_DOC.replace("E 1 2 1", "E 0 2 1");
    assert_eq!(err(&bad_node), (5, StpErrorKind::NodeOutOfRange(0)));
    assert!(parse_stp("x", &bad_node).unwrap_err().to_string().contains("node index out of range"));
    assert_eq!(err(&PATH_DOC.replace("E 2 3 1", "E 2 4 1")), (6, StpErrorKind::NodeOutOfRange(4)));

    assert_eq!(err(&PATH_DOC.replace("33D32945", "12345678")), (1, StpErrorKind::MissingHeader));
    assert_eq!(err(""), (0, StpErrorKind::MissingHeader));
    assert_eq!(err(&PATH_DOC.replace("E 2 3 1", "E 2 3 1.5")), (6, StpErrorKind::BadNumber("1.5".into())));
    assert_eq!(
        err(&PATH_DOC.replace("Edges 2", "Edges 3")),
        (7, StpErrorKind::CountMismatch { what: "edges", declared: 3, found: 2 })
    );
    assert_eq!(
        err(&PATH_DOC.replace("Terminals 2", "Terminals 1")),
        (12, StpErrorKind::CountMismatch { what: "terminals", declared: 1, found: 2 })
    );
    assert_eq!(err(&PATH_DOC.replace("E 1 2 1", "A 1 2 1")), (5, StpErrorKind::ArcsUnsupported));

    let no_terms = "33D32945 STP File\nSECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\nEND\nEOF\n";
    assert_eq!(err(no_terms), (0, StpErrorKind::MissingSection("Terminals")));
    let no_graph = "33D32945 STP File\nSECTION Comment\nName \"x\"\nEND\nEOF\n";
    assert_eq!(err(no_graph), (0, StpErrorKind::MissingSection("Graph")));
}

#[test]
fn keywords_ignore_case_and_extra_sections_are_skipped() {
    let doc = "33d32945 stp file, stp format version 1.0
section comment
name \"odd\"
end
section graph
nodes 3
edges 3
e 1 2 5
e 2 1 3
e 2 3 1
end
section terminals
terminals 2
t 1
t 3
end
section coordinates
dd 1 0 0
end
eof
";
    let inst = parse_stp("odd", doc).unwrap();
    // parallel edges keep the cheaper weight
    assert_eq!(inst.graph.weight(0, 1), Some(3));
    assert_eq!(inst.graph.edge_count(), 2);
}

#[test]
fn disconnected_graphs_are_trimmed_or_rejected() {
    let trimmed = PATH_DOC.replace("Nodes 3", "Nodes 5");
    let inst = parse_stp("t", &trimmed).unwrap();
    assert_eq!(inst.graph.node_count(), 3);

    let split = PATH_DOC.replace("Nodes 3", "Nodes 4").replace("T 3", "T 4");
    assert!(matches!(err(&split).1, StpErrorKind::Instance(_)));
}

proptest! {
    #[test]
    fn write_then_parse_round_trips(seed in any::<u64>(), n in 1usize..30, t in 1usize..8, d in 0.0f64..0.5) {
        let spec = RandomInstance { nodes: n, terminals: t, max_weight: 50, density: d };
        let inst = spec.sample(&mut ChaCha8Rng::seed_from_u64(seed), 0);
        let back = parse_stp(&inst.name, &write_stp(&inst)).unwrap();
        prop_assert_eq!(back.graph.node_count(), inst.graph.node_count());
        let mut a = inst.graph.edges().to_vec();
        let mut b = back.graph.edges().to_vec();
        a.sort_by_key(|e| (e.u, e.v));
        b.sort_by_key(|e| (e.u, e.v));
        prop_assert_eq!(a, b);
        prop_assert_eq!(back.terminals, inst.terminals);
    }
}

#[test]
fn best_known_table() {
    let t = load_best_known("b01,Ls,82").unwrap();
    assert_eq!(t.get("b01"), Some(&BestKnown { cost: 82, class: "Ls".into() }));
    assert!(load_best_known("").unwrap().is_empty());
    assert!(load_best_known("name,class,cost\nb01,Ls,82\nb01,Ls,82\n").is_err());
    assert!(load_best_known("b01,Ls,0").is_err());
    assert!(load_best_known("b01,Ls").is_err());

    let bundled = load_best_known(include_str!("../data/steinlib/B.best.csv")).unwrap();
    assert_eq!(bundled.len(), 18);
    assert_eq!(bundled.get("b18").unwrap().cost, 218);
    assert!(bundled.iter().all(|(_, b)| b.class == "Ls"));
}

#[test]
fn result_rows() {
    let mut r = RunRecord::new("b01", "Ls", "greedy").with_cost(84, Some(82));
    r.seconds = 0.002;
    assert_eq!(write_result(&r), "b01,greedy,84,0.002,ok");
    let mut t = RunRecord::new("b01", "Ls", "dw");
    t.status = Status::Timeout;
    t.seconds = 600.0;
    assert_eq!(write_result(&t), "b01,dw,,600.000,timeout");
}
