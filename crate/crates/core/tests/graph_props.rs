use std::collections::BTreeSet;

use kglab::graph::{parse_graph_str, serialize_graph_string, GraphError};
use proptest::prelude::*;

fn triple_lines() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(
        (0u8..12, 0u8..3, 0u8..12, any::<bool>()).prop_map(|(s, p, o, literal)| {
            let object = if literal {
                format!("\"value {o}\"")
            } else {
                format!("<http://example.org/e{o}>")
            };
            format!("<http://example.org/e{s}> <http://example.org/p{p}> {object} .")
        }),
        1..40,
    )
}

proptest! {
    #[test]
    fn serialize_then_parse_round_trips(lines in triple_lines()) {
        let g = parse_graph_str(&lines.join("\n")).unwrap();
        let again = parse_graph_str(&serialize_graph_string(&g)).unwrap();
        prop_assert_eq!(again.iri_triples(), g.iri_triples());
        prop_assert_eq!(again.literals().len(), g.literals().len());
        prop_assert_eq!(serialize_graph_string(&again), serialize_graph_string(&g));
    }

    #[test]
    fn line_order_is_irrelevant(lines in triple_lines(), seed in any::<u64>()) {
        let mut shuffled = lines.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        let a = parse_graph_str(&lines.join("\n")).unwrap();
        let b = parse_graph_str(&shuffled.join("\n")).unwrap();
        prop_assert_eq!(a.fingerprint(), b.fingerprint());
        prop_assert_eq!(serialize_graph_string(&a), serialize_graph_string(&b));
        for e in 0..a.entity_count() as u32 {
            let id = kglab::graph::EntityId(e);
            prop_assert_eq!(a.out_edges(id), b.out_edges(id));
        }
    }

    #[test]
    fn resource_triples_are_deduplicated(lines in triple_lines()) {
        let g = parse_graph_str(&lines.join("\n")).unwrap();
        let distinct: BTreeSet<&String> = lines.iter().filter(|l| !l.contains('"')).collect();
        prop_assert_eq!(g.triple_count(), distinct.len());
    }
}

#[test]
fn malformed_line_reports_position() {
    let err = parse_graph_str(include_str!("fixtures/malformed_line7.nt")).unwrap_err();
    match err {
        GraphError::MalformedTriple { line, .. } => assert_eq!(line, 7),
        other => panic!("unexpected error {other}"),
    }
}
