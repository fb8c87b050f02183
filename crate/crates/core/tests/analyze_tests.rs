mod common;

use kglab::analyze::{compare_corpora, degree_stats, distribution_correlation, property_distribution, symmetry_gap};
use kglab::graph::{parse_graph_str, parse_tbox_str};
use kglab::materialize::{apply_symmetric, materialize};
use kglab::pipeline::{cmd_compare, cmd_materialize, csv_path_for, parse_key_values};
use kglab::walk::WalkConfig;
use proptest::prelude::*;

fn seqs(lines: &[&str]) -> Vec<Vec<String>> {
    lines.iter().map(|l| l.split(' ').map(str::to_owned).collect()).collect()
}

#[test]
fn planted_seventy_thirty_split() {
    let mut lines = Vec::new();
    for i in 0..10 {
        // 7 p-tokens and 3 q-tokens per group of walks
        lines.push(if i < 7 { "a p b" } else { "a q b" });
    }
    let d = property_distribution(&seqs(&lines));
    assert_eq!(d.total, 10);
    assert!((d.frequency("p") - 0.7).abs() < 1e-12);
    assert!((d.frequency("q") - 0.3).abs() < 1e-12);
    assert_eq!(d.frequency("missing"), 0.0);
}

#[test]
fn scaled_symmetry_gap() {
    let mut g = parse_graph_str(&common::symmetry_fixture(98, 181)).unwrap();
    let gap = symmetry_gap(&g, "http://example.org/spouse").unwrap();
    assert_eq!(gap.bidirectional_pairs, 98);
    assert_eq!(gap.one_directional, 181);
    assert_eq!(gap.completion_delta, 181);
    let tbox = parse_tbox_str(
        &format!("<http://example.org/spouse> <{}> <{}> .", common::TYPE, common::SYMMETRIC),
        &mut g,
    )
    .unwrap();
    assert_eq!(apply_symmetric(&g, &tbox).len(), 181);
    let (closed, _) = materialize(g, &tbox);
    let after = symmetry_gap(&closed, "http://example.org/spouse").unwrap();
    assert_eq!(after.one_directional, 0);
    assert_eq!(after.bidirectional_pairs, 98 + 181);
}

#[test]
fn degree_statistics() {
    let g = parse_graph_str("<a> <p> <b> .\n<a> <q> <c> .\n<b> <p> <c> .\n").unwrap();
    let all = degree_stats(&g, None, None).unwrap();
    let d: Vec<usize> = all.degrees.iter().map(|x| x.1).collect();
    assert_eq!(d, vec![2, 1, 0]);
    assert_eq!(all.max, 2);
    let p_only = degree_stats(&g, None, Some("p")).unwrap();
    let d: Vec<usize> = p_only.degrees.iter().map(|x| x.1).collect();
    assert_eq!(d, vec![1, 1, 0]);
}

#[test]
fn anatomy_compare_raises_is_part_of() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let enriched = dir.path().join("materialized.nt");
    cmd_materialize(
        &fixtures.join("anatomy.nt"),
        Some(&fixtures.join("anatomy_tbox.nt")),
        &enriched,
        &dir.path().join("report.txt"),
    )
    .unwrap();
    let out = dir.path().join("compare.txt");
    let cfg = WalkConfig {
        walks_per_node: 50,
        depth: 4,
        seed: 3,
    };
    let cmp = cmd_compare(&fixtures.join("anatomy.nt"), &enriched, cfg, 5, &out).unwrap();
    let part_of = "http://dbpedia.org/ontology/isPartOf";
    let orig = cmp.aligned.iter().find(|a| a.0 == part_of).unwrap();
    assert!(orig.2 > orig.1);
    assert!(cmp.top_enriched.iter().any(|(p, _)| p == part_of));
    assert!(cmp.correlation < 1.0);

    let kv = parse_key_values(&std::fs::read_to_string(&out).unwrap());
    for key in ["correlation", "top3_share_original", "top3_share_enriched"] {
        assert!(kv[key].parse::<f64>().is_ok(), "{key}");
    }
    let csv = std::fs::read_to_string(csv_path_for(&out)).unwrap();
    assert!(csv.starts_with("predicate,freq_original,freq_enriched\n"));
}

proptest! {
    #[test]
    fn self_correlation_is_one(walks in prop::collection::vec(prop::collection::vec(0u8..5, 1..5), 2..20)) {
        let lines: Vec<Vec<String>> = walks
            .iter()
            .map(|ps| {
                let mut t = vec!["s".to_owned()];
                for p in ps {
                    t.push(format!("p{p}"));
                    t.push("o".to_owned());
                }
                t
            })
            .collect();
        let d = property_distribution(&lines);
        if let Ok(r) = distribution_correlation(&d, &d) {
            prop_assert_eq!(r, 1.0);
            let cmp = compare_corpora(&lines, &lines, 3).unwrap();
            prop_assert_eq!(cmp.correlation, 1.0);
        }
    }
}
