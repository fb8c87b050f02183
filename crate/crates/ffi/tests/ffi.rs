use std::ffi::{c_char, CStr, CString};
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use kglab_ffi::*;

const GRAPH: &str = "<http://x/a> <http://x/partOf> <http://x/b> .\n\
<http://x/b> <http://x/partOf> <http://x/c> .\n\
<http://x/c> <http://x/near> <http://x/d> .\n\
<http://x/d> <http://x/near> <http://x/a> .\n";
const TBOX: &str = "<http://x/partOf> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://www.w3.org/2002/07/owl#TransitiveProperty> .\n";

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = kgl_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    kgl_string_free(p);
    s
}

unsafe fn parse(text: &str) -> *mut KglGraph {
    let mut g = ptr::null_mut();
    assert_eq!(kgl_graph_parse(cstr(text).as_ptr(), &mut g), KglStatus::Ok);
    g
}

#[test]
fn graph_counts_materialize_and_serialize() {
    unsafe {
        let g = parse(GRAPH);
        assert_eq!(kgl_graph_entity_count(g), 4);
        assert_eq!(kgl_graph_predicate_count(g), 2);
        assert_eq!(kgl_graph_triple_count(g), 4);
        assert_eq!(kgl_graph_load_tbox(g, cstr(TBOX).as_ptr()), KglStatus::Ok);

        let mut summary = KglMaterializeSummary::default();
        assert_eq!(kgl_graph_materialize(g, &mut summary), KglStatus::Ok);
        assert_eq!(summary.added_transitive, 1);
        assert_eq!(summary.added_total, 1);
        assert_eq!(summary.total_before, 4);
        assert_eq!(summary.total_after, 5);
        assert_eq!(summary.iterations, 1);

        let mut text = ptr::null_mut();
        assert_eq!(kgl_graph_serialize(g, &mut text), KglStatus::Ok);
        let text = take_string(text);
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("<http://x/a> <http://x/partOf> <http://x/c> ."));

        let g2 = parse(&text);
        assert_eq!(kgl_graph_triple_count(g2), 5);
        kgl_graph_free(g2);
        kgl_graph_free(g);
    }
}

#[test]
fn parse_error_reports_line() {
    unsafe {
        let mut g = ptr::dangling_mut::<KglGraph>();
        let bad = format!("{GRAPH}<http://x/a> <http://x/p> oops .\n");
        assert_eq!(kgl_graph_parse(cstr(&bad).as_ptr(), &mut g), KglStatus::ParseError);
        assert!(g.is_null());
        assert!(last_error().contains("line 5"), "{}", last_error());
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(kgl_graph_parse(ptr::null(), &mut g), KglStatus::NullArgument);
        assert!(last_error().contains("text"));
        assert_eq!(kgl_graph_parse(cstr(GRAPH).as_ptr(), ptr::null_mut()), KglStatus::NullArgument);
        assert_eq!(kgl_graph_entity_count(ptr::null()), 0);
        let mut out = 0.0;
        assert_eq!(kgl_spearman(ptr::null(), ptr::null(), 0, &mut out), KglStatus::NullArgument);
        kgl_graph_free(ptr::null_mut());
        kgl_string_free(ptr::null_mut());
    }
}

#[test]
fn invalid_utf8_is_rejected() {
    unsafe {
        let bytes = [0xffu8, 0xfe, 0];
        let mut g = ptr::null_mut();
        assert_eq!(kgl_graph_parse(bytes.as_ptr().cast(), &mut g), KglStatus::InvalidUtf8);
    }
}

#[test]
fn walks_train_and_query_embeddings() {
    unsafe {
        let g = parse(GRAPH);
        let mut corpus = ptr::null_mut();
        let wc = KglWalkConfig { walks_per_node: 6, depth: 3, seed: 9 };
        assert_eq!(kgl_walks_generate(g, wc, &mut corpus), KglStatus::Ok);
        assert_eq!(kgl_corpus_len(corpus), 4 * 6);
        let mut text = ptr::null_mut();
        assert_eq!(kgl_corpus_text(corpus, &mut text), KglStatus::Ok);
        let text = take_string(text);
        assert!(text.starts_with("# walks=6 depth=3 seed=9"));
        assert_eq!(text.lines().count(), 1 + 24);

        let mut again = ptr::null_mut();
        assert_eq!(kgl_walks_generate(g, wc, &mut again), KglStatus::Ok);
        let mut text2 = ptr::null_mut();
        assert_eq!(kgl_corpus_text(again, &mut text2), KglStatus::Ok);
        assert_eq!(take_string(text2), text);
        kgl_corpus_free(again);

        let mut cfg = kgl_train_config_default();
        cfg.dim = 6;
        cfg.epochs = 3;
        cfg.negatives = 3;
        cfg.deterministic = 1;
        let mut emb = ptr::null_mut();
        assert_eq!(kgl_train(corpus, &cfg, &mut emb), KglStatus::Ok);
        assert_eq!(kgl_embedding_dim(emb), 6);
        assert_eq!(kgl_embedding_len(emb), 6);

        let a = cstr("http://x/a");
        let b = cstr("http://x/b");
        let mut va = [0.0; 6];
        let mut vb = [0.0; 6];
        assert_eq!(kgl_embedding_vector(emb, a.as_ptr(), va.as_mut_ptr(), 6), KglStatus::Ok);
        assert_eq!(kgl_embedding_vector(emb, b.as_ptr(), vb.as_mut_ptr(), 6), KglStatus::Ok);
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        let na = va.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb = vb.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut cos = 0.0;
        assert_eq!(kgl_embedding_cosine(emb, a.as_ptr(), b.as_ptr(), &mut cos), KglStatus::Ok);
        assert!((cos - dot / (na * nb)).abs() < 1e-12);

        assert_eq!(kgl_embedding_vector(emb, a.as_ptr(), va.as_mut_ptr(), 5), KglStatus::InvalidArgument);
        let zz = cstr("http://x/zz");
        assert_eq!(kgl_embedding_cosine(emb, a.as_ptr(), zz.as_ptr(), &mut cos), KglStatus::UnknownToken);
        assert!(last_error().contains("zz"));

        let mut etext = ptr::null_mut();
        assert_eq!(kgl_embedding_text(emb, &mut etext), KglStatus::Ok);
        let etext = take_string(etext);
        assert!(etext.starts_with("6 6\n"));
        let mut loaded = ptr::null_mut();
        assert_eq!(kgl_embedding_load(cstr(&etext).as_ptr(), &mut loaded), KglStatus::Ok);
        let mut cos2 = 0.0;
        assert_eq!(kgl_embedding_cosine(loaded, a.as_ptr(), b.as_ptr(), &mut cos2), KglStatus::Ok);
        assert!((cos - cos2).abs() < 1e-12);

        kgl_embedding_free(loaded);
        kgl_embedding_free(emb);
        kgl_corpus_free(corpus);
        kgl_graph_free(g);
    }
}

#[test]
fn walk_and_load_errors() {
    unsafe {
        let g = parse(GRAPH);
        let mut corpus = ptr::null_mut();
        let wc = KglWalkConfig { walks_per_node: 0, depth: 3, seed: 1 };
        assert_eq!(kgl_walks_generate(g, wc, &mut corpus), KglStatus::InvalidArgument);
        assert!(corpus.is_null());
        assert!(last_error().contains("walks per node"));

        let empty = parse("# no triples\n");
        let wc = KglWalkConfig { walks_per_node: 2, depth: 3, seed: 1 };
        assert_eq!(kgl_walks_generate(empty, wc, &mut corpus), KglStatus::EmptyInput);
        kgl_graph_free(empty);

        let mut bad = ptr::null_mut();
        assert_eq!(
            kgl_embedding_load(cstr("2 3\na 1 2\n").as_ptr(), &mut bad),
            KglStatus::ParseError
        );
        kgl_graph_free(g);
    }
}

#[test]
fn spearman_and_harmonic_mean() {
    unsafe {
        let x = [1.0, 2.0, 2.0, 3.0];
        let y = [10.0, 20.0, 30.0, 40.0];
        let mut rho = 0.0;
        assert_eq!(kgl_spearman(x.as_ptr(), y.as_ptr(), 4, &mut rho), KglStatus::Ok);
        // ranks 1, 2.5, 2.5, 4 against 1..4
        assert!((rho - 3.0 / 10f64.sqrt()).abs() < 1e-12);
    }
    assert!((kgl_harmonic_mean(0.5, 1.0) - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(kgl_harmonic_mean(0.5, -0.5), 0.0);
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(kgl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn exported_functions() -> Vec<String> {
    let src = fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    src.lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap().to_owned())
        .collect()
}

#[test]
fn header_declares_every_export() {
    let header = fs::read_to_string(crate_dir().join("include/kglab.h")).unwrap();
    let fns = exported_functions();
    assert!(fns.len() >= 25);
    for f in &fns {
        assert!(header.contains(&format!("{f}(")), "header lacks {f}");
    }
    for t in ["typedef struct KglGraph KglGraph;", "KGL_STATUS_OK = 0", "typedef struct KglTrainConfig"] {
        assert!(header.contains(t), "header lacks {t}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(probe) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    assert!(probe.status.success());
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("kglab_header_check.c");
    fs::write(
        &src,
        "#include \"kglab.h\"\nint main(void) {\n  KglGraph *g = 0;\n  KglStatus s = kgl_graph_parse(\"\", &g);\n  kgl_graph_free(g);\n  return s == KGL_STATUS_OK ? 0 : 1;\n}\n",
    )
    .unwrap();
    let o = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(crate_dir().join("include"))
        .arg(&src)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}
