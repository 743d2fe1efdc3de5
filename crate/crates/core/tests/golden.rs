use std::fs;
use std::path::Path;

use stringc_core::families::{catalog_instances, instantiate_family, FamilyId};
use stringc_core::{parse_graph, PRGraph};

/// `t7-25_n14_x2.prg` → (T7#25, 14, Some(2)).
fn parse_name(stem: &str) -> (FamilyId, usize, Option<usize>) {
    let mut parts = stem.split('_');
    let id: FamilyId = parts.next().unwrap().replacen('-', "#", 1).to_uppercase().parse().unwrap();
    let n = parts.next().unwrap().strip_prefix('n').unwrap().parse().unwrap();
    let p = parts.next().map(|s| s[1..].parse().unwrap());
    (id, n, p)
}

fn golden_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"))
}

#[test]
fn instances_match_golden_files() {
    let mut seen = 0;
    for entry in fs::read_dir(golden_dir()).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap();
        let (id, n, p) = parse_name(stem);
        let g = instantiate_family(id, n, p).unwrap();
        let want = fs::read_to_string(&path).unwrap();
        match path.extension().unwrap().to_str().unwrap() {
            "prg" => {
                assert_eq!(g.to_dsl(), want, "{stem}");
                let parsed = parse_graph(&want).unwrap();
                assert_eq!(parsed, g, "{stem}");
                assert_eq!(PRGraph::from_sggi(&parsed.to_sggi().unwrap()), parsed, "{stem}");
            }
            "dot" => assert_eq!(g.to_dot(), want, "{stem}"),
            other => panic!("unexpected golden file {other}"),
        }
        seen += 1;
    }
    assert_eq!(seen, 110);
}

#[test]
fn catalog_is_covered() {
    for (id, p) in catalog_instances(14).0 {
        let mut stem = format!("{}_n14", id.to_string().to_lowercase().replace('#', "-"));
        if let Some(v) = p {
            let key = if id.to_string().starts_with("T7") { 'x' } else { 'i' };
            stem.push_str(&format!("_{key}{v}"));
        }
        assert!(golden_dir().join(format!("{stem}.prg")).exists(), "{stem}");
        assert!(golden_dir().join(format!("{stem}.dot")).exists(), "{stem}");
    }
}
