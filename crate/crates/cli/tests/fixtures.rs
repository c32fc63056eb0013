//! The JSON files under `fixtures/` agree with the library's bundled pairs.
//! Set `LOGCY3_BLESS=1` to rewrite them.

use std::path::PathBuf;

use logcy3::fixtures;
use logcy3::pair::PairSpec;
use logcy3::torelli::Correspondence;
use logcy3::pair::LogCY3Pair;
use logcy3_cli::document::{CorrespondenceDocument, PairDocument};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn pairs() -> Vec<(&'static str, PairSpec)> {
    let mut out = fixtures::bundled_pairs();
    out.push(("p3-line", fixtures::p3_line()));
    out.push(("p3-conic-translated", fixtures::p3_conic_translated()));
    out.push(("p3-conic-perturbed", fixtures::p3_conic_perturbed()));
    out
}

fn expected() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> =
        pairs().into_iter().map(|(n, s)| (format!("{n}.json"), PairDocument::from_spec(&s).to_json())).collect();
    let conic = LogCY3Pair::new(fixtures::p3_conic()).unwrap();
    out.push((
        "p3-conic.corr.json".into(),
        CorrespondenceDocument::new(Correspondence::identity(&conic)).to_json(),
    ));
    let two = LogCY3Pair::new(fixtures::p3_two_points()).unwrap();
    let mut swap = Correspondence::identity(&two);
    swap.steps = vec![1, 0];
    out.push(("p3-two-points-swap.corr.json".into(), CorrespondenceDocument::new(swap).to_json()));
    out
}

#[test]
fn fixture_files_match_library() {
    let bless = std::env::var("LOGCY3_BLESS").is_ok();
    for (name, text) in expected() {
        let path = dir().join(&name);
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, text, "{name} is stale; rerun with LOGCY3_BLESS=1");
    }
}

#[test]
fn pair_files_parse_back() {
    for (name, spec) in pairs() {
        let text = std::fs::read_to_string(dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(PairDocument::parse(&text).unwrap().to_spec().unwrap(), spec, "{name}");
    }
}
