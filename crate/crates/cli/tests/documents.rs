use std::path::Path;

use proptest::prelude::*;
use sadic::{Alphabet, Grid, Letter, SequenceSpec, Substitution, SubstitutionSet};
use sadic_cli::{load_pattern, load_system, save_pattern, save_system, CliError, SystemDocument};
use tempfile::TempDir;

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn key_of(err: CliError) -> String {
    match err {
        CliError::Document { key, .. } => key,
        other => panic!("expected a document error, got {other}"),
    }
}

#[test]
fn example_one_loads() {
    let sys = load_system(fixture("ex1.json")).unwrap();
    let b = sys.set.alphabet().letter("b").unwrap();
    let img = sys.set.member(0).image(b);
    assert_eq!(sys.set.alphabet().format_inline(img), "oo/bo");
    assert_eq!(sys.sequence, SequenceSpec::constant("s"));
}

#[test]
fn fixtures_are_in_canonical_form() {
    for name in ["ex1.json", "ex3.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let doc = SystemDocument::from_json(&text).unwrap();
        let sys = doc.to_system().unwrap();
        let again = SystemDocument::from_system(&sys.set, &sys.sequence).unwrap();
        assert_eq!(again, doc);
    }
}

#[test]
fn validation_errors_name_the_key() {
    let doc = |body: &str| {
        SystemDocument::from_json(body)
            .unwrap()
            .to_system()
            .unwrap_err()
    };
    let ragged =
        doc(r#"{"alphabet":["o","b"],"substitutions":{"s":{"o":["oo","o"],"b":["oo","bo"]}}}"#);
    assert!(ragged.to_string().contains("ragged"));
    assert_eq!(key_of(ragged), "substitutions.s.o[1]");

    let unknown =
        doc(r#"{"alphabet":["o","b"],"substitutions":{"s":{"o":["oo","ox"],"b":["oo","bo"]}}}"#);
    assert_eq!(key_of(unknown), "substitutions.s.o[1]");

    let missing = doc(r#"{"alphabet":["o","b"],"substitutions":{"s":{"o":["oo","oo"]}}}"#);
    assert_eq!(key_of(missing), "substitutions.s");

    let degenerate = doc(r#"{"alphabet":["o","b"],"substitutions":{"s":{"o":["oo"],"b":["bo"]}}}"#);
    assert_eq!(key_of(degenerate), "substitutions.s");

    let allowed = SystemDocument::from_json(
        r#"{"alphabet":["o","b"],"substitutions":{"s":{"o":["oo"],"b":["bo"]}},"flags":{"non_degenerate":false}}"#,
    )
    .unwrap();
    assert!(allowed.to_system().is_ok());

    let bad_seq = doc(
        r#"{"alphabet":["o","b"],"substitutions":{"s":{"o":["oo","oo"],"b":["oo","bo"]}},"sequence":{"prefix":["t"],"period":["s"]}}"#,
    );
    assert_eq!(key_of(bad_seq), "sequence.prefix[0]");

    assert!(matches!(
        SystemDocument::from_json(r#"{"alphabet":["o"],"substitutions":{},"extra":1}"#),
        Err(CliError::Json(_))
    ));
}

#[test]
fn pattern_files_round_trip() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("p.txt");
    let ab = Alphabet::from_glyphs("ob").unwrap();
    let p = ab.parse_pattern("obb/boo").unwrap();
    save_pattern(&path, &ab, &p).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "obb\nboo\n");
    assert_eq!(load_pattern(&path, &ab).unwrap(), p);
}

fn arb_system() -> impl Strategy<Value = (SubstitutionSet, SequenceSpec)> {
    (2usize..4, 1usize..4, any::<bool>()).prop_flat_map(|(letters, members, non_degenerate)| {
        let lo = if non_degenerate { 2 } else { 1 };
        let image = (lo..4usize, lo..4usize).prop_flat_map(move |(w, h)| {
            prop::collection::vec(0..letters, w * h).prop_map(move |c| (w, h, c))
        });
        let sub = prop::collection::vec(image, letters);
        (
            prop::collection::vec(sub, members),
            prop::collection::vec(0..members, 0..3),
            prop::collection::vec(0..members, 1..3),
        )
            .prop_map(move |(subs, prefix, period)| {
                let alphabet = Alphabet::new((0..letters).map(|i| ["o", "b", "c"][i])).unwrap();
                let members = subs
                    .into_iter()
                    .enumerate()
                    .map(|(m, images)| {
                        let images = images
                            .into_iter()
                            .map(|(w, h, cells)| {
                                Grid::new(w, h, cells.into_iter().map(Letter::new).collect())
                                    .unwrap()
                            })
                            .collect();
                        Substitution::allowing_degenerate(format!("s{m}"), images).unwrap()
                    })
                    .collect();
                let set = SubstitutionSet::with_flags(alphabet, members, non_degenerate).unwrap();
                let name = |i: usize| format!("s{i}");
                let seq = SequenceSpec::new(
                    prefix.into_iter().map(name).collect(),
                    period.into_iter().map(name).collect(),
                )
                .unwrap();
                (set, seq)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn load_inverts_save((set, seq) in arb_system()) {
        let dir = TempDir::new().unwrap();
        let path = dir.path().join("system.json");
        save_system(&path, &set, &seq).unwrap();
        let loaded = load_system(&path).unwrap();
        prop_assert_eq!(loaded.set.alphabet(), set.alphabet());
        prop_assert_eq!(loaded.set.non_degenerate(), set.non_degenerate());
        prop_assert_eq!(loaded.set.members(), set.members());
        prop_assert_eq!(&loaded.sequence, &seq);
        let doc = SystemDocument::from_system(&set, &seq).unwrap();
        prop_assert_eq!(SystemDocument::from_json(&doc.to_json()).unwrap(), doc);
    }
}
