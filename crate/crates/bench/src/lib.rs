//! Shared systems for the benchmarks.

use sadic::{Alphabet, SequenceSpec, Substitution, SubstitutionSet};

fn sub(alphabet: &Alphabet, name: &str, images: &[&str]) -> Substitution {
    let images = images
        .iter()
        .map(|t| alphabet.parse_pattern(t).expect("valid image"))
        .collect();
    Substitution::new(name, images).expect("valid substitution")
}

/// The one-substitution system `o -> oo/oo`, `b -> oo/bo`.
pub fn corner_system() -> (SubstitutionSet, SequenceSpec) {
    let ab = Alphabet::from_glyphs("ob").expect("valid alphabet");
    let s = sub(&ab, "s", &["oo/oo", "oo/bo"]);
    let set = SubstitutionSet::singleton(ab, s).expect("valid set");
    (set, SequenceSpec::constant("s"))
}

/// Four substitutions with mixed extents, iterated along `d, c, a, a, ...`.
pub fn mixed_system() -> (SubstitutionSet, SequenceSpec) {
    let ab = Alphabet::from_glyphs("ob").expect("valid alphabet");
    let members = vec![
        sub(&ab, "a", &["oo/oo", "oo/bo"]),
        sub(&ab, "b", &["obo/obo", "ooo/boo"]),
        sub(&ab, "c", &["oo/bo/ob", "oo/ob/bb"]),
        sub(&ab, "d", &["bbb/bbb/ooo", "ooo/ooo/bbb"]),
    ];
    let set = SubstitutionSet::new(ab, members).expect("valid set");
    let seq =
        SequenceSpec::new(vec!["d".into(), "c".into()], vec!["a".into()]).expect("valid sequence");
    (set, seq)
}
