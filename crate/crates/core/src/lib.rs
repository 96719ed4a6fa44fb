pub mod apply;
pub mod decoration;
pub mod derivation;
pub mod error;
pub mod grid;
pub mod language;
pub mod pattern;
pub mod property_a;
pub mod substitution;

pub use apply::{
    apply_nonuniform, apply_uniform, check_compat_nonuniform, check_compat_uniform,
    compatible_substitution_patterns, compose, composition_witness, for_each_compatible,
    for_each_layout, iterate, iterate_pattern, size_profile, Layout,
};
pub use decoration::{
    history_word, lift_set, lift_substitution, DecoratedLetter, DecoratedSystem, HistoryWord,
    Projection, LIFT_MARKER,
};
pub use derivation::{
    desubstitute, parse_with, recover_sequence, unique_derivation_check, AmbiguityReport,
    ParseMode, ParseResult, Recovery, UniqueDerivation,
};
pub use error::{Error, Result};
pub use grid::{phi, Axis, AxisProfile, SizeProfile};
pub use language::{
    global_language, local_language, local_language_set, row_word, s_patterns, s_patterns_up_to,
    windows_of, GlobalSource, LanguageMode, LanguageQuery, WindowSet,
};
pub use pattern::{Alphabet, Grid, Letter, RectPattern, Window};
pub use property_a::{
    bounded_property_a, sufficient_property_a, verify_witness, PropertyAStatus, PropertyAVerdict,
    PropertyAWitness,
};
pub use substitution::{SequenceSpec, Substitution, SubstitutionPattern, SubstitutionSet};
