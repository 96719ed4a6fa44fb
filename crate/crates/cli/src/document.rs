use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use sadic::{Alphabet, Grid, RectPattern, SequenceSpec, Substitution, SubstitutionSet};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// The on-disk form of a substitution system.
///
/// ```json
/// {
///   "alphabet": ["o", "b"],
///   "substitutions": { "s": { "o": ["oo", "oo"], "b": ["oo", "bo"] } },
///   "sequence": { "prefix": [], "period": ["s"] },
///   "flags": { "non_degenerate": true }
/// }
/// ```
///
/// Image rows are listed from the top down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub alphabet: Vec<String>,
    pub substitutions: IndexMap<String, IndexMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceDocument>,
    #[serde(default)]
    pub flags: Flags,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDocument {
    #[serde(default)]
    pub prefix: Vec<String>,
    pub period: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default = "yes")]
    pub non_degenerate: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            non_degenerate: true,
        }
    }
}

fn yes() -> bool {
    true
}

/// A validated system: the set and the sequence to iterate.
#[derive(Clone, Debug)]
pub struct System {
    pub set: SubstitutionSet,
    pub sequence: SequenceSpec,
}

impl SystemDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("documents always serialize");
        out.push('\n');
        out
    }

    /// Validates the document. Errors name the key they concern.
    pub fn to_system(&self) -> Result<System> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())
            .map_err(|e| CliError::document("alphabet", e))?;
        if self.substitutions.is_empty() {
            return Err(CliError::document("substitutions", "no substitutions"));
        }
        let mut members = Vec::with_capacity(self.substitutions.len());
        for (name, images) in &self.substitutions {
            let key = format!("substitutions.{name}");
            for glyph in images.keys() {
                if alphabet.letter(glyph).is_none() {
                    return Err(CliError::document(
                        format!("{key}.{glyph}"),
                        format!("`{glyph}` is not in the alphabet"),
                    ));
                }
            }
            let images = alphabet
                .symbols()
                .iter()
                .map(|glyph| {
                    let rows = images.get(glyph).ok_or_else(|| {
                        CliError::document(&key, format!("no image for `{glyph}`"))
                    })?;
                    parse_image(&alphabet, rows, &format!("{key}.{glyph}"))
                })
                .collect::<Result<Vec<_>>>()?;
            let s = Substitution::allowing_degenerate(name.clone(), images)
                .map_err(|e| CliError::document(&key, e))?;
            members.push(s);
        }
        let set = SubstitutionSet::with_flags(alphabet, members, self.flags.non_degenerate)
            .map_err(|e| match &e {
                sadic::Error::InvalidSubstitution { name, .. } => {
                    CliError::document(format!("substitutions.{name}"), e)
                }
                _ => CliError::document("substitutions", e),
            })?;
        let sequence = match &self.sequence {
            Some(doc) => SequenceSpec::new(doc.prefix.clone(), doc.period.clone())
                .map_err(|e| CliError::document("sequence.period", e))?,
            None => SequenceSpec::constant(set.member(0).name()),
        };
        if let Some(doc) = &self.sequence {
            for (field, names) in [("prefix", &doc.prefix), ("period", &doc.period)] {
                for (i, name) in names.iter().enumerate() {
                    if set.index_of(name).is_err() {
                        return Err(CliError::document(
                            format!("sequence.{field}[{i}]"),
                            format!("unknown substitution `{name}`"),
                        ));
                    }
                }
            }
        }
        Ok(System { set, sequence })
    }

    /// The canonical document of a system. Sequences given by a rule have
    /// no document form.
    pub fn from_system(set: &SubstitutionSet, sequence: &SequenceSpec) -> Result<Self> {
        if sequence.has_rule() {
            return Err(CliError::Usage(
                "a rule-based sequence cannot be written to a document".into(),
            ));
        }
        let alphabet = set.alphabet();
        let substitutions = set
            .members()
            .iter()
            .map(|s| {
                let images = alphabet
                    .letters()
                    .map(|a| {
                        let text = alphabet.format_pattern(s.image(a));
                        (
                            alphabet.symbol(a).to_string(),
                            text.lines().map(String::from).collect(),
                        )
                    })
                    .collect();
                (s.name().to_string(), images)
            })
            .collect();
        Ok(SystemDocument {
            alphabet: alphabet.symbols().to_vec(),
            substitutions,
            sequence: Some(SequenceDocument {
                prefix: sequence.prefix().to_vec(),
                period: sequence.period().to_vec(),
            }),
            flags: Flags {
                non_degenerate: set.non_degenerate(),
            },
        })
    }
}

fn parse_image(alphabet: &Alphabet, rows: &[String], key: &str) -> Result<RectPattern> {
    if rows.is_empty() {
        return Err(CliError::document(key, "image has no rows"));
    }
    let mut parsed: Vec<Vec<sadic::Letter>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.contains('/') || row.contains('\n') {
            return Err(CliError::document(
                format!("{key}[{i}]"),
                "a row may not contain `/` or a newline",
            ));
        }
        let p = alphabet
            .parse_pattern(row)
            .map_err(|e| CliError::document(format!("{key}[{i}]"), e))?;
        let letters = p.row(0).to_vec();
        if let Some(first) = parsed.first() {
            if first.len() != letters.len() {
                return Err(CliError::document(
                    format!("{key}[{i}]"),
                    format!(
                        "ragged rows: row has {} cells, row 0 has {}",
                        letters.len(),
                        first.len()
                    ),
                ));
            }
        }
        parsed.push(letters);
    }
    Grid::from_rows_top_down(parsed).map_err(|e| CliError::document(key, e))
}

pub fn load_system(path: impl AsRef<Path>) -> Result<System> {
    load_document(path)?.to_system()
}

pub fn load_document(path: impl AsRef<Path>) -> Result<SystemDocument> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    SystemDocument::from_json(&text)
}

pub fn save_system(
    path: impl AsRef<Path>,
    set: &SubstitutionSet,
    sequence: &SequenceSpec,
) -> Result<()> {
    let path = path.as_ref();
    let doc = SystemDocument::from_system(set, sequence)?;
    fs::write(path, doc.to_json()).map_err(|e| CliError::io(path, e))
}

/// Reads a pattern file: glyph rows from the top down, one per line.
pub fn load_pattern(path: impl AsRef<Path>, alphabet: &Alphabet) -> Result<RectPattern> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(alphabet.parse_pattern(&text)?)
}

pub fn save_pattern(path: impl AsRef<Path>, alphabet: &Alphabet, p: &RectPattern) -> Result<()> {
    let path = path.as_ref();
    let mut text = alphabet.format_pattern(p);
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
