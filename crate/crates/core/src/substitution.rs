//! Substitutions, finite sets of substitutions and sequences over them.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pattern::{format_rows, split_rows, Alphabet, Grid, Letter, RectPattern};

/// A map from letters to rectangular patterns whose extents may depend on
/// the letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    name: String,
    images: Vec<RectPattern>,
}

impl Substitution {
    /// Builds a non-degenerate substitution: every image is at least 2x2.
    pub fn new(name: impl Into<String>, images: Vec<RectPattern>) -> Result<Self> {
        let s = Substitution::allowing_degenerate(name, images)?;
        if let Some(letter) = s.degenerate_letter() {
            return Err(Error::InvalidSubstitution {
                name: s.name,
                reason: format!("image of letter {} is degenerate", letter.index()),
            });
        }
        Ok(s)
    }

    /// Builds a substitution without the non-degeneracy requirement.
    pub fn allowing_degenerate(name: impl Into<String>, images: Vec<RectPattern>) -> Result<Self> {
        let name = name.into();
        check_name(&name)?;
        if images.is_empty() {
            return Err(Error::InvalidSubstitution {
                name,
                reason: "no images".into(),
            });
        }
        let size = images.len();
        for img in &images {
            if let Some(l) = img.cells().iter().find(|l| l.index() >= size) {
                return Err(Error::AlphabetMismatch {
                    letter: l.index(),
                    size,
                });
            }
        }
        Ok(Substitution { name, images })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of letters the substitution is defined on.
    pub fn alphabet_len(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, a: Letter) -> &RectPattern {
        &self.images[a.index()]
    }

    pub fn images(&self) -> &[RectPattern] {
        &self.images
    }

    /// `(width, height)` of the image of `a`.
    pub fn extents(&self, a: Letter) -> (usize, usize) {
        self.images[a.index()].shape()
    }

    /// The max-index vector `(width - 1, height - 1)` of `s(a)`.
    pub fn k_vector(&self, a: Letter) -> (usize, usize) {
        let (w, h) = self.extents(a);
        (w - 1, h - 1)
    }

    /// True when all images share one support.
    pub fn has_uniform_support(&self) -> bool {
        let first = self.images[0].shape();
        self.images.iter().all(|i| i.shape() == first)
    }

    /// True when all images share one width.
    pub fn has_uniform_width(&self) -> bool {
        let first = self.images[0].width();
        self.images.iter().all(|i| i.width() == first)
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.degenerate_letter().is_none()
    }

    fn degenerate_letter(&self) -> Option<Letter> {
        self.images
            .iter()
            .position(|i| i.width() < 2 || i.height() < 2)
            .map(Letter::new)
    }

    pub fn min_extents(&self) -> (usize, usize) {
        let w = self.images.iter().map(Grid::width).min().unwrap_or(1);
        let h = self.images.iter().map(Grid::height).min().unwrap_or(1);
        (w, h)
    }

    pub fn renamed(&self, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        check_name(&name)?;
        Ok(Substitution {
            name,
            images: self.images.clone(),
        })
    }

    /// Checks the substitution is total over `alphabet` and only uses its letters.
    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<()> {
        if self.images.len() != alphabet.len() {
            return Err(Error::InvalidSubstitution {
                name: self.name.clone(),
                reason: format!(
                    "defines {} images for an alphabet of {} letters",
                    self.images.len(),
                    alphabet.len()
                ),
            });
        }
        self.images
            .iter()
            .try_for_each(|i| alphabet.check_pattern(i))
    }
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || c == '/' || c == ',')
    {
        return Err(Error::InvalidSubstitution {
            name: name.to_string(),
            reason: "names must be non-empty and free of whitespace, `/` and `,`".into(),
        });
    }
    Ok(())
}

/// A rectangular array of substitutions, stored as indices into a
/// [`SubstitutionSet`].
pub type SubstitutionPattern = Grid<usize>;

/// A finite set of substitutions sharing one alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubstitutionSet {
    alphabet: Alphabet,
    members: Vec<Substitution>,
    non_degenerate: bool,
}

impl SubstitutionSet {
    /// A set whose members must all be non-degenerate.
    pub fn new(alphabet: Alphabet, members: Vec<Substitution>) -> Result<Self> {
        SubstitutionSet::with_flags(alphabet, members, true)
    }

    pub fn with_flags(
        alphabet: Alphabet,
        members: Vec<Substitution>,
        non_degenerate: bool,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument(
                "a substitution set needs at least one member".into(),
            ));
        }
        let mut names = HashSet::new();
        for s in &members {
            if !names.insert(s.name()) {
                return Err(Error::InvalidSubstitution {
                    name: s.name().to_string(),
                    reason: "duplicate name".into(),
                });
            }
            s.check_alphabet(&alphabet)?;
            if non_degenerate && !s.is_non_degenerate() {
                return Err(Error::InvalidSubstitution {
                    name: s.name().to_string(),
                    reason: "degenerate image under the non-degenerate flag".into(),
                });
            }
        }
        Ok(SubstitutionSet {
            alphabet,
            members,
            non_degenerate,
        })
    }

    /// A one-member set.
    pub fn singleton(alphabet: Alphabet, s: Substitution) -> Result<Self> {
        SubstitutionSet::new(alphabet, vec![s])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn members(&self) -> &[Substitution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn non_degenerate(&self) -> bool {
        self.non_degenerate
    }

    pub fn member(&self, index: usize) -> &Substitution {
        &self.members[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.members
            .iter()
            .position(|s| s.name() == name)
            .ok_or_else(|| Error::UnknownSubstitution(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Result<&Substitution> {
        self.index_of(name).map(|i| &self.members[i])
    }

    /// Smallest image width and height over all members.
    pub fn min_extents(&self) -> (usize, usize) {
        self.members
            .iter()
            .map(Substitution::min_extents)
            .fold((usize::MAX, usize::MAX), |(w, h), (mw, mh)| {
                (w.min(mw), h.min(mh))
            })
    }

    pub fn max_extent(&self) -> usize {
        self.members
            .iter()
            .flat_map(|s| s.images().iter().map(|i| i.width().max(i.height())))
            .max()
            .unwrap_or(1)
    }

    /// The alphabet of member names, letter `i` standing for member `i`.
    pub fn names_alphabet(&self) -> Alphabet {
        Alphabet::new(self.members.iter().map(|s| s.name().to_string()))
            .expect("member names are distinct tokens")
    }

    /// Parses a grid of substitution names, rows top to bottom.
    pub fn parse_substitution_pattern(&self, text: &str) -> Result<SubstitutionPattern> {
        let glyphs = self.members.iter().all(|s| s.name().chars().count() == 1);
        let rows = split_rows(text, glyphs)?
            .into_iter()
            .map(|row| {
                row.iter()
                    .map(|n| self.index_of(n))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Grid::from_rows_top_down(rows)
    }

    pub fn format_substitution_pattern(&self, sp: &SubstitutionPattern) -> String {
        format_rows(sp, |i| self.members[*i].name(), false)
    }

    pub fn check_substitution_pattern(&self, sp: &SubstitutionPattern) -> Result<()> {
        match sp.cells().iter().find(|i| **i >= self.members.len()) {
            Some(i) => Err(Error::UnknownSubstitution(format!("#{i}"))),
            None => Ok(()),
        }
    }
}

/// A host-supplied rule mapping a level to a substitution name.
pub type SequenceRule = Arc<dyn Fn(usize) -> String + Send + Sync>;

/// An effective sequence of substitution names.
///
/// Without a rule the sequence is eventually periodic: `prefix` followed by
/// `period` repeated forever.
#[derive(Clone)]
pub struct SequenceSpec {
    prefix: Vec<String>,
    period: Vec<String>,
    rule: Option<SequenceRule>,
}

impl SequenceSpec {
    pub fn new(prefix: Vec<String>, period: Vec<String>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidSequence(
                "the period must be non-empty".into(),
            ));
        }
        Ok(SequenceSpec {
            prefix,
            period,
            rule: None,
        })
    }

    pub fn constant(name: impl Into<String>) -> Self {
        SequenceSpec {
            prefix: Vec::new(),
            period: vec![name.into()],
            rule: None,
        }
    }

    pub fn periodic<I, S>(period: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SequenceSpec::new(Vec::new(), period.into_iter().map(Into::into).collect())
    }

    /// Overrides prefix and period with an arbitrary computable rule.
    pub fn with_rule(mut self, rule: impl Fn(usize) -> String + Send + Sync + 'static) -> Self {
        self.rule = Some(Arc::new(rule));
        self
    }

    pub fn prefix(&self) -> &[String] {
        &self.prefix
    }

    pub fn period(&self) -> &[String] {
        &self.period
    }

    pub fn has_rule(&self) -> bool {
        self.rule.is_some()
    }

    pub fn name_at(&self, n: usize) -> String {
        if let Some(rule) = &self.rule {
            return rule(n);
        }
        if n < self.prefix.len() {
            self.prefix[n].clone()
        } else {
            self.period[(n - self.prefix.len()) % self.period.len()].clone()
        }
    }

    /// Index in `set` of the substitution used at level `n`.
    pub fn resolve(&self, set: &SubstitutionSet, n: usize) -> Result<usize> {
        set.index_of(&self.name_at(n))
    }

    /// Checks the stored prefix and period against `set`.
    pub fn validate(&self, set: &SubstitutionSet) -> Result<()> {
        self.prefix
            .iter()
            .chain(&self.period)
            .try_for_each(|n| set.index_of(n).map(|_| ()))
    }

    /// The same sequence with every name passed through `f`.
    pub fn map_names(&self, f: impl Fn(&str) -> String + Send + Sync + 'static) -> SequenceSpec {
        let f = Arc::new(f);
        let rule = self.rule.clone().map(|r| {
            let f = Arc::clone(&f);
            Arc::new(move |n| f(&r(n))) as SequenceRule
        });
        SequenceSpec {
            prefix: self.prefix.iter().map(|n| f(n)).collect(),
            period: self.period.iter().map(|n| f(n)).collect(),
            rule,
        }
    }
}

impl fmt::Debug for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceSpec")
            .field("prefix", &self.prefix)
            .field("period", &self.period)
            .field("rule", &self.rule.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl PartialEq for SequenceSpec {
    fn eq(&self, other: &Self) -> bool {
        let rules = match (&self.rule, &other.rule) {
            (None, None) => true,
            (Some(a), Some(b)) => Arc::ptr_eq(a, b),
            _ => false,
        };
        rules && self.prefix == other.prefix && self.period == other.period
    }
}
