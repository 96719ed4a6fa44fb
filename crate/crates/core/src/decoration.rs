//! History-recording decorations.
//!
//! Every letter is paired with two substitution names `(a, v, h)`. A lifted
//! substitution copies the base image and writes its own name into the
//! decorations, except along the right column (where `v` survives) and the
//! top row (where `h` survives). Iterating a lifted sequence therefore
//! records, column by column, which substitution produced each block.

use crate::apply::iterate;
use crate::error::{Error, Result};
use crate::pattern::{Alphabet, Grid, Letter, RectPattern};
use crate::substitution::{SequenceSpec, Substitution, SubstitutionSet};

/// Suffix appended to the names of lifted substitutions.
pub const LIFT_MARKER: &str = "~";

/// A base letter with its vertical and horizontal decorations, given as
/// member indices of the base set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedLetter {
    pub base: Letter,
    pub v_dec: usize,
    pub h_dec: usize,
}

/// Which component a decorated pattern is projected onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    Base,
    Vertical,
    Horizontal,
}

/// A base set together with its lifted copy over the decorated alphabet.
#[derive(Clone, Debug)]
pub struct DecoratedSystem {
    base_set: SubstitutionSet,
    lifted_set: SubstitutionSet,
}

/// Lifts every member of `set`.
pub fn lift_set(set: &SubstitutionSet) -> Result<DecoratedSystem> {
    let alphabet = decorated_alphabet(set)?;
    let members = set
        .members()
        .iter()
        .map(|s| lift_substitution(s, set))
        .collect::<Result<Vec<_>>>()?;
    let lifted_set = SubstitutionSet::with_flags(alphabet, members, set.non_degenerate())?;
    Ok(DecoratedSystem {
        base_set: set.clone(),
        lifted_set,
    })
}

fn decorated_alphabet(set: &SubstitutionSet) -> Result<Alphabet> {
    if let Some(s) = set
        .members()
        .iter()
        .find(|s| s.name().ends_with(LIFT_MARKER))
    {
        return Err(Error::AlreadyLifted(s.name().to_string()));
    }
    let k = set.len();
    let symbols = (0..set.alphabet().len() * k * k).map(|code| {
        let d = decode(code, k);
        format!(
            "({},{},{})",
            set.alphabet().symbol(d.base),
            set.member(d.v_dec).name(),
            set.member(d.h_dec).name()
        )
    });
    Alphabet::new(symbols)
}

fn encode(d: DecoratedLetter, k: usize) -> Letter {
    Letter::new(d.base.index() * k * k + d.v_dec * k + d.h_dec)
}

fn decode(code: usize, k: usize) -> DecoratedLetter {
    DecoratedLetter {
        base: Letter::new(code / (k * k)),
        v_dec: code / k % k,
        h_dec: code % k,
    }
}

/// The decorated version of `s`, over the alphabet of [`lift_set`].
pub fn lift_substitution(s: &Substitution, set: &SubstitutionSet) -> Result<Substitution> {
    if s.name().ends_with(LIFT_MARKER) {
        return Err(Error::AlreadyLifted(s.name().to_string()));
    }
    let own = set.index_of(s.name())?;
    if set.member(own) != s {
        return Err(Error::UnknownSubstitution(s.name().to_string()));
    }
    let k = set.len();
    let images = (0..set.alphabet().len() * k * k)
        .map(|code| {
            let d = decode(code, k);
            let img = s.image(d.base);
            let (w, h) = img.shape();
            Grid::from_fn(w, h, |x, y| {
                let v_dec = if x + 1 == w { d.v_dec } else { own };
                let h_dec = if y + 1 == h { d.h_dec } else { own };
                encode(
                    DecoratedLetter {
                        base: *img.get(x, y),
                        v_dec,
                        h_dec,
                    },
                    k,
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let name = format!("{}{LIFT_MARKER}", s.name());
    if set.non_degenerate() {
        Substitution::new(name, images)
    } else {
        Substitution::allowing_degenerate(name, images)
    }
}

impl DecoratedSystem {
    pub fn base_set(&self) -> &SubstitutionSet {
        &self.base_set
    }

    pub fn lifted_set(&self) -> &SubstitutionSet {
        &self.lifted_set
    }

    pub fn encode(&self, d: DecoratedLetter) -> Result<Letter> {
        let k = self.base_set.len();
        if d.base.index() >= self.base_set.alphabet().len() || d.v_dec >= k || d.h_dec >= k {
            return Err(Error::InvalidArgument(format!(
                "decorated letter {d:?} is out of range"
            )));
        }
        Ok(encode(d, k))
    }

    pub fn decode(&self, letter: Letter) -> Result<DecoratedLetter> {
        if letter.index() >= self.lifted_set.alphabet().len() {
            return Err(Error::AlphabetMismatch {
                letter: letter.index(),
                size: self.lifted_set.alphabet().len(),
            });
        }
        Ok(decode(letter.index(), self.base_set.len()))
    }

    /// Builds a decorated letter from a base letter and two member names.
    pub fn letter(&self, base: Letter, v_dec: &str, h_dec: &str) -> Result<DecoratedLetter> {
        let d = DecoratedLetter {
            base,
            v_dec: self.base_set.index_of(v_dec)?,
            h_dec: self.base_set.index_of(h_dec)?,
        };
        self.encode(d)?;
        Ok(d)
    }

    /// The lifted counterpart of a base sequence.
    pub fn lift_sequence(&self, seq: &SequenceSpec) -> SequenceSpec {
        seq.map_names(|n| format!("{n}{LIFT_MARKER}"))
    }

    /// Decodes every cell of a decorated pattern.
    pub fn decode_pattern(&self, p: &RectPattern) -> Result<Grid<DecoratedLetter>> {
        self.lifted_set.alphabet().check_pattern(p)?;
        Ok(p.map(|l| decode(l.index(), self.base_set.len())))
    }

    /// Cellwise projection. `Vertical` and `Horizontal` yield patterns over
    /// [`SubstitutionSet::names_alphabet`].
    pub fn project(&self, p: &RectPattern, which: Projection) -> Result<RectPattern> {
        let decoded = self.decode_pattern(p)?;
        Ok(decoded.map(|d| match which {
            Projection::Base => d.base,
            Projection::Vertical => Letter::new(d.v_dec),
            Projection::Horizontal => Letter::new(d.h_dec),
        }))
    }

    /// True iff vertical decorations agree between vertical neighbours and
    /// horizontal decorations agree between horizontal neighbours, so that
    /// every column carries one `v` and every row one `h`.
    pub fn sync_check(&self, p: &RectPattern) -> Result<bool> {
        let d = self.decode_pattern(p)?;
        let (w, h) = d.shape();
        for y in 0..h {
            for x in 0..w {
                let here = d.get(x, y);
                if x + 1 < w && d.get(x + 1, y).h_dec != here.h_dec {
                    return Ok(false);
                }
                if y + 1 < h && d.get(x, y + 1).v_dec != here.v_dec {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The level-`n` iterate of the lifted sequence on `seed`.
    pub fn iterate(
        &self,
        seq: &SequenceSpec,
        n: usize,
        seed: DecoratedLetter,
    ) -> Result<RectPattern> {
        let lifted = self.lift_sequence(seq);
        iterate(&self.lifted_set, &lifted, n, self.encode(seed)?)
    }

    /// The vertical decorations along the bottom row of the level-`n` lifted
    /// iterate, left to right.
    pub fn history_word(
        &self,
        seq: &SequenceSpec,
        n: usize,
        seed: DecoratedLetter,
    ) -> Result<HistoryWord> {
        let p = self.iterate(seq, n, seed)?;
        let v = self.project(&p, Projection::Vertical)?;
        let names = v
            .row(0)
            .iter()
            .map(|l| self.base_set.member(l.index()).name().to_string())
            .collect();
        let mut uniform_width = true;
        for k in 0..=n {
            uniform_width &= self
                .base_set
                .member(seq.resolve(&self.base_set, k)?)
                .has_uniform_width();
        }
        Ok(HistoryWord {
            names,
            uniform_width,
        })
    }
}

/// A word of substitution names read from a decorated iterate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryWord {
    pub names: Vec<String>,
    /// Whether every stage had letter-independent widths, the case in which
    /// the word follows the ruler pattern.
    pub uniform_width: bool,
}

/// `history_word` computed on a freshly lifted set.
pub fn history_word(
    set: &SubstitutionSet,
    seq: &SequenceSpec,
    n: usize,
    seed: DecoratedLetter,
) -> Result<HistoryWord> {
    lift_set(set)?.history_word(seq, n, seed)
}
