//! Desubstitution: reading a pattern as a grid of substitution images, and
//! recovering the substitution sequence behind a family of samples.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::apply::apply_uniform;
use crate::error::{Error, Result};
use crate::language::{s_patterns_up_to, windows_of};
use crate::pattern::{Grid, Letter, RectPattern};
use crate::substitution::{Substitution, SubstitutionSet};

/// How a pattern must sit on the block grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseMode {
    /// Blocks tile the pattern exactly, the first one at the origin.
    Anchored,
    /// Blocks may be cropped on every side.
    Windowed,
}

/// One way of reading a pattern as a window of `s(preimage)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseResult {
    pub substitution: String,
    /// Position of the pattern's origin inside the first block.
    pub offset: (usize, usize),
    pub preimage: RectPattern,
    /// Whether some block sticks out of the pattern.
    pub cropped: bool,
    /// Cropped cells whose letter is not determined by the visible part of
    /// their block: the preimage holds the smallest candidate, all candidates
    /// are listed here.
    pub undetermined: Vec<((usize, usize), Vec<Letter>)>,
}

impl ParseResult {
    /// Re-applies the substitution and checks the pattern reappears at the
    /// recorded offset.
    pub fn verify(&self, set: &SubstitutionSet, p: &RectPattern) -> Result<bool> {
        let s = set.get(&self.substitution)?;
        let image = apply_uniform(s, &self.preimage)?;
        let (dx, dy) = self.offset;
        if dx + p.width() > image.width() || dy + p.height() > image.height() {
            return Ok(false);
        }
        if !self.cropped && (dx, dy, p.width(), p.height()) != (0, 0, image.width(), image.height())
        {
            return Ok(false);
        }
        Ok(image.sub(dx, dy, p.width(), p.height())? == *p)
    }

    fn key(&self) -> (&str, (usize, usize), &RectPattern) {
        (&self.substitution, self.offset, &self.preimage)
    }
}

/// Every parse of `p` by every member of `set`, sorted by substitution
/// name, offset and preimage.
pub fn desubstitute(
    p: &RectPattern,
    set: &SubstitutionSet,
    mode: ParseMode,
) -> Result<Vec<ParseResult>> {
    set.alphabet().check_pattern(p)?;
    let mut out: Vec<ParseResult> = set
        .members()
        .par_iter()
        .map(|s| parse_with(p, s, mode))
        .flatten()
        .collect();
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    out.dedup_by(|a, b| a.key() == b.key());
    Ok(out)
}

/// Parses of `p` by a single substitution.
pub fn parse_with(p: &RectPattern, s: &Substitution, mode: ParseMode) -> Vec<ParseResult> {
    let letters: Vec<Letter> = (0..s.alphabet_len()).map(Letter::new).collect();
    let widths: BTreeSet<usize> = s.images().iter().map(Grid::width).collect();
    let heights: BTreeSet<usize> = s.images().iter().map(Grid::height).collect();
    let parser = Parser {
        p,
        s,
        letters,
        widths: widths.into_iter().collect(),
        heights: heights.into_iter().collect(),
        anchored: mode == ParseMode::Anchored,
    };
    let max_dx = if parser.anchored {
        1
    } else {
        *parser.widths.last().expect("non-empty")
    };
    let max_dy = if parser.anchored {
        1
    } else {
        *parser.heights.last().expect("non-empty")
    };

    let mut out = Vec::new();
    for dy in 0..max_dy {
        for dx in 0..max_dx {
            for &h0 in parser.heights.iter().filter(|h| **h > dy) {
                let y0 = -(dy as i64);
                let mut col_seqs = Vec::new();
                parser.extend_axis(true, -(dx as i64), (y0, h0), &mut Vec::new(), &mut col_seqs);
                for cols in col_seqs {
                    if cols[0] <= dx {
                        continue;
                    }
                    let mut row_seqs = Vec::new();
                    let x0 = -(dx as i64);
                    let first = vec![h0];
                    parser.extend_axis(
                        false,
                        y0 + h0 as i64,
                        (x0, cols[0]),
                        &mut first.clone(),
                        &mut row_seqs,
                    );
                    for rows in row_seqs {
                        parser.finish(&cols, &rows, (dx, dy), &mut out);
                    }
                }
            }
        }
    }
    out
}

struct Parser<'a> {
    p: &'a RectPattern,
    s: &'a Substitution,
    letters: Vec<Letter>,
    widths: Vec<usize>,
    heights: Vec<usize>,
    anchored: bool,
}

impl Parser<'_> {
    /// Letters whose image has the given extents and agrees with `p` on the
    /// part of the block at `(x0, y0)` that lies inside `p`.
    fn block_letters(&self, x0: i64, y0: i64, w: usize, h: usize) -> Vec<Letter> {
        let (pw, ph) = (self.p.width() as i64, self.p.height() as i64);
        self.letters
            .iter()
            .copied()
            .filter(|&a| {
                let img = self.s.image(a);
                img.shape() == (w, h)
                    && (0..h).all(|v| {
                        let y = y0 + v as i64;
                        !(0..ph).contains(&y)
                            || (0..w).all(|u| {
                                let x = x0 + u as i64;
                                !(0..pw).contains(&x)
                                    || img.get(u, v) == self.p.get(x as usize, y as usize)
                            })
                    })
            })
            .collect()
    }

    /// Extends a run of block extents along one axis, starting at `start`,
    /// keeping the cross block `(cross_start, cross_extent)` fixed. Complete
    /// runs (reaching the far edge of the pattern) are pushed to `out`.
    fn extend_axis(
        &self,
        horizontal: bool,
        start: i64,
        cross: (i64, usize),
        run: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let limit = if horizontal {
            self.p.width()
        } else {
            self.p.height()
        } as i64;
        if start >= limit {
            if !self.anchored || start == limit {
                out.push(run.clone());
            }
            return;
        }
        let options = if horizontal {
            &self.widths
        } else {
            &self.heights
        };
        for &e in options {
            if self.anchored && start + e as i64 > limit {
                continue;
            }
            let ok = if horizontal {
                !self.block_letters(start, cross.0, e, cross.1).is_empty()
            } else {
                !self.block_letters(cross.0, start, cross.1, e).is_empty()
            };
            if ok {
                run.push(e);
                self.extend_axis(horizontal, start + e as i64, cross, run, out);
                run.pop();
            }
        }
    }

    fn finish(
        &self,
        cols: &[usize],
        rows: &[usize],
        offset: (usize, usize),
        out: &mut Vec<ParseResult>,
    ) {
        let (pw, ph) = (self.p.width() as i64, self.p.height() as i64);
        let xs = starts(cols, -(offset.0 as i64));
        let ys = starts(rows, -(offset.1 as i64));
        let mut cells = Vec::with_capacity(cols.len() * rows.len());
        let mut cropped = false;
        for (j, &h) in rows.iter().enumerate() {
            for (i, &w) in cols.iter().enumerate() {
                let cands = self.block_letters(xs[i], ys[j], w, h);
                if cands.is_empty() {
                    return;
                }
                let inside =
                    xs[i] >= 0 && ys[j] >= 0 && xs[i] + w as i64 <= pw && ys[j] + h as i64 <= ph;
                cropped |= !inside;
                cells.push((cands, inside));
            }
        }
        let mut undetermined = Vec::new();
        let mut choices = Vec::with_capacity(cells.len());
        for (k, (cands, inside)) in cells.into_iter().enumerate() {
            if inside {
                choices.push(cands);
            } else {
                if cands.len() > 1 {
                    undetermined.push(((k % cols.len(), k / cols.len()), cands.clone()));
                }
                choices.push(vec![cands[0]]);
            }
        }
        let mut digits = vec![0usize; choices.len()];
        loop {
            let cells: Vec<Letter> = choices.iter().zip(&digits).map(|(c, d)| c[*d]).collect();
            out.push(ParseResult {
                substitution: self.s.name().to_string(),
                offset,
                preimage: Grid::new(cols.len(), rows.len(), cells).expect("non-empty grid"),
                cropped,
                undetermined: undetermined.clone(),
            });
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return;
                }
                digits[i] += 1;
                if digits[i] < choices[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

fn starts(extents: &[usize], origin: i64) -> Vec<i64> {
    let mut acc = origin;
    extents
        .iter()
        .map(|e| {
            let here = acc;
            acc += *e as i64;
            here
        })
        .collect()
}

/// Several substitutions explain the samples equally well.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbiguityReport {
    /// The stage at which the choice could not be made.
    pub stage: usize,
    /// One parse of the largest sample per surviving substitution.
    pub candidates: Vec<ParseResult>,
    /// Shape of that sample.
    pub window: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recovery {
    Sequence(Vec<String>),
    Ambiguous(AmbiguityReport),
}

/// Recovers `s_0, ..., s_{depth-1}` from samples of the level-`n`
/// languages, `n` ranging from `depth - 1` up to `max_level`.
///
/// Stage `t` keeps the members that parse (anchored) every sample of level
/// at least `t`; when one member remains the samples are replaced by their
/// preimages and the next stage starts. Ties trigger a restart with one more
/// level of samples.
pub fn recover_sequence<F>(
    mut provider: F,
    set: &SubstitutionSet,
    depth: usize,
    max_level: usize,
) -> Result<Recovery>
where
    F: FnMut(usize) -> Result<Vec<RectPattern>>,
{
    if depth == 0 {
        return Ok(Recovery::Sequence(Vec::new()));
    }
    let first_level = depth - 1;
    if max_level < first_level {
        return Err(Error::InvalidArgument(format!(
            "max level {max_level} is below the depth {depth}"
        )));
    }
    let mut pool: Vec<(usize, RectPattern)> = Vec::new();
    for level in first_level..=max_level {
        for p in provider(level)? {
            set.alphabet().check_pattern(&p)?;
            pool.push((level, p));
        }
        match recover_with(&pool, set, depth)? {
            Attempt::Done(names) => return Ok(Recovery::Sequence(names)),
            Attempt::Tied(report) if level == max_level => return Ok(Recovery::Ambiguous(report)),
            Attempt::Tied(_) => {}
        }
    }
    unreachable!("the last level always returns")
}

enum Attempt {
    Done(Vec<String>),
    Tied(AmbiguityReport),
}

fn recover_with(
    pool: &[(usize, RectPattern)],
    set: &SubstitutionSet,
    depth: usize,
) -> Result<Attempt> {
    // Each sample carries the alternative patterns it may have come from at
    // the current stage.
    let mut samples: Vec<(usize, Vec<RectPattern>)> =
        pool.iter().map(|(l, p)| (*l, vec![p.clone()])).collect();
    let mut names = Vec::with_capacity(depth);
    for stage in 0..depth {
        samples.retain(|(level, _)| *level >= stage);
        let parses: Vec<Vec<Vec<Vec<ParseResult>>>> = set
            .members()
            .par_iter()
            .map(|s| {
                samples
                    .iter()
                    .map(|(_, alts)| {
                        alts.iter()
                            .map(|q| parse_with(q, s, ParseMode::Anchored))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let survivors: Vec<usize> = (0..set.len())
            .filter(|&m| {
                parses[m]
                    .iter()
                    .all(|per_alt| per_alt.iter().any(|r| !r.is_empty()))
            })
            .collect();
        match survivors.len() {
            0 => return Err(Error::Unparseable { stage }),
            1 => {
                let m = survivors[0];
                names.push(set.member(m).name().to_string());
                for ((_, alts), per_alt) in samples.iter_mut().zip(&parses[m]) {
                    let next: BTreeSet<RectPattern> = per_alt
                        .iter()
                        .flatten()
                        .map(|r| r.preimage.clone())
                        .collect();
                    *alts = next.into_iter().collect();
                }
            }
            _ => {
                let (sample, per_alt) = samples
                    .iter()
                    .enumerate()
                    .max_by_key(|(_, (_, alts))| alts[0].len())
                    .map(|(i, (_, alts))| (&alts[0], i))
                    .expect("survivors imply samples");
                let candidates = survivors
                    .iter()
                    .filter_map(|&m| parses[m][per_alt][0].first().cloned())
                    .collect();
                return Ok(Attempt::Tied(AmbiguityReport {
                    stage,
                    candidates,
                    window: sample.shape(),
                }));
            }
        }
    }
    Ok(Attempt::Done(names))
}

/// Outcome of the bounded unique-derivation probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniqueDerivation {
    /// No window within the bounds has two parses.
    NoCounterexample { windows_checked: usize },
    /// A window with at least two distinct parses.
    Counterexample {
        window: RectPattern,
        parses: Vec<ParseResult>,
    },
}

/// Searches the `side`x`side` windows of S-patterns of level at most
/// `depth + 1` for one that admits two windowed parses.
pub fn unique_derivation_check(
    set: &SubstitutionSet,
    side: usize,
    depth: usize,
    budget: usize,
) -> Result<UniqueDerivation> {
    let largest = set.max_extent();
    if side < largest {
        return Err(Error::InvalidArgument(format!(
            "window side {side} is smaller than the largest image extent {largest}"
        )));
    }
    let mut windows = BTreeSet::new();
    for p in s_patterns_up_to(set, depth + 1, budget)? {
        if p.width() >= side && p.height() >= side {
            windows.extend(windows_of(&p, side, side)?);
        }
    }
    let windows: Vec<RectPattern> = windows.into_iter().collect();
    let found = windows
        .par_iter()
        .map(|w| desubstitute(w, set, ParseMode::Windowed).map(|parses| (w, parses)))
        .find_first(|r| r.as_ref().map_or(true, |(_, parses)| parses.len() >= 2));
    match found {
        Some(r) => {
            let (window, parses) = r?;
            Ok(UniqueDerivation::Counterexample {
                window: window.clone(),
                parses,
            })
        }
        None => Ok(UniqueDerivation::NoCounterexample {
            windows_checked: windows.len(),
        }),
    }
}
