//! Finite-window approximations of the pattern languages generated by a
//! sequence of substitutions or by a whole set of substitutions.
//!
//! Local languages collect the windows of patterns grown from single
//! letters. Global languages collect the windows of images of arbitrary
//! configurations; they are computed stage by stage on covering windows: a
//! `w`x`h` window of an image lies inside the image of a window of the
//! preimage at most `ceil((w - 1) / m) + 1` cells wide, `m` being the
//! smallest block width of the stage (and likewise vertically).

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::apply::{apply_nonuniform, apply_uniform, for_each_compatible, iterate};
use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::pattern::{Grid, Letter, RectPattern};
use crate::substitution::{SequenceSpec, Substitution, SubstitutionSet};

/// A deduplicated set of equally shaped windows, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    pub width: usize,
    pub height: usize,
    pub level: usize,
    pub members: BTreeSet<RectPattern>,
}

impl WindowSet {
    fn new(width: usize, height: usize, level: usize, members: BTreeSet<RectPattern>) -> Self {
        debug_assert!(members.iter().all(|m| m.shape() == (width, height)));
        WindowSet {
            width,
            height,
            level,
            members,
        }
    }

    pub fn contains(&self, p: &RectPattern) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &RectPattern> {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &WindowSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LanguageMode {
    LocalSeq,
    GlobalSeq,
    LocalSet,
    GlobalSet,
}

/// A language request: which language, at which level, for which window shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LanguageQuery {
    pub mode: LanguageMode,
    pub level: usize,
    pub width: usize,
    pub height: usize,
}

impl LanguageQuery {
    pub fn new(mode: LanguageMode, level: usize, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(
                "window extents must be at least 1".into(),
            ));
        }
        Ok(LanguageQuery {
            mode,
            level,
            width,
            height,
        })
    }

    /// Runs the query; sequence modes require `seq`.
    pub fn run(
        &self,
        set: &SubstitutionSet,
        seq: Option<&SequenceSpec>,
        budget: usize,
    ) -> Result<WindowSet> {
        let need_seq =
            || seq.ok_or_else(|| Error::InvalidArgument("this mode needs a sequence".into()));
        let (n, w, h) = (self.level, self.width, self.height);
        match self.mode {
            LanguageMode::LocalSeq => local_language(set, need_seq()?, n, w, h),
            LanguageMode::GlobalSeq => {
                global_language(set, GlobalSource::Sequence(need_seq()?), n, w, h, budget)
            }
            LanguageMode::LocalSet => local_language_set(set, n, w, h, budget),
            LanguageMode::GlobalSet => global_language(set, GlobalSource::Set, n, w, h, budget),
        }
    }
}

/// Every distinct `w`x`h` sub-rectangle of `p`.
pub fn windows_of(p: &RectPattern, w: usize, h: usize) -> Result<BTreeSet<RectPattern>> {
    if w == 0 || h == 0 || w > p.width() || h > p.height() {
        return Err(Error::WindowTooLarge {
            width: w,
            height: h,
            reason: format!("pattern is {}x{}", p.width(), p.height()),
        });
    }
    Ok(p.windows(w, h).map(|win| win.pattern).collect())
}

/// Windows of `p`, or nothing if `p` is too small.
fn windows_into(p: &RectPattern, w: usize, h: usize, out: &mut BTreeSet<RectPattern>) {
    out.extend(p.windows(w, h).map(|win| win.pattern));
}

/// The S-patterns of level exactly `n`: single letters at level 0, then the
/// images of level-`m` patterns under every compatible substitution pattern.
pub fn s_patterns(set: &SubstitutionSet, n: usize, budget: usize) -> Result<BTreeSet<RectPattern>> {
    let mut levels = s_pattern_levels(set, n, budget)?;
    Ok(levels.pop().expect("level 0 always present"))
}

/// The S-patterns of every level up to `n`.
pub fn s_patterns_up_to(
    set: &SubstitutionSet,
    n: usize,
    budget: usize,
) -> Result<BTreeSet<RectPattern>> {
    let levels = s_pattern_levels(set, n, budget)?;
    let total: usize = levels.iter().map(BTreeSet::len).sum();
    if total > budget {
        return Err(Error::BudgetExceeded {
            budget,
            partial: total,
        });
    }
    Ok(levels.into_iter().flatten().collect())
}

pub(crate) fn s_pattern_levels(
    set: &SubstitutionSet,
    n: usize,
    budget: usize,
) -> Result<Vec<BTreeSet<RectPattern>>> {
    let letters: BTreeSet<RectPattern> =
        set.alphabet().letters().map(RectPattern::letter).collect();
    if letters.len() > budget {
        return Err(Error::BudgetExceeded {
            budget,
            partial: letters.len(),
        });
    }
    let mut levels = vec![letters];
    for _ in 0..n {
        let prev = levels.last().expect("non-empty");
        let mut next = BTreeSet::new();
        for q in prev {
            let mut failure = None;
            let _ = for_each_compatible(set, q, |sp| match apply_nonuniform(set, sp, q) {
                Ok(img) => {
                    next.insert(img);
                    if next.len() > budget {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            if next.len() > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    partial: next.len(),
                });
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// Windows of the iterates `s_0 ∘ ... ∘ s_m (a)` for every `m <= n` and
/// every letter `a`.
pub fn local_language(
    set: &SubstitutionSet,
    seq: &SequenceSpec,
    n: usize,
    w: usize,
    h: usize,
) -> Result<WindowSet> {
    let jobs: Vec<(usize, Letter)> = (0..=n)
        .flat_map(|m| set.alphabet().letters().map(move |a| (m, a)))
        .collect();
    let iterates = jobs
        .par_iter()
        .map(|&(m, a)| iterate(set, seq, m, a).map(|p| (m, p)))
        .collect::<Result<Vec<_>>>()?;
    if !iterates
        .iter()
        .any(|(m, p)| *m == n && p.width() >= w && p.height() >= h)
    {
        return Err(Error::WindowTooLarge {
            width: w,
            height: h,
            reason: format!("no level-{n} iterate is large enough"),
        });
    }
    let mut members = BTreeSet::new();
    for (_, p) in &iterates {
        windows_into(p, w, h, &mut members);
    }
    Ok(WindowSet::new(w, h, n, members))
}

/// Windows of the S-patterns of every level up to `n`.
pub fn local_language_set(
    set: &SubstitutionSet,
    n: usize,
    w: usize,
    h: usize,
    budget: usize,
) -> Result<WindowSet> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument(
            "window extents must be at least 1".into(),
        ));
    }
    let mut members = BTreeSet::new();
    for p in s_patterns_up_to(set, n, budget)? {
        windows_into(&p, w, h, &mut members);
    }
    Ok(WindowSet::new(w, h, n, members))
}

/// Where the substitutions of each stage of a global language come from.
#[derive(Clone, Copy, Debug)]
pub enum GlobalSource<'a> {
    /// Stage `k` applies `s_k` uniformly.
    Sequence(&'a SequenceSpec),
    /// Every stage applies an arbitrary compatible substitution pattern.
    Set,
}

/// Windows of the level-`n` images (`n + 1` substitution stages) of
/// arbitrary configurations.
///
/// In sequence mode every tracked window carries the letter sets of the full
/// rows and columns it sits on, so stage compatibility is decided for the
/// whole configuration and the result is exact. In set mode compatibility is
/// decided on the tracked window; this is exact when every member has a
/// letter-independent support, and an over-approximation otherwise.
pub fn global_language(
    set: &SubstitutionSet,
    source: GlobalSource<'_>,
    n: usize,
    w: usize,
    h: usize,
    budget: usize,
) -> Result<WindowSet> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument(
            "window extents must be at least 1".into(),
        ));
    }
    if set.alphabet().len() > 128 {
        return Err(Error::InvalidArgument(
            "global languages support at most 128 letters".into(),
        ));
    }
    let stages: Vec<Option<&Substitution>> = (0..=n)
        .map(|k| match source {
            GlobalSource::Sequence(seq) => seq.resolve(set, k).map(|i| Some(set.member(i))),
            GlobalSource::Set => Ok(None),
        })
        .collect::<Result<_>>()?;

    // shapes[k] is the tracked window shape on the image of stage k.
    let mut shapes = vec![(w, h)];
    for stage in &stages {
        let (mw, mh) = stage.map_or_else(|| set.min_extents(), |s| s.min_extents());
        let (cw, ch) = *shapes.last().expect("non-empty");
        shapes.push((cover(cw, mw), cover(ch, mh)));
    }

    let (sw, sh) = shapes[n + 1];
    let mut states: HashSet<Tracked> = all_patterns(set.alphabet().len(), sw, sh, budget)?
        .into_iter()
        .map(Tracked::source)
        .collect();

    for k in (0..=n).rev() {
        let (tw, th) = shapes[k];
        let work: Vec<&Tracked> = states.iter().collect();
        let expanded = work
            .par_iter()
            .map(|st| match stages[k] {
                Some(s) => Ok(st.expand_uniform(s, tw, th)),
                None => st.expand_set(set, tw, th, budget),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut next = HashSet::new();
        for batch in expanded {
            next.extend(batch);
            if next.len() > budget {
                return Err(Error::BudgetExceeded {
                    budget,
                    partial: next.len(),
                });
            }
        }
        states = next;
    }
    let members = states.into_iter().map(|st| st.window).collect();
    Ok(WindowSet::new(w, h, n, members))
}

fn cover(extent: usize, min_block: usize) -> usize {
    (extent - 1).div_ceil(min_block.max(1)) + 1
}

/// Every pattern of the given shape over an alphabet of `letters` letters.
pub(crate) fn all_patterns(
    letters: usize,
    w: usize,
    h: usize,
    budget: usize,
) -> Result<Vec<RectPattern>> {
    let cells = w * h;
    let count = (letters as u128)
        .checked_pow(cells as u32)
        .filter(|c| *c <= budget as u128);
    let Some(count) = count else {
        return Err(Error::BudgetExceeded { budget, partial: 0 });
    };
    let mut out = Vec::with_capacity(count as usize);
    for code in 0..count {
        let mut c = code;
        out.push(Grid::from_fn(w, h, |_, _| {
            let l = (c % letters as u128) as usize;
            c /= letters as u128;
            Letter::new(l)
        })?);
    }
    Ok(out)
}

type LetterSet = u128;

fn bits<'a>(letters: impl IntoIterator<Item = &'a Letter>) -> LetterSet {
    letters
        .into_iter()
        .fold(0, |acc, l| acc | (1u128 << l.index()))
}

fn members_of(set: LetterSet) -> impl Iterator<Item = Letter> {
    (0..128).filter(move |i| set >> i & 1 == 1).map(Letter::new)
}

/// A window of an intermediate image plus the letter sets of the full rows
/// and columns of the configuration passing through it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Tracked {
    window: RectPattern,
    rows: Vec<LetterSet>,
    cols: Vec<LetterSet>,
}

impl Tracked {
    /// A source window extended by repeating its border rows and columns, so
    /// its rows and columns contain no other letters.
    fn source(window: RectPattern) -> Self {
        let rows = (0..window.height()).map(|y| bits(window.row(y))).collect();
        let cols = (0..window.width())
            .map(|x| bits(window.column(x)))
            .collect();
        Tracked { window, rows, cols }
    }

    fn expand_uniform(&self, s: &Substitution, tw: usize, th: usize) -> Vec<Tracked> {
        let uniform = |set: LetterSet, pick: fn((usize, usize)) -> usize| {
            let mut it = members_of(set).map(|a| pick(s.extents(a)));
            let first = it.next();
            it.all(|e| Some(e) == first)
        };
        if !self.rows.iter().all(|r| uniform(*r, |e| e.1))
            || !self.cols.iter().all(|c| uniform(*c, |e| e.0))
        {
            return Vec::new();
        }
        let image = apply_uniform(s, &self.window).expect("rows and columns are aligned");

        let mut rows = Vec::with_capacity(image.height());
        for &set in &self.rows {
            let any = members_of(set).next().expect("rows are non-empty");
            for j in 0..s.extents(any).1 {
                rows.push(members_of(set).fold(0, |acc, a| acc | bits(s.image(a).row(j))));
            }
        }
        let mut cols = Vec::with_capacity(image.width());
        for &set in &self.cols {
            let any = members_of(set).next().expect("columns are non-empty");
            for i in 0..s.extents(any).0 {
                cols.push(members_of(set).fold(0, |acc, a| acc | bits(s.image(a).column(i))));
            }
        }
        let mut out = Vec::new();
        for win in image.windows(tw, th) {
            let (x, y) = (win.anchor.0 as usize, win.anchor.1 as usize);
            out.push(Tracked {
                window: win.pattern,
                rows: rows[y..y + th].to_vec(),
                cols: cols[x..x + tw].to_vec(),
            });
        }
        out
    }

    fn expand_set(
        &self,
        set: &SubstitutionSet,
        tw: usize,
        th: usize,
        budget: usize,
    ) -> Result<Vec<Tracked>> {
        let mut out = HashSet::new();
        let mut count = 0usize;
        let flow = for_each_compatible(set, &self.window, |sp| {
            count += 1;
            if count > budget {
                return ControlFlow::Break(());
            }
            let image = apply_nonuniform(set, sp, &self.window).expect("layout is compatible");
            for win in image.windows(tw, th) {
                out.insert(win.pattern);
            }
            ControlFlow::Continue(())
        })?;
        if flow.is_break() {
            return Err(Error::BudgetExceeded {
                budget,
                partial: count - 1,
            });
        }
        Ok(out
            .into_iter()
            .map(|window| Tracked {
                window,
                rows: Vec::new(),
                cols: Vec::new(),
            })
            .collect())
    }
}

/// The letters along row `index` (horizontal) or column `index` (vertical).
pub fn row_word(p: &RectPattern, axis: Axis, index: usize) -> Result<Vec<Letter>> {
    let limit = match axis {
        Axis::Horizontal => p.height(),
        Axis::Vertical => p.width(),
    };
    if index >= limit {
        return Err(Error::OutOfRange {
            coord: index as i64,
            start: 0,
            end: limit as i64,
        });
    }
    Ok(match axis {
        Axis::Horizontal => p.row(index).to_vec(),
        Axis::Vertical => p.column(index).copied().collect(),
    })
}
