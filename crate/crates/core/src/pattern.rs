//! Alphabets, letters and finite rectangular patterns.
//!
//! Coordinates are `(x, y)` with `y` growing upward, so cell `(0, 0)` is the
//! bottom-left corner. Text renderings list rows from the top down, which is
//! how patterns are usually drawn.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol in an [`Alphabet`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

impl Letter {
    pub fn new(index: usize) -> Self {
        Letter(index as u32)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An ordered set of distinct symbols.
///
/// Symbols loaded from documents are single glyphs; derived alphabets (the
/// decorated alphabet, alphabets of substitution names) may use longer
/// tokens, in which case rows are rendered with spaces between cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut seen = HashSet::new();
        for sym in &symbols {
            if sym.is_empty() || sym.chars().any(|c| c.is_whitespace() || c == '/') {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol `{sym}` is empty or contains whitespace or `/`"
                )));
            }
            if !seen.insert(sym.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol `{sym}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Builds an alphabet with one glyph per character of `glyphs`.
    pub fn from_glyphs(glyphs: &str) -> Result<Self> {
        Alphabet::new(glyphs.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// True when every symbol is a single character.
    pub fn is_glyph_alphabet(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter.index()]
    }

    pub fn letter(&self, symbol: &str) -> Option<Letter> {
        self.symbols
            .iter()
            .position(|s| s == symbol)
            .map(Letter::new)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len()).map(Letter::new)
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.index() < self.symbols.len()
    }

    /// Checks that every cell of `p` names a letter of this alphabet.
    pub fn check_pattern(&self, p: &RectPattern) -> Result<()> {
        match p.cells().iter().find(|l| !self.contains(**l)) {
            Some(l) => Err(Error::AlphabetMismatch {
                letter: l.index(),
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// Parses glyph rows listed top to bottom.
    ///
    /// Rows are separated by newlines or `/`. A row containing whitespace is
    /// split into whitespace-separated tokens; otherwise each character is a
    /// token when the alphabet consists of glyphs, and the whole row is a
    /// single token when it does not.
    pub fn parse_pattern(&self, text: &str) -> Result<RectPattern> {
        let rows = split_rows(text, self.is_glyph_alphabet())?;
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|tok| self.letter(&tok).ok_or(Error::UnknownSymbol(tok)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Grid::from_rows_top_down(rows)
    }

    /// Renders `p` as rows from the top down, joined by `\n`.
    pub fn format_pattern(&self, p: &RectPattern) -> String {
        format_rows(p, |l| self.symbol(*l), self.is_glyph_alphabet())
    }

    /// Renders `p` on a single line with `/` between rows.
    pub fn format_inline(&self, p: &RectPattern) -> String {
        self.format_pattern(p).replace('\n', "/")
    }
}

pub(crate) fn split_rows(text: &str, glyph_mode: bool) -> Result<Vec<Vec<String>>> {
    let rows: Vec<Vec<String>> = text
        .split(['\n', '/'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|r| {
            if r.chars().any(char::is_whitespace) {
                r.split_whitespace().map(String::from).collect()
            } else if glyph_mode {
                r.chars().map(String::from).collect()
            } else {
                vec![r.to_string()]
            }
        })
        .collect();
    if rows.is_empty() {
        return Err(Error::InvalidPattern("no rows".into()));
    }
    Ok(rows)
}

pub(crate) fn format_rows<'a, T, F>(grid: &Grid<T>, symbol: F, glyph_mode: bool) -> String
where
    F: Fn(&T) -> &'a str,
{
    let sep = if glyph_mode { "" } else { " " };
    grid.rows_top_down()
        .map(|row| row.iter().map(&symbol).collect::<Vec<_>>().join(sep))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A finite rectangular array with `y` growing upward.
///
/// Cells are stored row-major starting from the bottom row. Both extents are
/// at least one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    cells: Vec<T>,
}

/// A rectangular pattern over an alphabet.
pub type RectPattern = Grid<Letter>;

impl<T> Grid<T> {
    /// `cells` is row-major from the bottom row up.
    pub fn new(width: usize, height: usize, cells: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidPattern(format!(
                "empty extent {width}x{height}"
            )));
        }
        if cells.len() != width * height {
            return Err(Error::InvalidPattern(format!(
                "{} cells for a {width}x{height} grid",
                cells.len()
            )));
        }
        Ok(Grid {
            width,
            height,
            cells,
        })
    }

    /// Builds a grid from rows listed top to bottom.
    pub fn from_rows_top_down(rows: Vec<Vec<T>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidPattern("ragged rows".into()));
        }
        let cells = rows.into_iter().rev().flatten().collect();
        Grid::new(width, height, cells)
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        let mut cells = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                cells.push(f(x, y));
            }
        }
        Grid::new(width, height, cells)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Row-major cells, bottom row first.
    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn get(&self, x: usize, y: usize) -> &T {
        debug_assert!(x < self.width && y < self.height);
        &self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: T) {
        debug_assert!(x < self.width && y < self.height);
        self.cells[y * self.width + x] = value;
    }

    /// Row `y` (0 = bottom), left to right.
    pub fn row(&self, y: usize) -> &[T] {
        &self.cells[y * self.width..(y + 1) * self.width]
    }

    pub fn rows_top_down(&self) -> impl Iterator<Item = &[T]> {
        (0..self.height).rev().map(move |y| self.row(y))
    }

    pub fn column(&self, x: usize) -> impl Iterator<Item = &T> {
        (0..self.height).map(move |y| self.get(x, y))
    }

    /// Iterates `((x, y), cell)` in storage order.
    pub fn indexed(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        let w = self.width;
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, c)| ((i % w, i / w), c))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            cells: self.cells.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Grid<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Grid::new(width, height, vec![value; width * height])
    }

    /// The `w`x`h` sub-grid whose bottom-left cell is `(x, y)`.
    pub fn sub(&self, x: usize, y: usize, w: usize, h: usize) -> Result<Self> {
        if w == 0 || h == 0 || x + w > self.width || y + h > self.height {
            return Err(Error::WindowTooLarge {
                width: w,
                height: h,
                reason: format!("at ({x}, {y}) inside a {}x{} grid", self.width, self.height),
            });
        }
        let mut cells = Vec::with_capacity(w * h);
        for yy in y..y + h {
            cells.extend_from_slice(&self.row(yy)[x..x + w]);
        }
        Ok(Grid {
            width: w,
            height: h,
            cells,
        })
    }

    /// Copies `src` into `self` with its bottom-left cell at `(x, y)`.
    pub fn blit(&mut self, x: usize, y: usize, src: &Grid<T>) {
        debug_assert!(x + src.width <= self.width && y + src.height <= self.height);
        for sy in 0..src.height {
            let dst = (y + sy) * self.width + x;
            self.cells[dst..dst + src.width].clone_from_slice(src.row(sy));
        }
    }

    /// Every `w`x`h` placement inside the grid, with its anchor.
    pub fn windows(&self, w: usize, h: usize) -> impl Iterator<Item = Window<T>> + '_ {
        let xs = (self.width + 1).saturating_sub(w);
        let ys = (self.height + 1).saturating_sub(h);
        let ok = w > 0 && h > 0;
        (0..if ok { ys } else { 0 }).flat_map(move |y| {
            (0..xs).map(move |x| Window {
                pattern: self.sub(x, y, w, h).expect("window inside grid"),
                anchor: (x as i64, y as i64),
            })
        })
    }
}

impl<T: Ord> Ord for Grid<T> {
    /// Canonical order: width, height, then cells row by row from the top.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.width, self.height)
            .cmp(&(other.width, other.height))
            .then_with(|| self.rows_top_down().cmp(other.rows_top_down()))
    }
}

impl<T: Ord> PartialOrd for Grid<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A pattern together with the absolute position of its cell `(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window<T = Letter> {
    pub pattern: Grid<T>,
    pub anchor: (i64, i64),
}

impl RectPattern {
    /// Distinct letters occurring in the pattern.
    pub fn letter_set(&self) -> BTreeSet<Letter> {
        self.cells.iter().copied().collect()
    }

    pub fn occurrences(&self, letter: Letter) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.indexed()
            .filter(move |(_, l)| **l == letter)
            .map(|(xy, _)| xy)
    }

    /// A single-cell pattern.
    pub fn letter(letter: Letter) -> Self {
        Grid {
            width: 1,
            height: 1,
            cells: vec![letter],
        }
    }

    /// True when `small` occurs somewhere in `self`.
    pub fn contains_pattern(&self, small: &RectPattern) -> bool {
        self.windows(small.width, small.height)
            .any(|w| &w.pattern == small)
    }
}
