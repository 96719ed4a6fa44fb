//! Compatibility, uniform and non-uniform application, composition and
//! iteration of substitutions.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::grid::{AxisProfile, SizeProfile};
use crate::pattern::{Grid, Letter, RectPattern};
use crate::substitution::{SequenceSpec, Substitution, SubstitutionPattern, SubstitutionSet};

/// Same column implies same image width, same row implies same image height.
fn aligned(w: usize, h: usize, extents: impl Fn(usize, usize) -> (usize, usize)) -> bool {
    for x in 0..w {
        let width = extents(x, 0).0;
        if (1..h).any(|y| extents(x, y).0 != width) {
            return false;
        }
    }
    for y in 0..h {
        let height = extents(0, y).1;
        if (1..w).any(|x| extents(x, y).1 != height) {
            return false;
        }
    }
    true
}

fn check_letters(p: &RectPattern, size: usize) -> Result<()> {
    match p.cells().iter().find(|l| l.index() >= size) {
        Some(l) => Err(Error::AlphabetMismatch {
            letter: l.index(),
            size,
        }),
        None => Ok(()),
    }
}

fn check_shapes(set: &SubstitutionSet, sp: &SubstitutionPattern, p: &RectPattern) -> Result<()> {
    if sp.shape() != p.shape() {
        return Err(Error::ShapeMismatch {
            expected: p.shape(),
            found: sp.shape(),
        });
    }
    set.check_substitution_pattern(sp)?;
    check_letters(p, set.alphabet().len())
}

/// Whether `s` can be applied to every letter of `p` at once.
pub fn check_compat_uniform(s: &Substitution, p: &RectPattern) -> Result<bool> {
    check_letters(p, s.alphabet_len())?;
    Ok(aligned(p.width(), p.height(), |x, y| {
        s.extents(*p.get(x, y))
    }))
}

/// Whether the substitution pattern `sp` can be applied cellwise to `p`.
pub fn check_compat_nonuniform(
    set: &SubstitutionSet,
    sp: &SubstitutionPattern,
    p: &RectPattern,
) -> Result<bool> {
    check_shapes(set, sp, p)?;
    Ok(aligned(p.width(), p.height(), |x, y| {
        set.member(*sp.get(x, y)).extents(*p.get(x, y))
    }))
}

fn profile_by(
    p: &RectPattern,
    extents: impl Fn(usize, usize) -> (usize, usize),
) -> Result<SizeProfile> {
    if !aligned(p.width(), p.height(), &extents) {
        return Err(Error::Incompatible);
    }
    Ok(SizeProfile {
        horizontal: AxisProfile::new(0, (0..p.width()).map(|x| extents(x, 0).0).collect())?,
        vertical: AxisProfile::new(0, (0..p.height()).map(|y| extents(0, y).1).collect())?,
    })
}

/// Column widths and row heights of the image of `p` under `sp`.
pub fn size_profile(
    set: &SubstitutionSet,
    sp: &SubstitutionPattern,
    p: &RectPattern,
) -> Result<SizeProfile> {
    check_shapes(set, sp, p)?;
    profile_by(p, |x, y| set.member(*sp.get(x, y)).extents(*p.get(x, y)))
}

fn assemble<'a>(
    p: &RectPattern,
    image: impl Fn(usize, usize) -> &'a RectPattern,
) -> Result<RectPattern> {
    let profile = profile_by(p, |x, y| image(x, y).shape())?;
    let xs = profile.horizontal.offsets();
    let ys = profile.vertical.offsets();
    let mut out = Grid::filled(xs[p.width()], ys[p.height()], Letter(0))?;
    for (y, &oy) in ys[..p.height()].iter().enumerate() {
        for (x, &ox) in xs[..p.width()].iter().enumerate() {
            out.blit(ox, oy, image(x, y));
        }
    }
    Ok(out)
}

/// Applies `sp` cellwise to `p`, laying the image blocks on the non-regular
/// grid given by [`size_profile`].
pub fn apply_nonuniform(
    set: &SubstitutionSet,
    sp: &SubstitutionPattern,
    p: &RectPattern,
) -> Result<RectPattern> {
    check_shapes(set, sp, p)?;
    assemble(p, |x, y| set.member(*sp.get(x, y)).image(*p.get(x, y)))
}

/// Applies `s` to every letter of `p`.
pub fn apply_uniform(s: &Substitution, p: &RectPattern) -> Result<RectPattern> {
    check_letters(p, s.alphabet_len())?;
    assemble(p, |x, y| s.image(*p.get(x, y)))
}

/// The first two-cell pattern compatible with `inner` whose image under
/// `inner` is not compatible with `outer`, if any.
///
/// Compatibility only ever constrains pairs of cells sharing a row or a
/// column, so horizontal and vertical pairs (including a letter paired with
/// itself) decide whether `outer` is compatible with `inner`.
pub fn composition_witness(
    outer: &Substitution,
    inner: &Substitution,
) -> Result<Option<RectPattern>> {
    let n = inner.alphabet_len();
    if outer.alphabet_len() != n {
        return Err(Error::AlphabetMismatch {
            letter: outer.alphabet_len().max(n) - 1,
            size: outer.alphabet_len().min(n),
        });
    }
    let pairs = |w: usize, h: usize| {
        (0..n).flat_map(move |a| {
            (0..n).map(move |b| {
                Grid::new(w, h, vec![Letter::new(a), Letter::new(b)]).expect("two cells")
            })
        })
    };
    for pair in pairs(2, 1).chain(pairs(1, 2)) {
        if !check_compat_uniform(inner, &pair)? {
            continue;
        }
        let img = apply_uniform(inner, &pair)?;
        if !check_compat_uniform(outer, &img)? {
            return Ok(Some(pair));
        }
    }
    Ok(None)
}

/// `outer ∘ inner`: the image of `a` is `outer(inner(a))`.
pub fn compose(outer: &Substitution, inner: &Substitution) -> Result<Substitution> {
    if let Some(witness) = composition_witness(outer, inner)? {
        return Err(Error::IncompatibleComposition {
            outer: outer.name().to_string(),
            inner: inner.name().to_string(),
            witness,
        });
    }
    let images = inner
        .images()
        .iter()
        .map(|img| apply_uniform(outer, img))
        .collect::<Result<Vec<_>>>()?;
    Substitution::allowing_degenerate(format!("{}∘{}", outer.name(), inner.name()), images)
}

/// `s_0 ∘ s_1 ∘ ... ∘ s_n` applied to `p`, innermost first.
pub fn iterate_pattern(
    set: &SubstitutionSet,
    seq: &SequenceSpec,
    n: usize,
    p: &RectPattern,
) -> Result<RectPattern> {
    check_letters(p, set.alphabet().len())?;
    let mut cur = p.clone();
    for stage in (0..=n).rev() {
        let s = set.member(seq.resolve(set, stage)?);
        cur = apply_uniform(s, &cur).map_err(|e| match e {
            Error::Incompatible => Error::StageIncompatible {
                stage,
                name: s.name().to_string(),
            },
            e => e,
        })?;
    }
    Ok(cur)
}

/// The level-`n` iterate `s_0 ∘ ... ∘ s_n (a)` of the sequence on `a`.
pub fn iterate(
    set: &SubstitutionSet,
    seq: &SequenceSpec,
    n: usize,
    a: Letter,
) -> Result<RectPattern> {
    iterate_pattern(set, seq, n, &RectPattern::letter(a))
}

/// A choice of column widths and row heights for the image of a pattern,
/// together with the substitutions realizing each cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub widths: Vec<usize>,
    pub heights: Vec<usize>,
    /// Member indices whose image of the cell has exactly the chosen extents.
    pub options: Grid<Vec<usize>>,
}

impl Layout {
    /// Number of substitution patterns realizing this layout.
    pub fn count(&self) -> usize {
        self.options.cells().iter().map(Vec::len).product()
    }

    /// Visits every substitution pattern realizing this layout.
    pub fn for_each_pattern<F>(&self, mut f: F) -> ControlFlow<()>
    where
        F: FnMut(&SubstitutionPattern) -> ControlFlow<()>,
    {
        let opts = self.options.cells();
        let mut digits = vec![0usize; opts.len()];
        let mut sp = self.options.map(|o| o[0]);
        loop {
            f(&sp)?;
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return ControlFlow::Continue(());
                }
                digits[i] += 1;
                if digits[i] < opts[i].len() {
                    let (x, y) = (i % sp.width(), i / sp.width());
                    sp.set(x, y, opts[i][digits[i]]);
                    break;
                }
                digits[i] = 0;
                let (x, y) = (i % sp.width(), i / sp.width());
                sp.set(x, y, opts[i][0]);
                i += 1;
            }
        }
    }
}

/// Visits every layout compatible with `p`: column widths and row heights
/// such that each cell has at least one member producing a block of exactly
/// that size.
pub fn for_each_layout<F>(
    set: &SubstitutionSet,
    p: &RectPattern,
    mut f: F,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&Layout) -> ControlFlow<()>,
{
    check_letters(p, set.alphabet().len())?;
    let (w, h) = p.shape();
    let cand = |cells: &mut dyn Iterator<Item = Letter>, pick: fn((usize, usize)) -> usize| {
        let mut acc: Option<BTreeSet<usize>> = None;
        for a in cells {
            let here: BTreeSet<usize> = set.members().iter().map(|s| pick(s.extents(a))).collect();
            acc = Some(match acc {
                None => here,
                Some(prev) => prev.intersection(&here).copied().collect(),
            });
        }
        acc.unwrap_or_default().into_iter().collect::<Vec<_>>()
    };
    let col_cands: Vec<Vec<usize>> = (0..w)
        .map(|x| cand(&mut p.column(x).copied(), |e| e.0))
        .collect();
    let row_cands: Vec<Vec<usize>> = (0..h)
        .map(|y| cand(&mut p.row(y).iter().copied(), |e| e.1))
        .collect();
    if col_cands.iter().chain(&row_cands).any(Vec::is_empty) {
        return Ok(ControlFlow::Continue(()));
    }

    let mut widths = vec![0; w];
    let mut heights = vec![0; h];
    let mut options = Grid::filled(w, h, Vec::new())?;
    Ok(layout_cols(
        set,
        p,
        &col_cands,
        &row_cands,
        0,
        &mut widths,
        &mut heights,
        &mut options,
        &mut f,
    ))
}

#[allow(clippy::too_many_arguments)]
fn layout_cols<F>(
    set: &SubstitutionSet,
    p: &RectPattern,
    col_cands: &[Vec<usize>],
    row_cands: &[Vec<usize>],
    x: usize,
    widths: &mut Vec<usize>,
    heights: &mut Vec<usize>,
    options: &mut Grid<Vec<usize>>,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Layout) -> ControlFlow<()>,
{
    if x == col_cands.len() {
        return layout_rows(set, p, row_cands, 0, widths, heights, options, f);
    }
    for &cw in &col_cands[x] {
        widths[x] = cw;
        layout_cols(
            set,
            p,
            col_cands,
            row_cands,
            x + 1,
            widths,
            heights,
            options,
            f,
        )?;
    }
    ControlFlow::Continue(())
}

#[allow(clippy::too_many_arguments)]
fn layout_rows<F>(
    set: &SubstitutionSet,
    p: &RectPattern,
    row_cands: &[Vec<usize>],
    y: usize,
    widths: &mut Vec<usize>,
    heights: &mut Vec<usize>,
    options: &mut Grid<Vec<usize>>,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Layout) -> ControlFlow<()>,
{
    if y == row_cands.len() {
        return f(&Layout {
            widths: widths.clone(),
            heights: heights.clone(),
            options: options.clone(),
        });
    }
    'height: for &rh in &row_cands[y] {
        heights[y] = rh;
        for (x, &cw) in widths.iter().enumerate() {
            let a = *p.get(x, y);
            let opts: Vec<usize> = (0..set.len())
                .filter(|&i| set.member(i).extents(a) == (cw, rh))
                .collect();
            if opts.is_empty() {
                continue 'height;
            }
            options.set(x, y, opts);
        }
        layout_rows(set, p, row_cands, y + 1, widths, heights, options, f)?;
    }
    ControlFlow::Continue(())
}

/// Visits every substitution pattern compatible with `p`.
pub fn for_each_compatible<F>(
    set: &SubstitutionSet,
    p: &RectPattern,
    mut f: F,
) -> Result<ControlFlow<()>>
where
    F: FnMut(&SubstitutionPattern) -> ControlFlow<()>,
{
    for_each_layout(set, p, |layout| layout.for_each_pattern(&mut f))
}

/// All substitution patterns compatible with `p`, failing once more than
/// `limit` have been produced.
pub fn compatible_substitution_patterns(
    set: &SubstitutionSet,
    p: &RectPattern,
    limit: usize,
) -> Result<Vec<SubstitutionPattern>> {
    let mut out = Vec::new();
    let flow = for_each_compatible(set, p, |sp| {
        if out.len() == limit {
            return ControlFlow::Break(());
        }
        out.push(sp.clone());
        ControlFlow::Continue(())
    })?;
    if flow.is_break() {
        return Err(Error::BudgetExceeded {
            budget: limit,
            partial: out.len(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Alphabet;

    fn ob() -> Alphabet {
        Alphabet::from_glyphs("ob").unwrap()
    }

    fn sub(name: &str, o: &str, b: &str) -> Substitution {
        let a = ob();
        Substitution::new(
            name,
            vec![a.parse_pattern(o).unwrap(), a.parse_pattern(b).unwrap()],
        )
        .unwrap()
    }

    fn ex1() -> Substitution {
        sub("s", "oo/oo", "oo/bo")
    }

    fn ex3() -> SubstitutionSet {
        SubstitutionSet::new(
            ob(),
            vec![
                sub("a", "oo/oo", "oo/bo"),
                sub("b", "obo/obo", "ooo/boo"),
                sub("c", "oo/bo/ob", "oo/ob/bb"),
                sub("d", "bbb/bbb/ooo", "ooo/ooo/bbb"),
            ],
        )
        .unwrap()
    }

    /// Mixed supports: `o` gives 2x2, `b` gives 3x3, and `t(o)` has both
    /// letters on its top row.
    fn mixed() -> Substitution {
        sub("t", "ob/oo", "bbb/bbb/bbb")
    }

    fn pat(t: &str) -> RectPattern {
        ob().parse_pattern(t).unwrap()
    }

    fn show(p: &RectPattern) -> String {
        ob().format_inline(p)
    }

    #[test]
    fn uniform_compatibility() {
        assert!(check_compat_uniform(&ex1(), &pat("obb/boo")).unwrap());
        assert!(!check_compat_uniform(&mixed(), &pat("ob")).unwrap());
        assert!(check_compat_uniform(&mixed(), &pat("o")).unwrap());
        let three = Grid::new(1, 1, vec![Letter(2)]).unwrap();
        assert!(matches!(
            check_compat_uniform(&ex1(), &three),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn nonuniform_compatibility_matches_worked_example() {
        let set = ex3();
        let p = pat("obbb/bboo");
        let s = set.parse_substitution_pattern("aaba/ccdc").unwrap();
        let s1 = set.parse_substitution_pattern("aaaa/cccc").unwrap();
        let s2 = set.parse_substitution_pattern("aaba/ccda").unwrap();
        assert!(check_compat_nonuniform(&set, &s, &p).unwrap());
        assert!(check_compat_nonuniform(&set, &s1, &p).unwrap());
        assert!(!check_compat_nonuniform(&set, &s2, &p).unwrap());
        let narrow = set.parse_substitution_pattern("aab/ccd").unwrap();
        assert!(matches!(
            check_compat_nonuniform(&set, &narrow, &p),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn profiles() {
        let set = ex3();
        let p = pat("obbb/bboo");
        let s = set.parse_substitution_pattern("aaba/ccdc").unwrap();
        let prof = size_profile(&set, &s, &p).unwrap();
        assert_eq!(prof.horizontal.extents(), &[2, 2, 3, 2]);
        assert_eq!(prof.vertical.extents(), &[3, 2]);
        let s2 = set.parse_substitution_pattern("aaba/ccda").unwrap();
        assert_eq!(size_profile(&set, &s2, &p), Err(Error::Incompatible));

        let single = SubstitutionSet::singleton(ob(), ex1()).unwrap();
        let constant = Grid::filled(3, 3, 0).unwrap();
        let prof = size_profile(&single, &constant, &pat("ooo/obo/bbo")).unwrap();
        assert_eq!(prof.horizontal.extents(), &[2, 2, 2]);
        assert_eq!(prof.vertical.extents(), &[2, 2, 2]);
        let one = size_profile(&set, &Grid::filled(1, 1, 3).unwrap(), &pat("o")).unwrap();
        assert_eq!(
            (one.horizontal.extents(), one.vertical.extents()),
            (&[3][..], &[3][..])
        );
    }

    #[test]
    fn uniform_application_worked_example() {
        let out = apply_uniform(&ex1(), &pat("obb/boo")).unwrap();
        assert_eq!(show(&out), "oooooo/oobobo/oooooo/booooo");
        let zero = sub("z", "oo/oo", "oo/oo");
        assert_eq!(show(&apply_uniform(&zero, &pat("b")).unwrap()), "oo/oo");
        let twice = apply_uniform(&ex1(), &apply_uniform(&ex1(), &pat("b")).unwrap()).unwrap();
        assert_eq!(show(&twice), "oooo/oooo/oooo/booo");
    }

    #[test]
    fn incompatible_application_fails() {
        assert_eq!(
            apply_uniform(&mixed(), &pat("ob")),
            Err(Error::Incompatible)
        );
    }

    #[test]
    fn composition() {
        let ss = compose(&ex1(), &ex1()).unwrap();
        assert_eq!(ss.name(), "s∘s");
        assert_eq!(show(ss.image(Letter(1))), "oooo/oooo/oooo/booo");
        let zero = sub("z", "oo/oo", "oo/oo");
        let zz = compose(&zero, &zero).unwrap();
        assert!(zz.images().iter().all(|i| show(i) == "oooo/oooo/oooo/oooo"));
    }

    #[test]
    fn incompatible_composition_reports_two_cell_witness() {
        let t = mixed();
        let err = compose(&t, &t).unwrap_err();
        let Error::IncompatibleComposition { witness, .. } = err else {
            panic!("expected a witness, got {err:?}");
        };
        // Independent check: the witness is compatible with t, its image is not.
        assert_eq!(witness.len(), 2);
        assert!(check_compat_uniform(&t, &witness).unwrap());
        assert!(!check_compat_uniform(&t, &apply_uniform(&t, &witness).unwrap()).unwrap());
        assert_eq!(show(&witness), "oo");
    }

    #[test]
    fn iterate_innermost_first() {
        let set = ex3();
        let seq = SequenceSpec::new(vec!["a".into(), "c".into()], vec!["d".into()]).unwrap();
        let o = Letter(0);
        assert_eq!(iterate(&set, &seq, 0, o).unwrap(), *set.member(0).image(o));
        let lvl1 = iterate(&set, &seq, 1, o).unwrap();
        assert_eq!(lvl1.shape(), (4, 6));
        assert_eq!(
            lvl1,
            apply_uniform(set.member(0), set.member(2).image(o)).unwrap()
        );

        let single = SubstitutionSet::singleton(ob(), ex1()).unwrap();
        let b1 = iterate(&single, &SequenceSpec::constant("s"), 1, Letter(1)).unwrap();
        assert_eq!(show(&b1), "oooo/oooo/oooo/booo");
    }

    #[test]
    fn iterate_reports_failing_stage() {
        let set = SubstitutionSet::singleton(ob(), mixed()).unwrap();
        let err = iterate(&set, &SequenceSpec::constant("t"), 1, Letter(0)).unwrap_err();
        assert_eq!(
            err,
            Error::StageIncompatible {
                stage: 0,
                name: "t".into()
            }
        );
    }

    #[test]
    fn compatible_patterns_match_brute_force() {
        let set = ex3();
        let p = pat("obb/boo");
        let mut fast = compatible_substitution_patterns(&set, &p, 10_000).unwrap();
        fast.sort();
        let mut brute = Vec::new();
        let cells = p.len();
        for code in 0..set.len().pow(cells as u32) {
            let mut c = code;
            let sp = Grid::from_fn(p.width(), p.height(), |_, _| {
                let v = c % set.len();
                c /= set.len();
                v
            })
            .unwrap();
            if check_compat_nonuniform(&set, &sp, &p).unwrap() {
                brute.push(sp);
            }
        }
        brute.sort();
        assert_eq!(fast, brute);
        assert_eq!(fast.len(), 1 << 5);
        assert!(matches!(
            compatible_substitution_patterns(&set, &p, 3),
            Err(Error::BudgetExceeded {
                budget: 3,
                partial: 3
            })
        ));
    }
}
