//! Property A: every way of deriving a 2x2 block `l` of an S-pattern `p` on
//! its own can be realized by a derivation of the whole of `p`, the blocks
//! growing out of `l`'s placement being exactly the derivations of `l`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::apply::{
    apply_nonuniform, check_compat_nonuniform, for_each_compatible, for_each_layout, size_profile,
    Layout,
};
use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::language::s_pattern_levels;
use crate::pattern::{Grid, RectPattern};
use crate::substitution::{SubstitutionPattern, SubstitutionSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PropertyAStatus {
    HoldsUniformSupport,
    HoldsSingleton,
    NoCounterexampleUpToBounds,
    Counterexample,
    Unknown,
}

/// A block derivation that no derivation of the surrounding pattern matches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyAWitness {
    pub pattern: RectPattern,
    /// Lower-left corner of the 2x2 block inside `pattern`.
    pub placement: (usize, usize),
    /// `l_0 = l, l_1, ..., l_n`.
    pub chain: Vec<RectPattern>,
    /// The substitution pattern producing each `l_{t+1}` from `l_t`.
    pub steps: Vec<SubstitutionPattern>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyAVerdict {
    pub status: PropertyAStatus,
    pub witness: Option<PropertyAWitness>,
}

impl PropertyAVerdict {
    fn of(status: PropertyAStatus) -> Self {
        PropertyAVerdict {
            status,
            witness: None,
        }
    }

    pub fn holds(&self) -> bool {
        matches!(
            self.status,
            PropertyAStatus::HoldsUniformSupport | PropertyAStatus::HoldsSingleton
        )
    }
}

/// Cheap sufficient conditions: a single substitution, or letter-independent
/// supports. A one-member set always reports `HoldsSingleton`.
pub fn sufficient_property_a(set: &SubstitutionSet) -> PropertyAVerdict {
    if set.len() == 1 {
        PropertyAVerdict::of(PropertyAStatus::HoldsSingleton)
    } else if set.members().iter().all(|s| s.has_uniform_support()) {
        PropertyAVerdict::of(PropertyAStatus::HoldsUniformSupport)
    } else {
        PropertyAVerdict::of(PropertyAStatus::Unknown)
    }
}

/// Exhaustive search for a counterexample among S-patterns of level `1..=k`
/// and block derivations of length `1..=n`. The budget bounds the total
/// number of derivation steps explored.
pub fn bounded_property_a(
    set: &SubstitutionSet,
    k: usize,
    n: usize,
    budget: usize,
) -> Result<PropertyAVerdict> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "the pattern level must be at least 1".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the derivation depth must be at least 1".into(),
        ));
    }
    let levels = s_pattern_levels(set, k, budget)?;
    let patterns: BTreeSet<RectPattern> = levels.into_iter().skip(1).flatten().collect();
    let items: Vec<(&RectPattern, (usize, usize))> = patterns
        .iter()
        .filter(|p| p.width() >= 2 && p.height() >= 2)
        .flat_map(|p| {
            (0..p.height() - 1).flat_map(move |y| (0..p.width() - 1).map(move |x| (p, (x, y))))
        })
        .collect();

    let search = Search {
        set,
        depth: n,
        budget,
        spent: AtomicUsize::new(0),
    };
    let found = items
        .par_iter()
        .map(|(p, placement)| search.item(p, *placement))
        .find_map_first(|r| r.transpose());
    match found {
        Some(Ok(w)) => Ok(PropertyAVerdict {
            status: PropertyAStatus::Counterexample,
            witness: Some(w),
        }),
        Some(Err(e)) => Err(e),
        None => Ok(PropertyAVerdict::of(
            PropertyAStatus::NoCounterexampleUpToBounds,
        )),
    }
}

/// A derivation of the whole pattern together with the rectangle that grew
/// out of the tracked block: `(x, y, width, height)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct State {
    p: RectPattern,
    region: (usize, usize, usize, usize),
}

struct Search<'a> {
    set: &'a SubstitutionSet,
    depth: usize,
    budget: usize,
    spent: AtomicUsize,
}

impl Search<'_> {
    fn charge(&self) -> Result<()> {
        let spent = self.spent.fetch_add(1, Ordering::Relaxed) + 1;
        if spent > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                partial: spent - 1,
            });
        }
        Ok(())
    }

    fn item(&self, p: &RectPattern, placement: (usize, usize)) -> Result<Option<PropertyAWitness>> {
        let l = p.sub(placement.0, placement.1, 2, 2)?;
        let start = vec![State {
            p: p.clone(),
            region: (placement.0, placement.1, 2, 2),
        }];
        let mut chain = vec![l];
        let mut steps = Vec::new();
        Ok(self
            .extend(&start, &mut chain, &mut steps)?
            .then(|| PropertyAWitness {
                pattern: p.clone(),
                placement,
                chain,
                steps,
            }))
    }

    /// Returns true, leaving the failing chain in `chain`/`steps`, when some
    /// extension of the block chain has no matching pattern derivation.
    fn extend(
        &self,
        states: &[State],
        chain: &mut Vec<RectPattern>,
        steps: &mut Vec<SubstitutionPattern>,
    ) -> Result<bool> {
        if steps.len() == self.depth {
            return Ok(false);
        }
        let l = chain.last().expect("non-empty").clone();
        let mut next_blocks: BTreeMap<RectPattern, SubstitutionPattern> = BTreeMap::new();
        let mut failure = None;
        let _ = for_each_compatible(self.set, &l, |sp| {
            match apply_nonuniform(self.set, sp, &l) {
                Ok(img) => {
                    next_blocks.entry(img).or_insert_with(|| sp.clone());
                    ControlFlow::Continue(())
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        // A block step only has to be matched when the pattern derivations
        // reached so far can be continued at all.
        let mut derivable = false;
        for st in states {
            if for_each_layout(self.set, &st.p, |_| ControlFlow::Break(()))?.is_break() {
                derivable = true;
                break;
            }
        }
        if !derivable {
            return Ok(false);
        }
        let last = steps.len() + 1 == self.depth;
        for (block, sp) in next_blocks {
            self.charge()?;
            chain.push(block);
            steps.push(sp);
            let target = chain.last().expect("just pushed");
            if last {
                let mut realized = false;
                for st in states {
                    if self.advance(st, target, true)?.0 {
                        realized = true;
                        break;
                    }
                }
                if !realized {
                    return Ok(true);
                }
            } else {
                let mut next = BTreeSet::new();
                for st in states {
                    next.extend(self.advance(st, target, false)?.1);
                }
                if next.is_empty() {
                    return Ok(true);
                }
                let next: Vec<State> = next.into_iter().collect();
                if self.extend(&next, chain, steps)? {
                    return Ok(true);
                }
            }
            chain.pop();
            steps.pop();
        }
        Ok(false)
    }

    /// Derivations of `st.p` whose tracked region becomes `target`. With
    /// `exists_only` the search stops at the first one and no states are
    /// built.
    fn advance(
        &self,
        st: &State,
        target: &RectPattern,
        exists_only: bool,
    ) -> Result<(bool, Vec<State>)> {
        let (rx, ry, _, _) = st.region;
        let mut found = false;
        let mut out = Vec::new();
        let mut failure = None;
        let _ = for_each_layout(self.set, &st.p, |layout| {
            let Some(filtered) = restrict(self.set, &st.p, layout, st.region, target) else {
                return ControlFlow::Continue(());
            };
            found = true;
            if exists_only {
                return ControlFlow::Break(());
            }
            let nx: usize = layout.widths[..rx].iter().sum();
            let ny: usize = layout.heights[..ry].iter().sum();
            let region = (nx, ny, target.width(), target.height());
            filtered.for_each_pattern(|sp| {
                if let Err(e) = self.charge() {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
                match apply_nonuniform(self.set, sp, &st.p) {
                    Ok(p) => {
                        out.push(State { p, region });
                        ControlFlow::Continue(())
                    }
                    Err(e) => {
                        failure = Some(e);
                        ControlFlow::Break(())
                    }
                }
            })
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((found, out))
    }
}

/// The layout with options inside the region narrowed to those producing
/// the matching block of `target`, or `None` if that is impossible.
fn restrict(
    set: &SubstitutionSet,
    p: &RectPattern,
    layout: &Layout,
    (rx, ry, rw, rh): (usize, usize, usize, usize),
    target: &RectPattern,
) -> Option<Layout> {
    let cols = &layout.widths[rx..rx + rw];
    let rows = &layout.heights[ry..ry + rh];
    if cols.iter().sum::<usize>() != target.width() || rows.iter().sum::<usize>() != target.height()
    {
        return None;
    }
    let mut options = layout.options.clone();
    let mut oy = 0;
    for (j, &h) in rows.iter().enumerate() {
        let mut ox = 0;
        for (i, &w) in cols.iter().enumerate() {
            let (x, y) = (rx + i, ry + j);
            let block = target.sub(ox, oy, w, h).ok()?;
            let a = *p.get(x, y);
            let kept: Vec<usize> = options
                .get(x, y)
                .iter()
                .copied()
                .filter(|&m| *set.member(m).image(a) == block)
                .collect();
            if kept.is_empty() {
                return None;
            }
            options.set(x, y, kept);
            ox += w;
        }
        oy += h;
    }
    Some(Layout {
        widths: layout.widths.clone(),
        heights: layout.heights.clone(),
        options,
    })
}

/// Largest number of candidate substitution patterns the independent
/// witness check will enumerate per step.
const VERIFY_LIMIT: u128 = 1 << 22;

/// Re-checks a witness without the layout enumerator: the block chain must
/// replay, the pattern derivations matching every block but the last must
/// exist and be derivable further, and none may match the last block. All
/// substitution patterns are enumerated cell by cell.
pub fn verify_witness(set: &SubstitutionSet, w: &PropertyAWitness) -> Result<bool> {
    let (x, y) = w.placement;
    if w.chain.len() < 2
        || w.chain.len() != w.steps.len() + 1
        || w.pattern.sub(x, y, 2, 2)? != w.chain[0]
    {
        return Ok(false);
    }
    for (t, sp) in w.steps.iter().enumerate() {
        if !check_compat_nonuniform(set, sp, &w.chain[t])?
            || apply_nonuniform(set, sp, &w.chain[t])? != w.chain[t + 1]
        {
            return Ok(false);
        }
    }
    let mut states = vec![State {
        p: w.pattern.clone(),
        region: (x, y, 2, 2),
    }];
    let (last, prefix) = w.chain[1..].split_last().expect("at least one step");
    for target in prefix {
        let mut next = BTreeSet::new();
        for st in &states {
            next.extend(brute_force_step(set, st, Some(target))?);
        }
        states = next.into_iter().collect();
    }
    let mut derivable = false;
    for st in &states {
        if !brute_force_step(set, st, Some(last))?.is_empty() {
            return Ok(false);
        }
        derivable |= !brute_force_step(set, st, None)?.is_empty();
    }
    Ok(derivable)
}

/// Every derivation of `st.p`, by brute force over all substitution
/// patterns, whose tracked region becomes `target` (any region when `None`).
fn brute_force_step(
    set: &SubstitutionSet,
    st: &State,
    target: Option<&RectPattern>,
) -> Result<Vec<State>> {
    let p = &st.p;
    let k = set.len() as u128;
    let total = k
        .checked_pow(p.len() as u32)
        .filter(|t| *t <= VERIFY_LIMIT)
        .ok_or(Error::BudgetExceeded {
            budget: VERIFY_LIMIT as usize,
            partial: 0,
        })?;
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let sp: SubstitutionPattern = Grid::from_fn(p.width(), p.height(), |_, _| {
            let m = (c % k) as usize;
            c /= k;
            m
        })?;
        if !check_compat_nonuniform(set, &sp, p)? {
            continue;
        }
        let profile = size_profile(set, &sp, p)?;
        let (rx, ry, rw, rh) = st.region;
        let nx = profile.phi(rx as i64, Axis::Horizontal)? as usize;
        let ny = profile.phi(ry as i64, Axis::Vertical)? as usize;
        let nw = profile.phi((rx + rw) as i64, Axis::Horizontal)? as usize - nx;
        let nh = profile.phi((ry + rh) as i64, Axis::Vertical)? as usize - ny;
        let image = apply_nonuniform(set, &sp, p)?;
        if let Some(target) = target {
            if (nw, nh) != target.shape() || image.sub(nx, ny, nw, nh)? != *target {
                continue;
            }
        }
        out.push(State {
            p: image,
            region: (nx, ny, nw, nh),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Alphabet;
    use crate::substitution::Substitution;

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

    fn set(members: Vec<Substitution>) -> SubstitutionSet {
        SubstitutionSet::new(ob(), members).unwrap()
    }

    #[test]
    fn sufficient_conditions() {
        let ex3 = set(vec![
            sub("a", "oo/oo", "oo/bo"),
            sub("b", "obo/obo", "ooo/boo"),
            sub("c", "oo/bo/ob", "oo/ob/bb"),
            sub("d", "bbb/bbb/ooo", "ooo/ooo/bbb"),
        ]);
        assert_eq!(
            sufficient_property_a(&ex3).status,
            PropertyAStatus::HoldsUniformSupport
        );
        let t = sub("t", "ob/oo", "bbb/bbb/bbb");
        assert_eq!(
            sufficient_property_a(&set(vec![t.clone()])).status,
            PropertyAStatus::HoldsSingleton
        );
        let s = sub("s", "oo/oo", "oo/bo");
        assert_eq!(
            sufficient_property_a(&set(vec![s])).status,
            PropertyAStatus::HoldsSingleton
        );
        let t2 = sub("t2", "oo/oo/oo", "bb/bb");
        assert_eq!(
            sufficient_property_a(&set(vec![t, t2])).status,
            PropertyAStatus::Unknown
        );
    }

    #[test]
    fn bounded_examples() {
        let ex1 = set(vec![sub("s", "oo/oo", "oo/bo")]);
        let v = bounded_property_a(&ex1, 2, 1, 1 << 20).unwrap();
        assert_eq!(v.status, PropertyAStatus::NoCounterexampleUpToBounds);
        let ad = set(vec![
            sub("a", "oo/oo", "oo/bo"),
            sub("d", "bbb/bbb/ooo", "ooo/ooo/bbb"),
        ]);
        let v = bounded_property_a(&ad, 1, 1, 1 << 20).unwrap();
        assert_eq!(v.status, PropertyAStatus::NoCounterexampleUpToBounds);
        assert!(bounded_property_a(&ex1, 0, 1, 100).is_err());
        assert!(bounded_property_a(&ex1, 1, 0, 100).is_err());
    }

    #[test]
    fn mixed_supports_counterexample_reverifies() {
        let mixed = set(vec![
            sub("s0", "boo/ooo/bbb", "bbb/obb/ooo"),
            sub("s1", "bbb/obo", "bo/bb"),
        ]);
        assert_eq!(
            sufficient_property_a(&mixed).status,
            PropertyAStatus::Unknown
        );
        let v = bounded_property_a(&mixed, 1, 1, 1 << 20).unwrap();
        assert_eq!(v.status, PropertyAStatus::Counterexample);
        let w = v.witness.unwrap();
        assert!(verify_witness(&mixed, &w).unwrap());
        let mut tampered = w.clone();
        tampered.chain[1] = tampered.chain[0].clone();
        assert!(!verify_witness(&mixed, &tampered).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let ex1 = set(vec![sub("s", "oo/oo", "oo/bo")]);
        assert!(matches!(
            bounded_property_a(&ex1, 2, 2, 3),
            Err(Error::BudgetExceeded { budget: 3, .. })
        ));
    }
}
