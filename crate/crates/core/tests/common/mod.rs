#![allow(dead_code)]

use rand::Rng;
use sadic::{
    apply_uniform, Alphabet, Grid, Letter, RectPattern, SequenceSpec, Substitution, SubstitutionSet,
};

pub fn ob() -> Alphabet {
    Alphabet::from_glyphs("ob").unwrap()
}

pub fn pat(text: &str) -> RectPattern {
    ob().parse_pattern(text).unwrap()
}

pub fn show(p: &RectPattern) -> String {
    ob().format_inline(p)
}

pub fn sub(name: &str, o: &str, b: &str) -> Substitution {
    Substitution::new(name, vec![pat(o), pat(b)]).unwrap()
}

pub fn ex1_sub() -> Substitution {
    sub("s", "oo/oo", "oo/bo")
}

pub fn ex1() -> SubstitutionSet {
    SubstitutionSet::singleton(ob(), ex1_sub()).unwrap()
}

pub fn ex3() -> SubstitutionSet {
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

/// Three substitutions, every image 2x2.
pub fn ruler_set() -> SubstitutionSet {
    SubstitutionSet::new(
        ob(),
        vec![
            sub("u", "oo/oo", "oo/bo"),
            sub("v", "ob/oo", "bb/oo"),
            sub("w", "oo/ob", "ob/ob"),
        ],
    )
    .unwrap()
}

/// The closed form of a history word for width-2 stages: position `x`
/// carries the stage `nu_2(x + 1)` when it is at most `n`, the seed otherwise.
pub fn ruler_oracle(seq: &SequenceSpec, n: usize, seed: &str) -> Vec<String> {
    (0..1usize << (n + 1))
        .map(|x| {
            let nu = (x + 1).trailing_zeros() as usize;
            if nu <= n {
                seq.name_at(nu)
            } else {
                seed.to_string()
            }
        })
        .collect()
}

/// `s_from ∘ ... ∘ s_to` applied to `p`, innermost first.
pub fn apply_stages(
    set: &SubstitutionSet,
    seq: &SequenceSpec,
    from: usize,
    to: usize,
    p: &RectPattern,
) -> RectPattern {
    let mut cur = p.clone();
    for k in (from..=to).rev() {
        cur = apply_uniform(set.get(&seq.name_at(k)).unwrap(), &cur).unwrap();
    }
    cur
}

/// A random system: up to `max_letters` letters, up to `max_members`
/// members with extents in 2..=`max_extent`. With `uniform_support` every
/// member has one support for all letters.
pub fn random_set(
    rng: &mut impl Rng,
    max_letters: usize,
    max_members: usize,
    max_extent: usize,
    uniform_support: bool,
) -> SubstitutionSet {
    let letters = rng.gen_range(2..=max_letters);
    let glyphs: String = "obcdefgh".chars().take(letters).collect();
    let alphabet = Alphabet::from_glyphs(&glyphs).unwrap();
    let members = rng.gen_range(1..=max_members);
    let subs = (0..members)
        .map(|i| {
            let shared = (rng.gen_range(2..=max_extent), rng.gen_range(2..=max_extent));
            let images = (0..letters)
                .map(|_| {
                    let (w, h) = if uniform_support {
                        shared
                    } else {
                        (rng.gen_range(2..=max_extent), rng.gen_range(2..=max_extent))
                    };
                    Grid::from_fn(w, h, |_, _| Letter::new(rng.gen_range(0..letters))).unwrap()
                })
                .collect();
            Substitution::new(format!("s{i}"), images).unwrap()
        })
        .collect();
    SubstitutionSet::new(alphabet, subs).unwrap()
}

/// A random eventually periodic sequence over the members of `set`.
pub fn random_seq(rng: &mut impl Rng, set: &SubstitutionSet) -> SequenceSpec {
    let pick =
        |rng: &mut dyn rand::RngCore| set.member(rng.gen_range(0..set.len())).name().to_string();
    let prefix = (0..rng.gen_range(0..3)).map(|_| pick(rng)).collect();
    let period = (0..rng.gen_range(1..3)).map(|_| pick(rng)).collect();
    SequenceSpec::new(prefix, period).unwrap()
}
