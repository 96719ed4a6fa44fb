mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sadic::{
    apply_nonuniform, apply_uniform, check_compat_uniform, compose, desubstitute, global_language,
    iterate, lift_set, local_language, local_language_set, size_profile, AxisProfile,
    DecoratedLetter, GlobalSource, Grid, Letter, ParseMode, Projection, RectPattern,
    SubstitutionSet,
};

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_pattern(rng: &mut impl Rng, letters: usize, max: usize) -> RectPattern {
    let (w, h) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    Grid::from_fn(w, h, |_, _| Letter::new(rng.gen_range(0..letters))).unwrap()
}

fn pattern_in(set: &SubstitutionSet, rng: &mut impl Rng) -> RectPattern {
    random_pattern(rng, set.alphabet().len(), 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uniform_is_constant_nonuniform(seed in any::<u64>()) {
        let mut r = rng(seed);
        let uniform = r.gen_bool(0.5);
        let set = random_set(&mut r, 3, 3, 3, uniform);
        let p = pattern_in(&set, &mut r);
        let m = r.gen_range(0..set.len());
        let constant = Grid::filled(p.width(), p.height(), m).unwrap();
        let s = set.member(m);
        prop_assert_eq!(apply_uniform(s, &p).ok(), apply_nonuniform(&set, &constant, &p).ok());
        prop_assert_eq!(check_compat_uniform(s, &p).unwrap(), apply_uniform(s, &p).is_ok());
    }

    #[test]
    fn image_shape_is_the_sum_of_block_extents(seed in any::<u64>()) {
        let mut r = rng(seed);
        let set = random_set(&mut r, 3, 3, 3, true);
        let p = pattern_in(&set, &mut r);
        let sp = Grid::from_fn(p.width(), p.height(), |_, _| 0).unwrap();
        let sp = {
            let mut sp = sp;
            for x in 0..p.width() {
                let m = r.gen_range(0..set.len());
                for y in 0..p.height() {
                    sp.set(x, y, m);
                }
            }
            sp
        };
        // Columns share a member and supports are uniform, but rows may mix
        // heights; only compatible patterns have an image.
        match apply_nonuniform(&set, &sp, &p) {
            Ok(img) => {
                let profile = size_profile(&set, &sp, &p).unwrap();
                prop_assert_eq!(img.width(), profile.horizontal.total());
                prop_assert_eq!(img.height(), profile.vertical.total());
                for x in 0..p.width() {
                    for y in 0..p.height() {
                        let (px, py) = profile.phi_point(x as i64, y as i64).unwrap();
                        let block = set.member(sp.get(x, y).to_owned()).image(*p.get(x, y));
                        let got = img.sub(px as usize, py as usize, block.width(), block.height()).unwrap();
                        prop_assert_eq!(&got, block);
                    }
                }
            }
            Err(_) => {
                let heights: Vec<_> = (0..p.height())
                    .map(|y| (0..p.width()).map(|x| set.member(*sp.get(x, y)).extents(*p.get(x, y)).1).collect::<Vec<_>>())
                    .collect();
                prop_assert!(heights.iter().any(|row| row.iter().any(|h| *h != row[0])));
            }
        }
    }

    #[test]
    fn phi_is_strictly_increasing(extents in prop::collection::vec(1usize..5, 1..12), start in -6i64..1) {
        let len = extents.len() as i64;
        prop_assume!(start + len >= 0);
        let profile = AxisProfile::new(start, extents).unwrap();
        for r in start..start + len {
            let step = profile.phi(r + 1).unwrap() - profile.phi(r).unwrap();
            prop_assert_eq!(step as usize, profile.extent(r).unwrap());
        }
        prop_assert_eq!(profile.phi(0).unwrap(), 0);
    }

    #[test]
    fn composition_is_associative_and_functorial(seed in any::<u64>()) {
        let mut r = rng(seed);
        let uniform = r.gen_bool(0.5);
        let set = random_set(&mut r, 3, 3, 3, uniform);
        let pick = |r: &mut ChaCha8Rng| set.member(r.gen_range(0..set.len())).clone();
        let (x, y, z) = (pick(&mut r), pick(&mut r), pick(&mut r));
        if let (Ok(xy), Ok(yz)) = (compose(&x, &y), compose(&y, &z)) {
            if let (Ok(left), Ok(right)) = (compose(&xy, &z), compose(&x, &yz)) {
                prop_assert_eq!(left.images(), right.images());
            }
            let p = pattern_in(&set, &mut r);
            if let Ok(inner) = apply_uniform(&y, &p) {
                prop_assert_eq!(apply_uniform(&xy, &p).ok(), apply_uniform(&x, &inner).ok());
            }
        }
    }

    #[test]
    fn global_languages_shrink_with_the_level(seed in any::<u64>(), w in 1usize..3, h in 1usize..3) {
        let mut r = rng(seed);
        let uniform = r.gen_bool(0.5);
        let set = random_set(&mut r, 2, 2, 3, uniform);
        let seq = random_seq(&mut r, &set);
        let budget = 1 << 18;
        for n in 0..2 {
            let lo = global_language(&set, GlobalSource::Sequence(&seq), n, w, h, budget).unwrap();
            let hi = global_language(&set, GlobalSource::Sequence(&seq), n + 1, w, h, budget).unwrap();
            prop_assert!(hi.is_subset(&lo));
            let lo = global_language(&set, GlobalSource::Set, n, w, h, budget).unwrap();
            let hi = global_language(&set, GlobalSource::Set, n + 1, w, h, budget).unwrap();
            prop_assert!(hi.is_subset(&lo));
        }
    }

    #[test]
    fn language_inclusions(seed in any::<u64>(), w in 1usize..3, h in 1usize..3) {
        let mut r = rng(seed);
        let set = random_set(&mut r, 2, 2, 3, true);
        let seq = random_seq(&mut r, &set);
        let budget = 1 << 18;
        for n in 0..2 {
            let local = local_language(&set, &seq, n, w, h).unwrap();
            let global = global_language(&set, GlobalSource::Sequence(&seq), n, w, h, budget).unwrap();
            let global_set = global_language(&set, GlobalSource::Set, n, w, h, budget).unwrap();
            let local_set = local_language_set(&set, n + 1, w, h, budget).unwrap();
            prop_assert!(local.is_subset(&global));
            prop_assert!(global.is_subset(&global_set));
            prop_assert!(local.is_subset(&local_set));
        }
    }

    #[test]
    fn decorations_commute_and_stay_pure(seed in any::<u64>()) {
        let mut r = rng(seed);
        let uniform = r.gen_bool(0.5);
        let set = random_set(&mut r, 3, 3, 3, uniform);
        let seq = random_seq(&mut r, &set);
        let sys = lift_set(&set).unwrap();
        let n = r.gen_range(0..=3);
        let seed_letter = DecoratedLetter {
            base: Letter::new(r.gen_range(0..set.alphabet().len())),
            v_dec: r.gen_range(0..set.len()),
            h_dec: r.gen_range(0..set.len()),
        };
        let base = iterate(&set, &seq, n, seed_letter.base);
        let lifted = sys.iterate(&seq, n, seed_letter);
        prop_assert_eq!(base.is_ok(), lifted.is_ok());
        if let (Ok(base), Ok(lifted)) = (base, lifted) {
            prop_assert_eq!(sys.project(&lifted, Projection::Base).unwrap(), base);
            let v = sys.project(&lifted, Projection::Vertical).unwrap();
            let h = sys.project(&lifted, Projection::Horizontal).unwrap();
            for x in 0..v.width() {
                prop_assert!(v.column(x).all(|l| l == v.get(x, 0)));
            }
            for y in 0..h.height() {
                prop_assert!(h.row(y).iter().all(|l| l == h.get(0, y)));
            }
            prop_assert!(sys.sync_check(&lifted).unwrap());
        }
    }

    #[test]
    fn lifted_windows_project_onto_base_windows(seed in any::<u64>(), w in 1usize..3, h in 1usize..3) {
        let mut r = rng(seed);
        let set = random_set(&mut r, 2, 2, 3, true);
        let seq = random_seq(&mut r, &set);
        let sys = lift_set(&set).unwrap();
        let lifted_seq = sys.lift_sequence(&seq);
        let n = r.gen_range(0..=2);
        let base = local_language(&set, &seq, n, w, h).unwrap();
        let lifted = local_language(sys.lifted_set(), &lifted_seq, n, w, h).unwrap();
        let projected: std::collections::BTreeSet<_> =
            lifted.iter().map(|p| sys.project(p, Projection::Base).unwrap()).collect();
        prop_assert_eq!(projected, base.members);
    }

    #[test]
    fn parses_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let uniform = r.gen_bool(0.5);
        let set = random_set(&mut r, 2, 2, 3, uniform);
        let seq = random_seq(&mut r, &set);
        let n = r.gen_range(0..=2);
        let a = Letter::new(r.gen_range(0..set.alphabet().len()));
        if let Ok(p) = iterate(&set, &seq, n, a) {
            let w = r.gen_range(1..=p.width().min(5));
            let h = r.gen_range(1..=p.height().min(5));
            let window = p.sub(r.gen_range(0..=p.width() - w), r.gen_range(0..=p.height() - h), w, h).unwrap();
            for mode in [ParseMode::Anchored, ParseMode::Windowed] {
                for input in [&p, &window] {
                    for res in desubstitute(input, &set, mode).unwrap() {
                        prop_assert!(res.verify(&set, input).unwrap());
                        prop_assert!(mode == ParseMode::Windowed || (!res.cropped && res.offset == (0, 0)));
                    }
                }
            }
            let s0 = set.get(&seq.name_at(0)).unwrap();
            let anchored = desubstitute(&p, &set, ParseMode::Anchored).unwrap();
            let inner = if n == 0 { RectPattern::letter(a) } else { apply_stages(&set, &seq, 1, n, &RectPattern::letter(a)) };
            prop_assert!(anchored.iter().any(|res| res.substitution == s0.name() && res.preimage == inner));
            let windowed = desubstitute(&window, &set, ParseMode::Windowed).unwrap();
            prop_assert!(!windowed.is_empty());
        }
    }
}
