//! Property tests for typing, substitution, rewriting, printing and the
//! polynomial order. Each case draws a seed and builds its inputs with the
//! library's typed generators.

mod common;

use afsterm::generate::{
    random_algebra, random_env, random_poly, random_substitution, random_type, random_valuation, seeded, term_of_type,
};
use afsterm::hopoly::{poly_ge, poly_gt};
use afsterm::syntax::{parse_term, print_type};
use afsterm::{
    beta_subst, infer, interp_term, lift_term, parse_afs, print_term, redexes, Afs, HoPoly, SemValue, Substitution,
    VarEnv,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::load;

fn systems() -> Vec<Afs> {
    ["map", "zeros", "shift", "append"].into_iter().map(load).collect()
}

fn pick(seed: u64) -> (ChaCha8Rng, Afs) {
    let mut rng = seeded(seed);
    let all = systems();
    let afs = all[rng.gen_range(0..all.len())].clone();
    (rng, afs)
}

/// A random well-typed term, its environment and type.
fn typed_term(rng: &mut ChaCha8Rng, afs: &Afs, max_env: usize) -> Option<(VarEnv, afsterm::Term, afsterm::SimpleType)> {
    let bases = afs.sig.base_types().to_vec();
    let len = rng.gen_range(0..=max_env);
    let env = random_env(rng, &bases, len);
    let ty = random_type(rng, &bases, 1);
    let t = term_of_type(rng, &afs.sig, &env, &ty, 12)?;
    Some((env, t, ty))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn typing_is_unique_and_deterministic(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        if let Some((env, t, ty)) = typed_term(&mut rng, &afs, 3) {
            prop_assert_eq!(infer(&afs.sig, &env, &t), Ok(ty.clone()));
            prop_assert_eq!(infer(&afs.sig, &env, &t), infer(&afs.sig, &env, &t));
        }
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        let bases = afs.sig.base_types().to_vec();
        if let Some((env, t, ty)) = typed_term(&mut rng, &afs, 3) {
            let dlen = rng.gen_range(0..=3);
            let target = random_env(&mut rng, &bases, dlen);
            if let Some(g) = random_substitution(&mut rng, &afs.sig, &env, &target, 6) {
                prop_assert_eq!(infer(&afs.sig, &target, &g.apply(&t)), Ok(ty));
            }
        }
    }

    #[test]
    fn identity_substitution(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        if let Some((env, t, _)) = typed_term(&mut rng, &afs, 3) {
            prop_assert_eq!(Substitution::identity(&env).apply(&t), t);
        }
    }

    #[test]
    fn composition(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        let bases = afs.sig.base_types().to_vec();
        if let Some((env, t, _)) = typed_term(&mut rng, &afs, 3) {
            let (l1, l2) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let mid = random_env(&mut rng, &bases, l1);
            let end = random_env(&mut rng, &bases, l2);
            let g = random_substitution(&mut rng, &afs.sig, &env, &mid, 5);
            let d = random_substitution(&mut rng, &afs.sig, &mid, &end, 5);
            if let (Some(g), Some(d)) = (g, d) {
                prop_assert_eq!(d.apply(&g.apply(&t)), g.then(&d).apply(&t));
            }
        }
    }

    #[test]
    fn weakening_and_strengthening(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        let bases = afs.sig.base_types().to_vec();
        if let Some((env, t, ty)) = typed_term(&mut rng, &afs, 3) {
            let extra = random_type(&mut rng, &bases, 1);
            let lifted = lift_term(&t, 1, 0);
            prop_assert_eq!(infer(&afs.sig, &env.extend(extra.clone()), &lifted), Ok(ty));
            if let Some(u) = term_of_type(&mut rng, &afs.sig, &env, &extra, 6) {
                prop_assert_eq!(beta_subst(&lifted, &u), t);
            }
        }
    }

    #[test]
    fn beta_subst_is_the_beta_substitution(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        let bases = afs.sig.base_types().to_vec();
        if let Some((env, arg, a_ty)) = typed_term(&mut rng, &afs, 2) {
            let b_ty = random_type(&mut rng, &bases, 1);
            let inner = env.extend(a_ty.clone());
            if let Some(body) = term_of_type(&mut rng, &afs.sig, &inner, &b_ty, 10) {
                let via_sub = Substitution::beta(&env, a_ty, arg.clone()).apply(&body);
                let direct = beta_subst(&body, &arg);
                prop_assert_eq!(&direct, &via_sub);
                prop_assert_eq!(infer(&afs.sig, &env, &direct), Ok(b_ty));
            }
        }
    }

    #[test]
    fn subject_reduction(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        if let Some((env, t, ty)) = typed_term(&mut rng, &afs, 2) {
            for s in redexes(&afs, &env, &t) {
                prop_assert_eq!(infer(&afs.sig, &env, &s.result), Ok(ty.clone()));
                prop_assert!(s.result.subterm(&s.position).is_some());
            }
        }
    }

    #[test]
    fn closed_terms_round_trip_through_text(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        if let Some((t, _)) = afsterm::generate::closed_term(&mut rng, &afs.sig, 12) {
            let text = print_term(&afs.sig, &t);
            prop_assert_eq!(parse_term(&afs.sig, &text), Ok(t), "{}", text);
        }
    }

    #[test]
    fn types_round_trip_through_text(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        let bases = afs.sig.base_types().to_vec();
        let ty = random_type(&mut rng, &bases, 1);
        let ty = afsterm::SimpleType::fun(ty.clone(), ty);
        let text = print_type(&ty);
        prop_assert_eq!(afsterm::syntax::parse_type(&afs.sig, &text), Ok(ty));
    }

    #[test]
    fn symbolic_comparison_is_sound(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let ctx = [0, 1, 0];
        let p = HoPoly::new(ctx.to_vec(), random_poly(&mut rng, &ctx, 3, 4)).unwrap();
        let q = HoPoly::new(ctx.to_vec(), random_poly(&mut rng, &ctx, 3, 3)).unwrap();
        let gt = poly_gt(&p, &q).unwrap();
        let ge = poly_ge(&p, &q).unwrap();
        prop_assert!(!gt || ge);
        prop_assert!(poly_ge(&p, &p).unwrap());
        prop_assert!(!poly_gt(&p, &p).unwrap());
        for _ in 0..20 {
            let v = random_valuation(&mut rng, &ctx, 8);
            let (a, b) = (p.eval(&v).unwrap(), q.eval(&v).unwrap());
            if gt {
                prop_assert!(a > b);
            }
            if ge {
                prop_assert!(a >= b);
            }
        }
    }

    #[test]
    fn polynomials_are_weakly_monotone(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let ctx = [0, 1, 0];
        let p = HoPoly::new(ctx.to_vec(), random_poly(&mut rng, &ctx, 3, 5)).unwrap();
        let v = random_valuation(&mut rng, &ctx, 8);
        let mut w = v.clone();
        let bump: u32 = rng.gen_range(1..=4);
        let i = if rng.gen_bool(0.5) { 0 } else { 2 };
        if let SemValue::Nat(n) = &w[i] {
            w[i] = SemValue::Nat(n + BigUint::from(bump));
        }
        prop_assert!(p.eval(&w).unwrap() >= p.eval(&v).unwrap());
    }

    /// `⟦t γ⟧` at `v` equals `⟦t⟧` at the valuation that sends each variable
    /// to the value of its image, for substitutions on base-typed variables.
    #[test]
    fn interpretation_commutes_with_base_substitution(seed in any::<u64>()) {
        let (mut rng, afs) = pick(seed);
        let sig = &afs.sig;
        let bases = sig.base_types().to_vec();
        let alg = random_algebra(&mut rng, sig, 3).unwrap();
        let n = rng.gen_range(1..=3);
        let source = VarEnv::from_indexed((0..n).map(|_| random_type(&mut rng, &bases, 0)));
        let tlen = rng.gen_range(0..=2);
        let target = random_env(&mut rng, &bases, tlen);
        let ty = random_type(&mut rng, &bases, 0);
        let t = term_of_type(&mut rng, sig, &source, &ty, 10);
        let g = random_substitution(&mut rng, sig, &source, &target, 6);
        if let (Some(t), Some(g)) = (t, g) {
            let whole = interp_term(sig, &alg, &target, &g.apply(&t)).unwrap();
            let open = interp_term(sig, &alg, &source, &t).unwrap();
            let images = g.images().iter().map(|u| interp_term(sig, &alg, &target, u).unwrap()).collect::<Vec<_>>();
            for _ in 0..5 {
                let v = random_valuation(&mut rng, whole.poly().ctx(), 6);
                let inner: Vec<SemValue> = images.iter().map(|i| SemValue::Nat(i.eval(&v).unwrap())).collect();
                prop_assert_eq!(whole.eval(&v).unwrap(), open.eval(&inner).unwrap());
            }
        }
    }

    #[test]
    fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = parse_afs(&text);
    }

    #[test]
    fn parser_never_panics_on_near_miss_input(seed in any::<u64>(), cut in 0usize..400, junk in "[ :=>\\\\.()a-z0-9#\n-]{0,8}") {
        let base = std::fs::read_to_string(common::corpus_path(if seed % 2 == 0 { "map" } else { "zeros" })).unwrap();
        let cut = cut.min(base.len());
        let text = format!("{}{}{}", &base[..cut], junk, &base[cut..]);
        let _ = parse_afs(&text);
    }
}
