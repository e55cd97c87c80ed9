use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bindlog_core::precook::{precook, precook_prop, uncook, uncook_prop};
use bindlog_core::sigma::{sort_of, RewriteSystem, Sort};
use bindlog_core::syntax::{parse_prop, parse_term, Prop, Signature, SubstMap, Syntax, Term, TermGen, ToDeBruijn};

fn sig() -> Signature {
    Signature::parse("fun f : <0,0>\nfun Lam : <1>\nfun d : <0,1,2>\nfun c : <>\npred = : <0,0>\npred B : <1>").unwrap()
}

fn term(seed: u64, size: usize) -> Term {
    TermGen::new(&sig()).term(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

fn prop(seed: u64, size: usize) -> Prop {
    TermGen::new(&sig()).prop(&mut ChaCha8Rng::seed_from_u64(seed), size)
}

proptest! {
    #[test]
    fn printed_terms_parse_back(seed in any::<u64>(), size in 1usize..25) {
        let t = term(seed, size);
        prop_assert_eq!(parse_term(&sig(), &t.to_string()).unwrap(), t);
    }

    #[test]
    fn printed_props_parse_back(seed in any::<u64>(), size in 1usize..25) {
        let a = prop(seed, size);
        prop_assert_eq!(parse_prop(&sig(), &a.to_string()).unwrap(), a);
    }

    #[test]
    fn substitution_free_variables(seed in any::<u64>(), s1 in 1usize..15, s2 in 1usize..8, x in "[xyzuv]") {
        let t = term(seed, s1);
        let u = term(seed.wrapping_add(1), s2);
        let out = t.substitute(&SubstMap::single(x.clone(), u.clone()));
        let mut want: BTreeSet<String> = t.free_vars();
        if want.remove(&x) {
            want.extend(u.free_vars());
        }
        prop_assert_eq!(out.free_vars(), want);
    }

    #[test]
    fn substitution_respects_alpha(seed in any::<u64>(), s1 in 1usize..15, s2 in 1usize..8, x in "[xyzuv]") {
        let t = term(seed, s1);
        let u = term(seed.wrapping_add(1), s2);
        // Renaming every binder apart gives an α-variant of t.
        let renamed = t.substitute(&SubstMap::new());
        prop_assert!(renamed.alpha_eq(&t));
        let theta = SubstMap::single(x, u);
        prop_assert!(t.substitute(&theta).alpha_eq(&renamed.substitute(&theta)));
    }

    #[test]
    fn closed_instances_are_vacuous(seed in any::<u64>(), size in 1usize..15) {
        let t = term(seed, size);
        let theta = SubstMap::single("w", Term::constant("c"));
        prop_assert!(t.substitute(&theta).alpha_eq(&t));
    }

    #[test]
    fn precooked_terms_have_sort_zero_and_round_trip(seed in any::<u64>(), size in 1usize..25) {
        let s = sig();
        let t = term(seed, size);
        let c = precook(&s, &t, &[]);
        prop_assert_eq!(sort_of(&s, &c), Ok(Sort::Term(0)));
        prop_assert!(uncook(&s, &c).unwrap().alpha_eq(&t));
    }

    #[test]
    fn precooked_props_round_trip(seed in any::<u64>(), size in 1usize..25) {
        let s = sig();
        let a = prop(seed, size);
        prop_assert!(uncook_prop(&s, &precook_prop(&s, &a)).unwrap().alpha_eq(&a));
    }

    #[test]
    fn precooking_identifies_alpha_variants(seed in any::<u64>(), size in 1usize..20) {
        let s = sig();
        let t = term(seed, size);
        let renamed = t.substitute(&SubstMap::new());
        prop_assert_eq!(precook(&s, &t, &[]), precook(&s, &renamed, &[]));
    }

    #[test]
    fn precooked_terms_are_sigma_normal(seed in any::<u64>(), size in 1usize..20) {
        let s = sig();
        let rs = RewriteSystem::sigma(&s);
        let c = precook(&s, &term(seed, size), &[]);
        prop_assert!(rs.is_normal(&c));
        prop_assert_eq!(rs.normalize(&c).unwrap(), c);
    }
}
