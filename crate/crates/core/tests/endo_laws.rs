use autfn_core::{abelianize, is_basis, Caps, Endo, IntMatrix, NamedGenerator, OrderResult, Word};
use proptest::prelude::*;

fn named(rank: usize) -> impl Strategy<Value = NamedGenerator> {
    (0..5u8, 1..=rank, 1..rank).prop_map(move |(kind, i, d)| {
        let j = (i - 1 + d) % rank + 1;
        match kind {
            0 => NamedGenerator::L(i, j),
            1 => NamedGenerator::R(i, j),
            2 => NamedGenerator::C(i, j),
            3 => NamedGenerator::P(i, j),
            _ => NamedGenerator::I(i),
        }
    })
}

fn product(rank: usize, max_len: usize) -> impl Strategy<Value = Endo> {
    prop::collection::vec(named(rank), 0..max_len).prop_map(move |gens| {
        gens.iter().fold(Endo::identity(rank), |acc, &g| {
            acc.compose(&Endo::named(g, rank).unwrap()).unwrap()
        })
    })
}

fn word(rank: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank as i32, any::<bool>()), 0..12)
        .prop_map(move |v| Word::new(rank, v.into_iter().map(|(g, n)| if n { -g } else { g })).unwrap())
}

// Endomorphisms that need not be automorphisms.
fn endo(rank: usize) -> impl Strategy<Value = Endo> {
    prop::collection::vec(word(rank), rank).prop_map(move |imgs| Endo::new(rank, imgs).unwrap())
}

fn gens(rank: usize) -> Vec<Word> {
    (1..=rank).map(|i| Word::generator(rank, i).unwrap()).collect()
}

fn w(rank: usize, s: &str) -> Word {
    Word::parse(rank, s).unwrap()
}

proptest! {
    #[test]
    fn apply_respects_products(f in endo(3), a in word(3), b in word(3)) {
        let ab = a.multiply(&b).unwrap();
        let lhs = f.apply(&ab).unwrap();
        let rhs = f.apply(&a).unwrap().multiply(&f.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_is_associative(f in endo(3), g in endo(3), h in endo(3)) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn compose_applies_right_factor_first(f in endo(3), g in endo(3), a in word(3)) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply(&a).unwrap(), f.apply(&g.apply(&a).unwrap()).unwrap());
    }

    #[test]
    fn identity_is_a_unit(f in endo(3)) {
        let id = Endo::identity(3);
        prop_assert_eq!(&id.compose(&f).unwrap(), &f);
        prop_assert_eq!(&f.compose(&id).unwrap(), &f);
    }

    #[test]
    fn inverse_of_a_product(f in product(4, 10)) {
        let g = f.invert().unwrap();
        prop_assert!(g.compose(&f).unwrap().is_identity());
        prop_assert!(f.compose(&g).unwrap().is_identity());
    }

    #[test]
    fn products_are_bases(f in product(4, 12)) {
        prop_assert!(is_basis(f.images()));
        prop_assert!(f.is_automorphism());
    }

    #[test]
    fn abelianize_is_functorial(f in product(3, 8), g in product(3, 8)) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(abelianize(&fg), abelianize(&f).mul(&abelianize(&g)).unwrap());
    }

    #[test]
    fn automorphisms_have_unit_determinant(f in product(4, 10)) {
        let d = abelianize(&f).det().unwrap();
        prop_assert!(d == 1 || d == -1);
    }

    #[test]
    fn inner_witness_conjugates_every_generator(f in product(3, 6), c in word(3)) {
        // Conjugation composed with anything inner is inner.
        let inner = Endo::new(3, gens(3).iter().map(|x| c.conjugate(x).unwrap()).collect()).unwrap();
        let h = f.compose(&inner).unwrap().compose(&f.invert().unwrap()).unwrap();
        let wit = h.inner_witness();
        prop_assert!(wit.is_some());
        let wit = wit.unwrap();
        for (i, x) in gens(3).iter().enumerate() {
            prop_assert_eq!(h.image(i + 1), &wit.conjugate(x).unwrap());
        }
    }

    #[test]
    fn witness_is_sound_when_returned(f in product(3, 6)) {
        if let Some(wit) = f.inner_witness() {
            for (i, x) in gens(3).iter().enumerate() {
                prop_assert_eq!(f.image(i + 1), &wit.conjugate(x).unwrap());
            }
        }
    }

    #[test]
    fn finite_orders_are_exact(f in product(3, 5)) {
        let caps = Caps { max_power: 30, max_word_len: 2000 };
        if let OrderResult::Finite(k) = f.order(caps) {
            prop_assert!(f.power(k as i64).unwrap().is_identity());
            for d in 1..k {
                prop_assert!(!f.power(d as i64).unwrap().is_identity());
            }
        }
    }
}

#[test]
fn named_generator_actions() {
    let n = 3;
    let l = Endo::named(NamedGenerator::L(1, 2), n).unwrap();
    let r = Endo::named(NamedGenerator::R(1, 2), n).unwrap();
    let c = Endo::named(NamedGenerator::C(1, 2), n).unwrap();
    assert_eq!(l.image(1), &w(n, "x2 x1"));
    assert_eq!(r.image(1), &w(n, "x1 x2"));
    assert_eq!(c.image(1), &w(n, "x2 x1 x2^-1"));
    assert_eq!(l.invert().unwrap().image(1), &w(n, "x2^-1 x1"));
    for f in [&l, &r, &c] {
        assert_eq!(f.image(2), &w(n, "x2"));
        assert_eq!(f.image(3), &w(n, "x3"));
    }
}

#[test]
fn named_generators_reject_bad_indices() {
    assert!(Endo::named(NamedGenerator::L(1, 1), 3).is_err());
    assert!(Endo::named(NamedGenerator::P(1, 4), 3).is_err());
    assert!(Endo::named(NamedGenerator::I(0), 3).is_err());
}

#[test]
fn orders_of_named_generators() {
    let caps = Caps { max_power: 64, max_word_len: 10_000 };
    for n in 2..=4 {
        let p = Endo::named(NamedGenerator::P(1, 2), n).unwrap();
        let i = Endo::named(NamedGenerator::I(n), n).unwrap();
        let c = Endo::named(NamedGenerator::C(1, 2), n).unwrap();
        assert_eq!(p.order(caps), OrderResult::Finite(2));
        assert_eq!(i.order(caps), OrderResult::Finite(2));
        assert!(matches!(c.order(caps), OrderResult::ExceedsCap { .. }));
        // A partial conjugation is inner only when it moves every other generator.
        let expect_inner = n == 2;
        assert_eq!(c.out_order(caps) == OrderResult::Finite(1), expect_inner);
    }
}

#[test]
fn non_bases_are_rejected() {
    assert!(!is_basis(&[w(2, "x1^2"), w(2, "x2")]));
    assert!(!is_basis(&[w(2, "x1"), w(2, "x1")]));
    assert!(!is_basis(&[w(2, "x1 x2 x1^-1 x2^-1"), w(2, "x2")]));
    assert!(is_basis(&[w(2, "x1 x2 x1"), w(2, "x1 x2")]));
    let f = Endo::new(2, vec![w(2, "x1^2"), w(2, "x2")]).unwrap();
    assert!(f.invert().is_err());
}

#[test]
fn rank_one_inner_means_identity() {
    let id = Endo::identity(1);
    assert_eq!(id.inner_witness(), Some(Word::empty(1)));
    let inv = Endo::named(NamedGenerator::I(1), 1).unwrap();
    assert_eq!(inv.inner_witness(), None);
}

#[test]
fn elementary_matrix_of_a_transvection() {
    // x1 -> x3 x1: column 1 gains a 1 in row 3.
    let l = Endo::named(NamedGenerator::L(1, 3), 3).unwrap();
    assert_eq!(abelianize(&l), IntMatrix::elementary(3, 1, 1, 3).unwrap());
}
