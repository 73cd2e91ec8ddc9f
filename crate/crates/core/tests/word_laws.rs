use autfn_core::{Letter, Word};
use proptest::prelude::*;

const RANK: usize = 4;

fn raw() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(
        (1..=RANK as i32, any::<bool>()).prop_map(|(g, neg)| if neg { -g } else { g }),
        0..40,
    )
}

fn word() -> impl Strategy<Value = Word> {
    raw().prop_map(|r| Word::new(RANK, r).unwrap())
}

// Plain stack reduction, kept apart from the library's code path.
fn free_reduce(r: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in r {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn parse(s: &str) -> Word {
    Word::parse(RANK, s).unwrap()
}

proptest! {
    #[test]
    fn construction_reduces(r in raw()) {
        let w = Word::new(RANK, r.clone()).unwrap();
        prop_assert_eq!(w.letters().to_vec(), free_reduce(&r));
        let again = Word::new(RANK, w.letters().to_vec()).unwrap();
        prop_assert_eq!(again, w);
    }

    #[test]
    fn multiply_is_associative(a in word(), b in word(), c in word()) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiply_matches_concatenation(a in word(), b in word()) {
        let cat: Vec<Letter> = a.letters().iter().chain(b.letters()).copied().collect();
        prop_assert_eq!(a.multiply(&b).unwrap().letters().to_vec(), free_reduce(&cat));
    }

    #[test]
    fn inverse_cancels(w in word()) {
        prop_assert!(w.multiply(&w.inverse()).unwrap().is_empty());
        prop_assert!(w.inverse().multiply(&w).unwrap().is_empty());
        prop_assert_eq!(w.inverse().len(), w.len());
        prop_assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn cyclic_reduce_recombines(w in word()) {
        let (core, conj) = w.cyclic_reduce();
        prop_assert_eq!(conj.conjugate(&core).unwrap(), w);
        let l = core.letters();
        if l.len() >= 2 {
            prop_assert_ne!(l[0], -l[l.len() - 1]);
        }
    }

    #[test]
    fn display_parses_back(w in word()) {
        prop_assert_eq!(Word::parse(RANK, &w.to_string()).unwrap(), w);
    }

    #[test]
    fn power_adds_exponents(w in word(), a in -4i64..4, b in -4i64..4) {
        prop_assert_eq!(w.power(a).multiply(&w.power(b)).unwrap(), w.power(a + b));
    }

    #[test]
    fn exponent_sum_is_additive(a in word(), b in word(), i in 1..=RANK) {
        let ab = a.multiply(&b).unwrap();
        prop_assert_eq!(ab.exponent_sum(i), a.exponent_sum(i) + b.exponent_sum(i));
    }
}

#[test]
fn cyclic_reduce_examples() {
    let cases = [
        ("x4 x1 x4^-1", "x1", "x4"),
        ("x1 x2", "x1 x2", "e"),
        ("x2 x3 x1 x3^-1 x2^-1", "x1", "x2 x3"),
    ];
    for (w, core, conj) in cases {
        let (c, k) = parse(w).cyclic_reduce();
        assert_eq!(c, parse(core), "{w}");
        assert_eq!(k, parse(conj), "{w}");
    }
}

#[test]
fn literal_exponents_expand() {
    assert_eq!(parse("x3^2").letters(), &[3, 3]);
    assert_eq!(parse("x3^-2 x1").letters(), &[-3, -3, 1]);
    assert!(parse("e").is_empty());
}

#[test]
fn rank_is_checked() {
    assert!(Word::new(2, [3]).is_err());
    assert!(Word::new(2, [0]).is_err());
    assert!(parse("x1").multiply(&Word::parse(3, "x1").unwrap()).is_err());
    assert!(Word::generator(3, 4).is_err());
}
