use mncomm::{Alphabet, Letter, Word};
use proptest::prelude::*;

fn word(ngens: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..ngens, any::<bool>()), 0..=max_len)
        .prop_map(|v| Word::reduce(v.into_iter().map(|(g, i)| Letter::new(g, i))))
}

proptest! {
    #[test]
    fn reduced_words_have_no_cancelling_pairs(w in word(3, 20)) {
        for pair in w.letters().windows(2) {
            prop_assert_ne!(pair[0], pair[1].inverse());
        }
    }

    #[test]
    fn group_laws(a in word(3, 10), b in word(3, 10), c in word(3, 10)) {
        prop_assert_eq!(a.multiply(&b).multiply(&c), a.multiply(&b.multiply(&c)));
        prop_assert!(a.multiply(&a.inverse()).is_identity());
        prop_assert_eq!(a.multiply(&b).inverse(), b.inverse().multiply(&a.inverse()));
    }

    #[test]
    fn conjugation_and_commutators(u in word(2, 8), v in word(2, 8), f in word(2, 8)) {
        prop_assert_eq!(u.conjugate(&f), Word::product([&f.inverse(), &u, &f]));
        prop_assert_eq!(u.commutator(&v), Word::product([&u.inverse(), &v.inverse(), &u, &v]));
        prop_assert_eq!(u.commutator(&v).inverse(), v.commutator(&u));
        prop_assert_eq!(u.commutator(&v).conjugate(&f), u.conjugate(&f).commutator(&v.conjugate(&f)));
    }

    #[test]
    fn format_parse_round_trip(w in word(3, 16)) {
        let al = Alphabet::new(&["x", "y", "z"]).unwrap();
        prop_assert_eq!(al.parse(&al.format(&w)).unwrap(), w);
    }

    #[test]
    fn cyclic_reduction(w in word(2, 14)) {
        let (core, conj) = w.cyclic_reduce();
        prop_assert_eq!(core.conjugate(&conj), w.clone());
        if let (Some(a), Some(b)) = (core.letters().first(), core.letters().last()) {
            if core.len() > 1 {
                prop_assert_ne!(*a, b.inverse());
            }
        }
    }

    #[test]
    fn powers_and_exponent_sums(w in word(2, 8), k in -4i64..=4) {
        let p = w.pow(k);
        for g in 0..2 {
            prop_assert_eq!(p.exponent_sum(g), k * w.exponent_sum(g));
        }
        prop_assert_eq!(w.pow(k).multiply(&w.pow(-k)), Word::identity());
    }
}

#[test]
fn notation() {
    let al = Alphabet::new(&["x", "y"]).unwrap();
    let p = |s: &str| al.parse(s).unwrap();
    assert_eq!(p("x^y"), p("y^-1 x y"));
    assert_eq!(p("[x,y]"), p("x^-1 y^-1 x y"));
    assert_eq!(p("[x,y,y]"), p("[[x,y],y]"));
    assert_eq!(p("xy"), p("x*y"));
    assert_eq!(al.format(&p("y^-2 x y^2")), "y^-2 x y^2");
    assert!(al.parse("x^").is_err());
    assert!(al.parse("q").is_err());
}
