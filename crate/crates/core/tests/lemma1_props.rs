mod common;

use mncomm::coset::{enumerate, EnumerationConfig};
use mncomm::lemma1::{verify_certificate, Certificate, CertificateContext, Lemma1Error};
use mncomm::stallings::SubgroupGraph;
use mncomm::{Presentation, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::random_word;

const CASES: &[(&[&str], &[&str], &[&str])] = &[
    (&["x", "y"], &["x"], &["y^2"]),
    (&["x", "y"], &["x^2"], &["y^3", "(xy)^3"]),
    (&["x", "y"], &["x^2"], &["y^3", "(xy)^2"]),
    (&["a", "b"], &["[a,b] a"], &["b"]),
    (&["x", "y", "z"], &["x", "z^2"], &["y^2", "z^y z"]),
];

fn context(case: usize) -> (Presentation, CertificateContext) {
    let (g, a, b) = CASES[case];
    let p = Presentation::from_strs(g, a, b).unwrap();
    let t = enumerate(&p, &EnumerationConfig::default()).unwrap();
    let ctx = CertificateContext::build(&p.a, &p.b, t, 8).unwrap();
    (p, ctx)
}

#[test]
fn lifted_generators_generate_l() {
    for case in 0..CASES.len() {
        let (p, ctx) = context(case);
        let lg = &ctx.lifted;
        assert!(lg.audit(&p.a, &p.b), "case {case}");
        for w in lg.all() {
            assert_eq!(ctx.table.coset_of(&w), 0);
        }
        let basis = ctx.table.schreier_basis();
        let lifted = SubgroupGraph::build(p.rank(), &lg.all());
        // every Schreier generator lies in the lifted subgroup
        for w in &basis.words {
            assert!(lifted.contains(w), "case {case}");
        }
        assert!(lifted.equals(&SubgroupGraph::from_coset_table(&ctx.table, &basis)));
    }
}

#[test]
fn random_certificates_evaluate_to_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for case in 0..CASES.len() {
        let (p, ctx) = context(case);
        let lg = &ctx.lifted;
        for _ in 0..25 {
            let m = rng.gen_range(0..lg.m_gens.len());
            let n = rng.gen_range(0..lg.n_gens.len());
            let f = random_word(&mut rng, p.rank() as u32, 7);
            let mut cert = ctx.derive_certificate(m, &f, n).unwrap();
            let want = lg.m_gens[m].conjugate(&f).commutator(&lg.n_gens[n]);
            assert_eq!(cert.target, want);
            // independent evaluation: multiply out the conjugates directly
            let mut acc = Word::identity();
            for s in &cert.steps {
                let r = ctx.relators.relators[s.rel].conjugate(&s.conj);
                acc = acc.multiply(&if s.exp < 0 { r.inverse() } else { r });
            }
            assert_eq!(acc, want);
            assert!(verify_certificate(&cert, &ctx.relators).unwrap());
            cert.simplify();
            assert!(verify_certificate(&cert, &ctx.relators).unwrap());
        }
    }
}

#[test]
fn json_round_trip_and_tampering() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let (p, ctx) = context(1);
    for _ in 0..20 {
        let f = random_word(&mut rng, 2, 6);
        let cert = ctx.derive_certificate(0, &f, 0).unwrap();
        let json = cert.to_json(&p.alphabet);
        let back = Certificate::from_json(&p.alphabet, &json).unwrap();
        assert_eq!(back, cert);
        if cert.target.is_identity() || cert.steps.is_empty() {
            continue;
        }
        let mut bad = cert.clone();
        let i = rng.gen_range(0..bad.steps.len());
        bad.steps[i].exp = -bad.steps[i].exp;
        assert!(!verify_certificate(&bad, &ctx.relators).unwrap());
    }
}

#[test]
fn bad_inputs_are_reported() {
    let (_, ctx) = context(0);
    let f = Word::identity();
    assert!(matches!(
        ctx.derive_certificate(99, &f, 0),
        Err(Lemma1Error::OutOfRange { what: "m", .. })
    ));
    assert!(matches!(
        ctx.derive_certificate(0, &f, 99),
        Err(Lemma1Error::OutOfRange { what: "n", .. })
    ));
}

#[test]
fn saturation_terminates_within_bound() {
    for case in 0..CASES.len() {
        let (_, ctx) = context(case);
        assert!(ctx.lifted.rounds <= 8);
        assert!(ctx.relators.formal_count
            == ctx.lifted.m_gens.len() * ctx.transversal.reps.len() * ctx.lifted.n_gens.len());
    }
}
