use hnn_forge::instances::{BsInstance, Example5, ExampleGElt, FiniteHnnInstance, XSeq};
use hnn_forge::normal_form::normal_form_of_product;
use hnn_forge::tree::{distance, edge_endpoints, neighbors, path_to_vertex, vertex_of, Vertex};
use hnn_forge::{
    britton_reduce_with, is_reduced, normal_form, quick_type_check, word_stats, HnnPresentation, Letter, PinchStrategy,
    Sign, Word,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn bs() -> BsInstance {
    BsInstance::new(2, 3).unwrap()
}

fn e5_generators() -> Vec<ExampleGElt> {
    let mut gens = vec![ExampleGElt::g(0), ExampleGElt::g(1)];
    gens.extend((1..=3).flat_map(XSeq::all_of_length).map(ExampleGElt::h));
    gens
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Pos), Just(Sign::Neg)]
}

fn bs_word(max: usize) -> impl Strategy<Value = Word<BigInt>> {
    prop::collection::vec(
        prop_oneof![(-8i64..=8).prop_map(|k| Letter::Base(BigInt::from(k))), sign().prop_map(Letter::Stable)],
        0..max,
    )
    .prop_map(Word::new)
}

fn s3_word(max: usize) -> impl Strategy<Value = Word<usize>> {
    prop::collection::vec(prop_oneof![(0usize..6).prop_map(Letter::Base), sign().prop_map(Letter::Stable)], 0..max)
        .prop_map(Word::new)
}

fn e5_word(max: usize) -> impl Strategy<Value = Word<ExampleGElt>> {
    let gens = e5_generators();
    let n = gens.len();
    prop::collection::vec(
        prop_oneof![(0..n).prop_map(move |i| Letter::Base(gens[i].clone())), sign().prop_map(Letter::Stable)],
        0..max,
    )
    .prop_map(Word::new)
}

fn e5_elt() -> impl Strategy<Value = ExampleGElt> {
    let gens = e5_generators();
    let n = gens.len();
    prop::collection::vec(0..n, 0..8).prop_map(move |idx| {
        let e = Example5::new();
        idx.iter().fold(ExampleGElt::identity(), |acc, &i| e.multiply(&acc, &gens[i]))
    })
}

fn strategies_agree<P: HnnPresentation>(pres: &P, w: &Word<P::Elt>) -> Result<(), TestCaseError> {
    let nf = normal_form(pres, w).unwrap();
    for s in [PinchStrategy::Leftmost, PinchStrategy::Rightmost] {
        let r = britton_reduce_with(pres, w, s).unwrap();
        prop_assert_eq!(r.stable_count(), nf.length());
        prop_assert_eq!(&normal_form(pres, &r).unwrap(), &nf);
    }
    Ok(())
}

fn nf_is_homomorphic<P: HnnPresentation>(pres: &P, a: &Word<P::Elt>, b: &Word<P::Elt>) -> Result<(), TestCaseError> {
    let na = normal_form(pres, a).unwrap().to_word();
    let nb = normal_form(pres, b).unwrap().to_word();
    prop_assert_eq!(normal_form_of_product(pres, &[&na, &nb]).unwrap(), normal_form_of_product(pres, &[a, b]).unwrap());
    let one = normal_form_of_product(pres, &[a, &a.inverse(pres)]).unwrap();
    prop_assert!(one.length() == 0 && pres.is_identity(&one.end_letter));
    Ok(())
}

/// A reduced word's normal form has its stable-letter count, first exponent
/// as type and last exponent as direction.
fn type_is_first_exponent<P: HnnPresentation>(pres: &P, w: &Word<P::Elt>) -> Result<(), TestCaseError> {
    if w.stable_count() == 0 || !is_reduced(pres, w) {
        return Ok(());
    }
    let stats = word_stats(pres, &normal_form(pres, w).unwrap());
    let exps = w.exponents();
    prop_assert_eq!(stats.length, exps.len());
    prop_assert_eq!(stats.ty, exps.first().copied());
    prop_assert_eq!(stats.direction, exps.last().copied());
    Ok(())
}

fn quick_check_is_sound<P: HnnPresentation>(pres: &P, w: &Word<P::Elt>) -> Result<(), TestCaseError> {
    let q = quick_type_check(w);
    let nf = normal_form(pres, w).unwrap();
    if q.not_in_g == Some(true) {
        prop_assert!(nf.length() > 0);
    }
    if let Some(ty) = q.ty {
        prop_assert_eq!(word_stats(pres, &nf).ty, Some(ty));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn bs_reduction_strategies_agree(w in bs_word(16)) {
        strategies_agree(&bs(), &w)?;
    }

    #[test]
    fn s3_reduction_strategies_agree(w in s3_word(16)) {
        strategies_agree(&FiniteHnnInstance::s3_example(), &w)?;
    }

    #[test]
    fn e5_reduction_strategies_agree(w in e5_word(14)) {
        strategies_agree(&Example5::new(), &w)?;
    }

    #[test]
    fn bs_group_axioms(a in bs_word(12), b in bs_word(12)) {
        nf_is_homomorphic(&bs(), &a, &b)?;
    }

    #[test]
    fn s3_group_axioms(a in s3_word(12), b in s3_word(12)) {
        nf_is_homomorphic(&FiniteHnnInstance::s3_example(), &a, &b)?;
    }

    #[test]
    fn e5_group_axioms(a in e5_word(10), b in e5_word(10)) {
        nf_is_homomorphic(&Example5::new(), &a, &b)?;
    }

    #[test]
    fn normal_forms_are_valid(w in bs_word(16), v in e5_word(12)) {
        let b = bs();
        normal_form(&b, &w).unwrap().validate(&b).unwrap();
        let e = Example5::new();
        normal_form(&e, &v).unwrap().validate(&e).unwrap();
    }

    #[test]
    fn type_consistency(w in bs_word(16), v in s3_word(16), u in e5_word(12)) {
        type_is_first_exponent(&bs(), &w)?;
        type_is_first_exponent(&FiniteHnnInstance::s3_example(), &v)?;
        type_is_first_exponent(&Example5::new(), &u)?;
    }

    #[test]
    fn quick_type_check_never_contradicts(w in bs_word(16), v in e5_word(12)) {
        quick_check_is_sound(&bs(), &w)?;
        quick_check_is_sound(&Example5::new(), &v)?;
    }

    #[test]
    fn tree_metric(a in bs_word(10), b in bs_word(10), c in bs_word(10)) {
        let p = bs();
        let (u, v, w) = (vertex_of(&p, &a).unwrap(), vertex_of(&p, &b).unwrap(), vertex_of(&p, &c).unwrap());
        let d = |x: &Vertex<BigInt>, y: &Vertex<BigInt>| distance(&p, x, y).unwrap();
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert_eq!(d(&u, &u), 0);
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
        prop_assert_eq!(d(&Vertex::base(), &u), u.depth());
    }

    #[test]
    fn tree_paths_are_geodesics(a in bs_word(12)) {
        let p = bs();
        let v = vertex_of(&p, &a).unwrap();
        let path = path_to_vertex(&p, &v);
        prop_assert_eq!(path.len(), v.depth());
        let mut at = Vertex::base();
        for (k, e) in path.iter().enumerate() {
            let (s, r) = edge_endpoints(&p, e).unwrap();
            let next = if s == at { r } else { prop_assert_eq!(&r, &at); s };
            prop_assert_eq!(distance(&p, &Vertex::base(), &next).unwrap(), k + 1);
            at = next;
        }
        prop_assert_eq!(at, v);
    }

    #[test]
    fn tree_neighbors(a in bs_word(10), b in e5_word(8)) {
        let p = bs();
        let v = vertex_of(&p, &a).unwrap();
        let ns = neighbors(&p, &v).unwrap();
        prop_assert_eq!(ns.len(), 5);
        for (e, far) in &ns {
            prop_assert_eq!(distance(&p, &v, far).unwrap(), 1);
            let (s, r) = edge_endpoints(&p, e).unwrap();
            prop_assert!((s == v && r == *far) || (r == v && s == *far));
        }
        let e = Example5::new();
        let v = vertex_of(&e, &b).unwrap();
        prop_assert_eq!(neighbors(&e, &v).unwrap().len(), 4);
    }

    #[test]
    fn e5_multiplication_is_a_group(a in e5_elt(), b in e5_elt(), c in e5_elt()) {
        let e = Example5::new();
        prop_assert_eq!(e.multiply(&e.multiply(&a, &b), &c), e.multiply(&a, &e.multiply(&b, &c)));
        prop_assert_eq!(e.multiply(&a, &ExampleGElt::identity()), a.clone());
        prop_assert_eq!(e.multiply(&ExampleGElt::identity(), &a), a.clone());
        prop_assert!(e.multiply(&a, &e.invert(&a)).is_identity());
        prop_assert!(e.multiply(&e.invert(&a), &a).is_identity());
    }

    #[test]
    fn e5_theta_is_an_isomorphism(a in e5_elt(), b in e5_elt()) {
        let e = Example5::new();
        let (a, b) = (ExampleGElt::new(a.e0(), 0, a.hbar().clone()), ExampleGElt::new(b.e0(), 0, b.hbar().clone()));
        prop_assert!(e.in_h(&a));
        let ta = e.theta(&a).unwrap();
        prop_assert!(e.in_theta_h(&ta));
        prop_assert_eq!(e.theta_inv(&ta).unwrap(), a.clone());
        prop_assert_eq!(e.theta(&e.multiply(&a, &b)).unwrap(), e.multiply(&ta, &e.theta(&b).unwrap()));
    }

    #[test]
    fn e5_sector_projection_is_a_homomorphism(a in e5_elt(), b in e5_elt()) {
        let e = Example5::new();
        let (ha, hb) = (a.hbar(), b.hbar());
        let prod = ExampleGElt::new(0, 0, ha.clone());
        let prod = e.multiply(&prod, &ExampleGElt::new(0, 0, hb.clone()));
        for s in 0..4 {
            let lhs = prod.hbar().project(s);
            let rhs = e.multiply(&ExampleGElt::new(0, 0, ha.project(s)), &ExampleGElt::new(0, 0, hb.project(s)));
            prop_assert_eq!(&lhs, rhs.hbar());
        }
    }
}

#[test]
fn presentation_contracts_hold() {
    let sample: Vec<BigInt> = (-12..=12).map(BigInt::from).collect();
    bs().check_contract(&sample).unwrap();
    BsInstance::new(-4, 6).unwrap().check_contract(&sample).unwrap();
    let s3 = FiniteHnnInstance::s3_example();
    s3.check_contract(&s3.elements().collect::<Vec<_>>()).unwrap();
    let z4 = FiniteHnnInstance::z4_example();
    z4.check_contract(&z4.elements().collect::<Vec<_>>()).unwrap();
    let e = Example5::new();
    e.check_contract(&e.gn_canonical_elements(1)).unwrap();
}
