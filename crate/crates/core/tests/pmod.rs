use num_bigint::BigInt;
use proptest::prelude::*;
use tamecalc::exactalg::{FgAbGroup, Matrix};
use tamecalc::injcat::{count_inj, enumerate_inj, InjWord};
use tamecalc::pmod::*;
use tamecalc::tamemod::*;

fn word(s: &str) -> InjWord {
    s.parse().unwrap()
}

fn one() -> BigInt {
    BigInt::from(1)
}

#[test]
fn representable_levels() {
    let p0 = p_functor(0, 4);
    assert!((0..=4).all(|m| p0.level(m).isomorphic(&FgAbGroup::free(1)) && (m == 4 || p0.stab(m).is_identity())));
    let p2 = p_functor(2, 5);
    for m in 0..=5 {
        assert_eq!(p2.level(m).ngens(), if m < 2 { 0 } else { (1..=m).product::<usize>() / (1..=m - 2).product::<usize>() });
    }
    // pairwise distinct: the level min(n, m) tells them apart
    for n in 0..4 {
        for m in n + 1..4 {
            assert_ne!(p_functor(n, 4).level(n).ngens(), p_functor(m, 4).level(n).ngens());
        }
    }
}

#[test]
fn hom_from_representables() {
    let p2 = p_functor(2, 4);
    let x = ColimElement::generator(&p2, 2, 0).unwrap();
    let h = hom_from_p(2, &x).unwrap().to_nat().unwrap();
    assert!(h.components.iter().all(Matrix::is_identity));

    let c = constant(&FgAbGroup::free(1), 4);
    let h = hom_from_p(0, &ColimElement::generator(&c, 0, 0).unwrap()).unwrap().to_nat().unwrap();
    assert_eq!(h.components, augmentation(0, 4).components);

    // P_2 -> P_1 from (1): (a, b) ↦ (a), computed from the level-1 element
    let p1 = p_functor(1, 4);
    let x = ColimElement::generator(&p1, 1, 0).unwrap();
    let h = hom_from_p(2, &x).unwrap();
    for w in enumerate_inj(2, 3) {
        let img = h.image(&w).unwrap();
        let expect = ColimElement::generator(&p1, 3, InjWord::new(vec![w.at(1)], 3).unwrap().lex_index()).unwrap();
        assert!(img.equals(&expect), "{w}");
    }
    assert!(h.evaluate().unwrap().equals(&x));
    // (2) at level 2 is moved by s_2 at level 3: filtration 2, not 1
    assert!(hom_from_p(1, &ColimElement::generator(&p1, 2, 1).unwrap()).is_err());
}

#[test]
fn hom_from_higher_representative() {
    // (1)@2 has filtration 1 although it lives at level 2
    let p1 = p_functor(1, 4);
    let x = ColimElement::generator(&p1, 2, word("(1)@2").lex_index()).unwrap();
    let h = hom_from_p(1, &x).unwrap();
    assert!(h.to_nat().is_err());
    let img = h.image(&word("(2)@2")).unwrap();
    assert!(img.equals(&ColimElement::generator(&p1, 2, word("(2)@2").lex_index()).unwrap()));
}

#[test]
fn kappa_is_certified() {
    for n in 0..=2 {
        let k = kappa(n, 4).unwrap();
        assert!(k.certified, "n = {n}");
        for m in 0..4 {
            assert_eq!(k.forward.source.level(1 + m).ngens(), k.forward.target.level(1 + m).ngens());
        }
    }
    // (1, 2) ↦ 1 ⊗ (1)
    let k = kappa(1, 3).unwrap();
    let img = k.forward.components[2].apply(&k.forward.source.level(2).unit(word("(1 2)@2").lex_index()));
    assert_eq!(img, k.forward.target.level(2).unit(0));
    assert!(kappa(3, 3).is_err());
}

#[test]
fn tower_projections() {
    let proj = tower_projection(1);
    let m = proj.level_matrix(5);
    let src = word("(3 5)@5");
    let img = m.apply(&p_functor(2, 5).level(5).unit(src.lex_index()));
    assert_eq!(img, p_functor(1, 5).level(5).unit(word("(3)@5").lex_index()));
    let twice = tower_projection(1).compose(&tower_projection(2)).unwrap();
    let direct = PMap::new(PSum(vec![3]), PSum(vec![1]), vec![vec![vec![(one(), InjWord::inclusion(1, 3))]]]).unwrap();
    assert_eq!(twice, direct);
    assert!(proj.to_nat(4).is_ok());
    assert_eq!(prefix_class(&word("(4 2 7)@7"), 2).unwrap(), word("(4 2)@7"));
    assert_eq!(prefix_class(&word("(4 2 7)@7"), 0).unwrap().source(), 0);
}

#[test]
fn pro_element_actions() {
    let p1 = p_functor(1, 4);
    let e = ColimElement::generator(&p1, 1, 0).unwrap();
    let ident: Vec<Combination> = (0..=3).map(|n| vec![(one(), InjWord::identity(n))]).collect();
    assert!(act_pro_element(&ident, &e).unwrap().equals(&e));

    let f = word("(3 1 4 2)@4");
    let prefixes: Vec<Combination> = (0..=3).map(|n| vec![(one(), prefix_class(&f, n).unwrap())]).collect();
    let r = act_pro_element(&prefixes, &e).unwrap();
    assert!(r.equals(&e.m_act(&word("(3)@4")).unwrap()));

    // a_1 = (1) + (2); lift a_2 = (1 3) + (2 3), a_3 = (1 3 4) + (2 3 4)
    let tower = vec![
        vec![(BigInt::from(2), InjWord::identity(0))],
        vec![(one(), word("(1)@2")), (one(), word("(2)@2"))],
        vec![(one(), word("(1 3)@3")), (one(), word("(2 3)@3"))],
        vec![(one(), word("(1 3 4)@4")), (one(), word("(2 3 4)@4"))],
    ];
    let r = act_pro_element(&tower, &e).unwrap();
    let expect = ColimElement::new(&p1, 2, vec![one(), one()]).unwrap();
    assert!(r.equals(&expect));
    let mut broken = tower.clone();
    broken[2] = vec![(one(), word("(1 3)@3"))];
    assert!(act_pro_element(&broken, &e).is_err());
}

#[test]
fn pmap_realization() {
    let s = PSum(vec![1, 2]);
    assert!((0..=3).all(|m| PMap::identity(&s).level_matrix(m).is_identity()));
    let aug = augmentation(1, 4);
    let sum = aug.components[3].to_rows();
    assert_eq!(sum, vec![vec![one(), one(), one()]]);
    let k = kappa(1, 4).unwrap();
    for m in 0..=4 {
        assert!(k.inverse.components[m].mul(&k.forward.components[m]).is_identity());
    }
    let parsed = parse_combination("2*(1 3)@3 - (2 1)@3").unwrap();
    assert_eq!(parsed, vec![(BigInt::from(2), word("(1 3)@3")), (BigInt::from(-1), word("(2 1)@3"))]);
}

fn arb_entry(n: usize, m: usize) -> impl Strategy<Value = Combination> {
    let words = enumerate_inj(n, m);
    proptest::collection::vec((-2i64..3, 0..words.len().max(1)), 0..3).prop_map(move |v| {
        if words.is_empty() {
            return vec![];
        }
        v.into_iter().map(|(c, i)| (BigInt::from(c), words[i].clone())).collect()
    })
}

proptest! {
    #[test]
    fn single_word_realizes_action(i in 0usize..12, m in 2usize..=4) {
        let words = enumerate_inj(1, 2);
        let w = &words[i % words.len()];
        let f = PMap::new(PSum(vec![2]), PSum(vec![1]), vec![vec![vec![(one(), w.clone())]]]).unwrap();
        let p1 = p_functor(1, 4);
        for v in enumerate_inj(2, m) {
            let col = f.level_matrix(m).apply(&p_functor(2, 4).level(m).unit(v.lex_index()));
            prop_assert_eq!(col, p1.act(&v, &p1.level(2).unit(w.lex_index())).unwrap());
        }
    }

    #[test]
    fn composition_realizes(a in arb_entry(1, 2), b in arb_entry(0, 1), c in arb_entry(2, 3)) {
        let f = PMap::new(PSum(vec![2]), PSum(vec![1]), vec![vec![a]]).unwrap();
        let g = PMap::new(PSum(vec![1]), PSum(vec![0]), vec![vec![b]]).unwrap();
        let h = PMap::new(PSum(vec![3]), PSum(vec![2]), vec![vec![c]]).unwrap();
        let gf = g.compose(&f).unwrap();
        for m in 0..=4 {
            prop_assert_eq!(gf.level_matrix(m), g.level_matrix(m).mul(&f.level_matrix(m)));
        }
        prop_assert_eq!(g.compose(&f).unwrap().compose(&h).unwrap(), g.compose(&f.compose(&h).unwrap()).unwrap());
    }

    #[test]
    fn projection_commutes_with_action(w in 0usize..24, g in 0usize..24) {
        let src = &enumerate_inj(2, 4)[w % count_inj(2, 4)];
        let sigma = &enumerate_inj(4, 4)[g];
        let moved = InjWord::compose(sigma, src).unwrap();
        prop_assert_eq!(drop_last(&moved), InjWord::compose(sigma, &drop_last(src)).unwrap());
    }
}

#[test]
fn resolutions_of_projectives_stop() {
    for n in 0..=2 {
        let r = resolve(&p_functor(n, 4), 4).unwrap();
        assert_eq!(r.terms[0], PSum(vec![n]));
        assert!(r.terminated());
        assert!(r.complete[0]);
    }
}

// levelwise oracle: the kernel of the augmentation P_1 -> Z at level 2 is
// spanned by (1) - (2), which generates everything above
#[test]
fn resolution_of_augmentation_kernel() {
    let k = augmentation_kernel(1, 4);
    let r = extend_resolution(resolve(&k, 4).unwrap(), 1).unwrap();
    assert_eq!(r.terms[0], PSum(vec![2]));
    let aug = &r.augmentation.components[2];
    let x = aug.apply(&p_functor(2, 4).level(2).unit(0));
    let in_p1 = kernel_functor(&augmentation(1, 4)).unwrap().1.components[2].apply(&x);
    assert_eq!(in_p1.iter().map(|v| v * v).sum::<BigInt>(), BigInt::from(2));
    assert!(r.verify_exact());
    assert!(r.complete.iter().all(|&c| c));
}

#[test]
fn incomplete_search_is_flagged() {
    let r = resolve(&p_functor(3, 4), 2).unwrap();
    assert!(!r.complete[0]);
    assert!(r.terms[0].is_empty());
}
