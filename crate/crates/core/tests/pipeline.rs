//! The golden construction pipeline: four reductions stacked into a
//! third-order space, all provably singleton.

use cspace_core::compose::{par, seq};
use cspace_core::computon::Computon;
use cspace_core::enumerate::member;
use cspace_core::formula::{prove_finite, reduce, AtomicTerm, Finiteness, Formula};
use cspace_core::space::{cardinality, order, Cardinality, Space};

fn count_eq(t: &Space, n: u32) -> Formula {
    Formula::atom(AtomicTerm::ParCountEq {
        target: t.clone(),
        count: n,
    })
}

fn index_eq(i: u32, t: &Space) -> Formula {
    Formula::atom(AtomicTerm::SeqIndexEq {
        index: i,
        target: t.clone(),
    })
}

fn len_eq(l: u32) -> Formula {
    Formula::atom(AtomicTerm::SeqLenEq { len: l })
}

fn singleton(space: &Space) -> Computon {
    match prove_finite(space) {
        Finiteness::Finite(members) => {
            assert_eq!(members.len(), 1, "expected a singleton space");
            members.into_iter().next().unwrap()
        }
        Finiteness::Unknown => panic!("expected provable finiteness"),
    }
}

#[test]
fn third_order_pipeline_materializes_singletons() {
    let prims: Vec<Space> = (1..=5).map(|i| Space::primitive(format!("S{i}"))).collect();
    let (s1, s2, s3, s4, s5) = (
        &prims[0], &prims[1], &prims[2], &prims[3], &prims[4],
    );

    let s6 = par(&[s1.clone(), s2.clone()]).unwrap();
    let a = reduce(&s6, &Formula::and(count_eq(s1, 1), count_eq(s2, 1))).unwrap();
    assert_eq!(
        singleton(&a),
        Computon::parallel(vec![(s1.clone(), 1), (s2.clone(), 1)]).unwrap()
    );

    let s7 = seq(&[s3.clone(), s4.clone()]).unwrap();
    let b = reduce(
        &s7,
        &Formula::conjunction(vec![index_eq(1, s3), index_eq(2, s4), len_eq(2)]),
    )
    .unwrap();
    assert_eq!(
        singleton(&b),
        Computon::sequential(vec![s3.clone(), s4.clone()]).unwrap()
    );

    let s8 = par(&[a.clone(), b.clone()]).unwrap();
    let c = reduce(&s8, &Formula::and(count_eq(&a, 2), count_eq(&b, 1))).unwrap();
    assert_eq!(
        singleton(&c),
        Computon::parallel(vec![(a.clone(), 2), (b.clone(), 1)]).unwrap()
    );

    let s9 = seq(&[c.clone(), s5.clone()]).unwrap();
    let d = reduce(
        &s9,
        &Formula::conjunction(vec![index_eq(1, &c), index_eq(2, s5), len_eq(2)]),
    )
    .unwrap();
    let d_member = singleton(&d);
    assert_eq!(
        d_member,
        Computon::sequential(vec![c.clone(), s5.clone()]).unwrap()
    );
    assert!(member(&d_member, &s9));

    // Orders climb one level per stage.
    assert_eq!(order(&a), Ok(1));
    assert_eq!(order(&b), Ok(1));
    assert_eq!(order(&c), Ok(2));
    assert_eq!(order(&s9), Ok(3));
    assert_eq!(order(&d), Ok(3));

    assert_eq!(cardinality(&a), Cardinality::Finite(1));
    assert_eq!(cardinality(&d), Cardinality::Finite(1));
    assert_eq!(cardinality(&s9), Cardinality::Continuum);
}
