use proptest::prelude::*;

use semiprimal::algebra::{for_each_tuple, FiniteAlgebra, Operation, DEFAULT_CAP};
use semiprimal::congruence::{all_congruences, congruence_generated, kernel, quotient, Congruence};
use semiprimal::hom::{enumerate_homomorphisms, find_isomorphism, Homomorphism};
use semiprimal::product::direct_product;
use semiprimal::subuniverse::{enumerate_subuniverses, induced_algebra, is_closed, SubUniverse};
use semiprimal::ElemSet;

/// A random algebra with one unary and one binary operation, plus an
/// optional constant.
fn arb_algebra(max: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max, any::<bool>()).prop_flat_map(|(n, constant)| {
        (
            prop::collection::vec(0..n, n),
            prop::collection::vec(0..n, n * n),
            0..n,
        )
            .prop_map(move |(u, b, c)| {
                let mut ops = vec![
                    Operation {
                        name: "u".into(),
                        arity: 1,
                        table: u,
                    },
                    Operation {
                        name: "b".into(),
                        arity: 2,
                        table: b,
                    },
                ];
                if constant {
                    ops.push(Operation {
                        name: "c".into(),
                        arity: 0,
                        table: vec![c],
                    });
                }
                FiniteAlgebra::new("rand", n, ops).unwrap()
            })
    })
}

fn same_signature_pair(max: usize) -> impl Strategy<Value = (FiniteAlgebra, FiniteAlgebra)> {
    (arb_algebra(max), arb_algebra(max)).prop_filter("same signature", |(a, b)| a.same_signature(b))
}

fn brute_homs(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_tuple(b.size(), a.size(), |m| {
        let ok = a.ops().iter().enumerate().all(|(i, op)| {
            let mut good = true;
            for_each_tuple(a.size(), op.arity, |args| {
                let image: Vec<usize> = args.iter().map(|&x| m[x]).collect();
                good &= m[a.apply(i, args)] == b.apply(i, &image);
            });
            good
        });
        if ok {
            out.push(m.to_vec());
        }
    });
    out
}

/// Every equivalence on `{0..n-1}` as restricted growth strings.
fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(i + 1, n, cur, max.max(b), out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0];
    go(1, n, &mut cur, 0, &mut out);
    out
}

fn compatible(a: &FiniteAlgebra, labels: &[usize]) -> bool {
    a.ops().iter().enumerate().all(|(i, op)| {
        let mut ok = true;
        for_each_tuple(a.size(), op.arity, |x| {
            for_each_tuple(a.size(), op.arity, |y| {
                if x.iter().zip(y).all(|(&p, &q)| labels[p] == labels[q]) {
                    ok &= labels[a.apply(i, x)] == labels[a.apply(i, y)];
                }
            });
        });
        ok
    })
}

fn brute_subuniverses(a: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let n = a.size();
    let mut out: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| is_closed(a, &ElemSet::from_elems(n, s.iter().copied())))
        .collect();
    out.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subuniverses_match_subset_scan(a in arb_algebra(6)) {
        let got: Vec<Vec<usize>> = enumerate_subuniverses(&a).iter().map(SubUniverse::elements).collect();
        prop_assert_eq!(got, brute_subuniverses(&a));
    }

    #[test]
    fn homomorphisms_match_brute_force((a, b) in same_signature_pair(5)) {
        let got: Vec<Vec<usize>> = enumerate_homomorphisms(&a, &b).unwrap().into_iter().map(|h| h.map).collect();
        prop_assert_eq!(got, brute_homs(&a, &b));
    }

    #[test]
    fn generated_congruence_is_least_compatible(a in arb_algebra(5), x in 0usize..5, y in 0usize..5) {
        let n = a.size();
        let (x, y) = (x % n, y % n);
        let theta = congruence_generated(&a, &[(x, y)]).unwrap();
        prop_assert!(theta.is_compatible(&a));
        for labels in all_partitions(n) {
            if labels[x] == labels[y] && compatible(&a, &labels) {
                prop_assert!(theta.leq(&Congruence::from_labels(&labels)));
            }
        }
    }

    #[test]
    fn congruence_lattice_matches_partition_scan(a in arb_algebra(5)) {
        let mut got = all_congruences(&a);
        got.sort();
        let mut expected: Vec<Congruence> = all_partitions(a.size())
            .into_iter()
            .filter(|l| compatible(&a, l))
            .map(|l| Congruence::from_labels(&l))
            .collect();
        expected.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn first_isomorphism_theorem((a, b) in same_signature_pair(4)) {
        for h in enumerate_homomorphisms(&a, &b).unwrap().into_iter().take(6) {
            let (q, _) = quotient(&a, &kernel(&h)).unwrap();
            let image = SubUniverse::new(&b, h.image(b.size())).unwrap();
            let (img, _) = induced_algebra(&b, &image).unwrap();
            prop_assert!(find_isomorphism(&q, &img).unwrap().is_some());
        }
    }

    #[test]
    fn projections_are_homomorphisms((a, b) in same_signature_pair(4)) {
        let p = direct_product(&a.signature(), &[&a, &b], DEFAULT_CAP).unwrap();
        prop_assert!(p.projection(0).verify(&p.algebra, &a));
        prop_assert!(p.projection(1).verify(&p.algebra, &b));
        for x in 0..p.algebra.size() {
            prop_assert_eq!(p.encode(&p.decode(x)), x);
        }
    }
}

#[test]
fn partition_counts_are_bell_numbers() {
    let bell = [1, 1, 2, 5, 15, 52];
    for (n, &b) in bell.iter().enumerate() {
        assert_eq!(all_partitions(n).len(), b);
    }
}

#[test]
fn identity_and_composition_of_homomorphisms() {
    let a = FiniteAlgebra::new(
        "z3",
        3,
        vec![FiniteAlgebra::op_from_fn("s", 3, 1, |t| (t[0] + 1) % 3)],
    )
    .unwrap();
    let homs = enumerate_homomorphisms(&a, &a).unwrap();
    assert_eq!(homs.len(), 3);
    assert!(homs.contains(&Homomorphism::identity(3)));
    for f in &homs {
        for g in &homs {
            assert!(f.then(g).verify(&a, &a));
        }
    }
}
