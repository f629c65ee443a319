use std::sync::Arc;

use coha_core::coha::{mul2_masked, mul2_with};
use coha_core::poly::omega_block;
use coha_core::{
    element, monomial_symmetric, mul2, muln, partitions, CohaElement, CohaError, DimVector, Exec,
    MPoly, Quiver, SubquiverPartition, VarId,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn a2() -> Arc<Quiver> {
    Arc::new(Quiver::new(2, &[(2, 1)]).unwrap())
}

fn a3() -> Arc<Quiver> {
    Arc::new(Quiver::new(3, &[(2, 1), (3, 2)]).unwrap())
}

fn d4() -> Arc<Quiver> {
    Arc::new(Quiver::new(4, &[(2, 1), (3, 1), (4, 1)]).unwrap())
}

fn kronecker() -> Arc<Quiver> {
    Arc::new(Quiver::new(2, &[(2, 1), (2, 1)]).unwrap())
}

fn quivers() -> Vec<Arc<Quiver>> {
    vec![a2(), a3(), d4(), kronecker()]
}

fn random_grade(rng: &mut ChaCha8Rng, n: usize, max: u32) -> DimVector {
    DimVector::new((0..n).map(|_| rng.gen_range(0..=max)).collect())
}

/// Two grades with entries at most `max` and at most 6 vertices' worth of
/// dimension between them.
fn random_pair(rng: &mut ChaCha8Rng, n: usize, max: u32) -> (DimVector, DimVector) {
    loop {
        let (g1, g2) = (random_grade(rng, n, max), random_grade(rng, n, max));
        if g1.total() + g2.total() <= 6 {
            return (g1, g2);
        }
    }
}

/// A homogeneous element: a product of one monomial symmetric polynomial per
/// vertex, times a small integer.
fn random_element(rng: &mut ChaCha8Rng, q: &Arc<Quiver>, gamma: DimVector) -> CohaElement {
    let mut p = MPoly::int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
    for i in 1..=q.vertex_count() {
        let g = gamma.at(i);
        if g == 0 {
            continue;
        }
        let choices = partitions(rng.gen_range(0..=2), g as usize);
        let lambda = &choices[rng.gen_range(0..choices.len())];
        p = &p * &monomial_symmetric(lambda, &omega_block(i as u32, g)).unwrap();
    }
    element(q, gamma, p).unwrap()
}

fn w(i: u32, k: u32) -> MPoly {
    MPoly::var(VarId::omega(i, k))
}

#[test]
fn asymmetric_input_is_rejected() {
    let q = a2();
    let err = element(&q, DimVector::new(vec![2, 0]), w(1, 1)).unwrap_err();
    assert_eq!(err, CohaError::NotSymmetric);
    let err = element(&q, DimVector::new(vec![1, 0]), w(2, 1)).unwrap_err();
    assert!(matches!(err, CohaError::VariableOutOfRange(_)));
}

#[test]
fn simple_factors_multiply_as_polynomials() {
    // factors at single vertices, in increasing vertex order, are consistent
    // with the singleton partition
    let q = a3();
    let f3 = element(&q, DimVector::new(vec![0, 0, 2]), &w(3, 1) * &w(3, 2)).unwrap();
    let f2 = element(&q, DimVector::new(vec![0, 1, 0]), w(2, 1).pow(3)).unwrap();
    let f1 = element(&q, DimVector::new(vec![1, 0, 0]), &w(1, 1) + &MPoly::int(2)).unwrap();
    let prod = muln(&[f1.clone(), f2.clone(), f3.clone()]).unwrap();
    assert_eq!(prod.grade(), &DimVector::new(vec![1, 1, 2]));
    assert_eq!(prod.poly(), &(&(f3.poly() * f2.poly()) * f1.poly()));
}

#[test]
fn outside_arrows_contribute_nothing() {
    let q = a3();
    let p = SubquiverPartition::new(&q, &[vec![1], vec![2, 3]], true).unwrap();
    let keep = p.internal_arrows(&q);
    assert_eq!(keep, vec![false, true]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        // γ' in block 1 and γ'' in block 2, or both in block 2
        let g1 = if rng.gen_bool(0.5) {
            DimVector::new(vec![rng.gen_range(1..=2), 0, 0])
        } else {
            DimVector::new(vec![0, rng.gen_range(0..=1), rng.gen_range(1..=2)])
        };
        let g2 = DimVector::new(vec![0, rng.gen_range(0..=2), rng.gen_range(0..=1)]);
        let f = random_element(&mut rng, &q, g1);
        let g = random_element(&mut rng, &q, g2);
        assert_eq!(mul2(&f, &g).unwrap(), mul2_masked(&f, &g, &keep).unwrap());
    }
}

#[test]
fn masking_matters_in_the_wrong_order() {
    let q = a2();
    let p = SubquiverPartition::singletons(&q);
    let keep = p.internal_arrows(&q);
    let f = element(&q, DimVector::new(vec![1, 0]), MPoly::one()).unwrap();
    let g = element(&q, DimVector::new(vec![0, 1]), MPoly::one()).unwrap();
    assert_eq!(mul2(&f, &g).unwrap(), mul2_masked(&f, &g, &keep).unwrap());
    assert_ne!(mul2(&g, &f).unwrap(), mul2_masked(&g, &f, &keep).unwrap());
}

#[test]
fn mask_length_is_checked() {
    let q = a2();
    let f = element(&q, DimVector::new(vec![1, 0]), MPoly::one()).unwrap();
    let err = mul2_masked(&f, &f, &[true, true]).unwrap_err();
    assert_eq!(
        err,
        CohaError::MaskLength {
            expected: 1,
            got: 2
        }
    );
}

#[test]
fn quiver_mismatch_is_reported() {
    let f = element(&a2(), DimVector::new(vec![1, 0]), MPoly::one()).unwrap();
    let g = element(&kronecker(), DimVector::new(vec![1, 0]), MPoly::one()).unwrap();
    assert!(matches!(mul2(&f, &g), Err(CohaError::QuiverMismatch)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn degree_contract_and_symmetry(seed in any::<u64>(), which in 0usize..4) {
        let q = &quivers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = q.vertex_count();
        let (g1, g2) = random_pair(&mut rng, n, 2);
        let f = random_element(&mut rng, q, g1.clone());
        let g = random_element(&mut rng, q, g2.clone());
        let prod = mul2(&f, &g).unwrap();
        prop_assert_eq!(prod.grade(), &DimVector::new(
            g1.entries().iter().zip(g2.entries()).map(|(a, b)| a + b).collect()));
        let blocks: Vec<Vec<VarId>> = (1..=n).map(|i| omega_block(i as u32, prod.grade().at(i))).collect();
        prop_assert!(prod.poly().is_block_symmetric(&blocks));
        for v in prod.poly().variables() {
            prop_assert!(v.b <= prod.grade().at(v.a as usize));
        }
        if let Some(d) = prod.degree() {
            let chi = q.euler_form(&g1, &g2).unwrap();
            let expected = i64::from(f.degree().unwrap()) + i64::from(g.degree().unwrap()) - chi;
            prop_assert_eq!(i64::from(d), expected);
            prop_assert_eq!(prod.poly().homogeneous_degree(), Some(d));
        }
    }

    #[test]
    fn associativity(seed in any::<u64>(), which in 0usize..4) {
        let q = &quivers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = q.vertex_count();
        let es: Vec<CohaElement> = (0..3)
            .map(|_| {
                let g = random_grade(&mut rng, n, 1);
                random_element(&mut rng, q, g)
            })
            .collect();
        let left = mul2(&mul2(&es[0], &es[1]).unwrap(), &es[2]).unwrap();
        let right = mul2(&es[0], &mul2(&es[1], &es[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bilinearity(seed in any::<u64>(), which in 0usize..4) {
        let q = &quivers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = q.vertex_count();
        let (g1, g2) = random_pair(&mut rng, n, 2);
        let f = random_element(&mut rng, q, g1.clone());
        let f2 = random_element(&mut rng, q, g1.clone());
        let g = random_element(&mut rng, q, g2);
        let sum = element(q, g1, f.poly() + f2.poly()).unwrap();
        let lhs = mul2(&sum, &g).unwrap();
        let rhs = mul2(&f, &g).unwrap().poly() + mul2(&f2, &g).unwrap().poly();
        prop_assert_eq!(lhs.poly(), &rhs);
    }

    #[test]
    fn parallel_matches_sequential(seed in any::<u64>(), which in 0usize..4) {
        let q = &quivers()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = q.vertex_count();
        let (g1, g2) = random_pair(&mut rng, n, 2);
        let f = random_element(&mut rng, q, g1);
        let g = random_element(&mut rng, q, g2);
        prop_assert_eq!(
            mul2_with(&f, &g, Exec::Sequential).unwrap(),
            mul2_with(&f, &g, Exec::Parallel).unwrap()
        );
    }
}
