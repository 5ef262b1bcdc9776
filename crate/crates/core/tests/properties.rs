use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mpcore::harness::{random_gl, random_parabolic, random_sp};
use mpcore::mpcover::{cocycle, mp_invert, mp_multiply, Backend, MpElement};
use mpcore::qforms::{invariants, QuadForm};
use mpcore::rational::{frac, int};
use mpcore::scalars::{hilbert, square_class, Place, Sign};
use mpcore::spgroup::{bruhat_decompose, x_function, SpElement};

fn place() -> impl Strategy<Value = Place> {
    prop_oneof![Just(Place::Finite(2)), Just(Place::Finite(3)), Just(Place::Finite(5)), Just(Place::Real)]
}

fn nonzero() -> impl Strategy<Value = (i64, i64)> {
    (prop_oneof![-500i64..=-1, 1i64..=500], 1i64..=500)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_is_symmetric_and_kills_norms(a in nonzero(), b in nonzero(), v in place()) {
        let (a, b) = (frac(a.0, a.1), frac(b.0, b.1));
        prop_assert_eq!(hilbert(&a, &b, v).unwrap(), hilbert(&b, &a, v).unwrap());
        prop_assert_eq!(hilbert(&a, &-&a, v).unwrap(), Sign::Plus);
        prop_assert_eq!(hilbert(&a, &(&b * &b), v).unwrap(), Sign::Plus);
    }

    #[test]
    fn square_class_is_multiplicative(a in nonzero(), b in nonzero(), v in place()) {
        let (a, b) = (frac(a.0, a.1), frac(b.0, b.1));
        let lhs = square_class(&(&a * &b), v).unwrap();
        let rhs = &square_class(&a, v).unwrap() * &square_class(&b, v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bruhat_reconstructs(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_sp(&mut rng, n, 6);
        let b = bruhat_decompose(&g);
        prop_assert!(b.p1.in_siegel_parabolic() && b.p2.in_siegel_parabolic());
        prop_assert_eq!(b.reconstruct(), g);
    }

    #[test]
    fn x_is_parabolic_equivariant(seed in any::<u64>(), n in 1usize..=3, v in place()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_sp(&mut rng, n, 6);
        let p = random_parabolic(&mut rng, n, 3);
        let lhs = x_function(&(&p * &g), v);
        prop_assert_eq!(lhs, &x_function(&p, v) * &x_function(&g, v));
    }

    #[test]
    fn cover_inverse(seed in any::<u64>(), n in 1usize..=3, minus in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Place::Finite(2);
        let eps = if minus { Sign::Minus } else { Sign::Plus };
        let x = MpElement::new(random_sp(&mut rng, n, 5), eps, v);
        let y = mp_invert(&x).unwrap();
        prop_assert_eq!(mp_multiply(&x, &y).unwrap(), MpElement::identity(n, v));
    }

    #[test]
    fn cocycle_identity(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = Place::Finite(2);
        let g: Vec<_> = (0..3).map(|_| random_sp(&mut rng, n, 5)).collect();
        let c = |a: &SpElement, b: &SpElement| cocycle(a, b, v, Backend::Auto).unwrap();
        prop_assert_eq!(
            c(&g[0], &g[1]) * c(&(&g[0] * &g[1]), &g[2]),
            c(&g[0], &(&g[1] * &g[2])) * c(&g[1], &g[2])
        );
    }

    #[test]
    fn form_invariants_ignore_basis(seed in any::<u64>(), d in 1usize..=4, v in place()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let diag: Vec<_> = (0..d).map(|i| int(if i % 2 == 0 { 1 + i as i64 } else { -3 })).collect();
        let q = QuadForm::diagonal(&diag);
        let q2 = q.change_basis(&random_gl(&mut rng, d));
        prop_assert_eq!(invariants(&q, v), invariants(&q2, v));
    }
}
