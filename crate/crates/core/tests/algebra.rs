use proptest::prelude::*;

use rmodule::series::{Field, LaurentSeries};
use rmodule::tropical::{jump_set, lambda_coordinate_bound, lambda_gamma, trop_act, Fin, Trop};
use rmodule::TwistedPoly;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just((2, 1)), Just((3, 1)), Just((2, 2)), Just((5, 1))].prop_map(|(p, k)| Field::new(p, k).unwrap())
}

fn series(f: Field, lo: i64, hi: i64) -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((lo..hi, 1..f.d()), 0..6).prop_map(move |terms| LaurentSeries::from_terms(f, &terms))
}

fn nonzero_series(f: Field, lo: i64, hi: i64) -> impl Strategy<Value = LaurentSeries> {
    series(f, lo, hi).prop_filter("nonzero", |x| !x.is_zero())
}

fn poly(f: Field, max_deg: usize) -> impl Strategy<Value = TwistedPoly> {
    prop::collection::vec(series(f, -3, 5), 1..=max_deg + 1).prop_map(move |cs| TwistedPoly::from_coeffs(f, cs))
}

/// Twisted polynomial with a monomial leading coefficient, so right division by it is exact.
fn monic_like(f: Field, max_deg: usize) -> impl Strategy<Value = TwistedPoly> {
    (prop::collection::vec(series(f, -3, 5), 0..=max_deg), 1..f.d(), -3i64..4).prop_map(move |(mut cs, c, e)| {
        cs.push(LaurentSeries::monomial(f, c, e));
        TwistedPoly::from_coeffs(f, cs)
    })
}

fn val(x: &LaurentSeries) -> Trop {
    x.valuation().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lambda_decomposition_reassembles(
        (f, x) in field().prop_flat_map(|f| (Just(f), series(f, -10, 20)))
    ) {
        let d = f.d();
        let sum = (0..d).fold(LaurentSeries::zero(f), |acc, i| {
            acc.add(&x.lambda_i(i).frob_pow(1).shift(i as i64))
        });
        prop_assert!(sum.agrees_with(&x));
    }

    #[test]
    fn valuation_is_ultrametric(
        (_f, a, b) in field().prop_flat_map(|f| (Just(f), series(f, -6, 10), series(f, -6, 10)))
    ) {
        let (va, vb, vs) = (val(&a), val(&b), val(&a.add(&b)));
        prop_assert!(vs >= va.min(vb));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
    }

    #[test]
    fn frobenius_scales_valuation(
        (f, x, i) in field().prop_flat_map(|f| (Just(f), nonzero_series(f, -6, 10), 0u32..3))
    ) {
        let q = (f.d() as i64).pow(i);
        prop_assert_eq!(val(&x.frob_pow(i)), val(&x).scale(q));
    }

    #[test]
    fn lambda_regularity(
        (f, x, g) in field().prop_flat_map(|f| (Just(f), series(f, -10, 20), -10i64..20))
    ) {
        let d = f.d() as i64;
        let inside = val(&x) >= Fin(g);
        if inside {
            for i in 0..d {
                prop_assert!(val(&x.lambda_i(i as u32)) >= lambda_gamma(Fin(g), d));
            }
        }
        let coords = (0..d).all(|i| val(&x.lambda_i(i as u32)) >= lambda_coordinate_bound(Fin(g), i, d));
        prop_assert_eq!(inside, coords);
    }

    #[test]
    fn ring_axioms(
        (_f, a, b, c) in field().prop_flat_map(|f| (Just(f), poly(f, 2), poly(f, 2), poly(f, 2)))
    ) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
    }

    #[test]
    fn action_is_compatible(
        (_f, x, q, r) in field().prop_flat_map(|f| (Just(f), series(f, -4, 8), poly(f, 2), poly(f, 2)))
    ) {
        prop_assert_eq!(r.apply(&q.apply(&x)), q.mul(&r).apply(&x));
    }

    #[test]
    fn right_division(
        (f, r, q) in field().prop_flat_map(|f| (Just(f), poly(f, 3), monic_like(f, 1)))
    ) {
        let (quot, rem) = TwistedPoly::divmod_right(&r, &q).unwrap();
        prop_assert_eq!(q.mul(&quot).add(&rem), r.clone());
        prop_assert!(rem.degree() < q.degree());
        let other = quot.add(&TwistedPoly::x_pow(f, 1));
        prop_assert!(r.sub(&q.mul(&other)).degree() >= q.degree());
    }

    #[test]
    fn alpha_decomposition_round_trip(
        (f, q, n) in field().prop_flat_map(|f| (Just(f), poly(f, 2), 1u32..3))
    ) {
        let parts = q.alpha_decompose(n);
        prop_assert_eq!(parts.len() as i64, (f.d() as i64).pow(n));
        let sum = parts.iter().enumerate().fold(TwistedPoly::zero(f), |acc, (i, p)| {
            acc.add(&p.mul(&TwistedPoly::x_pow(f, i as i64)))
        });
        prop_assert_eq!(sum, q);
    }

    #[test]
    fn root_map_identity(
        (f, q, n) in field().prop_flat_map(|f| (Just(f), poly(f, 2), 1u32..3))
    ) {
        let tn = TwistedPoly::t_pow(f, n as usize);
        let k = (f.d() as i64).pow(n);
        let sum = (0..k).fold(TwistedPoly::zero(f), |acc, i| {
            acc.add(&q.root_component(n, i).mul(&tn).mul(&TwistedPoly::x_pow(f, i)))
        });
        prop_assert_eq!(tn.mul(&q), sum);
    }

    #[test]
    fn separability_propagates_to_roots(
        (f, q, n) in field().prop_flat_map(|f| (Just(f), poly(f, 2), 1u32..3))
    ) {
        prop_assume!(q.is_separable());
        let k = (f.d() as i64).pow(n);
        prop_assert!((0..k).any(|i| q.root_component(n, i).is_separable()));
    }

    #[test]
    fn tropical_action_composes(
        (_f, g, r, q) in field().prop_flat_map(|f| (Just(f), -12i64..12, poly(f, 2), poly(f, 2)))
    ) {
        prop_assert_eq!(trop_act(trop_act(Fin(g), &r), &q), trop_act(Fin(g), &r.mul(&q)));
        prop_assert!(trop_act(Fin(g), &r.add(&q)) >= trop_act(Fin(g), &r).min(trop_act(Fin(g), &q)));
    }

    #[test]
    fn valuation_follows_tropical_action_off_jumps(
        (_f, x, q) in field().prop_flat_map(|f| (Just(f), nonzero_series(f, -8, 8), poly(f, 2)))
    ) {
        let Fin(v) = val(&x) else { unreachable!() };
        let jumps = jump_set(&q);
        prop_assert!(jumps.len() as i64 <= q.degree().max(0));
        if !jumps.contains(&v) {
            prop_assert_eq!(val(&q.apply(&x)), trop_act(Fin(v), &q));
        }
    }

    #[test]
    fn extreme_monomials_dominate(
        (_f, x, q) in field().prop_flat_map(|f| (Just(f), nonzero_series(f, -8, 8), poly(f, 2)))
    ) {
        let Fin(v) = val(&x) else { unreachable!() };
        let jumps = jump_set(&q);
        let (Some(&lo), Some(&hi)) = (jumps.first(), jumps.last()) else { return Ok(()) };
        let cv = q.coeff_valuations();
        let pick = |i: usize| TwistedPoly::monomial(i, q.coeff(i));
        if v > hi {
            let low = pick(cv.first().unwrap().0);
            prop_assert_eq!(val(&q.apply(&x)), trop_act(Fin(v), &low));
        }
        if v < lo {
            let top = pick(cv.last().unwrap().0);
            prop_assert_eq!(val(&q.apply(&x)), trop_act(Fin(v), &top));
        }
    }
}
