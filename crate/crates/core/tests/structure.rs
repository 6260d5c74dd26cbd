use proptest::prelude::*;

use rmodule::complement::{comp_decompose, comp_f};
use rmodule::decide::{Membership, Window};
use rmodule::error::Error;
use rmodule::hensel::hensel_solve_to;
use rmodule::linalg::{lower_separable, triangulate, vddku, RMatrix};
use rmodule::logic::{Atom, LambdaTerm, PPFormula};
use rmodule::series::{Field, LaurentSeries};
use rmodule::tropical::{hensel_pair, Fin, Trop};
use rmodule::TwistedPoly;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(2u32), Just(3)].prop_map(|p| Field::prime(p).unwrap())
}

fn series(f: Field, lo: i64, hi: i64, terms: usize) -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((lo..hi, 1..f.d()), 0..=terms).prop_map(move |t| LaurentSeries::from_terms(f, &t))
}

fn monomial(f: Field) -> impl Strategy<Value = LaurentSeries> {
    (1..f.d(), -2i64..3).prop_map(move |(c, e)| LaurentSeries::monomial(f, c, e))
}

/// Entries with monomial coefficients, degree ≤ 2.
fn entry(f: Field) -> impl Strategy<Value = TwistedPoly> {
    prop::collection::vec(prop::option::weighted(0.6, monomial(f)), 1..=3).prop_map(move |cs| {
        TwistedPoly::from_coeffs(f, cs.into_iter().map(|c| c.unwrap_or_else(|| LaurentSeries::zero(f))).collect())
    })
}

fn matrix(f: Field, rows: usize, cols: usize) -> impl Strategy<Value = RMatrix> {
    prop::collection::vec(prop::collection::vec(entry(f), cols), rows).prop_map(move |d| RMatrix::from_rows(f, cols, d))
}

fn separable(f: Field) -> impl Strategy<Value = TwistedPoly> {
    (monomial(f), prop::collection::vec(series(f, -2, 4, 2), 0..=2)).prop_map(move |(a0, rest)| {
        let mut cs = vec![a0];
        cs.extend(rest);
        TwistedPoly::from_coeffs(f, cs)
    })
}

fn val(x: &LaurentSeries) -> Trop {
    x.valuation().unwrap()
}

/// ∃ȳ x̄ − ȳ.Q ∈ P_hi^m.
fn image_formula(q: &RMatrix, hi: i64) -> PPFormula {
    let f = q.field();
    let m = q.cols();
    let free = (0..m).map(|j| format!("x{j}")).collect();
    let bound = (0..q.rows()).map(|i| format!("y{i}")).collect();
    let atoms = (0..m)
        .map(|j| {
            let t = (0..q.rows()).fold(LambdaTerm::var(j, TwistedPoly::one(f)), |t, i| {
                t.add(&LambdaTerm::var(m + i, q.get(i, j).neg()))
            });
            Atom::In(t, Fin(hi))
        })
        .collect();
    PPFormula::new(f, free, bound, atoms)
}

fn image_vector(q: &RMatrix, ys: &[LaurentSeries], hi: i64) -> Vec<LaurentSeries> {
    let f = q.field();
    (0..q.cols())
        .map(|j| {
            (0..q.rows())
                .fold(LaurentSeries::zero(f), |acc, i| acc.add(&q.get(i, j).apply(&ys[i % ys.len()])))
                .truncate(Fin(hi))
                .to_exact()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn triangulation_witness_verifies(
        (_f, a) in field().prop_flat_map(|f| (Just(f), (1usize..4, 1usize..4).prop_flat_map(move |(r, c)| matrix(f, r, c))))
    ) {
        let tr = triangulate(&a).unwrap();
        prop_assert!(tr.verifies(&a));
    }

    #[test]
    fn lower_separable_diagonal(
        (f, a) in field().prop_flat_map(|f| (Just(f), (1usize..4, 1usize..3).prop_flat_map(move |(r, c)| matrix(f, r, c))))
    ) {
        let u: Vec<LambdaTerm> = (0..a.cols()).map(|j| LambdaTerm::var(j, TwistedPoly::one(f))).collect();
        let ls = lower_separable(&a, &u).unwrap();
        for k in 0..ls.rank {
            prop_assert!(ls.s.get(k, k).is_separable());
            for c in k + 1..ls.s.cols() {
                prop_assert!(ls.s.get(k, c).is_zero());
            }
        }
        for c in ls.rank..ls.s.cols() {
            prop_assert!(ls.s.col_is_zero(c));
        }
    }

    #[test]
    fn hensel_solution_laws(
        (f, s, x) in field().prop_flat_map(|f| (Just(f), separable(f), series(f, 0, 24, 5)))
    ) {
        let data = hensel_pair(&s).unwrap();
        let x = x.shift(data.hens.max(-6));
        let precision = 40;
        match hensel_solve_to(&s, &x, precision) {
            Ok(sol) => {
                let v0 = val(&s.coeff(0));
                prop_assert!(sol.y.val_lower_bound() >= Fin(data.h) || data.unbounded);
                prop_assert!(s.apply(&sol.y).sub(&x).val_lower_bound() >= Fin(precision));
                if let Fin(vx) = val(&x) {
                    prop_assert_eq!(val(&sol.y), Fin(vx - v0.fin().unwrap()));
                }
                let other = x.add(&LaurentSeries::x_pow(f, data.hens.max(0) + 2));
                let sol2 = hensel_solve_to(&s, &other, precision).unwrap();
                prop_assert!(!sol2.y.agrees_with(&sol.y));
            }
            Err(Error::OutsideBall(_)) => prop_assert!(val(&x) < Fin(data.hens)),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn decomposition_resums(
        (f, gens, x) in field().prop_flat_map(|f| (
            Just(f),
            prop::collection::vec(entry(f).prop_filter("nonzero", |q| !q.is_zero()), 1..=2),
            series(f, -24, 8, 6),
        ))
    ) {
        let data = comp_f(f, &gens).unwrap();
        let dec = comp_decompose(&x, &data).unwrap();
        prop_assert_eq!(dec.a.add(&dec.c).add(&dec.r), x.clone());
        prop_assert!(val(&dec.r) >= dec.radius);
        let q = (f.d() as i64).pow(data.level);
        for n in (0..q).filter(|n| !data.complement_indices.contains(n)) {
            prop_assert!(dec.c.lambda(data.level, n).is_zero());
        }
        let a = dec.ys.iter().zip(&data.image.gens).fold(LaurentSeries::zero(f), |acc, (y, g)| acc.add(&g.apply(y)));
        prop_assert_eq!(a, dec.a.clone());

        let z = LaurentSeries::x_pow(f, dec.radius.fin().unwrap_or(0).max(0) + 3);
        let moved = comp_decompose(&x.add(&z), &data).unwrap();
        prop_assert_eq!(moved.a.add(&moved.c).add(&moved.r), x.add(&z));

        let r = TwistedPoly::parse(f, "t + X").unwrap();
        let transported: Vec<TwistedPoly> = gens.iter().map(|g| g.mul(&r)).collect();
        let tdata = comp_f(f, &transported).unwrap();
        let tdec = comp_decompose(&x, &tdata).unwrap();
        prop_assert_eq!(tdec.a.add(&tdec.c).add(&tdec.r), x);
    }

    #[test]
    fn image_and_complement_are_pseudo_orthogonal(
        (f, gens, y, z) in field().prop_flat_map(|f| (
            Just(f),
            prop::collection::vec(entry(f).prop_filter("nonzero", |q| !q.is_zero()), 1..=2),
            prop::collection::vec(series(f, -10, 4, 3), 2),
            prop::collection::vec(series(f, -10, 4, 3), 4),
        ))
    ) {
        let data = comp_f(f, &gens).unwrap();
        let a = data.image.gens.iter().zip(&y).fold(LaurentSeries::zero(f), |acc, (g, y)| acc.add(&g.apply(y)));
        let c = data.complement_indices.iter().zip(&z).fold(LaurentSeries::zero(f), |acc, (&j, z)| {
            acc.add(&TwistedPoly::monomial(data.level as usize, LaurentSeries::x_pow(f, j)).apply(z))
        });
        let bound = if data.threshold.is_inf() { data.gamma } else { data.threshold };
        let (va, vc, vs) = (val(&a), val(&c), val(&a.add(&c)));
        if vs >= bound {
            prop_assert!(va >= bound && vc >= bound);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn vddku_preserves_image(
        (_f, q, ys) in field().prop_flat_map(|f| (
            Just(f),
            matrix(f, 2, 2),
            prop::collection::vec(series(f, -4, 8, 3), 2),
        ))
    ) {
        let hi = 16;
        let v = vddku(&q).unwrap();
        let there = image_vector(&q, &ys, hi);
        let back = image_vector(&v.q, &ys, hi);
        let lo = there.iter().chain(&back).filter_map(|x| val(x).fin()).min().unwrap_or(0).min(-4);
        let mut into_new = Membership::new(&image_formula(&v.q, hi), Window { lo, hi }).unwrap();
        let mut into_old = Membership::new(&image_formula(&q, hi), Window { lo, hi }).unwrap();
        prop_assert!(into_new.contains(&there).unwrap());
        prop_assert!(into_old.contains(&back).unwrap());
    }
}
