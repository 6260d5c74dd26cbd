//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rmodule::complement::comp_f;
use rmodule::decide::{
    invariant, oracle_estimate, oracle_projection_dim, oracle_quotient, universalize, Invariant, Membership, Window,
    DEFAULT_SLACK,
};
use rmodule::hensel::{axiom_check, hensel_solve_to, AxiomConfig};
use rmodule::linalg::{vddku, RMatrix};
use rmodule::logic::{qe_near_zero, Atom, LambdaTerm, PPFormula};
use rmodule::series::{random_poly, random_sparse, Field, LaurentSeries};
use rmodule::tropical::{hensel_pair, jump_set, Fin};
use rmodule::TwistedPoly;

const PRECISION: i64 = 64;

fn field(p: u32) -> Field {
    Field::prime(p).unwrap()
}

fn pp(f: Field, s: &str) -> PPFormula {
    PPFormula::parse(f, s).unwrap()
}

fn poly(f: Field, s: &str) -> TwistedPoly {
    TwistedPoly::parse(f, s).unwrap()
}

fn val(x: &LaurentSeries) -> Option<i64> {
    x.leading().map(|(n, _)| n)
}

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Every truncated element splits as ℘-image + complement + 𝒪 with exact re-sum.
fn artin_schreier_decomposition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for p in [2u32, 3] {
        let f = field(p);
        let g = poly(f, "t - 1");
        let data = comp_f(f, &[g.clone()]).map_err(|e| e.to_string())?;
        check(data.level == 1 && data.complement_indices == (1..p as i64).collect::<Vec<_>>(), || {
            format!("p={p}: complement indices {:?}", data.complement_indices)
        })?;
        for _ in 0..500 {
            let x = random_poly(f, &mut rng, -40, PRECISION).truncate(Fin(PRECISION));
            let dec = rmodule::complement::comp_decompose(&x, &data).map_err(|e| e.to_string())?;
            let resum = dec.a.add(&dec.c).add(&dec.r).sub(&x).truncate(Fin(PRECISION));
            check(resum.is_zero(), || format!("p={p}: re-sum of {x} off by {resum}"))?;
            let image: LaurentSeries = dec
                .ys
                .iter()
                .zip(&data.image.gens)
                .fold(LaurentSeries::zero(f), |acc, (y, g)| acc.add(&g.apply(y)));
            check(image.sub(&dec.a).truncate(Fin(PRECISION)).is_zero(), || format!("p={p}: a not in the image for {x}"))?;
            check(dec.c.lambda(1, 0).is_zero(), || format!("p={p}: complement part {} has p-th power terms", dec.c))?;
            check(val(&dec.r).map_or(true, |v| v >= 0), || format!("p={p}: remainder {} not integral", dec.r))?;
        }
    }
    Ok("1000 decompositions".into())
}

fn valuation_ring_meets_image() -> Outcome {
    for p in [2u32, 3] {
        let f = field(p);
        let got = oracle_quotient(&pp(f, "x in P(0)"), &pp(f, "E y : x = y.(t - 1)"), Fin(0), Fin(4))
            .map_err(|e| e.to_string())?;
        check(got == Invariant::Finite { log_d: 1 }, || format!("p={p}: {got:?}"))?;
    }
    Ok("index p for p = 2, 3".into())
}

fn tropical_data() -> Outcome {
    let q = poly(field(2), "t - 1");
    let jumps = jump_set(&q);
    let hd = hensel_pair(&q).map_err(|e| e.to_string())?;
    check(jumps == vec![0] && hd.h == 1 && hd.hens == 1, || format!("jumps {jumps:?}, h {}, hens {}", hd.h, hd.hens))?;
    Ok("jump {0}, h = hens = 1".into())
}

fn random_separable(f: Field, rng: &mut ChaCha8Rng) -> TwistedPoly {
    let deg = rng.gen_range(1..=3usize);
    let coeffs = (0..=deg)
        .map(|i| {
            if i > 0 && i < deg && rng.gen_bool(0.3) {
                return LaurentSeries::zero(f);
            }
            let lo = rng.gen_range(-2..3);
            let terms = rng.gen_range(1..=4);
            let c = random_sparse(f, rng, lo, lo + 4, terms);
            if c.is_zero() {
                LaurentSeries::x_pow(f, lo)
            } else {
                c
            }
        })
        .collect();
    TwistedPoly::from_coeffs(f, coeffs)
}

fn hensel_solver() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut n = 0;
    while n < 200 {
        let f = field([2, 3][n % 2]);
        let s = random_separable(f, &mut rng);
        let hd = hensel_pair(&s).map_err(|e| e.to_string())?;
        let v0 = val(&s.coeff(0)).unwrap();
        let terms = rng.gen_range(1..=4);
        let x = random_sparse(f, &mut rng, hd.hens, hd.hens + 16, terms);
        if x.is_zero() {
            continue;
        }
        let x = x.truncate(Fin(PRECISION));
        let sol = hensel_solve_to(&s, &x, PRECISION).map_err(|e| format!("s = {s}, x = {x}: {e}"))?;
        let y = &sol.y;
        check(val(y).is_some_and(|v| v >= hd.h), || format!("s = {s}: solution {y} outside P({})", hd.h))?;
        let residual = s.apply(y).sub(&x).truncate(Fin(PRECISION));
        check(residual.is_zero(), || format!("s = {s}, x = {x}: residual {residual}"))?;
        check(val(y) == val(&x).map(|v| v - v0), || format!("s = {s}, x = {x}: v(y) = {:?}", val(y)))?;
        // uniqueness: a nonzero perturbation inside P_h changes y.s
        let z = LaurentSeries::x_pow(f, hd.h + rng.gen_range(0..8));
        check(!s.apply(&y.add(&z)).sub(&x).truncate(Fin(PRECISION)).is_zero(), || format!("s = {s}: perturbation {z} also solves"))?;
        n += 1;
    }
    Ok("200 instances".into())
}

fn random_entry(f: Field, rng: &mut ChaCha8Rng) -> TwistedPoly {
    let deg = rng.gen_range(0..=2usize);
    let coeffs = (0..=deg)
        .map(|i| {
            if i < deg && rng.gen_bool(0.4) {
                LaurentSeries::zero(f)
            } else {
                LaurentSeries::monomial(f, rng.gen_range(1..f.d()), rng.gen_range(-2..3))
            }
        })
        .collect();
    TwistedPoly::from_coeffs(f, coeffs)
}

/// ∃ȳ x̄ − ȳ.Q ∈ P_hi^m.
fn image_formula(q: &RMatrix, hi: i64) -> PPFormula {
    let f = q.field();
    let m = q.cols();
    let free: Vec<String> = (0..m).map(|j| format!("x{j}")).collect();
    let bound: Vec<String> = (0..q.rows()).map(|i| format!("y{i}")).collect();
    let atoms = (0..m)
        .map(|j| {
            let mut t = LambdaTerm::var(j, TwistedPoly::one(f));
            for i in 0..q.rows() {
                t = t.add(&LambdaTerm::var(m + i, q.get(i, j).neg()));
            }
            Atom::In(t, Fin(hi))
        })
        .collect();
    PPFormula::new(f, free, bound, atoms)
}

/// Images of X^n under each row of `q`, n ∈ [lo, hi), truncated below `hi`.
fn basis_images(q: &RMatrix, lo: i64, hi: i64) -> Vec<Vec<LaurentSeries>> {
    let f = q.field();
    let mut out = Vec::new();
    for i in 0..q.rows() {
        for n in lo..hi {
            let x = LaurentSeries::x_pow(f, n);
            out.push((0..q.cols()).map(|j| q.get(i, j).apply(&x).truncate(Fin(hi)).to_exact()).collect());
        }
    }
    out
}

fn contained(vectors: &[Vec<LaurentSeries>], q: &RMatrix, hi: i64) -> Result<bool, String> {
    if vectors.is_empty() {
        return Ok(true);
    }
    let lo = vectors.iter().flatten().filter_map(val).min().unwrap_or(0).min(0);
    let mut m = Membership::new(&image_formula(q, hi), Window { lo, hi }).map_err(|e| e.to_string())?;
    for v in vectors {
        if !m.contains(v).map_err(|e| e.to_string())? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn vddku_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (lo, hi) = (-8, 24);
    for n in 0..50 {
        let f = field([2, 3][n % 2]);
        let rows = [2usize, 3][(n / 2) % 2];
        let data: Vec<Vec<TwistedPoly>> = (0..rows).map(|_| (0..2).map(|_| random_entry(f, &mut rng)).collect()).collect();
        let q = RMatrix::from_rows(f, 2, data);
        let v = vddku(&q).map_err(|e| format!("{:?}: {e}", q.to_strings()))?;
        let d = f.d() as i64;
        let modulus = d.pow(v.level);
        let mut residues = BTreeSet::new();
        for i in 0..v.q.rows() {
            let e = v.q.get(i, 0);
            if e.is_zero() {
                continue;
            }
            check(e.degree() == v.level as i64, || format!("{:?}: degree {} at level {}", q.to_strings(), e.degree(), v.level))?;
            let lv = val(e.lead().unwrap()).unwrap();
            check(residues.insert(lv.rem_euclid(modulus)), || format!("{:?}: repeated residue {lv}", q.to_strings()))?;
        }
        let there = contained(&basis_images(&q, lo, hi), &v.q, hi)?;
        let back = contained(&basis_images(&v.q, lo, hi), &q, hi)?;
        check(there && back, || format!("{:?}: image changed ({there}, {back})", q.to_strings()))?;
    }
    Ok("50 matrices".into())
}

/// (p, formula, generators q with Σ y.q ∈ φ for every y).
const QE_FORMULAS: [(u32, &str, &[&str]); 10] = [
    (2, "E y : x = y.(t)", &["t"]),
    (2, "E y : x = y.(t - 1) /\\ x in P(0)", &["t - 1"]),
    (2, "E y : x = y.(t - 1)", &["t - 1"]),
    (2, "x in P(2)", &["1"]),
    (2, "L0(x) = 0", &["t*X"]),
    (2, "E y : x.(t*X) = y.(t - 1)", &["1"]),
    (2, "E y : x = y.(t^2)", &["t^2"]),
    (3, "E y : x = y.(t)", &["t"]),
    (3, "E y, z : x = y.(t) + z.(t*X)", &["t", "t*X"]),
    (2, "E y : x = y.(t + X) /\\ L1(x) = 0", &[]),
];

fn qe_near_zero_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut disagreements = Vec::new();
    let mut members = 0;
    for (p, text, gens) in QE_FORMULAS {
        let f = field(p);
        let phi = pp(f, text);
        let r = qe_near_zero(&phi).map_err(|e| format!("{text}: {e}"))?;
        let Fin(delta) = r.delta else { return Err(format!("{text}: delta {}", r.delta)) };
        let window = Window { lo: delta, hi: delta.max(0) + 48 };
        let mut m = Membership::new(&phi, window).map_err(|e| format!("{text}: {e}"))?;
        let gens: Vec<TwistedPoly> = gens.iter().map(|g| poly(f, g)).collect();
        let mut done = 0;
        while done < 200 {
            let x = if done % 2 == 0 || gens.is_empty() {
                let terms = rng.gen_range(1..=6);
                random_sparse(f, &mut rng, delta, delta + 20, terms)
            } else {
                let yl = delta.max(0) + 1;
                gens.iter().fold(LaurentSeries::zero(f), |acc, g| acc.add(&g.apply(&random_poly(f, &mut rng, yl, yl + 4))))
            };
            if val(&x).is_some_and(|v| v < delta) || x.support_end() > window.hi {
                continue;
            }
            let by_psi = r.psi.eval(&[x.clone()]);
            let by_oracle = m.contains(&[x.clone()]).map_err(|e| e.to_string())?;
            members += usize::from(by_oracle);
            if by_psi != by_oracle {
                disagreements.push(format!("{text}: x = {x}, psi {by_psi}, oracle {by_oracle}"));
            }
            done += 1;
        }
    }
    check(disagreements.is_empty(), || disagreements.join("; "))?;
    Ok(format!("2000 samples, {members} members"))
}

fn ball_index() -> Outcome {
    for p in [2u32, 3] {
        let f = field(p);
        for g in -4..=4i64 {
            let big = pp(f, &format!("x in P({g})"));
            let small = pp(f, &format!("x in P({})", g + 1));
            let (lo, hi) = (g - 3, g + 5);
            let db = oracle_projection_dim(&big, lo, hi, DEFAULT_SLACK).map_err(|e| e.to_string())?;
            let ds = oracle_projection_dim(&small, lo, hi, DEFAULT_SLACK).map_err(|e| e.to_string())?;
            check(db == (hi - g) as usize && db - ds == 1, || format!("p={p}, gamma={g}: dims {db}, {ds}"))?;
            let q = oracle_quotient(&big, &small, Fin(lo), Fin(hi)).map_err(|e| e.to_string())?;
            check(q == Invariant::Finite { log_d: 1 }, || format!("p={p}, gamma={g}: {q:?}"))?;
        }
    }
    Ok("index d for gamma in [-4, 4]".into())
}

fn valuation_ring_definability() -> Outcome {
    let f = field(2);
    let phi = pp(f, "E y : x.(t*X) = y.(t - 1)");
    let mut m = Membership::new(&phi, Window { lo: -12, hi: PRECISION }).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut inside = 0;
    for _ in 0..500 {
        let v = rng.gen_range(-12..12);
        let x = LaurentSeries::x_pow(f, v).add(&random_poly(f, &mut rng, v + 1, PRECISION));
        let member = m.contains(&[x.clone()]).map_err(|e| e.to_string())?;
        check(member == (v >= 0), || format!("x = {x}: oracle {member}"))?;
        inside += usize::from(member);
    }
    Ok(format!("500 samples, {inside} in P(0)"))
}

/// (p, A, B, log_d |A/(A∧B)| or None for ∞).
const SUITE: [(u32, &str, &str, Option<u32>); 27] = [
    (2, "x in P(0)", "E y : x = y.(t - 1)", Some(1)),
    (3, "x in P(0)", "E y : x = y.(t - 1)", Some(1)),
    (2, "E y : x = y.(t - 1)", "x in P(0)", None),
    (2, "x in P(-2)", "x in P(1)", Some(3)),
    (2, "x in P(1)", "x in P(0)", Some(0)),
    (3, "x in P(0)", "x in P(2)", Some(2)),
    (2, "E y : x = y.(1)", "x in P(0)", None),
    (2, "E y : x = y.(1)", "E y : x = y.(t - 1)", None),
    (2, "E y : x = y.(t - 1)", "E y : x = y.(1)", Some(0)),
    (2, "x = 0", "x in P(3)", Some(0)),
    (2, "E y : x = y.(1)", "x = 0", None),
    (2, "x in P(0)", "x = 0", None),
    (2, "E y : x = y.(t)", "x in P(0)", None),
    (2, "x in P(0)", "E y : x = y.(t)", None),
    (2, "E y : x = y.(t - 1) /\\ x in P(-3)", "x in P(0)", Some(1)),
    (2, "E y : x = y.(t - 1)", "E y : x = y.(t - 1) /\\ x in P(-3)", None),
    (2, "x in P(-3)", "E y : x = y.(t - 1)", Some(3)),
    (2, "x in P(0)", "E y : x = y.(t - 1) /\\ x in P(0)", Some(1)),
    (2, "L0(x) = 0", "x in P(0)", None),
    (2, "E y : x.(t*X) = y.(t - 1)", "x in P(0)", Some(0)),
    (2, "x in P(0)", "E y : x.(t*X) = y.(t - 1)", Some(0)),
    (2, "x in P(-1)", "E y : x.(t*X) = y.(t - 1)", Some(1)),
    (2, "E y : x = y.(t + X)", "x in P(0)", None),
    (2, "E y : x = y.(t*X)", "E y : x = y.(t)", None),
    (3, "E y : x = y.(t - 1)", "E y : x = y.(t^2 - 1)", None),
    (2, "E y : x = y.(t^2 + 1)", "E y : x = y.(t + 1)", Some(0)),
    (2, "E y : x = y.(t + 1)", "E y : x = y.(t^2 + 1)", None),
];

fn invariant_engine() -> Outcome {
    let mut stable = 0;
    for (p, a, b, expect) in SUITE {
        let f = field(p);
        let (fa, fb) = (pp(f, a), pp(f, b));
        let got = invariant(&fa, &fb).map_err(|e| format!("[{a}] / [{b}]: {e}"))?;
        let want = match expect {
            Some(j) => Invariant::Finite { log_d: j },
            None => Invariant::Infinite { witness: String::new() },
        };
        check(got.is_finite() == want.is_finite() && (!got.is_finite() || got == want), || {
            format!("[{a}] / [{b}]: got {got:?}, expected {expect:?}")
        })?;
        let est: Vec<u32> = [16, 32, 64]
            .iter()
            .map(|&w| oracle_estimate(&fa, &fb, w))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if est[0] == est[1] && est[1] == est[2] {
            stable += 1;
            check(got == Invariant::Finite { log_d: est[2] }, || format!("[{a}] / [{b}]: {got:?} but oracle {est:?}"))?;
        } else {
            check(est[0] < est[1] && est[1] < est[2] && !got.is_finite(), || format!("[{a}] / [{b}]: {got:?}, oracle {est:?}"))?;
        }
    }
    Ok(format!("{} pairs, {stable} oracle-stable", SUITE.len()))
}

fn axiom_harness() -> Outcome {
    for p in [2u32, 3] {
        let r = axiom_check(&AxiomConfig::new(field(p), 1000, 10 + p as u64));
        check(r.total_violations == 0, || format!("p={p}: {:?}", r.examples))?;
    }
    Ok("1000 samples each for p = 2, 3".into())
}

fn rohwer_configuration() -> Outcome {
    let f = field(2);
    let r = universalize(&pp(f, "E y : x = y.(t - 1)")).map_err(|e| e.to_string())?;
    let c = &r.checks;
    check(
        c.sum_is_whole
            && c.pseudo_orthogonal
            && c.small_ball_agreement
            && c.lower_inclusion == Some(true)
            && c.upper_inclusion == Some(true),
        || format!("{c:?}"),
    )?;
    let shape = "forall y : ((E z : x - y = z.(t + 1)) /\\ (E c : y - c.(t*X) in P(0))) -> y in P(1)";
    check(r.universal == shape, || format!("printed {}", r.universal))?;
    check((r.b0, r.b1) == (Fin(-1), Fin(1)) && r.gamma_c == Fin(0), || format!("balls {} {} {}", r.b0, r.b1, r.gamma_c))?;
    Ok(r.universal)
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("Artin-Schreier decomposition", Duration::from_secs(5), artin_schreier_decomposition),
        ("valuation ring meets the Artin-Schreier image in the maximal ideal", Duration::from_secs(1), valuation_ring_meets_image),
        ("tropical data of t - 1", Duration::from_millis(1), tropical_data),
        ("Hensel solver", Duration::from_secs(10), hensel_solver),
        ("vddku normalization", Duration::from_secs(30), vddku_normalization),
        ("quantifier elimination near zero", Duration::from_secs(10), qe_near_zero_agreement),
        ("ball index", Duration::from_secs(60), ball_index),
        ("valuation ring definability", Duration::from_secs(60), valuation_ring_definability),
        ("invariant engine", Duration::from_secs(60), invariant_engine),
        ("axiom harness", Duration::from_secs(30), axiom_harness),
        ("Rohwer configuration", Duration::from_secs(10), rohwer_configuration),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let line = match (&outcome, took <= *limit) {
            (Ok(detail), true) => format!("PASS {:>2} {name}: {detail} ({took:.2?} <= {limit:?})", i + 1),
            (Ok(detail), false) => format!("FAIL {:>2} {name}: {detail} but took {took:.2?} > {limit:?}", i + 1),
            (Err(e), _) => format!("FAIL {:>2} {name}: {e} ({took:.2?})", i + 1),
        };
        if !line.starts_with("PASS") {
            failed += 1;
        }
        println!("{line}");
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
