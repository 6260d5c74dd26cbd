//! Solving y.s = x on Hensel balls, and a randomized check of the valued-module axioms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ore::TwistedPoly;
use crate::series::{random_sparse, Field, LaurentSeries, DEFAULT_PRECISION};
use crate::tropical::{ceil_div, floor_div, hensel_pair, jump_set, trop_act, Fin, Inf, Trop};

#[derive(Clone, Debug, Serialize)]
pub struct HenselSolution {
    #[serde(serialize_with = "ser_series")]
    pub y: LaurentSeries,
    /// x = 0: y = 0 is returned without search.
    pub zero_input: bool,
    pub iterations: usize,
}

fn ser_series<S: serde::Serializer>(x: &LaurentSeries, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// The y ∈ P_h(s) with y.s = x, for x ∈ P_hens(s); exact inputs are solved modulo X^precision.
pub fn hensel_solve(s: &TwistedPoly, x: &LaurentSeries) -> Result<HenselSolution> {
    hensel_solve_to(s, x, DEFAULT_PRECISION)
}

pub fn hensel_solve_to(s: &TwistedPoly, x: &LaurentSeries, precision: i64) -> Result<HenselSolution> {
    solve_with(s, x, precision, &|y: &LaurentSeries, r: &TwistedPoly| r.apply(y))
}

fn solve_with(
    s: &TwistedPoly,
    x: &LaurentSeries,
    precision: i64,
    act: &dyn Fn(&LaurentSeries, &TwistedPoly) -> LaurentSeries,
) -> Result<HenselSolution> {
    let data = hensel_pair(s)?;
    let f = s.field();
    let cap = x.prec().fin().unwrap_or(precision);
    let x = x.truncate(Fin(cap));
    let a0 = s.coeff(0);
    let v0 = a0.valuation()?.fin().ok_or(Error::DivisionByZero)?;
    let ycap = cap - v0;
    let Some((vx, _)) = x.leading() else {
        let y = if x.is_exact() { LaurentSeries::zero(f) } else { LaurentSeries::known_zero(f, ycap) };
        return Ok(HenselSolution { y, zero_input: true, iterations: 0 });
    };
    if !data.unbounded && vx < data.hens {
        return Err(Error::OutsideBall(format!("v(x) = {vx} is below hens(s) = {}", data.hens)));
    }
    let tail = s.sub(&TwistedPoly::constant(a0.clone()));
    let max_iter = (ycap - (vx - v0)).max(0) as usize + 8;
    let mut y = LaurentSeries::known_zero(f, ycap);
    for it in 1..=max_iter {
        let rhs = x.sub(&act(&y, &tail)).truncate(Fin(cap));
        let next = rhs.div(&a0, ycap)?.truncate(Fin(ycap));
        let done = next.sub(&y).truncate(Fin(ycap)).is_zero() && it > 1;
        y = next;
        if done {
            return Ok(HenselSolution { y, zero_input: false, iterations: it });
        }
    }
    Err(Error::InsufficientPrecision(format!("no fixed point modulo X^{ycap} after {max_iter} steps")))
}

/// Parameters of the randomized axiom check.
#[derive(Clone, Copy, Debug)]
pub struct AxiomConfig {
    pub field: Field,
    pub precision: i64,
    pub samples: usize,
    pub seed: u64,
    /// Test fixture: drop the constant term of every action.
    pub corrupt_action: bool,
}

impl AxiomConfig {
    pub fn new(field: Field, samples: usize, seed: u64) -> Self {
        AxiomConfig { field, precision: DEFAULT_PRECISION, samples, seed, corrupt_action: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomTally {
    pub axiom: &'static str,
    pub trials: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub seed: u64,
    pub tallies: Vec<AxiomTally>,
    pub total_violations: usize,
    /// The first violations found, with their inputs.
    pub examples: Vec<AxiomViolation>,
}

const AXIOMS: [&str; 9] = [
    "balls",
    "valued-ultrametric",
    "valued-zero",
    "valued-regular",
    "ultrametric",
    "regularity",
    "lambda-regularity",
    "henselianity-existence",
    "henselianity-uniqueness",
];
const MAX_EXAMPLES: usize = 20;

struct Tally {
    counts: Vec<(usize, usize)>,
    examples: Vec<AxiomViolation>,
}

impl Tally {
    fn record(&mut self, axiom: usize, ok: bool, detail: impl FnOnce() -> String) {
        self.counts[axiom].0 += 1;
        if !ok {
            self.counts[axiom].1 += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(AxiomViolation { axiom: AXIOMS[axiom], detail: detail() });
            }
        }
    }
}

fn val(x: &LaurentSeries) -> Trop {
    x.leading().map_or(Inf, |(n, _)| Fin(n))
}

fn random_r(f: Field, rng: &mut ChaCha8Rng, separable: bool) -> TwistedPoly {
    let deg = rng.gen_range(0..=2usize);
    let coeffs: Vec<LaurentSeries> = (0..=deg)
        .map(|i| {
            let nonzero = (i == 0 && separable) || i == deg || rng.gen_bool(0.6);
            if !nonzero {
                return LaurentSeries::zero(f);
            }
            let terms = rng.gen_range(1..=3);
            let lo = rng.gen_range(-3..3);
            let mut c = random_sparse(f, rng, lo, lo + 4, terms);
            if c.is_zero() {
                c = LaurentSeries::x_pow(f, lo);
            }
            c
        })
        .collect();
    TwistedPoly::from_coeffs(f, coeffs)
}

fn random_x(f: Field, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> LaurentSeries {
    let terms = rng.gen_range(1..=5);
    random_sparse(f, rng, lo, hi, terms)
}

fn in_ball(x: &LaurentSeries, g: Trop) -> bool {
    val(x) >= g
}

/// Randomized verification of the ball, ultrametric, regularity, λ-regularity and Hensel axioms.
pub fn axiom_check(config: &AxiomConfig) -> AxiomReport {
    let f = config.field;
    let d = f.d() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let corrupt = config.corrupt_action;
    let act = move |x: &LaurentSeries, r: &TwistedPoly| {
        if corrupt && r.degree() > 0 {
            r.sub(&TwistedPoly::constant(r.coeff(0))).apply(x)
        } else {
            r.apply(x)
        }
    };
    let mut t = Tally { counts: vec![(0, 0); AXIOMS.len()], examples: vec![] };
    for _ in 0..config.samples {
        let x = random_x(f, &mut rng, -8, 8);
        let y = random_x(f, &mut rng, -8, 8);
        let r = random_r(f, &mut rng, false);
        let g: i64 = rng.gen_range(-10..10);

        // balls: decreasing chain, proper inclusions, subgroups
        let xg = LaurentSeries::x_pow(f, g);
        let chain = (!in_ball(&x, Fin(g)) || in_ball(&x, Fin(g - 1))) && in_ball(&xg, Fin(g)) && !in_ball(&xg, Fin(g + 1));
        let sub = !(in_ball(&x, Fin(g)) && in_ball(&y, Fin(g))) || in_ball(&x.sub(&y), Fin(g));
        t.record(0, chain && sub, || format!("x = {x}, y = {y}, gamma = {g}"));

        let vx = val(&x);
        let vy = val(&y);
        t.record(1, val(&x.add(&y)) >= vx.min(vy) && val(&x.sub(&y)) >= vx.min(vy), || format!("x = {x}, y = {y}"));
        t.record(2, (vx == Inf) == x.is_zero(), || format!("x = {x}"));
        let xr = act(&x, &r);
        let jumps = jump_set(&r);
        let regular = match vx {
            Fin(v) if !jumps.contains(&v) => val(&xr) == trop_act(vx, &r),
            _ => true,
        };
        t.record(3, regular, || format!("x = {x}, r = {r}"));

        // ultrametric: x ∈ P_γ, y ∈ P_δ ⟹ x.r + y ∈ P_min(γ·r, δ)
        let ga = vx.fin().map_or(g, |v| v - rng.gen_range(0..3));
        let de = vy.fin().map_or(g, |v| v - rng.gen_range(0..3));
        let bound = trop_act(Fin(ga), &r).min(Fin(de));
        t.record(4, in_ball(&xr.add(&y), bound), || format!("x = {x}, y = {y}, r = {r}, gamma = {ga}, delta = {de}"));

        // regularity: forward for all γ, reverse when neither γ nor v(x) is a jump
        let fwd = !in_ball(&x, Fin(g)) || in_ball(&xr, trop_act(Fin(g), &r));
        let off_jumps = !r.is_zero() && !jumps.contains(&g) && !matches!(vx, Fin(v) if jumps.contains(&v));
        let rev = !off_jumps || !in_ball(&xr, trop_act(Fin(g), &r)) || in_ball(&x, Fin(g));
        t.record(5, fwd && rev, || format!("x = {x}, r = {r}, gamma = {g}"));

        // λ-regularity
        let lam_g = Fin(floor_div(g, d));
        let lams: Vec<LaurentSeries> = (0..d).map(|i| x.lambda(1, i)).collect();
        let fwd = !in_ball(&x, Fin(g)) || lams.iter().all(|l| in_ball(l, lam_g));
        let rev = !lams.iter().enumerate().all(|(i, l)| in_ball(l, Fin(ceil_div(g - i as i64, d)))) || in_ball(&x, Fin(g));
        t.record(6, fwd && rev, || format!("x = {x}, gamma = {g}"));

        // henselianity
        let s = random_r(f, &mut rng, true);
        if let Ok(hd) = hensel_pair(&s) {
            let (h, hens) = if hd.unbounded { (g, g + s.coeff(0).leading().unwrap().0) } else { (hd.h, hd.hens) };
            let target = random_x(f, &mut rng, hens, hens + 12);
            if !target.is_zero() {
                let prec = config.precision;
                let sol = solve_with(&s, &target, prec, &act);
                let ok = match &sol {
                    Ok(sol) => {
                        in_ball(&sol.y, Fin(h))
                            && act(&sol.y, &s).sub(&target).truncate(Fin(prec)).is_zero()
                    }
                    Err(_) => false,
                };
                t.record(7, ok, || format!("s = {s}, x = {target}, result = {:?}", sol.as_ref().map(|s| s.y.to_string())));
                let z = random_x(f, &mut rng, h, h + 12);
                let zs = act(&z, &s);
                t.record(8, z.is_zero() || !zs.truncate(Fin(prec)).is_zero(), || format!("s = {s}, z = {z} maps to 0"));
            }
        }
    }
    let tallies: Vec<AxiomTally> = AXIOMS
        .iter()
        .zip(&t.counts)
        .map(|(a, &(trials, violations))| AxiomTally { axiom: a, trials, violations })
        .collect();
    let total_violations = tallies.iter().map(|t| t.violations).sum();
    AxiomReport { samples: config.samples, seed: config.seed, tallies, total_violations, examples: t.examples }
}
