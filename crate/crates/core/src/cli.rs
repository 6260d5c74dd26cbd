//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complement::{comp_f, complement_generators};
use crate::decide::{evaluate_sentence, invariant_report, parse_sentence, universalize, Invariant};
use crate::error::{Error, Result};
use crate::hensel::{axiom_check, hensel_solve_to, AxiomConfig};
use crate::linalg::{triangulate, vddku, RMatrix};
use crate::logic::{qe_near_zero, PPFormula};
use crate::ore::{parse_series, TwistedPoly};
use crate::series::Field;
use crate::tropical::{hensel_pair, jump_set, trop_act, Fin};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Global {
    /// Characteristic of the residue field.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// The residue field has d = p^k elements.
    #[arg(long, global = true, default_value_t = 1)]
    k: u32,
    /// Working precision in coefficients.
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(i64).range(16..))]
    precision: i64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

/// Twisted polynomials acting on Laurent series over finite fields.
#[derive(Parser, Debug)]
#[command(name = "rmodule", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jump values of the tropical action of q and, for separable q, the radii of the balls it maps bijectively.
    Jump {
        #[arg(long)]
        q: String,
    },
    /// Tropical action γ ↦ γ·q, its jump values, and the Hensel radii.
    Tropical {
        #[arg(long)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<i64>,
    },
    /// Hensel radii h(q), hens(q): q maps P_h bijectively onto P_hens.
    HenselData {
        #[arg(long)]
        q: String,
    },
    /// Unique solution y ∈ P_h(s) of y.s = x for x ∈ P_hens(s) (Hensel's lemma for separable twisted polynomials).
    HenselSolve {
        #[arg(long)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Lower-triangular normal form P·A·Q of a matrix over R (right Euclidean elimination).
    Triangulate {
        /// JSON array of rows of R-elements, e.g. [["t", "X"], ["1", "t"]].
        #[arg(long)]
        matrix: String,
    },
    /// Normal form of a matrix whose first column has equal degrees and leading valuations distinct modulo d^level.
    NormalizeVddku {
        #[arg(long)]
        matrix: String,
    },
    /// Pseudo-complement of Σ K.qᵢ: K = image + complement + ball, with image and complement pseudo-orthogonal.
    PseudoComplement {
        /// Comma-separated generators.
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<String>,
    },
    /// Quantifier elimination near zero: a ball P_δ and λ-equations ψ with φ ∧ P_δ ⟺ ψ ∧ P_δ.
    QeZero {
        #[arg(long)]
        formula: String,
    },
    /// Baur–Monk invariant |A/(A∧B)| of two p.p. formulas, via m-immediacy, near-zero elimination and a finite count.
    Invariant {
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        /// Include α, γ and the computation trace.
        #[arg(long)]
        explain: bool,
    },
    /// Truth of a boolean combination of invariant sentences |[A] / [B]| op m (decidability of the theory).
    Decide {
        #[arg(long)]
        sentence: String,
    },
    /// Universal definition of a p.p. set from a Rohwer configuration (p.p. sets are universally definable).
    Universalize {
        #[arg(long = "A")]
        a: String,
    },
    /// Randomized check of the ball, ultrametric, regularity, λ-regularity and henselianity axioms on 𝔽_d((X)).
    AxiomCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

/// Run with process arguments; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok((value, text)) => {
            let _ = match cli.global.output {
                Output::Json => writeln!(out, "{value}"),
                Output::Text => writeln!(out, "{text}"),
            };
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"error": e.kind(), "message": e.to_string()}));
            1
        }
    }
}

fn poly(f: Field, s: &str) -> Result<TwistedPoly> {
    TwistedPoly::parse(f, s)
}

fn tropical_json(q: &TwistedPoly) -> Result<Value> {
    let jumps = jump_set(q);
    let mut v = json!({ "jumps": jumps });
    if q.is_separable() {
        let hd = hensel_pair(q)?;
        v["h"] = json!(hd.h);
        v["hens"] = json!(hd.hens);
    }
    Ok(v)
}

fn execute(cli: &Cli) -> Result<(Value, String)> {
    let g = &cli.global;
    let f = Field::new(g.p, g.k)?;
    Ok(match &cli.command {
        Command::Jump { q } => {
            let q = poly(f, q)?;
            let v = tropical_json(&q)?;
            let text = format!("jumps {:?}, h {}, hens {}", jump_set(&q), v["h"], v["hens"]);
            (v, text)
        }
        Command::Tropical { q, gamma } => {
            let q = poly(f, q)?;
            let mut v = tropical_json(&q)?;
            let mut text = format!("jumps {:?}", jump_set(&q));
            if let Some(gm) = gamma {
                let val = trop_act(Fin(*gm), &q);
                v["gamma"] = json!(gm);
                v["value"] = json!(val);
                text.push_str(&format!(", {gm}.q = {val}"));
            }
            (v, text)
        }
        Command::HenselData { q } => {
            let q = poly(f, q)?;
            let hd = hensel_pair(&q)?;
            let v = json!({"jumps": jump_set(&q), "h": hd.h, "hens": hd.hens, "shift": hd.shift, "unbounded": hd.unbounded});
            (v, format!("h {}, hens {}{}", hd.h, hd.hens, if hd.unbounded { " (every ball)" } else { "" }))
        }
        Command::HenselSolve { s, x } => {
            let s = poly(f, s)?;
            let x = parse_series(f, x)?;
            let sol = hensel_solve_to(&s, &x, g.precision)?;
            let val = sol.y.leading().map(|(n, _)| n);
            let v = json!({"y": sol.y.to_string(), "valuation": val, "zero_input": sol.zero_input, "iterations": sol.iterations});
            (v, sol.y.to_string())
        }
        Command::Triangulate { matrix } => {
            let a = RMatrix::parse_json(f, matrix)?;
            let t = triangulate(&a)?;
            let v = json!({"t": t.t.to_strings(), "p": t.p.to_strings(), "q": t.q.to_strings(), "q_inv": t.q_inv.to_strings(), "rank": t.rank, "prec": t.prec});
            (v.clone(), format!("T = {}\nrank {}", json!(t.t.to_strings()), t.rank))
        }
        Command::NormalizeVddku { matrix } => {
            let a = RMatrix::parse_json(f, matrix)?;
            let n = vddku(&a)?;
            let v = json!({"q": n.q.to_strings(), "t": n.t.to_strings(), "level": n.level, "lead_vals": n.lead_vals});
            (v, format!("Q' = {}\nlevel {}", json!(n.q.to_strings()), n.level))
        }
        Command::PseudoComplement { gens } => {
            let gs: Vec<TwistedPoly> = gens.iter().map(|s| poly(f, s.trim())).collect::<Result<_>>()?;
            let data = comp_f(f, &gs)?;
            let comp: Vec<String> = complement_generators(f, &data).iter().map(|q| q.to_string()).collect();
            let v = json!({
                "level": data.level,
                "complement_indices": data.complement_indices,
                "gamma": data.gamma,
                "threshold": data.threshold,
                "complement_generators": comp,
            });
            (v, format!("complement {} at level {}, gamma {}", comp.join(", "), data.level, data.gamma))
        }
        Command::QeZero { formula } => {
            let phi = PPFormula::parse(f, formula)?;
            let r = qe_near_zero(&phi)?;
            let v = json!({"delta": r.delta, "psi": r.psi.to_string()});
            (v, format!("in P({}): {}\n{}", r.delta, r.psi, r.trace.join("\n")))
        }
        Command::Invariant { a, b, explain } => {
            let fa = PPFormula::parse(f, a)?;
            let fb = PPFormula::parse(f, b)?;
            let r = invariant_report(&fa, &fb)?;
            let v = if *explain { serde_json::to_value(&r).map_err(json_err)? } else { serde_json::to_value(&r.invariant).map_err(json_err)? };
            let text = match &r.invariant {
                Invariant::Finite { log_d } => format!("{}^{log_d}", f.d()),
                Invariant::Infinite { witness } => format!("infinite ({witness})"),
            };
            (v, text)
        }
        Command::Decide { sentence } => {
            let s = parse_sentence(f, sentence)?;
            let b = evaluate_sentence(&s)?;
            (json!(b), b.to_string())
        }
        Command::Universalize { a } => {
            let phi = PPFormula::parse(f, a)?;
            let r = universalize(&phi)?;
            (serde_json::to_value(&r).map_err(json_err)?, r.universal.clone())
        }
        Command::AxiomCheck { samples } => {
            let mut cfg = AxiomConfig::new(f, *samples, g.seed);
            cfg.precision = g.precision;
            let r = axiom_check(&cfg);
            let text = r
                .tallies
                .iter()
                .map(|t| format!("{}: {}/{} violations", t.axiom, t.violations, t.trials))
                .collect::<Vec<_>>()
                .join("\n");
            (serde_json::to_value(&r).map_err(json_err)?, text)
        }
    })
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Unsupported(e.to_string())
}
