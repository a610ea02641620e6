//! The `polypell` command-line front end.
//!
//! Every command produces an [`OutputEnvelope`], rendered either as plain
//! text or (with `--json`) as a JSON object whose numbers are all decimal
//! strings. Exit codes: 0 success (possibly with empty results), 1 certified
//! failure of the congruence conditions, 2 usage or input error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::congruence::{group_info, CongruenceGroupInfo, SatisfyingPower};
use crate::error::{Error, Result};
use crate::gonal::{
    solve_multiple, solve_triangular_ratio, transform_for, GonalPair, SolveMode,
    TriangularRatioPair, DEFAULT_MAX_POWER, DEFAULT_SEARCH_BOUND,
};
use crate::pell::{fundamental_solution, negative_pell_fundamental, sqrt_approx};
use crate::simultaneous::{
    constrained_integer_points, curve_params, solve_simultaneous, ConstrainedPoint,
    SimultaneousTriple, DEFAULT_V_BOUND,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CERTIFIED_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "polypell",
    version,
    about = "Pell equations, polygonal multiples and simultaneous polygonal triples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit the JSON envelope instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for brute-force scans (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental solution of x^2 - m y^2 = 1.
    Pell {
        m: u64,
        /// Also print g^N.
        #[arg(long, value_name = "N")]
        power: Option<u64>,
        /// Print x_n/y_n as an approximation of sqrt(m) (n = --power, default 1).
        #[arg(long)]
        approx: bool,
        /// Print the minimal solution of x^2 - m y^2 = -1, or "none".
        #[arg(long)]
        negative: bool,
    },
    /// Pairs with P(ell, r) = m P(ell, s).
    Gonal {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Theorem)]
        mode: ModeArg,
        /// Theorem mode: highest Pell power. Search mode: largest s.
        #[arg(long)]
        bound: Option<u64>,
        /// Only report q, g_m(q) and the satisfying power.
        #[arg(long)]
        check_only: bool,
    },
    /// Triangular pairs with a * T(r) = b * T(s).
    Ratio {
        a: u64,
        b: u64,
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// Highest Pell power composed with the base solution.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Triples with P = m P' = n P''.
    Simul {
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        /// Largest v = a s - b scanned on the curve.
        #[arg(long)]
        bound: Option<u64>,
        /// Also print A, B and the constrained integer points.
        #[arg(long)]
        curve: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Theorem,
    Search,
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputEnvelope {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub bounds: BTreeMap<String, String>,
    /// True when `results` lists every solution within `bounds` (or the
    /// first `count` of them). Unit constructions are never exhaustive.
    pub complete_up_to_bound: bool,
}

/// An envelope plus its text rendering and exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub envelope: OutputEnvelope,
    pub text: String,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.envelope).expect("envelope serializes");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

fn map<const N: usize>(entries: [(&str, String); N]) -> BTreeMap<String, String> {
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match *cmd {
        Command::Pell {
            m,
            power,
            approx,
            negative,
        } => cmd_pell(m, power, approx, negative),
        Command::Gonal {
            ell,
            m,
            count,
            mode,
            bound,
            check_only,
        } => cmd_gonal(ell, m, count, mode, bound, check_only),
        Command::Ratio { a, b, count, bound } => cmd_ratio(a, b, count, bound),
        Command::Simul {
            ell,
            m,
            n,
            bound,
            curve,
        } => cmd_simul(ell, m, n, bound, curve),
    }
}

fn pair_json(x: &BigInt, y: &BigInt) -> Value {
    json!({ "x": s(x), "y": s(y) })
}

pub fn cmd_pell(m: u64, power: Option<u64>, approx: bool, negative: bool) -> Result<Outcome> {
    let g = fundamental_solution(m)?;
    let mut text = format!("m = {m}\nx = {}\ny = {}\n", g.x(), g.y());
    let mut results = json!({ "m": s(m), "fundamental": pair_json(g.x(), g.y()) });
    let mut inputs = map([("m", s(m))]);

    if let Some(n) = power {
        let p = g.pow(n);
        writeln!(text, "power {n}: x = {} y = {}", p.x(), p.y()).unwrap();
        results["power"] = json!({ "n": s(n), "x": s(p.x()), "y": s(p.y()) });
        inputs.insert("power".into(), s(n));
    }
    if approx {
        let n = power.unwrap_or(1).max(1);
        let r = sqrt_approx(m, n)?;
        writeln!(text, "approx {n}: {}/{}", r.numer(), r.denom()).unwrap();
        results["approx"] = json!({
            "n": s(n),
            "numerator": s(r.numer()),
            "denominator": s(r.denom()),
        });
        inputs.insert("approx".into(), s(true));
    }
    if negative {
        match negative_pell_fundamental(m)? {
            Some(neg) => {
                writeln!(text, "negative: x = {} y = {}", neg.x(), neg.y()).unwrap();
                results["negative"] = pair_json(neg.x(), neg.y());
            }
            None => {
                text.push_str("negative: none\n");
                results["negative"] = Value::Null;
            }
        }
        inputs.insert("negative".into(), s(true));
    }
    Ok(Outcome {
        envelope: OutputEnvelope {
            command: "pell".into(),
            inputs,
            results,
            bounds: BTreeMap::new(),
            complete_up_to_bound: true,
        },
        text,
        exit_code: EXIT_OK,
    })
}

fn satisfying_json(info: &CongruenceGroupInfo, sat: Option<&SatisfyingPower>) -> Value {
    json!({
        "q": s(info.q),
        "order": s(info.order),
        "satisfying": sat.map(|p| json!({
            "exponent": s(p.exponent),
            "variant": s(p.variant),
            "class": { "x": s(p.class.xr), "y": s(p.class.yr) },
        })),
    })
}

pub fn gonal_pair_json(p: &GonalPair) -> Value {
    json!({
        "r": s(&p.r),
        "s": s(&p.s),
        "value_big": s(&p.value_big),
        "value_small": s(&p.value_small),
    })
}

pub fn cmd_gonal(
    ell: u64,
    m: u64,
    count: usize,
    mode: ModeArg,
    bound: Option<u64>,
    check_only: bool,
) -> Result<Outcome> {
    let t = transform_for(ell, m)?;
    let info = group_info(m, t.q)?;
    let sat = crate::congruence::first_satisfying(&info);
    let mut inputs = map([("ell", s(ell)), ("m", s(m))]);

    let mut text = format!("ell = {ell}, m = {m}, q = {}, c = {}\n", t.q, t.c);
    let condition_line = |text: &mut String| {
        match &sat {
        Some(p) => writeln!(
            text,
            "g_m(q) = {}\nsatisfying power: n = {} ({})",
            info.order, p.exponent, p.variant
        )
        .unwrap(),
        None => writeln!(
            text,
            "g_m(q) = {}\nconditions not satisfiable: no power of the fundamental solution meets either congruence condition",
            info.order
        )
        .unwrap(),
    }
    };

    if check_only {
        inputs.insert("check_only".into(), s(true));
        condition_line(&mut text);
        return Ok(Outcome {
            envelope: OutputEnvelope {
                command: "gonal".into(),
                inputs,
                results: satisfying_json(&info, sat.as_ref()),
                bounds: BTreeMap::new(),
                complete_up_to_bound: true,
            },
            text,
            exit_code: if sat.is_some() {
                EXIT_OK
            } else {
                EXIT_CERTIFIED_NEGATIVE
            },
        });
    }

    inputs.insert("count".into(), s(count));
    let (solve_mode, bounds, complete) = match mode {
        ModeArg::Theorem => {
            let max_power = bound.unwrap_or(DEFAULT_MAX_POWER);
            inputs.insert("mode".into(), "theorem".into());
            (
                SolveMode::Theorem { max_power },
                map([("max_power", s(max_power)), ("count", s(count))]),
                false,
            )
        }
        ModeArg::Search => {
            let s_bound = bound.unwrap_or(DEFAULT_SEARCH_BOUND);
            inputs.insert("mode".into(), "search".into());
            (
                SolveMode::Search { s_bound },
                map([("s_max", s(s_bound)), ("count", s(count))]),
                true,
            )
        }
    };

    let pairs = match solve_multiple(ell, m, count, solve_mode) {
        Err(Error::NoTheoremSolutions { .. }) => {
            condition_line(&mut text);
            let mut results = satisfying_json(&info, None);
            results["status"] = "conditions not satisfiable".into();
            return Ok(Outcome {
                envelope: OutputEnvelope {
                    command: "gonal".into(),
                    inputs,
                    results,
                    bounds,
                    complete_up_to_bound: false,
                },
                text,
                exit_code: EXIT_CERTIFIED_NEGATIVE,
            });
        }
        other => other?,
    };

    for p in &pairs {
        writeln!(
            text,
            "r = {} s = {}: {} = {} * {}",
            p.r, p.s, p.value_big, m, p.value_small
        )
        .unwrap();
    }
    if pairs.is_empty() {
        text.push_str("no pairs within bound\n");
    }
    Ok(Outcome {
        envelope: OutputEnvelope {
            command: "gonal".into(),
            inputs,
            results: json!({
                "q": s(t.q),
                "c": s(t.c),
                "pairs": pairs.iter().map(gonal_pair_json).collect::<Vec<_>>(),
            }),
            bounds,
            complete_up_to_bound: complete,
        },
        text,
        exit_code: EXIT_OK,
    })
}

pub fn ratio_pair_json(p: &TriangularRatioPair) -> Value {
    json!({
        "r": s(&p.r),
        "s": s(&p.s),
        "delta": s(&p.delta),
        "delta_prime": s(&p.delta_prime),
    })
}

pub fn cmd_ratio(a: u64, b: u64, count: usize, bound: Option<u64>) -> Result<Outcome> {
    let max_power = bound.unwrap_or(DEFAULT_MAX_POWER);
    let pairs = solve_triangular_ratio(a, b, count, max_power)?;
    let mut text = format!("{a} * T(r) = {b} * T(s)\n");
    for p in &pairs {
        writeln!(
            text,
            "r = {} s = {}: ({}, {})",
            p.r, p.s, p.delta, p.delta_prime
        )
        .unwrap();
    }
    Ok(Outcome {
        envelope: OutputEnvelope {
            command: "ratio".into(),
            inputs: map([("a", s(a)), ("b", s(b)), ("count", s(count))]),
            results: json!({ "pairs": pairs.iter().map(ratio_pair_json).collect::<Vec<_>>() }),
            bounds: map([("max_power", s(max_power)), ("count", s(count))]),
            complete_up_to_bound: false,
        },
        text,
        exit_code: EXIT_OK,
    })
}

pub fn triple_json(t: &SimultaneousTriple) -> Value {
    json!({
        "r": s(&t.r),
        "s": s(&t.s),
        "t": s(&t.t),
        "p": s(&t.p),
        "p_prime": s(&t.p_prime),
        "p_double_prime": s(&t.p_double_prime),
    })
}

fn point_json(p: &ConstrainedPoint) -> Value {
    json!({
        "x": s(&p.x),
        "y": s(&p.y),
        "v": s(p.v),
        "witness": p.witness.as_ref().map(|w| json!({
            "u": s(&w.u), "v": s(&w.v), "w": s(&w.w),
        })),
    })
}

pub fn cmd_simul(ell: u64, m: u64, n: u64, bound: Option<u64>, curve: bool) -> Result<Outcome> {
    let v_bound = bound.unwrap_or(DEFAULT_V_BOUND);
    let spec = curve_params(ell, m, n)?;
    let triples = solve_simultaneous(ell, m, n, v_bound)?;
    let mut text = format!("ell = {ell}, P = {m} P' = {n} P''\n");
    for t in &triples {
        writeln!(
            text,
            "r = {} s = {} t = {}: P = {} P' = {} P'' = {}",
            t.r, t.s, t.t, t.p, t.p_prime, t.p_double_prime
        )
        .unwrap();
    }
    if triples.is_empty() {
        text.push_str("no triples within bound\n");
    }
    let mut results = json!({ "triples": triples.iter().map(triple_json).collect::<Vec<_>>() });
    let mut inputs = map([("ell", s(ell)), ("m", s(m)), ("n", s(n))]);
    if curve {
        inputs.insert("curve".into(), s(true));
        let points = constrained_integer_points(&spec, v_bound);
        writeln!(
            text,
            "curve Y^2 = X(X - A)(X - B) with A = {} B = {}",
            spec.big_a, spec.big_b
        )
        .unwrap();
        for p in &points {
            write!(text, "point ({}, {}) v = {}", p.x, p.y, p.v).unwrap();
            match &p.witness {
                Some(w) => writeln!(text, " witness (u, v, w) = ({}, {}, {})", w.u, w.v, w.w),
                None => writeln!(text, " no witness"),
            }
            .unwrap();
        }
        results["curve"] = json!({
            "a": s(spec.a),
            "b": s(spec.b),
            "A": s(&spec.big_a),
            "B": s(&spec.big_b),
            "points": points.iter().map(point_json).collect::<Vec<_>>(),
        });
    }
    Ok(Outcome {
        envelope: OutputEnvelope {
            command: "simul".into(),
            inputs,
            results,
            bounds: map([("v_max", s(v_bound))]),
            complete_up_to_bound: true,
        },
        text,
        exit_code: EXIT_OK,
    })
}
