//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; run
//! with `cargo test --test acceptance -- --nocapture` to see them.
//!
//! A criterion listed in [`KNOWN_FALSE`] states a claim that is false as
//! written. It still prints `FAIL` together with its counterexample, and the
//! harness asserts the counterexample instead of the claim.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use polypell::arith::is_square_u64;
use polypell::congruence::{
    check_x_minus_y_condition, check_xy_condition, find_satisfying_power, group_info,
};
use polypell::gonal::{
    enumerate_multiples_oracle, solve_multiple, theorem_pairs_up_to, transform_for, SolveMode,
};
use polypell::pell::{fundamental_solution, PellSolution, QuadraticInteger};
use polypell::simultaneous::{
    brute_force_simultaneous, constrained_integer_points, curve_params, solve_simultaneous,
};
use polypell::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Check);

const KNOWN_FALSE: &[&str] = &["11c"];

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn xy(s: &PellSolution) -> (BigInt, BigInt) {
    (s.x().clone(), s.y().clone())
}

fn quiet_config() -> Config {
    Config {
        failure_persistence: None,
        ..Config::with_cases(1000)
    }
}

fn non_squares(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|m| !is_square_u64(*m))
}

fn c1_fundamental_solutions() -> Check {
    let rows: [(u64, i64, i64); 17] = [
        (2, 3, 2),
        (3, 2, 1),
        (5, 9, 4),
        (6, 5, 2),
        (7, 8, 3),
        (8, 3, 1),
        (10, 19, 6),
        (11, 10, 3),
        (12, 7, 2),
        (13, 649, 180),
        (30, 11, 2),
        (31, 1520, 273),
        (46, 24335, 3588),
        (47, 48, 7),
        (94, 2143295, 221064),
        (95, 39, 4),
        (63, 8, 1),
    ];
    for (m, x, y) in rows {
        let g = fundamental_solution(m).map_err(|e| e.to_string())?;
        ensure(xy(&g) == (big(x), big(y)), format!("m = {m}: got {g}"))?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn c2_sixty_one() -> Check {
    let start = Instant::now();
    let g = fundamental_solution(61).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(
        xy(&g) == (big(1766319049), big(226153980)),
        format!("got {g}"),
    )?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("{elapsed:?}"))
}

fn c3_powers() -> Check {
    let g = fundamental_solution(2).map_err(|e| e.to_string())?;
    for (n, x, y) in [(2u64, 17, 12), (3, 99, 70), (5, 3363, 2378)] {
        let p = g.pow(n);
        ensure(xy(&p) == (big(x), big(y)), format!("g^{n} = {p}"))?;
    }
    Ok("g^2, g^3, g^5".into())
}

fn c4_conditions() -> Check {
    let q = transform_for(5, 2).map_err(|e| e.to_string())?.q;
    ensure(q == 6, format!("q = {q}"))?;
    let sol = |m: u64, x: i64, y: i64| PellSolution::new(m, x, y).map_err(|e| e.to_string());
    let both = |s: &PellSolution| -> std::result::Result<(bool, bool), String> {
        Ok((
            check_xy_condition(s, q).map_err(|e| e.to_string())?,
            check_x_minus_y_condition(s, q).map_err(|e| e.to_string())?,
        ))
    };
    ensure(
        both(&sol(2, 3, 2)?)? == (false, false),
        "(3,2) should fail both",
    )?;
    ensure(
        both(&sol(2, 17, 12)?)?.0,
        "(17,12) should satisfy x+my = x+y = -1",
    )?;
    ensure(
        both(&sol(2, 99, 70)?)?.1,
        "(99,70) should satisfy my-x = x-y = -1",
    )?;
    ensure(
        both(&sol(12, 7, 2)?)?.1,
        "(7,2), m = 12 should satisfy my-x = x-y = -1",
    )?;
    Ok("q = 6".into())
}

fn c5_certified_failure() -> Check {
    let order = group_info(2, 4).map_err(|e| e.to_string())?.order;
    ensure(order == 2, format!("g_2(4) = {order}"))?;
    match solve_multiple(6, 2, 3, SolveMode::Theorem { max_power: 64 }) {
        Err(Error::NoTheoremSolutions { q: 4, .. }) => Ok("g_2(4) = 2, certified".into()),
        other => Err(format!("expected certified failure, got {other:?}")),
    }
}

fn c6_hexagonal_oracle() -> Check {
    let start = Instant::now();
    let found = enumerate_multiples_oracle(6, 2, 1_000_000);
    ensure(found.is_empty(), format!("found {:?}", found.first()))?;
    Ok(format!("r <= 10^6 in {:?}", start.elapsed()))
}

fn c7_example_lists() -> Check {
    let cases: [(u64, &[u64], &[u64]); 2] = [
        (6, &[3, 6, 7, 8, 11], &[2, 5, 10, 12, 13]),
        (8, &[2, 3, 5, 6, 7, 8, 12], &[10, 11, 13]),
    ];
    for (ell, yes, no) in cases {
        let q = transform_for(ell, 2).map_err(|e| e.to_string())?.q;
        for &m in yes.iter().chain(no) {
            let ok = find_satisfying_power(m, q)
                .map_err(|e| e.to_string())?
                .is_some();
            ensure(
                ok == yes.contains(&m),
                format!("ell = {ell}, m = {m}: satisfiable = {ok}"),
            )?;
        }
    }
    Ok("ell = 6, 8".into())
}

fn c8_pentagonal() -> Check {
    let first =
        solve_multiple(5, 2, 1, SolveMode::Theorem { max_power: 64 }).map_err(|e| e.to_string())?;
    let p = first.first().ok_or("no pair")?;
    ensure(
        (
            p.r.clone(),
            p.s.clone(),
            p.value_big.clone(),
            p.value_small.clone(),
        ) == (big(7), big(5), big(70), big(35)),
        format!("first pair r = {} s = {}", p.r, p.s),
    )?;
    let theorem: Vec<_> = theorem_pairs_up_to(5, 2, &big(10_000), 64)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|p| (p.r, p.s))
        .collect();
    let oracle: Vec<_> = enumerate_multiples_oracle(5, 2, 10_000)
        .into_iter()
        .map(|p| (p.r, p.s))
        .collect();
    ensure(
        theorem == oracle,
        format!("theorem {theorem:?} vs oracle {oracle:?}"),
    )?;
    Ok(format!("{} pairs with r <= 10^4", oracle.len()))
}

fn c9_worked_curve() -> Check {
    let spec = curve_params(5, 6, 3).map_err(|e| e.to_string())?;
    ensure(
        (spec.big_a.clone(), spec.big_b.clone()) == (big(90), big(54)),
        "(A, B)",
    )?;
    let points: BTreeSet<_> = constrained_integer_points(&spec, 10_000)
        .into_iter()
        .map(|p| (p.x, p.y))
        .collect();
    let expected: BTreeSet<_> = [(0, 0), (108, 324), (90828, 27351756)]
        .into_iter()
        .map(|(x, y)| (big(x), big(y)))
        .collect();
    ensure(points == expected, format!("points {points:?}"))?;
    let triples = solve_simultaneous(5, 6, 3, 10_000).map_err(|e| e.to_string())?;
    ensure(triples.len() == 1, format!("{} triples", triples.len()))?;
    let t = &triples[0];
    ensure(
        (t.r.clone(), t.s.clone(), t.t.clone()) == (big(12), big(5), big(7))
            && (t.p.clone(), t.p_prime.clone(), t.p_double_prime.clone())
                == (big(210), big(35), big(70)),
        format!("triple ({}, {}, {})", t.r, t.s, t.t),
    )?;
    Ok("3 points, 1 triple".into())
}

fn c10_known_triples() -> Check {
    const R_MAX: u64 = 10_000;
    let rows: [(u64, u64, u64, i64, i64, i64); 6] = [
        (3, 6, 2, 6, 1, 3),
        (3, 6, 3, 630, 105, 210),
        (3, 7, 5, 105, 15, 21),
        (5, 6, 3, 210, 35, 70),
        (6, 20, 8, 120, 6, 15),
        (7, 12, 2, 12852, 1071, 6426),
    ];
    for (ell, m, n, p, p1, p2) in rows {
        let a = curve_params(ell, m, n).map_err(|e| e.to_string())?.a;
        // v = a·s − b ≤ a·r_max covers every triple with r ≤ r_max.
        let solved =
            solve_simultaneous(ell, m, n, a.unsigned_abs() * R_MAX).map_err(|e| e.to_string())?;
        let brute = brute_force_simultaneous(ell, m, n, R_MAX);
        let values = |v: &[polypell::simultaneous::SimultaneousTriple]| -> Vec<_> {
            v.iter()
                .map(|t| (t.p.clone(), t.p_prime.clone(), t.p_double_prime.clone()))
                .collect()
        };
        let want = vec![(big(p), big(p1), big(p2))];
        ensure(
            values(&brute) == want,
            format!("({ell}, {m}, {n}) brute force: {:?}", values(&brute)),
        )?;
        ensure(
            solved == brute,
            format!("({ell}, {m}, {n}) curve: {:?}", values(&solved)),
        )?;
    }
    Ok("6 rows, unique for r <= 10^4".into())
}

fn c11a_group_law() -> Check {
    let m_strategy = (2u64..200).prop_filter("non-square", |m| !is_square_u64(*m));
    let strategy = m_strategy.prop_flat_map(|m| {
        let one = (0u64..30, 0usize..4).prop_map(move |(n, k)| {
            let q = fundamental_solution(m)
                .unwrap()
                .pow(n)
                .as_quadratic()
                .sign_variants()[k]
                .clone();
            PellSolution::try_from(q).unwrap()
        });
        (one.clone(), one.clone(), one)
    });
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(quiet_config(), rng);
    runner
        .run(&strategy, |(a, b, c)| {
            let ab = a.compose(&b).unwrap();
            prop_assert_eq!(
                ab.compose(&c).unwrap(),
                a.compose(&b.compose(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(&ab, &b.compose(&a).unwrap());
            prop_assert_eq!(
                a.compose(&a.inverse()).unwrap(),
                PellSolution::identity(a.m())
            );
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 random triples".into())
}

fn c11b_norm() -> Check {
    let strategy = (2u64..10_000, any::<[i64; 4]>());
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut runner = TestRunner::new_with_rng(quiet_config(), rng);
    runner
        .run(&strategy, |(m, [a, b, c, d])| {
            let p = QuadraticInteger::new(m, a, b);
            let q = QuadraticInteger::new(m, c, d);
            prop_assert_eq!(p.compose(&q).unwrap().norm(), p.norm() * q.norm());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 random pairs".into())
}

/// Opposite parity as stated. Returns the counterexamples.
fn c11c_parity() -> Check {
    let mut bad = Vec::new();
    for m in non_squares(2, 50) {
        let g = fundamental_solution(m).map_err(|e| e.to_string())?;
        for (n, s) in (1u64..).zip(g.powers().take(20)) {
            if m % 2 == 0 && s.x().is_even() {
                return Err(format!("m = {m}, n = {n}: x even"));
            }
            if (s.x() + s.y()).is_even() {
                bad.push((m, n));
            }
        }
    }
    if bad.is_empty() {
        return Ok("m <= 50, n <= 20".into());
    }
    let ms: BTreeSet<_> = bad.iter().map(|&(m, _)| m).collect();
    Err(format!(
        "{} of the (m, n) both odd, m in {ms:?} (x^2 - my^2 = 1 - m mod 8 when both odd), e.g. m = 8: (3, 1)",
        bad.len()
    ))
}

fn c11d_triangular_guarantee() -> Check {
    for m in non_squares(2, 50) {
        let pairs = solve_multiple(3, m, 3, SolveMode::Theorem { max_power: 64 })
            .map_err(|e| format!("m = {m}: {e}"))?;
        ensure(pairs.len() >= 3, format!("m = {m}: {} pairs", pairs.len()))?;
    }
    Ok("non-square m <= 50".into())
}

fn c11e_theorem_subset_of_oracle() -> Check {
    const R_MAX: u64 = 20_000;
    let mut extra = Vec::new();
    let mut combos = 0;
    for ell in (3u64..=12).filter(|&l| l != 4) {
        for m in non_squares(2, 13) {
            combos += 1;
            let oracle: BTreeSet<_> = enumerate_multiples_oracle(ell, m, R_MAX)
                .into_iter()
                .map(|p| (p.r, p.s))
                .collect();
            let theorem: BTreeSet<_> = match theorem_pairs_up_to(ell, m, &BigInt::from(R_MAX), 256)
            {
                Ok(v) => v.into_iter().map(|p| (p.r, p.s)).collect(),
                Err(Error::NoTheoremSolutions { .. }) => BTreeSet::new(),
                Err(e) => return Err(format!("ell = {ell}, m = {m}: {e}")),
            };
            if let Some(p) = theorem.difference(&oracle).next() {
                return Err(format!(
                    "ell = {ell}, m = {m}: theorem pair {p:?} missing from oracle"
                ));
            }
            let missed = oracle.difference(&theorem).count();
            if missed > 0 {
                extra.push(format!("({ell},{m}):{missed}"));
            }
        }
    }
    // Pairs outside the unit orbits of the two base solutions are expected
    // and only reported.
    println!(
        "    oracle-only pairs (ell,m):count = [{}]",
        extra.join(" ")
    );
    Ok(format!("{combos} (ell, m) combinations, r <= 2*10^4"))
}

fn c12_cattle() -> Check {
    let start = Instant::now();
    let g = fundamental_solution(4_729_494).map_err(|e| e.to_string())?;
    let norm = g.x() * g.x() - BigInt::from(4_729_494u64) * g.y() * g.y();
    ensure(norm.is_one(), "norm != 1")?;
    Ok(format!(
        "x has {} digits, {:?}",
        g.x().to_string().len(),
        start.elapsed()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 16] = [
        (
            "1",
            "fundamental solutions for small m",
            c1_fundamental_solutions,
        ),
        ("2", "m = 61 via continued fractions < 1 s", c2_sixty_one),
        ("3", "powers of (3, 2)", c3_powers),
        ("4", "condition checks ell = 5", c4_conditions),
        (
            "5",
            "g_2(4) = 2 and certified failure ell = 6, m = 2",
            c5_certified_failure,
        ),
        (
            "6",
            "no hexagonal number twice another, r <= 10^6",
            c6_hexagonal_oracle,
        ),
        ("7", "solvable m lists for ell = 6, 8", c7_example_lists),
        (
            "8",
            "pentagonal m = 2 first pair (7, 5), oracle agreement",
            c8_pentagonal,
        ),
        (
            "9",
            "worked curve (90, 54) points and triple",
            c9_worked_curve,
        ),
        (
            "10",
            "known simultaneous triples and uniqueness",
            c10_known_triples,
        ),
        ("11a", "group law on 1000 random solutions", c11a_group_law),
        ("11b", "norm multiplicativity", c11b_norm),
        ("11c", "opposite parity of (x_n, y_n)", c11c_parity),
        (
            "11d",
            ">= 3 triangular pairs for every m <= 50",
            c11d_triangular_guarantee,
        ),
        (
            "11e",
            "theorem mode within oracle",
            c11e_theorem_subset_of_oracle,
        ),
        ("12", "cattle modulus self-verifies", c12_cattle),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let result = check();
        match &result {
            Ok(detail) => println!("PASS {id:>3} {name} ({detail})"),
            Err(detail) => println!("FAIL {id:>3} {name}: {detail}"),
        }
        let known_false = KNOWN_FALSE.contains(&id);
        if result.is_ok() == known_false {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcomes: {unexpected:?}");
}

#[test]
fn parity_counterexample_is_genuine() {
    let g = fundamental_solution(8).unwrap();
    assert_eq!(xy(&g), (big(3), big(1)));
    assert!(g.x().is_odd() && g.y().is_odd());
    // Even powers do mix parity, so the triangular construction survives.
    assert!((g.pow(2).x() + g.pow(2).y()).is_odd());
    assert_eq!(g.pow(2).y().to_u64(), Some(6));
}
