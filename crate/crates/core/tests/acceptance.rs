//! Acceptance run: one line per criterion, non-zero exit if any fails.

#![allow(clippy::needless_range_loop)]

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use idealflow_core::graph::strongly_connected_components;
use idealflow_core::ideal_flow::{ideal_flow_from_stochastic, raw_ideal_flow, to_whole_numbers};
use idealflow_core::markov::{
    normalize_total, premagic_from_stochastic, random_irreducible_stochastic, scale_by_total,
    stationary_exact, stationary_power, to_row_stochastic,
};
use idealflow_core::matrix::gram_product;
use idealflow_core::random_walk::{convergence_report, simulate};
use idealflow_core::spectral::{
    check_conjecture_1, check_conjecture_2, check_conjecture_3, ConjectureReport, GeneratorParams,
    SCALING_TOL,
};
use idealflow_core::{DirectedNetwork, PermutationMatrix, Rational, Scalar, SimulationConfig, SquareMatrix};
use num_bigint::BigInt;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:.0?}"))
}

fn closure_suite() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=8 {
        let mut r = rng(n as u64);
        for case in 0..200 {
            let (a, b, c) = (signed_premagic(n, &mut r), signed_premagic(n, &mut r), signed_premagic(n, &mut r));
            let k = small_rational(&mut r);
            let diag: Vec<Rational> = (0..n).map(|_| small_rational(&mut r)).collect();
            let p = PermutationMatrix::new(shuffled(n, &mut r)).unwrap();
            let ops = [
                ("add", a.add(&b).unwrap()),
                ("subtract", a.subtract(&b).unwrap()),
                ("scale", a.scale(&k)),
                ("hadamard kJ", a.hadamard(&M::ones(n).scale(&k)).unwrap()),
                ("transpose", a.transpose()),
                ("shift +kJ", a.shift(&k)),
                ("shift -kJ", a.shift(&-k.clone())),
                ("add kI", a.add_scaled_identity(&k)),
                ("subtract kI", a.add_scaled_identity(&-k.clone())),
                ("add diagonal", a.add_diagonal(&diag).unwrap()),
                ("strip diagonal", a.strip_diagonal()),
                ("hadamard transpose", a.hadamard_with_transpose()),
                ("linear combination", M::linear_combination(&[k.clone(), diag[0].clone(), q(-2, 3)], &[a.clone(), b.clone(), c.clone()]).unwrap()),
                ("permute", a.permute(&p).unwrap()),
            ];
            for (name, m) in &ops {
                ensure(m.is_premagic(0.0) && premagic_oracle(m), || format!("{name} failed at order {n}, case {case}"))?;
                checked += 1;
            }
            let identities = [
                a.add(&b).unwrap() == b.add(&a).unwrap(),
                a.hadamard(&b).unwrap() == b.hadamard(&a).unwrap(),
                a.add(&b).unwrap().add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap(),
                a.hadamard(&b).unwrap().hadamard(&c).unwrap() == a.hadamard(&b.hadamard(&c).unwrap()).unwrap(),
                a.add(&b).unwrap().hadamard(&c).unwrap()
                    == a.hadamard(&c).unwrap().add(&b.hadamard(&c).unwrap()).unwrap(),
            ];
            ensure(identities.iter().all(|&x| x), || format!("identity failed at order {n}, case {case}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{checked} closures, 0 failures, {:.2?}", start.elapsed()))
}

fn theorem_suite() -> Outcome {
    const CASES: usize = 100;
    let mut r = rng(8);
    let mut order = || r.random_range(1..=8usize);
    let sizes: Vec<usize> = (0..CASES * 8).map(|_| order()).collect();
    let mut r = rng(9);

    for &n in &sizes[..CASES] {
        ensure(symmetric(n, &mut r).is_premagic(0.0), || "symmetric matrix not premagic".into())?;
    }

    let mut invertible = 0;
    let mut attempts = 0;
    while invertible < CASES {
        attempts += 1;
        let s = symmetric(sizes[attempts % sizes.len()], &mut r);
        if let Ok(inv) = s.inverse() {
            ensure(inv.is_premagic(0.0), || "symmetric inverse not premagic".into())?;
            ensure(identity_oracle(&s.matmul(&inv).unwrap()), || "S·S⁻¹ ≠ I".into())?;
            invertible += 1;
        }
    }

    let mut non_premagic = 0;
    for &n in &sizes[..CASES * 2] {
        let yes = signed_premagic(n, &mut r);
        ensure(yes.antisymmetric_kernel_residual().is_zero(0.0), || "premagic with nonzero residual".into())?;
        let any = arbitrary(n, &mut r);
        let residual_zero = any.antisymmetric_kernel_residual().is_zero(0.0);
        ensure(residual_zero == premagic_oracle(&any), || "kernel test disagrees with sums".into())?;
        non_premagic += usize::from(!residual_zero);
    }
    ensure(non_premagic >= CASES, || format!("only {non_premagic} non-premagic kernel cases"))?;

    for &n in &sizes[..CASES] {
        let a = arbitrary(n, &mut r);
        let b = a.hadamard_with_transpose();
        let diag_squared = (0..n).all(|i| b.get(i, i) == &(a.get(i, i) * a.get(i, i)));
        ensure(b.is_symmetric() && diag_squared && b.is_premagic(0.0), || "A⊙Aᵀ property failed".into())?;
    }

    for &n in &sizes[..CASES] {
        let cols = r.random_range(1..=8);
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..cols).map(|_| small_rational(&mut r)).collect()).collect();
        let g = gram_product(&rows).unwrap();
        ensure(g.is_symmetric() && g.is_premagic(0.0), || "AAᵀ not symmetric premagic".into())?;
    }

    for &n in &sizes[..CASES] {
        let c = small_rational(&mut r);
        let m = SquareMatrix::from_fn(n, |i, j| if i == j { small_rational(&mut r) } else { c.clone() });
        ensure(m.is_premagic(0.0), || "constant off-diagonal not premagic".into())?;
    }

    for &n in &sizes[..CASES] {
        let m = nonneg_premagic(n, &mut r);
        ensure(m.norm_1() == m.norm_inf() && m.norm_inf() == m.row_sums().max(), || "norms differ".into())?;
    }
    let signed = M::from_ints([[-1, -1, 0], [0, -1, 0], [-1, 1, 0]]);
    ensure(signed.is_premagic(0.0) && signed.norm_1() != signed.norm_inf(), || "signed counterexample lost".into())?;

    for _ in 0..CASES {
        let (a, b, d) = (small_rational(&mut r), small_rational(&mut r), small_rational(&mut r));
        let m = M::from_rows(vec![vec![a, b.clone()], vec![b, d]]).unwrap();
        let rep = m.premagic_2x2_report().unwrap();
        ensure(rep.offdiag_equal && rep.identity_a_holds && rep.identity_b_holds, || format!("2×2 identity failed for {m:?}"))?;
        if let Some(inv) = rep.inverse {
            ensure(inv.is_premagic(0.0), || "2×2 inverse not premagic".into())?;
        }
    }
    Ok(format!("8 theorem groups × ≥{CASES} cases, 0 failures"))
}

fn running_example() -> Outcome {
    let start = Instant::now();
    let g = DirectedNetwork::from_pairs(3, &[(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
    let s = g.uniform_walk_matrix().unwrap();
    let pi = stationary_exact(&s).unwrap();
    ensure(pi.values == vec![q(2, 5), q(1, 5), q(2, 5)], || format!("π = {:?}", pi.values))?;
    let f = ideal_flow_from_stochastic(&s).unwrap();
    let expected = M::from_ints([[0, 1, 1], [0, 0, 1], [2, 0, 0]]);
    ensure(f.matrix() == &expected, || format!("F = {:?}", f.matrix()))?;
    ensure(f.kappa() == &expected.total() && f.kappa() == &q(5, 1), || format!("κ = {}", f.kappa()))?;
    let raw = raw_ideal_flow(&s).unwrap();
    let whole = to_whole_numbers(&raw);
    ensure(whole.multiplier == BigInt::from(5), || format!("multiplier {}", whole.multiplier))?;
    ensure(whole.matrix == expected, || "integerized raw flow differs".into())?;
    let oracle = lazy_power_stationary(s.to_f64().matrix(), 1e-15);
    let gap = oracle.iter().zip(&pi.values).map(|(a, b)| (a - b.to_f64()).abs()).fold(0.0, f64::max);
    ensure(gap <= 1e-10, || format!("power iteration gap {gap:e}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "π = (2/5, 1/5, 2/5), F exact, κ = ΣF = 5, multiplier 5, {:.2?}",
        start.elapsed()
    ))
}

fn markov_round_trips() -> Outcome {
    let mut r = rng(25);
    for case in 0..200 {
        let m = nonneg_premagic(r.random_range(1..=8), &mut r);
        let (s, n) = to_row_stochastic(&m).unwrap();
        ensure(premagic_from_stochastic(&s, &n).unwrap() == m, || format!("25→26 case {case}"))?;
        let (t, kappa) = normalize_total(&m).unwrap();
        ensure(scale_by_total(&t, &kappa).unwrap() == m, || format!("27→28 case {case}"))?;
    }
    Ok("200 matrices, both round trips bit-exact".into())
}

fn convergence_and_conservation() -> (Outcome, Outcome) {
    let start = Instant::now();
    let g = DirectedNetwork::from_pairs(3, &[(0, 1), (0, 2), (1, 2), (2, 0)]).unwrap();
    let s = g.uniform_walk_matrix().unwrap();
    let f = ideal_flow_from_stochastic(&s).unwrap();
    let sf = s.to_f64();
    let mut improved = 0;
    let mut worst_large: f64 = 0.0;
    let mut conservation = Ok(());
    let mut runs = 0;
    for seed in 1..=5u64 {
        let points = convergence_report(&g, &sf, &[1_000, 1_000_000], &f, seed).unwrap();
        worst_large = worst_large.max(points[1].max_rel_err);
        improved += usize::from(points[1].max_rel_err < points[0].max_rel_err);
        for p in &points {
            let counts = simulate(&g, &sf, &SimulationConfig::new(p.agents, p.steps, seed).unwrap()).unwrap();
            runs += 1;
            for i in 0..3 {
                if counts.outflow(i).abs_diff(counts.inflow(i)) > p.agents {
                    conservation = Err(format!("seed {seed}, budget {}, node {i}", p.budget));
                }
            }
        }
    }
    let mut r = rng(9);
    for _ in 0..50 {
        let n = r.random_range(2..=7);
        let g = DirectedNetwork::from_adjacency(&irreducible_premagic(n, &mut r)).unwrap();
        let s = g.uniform_walk_matrix().unwrap().to_f64();
        let cfg = SimulationConfig::new(r.random_range(1..=50), r.random_range(1..=500), r.random()).unwrap();
        let counts = simulate(&g, &s, &cfg).unwrap();
        runs += 1;
        if (0..n).any(|i| counts.outflow(i).abs_diff(counts.inflow(i)) > cfg.agents) || counts.total() != cfg.budget() {
            conservation = Err(format!("random network run {runs}"));
        }
    }
    let elapsed = start.elapsed();
    let convergence = ensure(worst_large <= 0.02, || format!("max rel err {worst_large:.4} at 10⁶"))
        .and_then(|_| ensure(improved >= 4, || format!("improved in only {improved}/5 seeds")))
        .and_then(|_| within(elapsed, Duration::from_secs(10)))
        .map(|_| format!("worst max rel err at 10⁶ = {worst_large:.4}, improved in {improved}/5 seeds, {elapsed:.2?}"));
    let conservation = conservation.map(|_| format!("|inflow − outflow| ≤ N on all {runs} runs"));
    (convergence, conservation)
}

fn stationary_cross_check() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..50u64 {
        let n = 1 + (seed as usize % 10);
        let s = random_irreducible_stochastic(n, 1000 + seed, true);
        let exact = stationary_exact(&s).map_err(|e| e.to_string())?;
        let power = stationary_power(&s.to_f64(), 1e-13, 1_000_000).map_err(|e| format!("seed {seed}: {e}"))?;
        for (a, b) in power.values.iter().zip(&exact.values) {
            worst = worst.max((a - b.to_f64()).abs());
        }
    }
    ensure(worst <= 1e-8, || format!("max gap {worst:e}"))?;
    Ok(format!("50 aperiodic chains, max gap {worst:.1e}"))
}

fn summarize(report: &ConjectureReport) -> String {
    format!("conjecture {}: {}/{} consistent", report.conjecture, report.consistent, report.cases)
}

fn conjectures() -> Outcome {
    let params = GeneratorParams::new(2, 10, 42).unwrap();
    let third = check_conjecture_3(&params, 50, &[0.5, 2.0, 3.0, 10.0]);
    ensure(third.details.iter().all(|d| d.error.is_none()), || "conjecture 3 case errored".into())?;
    ensure(third.consistent == 50 && third.worst_deviation <= SCALING_TOL, || {
        format!("{}, worst deviation {:e}", summarize(&third), third.worst_deviation)
    })?;
    let first = check_conjecture_1(&params, 100);
    let second = check_conjecture_2(&params, 100);
    for rep in [&first, &second] {
        ensure(rep.cases == 100 && rep.details.iter().all(|d| d.error.is_none()), || {
            format!("conjecture {} report incomplete", rep.conjecture)
        })?;
    }
    Ok(format!(
        "{} (worst {:.1e}); recorded: {}; {}",
        summarize(&third),
        third.worst_deviation,
        summarize(&first),
        summarize(&second)
    ))
}

fn scc_oracle() -> Outcome {
    let mut graphs = 0;
    let mut check = |n: usize, candidates: &[(usize, usize)]| -> Result<(), String> {
        for mask in 0u32..(1 << candidates.len()) {
            let edges: Vec<_> = (0..candidates.len()).filter(|b| mask >> b & 1 == 1).map(|b| candidates[b]).collect();
            let g = DirectedNetwork::from_pairs(n, &edges).unwrap();
            let report = g.strong_connectivity();
            ensure(report.strongly_connected == strongly_connected_oracle(n, &edges), || format!("{n} nodes, {edges:?}"))?;
            let same = mutual_reachability(n, &edges);
            for i in 0..n {
                for j in 0..n {
                    let together = report.component_assignment[i] == report.component_assignment[j];
                    ensure(together == same[i][j], || format!("partition differs for {edges:?}"))?;
                }
            }
            graphs += 1;
        }
        Ok(())
    };
    for n in 1..=4 {
        let all: Vec<_> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
        check(n, &all)?;
    }
    // Five nodes: a ring in both directions plus chords.
    let five: Vec<_> = (0..5)
        .flat_map(|i| [(i, (i + 1) % 5), ((i + 1) % 5, i), (i, (i + 2) % 5)])
        .chain([(0, 0)])
        .collect();
    check(5, &five[..14])?;
    // Six nodes: a ring plus reverse edges on half of it.
    let six: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).chain([(1, 0), (3, 2), (5, 4), (0, 3), (4, 1), (2, 5), (3, 3)]).collect();
    check(6, &six)?;
    ensure(graphs >= 10_000, || format!("only {graphs} graphs"))?;
    ensure(strongly_connected_components(&[vec![0]]).component_count == 1, || "self-loop".into())?;
    Ok(format!("{graphs} graphs, 0 disagreements"))
}

fn main() -> ExitCode {
    let total = Instant::now();
    let (convergence, conservation) = convergence_and_conservation();
    let results: Vec<(&str, &str, Outcome)> = vec![
        ("AC1", "closure suite", closure_suite()),
        ("AC2", "theorem suite", theorem_suite()),
        ("AC3", "running-example pipeline", running_example()),
        ("AC4", "Markov round trips", markov_round_trips()),
        ("AC5", "random-walk convergence", convergence),
        ("AC6", "finite-sample conservation", conservation),
        ("AC7", "stationary solver cross-check", stationary_cross_check()),
        ("AC8", "conjecture reports", conjectures()),
        ("AC9", "SCC oracle equivalence", scc_oracle()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.2?}", results.len() - failed, total.elapsed());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
