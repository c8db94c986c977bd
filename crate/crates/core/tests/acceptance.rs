//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{class_algebra_blocks, cycle_lengths, oracle_entropy, q, thoma_value, to_f64};
use thoma_core::entropy::{entropy_growth_experiment, relative_entropy_bounds, shift_entropy};
use thoma_core::groupalg::{
    algebra_entropy, block_weights, cond_exp_relcomm_tk, find_small_projection, AlgebraElement, SmallProjectionSearch,
};
use thoma_core::perm::enumerate_group;
use thoma_core::tensorrep::{
    commuting_square_membership, jones_projections, minimal_projection_suite, pimsner_popa_bound,
    pimsner_popa_inequality, relcomm_expectation_matrix, represent, state_value, IndexSet, PimsnerPopa,
};
use thoma_core::thoma::RawParameter;
use thoma_core::young::{triangle_bound_exact, YoungDiagram};
use thoma_core::{CycleType, Limits, Permutation, ThomaParameter};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn k(s: &str) -> ThomaParameter {
    s.parse().expect("valid parameter")
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn check<E: std::fmt::Display, T>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

const PULLBACK: [&str; 4] = ["a=1/2,1/2", "a=2/3,1/3", "a=1/2;b=1/2", "a=1/3,1/3;b=1/3"];

/// Parameters with at most three points, `γ = 0`.
const SMALL_INDEX: [&str; 7] = [
    "a=1/2,1/2",
    "a=2/3,1/3",
    "a=1/2;b=1/2",
    "a=1/3,1/3;b=1/3",
    "a=1/2;b=1/4,1/4",
    "a=1/2,1/3,1/6",
    "b=1/3,1/3,1/3",
];

/// A mixed battery including faithful parameters.
const BATTERY: [&str; 8] = [
    "a=1/2,1/2",
    "a=2/3,1/3",
    "a=1/2;b=1/2",
    "a=1/3,1/3;b=1/3",
    "g=1",
    "a=1/2;b=1/4",
    "a=1/4,1/8;b=1/8;g=1/2",
    "b=1/3,1/3,1/3",
];

fn criterion_1() -> Outcome {
    let limits = Limits::default();
    let mut checked = 0;
    for s in PULLBACK {
        let kappa = k(s);
        let index = check(IndexSet::from_parameter(&kappa))?;
        for p in check(enumerate_group(6, 0, &limits))? {
            let image = check(represent::<BigRational>(&index, &p, 6, &limits))?;
            let lhs = state_value(&index, &image);
            let rhs = kappa.character(&p.cycle_type());
            let oracle = thoma_value(kappa.alpha(), kappa.beta(), &cycle_lengths(p.images()));
            ensure(lhs == rhs && rhs == oracle, || format!("{s} at {p}: {lhs} vs {rhs} vs {oracle}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (parameter, permutation) pairs agree exactly"))
}

fn criterion_2() -> Outcome {
    let limits = Limits::default();
    for n in 3..=7 {
        let x = AlgebraElement::basis(&Permutation::transposition(2, 0, 1));
        let got = check(cond_exp_relcomm_tk(&x, n, &limits))?;
        let share = BigRational::new(BigInt::one(), BigInt::from(n - 1));
        let expected =
            AlgebraElement::from_terms(n, (1..n).map(|j| (Permutation::transposition(n, 0, j), share.clone())));
        ensure(got == expected, || format!("n={n}: got {got}"))?;
    }
    Ok("n = 3..7 exact".into())
}

fn criterion_3() -> Outcome {
    let limits = Limits::default();
    let x = AlgebraElement::basis(&Permutation::transposition(2, 0, 1));
    for s in BATTERY {
        let kappa = k(s);
        for n in 3..=6 {
            let e = check(cond_exp_relcomm_tk(&x, n, &limits))?;
            let lhs = e.two_norm_sq(&kappa);
            let m = BigRational::from_integer(BigInt::from(n));
            let three = kappa.character(&CycleType::from_lengths(vec![3]));
            let rhs = (BigRational::one() + (&m - BigRational::from_integer(2.into())) * three)
                / (m - BigRational::one());
            ensure(lhs == rhs, || format!("{s} n={n}: {lhs} vs {rhs}"))?;
        }
    }
    let e = check(cond_exp_relcomm_tk(&x, 4, &limits))?;
    let v = e.two_norm_sq(&k("a=1/2,1/2"));
    ensure(v == q(1, 2), || format!("n=4 value {v}"))?;
    Ok(format!("{} parameters, n = 3..6; value 1/2 at n=4", BATTERY.len()))
}

fn random_parameter(rng: &mut ChaCha8Rng) -> ThomaParameter {
    loop {
        let denom = [4i64, 6, 8, 9, 10, 12][rng.gen_range(0..6)];
        let a_len = rng.gen_range(0..4);
        let b_len = rng.gen_range(0..3);
        let mut budget = denom;
        let mut draw = |len: usize, budget: &mut i64| -> Vec<BigRational> {
            (0..len)
                .filter_map(|_| {
                    if *budget == 0 {
                        return None;
                    }
                    let v = rng.gen_range(1..=*budget);
                    *budget -= v;
                    Some(q(v, denom))
                })
                .collect()
        };
        let alpha = draw(a_len, &mut budget);
        let beta = draw(b_len, &mut budget);
        if let Ok(p) = ThomaParameter::validate(RawParameter {
            alpha,
            beta,
            gamma: None,
        }) {
            return p;
        }
    }
}

fn criterion_4() -> Outcome {
    let mut battery: Vec<ThomaParameter> = vec![ThomaParameter::regular()];
    for n in 1..=4i64 {
        let share = vec![q(1, n); n as usize];
        battery.push(check(ThomaParameter::validate(RawParameter { alpha: share.clone(), beta: vec![], gamma: None }))?);
        battery.push(check(ThomaParameter::validate(RawParameter { alpha: vec![], beta: share, gamma: None }))?);
    }
    for s in ["a=1/2,1/4,1/4", "a=1/2;b=1/2", "a=1/2,1/2;g=0", "a=1/3,1/3", "a=1/4,1/4;b=1/4,1/4"] {
        battery.push(k(s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    while battery.len() < 50 {
        battery.push(random_parameter(&mut rng));
    }
    let mut irreducible = 0;
    for p in &battery {
        let c = p.classify_irreducible();
        ensure(c.tag.is_irreducible() == p.moment_identity_holds(), || {
            format!("{p}: tag {} but moment identity {}", c.tag, p.moment_identity_holds())
        })?;
        irreducible += usize::from(c.tag.is_irreducible());
    }
    Ok(format!("{} parameters, {irreducible} irreducible, all consistent", battery.len()))
}

fn criterion_5() -> Outcome {
    let limits = Limits::default();
    for s in PULLBACK {
        let kappa = k(s);
        for kk in 3..=7 {
            let r = check(relcomm_expectation_matrix(&kappa, kk, kk, &limits))?;
            ensure(r.deviation_sq == r.predicted_sq, || {
                format!("{s} k={kk}: {} vs {}", r.deviation_sq, r.predicted_sq)
            })?;
            if s == "a=1/2,1/2" && kk == 6 {
                ensure(r.deviation_sq == q(3, 20), || format!("k=6 value {}", r.deviation_sq))?;
            }
        }
    }
    Ok("k = 3..7 exact; 3/20 at k=6".into())
}

fn criterion_6() -> Outcome {
    let limits = Limits::default();
    let mut worst_span = 0.0f64;
    let mut bare_span = 0.0f64;
    let mut worst_commutator = 0.0f64;
    let mut worst_psi = 0.0f64;
    for s in SMALL_INDEX {
        let kappa = k(s);
        for n in 1..=4 {
            let m = check(commuting_square_membership(&kappa, n, &limits))?;
            worst_span = worst_span.max(m.max_residual);
            bare_span = bare_span.max(m.subgroup_span_residual);
        }
        for n in 1..=5 {
            let r = check(minimal_projection_suite(&kappa, n, &limits))?;
            worst_commutator = worst_commutator.max(r.max_commutator);
            worst_psi = worst_psi.max(r.max_psi_error);
        }
    }
    ensure(worst_span <= 1e-10, || format!("span residual {worst_span:e}"))?;
    ensure(worst_commutator <= 1e-10, || format!("commutator {worst_commutator:e}"))?;
    ensure(worst_psi <= 1e-10, || format!("psi error {worst_psi:e}"))?;
    Ok(format!(
        "residual {worst_span:e} (bare span of T_n images: {bare_span:.3}), commutator {worst_commutator:e}, psi error {worst_psi:e}"
    ))
}

fn criterion_7() -> Outcome {
    let limits = Limits::default();
    let mut worst = 0.0f64;
    for a in [q(3, 5), q(2, 3), q(9, 10)] {
        let r = check(jones_projections(&a, 4, &limits))?;
        worst = worst
            .max(r.max_idempotent_error)
            .max(r.max_self_adjoint_error)
            .max(r.max_tl_error)
            .max(r.max_far_commutator);
        ensure(r.passes(1e-12), || format!("alpha1={a}: {r:?}"))?;
        ensure((r.delta - to_f64(&a) * (1.0 - to_f64(&a))).abs() < 1e-15, || format!("delta {}", r.delta))?;
    }
    Ok(format!("largest error {worst:e}"))
}

fn criterion_8() -> Outcome {
    let limits = Limits::default();
    for s in BATTERY {
        let kappa = k(s);
        for n in 1..=8 {
            let w = check(block_weights(&kappa, n, &limits))?;
            ensure(w.is_normalized(), || format!("{s} n={n}: total {}", w.total()))?;
            ensure(w.entries.iter().all(|e| e.weight >= BigRational::zero()), || format!("{s} n={n}: negative weight"))?;
        }
    }
    let half = k("a=1/2,1/2");
    for n in 1..=8 {
        let w = check(block_weights(&half, n, &limits))?;
        for e in &w.entries {
            ensure(e.weight.is_zero() == (e.diagram.num_rows() > 2), || {
                format!("n={n} {}: weight {}", e.diagram, e.weight)
            })?;
        }
    }
    let w = check(block_weights(&half, 2, &limits))?;
    let row = check(YoungDiagram::new(vec![2]))?;
    let column = check(YoungDiagram::new(vec![1, 1]))?;
    ensure(w.weight(&row) == Some(&q(3, 4)) && w.weight(&column) == Some(&q(1, 4)), || format!("{w:?}"))?;
    Ok(format!("{} parameters, n = 1..8; vanishing pattern and n=2 values", BATTERY.len()))
}

fn criterion_9() -> Outcome {
    let limits = Limits::default();
    let start = Instant::now();
    let found = check(find_small_projection(&k("g=1"), &q(1, 2), &SmallProjectionSearch::default(), &limits))?;
    let elapsed = start.elapsed();
    let p = found.ok_or("no projection found")?;
    ensure(p.n == 10 && p.diagram.rows() == [4, 3, 2, 1], || format!("found n={} {}", p.n, p.diagram))?;
    ensure(p.trace == q(768, 3_628_800), || format!("trace {}", p.trace))?;
    ensure(p.trace < q(1, 1024), || "trace not below 2^-10".into())?;
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("n=10, (4,3,2,1), trace 768/3628800 = {} in {elapsed:.2?}", p.trace))
}

fn criterion_10() -> Outcome {
    let r = BigRational::from_integer(4.into());
    let at7 = triangle_bound_exact(&r, 7);
    let at9 = triangle_bound_exact(&r, 9);
    ensure(at7 < BigRational::one(), || format!("k=7: {at7}"))?;
    ensure(at9 < q(1, 1_000_000), || format!("k=9: {at9}"))?;
    Ok(format!("k=7: {:.6}, k=9: {:.3e}", to_f64(&at7), to_f64(&at9)))
}

fn criterion_11() -> Outcome {
    let kappa = k("a=1/2,1/2");
    let PimsnerPopa::Finite { constant, .. } = pimsner_popa_bound(&kappa) else {
        return Err("reported infinite index".into());
    };
    ensure(constant == q(1, 8), || format!("C = {constant}"))?;
    let r = check(pimsner_popa_inequality(&kappa, 100, 11))?;
    ensure(r.samples == 100 && r.min_eigenvalue >= -1e-10, || format!("{r:?}"))?;
    Ok(format!("C = 1/8, smallest eigenvalue {:.3e} over 100 samples", r.min_eigenvalue))
}

fn criterion_12() -> Outcome {
    let limits = Limits::default();
    let half = k("a=1/2,1/2");
    let ln2 = 2f64.ln();
    ensure((shift_entropy(&half) - ln2).abs() <= 1e-12, || format!("shift {}", shift_entropy(&half)))?;
    let bounds = relative_entropy_bounds(&half);
    ensure((bounds.upper_bound - 2.0 * ln2).abs() <= 1e-12, || format!("bound {}", bounds.upper_bound))?;
    let growth = check(entropy_growth_experiment(&half, 3, &limits))?;
    let t2 = growth.growth_table[1].total;
    let t3 = growth.growth_table[2].total;
    ensure((t2 - 0.56234).abs() <= 1e-5 && (t3 - 1.03972).abs() <= 1e-5, || format!("totals {t2} {t3}"))?;
    let mut worst = 0.0f64;
    for s in BATTERY {
        let kappa = k(s);
        for n in 1..=5 {
            let h = check(algebra_entropy(&kappa, n, &limits))?;
            let (total, center) = oracle_entropy(&class_algebra_blocks(kappa.alpha(), kappa.beta(), n));
            worst = worst.max((h.total - total).abs()).max((h.center - center).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("oracle disagreement {worst:e}"))?;
    Ok(format!("totals {t2:.5}, {t3:.5}; oracle agreement {worst:.1e} for n <= 5"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("trace pullback on S_6", criterion_1),
        ("relative commutant expectation of (0 1)", criterion_2),
        ("norm of the averaged transposition", criterion_3),
        ("classification matches the moment identity", criterion_4),
        ("convergence rate of the averages", criterion_5),
        ("commuting square and minimal projections", criterion_6),
        ("Temperley-Lieb relations", criterion_7),
        ("block weights", criterion_8),
        ("small projection search", criterion_9),
        ("staircase bound", criterion_10),
        ("Pimsner-Popa constant and inequality", criterion_11),
        ("entropy values and oracle", criterion_12),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{name}] {detail} ({elapsed:.2?})", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL [{name}] {detail} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
