//! Exit criteria. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triperi_core::*;

use common::{exact, oracle_alpha, random_map, random_metric};

type Outcome = Result<String, String>;

fn ix(i: usize) -> PointRef {
    PointRef::Index(i)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ratio(s: &Scalar) -> &Ratio {
    s.as_ratio().expect("exact mode")
}

fn chain() -> (PaperSpace, ShiftMap) {
    make_paper_space(PaperSpaceParams::with_window(64).unwrap()).unwrap()
}

const WINDOW: usize = 64;
const SEVEN_EIGHTHS: (i128, i128) = (7, 8);

fn paper_space_certification() -> Outcome {
    let start = Instant::now();
    let (s, m) = chain();
    let scan = TripleScan::new(&s, &m, Some(WINDOW)).map_err(|e| e.to_string())?;
    ensure(scan.triple_count() == 45_760, || {
        format!("{} triples, expected 45760", scan.triple_count())
    })?;
    let (alpha, witness) = scan.run().map_err(|e| e.to_string())?;
    let bound = exact(SEVEN_EIGHTHS.0, SEVEN_EIGHTHS.1);
    ensure(ratio(&alpha) <= ratio(&bound), || {
        format!("max ratio {alpha} exceeds 7/8")
    })?;

    let pts = s.points(Some(WINDOW)).unwrap();
    let mut star_triples = 0;
    for (a, &x) in pts.iter().enumerate() {
        for &y in pts.iter().skip(a + 1) {
            let (PointRef::Index(i), PointRef::Index(_)) = (x, y) else {
                continue;
            };
            let r = perimeter_ratio(&s, &m, &Triple::new(x, y, PointRef::Star).unwrap()).unwrap();
            let want = if i % 2 == 0 { exact(3, 4) } else { exact(2, 3) };
            ensure(r == want, || {
                format!("star triple ({x}, {y}, x*) gave {r}, expected {want}")
            })?;
            star_triples += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max ratio {alpha} at ({}) <= 7/8; {star_triples} star triples exactly 3/4 or 2/3; {elapsed:.2?}",
        witness.points().map(|p| s.label(p)).join(", ")
    ))
}

fn non_contraction() -> Outcome {
    let (s, m) = chain();
    let (l, (p, q)) = lipschitz_coefficient(&s, &m, Some(WINDOW)).map_err(|e| e.to_string())?;
    ensure(l == exact(1, 1), || format!("L = {l}"))?;
    let even_pair = matches!((p, q), (PointRef::Index(i), PointRef::Index(j)) if i % 2 == 0 && j == i + 1);
    ensure(even_pair, || format!("witness ({p}, {q}) is not (x_2n, x_2n+1)"))?;
    for n in 0..WINDOW / 2 {
        let before = distance(&s, ix(2 * n), ix(2 * n + 1)).unwrap();
        let after = distance(&s, ix(2 * n + 1), ix(2 * n + 2)).unwrap();
        ensure(before == after, || format!("gap mismatch at n = {n}"))?;
    }
    Ok(format!("L = {l} with witness ({}, {})", s.label(p), s.label(q)))
}

fn three_point_examples() -> Outcome {
    let (s, a) = make_three_point_example(ThreePointVariant::A);
    let ra = classify(&s, &a, None).map_err(|e| e.to_string())?;
    ensure(ra.is_perimeter_contracting && ra.alpha_star == exact(2, 3), || {
        format!("A: alpha* = {}", ra.alpha_star)
    })?;
    ensure(ra.fixed_point_count() == 2, || {
        format!("A: {} fixed points", ra.fixed_point_count())
    })?;
    ensure(ra.condition_i_witness.is_none(), || {
        "A: unexpected period-two witness".into()
    })?;

    let (s, b) = make_three_point_example(ThreePointVariant::B);
    let rb = classify(&s, &b, None).map_err(|e| e.to_string())?;
    ensure(rb.is_perimeter_contracting, || format!("B: alpha* = {}", rb.alpha_star))?;
    ensure(rb.condition_i_witness.is_some(), || "B: no period-two witness".into())?;
    ensure(rb.fixed_point_count() == 0, || {
        format!("B: {} fixed points", rb.fixed_point_count())
    })?;
    Ok(format!(
        "A: alpha* = {}, fixed points {{x, y}}; B: alpha* = {}, witness {}, no fixed points",
        ra.alpha_star,
        rb.alpha_star,
        s.label(rb.condition_i_witness.unwrap())
    ))
}

fn solver_bounds() -> Outcome {
    let (s, m) = chain();
    let alpha = exact(7, 8);
    let trace = orbit(&s, &m, ix(0), 50).map_err(|e| e.to_string())?;
    let p0 = trace.perimeters[0].clone();
    ensure(p0 == exact(4, 1), || format!("p0 = {p0}"))?;
    let mut checks = 0;
    for n in 0..=40 {
        let gap = distance(&s, trace.points[n], trace.points[n + 1]).unwrap();
        let want = Scalar::Exact(Ratio::dyadic(1, (n / 2) as u32));
        ensure(gap == want, || {
            format!("d(x_{n}, x_{}) = {gap}, expected {want}", n + 1)
        })?;
        if n == 0 {
            continue;
        }
        for gap_len in 1..=10 {
            let d = distance(&s, trace.points[n], trace.points[n + gap_len]).unwrap();
            let bound = apriori_error_bound(&alpha, &p0, n, Some(gap_len)).map_err(|e| e.to_string())?;
            ensure(ratio(&d) <= ratio(&bound), || {
                format!("n = {n}, m = {gap_len}: {d} > {bound}")
            })?;
            checks += 1;
        }
    }
    let solved = picard_solve(&s, &m, ix(0), &alpha, &exact(1, 1_000_000), 1000).map_err(|e| e.to_string())?;
    ensure(solved.status == SolveStatus::Converged, || {
        format!("solver status {:?}", solved.status)
    })?;
    let to_star = distance(&s, solved.point, PointRef::Star).unwrap();
    let final_bound = solved.final_bound().ok_or("no bound trace")?;
    ensure(ratio(&to_star) <= ratio(final_bound), || {
        format!("d(x_n, x*) = {to_star} > {final_bound}")
    })?;
    Ok(format!(
        "{checks} Cauchy bounds hold exactly; gaps are 1/2^floor(n/2); solver converged at {} after {} iterations",
        s.label(solved.point),
        solved.iterations
    ))
}

fn perimeter_decay() -> Outcome {
    let (s, m) = chain();
    let p = perimeter_sequence(&s, &m, ix(0), 41).map_err(|e| e.to_string())?;
    ensure(p.len() == 42, || format!("only {} perimeters", p.len()))?;
    let alpha = exact(7, 8);
    for k in 0..=40 {
        let scaled = alpha.mul(&p[k]).unwrap();
        ensure(ratio(&p[k + 1]) <= ratio(&scaled), || {
            format!("p_{} = {} > 7/8 p_{k}", k + 1, p[k + 1])
        })?;
        ensure(ratio(&p[k + 1]) < ratio(&p[k]), || {
            format!("p_{} not below p_{k}", k + 1)
        })?;
    }
    Ok(format!("p_0 = {} > ... > p_41 = {}, each step <= 7/8", p[0], p[41]))
}

fn contractions_pass_perimeter_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let (mut accepted, mut drawn) = (0, 0);
    while accepted < 1000 {
        drawn += 1;
        let n = rng.gen_range(3..=12);
        let s = random_metric(&mut rng, n, 20);
        ensure(verify_metric_axioms(&s, None).unwrap().passed(), || {
            "generated space is not metric".into()
        })?;
        let m = random_map(&mut rng, n);
        let (l, _) = lipschitz_coefficient(&s, &m, None).map_err(|e| e.to_string())?;
        if ratio(&l) >= &Ratio::ONE {
            continue;
        }
        accepted += 1;
        let (alpha, _) = perimeter_contraction_coefficient(&s, &m, None).map_err(|e| e.to_string())?;
        ensure(ratio(&alpha) <= ratio(&l), || {
            format!("space #{accepted}: alpha* = {alpha} > L = {l}")
        })?;
        ensure(find_period_two_violation(&s, &m, None).unwrap().is_none(), || {
            format!("space #{accepted}: period-two violation under a contraction")
        })?;
        let fixed = fixed_points(&s, &m, None).unwrap();
        ensure(fixed.len() == 1, || {
            format!("space #{accepted}: {} fixed points", fixed.len())
        })?;
        for x0 in 0..n {
            let out = picard_solve(&s, &m, ix(x0), &l, &exact(1, 2), n).map_err(|e| e.to_string())?;
            ensure(
                out.status == SolveStatus::ReachedExactFixedPoint && out.iterations <= n && out.point == fixed[0],
                || {
                    format!(
                        "space #{accepted}, start {x0}: {:?} after {}",
                        out.status, out.iterations
                    )
                },
            )?;
        }
    }
    Ok(format!(
        "{accepted} contractions (from {drawn} draws): alpha* <= L, no period two, unique fixed point reached"
    ))
}

fn at_most_two() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let (mut accepted, mut drawn, mut with_two) = (0, 0, 0);
    while accepted < 1000 {
        drawn += 1;
        let n = rng.gen_range(3..=12);
        let s = random_metric(&mut rng, n, 20);
        let m = random_map(&mut rng, n);
        let r = classify(&s, &m, None).map_err(|e| e.to_string())?;
        if !r.is_perimeter_contracting {
            continue;
        }
        accepted += 1;
        ensure(r.fixed_point_count() <= 2, || {
            format!("pair #{accepted}: {} fixed points", r.fixed_point_count())
        })?;
        if r.fixed_point_count() == 2 {
            with_two += 1;
        }
    }
    Ok(format!(
        "{accepted} perimeter-contracting pairs (from {drawn} draws), max 2 fixed points; {with_two} had exactly 2"
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for case in 0..100 {
        let n = rng.gen_range(3..=12);
        let s = random_metric(&mut rng, n, 20);
        let m = random_map(&mut rng, n);
        let fast = perimeter_contraction_coefficient(&s, &m, None).map_err(|e| e.to_string())?;
        let slow = oracle_alpha(&s, &m);
        ensure(fast == slow, || format!("case {case}: {fast:?} vs oracle {slow:?}"))?;
    }
    Ok("100 random spaces: value and witness identical to the reverse-order enumeration".into())
}

fn continuity_modulus() -> Outcome {
    let (s, m) = chain();
    let mut notes = Vec::new();
    for eps in [exact(1, 10), exact(1, 100)] {
        let out = continuity_modulus_check(&s, &m, PointRef::Star, &eps, &exact(7, 8), Some(WINDOW))
            .map_err(|e| e.to_string())?;
        match out {
            ContinuityOutcome::Pass { delta, checked } => {
                notes.push(format!("eps {eps}: delta {delta}, {checked} points"))
            }
            other => return Err(format!("eps {eps}: {other:?}")),
        }
    }
    Ok(notes.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("AC1 paper-space certification", paper_space_certification),
        ("AC2 non-contraction", non_contraction),
        ("AC3 three-point examples", three_point_examples),
        ("AC4 solver bounds", solver_bounds),
        ("AC5 perimeter decay", perimeter_decay),
        (
            "AC6 contractions pass perimeter check",
            contractions_pass_perimeter_check,
        ),
        ("AC7 at most two fixed points", at_most_two),
        ("AC8 oracle equivalence", oracle_equivalence),
        ("AC9 continuity modulus", continuity_modulus),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
