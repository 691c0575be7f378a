//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use loja::ball::CBall;
use loja::estimator::{estimate_exponent, lemma2_check, sample_s_min, RadiusLadder};
use loja::exponent::{lojasiewicz_exponent, DegenerateCase, ExponentReport, MappingSpec};
use loja::multipoly::MultiPoly;
use loja::parser::parse_poly;
use loja::puiseux::compose_deg;
use loja::rational::{rat, rat_frac, rational_to_f64, Rational};
use loja::rng::Rng;

fn mapping(srcs: &[&str]) -> MappingSpec {
    MappingSpec::new(
        srcs.iter()
            .map(|s| parse_poly(s, &["x", "y"]).unwrap())
            .collect(),
    )
    .unwrap()
}

/// Random sparse component of total degree <= max_deg.
fn random_poly(rng: &mut Rng, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(&["x", "y"]);
    let terms = rng.int(2, 4);
    for _ in 0..terms {
        let e0 = rng.int(0, max_deg as i64) as u32;
        let e1 = rng.int(0, (max_deg - e0) as i64) as u32;
        let c = rng.int(-5, 5);
        if c != 0 {
            p = p
                .add(&MultiPoly::from_terms(
                    &["x", "y"],
                    [(vec![e0, e1], rat(c))],
                ))
                .unwrap();
        }
    }
    p
}

fn random_map(rng: &mut Rng, max_deg: u32) -> MappingSpec {
    let m = rng.int(1, 3) as usize;
    let comps: Vec<MultiPoly> = (0..m).map(|_| random_poly(rng, max_deg)).collect();
    match MappingSpec::new(comps) {
        Ok(f) => f,
        Err(_) => mapping(&["x", "y"]),
    }
}

/// Numeric growth exponent of |F(Phi(t))| against |Phi(t)| measured at
/// |t| = 1e4 along the witness branch: the log-log slope between 1e4 and
/// 1e5, which is the finite-radius estimate of the exponent in
/// ||F(Phi(t))|| ~ ||Phi(t)||^L (the one-point ratio log|F|/log|Phi| keeps
/// the multiplicative constant, which only dies in the limit). Evaluation
/// uses certified ball arithmetic deep enough that the truncated tail
/// cannot disturb the leading magnitudes.
fn witness_ratio(f: &MappingSpec, rep: &ExponentReport) -> Option<f64> {
    let w = rep.witness?;
    let v = &rep.branch_verdicts[w];
    let q = v.deg_compose?;
    let m = rep.transform.as_ref()?;
    let mv = vec![
        vec![m[0][0].clone(), m[0][1].clone()],
        vec![m[1][0].clone(), m[1][1].clone()],
    ];
    let comps_m: Vec<MultiPoly> = f
        .components()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.linear_change(&mv).unwrap())
        .collect();
    let deg_f = comps_m
        .iter()
        .filter_map(|c| c.total_degree())
        .max()
        .unwrap_or(0) as i64;
    // headroom below the leading magnitude 1e5^q even with intermediate
    // terms as large as 1e5^(deg_f * deg_phi); escalate if it falls short
    let spread = (deg_f * v.deg_phi - q).unsigned_abs() as u32 + q.unsigned_abs() as u32;
    let mut depth = q - deg_f * v.deg_phi - 12;
    let mut prec = 192 + 18 * spread;
    'attempt: for _ in 0..5 {
        let branch = v.branch.extended_to(depth);
        let mut logs: Vec<(f64, f64)> = Vec::new();
        for t in [rat(10_000), rat(100_000)] {
            let (x, y) = branch.eval_point_ball(&t, prec);
            let phi_mag = rational_to_f64(&x.abs_upper()).max(rational_to_f64(&y.abs_upper()));
            let mut best: Option<f64> = None;
            for c in &comps_m {
                let val = c.eval_ball(&[x.clone(), y.clone()], prec);
                let lo = rational_to_f64(&val.abs_lower());
                let hi = rational_to_f64(&val.abs_upper());
                if hi == 0.0 {
                    continue; // component vanishes identically on the branch
                }
                if lo <= 0.0 || hi / lo > 1.5 {
                    prec *= 2;
                    depth = depth * 2 - 8;
                    continue 'attempt;
                }
                let mag = (lo * hi).sqrt();
                best = Some(best.map_or(mag, |b: f64| b.max(mag)));
            }
            logs.push((phi_mag.ln(), best?.ln()));
        }
        return Some((logs[1].1 - logs[0].1) / (logs[1].0 - logs[0].0));
    }
    None
}

#[test]
fn criterion_1_exact_golden_cases() {
    let start = std::time::Instant::now();
    let cases: [(&[&str], Option<Rational>); 5] = [
        (&["x", "y"], Some(rat(1))),
        (&["x", "x*y - 1"], Some(rat(-1))),
        (&["y", "x - y^3"], Some(rat_frac(1, 3))),
        (&["x", "x"], None),
        (&["7"], Some(rat(0))),
    ];
    for (srcs, expected) in &cases {
        let t0 = std::time::Instant::now();
        let rep = lojasiewicz_exponent(&mapping(srcs), 0).unwrap();
        assert_eq!(&rep.exponent, expected, "map {srcs:?}");
        assert!(
            t0.elapsed().as_secs_f64() < 5.0,
            "map {srcs:?} exceeded 5 s"
        );
    }
    println!(
        "criterion 1: PASS - five golden exponents exact ({} ms)",
        start.elapsed().as_millis()
    );
}

#[test]
fn criterion_2_rationality_and_attainment() {
    let start = std::time::Instant::now();
    let mut rng = Rng::new(0xACC2);
    let mut finite = 0;
    let mut attained = 0;
    for i in 0..50 {
        let f = random_map(&mut rng, 4);
        let rep = lojasiewicz_exponent(&f, i).unwrap();
        let e = match &rep.exponent {
            Some(e) => e.clone(),
            None => continue,
        };
        finite += 1;
        if rep.degenerate_case != DegenerateCase::None {
            continue; // no branches to attain on
        }
        // denominator divides some reported deg Phi
        let den: i64 = e.denom().to_string().parse().unwrap();
        assert!(
            rep.branch_verdicts.iter().any(|v| v.deg_phi % den == 0),
            "map {i}: denominator {den} divides no deg_phi"
        );
        // attainment along the witness branch at |t| = 1e4
        let ratio = witness_ratio(&f, &rep).unwrap_or_else(|| {
            panic!(
                "map {i}: witness evaluation failed: comps {:?} exponent {:?}",
                f.components()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>(),
                e.to_string()
            )
        });
        let target = rational_to_f64(&e);
        assert!(
            (ratio - target).abs() <= 0.05,
            "map {i}: ratio {ratio} vs exponent {target}"
        );
        attained += 1;
    }
    assert!(
        finite >= 10,
        "suite too degenerate: {finite} finite exponents"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 600, "criterion 2 exceeded 10 minutes");
    println!(
        "criterion 2: PASS - {finite} finite exponents rational, {attained} witnesses attained within 0.05 ({} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_3_seed_invariance() {
    let start = std::time::Instant::now();
    let goldens: Vec<MappingSpec> = vec![
        mapping(&["x", "y"]),
        mapping(&["x", "x*y - 1"]),
        mapping(&["y", "x - y^3"]),
        mapping(&["x", "x"]),
        mapping(&["7"]),
    ];
    let mut rng = Rng::new(0xACC3);
    let randoms: Vec<MappingSpec> = (0..20).map(|_| random_map(&mut rng, 3)).collect();
    for (i, f) in goldens.iter().chain(randoms.iter()).enumerate() {
        let base = lojasiewicz_exponent(f, 0).unwrap().exponent;
        for seed in 1..5u64 {
            let e = lojasiewicz_exponent(f, seed).unwrap().exponent;
            assert_eq!(e, base, "map {i} seed {seed}");
        }
    }
    println!(
        "criterion 3: PASS - exponents agree across 5 seeds on 25 maps ({} s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_4_estimator_agreement() {
    let start = std::time::Instant::now();
    let cases: [(&[&str], f64); 3] = [
        (&["x", "y"], 1.0),
        (&["y", "x - y^3"], 1.0 / 3.0),
        (&["x", "x*y - 1"], -1.0),
    ];
    for (srcs, exact) in &cases {
        let t0 = std::time::Instant::now();
        let f = mapping(srcs);
        let ladder = RadiusLadder {
            seed: 11,
            ..Default::default()
        };
        let rep = estimate_exponent(&f, &ladder).unwrap();
        assert!(
            (rep.restricted.slope - exact).abs() <= 0.05,
            "map {srcs:?}: restricted slope {} vs exact {exact}",
            rep.restricted.slope
        );
        assert!(
            rep.agreement <= 0.05,
            "map {srcs:?}: slopes disagree by {}",
            rep.agreement
        );
        assert!(
            t0.elapsed().as_secs() < 120,
            "map {srcs:?} exceeded 2 minutes"
        );
    }
    // the S-empty golden has no restricted samples; the full slope is flat
    let constant = mapping(&["7"]);
    let ladder = RadiusLadder {
        seed: 11,
        ..Default::default()
    };
    let rep = estimate_exponent(&constant, &ladder).unwrap();
    assert!(rep.restricted.points.is_empty());
    assert!(rep.full.slope.abs() <= 0.05);
    println!(
        "criterion 4: PASS - estimator slopes within 0.05 of exact values ({} s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_5_lemma2_property_suite() {
    let start = std::time::Instant::now();
    let mut rng = Rng::new(0xACC5);
    let mut done = 0;
    while done < 1000 {
        let m = rng.int(1, 3) as usize;
        let comps: Vec<Vec<Rational>> = (0..m)
            .map(|_| {
                let deg = rng.int(0, 6) as usize;
                let mut c: Vec<Rational> = (0..=deg).map(|_| rat(rng.int(-10, 10))).collect();
                while c.last().map_or(false, |x| x == &rat(0)) {
                    c.pop();
                }
                if c.is_empty() {
                    c.push(rat(1));
                }
                c
            })
            .collect();
        let product_deg: usize = comps.iter().map(|c| c.len() - 1).sum();
        if product_deg == 0 {
            continue;
        }
        let (holds, worst) = lemma2_check(&comps, 40, done as u64).unwrap();
        assert!(
            holds,
            "violation on instance {done}: worst margin {worst}, components {comps:?}"
        );
        done += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion 5 exceeded 1 minute");
    println!(
        "criterion 5: PASS - 1000 instances, zero violations ({} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_6_puiseux_structural_suite() {
    let start = std::time::Instant::now();
    let mut rng = Rng::new(0xACC6);
    let mut done = 0;
    while done < 30 {
        let p = random_poly(&mut rng, 6);
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let sq = loja::gcd::squarefree_part(&p).unwrap();
        if sq.is_constant() {
            continue;
        }
        let (_, h) = loja::puiseux::genericize(&sq, done as u64).unwrap();
        let degs = h.degrees();
        let ambient = degs.total.unwrap();
        let dy = degs.per_var[1].unwrap() as usize;
        let branches = loja::puiseux::expand_branches(&h).unwrap();

        // ramification sum
        let total: usize = branches
            .iter()
            .map(|b| b.ramification() as usize * b.conjugacy_size())
            .sum();
        assert_eq!(total, dy, "curve {done}: ramification sum");

        for b in &branches {
            // in degree-regular coordinates deg Phi equals the ramification
            assert_eq!(b.deg_phi(), b.ramification() as i64, "curve {done}");
            // substitution annihilates h exactly
            let r = compose_deg(&h, b, ambient).unwrap();
            assert!(
                r.iter().all(|(_, d)| d.is_none()),
                "curve {done}: branch does not annihilate its curve"
            );
            // composition degree bounds for finite compositions
            for _ in 0..2 {
                let g = random_poly(&mut rng, 3);
                if g.is_zero() {
                    continue;
                }
                let dg = g.total_degree().unwrap() as i64;
                for (sub, d) in compose_deg(&g, b, ambient).unwrap() {
                    if let Some(d) = d {
                        let phi = sub.deg_phi();
                        assert!(
                            dg * (phi - ambient as i64) <= d && d <= dg * phi,
                            "curve {done}: degree {d} outside [{}, {}]",
                            dg * (phi - ambient as i64),
                            dg * phi
                        );
                    }
                }
            }
        }
        done += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 300, "criterion 6 exceeded 5 minutes");
    println!(
        "criterion 6: PASS - 30 curves: ramification sums, annihilation, degree bounds ({} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_7_properness_verdicts() {
    let start = std::time::Instant::now();
    let mut rng = Rng::new(0xACC7);
    let goldens: Vec<MappingSpec> = vec![
        mapping(&["x", "y"]),
        mapping(&["x", "x*y - 1"]),
        mapping(&["y", "x - y^3"]),
        mapping(&["x", "x"]),
        mapping(&["7"]),
    ];
    let randoms: Vec<MappingSpec> = (0..25).map(|_| random_map(&mut rng, 3)).collect();
    let mut escapes = 0;
    for (i, f) in goldens.iter().chain(randoms.iter()).enumerate() {
        let rep = lojasiewicz_exponent(f, 0).unwrap();
        let positive = rep.exponent.as_ref().map_or(false, |e| e > &rat(0));
        assert_eq!(rep.proper, positive, "map {i}: proper vs sign of exponent");

        // escape search: declared non-proper with finite exponent <= 0 must
        // exhibit an unbounded sequence on S with bounded |F|
        if !rep.proper && rep.exponent.is_some() && rep.degenerate_case == DegenerateCase::None {
            let lo = sample_s_min(f, 1e2, 24, 7 + i as u64).unwrap();
            let hi = sample_s_min(f, 1e6, 24, 7 + i as u64).unwrap();
            assert!(
                hi.is_finite() && hi <= 3.0 * lo.max(1.0),
                "map {i}: no escape witness (min at 1e2 = {lo}, at 1e6 = {hi})"
            );
            escapes += 1;
        }
    }
    println!(
        "criterion 7: PASS - properness matches sign on 30 maps, {escapes} escape witnesses found ({} s)",
        start.elapsed().as_secs_f64()
    );
}
