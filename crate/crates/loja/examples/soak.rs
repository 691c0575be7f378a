use loja::estimator::{estimate_exponent, RadiusLadder};
use loja::exponent::{lojasiewicz_exponent, DegenerateCase, MappingSpec};
use loja::multipoly::MultiPoly;
use loja::rational::{rat, rational_to_f64};
use loja::rng::Rng;
use std::time::Instant;

fn random_poly(rng: &mut Rng, max_deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(&["x", "y"]);
    let terms = rng.int(2, 5);
    for _ in 0..terms {
        let e0 = rng.int(0, max_deg as i64) as u32;
        let e1 = rng.int(0, (max_deg - e0) as i64) as u32;
        let c = rng.int(-7, 7);
        if c != 0 {
            p = p
                .add(&MultiPoly::from_terms(&["x", "y"], [(vec![e0, e1], rat(c))]))
                .unwrap();
        }
    }
    p
}

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let mut rng = Rng::new(0x50a1);
    let mut finite = 0;
    let mut crosschecked = 0;
    let mut worst_dev = 0.0f64;
    let mut slowest = (0.0f64, 0usize);
    for i in 0..n {
        let m = rng.int(1, 3) as usize;
        let comps: Vec<MultiPoly> = (0..m).map(|_| random_poly(&mut rng, 5)).collect();
        let f = match MappingSpec::new(comps) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let t0 = Instant::now();
        let rep = match lojasiewicz_exponent(&f, i as u64) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("map {i}: engine error {e}");
                continue;
            }
        };
        // seed invariance on a second seed
        let rep2 = lojasiewicz_exponent(&f, i as u64 + 1000).unwrap();
        assert_eq!(rep.exponent, rep2.exponent, "map {i}: seed variance!");
        let dt = t0.elapsed().as_secs_f64();
        if dt > slowest.0 {
            slowest = (dt, i);
        }
        if dt > 5.0 {
            eprintln!(
                "map {i}: {dt:.1}s, exponent {:?}, comps {:?}",
                rep.exponent.as_ref().map(|e| e.to_string()),
                f.components().iter().map(|c| c.to_string()).collect::<Vec<_>>()
            );
        }
        let e = match &rep.exponent {
            Some(e) => {
                finite += 1;
                rational_to_f64(e)
            }
            None => continue,
        };
        if rep.degenerate_case != DegenerateCase::None {
            continue;
        }
        // numeric cross-check on a short ladder, every few maps
        if i % 5 == 0 {
            let ladder = RadiusLadder {
                r0: 1e2,
                ratio: 10f64.sqrt(),
                count: 7,
                samples_per_radius: 24,
                seed: i as u64,
            };
            match estimate_exponent(&f, &ladder) {
                Ok(est) => {
                    if est.restricted.points.len() >= 4 {
                        let dev = (est.restricted.slope - e).abs();
                        if dev > worst_dev {
                            worst_dev = dev;
                        }
                        if dev > 0.1 {
                            eprintln!(
                                "map {i}: slope {} vs exact {e} (comps {:?})",
                                est.restricted.slope,
                                f.components().iter().map(|c| c.to_string()).collect::<Vec<_>>()
                            );
                        }
                        crosschecked += 1;
                    }
                }
                Err(err) => eprintln!("map {i}: estimator error {err}"),
            }
        }
        if i % 10 == 9 {
            eprintln!("... {} maps ({:.1}s worst so far)", i + 1, slowest.0);
        }
    }
    eprintln!(
        "soak done: {n} maps, {finite} finite, {crosschecked} cross-checked, worst slope deviation {worst_dev:.4}, slowest map {} at {:.2}s",
        slowest.1, slowest.0
    );
}
