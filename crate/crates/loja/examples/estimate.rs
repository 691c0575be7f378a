//! Numeric growth estimation: min |F| on polycylinder boundaries, on the
//! zero set S of the product of components and on the full boundary, with
//! log-log slope fits. For two variables the slopes can be compared with
//! the exact engine; the restricted and full slopes agree because the
//! exponent is attained on S.
//!
//! Run with: cargo run --release --example estimate

use loja::estimator::{estimate_exponent, RadiusLadder};
use loja::exponent::{lojasiewicz_exponent, MappingSpec};
use loja::parser::parse_poly;
use loja::rational::rational_to_f64;

fn main() {
    for srcs in [vec!["x", "y"], vec!["y", "x - y^3"], vec!["x", "x*y - 1"]] {
        let comps = srcs
            .iter()
            .map(|s| parse_poly(s, &["x", "y"]).unwrap())
            .collect();
        let f = MappingSpec::new(comps).unwrap();
        let exact = lojasiewicz_exponent(&f, 0)
            .unwrap()
            .exponent
            .map(|e| rational_to_f64(&e));
        let ladder = RadiusLadder::default();
        let rep = estimate_exponent(&f, &ladder).unwrap();
        println!("F = ({})", srcs.join(", "));
        println!("{:>12} {:>13} {:>13}", "R", "min_S", "min_full");
        for (r, ms, mf) in &rep.rows {
            println!("{r:>12.3e} {ms:>13.4e} {mf:>13.4e}");
        }
        println!(
            "  restricted slope {:.4}, full slope {:.4}, agreement {:.4}, exact {}",
            rep.restricted.slope,
            rep.full.slope,
            rep.agreement,
            exact
                .map(|e| format!("{e:.4}"))
                .unwrap_or_else(|| "-inf".into()),
        );
        println!();
    }
}
