//! Exact Lojasiewicz exponents at infinity, with per-branch certificates.
//!
//! Run with: cargo run --example exponent

use loja::exponent::{lojasiewicz_exponent, MappingSpec};
use loja::parser::parse_poly;
use loja::rational::rational_to_string;

fn main() {
    let maps = [
        vec!["x", "y"],
        vec!["y", "x - y^3"],
        vec!["x", "x*y - 1"],
        vec!["x^2 - y^3", "x*y"],
        vec!["x", "x"],
    ];
    for srcs in &maps {
        let comps = srcs
            .iter()
            .map(|s| parse_poly(s, &["x", "y"]).unwrap())
            .collect();
        let f = MappingSpec::new(comps).unwrap();
        let rep = lojasiewicz_exponent(&f, 0).unwrap();
        let exponent = rep
            .exponent
            .as_ref()
            .map(|e| rational_to_string(e))
            .unwrap_or_else(|| "-inf".into());
        println!("F = ({})", srcs.join(", "));
        println!("  L_inf = {exponent}, proper: {}", rep.proper);
        for (i, v) in rep.branch_verdicts.iter().enumerate() {
            let lambda = v
                .lambda
                .as_ref()
                .map(rational_to_string)
                .unwrap_or_else(|| "-inf".into());
            let mark = if rep.witness == Some(i) {
                "  <- witness"
            } else {
                ""
            };
            println!(
                "  branch {i}: ramification {}, deg_phi {}, lambda = {lambda}{mark}",
                v.branch.ramification(),
                v.deg_phi,
            );
        }
        println!();
    }
}
