//! Properness of polynomial mappings, decided from the sign of the
//! Lojasiewicz exponent at infinity.
//!
//! Run with: cargo run --example properness

use loja::exponent::{is_proper, MappingSpec};
use loja::parser::parse_poly;
use loja::rational::rational_to_string;

fn main() {
    let maps = [
        vec!["x", "y"],
        vec!["x + y", "x - y"],
        vec!["x", "x*y - 1"],
        vec!["x^2", "y^2 + x"],
        vec!["x*y", "x + y"],
    ];
    for srcs in &maps {
        let comps = srcs
            .iter()
            .map(|s| parse_poly(s, &["x", "y"]).unwrap())
            .collect();
        let f = MappingSpec::new(comps).unwrap();
        let (proper, exponent) = is_proper(&f, 0).unwrap();
        let e = exponent
            .map(|e| rational_to_string(&e))
            .unwrap_or_else(|| "-inf".into());
        println!(
            "F = ({}): {} (L_inf = {e})",
            srcs.join(", "),
            if proper { "proper" } else { "not proper" }
        );
    }
}
