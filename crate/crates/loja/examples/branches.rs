//! Puiseux branches at infinity of a plane curve: parametrizations
//! x = t^p, y = descending Laurent-Puiseux series.
//!
//! Run with: cargo run --example branches

use loja::gcd::squarefree_part;
use loja::parser::parse_poly;
use loja::puiseux::{expand_branches, genericize, newton_polygon_infinity};

fn main() {
    for src in ["y^2 - x^3", "y^2 - x^2 - 1", "x*y^2 - y + 1"] {
        let h = parse_poly(src, &["x", "y"]).unwrap();
        println!("curve: {src}");

        let np = newton_polygon_infinity(&h).unwrap();
        for (slope, edge) in &np.edges {
            println!(
                "  polygon edge: y ~ c x^({}), edge polynomial degree {}",
                slope,
                edge.degree().unwrap_or(0)
            );
        }

        // make every place head to x -> infinity, then expand
        let radical = squarefree_part(&h).unwrap();
        let (report, regular) = genericize(&radical, 0).unwrap();
        if report.attempts > 1 {
            println!("  (coordinates changed after {} attempts)", report.attempts);
        }
        let branches = expand_branches(&regular).unwrap();
        for (i, b) in branches.iter().enumerate() {
            let terms: Vec<String> = b
                .extended_to(b.deg_phi() - 8)
                .series()
                .iter()
                .map(|(e, c)| {
                    let z = c.enclosure(30).center_f64();
                    if z.im.abs() < 1e-9 {
                        format!("{:.4}*t^{}", z.re, e)
                    } else {
                        format!("({:.4}{:+.4}i)*t^{}", z.re, z.im, e)
                    }
                })
                .collect();
            let series = if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            };
            println!(
                "  branch {i}: x = t^{}, y = {series} ...  (class size {})",
                b.ramification(),
                b.conjugacy_size()
            );
        }
        println!();
    }
}
