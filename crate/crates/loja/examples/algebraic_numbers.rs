//! Exact arithmetic in algebraic extension towers, with certified complex
//! enclosures on demand.
//!
//! Run with: cargo run --example algebraic_numbers

use loja::rational::{rat, rat_frac, rational_to_string};
use loja::tower::{tower_extend, AlgebraicNumber, FieldTower, UniPolyExt};

fn main() {
    let q = FieldTower::rationals();

    // adjoin a root of t^2 - 2, then a root of t^2 - 3 on top
    let m1 = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-2)]);
    let (t1, _sqrt2) = tower_extend(&q, &m1).unwrap();
    let m2 = UniPolyExt::new(
        &t1,
        vec![
            AlgebraicNumber::from_rational(&t1, rat(1)),
            AlgebraicNumber::from_rational(&t1, rat(0)),
            AlgebraicNumber::from_rational(&t1, rat(-3)),
        ],
    );
    let (t2, sqrt3) = tower_extend(&t1, &m2).unwrap();
    println!("tower degree over Q: {}", t2.total_degree());

    // the chosen root is deterministic: smallest center in the (re, im)
    // lexicographic order, here -sqrt(3)
    let e = sqrt3.enclosure(80);
    println!(
        "chosen root of t^2 - 3: {:.12} (radius <= 2^-80: {})",
        e.center_f64().re,
        e.rad_f64() <= 2f64.powi(-80)
    );

    // exact zero test: sqrt3^2 - 3 == 0 from the coordinates alone
    let three = AlgebraicNumber::from_rational(&t2, rat(3));
    let z = sqrt3.mul(&sqrt3).unwrap().sub(&three).unwrap();
    println!("(root of t^2-3)^2 - 3 is zero: {}", z.is_zero());

    // a nonzero combination: sqrt3 + 1/2, with its exact coordinates
    let x = sqrt3
        .add(&AlgebraicNumber::from_rational(&t2, rat_frac(1, 2)))
        .unwrap();
    println!(
        "sqrt3 + 1/2: coordinates [{}], enclosure center {:.6}",
        x.coordinates()
            .iter()
            .map(rational_to_string)
            .collect::<Vec<_>>()
            .join(", "),
        x.enclosure(40).center_f64().re
    );
}
