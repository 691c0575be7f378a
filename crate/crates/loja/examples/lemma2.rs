//! Probing the root-gap inequality for univariate polynomial mappings:
//! |Phi(t)| >= 2^(-deg Phi) * min over zeros tau of the product of |Phi(tau)|.
//!
//! Run with: cargo run --example lemma2

use loja::estimator::lemma2_check;
use loja::rational::rat;

fn main() {
    // (t, t - 1): the bound 1/2 is attained exactly at t = 1/2
    let tight = vec![vec![rat(0), rat(1)], vec![rat(-1), rat(1)]];
    let (holds, margin) = lemma2_check(&tight, 500, 1).unwrap();
    println!("Phi = (t, t-1):       holds = {holds}, worst margin = {margin:.6}");

    // a double root makes the right side vanish: trivially true
    let degen = vec![vec![rat(0), rat(0), rat(1)]];
    let (holds, margin) = lemma2_check(&degen, 100, 1).unwrap();
    println!("Phi = (t^2):          holds = {holds}, worst margin = {margin}");

    // something less structured
    let mixed = vec![
        vec![rat(-6), rat(1), rat(3), rat(1)],
        vec![rat(2), rat(-5), rat(1)],
    ];
    let (holds, margin) = lemma2_check(&mixed, 1000, 1).unwrap();
    println!("Phi = (cubic, quad):  holds = {holds}, worst margin = {margin:.6}");
}
