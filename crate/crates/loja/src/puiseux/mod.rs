//! Branches at infinity of plane curves: Newton-Puiseux expansion in
//! descending powers, degree-regular coordinate changes, and exact degrees
//! of compositions along branches.

mod compose;
mod expand;

pub use compose::{compose_deg, compose_deg_many};
pub use expand::{expand_branches, Branch};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::{rat, Rational};
use crate::rng::Rng;
use crate::tower::{FieldTower, UniPolyExt};

/// Outcome of the degree-regularizing coordinate change.
#[derive(Clone, Debug)]
pub struct GenericizeReport {
    /// z = M w substitution applied to reach degree-regular coordinates.
    pub transform: [[Rational; 2]; 2],
    pub attempts: u32,
    /// Per-variable degrees after the transform (all equal to the total).
    pub regular_degrees: Vec<Option<u32>>,
    /// Numeric comparability estimates (C, D): along every branch and each
    /// coordinate, |z_i| <= C |z_i'| once |z_i'| > D. Estimates only.
    pub comparability_constants: Option<(Rational, Rational)>,
}

/// Find an invertible linear change of coordinates making the total degree
/// equal to the degree in each variable. The identity is tried first; then
/// deterministic pseudo-random integer matrices drawn from `seed`, with
/// entry range doubling as attempts fail.
pub fn genericize(f: &MultiPoly, seed: u64) -> Result<(GenericizeReport, MultiPoly)> {
    if f.num_vars() != 2 {
        return Err(Error::NotBivariate);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Err(Error::BadParameter(
            "constant polynomial cannot be regularized".into(),
        ));
    }
    let mut rng = Rng::new(seed ^ 0x6c6f6a61); // distinct stream per seed
    for attempt in 0u32..4096 {
        let m: [[Rational; 2]; 2] = if attempt == 0 {
            [[rat(1), rat(0)], [rat(0), rat(1)]]
        } else {
            let h = 2i64 << (attempt / 8).min(16);
            [
                [rat(rng.int(-h, h)), rat(rng.int(-h, h))],
                [rat(rng.int(-h, h)), rat(rng.int(-h, h))],
            ]
        };
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            continue;
        }
        let mv = vec![
            vec![m[0][0].clone(), m[0][1].clone()],
            vec![m[1][0].clone(), m[1][1].clone()],
        ];
        let g = f.linear_change(&mv)?;
        let d = g.degrees();
        if d.total.is_some() && d.per_var.iter().all(|pv| *pv == d.total) {
            let report = GenericizeReport {
                transform: m,
                attempts: attempt + 1,
                regular_degrees: d.per_var.clone(),
                comparability_constants: None,
            };
            return Ok((report, g));
        }
    }
    unreachable!("genericization is a generic property; the retry loop cannot exhaust")
}

/// Support and edge data of the Newton polygon governing expansions at
/// infinity (first expansion level, over Q).
#[derive(Clone, Debug)]
pub struct NewtonPolygonInf {
    /// Support points (i, j) of the defining polynomial.
    pub support: Vec<(u32, u32)>,
    /// Edges as (slope, edge polynomial): a place with y ~ c x^gamma exists
    /// exactly when gamma is an edge slope and c a nonzero root of its edge
    /// polynomial.
    pub edges: Vec<(Rational, UniPolyExt)>,
}

/// First-level polygon of the curve, for inspection and reporting.
pub fn newton_polygon_infinity(h: &MultiPoly) -> Result<NewtonPolygonInf> {
    if h.num_vars() != 2 {
        return Err(Error::NotBivariate);
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let support: Vec<(u32, u32)> = h.terms().map(|(m, _)| (m.0[0], m.0[1])).collect();
    let dx = h.degrees().per_var[0].unwrap_or(0) as i64;
    // points (j, dx - i) mirror the flip used by the expansion
    let mut best: std::collections::BTreeMap<i64, i64> = std::collections::BTreeMap::new();
    for (i, j) in &support {
        let o = dx - *i as i64;
        best.entry(*j as i64)
            .and_modify(|v| *v = (*v).min(o))
            .or_insert(o);
    }
    let pts: Vec<(i64, i64)> = best.iter().map(|(j, o)| (*j, *o)).collect();
    // lower hull
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let q0 = FieldTower::rationals();
    let mut edges = Vec::new();
    for win in hull.windows(2) {
        let (j1, o1) = win[0];
        let (j2, o2) = win[1];
        // flipped orders: y ~ c u^kappa with kappa = (o1 - o2)/(j2 - j1);
        // in powers of x the slope is gamma = -kappa
        let gamma = Rational::new((o2 - o1).into(), (j2 - j1).into());
        let mut coeffs_high: Vec<crate::tower::AlgebraicNumber> = Vec::new();
        for j in (j1..=j2).rev() {
            // the edge line in flipped coordinates
            let o = Rational::new(
                (o1 * (j2 - j1) - (o1 - o2) * (j - j1)).into(),
                (j2 - j1).into(),
            );
            let c = if o.is_integer() {
                let i = dx - o.to_integer().to_string().parse::<i64>().unwrap();
                h.terms()
                    .find(|(m, _)| m.0[0] as i64 == i && m.0[1] as i64 == j)
                    .map(|(_, c)| c.clone())
                    .unwrap_or_else(Rational::zero)
            } else {
                Rational::zero()
            };
            coeffs_high.push(crate::tower::AlgebraicNumber::from_rational(&q0, c));
        }
        edges.push((gamma, UniPolyExt::new(&q0, coeffs_high)));
    }
    Ok(NewtonPolygonInf { support, edges })
}

/// Same branch with the series guaranteed exact for all exponents above
/// `target`; earlier terms are unchanged and re-extending to an already
/// guaranteed depth is a no-op.
pub fn extend_branch(b: &Branch, target: i64) -> Branch {
    b.extended_to(target)
}

/// Numeric comparability estimates (C, D) over a branch family: C bounds
/// the coordinate ratios |y|/|x| and |x|/|y| along every branch for
/// |t| in [1e3, 1e5], with a 5 percent margin; D is the sampling floor.
pub fn comparability_constants(branches: &[Branch]) -> Option<(Rational, Rational)> {
    let mut worst: f64 = 1.0;
    for b in branches {
        for t in [1.0e3_f64, 1.0e5] {
            let tr = Rational::from_float(t)?;
            let (x, y) = b.eval_point_ball(&tr, 64);
            let xa = x.center_f64().norm().max(1e-300);
            let ya = y.center_f64().norm().max(1e-300);
            worst = worst.max(ya / xa).max(xa / ya);
        }
    }
    let c = Rational::from_float(worst * 1.05)?;
    Some((c, rat(1000)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::rational::rat_frac;
    use crate::rational::Rational;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn genericize_line() {
        let (rep, g) = genericize(&p("x"), 7).unwrap();
        let d = g.degrees();
        assert_eq!(d.total, Some(1));
        assert_eq!(d.per_var, vec![Some(1), Some(1)]);
        assert!(rep.attempts >= 1);
    }

    #[test]
    fn genericize_identity_when_regular() {
        let (rep, g) = genericize(&p("x^2 + y^2 + x*y"), 3).unwrap();
        assert_eq!(rep.attempts, 1);
        assert_eq!(rep.transform, [[rat(1), rat(0)], [rat(0), rat(1)]]);
        assert_eq!(g, p("x^2 + y^2 + x*y"));
    }

    #[test]
    fn genericize_random_suite() {
        let mut rng = crate::rng::Rng::new(99);
        for round in 0..100 {
            let mut q = MultiPoly::zero(&["x", "y"]);
            for _ in 0..4 {
                let e0 = rng.int(0, 3) as u32;
                let e1 = rng.int(0, 3) as u32;
                let c = rng.int(-4, 4);
                if c != 0 {
                    q = q
                        .add(&MultiPoly::from_terms(
                            &["x", "y"],
                            [(vec![e0, e1], rat(c))],
                        ))
                        .unwrap();
                }
            }
            if q.is_zero() || q.is_constant() {
                continue;
            }
            let (_, g) = genericize(&q, round).unwrap();
            let d = g.degrees();
            assert!(d.per_var.iter().all(|pv| *pv == d.total), "round {round}");
        }
    }

    #[test]
    fn cusp_branch() {
        // y^2 - x^3: one place, x = t^2, y = +-t^3 (one class, conj 1)
        let h = p("y^2 - x^3");
        let branches = expand_branches(&h).unwrap();
        assert_eq!(branches.len(), 1);
        let b = &branches[0];
        assert_eq!(b.ramification(), 2);
        assert_eq!(b.conjugacy_size(), 1);
        assert_eq!(b.deg_phi(), 3);
        let series = b.series();
        assert_eq!(series.len(), 1);
        assert_eq!(series[0].0, 3);
        // coefficient squares to 1
        let c = &series[0].1;
        let c2 = c.mul(c).unwrap();
        let one = crate::tower::AlgebraicNumber::from_rational(c.tower(), rat(1));
        assert!(c2.sub(&one).unwrap().is_zero());
        // the series is exactly terminated
        assert_eq!(b.truncation_exponent(), None);
        // ramification sum = deg_y h
        assert_eq!(b.ramification() as usize * b.conjugacy_size(), 2);
    }

    #[test]
    fn hyperbola_after_genericization() {
        // xy - 1 needs a coordinate change; then two places of deg_phi 1
        let (_, h) = genericize(&p("x*y - 1"), 0).unwrap();
        let branches = expand_branches(&h).unwrap();
        let total: usize = branches
            .iter()
            .map(|b| b.ramification() as usize * b.conjugacy_size())
            .sum();
        assert_eq!(total, 2);
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert_eq!(b.deg_phi(), 1);
        }
    }

    #[test]
    fn conic_binomial_series() {
        // y^2 - x^2 - 1: two branches y = +-(t + 1/2 t^-1 - 1/8 t^-3 + ...)
        let h = p("y^2 - x^2 - 1");
        let branches = expand_branches(&h).unwrap();
        assert_eq!(branches.len(), 2);
        let expected = [
            (1i64, rat(1)),
            (-1, rat_frac(1, 2)),
            (-3, rat_frac(-1, 8)),
            (-5, rat_frac(1, 16)),
        ];
        for b in &branches {
            assert_eq!(b.ramification(), 1);
            assert_eq!(b.conjugacy_size(), 1);
            let b = b.extended_to(-9);
            let series = b.series();
            assert!(series.len() >= 4, "series {:?}", series);
            // sign of the leading coefficient (+1 or -1 branch)
            let lead = &series[0].1;
            let sgn = if lead.enclosure(30).center_f64().re > 0.0 {
                1
            } else {
                -1
            };
            for (i, (e, c)) in expected.iter().enumerate() {
                assert_eq!(series[i].0, *e);
                let expect_c = if sgn > 0 { c.clone() } else { -c.clone() };
                let want =
                    crate::tower::AlgebraicNumber::from_rational(series[i].1.tower(), expect_c);
                assert!(series[i].1.sub(&want).unwrap().is_zero(), "term {i}");
            }
        }
    }

    #[test]
    fn line_y_equals_zero() {
        // y = 0 is an exact branch of x*y - 0... use h = y directly
        let h = p("y");
        let branches = expand_branches(&h).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].ramification(), 1);
        assert!(branches[0].series().is_empty());
        assert_eq!(branches[0].truncation_exponent(), None);
        assert_eq!(branches[0].deg_phi(), 1);
    }

    #[test]
    fn compose_deg_spec_cases() {
        let h = p("y^2 - x^3");
        let branches = expand_branches(&h).unwrap();
        let b = &branches[0];
        // g = x on (t^2, t^3) -> 2
        let r = compose_deg(&p("x"), b, 3).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].1, Some(2));
        // g = h -> -inf
        let r = compose_deg(&p("y^2 - x^3"), b, 3).unwrap();
        assert_eq!(r[0].1, None);
        // g = h + 1 -> 0
        let r = compose_deg(&p("y^2 - x^3 + 1"), b, 3).unwrap();
        assert_eq!(r[0].1, Some(0));
        // g = y -> 3
        let r = compose_deg(&p("y"), b, 3).unwrap();
        assert_eq!(r[0].1, Some(3));
    }

    #[test]
    fn extension_is_idempotent_and_monotone() {
        let h = p("y^2 - x^2 - 1");
        let branches = expand_branches(&h).unwrap();
        let b = &branches[0];
        let b5 = b.extended_to(-5);
        let again = b5.extended_to(-5);
        assert_eq!(b5.series().len(), again.series().len());
        let deeper = b5.extended_to(-11);
        assert!(deeper.series().len() >= b5.series().len());
        // earlier terms unchanged
        for (t1, t2) in b5.series().iter().zip(deeper.series()) {
            assert_eq!(t1.0, t2.0);
            assert!(t1.1.sub(&t2.1).unwrap().is_zero());
        }
    }

    #[test]
    fn comparability_witness() {
        // along every branch of a degree-regular curve, the coordinate
        // ratios at |t| in {1e3, 1e4, 1e5} stay below the reported C
        let (_, h) = genericize(&p("x*y^2 - x + y - 3"), 5).unwrap();
        let branches = expand_branches(&h).unwrap();
        let (c, d) = comparability_constants(&branches).unwrap();
        let c = crate::rational::rational_to_f64(&c);
        assert!(c >= 1.0);
        assert!(crate::rational::rational_to_f64(&d) > 0.0);
        for b in &branches {
            for t in [1e3, 1e4, 1e5] {
                let tr = Rational::from_float(t).unwrap();
                let (x, y) = b.eval_point_ball(&tr, 64);
                let xa = x.center_f64().norm().max(1e-300);
                let ya = y.center_f64().norm().max(1e-300);
                assert!(ya / xa <= c && xa / ya <= c, "ratio exceeds C={c} at t={t}");
            }
        }
    }

    #[test]
    fn deterministic_across_runs() {
        // same seed: identical transform, branch order, and series
        let f = p("x*y^2 - x + y - 3");
        let (r1, g1) = genericize(&f, 42).unwrap();
        let (r2, g2) = genericize(&f, 42).unwrap();
        assert_eq!(r1.transform, r2.transform);
        assert_eq!(g1, g2);
        let b1 = expand_branches(&g1).unwrap();
        let b2 = expand_branches(&g2).unwrap();
        assert_eq!(b1.len(), b2.len());
        for (a, b) in b1.iter().zip(&b2) {
            assert_eq!(a.ramification(), b.ramification());
            assert_eq!(a.conjugacy_size(), b.conjugacy_size());
            let sa = a.series();
            let sb = b.series();
            assert_eq!(sa.len(), sb.len());
            for ((ea, ca), (eb, cb)) in sa.iter().zip(&sb) {
                assert_eq!(ea, eb);
                assert!(ca.sub(cb).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn merged_class_refines_under_composition() {
        // h = (y^2 - 2x^2)(y^2 - 3x^2) + y: the edge polynomial
        // (c^2-2)(c^2-3) is squarefree with no rational roots, so all four
        // places start as one class over a degree-4 product tower. The
        // composition with y^2 - 2x^2 tells the sqrt(2)-pair apart from the
        // sqrt(3)-pair: a zero divisor splits the tower and the class
        // refines, with different composition degrees on the two halves.
        let h = p("(y^2 - 2*x^2)*(y^2 - 3*x^2) + y");
        let d = h.degrees();
        assert_eq!(d.total, Some(4));
        assert_eq!(d.per_var, vec![Some(4), Some(4)]);
        let branches = expand_branches(&h).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].conjugacy_size(), 4);
        assert_eq!(branches[0].ramification(), 1);

        let g = p("y^2 - 2*x^2");
        let refined = compose_deg(&g, &branches[0], 4).unwrap();
        assert_eq!(refined.len(), 2, "class must split into two towers");
        let mut degs: Vec<Option<i64>> = refined.iter().map(|(_, d)| *d).collect();
        degs.sort();
        // sqrt(2)-pair: leading terms cancel, degree drops to -1;
        // sqrt(3)-pair: plain degree 2
        assert_eq!(degs, vec![Some(-1), Some(2)]);
        let total: usize = refined
            .iter()
            .map(|(b, _)| b.ramification() as usize * b.conjugacy_size())
            .sum();
        assert_eq!(total, 4, "refinement preserves the place count");
    }

    #[test]
    fn ramified_branch_with_extension_tower() {
        // y^4 - 2x^6: places y ~ c x^(3/2) with c^4 = 2; one class,
        // ramification 2 over a degree-2 root extension (conjugacy 2),
        // and deg Phi takes the series exponent 3 over p = 2
        let h = p("y^4 - 2*x^6");
        let branches = expand_branches(&h).unwrap();
        assert_eq!(branches.len(), 1);
        let b = &branches[0];
        assert_eq!(b.ramification(), 2);
        assert_eq!(b.conjugacy_size(), 2);
        assert_eq!(b.deg_phi(), 3);
        assert_eq!(
            b.ramification() as usize * b.conjugacy_size(),
            4,
            "all deg_y sheets accounted for"
        );
        // c^4 = 2 exactly
        let c = b.leading_coefficient().unwrap();
        let c4 = c.mul(&c).unwrap().mul(&c.mul(&c).unwrap()).unwrap();
        let two = crate::tower::AlgebraicNumber::from_rational(c.tower(), rat(2));
        assert!(c4.sub(&two).unwrap().is_zero());
        // the parametrization annihilates h and composes exactly elsewhere
        assert_eq!(compose_deg(&h, b, 6).unwrap()[0].1, None);
        assert_eq!(compose_deg(&p("y^2 - x^3"), b, 6).unwrap()[0].1, Some(6));
        assert_eq!(compose_deg(&p("x"), b, 6).unwrap()[0].1, Some(2));
    }

    #[test]
    fn vertical_places_rejected() {
        // xy - 1 has a place with bounded x; the expansion refuses it
        assert_eq!(
            expand_branches(&p("x*y - 1")).unwrap_err(),
            crate::error::Error::VerticalPlaces
        );
    }

    #[test]
    fn polygon_report() {
        let np = newton_polygon_infinity(&p("y^2 - x^3")).unwrap();
        assert_eq!(np.edges.len(), 1);
        assert_eq!(np.edges[0].0, rat_frac(3, 2));
        let np = newton_polygon_infinity(&p("x*y - 1")).unwrap();
        // slopes -1 (y ~ 1/x) ... a single edge from (0) to (1)
        assert_eq!(np.edges.len(), 1);
        assert_eq!(np.edges[0].0, rat(-1));
    }
}
