//! Numeric growth estimation: minimum of |F| on polycylinder boundaries of
//! increasing radius, restricted to the zero set S of the product of
//! components and on the full boundary, with a log-log slope fit.
//!
//! The restricted minimum is the testable shadow of the reduction of the
//! exponent problem to S: for maps with two variables the fitted slope can
//! be checked against the exact engine, and restricted and full slopes
//! agree within sampling error. Nothing here is certified; reports carry
//! residuals, not claims.
//!
//! Norm everywhere: max of coordinate moduli.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exponent::MappingSpec;
use crate::rational::{rational_to_f64, Rational};
use crate::rng::Rng;

#[derive(Clone, Debug)]
pub struct RadiusLadder {
    pub r0: f64,
    pub ratio: f64,
    pub count: usize,
    pub samples_per_radius: usize,
    pub seed: u64,
}

impl Default for RadiusLadder {
    /// 1e2 to 1e6 in half-decade steps, 64 samples per radius.
    fn default() -> Self {
        RadiusLadder {
            r0: 1e2,
            ratio: 10f64.sqrt(),
            count: 9,
            samples_per_radius: 64,
            seed: 0,
        }
    }
}

impl RadiusLadder {
    fn validate(&self) -> Result<()> {
        if !(self.r0 > 0.0) {
            return Err(Error::BadParameter("ladder radius must be positive".into()));
        }
        if !(self.ratio > 1.0) {
            return Err(Error::BadParameter("ladder ratio must exceed 1".into()));
        }
        if self.count < 4 {
            return Err(Error::BadParameter("ladder needs at least 4 rungs".into()));
        }
        if self.samples_per_radius < 16 {
            return Err(Error::BadParameter(
                "need at least 16 samples per radius".into(),
            ));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count)
            .map(|i| self.r0 * self.ratio.powi(i as i32))
            .collect()
    }
}

/// Least-squares fit of log min|F| against log R.
#[derive(Clone, Debug)]
pub struct SlopeFit {
    /// (log R, log min |F|) for every rung that produced a finite minimum.
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// RMS residual in log space over the fitted tail.
    pub residual: f64,
    /// Number of trailing points the fit used.
    pub used_tail: usize,
}

#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub restricted: SlopeFit,
    pub full: SlopeFit,
    /// |restricted.slope - full.slope|.
    pub agreement: f64,
    /// (R, min on S, min on boundary) per rung, for external plotting.
    pub rows: Vec<(f64, f64, f64)>,
}

fn validate_map(f: &MappingSpec, r: f64, k: usize) -> Result<()> {
    if f.num_vars() < 2 {
        return Err(Error::BadParameter("need at least two variables".into()));
    }
    if !(r > 0.0) {
        return Err(Error::BadParameter("radius must be positive".into()));
    }
    if k < 16 {
        return Err(Error::BadParameter("need at least 16 samples".into()));
    }
    Ok(())
}

fn norm_max(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn eval_map(f: &MappingSpec, z: &[Complex64]) -> f64 {
    let vals: Vec<Complex64> = f.components().iter().map(|c| c.eval_complex(z)).collect();
    norm_max(&vals)
}

/// Roots of a univariate slice for sampling: exact zero roots are deflated
/// before iterating (they are common and ruin the conditioning at large
/// radii), and every approximate root gets a couple of Newton polish steps.
fn slice_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut lead = coeffs.len();
    while lead > 0 && coeffs[lead - 1].norm() == 0.0 {
        lead -= 1;
    }
    let coeffs = &coeffs[..lead];
    let mut out = Vec::new();
    let mut start = 0;
    while start < coeffs.len() && coeffs[start].norm() == 0.0 {
        start += 1;
    }
    if start > 0 {
        out.push(Complex64::new(0.0, 0.0));
    }
    let deflated = &coeffs[start..];
    if deflated.len() < 2 {
        return out;
    }
    let eval_and_deriv = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in deflated.iter().rev() {
            d = d * z + v;
            v = v * z + c;
        }
        (v, d)
    };
    for mut r in crate::ball::dk_roots_f64(deflated) {
        for _ in 0..3 {
            let (v, d) = eval_and_deriv(r);
            if d.norm() > 1e-290 {
                let step = v / d;
                if step.norm().is_finite() {
                    r -= step;
                }
            }
        }
        out.push(r);
    }
    out
}

/// Approximate min of |F| over S intersected with the boundary {|z| = R}.
///
/// Sampling scheme: for each of k pseudo-random assignments and each choice
/// of a distinguished coordinate, the remaining coordinates are drawn from
/// the polydisc with the maximal one placed exactly on the circle of radius
/// R; the component equations are solved for the distinguished coordinate
/// and roots with modulus at most R give witnesses exactly on the boundary
/// of the polycylinder and exactly on S. Returns +inf if no sample landed.
pub fn sample_s_min(f: &MappingSpec, r: f64, k: usize, seed: u64) -> Result<f64> {
    validate_map(f, r, k)?;
    let mut best = f64::INFINITY;
    s_boundary_witnesses(f, r, k, seed, &mut |_z, v| {
        if v < best {
            best = v;
        }
    });
    Ok(best)
}

/// Drive `visit` with boundary points of S and their |F| values.
fn s_boundary_witnesses(
    f: &MappingSpec,
    r: f64,
    k: usize,
    seed: u64,
    visit: &mut dyn FnMut(&[Complex64], f64),
) {
    let n = f.num_vars();
    let mut rng = Rng::new(seed ^ 0x5a6d5f73);
    for _ in 0..k {
        for dist in 0..n {
            // draw the other coordinates, one pinned to the circle
            let mut others: Vec<Complex64> = (0..n - 1)
                .map(|_| {
                    let (re, im) = rng.disc(r);
                    Complex64::new(re, im)
                })
                .collect();
            if !others.is_empty() {
                let mut mi = 0;
                for (i, o) in others.iter().enumerate() {
                    if o.norm() > others[mi].norm() {
                        mi = i;
                    }
                }
                let m = others[mi].norm();
                others[mi] = if m < 1e-12 * r {
                    let (re, im) = rng.circle(r);
                    Complex64::new(re, im)
                } else {
                    others[mi] * (r / m)
                };
            }
            for comp in f.components() {
                let coeffs = comp.univariate_slice(dist, &others);
                if coeffs.len() < 2 {
                    continue; // distinguished variable absent from this slice
                }
                let lead = coeffs.last().unwrap();
                if !lead.is_finite() || lead.norm() < 1e-280 {
                    continue;
                }
                for root in slice_roots(&coeffs) {
                    let m = root.norm();
                    if !(m <= r * (1.0 + 1e-9)) {
                        continue;
                    }
                    let root = if m > r { root * (r / m) } else { root };
                    let mut z = Vec::with_capacity(n);
                    let mut oi = 0;
                    for i in 0..n {
                        if i == dist {
                            z.push(root);
                        } else {
                            z.push(others[oi]);
                            oi += 1;
                        }
                    }
                    let v = eval_map(f, &z);
                    visit(&z, v);
                }
            }
        }
    }
}

/// Approximate min of |F| over the boundary {|z| = R}: multistart
/// coordinate-wise complex descent, iterates projected back to the
/// boundary by rescaling the maximal coordinate.
pub fn sphere_min(f: &MappingSpec, r: f64, k: usize, seed: u64) -> Result<f64> {
    validate_map(f, r, k)?;
    let n = f.num_vars();
    let mut rng = Rng::new(seed ^ 0x73706872);
    let project = |z: &mut [Complex64]| {
        let mut max_i = 0;
        let mut max_m: f64 = 0.0;
        for (i, zi) in z.iter_mut().enumerate() {
            let m = zi.norm();
            if m > r {
                *zi *= r / m;
            }
            let m = zi.norm();
            if m > max_m {
                max_m = m;
                max_i = i;
            }
        }
        if max_m < r {
            if max_m < 1e-12 * r {
                z[max_i] = Complex64::new(r, 0.0);
            } else {
                z[max_i] *= r / max_m;
            }
        }
    };
    // Starts: k random boundary points plus the best few points of S on
    // the boundary. The subset witnesses are already feasible for the full
    // problem and rescue the descent in narrow valleys.
    let mut starts: Vec<Vec<Complex64>> = Vec::new();
    for _ in 0..k {
        let mut z: Vec<Complex64> = (0..n)
            .map(|_| {
                let (re, im) = rng.disc(r);
                Complex64::new(re, im)
            })
            .collect();
        let pin = (rng.next_u64() % n as u64) as usize;
        let (re, im) = rng.circle(r);
        z[pin] = Complex64::new(re, im);
        starts.push(z);
    }
    let mut s_best: Vec<(f64, Vec<Complex64>)> = Vec::new();
    s_boundary_witnesses(f, r, (k / 2).max(8), seed ^ 0x77, &mut |z, v| {
        s_best.push((v, z.to_vec()));
    });
    s_best.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    for (_, z) in s_best.into_iter().take(4) {
        starts.push(z);
    }
    let mut best = f64::INFINITY;
    for mut z in starts {
        project(&mut z);
        let mut cur = eval_map(f, &z);
        let mut h = r / 4.0;
        let mut iters = 0;
        while h > r * 1e-9 && iters < 400 {
            iters += 1;
            let mut improved = false;
            for i in 0..n {
                for step in [
                    Complex64::new(h, 0.0),
                    Complex64::new(-h, 0.0),
                    Complex64::new(0.0, h),
                    Complex64::new(0.0, -h),
                ] {
                    let mut cand = z.clone();
                    cand[i] += step;
                    project(&mut cand);
                    let v = eval_map(f, &cand);
                    if v < cur {
                        cur = v;
                        z = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        if cur < best {
            best = cur;
        }
    }
    Ok(best)
}

fn least_squares_tail(points: &[(f64, f64)], used_tail: usize) -> (f64, f64, f64) {
    let tail = &points[points.len().saturating_sub(used_tail)..];
    let n = tail.len() as f64;
    if tail.len() < 2 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let sx: f64 = tail.iter().map(|p| p.0).sum();
    let sy: f64 = tail.iter().map(|p| p.1).sum();
    let sxx: f64 = tail.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = tail.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = tail
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    (slope, intercept, (ss / n).sqrt())
}

fn fit(points: Vec<(f64, f64)>, count: usize) -> SlopeFit {
    let used_tail = count.div_ceil(2).min(points.len());
    let (slope, intercept, residual) = least_squares_tail(&points, used_tail);
    SlopeFit {
        points,
        slope,
        intercept,
        residual,
        used_tail,
    }
}

/// Run both minima over the ladder and fit slopes on the tail half.
pub fn estimate_exponent(f: &MappingSpec, ladder: &RadiusLadder) -> Result<EstimateReport> {
    ladder.validate()?;
    if f.num_vars() < 2 {
        return Err(Error::BadParameter("need at least two variables".into()));
    }
    let mut rows = Vec::with_capacity(ladder.count);
    let mut pts_s = Vec::new();
    let mut pts_full = Vec::new();
    for (i, r) in ladder.radii().into_iter().enumerate() {
        let seed_i = ladder.seed.wrapping_add(0x9e37 * i as u64);
        let ms = sample_s_min(f, r, ladder.samples_per_radius, seed_i)?;
        let mf = sphere_min(f, r, ladder.samples_per_radius.max(16), seed_i ^ 0xf00d)?;
        rows.push((r, ms, mf));
        if ms.is_finite() && ms > 0.0 {
            pts_s.push((r.ln(), ms.ln()));
        }
        if mf.is_finite() && mf > 0.0 {
            pts_full.push((r.ln(), mf.ln()));
        }
    }
    let restricted = fit(pts_s, ladder.count);
    let full = fit(pts_full, ladder.count);
    let agreement = (restricted.slope - full.slope).abs();
    Ok(EstimateReport {
        restricted,
        full,
        agreement,
        rows,
    })
}

// ---------------------------------------------------------------------------

fn eval_unipoly(coeffs: &[Rational], t: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * t + Complex64::new(rational_to_f64(c), 0.0);
    }
    acc
}

/// Probe the root-gap inequality for a univariate polynomial mapping
/// Phi = (phi_1, ..., phi_m): for T the zero set of the product,
///     |Phi(t)| >= 2^(-deg Phi) min over T of |Phi(tau)|
/// at k random probes plus all pairwise root midpoints. Returns whether the
/// inequality held everywhere up to 1e-9 slack, and the worst observed
/// ratio of left to right side.
pub fn lemma2_check(components: &[Vec<Rational>], probes: usize, seed: u64) -> Result<(bool, f64)> {
    if components.is_empty() {
        return Err(Error::BadParameter("need at least one component".into()));
    }
    let degs: Vec<usize> = components
        .iter()
        .map(|c| {
            let mut d = c.len();
            while d > 0 && c[d - 1] == Rational::from_integer(0.into()) {
                d -= 1;
            }
            d.saturating_sub(1)
        })
        .collect();
    let product_deg: usize = degs.iter().sum();
    if product_deg == 0 {
        return Err(Error::BadParameter(
            "product of components is constant".into(),
        ));
    }
    let deg_phi = *degs.iter().max().unwrap() as i32;

    // zero set of the product: union of component roots
    let mut roots: Vec<Complex64> = Vec::new();
    for (c, d) in components.iter().zip(&degs) {
        if *d == 0 {
            continue;
        }
        let cf: Vec<Complex64> = c
            .iter()
            .take(d + 1)
            .map(|x| Complex64::new(rational_to_f64(x), 0.0))
            .collect();
        roots.extend(slice_roots(&cf));
    }

    let phi_at = |t: Complex64| -> f64 {
        components
            .iter()
            .map(|c| eval_unipoly(c, t).norm())
            .fold(0.0, f64::max)
    };
    let min_on_t = roots
        .iter()
        .map(|&t| phi_at(t))
        .fold(f64::INFINITY, f64::min);
    let rhs = 2f64.powi(-deg_phi) * min_on_t;
    let scale: f64 = components
        .iter()
        .flat_map(|c| c.iter().map(rational_to_f64))
        .fold(0.0, |a, b| a.max(b.abs()));
    if !(rhs > 1e-12 * (1.0 + scale)) {
        // right side vanishes up to root-finding noise: trivially true
        return Ok((true, f64::INFINITY));
    }

    let spread = roots.iter().map(|t| t.norm()).fold(0.0, f64::max) * 2.0 + 2.0;
    let mut worst = f64::INFINITY;
    let mut holds = true;
    let mut check = |t: Complex64| {
        let lhs = phi_at(t);
        let ratio = lhs / rhs;
        if ratio < worst {
            worst = ratio;
        }
        if lhs < rhs * (1.0 - 1e-9) - 1e-9 {
            holds = false;
        }
    };
    // adversarial probes: midpoints between roots
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            check((roots[i] + roots[j]) / 2.0);
        }
    }
    let mut rng = Rng::new(seed ^ 0x6c6d32);
    for _ in 0..probes {
        let (re, im) = rng.disc(spread);
        check(Complex64::new(re, im));
    }
    Ok((holds, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::rational::rat;

    fn mapping(srcs: &[&str]) -> MappingSpec {
        MappingSpec::new(
            srcs.iter()
                .map(|s| parse_poly(s, &["x", "y"]).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_minima_track_radius() {
        let f = mapping(&["x", "y"]);
        for r in [1e2, 1e4] {
            let ms = sample_s_min(&f, r, 16, 1).unwrap();
            assert!((ms / r - 1.0).abs() < 1e-6, "S min {ms} at {r}");
            let mf = sphere_min(&f, r, 16, 1).unwrap();
            assert!((mf / r - 1.0).abs() < 0.05, "full min {mf} at {r}");
        }
    }

    #[test]
    fn cusp_min_is_cube_root() {
        let f = mapping(&["y", "x - y^3"]);
        let r = 1e6;
        let ms = sample_s_min(&f, r, 32, 5).unwrap();
        assert!((ms / 1e2 - 1.0).abs() < 0.05, "got {ms}");
    }

    #[test]
    fn hyperbola_min_decays() {
        let f = mapping(&["x", "x*y - 1"]);
        let r = 1e4;
        let ms = sample_s_min(&f, r, 32, 5).unwrap();
        assert!((ms * 1e4 - 1.0).abs() < 0.05, "got {ms}");
    }

    #[test]
    fn restriction_inequality() {
        // min over a subset can only be larger (up to numeric slack)
        for srcs in [vec!["x", "y"], vec!["y", "x - y^3"], vec!["x", "x*y - 1"]] {
            let f = mapping(&srcs);
            let r = 1e3;
            let ms = sample_s_min(&f, r, 24, 9).unwrap();
            let mf = sphere_min(&f, r, 24, 9).unwrap();
            assert!(ms >= mf - 1e-6 * (1.0 + mf.abs()), "{srcs:?}: {ms} vs {mf}");
        }
    }

    #[test]
    fn estimate_identity_slope_one() {
        let f = mapping(&["x", "y"]);
        let ladder = RadiusLadder {
            samples_per_radius: 16,
            ..Default::default()
        };
        let rep = estimate_exponent(&f, &ladder).unwrap();
        assert!(
            (rep.restricted.slope - 1.0).abs() < 0.02,
            "{}",
            rep.restricted.slope
        );
        assert!((rep.full.slope - 1.0).abs() < 0.05, "{}", rep.full.slope);
        assert!(rep.agreement < 0.05);
    }

    #[test]
    fn three_variable_sampling() {
        let vars = ["z1", "z2", "z3"];
        let comps: Vec<_> = (0..3)
            .map(|i| crate::parser::parse_poly(vars[i], &vars).unwrap())
            .collect();
        let f = MappingSpec::new(comps).unwrap();
        let r = 1e3;
        let ms = sample_s_min(&f, r, 16, 2).unwrap();
        // on S one coordinate vanishes and the sphere pins another at R
        assert!((ms / r - 1.0).abs() < 1e-6, "got {ms}");
        let mf = sphere_min(&f, r, 16, 2).unwrap();
        assert!(ms >= mf - 1e-6 * r);
    }

    #[test]
    fn determinism_same_seed() {
        let f = mapping(&["y", "x - y^3"]);
        let a = sample_s_min(&f, 1e4, 16, 7).unwrap();
        let b = sample_s_min(&f, 1e4, 16, 7).unwrap();
        assert_eq!(a, b);
        let c = sphere_min(&f, 1e3, 16, 7).unwrap();
        let d = sphere_min(&f, 1e3, 16, 7).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn lemma2_tight_case() {
        // (t, t-1): bound is 1/2, attained at t = 1/2
        let comps = vec![vec![rat(0), rat(1)], vec![rat(-1), rat(1)]];
        let (holds, worst) = lemma2_check(&comps, 200, 3).unwrap();
        assert!(holds);
        assert!((worst - 1.0).abs() < 1e-6, "tight margin, got {worst}");
    }

    #[test]
    fn lemma2_zero_rhs() {
        // t^2: the right side vanishes at the double root
        let comps = vec![vec![rat(0), rat(0), rat(1)]];
        let (holds, worst) = lemma2_check(&comps, 50, 3).unwrap();
        assert!(holds);
        assert!(worst.is_infinite());
    }

    #[test]
    fn lemma2_constant_product_rejected() {
        let comps = vec![vec![rat(5)]];
        assert!(lemma2_check(&comps, 50, 3).is_err());
    }
}
