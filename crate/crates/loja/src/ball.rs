//! Complex ball arithmetic with exact rational centers and radii.
//!
//! A `CBall` is a disc `{z : |z - center| <= rad}` whose center and radius
//! are exact rationals, so every operation below is a sound enclosure by
//! construction. Arithmetic is exact; `round` trims numerators and
//! denominators to a dyadic grid (inflating the radius accordingly) to keep
//! coefficient growth under control. Wider discs come only from the inputs
//! and from rounding, so widths shrink monotonically as precision grows.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::rational::{approx_log2, pow2, rational_to_f64, Rational};

#[derive(Clone, PartialEq, Debug)]
pub struct CBall {
    pub re: Rational,
    pub im: Rational,
    pub rad: Rational,
}

impl CBall {
    pub fn zero() -> Self {
        CBall {
            re: Rational::zero(),
            im: Rational::zero(),
            rad: Rational::zero(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        CBall {
            re: r,
            im: Rational::zero(),
            rad: Rational::zero(),
        }
    }

    pub fn exact(re: Rational, im: Rational) -> Self {
        CBall {
            re,
            im,
            rad: Rational::zero(),
        }
    }

    pub fn new(re: Rational, im: Rational, rad: Rational) -> Self {
        debug_assert!(!rad.is_negative());
        CBall { re, im, rad }
    }

    pub fn from_f64(re: f64, im: f64, rad: f64) -> Self {
        CBall {
            re: Rational::from_float(re).unwrap(),
            im: Rational::from_float(im).unwrap(),
            rad: Rational::from_float(rad.max(0.0)).unwrap(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    pub fn rad_f64(&self) -> f64 {
        rational_to_f64(&self.rad)
    }

    /// Upper bound on |center|: |re| + |im|.
    fn center_abs_upper(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }

    /// Lower bound on |center|: max(|re|, |im|).
    fn center_abs_lower(&self) -> Rational {
        self.re.abs().max(self.im.abs())
    }

    /// Rational upper bound for |z| over the disc.
    pub fn abs_upper(&self) -> Rational {
        self.center_abs_upper() + &self.rad
    }

    /// Rational lower bound for |z| over the disc (clamped at 0).
    pub fn abs_lower(&self) -> Rational {
        let l = self.center_abs_lower() - &self.rad;
        if l.is_negative() {
            Rational::zero()
        } else {
            l
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.abs_lower().is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        CBall {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rad: &self.rad + &other.rad,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        CBall {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            rad: &self.rad + &other.rad,
        }
    }

    pub fn neg(&self) -> Self {
        CBall {
            re: -self.re.clone(),
            im: -self.im.clone(),
            rad: self.rad.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        // (a±ra)(b±rb): |error| <= |a| rb + |b| ra + ra rb
        let re = &self.re * &other.re - &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        let rad = self.center_abs_upper() * &other.rad
            + other.center_abs_upper() * &self.rad
            + &self.rad * &other.rad;
        CBall { re, im, rad }
    }

    pub fn mul_rational(&self, c: &Rational) -> Self {
        CBall {
            re: &self.re * c,
            im: &self.im * c,
            rad: &self.rad * c.abs(),
        }
    }

    /// Reciprocal; `None` if the disc may contain zero.
    pub fn inv(&self) -> Option<Self> {
        let low = self.center_abs_lower() - &self.rad;
        if !low.is_positive() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        let re = &self.re / &norm;
        let im = -(&self.im / &norm);
        // |1/z - 1/c| <= rad / (|c| |z|) <= rad / (lower(|c|) * low)
        let rad = &self.rad / (self.center_abs_lower() * low);
        Some(CBall { re, im, rad })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    /// Contract `self` to the dyadic grid at `prec` bits. Small exact balls
    /// pass through unchanged so rational points evaluate exactly.
    pub fn round(&self, prec: u32) -> Self {
        let prec = prec.max(8) as i64;
        if self.rad.is_zero() {
            let bits = |r: &Rational| r.numer().bits().max(r.denom().bits()) as i64;
            if bits(&self.re) <= 4 * prec && bits(&self.im) <= 4 * prec {
                return self.clone();
            }
        }
        let mut mag = -prec;
        for r in [&self.re, &self.im, &self.rad] {
            if !r.is_zero() {
                mag = mag.max(approx_log2(r));
            }
        }
        let grid_e = mag - prec;
        let grid = pow2(grid_e);
        let snap = |x: &Rational| -> Rational {
            ((x / &grid) + Rational::new(1.into(), 2.into())).floor() * &grid
        };
        let re = snap(&self.re);
        let im = snap(&self.im);
        let rad = ((&self.rad / &grid).floor() + Rational::from_integer(2.into())) * &grid;
        CBall { re, im, rad }
    }

    /// True if the two discs cannot intersect.
    pub fn disjoint(&self, other: &Self) -> bool {
        // |c1 - c2| > r1 + r2, via the max-component lower bound on |c1-c2|
        let dre = (&self.re - &other.re).abs();
        let dim = (&self.im - &other.im).abs();
        dre.max(dim) > &self.rad + &other.rad
    }

    /// True if `self` is contained in the interior of `other`.
    pub fn inside(&self, other: &Self) -> bool {
        // |c1 - c2| + r1 < r2, via |c1-c2| <= |dre| + |dim|
        let dre = (&self.re - &other.re).abs();
        let dim = (&self.im - &other.im).abs();
        dre + dim + &self.rad < other.rad
    }
}

/// Evaluate a dense polynomial (low degree first) at a ball, rounding at
/// `prec` after every step.
pub fn eval_poly_ball(coeffs: &[CBall], z: &CBall, prec: u32) -> CBall {
    let mut acc = CBall::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c).round(prec);
    }
    acc
}

pub fn poly_derivative_ball(coeffs: &[CBall]) -> Vec<CBall> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.mul_rational(&Rational::from_integer(i.into())))
        .collect()
}

/// Durand-Kerner iteration in f64. Returns approximations to all complex
/// roots of the polynomial (low degree first, leading coefficient nonzero).
pub fn dk_roots_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    // Cauchy-style radius bound for the initial guesses.
    let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|i| seed.powu(i as u32 + 1) * bound * 0.7)
        .collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    for _ in 0..300 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    den *= roots[i] - roots[j];
                }
            }
            if den.norm() < 1e-290 {
                den = Complex64::new(1e-290, 0.0);
            }
            let delta = eval(roots[i]) / den;
            roots[i] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-13 * bound.max(1.0) {
            break;
        }
    }
    roots
}

/// Durand-Kerner on exact centers with rounding, for when f64 runs out of
/// headroom. Returns point approximations as exact balls (radius 0).
fn dk_roots_rational(coeffs: &[CBall], prec: u32, iters: u32) -> Vec<CBall> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg].clone();
    let lead_inv = match lead.inv() {
        Some(li) => li,
        None => return Vec::new(),
    };
    let monic: Vec<CBall> = coeffs
        .iter()
        .map(|c| {
            CBall::exact(c.re.clone(), c.im.clone())
                .mul(&lead_inv)
                .round(prec)
        })
        .collect();
    let f64_start = dk_roots_f64(&monic.iter().map(|c| c.center_f64()).collect::<Vec<_>>());
    let mut roots: Vec<CBall> = if f64_start.iter().all(|z| z.is_finite()) {
        f64_start
            .iter()
            .map(|z| CBall::from_f64(z.re, z.im, 0.0))
            .collect()
    } else {
        let seed = CBall::from_f64(0.4, 0.9, 0.0);
        let mut acc = Vec::with_capacity(deg);
        let mut cur = seed.clone();
        for _ in 0..deg {
            acc.push(cur.clone());
            cur = cur.mul(&seed).round(prec);
        }
        acc
    };
    for _ in 0..iters {
        for i in 0..deg {
            let mut den = CBall::from_rational(Rational::one());
            for j in 0..deg {
                if j != i {
                    den = den.mul(&roots[i].sub(&roots[j])).round(prec);
                }
            }
            let val = eval_poly_ball(&monic, &roots[i], prec);
            if let Some(q) = val.div(&den) {
                roots[i] = CBall::exact(&roots[i].re - &q.re, &roots[i].im - &q.im).round(prec);
            }
        }
    }
    roots
}

/// Certified isolation of all roots of a squarefree polynomial with ball
/// coefficients: returns pairwise disjoint discs, each containing exactly
/// one root, refined until the radius is at most 2^-prec. `None` when
/// certification fails at this working precision (retry with tighter
/// coefficient enclosures and a larger `work` precision).
pub fn isolate_roots(coeffs: &[CBall], prec: u32, work: u32) -> Option<Vec<CBall>> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Some(Vec::new());
    }
    let centers_f64: Vec<Complex64> = coeffs.iter().map(|c| c.center_f64()).collect();
    let mut approx: Vec<CBall> = if centers_f64.iter().all(|z| z.is_finite()) {
        dk_roots_f64(&centers_f64)
            .into_iter()
            .map(|z| CBall::from_f64(z.re, z.im, 0.0))
            .collect()
    } else {
        Vec::new()
    };
    if approx.len() != deg || work > 128 {
        approx = dk_roots_rational(coeffs, work, 80);
        if approx.len() != deg {
            return None;
        }
    }
    let deriv = poly_derivative_ball(coeffs);
    let target = pow2(-(prec as i64));
    let mut out: Vec<CBall> = Vec::with_capacity(deg);
    for (i, z) in approx.iter().enumerate() {
        // cap: a third of the distance to the nearest other approximation
        let mut sep: Option<Rational> = None;
        for (j, w) in approx.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = (&z.re - &w.re).abs().max((&z.im - &w.im).abs());
            sep = Some(match sep {
                None => d,
                Some(s) => s.min(d),
            });
        }
        let cap = sep
            .map(|s| s / Rational::from_integer(3.into()))
            .unwrap_or_else(Rational::one);

        // initial radius from the Newton correction at the approximation:
        // for a simple root this is the right scale, small enough that the
        // derivative ball stays clear of zero
        let mid = CBall::exact(z.re.clone(), z.im.clone());
        let fm = eval_poly_ball(coeffs, &mid, work);
        let fdm = eval_poly_ball(&deriv, &mid, work);
        let corr = fm
            .div(&fdm)
            .map(|q| q.abs_upper())
            .unwrap_or_else(|| cap.clone());
        let mut r =
            (corr * Rational::from_integer(4.into()) + pow2(-(work as i64))).min(cap.clone());
        if r.is_zero() {
            r = pow2(-(work as i64));
        }

        // inflate until the Newton operator contracts
        let mut x: Option<CBall> = None;
        for _ in 0..24 {
            let cand = CBall::new(z.re.clone(), z.im.clone(), r.clone());
            let fdx = eval_poly_ball(&deriv, &cand, work);
            if let Some(q) = fm.div(&fdx) {
                let n = mid.sub(&q).round(work);
                if n.inside(&cand) {
                    x = Some(n);
                    break;
                }
            }
            r *= Rational::from_integer(8.into());
            if r > cap {
                break;
            }
        }
        let mut x = x?;

        // contract to the requested radius
        for _ in 0..(8 + prec / 2) {
            if x.rad <= target {
                break;
            }
            let mid = CBall::exact(x.re.clone(), x.im.clone());
            let fm = eval_poly_ball(coeffs, &mid, work);
            let fdx = eval_poly_ball(&deriv, &x, work);
            let n = match fm.div(&fdx).map(|q| mid.sub(&q).round(work)) {
                Some(n) => n,
                None => break,
            };
            if n.rad >= x.rad {
                break; // rounding floor reached
            }
            x = n;
        }
        if x.rad > target {
            return None;
        }
        out.push(x);
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if !out[i].disjoint(&out[j]) {
                return None;
            }
        }
    }
    Some(out)
}

/// Lexicographic comparison of ball centers by (re, im), refusing to decide
/// when the intervals overlap in both components.
pub fn lex_cmp_or_overlap(a: &CBall, b: &CBall) -> Option<std::cmp::Ordering> {
    use std::cmp::Ordering;
    let re_hi_a = &a.re + &a.rad;
    let re_lo_a = &a.re - &a.rad;
    let re_hi_b = &b.re + &b.rad;
    let re_lo_b = &b.re - &b.rad;
    if re_hi_a < re_lo_b {
        return Some(Ordering::Less);
    }
    if re_hi_b < re_lo_a {
        return Some(Ordering::Greater);
    }
    let im_hi_a = &a.im + &a.rad;
    let im_lo_a = &a.im - &a.rad;
    let im_hi_b = &b.im + &b.rad;
    let im_lo_b = &b.im - &b.rad;
    if im_hi_a < im_lo_b {
        return Some(Ordering::Less);
    }
    if im_hi_b < im_lo_a {
        return Some(Ordering::Greater);
    }
    None
}
