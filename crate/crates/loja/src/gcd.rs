//! Bivariate gcd and squarefree parts over Q.
//!
//! Denominators are cleared and gcds run as a subresultant PRS over
//! `Z[x][y]`: pseudo-remainders in y with the Collins divisors removed by
//! exact division, so coefficient growth stays at subresultant size
//! without any content gcds inside the loop (univariate `Z[x]` gcds, a
//! primitive PRS over Z, are only taken for the input contents and the
//! final primitive part). Results are normalized so the graded-lex leading
//! coefficient is 1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::Rational;

// ---- univariate over Z (low degree first, trimmed) ----

type ZP = Vec<BigInt>;

fn zp_trim(p: &mut ZP) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn zp_is_zero(p: &ZP) -> bool {
    p.is_empty()
}

fn zp_neg(p: &ZP) -> ZP {
    p.iter().map(|c| -c).collect()
}

fn zp_mul(a: &ZP, b: &ZP) -> ZP {
    if zp_is_zero(a) || zp_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    zp_trim(&mut out);
    out
}

fn zp_mul_int(a: &ZP, c: &BigInt) -> ZP {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

fn zp_content(p: &ZP) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn zp_primitive(p: &ZP) -> ZP {
    let c = zp_content(p);
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b.
fn zp_prem(a: &ZP, b: &ZP) -> ZP {
    let mut r = a.clone();
    zp_trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        // r := lb*r - lr * x^shift * b
        let mut nr = zp_mul_int(&r, &lb);
        for i in 0..=db {
            nr[shift + i] -= &lr * &b[i];
        }
        zp_trim(&mut nr);
        r = nr;
    }
    r
}

/// Gcd in Z[x] by primitive PRS; result is primitive with positive lead.
fn zp_gcd(a: &ZP, b: &ZP) -> ZP {
    if zp_is_zero(a) {
        return zp_primitive(b);
    }
    if zp_is_zero(b) {
        return zp_primitive(a);
    }
    let content = zp_content(a).gcd(&zp_content(b));
    let mut x = zp_primitive(a);
    let mut y = zp_primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !zp_is_zero(&y) {
        let r = zp_prem(&x, &y);
        x = y;
        y = zp_primitive(&r);
    }
    let mut g = zp_mul_int(&zp_primitive(&x), &content);
    if g.last().map_or(false, |c| c.is_negative()) {
        g = zp_neg(&g);
    }
    g
}

/// Exact division in Z[x]; panics if not exact (internal use).
fn zp_div_exact(a: &ZP, b: &ZP) -> ZP {
    if zp_is_zero(a) {
        return Vec::new();
    }
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let (qc, rem) = lr.div_rem(lb);
        assert!(rem.is_zero(), "inexact division in zp_div_exact");
        for i in 0..=db {
            let t = &b[i] * &qc;
            r[shift + i] -= t;
        }
        q[shift] = qc;
        zp_trim(&mut r);
    }
    assert!(zp_is_zero(&r), "inexact division in zp_div_exact");
    zp_trim(&mut q);
    q
}

// ---- Z[x][y]: vector over y of Z[x] coefficients ----

type ZZP = Vec<ZP>;

fn zz_trim(p: &mut ZZP) {
    while p.last().map_or(false, zp_is_zero) {
        p.pop();
    }
}

fn zz_content(p: &ZZP) -> ZP {
    let mut c: ZP = Vec::new();
    for coeff in p {
        if zp_is_zero(coeff) {
            continue;
        }
        c = if zp_is_zero(&c) {
            coeff.clone()
        } else {
            zp_gcd(&c, coeff)
        };
        if c.len() == 1 && c[0].is_one() {
            break;
        }
    }
    c
}

fn zz_primitive(p: &ZZP) -> ZZP {
    let c = zz_content(p);
    if zp_is_zero(&c) || (c.len() == 1 && c[0].is_one()) {
        return p.clone();
    }
    p.iter()
        .map(|coeff| {
            if zp_is_zero(coeff) {
                Vec::new()
            } else {
                zp_div_exact(coeff, &c)
            }
        })
        .collect()
}

fn zz_mul_zp(p: &ZZP, c: &ZP) -> ZZP {
    p.iter().map(|coeff| zp_mul(coeff, c)).collect()
}

/// Pseudo-remainder of a by b in y over Z[x]: exactly
/// lc(b)^(deg a - deg b + 1) * a mod b, as the subresultant divisors
/// require even when intermediate top terms cancel.
fn zz_prem(a: &ZZP, b: &ZZP) -> ZZP {
    let mut r = a.clone();
    zz_trim(&mut r);
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut e: i64 = if r.len() > db { (r.len() - 1 - db) as i64 + 1 } else { 0 };
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        let mut nr = zz_mul_zp(&r, &lb);
        e -= 1;
        for i in 0..=db {
            let t = zp_mul(&b[i], &lr);
            let mut diff = std::mem::take(&mut nr[shift + i]);
            diff.resize(diff.len().max(t.len()), BigInt::zero());
            for (k, tv) in t.iter().enumerate() {
                diff[k] -= tv;
            }
            zp_trim(&mut diff);
            nr[shift + i] = diff;
        }
        zz_trim(&mut nr);
        r = nr;
    }
    for _ in 0..e {
        r = zz_mul_zp(&r, &lb);
    }
    r
}

/// Coefficient-wise exact division of a Z[x][y] polynomial by a Z[x] one.
fn zz_div_zp(p: &ZZP, d: &ZP) -> ZZP {
    p.iter()
        .map(|c| if zp_is_zero(c) { Vec::new() } else { zp_div_exact(c, d) })
        .collect()
}

fn zp_pow(p: &ZP, e: usize) -> ZP {
    let mut out = vec![BigInt::one()];
    for _ in 0..e {
        out = zp_mul(&out, p);
    }
    out
}

fn zz_gcd(a: &ZZP, b: &ZZP) -> ZZP {
    let ca = zz_content(a);
    let cb = zz_content(b);
    let content = zp_gcd(&ca, &cb);
    let mut r0 = zz_primitive(a);
    let mut r1 = zz_primitive(b);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    if r1.is_empty() {
        return zz_mul_zp(&zz_primitive(&r0), &content);
    }
    // subresultant PRS
    let mut g: ZP = vec![BigInt::one()];
    let mut h: ZP = vec![BigInt::one()];
    loop {
        let delta = r0.len() - r1.len(); // deg r0 - deg r1 >= 0
        let r = zz_prem(&r0, &r1);
        if r.is_empty() {
            break;
        }
        // divide by g * h^delta, exactly
        let divisor = zp_mul(&g, &zp_pow(&h, delta));
        let reduced = zz_div_zp(&r, &divisor);
        r0 = r1;
        r1 = reduced;
        g = r0.last().unwrap().clone();
        // h := g^delta / h^(delta - 1), exactly
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => zp_div_exact(&zp_pow(&g, delta), &zp_pow(&h, delta - 1)),
        };
    }
    zz_mul_zp(&zz_primitive(&r1), &content)
}

// ---- conversions ----

fn to_zz(p: &MultiPoly) -> ZZP {
    // common denominator
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
    }
    let d = p.degrees();
    let dy = d.per_var[1].unwrap_or(0) as usize;
    let dx = d.per_var[0].unwrap_or(0) as usize;
    let mut out: ZZP = vec![vec![BigInt::zero(); dx + 1]; dy + 1];
    for (m, c) in p.terms() {
        out[m.0[1] as usize][m.0[0] as usize] = c.numer() * (&den / c.denom());
    }
    for coeff in out.iter_mut() {
        zp_trim(coeff);
    }
    zz_trim(&mut out);
    out
}

fn from_zz(vars: &[String], p: &ZZP) -> MultiPoly {
    let vars_ref: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut terms = Vec::new();
    for (j, coeff) in p.iter().enumerate() {
        for (i, c) in coeff.iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![i as u32, j as u32], Rational::from_integer(c.clone())));
            }
        }
    }
    MultiPoly::from_terms(&vars_ref, terms)
}

fn ensure_bivariate(p: &MultiPoly) -> Result<()> {
    if p.num_vars() != 2 {
        return Err(Error::NotBivariate);
    }
    Ok(())
}

/// Greatest common divisor of two bivariate polynomials, normalized so the
/// graded-lex leading coefficient is 1.
pub fn gcd_bivariate(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    ensure_bivariate(a)?;
    ensure_bivariate(b)?;
    if a.vars() != b.vars() {
        return Err(Error::VariableMismatch);
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.is_zero() {
        return Ok(b.normalized());
    }
    if b.is_zero() {
        return Ok(a.normalized());
    }
    let g = zz_gcd(&to_zz(a), &to_zz(b));
    Ok(from_zz(a.vars(), &g).normalized())
}

/// Product of the distinct irreducible factors of `p`, normalized like
/// `gcd_bivariate`. Same zero set as `p`.
pub fn squarefree_part(p: &MultiPoly) -> Result<MultiPoly> {
    ensure_bivariate(p)?;
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        let vars_ref: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
        return Ok(MultiPoly::one(&vars_ref));
    }
    let px = p.partial(0);
    let py = p.partial(1);
    let mut g = gcd_bivariate(p, &px)?;
    if !py.is_zero() {
        g = gcd_bivariate(&g, &py)?;
    }
    let q = p.exact_div(&g).expect("gcd divides the polynomial exactly");
    Ok(q.normalized())
}

/// Convenience: does `d` divide `p` exactly?
pub fn divides(d: &MultiPoly, p: &MultiPoly) -> bool {
    p.exact_div(d).is_some()
}
