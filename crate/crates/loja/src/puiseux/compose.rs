//! Exact degree of g composed with a branch parametrization.
//!
//! The composed object g(t^p, y(t)) is a descending Laurent-Puiseux series
//! over the branch tower. We work with truncated series that carry a
//! `valid_above` watermark: coefficients at exponents above it are exact.
//! A scan either finds an exactly nonzero top coefficient (its exponent is
//! the degree) or pushes the watermark below the intersection-theoretic
//! cutoff
//!     deg(g) * (deg Phi - ambient_deg) - 1,
//! at which point the composition is identically zero on the branch: a
//! nonzero composition can lose at most deg(g) * ambient_deg from its
//! naive top exponent (a Bezout-style bound against the defining curve).
//!
//! Chasing that cutoff head-on is expensive, so identical vanishing is
//! usually decided through the defining curve instead: with d = gcd(g, h)
//! and e = h/d, the identity (d o Phi)(e o Phi) = h o Phi = 0 means that
//! whenever the cofactor e composes to a series with an invertible top
//! coefficient - which shows up at shallow depth, since e shares no
//! component with the branch - the factor d, and with it g, composes to
//! exactly zero. Nonconstant proper gcds split the degree multiplicatively.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::tower::{FieldTower, Node, Split, TRes};

use super::expand::Branch;

/// Truncated Laurent series over the branch tower. Terms at exponents
/// <= valid_above are not stored; `None` watermark means fully exact.
struct TruncSeries {
    terms: BTreeMap<i64, Node>,
    valid_above: Option<i64>,
}

impl TruncSeries {
    fn top(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn prune(&mut self) {
        if let Some(v) = self.valid_above {
            let dead: Vec<i64> = self.terms.range(..=v).map(|(e, _)| *e).collect();
            for e in dead {
                self.terms.remove(&e);
            }
        }
    }
}

fn ts_add(tower: &FieldTower, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    let valid_above = match (a.valid_above, b.valid_above) {
        (None, None) => None,
        (Some(v), None) | (None, Some(v)) => Some(v),
        (Some(x), Some(y)) => Some(x.max(y)),
    };
    let mut terms = a.terms.clone();
    for (e, n) in &b.terms {
        match terms.entry(*e) {
            std::collections::btree_map::Entry::Vacant(en) => {
                en.insert(n.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut en) => {
                let s = tower.nadd(en.get(), n);
                if FieldTower::nis_zero(&s) {
                    en.remove();
                } else {
                    *en.get_mut() = s;
                }
            }
        }
    }
    let mut out = TruncSeries { terms, valid_above };
    out.prune();
    out
}

fn ts_mul(tower: &FieldTower, a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    // Watermark bookkeeping: hidden terms of one factor multiply everything
    // of the other (stored or hidden), so they pollute exponents up to
    // valid_above + top-bound of the partner.
    let bound = |s: &TruncSeries| -> Option<i64> {
        match (s.top(), s.valid_above) {
            (Some(t), Some(v)) => Some(t.max(v)),
            (Some(t), None) => Some(t),
            (None, Some(v)) => Some(v),
            (None, None) => None, // exactly zero
        }
    };
    let valid_above = match (a.valid_above, b.valid_above) {
        (None, None) => None,
        _ => {
            let mut w: Option<i64> = None;
            if let (Some(va), Some(tb)) = (a.valid_above, bound(b)) {
                w = Some(w.map_or(va + tb, |x: i64| x.max(va + tb)));
            }
            if let (Some(vb), Some(ta)) = (b.valid_above, bound(a)) {
                w = Some(w.map_or(vb + ta, |x: i64| x.max(vb + ta)));
            }
            // w stays None only when the truncated side multiplies an
            // exactly-zero side
            w
        }
    };
    let mut terms: BTreeMap<i64, Node> = BTreeMap::new();
    for (ea, na) in &a.terms {
        for (eb, nb) in &b.terms {
            let e = ea + eb;
            if let Some(v) = valid_above {
                if e <= v {
                    continue;
                }
            }
            let p = tower.nmul(na, nb);
            if FieldTower::nis_zero(&p) {
                continue;
            }
            match terms.entry(e) {
                std::collections::btree_map::Entry::Vacant(en) => {
                    en.insert(p);
                }
                std::collections::btree_map::Entry::Occupied(mut en) => {
                    let s = tower.nadd(en.get(), &p);
                    if FieldTower::nis_zero(&s) {
                        en.remove();
                    } else {
                        *en.get_mut() = s;
                    }
                }
            }
        }
    }
    let mut out = TruncSeries { terms, valid_above };
    out.prune();
    out
}

/// Powers of the branch's y-series, shared across compositions.
fn y_powers(tower: &FieldTower, b: &Branch, max_dy: u32) -> Vec<TruncSeries> {
    let y = TruncSeries {
        terms: b
            .acc
            .iter()
            .filter(|(_, n)| !FieldTower::nis_zero(n))
            .map(|(e, n)| (-e, n.clone()))
            .collect(),
        valid_above: b.truncation_exponent(),
    };
    let mut out = Vec::with_capacity(max_dy as usize + 1);
    out.push(TruncSeries {
        terms: BTreeMap::from([(0i64, tower.rat_node(num_traits::One::one()))]),
        valid_above: None,
    });
    for j in 1..=max_dy {
        let next = ts_mul(tower, &out[j as usize - 1], &y);
        out.push(next);
    }
    out
}

/// Composed series of g along the branch from precomputed y-powers.
fn compose_series(
    tower: &FieldTower,
    g: &MultiPoly,
    b: &Branch,
    powers: &[TruncSeries],
) -> TruncSeries {
    let p = b.ram as i64;
    let mut acc = TruncSeries {
        terms: BTreeMap::new(),
        valid_above: None,
    };
    let dy = g.terms().map(|(m, _)| m.0[1]).max().unwrap_or(0);
    for j in 0..=dy {
        // a_j(t^p): exact monomial series
        let mut aj = TruncSeries {
            terms: BTreeMap::new(),
            valid_above: None,
        };
        for (m, c) in g.terms() {
            if m.0[1] != j {
                continue;
            }
            let e = p * m.0[0] as i64;
            let node = tower.rat_node(c.clone());
            match aj.terms.entry(e) {
                std::collections::btree_map::Entry::Vacant(en) => {
                    en.insert(node);
                }
                std::collections::btree_map::Entry::Occupied(mut en) => {
                    let s = tower.nadd(en.get(), &node);
                    if FieldTower::nis_zero(&s) {
                        en.remove();
                    } else {
                        *en.get_mut() = s;
                    }
                }
            }
        }
        if !aj.terms.is_empty() {
            let contrib = ts_mul(tower, &aj, &powers[j as usize]);
            acc = ts_add(tower, &acc, &contrib);
        }
    }
    acc
}

/// Outcome of scanning one composed series with a bounded extension
/// allowance.
enum Scan {
    /// Exact degree found (top coefficient certified invertible).
    Found(i64),
    /// Identically zero, verified down to the cutoff or by exactness.
    Zero,
    /// Allowance exhausted before a decision.
    Undecided,
}

/// Scan deg(g o Phi), extending the branch by at most `allowance` extra
/// shift units (None = as far as the cutoff requires).
fn scan_deg(g: &MultiPoly, branch: &mut Branch, allowance: Option<i64>) -> TRes<Scan> {
    if g.is_zero() {
        return Ok(Scan::Zero);
    }
    let deg_g = g.total_degree().unwrap() as i64;
    let cutoff = deg_g * (branch.deg_phi() - branch.ambient_degree() as i64) - 1;
    let start_trunc = branch.truncation_exponent();
    let dy = g.terms().map(|(m, _)| m.0[1]).max().unwrap_or(0);
    loop {
        let powers = y_powers(&branch.tower, branch, dy);
        let series = compose_series(&branch.tower, g, branch, &powers);
        let mut found: Option<i64> = None;
        for (e, n) in series.terms.iter().rev() {
            if let Some(v) = series.valid_above {
                if *e <= v {
                    break;
                }
            }
            if branch.tower.unit_test(n)? {
                found = Some(*e);
                break;
            }
        }
        if let Some(e) = found {
            return Ok(Scan::Found(e));
        }
        let v = match series.valid_above {
            None => return Ok(Scan::Zero), // exact and empty
            Some(v) => v,
        };
        if v < cutoff {
            return Ok(Scan::Zero);
        }
        let t = branch.truncation_exponent().unwrap_or(i64::MIN);
        let step = (4 + branch.ambient_degree() as i64).max(v - cutoff + 1);
        let target = match (allowance, start_trunc) {
            (Some(a), Some(s)) => {
                if t - step < s - a {
                    if t <= s - a {
                        return Ok(Scan::Undecided);
                    }
                    s - a
                } else {
                    t - step
                }
            }
            _ => t - step,
        };
        // horizon hint: the deepest this polynomial could ever require
        let horizon = (cutoff - 4).min(target);
        let deeper = branch.extended_with_horizon(target, horizon);
        if deeper.truncation_exponent() == branch.truncation_exponent() {
            return Ok(Scan::Zero); // series terminated exactly
        }
        *branch = deeper;
    }
}

/// Exact composition degree of one polynomial, using the defining curve to
/// shortcut identical-vanishing decisions.
fn resolve_deg(g: &MultiPoly, branch: &mut Branch, depth: u32) -> TRes<Option<i64>> {
    assert!(depth < 64, "factor recursion failed to terminate");
    if g.is_zero() {
        return Ok(None);
    }
    // cheap attempt at the current depth plus a small allowance
    match scan_deg(g, branch, Some(8))? {
        Scan::Found(e) => return Ok(Some(e)),
        Scan::Zero => return Ok(None),
        Scan::Undecided => {}
    }
    let h = branch.source_factor().clone();
    let d = crate::gcd::gcd_bivariate(g, &h).expect("branch data is bivariate");
    if d.is_constant() {
        // no common component: the top exists and the cutoff-bounded scan
        // will reach it
        return match scan_deg(g, branch, None)? {
            Scan::Found(e) => Ok(Some(e)),
            Scan::Zero => Ok(None),
            Scan::Undecided => unreachable!("unbounded scan always decides"),
        };
    }
    let g_norm = g.normalized();
    if d == g_norm {
        // g (up to scale) divides the defining curve: decide through the
        // coprime cofactor e = h / g; h o Phi = 0, so an invertible top for
        // e o Phi forces g o Phi = 0, and vice versa
        let e = h.exact_div(&g_norm).expect("gcd divides the curve");
        let mut chunk = 2 * (branch.ambient_degree() as i64 + 4);
        loop {
            match scan_deg(&e, branch, Some(chunk))? {
                Scan::Found(_) => return Ok(None), // cofactor is a unit series
                Scan::Zero => {
                    // cofactor vanishes instead: g must have a top
                    return match scan_deg(g, branch, None)? {
                        Scan::Found(x) => Ok(Some(x)),
                        Scan::Zero => Ok(None),
                        Scan::Undecided => unreachable!(),
                    };
                }
                Scan::Undecided => {}
            }
            match scan_deg(g, branch, Some(chunk))? {
                Scan::Found(x) => return Ok(Some(x)),
                Scan::Zero => return Ok(None),
                Scan::Undecided => {}
            }
            chunk *= 2;
        }
    }
    // proper common factor: degrees add across g = d * (g/d)
    let rest = g.exact_div(&d).expect("gcd divides g");
    let dd = resolve_deg(&d, branch, depth + 1)?;
    let dr = resolve_deg(&rest, branch, depth + 1)?;
    Ok(match (dd, dr) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    })
}

/// Degrees of several compositions on one (sub-)branch: a shared first
/// pass at the current depth resolves the typical components from one set
/// of series powers; stragglers go through the factor-splitting resolver.
fn compose_deg_inner(gs: &[MultiPoly], b: &Branch) -> TRes<(Branch, Vec<Option<i64>>)> {
    let mut branch = b.clone();
    let mut results: Vec<Option<Option<i64>>> = vec![None; gs.len()];
    let max_dy = gs
        .iter()
        .flat_map(|g| g.terms().map(|(m, _)| m.0[1]))
        .max()
        .unwrap_or(0);
    let powers = y_powers(&branch.tower, &branch, max_dy);
    for (i, g) in gs.iter().enumerate() {
        if g.is_zero() {
            results[i] = Some(None);
            continue;
        }
        let deg_g = g.total_degree().unwrap() as i64;
        let cutoff = deg_g * (branch.deg_phi() - branch.ambient_degree() as i64) - 1;
        let series = compose_series(&branch.tower, g, &branch, &powers);
        let mut found = false;
        for (e, n) in series.terms.iter().rev() {
            if let Some(v) = series.valid_above {
                if *e <= v {
                    break;
                }
            }
            if branch.tower.unit_test(n)? {
                results[i] = Some(Some(*e));
                found = true;
                break;
            }
        }
        if !found {
            match series.valid_above {
                None => results[i] = Some(None),
                Some(v) if v < cutoff => results[i] = Some(None),
                _ => {}
            }
        }
    }
    for (i, g) in gs.iter().enumerate() {
        if results[i].is_none() {
            results[i] = Some(resolve_deg(g, &mut branch, 0)?);
        }
    }
    Ok((branch, results.into_iter().map(|r| r.unwrap()).collect()))
}

/// deg(g compose Phi) for each g, on a branch of a curve of total degree
/// `ambient_deg`, exactly; `None` encodes -infinity (the branch lies in
/// {g = 0}).
///
/// If the branch's tower turns out to be a product of fields on which some
/// g behaves differently, the class is refined: the result lists each
/// sub-branch with its own degree vector. The common case is one entry.
pub fn compose_deg_many(
    gs: &[MultiPoly],
    b: &Branch,
    ambient_deg: u32,
) -> Result<Vec<(Branch, Vec<Option<i64>>)>> {
    for g in gs {
        if g.num_vars() != 2 {
            return Err(Error::NotBivariate);
        }
    }
    if ambient_deg != b.ambient_degree() {
        return Err(Error::BadParameter(
            "ambient degree does not match the branch's defining curve".into(),
        ));
    }
    fn run(gs: &[MultiPoly], b: &Branch) -> Vec<(Branch, Vec<Option<i64>>)> {
        match compose_deg_inner(gs, b) {
            Ok(pair) => vec![pair],
            Err(split) => resplit(gs, b, &split),
        }
    }
    fn resplit(gs: &[MultiPoly], b: &Branch, split: &Split) -> Vec<(Branch, Vec<Option<i64>>)> {
        b.split(split)
            .into_iter()
            .flat_map(|sub| run(gs, &sub))
            .collect()
    }
    Ok(run(gs, b))
}

/// Single-polynomial composition degree; see [`compose_deg_many`].
pub fn compose_deg(g: &MultiPoly, b: &Branch, ambient_deg: u32) -> Result<Vec<(Branch, Option<i64>)>> {
    Ok(compose_deg_many(std::slice::from_ref(g), b, ambient_deg)?
        .into_iter()
        .map(|(b, mut v)| (b, v.pop().unwrap()))
        .collect())
}
